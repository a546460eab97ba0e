//! Separated radial system for a Gel'fand–Yaglom chain.
//!
//! Each subsystem has the form D f′ + (1/r) E f + κ f = 0 over the chain
//! carrier, with D = 2Λ₃. Integration runs on the real slice r* = r.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gy::{CoeffTable, GYSystem, GyIndex, GyMatrix};
use crate::matrix::CMatrix;
use crate::spin::HalfInt;

/// Sign of the diagonal 1/r terms in the l−1 and l+1 brackets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    /// −(l+1)/r and +l/r, as written on each term's own line.
    #[default]
    Literal,
    /// Both signs flipped.
    Alternative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSubsystem {
    /// Weights of f′.
    pub deriv: GyMatrix,
    /// Weights of f/r.
    pub inv_r: GyMatrix,
    pub kappa: Complex64,
}

impl RadialSubsystem {
    pub fn labels(&self) -> &[GyIndex] {
        self.deriv.rows()
    }

    /// Nonzero (d/dr weight, 1/r weight) per (equation, unknown); κ is kept apart.
    pub fn coefficients(&self) -> BTreeMap<(GyIndex, GyIndex), (Complex64, Complex64)> {
        let labels = self.labels();
        let mut out = BTreeMap::new();
        for (i, r) in labels.iter().enumerate() {
            for (j, c) in labels.iter().enumerate() {
                let d = self.deriv.data()[(i, j)];
                let e = self.inv_r.data()[(i, j)];
                if d != Complex64::new(0.0, 0.0) || e != Complex64::new(0.0, 0.0) {
                    out.insert((*r, *c), (d, e));
                }
            }
        }
        out
    }

    /// Left-hand side at one radius given value and derivative.
    pub fn lhs(&self, r: f64, f: &DVector<Complex64>, df: &DVector<Complex64>) -> DVector<Complex64> {
        self.deriv.data() * df + self.inv_r.data() * f * Complex64::new(1.0 / r, 0.0) + f * self.kappa
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSystem {
    pub l0: HalfInt,
    pub l0_dot: HalfInt,
    pub sign: SignConvention,
    pub undotted: RadialSubsystem,
    pub dotted: RadialSubsystem,
}

fn sq(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

/// One subsystem from a coefficient table. `w0` is the spectator weight
/// entering the ladder factors (l̇₀ for the undotted system, l₀ for the dotted).
fn assemble_sub(
    sys: &GYSystem,
    coeffs: &CoeffTable,
    kappa: Complex64,
    w0: HalfInt,
    sign: SignConvention,
) -> Result<RadialSubsystem> {
    coeffs.validate(&sys.chain)?;
    let labels = sys.chain.carrier();
    let mut deriv = CMatrix::square_zeros(labels.clone());
    let mut inv_r = CMatrix::square_zeros(labels.clone());
    let flip = match sign {
        SignConvention::Literal => 1.0,
        SignConvention::Alternative => -1.0,
    };
    let i = Complex64::new(0.0, 1.0);
    let w = w0.value();
    for (key, &c) in &coeffs.0 {
        let ll = key.lp.value();
        for m in key.lp.projections() {
            let mm = m.value();
            let row = GyIndex { k: key.to, l: key.lp, m };
            let s_minus = sq((w + mm) * (w - mm + 1.0));
            let s_plus = sq((w + mm + 1.0) * (w - mm));
            let add = |mat: &mut GyMatrix, dm: i32, v: Complex64| {
                let col = GyIndex { k: key.from, l: key.l, m: m + HalfInt::from_int(dm) };
                if let Some(j) = mat.col_index(&col) {
                    let r = mat.row_index(&row).expect("row in carrier");
                    mat.data_mut()[(r, j)] += v;
                }
            };
            match key.l.int_diff(key.lp) {
                -1 => {
                    let root = sq(ll * ll - mm * mm);
                    add(&mut deriv, 0, c * 2.0 * root);
                    add(&mut inv_r, 0, -c * flip * (ll + 1.0) * root);
                    add(&mut inv_r, -1, i * c * sq((ll + mm) * (ll + mm - 1.0)) * s_minus);
                    add(&mut inv_r, 1, i * c * sq((ll - mm) * (ll - mm - 1.0)) * s_plus);
                }
                0 => {
                    add(&mut deriv, 0, c * 2.0 * mm);
                    add(&mut inv_r, 0, -c * mm);
                    add(&mut inv_r, -1, -i * c * sq((ll + mm) * (ll - mm + 1.0)) * s_minus);
                    add(&mut inv_r, 1, i * c * sq((ll + mm + 1.0) * (ll - mm)) * s_plus);
                }
                _ => {
                    let root = sq((ll + 1.0) * (ll + 1.0) - mm * mm);
                    add(&mut deriv, 0, c * 2.0 * root);
                    add(&mut inv_r, 0, c * flip * ll * root);
                    add(&mut inv_r, -1, -i * c * sq((ll - mm + 1.0) * (ll - mm + 2.0)) * s_minus);
                    add(&mut inv_r, 1, -i * c * sq((ll + mm + 1.0) * (ll + mm + 2.0)) * s_plus);
                }
            }
        }
    }
    Ok(RadialSubsystem { deriv, inv_r, kappa })
}

/// Assemble both subsystems. The dotted projection in the undotted system is
/// read as ṁ = m (and symmetrically), so l₀ and l̇₀ must bound every spin.
pub fn assemble_rfs(sys: &GYSystem, l0: HalfInt, l0_dot: HalfInt, sign: SignConvention) -> Result<RadialSystem> {
    let lmax = sys.chain.carrier().iter().map(|x| x.l).max().unwrap_or(HalfInt::ZERO);
    for (name, w) in [("l0", l0), ("l0_dot", l0_dot)] {
        if w < lmax {
            return Err(Error::Domain(format!("{name} = {w} is below the largest chain spin {lmax}")));
        }
    }
    Ok(RadialSystem {
        l0,
        l0_dot,
        sign,
        undotted: assemble_sub(sys, &sys.coeffs, sys.kappa, l0_dot, sign)?,
        dotted: assemble_sub(sys, &sys.coeffs_dot, sys.kappa_dot, l0, sign)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub grid: Vec<f64>,
    pub labels: Vec<GyIndex>,
    /// values[i][c]: component c at grid[i].
    pub values: Vec<Vec<Complex64>>,
}

impl RadialSolution {
    pub fn new(grid: Vec<f64>, labels: Vec<GyIndex>, values: Vec<Vec<Complex64>>) -> Result<Self> {
        if grid.len() != values.len() || values.iter().any(|v| v.len() != labels.len()) {
            return Err(Error::Dimension("grid, labels and values disagree".into()));
        }
        if grid.first().is_some_and(|&r| !(r > 0.0)) || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("grid must be positive and strictly increasing".into()));
        }
        Ok(RadialSolution { grid, labels, values })
    }

    /// A single unlabeled component, for probing external samples.
    pub fn scalar(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        let label = GyIndex { k: 1, l: HalfInt::ZERO, m: HalfInt::ZERO };
        RadialSolution::new(grid, vec![label], values.into_iter().map(|v| vec![v]).collect())
    }

    pub fn component(&self, c: usize) -> Vec<Complex64> {
        self.values.iter().map(|v| v[c]).collect()
    }
}

/// f′ = P f / r + Q f.
struct Rhs {
    p: DMatrix<Complex64>,
    q: DMatrix<Complex64>,
}

impl Rhs {
    fn new(sub: &RadialSubsystem) -> Result<Self> {
        let n = sub.deriv.nrows();
        let dinv = sub.deriv.data().clone().try_inverse().ok_or_else(|| {
            Error::Singular("derivative weights (2Λ₃) are not invertible; the system has algebraic constraints".into())
        })?;
        let p = -(&dinv * sub.inv_r.data());
        let q = -(&dinv * sub.kappa);
        if p.iter().chain(q.iter()).any(|z| !z.is_finite()) || n == 0 {
            return Err(Error::Singular("derivative weights are ill-conditioned".into()));
        }
        Ok(Rhs { p, q })
    }

    fn eval(&self, r: f64, y: &DVector<Complex64>) -> DVector<Complex64> {
        &self.p * y * Complex64::new(1.0 / r, 0.0) + &self.q * y
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One DP step: (5th-order value, embedded error estimate).
fn dp_step(f: &Rhs, r: f64, y: &DVector<Complex64>, h: f64) -> (DVector<Complex64>, DVector<Complex64>) {
    let mut k: Vec<DVector<Complex64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let mut ys = y.clone();
        for (j, kj) in k.iter().enumerate() {
            if A[s][j] != 0.0 {
                ys += kj * Complex64::new(h * A[s][j], 0.0);
            }
        }
        k.push(f.eval(r + C[s] * h, &ys));
    }
    let mut y5 = y.clone();
    let mut err = DVector::zeros(y.len());
    for s in 0..7 {
        y5 += &k[s] * Complex64::new(h * B5[s], 0.0);
        err += &k[s] * Complex64::new(h * (B5[s] - B4[s]), 0.0);
    }
    (y5, err)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rtol: 1e-10, atol: 1e-10 }
    }
}

/// Adaptive integration sampled on `steps + 1` equally spaced radii.
pub fn integrate(sub: &RadialSubsystem, r0: f64, r1: f64, init: &[Complex64], steps: usize) -> Result<RadialSolution> {
    integrate_with(sub, r0, r1, init, steps, Tolerance::default())
}

pub fn integrate_with(
    sub: &RadialSubsystem,
    r0: f64,
    r1: f64,
    init: &[Complex64],
    steps: usize,
    tol: Tolerance,
) -> Result<RadialSolution> {
    if !(r0 > 0.0) || !r1.is_finite() || !(r1 > r0) {
        return Err(Error::Domain(format!("need 0 < r0 < r1, got r0 = {r0}, r1 = {r1}")));
    }
    if steps < 100 {
        return Err(Error::Domain(format!("steps = {steps} is below 100")));
    }
    let labels = sub.labels().to_vec();
    if init.len() != labels.len() {
        return Err(Error::Dimension(format!("initial vector has {} entries, system has {}", init.len(), labels.len())));
    }
    let f = Rhs::new(sub)?;
    let grid: Vec<f64> = (0..=steps).map(|i| r0 + (r1 - r0) * i as f64 / steps as f64).collect();
    let mut y = DVector::from_column_slice(init);
    let mut values = vec![init.to_vec()];
    let mut r = r0;
    let mut h = ((r1 - r0) / steps as f64).min(1e-2 * r0);
    for &target in &grid[1..] {
        while r < target {
            let last = target - r <= h;
            let hs = if last { target - r } else { h };
            if hs < 1e-14 * r.abs().max(1.0) && !last {
                return Err(Error::StepUnderflow { r });
            }
            let (y5, err) = dp_step(&f, r, &y, hs);
            let mut e: f64 = 0.0;
            for i in 0..y.len() {
                let sc = tol.atol + tol.rtol * y[i].norm().max(y5[i].norm());
                e = e.max(err[i].norm() / sc);
            }
            if !e.is_finite() {
                return Err(Error::StepUnderflow { r });
            }
            if e <= 1.0 {
                r = if last { target } else { r + hs };
                y = y5;
            }
            let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            let hn = hs * factor;
            if e > 1.0 && hn < 1e-14 * r.abs().max(1.0) {
                return Err(Error::StepUnderflow { r });
            }
            // keep the free step length across output points
            if !(last && e <= 1.0) || hn > h {
                h = hn;
            }
        }
        values.push(y.iter().copied().collect());
    }
    RadialSolution::new(grid, labels, values)
}

/// Fixed-step DP5 from r0 to r1 in `n` steps; returns the end value.
pub fn integrate_fixed(sub: &RadialSubsystem, r0: f64, r1: f64, init: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    if !(r0 > 0.0) || !(r1 > r0) || n == 0 {
        return Err(Error::Domain("need 0 < r0 < r1 and n > 0".into()));
    }
    if init.len() != sub.labels().len() {
        return Err(Error::Dimension("initial vector length".into()));
    }
    let f = Rhs::new(sub)?;
    let h = (r1 - r0) / n as f64;
    let mut y = DVector::from_column_slice(init);
    for i in 0..n {
        y = dp_step(&f, r0 + i as f64 * h, &y, h).0;
    }
    Ok(y.iter().copied().collect())
}

/// Richardson estimate log₂(|y_n − y_2n| / |y_2n − y_4n|).
pub fn convergence_order(sub: &RadialSubsystem, r0: f64, r1: f64, init: &[Complex64], n: usize) -> Result<f64> {
    let ys: Vec<Vec<Complex64>> = [n, 2 * n, 4 * n]
        .iter()
        .map(|&k| integrate_fixed(sub, r0, r1, init, k))
        .collect::<Result<_>>()?;
    let dist = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let e1 = dist(&ys[0], &ys[1]);
    let e2 = dist(&ys[1], &ys[2]);
    if e2 == 0.0 {
        return Err(Error::Domain("differences vanish; order is undefined".into()));
    }
    Ok((e1 / e2).log2())
}

/// Weights of the first derivative at `x0` from nodes `xs` (Fornberg).
fn fd_weights(x0: f64, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// |LHS| at each grid point. Derivatives use 5-point central stencils; the two
/// points at each end, where those do not fit, use 7 nearest nodes so the
/// shifted stencil error stays below the interior one.
pub fn residual_profile(sub: &RadialSubsystem, sol: &RadialSolution) -> Result<Vec<f64>> {
    if sol.labels != sub.labels() {
        return Err(Error::Dimension("solution labels do not match the system".into()));
    }
    let n = sol.grid.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let width = if i >= 2 && i + 2 < n { 5 } else { n.min(7) };
        let start = i.saturating_sub(width / 2).min(n - width);
        let nodes = &sol.grid[start..start + width];
        let w = fd_weights(sol.grid[i], nodes);
        let mut df = DVector::zeros(sol.labels.len());
        for (j, wj) in w.iter().enumerate() {
            df += DVector::from_column_slice(&sol.values[start + j]) * Complex64::new(*wj, 0.0);
        }
        let f = DVector::from_column_slice(&sol.values[i]);
        out.push(sub.lhs(sol.grid[i], &f, &df).iter().fold(0.0f64, |m, z| m.max(z.norm())));
    }
    Ok(out)
}

pub fn residual(sub: &RadialSubsystem, sol: &RadialSolution) -> Result<f64> {
    Ok(residual_profile(sub, sol)?.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselReport {
    /// Probed component (largest amplitude).
    pub component: usize,
    pub periods: f64,
    /// Fitted p in envelope ~ r^p.
    pub envelope_exponent: Option<f64>,
    pub wavelength: Option<f64>,
    /// Relative change of the local wavelength between the last two quarters.
    pub wavelength_drift: Option<f64>,
    pub verdict: Verdict,
}

const ENVELOPE_TARGET: f64 = -0.5;
const ENVELOPE_TOL: f64 = 0.1;
const DRIFT_TOL: f64 = 0.05;

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Compare a solution with cylinder-function asymptotics: envelope ~ r^{-1/2}
/// and constant wavelength. No sign change at all fails; fewer than three
/// periods is inconclusive.
pub fn bessel_probe(sol: &RadialSolution) -> BesselReport {
    let ncomp = sol.labels.len();
    let amp = |c: usize| sol.values.iter().fold(0.0f64, |m, v| m.max(v[c].norm()));
    let component = (0..ncomp).max_by(|&a, &b| amp(a).total_cmp(&amp(b))).unwrap_or(0);
    let mut report = BesselReport {
        component,
        periods: 0.0,
        envelope_exponent: None,
        wavelength: None,
        wavelength_drift: None,
        verdict: Verdict::Fail,
    };
    if ncomp == 0 || sol.grid.len() < 5 {
        report.verdict = Verdict::Inconclusive;
        return report;
    }
    let r = &sol.grid;
    let s: Vec<f64> = sol.values.iter().map(|v| v[component].re).collect();
    let mut zeros = Vec::new();
    for i in 1..s.len() {
        if s[i - 1] != 0.0 && s[i - 1].signum() != s[i].signum() {
            zeros.push(r[i - 1] - s[i - 1] * (r[i] - r[i - 1]) / (s[i] - s[i - 1]));
        }
    }
    report.periods = zeros.len() as f64 / 2.0;
    if zeros.is_empty() {
        return report;
    }
    if zeros.len() < 6 {
        report.verdict = Verdict::Inconclusive;
        return report;
    }
    // |s| peaks with parabolic refinement, upper three quarters of the range
    let cut = r[0] + 0.25 * (r[r.len() - 1] - r[0]);
    let a: Vec<f64> = s.iter().map(|x| x.abs()).collect();
    let mut pts = Vec::new();
    for i in 1..a.len() - 1 {
        if a[i] > a[i - 1] && a[i] >= a[i + 1] && r[i] >= cut {
            let denom = a[i - 1] - 2.0 * a[i] + a[i + 1];
            let (dx, peak) = if denom < 0.0 {
                let t = 0.5 * (a[i - 1] - a[i + 1]) / denom;
                (t, a[i] - 0.25 * (a[i - 1] - a[i + 1]) * t)
            } else {
                (0.0, a[i])
            };
            let rr = r[i] + dx * 0.5 * (r[i + 1] - r[i - 1]);
            if peak > 0.0 {
                pts.push((rr.ln(), peak.ln()));
            }
        }
    }
    if pts.len() < 3 {
        report.verdict = Verdict::Inconclusive;
        return report;
    }
    let mx = mean(&pts.iter().map(|p| p.0).collect::<Vec<_>>());
    let my = mean(&pts.iter().map(|p| p.1).collect::<Vec<_>>());
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let half: Vec<f64> = zeros.windows(2).map(|w| w[1] - w[0]).collect();
    let q = half.len() / 4;
    let last = &half[half.len() - q.max(1)..];
    let prev = &half[half.len() - 2 * q.max(1)..half.len() - q.max(1)];
    let wl = 2.0 * mean(last);
    let drift = (mean(last) - mean(prev)).abs() / mean(last);
    report.envelope_exponent = Some(slope);
    report.wavelength = Some(wl);
    report.wavelength_drift = Some(drift);
    report.verdict = if (slope - ENVELOPE_TARGET).abs() <= ENVELOPE_TOL && drift <= DRIFT_TOL {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    report
}
