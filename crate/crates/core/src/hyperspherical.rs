//! Matrix elements of finite-dimensional SL(2,C) representations.
//!
//! Z^l_mn(θ, τ) is computed two ways: a tan/tanh hypergeometric series
//! ([`z_series`]) and the product of the SU(2) and QU(2) factors
//! ([`z_factorized`]). The dotted factor of an (l, l̇) representation is the
//! complex conjugate of the spin-l̇ matrix.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::special::{hyp2f1_term, ln_factorial};
use crate::spin::{enumerate_basis, valid_projection, BasisIndex, GroupPoint, HalfInt};
use crate::su2::{i_pow, jac_p, sph_p};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HypersphericalKey {
    pub l: HalfInt,
    pub m: HalfInt,
    pub n: HalfInt,
}

impl HypersphericalKey {
    pub fn new(l: HalfInt, m: HalfInt, n: HalfInt) -> Result<Self> {
        if valid_projection(l, m) && valid_projection(l, n) {
            Ok(HypersphericalKey { l, m, n })
        } else {
            Err(Error::Domain(format!("invalid key l={l}, m={m}, n={n}")))
        }
    }

    /// All keys of spin l, m then n descending.
    pub fn all(l: HalfInt) -> Vec<Self> {
        l.projections().flat_map(|m| l.projections().map(move |n| HypersphericalKey { l, m, n })).collect()
    }
}

fn lf(n: i32) -> f64 {
    ln_factorial(n as i64).expect("non-negative by construction")
}

/// One factor of the series route:
/// sqrt((l−a)!(l+a)!(l−b)!(l+b)!) · t^{a−b} · Σ_j (sign t²)^j / (j!(l−a−j)!(l+b−j)!(a−b+j)!),
/// summed as a terminating ₂F₁ (reflected when a < b).
fn series_factor(l: HalfInt, a: HalfInt, b: HalfInt, t: f64, sign: f64) -> Result<f64> {
    let x = Complex64::new(sign * t * t, 0.0);
    let ln_norm = 0.5 * (lf(l.int_diff(a)) + lf((l + a).as_int().unwrap()) + lf(l.int_diff(b)) + lf((l + b).as_int().unwrap()));
    let d = a.int_diff(b);
    let (p, q, f) = if d >= 0 {
        // j from 0: ₂F₁(−(l−a), −(l+b); d+1; x) / ((l−a)!(l+b)! d!)
        let (p, q) = (l.int_diff(a), (l + b).as_int().unwrap());
        (p, q, hyp2f1_term(-p as f64, -q as f64, (d + 1) as f64, x)?)
    } else {
        // j from −d: shift j = j' − d
        let (p, q) = (l.int_diff(b), (l + a).as_int().unwrap());
        let f = hyp2f1_term(-p as f64, -q as f64, (1 - d) as f64, x)?;
        (p, q, f * sign.powi(-d))
    };
    let ln_den = lf(p) + lf(q) + lf(d.abs());
    Ok((ln_norm - ln_den).exp() * t.powi(d.abs()) * f.re)
}

/// Z^l_mn by the tan(θ/2), tanh(τ/2) hypergeometric series.
pub fn z_series(key: HypersphericalKey, theta: f64, tau: f64) -> Complex64 {
    let HypersphericalKey { l, m, n } = key;
    let (s, c) = (0.5 * theta).sin_cos();
    let t = s / c;
    let big_t = (0.5 * tau).tanh();
    let pref = c.powi(l.twice()) * (0.5 * tau).cosh().powi(l.twice());
    let mut acc = crate::special::KahanSumC::default();
    for k in l.projections() {
        let a = series_factor(l, m, k, t, -1.0).expect("valid key");
        let b = series_factor(l, n, k, big_t, 1.0).expect("valid key");
        acc.add(i_pow(m.int_diff(k)) * (a * b));
    }
    acc.value() * pref
}

/// Z^l_mn = Σ_k P^l_mk(cos θ) 𝔓^l_kn(cosh τ).
pub fn z_factorized(key: HypersphericalKey, theta: f64, tau: f64) -> Complex64 {
    let HypersphericalKey { l, m, n } = key;
    let mut acc = crate::special::KahanSumC::default();
    for k in l.projections() {
        let p = sph_p(l, m, k, theta).expect("valid key");
        let j = jac_p(l, k, n, tau).expect("valid key");
        acc.add(p * j);
    }
    acc.value()
}

/// 𝔐^l_mn(g) = e^{−m(ε+iφ)} Z^l_mn e^{−n(ϵ̃+iψ)}.
pub fn m_function(key: HypersphericalKey, g: &GroupPoint) -> Complex64 {
    let left = Complex64::new(g.eps, g.phi) * -key.m.value();
    let right = Complex64::new(g.veps, g.psi) * -key.n.value();
    left.exp() * z_factorized(key, g.theta, g.tau) * right.exp()
}

/// [Z^l_mn(θ, τ)], m and n descending.
pub fn z_matrix(l: HalfInt, theta: f64, tau: f64) -> CMatrix {
    let labels: Vec<BasisIndex> = l.projections().map(|m| BasisIndex::undotted(l, m)).collect();
    CMatrix::from_fn(labels.clone(), labels, |r, c| {
        z_factorized(HypersphericalKey { l, m: r.m, n: c.m }, theta, tau)
    })
}

/// [𝔐^l_mn(g)], m and n descending.
pub fn m_matrix(l: HalfInt, g: &GroupPoint) -> CMatrix {
    let labels: Vec<BasisIndex> = l.projections().map(|m| BasisIndex::undotted(l, m)).collect();
    CMatrix::from_fn(labels.clone(), labels, |r, c| m_function(HypersphericalKey { l, m: r.m, n: c.m }, g))
}

/// The explicit 2×2 matrix in its printed layout (row/column 0 is m = −1/2).
pub fn sl1_raw(g: &GroupPoint) -> Matrix2<Complex64> {
    let (s, c) = (0.5 * g.theta).sin_cos();
    let (sh, ch) = ((0.5 * g.tau).sinh(), (0.5 * g.tau).cosh());
    let diag = Complex64::new(c * ch, s * sh);
    let off = Complex64::new(c * sh, s * ch);
    let e = |re: f64, im: f64| Complex64::new(0.5 * re, 0.5 * im).exp();
    Matrix2::new(
        diag * e(g.eps + g.veps, g.phi + g.psi),
        off * e(g.eps - g.veps, g.phi - g.psi),
        off * e(g.veps - g.eps, g.psi - g.phi),
        diag * e(-g.eps - g.veps, -g.phi - g.psi),
    )
}

/// Product of the six Euler factors, printed layout.
pub fn euler_product(g: &GroupPoint) -> Matrix2<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let diag = |w: Complex64| Matrix2::new(w.exp(), z, z, (-w).exp());
    let (s, c) = (0.5 * g.theta).sin_cos();
    let (sh, ch) = ((0.5 * g.tau).sinh(), (0.5 * g.tau).cosh());
    let rot = Matrix2::new(Complex64::new(c, 0.0), Complex64::new(0.0, s), Complex64::new(0.0, s), Complex64::new(c, 0.0));
    let boost = Matrix2::new(Complex64::new(ch, 0.0), Complex64::new(sh, 0.0), Complex64::new(sh, 0.0), Complex64::new(ch, 0.0));
    diag(Complex64::new(0.0, 0.5 * g.phi))
        * diag(Complex64::new(0.5 * g.eps, 0.0))
        * rot
        * boost
        * diag(Complex64::new(0.0, 0.5 * g.psi))
        * diag(Complex64::new(0.5 * g.veps, 0.0))
}

/// Printed layout reversed into m-descending order, as a labeled matrix.
fn raw_to_labeled(raw: &Matrix2<Complex64>) -> CMatrix {
    let half = HalfInt::HALF;
    let labels = vec![BasisIndex::undotted(half, half), BasisIndex::undotted(half, -half)];
    let data = DMatrix::from_fn(2, 2, |i, j| raw[(1 - i, 1 - j)]);
    CMatrix::from_parts(labels.clone(), labels, data).expect("2x2")
}

/// Fundamental representation matrix, m descending (so it equals `m_matrix(1/2, g)`).
pub fn fundamental_matrix(g: &GroupPoint) -> CMatrix {
    raw_to_labeled(&sl1_raw(g))
}

/// Fundamental matrix from the six-factor Euler product.
pub fn fundamental_matrix_euler(g: &GroupPoint) -> CMatrix {
    raw_to_labeled(&euler_product(g))
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Representation matrix of (l, l̇): 𝔐^l(g) ⊗ conj(𝔐^{l̇}(g)), basis from
/// [`enumerate_basis`].
pub fn rep_matrix(l: HalfInt, ldot: HalfInt, g: &GroupPoint) -> Result<CMatrix> {
    let labels = enumerate_basis(l, ldot)?;
    let a = m_matrix(l, g).into_data();
    let b = m_matrix(ldot, g).conj().into_data();
    CMatrix::from_parts(labels.clone(), labels, kron(&a, &b))
}

/// Euler parameters of an SL(2,C) matrix in the printed layout. Any
/// returned tuple reproduces the matrix; degenerate axes get zero angles.
pub fn group_point_from_matrix(g: &Matrix2<Complex64>) -> Result<GroupPoint> {
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let det = a * d - b * c;
    if (det - 1.0).norm() > 1e-9 {
        return Err(Error::Domain(format!("determinant {det} is not 1")));
    }
    let i = Complex64::new(0.0, 1.0);
    let cos_h = (a * d).sqrt();
    let sin_h = (-(b * c)).sqrt();
    // θᶜ/2 with the chosen cos and sin: e^{iθᶜ/2} = cos + i sin
    let half_theta = -i * (cos_h + i * sin_h).ln();
    let tiny = 1e-150;
    // u = φᶜ + ψᶜ, v = φᶜ − ψᶜ
    let u = if cos_h.norm() > tiny { -i * (a / cos_h).ln() * 2.0 } else { Complex64::new(0.0, 0.0) };
    let v = if sin_h.norm() > tiny { -i * (b / (i * sin_h)).ln() * 2.0 } else { Complex64::new(0.0, 0.0) };
    let phi_c = 0.5 * (u + v);
    let psi_c = 0.5 * (u - v);
    let theta_c = 2.0 * half_theta;
    Ok(GroupPoint {
        phi: phi_c.re,
        eps: -phi_c.im,
        theta: theta_c.re,
        tau: -theta_c.im,
        psi: psi_c.re,
        veps: -psi_c.im,
    })
}

/// Parameters of g1·g2.
pub fn compose(g1: &GroupPoint, g2: &GroupPoint) -> Result<GroupPoint> {
    group_point_from_matrix(&(sl1_raw(g1) * sl1_raw(g2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{helicity_ab_op, OperatorKind};
    use crate::spin::h;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> GroupPoint {
        GroupPoint::new(
            rng.random_range(0.0..6.28),
            rng.random_range(-1.0..1.0),
            rng.random_range(0.0..3.1),
            rng.random_range(-1.5..1.5),
            rng.random_range(-6.28..6.28),
            rng.random_range(-1.0..1.0),
        )
    }

    #[test]
    fn identity_gives_delta() {
        for l in (0..=6).map(h) {
            for key in HypersphericalKey::all(l) {
                let want = if key.m == key.n { 1.0 } else { 0.0 };
                assert!((z_series(key, 0.0, 0.0) - want).norm() < 1e-15);
                assert!((m_function(key, &GroupPoint::IDENTITY) - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn spin_half_entry() {
        let key = HypersphericalKey::new(h(1), h(1), h(1)).unwrap();
        let (th, ta): (f64, f64) = (1.1, -0.7);
        let want = Complex64::new((th / 2.0).cos() * (ta / 2.0).cosh(), (th / 2.0).sin() * (ta / 2.0).sinh());
        assert!((z_series(key, th, ta) - want).norm() < 1e-15);
        assert!((z_factorized(key, th, ta) - want).norm() < 1e-15);
    }

    #[test]
    fn factorized_reductions() {
        for key in HypersphericalKey::all(h(3)) {
            let z = z_factorized(key, 0.0, 0.8);
            assert!((z - jac_p(key.l, key.m, key.n, 0.8).unwrap()).norm() < 1e-14);
            let z = z_factorized(key, 0.8, 0.0);
            assert!((z - sph_p(key.l, key.m, key.n, 0.8).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn two_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let l = h(rng.random_range(0..=6));
            let (th, ta) = (rng.random_range(0.0..3.1), rng.random_range(-2.0..2.0));
            for key in HypersphericalKey::all(l) {
                assert!((z_series(key, th, ta) - z_factorized(key, th, ta)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn pure_rotation_phase() {
        let key = HypersphericalKey::new(h(1), h(1), h(1)).unwrap();
        let g = GroupPoint::new(0.9, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!((m_function(key, &g) - Complex64::new(0.0, -0.45).exp()).norm() < 1e-15);
    }

    #[test]
    fn fundamental_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g = random_point(&mut rng);
            let f = fundamental_matrix(&g);
            assert!(f.max_abs_diff(&fundamental_matrix_euler(&g)) < 1e-12);
            assert!(f.max_abs_diff(&m_matrix(h(1), &g)) < 1e-12);
            let det = f.data()[(0, 0)] * f.data()[(1, 1)] - f.data()[(0, 1)] * f.data()[(1, 0)];
            assert!((det - 1.0).norm() < 1e-12);
        }
        let rot = fundamental_matrix(&GroupPoint::new(0.0, 0.0, 0.6, 0.0, 0.0, 0.0));
        let (s, c) = (0.3f64.sin(), 0.3f64.cos());
        assert!((rot.data()[(0, 1)] - Complex64::new(0.0, s)).norm() < 1e-15);
        assert!((rot.data()[(0, 0)] - c).norm() < 1e-15);
        assert!(fundamental_matrix(&GroupPoint::IDENTITY).max_abs_diff(&CMatrix::identity(rot.rows().to_vec())) == 0.0);
    }

    #[test]
    fn rep_matrix_small_cases() {
        let g = GroupPoint::new(0.3, 0.2, 1.0, -0.4, 2.0, 0.1);
        let r = rep_matrix(h(0), h(0), &g).unwrap();
        assert_eq!(r.nrows(), 1);
        assert!((r.data()[(0, 0)] - 1.0).norm() < 1e-15);
        assert!(rep_matrix(h(1), h(0), &g).unwrap().max_abs_diff(&fundamental_matrix(&g)) < 1e-12);
        let u = rep_matrix(h(1), h(1), &GroupPoint::rotation(0.4, 1.2, -0.7)).unwrap();
        let eye = CMatrix::identity(u.rows().to_vec());
        assert!((&u * &u.adjoint()).max_abs_diff(&eye) < 1e-12);
    }

    #[test]
    fn compose_reproduces_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (g1, g2) = (random_point(&mut rng), random_point(&mut rng));
            let g = compose(&g1, &g2).unwrap();
            let prod = sl1_raw(&g1) * sl1_raw(&g2);
            assert!((sl1_raw(&g) - prod).norm() < 1e-10);
        }
        // degenerate axes
        for g in [GroupPoint::IDENTITY, GroupPoint::new(0.0, 0.0, std::f64::consts::PI, 0.0, 0.0, 0.0)] {
            let back = group_point_from_matrix(&sl1_raw(&g)).unwrap();
            assert!((sl1_raw(&back) - sl1_raw(&g)).norm() < 1e-12);
        }
    }

    #[test]
    fn representation_group_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (g1, g2) = (random_point(&mut rng), random_point(&mut rng));
            let g = compose(&g1, &g2).unwrap();
            for (tl, tld) in [(2, 0), (3, 0), (1, 1), (2, 1), (4, 2)] {
                let lhs = &rep_matrix(h(tl), h(tld), &g1).unwrap() * &rep_matrix(h(tl), h(tld), &g2).unwrap();
                let rhs = rep_matrix(h(tl), h(tld), &g).unwrap();
                let scale = 1.0 + rhs.max_abs();
                assert!(lhs.max_abs_diff(&rhs) / scale < 1e-9, "l={tl}/2 ldot={tld}/2");
            }
        }
    }

    #[test]
    fn generators_from_derivatives() {
        let step = 1e-5;
        let d = |l: HalfInt, f: &dyn Fn(f64) -> GroupPoint| {
            let p = m_matrix(l, &f(step));
            let m = m_matrix(l, &f(-step));
            (&p - &m).scale_re(0.5 / step)
        };
        for l in (0..=6).map(h) {
            let a1 = helicity_ab_op(OperatorKind::A1, l).unwrap();
            let b1 = helicity_ab_op(OperatorKind::B1, l).unwrap();
            let a3 = helicity_ab_op(OperatorKind::A3, l).unwrap();
            let dth = d(l, &|x| GroupPoint::new(0.0, 0.0, x, 0.0, 0.0, 0.0));
            let dta = d(l, &|x| GroupPoint::new(0.0, 0.0, 0.0, x, 0.0, 0.0));
            let dph = d(l, &|x| GroupPoint::new(x, 0.0, 0.0, 0.0, 0.0, 0.0));
            assert!(dth.max_abs_diff(&-&a1) < 1e-6);
            assert!(dta.max_abs_diff(&b1) < 1e-6);
            assert!(dph.max_abs_diff(&a3) < 1e-6);
        }
    }
}
