//! Brauer–Weyl matrices of the complex Clifford algebra and the spinor
//! transposition matrices of the Schur cover.
//!
//! Generators are exact monomial matrices with entries in {0, ±1, ±i}, so
//! Clifford relations are checked without tolerance.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Matrix with exactly one nonzero entry i^phase per column, at row perm[c].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    perm: Vec<usize>,
    phase: Vec<u8>,
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl Monomial {
    pub fn identity(dim: usize) -> Self {
        Monomial { perm: (0..dim).collect(), phase: vec![0; dim] }
    }

    pub fn sigma(k: u8) -> Self {
        match k {
            1 => Monomial { perm: vec![1, 0], phase: vec![0, 0] },
            2 => Monomial { perm: vec![1, 0], phase: vec![1, 3] },
            3 => Monomial { perm: vec![0, 1], phase: vec![0, 2] },
            _ => Monomial::identity(2),
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let perm = rhs.perm.iter().map(|&r| self.perm[r]).collect();
        let phase = rhs.perm.iter().zip(&rhs.phase).map(|(&r, &p)| (self.phase[r] + p) % 4).collect();
        Monomial { perm, phase }
    }

    /// Multiply by i^k.
    pub fn times_i_pow(&self, k: u8) -> Monomial {
        Monomial { perm: self.perm.clone(), phase: self.phase.iter().map(|p| (p + k) % 4).collect() }
    }

    pub fn kron(&self, rhs: &Monomial) -> Monomial {
        let d = rhs.dim();
        let mut perm = Vec::with_capacity(self.dim() * d);
        let mut phase = Vec::with_capacity(self.dim() * d);
        for (ra, pa) in self.perm.iter().zip(&self.phase) {
            for (rb, pb) in rhs.perm.iter().zip(&rhs.phase) {
                perm.push(ra * d + rb);
                phase.push((pa + pb) % 4);
            }
        }
        Monomial { perm, phase }
    }

    /// Block diagonal a ⊕ b.
    pub fn direct_sum(&self, rhs: &Monomial) -> Monomial {
        let n = self.dim();
        let mut perm = self.perm.clone();
        perm.extend(rhs.perm.iter().map(|r| r + n));
        let mut phase = self.phase.clone();
        phase.extend(&rhs.phase);
        Monomial { perm, phase }
    }

    /// Some(k) when self = i^k · Id.
    pub fn as_scalar(&self) -> Option<u8> {
        let p0 = *self.phase.first()?;
        let ok = self.perm.iter().enumerate().all(|(c, &r)| c == r) && self.phase.iter().all(|&p| p == p0);
        ok.then_some(p0)
    }

    /// Some(k) when self = i^k · other.
    pub fn ratio(&self, other: &Monomial) -> Option<u8> {
        if self.perm != other.perm {
            return None;
        }
        let k = (self.phase[0] + 4 - other.phase[0]) % 4;
        self.phase.iter().zip(&other.phase).all(|(a, b)| (a + 4 - b) % 4 == k).then_some(k)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut d = DMatrix::zeros(self.dim(), self.dim());
        for (c, (&r, &p)) in self.perm.iter().zip(&self.phase).enumerate() {
            d[(r, c)] = i_pow(p);
        }
        d
    }

    pub fn to_cmatrix(&self) -> CMatrix<usize> {
        let labels: Vec<usize> = (0..self.dim()).collect();
        CMatrix::from_parts(labels.clone(), labels, self.to_dense()).expect("square")
    }
}

fn kron_all(factors: &[Monomial]) -> Monomial {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.kron(f))
}

/// Generators E_1 … E_n.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordBasis {
    pub n: usize,
    pub generators: Vec<Monomial>,
}

impl CliffordBasis {
    pub fn dim(&self) -> usize {
        self.generators.first().map_or(1, Monomial::dim)
    }
}

pub const CLIFFORD_MAX_N: usize = 20;

/// The printed tensor patterns on m = ⌊n/2⌋ factors: E_i has σ₃ in the
/// first i−1 slots, then σ₁ (i ≤ m) or σ₂ (i > m); for odd n the last
/// generator is σ₃^{⊗m}.
pub fn brauer_weyl_single(n: usize) -> Result<Vec<Monomial>> {
    if n == 0 || n > CLIFFORD_MAX_N {
        return Err(Error::Resource(format!("n = {n} outside 1..={CLIFFORD_MAX_N}")));
    }
    let m = n / 2;
    let mut out = Vec::with_capacity(n);
    for which in [1u8, 2] {
        for i in 0..m {
            let f: Vec<Monomial> = (0..m)
                .map(|s| match s.cmp(&i) {
                    std::cmp::Ordering::Less => Monomial::sigma(3),
                    std::cmp::Ordering::Equal => Monomial::sigma(which),
                    std::cmp::Ordering::Greater => Monomial::identity(2),
                })
                .collect();
            out.push(kron_all(&f));
        }
    }
    if n % 2 == 1 {
        out.push(if m == 0 { Monomial::identity(1) } else { kron_all(&vec![Monomial::sigma(3); m]) });
    }
    Ok(out)
}

/// Faithful Brauer–Weyl basis: the printed matrices for even n; for odd
/// n = 2m+1 the direct sums E_i ⊕ E_i and E_{2m+1} ⊕ (−E_{2m+1}).
pub fn brauer_weyl(n: usize) -> Result<CliffordBasis> {
    let single = brauer_weyl_single(n)?;
    if n % 2 == 0 {
        return Ok(CliffordBasis { n, generators: single });
    }
    let last = single.len() - 1;
    let generators = single
        .iter()
        .enumerate()
        .map(|(i, e)| if i == last { e.direct_sum(&e.times_i_pow(2)) } else { e.direct_sum(e) })
        .collect();
    Ok(CliffordBasis { n, generators })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliffordReport {
    pub n: usize,
    pub dim: usize,
    /// 1-based (i, j) pairs where E_iE_j + E_jE_i ≠ 2δ_ij.
    pub failures: Vec<(usize, usize)>,
    pub span_dim: Option<usize>,
    pub expected_span: usize,
    pub pass: bool,
}

/// Largest n for which the span of all generator products is counted.
pub const SPAN_MAX_N: usize = 12;

fn anticommutes(a: &Monomial, b: &Monomial) -> bool {
    a.mul(b).ratio(&b.mul(a)) == Some(2)
}

/// Exact anticommutator check, plus the dimension of the span of all
/// 2^n ordered products (n ≤ [`SPAN_MAX_N`]).
pub fn verify_clifford(basis: &CliffordBasis) -> CliffordReport {
    let g = &basis.generators;
    let mut failures = Vec::new();
    for i in 0..g.len() {
        for j in i..g.len() {
            let ok = if i == j { g[i].mul(&g[i]).as_scalar() == Some(0) } else { anticommutes(&g[i], &g[j]) };
            if !ok {
                failures.push((i + 1, j + 1));
            }
        }
    }
    let expected_span = 1usize << basis.n;
    let span_dim = (basis.n <= SPAN_MAX_N && g.len() == basis.n).then(|| span_dimension(g));
    let pass = failures.is_empty() && g.len() == basis.n && span_dim.is_none_or(|s| s == expected_span);
    CliffordReport { n: basis.n, dim: basis.dim(), failures, span_dim, expected_span, pass }
}

/// Rank of {E_S : S ⊆ {1..n}}. Monomials with different supports are
/// orthogonal, so the rank is summed over support classes.
fn span_dimension(g: &[Monomial]) -> usize {
    let dim = g[0].dim();
    let mut classes: HashMap<Vec<usize>, Vec<Vec<u8>>> = HashMap::new();
    for mask in 0u32..(1 << g.len()) {
        let mut p = Monomial::identity(dim);
        for (i, e) in g.iter().enumerate() {
            if mask >> i & 1 == 1 {
                p = p.mul(e);
            }
        }
        classes.entry(p.perm).or_default().push(p.phase);
    }
    classes
        .values()
        .map(|vs| {
            let rows = DMatrix::from_fn(vs.len(), dim, |r, c| i_pow(vs[r][c]));
            rows.clone().svd(false, false).rank(1e-9)
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OddSumReport {
    pub m: usize,
    pub summand_dim: usize,
    pub clifford_pass: bool,
    /// ω restricted to the first summand is this scalar (−ω on the second).
    pub omega_first: (f64, f64),
    pub omega_central: bool,
    pub omega_block_scalar: bool,
    pub trials: usize,
    /// Max |ε(AB) − ε(A)ε(B)| over random pairs.
    pub algebra_map_residual: f64,
    /// Max |ε(A − c⁻¹ωA)| over random A in the even subalgebra.
    pub kernel_residual: f64,
    /// Min |A − c⁻¹ωA| over the same samples (kernel elements are nonzero).
    pub kernel_min_norm: f64,
    pub pass: bool,
}

pub const ODD_SUM_MAX_M: usize = 5;

fn block(d: &DMatrix<Complex64>, n: usize, which: usize) -> DMatrix<Complex64> {
    d.view((which * n, which * n), (n, n)).into_owned()
}

fn max_abs(d: &DMatrix<Complex64>) -> f64 {
    d.iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn random_element(rng: &mut ChaCha8Rng, gens: &[DMatrix<Complex64>], dim: usize, terms: usize) -> DMatrix<Complex64> {
    let mut acc = DMatrix::zeros(dim, dim);
    for _ in 0..terms {
        let len = rng.random_range(0..=5);
        let mut w = DMatrix::identity(dim, dim);
        for _ in 0..len {
            w = &w * &gens[rng.random_range(0..gens.len())];
        }
        acc += w * Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    acc
}

/// Direct-sum realization of C_{2m+1} ≅ C_{2m} ⊕ C_{2m} with ε the
/// projection on the first summand.
pub fn odd_direct_sum(m: usize) -> Result<OddSumReport> {
    if m == 0 || m > ODD_SUM_MAX_M {
        return Err(Error::Resource(format!("m = {m} outside 1..={ODD_SUM_MAX_M}")));
    }
    let basis = brauer_weyl(2 * m + 1)?;
    let clifford_pass = verify_clifford(&basis).pass;
    let half = 1usize << m;
    let g = &basis.generators;
    let omega = g.iter().skip(1).fold(g[0].clone(), |acc, e| acc.mul(e));
    let omega_central = g.iter().all(|e| omega.mul(e) == e.mul(&omega));
    let od = omega.to_dense();
    let c = od[(0, 0)];
    let eye = DMatrix::<Complex64>::identity(half, half);
    let omega_block_scalar =
        max_abs(&(block(&od, half, 0) - &eye * c)) == 0.0 && max_abs(&(block(&od, half, 1) + &eye * c)) == 0.0;

    let dense: Vec<DMatrix<Complex64>> = g.iter().map(Monomial::to_dense).collect();
    let even = &dense[..2 * m];
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dd5);
    let trials = 100;
    let mut alg = 0.0f64;
    let mut ker = 0.0f64;
    let mut ker_min = f64::INFINITY;
    for _ in 0..trials {
        let a = random_element(&mut rng, &dense, 2 * half, 4);
        let b = random_element(&mut rng, &dense, 2 * half, 4);
        let lhs = block(&(&a * &b), half, 0);
        let rhs = block(&a, half, 0) * block(&b, half, 0);
        alg = alg.max(max_abs(&(lhs - rhs)));
        let a1 = random_element(&mut rng, even, 2 * half, 4);
        let k = &a1 - (&od * &a1) * c.inv();
        ker = ker.max(max_abs(&block(&k, half, 0)));
        ker_min = ker_min.min(max_abs(&k));
    }
    let pass = clifford_pass && omega_central && omega_block_scalar && alg < 1e-12 && ker < 1e-12 && ker_min > 1e-6;
    Ok(OddSumReport {
        m,
        summand_dim: half,
        clifford_pass,
        omega_first: (c.re, c.im),
        omega_central,
        omega_block_scalar,
        trials,
        algebra_map_residual: alg,
        kernel_residual: ker,
        kernel_min_norm: ker_min,
        pass,
    })
}

/// Spinor transposition matrices t_1 … t_m.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurCoverGens {
    pub m: usize,
    /// Real coefficient vectors over E_1 … E_m.
    pub coeffs: Vec<Vec<f64>>,
    pub t: Vec<CMatrix<usize>>,
    pub e: Vec<CMatrix<usize>>,
}

pub const SCHUR_MAX_M: usize = 10;

/// t_k = sqrt((k−1)/2k)·E_{k−1} − sqrt((k+1)/2k)·E_k, k = 1…m.
pub fn schur_transpositions(m: usize) -> Result<SchurCoverGens> {
    if !(2..=SCHUR_MAX_M).contains(&m) {
        return Err(Error::Resource(format!("m = {m} outside 2..={SCHUR_MAX_M}")));
    }
    let e: Vec<CMatrix<usize>> = brauer_weyl_single(m)?.iter().map(Monomial::to_cmatrix).collect();
    let mut coeffs = Vec::with_capacity(m);
    let mut t = Vec::with_capacity(m);
    for k in 1..=m {
        let kf = k as f64;
        let a = ((kf - 1.0) / (2.0 * kf)).sqrt();
        let b = ((kf + 1.0) / (2.0 * kf)).sqrt();
        let mut c = vec![0.0; m];
        if k > 1 {
            c[k - 2] = a;
        }
        c[k - 1] = -b;
        let mut tk = e[k - 1].scale_re(-b);
        if k > 1 {
            tk = &tk + &e[k - 2].scale_re(a);
        }
        coeffs.push(c);
        t.push(tk);
    }
    Ok(SchurCoverGens { m, coeffs, t, e })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TnReport {
    pub m: usize,
    /// t_k² = s1·Id.
    pub s1: Option<f64>,
    /// (t_j t_{j+1})³ = s2·Id.
    pub s2: Option<f64>,
    /// t_k t_l = s3·t_l t_k, |k − l| ≥ 2 (None when m < 3).
    pub s3: Option<f64>,
    pub max_residual: f64,
    pub unitary_traceless: bool,
    /// Twisted-adjoint action matches the permutation action of S_{m+1}.
    pub permutation_action: Option<bool>,
    pub pass: bool,
}

const SCALAR_TOL: f64 = 1e-12;

/// (λ, residual) with M ≈ λ·Id.
fn scalar_part(mx: &CMatrix<usize>) -> (Complex64, f64) {
    let n = mx.nrows() as f64;
    let lam = mx.trace() / n;
    let resid = (mx - &CMatrix::identity(mx.rows().to_vec()).scale(lam)).max_abs();
    (lam, resid)
}

/// Common real sign of a relation class, if every member is the same ±1 scalar.
fn class_sign(values: &[(Complex64, f64)], max_res: &mut f64) -> Option<f64> {
    let first = values.first()?.0;
    let mut ok = true;
    for (lam, res) in values {
        *max_res = max_res.max(*res).max((lam - first).norm());
        ok &= *res <= SCALAR_TOL && (lam - first).norm() <= SCALAR_TOL;
    }
    let s = first.re.round();
    (ok && (first - s).norm() <= SCALAR_TOL && s.abs() == 1.0).then_some(s)
}

/// Realized scalars of the three relation classes.
pub fn verify_tn_relations(gens: &SchurCoverGens) -> TnReport {
    let t = &gens.t;
    let m = gens.m;
    let mut max_residual = 0.0;
    let sq: Vec<_> = t.iter().map(|x| scalar_part(&(x * x))).collect();
    let braid: Vec<_> = (0..m - 1)
        .map(|j| {
            let p = &t[j] * &t[j + 1];
            scalar_part(&(&(&p * &p) * &p))
        })
        .collect();
    let mut far = Vec::new();
    for k in 0..m {
        for l in (k + 2)..m {
            // t_k t_l = λ t_l t_k with t_l t_k unitary: λ = tr((t_l t_k)† t_k t_l)/dim
            let a = &t[k] * &t[l];
            let b = &t[l] * &t[k];
            far.push(scalar_part(&(&b.adjoint() * &a)));
        }
    }
    let s1 = class_sign(&sq, &mut max_residual);
    let s2 = class_sign(&braid, &mut max_residual);
    let s3 = class_sign(&far, &mut max_residual);
    let unitary_traceless = t.iter().all(|x| {
        let eye = CMatrix::identity(x.rows().to_vec());
        (&(x * &x.adjoint()) - &eye).max_abs() <= SCALAR_TOL && x.trace().norm() <= SCALAR_TOL
    });
    let permutation_action = (m <= 5).then(|| permutation_action_holds(gens, 4));
    let pass = s1.is_some()
        && s2.is_some()
        && (m < 3 || s3.is_some())
        && unitary_traceless
        && permutation_action.unwrap_or(true);
    TnReport { m, s1, s2, s3, max_residual, unitary_traceless, permutation_action, pass }
}

/// Weight vectors w_1 … w_{m+1} over E_1 … E_m with w_k − w_{k+1} = t_k
/// and Σ w = 0.
fn weight_vectors(gens: &SchurCoverGens) -> Vec<Vec<f64>> {
    let m = gens.m;
    let mut w0 = vec![0.0; m];
    for (k, c) in gens.coeffs.iter().enumerate() {
        for i in 0..m {
            w0[i] += (m - k) as f64 * c[i] / (m + 1) as f64;
        }
    }
    let mut out = vec![w0];
    for c in &gens.coeffs {
        let prev = out.last().unwrap();
        out.push(prev.iter().zip(c).map(|(p, x)| p - x).collect());
    }
    out
}

/// Every word t_{k1}…t_{kL} (L ≤ max_len) acts by v ↦ (−1)^L W v W⁻¹ on the
/// weight vectors as the product of transpositions (k1 k1+1)…(kL kL+1).
fn permutation_action_holds(gens: &SchurCoverGens, max_len: usize) -> bool {
    let m = gens.m;
    let ws = weight_vectors(gens);
    let as_matrix = |w: &[f64]| {
        w.iter().zip(&gens.e).fold(gens.e[0].scale_re(0.0), |acc, (c, e)| &acc + &e.scale_re(*c))
    };
    let wm: Vec<CMatrix<usize>> = ws.iter().map(|w| as_matrix(w)).collect();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let next: Vec<Vec<usize>> = words
            .iter()
            .filter(|w| w.len() == words.last().unwrap().len())
            .flat_map(|w| (0..m).map(move |k| [w.as_slice(), &[k]].concat()))
            .collect();
        words.extend(next);
    }
    let eye = CMatrix::identity(gens.t[0].rows().to_vec());
    for word in &words {
        let w = word.iter().fold(eye.clone(), |acc, &k| &acc * &gens.t[k]);
        let winv = word.iter().rev().fold(eye.clone(), |acc, &k| &acc * &gens.t[k]);
        let sign = if word.len() % 2 == 0 { 1.0 } else { -1.0 };
        for (i, v) in wm.iter().enumerate() {
            let image = (&(&w * v) * &winv).scale_re(sign);
            // expected: apply the last transposition first
            let want = word.iter().rev().fold(i, |j, &k| if j == k { k + 1 } else if j == k + 1 { k } else { j });
            if image.max_abs_diff(&wm[want]) > 1e-10 {
                return false;
            }
        }
    }
    true
}
