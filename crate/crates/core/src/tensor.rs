//! Tensor products of (l1, l2) representations: Clebsch–Gordan series,
//! coupled helicity vectors, the spinor bilinear form and one-row
//! symmetrizers.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{waerden_op, OperatorKind};
use crate::matrix::CMatrix;
use crate::spin::{enumerate_basis, BasisIndex, HalfInt};
use crate::su2::{cg_su2, cg_su2_3f2, Cg3f2Form, CgKey};

/// Representation label τ_{l1 l2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RepLabel {
    pub l1: HalfInt,
    pub l2: HalfInt,
}

impl RepLabel {
    pub fn new(l1: HalfInt, l2: HalfInt) -> Result<Self> {
        if l1.is_negative() || l2.is_negative() {
            return Err(Error::Domain(format!("negative label ({l1}, {l2})")));
        }
        Ok(RepLabel { l1, l2 })
    }

    pub fn dim(&self) -> usize {
        ((self.l1.twice() + 1) * (self.l2.twice() + 1)) as usize
    }

    pub fn basis(&self) -> Vec<BasisIndex> {
        enumerate_basis(self.l1, self.l2).expect("validated label")
    }
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l1, self.l2)
    }
}

/// Irreducible components of a ⊗ b, each once.
pub fn cg_series(a: RepLabel, b: RepLabel) -> Vec<RepLabel> {
    let mut out = Vec::new();
    for k in HalfInt::range((a.l1 - b.l1).abs(), a.l1 + b.l1) {
        for kp in HalfInt::range((a.l2 - b.l2).abs(), a.l2 + b.l2) {
            out.push(RepLabel { l1: k, l2: kp });
        }
    }
    out
}

/// Σ dim over [`cg_series`]; equals a.dim()·b.dim().
pub fn series_dimension(a: RepLabel, b: RepLabel) -> usize {
    cg_series(a, b).iter().map(RepLabel::dim).sum()
}

/// SL(2,C) coefficient as the product of two SU(2) factors.
pub fn cg_sl2c(key: CgKey, key_dot: CgKey) -> f64 {
    cg_su2(key) * cg_su2(key_dot)
}

/// Target (l, l′, m, m′) of a coupled vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupledTarget {
    pub l: HalfInt,
    pub lp: HalfInt,
    pub m: HalfInt,
    pub mp: HalfInt,
}

pub type PairLabel = (BasisIndex, BasisIndex);

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledVector {
    pub a: RepLabel,
    pub b: RepLabel,
    pub target: CoupledTarget,
    /// Nonzero amplitudes in product-basis order.
    pub amplitudes: Vec<(PairLabel, f64)>,
}

/// Product basis of a ⊗ b: a-major.
pub fn product_basis(a: RepLabel, b: RepLabel) -> Vec<PairLabel> {
    let bb = b.basis();
    a.basis().into_iter().flat_map(|x| bb.iter().map(move |y| (x, *y))).collect()
}

impl CoupledVector {
    /// Dense column over [`product_basis`].
    pub fn to_dense(&self) -> CMatrix<PairLabel> {
        let rows = product_basis(self.a, self.b);
        let mut v = CMatrix::zeros(rows.clone(), vec![(self.target_label(), self.target_label())]);
        for (p, c) in &self.amplitudes {
            let i = rows.iter().position(|r| r == p).expect("pair in product basis");
            v.data_mut()[(i, 0)] = Complex64::new(*c, 0.0);
        }
        v
    }

    fn target_label(&self) -> BasisIndex {
        BasisIndex { l: self.target.l, m: self.target.m, ldot: self.target.lp, mdot: self.target.mp }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|(_, c)| c * c).sum::<f64>().sqrt()
    }
}

/// z^{ll′}_{mm′} = Σ C(l1,l2,l; j,k,m) C(l1′,l2′,l′; j′,k′,m′) ζ_{jj′} ⊗ ζ_{kk′}.
pub fn coupled_vector(a: RepLabel, b: RepLabel, target: CoupledTarget) -> Result<CoupledVector> {
    let in_series = cg_series(a, b).contains(&RepLabel { l1: target.l, l2: target.lp });
    let valid = crate::spin::valid_projection(target.l, target.m) && crate::spin::valid_projection(target.lp, target.mp);
    if !in_series || !valid {
        return Err(Error::Domain(format!(
            "target ({},{};{},{}) not in {a}⊗{b}",
            target.l, target.m, target.lp, target.mp
        )));
    }
    let mut amplitudes = Vec::new();
    for (x, y) in product_basis(a, b) {
        let c1 = cg_su2(CgKey::new(a.l1, b.l1, target.l, x.m, y.m, target.m));
        let c2 = cg_su2(CgKey::new(a.l2, b.l2, target.lp, x.mdot, y.mdot, target.mp));
        let c = c1 * c2;
        if c != 0.0 {
            amplitudes.push(((x, y), c));
        }
    }
    Ok(CoupledVector { a, b, target, amplitudes })
}

/// op ⊗ 1 + 1 ⊗ op on a ⊗ b for a Waerden (Hermitian) operator kind.
pub fn total_operator(kind: OperatorKind, a: RepLabel, b: RepLabel) -> Result<CMatrix<PairLabel>> {
    let oa = waerden_op(kind, a.l1, a.l2)?.into_data();
    let ob = waerden_op(kind, b.l1, b.l2)?.into_data();
    let ia = DMatrix::<Complex64>::identity(a.dim(), a.dim());
    let ib = DMatrix::<Complex64>::identity(b.dim(), b.dim());
    let data = oa.kronecker(&ib) + ia.kronecker(&ob);
    let labels = product_basis(a, b);
    CMatrix::from_parts(labels.clone(), labels, data)
}

/// λ times the alternating antidiagonal of size (r+k)/2 + 1 with −1 in the
/// top-right corner.
pub fn bilinear_form(k: u32, r: u32, lambda: f64) -> Result<CMatrix<usize>> {
    if (k + r) % 2 != 0 {
        return Err(Error::Domain(format!("k + r = {} is odd", k + r)));
    }
    let n = ((k + r) / 2 + 1) as usize;
    let labels: Vec<usize> = (0..n).collect();
    Ok(CMatrix::from_fn(labels.clone(), labels, |&i, &j| {
        if i + j == n - 1 {
            let s = if i % 2 == 0 { -1.0 } else { 1.0 };
            Complex64::new(lambda * s, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// dim Sym_(k,r) = (k+1)(r+1).
pub fn sym_dimension(k: u32, r: u32) -> u64 {
    (k as u64 + 1) * (r as u64 + 1)
}

pub const SYMMETRIZER_MAX: u32 = 10;

/// (1/m!) Σ_σ P_σ on (C²)^{⊗m}, summed over all permutations (Heap's
/// algorithm). Basis index bit i (from the top) is the i-th tensor factor.
pub fn symmetrizer_one_row(m: u32) -> Result<CMatrix<usize>> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    if m > SYMMETRIZER_MAX {
        return Err(Error::Resource(format!("m = {m} exceeds the cap {SYMMETRIZER_MAX}")));
    }
    let m = m as usize;
    let dim = 1usize << m;
    let mut counts = vec![0u64; dim * dim];
    let mut perm: Vec<usize> = (0..m).collect();
    let mut apply = |p: &[usize]| {
        for s in 0..dim {
            let mut t = 0usize;
            for (i, &pi) in p.iter().enumerate() {
                if s >> (m - 1 - pi) & 1 == 1 {
                    t |= 1 << (m - 1 - i);
                }
            }
            counts[t * dim + s] += 1;
        }
    };
    // Heap's algorithm, iterative
    let mut c = vec![0usize; m];
    apply(&perm);
    let mut total = 1u64;
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            apply(&perm);
            total += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let labels: Vec<usize> = (0..dim).collect();
    let data = DMatrix::from_fn(dim, dim, |r, s| Complex64::new(counts[r * dim + s] as f64 / total as f64, 0.0));
    CMatrix::from_parts(labels.clone(), labels, data)
}

/// Ratio of a closed ₃F₂ form to the Racah value over one (l1, l2, l) triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleRatio {
    pub l1: HalfInt,
    pub l2: HalfInt,
    pub l: HalfInt,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Keys where the closed form is undefined.
    pub undefined: usize,
    /// Keys compared (both values nonzero).
    pub compared: usize,
    /// Keys where exactly one of the two values vanishes.
    pub zero_mismatch: usize,
}

impl TripleRatio {
    /// Constant conversion factor within `tol` (relative).
    pub fn is_constant(&self, tol: f64) -> bool {
        self.undefined == 0
            && self.zero_mismatch == 0
            && (self.compared == 0 || (self.max_ratio - self.min_ratio).abs() <= tol * self.max_ratio.abs().max(1.0))
    }
}

/// Per-triple conversion factors between a closed form and Racah.
pub fn cg_conversion_factors(l1: HalfInt, l2: HalfInt, form: Cg3f2Form) -> Vec<TripleRatio> {
    let mut out = Vec::new();
    for l in HalfInt::range((l1 - l2).abs(), l1 + l2) {
        let mut r = TripleRatio {
            l1,
            l2,
            l,
            min_ratio: f64::INFINITY,
            max_ratio: f64::NEG_INFINITY,
            undefined: 0,
            compared: 0,
            zero_mismatch: 0,
        };
        for key in CgKey::enumerate(l1, l2).into_iter().filter(|k| k.l == l) {
            let racah = cg_su2(key);
            match cg_su2_3f2(key, form) {
                None => r.undefined += 1,
                Some(v) => {
                    let (vz, rz) = (v.abs() < 1e-13, racah.abs() < 1e-13);
                    if vz != rz {
                        r.zero_mismatch += 1;
                    } else if !vz {
                        let q = v / racah;
                        r.min_ratio = r.min_ratio.min(q);
                        r.max_ratio = r.max_ratio.max(q);
                        r.compared += 1;
                    }
                }
            }
        }
        out.push(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::commutator;
    use crate::spin::h;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rl(a: i32, b: i32) -> RepLabel {
        RepLabel::new(h(a), h(b)).unwrap()
    }

    #[test]
    fn series_examples() {
        assert_eq!(cg_series(rl(1, 0), rl(0, 1)), vec![rl(1, 1)]);
        assert_eq!(cg_series(rl(1, 0), rl(1, 0)), vec![rl(0, 0), rl(2, 0)]);
        assert_eq!(cg_series(rl(0, 0), rl(3, 4)), vec![rl(3, 4)]);
        for (a, b) in [(rl(3, 1), rl(2, 5)), (rl(6, 6), rl(1, 3))] {
            assert_eq!(series_dimension(a, b), a.dim() * b.dim());
        }
    }

    #[test]
    fn sl2c_examples() {
        let top = CgKey::new(h(2), h(1), h(3), h(2), h(1), h(3));
        let triv = CgKey::new(h(0), h(0), h(0), h(0), h(0), h(0));
        assert!((cg_sl2c(top, top) - 1.0).abs() < 1e-15);
        let singlet = CgKey::new(h(1), h(1), h(0), h(1), h(-1), h(0));
        assert!((cg_sl2c(singlet, triv) - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(cg_sl2c(CgKey::new(h(1), h(1), h(2), h(1), h(1), h(0)), triv), 0.0);
    }

    #[test]
    fn coupled_examples() {
        let t = CoupledTarget { l: h(2), lp: h(0), m: h(2), mp: h(0) };
        let v = coupled_vector(rl(1, 0), rl(1, 0), t).unwrap();
        assert_eq!(v.amplitudes.len(), 1);
        assert!((v.amplitudes[0].1 - 1.0).abs() < 1e-15);
        let t = CoupledTarget { l: h(0), lp: h(0), m: h(0), mp: h(0) };
        let v = coupled_vector(rl(1, 0), rl(1, 0), t).unwrap();
        let amps: Vec<f64> = v.amplitudes.iter().map(|a| a.1).collect();
        let s = 0.5f64.sqrt();
        assert!((amps[0] - s).abs() < 1e-15 && (amps[1] + s).abs() < 1e-15);
        let bad = CoupledTarget { l: h(4), lp: h(0), m: h(0), mp: h(0) };
        assert!(coupled_vector(rl(1, 0), rl(1, 0), bad).is_err());
    }

    fn all_targets(a: RepLabel, b: RepLabel) -> Vec<CoupledTarget> {
        cg_series(a, b)
            .into_iter()
            .flat_map(|r| {
                r.l1.projections()
                    .flat_map(move |m| r.l2.projections().map(move |mp| CoupledTarget { l: r.l1, lp: r.l2, m, mp }))
            })
            .collect()
    }

    #[test]
    fn coupled_vectors_are_weight_vectors() {
        for (a, b) in [(rl(1, 2), rl(3, 1)), (rl(2, 2), rl(2, 0)), (rl(3, 3), rl(1, 2))] {
            let y3 = total_operator(OperatorKind::Y3, a, b).unwrap();
            let x3 = total_operator(OperatorKind::X3, a, b).unwrap();
            let yp = total_operator(OperatorKind::YPlus, a, b).unwrap();
            let xp = total_operator(OperatorKind::XPlus, a, b).unwrap();
            let ym = total_operator(OperatorKind::YMinus, a, b).unwrap();
            let targets = all_targets(a, b);
            let vecs: Vec<CMatrix<PairLabel>> =
                targets.iter().map(|t| coupled_vector(a, b, *t).unwrap().to_dense()).collect();
            for (t, v) in targets.iter().zip(&vecs) {
                let cv = coupled_vector(a, b, *t).unwrap();
                assert!((cv.norm() - 1.0).abs() < 1e-12);
                assert!((&y3 * v).max_abs_diff(&v.scale_re(t.m.value())) < 1e-12);
                assert!((&x3 * v).max_abs_diff(&v.scale_re(t.mp.value())) < 1e-12);
                if t.m == t.l && t.mp == t.lp {
                    assert!((&yp * v).max_abs() < 1e-12 && (&xp * v).max_abs() < 1e-12);
                }
                if t.m > -t.l {
                    let lower = CoupledTarget { m: t.m - HalfInt::ONE, ..*t };
                    let w = coupled_vector(a, b, lower).unwrap().to_dense();
                    let coeff = crate::generators::lower_coeff(t.l, t.m);
                    let lhs = (&ym * v).data().clone();
                    let rhs = w.data() * Complex64::new(coeff, 0.0);
                    assert!((lhs - rhs).iter().fold(0.0f64, |m, z| m.max(z.norm())) < 1e-12);
                }
            }
            for i in 0..vecs.len() {
                for j in 0..i {
                    let ip: Complex64 = vecs[i].data().iter().zip(vecs[j].data().iter()).map(|(x, y)| x.conj() * y).sum();
                    assert!(ip.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bilinear_examples() {
        let i = bilinear_form(1, 1, 1.0).unwrap();
        assert!(i.max_abs_diff(&i.transpose().scale_re(-1.0)) == 0.0);
        assert_eq!(i.data()[(0, 1)].re, -1.0);
        assert!(bilinear_form(2, 2, 1.0).unwrap().transpose() == bilinear_form(2, 2, 1.0).unwrap());
        assert_eq!(bilinear_form(3, 1, 0.0).unwrap().max_abs(), 0.0);
        assert!(bilinear_form(1, 2, 1.0).is_err());
        for kr in (0..12).step_by(2) {
            let f = bilinear_form(kr, 0, 2.0).unwrap();
            let sym = (kr / 2) % 2 == 0;
            let want = if sym { f.transpose() } else { f.transpose().scale_re(-1.0) };
            assert_eq!(f.max_abs_diff(&want), 0.0);
        }
    }

    #[test]
    fn sym_dimension_examples() {
        assert_eq!(sym_dimension(0, 0), 1);
        assert_eq!(sym_dimension(5, 0), 6);
        assert_eq!(sym_dimension(2, 3), 12);
    }

    fn binom(n: u32, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn symmetrizer_properties() {
        let p1 = symmetrizer_one_row(1).unwrap();
        assert_eq!(p1.max_abs_diff(&CMatrix::identity(vec![0, 1])), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in 2..=6u32 {
            let p = symmetrizer_one_row(m).unwrap();
            assert!((&p * &p).max_abs_diff(&p) < 1e-12);
            assert!((p.trace().re - (m + 1) as f64).abs() < 1e-12);
            // oracle: equal Hamming weight w ↦ 1/C(m, w)
            for r in 0..(1usize << m) {
                for s in 0..(1usize << m) {
                    let (wr, ws) = (r.count_ones(), s.count_ones());
                    let want = if wr == ws { 1.0 / binom(m, wr) } else { 0.0 };
                    assert!((p.data()[(r, s)].re - want).abs() < 1e-12);
                }
            }
            let g = DMatrix::from_fn(2, 2, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let mut gm = g.clone();
            for _ in 1..m {
                gm = gm.kronecker(&g);
            }
            let gm = CMatrix::from_parts(p.rows().to_vec(), p.cols().to_vec(), gm).unwrap();
            assert!(commutator(&p, &gm).max_abs() < 1e-10);
        }
        assert!(matches!(symmetrizer_one_row(11), Err(Error::Resource(_))));
    }

    #[test]
    fn conversion_factor_report() {
        for (a, b) in [(1, 1), (2, 3), (4, 2)] {
            for r in cg_conversion_factors(h(a), h(b), Cg3f2Form::Corrected) {
                assert!(r.is_constant(1e-12), "{r:?}");
                assert!((r.max_ratio - 1.0).abs() < 1e-12);
            }
        }
        let printed = cg_conversion_factors(h(2), h(2), Cg3f2Form::Printed);
        assert!(printed.iter().any(|r| !r.is_constant(1e-6)));
    }
}
