//! Infinitesimal operators of the Lorentz group in three bases: Van der
//! Waerden ladder operators, helicity-basis A/B (and their tilde partners),
//! and Gel'fand–Naimark H/F operators, with the maps between them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{commutator, CMatrix};
use crate::spin::{enumerate_basis, BasisIndex, HalfInt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    At1,
    At2,
    At3,
    Bt1,
    Bt2,
    Bt3,
    XPlus,
    XMinus,
    X3,
    YPlus,
    YMinus,
    Y3,
    HPlus,
    HMinus,
    H3,
    FPlus,
    FMinus,
    F3,
}

use OperatorKind::*;

impl OperatorKind {
    pub const ALL: [OperatorKind; 24] = [
        A1, A2, A3, B1, B2, B3, At1, At2, At3, Bt1, Bt2, Bt3, XPlus, XMinus, X3, YPlus, YMinus, Y3,
        HPlus, HMinus, H3, FPlus, FMinus, F3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            A1 => "A1",
            A2 => "A2",
            A3 => "A3",
            B1 => "B1",
            B2 => "B2",
            B3 => "B3",
            At1 => "At1",
            At2 => "At2",
            At3 => "At3",
            Bt1 => "Bt1",
            Bt2 => "Bt2",
            Bt3 => "Bt3",
            XPlus => "X+",
            XMinus => "X-",
            X3 => "X3",
            YPlus => "Y+",
            YMinus => "Y-",
            Y3 => "Y3",
            HPlus => "H+",
            HMinus => "H-",
            H3 => "H3",
            FPlus => "F+",
            FMinus => "F-",
            F3 => "F3",
        }
    }

    fn is_waerden(self) -> bool {
        matches!(self, XPlus | XMinus | X3 | YPlus | YMinus | Y3)
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().replace('Ã', "At").replace('B', "B").replace("B̃", "Bt").replace('−', "-");
        OperatorKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(&t))
            .ok_or_else(|| Error::Parse(format!("unknown operator {s:?}")))
    }
}

pub type OpMap = BTreeMap<OperatorKind, CMatrix>;

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// sqrt((j − m)(j + m + 1)): raising coefficient m → m+1.
pub fn raise_coeff(j: HalfInt, m: HalfInt) -> f64 {
    let p = ((j - m).twice() as i64) * ((j + m).twice() as i64 + 2);
    ((p as f64) / 4.0).sqrt()
}

/// sqrt((j + m)(j − m + 1)): lowering coefficient m → m−1.
pub fn lower_coeff(j: HalfInt, m: HalfInt) -> f64 {
    raise_coeff(j, -m)
}

/// sqrt(a·b) for half-integer factors whose product is integral.
fn sqrt_prod(a: HalfInt, b: HalfInt) -> f64 {
    ((a.twice() as i64 * b.twice() as i64) as f64 / 4.0).sqrt()
}

/// Van der Waerden action on |l,m; l̇,ṁ⟩ (Hermitian ladder convention):
/// X acts on ṁ, Y on m.
pub fn waerden_op(kind: OperatorKind, l: HalfInt, ldot: HalfInt) -> Result<CMatrix> {
    if !kind.is_waerden() {
        return Err(Error::Domain(format!("{kind} is not a Waerden operator")));
    }
    let basis = enumerate_basis(l, ldot)?;
    let mut out = CMatrix::square_zeros(basis.clone());
    let one = HalfInt::ONE;
    for b in &basis {
        let (target, v) = match kind {
            X3 => (*b, b.mdot.value()),
            Y3 => (*b, b.m.value()),
            XPlus => (BasisIndex { mdot: b.mdot + one, ..*b }, raise_coeff(ldot, b.mdot)),
            XMinus => (BasisIndex { mdot: b.mdot - one, ..*b }, lower_coeff(ldot, b.mdot)),
            YPlus => (BasisIndex { m: b.m + one, ..*b }, raise_coeff(l, b.m)),
            YMinus => (BasisIndex { m: b.m - one, ..*b }, lower_coeff(l, b.m)),
            _ => unreachable!(),
        };
        if v != 0.0 {
            out.set(&target, b, cz(v, 0.0))?;
        }
    }
    Ok(out)
}

/// Spin-l tridiagonal operator: ξ_m ↦ down·α_m ξ_{m−1} + up·α_{m+1} ξ_{m+1} + diag·m ξ_m.
fn tridiag(l: HalfInt, down: Complex64, up: Complex64, diag: Complex64) -> CMatrix {
    let basis: Vec<BasisIndex> = l.projections().map(|m| BasisIndex::undotted(l, m)).collect();
    let mut out = CMatrix::square_zeros(basis.clone());
    let data = out.data_mut();
    let n = basis.len();
    for (c, b) in basis.iter().enumerate() {
        let m = b.m;
        data[(c, c)] = diag * m.value();
        // m descending: ξ_{m−1} sits one row below, ξ_{m+1} one row above
        if c + 1 < n {
            data[(c + 1, c)] = down * lower_coeff(l, m);
        }
        if c > 0 {
            data[(c - 1, c)] = up * raise_coeff(l, m);
        }
    }
    out
}

/// Helicity-basis operators A, B and the tilde set, as printed.
pub fn helicity_ab_op(kind: OperatorKind, l: HalfInt) -> Result<CMatrix> {
    if l.is_negative() {
        return Err(Error::Domain(format!("negative spin {l}")));
    }
    let z = cz(0.0, 0.0);
    let (down, up, diag) = match kind {
        A1 => (cz(0.0, -0.5), cz(0.0, -0.5), z),
        A2 => (cz(0.5, 0.0), cz(-0.5, 0.0), z),
        A3 => (z, z, cz(0.0, -1.0)),
        B1 => (cz(0.5, 0.0), cz(0.5, 0.0), z),
        B2 => (cz(0.0, 0.5), cz(0.0, -0.5), z),
        B3 => (z, z, cz(1.0, 0.0)),
        At1 => (cz(0.0, 0.5), cz(0.0, 0.5), z),
        At2 => (cz(-0.5, 0.0), cz(0.5, 0.0), z),
        At3 => (z, z, cz(0.0, 1.0)),
        Bt1 => (cz(-0.5, 0.0), cz(-0.5, 0.0), z),
        Bt2 => (cz(0.0, -0.5), cz(0.0, 0.5), z),
        Bt3 => (z, z, cz(-1.0, 0.0)),
        _ => return Err(Error::Domain(format!("{kind} is not a helicity A/B operator"))),
    };
    Ok(tridiag(l, down, up, diag))
}

/// The six A/B (or, with `tilde`, Ã/B̃) matrices at spin l.
pub fn helicity_set(l: HalfInt, tilde: bool) -> Result<OpMap> {
    let kinds = if tilde { [At1, At2, At3, Bt1, Bt2, Bt3] } else { [A1, A2, A3, B1, B2, B3] };
    kinds.iter().map(|&k| Ok((k, helicity_ab_op(k, l)?))).collect()
}

/// Finite-dimensional Gel'fand–Naimark representation: l1 = l0 + p,
/// carrier l = l0 … l1 − 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnRep {
    pub l0: HalfInt,
    pub p: u32,
}

impl GnRep {
    pub fn new(l0: HalfInt, p: u32) -> Result<Self> {
        if l0.is_negative() || p == 0 {
            return Err(Error::Domain(format!("invalid GN label l0={l0}, p={p}")));
        }
        Ok(GnRep { l0, p })
    }

    pub fn l1(&self) -> HalfInt {
        self.l0 + HalfInt::from_int(self.p as i32)
    }

    /// Carrier labels (l ascending, m descending).
    pub fn basis(&self) -> Vec<BasisIndex> {
        let top = self.l1() - HalfInt::ONE;
        HalfInt::range(self.l0, top)
            .flat_map(|l| l.projections().map(move |m| BasisIndex::undotted(l, m)))
            .collect()
    }

    /// A_l = i l0 l1 / (l(l+1)); `None` at l = 0 where it is undefined.
    pub fn a_coeff(&self, l: HalfInt) -> Option<Complex64> {
        let lv = l.value();
        (l != HalfInt::ZERO).then(|| cz(0.0, self.l0.value() * self.l1().value() / (lv * (lv + 1.0))))
    }

    /// C_l = (i/l) sqrt((l²−l0²)(l²−l1²)/(4l²−1)), principal complex root.
    pub fn c_coeff(&self, l: HalfInt) -> Complex64 {
        // vanishes at l = l0 and is never needed past l1
        if l <= self.l0 || l > self.l1() {
            return cz(0.0, 0.0);
        }
        let lv = l.value();
        let (l0, l1) = (self.l0.value(), self.l1().value());
        let arg = (lv * lv - l0 * l0) * (lv * lv - l1 * l1) / (4.0 * lv * lv - 1.0);
        cz(0.0, 1.0 / lv) * cz(arg, 0.0).sqrt()
    }
}

/// Gel'fand–Naimark operator matrix.
pub fn gn_op(kind: OperatorKind, rep: GnRep) -> Result<CMatrix> {
    let basis = rep.basis();
    let mut out = CMatrix::square_zeros(basis.clone());
    let one = HalfInt::ONE;
    let z = cz(0.0, 0.0);
    for b in &basis {
        let (l, m) = (b.l, b.m);
        let lv = l.value();
        let mv = m.value();
        let cl = rep.c_coeff(l);
        let cl1 = rep.c_coeff(l + one);
        // A_l always multiplies a factor that vanishes at l = 0.
        let al = rep.a_coeff(l).unwrap_or(z);
        let mut terms: Vec<(HalfInt, HalfInt, Complex64)> = Vec::new();
        match kind {
            H3 => terms.push((l, m, cz(mv, 0.0))),
            HPlus => terms.push((l, m + one, cz(raise_coeff(l, m), 0.0))),
            HMinus => terms.push((l, m - one, cz(lower_coeff(l, m), 0.0))),
            F3 => {
                terms.push((l - one, m, cl * (lv * lv - mv * mv).max(0.0).sqrt()));
                if l != HalfInt::ZERO {
                    terms.push((l, m, -al * mv));
                }
                terms.push((l + one, m, -cl1 * ((lv + 1.0) * (lv + 1.0) - mv * mv).sqrt()));
            }
            FPlus => {
                terms.push((l - one, m + one, cl * sqrt_prod(l - m, l - m - one)));
                if l != HalfInt::ZERO {
                    terms.push((l, m + one, -al * sqrt_prod(l - m, l + m + one)));
                }
                terms.push((l + one, m + one, cl1 * sqrt_prod(l + m + one, l + m + HalfInt::from_int(2))));
            }
            FMinus => {
                terms.push((l - one, m - one, -cl * sqrt_prod(l + m, l + m - one)));
                if l != HalfInt::ZERO {
                    terms.push((l, m - one, -al * sqrt_prod(l + m, l - m + one)));
                }
                terms.push((l + one, m - one, -cl1 * sqrt_prod(l - m + one, l - m + HalfInt::from_int(2))));
            }
            _ => return Err(Error::Domain(format!("{kind} is not a GN operator"))),
        }
        for (tl, tm, v) in terms {
            let target = BasisIndex::undotted(tl, tm);
            if v != z {
                if let Some(i) = out.row_index(&target) {
                    let j = out.col_index(b).unwrap();
                    out.data_mut()[(i, j)] += v;
                }
            }
        }
    }
    Ok(out)
}

/// All six GN operators.
pub fn gn_set(rep: GnRep) -> Result<OpMap> {
    [H3, HPlus, HMinus, F3, FPlus, FMinus].iter().map(|&k| Ok((k, gn_op(k, rep)?))).collect()
}

fn need(ops: &OpMap, k: OperatorKind) -> Result<&CMatrix> {
    ops.get(&k).ok_or_else(|| Error::MissingOperator(k.to_string()))
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Cartesian (k = 1, 2) from ladder operators in the anti-Hermitian
/// convention: X± = X1 ± iX2.
fn from_ladders(plus: &CMatrix, minus: &CMatrix) -> (CMatrix, CMatrix) {
    let k1 = (plus + minus).scale_re(0.5);
    let k2 = (plus - minus).scale(cz(0.0, -0.5));
    (k1, k2)
}

/// H/F → X/Y via the printed relations, plus A_k = X_k + Y_k and
/// B_k = −i(X_k − Y_k).
pub fn basis_change(gn: &OpMap) -> Result<OpMap> {
    let (hp, hm, h3) = (need(gn, HPlus)?, need(gn, HMinus)?, need(gn, H3)?);
    let (fp, fm, f3) = (need(gn, FPlus)?, need(gn, FMinus)?, need(gn, F3)?);
    let shapes = [hp, hm, h3, fp, fm, f3];
    if shapes.iter().any(|m| !m.same_shape(h3)) {
        return Err(Error::Dimension("GN operators differ in shape".into()));
    }
    let y = |f: &CMatrix, h: &CMatrix| (f + &h.scale(I)).scale_re(-0.5);
    let x = |f: &CMatrix, h: &CMatrix| (f - &h.scale(I)).scale_re(0.5);
    let mut out = OpMap::new();
    out.insert(YPlus, y(fp, hp));
    out.insert(YMinus, y(fm, hm));
    out.insert(Y3, y(f3, h3));
    out.insert(XPlus, x(fp, hp));
    out.insert(XMinus, x(fm, hm));
    out.insert(X3, x(f3, h3));
    let ab = ab_from_xy(&out)?;
    out.extend(ab);
    Ok(out)
}

/// Inverse of the printed map: F = X − Y, H = i(X + Y).
pub fn basis_change_inverse(xy: &OpMap) -> Result<OpMap> {
    let mut out = OpMap::new();
    for (xk, yk, hk, fk) in [(XPlus, YPlus, HPlus, FPlus), (XMinus, YMinus, HMinus, FMinus), (X3, Y3, H3, F3)] {
        let (x, y) = (need(xy, xk)?, need(xy, yk)?);
        out.insert(fk, x - y);
        out.insert(hk, (x + y).scale(I));
    }
    Ok(out)
}

/// A_k, B_k from anti-Hermitian ladder X/Y operators.
pub fn ab_from_xy(xy: &OpMap) -> Result<OpMap> {
    let (x1, x2) = from_ladders(need(xy, XPlus)?, need(xy, XMinus)?);
    let (y1, y2) = from_ladders(need(xy, YPlus)?, need(xy, YMinus)?);
    let xs = [x1, x2, need(xy, X3)?.clone()];
    let ys = [y1, y2, need(xy, Y3)?.clone()];
    let mut out = OpMap::new();
    for k in 0..3 {
        out.insert([A1, A2, A3][k], &xs[k] + &ys[k]);
        out.insert([B1, B2, B3][k], (&xs[k] - &ys[k]).scale(-I));
    }
    Ok(out)
}

/// X_k = ½(A_k + iB_k), Y_k = ½(A_k − iB_k) as ladder operators
/// X± = X1 ± iX2 (anti-Hermitian convention).
pub fn xy_from_ab(ab: &OpMap, tilde: bool) -> Result<OpMap> {
    let (ak, bk) = if tilde { ([At1, At2, At3], [Bt1, Bt2, Bt3]) } else { ([A1, A2, A3], [B1, B2, B3]) };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..3 {
        let (a, b) = (need(ab, ak[k])?, need(ab, bk[k])?);
        xs.push((a + &b.scale(I)).scale_re(0.5));
        ys.push((a - &b.scale(I)).scale_re(0.5));
    }
    let mut out = OpMap::new();
    out.insert(XPlus, &xs[0] + &xs[1].scale(I));
    out.insert(XMinus, &xs[0] - &xs[1].scale(I));
    out.insert(X3, xs[2].clone());
    out.insert(YPlus, &ys[0] + &ys[1].scale(I));
    out.insert(YMinus, &ys[0] - &ys[1].scale(I));
    out.insert(Y3, ys[2].clone());
    Ok(out)
}

/// Multiply every matrix by `factor`; with −i this turns the Hermitian
/// Waerden ladders into the anti-Hermitian convention.
pub fn scale_ops(ops: &OpMap, factor: Complex64) -> OpMap {
    ops.iter().map(|(k, m)| (*k, m.scale(factor))).collect()
}

/// All six Waerden matrices at (l, l̇), Hermitian convention.
pub fn waerden_set(l: HalfInt, ldot: HalfInt) -> Result<OpMap> {
    [XPlus, XMinus, X3, YPlus, YMinus, Y3].iter().map(|&k| Ok((k, waerden_op(k, l, ldot)?))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationSet {
    /// The 18 A/B commutators.
    Com1,
    /// The Com1 table with every structure constant negated, on Ã/B̃.
    Com1Reversed,
    /// Com1 read literally on Ã/B̃ (informational).
    Com1Tilde,
    /// Two commuting su(2) sets, cyclic third relation, anti-Hermitian ladders.
    Com2,
    /// Com2 with the third X relation as printed, [X2, X1] = X2.
    Com2Printed,
    /// Ladder relations of the Hermitian Waerden matrices.
    WaerdenConsistency,
}

type Rel = (String, CMatrix);

fn rel(name: String, lhs: CMatrix, rhs: CMatrix) -> Rel {
    (name, &lhs - &rhs)
}

fn com1_relations(a: [&CMatrix; 3], b: [&CMatrix; 3], sign: f64, names: (&str, &str)) -> Vec<Rel> {
    let (an, bn) = names;
    let zero = a[0].scale_re(0.0);
    let s = |m: &CMatrix, f: f64| m.scale_re(sign * f);
    let mut out = Vec::new();
    // cyclic (i, j, k)
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        out.push(rel(format!("[{an}{},{an}{}]={an}{}", i + 1, j + 1, k + 1), commutator(a[i], a[j]), s(a[k], 1.0)));
        out.push(rel(format!("[{bn}{},{bn}{}]=-{an}{}", i + 1, j + 1, k + 1), commutator(b[i], b[j]), s(a[k], -1.0)));
    }
    for i in 0..3 {
        out.push(rel(format!("[{an}{},{bn}{}]=0", i + 1, i + 1), commutator(a[i], b[i]), zero.clone()));
    }
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        out.push(rel(format!("[{an}{},{bn}{}]={bn}{}", i + 1, j + 1, k + 1), commutator(a[i], b[j]), s(b[k], 1.0)));
        out.push(rel(format!("[{an}{},{bn}{}]=-{bn}{}", i + 1, k + 1, j + 1), commutator(a[i], b[k]), s(b[j], -1.0)));
    }
    out
}

fn cartesian(ops: &OpMap, plus: OperatorKind, minus: OperatorKind, three: OperatorKind) -> Result<[CMatrix; 3]> {
    let (k1, k2) = from_ladders(need(ops, plus)?, need(ops, minus)?);
    Ok([k1, k2, need(ops, three)?.clone()])
}

fn relations(ops: &OpMap, set: RelationSet) -> Result<Vec<Rel>> {
    match set {
        RelationSet::Com1 => {
            let a = [need(ops, A1)?, need(ops, A2)?, need(ops, A3)?];
            let b = [need(ops, B1)?, need(ops, B2)?, need(ops, B3)?];
            Ok(com1_relations(a, b, 1.0, ("A", "B")))
        }
        RelationSet::Com1Reversed | RelationSet::Com1Tilde => {
            let a = [need(ops, At1)?, need(ops, At2)?, need(ops, At3)?];
            let b = [need(ops, Bt1)?, need(ops, Bt2)?, need(ops, Bt3)?];
            let sign = if set == RelationSet::Com1Tilde { 1.0 } else { -1.0 };
            Ok(com1_relations(a, b, sign, ("At", "Bt")))
        }
        RelationSet::Com2 | RelationSet::Com2Printed => {
            let x = cartesian(ops, XPlus, XMinus, X3)?;
            let y = cartesian(ops, YPlus, YMinus, Y3)?;
            let mut out = Vec::new();
            for (n, v) in [("X", &x), ("Y", &y)] {
                out.push(rel(format!("[{n}1,{n}2]={n}3"), commutator(&v[0], &v[1]), v[2].clone()));
                out.push(rel(format!("[{n}2,{n}3]={n}1"), commutator(&v[1], &v[2]), v[0].clone()));
                if set == RelationSet::Com2Printed && n == "X" {
                    out.push(rel("[X2,X1]=X2".into(), commutator(&v[1], &v[0]), v[1].clone()));
                } else {
                    out.push(rel(format!("[{n}3,{n}1]={n}2"), commutator(&v[2], &v[0]), v[1].clone()));
                }
            }
            let zero = x[0].scale_re(0.0);
            for k in 0..3 {
                for l in 0..3 {
                    out.push(rel(format!("[X{},Y{}]=0", k + 1, l + 1), commutator(&x[k], &y[l]), zero.clone()));
                }
            }
            Ok(out)
        }
        RelationSet::WaerdenConsistency => {
            let mut out = Vec::new();
            for (n, p, m, t) in [("X", XPlus, XMinus, X3), ("Y", YPlus, YMinus, Y3)] {
                let (p, m, t) = (need(ops, p)?, need(ops, m)?, need(ops, t)?);
                out.push(rel(format!("[{n}3,{n}+]={n}+"), commutator(t, p), p.clone()));
                out.push(rel(format!("[{n}3,{n}-]=-{n}-"), commutator(t, m), -m));
                out.push(rel(format!("[{n}+,{n}-]=2{n}3"), commutator(p, m), t.scale_re(2.0)));
            }
            let zero = need(ops, X3)?.scale_re(0.0);
            for xk in [XPlus, XMinus, X3] {
                for yk in [YPlus, YMinus, Y3] {
                    out.push(rel(format!("[{xk},{yk}]=0"), commutator(need(ops, xk)?, need(ops, yk)?), zero.clone()));
                }
            }
            Ok(out)
        }
    }
}

/// Residual ‖lhs − rhs‖∞ of every relation in the set, by name.
pub fn relation_residuals(ops: &OpMap, set: RelationSet) -> Result<Vec<(String, f64)>> {
    Ok(relations(ops, set)?.into_iter().map(|(n, d)| (n, d.max_abs())).collect())
}

/// Max residual over the relation set.
pub fn commutator_residual(ops: &OpMap, set: RelationSet) -> Result<f64> {
    Ok(relation_residuals(ops, set)?.into_iter().fold(0.0, |m, (_, r)| m.max(r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::h;

    #[test]
    fn waerden_examples() {
        let x3 = waerden_op(X3, h(1), h(1)).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| x3.data()[(i, i)].re).collect();
        assert_eq!(diag, vec![0.5, -0.5, 0.5, -0.5]);
        assert_eq!(waerden_op(YPlus, h(0), h(1)).unwrap().max_abs(), 0.0);
        assert_eq!(waerden_op(YMinus, h(0), h(1)).unwrap().max_abs(), 0.0);
        let xp = waerden_op(XPlus, h(0), h(1)).unwrap();
        assert_eq!(xp.data()[(0, 1)], cz(1.0, 0.0));
        assert_eq!(xp.data().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert!(waerden_op(A1, h(1), h(1)).is_err());
    }

    #[test]
    fn helicity_examples() {
        let a3 = helicity_ab_op(A3, h(1)).unwrap();
        assert_eq!(a3.data()[(0, 0)], cz(0.0, -0.5));
        assert_eq!(a3.data()[(1, 1)], cz(0.0, 0.5));
        let b3 = helicity_ab_op(B3, h(1)).unwrap();
        assert_eq!((b3.data()[(0, 0)].re, b3.data()[(1, 1)].re), (0.5, -0.5));
        let a1 = helicity_ab_op(A1, h(1)).unwrap();
        assert_eq!(a1.data()[(0, 1)], cz(0.0, -0.5));
        assert_eq!(a1.data()[(1, 0)], cz(0.0, -0.5));
        assert_eq!(a1.data()[(0, 0)], cz(0.0, 0.0));
    }

    #[test]
    fn helicity_com1_and_structure() {
        for tl in 0..=6 {
            let ops = helicity_set(h(tl), false).unwrap();
            assert!(commutator_residual(&ops, RelationSet::Com1).unwrap() < 1e-12);
            // X = ½(A + iB) vanishes, Y = A
            let xy = xy_from_ab(&ops, false).unwrap();
            assert!(xy[&X3].max_abs() < 1e-15 && xy[&XPlus].max_abs() < 1e-15);
            assert!(xy[&Y3].max_abs_diff(&ops[&A3]) < 1e-15);
        }
    }

    #[test]
    fn tilde_set_follows_reversed_table() {
        for tl in 1..=6 {
            let ops = helicity_set(h(tl), true).unwrap();
            assert!(commutator_residual(&ops, RelationSet::Com1Reversed).unwrap() < 1e-12);
            assert!(commutator_residual(&ops, RelationSet::Com1Tilde).unwrap() > 0.1);
            // printed tilde quadruple: X̃ vanishes, Ỹ = Ã
            let xy = xy_from_ab(&ops, true).unwrap();
            assert!(xy[&X3].max_abs() < 1e-15);
            assert!(xy[&Y3].max_abs_diff(&ops[&At3]) < 1e-15);
        }
    }

    #[test]
    fn waerden_com2_through_adapter() {
        for tl in 0..=5 {
            for tld in 0..=5 {
                let w = waerden_set(h(tl), h(tld)).unwrap();
                assert!(commutator_residual(&w, RelationSet::WaerdenConsistency).unwrap() < 1e-13);
                let anti = scale_ops(&w, cz(0.0, -1.0));
                assert!(commutator_residual(&anti, RelationSet::Com2).unwrap() < 1e-13);
                let ab = ab_from_xy(&anti).unwrap();
                assert!(commutator_residual(&ab, RelationSet::Com1).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn printed_third_com2_relation_fails() {
        let anti = scale_ops(&waerden_set(h(1), h(1)).unwrap(), cz(0.0, -1.0));
        let res = relation_residuals(&anti, RelationSet::Com2Printed).unwrap();
        let printed = res.iter().find(|(n, _)| n == "[X2,X1]=X2").unwrap().1;
        assert!(printed > 0.1);
    }

    #[test]
    fn gn_examples() {
        let rep = GnRep::new(h(1), 1).unwrap();
        let h3 = gn_op(H3, rep).unwrap();
        assert_eq!(h3.nrows(), 2);
        assert_eq!((h3.data()[(0, 0)].re, h3.data()[(1, 1)].re), (0.5, -0.5));
        assert_eq!(rep.c_coeff(h(1)), cz(0.0, 0.0));
        let rep = GnRep::new(h(1), 1).unwrap();
        assert!((rep.a_coeff(h(1)).unwrap() - cz(0.0, 1.0)).norm() < 1e-15);
        assert!(GnRep::new(h(0), 1).unwrap().a_coeff(h(0)).is_none());
    }

    #[test]
    fn gn_through_basis_change() {
        for tl0 in 0..=4 {
            for p in 1..=3 {
                let rep = GnRep::new(h(tl0), p).unwrap();
                let gn = gn_set(rep).unwrap();
                let hx: OpMap = [(XPlus, gn[&HPlus].clone()), (XMinus, gn[&HMinus].clone()), (X3, gn[&H3].clone())]
                    .into_iter()
                    .chain([(YPlus, gn[&HPlus].scale_re(0.0)), (YMinus, gn[&HPlus].scale_re(0.0)), (Y3, gn[&HPlus].scale_re(0.0))])
                    .collect();
                assert!(commutator_residual(&hx, RelationSet::WaerdenConsistency).unwrap() < 1e-12);
                let out = basis_change(&gn).unwrap();
                assert!(commutator_residual(&out, RelationSet::Com2).unwrap() < 1e-12, "l0={tl0}/2 p={p}");
                assert!(commutator_residual(&out, RelationSet::Com1).unwrap() < 1e-12);
                // A3 = −iH3
                assert!(out[&A3].max_abs_diff(&gn[&H3].scale(-I)) < 1e-15);
                let back = basis_change_inverse(&out).unwrap();
                for k in [H3, HPlus, HMinus, F3, FPlus, FMinus] {
                    assert!(back[&k].max_abs_diff(&gn[&k]) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn zero_inputs() {
        let rep = GnRep::new(h(1), 2).unwrap();
        let zero: OpMap = gn_set(rep).unwrap().into_iter().map(|(k, m)| (k, m.scale_re(0.0))).collect();
        let out = basis_change(&zero).unwrap();
        assert!(out.values().all(|m| m.max_abs() == 0.0));
        assert_eq!(commutator_residual(&out, RelationSet::Com2).unwrap(), 0.0);
    }

    #[test]
    fn missing_operator_is_named() {
        let mut ops = helicity_set(h(1), false).unwrap();
        ops.remove(&B2);
        assert_eq!(commutator_residual(&ops, RelationSet::Com1), Err(Error::MissingOperator("B2".into())));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in OperatorKind::ALL {
            assert_eq!(k.name().parse::<OperatorKind>().unwrap(), k);
        }
    }
}
