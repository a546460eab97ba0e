//! Gel'fand–Yaglom wave-equation matrices on a chain of Lorentz irreps.
//!
//! The carrier of a chain is the direct sum, over irreps τ_{l1 l2} (index
//! k, 1-based), of the total-spin multiplets l = |l1−l2| … l1+l2, each in
//! its m-descending basis. Generators act multiplet by multiplet.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{helicity_ab_op, xy_from_ab, OperatorKind};
use crate::hyperspherical::{fundamental_matrix, group_point_from_matrix, m_matrix, sl1_raw};
use crate::matrix::{commutator, CMatrix};
use crate::spin::{GroupPoint, HalfInt};
use crate::tensor::RepLabel;

/// Carrier label: irrep k (1-based), spin l, projection m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GyIndex {
    pub k: usize,
    pub l: HalfInt,
    pub m: HalfInt,
}

pub type GyMatrix = CMatrix<GyIndex>;

/// l1′ = l1 ± 1/2 and l2′ = l2 ± 1/2.
pub fn is_interlocking(a: RepLabel, b: RepLabel) -> bool {
    (a.l1 - b.l1).abs() == HalfInt::HALF && (a.l2 - b.l2).abs() == HalfInt::HALF
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepChain {
    pub reps: Vec<RepLabel>,
    /// 1-based (k′, k) with k′ < k.
    pub links: Vec<(usize, usize)>,
}

impl RepChain {
    pub fn new(reps: Vec<RepLabel>) -> Result<Self> {
        if reps.is_empty() {
            return Err(Error::InvalidChain("empty chain".into()));
        }
        let mut links = Vec::new();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if is_interlocking(reps[i], reps[j]) {
                    links.push((i + 1, j + 1));
                }
            }
        }
        Ok(RepChain { reps, links })
    }

    pub fn dirac() -> Self {
        let h = HalfInt::HALF;
        let z = HalfInt::ZERO;
        RepChain::new(vec![RepLabel { l1: h, l2: z }, RepLabel { l1: z, l2: h }]).expect("non-empty")
    }

    pub fn rep(&self, k: usize) -> Result<RepLabel> {
        k.checked_sub(1)
            .and_then(|i| self.reps.get(i).copied())
            .ok_or_else(|| Error::InvalidChain(format!("irrep index {k} out of range 1..={}", self.reps.len())))
    }

    pub fn is_linked(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.links.contains(&key)
    }

    /// Total spins carried by irrep k.
    pub fn spins(&self, k: usize) -> Result<Vec<HalfInt>> {
        let r = self.rep(k)?;
        Ok(HalfInt::range((r.l1 - r.l2).abs(), r.l1 + r.l2).collect())
    }

    pub fn carrier(&self) -> Vec<GyIndex> {
        let mut out = Vec::new();
        for k in 1..=self.reps.len() {
            for l in self.spins(k).expect("valid index") {
                out.extend(l.projections().map(|m| GyIndex { k, l, m }));
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.reps.iter().map(RepLabel::dim).sum()
    }
}

/// Links whose two irreps both satisfy |l1 − l2| ≤ s ≤ l1 + l2.
pub fn spin_block_members(chain: &RepChain, s: HalfInt) -> Vec<(usize, usize)> {
    let contains = |r: RepLabel| (r.l1 - r.l2).abs() <= s && s <= r.l1 + r.l2;
    chain
        .links
        .iter()
        .copied()
        .filter(|&(a, b)| contains(chain.reps[a - 1]) && contains(chain.reps[b - 1]))
        .collect()
}

/// Key of c^{k′k}_{l′l}: row irrep k′ (`to`), column irrep k (`from`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoeffKey {
    pub to: usize,
    pub from: usize,
    pub lp: HalfInt,
    pub l: HalfInt,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoeffTable(pub BTreeMap<CoeffKey, Complex64>);

impl CoeffTable {
    pub fn insert(&mut self, key: CoeffKey, v: Complex64) -> Result<()> {
        if self.0.insert(key, v).is_some() {
            return Err(Error::InvalidChain(format!("duplicate coefficient {key:?}")));
        }
        Ok(())
    }

    pub fn conj(&self) -> CoeffTable {
        CoeffTable(self.0.iter().map(|(k, v)| (*k, v.conj())).collect())
    }

    /// Every entry sits on a link (or inside one irrep) between spins the
    /// irreps carry, with |l′ − l| ≤ 1.
    pub fn validate(&self, chain: &RepChain) -> Result<()> {
        for key in self.0.keys() {
            let (sto, sfrom) = (chain.spins(key.to)?, chain.spins(key.from)?);
            if key.to != key.from && !chain.is_linked(key.to, key.from) {
                return Err(Error::InvalidChain(format!(
                    "coefficient between irreps {} and {} which are not interlocking",
                    key.to, key.from
                )));
            }
            if !sto.contains(&key.lp) || !sfrom.contains(&key.l) {
                return Err(Error::InvalidChain(format!(
                    "spin pair (l′={}, l={}) not carried by irreps ({}, {})",
                    key.lp, key.l, key.to, key.from
                )));
            }
            if (key.lp - key.l).abs() > HalfInt::ONE {
                return Err(Error::InvalidChain(format!("|l′ − l| > 1 in {key:?}")));
            }
        }
        Ok(())
    }
}

/// Λ₃ entries: row (k′, l′, m), column (k, l, m) with
/// c·sqrt(l² − m²) for l′ = l − 1, c·m for l′ = l, c·sqrt((l+1)² − m²) for l′ = l + 1.
pub fn assemble_lambda3(chain: &RepChain, coeffs: &CoeffTable) -> Result<GyMatrix> {
    coeffs.validate(chain)?;
    let labels = chain.carrier();
    let mut out = CMatrix::square_zeros(labels.clone());
    for (key, c) in &coeffs.0 {
        let d = key.lp.int_diff(key.l);
        for m in key.l.projections() {
            let lv = key.l.value();
            let mv = m.value();
            let f = match d {
                -1 => (lv * lv - mv * mv).sqrt(),
                0 => mv,
                _ => ((lv + 1.0) * (lv + 1.0) - mv * mv).sqrt(),
            };
            let row = GyIndex { k: key.to, l: key.lp, m };
            let col = GyIndex { k: key.from, l: key.l, m };
            // |m| > l′ only when f vanishes
            if let (Some(i), Some(j)) = (out.row_index(&row), out.col_index(&col)) {
                out.data_mut()[(i, j)] += c * f;
            }
        }
    }
    Ok(out)
}

/// Per-multiplet A, B (undotted) and Ã, B̃ (dotted) on the chain carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierGenerators {
    pub a: [GyMatrix; 3],
    pub b: [GyMatrix; 3],
    pub at: [GyMatrix; 3],
    pub bt: [GyMatrix; 3],
}

fn block_sum(chain: &RepChain, kind: OperatorKind, scale: f64) -> Result<GyMatrix> {
    let labels = chain.carrier();
    let mut out = CMatrix::square_zeros(labels.clone());
    let mut offset = 0;
    for k in 1..=chain.reps.len() {
        for l in chain.spins(k)? {
            let op = helicity_ab_op(kind, l)?;
            let n = op.nrows();
            out.data_mut().view_mut((offset, offset), (n, n)).copy_from(&(op.data() * Complex64::new(scale, 0.0)));
            offset += n;
        }
    }
    Ok(out)
}

impl CarrierGenerators {
    /// Ã as printed; B̃ with its sign reversed (equal to B).
    pub fn new(chain: &RepChain) -> Result<Self> {
        Self::build(chain, -1.0)
    }

    /// Ã and B̃ both as printed.
    pub fn printed(chain: &RepChain) -> Result<Self> {
        Self::build(chain, 1.0)
    }

    fn build(chain: &RepChain, bt_sign: f64) -> Result<Self> {
        use OperatorKind::*;
        let g = |k, s| block_sum(chain, k, s);
        Ok(CarrierGenerators {
            a: [g(A1, 1.0)?, g(A2, 1.0)?, g(A3, 1.0)?],
            b: [g(B1, 1.0)?, g(B2, 1.0)?, g(B3, 1.0)?],
            at: [g(At1, 1.0)?, g(At2, 1.0)?, g(At3, 1.0)?],
            bt: [g(Bt1, bt_sign)?, g(Bt2, bt_sign)?, g(Bt3, bt_sign)?],
        })
    }

    /// X±, X3, Y±, Y3 (anti-Hermitian ladders) of the undotted or dotted set.
    pub fn ladders(&self, dotted: bool) -> Result<BTreeMap<OperatorKind, GyMatrix>> {
        use OperatorKind::*;
        // xy_from_ab works on BasisIndex-labeled maps; relabel through data.
        let (a, b, ka, kb) = if dotted {
            (&self.at, &self.bt, [At1, At2, At3], [Bt1, Bt2, Bt3])
        } else {
            (&self.a, &self.b, [A1, A2, A3], [B1, B2, B3])
        };
        let labels = a[0].rows().to_vec();
        let fake: Vec<crate::spin::BasisIndex> = (0..labels.len())
            .map(|i| crate::spin::BasisIndex::undotted(HalfInt::from_int(i as i32), HalfInt::ZERO))
            .collect();
        let mut ops = crate::generators::OpMap::new();
        for i in 0..3 {
            ops.insert(ka[i], a[i].relabel(fake.clone(), fake.clone())?);
            ops.insert(kb[i], b[i].relabel(fake.clone(), fake.clone())?);
        }
        xy_from_ab(&ops, dotted)?
            .into_iter()
            .map(|(k, m)| Ok((k, m.relabel(labels.clone(), labels.clone())?)))
            .collect()
    }
}

/// ε_ijk for 0-based indices.
fn levi(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationResidual {
    pub table: String,
    pub relation: String,
    pub residual: f64,
}

/// [G_i, L_j] = coef·ε_ijk L_k for all i, j.
fn table(name: &str, gn: &str, ln: &str, g: &[GyMatrix; 3], l: &[GyMatrix; 3], coef: Complex64) -> Vec<RelationResidual> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let mut rhs = l[0].scale_re(0.0);
            let mut text = "0".to_string();
            for k in 0..3 {
                let e = levi(i, j, k);
                if e != 0.0 {
                    rhs = l[k].scale(coef * e);
                    let c = coef * e;
                    let s = match (c.re, c.im) {
                        (r, 0.0) if r == 1.0 => String::new(),
                        (r, 0.0) if r == -1.0 => "-".into(),
                        (0.0, im) if im == 1.0 => "i".into(),
                        (0.0, im) if im == -1.0 => "-i".into(),
                        _ => format!("{c}"),
                    };
                    text = format!("{s}{ln}{}", k + 1);
                }
            }
            let res = (&commutator(&g[i], &l[j]) - &rhs).max_abs();
            out.push(RelationResidual {
                table: name.into(),
                relation: format!("[{gn}{},{ln}{}]={text}", i + 1, j + 1),
                residual: res,
            });
        }
    }
    out
}

fn al(gens: &CarrierGenerators, l: &[GyMatrix; 3]) -> Vec<RelationResidual> {
    table("AL", "A", "L", &gens.a, l, Complex64::new(1.0, 0.0))
}

/// Λ₁ = [A₂, Λ₃], Λ₂ = [A₃, Λ₁]; every (AL) relation is then checked.
pub fn lambda12_from_commutators(lambda3: &GyMatrix, gens: &CarrierGenerators) -> Result<(GyMatrix, GyMatrix)> {
    if !lambda3.same_shape(&gens.a[0]) {
        return Err(Error::Dimension("Λ₃ and generators live on different carriers".into()));
    }
    let l1 = commutator(&gens.a[1], lambda3);
    let l2 = commutator(&gens.a[2], &l1);
    let triple = [l1, l2, lambda3.clone()];
    let scale = 1.0 + lambda3.max_abs();
    if let Some(bad) = al(gens, &triple).into_iter().find(|r| r.residual > 1e-10 * scale) {
        return Err(Error::Inconsistent { relation: bad.relation, residual: bad.residual });
    }
    let [l1, l2, _] = triple;
    Ok((l1, l2))
}

/// Λ*₁ = −[Ã₂, Λ*₃], Λ*₂ = −[Ã₃, Λ*₁]; every (DAL) relation is then checked.
pub fn lambda12_dotted(lambda3: &GyMatrix, gens: &CarrierGenerators) -> Result<(GyMatrix, GyMatrix)> {
    let l1 = -&commutator(&gens.at[1], lambda3);
    let l2 = -&commutator(&gens.at[2], &l1);
    let triple = [l1, l2, lambda3.clone()];
    let scale = 1.0 + lambda3.max_abs();
    let dal = table("DAL", "At", "L*", &gens.at, &triple, Complex64::new(-1.0, 0.0));
    if let Some(bad) = dal.into_iter().find(|r| r.residual > 1e-10 * scale) {
        return Err(Error::Inconsistent { relation: bad.relation, residual: bad.residual });
    }
    let [l1, l2, _] = triple;
    Ok((l1, l2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GYSystem {
    pub chain: RepChain,
    pub coeffs: CoeffTable,
    pub coeffs_dot: CoeffTable,
    pub lambdas: [GyMatrix; 3],
    pub lambdas_dot: [GyMatrix; 3],
    pub kappa: Complex64,
    pub kappa_dot: Complex64,
}

impl GYSystem {
    pub fn build(
        chain: RepChain,
        coeffs: CoeffTable,
        coeffs_dot: CoeffTable,
        kappa: Complex64,
        kappa_dot: Complex64,
    ) -> Result<Self> {
        let gens = CarrierGenerators::new(&chain)?;
        let l3 = assemble_lambda3(&chain, &coeffs)?;
        let d3 = assemble_lambda3(&chain, &coeffs_dot)?;
        let (l1, l2) = lambda12_from_commutators(&l3, &gens)?;
        let (d1, d2) = lambda12_dotted(&d3, &gens)?;
        Ok(GYSystem { chain, coeffs, coeffs_dot, lambdas: [l1, l2, l3], lambdas_dot: [d1, d2, d3], kappa, kappa_dot })
    }

    /// c^{12}_{½½} = 1, c^{21}_{½½} = −1, κ = 1: Λ_k = ½γ_k in the Weyl basis.
    pub fn dirac() -> Self {
        ChainConfig::dirac().build().expect("preset is consistent")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub relations: Vec<RelationResidual>,
    pub max_residual: f64,
}

impl InvarianceReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }

    pub fn violated(&self, tol: f64) -> Vec<&RelationResidual> {
        self.relations.iter().filter(|r| r.residual > tol).collect()
    }
}

fn ladder_relations(
    name: &str,
    lambda3: &GyMatrix,
    same: (&GyMatrix, &GyMatrix, &GyMatrix),
    other: (&GyMatrix, &GyMatrix, &GyMatrix),
    names: (&str, &str),
) -> Vec<RelationResidual> {
    let (p, m, t) = same;
    let (op, om, ot) = other;
    let (sn, on) = names;
    let r = |rel: String, d: GyMatrix| RelationResidual { table: name.into(), relation: rel, residual: d.max_abs() };
    vec![
        r(format!("[{sn}+,[L3,{sn}-]]=2L3"), &commutator(p, &commutator(lambda3, m)) - &lambda3.scale_re(2.0)),
        r(format!("[L3,{sn}3]=0"), commutator(lambda3, t)),
        r(format!("[L3,{on}-]=0"), commutator(lambda3, om)),
        r(format!("[L3,{on}+]=0"), commutator(lambda3, op)),
        r(format!("[L3,{on}3]=0"), commutator(lambda3, ot)),
    ]
}

/// Residuals of (AL), (BL), (DAL), (DBL), (LY) and (LX).
pub fn verify_invariance(sys: &GYSystem, gens: &CarrierGenerators) -> Result<InvarianceReport> {
    use OperatorKind::*;
    let mut relations = Vec::new();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    relations.extend(table("AL", "A", "L", &gens.a, &sys.lambdas, one));
    relations.extend(table("BL", "B", "L", &gens.b, &sys.lambdas, i));
    relations.extend(table("DAL", "At", "L*", &gens.at, &sys.lambdas_dot, -one));
    relations.extend(table("DBL", "Bt", "L*", &gens.bt, &sys.lambdas_dot, i));
    let u = gens.ladders(false)?;
    relations.extend(ladder_relations(
        "LY",
        &sys.lambdas[2],
        (&u[&YPlus], &u[&YMinus], &u[&Y3]),
        (&u[&XPlus], &u[&XMinus], &u[&X3]),
        ("Y", "X"),
    ));
    let d = gens.ladders(true)?;
    let mut lx = ladder_relations(
        "LX",
        &sys.lambdas_dot[2],
        (&d[&XPlus], &d[&XMinus], &d[&X3]),
        (&d[&YPlus], &d[&YMinus], &d[&Y3]),
        ("X", "Y"),
    );
    for r in &mut lx {
        r.relation = r.relation.replace("L3", "L*3");
    }
    relations.extend(lx);
    let max_residual = relations.iter().fold(0.0f64, |m, r| m.max(r.residual));
    Ok(InvarianceReport { relations, max_residual })
}

/// T_g = ⊕ 𝔐^l(g) over the multiplets of the carrier.
fn carrier_transform(chain: &RepChain, g: &GroupPoint) -> Result<GyMatrix> {
    let labels = chain.carrier();
    let mut out = CMatrix::square_zeros(labels.clone());
    let mut offset = 0;
    for k in 1..=chain.reps.len() {
        for l in chain.spins(k)? {
            let blk = m_matrix(l, g);
            let n = blk.nrows();
            out.data_mut().view_mut((offset, offset), (n, n)).copy_from(blk.data());
            offset += n;
        }
    }
    Ok(out)
}

/// R_ij with F A_j F⁻¹ = Σ_i R_ij A_i on the fundamental representation.
fn adjoint_rotation(f: &DMatrix<Complex64>) -> Result<[[Complex64; 3]; 3]> {
    use OperatorKind::*;
    let finv = f.clone().try_inverse().ok_or_else(|| Error::Singular("group element".into()))?;
    let a: Vec<DMatrix<Complex64>> =
        [A1, A2, A3].iter().map(|&k| helicity_ab_op(k, HalfInt::HALF).map(|m| m.into_data())).collect::<Result<_>>()?;
    let mut r = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, ai) in a.iter().enumerate() {
        for (j, aj) in a.iter().enumerate() {
            r[i][j] = (ai * f * aj * &finv).trace() * -2.0;
        }
    }
    Ok(r)
}

fn finite_residual(chain: &RepChain, lambdas: &[GyMatrix; 3], g: &GroupPoint, f: &DMatrix<Complex64>) -> Result<f64> {
    let t = carrier_transform(chain, g)?;
    let tinv_data = t.data().clone().try_inverse().ok_or_else(|| Error::Singular("carrier transform".into()))?;
    let tinv = CMatrix::from_parts(t.rows().to_vec(), t.cols().to_vec(), tinv_data)?;
    let r = adjoint_rotation(f)?;
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        let lhs = &(&t * &lambdas[j]) * &tinv;
        let rhs = (0..3).fold(lambdas[0].scale_re(0.0), |acc, i| &acc + &lambdas[i].scale(r[i][j]));
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// Finite invariance: T_g Λ_j T_g⁻¹ = Σ_i R_ij(g) Λ_i with R the adjoint
/// action of g on the fundamental; the dotted sector uses g†.
/// Returns (undotted, dotted) max residuals.
pub fn finite_invariance(sys: &GYSystem, g: &GroupPoint) -> Result<(f64, f64)> {
    let f = fundamental_matrix(g).into_data();
    let und = finite_residual(&sys.chain, &sys.lambdas, g, &f)?;
    let gd = group_point_from_matrix(&sl1_raw(g).adjoint())?;
    let fd = fundamental_matrix(&gd).into_data();
    let dot = finite_residual(&sys.chain, &sys.lambdas_dot, &gd, &fd)?;
    Ok((und, dot))
}

/// Λ restricted to each projection m (m descending).
pub fn projection_blocks(lambda: &GyMatrix) -> Result<Vec<(HalfInt, GyMatrix)>> {
    let mut ms: Vec<HalfInt> = lambda.rows().iter().map(|x| x.m).collect();
    ms.sort_unstable_by(|a, b| b.cmp(a));
    ms.dedup();
    ms.into_iter()
        .map(|m| {
            let idx: Vec<GyIndex> = lambda.rows().iter().copied().filter(|x| x.m == m).collect();
            Ok((m, lambda.submatrix(&idx, &idx)?))
        })
        .collect()
}

/// Place blocks back on the full carrier; entries between different m are zero.
pub fn reassemble_blocks(labels: &[GyIndex], blocks: &[(HalfInt, GyMatrix)]) -> Result<GyMatrix> {
    let mut out = CMatrix::square_zeros(labels.to_vec());
    for (_, b) in blocks {
        for (bi, r) in b.rows().iter().enumerate() {
            for (bj, c) in b.cols().iter().enumerate() {
                out.set(r, c, b.data()[(bi, bj)])?;
            }
        }
    }
    Ok(out)
}

/// Spin block C^s: Λ₃ on the components (k, l = s, m = s), one per irrep carrying s.
pub fn spin_block(lambda3: &GyMatrix, s: HalfInt) -> Result<GyMatrix> {
    let idx: Vec<GyIndex> = lambda3.rows().iter().copied().filter(|x| x.l == s && x.m == s).collect();
    lambda3.submatrix(&idx, &idx)
}

/// Eigenvalues of a square block (Schur form).
pub fn eigenvalues(block: &GyMatrix) -> Result<Vec<Complex64>> {
    if block.nrows() == 0 {
        return Ok(Vec::new());
    }
    let ev = block
        .data()
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Singular("eigenvalue iteration did not converge".into()))?;
    Ok(ev.iter().copied().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decomposability {
    Decomposable,
    Indecomposable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// 1-based irrep indices.
    pub members: Vec<usize>,
    pub kind: Decomposability,
}

/// Connected components of the interlocking graph.
pub fn classify(chain: &RepChain) -> Vec<Component> {
    let n = chain.reps.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for &(a, b) in &chain.links {
        let (ra, rb) = (find(&mut parent, a - 1), find(&mut parent, b - 1));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i + 1);
    }
    groups
        .into_values()
        .map(|members| {
            let kind = if members.len() >= 2 { Decomposability::Indecomposable } else { Decomposability::Decomposable };
            Component { members, kind }
        })
        .collect()
}

/// Weyl-basis spatial gamma matrices [[0, σ_k], [−σ_k, 0]].
pub fn weyl_gammas() -> [DMatrix<Complex64>; 3] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let sig = [
        DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ];
    sig.map(|s| {
        let mut g = DMatrix::zeros(4, 4);
        g.view_mut((0, 2), (2, 2)).copy_from(&s);
        g.view_mut((2, 0), (2, 2)).copy_from(&(-s));
        g
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    /// α with S Λ_i S⁻¹ = α γ_i.
    pub scale: (f64, f64),
    pub residual: f64,
    /// Smallest / largest singular value of S.
    pub inverse_condition: f64,
}

/// Solve S Λ_i = α γ_i S for an invertible S (null space of the stacked
/// linear system, α² from traces).
pub fn gamma_similarity(lambdas: &[GyMatrix; 3]) -> Result<SimilarityReport> {
    let n = lambdas[0].nrows();
    if n != 4 {
        return Err(Error::Dimension(format!("similarity to the gamma triple needs 4x4 matrices, got {n}x{n}")));
    }
    let gam = weyl_gammas();
    let tr_l: Complex64 = lambdas.iter().map(|l| (l.data() * l.data()).trace()).sum();
    let tr_g: Complex64 = gam.iter().map(|g| (g * g).trace()).sum();
    let alpha = (tr_l / tr_g).sqrt();
    if alpha.norm() < 1e-300 {
        return Err(Error::Singular("zero Λ triple".into()));
    }
    let eye = DMatrix::<Complex64>::identity(n, n);
    let mut sys = DMatrix::<Complex64>::zeros(3 * n * n, n * n);
    for i in 0..3 {
        // vec(SΛ − αγS) = (Λᵀ ⊗ I − I ⊗ αγ) vec S
        let blk = lambdas[i].data().transpose().kronecker(&eye) - eye.kronecker(&(&gam[i] * alpha));
        sys.view_mut((i * n * n, 0), (n * n, n * n)).copy_from(&blk);
    }
    let svd = sys.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::Singular("SVD failed".into()))?;
    let sv = &svd.singular_values;
    let smax = sv.max();
    // null vectors, combined with fixed generic weights
    let weights = [Complex64::new(1.0, 0.0), Complex64::new(0.37, 0.59), Complex64::new(-0.71, 0.23), Complex64::new(0.13, -0.83)];
    let mut s = DMatrix::<Complex64>::zeros(n, n);
    let mut used = 0;
    for (idx, &val) in sv.iter().enumerate() {
        if val <= 1e-9 * smax.max(1.0) {
            let v = vt.row(idx).map(|z| z.conj());
            let w = weights[used % weights.len()];
            for c in 0..n {
                for r in 0..n {
                    s[(r, c)] += w * v[c * n + r];
                }
            }
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::Singular("no similarity transform exists".into()));
    }
    let ssv = s.clone().svd(false, false).singular_values;
    let inverse_condition = ssv.min() / ssv.max();
    let sinv = s.clone().try_inverse().ok_or_else(|| Error::Singular("similarity transform is singular".into()))?;
    let mut residual: f64 = 0.0;
    for i in 0..3 {
        let d = &s * lambdas[i].data() * &sinv - &gam[i] * alpha;
        residual = residual.max(d.iter().fold(0.0, |m, z| m.max(z.norm())));
    }
    Ok(SimilarityReport { scale: (alpha.re, alpha.im), residual, inverse_condition })
}

/// Random complex coefficients on roughly 80% of the allowed keys.
pub fn random_table(chain: &RepChain, rng: &mut impl Rng) -> CoeffTable {
    let mut t = CoeffTable::default();
    let n = chain.reps.len();
    for to in 1..=n {
        for from in 1..=n {
            if to != from && !chain.is_linked(to, from) {
                continue;
            }
            for lp in chain.spins(to).expect("valid index") {
                for l in chain.spins(from).expect("valid index") {
                    if (lp - l).abs() <= HalfInt::ONE && rng.random_bool(0.8) {
                        let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                        t.0.insert(CoeffKey { to, from, lp, l }, v);
                    }
                }
            }
        }
    }
    t
}

/// Chain file: reps, coefficient entries (`from` = column irrep,
/// `to` = row irrep, `lp` = row spin, `l` = column spin), κ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub reps: Vec<RepSpec>,
    #[serde(default)]
    pub coeffs: Vec<CoeffEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs_dot: Option<Vec<CoeffEntry>>,
    #[serde(default = "unit_kappa")]
    pub kappa: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_dot: Option<[f64; 2]>,
}

fn unit_kappa() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub l1: HalfInt,
    pub l2: HalfInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntry {
    pub from: usize,
    pub to: usize,
    pub lp: HalfInt,
    pub l: HalfInt,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

fn table_from(entries: &[CoeffEntry]) -> Result<CoeffTable> {
    let mut t = CoeffTable::default();
    for e in entries {
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(Error::InvalidChain(format!("non-finite coefficient {e:?}")));
        }
        t.insert(CoeffKey { to: e.to, from: e.from, lp: e.lp, l: e.l }, Complex64::new(e.re, e.im))?;
    }
    Ok(t)
}

impl ChainConfig {
    pub fn dirac() -> Self {
        let h = HalfInt::HALF;
        let z = HalfInt::ZERO;
        ChainConfig {
            reps: vec![RepSpec { l1: h, l2: z }, RepSpec { l1: z, l2: h }],
            coeffs: vec![
                CoeffEntry { from: 2, to: 1, lp: h, l: h, re: 1.0, im: 0.0 },
                CoeffEntry { from: 1, to: 2, lp: h, l: h, re: -1.0, im: 0.0 },
            ],
            coeffs_dot: None,
            kappa: [1.0, 0.0],
            kappa_dot: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("chain file: {e}")))
    }

    pub fn chain(&self) -> Result<RepChain> {
        let reps = self.reps.iter().map(|r| RepLabel::new(r.l1, r.l2)).collect::<Result<Vec<_>>>()?;
        RepChain::new(reps)
    }

    /// Dotted coefficients default to the complex conjugate table, κ̇ to conj κ.
    pub fn build(&self) -> Result<GYSystem> {
        let chain = self.chain()?;
        let coeffs = table_from(&self.coeffs)?;
        let coeffs_dot = match &self.coeffs_dot {
            Some(d) => table_from(d)?,
            None => coeffs.conj(),
        };
        let kappa = Complex64::new(self.kappa[0], self.kappa[1]);
        let kappa_dot = self.kappa_dot.map_or(kappa.conj(), |k| Complex64::new(k[0], k[1]));
        if !kappa.is_finite() || !kappa_dot.is_finite() {
            return Err(Error::InvalidChain("non-finite kappa".into()));
        }
        GYSystem::build(chain, coeffs, coeffs_dot, kappa, kappa_dot)
    }
}
