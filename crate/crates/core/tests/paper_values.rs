//! Closed-form values quoted by the source, checked through the public API.

use helicity::clifford::{brauer_weyl_single, schur_transpositions, Monomial};
use helicity::generators::{gn_op, helicity_ab_op, waerden_op, GnRep, OperatorKind};
use helicity::gy::{assemble_lambda3, CoeffKey, CoeffTable, RepChain};
use helicity::hyperspherical::{fundamental_matrix, m_function, HypersphericalKey};
use helicity::spin::h;
use helicity::su2::{jac_p, sph_p};
use helicity::tensor::{bilinear_form, sym_dimension, symmetrizer_one_row, RepLabel};
use helicity::{c64, enumerate_basis, Complex64, GroupPoint};

#[test]
fn basis_length() {
    assert_eq!(enumerate_basis(h(1), h(1)).unwrap().len(), 4);
}

#[test]
fn spin_half_entries() {
    let th = 0.8f64;
    assert!((sph_p(h(1), h(1), h(-1), th).unwrap() - c64(0.0, (th / 2.0).sin())).norm() < 1e-15);
    let tau = 0.6f64;
    assert!((jac_p(h(1), h(1), h(1), tau).unwrap() - (tau / 2.0).cosh()).abs() < 1e-15);
    assert!((jac_p(h(1), h(1), h(-1), tau).unwrap() - (tau / 2.0).sinh()).abs() < 1e-15);
    let (th, tau) = (std::f64::consts::PI / 3.0, 1.0f64);
    let key = HypersphericalKey::new(h(1), h(1), h(1)).unwrap();
    let want = c64((th / 2.0).cos() * (tau / 2.0).cosh(), (th / 2.0).sin() * (tau / 2.0).sinh());
    let g = GroupPoint::new(0.0, 0.0, th, tau, 0.0, 0.0);
    assert!((m_function(key, &g) - want).norm() < 1e-15);
}

#[test]
fn rotation_factor() {
    let f = fundamental_matrix(&GroupPoint::new(0.0, 0.0, 1.2, 0.0, 0.0, 0.0));
    let (c, s) = (0.6f64.cos(), 0.6f64.sin());
    let d = f.data();
    assert!((d[(0, 0)] - c).norm() < 1e-15 && (d[(1, 1)] - c).norm() < 1e-15);
    assert!((d[(0, 1)] - c64(0.0, s)).norm() < 1e-15 && (d[(1, 0)] - c64(0.0, s)).norm() < 1e-15);
}

#[test]
fn diagonal_generators() {
    let x3 = waerden_op(OperatorKind::X3, h(1), h(1)).unwrap();
    let diag: Vec<f64> = (0..4).map(|i| x3.data()[(i, i)].re).collect();
    assert_eq!(diag, vec![0.5, -0.5, 0.5, -0.5]);
    let a3 = helicity_ab_op(OperatorKind::A3, h(1)).unwrap();
    assert_eq!((a3.data()[(0, 0)], a3.data()[(1, 1)]), (c64(0.0, -0.5), c64(0.0, 0.5)));
    let b3 = helicity_ab_op(OperatorKind::B3, h(1)).unwrap();
    assert_eq!((b3.data()[(0, 0)], b3.data()[(1, 1)]), (c64(0.5, 0.0), c64(-0.5, 0.0)));
    let h3 = gn_op(OperatorKind::H3, GnRep::new(h(1), 1).unwrap()).unwrap();
    assert_eq!((h3.data()[(0, 0)], h3.data()[(1, 1)]), (c64(0.5, 0.0), c64(-0.5, 0.0)));
}

#[test]
fn bilinear_form_symmetry() {
    let skew = bilinear_form(1, 1, 1.0).unwrap();
    assert!((skew.transpose().data() + skew.data()).iter().all(|z| z.norm() == 0.0));
    let sym = bilinear_form(2, 2, 1.0).unwrap();
    assert_eq!(sym.transpose(), sym);
}

#[test]
fn symmetric_power_dimensions() {
    assert_eq!(sym_dimension(4, 0), 5);
    assert_eq!(sym_dimension(2, 3), 12);
    let p = symmetrizer_one_row(3).unwrap();
    assert_eq!(p.nrows(), 8);
    let rank = p.data().clone().svd(false, false).singular_values.iter().filter(|&&s| s > 1e-10).count();
    assert_eq!(rank, 4);
}

#[test]
fn clifford_generator_patterns() {
    let e = brauer_weyl_single(2).unwrap();
    assert_eq!(e[0], Monomial::sigma(1));
    assert_eq!(e[1], Monomial::sigma(2));
    let e = brauer_weyl_single(4).unwrap();
    assert_eq!(e[1], Monomial::sigma(3).kron(&Monomial::sigma(1)));
    assert_eq!(e[3], Monomial::sigma(3).kron(&Monomial::sigma(2)));
    let t = schur_transpositions(3).unwrap();
    assert!((t.coeffs[1][0] - 0.5).abs() < 1e-15);
    assert!((t.coeffs[1][1] + 3f64.sqrt() / 2.0).abs() < 1e-15);
}

#[test]
fn diagonal_lambda3() {
    let chain = RepChain::new(vec![RepLabel::new(h(2), h(0)).unwrap()]).unwrap();
    let mut t = CoeffTable::default();
    t.insert(CoeffKey { to: 1, from: 1, lp: h(2), l: h(2) }, Complex64::new(1.0, 0.0)).unwrap();
    let l3 = assemble_lambda3(&chain, &t).unwrap();
    let diag: Vec<f64> = (0..3).map(|i| l3.data()[(i, i)].re).collect();
    assert_eq!(diag, vec![1.0, 0.0, -1.0]);
}
