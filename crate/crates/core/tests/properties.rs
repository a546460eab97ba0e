use helicity::clifford::{brauer_weyl, verify_clifford};
use helicity::gy::{random_table, verify_invariance, CarrierGenerators, CoeffTable, GYSystem};
use helicity::hyperspherical::{compose, fundamental_matrix, m_matrix, rep_matrix, z_factorized, z_series, HypersphericalKey};
use helicity::radial::{assemble_rfs, SignConvention};
use helicity::spin::h;
use helicity::su2::{cg_su2, sph_p, CgKey};
use helicity::verify::sample_chains;
use helicity::{Complex64, GroupPoint, HalfInt};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = GroupPoint> {
    (0.0..6.28f64, -1.0..1.0f64, 0.0..3.1f64, -1.5..1.5f64, -6.28..6.28f64, -1.0..1.0f64)
        .prop_map(|(a, b, c, d, e, f)| GroupPoint::new(a, b, c, d, e, f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn halfint_text_round_trip(t in -40i32..40) {
        let x = h(t);
        prop_assert_eq!(x.to_string().parse::<HalfInt>().unwrap(), x);
        prop_assert_eq!((x + h(3)) - h(3), x);
        prop_assert_eq!(x.is_integer(), t % 2 == 0);
    }

    #[test]
    fn cg_rows_are_orthonormal(t1 in 0i32..=6, t2 in 0i32..=6) {
        let (l1, l2) = (h(t1), h(t2));
        let ls: Vec<_> = HalfInt::range((l1 - l2).abs(), l1 + l2).collect();
        for &l in &ls {
            for &lp in &ls {
                for m in l.projections() {
                    let s: f64 = l1.projections()
                        .map(|j| cg_su2(CgKey::new(l1, l2, l, j, m - j, m)) * cg_su2(CgKey::new(l1, l2, lp, j, m - j, m)))
                        .sum();
                    prop_assert!((s - f64::from(u8::from(l == lp))).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn top_corner_of_sph_p(tl in 0i32..=8, theta in 0.0..3.1f64) {
        let l = h(tl);
        let v = sph_p(l, l, l, theta).unwrap();
        prop_assert!((v - (theta / 2.0).cos().powi(tl)).norm() < 1e-13);
    }

    #[test]
    fn hyperspherical_routes_agree(tl in 0i32..=8, theta in 0.0..3.14f64, tau in -2.0..2.0f64) {
        for key in HypersphericalKey::all(h(tl)) {
            prop_assert!((z_series(key, theta, tau) - z_factorized(key, theta, tau)).norm() < 1e-10);
        }
    }

    #[test]
    fn fundamental_matrix_is_unimodular(g in point()) {
        let f = fundamental_matrix(&g);
        let d = f.data();
        prop_assert!((d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)] - 1.0).norm() < 1e-12);
        prop_assert!(f.max_abs_diff(&m_matrix(HalfInt::HALF, &g)) < 1e-12);
    }

    #[test]
    fn rep_matrix_is_a_homomorphism(g1 in point(), g2 in point(), tl in 0i32..=3, tld in 0i32..=2) {
        let g = compose(&g1, &g2).unwrap();
        let lhs = &rep_matrix(h(tl), h(tld), &g1).unwrap() * &rep_matrix(h(tl), h(tld), &g2).unwrap();
        let rhs = rep_matrix(h(tl), h(tld), &g).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) / (1.0 + rhs.max_abs()) < 1e-9);
    }

    #[test]
    fn clifford_generators_anticommute(n in 1usize..=10) {
        let rep = verify_clifford(&brauer_weyl(n).unwrap());
        prop_assert!(rep.failures.is_empty());
    }

    #[test]
    fn random_tables_keep_invariance(seed in any::<u64>(), which in 0usize..5) {
        let chain = sample_chains().swap_remove(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let one = Complex64::new(1.0, 0.0);
        let sys = GYSystem::build(chain.clone(), random_table(&chain, &mut rng), random_table(&chain, &mut rng), one, one).unwrap();
        let gens = CarrierGenerators::new(&chain).unwrap();
        let rep = verify_invariance(&sys, &gens).unwrap();
        prop_assert!(rep.max_residual < 1e-12 * (1.0 + sys.lambdas[2].max_abs().max(sys.lambdas_dot[2].max_abs())));
    }

    #[test]
    fn radial_assembly_is_linear(seed in any::<u64>(), which in 0usize..5, s in -2.0..2.0f64) {
        let chain = sample_chains().swap_remove(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_table(&chain, &mut rng), random_table(&chain, &mut rng));
        let mut sum = CoeffTable::default();
        for (k, v) in &a.0 {
            *sum.0.entry(*k).or_insert(Complex64::new(0.0, 0.0)) += *v;
        }
        for (k, v) in &b.0 {
            *sum.0.entry(*k).or_insert(Complex64::new(0.0, 0.0)) += *v * s;
        }
        let one = Complex64::new(1.0, 0.0);
        let lmax = chain.carrier().iter().map(|x| x.l).max().unwrap();
        let build = |t: &CoeffTable| {
            let sys = GYSystem::build(chain.clone(), t.clone(), t.clone(), one, one).unwrap();
            assemble_rfs(&sys, lmax, lmax, SignConvention::Literal).unwrap().undotted
        };
        let scaled_b = CoeffTable(b.0.iter().map(|(k, v)| (*k, *v * s)).collect());
        let (ra, rb, rs) = (build(&a), build(&scaled_b), build(&sum));
        prop_assert!((&ra.deriv + &rb.deriv).max_abs_diff(&rs.deriv) < 1e-12);
        prop_assert!((&ra.inv_r + &rb.inv_r).max_abs_diff(&rs.inv_r) < 1e-12);
        // neighbor structure
        for ((eq, un), _) in rs.coefficients() {
            prop_assert!((eq.l - un.l).abs() <= HalfInt::ONE && (eq.m - un.m).abs() <= HalfInt::ONE);
        }
    }
}
