//! SU(2) spherical functions, QU(2) Jacobi functions and Clebsch–Gordan
//! coefficients.
//!
//! `sph_p` carries the `i^{m-n}` phase of the helicity-basis convention;
//! [`wigner_d`] strips it to give the real Wigner d-function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{hyp3f2_unit, hyp3f2_unit_regularized, ln_factorial, KahanSum};
use crate::spin::{valid_projection, HalfInt};

/// i^k for integer k.
pub fn i_pow(k: i32) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn check_key(l: HalfInt, m: HalfInt, n: HalfInt) -> Result<()> {
    if valid_projection(l, m) && valid_projection(l, n) {
        Ok(())
    } else {
        Err(Error::Domain(format!("invalid key l={l}, m={m}, n={n}")))
    }
}

fn lf(n: i32) -> f64 {
    ln_factorial(n as i64).expect("non-negative by construction")
}

/// sqrt((l−m)!(l+m)!(l−n)!(l+n)!)
fn norm_factor(l: HalfInt, m: HalfInt, n: HalfInt) -> f64 {
    (0.5 * (lf(l.int_diff(m)) + lf((l + m).as_int().unwrap()) + lf(l.int_diff(n)) + lf((l + n).as_int().unwrap())))
        .exp()
}

/// Σ_j sign^j c^{2l−(m−n)−2j} s^{m−n+2j} / (j!(l−m−j)!(l+n−j)!(m−n+j)!)
fn half_angle_sum(l: HalfInt, m: HalfInt, n: HalfInt, c: f64, s: f64, sign: f64) -> f64 {
    let lm = l.int_diff(m);
    let ln = (l + n).as_int().unwrap();
    let d = m.int_diff(n);
    let lo = 0.max(-d);
    let hi = lm.min(ln);
    let mut acc = KahanSum::default();
    for j in lo..=hi {
        let ln_den = lf(j) + lf(lm - j) + lf(ln - j) + lf(d + j);
        let pc = lm - j + ln - j;
        let ps = d + 2 * j;
        let t = c.powi(pc) * s.powi(ps) * (-ln_den).exp();
        acc.add(if j % 2 == 0 { t } else { sign * t });
    }
    acc.value()
}

/// Generalized spherical function P^l_mn(cos θ) in the helicity phase
/// convention (the i^{m−n} factor included).
pub fn sph_p(l: HalfInt, m: HalfInt, n: HalfInt, theta: f64) -> Result<Complex64> {
    check_key(l, m, n)?;
    let (s, c) = (0.5 * theta).sin_cos();
    let v = norm_factor(l, m, n) * half_angle_sum(l, m, n, c, s, -1.0);
    Ok(i_pow(m.int_diff(n)) * v)
}

/// Real Wigner d^l_mn(θ) = i^{m−n} P^l_mn(cos θ).
pub fn wigner_d(l: HalfInt, m: HalfInt, n: HalfInt, theta: f64) -> Result<f64> {
    Ok((i_pow(m.int_diff(n)) * sph_p(l, m, n, theta)?).re)
}

/// Jacobi function 𝔓^l_mn(cosh τ) of the boost subgroup.
pub fn jac_p(l: HalfInt, m: HalfInt, n: HalfInt, tau: f64) -> Result<f64> {
    check_key(l, m, n)?;
    let (s, c) = ((0.5 * tau).sinh(), (0.5 * tau).cosh());
    // 𝔓_mn carries tanh^{n−m}: the same sum with the roles of m and n swapped.
    Ok(norm_factor(l, n, m) * half_angle_sum(l, n, m, c, s, 1.0))
}

/// Key of an SU(2) Clebsch–Gordan coefficient C(l1, l2, l; j, k, m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CgKey {
    pub l1: HalfInt,
    pub l2: HalfInt,
    pub l: HalfInt,
    pub j: HalfInt,
    pub k: HalfInt,
    pub m: HalfInt,
}

impl CgKey {
    pub fn new(l1: HalfInt, l2: HalfInt, l: HalfInt, j: HalfInt, k: HalfInt, m: HalfInt) -> Self {
        CgKey { l1, l2, l, j, k, m }
    }

    /// Triangle rule, projection ranges and m = j + k.
    pub fn is_allowed(&self) -> bool {
        let tri = self.l >= (self.l1 - self.l2).abs()
            && self.l <= self.l1 + self.l2
            && (self.l1 + self.l2 - self.l).is_integer();
        tri && valid_projection(self.l1, self.j)
            && valid_projection(self.l2, self.k)
            && valid_projection(self.l, self.m)
            && self.m == self.j + self.k
    }

    /// All allowed keys with l1, l2 fixed.
    pub fn enumerate(l1: HalfInt, l2: HalfInt) -> Vec<CgKey> {
        let mut out = Vec::new();
        for l in HalfInt::range((l1 - l2).abs(), l1 + l2) {
            for j in l1.projections() {
                for k in l2.projections() {
                    let key = CgKey::new(l1, l2, l, j, k, j + k);
                    if key.is_allowed() {
                        out.push(key);
                    }
                }
            }
        }
        out
    }
}

/// Condon–Shortley Clebsch–Gordan coefficient by the Racah sum.
pub fn cg_su2(key: CgKey) -> f64 {
    if !key.is_allowed() {
        return 0.0;
    }
    let CgKey { l1, l2, l, j, k, m } = key;
    let i = |x: HalfInt| x.as_int().expect("integral by selection rules");
    let ln_pre = 0.5
        * ((2.0 * l.value() + 1.0).ln() + lf(i(l + l1 - l2)) + lf(i(l - l1 + l2)) + lf(i(l1 + l2 - l))
            - lf(i(l1 + l2 + l) + 1)
            + lf(i(l + m))
            + lf(i(l - m))
            + lf(i(l1 - j))
            + lf(i(l1 + j))
            + lf(i(l2 - k))
            + lf(i(l2 + k)));
    let a = i(l1 + l2 - l);
    let b = i(l1 - j);
    let c = i(l2 + k);
    let d = i(l - l2 + j);
    let e = i(l - l1 - k);
    let lo = 0.max(-d).max(-e);
    let hi = a.min(b).min(c);
    let mut acc = KahanSum::default();
    for s in lo..=hi {
        let t = (ln_pre - lf(s) - lf(a - s) - lf(b - s) - lf(c - s) - lf(d + s) - lf(e + s)).exp();
        acc.add(if s % 2 == 0 { t } else { -t });
    }
    acc.value()
}

/// Which ₃F₂ closed form of a single SU(2) factor to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cg3f2Form {
    /// Factorials exactly as printed in the product formula.
    Printed,
    /// Factorials repaired so that the form reproduces Condon–Shortley.
    Corrected,
}

/// Single SU(2) factor of the ₃F₂ closed form. `None` when the printed
/// expression is undefined (a Gamma or series pole).
pub fn cg_su2_3f2(key: CgKey, form: Cg3f2Form) -> Option<f64> {
    if !key.is_allowed() {
        return Some(0.0);
    }
    let CgKey { l1, l2, l, j, k, m } = key;
    let i = |x: HalfInt| x.as_int().expect("integral by selection rules");
    let sign = if i(l1 - j) % 2 == 0 { 1.0 } else { -1.0 };
    let a1 = (l + m).value() + 1.0;
    let a2 = (m - l).value();
    let a3 = (j - l1).value();
    let b1 = (m - l1 - l2).value();
    let b2 = i(l2 - l1 + m) + 1;
    match form {
        Cg3f2Form::Printed => {
            if b2 <= 0 {
                return None;
            }
            let ln_root = 0.5
                * (lf(i(l - m)) + lf(i(l + l2 - l1)) + lf(i(l1 - j)) + lf(i(l2 + k)) + lf(i(l + m))
                    + (2.0 * l.value() + 1.0).ln()
                    - lf(i(l1 - l2 + l))
                    - lf(i(l1 + l2 - l))
                    - lf(i(l1 + l2 + l))
                    - lf(i(l1 - j))
                    - lf(i(l2 - k)));
            let gam = lf(i(l1 + l2 - m)) - lf(b2 - 1);
            let f = hyp3f2_unit(a1, a2, a3, b1, b2 as f64).ok()?;
            Some(sign * (gam + ln_root).exp() * f)
        }
        Cg3f2Form::Corrected => {
            let ln_root = 0.5
                * (lf(i(l + m)) + lf(i(l + l2 - l1)) + lf(i(l1 + j)) + lf(i(l2 + k))
                    + (2.0 * l.value() + 1.0).ln()
                    - lf(i(l1 - l2 + l))
                    - lf(i(l1 + l2 - l))
                    - lf(i(l1 + l2 + l) + 1)
                    - lf(i(l1 - j))
                    - lf(i(l2 - k))
                    - lf(i(l - m)));
            let f = hyp3f2_unit_regularized(a1, a2, a3, b1, b2 as i64).ok()?;
            Some(sign * (lf(i(l1 + l2 - m)) + ln_root).exp() * f)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::h;
    use std::f64::consts::PI;

    /// Standard Wigner small-d sum, written independently of `sph_p`.
    fn wigner_oracle(j: HalfInt, mp: HalfInt, m: HalfInt, beta: f64) -> f64 {
        let jj = j.value();
        let (mpv, mv) = (mp.value(), m.value());
        let f = |x: f64| (1..=x.round() as i64).map(|k| k as f64).product::<f64>();
        let pre = (f(jj + mpv) * f(jj - mpv) * f(jj + mv) * f(jj - mv)).sqrt();
        let mut sum = 0.0;
        for s in 0..=(2.0 * jj).round() as i64 {
            let s_f = s as f64;
            let (a, b, c, d) = (jj + mv - s_f, s_f, mpv - mv + s_f, jj - mpv - s_f);
            if a < -0.5 || c < -0.5 || d < -0.5 {
                continue;
            }
            let sign = if (mpv - mv + s_f).round() as i64 % 2 == 0 { 1.0 } else { -1.0 };
            let cp = (2.0 * jj + mv - mpv - 2.0 * s_f).round() as i32;
            let sp = (mpv - mv + 2.0 * s_f).round() as i32;
            sum += sign * (beta / 2.0).cos().powi(cp) * (beta / 2.0).sin().powi(sp) / (f(a) * f(b) * f(c) * f(d));
        }
        pre * sum
    }

    #[test]
    fn sph_p_examples() {
        let th = 0.83;
        let v = sph_p(h(1), h(1), h(1), th).unwrap();
        assert!((v - Complex64::new((th / 2.0).cos(), 0.0)).norm() < 1e-15);
        let v = sph_p(h(1), h(1), h(-1), th).unwrap();
        assert!((v - Complex64::new(0.0, (th / 2.0).sin())).norm() < 1e-15);
        for l in 0..=6 {
            let l = h(l);
            for m in l.projections() {
                for n in l.projections() {
                    let v = sph_p(l, m, n, 0.0).unwrap();
                    let e = if m == n { 1.0 } else { 0.0 };
                    assert!((v - Complex64::new(e, 0.0)).norm() < 1e-15);
                }
            }
        }
        assert!(sph_p(h(1), h(3), h(1), 0.1).is_err());
    }

    #[test]
    fn wigner_d_matches_standard_formula() {
        for tl in 0..=8 {
            let l = h(tl);
            for m in l.projections() {
                for n in l.projections() {
                    for &th in &[0.0, 0.4, 1.7, 2.9, PI] {
                        let a = wigner_d(l, m, n, th).unwrap();
                        let b = wigner_oracle(l, m, n, th);
                        assert!((a - b).abs() < 1e-13, "d^{l}_{m},{n}({th}): {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn jac_p_examples() {
        let t = 0.77;
        assert!((jac_p(h(1), h(1), h(1), t).unwrap() - (t / 2.0).cosh()).abs() < 1e-15);
        assert!((jac_p(h(1), h(1), h(-1), t).unwrap() - (t / 2.0).sinh()).abs() < 1e-15);
        assert!((jac_p(h(1), h(-1), h(1), t).unwrap() - (t / 2.0).sinh()).abs() < 1e-15);
        for m in h(4).projections() {
            for n in h(4).projections() {
                let e = if m == n { 1.0 } else { 0.0 };
                assert_eq!(jac_p(h(4), m, n, 0.0).unwrap(), e);
            }
        }
    }

    #[test]
    fn diagonal_top_entry_is_cos_power() {
        for tl in 1..=8 {
            let l = h(tl);
            let th = 1.234;
            let v = sph_p(l, l, l, th).unwrap();
            assert!((v.re - (th / 2.0).cos().powi(tl)).abs() < 1e-13 && v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn cg_examples() {
        let k = CgKey::new(h(1), h(1), h(2), h(1), h(1), h(2));
        assert!((cg_su2(k) - 1.0).abs() < 1e-15);
        let k = CgKey::new(h(1), h(1), h(0), h(1), h(-1), h(0));
        assert!((cg_su2(k) - 0.5f64.sqrt()).abs() < 1e-15);
        let k = CgKey::new(h(2), h(2), h(0), h(2), h(-2), h(0));
        assert!((cg_su2(k) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let bad = CgKey::new(h(1), h(1), h(2), h(1), h(1), h(0));
        assert_eq!(cg_su2(bad), 0.0);
    }

    #[test]
    fn cg_known_table_values() {
        // <1 1; 1/2 -1/2 | 1/2 1/2> = sqrt(2/3), <1 0; 1/2 1/2 | 1/2 1/2> = -sqrt(1/3)
        let a = cg_su2(CgKey::new(h(2), h(1), h(1), h(2), h(-1), h(1)));
        let b = cg_su2(CgKey::new(h(2), h(1), h(1), h(0), h(1), h(1)));
        assert!((a - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((b + (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn corrected_3f2_form_matches_racah() {
        for t1 in 0..=8 {
            for t2 in 0..=8 {
                for key in CgKey::enumerate(h(t1), h(t2)) {
                    let a = cg_su2(key);
                    let b = cg_su2_3f2(key, Cg3f2Form::Corrected).unwrap();
                    assert!((a - b).abs() < 1e-12, "{key:?}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn printed_3f2_form_is_not_a_constant_multiple() {
        let mut ratios = Vec::new();
        for key in CgKey::enumerate(h(2), h(2)).into_iter().filter(|k| k.l == h(2)) {
            let a = cg_su2(key);
            if let Some(b) = cg_su2_3f2(key, Cg3f2Form::Printed) {
                if a.abs() > 1e-12 {
                    ratios.push(b / a);
                }
            }
        }
        let spread = ratios.iter().cloned().fold(f64::MIN, f64::max) - ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 1e-3);
    }
}
