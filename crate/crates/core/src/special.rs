//! Factorials and terminating hypergeometric series.

use num_complex::Complex64;

use crate::error::{Error, Result};

const FACTORIALS: [u64; 21] = {
    let mut t = [1u64; 21];
    let mut i = 1;
    while i < 21 {
        t[i] = t[i - 1] * i as u64;
        i += 1;
    }
    t
};

/// n! for n ≤ 20, exactly.
pub fn factorial_exact(n: u32) -> Option<u64> {
    FACTORIALS.get(n as usize).copied()
}

/// ln(n!): exact product up to 20!, Stirling series beyond.
pub fn ln_factorial(n: i64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain(format!("ln_factorial of negative {n}")));
    }
    if n <= 20 {
        return Ok((FACTORIALS[n as usize] as f64).ln());
    }
    // ln Γ(x) with x = n + 1 ≥ 22; the truncated series is accurate to ~x^-11.
    let x = n as f64 + 1.0;
    let x2 = x * x;
    let series = 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2)
        - 1.0 / (1680.0 * x * x2 * x2 * x2)
        + 1.0 / (1188.0 * x * x2 * x2 * x2 * x2);
    Ok((x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series)
}

/// n! as a float (exact up to 20!).
pub fn factorial(n: i64) -> Result<f64> {
    if (0..=20).contains(&n) {
        Ok(FACTORIALS[n as usize] as f64)
    } else {
        ln_factorial(n).map(f64::exp)
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator (real and imaginary parts separately).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSumC {
    re: KahanSum,
    im: KahanSum,
}

impl KahanSumC {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Some(n) when x = −n for an integer n ≥ 0.
fn nonpositive_integer(x: f64) -> Option<usize> {
    (x <= 0.0 && x.fract() == 0.0 && x > -1e9).then(|| (-x) as usize)
}

/// Number of the last nonzero term of a terminating series with the given
/// upper parameters.
fn truncation(upper: &[f64]) -> Option<usize> {
    upper.iter().filter_map(|&a| nonpositive_integer(a)).min()
}

fn check_lower(lower: &[f64], last: usize) -> Result<()> {
    for &b in lower {
        if let Some(p) = nonpositive_integer(b) {
            // (b)_s vanishes once s > p; terms up to `last` need s ≤ last.
            if p < last {
                return Err(Error::Pole { term: p + 1 });
            }
        }
    }
    Ok(())
}

/// Terminating ₂F₁(a, b; c; x), summed term by term with compensation.
pub fn hyp2f1_term(a: f64, b: f64, c: f64, x: Complex64) -> Result<Complex64> {
    let last = truncation(&[a, b])
        .ok_or_else(|| Error::NonTerminating(format!("2F1({a}, {b}; {c}; x)")))?;
    check_lower(&[c], last)?;
    let mut acc = KahanSumC::default();
    let mut term = Complex64::new(1.0, 0.0);
    acc.add(term);
    for s in 0..last {
        let s = s as f64;
        term *= x * ((a + s) * (b + s) / ((c + s) * (s + 1.0)));
        acc.add(term);
    }
    Ok(acc.value())
}

/// Terminating ₃F₂(a1, a2, a3; b1, b2; 1).
pub fn hyp3f2_unit(a1: f64, a2: f64, a3: f64, b1: f64, b2: f64) -> Result<f64> {
    let last = truncation(&[a1, a2, a3])
        .ok_or_else(|| Error::NonTerminating(format!("3F2({a1}, {a2}, {a3}; {b1}, {b2}; 1)")))?;
    check_lower(&[b1, b2], last)?;
    let mut acc = KahanSum::default();
    let mut term = 1.0;
    acc.add(term);
    for s in 0..last {
        let s = s as f64;
        term *= (a1 + s) * (a2 + s) * (a3 + s) / ((b1 + s) * (b2 + s) * (s + 1.0));
        acc.add(term);
    }
    Ok(acc.value())
}

/// Σ_s (a1)_s (a2)_s (a3)_s / ((b1)_s s! Γ(b2+s)) at unit argument, for an
/// integer `b2`; terms with Γ at a non-positive integer vanish.
pub fn hyp3f2_unit_regularized(a1: f64, a2: f64, a3: f64, b1: f64, b2: i64) -> Result<f64> {
    let last = truncation(&[a1, a2, a3])
        .ok_or_else(|| Error::NonTerminating(format!("3F2({a1}, {a2}, {a3}; {b1}, {b2}; 1)")))?;
    check_lower(&[b1], last)?;
    let mut acc = KahanSum::default();
    let mut poch = 1.0;
    for s in 0..=last {
        if s > 0 {
            let t = (s - 1) as f64;
            poch *= (a1 + t) * (a2 + t) * (a3 + t) / ((b1 + t) * (t + 1.0));
        }
        let g = b2 + s as i64;
        if g >= 1 {
            acc.add(poch / factorial(g - 1)?);
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn ln_factorial_examples() {
        assert_eq!(ln_factorial(0).unwrap(), 0.0);
        assert_eq!(ln_factorial(1).unwrap(), 0.0);
        assert!((ln_factorial(5).unwrap() - 4.787491742782046).abs() < 1e-15);
        assert!(ln_factorial(-1).is_err());
    }

    #[test]
    fn ln_factorial_crosses_table_boundary_smoothly() {
        // ln 21! against the exact table value times 21
        let exact = (FACTORIALS[20] as f64).ln() + 21f64.ln();
        assert!((ln_factorial(21).unwrap() - exact).abs() / exact < 1e-15);
    }

    #[test]
    fn hyp2f1_examples() {
        let x = c64(0.37, -1.2);
        assert_eq!(hyp2f1_term(0.0, 2.5, 1.5, x).unwrap(), c64(1.0, 0.0));
        let v = hyp2f1_term(-1.0, 2.0, 3.0, c64(0.5, 0.0)).unwrap();
        assert!((v - c64(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(hyp2f1_term(-2.0, 1.0, 1.0, c64(1.0, 0.0)).unwrap(), c64(0.0, 0.0));
        assert!(matches!(hyp2f1_term(0.5, 1.5, 2.0, x), Err(Error::NonTerminating(_))));
        assert!(matches!(hyp2f1_term(-3.0, 1.0, -1.0, x), Err(Error::Pole { .. })));
    }

    #[test]
    fn hyp3f2_examples() {
        assert_eq!(hyp3f2_unit(0.0, 3.0, 4.0, 1.5, 2.5).unwrap(), 1.0);
        assert!((hyp3f2_unit(-1.0, 2.0, 3.0, 4.0, 5.0).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(hyp3f2_unit(-1.0, 1.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(matches!(hyp3f2_unit(-3.0, 1.0, 1.0, -1.0, 1.0), Err(Error::Pole { .. })));
        assert!(hyp3f2_unit(0.5, 1.0, 1.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn regularized_matches_plain_for_positive_b2() {
        // Σ ... / Γ(b2+s) = F / Γ(b2) when b2 ≥ 1
        let plain = hyp3f2_unit(-3.0, 2.0, -2.0, 1.5, 3.0).unwrap();
        let reg = hyp3f2_unit_regularized(-3.0, 2.0, -2.0, 1.5, 3).unwrap();
        assert!((reg - plain / 2.0).abs() < 1e-15);
    }

    #[test]
    fn regularized_skips_gamma_poles() {
        // b2 = -1: only s ≥ 2 contributes
        let v = hyp3f2_unit_regularized(-3.0, 1.0, 1.0, 1.0, -1).unwrap();
        // s=2: (-3)_2 (1)_2 (1)_2 / ((1)_2 2!) / Γ(1) = 6*2*2/(2*2) = 6
        // s=3: (-3)_3 (1)_3 (1)_3 / ((1)_3 3!) / Γ(2) = -6*6*6/(6*6) = -6
        assert!(v.abs() < 1e-15);
    }
}
