//! Exact spin labels, basis enumeration and group-point parameters.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Integer value, if the label is integral.
    pub fn as_int(self) -> Option<i32> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    pub fn is_negative(self) -> bool {
        self.twice < 0
    }

    /// `self - other` as an integer; panics on a half-integral difference.
    pub fn int_diff(self, other: HalfInt) -> i32 {
        let d = self.twice - other.twice;
        assert!(d % 2 == 0, "half-integral difference {self} - {other}");
        d / 2
    }

    /// Values `self, self-1, ..., -self` (projection ladder, descending).
    pub fn projections(self) -> impl Iterator<Item = HalfInt> + Clone {
        let t = self.twice;
        (0..(t + 1).max(0)).map(move |i| HalfInt::from_twice(t - 2 * i))
    }

    /// `from, from+1, ..., to` inclusive (empty when `to < from`).
    pub fn range(from: HalfInt, to: HalfInt) -> impl Iterator<Item = HalfInt> + Clone {
        let n = if to.twice >= from.twice { (to.twice - from.twice) / 2 + 1 } else { 0 };
        (0..n).map(move |i| HalfInt::from_twice(from.twice + 2 * i))
    }
}

impl Ord for HalfInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice.cmp(&other.twice)
    }
}

impl PartialOrd for HalfInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + o.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - o.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"3/2"`, `"-1/2"`, `"4/2"`, `"2"` and `"1.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(HalfInt::from_twice(num)),
                "1" => Ok(HalfInt::from_int(num)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = s.parse::<i32>() {
            Ok(HalfInt::from_int(n))
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let t = 2.0 * x;
            if t.fract() != 0.0 || t.abs() > i32::MAX as f64 {
                return Err(bad());
            }
            Ok(HalfInt::from_twice(t as i32))
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand `h(1)` = 1/2, `h(3)` = 3/2.
pub const fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// Basis vector label |l, m; l̇, ṁ⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub l: HalfInt,
    pub m: HalfInt,
    pub ldot: HalfInt,
    pub mdot: HalfInt,
}

impl BasisIndex {
    pub fn new(l: HalfInt, m: HalfInt, ldot: HalfInt, mdot: HalfInt) -> Result<Self> {
        if !valid_projection(l, m) || !valid_projection(ldot, mdot) {
            return Err(Error::Domain(format!("invalid basis label ({l},{m};{ldot},{mdot})")));
        }
        Ok(BasisIndex { l, m, ldot, mdot })
    }

    /// Undotted-only label (l, m; 0, 0).
    pub fn undotted(l: HalfInt, m: HalfInt) -> Self {
        BasisIndex { l, m, ldot: HalfInt::ZERO, mdot: HalfInt::ZERO }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.l, self.m, self.ldot, self.mdot)
    }
}

/// True when `|m| <= l` and `l - m` is an integer.
pub fn valid_projection(l: HalfInt, m: HalfInt) -> bool {
    !l.is_negative() && m.abs() <= l && (l - m).is_integer()
}

/// Basis of the (l, l̇) representation: m descending, then ṁ descending.
pub fn enumerate_basis(l: HalfInt, ldot: HalfInt) -> Result<Vec<BasisIndex>> {
    if l.is_negative() || ldot.is_negative() {
        return Err(Error::Domain(format!("negative spin label ({l}, {ldot})")));
    }
    let mut out = Vec::with_capacity(((l.twice() + 1) * (ldot.twice() + 1)) as usize);
    for m in l.projections() {
        for mdot in ldot.projections() {
            out.push(BasisIndex { l, m, ldot, mdot });
        }
    }
    Ok(out)
}

/// Complexified Euler parameters: φᶜ = φ − iε, θᶜ = θ − iτ, ψᶜ = ψ − iϵ̃.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GroupPoint {
    pub phi: f64,
    pub eps: f64,
    pub theta: f64,
    pub tau: f64,
    pub psi: f64,
    pub veps: f64,
}

impl GroupPoint {
    pub const IDENTITY: GroupPoint =
        GroupPoint { phi: 0.0, eps: 0.0, theta: 0.0, tau: 0.0, psi: 0.0, veps: 0.0 };

    pub fn new(phi: f64, eps: f64, theta: f64, tau: f64, psi: f64, veps: f64) -> Self {
        GroupPoint { phi, eps, theta, tau, psi, veps }
    }

    pub fn rotation(phi: f64, theta: f64, psi: f64) -> Self {
        GroupPoint { phi, theta, psi, ..Self::IDENTITY }
    }

    pub fn is_finite(&self) -> bool {
        [self.phi, self.eps, self.theta, self.tau, self.psi, self.veps]
            .iter()
            .all(|x| x.is_finite())
    }

    /// Same group element with 0 ≤ θ ≤ π, 0 ≤ φ < 2π, −2π ≤ ψ < 2π.
    pub fn normalized(&self) -> Self {
        let mut g = *self;
        // θ is 4π-periodic; a 2π shift flips the sign, absorbed by ψ.
        g.theta = g.theta.rem_euclid(4.0 * PI);
        if g.theta >= 2.0 * PI {
            g.theta -= 2.0 * PI;
            g.psi += 2.0 * PI;
        }
        if g.theta > PI {
            g.theta -= 2.0 * PI;
            g.psi += 2.0 * PI;
        }
        if g.theta < 0.0 {
            // g(φ, −θᶜ, ψ) = g(φ+π, θᶜ, ψ−π)
            g.theta = -g.theta;
            g.tau = -g.tau;
            g.phi += PI;
            g.psi -= PI;
        }
        let turns = (g.phi / (2.0 * PI)).floor();
        g.phi -= 2.0 * PI * turns;
        g.psi += 2.0 * PI * turns;
        if g.phi >= 2.0 * PI {
            g.phi -= 2.0 * PI;
            g.psi += 2.0 * PI;
        }
        g.psi = (g.psi + 2.0 * PI).rem_euclid(4.0 * PI) - 2.0 * PI;
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfint_display_and_parse_round_trip() {
        for t in -9..=9 {
            let x = HalfInt::from_twice(t);
            assert_eq!(x.to_string().parse::<HalfInt>().unwrap(), x);
        }
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), h(3));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), h(4));
        assert_eq!("1.5".parse::<HalfInt>().unwrap(), h(3));
        assert_eq!(h(-1).to_string(), "-1/2");
        assert_eq!(h(4).to_string(), "2");
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.25".parse::<HalfInt>().is_err());
    }

    #[test]
    fn halfint_arithmetic() {
        assert_eq!(h(1) + h(1), HalfInt::ONE);
        assert_eq!(h(3) - h(1), HalfInt::ONE);
        assert!(h(2).is_integer() && !h(3).is_integer());
        assert!(h(-3) < h(1));
        assert_eq!(h(3).projections().collect::<Vec<_>>(), vec![h(3), h(1), h(-1), h(-3)]);
        assert_eq!(HalfInt::range(h(1), h(5)).count(), 3);
        assert_eq!(HalfInt::range(h(5), h(1)).count(), 0);
    }

    #[test]
    fn basis_examples() {
        let b = enumerate_basis(HalfInt::ZERO, HalfInt::ZERO).unwrap();
        assert_eq!(b, vec![BasisIndex::undotted(HalfInt::ZERO, HalfInt::ZERO)]);
        assert_eq!(enumerate_basis(h(1), HalfInt::ZERO).unwrap().len(), 2);
        let b = enumerate_basis(h(1), h(1)).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!((b[0].m, b[0].mdot), (h(1), h(1)));
        assert_eq!((b[1].m, b[1].mdot), (h(1), h(-1)));
        assert_eq!((b[3].m, b[3].mdot), (h(-1), h(-1)));
        assert!(enumerate_basis(h(-1), HalfInt::ZERO).is_err());
    }

    #[test]
    fn basis_index_validation() {
        assert!(BasisIndex::new(h(1), h(3), HalfInt::ZERO, HalfInt::ZERO).is_err());
        assert!(BasisIndex::new(h(2), h(1), HalfInt::ZERO, HalfInt::ZERO).is_err());
        assert!(BasisIndex::new(h(2), h(-2), h(1), h(1)).is_ok());
    }

    #[test]
    fn normalization_ranges() {
        let g = GroupPoint::new(7.0, 0.1, -2.5, 0.3, 9.0, -0.2).normalized();
        assert!((0.0..=PI).contains(&g.theta));
        assert!((0.0..2.0 * PI).contains(&g.phi));
        assert!((-2.0 * PI..2.0 * PI).contains(&g.psi));
    }
}
