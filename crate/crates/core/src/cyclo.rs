//! Exact arithmetic in Z[zeta_p] and Q(zeta_p).
//!
//! Elements are stored in the power basis 1, z, ..., z^(p-2); z^(p-1) is
//! rewritten through 1 + z + ... + z^(p-1) = 0. Products go through a
//! length-p cyclic convolution and are folded back afterwards.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coords: Vec<BigInt>,
}

/// Valuation at the prime (1 - z) above p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    /// ord_q = v / (a (p - 1)); `None` for the zero element.
    pub fn ord_q(self, p: u32, a: u32) -> Option<Rational> {
        match self {
            Valuation::Finite(v) => Some(Rational::new(v as i64, (a as i64) * (p as i64 - 1))),
            Valuation::Infinite => None,
        }
    }

    pub fn ord_p(self, p: u32) -> Option<Rational> {
        self.ord_q(p, 1)
    }
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        CycInt {
            p,
            coords: vec![BigInt::zero(); p as usize - 1],
        }
    }

    pub fn from_int<T: Into<BigInt>>(p: u32, c: T) -> Self {
        let mut x = Self::zero(p);
        x.coords[0] = c.into();
        x
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    /// z^t for any integer t.
    pub fn zeta_pow(p: u32, t: i64) -> Self {
        let t = t.rem_euclid(p as i64) as usize;
        let mut full = vec![BigInt::zero(); p as usize];
        full[t] = BigInt::one();
        Self::from_length_p(p, full)
    }

    /// Canonical form of sum c_t z^t with t running over 0..p.
    pub fn from_length_p<T: Into<BigInt>>(p: u32, full: impl IntoIterator<Item = T>) -> Self {
        let mut full: Vec<BigInt> = full.into_iter().map(Into::into).collect();
        assert_eq!(full.len(), p as usize, "length-p representation expected");
        let top = full.pop().unwrap();
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        CycInt { p, coords: full }
    }

    /// Canonical coordinates, length p - 1.
    pub fn from_coords(p: u32, coords: Vec<BigInt>) -> Self {
        assert_eq!(coords.len(), p as usize - 1);
        CycInt { p, coords }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Some(c) when the element is the rational integer c.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    pub fn max_abs_coord(&self) -> BigInt {
        self.coords
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        CycInt {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        CycInt {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CycInt {
            p: self.p,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CycInt {
            p: self.p,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        Self::from_length_p(self.p, full)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Complex conjugation, z -> z^(-1).
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in self.coords.iter().enumerate() {
            full[(p - i) % p] = c.clone();
        }
        Self::from_length_p(self.p, full)
    }

    /// Image under z -> z^s, s a unit mod p.
    pub fn galois(&self, s: u32) -> Self {
        assert!(!s.is_multiple_of(self.p), "not an automorphism");
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in self.coords.iter().enumerate() {
            full[i * s as usize % p] += c;
        }
        Self::from_length_p(self.p, full)
    }

    /// x mod (1 - z), an element of F_p.
    pub fn residue(&self) -> u32 {
        let s: BigInt = self.coords.iter().sum();
        s.mod_floor(&BigInt::from(self.p)).to_u32().unwrap()
    }

    /// Exact quotient by 1 - z, if it exists.
    pub fn div_lambda(&self) -> Option<Self> {
        if self.residue() != 0 {
            return None;
        }
        // 1/(1 - z) = prod_{i=2}^{p-1} (1 - z^i) / p
        let t = self.mul(&lambda_cofactor(self.p));
        let p = BigInt::from(self.p);
        debug_assert!(t.coords.iter().all(|c| c.is_multiple_of(&p)));
        Some(CycInt {
            p: self.p,
            coords: t.coords.into_iter().map(|c| c / &p).collect(),
        })
    }

    pub fn lambda_val(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let p = BigInt::from(self.p);
        let mut x = self.clone();
        let mut v = 0u64;
        // p is (1 - z)^(p-1) times a unit: strip whole factors of p first.
        while x.coords.iter().all(|c| c.is_multiple_of(&p)) {
            x.coords.iter_mut().for_each(|c| *c /= &p);
            v += self.p as u64 - 1;
        }
        while let Some(y) = x.div_lambda() {
            x = y;
            v += 1;
        }
        Valuation::Finite(v)
    }

    /// Value under z -> exp(2 pi i j / p).
    pub fn embed(&self, j: u32) -> Complex64 {
        let p = self.p as f64;
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let angle = 2.0 * std::f64::consts::PI * (j as f64) * (i as f64) / p;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing cyclotomic fields");
    }
}

fn lambda_cofactor(p: u32) -> CycInt {
    (2..p as i64).fold(CycInt::one(p), |acc, i| {
        acc.mul(&CycInt::one(p).sub(&CycInt::zeta_pow(p, i)))
    })
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z^{i}")?,
                _ => write!(f, "{mag}*z^{i}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Element of Q(zeta_p): numerator over a positive integer denominator,
/// with no common factor between the denominator and the numerator content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycRat {
    num: CycInt,
    den: BigInt,
}

impl CycRat {
    pub fn new(num: CycInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = CycRat { num, den };
        r.normalize();
        r
    }

    pub fn from_int(x: CycInt) -> Self {
        CycRat {
            num: x,
            den: BigInt::one(),
        }
    }

    pub fn num(&self) -> &CycInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn to_integral(&self) -> Option<CycInt> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .scale(&other.den)
            .add(&other.num.scale(&self.den));
        Self::new(num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), &self.den * &other.den)
    }

    pub fn div_int(&self, c: &BigInt) -> Self {
        Self::new(self.num.clone(), &self.den * c)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = self.num.neg();
        }
        let g = self
            .num
            .coords
            .iter()
            .fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            self.den /= &g;
            self.num.coords.iter_mut().for_each(|c| *c /= &g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_cyc(p: u32) -> impl Strategy<Value = CycInt> {
        prop::collection::vec(-50i64..50, p as usize - 1).prop_map(move |v| {
            CycInt::from_coords(p, v.into_iter().map(BigInt::from).collect())
        })
    }

    #[test]
    fn zeta_powers() {
        assert_eq!(CycInt::zeta_pow(3, 0), CycInt::one(3));
        let z2 = CycInt::zeta_pow(3, 2);
        assert_eq!(z2.coords(), &[BigInt::from(-1), BigInt::from(-1)]);
        let total = (0..5).fold(CycInt::zero(5), |acc, t| acc.add(&CycInt::zeta_pow(5, t)));
        assert!(total.is_zero());
        let z = CycInt::zeta_pow(7, 1);
        assert_eq!(z.pow(7), CycInt::one(7));
        assert_eq!(z.pow(3), CycInt::zeta_pow(7, 3));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(CycInt::one(5).conj(), CycInt::one(5));
        assert_eq!(CycInt::zeta_pow(3, 1).conj(), CycInt::zeta_pow(3, 2));
        assert_eq!(CycInt::zeta_pow(7, 3).conj(), CycInt::zeta_pow(7, 4));
    }

    #[test]
    fn valuation_examples() {
        for p in [3u32, 5, 7, 11] {
            assert_eq!(CycInt::from_int(p, p).lambda_val(), Valuation::Finite(p as u64 - 1));
            let lambda = CycInt::one(p).sub(&CycInt::zeta_pow(p, 1));
            assert_eq!(lambda.lambda_val(), Valuation::Finite(1));
            assert_eq!(CycInt::one(p).lambda_val(), Valuation::Finite(0));
        }
        assert_eq!(CycInt::zero(5).lambda_val(), Valuation::Infinite);
        // (1 - z)^3 times the unit 1 + z (a cyclotomic unit for p = 7)
        let lambda = CycInt::one(7).sub(&CycInt::zeta_pow(7, 1));
        let unit = CycInt::one(7).add(&CycInt::zeta_pow(7, 1));
        assert_eq!(unit.residue(), 2);
        assert_eq!(lambda.pow(3).mul(&unit).lambda_val(), Valuation::Finite(3));
        assert_eq!(
            Valuation::Finite(12).ord_q(7, 2),
            Some(Rational::new(1, 1))
        );
        assert_eq!(Valuation::Infinite.ord_q(7, 1), None);
    }

    #[test]
    fn embedding_examples() {
        for j in 1..3 {
            let one = CycInt::one(3).embed(j);
            assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let x = CycInt::zeta_pow(3, 1).add(&CycInt::zeta_pow(3, 2));
        assert!((x.embed(1) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cycrat_normalizes() {
        let x = CycRat::new(CycInt::from_int(5, 6), BigInt::from(-4));
        assert_eq!(x.num(), &CycInt::from_int(5, -3));
        assert_eq!(x.den(), &BigInt::from(2));
        assert!(x.to_integral().is_none());
        let y = x.add(&CycRat::new(CycInt::from_int(5, 3), BigInt::from(2)));
        assert_eq!(y.to_integral(), Some(CycInt::zero(5)));
    }

    #[test]
    fn display_is_readable() {
        let x = CycInt::from_coords(5, vec![2.into(), 0.into(), (-1).into(), 3.into()]);
        assert_eq!(x.to_string(), "2 - z^2 + 3*z^3");
        assert_eq!(CycInt::zero(3).to_string(), "0");
    }

    proptest! {
        #[test]
        fn conj_is_multiplicative_involution(x in arb_cyc(7), y in arb_cyc(7)) {
            prop_assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!(x.add(&y).conj(), x.conj().add(&y.conj()));
        }

        #[test]
        fn valuation_is_additive(x in arb_cyc(5), y in arb_cyc(5)) {
            let vx = x.lambda_val();
            let vy = y.lambda_val();
            let vxy = x.mul(&y).lambda_val();
            match (vx, vy) {
                (Valuation::Finite(a), Valuation::Finite(b)) => {
                    prop_assert_eq!(vxy, Valuation::Finite(a + b))
                }
                _ => prop_assert_eq!(vxy, Valuation::Infinite),
            }
        }

        #[test]
        fn residue_detects_lambda(x in arb_cyc(7)) {
            let positive = matches!(x.lambda_val(), Valuation::Infinite)
                || x.lambda_val() > Valuation::Finite(0);
            prop_assert_eq!(positive, x.residue() == 0);
        }

        #[test]
        fn division_by_lambda_roundtrips(x in arb_cyc(5)) {
            let lambda = CycInt::one(5).sub(&CycInt::zeta_pow(5, 1));
            let y = x.mul(&lambda);
            prop_assert_eq!(y.div_lambda().unwrap().mul(&lambda), y);
        }

        #[test]
        fn conj_symmetric_elements_have_equal_embeddings(x in arb_cyc(7)) {
            let r = x.mul(&x.conj());
            let base = r.embed(1);
            prop_assert!(base.im.abs() < 1e-9 * (1.0 + base.norm()));
            for j in 1..7 {
                // conj pairs agree and |x|^2 is positive at every embedding
                prop_assert!((r.embed(j) - r.embed(7 - j)).norm() < 1e-9 * (1.0 + base.norm()));
                prop_assert!(r.embed(j).re > -1e-9);
            }
        }
    }
}
