//! Finite fields F_p and F_{p^k}.
//!
//! Every extension is built directly over the prime field with a canonical
//! modulus: the lexicographically smallest monic irreducible polynomial of
//! degree k, comparing coefficients from the constant term upwards. An
//! element is its coefficient vector in the basis 1, x, ..., x^(k-1), and its
//! canonical index is the base-p integer `sum c_i p^i`; index 0 is zero.

pub(crate) mod poly;
mod tables;

pub use tables::{ExtensionField, FieldTables};

use crate::{Error, Result};

pub const MAX_DEGREE: u32 = 24;

/// Deterministic primality test by trial division (inputs here are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FField {
    p: u32,
    k: u32,
    /// Monic, low degree first, length k + 1.
    modulus: Vec<u32>,
    order: u64,
}

/// Element of some `FField`: coefficients reduced mod p, length = degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElem {
    coeffs: Vec<u32>,
}

impl FFElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl FField {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(k));
        }
        if p >= 1 << 16 {
            return Err(Error::FieldTooLarge { p, k });
        }
        let order = (p as u64)
            .checked_pow(k)
            .filter(|&q| q < 1 << 62)
            .ok_or(Error::FieldTooLarge { p, k })?;
        let modulus = canonical_modulus(p, k);
        Ok(FField {
            p,
            k,
            modulus,
            order,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of elements, p^k.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn zero(&self) -> FFElem {
        FFElem {
            coeffs: vec![0; self.k as usize],
        }
    }

    pub fn one(&self) -> FFElem {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> FFElem {
        let mut e = self.zero();
        e.coeffs[0] = c.rem_euclid(self.p as i64) as u32;
        e
    }

    /// The class of the variable x (a root of the modulus).
    pub fn gen_x(&self) -> FFElem {
        if self.k == 1 {
            // x = -m_0 in the prime field.
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FFElem {
        assert!(coeffs.len() <= self.k as usize, "too many coefficients");
        let mut e = self.zero();
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = c % self.p;
        }
        e
    }

    pub fn from_index(&self, mut idx: u64) -> FFElem {
        debug_assert!(idx < self.order);
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = (idx % self.p as u64) as u32;
            idx /= self.p as u64;
        }
        e
    }

    pub fn index(&self, x: &FFElem) -> u64 {
        x.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn add(&self, x: &FFElem, y: &FFElem) -> FFElem {
        FFElem {
            coeffs: x
                .coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(&a, &b)| (a + b) % self.p)
                .collect(),
        }
    }

    pub fn sub(&self, x: &FFElem, y: &FFElem) -> FFElem {
        FFElem {
            coeffs: x
                .coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(&a, &b)| (a + self.p - b) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, x: &FFElem) -> FFElem {
        FFElem {
            coeffs: x.coeffs.iter().map(|&a| (self.p - a) % self.p).collect(),
        }
    }

    pub fn scale(&self, x: &FFElem, c: u32) -> FFElem {
        let p = self.p as u64;
        FFElem {
            coeffs: x
                .coeffs
                .iter()
                .map(|&a| (a as u64 * (c as u64 % p) % p) as u32)
                .collect(),
        }
    }

    pub fn mul(&self, x: &FFElem, y: &FFElem) -> FFElem {
        let k = self.k as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] += a as u64 * b as u64;
            }
            if i % 8 == 7 {
                prod.iter_mut().for_each(|c| *c %= p);
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i] % p;
            prod[i] = 0;
            if c == 0 {
                continue;
            }
            for j in 0..k {
                // x^k = -sum m_j x^j
                prod[i - k + j] += c * (p - self.modulus[j] as u64);
            }
            prod[i - 1] %= p;
        }
        FFElem {
            coeffs: prod[..k].iter().map(|&c| (c % p) as u32).collect(),
        }
    }

    pub fn pow(&self, x: &FFElem, mut e: u64) -> FFElem {
        let mut result = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, x: &FFElem) -> Option<FFElem> {
        if x.is_zero() {
            None
        } else {
            Some(self.pow(x, self.order - 2))
        }
    }

    pub fn frobenius(&self, x: &FFElem) -> FFElem {
        self.pow(x, self.p as u64)
    }

    /// Absolute trace to F_p: x + x^p + ... + x^(p^(k-1)).
    pub fn trace(&self, x: &FFElem) -> u32 {
        let mut acc = self.zero();
        let mut cur = x.clone();
        for _ in 0..self.k {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// Every nonzero element exactly once, in canonical index order.
    pub fn units(&self) -> impl Iterator<Item = FFElem> + '_ {
        (1..self.order).map(move |i| self.from_index(i))
    }

    /// Multiplicative order of a unit.
    pub fn element_order(&self, x: &FFElem) -> u64 {
        assert!(!x.is_zero(), "zero has no multiplicative order");
        let mut ord = self.order - 1;
        for (r, _) in factorize(self.order - 1) {
            while ord.is_multiple_of(r) && self.pow(x, ord / r) == self.one() {
                ord /= r;
            }
        }
        ord
    }

    pub fn is_generator(&self, x: &FFElem) -> bool {
        !x.is_zero()
            && factorize(self.order - 1)
                .iter()
                .all(|&(r, _)| self.pow(x, (self.order - 1) / r) != self.one())
    }

    /// A multiplicative generator; elements of degree <= 1 are tried first so
    /// table builders can multiply by it in linear time.
    pub fn generator(&self) -> FFElem {
        let p = self.p as u64;
        let linear = (1..p).flat_map(|c1| (0..p).map(move |c0| (c1, c0)));
        for (c1, c0) in linear {
            let mut coeffs = vec![c0 as u32];
            if self.k > 1 {
                coeffs.push(c1 as u32);
            } else if c1 != 1 {
                continue;
            }
            let g = self.from_coeffs(&coeffs);
            if self.is_generator(&g) {
                return g;
            }
        }
        self.units()
            .find(|g| self.is_generator(g))
            .expect("a finite field has a generator")
    }

    /// Evaluates a polynomial with F_p coefficients (low degree first) at x.
    pub fn eval_fp_poly(&self, poly: &[u32], x: &FFElem) -> FFElem {
        poly.iter().rev().fold(self.zero(), |acc, &c| {
            let t = self.mul(&acc, x);
            self.add(&t, &self.from_int(c as i64))
        })
    }
}

fn canonical_modulus(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    // Candidate N encodes (c_0, ..., c_{k-1}) with c_0 most significant, so
    // increasing N walks the low-degree-first lexicographic order.
    let total = (p as u64).pow(k);
    for n in 0..total {
        let mut coeffs = vec![0u32; k as usize + 1];
        let mut rest = n;
        for i in (0..k as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[k as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        if poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_modulus_is_x() {
        let f = FField::new(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 3);
        let units: Vec<u64> = f.units().map(|u| f.index(&u)).collect();
        assert_eq!(units, vec![1, 2]);
    }

    #[test]
    fn f9_modulus_and_units() {
        let f = FField::new(3, 2).unwrap();
        // (c0, c1) = (0, *) is divisible by x; (1, 0) gives x^2 + 1.
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.units().count(), 8);
        assert!(f.units().all(|u| !u.is_zero()));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FField::new(9, 1), Err(Error::NotPrime(9))));
        assert!(matches!(FField::new(3, 0), Err(Error::DegreeOutOfRange(0))));
        assert!(matches!(FField::new(3, 25), Err(Error::DegreeOutOfRange(25))));
    }

    #[test]
    fn f625_has_generator_of_full_order() {
        let f = FField::new(5, 4).unwrap();
        assert_eq!(factorize(624), vec![(2, 4), (3, 1), (13, 1)]);
        let g = f.generator();
        assert_eq!(f.element_order(&g), 624);
        // Independent check: the powers of g hit every unit.
        let mut seen = std::collections::HashSet::new();
        let mut cur = f.one();
        for _ in 0..624 {
            seen.insert(f.index(&cur));
            cur = f.mul(&cur, &g);
        }
        assert_eq!(seen.len(), 624);
        assert_eq!(cur, f.one());
    }

    #[test]
    fn trace_examples() {
        let f3 = FField::new(3, 1).unwrap();
        assert_eq!(f3.trace(&f3.from_int(2)), 2);
        let f9 = FField::new(3, 2).unwrap();
        assert_eq!(f9.trace(&f9.zero()), 0);
        let g = f9.generator();
        let direct = f9.add(&g, &f9.pow(&g, 3));
        assert!(direct.coeffs()[1..].iter().all(|&c| c == 0));
        assert_eq!(f9.trace(&g), direct.coeffs()[0]);
    }

    #[test]
    fn wilson_for_f125() {
        let f = FField::new(5, 3).unwrap();
        assert_eq!(f.units().count(), 124);
        let prod = f.units().fold(f.one(), |acc, u| f.mul(&acc, &u));
        assert_eq!(prod, f.from_int(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = FField::new(7, 3).unwrap();
        for u in f.units().step_by(17) {
            let v = f.inv(&u).unwrap();
            assert_eq!(f.mul(&u, &v), f.one());
        }
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn canonical_moduli_are_lexicographically_first() {
        for (p, k) in [(2, 3), (3, 3), (5, 2), (7, 2)] {
            let f = FField::new(p, k).unwrap();
            let m = f.modulus().to_vec();
            assert!(poly::is_irreducible(&m, p));
            // no smaller candidate is irreducible
            let key = |c: &[u32]| c[..k as usize].to_vec();
            let total = (p as u64).pow(k);
            for n in 0..total {
                let mut cand = vec![0u32; k as usize + 1];
                let mut rest = n;
                for i in (0..k as usize).rev() {
                    cand[i] = (rest % p as u64) as u32;
                    rest /= p as u64;
                }
                cand[k as usize] = 1;
                if key(&cand) >= key(&m) {
                    break;
                }
                assert!(!poly::is_irreducible(&cand, p), "{cand:?} precedes {m:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn trace_is_additive_and_lands_in_prime_field(a in 0u64..625, b in 0u64..625) {
            let f = FField::new(5, 4).unwrap();
            let x = f.from_index(a);
            let y = f.from_index(b);
            let t = f.trace(&f.add(&x, &y));
            prop_assert_eq!(t, (f.trace(&x) + f.trace(&y)) % 5);
            // Tr(x)^p = Tr(x) in F_p
            let tx = f.from_int(f.trace(&x) as i64);
            prop_assert_eq!(f.frobenius(&tx), tx);
        }

        #[test]
        fn frobenius_has_order_k_on_units(a in 1u64..343) {
            let f = FField::new(7, 3).unwrap();
            let x = f.from_index(a);
            let mut y = x.clone();
            for _ in 0..3 {
                y = f.frobenius(&y);
            }
            prop_assert_eq!(y, x);
        }
    }
}
