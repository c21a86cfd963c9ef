//! Discrete-log style tables for a fixed generator, and the embedding of
//! F_q into F_{q^k} = F_{p^(ak)}.

use super::{FFElem, FField};
use crate::{Budget, Error, Result};

/// Exponent/index tables for the powers of a generator g.
///
/// `exp[e]` is the canonical index of g^e, `log` inverts it, and `trexp[e]`
/// is Tr(g^e). Because the trace is additive, Tr of any sum of monomials in
/// g can be read off these tables without touching field addition.
#[derive(Debug)]
pub struct FieldTables {
    field: FField,
    generator: FFElem,
    exp: Vec<u32>,
    log: Vec<u32>,
    trexp: Vec<u8>,
    basis_logs: Vec<u32>,
}

const NO_LOG: u32 = u32::MAX;

impl FieldTables {
    pub fn new(field: FField, budget: &Budget) -> Result<Self> {
        budget.check_table("field tables", field.order() as u128)?;
        if field.order() >= u32::MAX as u64 || field.p() > u8::MAX as u32 {
            return Err(Error::FieldTooLarge {
                p: field.p(),
                k: field.degree(),
            });
        }
        let p = field.p();
        let k = field.degree() as usize;
        let q1 = (field.order() - 1) as usize;
        let generator = field.generator();
        let g = generator.coeffs().to_vec();
        let linear = g.iter().skip(2).all(|&c| c == 0);

        let mut basis_tr = vec![0u32; k];
        for (i, t) in basis_tr.iter_mut().enumerate() {
            let mut coeffs = vec![0u32; k];
            coeffs[i] = 1;
            *t = field.trace(&field.from_coeffs(&coeffs));
        }

        let mut exp = vec![0u32; q1];
        let mut log = vec![NO_LOG; q1 + 1];
        let mut trexp = vec![0u8; q1];
        let mut cur = vec![0u32; k];
        cur[0] = 1;
        let p64 = p as u64;
        let modulus = field.modulus().to_vec();
        for e in 0..q1 {
            let idx = cur.iter().rev().fold(0u64, |a, &c| a * p64 + c as u64) as u32;
            exp[e] = idx;
            debug_assert_eq!(log[idx as usize], NO_LOG, "generator has short order");
            log[idx as usize] = e as u32;
            let tr = cur
                .iter()
                .zip(&basis_tr)
                .fold(0u64, |a, (&c, &t)| a + c as u64 * t as u64);
            trexp[e] = (tr % p64) as u8;
            cur = if linear && k > 1 {
                mul_linear(&cur, g[0], g[1], &modulus, p)
            } else {
                field
                    .mul(&field.from_coeffs(&cur), &generator)
                    .coeffs()
                    .to_vec()
            };
        }
        debug_assert!(cur[0] == 1 && cur[1..].iter().all(|&c| c == 0));

        let basis_logs = (0..k)
            .map(|j| {
                let mut coeffs = vec![0u32; k];
                coeffs[j] = 1;
                log[field.index(&field.from_coeffs(&coeffs)) as usize]
            })
            .collect();
        Ok(FieldTables {
            field,
            generator,
            exp,
            log,
            trexp,
            basis_logs,
        })
    }

    pub fn field(&self) -> &FField {
        &self.field
    }

    pub fn generator(&self) -> &FFElem {
        &self.generator
    }

    /// Size of the unit group, Q - 1.
    pub fn units(&self) -> usize {
        self.exp.len()
    }

    pub fn exp(&self) -> &[u32] {
        &self.exp
    }

    pub fn trexp(&self) -> &[u8] {
        &self.trexp
    }

    /// log_g(x^j) for the basis monomials x^0..x^(k-1).
    pub fn basis_logs(&self) -> &[u32] {
        &self.basis_logs
    }

    pub fn log_index(&self, idx: u64) -> Option<u32> {
        match self.log[idx as usize] {
            NO_LOG => None,
            e => Some(e),
        }
    }

    pub fn log(&self, x: &FFElem) -> Option<u32> {
        self.log_index(self.field.index(x))
    }

    /// Index of y + 1 given the index of y.
    pub fn add_one_index(&self, idx: u64) -> u64 {
        let p = self.field.p() as u64;
        let c0 = idx % p;
        idx - c0 + (c0 + 1) % p
    }

    /// (e1 + e2) mod (Q - 1), for exponents already reduced.
    #[inline]
    pub fn add_exp(&self, e1: usize, e2: usize) -> usize {
        let s = e1 + e2;
        if s >= self.exp.len() {
            s - self.exp.len()
        } else {
            s
        }
    }
}

/// cur * (c1 x + c0) modulo a monic modulus.
fn mul_linear(cur: &[u32], c0: u32, c1: u32, modulus: &[u32], p: u32) -> Vec<u32> {
    let k = cur.len();
    let p64 = p as u64;
    let top = cur[k - 1] as u64 * c1 as u64 % p64;
    (0..k)
        .map(|i| {
            let mut v = cur[i] as u64 * c0 as u64;
            if i > 0 {
                v += cur[i - 1] as u64 * c1 as u64;
            }
            // x^k = -sum m_j x^j
            v += top * (p64 - modulus[i] as u64);
            (v % p64) as u32
        })
        .collect()
}

/// F_{q^k} with q = p^a, realized as F_{p^(ak)} with F_q embedded.
#[derive(Debug)]
pub struct ExtensionField {
    base: FField,
    k: u32,
    tables: FieldTables,
    /// Image of the base field's x: a root of its modulus.
    rho: FFElem,
}

impl ExtensionField {
    pub fn new(p: u32, a: u32, k: u32, budget: &Budget) -> Result<Self> {
        let base = FField::new(p, a)?;
        let big_degree = a
            .checked_mul(k)
            .filter(|&d| d <= super::MAX_DEGREE)
            .ok_or(Error::DegreeOutOfRange(a.saturating_mul(k)))?;
        if k == 0 {
            return Err(Error::DegreeOutOfRange(0));
        }
        let big = FField::new(p, big_degree)?;
        let tables = FieldTables::new(big, budget)?;
        let rho = find_root(&base, &tables);
        Ok(ExtensionField {
            base,
            k,
            tables,
            rho,
        })
    }

    pub fn base(&self) -> &FField {
        &self.base
    }

    pub fn big(&self) -> &FField {
        self.tables.field()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn tables(&self) -> &FieldTables {
        &self.tables
    }

    pub fn embed(&self, x: &FFElem) -> FFElem {
        let big = self.big();
        let mut acc = big.zero();
        let mut pw = big.one();
        for &c in x.coeffs() {
            acc = big.add(&acc, &big.scale(&pw, c));
            pw = big.mul(&pw, &self.rho);
        }
        acc
    }

    /// Discrete log of an embedded base-field unit.
    pub fn log_of(&self, x: &FFElem) -> Option<u32> {
        self.tables.log(&self.embed(x))
    }
}

/// The first power h^j (h generating F_q^* inside the big field) that is a
/// root of the base modulus.
fn find_root(base: &FField, tables: &FieldTables) -> FFElem {
    let big = tables.field();
    if base.degree() == 1 {
        return big.zero();
    }
    let q1 = base.order() - 1;
    let step = (big.order() - 1) / q1;
    let mut e = 0u64;
    for _ in 0..q1 {
        e += step;
        let h = big.from_index(tables.exp()[(e % (big.order() - 1)) as usize] as u64);
        if big.eval_fp_poly(base.modulus(), &h).is_zero() {
            return h;
        }
    }
    unreachable!("the base modulus splits in the extension")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_consistent_for_f81() {
        let f = FField::new(3, 4).unwrap();
        let t = FieldTables::new(f.clone(), &Budget::default()).unwrap();
        assert_eq!(t.units(), 80);
        let g = t.generator().clone();
        let mut cur = f.one();
        for e in 0..80 {
            assert_eq!(t.exp()[e] as u64, f.index(&cur));
            assert_eq!(t.log(&cur), Some(e as u32));
            assert_eq!(t.trexp()[e] as u32, f.trace(&cur));
            cur = f.mul(&cur, &g);
        }
        assert_eq!(t.log(&f.zero()), None);
        for (j, &l) in t.basis_logs().iter().enumerate() {
            let mut c = vec![0; 4];
            c[j] = 1;
            assert_eq!(t.exp()[l as usize] as u64, f.index(&f.from_coeffs(&c)));
        }
    }

    #[test]
    fn add_one_matches_field_addition() {
        let f = FField::new(5, 2).unwrap();
        let t = FieldTables::new(f.clone(), &Budget::default()).unwrap();
        for idx in 0..25 {
            let y = f.from_index(idx);
            let expect = f.index(&f.add(&y, &f.one()));
            assert_eq!(t.add_one_index(idx), expect);
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        for (p, a, k) in [(3, 2, 2), (5, 2, 1), (2, 3, 2), (3, 1, 3)] {
            let ext = ExtensionField::new(p, a, k, &Budget::default()).unwrap();
            let base = ext.base();
            let big = ext.big();
            let all: Vec<FFElem> = (0..base.order()).map(|i| base.from_index(i)).collect();
            for x in &all {
                for y in &all {
                    assert_eq!(
                        ext.embed(&base.mul(x, y)),
                        big.mul(&ext.embed(x), &ext.embed(y))
                    );
                    assert_eq!(
                        ext.embed(&base.add(x, y)),
                        big.add(&ext.embed(x), &ext.embed(y))
                    );
                }
            }
        }
    }

    #[test]
    fn table_budget_is_enforced() {
        let f = FField::new(3, 8).unwrap();
        let budget = Budget {
            table_entries: 1000,
            ..Budget::default()
        };
        assert!(matches!(
            FieldTables::new(f, &budget),
            Err(Error::Budget { .. })
        ));
    }
}
