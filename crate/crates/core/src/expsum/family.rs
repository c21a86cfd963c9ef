//! S*_k for the family through the Kloosterman table:
//!
//! ```text
//! S*_k = sum_{y unit} z^Tr(a_{n+1} y + 1/y) prod_i K(a_i y)
//! ```
//!
//! With y = g^e every factor is read sequentially from log-ordered tables.

use num_bigint::BigInt;

use super::{FamilySpec, KloTable};
use crate::cyclo::CycInt;
use crate::ff::ExtensionField;
use crate::{Budget, Error, Result};

/// Evaluates family sums over one F_{q^k} with a prebuilt table.
pub struct FamilySummer<'a> {
    ext: &'a ExtensionField,
    table: &'a KloTable,
}

impl<'a> FamilySummer<'a> {
    pub fn new(ext: &'a ExtensionField, table: &'a KloTable) -> Self {
        FamilySummer { ext, table }
    }

    pub fn sum(&self, spec: &FamilySpec) -> Result<CycInt> {
        let p = self.table.p() as usize;
        let w = p - 1;
        let n = spec.n();
        let tables = self.ext.tables();
        let q1 = tables.units();
        if spec.p() as usize != p || spec.a() != self.ext.base().degree() {
            return Err(Error::Invalid("spec and table fields differ".into()));
        }
        // each product coordinate is below (p-1)^(n-1) Q^n; Q of them are added
        let bits = (q1 as f64 + 1.0).log2() * (n as f64 + 1.0) + (w as f64).log2() * n as f64;
        if bits > 120.0 {
            return Err(Error::Invalid(format!(
                "family sum may overflow i128 accumulators ({bits:.0} bits)"
            )));
        }
        let logs: Vec<usize> = spec
            .coeffs()
            .iter()
            .map(|a| self.ext.log_of(a).expect("coefficients are units") as usize)
            .collect();
        let trexp = tables.trexp();

        // acc[r] collects the products whose outer character is z^r
        let mut acc = vec![0i128; p * w];
        let mut prod = vec![0i128; p];
        let mut next = vec![0i128; p];
        let mut pos: Vec<usize> = logs.clone();
        let mut neg = 0usize;
        for _ in 0..q1 {
            let r = (trexp[pos[n]] as usize + trexp[neg] as usize) % p;
            let first = self.table.by_log(pos[0]);
            for (d, &c) in prod.iter_mut().zip(first) {
                *d = c as i128;
            }
            prod[w] = 0;
            for &pi in &pos[1..n] {
                let k = self.table.by_log(pi);
                next.fill(0);
                for (i, &x) in prod[..w].iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in k.iter().enumerate() {
                        next[(i + j) % p] += x * y as i128;
                    }
                }
                let top = next[w];
                for (d, &c) in prod[..w].iter_mut().zip(&next[..w]) {
                    *d = c - top;
                }
            }
            for (d, &c) in acc[r * w..(r + 1) * w].iter_mut().zip(&prod[..w]) {
                *d += c;
            }
            for x in pos.iter_mut() {
                *x += 1;
                if *x == q1 {
                    *x = 0;
                }
            }
            neg = if neg == 0 { q1 - 1 } else { neg - 1 };
        }

        let mut total = CycInt::zero(p as u32);
        for r in 0..p {
            let part = CycInt::from_coords(
                p as u32,
                acc[r * w..(r + 1) * w].iter().map(|&c| BigInt::from(c)).collect(),
            );
            if !part.is_zero() {
                total = total.add(&part.mul(&CycInt::zeta_pow(p as u32, r as i64)));
            }
        }
        Ok(total)
    }
}

/// One-shot S*_k for a family member; builds the field and table.
pub fn expsum_family(spec: &FamilySpec, k: u32, budget: &Budget) -> Result<CycInt> {
    let ext = ExtensionField::new(spec.p(), spec.a(), k, budget)?;
    let table = KloTable::build(&ext, budget)?;
    FamilySummer::new(&ext, &table).sum(spec)
}
