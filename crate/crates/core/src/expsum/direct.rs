//! Brute-force evaluation of S*_k(f) for an arbitrary Laurent polynomial.
//!
//! `Strategy::Naive` walks every unit tuple with plain field arithmetic and
//! shares no tables with the rest of the crate. `Strategy::Auto` works in
//! exponent space: x_i = g^{e_i}, so Tr(a_j x^{V_j}) is a single table
//! lookup, and it conditions on a set of variables chosen so the remaining
//! ones split into independent groups whose trace histograms convolve.

use num_bigint::BigInt;

use super::LaurentPoly;
use crate::cyclo::CycInt;
use crate::ff::{ExtensionField, FFElem, FField};
use crate::{Budget, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Naive,
    Auto,
}

pub fn expsum_direct(f: &LaurentPoly, k: u32, budget: &Budget) -> Result<CycInt> {
    expsum_direct_with(f, k, budget, Strategy::Auto)
}

/// The step budget counts variable assignments actually visited.
pub fn expsum_direct_with(
    f: &LaurentPoly,
    k: u32,
    budget: &Budget,
    strategy: Strategy,
) -> Result<CycInt> {
    match strategy {
        Strategy::Naive => naive(f, k, budget),
        Strategy::Auto => decomposed(f, k, budget),
    }
}

fn naive(f: &LaurentPoly, k: u32, budget: &Budget) -> Result<CycInt> {
    let base = f.field();
    let p = base.p();
    let big = FField::new(p, base.degree() * k)?;
    let units = big.order() - 1;
    let m = f.dim();
    let visits = (units as u128).saturating_pow(m as u32) * f.terms().len().max(1) as u128;
    budget.check_steps("direct exponential sum", visits)?;

    let rho = (0..big.order())
        .map(|i| big.from_index(i))
        .find(|x| big.eval_fp_poly(base.modulus(), x).is_zero())
        .expect("the base modulus splits");
    let embed = |a: &FFElem| {
        a.coeffs()
            .iter()
            .rev()
            .fold(big.zero(), |acc, &c| big.add(&big.mul(&acc, &rho), &big.from_int(c as i64)))
    };
    let coeffs: Vec<FFElem> = f.terms().iter().map(|(_, a)| embed(a)).collect();

    let mut hist = vec![0u128; p as usize];
    let mut idx = vec![1u64; m];
    loop {
        let xs: Vec<FFElem> = idx.iter().map(|&i| big.from_index(i)).collect();
        let inv: Vec<FFElem> = xs.iter().map(|x| big.inv(x).unwrap()).collect();
        let mut value = big.zero();
        for ((v, _), a) in f.terms().iter().zip(&coeffs) {
            let mut term = a.clone();
            for (i, &e) in v.iter().enumerate() {
                let b = if e >= 0 { &xs[i] } else { &inv[i] };
                term = big.mul(&term, &big.pow(b, e.unsigned_abs()));
            }
            value = big.add(&value, &term);
        }
        hist[big.trace(&value) as usize] += 1;

        let mut c = m;
        loop {
            if c == 0 {
                return Ok(from_hist(p, &hist));
            }
            c -= 1;
            if idx[c] + 1 < big.order() {
                idx[c] += 1;
                break;
            }
            idx[c] = 1;
        }
    }
}

struct Plan {
    conditioned: Vec<usize>,
    components: Vec<Vec<usize>>,
    cost: u128,
}

fn plan(f: &LaurentPoly, units: u128) -> Plan {
    let m = f.dim();
    let supports: Vec<Vec<usize>> = f
        .terms()
        .iter()
        .map(|(v, _)| (0..m).filter(|&i| v[i] != 0).collect())
        .collect();
    let mut best: Option<Plan> = None;
    for mask in 0u32..1 << m {
        let conditioned: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        let components = components(m, mask, &supports);
        let inner: u128 = components
            .iter()
            .map(|c| units.saturating_pow(c.len() as u32))
            .fold(0u128, u128::saturating_add)
            .max(1);
        let cost = units
            .saturating_pow(conditioned.len() as u32)
            .saturating_mul(inner);
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(Plan {
                conditioned,
                components,
                cost,
            });
        }
    }
    best.expect("at least the empty conditioning set")
}

/// Connected components of the free variables, joined through shared terms.
fn components(m: usize, mask: u32, supports: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for s in supports {
        let free: Vec<usize> = s.iter().copied().filter(|&i| mask >> i & 1 == 0).collect();
        for w in free.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; m];
    for i in (0..m).filter(|&i| mask >> i & 1 == 0) {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

fn decomposed(f: &LaurentPoly, k: u32, budget: &Budget) -> Result<CycInt> {
    let base = f.field();
    let p = base.p() as usize;
    let ext = ExtensionField::new(base.p(), base.degree(), k, budget)?;
    let tables = ext.tables();
    let q1 = tables.units() as u64;
    let plan = plan(f, q1 as u128);
    budget.check_steps("direct exponential sum", plan.cost)?;

    let trexp = tables.trexp();
    let logs: Vec<u64> = f
        .terms()
        .iter()
        .map(|(_, a)| ext.log_of(a).expect("coefficients are units") as u64)
        .collect();
    let exps: Vec<Vec<u64>> = f
        .terms()
        .iter()
        .map(|(v, _)| v.iter().map(|&e| e.rem_euclid(q1 as i64) as u64).collect())
        .collect();
    let in_set = |set: &[usize], j: usize| f.terms()[j].0.iter().enumerate().any(|(i, &e)| e != 0 && set.contains(&i));
    let fixed_terms: Vec<usize> = (0..f.terms().len())
        .filter(|&j| !plan.components.iter().any(|c| in_set(c, j)))
        .collect();
    let comp_terms: Vec<Vec<usize>> = plan
        .components
        .iter()
        .map(|c| (0..f.terms().len()).filter(|&j| in_set(c, j)).collect())
        .collect();

    let mut total = vec![0u128; p];
    let mut offsets = vec![0u64; f.terms().len()];
    let mut cond = vec![0u64; plan.conditioned.len()];
    loop {
        for (j, off) in offsets.iter_mut().enumerate() {
            let mut o = logs[j];
            for (&i, &e) in plan.conditioned.iter().zip(&cond) {
                o += exps[j][i] * e % q1;
            }
            *off = o % q1;
        }
        let shift: usize = fixed_terms.iter().map(|&j| trexp[offsets[j] as usize] as usize).sum();
        let mut acc = vec![0u128; p];
        acc[shift % p] = 1;
        for (comp, terms) in plan.components.iter().zip(&comp_terms) {
            let h = component_hist(comp, terms, &offsets, &exps, trexp, q1, p);
            acc = convolve(&acc, &h);
        }
        for (t, a) in total.iter_mut().zip(&acc) {
            *t += a;
        }

        let mut c = cond.len();
        loop {
            if c == 0 {
                return Ok(from_hist(p as u32, &total));
            }
            c -= 1;
            if cond[c] + 1 < q1 {
                cond[c] += 1;
                break;
            }
            cond[c] = 0;
        }
    }
}

fn component_hist(
    comp: &[usize],
    terms: &[usize],
    offsets: &[u64],
    exps: &[Vec<u64>],
    trexp: &[u8],
    q1: u64,
    p: usize,
) -> Vec<u128> {
    let mut hist = vec![0u128; p];
    if let [var] = comp {
        // single free variable: one pass, no odometer
        let steps: Vec<(u64, u64)> = terms.iter().map(|&j| (offsets[j], exps[j][*var])).collect();
        let mut pos: Vec<u64> = steps.iter().map(|s| s.0).collect();
        for _ in 0..q1 {
            let mut t = 0usize;
            for (x, s) in pos.iter_mut().zip(&steps) {
                t += trexp[*x as usize] as usize;
                *x += s.1;
                if *x >= q1 {
                    *x -= q1;
                }
            }
            hist[t % p] += 1;
        }
        return hist;
    }
    let mut e = vec![0u64; comp.len()];
    loop {
        let mut t = 0usize;
        for &j in terms {
            let mut o = offsets[j];
            for (&i, &ei) in comp.iter().zip(&e) {
                o += exps[j][i] * ei % q1;
            }
            t += trexp[(o % q1) as usize] as usize;
        }
        hist[t % p] += 1;
        let mut c = e.len();
        loop {
            if c == 0 {
                return hist;
            }
            c -= 1;
            if e[c] + 1 < q1 {
                e[c] += 1;
                break;
            }
            e[c] = 0;
        }
    }
}

fn convolve(a: &[u128], b: &[u128]) -> Vec<u128> {
    let p = a.len();
    let mut out = vec![0u128; p];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[(i + j) % p] += x * y;
        }
    }
    out
}

fn from_hist(p: u32, hist: &[u128]) -> CycInt {
    CycInt::from_length_p(p, hist.iter().map(|&c| BigInt::from(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycInt;
    use crate::expsum::FamilySpec;
    use proptest::prelude::{prop, prop_assert, prop_assert_eq, proptest, ProptestConfig};

    fn poly(p: u32, a: u32, terms: &[(Vec<i64>, u64)]) -> LaurentPoly {
        let f = FField::new(p, a).unwrap();
        let dim = terms[0].0.len();
        LaurentPoly::new(
            f.clone(),
            dim,
            terms.iter().map(|(v, c)| (v.clone(), f.from_index(*c))).collect(),
        )
        .unwrap()
    }

    fn both(f: &LaurentPoly, k: u32) -> CycInt {
        let b = Budget::default();
        let naive = expsum_direct_with(f, k, &b, Strategy::Naive).unwrap();
        let auto = expsum_direct_with(f, k, &b, Strategy::Auto).unwrap();
        assert_eq!(naive, auto);
        auto
    }

    #[test]
    fn single_variable_examples() {
        let minus_one = CycInt::from_int(3, -1);
        assert_eq!(both(&poly(3, 1, &[(vec![1], 1)]), 1), minus_one);
        assert_eq!(both(&poly(3, 1, &[(vec![1], 1), (vec![-1], 1)]), 1), minus_one);
        // f = x over any field: -1
        assert_eq!(both(&poly(5, 2, &[(vec![1], 3)]), 1), CycInt::from_int(5, -1));
    }

    #[test]
    fn strategies_agree_on_the_family() {
        for (p, a, idx, k) in [(3, 1, vec![1, 1, 1], 2), (5, 1, vec![1, 2, 3], 1), (3, 2, vec![1, 4, 7], 1)] {
            let f = FamilySpec::from_indices(p, a, &idx).unwrap().laurent();
            both(&f, k);
        }
    }

    #[test]
    fn plan_splits_the_family() {
        let f = FamilySpec::from_indices(7, 1, &[1, 2, 3, 4]).unwrap().laurent();
        let pl = plan(&f, 2400);
        assert_eq!(pl.conditioned, vec![3]);
        assert_eq!(pl.components.len(), 3);
        assert_eq!(pl.cost, 2400 * 3 * 2400);
    }

    #[test]
    fn budget_counts_visits() {
        let f = FamilySpec::from_indices(7, 1, &[1, 2, 3, 4]).unwrap().laurent();
        let tight = Budget {
            steps: 1000,
            ..Budget::default()
        };
        assert!(expsum_direct(&f, 2, &tight).is_err());
        assert!(expsum_direct_with(&f, 3, &Budget::default(), Strategy::Naive).is_err());
    }

    #[test]
    fn negation_conjugates() {
        let f = poly(5, 1, &[(vec![1, 0], 1), (vec![-1, 1], 2), (vec![0, -2], 3)]);
        let s = both(&f, 1);
        assert_eq!(both(&f.neg(), 1), s.conj());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn frobenius_on_coefficients_preserves_the_sum(
            c in prop::collection::vec(1u64..9, 3),
            e in prop::collection::vec(-2i64..3, 6),
        ) {
            let mut terms = vec![(vec![e[0], e[1]], c[0]), (vec![e[2], e[3]], c[1]), (vec![e[4], e[5]], c[2])];
            terms.sort();
            terms.dedup_by(|a, b| a.0 == b.0);
            let f = poly(3, 2, &terms);
            let s = both(&f, 1);
            let t = both(&f.frobenius(), 1);
            prop_assert_eq!(s.lambda_val(), t.lambda_val());
            prop_assert_eq!(s, t);
        }

        #[test]
        fn coordinates_respect_the_count_bound(c in prop::collection::vec(1u64..7, 3)) {
            let f = poly(7, 1, &[(vec![1, 1], c[0]), (vec![-1, 0], c[1]), (vec![0, -1], c[2])]);
            let s = both(&f, 1);
            prop_assert!(s.max_abs_coord() <= BigInt::from(36));
        }
    }
}
