//! The slope <= 1 Hasse polynomial as a polynomial over F_p, its formal
//! gradient, and projective singular-point searches over F_{p^k}.

use itertools::Itertools;
use rayon::prelude::*;

use crate::ff::{FFElem, FField};
use crate::{Budget, Error, Result};

/// Polynomial over F_p in `nvars` variables, terms sorted by exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPolyFp {
    p: u32,
    nvars: usize,
    terms: Vec<(Vec<u32>, u32)>,
}

impl MPolyFp {
    /// Collects like terms and drops zero coefficients.
    pub fn new(p: u32, nvars: usize, terms: Vec<(Vec<u32>, u32)>) -> Result<Self> {
        if let Some((e, _)) = terms.iter().find(|(e, _)| e.len() != nvars) {
            return Err(Error::Invalid(format!(
                "exponent vector of length {} in a {nvars}-variable polynomial",
                e.len()
            )));
        }
        let mut terms = terms;
        terms.sort();
        let mut merged: Vec<(Vec<u32>, u32)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc = (*lc + c) % p,
                _ => merged.push((e, c % p)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        Ok(MPolyFp {
            p,
            nvars,
            terms: merged,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree when every term has the same degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.iter().map(|(e, _)| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn coeff(&self, exps: &[u32]) -> u32 {
        self.terms
            .binary_search_by(|(e, _)| e.as_slice().cmp(exps))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn eval(&self, field: &FField, x: &[FFElem]) -> FFElem {
        assert_eq!(field.p(), self.p);
        let max_e = self
            .terms
            .iter()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(0);
        let powers = powers(field, x, max_e);
        self.eval_powers(field, &powers)
    }

    fn eval_powers(&self, field: &FField, powers: &[Vec<FFElem>]) -> FFElem {
        self.terms.iter().fold(field.zero(), |acc, (e, c)| {
            let mut t = field.from_int(*c as i64);
            for (pw, &k) in powers.iter().zip(e) {
                if k > 0 {
                    t = field.mul(&t, &pw[k as usize]);
                }
            }
            field.add(&acc, &t)
        })
    }

    pub fn partial(&self, i: usize) -> MPolyFp {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut d = e.clone();
                let c = (*c as u64 * (e[i] as u64 % self.p as u64) % self.p as u64) as u32;
                d[i] -= 1;
                (d, c)
            })
            .collect();
        MPolyFp::new(self.p, self.nvars, terms).expect("same shape")
    }
}

fn powers(field: &FField, x: &[FFElem], max_e: u32) -> Vec<Vec<FFElem>> {
    x.iter()
        .map(|xi| {
            let mut pw = vec![field.one()];
            for _ in 0..max_e {
                pw.push(field.mul(pw.last().unwrap(), xi));
            }
            pw
        })
        .collect()
}

fn inv_mod(x: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, x % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// h_p(Delta_n, <= 1) in the variables a_1..a_{n+1}.
pub fn hasse_symbolic(n: usize, p: u32) -> Result<MPolyFp> {
    if p == 2 || !crate::ff::is_prime(p as u64) {
        return Err(Error::Invalid(format!("odd prime required, got {p}")));
    }
    if n == 0 {
        return Err(Error::Invalid("n >= 1 required".into()));
    }
    let half = (p - 1) / 2;
    let p64 = p as u64;
    let fact = |m: u32| (1..=m as u64).fold(1u64, |acc, i| acc * i % p64);
    let terms = (0..n)
        .map(|_| 0..=half)
        .multi_cartesian_product()
        .filter(|v| v.iter().sum::<u32>() <= half)
        .map(|v| {
            let sv: u32 = v.iter().sum();
            let rest = p - 1 - 2 * sv;
            let den = v.iter().fold(1u64, |acc, &vi| {
                let f = fact(vi);
                acc * f % p64 * f % p64
            }) * fact(rest)
                % p64;
            let mut e: Vec<u32> = v.iter().map(|&vi| 2 * vi).collect();
            e.push(rest);
            (e, inv_mod(den, p64) as u32)
        })
        .collect();
    MPolyFp::new(p, n + 1, terms)
}

pub fn gradient(h: &MPolyFp) -> Vec<MPolyFp> {
    (0..h.nvars()).map(|i| h.partial(i)).collect()
}

/// All points of P^{nvars-1}(F_{p^k}) where h and its gradient vanish, as
/// canonical element indices with the first nonzero coordinate equal to 1,
/// sorted.
pub fn singular_search(h: &MPolyFp, k: u32, budget: &Budget) -> Result<Vec<Vec<u64>>> {
    if !(1..=2).contains(&k) {
        return Err(Error::Invalid(format!("extension degree {k} outside 1..=2")));
    }
    let field = FField::new(h.p(), k)?;
    let q = field.order();
    let m = h.nvars();
    let total: u128 = (0..m as u32).map(|i| (q as u128).pow(i)).sum();
    budget.check_steps("projective singular search", total)?;
    let grad = gradient(h);
    let max_e = h.homogeneous_degree().unwrap_or_else(|| {
        h.terms()
            .iter()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(0)
    });
    let mut found = Vec::new();
    for lead in 0..m {
        let tail = m - lead - 1;
        let count = q.pow(tail as u32);
        let mut chunk: Vec<Vec<u64>> = (0..count)
            .into_par_iter()
            .filter_map(|mut t| {
                let mut idx = vec![0u64; m];
                idx[lead] = 1;
                for slot in idx[lead + 1..].iter_mut().rev() {
                    *slot = t % q;
                    t /= q;
                }
                let x: Vec<FFElem> = idx.iter().map(|&i| field.from_index(i)).collect();
                let pw = powers(&field, &x, max_e);
                if !h.eval_powers(&field, &pw).is_zero() {
                    return None;
                }
                grad.iter()
                    .all(|g| g.eval_powers(&field, &pw).is_zero())
                    .then_some(idx)
            })
            .collect();
        found.append(&mut chunk);
    }
    found.sort();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dwork::hasse_closed_le1;
    use crate::polytope::binomial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn p3_is_the_diagonal_form() {
        for n in 1..=5 {
            let h = hasse_symbolic(n, 3).unwrap();
            assert_eq!(h.terms().len(), n + 1);
            for i in 0..n {
                let mut e = vec![0; n + 1];
                e[i] = 2;
                assert_eq!(h.coeff(&e), 1);
            }
            let mut e = vec![0; n + 1];
            e[n] = 2;
            assert_eq!(h.coeff(&e), 2);
        }
    }

    #[test]
    fn monomial_counts_and_degree() {
        for (n, p) in [(3usize, 5u32), (2, 7), (3, 7), (4, 11), (6, 5)] {
            let h = hasse_symbolic(n, p).unwrap();
            assert_eq!(h.terms().len() as u64, binomial(n as u64 + (p as u64 - 1) / 2, n as u64));
            assert_eq!(h.homogeneous_degree(), Some(p - 1));
        }
        assert_eq!(hasse_symbolic(3, 5).unwrap().terms().len(), 10);
    }

    #[test]
    fn agrees_with_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, a, n) in [(7u32, 1u32, 3usize), (5, 2, 2), (11, 1, 2), (3, 2, 4)] {
            let field = FField::new(p, a).unwrap();
            let h = hasse_symbolic(n, p).unwrap();
            for _ in 0..100 {
                let x: Vec<FFElem> = (0..=n)
                    .map(|_| field.from_index(rng.gen_range(1..field.order())))
                    .collect();
                assert_eq!(h.eval(&field, &x), hasse_closed_le1(&field, &x).unwrap());
            }
        }
    }

    #[test]
    fn gradient_basics() {
        let h = hasse_symbolic(2, 3).unwrap();
        let g = gradient(&h);
        assert_eq!(g[0], MPolyFp::new(3, 3, vec![(vec![1, 0, 0], 2)]).unwrap());
        let c = MPolyFp::new(5, 3, vec![(vec![0, 0, 0], 3)]).unwrap();
        assert!(gradient(&c).iter().all(MPolyFp::is_zero));
    }

    #[test]
    fn euler_identity() {
        let field = FField::new(5, 2).unwrap();
        let h = hasse_symbolic(2, 5).unwrap();
        let g = gradient(&h);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x: Vec<FFElem> = (0..3).map(|_| field.from_index(rng.gen_range(0..25))).collect();
            let lhs = field.scale(&h.eval(&field, &x), 4);
            let rhs = g.iter().zip(&x).fold(field.zero(), |acc, (gi, xi)| {
                field.add(&acc, &field.mul(xi, &gi.eval(&field, &x)))
            });
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn p3_is_smooth() {
        for n in 1..=4 {
            let h = hasse_symbolic(n, 3).unwrap();
            for k in 1..=2 {
                assert!(singular_search(&h, k, &Budget::default()).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn p5_sets_match_brute_force() {
        let b = Budget::default();
        let h = hasse_symbolic(2, 5).unwrap();
        let pts = singular_search(&h, 1, &b).unwrap();
        assert_eq!(pts, vec![vec![0, 1, 2], vec![0, 1, 3], vec![1, 0, 2], vec![1, 0, 3]]);
        let h = hasse_symbolic(3, 5).unwrap();
        assert_eq!(singular_search(&h, 1, &b).unwrap().len(), 10);
        let h = hasse_symbolic(6, 5).unwrap();
        let pts = singular_search(&h, 1, &b).unwrap();
        assert_eq!(pts.len(), 156);
        // a_i / a_7 = +-1/2 on the all-nonzero part
        assert!(pts.contains(&vec![1, 1, 1, 1, 1, 1, 2]));
        assert!(!pts.contains(&vec![1, 1, 1, 1, 1, 1, 4]));
        let f = FField::new(5, 1).unwrap();
        let x: Vec<FFElem> = [4, 4, 4, 4, 4, 4, 1].iter().map(|&i| f.from_index(i)).collect();
        assert!(!h.eval(&f, &x).is_zero());
    }

    fn on_listed_component(f: &FField, idx: &[u64]) -> bool {
        let x: Vec<FFElem> = idx.iter().map(|&i| f.from_index(i)).collect();
        let sq: Vec<FFElem> = x.iter().map(|a| f.mul(a, a)).collect();
        let zeros: Vec<bool> = x.iter().map(FFElem::is_zero).collect();
        let on_main = zeros.iter().all(|z| !z) && (0..3).all(|i| f.scale(&sq[i], 2) == sq[3]);
        let on_pair = !zeros[3]
            && zeros[..3].iter().filter(|&&z| z).count() == 2
            && (0..3).any(|i| !zeros[i] && f.scale(&sq[i], 4) == sq[3]);
        on_main || on_pair
    }

    #[test]
    fn p7_n3_components() {
        let b = Budget::default();
        let h = hasse_symbolic(3, 7).unwrap();
        let f7 = FField::new(7, 1).unwrap();
        let pts = singular_search(&h, 1, &b).unwrap();
        assert_eq!(pts.len(), 14);
        assert!(pts.iter().all(|x| on_listed_component(&f7, x)));
        // over F_49 extra points appear, all with a_4 = 0
        let f49 = FField::new(7, 2).unwrap();
        let pts = singular_search(&h, 2, &b).unwrap();
        let extra: Vec<_> = pts.iter().filter(|x| !on_listed_component(&f49, x)).collect();
        assert!(!extra.is_empty());
        assert!(extra.iter().all(|x| x[3] == 0));
        assert!(pts.contains(&vec![1, 1, 14, 0]));
    }

    #[test]
    fn search_respects_budget() {
        let h = hasse_symbolic(3, 7).unwrap();
        let tight = Budget {
            steps: 1000,
            ..Budget::default()
        };
        assert!(matches!(singular_search(&h, 2, &tight), Err(Error::Budget { .. })));
        assert!(singular_search(&h, 3, &Budget::default()).is_err());
    }
}
