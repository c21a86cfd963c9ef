//! Dwork-side data reduced to the residue field: Artin-Hasse coefficients,
//! Frobenius matrix entries mod the maximal ideal, Hasse minors, and the
//! closed-form Hasse polynomial of the family's slope <= 1 side.
//!
//! Only the minimal-weight solutions of sum u_j V_j = ps - r survive the
//! reduction, and a_j^{u_j} reduces to abar_j^{u_j}, so no p-adic number is
//! ever represented here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::expsum::{FamilySpec, LaurentPoly};
use crate::ff::{ExtensionField, FFElem, FField};
use crate::polytope::{face_restrict, Facet, Polytope};
use crate::{Budget, Error, Rational, Result};

/// lambda_m for E_p(t) = exp(sum_i t^(p^i) / p^i) = sum lambda_m t^m.
#[derive(Clone, Debug)]
pub struct AHCoeffs {
    p: u32,
    lambdas: Vec<BigRational>,
    residues: Vec<u32>,
}

impl AHCoeffs {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn lambda(&self, m: usize) -> &BigRational {
        &self.lambdas[m]
    }

    pub fn residue(&self, m: usize) -> u32 {
        self.residues[m]
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// Coefficients from m lambda_m = sum_{p^i <= m} lambda_{m - p^i}, which is
/// E' = E * (sum_i t^(p^i - 1)) read coefficientwise.
pub fn artin_hasse(p: u32, m_max: usize) -> Result<AHCoeffs> {
    if !crate::ff::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let pb = BigInt::from(p);
    let mut lambdas = vec![BigRational::one()];
    let mut residues = vec![1u32];
    for m in 1..=m_max {
        let mut acc = BigRational::zero();
        let mut pi = 1usize;
        while pi <= m {
            acc += &lambdas[m - pi];
            pi *= p as usize;
        }
        let lm = acc / BigRational::from_integer(BigInt::from(m));
        if lm.denom().is_multiple_of(&pb) {
            return Err(Error::NotPIntegral(m));
        }
        let num = lm.numer().mod_floor(&pb);
        let den = lm.denom().mod_floor(&pb);
        let inv = den.modpow(&(&pb - 2u32), &pb);
        residues.push((num * inv).mod_floor(&pb).to_u32().unwrap());
        lambdas.push(lm);
    }
    Ok(AHCoeffs {
        p,
        lambdas,
        residues,
    })
}

/// All u >= 0 with sum u_j V_j = target and sum u_j = total.
pub fn solutions(
    exps: &[Vec<i64>],
    target: &[i64],
    total: u64,
    budget: &Budget,
) -> Result<Vec<Vec<u32>>> {
    let dim = target.len();
    let j_count = exps.len();
    // per-coordinate min/max over the monomials j.. (suffix bounds)
    let mut lo = vec![vec![i64::MAX; dim]; j_count + 1];
    let mut hi = vec![vec![i64::MIN; dim]; j_count + 1];
    for j in (0..j_count).rev() {
        for c in 0..dim {
            lo[j][c] = lo[j + 1][c].min(exps[j][c]);
            hi[j][c] = hi[j + 1][c].max(exps[j][c]);
        }
    }
    let mut out = Vec::new();
    let mut u = vec![0u32; j_count];
    let mut rest = target.to_vec();
    let mut nodes = 0u64;
    dfs(
        exps, &lo, &hi, 0, total as i64, &mut rest, &mut u, &mut out, &mut nodes, budget.steps,
    );
    if nodes > budget.steps {
        return Err(Error::Budget {
            what: "Frobenius entry solution search",
            needed: nodes as u128,
            limit: budget.steps,
        });
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    exps: &[Vec<i64>],
    lo: &[Vec<i64>],
    hi: &[Vec<i64>],
    j: usize,
    remaining: i64,
    rest: &mut Vec<i64>,
    u: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
    nodes: &mut u64,
    limit: u64,
) {
    *nodes += 1;
    if *nodes > limit {
        return;
    }
    if j == exps.len() {
        if remaining == 0 && rest.iter().all(|&x| x == 0) {
            out.push(u.clone());
        }
        return;
    }
    // the remaining multiset of monomials must be able to reach `rest`
    for c in 0..rest.len() {
        if rest[c] < remaining * lo[j][c] || rest[c] > remaining * hi[j][c] {
            return;
        }
    }
    if j + 1 == exps.len() {
        for c in 0..rest.len() {
            if rest[c] != remaining * exps[j][c] {
                return;
            }
        }
        u[j] = remaining as u32;
        out.push(u.clone());
        u[j] = 0;
        return;
    }
    for take in 0..=remaining {
        u[j] = take as u32;
        dfs(exps, lo, hi, j + 1, remaining - take, rest, u, out, nodes, limit);
        for (r, v) in rest.iter_mut().zip(&exps[j]) {
            *r -= v;
        }
    }
    for (r, v) in rest.iter_mut().zip(&exps[j]) {
        *r += v * (remaining + 1);
    }
    u[j] = 0;
}

/// N = p w(s) - w(r) when it is a non-negative integer.
fn entry_total(p: u32, ws: Rational, wr: Rational) -> Option<u64> {
    let n = ws * Rational::from_integer(p as i64) - wr;
    (n.is_integer() && n >= Rational::from_integer(0)).then(|| n.to_integer() as u64)
}

/// Reduced entry a_{r,s}: sum over solutions of prod lambda_{u_j} abar_j^{u_j}.
pub fn frob_entry(
    poly: &Polytope,
    f: &LaurentPoly,
    r: &[i64],
    s: &[i64],
    ah: &AHCoeffs,
    budget: &Budget,
) -> Result<FFElem> {
    let field = f.field();
    let (wr, ws) = match (poly.weight(r), poly.weight(s)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Invalid("lattice point of infinite weight".into())),
    };
    let Some(total) = entry_total(ah.p(), ws, wr) else {
        return Ok(field.zero());
    };
    let exps: Vec<Vec<i64>> = f.terms().iter().map(|(v, _)| v.clone()).collect();
    let target: Vec<i64> = s.iter().zip(r).map(|(&x, &y)| ah.p() as i64 * x - y).collect();
    let sols = solutions(&exps, &target, total, budget)?;
    let coeffs: Vec<FFElem> = f.terms().iter().map(|(_, a)| a.clone()).collect();
    let mut acc = field.zero();
    for u in &sols {
        let Some(c) = lambda_product(ah, u)? else {
            continue;
        };
        let mut term = field.from_int(c as i64);
        for (a, &e) in coeffs.iter().zip(u) {
            term = field.mul(&term, &field.pow(a, e as u64));
        }
        acc = field.add(&acc, &term);
    }
    Ok(acc)
}

fn lambda_product(ah: &AHCoeffs, u: &[u32]) -> Result<Option<u32>> {
    let p = ah.p() as u64;
    let mut c = 1u64;
    for &e in u {
        let e = e as usize;
        if e >= ah.len() {
            return Err(Error::Invalid(format!("Artin-Hasse series truncated below {e}")));
        }
        c = c * ah.residue(e) as u64 % p;
    }
    Ok((c != 0).then_some(c as u32))
}

/// Solution sets of every entry of a Hasse minor, independent of the
/// coefficient values, so one template serves many coefficient vectors.
#[derive(Clone, Debug)]
pub struct MinorTemplate {
    points: Vec<Vec<i64>>,
    /// entries[r][s]: (lambda product mod p, exponent vector u)
    entries: Vec<Vec<Vec<(u32, Vec<u32>)>>>,
    max_power: u32,
}

impl MinorTemplate {
    /// Points of weight <= k/D in canonical order (weight, then lexicographic).
    pub fn new(poly: &Polytope, exps: &[Vec<i64>], k: i64, p: u32, budget: &Budget) -> Result<Self> {
        let points: Vec<Vec<i64>> = poly
            .points_by_weight(k, budget)?
            .into_iter()
            .flatten()
            .collect();
        let weights: Vec<Rational> = points
            .iter()
            .map(|u| poly.weight(u).expect("enumerated points have finite weight"))
            .collect();
        let max_total = weights
            .iter()
            .map(|&w| (w * Rational::from_integer(p as i64)).ceil().to_integer())
            .max()
            .unwrap_or(0);
        let ah = artin_hasse(p, max_total.max(0) as usize)?;
        let mut entries = Vec::with_capacity(points.len());
        let mut max_power = 0;
        for (r, &wr) in points.iter().zip(&weights) {
            let mut row = Vec::with_capacity(points.len());
            for (s, &ws) in points.iter().zip(&weights) {
                let mut cell = Vec::new();
                if let Some(total) = entry_total(p, ws, wr) {
                    let target: Vec<i64> = s.iter().zip(r).map(|(&x, &y)| p as i64 * x - y).collect();
                    for u in solutions(exps, &target, total, budget)? {
                        if let Some(c) = lambda_product(&ah, &u)? {
                            max_power = max_power.max(u.iter().copied().max().unwrap_or(0));
                            cell.push((c, u));
                        }
                    }
                }
                row.push(cell);
            }
            entries.push(row);
        }
        Ok(MinorTemplate {
            points,
            entries,
            max_power,
        })
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    /// The reduced matrix for coefficients listed in monomial order.
    pub fn matrix(&self, field: &FField, coeffs: &[FFElem]) -> Vec<Vec<FFElem>> {
        let powers: Vec<Vec<FFElem>> = coeffs
            .iter()
            .map(|a| {
                let mut pw = vec![field.one()];
                for _ in 0..self.max_power {
                    pw.push(field.mul(pw.last().unwrap(), a));
                }
                pw
            })
            .collect();
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        cell.iter().fold(field.zero(), |acc, (c, u)| {
                            let mut term = field.from_int(*c as i64);
                            for (pw, &e) in powers.iter().zip(u) {
                                if e > 0 {
                                    term = field.mul(&term, &pw[e as usize]);
                                }
                            }
                            field.add(&acc, &term)
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub fn evaluate(&self, field: &FField, coeffs: &[FFElem]) -> FFElem {
        determinant(field, self.matrix(field, coeffs))
    }
}

/// Determinant over a finite field by Gaussian elimination.
pub fn determinant(field: &FField, mut m: Vec<Vec<FFElem>>) -> FFElem {
    let n = m.len();
    let mut det = field.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return field.zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, &m[c][c]);
        let inv = field.inv(&m[c][c]).expect("nonzero pivot");
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = field.mul(&m[r][c], &inv);
            for j in c..n {
                let t = field.mul(&factor, &m[c][j]);
                m[r][j] = field.sub(&m[r][j], &t);
            }
        }
    }
    det
}

/// h_p(Delta, k): determinant of the reduced Frobenius block on the points
/// of weight <= k/D.
pub fn hasse_minor(poly: &Polytope, f: &LaurentPoly, k: i64, budget: &Budget) -> Result<FFElem> {
    let exps: Vec<Vec<i64>> = f.terms().iter().map(|(v, _)| v.clone()).collect();
    let coeffs: Vec<FFElem> = f.terms().iter().map(|(_, a)| a.clone()).collect();
    let template = MinorTemplate::new(poly, &exps, k, f.field().p(), budget)?;
    Ok(template.evaluate(f.field(), &coeffs))
}

/// prod_{k=0}^{m D} h_p(Delta, k).
pub fn hasse_product(poly: &Polytope, f: &LaurentPoly, budget: &Budget) -> Result<FFElem> {
    let top = poly.dim() as i64 * poly.denominator();
    let field = f.field();
    let mut acc = field.one();
    for k in 0..=top {
        acc = field.mul(&acc, &hasse_minor(poly, f, k, budget)?);
    }
    Ok(acc)
}

fn factorial_inverses(p: u32) -> Vec<u64> {
    let p64 = p as u64;
    let mut fact = vec![1u64; p as usize];
    for i in 1..p as usize {
        fact[i] = fact[i - 1] * i as u64 % p64;
    }
    fact.iter()
        .map(|&f| crate::ff::poly::pow_mod(f, p64 - 2, p64))
        .collect()
}

/// The slope <= 1 Hasse polynomial of the family at abar = (a_1..a_{n+1}):
/// sum over v with |v| <= (p-1)/2 of
/// prod a_i^{2 v_i} a_{n+1}^{p-1-2|v|} / ((prod v_i!)^2 (p-1-2|v|)!).
pub fn hasse_closed_le1(field: &FField, abar: &[FFElem]) -> Result<FFElem> {
    if abar.len() < 2 {
        return Err(Error::Invalid("need a_1..a_{n+1} with n >= 1".into()));
    }
    if let Some(j) = abar.iter().position(FFElem::is_zero) {
        return Err(Error::ZeroCoefficient(j));
    }
    let p = field.p();
    if p == 2 {
        return Err(Error::Invalid("odd characteristic required".into()));
    }
    let n = abar.len() - 1;
    let half = (p as usize - 1) / 2;
    let finv = factorial_inverses(p);
    let squares: Vec<FFElem> = abar[..n].iter().map(|a| field.mul(a, a)).collect();
    let last_pows: Vec<FFElem> = (0..p).map(|e| field.pow(&abar[n], e as u64)).collect();
    let mut acc = field.zero();
    // walk v_1..v_n recursively, carrying the running product and coefficient
    fn walk(
        field: &FField,
        i: usize,
        budget_left: usize,
        used: usize,
        prod: FFElem,
        coeff: u64,
        ctx: &(&[FFElem], &[FFElem], &[u64], u32),
        acc: &mut FFElem,
    ) {
        let (squares, last_pows, finv, p) = *ctx;
        let p64 = p as u64;
        if i == squares.len() {
            let rest = p as usize - 1 - 2 * used;
            let c = coeff * finv[rest] % p64;
            let term = field.mul(&field.scale(&prod, c as u32), &last_pows[rest]);
            *acc = field.add(acc, &term);
            return;
        }
        let mut pw = prod;
        for v in 0..=budget_left {
            let c = coeff * finv[v] % p64 * finv[v] % p64;
            walk(field, i + 1, budget_left - v, used + v, pw.clone(), c, ctx, acc);
            pw = field.mul(&pw, &squares[i]);
        }
    }
    walk(
        field,
        0,
        half,
        0,
        field.one(),
        1,
        &(&squares, &last_pows, &finv, p),
        &mut acc,
    );
    Ok(acc)
}

/// The full Hasse polynomial for n = 2, 3, where it equals the slope <= 1 form.
pub fn hasse_closed_full(field: &FField, abar: &[FFElem]) -> Result<FFElem> {
    match abar.len() {
        3 | 4 => hasse_closed_le1(field, abar),
        len => Err(Error::Invalid(format!(
            "closed-form full Hasse polynomial known for n = 2, 3 only (got n = {})",
            len.saturating_sub(1)
        ))),
    }
}

/// Non-degeneracy of the family: every +-2a_1 +- ... +- 2a_n + a_{n+1} is nonzero.
pub fn nondegenerate(field: &FField, abar: &[FFElem]) -> Result<bool> {
    if let Some(j) = abar.iter().position(FFElem::is_zero) {
        return Err(Error::ZeroCoefficient(j));
    }
    let n = abar.len() - 1;
    let doubled: Vec<FFElem> = abar[..n].iter().map(|a| field.scale(a, 2)).collect();
    let mut sums = vec![abar[n].clone()];
    for d in &doubled {
        sums = sums
            .iter()
            .flat_map(|s| [field.add(s, d), field.sub(s, d)])
            .collect();
    }
    Ok(sums.iter().all(|s| !s.is_zero()))
}

/// A toric common zero of the Euler partials of f restricted to a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub facet: Facet,
    /// Extension degree over F_q where the point lives.
    pub k: u32,
    /// Canonical indices of the coordinates in F_{q^k}.
    pub point: Vec<u64>,
}

/// Brute-force search for a degeneracy witness over F_{q^k}, k <= k_max.
/// Finding one proves degeneracy; finding none proves nothing.
///
/// Common zeros of a face restriction are stable under x -> t^e x (e the
/// facet normal), so when e has a coordinate +-1 that coordinate is fixed to 1.
pub fn nondeg_witness_search(
    f: &LaurentPoly,
    poly: &Polytope,
    k_max: u32,
    budget: &Budget,
) -> Result<Option<Witness>> {
    let base = f.field();
    let p = base.p() as i64;
    for k in 1..=k_max {
        let ext = ExtensionField::new(base.p(), base.degree(), k, budget)?;
        let tables = ext.tables();
        let q1 = tables.units() as u64;
        let big_k = ext.big().degree() as usize;
        for facet in poly.flagged_facets() {
            let Ok(g) = face_restrict(f, facet) else {
                continue;
            };
            let m = g.dim();
            // partials[i][j] = V_{j,i} mod p
            let partials: Vec<Vec<u32>> = (0..m)
                .map(|i| g.terms().iter().map(|(v, _)| v[i].rem_euclid(p) as u32).collect())
                .collect();
            if partials
                .iter()
                .any(|row| row.iter().filter(|&&c| c != 0).count() == 1)
            {
                continue;
            }
            let fixed = facet.normal().iter().position(|&e| e.abs() == 1);
            let free: Vec<usize> = (0..m).filter(|&i| Some(i) != fixed).collect();
            let visits = (q1 as u128).saturating_pow(free.len() as u32);
            budget.check_steps("degeneracy witness search", visits)?;
            let logs: Vec<u64> = g
                .terms()
                .iter()
                .map(|(_, a)| ext.log_of(a).expect("unit coefficient") as u64)
                .collect();
            let exps: Vec<Vec<u64>> = g
                .terms()
                .iter()
                .map(|(v, _)| v.iter().map(|&e| e.rem_euclid(q1 as i64) as u64).collect())
                .collect();
            let mut e = vec![0u64; m];
            let mut digits = vec![vec![0u32; big_k]; g.terms().len()];
            loop {
                for (j, d) in digits.iter_mut().enumerate() {
                    let mut l = logs[j];
                    for i in 0..m {
                        l += exps[j][i] * e[i] % q1;
                    }
                    let mut idx = tables.exp()[(l % q1) as usize] as u64;
                    for slot in d.iter_mut() {
                        *slot = (idx % p as u64) as u32;
                        idx /= p as u64;
                    }
                }
                let zero = partials.iter().all(|row| {
                    (0..big_k).all(|c| {
                        row.iter()
                            .zip(&digits)
                            .map(|(&w, d)| w as u64 * d[c] as u64)
                            .sum::<u64>()
                            % p as u64
                            == 0
                    })
                });
                if zero {
                    return Ok(Some(Witness {
                        facet: facet.clone(),
                        k,
                        point: e.iter().map(|&x| tables.exp()[x as usize] as u64).collect(),
                    }));
                }
                let mut c = free.len();
                let done = loop {
                    if c == 0 {
                        break true;
                    }
                    c -= 1;
                    let i = free[c];
                    if e[i] + 1 < q1 {
                        e[i] += 1;
                        break false;
                    }
                    e[i] = 0;
                };
                if done {
                    break;
                }
            }
        }
    }
    Ok(None)
}

/// The family's witness search on Delta_n.
pub fn family_witness(spec: &FamilySpec, k_max: u32, budget: &Budget) -> Result<Option<Witness>> {
    let poly = Polytope::family_delta(spec.n());
    nondeg_witness_search(&spec.laurent(), &poly, k_max, budget)
}
