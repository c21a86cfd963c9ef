//! From power sums to L-polynomial coefficients, q-adic Newton polygons,
//! and the comparison against the Hodge polygon.
//!
//! Sign convention: for f in m = n + 1 variables the reciprocal roots
//! alpha_i of L*(f, T)^((-1)^n) satisfy sum_i alpha_i^k = (-1)^(n+1) S*_k(f),
//! so f = x_1 (m = 1) gives S*_k = -1 and L = 1 - T.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclo::CycInt;
use crate::polygon::{Point, Polygon};
use crate::{Error, Rational, Result};

/// A_0..A_m of L(T) = sum A_i T^i, expected degree d = 2^(n+1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolyCoeffs {
    pub p: u32,
    pub a: u32,
    pub n: usize,
    coeffs: Vec<CycInt>,
}

impl LPolyCoeffs {
    pub fn coeffs(&self) -> &[CycInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        1 << (self.n + 1)
    }

    /// All of A_0..A_d are known.
    pub fn is_complete(&self) -> bool {
        self.coeffs.len() == self.degree() + 1
    }

    pub fn q(&self) -> BigInt {
        BigInt::from(self.p).pow(self.a)
    }

    pub fn ord_q(&self, i: usize) -> Option<Rational> {
        self.coeffs[i].lambda_val().ord_q(self.p, self.a)
    }

    /// Directly measured valuations of every known coefficient.
    pub fn profile(&self) -> ValuationProfile {
        ValuationProfile {
            entries: (0..self.coeffs.len())
                .map(|i| Entry {
                    index: i,
                    ord: self.ord_q(i),
                    source: Source::Direct,
                })
                .collect(),
        }
    }
}

/// Where a valuation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Direct,
    Symmetry,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Direct => "direct",
            Source::Symmetry => "symmetry",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub index: usize,
    /// ord_q(A_index); None when A_index = 0.
    pub ord: Option<Rational>,
    pub source: Source,
}

/// Points (i, ord_q A_i), sorted by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationProfile {
    pub entries: Vec<Entry>,
}

impl ValuationProfile {
    pub fn from_points(points: &[(usize, Option<Rational>)]) -> Self {
        let mut entries: Vec<Entry> = points
            .iter()
            .map(|&(index, ord)| Entry {
                index,
                ord,
                source: Source::Direct,
            })
            .collect();
        entries.sort_by_key(|e| e.index);
        ValuationProfile { entries }
    }

    pub fn get(&self, index: usize) -> Option<&Entry> {
        self.entries
            .binary_search_by_key(&index, |e| e.index)
            .ok()
            .map(|i| &self.entries[i])
    }
}

/// Elementary symmetric data from power sums: returns A_0..A_m with
/// k A_k = -sum_{i=1}^k p_i A_{k-i}.
pub fn coeffs_from_newton_sums(psums: &[CycInt]) -> Result<Vec<CycInt>> {
    let p = psums
        .first()
        .map(CycInt::p)
        .ok_or_else(|| Error::Invalid("no power sums".into()))?;
    let mut a = vec![CycInt::one(p)];
    for k in 1..=psums.len() {
        let mut acc = CycInt::zero(p);
        for i in 1..=k {
            acc = acc.add(&psums[i - 1].mul(&a[k - i]));
        }
        let kk = BigInt::from(k);
        if !acc.coords().iter().all(|c| c.is_multiple_of(&kk)) {
            return Err(Error::NonIntegral(k));
        }
        let coords = acc.coords().iter().map(|c| -(c / &kk)).collect();
        a.push(CycInt::from_coords(p, coords));
    }
    Ok(a)
}

/// Inverse of `coeffs_from_newton_sums`: p_k = -k A_k - sum_{i<k} p_i A_{k-i}.
pub fn newton_sums_from_coeffs(a: &[CycInt]) -> Vec<CycInt> {
    let mut out: Vec<CycInt> = Vec::with_capacity(a.len().saturating_sub(1));
    for k in 1..a.len() {
        let mut s = a[k].scale(&BigInt::from(-(k as i64)));
        for i in 1..k {
            s = s.sub(&out[i - 1].mul(&a[k - i]));
        }
        out.push(s);
    }
    out
}

/// A_0..A_m from S*_1..S*_m for a family member in n + 1 variables.
pub fn coeffs_from_power_sums(sums: &[CycInt], n: usize, p: u32, a: u32) -> Result<LPolyCoeffs> {
    let d = 1usize << (n + 1);
    if sums.len() > d {
        return Err(Error::Invalid(format!("{} power sums exceed degree {d}", sums.len())));
    }
    let sign = if (n + 1).is_multiple_of(2) { 1 } else { -1 };
    let psums: Vec<CycInt> = sums.iter().map(|s| s.scale(&BigInt::from(sign))).collect();
    let coeffs = if psums.is_empty() {
        vec![CycInt::one(p)]
    } else {
        coeffs_from_newton_sums(&psums)?
    };
    Ok(LPolyCoeffs { p, a, n, coeffs })
}

/// Lower convex hull of the finite points of a profile.
///
/// The horizontal length of the side with slope s counts the reciprocal
/// roots of q-adic valuation s.
pub fn newton_polygon(profile: &ValuationProfile) -> Result<Polygon> {
    let pts: Vec<Point> = profile
        .entries
        .iter()
        .filter_map(|e| e.ord.map(|o| (Rational::from_integer(e.index as i64), o)))
        .collect();
    Polygon::lower_hull(&pts)
}

/// Known valuations for j <= d/2 plus their mirrors
/// ord_q A_{d-j} = ord_q A_j + (n+1)(d/2 - j).
pub fn symmetry_complete(partial: &LPolyCoeffs) -> ValuationProfile {
    let d = partial.degree();
    let half = d / 2;
    let shift = partial.n as i64 + 1;
    let mut entries = Vec::new();
    for j in 0..partial.coeffs.len().min(half + 1) {
        let ord = partial.ord_q(j);
        entries.push(Entry {
            index: j,
            ord,
            source: Source::Direct,
        });
        if j < half {
            entries.push(Entry {
                index: d - j,
                ord: ord.map(|o| o + Rational::from_integer(shift * (half - j) as i64)),
                source: Source::Symmetry,
            });
        }
    }
    entries.sort_by_key(|e| e.index);
    ValuationProfile { entries }
}

/// Checks conj(A_j) A_d = q^((n+1) j) A_{d-j} for every j; Err(j) names the
/// first failure.
pub fn functional_equation_check(full: &LPolyCoeffs) -> std::result::Result<(), usize> {
    if !full.is_complete() {
        return Err(full.coeffs.len());
    }
    let d = full.degree();
    let ad = &full.coeffs[d];
    let qn = full.q().pow(full.n as u32 + 1);
    let mut scale = BigInt::one();
    for j in 0..=d {
        let lhs = full.coeffs[j].conj().mul(ad);
        let rhs = full.coeffs[d - j].scale(&scale);
        if lhs != rhs {
            return Err(j);
        }
        scale *= &qn;
    }
    Ok(())
}

/// Largest relative deviation of |alpha| from q^((n+1)/2) over the complex
/// reciprocal roots (first embedding). Advisory only.
pub fn purity_deviation(full: &LPolyCoeffs) -> Option<f64> {
    if !full.is_complete() || full.coeffs[full.degree()].is_zero() {
        return None;
    }
    let q = full.p as f64;
    let r = q.powf(full.a as f64 * (full.n as f64 + 1.0) / 2.0);
    // roots of sum A_i (u / r)^i lie on the unit circle when pure
    let poly: Vec<Complex64> = full
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c.embed(1) / r.powi(i as i32))
        .collect();
    let roots = polynomial_roots(&poly)?;
    // A root of multiplicity m is only located to about eps^(1/m), but the
    // perturbed copies stay centred on it, so measure cluster centroids.
    let mut cluster: Vec<usize> = (0..roots.len()).collect();
    for i in 0..roots.len() {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() < 1e-2 {
                let (ci, cj) = (cluster[i], cluster[j]);
                cluster.iter_mut().filter(|c| **c == ci).for_each(|c| *c = cj);
            }
        }
    }
    let mut worst = 0.0f64;
    for c in 0..roots.len() {
        let members: Vec<Complex64> = (0..roots.len())
            .filter(|&i| cluster[i] == c)
            .map(|i| roots[i])
            .collect();
        if !members.is_empty() {
            let mut centre = members.iter().sum::<Complex64>() / members.len() as f64;
            // an m-fold root is a simple root of the (m-1)-th derivative
            let deriv = derivative_n(&poly, members.len() - 1);
            for _ in 0..50 {
                let (v, dv) = eval_with_derivative(&deriv, centre);
                if dv.norm() == 0.0 {
                    break;
                }
                centre -= v / dv;
            }
            worst = worst.max((centre.norm() - 1.0).abs());
        }
    }
    Some(worst)
}

fn derivative_n(c: &[Complex64], times: usize) -> Vec<Complex64> {
    let mut d = c.to_vec();
    for _ in 0..times {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| x * i as f64)
            .collect();
    }
    d
}

fn eval_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    for a in c.iter().rev() {
        dv = dv * x + v;
        v = v * x + a;
    }
    (v, dv)
}

/// Aberth iteration for the roots of sum c_i z^i.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return None;
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64))
        .collect();
    let eval = |x: Complex64| eval_with_derivative(&monic, x);
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (v, dv) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulse: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::one() / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::one() - ratio * repulse);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    Some(z)
}

/// Verdict at one Hodge break point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakVerdict {
    pub index: usize,
    pub hodge: Rational,
    pub ord: Option<Rational>,
    pub source: Source,
}

impl BreakVerdict {
    pub fn touches(&self) -> bool {
        self.ord == Some(self.hodge)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coincidence {
    pub points: Vec<BreakVerdict>,
    pub np_eq_hp: bool,
}

impl Coincidence {
    pub fn first_failure(&self) -> Option<&BreakVerdict> {
        self.points.iter().find(|b| !b.touches())
    }
}

/// NP = HP iff ord_q A_i equals the Hodge ordinate at every break point i:
/// NP lies on or above HP with the same endpoints, so touching every break
/// point pins each segment in between.
pub fn vertex_coincidence(profile: &ValuationProfile, hp: &Polygon) -> Result<Coincidence> {
    let mut points = Vec::new();
    for (x, y) in hp.break_points() {
        let index = x.to_integer() as usize;
        let e = profile.get(index).ok_or(Error::MissingIndex(index))?;
        points.push(BreakVerdict {
            index,
            hodge: y,
            ord: e.ord,
            source: e.source,
        });
    }
    let np_eq_hp = points.iter().all(BreakVerdict::touches);
    Ok(Coincidence { points, np_eq_hp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::int_point;
    use crate::polytope::family_hodge_polygon;
    use proptest::prelude::*;

    fn r(x: i64) -> Rational {
        Rational::from_integer(x)
    }

    #[test]
    fn single_variable_sign_convention() {
        // f = x_1: S*_k = -1 and L = 1 - T
        let sums = vec![CycInt::from_int(3, -1); 1];
        let a = coeffs_from_newton_sums(&[sums[0].scale(&BigInt::from(-1))]).unwrap();
        assert_eq!(a, vec![CycInt::one(3), CycInt::from_int(3, -1)]);
        // p_1 = c gives A_1 = -c
        let c = CycInt::zeta_pow(5, 2).add(&CycInt::from_int(5, 3));
        let a = coeffs_from_newton_sums(std::slice::from_ref(&c)).unwrap();
        assert_eq!(a[0], CycInt::one(5));
        assert_eq!(a[1], c.neg());
    }

    #[test]
    fn non_integral_quotients_are_reported() {
        // p_1 = 0, p_2 = 1 would need A_2 = -1/2
        let sums = [CycInt::zero(3), CycInt::one(3)];
        assert!(matches!(coeffs_from_newton_sums(&sums), Err(Error::NonIntegral(2))));
    }

    #[test]
    fn newton_polygon_examples() {
        let prof = ValuationProfile::from_points(&[(0, Some(r(0))), (1, Some(r(1))), (2, Some(r(1)))]);
        let np = newton_polygon(&prof).unwrap();
        assert_eq!(np.vertices(), &[int_point(0, 0), int_point(2, 1)]);
        let hp3: Vec<(usize, Option<Rational>)> = [(0, 0), (1, 0), (5, 4), (11, 16), (15, 28), (16, 32)]
            .iter()
            .map(|&(i, o)| (i, Some(r(o))))
            .collect();
        let np = newton_polygon(&ValuationProfile::from_points(&hp3)).unwrap();
        assert_eq!(np, family_hodge_polygon(3));
        assert!(newton_polygon(&ValuationProfile::from_points(&[])).is_err());
        // a zero coefficient contributes no point
        let prof = ValuationProfile::from_points(&[(0, Some(r(0))), (1, None), (2, Some(r(2)))]);
        assert_eq!(newton_polygon(&prof).unwrap().vertices().len(), 2);
    }

    fn fake_partial(n: usize, ords: &[u64], p: u32) -> LPolyCoeffs {
        // A_j = p^ord (a = 1) realizes any integral valuation profile
        let coeffs = ords.iter().map(|&o| CycInt::from_int(p, BigInt::from(p).pow(o as u32))).collect();
        LPolyCoeffs { p, a: 1, n, coeffs }
    }

    #[test]
    fn symmetry_completion_examples() {
        let part = fake_partial(3, &[0, 0, 1, 2, 3, 4], 5);
        let prof = symmetry_complete(&part);
        assert_eq!(prof.get(15).unwrap().ord, Some(r(28)));
        assert_eq!(prof.get(15).unwrap().source, Source::Symmetry);
        assert_eq!(prof.get(11).unwrap().ord, Some(r(16)));
        assert_eq!(prof.get(16).unwrap().ord, Some(r(32)));
        assert!(prof.get(8).is_none());
        let full_half = fake_partial(2, &[0, 0, 1, 2, 3], 7);
        let prof = symmetry_complete(&full_half);
        assert_eq!(prof.get(4).unwrap().source, Source::Direct);
        assert_eq!(prof.entries.len(), 9);
        assert_eq!(prof.get(8).unwrap().ord, Some(r(12)));
    }

    #[test]
    fn vertex_coincidence_examples() {
        let hp3 = family_hodge_polygon(3);
        let good = ValuationProfile::from_points(&[(1, Some(r(0))), (5, Some(r(4))), (11, Some(r(16))), (15, Some(r(28)))]);
        assert!(vertex_coincidence(&good, &hp3).unwrap().np_eq_hp);
        let bad = ValuationProfile::from_points(&[(1, Some(r(0))), (5, Some(r(5))), (11, Some(r(16))), (15, Some(r(28)))]);
        let v = vertex_coincidence(&bad, &hp3).unwrap();
        assert!(!v.np_eq_hp);
        assert_eq!(v.first_failure().unwrap().index, 5);
        let hp2 = family_hodge_polygon(2);
        let good2 = ValuationProfile::from_points(&[(1, Some(r(0))), (4, Some(r(3))), (7, Some(r(9)))]);
        assert!(vertex_coincidence(&good2, &hp2).unwrap().np_eq_hp);
        let missing = ValuationProfile::from_points(&[(1, Some(r(0)))]);
        assert!(matches!(vertex_coincidence(&missing, &hp2), Err(Error::MissingIndex(4))));
    }

    #[test]
    fn functional_equation_trivial_cases() {
        // (1 - 3T)^4 with q = 3, n = 1: every reciprocal root has |alpha| = q
        let p = 3;
        let coeffs: Vec<CycInt> = [1, -12, 54, -108, 81]
            .iter()
            .map(|&c| CycInt::from_int(p, c))
            .collect();
        let full = LPolyCoeffs { p, a: 1, n: 1, coeffs };
        assert_eq!(functional_equation_check(&full), Ok(()));
        assert!(purity_deviation(&full).unwrap() < 1e-6);
        // 1 - 81 T^4: four distinct roots on the circle |T| = 1/3
        let coeffs: Vec<CycInt> = [1, 0, 0, 0, -81].iter().map(|&c| CycInt::from_int(p, c)).collect();
        let distinct = LPolyCoeffs { p, a: 1, n: 1, coeffs };
        assert_eq!(functional_equation_check(&distinct), Ok(()));
        assert!(purity_deviation(&distinct).unwrap() < 1e-9);
        let mut broken = full.clone();
        broken.coeffs[1] = CycInt::from_int(p, -11);
        assert_eq!(functional_equation_check(&broken), Err(1));
    }

    #[test]
    fn aberth_finds_known_roots() {
        // (z - 1)(z + 2)(z - i)
        let i = Complex64::new(0.0, 1.0);
        let c = vec![
            Complex64::new(0.0, 2.0),
            Complex64::new(-2.0, -1.0),
            Complex64::new(1.0, -1.0),
            Complex64::new(1.0, 0.0),
        ];
        let roots = polynomial_roots(&c).unwrap();
        for want in [Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0), i] {
            assert!(roots.iter().any(|z| (z - want).norm() < 1e-9), "{want}");
        }
    }

    proptest! {
        #[test]
        fn newton_identities_roundtrip(raw in prop::collection::vec(prop::collection::vec(-9i64..9, 4), 1..7)) {
            // start from integral coefficients, map to power sums and back
            let mut a = vec![CycInt::one(5)];
            a.extend(raw.iter().map(|v| CycInt::from_coords(5, v.iter().map(|&x| BigInt::from(x)).collect())));
            let sums = newton_sums_from_coeffs(&a);
            prop_assert_eq!(coeffs_from_newton_sums(&sums).unwrap(), a);
        }
    }
}
