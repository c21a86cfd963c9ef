//! Newton polyhedra: facets, the weight function, lattice-point weight
//! counts and the Hodge / chain polygons built from them.
//!
//! Polytopes always contain the origin. A facet is stored as a primitive
//! integral normal `e` and constant `c` meaning `<e, x> <= c`; the facets
//! that avoid the origin (c > 0) are the ones that define weights.

use itertools::Itertools;
use num_integer::Integer;

use crate::expsum::LaurentPoly;
use crate::polygon::Polygon;
use crate::{Budget, Error, Rational, Result};

pub const MAX_GENERIC_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    normal: Vec<i64>,
    c: i64,
}

impl Facet {
    pub fn new(normal: Vec<i64>, c: i64) -> Self {
        Facet { normal, c }
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// Facets not containing the origin.
    pub fn flagged(&self) -> bool {
        self.c > 0
    }

    pub fn eval(&self, u: &[i64]) -> i64 {
        dot(&self.normal, u)
    }

    pub fn contains(&self, u: &[i64]) -> bool {
        self.eval(u) == self.c
    }
}

/// The two polytopes attached to the family in n + 1 variables
/// (x_1..x_n, then x_{n+1} last).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Hull of 0, +-e_i + e_{n+1}, e_{n+1}, -e_{n+1}.
    Delta(usize),
    /// Hull of 0, +-e_i + e_{n+1}, e_{n+1}: the top face coned off at 0.
    DeltaPrime(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    family: Option<Family>,
}

/// W(k) = #{u : w(u) = k/D} for k = 0..=k_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    pub d: i64,
    pub counts: Vec<u64>,
}

impl Polytope {
    /// Hull of the origin and the given exponents, dimension <= 4.
    pub fn from_monomials(exponents: &[Vec<i64>]) -> Result<Self> {
        let dim = exponents
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Invalid("no monomials".into()))?;
        if dim == 0 || dim > MAX_GENERIC_DIM {
            return Err(Error::Dimension(dim));
        }
        if exponents.iter().any(|v| v.len() != dim) {
            return Err(Error::Invalid("exponent vectors of mixed length".into()));
        }
        let mut points: Vec<Vec<i64>> = exponents.to_vec();
        points.push(vec![0; dim]);
        points.sort();
        points.dedup();
        if rank(&points) != dim {
            return Err(Error::DegenerateHull);
        }

        let mut facets = Vec::new();
        for combo in (0..points.len()).combinations(dim) {
            let base = &points[combo[0]];
            let rows: Vec<Vec<i64>> = combo[1..]
                .iter()
                .map(|&i| sub(&points[i], base))
                .collect();
            let Some(normal) = orthogonal_primitive(&rows, dim) else {
                continue;
            };
            let c0 = dot(&normal, base);
            let vals: Vec<i64> = points.iter().map(|q| dot(&normal, q)).collect();
            let facet = if vals.iter().all(|&v| v <= c0) {
                Facet::new(normal, c0)
            } else if vals.iter().all(|&v| v >= c0) {
                Facet::new(normal.iter().map(|x| -x).collect(), -c0)
            } else {
                continue;
            };
            facets.push(facet);
        }
        facets.sort();
        facets.dedup();

        let vertices = points
            .iter()
            .filter(|q| {
                let normals: Vec<Vec<i64>> = facets
                    .iter()
                    .filter(|f| f.contains(q))
                    .map(|f| f.normal.clone())
                    .collect();
                rank(&normals) == dim
            })
            .cloned()
            .collect();
        Ok(Polytope {
            dim,
            vertices,
            facets,
            family: None,
        })
    }

    pub fn from_laurent(f: &LaurentPoly) -> Result<Self> {
        let exps: Vec<Vec<i64>> = f.terms().iter().map(|(v, _)| v.clone()).collect();
        Self::from_monomials(&exps)
    }

    /// Delta_n in dimension n + 1, from its known facet description.
    pub fn family_delta(n: usize) -> Self {
        assert!(n >= 1);
        let m = n + 1;
        let mut vertices = Vec::with_capacity(2 * n + 1);
        for i in 0..n {
            for s in [1, -1] {
                let mut v = vec![0; m];
                v[i] = s;
                v[n] = 1;
                vertices.push(v);
            }
        }
        let mut bottom = vec![0; m];
        bottom[n] = -1;
        vertices.push(bottom);
        let mut facets = vec![Facet::new(unit(m, n), 1)];
        for signs in sign_vectors(n) {
            let mut normal: Vec<i64> = signs.iter().map(|s| 2 * s).collect();
            normal.push(-1);
            facets.push(Facet::new(normal, 1));
        }
        vertices.sort();
        facets.sort();
        Polytope {
            dim: m,
            vertices,
            facets,
            family: Some(Family::Delta(n)),
        }
    }

    /// Delta'_n: Newton polyhedron of the family's restriction to x_{n+1} = 1.
    pub fn family_delta_prime(n: usize) -> Self {
        assert!(n >= 1);
        let m = n + 1;
        let mut vertices = vec![vec![0; m]];
        for i in 0..n {
            for s in [1, -1] {
                let mut v = vec![0; m];
                v[i] = s;
                v[n] = 1;
                vertices.push(v);
            }
        }
        let mut facets = vec![Facet::new(unit(m, n), 1)];
        for signs in sign_vectors(n) {
            let mut normal = signs;
            normal.push(-1);
            facets.push(Facet::new(normal, 0));
        }
        vertices.sort();
        facets.sort();
        Polytope {
            dim: m,
            vertices,
            facets,
            family: Some(Family::DeltaPrime(n)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn flagged_facets(&self) -> impl Iterator<Item = &Facet> {
        self.facets.iter().filter(|f| f.flagged())
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    /// True when every facet avoids the origin.
    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(Facet::flagged)
    }

    /// lcm of the constants of the facets avoiding the origin.
    pub fn denominator(&self) -> i64 {
        self.flagged_facets().fold(1, |d, f| d.lcm(&f.c))
    }

    /// w(u); `None` stands for +infinity (u outside the cone over the polytope).
    pub fn weight(&self, u: &[i64]) -> Option<Rational> {
        debug_assert_eq!(u.len(), self.dim);
        match self.family {
            Some(Family::Delta(n)) => {
                let l1: i64 = u[..n].iter().map(|x| x.abs()).sum();
                let h = u[n];
                Some(Rational::from_integer(h.max(2 * l1 - h)))
            }
            Some(Family::DeltaPrime(n)) => {
                let l1: i64 = u[..n].iter().map(|x| x.abs()).sum();
                (l1 <= u[n]).then(|| Rational::from_integer(u[n]))
            }
            None => self.weight_from_facets(u),
        }
    }

    /// The facet formula; `weight` may take shortcuts for the family.
    pub fn weight_from_facets(&self, u: &[i64]) -> Option<Rational> {
        let mut w = Rational::from_integer(0);
        for f in &self.facets {
            let v = f.eval(u);
            if f.c == 0 {
                if v > 0 {
                    return None;
                }
            } else if f.c > 0 {
                w = w.max(Rational::new(v, f.c));
            }
        }
        Some(w)
    }

    /// Lattice points grouped by weight numerator k (weight k/D), k <= k_max,
    /// each group in lexicographic order.
    pub fn points_by_weight(&self, k_max: i64, budget: &Budget) -> Result<Vec<Vec<Vec<i64>>>> {
        let d = self.denominator();
        let t = Rational::new(k_max, d);
        let mut lo = vec![0i64; self.dim];
        let mut hi = vec![0i64; self.dim];
        for v in &self.vertices {
            for c in 0..self.dim {
                lo[c] = lo[c].min((t * v[c]).floor().to_integer());
                hi[c] = hi[c].max((t * v[c]).ceil().to_integer());
            }
        }
        let size: u128 = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| (h - l + 1) as u128)
            .product();
        budget.check_box("polytope box enumeration", size)?;
        let mut buckets = vec![Vec::new(); k_max as usize + 1];
        let mut u = lo.clone();
        loop {
            if let Some(w) = self.weight(&u) {
                let k = w * d;
                debug_assert!(k.is_integer(), "weight outside (1/D)Z");
                let k = k.to_integer();
                if k <= k_max {
                    buckets[k as usize].push(u.clone());
                }
            }
            // odometer, last coordinate fastest keeps lexicographic order
            let mut c = self.dim;
            loop {
                if c == 0 {
                    return Ok(buckets);
                }
                c -= 1;
                if u[c] < hi[c] {
                    u[c] += 1;
                    break;
                }
                u[c] = lo[c];
            }
        }
    }

    /// W(k) for k = 0..=k_max. Delta_n uses a closed count; everything else
    /// enumerates the bounding box of the dilated polytope.
    pub fn weight_counts(&self, k_max: i64, budget: &Budget) -> Result<WeightTable> {
        if let Some(Family::Delta(n)) = self.family {
            return Ok(WeightTable {
                d: 1,
                counts: family_delta_counts(n, k_max),
            });
        }
        self.weight_counts_enumerated(k_max, budget)
    }

    pub fn weight_counts_enumerated(&self, k_max: i64, budget: &Budget) -> Result<WeightTable> {
        let buckets = self.points_by_weight(k_max, budget)?;
        Ok(WeightTable {
            d: self.denominator(),
            counts: buckets.iter().map(|b| b.len() as u64).collect(),
        })
    }
}

/// H(k) = sum_i (-1)^i C(m, i) W(k - iD) for k = 0..=m D.
pub fn hodge_numbers(table: &WeightTable, m: usize) -> Result<Vec<i64>> {
    let top = m as i64 * table.d;
    if (table.counts.len() as i64) <= top {
        return Err(Error::MissingIndex(table.counts.len()));
    }
    (0..=top)
        .map(|k| {
            let mut h: i128 = 0;
            for i in 0..=m as i64 {
                let idx = k - i * table.d;
                if idx < 0 {
                    break;
                }
                let term = binomial(m as u64, i as u64) as i128 * table.counts[idx as usize] as i128;
                h += if i % 2 == 0 { term } else { -term };
            }
            if h < 0 {
                Err(Error::NegativeHodge(k as usize, h as i64))
            } else {
                Ok(h as i64)
            }
        })
        .collect()
}

/// Vertices (0,0) and (sum_{m<=k} H(m), sum_{m<=k} m H(m) / D).
pub fn hodge_polygon(h: &[i64], d: i64) -> Polygon {
    cumulative_polygon(h, d)
}

/// The chain-level polygon P: same construction with W in place of H.
pub fn chain_polygon(table: &WeightTable) -> Polygon {
    let w: Vec<i64> = table.counts.iter().map(|&c| c as i64).collect();
    cumulative_polygon(&w, table.d)
}

fn cumulative_polygon(counts: &[i64], d: i64) -> Polygon {
    let mut pts = vec![(Rational::from_integer(0), Rational::from_integer(0))];
    let (mut x, mut y) = (Rational::from_integer(0), Rational::from_integer(0));
    for (m, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        x += Rational::from_integer(c);
        y += Rational::new(m as i64 * c, d);
        pts.push((x, y));
    }
    Polygon::lower_hull(&pts).expect("nonempty")
}

/// H(m) = C(n+1, m) for Delta_n.
pub fn family_hodge(n: usize) -> Vec<i64> {
    (0..=n as u64 + 1)
        .map(|m| binomial(n as u64 + 1, m) as i64)
        .collect()
}

/// Hodge polygon of Delta_n from the closed form.
pub fn family_hodge_polygon(n: usize) -> Polygon {
    hodge_polygon(&family_hodge(n), 1)
}

/// Indices of the interior vertices of HP(Delta_n).
pub fn family_break_points(n: usize) -> Vec<usize> {
    family_hodge_polygon(n)
        .break_points()
        .iter()
        .map(|(x, _)| x.to_integer() as usize)
        .collect()
}

fn family_delta_counts(n: usize, k_max: i64) -> Vec<u64> {
    // #{x' in Z^n : |x'|_1 <= r}
    let ball = |r: i64| -> u64 {
        if r < 0 {
            return 0;
        }
        (0..=n.min(r as usize) as u64)
            .map(|i| (1u64 << i) * binomial(n as u64, i) * binomial(r as u64, i))
            .sum()
    };
    // w(x', h) <= k  iff  -k <= h <= k and |x'|_1 <= (k + h) / 2
    let le = |k: i64| -> u64 {
        if k < 0 {
            return 0;
        }
        (-k..=k).map(|h| ball(Integer::div_floor(&(k + h), &2))).sum()
    };
    (0..=k_max).map(|k| le(k) - le(k - 1)).collect()
}

/// Keeps the terms of f whose exponents lie on the facet.
pub fn face_restrict(f: &LaurentPoly, facet: &Facet) -> Result<LaurentPoly> {
    if !facet.flagged() {
        return Err(Error::Invalid("facet contains the origin".into()));
    }
    let terms: Vec<_> = f
        .terms()
        .iter()
        .filter(|(v, _)| facet.contains(v))
        .cloned()
        .collect();
    if terms.is_empty() {
        return Err(Error::Invalid("empty face restriction".into()));
    }
    LaurentPoly::new(f.field().clone(), f.dim(), terms)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn unit(m: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; m];
    v[i] = 1;
    v
}

fn sign_vectors(n: usize) -> Vec<Vec<i64>> {
    (0..1u64 << n)
        .map(|bits| {
            (0..n)
                .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect()
}

/// Primitive integral normal to the (dim - 1) given rows, via cofactors.
fn orthogonal_primitive(rows: &[Vec<i64>], dim: usize) -> Option<Vec<i64>> {
    let normal: Vec<i64> = (0..dim)
        .map(|col| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != col)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let d = det(&minor);
            if col % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    let g = normal.iter().fold(0i64, |g, &x| g.gcd(&x));
    (g != 0).then(|| normal.iter().map(|x| x / g).collect())
}

/// Determinant by Laplace expansion; matrices here are at most 3x3.
fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = m[0][j] * det(&minor);
                if j % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .sum(),
    }
}

/// Rank over Q by fraction-free elimination.
fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}
