//! Toric exponential sums S*_k(f) = sum over (F*_{q^k})^m of z^Tr(f(x)).

mod direct;
mod family;
mod klo;

pub use direct::{expsum_direct, expsum_direct_with, Strategy};
pub use family::{expsum_family, FamilySummer};
pub use klo::KloTable;

use crate::ff::{FFElem, FField};
use crate::{Error, Result};

/// f = sum_j a_j x^{V_j} with coefficients in F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    field: FField,
    dim: usize,
    terms: Vec<(Vec<i64>, FFElem)>,
}

impl LaurentPoly {
    pub fn new(field: FField, dim: usize, terms: Vec<(Vec<i64>, FFElem)>) -> Result<Self> {
        for (j, (v, a)) in terms.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Invalid(format!(
                    "term {j} has {} exponents, expected {dim}",
                    v.len()
                )));
            }
            if a.coeffs().len() != field.degree() as usize {
                return Err(Error::Invalid(format!("term {j} lives in another field")));
            }
            if a.is_zero() {
                return Err(Error::ZeroCoefficient(j));
            }
        }
        let mut exps: Vec<&Vec<i64>> = terms.iter().map(|(v, _)| v).collect();
        exps.sort();
        if exps.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("repeated exponent vector".into()));
        }
        Ok(LaurentPoly { field, dim, terms })
    }

    pub fn field(&self) -> &FField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<i64>, FFElem)] {
        &self.terms
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            field: self.field.clone(),
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(v, a)| (v.clone(), self.field.neg(a)))
                .collect(),
        }
    }

    /// Applies a -> a^p to every coefficient.
    pub fn frobenius(&self) -> Self {
        LaurentPoly {
            field: self.field.clone(),
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(v, a)| (v.clone(), self.field.frobenius(a)))
                .collect(),
        }
    }
}

/// A member of the family
/// `sum_i a_i x_{n+1}(x_i + 1/x_i) + a_{n+1} x_{n+1} + 1/x_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    field: FField,
    coeffs: Vec<FFElem>,
}

impl FamilySpec {
    /// `coeffs` holds a_1..a_{n+1}; n is one less than its length.
    pub fn new(field: FField, coeffs: Vec<FFElem>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Invalid("the family needs n >= 1".into()));
        }
        if let Some(j) = coeffs.iter().position(FFElem::is_zero) {
            return Err(Error::ZeroCoefficient(j));
        }
        if field.p() == 2 {
            return Err(Error::Invalid("the family is studied for odd p".into()));
        }
        Ok(FamilySpec { field, coeffs })
    }

    pub fn from_indices(p: u32, a: u32, indices: &[u64]) -> Result<Self> {
        let field = FField::new(p, a)?;
        if let Some(&bad) = indices.iter().find(|&&i| i >= field.order()) {
            return Err(Error::Invalid(format!("element index {bad} outside F_{}", field.order())));
        }
        let coeffs = indices.iter().map(|&i| field.from_index(i)).collect();
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &FField {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn a(&self) -> u32 {
        self.field.degree()
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn laurent(&self) -> LaurentPoly {
        let n = self.n();
        let m = n + 1;
        let mut terms = Vec::with_capacity(2 * n + 2);
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            for s in [1, -1] {
                let mut v = vec![0; m];
                v[i] = s;
                v[n] = 1;
                terms.push((v, a.clone()));
            }
        }
        let mut top = vec![0; m];
        top[n] = 1;
        terms.push((top, self.coeffs[n].clone()));
        let mut bottom = vec![0; m];
        bottom[n] = -1;
        terms.push((bottom, self.field.one()));
        LaurentPoly::new(self.field.clone(), m, terms).expect("family terms are valid")
    }

    /// Restriction to the top face x_{n+1} = 1 (drops the 1/x_{n+1} term).
    pub fn top_face(&self) -> LaurentPoly {
        let f = self.laurent();
        let terms = f.terms()[..2 * self.n() + 1].to_vec();
        LaurentPoly::new(self.field.clone(), f.dim(), terms).expect("subset of valid terms")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_validation() {
        let f = FField::new(3, 1).unwrap();
        assert!(matches!(
            LaurentPoly::new(f.clone(), 1, vec![(vec![1], f.zero())]),
            Err(Error::ZeroCoefficient(0))
        ));
        assert!(LaurentPoly::new(f.clone(), 1, vec![(vec![1], f.one()), (vec![1], f.one())]).is_err());
        assert!(LaurentPoly::new(f.clone(), 2, vec![(vec![1], f.one())]).is_err());
    }

    #[test]
    fn family_shape() {
        let spec = FamilySpec::from_indices(5, 1, &[1, 2, 3, 4]).unwrap();
        assert_eq!(spec.n(), 3);
        let f = spec.laurent();
        assert_eq!(f.dim(), 4);
        assert_eq!(f.terms().len(), 8);
        let g = spec.top_face();
        assert_eq!(g.terms().len(), 7);
        assert!(g.terms().iter().all(|(v, _)| v[3] == 1));
        assert!(matches!(
            FamilySpec::from_indices(5, 1, &[1, 0, 3]),
            Err(Error::ZeroCoefficient(1))
        ));
    }
}
