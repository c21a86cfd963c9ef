//! Field elements as base-p digit strings, constant coefficient first.
//!
//! For p <= 36 each character is one digit (0-9, then a-z). Larger primes
//! use dot-separated decimal digits, e.g. "12.0.40".

use anyhow::{bail, Context, Result};
use hasse_core::ff::{FFElem, FField};

pub fn format_elem(field: &FField, x: &FFElem) -> String {
    let p = field.p();
    if p <= 36 {
        x.coeffs()
            .iter()
            .map(|&c| char::from_digit(c, 36).expect("digit below 36"))
            .collect()
    } else {
        x.coeffs().iter().map(u32::to_string).collect::<Vec<_>>().join(".")
    }
}

pub fn parse_elem(field: &FField, s: &str) -> Result<FFElem> {
    let p = field.p();
    let s = s.trim();
    let digits: Vec<u32> = if s.contains('.') {
        s.split('.')
            .map(|d| d.parse::<u32>().with_context(|| format!("bad digit {d:?} in {s:?}")))
            .collect::<Result<_>>()?
    } else {
        if p > 36 && s.len() > 1 {
            bail!("for p > 36 separate digits with '.' (got {s:?})");
        }
        s.chars()
            .map(|c| c.to_digit(36).with_context(|| format!("bad digit {c:?} in {s:?}")))
            .collect::<Result<_>>()?
    };
    if digits.is_empty() {
        bail!("empty field element");
    }
    if digits.len() > field.degree() as usize {
        bail!("{s:?} has {} digits but F_q has degree {}", digits.len(), field.degree());
    }
    if let Some(d) = digits.iter().find(|&&d| d >= p) {
        bail!("digit {d} is not below p = {p}");
    }
    Ok(field.from_coeffs(&digits))
}

pub fn parse_list(field: &FField, s: &str) -> Result<Vec<FFElem>> {
    s.split(',').map(|part| parse_elem(field, part)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let f = FField::new(3, 2).unwrap();
        for i in 0..9 {
            let x = f.from_index(i);
            let s = format_elem(&f, &x);
            assert_eq!(s.len(), 2);
            assert_eq!(parse_elem(&f, &s).unwrap(), x);
        }
        assert_eq!(format_elem(&f, &f.from_index(5)), "21");
        assert_eq!(parse_elem(&f, "2").unwrap(), f.from_int(2));
    }

    #[test]
    fn large_prime_uses_dots() {
        let f = FField::new(41, 2).unwrap();
        let x = f.from_coeffs(&[40, 3]);
        assert_eq!(format_elem(&f, &x), "40.3");
        assert_eq!(parse_elem(&f, "40.3").unwrap(), x);
        assert!(parse_elem(&f, "43").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let f = FField::new(5, 1).unwrap();
        assert!(parse_elem(&f, "5").is_err());
        assert!(parse_elem(&f, "12").is_err());
        assert!(parse_elem(&f, "").is_err());
        assert_eq!(parse_list(&f, "1,2,3").unwrap().len(), 3);
    }
}
