use hasse_core::cyclo::CycInt;
use hasse_core::dwork::{hasse_closed_full, hasse_minor, nondegenerate};
use hasse_core::expsum::{expsum_family, FamilySpec};
use hasse_core::ff::FField;
use hasse_core::lfun::{
    coeffs_from_power_sums, functional_equation_check, newton_polygon, polynomial_roots,
    purity_deviation, symmetry_complete, vertex_coincidence,
};
use hasse_core::polytope::{family_hodge_polygon, Polytope};
use hasse_core::Budget;
use num_bigint::BigInt;
use num_complex::Complex64;

fn nondegenerate_specs(p: u32, a: u32, n: usize) -> Vec<FamilySpec> {
    let f = FField::new(p, a).unwrap();
    let q = f.order();
    let mut out = Vec::new();
    let total = (q - 1).pow(n as u32 + 1);
    for mut t in 0..total {
        let mut idx = Vec::new();
        for _ in 0..=n {
            idx.push(1 + t % (q - 1));
            t /= q - 1;
        }
        let spec = FamilySpec::from_indices(p, a, &idx).unwrap();
        if nondegenerate(&f, spec.coeffs()).unwrap() {
            out.push(spec);
        }
    }
    out
}

fn sums(spec: &FamilySpec, kmax: u32) -> Vec<CycInt> {
    (1..=kmax)
        .map(|k| expsum_family(spec, k, &Budget::default()).unwrap())
        .collect()
}

#[test]
fn full_l_polynomial_p5_n2() {
    let specs = nondegenerate_specs(5, 1, 2);
    assert_eq!(specs.len(), 16);
    for spec in specs.iter().take(4) {
        let s = sums(spec, 8);
        let lp = coeffs_from_power_sums(&s, 2, 5, 1).unwrap();
        assert!(lp.is_complete());
        assert_eq!(functional_equation_check(&lp), Ok(()));
        assert_eq!(lp.ord_q(8), Some(hasse_core::Rational::from_integer(12)));
        assert!(purity_deviation(&lp).unwrap() < 1e-6);

        // numeric oracle: reciprocal roots reproduce every power sum
        let poly: Vec<Complex64> = lp.coeffs().iter().map(|c| c.embed(1)).collect();
        let roots = polynomial_roots(&poly).unwrap();
        for (k, sk) in s.iter().enumerate() {
            let k = k as i32 + 1;
            let numeric: Complex64 = roots.iter().map(|t| t.inv().powi(k)).sum();
            // (-1)^(n+1) S_k with n = 2
            let exact = -sk.embed(1);
            let scale = 125f64.powi(k).sqrt() * 8.0;
            assert!((numeric - exact).norm() / scale < 1e-6, "k={k}: {numeric} vs {exact}");
        }
    }
}

#[test]
fn symmetry_completion_matches_full_degree() {
    for spec in nondegenerate_specs(7, 1, 2).iter().step_by(9) {
        let s = sums(spec, 8);
        let full = coeffs_from_power_sums(&s, 2, 7, 1).unwrap();
        let half = coeffs_from_power_sums(&s[..4], 2, 7, 1).unwrap();
        let direct = newton_polygon(&full.profile()).unwrap();
        let completed = newton_polygon(&symmetry_complete(&half)).unwrap();
        assert_eq!(direct, completed);
    }
}

#[test]
fn hasse_value_decides_ordinariness_n2() {
    let hp = family_hodge_polygon(2);
    let mut seen = [false; 2];
    for spec in nondegenerate_specs(7, 1, 2) {
        let lp = coeffs_from_power_sums(&sums(&spec, 4), 2, 7, 1).unwrap();
        let verdict = vertex_coincidence(&symmetry_complete(&lp), &hp).unwrap();
        let h = hasse_closed_full(spec.field(), spec.coeffs()).unwrap();
        assert_eq!(verdict.np_eq_hp, !h.is_zero());
        seen[verdict.np_eq_hp as usize] = true;
    }
    assert_eq!(seen, [true, true]);
}

#[test]
fn minor_of_the_full_polytope_tracks_the_first_slope_side() {
    // the k = 1 minor of Delta_2 vanishes exactly when h_le1 does
    let poly = Polytope::family_delta(2);
    for spec in nondegenerate_specs(5, 1, 2) {
        let m = hasse_minor(&poly, &spec.laurent(), 1, &Budget::default()).unwrap();
        let h = hasse_closed_full(spec.field(), spec.coeffs()).unwrap();
        assert_eq!(m.is_zero(), h.is_zero());
    }
}

#[test]
fn negation_conjugates_the_sums() {
    // S*_k(-f) is the complex conjugate of S*_k(f)
    let spec = FamilySpec::from_indices(5, 1, &[1, 2, 2]).unwrap();
    let f = spec.laurent();
    for k in 1..=2 {
        let s = expsum_family(&spec, k, &Budget::default()).unwrap();
        let t = hasse_core::expsum::expsum_direct(&f.neg(), k, &Budget::default()).unwrap();
        assert_eq!(s.conj(), t);
        assert!(s.max_abs_coord() <= BigInt::from(5i64.pow(3 * k)));
    }
}
