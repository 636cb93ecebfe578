use milnor_core::contact::ops::DEFAULT_PROPORTIONALITY_TOL;
use milnor_core::contact::{
    check_xi_projection, eval_forms, holomorphic_gradient, lambda_cone_check, real_basis, sample_points, Frame,
    PointSample, Polynomial, TangentVector, VarietyModel, C64,
};
use nalgebra::DVector;
use proptest::prelude::*;

fn brieskorn() -> VarietyModel {
    VarietyModel::hypersurface(Polynomial::parse("z0^2 + z1^3 + z2^5", 3).unwrap())
}

fn paraboloid_chart() -> VarietyModel {
    let map = ["z0", "z1", "z0^2 - 2*z0 z1 + (0.5+1i)*z1^3"]
        .iter()
        .map(|s| Polynomial::parse(s, 2).unwrap())
        .collect();
    VarietyModel::chart(2, map).unwrap()
}

fn models() -> Vec<(&'static str, VarietyModel)> {
    vec![
        ("C^3", VarietyModel::identity(3)),
        ("chart", paraboloid_chart()),
        ("Brieskorn", brieskorn()),
    ]
}

fn random_tangent(d: usize, seed: u64) -> TangentVector {
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    TangentVector(DVector::from_fn(d, |_, _| C64::new(next(), next())))
}

#[test]
fn sampling_is_deterministic_and_on_the_level() {
    for (name, model) in models() {
        let a = sample_points(&model, 0.01, 40, 17).unwrap();
        let b = sample_points(&model, 0.01, 40, 17).unwrap();
        let c = sample_points(&model, 0.01, 40, 18).unwrap();
        assert_eq!(a, b, "{name}");
        assert_ne!(a, c, "{name}");
        for s in &a {
            assert!((s.rho_value - 0.01).abs() <= 1e-10 * 0.01, "{name}: {}", s.rho_value);
            assert!((model.rho(&s.point) - s.rho_value).abs() <= 1e-15, "{name}");
        }
    }
}

#[test]
fn forms_are_consistent_at_every_sample() {
    for (name, model) in models() {
        for (k, sample) in sample_points(&model, 0.01, 60, 3).unwrap().iter().enumerate() {
            let frame = Frame::new(&model, sample).unwrap();
            let forms = eval_forms(&model, sample).unwrap();
            assert!(forms.fd_deviation <= 1e-5, "{name}: fd {}", forms.fd_deviation);
            let u = random_tangent(frame.dim(), 2 * k as u64);
            let v = random_tangent(frame.dim(), 2 * k as u64 + 1);
            let scale = frame.norm2(&u).sqrt() * frame.norm2(&v).sqrt();
            assert!((frame.omega(&u, &v) + frame.omega(&v, &u)).abs() <= 1e-10 * scale, "{name}");
            assert!((frame.g(&u, &v) - frame.g(&v, &u)).abs() <= 1e-10 * scale, "{name}");
            assert!((frame.g(&u.times_i(), &v.times_i()) - frame.g(&u, &v)).abs() <= 1e-10 * scale, "{name}");
            let h = frame.h(&u, &v);
            assert!((h - C64::new(frame.g(&u, &v), frame.omega(&u, &v))).norm() <= 1e-10 * scale, "{name}");
            assert!((frame.omega_determinant(&u, &v) - frame.omega(&u, &v)).abs() <= 1e-8 * scale, "{name}");
            // ω(u, Ju) = g(u, u) > 0
            assert!(frame.omega(&u, &u.times_i()) > 0.0, "{name}");
        }
    }
}

#[test]
fn projection_contract_at_every_sample() {
    for (name, model) in models() {
        for (k, sample) in sample_points(&model, 0.01, 40, 5).unwrap().iter().enumerate() {
            let w = random_tangent(sample.tangent_dim(), k as u64);
            let check = check_xi_projection(&model, sample, &w).unwrap();
            assert!(check.orthogonality <= 1e-8, "{name}: {check:?}");
            assert!(check.d_rho <= 1e-8 && check.dc_rho <= 1e-8, "{name}: {check:?}");
            assert!(check.idempotence <= 1e-8, "{name}: {check:?}");
        }
    }
}

#[test]
fn gradient_identities_at_every_sample() {
    let functions = ["z0", "z0*z1 - 3*z1^2", "(0.2-1i)*z0^3 + z1 + 0.01"];
    let model = VarietyModel::identity(2);
    for sample in sample_points(&model, 0.01, 40, 8).unwrap() {
        for text in functions {
            let phi = Polynomial::parse(text, 2).unwrap();
            let check = holomorphic_gradient(&model, &sample, &phi).unwrap();
            assert!(check.modulus_residual <= 1e-8, "{text}: {check:?}");
            if let Some(r) = check.argument_residual {
                assert!(r <= 1e-8, "{text}: {check:?}");
            }
        }
    }
    let surface = brieskorn();
    let phi = Polynomial::parse("z0 + 2*z1*z2", 3).unwrap();
    for sample in sample_points(&surface, 0.01, 40, 8).unwrap() {
        let check = holomorphic_gradient(&surface, &sample, &phi).unwrap();
        assert!(check.modulus_residual <= 1e-8, "{check:?}");
        assert!(check.argument_residual.is_none_or(|r| r <= 1e-8), "{check:?}");
    }
}

#[test]
fn cone_check_reports_its_threshold() {
    let model = VarietyModel::identity(2);
    let samples = sample_points(&model, 0.01, 30, 1).unwrap();
    let f = Polynomial::parse("z0^2 + z1^3", 2).unwrap();
    let report = lambda_cone_check(&model, &f, &samples, DEFAULT_PROPORTIONALITY_TOL).unwrap();
    assert_eq!(report.proportionality_tol, DEFAULT_PROPORTIONALITY_TOL);
    assert_eq!(report.samples, 30);
    assert!(report.passes());
}

#[test]
fn explicit_points_outside_the_variety_are_rejected() {
    let model = brieskorn();
    let on_surface = vec![C64::new(0.0, 0.0); 3];
    assert!(PointSample::at(&model, on_surface).is_err());
    assert!(PointSample::at(&model, vec![C64::new(1.0, 0.0); 2]).is_err());
    assert_eq!(real_basis(2).len(), 4);
}

fn coefficient() -> impl Strategy<Value = C64> {
    (-20i32..=20, -20i32..=20).prop_map(|(a, b)| C64::new(a as f64 / 4.0, b as f64 / 4.0))
}

proptest! {
    #[test]
    fn display_parses_back(terms in proptest::collection::vec(((0u32..4, 0u32..4, 0u32..3), coefficient()), 0..6)) {
        let p = Polynomial::from_terms(3, terms.into_iter().map(|((a, b, c), k)| (vec![a, b, c], k)));
        let back = Polynomial::parse(&p.to_string(), 3).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn gradient_matches_finite_differences(
        terms in proptest::collection::vec(((0u32..4, 0u32..4), coefficient()), 1..5),
        (x, y) in (-1.0f64..1.0, -1.0f64..1.0),
    ) {
        let p = Polynomial::from_terms(2, terms.into_iter().map(|((a, b), k)| (vec![a, b], k)));
        let z = [C64::new(x, y), C64::new(y, -x)];
        let grad = p.gradient(&z);
        let h = 1e-6;
        for k in 0..2 {
            let mut plus = z;
            let mut minus = z;
            plus[k] += h;
            minus[k] -= h;
            let fd = (p.eval(&plus) - p.eval(&minus)) / (2.0 * h);
            prop_assert!((fd - grad[k]).norm() <= 1e-5 * (1.0 + grad[k].norm()));
        }
    }
}
