use lojex::engine::{classify_coordinates, lojasiewicz_exponent, Method};
use lojex::groebner::{is_isolated, Budget};
use lojex::poly::{parse_with_inferred_variables, MonomialCurve, Polynomial};
use lojex::verify::{
    exhibits_decay, path_quotient, random_curve, sample_directed_lower, sample_euclidean_lower, witness_search,
    FloatPolynomial, RhoGeometry, SamplingConfig,
};
use lojex::weights::{infer_weight_systems, SolutionKind, WeightSystem};
use lojex::{rat, Extended, Rational};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn parse(text: &str) -> Polynomial {
    parse_with_inferred_variables(text).unwrap().0
}

const CORPUS: &[&str] = &[
    "z1*z4 + z1^10 + z2^5 + z3^5",
    "z1*z6 + z1^12 + z2*z5 + z3^4 + z4^3 + z2^6",
    "x^3 + y^3 + z^3",
    "x^2*y + y^4 + z^3",
    "x^2 + y^5",
    "z1*z3 + z1^5 + z2^5",
];

#[test]
fn inferred_type_drives_the_engine() {
    let budget = Budget::default();
    for text in CORPUS {
        let f = parse(text);
        let solution = infer_weight_systems(&f);
        assert_eq!(solution.kind, SolutionKind::Unique, "{text}");
        let ws = solution.representative.unwrap();
        let cert = is_isolated(&f, &budget).certificate;
        let report = lojasiewicz_exponent(&f, &ws, &cert).unwrap();
        let mu = report.mu_milnor_orlik.unwrap();
        assert_eq!(Some(mu.value), report.mu_groebner.map(|m| rat(m as i64, 1)), "{text}");
        let search = witness_search(&f, &ws, 40, 3).unwrap();
        assert_eq!(search.best.value, Extended::Finite(report.exponent.clone()), "{text}");
    }
}

#[test]
fn random_curves_never_exceed_the_exponent() {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for text in CORPUS {
        let f = parse(text);
        let ws = infer_weight_systems(&f).representative.unwrap();
        let l = lojasiewicz_exponent(&f, &ws, &is_isolated(&f, &budget).certificate)
            .unwrap()
            .exponent;
        for _ in 0..300 {
            let c = random_curve(&mut rng, f.variable_count(), 12);
            let q = path_quotient(&f, &c).unwrap();
            assert!(q.value <= Extended::Finite(l.clone()), "{text}: {c} gives {}", q.value);
        }
    }
}

#[test]
fn weight_action_scales_f_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for text in CORPUS {
        let f = parse(text);
        let ws = infer_weight_systems(&f).representative.unwrap();
        let a: Vec<Rational> = (0..f.variable_count())
            .map(|_| lojex::verify::random_rational(&mut rng, false))
            .collect();
        let orbit = MonomialCurve::weighted_orbit(a.clone(), ws.weights()).unwrap();
        let series = f.compose_with_curve(&orbit).unwrap();
        let fa = f.evaluate(&a);
        let expected: Vec<(u64, Rational)> = if fa == rat(0, 1) {
            vec![]
        } else {
            vec![(ws.degree(), fa)]
        };
        let got: Vec<(u64, Rational)> = series.terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(got, expected, "{text}");
    }
}

#[test]
fn weighted_gradient_norm_scales_with_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for text in CORPUS {
        let f = parse(text);
        let ws = infer_weight_systems(&f).representative.unwrap();
        let geo = RhoGeometry::new(ws.clone());
        let gradient: Vec<FloatPolynomial> = f.gradient().iter().map(FloatPolynomial::new).collect();
        for _ in 0..20 {
            let z: Vec<Complex64> = (0..f.variable_count())
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let t: f64 = rng.random_range(0.1..0.9);
            let tz = geo.act(t, &z);
            assert!((geo.rho(&tz) / (t * geo.rho(&z)) - 1.0).abs() < 1e-9);
            let lhs = geo.weighted_gradient_norm(&gradient, &tz);
            let rhs = t.powi(ws.degree() as i32) * geo.weighted_gradient_norm(&gradient, &z);
            assert!((lhs / rhs - 1.0).abs() < 1e-9, "{text}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn euclidean_chain_is_bounded_below() {
    let config = SamplingConfig {
        samples_per_radius: 400,
        ..SamplingConfig::default()
    };
    for text in ["x^3 + y^3 + z^3", "x^2 + y^5", "x^2*y + y^4 + z^3"] {
        let f = parse(text);
        let ws = infer_weight_systems(&f).representative.unwrap();
        let exponent = ws.max_dual_minus_one().to_f64().unwrap();
        let minima = sample_euclidean_lower(&f, exponent, &config).unwrap();
        assert!(minima.iter().all(|m| m.value > 1e-3), "{text}: {minima:?}");
        assert!(!exhibits_decay(&minima), "{text}: {minima:?}");
    }
}

#[test]
fn non_isolated_control_decays() {
    let f = parse("x*y + 0*z");
    let f = Polynomial::from_terms(
        3,
        f.terms().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.resize(3, 0);
            (lojex::poly::Monomial::new(e), c.clone())
        }),
    )
    .unwrap();
    let ws = WeightSystem::new(2, vec![1, 1, 1]).unwrap();
    assert!(matches!(
        is_isolated(&f, &Budget::default()).certificate,
        lojex::engine::IsolationCertificate::Refuted
    ));
    let axes = lojex::verify::critical_axes(&f);
    assert_eq!(axes, vec![2]);
    let config = SamplingConfig {
        samples_per_radius: 200,
        ..SamplingConfig::default()
    };
    let minima = sample_directed_lower(&f, &ws, &[0.0, 0.0, 1.0], &config).unwrap();
    assert!(exhibits_decay(&minima), "{minima:?}");
}

#[test]
fn weak_classification_of_the_six_variable_example() {
    let f = parse("z1*z6 + z1^12 + z2*z5 + z3^4 + z4^3 + z2^6");
    let ws = WeightSystem::new(12, vec![1, 2, 3, 4, 10, 11]).unwrap();
    let c = classify_coordinates(&f, &ws);
    assert_eq!(c.ell, 4);
    let report = lojasiewicz_exponent(&f, &ws, &is_isolated(&f, &Budget::default()).certificate).unwrap();
    assert_eq!(report.method, Method::TheoremMain4);
    assert_eq!(report.exponent, rat(3, 1));
    assert_eq!(report.sufficiency_degree, 4);
}
