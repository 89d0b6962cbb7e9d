use lojex::engine::lojasiewicz_exponent;
use lojex::groebner::{buchberger, is_isolated, milnor_number, normal_form, Budget, Dimension};
use lojex::poly::{default_variable_names, parse_polynomial, Monomial, MonomialCurve, Polynomial};
use lojex::weights::{is_weighted_homogeneous, WeightSystem};
use lojex::{rat, Extended, Rational};
use proptest::prelude::*;

const N: usize = 3;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

fn polynomial(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, N), rational()), 0..=max_terms)
        .prop_map(|terms| Polynomial::from_terms(N, terms.into_iter().map(|(e, c)| (Monomial::new(e), c))).unwrap())
}

fn curve() -> impl Strategy<Value = MonomialCurve> {
    (prop::collection::vec(rational(), N), prop::collection::vec(1u32..=4, N))
        .prop_filter_map("curve through the origin", |(a, m)| MonomialCurve::new(a, m).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn display_parse_round_trip(p in polynomial(4, 6)) {
        let names = default_variable_names(N);
        let text = p.to_string();
        prop_assert_eq!(parse_polynomial(&text, &names).unwrap(), p);
    }

    #[test]
    fn derivative_is_linear(p in polynomial(4, 5), q in polynomial(4, 5), c in rational(), i in 0..N) {
        let lhs = (&p.scale(&c) + &q).partial_derivative(i).unwrap();
        let rhs = &p.partial_derivative(i).unwrap().scale(&c) + &q.partial_derivative(i).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_partials_commute(p in polynomial(4, 6), i in 0..N, j in 0..N) {
        let ij = p.partial_derivative(i).unwrap().partial_derivative(j).unwrap();
        let ji = p.partial_derivative(j).unwrap().partial_derivative(i).unwrap();
        prop_assert_eq!(ij, ji);
    }

    #[test]
    fn leibniz_rule(p in polynomial(3, 4), q in polynomial(3, 4), i in 0..N) {
        let lhs = (&p * &q).partial_derivative(i).unwrap();
        let rhs = &(&p.partial_derivative(i).unwrap() * &q) + &(&p * &q.partial_derivative(i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_a_ring_homomorphism(p in polynomial(3, 4), q in polynomial(3, 4), c in curve()) {
        let sum = (&p + &q).compose_with_curve(&c).unwrap();
        prop_assert_eq!(sum, p.compose_with_curve(&c).unwrap().add(&q.compose_with_curve(&c).unwrap()));
        let prod = (&p * &q).compose_with_curve(&c).unwrap();
        prop_assert_eq!(prod, p.compose_with_curve(&c).unwrap().mul(&q.compose_with_curve(&c).unwrap()));
    }

    #[test]
    fn order_along_matches_composition(p in polynomial(4, 6), c in curve()) {
        prop_assert_eq!(p.order_along(&c).unwrap(), p.compose_with_curve(&c).unwrap().ord());
    }

    #[test]
    fn graded_parts_reassemble(p in polynomial(4, 6), w in prop::collection::vec(1u64..=4, N)) {
        let ws = WeightSystem::new(1, w).unwrap();
        let parts = p.graded_parts(&ws);
        let mut sum = Polynomial::zero(N);
        for (j, h) in &parts {
            prop_assert_eq!(h.weighted_degree(&ws), Extended::Finite(*j));
            let hw = WeightSystem::new(*j, ws.weights().to_vec());
            if let Ok(hw) = hw {
                prop_assert!(is_weighted_homogeneous(h, &hw));
            }
            sum = &sum + h;
        }
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in polynomial(3, 4), q in polynomial(3, 4), x in prop::collection::vec(rational(), N)) {
        prop_assert_eq!((&p * &q).evaluate(&x), p.evaluate(&x) * q.evaluate(&x));
        prop_assert_eq!((&p - &q).evaluate(&x), p.evaluate(&x) - q.evaluate(&x));
    }
}

fn ideal_generators() -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(polynomial(2, 3), 1..=3).prop_filter("nonzero generator", |g| g.iter().any(|p| !p.is_zero()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_is_idempotent_and_congruent(gens in ideal_generators(), p in polynomial(3, 5)) {
        let budget = Budget { max_spairs: 2_000, max_terms: 20_000 };
        let Ok(gb) = buchberger(&gens, &budget) else { return Ok(()); };
        let r = normal_form(&p, &gb);
        prop_assert_eq!(normal_form(&r, &gb), r.clone());
        prop_assert!(gb.contains(&(&p - &r)));
        for g in &gens {
            prop_assert!(gb.contains(g));
        }
        for lm in gb.leading_monomials() {
            for m in r.support() {
                prop_assert!(!lm.divides(m));
            }
        }
    }

    #[test]
    fn brieskorn_exponent_and_milnor(a in prop::collection::vec(2u32..=6, N), c in prop::collection::vec(1i64..=4, N)) {
        let mut f = Polynomial::zero(N);
        for i in 0..N {
            let mut e = vec![0; N];
            e[i] = a[i];
            f = &f + &Polynomial::monomial(rat(c[i], 1), Monomial::new(e));
        }
        let d: u64 = a.iter().map(|&x| x as u64).product();
        let ws = WeightSystem::new(d, a.iter().map(|&x| d / x as u64).collect()).unwrap();
        let mu: u64 = a.iter().map(|&x| x as u64 - 1).product();
        prop_assert_eq!(milnor_number(&f, &Budget::default()).unwrap(), Dimension::Finite(mu));
        let cert = is_isolated(&f, &Budget::default()).certificate;
        let l = lojasiewicz_exponent(&f, &ws, &cert).unwrap().exponent;
        prop_assert_eq!(l, rat(*a.iter().max().unwrap() as i64 - 1, 1));
    }

    #[test]
    fn exponent_is_invariant_under_permutation_and_scaling(
        pick in 0usize..4,
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        c in 1i64..=7,
        k in 1u64..=3,
    ) {
        let cases = [
            ("z1^3 + z2^3 + z3^3 + z1*z2*z3", "3:1,1,1"),
            ("z1^2*z2 + z2^4 + z3^3", "24:9,6,8"),
            ("z1*z3 + z1^5 + z2^5", "5:1,1,4"),
            ("z1^4 + z2^6 + z3^12", "12:3,2,1"),
        ];
        let names = default_variable_names(N);
        let f = parse_polynomial(cases[pick].0, &names).unwrap();
        let ws: WeightSystem = cases[pick].1.parse().unwrap();
        let cert = is_isolated(&f, &Budget::default()).certificate;
        let base = lojasiewicz_exponent(&f, &ws, &cert).unwrap();
        let g = f.permute_variables(&perm).scale(&rat(c, 1));
        let gws = ws.permuted(&perm).scaled(k);
        let cert = is_isolated(&g, &Budget::default()).certificate;
        prop_assert_eq!(lojasiewicz_exponent(&g, &gws, &cert).unwrap().exponent, base.exponent);
    }
}
