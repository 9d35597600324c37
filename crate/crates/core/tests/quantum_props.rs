use bilinear_poisson::quantum::{exchange_rules_from_relations, ExchangeSystem, NcPoly};
use bilinear_poisson::ring::params::S;
use bilinear_poisson::ring::{Poly, Ring};
use proptest::prelude::*;
use std::sync::OnceLock;

fn system() -> &'static ExchangeSystem {
    static SYS: OnceLock<ExchangeSystem> = OnceLock::new();
    SYS.get_or_init(|| exchange_rules_from_relations(2).unwrap())
}

fn nc_poly() -> impl Strategy<Value = NcPoly> {
    let word = prop::collection::vec(0u8..8, 0..=4);
    let coef = (-2i32..=2, -3i64..=3).prop_map(|(e, c)| Poly::var_pow(S, e).scale(&c.into()));
    prop::collection::vec((word, coef), 1..4).prop_map(|terms| {
        let mut p = NcPoly::zero();
        for (w, c) in terms {
            p.add_term(w, &c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_at_q_one_is_commutative(p in nc_poly()) {
        let sys = system();
        let nf = sys.normal_form(&p, 4).unwrap();
        prop_assert_eq!(nf.at_q_one(), p.at_q_one().commutative());
    }

    #[test]
    fn normal_form_is_idempotent_and_ordered(p in nc_poly()) {
        let sys = system();
        let nf = sys.normal_form(&p, 4).unwrap();
        for (w, _) in nf.terms() {
            prop_assert!(w.windows(2).all(|x| x[0] <= x[1]));
        }
        prop_assert_eq!(sys.normal_form(&nf, 4).unwrap(), nf);
    }

    #[test]
    fn normal_form_preserves_letter_classes(p in nc_poly()) {
        let sys = system();
        let nf = sys.normal_form(&p, 4).unwrap();
        let classes = |w: &[u8]| (w.len(), w.iter().filter(|&&g| sys.gens.is_a(g)).count());
        let input: std::collections::BTreeSet<_> = p.terms().map(|(w, _)| classes(w)).collect();
        for (w, _) in nf.terms() {
            prop_assert!(input.contains(&classes(w)));
        }
    }

    #[test]
    fn normal_form_is_multiplicative_modulo_reordering(p in nc_poly(), q in nc_poly()) {
        let sys = system();
        prop_assume!(p.max_degree() + q.max_degree() <= 4);
        let lhs = sys.normal_form(&p.mul(&q), 4).unwrap();
        let rhs = sys.normal_form(&sys.normal_form(&p, 4).unwrap().mul(&sys.normal_form(&q, 4).unwrap()), 4).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
