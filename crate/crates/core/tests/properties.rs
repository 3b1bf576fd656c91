use num_bigint::BigInt;
use proptest::prelude::*;

use twobridge::classifier::{canonicalize, classify, family_cf, has_normalized_head, match_family, Verdict};
use twobridge::contfrac::{
    ch3_rewrite, channel_indices, collapse_run, eval_with_tail, even_expansion, exceptional_form, ContinuedFraction,
    EvenCF, ExceptionalForm, ExtRational, RunSign,
};
use twobridge::diagram::{check_invariants, emit, Diagram, Format};
use twobridge::pathfinder::{construct_case_path, is_allowable};

fn even_entry(bound: i64) -> impl Strategy<Value = i64> {
    (1..=bound / 2).prop_flat_map(|h| prop_oneof![Just(2 * h), Just(-2 * h)])
}

fn even_cf(bound: i64, max_len: usize) -> impl Strategy<Value = EvenCF> {
    (0..=max_len / 2)
        .prop_flat_map(move |h| prop::collection::vec(even_entry(bound), 2 * h + 1))
        .prop_map(|v| EvenCF::new(v).expect("odd length, even entries"))
}

fn nonzero_rational() -> impl Strategy<Value = ExtRational> {
    (-60i64..=60, 1i64..=30)
        .prop_filter("nonzero", |(p, _)| *p != 0)
        .prop_map(|(p, q)| ExtRational::new(p, q).unwrap())
}

fn odd_over_even(q_max: i64) -> impl Strategy<Value = ExtRational> {
    (2..=q_max / 2).prop_flat_map(|h| (0..h).prop_map(move |j| ExtRational::new(2 * j + 1, 2 * h).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ext_rational_text_round_trip(p in -10_000i64..10_000, q in -10_000i64..10_000) {
        prop_assume!(p != 0 || q != 0);
        let x = ExtRational::new(p, q).unwrap();
        let back: ExtRational = x.to_string().parse().unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert!(!x.denom().sign().eq(&num_bigint::Sign::Minus));
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExtRational>(&json).unwrap(), x);
    }

    #[test]
    fn even_expansion_is_exact_and_even(x in odd_over_even(4000)) {
        let cf = even_expansion(&x).unwrap();
        prop_assert_eq!(cf.value(), x);
        prop_assert!(cf.entries().iter().all(|b| b % 2 == 0 && *b != 0));
        prop_assert_eq!(cf.len() % 2, 1);
    }

    #[test]
    fn even_expansion_is_unique(cf in even_cf(10, 9)) {
        let x = cf.value();
        prop_assume!(x.numer() > &BigInt::from(0) && x.numer() < x.denom());
        prop_assert_eq!(even_expansion(&x).unwrap(), cf);
    }

    #[test]
    fn tail_evaluation_matches_literal(prefix in prop::collection::vec(-9i64..=9, 0..6), y in -9i64..=9) {
        prop_assume!(y != 0 && prefix.iter().all(|&a| a != 0));
        let mut all = prefix.clone();
        all.push(y);
        let literal = ContinuedFraction::new(all).unwrap().value();
        prop_assert_eq!(eval_with_tail(&prefix, &ExtRational::integer(y)), literal);
    }

    #[test]
    fn run_identities_hold(a in -12i64..=12, k in 1u32..12, y in nonzero_rational(), plus in any::<bool>()) {
        let sign = if plus { RunSign::Plus } else { RunSign::Minus };
        let s = sign.as_i64();
        let mut prefix = vec![a];
        prefix.extend(std::iter::repeat_n(2 * s, k as usize));
        let lhs = eval_with_tail(&prefix, &y);
        let produces_zero = a == 0 || a == s || y == ExtRational::integer(s);
        let run = collapse_run(a, k, &y, sign);
        prop_assert_eq!(run.is_err(), produces_zero);
        let Ok(run) = run else { return Ok(()) };
        prop_assert_eq!(run.value(), lhs);
        prop_assert_eq!(run.second, -s * (i64::from(k) + 1));
    }

    #[test]
    fn exceptional_rewrite_preserves_value(a_half in 1i64..8, pre in 1u32..8, post in 1u32..8, plus in any::<bool>()) {
        let sign = if plus { RunSign::Plus } else { RunSign::Minus };
        let a = 2 * a_half + if plus { 2 } else { 0 };
        prop_assume!((pre + post) % 2 == 1);
        let form = ExceptionalForm { a, pre_run: pre, post_run: post, sign };
        let cf = form.to_even_cf();
        prop_assert_eq!(exceptional_form(&cf), Some(form));
        let w = ch3_rewrite(&form);
        prop_assert_eq!(w.cf.value(), cf.value());
        prop_assert!(w.form.admits(w.m, w.n, w.l));
    }

    #[test]
    fn diagrams_satisfy_invariants(cf in even_cf(10, 9)) {
        let d = Diagram::build_with_labels(&cf);
        prop_assert!(check_invariants(&d).is_ok(), "{}", cf);
        prop_assert_eq!(d.value(), cf.value());
        let svg = emit(&d, Format::Svg, None).unwrap();
        prop_assert_eq!(&svg, &emit(&d, Format::Svg, None).unwrap());
    }

    #[test]
    fn canonicalize_is_idempotent(x in odd_over_even(2000)) {
        if let Ok(c) = canonicalize(&x) {
            prop_assert!(has_normalized_head(&c.cf));
            prop_assert_eq!(c.cf.value(), c.representative.clone());
            let again = canonicalize(&c.representative).unwrap();
            prop_assert_eq!(&again.representative, &c.representative);
            prop_assert!(!again.mirrored);
        }
    }

    #[test]
    fn case_construction_gives_allowable_paths(cf in even_cf(10, 11)) {
        prop_assume!(has_normalized_head(&cf));
        prop_assume!(channel_indices(&cf).len() >= 3 && exceptional_form(&cf).is_none());
        let c = construct_case_path(&cf).unwrap();
        prop_assert!(c.path.channel_count() >= 3);
        let d = Diagram::build(&cf);
        prop_assert_eq!(is_allowable(&d, c.path.arcs()).unwrap(), None);
    }

    #[test]
    fn verdicts_are_consistent(x in odd_over_even(600)) {
        let Ok(v) = classify(&x) else { return Ok(()) };
        match &v {
            Verdict::Candidate { cf, family, .. } => {
                prop_assert_eq!(family_cf(family).unwrap().value(), cf.value());
                prop_assert_eq!(match_family(cf).unwrap(), *family);
            }
            Verdict::NoCompleteExceptional { cf, witness, .. } => {
                prop_assert!(witness.channel_count() >= 3);
                prop_assert_eq!(is_allowable(&Diagram::build(cf), witness.arcs()).unwrap(), None);
            }
        }
        prop_assert_eq!(&canonicalize(&x).unwrap().representative, v.canonical_fraction());
    }
}
