use std::collections::BTreeMap;

use adelekit::json::*;
use adelekit::parse::{parse_element, parse_place_spec, PlaceSpec};
use adelekit_core::completion::local_embed;
use adelekit_core::number_field::factor_rational_prime;
use adelekit_core::topology::{adelic_compact_nbhd, compact_nbhd_local, ScaledIntegerBall};
use adelekit_core::{
    Ball, BasicOpen, CompactCert, FieldElement, FiniteAdele, FinitePlace, MultIntZero, NumberField, QuadraticField,
    Rat,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use serde_json::Value;

/// Serialize to text and back, as the CLI's consumers would.
fn reparse(v: &Value) -> Value {
    serde_json::from_str(&v.to_string()).unwrap()
}

fn places() -> Vec<FinitePlace> {
    let mut out: Vec<FinitePlace> = [2, 3, 5, 7].iter().map(|&p| FinitePlace::rational(p).unwrap()).collect();
    for (d, p) in [(-1, 2), (-1, 3), (-1, 5), (5, 5), (5, 11), (-3, 7), (2, 2)] {
        let k = QuadraticField::new(d).unwrap();
        for (q, _) in factor_rational_prime(&k, p).unwrap() {
            out.push(FinitePlace::Quadratic(k, q));
        }
    }
    out
}

fn place() -> impl Strategy<Value = FinitePlace> {
    prop::sample::select(places())
}

fn element_in(field: NumberField) -> impl Strategy<Value = FieldElement> {
    (-500i64..500, -500i64..500, 1i64..200).prop_map(move |(a, b, d)| {
        let a = Rat::new(a.into(), d.into());
        match field {
            NumberField::Rational => FieldElement::rational(a),
            NumberField::Quadratic(_) => FieldElement::new(a, Rat::new(b.into(), d.into())),
        }
    })
}

fn field() -> impl Strategy<Value = NumberField> {
    prop::sample::select(vec![
        NumberField::Rational,
        NumberField::quadratic(-1).unwrap(),
        NumberField::quadratic(5).unwrap(),
    ])
}

fn adele() -> impl Strategy<Value = FiniteAdele> {
    field().prop_flat_map(|k| {
        let pool: Vec<FinitePlace> = places().into_iter().filter(|v| v.field() == k).collect();
        let corr = prop::collection::vec((prop::sample::select(pool), element_in(k)), 0..4);
        (element_in(k), corr).prop_map(move |(g, corr)| {
            FiniteAdele::new(k, g, corr.into_iter().collect()).unwrap()
        })
    })
}

fn open_for(k: NumberField) -> impl Strategy<Value = BasicOpen> {
    let pool: Vec<FinitePlace> = places().into_iter().filter(|v| v.field() == k).collect();
    let ball = (prop::sample::select(pool), element_in(k), -3i64..4);
    prop::collection::vec(ball, 0..5).prop_map(move |balls| {
        let mut opens: BTreeMap<FinitePlace, Vec<Ball>> = BTreeMap::new();
        for (v, c, g) in balls {
            opens.entry(v.clone()).or_default().push(Ball::new(v, c, MultIntZero::of_add(g)).unwrap());
        }
        BasicOpen::new(k, opens).unwrap()
    })
}

proptest! {
    #[test]
    fn mult_round_trips(n in any::<i64>(), big in any::<bool>(), zero in any::<bool>()) {
        let g = if zero {
            MultIntZero::Zero
        } else if big {
            MultIntZero::OfAdd(BigInt::from(n) * BigInt::from(u64::MAX))
        } else {
            MultIntZero::of_add(n)
        };
        prop_assert_eq!(mult_from_json(&reparse(&mult_to_json(&g))).unwrap(), g);
    }

    #[test]
    fn elements_round_trip(x in field().prop_flat_map(element_in)) {
        prop_assert_eq!(parse_element(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn places_round_trip(v in place()) {
        prop_assert_eq!(parse_place_spec(&v.to_string()).unwrap(), PlaceSpec::Finite(v));
    }

    #[test]
    fn local_elements_round_trip(v in place(), a in -300i64..300, b in -300i64..300, d in 1i64..100, extra in 1i64..8) {
        let x = match v.field() {
            NumberField::Rational => FieldElement::rational(Rat::new(a.into(), d.into())),
            NumberField::Quadratic(_) => FieldElement::new(Rat::new(a.into(), d.into()), Rat::new(b.into(), d.into())),
        };
        let prec = match v.valuation(&x).finite() {
            Some(val) => val + extra,
            None => extra,
        };
        let y = local_embed(&v, &x, prec).unwrap();
        prop_assert_eq!(local_from_json(&reparse(&local_to_json(&y))).unwrap(), y);
    }

    #[test]
    fn adeles_round_trip(x in adele()) {
        prop_assert_eq!(adele_from_json(&reparse(&adele_to_json(&x))).unwrap(), x);
    }

    #[test]
    fn opens_round_trip(u in field().prop_flat_map(open_for)) {
        prop_assert_eq!(open_from_json(&reparse(&open_to_json(&u))).unwrap(), u);
    }

    #[test]
    fn certificates_round_trip(x in adele(), g in -3i64..4, v in place()) {
        let k = x.field();
        let u = BasicOpen::integral(k);
        if let Ok(cert) = adelic_compact_nbhd(&x, &u) {
            prop_assert_eq!(cert_from_json(&reparse(&cert_to_json(&cert))).unwrap(), cert);
        }
        let local = compact_nbhd_local(&v, &FieldElement::one(), &MultIntZero::of_add(g)).unwrap();
        prop_assert_eq!(cert_from_json(&reparse(&cert_to_json(&local))).unwrap(), local);
    }

    #[test]
    fn factor_records_round_trip(d in prop::sample::select(vec![-1i64, -3, 2, 5, -5, 7]), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        let k = QuadraticField::new(d).unwrap();
        for (q, _) in factor_rational_prime(&k, p).unwrap() {
            let r = FactorRecord::from(&q);
            prop_assert_eq!(factor_from_json(&reparse(&factor_to_json(&r))).unwrap(), r);
        }
    }

    #[test]
    fn val_records_round_trip(a in any::<Option<Option<i32>>>(), m in any::<Option<i32>>(), num in -1000i64..1000, den in 1i64..1000) {
        let r = ValRecord {
            place: "p:3".into(),
            additive: a.map(|o| o.map(i64::from)),
            mult: m.map(|n| MultIntZero::of_add(n)),
            abs: Some(Rat::new(num.into(), den.into())),
        };
        prop_assert_eq!(val_from_json(&reparse(&val_to_json(&r))).unwrap(), r);
    }
}

#[test]
fn product_certificate_with_blocks_round_trips() {
    let v = FinitePlace::rational(3).unwrap();
    let block = ScaledIntegerBall { place: v.clone(), center: FieldElement::rational(Rat::new(1.into(), 3.into())), m: -1 };
    let cert = CompactCert::Product { field: NumberField::Rational, blocks: [(v, block)].into() };
    assert_eq!(cert_from_json(&reparse(&cert_to_json(&cert))).unwrap(), cert);
}

#[test]
fn certificate_t_must_match_blocks() {
    let v: Value = serde_json::from_str(
        r#"{"kind":"product","T":["p:5"],"blocks":{"p:3":{"center":"1/3","m":-1}}}"#,
    )
    .unwrap();
    assert!(cert_from_json(&v).is_err());
}

#[test]
fn malformed_values_are_rejected() {
    for text in [r#"{"zero":false}"#, r#"{"exp":"x"}"#, r#"{"zero":true,"exp":1}"#, r#"[]"#] {
        assert!(mult_from_json(&serde_json::from_str(text).unwrap()).is_err(), "{text}");
    }
    let digits_mismatch: Value =
        serde_json::from_str(r#"{"place":"p:3","val":0,"digits":[1],"prec":3}"#).unwrap();
    assert!(local_from_json(&digits_mismatch).is_err());
}
