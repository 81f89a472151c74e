use adelekit_core::adele::{adele_arith, adele_component, sadele_split, sadele_unsplit, support};
use adelekit_core::number_field::factor_rational_prime;
use adelekit_core::topology::{adelic_compact_nbhd, cert_contains, verify_cert_subset, Point};
use adelekit_core::valuations::{padic_additive, product_formula};
use adelekit_core::{
    AdditiveValue, AdeleOp, BasicOpen, FieldElement, FiniteAdele, FinitePlace, NumberField, PlaceSet,
    QuadraticField, Rat,
};

fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

#[test]
fn rational_valuations_and_product_formula() {
    assert_eq!(padic_additive(3, &q(1, 9)).unwrap(), AdditiveValue::Finite(-2));
    assert_eq!(padic_additive(5, &q(0, 1)).unwrap(), AdditiveValue::Infinite);
    assert!(padic_additive(4, &q(1, 1)).is_err());
    assert_eq!(product_formula(&q(-360, 77)), q(1, 1));
}

#[test]
fn gaussian_adele_round_trip() {
    let k = QuadraticField::new(-1).unwrap();
    let field = NumberField::Quadratic(k);
    let places: Vec<FinitePlace> =
        factor_rational_prime(&k, 5).unwrap().into_iter().map(|(p, _)| FinitePlace::Quadratic(k, p)).collect();
    assert_eq!(places.len(), 2);

    let x = FiniteAdele::new(
        field,
        FieldElement::new(q(1, 5), q(0, 1)),
        [(places[0].clone(), FieldElement::new(q(0, 1), q(1, 5)))].into(),
    )
    .unwrap();
    let s: PlaceSet = support(&x);
    assert!(s.iter().all(|v| places.contains(v)));

    let sq = adele_arith(AdeleOp::Mul, &x, &x).unwrap();
    for v in &places {
        let c = x.component_exact(v);
        assert_eq!(sq.component_exact(v), field.mul(&c, &c));
        let prec = adele_component(&sq, v, 6).unwrap().precision();
        assert_eq!(prec, Some(6));
    }

    let parts = sadele_split(&s, &x).unwrap();
    assert_eq!(sadele_unsplit(&s, &parts).unwrap(), x);
}

#[test]
fn compact_neighbourhood_of_integral_adele() {
    let x = FiniteAdele::diagonal(NumberField::Rational, FieldElement::rational(q(1, 6)));
    let u = BasicOpen::integral(NumberField::Rational);
    assert!(adelic_compact_nbhd(&x, &u).is_err());

    let y = FiniteAdele::diagonal(NumberField::Rational, FieldElement::rational(q(7, 1)));
    let cert = adelic_compact_nbhd(&y, &u).unwrap();
    assert!(cert_contains(&cert, Point::Adele(&y)).unwrap());
    assert!(verify_cert_subset(&cert, &u).unwrap());
}
