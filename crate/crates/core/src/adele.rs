//! Adèles over ℚ and quadratic fields.
//!
//! A general finite adèle has infinitely many independent coordinates, so the
//! model here is the subring of adèles of the form `diag(g) + c`, where `g ∈ K`
//! and `c` is supported on finitely many places with each `c_v ∈ K`. The
//! subring contains the diagonal and every finitely supported adèle with
//! components in `K`, is closed under the ring operations, and makes support
//! and S-adèle membership exactly decidable.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::arith::prime_divisors;
use crate::completion::{local_embed, LocalElement};
use crate::number_field::{
    factor_rational_prime, infinite_embed, Complex64, FieldElement, FinitePlace, NumberField,
};
use crate::valuations::AdditiveValue;
use crate::{Error, Result};

/// A finite set of finite places of one field.
pub type PlaceSet = BTreeSet<FinitePlace>;

/// `diag(global) + corrections`, with the correction at `v` added to the
/// component at `v` only. Zero corrections are never stored, so structural
/// equality is equality of adèles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAdele {
    field: NumberField,
    global: FieldElement,
    corrections: BTreeMap<FinitePlace, FieldElement>,
}

impl FiniteAdele {
    pub fn new(
        field: NumberField,
        global: FieldElement,
        corrections: BTreeMap<FinitePlace, FieldElement>,
    ) -> Result<Self> {
        if !field.contains(&global) {
            return Err(Error::FieldMismatch);
        }
        for (v, c) in &corrections {
            if v.field() != field || !field.contains(c) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(Self::canonical(field, global, corrections))
    }

    fn canonical(
        field: NumberField,
        global: FieldElement,
        mut corrections: BTreeMap<FinitePlace, FieldElement>,
    ) -> Self {
        corrections.retain(|_, c| !c.is_zero());
        FiniteAdele {
            field,
            global,
            corrections,
        }
    }

    /// The image of `x` under `K → 𝔸_{K,f}`.
    pub fn diagonal(field: NumberField, x: FieldElement) -> Self {
        FiniteAdele {
            field,
            global: x,
            corrections: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> NumberField {
        self.field
    }

    pub fn global(&self) -> &FieldElement {
        &self.global
    }

    pub fn corrections(&self) -> &BTreeMap<FinitePlace, FieldElement> {
        &self.corrections
    }

    /// The component at `v` as an exact element of `K ⊂ K_v`.
    pub fn component_exact(&self, v: &FinitePlace) -> FieldElement {
        match self.corrections.get(v) {
            Some(c) => self.field.add(&self.global, c),
            None => self.global.clone(),
        }
    }

    fn check_place(&self, v: &FinitePlace) -> Result<()> {
        if v.field() == self.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

/// Values at the infinite places, in the order of
/// [`NumberField::infinite_places`].
#[derive(Debug, Clone, PartialEq)]
pub struct InfiniteAdele(pub Vec<Complex64>);

#[derive(Debug, Clone, PartialEq)]
pub struct Adele {
    pub infinite: InfiniteAdele,
    pub finite: FiniteAdele,
}

pub fn diagonal_embed(field: NumberField, x: &FieldElement) -> Result<Adele> {
    if !field.contains(x) {
        return Err(Error::FieldMismatch);
    }
    let infinite = field
        .infinite_places()
        .into_iter()
        .map(|s| infinite_embed(&field, s, x))
        .collect();
    Ok(Adele {
        infinite: InfiniteAdele(infinite),
        finite: FiniteAdele::diagonal(field, x.clone()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdeleOp {
    Add,
    Mul,
    Neg,
}

/// Componentwise ring operations. `y` is ignored for `Neg`.
pub fn adele_arith(op: AdeleOp, x: &FiniteAdele, y: &FiniteAdele) -> Result<FiniteAdele> {
    if x.field != y.field {
        return Err(Error::FieldMismatch);
    }
    let k = x.field;
    let keys: BTreeSet<&FinitePlace> = x.corrections.keys().chain(y.corrections.keys()).collect();
    let zero = FieldElement::zero();
    let (global, corrections) = match op {
        AdeleOp::Neg => (
            k.neg(&x.global),
            x.corrections.iter().map(|(v, c)| (v.clone(), k.neg(c))).collect(),
        ),
        AdeleOp::Add => (
            k.add(&x.global, &y.global),
            keys.into_iter()
                .map(|v| {
                    let cx = x.corrections.get(v).unwrap_or(&zero);
                    let cy = y.corrections.get(v).unwrap_or(&zero);
                    (v.clone(), k.add(cx, cy))
                })
                .collect(),
        ),
        AdeleOp::Mul => (
            k.mul(&x.global, &y.global),
            keys.into_iter()
                .map(|v| {
                    let cx = x.corrections.get(v).unwrap_or(&zero);
                    let cy = y.corrections.get(v).unwrap_or(&zero);
                    let c = k.add(
                        &k.add(&k.mul(&x.global, cy), &k.mul(&y.global, cx)),
                        &k.mul(cx, cy),
                    );
                    (v.clone(), c)
                })
                .collect(),
        ),
    };
    Ok(FiniteAdele::canonical(k, global, corrections))
}

/// The component `x_v ∈ K_v` to absolute precision `prec`.
pub fn adele_component(x: &FiniteAdele, v: &FinitePlace, prec: i64) -> Result<LocalElement> {
    x.check_place(v)?;
    local_embed(v, &x.component_exact(v), prec)
}

/// Every place above a prime dividing `m`.
fn places_above(field: NumberField, m: &num_bigint::BigInt) -> Vec<FinitePlace> {
    let mut out = Vec::new();
    for p in prime_divisors(m) {
        match field {
            NumberField::Rational => out.push(FinitePlace::Rational(p)),
            NumberField::Quadratic(k) => {
                let factors = factor_rational_prime(&k, p.get()).expect("p is prime");
                out.extend(factors.into_iter().map(|(q, _)| FinitePlace::Quadratic(k, q)));
            }
        }
    }
    out
}

/// The exact set of places where `x_v ∉ 𝒪_v`.
pub fn support(x: &FiniteAdele) -> PlaceSet {
    let mut candidates: PlaceSet = places_above(x.field, &x.global.denominator()).into_iter().collect();
    candidates.extend(x.corrections.keys().cloned());
    candidates
        .into_iter()
        .filter(|v| v.valuation(&x.component_exact(v)) < AdditiveValue::Finite(0))
        .collect()
}

pub fn is_finite_s_adele(s: &PlaceSet, x: &FiniteAdele) -> bool {
    support(x).is_subset(s)
}

/// An S-adèle cut into its components on `S` and an adèle carrying no
/// correction at any place of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SAdeleParts {
    pub on_s: BTreeMap<FinitePlace, FieldElement>,
    pub off_s: FiniteAdele,
}

pub fn sadele_split(s: &PlaceSet, x: &FiniteAdele) -> Result<SAdeleParts> {
    if s.iter().any(|v| v.field() != x.field) {
        return Err(Error::FieldMismatch);
    }
    if !is_finite_s_adele(s, x) {
        return Err(Error::NotSAdele);
    }
    let on_s = s.iter().map(|v| (v.clone(), x.component_exact(v))).collect();
    let off = x
        .corrections
        .iter()
        .filter(|(v, _)| !s.contains(*v))
        .map(|(v, c)| (v.clone(), c.clone()))
        .collect();
    Ok(SAdeleParts {
        on_s,
        off_s: FiniteAdele::canonical(x.field, x.global.clone(), off),
    })
}

pub fn sadele_unsplit(s: &PlaceSet, parts: &SAdeleParts) -> Result<FiniteAdele> {
    let k = parts.off_s.field;
    let keys: PlaceSet = parts.on_s.keys().cloned().collect();
    if &keys != s || parts.off_s.corrections.keys().any(|v| s.contains(v)) {
        return Err(Error::PlaceMismatch);
    }
    let mut corrections = parts.off_s.corrections.clone();
    for (v, comp) in &parts.on_s {
        corrections.insert(v.clone(), k.sub(comp, &parts.off_s.global));
    }
    FiniteAdele::new(k, parts.off_s.global.clone(), corrections)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use alloc::vec;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::rational(rat(n, d))
    }

    fn p(n: u64) -> FinitePlace {
        FinitePlace::rational(n).unwrap()
    }

    fn diag(x: FieldElement) -> FiniteAdele {
        FiniteAdele::diagonal(NumberField::Rational, x)
    }

    fn adele(global: FieldElement, corr: &[(FinitePlace, FieldElement)]) -> FiniteAdele {
        FiniteAdele::new(NumberField::Rational, global, corr.iter().cloned().collect()).unwrap()
    }

    fn set(places: &[u64]) -> PlaceSet {
        places.iter().map(|&n| p(n)).collect()
    }

    #[test]
    fn diagonal_examples() {
        let a = diagonal_embed(NumberField::Rational, &q(1, 6)).unwrap();
        assert_eq!(a.finite.global(), &q(1, 6));
        assert!(a.finite.corrections().is_empty());
        assert!((a.infinite.0[0].re - 1.0 / 6.0).abs() < 1e-12);
        let z = diagonal_embed(NumberField::Rational, &q(0, 1)).unwrap();
        assert_eq!(z.infinite.0, [Complex64::new(0.0, 0.0)]);
        let qi = NumberField::quadratic(-1).unwrap();
        let i = diagonal_embed(qi, &FieldElement::from_ints(0, 1)).unwrap();
        assert_eq!(i.infinite.0, [Complex64::new(0.0, 1.0)]);
        assert_eq!(
            diagonal_embed(NumberField::Rational, &FieldElement::from_ints(0, 1)),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn arith_examples() {
        let half = diag(q(1, 2));
        assert_eq!(adele_arith(AdeleOp::Add, &half, &half).unwrap(), diag(q(1, 1)));
        assert_eq!(
            adele_arith(AdeleOp::Mul, &diag(q(2, 1)), &diag(q(3, 1))).unwrap(),
            diag(q(6, 1))
        );
        let x = adele(q(0, 1), &[(p(3), q(1, 3))]);
        assert_eq!(
            adele_arith(AdeleOp::Add, &x, &diag(q(1, 1))).unwrap(),
            adele(q(1, 1), &[(p(3), q(1, 3))])
        );
        let qi = FiniteAdele::diagonal(NumberField::quadratic(-1).unwrap(), FieldElement::one());
        assert_eq!(adele_arith(AdeleOp::Add, &x, &qi), Err(Error::FieldMismatch));
        // cancelling corrections disappear
        let y = adele(q(0, 1), &[(p(3), q(-1, 3))]);
        assert_eq!(adele_arith(AdeleOp::Add, &x, &y).unwrap(), diag(q(0, 1)));
    }

    #[test]
    fn component_examples() {
        let c = adele_component(&diag(q(1, 6)), &p(3), 2).unwrap();
        assert_eq!(c.val(), Some(-1));
        let c = adele_component(&diag(q(7, 1)), &p(5), 1).unwrap();
        assert_eq!(c.digits()[0].coords(), [2]);
        let c = adele_component(&diag(q(0, 1)), &p(5), 3).unwrap();
        assert!(matches!(c, LocalElement::ExactZero { .. }));
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&diag(q(1, 6))), set(&[2, 3]));
        assert!(support(&diag(q(-360, 1))).is_empty());
        let x = adele(q(1, 3), &[(p(3), q(2, 3))]);
        assert!(support(&x).is_empty());
        let y = adele(q(1, 1), &[(p(7), q(1, 49))]);
        assert_eq!(support(&y), set(&[7]));

        let k = NumberField::quadratic(-1).unwrap();
        let half = FiniteAdele::diagonal(k, FieldElement::rational(rat(1, 2)));
        assert_eq!(support(&half).len(), 1);
        let fifth = FiniteAdele::diagonal(k, FieldElement::rational(rat(1, 5)));
        assert_eq!(support(&fifth).len(), 2);
    }

    #[test]
    fn s_adele_examples() {
        assert!(is_finite_s_adele(&set(&[2, 3]), &diag(q(1, 6))));
        assert!(!is_finite_s_adele(&set(&[2]), &diag(q(1, 6))));
        assert!(is_finite_s_adele(&set(&[]), &diag(q(5, 1))));
    }

    #[test]
    fn split_examples() {
        let s = set(&[3]);
        let x = diag(q(1, 3));
        let parts = sadele_split(&s, &x).unwrap();
        assert_eq!(parts.on_s[&p(3)], q(1, 3));
        assert_eq!(sadele_unsplit(&s, &parts).unwrap(), x);

        let parts = sadele_split(&set(&[]), &diag(q(2, 1))).unwrap();
        assert!(parts.on_s.is_empty());
        assert_eq!(parts.off_s, diag(q(2, 1)));

        let s = set(&[2, 3]);
        let x = adele(q(1, 2), &[(p(3), q(1, 3))]);
        let parts = sadele_split(&s, &x).unwrap();
        assert_eq!(parts.on_s.len(), 2);
        assert_eq!(parts.on_s[&p(3)], q(5, 6));
        assert_eq!(sadele_unsplit(&s, &parts).unwrap(), x);

        assert_eq!(sadele_split(&set(&[2]), &diag(q(1, 6))), Err(Error::NotSAdele));
    }

    fn rational_adele() -> impl Strategy<Value = FiniteAdele> {
        let corr = prop::collection::vec(
            (prop::sample::select(vec![2u64, 3, 5, 7]), -30i64..30, 1i64..30),
            0..3,
        );
        (-50i64..50, 1i64..40, corr).prop_map(|(n, d, corr)| {
            let corr = corr.into_iter().map(|(v, a, b)| (p(v), q(a, b))).collect();
            FiniteAdele::new(NumberField::Rational, q(n, d), corr).unwrap()
        })
    }

    proptest! {
        #[test]
        fn support_bounds(x in rational_adele(), y in rational_adele()) {
            let bound: PlaceSet = support(&x).union(&support(&y)).cloned().collect();
            for op in [AdeleOp::Add, AdeleOp::Mul] {
                let z = adele_arith(op, &x, &y).unwrap();
                prop_assert!(support(&z).is_subset(&bound));
            }
        }

        #[test]
        fn support_is_minimal(x in rational_adele()) {
            let s = support(&x);
            for v in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
                let v = p(v);
                let neg = v.valuation(&x.component_exact(&v)) < AdditiveValue::Finite(0);
                prop_assert_eq!(neg, s.contains(&v));
            }
            prop_assert!(is_finite_s_adele(&s, &x));
        }

        #[test]
        fn monotone(x in rational_adele(), extra in prop::sample::subsequence(vec![2u64, 3, 5, 7, 11], 0..5)) {
            let s = support(&x);
            let mut bigger = s.clone();
            bigger.extend(extra.into_iter().map(p));
            prop_assert!(is_finite_s_adele(&bigger, &x));
        }

        #[test]
        fn split_roundtrip(x in rational_adele(), extra in prop::sample::subsequence(vec![2u64, 3, 5, 11], 0..4)) {
            let mut s = support(&x);
            s.extend(extra.into_iter().map(p));
            let parts = sadele_split(&s, &x).unwrap();
            prop_assert_eq!(&sadele_unsplit(&s, &parts).unwrap(), &x);
            prop_assert_eq!(sadele_split(&s, &sadele_unsplit(&s, &parts).unwrap()).unwrap(), parts);
        }

        #[test]
        fn diagonal_is_ring_hom(a in -40i64..40, b in 1i64..40, c in -40i64..40, d in 1i64..40) {
            let (x, y) = (q(a, b), q(c, d));
            let k = NumberField::Rational;
            prop_assert_eq!(
                adele_arith(AdeleOp::Add, &diag(x.clone()), &diag(y.clone())).unwrap(),
                diag(k.add(&x, &y))
            );
            prop_assert_eq!(
                adele_arith(AdeleOp::Mul, &diag(x.clone()), &diag(y.clone())).unwrap(),
                diag(k.mul(&x, &y))
            );
        }

        #[test]
        fn components_are_componentwise(x in rational_adele(), y in rational_adele(), v in prop::sample::select(vec![2u64, 3, 5, 7, 13])) {
            let v = p(v);
            let k = NumberField::Rational;
            let sum = adele_arith(AdeleOp::Add, &x, &y).unwrap();
            let prod = adele_arith(AdeleOp::Mul, &x, &y).unwrap();
            let (cx, cy) = (x.component_exact(&v), y.component_exact(&v));
            prop_assert_eq!(sum.component_exact(&v), k.add(&cx, &cy));
            prop_assert_eq!(prod.component_exact(&v), k.mul(&cx, &cy));
        }
    }
}
