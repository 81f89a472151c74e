//! Absolute values and discrete valuations on ℚ.
//!
//! The p-adic family is computed by repeated division of the reduced numerator
//! and denominator by `p`; nothing is fully factored. All results are exact,
//! including the Archimedean absolute value.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{int_valuation, rat_pow, Prime, Rat};
use crate::value_group::MultIntZero;
use crate::{Error, Result};

/// A place of ℚ: the real place or a p-adic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RationalPlace {
    Infinity,
    Finite(Prime),
}

impl RationalPlace {
    pub fn finite(p: u64) -> Result<Self> {
        Prime::new(p).map(RationalPlace::Finite)
    }
}

impl fmt::Display for RationalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPlace::Infinity => f.write_str("inf"),
            RationalPlace::Finite(p) => write!(f, "p:{}", p),
        }
    }
}

/// Value of an additive valuation: an integer, or `∞` for the zero element.
///
/// Ordered with every finite value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdditiveValue {
    Finite(i64),
    Infinite,
}

impl AdditiveValue {
    pub fn finite(self) -> Option<i64> {
        match self {
            AdditiveValue::Finite(n) => Some(n),
            AdditiveValue::Infinite => None,
        }
    }

    /// The multiplicative valuation `ofAdd(-a)`, with `∞ ↦ 0`.
    pub fn to_mult(self) -> MultIntZero {
        match self {
            AdditiveValue::Finite(n) => MultIntZero::of_add(-n),
            AdditiveValue::Infinite => MultIntZero::Zero,
        }
    }
}

impl Add for AdditiveValue {
    type Output = AdditiveValue;

    fn add(self, rhs: AdditiveValue) -> AdditiveValue {
        match (self, rhs) {
            (AdditiveValue::Finite(a), AdditiveValue::Finite(b)) => AdditiveValue::Finite(a + b),
            _ => AdditiveValue::Infinite,
        }
    }
}

impl fmt::Display for AdditiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdditiveValue::Finite(n) => write!(f, "{}", n),
            AdditiveValue::Infinite => f.write_str("inf"),
        }
    }
}

/// `a_p(x)` for a checked prime.
pub fn additive(p: Prime, x: &Rat) -> AdditiveValue {
    if x.is_zero() {
        return AdditiveValue::Infinite;
    }
    AdditiveValue::Finite(int_valuation(p, x.numer()) - int_valuation(p, x.denom()))
}

/// `a_p(x)`: the exponent of `p` in `x`, `∞` at zero.
pub fn padic_additive(p: u64, x: &Rat) -> Result<AdditiveValue> {
    Ok(additive(Prime::new(p)?, x))
}

/// `v_p(x) = ofAdd(-a_p(x))`, `v_p(0) = 0`.
pub fn padic_mult(p: u64, x: &Rat) -> Result<MultIntZero> {
    Ok(padic_additive(p, x)?.to_mult())
}

/// `|x|_a = c^{-a_p(x)}` with `|0|_a = 0`; `c = p` is the p-adic absolute value.
pub fn abs_from_valuation(p: u64, c: &Rat, x: &Rat) -> Result<Rat> {
    let p = Prime::new(p)?;
    if *c <= Rat::one() {
        return Err(Error::BadBase(format!("{}", c)));
    }
    Ok(match additive(p, x) {
        AdditiveValue::Infinite => Rat::zero(),
        AdditiveValue::Finite(a) => rat_pow(c, -a),
    })
}

/// The usual absolute value `|x|_∞`, kept exact.
pub fn archimedean_abs(x: &Rat) -> Rat {
    x.abs()
}

/// Which definition an axiom check runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValuationKind {
    AbsoluteValue,
    AdditiveValuation,
    MultValuation,
}

impl ValuationKind {
    pub fn name(self) -> &'static str {
        match self {
            ValuationKind::AbsoluteValue => "AbsoluteValue",
            ValuationKind::AdditiveValuation => "AdditiveValuation",
            ValuationKind::MultValuation => "MultValuation",
        }
    }

    /// Clause identifiers evaluated for this kind at the given place.
    pub fn clauses(self, place: RationalPlace) -> &'static [&'static str] {
        match (self, place) {
            (ValuationKind::AbsoluteValue, RationalPlace::Infinity) => {
                &["abs.zero", "abs.mul", "abs.triangle"]
            }
            (ValuationKind::AbsoluteValue, RationalPlace::Finite(_)) => {
                &["abs.zero", "abs.mul", "abs.triangle", "abs.ultrametric"]
            }
            (ValuationKind::AdditiveValuation, _) => &["add.infinity", "add.mul", "add.min"],
            (ValuationKind::MultValuation, _) => &["mult.zero", "mult.one", "mult.mul", "mult.max"],
        }
    }
}

/// A failed clause together with the sample that broke it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub clause: &'static str,
    pub x: Rat,
    pub y: Rat,
}

/// Outcome of [`axiom_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationReport {
    pub kind: ValuationKind,
    pub place: RationalPlace,
    pub clauses: &'static [&'static str],
    pub samples: usize,
    pub failures: Vec<AxiomFailure>,
}

impl ValuationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn abs_at(place: RationalPlace, x: &Rat) -> Rat {
    match place {
        RationalPlace::Infinity => archimedean_abs(x),
        RationalPlace::Finite(p) => match additive(p, x) {
            AdditiveValue::Infinite => Rat::zero(),
            AdditiveValue::Finite(a) => rat_pow(&Rat::from_integer(p.to_bigint()), -a),
        },
    }
}

/// Evaluates every clause of the chosen definition on every sample pair.
pub fn axiom_check(
    kind: ValuationKind,
    place: RationalPlace,
    samples: &[(Rat, Rat)],
) -> Result<ValuationReport> {
    let prime = match (kind, place) {
        (ValuationKind::AbsoluteValue, _) => None,
        (_, RationalPlace::Finite(p)) => Some(p),
        (_, RationalPlace::Infinity) => {
            return Err(Error::KindPlaceMismatch {
                kind: kind.name(),
                place: String::from("inf"),
            })
        }
    };
    let mut failures = Vec::new();
    let mut fail = |clause: &'static str, x: &Rat, y: &Rat| {
        failures.push(AxiomFailure {
            clause,
            x: x.clone(),
            y: y.clone(),
        })
    };
    let zero = Rat::zero();
    let one = Rat::one();

    if kind == ValuationKind::MultValuation {
        let p = prime.expect("finite place");
        if additive(p, &zero).to_mult() != MultIntZero::Zero {
            fail("mult.zero", &zero, &zero);
        }
        if additive(p, &one).to_mult() != MultIntZero::one() {
            fail("mult.one", &one, &one);
        }
    }

    for (x, y) in samples {
        let sum = x + y;
        let prod = x * y;
        match kind {
            ValuationKind::AbsoluteValue => {
                let (ax, ay) = (abs_at(place, x), abs_at(place, y));
                let (asum, aprod) = (abs_at(place, &sum), abs_at(place, &prod));
                let zero_ok = [(x, &ax), (y, &ay), (&sum, &asum)]
                    .iter()
                    .all(|(v, a)| *a >= &zero && (a.is_zero() == v.is_zero()));
                if !zero_ok {
                    fail("abs.zero", x, y);
                }
                if aprod != &ax * &ay {
                    fail("abs.mul", x, y);
                }
                if asum > &ax + &ay {
                    fail("abs.triangle", x, y);
                }
                if matches!(place, RationalPlace::Finite(_)) && asum > ax.clone().max(ay.clone()) {
                    fail("abs.ultrametric", x, y);
                }
            }
            ValuationKind::AdditiveValuation => {
                let p = prime.expect("finite place");
                let (ax, ay) = (additive(p, x), additive(p, y));
                let infinity_ok = [(x, ax), (y, ay)]
                    .iter()
                    .all(|(v, a)| (*a == AdditiveValue::Infinite) == v.is_zero());
                if !infinity_ok {
                    fail("add.infinity", x, y);
                }
                if additive(p, &prod) != ax + ay {
                    fail("add.mul", x, y);
                }
                if additive(p, &sum) < ax.min(ay) {
                    fail("add.min", x, y);
                }
            }
            ValuationKind::MultValuation => {
                let p = prime.expect("finite place");
                let (vx, vy) = (additive(p, x).to_mult(), additive(p, y).to_mult());
                if additive(p, &prod).to_mult() != &vx * &vy {
                    fail("mult.mul", x, y);
                }
                let bound = vx.clone().max(vy);
                if !additive(p, &sum).to_mult().le(&bound) {
                    fail("mult.max", x, y);
                }
            }
        }
    }
    Ok(ValuationReport {
        kind,
        place,
        clauses: kind.clauses(place),
        samples: samples.len(),
        failures,
    })
}

/// Product of `|x|_∞` and `|x|_p` over the primes dividing numerator or
/// denominator; equals 1 for nonzero `x`.
pub fn product_formula(x: &Rat) -> Rat {
    let mut acc = archimedean_abs(x);
    let mut support = crate::arith::prime_divisors(x.numer());
    support.extend(crate::arith::prime_divisors(x.denom()));
    support.sort_unstable();
    support.dedup();
    for p in support {
        acc *= abs_at(RationalPlace::Finite(p), x);
    }
    acc
}

/// `p^e` as a rational for any integer `e`.
pub fn prime_power(p: Prime, e: i64) -> Rat {
    rat_pow(&Rat::from_integer(BigInt::from(p.get())), e)
}
