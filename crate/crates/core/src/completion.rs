//! Completions `K_v` at finite places as precision-tracked π-adic expansions.
//!
//! An [`LocalElement::Expansion`] with valuation `val`, digits `d_0, d_1, ...`
//! and absolute precision `N` stands for
//!
//! ```text
//! Σ_{0 <= i < N - val} d_i π^{val + i}  +  O(π^N)
//! ```
//!
//! where `π` is the canonical uniformizer of the place and every `d_i` is a
//! canonical residue representative. Digits are produced by reducing modulo
//! `𝔭^k` through the HNF of `𝔭^k` and then peeling one digit at a time, so the
//! digits at precision `N` are always a prefix of the digits at any `N' > N`.
//!
//! Because every global input is an exact field element, arithmetic here works
//! on exact approximants and re-expands the result at the propagated precision.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::number_field::{FieldElement, FinitePlace};
use crate::valuations::AdditiveValue;
use crate::value_group::MultIntZero;
use crate::{Error, Result};

pub use crate::number_field::infinite_embed;

/// Precision at which [`uniformizer`] embeds `π`.
pub const UNIFORMIZER_PRECISION: i64 = 64;

/// Upper bound on explicit enumerations of `𝒪_v/𝔪_v^n`.
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

/// An element of the residue field `𝒪_v/𝔪_v`: `f` coordinates in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueElement {
    coords: Vec<u64>,
}

impl ResidueElement {
    pub fn new(coords: Vec<u64>) -> Self {
        ResidueElement { coords }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The canonical lift `a` or `a + b·ω` in `𝒪_K`.
    pub fn lift(&self) -> FieldElement {
        match self.coords.as_slice() {
            [a] => FieldElement::from_int(*a),
            [a, b] => FieldElement::from_ints(*a, *b),
            _ => unreachable!("residue degree is 1 or 2"),
        }
    }

    fn zero(f: u8) -> Self {
        ResidueElement {
            coords: vec![0; usize::from(f)],
        }
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coords.as_slice() {
            [a] => write!(f, "{}", a),
            [a, b] => write!(f, "({},{})", a, b),
            _ => unreachable!("residue degree is 1 or 2"),
        }
    }
}

/// Residue class of an integral element.
pub fn residue_of(place: &FinitePlace, x: &FieldElement) -> Result<ResidueElement> {
    let r = place.reduce(x, 1)?;
    let (a, b) = r.int_coords();
    let a = a.to_u64().expect("residue below p");
    Ok(match place.f() {
        1 => ResidueElement::new(vec![a]),
        _ => ResidueElement::new(vec![a, b.to_u64().expect("residue below p")]),
    })
}

/// An element of `K_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalElement {
    ExactZero {
        place: FinitePlace,
    },
    /// Known modulo `𝔪_v^prec`. `digits.len() == prec - val`. When every digit
    /// is zero the element is zero to its precision and `val` is only a lower
    /// bound; otherwise `digits[0]` is nonzero.
    Expansion {
        place: FinitePlace,
        val: i64,
        digits: Vec<ResidueElement>,
        prec: i64,
    },
}

impl LocalElement {
    pub fn place(&self) -> &FinitePlace {
        match self {
            LocalElement::ExactZero { place } | LocalElement::Expansion { place, .. } => place,
        }
    }

    /// Absolute precision; `None` for an exact zero.
    pub fn precision(&self) -> Option<i64> {
        match self {
            LocalElement::ExactZero { .. } => None,
            LocalElement::Expansion { prec, .. } => Some(*prec),
        }
    }

    pub fn digits(&self) -> &[ResidueElement] {
        match self {
            LocalElement::ExactZero { .. } => &[],
            LocalElement::Expansion { digits, .. } => digits,
        }
    }

    /// Valuation exponent; `None` for an exact zero.
    pub fn val(&self) -> Option<i64> {
        match self {
            LocalElement::ExactZero { .. } => None,
            LocalElement::Expansion { val, .. } => Some(*val),
        }
    }

    /// Known to be zero modulo its precision (but not exactly zero).
    pub fn is_zero_to_precision(&self) -> bool {
        matches!(self, LocalElement::Expansion { digits, .. } if digits.iter().all(ResidueElement::is_zero))
    }

    /// The exact element `Σ d_i π^{val+i}` of `K` that the known digits spell out.
    pub fn approximant(&self) -> FieldElement {
        match self {
            LocalElement::ExactZero { .. } => FieldElement::zero(),
            LocalElement::Expansion {
                place, val, digits, ..
            } => {
                let k = place.field();
                let pi = place.uniformizer();
                // Horner from the top digit down
                let mut acc = FieldElement::zero();
                for d in digits.iter().rev() {
                    acc = k.add(&k.mul(&acc, &pi), &d.lift());
                }
                k.mul(&acc, &k.pow(&pi, *val))
            }
        }
    }
}

impl fmt::Display for LocalElement {
    /// `val=0 N=3 digits=[2,1,1] (base 3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalElement::ExactZero { .. } => f.write_str("exact zero"),
            LocalElement::Expansion {
                place,
                val,
                digits,
                prec,
            } => {
                write!(f, "val={} N={} digits=[", val, prec)?;
                for (i, d) in digits.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", d)?;
                }
                write!(f, "] (base {})", place.uniformizer())
            }
        }
    }
}

/// First `n` digits of `y` (with `a_v(y) >= 0`) in base `pi`.
fn peel_digits(
    place: &FinitePlace,
    y: &FieldElement,
    n: usize,
    pi: &FieldElement,
) -> Result<Vec<ResidueElement>> {
    let k = place.field();
    let pi_inv = k.inv(pi).expect("uniformizer is nonzero");
    let mut rest = place.reduce(y, n as u32)?;
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let d = residue_of(place, &rest)?;
        rest = k.mul(&k.sub(&rest, &d.lift()), &pi_inv);
        digits.push(d);
    }
    Ok(digits)
}

fn check_field(place: &FinitePlace, x: &FieldElement) -> Result<()> {
    if place.field().contains(x) {
        Ok(())
    } else {
        Err(Error::FieldMismatch)
    }
}

/// The image of `x ∈ K` in `K_v`, known modulo `𝔪_v^prec`.
pub fn local_embed(place: &FinitePlace, x: &FieldElement, prec: i64) -> Result<LocalElement> {
    check_field(place, x)?;
    let val = match place.valuation(x) {
        AdditiveValue::Infinite => {
            return Ok(LocalElement::ExactZero {
                place: place.clone(),
            })
        }
        AdditiveValue::Finite(v) => v,
    };
    if prec <= val {
        return Err(Error::PrecisionTooLow { val, prec });
    }
    let k = place.field();
    let pi = place.uniformizer();
    let unit = k.mul(x, &k.pow(&pi, -val));
    let digits = peel_digits(place, &unit, (prec - val) as usize, &pi)?;
    Ok(LocalElement::Expansion {
        place: place.clone(),
        val,
        digits,
        prec,
    })
}

/// Expands an exact approximant at `prec`; `lower` bounds its valuation from
/// below and is used when the value vanishes to that precision.
fn from_approximant(
    place: &FinitePlace,
    value: &FieldElement,
    lower: i64,
    prec: i64,
) -> Result<LocalElement> {
    match place.valuation(value) {
        AdditiveValue::Finite(v) if v < prec => local_embed(place, value, prec),
        _ => {
            let val = lower.min(prec - 1);
            Ok(LocalElement::Expansion {
                place: place.clone(),
                val,
                digits: vec![ResidueElement::zero(place.f()); (prec - val) as usize],
                prec,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalOp {
    Add,
    Mul,
    Neg,
    Inv,
}

/// Arithmetic in `K_v` with conservative precision propagation:
/// `add → min(N_x, N_y)`, `mul → min(N_x + val_y, N_y + val_x)`, `neg` exact,
/// `inv → N_x - 2·val_x`.
pub fn local_arith(op: LocalOp, x: &LocalElement, y: Option<&LocalElement>) -> Result<LocalElement> {
    let place = x.place();
    let k = place.field();
    let other = || -> Result<&LocalElement> {
        let y = y.expect("binary operation needs two operands");
        if y.place() != place {
            return Err(Error::PlaceMismatch);
        }
        Ok(y)
    };
    match op {
        LocalOp::Neg => Ok(match x {
            LocalElement::ExactZero { .. } => x.clone(),
            LocalElement::Expansion { val, prec, .. } => {
                from_approximant(place, &k.neg(&x.approximant()), *val, *prec)?
            }
        }),
        LocalOp::Inv => match x {
            LocalElement::ExactZero { .. } => Err(Error::CannotInvert { exact: true }),
            _ if x.is_zero_to_precision() => Err(Error::CannotInvert { exact: false }),
            LocalElement::Expansion { val, prec, .. } => {
                let inv = k.inv(&x.approximant()).expect("nonzero approximant");
                from_approximant(place, &inv, -val, prec - 2 * val)
            }
        },
        LocalOp::Add => {
            let y = other()?;
            match (x, y) {
                (LocalElement::ExactZero { .. }, _) => Ok(y.clone()),
                (_, LocalElement::ExactZero { .. }) => Ok(x.clone()),
                (
                    LocalElement::Expansion { val: vx, prec: nx, .. },
                    LocalElement::Expansion { val: vy, prec: ny, .. },
                ) => {
                    let sum = k.add(&x.approximant(), &y.approximant());
                    from_approximant(place, &sum, *vx.min(vy), *nx.min(ny))
                }
            }
        }
        LocalOp::Mul => {
            let y = other()?;
            match (x, y) {
                (LocalElement::ExactZero { .. }, _) | (_, LocalElement::ExactZero { .. }) => {
                    Ok(LocalElement::ExactZero {
                        place: place.clone(),
                    })
                }
                (
                    LocalElement::Expansion { val: vx, prec: nx, .. },
                    LocalElement::Expansion { val: vy, prec: ny, .. },
                ) => {
                    let prod = k.mul(&x.approximant(), &y.approximant());
                    from_approximant(place, &prod, vx + vy, (nx + vy).min(ny + vx))
                }
            }
        }
    }
}

/// `v(x)`: `0` for an exact zero, `ofAdd(-val)` otherwise.
pub fn local_valuation(x: &LocalElement) -> Result<MultIntZero> {
    match x {
        LocalElement::ExactZero { .. } => Ok(MultIntZero::Zero),
        _ if x.is_zero_to_precision() => Err(Error::IndeterminateValuation),
        LocalElement::Expansion { val, .. } => Ok(MultIntZero::of_add(-val)),
    }
}

/// Membership in `𝒪_v = {x : v(x) <= 1}`.
pub fn is_local_integer(x: &LocalElement) -> Result<bool> {
    Ok(local_valuation(x)?.le(&MultIntZero::one()))
}

/// The canonical uniformizer of `v`, embedded at [`UNIFORMIZER_PRECISION`].
pub fn uniformizer(place: &FinitePlace) -> LocalElement {
    local_embed(place, &place.uniformizer(), UNIFORMIZER_PRECISION)
        .expect("uniformizer has valuation 1")
}

/// All `q^n` classes of `𝒪_v/𝔪_v^n` as `Σ_{i<n} r_i π^i` with canonical residue
/// representatives `r_i` (`r_0` varies fastest).
pub fn quotient_representatives(place: &FinitePlace, n: u32) -> Result<Vec<FieldElement>> {
    let q = place.residue_size();
    let count = num_traits::pow(q, n as usize);
    if count > BigInt::from(ENUMERATION_BUDGET) {
        return Err(Error::BudgetExceeded(alloc::format!("{}", count)));
    }
    let k = place.field();
    let pi = place.uniformizer();
    let residues = place.residue_representatives();
    let mut reps = vec![FieldElement::zero()];
    let mut pi_power = FieldElement::one();
    for _ in 0..n {
        let mut next = Vec::with_capacity(reps.len() * residues.len());
        for r in &residues {
            let term = k.mul(r, &pi_power);
            for base in &reps {
                next.push(k.add(base, &term));
            }
        }
        reps = next;
        pi_power = k.mul(&pi_power, &pi);
    }
    Ok(reps)
}

/// The first `n` π-adic digits of the local integer `x`.
///
/// As a map on `𝒪_v/𝔪_v^n` this depends only on the class of `x` and is
/// injective.
pub fn to_finite_coeffs(x: &LocalElement, n: u32, pi: &LocalElement) -> Result<Vec<ResidueElement>> {
    let place = x.place();
    if pi.place() != place {
        return Err(Error::PlaceMismatch);
    }
    if pi.val() != Some(1) || pi.is_zero_to_precision() {
        return Err(Error::NotUniformizer);
    }
    let needed = i64::from(n);
    let pi_prec = pi.precision().expect("uniformizer is not an exact zero");
    if pi_prec < needed {
        return Err(Error::InsufficientPrecision {
            needed,
            available: pi_prec,
        });
    }
    match x {
        LocalElement::ExactZero { .. } => Ok(vec![ResidueElement::zero(place.f()); n as usize]),
        LocalElement::Expansion { prec, .. } => {
            if *prec < needed {
                return Err(Error::InsufficientPrecision {
                    needed,
                    available: *prec,
                });
            }
            if !x.is_zero_to_precision() && !is_local_integer(x)? {
                return Err(Error::NotIntegral);
            }
            peel_digits(place, &x.approximant(), n as usize, &pi.approximant())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::arith::rat;
    use crate::NumberField;
    use proptest::prelude::*;

    fn q(p: u64) -> FinitePlace {
        FinitePlace::rational(p).unwrap()
    }

    fn digits_of(x: &LocalElement) -> Vec<u64> {
        x.digits().iter().map(|d| d.coords()[0]).collect()
    }

    fn r(n: i64, d: i64) -> FieldElement {
        FieldElement::rational(rat(n, d))
    }

    /// Base-p digits of `num * den^{-1} mod p^n` with the inverse found by search.
    fn brute_digits(p: i64, num: i64, den: i64, n: u32) -> Vec<u64> {
        let m = p.pow(n);
        let inv = (0..m).find(|i| (i * den).rem_euclid(m) == 1).unwrap();
        let mut v = (num * inv).rem_euclid(m);
        (0..n)
            .map(|_| {
                let d = v % p;
                v /= p;
                d as u64
            })
            .collect()
    }

    #[test]
    fn embed_examples() {
        assert_eq!(brute_digits(3, 1, 2, 3), [2, 1, 1]);
        let x = local_embed(&q(3), &r(1, 2), 3).unwrap();
        assert_eq!((x.val(), digits_of(&x)), (Some(0), vec![2, 1, 1]));
        assert_eq!(x.to_string(), "val=0 N=3 digits=[2,1,1] (base 3)");
        let x = local_embed(&q(3), &r(-1, 1), 3).unwrap();
        assert_eq!(digits_of(&x), brute_digits(3, -1, 1, 3));
        assert_eq!(digits_of(&x), [2, 2, 2]);
        let z = local_embed(&q(5), &FieldElement::zero(), 5).unwrap();
        assert!(matches!(z, LocalElement::ExactZero { .. }));
        assert_eq!(
            local_embed(&q(3), &r(1, 9), -2),
            Err(Error::PrecisionTooLow { val: -2, prec: -2 })
        );
        assert_eq!(
            local_embed(&q(3), &FieldElement::from_ints(1, 1), 2),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn arith_examples() {
        let half = local_embed(&q(3), &r(1, 2), 3).unwrap();
        let one = local_arith(LocalOp::Add, &half, Some(&half)).unwrap();
        assert_eq!((one.val(), digits_of(&one)), (Some(0), vec![1, 0, 0]));

        let three = local_embed(&q(3), &r(3, 1), 4).unwrap();
        let nine = local_arith(LocalOp::Mul, &three, Some(&three)).unwrap();
        assert_eq!(nine.val(), Some(2));
        assert_eq!(nine.approximant(), r(9, 1));
        assert_eq!(nine.precision(), Some(5));

        let zero = LocalElement::ExactZero { place: q(3) };
        assert_eq!(
            local_arith(LocalOp::Inv, &zero, None),
            Err(Error::CannotInvert { exact: true })
        );
        let minus_half = local_arith(LocalOp::Neg, &half, None).unwrap();
        let vanished = local_arith(LocalOp::Add, &half, Some(&minus_half)).unwrap();
        assert!(vanished.is_zero_to_precision());
        assert_eq!(
            local_arith(LocalOp::Inv, &vanished, None),
            Err(Error::CannotInvert { exact: false })
        );
        assert_eq!(local_valuation(&vanished), Err(Error::IndeterminateValuation));

        let other = local_embed(&q(5), &r(1, 2), 3).unwrap();
        assert_eq!(
            local_arith(LocalOp::Add, &half, Some(&other)),
            Err(Error::PlaceMismatch)
        );
    }

    #[test]
    fn inverse_precision() {
        let x = local_embed(&q(3), &r(18, 1), 6).unwrap(); // val 2
        let inv = local_arith(LocalOp::Inv, &x, None).unwrap();
        assert_eq!(inv.val(), Some(-2));
        assert_eq!(inv.precision(), Some(2));
        let direct = local_embed(&q(3), &r(1, 18), 2).unwrap();
        assert_eq!(inv, direct);
    }

    #[test]
    fn valuation_examples() {
        let x = local_embed(&q(3), &r(18, 1), 5).unwrap();
        assert_eq!(local_valuation(&x).unwrap(), MultIntZero::of_add(-2));
        assert_eq!(
            local_valuation(&LocalElement::ExactZero { place: q(3) }).unwrap(),
            MultIntZero::Zero
        );
        let p2 = FinitePlace::quadratic(-1, 2, 0).unwrap();
        let x = local_embed(&p2, &FieldElement::from_ints(1, 1), 4).unwrap();
        assert_eq!(local_valuation(&x).unwrap(), MultIntZero::of_add(-1));

        assert!(is_local_integer(&local_embed(&q(2), &r(7, 1), 3).unwrap()).unwrap());
        assert!(!is_local_integer(&local_embed(&q(3), &r(1, 3), 3).unwrap()).unwrap());
        assert!(is_local_integer(&LocalElement::ExactZero { place: q(3) }).unwrap());
    }

    #[test]
    fn uniformizer_examples() {
        let pi = uniformizer(&q(5));
        assert_eq!(pi.approximant(), r(5, 1));
        assert_eq!(local_valuation(&pi).unwrap(), MultIntZero::of_add(-1));
        let p2 = FinitePlace::quadratic(-1, 2, 0).unwrap();
        assert_eq!(uniformizer(&p2).approximant(), FieldElement::from_ints(1, 1));
        let p3 = FinitePlace::quadratic(-1, 3, 0).unwrap();
        assert_eq!(uniformizer(&p3).approximant(), r(3, 1));
        for place in [q(2), q(7), p2, p3, FinitePlace::quadratic(5, 11, 1).unwrap()] {
            assert_eq!(local_valuation(&uniformizer(&place)).unwrap(), MultIntZero::of_add(-1));
        }
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_representatives(&q(3), 1).unwrap(), [r(0, 1), r(1, 1), r(2, 1)]);
        assert_eq!(
            quotient_representatives(&q(2), 2).unwrap(),
            [r(0, 1), r(1, 1), r(2, 1), r(3, 1)]
        );
        let inert = FinitePlace::quadratic(-1, 3, 0).unwrap();
        let reps = quotient_representatives(&inert, 1).unwrap();
        let mut expected: Vec<FieldElement> = (0..3)
            .flat_map(|b| (0..3).map(move |a| FieldElement::from_ints(a, b)))
            .collect();
        assert_eq!(reps, expected);
        expected.sort();
        assert_eq!(reps.len(), 9);
        assert!(matches!(
            quotient_representatives(&q(101), 4),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn finite_coeffs_examples() {
        let pi = uniformizer(&q(3));
        let x = local_embed(&q(3), &r(7, 1), 4).unwrap();
        let c: Vec<u64> = to_finite_coeffs(&x, 2, &pi).unwrap().iter().map(|d| d.coords()[0]).collect();
        assert_eq!(c, [1, 2]);
        let zero = LocalElement::ExactZero { place: q(3) };
        assert!(to_finite_coeffs(&zero, 3, &pi).unwrap().iter().all(ResidueElement::is_zero));
        let pi2 = uniformizer(&q(2));
        let four = local_embed(&q(2), &r(4, 1), 3).unwrap();
        assert!(to_finite_coeffs(&four, 2, &pi2).unwrap().iter().all(ResidueElement::is_zero));
        assert_eq!(
            to_finite_coeffs(&x, 5, &pi),
            Err(Error::InsufficientPrecision { needed: 5, available: 4 })
        );
        assert_eq!(to_finite_coeffs(&x, 2, &pi2), Err(Error::PlaceMismatch));
        assert_eq!(
            to_finite_coeffs(&x, 2, &local_embed(&q(3), &r(9, 1), 4).unwrap()),
            Err(Error::NotUniformizer)
        );
        let third = local_embed(&q(3), &r(1, 3), 4).unwrap();
        assert_eq!(to_finite_coeffs(&third, 2, &pi), Err(Error::NotIntegral));
    }

    #[test]
    fn non_canonical_uniformizer() {
        // π' = 3·(1 + 3) = 12 is another uniformizer of ℚ_3; 7 = 1 + 12·(1/2) and 1/2 ≡ 2 (mod 3)
        let pi = local_embed(&q(3), &r(12, 1), 6).unwrap();
        let x = local_embed(&q(3), &r(7, 1), 4).unwrap();
        let c: Vec<u64> = to_finite_coeffs(&x, 2, &pi).unwrap().iter().map(|d| d.coords()[0]).collect();
        assert_eq!(c, [1, 2]);
        let x = local_embed(&q(3), &r(13, 1), 4).unwrap();
        let c: Vec<u64> = to_finite_coeffs(&x, 2, &pi).unwrap().iter().map(|d| d.coords()[0]).collect();
        assert_eq!(c, [1, 1]);
    }

    #[test]
    fn ramified_expansion_reconstructs() {
        let place = FinitePlace::quadratic(-1, 2, 0).unwrap();
        let k = place.field();
        let x = FieldElement::new(rat(3, 5), rat(-7, 10));
        let e = local_embed(&place, &x, 6).unwrap();
        let diff = k.sub(&x, &e.approximant());
        assert!(place.valuation(&diff) >= AdditiveValue::Finite(6));
    }

    #[test]
    fn infinite_embedding_examples() {
        let k = NumberField::quadratic(2).unwrap();
        let s = infinite_embed(&k, crate::InfinitePlace::Real { positive_root: true }, &FieldElement::from_ints(0, 1));
        assert!((s.re - core::f64::consts::SQRT_2).abs() < 1e-12 && s.im == 0.0);
        let ki = NumberField::quadratic(-1).unwrap();
        let s = infinite_embed(&ki, crate::InfinitePlace::Complex, &FieldElement::from_ints(0, 1));
        assert!(s.re.abs() < 1e-15 && (s.im - 1.0).abs() < 1e-15);
        let s = infinite_embed(&ki, crate::InfinitePlace::Complex, &r(3, 1));
        assert_eq!((s.re, s.im), (3.0, 0.0));
    }

    fn places() -> Vec<FinitePlace> {
        let mut out = vec![q(2), q(3), q(5), q(7)];
        for (d, p) in [(-1i64, 2u64), (-1, 3), (-1, 5), (5, 11), (-3, 7), (2, 2), (5, 5)] {
            let k = crate::QuadraticField::new(d).unwrap();
            for i in 0..crate::number_field::factor_rational_prime(&k, p).unwrap().len() {
                out.push(FinitePlace::quadratic(d, p, i).unwrap());
            }
        }
        out
    }

    fn element_for(place: &FinitePlace, a: i64, b: i64, m: i64) -> FieldElement {
        match place {
            FinitePlace::Rational(_) => r(a, m),
            FinitePlace::Quadratic(..) => FieldElement::new(rat(a, m), rat(b, m)),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn ring_homomorphism_shadow(i in 0usize..17, a in -300i64..300, b in -300i64..300, c in -300i64..300, d in -300i64..300, m in 1i64..40) {
            let all = places();
            let place = &all[i % all.len()];
            let k = place.field();
            let x = element_for(place, a, b, m);
            let y = element_for(place, c, d, 1);
            prop_assume!(!x.is_zero() && !y.is_zero());
            let n = 6;
            let vx = place.valuation(&x).finite().unwrap();
            let vy = place.valuation(&y).finite().unwrap();
            let ex = local_embed(place, &x, vx + n).unwrap();
            let ey = local_embed(place, &y, vy + n).unwrap();

            let prod = local_arith(LocalOp::Mul, &ex, Some(&ey)).unwrap();
            let direct = local_embed(place, &k.mul(&x, &y), prod.precision().unwrap()).unwrap();
            prop_assert_eq!(&prod, &direct);

            let sum = local_arith(LocalOp::Add, &ex, Some(&ey)).unwrap();
            let exact = k.add(&x, &y);
            let n_sum = sum.precision().unwrap();
            match place.valuation(&exact) {
                AdditiveValue::Finite(v) if v < n_sum => {
                    prop_assert_eq!(&sum, &local_embed(place, &exact, n_sum).unwrap());
                }
                _ => prop_assert!(sum.is_zero_to_precision()),
            }
        }

        #[test]
        fn valuation_compatibility(i in 0usize..17, a in -300i64..300, b in -300i64..300, m in 1i64..60) {
            let all = places();
            let place = &all[i % all.len()];
            let x = element_for(place, a, b, m);
            prop_assume!(!x.is_zero());
            let v = place.valuation(&x).finite().unwrap();
            let e = local_embed(place, &x, v + 3).unwrap();
            prop_assert_eq!(local_valuation(&e).unwrap(), place.mult_valuation(&x));
        }

        #[test]
        fn monotone_refinement(i in 0usize..17, a in -500i64..500, b in -500i64..500, m in 1i64..60, extra in 1i64..5) {
            let all = places();
            let place = &all[i % all.len()];
            let x = element_for(place, a, b, m);
            prop_assume!(!x.is_zero());
            let v = place.valuation(&x).finite().unwrap();
            let short = local_embed(place, &x, v + 2).unwrap();
            let long = local_embed(place, &x, v + 2 + extra).unwrap();
            prop_assert_eq!(short.digits(), &long.digits()[..short.digits().len()]);
        }

        #[test]
        fn ultrametric_on_expansions(i in 0usize..17, a in -300i64..300, b in -300i64..300, c in -300i64..300, d in -300i64..300) {
            let all = places();
            let place = &all[i % all.len()];
            let k = place.field();
            let x = element_for(place, a, b, 1);
            let y = element_for(place, c, d, 7);
            prop_assume!(!x.is_zero() && !y.is_zero() && !k.add(&x, &y).is_zero());
            let ex = local_embed(place, &x, 12).unwrap();
            let ey = local_embed(place, &y, 12).unwrap();
            let s = local_arith(LocalOp::Add, &ex, Some(&ey)).unwrap();
            prop_assume!(!s.is_zero_to_precision());
            let bound = local_valuation(&ex).unwrap().max(local_valuation(&ey).unwrap());
            prop_assert!(local_valuation(&s).unwrap().le(&bound));
        }
    }

    #[test]
    fn quotient_reps_are_distinct_classes() {
        for place in places() {
            let n = if place.f() == 2 { 1 } else { 2 };
            let reps = quotient_representatives(&place, n).unwrap();
            let q = place.residue_size().to_u64().unwrap();
            assert_eq!(reps.len() as u64, q.pow(n));
            let k = place.field();
            for (i, x) in reps.iter().enumerate() {
                assert!(place.is_integral(x));
                for y in &reps[..i] {
                    let v = place.valuation(&k.sub(x, y));
                    assert!(v < AdditiveValue::Finite(i64::from(n)), "{place}: {x} ≡ {y}");
                }
            }
        }
    }
}
