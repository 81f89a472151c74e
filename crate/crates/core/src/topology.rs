//! Balls in `K_v`, basic opens of the restricted-product topology on the
//! finite adèles, and compactness certificates.
//!
//! Every set here is described by exact field elements and integer radii, so
//! membership and containment reduce to comparisons of valuations. Claims that
//! quantify over a compact set (a cover of `𝒪_v`, a scaled ball inside a union
//! of balls) are checked by enumerating the finitely many residue classes the
//! claim depends on.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::adele::{is_finite_s_adele, support, FiniteAdele, PlaceSet};
use crate::completion::{quotient_representatives, ENUMERATION_BUDGET};
use crate::number_field::{FieldElement, FinitePlace, NumberField};
use crate::valuations::AdditiveValue;
use crate::value_group::MultIntZero;
use crate::{Error, Result};

fn val_at_least(v: &FinitePlace, x: &FieldElement, k: i64) -> bool {
    v.valuation(x) >= AdditiveValue::Finite(k)
}

/// Least additive valuation of `x - t` for `x` in the open ball of radius
/// `γ` about `t`: `v(y) < γ` is `a(y) >= 1 - to_add(γ)`.
fn depth_of(radius: &MultIntZero) -> Result<i64> {
    if radius.is_zero() {
        return Err(Error::ZeroRadius);
    }
    1i64.checked_sub(radius.to_add_i64()?).ok_or(Error::ExponentOverflow)
}

/// The open ball `B_γ(t) = {x ∈ K_v : v(x - t) < γ}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    place: FinitePlace,
    center: FieldElement,
    radius: MultIntZero,
    depth: i64,
}

impl Ball {
    pub fn new(place: FinitePlace, center: FieldElement, radius: MultIntZero) -> Result<Self> {
        let depth = depth_of(&radius)?;
        if !place.field().contains(&center) {
            return Err(Error::FieldMismatch);
        }
        Ok(Ball {
            place,
            center,
            radius,
            depth,
        })
    }

    pub fn place(&self) -> &FinitePlace {
        &self.place
    }

    pub fn center(&self) -> &FieldElement {
        &self.center
    }

    pub fn radius(&self) -> &MultIntZero {
        &self.radius
    }

    /// `1 - to_add(γ)`: the ball is `center + 𝔪_v^depth`.
    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        let k = self.place.field();
        val_at_least(&self.place, &k.sub(x, &self.center), self.depth)
    }

    /// `self ∩ other` for two balls at the same place: in an ultrametric space
    /// two balls are nested or disjoint.
    pub fn intersect(&self, other: &Ball) -> Result<Option<Ball>> {
        if self.place != other.place {
            return Err(Error::PlaceMismatch);
        }
        let (small, large) = if self.depth >= other.depth {
            (self, other)
        } else {
            (other, self)
        };
        Ok(large.contains(&small.center).then(|| small.clone()))
    }
}

/// A basic open `∏_{v ∈ I} V_v × ∏_{v ∉ I} 𝒪_v`, with each `V_v` a finite
/// union of balls (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicOpen {
    field: NumberField,
    opens: BTreeMap<FinitePlace, Vec<Ball>>,
}

impl BasicOpen {
    pub fn new(field: NumberField, opens: BTreeMap<FinitePlace, Vec<Ball>>) -> Result<Self> {
        for (v, balls) in &opens {
            if v.field() != field {
                return Err(Error::FieldMismatch);
            }
            if balls.iter().any(|b| &b.place != v) {
                return Err(Error::PlaceMismatch);
            }
        }
        Ok(BasicOpen { field, opens })
    }

    /// `∏_v 𝒪_v`.
    pub fn integral(field: NumberField) -> Self {
        BasicOpen {
            field,
            opens: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> NumberField {
        self.field
    }

    pub fn opens(&self) -> &BTreeMap<FinitePlace, Vec<Ball>> {
        &self.opens
    }

    /// The index set `I`.
    pub fn index_set(&self) -> PlaceSet {
        self.opens.keys().cloned().collect()
    }

    /// `V_v` as a list of balls; `𝒪_v` is the single ball of radius `ofAdd(1)`.
    pub fn balls_at(&self, v: &FinitePlace) -> Vec<Ball> {
        match self.opens.get(v) {
            Some(balls) => balls.clone(),
            None => vec![integer_ball(v)],
        }
    }

    /// `U ∩ U'`, indexed by `I ∪ I'`.
    pub fn intersect(&self, other: &BasicOpen) -> Result<BasicOpen> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let places: PlaceSet = self.opens.keys().chain(other.opens.keys()).cloned().collect();
        let mut opens = BTreeMap::new();
        for v in places {
            let mut balls: Vec<Ball> = Vec::new();
            for a in self.balls_at(&v) {
                for b in other.balls_at(&v) {
                    if let Some(c) = a.intersect(&b)? {
                        if !balls.contains(&c) {
                            balls.push(c);
                        }
                    }
                }
            }
            opens.insert(v, balls);
        }
        Ok(BasicOpen {
            field: self.field,
            opens,
        })
    }
}

fn integer_ball(v: &FinitePlace) -> Ball {
    Ball::new(v.clone(), FieldElement::zero(), MultIntZero::of_add(1)).expect("nonzero radius")
}

/// `center + π^m 𝒪_v`, a compact subset of `K_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScaledIntegerBall {
    pub place: FinitePlace,
    pub center: FieldElement,
    pub m: i64,
}

impl ScaledIntegerBall {
    pub fn contains(&self, x: &FieldElement) -> bool {
        let k = self.place.field();
        val_at_least(&self.place, &k.sub(x, &self.center), self.m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompactCert {
    Scaled(ScaledIntegerBall),
    /// `∏_{v ∈ T} blocks[v] × ∏_{v ∉ T} 𝒪_v`, with `T` the key set.
    Product {
        field: NumberField,
        blocks: BTreeMap<FinitePlace, ScaledIntegerBall>,
    },
}

/// A point of `K_v` or of `𝔸_{K,f}`, for [`cert_contains`].
#[derive(Debug, Clone, Copy)]
pub enum Point<'a> {
    Local(&'a FinitePlace, &'a FieldElement),
    Adele(&'a FiniteAdele),
}

/// Centers of balls of radius `γ` that cover `𝒪_v`: `{0}` when `to_add(γ) >= 1`,
/// otherwise representatives of `𝒪_v/𝔪_v^n` with `n = 1 - to_add(γ)`.
pub fn cover_integers(v: &FinitePlace, gamma: &MultIntZero) -> Result<Vec<FieldElement>> {
    let n = depth_of(gamma)?;
    if n <= 0 {
        return Ok(vec![FieldElement::zero()]);
    }
    quotient_representatives(v, n as u32)
}

/// Representatives `a + b·ω` of `𝒪_K/𝔭^n`, read off the HNF of `𝔭^n`.
fn lattice_classes(v: &FinitePlace, n: u32) -> Result<Vec<FieldElement>> {
    let hnf = v.power_hnf(n);
    let (a, _, d) = hnf.parts();
    let count = match v.field() {
        NumberField::Rational => a.clone(),
        NumberField::Quadratic(_) => a * d,
    };
    if count > BigInt::from(ENUMERATION_BUDGET) {
        return Err(Error::BudgetExceeded(format!("{}", count)));
    }
    let a = a.to_u64().expect("within budget");
    let d = match v.field() {
        NumberField::Rational => 1,
        NumberField::Quadratic(_) => d.to_u64().expect("within budget"),
    };
    Ok((0..d)
        .flat_map(|j| (0..a).map(move |i| FieldElement::from_ints(i, j)))
        .collect())
}

/// Whether the balls `B_γ(t)`, `t ∈ centers`, cover `𝒪_v`. Checked class by
/// class over `𝒪_v/𝔪_v^n`, `n = max(1, 1 - to_add(γ))`, which is exhaustive
/// because ball membership only depends on the class.
pub fn verify_cover(v: &FinitePlace, gamma: &MultIntZero, centers: &[FieldElement]) -> Result<bool> {
    let depth = depth_of(gamma)?;
    let k = v.field();
    if centers.iter().any(|c| !k.contains(c)) {
        return Err(Error::FieldMismatch);
    }
    let classes = lattice_classes(v, depth.max(1) as u32)?;
    let covered = |r: &FieldElement, t: &FieldElement| val_at_least(v, &k.sub(r, t), depth);
    if depth <= 0 {
        return Ok(classes.iter().all(|r| centers.iter().any(|t| covered(r, t))));
    }
    // A ball of positive depth meets 𝒪_v only if its center is integral, and
    // then it is a single class mod 𝔪_v^depth.
    let mut by_class: BTreeMap<FieldElement, &FieldElement> = BTreeMap::new();
    for t in centers.iter().filter(|t| v.is_integral(t)) {
        by_class.entry(v.reduce(t, depth as u32)?).or_insert(t);
    }
    for r in &classes {
        let hit = match by_class.get(&v.reduce(r, depth as u32)?) {
            Some(t) => covered(r, t),
            None => false,
        };
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x + π^m 𝒪_v` with `m = 1 - to_add(γ)`, the largest scaled integer ball
/// about `x` inside `B_γ(x)`.
pub fn compact_nbhd_local(v: &FinitePlace, x: &FieldElement, gamma: &MultIntZero) -> Result<CompactCert> {
    let m = depth_of(gamma)?;
    if !v.field().contains(x) {
        return Err(Error::FieldMismatch);
    }
    Ok(CompactCert::Scaled(ScaledIntegerBall {
        place: v.clone(),
        center: x.clone(),
        m,
    }))
}

pub fn cert_contains(cert: &CompactCert, x: Point<'_>) -> Result<bool> {
    match (cert, x) {
        (CompactCert::Scaled(b), Point::Local(v, y)) => {
            if v != &b.place || !v.field().contains(y) {
                return Err(Error::PlaceMismatch);
            }
            Ok(b.contains(y))
        }
        (CompactCert::Scaled(b), Point::Adele(a)) => {
            if a.field() != b.place.field() {
                return Err(Error::PlaceMismatch);
            }
            Ok(b.contains(&a.component_exact(&b.place)))
        }
        (CompactCert::Product { field, blocks }, Point::Adele(a)) => {
            if a.field() != *field {
                return Err(Error::PlaceMismatch);
            }
            let on_t = blocks.iter().all(|(v, b)| b.contains(&a.component_exact(v)));
            Ok(on_t && support(a).iter().all(|v| blocks.contains_key(v)))
        }
        (CompactCert::Product { .. }, Point::Local(..)) => Err(Error::PlaceMismatch),
    }
}

pub fn basic_open_membership(x: &FiniteAdele, u: &BasicOpen) -> Result<bool> {
    if x.field() != u.field {
        return Err(Error::FieldMismatch);
    }
    let on_i = u.opens.iter().all(|(v, balls)| {
        let c = x.component_exact(v);
        balls.iter().any(|b| b.contains(&c))
    });
    Ok(on_i && support(x).iter().all(|v| u.opens.contains_key(v)))
}

/// Membership of the S-adèle `x` in `U`, once through the inclusion
/// `𝔸_{K,S,f} ⊂ 𝔸_{K,f}` and once place by place on `I ∪ S`.
pub fn sadele_membership_two_ways(s: &PlaceSet, x: &FiniteAdele, u: &BasicOpen) -> Result<(bool, bool)> {
    if s.iter().any(|v| v.field() != x.field()) {
        return Err(Error::FieldMismatch);
    }
    if !is_finite_s_adele(s, x) {
        return Err(Error::NotSAdele);
    }
    let pulled_back = basic_open_membership(x, u)?;

    let places: BTreeSet<&FinitePlace> = u.opens.keys().chain(s.iter()).collect();
    let per_place = places.into_iter().all(|v| {
        let c = x.component_exact(v);
        match u.opens.get(v) {
            Some(balls) => balls.iter().any(|b| b.contains(&c)),
            None => v.is_integral(&c),
        }
    });
    Ok((pulled_back, per_place))
}

/// A product of scaled integer balls about `x` inside `U`, indexed by
/// `support(x) ∪ I`.
pub fn adelic_compact_nbhd(x: &FiniteAdele, u: &BasicOpen) -> Result<CompactCert> {
    if !basic_open_membership(x, u)? {
        return Err(Error::NotInOpen);
    }
    let mut t = support(x);
    t.extend(u.opens.keys().cloned());
    let mut blocks = BTreeMap::new();
    for v in t {
        let c = x.component_exact(&v);
        let m = match u.opens.get(&v) {
            Some(balls) => {
                let ball = balls.iter().find(|b| b.contains(&c)).expect("x lies in U");
                ball.depth
            }
            None => 0,
        };
        blocks.insert(
            v.clone(),
            ScaledIntegerBall {
                place: v,
                center: c,
                m,
            },
        );
    }
    Ok(CompactCert::Product {
        field: x.field(),
        blocks,
    })
}

/// Whether `c + π^m 𝒪_v` lies in the union of `balls`.
///
/// Either one ball already contains it, or the answer depends only on classes
/// modulo the deepest ball, which are enumerated.
pub fn scaled_ball_in_union(b: &ScaledIntegerBall, balls: &[Ball]) -> Result<bool> {
    if balls.iter().any(|ball| ball.place != b.place) {
        return Err(Error::PlaceMismatch);
    }
    if balls.iter().any(|ball| ball.depth <= b.m && ball.contains(&b.center)) {
        return Ok(true);
    }
    let deepest = match balls.iter().map(|ball| ball.depth).max() {
        Some(k) if k > b.m => k,
        _ => return Ok(false),
    };
    let n = u32::try_from(deepest - b.m).map_err(|_| Error::BudgetExceeded(format!("q^{}", deepest - b.m)))?;
    let k = b.place.field();
    let step = k.pow(&b.place.uniformizer(), b.m);
    for r in quotient_representatives(&b.place, n)? {
        let y = k.add(&b.center, &k.mul(&step, &r));
        if !balls.iter().any(|ball| ball.contains(&y)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the set described by `cert` lies inside `U`. A scaled ball at `v`
/// is compared against `V_v`.
pub fn verify_cert_subset(cert: &CompactCert, u: &BasicOpen) -> Result<bool> {
    match cert {
        CompactCert::Scaled(b) => {
            if b.place.field() != u.field {
                return Err(Error::PlaceMismatch);
            }
            scaled_ball_in_union(b, &u.balls_at(&b.place))
        }
        CompactCert::Product { field, blocks } => {
            if *field != u.field {
                return Err(Error::PlaceMismatch);
            }
            for (v, b) in blocks {
                if &b.place != v {
                    return Err(Error::PlaceMismatch);
                }
                let inside = match u.opens.get(v) {
                    Some(balls) => scaled_ball_in_union(b, balls)?,
                    None => b.m >= 0 && v.is_integral(&b.center),
                };
                if !inside {
                    return Ok(false);
                }
            }
            for (v, balls) in &u.opens {
                if !blocks.contains_key(v) {
                    let whole = ScaledIntegerBall {
                        place: v.clone(),
                        center: FieldElement::zero(),
                        m: 0,
                    };
                    if !scaled_ball_in_union(&whole, balls)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}
