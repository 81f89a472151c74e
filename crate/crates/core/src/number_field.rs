//! ℚ and quadratic fields `ℚ(√d)`: elements in the integral basis `(1, ω)`,
//! ideals of `𝒪_K` in Hermite normal form, the splitting of rational primes,
//! `𝔭`-adic valuations and the infinite places.
//!
//! `𝒪_K = ℤ[ω]` for every quadratic field, with `ω = √d` when `d ≢ 1 (mod 4)`
//! and `ω = (1 + √d)/2` otherwise. An ideal is stored by its HNF basis
//! `{A, C + D·ω}` with `A, D > 0` and `0 <= C < A`, so membership is a
//! divisibility test and the index `[𝒪_K : I]` is `A·D`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{int_valuation, is_squarefree, mod_inverse, Prime, Rat};
use crate::valuations::{self, AdditiveValue};
use crate::value_group::MultIntZero;
use crate::{Error, Result};

/// Which generator of `𝒪_K` over ℤ is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmegaKind {
    /// `ω = √d`, for `d ≡ 2, 3 (mod 4)`.
    SqrtD,
    /// `ω = (1 + √d)/2`, for `d ≡ 1 (mod 4)`.
    HalfOnePlusSqrtD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticField {
    d: i64,
    omega: OmegaKind,
    discriminant: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::DegenerateD(format!("{}", d)));
        }
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree(format!("{}", d)));
        }
        let (omega, discriminant) = if d.rem_euclid(4) == 1 {
            (OmegaKind::HalfOnePlusSqrtD, d)
        } else {
            (OmegaKind::SqrtD, 4 * d)
        };
        Ok(QuadraticField {
            d,
            omega,
            discriminant,
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.omega
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// `(t, n)` with `ω² = t·ω + n`.
    pub fn omega_relation(&self) -> (i64, i64) {
        match self.omega {
            OmegaKind::SqrtD => (0, self.d),
            OmegaKind::HalfOnePlusSqrtD => (1, (self.d - 1) / 4),
        }
    }
}

/// `make_field`: validates `d` and fixes the integral basis.
pub fn make_field(d: i64) -> Result<QuadraticField> {
    QuadraticField::new(d)
}

/// The base field ℚ or a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NumberField {
    Rational,
    Quadratic(QuadraticField),
}

/// `a + b·ω`. Over ℚ the `b` coordinate is always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub a: Rat,
    pub b: Rat,
}

impl FieldElement {
    pub fn new(a: Rat, b: Rat) -> Self {
        FieldElement { a, b }
    }

    pub fn rational(a: Rat) -> Self {
        FieldElement { a, b: Rat::zero() }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::rational(Rat::from_integer(n.into()))
    }

    pub fn from_ints(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        FieldElement {
            a: Rat::from_integer(a.into()),
            b: Rat::from_integer(b.into()),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Both coordinates are integers, i.e. the element lies in `𝒪_K`.
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Least positive `m` with `m·self` integral.
    pub fn denominator(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        FieldElement {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    /// Integer coordinates; only meaningful when [`is_integral`](Self::is_integral).
    pub fn int_coords(&self) -> (BigInt, BigInt) {
        (self.a.to_integer(), self.b.to_integer())
    }
}

impl fmt::Display for FieldElement {
    /// `a`, `b w` or `a+b w` / `a-b w`; the format accepted by the CLI.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{} w", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{}-{} w", self.a, -&self.b)
        } else {
            write!(f, "{}+{} w", self.a, self.b)
        }
    }
}

impl NumberField {
    pub fn quadratic(d: i64) -> Result<Self> {
        QuadraticField::new(d).map(NumberField::Quadratic)
    }

    pub fn degree(&self) -> u32 {
        match self {
            NumberField::Rational => 1,
            NumberField::Quadratic(_) => 2,
        }
    }

    fn relation(&self) -> (i64, i64) {
        match self {
            NumberField::Rational => (0, 0),
            NumberField::Quadratic(k) => k.omega_relation(),
        }
    }

    /// Whether `x` is an element of this field (over ℚ: `b = 0`).
    pub fn contains(&self, x: &FieldElement) -> bool {
        match self {
            NumberField::Rational => x.b.is_zero(),
            NumberField::Quadratic(_) => true,
        }
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement::new(&x.a + &y.a, &x.b + &y.b)
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement::new(&x.a - &y.a, &x.b - &y.b)
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement::new(-&x.a, -&x.b)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let (t, n) = self.relation();
        let bb = &x.b * &y.b;
        FieldElement::new(
            &x.a * &y.a + &bb * Rat::from_integer(n.into()),
            &x.a * &y.b + &x.b * &y.a + &bb * Rat::from_integer(t.into()),
        )
    }

    /// Galois conjugate; identity over ℚ.
    pub fn conj(&self, x: &FieldElement) -> FieldElement {
        let (t, _) = self.relation();
        FieldElement::new(&x.a + &x.b * Rat::from_integer(t.into()), -&x.b)
    }

    pub fn norm(&self, x: &FieldElement) -> Rat {
        match self {
            NumberField::Rational => x.a.clone(),
            NumberField::Quadratic(_) => self.mul(x, &self.conj(x)).a,
        }
    }

    pub fn trace(&self, x: &FieldElement) -> Rat {
        match self {
            NumberField::Rational => x.a.clone(),
            NumberField::Quadratic(_) => self.add(x, &self.conj(x)).a,
        }
    }

    pub fn inv(&self, x: &FieldElement) -> Option<FieldElement> {
        if x.is_zero() {
            return None;
        }
        match self {
            NumberField::Rational => Some(FieldElement::rational(x.a.recip())),
            NumberField::Quadratic(_) => Some(self.conj(x).scale(&self.norm(x).recip())),
        }
    }

    pub fn pow(&self, x: &FieldElement, k: i64) -> FieldElement {
        let base = if k < 0 {
            self.inv(x).expect("negative power of zero")
        } else {
            x.clone()
        };
        let mut acc = FieldElement::one();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// Real and complex embeddings up to conjugation, in canonical order.
    pub fn infinite_places(&self) -> Vec<InfinitePlace> {
        match self {
            NumberField::Rational => vec![InfinitePlace::Real { positive_root: true }],
            NumberField::Quadratic(k) if k.d > 0 => vec![
                InfinitePlace::Real { positive_root: true },
                InfinitePlace::Real {
                    positive_root: false,
                },
            ],
            NumberField::Quadratic(_) => vec![InfinitePlace::Complex],
        }
    }
}

/// `(N(x), Tr(x))`.
pub fn norm_trace(field: &NumberField, x: &FieldElement) -> (Rat, Rat) {
    (field.norm(x), field.trace(x))
}

/// A full-rank sublattice of `ℤ·1 ⊕ ℤ·ω` in Hermite normal form:
/// ℤ-basis `A` and `C + D·ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hnf {
    a: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Hnf {
    pub fn unit() -> Self {
        Hnf {
            a: BigInt::one(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// HNF of the lattice spanned by integer vectors `(a, b)` (meaning `a + b·ω`).
    ///
    /// Panics if the vectors do not span a full-rank lattice.
    pub fn from_vectors(vectors: &[(BigInt, BigInt)]) -> Self {
        let mut pivot: Option<(BigInt, BigInt)> = None;
        let mut a_gcd = BigInt::zero();
        for (a, b) in vectors {
            if b.is_zero() {
                a_gcd = a_gcd.gcd(a);
                continue;
            }
            match pivot.take() {
                None => pivot = Some((a.clone(), b.clone())),
                Some((pc, pd)) => {
                    let e = pd.extended_gcd(b);
                    let g = e.gcd;
                    let new_c = &e.x * &pc + &e.y * a;
                    let kernel_a = (b / &g) * &pc - (&pd / &g) * a;
                    a_gcd = a_gcd.gcd(&kernel_a);
                    pivot = Some((new_c, g));
                }
            }
        }
        let (mut c, mut d) = pivot.expect("lattice has rank < 2");
        assert!(!a_gcd.is_zero(), "lattice has rank < 2");
        if d.is_negative() {
            c = -c;
            d = -d;
        }
        c = c.mod_floor(&a_gcd);
        Hnf { a: a_gcd, c, d }
    }

    /// The ideal generated (as an `𝒪_K`-module) by integral elements.
    pub fn ideal_from_generators(field: &QuadraticField, gens: &[FieldElement]) -> Self {
        let k = NumberField::Quadratic(*field);
        let omega = FieldElement::from_ints(0, 1);
        let mut vectors = Vec::with_capacity(gens.len() * 2);
        for g in gens {
            vectors.push(g.int_coords());
            vectors.push(k.mul(g, &omega).int_coords());
        }
        Self::from_vectors(&vectors)
    }

    /// `(A, C, D)`.
    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.c, &self.d)
    }

    /// Lower-triangular basis matrix: rows are `A·1` and `C·1 + D·ω`.
    pub fn matrix(&self) -> [[BigInt; 2]; 2] {
        [
            [self.a.clone(), BigInt::zero()],
            [self.c.clone(), self.d.clone()],
        ]
    }

    pub fn basis(&self) -> [FieldElement; 2] {
        [
            FieldElement::from_int(self.a.clone()),
            FieldElement::from_ints(self.c.clone(), self.d.clone()),
        ]
    }

    /// `[𝒪_K : I]`.
    pub fn index(&self) -> BigInt {
        &self.a * &self.d
    }

    pub fn contains_coords(&self, a: &BigInt, b: &BigInt) -> bool {
        let (t, r) = b.div_mod_floor(&self.d);
        r.is_zero() && (a - t * &self.c).mod_floor(&self.a).is_zero()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        x.is_integral() && {
            let (a, b) = x.int_coords();
            self.contains_coords(&a, &b)
        }
    }

    /// Canonical representative of an integral element modulo the lattice:
    /// `b ∈ [0, D)`, `a ∈ [0, A)`.
    pub fn reduce_coords(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let (t, b_red) = b.div_mod_floor(&self.d);
        let a_red = (a - t * &self.c).mod_floor(&self.a);
        (a_red, b_red)
    }

    pub fn mul(&self, other: &Hnf, field: &QuadraticField) -> Hnf {
        let k = NumberField::Quadratic(*field);
        let mut vectors = Vec::with_capacity(4);
        for x in self.basis().iter() {
            for y in other.basis().iter() {
                vectors.push(k.mul(x, y).int_coords());
            }
        }
        Hnf::from_vectors(&vectors)
    }

    pub fn pow(&self, k: u32, field: &QuadraticField) -> Hnf {
        let mut acc = Hnf::unit();
        for _ in 0..k {
            acc = acc.mul(self, field);
        }
        acc
    }
}

/// A nonzero prime of `𝒪_K` for a quadratic field, `𝔭 = (p, gen2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    p: Prime,
    /// `r` with `gen2 = ω - r`, `0 <= r < p`; `None` when `p` is inert.
    root: Option<u64>,
    hnf: Hnf,
    e: u8,
    f: u8,
    gen2: FieldElement,
}

impl PrimeIdeal {
    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn e(&self) -> u8 {
        self.e
    }

    pub fn f(&self) -> u8 {
        self.f
    }

    pub fn hnf(&self) -> &Hnf {
        &self.hnf
    }

    pub fn gen2(&self) -> &FieldElement {
        &self.gen2
    }

    pub fn root(&self) -> Option<u64> {
        self.root
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Square roots of `n` modulo an odd prime `p` (Tonelli-Shanks).
fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Roots in `[0, p)` of `x² - t·x - n` modulo `p`, ascending, without repetition.
fn min_poly_roots(t: i64, n: i64, p: u64) -> Vec<u64> {
    let tp = t.rem_euclid(p as i64) as u64;
    let np = n.rem_euclid(p as i64) as u64;
    let mut roots = Vec::new();
    if p == 2 {
        for x in 0..2u64 {
            if (x * x + tp * x + np) % 2 == 0 {
                roots.push(x);
            }
        }
        return roots;
    }
    // x = (t ± sqrt(t² + 4n)) / 2
    let disc = (mul_mod(tp, tp, p) + mul_mod(4 % p, np, p)) % p;
    if let Some(s) = sqrt_mod(disc, p) {
        let half = (p + 1) / 2;
        roots.push(mul_mod((tp + s) % p, half, p));
        roots.push(mul_mod((tp + p - s) % p, half, p));
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// `p𝒪_K = ∏ 𝔭_i^{e_i}`, as `(𝔭_i, e_i)` in canonical order.
pub fn factor_rational_prime(field: &QuadraticField, p: u64) -> Result<Vec<(PrimeIdeal, u8)>> {
    let p = Prime::new(p)?;
    let (t, n) = field.omega_relation();
    let roots = min_poly_roots(t, n, p.get());
    let pz = p.to_bigint();
    let split_ideal = |r: u64, e: u8| {
        let gen2 = FieldElement::from_ints(-BigInt::from(r), 1);
        let hnf = Hnf::from_vectors(&[(pz.clone(), BigInt::zero()), gen2.int_coords()]);
        PrimeIdeal {
            p,
            root: Some(r),
            hnf,
            e,
            f: 1,
            gen2,
        }
    };
    Ok(match roots.len() {
        2 => roots.iter().map(|&r| (split_ideal(r, 1), 1)).collect(),
        1 => vec![(split_ideal(roots[0], 2), 2)],
        _ => vec![(
            PrimeIdeal {
                p,
                root: None,
                hnf: Hnf {
                    a: pz.clone(),
                    c: BigInt::zero(),
                    d: pz,
                },
                e: 1,
                f: 2,
                gen2: FieldElement::zero(),
            },
            1,
        )],
    })
}

/// Whether the integral element `x` lies in `𝔭^k`.
pub fn ideal_pow_membership(
    field: &QuadraticField,
    prime: &PrimeIdeal,
    k: u32,
    x: &FieldElement,
) -> Result<bool> {
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    Ok(prime.hnf.pow(k, field).contains(x))
}

/// Largest `k` with `y ∈ 𝔭^k`, for a nonzero integral `y`.
fn integral_valuation(field: &QuadraticField, prime: &PrimeIdeal, y: &FieldElement) -> i64 {
    let norm = NumberField::Quadratic(*field).norm(y);
    let bound = int_valuation(prime.p, &norm.to_integer()) + 1;
    let mut power = prime.hnf.clone();
    let mut k = 0;
    while k < bound && power.contains(y) {
        k += 1;
        power = power.mul(&prime.hnf, field);
    }
    k
}

/// `a_𝔭(x)`, with `a_𝔭(0) = ∞`.
pub fn prime_valuation_additive(
    field: &QuadraticField,
    prime: &PrimeIdeal,
    x: &FieldElement,
) -> AdditiveValue {
    if x.is_zero() {
        return AdditiveValue::Infinite;
    }
    let m = x.denominator();
    let y = x.scale(&Rat::from_integer(m.clone()));
    let k = integral_valuation(field, prime, &y);
    AdditiveValue::Finite(k - i64::from(prime.e) * int_valuation(prime.p, &m))
}

/// `v_𝔭(x) = ofAdd(-a_𝔭(x))`, `v_𝔭(0) = 0`.
pub fn prime_valuation_mult(
    field: &QuadraticField,
    prime: &PrimeIdeal,
    x: &FieldElement,
) -> MultIntZero {
    prime_valuation_additive(field, prime, x).to_mult()
}

/// A finite place of ℚ or of a quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FinitePlace {
    Rational(Prime),
    Quadratic(QuadraticField, PrimeIdeal),
}

impl FinitePlace {
    pub fn rational(p: u64) -> Result<Self> {
        Prime::new(p).map(FinitePlace::Rational)
    }

    /// The `index`-th prime above `p` in `ℚ(√d)`, in canonical order.
    pub fn quadratic(d: i64, p: u64, index: usize) -> Result<Self> {
        let field = QuadraticField::new(d)?;
        let factors = factor_rational_prime(&field, p)?;
        let (prime, _) = factors.into_iter().nth(index).ok_or_else(|| {
            Error::BadPlace(format!("d:{},p:{},i:{}: no such prime factor", d, p, index))
        })?;
        Ok(FinitePlace::Quadratic(field, prime))
    }

    pub fn field(&self) -> NumberField {
        match self {
            FinitePlace::Rational(_) => NumberField::Rational,
            FinitePlace::Quadratic(k, _) => NumberField::Quadratic(*k),
        }
    }

    pub fn prime(&self) -> Prime {
        match self {
            FinitePlace::Rational(p) => *p,
            FinitePlace::Quadratic(_, q) => q.p,
        }
    }

    pub fn e(&self) -> u8 {
        match self {
            FinitePlace::Rational(_) => 1,
            FinitePlace::Quadratic(_, q) => q.e,
        }
    }

    pub fn f(&self) -> u8 {
        match self {
            FinitePlace::Rational(_) => 1,
            FinitePlace::Quadratic(_, q) => q.f,
        }
    }

    /// Size of the residue field, `q = p^f`.
    pub fn residue_size(&self) -> BigInt {
        self.prime().pow(u32::from(self.f()))
    }

    /// Position among the primes above `p` in canonical order (0 over ℚ).
    pub fn index(&self) -> usize {
        match self {
            FinitePlace::Rational(_) => 0,
            FinitePlace::Quadratic(k, q) => factor_rational_prime(k, q.p.get())
                .expect("prime checked at construction")
                .iter()
                .position(|(other, _)| other == q)
                .expect("prime ideal is a factor of its own p"),
        }
    }

    /// `a_v(x)`. Panics if `x` does not belong to the place's field.
    pub fn valuation(&self, x: &FieldElement) -> AdditiveValue {
        match self {
            FinitePlace::Rational(p) => {
                assert!(x.b.is_zero(), "element of a quadratic field at a place of Q");
                valuations::additive(*p, &x.a)
            }
            FinitePlace::Quadratic(k, q) => prime_valuation_additive(k, q, x),
        }
    }

    pub fn mult_valuation(&self, x: &FieldElement) -> MultIntZero {
        self.valuation(x).to_mult()
    }

    pub fn is_integral(&self, x: &FieldElement) -> bool {
        self.valuation(x) >= AdditiveValue::Finite(0)
    }

    /// HNF of `𝔭^n`; over ℚ the "lattice" `p^n ℤ ⊕ ℤω`, which reduces the
    /// `a` coordinate only.
    pub fn power_hnf(&self, n: u32) -> Hnf {
        match self {
            FinitePlace::Rational(p) => Hnf {
                a: p.pow(n),
                c: BigInt::zero(),
                d: BigInt::one(),
            },
            FinitePlace::Quadratic(k, q) => q.hnf.pow(n, k),
        }
    }

    /// Canonical representative of `x mod 𝔪^n` for `x` with `a_v(x) >= 0`:
    /// the HNF-reduced element of `𝒪_K` congruent to `x` modulo `𝔭^n`.
    pub fn reduce(&self, x: &FieldElement, n: u32) -> Result<FieldElement> {
        if !self.is_integral(x) {
            return Err(Error::NotIntegral);
        }
        if x.is_zero() || n == 0 {
            return Ok(FieldElement::zero());
        }
        let p = self.prime();
        let modulus = p.pow(n);
        let m = x.denominator();
        let k = int_valuation(p, &m) as u32;
        let p_k = p.pow(k);
        let m_unit = &m / &p_k;
        let m_inv = mod_inverse(&m_unit, &modulus).expect("unit part of denominator is prime to p");
        let y = x.scale(&Rat::from_integer(m.clone()));
        let (ya, yb) = y.int_coords();
        match self {
            FinitePlace::Rational(_) => {
                let z = ya / &p_k;
                Ok(FieldElement::from_int((z * m_inv).mod_floor(&modulus)))
            }
            FinitePlace::Quadratic(field, q) if q.e == 1 && q.f == 1 => {
                // 𝒪_K/𝔭^j ≅ ℤ/p^j with ω ↦ -C, read off the HNF of 𝔭^j.
                let deep = q.hnf.pow(n + k, field);
                let omega_image = -deep.c.clone();
                let z = ya + yb * omega_image;
                let z = z.mod_floor(&deep.a);
                debug_assert!((&z % &p_k).is_zero());
                Ok(FieldElement::from_int(((z / &p_k) * m_inv).mod_floor(&modulus)))
            }
            FinitePlace::Quadratic(field, q) => {
                // one prime above p, so y ∈ 𝔭^{e·k} = p^k 𝒪_K
                debug_assert!((&ya % &p_k).is_zero() && (&yb % &p_k).is_zero());
                let (za, zb) = (ya / &p_k * &m_inv, yb / &p_k * &m_inv);
                let (ra, rb) = q.hnf.pow(n, field).reduce_coords(&za, &zb);
                Ok(FieldElement::from_ints(ra, rb))
            }
        }
    }

    /// Canonical uniformizer: `p` when unramified, otherwise the first element of
    /// `𝔭 \ 𝔭²` among small combinations of the HNF basis.
    pub fn uniformizer(&self) -> FieldElement {
        match self {
            FinitePlace::Quadratic(field, q) if q.e == 2 => {
                let [g1, g2] = q.hnf.basis();
                let k = NumberField::Quadratic(*field);
                let mut candidates = Vec::new();
                for i in -3i64..=3 {
                    for j in -3i64..=3 {
                        candidates.push((i.abs() + j.abs(), -j, i));
                    }
                }
                candidates.sort_unstable();
                for (_, neg_j, i) in candidates {
                    let x = k.add(
                        &g1.scale(&Rat::from_integer(i.into())),
                        &g2.scale(&Rat::from_integer((-neg_j).into())),
                    );
                    if prime_valuation_additive(field, q, &x) == AdditiveValue::Finite(1) {
                        return x;
                    }
                }
                unreachable!("some element of p + p*omega has valuation 1")
            }
            _ => FieldElement::from_int(self.prime().to_bigint()),
        }
    }

    /// Canonical residue representatives: `0..p` for `f = 1`, `a + b·ω` with
    /// `a, b ∈ [0, p)` (a varying fastest) for `f = 2`.
    pub fn residue_representatives(&self) -> Vec<FieldElement> {
        let p = self.prime().get();
        match self.f() {
            1 => (0..p).map(FieldElement::from_int).collect(),
            _ => (0..p)
                .flat_map(|b| (0..p).map(move |a| FieldElement::from_ints(a, b)))
                .collect(),
        }
    }
}

impl fmt::Display for FinitePlace {
    /// Place-spec grammar: `p:3` over ℚ, `d:-1,p:2,i:0` over `ℚ(√d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinitePlace::Rational(p) => write!(f, "p:{}", p),
            FinitePlace::Quadratic(k, q) => write!(f, "d:{},p:{},i:{}", k.d, q.p, self.index()),
        }
    }
}

/// An infinite place: a real embedding, or a conjugate pair of complex ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InfinitePlace {
    /// `√d ↦ +√d` or `√d ↦ -√d`; over ℚ the single place is `positive_root`.
    Real { positive_root: bool },
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex64 {
    pub re: f64,
    pub im: f64,
}

impl Complex64 {
    pub fn new(re: f64, im: f64) -> Self {
        Complex64 { re, im }
    }

    pub fn abs(&self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `σ(x) = α ± β` split into a rational part and a √disc part.
fn embedding_parts(k: &QuadraticField, x: &FieldElement) -> (f64, f64) {
    let (t, _) = k.omega_relation();
    let alpha = &x.a + &x.b * Rat::new(t.into(), 2.into());
    let disc = (t * t + 4 * k.omega_relation().1) as f64;
    let beta = to_f64(&x.b) * libm::sqrt(libm::fabs(disc)) / 2.0;
    (to_f64(&alpha), beta)
}

/// `σ(x)` as a complex number; real places have zero imaginary part.
pub fn infinite_embed(field: &NumberField, place: InfinitePlace, x: &FieldElement) -> Complex64 {
    match (field, place) {
        (NumberField::Rational, _) => Complex64::new(to_f64(&x.a), 0.0),
        (NumberField::Quadratic(k), InfinitePlace::Real { positive_root }) => {
            let (alpha, beta) = embedding_parts(k, x);
            let beta = if positive_root { beta } else { -beta };
            // α + β cancels when the signs differ; recover it as N(x) / (α - β)
            if alpha * beta >= 0.0 || alpha == beta {
                Complex64::new(alpha + beta, 0.0)
            } else {
                let norm = to_f64(&field.norm(x));
                Complex64::new(norm / (alpha - beta), 0.0)
            }
        }
        (NumberField::Quadratic(k), InfinitePlace::Complex) => {
            let (alpha, beta) = embedding_parts(k, x);
            Complex64::new(alpha, beta)
        }
    }
}

/// `|x|_σ = |σ(x)|`.
pub fn infinite_abs(field: &NumberField, place: InfinitePlace, x: &FieldElement) -> f64 {
    match (field, place) {
        (NumberField::Quadratic(_), InfinitePlace::Complex) => {
            libm::sqrt(to_f64(&field.norm(x)))
        }
        _ => libm::fabs(infinite_embed(field, place, x).re),
    }
}
