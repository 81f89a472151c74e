//! Seeded invariant suites, one per acceptance criterion.
//!
//! Each suite draws its samples from a ChaCha stream derived from the seed and
//! the suite number, and compares library results against oracles written
//! here from first principles (trial division, the Kronecker symbol, explicit
//! lattice enumeration) wherever the library result is not checkable on its
//! own.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use adelekit_core::adele::{
    adele_arith, is_finite_s_adele, sadele_split, sadele_unsplit, support, AdeleOp,
};
use adelekit_core::completion::{local_embed, to_finite_coeffs, uniformizer};
use adelekit_core::number_field::{factor_rational_prime, prime_valuation_additive, Hnf};
use adelekit_core::topology::{
    adelic_compact_nbhd, basic_open_membership, cert_contains, compact_nbhd_local, cover_integers,
    sadele_membership_two_ways, verify_cert_subset, verify_cover, Point,
};
use adelekit_core::valuations::{abs_from_valuation, archimedean_abs, axiom_check, product_formula};
use adelekit_core::{
    AdditiveValue, Ball, BasicOpen, FieldElement, FiniteAdele, FinitePlace, MultIntZero, NumberField, PlaceSet,
    QuadraticField, Rat, RationalPlace, ValuationKind,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Suite number and title, in order.
pub const SUITES: [(u8, &str); 12] = [
    (1, "valuation axioms"),
    (2, "bridge identity"),
    (3, "splitting table"),
    (4, "norm-valuation compatibility"),
    (5, "ball covers of O_v"),
    (6, "digit map injectivity"),
    (7, "local compact neighbourhoods"),
    (8, "S-adele topology agreement"),
    (9, "adelic compact neighbourhoods"),
    (10, "S-adele split roundtrip and ring laws"),
    (11, "monotone refinement"),
    (12, "product formula over Q (cross-check)"),
];

#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the default sample count of every randomized suite.
    pub samples: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub id: u8,
    pub name: &'static str,
    pub checked: u64,
    pub failure_count: u64,
    /// The first few failures, described.
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub time_limit: Option<Duration>,
    /// Extra context, such as how many random samples hit the interesting case.
    pub note: Option<String>,
}

impl SuiteOutcome {
    pub fn within_time(&self) -> bool {
        self.time_limit.is_none_or(|t| self.elapsed <= t)
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.checked > 0 && self.within_time()
    }

    pub fn line(&self) -> String {
        let limit = match self.time_limit {
            Some(t) => format!(", limit {}s", t.as_secs()),
            None => String::new(),
        };
        format!(
            "[{}] criterion {:>2} {}: {} checks, {} failures, {:.2}s{}{}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked,
            self.failure_count,
            self.elapsed.as_secs_f64(),
            limit,
            self.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
        )
    }
}

const KEPT_FAILURES: usize = 10;

#[derive(Default)]
struct Tally {
    checked: u64,
    failure_count: u64,
    failures: Vec<String>,
    note: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    fn bulk(&mut self, checked: u64, failures: impl Iterator<Item = String>) {
        self.checked += checked;
        for f in failures {
            self.failure_count += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(f);
            }
        }
    }

    fn error(&mut self, what: impl std::fmt::Display) {
        self.check(false, || format!("unexpected error: {what}"));
    }
}

pub fn run_suite(id: u8, cfg: &SuiteConfig) -> SuiteOutcome {
    let (_, name) = SUITES[usize::from(id) - 1];
    let start = Instant::now();
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ u64::from(id));
    let n = |default: usize| cfg.samples.unwrap_or(default);
    let time_limit = match id {
        1 => Some(Duration::from_secs(10)),
        5 => Some(Duration::from_secs(5)),
        _ => None,
    };
    match id {
        1 => valuation_axioms(&mut t, cfg.seed, n(10_000)),
        2 => bridge_identity(&mut t, cfg.seed, n(10_000)),
        3 => splitting_table(&mut t),
        4 => norm_compatibility(&mut t, &mut rng, n(1_000)),
        5 => ball_covers(&mut t),
        6 => digit_injectivity(&mut t),
        7 => local_neighbourhoods(&mut t, &mut rng, n(100)),
        8 => topology_agreement(&mut t, &mut rng, n(500)),
        9 => adelic_neighbourhoods(&mut t, &mut rng, n(100)),
        10 => split_and_ring_laws(&mut t, &mut rng, n(1_000)),
        11 => monotone_refinement(&mut t, &mut rng, n(1_000)),
        12 => product_formula_check(&mut t, &mut rng, n(10_000)),
        _ => panic!("no suite {id}"),
    }
    SuiteOutcome {
        id,
        name,
        checked: t.checked,
        failure_count: t.failure_count,
        failures: t.failures,
        elapsed: start.elapsed(),
        time_limit,
        note: t.note,
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteOutcome> {
    SUITES.iter().map(|&(id, _)| run_suite(id, cfg)).collect()
}

// ---------------------------------------------------------------- oracles

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Exponent of `p` in the integer `n != 0`, by repeated division.
fn brute_int_exponent(p: u64, n: &BigInt) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

fn brute_rat_exponent(p: u64, x: &Rat) -> i64 {
    brute_int_exponent(p, x.numer()) - brute_int_exponent(p, x.denom())
}

fn brute_prime_power(p: u64, e: i64) -> Rat {
    let mut acc = Rat::one();
    let base = Rat::from_integer(p.into());
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

fn brute_primes_below(n: u64) -> Vec<u64> {
    (2..n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

fn trial_division_primes(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs().to_u64().expect("small sample");
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Kronecker symbol `(D/p)` for a prime `p`.
fn kronecker(disc: i64, p: u64) -> i8 {
    if p == 2 {
        return match disc.rem_euclid(8) {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
    }
    let a = disc.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut acc = 1u64;
    for _ in 0..(p - 1) / 2 {
        acc = acc * a % p;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------- sampling

fn random_rational(rng: &mut impl Rng, bound: i64) -> Rat {
    rat(rng.random_range(-bound..=bound), rng.random_range(1..=bound))
}

/// The sample set shared by the axiom and bridge suites.
fn valuation_samples(seed: u64, p: u64, n: usize) -> Vec<Rat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 32));
    (0..n)
        .map(|_| {
            if rng.random_ratio(1, 64) {
                Rat::zero()
            } else {
                random_rational(&mut rng, 1_000_000)
            }
        })
        .collect()
}

fn random_element(rng: &mut impl Rng, field: NumberField, coeff: i64, den: i64) -> FieldElement {
    let d = rng.random_range(1..=den);
    let a = rat(rng.random_range(-coeff..=coeff), d);
    match field {
        NumberField::Rational => FieldElement::rational(a),
        NumberField::Quadratic(_) => FieldElement::new(a, rat(rng.random_range(-coeff..=coeff), d)),
    }
}

/// An element whose denominator is a random product of small primes.
fn random_smooth_element(rng: &mut impl Rng, field: NumberField) -> FieldElement {
    let mut den = 1i64;
    for _ in 0..rng.random_range(0..3) {
        den *= *[2i64, 3, 5, 7].choose(rng).unwrap();
    }
    let x = random_element(rng, field, 40, 1);
    x.scale(&rat(1, den))
}

fn places_over(field: NumberField, primes: &[u64]) -> Vec<FinitePlace> {
    let mut out = Vec::new();
    for &p in primes {
        match field {
            NumberField::Rational => out.push(FinitePlace::rational(p).unwrap()),
            NumberField::Quadratic(k) => out.extend(
                factor_rational_prime(&k, p)
                    .unwrap()
                    .into_iter()
                    .map(|(q, _)| FinitePlace::Quadratic(k, q)),
            ),
        }
    }
    out
}

fn gaussian() -> NumberField {
    NumberField::quadratic(-1).unwrap()
}

/// Places spread over ℚ and four quadratic fields, all splitting types.
fn local_place_pool() -> Vec<FinitePlace> {
    let mut pool = places_over(NumberField::Rational, &[2, 3, 5, 7]);
    pool.extend(places_over(gaussian(), &[2, 3, 5]));
    pool.extend(places_over(NumberField::quadratic(-3).unwrap(), &[2, 3, 7]));
    pool.extend(places_over(NumberField::quadratic(2).unwrap(), &[2, 7]));
    pool.extend(places_over(NumberField::quadratic(5).unwrap(), &[5, 11]));
    pool
}

fn random_adele(rng: &mut impl Rng, field: NumberField, pool: &[FinitePlace]) -> FiniteAdele {
    let global = random_smooth_element(rng, field);
    let mut corrections = BTreeMap::new();
    for _ in 0..rng.random_range(0..3) {
        let v = pool.choose(rng).unwrap().clone();
        corrections.insert(v, random_smooth_element(rng, field));
    }
    FiniteAdele::new(field, global, corrections).expect("same field")
}

fn random_subset(rng: &mut impl Rng, pool: &[FinitePlace], max: usize) -> PlaceSet {
    let k = rng.random_range(0..=max);
    pool.choose_multiple(rng, k).cloned().collect()
}

/// A ball at `v` about a point near `x_v`, or about an unrelated point.
fn random_ball(rng: &mut impl Rng, v: &FinitePlace, near: &FieldElement) -> Ball {
    let k = v.field();
    let center = if rng.random_bool(0.5) {
        let shift = FieldElement::from_int(v.prime().pow(rng.random_range(0..3)) * rng.random_range(-3i64..=3));
        k.add(near, &shift)
    } else {
        random_smooth_element(rng, k)
    };
    Ball::new(v.clone(), center, MultIntZero::of_add(rng.random_range(-2i64..=2))).unwrap()
}

fn random_open(rng: &mut impl Rng, x: &FiniteAdele, pool: &[FinitePlace]) -> BasicOpen {
    let mut opens = BTreeMap::new();
    for v in random_subset(rng, pool, 3) {
        let near = x.component_exact(&v);
        let balls = (0..rng.random_range(1..=3)).map(|_| random_ball(rng, &v, &near)).collect();
        opens.insert(v, balls);
    }
    BasicOpen::new(x.field(), opens).unwrap()
}

// ---------------------------------------------------------------- suites

const AXIOM_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn valuation_axioms(t: &mut Tally, seed: u64, n: usize) {
    for p in AXIOM_PRIMES {
        let xs = valuation_samples(seed, p, n);
        let pairs: Vec<(Rat, Rat)> = (0..n).map(|i| (xs[i].clone(), xs[(i + 1) % n].clone())).collect();
        let place = RationalPlace::finite(p).unwrap();
        for kind in [
            ValuationKind::AbsoluteValue,
            ValuationKind::AdditiveValuation,
            ValuationKind::MultValuation,
        ] {
            match axiom_check(kind, place, &pairs) {
                Ok(report) => t.bulk(
                    (report.clauses.len() * report.samples) as u64,
                    report
                        .failures
                        .iter()
                        .map(|f| format!("{} at p={p}: {} fails on ({}, {})", kind.name(), f.clause, f.x, f.y)),
                ),
                Err(e) => t.error(e),
            }
        }
    }
}

fn bridge_identity(t: &mut Tally, seed: u64, n: usize) {
    for p in AXIOM_PRIMES {
        let base = Rat::from_integer(p.into());
        for x in valuation_samples(seed, p, n) {
            let expected = if x.is_zero() {
                Rat::zero()
            } else {
                brute_prime_power(p, -brute_rat_exponent(p, &x))
            };
            match abs_from_valuation(p, &base, &x) {
                Ok(got) => t.check(got == expected, || format!("p={p}, x={x}: got {got}, want {expected}")),
                Err(e) => t.error(e),
            }
        }
    }
}

fn splitting_table(t: &mut Tally) {
    for d in [-1i64, -3, 2, 5] {
        let k = QuadraticField::new(d).unwrap();
        for p in brute_primes_below(100) {
            let factors = match factor_rational_prime(&k, p) {
                Ok(f) => f,
                Err(e) => {
                    t.error(e);
                    continue;
                }
            };
            let ef: u32 = factors.iter().map(|(q, _)| u32::from(q.e()) * u32::from(q.f())).sum();
            t.check(ef == 2, || format!("d={d}, p={p}: sum e*f = {ef}"));

            let product = factors
                .iter()
                .fold(Hnf::unit(), |acc, (q, _)| acc.mul(&q.hnf().pow(u32::from(q.e()), &k), &k));
            let principal = Hnf::ideal_from_generators(&k, &[FieldElement::from_int(p)]);
            t.check(product == principal, || format!("d={d}, p={p}: product {product:?} != {principal:?}"));

            let kind = match factors.as_slice() {
                [_, _] => 1,
                [(q, _)] if q.e() == 2 => 0,
                [(q, _)] if q.f() == 2 => -1,
                _ => 9,
            };
            let symbol = kronecker(k.discriminant(), p);
            t.check(kind == symbol, || format!("d={d}, p={p}: factorization type {kind}, Kronecker symbol {symbol}"));
        }
    }
}

fn norm_compatibility(t: &mut Tally, rng: &mut impl Rng, n: usize) {
    for d in [-1i64, -3, 2, 5] {
        let k = QuadraticField::new(d).unwrap();
        let field = NumberField::Quadratic(k);
        let mut done = 0;
        while done < n {
            let x = random_element(rng, field, 1000, 1);
            if x.is_zero() {
                continue;
            }
            done += 1;
            let norm = field.norm(&x).to_integer();
            let mut primes: BTreeSet<u64> = trial_division_primes(&norm).into_iter().collect();
            primes.extend([2, 3, 5, 7]);
            for p in primes {
                let lhs = brute_int_exponent(p, &norm);
                let rhs: i64 = factor_rational_prime(&k, p)
                    .unwrap()
                    .iter()
                    .map(|(q, _)| match prime_valuation_additive(&k, q, &x) {
                        AdditiveValue::Finite(a) => i64::from(q.f()) * a,
                        AdditiveValue::Infinite => i64::MIN,
                    })
                    .sum();
                t.check(lhs == rhs, || format!("d={d}, x={x}, p={p}: a_p(N) = {lhs}, sum f*a = {rhs}"));
            }
        }
    }
}

fn ball_covers(t: &mut Tally) {
    let mut places = places_over(NumberField::Rational, &[2, 3, 5]);
    places.push(FinitePlace::quadratic(-1, 3, 0).unwrap());
    for v in &places {
        let q = v.residue_size().to_u64().unwrap();
        for g in -3i64..=2 {
            let gamma = MultIntZero::of_add(g);
            let centers = match cover_integers(v, &gamma) {
                Ok(c) => c,
                Err(e) => {
                    t.error(e);
                    continue;
                }
            };
            let expected = if g >= 1 { 1 } else { q.pow((1 - g) as u32) };
            t.check(centers.len() as u64 == expected, || {
                format!("{v}, gamma={gamma}: {} centers, want {expected}", centers.len())
            });
            match verify_cover(v, &gamma, &centers) {
                Ok(ok) => t.check(ok, || format!("{v}, gamma={gamma}: cover rejected")),
                Err(e) => t.error(e),
            }
        }
    }
}

/// Representatives `a + b·w`, `0 <= a < A`, `0 <= b < D`, of `𝒪_K/𝔭^n` from
/// the HNF `{A, C + D·w}` of `𝔭^n`.
fn hnf_classes(v: &FinitePlace, n: u32) -> Vec<FieldElement> {
    let hnf = v.power_hnf(n);
    let (a, _, d) = hnf.parts();
    let a = a.to_u64().unwrap();
    let d = match v.field() {
        NumberField::Rational => 1,
        NumberField::Quadratic(_) => d.to_u64().unwrap(),
    };
    (0..d).flat_map(|j| (0..a).map(move |i| FieldElement::from_ints(i, j))).collect()
}

fn digit_injectivity(t: &mut Tally) {
    let two = FinitePlace::rational(2).unwrap();
    let three = FinitePlace::rational(3).unwrap();
    let inert = FinitePlace::quadratic(-1, 3, 0).unwrap();
    let cases = [(two, 4u32), (three, 3), (inert, 2)];
    for (v, max_n) in cases {
        let pi = uniformizer(&v);
        let q = v.residue_size().to_u64().unwrap();
        for n in 1..=max_n {
            let classes = hnf_classes(&v, n);
            let mut images = BTreeSet::new();
            for r in &classes {
                let x = match local_embed(&v, r, i64::from(n)) {
                    Ok(x) => x,
                    Err(e) => {
                        t.error(e);
                        continue;
                    }
                };
                match to_finite_coeffs(&x, n, &pi) {
                    Ok(digits) => {
                        let fresh = images.insert(digits);
                        t.check(fresh, || format!("{v}, n={n}: class of {r} collides"));
                    }
                    Err(e) => t.error(e),
                }
            }
            let want = q.pow(n);
            t.check(classes.len() as u64 == want && images.len() as u64 == want, || {
                format!("{v}, n={n}: {} classes, {} images, want {want}", classes.len(), images.len())
            });
        }
    }
}

fn local_neighbourhoods(t: &mut Tally, rng: &mut impl Rng, n: usize) {
    let pool = local_place_pool();
    for _ in 0..n {
        let v = pool.choose(rng).unwrap();
        let x = random_element(rng, v.field(), 60, 30);
        let gamma = MultIntZero::of_add(rng.random_range(-3i64..=3));
        let cert = match compact_nbhd_local(v, &x, &gamma) {
            Ok(c) => c,
            Err(e) => {
                t.error(e);
                continue;
            }
        };
        let target = Ball::new(v.clone(), x.clone(), gamma.clone()).unwrap();
        let u = BasicOpen::new(v.field(), [(v.clone(), vec![target])].into()).unwrap();
        let contains = cert_contains(&cert, Point::Local(v, &x));
        let subset = verify_cert_subset(&cert, &u);
        match (contains, subset) {
            (Ok(c), Ok(s)) => t.check(c && s, || format!("{v}, x={x}, gamma={gamma}: contains={c}, subset={s}")),
            (Err(e), _) | (_, Err(e)) => t.error(e),
        }
    }
}

fn topology_agreement(t: &mut Tally, rng: &mut impl Rng, n: usize) {
    let fields = [
        (NumberField::Rational, places_over(NumberField::Rational, &[2, 3, 5, 7])),
        (gaussian(), places_over(gaussian(), &[2, 3, 5])),
    ];
    let mut inside = 0u64;
    for i in 0..n {
        let (field, pool) = &fields[i % 2];
        let x = random_adele(rng, *field, pool);
        let mut s = support(&x);
        s.extend(random_subset(rng, pool, 2));
        let u = random_open(rng, &x, pool);
        match sadele_membership_two_ways(&s, &x, &u) {
            Ok((a, b)) => {
                inside += u64::from(a);
                t.check(a == b, || format!("x={x:?}: routes disagree ({a} vs {b})"));
            }
            Err(e) => t.error(e),
        }
    }
    t.note = Some(format!("{inside} of {n} samples inside U"));
}

/// A basic open containing `x`: a ball about a point congruent to `x_v` at
/// each place of `I ⊇ support(x)`, plus decoys.
fn open_containing(rng: &mut impl Rng, x: &FiniteAdele, pool: &[FinitePlace]) -> BasicOpen {
    let k = x.field();
    let mut places = support(x);
    places.extend(random_subset(rng, pool, 2));
    let mut opens = BTreeMap::new();
    for v in places {
        let comp = x.component_exact(&v);
        let g = rng.random_range(-2i64..=2);
        let depth = (1 - g).max(0) as u32;
        let shift = FieldElement::from_int(v.prime().pow(depth) * rng.random_range(-4i64..=4));
        let mut balls = vec![Ball::new(v.clone(), k.add(&comp, &shift), MultIntZero::of_add(g)).unwrap()];
        for _ in 0..rng.random_range(0..2) {
            balls.push(random_ball(rng, &v, &comp));
        }
        let at = rng.random_range(0..balls.len());
        balls.swap(0, at);
        opens.insert(v, balls);
    }
    BasicOpen::new(k, opens).unwrap()
}

fn adelic_neighbourhoods(t: &mut Tally, rng: &mut impl Rng, n: usize) {
    let fields = [
        (NumberField::Rational, places_over(NumberField::Rational, &[2, 3, 5, 7])),
        (gaussian(), places_over(gaussian(), &[2, 3, 5])),
    ];
    for i in 0..n {
        let (field, pool) = &fields[i % 2];
        let x = random_adele(rng, *field, pool);
        let u = open_containing(rng, &x, pool);
        match basic_open_membership(&x, &u) {
            Ok(true) => {}
            Ok(false) => {
                t.check(false, || format!("sampler produced an open without x = {x:?}"));
                continue;
            }
            Err(e) => {
                t.error(e);
                continue;
            }
        }
        let m = match adelic_compact_nbhd(&x, &u) {
            Ok(m) => m,
            Err(e) => {
                t.error(e);
                continue;
            }
        };
        match (cert_contains(&m, Point::Adele(&x)), verify_cert_subset(&m, &u)) {
            (Ok(c), Ok(s)) => t.check(c && s, || format!("x={x:?}: contains={c}, subset={s}")),
            (Err(e), _) | (_, Err(e)) => t.error(e),
        }
    }
}

fn split_and_ring_laws(t: &mut Tally, rng: &mut impl Rng, n: usize) {
    let fields = [
        (NumberField::Rational, places_over(NumberField::Rational, &[2, 3, 5, 7])),
        (gaussian(), places_over(gaussian(), &[2, 3, 5])),
    ];
    for i in 0..n {
        let (field, pool) = &fields[i % 2];
        let x = random_adele(rng, *field, pool);
        let mut s = support(&x);
        s.extend(random_subset(rng, pool, 2));
        t.check(is_finite_s_adele(&s, &x), || format!("x={x:?} is not an S-adele for its own support"));
        match sadele_split(&s, &x).and_then(|parts| Ok((sadele_unsplit(&s, &parts)?, parts))) {
            Ok((back, parts)) => {
                t.check(back == x, || format!("unsplit(split(x)) != x for x={x:?}"));
                let again = sadele_split(&s, &back);
                t.check(again.as_ref() == Ok(&parts), || format!("split(unsplit(parts)) != parts for x={x:?}"));
            }
            Err(e) => t.error(e),
        }
    }
    for i in 0..n {
        let (field, pool) = &fields[i % 2];
        let k = *field;
        let (a, b) = (random_smooth_element(rng, k), random_smooth_element(rng, k));
        let (da, db) = (FiniteAdele::diagonal(k, a.clone()), FiniteAdele::diagonal(k, b.clone()));
        let sum = adele_arith(AdeleOp::Add, &da, &db);
        t.check(sum == Ok(FiniteAdele::diagonal(k, k.add(&a, &b))), || format!("diag({a}) + diag({b})"));
        let prod = adele_arith(AdeleOp::Mul, &da, &db);
        t.check(prod == Ok(FiniteAdele::diagonal(k, k.mul(&a, &b))), || format!("diag({a}) * diag({b})"));

        let (x, y) = (random_adele(rng, k, pool), random_adele(rng, k, pool));
        let bound: PlaceSet = support(&x).union(&support(&y)).cloned().collect();
        for op in [AdeleOp::Add, AdeleOp::Mul] {
            match adele_arith(op, &x, &y) {
                Ok(z) => {
                    let sz = support(&z);
                    t.check(sz.is_subset(&bound), || format!("{op:?}: support grew for {x:?}, {y:?}"));
                    let probe: Vec<&FinitePlace> = pool.iter().collect();
                    let exact = probe.iter().all(|v| {
                        let c = match op {
                            AdeleOp::Add => k.add(&x.component_exact(v), &y.component_exact(v)),
                            _ => k.mul(&x.component_exact(v), &y.component_exact(v)),
                        };
                        z.component_exact(v) == c
                    });
                    t.check(exact, || format!("{op:?} is not componentwise for {x:?}, {y:?}"));
                }
                Err(e) => t.error(e),
            }
        }
    }
}

fn monotone_refinement(t: &mut Tally, rng: &mut impl Rng, n: usize) {
    let pool = local_place_pool();
    let mut done = 0;
    while done < n {
        let v = pool.choose(rng).unwrap();
        let x = random_element(rng, v.field(), 200, 50);
        let val = match v.valuation(&x) {
            AdditiveValue::Finite(a) => a,
            AdditiveValue::Infinite => continue,
        };
        done += 1;
        let lo = val + rng.random_range(1..=6);
        let hi = lo + rng.random_range(1..=6);
        match (local_embed(v, &x, lo), local_embed(v, &x, hi)) {
            (Ok(a), Ok(b)) => t.check(
                a.val() == b.val() && b.digits().starts_with(a.digits()),
                || format!("{v}, x={x}: N={lo} gives {a}, N'={hi} gives {b}"),
            ),
            (Err(e), _) | (_, Err(e)) => t.error(e),
        }
    }
}

fn product_formula_check(t: &mut Tally, rng: &mut impl Rng, n: usize) {
    let mut done = 0;
    while done < n {
        let x = random_rational(rng, 1_000_000);
        if x.is_zero() {
            continue;
        }
        done += 1;
        let mut primes: BTreeSet<u64> = trial_division_primes(x.numer()).into_iter().collect();
        primes.extend(trial_division_primes(x.denom()));
        let mut acc = archimedean_abs(&x);
        for &p in &primes {
            let base = Rat::from_integer(p.into());
            match abs_from_valuation(p, &base, &x) {
                Ok(a) => acc *= a,
                Err(e) => t.error(e),
            }
        }
        t.check(acc.is_one(), || format!("x={x}: product {acc}"));
        let lib = product_formula(&x);
        t.check(lib.is_one(), || format!("x={x}: library product {lib}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_matches_tables() {
        // (-4/p): 1 for p = 1 mod 4, -1 for p = 3 mod 4, 0 at 2
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 7), -1);
        // (5/2) = -1, (5/11) = 1, (8/7) = 1, (8/3) = -1, (-3/2) = -1, (-3/7) = 1
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(5, 11), 1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-3, 7), 1);
    }

    #[test]
    fn brute_helpers() {
        assert_eq!(brute_rat_exponent(3, &rat(18, 5)), 2);
        assert_eq!(brute_rat_exponent(5, &rat(18, 25)), -2);
        assert_eq!(brute_prime_power(2, -3), rat(1, 8));
        assert_eq!(trial_division_primes(&BigInt::from(-360)), [2, 3, 5]);
        assert_eq!(brute_primes_below(20), [2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn suites_pass_on_small_samples() {
        let cfg = SuiteConfig { seed: 7, samples: Some(20) };
        for (id, _) in SUITES {
            let out = run_suite(id, &cfg);
            assert!(out.failure_count == 0 && out.checked > 0, "{}\n{:?}", out.line(), out.failures);
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let cfg = SuiteConfig { seed: 3, samples: Some(15) };
        for id in [4, 8, 10] {
            assert_eq!(run_suite(id, &cfg).checked, run_suite(id, &cfg).checked);
        }
    }
}
