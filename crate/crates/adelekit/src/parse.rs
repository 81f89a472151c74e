//! Text forms of field elements and places.
//!
//! ```text
//! element  = term [ ("+" | "-") term ]
//! term     = ["-"] rational [ "w" ] | ["-"] "w"
//! rational = digits [ "/" digits ]
//! place    = "p:" prime | "d:" int ",p:" prime ",i:" index
//!          | "inf" | "d:" int ",inf:" index
//! ```
//!
//! Whitespace inside an element is ignored, so `1/2+3 w` and `1/2+3w` agree.

use adelekit_core::{FieldElement, FinitePlace, InfinitePlace, NumberField, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(pub String);

impl ParseError {
    fn new(msg: impl Into<String>) -> Self {
        ParseError(msg.into())
    }
}

pub type ParseResult<T> = std::result::Result<T, ParseError>;

fn parse_rational(s: &str) -> ParseResult<Rat> {
    let bad = || ParseError::new(format!("malformed rational `{s}`"));
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|c| c.is_ascii_digit());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if !digits(num) || !digits(den) {
        return Err(bad());
    }
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ParseError::new(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(num.parse().map_err(|_| bad())?, den))
}

/// A signed term: `(coefficient, is_omega_term)`.
fn parse_term(s: &str, negative: bool) -> ParseResult<(Rat, bool)> {
    let (body, omega) = match s.strip_suffix('w') {
        Some(b) => (b, true),
        None => (s, false),
    };
    let value = if omega && body.is_empty() {
        Rat::one()
    } else {
        parse_rational(body)?
    };
    Ok((if negative { -value } else { value }, omega))
}

/// Parses an element of some `ℚ(√d)` in the basis `{1, w}`.
pub fn parse_element(text: &str) -> ParseResult<FieldElement> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(ParseError::new("empty element"));
    }
    let (first_neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.as_str()),
    };
    let split = rest.find(['+', '-']);
    let mut terms = vec![(rest, first_neg)];
    if let Some(i) = split {
        let (a, b) = rest.split_at(i);
        terms = vec![(a, first_neg), (&b[1..], b.starts_with('-'))];
    }
    let mut out = FieldElement::zero();
    let mut seen = [false, false];
    for (t, neg) in terms {
        let (value, omega) = parse_term(t, neg).map_err(|_| ParseError::new(format!("malformed element `{text}`")))?;
        let slot = usize::from(omega);
        if seen[slot] {
            return Err(ParseError::new(format!("malformed element `{text}`")));
        }
        seen[slot] = true;
        if omega {
            out.b = value;
        } else {
            out.a = value;
        }
    }
    Ok(out)
}

/// Parses an element and checks that it belongs to `field`.
pub fn parse_element_in(text: &str, field: NumberField) -> ParseResult<FieldElement> {
    let x = parse_element(text)?;
    if field.contains(&x) {
        Ok(x)
    } else {
        Err(ParseError::new(format!("`{text}` is not an element of the rationals")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaceSpec {
    Finite(FinitePlace),
    Infinite(NumberField, InfinitePlace),
}

impl PlaceSpec {
    pub fn field(&self) -> NumberField {
        match self {
            PlaceSpec::Finite(v) => v.field(),
            PlaceSpec::Infinite(k, _) => *k,
        }
    }
}

impl std::fmt::Display for PlaceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlaceSpec::Finite(v) => write!(f, "{v}"),
            PlaceSpec::Infinite(NumberField::Rational, _) => f.write_str("inf"),
            PlaceSpec::Infinite(k @ NumberField::Quadratic(q), s) => {
                let i = k.infinite_places().iter().position(|t| t == s).unwrap_or(0);
                write!(f, "d:{},inf:{}", q.d(), i)
            }
        }
    }
}

fn key_value<'a>(part: &'a str, key: &str, spec: &str) -> ParseResult<&'a str> {
    part.strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| ParseError::new(format!("malformed place `{spec}`: expected `{key}:`")))
}

fn number<T: std::str::FromStr>(s: &str, spec: &str) -> ParseResult<T> {
    s.parse().map_err(|_| ParseError::new(format!("malformed place `{spec}`")))
}

pub fn parse_place_spec(spec: &str) -> ParseResult<PlaceSpec> {
    let parts: Vec<&str> = spec.trim().split(',').map(str::trim).collect();
    let domain = |e: adelekit_core::Error| ParseError::new(format!("bad place `{spec}`: {e}"));
    match parts.as_slice() {
        ["inf"] => Ok(PlaceSpec::Infinite(
            NumberField::Rational,
            InfinitePlace::Real { positive_root: true },
        )),
        [p] => {
            let p = number(key_value(p, "p", spec)?, spec)?;
            FinitePlace::rational(p).map(PlaceSpec::Finite).map_err(domain)
        }
        [d, rest @ ..] if rest.len() == 1 && rest[0].starts_with("inf") => {
            let field = NumberField::quadratic(number(key_value(d, "d", spec)?, spec)?).map_err(domain)?;
            let i: usize = number(key_value(rest[0], "inf", spec)?, spec)?;
            let place = *field
                .infinite_places()
                .get(i)
                .ok_or_else(|| ParseError::new(format!("bad place `{spec}`: no infinite place {i}")))?;
            Ok(PlaceSpec::Infinite(field, place))
        }
        [d, p, i] => {
            let d = number(key_value(d, "d", spec)?, spec)?;
            let p = number(key_value(p, "p", spec)?, spec)?;
            let i = number(key_value(i, "i", spec)?, spec)?;
            FinitePlace::quadratic(d, p, i).map(PlaceSpec::Finite).map_err(domain)
        }
        _ => Err(ParseError::new(format!("malformed place `{spec}`"))),
    }
}

pub fn parse_finite_place(spec: &str) -> ParseResult<FinitePlace> {
    match parse_place_spec(spec)? {
        PlaceSpec::Finite(v) => Ok(v),
        PlaceSpec::Infinite(..) => Err(ParseError::new(format!("`{spec}` is not a finite place"))),
    }
}
