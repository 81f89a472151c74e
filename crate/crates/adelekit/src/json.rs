//! JSON forms of the library's values. Every `*_to_json` has a matching
//! `*_from_json` that rebuilds an equal value.

use std::collections::BTreeMap;

use adelekit_core::adele::support;
use adelekit_core::topology::ScaledIntegerBall;
use adelekit_core::{
    Ball, BasicOpen, CompactCert, FieldElement, FiniteAdele, FinitePlace, LocalElement, MultIntZero, NumberField,
    PrimeIdeal, ResidueElement,
};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::parse::{parse_element_in, parse_finite_place, ParseError, ParseResult};

fn err(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

fn field_of(v: &Value, key: &str) -> ParseResult<Value> {
    v.get(key).cloned().ok_or_else(|| err(format!("missing key `{key}`")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> ParseResult<&'a str> {
    v.as_str().ok_or_else(|| err(format!("`{what}` must be a string")))
}

fn as_i64(v: &Value, what: &str) -> ParseResult<i64> {
    v.as_i64().ok_or_else(|| err(format!("`{what}` must be an integer")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> ParseResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(format!("`{what}` must be an object")))
}

/// A big integer as a JSON number when it fits `i64`, else as a decimal string.
pub fn bigint_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(k) => json!(k),
        None => json!(n.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> ParseResult<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| err(format!("`{n}` is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| err(format!("`{s}` is not an integer"))),
        _ => Err(err("expected an integer")),
    }
}

pub fn mult_to_json(g: &MultIntZero) -> Value {
    match g {
        MultIntZero::Zero => json!({ "zero": true }),
        MultIntZero::OfAdd(n) => json!({ "exp": bigint_to_json(n) }),
    }
}

pub fn mult_from_json(v: &Value) -> ParseResult<MultIntZero> {
    let obj = as_object(v, "value-group element")?;
    match (obj.get("zero"), obj.get("exp")) {
        (Some(Value::Bool(true)), None) => Ok(MultIntZero::Zero),
        (None, Some(n)) => Ok(MultIntZero::OfAdd(bigint_from_json(n)?)),
        _ => Err(err("value-group element must be {\"zero\":true} or {\"exp\":n}")),
    }
}

fn field_to_json(k: NumberField, obj: &mut Map<String, Value>) {
    if let NumberField::Quadratic(q) = k {
        obj.insert("d".into(), json!(q.d()));
    }
}

/// The field named by an optional `"d"` key, else by the first place key in
/// `places`, else ℚ.
fn field_from_json<'a>(v: &Value, mut places: impl Iterator<Item = &'a String>) -> ParseResult<NumberField> {
    if let Some(d) = v.get("d") {
        let d = as_i64(d, "d")?;
        return NumberField::quadratic(d).map_err(|e| err(e.to_string()));
    }
    match places.next() {
        Some(spec) => Ok(parse_finite_place(spec)?.field()),
        None => Ok(NumberField::Rational),
    }
}

fn place_in(spec: &str, field: NumberField) -> ParseResult<FinitePlace> {
    let v = parse_finite_place(spec)?;
    if v.field() != field {
        return Err(err(format!("place `{spec}` is over a different field")));
    }
    Ok(v)
}

fn residue_to_json(r: &ResidueElement) -> Value {
    match r.coords() {
        [a] => json!(a),
        coords => json!(coords),
    }
}

fn residue_from_json(v: &Value, f: u8) -> ParseResult<ResidueElement> {
    let coords = match (v, f) {
        (Value::Number(n), 1) => vec![n.as_u64().ok_or_else(|| err("digit must be a nonnegative integer"))?],
        (Value::Array(items), 2) if items.len() == 2 => items
            .iter()
            .map(|i| i.as_u64().ok_or_else(|| err("digit must be a nonnegative integer")))
            .collect::<ParseResult<_>>()?,
        _ => return Err(err("digit does not match the residue degree")),
    };
    Ok(ResidueElement::new(coords))
}

/// `{"place", "val", "digits", "prec"}`; an exact zero carries
/// `"val": null, "digits": [], "exact_zero": true` and no precision.
pub fn local_to_json(x: &LocalElement) -> Value {
    match x {
        LocalElement::ExactZero { place } => json!({
            "place": place.to_string(),
            "val": null,
            "digits": [],
            "prec": null,
            "exact_zero": true,
        }),
        LocalElement::Expansion {
            place,
            val,
            digits,
            prec,
        } => json!({
            "place": place.to_string(),
            "val": val,
            "digits": digits.iter().map(residue_to_json).collect::<Vec<_>>(),
            "prec": prec,
        }),
    }
}

pub fn local_from_json(v: &Value) -> ParseResult<LocalElement> {
    let place = parse_finite_place(as_str(&field_of(v, "place")?, "place")?)?;
    if v.get("exact_zero") == Some(&Value::Bool(true)) {
        return Ok(LocalElement::ExactZero { place });
    }
    let val = as_i64(&field_of(v, "val")?, "val")?;
    let prec = as_i64(&field_of(v, "prec")?, "prec")?;
    let digits = field_of(v, "digits")?
        .as_array()
        .ok_or_else(|| err("`digits` must be an array"))?
        .iter()
        .map(|d| residue_from_json(d, place.f()))
        .collect::<ParseResult<Vec<_>>>()?;
    if digits.len() as i64 != prec - val {
        return Err(err("digit count must equal prec - val"));
    }
    Ok(LocalElement::Expansion {
        place,
        val,
        digits,
        prec,
    })
}

/// `{"d"?, "global", "corrections": {place: element}}`.
pub fn adele_to_json(x: &FiniteAdele) -> Value {
    let mut obj = Map::new();
    field_to_json(x.field(), &mut obj);
    obj.insert("global".into(), json!(x.global().to_string()));
    let corr: Map<String, Value> = x
        .corrections()
        .iter()
        .map(|(v, c)| (v.to_string(), json!(c.to_string())))
        .collect();
    obj.insert("corrections".into(), Value::Object(corr));
    Value::Object(obj)
}

pub fn adele_from_json(v: &Value) -> ParseResult<FiniteAdele> {
    let empty = Map::new();
    let corr = match v.get("corrections") {
        Some(c) => as_object(c, "corrections")?,
        None => &empty,
    };
    let field = field_from_json(v, corr.keys())?;
    let global = parse_element_in(as_str(&field_of(v, "global")?, "global")?, field)?;
    let mut corrections = BTreeMap::new();
    for (spec, c) in corr {
        let place = place_in(spec, field)?;
        let c = parse_element_in(as_str(c, spec)?, field)?;
        corrections.insert(place, c);
    }
    FiniteAdele::new(field, global, corrections).map_err(|e| err(e.to_string()))
}

fn ball_to_json(b: &Ball) -> Value {
    json!({ "center": b.center().to_string(), "gamma": mult_to_json(b.radius()) })
}

/// `{"d"?, "opens": {place: [{"center", "gamma"}]}}`.
pub fn open_to_json(u: &BasicOpen) -> Value {
    let mut obj = Map::new();
    field_to_json(u.field(), &mut obj);
    let opens: Map<String, Value> = u
        .opens()
        .iter()
        .map(|(v, balls)| (v.to_string(), Value::Array(balls.iter().map(ball_to_json).collect())))
        .collect();
    obj.insert("opens".into(), Value::Object(opens));
    Value::Object(obj)
}

pub fn open_from_json(v: &Value) -> ParseResult<BasicOpen> {
    let opens_json = as_object(&field_of(v, "opens")?, "opens")?.clone();
    let field = field_from_json(v, opens_json.keys())?;
    let mut opens = BTreeMap::new();
    for (spec, balls) in &opens_json {
        let place = place_in(spec, field)?;
        let balls = balls
            .as_array()
            .ok_or_else(|| err(format!("balls at `{spec}` must be an array")))?
            .iter()
            .map(|b| {
                let center = parse_element_in(as_str(&field_of(b, "center")?, "center")?, field)?;
                let gamma = mult_from_json(&field_of(b, "gamma")?)?;
                Ball::new(place.clone(), center, gamma).map_err(|e| err(e.to_string()))
            })
            .collect::<ParseResult<Vec<_>>>()?;
        opens.insert(place, balls);
    }
    BasicOpen::new(field, opens).map_err(|e| err(e.to_string()))
}

pub fn cert_to_json(c: &CompactCert) -> Value {
    match c {
        CompactCert::Scaled(b) => json!({
            "kind": "scaled",
            "place": b.place.to_string(),
            "center": b.center.to_string(),
            "m": b.m,
        }),
        CompactCert::Product { field, blocks } => {
            let mut obj = Map::new();
            obj.insert("kind".into(), json!("product"));
            field_to_json(*field, &mut obj);
            obj.insert("T".into(), json!(blocks.keys().map(|v| v.to_string()).collect::<Vec<_>>()));
            let b: Map<String, Value> = blocks
                .iter()
                .map(|(v, b)| (v.to_string(), json!({ "center": b.center.to_string(), "m": b.m })))
                .collect();
            obj.insert("blocks".into(), Value::Object(b));
            Value::Object(obj)
        }
    }
}

pub fn cert_from_json(v: &Value) -> ParseResult<CompactCert> {
    match as_str(&field_of(v, "kind")?, "kind")? {
        "scaled" => {
            let place = parse_finite_place(as_str(&field_of(v, "place")?, "place")?)?;
            let center = parse_element_in(as_str(&field_of(v, "center")?, "center")?, place.field())?;
            let m = as_i64(&field_of(v, "m")?, "m")?;
            Ok(CompactCert::Scaled(ScaledIntegerBall { place, center, m }))
        }
        "product" => {
            let blocks_json = as_object(&field_of(v, "blocks")?, "blocks")?.clone();
            let field = field_from_json(v, blocks_json.keys())?;
            let t: Vec<String> = field_of(v, "T")?
                .as_array()
                .ok_or_else(|| err("`T` must be an array"))?
                .iter()
                .map(|s| as_str(s, "T").map(String::from))
                .collect::<ParseResult<_>>()?;
            let mut blocks = BTreeMap::new();
            for (spec, b) in &blocks_json {
                let place = place_in(spec, field)?;
                let center = parse_element_in(as_str(&field_of(b, "center")?, "center")?, field)?;
                let m = as_i64(&field_of(b, "m")?, "m")?;
                blocks.insert(place.clone(), ScaledIntegerBall { place, center, m });
            }
            let keys: Vec<String> = blocks.keys().map(|v| v.to_string()).collect();
            let mut t_sorted: Vec<String> = t
                .iter()
                .map(|s| place_in(s, field).map(|p| p.to_string()))
                .collect::<ParseResult<_>>()?;
            t_sorted.sort_by_key(|s| parse_finite_place(s).expect("checked above"));
            if t_sorted != keys {
                return Err(err("`T` must list exactly the block places"));
            }
            Ok(CompactCert::Product { field, blocks })
        }
        other => Err(err(format!("unknown certificate kind `{other}`"))),
    }
}

/// One prime factor as emitted by `factor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorRecord {
    pub p: u64,
    pub e: u8,
    pub f: u8,
    pub hnf: [[BigInt; 2]; 2],
    pub gen2: FieldElement,
}

impl From<&PrimeIdeal> for FactorRecord {
    fn from(q: &PrimeIdeal) -> Self {
        FactorRecord {
            p: q.p().get(),
            e: q.e(),
            f: q.f(),
            hnf: q.hnf().matrix(),
            gen2: q.gen2().clone(),
        }
    }
}

pub fn factor_to_json(r: &FactorRecord) -> Value {
    let hnf: Vec<Vec<Value>> = r.hnf.iter().map(|row| row.iter().map(bigint_to_json).collect()).collect();
    json!({
        "p": r.p,
        "e": r.e,
        "f": r.f,
        "hnf": hnf,
        "gen2": { "a": r.gen2.a.to_string(), "b": r.gen2.b.to_string() },
    })
}

pub fn factor_from_json(v: &Value) -> ParseResult<FactorRecord> {
    let small = |key: &str| -> ParseResult<u8> {
        field_of(v, key)?
            .as_u64()
            .and_then(|n| u8::try_from(n).ok())
            .ok_or_else(|| err(format!("`{key}` must be a small integer")))
    };
    let p = field_of(v, "p")?.as_u64().ok_or_else(|| err("`p` must be a positive integer"))?;
    let rows = field_of(v, "hnf")?;
    let entry = |i: usize, j: usize| -> ParseResult<BigInt> {
        bigint_from_json(rows.get(i).and_then(|r| r.get(j)).ok_or_else(|| err("`hnf` must be 2x2"))?)
    };
    let gen2 = field_of(v, "gen2")?;
    let coord = |key: &str| -> ParseResult<adelekit_core::Rat> {
        let s = field_of(&gen2, key)?;
        let x = crate::parse::parse_element(as_str(&s, key)?)?;
        if !x.b.is_zero() {
            return Err(err("gen2 coordinates must be rational"));
        }
        Ok(x.a)
    };
    Ok(FactorRecord {
        p,
        e: small("e")?,
        f: small("f")?,
        hnf: [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]],
        gen2: FieldElement::new(coord("a")?, coord("b")?),
    })
}

/// Output of `val`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValRecord {
    pub place: String,
    /// `None` stands for `∞`.
    pub additive: Option<Option<i64>>,
    pub mult: Option<MultIntZero>,
    pub abs: Option<adelekit_core::Rat>,
}

pub fn val_to_json(r: &ValRecord) -> Value {
    let mut obj = Map::new();
    obj.insert("place".into(), json!(r.place));
    if let Some(a) = r.additive {
        obj.insert("additive".into(), a.map_or(json!("inf"), |n| json!(n)));
    }
    if let Some(m) = &r.mult {
        obj.insert("mult".into(), mult_to_json(m));
    }
    if let Some(abs) = &r.abs {
        obj.insert("abs".into(), json!(format!("{}/{}", abs.numer(), abs.denom())));
    }
    Value::Object(obj)
}

pub fn val_from_json(v: &Value) -> ParseResult<ValRecord> {
    let additive = match v.get("additive") {
        None => None,
        Some(Value::String(s)) if s == "inf" => Some(None),
        Some(n) => Some(Some(as_i64(n, "additive")?)),
    };
    let mult = v.get("mult").map(mult_from_json).transpose()?;
    let abs = match v.get("abs") {
        None => None,
        Some(s) => {
            let x = crate::parse::parse_element(as_str(s, "abs")?)?;
            Some(x.a)
        }
    };
    Ok(ValRecord {
        place: as_str(&field_of(v, "place")?, "place")?.to_string(),
        additive,
        mult,
        abs,
    })
}

pub fn places_to_json(s: &adelekit_core::PlaceSet) -> Value {
    json!(s.iter().map(|v| v.to_string()).collect::<Vec<_>>())
}

/// `support(x)` in JSON, for the `adele support` subcommand.
pub fn support_to_json(x: &FiniteAdele) -> Value {
    json!({ "support": places_to_json(&support(x)) })
}
