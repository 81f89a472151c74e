//! The `adelekit` command line.

use std::ffi::OsString;
use std::io::Write;

use adelekit_core::adele::{adele_arith, adele_component, support, AdeleOp};
use adelekit_core::completion::local_embed;
use adelekit_core::number_field::{factor_rational_prime, infinite_embed};
use adelekit_core::topology::{
    adelic_compact_nbhd, cert_contains, compact_nbhd_local, cover_integers, verify_cert_subset, verify_cover, Point,
};
use adelekit_core::valuations::archimedean_abs;
use adelekit_core::{
    AdditiveValue, Ball, BasicOpen, CompactCert, Error, FieldElement, FiniteAdele, FinitePlace, InfinitePlace,
    MultIntZero, NumberField, Rat,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::json::{
    adele_from_json, adele_to_json, cert_to_json, factor_to_json, local_to_json, mult_to_json, open_from_json,
    places_to_json, val_to_json, FactorRecord, ValRecord,
};
use crate::parse::{parse_element_in, parse_finite_place, parse_place_spec, ParseError, PlaceSpec};
use crate::suites::{run_all, SuiteConfig};

const GRAMMAR: &str = "\
Element literals (w is sqrt(d), or (1+sqrt(d))/2 when d = 1 mod 4):
  element  = term [ (\"+\" | \"-\") term ]
  term     = [\"-\"] rational [\"w\"] | [\"-\"] \"w\"
  rational = digits [\"/\" digits]
  e.g. 3, -1/2, w, 1/2+3/4 w, 2-w
Place specs:
  p:3            the 3-adic place of Q
  d:-1,p:5,i:1   the second prime above 5 in Q(sqrt(-1)), in canonical order
  inf            the real place of Q
  d:2,inf:1      the second infinite place of Q(sqrt(2))
Infinite places are numeric, with a relative tolerance of 1e-12.
Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage error.";

#[derive(Debug, Parser)]
#[command(name = "adelekit", version, about = "Exact valuations, completions and adeles over Q and Q(sqrt d)")]
#[command(after_help = GRAMMAR)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ValMode {
    Additive,
    Mult,
    Abs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Valuations and absolute value of an element at a place.
    Val {
        #[arg(long, value_parser = parse_place_spec)]
        place: PlaceSpec,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum)]
        mode: Option<ValMode>,
    },
    /// Factor a rational prime in Q(sqrt d).
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        p: u64,
    },
    /// Digit expansion of an element in a completion.
    Expand {
        #[arg(long, value_parser = parse_finite_place)]
        place: FinitePlace,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Absolute precision.
        #[arg(long, env = "ADELEKIT_PRECISION_DEFAULT", default_value_t = 8, allow_hyphen_values = true)]
        prec: i64,
    },
    /// Finite adeles given as JSON: {"d"?, "global", "corrections": {place: element}}.
    #[command(subcommand)]
    Adele(AdeleCommand),
    /// Ball cover of the local integers.
    Cover {
        #[arg(long, value_parser = parse_finite_place)]
        place: FinitePlace,
        #[arg(long, allow_hyphen_values = true)]
        gamma: i64,
    },
    /// Compact neighbourhood certificates.
    Nbhd(NbhdArgs),
    /// Run every invariant suite.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per randomized suite (defaults to each suite's own count).
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum AdeleCommand {
    Add {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    Mul {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    Support {
        #[arg(long)]
        x: String,
    },
    Component {
        #[arg(long)]
        x: String,
        #[arg(long, value_parser = parse_finite_place)]
        place: FinitePlace,
        #[arg(long, env = "ADELEKIT_PRECISION_DEFAULT", default_value_t = 8, allow_hyphen_values = true)]
        prec: i64,
    },
}

#[derive(Debug, Args)]
struct NbhdArgs {
    /// A finite place (with --x, --gamma) or, with --infinite, an infinite one.
    #[arg(long, value_parser = parse_place_spec, requires = "x", conflicts_with_all = ["adele", "open"])]
    place: Option<PlaceSpec>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "infinite")]
    gamma: Option<i64>,
    /// Finite adele JSON; requires --open.
    #[arg(long, requires = "open")]
    adele: Option<String>,
    /// Basic open JSON: {"d"?, "opens": {place: [{"center", "gamma"}]}}.
    #[arg(long, requires = "adele")]
    open: Option<String>,
    /// Closed interval or disc about x at an infinite place.
    #[arg(long, requires_all = ["place", "radius"])]
    infinite: bool,
    #[arg(long)]
    radius: Option<f64>,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Output {
    json: Value,
    text: String,
    code: i32,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, code: 0 }
    }
}

fn element(text: &str, field: NumberField) -> CliResult<FieldElement> {
    Ok(parse_element_in(text, field)?)
}

fn parse_json(text: &str, what: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("malformed {what} JSON: {e}")))
}

fn adele_arg(text: &str) -> CliResult<FiniteAdele> {
    Ok(adele_from_json(&parse_json(text, "adele")?)?)
}

fn rat_text(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn val(place: &PlaceSpec, x: &str, mode: Option<ValMode>) -> CliResult<Output> {
    let x = element(x, place.field())?;
    let want = |m: ValMode| mode.is_none() || mode == Some(m);
    let mut record = ValRecord {
        place: place.to_string(),
        additive: None,
        mult: None,
        abs: None,
    };
    match place {
        PlaceSpec::Infinite(field, s) => {
            if let Some(m @ (ValMode::Additive | ValMode::Mult)) = mode {
                return Err(Failure::Domain(Error::KindPlaceMismatch {
                    kind: if m == ValMode::Additive { "additive valuation" } else { "multiplicative valuation" },
                    place: place.to_string(),
                }));
            }
            if *field == NumberField::Rational {
                record.abs = Some(archimedean_abs(&x.a));
            } else {
                let value = adelekit_core::number_field::infinite_abs(field, *s, &x);
                let json = json!({ "place": place.to_string(), "abs": value });
                return Ok(Output::ok(json, format!("abs={value}")));
            }
        }
        PlaceSpec::Finite(v) => {
            let a = v.valuation(&x);
            if want(ValMode::Additive) {
                record.additive = Some(a.finite());
            }
            if want(ValMode::Mult) {
                record.mult = Some(a.to_mult());
            }
            if want(ValMode::Abs) {
                // normalized: |x|_v = q^{-a_v(x)}
                record.abs = Some(match a {
                    AdditiveValue::Infinite => Rat::from_integer(0.into()),
                    AdditiveValue::Finite(k) => {
                        let q = Rat::from_integer(v.residue_size());
                        if k >= 0 {
                            num_traits::pow(q.recip(), k as usize)
                        } else {
                            num_traits::pow(q, k.unsigned_abs() as usize)
                        }
                    }
                });
            }
        }
    }
    let mut text = Vec::new();
    if let Some(a) = record.additive {
        text.push(format!("additive={}", a.map_or("inf".into(), |n| n.to_string())));
    }
    if let Some(m) = &record.mult {
        text.push(format!("mult={m}"));
    }
    if let Some(a) = &record.abs {
        text.push(format!("abs={}", rat_text(a)));
    }
    Ok(Output::ok(val_to_json(&record), text.join(" ")))
}

fn factor(d: i64, p: u64) -> CliResult<Output> {
    let field = adelekit_core::QuadraticField::new(d)?;
    let factors = factor_rational_prime(&field, p)?;
    let records: Vec<FactorRecord> = factors.iter().map(|(q, _)| FactorRecord::from(q)).collect();
    let text = records
        .iter()
        .map(|r| {
            format!(
                "p={} e={} f={} hnf=[[{},{}],[{},{}]] gen2={}",
                r.p, r.e, r.f, r.hnf[0][0], r.hnf[0][1], r.hnf[1][0], r.hnf[1][1], r.gen2
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::ok(Value::Array(records.iter().map(factor_to_json).collect()), text))
}

fn local_output(x: &adelekit_core::LocalElement, prec: i64) -> Output {
    let mut json = local_to_json(x);
    if json.get("exact_zero").is_some() {
        json["prec"] = json!(prec);
    }
    Output::ok(json, x.to_string())
}

fn expand(place: &FinitePlace, x: &str, prec: i64) -> CliResult<Output> {
    let x = element(x, place.field())?;
    Ok(local_output(&local_embed(place, &x, prec)?, prec))
}

fn adele(cmd: &AdeleCommand) -> CliResult<Output> {
    let binary = |x: &str, y: &str, op: AdeleOp| -> CliResult<Output> {
        let z = adele_arith(op, &adele_arg(x)?, &adele_arg(y)?)?;
        let json = adele_to_json(&z);
        Ok(Output::ok(json.clone(), json.to_string()))
    };
    match cmd {
        AdeleCommand::Add { x, y } => binary(x, y, AdeleOp::Add),
        AdeleCommand::Mul { x, y } => binary(x, y, AdeleOp::Mul),
        AdeleCommand::Support { x } => {
            let s = support(&adele_arg(x)?);
            let names: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            Ok(Output::ok(json!({ "support": places_to_json(&s) }), names.join(" ")))
        }
        AdeleCommand::Component { x, place, prec } => {
            let x = adele_arg(x)?;
            if place.field() != x.field() {
                return Err(Failure::Usage(format!("place {place} is not a place of the adele's field")));
            }
            Ok(local_output(&adele_component(&x, place, *prec)?, *prec))
        }
    }
}

fn cover(place: &FinitePlace, gamma: i64) -> CliResult<Output> {
    let g = MultIntZero::of_add(gamma);
    let centers = cover_integers(place, &g)?;
    let verified = verify_cover(place, &g, &centers)?;
    let names: Vec<String> = centers.iter().map(|c| c.to_string()).collect();
    let json = json!({
        "place": place.to_string(),
        "gamma": mult_to_json(&g),
        "centers": names,
        "verified": verified,
    });
    Ok(Output::ok(json, format!("{} centers, verified={verified}: {}", names.len(), names.join(" "))))
}

fn cert_text(c: &CompactCert) -> String {
    match c {
        CompactCert::Scaled(b) => format!("{} + pi^{} O_v at {}", b.center, b.m, b.place),
        CompactCert::Product { blocks, .. } if blocks.is_empty() => "prod_v O_v".into(),
        CompactCert::Product { blocks, .. } => blocks
            .values()
            .map(|b| format!("[{}: {} + pi^{} O_v]", b.place, b.center, b.m))
            .collect::<Vec<_>>()
            .join(" x "),
    }
}

fn nbhd(args: &NbhdArgs) -> CliResult<Output> {
    if args.infinite {
        let (Some(PlaceSpec::Infinite(field, s)), Some(x), Some(r)) = (&args.place, &args.x, args.radius) else {
            return Err(Failure::Usage("--infinite needs an infinite --place, --x and --radius".into()));
        };
        if !(r.is_finite() && r > 0.0) {
            return Err(Failure::Usage("--radius must be a positive number".into()));
        }
        let x = element(x, *field)?;
        let z = infinite_embed(field, *s, &x);
        let place = args.place.as_ref().expect("matched above").to_string();
        return Ok(match s {
            InfinitePlace::Complex => Output::ok(
                json!({ "place": place, "kind": "disc", "center": [z.re, z.im], "radius": r }),
                format!("closed disc |z - ({} + {}i)| <= {r}", z.re, z.im),
            ),
            InfinitePlace::Real { .. } => Output::ok(
                json!({ "place": place, "kind": "interval", "lo": z.re - r, "hi": z.re + r }),
                format!("closed interval [{}, {}]", z.re - r, z.re + r),
            ),
        });
    }
    if let (Some(a), Some(u)) = (&args.adele, &args.open) {
        let x = adele_arg(a)?;
        let u: BasicOpen = open_from_json(&parse_json(u, "open")?)?;
        if u.field() != x.field() {
            return Err(Failure::Domain(Error::FieldMismatch));
        }
        let cert = adelic_compact_nbhd(&x, &u)?;
        let verified = cert_contains(&cert, Point::Adele(&x))? && verify_cert_subset(&cert, &u)?;
        let text = format!("{} (verified={verified})", cert_text(&cert));
        return Ok(Output::ok(json!({ "cert": cert_to_json(&cert), "verified": verified }), text));
    }
    let (Some(PlaceSpec::Finite(v)), Some(x), Some(g)) = (&args.place, &args.x, args.gamma) else {
        return Err(Failure::Usage(
            "nbhd needs --place <finite> --x --gamma, --adele with --open, or --infinite".into(),
        ));
    };
    let x = element(x, v.field())?;
    let gamma = MultIntZero::of_add(g);
    let cert = compact_nbhd_local(v, &x, &gamma)?;
    let ball = Ball::new(v.clone(), x.clone(), gamma)?;
    let u = BasicOpen::new(v.field(), [(v.clone(), vec![ball])].into())?;
    let verified = cert_contains(&cert, Point::Local(v, &x))? && verify_cert_subset(&cert, &u)?;
    let text = format!("{} (verified={verified})", cert_text(&cert));
    Ok(Output::ok(json!({ "cert": cert_to_json(&cert), "verified": verified }), text))
}

fn check(seed: u64, samples: Option<usize>) -> Output {
    let outcomes = run_all(&SuiteConfig { seed, samples });
    let all = outcomes.iter().all(|o| o.passed());
    let mut lines: Vec<String> = Vec::new();
    for o in &outcomes {
        lines.push(o.line());
        lines.extend(o.failures.iter().map(|f| format!("    {f}")));
    }
    let suites: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "criterion": o.id,
                "name": o.name,
                "passed": o.passed(),
                "checked": o.checked,
                "failures": o.failure_count,
                "examples": o.failures,
                "seconds": o.elapsed.as_secs_f64(),
            })
        })
        .collect();
    Output {
        json: json!({ "seed": seed, "passed": all, "suites": suites }),
        text: lines.join("\n"),
        code: if all { 0 } else { 1 },
    }
}

fn dispatch(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Val { place, x, mode } => val(place, x, *mode),
        Command::Factor { d, p } => factor(*d, *p),
        Command::Expand { place, x, prec } => expand(place, x, *prec),
        Command::Adele(cmd) => adele(cmd),
        Command::Cover { place, gamma } => cover(place, *gamma),
        Command::Nbhd(args) => nbhd(args),
        Command::Check { seed, samples } => Ok(check(*seed, *samples)),
    }
}

/// Runs the CLI on `args` (including the program name), writing to `out` and
/// `err`, and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                2
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = match cli.format {
                Format::Json => writeln!(out, "{}", o.json),
                Format::Text => writeln!(out, "{}", o.text),
            };
            o.code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "{}", json!({ "error": e.kind(), "message": e.to_string() }));
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("adelekit").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(go(&["val", "--place", "p:4", "--x", "1"]).0, 2);
        assert_eq!(go(&["val", "--place", "p:3", "--x", "1/0"]).0, 2);
        assert_eq!(go(&["val", "--place", "p:3", "--x", "1", "--bogus"]).0, 2);
        assert_eq!(go(&["frobnicate"]).0, 2);
    }

    #[test]
    fn domain_errors_exit_1() {
        let (code, _, err) = go(&["expand", "--place", "p:3", "--x", "1/9", "--prec", "-3"]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"], "PrecisionTooLow");
    }
}
