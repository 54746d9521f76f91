use std::io::Read;

use serde_json::{json, Value};

use bigwitt::algebra::{Ring, RingElement};
use bigwitt::cft::{lang_kernel_census, pi1_brute_force, pi1_truncated};
use bigwitt::duality::{cartier_pair, geometric_pair, geometric_pair_multi, FormalWittElement};
use bigwitt::json::{
    coordinates_from_json, coordinates_to_json, ring_from_json, series_from_json, series_to_json, CoordinatesJson,
    SeriesJson,
};
use bigwitt::lambda::WittElement;
use bigwitt::ptypical::artin_hasse_exp;
use bigwitt::Error;

use crate::{Failure, RingArgs};

pub enum Route {
    Algebraic,
    Geometric,
    Both,
}

/// Reads stdin as one payload, or as a JSON array of `count` payloads when
/// several arguments are `-`.
fn stdin_payloads(count: usize) -> Result<Vec<Value>, Error> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    if count == 1 {
        return Ok(vec![v]);
    }
    match v {
        Value::Array(items) if items.len() == count => Ok(items),
        _ => Err(Error::Parse(format!("stdin must hold a JSON array of {count} payloads"))),
    }
}

/// Resolves payload arguments: inline JSON, `@path`, or `-` for stdin.
fn payloads(args: &[&str]) -> Result<Vec<Value>, Error> {
    let dashes = args.iter().filter(|a| **a == "-").count();
    let mut from_stdin = if dashes > 0 { stdin_payloads(dashes)? } else { Vec::new() }.into_iter();
    args.iter()
        .map(|a| {
            if *a == "-" {
                return Ok(from_stdin.next().expect("one stdin payload per dash"));
            }
            let text = match a.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?,
                None => a.to_string(),
            };
            serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
        })
        .collect()
}

fn payload(arg: &str) -> Result<Value, Error> {
    Ok(payloads(&[arg])?.remove(0))
}

fn typed<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, Error> {
    serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
}

pub fn ring(args: &RingArgs) -> Result<Ring, Error> {
    match (&args.ring, args.q) {
        (Some(text), _) => ring_from_json(text),
        (None, Some(q)) => Ring::with_order(q, args.nil),
        (None, None) => Err(Error::InvalidArgument("give --ring or --q".into())),
    }
}

fn witt(ring: &Ring, v: Value) -> Result<WittElement, Error> {
    WittElement::new(series_from_json(ring, &typed::<SeriesJson>(v)?)?)
}

fn series_value(x: &WittElement) -> Value {
    serde_json::to_value(series_to_json(x.series())).expect("series serialize")
}

fn element_value(ring: &Ring, a: &RingElement) -> Value {
    json!({ "value": ring.to_nested(a), "text": ring.render(a) })
}

fn binary<F>(args: &RingArgs, a: &str, b: &str, op: F) -> Result<Value, Failure>
where
    F: Fn(&WittElement, &WittElement) -> Result<WittElement, Error>,
{
    let r = ring(args)?;
    let mut vs = payloads(&[a, b])?.into_iter();
    let x = witt(&r, vs.next().unwrap())?;
    let y = witt(&r, vs.next().unwrap())?;
    Ok(series_value(&op(&x, &y)?))
}

pub fn add(args: &RingArgs, a: &str, b: &str) -> Result<Value, Failure> {
    binary(args, a, b, |x, y| x.add(y))
}

pub fn mul(args: &RingArgs, a: &str, b: &str) -> Result<Value, Failure> {
    binary(args, a, b, |x, y| x.mul(y))
}

pub fn neg(args: &RingArgs, a: &str) -> Result<Value, Failure> {
    let r = ring(args)?;
    let x = witt(&r, payload(a)?)?;
    Ok(series_value(&x.neg()))
}

pub fn coords(args: &RingArgs, a: &str) -> Result<Value, Failure> {
    let r = ring(args)?;
    let x = witt(&r, payload(a)?)?;
    Ok(serde_json::to_value(coordinates_to_json(&x.coordinates())).expect("coordinates serialize"))
}

pub fn from_coords(args: &RingArgs, c: &str) -> Result<Value, Failure> {
    let r = ring(args)?;
    let cj: CoordinatesJson = typed(payload(c)?)?;
    let x = WittElement::from_coordinates(&coordinates_from_json(&r, &cj)?);
    Ok(series_value(&x))
}

pub fn decompose(args: &RingArgs, a: &str) -> Result<Value, Failure> {
    let r = ring(args)?;
    let x = witt(&r, payload(a)?)?;
    let family = x.decompose();
    let components: Vec<Value> = family
        .components()
        .iter()
        .map(|(nu, c)| json!({ "direction": nu.exponents(), "series": series_value(c) }))
        .collect();
    Ok(json!({ "n": family.n(), "d": family.d(), "components": components }))
}

pub fn ah_exp(args: &RingArgs, x: &str, j: u32, d: u32) -> Result<Value, Failure> {
    let r = ring(args)?;
    let nested: Vec<Vec<u32>> = typed(payload(x)?)?;
    let x = r.from_nested(&nested)?;
    Ok(series_value(&artin_hasse_exp(&r, &x, j, d)?))
}

pub fn pair(args: &RingArgs, route: Route, d: Option<u32>, f: &str, g: &str) -> Result<Value, Failure> {
    let r = ring(args)?;
    let mut vs = payloads(&[f, g])?.into_iter();
    let fj: SeriesJson = typed(vs.next().unwrap())?;
    let f = FormalWittElement::new(series_from_json(&r, &fj)?.with_exact(true))?;
    let g = witt(&r, vs.next().unwrap())?;
    let d = match d {
        Some(d) => d,
        None => f.conductor()?,
    };
    let algebraic = || cartier_pair(&f, &g, d);
    let geometric = || if f.n() == 1 { geometric_pair(&f, &g, d) } else { geometric_pair_multi(&f, &g) };
    match route {
        Route::Algebraic => Ok(json!({ "algebraic": element_value(&r, &algebraic()?) })),
        Route::Geometric => Ok(json!({ "geometric": element_value(&r, &geometric()?) })),
        Route::Both => {
            let a = algebraic()?;
            let b = geometric()?;
            let out = json!({
                "algebraic": element_value(&r, &a),
                "geometric": element_value(&r, &b),
                "agree": a == b,
            });
            if a == b {
                Ok(out)
            } else {
                Err(Failure::Disagreement(out))
            }
        }
    }
}

pub fn pi1(n: usize, q: u64, d: u32, oracle: bool) -> Result<Value, Failure> {
    let formula = pi1_truncated(n, q, d)?.summary();
    let out = serde_json::to_value(&formula).expect("summary serializes");
    if !oracle {
        return Ok(out);
    }
    let brute = pi1_brute_force(n, q, d)?.summary();
    if brute == formula {
        Ok(out)
    } else {
        Err(Failure::Disagreement(json!({ "formula": formula, "oracle": brute, "agree": false })))
    }
}

pub fn lang_census(n: usize, q: u64, s: u32, d: u32) -> Result<Value, Failure> {
    let census = lang_kernel_census(n, q, s, d)?;
    let mut out = serde_json::to_value(&census).expect("census serializes");
    out["holds"] = json!(census.holds());
    if census.holds() {
        Ok(out)
    } else {
        Err(Failure::Disagreement(out))
    }
}
