//! JSON forms of rings, series, Witt coordinates and p-typical vectors.
//!
//! Serialization is canonical: terms are written in graded lex order with
//! zero coefficients omitted, so parsing and re-serializing is byte-stable.

use serde::{Deserialize, Serialize};

use crate::algebra::{Ring, RingDesc, RingElement};
use crate::error::{Error, Result};
use crate::lambda::{WittCoordinates, WittElement};
use crate::ptypical::PWittVector;
use crate::series::{MultiIndex, TruncatedSeries};

/// Version of the JSON schema understood by this crate.
pub const SCHEMA_VERSION: &str = "bigwitt-json/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub c: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub n: usize,
    pub d: u32,
    #[serde(default)]
    pub exact: bool,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordJson {
    pub exp: Vec<u32>,
    pub r: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinatesJson {
    pub n: usize,
    pub d: u32,
    pub coords: Vec<CoordJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PWittJson {
    pub p: u32,
    pub entries: Vec<Vec<Vec<u32>>>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn ring_to_json(ring: &Ring) -> String {
    serde_json::to_string(&ring.desc()).expect("ring descriptors serialize")
}

pub fn ring_from_json(text: &str) -> Result<Ring> {
    let desc: RingDesc = serde_json::from_str(text).map_err(parse_err)?;
    Ring::from_desc(&desc)
}

pub fn element_to_json(ring: &Ring, a: &RingElement) -> Vec<Vec<u32>> {
    ring.to_nested(a)
}

pub fn series_to_json(s: &TruncatedSeries) -> SeriesJson {
    let ring = s.ring();
    SeriesJson {
        n: s.n(),
        d: s.d(),
        exact: s.is_exact(),
        terms: s
            .terms()
            .iter()
            .map(|(m, c)| TermJson { exp: m.exponents().to_vec(), c: ring.to_nested(c) })
            .collect(),
    }
}

pub fn series_from_json(ring: &Ring, j: &SeriesJson) -> Result<TruncatedSeries> {
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        if t.exp.len() != j.n {
            return Err(Error::Parse(format!("exponent {:?} is not in {} variables", t.exp, j.n)));
        }
        let m = MultiIndex::new(&t.exp);
        if m.total() >= j.d {
            return Err(Error::Parse(format!("exponent {:?} is beyond the truncation {}", t.exp, j.d)));
        }
        terms.push((m, ring.from_nested(&t.c)?));
    }
    let s = TruncatedSeries::from_terms(ring, j.n, j.d, terms)?;
    Ok(s.with_exact(j.exact))
}

pub fn series_to_string(s: &TruncatedSeries) -> String {
    serde_json::to_string(&series_to_json(s)).expect("series serialize")
}

pub fn series_from_str(ring: &Ring, text: &str) -> Result<TruncatedSeries> {
    let j: SeriesJson = serde_json::from_str(text).map_err(parse_err)?;
    series_from_json(ring, &j)
}

pub fn witt_from_str(ring: &Ring, text: &str) -> Result<WittElement> {
    WittElement::new(series_from_str(ring, text)?)
}

pub fn coordinates_to_json(c: &WittCoordinates) -> CoordinatesJson {
    CoordinatesJson {
        n: c.n(),
        d: c.d(),
        coords: c
            .coords()
            .iter()
            .map(|(m, r)| CoordJson { exp: m.exponents().to_vec(), r: c.ring().to_nested(r) })
            .collect(),
    }
}

pub fn coordinates_from_json(ring: &Ring, j: &CoordinatesJson) -> Result<WittCoordinates> {
    let mut coords = std::collections::BTreeMap::new();
    for c in &j.coords {
        if c.exp.len() != j.n {
            return Err(Error::Parse(format!("exponent {:?} is not in {} variables", c.exp, j.n)));
        }
        let r = ring.from_nested(&c.r)?;
        if !ring.is_zero(&r) {
            coords.insert(MultiIndex::new(&c.exp), r);
        }
    }
    WittCoordinates::new(ring, j.n, j.d, coords)
}

pub fn pwitt_to_json(v: &PWittVector) -> PWittJson {
    PWittJson { p: v.p(), entries: v.entries().iter().map(|e| v.ring().to_nested(e)).collect() }
}

pub fn pwitt_from_json(ring: &Ring, j: &PWittJson) -> Result<PWittVector> {
    if j.p != ring.p() {
        return Err(Error::Parse(format!("vector is {}-typical but the ring has characteristic {}", j.p, ring.p())));
    }
    let entries = j.entries.iter().map(|e| ring.from_nested(e)).collect::<Result<Vec<_>>>()?;
    Ok(PWittVector::new(ring, entries))
}
