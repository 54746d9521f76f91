//! Seeded property checks, one list per library module. Each property runs
//! `cases` random instances drawn from a ChaCha8 stream keyed by the seed, so
//! a failing run replays exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use bigwitt::algebra::Ring;
use bigwitt::cft::{pi1_brute_force, pi1_truncated};
use bigwitt::duality::{cartier_pair, geometric_pair, FormalWittElement};
use bigwitt::lambda::WittElement;
use bigwitt::ptypical::{oracle_add, oracle_mul, pi_epsilon, pi_epsilon_inverse, PWittVector};
use bigwitt::series::{MultiIndex, TruncatedSeries};
use bigwitt::{Error, Result};

use crate::Failure;

const SUITES: [&str; 6] = ["algebra", "series", "lambda", "ptypical", "duality", "cft"];
const ORDERS: [u64; 4] = [2, 3, 4, 5];

type Check = fn(&mut ChaCha8Rng) -> Result<bool>;

fn properties(suite: &str) -> Vec<(&'static str, Check)> {
    match suite {
        "algebra" => vec![
            ("ring_distributive", algebra_distributive as Check),
            ("unit_inverse", algebra_inverse),
        ],
        "series" => vec![("series_inverse", series_inverse), ("mul_associative", series_associative)],
        "lambda" => vec![
            ("witt_ring_axioms", lambda_ring_axioms),
            ("coordinates_round_trip", lambda_coordinates),
            ("decompose_recompose", lambda_decompose),
        ],
        "ptypical" => vec![("laws_match_ghost_oracle", ptypical_oracle), ("pi_epsilon_round_trip", ptypical_pi)],
        "duality" => vec![("routes_agree", duality_agree), ("bilinear_in_g", duality_bilinear)],
        "cft" => vec![("pi1_formula_matches_enumeration", cft_pi1)],
        _ => Vec::new(),
    }
}

fn random_ring(rng: &mut ChaCha8Rng, max_nil: usize) -> Result<Ring> {
    let q = ORDERS[rng.gen_range(0..ORDERS.len())];
    Ring::with_order(q, rng.gen_range(1..=max_nil))
}

fn algebra_distributive(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = random_ring(rng, 3)?;
    let (a, b, c) = (r.random(rng), r.random(rng), r.random(rng));
    Ok(r.mul(&a, &r.add(&b, &c)) == r.add(&r.mul(&a, &b), &r.mul(&a, &c)))
}

fn algebra_inverse(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = random_ring(rng, 3)?;
    let u = r.random_unit(rng);
    Ok(r.is_one(&r.mul(&u, &r.inv(&u)?)))
}

fn random_series(rng: &mut ChaCha8Rng, r: &Ring, n: usize, d: u32) -> Result<TruncatedSeries> {
    Ok(WittElement::random(r, n, d, rng).into_series())
}

fn series_inverse(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = random_ring(rng, 2)?;
    let n = rng.gen_range(1..=3);
    let d = rng.gen_range(1..=5);
    let s = random_series(rng, &r, n, d)?;
    Ok(s.mul(&s.inv()?)?.is_one())
}

fn series_associative(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = random_ring(rng, 2)?;
    let (n, d) = (rng.gen_range(1..=3), rng.gen_range(1..=5));
    let a = random_series(rng, &r, n, d)?;
    let b = random_series(rng, &r, n, d)?;
    let c = random_series(rng, &r, n, d)?;
    Ok(a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?)
}

fn lambda_ring_axioms(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = random_ring(rng, 1)?;
    let d = rng.gen_range(2..=8);
    let x = WittElement::random(&r, 1, d, rng);
    let y = WittElement::random(&r, 1, d, rng);
    let z = WittElement::random(&r, 1, d, rng);
    let one = WittElement::unit(&r, 1, d);
    Ok(x.mul(&y)? == y.mul(&x)?
        && x.mul(&y)?.mul(&z)? == x.mul(&y.mul(&z)?)?
        && x.mul(&y.add(&z)?)? == x.mul(&y)?.add(&x.mul(&z)?)?
        && x.mul(&one)? == x)
}

fn lambda_coordinates(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = random_ring(rng, 2)?;
    let x = WittElement::random(&r, rng.gen_range(1..=3), rng.gen_range(1..=6), rng);
    Ok(WittElement::from_coordinates(&x.coordinates()) == x)
}

fn lambda_decompose(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = random_ring(rng, 2)?;
    let (n, d) = (rng.gen_range(2..=3), rng.gen_range(2..=6));
    let x = WittElement::random(&r, n, d, rng);
    let y = WittElement::random(&r, n, d, rng);
    let sum = x.add(&y)?.decompose();
    Ok(x.decompose().recompose() == x && x.decompose().add(&y.decompose())? == sum)
}

fn ptypical_oracle(rng: &mut ChaCha8Rng) -> Result<bool> {
    let p = [2u32, 3, 5][rng.gen_range(0..3)];
    let len = if p == 5 { 3 } else { 4 };
    let r = Ring::with_order(p as u64, 1)?;
    let v: Vec<u32> = (0..len).map(|_| rng.gen_range(0..p)).collect();
    let w: Vec<u32> = (0..len).map(|_| rng.gen_range(0..p)).collect();
    let lift = |xs: &[u32]| PWittVector::new(&r, xs.iter().map(|&x| r.from_int(x as i64)).collect());
    let as_ints = |x: PWittVector| -> Vec<u32> { x.entries().iter().map(|e| e.components()[0]).collect() };
    let (a, b) = (lift(&v), lift(&w));
    Ok(as_ints(a.add(&b)?) == oracle_add(&v, &w, p)? && as_ints(a.mul(&b)?) == oracle_mul(&v, &w, p)?)
}

fn ptypical_pi(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = Ring::with_order([2u64, 3][rng.gen_range(0..2)], 1)?;
    let x = WittElement::random(&r, 1, rng.gen_range(2..=8), rng);
    Ok(pi_epsilon(&r, &pi_epsilon_inverse(&x)?, x.d())? == x)
}

fn random_formal(rng: &mut ChaCha8Rng, r: &Ring, degree: u32) -> Result<FormalWittElement> {
    let terms: Vec<_> = (1..=degree).map(|k| (MultiIndex::new(&[k]), r.random_nilpotent(rng))).collect();
    FormalWittElement::from_terms(r, 1, terms)
}

fn duality_agree(rng: &mut ChaCha8Rng) -> Result<bool> {
    let q = ORDERS[rng.gen_range(0..ORDERS.len())];
    let r = Ring::with_order(q, rng.gen_range(2..=3))?;
    let f = random_formal(rng, &r, 3)?;
    let c = f.conductor()?.max(1);
    let g = WittElement::random(&r.residue_ring(), 1, c + 2, rng);
    Ok(cartier_pair(&f, &g, c)? == geometric_pair(&f, &g, c)?)
}

fn duality_bilinear(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = Ring::with_order(ORDERS[rng.gen_range(0..ORDERS.len())], 2)?;
    let f = random_formal(rng, &r, 3)?;
    let c = f.conductor()?.max(1);
    let g = WittElement::random(&r.residue_ring(), 1, c + 2, rng);
    let h = WittElement::random(&r.residue_ring(), 1, c + 2, rng);
    let lhs = cartier_pair(&f, &g.add(&h)?, c)?;
    Ok(lhs == r.mul(&cartier_pair(&f, &g, c)?, &cartier_pair(&f, &h, c)?))
}

fn cft_pi1(rng: &mut ChaCha8Rng) -> Result<bool> {
    let (n, q, d) = [(1usize, 2u64, 3u32), (1, 3, 3), (2, 2, 2), (1, 2, 5), (2, 3, 2), (1, 4, 3)][rng.gen_range(0..6)];
    Ok(pi1_truncated(n, q, d)?.summary() == pi1_brute_force(n, q, d)?.summary())
}

/// Runs a suite, or all of them for `all`; exit status 2 if any case fails.
pub fn run(suite: &str, seed: u64, cases: usize) -> std::result::Result<Value, Failure> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(Error::InvalidArgument(format!("unknown suite {s}; expected one of {SUITES:?} or all")).into()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Vec::new();
    let mut all_passed = true;
    for name in names {
        for (prop, check) in properties(name) {
            let mut passed = 0;
            for _ in 0..cases {
                if check(&mut rng)? {
                    passed += 1;
                }
            }
            all_passed &= passed == cases;
            report.push(json!({ "suite": name, "name": prop, "cases": cases, "passed": passed }));
        }
    }
    let out = json!({ "suite": suite, "seed": seed, "properties": report, "passed": all_passed });
    if all_passed {
        Ok(out)
    } else {
        Err(Failure::Disagreement(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_has_properties() {
        for s in SUITES {
            assert!(!properties(s).is_empty(), "{s}");
        }
    }

    #[test]
    fn single_suite_report() {
        let Ok(v) = run("ptypical", 3, 5) else { panic!("suite failed") };
        assert_eq!(v["properties"].as_array().unwrap().len(), 2);
        assert_eq!(v["passed"], true);
        assert!(matches!(run("bogus", 0, 1), Err(Failure::Input(_))));
    }
}
