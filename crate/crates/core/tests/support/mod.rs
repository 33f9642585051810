//! Shared helpers for the integration suites: an independent resolution
//! oracle for skein values, corpus generators for braid closures, and
//! synthetic moduli builders.
//!
//! The oracle deliberately shares no evaluation logic with the library's
//! memoized evaluator: it expands the full resolution tree with no cache,
//! picking the crossing to resolve at random, so agreement with the library
//! is evidence rather than tautology.

#![allow(dead_code)]

use num::{BigInt, BigRational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::sync::Arc;

use skein_core::curvecount::{CurveRecord, ModuliSet};
use skein_core::diagram::{parse_braid, Ambient, CrossingId, FramedDiagram, Role};
use skein_core::laurent::{parse, IntPoly, RingSig};
use skein_core::skein::{BraneList, BraneSkein, BraneSpec, TensorFactor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Crossings whose first traversal passage is on the under-strand. A
/// diagram with none is descending and evaluates as a framed unlink.
fn non_descending_sites(d: &FramedDiagram) -> Vec<CrossingId> {
    let mut seen = HashSet::new();
    let mut sites = Vec::new();
    for comp in d.components() {
        for p in &comp.passages {
            if seen.insert(p.crossing) && p.role == Role::Under {
                sites.push(p.crossing);
            }
        }
    }
    sites
}

fn resolve(d: &FramedDiagram, rng: &mut ChaCha8Rng) -> IntPoly {
    let sig = RingSig::az();
    let sites = non_descending_sites(d);
    if sites.is_empty() {
        let n = d.components().len();
        let writhe: i64 = (0..n).map(|i| d.self_writhe(i)).sum();
        let delta = parse(&sig, "a*z^-1 - a^-1*z^-1").unwrap();
        return delta
            .pow(u32::try_from(n).unwrap())
            .mul_var_pow("a", i32::try_from(writhe).unwrap());
    }
    let site = sites[rng.gen_range(0..sites.len())];
    let sign = d.sign(site).unwrap();
    let switched = resolve(&d.switch_crossing(site).unwrap(), rng);
    let smoothed = resolve(&d.smooth_crossing(site).unwrap(), rng);
    let z = IntPoly::var(sig, "z");
    if sign > 0 {
        switched.add(&z.mul(&smoothed))
    } else {
        switched.sub(&z.mul(&smoothed))
    }
}

/// Skein value by exhaustive resolution: no memoization, full binary tree,
/// random choice of which non-descending crossing to resolve at each step.
pub fn oracle_value(d: &FramedDiagram, rng: &mut ChaCha8Rng) -> IntPoly {
    let (bare, _) = d.strip_corrections();
    let value = resolve(&bare, rng);
    let correction = i32::try_from(d.total_correction()).unwrap();
    value.mul_var_pow("a", correction)
}

/// Braid words (strand count, generator list) with up to eight crossings,
/// covering knots and links on two to four strands.
pub fn fixture_words() -> Vec<(usize, Vec<i64>)> {
    vec![
        (1, vec![]),
        (2, vec![1]),
        (2, vec![1, 1]),
        (2, vec![1, 1, 1]),
        (2, vec![-1, -1, -1]),
        (2, vec![1, 1, 1, 1]),
        (2, vec![1, 1, 1, 1, 1]),
        (2, vec![1, 1, 1, 1, 1, 1]),
        (2, vec![1, 1, 1, 1, 1, 1, 1]),
        (2, vec![1, 1, 1, 1, 1, 1, 1, 1]),
        (3, vec![1, -2, 1, -2]),
        (3, vec![1, 2, 1, 2]),
        (3, vec![1, 1, 2, 2]),
        (3, vec![1, 1, 1, 2, -1, 2]),
        (3, vec![1, -2, 1, -2, 1, -2]),
        (3, vec![1, 1, 2, -1, -1, 2]),
        (3, vec![1, 1, 1, 1, 2, -1, 2]),
        (3, vec![1, -2, 1, -2, 1, -2, 1, -2]),
        (4, vec![1, 2, 3, 1, 2, 3]),
        (4, vec![1, -2, 3, 1, -2, 3]),
        (4, vec![1, 1, 2, 2, 3, 3]),
        (4, vec![1, 2, -1, 3, 2, -1, 3, 2]),
    ]
}

pub fn braid(strands: usize, word: &[i64]) -> FramedDiagram {
    let list = word
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(",");
    parse_braid(&format!("BR[{strands}, [{list}]]")).unwrap()
}

/// A random braid-closure diagram with at most `max_crossings` crossings.
pub fn random_braid(rng: &mut ChaCha8Rng, max_crossings: usize) -> FramedDiagram {
    let strands = rng.gen_range(2..=4);
    let length = rng.gen_range(1..=max_crossings);
    let word: Vec<i64> = (0..length)
        .map(|_| {
            let g = rng.gen_range(1..strands as i64);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    braid(strands, &word)
}

/// A deterministic corpus of braid closures.
pub fn corpus(count: usize, max_crossings: usize, seed: u64) -> Vec<FramedDiagram> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| random_braid(&mut r, max_crossings))
        .collect()
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The standard two-brane setup: one S3 brane `a`, one solid-torus brane
/// `a1`.
pub fn two_branes() -> Arc<BraneList> {
    BraneList::new(vec![BraneSpec::s3("a"), BraneSpec::torus("a1")])
}

/// A one-record moduli set certifying a single cylinder whose S3 boundary is
/// the closure of `word` and whose torus boundary winds once per component.
pub fn cylinder_moduli(word: &str, class: Vec<u32>, truncation: u32) -> ModuliSet {
    let k = parse_braid(word).unwrap();
    let n = k.components().len();
    let record = CurveRecord::plain(
        0,
        class,
        vec![TensorFactor::Link(k), TensorFactor::Ann(vec![1; n])],
    );
    ModuliSet::new(two_branes(), vec![record], truncation).unwrap()
}

/// A synthetic moduli set with one to three records. Record 0 always has a
/// crossing on the S3 brane so hyperbolic wall events have a site to act on.
pub fn random_moduli(rng: &mut ChaCha8Rng) -> ModuliSet {
    let branes = two_branes();
    let n_records = rng.gen_range(1..=3);
    let mut records = Vec::new();
    for i in 0..n_records {
        let link = if i == 0 {
            random_braid(rng, 4)
        } else if rng.gen_bool(0.3) {
            FramedDiagram::empty(Ambient::S3)
        } else {
            random_braid(rng, 3)
        };
        let windings: Vec<i32> = (0..link.components().len().min(2))
            .map(|_| rng.gen_range(1..=2))
            .collect();
        let mut record = CurveRecord::plain(
            rng.gen_range(-2..=0),
            vec![rng.gen_range(0..=2)],
            vec![TensorFactor::Link(link), TensorFactor::Ann(windings)],
        );
        record.weight = rat(rng.gen_range(-3..=3i64), rng.gen_range(1..=3i64));
        if record.weight == rat(0, 1) {
            record.weight = rat(1, 1);
        }
        record.sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        record.linking = vec![rng.gen_range(-2..=2), 0];
        records.push(record);
    }
    ModuliSet::new(branes, records, 3).unwrap()
}

/// Total invariant with the S3 skein factor collapsed out.
pub fn collapsed(m: &ModuliSet) -> BraneSkein {
    m.assemble_total().unwrap().collapse_s3_factor().unwrap()
}
