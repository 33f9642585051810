//! Skein-valued curve counts assembled from certified moduli records.
//!
//! A [`ModuliSet`] is a list of [`CurveRecord`]s over a fixed brane list.
//! Each record contributes `w · z^(-χ) · ∏ aⱼ^linkingⱼ · ∂u` to the
//! assembled invariant, where `∂u` is the stored per-brane boundary class.
//! The engine never infers geometry from maps — records arrive already
//! reduced, and this module only does the bookkeeping: assembly, the
//! partition function in the class variables `Q`, the conifold substitution
//! `Q = a²`, reduced invariants by series division, and the three
//! wall-crossing moves that leave the assembled value unchanged.

mod json;

pub use json::{moduli_from_json, moduli_to_json, wall_event_from_json, wall_event_to_json};

use crate::diagram::{CrossingId, DiagramError, FramedDiagram};
use crate::laurent::{IntPoly, LaurentError, QSeries, RatPoly, RingSig, SeriesElem};
use crate::skein::{BraneAmbient, BraneList, BraneSkein, SkeinError, TensorFactor};
use num::{BigInt, BigRational};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CountError {
    #[error("record {record}: {reason}")]
    Shape { record: usize, reason: String },
    #[error("record {0} carries no degree")]
    MissingDeg(usize),
    #[error("bad wall-event site: {0}")]
    BadSite(String),
    #[error("wall events act on S³ branes; `{0}` is not one")]
    NotS3Brane(String),
    #[error("{0}")]
    Skein(#[from] SkeinError),
    #[error("{0}")]
    Diagram(#[from] DiagramError),
    #[error("{0}")]
    Laurent(#[from] LaurentError),
    #[error("moduli json: {0}")]
    Json(String),
}

/// One certified curve: Euler characteristic of its domain, rational
/// weight, orientation sign, per-brane linking numbers (the exponent of
/// that brane's framing variable), optional homological degree (used only
/// by [`ModuliSet::homfly_count`]), homology class, and the per-brane
/// boundary class.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRecord {
    pub chi: i32,
    pub weight: BigRational,
    pub sign: i8,
    pub linking: Vec<i32>,
    pub deg: Option<i32>,
    pub class: Vec<u32>,
    pub boundary: Vec<TensorFactor>,
}

impl CurveRecord {
    /// A weight-1 positive record with zero linking on every brane.
    pub fn plain(chi: i32, class: Vec<u32>, boundary: Vec<TensorFactor>) -> CurveRecord {
        let n = boundary.len();
        CurveRecord {
            chi,
            weight: BigRational::from_integer(BigInt::from(1)),
            sign: 1,
            linking: vec![0; n],
            deg: None,
            class,
            boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallKind {
    Hyperbolic,
    Elliptic,
    FramingChange,
}

/// A codimension-one wall move on one record: the record index, the brane
/// it acts on (which must be an S³ brane), the kind-specific site (a
/// crossing for hyperbolic moves, a boundary component for framing moves),
/// and a ±1 direction.
///
/// Hyperbolic moves are involutions — the direction is carried for the
/// record's sake but the move is determined by the current crossing sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallEvent {
    pub kind: WallKind,
    pub record: usize,
    pub brane: String,
    pub crossing: Option<CrossingId>,
    pub component: Option<usize>,
    pub direction: i8,
}

/// A brane list plus certified curve records, with the truncation order
/// used by [`ModuliSet::partition_function`].
#[derive(Debug, Clone)]
pub struct ModuliSet {
    branes: Arc<BraneList>,
    records: Vec<CurveRecord>,
    truncation: u32,
}

impl PartialEq for ModuliSet {
    fn eq(&self, other: &Self) -> bool {
        self.branes.specs() == other.branes.specs()
            && self.records == other.records
            && self.truncation == other.truncation
    }
}

impl ModuliSet {
    pub fn new(
        branes: Arc<BraneList>,
        records: Vec<CurveRecord>,
        truncation: u32,
    ) -> Result<ModuliSet, CountError> {
        let mut class_len: Option<usize> = None;
        for (i, r) in records.iter().enumerate() {
            validate_record(&branes, i, r)?;
            match class_len {
                None => class_len = Some(r.class.len()),
                Some(n) if n == r.class.len() => {}
                Some(n) => {
                    return Err(CountError::Shape {
                        record: i,
                        reason: format!(
                            "class has {} entries, earlier records have {n}",
                            r.class.len()
                        ),
                    })
                }
            }
        }
        Ok(ModuliSet {
            branes,
            records,
            truncation,
        })
    }

    pub fn branes(&self) -> &Arc<BraneList> {
        &self.branes
    }

    pub fn records(&self) -> &[CurveRecord] {
        &self.records
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    fn class_len(&self) -> usize {
        self.records
            .first()
            .map(|r| r.class.len())
            .unwrap_or(1)
            .max(1)
    }

    fn record_term(&self, r: &CurveRecord) -> Result<BraneSkein, CountError> {
        let mut t = BraneSkein::tensor(self.branes.clone(), r.boundary.clone())?;
        t = t.scale(&RatPoly::constant(self.branes.sig(), r.weight.clone()));
        t = t.mul_var_pow("z", -r.chi);
        for (j, &l) in r.linking.iter().enumerate() {
            if l != 0 {
                t = t.mul_var_pow(&self.branes.a_var(j), l);
            }
        }
        Ok(t)
    }

    fn assemble_where(
        &self,
        pred: impl Fn(&CurveRecord) -> bool + Sync,
    ) -> Result<BraneSkein, CountError> {
        let terms: Result<Vec<BraneSkein>, CountError> = self
            .records
            .par_iter()
            .filter(|r| pred(r))
            .map(|r| self.record_term(r))
            .collect();
        let mut acc = BraneSkein::zero(self.branes.clone());
        for t in terms? {
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// The class-`d` part of the invariant:
    /// `Σ w · z^(-χ) · ∏ aⱼ^linkingⱼ · ∂u` over records in class `d`.
    pub fn assemble(&self, d: &[u32]) -> Result<BraneSkein, CountError> {
        self.assemble_where(|r| r.class == d)
    }

    /// Assemble every record regardless of class.
    pub fn assemble_total(&self) -> Result<BraneSkein, CountError> {
        self.assemble_where(|_| true)
    }

    /// The scalar count `Σ sign · a^(2·deg) · z^(-χ)` in the plain `(a, z)`
    /// ring; every record must carry a degree.
    pub fn homfly_count(&self) -> Result<IntPoly, CountError> {
        let sig = RingSig::az();
        let mut acc = IntPoly::zero(sig.clone());
        for (i, r) in self.records.iter().enumerate() {
            let deg = r.deg.ok_or(CountError::MissingDeg(i))?;
            acc = acc.add(&IntPoly::monomial(
                sig.clone(),
                &[2 * deg, -r.chi],
                BigInt::from(r.sign),
            ));
        }
        Ok(acc)
    }

    /// `1 + Σ_{d>0} assemble(d) · Q^d`, truncated at the stored order.
    /// One `Q` variable per class coordinate (`Q` when there is a single
    /// coordinate, else `Q1`, `Q2`, ...).
    pub fn partition_function(&self) -> Result<QSeries<BraneSkein>, CountError> {
        let k = self.class_len();
        let qvars: Vec<String> = if k == 1 {
            vec!["Q".to_string()]
        } else {
            (1..=k).map(|i| format!("Q{i}")).collect()
        };
        let mut s = QSeries::new(qvars, self.truncation);
        s.add_term(&vec![0; k], BraneSkein::unit(self.branes.clone()));
        let classes: BTreeSet<Vec<u32>> = self
            .records
            .iter()
            .filter(|r| r.class.iter().any(|&c| c > 0))
            .map(|r| r.class.clone())
            .collect();
        for d in classes {
            s.add_term(&d, self.assemble(&d)?);
        }
        Ok(s)
    }

    /// Apply one wall move, returning the moduli set on the other side of
    /// the wall.  The assembled invariant is unchanged after collapsing S³
    /// factors; applying the same move again restores the original set.
    pub fn apply_wall_event(&self, e: &WallEvent) -> Result<ModuliSet, CountError> {
        if e.direction != 1 && e.direction != -1 {
            return Err(CountError::BadSite(format!(
                "direction must be +1 or -1, got {}",
                e.direction
            )));
        }
        if e.record >= self.records.len() {
            return Err(CountError::BadSite(format!(
                "record {} out of range",
                e.record
            )));
        }
        let j = self
            .branes
            .index_of(&e.brane)
            .ok_or_else(|| CountError::BadSite(format!("unknown brane `{}`", e.brane)))?;
        if self.branes.specs()[j].ambient != BraneAmbient::S3 {
            return Err(CountError::NotS3Brane(e.brane.clone()));
        }
        let base = self.records[e.record].clone();
        let diagram = match &base.boundary[j] {
            TensorFactor::Link(d) => d.clone(),
            TensorFactor::Ann(_) => unreachable!("S³ brane boundaries are links"),
        };
        let mut records = self.records.clone();
        match e.kind {
            WallKind::Hyperbolic => {
                let c = e.crossing.ok_or_else(|| {
                    CountError::BadSite("hyperbolic event needs a crossing".to_string())
                })?;
                let s = diagram.sign(c).ok_or_else(|| {
                    CountError::BadSite(format!("no crossing {} in the boundary diagram", c.0))
                })?;
                let switched = diagram.switch_crossing(c)?;
                let smoothed = diagram.smooth_crossing(c)?;
                records[e.record].boundary[j] = TensorFactor::Link(switched);
                // Crossing the wall from sign s, the identity
                //   w z^(-χ) ⟨L_s⟩ = w z^(-χ) ⟨L_-s⟩ + s·w z^(-(χ-1)) ⟨L_0⟩
                // puts the smoothing record at weight s·w.
                let mut partner = base.clone();
                partner.chi -= 1;
                partner.weight = &base.weight * BigRational::from_integer(BigInt::from(s));
                partner.boundary[j] = TensorFactor::Link(smoothed);
                add_or_cancel(&mut records, partner);
            }
            WallKind::Elliptic => {
                // The 4-chain bounds twice the brane, so crossing it shifts
                // the linking by two:  a^l = a^(l+2) − z·a^(l+1)·δ  (and its
                // downward mirror).  The extra unknot sits at linking l ± 1
                // with weight ∓w and χ−1.
                let dir = i32::from(e.direction);
                let l = base.linking[j];
                records[e.record].linking[j] = l + 2 * dir;
                let mut partner = base.clone();
                partner.chi -= 1;
                partner.weight = -&base.weight * BigRational::from_integer(BigInt::from(dir));
                partner.linking[j] = l + dir;
                partner.boundary[j] =
                    TensorFactor::Link(diagram.split_union(&FramedDiagram::unlink(1))?);
                add_or_cancel(&mut records, partner);
            }
            WallKind::FramingChange => {
                let comp = e.component.ok_or_else(|| {
                    CountError::BadSite("framing event needs a component".to_string())
                })?;
                if comp >= diagram.components().len() {
                    return Err(CountError::BadSite(format!(
                        "no component {comp} in the boundary diagram"
                    )));
                }
                let dir = i32::from(e.direction);
                records[e.record].boundary[j] =
                    TensorFactor::Link(diagram.with_correction(comp, dir)?);
                records[e.record].linking[j] -= dir;
            }
        }
        ModuliSet::new(self.branes.clone(), records, self.truncation)
    }
}

/// Truncated series quotient; the denominator must have constant term 1.
pub fn reduced_invariant<T: SeriesElem>(
    num: &QSeries<T>,
    den: &QSeries<T>,
) -> Result<QSeries<T>, LaurentError> {
    num.divide(den)
}

fn validate_record(branes: &BraneList, i: usize, r: &CurveRecord) -> Result<(), CountError> {
    let shape = |reason: String| CountError::Shape { record: i, reason };
    if r.sign != 1 && r.sign != -1 {
        return Err(shape(format!(
            "orientation sign must be +1 or -1, got {}",
            r.sign
        )));
    }
    if r.linking.len() != branes.len() {
        return Err(shape(format!(
            "{} linking entries for {} branes",
            r.linking.len(),
            branes.len()
        )));
    }
    if r.boundary.len() != branes.len() {
        return Err(shape(format!(
            "{} boundary entries for {} branes",
            r.boundary.len(),
            branes.len()
        )));
    }
    for (j, (f, spec)) in r.boundary.iter().zip(branes.specs()).enumerate() {
        match (f, spec.ambient) {
            (TensorFactor::Link(d), BraneAmbient::S3) => {
                if d.ambient() != crate::diagram::Ambient::S3 {
                    return Err(shape(format!("brane {j} boundary is not an S³ diagram")));
                }
            }
            (TensorFactor::Ann(_), BraneAmbient::SolidTorus) => {}
            _ => {
                return Err(shape(format!(
                    "boundary kind does not match brane {j} ({})",
                    spec.name
                )))
            }
        }
    }
    Ok(())
}

/// Push `partner` unless a record canceling it exactly (same data, opposite
/// weight) is already present, in which case remove that record instead.
fn add_or_cancel(records: &mut Vec<CurveRecord>, partner: CurveRecord) {
    let negated = -&partner.weight;
    if let Some(i) = records.iter().position(|r| {
        r.chi == partner.chi
            && r.sign == partner.sign
            && r.linking == partner.linking
            && r.deg == partner.deg
            && r.class == partner.class
            && r.weight == negated
            && boundary_matches(&r.boundary, &partner.boundary)
    }) {
        records.remove(i);
    } else {
        records.push(partner);
    }
}

fn boundary_matches(a: &[TensorFactor], b: &[TensorFactor]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| match (x, y) {
            (TensorFactor::Link(da), TensorFactor::Link(db)) => {
                da.canonical_code() == db.canonical_code()
            }
            (TensorFactor::Ann(ga), TensorFactor::Ann(gb)) => {
                let mut sa = ga.clone();
                let mut sb = gb.clone();
                sa.sort_unstable();
                sb.sort_unstable();
                sa == sb
            }
            _ => false,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_braid, Ambient};
    use crate::laurent::{conifold_substitute, parse};
    use crate::skein::{evaluate_s3, BraneSpec};

    fn branes2() -> Arc<BraneList> {
        BraneList::new(vec![BraneSpec::s3("a"), BraneSpec::torus("a1")])
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cylinder_moduli(word: &str, class: Vec<u32>, trunc: u32) -> ModuliSet {
        let k = parse_braid(word).unwrap();
        let n = k.components().len();
        let rec = CurveRecord::plain(
            0,
            class,
            vec![TensorFactor::Link(k), TensorFactor::Ann(vec![1; n])],
        );
        ModuliSet::new(branes2(), vec![rec], trunc).unwrap()
    }

    fn collapsed(m: &ModuliSet) -> BraneSkein {
        m.assemble_total().unwrap().collapse_s3_factor().unwrap()
    }

    #[test]
    fn assemble_single_cylinder_is_pure_tensor() {
        let m = cylinder_moduli("BR[2, [1,1,1]]", vec![1], 3);
        let expect = BraneSkein::tensor(
            branes2(),
            vec![
                TensorFactor::Link(parse_braid("BR[2, [1,1,1]]").unwrap()),
                TensorFactor::Ann(vec![1]),
            ],
        )
        .unwrap();
        assert_eq!(m.assemble(&[1]).unwrap(), expect);
        assert_eq!(m.assemble_total().unwrap(), expect);
        // Wrong class: nothing assembles.
        assert!(m.assemble(&[2]).unwrap().is_zero());
    }

    #[test]
    fn assemble_cancels_opposite_weights() {
        let b = branes2();
        let mk = |w: BigRational| {
            let mut r = CurveRecord::plain(
                0,
                vec![1],
                vec![
                    TensorFactor::Link(FramedDiagram::unlink(1)),
                    TensorFactor::Ann(vec![1]),
                ],
            );
            r.weight = w;
            r
        };
        let m = ModuliSet::new(b.clone(), vec![mk(rat(2, 3)), mk(rat(-2, 3))], 2).unwrap();
        assert!(m.assemble_total().unwrap().is_zero());
        let empty = ModuliSet::new(b, Vec::new(), 2).unwrap();
        assert!(empty.assemble_total().unwrap().is_zero());
    }

    #[test]
    fn assemble_applies_weight_chi_and_linking() {
        let b = branes2();
        let mut r = CurveRecord::plain(
            -1,
            vec![1],
            vec![
                TensorFactor::Link(FramedDiagram::unlink(1)),
                TensorFactor::Ann(vec![2]),
            ],
        );
        r.weight = rat(3, 2);
        r.linking = vec![2, -1];
        let m = ModuliSet::new(b.clone(), vec![r], 2).unwrap();
        let scale = RatPoly::constant(b.sig(), rat(3, 2))
            .mul_var_pow("z", 1)
            .mul_var_pow("a", 2)
            .mul_var_pow("a1", -1);
        let expect = BraneSkein::tensor(
            b,
            vec![
                TensorFactor::Link(FramedDiagram::unlink(1)),
                TensorFactor::Ann(vec![2]),
            ],
        )
        .unwrap()
        .scale(&scale);
        assert_eq!(m.assemble_total().unwrap(), expect);
    }

    #[test]
    fn homfly_count_fixtures() {
        let b = BraneList::new(vec![BraneSpec::s3("a")]);
        let sig = RingSig::az();
        let mk = |sign: i8, deg: Option<i32>, chi: i32| {
            let mut r = CurveRecord::plain(
                chi,
                vec![1],
                vec![TensorFactor::Link(FramedDiagram::empty(Ambient::S3))],
            );
            r.sign = sign;
            r.deg = deg;
            r
        };
        let one = ModuliSet::new(b.clone(), vec![mk(1, Some(0), 0)], 1).unwrap();
        assert_eq!(one.homfly_count().unwrap(), IntPoly::one(sig.clone()));
        let two =
            ModuliSet::new(b.clone(), vec![mk(1, Some(1), 0), mk(-1, Some(0), -1)], 1).unwrap();
        assert_eq!(two.homfly_count().unwrap(), parse(&sig, "a^2 - z").unwrap());
        let missing = ModuliSet::new(b, vec![mk(1, None, 0)], 1).unwrap();
        assert_eq!(missing.homfly_count(), Err(CountError::MissingDeg(0)));
    }

    #[test]
    fn homfly_count_matches_unknot_up_to_framing_unit() {
        // The two rigid disks over the unknot give (a² − 1)·z⁻¹, the skein
        // value of the unknot times one framing unit a.
        let b = BraneList::new(vec![BraneSpec::s3("a")]);
        let mk = |sign: i8, deg: i32| {
            let mut r = CurveRecord::plain(
                1,
                vec![1],
                vec![TensorFactor::Link(FramedDiagram::empty(Ambient::S3))],
            );
            r.sign = sign;
            r.deg = Some(deg);
            r
        };
        let m = ModuliSet::new(b, vec![mk(1, 1), mk(-1, 0)], 1).unwrap();
        let unknot = evaluate_s3(&FramedDiagram::unlink(1)).unwrap();
        assert_eq!(m.homfly_count().unwrap(), unknot.mul_var_pow("a", 1));
    }

    #[test]
    fn partition_function_truncates() {
        let b = branes2();
        let empty = ModuliSet::new(b.clone(), Vec::new(), 3).unwrap();
        let s = empty.partition_function().unwrap();
        assert_eq!(s.qvars(), ["Q".to_string()]);
        assert_eq!(s.coeff(&[0]), Some(&BraneSkein::unit(b)));
        assert_eq!(s.terms().count(), 1);

        let m = cylinder_moduli("BR[2, [1,1,1]]", vec![2], 3);
        let s = m.partition_function().unwrap();
        assert_eq!(s.coeff(&[2]), Some(&m.assemble(&[2]).unwrap()));
        assert_eq!(s.terms().count(), 2);

        let low = cylinder_moduli("BR[2, [1,1,1]]", vec![2], 1);
        let s = low.partition_function().unwrap();
        assert_eq!(s.terms().count(), 1);
    }

    #[test]
    fn collapse_matches_skein_value_for_hopf() {
        let m = cylinder_moduli("BR[2, [1,1]]", vec![1], 1);
        let hopf = evaluate_s3(&parse_braid("BR[2, [1,1]]").unwrap()).unwrap();
        let b = branes2();
        let expect = BraneSkein::tensor(
            b.clone(),
            vec![
                TensorFactor::Link(FramedDiagram::empty(Ambient::S3)),
                TensorFactor::Ann(vec![1, 1]),
            ],
        )
        .unwrap()
        .scale(
            &hopf
                .map_coeffs(|c| BigRational::from(c.clone()))
                .rename_into(b.sig(), &[])
                .unwrap(),
        );
        assert_eq!(collapsed(&m), expect);
    }

    #[test]
    fn hyperbolic_wall_moves_preserve_the_invariant() {
        let m = cylinder_moduli("BR[2, [1,1,1]]", vec![1], 1);
        let before = collapsed(&m);
        for c in 0..3u32 {
            let e = WallEvent {
                kind: WallKind::Hyperbolic,
                record: 0,
                brane: "a".to_string(),
                crossing: Some(CrossingId(c)),
                component: None,
                direction: 1,
            };
            let after = m.apply_wall_event(&e).unwrap();
            assert_eq!(after.records().len(), 2);
            assert_eq!(collapsed(&after), before);
            // The move is an involution: applying it again cancels the
            // smoothing record and restores the set.
            assert_eq!(after.apply_wall_event(&e).unwrap(), m);
        }
    }

    #[test]
    fn elliptic_wall_moves_preserve_the_invariant() {
        for dir in [1i8, -1] {
            let mut m = cylinder_moduli("BR[2, [1,1,1]]", vec![1], 1);
            let mut rec = m.records()[0].clone();
            rec.linking = vec![3, 0];
            m = ModuliSet::new(m.branes().clone(), vec![rec], 1).unwrap();
            let before = collapsed(&m);
            let e = WallEvent {
                kind: WallKind::Elliptic,
                record: 0,
                brane: "a".to_string(),
                crossing: None,
                component: None,
                direction: dir,
            };
            let after = m.apply_wall_event(&e).unwrap();
            assert_eq!(after.records().len(), 2);
            assert_eq!(after.records()[0].linking[0], 3 + 2 * i32::from(dir));
            assert_eq!(collapsed(&after), before);
            let undo = WallEvent {
                direction: -dir,
                ..e
            };
            assert_eq!(after.apply_wall_event(&undo).unwrap(), m);
        }
    }

    #[test]
    fn elliptic_wall_move_on_closed_record() {
        // A record with no boundary on the S³ brane gains a free unknot.
        let b = branes2();
        let r = CurveRecord::plain(
            -2,
            vec![1],
            vec![
                TensorFactor::Link(FramedDiagram::empty(Ambient::S3)),
                TensorFactor::Ann(vec![]),
            ],
        );
        let m = ModuliSet::new(b, vec![r], 1).unwrap();
        let before = collapsed(&m);
        let e = WallEvent {
            kind: WallKind::Elliptic,
            record: 0,
            brane: "a".to_string(),
            crossing: None,
            component: None,
            direction: 1,
        };
        let after = m.apply_wall_event(&e).unwrap();
        assert_eq!(collapsed(&after), before);
    }

    #[test]
    fn framing_wall_moves_preserve_the_invariant() {
        for dir in [1i8, -1] {
            let m = cylinder_moduli("BR[2, [1,1,1]]", vec![1], 1);
            let before = collapsed(&m);
            let e = WallEvent {
                kind: WallKind::FramingChange,
                record: 0,
                brane: "a".to_string(),
                crossing: None,
                component: Some(0),
                direction: dir,
            };
            let after = m.apply_wall_event(&e).unwrap();
            assert_eq!(after.records().len(), 1);
            assert_eq!(after.records()[0].linking[0], -i32::from(dir));
            assert_eq!(collapsed(&after), before);
            let undo = WallEvent {
                direction: -dir,
                ..e
            };
            assert_eq!(after.apply_wall_event(&undo).unwrap(), m);
        }
    }

    #[test]
    fn wall_event_site_errors() {
        let m = cylinder_moduli("BR[2, [1,1,1]]", vec![1], 1);
        let base = WallEvent {
            kind: WallKind::Hyperbolic,
            record: 0,
            brane: "a".to_string(),
            crossing: Some(CrossingId(0)),
            component: None,
            direction: 1,
        };
        let bad_record = WallEvent {
            record: 5,
            ..base.clone()
        };
        assert!(matches!(
            m.apply_wall_event(&bad_record),
            Err(CountError::BadSite(_))
        ));
        let bad_brane = WallEvent {
            brane: "nope".to_string(),
            ..base.clone()
        };
        assert!(matches!(
            m.apply_wall_event(&bad_brane),
            Err(CountError::BadSite(_))
        ));
        let torus = WallEvent {
            brane: "a1".to_string(),
            ..base.clone()
        };
        assert!(matches!(
            m.apply_wall_event(&torus),
            Err(CountError::NotS3Brane(_))
        ));
        let no_crossing = WallEvent {
            crossing: None,
            ..base.clone()
        };
        assert!(matches!(
            m.apply_wall_event(&no_crossing),
            Err(CountError::BadSite(_))
        ));
        let missing_crossing = WallEvent {
            crossing: Some(CrossingId(9)),
            ..base.clone()
        };
        assert!(matches!(
            m.apply_wall_event(&missing_crossing),
            Err(CountError::BadSite(_))
        ));
        let zero_dir = WallEvent {
            direction: 0,
            ..base.clone()
        };
        assert!(matches!(
            m.apply_wall_event(&zero_dir),
            Err(CountError::BadSite(_))
        ));
        let bad_comp = WallEvent {
            kind: WallKind::FramingChange,
            component: Some(4),
            ..base
        };
        assert!(matches!(
            m.apply_wall_event(&bad_comp),
            Err(CountError::BadSite(_))
        ));
    }

    #[test]
    fn conifold_classes_agree_with_direct_linking() {
        // Bookkeeping by Q-classes then Q = a² equals bookkeeping by
        // linking numbers directly (records certify the same curves).
        let b = branes2();
        let mk = |chi: i32, w: BigRational, d: u32, windings: Vec<i32>| {
            let mut r = CurveRecord::plain(
                chi,
                vec![d],
                vec![
                    TensorFactor::Link(FramedDiagram::empty(Ambient::S3)),
                    TensorFactor::Ann(windings),
                ],
            );
            r.weight = w;
            r
        };
        let q_records = vec![
            mk(0, rat(1, 1), 1, vec![1]),
            mk(-1, rat(2, 1), 1, vec![1]),
            mk(-2, rat(-1, 3), 2, vec![1, 1]),
        ];
        let a_records: Vec<CurveRecord> = q_records
            .iter()
            .map(|r| {
                let mut s = r.clone();
                s.linking[0] += 2 * r.class[0] as i32;
                s.class = vec![0];
                s
            })
            .collect();
        let mq = ModuliSet::new(b.clone(), q_records, 4).unwrap();
        let ma = ModuliSet::new(b.clone(), a_records, 4).unwrap();
        let lhs = conifold_substitute(&mq.partition_function().unwrap(), "a").unwrap();
        let rhs = BraneSkein::unit(b).add(&ma.assemble_total().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn conifold_is_additive_over_record_union() {
        let b = branes2();
        let m1 = cylinder_moduli("BR[2, [1,1]]", vec![1], 3);
        let m2 = cylinder_moduli("BR[2, [1,1,1]]", vec![2], 3);
        let mut all = m1.records().to_vec();
        all.extend(m2.records().to_vec());
        let m12 = ModuliSet::new(b.clone(), all, 3).unwrap();
        let c = |m: &ModuliSet| conifold_substitute(&m.partition_function().unwrap(), "a").unwrap();
        let lhs = c(&m12).add(&BraneSkein::unit(b));
        let rhs = c(&m1).add(&c(&m2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduced_invariant_divides_out_closed_part() {
        let b = BraneList::new(vec![BraneSpec::s3("a")]);
        let unit = BraneSkein::unit(b.clone());
        let c = BraneSkein::unit(b.clone()).mul_var_pow("a", 2);
        let mut zx = QSeries::new(vec!["Q".to_string()], 2);
        zx.add_term(&[0], unit.clone());
        zx.add_term(&[1], c.clone());
        let mut extra = QSeries::new(vec!["Q".to_string()], 2);
        extra.add_term(&[0], unit.clone());
        extra.add_term(&[1], unit.scale(&RatPoly::constant(b.sig(), rat(5, 1))));
        let zxl = zx.mul(&extra).unwrap();
        assert_eq!(reduced_invariant(&zxl, &zx).unwrap(), extra);
        // Non-unit denominator is rejected.
        let mut bad = QSeries::new(vec!["Q".to_string()], 2);
        bad.add_term(&[0], c);
        assert_eq!(
            reduced_invariant(&zxl, &bad),
            Err(LaurentError::NonUnitConstant)
        );
    }

    #[test]
    fn display_matches_documented_rendering() {
        let m = cylinder_moduli("BR[1, []]", vec![1], 1);
        let v = collapsed(&m);
        assert_eq!(v.to_string(), "(a*z^-1 - a^-1*z^-1) * l1");
        let b = branes2();
        assert_eq!(BraneSkein::unit(b.clone()).to_string(), "1");
        assert_eq!(BraneSkein::zero(b).to_string(), "0");
    }
}
