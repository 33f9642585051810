//! Evaluation of framed link diagrams in the skein of S³, and the skein
//! modules attached to solid-torus branes.
//!
//! The S³ skein is the free Z[a±, z±]-module on the empty link, with
//! relations: switching minus switching back costs z times the smoothing
//! (⟨L₊⟩ − ⟨L₋⟩ = z⟨L₀⟩), a +1 framing change multiplies by a, and a split
//! unknot multiplies by the loop value δ = (a − a⁻¹)/z.

mod annular;
mod brane;

pub use annular::AnnularSkein;
pub use brane::{BraneAmbient, BraneList, BraneSkein, BraneSpec, TensorFactor};

use crate::diagram::{Ambient, CanonicalCode, CrossingId, FramedDiagram, Role};
use crate::laurent::{loop_value, IntPoly, RingSig};
use std::collections::{HashMap, HashSet};
use std::sync::{Arc, RwLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SkeinError {
    #[error("skein evaluation in S³ requires an S³ diagram")]
    NotS3,
    #[error("not a valid skein triple: {0}")]
    InvalidTriple(String),
    #[error("grading is defined only for homogeneous annular elements")]
    Inhomogeneous,
    #[error("tensor parts do not match the brane list: {0}")]
    BraneMismatch(String),
}

/// Recursion branches this small are evaluated serially.
const PARALLEL_MIN_CROSSINGS: usize = 7;

/// A skein evaluation session: a shared memo table keyed on canonical
/// codes.  Reuse one evaluator across many diagrams to share work; results
/// are identical either way.
pub struct Evaluator {
    sig: Arc<RingSig>,
    memo: RwLock<HashMap<CanonicalCode, IntPoly>>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl Evaluator {
    pub fn new() -> Evaluator {
        Evaluator {
            sig: RingSig::az(),
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn sig(&self) -> Arc<RingSig> {
        self.sig.clone()
    }

    /// Evaluate a diagram in Sk(S³) ≅ Z[a±, z±].
    pub fn evaluate(&self, d: &FramedDiagram) -> Result<IntPoly, SkeinError> {
        if d.ambient() != Ambient::S3 {
            return Err(SkeinError::NotS3);
        }
        // Framing corrections contribute a^total and play no further part.
        let (bare, _) = d.strip_corrections();
        let v = self.eval_inner(&bare);
        let corr = i32::try_from(d.total_correction()).expect("framing correction overflow");
        Ok(v.mul_var_pow("a", corr))
    }

    /// First crossing met on its under-strand before its over-strand, in
    /// basepoint-and-component traversal order.  A diagram with none is
    /// descending and evaluates as a framed unlink.
    fn first_bad(&self, d: &FramedDiagram) -> Option<CrossingId> {
        let mut seen = HashSet::new();
        for comp in d.components() {
            for p in &comp.passages {
                if seen.insert(p.crossing) && p.role == Role::Under {
                    return Some(p.crossing);
                }
            }
        }
        None
    }

    fn descending_value(&self, d: &FramedDiagram) -> IntPoly {
        let n = d.components().len();
        let w: i64 = (0..n).map(|i| d.self_writhe(i)).sum();
        let delta = loop_value(self.sig.clone());
        delta
            .pow(u32::try_from(n).unwrap())
            .mul_var_pow("a", i32::try_from(w).unwrap())
    }

    fn eval_inner(&self, d: &FramedDiagram) -> IntPoly {
        let code = d.canonical_code();
        if let Some(v) = self.memo.read().unwrap().get(&code) {
            return v.clone();
        }
        let val = match self.first_bad(d) {
            None => self.descending_value(d),
            Some(c) => {
                let sign = d.sign(c).unwrap();
                let switched = d.switch_crossing(c).unwrap();
                let smoothed = d.smooth_crossing(c).unwrap();
                let (vs, vm) = if d.crossing_count() >= PARALLEL_MIN_CROSSINGS {
                    rayon::join(|| self.eval_inner(&switched), || self.eval_inner(&smoothed))
                } else {
                    (self.eval_inner(&switched), self.eval_inner(&smoothed))
                };
                let z = IntPoly::var(self.sig.clone(), "z");
                // L₊ = L₋ + z L₀ resolved at the bad crossing.
                if sign > 0 {
                    vs.add(&z.mul(&vm))
                } else {
                    vs.sub(&z.mul(&vm))
                }
            }
        };
        self.memo.write().unwrap().insert(code, val.clone());
        val
    }
}

/// One-shot evaluation with a fresh memo table.
pub fn evaluate_s3(d: &FramedDiagram) -> Result<IntPoly, SkeinError> {
    Evaluator::new().evaluate(d)
}

/// Check ⟨d₊⟩ − ⟨d₋⟩ = z⟨d₀⟩ for three diagrams differing at one site.
///
/// The triple must be structurally plausible: d₊ and d₋ share crossing ids
/// and differ in sign at exactly one crossing (+1 in d₊, −1 in d₋), and d₀
/// carries exactly the remaining ids.  Whether the relation holds is then
/// decided by evaluation.
pub fn check_skein_triple(
    d_plus: &FramedDiagram,
    d_minus: &FramedDiagram,
    d_zero: &FramedDiagram,
) -> Result<bool, SkeinError> {
    let ids_p: HashSet<CrossingId> = d_plus.crossing_ids().collect();
    let ids_m: HashSet<CrossingId> = d_minus.crossing_ids().collect();
    if ids_p != ids_m {
        return Err(SkeinError::InvalidTriple(
            "d₊ and d₋ must share their crossing ids".to_string(),
        ));
    }
    let mut site = None;
    for id in &ids_p {
        let (sp, sm) = (d_plus.sign(*id).unwrap(), d_minus.sign(*id).unwrap());
        if sp != sm {
            if site.is_some() {
                return Err(SkeinError::InvalidTriple(
                    "signs differ at more than one crossing".to_string(),
                ));
            }
            if sp != 1 || sm != -1 {
                return Err(SkeinError::InvalidTriple(format!(
                    "crossing {} is not +1 in d₊ and -1 in d₋",
                    id.0
                )));
            }
            site = Some(*id);
        }
    }
    let site = site.ok_or_else(|| {
        SkeinError::InvalidTriple("d₊ and d₋ do not differ at any crossing".to_string())
    })?;
    let ids_z: HashSet<CrossingId> = d_zero.crossing_ids().collect();
    let mut expect = ids_p.clone();
    expect.remove(&site);
    if ids_z != expect {
        return Err(SkeinError::InvalidTriple(
            "d₀ must carry exactly the crossings away from the site".to_string(),
        ));
    }
    let ev = Evaluator::new();
    let vp = ev.evaluate(d_plus)?;
    let vm = ev.evaluate(d_minus)?;
    let v0 = ev.evaluate(d_zero)?;
    let z = IntPoly::var(ev.sig(), "z");
    Ok(vp.sub(&vm).sub(&z.mul(&v0)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_braid, parse_pd};
    use crate::laurent::parse;

    fn ev(text: &str) -> IntPoly {
        let d = parse_braid(text).unwrap();
        evaluate_s3(&d).unwrap()
    }

    #[test]
    fn empty_and_unknots() {
        assert!(evaluate_s3(&FramedDiagram::empty(Ambient::S3))
            .unwrap()
            .is_one());
        let delta = loop_value(RingSig::az());
        assert_eq!(evaluate_s3(&FramedDiagram::unlink(1)).unwrap(), delta);
        assert_eq!(
            evaluate_s3(&FramedDiagram::unlink(3)).unwrap(),
            delta.pow(3)
        );
        assert_eq!(ev("BR[1, []]"), delta);
    }

    #[test]
    fn kinks_carry_framing() {
        let delta = loop_value(RingSig::az());
        let pos = parse_pd("PD[X[1,1,2,2]]").unwrap();
        assert_eq!(evaluate_s3(&pos).unwrap(), delta.mul_var_pow("a", 1));
        let neg = parse_pd("PD[X[1,2,2,1]]").unwrap();
        assert_eq!(evaluate_s3(&neg).unwrap(), delta.mul_var_pow("a", -1));
        // A correction acts the same way as a drawn kink.
        let corr = FramedDiagram::unlink(1).with_correction(0, 1).unwrap();
        assert_eq!(evaluate_s3(&corr).unwrap(), evaluate_s3(&pos).unwrap());
    }

    #[test]
    fn hopf_link_value() {
        // By hand: ⟨H⟩ = δ² + a z δ with δ = (a − a⁻¹)/z.
        let sig = RingSig::az();
        let expect: IntPoly = parse(&sig, "a^2 - 1 + a^2*z^-2 - 2*z^-2 + a^-2*z^-2").unwrap();
        assert_eq!(ev("BR[2, [1,1]]"), expect);
    }

    #[test]
    fn trefoil_value() {
        // By hand: ⟨T⟩ = a δ + z δ² + a z² δ at blackboard framing +3.
        let sig = RingSig::az();
        let expect: IntPoly = parse(&sig, "a^2*z - z + 2*a^2*z^-1 - 3*z^-1 + a^-2*z^-1").unwrap();
        assert_eq!(ev("BR[2, [1,1,1]]"), expect);
    }

    #[test]
    fn figure_eight_value() {
        // Writhe 0, so this equals δ times the classical HOMFLYPT of 4₁.
        let sig = RingSig::az();
        let expect: IntPoly = parse(
            &sig,
            "-a*z + a^-1*z + a^3*z^-1 - 2*a*z^-1 + 2*a^-1*z^-1 - a^-3*z^-1",
        )
        .unwrap();
        assert_eq!(ev("BR[3, [1,-2,1,-2]]"), expect);
    }

    #[test]
    fn reverse_engineered_unlinks() {
        // Two circles stacked by an R2 pair evaluate like the 2-unlink.
        let d = parse_pd("PD[X[1,3,2,4], X[2,3,1,4]]").unwrap();
        let delta = loop_value(RingSig::az());
        assert_eq!(evaluate_s3(&d).unwrap(), delta.pow(2));
    }

    #[test]
    fn trefoil_switch_unknots() {
        let t = parse_braid("BR[2, [1,1,1]]").unwrap();
        let c = t.crossing_ids().next().unwrap();
        let s = t.switch_crossing(c).unwrap();
        // One switch gives an unknot diagram at blackboard framing +1.
        let delta = loop_value(RingSig::az());
        assert_eq!(evaluate_s3(&s).unwrap(), delta.mul_var_pow("a", 1));
    }

    #[test]
    fn skein_triples_hold() {
        for text in ["BR[2, [1,1,1]]", "BR[2, [1,1]]", "BR[3, [1,2,1,2]]"] {
            let d = parse_braid(text).unwrap();
            let c = d.crossing_ids().next().unwrap();
            assert_eq!(d.sign(c), Some(1));
            let minus = d.switch_crossing(c).unwrap();
            let zero = d.smooth_crossing(c).unwrap();
            assert!(check_skein_triple(&d, &minus, &zero).unwrap());
        }
    }

    #[test]
    fn wrong_smoothing_fails_the_triple() {
        let t = parse_braid("BR[2, [1,1,1]]").unwrap();
        let c = t.crossing_ids().next().unwrap();
        let minus = t.switch_crossing(c).unwrap();
        // Structurally plausible but wrong d₀: smooth, then switch another
        // crossing.
        let zero = t.smooth_crossing(c).unwrap();
        let other = zero.crossing_ids().next().unwrap();
        let wrong = zero.switch_crossing(other).unwrap();
        assert!(!check_skein_triple(&t, &minus, &wrong).unwrap());
        // Structurally invalid d₀: wrong crossing ids.
        assert!(check_skein_triple(&t, &minus, &t).is_err());
    }

    #[test]
    fn split_union_multiplies() {
        let t = parse_braid("BR[2, [1,1,1]]").unwrap();
        let h = parse_braid("BR[2, [1,1]]").unwrap();
        let u = t.split_union(&h).unwrap();
        let ev = Evaluator::new();
        assert_eq!(
            ev.evaluate(&u).unwrap(),
            ev.evaluate(&t).unwrap().mul(&ev.evaluate(&h).unwrap())
        );
    }

    #[test]
    fn connected_sum_identity() {
        let t = parse_braid("BR[2, [1,1,1]]").unwrap();
        let f = parse_braid("BR[3, [1,-2,1,-2]]").unwrap();
        let s = t.connected_sum(&f).unwrap();
        let ev = Evaluator::new();
        let delta = loop_value(ev.sig());
        assert_eq!(
            ev.evaluate(&s).unwrap().mul(&delta),
            ev.evaluate(&t).unwrap().mul(&ev.evaluate(&f).unwrap())
        );
    }

    #[test]
    fn mirror_inverts_a_negates_z() {
        for text in ["BR[2, [1,1,1]]", "BR[3, [1,-2,1,-2]]", "BR[3, [1,2,1,2]]"] {
            let d = parse_braid(text).unwrap();
            let m = d.mirror();
            let v = evaluate_s3(&d).unwrap();
            assert_eq!(evaluate_s3(&m).unwrap(), v.invert_var("a").negate_var("z"));
        }
    }

    #[test]
    fn framing_change_multiplies_by_a() {
        let t = parse_braid("BR[2, [1,1,1]]").unwrap();
        let v = evaluate_s3(&t).unwrap();
        let up = t.with_correction(0, 1).unwrap();
        assert_eq!(evaluate_s3(&up).unwrap(), v.mul_var_pow("a", 1));
        let kinked = t.add_kink(0, 1).unwrap();
        assert_eq!(evaluate_s3(&kinked).unwrap(), v.mul_var_pow("a", 1));
        let down = t.add_kink(0, -1).unwrap();
        assert_eq!(evaluate_s3(&down).unwrap(), v.mul_var_pow("a", -1));
    }

    #[test]
    fn annulus_diagrams_are_rejected() {
        let a = FramedDiagram::annulus_loop(1);
        assert_eq!(evaluate_s3(&a), Err(SkeinError::NotS3));
    }

    #[test]
    fn memo_reuse_is_consistent() {
        let ev = Evaluator::new();
        let t = parse_braid("BR[2, [1,1,1]]").unwrap();
        let first = ev.evaluate(&t).unwrap();
        let second = ev.evaluate(&t).unwrap();
        assert_eq!(first, second);
        assert_eq!(first, evaluate_s3(&t).unwrap());
    }
}
