//! Oriented framed link diagrams and their local moves.
//!
//! A diagram is stored as its *passage structure*: each component is the
//! cyclic sequence of crossing passages met when traversing it from its
//! basepoint, plus a sign per crossing.  This is exactly the data the skein
//! recursion consumes; switching a crossing swaps the two roles there, and
//! the oriented smoothing is a cycle surgery on the passage lists.  Planar
//! embedding data beyond the passage structure is not retained.
//!
//! Framing is blackboard framing of the drawn diagram (the self-writhe)
//! plus an explicit integer correction per component, so framing changes
//! are visible data rather than extra kinks.

mod json;
mod pd;

pub(crate) use json::{from_dto, to_dto, DiagramJson};
pub use json::{from_json, to_json};
pub use pd::{parse_braid, parse_diagram, parse_pd, render_pd};

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum DiagramError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("edge label {0} used {1} times; each label must appear exactly twice")]
    BadEdgeCount(u32, usize),
    #[error("inconsistent strand orientations: {0}")]
    OrientationInconsistent(String),
    #[error("cannot orient the over-strand at crossing {0}; labels are not sequential")]
    AmbiguousOrientation(usize),
    #[error("braid generator {gen} out of range for {n} strands")]
    GeneratorOutOfRange { gen: i64, n: usize },
    #[error("no crossing with id {0}")]
    UnknownCrossing(u32),
    #[error("no component with index {0}")]
    UnknownComponent(usize),
    #[error("smoothing a self-crossing in the annulus would split the winding number, which the passage structure cannot determine")]
    AnnulusSplit,
    #[error("diagram not representable in PD text: {0}")]
    PdUnrepresentable(String),
    #[error("operation requires matching ambients")]
    AmbientMismatch,
    #[error("operation requires a one-component diagram")]
    NotAKnot,
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("bad JSON: {0}")]
    Json(String),
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct CrossingId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn other(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Passage {
    pub crossing: CrossingId,
    pub role: Role,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    S3,
    Annulus,
}

/// One link component: its passage cycle from the basepoint, the framing
/// correction on top of blackboard framing, and (annulus only) the winding
/// number around the axis.  An empty passage list is a crossing-free loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    pub passages: Vec<Passage>,
    pub correction: i32,
    pub winding: i32,
}

impl Component {
    pub fn loop_component() -> Component {
        Component {
            passages: Vec::new(),
            correction: 0,
            winding: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedDiagram {
    ambient: Ambient,
    signs: BTreeMap<CrossingId, i8>,
    components: Vec<Component>,
}

/// Relabeling-invariant identity of a diagram: equal diagrams up to
/// renaming crossings, rotating basepoints, and reordering components get
/// equal codes.  Used as the memoization key for skein evaluation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl FramedDiagram {
    pub fn empty(ambient: Ambient) -> FramedDiagram {
        FramedDiagram {
            ambient,
            signs: BTreeMap::new(),
            components: Vec::new(),
        }
    }

    /// A split union of `n` crossing-free 0-framed loops.
    pub fn unlink(n: usize) -> FramedDiagram {
        FramedDiagram {
            ambient: Ambient::S3,
            signs: BTreeMap::new(),
            components: vec![Component::loop_component(); n],
        }
    }

    /// The annular loop winding `w` times around the axis (crossing-free
    /// passage data; the winding is carried as component data).
    pub fn annulus_loop(w: i32) -> FramedDiagram {
        FramedDiagram {
            ambient: Ambient::Annulus,
            signs: BTreeMap::new(),
            components: vec![Component {
                passages: Vec::new(),
                correction: 0,
                winding: w,
            }],
        }
    }

    pub fn from_parts(
        ambient: Ambient,
        signs: BTreeMap<CrossingId, i8>,
        components: Vec<Component>,
    ) -> Result<FramedDiagram, DiagramError> {
        let d = FramedDiagram {
            ambient,
            signs,
            components,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let mut seen: BTreeMap<CrossingId, Vec<Role>> = BTreeMap::new();
        for comp in &self.components {
            for p in &comp.passages {
                seen.entry(p.crossing).or_default().push(p.role);
            }
            if self.ambient == Ambient::S3 && comp.winding != 0 {
                return Err(DiagramError::Invalid(
                    "nonzero winding on an S3 diagram".to_string(),
                ));
            }
        }
        for (id, sign) in &self.signs {
            if sign.abs() != 1 {
                return Err(DiagramError::Invalid(format!(
                    "crossing {} has sign {}",
                    id.0, sign
                )));
            }
            match seen.get(id) {
                Some(roles)
                    if roles.len() == 2
                        && roles.contains(&Role::Over)
                        && roles.contains(&Role::Under) => {}
                _ => {
                    return Err(DiagramError::Invalid(format!(
                        "crossing {} must be passed exactly once over and once under",
                        id.0
                    )))
                }
            }
        }
        for id in seen.keys() {
            if !self.signs.contains_key(id) {
                return Err(DiagramError::Invalid(format!(
                    "passage through unknown crossing {}",
                    id.0
                )));
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn crossing_ids(&self) -> impl Iterator<Item = CrossingId> + '_ {
        self.signs.keys().copied()
    }

    pub fn sign(&self, c: CrossingId) -> Option<i8> {
        self.signs.get(&c).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Total writhe: the sum of all crossing signs.
    pub fn writhe(&self) -> i64 {
        self.signs.values().map(|&s| i64::from(s)).sum()
    }

    /// Blackboard self-writhe of one component: signs of the crossings both
    /// of whose passages lie on it.
    pub fn self_writhe(&self, comp: usize) -> i64 {
        let mut count: BTreeMap<CrossingId, usize> = BTreeMap::new();
        for p in &self.components[comp].passages {
            *count.entry(p.crossing).or_insert(0) += 1;
        }
        count
            .iter()
            .filter(|(_, &n)| n == 2)
            .map(|(id, _)| i64::from(self.signs[id]))
            .sum()
    }

    /// The framing of a component: blackboard self-writhe plus correction.
    pub fn framing(&self, comp: usize) -> i64 {
        self.self_writhe(comp) + i64::from(self.components[comp].correction)
    }

    /// Linking number of two distinct components: half the signed count of
    /// crossings between them.
    pub fn linking(&self, a: usize, b: usize) -> i64 {
        assert_ne!(a, b, "linking number needs two distinct components");
        let in_a: std::collections::BTreeSet<CrossingId> = self.components[a]
            .passages
            .iter()
            .map(|p| p.crossing)
            .collect();
        let total: i64 = self.components[b]
            .passages
            .iter()
            .filter(|p| in_a.contains(&p.crossing))
            .map(|p| i64::from(self.signs[&p.crossing]))
            .sum();
        debug_assert_eq!(total % 2, 0);
        total / 2
    }

    pub fn total_correction(&self) -> i64 {
        self.components
            .iter()
            .map(|c| i64::from(c.correction))
            .sum()
    }

    /// The same diagram with all framing corrections zeroed, plus the list of
    /// removed corrections.
    pub fn strip_corrections(&self) -> (FramedDiagram, Vec<i32>) {
        let mut d = self.clone();
        let corrs = d.components.iter().map(|c| c.correction).collect();
        for c in &mut d.components {
            c.correction = 0;
        }
        (d, corrs)
    }

    pub fn with_correction(&self, comp: usize, delta: i32) -> Result<FramedDiagram, DiagramError> {
        let mut d = self.clone();
        match d.components.get_mut(comp) {
            Some(c) => c.correction += delta,
            None => return Err(DiagramError::UnknownComponent(comp)),
        }
        Ok(d)
    }

    fn locate(&self, c: CrossingId) -> Result<[(usize, usize); 2], DiagramError> {
        let mut found = Vec::with_capacity(2);
        for (ci, comp) in self.components.iter().enumerate() {
            for (pi, p) in comp.passages.iter().enumerate() {
                if p.crossing == c {
                    found.push((ci, pi));
                }
            }
        }
        match found.len() {
            2 => Ok([found[0], found[1]]),
            _ => Err(DiagramError::UnknownCrossing(c.0)),
        }
    }

    /// Swap over/under at a crossing and negate its sign.  Connectivity,
    /// corrections, and windings are unchanged.
    pub fn switch_crossing(&self, c: CrossingId) -> Result<FramedDiagram, DiagramError> {
        if !self.signs.contains_key(&c) {
            return Err(DiagramError::UnknownCrossing(c.0));
        }
        let mut d = self.clone();
        *d.signs.get_mut(&c).unwrap() *= -1;
        for comp in &mut d.components {
            for p in &mut comp.passages {
                if p.crossing == c {
                    p.role = p.role.other();
                }
            }
        }
        Ok(d)
    }

    /// The oriented smoothing at a crossing: the crossing disappears and the
    /// strands reconnect respecting orientation.  A self-crossing splits its
    /// component in two; a crossing between two components merges them.
    pub fn smooth_crossing(&self, c: CrossingId) -> Result<FramedDiagram, DiagramError> {
        let [(c1, p1), (c2, p2)] = self.locate(c)?;
        let mut d = self.clone();
        d.signs.remove(&c);
        if c1 != c2 {
            // Merge: follow the under component to the crossing, continue
            // along the other component all the way around, then finish.
            let (ua, ub) = if self.components[c1].passages[p1].role == Role::Under {
                ((c1, p1), (c2, p2))
            } else {
                ((c2, p2), (c1, p1))
            };
            let a = &self.components[ua.0].passages;
            let b = &self.components[ub.0].passages;
            let mut merged = Vec::with_capacity(a.len() + b.len() - 2);
            merged.extend_from_slice(&a[..ua.1]);
            merged.extend_from_slice(&b[ub.1 + 1..]);
            merged.extend_from_slice(&b[..ub.1]);
            merged.extend_from_slice(&a[ua.1 + 1..]);
            let (keep, drop) = (c1.min(c2), c1.max(c2));
            d.components[keep] = Component {
                passages: merged,
                correction: self.components[c1].correction + self.components[c2].correction,
                winding: self.components[c1].winding + self.components[c2].winding,
            };
            d.components.remove(drop);
        } else {
            if self.ambient == Ambient::Annulus {
                return Err(DiagramError::AnnulusSplit);
            }
            let (lo, hi) = (p1.min(p2), p1.max(p2));
            let a = &self.components[c1].passages;
            let inner = Component {
                passages: a[lo + 1..hi].to_vec(),
                correction: 0,
                winding: 0,
            };
            let mut outer_pass = Vec::with_capacity(a.len() - (hi - lo) - 1);
            outer_pass.extend_from_slice(&a[hi + 1..]);
            outer_pass.extend_from_slice(&a[..lo]);
            let outer = Component {
                passages: outer_pass,
                correction: self.components[c1].correction,
                winding: self.components[c1].winding,
            };
            d.components[c1] = outer;
            d.components.insert(c1 + 1, inner);
        }
        Ok(d)
    }

    /// The mirror image: over/under swapped and all signs negated at every
    /// crossing; framing corrections negate.
    pub fn mirror(&self) -> FramedDiagram {
        let mut d = self.clone();
        for s in d.signs.values_mut() {
            *s *= -1;
        }
        for comp in &mut d.components {
            for p in &mut comp.passages {
                p.role = p.role.other();
            }
            comp.correction = -comp.correction;
        }
        d
    }

    fn max_id(&self) -> u32 {
        self.signs.keys().map(|c| c.0 + 1).max().unwrap_or(0)
    }

    /// Split (distant) union; the second diagram's crossings are relabeled
    /// past the first's.
    pub fn split_union(&self, other: &FramedDiagram) -> Result<FramedDiagram, DiagramError> {
        if self.ambient != other.ambient {
            return Err(DiagramError::AmbientMismatch);
        }
        let off = self.max_id();
        let mut d = self.clone();
        for (id, s) in &other.signs {
            d.signs.insert(CrossingId(id.0 + off), *s);
        }
        for comp in &other.components {
            let passages = comp
                .passages
                .iter()
                .map(|p| Passage {
                    crossing: CrossingId(p.crossing.0 + off),
                    role: p.role,
                })
                .collect();
            d.components.push(Component {
                passages,
                correction: comp.correction,
                winding: comp.winding,
            });
        }
        Ok(d)
    }

    /// Connected sum of two knots (one component each), joined at the
    /// basepoints.  Corrections add.
    pub fn connected_sum(&self, other: &FramedDiagram) -> Result<FramedDiagram, DiagramError> {
        if self.ambient != Ambient::S3 || other.ambient != Ambient::S3 {
            return Err(DiagramError::AmbientMismatch);
        }
        if self.components.len() != 1 || other.components.len() != 1 {
            return Err(DiagramError::NotAKnot);
        }
        let off = self.max_id();
        let mut signs = self.signs.clone();
        for (id, s) in &other.signs {
            signs.insert(CrossingId(id.0 + off), *s);
        }
        let mut passages = self.components[0].passages.clone();
        passages.extend(other.components[0].passages.iter().map(|p| Passage {
            crossing: CrossingId(p.crossing.0 + off),
            role: p.role,
        }));
        let comp = Component {
            passages,
            correction: self.components[0].correction + other.components[0].correction,
            winding: 0,
        };
        Ok(FramedDiagram {
            ambient: Ambient::S3,
            signs,
            components: vec![comp],
        })
    }

    /// Insert a curl of the given sign at the basepoint of a component,
    /// changing its blackboard framing by `sign`.
    pub fn add_kink(&self, comp: usize, sign: i8) -> Result<FramedDiagram, DiagramError> {
        assert!(sign == 1 || sign == -1, "kink sign must be +1 or -1");
        if comp >= self.components.len() {
            return Err(DiagramError::UnknownComponent(comp));
        }
        let id = CrossingId(self.max_id());
        let mut d = self.clone();
        d.signs.insert(id, sign);
        let passages = &mut d.components[comp].passages;
        passages.insert(
            0,
            Passage {
                crossing: id,
                role: Role::Over,
            },
        );
        passages.insert(
            0,
            Passage {
                crossing: id,
                role: Role::Under,
            },
        );
        Ok(d)
    }

    /// Relabeling-invariant code: the lexicographic minimum, over component
    /// orders and basepoint rotations, of the passage token strings with
    /// crossings renamed in order of first appearance.
    pub fn canonical_code(&self) -> CanonicalCode {
        let amb = match self.ambient {
            Ambient::S3 => "S3",
            Ambient::Annulus => "An",
        };
        let mut best: Option<String> = None;
        let mut used = vec![false; self.components.len()];
        self.code_search(&mut used, &BTreeMap::new(), &String::new(), &mut best);
        CanonicalCode(format!("{}:{}", amb, best.unwrap_or_default()))
    }

    fn emit_component(
        &self,
        comp: usize,
        rot: usize,
        rename: &mut BTreeMap<u32, u32>,
    ) -> (String, Vec<u32>) {
        let c = &self.components[comp];
        let k = c.passages.len();
        let mut s = String::new();
        let mut old_ids = Vec::with_capacity(k);
        for t in 0..k {
            let p = c.passages[(rot + t) % k];
            old_ids.push(p.crossing.0);
            let next = rename.len() as u32;
            let id = *rename.entry(p.crossing.0).or_insert(next);
            s.push(match p.role {
                Role::Over => 'O',
                Role::Under => 'U',
            });
            s.push(if self.signs[&p.crossing] > 0 {
                '+'
            } else {
                '-'
            });
            s.push_str(&id.to_string());
            s.push(',');
        }
        s.push_str(&format!("f{}w{};", c.correction, c.winding));
        (s, old_ids)
    }

    fn code_search(
        &self,
        used: &mut Vec<bool>,
        rename: &BTreeMap<u32, u32>,
        prefix: &String,
        best: &mut Option<String>,
    ) {
        if used.iter().all(|&u| u) {
            match best {
                Some(b) if prefix >= b => {}
                _ => *best = Some(prefix.clone()),
            }
            return;
        }
        let mut seen = std::collections::BTreeSet::new();
        for ci in 0..self.components.len() {
            if used[ci] {
                continue;
            }
            let rots = self.components[ci].passages.len().max(1);
            for rot in 0..rots {
                let mut m2 = rename.clone();
                let (tok, old_ids) = self.emit_component(ci, rot, &mut m2);
                if !seen.insert((tok.clone(), old_ids)) {
                    continue;
                }
                let cand = format!("{prefix}{tok}");
                if let Some(b) = best.as_ref() {
                    if cand.as_str() > b.as_str() {
                        continue;
                    }
                }
                used[ci] = true;
                self.code_search(used, &m2, &cand, best);
                used[ci] = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> FramedDiagram {
        parse_braid("BR[2, [1,1,1]]").unwrap()
    }

    fn hopf() -> FramedDiagram {
        parse_braid("BR[2, [1,1]]").unwrap()
    }

    #[test]
    fn braid_closure_shapes() {
        let t = trefoil();
        assert_eq!(t.components().len(), 1);
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.writhe(), 3);
        assert_eq!(t.self_writhe(0), 3);
        let h = hopf();
        assert_eq!(h.components().len(), 2);
        assert_eq!(h.crossing_count(), 2);
        assert_eq!(h.writhe(), 2);
        assert_eq!(h.self_writhe(0), 0);
        assert_eq!(h.linking(0, 1), 1);
        let u = parse_braid("BR[1, []]").unwrap();
        assert_eq!(u.components().len(), 1);
        assert_eq!(u.crossing_count(), 0);
    }

    #[test]
    fn switch_is_an_involution() {
        let t = trefoil();
        let c = t.crossing_ids().next().unwrap();
        let s = t.switch_crossing(c).unwrap();
        assert_ne!(t.canonical_code(), s.canonical_code());
        assert_eq!(s.writhe(), t.writhe() - 2);
        let back = s.switch_crossing(c).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.canonical_code(), t.canonical_code());
    }

    #[test]
    fn smoothing_changes_component_count_by_one() {
        let t = trefoil();
        for c in t.crossing_ids() {
            let s = t.smooth_crossing(c).unwrap();
            assert_eq!(s.crossing_count(), 2);
            assert_eq!(s.components().len(), 2);
        }
        let h = hopf();
        for c in h.crossing_ids() {
            let s = h.smooth_crossing(c).unwrap();
            assert_eq!(s.crossing_count(), 1);
            assert_eq!(s.components().len(), 1);
        }
    }

    #[test]
    fn smoothing_a_kink_leaves_a_free_loop() {
        let u = FramedDiagram::unlink(1);
        let k = u.add_kink(0, 1).unwrap();
        assert_eq!(k.writhe(), 1);
        assert_eq!(k.self_writhe(0), 1);
        let s = k.smooth_crossing(k.crossing_ids().next().unwrap()).unwrap();
        assert_eq!(s.components().len(), 2);
        assert!(s.components().iter().all(|c| c.passages.is_empty()));
    }

    #[test]
    fn mirror_negates_writhe_and_corrections() {
        let t = trefoil().with_correction(0, 2).unwrap();
        let m = t.mirror();
        assert_eq!(m.writhe(), -3);
        assert_eq!(m.components()[0].correction, -2);
        assert_eq!(m.mirror(), t);
    }

    #[test]
    fn split_union_is_additive() {
        let t = trefoil();
        let h = hopf();
        let u = t.split_union(&h).unwrap();
        assert_eq!(u.writhe(), t.writhe() + h.writhe());
        assert_eq!(u.components().len(), 3);
        assert_eq!(u.crossing_count(), 5);
        u.validate().unwrap();
    }

    #[test]
    fn connected_sum_concatenates() {
        let t = trefoil();
        let s = t.connected_sum(&t).unwrap();
        assert_eq!(s.components().len(), 1);
        assert_eq!(s.crossing_count(), 6);
        assert_eq!(s.writhe(), 6);
        assert!(t.connected_sum(&hopf()).is_err());
    }

    #[test]
    fn canonical_code_ignores_labels_and_rotation() {
        let t = trefoil();
        // Relabel crossings 0,1,2 -> 7,5,9 and rotate the basepoint.
        let mut signs = BTreeMap::new();
        let names = [7u32, 5, 9];
        for (i, c) in t.crossing_ids().enumerate() {
            signs.insert(CrossingId(names[i]), t.sign(c).unwrap());
        }
        let mut passages: Vec<Passage> = t.components()[0]
            .passages
            .iter()
            .map(|p| Passage {
                crossing: CrossingId(names[p.crossing.0 as usize]),
                role: p.role,
            })
            .collect();
        passages.rotate_left(2);
        let relabeled = FramedDiagram::from_parts(
            Ambient::S3,
            signs,
            vec![Component {
                passages,
                correction: 0,
                winding: 0,
            }],
        )
        .unwrap();
        assert_eq!(relabeled.canonical_code(), t.canonical_code());
        assert_ne!(t.canonical_code(), hopf().canonical_code());
    }

    #[test]
    fn canonical_code_ignores_component_order() {
        let t = trefoil();
        let h = hopf();
        let a = t.split_union(&h).unwrap();
        let b = h.split_union(&t).unwrap();
        assert_eq!(a.canonical_code(), b.canonical_code());
    }

    #[test]
    fn annulus_split_smoothing_is_rejected() {
        let mut signs = BTreeMap::new();
        signs.insert(CrossingId(0), 1);
        let comp = Component {
            passages: vec![
                Passage {
                    crossing: CrossingId(0),
                    role: Role::Under,
                },
                Passage {
                    crossing: CrossingId(0),
                    role: Role::Over,
                },
            ],
            correction: 0,
            winding: 1,
        };
        let d = FramedDiagram::from_parts(Ambient::Annulus, signs, vec![comp]).unwrap();
        assert_eq!(
            d.smooth_crossing(CrossingId(0)),
            Err(DiagramError::AnnulusSplit)
        );
    }

    #[test]
    fn writhe_drops_by_twice_the_sign_on_switch() {
        let t = trefoil();
        for c in t.crossing_ids() {
            let s = t.switch_crossing(c).unwrap();
            assert_eq!(s.writhe(), t.writhe() - 2 * i64::from(t.sign(c).unwrap()));
        }
    }
}
