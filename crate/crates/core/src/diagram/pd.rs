//! Text forms for diagrams: planar-diagram (PD) codes and braid words.
//!
//! PD convention: `X[i,j,k,l]` lists the four edge labels counterclockwise
//! starting from the incoming under-strand, so the under-strand runs i -> k.
//! The over-strand runs l -> j at a positive crossing and j -> l at a
//! negative one.  Orientations are recovered by constraint propagation; when
//! a crossing's over-direction is not forced (a strand that is never the
//! under-strand), the usual sequential-labeling rule breaks the tie: the
//! over-strand leaves on the next edge label, with wraparound.

use super::{Ambient, Component, CrossingId, DiagramError, FramedDiagram, Passage, Role};
use std::collections::BTreeMap;

struct Scanner<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(input: &'a str) -> Scanner<'a> {
        Scanner {
            input: input.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, msg: &str) -> DiagramError {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.input[..self.pos.min(self.input.len())] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        DiagramError::Parse {
            line,
            col,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), DiagramError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", b as char)))
        }
    }

    fn eat_word(&mut self, w: &str) -> Result<(), DiagramError> {
        self.skip_ws();
        if self.input[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", w)))
        }
    }

    fn int(&mut self) -> Result<i64, DiagramError> {
        self.skip_ws();
        let start = self.pos;
        if self.input.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        s.parse().map_err(|_| self.error("expected an integer"))
    }

    fn done(&mut self) -> Result<(), DiagramError> {
        if self.peek().is_some() {
            return Err(self.error("trailing input"));
        }
        Ok(())
    }
}

/// Parse either diagram text form: `PD[...]` or `BR[n, [...]]`.
pub fn parse_diagram(text: &str) -> Result<FramedDiagram, DiagramError> {
    let lead = text.trim_start();
    if lead.starts_with("BR") {
        parse_braid(text)
    } else {
        parse_pd(text)
    }
}

/// Parse a PD code `PD[X[i,j,k,l], ...]` into a diagram with blackboard
/// framing (corrections 0) in S³.
pub fn parse_pd(text: &str) -> Result<FramedDiagram, DiagramError> {
    let mut sc = Scanner::new(text);
    sc.eat_word("PD")?;
    sc.eat(b'[')?;
    let mut crossings: Vec<[u32; 4]> = Vec::new();
    if sc.peek() != Some(b']') {
        loop {
            sc.eat_word("X")?;
            sc.eat(b'[')?;
            let mut x = [0u32; 4];
            for (t, slot) in x.iter_mut().enumerate() {
                if t > 0 {
                    sc.eat(b',')?;
                }
                let v = sc.int()?;
                if v <= 0 || v > u32::MAX.into() {
                    return Err(sc.error("edge labels must be positive integers"));
                }
                *slot = v as u32;
            }
            sc.eat(b']')?;
            crossings.push(x);
            match sc.peek() {
                Some(b',') => {
                    sc.pos += 1;
                }
                _ => break,
            }
        }
    }
    sc.eat(b']')?;
    sc.done()?;
    build_from_pd(&crossings)
}

/// An edge end is (crossing index, slot).  In/out status of slots 1 and 3
/// depends on the crossing's over-direction `b` (true = over enters slot 3,
/// the positive crossing); slots 0/2 are always under-in/under-out.
fn end_io(slot: usize, b: bool) -> bool {
    // false = incoming, true = outgoing
    match slot {
        0 => false,
        2 => true,
        1 => b,
        3 => !b,
        _ => unreachable!(),
    }
}

fn build_from_pd(crossings: &[[u32; 4]]) -> Result<FramedDiagram, DiagramError> {
    let n = crossings.len();
    let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (t, x) in crossings.iter().enumerate() {
        for (slot, &label) in x.iter().enumerate() {
            ends.entry(label).or_default().push((t, slot));
        }
    }
    for (label, e) in &ends {
        if e.len() != 2 {
            return Err(DiagramError::BadEdgeCount(*label, e.len()));
        }
    }

    // Each end's in/out bit is a constant or b_t possibly flipped:
    // (None, f) = constant f; (Some(t), f) = b_t xor f.
    let expr = |t: usize, slot: usize| -> (Option<usize>, bool) {
        match slot {
            0 => (None, false),
            2 => (None, true),
            1 => (Some(t), false),
            3 => (Some(t), true),
            _ => unreachable!(),
        }
    };

    let mut assign: Vec<Option<bool>> = vec![None; n];
    // relations[t] = list of (t2, parity) meaning b_t xor b_t2 = parity.
    let mut relations: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    let mut queue: Vec<usize> = Vec::new();
    let set = |assign: &mut Vec<Option<bool>>,
               queue: &mut Vec<usize>,
               t: usize,
               v: bool|
     -> Result<(), DiagramError> {
        match assign[t] {
            None => {
                assign[t] = Some(v);
                queue.push(t);
                Ok(())
            }
            Some(old) if old == v => Ok(()),
            Some(_) => Err(DiagramError::OrientationInconsistent(format!(
                "contradictory over-strand direction at crossing {t}"
            ))),
        }
    };

    for (label, e) in &ends {
        let (a, b) = (e[0], e[1]);
        let (va, fa) = expr(a.0, a.1);
        let (vb, fb) = expr(b.0, b.1);
        // Constraint: bit(a) xor bit(b) = true (one in, one out).
        match (va, vb) {
            (None, None) => {
                if fa == fb {
                    return Err(DiagramError::OrientationInconsistent(format!(
                        "edge {label} has two {} under-ends",
                        if fa { "outgoing" } else { "incoming" }
                    )));
                }
            }
            (Some(t), None) => set(&mut assign, &mut queue, t, !fa ^ fb)?,
            (None, Some(t)) => set(&mut assign, &mut queue, t, !fb ^ fa)?,
            (Some(t1), Some(t2)) => {
                let parity = !(fa ^ fb);
                relations[t1].push((t2, parity));
                relations[t2].push((t1, parity));
            }
        }
    }

    loop {
        // Propagate known values through the relations.
        while let Some(t) = queue.pop() {
            let v = assign[t].unwrap();
            for &(t2, parity) in &relations[t].clone() {
                set(&mut assign, &mut queue, t2, v ^ parity)?;
            }
        }
        // Resolve one still-free crossing by the sequential-label rule.
        match assign.iter().position(|a| a.is_none()) {
            None => break,
            Some(t) => {
                let (j, l) = (crossings[t][1], crossings[t][3]);
                let b = if j == l + 1 || l > j + 1 {
                    true
                } else if l == j + 1 || j > l + 1 {
                    false
                } else {
                    return Err(DiagramError::AmbiguousOrientation(t));
                };
                set(&mut assign, &mut queue, t, b)?;
            }
        }
    }
    let dirs: Vec<bool> = assign.into_iter().map(|a| a.unwrap()).collect();

    // Walk the diagram: arriving on an edge at its incoming end, record the
    // passage and leave on the paired outgoing slot.
    let in_end = |label: u32| -> (usize, usize) {
        let e = &ends[&label];
        if end_io(e[0].1, dirs[e[0].0]) {
            e[1]
        } else {
            e[0]
        }
    };
    let mut visited: BTreeMap<u32, bool> = ends.keys().map(|&l| (l, false)).collect();
    let mut components = Vec::new();
    let labels: Vec<u32> = ends.keys().copied().collect();
    for &start in &labels {
        if visited[&start] {
            continue;
        }
        let mut passages = Vec::new();
        let mut label = start;
        loop {
            *visited.get_mut(&label).unwrap() = true;
            let (t, slot) = in_end(label);
            let role = if slot == 0 { Role::Under } else { Role::Over };
            passages.push(Passage {
                crossing: CrossingId(t as u32),
                role,
            });
            let out_slot = match slot {
                0 => 2,
                1 => 3,
                3 => 1,
                _ => unreachable!(),
            };
            label = crossings[t][out_slot];
            if label == start {
                break;
            }
            if visited[&label] {
                return Err(DiagramError::OrientationInconsistent(format!(
                    "edge {label} revisited before closing its component"
                )));
            }
        }
        components.push(Component {
            passages,
            correction: 0,
            winding: 0,
        });
    }

    let signs = dirs
        .iter()
        .enumerate()
        .map(|(t, &b)| (CrossingId(t as u32), if b { 1 } else { -1 }))
        .collect();
    FramedDiagram::from_parts(Ambient::S3, signs, components)
}

/// Parse a braid word `BR[n, [s1, s2, ...]]` (Artin generators, s = ±k for
/// sigma_k) and take its closure, with blackboard framing.
pub fn parse_braid(text: &str) -> Result<FramedDiagram, DiagramError> {
    let mut sc = Scanner::new(text);
    sc.eat_word("BR")?;
    sc.eat(b'[')?;
    let n = sc.int()?;
    if n < 1 {
        return Err(sc.error("a braid needs at least one strand"));
    }
    let n = n as usize;
    sc.eat(b',')?;
    sc.eat(b'[')?;
    let mut word = Vec::new();
    if sc.peek() != Some(b']') {
        loop {
            word.push(sc.int()?);
            match sc.peek() {
                Some(b',') => {
                    sc.pos += 1;
                }
                _ => break,
            }
        }
    }
    sc.eat(b']')?;
    sc.eat(b']')?;
    sc.done()?;
    braid_closure(n, &word)
}

/// Closure of a braid word on `n` strands.  Positive sigma_k takes the
/// strand at position k over the strand at position k+1.
pub(crate) fn braid_closure(n: usize, word: &[i64]) -> Result<FramedDiagram, DiagramError> {
    let mut strand_at: Vec<usize> = (0..n).collect();
    let mut passages: Vec<Vec<Passage>> = vec![Vec::new(); n];
    let mut signs = BTreeMap::new();
    for (idx, &g) in word.iter().enumerate() {
        let k = g.unsigned_abs() as usize;
        if g == 0 || k >= n {
            return Err(DiagramError::GeneratorOutOfRange { gen: g, n });
        }
        let id = CrossingId(idx as u32);
        let (left, right) = (strand_at[k - 1], strand_at[k]);
        if g > 0 {
            signs.insert(id, 1);
            passages[left].push(Passage {
                crossing: id,
                role: Role::Over,
            });
            passages[right].push(Passage {
                crossing: id,
                role: Role::Under,
            });
        } else {
            signs.insert(id, -1);
            passages[left].push(Passage {
                crossing: id,
                role: Role::Under,
            });
            passages[right].push(Passage {
                crossing: id,
                role: Role::Over,
            });
        }
        strand_at.swap(k - 1, k);
    }
    // Closure: the strand ending at top position p continues as the strand
    // that starts at bottom position p.
    let mut pos_of = vec![0usize; n];
    for (p, &s) in strand_at.iter().enumerate() {
        pos_of[s] = p;
    }
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for s0 in 0..n {
        if seen[s0] {
            continue;
        }
        let mut comp = Vec::new();
        let mut s = s0;
        loop {
            seen[s] = true;
            comp.extend_from_slice(&passages[s]);
            s = pos_of[s];
            if s == s0 {
                break;
            }
        }
        components.push(Component {
            passages: comp,
            correction: 0,
            winding: 0,
        });
    }
    FramedDiagram::from_parts(Ambient::S3, signs, components)
}

/// Render a diagram as a PD code, relabeling edges sequentially along each
/// component.  Only S³ diagrams with blackboard framing (no corrections)
/// and no crossing-free loops have a PD form.
pub fn render_pd(d: &FramedDiagram) -> Result<String, DiagramError> {
    if d.ambient() != Ambient::S3 {
        return Err(DiagramError::PdUnrepresentable(
            "annulus diagrams carry winding data with no PD field".to_string(),
        ));
    }
    if d.is_empty() {
        return Ok("PD[]".to_string());
    }
    for c in d.components() {
        if c.passages.is_empty() {
            return Err(DiagramError::PdUnrepresentable(
                "crossing-free loop components have no edges to label".to_string(),
            ));
        }
        if c.correction != 0 {
            return Err(DiagramError::PdUnrepresentable(
                "framing corrections are not part of PD data".to_string(),
            ));
        }
    }
    // in-label of passage t on component ci, and the label of the edge
    // leaving that passage.
    let mut base = Vec::new();
    let mut acc = 0u32;
    for c in d.components() {
        base.push(acc);
        acc += c.passages.len() as u32;
    }
    let in_label = |ci: usize, t: usize| base[ci] + t as u32 + 1;
    let out_label = |ci: usize, t: usize| {
        let k = d.components()[ci].passages.len();
        base[ci] + ((t + 1) % k) as u32 + 1
    };

    let mut under: BTreeMap<CrossingId, (usize, usize)> = BTreeMap::new();
    let mut over: BTreeMap<CrossingId, (usize, usize)> = BTreeMap::new();
    for (ci, c) in d.components().iter().enumerate() {
        for (t, p) in c.passages.iter().enumerate() {
            match p.role {
                Role::Under => under.insert(p.crossing, (ci, t)),
                Role::Over => over.insert(p.crossing, (ci, t)),
            };
        }
    }
    // Emit crossings in order of their under-passage along the traversal.
    let mut order: Vec<(CrossingId, (usize, usize))> =
        under.iter().map(|(&id, &pos)| (id, pos)).collect();
    order.sort_by_key(|&(_, pos)| pos);

    let mut xs = Vec::new();
    for (id, (uc, ut)) in order {
        let (oc, ot) = over[&id];
        let (u_in, u_out) = (in_label(uc, ut), out_label(uc, ut));
        let (o_in, o_out) = (in_label(oc, ot), out_label(oc, ot));
        let x = if d.sign(id).unwrap() > 0 {
            [u_in, o_out, u_out, o_in]
        } else {
            [u_in, o_in, u_out, o_out]
        };
        xs.push(format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3]));
    }
    Ok(format!("PD[{}]", xs.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_pd_example() {
        let d = parse_pd("PD[X[1,4,2,3], X[3,2,4,1]]").unwrap();
        assert_eq!(d.components().len(), 2);
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.writhe().abs(), 2);
        assert_eq!(d.linking(0, 1).abs(), 1);
    }

    #[test]
    fn empty_pd() {
        let d = parse_pd("PD[]").unwrap();
        assert!(d.is_empty());
        assert_eq!(render_pd(&d).unwrap(), "PD[]");
    }

    #[test]
    fn kink_pds_have_writhe_one() {
        let pos = parse_pd("PD[X[1,1,2,2]]").unwrap();
        assert_eq!(pos.components().len(), 1);
        assert_eq!(pos.writhe(), 1);
        let neg = parse_pd("PD[X[1,2,2,1]]").unwrap();
        assert_eq!(neg.components().len(), 1);
        assert_eq!(neg.writhe(), -1);
    }

    #[test]
    fn bad_edge_counts_are_rejected() {
        assert!(matches!(
            parse_pd("PD[X[1,2,3,4]]"),
            Err(DiagramError::BadEdgeCount(_, 1))
        ));
        assert!(matches!(
            parse_pd("PD[X[1,4,2,3], X[3,2,4,5]]"),
            Err(DiagramError::BadEdgeCount(_, _))
        ));
    }

    #[test]
    fn orientation_contradiction_is_rejected() {
        // Edge 1 is the incoming under-strand of both crossings.
        assert!(matches!(
            parse_pd("PD[X[1,4,2,3], X[1,2,4,3]]"),
            Err(DiagramError::OrientationInconsistent(_))
        ));
    }

    #[test]
    fn sequential_rule_resolves_all_over_strands() {
        // One circle passing entirely over another twice: the over
        // direction is not forced by propagation.
        let d = parse_pd("PD[X[1,3,2,4], X[2,3,1,4]]").unwrap();
        assert_eq!(d.components().len(), 2);
        assert_eq!(d.writhe(), 0);
        let mut signs: Vec<i8> = d.crossing_ids().map(|c| d.sign(c).unwrap()).collect();
        signs.sort();
        assert_eq!(signs, vec![-1, 1]);
    }

    #[test]
    fn braid_examples() {
        let h = parse_braid("BR[2, [1,1]]").unwrap();
        assert_eq!(h.components().len(), 2);
        assert_eq!(h.writhe(), 2);
        let t = parse_braid("BR[2, [1,1,1]]").unwrap();
        assert_eq!(t.components().len(), 1);
        assert_eq!(t.writhe(), 3);
        let u = parse_braid("BR[1, []]").unwrap();
        assert_eq!(u.crossing_count(), 0);
        assert_eq!(u.components().len(), 1);
        assert!(matches!(
            parse_braid("BR[2, [2]]"),
            Err(DiagramError::GeneratorOutOfRange { .. })
        ));
        assert!(matches!(
            parse_braid("BR[3, [0]]"),
            Err(DiagramError::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn untouched_strands_close_into_free_loops() {
        let d = parse_braid("BR[3, [1]]").unwrap();
        assert_eq!(d.components().len(), 2);
        assert!(d.components().iter().any(|c| c.passages.is_empty()));
        assert_eq!(d.writhe(), 1);
    }

    #[test]
    fn pd_round_trip_preserves_canonical_code() {
        for text in [
            "BR[2, [1,1,1]]",
            "BR[2, [1,1]]",
            "BR[3, [1,-2,1,-2]]",
            "BR[3, [1,2,1,2]]",
            "BR[4, [1,-2,3,-2,1,2]]",
            "BR[2, [-1,-1,-1]]",
        ] {
            let d = parse_braid(text).unwrap();
            let pd = render_pd(&d).unwrap();
            let back = parse_pd(&pd).unwrap();
            assert_eq!(back.canonical_code(), d.canonical_code(), "via {pd}");
            assert_eq!(back.writhe(), d.writhe());
        }
    }

    #[test]
    fn pd_render_rejects_unrepresentable_diagrams() {
        assert!(render_pd(&FramedDiagram::unlink(1)).is_err());
        assert!(render_pd(&FramedDiagram::annulus_loop(1)).is_err());
        let t = parse_braid("BR[2, [1,1,1]]")
            .unwrap()
            .with_correction(0, 1)
            .unwrap();
        assert!(render_pd(&t).is_err());
    }
}
