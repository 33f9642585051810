//! Tensor products of skein modules over a fixed brane list.
//!
//! Each brane carries its own framing variable (brane 0 gets `a`, brane j
//! gets `a{j}`), while the Euler-characteristic variable `z` is shared:
//! the tensor product is taken over Z[z±].  S³ branes hold framed link
//! classes; solid-torus branes hold formal monomials in the annular
//! generators ℓᵢ.

use super::{Evaluator, SkeinError};
use crate::diagram::{Ambient, CanonicalCode, FramedDiagram};
use crate::laurent::{RatPoly, RingSig};
use num::BigRational;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BraneAmbient {
    S3,
    SolidTorus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraneSpec {
    pub name: String,
    pub ambient: BraneAmbient,
}

impl BraneSpec {
    pub fn s3(name: &str) -> BraneSpec {
        BraneSpec {
            name: name.to_string(),
            ambient: BraneAmbient::S3,
        }
    }

    pub fn torus(name: &str) -> BraneSpec {
        BraneSpec {
            name: name.to_string(),
            ambient: BraneAmbient::SolidTorus,
        }
    }
}

/// The fixed brane list of a tensor product, with its coefficient ring
/// (one `a`-variable per brane, a shared `z`).
#[derive(Debug)]
pub struct BraneList {
    specs: Vec<BraneSpec>,
    sig: Arc<RingSig>,
}

fn a_var_name(j: usize) -> String {
    if j == 0 {
        "a".to_string()
    } else {
        format!("a{j}")
    }
}

impl BraneList {
    pub fn new(specs: Vec<BraneSpec>) -> Arc<BraneList> {
        let mut vars: Vec<String> = (0..specs.len()).map(a_var_name).collect();
        vars.push("z".to_string());
        let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let sig = RingSig::new(&refs);
        Arc::new(BraneList { specs, sig })
    }

    pub fn specs(&self) -> &[BraneSpec] {
        &self.specs
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn sig(&self) -> Arc<RingSig> {
        self.sig.clone()
    }

    pub fn a_var(&self, j: usize) -> String {
        a_var_name(j)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.specs.iter().position(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum FactorKey {
    Link(CanonicalCode),
    Ann(BTreeMap<i32, u32>),
}

/// One brane's contribution to a pure tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensorFactor {
    /// A framed link class in an S³ brane.
    Link(FramedDiagram),
    /// A product of annular generators, by index with repetition
    /// (`[1, 1]` is ℓ₁²); the empty list is the unit.
    Ann(Vec<i32>),
}

#[derive(Debug, Clone)]
pub struct BraneSkein {
    branes: Arc<BraneList>,
    terms: BTreeMap<Vec<FactorKey>, RatPoly>,
    links: BTreeMap<CanonicalCode, FramedDiagram>,
}

impl PartialEq for BraneSkein {
    fn eq(&self, other: &Self) -> bool {
        self.branes.specs == other.branes.specs && self.terms == other.terms
    }
}

impl BraneSkein {
    pub fn zero(branes: Arc<BraneList>) -> BraneSkein {
        BraneSkein {
            branes,
            terms: BTreeMap::new(),
            links: BTreeMap::new(),
        }
    }

    fn empty_link_key(links: &mut BTreeMap<CanonicalCode, FramedDiagram>) -> FactorKey {
        let empty = FramedDiagram::empty(Ambient::S3);
        let code = empty.canonical_code();
        links.entry(code.clone()).or_insert(empty);
        FactorKey::Link(code)
    }

    /// The unit: every S³ factor empty, every annular factor 1.
    pub fn unit(branes: Arc<BraneList>) -> BraneSkein {
        let mut links = BTreeMap::new();
        let keys = branes
            .specs
            .iter()
            .map(|s| match s.ambient {
                BraneAmbient::S3 => Self::empty_link_key(&mut links),
                BraneAmbient::SolidTorus => FactorKey::Ann(BTreeMap::new()),
            })
            .collect();
        let mut terms = BTreeMap::new();
        terms.insert(keys, RatPoly::one(branes.sig()));
        BraneSkein {
            branes,
            terms,
            links,
        }
    }

    /// A pure tensor with coefficient 1; `parts` must match the brane list
    /// position by position.
    pub fn tensor(
        branes: Arc<BraneList>,
        parts: Vec<TensorFactor>,
    ) -> Result<BraneSkein, SkeinError> {
        if parts.len() != branes.len() {
            return Err(SkeinError::BraneMismatch(format!(
                "{} parts for {} branes",
                parts.len(),
                branes.len()
            )));
        }
        let mut links = BTreeMap::new();
        let mut keys = Vec::with_capacity(parts.len());
        for (j, (part, spec)) in parts.into_iter().zip(branes.specs.iter()).enumerate() {
            match (part, spec.ambient) {
                (TensorFactor::Link(d), BraneAmbient::S3) => {
                    if d.ambient() != Ambient::S3 {
                        return Err(SkeinError::BraneMismatch(format!(
                            "brane {j} ({}) needs an S³ diagram",
                            spec.name
                        )));
                    }
                    let code = d.canonical_code();
                    links.entry(code.clone()).or_insert(d);
                    keys.push(FactorKey::Link(code));
                }
                (TensorFactor::Ann(gens), BraneAmbient::SolidTorus) => {
                    let mut m = BTreeMap::new();
                    for i in gens {
                        *m.entry(i).or_insert(0) += 1;
                    }
                    keys.push(FactorKey::Ann(m));
                }
                (TensorFactor::Link(_), BraneAmbient::SolidTorus) => {
                    return Err(SkeinError::BraneMismatch(format!(
                        "brane {j} ({}) is a solid torus; give annular generators",
                        spec.name
                    )))
                }
                (TensorFactor::Ann(_), BraneAmbient::S3) => {
                    return Err(SkeinError::BraneMismatch(format!(
                        "brane {j} ({}) is an S³ brane; give a link",
                        spec.name
                    )))
                }
            }
        }
        let mut terms = BTreeMap::new();
        terms.insert(keys, RatPoly::one(branes.sig()));
        Ok(BraneSkein {
            branes,
            terms,
            links,
        })
    }

    pub fn branes(&self) -> &Arc<BraneList> {
        &self.branes
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn check_branes(&self, other: &Self) {
        assert_eq!(
            self.branes.specs, other.branes.specs,
            "mixed brane lists in tensor arithmetic"
        );
    }

    fn add_term(&mut self, keys: Vec<FactorKey>, c: RatPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(keys) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn absorb_links(&mut self, other: &Self) {
        for (code, d) in &other.links {
            self.links.entry(code.clone()).or_insert_with(|| d.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_branes(other);
        let mut out = self.clone();
        out.absorb_links(other);
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, by: &RatPoly) -> Self {
        let mut out = Self::zero(self.branes.clone());
        out.links = self.links.clone();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.mul(by));
        }
        out
    }

    /// Product: factorwise disjoint union of links and products of annular
    /// monomials, with coefficients multiplied.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_branes(other);
        let mut out = Self::zero(self.branes.clone());
        out.links = self.links.clone();
        out.absorb_links(other);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut keys = Vec::with_capacity(k1.len());
                for (f1, f2) in k1.iter().zip(k2) {
                    keys.push(match (f1, f2) {
                        (FactorKey::Link(a), FactorKey::Link(b)) => {
                            let da = &out.links[a];
                            let db = &out.links[b];
                            let union = da.split_union(db).expect("S³ factors");
                            let code = union.canonical_code();
                            let key = FactorKey::Link(code.clone());
                            out.links.entry(code).or_insert(union);
                            key
                        }
                        (FactorKey::Ann(a), FactorKey::Ann(b)) => {
                            let mut m = a.clone();
                            for (&i, &k) in b {
                                *m.entry(i).or_insert(0) += k;
                            }
                            FactorKey::Ann(m)
                        }
                        _ => unreachable!("factor kinds are fixed per brane"),
                    });
                }
                out.add_term(keys, c1.mul(c2));
            }
        }
        out
    }

    /// Multiply every coefficient by `var^e` (`var` must belong to the
    /// coefficient ring).
    pub fn mul_var_pow(&self, var: &str, e: i32) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.mul_var_pow(var, e);
        }
        out
    }

    /// Replace every S³ factor K by ⟨K⟩ · ∅, moving the skein value into
    /// the coefficient with that brane's `a`-variable.
    pub fn collapse_s3_factor(&self) -> Result<BraneSkein, SkeinError> {
        let ev = Evaluator::new();
        let mut out = Self::zero(self.branes.clone());
        for (keys, coeff) in &self.terms {
            let mut c = coeff.clone();
            let mut new_keys = keys.clone();
            for (j, key) in keys.iter().enumerate() {
                if let FactorKey::Link(code) = key {
                    let d = &self.links[code];
                    if d.is_empty() {
                        continue;
                    }
                    let v = ev.evaluate(d)?;
                    let renamed = v
                        .map_coeffs(|c| BigRational::from(c.clone()))
                        .rename_into(self.branes.sig(), &[("a", &self.branes.a_var(j))])
                        .expect("brane ring contains every brane variable");
                    c = c.mul(&renamed);
                    new_keys[j] = Self::empty_link_key(&mut out.links);
                }
            }
            out.add_term(new_keys, c);
        }
        // Keep registry entries for the factors still referenced.
        for keys in out.terms.keys() {
            for key in keys {
                if let FactorKey::Link(code) = key {
                    if let Some(d) = self.links.get(code) {
                        out.links.entry(code.clone()).or_insert_with(|| d.clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for BraneSkein {
    /// Terms print as `coeff` when every factor is the unit, otherwise as
    /// `(coeff) * factor * ...`, with annular generators written `l1`,
    /// `l-2^3`, ... and link factors by canonical code.  Brane names prefix
    /// a factor only when more than one brane of its kind exists.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let torus_count = self
            .branes
            .specs
            .iter()
            .filter(|s| s.ambient == BraneAmbient::SolidTorus)
            .count();
        let s3_count = self
            .branes
            .specs
            .iter()
            .filter(|s| s.ambient == BraneAmbient::S3)
            .count();
        let mut first = true;
        for (keys, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            for (j, key) in keys.iter().enumerate() {
                let name = &self.branes.specs[j].name;
                match key {
                    FactorKey::Link(code) => {
                        let d = &self.links[code];
                        if d.is_empty() {
                            continue;
                        }
                        if s3_count > 1 {
                            factors.push(format!("{name}:K[{}]", code.as_str()));
                        } else {
                            factors.push(format!("K[{}]", code.as_str()));
                        }
                    }
                    FactorKey::Ann(m) => {
                        for (&i, &k) in m {
                            let g = if k == 1 {
                                format!("l{i}")
                            } else {
                                format!("l{i}^{k}")
                            };
                            if torus_count > 1 {
                                factors.push(format!("{name}:{g}"));
                            } else {
                                factors.push(g);
                            }
                        }
                    }
                }
            }
            if factors.is_empty() {
                write!(f, "{}", c.render())?;
            } else {
                write!(f, "({}) * {}", c.render(), factors.join(" * "))?;
            }
        }
        Ok(())
    }
}

impl crate::laurent::SeriesElem for BraneSkein {
    fn is_zero(&self) -> bool {
        BraneSkein::is_zero(self)
    }
    fn ring_one(&self) -> Self {
        BraneSkein::unit(self.branes.clone())
    }
    fn add(&self, other: &Self) -> Self {
        BraneSkein::add(self, other)
    }
    fn neg(&self) -> Self {
        BraneSkein::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        BraneSkein::mul(self, other)
    }
    fn mul_var_pow(&self, var: &str, e: i32) -> Self {
        BraneSkein::mul_var_pow(self, var, e)
    }
}
