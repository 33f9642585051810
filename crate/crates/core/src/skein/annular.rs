//! The skein of the solid torus, presented as the free polynomial algebra
//! on generators ℓᵢ indexed by the integers, graded by winding:
//! deg ℓᵢ = i.  Elements are kept formal; no basis reduction of general
//! annular diagrams is performed.

use super::SkeinError;
use crate::laurent::{Coeff, LaurentPoly, RingSig};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Monomial in the ℓ generators: index -> multiplicity.
type LMonomial = BTreeMap<i32, u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnularSkein<C: Coeff> {
    sig: Arc<RingSig>,
    terms: BTreeMap<LMonomial, LaurentPoly<C>>,
}

impl<C: Coeff> AnnularSkein<C> {
    pub fn zero(sig: Arc<RingSig>) -> Self {
        AnnularSkein {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sig: Arc<RingSig>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(LMonomial::new(), LaurentPoly::one(sig.clone()));
        AnnularSkein { sig, terms }
    }

    /// The generator ℓᵢ.
    pub fn gen(sig: Arc<RingSig>, i: i32) -> Self {
        let mut m = LMonomial::new();
        m.insert(i, 1);
        let mut terms = BTreeMap::new();
        terms.insert(m, LaurentPoly::one(sig.clone()));
        AnnularSkein { sig, terms }
    }

    pub fn sig(&self) -> &Arc<RingSig> {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&LMonomial::new())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn check_sig(&self, other: &Self) {
        assert_eq!(
            self.sig, other.sig,
            "mixed ring signatures in annular skein"
        );
    }

    fn insert_add(
        terms: &mut BTreeMap<LMonomial, LaurentPoly<C>>,
        m: LMonomial,
        c: LaurentPoly<C>,
    ) {
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
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

    pub fn add(&self, other: &Self) -> Self {
        self.check_sig(other);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_add(&mut terms, m.clone(), c.clone());
        }
        AnnularSkein {
            sig: self.sig.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.neg()))
            .collect();
        AnnularSkein {
            sig: self.sig.clone(),
            terms,
        }
    }

    pub fn scale(&self, by: &LaurentPoly<C>) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            Self::insert_add(&mut terms, m.clone(), c.mul(by));
        }
        AnnularSkein {
            sig: self.sig.clone(),
            terms,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_sig(other);
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                for (&i, &k) in m2 {
                    *m.entry(i).or_insert(0) += k;
                }
                Self::insert_add(&mut terms, m, c1.mul(c2));
            }
        }
        AnnularSkein {
            sig: self.sig.clone(),
            terms,
        }
    }

    fn monomial_grade(m: &LMonomial) -> i64 {
        m.iter().map(|(&i, &k)| i64::from(i) * i64::from(k)).sum()
    }

    /// The winding grade of a homogeneous element (0 for the zero element).
    pub fn grade(&self) -> Result<i64, SkeinError> {
        let mut grades = self.terms.keys().map(Self::monomial_grade);
        match grades.next() {
            None => Ok(0),
            Some(g) => {
                if grades.all(|h| h == g) {
                    Ok(g)
                } else {
                    Err(SkeinError::Inhomogeneous)
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BTreeMap<i32, u32>, &LaurentPoly<C>)> {
        self.terms.iter()
    }
}

impl<C: Coeff> fmt::Display for AnnularSkein<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let factors: Vec<String> = m
                .iter()
                .map(|(&i, &k)| {
                    if k == 1 {
                        format!("l[{i}]")
                    } else {
                        format!("l[{i}]^{k}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "({})", c.render())?;
            } else {
                write!(f, "({})*{}", c.render(), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::IntPoly;

    fn sig() -> Arc<RingSig> {
        RingSig::az()
    }

    #[test]
    fn generators_multiply_and_grade() {
        let l1: AnnularSkein<num::BigInt> = AnnularSkein::gen(sig(), 1);
        let sq = l1.mul(&l1);
        assert_eq!(sq.grade().unwrap(), 2);
        assert_eq!(format!("{sq}"), "(1)*l[1]^2");
        let l2: AnnularSkein<num::BigInt> = AnnularSkein::gen(sig(), 2);
        let lm2 = AnnularSkein::gen(sig(), -2);
        assert_eq!(l2.mul(&lm2).grade().unwrap(), 0);
        let l0 = AnnularSkein::gen(sig(), 0);
        assert_eq!(l0.mul(&sq).grade().unwrap(), 2);
    }

    #[test]
    fn grading_rejects_mixed_terms() {
        let x: AnnularSkein<num::BigInt> =
            AnnularSkein::gen(sig(), 1).add(&AnnularSkein::gen(sig(), 2));
        assert_eq!(x.grade(), Err(SkeinError::Inhomogeneous));
        assert_eq!(AnnularSkein::<num::BigInt>::zero(sig()).grade(), Ok(0));
    }

    #[test]
    fn algebra_identities() {
        let l1: AnnularSkein<num::BigInt> = AnnularSkein::gen(sig(), 1);
        let one = AnnularSkein::one(sig());
        assert_eq!(one.mul(&l1), l1);
        assert!(l1.add(&l1.neg()).is_zero());
        let z = IntPoly::var(sig(), "z");
        let zl = l1.scale(&z);
        assert_eq!(format!("{zl}"), "(z)*l[1]");
        // Commutativity.
        let l3 = AnnularSkein::gen(sig(), 3);
        assert_eq!(l1.mul(&l3), l3.mul(&l1));
    }
}
