//! Exact Laurent-polynomial arithmetic over arbitrary-precision coefficients.
//!
//! Everything downstream (skein values, curve counts, partition functions)
//! stores its scalars in [`LaurentPoly`].  Polynomials are tied to a
//! [`RingSig`] listing the variables; arithmetic across different signatures
//! is a programming error and panics with a clear message.

mod series;
mod text;

pub use series::{conifold_substitute, QSeries, SeriesElem};
pub use text::parse;

use num::{BigInt, BigRational, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Coefficient ring: exact, signed, printable, parseable.
///
/// Implemented by `BigInt` (skein values) and `BigRational` (curve weights).
pub trait Coeff: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Signed + FromStr {}
impl<T> Coeff for T where T: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Signed + FromStr {}

/// Convenience aliases for the two coefficient rings in actual use.
pub type IntPoly = LaurentPoly<BigInt>;
pub type RatPoly = LaurentPoly<BigRational>;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum LaurentError {
    #[error("unknown variable `{0}` in ring signature")]
    UnknownVar(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("series constant term is not 1; cannot invert")]
    NonUnitConstant,
    #[error("specialization is not a Laurent polynomial in q^(1/2)")]
    InexactSpecialization,
    #[error("expected a ring over exactly the variables {0}")]
    WrongSignature(String),
    #[error("series truncation orders differ")]
    TruncationMismatch,
    #[error("series Q-variables differ")]
    QVarMismatch,
}

/// One variable of a ring signature.
///
/// `half_steps` marks variables whose stored exponent counts half-units
/// (used for `q`, where the exponent lattice is (1/2)Z).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSpec {
    pub name: String,
    pub half_steps: bool,
}

/// An ordered list of variables; polynomials point to one of these.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSig {
    vars: Vec<VarSpec>,
}

impl RingSig {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Arc<Self> {
        let vars = names
            .iter()
            .map(|n| VarSpec {
                name: n.as_ref().to_string(),
                half_steps: false,
            })
            .collect();
        Arc::new(RingSig { vars })
    }

    /// The classic two-variable skein ring Z[a^±1, z^±1].
    pub fn az() -> Arc<Self> {
        Self::new(&["a", "z"])
    }

    /// The ring Z[q^±1/2] used by the U(N) specialization.
    pub fn q_half() -> Arc<Self> {
        Arc::new(RingSig {
            vars: vec![VarSpec {
                name: "q".to_string(),
                half_steps: true,
            }],
        })
    }

    pub fn from_specs(vars: Vec<VarSpec>) -> Arc<Self> {
        Arc::new(RingSig { vars })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn spec(&self, i: usize) -> &VarSpec {
        &self.vars[i]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|v| v.name.as_str())
    }
}

/// A Laurent polynomial: finitely many monomials with nonzero coefficients.
///
/// The term map is keyed by the exponent vector (aligned with the signature's
/// variable order), so equality and hashing are structural and canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C: Coeff> {
    sig: Arc<RingSig>,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(sig: Arc<RingSig>) -> Self {
        LaurentPoly {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sig: Arc<RingSig>) -> Self {
        Self::constant(sig, C::one())
    }

    pub fn constant(sig: Arc<RingSig>, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; sig.len()], c);
        }
        LaurentPoly { sig, terms }
    }

    pub fn monomial(sig: Arc<RingSig>, exps: &[i32], c: C) -> Self {
        assert_eq!(
            exps.len(),
            sig.len(),
            "exponent vector length != signature arity"
        );
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps.to_vec(), c);
        }
        LaurentPoly { sig, terms }
    }

    /// The variable `name` to the power `e` (may be negative).
    pub fn var_pow(sig: Arc<RingSig>, name: &str, e: i32) -> Self {
        let i = sig
            .var_index(name)
            .unwrap_or_else(|| panic!("variable `{name}` not in ring signature"));
        let mut exps = vec![0; sig.len()];
        exps[i] = e;
        Self::monomial(sig, &exps, C::one())
    }

    pub fn var(sig: Arc<RingSig>, name: &str) -> Self {
        Self::var_pow(sig, name, 1)
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
                .get(&vec![0; self.sig.len()][..] as &[i32])
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &C)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn coeff(&self, exps: &[i32]) -> Option<&C> {
        self.terms.get(exps)
    }

    fn check_sig(&self, other: &Self) {
        assert!(
            self.sig == other.sig,
            "mixed ring signatures: {:?} vs {:?}",
            self.sig.vars.iter().map(|v| &v.name).collect::<Vec<_>>(),
            other.sig.vars.iter().map(|v| &v.name).collect::<Vec<_>>()
        );
    }

    fn insert_add(terms: &mut BTreeMap<Vec<i32>, C>, m: Vec<i32>, c: C) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
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
        LaurentPoly {
            sig: self.sig.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        LaurentPoly {
            sig: self.sig.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_sig(other);
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Vec<i32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                Self::insert_add(&mut terms, m, c1.clone() * c2.clone());
            }
        }
        LaurentPoly {
            sig: self.sig.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.sig.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
            .collect();
        LaurentPoly {
            sig: self.sig.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.sig.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `var^e` (exact monomial shift).
    pub fn mul_var_pow(&self, name: &str, e: i32) -> Self {
        if e == 0 {
            return self.clone();
        }
        let i = self
            .sig
            .var_index(name)
            .unwrap_or_else(|| panic!("variable `{name}` not in ring signature"));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m[i] += e;
                (m, c.clone())
            })
            .collect();
        LaurentPoly {
            sig: self.sig.clone(),
            terms,
        }
    }

    /// Substitute `var -> var^-1` (negate its exponent everywhere).
    pub fn invert_var(&self, name: &str) -> Self {
        let i = self
            .sig
            .var_index(name)
            .unwrap_or_else(|| panic!("variable `{name}` not in ring signature"));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m[i] = -m[i];
                (m, c.clone())
            })
            .collect();
        LaurentPoly {
            sig: self.sig.clone(),
            terms,
        }
    }

    /// Substitute `var -> -var` (flip the sign of odd-degree terms).
    pub fn negate_var(&self, name: &str) -> Self {
        let i = self
            .sig
            .var_index(name)
            .unwrap_or_else(|| panic!("variable `{name}` not in ring signature"));
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let c = if m[i].rem_euclid(2) == 1 {
                    -c.clone()
                } else {
                    c.clone()
                };
                (m.clone(), c)
            })
            .collect();
        LaurentPoly {
            sig: self.sig.clone(),
            terms,
        }
    }

    /// Re-express this polynomial in `target`, renaming variables.
    ///
    /// `renames` maps old names to new ones; unrenamed variables keep their
    /// name and must exist in `target`.
    pub fn rename_into(
        &self,
        target: Arc<RingSig>,
        renames: &[(&str, &str)],
    ) -> Result<Self, LaurentError> {
        let mut idx_map = Vec::with_capacity(self.sig.len());
        for i in 0..self.sig.len() {
            let old = &self.sig.spec(i).name;
            let new = renames
                .iter()
                .find(|(f, _)| f == old)
                .map(|(_, t)| *t)
                .unwrap_or(old.as_str());
            let j = target
                .var_index(new)
                .ok_or_else(|| LaurentError::UnknownVar(new.to_string()))?;
            idx_map.push(j);
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = vec![0i32; target.len()];
            for (i, e) in m.iter().enumerate() {
                m2[idx_map[i]] += e;
            }
            Self::insert_add(&mut terms, m2, c.clone());
        }
        Ok(LaurentPoly { sig: target, terms })
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let d = f(c);
                if d.is_zero() {
                    None
                } else {
                    Some((m.clone(), d))
                }
            })
            .collect();
        LaurentPoly {
            sig: self.sig.clone(),
            terms,
        }
    }

    /// Evaluate at a rational point (for independent multiplication checks).
    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational
    where
        C: Into<BigRational>,
    {
        assert_eq!(point.len(), self.sig.len());
        let mut total = BigRational::from_integer(0.into());
        for (m, c) in &self.terms {
            let mut v: BigRational = c.clone().into();
            for (i, e) in m.iter().enumerate() {
                let p = point[i].pow(*e);
                v *= p;
            }
            total += v;
        }
        total
    }

    /// Render to the canonical text form; see the module docs in `text`.
    pub fn render(&self) -> String {
        text::render(self)
    }
}

impl LaurentPoly<BigInt> {
    pub fn to_rational(&self) -> LaurentPoly<BigRational> {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<C: Coeff> std::ops::Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        LaurentPoly::add(self, rhs)
    }
}

impl<C: Coeff> std::ops::Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        LaurentPoly::sub(self, rhs)
    }
}

impl<C: Coeff> std::ops::Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        LaurentPoly::mul(self, rhs)
    }
}

impl<C: Coeff> std::ops::Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly::neg(self)
    }
}

/// The loop value (a - a^-1) * z^-1 in the (a, z) ring.
pub fn loop_value(sig: Arc<RingSig>) -> IntPoly {
    let a = IntPoly::var_pow(sig.clone(), "a", 1);
    let ai = IntPoly::var_pow(sig.clone(), "a", -1);
    let zi = IntPoly::var_pow(sig, "z", -1);
    (&a - &ai).mul(&zi)
}

/// Substitute a = q^(N/2), z = q^(1/2) - q^(-1/2) into a polynomial over
/// exactly the variables (a, z).
///
/// Negative powers of z are cleared by exact division; if the result is not
/// a Laurent polynomial in q^(1/2), `InexactSpecialization` is returned
/// (this never happens for skein values of links).
pub fn specialize_un(p: &IntPoly, n: i64) -> Result<IntPoly, LaurentError> {
    let ia = p.sig().var_index("a");
    let iz = p.sig().var_index("z");
    let (ia, iz) = match (ia, iz, p.sig().len()) {
        (Some(a), Some(z), 2) => (a, z),
        _ => return Err(LaurentError::WrongSignature("a, z".to_string())),
    };

    let qsig = RingSig::q_half();
    if p.is_zero() {
        return Ok(IntPoly::zero(qsig));
    }

    // z -> x - x^-1 where x = q^(1/2); clear negative z-powers by a shared
    // power of (x - x^-1), then divide out exactly.
    let min_z = p.terms().map(|(m, _)| m[iz]).min().unwrap();
    let shift = (-min_z).max(0);
    let x = |e: i64| IntPoly::var_pow(qsig.clone(), "q", i32::try_from(e).unwrap());
    let zz = &x(1) - &x(-1);

    let mut numer = IntPoly::zero(qsig.clone());
    for (m, c) in p.terms() {
        let ea = i64::from(m[ia]);
        let t = x(ea * n)
            .scale(c)
            .mul(&zz.pow(u32::try_from(m[iz] + shift).unwrap()));
        numer = numer.add(&t);
    }
    if shift == 0 {
        return Ok(numer);
    }
    // Divide by (x - x^-1)^shift = x^-shift (x^2 - 1)^shift.
    let mut out = numer.mul_var_pow("q", shift);
    for _ in 0..shift {
        out = divide_exact_x2m1(&out)?;
    }
    Ok(out)
}

/// Exact division of a univariate Laurent polynomial (variable `q`) by
/// x^2 - 1, where x is the stored exponent unit.
fn divide_exact_x2m1(p: &IntPoly) -> Result<IntPoly, LaurentError> {
    let sig = p.sig().clone();
    if p.is_zero() {
        return Ok(IntPoly::zero(sig));
    }
    // Factor out x^min so exponents are ordinary (>= 0), then divide
    // descending; anything left below degree 2 is the remainder.
    let min = p.terms().map(|(m, _)| m[0]).min().unwrap();
    let mut rem: BTreeMap<i32, BigInt> = p.terms().map(|(m, c)| (m[0] - min, c.clone())).collect();
    let mut quo: BTreeMap<i32, BigInt> = BTreeMap::new();
    while let Some((&deg, _)) = rem.iter().next_back() {
        if deg < 2 {
            break;
        }
        let lead = rem.remove(&deg).unwrap();
        // lead * x^deg = lead * x^(deg-2) * (x^2 - 1) + lead * x^(deg-2)
        let d = deg - 2;
        *quo.entry(d).or_insert_with(num::Zero::zero) += lead.clone();
        let e = rem.entry(d).or_insert_with(num::Zero::zero);
        *e += lead;
        if e.is_zero() {
            rem.remove(&d);
        }
    }
    if rem.values().any(|c| !c.is_zero()) {
        return Err(LaurentError::InexactSpecialization);
    }
    let mut out = IntPoly::zero(sig.clone());
    for (e, c) in quo {
        if !c.is_zero() {
            out = out.add(&IntPoly::monomial(sig.clone(), &[e + min], c));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn loop_value_squared_matches_expected_text() {
        let d = loop_value(RingSig::az());
        assert_eq!(d.render(), "a*z^-1 - a^-1*z^-1");
        let sq = d.mul(&d);
        assert_eq!(sq.render(), "a^2*z^-2 - 2*z^-2 + a^-2*z^-2");
    }

    #[test]
    fn add_cancels_to_zero() {
        let sig = RingSig::az();
        let p = IntPoly::monomial(sig.clone(), &[2, -1], int(3));
        let q = p.neg();
        assert!(p.add(&q).is_zero());
        assert_eq!(p.add(&q).render(), "0");
    }

    #[test]
    fn mul_matches_rational_evaluation() {
        // Independent check of multiplication through the evaluation
        // homomorphism at a random-ish rational point.
        let sig = RingSig::az();
        let p = IntPoly::monomial(sig.clone(), &[1, 0], int(2))
            .add(&IntPoly::monomial(sig.clone(), &[-1, 2], int(-3)))
            .add(&IntPoly::constant(sig.clone(), int(5)));
        let q = IntPoly::monomial(sig.clone(), &[0, -2], int(7)).add(&IntPoly::monomial(
            sig.clone(),
            &[2, 1],
            int(1),
        ));
        let pt = vec![
            BigRational::new(int(3), int(2)),
            BigRational::new(int(-5), int(7)),
        ];
        let lhs = p.mul(&q).to_rational().eval_rational(&pt);
        let rhs = p.to_rational().eval_rational(&pt) * q.to_rational().eval_rational(&pt);
        assert_eq!(lhs, rhs);
    }

    #[test]
    #[should_panic(expected = "mixed ring signatures")]
    fn mixed_signature_addition_panics() {
        let p = IntPoly::one(RingSig::az());
        let q = IntPoly::one(RingSig::new(&["a", "z", "Q"]));
        let _ = p.add(&q);
    }

    #[test]
    fn specialize_un_unknot_at_n1_is_one() {
        let d = loop_value(RingSig::az());
        let s = specialize_un(&d, 1).unwrap();
        assert!(s.is_one());
        assert_eq!(s.render(), "1");
    }

    #[test]
    fn specialize_un_unknot_at_n2() {
        // (a - a^-1)/z at a = q becomes q^(1/2) + q^(-1/2).
        let d = loop_value(RingSig::az());
        let s = specialize_un(&d, 2).unwrap();
        assert_eq!(s.render(), "q^(1/2) + q^(-1/2)");
    }

    #[test]
    fn specialize_un_substitutes_a() {
        let a = IntPoly::var(RingSig::az(), "a");
        assert_eq!(specialize_un(&a, 2).unwrap().render(), "q");
        assert_eq!(specialize_un(&a, 3).unwrap().render(), "q^(3/2)");
    }

    #[test]
    fn specialize_un_rejects_inexact() {
        let sig = RingSig::az();
        // z^-1 alone does not specialize to a Laurent polynomial.
        let p = IntPoly::var_pow(sig, "z", -1);
        assert_eq!(
            specialize_un(&p, 1),
            Err(LaurentError::InexactSpecialization)
        );
    }

    #[test]
    fn specialize_un_is_multiplicative() {
        let sig = RingSig::az();
        let p = IntPoly::monomial(sig.clone(), &[1, 1], int(2)).add(&IntPoly::monomial(
            sig.clone(),
            &[-2, 0],
            int(3),
        ));
        let q = IntPoly::monomial(sig.clone(), &[0, 2], int(-1)).add(&IntPoly::one(sig.clone()));
        for n in 1..=3 {
            let lhs = specialize_un(&p.mul(&q), n).unwrap();
            let rhs = specialize_un(&p, n)
                .unwrap()
                .mul(&specialize_un(&q, n).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rename_into_merges_variables() {
        let sig = RingSig::az();
        let big = RingSig::new(&["a", "a2", "z"]);
        let p = loop_value(sig);
        let r = p.rename_into(big.clone(), &[("a", "a2")]).unwrap();
        assert_eq!(r.render(), "a2*z^-1 - a2^-1*z^-1");
    }

    #[test]
    fn pow_and_one() {
        let d = loop_value(RingSig::az());
        assert!(d.pow(0).is_one());
        assert_eq!(d.pow(2), d.mul(&d));
        assert!(IntPoly::one(RingSig::az()).is_one());
    }

    #[test]
    fn negate_and_invert_var() {
        let d = loop_value(RingSig::az());
        // Substituting a -> a^-1 and z -> -z fixes the loop value.
        let m = d.invert_var("a").negate_var("z");
        assert_eq!(m, d);
        let one = IntPoly::one(RingSig::az());
        assert_eq!(one.negate_var("z"), one);
    }
}
