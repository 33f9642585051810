//! Truncated formal power series in the homology-class variables Q.
//!
//! Coefficients are generic: Laurent polynomials for plain counts, or full
//! multi-brane skein elements for partition functions.  Multi-indices are
//! componentwise nonnegative and stored only up to the truncation order
//! (total degree); the constant term is tracked explicitly.

use super::{Coeff, LaurentError, LaurentPoly};
use std::collections::BTreeMap;

/// What a series coefficient must support.  `ring_one` returns the identity
/// of the same ring as `self` (carrying its signature along).
pub trait SeriesElem: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn ring_one(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiply by `var^e` in the coefficient ring (used by the conifold
    /// substitution Q = a^2).
    fn mul_var_pow(&self, var: &str, e: i32) -> Self;
}

impl<C: Coeff> SeriesElem for LaurentPoly<C> {
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn ring_one(&self) -> Self {
        LaurentPoly::one(self.sig().clone())
    }
    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn mul_var_pow(&self, var: &str, e: i32) -> Self {
        LaurentPoly::mul_var_pow(self, var, e)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct QSeries<T> {
    qvars: Vec<String>,
    trunc: u32,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: SeriesElem> QSeries<T> {
    pub fn new(qvars: Vec<String>, trunc: u32) -> Self {
        QSeries {
            qvars,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn qvars(&self) -> &[String] {
        &self.qvars
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &T)> {
        self.terms.iter().map(|(d, t)| (d.as_slice(), t))
    }

    pub fn coeff(&self, d: &[u32]) -> Option<&T> {
        self.terms.get(d)
    }

    fn total(d: &[u32]) -> u32 {
        d.iter().sum()
    }

    /// Add `t` to the coefficient of Q^d; degrees beyond the truncation are
    /// dropped.
    pub fn add_term(&mut self, d: &[u32], t: T) {
        assert_eq!(
            d.len(),
            self.qvars.len(),
            "class length != number of Q variables"
        );
        if Self::total(d) > self.trunc || t.is_zero() {
            return;
        }
        match self.terms.entry(d.to_vec()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(t);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&t);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_compat(&self, other: &Self) -> Result<(), LaurentError> {
        if self.qvars != other.qvars {
            return Err(LaurentError::QVarMismatch);
        }
        if self.trunc != other.trunc {
            return Err(LaurentError::TruncationMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (d, t) in &other.terms {
            out.add_term(d, t.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_compat(other)?;
        let mut out = QSeries::new(self.qvars.clone(), self.trunc);
        for (d1, t1) in &self.terms {
            for (d2, t2) in &other.terms {
                let d: Vec<u32> = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
                if Self::total(&d) > self.trunc {
                    continue;
                }
                out.add_term(&d, t1.mul(t2));
            }
        }
        Ok(out)
    }

    /// Geometric-series inverse; requires the constant term to be exactly 1.
    pub fn invert(&self) -> Result<Self, LaurentError> {
        let zero_idx = vec![0u32; self.qvars.len()];
        let one = match self.terms.get(&zero_idx) {
            Some(c0) if *c0 == c0.ring_one() => c0.ring_one(),
            _ => return Err(LaurentError::NonUnitConstant),
        };
        let mut inv = QSeries::new(self.qvars.clone(), self.trunc);
        inv.add_term(&zero_idx, one);
        // Graded recursion: b_d = -sum_{0 < e <= d} a_e * b_{d-e}.
        for d in graded_indices(self.qvars.len(), self.trunc) {
            if d == zero_idx {
                continue;
            }
            let mut acc: Option<T> = None;
            for (e, a_e) in &self.terms {
                if *e == zero_idx || !dominates(&d, e) {
                    continue;
                }
                let rest: Vec<u32> = d.iter().zip(e).map(|(x, y)| x - y).collect();
                if let Some(b) = inv.terms.get(&rest) {
                    let prod = a_e.mul(b);
                    acc = Some(match acc {
                        None => prod,
                        Some(s) => s.add(&prod),
                    });
                }
            }
            if let Some(s) = acc {
                inv.add_term(&d, s.neg());
            }
        }
        Ok(inv)
    }

    /// Series division `self / den` (both with unit constant term on `den`).
    pub fn divide(&self, den: &Self) -> Result<Self, LaurentError> {
        self.mul(&den.invert()?)
    }
}

fn dominates(d: &[u32], e: &[u32]) -> bool {
    d.iter().zip(e).all(|(x, y)| x >= y)
}

/// All componentwise-nonnegative multi-indices of total degree <= trunc,
/// in graded order.
fn graded_indices(k: usize, trunc: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    for total in 0..=trunc {
        fill(&mut out, &mut cur, 0, total);
    }
    return out;

    fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, rem: u32) {
        if pos + 1 == cur.len() {
            cur[pos] = rem;
            out.push(cur.clone());
            return;
        }
        for v in 0..=rem {
            cur[pos] = v;
            fill(out, cur, pos + 1, rem - v);
        }
    }
}

/// Substitute Q = a^2 into a single-variable series, merging exponents into
/// the coefficient ring exactly.
pub fn conifold_substitute<T: SeriesElem>(s: &QSeries<T>, a_var: &str) -> Result<T, LaurentError> {
    if s.qvars.len() != 1 {
        return Err(LaurentError::WrongSignature(
            "a single Q variable".to_string(),
        ));
    }
    let mut acc: Option<T> = None;
    for (d, t) in &s.terms {
        let shifted = t.mul_var_pow(a_var, 2 * i32::try_from(d[0]).unwrap());
        acc = Some(match acc {
            None => shifted,
            Some(a) => a.add(&shifted),
        });
    }
    // Empty series: the zero element has no sample to build from, so callers
    // should not substitute into an identically-zero series.
    acc.ok_or(LaurentError::NonUnitConstant)
}

impl<T: SeriesElem + std::fmt::Display> std::fmt::Display for QSeries<T> {
    /// Terms in lexicographic degree order; coefficients other than `1` are
    /// parenthesized against the Q monomial.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (d, t) in &self.terms {
            let qpow: Vec<String> = d
                .iter()
                .zip(&self.qvars)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, v)| {
                    if e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            let coeff = t.to_string();
            parts.push(if qpow.is_empty() {
                coeff
            } else {
                let q = qpow.join("*");
                if coeff == "1" {
                    q
                } else {
                    format!("({coeff}) * {q}")
                }
            });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{loop_value, IntPoly, RingSig};
    use super::*;

    fn azq() -> std::sync::Arc<RingSig> {
        RingSig::new(&["a", "z"])
    }

    #[test]
    fn series_display_orders_terms_by_degree() {
        let sig = azq();
        let one = IntPoly::one(sig.clone());
        let mut s = QSeries::new(vec!["Q".to_string()], 3);
        s.add_term(&[0], one.clone());
        s.add_term(&[1], loop_value(sig.clone()));
        s.add_term(&[2], one.clone());
        assert_eq!(s.to_string(), "1 + (a*z^-1 - a^-1*z^-1) * Q + Q^2");
        let empty: QSeries<IntPoly> = QSeries::new(vec!["Q".to_string()], 3);
        assert_eq!(empty.to_string(), "0");
    }

    #[test]
    fn invert_geometric() {
        // (1 + cQ)^-1 = 1 - cQ + c^2 Q^2 at truncation 2, with c = a.
        let sig = azq();
        let one = IntPoly::one(sig.clone());
        let c = IntPoly::var(sig.clone(), "a");
        let mut s = QSeries::new(vec!["Q".to_string()], 2);
        s.add_term(&[0], one.clone());
        s.add_term(&[1], c.clone());
        let inv = s.invert().unwrap();
        assert_eq!(inv.coeff(&[0]), Some(&one));
        assert_eq!(inv.coeff(&[1]), Some(&c.neg()));
        assert_eq!(inv.coeff(&[2]), Some(&c.mul(&c)));
        // s * s^-1 = 1 up to truncation.
        let prod = s.mul(&inv).unwrap();
        assert_eq!(prod.coeff(&[0]), Some(&one));
        assert_eq!(prod.coeff(&[1]), None);
        assert_eq!(prod.coeff(&[2]), None);
    }

    #[test]
    fn invert_requires_unit_constant() {
        let sig = azq();
        let mut s = QSeries::new(vec!["Q".to_string()], 2);
        s.add_term(&[0], IntPoly::var(sig, "a"));
        assert_eq!(s.invert(), Err(LaurentError::NonUnitConstant));
    }

    #[test]
    fn divide_round_trips() {
        let sig = azq();
        let one = IntPoly::one(sig.clone());
        let d = loop_value(sig.clone());
        let mut num = QSeries::new(vec!["Q".to_string()], 3);
        num.add_term(&[0], one.clone());
        num.add_term(&[1], d.clone());
        num.add_term(&[2], d.pow(2));
        let mut den = QSeries::new(vec!["Q".to_string()], 3);
        den.add_term(&[0], one.clone());
        den.add_term(&[1], d.neg());
        let q = num.divide(&den).unwrap();
        let back = q.mul(&den).unwrap();
        assert_eq!(back, num);
    }

    #[test]
    fn two_variable_truncation() {
        let sig = azq();
        let one = IntPoly::one(sig.clone());
        let mut s = QSeries::new(vec!["Q1".to_string(), "Q2".to_string()], 2);
        s.add_term(&[0, 0], one.clone());
        s.add_term(&[1, 0], one.clone());
        s.add_term(&[0, 1], one.clone());
        let sq = s.mul(&s).unwrap();
        // (1 + Q1 + Q2)^2 truncated: cross term has coefficient 2.
        assert_eq!(sq.coeff(&[1, 1]), Some(&one.add(&one)));
        // Total degree 3 terms are dropped.
        let cube = sq.mul(&s).unwrap();
        assert!(cube.terms().all(|(d, _)| d.iter().sum::<u32>() <= 2));
    }

    #[test]
    fn conifold_merges_classes() {
        let sig = azq();
        let one = IntPoly::one(sig.clone());
        let mut s = QSeries::new(vec!["Q".to_string()], 2);
        s.add_term(&[0], one.clone());
        s.add_term(&[1], one.clone());
        s.add_term(&[2], one.clone());
        let p = conifold_substitute(&s, "a").unwrap();
        assert_eq!(p.render(), "a^4 + a^2 + 1");
    }
}
