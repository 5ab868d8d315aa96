//! The coefficient ring `R`: Laurent polynomials in a formal parameter `β`
//! with rational coefficients. A coefficient without `β` is an ordinary
//! rational, which is the only case the additive and generic laws produce.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::rational::Rational;

/// An element of `Q[β, β⁻¹]`, stored as `(power, coefficient)` pairs sorted
/// by power with no zero coefficients. The zero element is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Coeff {
    terms: SmallVec<[(i32, Rational); 1]>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff {
            terms: SmallVec::new(),
        }
    }

    pub fn one() -> Self {
        Coeff::from(Rational::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::from(Rational::from_int(n))
    }

    /// `c · β^power`.
    pub fn monomial(c: Rational, power: i32) -> Self {
        let mut terms = SmallVec::new();
        if !c.is_zero() {
            terms.push((power, c));
        }
        Coeff { terms }
    }

    /// The formal parameter `β`.
    pub fn beta() -> Self {
        Coeff::monomial(Rational::ONE, 1)
    }

    /// Builds a coefficient from arbitrary `(power, value)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(it: I) -> Self {
        let mut v: Vec<(i32, Rational)> = it.into_iter().collect();
        v.sort_by_key(|(p, _)| *p);
        let mut terms: SmallVec<[(i32, Rational); 1]> = SmallVec::new();
        for (p, c) in v {
            match terms.last_mut() {
                Some((q, acc)) if *q == p => *acc += &c,
                _ => terms.push((p, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Coeff { terms }
    }

    pub fn terms(&self) -> &[(i32, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// The value as a plain rational, if no `β` power appears.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::ZERO),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    /// Units of `Q[β, β⁻¹]` are exactly the nonzero monomials `c·β^k`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn inverse(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [(p, c)] => Some(Coeff::monomial(c.recip()?, -p)),
            _ => None,
        }
    }

    /// Exact quotient in `Q[β, β⁻¹]`, or `None` when `rhs` does not divide `self`.
    pub fn exact_div(&self, rhs: &Coeff) -> Option<Coeff> {
        if rhs.is_zero() {
            return None;
        }
        if let Some(inv) = rhs.inverse() {
            return Some(self * &inv);
        }
        if self.is_zero() {
            return Some(Coeff::zero());
        }
        // Long division from the top power of β down.
        let (r_lo, r_hi) = (rhs.terms[0].0, rhs.terms.last().unwrap().0);
        let r_lead = &rhs.terms.last().unwrap().1;
        let mut rem: Vec<(i32, Rational)> = self.terms.to_vec();
        let mut quot: Vec<(i32, Rational)> = Vec::new();
        let r_span = r_hi - r_lo;
        loop {
            rem.retain(|(_, c)| !c.is_zero());
            let Some((top, top_c)) = rem.last().cloned() else {
                break;
            };
            let lowest = rem[0].0;
            if top - lowest < r_span {
                return None;
            }
            let qp = top - r_hi;
            let qc = &top_c / r_lead;
            for (p, c) in rhs.terms.iter() {
                let target = qp + p;
                let delta = -(&qc * c);
                match rem.binary_search_by_key(&target, |(q, _)| *q) {
                    Ok(i) => rem[i].1 += &delta,
                    Err(i) => rem.insert(i, (target, delta)),
                }
            }
            quot.push((qp, qc));
        }
        Some(Coeff::from_terms(quot))
    }

    /// Substitutes a rational value for `β`. Negative powers require `value ≠ 0`.
    pub fn specialize(&self, value: &Rational) -> Option<Rational> {
        let mut acc = Rational::ZERO;
        for (p, c) in &self.terms {
            let base = if *p < 0 {
                value.recip()?
            } else {
                value.clone()
            };
            let mut pw = Rational::ONE;
            for _ in 0..p.unsigned_abs() {
                pw = &pw * &base;
            }
            acc += &(c * &pw);
        }
        Some(acc)
    }

    pub fn scale(&self, r: &Rational) -> Coeff {
        if r.is_zero() {
            return Coeff::zero();
        }
        Coeff {
            terms: self.terms.iter().map(|(p, c)| (*p, c * r)).collect(),
        }
    }
}

impl From<Rational> for Coeff {
    fn from(r: Rational) -> Self {
        Coeff::monomial(r, 0)
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_int(n)
    }
}

fn merge_add(a: &[(i32, Rational)], b: &[(i32, Rational)]) -> SmallVec<[(i32, Rational); 1]> {
    let mut out = SmallVec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (pa, ca) = &a[i];
        let (pb, cb) = &b[j];
        if pa < pb {
            out.push((*pa, ca.clone()));
            i += 1;
        } else if pb < pa {
            out.push((*pb, cb.clone()));
            j += 1;
        } else {
            let s = ca + cb;
            if !s.is_zero() {
                out.push((*pa, s));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().cloned());
    out
}

impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        Coeff {
            terms: merge_add(&self.terms, &rhs.terms),
        }
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        if rhs.is_zero() {
            return;
        }
        if self.terms.len() == 1 && rhs.terms.len() == 1 && self.terms[0].0 == rhs.terms[0].0 {
            let s = &self.terms[0].1 + &rhs.terms[0].1;
            if s.is_zero() {
                self.terms.clear();
            } else {
                self.terms[0].1 = s;
            }
            return;
        }
        self.terms = merge_add(&self.terms, &rhs.terms);
    }
}

impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs.clone())
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(mut self) -> Coeff {
        for (_, c) in self.terms.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() || rhs.is_zero() {
            return Coeff::zero();
        }
        if self.terms.len() == 1 && rhs.terms.len() == 1 {
            let (p, a) = &self.terms[0];
            let (q, b) = &rhs.terms[0];
            return Coeff::monomial(a * b, p + q);
        }
        Coeff::from_terms(
            self.terms
                .iter()
                .flat_map(|(p, a)| rhs.terms.iter().map(move |(q, b)| (p + q, a * b))),
        )
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, rhs: Coeff) -> Coeff {
        &self + &rhs
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        &self - &rhs
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        &self * &rhs
    }
}

/// `c*b^p` with unit coefficients elided, sign included.
fn beta_term(c: &Rational, p: i32) -> String {
    let power = match p {
        0 => return c.to_string(),
        1 => "b".to_string(),
        _ => format!("b^{p}"),
    };
    if c.is_one() {
        power
    } else if (-c.clone()).is_one() {
        format!("-{power}")
    } else {
        format!("{c}*{power}")
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.terms.len() == 1 {
            let (p, c) = &self.terms[0];
            return write!(f, "{}", beta_term(c, *p));
        }
        write!(f, "(")?;
        for (k, (p, c)) in self.terms.iter().enumerate() {
            let t = beta_term(c, *p);
            match (k, t.strip_prefix('-')) {
                (0, _) => write!(f, "{t}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {t}")?,
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i32, i64)]) -> Coeff {
        Coeff::from_terms(terms.iter().map(|&(p, c)| (p, Rational::from_int(c))))
    }

    #[test]
    fn zero_is_canonical() {
        let a = lp(&[(0, 1), (1, 2)]);
        assert!((&a - &a).is_zero());
        assert_eq!(lp(&[(3, 0)]), Coeff::zero());
    }

    #[test]
    fn laurent_units() {
        let b = Coeff::beta();
        let inv = b.inverse().unwrap();
        assert!((&b * &inv).is_one());
        assert!(lp(&[(0, 1), (1, 1)]).inverse().is_none());
    }

    #[test]
    fn exact_division_of_polynomials_in_beta() {
        // (1 + β)(2 - β^2) / (1 + β)
        let a = lp(&[(0, 1), (1, 1)]);
        let b = lp(&[(0, 2), (2, -1)]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        // (1 + β) does not divide (1 + β^2)
        assert_eq!(lp(&[(0, 1), (2, 1)]).exact_div(&a), None);
        // negative powers
        let c = lp(&[(-2, 3), (-1, 3)]);
        assert_eq!(c.exact_div(&a), Some(lp(&[(-2, 3)])));
    }

    #[test]
    fn specialization() {
        let c = lp(&[(-1, 2), (0, 1), (2, -3)]);
        assert_eq!(c.specialize(&Rational::ONE), Some(Rational::ZERO));
        assert_eq!(
            c.specialize(&Rational::from_int(2)),
            Some(Rational::from_int(-10))
        );
        assert_eq!(c.specialize(&Rational::ZERO), None);
    }
}
