//! Formal group laws `F(x, y) = x + y + Σ a_ij x^i y^j`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FglKind {
    Additive,
    Multiplicative,
    Generic,
}

impl FglKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FglKind::Additive => "additive",
            FglKind::Multiplicative => "multiplicative",
            FglKind::Generic => "generic",
        }
    }
}

/// A one-dimensional commutative formal group law.
///
/// `coeffs` holds the nonzero `a_ij` with `i, j ≥ 1`. When `degree_cap` is
/// `Some(N)` only coefficients of total degree `≤ N` are known and every
/// evaluation is truncated accordingly; `None` means the listed coefficients
/// are the whole law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroupLaw {
    kind: FglKind,
    coeffs: BTreeMap<(u32, u32), Coeff>,
    degree_cap: Option<u32>,
}

/// Truncated univariate series `Σ c_k t^k`, index = degree.
pub(crate) type UniSeries = Vec<Coeff>;

fn uni_mul(a: &[Coeff], b: &[Coeff], top: usize) -> UniSeries {
    let mut out = vec![Coeff::zero(); top + 1];
    for (i, x) in a.iter().enumerate().take(top + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(top + 1 - i) {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

impl FormalGroupLaw {
    /// `F(x, y) = x + y`.
    pub fn additive() -> Self {
        FormalGroupLaw {
            kind: FglKind::Additive,
            coeffs: BTreeMap::new(),
            degree_cap: None,
        }
    }

    /// `F(x, y) = x + y − βxy` over `Q[β, β⁻¹]`.
    pub fn multiplicative() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1, 1), -Coeff::beta());
        FormalGroupLaw {
            kind: FglKind::Multiplicative,
            coeffs,
            degree_cap: None,
        }
    }

    /// A law given by its coefficients up to total degree `degree_cap`.
    ///
    /// Entries with a zero index encode the unit axiom: `a_10 = a_01 = 1` and
    /// all other `a_i0`, `a_0j` vanish. The law is validated for the unit
    /// axiom, commutativity and associativity modulo degree `degree_cap + 1`.
    pub fn generic<I>(entries: I, degree_cap: u32) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, Coeff)>,
    {
        if degree_cap < 2 {
            return Err(Error::InvalidFgl("degree cap must be at least 2".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (i, j, c) in entries {
            if i == 0 || j == 0 {
                let expected = if i + j == 1 {
                    Coeff::one()
                } else {
                    Coeff::zero()
                };
                if c != expected {
                    return Err(Error::InvalidFgl(format!(
                        "unit axiom F(x,0) = x violated by a_{i}{j} = {c}"
                    )));
                }
                continue;
            }
            if i + j > degree_cap {
                return Err(Error::InvalidFgl(format!(
                    "coefficient a_{i},{j} exceeds the degree cap {degree_cap}"
                )));
            }
            if coeffs.insert((i, j), c).is_some() {
                return Err(Error::InvalidFgl(format!(
                    "duplicate coefficient a_{i},{j}"
                )));
            }
        }
        coeffs.retain(|_, c: &mut Coeff| !c.is_zero());
        for (&(i, j), c) in &coeffs {
            let mirror = coeffs.get(&(j, i)).cloned().unwrap_or_default();
            if *c != mirror {
                return Err(Error::InvalidFgl(format!(
                    "not commutative: a_{i},{j} = {c} but a_{j},{i} = {mirror}"
                )));
            }
        }
        let law = FormalGroupLaw {
            kind: FglKind::Generic,
            coeffs,
            degree_cap: Some(degree_cap),
        };
        law.check_associativity()?;
        Ok(law)
    }

    /// Reads the JSON schema `{ "kind", "degree_cap", "coeffs": [[i, j, c], …] }`.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        crate::json::fgl_from_json(&text)
    }

    pub fn kind(&self) -> FglKind {
        self.kind
    }

    pub fn degree_cap(&self) -> Option<u32> {
        self.degree_cap
    }

    /// `a_ij` for `i, j ≥ 1`.
    pub fn coefficient(&self, i: u32, j: u32) -> Coeff {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&(u32, u32), &Coeff)> {
        self.coeffs.iter()
    }

    /// Substitutes a rational value for `β` in every coefficient, producing a
    /// law over the rationals.
    pub fn specialize_beta(&self, value: &Rational) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            let v = c
                .specialize(value)
                .ok_or_else(|| Error::InvalidFgl("cannot specialize β to 0".into()))?;
            if !v.is_zero() {
                coeffs.insert(k, Coeff::from(v));
            }
        }
        let kind = if coeffs.is_empty() {
            FglKind::Additive
        } else {
            FglKind::Generic
        };
        Ok(FormalGroupLaw {
            kind,
            coeffs,
            degree_cap: self.degree_cap,
        })
    }

    /// `F(s, t)` for series with zero constant term.
    pub fn evaluate(&self, s: &Series, t: &Series) -> Result<Series> {
        if !s.constant_term().is_zero() || !t.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut p = s.precision().min(t.precision());
        let vs = s.valuation().unwrap_or(s.precision() + 1).max(1);
        let vt = t.valuation().unwrap_or(t.precision() + 1).max(1);
        if let Some(cap) = self.degree_cap {
            // Unknown terms have i + j > cap, hence degree ≥ (cap + 1)·min(vs, vt).
            p = p.min((cap + 1) * vs.min(vt) - 1);
        }
        let s = s.truncate(p);
        let t = t.truncate(p);
        let mut out = s.add(&t);
        if self.coeffs.is_empty() {
            return Ok(out);
        }
        let max_i = self.coeffs.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.coeffs.keys().map(|k| k.1).max().unwrap_or(0);
        let mut spow = vec![Series::one(s.nvars(), p)];
        for k in 1..=max_i {
            if k * vs > p {
                break;
            }
            let next = spow[k as usize - 1].mul(&s);
            spow.push(next);
        }
        let mut tpow = vec![Series::one(t.nvars(), p)];
        for k in 1..=max_j {
            if k * vt > p {
                break;
            }
            let next = tpow[k as usize - 1].mul(&t);
            tpow.push(next);
        }
        for (&(i, j), c) in &self.coeffs {
            if i * vs + j * vt > p {
                continue;
            }
            let term = spow[i as usize].mul(&tpow[j as usize]).scale(c);
            out = out.add(&term);
        }
        Ok(out.truncate(p))
    }

    /// Coefficients of `F(a(t), b(t))` for univariate series without constant term.
    fn evaluate_uni(&self, a: &[Coeff], b: &[Coeff], top: usize) -> UniSeries {
        let mut out = vec![Coeff::zero(); top + 1];
        for k in 1..=top {
            if let Some(x) = a.get(k) {
                out[k] += x;
            }
            if let Some(y) = b.get(k) {
                out[k] += y;
            }
        }
        if self.coeffs.is_empty() {
            return out;
        }
        let mut apow: Vec<UniSeries> = vec![{
            let mut one = vec![Coeff::zero(); top + 1];
            one[0] = Coeff::one();
            one
        }];
        let mut bpow = apow.clone();
        for (&(i, j), c) in &self.coeffs {
            if (i + j) as usize > top {
                continue;
            }
            while apow.len() <= i as usize {
                let next = uni_mul(apow.last().unwrap(), a, top);
                apow.push(next);
            }
            while bpow.len() <= j as usize {
                let next = uni_mul(bpow.last().unwrap(), b, top);
                bpow.push(next);
            }
            let prod = uni_mul(&apow[i as usize], &bpow[j as usize], top);
            for (k, v) in prod.iter().enumerate() {
                if !v.is_zero() {
                    out[k] += &(v * c);
                }
            }
        }
        out
    }

    /// Degree up to which univariate expansions of this law are exact, given
    /// a requested degree.
    pub(crate) fn known_degree(&self, requested: u32) -> u32 {
        match self.degree_cap {
            Some(cap) => requested.min(cap),
            None => requested,
        }
    }

    /// The formal inverse `ι(t)` with `F(t, ι(t)) = 0`, up to degree `top`.
    pub(crate) fn inverse_uni(&self, top: u32) -> UniSeries {
        let top = top as usize;
        let mut inv = vec![Coeff::zero(); top + 1];
        if top >= 1 {
            inv[1] = Coeff::from_int(-1);
        }
        let t: UniSeries = {
            let mut v = vec![Coeff::zero(); top + 1];
            if top >= 1 {
                v[1] = Coeff::one();
            }
            v
        };
        // ∂F/∂y(0,0) = 1, so the degree-d coefficient is fixed by the
        // degree-d part of F(t, ι_{<d}(t)).
        for d in 2..=top {
            let partial = self.evaluate_uni(&t, &inv[..d], d);
            inv[d] = -partial[d].clone();
        }
        inv
    }

    /// The formal multiple `[m](t)`, up to degree `top`.
    pub(crate) fn multiple_uni(&self, m: i64, top: u32) -> UniSeries {
        let top_us = top as usize;
        let mut t = vec![Coeff::zero(); top_us + 1];
        if top_us >= 1 {
            t[1] = Coeff::one();
        }
        let mut acc = vec![Coeff::zero(); top_us + 1];
        for _ in 0..m.unsigned_abs() {
            acc = self.evaluate_uni(&acc, &t, top_us);
        }
        if m < 0 {
            let inv = self.inverse_uni(top);
            acc = compose_uni(&inv, &acc, top_us);
        }
        acc
    }

    /// Checks `F(F(x,y),z) = F(x,F(y,z))` modulo degree `N + 1` for the
    /// degree cap `N` (or degree 12 for exact laws).
    pub fn check_associativity(&self) -> Result<()> {
        let n = self.degree_cap.unwrap_or(12);
        let x = Series::var(3, n, 0);
        let y = Series::var(3, n, 1);
        let z = Series::var(3, n, 2);
        let left = self.evaluate(&self.evaluate(&x, &y)?, &z)?;
        let right = self.evaluate(&x, &self.evaluate(&y, &z)?)?;
        let diff = left.sub(&right);
        let first = diff.terms().next().map(|(m, c)| (m.exps(3), c.clone()));
        match first {
            None => Ok(()),
            Some((e, c)) => Err(Error::InvalidFgl(format!(
                "not associative: F(F(x,y),z) - F(x,F(y,z)) has term {c}·x^{e:?}"
            ))),
        }
    }
}

/// `outer(inner(t))` for `inner` without constant term.
fn compose_uni(outer: &[Coeff], inner: &[Coeff], top: usize) -> UniSeries {
    let mut acc = vec![Coeff::zero(); top + 1];
    for k in (0..outer.len().min(top + 1)).rev() {
        acc = uni_mul(&acc, inner, top);
        acc[0] += &outer[k];
    }
    acc
}
