//! Truncated multivariate power series over [`Coeff`].
//!
//! A [`Series`] records the total degree `N` up to which its terms are known
//! exactly; nothing above `N` is ever stored. Arithmetic propagates that bound
//! honestly: a product is known up to `min(N_s + val(t), N_t + val(s))`, and a
//! quotient by a divisor of valuation `δ` loses `δ` degrees.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Maximum number of variables (the rank of the weight lattice).
pub const MAX_VARS: usize = 8;

/// Precision ceiling; results never claim more than this.
pub const MAX_PRECISION: u32 = 200;

/// A monomial `x_1^{e_1} ⋯ x_n^{e_n}`, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u16,
    exps: [u8; MAX_VARS],
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        deg: 0,
        exps: [0; MAX_VARS],
    };

    pub fn var(i: usize) -> Monomial {
        let mut exps = [0; MAX_VARS];
        exps[i] = 1;
        Monomial { deg: 1, exps }
    }

    pub fn from_exps(exps: &[u32]) -> Result<Monomial> {
        if exps.len() > MAX_VARS {
            return Err(Error::RankTooLarge {
                rank: exps.len(),
                max: MAX_VARS,
            });
        }
        let mut m = Monomial::ONE;
        let mut deg = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_PRECISION {
                return Err(Error::Parse(format!(
                    "exponent {e} exceeds {MAX_PRECISION}"
                )));
            }
            m.exps[i] = e as u8;
            deg += e;
        }
        if deg > MAX_PRECISION {
            return Err(Error::Parse(format!(
                "degree {deg} exceeds {MAX_PRECISION}"
            )));
        }
        m.deg = deg as u16;
        Ok(m)
    }

    fn degree_floor(d: u32) -> Monomial {
        Monomial {
            deg: d as u16,
            exps: [0; MAX_VARS],
        }
    }

    fn degree_ceiling(d: u32) -> Monomial {
        Monomial {
            deg: d as u16,
            exps: [u8::MAX; MAX_VARS],
        }
    }

    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e += *o;
        }
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller checks [`divides`](Self::divides).
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut exps = other.exps;
        for (e, s) in exps.iter_mut().zip(self.exps.iter()) {
            *e -= *s;
        }
        Monomial {
            deg: other.deg - self.deg,
            exps,
        }
    }

    fn without_var(&self, i: usize) -> Monomial {
        let mut m = *self;
        m.deg -= m.exps[i] as u16;
        m.exps[i] = 0;
        m
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..])
    }
}

/// A truncated power series in `nvars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    nvars: usize,
    precision: u32,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Series {
    pub fn zero(nvars: usize, precision: u32) -> Series {
        assert!(nvars <= MAX_VARS, "too many variables");
        Series {
            nvars,
            precision: precision.min(MAX_PRECISION),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, precision: u32, c: Coeff) -> Series {
        let mut s = Series::zero(nvars, precision);
        if !c.is_zero() {
            s.terms.insert(Monomial::ONE, c);
        }
        s
    }

    pub fn one(nvars: usize, precision: u32) -> Series {
        Series::constant(nvars, precision, Coeff::one())
    }

    /// The variable `x_i` (0-based).
    pub fn var(nvars: usize, precision: u32, i: usize) -> Series {
        assert!(i < nvars, "variable index out of range");
        let mut s = Series::zero(nvars, precision);
        if precision >= 1 {
            s.terms.insert(Monomial::var(i), Coeff::one());
        }
        s
    }

    /// Builds a series from `(exponents, coefficient)` pairs, summing repeats
    /// and dropping terms above `precision`.
    pub fn from_terms<I>(nvars: usize, precision: u32, terms: I) -> Result<Series>
    where
        I: IntoIterator<Item = (Vec<u32>, Coeff)>,
    {
        if nvars > MAX_VARS {
            return Err(Error::RankTooLarge {
                rank: nvars,
                max: MAX_VARS,
            });
        }
        let mut s = Series::zero(nvars, precision);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            let m = Monomial::from_exps(&exps)?;
            s.add_term(m, &c);
        }
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Coeff {
        Monomial::from_exps(exps)
            .ok()
            .and_then(|m| self.terms.get(&m).cloned())
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms.get(&Monomial::ONE).cloned().unwrap_or_default()
    }

    /// Lowest total degree of a stored term, `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Valuation with the convention that zero has valuation `precision + 1`.
    fn val_bound(&self) -> u32 {
        self.valuation().unwrap_or(self.precision + 1)
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous(&self, d: u32) -> Series {
        let mut out = Series::zero(self.nvars, self.precision);
        for (m, c) in self
            .terms
            .range(Monomial::degree_floor(d)..=Monomial::degree_ceiling(d))
        {
            out.terms.insert(*m, c.clone());
        }
        out
    }

    /// Drops everything above degree `precision` (never raises precision).
    pub fn truncate(&self, precision: u32) -> Series {
        if precision >= self.precision {
            return self.clone();
        }
        Series {
            nvars: self.nvars,
            precision,
            terms: self
                .terms
                .range(..=Monomial::degree_ceiling(precision))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Equality at the lower of the two precisions.
    pub fn agrees_with(&self, other: &Series) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        let p = self.precision.min(other.precision);
        let a = self.terms.range(..=Monomial::degree_ceiling(p));
        let b = other.terms.range(..=Monomial::degree_ceiling(p));
        a.eq(b)
    }

    /// Like [`agrees_with`](Self::agrees_with), additionally requiring the
    /// comparison to see at least `min_precision` degrees.
    pub fn agrees_with_at_least(&self, other: &Series, min_precision: u32) -> bool {
        self.precision.min(other.precision) >= min_precision && self.agrees_with(other)
    }

    fn check_compatible(&self, other: &Series) {
        assert_eq!(
            self.nvars, other.nvars,
            "series over different numbers of variables"
        );
    }

    fn add_term(&mut self, m: Monomial, c: &Coeff) {
        if c.is_zero() || m.degree() > self.precision {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        self.check_compatible(other);
        let p = self.precision.min(other.precision);
        let mut out = self.truncate(p);
        for (m, c) in other.terms.range(..=Monomial::degree_ceiling(p)) {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        Series {
            nvars: self.nvars,
            precision: self.precision,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Series {
        let mut out = Series::zero(self.nvars, self.precision);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            let p = a * c;
            if !p.is_zero() {
                out.terms.insert(*m, p);
            }
        }
        out
    }

    /// Multiplies by the monomial `x^m` (exact; precision grows by `deg m`).
    pub fn shift(&self, exps: &[u32]) -> Result<Series> {
        let m = Monomial::from_exps(exps)?;
        let mut out = Series::zero(self.nvars, (self.precision + m.degree()).min(MAX_PRECISION));
        for (k, c) in &self.terms {
            let km = k.mul(&m);
            if km.degree() <= out.precision {
                out.terms.insert(km, c.clone());
            }
        }
        Ok(out)
    }

    /// Product, known up to `min(N_s + val(t), N_t + val(s))` but never
    /// beyond the larger input precision.
    pub fn mul(&self, other: &Series) -> Series {
        let cap = self.precision.max(other.precision);
        self.mul_to(other, cap)
    }

    /// Product with an explicit precision ceiling, which may exceed both input
    /// precisions when valuations allow it.
    pub fn mul_to(&self, other: &Series, cap: u32) -> Series {
        self.check_compatible(other);
        let honest = (self.precision + other.val_bound()).min(other.precision + self.val_bound());
        let p = honest.min(cap).min(MAX_PRECISION);
        let mut acc: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            if ma.degree() > p {
                break;
            }
            let room = p - ma.degree();
            for (mb, cb) in other.terms.range(..=Monomial::degree_ceiling(room)) {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    Entry::Occupied(mut o) => *o.get_mut() += &prod,
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Series {
            nvars: self.nvars,
            precision: p,
            terms: acc,
        }
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut out = Series::one(self.nvars, self.precision);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact quotient `self / d` by graded elimination against the
    /// graded-lexicographic order.
    ///
    /// Fails with [`Error::NotDivisible`] at the first obstructing monomial
    /// of `self`'s running remainder, or [`Error::PrecisionExhausted`] when
    /// `self` is not known to the valuation of `d`.
    pub fn exact_divide(&self, d: &Series) -> Result<Series> {
        self.check_compatible(d);
        let Some(delta) = d.valuation() else {
            // a truncated zero only says the valuation is beyond the precision
            return Err(Error::PrecisionExhausted {
                needed: d.precision + 1,
                available: d.precision,
            });
        };
        if self.precision < delta || d.precision < delta {
            return Err(Error::PrecisionExhausted {
                needed: delta,
                available: self.precision.min(d.precision),
            });
        }
        let top = self.precision - delta;
        // Leading term of the lowest form of d.
        let (lead_m, lead_c) = d
            .terms
            .range(..=Monomial::degree_ceiling(delta))
            .next_back()
            .map(|(m, c)| (*m, c.clone()))
            .expect("valuation term exists");

        let mut rem = self.terms.clone();
        if let Some((m, _)) = rem.range(..Monomial::degree_floor(delta)).next() {
            return Err(Error::NotDivisible {
                monomial: m.exps(self.nvars),
                degree: m.degree(),
            });
        }
        let mut quot: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for e in 0..=top {
            let g = e + delta;
            loop {
                let Some((m, c)) = rem
                    .range(Monomial::degree_floor(g)..=Monomial::degree_ceiling(g))
                    .next_back()
                    .map(|(m, c)| (*m, c.clone()))
                else {
                    break;
                };
                let obstruction = || Error::NotDivisible {
                    monomial: m.exps(self.nvars),
                    degree: m.degree(),
                };
                if !lead_m.divides(&m) {
                    return Err(obstruction());
                }
                let qc = c.exact_div(&lead_c).ok_or_else(obstruction)?;
                let qm = lead_m.quotient_of(&m);
                for (dm, dc) in d
                    .terms
                    .range(..=Monomial::degree_ceiling(self.precision - e))
                {
                    let target = qm.mul(dm);
                    let delta_c = -(&qc * dc);
                    match rem.entry(target) {
                        Entry::Vacant(v) => {
                            v.insert(delta_c);
                        }
                        Entry::Occupied(mut o) => {
                            *o.get_mut() += &delta_c;
                            if o.get().is_zero() {
                                o.remove();
                            }
                        }
                    }
                }
                quot.insert(qm, qc);
            }
        }
        let val_q = quot.keys().next().map(|m| m.degree()).unwrap_or(top + 1);
        let p = top.min(d.precision - delta + val_q);
        let q = Series {
            nvars: self.nvars,
            precision: top,
            terms: quot,
        };
        Ok(q.truncate(p))
    }

    /// Multiplicative inverse of a series whose constant term is a unit.
    pub fn invert_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        let inv0 = c0.inverse().ok_or_else(|| Error::NotUnit(c0.to_string()))?;
        // self = c0 (1 + h)  =>  self⁻¹ = c0⁻¹ Σ (−h)^k
        let one = Series::one(self.nvars, self.precision);
        let h = self.scale(&inv0).sub(&one);
        let mut acc = one.clone();
        for _ in 0..self.precision {
            acc = one.sub(&h.mul(&acc));
        }
        Ok(acc.scale(&inv0))
    }

    /// Evaluates the univariate series `Σ_k coeffs[k] t^k` at `t = self`.
    /// `self` must have zero constant term; the result keeps `self`'s
    /// precision, capped by `known_degree` when the univariate series is only
    /// known up to that degree.
    pub fn compose_univariate(
        &self,
        coeffs: &[Coeff],
        known_degree: Option<u32>,
    ) -> Result<Series> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut p = self.precision;
        if let Some(k) = known_degree {
            // Unknown terms t^j, j > k, start at degree ≥ (k+1)·val(self).
            let v = self.val_bound();
            p = p.min(((k + 1) * v).saturating_sub(1));
        }
        let top = coeffs.len().min(p as usize + 1);
        let mut acc = Series::zero(self.nvars, p);
        for k in (0..top).rev() {
            acc = acc
                .mul_to(self, p)
                .add(&Series::constant(self.nvars, p, coeffs[k].clone()));
        }
        Ok(acc.truncate(p))
    }

    /// Substitutes `img` for the variable `x_i` (0-based). `img` must have
    /// zero constant term.
    pub fn substitute_var(&self, i: usize, img: &Series) -> Result<Series> {
        self.check_compatible(img);
        if !img.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let p = self.precision.min(img.precision);
        // Group by the exponent of x_i.
        let mut slices: BTreeMap<u32, Series> = BTreeMap::new();
        for (m, c) in self.terms.range(..=Monomial::degree_ceiling(p)) {
            let k = m.exp(i);
            let rest = m.without_var(i);
            slices
                .entry(k)
                .or_insert_with(|| Series::zero(self.nvars, p))
                .add_term(rest, c);
        }
        let Some(&kmax) = slices.keys().next_back() else {
            return Ok(Series::zero(self.nvars, p));
        };
        let mut acc = Series::zero(self.nvars, p);
        for k in (0..=kmax).rev() {
            acc = acc.mul_to(img, p);
            if let Some(s) = slices.get(&k) {
                acc = acc.add(s);
            }
        }
        Ok(acc.truncate(p))
    }

    /// Substitutes `images[i]` for every variable simultaneously.
    pub fn substitute_all(&self, images: &[Series]) -> Result<Series> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let mut p = self.precision;
        for img in images {
            self.check_compatible(img);
            if !img.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
            p = p.min(img.precision);
        }
        let mut powers: Vec<Vec<Series>> = Vec::with_capacity(self.nvars);
        for img in images {
            let mut pw = vec![Series::one(self.nvars, p)];
            for k in 1..=p {
                let next = pw[k as usize - 1].mul_to(img, p);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = Series::zero(self.nvars, p);
        for (m, c) in self.terms.range(..=Monomial::degree_ceiling(p)) {
            let mut term = Series::constant(self.nvars, p, c.clone());
            for (i, pw) in powers.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    term = term.mul_to(&pw[e as usize], p);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs<F: Fn(&Coeff) -> Coeff>(&self, f: F) -> Series {
        let mut out = Series::zero(self.nvars, self.precision);
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(*m, v);
            }
        }
        out
    }
}

impl fmt::Display for Series {
    /// Raw form in the basis variables `x1, x2, …`, e.g. `2*x1^2*x2 - x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mut cs = c.to_string();
            let negative = cs.starts_with('-');
            if negative {
                cs = cs[1..].to_string();
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let mut factors = Vec::new();
            for i in 0..self.nvars {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    e => factors.push(format!("x{}^{e}", i + 1)),
                }
            }
            if factors.is_empty() {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{cs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {})", self, self.precision + 1)
    }
}
