//! Fixed-point model of `h_T(G/B)`: functions on `W` with values in the
//! localization `Q = S[1/x_α]`, push-pull operators and push-forwards from
//! Bott-Samelson varieties.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::bscomb::{BottSamelson, EtaVector};
use crate::error::{Error, Result};
use crate::fga::FormalGroupAlgebra;
use crate::rootdata::{LatticeVector, RootDatum, WeylElement};
use crate::series::Series;
use crate::subset::Subset;

pub const DEFAULT_WEYL_BOUND: usize = 1152;

/// The Weyl group as a list of canonical elements, each carrying a reduced
/// word (breadth-first order makes the first word found a shortest one).
#[derive(Debug)]
pub struct WeylGroup {
    datum: Arc<RootDatum>,
    elements: Vec<WeylElement>,
    index: HashMap<WeylElement, usize>,
}

impl WeylGroup {
    pub fn enumerate(datum: Arc<RootDatum>, bound: usize) -> Result<Self> {
        let id = datum.identity();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for i in 1..=datum.rank() {
                let next = elements[k].compose(datum.simple_reflection(i)?);
                if index.contains_key(&next) {
                    continue;
                }
                if elements.len() >= bound {
                    return Err(Error::WeylGroupTooLarge(bound));
                }
                index.insert(next.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(next);
            }
        }
        Ok(WeylGroup {
            datum,
            elements,
            index,
        })
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, w: &WeylElement) -> usize {
        self.index[w]
    }

    /// The stored element (with its reduced word) equal to `w`.
    pub fn canonical(&self, w: &WeylElement) -> &WeylElement {
        &self.elements[self.index_of(w)]
    }
}

/// `enumerate_weyl` with the default size bound.
pub fn enumerate_weyl(datum: &Arc<RootDatum>) -> Result<Vec<WeylElement>> {
    Ok(WeylGroup::enumerate(datum.clone(), DEFAULT_WEYL_BOUND)?.elements)
}

/// `numerator / ∏ x_α` over a multiset of roots.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedElement {
    numerator: Series,
    /// Sorted multiset of roots.
    denominator: Vec<LatticeVector>,
    /// Set when a cancellation attempt ran out of precision.
    precision_limited: bool,
}

impl LocalizedElement {
    pub fn integral(s: Series) -> Self {
        LocalizedElement {
            numerator: s,
            denominator: Vec::new(),
            precision_limited: false,
        }
    }

    pub fn new(numerator: Series, mut denominator: Vec<LatticeVector>) -> Self {
        denominator.sort();
        LocalizedElement {
            numerator,
            denominator,
            precision_limited: false,
        }
    }

    pub fn numerator(&self) -> &Series {
        &self.numerator
    }

    pub fn denominator(&self) -> &[LatticeVector] {
        &self.denominator
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Precision of the quotient: numerator precision minus the number of
    /// denominator factors.
    pub fn effective_precision(&self) -> u32 {
        self.numerator
            .precision()
            .saturating_sub(self.denominator.len() as u32)
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn canonicalize(&mut self, alg: &FormalGroupAlgebra) {
        if self.numerator.is_zero() {
            let p = self.effective_precision();
            self.numerator = self.numerator.truncate(p);
            self.denominator.clear();
            return;
        }
        let mut k = 0;
        while k < self.denominator.len() {
            let x = alg.x_of_at(&self.denominator[k], self.numerator.precision());
            match self.numerator.exact_divide(&x) {
                Ok(q) => {
                    self.numerator = q;
                    self.denominator.remove(k);
                    k = 0;
                }
                Err(e) => {
                    if e.is_precision() {
                        self.precision_limited = true;
                    }
                    k += 1;
                }
            }
        }
    }

    /// Numerator times `x_{roots}`, keeping the quotient's precision.
    fn expand(&self, alg: &FormalGroupAlgebra, roots: &[LatticeVector]) -> Series {
        let k = roots.len() as u32;
        if k == 0 {
            return self.numerator.clone();
        }
        let p = self.numerator.precision() + k;
        let factor = x_product(alg, roots, p);
        self.numerator.mul_to(&factor, p)
    }

    /// Sum over the least common multiple of the denominators, then cancels.
    pub fn add(&self, other: &Self, alg: &FormalGroupAlgebra) -> Self {
        if other.is_zero() && other.is_integral() {
            let mut out = self.clone();
            out.numerator = out.numerator.truncate(
                out.numerator
                    .precision()
                    .min(other.numerator.precision() + out.denominator.len() as u32),
            );
            return out;
        }
        let (lcm, extra_a, extra_b) = multiset_lcm(&self.denominator, &other.denominator);
        let a = self.expand(alg, &extra_a);
        let b = other.expand(alg, &extra_b);
        let mut out = LocalizedElement {
            numerator: a.add(&b),
            denominator: lcm,
            precision_limited: self.precision_limited || other.precision_limited,
        };
        out.canonicalize(alg);
        out
    }

    /// Multiplies the numerator by `s`.
    pub fn mul_series(&self, s: &Series) -> Self {
        let p = self.numerator.precision().min(s.precision());
        LocalizedElement {
            numerator: self.numerator.mul_to(s, p),
            denominator: self.denominator.clone(),
            precision_limited: self.precision_limited,
        }
    }

    fn truncate(&self, p: u32) -> Self {
        let mut out = self.clone();
        out.numerator = out.numerator.truncate(p + self.denominator.len() as u32);
        out
    }
}

/// `(lcm, lcm − a, lcm − b)` for sorted multisets.
fn multiset_lcm(
    a: &[LatticeVector],
    b: &[LatticeVector],
) -> (Vec<LatticeVector>, Vec<LatticeVector>, Vec<LatticeVector>) {
    let (mut i, mut j) = (0, 0);
    let (mut lcm, mut only_b, mut only_a) = (Vec::new(), Vec::new(), Vec::new());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                lcm.push(x.clone());
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                lcm.push(x.clone());
                only_a.push(x.clone());
                i += 1;
            }
            (Some(x), None) => {
                lcm.push(x.clone());
                only_a.push(x.clone());
                i += 1;
            }
            (_, Some(y)) => {
                lcm.push(y.clone());
                only_b.push(y.clone());
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    // `a` must be multiplied by what only `b` has, and vice versa.
    (lcm, only_b, only_a)
}

/// `∏ x_λ` over `roots`, to precision `p`.
fn x_product(alg: &FormalGroupAlgebra, roots: &[LatticeVector], p: u32) -> Series {
    let mut out = Series::one(alg.nvars(), p);
    for r in roots {
        out = out.mul_to(&alg.x_of_at(r, p), p);
    }
    out
}

/// A function `W → Q`.
#[derive(Debug, Clone)]
pub struct WFunction {
    group: Arc<WeylGroup>,
    values: Vec<LocalizedElement>,
}

impl PartialEq for WFunction {
    fn eq(&self, other: &Self) -> bool {
        self.group.elements == other.group.elements && self.values == other.values
    }
}

impl WFunction {
    pub fn new(group: Arc<WeylGroup>, values: Vec<LocalizedElement>) -> Result<Self> {
        if values.len() != group.len() {
            return Err(Error::DimensionMismatch {
                expected: group.len(),
                got: values.len(),
            });
        }
        Ok(WFunction { group, values })
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn values(&self) -> &[LocalizedElement] {
        &self.values
    }

    pub fn get(&self, w: &WeylElement) -> &LocalizedElement {
        &self.values[self.group.index_of(w)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WeylElement, &LocalizedElement)> {
        self.group.elements().iter().zip(&self.values)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integral())
    }

    /// The value at `w` as a series, if integral there.
    pub fn series_at(&self, w: &WeylElement) -> Option<&Series> {
        let v = self.get(w);
        v.is_integral().then_some(&v.numerator)
    }

    /// Equality of integral functions at the lower precision of each pair.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| {
                a.denominator == b.denominator && a.numerator.agrees_with(&b.numerator)
            })
    }

    pub fn min_precision(&self) -> u32 {
        self.values
            .iter()
            .map(|v| v.effective_precision())
            .min()
            .unwrap_or(u32::MAX)
    }

    fn truncate(&self, p: u32) -> Self {
        WFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v.truncate(p)).collect(),
        }
    }

    /// Fails with the first non-integral value.
    pub fn require_integral(&self) -> Result<()> {
        for (w, v) in self.iter() {
            if !v.is_integral() {
                if v.precision_limited {
                    return Err(Error::PrecisionExhausted {
                        needed: v.denominator.len() as u32,
                        available: v.numerator.precision(),
                    });
                }
                return Err(Error::ResidualDenominator {
                    word: w.word().to_vec(),
                    roots: v.denominator.iter().map(|r| r.0.clone()).collect(),
                });
            }
        }
        Ok(())
    }
}

/// Both sides of the Chevalley formula, pointwise on `W`.
#[derive(Debug, Clone)]
pub struct ChevalleyReport {
    pub coefficients: EtaVector,
    pub lhs: Vec<Series>,
    pub rhs: Vec<Series>,
}

impl ChevalleyReport {
    pub fn holds(&self) -> bool {
        self.lhs
            .iter()
            .zip(&self.rhs)
            .all(|(a, b)| a.agrees_with(b))
    }
}

/// The flag variety `G/B` of a root datum with a chosen formal group law.
#[derive(Debug)]
pub struct FlagVariety {
    alg: Arc<FormalGroupAlgebra>,
    group: Arc<WeylGroup>,
}

impl FlagVariety {
    pub fn new(alg: Arc<FormalGroupAlgebra>) -> Result<Self> {
        let group = Arc::new(WeylGroup::enumerate(
            alg.datum().clone(),
            DEFAULT_WEYL_BOUND,
        )?);
        Ok(FlagVariety { alg, group })
    }

    pub fn alg(&self) -> &Arc<FormalGroupAlgebra> {
        &self.alg
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    /// Working precision for a computation that divides `extra` times.
    fn work(&self, extra: usize) -> u32 {
        self.alg.precision() + extra as u32
    }

    /// `w(x_Π) = ∏_{α<0} x_{w(α)}` at precision `p`.
    fn x_pi_at(&self, w: &WeylElement, p: u32) -> Series {
        let roots: Vec<LatticeVector> = self
            .alg
            .datum()
            .negative_roots()
            .iter()
            .map(|a| w.act(a))
            .collect();
        x_product(&self.alg, &roots, p)
    }

    /// `x_Π = ∏_{α<0} x_α`.
    pub fn x_pi(&self) -> Series {
        self.x_pi_at(&self.alg.datum().identity(), self.alg.precision())
    }

    fn zero_function(&self, p: u32) -> WFunction {
        let zero = LocalizedElement::integral(Series::zero(self.alg.nvars(), p));
        WFunction {
            group: self.group.clone(),
            values: vec![zero; self.group.len()],
        }
    }

    fn pt_e_at(&self, p: u32) -> WFunction {
        let mut f = self.zero_function(p);
        f.values[0] = LocalizedElement::integral(self.x_pi_at(&self.alg.datum().identity(), p));
        f
    }

    /// The class of the fixed point `e`: `x_Π` at `e`, zero elsewhere.
    pub fn pt_e(&self) -> WFunction {
        self.pt_e_at(self.alg.precision())
    }

    /// `w ↦ w(u)`, the restriction of the characteristic class of `u`.
    pub fn char_restrict(&self, u: &Series) -> WFunction {
        let values = self
            .group
            .elements()
            .iter()
            .map(|w| LocalizedElement::integral(self.alg.weyl_act(w, u)))
            .collect();
        WFunction {
            group: self.group.clone(),
            values,
        }
    }

    /// `(A_i a)_w = a_w / x_{−w(α_i)} + a_{w s_i} / x_{w(α_i)}`.
    pub fn push_pull(&self, i: usize, a: &WFunction) -> Result<WFunction> {
        let datum = self.alg.datum();
        let s = datum.simple_reflection(i)?;
        let alpha = datum.simple_root(i)?;
        let mut values = Vec::with_capacity(self.group.len());
        for (k, w) in self.group.elements().iter().enumerate() {
            let beta = w.act(alpha);
            let ws = self.group.index_of(&w.compose(s));
            let term = |v: &LocalizedElement, root: LatticeVector| {
                let mut den = v.denominator.clone();
                den.push(root);
                let mut out = LocalizedElement::new(v.numerator.clone(), den);
                out.precision_limited = v.precision_limited;
                out
            };
            let t1 = term(&a.values[k], beta.neg());
            let t2 = term(&a.values[ws], beta);
            let mut sum = if a.values[k].is_zero() {
                t2
            } else if a.values[ws].is_zero() {
                t1
            } else {
                t1.add(&t2, &self.alg)
            };
            sum.canonicalize(&self.alg);
            values.push(sum);
        }
        Ok(WFunction {
            group: self.group.clone(),
            values,
        })
    }

    /// `A_{i_l} ⋯ A_{i_1}(pt_e)`, the class of `X_I` pushed to `G/B`.
    pub fn bott_samelson_class(&self, seq: &[usize]) -> Result<WFunction> {
        let mut f = self.pt_e_at(self.work(seq.len()));
        for &i in seq {
            f = self.push_pull(i, &f)?;
        }
        let f = f.truncate(self.alg.precision());
        f.require_integral()?;
        Ok(f)
    }

    /// Localized coefficient `a_{L,L_1} / x_{I,L_1}` at precision `p`.
    fn lemma_coefficient(
        &self,
        bs: &BottSamelson,
        l: Subset,
        l1: Subset,
        p: u32,
    ) -> Result<LocalizedElement> {
        let len = bs.len();
        let mut num_roots = Vec::new();
        let mut prefix = self.alg.datum().identity();
        let mut prefixes = vec![prefix.clone()];
        for k in 1..=len {
            if l1.contains(k) {
                prefix = prefix.compose(self.alg.datum().simple_reflection(bs.seq()[k - 1])?);
            }
            prefixes.push(prefix.clone());
        }
        for k in l.positions() {
            let a = self.alg.datum().simple_root(bs.seq()[k - 1])?;
            num_roots.push(prefixes[k - 1].act(&a.neg()));
        }
        let den = bs.tangent_weights(l1)?;
        Ok(LocalizedElement::new(
            x_product(&self.alg, &num_roots, p),
            den,
        ))
    }

    /// `i^* q_{I*}(η_L) = Σ_{L_1 ⊂ L^c} a_{L,L_1} v^{L_1}(x_Π) / x_{I,L_1} · f_{v^{L_1}}`.
    ///
    /// Summands landing on the same Weyl element are added before the
    /// integrality check.
    pub fn pushforward_eta(&self, bs: &BottSamelson, l: Subset) -> Result<WFunction> {
        l.check(bs.len())?;
        let p = self.work(bs.len());
        let mut f = self.zero_function(p);
        for l1 in l.complement(bs.len()).subsets() {
            let v = bs.v(l1)?;
            let term = self.lemma_coefficient(bs, l, l1, p)?;
            let term = LocalizedElement::new(
                term.numerator.mul_to(&self.x_pi_at(&v, p), p),
                term.denominator.clone(),
            );
            let k = self.group.index_of(&v);
            f.values[k] = f.values[k].add(&term, &self.alg);
        }
        for v in f.values.iter_mut() {
            v.canonicalize(&self.alg);
        }
        let f = f.truncate(self.alg.precision());
        f.require_integral()?;
        Ok(f)
    }

    /// `Σ_{L_1 ⊂ [|J|]} v^{L_1}(x_Π) / x_{J,L_1} · f_{v^{L_1}}`, the class of
    /// `X_J` evaluated directly.
    pub fn bott_class_direct(&self, seq: &[usize]) -> Result<WFunction> {
        let bs = BottSamelson::new(self.alg.clone(), seq.to_vec())?;
        self.pushforward_eta(&bs, Subset::EMPTY)
    }

    /// The same push-forward computed from the localized expansion
    /// `η_L = Σ_{L_1} (a_{L,L_1}/x_{I,L_1}) j_*(f_{L_1})` with `v(x_Π)` obtained
    /// through the Weyl action on the series `x_Π`.
    pub fn pushforward_via_lemma(&self, bs: &BottSamelson, l: Subset) -> Result<WFunction> {
        l.check(bs.len())?;
        let p = self.work(bs.len());
        let x_pi = self.x_pi_at(&self.alg.datum().identity(), p);
        let mut f = self.zero_function(p);
        for l1 in Subset::full(bs.len()).subsets() {
            if !l.is_disjoint(l1) {
                continue;
            }
            let v = bs.v(l1)?;
            let mut b = self.lemma_coefficient(bs, l, l1, p)?;
            b.canonicalize(&self.alg);
            let term = b.mul_series(&self.alg.weyl_act(&v, &x_pi));
            let k = self.group.index_of(&v);
            f.values[k] = f.values[k].add(&term, &self.alg);
        }
        for v in f.values.iter_mut() {
            v.canonicalize(&self.alg);
        }
        let f = f.truncate(self.alg.precision());
        f.require_integral()?;
        Ok(f)
    }

    /// The coefficients `θ_{I,L}(u)` of `c'(u)·ζ_I = Σ_L θ_{I,L}(u) ζ_{L^c}`.
    pub fn chevalley_expand(&self, bs: &BottSamelson, u: &Series) -> Result<EtaVector> {
        bs.char_in_eta(u)
    }

    /// Evaluates both sides of the Chevalley formula at every `w′ ∈ W`.
    pub fn chevalley_check(&self, bs: &BottSamelson, u: &Series) -> Result<ChevalleyReport> {
        let coefficients = self.chevalley_expand(bs, u)?;
        let zeta = self.bott_samelson_class(bs.seq())?;
        let n = self.group.len();
        let lhs: Vec<Series> = self
            .group
            .elements()
            .iter()
            .enumerate()
            .map(|(k, w)| self.alg.weyl_act(w, u).mul(&zeta.values[k].numerator))
            .collect();
        let mut rhs = vec![self.alg.zero(); n];
        for (l, c) in coefficients.iter() {
            if c.is_zero() {
                continue;
            }
            let sub = l.complement(bs.len()).restrict(bs.seq());
            let z = self.bott_samelson_class(&sub)?;
            for (k, r) in rhs.iter_mut().enumerate() {
                *r = r.add(&c.mul(&z.values[k].numerator));
            }
        }
        Ok(ChevalleyReport {
            coefficients,
            lhs,
            rhs,
        })
    }
}
