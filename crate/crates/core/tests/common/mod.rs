//! Untruncated polynomial model of the additive case, built from the Cartan
//! matrix alone. For the additive law `x_λ` is the linear form `Σ λ_i x_i`
//! in weight coordinates, so everything here is exact polynomial algebra.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use bsloc_core::Series;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Weight = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Graded order key: total degree, then exponents lexicographically.
fn key(e: &[u32]) -> (u32, Vec<u32>) {
    (e.iter().sum(), e.to_vec())
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: i64) -> Self {
        let mut p = Poly::zero(n);
        if c != 0 {
            p.terms.insert(vec![0; n], q(c));
        }
        p
    }

    pub fn linear(l: &[i64]) -> Self {
        let n = l.len();
        let mut p = Poly::zero(n);
        for (i, &c) in l.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, q(c));
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, e: Vec<u32>, c: BigRational) {
        let entry = self
            .terms
            .entry(e.clone())
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.push(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                r.push(e, x * y);
            }
        }
        r
    }

    fn leading(&self) -> Option<(&Vec<u32>, &BigRational)> {
        self.terms.iter().max_by_key(|(e, _)| key(e))
    }

    /// Exact quotient by the division algorithm; `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut rest = self.clone();
        let mut quot = Poly::zero(self.n);
        while let Some((e, c)) = rest.leading() {
            if e.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(&de).map(|(a, b)| a - b).collect();
            let qc = c / &dc;
            let mut t = Poly::zero(self.n);
            t.terms.insert(qe, qc);
            rest = rest.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Substitution `x_i ↦ images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let mut r = Poly::zero(self.n);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(self.n, 1);
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&images[i]);
                }
            }
            let scaled = Poly {
                n: self.n,
                terms: t.terms.into_iter().map(|(e, x)| (e, x * c)).collect(),
            };
            r = r.add(&scaled);
        }
        r
    }

    pub fn truncate(&self, max_deg: u32) -> Poly {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Does the engine series agree with this polynomial in every degree the
    /// series knows?
    pub fn agrees_with_series(&self, s: &Series) -> Result<(), String> {
        let p = s.precision();
        let mut seen = BTreeSet::new();
        for (m, c) in s.terms() {
            let e = m.exps(self.n);
            let r = c
                .as_rational()
                .ok_or_else(|| format!("non-constant coefficient {c}"))?;
            let expect = self
                .terms
                .get(&e)
                .cloned()
                .unwrap_or_else(BigRational::zero);
            if r.to_big_rational() != expect {
                return Err(format!("coefficient of {e:?}: engine {r}, oracle {expect}"));
            }
            seen.insert(e);
        }
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() <= p && !seen.contains(e) && !c.is_zero() {
                return Err(format!("engine is missing {c}·x^{e:?}"));
            }
        }
        Ok(())
    }

    pub fn is_negative_constant(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.n])
                .is_some_and(|c| c.is_negative())
    }

    pub fn one(n: usize) -> Poly {
        let mut p = Poly::zero(n);
        p.terms.insert(vec![0; n], BigRational::one());
        p
    }
}

/// Root system data derived from the Cartan matrix: `α_j` is column `j`.
pub struct Model {
    pub n: usize,
    pub simple: Vec<Weight>,
    pub positive: Vec<Weight>,
}

impl Model {
    pub fn new(cartan: &[Vec<i64>]) -> Self {
        let n = cartan.len();
        let simple: Vec<Weight> = (0..n)
            .map(|j| (0..n).map(|i| cartan[i][j]).collect())
            .collect();
        let mut m = Model {
            n,
            simple,
            positive: Vec::new(),
        };
        // every root is in the W-orbit of a simple root
        let mut roots: BTreeSet<Weight> = m.simple.iter().cloned().collect();
        loop {
            let before = roots.len();
            for r in roots.clone() {
                for i in 0..n {
                    roots.insert(m.reflect(i, &r));
                }
            }
            if roots.len() == before {
                break;
            }
        }
        // positive roots: grow from the simple roots by adding simple roots
        let mut pos: BTreeSet<Weight> = m.simple.iter().cloned().collect();
        loop {
            let before = pos.len();
            for r in pos.clone() {
                for a in &m.simple {
                    let s: Weight = r.iter().zip(a).map(|(x, y)| x + y).collect();
                    if roots.contains(&s) {
                        pos.insert(s);
                    }
                }
            }
            if pos.len() == before {
                break;
            }
        }
        assert_eq!(pos.len() * 2, roots.len());
        m.positive = pos.into_iter().collect();
        m
    }

    /// `s_i(λ) = λ − λ_i α_i`; indices are 0-based here.
    pub fn reflect(&self, i: usize, l: &[i64]) -> Weight {
        l.iter()
            .zip(&self.simple[i])
            .map(|(x, a)| x - l[i] * a)
            .collect()
    }

    /// `s_{w_1} ⋯ s_{w_k}(λ)` for a 1-based word, rightmost letter first.
    pub fn act_word(&self, word: &[usize], l: &[i64]) -> Weight {
        word.iter()
            .rev()
            .fold(l.to_vec(), |acc, &i| self.reflect(i - 1, &acc))
    }

    /// The Weyl word acting on polynomials through `x_{ω_i} ↦ x_{w(ω_i)}`.
    pub fn act_poly(&self, word: &[usize], p: &Poly) -> Poly {
        let images: Vec<Poly> = (0..self.n)
            .map(|i| {
                let mut w = vec![0; self.n];
                w[i] = 1;
                Poly::linear(&self.act_word(word, &w))
            })
            .collect();
        p.substitute(&images)
    }

    pub fn neg_simple(&self, i: usize) -> Weight {
        self.simple[i - 1].iter().map(|x| -x).collect()
    }

    /// Classical divided difference `(p − s_i p)/x_{±α_i}`.
    pub fn demazure(&self, i: usize, negative: bool, p: &Poly) -> Poly {
        let diff = p.sub(&self.act_poly(&[i], p));
        let a = if negative {
            self.neg_simple(i)
        } else {
            self.simple[i - 1].clone()
        };
        diff.div_exact(&Poly::linear(&a))
            .expect("divided differences are polynomial")
    }

    /// `θ_1 ∘ ⋯ ∘ θ_l` with `θ_j = Δ_{−α_{i_j}}` on `L` and `s_{i_j}` off it.
    pub fn theta(&self, seq: &[usize], l: u32, u: &Poly) -> Poly {
        let mut p = u.clone();
        for j in (0..seq.len()).rev() {
            p = if l >> j & 1 == 1 {
                self.demazure(seq[j], true, &p)
            } else {
                self.act_poly(&[seq[j]], &p)
            };
        }
        p
    }

    /// `v_j^M`: the letters of `M` among the first `j` positions, in order.
    pub fn v_word(&self, seq: &[usize], m: u32, j: usize) -> Vec<usize> {
        (0..j).filter(|k| m >> k & 1 == 1).map(|k| seq[k]).collect()
    }

    pub fn a_coeff(&self, seq: &[usize], l: u32, m: u32) -> Poly {
        let mut out = Poly::one(self.n);
        for k in 1..=seq.len() {
            if l >> (k - 1) & 1 == 1 {
                let w = self.v_word(seq, m, k - 1);
                out = out.mul(&Poly::linear(
                    &self.act_word(&w, &self.neg_simple(seq[k - 1])),
                ));
            }
        }
        out
    }

    pub fn x_il(&self, seq: &[usize], l: u32) -> Poly {
        let mut out = Poly::one(self.n);
        for j in 1..=seq.len() {
            let w = self.v_word(seq, l, j);
            out = out.mul(&Poly::linear(
                &self.act_word(&w, &self.neg_simple(seq[j - 1])),
            ));
        }
        out
    }

    /// `w(x_Π)` with `x_Π` the product over negative roots.
    pub fn x_pi(&self, word: &[usize]) -> Poly {
        self.positive.iter().fold(Poly::one(self.n), |acc, r| {
            let neg: Weight = r.iter().map(|x| -x).collect();
            acc.mul(&Poly::linear(&self.act_word(word, &neg)))
        })
    }

    /// Push-forward of `η_L` to the flag variety as a map from Weyl elements
    /// (keyed by their action on a regular weight) to polynomials.
    pub fn pushforward(&self, seq: &[usize], l: u32) -> BTreeMap<Weight, Poly> {
        let len = seq.len();
        let full = (1u32 << len) - 1;
        let comp = full & !l;
        let rho = vec![1; self.n];
        let mut groups: BTreeMap<Weight, Vec<(Poly, Poly)>> = BTreeMap::new();
        for l1 in 0..=full {
            if l1 & !comp != 0 {
                continue;
            }
            let w = self.v_word(seq, l1, len);
            let num = self.a_coeff(seq, l, l1).mul(&self.x_pi(&w));
            groups
                .entry(self.act_word(&w, &rho))
                .or_default()
                .push((num, self.x_il(seq, l1)));
        }
        groups
            .into_iter()
            .map(|(k, fracs)| {
                let den = fracs
                    .iter()
                    .fold(Poly::one(self.n), |acc, (_, d)| acc.mul(d));
                let num = fracs.iter().fold(Poly::zero(self.n), |acc, (n, d)| {
                    acc.add(&n.mul(&den.div_exact(d).unwrap()))
                });
                (k, num.div_exact(&den).expect("push-forward is integral"))
            })
            .collect()
    }
}
