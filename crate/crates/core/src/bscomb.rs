//! Fixed points of a Bott-Samelson variety `X_I`, the restriction of the
//! `η`-basis to them, and the GKM description of the image.

use std::sync::{Arc, OnceLock};

use crate::demazure::theta_all;
use crate::error::{Error, Result};
use crate::fga::FormalGroupAlgebra;
use crate::rootdata::{LatticeVector, WeylElement};
use crate::series::Series;
use crate::subset::{ordered_subsets, Subset, MAX_SEQ_LEN};

/// A function on the `2^l` fixed points, indexed by subset mask.
#[derive(Debug, Clone, PartialEq)]
pub struct GkmElement {
    len: usize,
    values: Vec<Series>,
}

/// Coefficients in the basis `{η_L}`, indexed by subset mask.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaVector {
    len: usize,
    coeffs: Vec<Series>,
}

macro_rules! subset_function {
    ($t:ident, $field:ident) => {
        impl $t {
            pub fn new(len: usize, $field: Vec<Series>) -> Result<Self> {
                if len > MAX_SEQ_LEN {
                    return Err(Error::InvalidSubset { mask: 0, len });
                }
                if $field.len() != 1 << len {
                    return Err(Error::DimensionMismatch {
                        expected: 1 << len,
                        got: $field.len(),
                    });
                }
                Ok($t { len, $field })
            }

            pub fn zero(alg: &FormalGroupAlgebra, len: usize) -> Self {
                $t {
                    len,
                    $field: vec![alg.zero(); 1 << len],
                }
            }

            /// The sequence length `l`.
            pub fn len(&self) -> usize {
                self.len
            }

            pub fn get(&self, s: Subset) -> &Series {
                &self.$field[s.0 as usize]
            }

            pub fn set(&mut self, s: Subset, v: Series) {
                self.$field[s.0 as usize] = v;
            }

            pub fn iter(&self) -> impl Iterator<Item = (Subset, &Series)> {
                self.$field
                    .iter()
                    .enumerate()
                    .map(|(m, s)| (Subset(m as u32), s))
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.len, other.len);
                let v = self
                    .$field
                    .iter()
                    .zip(&other.$field)
                    .map(|(a, b)| a.add(b))
                    .collect();
                $t {
                    len: self.len,
                    $field: v,
                }
            }

            pub fn sub(&self, other: &Self) -> Self {
                assert_eq!(self.len, other.len);
                let v = self
                    .$field
                    .iter()
                    .zip(&other.$field)
                    .map(|(a, b)| a.sub(b))
                    .collect();
                $t {
                    len: self.len,
                    $field: v,
                }
            }

            /// Multiplies every entry by the series `s`.
            pub fn scale(&self, s: &Series) -> Self {
                $t {
                    len: self.len,
                    $field: self.$field.iter().map(|a| a.mul(s)).collect(),
                }
            }

            pub fn min_precision(&self) -> u32 {
                self.$field
                    .iter()
                    .map(|s| s.precision())
                    .min()
                    .unwrap_or(u32::MAX)
            }

            /// Entrywise agreement at the lower of each pair's precisions.
            pub fn agrees_with(&self, other: &Self) -> bool {
                self.len == other.len
                    && self
                        .$field
                        .iter()
                        .zip(&other.$field)
                        .all(|(a, b)| a.agrees_with(b))
            }

            pub fn truncate(&self, p: u32) -> Self {
                $t {
                    len: self.len,
                    $field: self.$field.iter().map(|a| a.truncate(p)).collect(),
                }
            }
        }
    };
}

subset_function!(GkmElement, values);
subset_function!(EtaVector, coeffs);

impl GkmElement {
    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        let v = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.mul(b))
            .collect();
        GkmElement {
            len: self.len,
            values: v,
        }
    }

    /// The constant function with value `s`.
    pub fn constant(len: usize, s: &Series) -> Self {
        GkmElement {
            len,
            values: vec![s.clone(); 1 << len],
        }
    }
}

impl EtaVector {
    /// The basis vector `η_L`.
    pub fn unit(alg: &FormalGroupAlgebra, len: usize, l: Subset) -> Self {
        let mut v = EtaVector::zero(alg, len);
        v.set(l, alg.one());
        v
    }
}

/// Where a GKM divisibility condition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmWitness {
    pub l1: Subset,
    pub l2: Subset,
    pub k: usize,
    pub monomial: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GkmCheck {
    Pass,
    Fail(GkmWitness),
}

impl GkmCheck {
    pub fn passed(&self) -> bool {
        matches!(self, GkmCheck::Pass)
    }
}

/// The restriction matrix with rows `L` and columns `M` in (cardinality,
/// value) order; entry `a_{L,M}` if `M ∩ L = ∅`, else zero.
#[derive(Debug, Clone)]
pub struct RestrictionMatrix {
    pub order: Vec<Subset>,
    pub rows: Vec<Vec<Series>>,
}

impl RestrictionMatrix {
    /// Entries vanish unless `M ⊂ L^c`, which in this order means strictly
    /// above the anti-diagonal.
    pub fn is_skew_triangular(&self) -> bool {
        let n = self.order.len();
        let l = n.trailing_zeros() as usize;
        let anti_diagonal = (0..n).all(|r| self.order[r].complement(l) == self.order[n - 1 - r]);
        let supported = (0..n).all(|r| {
            (0..n).all(|c| {
                let disjoint = self.order[r].is_disjoint(self.order[c]);
                (disjoint || self.rows[r][c].is_zero()) && (!disjoint || r + c <= n - 1)
            })
        });
        anti_diagonal && supported
    }

    /// Skew-diagonal entries `a_{L,L^c}` are nonzero with lowest form in
    /// degree `|L|`, the product of the (nonzero) linear forms of the `x_α`.
    pub fn skew_diagonal_regular(&self) -> bool {
        let n = self.order.len();
        (0..n).all(|r| {
            let d = &self.rows[r][n - 1 - r];
            d.valuation() == Some(self.order[r].len() as u32)
        })
    }
}

/// A Bott-Samelson variety `X_I` for a sequence of simple indices.
#[derive(Debug)]
pub struct BottSamelson {
    alg: Arc<FormalGroupAlgebra>,
    seq: Vec<usize>,
    /// `a_{L,M}` indexed `[L][M]`, zero unless disjoint.
    a: OnceLock<Vec<Vec<Series>>>,
}

impl BottSamelson {
    pub fn new(alg: Arc<FormalGroupAlgebra>, seq: Vec<usize>) -> Result<Self> {
        if seq.len() > MAX_SEQ_LEN {
            return Err(Error::InvalidSubset {
                mask: 0,
                len: seq.len(),
            });
        }
        for &i in &seq {
            alg.datum().check_index(i)?;
        }
        Ok(BottSamelson {
            alg,
            seq,
            a: OnceLock::new(),
        })
    }

    pub fn alg(&self) -> &Arc<FormalGroupAlgebra> {
        &self.alg
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    fn check(&self, s: Subset) -> Result<()> {
        s.check(self.len())
    }

    /// `α_{i_j}` for a 1-based position.
    fn simple(&self, j: usize) -> &LatticeVector {
        self.alg
            .datum()
            .simple_root(self.seq[j - 1])
            .expect("indices validated")
    }

    /// `v_j^L = ∏_{k ∈ L ∩ [j]} s_{i_k}`, in increasing `k`.
    pub fn v_sub(&self, l: Subset, j: usize) -> Result<WeylElement> {
        self.check(l)?;
        if j > self.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                rank: self.len(),
            });
        }
        let word: Vec<usize> = (1..=j)
            .filter(|&k| l.contains(k))
            .map(|k| self.seq[k - 1])
            .collect();
        self.alg.datum().weyl_from_word(&word)
    }

    /// `v^L = v_l^L`, the Weyl element of the fixed point `pt_L`.
    pub fn v(&self, l: Subset) -> Result<WeylElement> {
        self.v_sub(l, self.len())
    }

    /// `v_j^L` for `j = 0..=l`.
    fn v_prefixes(&self, l: Subset) -> Vec<WeylElement> {
        let mut out = vec![self.alg.datum().identity()];
        for k in 1..=self.len() {
            let prev = out.last().unwrap().clone();
            out.push(if l.contains(k) {
                prev.compose(self.alg.datum().simple_reflection(self.seq[k - 1]).unwrap())
            } else {
                prev
            });
        }
        out
    }

    /// Tangent weights `{−v_j^L(α_{i_j})}` at `pt_L`, in order of `j`.
    pub fn tangent_weights(&self, l: Subset) -> Result<Vec<LatticeVector>> {
        self.check(l)?;
        let v = self.v_prefixes(l);
        Ok((1..=self.len())
            .map(|j| v[j].act(self.simple(j)).neg())
            .collect())
    }

    /// `a_{L,M} = ∏_{k ∈ L} x_{v_{k−1}^M(−α_{i_k})}`, without the support condition.
    pub fn a_coeff(&self, l: Subset, m: Subset) -> Result<Series> {
        self.check(l)?;
        self.check(m)?;
        let v = self.v_prefixes(m);
        let mut out = self.alg.one();
        for k in l.positions() {
            out = out.mul(&self.alg.x_of(&v[k - 1].act(&self.simple(k).neg())));
        }
        Ok(out)
    }

    /// `x_{I,L} = ∏_j x_{v_j^L(−α_{i_j})}`, the product over the tangent weights.
    pub fn x_il(&self, l: Subset) -> Result<Series> {
        let mut out = self.alg.one();
        for w in self.tangent_weights(l)? {
            out = out.mul(&self.alg.x_of(&w));
        }
        Ok(out)
    }

    fn a_table(&self) -> &Vec<Vec<Series>> {
        self.a.get_or_init(|| {
            let n = 1usize << self.len();
            let mut rows = vec![vec![self.alg.zero(); n]; n];
            for (li, row) in rows.iter_mut().enumerate() {
                for (mi, entry) in row.iter_mut().enumerate() {
                    if li & mi == 0 {
                        *entry = self.a_coeff(Subset(li as u32), Subset(mi as u32)).unwrap();
                    }
                }
            }
            rows
        })
    }

    /// `j^*(η_L)`: value `a_{L,M}` at `M ⊂ L^c`, zero elsewhere.
    pub fn restrict_eta(&self, l: Subset) -> Result<GkmElement> {
        self.check(l)?;
        Ok(GkmElement {
            len: self.len(),
            values: self.a_table()[l.0 as usize].clone(),
        })
    }

    pub fn restriction_matrix(&self) -> RestrictionMatrix {
        let order = ordered_subsets(self.len());
        let table = self.a_table();
        let rows = order
            .iter()
            .map(|l| {
                order
                    .iter()
                    .map(|m| table[l.0 as usize][m.0 as usize].clone())
                    .collect()
            })
            .collect();
        RestrictionMatrix { order, rows }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: len,
            });
        }
        Ok(())
    }

    /// `Σ_L v_L · j^*(η_L)`.
    pub fn eta_to_gkm(&self, v: &EtaVector) -> Result<GkmElement> {
        self.check_len(v.len)?;
        let table = self.a_table();
        let mut out = GkmElement::zero(&self.alg, self.len());
        for (l, c) in v.iter() {
            if c.is_zero() {
                continue;
            }
            for (m, a) in table[l.0 as usize].iter().enumerate() {
                if !a.is_zero() {
                    out.values[m] = out.values[m].add(&c.mul(a));
                }
            }
        }
        Ok(out)
    }

    /// Inverts [`eta_to_gkm`](Self::eta_to_gkm) by back-substitution along the
    /// skew-triangular matrix, from the largest support down. Each step is an
    /// exact division by `a_{M^c,M}`.
    pub fn gkm_to_eta(&self, g: &GkmElement) -> Result<EtaVector> {
        self.check_len(g.len)?;
        let l = self.len();
        let table = self.a_table();
        let mut rest = g.values.clone();
        let mut out = EtaVector::zero(&self.alg, l);
        for m in ordered_subsets(l).into_iter().rev() {
            let lc = m.complement(l);
            let row = &table[lc.0 as usize];
            let c = rest[m.0 as usize].exact_divide(&row[m.0 as usize])?;
            if !c.is_zero() {
                for sub in m.subsets() {
                    let k = sub.0 as usize;
                    rest[k] = rest[k].sub(&c.mul(&row[k]));
                }
            }
            out.coeffs[lc.0 as usize] = c;
        }
        Ok(out)
    }

    /// Checks `(g_{L_1} − g_{L_2}) / x_{v_{k−1}^{L_1}(−α_{i_k})} ∈ S` for all
    /// `L_1 = L_2 ⊔ {k}`.
    pub fn gkm_check(&self, g: &GkmElement) -> Result<GkmCheck> {
        self.check_len(g.len)?;
        for l2 in ordered_subsets(self.len()) {
            let v = self.v_prefixes(l2);
            for k in (1..=self.len()).filter(|&k| !l2.contains(k)) {
                let l1 = l2.with(k);
                let diff = g.get(l1).sub(g.get(l2));
                let d = self
                    .alg
                    .x_of_at(&v[k - 1].act(&self.simple(k).neg()), diff.precision());
                match diff.exact_divide(&d) {
                    Ok(_) => {}
                    Err(Error::NotDivisible { monomial, .. }) => {
                        return Ok(GkmCheck::Fail(GkmWitness {
                            l1,
                            l2,
                            k,
                            monomial,
                        }));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(GkmCheck::Pass)
    }

    /// The coefficients of `η_j²` in the `η`-basis: `θ_{(i_1..i_{j−1}),L}(x_{−α_{i_j}})`
    /// at `η_{L ∪ {j}}` for `L ⊂ [j−1]`.
    pub fn quadratic_relation(&self, j: usize) -> Result<EtaVector> {
        if j == 0 || j > self.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                rank: self.len(),
            });
        }
        let u = self.alg.x_of(&self.simple(j).neg());
        let theta = theta_all(&self.alg, &self.seq[..j - 1], &u)?;
        let mut out = EtaVector::zero(&self.alg, self.len());
        for (mask, c) in theta.into_iter().enumerate() {
            out.set(Subset(mask as u32).with(j), c);
        }
        Ok(out)
    }

    /// Product in `h_T(X_I)` through the injective restriction map.
    pub fn eta_multiply(&self, v: &EtaVector, w: &EtaVector) -> Result<EtaVector> {
        let prod = self.eta_to_gkm(v)?.mul(&self.eta_to_gkm(w)?);
        self.gkm_to_eta(&prod)
    }

    /// `j^* c_I(u)`: value `v^L(u)` at `pt_L`.
    pub fn char_restrict(&self, u: &Series) -> GkmElement {
        let values = (0..1u32 << self.len())
            .map(|m| self.alg.weyl_act(&self.v(Subset(m)).unwrap(), u))
            .collect();
        GkmElement {
            len: self.len(),
            values,
        }
    }

    /// `c_I(u) = Σ_L θ_{I,L}(u) η_L`.
    pub fn char_in_eta(&self, u: &Series) -> Result<EtaVector> {
        let coeffs = theta_all(&self.alg, &self.seq, u)?;
        Ok(EtaVector {
            len: self.len(),
            coeffs,
        })
    }

    /// Whether the weights `v_{j−1}^L(−α_{i_j})`, `j ∉ L`, are pairwise distinct.
    pub fn distinct_weights(&self, l: Subset) -> Result<bool> {
        self.check(l)?;
        let v = self.v_prefixes(l);
        let mut seen = std::collections::HashSet::new();
        Ok((1..=self.len())
            .filter(|&j| !l.contains(j))
            .all(|j| seen.insert(v[j - 1].act(&self.simple(j).neg()))))
    }

    /// Whether the letters of `I` are pairwise distinct.
    pub fn has_distinct_letters(&self) -> bool {
        let mut s = self.seq.clone();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::FormalGroupLaw;
    use crate::rootdata::RootDatum;

    fn bs(name: &str, fgl: FormalGroupLaw, n: u32, seq: &[usize]) -> BottSamelson {
        let alg = FormalGroupAlgebra::new(RootDatum::named(name).unwrap(), fgl, n).unwrap();
        BottSamelson::new(alg, seq.to_vec()).unwrap()
    }

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    fn s(p: &[usize]) -> Subset {
        Subset::from_positions(p)
    }

    #[test]
    fn fixed_point_data_in_a2() {
        let b = bs("A2", FormalGroupLaw::multiplicative(), 6, &[1, 2]);
        // α_1 = (2,−1), α_2 = (−1,2), α_1+α_2 = (1,1)
        assert_eq!(
            b.tangent_weights(s(&[])).unwrap(),
            vec![lv(&[-2, 1]), lv(&[1, -2])]
        );
        assert_eq!(
            b.tangent_weights(s(&[1])).unwrap(),
            vec![lv(&[2, -1]), lv(&[-1, -1])]
        );
        assert_eq!(
            b.tangent_weights(s(&[1, 2])).unwrap(),
            vec![lv(&[2, -1]), lv(&[1, 1])]
        );
        let w = b.v(s(&[1, 2])).unwrap();
        assert_eq!(w, b.alg().datum().weyl_from_word(&[1, 2]).unwrap());
        assert!(b.v_sub(s(&[]), 2).unwrap().is_identity());
    }

    #[test]
    fn v_sub_cancels() {
        let b = bs("A2", FormalGroupLaw::additive(), 4, &[1, 2, 1]);
        assert!(b.v_sub(s(&[1, 3]), 3).unwrap().is_identity());
        assert!(b.v_sub(s(&[1]), 4).is_err());
    }

    #[test]
    fn restriction_rows_in_a2() {
        let b = bs("A2", FormalGroupLaw::multiplicative(), 6, &[1, 2]);
        let a = b.alg().clone();
        let x = |v: &[i64]| a.x_of(&lv(v));
        let eta1 = b.restrict_eta(s(&[1])).unwrap();
        assert_eq!(eta1.get(s(&[])), &x(&[-2, 1]));
        assert_eq!(eta1.get(s(&[2])), &x(&[-2, 1]));
        assert!(eta1.get(s(&[1])).is_zero() && eta1.get(s(&[1, 2])).is_zero());
        let eta2 = b.restrict_eta(s(&[2])).unwrap();
        assert_eq!(eta2.get(s(&[])), &x(&[1, -2]));
        assert_eq!(eta2.get(s(&[1])), &x(&[-1, -1]));
        assert!(eta2.get(s(&[2])).is_zero() && eta2.get(s(&[1, 2])).is_zero());
        let m = b.restriction_matrix();
        assert!(m.is_skew_triangular());
        assert!(m.skew_diagonal_regular());
    }

    #[test]
    fn empty_sequence() {
        let b = bs("A1", FormalGroupLaw::additive(), 4, &[]);
        let m = b.restriction_matrix();
        assert_eq!(m.rows.len(), 1);
        assert!(m.rows[0][0].agrees_with(&b.alg().one()));
        let g = GkmElement::constant(0, &b.alg().var(1).unwrap());
        assert!(b.gkm_check(&g).unwrap().passed());
        assert_eq!(
            b.gkm_to_eta(&g).unwrap().get(Subset::EMPTY),
            &b.alg().var(1).unwrap()
        );
    }

    #[test]
    fn gkm_round_trip_and_check() {
        let b = bs("A2", FormalGroupLaw::multiplicative(), 6, &[1, 2, 1]);
        let a = b.alg().clone();
        let mut v = EtaVector::zero(&a, 3);
        v.set(s(&[1, 3]), a.var(1).unwrap());
        v.set(s(&[2]), a.one());
        v.set(s(&[]), a.x_of(&lv(&[1, 1])));
        let g = b.eta_to_gkm(&v).unwrap();
        assert!(b.gkm_check(&g).unwrap().passed());
        assert!(b.gkm_to_eta(&g).unwrap().agrees_with(&v));
    }

    #[test]
    fn gkm_failure_witness() {
        let b = bs("A1", FormalGroupLaw::additive(), 4, &[1]);
        let a = b.alg().clone();
        let g = GkmElement::new(1, vec![a.zero(), a.one()]).unwrap();
        match b.gkm_check(&g).unwrap() {
            GkmCheck::Fail(w) => {
                assert_eq!((w.l1, w.l2, w.k), (s(&[1]), s(&[]), 1));
                assert_eq!(w.monomial, vec![0]);
            }
            GkmCheck::Pass => panic!("(0, 1) is not in the image"),
        }
        assert!(b.gkm_to_eta(&g).is_err());
    }

    #[test]
    fn quadratic_relations() {
        let b = bs("A3", FormalGroupLaw::multiplicative(), 6, &[1, 2, 3]);
        let a = b.alg().clone();
        let q1 = b.quadratic_relation(1).unwrap();
        assert_eq!(
            q1.get(s(&[1])),
            &a.x_of(&a.datum().simple_root(1).unwrap().neg())
        );
        for j in 1..=3 {
            let ej = EtaVector::unit(&a, 3, s(&[j]));
            let sq = b.eta_multiply(&ej, &ej).unwrap();
            assert!(sq.agrees_with(&b.quadratic_relation(j).unwrap()), "j = {j}");
        }
        assert!(b.quadratic_relation(4).is_err());
    }

    #[test]
    fn characteristic_map_consistency() {
        let b = bs("B2", FormalGroupLaw::multiplicative(), 6, &[2, 1, 2]);
        let a = b.alg().clone();
        let u = a
            .x_of(&lv(&[1, -1]))
            .mul(&a.var(2).unwrap())
            .add(&a.var(1).unwrap());
        let lhs = b.eta_to_gkm(&b.char_in_eta(&u).unwrap()).unwrap();
        assert!(lhs.agrees_with(&b.char_restrict(&u)));
        assert!(lhs.min_precision() >= 6);
    }

    #[test]
    fn distinct_weight_lemma() {
        let b = bs("A2", FormalGroupLaw::additive(), 4, &[1, 1]);
        assert!(!b.distinct_weights(Subset::EMPTY).unwrap());
        let b = bs("A3", FormalGroupLaw::additive(), 4, &[2, 1, 3]);
        for m in 0..8 {
            assert!(b.distinct_weights(Subset(m)).unwrap());
        }
    }
}
