//! Demazure operators `Δ_α(p) = (p − s_α p)/x_α` and the composites `θ_{I,L}`.

use crate::error::{Error, Result};
use crate::fga::FormalGroupAlgebra;
use crate::rootdata::{LatticeVector, WeylElement};
use crate::series::Series;
use crate::subset::Subset;

/// `Δ_α(p)` for any root `α`. The result loses one degree of precision.
pub fn demazure(alg: &FormalGroupAlgebra, alpha: &LatticeVector, p: &Series) -> Result<Series> {
    let s = alg.datum().root_reflection(alpha)?;
    let num = p.sub(&alg.weyl_act(s, p));
    let x = alg.x_of_at(alpha, p.precision());
    num.exact_divide(&x)
}

/// `Δ_{−α_i}` for a simple index.
pub fn demazure_neg_simple(alg: &FormalGroupAlgebra, i: usize, p: &Series) -> Result<Series> {
    let alpha = alg.datum().simple_root(i)?.neg();
    let num = p.sub(&alg.simple_act(i, p));
    num.exact_divide(&alg.x_of_at(&alpha, p.precision()))
}

/// The data `(I, L)` of a composite operator `θ_{I,L} = θ_1 ∘ ⋯ ∘ θ_l`, where
/// `θ_j = Δ_{−α_{i_j}}` for `j ∈ L` and `s_{i_j}` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaWord {
    pub seq: Vec<usize>,
    pub subset: Subset,
}

impl ThetaWord {
    pub fn new(seq: Vec<usize>, subset: Subset) -> Result<Self> {
        subset.check(seq.len())?;
        Ok(ThetaWord { seq, subset })
    }
}

/// `θ_{I,L}(u)`: `θ_l` is applied first, `θ_1` last.
pub fn theta_apply(alg: &FormalGroupAlgebra, tw: &ThetaWord, u: &Series) -> Result<Series> {
    tw.subset.check(tw.seq.len())?;
    for &i in &tw.seq {
        alg.datum().check_index(i)?;
    }
    let mut out = u.clone();
    for j in (1..=tw.seq.len()).rev() {
        let i = tw.seq[j - 1];
        out = if tw.subset.contains(j) {
            demazure_neg_simple(alg, i, &out)?
        } else {
            alg.simple_act(i, &out)
        };
    }
    Ok(out)
}

/// `θ_{I,L}(u)` for every `L ⊂ [l]`, indexed by mask. Shares the common
/// inner compositions, so the cost is about `2^{l+1}` operator applications.
pub fn theta_all(alg: &FormalGroupAlgebra, seq: &[usize], u: &Series) -> Result<Vec<Series>> {
    for &i in seq {
        alg.datum().check_index(i)?;
    }
    // level[m] holds θ_{j+1} ∘ ⋯ ∘ θ_l (u) for the choices m on positions j+1..l.
    let mut level: Vec<(u32, Series)> = vec![(0, u.clone())];
    for j in (1..=seq.len()).rev() {
        let i = seq[j - 1];
        let mut next = Vec::with_capacity(level.len() * 2);
        for (mask, p) in &level {
            next.push((*mask, alg.simple_act(i, p)));
            next.push((mask | (1 << (j - 1)), demazure_neg_simple(alg, i, p)?));
        }
        level = next;
    }
    let mut out = vec![Series::zero(alg.nvars(), alg.precision()); 1 << seq.len()];
    for (mask, p) in level {
        out[mask as usize] = p;
    }
    Ok(out)
}

/// `(v s_α w(p) − v w(p)) / x_{v(α)}`, an element of `S` for any `v, w, α, p`.
pub fn div_lemma_check(
    alg: &FormalGroupAlgebra,
    v: &WeylElement,
    w: &WeylElement,
    alpha: &LatticeVector,
    p: &Series,
) -> Result<Series> {
    let s = alg.datum().root_reflection(alpha)?;
    let wp = alg.weyl_act(w, p);
    let a = alg.weyl_act(v, &alg.weyl_act(s, &wp));
    let b = alg.weyl_act(v, &wp);
    let root = v.apply(alpha)?;
    if !alg.datum().is_root(&root) {
        return Err(Error::NotARoot(root.0));
    }
    a.sub(&b).exact_divide(&alg.x_of_at(&root, p.precision()))
}
