//! Human-readable rendering of series in `x_λ` notation.

use crate::coeff::Coeff;
use crate::fga::FormalGroupAlgebra;
use crate::rootdata::LatticeVector;
use crate::series::Series;

/// Renders `s` as `c·x_{λ_1}⋯x_{λ_k}` when such a factorization reproduces
/// `s` exactly at its full precision, and as raw monomials in the `x_{ω_i}`
/// otherwise.
pub fn render_series(alg: &FormalGroupAlgebra, s: &Series) -> String {
    match factor_into_x(alg, s) {
        Some((c, lambdas)) => {
            let labels: Vec<String> = lambdas
                .iter()
                .map(|l| format!("x_{{{}}}", alg.datum().label(l)))
                .collect();
            if labels.is_empty() {
                return c.to_string();
            }
            let prod = labels.join("*");
            if c.is_one() {
                prod
            } else if c == -Coeff::one() {
                format!("-{prod}")
            } else {
                format!("{c}*{prod}")
            }
        }
        None => render_raw(s),
    }
}

/// Raw monomials with variables written `x_{w1}`, `x_{w2}`, ….
pub fn render_raw(s: &Series) -> String {
    let mut out = s.to_string();
    for i in (1..=s.nvars()).rev() {
        out = out.replace(&format!("x{i}"), &format!("x_{{w{i}}}"));
    }
    out
}

/// Factorization `s = c · ∏ x_λ` over roots and fundamental weights, found by
/// a depth-first search over multisets of candidates. Each leaf is verified
/// by multiplying back at the full precision of `s`, since the divisions
/// along the way lose precision.
pub fn factor_into_x(alg: &FormalGroupAlgebra, s: &Series) -> Option<(Coeff, Vec<LatticeVector>)> {
    if s.valuation()? > MAX_FACTORS {
        return None;
    }
    let n = alg.nvars();
    let mut candidates: Vec<LatticeVector> = alg.datum().negative_roots();
    candidates.extend(alg.datum().positive_roots().iter().cloned());
    for i in 1..=n {
        let w = LatticeVector::fundamental(n, i);
        candidates.push(w.neg());
        candidates.push(w);
    }
    let mut found = Vec::new();
    let c = search(alg, &candidates, s, s, 0, &mut found)?;
    Some((c, found))
}

const MAX_FACTORS: u32 = 6;

fn search(
    alg: &FormalGroupAlgebra,
    candidates: &[LatticeVector],
    target: &Series,
    rest: &Series,
    start: usize,
    found: &mut Vec<LatticeVector>,
) -> Option<Coeff> {
    if rest.valuation()? == 0 {
        if rest.terms().any(|(m, _)| m.degree() > 0) {
            return None;
        }
        let c = rest.constant_term();
        let p = target.precision();
        let mut check = Series::constant(target.nvars(), p, c.clone());
        for l in found.iter() {
            check = check.mul_to(&alg.x_of_at(l, p), p);
        }
        return (check.precision() >= p && check.truncate(p) == *target).then_some(c);
    }
    for (k, c) in candidates.iter().enumerate().skip(start) {
        let Ok(q) = rest.exact_divide(&alg.x_of_at(c, rest.precision())) else {
            continue;
        };
        found.push(c.clone());
        if let Some(coeff) = search(alg, candidates, target, &q, k, found) {
            return Some(coeff);
        }
        found.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::FormalGroupLaw;
    use crate::rootdata::RootDatum;

    #[test]
    fn products_of_x_are_labelled() {
        let a = FormalGroupAlgebra::new(
            RootDatum::named("A2").unwrap(),
            FormalGroupLaw::multiplicative(),
            6,
        )
        .unwrap();
        let neg = LatticeVector(vec![-2, 1]);
        let s = a.x_of(&neg);
        assert_eq!(render_series(&a, &s), "x_{-a1}");
        let t = s
            .mul(&a.x_of(&LatticeVector(vec![-1, -1])))
            .scale(&Coeff::from_int(3));
        assert_eq!(render_series(&a, &t), "3*x_{-a1}*x_{-a1-a2}");
        assert_eq!(render_series(&a, &a.one()), "1");
    }

    #[test]
    fn raw_fallback() {
        let a = FormalGroupAlgebra::new(
            RootDatum::named("A2").unwrap(),
            FormalGroupLaw::multiplicative(),
            4,
        )
        .unwrap();
        // x_{ω_1} + x_{ω_2}^2 is no product of x_λ's
        let s = a.var(1).unwrap().add(&a.var(2).unwrap().pow(2));
        assert_eq!(render_series(&a, &s), "x_{w1} + x_{w2}^2");
        assert_eq!(render_series(&a, &a.zero()), "0");
    }
}
