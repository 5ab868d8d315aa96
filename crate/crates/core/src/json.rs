//! JSON encodings of coefficients, series and formal group laws.

use serde::{Deserialize, Serialize};

use std::sync::Arc;

use crate::bscomb::{EtaVector, GkmElement};
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::fgl::{FglKind, FormalGroupLaw};
use crate::flagpush::{LocalizedElement, WFunction, WeylGroup};
use crate::rational::Rational;
use crate::rootdata::{LatticeVector, WeylElement};
use crate::series::Series;
use crate::subset::Subset;

/// A coefficient: a rational literal `"p/q"`, or a Laurent polynomial in `β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Rational(String),
    Integer(i64),
    Beta { beta_terms: Vec<(i32, String)> },
}

impl From<&Coeff> for CoeffJson {
    fn from(c: &Coeff) -> Self {
        match c.as_rational() {
            Some(r) => CoeffJson::Rational(r.to_string()),
            None => CoeffJson::Beta {
                beta_terms: c.terms().iter().map(|(p, r)| (*p, r.to_string())).collect(),
            },
        }
    }
}

impl TryFrom<&CoeffJson> for Coeff {
    type Error = Error;
    fn try_from(c: &CoeffJson) -> Result<Coeff> {
        let parse = |s: &str| {
            s.trim()
                .parse::<Rational>()
                .map_err(|e| Error::Parse(e.to_string()))
        };
        Ok(match c {
            CoeffJson::Rational(s) => Coeff::from(parse(s)?),
            CoeffJson::Integer(n) => Coeff::from_int(*n),
            CoeffJson::Beta { beta_terms } => {
                let mut terms = Vec::with_capacity(beta_terms.len());
                for (p, s) in beta_terms {
                    terms.push((*p, parse(s)?));
                }
                Coeff::from_terms(terms)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: CoeffJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: usize,
    pub precision: u32,
    pub terms: Vec<TermJson>,
}

impl From<&Series> for SeriesJson {
    fn from(s: &Series) -> Self {
        SeriesJson {
            vars: s.nvars(),
            precision: s.precision(),
            terms: s
                .terms()
                .map(|(m, c)| TermJson {
                    exp: m.exps(s.nvars()),
                    coeff: c.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for Series {
    type Error = Error;
    fn try_from(j: &SeriesJson) -> Result<Series> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exp.len() != j.vars {
                return Err(Error::DimensionMismatch {
                    expected: j.vars,
                    got: t.exp.len(),
                });
            }
            terms.push((t.exp.clone(), Coeff::try_from(&t.coeff)?));
        }
        Series::from_terms(j.vars, j.precision, terms)
    }
}

pub fn series_to_json(s: &Series) -> serde_json::Value {
    serde_json::to_value(SeriesJson::from(s)).expect("series encodes")
}

pub fn series_from_json(v: &serde_json::Value) -> Result<Series> {
    let j: SeriesJson = serde_json::from_value(v.clone())?;
    Series::try_from(&j)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FglFile {
    kind: String,
    #[serde(default)]
    degree_cap: Option<u32>,
    #[serde(default)]
    coeffs: Vec<(u32, u32, CoeffJson)>,
}

/// Parses `{ "kind": "generic", "degree_cap": N, "coeffs": [[i, j, c], …] }`.
/// The kinds `"additive"` and `"multiplicative"` select the built-in laws.
pub fn fgl_from_json(text: &str) -> Result<FormalGroupLaw> {
    let f: FglFile = serde_json::from_str(text)?;
    match f.kind.as_str() {
        "additive" => Ok(FormalGroupLaw::additive()),
        "multiplicative" => Ok(FormalGroupLaw::multiplicative()),
        "generic" => {
            let cap = f
                .degree_cap
                .ok_or_else(|| Error::InvalidFgl("generic law needs a degree_cap".into()))?;
            let mut entries = Vec::with_capacity(f.coeffs.len());
            for (i, j, c) in &f.coeffs {
                entries.push((*i, *j, Coeff::try_from(c)?));
            }
            FormalGroupLaw::generic(entries, cap)
        }
        other => Err(Error::InvalidFgl(format!("unknown kind {other:?}"))),
    }
}

pub fn fgl_to_json(f: &FormalGroupLaw) -> serde_json::Value {
    let file = FglFile {
        kind: match f.kind() {
            FglKind::Additive if f.degree_cap().is_none() => "additive".into(),
            FglKind::Multiplicative => "multiplicative".into(),
            _ => "generic".into(),
        },
        degree_cap: f.degree_cap(),
        coeffs: f
            .coefficients()
            .map(|(&(i, j), c)| (i, j, c.into()))
            .collect(),
    };
    serde_json::to_value(file).expect("law encodes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetEntryJson {
    pub subset: u32,
    pub series: SeriesJson,
}

/// Functions on subsets of `[l]`: `"basis": "fixed"` for values at fixed
/// points, `"eta"` for coefficients in the `η`-basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetFunctionJson {
    pub seq: Vec<usize>,
    pub basis: String,
    pub entries: Vec<SubsetEntryJson>,
}

fn subset_entries<'a>(it: impl Iterator<Item = (Subset, &'a Series)>) -> Vec<SubsetEntryJson> {
    it.map(|(s, v)| SubsetEntryJson {
        subset: s.0,
        series: v.into(),
    })
    .collect()
}

pub fn gkm_to_json(seq: &[usize], g: &GkmElement) -> SubsetFunctionJson {
    SubsetFunctionJson {
        seq: seq.to_vec(),
        basis: "fixed".into(),
        entries: subset_entries(g.iter()),
    }
}

pub fn eta_to_json(seq: &[usize], v: &EtaVector) -> SubsetFunctionJson {
    SubsetFunctionJson {
        seq: seq.to_vec(),
        basis: "eta".into(),
        entries: subset_entries(v.iter()),
    }
}

impl SubsetFunctionJson {
    /// The `2^l` series in mask order. Every subset must appear exactly once.
    fn values(&self) -> Result<Vec<Series>> {
        let l = self.seq.len();
        Subset::EMPTY.check(l)?;
        let mut out: Vec<Option<Series>> = vec![None; 1 << l];
        for e in &self.entries {
            Subset(e.subset).check(l)?;
            let slot = &mut out[e.subset as usize];
            if slot.is_some() {
                return Err(Error::Parse(format!("subset {} listed twice", e.subset)));
            }
            *slot = Some(Series::try_from(&e.series)?);
        }
        out.into_iter()
            .enumerate()
            .map(|(m, v)| v.ok_or_else(|| Error::Parse(format!("missing entry for subset {m}"))))
            .collect()
    }

    pub fn to_gkm(&self) -> Result<GkmElement> {
        if self.basis != "fixed" {
            return Err(Error::Parse(format!(
                "expected basis \"fixed\", found {:?}",
                self.basis
            )));
        }
        GkmElement::new(self.seq.len(), self.values()?)
    }

    pub fn to_eta(&self) -> Result<EtaVector> {
        if self.basis != "eta" {
            return Err(Error::Parse(format!(
                "expected basis \"eta\", found {:?}",
                self.basis
            )));
        }
        EtaVector::new(self.seq.len(), self.values()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WEntryJson {
    pub weyl_word: Vec<usize>,
    pub weyl_matrix: Vec<Vec<i64>>,
    pub series: SeriesJson,
    pub denominator_roots: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WFunctionJson {
    pub group: String,
    pub entries: Vec<WEntryJson>,
}

pub fn wfunction_to_json(f: &WFunction) -> WFunctionJson {
    WFunctionJson {
        group: f.group().datum().name().to_string(),
        entries: f
            .iter()
            .map(|(w, v)| WEntryJson {
                weyl_word: w.word().to_vec(),
                weyl_matrix: w.matrix_rows(),
                series: v.numerator().into(),
                denominator_roots: v.denominator().iter().map(|r| r.0.clone()).collect(),
            })
            .collect(),
    }
}

impl WFunctionJson {
    /// Rebuilds the function over `group`; entries are matched by matrix.
    pub fn to_wfunction(&self, group: Arc<WeylGroup>) -> Result<WFunction> {
        let rank = group.datum().rank();
        let mut values: Vec<Option<LocalizedElement>> = vec![None; group.len()];
        for e in &self.entries {
            let w = group.datum().weyl_from_word(&e.weyl_word)?;
            if w.matrix_rows() != e.weyl_matrix {
                return Err(Error::Parse(format!(
                    "word {:?} does not match its matrix",
                    e.weyl_word
                )));
            }
            let mut den = Vec::with_capacity(e.denominator_roots.len());
            for r in &e.denominator_roots {
                if r.len() != rank {
                    return Err(Error::DimensionMismatch {
                        expected: rank,
                        got: r.len(),
                    });
                }
                let r = LatticeVector(r.clone());
                if !group.datum().is_root(&r) {
                    return Err(Error::NotARoot(r.0));
                }
                den.push(r);
            }
            let k = group.index_of(&w);
            if values[k].is_some() {
                return Err(Error::Parse(format!(
                    "Weyl element {:?} listed twice",
                    e.weyl_word
                )));
            }
            values[k] = Some(LocalizedElement::new(Series::try_from(&e.series)?, den));
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    let w: &WeylElement = &group.elements()[k];
                    Error::Parse(format!("missing entry for Weyl element {:?}", w.word()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        WFunction::new(group, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_round_trip() {
        let s = Series::from_terms(
            2,
            5,
            vec![
                (vec![1, 0], Coeff::from(Rational::new(3, 4))),
                (
                    vec![1, 2],
                    Coeff::from_terms(vec![(-1, Rational::ONE), (2, Rational::from_int(-5))]),
                ),
            ],
        )
        .unwrap();
        let v = series_to_json(&s);
        assert_eq!(series_from_json(&v).unwrap(), s);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"3/4\""));
        assert!(text.contains("beta_terms"));
    }

    #[test]
    fn fgl_round_trip() {
        let text = r#"{"kind": "generic", "degree_cap": 6, "coeffs": [[1, 1, "-1"], [1, 0, 1]]}"#;
        let f = fgl_from_json(text).unwrap();
        assert_eq!(f.coefficient(1, 1), Coeff::from_int(-1));
        let back = fgl_from_json(&fgl_to_json(&f).to_string()).unwrap();
        assert_eq!(back, f);
        let m = fgl_from_json(r#"{"kind": "multiplicative"}"#).unwrap();
        assert_eq!(m, FormalGroupLaw::multiplicative());
        assert!(fgl_from_json(r#"{"kind": "generic"}"#).is_err());
        assert!(fgl_from_json(r#"{"kind": "elliptic", "degree_cap": 4}"#).is_err());
    }

    #[test]
    fn subset_functions_round_trip() {
        use crate::bscomb::BottSamelson;
        use crate::fga::FormalGroupAlgebra;
        use crate::rootdata::RootDatum;
        let alg = FormalGroupAlgebra::new(
            RootDatum::named("A2").unwrap(),
            FormalGroupLaw::multiplicative(),
            4,
        )
        .unwrap();
        let bs = BottSamelson::new(alg.clone(), vec![1, 2]).unwrap();
        let g = bs.restrict_eta(Subset(2)).unwrap();
        let j = gkm_to_json(bs.seq(), &g);
        let text = serde_json::to_string(&j).unwrap();
        let back: SubsetFunctionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_gkm().unwrap(), g);
        assert!(back.to_eta().is_err());
        let v = bs.char_in_eta(&alg.var(1).unwrap()).unwrap();
        assert_eq!(eta_to_json(bs.seq(), &v).to_eta().unwrap(), v);
        let mut missing = j.clone();
        missing.entries.pop();
        assert!(missing.to_gkm().is_err());
    }

    #[test]
    fn wfunction_round_trip() {
        use crate::fga::FormalGroupAlgebra;
        use crate::flagpush::FlagVariety;
        use crate::rootdata::RootDatum;
        let alg = FormalGroupAlgebra::new(
            RootDatum::named("B2").unwrap(),
            FormalGroupLaw::multiplicative(),
            4,
        )
        .unwrap();
        let fv = FlagVariety::new(alg).unwrap();
        let f = fv.bott_samelson_class(&[2, 1]).unwrap();
        let j = wfunction_to_json(&f);
        assert_eq!(j.group, "B2");
        let text = serde_json::to_string(&j).unwrap();
        let back: WFunctionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_wfunction(fv.group().clone()).unwrap(), f);
        // localized values survive too
        let a = fv.push_pull(1, &fv.pt_e()).unwrap();
        let back = wfunction_to_json(&a)
            .to_wfunction(fv.group().clone())
            .unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn malformed_series_rejected() {
        let bad =
            serde_json::json!({"vars": 2, "precision": 4, "terms": [{"exp": [1], "coeff": "1"}]});
        assert!(series_from_json(&bad).is_err());
        let bad =
            serde_json::json!({"vars": 1, "precision": 4, "terms": [{"exp": [1], "coeff": "1/0"}]});
        assert!(series_from_json(&bad).is_err());
    }
}
