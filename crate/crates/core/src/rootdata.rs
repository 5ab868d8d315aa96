//! Root systems, the weight lattice and Weyl groups of finite type.
//!
//! Characters are integer vectors in the basis of fundamental weights, so the
//! pairing `⟨λ, α_i^∨⟩` is coordinate extraction and the simple root `α_j` is
//! the `j`-th column of the Cartan matrix. Simple indices are 1-based
//! throughout the public API, matching the letters of a Bott-Samelson word.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::MAX_VARS;

/// Default cap on the number of positive roots before the Cartan matrix is
/// declared not to be of finite type.
pub const DEFAULT_ROOT_BOUND: usize = 10_000;

/// An element of the character lattice in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    /// The fundamental weight `ω_i` (1-based).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A Weyl group element, identified by its integer matrix acting on weight
/// coordinates. The word is a witness only: two elements are equal when their
/// matrices are.
#[derive(Clone)]
pub struct WeylElement {
    rank: usize,
    /// Row-major `rank × rank`.
    matrix: Vec<i64>,
    word: Vec<usize>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.matrix.cmp(&other.matrix)
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "e")
        } else {
            let letters: Vec<String> = self.word.iter().map(|i| format!("s{i}")).collect();
            write!(f, "{}", letters.join("·"))
        }
    }
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut matrix = vec![0; rank * rank];
        for i in 0..rank {
            matrix[i * rank + i] = 1;
        }
        WeylElement {
            rank,
            matrix,
            word: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn matrix_entry(&self, row: usize, col: usize) -> i64 {
        self.matrix[row * self.rank + col]
    }

    /// Rows of the matrix, for serialization.
    pub fn matrix_rows(&self) -> Vec<Vec<i64>> {
        self.matrix.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == WeylElement::identity(self.rank)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.rank;
        let mut matrix = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc += self.matrix[r * n + k] * other.matrix[k * n + c];
                }
                matrix[r * n + c] = acc;
            }
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement {
            rank: n,
            matrix,
            word,
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.rank() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: v.rank(),
            });
        }
        let n = self.rank;
        Ok(LatticeVector(
            (0..n)
                .map(|r| (0..n).map(|k| self.matrix[r * n + k] * v.0[k]).sum())
                .collect(),
        ))
    }

    /// Same as [`apply`](Self::apply) for vectors known to have the right rank.
    pub(crate) fn act(&self, v: &LatticeVector) -> LatticeVector {
        self.apply(v).expect("rank checked by caller")
    }
}

/// A root system of finite type together with its weight lattice.
#[derive(Debug)]
pub struct RootDatum {
    name: String,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    simple_roots: Vec<LatticeVector>,
    positive_roots: Vec<LatticeVector>,
    /// Positive roots in simple-root coordinates, parallel to `positive_roots`.
    positive_root_coords: Vec<Vec<i64>>,
    /// Reflection `s_α` for each positive root, parallel to `positive_roots`.
    reflections: Vec<WeylElement>,
    simple_reflections: Vec<WeylElement>,
    root_index: HashMap<LatticeVector, usize>,
    inverse_cartan: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DatumConfig {
    cartan: Vec<Vec<i64>>,
    #[serde(default)]
    name: Option<String>,
}

impl RootDatum {
    /// Builds the root datum of a Cartan matrix of finite type, enumerating
    /// positive roots by closing the simple roots under simple reflections.
    pub fn new(cartan: Vec<Vec<i64>>) -> Result<Arc<Self>> {
        Self::with_name("custom", cartan, DEFAULT_ROOT_BOUND)
    }

    pub fn with_name(name: &str, cartan: Vec<Vec<i64>>, root_bound: usize) -> Result<Arc<Self>> {
        let n = cartan.len();
        if n == 0 {
            return Err(Error::InvalidCartan("empty matrix".into()));
        }
        if n > MAX_VARS {
            return Err(Error::RankTooLarge {
                rank: n,
                max: MAX_VARS,
            });
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCartan(format!(
                    "row {} has length {}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(Error::InvalidCartan(format!(
                        "diagonal entry ({0},{0}) is {a}",
                        i + 1
                    )));
                }
                if i != j && a > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "off-diagonal entry ({},{}) is positive",
                        i + 1,
                        j + 1
                    )));
                }
                if i != j && (a == 0) != (cartan[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "entries ({},{}) and ({},{}) must vanish together",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
                // a_ij·a_ji ≥ 4 already forces an infinite Weyl group.
                if i != j && a.saturating_mul(cartan[j][i]) > 3 {
                    return Err(Error::NotFiniteType(root_bound));
                }
            }
        }

        let simple_roots: Vec<LatticeVector> = (0..n)
            .map(|j| LatticeVector((0..n).map(|i| cartan[i][j]).collect()))
            .collect();

        let simple_reflections: Vec<WeylElement> = (0..n)
            .map(|i| {
                let mut m = WeylElement::identity(n);
                for r in 0..n {
                    m.matrix[r * n + i] -= simple_roots[i].0[r];
                }
                m.word = vec![i + 1];
                m
            })
            .collect();

        // Positive roots in root coordinates. Each new root β' = s_i β keeps
        // a witness (w, k) with w(α_k) = β'.
        let mut coords: Vec<Vec<i64>> = Vec::new();
        let mut witness: Vec<(Vec<usize>, usize)> = Vec::new();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for k in 0..n {
            let mut e = vec![0; n];
            e[k] = 1;
            seen.insert(e.clone(), coords.len());
            coords.push(e);
            witness.push((Vec::new(), k + 1));
            queue.push_back(coords.len() - 1);
        }
        while let Some(idx) = queue.pop_front() {
            for i in 0..n {
                let beta = &coords[idx];
                // Root coordinates of a finite root system are tiny; growth
                // beyond that means the matrix is not of finite type.
                if beta.iter().any(|&c| c > 1_000_000) {
                    return Err(Error::NotFiniteType(root_bound));
                }
                let pairing: i64 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
                if pairing == 0 {
                    continue;
                }
                let mut next = beta.clone();
                next[i] -= pairing;
                if next.iter().any(|&c| c < 0) || next.iter().all(|&c| c == 0) {
                    continue;
                }
                if seen.contains_key(&next) {
                    continue;
                }
                if coords.len() >= root_bound {
                    return Err(Error::NotFiniteType(root_bound));
                }
                let mut w = vec![i + 1];
                w.extend_from_slice(&witness[idx].0);
                let k = witness[idx].1;
                seen.insert(next.clone(), coords.len());
                coords.push(next);
                witness.push((w, k));
                queue.push_back(coords.len() - 1);
            }
        }
        // Sort by height, then coordinates, for a stable presentation.
        let mut order: Vec<usize> = (0..coords.len()).collect();
        order.sort_by(|&a, &b| {
            let ha: i64 = coords[a].iter().sum();
            let hb: i64 = coords[b].iter().sum();
            ha.cmp(&hb).then_with(|| coords[b].cmp(&coords[a]))
        });

        let to_weight = |rc: &[i64]| -> LatticeVector {
            LatticeVector(
                (0..n)
                    .map(|r| (0..n).map(|j| cartan[r][j] * rc[j]).sum())
                    .collect(),
            )
        };
        let word_element = |word: &[usize]| -> WeylElement {
            let mut w = WeylElement::identity(n);
            for &i in word {
                w = w.compose(&simple_reflections[i - 1]);
            }
            w
        };

        let mut positive_roots = Vec::with_capacity(order.len());
        let mut positive_root_coords = Vec::with_capacity(order.len());
        let mut reflections = Vec::with_capacity(order.len());
        for &idx in &order {
            positive_roots.push(to_weight(&coords[idx]));
            positive_root_coords.push(coords[idx].clone());
            let (w, k) = &witness[idx];
            let mut word = w.clone();
            word.push(*k);
            word.extend(w.iter().rev());
            reflections.push(word_element(&word));
        }

        let mut root_index = HashMap::new();
        for (i, r) in positive_roots.iter().enumerate() {
            root_index.insert(r.clone(), i);
        }

        let inverse_cartan = invert_integer_matrix(&cartan)
            .ok_or_else(|| Error::InvalidCartan("matrix is singular".into()))?;

        Ok(Arc::new(RootDatum {
            name: name.to_string(),
            rank: n,
            cartan,
            simple_roots,
            positive_roots,
            positive_root_coords,
            reflections,
            simple_reflections,
            root_index,
            inverse_cartan,
        }))
    }

    /// One of the built-in types: `A1`…`A8`, `B2`, `C2`, `G2`.
    pub fn named(name: &str) -> Result<Arc<Self>> {
        let upper = name.trim().to_ascii_uppercase();
        let cartan = match upper.as_str() {
            "B2" => vec![vec![2, -1], vec![-2, 2]],
            "C2" => vec![vec![2, -2], vec![-1, 2]],
            "G2" => vec![vec![2, -1], vec![-3, 2]],
            s if s.starts_with('A') => {
                let n: usize = s[1..]
                    .parse()
                    .map_err(|_| Error::InvalidCartan(format!("unknown type `{name}`")))?;
                if n == 0 || n > MAX_VARS {
                    return Err(Error::InvalidCartan(format!("unsupported type `{name}`")));
                }
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if i == j {
                                    2
                                } else if i.abs_diff(j) == 1 {
                                    -1
                                } else {
                                    0
                                }
                            })
                            .collect()
                    })
                    .collect()
            }
            _ => return Err(Error::InvalidCartan(format!("unknown type `{name}`"))),
        };
        Self::with_name(&upper, cartan, DEFAULT_ROOT_BOUND)
    }

    /// Loads `{ "cartan": [[..]], "name": ".." }` from a JSON or TOML file
    /// (chosen by extension, JSON otherwise).
    pub fn from_file(path: &Path) -> Result<Arc<Self>> {
        let text = std::fs::read_to_string(path)?;
        let cfg: DatumConfig = if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?
        } else {
            serde_json::from_str(&text)?
        };
        let name = cfg.name.unwrap_or_else(|| "custom".to_string());
        Self::with_name(&name, cfg.cartan, DEFAULT_ROOT_BOUND)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_root(&self, i: usize) -> Result<&LatticeVector> {
        self.check_index(i)?;
        Ok(&self.simple_roots[i - 1])
    }

    pub fn simple_roots(&self) -> &[LatticeVector] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[LatticeVector] {
        &self.positive_roots
    }

    pub fn negative_roots(&self) -> Vec<LatticeVector> {
        self.positive_roots.iter().map(|r| r.neg()).collect()
    }

    /// All roots: positive ones followed by their negatives.
    pub fn roots(&self) -> Vec<LatticeVector> {
        let mut v = self.positive_roots.clone();
        v.extend(self.negative_roots());
        v
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    fn check_vector(&self, v: &LatticeVector) -> Result<()> {
        if v.rank() != self.rank {
            Err(Error::DimensionMismatch {
                expected: self.rank,
                got: v.rank(),
            })
        } else {
            Ok(())
        }
    }

    /// `s_i(λ) = λ − ⟨λ, α_i^∨⟩ α_i`.
    pub fn reflect(&self, i: usize, v: &LatticeVector) -> Result<LatticeVector> {
        self.check_index(i)?;
        self.check_vector(v)?;
        let k = v.0[i - 1];
        Ok(v.sub(&self.simple_roots[i - 1].scale(k)))
    }

    pub fn simple_reflection(&self, i: usize) -> Result<&WeylElement> {
        self.check_index(i)?;
        Ok(&self.simple_reflections[i - 1])
    }

    /// The product `s_{w_1} ∘ s_{w_2} ∘ ⋯`; the word is kept as a witness.
    pub fn weyl_from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut w = WeylElement::identity(self.rank);
        for &i in word {
            w = w.compose(self.simple_reflection(i)?);
        }
        Ok(w)
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement::identity(self.rank)
    }

    /// `w⁻¹`, with the reversed word as witness.
    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let rev: Vec<usize> = w.word.iter().rev().copied().collect();
        self.weyl_from_word(&rev).expect("word letters are valid")
    }

    pub fn is_root(&self, v: &LatticeVector) -> bool {
        self.root_index.contains_key(v) || self.root_index.contains_key(&v.neg())
    }

    pub fn is_positive_root(&self, v: &LatticeVector) -> bool {
        self.root_index.contains_key(v)
    }

    /// The reflection `s_α` for any root `α` (positive or negative).
    pub fn root_reflection(&self, root: &LatticeVector) -> Result<&WeylElement> {
        if let Some(&i) = self.root_index.get(root) {
            return Ok(&self.reflections[i]);
        }
        if let Some(&i) = self.root_index.get(&root.neg()) {
            return Ok(&self.reflections[i]);
        }
        Err(Error::NotARoot(root.0.clone()))
    }

    /// Coordinates in the basis of simple roots, or `None` when `v` is not in
    /// the root lattice.
    pub fn root_coords(&self, v: &LatticeVector) -> Option<Vec<i64>> {
        if let Some(&i) = self.root_index.get(v) {
            return Some(self.positive_root_coords[i].clone());
        }
        let n = self.rank;
        let mut out = Vec::with_capacity(n);
        for r in 0..n {
            let mut acc = Rational::ZERO;
            for c in 0..n {
                acc += &(&self.inverse_cartan[r][c] * &Rational::from_int(v.0[c]));
            }
            if !acc.is_integer() {
                return None;
            }
            match acc {
                Rational::Small(k, 1) => out.push(k),
                _ => return None,
            }
        }
        Some(out)
    }

    /// The lattice vector with the given simple-root coordinates.
    pub fn from_root_coords(&self, rc: &[i64]) -> LatticeVector {
        let n = self.rank;
        LatticeVector(
            (0..n)
                .map(|r| (0..n).map(|j| self.cartan[r][j] * rc[j]).sum())
                .collect(),
        )
    }

    /// Human-readable label: `a1+a2`-style in root coordinates when possible,
    /// otherwise `w1-w2`-style in weight coordinates.
    pub fn label(&self, v: &LatticeVector) -> String {
        let (coords, sym) = match self.root_coords(v) {
            Some(rc) => (rc, 'a'),
            None => (v.0.clone(), 'w'),
        };
        let mut s = String::new();
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if s.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                s.push_str(&format!("{sign}{sym}{}", i + 1));
            } else {
                s.push_str(&format!("{sign}{mag}{sym}{}", i + 1));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    /// Parses a label produced by [`label`](Self::label).
    pub fn parse_label(&self, s: &str) -> Result<LatticeVector> {
        let err = || Error::Parse(format!("bad lattice label `{s}`"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "0" {
            return Ok(LatticeVector::zero(self.rank));
        }
        let mut root = vec![0i64; self.rank];
        let mut weight = vec![0i64; self.rank];
        let bytes = t.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let mut sign = 1;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1;
                }
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let mag: i64 = if start == pos {
                1
            } else {
                t[start..pos].parse().map_err(|_| err())?
            };
            let sym = *bytes.get(pos).ok_or_else(err)?;
            pos += 1;
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let idx: usize = t[start..pos].parse().map_err(|_| err())?;
            if idx == 0 || idx > self.rank {
                return Err(err());
            }
            match sym {
                b'a' => root[idx - 1] += sign * mag,
                b'w' => weight[idx - 1] += sign * mag,
                _ => return Err(err()),
            }
        }
        Ok(self.from_root_coords(&root).add(&LatticeVector(weight)))
    }
}

fn invert_integer_matrix(m: &[Vec<i64>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| Rational::from_int(x)).collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::ONE
                } else {
                    Rational::ZERO
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let d = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &d;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    /// Brute-force closure of the simple roots under all simple reflections,
    /// in weight coordinates.
    fn brute_force_roots(cartan: Vec<Vec<i64>>) -> Vec<LatticeVector> {
        let n = cartan.len();
        let simple: Vec<Vec<i64>> = (0..n)
            .map(|j| (0..n).map(|i| cartan[i][j]).collect())
            .collect();
        let mut set: std::collections::BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
        loop {
            let mut grew = false;
            for v in set.clone() {
                for i in 0..n {
                    let k = v[i];
                    let w: Vec<i64> = (0..n).map(|r| v[r] - k * simple[i][r]).collect();
                    grew |= set.insert(w);
                }
            }
            if !grew {
                break;
            }
        }
        set.into_iter().map(LatticeVector).collect()
    }

    #[test]
    fn a1_roots() {
        let d = RootDatum::named("A1").unwrap();
        assert_eq!(d.positive_roots(), &[lv(&[2])]);
        assert_eq!(d.roots(), vec![lv(&[2]), lv(&[-2])]);
    }

    #[test]
    fn root_sets_match_brute_force_closure() {
        for name in ["A2", "A3", "B2", "C2", "G2"] {
            let d = RootDatum::named(name).unwrap();
            let mut ours = d.roots();
            ours.sort();
            let brute = brute_force_roots(d.cartan().to_vec());
            assert_eq!(ours, brute, "{name}");
        }
        let a2 = RootDatum::named("A2").unwrap();
        assert_eq!(a2.roots().len(), 6);
        let b2 = RootDatum::named("B2").unwrap();
        assert_eq!(b2.roots().len(), 8);
    }

    #[test]
    fn positive_root_counts() {
        for (name, count) in [
            ("A1", 1),
            ("A2", 3),
            ("A3", 6),
            ("B2", 4),
            ("G2", 6),
            ("A4", 10),
        ] {
            assert_eq!(
                RootDatum::named(name).unwrap().positive_roots().len(),
                count,
                "{name}"
            );
        }
    }

    #[test]
    fn rejects_bad_cartan() {
        assert!(matches!(
            RootDatum::new(vec![vec![3]]),
            Err(Error::InvalidCartan(_))
        ));
        assert!(matches!(
            RootDatum::new(vec![vec![2, 1], vec![1, 2]]),
            Err(Error::InvalidCartan(_))
        ));
        assert!(matches!(
            RootDatum::new(vec![vec![2, -1], vec![0, 2]]),
            Err(Error::InvalidCartan(_))
        ));
        // Affine A1: infinitely many roots.
        let affine = RootDatum::with_name("affine", vec![vec![2, -2], vec![-2, 2]], 500);
        assert_eq!(affine.unwrap_err(), Error::NotFiniteType(500));
        // Hyperbolic rank 2.
        assert!(matches!(
            RootDatum::new(vec![vec![2, -3], vec![-3, 2]]),
            Err(Error::NotFiniteType(_))
        ));
    }

    #[test]
    fn reflections() {
        let d = RootDatum::named("A2").unwrap();
        let a1 = d.simple_root(1).unwrap().clone();
        let a2 = d.simple_root(2).unwrap().clone();
        assert_eq!(d.reflect(1, &a1).unwrap(), a1.neg());
        // s_1(-α_2) = -α_1 - α_2
        assert_eq!(d.reflect(1, &a2.neg()).unwrap(), a1.add(&a2).neg());
        // ω_1 pairs trivially with α_2^∨
        let w1 = LatticeVector::fundamental(2, 1);
        assert_eq!(d.reflect(2, &w1).unwrap(), w1);
        assert!(matches!(
            d.reflect(3, &w1),
            Err(Error::IndexOutOfRange { index: 3, rank: 2 })
        ));
        assert!(matches!(
            d.reflect(0, &w1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn reflection_is_involution_everywhere() {
        for name in ["A2", "A3", "B2", "G2"] {
            let d = RootDatum::named(name).unwrap();
            for x in -3..=3 {
                for y in -3..=3 {
                    let mut v = vec![x, y];
                    v.resize(d.rank(), x - y);
                    let v = LatticeVector(v);
                    for i in 1..=d.rank() {
                        let r = d.reflect(i, &v).unwrap();
                        assert_eq!(d.reflect(i, &r).unwrap(), v);
                    }
                }
            }
        }
    }

    #[test]
    fn words_and_braid_relations() {
        let d = RootDatum::named("A2").unwrap();
        assert!(d.weyl_from_word(&[1, 1]).unwrap().is_identity());
        assert!(d.weyl_from_word(&[]).unwrap().is_identity());
        assert_eq!(
            d.weyl_from_word(&[1, 2, 1]).unwrap(),
            d.weyl_from_word(&[2, 1, 2]).unwrap()
        );
        assert_ne!(
            d.weyl_from_word(&[1, 2]).unwrap(),
            d.weyl_from_word(&[2, 1]).unwrap()
        );
        let b2 = RootDatum::named("B2").unwrap();
        assert_eq!(
            b2.weyl_from_word(&[1, 2, 1, 2]).unwrap(),
            b2.weyl_from_word(&[2, 1, 2, 1]).unwrap()
        );
        assert!(d.weyl_from_word(&[1, 4]).is_err());
    }

    #[test]
    fn apply_and_inverse() {
        let d = RootDatum::named("B2").unwrap();
        let w = d.weyl_from_word(&[1, 2, 1]).unwrap();
        let winv = d.inverse(&w);
        let v = lv(&[3, -5]);
        assert_eq!(winv.apply(&w.apply(&v).unwrap()).unwrap(), v);
        assert!(w.apply(&lv(&[1, 2, 3])).is_err());
        // composing with a letter appends to the word, applies on the right
        let s1 = d.simple_reflection(1).unwrap();
        let s2 = d.simple_reflection(2).unwrap();
        assert_eq!(
            s1.compose(s2).apply(&v).unwrap(),
            s1.apply(&s2.apply(&v).unwrap()).unwrap()
        );
    }

    #[test]
    fn words_permute_roots() {
        for name in ["A2", "A3", "B2", "G2", "A4"] {
            let d = RootDatum::named(name).unwrap();
            let roots = d.roots();
            let n = d.rank();
            let words: Vec<Vec<usize>> = vec![
                (1..=n).collect(),
                (1..=n).rev().collect(),
                (1..=n).chain(1..=n).collect(),
                vec![1, n, 1],
            ];
            for word in words {
                let w = d.weyl_from_word(&word).unwrap();
                let mut image: Vec<LatticeVector> =
                    roots.iter().map(|r| w.apply(r).unwrap()).collect();
                image.sort();
                let mut sorted = roots.clone();
                sorted.sort();
                assert_eq!(image, sorted, "{name} {word:?}");
            }
        }
    }

    #[test]
    fn root_reflections_negate_their_root() {
        for name in ["A3", "B2", "G2"] {
            let d = RootDatum::named(name).unwrap();
            for r in d.roots() {
                let s = d.root_reflection(&r).unwrap();
                assert_eq!(s.apply(&r).unwrap(), r.neg());
                assert!(s.compose(s).is_identity());
            }
        }
        let d = RootDatum::named("A2").unwrap();
        assert!(d.root_reflection(&lv(&[1, 0])).is_err());
    }

    #[test]
    fn labels_round_trip() {
        let d = RootDatum::named("A2").unwrap();
        let a1 = d.simple_root(1).unwrap().clone();
        let a2 = d.simple_root(2).unwrap().clone();
        assert_eq!(d.label(&a1.add(&a2).neg()), "-a1-a2");
        assert_eq!(d.label(&LatticeVector::fundamental(2, 1)), "w1");
        for v in [
            a1.clone(),
            a2.scale(2).sub(&a1),
            LatticeVector::fundamental(2, 2),
            LatticeVector::zero(2),
        ] {
            assert_eq!(d.parse_label(&d.label(&v)).unwrap(), v);
        }
    }

    #[test]
    fn config_files() {
        let dir = std::env::temp_dir().join(format!("bsloc-rootdata-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let j = dir.join("a2.json");
        std::fs::write(&j, r#"{ "cartan": [[2,-1],[-1,2]], "name": "A2" }"#).unwrap();
        let t = dir.join("b2.toml");
        std::fs::write(&t, "name = \"B2\"\ncartan = [[2,-1],[-2,2]]\n").unwrap();
        assert_eq!(RootDatum::from_file(&j).unwrap().positive_roots().len(), 3);
        assert_eq!(RootDatum::from_file(&t).unwrap().positive_roots().len(), 4);
        std::fs::remove_dir_all(&dir).ok();
    }
}
