//! Subsets of `[l] = {1, …, l}` as bitmasks; bit `j − 1` encodes `j`.

use std::fmt;

use crate::error::{Error, Result};

/// Longest supported sequence; `2^l` fixed points are enumerated eagerly.
pub const MAX_SEQ_LEN: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(l: usize) -> Subset {
        Subset(((1u64 << l) - 1) as u32)
    }

    pub fn from_positions(pos: &[usize]) -> Subset {
        Subset(pos.iter().fold(0, |m, &j| m | (1 << (j - 1))))
    }

    /// Fails unless every element lies in `[l]`.
    pub fn check(&self, l: usize) -> Result<()> {
        if l > MAX_SEQ_LEN || (self.0 as u64) >> l != 0 {
            return Err(Error::InvalidSubset {
                mask: self.0 as u64,
                len: l,
            });
        }
        Ok(())
    }

    pub fn contains(&self, j: usize) -> bool {
        j >= 1 && self.0 >> (j - 1) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn complement(&self, l: usize) -> Subset {
        Subset(!self.0 & Subset::full(l).0)
    }

    pub fn is_subset_of(&self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(&self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn with(&self, j: usize) -> Subset {
        Subset(self.0 | 1 << (j - 1))
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=32).filter(move |&j| self.contains(j))
    }

    /// Subsets of `self`, including `∅` and `self`.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(Subset(cur))
        })
    }

    /// Picks the elements of `seq` at the positions in `self`.
    pub fn restrict<T: Clone>(&self, seq: &[T]) -> Vec<T> {
        seq.iter()
            .enumerate()
            .filter(|(k, _)| self.contains(k + 1))
            .map(|(_, x)| x.clone())
            .collect()
    }

    /// Parses `""`, `"full"` or a comma list of positions.
    pub fn parse(s: &str, l: usize) -> Result<Subset> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("full") {
            return Ok(Subset::full(l));
        }
        let mut out = Subset::EMPTY;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let j: usize = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad subset entry {part:?}")))?;
            if j == 0 || j > l {
                return Err(Error::InvalidSubset {
                    mask: 1u64 << j.min(63),
                    len: l,
                });
            }
            out = out.with(j);
        }
        Ok(out)
    }

    /// Binary label in the style `10` for `{1} ⊂ [2]`, position 1 first.
    pub fn label(&self, l: usize) -> String {
        (1..=l)
            .map(|j| if self.contains(j) { '1' } else { '0' })
            .collect()
    }
}

/// All subsets of `[l]`, ordered by cardinality and then by mask value.
pub fn ordered_subsets(l: usize) -> Vec<Subset> {
    let mut v: Vec<Subset> = (0..1u32 << l).map(Subset).collect();
    v.sort_by_key(|s| (s.len(), s.0));
    v
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, j) in self.positions().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}
