//! The formal group algebra `S = R[[x_{ω_1}, …, x_{ω_n}]]` of a root datum
//! and its Weyl group action.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;
use crate::rootdata::{LatticeVector, RootDatum, WeylElement};
use crate::series::{Series, MAX_PRECISION};

pub const DEFAULT_PRECISION: u32 = 8;

/// Truncated formal group algebra: series in `x_{ω_i}` (variable `i − 1`)
/// modulo degree `precision + 1`.
#[derive(Debug)]
pub struct FormalGroupAlgebra {
    datum: Arc<RootDatum>,
    fgl: Arc<FormalGroupLaw>,
    precision: u32,
    x_cache: Mutex<HashMap<(LatticeVector, u32), Series>>,
}

impl FormalGroupAlgebra {
    pub fn new(datum: Arc<RootDatum>, fgl: FormalGroupLaw, precision: u32) -> Result<Arc<Self>> {
        if precision == 0 || precision > MAX_PRECISION {
            return Err(Error::Mismatch(format!(
                "truncation degree must be in 1..={MAX_PRECISION}, got {precision}"
            )));
        }
        Ok(Arc::new(FormalGroupAlgebra {
            datum,
            fgl: Arc::new(fgl),
            precision,
            x_cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn fgl(&self) -> &FormalGroupLaw {
        &self.fgl
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn nvars(&self) -> usize {
        self.datum.rank()
    }

    pub fn zero(&self) -> Series {
        Series::zero(self.nvars(), self.precision)
    }

    pub fn one(&self) -> Series {
        Series::one(self.nvars(), self.precision)
    }

    pub fn constant(&self, c: Coeff) -> Series {
        Series::constant(self.nvars(), self.precision, c)
    }

    /// `x_{ω_i}` for a 1-based index.
    pub fn var(&self, i: usize) -> Result<Series> {
        self.datum.check_index(i)?;
        Ok(Series::var(self.nvars(), self.precision, i - 1))
    }

    /// `F(s, t)`.
    pub fn formal_sum(&self, s: &Series, t: &Series) -> Result<Series> {
        self.fgl.evaluate(s, t)
    }

    /// `ι(s)`, the formal inverse.
    pub fn formal_inverse(&self, s: &Series) -> Result<Series> {
        let top = self.fgl.known_degree(s.precision());
        s.compose_univariate(&self.fgl.inverse_uni(top), self.fgl.degree_cap())
    }

    /// `x_λ` at the working precision.
    pub fn x_of(&self, lambda: &LatticeVector) -> Series {
        self.x_of_at(lambda, self.precision)
    }

    /// `x_λ = [m_1]x_{ω_1} +_F ⋯ +_F [m_n]x_{ω_n}` for `λ = Σ m_i ω_i`,
    /// computed to the requested precision (less if the law is truncated).
    pub fn x_of_at(&self, lambda: &LatticeVector, precision: u32) -> Series {
        assert_eq!(lambda.rank(), self.nvars(), "weight of wrong rank");
        let key = (lambda.clone(), precision);
        if let Some(s) = self.x_cache.lock().unwrap().get(&key) {
            return s.clone();
        }
        let n = self.nvars();
        let top = self.fgl.known_degree(precision);
        let mut acc = Series::zero(n, precision);
        for (i, &m) in lambda.coords().iter().enumerate() {
            if m == 0 {
                continue;
            }
            let part = Series::var(n, precision, i)
                .compose_univariate(&self.fgl.multiple_uni(m, top), self.fgl.degree_cap())
                .expect("variables have zero constant term");
            acc = if acc.is_zero() {
                part
            } else {
                self.fgl
                    .evaluate(&acc, &part)
                    .expect("x_λ has zero constant term")
            };
        }
        self.x_cache.lock().unwrap().insert(key, acc.clone());
        acc
    }

    /// `w(p)`, applying the simple reflections of the witness word from the
    /// right. Each `s_i` fixes `ω_j` for `j ≠ i`, so it only substitutes
    /// `x_{ω_i} ↦ x_{s_i(ω_i)}`.
    pub fn weyl_act(&self, w: &WeylElement, p: &Series) -> Series {
        let mut out = p.clone();
        for &i in w.word().iter().rev() {
            out = self.simple_act(i, &out);
        }
        out
    }

    /// `s_i(p)` for a 1-based index.
    pub fn simple_act(&self, i: usize, p: &Series) -> Series {
        let omega = LatticeVector::fundamental(self.nvars(), i);
        let image = self.datum.reflect(i, &omega).expect("index checked");
        let img = self.x_of_at(&image, p.precision());
        p.substitute_var(i - 1, &img)
            .expect("x_λ has zero constant term")
    }

    /// `w(p)` by simultaneous substitution `x_{ω_j} ↦ x_{w(ω_j)}`. Independent
    /// of the word; used to cross-check [`weyl_act`](Self::weyl_act).
    pub fn weyl_act_by_substitution(&self, w: &WeylElement, p: &Series) -> Series {
        let n = self.nvars();
        let images: Vec<Series> = (1..=n)
            .map(|j| {
                let omega = LatticeVector::fundamental(n, j);
                self.x_of_at(&w.act(&omega), p.precision())
            })
            .collect();
        p.substitute_all(&images)
            .expect("x_λ has zero constant term")
    }
}
