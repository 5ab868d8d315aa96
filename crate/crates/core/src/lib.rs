//! Exact localization computations for torus-equivariant oriented cohomology
//! of Bott-Samelson varieties over an arbitrary formal group law.

pub mod bscomb;
pub mod coeff;
pub mod demazure;
pub mod error;
pub mod fga;
pub mod fgl;
pub mod flagpush;
pub mod json;
pub mod rational;
pub mod render;
pub mod rootdata;
pub mod series;
pub mod subset;
pub mod verify;

pub use bscomb::{BottSamelson, EtaVector, GkmCheck, GkmElement};
pub use coeff::Coeff;
pub use error::{Error, Result};
pub use fga::FormalGroupAlgebra;
pub use fgl::{FglKind, FormalGroupLaw};
pub use flagpush::{FlagVariety, LocalizedElement, WFunction, WeylGroup};
pub use rational::Rational;
pub use rootdata::{LatticeVector, RootDatum, WeylElement};
pub use series::{Monomial, Series};
pub use subset::Subset;
