//! Permutation modules on flag varieties of finite Chevalley groups.
//!
//! The crate builds simply-laced root systems and their Weyl groups
//! ([`rootsys`]), the corresponding split Chevalley groups over small finite
//! fields ([`chevalley`]), and the permutation module `F[G/B]` together with
//! the submodules spanned by alternating parabolic sums ([`flagmod`]).
//! On top of this sit subgroup closures ([`selfenc`]), support-reduction
//! searches ([`augment`]), the characteristic-`p` one-term argument
//! ([`charp`]) and a small meataxe-style module engine ([`modengine`]).

pub mod augment;
pub mod charp;
pub mod chevalley;
pub mod coeff;
pub mod error;
pub mod field;
pub mod flagmod;
pub mod linalg;
pub mod modengine;
pub mod rootsys;
pub mod selfenc;

pub use error::{Error, Result};
