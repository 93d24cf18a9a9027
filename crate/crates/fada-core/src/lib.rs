//! Exact engine for formal affine Demazure algebras of split semisimple
//! root data and motivic decompositions of generic twisted flag varieties.
//!
//! The pipeline, bottom to top:
//!
//! * [`ring`], [`series`] — exact coefficient arithmetic and truncated
//!   multivariate power series with precision tracking;
//! * [`fgl`] — formal group laws F(u,v);
//! * [`rootdata`] — Cartan data, character lattices and Weyl groups;
//! * [`fga`] — the formal group algebra S = R[[T*]]_F with Weyl action,
//!   divided differences and the kappa elements;
//! * [`qw`], [`demazure`] — the twisted group algebra Q_W, push-pull
//!   elements Y_i, the Y-basis and the relation verifier;
//! * [`gkm`] — the dual model: S-valued functions on W, Hecke operators,
//!   Schubert dual basis, operator matrices;
//! * [`fp`], [`schubert`], [`meataxe`], [`algebra`], [`decompose`] — the
//!   mod-p Schubert matrix model and the idempotent decomposition engine;
//! * [`a1`] — the rank-one integer idempotent solver;
//! * [`cache`] — on-disk structure-constant cache.

pub mod a1;
pub mod algebra;
pub mod cache;
pub mod decompose;
pub mod demazure;
pub mod error;
pub mod fga;
pub mod fgl;
pub mod fp;
pub mod gkm;
pub mod meataxe;
pub mod par;
pub mod qw;
pub mod ring;
pub mod rootdata;
pub mod schubert;
pub mod series;

pub use error::{Error, Result};
