//! Finite-grid laboratory for extensions of uniform algebras.

pub mod averaging;
pub mod boundary;
pub mod cert;
pub mod cole;
pub mod error;
pub mod funcsys;
pub mod gallery;
pub mod group_ext;
pub mod hull;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod measures;
pub mod space;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::C64;
pub use tol::Tolerances;
