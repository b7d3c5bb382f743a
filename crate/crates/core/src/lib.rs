//! Exact decision toolkit for non-traditional Cartan subalgebras and
//! C*-diagonals of finite twisted groupoids.
//!
//! The crate works with finite groupoids given by lookup tables, twists
//! presented by 2-cocycles valued in roots of unity, and a symbolic engine
//! for the ℤ² rotation-algebra family. Everything is exact: circle values
//! are roots of unity with adaptive moduli, sums live in cyclotomic fields,
//! and the integer linear algebra is over ℤ. There is no floating point
//! anywhere.

pub mod catalog;
pub mod cocycle;
pub mod cyclotomic;
pub mod diag;
pub mod dual;
pub mod error;
pub mod gpd;
pub mod io;
pub mod normalizer;
pub mod poly;
pub mod roots;
pub mod rotation;
pub mod snf;
pub mod weyl;

pub use cocycle::{Cocycle, TwistElement, TwistedGroupoid};
pub use gpd::{Groupoid, Subgroupoid};
pub use roots::RootOfUnity;
