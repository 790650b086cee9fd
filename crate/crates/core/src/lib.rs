//! Finite computations with equivariant colored operads over finite sets.

pub mod colimit;
pub mod enumerate;
pub mod error;
pub mod extension;
pub mod family;
pub mod free;
pub mod functor;
pub mod gfamily;
pub mod group;
pub mod json;
pub mod groupoid;
pub mod operad;
pub mod perm;
pub mod pis;
pub mod random;
pub mod signature;
pub mod symseq;
pub mod term;
pub mod tree;
pub mod unionfind;
pub mod worked;

pub use error::{Error, Result};
