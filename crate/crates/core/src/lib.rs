//! Quasicharacter sheaves on finite étale commutative group schemes over a
//! finite field, represented by explicit cocycle tables.
//!
//! The crate is layered bottom-up:
//!
//! * [`intlat`]: Smith normal form, exact solving over Q/Z;
//! * [`fgab`]: finitely generated abelian groups and Frobenius modules;
//! * [`etale`]: finite étale group models `(A, F)`;
//! * [`qcsheaf`]: sheaves as cocycle pairs `(a, b)`;
//! * [`cohomology`]: the Weil group total complex and its brute-force oracles;
//! * [`dictionary`]: classification reports;
//! * [`neron`]: tori over local fields and truncated unit groups;
//! * [`cli`]: JSON front end shared by the `qcs` binary and the C ABI.

pub mod catalog;
pub mod cli;
pub mod cohomology;
pub mod dictionary;
mod error;
pub mod etale;
pub mod fgab;
pub mod intlat;
pub mod neron;
pub mod qcsheaf;

pub use error::{Error, Result};
pub use intlat::{IntMatrix, Qz};
