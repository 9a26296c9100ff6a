//! Finite rings, finite modules over them, their homomorphisms and
//! submodule lattices, and decision procedures for Rickart-type and
//! related module properties.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod bitset;
pub mod error;
pub mod hom;
pub mod lab;
pub mod lattice;
pub mod limits;
pub mod module;
pub mod properties;
pub mod radix;
pub mod ring;

pub use bitset::ElemSet;
pub use error::{Error, Result};
pub use hom::{
    compose, direct_sum, embeds_in, enumerate_homs, for_each_idempotent, idempotent_endos,
    is_isomorphic, DirectSum, HomSpace, KernelImageCensus, ModuleHom,
};
pub use lattice::{quotient, Lattice, QuotientModule, Submodule};
pub use limits::Limits;
pub use module::{Element, FiniteModule, ModuleSpec};
pub use properties::{
    Certificate, Engine, EngineOptions, HomRoute, ModuleDescription, Property, PropertyReport,
    Verdict, Witness,
};
pub use ring::{FiniteRing, RingSpec, RingTag};
