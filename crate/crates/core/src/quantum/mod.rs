//! Quantum R-matrix identities, noncommutative exchange relations at small
//! size, and the semiclassical limit.

pub mod identities;

pub use identities::{check_identity, identity_suite, Expected, IdentityEntry, IdentityOutcome, CATALOG};
pub mod nc;

pub use nc::{
    exchange_rules_from_relations, exchange_rules_with, nc_normal_form, RConvention, quantum_automorphism_check, AutomorphismReport, ExchangeRule,
    ExchangeSystem, Generators, NcPoly, PairClass, T1Choice,
};
pub mod semiclassical;

pub use semiclassical::{semiclassical_expand, semiclassical_suite, Identification, SemiclassicalReport};
