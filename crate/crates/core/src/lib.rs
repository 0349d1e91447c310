//! Finite representations of small integral symmetric relation algebras.
//!
//! The crate models algebras by their diversity cycles ([`ra`]), does dense
//! finite abelian group arithmetic ([`group`]), verifies candidate
//! representations two independent ways ([`verify`]), and builds or searches
//! for concrete representations: cyclotomic coset schemes over `Z/p`
//! ([`comer`]), Johnson-scheme random constructions ([`johnson`]) and
//! subgroup-based constructions over `(Z/2Z)^k` ([`gf2`]).

pub mod cli;
pub mod comer;
pub mod gf2;
pub mod group;
pub mod johnson;
pub mod ra;
pub mod verify;
