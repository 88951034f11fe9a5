//! Exact computations with Bassian-finite abelian groups: localizations of the
//! integers, the direct-limit ring `R`, types of rank-1 groups, finite p-groups
//! and composite group verdicts.

pub mod arith;
pub mod arring;
pub mod dsl;
pub mod locnum;
pub mod pgroup;
pub mod typesys;
pub mod verdict;
