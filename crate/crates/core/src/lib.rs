//! Exact computation in finite p-groups given by weighted polycyclic
//! presentations.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`pc`]: presentations with all relative orders equal to `p` and group
//!   arithmetic by collection from the left;
//! * [`subgroup`]: materialized subgroups, commutator and power subgroups, the
//!   lower central series, Frattini subgroups, section centralizers and
//!   invariant-subgroup enumeration;
//! * [`words`]: outer commutator words, their value sets and verbal subgroups;
//! * [`checks`]: the auxiliary subgroups `C_r`, `C_i^r`, `D_r(U)`, `E_r(R)`,
//!   the lemma verification suite and the single-slot witness search for
//!   lower central words;
//! * [`families`]: builtin presentations (dihedral, quaternion, wreath, ...).
#![no_std]

extern crate alloc;

pub mod checks;
pub mod families;
pub mod pc;
mod sample;
pub mod subgroup;
pub mod words;

pub use pc::{ConsistencyReport, Element, PcError, PcGroup, PcPresentation, RelWord};
pub use subgroup::{ElementSet, Subgroup, SubgroupError};
pub use words::{OuterWord, WitnessTuple, WordError};
