//! Classification and invariants of isotrivial elliptic surfaces obtained as
//! quotients (E x C)/G by a finite group scheme G.

pub mod algebra;
pub mod families;
pub mod groupscheme;
pub mod invariants;
pub mod pgl2;
pub mod ramification;
pub mod suite;
