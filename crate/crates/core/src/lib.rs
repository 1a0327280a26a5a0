//! Modular representations of small finite groups over finite fields.

pub mod classify;
pub mod finite_field;
pub mod green;
pub mod linalg;
pub mod meataxe;
pub mod modrep;
pub mod perm_group;
pub mod poly;
