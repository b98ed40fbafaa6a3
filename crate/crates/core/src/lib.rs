//! Exact computations with Chevalley groups over finite commutative rings.

pub mod ring;
pub mod roots;
pub mod chevalley;
pub mod intmat;
pub mod group;
pub mod decomposition;
pub mod congruence;
pub mod cli;
