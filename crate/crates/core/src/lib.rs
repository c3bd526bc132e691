pub mod characters;
pub mod cyclic;
pub mod dihedral;
pub mod equivalence;
pub mod factor;
pub mod group;
pub mod notation;
pub mod search;
pub mod set;
