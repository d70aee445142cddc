//! Milnor link invariants of virtual and welded link diagrams.

pub mod diagram;
pub mod freegroup;
pub mod magnus;
pub mod milnor;
pub mod moves;
pub mod skein;
pub mod wirtinger;
