// Index loops read more naturally than iterator chains in the matrix code.
#![allow(clippy::needless_range_loop)]

pub mod atlas;
pub mod lattice;
pub mod ramified;
pub mod surgery;
pub mod topology;
pub mod wall_crossing;
