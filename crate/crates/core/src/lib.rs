pub mod exactmath;
pub mod liealg;
pub mod cohomology;
pub mod kuranishi;
pub mod cartan;
pub mod pipeline;
