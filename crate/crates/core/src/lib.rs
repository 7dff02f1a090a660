//! Coding, uniform sampling, conditioned sampling and exact laws for
//! multitype plane forests.
//!
//! Types are 0-based throughout the API. Serialized files use 1-based types
//! so that keys read like the usual `S_{1,1}` notation.

pub mod exact;
pub mod model;
pub mod codec;
pub mod cyclic;
pub mod laws;
pub mod sampling;
pub mod oracle;
