//! Slice regular functions of a quaternionic variable: truncated power
//! series, geometric condition checks and classical bound verification.

pub mod quat;
pub mod series;
pub mod maps;
pub mod geocheck;
pub mod verify;
