//! Std companion of `interp-core`: conic backends, JSON IO, region and sweep
//! exports, and the command-line front end.

pub mod cli;
pub mod io;
pub mod region;
pub mod sdp;
pub mod sweep;
