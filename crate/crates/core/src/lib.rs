//! Navigation engine for a screen-reader-first street view explorer.

pub mod geo;
pub mod nav;
pub mod world;
pub mod synth;
pub mod session;
pub mod announce;
pub mod ai;
pub mod engine;
