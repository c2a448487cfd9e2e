//! Subshifts over cell spaces, local maps between them, tilings and the
//! Garden of Eden experiment engine.

pub mod cellspace;
pub mod pattern;
pub mod subshift;
pub mod localmap;
pub mod tiling;
pub mod entropy;
pub mod goe;
pub mod config;
