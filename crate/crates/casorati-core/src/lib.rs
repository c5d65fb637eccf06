#![no_std]
//! Pointwise curvature engine for Riemannian submersions given in charts.

extern crate alloc;

pub mod casorati;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod geometry;
pub mod numkit;
pub mod report;
pub mod submersion;
pub mod theorems;
pub mod tolerances;

pub use error::{Error, Result};
