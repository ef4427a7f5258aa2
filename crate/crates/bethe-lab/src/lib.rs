//! Green's functions, transport indicators and an exact Grassmann/Berezin
//! calculus for random Schrödinger operators on the Bethe strip
//! H = ½Δ⊗1 + 1⊗A + λV.

pub mod cli;
pub mod error;
pub mod grassmann;
pub mod greens;
pub mod linalg;
pub mod model;
pub mod rng;
pub mod susy;
pub mod transport;

pub use error::{LabError, Result};
