pub mod class_group;
pub mod complex;
pub mod cyclo;
pub mod demos;
pub mod det_lines;
pub mod duality;
pub mod equivariant;
pub mod error;
pub mod field;
pub mod forms;
pub mod group;
pub mod io;
pub mod matrix;
pub mod rational;
pub mod sweeps;

pub use cyclo::Cyclo;
pub use error::{Error, Result};
pub use field::Field;
pub use matrix::Matrix;
pub use rational::Rational;
