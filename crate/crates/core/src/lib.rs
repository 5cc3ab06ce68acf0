pub mod error;
pub mod generators;
pub mod lyapunov;
pub mod matrixcore;
pub mod relations;
pub mod rootsystem;
pub mod words;

pub use error::{Error, Result};
pub use matrixcore::{Family, GroupSpec, Mat, Tolerance, C64};
