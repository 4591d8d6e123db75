pub mod bkiso;
pub mod cyclo;
pub mod error;
pub mod linalg;
pub mod lusztig;
pub mod polyrat;
pub mod report;
pub mod residues;
pub mod scalars;
pub mod suites;
pub mod symgroup;
pub mod univariate;
pub mod word;

pub use error::{HeckeError, Result};
