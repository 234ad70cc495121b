pub mod bipoly;
pub mod budget;
pub mod curve;
pub mod document;
pub mod error;
pub mod expr;
pub mod field;
pub mod ideals;
pub mod linalg;
pub mod local;
pub mod report;
pub mod series;
pub mod upoly;
pub mod zeta;

pub use error::{Error, Result};
