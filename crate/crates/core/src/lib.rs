//! Exact arithmetic for valued fields.

pub mod artinschreier;
pub mod error;
pub mod fields;
pub mod groups;
pub mod hensel;
pub mod places;
pub mod series;
pub mod gallery;
pub mod text;

pub use error::{Error, Result};
