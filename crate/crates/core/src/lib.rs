pub mod algebra;
pub mod branch;
pub mod differentials;
pub mod dsl;
pub mod equisingularity;
pub mod families;
pub mod generic;
pub mod error;
pub mod implicit;
pub mod newton;
pub mod normal_form;
pub mod puiseux;
pub mod report;
pub mod sampling;
pub mod semigroup;

pub use error::{Error, Result};
