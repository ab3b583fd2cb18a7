#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arch;
pub mod error;
pub mod optics;
pub mod sc;
pub mod sim;
pub mod workload;

pub use error::{Error, Result};
