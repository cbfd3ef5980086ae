pub mod error;
pub mod funcspace;
pub mod intertwine;
pub mod kernel;
pub mod paley_wiener;
pub mod numerics;
pub mod par;
pub mod rules;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
