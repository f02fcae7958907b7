//! Service and command-line front end over `exemplar-core`.

pub mod api;
pub mod cli;
pub mod config;
pub mod error;
pub mod methods;
pub mod plot;
pub mod state;

pub use error::{AppError, AppResult};
