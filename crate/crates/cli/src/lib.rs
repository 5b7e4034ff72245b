//! Command-line front end and HTTP JSON service.

pub mod commands;
pub mod config;
pub mod error;
pub mod request;
pub mod server;

pub use commands::{run, Cli};
pub use config::AppConfig;
pub use error::AppError;
