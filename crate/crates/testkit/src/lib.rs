//! Fixtures shared by the anchorlight test suites.

pub mod corpus;
pub mod server;
pub mod site;

pub use corpus::{encyclopedia, FixturePage, FIXTURE_BASE};
pub use server::FixtureServer;
pub use site::{Fault, Site};
