//! Command-line front end: reports, caching and the verification battery.

pub mod battery;
pub mod cache;
pub mod commands;
pub mod error;
pub mod options;
pub mod report;
pub mod selftest;
