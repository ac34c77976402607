//! Front ends for the `chipfire` engine: the `chipfire` command line and the
//! JSON-over-HTTP service behind the browser playground.

pub mod cli;
pub mod commands;
pub mod family_params;
pub mod service;
pub mod sessions;
