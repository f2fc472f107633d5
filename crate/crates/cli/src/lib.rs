//! Catalog, checks and reports behind the `igusa` command.

pub mod catalog;
pub mod checks;
pub mod report;
