//! Command-line front end: CSV and JSON ingestion, command dispatch and
//! result documents.

pub mod constraints;
pub mod error;
pub mod format;
pub mod ingest;
pub mod output;
pub mod run;
