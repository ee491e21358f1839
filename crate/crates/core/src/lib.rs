pub mod baseline;
pub mod bounds;
pub mod error;
pub mod index;
pub mod inference;
pub mod lfp;
pub mod oracle;
pub mod scenario1;
pub mod scenario2;
pub mod types;
