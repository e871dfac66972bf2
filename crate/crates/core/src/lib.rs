pub mod analysis;
pub mod barcode;
pub mod cli;
pub mod complex;
pub mod error;
pub mod fiber;
pub mod field;
pub mod morphism;
pub mod persistence;
pub mod strata;
