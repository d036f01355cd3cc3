pub mod diagonalizer;
pub mod exact;
pub mod exec;
pub mod function_reps;
pub mod polygon;
pub mod sequences;
