//! Library surface of the workbench: the cover document format and the run
//! report structures, shared between the binary and its test suites.

pub mod document;
pub mod report;
