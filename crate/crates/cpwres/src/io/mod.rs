//! Trace file formats: Touchstone v1 two-port (read) and CSV traces
//! (read/write).

pub mod touchstone;
pub mod trace_csv;
