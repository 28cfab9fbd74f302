//! Benchmark-only crate; see `benches/fields.rs`.  Kept as a separate
//! package so criterion and its dependency tree stay out of the library
//! and CLI builds.
