//! Benchmarks for hopfkit live in `benches/algebra.rs`; run them with
//! `cargo bench -p hopfkit-bench`.
