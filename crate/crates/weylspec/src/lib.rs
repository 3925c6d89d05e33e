//! Exact-arithmetic fingerprints of Weyl groups.
//!
//! A split semisimple group over a field is determined, up to isogeny and a
//! possible swap of `B`/`C` factors, by the set of characteristic polynomials
//! of its Weyl group acting on the character lattice of a split maximal
//! torus.  This crate computes that fingerprint exactly and works with it:
//!
//! * [`root_data`] — Cartan matrices, integral simple reflections, root
//!   systems and fundamental degrees for all simple types `A`–`G`.
//! * [`exact_poly`] — integer polynomials, cyclotomic polynomials, and
//!   factorization of finite-order characteristic polynomials into
//!   cyclotomics.  No floating point anywhere.
//! * [`spectra`] — the fingerprint itself: the set `ch(W)` of characteristic
//!   polynomials over all elements of `W`, by signed-cycle combinatorics for
//!   classical types and exhaustive stabilizer-chain enumeration (or bundled
//!   data) for exceptional ones.
//! * [`invariants`] — the multiplicity statistics `m_d`, `m'_d`, `m_{i,j}`
//!   of a spectrum, and the degree-divisor prediction of its factor indices.
//! * [`identify`] — reconstruction of the simple-factor multiset from a
//!   spectrum alone (up to the unavoidable `B`/`C` ambiguity), plus a
//!   brute-force search oracle and an exhaustive uniqueness verifier.
//! * [`tori_fq`] — the applied front end over finite fields: conjugacy
//!   classes of `W` index maximal tori of the split group over `F_q`, and
//!   each torus has exactly `f_w(q)` rational points for `f_w` the class's
//!   characteristic polynomial.
//! * [`cli`] — the `weylspec` command-line tool over all of the above.
//!
//! Every runnable capability has a worked example under `examples/`; start
//! with `cargo run --example spectrum_basics`.
//!
//! ```
//! use weylspec::root_data::SemisimpleType;
//! use weylspec::spectra::SpectrumCatalog;
//!
//! let g2: SemisimpleType = "G2".parse().unwrap();
//! let catalog = SpectrumCatalog::in_memory();
//! let spectrum = catalog.spectrum(&g2).unwrap();
//! assert_eq!(spectrum.len(), 5);
//! ```

pub mod cli;
pub mod exact_poly;
pub mod identify;
pub mod invariants;
pub mod root_data;
pub mod spectra;
pub mod tori_fq;

pub mod stabchain;
