//! Multiplicity invariants of a spectrum.
//!
//! For a set `S` of cyclotomic-factored polynomials:
//!
//! * `ch*(S)` — the set of factor indices appearing anywhere in `S`;
//! * `m_d(S)` — the largest power of the `d`-th cyclotomic dividing a
//!   member;
//! * `m'_d(S)` — the smallest power of `x + 1` accompanying that largest
//!   `d`-power;
//! * `m_{i,j}(S)` — the largest combined `i`/`j` power in a single member.
//!
//! All three are additive over product spectra, which is what makes
//! factor-by-factor subtraction (and hence identification) work.  The
//! degree-divisor prediction `springer_ch_star` computes which indices must
//! appear for a simple type: exactly the divisors of its fundamental
//! degrees.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::exact_poly::totient;
use crate::root_data::{degrees, SimpleType};
use crate::spectra::Spectrum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    /// `m_{i,j}` requires two distinct indices.
    #[error("invalid pair: indices must differ, got ({0}, {0})")]
    InvalidPair(u32),
}

/// The index universe worth examining for a degree-`n` spectrum: all `d`
/// whose cyclotomic polynomial fits, i.e. `totient(d) <= n`.  Every
/// invariant vanishes outside it.
pub fn index_universe(n: u32) -> Vec<u32> {
    (1..=2 * n * n + 1).filter(|&d| totient(d) <= n).collect()
}

/// Union of factor indices over all members.
pub fn ch_star(s: &Spectrum) -> BTreeSet<u32> {
    s.iter().flat_map(|p| p.factors().keys().copied()).collect()
}

/// Maximal multiplicity of the `d`-th cyclotomic over members; 0 if absent.
pub fn m(s: &Spectrum, d: u32) -> u32 {
    s.iter().map(|p| p.multiplicity(d)).max().unwrap_or(0)
}

/// Minimal `x + 1` multiplicity among the members that realize the maximal
/// `d`-power.
///
/// At `d = 2` the maximal power already accounts for the whole `x + 1`
/// part, so the surplus is zero by definition.  When `m_d = 0` every
/// member realizes the (empty) maximum and the result degenerates to the
/// spectrum-wide minimum of the `x + 1` multiplicity — zero for every Weyl
/// spectrum, since the identity contributes `(x - 1)^n`.  Identification
/// never consults either degenerate case.
pub fn m_prime(s: &Spectrum, d: u32) -> u32 {
    if d == 2 {
        return 0;
    }
    let max = m(s, d);
    s.iter()
        .filter(|p| p.multiplicity(d) == max)
        .map(|p| p.multiplicity(2))
        .min()
        .unwrap_or(0)
}

/// Maximal combined multiplicity `t + s` with the `i`-th cyclotomic to the
/// `t` and the `j`-th to the `s` dividing one member.
pub fn m_pair(s: &Spectrum, i: u32, j: u32) -> Result<u32, InvariantError> {
    if i == j {
        return Err(InvariantError::InvalidPair(i));
    }
    Ok(s.iter()
        .map(|p| p.multiplicity(i) + p.multiplicity(j))
        .max()
        .unwrap_or(0))
}

/// Predicted factor-index set for a simple type: a root of unity of order
/// `d` occurs as an eigenvalue exactly when `d` divides a fundamental
/// degree.
pub fn springer_ch_star(t: SimpleType) -> BTreeSet<u32> {
    let degs = degrees(t);
    let max = *degs.last().unwrap();
    (1..=max)
        .filter(|d| degs.iter().any(|deg| deg % d == 0))
        .collect()
}

/// Bulk invariant table over requested indices and pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantTable {
    pub n: u32,
    pub ch_star: BTreeSet<u32>,
    pub m: BTreeMap<u32, u32>,
    pub m_prime: BTreeMap<u32, u32>,
    pub m_pair: BTreeMap<(u32, u32), u32>,
}

/// Populates a table for the requested indices (and pairs, normalized so
/// `i < j`).
pub fn invariant_table(
    s: &Spectrum,
    indices: &BTreeSet<u32>,
    pairs: &BTreeSet<(u32, u32)>,
) -> Result<InvariantTable, InvariantError> {
    let mut table = InvariantTable {
        n: s.degree(),
        ch_star: ch_star(s),
        m: BTreeMap::new(),
        m_prime: BTreeMap::new(),
        m_pair: BTreeMap::new(),
    };
    for &d in indices {
        table.m.insert(d, m(s, d));
        table.m_prime.insert(d, m_prime(s, d));
    }
    for &(i, j) in pairs {
        let (lo, hi) = (i.min(j), i.max(j));
        table.m_pair.insert((lo, hi), m_pair(s, lo, hi)?);
    }
    Ok(table)
}
