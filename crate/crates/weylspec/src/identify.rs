//! Reconstruction of the simple-factor multiset of a Weyl group from its
//! spectrum alone.
//!
//! The algorithm walks ranks from the total rank down to 1.  At each rank
//! it reads off how many factors of each family that rank contributes,
//! using a handful of invariant values of the *residual* spectrum (the
//! input minus everything already attributed, which is well-defined because
//! `m`, `m'` and `m_{i,j}` are additive over products).  Factors of types
//! `B` and `C` have equal spectra, so they are reported under the merged
//! label `BC` — that ambiguity is intrinsic, not an implementation limit.
//!
//! Two independent routes are provided: [`identify_by_cases`], the
//! rank-by-rank invariant algorithm, and [`identify_by_search`], a pruned
//! exhaustive search over candidate multisets that serves as its oracle.
//! [`verify_uniqueness`] closes the loop by checking, over every semisimple
//! type up to a rank bound, that spectra collide only across `B`/`C`
//! relabelings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::invariants::{self, InvariantError};
use crate::root_data::{Family, SemisimpleType, SimpleType};
use crate::spectra::{Spectrum, SpectrumCatalog, SpectraError};

/// Default rank bound for the exhaustive search oracle.
pub const DEFAULT_SEARCH_BOUND: u32 = 8;

#[derive(Debug, Error)]
pub enum IdentifyError {
    /// A recipe produced a negative multiplicity, or the residual did not
    /// vanish after all ranks were processed: the input is not the spectrum
    /// of a product of simple Weyl groups of the claimed rank.
    #[error("inconsistent spectrum: {detail}")]
    InconsistentSpectrum { detail: String, partial: FactorReport },
    #[error("search bound exceeded: rank {rank} > bound {bound}")]
    SearchBoundExceeded { rank: u32, bound: u32 },
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// A simple-factor label with `B` and `C` merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FactorLabel {
    A(u32),
    BC(u32),
    D(u32),
    E(u32),
    F4,
    G2,
}

impl FactorLabel {
    pub fn rank(self) -> u32 {
        match self {
            FactorLabel::A(n) | FactorLabel::BC(n) | FactorLabel::D(n) | FactorLabel::E(n) => n,
            FactorLabel::F4 => 4,
            FactorLabel::G2 => 2,
        }
    }

    /// A concrete simple type with this label's spectrum (`BC` picks `B`).
    pub fn representative(self) -> SimpleType {
        let (family, rank) = match self {
            FactorLabel::A(n) => (Family::A, n),
            FactorLabel::BC(n) => (Family::B, n),
            FactorLabel::D(n) => (Family::D, n),
            FactorLabel::E(n) => (Family::E, n),
            FactorLabel::F4 => (Family::F, 4),
            FactorLabel::G2 => (Family::G, 2),
        };
        SimpleType::new(family, rank).expect("labels are canonical")
    }

    /// Collapses a simple type to its label (`B` and `C` both to `BC`).
    pub fn from_simple(t: SimpleType) -> FactorLabel {
        match t.family() {
            Family::A => FactorLabel::A(t.rank()),
            Family::B | Family::C => FactorLabel::BC(t.rank()),
            Family::D => FactorLabel::D(t.rank()),
            Family::E => FactorLabel::E(t.rank()),
            Family::F => FactorLabel::F4,
            Family::G => FactorLabel::G2,
        }
    }
}

impl fmt::Display for FactorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorLabel::A(n) => write!(f, "A{n}"),
            FactorLabel::BC(n) => write!(f, "BC{n}"),
            FactorLabel::D(n) => write!(f, "D{n}"),
            FactorLabel::E(n) => write!(f, "E{n}"),
            FactorLabel::F4 => write!(f, "F4"),
            FactorLabel::G2 => write!(f, "G2"),
        }
    }
}

/// A multiset of factor labels.
pub type FactorMultiset = BTreeMap<FactorLabel, u32>;

/// Collapses a semisimple type to its `BC`-merged label multiset.
pub fn collapse(t: &SemisimpleType) -> FactorMultiset {
    let mut out = FactorMultiset::new();
    for &f in t.factors() {
        *out.entry(FactorLabel::from_simple(f)).or_insert(0) += 1;
    }
    out
}

/// Result of factor identification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub factors: FactorMultiset,
    /// True when every invariant of the residual reached zero, i.e. the
    /// reported factors account for the whole input.
    pub residual_ok: bool,
}

impl FactorReport {
    pub fn total_rank(&self) -> u32 {
        self.factors.iter().map(|(l, &c)| l.rank() * c).sum()
    }
}

impl fmt::Display for FactorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (label, &count) in &self.factors {
            for _ in 0..count {
                if !first {
                    write!(f, " x ")?;
                }
                write!(f, "{label}")?;
                first = false;
            }
        }
        if first {
            write!(f, "(empty)")?;
        }
        Ok(())
    }
}

/// The input spectrum with the invariant contributions of already-attributed
/// factors subtracted.  Values can go negative on non-Weyl input; that is
/// the detection signal.
struct Residual<'a> {
    base: &'a Spectrum,
    catalog: &'a SpectrumCatalog,
    consumed: Vec<(SimpleType, i64)>,
}

impl<'a> Residual<'a> {
    fn new(base: &'a Spectrum, catalog: &'a SpectrumCatalog) -> Residual<'a> {
        Residual { base, catalog, consumed: Vec::new() }
    }

    fn table(&self, t: SimpleType) -> Result<Arc<Spectrum>, IdentifyError> {
        Ok(self.catalog.spectrum_simple(t)?)
    }

    fn consume(&mut self, t: SimpleType, count: i64) -> Result<(), IdentifyError> {
        debug_assert!(count > 0);
        // Materialize the table now so later queries cannot fail lazily.
        self.table(t)?;
        self.consumed.push((t, count));
        Ok(())
    }

    fn m(&self, d: u32) -> Result<i64, IdentifyError> {
        let mut v = invariants::m(self.base, d) as i64;
        for &(t, c) in &self.consumed {
            let tbl = self.table(t)?;
            v -= c * invariants::m(&tbl, d) as i64;
        }
        Ok(v)
    }

    fn m_prime(&self, d: u32) -> Result<i64, IdentifyError> {
        let mut v = invariants::m_prime(self.base, d) as i64;
        for &(t, c) in &self.consumed {
            let tbl = self.table(t)?;
            v -= c * invariants::m_prime(&tbl, d) as i64;
        }
        Ok(v)
    }

    fn m_pair(&self, i: u32, j: u32) -> Result<i64, IdentifyError> {
        let mut v = invariants::m_pair(self.base, i, j)? as i64;
        for &(t, c) in &self.consumed {
            let tbl = self.table(t)?;
            v -= c * invariants::m_pair(&tbl, i, j)? as i64;
        }
        Ok(v)
    }
}

fn simple(family: Family, rank: u32) -> SimpleType {
    SimpleType::new(family, rank).expect("recipe ranks are canonical")
}

/// Count of exceptional factors of rank `m`, read off a single index that
/// no other type of rank `<= m` can reach:
/// `E8 <- m_30` (degree-8 factor, 30 divides a degree only for `E8` below
/// rank 15), `E7 <- m_18`, `E6 <- m_9`, `F4 <- m_12`, `G2 <- m_6`.
fn exceptional_recipe(m: u32, resid: &Residual) -> Result<Option<(SimpleType, i64)>, IdentifyError> {
    let read = |d| resid.m(d);
    Ok(match m {
        8 => Some((simple(Family::E, 8), read(30)?)),
        7 => Some((simple(Family::E, 7), read(18)?)),
        6 => Some((simple(Family::E, 6), read(9)?)),
        4 => Some((simple(Family::F, 4), read(12)?)),
        2 => Some((simple(Family::G, 2), read(6)?)),
        _ => None,
    })
}

/// Count of `B_m` (= `C_m`) factors.  The generic key is `m_{2m}`: only
/// the hyperoctahedral group of rank `m` reaches a primitive `2m`-th root
/// of unity at rank `<= m` once the exceptionals are out of the way.  A
/// few low ranks need the three-key combination `m_a + m_b - m_{a,b}`,
/// which counts exactly the types carrying both indices without being able
/// to combine them in one element, or a subtraction of `m_30` where `E8`
/// shares the key.
fn b_recipe(m: u32, resid: &Residual) -> Result<i64, IdentifyError> {
    let ie = |a: u32, b: u32| -> Result<i64, IdentifyError> {
        Ok(resid.m(a)? + resid.m(b)? - resid.m_pair(a, b)?)
    };
    Ok(match m {
        2 => resid.m(4)?,
        3 => ie(4, 6)?,
        4 => resid.m(8)?,
        5 => resid.m(10)?,
        6 => ie(10, 12)?,
        7 => resid.m(14)?,
        8 => resid.m(16)?,
        9 => ie(16, 18)?,
        10 => resid.m(20)? - resid.m(30)?,
        11 => resid.m(22)?,
        12 => resid.m(24)? - resid.m(30)?,
        13 => resid.m(26)?,
        14 => resid.m(28)?,
        15 => ie(28, 30)?,
        _ => resid.m(2 * m)?,
    })
}

/// Count of `D_m` factors.  The key index is `2m - 2`, shared with
/// `B_{m-1}`; they are separated by `m'_{2m-2}`, the forced `x + 1`
/// multiplicity next to the top `2m-2` power: the only element of
/// `ch(W(D_m))` carrying that factor is `(x+1)(x^{m-1}+1)`, one `x + 1`
/// richer than the `x^{m-1}+1` of `B_{m-1}`.  For even `m` both carry one,
/// so the count is `m' - m`; for odd `m` only `D_m` does, so `m'` alone.
/// Exceptional polluters of the key index (`G2` at `m = 4`, `E7`/`E8` in
/// the 8..16 range) are estimated from auxiliary indices and their table
/// contributions subtracted.  Ranks 5 and 7 instead use the three-key
/// combination with an index only `D_m` at that rank carries (`m_5`/`m_7`).
fn d_recipe(m: u32, resid: &Residual) -> Result<i64, IdentifyError> {
    match m {
        5 => return Ok(resid.m(5)? + resid.m(8)? - resid.m_pair(5, 8)?),
        7 => return Ok(resid.m(7)? + resid.m(12)? - resid.m_pair(7, 12)?),
        _ => {}
    }
    let key = 2 * m - 2;
    let even = m % 2 == 0;
    let mut count = if even {
        resid.m_prime(key)? - resid.m(key)?
    } else {
        resid.m_prime(key)?
    };
    // (polluter, estimate of its multiplicity from untouched indices)
    let mut polluters: Vec<(SimpleType, i64)> = Vec::new();
    match m {
        4 => {
            // G2 also reaches the 6th cyclotomic; count it via the surplus
            // of m_{4,6} over m_4 (every rank <= 4 type that can carry a
            // 4th-cyclotomic power can pair it with nothing new except G2).
            polluters.push((simple(Family::G, 2), resid.m_pair(4, 6)? - resid.m(4)?));
        }
        8 => {
            polluters.push((simple(Family::E, 7), resid.m(18)?));
        }
        10 => {
            let e8 = resid.m(30)?;
            let e7 = resid.m_pair(16, 18)? - resid.m(16)? - e8;
            polluters.push((simple(Family::E, 7), e7));
            polluters.push((simple(Family::E, 8), e8));
        }
        9 | 11 | 12 | 13 | 14 | 15 => {
            polluters.push((simple(Family::E, 8), resid.m(30)?));
        }
        16 => {
            polluters.push((simple(Family::E, 8), resid.m_pair(28, 30)? - resid.m(28)?));
        }
        _ => {}
    }
    for (t, estimate) in polluters {
        if estimate == 0 {
            continue;
        }
        let table = resid.table(t)?;
        let mp = invariants::m_prime(&table, key) as i64;
        let mm = invariants::m(&table, key) as i64;
        let corr = if even { mp - mm } else { mp };
        count -= estimate * corr;
    }
    Ok(count)
}

/// Count of `A_m` factors.  Generic keys: `m_{m+1}` for even `m` (the
/// `(m+1)`-cycle is the only source of a primitive odd `(m+1)`-th root at
/// rank `<= m`); for odd `m` the pair `(m, m+1)` via the three-key
/// combination, since only `A_m` carries both and never together in one
/// element.  Low ranks substitute indices that dodge the exceptional
/// groups, and ranks 8 and 9 subtract the `E7`/`E8` content read from
/// `m_18` first.
fn a_recipe(m: u32, resid: &Residual) -> Result<i64, IdentifyError> {
    let ie = |a: u32, b: u32| -> Result<i64, IdentifyError> {
        Ok(resid.m(a)? + resid.m(b)? - resid.m_pair(a, b)?)
    };
    Ok(match m {
        1 => resid.m(2)?,
        2 => resid.m(3)?,
        3 => ie(3, 4)?,
        4 => resid.m(5)?,
        5 => ie(5, 6)?,
        6 => resid.m(7)?,
        7 => ie(7, 8)?,
        8 => ie(7, 9)? - resid.m(18)?,
        9 => ie(7, 10)? - resid.m(18)?,
        14 => ie(13, 15)?,
        15 => ie(13, 16)?,
        m if m % 2 == 0 => resid.m(m + 1)?,
        m => ie(m, m + 1)?,
    })
}

/// Reconstructs the simple-factor multiset of a rank-`n` product of Weyl
/// groups from its spectrum, walking ranks downward and subtracting each
/// identified factor's invariant contributions.
///
/// Errors with [`IdentifyError::InconsistentSpectrum`] (carrying the
/// partial attribution) if any recipe goes negative, any residual invariant
/// dips below zero, or the residual fails to vanish at the end.
pub fn identify_by_cases(
    s: &Spectrum,
    n: u32,
    catalog: &SpectrumCatalog,
) -> Result<FactorReport, IdentifyError> {
    let partial_report = |resid: &Residual| {
        let mut factors = FactorMultiset::new();
        for &(t, c) in &resid.consumed {
            *factors.entry(FactorLabel::from_simple(t)).or_insert(0) += c as u32;
        }
        FactorReport { factors, residual_ok: false }
    };
    let mut resid = Residual::new(s, catalog);
    if s.degree() != n {
        return Err(IdentifyError::InconsistentSpectrum {
            detail: format!("spectrum has degree {} but rank {n} was claimed", s.degree()),
            partial: partial_report(&resid),
        });
    }
    fn take(
        resid: &mut Residual,
        t: SimpleType,
        count: i64,
    ) -> Result<(), IdentifyError> {
        if count < 0 {
            let mut factors = FactorMultiset::new();
            for &(c, k) in &resid.consumed {
                *factors.entry(FactorLabel::from_simple(c)).or_insert(0) += k as u32;
            }
            return Err(IdentifyError::InconsistentSpectrum {
                detail: format!("negative multiplicity {count} for {t}"),
                partial: FactorReport { factors, residual_ok: false },
            });
        }
        if count > 0 {
            resid.consume(t, count)?;
        }
        Ok(())
    }
    let universe = invariants::index_universe(n);
    for m in (1..=n).rev() {
        // Family order within a rank: exceptional, then B, then D, then A.
        // Later recipes at this rank rely on the earlier subtractions.
        if let Some((t, count)) = exceptional_recipe(m, &resid)? {
            take(&mut resid, t, count)?;
        }
        if m >= 2 {
            let count = b_recipe(m, &resid)?;
            take(&mut resid, simple(Family::B, m), count)?;
        }
        if m >= 4 {
            let count = d_recipe(m, &resid)?;
            take(&mut resid, simple(Family::D, m), count)?;
        }
        let count = a_recipe(m, &resid)?;
        take(&mut resid, simple(Family::A, m), count)?;
        // Monotone consumption: nothing may overshoot mid-flight.
        for &d in &universe {
            if resid.m(d)? < 0 || resid.m_prime(d)? < 0 {
                return Err(IdentifyError::InconsistentSpectrum {
                    detail: format!("residual invariant at index {d} went negative after rank {m}"),
                    partial: partial_report(&resid),
                });
            }
        }
    }
    let consumed_rank: i64 = resid.consumed.iter().map(|&(t, c)| t.rank() as i64 * c).sum();
    let mut clean = consumed_rank == n as i64;
    if clean {
        for &d in &universe {
            if resid.m(d)? != 0 || resid.m_prime(d)? != 0 {
                clean = false;
                break;
            }
        }
    }
    if !clean {
        return Err(IdentifyError::InconsistentSpectrum {
            detail: "residual did not vanish; input is not a Weyl-product spectrum of this rank"
                .into(),
            partial: partial_report(&resid),
        });
    }
    let mut report = partial_report(&resid);
    report.residual_ok = true;
    Ok(report)
}

/// All canonical semisimple types of total rank between 1 and `max_rank`,
/// optionally with `C` kept distinct from `B`.
pub fn enumerate_types(max_rank: u32, include_c: bool) -> Vec<SemisimpleType> {
    let singles = SimpleType::all_up_to(max_rank, include_c);
    let mut out = Vec::new();
    let mut chosen: Vec<SimpleType> = Vec::new();
    fn rec(
        singles: &[SimpleType],
        from: usize,
        remaining: u32,
        chosen: &mut Vec<SimpleType>,
        out: &mut Vec<SemisimpleType>,
    ) {
        if !chosen.is_empty() {
            out.push(SemisimpleType::new(chosen.clone()).unwrap());
        }
        for i in from..singles.len() {
            let r = singles[i].rank();
            if r <= remaining {
                chosen.push(singles[i]);
                rec(singles, i, remaining - r, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(&singles, 0, max_rank, &mut chosen, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Exhaustive search for all factor multisets of total rank `n` whose
/// product spectrum equals `s`, over the `BC`-collapsed candidate universe,
/// with early pruning on factor-index mismatch.
pub fn identify_by_search(
    s: &Spectrum,
    n: u32,
    catalog: &SpectrumCatalog,
    bound: u32,
) -> Result<BTreeSet<FactorMultiset>, IdentifyError> {
    if n > bound {
        return Err(IdentifyError::SearchBoundExceeded { rank: n, bound });
    }
    let star = invariants::ch_star(s);
    let mut candidates: Vec<(FactorLabel, Arc<Spectrum>)> = Vec::new();
    for t in SimpleType::all_up_to(n, false) {
        let spec = catalog.spectrum_simple(t)?;
        // A factor whose indices exceed the target's can never participate.
        if invariants::ch_star(&spec).is_subset(&star) {
            candidates.push((FactorLabel::from_simple(t), spec));
        }
    }
    let mut out = BTreeSet::new();
    let mut chosen = FactorMultiset::new();
    fn rec(
        s: &Spectrum,
        candidates: &[(FactorLabel, Arc<Spectrum>)],
        from: usize,
        remaining: u32,
        partial: Option<&Spectrum>,
        chosen: &mut FactorMultiset,
        out: &mut BTreeSet<FactorMultiset>,
    ) {
        if remaining == 0 {
            if let Some(p) = partial {
                if p.polys() == s.polys() {
                    out.insert(chosen.clone());
                }
            }
            return;
        }
        for i in from..candidates.len() {
            let (label, spec) = &candidates[i];
            if label.rank() > remaining {
                continue;
            }
            let next = match partial {
                None => (**spec).clone(),
                Some(p) => p.product(spec),
            };
            *chosen.entry(*label).or_insert(0) += 1;
            rec(s, candidates, i, remaining - label.rank(), Some(&next), chosen, out);
            let cnt = chosen.get_mut(label).unwrap();
            *cnt -= 1;
            if *cnt == 0 {
                chosen.remove(label);
            }
        }
    }
    rec(s, &candidates, 0, n, None, &mut chosen, &mut out);
    Ok(out)
}

/// Result of the exhaustive uniqueness scan.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub max_rank: u32,
    pub types_scanned: usize,
    /// Groups of distinct types sharing one spectrum, each sorted.
    pub collision_classes: Vec<Vec<SemisimpleType>>,
}

impl UniquenessReport {
    /// True when every collision class is a pure `B`/`C` relabeling orbit.
    pub fn all_expected(&self) -> bool {
        self.collision_classes.iter().all(|class| {
            let collapsed = collapse(&class[0]);
            class.iter().all(|t| collapse(t) == collapsed)
        })
    }

    /// `COLLIDE a == b` lines over all unordered pairs, sorted.
    pub fn collide_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for class in &self.collision_classes {
            for i in 0..class.len() {
                for j in i + 1..class.len() {
                    lines.push(format!("COLLIDE {} == {}", class[i], class[j]));
                }
            }
        }
        lines.sort();
        lines
    }
}

/// Scans every semisimple type of total rank `<= max_rank` (with `B` and
/// `C` kept distinct), groups them by spectrum, and reports all collision
/// classes.  The expected outcome is that collisions are exactly the
/// `B <-> C` relabelings.
pub fn verify_uniqueness(
    max_rank: u32,
    catalog: &SpectrumCatalog,
) -> Result<UniquenessReport, IdentifyError> {
    let types = enumerate_types(max_rank, true);
    let mut by_spectrum: BTreeMap<(u32, String), Vec<SemisimpleType>> = BTreeMap::new();
    for t in &types {
        let s = catalog.spectrum(t)?;
        let key = (t.total_rank(), s.canonical_lines().join(";"));
        by_spectrum.entry(key).or_default().push(t.clone());
    }
    let mut collision_classes: Vec<Vec<SemisimpleType>> = by_spectrum
        .into_values()
        .filter(|v| v.len() >= 2)
        .map(|mut v| {
            v.sort();
            v
        })
        .collect();
    collision_classes.sort();
    Ok(UniquenessReport { max_rank, types_scanned: types.len(), collision_classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> SpectrumCatalog {
        SpectrumCatalog::in_memory()
    }

    fn labels(items: &[(FactorLabel, u32)]) -> FactorMultiset {
        items.iter().copied().collect()
    }

    #[test]
    fn identify_simple_types() {
        let cat = catalog();
        for (name, expected) in [
            ("A1", labels(&[(FactorLabel::A(1), 1)])),
            ("B2", labels(&[(FactorLabel::BC(2), 1)])),
            ("C3", labels(&[(FactorLabel::BC(3), 1)])),
            ("D4", labels(&[(FactorLabel::D(4), 1)])),
            ("G2", labels(&[(FactorLabel::G2, 1)])),
            ("F4", labels(&[(FactorLabel::F4, 1)])),
            ("E6", labels(&[(FactorLabel::E(6), 1)])),
        ] {
            let t: SemisimpleType = name.parse().unwrap();
            let s = cat.spectrum(&t).unwrap();
            let report = identify_by_cases(&s, t.total_rank(), &cat).unwrap();
            assert!(report.residual_ok, "{name}");
            assert_eq!(report.factors, expected, "{name}");
        }
    }

    #[test]
    fn identify_products() {
        let cat = catalog();
        for (name, expected) in [
            (
                "B3xG2",
                labels(&[(FactorLabel::BC(3), 1), (FactorLabel::G2, 1)]),
            ),
            (
                "A2xA1",
                labels(&[(FactorLabel::A(2), 1), (FactorLabel::A(1), 1)]),
            ),
            ("4*A1", labels(&[(FactorLabel::A(1), 4)])),
            (
                "D4xB3",
                labels(&[(FactorLabel::D(4), 1), (FactorLabel::BC(3), 1)]),
            ),
            (
                "B3xB2xG2",
                labels(&[
                    (FactorLabel::BC(3), 1),
                    (FactorLabel::BC(2), 1),
                    (FactorLabel::G2, 1),
                ]),
            ),
        ] {
            let t: SemisimpleType = name.parse().unwrap();
            let s = cat.spectrum(&t).unwrap();
            let report = identify_by_cases(&s, t.total_rank(), &cat).unwrap();
            assert!(report.residual_ok, "{name}");
            assert_eq!(report.factors, expected, "{name}");
        }
    }

    #[test]
    fn identify_e8_and_products_from_bundled_data() {
        let cat = catalog();
        let e8 = cat.spectrum(&"E8".parse().unwrap()).unwrap();
        let report = identify_by_cases(&e8, 8, &cat).unwrap();
        assert_eq!(report.factors, labels(&[(FactorLabel::E(8), 1)]));

        // E8 inside products of higher total rank.
        for name in ["E8xA1", "E8xB2", "E8xG2xA1"] {
            let t: SemisimpleType = name.parse().unwrap();
            let s = cat.spectrum(&t).unwrap();
            let report = identify_by_cases(&s, t.total_rank(), &cat).unwrap();
            assert!(report.residual_ok, "{name}");
            assert_eq!(report.factors, collapse(&t), "{name}");
        }
    }

    #[test]
    fn identify_rejects_non_weyl_spectrum() {
        // The B2 spectrum with the rank-4 claim cannot resolve.
        let cat = catalog();
        let s = crate::spectra::spectrum_bc(2);
        let err = identify_by_cases(&s, 4, &cat).unwrap_err();
        assert!(matches!(err, IdentifyError::InconsistentSpectrum { .. }));
    }

    #[test]
    fn search_pinned_cases() {
        let cat = catalog();
        let b2 = cat.spectrum(&"B2".parse().unwrap()).unwrap();
        let found = identify_by_search(&b2, 2, &cat, DEFAULT_SEARCH_BOUND).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found.contains(&labels(&[(FactorLabel::BC(2), 1)])));

        let a2a1 = cat.spectrum(&"A2xA1".parse().unwrap()).unwrap();
        let found = identify_by_search(&a2a1, 3, &cat, DEFAULT_SEARCH_BOUND).unwrap();
        assert_eq!(found.len(), 1);

        // A spectrum containing a 7th cyclotomic cannot arise at rank 2:
        // its members have degree 6, no rank-2 product can match.
        let fake = Spectrum::new(
            6,
            ["7:1"].iter().map(|s| s.parse().unwrap()).collect::<BTreeSet<_>>(),
            crate::spectra::Provenance::Product,
        );
        let found = identify_by_search(&fake, 2, &cat, DEFAULT_SEARCH_BOUND).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn search_bound_enforced() {
        let cat = catalog();
        let s = crate::spectra::spectrum_a(1);
        assert!(matches!(
            identify_by_search(&s, 9, &cat, DEFAULT_SEARCH_BOUND),
            Err(IdentifyError::SearchBoundExceeded { rank: 9, bound: 8 })
        ));
    }

    #[test]
    fn cases_agree_with_search_through_rank_5() {
        let cat = catalog();
        for t in enumerate_types(5, false) {
            let s = cat.spectrum(&t).unwrap();
            let n = t.total_rank();
            let report = identify_by_cases(&s, n, &cat).unwrap();
            assert!(report.residual_ok, "{t}");
            assert_eq!(report.factors, collapse(&t), "{t}: cases");
            let found = identify_by_search(&s, n, &cat, DEFAULT_SEARCH_BOUND).unwrap();
            assert_eq!(found.len(), 1, "{t}: search uniqueness");
            assert_eq!(found.into_iter().next().unwrap(), report.factors, "{t}: agreement");
        }
    }

    #[test]
    fn uniqueness_rank_2() {
        let cat = catalog();
        let report = verify_uniqueness(2, &cat).unwrap();
        assert!(report.collision_classes.is_empty());
        assert!(report.all_expected());
    }

    #[test]
    fn uniqueness_rank_5_only_bc() {
        let cat = catalog();
        let report = verify_uniqueness(5, &cat).unwrap();
        assert!(!report.collision_classes.is_empty());
        assert!(report.all_expected());
        // Every class mentions a BC-ambiguous factor.
        for line in report.collide_lines() {
            assert!(line.contains("B3") || line.contains("C3") || line.contains("B4")
                || line.contains("C4") || line.contains("B5") || line.contains("C5"),
                "{line}");
        }
    }

    #[test]
    fn rational_conjugacy_soundness_b3() {
        // Elements with equal characteristic polynomials have equal
        // cyclotomic decompositions (factoring is a function of the
        // polynomial): grouped over all of W(B3).
        use std::collections::{HashMap, HashSet, VecDeque};
        let t: SimpleType = "B3".parse().unwrap();
        let gens = crate::root_data::simple_reflections(t);
        let id = crate::root_data::IntMatrix::identity(3);
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        let mut groups: HashMap<Vec<num_bigint::BigInt>, crate::exact_poly::CycloPoly> =
            HashMap::new();
        while let Some(mtx) = queue.pop_front() {
            let p = crate::exact_poly::char_poly(&mtx);
            let f = crate::exact_poly::cyclo_factor(&p).unwrap();
            let prev = groups.insert(p.coeffs().to_vec(), f.clone());
            if let Some(prev) = prev {
                assert_eq!(prev, f);
            }
            for g in &gens {
                let m = mtx.mul(g);
                if seen.insert(m.clone()) {
                    queue.push_back(m);
                }
            }
        }
        assert_eq!(seen.len(), 48);
    }
}
