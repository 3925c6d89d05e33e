//! Spectra: the fingerprint `ch(W)` of a Weyl group — the set of
//! characteristic polynomials over all of its elements, each stored as a
//! cyclotomic factorization.
//!
//! Classical types come from signed-cycle combinatorics: an element of the
//! hyperoctahedral group with positive cycle lengths `lambda` and negative
//! cycle lengths `mu` has characteristic polynomial
//! `prod (x^lambda_i - 1) * prod (x^mu_j + 1)`, type `A` drops one factor
//! of `x - 1` for the reflection representation, and type `D` keeps the
//! pairs with an even number of negative cycles.  Exceptional types are
//! enumerated exhaustively through a stabilizer chain on the permutation
//! action on roots; `E8` additionally ships as a validated data file so the
//! 696,729,600-element sweep stays opt-in.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_poly::{self, CycloPoly, IntPoly, PolyError};
use crate::root_data::{self, Family, SemisimpleType, SimpleType};
use crate::stabchain::{Perm, StabChain};

/// Version tag leading every spectrum cache file.
pub const CACHE_FORMAT: &str = "weylspec v1";

const E8_BUNDLED: &str = include_str!("../data/e8_spectrum.txt");

#[derive(Debug, Error)]
pub enum SpectraError {
    /// The requested computation path is switched off (e.g. the exhaustive
    /// `E8` sweep without opting in, or bundled data for a type that ships
    /// none).
    #[error("strategy unavailable: {0}")]
    StrategyUnavailable(String),
    /// A cache or bundled data file failed validation.
    #[error("data corrupt: {0}")]
    DataCorrupt(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// How a spectrum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Combinatorial,
    Enumerated,
    Bundled,
    Product,
}

/// How to obtain an exceptional spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Enumerate,
    Bundled,
}

/// Policy for the `E8` spectrum: shipped data (default), the exhaustive
/// element sweep, or a hard error so batch runs stay predictable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum E8Mode {
    #[default]
    Bundled,
    Enumerate,
    Forbid,
}

/// The set `ch(W)`: characteristic polynomials of all elements of `W`, each
/// of degree `n`, with set semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    n: u32,
    polys: BTreeSet<CycloPoly>,
    provenance: Provenance,
}

impl Spectrum {
    pub fn new(n: u32, polys: BTreeSet<CycloPoly>, provenance: Provenance) -> Spectrum {
        for p in &polys {
            assert_eq!(p.degree(), n, "spectrum member of wrong degree");
        }
        Spectrum { n, polys, provenance }
    }

    /// Common degree of all members (the rank of the group).
    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn contains(&self, p: &CycloPoly) -> bool {
        self.polys.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CycloPoly> {
        self.polys.iter()
    }

    pub fn polys(&self) -> &BTreeSet<CycloPoly> {
        &self.polys
    }

    /// Pointwise-product spectrum: `ch(W1 x W2) = {f g}` over members.
    pub fn product(&self, other: &Spectrum) -> Spectrum {
        let mut polys = BTreeSet::new();
        for a in &self.polys {
            for b in &other.polys {
                polys.insert(a.mul(b));
            }
        }
        Spectrum { n: self.n + other.n, polys, provenance: Provenance::Product }
    }

    /// Canonical text lines, sorted bytewise — the cache body and the
    /// machine output format.
    pub fn canonical_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.polys.iter().map(CycloPoly::canonical_string).collect();
        lines.sort_unstable();
        lines
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "spectrum(n={}, {} polys)", self.n, self.polys.len())
    }
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// All partitions of `n` with parts descending, in a deterministic order.
/// `partitions(0)` is the single empty partition.
pub(crate) fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n.max(1), &mut Vec::new(), &mut out);
    out
}

/// Factor map of `prod (x^lambda_i - 1) * prod (x^mu_j + 1)`.
pub(crate) fn signed_cycle_poly(lambda: &[u32], mu: &[u32]) -> CycloPoly {
    let mut p = CycloPoly::one();
    for &l in lambda {
        for d in divisors(l) {
            p.add_factor(d, 1);
        }
    }
    for &l in mu {
        // x^l + 1 = prod over d | 2l, d not | l
        for d in divisors(2 * l) {
            if l % d != 0 {
                p.add_factor(d, 1);
            }
        }
    }
    p
}

/// Characteristic polynomial of a symmetric-group element of cycle type
/// `lambda` in the reflection representation: the permutation polynomial
/// with one factor of `x - 1` removed.
pub(crate) fn type_a_poly(lambda: &[u32]) -> CycloPoly {
    let p = signed_cycle_poly(lambda, &[]);
    let m1 = p.multiplicity(1);
    debug_assert!(m1 >= 1);
    let mut map = p.factors().clone();
    if m1 == 1 {
        map.remove(&1);
    } else {
        map.insert(1, m1 - 1);
    }
    CycloPoly::from_factors(map)
}

/// Spectrum of `W(A_n)` (the symmetric group on `n+1` letters in its
/// reflection representation): partitions of `n+1`, each contributing
/// `prod (x^lambda_i - 1) / (x - 1)`.
pub fn spectrum_a(n: u32) -> Spectrum {
    assert!(n >= 1);
    let mut polys = BTreeSet::new();
    for lambda in partitions(n + 1) {
        polys.insert(type_a_poly(&lambda));
    }
    Spectrum::new(n, polys, Provenance::Combinatorial)
}

/// Spectrum of the hyperoctahedral group `W(B_n) = W(C_n)`: all pairs of
/// partitions `(lambda, mu)` with `|lambda| + |mu| = n`.
pub fn spectrum_bc(n: u32) -> Spectrum {
    assert!(n >= 2);
    let parts: Vec<Vec<Vec<u32>>> = (0..=n).map(partitions).collect();
    let mut polys = BTreeSet::new();
    for k in 0..=n {
        for lambda in &parts[(n - k) as usize] {
            for mu in &parts[k as usize] {
                polys.insert(signed_cycle_poly(lambda, mu));
            }
        }
    }
    Spectrum::new(n, polys, Provenance::Combinatorial)
}

/// Spectrum of `W(D_n)`: the signed-permutation pairs with an even number
/// of negative cycles.
pub fn spectrum_d(n: u32) -> Spectrum {
    assert!(n >= 4);
    let parts: Vec<Vec<Vec<u32>>> = (0..=n).map(partitions).collect();
    let mut polys = BTreeSet::new();
    for k in 0..=n {
        for lambda in &parts[(n - k) as usize] {
            for mu in &parts[k as usize] {
                if mu.len() % 2 == 0 {
                    polys.insert(signed_cycle_poly(lambda, mu));
                }
            }
        }
    }
    Spectrum::new(n, polys, Provenance::Combinatorial)
}

/// Builds the permutation action of the simple reflections on the roots.
pub(crate) fn root_permutation_gens(t: SimpleType) -> (Vec<Vec<i64>>, Vec<Perm>) {
    let rts = root_data::roots(t);
    let idx = root_data::root_index(&rts);
    let gens = root_data::simple_reflections(t)
        .iter()
        .map(|m| {
            Perm(
                rts.iter()
                    .map(|r| idx[&m.apply(r)] as u16)
                    .collect::<Vec<_>>()
                    .into_boxed_slice(),
            )
        })
        .collect();
    (rts, gens)
}

pub(crate) fn build_chain(t: SimpleType) -> (Vec<Vec<i64>>, StabChain) {
    let (rts, gens) = root_permutation_gens(t);
    let chain = StabChain::new(rts.len(), gens, Some(&root_data::weyl_order(t)));
    (rts, chain)
}

/// Exhaustive spectrum by streaming every group element through the
/// stabilizer chain.  Complete by construction: the chain's transversal
/// product is certified against the degree-product order.
fn enumerate_spectrum(t: SimpleType) -> Spectrum {
    let n = t.rank() as usize;
    assert!(n <= 8);
    let (rts, chain) = build_chain(t);
    let coords: Vec<[i64; 8]> = rts
        .iter()
        .map(|r| {
            let mut c = [0i64; 8];
            c[..n].copy_from_slice(r);
            c
        })
        .collect();
    let points: Vec<u16> = (0..n as u16).collect();
    let distinct: HashSet<[i64; 9]> = chain.par_fold_images(
        &points,
        HashSet::new,
        |set, img| {
            let mut a = [[0i64; 8]; 8];
            for (j, &p) in img.iter().enumerate() {
                let r = &coords[p as usize];
                for (row, ai) in a.iter_mut().enumerate().take(n) {
                    ai[j] = r[row];
                }
            }
            let mut out = [0i128; 9];
            exact_poly::berkowitz_fixed(&a, n, &mut out);
            let mut key = [0i64; 9];
            for (k, &c) in out.iter().enumerate().take(n + 1) {
                key[k] = c as i64;
            }
            set.insert(key);
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    let polys: BTreeSet<CycloPoly> = distinct
        .into_iter()
        .map(|key| {
            exact_poly::cyclo_factor(&IntPoly::from_i64(&key[..=n]))
                .expect("Weyl element characteristic polynomials factor into cyclotomics")
        })
        .collect();
    Spectrum::new(t.rank(), polys, Provenance::Enumerated)
}

/// Spectrum of an exceptional type, by exhaustive enumeration or from the
/// shipped data file (only `E8` ships one).
pub fn spectrum_exceptional(t: SimpleType, strategy: Strategy) -> Result<Spectrum, SpectraError> {
    assert!(
        matches!(t.family(), Family::G | Family::F | Family::E),
        "exceptional type expected"
    );
    match strategy {
        Strategy::Enumerate => Ok(enumerate_spectrum(t)),
        Strategy::Bundled => {
            if t.family() == Family::E && t.rank() == 8 {
                bundled_e8()
            } else {
                Err(SpectraError::StrategyUnavailable(format!(
                    "no bundled spectrum data for {t}"
                )))
            }
        }
    }
}

fn simple_max_multiplicity(polys: &BTreeSet<CycloPoly>, d: u32) -> u32 {
    polys.iter().map(|p| p.multiplicity(d)).max().unwrap_or(0)
}

/// Loads and validates the shipped `E8` spectrum.
///
/// Validation gates: canonical format with the right header; every entry a
/// degree-8 cyclotomic product; factor indices exactly
/// `{1..10, 12, 14, 15, 18, 20, 24, 30}` (the divisors of the `E8`
/// degrees); the identity and the central involution present; and the spot
/// multiplicities `m_30 = 1`, `m_24 >= 1`, `m_20 >= 1`, `m_18 >= 1`.
pub fn bundled_e8() -> Result<Spectrum, SpectraError> {
    let (key, n, polys) = parse_cache_text(E8_BUNDLED)?;
    let corrupt = |msg: &str| SpectraError::DataCorrupt(format!("bundled E8 spectrum: {msg}"));
    if key != "E8" || n != 8 {
        return Err(corrupt("wrong header"));
    }
    let star: BTreeSet<u32> = polys.iter().flat_map(|p| p.factors().keys().copied()).collect();
    let expected: BTreeSet<u32> = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15, 18, 20, 24, 30]
        .into_iter()
        .collect();
    if star != expected {
        return Err(corrupt("factor indices do not match the E8 degree divisors"));
    }
    if simple_max_multiplicity(&polys, 30) != 1 {
        return Err(corrupt("m_30 != 1"));
    }
    for d in [24, 20, 18] {
        if simple_max_multiplicity(&polys, d) < 1 {
            return Err(corrupt("missing high-order regular element"));
        }
    }
    let identity: CycloPoly = "1:8".parse().unwrap();
    let central: CycloPoly = "2:8".parse().unwrap();
    if !polys.contains(&identity) || !polys.contains(&central) {
        return Err(corrupt("identity or -1 missing"));
    }
    Ok(Spectrum { n: 8, polys, provenance: Provenance::Bundled })
}

/// Renders a spectrum in the cache file format: a `weylspec v1` header line
/// carrying the canonical type key and rank, then one canonical factor line
/// per member, bytewise sorted.
pub fn render_cache_text(key: &str, s: &Spectrum) -> String {
    let mut out = format!("{CACHE_FORMAT} {key} n={}\n", s.n);
    for line in s.canonical_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Parses cache-format text into `(key, rank, members)`, validating degrees.
pub fn parse_cache_text(text: &str) -> Result<(String, u32, BTreeSet<CycloPoly>), SpectraError> {
    let corrupt = |msg: String| SpectraError::DataCorrupt(msg);
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| corrupt("empty file".into()))?;
    let rest = header
        .strip_prefix(CACHE_FORMAT)
        .ok_or_else(|| corrupt(format!("bad header `{header}`")))?;
    let mut fields = rest.split_whitespace();
    let key = fields
        .next()
        .ok_or_else(|| corrupt("missing type key".into()))?
        .to_string();
    let n: u32 = fields
        .next()
        .and_then(|f| f.strip_prefix("n="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| corrupt("missing rank field".into()))?;
    if fields.next().is_some() {
        return Err(corrupt(format!("trailing header fields in `{header}`")));
    }
    let mut polys = BTreeSet::new();
    for line in lines {
        let p: CycloPoly = line
            .parse()
            .map_err(|e| corrupt(format!("bad line `{line}`: {e}")))?;
        if p.degree() != n {
            return Err(corrupt(format!("member `{line}` has degree {} != {n}", p.degree())));
        }
        if !polys.insert(p) {
            return Err(corrupt(format!("duplicate line `{line}`")));
        }
    }
    if polys.is_empty() {
        return Err(corrupt("no members".into()));
    }
    Ok((key, n, polys))
}

fn natural_provenance(t: &SemisimpleType, e8_mode: E8Mode) -> Provenance {
    if !t.is_simple() {
        return Provenance::Product;
    }
    let s = t.factors()[0];
    match s.family() {
        Family::A | Family::B | Family::C | Family::D => Provenance::Combinatorial,
        Family::E if s.rank() == 8 && e8_mode == E8Mode::Bundled => Provenance::Bundled,
        _ => Provenance::Enumerated,
    }
}

/// Computes, caches and memoizes spectra of semisimple types.
///
/// Simple factors dispatch to the combinatorial formulas or exhaustive
/// enumeration; products are pointwise-product sets.  With a cache
/// directory attached, every computed spectrum is also written to disk in
/// the canonical format (atomically, write-then-rename) and consulted on
/// later runs.
pub struct SpectrumCatalog {
    cache_dir: Option<PathBuf>,
    e8_mode: E8Mode,
    memo: Mutex<HashMap<SemisimpleType, Arc<Spectrum>>>,
}

impl SpectrumCatalog {
    /// Catalog with in-process memoization only.
    pub fn in_memory() -> SpectrumCatalog {
        SpectrumCatalog {
            cache_dir: None,
            e8_mode: E8Mode::default(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// Catalog backed by an on-disk cache directory.
    pub fn with_cache_dir(dir: impl Into<PathBuf>) -> SpectrumCatalog {
        SpectrumCatalog {
            cache_dir: Some(dir.into()),
            e8_mode: E8Mode::default(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn e8_mode(mut self, mode: E8Mode) -> SpectrumCatalog {
        self.e8_mode = mode;
        self
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    fn cache_path(&self, key: &str) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| d.join(format!("{key}.spec")))
    }

    /// The spectrum of a semisimple type, through memo and disk cache.
    pub fn spectrum(&self, t: &SemisimpleType) -> Result<Arc<Spectrum>, SpectraError> {
        if let Some(hit) = self.memo.lock().unwrap().get(t) {
            return Ok(hit.clone());
        }
        let key = t.canonical_string();
        if let Some(path) = self.cache_path(&key) {
            if path.exists() {
                let text = std::fs::read_to_string(&path)?;
                let (file_key, n, polys) = parse_cache_text(&text)?;
                if file_key != key || n != t.total_rank() {
                    return Err(SpectraError::DataCorrupt(format!(
                        "cache file {} does not match its key",
                        path.display()
                    )));
                }
                let s = Arc::new(Spectrum {
                    n,
                    polys,
                    provenance: natural_provenance(t, self.e8_mode),
                });
                self.memo.lock().unwrap().insert(t.clone(), s.clone());
                return Ok(s);
            }
        }
        let s = Arc::new(self.compute_fresh(t)?);
        if let Some(path) = self.cache_path(&key) {
            write_atomically(&path, &render_cache_text(&key, &s))?;
        }
        self.memo.lock().unwrap().insert(t.clone(), s.clone());
        Ok(s)
    }

    pub fn spectrum_simple(&self, t: SimpleType) -> Result<Arc<Spectrum>, SpectraError> {
        self.spectrum(&SemisimpleType::simple(t))
    }

    /// Computes without consulting memo or disk for the type itself (used
    /// by cache rebuilds; factor spectra still go through the catalog).
    pub fn compute_fresh(&self, t: &SemisimpleType) -> Result<Spectrum, SpectraError> {
        if t.is_simple() {
            return self.compute_simple(t.factors()[0]);
        }
        let mut acc: Option<Spectrum> = None;
        for &f in t.factors() {
            let fs = self.spectrum_simple(f)?;
            acc = Some(match acc {
                None => (*fs).clone(),
                Some(a) => a.product(&fs),
            });
        }
        Ok(acc.expect("semisimple types are nonempty"))
    }

    fn compute_simple(&self, t: SimpleType) -> Result<Spectrum, SpectraError> {
        match t.family() {
            Family::A => Ok(spectrum_a(t.rank())),
            Family::B | Family::C => Ok(spectrum_bc(t.rank())),
            Family::D => Ok(spectrum_d(t.rank())),
            Family::E if t.rank() == 8 => match self.e8_mode {
                E8Mode::Bundled => bundled_e8(),
                E8Mode::Enumerate => Ok(enumerate_spectrum(t)),
                E8Mode::Forbid => Err(SpectraError::StrategyUnavailable(
                    "E8 spectrum requested but the E8 path is disabled".into(),
                )),
            },
            _ => Ok(enumerate_spectrum(t)),
        }
    }
}

pub(crate) fn write_atomically(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("spec.tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    fn cp(s: &str) -> CycloPoly {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<CycloPoly> {
        items.iter().map(|s| cp(s)).collect()
    }

    fn star(s: &Spectrum) -> BTreeSet<u32> {
        s.iter().flat_map(|p| p.factors().keys().copied()).collect()
    }

    #[test]
    fn partitions_counts() {
        assert_eq!(partitions(0).len(), 1);
        assert_eq!(partitions(1), vec![vec![1]]);
        assert_eq!(partitions(5).len(), 7);
        assert_eq!(partitions(10).len(), 42);
    }

    #[test]
    fn spectrum_a_small() {
        assert_eq!(*spectrum_a(1).polys(), set(&["1:1", "2:1"]));
        assert_eq!(*spectrum_a(2).polys(), set(&["1:2", "1:1,2:1", "3:1"]));
        let a4: BTreeSet<u32> = star(&spectrum_a(4));
        assert_eq!(a4, [1, 2, 3, 4, 5].into_iter().collect());
    }

    #[test]
    fn spectrum_bc_small() {
        assert_eq!(
            *spectrum_bc(2).polys(),
            set(&["1:2", "1:1,2:1", "2:2", "4:1"])
        );
        assert_eq!(star(&spectrum_bc(3)), [1, 2, 3, 4, 6].into_iter().collect());
        // witness x^n + 1 puts the 2n-th cyclotomic in the set
        for n in 2..=8u32 {
            let s = spectrum_bc(n);
            assert!(s.iter().any(|p| p.multiplicity(2 * n) == 1), "n={n}");
        }
    }

    #[test]
    fn spectrum_d_small() {
        let d4 = spectrum_d(4);
        assert!(d4.contains(&cp("2:2,6:1")), "(x+1)(x^3+1) member");
        let with_phi6: Vec<&CycloPoly> =
            d4.iter().filter(|p| p.multiplicity(6) > 0).collect();
        assert_eq!(with_phi6.len(), 1);
        assert_eq!(
            with_phi6[0],
            &exact_poly::cyclo_factor(
                &IntPoly::x_power_plus_one(1).mul(&IntPoly::x_power_plus_one(3))
            )
            .unwrap()
        );
        assert_eq!(
            star(&spectrum_d(5)),
            [1, 2, 3, 4, 5, 6, 8].into_iter().collect()
        );
    }

    #[test]
    fn spectrum_g2_enumerated() {
        let t: SimpleType = "G2".parse().unwrap();
        let s = spectrum_exceptional(t, Strategy::Enumerate).unwrap();
        assert_eq!(*s.polys(), set(&["1:2", "1:1,2:1", "2:2", "3:1", "6:1"]));
    }

    #[test]
    fn exceptional_star_sets() {
        let f4 = spectrum_exceptional("F4".parse().unwrap(), Strategy::Enumerate).unwrap();
        assert_eq!(star(&f4), [1, 2, 3, 4, 6, 8, 12].into_iter().collect());
        let e6 = spectrum_exceptional("E6".parse().unwrap(), Strategy::Enumerate).unwrap();
        assert_eq!(
            star(&e6),
            [1, 2, 3, 4, 5, 6, 8, 9, 12].into_iter().collect()
        );
    }

    #[test]
    fn product_law() {
        let catalog = SpectrumCatalog::in_memory();
        let a1a1 = catalog.spectrum(&"A1xA1".parse().unwrap()).unwrap();
        assert_eq!(*a1a1.polys(), set(&["1:2", "1:1,2:1", "2:2"]));

        // simple type through the catalog equals the specialized formula
        let b3 = catalog.spectrum(&"B3".parse().unwrap()).unwrap();
        assert_eq!(b3.polys(), spectrum_bc(3).polys());
    }

    #[test]
    fn product_matches_brute_force_direct_product() {
        // B2 x G2: 96 block-diagonal matrices, char polys multiply.
        let b2: SimpleType = "B2".parse().unwrap();
        let g2: SimpleType = "G2".parse().unwrap();
        let enumerate = |t: SimpleType| {
            let gens = root_data::simple_reflections(t);
            let id = root_data::IntMatrix::identity(t.rank() as usize);
            let mut seen = HashSet::new();
            let mut queue = VecDeque::new();
            seen.insert(id.clone());
            queue.push_back(id);
            while let Some(m) = queue.pop_front() {
                for g in &gens {
                    let p = m.mul(g);
                    if seen.insert(p.clone()) {
                        queue.push_back(p);
                    }
                }
            }
            seen
        };
        let b2_elems = enumerate(b2);
        let g2_elems = enumerate(g2);
        assert_eq!(b2_elems.len() * g2_elems.len(), 96);
        let mut brute = BTreeSet::new();
        for a in &b2_elems {
            for b in &g2_elems {
                let p = exact_poly::char_poly(&a.block_diag(b));
                brute.insert(exact_poly::cyclo_factor(&p).unwrap());
            }
        }
        let catalog = SpectrumCatalog::in_memory();
        let s = catalog.spectrum(&"B2xG2".parse().unwrap()).unwrap();
        assert_eq!(*s.polys(), brute);
        assert!(s.iter().all(|p| p.degree() == 4));
    }

    #[test]
    fn combinatorial_matches_matrix_enumeration() {
        // The independent oracle: walk the matrix group and factor every
        // characteristic polynomial.
        for name in ["A1", "A2", "A3", "B2", "B3", "D4"] {
            let t: SimpleType = name.parse().unwrap();
            let gens = root_data::simple_reflections(t);
            let id = root_data::IntMatrix::identity(t.rank() as usize);
            let mut seen = HashSet::new();
            let mut queue = VecDeque::new();
            seen.insert(id.clone());
            queue.push_back(id);
            let mut brute = BTreeSet::new();
            while let Some(m) = queue.pop_front() {
                brute.insert(exact_poly::cyclo_factor(&exact_poly::char_poly(&m)).unwrap());
                for g in &gens {
                    let p = m.mul(g);
                    if seen.insert(p.clone()) {
                        queue.push_back(p);
                    }
                }
            }
            let formula = match t.family() {
                Family::A => spectrum_a(t.rank()),
                Family::B => spectrum_bc(t.rank()),
                Family::D => spectrum_d(t.rank()),
                _ => unreachable!(),
            };
            assert_eq!(*formula.polys(), brute, "{name}");
        }
    }

    #[test]
    fn identity_and_central_members() {
        let catalog = SpectrumCatalog::in_memory();
        for name in ["A3", "B4", "D4", "D5", "G2", "F4"] {
            let t: SemisimpleType = name.parse().unwrap();
            let s = catalog.spectrum(&t).unwrap();
            let n = t.total_rank();
            let identity = CycloPoly::from_factors([(1, n)].into_iter().collect());
            assert!(s.contains(&identity), "{name}: identity");
            let minus_one = CycloPoly::from_factors([(2, n)].into_iter().collect());
            let has_minus_one = !matches!(name, "A3" | "D5");
            assert_eq!(s.contains(&minus_one), has_minus_one, "{name}: -1");
        }
    }

    #[test]
    fn degree_invariant() {
        let catalog = SpectrumCatalog::in_memory();
        for name in ["A4", "B3", "D4", "G2", "B2xG2"] {
            let t: SemisimpleType = name.parse().unwrap();
            let s = catalog.spectrum(&t).unwrap();
            for p in s.iter() {
                assert_eq!(p.degree(), t.total_rank(), "{name}");
            }
        }
    }

    #[test]
    fn cache_roundtrip_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let t: SemisimpleType = "B3xA1".parse().unwrap();
        let first = {
            let catalog = SpectrumCatalog::with_cache_dir(dir.path());
            catalog.spectrum(&t).unwrap().canonical_lines()
        };
        let path = dir.path().join("A1xB3.spec");
        assert!(path.exists());
        let bytes_first = std::fs::read(&path).unwrap();
        // Second catalog reads from disk.
        let catalog = SpectrumCatalog::with_cache_dir(dir.path());
        let again = catalog.spectrum(&t).unwrap();
        assert_eq!(again.canonical_lines(), first);
        // Rendering what was loaded reproduces the file bytes.
        let rerender = render_cache_text("A1xB3", &again);
        assert_eq!(rerender.into_bytes(), bytes_first);
    }

    #[test]
    fn cache_rejects_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let t: SemisimpleType = "A2".parse().unwrap();
        {
            let catalog = SpectrumCatalog::with_cache_dir(dir.path());
            catalog.spectrum(&t).unwrap();
        }
        let path = dir.path().join("A2.spec");
        std::fs::write(&path, "weylspec v1 A2 n=2\n1:2\nnot a line\n").unwrap();
        let catalog = SpectrumCatalog::with_cache_dir(dir.path());
        assert!(matches!(
            catalog.spectrum(&t),
            Err(SpectraError::DataCorrupt(_))
        ));
    }

    #[test]
    fn e8_forbid_mode_errors() {
        let catalog = SpectrumCatalog::in_memory().e8_mode(E8Mode::Forbid);
        assert!(matches!(
            catalog.spectrum(&"E8".parse().unwrap()),
            Err(SpectraError::StrategyUnavailable(_))
        ));
    }

    #[test]
    fn bundled_strategy_only_ships_e8() {
        assert!(matches!(
            spectrum_exceptional("F4".parse().unwrap(), Strategy::Bundled),
            Err(SpectraError::StrategyUnavailable(_))
        ));
    }
}
