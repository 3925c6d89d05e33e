//! Root data for the simple types: Cartan matrices, integral reflection
//! representations, root systems, fundamental degrees and group orders.
//!
//! Everything acts on the root lattice in the basis of simple roots, so all
//! matrices are integral and all arithmetic is exact.  The Cartan convention
//! is `C[i][j] = <alpha_j, alpha_i^vee>`, and the simple reflection `s_i`
//! sends `alpha_j` to `alpha_j - C[j][i] * alpha_i`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The seven families of simple root systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Family> {
        match c.to_ascii_uppercase() {
            'A' => Some(Family::A),
            'B' => Some(Family::B),
            'C' => Some(Family::C),
            'D' => Some(Family::D),
            'E' => Some(Family::E),
            'F' => Some(Family::F),
            'G' => Some(Family::G),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A simple Dynkin type: family plus rank, always stored in canonical form.
///
/// Canonicalization resolves the low-rank coincidences, so `B1`, `C1`, `D1`
/// become `A1`, `C2` becomes `B2`, `D2` becomes `A1 x A1` and `D3` becomes
/// `A3`.  After canonicalization the rank bounds are `A >= 1`, `B >= 2`,
/// `C >= 3`, `D >= 4`, `E in 6..=8`, `F = 4`, `G = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    family: Family,
    rank: u32,
}

/// Errors from parsing or constructing type expressions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    /// The expression does not match the grammar `term ("x" term)*`,
    /// `term = [k*]<Family><rank>`.
    #[error("parse error: {0}")]
    Parse(String),
    /// Rank outside the family's bounds even after canonicalization.
    #[error("rank error: {family}{rank} is not a valid simple type")]
    Rank { family: Family, rank: u32 },
}

impl SimpleType {
    /// Canonicalizes a raw (family, rank) pair into one or more simple types.
    ///
    /// Returns more than one entry only for `D2 = A1 x A1`.
    pub fn canonicalize(family: Family, rank: u32) -> Result<Vec<SimpleType>, TypeError> {
        let err = || TypeError::Rank { family, rank };
        let one = |family, rank| Ok(vec![SimpleType { family, rank }]);
        match (family, rank) {
            (_, 0) => Err(err()),
            (Family::A, n) => one(Family::A, n),
            (Family::B, 1) | (Family::C, 1) | (Family::D, 1) => one(Family::A, 1),
            (Family::B, n) => one(Family::B, n),
            (Family::C, 2) => one(Family::B, 2),
            (Family::C, n) => one(Family::C, n),
            (Family::D, 2) => Ok(vec![
                SimpleType { family: Family::A, rank: 1 },
                SimpleType { family: Family::A, rank: 1 },
            ]),
            (Family::D, 3) => one(Family::A, 3),
            (Family::D, n) => one(Family::D, n),
            (Family::E, n @ 6..=8) => one(Family::E, n),
            (Family::F, 4) => one(Family::F, 4),
            (Family::G, 2) => one(Family::G, 2),
            _ => Err(err()),
        }
    }

    /// Builds a single canonical simple type; errors if canonicalization
    /// yields anything but one factor (e.g. `D2`).
    pub fn new(family: Family, rank: u32) -> Result<SimpleType, TypeError> {
        let v = Self::canonicalize(family, rank)?;
        if v.len() == 1 {
            Ok(v[0])
        } else {
            Err(TypeError::Rank { family, rank })
        }
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> u32 {
        self.rank
    }

    /// All canonical simple types of rank at most `max_rank`, with `C`
    /// included as a family distinct from `B` (they have different root data
    /// but equal Weyl group spectra).
    pub fn all_up_to(max_rank: u32, include_c: bool) -> Vec<SimpleType> {
        let mut out = Vec::new();
        for n in 1..=max_rank {
            out.push(SimpleType { family: Family::A, rank: n });
            if n >= 2 {
                out.push(SimpleType { family: Family::B, rank: n });
            }
            if include_c && n >= 3 {
                out.push(SimpleType { family: Family::C, rank: n });
            }
            if n >= 4 {
                out.push(SimpleType { family: Family::D, rank: n });
            }
            if n == 2 {
                out.push(SimpleType { family: Family::G, rank: 2 });
            }
            if n == 4 {
                out.push(SimpleType { family: Family::F, rank: 4 });
            }
            if (6..=8).contains(&n) {
                out.push(SimpleType { family: Family::E, rank: n });
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: SemisimpleType = s.parse()?;
        match t.factors() {
            [one] => Ok(*one),
            _ => Err(TypeError::Parse(format!("expected a simple type, got `{t}`"))),
        }
    }
}

/// A semisimple type: a canonically sorted multiset of simple factors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SemisimpleType {
    factors: Vec<SimpleType>,
}

impl SemisimpleType {
    pub fn new(mut factors: Vec<SimpleType>) -> Result<SemisimpleType, TypeError> {
        if factors.is_empty() {
            return Err(TypeError::Parse("empty type".into()));
        }
        factors.sort();
        Ok(SemisimpleType { factors })
    }

    pub fn simple(t: SimpleType) -> SemisimpleType {
        SemisimpleType { factors: vec![t] }
    }

    pub fn factors(&self) -> &[SimpleType] {
        &self.factors
    }

    pub fn total_rank(&self) -> u32 {
        self.factors.iter().map(|t| t.rank()).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.factors.len() == 1
    }

    /// Canonical string form, e.g. `A1xA1xB2`.  Used as the cache key.
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }

    /// Order of the Weyl group: product of the factor orders.
    pub fn weyl_order(&self) -> BigUint {
        self.factors.iter().map(|t| weyl_order(*t)).product()
    }
}

impl fmt::Display for SemisimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for SemisimpleType {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}

/// Parses a type expression.
///
/// Grammar (whitespace- and case-insensitive):
/// `expr := term ("x" term)*`, `term := [digits "*"] family digits`,
/// family one of `A`..`G`.  Low-rank coincidences are canonicalized, so
/// `D3` parses to `A3` and `2*A1` to `A1xA1`.
pub fn parse_type(expr: &str) -> Result<SemisimpleType, TypeError> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(TypeError::Parse("empty type expression".into()));
    }
    let mut factors = Vec::new();
    for term in compact.split(['x', 'X']) {
        if term.is_empty() {
            return Err(TypeError::Parse("empty term".into()));
        }
        let (mult, rest) = match term.split_once('*') {
            Some((m, rest)) => {
                let mult: u32 = m
                    .parse()
                    .map_err(|_| TypeError::Parse(format!("bad multiplicity `{m}`")))?;
                if mult == 0 {
                    return Err(TypeError::Parse(format!("zero multiplicity in `{term}`")));
                }
                (mult, rest)
            }
            None => (1, term),
        };
        let mut chars = rest.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| TypeError::Parse(format!("bad family in `{term}`")))?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(TypeError::Parse(format!("bad rank in `{term}`")));
        }
        let rank: u32 = digits
            .parse()
            .map_err(|_| TypeError::Parse(format!("rank out of range in `{term}`")))?;
        let canonical = SimpleType::canonicalize(family, rank)?;
        for _ in 0..mult {
            factors.extend_from_slice(&canonical);
        }
    }
    SemisimpleType::new(factors)
}

/// A dense square matrix of 64-bit integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> IntMatrix {
        IntMatrix { n, entries: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = Self::zero(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix { n, entries: rows.concat() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Image of a column vector (coordinates in the simple-root basis).
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Direct sum, placing `other` in the lower-right block.
    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n + other.n;
        let mut out = Self::zero(n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                out[(self.n + i, self.n + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Multiplicative order, by repeated multiplication.  Panics above the
    /// given cap, which callers choose from context (Weyl elements have
    /// order at most 30 per simple factor of rank <= 8).
    pub fn order(&self, cap: u32) -> u32 {
        let mut m = self.clone();
        for k in 1..=cap {
            if m.is_identity() {
                return k;
            }
            m = m.mul(self);
        }
        panic!("order exceeds cap {cap}");
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.entries[i * self.n + j]
    }
}

/// Generalized Cartan matrix in Bourbaki numbering, `C[i][j] = <alpha_j,
/// alpha_i^vee>`, diagonal 2.
pub fn cartan_matrix(t: SimpleType) -> IntMatrix {
    let n = t.rank() as usize;
    let mut c = IntMatrix::zero(n);
    for i in 0..n {
        c[(i, i)] = 2;
    }
    let mut chain = |i: usize, j: usize| {
        c[(i, j)] = -1;
        c[(j, i)] = -1;
    };
    match t.family() {
        Family::A => {
            for i in 1..n {
                chain(i - 1, i);
            }
        }
        Family::B => {
            for i in 1..n {
                chain(i - 1, i);
            }
            // alpha_n is the short root: its row carries the -2.
            c[(n - 1, n - 2)] = -2;
        }
        Family::C => {
            for i in 1..n {
                chain(i - 1, i);
            }
            c[(n - 2, n - 1)] = -2;
        }
        Family::D => {
            for i in 1..n - 1 {
                chain(i - 1, i);
            }
            chain(n - 3, n - 1);
        }
        Family::E => {
            // Bourbaki: chain 1-3-4-5-...-n with node 2 attached to node 4.
            chain(0, 2);
            for i in 3..n {
                chain(i - 1, i);
            }
            chain(1, 3);
        }
        Family::F => {
            chain(0, 1);
            chain(1, 2);
            chain(2, 3);
            // alpha_3, alpha_4 short: row 3 carries the -2 against alpha_2.
            c[(2, 1)] = -2;
        }
        Family::G => {
            chain(0, 1);
            c[(1, 0)] = -3;
        }
    }
    c
}

/// The simple reflections as integral matrices on the simple-root basis:
/// `s_i(alpha_j) = alpha_j - C[j][i] * alpha_i`.
pub fn simple_reflections(t: SimpleType) -> Vec<IntMatrix> {
    let c = cartan_matrix(t);
    let n = t.rank() as usize;
    (0..n)
        .map(|i| {
            let mut m = IntMatrix::identity(n);
            for j in 0..n {
                m[(i, j)] = if i == j { -1 } else { -c[(j, i)] };
            }
            m
        })
        .collect()
}

/// The full root set in simple-root coordinates: the closure of the simple
/// roots under the simple reflections.  The simple roots come first, in
/// order, and the overall order is deterministic.
pub fn roots(t: SimpleType) -> Vec<Vec<i64>> {
    let n = t.rank() as usize;
    let gens = simple_reflections(t);
    let mut list: Vec<Vec<i64>> = Vec::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for j in 0..n {
        let mut e = vec![0i64; n];
        e[j] = 1;
        seen.insert(e.clone());
        list.push(e.clone());
        queue.push_back(e);
    }
    while let Some(v) = queue.pop_front() {
        for g in &gens {
            let w = g.apply(&v);
            if seen.insert(w.clone()) {
                list.push(w.clone());
                queue.push_back(w);
            }
        }
    }
    list
}

/// Index lookup for a root list produced by [`roots`].
pub fn root_index(roots: &[Vec<i64>]) -> HashMap<Vec<i64>, usize> {
    roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect()
}

/// The fundamental degrees of the invariant algebra, sorted ascending.
pub fn degrees(t: SimpleType) -> Vec<u32> {
    let n = t.rank();
    let mut d: Vec<u32> = match t.family() {
        Family::A => (2..=n + 1).collect(),
        Family::B | Family::C => (1..=n).map(|i| 2 * i).collect(),
        Family::D => {
            let mut v: Vec<u32> = (1..n).map(|i| 2 * i).collect();
            v.push(n);
            v
        }
        Family::G => vec![2, 6],
        Family::F => vec![2, 6, 8, 12],
        Family::E => match n {
            6 => vec![2, 5, 6, 8, 9, 12],
            7 => vec![2, 6, 8, 10, 12, 14, 18],
            8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
            _ => unreachable!("canonical E rank"),
        },
    };
    d.sort_unstable();
    d
}

/// `|W(t)|`, the product of the fundamental degrees.
pub fn weyl_order(t: SimpleType) -> BigUint {
    degrees(t).iter().map(|&d| BigUint::from(d)).product()
}

/// Number of roots, from the degree sum: `2 * (sum of degrees - rank)`.
pub fn root_count(t: SimpleType) -> usize {
    let s: u32 = degrees(t).iter().sum();
    (2 * (s - t.rank())) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> SimpleType {
        s.parse().unwrap()
    }

    #[test]
    fn parse_basic() {
        let t = parse_type("A3 x B2").unwrap();
        assert_eq!(t.canonical_string(), "A3xB2");
        assert_eq!(t.total_rank(), 5);

        let t = parse_type("2*A1").unwrap();
        assert_eq!(t.canonical_string(), "A1xA1");

        // order and case do not matter
        assert_eq!(parse_type("b2 X a3").unwrap(), parse_type("A3xB2").unwrap());
    }

    #[test]
    fn parse_canonicalizes_coincidences() {
        assert_eq!(parse_type("D3").unwrap().canonical_string(), "A3");
        assert_eq!(parse_type("D2").unwrap().canonical_string(), "A1xA1");
        assert_eq!(parse_type("C2").unwrap().canonical_string(), "B2");
        assert_eq!(parse_type("B1").unwrap().canonical_string(), "A1");
        assert_eq!(parse_type("C1").unwrap().canonical_string(), "A1");
        assert_eq!(parse_type("D1").unwrap().canonical_string(), "A1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_type("H4"), Err(TypeError::Parse(_))));
        assert!(matches!(parse_type("A"), Err(TypeError::Parse(_))));
        assert!(matches!(parse_type(""), Err(TypeError::Parse(_))));
        assert!(matches!(parse_type("A2 y B3"), Err(TypeError::Parse(_))));
        assert!(matches!(parse_type("0*A1"), Err(TypeError::Parse(_))));
        assert!(matches!(parse_type("E5"), Err(TypeError::Rank { .. })));
        assert!(matches!(parse_type("F3"), Err(TypeError::Rank { .. })));
        assert!(matches!(parse_type("G3"), Err(TypeError::Rank { .. })));
        assert!(matches!(parse_type("A0"), Err(TypeError::Rank { .. })));
    }

    #[test]
    fn cartan_matrices_pinned() {
        assert_eq!(
            cartan_matrix(st("A2")),
            IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]])
        );
        assert_eq!(
            cartan_matrix(st("B2")),
            IntMatrix::from_rows(&[vec![2, -1], vec![-2, 2]])
        );
        assert_eq!(
            cartan_matrix(st("G2")),
            IntMatrix::from_rows(&[vec![2, -1], vec![-3, 2]])
        );
    }

    #[test]
    fn reflections_are_involutions_and_permute_roots() {
        for name in ["A1", "A4", "B3", "C3", "D4", "G2", "F4", "E6"] {
            let t = st(name);
            let all = roots(t);
            let set: HashSet<Vec<i64>> = all.iter().cloned().collect();
            for s in simple_reflections(t) {
                assert!(s.mul(&s).is_identity(), "{name}: s^2 != 1");
                let det_parity = s.clone();
                // det -1 for a reflection: check via order 2 and trace n-2
                let trace: i64 = (0..t.rank() as usize).map(|i| det_parity[(i, i)]).sum();
                assert_eq!(trace, t.rank() as i64 - 2, "{name}: reflection trace");
                for r in &all {
                    assert!(set.contains(&s.apply(r)), "{name}: root image not a root");
                }
            }
        }
    }

    #[test]
    fn a2_reflection_pinned() {
        let s = simple_reflections(st("A2"));
        // columns are the images of alpha_1, alpha_2
        assert_eq!(s[0], IntMatrix::from_rows(&[vec![-1, 1], vec![0, 1]]));
    }

    #[test]
    fn a1_reflection_pinned() {
        let s = simple_reflections(st("A1"));
        assert_eq!(s[0], IntMatrix::from_rows(&[vec![-1]]));
    }

    #[test]
    fn root_counts() {
        for (name, count) in [
            ("A2", 6),
            ("G2", 12),
            ("B3", 18),
            ("C3", 18),
            ("D4", 24),
            ("F4", 48),
            ("E6", 72),
            ("E7", 126),
            ("E8", 240),
        ] {
            let t = st(name);
            assert_eq!(roots(t).len(), count, "{name}");
            assert_eq!(root_count(t), count, "{name} degree-sum identity");
        }
    }

    #[test]
    fn degrees_pinned() {
        assert_eq!(degrees(st("F4")), vec![2, 6, 8, 12]);
        assert_eq!(degrees(st("E8")), vec![2, 8, 12, 14, 18, 20, 24, 30]);
        assert_eq!(degrees(st("D5")), vec![2, 4, 5, 6, 8]);
        assert_eq!(degrees(st("A3")), vec![2, 3, 4]);
        assert_eq!(degrees(st("B4")), vec![2, 4, 6, 8]);
    }

    #[test]
    fn weyl_orders() {
        assert_eq!(weyl_order(st("G2")), BigUint::from(12u32));
        assert_eq!(weyl_order(st("F4")), BigUint::from(1152u32));
        assert_eq!(weyl_order(st("E6")), BigUint::from(51840u32));
        assert_eq!(weyl_order(st("E7")), BigUint::from(2903040u32));
        assert_eq!(weyl_order(st("E8")), BigUint::from(696729600u32));
    }

    #[test]
    fn coxeter_element_order_is_max_degree() {
        for name in ["A1", "A3", "B2", "B4", "C3", "D4", "D5", "G2", "F4", "E6"] {
            let t = st(name);
            let cox = simple_reflections(t)
                .into_iter()
                .reduce(|a, b| a.mul(&b))
                .unwrap();
            let h = *degrees(t).last().unwrap();
            assert_eq!(cox.order(64), h, "{name}");
        }
    }

    /// Exhaustive closure of the generated matrix group matches the degree
    /// product, for every type with group order below 52,000.
    #[test]
    fn generated_group_orders() {
        let mut types = vec!["A1", "A2", "A3", "A4", "A5", "A6", "A7"];
        types.extend(["B2", "B3", "B4", "B5", "B6", "C3", "C4", "C5", "C6"]);
        types.extend(["D4", "D5", "D6", "G2", "F4"]);
        for name in types {
            let t = st(name);
            let expected = weyl_order(t);
            let gens = simple_reflections(t);
            let mut seen: HashSet<IntMatrix> = HashSet::new();
            let mut queue = VecDeque::new();
            let id = IntMatrix::identity(t.rank() as usize);
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
            assert_eq!(BigUint::from(seen.len()), expected, "{name}");
        }
    }

    #[test]
    fn e6_group_order_by_enumeration() {
        // |W(E6)| = 51840 sits just under the 52k budget for matrix closure.
        let t = st("E6");
        let gens = simple_reflections(t);
        let mut seen: HashSet<IntMatrix> = HashSet::new();
        let mut queue = VecDeque::new();
        let id = IntMatrix::identity(6);
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
        assert_eq!(seen.len(), 51840);
    }
}
