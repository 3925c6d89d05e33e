//! Exact integer polynomial arithmetic: characteristic polynomials via a
//! division-free Berkowitz scheme, cyclotomic polynomial generation, and
//! factorization of finite-order characteristic polynomials into cyclotomics.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::root_data::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    /// The polynomial has an irreducible factor that is not cyclotomic, so
    /// it cannot be the characteristic polynomial of a finite-order integer
    /// matrix.
    #[error("not a product of cyclotomic polynomials: {0}")]
    NotCyclotomicProduct(String),
    /// A canonical `d1:m1,d2:m2` form failed to parse.
    #[error("bad cyclotomic factor form: {0}")]
    BadFactorForm(String),
}

/// A dense integer polynomial, constant term first.  The zero polynomial is
/// the empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> IntPoly {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    /// `x^n - 1`.
    pub fn x_power_minus_one(n: usize) -> IntPoly {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = -BigInt::one();
        c[n] = BigInt::one();
        IntPoly { coeffs: c }
    }

    /// `x^n + 1`.
    pub fn x_power_plus_one(n: usize) -> IntPoly {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::one();
        c[n] = BigInt::one();
        IntPoly { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    /// Exact division by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        assert!(divisor.is_monic(), "divisor must be monic");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let d = divisor.degree();
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let q = std::mem::take(&mut rem[i]);
            if q.is_zero() {
                continue;
            }
            for (k, c) in divisor.coeffs.iter().take(d).enumerate() {
                let delta = c * &q;
                rem[i - d + k] -= delta;
            }
            quot[i - d] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(IntPoly::from_coeffs(quot))
        } else {
            None
        }
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Renders as a human-readable polynomial in `x`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "x".into(),
                (1, false) => format!("{mag}*x"),
                (_, true) => format!("x^{i}"),
                (_, false) => format!("{mag}*x^{i}"),
            };
            let sign = if c.is_negative() {
                " - "
            } else if parts.is_empty() {
                ""
            } else {
                " + "
            };
            parts.push(format!("{sign}{body}"));
        }
        parts.concat()
    }
}

fn euler_phi(mut n: u32) -> u32 {
    let mut phi = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            phi *= p - 1;
            n /= p;
            while n % p == 0 {
                phi *= p;
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Euler's totient; degree of the `d`-th cyclotomic polynomial.
pub fn totient(d: u32) -> u32 {
    assert!(d >= 1);
    euler_phi(d)
}

fn proper_divisors(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// The `d`-th cyclotomic polynomial, computed by exact division of
/// `x^d - 1` by the product of the lower cyclotomics, and memoized.
pub fn cyclotomic(d: u32) -> IntPoly {
    assert!(d >= 1);
    static CACHE: OnceLock<Mutex<HashMap<u32, IntPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&d) {
        return p.clone();
    }
    let mut p = IntPoly::x_power_minus_one(d as usize);
    for e in proper_divisors(d) {
        p = p.div_exact(&cyclotomic(e)).expect("cyclotomic division is exact");
    }
    cache.lock().unwrap().insert(d, p.clone());
    p
}

/// A polynomial stored as its cyclotomic factorization: index `d` maps to
/// the multiplicity of the `d`-th cyclotomic polynomial.  The empty map is
/// the constant polynomial 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct CycloPoly {
    factors: std::collections::BTreeMap<u32, u32>,
}

impl CycloPoly {
    pub fn one() -> CycloPoly {
        CycloPoly::default()
    }

    pub fn from_factors(factors: std::collections::BTreeMap<u32, u32>) -> CycloPoly {
        let factors = factors.into_iter().filter(|&(_, m)| m > 0).collect();
        CycloPoly { factors }
    }

    pub fn factors(&self) -> &std::collections::BTreeMap<u32, u32> {
        &self.factors
    }

    pub fn multiplicity(&self, d: u32) -> u32 {
        self.factors.get(&d).copied().unwrap_or(0)
    }

    pub fn add_factor(&mut self, d: u32, mult: u32) {
        if mult > 0 {
            *self.factors.entry(d).or_insert(0) += mult;
        }
    }

    /// Degree: the multiplicity-weighted sum of totients.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(&d, &m)| m * totient(d)).sum()
    }

    /// Product of two factorizations (multiplicities add).
    pub fn mul(&self, other: &CycloPoly) -> CycloPoly {
        let mut out = self.clone();
        for (&d, &m) in &other.factors {
            out.add_factor(d, m);
        }
        out
    }

    /// Expands back to a dense integer polynomial.
    pub fn expand(&self) -> IntPoly {
        let mut p = IntPoly::one();
        for (&d, &m) in &self.factors {
            let phi = cyclotomic(d);
            for _ in 0..m {
                p = p.mul(&phi);
            }
        }
        p
    }

    /// Multiplicative order of any matrix with this characteristic
    /// polynomial: finite-order integer matrices are diagonalizable, so the
    /// order is the lcm of the factor indices.
    pub fn element_order(&self) -> u64 {
        self.factors
            .keys()
            .fold(1u64, |acc, &d| num_integer::lcm(acc, d as u64))
    }

    /// Canonical text form `d1:m1,d2:m2,...` with indices ascending.
    /// The constant polynomial 1 renders as the empty string.
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (d, m)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}:{m}")?;
        }
        Ok(())
    }
}

impl FromStr for CycloPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut factors = std::collections::BTreeMap::new();
        if s.is_empty() {
            return Ok(CycloPoly { factors });
        }
        for item in s.split(',') {
            let (d, m) = item
                .split_once(':')
                .ok_or_else(|| PolyError::BadFactorForm(s.into()))?;
            let d: u32 = d.parse().map_err(|_| PolyError::BadFactorForm(s.into()))?;
            let m: u32 = m.parse().map_err(|_| PolyError::BadFactorForm(s.into()))?;
            if d == 0 || m == 0 || factors.insert(d, m).is_some() {
                return Err(PolyError::BadFactorForm(s.into()));
            }
        }
        Ok(CycloPoly { factors })
    }
}

/// Characteristic polynomial `det(xI - M)` with exact integer coefficients,
/// by the Berkowitz iteration (no divisions anywhere).
///
/// Matrices of dimension at most 8 with entries bounded by 8 in absolute
/// value take a fixed-width i128 fast path; everything else runs on big
/// integers.
pub fn char_poly(m: &IntMatrix) -> IntPoly {
    let n = m.dim();
    if n == 0 {
        return IntPoly::one();
    }
    if n <= 8 && m.entries().iter().all(|&a| a.abs() <= 8) {
        let coeffs = berkowitz_i128(m);
        return IntPoly::from_coeffs(coeffs.into_iter().map(BigInt::from).collect());
    }
    berkowitz_big(m)
}

/// Fixed-width Berkowitz for small matrices.  With n <= 8 and |entries| <= 8
/// every intermediate is far below i128 range (worst case ~1e28).
pub(crate) fn berkowitz_i128(m: &IntMatrix) -> Vec<i128> {
    let n = m.dim();
    let a = |i: usize, j: usize| -> i128 { m[(i, j)] as i128 };
    // c holds the characteristic polynomial of the leading k x k submatrix,
    // highest-degree coefficient first.
    let mut c: Vec<i128> = vec![1, -a(0, 0)];
    let mut t: Vec<i128> = Vec::with_capacity(n + 1);
    let mut v: Vec<i128> = Vec::with_capacity(n);
    let mut w: Vec<i128> = Vec::with_capacity(n);
    for k in 1..n {
        t.clear();
        t.push(1);
        t.push(-a(k, k));
        v.clear();
        v.extend((0..k).map(|i| a(i, k)));
        for step in 0..k {
            let dot: i128 = (0..k).map(|j| a(k, j) * v[j]).sum();
            t.push(-dot);
            if step + 1 < k {
                w.clear();
                w.extend((0..k).map(|i| (0..k).map(|j| a(i, j) * v[j]).sum::<i128>()));
                std::mem::swap(&mut v, &mut w);
            }
        }
        // c <- T_k c: lower-triangular Toeplitz product, i.e. the
        // convolution truncated to the first k+2 coefficients.
        let mut next = vec![0i128; k + 2];
        for (i, &ti) in t.iter().enumerate() {
            if ti == 0 {
                continue;
            }
            for (j, &cj) in c.iter().enumerate() {
                if i + j < k + 2 {
                    next[i + j] += ti * cj;
                }
            }
        }
        c = next;
    }
    c.reverse(); // constant term first
    c
}

/// Allocation-free Berkowitz for the enumeration hot path: characteristic
/// polynomial of the leading `n x n` block (`n <= 8`), constant term first
/// in `out[0..=n]`.  Entries must be small (|a| <= 8) so every intermediate
/// fits comfortably in i128.
pub(crate) fn berkowitz_fixed(a: &[[i64; 8]; 8], n: usize, out: &mut [i128; 9]) {
    debug_assert!((1..=8).contains(&n));
    let mut c = [0i128; 10];
    let mut clen = 2;
    c[0] = 1;
    c[1] = -(a[0][0] as i128);
    let mut t = [0i128; 10];
    let mut v = [0i128; 8];
    let mut w = [0i128; 8];
    for k in 1..n {
        t[0] = 1;
        t[1] = -(a[k][k] as i128);
        for (i, vi) in v.iter_mut().enumerate().take(k) {
            *vi = a[i][k] as i128;
        }
        for step in 0..k {
            let mut dot = 0i128;
            for j in 0..k {
                dot += (a[k][j] as i128) * v[j];
            }
            t[step + 2] = -dot;
            if step + 1 < k {
                for (i, wi) in w.iter_mut().enumerate().take(k) {
                    let mut s = 0i128;
                    for j in 0..k {
                        s += (a[i][j] as i128) * v[j];
                    }
                    *wi = s;
                }
                v[..k].copy_from_slice(&w[..k]);
            }
        }
        let tlen = k + 2;
        let mut next = [0i128; 10];
        for i in 0..tlen {
            if t[i] == 0 {
                continue;
            }
            for j in 0..clen {
                if i + j < k + 2 {
                    next[i + j] += t[i] * c[j];
                }
            }
        }
        c = next;
        clen = k + 2;
    }
    for i in 0..clen {
        out[i] = c[clen - 1 - i];
    }
    for x in out.iter_mut().skip(clen) {
        *x = 0;
    }
}

fn berkowitz_big(m: &IntMatrix) -> IntPoly {
    let n = m.dim();
    let a = |i: usize, j: usize| -> BigInt { BigInt::from(m[(i, j)]) };
    let mut c: Vec<BigInt> = vec![BigInt::one(), -a(0, 0)];
    for k in 1..n {
        let mut t: Vec<BigInt> = vec![BigInt::one(), -a(k, k)];
        let mut v: Vec<BigInt> = (0..k).map(|i| a(i, k)).collect();
        for step in 0..k {
            let dot: BigInt = (0..k).map(|j| a(k, j) * &v[j]).sum();
            t.push(-dot);
            if step + 1 < k {
                v = (0..k)
                    .map(|i| (0..k).map(|j| a(i, j) * &v[j]).sum::<BigInt>())
                    .collect();
            }
        }
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, ti) in t.iter().enumerate() {
            if ti.is_zero() {
                continue;
            }
            for (j, cj) in c.iter().enumerate() {
                if i + j < k + 2 {
                    next[i + j] += ti * cj;
                }
            }
        }
        c = next;
    }
    c.reverse();
    IntPoly::from_coeffs(c)
}

/// Candidate cyclotomic indices for factoring a polynomial of the given
/// degree: all `d` with `totient(d) <= deg`, ascending.
pub fn cyclotomic_candidates(deg: u32) -> Vec<u32> {
    if deg == 0 {
        return Vec::new();
    }
    // phi(d) >= sqrt(d/2), so d <= 2*deg^2 bounds the search exhaustively.
    (1..=2 * deg * deg + 1).filter(|&d| totient(d) <= deg).collect()
}

/// Complete factorization into cyclotomic polynomials by trial exact
/// division over all candidate indices.  Errors if anything is left over,
/// which for a monic input means some irreducible factor is not cyclotomic
/// (the matrix behind it has infinite order).
pub fn cyclo_factor(p: &IntPoly) -> Result<CycloPoly, PolyError> {
    if p.is_zero() || !p.is_monic() {
        return Err(PolyError::NotCyclotomicProduct(format!(
            "input must be monic and nonzero, got {}",
            p.pretty()
        )));
    }
    let mut rem = p.clone();
    let mut out = CycloPoly::one();
    for d in cyclotomic_candidates(p.degree() as u32) {
        if rem.is_one() {
            break;
        }
        let phi = cyclotomic(d);
        if phi.degree() > rem.degree() {
            continue;
        }
        while let Some(q) = rem.div_exact(&phi) {
            out.add_factor(d, 1);
            rem = q;
            if rem.is_one() || phi.degree() > rem.degree() {
                break;
            }
        }
    }
    if rem.is_one() {
        Ok(out)
    } else {
        Err(PolyError::NotCyclotomicProduct(p.pretty()))
    }
}

/// Exact value of `p(q)`.
pub fn eval_poly(p: &IntPoly, q: &BigInt) -> BigInt {
    p.eval(q)
}
