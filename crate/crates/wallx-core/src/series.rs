//! Truncated multivariate power series with big-integer coefficients.
//!
//! Truncation is by total degree. Exponent vectors are `Vec<u32>`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series shapes differ: ({0} vars, cap {1}) vs ({2} vars, cap {3})")]
    CapMismatch(usize, u32, usize, u32),
    #[error("constant term must be +1 or -1 to invert")]
    NonUnitConstantTerm,
    #[error("exponent vector must be non-zero")]
    ZeroExponent,
    #[error("q exponent must be non-zero")]
    ZeroQExponent,
    #[error("exponent has {0} entries, expected {1}")]
    Arity(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    nvars: usize,
    cap: u32,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

fn deg(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl Series {
    pub fn zero(nvars: usize, cap: u32) -> Self {
        Series { nvars, cap, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize, cap: u32) -> Self {
        Self::monomial(nvars, cap, vec![0; nvars], BigInt::one())
    }

    /// `c·q^e`, or zero if `e` exceeds the cap.
    pub fn monomial(nvars: usize, cap: u32, e: Vec<u32>, c: BigInt) -> Self {
        let mut s = Series::zero(nvars, cap);
        s.add_term(e, c);
        s
    }

    /// Builds from `(exponent, coefficient)` pairs, dropping terms over the cap.
    pub fn from_terms(
        nvars: usize,
        cap: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Series::zero(nvars, cap);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(SeriesError::Arity(e.len(), nvars));
            }
            s.add_term(e, c);
        }
        Ok(s)
    }

    pub(crate) fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if deg(&e) > self.cap || c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        *self == Series::one(self.nvars, self.cap)
    }

    fn check(&self, other: &Series) -> Result<(), SeriesError> {
        if self.nvars != other.nvars || self.cap != other.cap {
            return Err(SeriesError::CapMismatch(self.nvars, self.cap, other.nvars, other.cap));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Series {
        Series {
            nvars: self.nvars,
            cap: self.cap,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check(other)?;
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = deg(ea);
            for (eb, cb) in &other.terms {
                if da + deg(eb) > self.cap {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Series { nvars: self.nvars, cap: self.cap, terms: acc })
    }

    pub fn invert(&self) -> Result<Series, SeriesError> {
        let c0 = self.coeff(&vec![0; self.nvars]);
        if c0.abs() != BigInt::one() {
            return Err(SeriesError::NonUnitConstantTerm);
        }
        // a = c0(1 + r) ⇒ a⁻¹ = c0 Σ (−r)^j.
        let mut minus_r = self.clone();
        minus_r.terms.remove(&vec![0; self.nvars]);
        let minus_r = if c0.is_positive() { minus_r.neg() } else { minus_r };
        let one = Series::one(self.nvars, self.cap);
        let mut sum = one.clone();
        let mut pw = one;
        for _ in 0..self.cap {
            pw = pw.mul(&minus_r)?;
            if pw.terms.is_empty() {
                break;
            }
            sum = sum.add(&pw)?;
        }
        Ok(if c0.is_positive() { sum } else { sum.neg() })
    }

    pub fn pow(&self, e: i64) -> Result<Series, SeriesError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut out = Series::one(self.nvars, self.cap);
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&b)?;
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(out)
    }

    /// Multiplies each coefficient at `v` by `(−1)^{Σ_{k∈flip} v_k}`.
    pub fn flip_signs(&self, flip: &[bool]) -> Series {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let s: u32 = e.iter().zip(flip).filter(|(_, &f)| f).map(|(x, _)| *x).sum();
                (e.clone(), if s % 2 == 1 { -c } else { c.clone() })
            })
            .collect();
        Series { nvars: self.nvars, cap: self.cap, terms }
    }

    /// Same series under a smaller cap.
    pub fn truncate(&self, cap: u32) -> Series {
        Series {
            nvars: self.nvars,
            cap: cap.min(self.cap),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| deg(e) <= cap)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

/// `C(e, j)` for integer `e` (negative allowed).
pub(crate) fn gen_binomial(e: i64, j: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..j as i64 {
        num *= BigInt::from(e - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// `(1 + s·q^α)^e` truncated at `cap`.
pub fn binomial_factor(s: i8, alpha: &[u32], e: i64, cap: u32) -> Result<Series, SeriesError> {
    let d = deg(alpha);
    if d == 0 {
        return Err(SeriesError::ZeroExponent);
    }
    let nv = alpha.len();
    let mut out = Series::zero(nv, cap);
    let mut j = 0u32;
    while j * d <= cap {
        let mut c = gen_binomial(e, j);
        if s < 0 && j % 2 == 1 {
            c = -c;
        }
        if e >= 0 && j as i64 > e {
            break;
        }
        out.add_term(alpha.iter().map(|a| a * j).collect(), c);
        j += 1;
    }
    Ok(out)
}

/// `∏_{n≥1} (1 − (x_sign·q^{x_exp})(q_sign·q^{q_exp})^n)^{−n·e}` truncated.
pub fn macmahon(
    x_exp: &[u32],
    q_exp: &[u32],
    x_sign: i8,
    q_sign: i8,
    e: i64,
    cap: u32,
) -> Result<Series, SeriesError> {
    if deg(q_exp) == 0 {
        return Err(SeriesError::ZeroQExponent);
    }
    if x_exp.len() != q_exp.len() {
        return Err(SeriesError::Arity(x_exp.len(), q_exp.len()));
    }
    let nv = q_exp.len();
    let mut out = Series::one(nv, cap);
    if e == 0 {
        return Ok(out);
    }
    let mut n = 1u32;
    loop {
        let mono: Vec<u32> = x_exp.iter().zip(q_exp).map(|(x, q)| x + n * q).collect();
        if deg(&mono) > cap {
            break;
        }
        let qs: i8 = if q_sign < 0 && n % 2 == 1 { -1 } else { 1 };
        // 1 − c·q^mono = 1 + (−c)·q^mono
        let s = -(x_sign * qs);
        out = out.mul(&binomial_factor(s, &mono, -(n as i64) * e, cap)?)?;
        n += 1;
    }
    Ok(out)
}

/// The variables whose sign flips under the combinatorial sign rule:
/// `{0} ∩ Ir` together with `{k ≠ 0 : k ∉ Ir}`.
pub fn flip_set(ir: &[bool]) -> Vec<bool> {
    ir.iter()
        .enumerate()
        .map(|(k, &r)| if k == 0 { r } else { !r })
        .collect()
}

pub fn sign_substitute(s: &Series, ir: &[bool]) -> Result<Series, SeriesError> {
    if ir.len() != s.nvars() {
        return Err(SeriesError::Arity(ir.len(), s.nvars()));
    }
    Ok(s.flip_signs(&flip_set(ir)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// `β_k = v₀ − v_k`.
    BetaMinus,
    /// `β_k = v_k − v₀`.
    BetaPlus,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::BetaMinus => "beta_minus",
            Orientation::BetaPlus => "beta_plus",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "beta_minus" => Some(Orientation::BetaMinus),
            "beta_plus" => Some(Orientation::BetaPlus),
            _ => None,
        }
    }

    pub fn to_sheaf(self, v: &[u32]) -> (u32, Vec<i64>) {
        let n = v[0];
        let beta = v[1..]
            .iter()
            .map(|&x| match self {
                Orientation::BetaMinus => n as i64 - x as i64,
                Orientation::BetaPlus => x as i64 - n as i64,
            })
            .collect();
        (n, beta)
    }

    /// Inverse of [`to_sheaf`](Self::to_sheaf); `None` if a coordinate is negative.
    pub fn to_module(self, n: u32, beta: &[i64]) -> Option<Vec<u32>> {
        let mut v = vec![n];
        for &b in beta {
            let x = match self {
                Orientation::BetaMinus => n as i64 - b,
                Orientation::BetaPlus => n as i64 + b,
            };
            v.push(u32::try_from(x).ok()?);
        }
        Some(v)
    }
}

/// Coefficients indexed by `(n, β)` in sheaf variables `q^n t^β`.
pub type SheafTable = BTreeMap<(u32, Vec<i64>), BigInt>;

pub fn to_sheaf_grading(s: &Series, o: Orientation) -> SheafTable {
    s.terms().iter().map(|(e, c)| (o.to_sheaf(e), c.clone())).collect()
}
