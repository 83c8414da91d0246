//! Trapezoid partitions, toric divisors and their support functions.
//!
//! The lattice trapezoid has `N0 + 1` boundary points on row 0 and `N1 + 1`
//! on row 1. A partition σ lists the unit triangles `T_i`, `i = ½, …, N−½`,
//! by the position of their base edge. Half-integers are stored doubled.

use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("sigma is not a bijection onto the unit segments: {0}")]
    NotABijection(String),
    #[error("monotonicity violated: {0}")]
    MonotonicityViolated(String),
    #[error("index {index} out of range for {kind}")]
    IndexOutOfRange { kind: &'static str, index: String },
    #[error("cannot parse half-integer {0:?}")]
    BadHalf(String),
    #[error("unknown divisor kind {0:?}")]
    UnknownKind(String),
}

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half(pub i64);

impl Half {
    pub fn from_doubled(v: i64) -> Self {
        Half(v)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    /// The half-integer `j + ½`.
    pub fn plus_half(j: i64) -> Self {
        Half(2 * j + 1)
    }

    pub fn is_proper_half(self) -> bool {
        self.0.rem_euclid(2) == 1
    }

    /// Accepts `"5/2"`, `"2.5"` is rejected, plain integers are allowed.
    pub fn parse(s: &str) -> Result<Self, ToricError> {
        let t = s.trim();
        let bad = || ToricError::BadHalf(s.to_string());
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(Half(num)),
                "1" => num.checked_mul(2).map(Half).ok_or_else(bad),
                _ => Err(bad()),
            }
        } else {
            let v: i64 = t.parse().map_err(|_| bad())?;
            v.checked_mul(2).map(Half).ok_or_else(bad)
        }
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Position of one unit triangle: base edge centre `x2 / 2` on row `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub x2: i64,
    pub y: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Geometry {
    n0: usize,
    n1: usize,
    sigma: Vec<Cell>,
    ir: Vec<bool>,
}

impl Geometry {
    /// Validates `(N0, N1, σ)` and derives `Ir`.
    pub fn new(n0: usize, n1: usize, sigma: Vec<Cell>) -> Result<Self, ToricError> {
        if n0 < 1 {
            return Err(ToricError::BadShape("N0 must be at least 1".into()));
        }
        if n1 > n0 {
            return Err(ToricError::BadShape(format!("N1 = {n1} exceeds N0 = {n0}")));
        }
        let n = n0 + n1;
        if sigma.len() != n {
            return Err(ToricError::BadShape(format!(
                "sigma has {} entries, expected N = {n}",
                sigma.len()
            )));
        }
        let mut seen = [vec![false; n0], vec![false; n1]];
        for (j, c) in sigma.iter().enumerate() {
            if c.y > 1 {
                return Err(ToricError::BadShape(format!("sigma_y of entry {j} is {}", c.y)));
            }
            if c.x2.rem_euclid(2) != 1 {
                return Err(ToricError::BadShape(format!(
                    "sigma_x of entry {j} is not a proper half-integer"
                )));
            }
            let row = &mut seen[c.y as usize];
            let slot = (c.x2 - 1) / 2;
            if c.x2 < 1 || slot as usize >= row.len() {
                return Err(ToricError::NotABijection(format!(
                    "entry {j} = ({}, {}) lies outside the trapezoid",
                    Half(c.x2),
                    c.y
                )));
            }
            if row[slot as usize] {
                return Err(ToricError::NotABijection(format!(
                    "segment ({}, {}) is used twice",
                    Half(c.x2),
                    c.y
                )));
            }
            row[slot as usize] = true;
        }
        for y in 0..2u8 {
            let xs: Vec<i64> = sigma.iter().filter(|c| c.y == y).map(|c| c.x2).collect();
            if xs.windows(2).any(|w| w[0] <= w[1]) {
                return Err(ToricError::MonotonicityViolated(format!(
                    "sigma_x is not strictly decreasing along row {y}"
                )));
            }
        }
        let ir = (0..n)
            .map(|k| sigma[(k + n - 1) % n].y == sigma[k].y)
            .collect();
        Ok(Geometry { n0, n1, sigma, ir })
    }

    /// Parses σ from `(x2, y)` pairs.
    pub fn from_pairs(n0: usize, n1: usize, pairs: &[(i64, u8)]) -> Result<Self, ToricError> {
        Geometry::new(
            n0,
            n1,
            pairs.iter().map(|&(x2, y)| Cell { x2, y }).collect(),
        )
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n(&self) -> usize {
        self.n0 + self.n1
    }

    pub fn sigma(&self) -> &[Cell] {
        &self.sigma
    }

    /// Row length `N_ε`.
    pub fn row_len(&self, eps: u8) -> usize {
        if eps == 0 {
            self.n0
        } else {
            self.n1
        }
    }

    /// Row of triangle `j + ½`, with `j` taken mod N.
    pub fn row_of(&self, j: i64) -> u8 {
        self.sigma[j.rem_euclid(self.n() as i64) as usize].y
    }

    pub fn in_ir(&self, k: usize) -> bool {
        self.ir[k % self.n()]
    }

    pub fn ir(&self) -> Vec<usize> {
        (0..self.n()).filter(|&k| self.ir[k]).collect()
    }

    pub fn ir_mask(&self) -> &[bool] {
        &self.ir
    }

    pub fn tau(&self) -> Vec<i8> {
        self.ir.iter().map(|&b| if b { 1 } else { -1 }).collect()
    }

    /// Short stable hash of the canonical description.
    pub fn hash_hex(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}:{}:", self.n0, self.n1));
        for c in &self.sigma {
            h.update(format!("{},{};", c.x2, c.y));
        }
        hex::encode(h.finalize())[..16].to_string()
    }

    /// The three vertices `(x, y)` of triangle `j + ½`: the base pair on its
    /// own row (right end first), then the apex on the other row.
    pub fn triangle_vertices(&self, j: usize) -> [(i64, u8); 3] {
        // Sweep from the right boundary edge: the apex of T_j is the current
        // end point on the opposite row.
        let mut ends = [self.n0 as i64, self.n1 as i64];
        for c in &self.sigma[..j] {
            ends[c.y as usize] -= 1;
        }
        let c = self.sigma[j];
        let p = (c.x2 + 1) / 2;
        let other = 1 - c.y;
        [(p, c.y), (p - 1, c.y), (ends[other as usize], other)]
    }

    /// Curve type of the exceptional curve `C_k`, `1 ≤ k ≤ N−1`.
    pub fn curve_type(&self, k: usize) -> Result<&'static str, ToricError> {
        if k < 1 || k >= self.n() {
            return Err(ToricError::IndexOutOfRange {
                kind: "curve",
                index: k.to_string(),
            });
        }
        Ok(if self.ir[k] { "(0,-2)" } else { "(-1,-1)" })
    }
}

/// Named geometries used throughout tests and the CLI.
pub mod presets {
    use super::Geometry;

    pub fn conifold() -> Geometry {
        Geometry::from_pairs(1, 1, &[(1, 0), (1, 1)]).unwrap()
    }

    /// N0 = 1, N1 = 0: affine three-space.
    pub fn c3() -> Geometry {
        Geometry::from_pairs(1, 0, &[(1, 0)]).unwrap()
    }

    /// N0 = 2, N1 = 0: both triangles on row 0.
    pub fn a1() -> Geometry {
        Geometry::from_pairs(2, 0, &[(3, 0), (1, 0)]).unwrap()
    }

    /// The three partitions of the (2,1) trapezoid.
    pub fn t21(which: usize) -> Geometry {
        let pairs: &[(i64, u8)] = match which {
            0 => &[(3, 0), (1, 0), (1, 1)],
            1 => &[(3, 0), (1, 1), (1, 0)],
            _ => &[(1, 1), (3, 0), (1, 0)],
        };
        Geometry::from_pairs(2, 1, pairs).unwrap()
    }

    pub fn t31() -> Geometry {
        Geometry::from_pairs(3, 1, &[(5, 0), (3, 0), (1, 1), (1, 0)]).unwrap()
    }

    /// The (4,2) trapezoid with σ = (7/2,0),(3/2,1),(5/2,0),(3/2,0),(1/2,1),(1/2,0).
    pub fn t42() -> Geometry {
        Geometry::from_pairs(4, 2, &[(7, 0), (3, 1), (5, 0), (3, 0), (1, 1), (1, 0)]).unwrap()
    }

    pub fn by_name(name: &str) -> Option<Geometry> {
        Some(match name {
            "conifold" => conifold(),
            "c3" => c3(),
            "2-0" | "a1" => a1(),
            "2-1" | "2-1a" => t21(0),
            "2-1b" => t21(1),
            "2-1c" => t21(2),
            "3-1" => t31(),
            "4-2" => t42(),
            _ => return None,
        })
    }

    pub const NAMES: &[&str] = &["conifold", "c3", "2-0", "2-1a", "2-1b", "2-1c", "3-1", "4-2"];

    /// A uniformly random interleaving for given `(N0, N1)`.
    pub fn random<R: rand::Rng>(rng: &mut R, n0: usize, n1: usize) -> Geometry {
        let mut rows: Vec<u8> = std::iter::repeat_n(0u8, n0)
            .chain(std::iter::repeat_n(1u8, n1))
            .collect();
        use rand::seq::SliceRandom;
        rows.shuffle(rng);
        let mut next = [2 * n0 as i64 - 1, 2 * n1 as i64 - 1];
        let pairs: Vec<(i64, u8)> = rows
            .iter()
            .map(|&y| {
                let x2 = next[y as usize];
                next[y as usize] -= 2;
                (x2, y)
            })
            .collect();
        Geometry::from_pairs(n0, n1, &pairs).unwrap()
    }
}

/// Integer coefficients on the boundary divisors `D_{ε,x}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Divisor {
    pub row1: Vec<i64>,
    pub row0: Vec<i64>,
}

impl Divisor {
    pub fn zero(g: &Geometry) -> Self {
        Divisor {
            row1: vec![0; g.n1 + 1],
            row0: vec![0; g.n0 + 1],
        }
    }

    pub fn get(&self, eps: u8, x: i64) -> i64 {
        let row = if eps == 0 { &self.row0 } else { &self.row1 };
        row[x as usize]
    }

    fn row_mut(&mut self, eps: u8) -> &mut Vec<i64> {
        if eps == 0 {
            &mut self.row0
        } else {
            &mut self.row1
        }
    }

    pub fn fits(&self, g: &Geometry) -> bool {
        self.row0.len() == g.n0 + 1 && self.row1.len() == g.n1 + 1
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let zip = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Divisor {
            row1: zip(&self.row1, &other.row1),
            row0: zip(&self.row0, &other.row0),
        }
    }

    pub fn neg(&self) -> Divisor {
        Divisor {
            row1: self.row1.iter().map(|v| -v).collect(),
            row0: self.row0.iter().map(|v| -v).collect(),
        }
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.neg())
    }

    /// The full row `Σ_x D_{ε,x}`.
    pub fn full_row(g: &Geometry, eps: u8) -> Divisor {
        let mut d = Divisor::zero(g);
        d.row_mut(eps).iter_mut().for_each(|v| *v = 1);
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisorKind {
    EPlus(Half),
    EMinus(Half),
    FPlus(usize),
    FMinus(usize),
    FPlusTotal,
    GPlus(Half),
    GMinus(Half),
    H(Half),
    I(usize),
}

impl DivisorKind {
    /// Parses a kind name (`E+`, `F-`, `Fplus_total`, …) with its index.
    pub fn parse(kind: &str, index: Option<&str>) -> Result<Self, ToricError> {
        let half = || -> Result<Half, ToricError> {
            Half::parse(index.ok_or_else(|| ToricError::BadHalf(String::new()))?)
        };
        let int = || -> Result<usize, ToricError> {
            let s = index.ok_or_else(|| ToricError::BadHalf(String::new()))?;
            s.trim().parse().map_err(|_| ToricError::IndexOutOfRange {
                kind: "integer index",
                index: s.to_string(),
            })
        };
        Ok(match kind {
            "E+" => DivisorKind::EPlus(half()?),
            "E-" => DivisorKind::EMinus(half()?),
            "F+" => DivisorKind::FPlus(int()?),
            "F-" => DivisorKind::FMinus(int()?),
            "Fplus_total" | "F+total" => DivisorKind::FPlusTotal,
            "G+" => DivisorKind::GPlus(half()?),
            "G-" => DivisorKind::GMinus(half()?),
            "H" => DivisorKind::H(half()?),
            "I" => DivisorKind::I(int()?),
            other => return Err(ToricError::UnknownKind(other.to_string())),
        })
    }
}

fn tri_index(g: &Geometry, i: Half, kind: &'static str) -> Result<usize, ToricError> {
    let v = i.doubled();
    if !i.is_proper_half() || v < 1 || v > 2 * g.n() as i64 - 1 {
        return Err(ToricError::IndexOutOfRange {
            kind,
            index: i.to_string(),
        });
    }
    Ok(((v - 1) / 2) as usize)
}

fn int_index(
    k: usize,
    lo: usize,
    hi: usize,
    kind: &'static str,
) -> Result<usize, ToricError> {
    if k < lo || k > hi {
        return Err(ToricError::IndexOutOfRange {
            kind,
            index: k.to_string(),
        });
    }
    Ok(k)
}

fn e_plus(g: &Geometry, j: usize) -> Divisor {
    let c = g.sigma[j];
    let mut d = Divisor::zero(g);
    let start = ((c.x2 + 1) / 2) as usize;
    let len = g.row_len(c.y);
    d.row_mut(c.y)[start..=len].iter_mut().for_each(|v| *v = 1);
    d
}

fn e_minus(g: &Geometry, j: usize) -> Divisor {
    let c = g.sigma[j];
    let mut d = Divisor::zero(g);
    let end = ((c.x2 - 1) / 2) as usize;
    d.row_mut(c.y)[..=end].iter_mut().for_each(|v| *v = 1);
    d
}

fn sum(g: &Geometry, it: impl Iterator<Item = Divisor>) -> Divisor {
    it.fold(Divisor::zero(g), |acc, d| acc.add(&d))
}

/// `F⁺_k = Σ_{i<k} E⁺_i` for `1 ≤ k ≤ N`.
fn f_plus(g: &Geometry, k: usize) -> Divisor {
    sum(g, (0..k).map(|j| e_plus(g, j)))
}

/// `F⁻_k = Σ_{i>k} E⁻_i` for `0 ≤ k ≤ N−1`.
fn f_minus(g: &Geometry, k: usize) -> Divisor {
    sum(g, (k..g.n()).map(|j| e_minus(g, j)))
}

fn h_div(g: &Geometry, j: usize) -> Divisor {
    // H_{j+½} = Σ_{k=1}^{j} (F⁺_k − F⁻_k)
    sum(g, (1..=j).map(|k| f_plus(g, k).sub(&f_minus(g, k))))
}

pub fn divisor(g: &Geometry, kind: DivisorKind) -> Result<Divisor, ToricError> {
    let n = g.n();
    Ok(match kind {
        DivisorKind::EPlus(i) => e_plus(g, tri_index(g, i, "E+")?),
        DivisorKind::EMinus(i) => e_minus(g, tri_index(g, i, "E-")?),
        DivisorKind::FPlus(k) => f_plus(g, int_index(k, 1, n, "F+")?),
        DivisorKind::FMinus(k) => f_minus(g, int_index(k, 0, n - 1, "F-")?),
        DivisorKind::FPlusTotal => sum(g, (1..n).map(|k| f_plus(g, k))),
        DivisorKind::GPlus(i) => {
            let j = tri_index(g, i, "G+")?;
            sum(g, (1..=j).map(|k| f_plus(g, k)))
        }
        DivisorKind::GMinus(i) => {
            let j = tri_index(g, i, "G-")?;
            sum(g, (j + 1..n).map(|k| f_minus(g, k)))
        }
        DivisorKind::H(i) => h_div(g, tri_index(g, i, "H")?),
        DivisorKind::I(k) => {
            let k = int_index(k, 1, n.saturating_sub(1), "I")?;
            h_div(g, k - 1).add(&f_plus(g, k))
        }
    })
}

/// Piecewise-linear support function: one form `(a, b, c)` per triangle,
/// evaluated as `a·x + b·y + c·z` at `(x, y, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFn {
    pub forms: Vec<[i64; 3]>,
    pub values: Divisor,
}

impl SupportFn {
    pub fn value(&self, eps: u8, x: i64) -> i64 {
        self.values.get(eps, x)
    }
}

fn eval(t: &[i64; 3], x: i64, y: u8) -> i64 {
    t[0] * x + t[1] * y as i64 + t[2]
}

pub fn support_function(g: &Geometry, d: &Divisor) -> Result<SupportFn, ToricError> {
    if !d.fits(g) {
        return Err(ToricError::BadShape(
            "divisor rows do not match the trapezoid".into(),
        ));
    }
    let values = d.neg();
    let forms = (0..g.n())
        .map(|j| {
            let [(p, y0), (_, _), (a, y1)] = g.triangle_vertices(j);
            let tx = values.get(y0, p) - values.get(y0, p - 1);
            let c0 = values.get(y0, p) - tx * p;
            let v3 = values.get(y1, a);
            let (ty, tz) = if y0 == 0 {
                (v3 - tx * a - c0, c0)
            } else {
                let tz = v3 - tx * a;
                (c0 - tz, tz)
            };
            [tx, ty, tz]
        })
        .collect();
    Ok(SupportFn { forms, values })
}

pub fn is_globally_linear(_g: &Geometry, s: &SupportFn) -> bool {
    s.forms.windows(2).all(|w| w[0] == w[1])
}

/// Convexity across every interior edge `l_k`: the form of `T_{k−½}`
/// dominates ψ at the far vertex of `T_{k+½}`.
pub fn is_upper_convex(g: &Geometry, s: &SupportFn) -> bool {
    (1..g.n()).all(|k| {
        let c = g.sigma[k];
        let far = ((c.x2 - 1) / 2, c.y);
        eval(&s.forms[k - 1], far.0, far.1) >= s.value(far.1, far.0)
    })
}

/// The local difference identity for ψ_{F⁺} between consecutive triangles.
pub fn difference_identity_holds(g: &Geometry) -> bool {
    let f = divisor(g, DivisorKind::FPlusTotal).expect("total F+ is always defined");
    let diff = |j: usize| {
        let c = g.sigma[j];
        f.get(c.y, (c.x2 + 1) / 2) - f.get(c.y, (c.x2 - 1) / 2)
    };
    (0..g.n().saturating_sub(1)).all(|j| diff(j) == diff(j + 1) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_parse_and_display() {
        assert_eq!(Half::parse("5/2").unwrap(), Half(5));
        assert_eq!(Half::parse("3").unwrap(), Half(6));
        assert!(Half::parse("2.5").is_err());
        assert!(Half::parse("1/3").is_err());
        assert_eq!(Half(7).to_string(), "7/2");
    }

    #[test]
    fn ir_of_presets() {
        assert_eq!(presets::t42().ir(), vec![0, 3]);
        assert!(presets::conifold().ir().is_empty());
        assert_eq!(presets::c3().ir(), vec![0]);
        assert_eq!(presets::a1().ir(), vec![0, 1]);
    }

    #[test]
    fn rejects_bad_sigma() {
        assert!(matches!(
            Geometry::from_pairs(2, 0, &[(1, 0), (3, 0)]),
            Err(ToricError::MonotonicityViolated(_))
        ));
        assert!(matches!(
            Geometry::from_pairs(2, 0, &[(1, 0), (1, 0)]),
            Err(ToricError::NotABijection(_))
        ));
        assert!(matches!(
            Geometry::from_pairs(1, 2, &[(1, 0), (1, 1), (3, 1)]),
            Err(ToricError::BadShape(_))
        ));
        assert!(matches!(
            Geometry::from_pairs(1, 1, &[(2, 0), (1, 1)]),
            Err(ToricError::BadShape(_))
        ));
    }

    #[test]
    fn apex_sweep_is_consistent() {
        let g = presets::t42();
        for j in 0..g.n() {
            let [(p, y), (q, _), (_, y1)] = g.triangle_vertices(j);
            assert_eq!(p - q, 1);
            assert_ne!(y, y1);
        }
    }

    #[test]
    fn zero_divisor_has_zero_forms() {
        let g = presets::t42();
        let s = support_function(&g, &Divisor::zero(&g)).unwrap();
        assert!(s.forms.iter().all(|t| *t == [0, 0, 0]));
    }
}
