//! Affine type-Â root lattice `Z^N`: positive real roots, the sign ε(α),
//! simple reflections on dimension vectors, parameters and τ, and the
//! sequence of walls crossed by the ray `ζ − c·δ`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("{0:?} is not a positive real root")]
    NotRealRoot(Vec<i64>),
    #[error("parameter lies on the imaginary wall (sum of entries is zero)")]
    OnImaginaryWall,
    #[error("parameter lies on the wall of root {0:?}")]
    OnWall(Vec<i64>),
    #[error("two walls are crossed at the same point c = {0}")]
    DegeneratePath(BigRational),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Param = Vec<BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `α_{[a,b]} + nδ`, `n ≥ 0`.
    Plus,
    /// `nδ − α_{[a,b]}`, `n ≥ 1`.
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vec<i64>,
    pub a: usize,
    pub b: usize,
    pub n: i64,
    pub family: Family,
}

impl Root {
    pub fn make(nv: usize, a: usize, b: usize, n: i64, family: Family) -> Root {
        let mut coords = vec![n; nv];
        for c in &mut coords[a..=b] {
            *c += if family == Family::Plus { 1 } else { -1 };
        }
        Root { coords, a, b, n, family }
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    /// Recovers the decomposition of a real root given by coordinates.
    pub fn classify(coords: &[i64]) -> Result<Root, RootError> {
        let bad = || RootError::NotRealRoot(coords.to_vec());
        let nv = coords.len();
        if nv < 2 || coords.iter().any(|&c| c < 0) || norm(coords) != 2 {
            return Err(bad());
        }
        // Real roots differ from nδ by ±1 on a cyclic interval not containing 0.
        let lo = *coords.iter().min().unwrap();
        let hi = *coords.iter().max().unwrap();
        let (n, family, marked): (i64, Family, Vec<usize>) = if coords[0] == lo {
            (lo, Family::Plus, (0..nv).filter(|&k| coords[k] == hi).collect())
        } else {
            (hi, Family::Minus, (0..nv).filter(|&k| coords[k] == lo).collect())
        };
        let (a, b) = (marked[0], *marked.last().unwrap());
        if a == 0 || marked.len() != b - a + 1 || (family == Family::Minus && n < 1) {
            return Err(bad());
        }
        Ok(Root::make(nv, a, b, n, family))
    }
}

/// `Σ_k (α_k − α_{k+1})²` over `Z/N`; equals `αᵀCα`.
pub fn norm(v: &[i64]) -> i64 {
    let n = v.len();
    (0..n).map(|k| (v[k] - v[(k + 1) % n]).pow(2)).sum()
}

/// All positive real roots of height `≤ max_height`, sorted by (height, coords).
pub fn positive_real_roots(nv: usize, max_height: i64) -> Vec<Root> {
    let mut out = Vec::new();
    if nv < 2 {
        return out;
    }
    let nn = nv as i64;
    for a in 1..nv {
        for b in a..nv {
            let len = (b - a + 1) as i64;
            let mut n = 0;
            while len + n * nn <= max_height {
                out.push(Root::make(nv, a, b, n, Family::Plus));
                n += 1;
            }
            let mut n = 1;
            while n * nn - len <= max_height {
                out.push(Root::make(nv, a, b, n, Family::Minus));
                n += 1;
            }
        }
    }
    out.sort_by(|x, y| (x.height(), &x.coords).cmp(&(y.height(), &y.coords)));
    out
}

/// `(−1)^{Σ_{k∉Ir} α_k}`.
pub fn epsilon(ir: &[bool], root: &[i64]) -> Result<i8, RootError> {
    if ir.len() != root.len() {
        return Err(RootError::Dimension { expected: ir.len(), got: root.len() });
    }
    Root::classify(root)?;
    Ok(sign_of(ir, root))
}

pub(crate) fn sign_of(ir: &[bool], v: &[i64]) -> i8 {
    let s: i64 = v.iter().zip(ir).filter(|(_, &r)| !r).map(|(x, _)| *x).sum();
    if s.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `(Cv)_k` for the affine Cartan matrix, neighbours counted with multiplicity.
fn cartan_row(k: usize, v: &[i64]) -> i64 {
    let n = v.len();
    if n == 1 {
        return 0;
    }
    2 * v[k] - v[(k + n - 1) % n] - v[(k + 1) % n]
}

/// Simple reflection `s_k` on a dimension vector.
pub fn mutate_dimvec(k: usize, v: &[i64]) -> Vec<i64> {
    let mut out = v.to_vec();
    out[k] -= cartan_row(k, v);
    out
}

/// Dual reflection on a parameter; preserves `v·ζ`.
pub fn mutate_param(k: usize, z: &[BigRational]) -> Param {
    let n = z.len();
    let mut out = z.to_vec();
    if n == 1 {
        return out;
    }
    let zk = z[k].clone();
    out[k] = -zk.clone();
    out[(k + n - 1) % n] += zk.clone();
    out[(k + 1) % n] += zk;
    out
}

/// `μ_k(τ)(l) = τ(k)τ(l)` for each neighbour occurrence of `l`.
pub fn mutate_tau(k: usize, tau: &[i8]) -> Vec<i8> {
    let n = tau.len();
    let mut out = tau.to_vec();
    if n == 1 {
        return out;
    }
    out[(k + n - 1) % n] *= tau[k];
    out[(k + 1) % n] *= tau[k];
    out
}

pub fn pair(v: &[i64], z: &[BigRational]) -> BigRational {
    v.iter()
        .zip(z)
        .map(|(a, b)| b * BigRational::from_integer((*a).into()))
        .fold(BigRational::zero(), |s, x| s + x)
}

pub fn param_sum(z: &[BigRational]) -> BigRational {
    z.iter().fold(BigRational::zero(), |s, x| s + x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub root: Root,
    pub c: BigRational,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberPath {
    /// `true` when `Σζ < 0` (walking toward the cyclic chamber).
    pub negative_side: bool,
    pub crossings: Vec<Crossing>,
}

impl ChamberPath {
    pub fn k_sequence(&self) -> Vec<usize> {
        self.crossings.iter().map(|c| c.k).collect()
    }
}

/// Roots `α` with `sign·ζ·α > 0`; rejects parameters on a real wall or the
/// imaginary wall. `sign = +1` needs `Σζ < 0`, `sign = −1` needs `Σζ > 0`.
fn signed_roots(z: &[BigRational], sign: i32) -> Result<Vec<(Root, BigRational)>, RootError> {
    let nv = z.len();
    let mut out = Vec::new();
    for a in 1..nv {
        for b in a..nv {
            for fam in [Family::Plus, Family::Minus] {
                let mut n = if fam == Family::Plus { 0 } else { 1 };
                loop {
                    let r = Root::make(nv, a, b, n, fam);
                    let p = pair(&r.coords, z);
                    let v = if sign > 0 { p.clone() } else { -p.clone() };
                    if v.is_zero() {
                        return Err(RootError::OnWall(r.coords));
                    }
                    if v.is_negative() {
                        break;
                    }
                    out.push((r, v));
                    n += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Checks `ζ·α ≠ 0` for every real root (exactly) and `Σζ ≠ 0`.
pub fn check_generic(z: &[BigRational]) -> Result<(), RootError> {
    let s = param_sum(z);
    if s.is_zero() {
        return Err(RootError::OnImaginaryWall);
    }
    signed_roots(z, if s.is_negative() { 1 } else { -1 }).map(|_| ())
}

pub fn chamber_path(z: &[BigRational]) -> Result<ChamberPath, RootError> {
    let s = param_sum(z);
    if s.is_zero() {
        return Err(RootError::OnImaginaryWall);
    }
    let negative_side = s.is_negative();
    let roots = signed_roots(z, if negative_side { 1 } else { -1 })?;
    let mut tagged: Vec<(BigRational, Root)> = roots
        .into_iter()
        .map(|(r, v)| {
            let h = BigRational::from_integer(r.height().into());
            (v / h, r)
        })
        .collect();
    tagged.sort_by(|x, y| y.0.cmp(&x.0));
    for w in tagged.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(RootError::DegeneratePath(w[0].0.clone()));
        }
    }
    let mut ks: Vec<usize> = Vec::new();
    let mut crossings = Vec::new();
    for (c, r) in tagged {
        let mut beta = r.coords.clone();
        for &k in &ks {
            beta = mutate_dimvec(k, &beta);
        }
        let k = simple_index(&beta).expect("reflected crossing root must be simple");
        ks.push(k);
        crossings.push(Crossing { root: r, c, k });
    }
    Ok(ChamberPath { negative_side, crossings })
}

/// `Some(k)` iff `v` is the unit vector `e_k`.
pub fn simple_index(v: &[i64]) -> Option<usize> {
    let nz: Vec<usize> = (0..v.len()).filter(|&k| v[k] != 0).collect();
    (nz.len() == 1 && v[nz[0]] == 1).then(|| nz[0])
}
