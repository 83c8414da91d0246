//! Finite-dimensional modules with exact rational matrices: string modules,
//! stability for torus-fixed modules, Hom/Ext and the self-extensions `C_m`.

mod complex;
pub mod linalg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

pub use complex::{hom_ext, HomExt};
use linalg::Matrix;

use crate::quiver::{Arrow, Quiver};
use crate::rootlat::{self, Param};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomalgError {
    #[error("relation violated: {0}")]
    RelationViolated(String),
    #[error("quiver mismatch: {0}")]
    QuiverMismatch(String),
    #[error("matrices are not in coordinate form (a column has two non-zero entries)")]
    NotCoordinateRep,
    #[error("no stable string module of dimension {0:?}")]
    NoneFound(Vec<i64>),
    #[error("{1} stable string modules of dimension {0:?}")]
    NotUnique(Vec<i64>, usize),
    #[error("parameter does not lie on the wall of {0:?}")]
    NotOnWall(Vec<i64>),
    #[error("module has no self-extension (odd parity)")]
    OddParity,
    #[error("no self-extension cocycle satisfies the relations at m = {0}")]
    NoExtension(usize),
    #[error("{0:?} is not a positive real root")]
    NotRealRoot(Vec<i64>),
    #[error("module too large for subset enumeration ({0} basis vectors)")]
    TooLarge(usize),
    #[error("Hom complex differentials do not compose to zero")]
    NotAComplex,
}

/// A module: one space per vertex, plus an optional framing space at ∞ with
/// a map `frame_map: W → V_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub framed: bool,
    pub framing: usize,
    /// Indexed like `Quiver::arrows`; `dims[target] × dims[source]`.
    pub maps: Vec<Matrix>,
    pub frame_map: Matrix,
}

impl Rep {
    pub fn zero(q: &Quiver, dims: Vec<usize>) -> Rep {
        let maps = q
            .arrows()
            .iter()
            .map(|&a| Matrix::zeros(dims[q.target(a)], dims[q.source(a)]))
            .collect();
        let d0 = dims[0];
        Rep { dims, framed: false, framing: 0, maps, frame_map: Matrix::zeros(d0, 0) }
    }

    /// The same module regarded over the framed quiver with `W = 0`.
    pub fn with_zero_framing(mut self) -> Rep {
        self.framed = true;
        self.framing = 0;
        self.frame_map = Matrix::zeros(self.dims[0], 0);
        self
    }

    pub fn map(&self, q: &Quiver, a: Arrow) -> &Matrix {
        &self.maps[q.arrow_index(a).expect("arrow belongs to the quiver")]
    }

    pub fn map_mut(&mut self, q: &Quiver, a: Arrow) -> &mut Matrix {
        &mut self.maps[q.arrow_index(a).expect("arrow belongs to the quiver")]
    }

    pub fn dim_vector(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub(crate) fn check_shapes(&self, q: &Quiver) -> Result<(), HomalgError> {
        if self.dims.len() != q.n() || self.maps.len() != q.arrows().len() {
            return Err(HomalgError::QuiverMismatch(format!(
                "module has {} vertices / {} arrows, quiver has {} / {}",
                self.dims.len(),
                self.maps.len(),
                q.n(),
                q.arrows().len()
            )));
        }
        for (m, &a) in self.maps.iter().zip(q.arrows()) {
            if m.rows() != self.dims[q.target(a)] || m.cols() != self.dims[q.source(a)] {
                return Err(HomalgError::QuiverMismatch(format!("matrix of {a} has the wrong shape")));
            }
        }
        let w = if self.framed { self.framing } else { 0 };
        if self.frame_map.rows() != self.dims[0] || self.frame_map.cols() != w {
            return Err(HomalgError::QuiverMismatch("framing map has the wrong shape".into()));
        }
        Ok(())
    }

    /// `E(p_{L−1})⋯E(p_0)` for a word starting at `start`.
    pub fn path_matrix(&self, q: &Quiver, word: &[Arrow], start: usize) -> Matrix {
        let mut m = Matrix::identity(self.dims[start]);
        for &a in word {
            m = self.map(q, a).mul(&m);
        }
        m
    }

    pub fn direct_sum(&self, o: &Rep) -> Rep {
        let dims: Vec<usize> = self.dims.iter().zip(&o.dims).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&o.maps).map(|(a, b)| block_diag(a, b)).collect();
        Rep {
            dims,
            framed: self.framed || o.framed,
            framing: self.framing + o.framing,
            maps,
            frame_map: block_diag(&self.frame_map, &o.frame_map),
        }
    }

    /// Change of basis by invertible `g_v` at each vertex (and `g_∞`).
    pub fn conjugate(&self, q: &Quiver, g: &[Matrix], g_inv: &[Matrix]) -> Rep {
        let n = q.n();
        let maps = q
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(&a, m)| g[q.target(a)].mul(m).mul(&g_inv[q.source(a)]))
            .collect();
        let frame_map = if self.framing > 0 {
            g[0].mul(&self.frame_map).mul(&g_inv[n])
        } else {
            self.frame_map.clone()
        };
        Rep { maps, frame_map, ..self.clone() }
    }
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            m.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
        }
    }
    m
}

/// Evaluates every listed relation on the module.
pub fn check_relations(q: &Quiver, r: &Rep) -> Result<(), HomalgError> {
    r.check_shapes(q)?;
    for rel in q.relations() {
        let start = q.source(rel.lhs[0]);
        let l = r.path_matrix(q, &rel.lhs, start);
        let rr = r.path_matrix(q, &rel.rhs, start);
        if l != rr {
            let fmt = |w: &[Arrow]| w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
            return Err(HomalgError::RelationViolated(format!(
                "[{}] = [{}]",
                fmt(&rel.lhs),
                fmt(&rel.rhs)
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Plus,
    Minus,
}

/// Basis `v_{n0}, …, v_{n1}` with `v_n` at vertex `n mod N`; step `j = n+½`
/// is `h⁺(v_n) = v_{n+1}` for `Plus` and `h⁻(v_{n+1}) = v_n` for `Minus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StringSpec {
    pub n0: i64,
    pub n1: i64,
    pub orientation: Vec<Dir>,
}

impl StringSpec {
    pub fn len(&self) -> usize {
        (self.n1 - self.n0 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n1 < self.n0
    }

    pub fn dim_vector(&self, nv: usize) -> Vec<i64> {
        let mut d = vec![0; nv];
        for n in self.n0..=self.n1 {
            d[n.rem_euclid(nv as i64) as usize] += 1;
        }
        d
    }
}

/// Position of `v_n` inside its vertex space.
fn string_slot(spec: &StringSpec, nv: usize, n: i64) -> (usize, usize) {
    let v = n.rem_euclid(nv as i64) as usize;
    let idx = (spec.n0..n).filter(|m| m.rem_euclid(nv as i64) as usize == v).count();
    (v, idx)
}

pub fn string_module(q: &Quiver, spec: &StringSpec) -> Result<Rep, HomalgError> {
    if spec.is_empty() || spec.orientation.len() != spec.len() - 1 {
        return Err(HomalgError::QuiverMismatch(
            "orientation word must have length n1 - n0".into(),
        ));
    }
    let nv = q.n();
    let dims: Vec<usize> = spec.dim_vector(nv).iter().map(|&d| d as usize).collect();
    let mut r = Rep::zero(q, dims);
    for (t, dir) in spec.orientation.iter().enumerate() {
        let n = spec.n0 + t as i64;
        let e = n.rem_euclid(nv as i64) as usize;
        let (lo, hi) = (string_slot(spec, nv, n), string_slot(spec, nv, n + 1));
        match dir {
            Dir::Plus => r.map_mut(q, Arrow::HPlus(e)).set(hi.1, lo.1, BigRational::one()),
            Dir::Minus => r.map_mut(q, Arrow::HMinus(e)).set(lo.1, hi.1, BigRational::one()),
        }
    }
    Ok(r)
}

/// Coordinate structure: global basis index, vertex and successor sets.
struct Coords {
    vertex: Vec<usize>,
    succ: Vec<u64>,
    frame_image: u64,
}

fn coords(q: &Quiver, r: &Rep) -> Result<Coords, HomalgError> {
    let total = r.total_dim();
    if total > 24 {
        return Err(HomalgError::TooLarge(total));
    }
    let mut offset = vec![0; q.n()];
    for v in 1..q.n() {
        offset[v] = offset[v - 1] + r.dims[v - 1];
    }
    let vertex = (0..q.n()).flat_map(|v| std::iter::repeat_n(v, r.dims[v])).collect();
    let mut succ = vec![0u64; total];
    for (m, &a) in r.maps.iter().zip(q.arrows()) {
        for c in 0..m.cols() {
            let nz: Vec<usize> = (0..m.rows()).filter(|&i| !m.get(i, c).is_zero()).collect();
            if nz.len() > 1 {
                return Err(HomalgError::NotCoordinateRep);
            }
            if let Some(&i) = nz.first() {
                succ[offset[q.source(a)] + c] |= 1 << (offset[q.target(a)] + i);
            }
        }
    }
    let mut frame_image = 0u64;
    for c in 0..r.frame_map.cols() {
        for i in 0..r.frame_map.rows() {
            if !r.frame_map.get(i, c).is_zero() {
                frame_image |= 1 << i;
            }
        }
    }
    Ok(Coords { vertex, succ, frame_image })
}

fn weight(c: &Coords, mask: u64, z: &[BigRational]) -> BigRational {
    (0..c.vertex.len())
        .filter(|&i| mask >> i & 1 == 1)
        .fold(BigRational::zero(), |s, i| s + &z[c.vertex[i]])
}

/// Stability over arrow-closed coordinate subsets. Unframed modules use the
/// slope condition; framed ones (non-zero `W`) use conditions (A) and (B).
pub fn is_stable_tinv(q: &Quiver, r: &Rep, z: &[BigRational]) -> Result<bool, HomalgError> {
    r.check_shapes(q)?;
    let c = coords(q, r)?;
    let total = c.vertex.len();
    if total == 0 {
        return Ok(r.framed && r.framing > 0);
    }
    let full: u64 = if total == 64 { u64::MAX } else { (1u64 << total) - 1 };
    let closed = |m: u64| (0..total).all(|i| m >> i & 1 == 0 || c.succ[i] & !m == 0);
    let zv = weight(&c, full, z);
    let framed = r.framed && r.framing > 0;
    let size = |m: u64| BigRational::from_integer(BigInt::from(m.count_ones()));
    let tot = BigRational::from_integer(BigInt::from(total));
    for m in 1..=full {
        if !closed(m) {
            continue;
        }
        let zs = weight(&c, m, z);
        if framed {
            if !zs.is_negative() {
                return Ok(false);
            }
        } else if m != full && zs.clone() * &tot >= zv.clone() * size(m) {
            return Ok(false);
        }
        if framed && m != full && c.frame_image & !m == 0 && zs >= zv {
            return Ok(false);
        }
    }
    // (B) for T = ∅ when the framing image is zero.
    if framed && c.frame_image == 0 && !zv.is_positive() {
        return Ok(false);
    }
    Ok(true)
}

/// Finds the unique stable string module of dimension `α` at a point of
/// its wall.
pub fn find_stable_string(q: &Quiver, z: &[BigRational], alpha: &[i64]) -> Result<(StringSpec, Rep), HomalgError> {
    rootlat::Root::classify(alpha).map_err(|_| HomalgError::NotRealRoot(alpha.to_vec()))?;
    if !rootlat::pair(alpha, z).is_zero() {
        return Err(HomalgError::NotOnWall(alpha.to_vec()));
    }
    let nv = q.n();
    let ht: i64 = alpha.iter().sum();
    let mut found = Vec::new();
    for n0 in 0..nv as i64 {
        let probe = StringSpec { n0, n1: n0 + ht - 1, orientation: Vec::new() };
        if probe.dim_vector(nv) != alpha {
            continue;
        }
        for mask in 0..1u64 << (ht - 1) {
            let orientation = (0..ht - 1)
                .map(|t| if mask >> t & 1 == 1 { Dir::Plus } else { Dir::Minus })
                .collect();
            let spec = StringSpec { orientation, ..probe.clone() };
            let rep = string_module(q, &spec)?;
            if is_stable_tinv(q, &rep, z)? {
                found.push((spec, rep));
            }
        }
    }
    match found.len() {
        0 => Err(HomalgError::NoneFound(alpha.to_vec())),
        1 => Ok(found.pop().unwrap()),
        k => Err(HomalgError::NotUnique(alpha.to_vec(), k)),
    }
}

/// A random point on the wall of `α` avoiding every other wall of height
/// `≤ max_height` (real roots and multiples of δ).
pub fn generic_wall_point<R: Rng>(rng: &mut R, alpha: &[i64], max_height: i64) -> Param {
    let nv = alpha.len();
    let aa: i64 = alpha.iter().map(|x| x * x).sum();
    let others: Vec<Vec<i64>> = rootlat::positive_real_roots(nv, max_height)
        .into_iter()
        .map(|r| r.coords)
        .filter(|c| c != alpha)
        .collect();
    loop {
        let u: Vec<i64> = (0..nv).map(|_| rng.random_range(-40..=40)).collect();
        let ua: i64 = u.iter().zip(alpha).map(|(a, b)| a * b).sum();
        let z: Vec<i64> = u.iter().zip(alpha).map(|(x, a)| x * aa - ua * a).collect();
        let zsum: i64 = z.iter().sum();
        if zsum == 0 {
            continue;
        }
        let ok = others.iter().all(|b| b.iter().zip(&z).map(|(x, y)| x * y).sum::<i64>() != 0);
        if ok {
            return z.into_iter().map(|x| BigRational::from_integer(x.into())).collect();
        }
    }
}

/// `m` successive self-extensions of a string module with `ext¹(C,C) = 1`:
/// `X(b) = I ⊗ C(b) + J ⊗ ψ_b` with `J` the nilpotent shift.
pub fn extend_cm(q: &Quiver, spec: &StringSpec, m: usize) -> Result<Rep, HomalgError> {
    let c = string_module(q, spec)?;
    if m <= 1 {
        return Ok(c);
    }
    let cx = complex::hom_complex(q, &c, &c)?;
    let (r0, r1) = (cx.d0.rank(), cx.d1.rank());
    if cx.dims[1] - r1 - r0 == 0 {
        return Err(HomalgError::OddParity);
    }
    let mut candidates: Vec<Vec<BigRational>> = Vec::new();
    if let Some(g) = gluing_cocycle(q, spec, &c) {
        candidates.push(g);
    }
    for j in 0..cx.dims[1] {
        let mut v = vec![BigRational::zero(); cx.dims[1]];
        v[j] = BigRational::one();
        candidates.push(v);
    }
    candidates.extend(cx.d1.kernel());
    let d0_rank = r0;
    for psi in candidates {
        let col = Matrix::from_rows(psi.iter().map(|x| vec![x.clone()]).collect(), 1).unwrap();
        if !cx.d1.mul(&col).is_zero() {
            continue;
        }
        // Not a coboundary: appending ψ to the image of d0 raises the rank.
        let mut aug = Vec::with_capacity(cx.dims[1]);
        for i in 0..cx.dims[1] {
            let mut row = cx.d0.row(i).to_vec();
            row.push(psi[i].clone());
            aug.push(row);
        }
        if Matrix::from_rows(aug, cx.d0.cols() + 1).unwrap().rank() == d0_rank {
            continue;
        }
        let rep = assemble_cm(&c, &psi, m);
        if check_relations(q, &rep).is_ok() {
            return Ok(rep);
        }
    }
    Err(HomalgError::NoExtension(m))
}

/// The cocycle that glues copy `M` to copy `M+1` along the first step of
/// the string, or the loop at the vertex of a simple module.
fn gluing_cocycle(q: &Quiver, spec: &StringSpec, c: &Rep) -> Option<Vec<BigRational>> {
    let nv = q.n();
    let mut psi: Vec<Matrix> = c.maps.iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect();
    if spec.len() == 1 {
        let k = spec.n0.rem_euclid(nv as i64) as usize;
        let idx = q.arrow_index(Arrow::Loop(k))?;
        psi[idx].set(0, 0, BigRational::one());
    } else {
        let n = spec.n0;
        let e = n.rem_euclid(nv as i64) as usize;
        let (lo, hi) = (string_slot(spec, nv, n), string_slot(spec, nv, n + 1));
        match spec.orientation[0] {
            Dir::Plus => psi[q.arrow_index(Arrow::HPlus(e))?].set(hi.1, lo.1, BigRational::one()),
            Dir::Minus => psi[q.arrow_index(Arrow::HMinus(e))?].set(lo.1, hi.1, BigRational::one()),
        }
    }
    Some(psi.iter().flat_map(|m| m.entries().to_vec()).collect())
}

fn assemble_cm(c: &Rep, psi: &[BigRational], m: usize) -> Rep {
    let id = Matrix::identity(m);
    let mut shift = Matrix::zeros(m, m);
    for i in 0..m - 1 {
        shift.set(i + 1, i, BigRational::one());
    }
    let mut off = 0;
    let maps = c
        .maps
        .iter()
        .map(|cb| {
            let len = cb.rows() * cb.cols();
            let pb = Matrix::from_rows(
                (0..cb.rows()).map(|i| psi[off + i * cb.cols()..off + (i + 1) * cb.cols()].to_vec()).collect(),
                cb.cols(),
            )
            .unwrap();
            off += len;
            id.kron(cb).add(&shift.kron(&pb))
        })
        .collect();
    let dims: Vec<usize> = c.dims.iter().map(|d| d * m).collect();
    let d0 = dims[0];
    Rep { dims, framed: false, framing: 0, maps, frame_map: Matrix::zeros(d0, 0) }
}

/// A random invertible integer matrix (unipotent times a permutation-free
/// lower factor), with its exact inverse.
pub fn random_gl<R: Rng>(rng: &mut R, n: usize) -> (Matrix, Matrix) {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = BigRational::from_integer(BigInt::from(rng.random_range(-2..=2)));
            if i > j {
                l.set(i, j, v);
            } else if i < j {
                u.set(i, j, v);
            }
        }
    }
    let g = l.mul(&u);
    (g.clone(), inverse(&g))
}

/// Exact inverse of an invertible square matrix.
pub fn inverse(g: &Matrix) -> Matrix {
    let n = g.rows();
    let mut aug = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = g.row(i).to_vec();
        row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
        aug.push(row);
    }
    let mut a = Matrix::from_rows(aug, 2 * n).unwrap();
    for c in 0..n {
        let p = (c..n).find(|&i| !a.get(i, c).is_zero()).expect("matrix is invertible");
        for j in 0..2 * n {
            let (x, y) = (a.get(p, j).clone(), a.get(c, j).clone());
            a.set(p, j, y);
            a.set(c, j, x);
        }
        let inv = BigRational::one() / a.get(c, c).clone();
        for j in 0..2 * n {
            let v = a.get(c, j) * &inv;
            a.set(c, j, v);
        }
        for i in 0..n {
            if i != c && !a.get(i, c).is_zero() {
                let f = a.get(i, c).clone();
                for j in 0..2 * n {
                    let v = a.get(i, j) - &f * a.get(c, j);
                    a.set(i, j, v);
                }
            }
        }
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, a.get(i, n + j).clone());
        }
    }
    out
}
