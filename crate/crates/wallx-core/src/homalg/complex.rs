//! The four-term Hom complex computing `Hom` and `Ext^i` between modules
//! over the Jacobi algebra (framed or not).

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::linalg::Matrix;
use super::{check_relations, HomalgError, Rep};
use crate::quiver::{Arrow, Quiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomExt {
    pub hom: usize,
    pub ext1: usize,
    /// Only meaningful for unframed modules.
    pub ext2: usize,
    pub ext3: usize,
}

/// Vertex / arrow bookkeeping shared by both modules.
struct Layout<'a> {
    q: &'a Quiver,
    framed: bool,
}

/// A source/target-typed arrow of the (possibly framed) quiver.
#[derive(Clone, Copy)]
enum Edge {
    Base(Arrow),
    Framing,
}

impl Layout<'_> {
    fn vertices(&self) -> usize {
        self.q.n() + usize::from(self.framed)
    }

    fn edges(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.q.arrows().iter().map(|&a| Edge::Base(a)).collect();
        if self.framed {
            v.push(Edge::Framing);
        }
        v
    }

    fn src(&self, e: Edge) -> usize {
        match e {
            Edge::Base(a) => self.q.source(a),
            Edge::Framing => self.q.n(),
        }
    }

    fn tgt(&self, e: Edge) -> usize {
        match e {
            Edge::Base(a) => self.q.target(a),
            Edge::Framing => 0,
        }
    }
}

fn vdim(r: &Rep, v: usize) -> usize {
    if v < r.dims.len() {
        r.dims[v]
    } else {
        r.framing
    }
}

fn emap<'r>(q: &Quiver, r: &'r Rep, e: Edge) -> &'r Matrix {
    match e {
        Edge::Base(a) => &r.maps[q.arrow_index(a).unwrap()],
        Edge::Framing => &r.frame_map,
    }
}

/// Direct sum of `Hom(E_s, F_t)` blocks; offsets into the flattened vector.
struct Blocks {
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    total: usize,
}

impl Blocks {
    fn new(shapes: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut total = 0;
        for &(r, c) in &shapes {
            offsets.push(total);
            total += r * c;
        }
        Blocks { shapes, offsets, total }
    }

    fn unit(&self, idx: usize) -> (usize, Matrix) {
        let b = self.offsets.partition_point(|&o| o <= idx) - 1;
        let (r, c) = self.shapes[b];
        let local = idx - self.offsets[b];
        let mut m = Matrix::zeros(r, c);
        m.set(local / c, local % c, BigRational::one());
        (b, m)
    }

    fn write(&self, col: &mut [BigRational], b: usize, m: &Matrix) {
        for (k, v) in m.entries().iter().enumerate() {
            if !v.is_zero() {
                col[self.offsets[b] + k] += v;
            }
        }
    }
}

/// Assembles a linear map column by column.
fn assemble(dom: &Blocks, cod: &Blocks, image: impl Fn(usize, &Matrix, &mut Vec<BigRational>)) -> Matrix {
    let mut m = Matrix::zeros(cod.total, dom.total);
    for j in 0..dom.total {
        let (b, unit) = dom.unit(j);
        let mut col = vec![BigRational::zero(); cod.total];
        image(b, &unit, &mut col);
        for (i, v) in col.into_iter().enumerate() {
            if !v.is_zero() {
                m.set(i, j, v);
            }
        }
    }
    m
}

pub(crate) struct HomComplex {
    pub d0: Matrix,
    pub d1: Matrix,
    pub d2: Matrix,
    pub dims: [usize; 4],
}

pub(crate) fn hom_complex(q: &Quiver, e: &Rep, f: &Rep) -> Result<HomComplex, HomalgError> {
    if e.framed != f.framed || e.dims.len() != q.n() || f.dims.len() != q.n() {
        return Err(HomalgError::QuiverMismatch(
            "modules are over different quivers".into(),
        ));
    }
    e.check_shapes(q)?;
    f.check_shapes(q)?;
    check_relations(q, e)?;
    check_relations(q, f)?;
    let lay = Layout { q, framed: e.framed };
    let edges = lay.edges();
    let base: Vec<Arrow> = q.arrows().to_vec();

    let t0 = Blocks::new((0..lay.vertices()).map(|v| (vdim(f, v), vdim(e, v))).collect());
    let t1 = Blocks::new(
        edges.iter().map(|&b| (vdim(f, lay.tgt(b)), vdim(e, lay.src(b)))).collect(),
    );
    let t2 = Blocks::new(
        base.iter().map(|&a| (f.dims[q.source(a)], e.dims[q.target(a)])).collect(),
    );
    let t3 = Blocks::new((0..q.n()).map(|v| (f.dims[v], e.dims[v])).collect());

    // d0(φ)_b = F(b)φ_src − φ_tgt E(b)
    let d0 = assemble(&t0, &t1, |v, phi, col| {
        for (bi, &b) in edges.iter().enumerate() {
            if lay.src(b) == v {
                t1.write(col, bi, &emap(q, f, b).mul(phi));
            }
            if lay.tgt(b) == v {
                t1.write(col, bi, &phi.mul(emap(q, e, b)).scale(&-BigRational::one()));
            }
        }
    });

    // d1(ψ)_a = Σ sign Σ_j F(after j) ψ_{p_j} E(before j) over the terms of ∂_a ω.
    let derivs: Vec<Vec<(i8, Vec<Arrow>)>> = base.iter().map(|&a| q.cyclic_derivative(a)).collect();
    let d1 = assemble(&t1, &t2, |bi, psi, col| {
        let Edge::Base(b) = edges[bi] else {
            return;
        };
        for (ai, terms) in derivs.iter().enumerate() {
            for (sign, path) in terms {
                for (j, &pj) in path.iter().enumerate() {
                    if pj != b {
                        continue;
                    }
                    let before = e.path_matrix(q, &path[..j], q.source(path[0]));
                    let after = f.path_matrix(q, &path[j + 1..], q.target(pj));
                    let mut m = after.mul(psi).mul(&before);
                    if *sign < 0 {
                        m = m.scale(&-BigRational::one());
                    }
                    t2.write(col, ai, &m);
                }
            }
        }
    });

    // d2(χ)_k = Σ_{tgt a = k} F(a)χ_a − Σ_{src a = k} χ_a E(a)
    let d2 = assemble(&t2, &t3, |ai, chi, col| {
        let a = base[ai];
        let fa = &f.maps[ai];
        let ea = &e.maps[ai];
        t3.write(col, q.target(a), &fa.mul(chi));
        t3.write(col, q.source(a), &chi.mul(ea).scale(&-BigRational::one()));
    });

    if !d1.mul(&d0).is_zero() || !d2.mul(&d1).is_zero() {
        return Err(HomalgError::NotAComplex);
    }
    Ok(HomComplex { d0, d1, d2, dims: [t0.total, t1.total, t2.total, t3.total] })
}

/// Dimensions of the cohomology of the Hom complex.
pub fn hom_ext(q: &Quiver, e: &Rep, f: &Rep) -> Result<HomExt, HomalgError> {
    let c = hom_complex(q, e, f)?;
    let (r0, r1, r2) = (c.d0.rank(), c.d1.rank(), c.d2.rank());
    Ok(HomExt {
        hom: c.dims[0] - r0,
        ext1: c.dims[1] - r1 - r0,
        ext2: c.dims[2] - r2 - r1,
        ext3: c.dims[3] - r2,
    })
}
