//! JSON formats and exact rational parsing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homalg::linalg::Matrix;
use crate::homalg::Rep;
use crate::quiver::{Arrow, Quiver};
use crate::series::{Series, SheafTable};
use crate::toric::{Cell, Divisor, Geometry, ToricError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("not an exact rational: {0:?}")]
    Rational(String),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },
}

fn json_err(e: serde_json::Error) -> IoError {
    IoError::Json(e.to_string())
}

/// Parses `"p/q"` or an integer. Decimals, exponents and zero denominators
/// are rejected.
pub fn parse_rational(s: &str) -> Result<BigRational, IoError> {
    let bad = || IoError::Rational(s.to_string());
    let t = s.trim();
    let int = |x: &str| -> Result<BigInt, IoError> {
        let body = x.strip_prefix(['-', '+']).unwrap_or(x);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        x.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (int(p)?, int(q)?);
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(int(t)?)),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Comma-separated rationals, e.g. `-5,39/10`.
pub fn parse_zeta(s: &str) -> Result<Vec<BigRational>, IoError> {
    if s.trim().is_empty() {
        return Err(IoError::Rational(s.to_string()));
    }
    s.split(',').map(parse_rational).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CellJson {
    pub x2: i64,
    pub y: u8,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GeometryJson {
    #[serde(rename = "N0")]
    pub n0: usize,
    #[serde(rename = "N1")]
    pub n1: usize,
    pub sigma: Vec<CellJson>,
}

pub fn geometry_to_json(g: &Geometry) -> GeometryJson {
    GeometryJson {
        n0: g.n0(),
        n1: g.n1(),
        sigma: g.sigma().iter().map(|c| CellJson { x2: c.x2, y: c.y }).collect(),
    }
}

/// Upper bound on N accepted from untrusted input.
pub const MAX_VERTICES: usize = 64;

pub fn parse_geometry_json(s: &str) -> Result<Geometry, IoError> {
    let j: GeometryJson = serde_json::from_str(s).map_err(json_err)?;
    if j.n0.saturating_add(j.n1) > MAX_VERTICES {
        return Err(IoError::Invalid { what: "geometry", why: format!("N exceeds {MAX_VERTICES}") });
    }
    Ok(Geometry::new(j.n0, j.n1, j.sigma.iter().map(|c| Cell { x2: c.x2, y: c.y }).collect())?)
}

/// A bare σ list `[{"x2":..,"y":..}, …]`.
pub fn parse_sigma_json(s: &str) -> Result<Vec<Cell>, IoError> {
    let v: Vec<CellJson> = serde_json::from_str(s).map_err(json_err)?;
    Ok(v.into_iter().map(|c| Cell { x2: c.x2, y: c.y }).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DivisorJson {
    pub row1: Vec<i64>,
    pub row0: Vec<i64>,
}

pub fn divisor_to_json(d: &Divisor) -> DivisorJson {
    DivisorJson { row1: d.row1.clone(), row0: d.row0.clone() }
}

pub fn parse_divisor_json(s: &str, g: &Geometry) -> Result<Divisor, IoError> {
    let j: DivisorJson = serde_json::from_str(s).map_err(json_err)?;
    let d = Divisor { row1: j.row1, row0: j.row0 };
    if !d.fits(g) {
        return Err(IoError::Invalid { what: "divisor", why: "row lengths do not match the trapezoid".into() });
    }
    Ok(d)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub sign: i8,
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct QuiverJson {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Ir")]
    pub ir: Vec<usize>,
    pub arrows: Vec<ArrowJson>,
    pub potential: Vec<TermJson>,
}

pub fn quiver_to_json(q: &Quiver) -> QuiverJson {
    QuiverJson {
        n: q.n(),
        ir: q.ir(),
        arrows: q
            .arrows()
            .iter()
            .map(|&a| ArrowJson { id: a.to_string(), from: q.source(a), to: q.target(a) })
            .collect(),
        potential: q
            .potential()
            .iter()
            .map(|t| TermJson { sign: t.sign, cycle: t.cycle.iter().map(|a| a.to_string()).collect() })
            .collect(),
    }
}

/// Parses a quiver document and checks it against the quiver rebuilt from `Ir`.
pub fn parse_quiver_json(s: &str) -> Result<Quiver, IoError> {
    let j: QuiverJson = serde_json::from_str(s).map_err(json_err)?;
    let invalid = |why: String| IoError::Invalid { what: "quiver", why };
    if j.n == 0 || j.n > MAX_VERTICES {
        return Err(invalid(format!("N must be in 1..={MAX_VERTICES}")));
    }
    let mut tau = vec![-1i8; j.n];
    for &k in &j.ir {
        *tau.get_mut(k).ok_or_else(|| invalid(format!("vertex {k} out of range")))? = 1;
    }
    let q = Quiver::from_tau(&tau).map_err(|e| invalid(e.to_string()))?;
    let expect = quiver_to_json(&q);
    let mut got_arrows = j.arrows.clone();
    let mut exp_arrows = expect.arrows.clone();
    got_arrows.sort_by(|a, b| a.id.cmp(&b.id));
    exp_arrows.sort_by(|a, b| a.id.cmp(&b.id));
    if got_arrows != exp_arrows {
        return Err(invalid("arrow list does not match Ir".into()));
    }
    for t in &j.potential {
        for id in &t.cycle {
            q.parse_arrow(id).map_err(|e| invalid(e.to_string()))?;
        }
    }
    Ok(q)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SeriesTermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub vars: usize,
    pub degree: u32,
    pub terms: Vec<SeriesTermJson>,
}

pub fn series_to_json(s: &Series) -> SeriesJson {
    SeriesJson {
        vars: s.nvars(),
        degree: s.cap(),
        terms: s
            .terms()
            .iter()
            .map(|(e, c)| SeriesTermJson { exp: e.clone(), coeff: c.to_string() })
            .collect(),
    }
}

pub const MAX_SERIES_DEGREE: u32 = 64;

pub fn parse_series_json(s: &str) -> Result<Series, IoError> {
    let j: SeriesJson = serde_json::from_str(s).map_err(json_err)?;
    let invalid = |why: String| IoError::Invalid { what: "series", why };
    if j.vars == 0 || j.vars > MAX_VERTICES || j.degree > MAX_SERIES_DEGREE {
        return Err(invalid("vars or degree out of range".into()));
    }
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in j.terms {
        if t.exp.len() != j.vars {
            return Err(invalid(format!("exponent of length {} for {} vars", t.exp.len(), j.vars)));
        }
        if t.exp.iter().map(|&x| x as u64).sum::<u64>() > j.degree as u64 {
            return Err(invalid("exponent exceeds the degree cap".into()));
        }
        let body = t.coeff.strip_prefix('-').unwrap_or(&t.coeff);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid(format!("coefficient {:?} is not a decimal integer", t.coeff)));
        }
        let c: BigInt = t.coeff.parse().map_err(|_| invalid(format!("bad coefficient {:?}", t.coeff)))?;
        terms.push((t.exp, c));
    }
    Series::from_terms(j.vars, j.degree, terms).map_err(|e| invalid(e.to_string()))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SheafTermJson {
    pub n: u32,
    pub beta: Vec<i64>,
    pub coeff: String,
}

pub fn sheaf_to_json(t: &SheafTable) -> Vec<SheafTermJson> {
    t.iter()
        .map(|((n, beta), c)| SheafTermJson { n: *n, beta: beta.clone(), coeff: c.to_string() })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub id: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RepJson {
    pub framed: bool,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub framing: usize,
    pub arrows: Vec<MatrixJson>,
    #[serde(default)]
    pub frame_map: Vec<Vec<String>>,
}

fn matrix_to_json(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(format_rational).collect()).collect()
}

pub fn rep_to_json(q: &Quiver, r: &Rep) -> RepJson {
    RepJson {
        framed: r.framed,
        dims: r.dims.clone(),
        framing: r.framing,
        arrows: q
            .arrows()
            .iter()
            .zip(&r.maps)
            .map(|(a, m)| MatrixJson { id: a.to_string(), matrix: matrix_to_json(m) })
            .collect(),
        frame_map: matrix_to_json(&r.frame_map),
    }
}

/// Largest per-vertex dimension accepted from input.
pub const MAX_REP_DIM: usize = 32;

fn matrix_from_json(rows: &[Vec<String>], r: usize, c: usize, what: &str) -> Result<Matrix, IoError> {
    let invalid = |why: String| IoError::Invalid { what: "module", why };
    // An r×0 matrix is written as r empty rows or as no rows at all.
    if c == 0 && (rows.is_empty() || rows.len() == r) && rows.iter().all(|x| x.is_empty()) {
        return Ok(Matrix::zeros(r, 0));
    }
    if rows.len() != r {
        return Err(invalid(format!("{what}: expected {r} rows, got {}", rows.len())));
    }
    let mut parsed = Vec::with_capacity(r);
    for row in rows {
        if row.len() != c {
            return Err(invalid(format!("{what}: expected {c} columns")));
        }
        parsed.push(row.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>()?);
    }
    Matrix::from_rows(parsed, c).ok_or_else(|| invalid(format!("{what}: ragged matrix")))
}

pub fn parse_rep_json(s: &str, q: &Quiver) -> Result<Rep, IoError> {
    let j: RepJson = serde_json::from_str(s).map_err(json_err)?;
    let invalid = |why: String| IoError::Invalid { what: "module", why };
    if j.dims.len() != q.n() {
        return Err(invalid(format!("{} dimensions for {} vertices", j.dims.len(), q.n())));
    }
    if j.dims.iter().any(|&d| d > MAX_REP_DIM) || j.framing > MAX_REP_DIM {
        return Err(invalid(format!("dimensions above {MAX_REP_DIM}")));
    }
    if !j.framed && j.framing != 0 {
        return Err(invalid("unframed module with a framing space".into()));
    }
    let mut r = Rep::zero(q, j.dims.clone());
    let mut seen = vec![false; q.arrows().len()];
    for m in &j.arrows {
        let a = q.parse_arrow(&m.id).map_err(|e| invalid(e.to_string()))?;
        let idx = q.arrow_index(a).unwrap();
        if seen[idx] {
            return Err(invalid(format!("arrow {} listed twice", m.id)));
        }
        seen[idx] = true;
        r.maps[idx] = matrix_from_json(&m.matrix, j.dims[q.target(a)], j.dims[q.source(a)], &m.id)?;
    }
    r.framed = j.framed;
    r.framing = j.framing;
    r.frame_map = matrix_from_json(&j.frame_map, j.dims[0], j.framing, "frame_map")?;
    Ok(r)
}

/// Parses an arrow word such as `h+1/2,h-3/2`.
pub fn parse_word(s: &str, q: &Quiver) -> Result<Vec<Arrow>, IoError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| q.parse_arrow(t).map_err(|e| IoError::Invalid { what: "word", why: e.to_string() }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-5/10").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(format_rational(&parse_rational("39/10").unwrap()), "39/10");
        for bad in ["0.5", "1e3", "1/0", "", "/", "1/", "--1", "1 /2x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }
}
