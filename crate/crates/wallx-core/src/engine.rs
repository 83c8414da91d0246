//! Wall-crossing engine: partition functions at generic parameters assembled
//! from wall factors, the closed PT product, and genus-0 GV invariants.
//!
//! Crossing the wall of a real root `α` from the side `ζ·α > 0` to the side
//! `ζ·α < 0` multiplies the Euler generating function by
//! `(1 − ε(α) q^α)^{−ε(α) α₀}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::crystal;
use crate::quiver::Quiver;
use crate::rootlat::{self, Family, Root, RootError};
use crate::series::{self, binomial_factor, macmahon, Orientation, Series, SeriesError, SheafTable};
use crate::toric::Geometry;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("mode {mode} requires {need}")]
    ModeMismatch { mode: &'static str, need: &'static str },
    #[error("parameter has {got} entries, geometry has {expected} vertices")]
    Dimension { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    RelativeToCyclic,
    RelativeToTrivial,
    AbsoluteWithOracle,
    AbsoluteWithDtpt,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::RelativeToCyclic => "relative_to_cyclic",
            Mode::RelativeToTrivial => "relative_to_trivial",
            Mode::AbsoluteWithOracle => "absolute_with_oracle",
            Mode::AbsoluteWithDtpt => "absolute_with_dtpt",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Mode::RelativeToCyclic, Mode::RelativeToTrivial, Mode::AbsoluteWithOracle, Mode::AbsoluteWithDtpt]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Euler,
    Signed,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Euler => "euler",
            Flavor::Signed => "signed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "euler" => Some(Flavor::Euler),
            "signed" => Some(Flavor::Signed),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PartitionFunctionRequest {
    pub geometry: Geometry,
    pub zeta: Vec<BigRational>,
    pub cap: u32,
    pub mode: Mode,
    pub flavor: Flavor,
}

/// β-orientation under which the signed PT-chamber product reproduces the
/// closed MacMahon product (checked by the acceptance suite).
pub const PINNED_ORIENTATION: Orientation = Orientation::BetaMinus;

/// How the cyclic-chamber closed form is assembled from its three pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Assembly {
    /// Power of `M(1, q^δ)` as a multiple of `N`: `+1` or `−1`.
    pub macmahon_sign: i8,
    /// Whether the DT→cyclic crossing factors multiply (`true`) or divide.
    pub crossing_multiplies: bool,
}

pub const ASSEMBLY_CANDIDATES: [Assembly; 4] = [
    Assembly { macmahon_sign: 1, crossing_multiplies: true },
    Assembly { macmahon_sign: 1, crossing_multiplies: false },
    Assembly { macmahon_sign: -1, crossing_multiplies: true },
    Assembly { macmahon_sign: -1, crossing_multiplies: false },
];

/// The assembly fixed by matching the crystal oracle on the conifold at cap 4.
pub const FROZEN_ASSEMBLY: Assembly = Assembly { macmahon_sign: 1, crossing_multiplies: true };

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub geometry_hash: String,
    pub mode: String,
    pub orientation: String,
    pub dtpt_used: bool,
}

pub fn provenance(g: &Geometry, mode: &str, dtpt_used: bool) -> Provenance {
    Provenance {
        geometry_hash: g.hash_hex(),
        mode: mode.to_string(),
        orientation: PINNED_ORIENTATION.name().to_string(),
        dtpt_used,
    }
}

fn to_u32(v: &[i64]) -> Vec<u32> {
    v.iter().map(|&x| x as u32).collect()
}

/// `(1 − ε(α) q^α)^{−ε(α) α₀}`.
pub fn wall_factor_eu(ir: &[bool], alpha: &[i64], cap: u32) -> Result<Series, EngineError> {
    let eps = rootlat::epsilon(ir, alpha)?;
    let a0 = alpha[0];
    if a0 == 0 {
        return Ok(Series::one(alpha.len(), cap));
    }
    Ok(binomial_factor(-eps, &to_u32(alpha), -(eps as i64) * a0, cap)?)
}

fn roots_within(nv: usize, cap: u32) -> Vec<Root> {
    rootlat::positive_real_roots(nv, cap as i64)
}

/// `ζ·α ≠ 0` for every real root of height `≤ cap`, and `Σζ ≠ 0`.
pub fn check_generic_to(z: &[BigRational], cap: u32) -> Result<(), EngineError> {
    if rootlat::param_sum(z).is_zero() {
        return Err(RootError::OnImaginaryWall.into());
    }
    for r in roots_within(z.len(), cap) {
        if rootlat::pair(&r.coords, z).is_zero() {
            return Err(RootError::OnWall(r.coords).into());
        }
    }
    Ok(())
}

/// Product of wall factors (power `e = ±1`) over roots of height `≤ cap`
/// selected by `keep(ζ·α)`.
fn product(ir: &[bool], roots: &[Root], cap: u32, e: i64, keep: impl Fn(&Root) -> bool) -> Result<Series, EngineError> {
    let nv = ir.len();
    let mut out = Series::one(nv, cap);
    for r in roots.iter().filter(|r| keep(r)) {
        let f = wall_factor_eu(ir, &r.coords, cap)?;
        out = out.mul(&if e < 0 { f.invert()? } else { f })?;
    }
    Ok(out)
}

/// `Z^{eu}_ζ / Z^{eu}_{cyclic}` for `Σζ < 0`.
pub fn ratio_to_cyclic(ir: &[bool], z: &[BigRational], cap: u32) -> Result<Series, EngineError> {
    let roots = roots_within(ir.len(), cap);
    product(ir, &roots, cap, -1, |r| rootlat::pair(&r.coords, z).is_positive())
}

/// `Z^{eu}_ζ` for `Σζ > 0` (the trivial chamber contributes 1).
pub fn from_trivial(ir: &[bool], z: &[BigRational], cap: u32) -> Result<Series, EngineError> {
    let roots = roots_within(ir.len(), cap);
    product(ir, &roots, cap, 1, |r| rootlat::pair(&r.coords, z).is_negative())
}

/// Parameters just above / below the imaginary wall at `(−N+1, 1, …, 1)`.
pub fn pt_dt_params(nv: usize, cap: u32) -> (Vec<BigRational>, Vec<BigRational>) {
    let eps = BigRational::new(BigInt::from(1), BigInt::from(cap as i64 + 1));
    let one = BigRational::from_integer(BigInt::from(1));
    let base = BigRational::from_integer(BigInt::from(1 - nv as i64));
    let mut plus = vec![one; nv];
    let mut minus = plus.clone();
    plus[0] = &base + &eps;
    minus[0] = base - eps;
    (plus, minus)
}

/// The cyclic-chamber generating function assembled from the point-class
/// MacMahon factor, the PT product and the DT→cyclic crossings.
pub fn cyclic_closed_form(ir: &[bool], cap: u32, asm: Assembly) -> Result<Series, EngineError> {
    let nv = ir.len();
    let mac = macmahon(&vec![0; nv], &vec![1; nv], 1, 1, asm.macmahon_sign as i64 * nv as i64, cap)?;
    if nv == 1 {
        return Ok(mac);
    }
    let (plus, minus) = pt_dt_params(nv, cap);
    let pt = from_trivial(ir, &plus, cap)?;
    let roots = roots_within(nv, cap);
    let e = if asm.crossing_multiplies { 1 } else { -1 };
    let cross = product(ir, &roots, cap, e, |r| rootlat::pair(&r.coords, &minus).is_positive())?;
    Ok(mac.mul(&pt)?.mul(&cross)?)
}

pub fn z_eu(g: &Geometry, z: &[BigRational], cap: u32, mode: Mode) -> Result<Series, EngineError> {
    let ir = g.ir_mask();
    if z.len() != ir.len() {
        return Err(EngineError::Dimension { expected: ir.len(), got: z.len() });
    }
    check_generic_to(z, cap)?;
    let negative = rootlat::param_sum(z).is_negative();
    match mode {
        Mode::RelativeToTrivial => {
            if negative {
                return Err(EngineError::ModeMismatch { mode: mode.name(), need: "a positive parameter sum" });
            }
            from_trivial(ir, z, cap)
        }
        _ if !negative => Err(EngineError::ModeMismatch { mode: mode.name(), need: "a negative parameter sum" }),
        Mode::RelativeToCyclic => ratio_to_cyclic(ir, z, cap),
        Mode::AbsoluteWithOracle => {
            let base = crystal::enumerate_molten(&Quiver::from_geometry(g), cap);
            Ok(ratio_to_cyclic(ir, z, cap)?.mul(&base)?)
        }
        Mode::AbsoluteWithDtpt => {
            let base = cyclic_closed_form(ir, cap, FROZEN_ASSEMBLY)?;
            Ok(ratio_to_cyclic(ir, z, cap)?.mul(&base)?)
        }
    }
}

pub fn z_signed(g: &Geometry, z: &[BigRational], cap: u32, mode: Mode) -> Result<Series, EngineError> {
    Ok(series::sign_substitute(&z_eu(g, z, cap, mode)?, g.ir_mask())?)
}

pub fn run(req: &PartitionFunctionRequest) -> Result<Series, EngineError> {
    match req.flavor {
        Flavor::Euler => z_eu(&req.geometry, &req.zeta, req.cap, req.mode),
        Flavor::Signed => z_signed(&req.geometry, &req.zeta, req.cap, req.mode),
    }
}

fn sheaf_mul(a: &SheafTable, b: &SheafTable, cap: u32) -> SheafTable {
    let mut out = SheafTable::new();
    for ((na, ba), ca) in a {
        for ((nb, bb), cb) in b {
            if na + nb > cap {
                continue;
            }
            let beta: Vec<i64> = ba.iter().zip(bb).map(|(x, y)| x + y).collect();
            *out.entry((na + nb, beta)).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `∏_{0<a≤b<N} M(t_{[a,b]}, −q)^{ε(α_{[a,b]})}` with `q`-degree `≤ cap`.
pub fn z_pt_macmahon(ir: &[bool], cap: u32) -> SheafTable {
    let nv = ir.len();
    let mut out = SheafTable::new();
    out.insert((0, vec![0; nv.saturating_sub(1)]), BigInt::from(1));
    for a in 1..nv {
        for b in a..nv {
            let alpha = Root::make(nv, a, b, 0, Family::Plus).coords;
            let eps = rootlat::sign_of(ir, &alpha) as i64;
            let beta: Vec<i64> = (1..nv).map(|k| i64::from(a <= k && k <= b)).collect();
            for n in 1..=cap {
                // (1 − t (−q)^n)^{−n ε} = (1 + s q^n t)^{−n ε}
                let s: i64 = if n % 2 == 1 { 1 } else { -1 };
                let e = -(n as i64) * eps;
                let mut f = SheafTable::new();
                let mut j = 0u32;
                while j * n <= cap {
                    let mut c = series::gen_binomial(e, j);
                    if s < 0 && j % 2 == 1 {
                        c = -c;
                    }
                    if !c.is_zero() {
                        f.insert((j * n, beta.iter().map(|x| x * j as i64).collect()), c);
                    }
                    j += 1;
                }
                out = sheaf_mul(&out, &f, cap);
            }
        }
    }
    out
}

/// Compares the signed PT-chamber product with the closed PT product under
/// an orientation, over every entry whose module monomial has degree `≤ cap`.
/// Returns the mismatching `(n, β)` keys.
pub fn corollary_mismatches(ir: &[bool], cap: u32, o: Orientation) -> Result<Vec<(u32, Vec<i64>)>, EngineError> {
    let nv = ir.len();
    let (plus, _) = pt_dt_params(nv, cap);
    let signed = series::sign_substitute(&from_trivial(ir, &plus, cap)?, ir)?;
    let engine = series::to_sheaf_grading(&signed, o);
    let closed = z_pt_macmahon(ir, cap);
    let mut keys: Vec<&(u32, Vec<i64>)> = engine.keys().chain(closed.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut bad = Vec::new();
    for key in keys {
        let in_range = match o.to_module(key.0, &key.1) {
            Some(v) => v.iter().sum::<u32>() <= cap,
            None => true,
        };
        if !in_range {
            continue;
        }
        let a = engine.get(key).cloned().unwrap_or_default();
        let b = closed.get(key).cloned().unwrap_or_default();
        if a != b {
            bad.push(key.clone());
        }
    }
    Ok(bad)
}

/// The orientations under which [`corollary_mismatches`] is empty.
pub fn matching_orientations(ir: &[bool], cap: u32) -> Result<Vec<Orientation>, EngineError> {
    let mut out = Vec::new();
    for o in [Orientation::BetaMinus, Orientation::BetaPlus] {
        if corollary_mismatches(ir, cap, o)?.is_empty() {
            out.push(o);
        }
    }
    Ok(out)
}

/// The assemblies that reproduce the crystal oracle on `g` at `cap`.
pub fn matching_assemblies(g: &Geometry, cap: u32) -> Result<Vec<Assembly>, EngineError> {
    let oracle = crystal::enumerate_molten(&Quiver::from_geometry(g), cap);
    let mut out = Vec::new();
    for asm in ASSEMBLY_CANDIDATES {
        if cyclic_closed_form(g.ir_mask(), cap, asm)? == oracle {
            out.push(asm);
        }
    }
    Ok(out)
}

/// A root whose derived signed wall factor differs from the
/// `(1 + (−1)^{α₀} q^α)^{ε α₀}` form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisplayMismatch {
    pub root: Vec<i64>,
    pub derived: String,
    pub displayed: String,
}

/// Compares the sign-substituted wall factor of every root on the PT side
/// with the alternative closed display.
pub fn display_mismatches(ir: &[bool], cap: u32) -> Result<Vec<DisplayMismatch>, EngineError> {
    let nv = ir.len();
    let mut out = Vec::new();
    for r in roots_within(nv, cap).into_iter().filter(|r| r.family == Family::Minus) {
        let eps = rootlat::sign_of(ir, &r.coords);
        let a0 = r.coords[0];
        let derived = series::sign_substitute(&wall_factor_eu(ir, &r.coords, cap)?, ir)?;
        let s: i8 = if a0 % 2 == 0 { 1 } else { -1 };
        let displayed = binomial_factor(s, &to_u32(&r.coords), eps as i64 * a0, cap)?;
        if derived != displayed {
            let first = |x: &Series| {
                x.terms()
                    .iter()
                    .find(|(e, _)| e.iter().any(|&v| v > 0))
                    .map(|(e, c)| format!("{c}*q^{e:?}"))
                    .unwrap_or_default()
            };
            out.push(DisplayMismatch { root: r.coords.clone(), derived: first(&derived), displayed: first(&displayed) });
        }
    }
    Ok(out)
}

/// Genus-0 invariants `n_{0,[a,b]} = −ε(α_{[a,b]})`; higher genus vanishes.
pub fn gv_invariants(ir: &[bool]) -> BTreeMap<(u32, usize, usize), i64> {
    let nv = ir.len();
    let mut out = BTreeMap::new();
    for a in 1..nv {
        for b in a..nv {
            let alpha = Root::make(nv, a, b, 0, Family::Plus).coords;
            out.insert((0, a, b), -(rootlat::sign_of(ir, &alpha) as i64));
        }
    }
    out
}
