//! The quiver with potential attached to a sign function τ, its framing,
//! and normal forms of paths.
//!
//! Words are stored in traversal order: the first arrow is applied first.
//! Composition `b∘a` therefore corresponds to the word `[a, b]`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::toric::{Geometry, Half};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("tau has an odd number of -1 entries ({0})")]
    OddRhombusCount(usize),
    #[error("no consistent sign assignment for the potential")]
    SignSystemInfeasible,
    #[error("word is not composable at position {0}")]
    NotComposable(usize),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("tau must be non-empty with entries +1/-1")]
    BadTau,
}

/// Arrow labels. `HPlus(j)` is `h⁺_{j+½}: j → j+1`, `HMinus(j)` is
/// `h⁻_{j+½}: j+1 → j`, `Loop(k)` is `r_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    HPlus(usize),
    HMinus(usize),
    Loop(usize),
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Arrow::HPlus(j) => write!(f, "h+{}", Half::plus_half(j as i64)),
            Arrow::HMinus(j) => write!(f, "h-{}", Half::plus_half(j as i64)),
            Arrow::Loop(k) => write!(f, "r{k}"),
        }
    }
}

impl Arrow {
    pub fn parse(s: &str) -> Option<Arrow> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("h+") {
            let h = Half::parse(rest).ok()?;
            h.is_proper_half().then(|| Arrow::HPlus(((h.0 - 1) / 2) as usize))
        } else if let Some(rest) = s.strip_prefix("h-") {
            let h = Half::parse(rest).ok()?;
            h.is_proper_half().then(|| Arrow::HMinus(((h.0 - 1) / 2) as usize))
        } else if let Some(rest) = s.strip_prefix('r') {
            rest.parse().ok().map(Arrow::Loop)
        } else {
            None
        }
    }
}

/// A two-sided relation `lhs = rhs` between parallel paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub family: u8,
    pub lhs: Vec<Arrow>,
    pub rhs: Vec<Arrow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialTerm {
    pub sign: i8,
    pub cycle: Vec<Arrow>,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    n: usize,
    ir: Vec<bool>,
    /// Row (σ_y) of edge `j + ½`; decides whether a backtrack is `Z` or `W`.
    edge_rows: Vec<u8>,
    arrows: Vec<Arrow>,
    index: HashMap<Arrow, usize>,
    relations: Vec<Relation>,
    potential: Vec<PotentialTerm>,
}

impl Quiver {
    pub fn from_geometry(g: &Geometry) -> Self {
        let rows = g.sigma().iter().map(|c| c.y).collect();
        Self::build(g.ir_mask().to_vec(), rows).expect("geometric tau is always consistent")
    }

    /// Builds the quiver for a sign function; rows are reconstructed with the
    /// convention that edge `½` lies on row 0.
    pub fn from_tau(tau: &[i8]) -> Result<Self, QuiverError> {
        if tau.is_empty() || tau.iter().any(|&t| t != 1 && t != -1) {
            return Err(QuiverError::BadTau);
        }
        let n = tau.len();
        let minus = tau.iter().filter(|&&t| t == -1).count();
        if minus % 2 == 1 {
            return Err(QuiverError::OddRhombusCount(minus));
        }
        // τ(k) = +1 iff edges k−½ and k+½ share a row.
        let mut rows = vec![0u8; n];
        for k in 1..n {
            rows[k] = if tau[k] == 1 { rows[k - 1] } else { 1 - rows[k - 1] };
        }
        Self::build(tau.iter().map(|&t| t == 1).collect(), rows)
    }

    fn build(ir: Vec<bool>, edge_rows: Vec<u8>) -> Result<Self, QuiverError> {
        let n = ir.len();
        let minus = ir.iter().filter(|&&b| !b).count();
        if minus % 2 == 1 {
            return Err(QuiverError::OddRhombusCount(minus));
        }
        let mut arrows = Vec::with_capacity(2 * n + n - minus);
        for j in 0..n {
            arrows.push(Arrow::HPlus(j));
        }
        for j in 0..n {
            arrows.push(Arrow::HMinus(j));
        }
        for k in 0..n {
            if ir[k] {
                arrows.push(Arrow::Loop(k));
            }
        }
        let index = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut q = Quiver {
            n,
            ir,
            edge_rows,
            arrows,
            index,
            relations: Vec::new(),
            potential: Vec::new(),
        };
        q.relations = q.relation_families();
        q.potential = q.solve_potential()?;
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn in_ir(&self, k: usize) -> bool {
        self.ir[k % self.n]
    }

    pub fn ir(&self) -> Vec<usize> {
        (0..self.n).filter(|&k| self.ir[k]).collect()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, a: Arrow) -> Option<usize> {
        self.index.get(&a).copied()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn potential(&self) -> &[PotentialTerm] {
        &self.potential
    }

    pub fn edge_row(&self, j: usize) -> u8 {
        self.edge_rows[j % self.n]
    }

    pub fn source(&self, a: Arrow) -> usize {
        match a {
            Arrow::HPlus(j) => j,
            Arrow::HMinus(j) => (j + 1) % self.n,
            Arrow::Loop(k) => k,
        }
    }

    pub fn target(&self, a: Arrow) -> usize {
        match a {
            Arrow::HPlus(j) => (j + 1) % self.n,
            Arrow::HMinus(j) => j,
            Arrow::Loop(k) => k,
        }
    }

    pub fn parse_arrow(&self, s: &str) -> Result<Arrow, QuiverError> {
        Arrow::parse(s)
            .filter(|a| self.index.contains_key(a))
            .ok_or_else(|| QuiverError::UnknownArrow(s.to_string()))
    }

    /// Edge index `j` of the half-integer `i = j + ½ + shift` (mod N).
    fn edge(&self, j: i64) -> usize {
        j.rem_euclid(self.n as i64) as usize
    }

    fn relation_families(&self) -> Vec<Relation> {
        use Arrow::{HMinus as M, HPlus as P, Loop as R};
        let n = self.n as i64;
        let vtx = |k: i64| k.rem_euclid(n) as usize;
        let mut out = Vec::new();
        for j in 0..n {
            // i = j + ½; neighbours i−1, i+1 and vertices i∓½ = j, j+1.
            let (e, em, ep) = (self.edge(j), self.edge(j - 1), self.edge(j + 1));
            let (lo, hi) = (vtx(j), vtx(j + 1));
            let (lo_r, hi_r) = (self.ir[lo], self.ir[hi]);
            let (family, p_lhs, m_lhs) = match (lo_r, hi_r) {
                (true, true) => (1, vec![R(lo), P(e)], vec![M(e), R(lo)]),
                (true, false) => (2, vec![R(lo), P(e)], vec![M(e), R(lo)]),
                (false, true) => (3, vec![M(em), P(em), P(e)], vec![M(e), M(em), P(em)]),
                (false, false) => (4, vec![M(em), P(em), P(e)], vec![M(e), M(em), P(em)]),
            };
            let (p_rhs, m_rhs) = if hi_r {
                (vec![P(e), R(hi)], vec![R(hi), M(e)])
            } else {
                (vec![P(e), P(ep), M(ep)], vec![P(ep), M(ep), M(e)])
            };
            out.push(Relation { family, lhs: p_lhs, rhs: p_rhs });
            out.push(Relation { family, lhs: m_lhs, rhs: m_rhs });
        }
        for k in 0..n {
            if self.ir[vtx(k)] {
                out.push(Relation {
                    family: 5,
                    lhs: vec![M(self.edge(k - 1)), P(self.edge(k - 1))],
                    rhs: vec![P(self.edge(k)), M(self.edge(k))],
                });
            }
        }
        out
    }

    /// Potential terms, with signs found by propagating "each arrow occurs
    /// once with each sign" through the term graph.
    fn solve_potential(&self) -> Result<Vec<PotentialTerm>, QuiverError> {
        use Arrow::{HMinus as M, HPlus as P, Loop as R};
        let n = self.n;
        let lp = |k: usize| vec![P(k), M(k)]; // ℓ⁺_k: k → k+1 → k
        let lm = |k: usize| {
            let e = (k + n - 1) % n;
            vec![M(e), P(e)] // ℓ⁻_k: k → k−1 → k
        };
        let mut cycles = Vec::new();
        for k in 0..n {
            if self.ir[k] {
                cycles.push([lp(k), vec![R(k)]].concat());
                cycles.push([lm(k), vec![R(k)]].concat());
            } else {
                cycles.push([lm(k), lp(k)].concat());
            }
        }
        let mut occurrences: BTreeMap<Arrow, Vec<usize>> = BTreeMap::new();
        for (t, c) in cycles.iter().enumerate() {
            for &a in c {
                occurrences.entry(a).or_default().push(t);
            }
        }
        let mut adj = vec![Vec::new(); cycles.len()];
        for ts in occurrences.values() {
            if ts.len() != 2 || ts[0] == ts[1] {
                return Err(QuiverError::SignSystemInfeasible);
            }
            adj[ts[0]].push(ts[1]);
            adj[ts[1]].push(ts[0]);
        }
        let mut sign = vec![0i8; cycles.len()];
        for start in 0..cycles.len() {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for &u in &adj[t] {
                    if sign[u] == 0 {
                        sign[u] = -sign[t];
                        queue.push_back(u);
                    } else if sign[u] == sign[t] {
                        return Err(QuiverError::SignSystemInfeasible);
                    }
                }
            }
        }
        Ok(cycles
            .into_iter()
            .zip(sign)
            .map(|(cycle, sign)| PotentialTerm { sign, cycle })
            .collect())
    }

    /// Cyclic derivative `∂_a ω` as signed paths from `target(a)` to `source(a)`.
    pub fn cyclic_derivative(&self, a: Arrow) -> Vec<(i8, Vec<Arrow>)> {
        let mut out = Vec::new();
        for term in &self.potential {
            let c = &term.cycle;
            for p in 0..c.len() {
                if c[p] == a {
                    let rest: Vec<Arrow> = c[p + 1..].iter().chain(&c[..p]).copied().collect();
                    out.push((term.sign, rest));
                }
            }
        }
        out
    }

    /// Checks that a word is composable and returns its endpoints.
    pub fn endpoints(&self, word: &[Arrow]) -> Result<(usize, usize), QuiverError> {
        let first = *word.first().ok_or(QuiverError::NotComposable(0))?;
        let mut at = self.source(first);
        for (i, &a) in word.iter().enumerate() {
            if !self.index.contains_key(&a) {
                return Err(QuiverError::UnknownArrow(a.to_string()));
            }
            if self.source(a) != at {
                return Err(QuiverError::NotComposable(i));
            }
            at = self.target(a);
        }
        Ok((self.source(first), at))
    }

    /// `#(arrows i → j)` for all ordered pairs.
    pub fn adjacency_counts(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for &a in &self.arrows {
            m[self.source(a)][self.target(a)] += 1;
        }
        m
    }

    /// Whether a backtrack over edge `j` or a loop at `k` is the central `Z`.
    fn backtrack_is_z(&self, j: usize) -> bool {
        self.edge_rows[j % self.n] == 1
    }

    fn loop_is_z(&self, k: usize) -> bool {
        // r_k has the divisor of the full row opposite to its neighbours.
        self.edge_rows[k % self.n] == 0
    }

    /// Left action `a · p` (apply `a` after `p`). `None` if not composable.
    pub fn act(&self, a: Arrow, p: &PathNF) -> Option<PathNF> {
        if self.source(a) != p.target || p.n != self.n {
            return None;
        }
        let mut q = p.clone();
        let bump = |q: &mut PathNF, z: bool| {
            if z {
                q.z += 1
            } else {
                q.w += 1
            }
        };
        match a {
            Arrow::HPlus(j) => {
                if p.winding < 0 {
                    bump(&mut q, self.backtrack_is_z(j));
                }
                q.winding += 1;
            }
            Arrow::HMinus(j) => {
                if p.winding > 0 {
                    bump(&mut q, self.backtrack_is_z(j));
                }
                q.winding -= 1;
            }
            Arrow::Loop(k) => bump(&mut q, self.loop_is_z(k)),
        }
        q.target = self.target(a);
        Some(q)
    }

    /// All `p` with `a · p = target`.
    pub fn act_inverse(&self, a: Arrow, t: &PathNF) -> Option<PathNF> {
        if self.target(a) != t.target {
            return None;
        }
        let dw = match a {
            Arrow::HPlus(_) => -1,
            Arrow::HMinus(_) => 1,
            Arrow::Loop(_) => 0,
        };
        let base = PathNF {
            n: t.n,
            source: t.source,
            target: self.source(a),
            winding: t.winding + dw,
            z: t.z,
            w: t.w,
        };
        let mut cands = vec![base.clone()];
        if base.z > 0 {
            cands.push(PathNF { z: base.z - 1, ..base.clone() });
        }
        if base.w > 0 {
            cands.push(PathNF { w: base.w - 1, ..base.clone() });
        }
        cands.into_iter().find(|c| self.act(a, c).as_ref() == Some(t))
    }

    pub fn identity(&self, k: usize) -> PathNF {
        PathNF {
            n: self.n,
            source: k,
            target: k,
            winding: 0,
            z: 0,
            w: 0,
        }
    }

    pub fn normalize_path(&self, source: usize, word: &[Arrow]) -> Result<PathNF, QuiverError> {
        if source >= self.n {
            return Err(QuiverError::BadVertex(source));
        }
        let mut p = self.identity(source);
        for (i, &a) in word.iter().enumerate() {
            if !self.index.contains_key(&a) {
                return Err(QuiverError::UnknownArrow(a.to_string()));
            }
            p = self.act(a, &p).ok_or(QuiverError::NotComposable(i))?;
        }
        Ok(p)
    }

    /// Breadth-first search over normal forms from `e_k`; returns every
    /// reachable form with its minimal word length `≤ max_length`.
    pub fn reachable(&self, k: usize, max_length: usize) -> Vec<(PathNF, usize)> {
        let mut seen: HashMap<PathNF, usize> = HashMap::new();
        let mut order = Vec::new();
        let start = self.identity(k);
        seen.insert(start.clone(), 0);
        order.push(start.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let d = seen[&p];
            if d == max_length {
                continue;
            }
            for &a in &self.arrows {
                if let Some(q) = self.act(a, &p) {
                    if !seen.contains_key(&q) {
                        seen.insert(q.clone(), d + 1);
                        order.push(q.clone());
                        queue.push_back(q);
                    }
                }
            }
        }
        order.into_iter().map(|p| {
            let d = seen[&p];
            (p, d)
        }).collect()
    }

    /// Basis of `e_{k'} A e_k` up to word length `max_length`, sorted.
    pub fn path_basis(&self, k: usize, k2: usize, max_length: usize) -> Result<Vec<PathNF>, QuiverError> {
        if k >= self.n {
            return Err(QuiverError::BadVertex(k));
        }
        if k2 >= self.n {
            return Err(QuiverError::BadVertex(k2));
        }
        let mut v: Vec<PathNF> = self
            .reachable(k, max_length)
            .into_iter()
            .filter(|(p, _)| p.target == k2)
            .map(|(p, _)| p)
            .collect();
        v.sort();
        Ok(v)
    }

    pub fn frame(&self) -> FramedQuiver {
        FramedQuiver { base: self.clone() }
    }
}

/// Adds vertex ∞ (index `N`) and one arrow `∞ → 0`.
#[derive(Clone, Debug)]
pub struct FramedQuiver {
    pub base: Quiver,
}

impl FramedQuiver {
    pub fn vertex_count(&self) -> usize {
        self.base.n + 1
    }

    pub fn arrow_count(&self) -> usize {
        self.base.arrows.len() + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    X,
    Y,
}

/// Normal form `P_red ∘ Z^z ∘ W^w`, where `P_red` is the reduced walk of
/// signed length `winding` from `source` (positive = X direction).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathNF {
    pub n: usize,
    pub source: usize,
    pub target: usize,
    pub winding: i64,
    pub z: u32,
    pub w: u32,
}

impl PathNF {
    pub fn branch(&self) -> Branch {
        if self.winding < 0 {
            Branch::Y
        } else {
            Branch::X
        }
    }

    /// Length of the connector `X_{k,k'}` or `Y_{k,k'}`.
    pub fn connector_len(&self) -> usize {
        let n = self.n as i64;
        let (k, k2) = (self.source as i64, self.target as i64);
        match self.branch() {
            Branch::X => (k2 - k).rem_euclid(n) as usize,
            Branch::Y => (k - k2).rem_euclid(n) as usize,
        }
    }

    /// Power of the loop `X_{k'}` or `Y_{k'}`.
    pub fn loop_power(&self) -> u64 {
        (self.winding.unsigned_abs() - self.connector_len() as u64) / self.n as u64
    }

    /// Grading with `deg h = 1`, `deg r = 2`; strictly increases along arrows.
    pub fn degree(&self) -> u64 {
        self.winding.unsigned_abs() + 2 * (self.z as u64 + self.w as u64)
    }
}

impl fmt::Display for PathNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}->{} {:?}^{} Z^{} W^{}",
            self.source,
            self.target,
            self.branch(),
            self.loop_power(),
            self.z,
            self.w
        )
    }
}

/// The paths of length ≤ `len` starting at vertex `k` (as words).
pub fn words_from(q: &Quiver, k: usize, len: usize) -> Vec<Vec<Arrow>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<Arrow>)> = vec![(k, Vec::new())];
    for _ in 0..len {
        let mut next = Vec::new();
        for (at, w) in &frontier {
            for &a in q.arrows() {
                if q.source(a) == *at {
                    let mut w2 = w.clone();
                    w2.push(a);
                    out.push(w2.clone());
                    next.push((q.target(a), w2));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Unordered relation pairs, for comparing families with derivatives.
pub fn relation_set(rels: impl IntoIterator<Item = (Vec<Arrow>, Vec<Arrow>)>) -> BTreeSet<(Vec<Arrow>, Vec<Arrow>)> {
    rels.into_iter()
        .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
        .collect()
}

/// The relations obtained from `∂_a ω` for every arrow, as `(+ part, − part)`.
pub fn derivative_relations(q: &Quiver) -> Vec<(Arrow, Vec<Arrow>, Vec<Arrow>)> {
    q.arrows()
        .iter()
        .filter_map(|&a| {
            let d = q.cyclic_derivative(a);
            let plus = d.iter().find(|(s, _)| *s > 0)?.1.clone();
            let minus = d.iter().find(|(s, _)| *s < 0)?.1.clone();
            Some((a, plus, minus))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::presets;

    #[test]
    fn arrow_labels_roundtrip() {
        for a in [Arrow::HPlus(0), Arrow::HMinus(3), Arrow::Loop(2)] {
            assert_eq!(Arrow::parse(&a.to_string()), Some(a));
        }
        assert_eq!(Arrow::HPlus(2).to_string(), "h+5/2");
    }

    #[test]
    fn tau_rows_match_geometry() {
        for g in [presets::t42(), presets::conifold(), presets::t31()] {
            let a = Quiver::from_geometry(&g);
            let b = Quiver::from_tau(&g.tau()).unwrap();
            assert_eq!(a.arrows(), b.arrows());
            assert_eq!(a.relations(), b.relations());
        }
    }

    #[test]
    fn odd_tau_rejected() {
        assert_eq!(
            Quiver::from_tau(&[1, -1]).unwrap_err(),
            QuiverError::OddRhombusCount(1)
        );
    }
}
