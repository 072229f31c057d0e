//! Incremental beneath-beyond convex hull in R^d, 2 <= d <= 5.
//!
//! Facets are simplices (d vertices each). Coplanar neighbours are kept as
//! separate triangles; callers that care about geometric facets compare the
//! reduced normals. A point is inserted only when it lies strictly beyond at
//! least one facet, so points on the boundary never become vertices.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{bareiss_det, gcd_reduce, rank_exact, Scalar, Weight};

/// Tolerances of the float arithmetic mode. Exact mode ignores them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative slack of the visibility predicate.
    pub visibility: f64,
    /// Minimum component of a unit 1-norm weight to count as positive.
    pub positivity: f64,
    /// Relative slack when comparing weighted-sum values.
    pub equality: f64,
    /// Relative pivot threshold of the float rank test.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            visibility: 1e-9,
            positivity: 1e-12,
            equality: 1e-7,
            rank: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The point was strictly outside and is now a vertex.
    NewVertex,
    /// The point was inside or on the boundary; nothing changed.
    InteriorOrBoundary,
    /// Fewer than d+1 affinely independent points so far; the point is buffered.
    Pending,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionStatus {
    Full,
    Pending { affine_dim: usize },
}

#[derive(Clone, Debug)]
pub struct HullPoint<S> {
    pub id: usize,
    /// Exact input coordinates.
    pub raw: Vec<BigInt>,
    pub coords: Vec<S>,
}

#[derive(Clone, Debug)]
pub struct Facet<S> {
    pub id: usize,
    /// Sorted point ids spanning the facet hyperplane.
    pub vertex_ids: Vec<usize>,
    /// Interior satisfies `inward_normal · x >= offset`. Gcd-reduced in exact mode.
    pub inward_normal: Vec<S>,
    pub offset: S,
    pub explored: bool,
    /// `neighbors[i]` is the facet sharing every vertex except `vertex_ids[i]`.
    neighbors: Vec<usize>,
    alive: bool,
}

impl<S> Facet<S> {
    pub fn neighbors(&self) -> &[usize] {
        &self.neighbors
    }
}

struct Staged<S> {
    vertex_ids: Vec<usize>,
    normal: Vec<S>,
    offset: S,
    neighbors: Vec<usize>,
}

/// Incremental convex hull over exact (`BigInt`) or float (`f64`) coordinates.
#[derive(Clone, Debug)]
pub struct ConvexHull<S: Scalar> {
    dim: usize,
    tol: Tolerances,
    points: Vec<HullPoint<S>>,
    index: HashMap<Vec<BigInt>, usize>,
    facets: Vec<Facet<S>>,
    unexplored: BTreeSet<usize>,
    pending: Vec<usize>,
    basis: Vec<usize>,
    /// Sum of the initial simplex vertices; strictly interior after scaling.
    interior: Vec<S>,
    interior_weight: S,
    full: bool,
}

impl<S: Scalar> ConvexHull<S> {
    pub fn new(dim: usize) -> Result<Self> {
        Self::with_tolerances(dim, Tolerances::default())
    }

    pub fn with_tolerances(dim: usize, tol: Tolerances) -> Result<Self> {
        if !(2..=5).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(ConvexHull {
            dim,
            tol,
            points: Vec::new(),
            index: HashMap::new(),
            facets: Vec::new(),
            unexplored: BTreeSet::new(),
            pending: Vec::new(),
            basis: Vec::new(),
            interior: Vec::new(),
            interior_weight: S::one(),
            full: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.full
    }

    pub fn status(&self) -> DimensionStatus {
        if self.full {
            DimensionStatus::Full
        } else {
            DimensionStatus::Pending {
                affine_dim: self.affine_dim(),
            }
        }
    }

    /// Dimension of the affine hull of the inserted points (-1 maps to 0).
    pub fn affine_dim(&self) -> usize {
        if self.full {
            self.dim
        } else {
            self.basis.len().saturating_sub(1)
        }
    }

    /// Ids of an affinely independent subset spanning the inserted points.
    pub fn affine_basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn points(&self) -> &[HullPoint<S>] {
        &self.points
    }

    pub fn point(&self, id: usize) -> &HullPoint<S> {
        &self.points[id]
    }

    pub fn find_point(&self, raw: &[BigInt]) -> Option<usize> {
        self.index.get(raw).copied()
    }

    pub fn facet(&self, id: usize) -> Option<&Facet<S>> {
        self.facets.get(id).filter(|f| f.alive)
    }

    /// Live facets in creation order.
    pub fn facets(&self) -> impl Iterator<Item = &Facet<S>> {
        self.facets.iter().filter(|f| f.alive)
    }

    pub fn num_facets(&self) -> usize {
        self.facets().count()
    }

    /// Unexplored live facets in creation order.
    pub fn unexplored_facets(&self) -> Vec<&Facet<S>> {
        self.unexplored.iter().map(|&id| &self.facets[id]).collect()
    }

    pub fn next_unexplored(&self) -> Option<usize> {
        self.unexplored.iter().next().copied()
    }

    pub fn mark_explored(&mut self, id: usize) {
        if let Some(f) = self.facets.get_mut(id) {
            f.explored = true;
        }
        self.unexplored.remove(&id);
    }

    pub fn insert(&mut self, coords: &[i64]) -> Result<(usize, InsertOutcome)> {
        let raw = coords.iter().map(|&c| BigInt::from(c)).collect();
        self.insert_big(raw, None)
    }

    /// Insert a point. `hint` may name a facet the point is expected to be
    /// beyond, which avoids scanning all facets.
    pub fn insert_big(
        &mut self,
        raw: Vec<BigInt>,
        hint: Option<usize>,
    ) -> Result<(usize, InsertOutcome)> {
        if raw.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: raw.len(),
            });
        }
        if let Some(&id) = self.index.get(&raw) {
            return Ok((id, InsertOutcome::InteriorOrBoundary));
        }
        let coords: Vec<S> = raw.iter().map(S::from_bigint).collect();
        if !S::EXACT {
            if let Some(bad) = coords.iter().map(Scalar::to_f64).find(|v| !v.is_finite()) {
                return Err(Error::NonFinite(bad));
            }
        }
        let id = self.points.len();
        self.index.insert(raw.clone(), id);
        self.points.push(HullPoint { id, raw, coords });

        if self.full {
            let outcome = self.insert_full(id, hint);
            return Ok((id, outcome));
        }

        self.pending.push(id);
        if self.extends_basis(id) {
            self.basis.push(id);
        }
        if self.basis.len() < self.dim + 1 {
            return Ok((id, InsertOutcome::Pending));
        }
        self.build_simplex()?;
        let rest: Vec<usize> = std::mem::take(&mut self.pending)
            .into_iter()
            .filter(|q| !self.basis.contains(q))
            .collect();
        let mut outcome = InsertOutcome::NewVertex;
        for q in rest {
            let o = self.insert_full(q, None);
            if q == id {
                outcome = o;
            }
        }
        Ok((id, outcome))
    }

    fn extends_basis(&self, id: usize) -> bool {
        let Some(&origin) = self.basis.first() else {
            return true;
        };
        let o = &self.points[origin].raw;
        let rows: Vec<Vec<BigInt>> = self.basis[1..]
            .iter()
            .chain(std::iter::once(&id))
            .map(|&q| self.points[q].raw.iter().zip(o).map(|(a, b)| a - b).collect())
            .collect();
        rank_exact(&rows) == self.basis.len()
    }

    fn build_simplex(&mut self) -> Result<()> {
        let d = self.dim;
        let mut interior = vec![S::zero(); d];
        for &b in &self.basis {
            for (acc, c) in interior.iter_mut().zip(&self.points[b].coords) {
                *acc = acc.clone() + c.clone();
            }
        }
        self.interior = interior;
        self.interior_weight = S::from_bigint(&BigInt::from(d + 1));

        let base = self.facets.len();
        let mut simplex = Vec::with_capacity(d + 1);
        for skip in 0..=d {
            let mut verts: Vec<usize> = (0..=d)
                .filter(|&j| j != skip)
                .map(|j| self.basis[j])
                .collect();
            verts.sort_unstable();
            let (normal, offset) = self
                .hyperplane(&verts)
                .ok_or(Error::NotFullDimensional {
                    dim: d,
                    affine_dim: d - 1,
                })?;
            // Facet opposite basis[j] is number j.
            let neighbors = verts
                .iter()
                .map(|v| {
                    let j = self.basis.iter().position(|b| b == v).unwrap();
                    base + j
                })
                .collect();
            simplex.push(Staged {
                vertex_ids: verts,
                normal,
                offset,
                neighbors,
            });
        }
        for s in simplex {
            self.push_facet(s);
        }
        self.full = true;
        Ok(())
    }

    fn push_facet(&mut self, s: Staged<S>) -> usize {
        let id = self.facets.len();
        self.facets.push(Facet {
            id,
            vertex_ids: s.vertex_ids,
            inward_normal: s.normal,
            offset: s.offset,
            explored: false,
            neighbors: s.neighbors,
            alive: true,
        });
        self.unexplored.insert(id);
        id
    }

    /// Oriented hyperplane through `verts`, or `None` when degenerate.
    fn hyperplane(&self, verts: &[usize]) -> Option<(Vec<S>, S)> {
        let d = self.dim;
        let v0 = &self.points[verts[0]].coords;
        let rows: Vec<Vec<S>> = verts[1..]
            .iter()
            .map(|&v| {
                self.points[v]
                    .coords
                    .iter()
                    .zip(v0)
                    .map(|(a, b)| a.clone() - b.clone())
                    .collect()
            })
            .collect();
        let mut normal: Vec<S> = (0..d)
            .map(|col| {
                let minor: Vec<Vec<S>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let m = bareiss_det(minor);
                if col % 2 == 1 {
                    -m
                } else {
                    m
                }
            })
            .collect();
        if normal.iter().all(|c| c.is_zero()) {
            return None;
        }
        if S::EXACT {
            let as_big: Vec<BigInt> = normal.iter().filter_map(Scalar::as_bigint).collect();
            let reduced = gcd_reduce(&as_big).ok()?;
            normal = reduced.iter().map(S::from_bigint).collect();
        }
        let mut offset = dot(&normal, v0);
        let side = dot(&normal, &self.interior) - self.interior_weight.clone() * offset.clone();
        let scale = abs_dot(&normal, &self.interior) + offset.to_f64().abs() * (d + 1) as f64;
        match S::sign_tol(&side, 1.0 + scale, self.tol.visibility) {
            Ordering::Greater => {}
            Ordering::Less => {
                normal = normal.into_iter().map(|c| -c).collect();
                offset = -offset;
            }
            Ordering::Equal => return None,
        }
        Some((normal, offset))
    }

    /// `normal · x - offset` for facet `f`.
    pub fn signed_value(&self, f: &Facet<S>, x: &[S]) -> S {
        dot(&f.inward_normal, x) - f.offset.clone()
    }

    fn beyond(&self, f: &Facet<S>, x: &[S]) -> bool {
        let v = self.signed_value(f, x);
        let scale = 1.0 + f.offset.to_f64().abs().max(abs_dot(&f.inward_normal, x));
        S::sign_tol(&v, scale, self.tol.visibility) == Ordering::Less
    }

    fn insert_full(&mut self, id: usize, hint: Option<usize>) -> InsertOutcome {
        let x = self.points[id].coords.clone();
        let start = hint
            .filter(|&h| self.facet(h).is_some_and(|f| self.beyond(f, &x)))
            .or_else(|| self.facets().find(|f| self.beyond(f, &x)).map(|f| f.id));
        let Some(start) = start else {
            return InsertOutcome::InteriorOrBoundary;
        };

        let mut visible: HashSet<usize> = HashSet::from([start]);
        let mut hidden: HashSet<usize> = HashSet::new();
        let mut stack = vec![start];
        let mut horizon: Vec<(Vec<usize>, usize)> = Vec::new();
        while let Some(fid) = stack.pop() {
            let f = &self.facets[fid];
            for (i, &nb) in f.neighbors.iter().enumerate() {
                if visible.contains(&nb) {
                    continue;
                }
                let nb_visible = !hidden.contains(&nb) && self.beyond(&self.facets[nb], &x);
                if nb_visible {
                    visible.insert(nb);
                    stack.push(nb);
                } else {
                    hidden.insert(nb);
                    let ridge: Vec<usize> = f
                        .vertex_ids
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, &v)| v)
                        .collect();
                    horizon.push((ridge, nb));
                }
            }
        }
        // A neighbour first marked hidden may later turn out visible through a
        // different path only if predicates are inconsistent (float mode).
        if horizon.iter().any(|(_, nb)| visible.contains(nb)) {
            log::warn!("inconsistent visibility while inserting point {id}; skipped");
            return InsertOutcome::InteriorOrBoundary;
        }

        let base = self.facets.len();
        let mut staged: Vec<Staged<S>> = Vec::with_capacity(horizon.len());
        for (ridge, nb) in &horizon {
            let mut verts = ridge.clone();
            verts.push(id);
            verts.sort_unstable();
            let Some((normal, offset)) = self.hyperplane(&verts) else {
                log::warn!("degenerate facet while inserting point {id}; skipped");
                return InsertOutcome::InteriorOrBoundary;
            };
            let mut neighbors = vec![usize::MAX; self.dim];
            let pos = verts.iter().position(|&v| v == id).unwrap();
            neighbors[pos] = *nb;
            staged.push(Staged {
                vertex_ids: verts,
                normal,
                offset,
                neighbors,
            });
        }
        let mut open: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for k in 0..staged.len() {
            for t in 0..self.dim {
                if staged[k].vertex_ids[t] == id {
                    continue;
                }
                let key: Vec<usize> = staged[k]
                    .vertex_ids
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != t)
                    .map(|(_, &v)| v)
                    .collect();
                match open.remove(&key) {
                    Some((k2, t2)) => {
                        staged[k].neighbors[t] = base + k2;
                        staged[k2].neighbors[t2] = base + k;
                    }
                    None => {
                        open.insert(key, (k, t));
                    }
                }
            }
        }
        if !open.is_empty() || staged.iter().any(|s| s.neighbors.contains(&usize::MAX)) {
            log::warn!("horizon of point {id} is not a closed cycle; skipped");
            return InsertOutcome::InteriorOrBoundary;
        }

        for &fid in &visible {
            self.facets[fid].alive = false;
            self.unexplored.remove(&fid);
        }
        for (k, (ridge, nb)) in horizon.iter().enumerate() {
            let g = &mut self.facets[*nb];
            let slot = g
                .vertex_ids
                .iter()
                .position(|v| !ridge.contains(v))
                .expect("outside neighbour shares the ridge");
            g.neighbors[slot] = base + k;
        }
        for s in staged {
            self.push_facet(s);
        }
        InsertOutcome::NewVertex
    }

    pub fn facet_weight(&self, id: usize) -> Result<Weight> {
        let f = self.facet(id).ok_or(Error::DegenerateNormal)?;
        S::to_weight(&f.inward_normal)
    }

    /// True iff every component of the inward normal is strictly positive.
    pub fn is_nondominated_facet(&self, id: usize) -> bool {
        self.facet_weight(id)
            .map(|w| w.is_strictly_positive(self.tol.positivity))
            .unwrap_or(false)
    }

    /// Ids of all points that are vertices of the triangulated boundary.
    pub fn boundary_vertex_ids(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .facets()
            .flat_map(|f| f.vertex_ids.iter().copied())
            .collect();
        set.into_iter().collect()
    }

    /// Ids of the extreme points of the hull.
    ///
    /// A boundary vertex is extreme iff the normals of its incident facets
    /// span R^d; vertices left in the middle of a flat face or edge fail this.
    pub fn vertex_ids(&self) -> Vec<usize> {
        if !self.full {
            return Vec::new();
        }
        let mut incident: HashMap<usize, Vec<Vec<S>>> = HashMap::new();
        for f in self.facets() {
            for &v in &f.vertex_ids {
                incident
                    .entry(v)
                    .or_default()
                    .push(f.inward_normal.clone());
            }
        }
        let mut ids: Vec<usize> = incident
            .into_iter()
            .filter(|(_, rows)| S::rank(rows, self.tol.rank) == self.dim)
            .map(|(v, _)| v)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Number of distinct vertex pairs appearing together in a facet.
    pub fn num_edges(&self) -> usize {
        let mut edges = HashSet::new();
        for f in self.facets() {
            for (i, &a) in f.vertex_ids.iter().enumerate() {
                for &b in &f.vertex_ids[i + 1..] {
                    edges.insert((a, b));
                }
            }
        }
        edges.len()
    }

    /// Structural and geometric consistency check, for tests and debugging.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if !self.full {
            return Ok(());
        }
        for f in self.facets() {
            for (i, &nb) in f.neighbors.iter().enumerate() {
                let g = self
                    .facet(nb)
                    .ok_or_else(|| format!("facet {} has dead neighbour {nb}", f.id))?;
                if !g.neighbors.contains(&f.id) {
                    return Err(format!("facet {} -> {nb} not symmetric", f.id));
                }
                let shared = f
                    .vertex_ids
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .all(|(_, v)| g.vertex_ids.contains(v));
                if !shared {
                    return Err(format!("facet {} and {nb} do not share a ridge", f.id));
                }
            }
            for &v in &f.vertex_ids {
                let val = self.signed_value(f, &self.points[v].coords);
                let scale = 1.0 + f.offset.to_f64().abs();
                if S::sign_tol(&val, scale, self.tol.visibility) != Ordering::Equal {
                    return Err(format!("vertex {v} not on facet {}", f.id));
                }
            }
            for p in &self.points {
                if self.beyond(f, &p.coords) {
                    return Err(format!("point {} beyond facet {}", p.id, f.id));
                }
            }
        }
        Ok(())
    }

    /// One line per live facet: `normal_1 ... normal_d | offset | vertex_ids`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for f in self.facets() {
            let normal: Vec<String> = f.inward_normal.iter().map(|c| fmt_scalar(c)).collect();
            let verts: Vec<String> = f.vertex_ids.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(
                out,
                "{} | {} | {}",
                normal.join(" "),
                fmt_scalar(&f.offset),
                verts.join(" ")
            );
        }
        out
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn abs_dot<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.to_f64() * y.to_f64()).abs())
        .sum()
}

fn fmt_scalar<S: Scalar>(v: &S) -> String {
    match v.as_bigint() {
        Some(b) => b.to_string(),
        None => format!("{}", v.to_f64()),
    }
}
