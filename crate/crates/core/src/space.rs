//! Finite models of compact spaces, continuous surjections between them,
//! fibers, and complex measures with their pushforwards.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{pair, C64};

pub const DEFAULT_MERGE_TOL: f64 = 1e-8;
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub label: String,
    pub coords: Vec<C64>,
}

/// A non-empty finite set of labeled points with complex coordinates.
#[derive(Debug, Clone)]
pub struct FiniteSpace {
    points: Vec<Point>,
    by_label: HashMap<String, usize>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

fn coord_cmp(a: &[C64], b: &[C64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn coord_dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn first_re(c: &[C64]) -> f64 {
    c.first().map_or(0.0, |z| z.re)
}

/// First pair of points (in index order of `order`) closer than `tol`, found
/// by a sweep over the coordinates sorted lexicographically.
fn find_close_pair(coords: &[&[C64]], tol: f64) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by(|&a, &b| coord_cmp(coords[a], coords[b]));
    for (k, &i) in order.iter().enumerate() {
        for &j in order[..k].iter().rev() {
            if first_re(coords[j]) < first_re(coords[i]) - tol {
                break;
            }
            if coord_dist(coords[i], coords[j]) <= tol {
                return Some((j.min(i), j.max(i)));
            }
        }
    }
    None
}

impl FiniteSpace {
    /// Validated constructor keeping the given order and labels.
    pub fn new(points: Vec<Point>, merge_tol: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::input("a space needs at least one point"));
        }
        let arity = points[0].coords.len();
        if let Some(p) = points.iter().find(|p| p.coords.len() != arity) {
            return Err(Error::input(format!(
                "point {} has arity {}, expected {arity}",
                p.label,
                p.coords.len()
            )));
        }
        if points.iter().flat_map(|p| &p.coords).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("coordinates must be finite"));
        }
        let mut by_label = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if by_label.insert(p.label.clone(), i).is_some() {
                return Err(Error::validation(format!("duplicate label {}", p.label)));
            }
        }
        let coords: Vec<&[C64]> = points.iter().map(|p| p.coords.as_slice()).collect();
        if let Some((i, j)) = find_close_pair(&coords, merge_tol) {
            return Err(Error::validation(format!(
                "points {} and {} are within {merge_tol:e} of each other",
                points[i].label, points[j].label
            )));
        }
        Ok(FiniteSpace { points, by_label })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.points[0].coords.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn coords(&self, i: usize) -> &[C64] {
        &self.points[i].coords
    }

    pub fn label(&self, i: usize) -> &str {
        &self.points[i].label
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.by_label
            .get(label)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown point {label}")))
    }

    /// The sub-space on `indices`, keeping labels, coordinates and order.
    pub fn subspace(&self, indices: &[usize]) -> Result<FiniteSpace> {
        if indices.is_empty() {
            return Err(Error::input("subset must be non-empty"));
        }
        let mut seen = vec![false; self.len()];
        let mut points = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::input(format!("point index {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::input(format!("point {} listed twice", self.label(i))));
            }
            points.push(self.points[i].clone());
        }
        let by_label = points.iter().enumerate().map(|(i, p)| (p.label.clone(), i)).collect();
        Ok(FiniteSpace { points, by_label })
    }
}

/// Builds a space from raw coordinate tuples: points within `merge_tol`
/// merge, the survivors are sorted lexicographically by coordinates and
/// labeled `p0, p1, ...` in that order.
pub fn make_space(raw: &[Vec<C64>], merge_tol: f64) -> Result<FiniteSpace> {
    make_space_indexed(raw, merge_tol).map(|(s, _)| s)
}

/// As [`make_space`], also returning the index each raw point landed on.
pub fn make_space_indexed(raw: &[Vec<C64>], merge_tol: f64) -> Result<(FiniteSpace, Vec<usize>)> {
    if raw.is_empty() {
        return Err(Error::input("a space needs at least one point"));
    }
    let arity = raw[0].len();
    if raw.iter().any(|c| c.len() != arity) {
        return Err(Error::input("mixed coordinate arity"));
    }
    if raw.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::input("coordinates must be finite"));
    }
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| coord_cmp(&raw[a], &raw[b]).then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    let mut slot = vec![usize::MAX; raw.len()];
    for &i in &order {
        let mut hit = None;
        for (k, &j) in kept.iter().enumerate().rev() {
            if first_re(&raw[j]) < first_re(&raw[i]) - merge_tol {
                break;
            }
            if coord_dist(&raw[i], &raw[j]) <= merge_tol {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => slot[i] = k,
            None => {
                slot[i] = kept.len();
                kept.push(i);
            }
        }
    }
    let points: Vec<Point> = kept
        .iter()
        .enumerate()
        .map(|(k, &i)| Point {
            label: format!("p{k}"),
            coords: raw[i].clone(),
        })
        .collect();
    let by_label = points.iter().enumerate().map(|(i, p)| (p.label.clone(), i)).collect();
    Ok((FiniteSpace { points, by_label }, slot))
}

/// A cover of `base`: over each base point `x`, the tuples `extra[x]` are
/// appended to the coordinates of `x`. Tuples within `merge_tol` of an
/// earlier tuple over the same point merge into it. Points are ordered by
/// base point, then by first appearance, and labeled `{x}:{k}`.
///
/// Returns the space, the projection onto the base, and for each base point
/// the index every raw tuple landed on.
pub fn fibered_space(
    base: &FiniteSpace,
    extra: &[Vec<Vec<C64>>],
    merge_tol: f64,
) -> Result<(FiniteSpace, Vec<usize>, Vec<Vec<usize>>)> {
    if extra.len() != base.len() {
        return Err(Error::input("one tuple list per base point is required"));
    }
    let mut points = Vec::new();
    let mut assignment = Vec::new();
    let mut slots = Vec::with_capacity(base.len());
    for (x, tuples) in extra.iter().enumerate() {
        if tuples.is_empty() {
            return Err(Error::validation(format!("empty fiber over {}", base.label(x))));
        }
        let start = points.len();
        let mut kept: Vec<usize> = Vec::new();
        let mut slot = Vec::with_capacity(tuples.len());
        for (j, t) in tuples.iter().enumerate() {
            match kept.iter().position(|&k| coord_dist(&tuples[k], t) <= merge_tol) {
                Some(k) => slot.push(start + k),
                None => {
                    slot.push(start + kept.len());
                    kept.push(j);
                    let mut coords = base.coords(x).to_vec();
                    coords.extend_from_slice(t);
                    points.push(Point {
                        label: format!("{}:{}", base.label(x), kept.len() - 1),
                        coords,
                    });
                    assignment.push(x);
                }
            }
        }
        slots.push(slot);
    }
    Ok((FiniteSpace::new(points, merge_tol)?, assignment, slots))
}

pub(crate) fn same_space(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A surjection `source -> target` with its fibers precomputed.
#[derive(Debug, Clone)]
pub struct SurjectionMap {
    source: Arc<FiniteSpace>,
    target: Arc<FiniteSpace>,
    assignment: Vec<usize>,
    fibers: Vec<Vec<usize>>,
}

pub fn make_surjection(
    source: Arc<FiniteSpace>,
    target: Arc<FiniteSpace>,
    assignment: Vec<usize>,
) -> Result<SurjectionMap> {
    if assignment.len() != source.len() {
        return Err(Error::input(format!(
            "assignment has {} entries for a source of {} points",
            assignment.len(),
            source.len()
        )));
    }
    let mut fibers = vec![Vec::new(); target.len()];
    for (y, &x) in assignment.iter().enumerate() {
        if x >= target.len() {
            return Err(Error::input(format!("assignment index {x} out of range")));
        }
        fibers[x].push(y);
    }
    if let Some(x) = fibers.iter().position(|f| f.is_empty()) {
        return Err(Error::validation(format!(
            "map is not surjective: target point {} is not hit",
            target.label(x)
        )));
    }
    Ok(SurjectionMap {
        source,
        target,
        assignment,
        fibers,
    })
}

impl SurjectionMap {
    pub fn identity(space: Arc<FiniteSpace>) -> SurjectionMap {
        let n = space.len();
        make_surjection(space.clone(), space, (0..n).collect()).expect("identity is surjective")
    }

    pub fn source(&self) -> &Arc<FiniteSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSpace> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Image of source point `y`.
    pub fn apply(&self, y: usize) -> usize {
        self.assignment[y]
    }

    /// `E_x`: the source points mapped to target point `x`.
    pub fn fiber(&self, x: usize) -> Result<&[usize]> {
        self.fibers
            .get(x)
            .map(|f| f.as_slice())
            .ok_or_else(|| Error::input(format!("target index {x} out of range")))
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    /// Preimage of a set of target points, in source order.
    pub fn preimage(&self, xs: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.target.len()];
        for &x in xs {
            mark[x] = true;
        }
        (0..self.source.len()).filter(|&y| mark[self.assignment[y]]).collect()
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn after(&self, inner: &SurjectionMap) -> Result<SurjectionMap> {
        if !same_space(inner.target(), &self.source) {
            return Err(Error::input("composition requires inner target = outer source"));
        }
        let assignment = inner.assignment.iter().map(|&y| self.assignment[y]).collect();
        make_surjection(inner.source.clone(), self.target.clone(), assignment)
    }

    /// `Π_* μ`: the weight at `x` is the total weight of `μ` over the fiber.
    pub fn pushforward_measure(&self, mu: &Measure) -> Result<Measure> {
        if !same_space(&mu.space, &self.source) {
            return Err(Error::input("measure does not live on the map's source"));
        }
        let mut w = vec![C64::new(0.0, 0.0); self.target.len()];
        for (y, &x) in self.assignment.iter().enumerate() {
            w[x] += mu.weights[y];
        }
        Ok(Measure {
            space: self.target.clone(),
            weights: w,
        })
    }
}

/// `Π_* μ`; see [`SurjectionMap::pushforward_measure`].
pub fn pushforward_measure(map: &SurjectionMap, mu: &Measure) -> Result<Measure> {
    map.pushforward_measure(mu)
}

/// A complex measure: one weight per point.
#[derive(Debug, Clone)]
pub struct Measure {
    space: Arc<FiniteSpace>,
    weights: Vec<C64>,
}

impl Measure {
    pub fn new(space: Arc<FiniteSpace>, weights: Vec<C64>) -> Result<Measure> {
        if weights.len() != space.len() {
            return Err(Error::input(format!(
                "measure has {} weights for a space of {} points",
                weights.len(),
                space.len()
            )));
        }
        Ok(Measure { space, weights })
    }

    pub fn zero(space: Arc<FiniteSpace>) -> Measure {
        let n = space.len();
        Measure {
            space,
            weights: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn point_mass(space: Arc<FiniteSpace>, i: usize) -> Measure {
        let mut m = Measure::zero(space);
        m.weights[i] = C64::new(1.0, 0.0);
        m
    }

    /// Uniform probability on `indices` (repeats add up).
    pub fn uniform_on(space: Arc<FiniteSpace>, indices: &[usize]) -> Measure {
        let mut m = Measure::zero(space);
        let w = 1.0 / indices.len() as f64;
        for &i in indices {
            m.weights[i] += w;
        }
        m
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<C64> {
        self.weights
    }

    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).sum()
    }

    pub fn total_mass(&self) -> C64 {
        self.weights.iter().sum()
    }

    pub fn support(&self, support_tol: f64) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| self.weights[i].norm() > support_tol).collect()
    }

    /// Real, nonnegative up to `support_tol`, and of total mass 1 within 1e-10.
    pub fn is_probability(&self, support_tol: f64) -> bool {
        self.weights.iter().all(|w| w.im.abs() <= support_tol && w.re >= -support_tol)
            && (self.total_mass().re - 1.0).abs() <= 1e-10
    }

    /// `∫ f dμ` for a table of values aligned with the space.
    pub fn integrate(&self, values: &[C64]) -> C64 {
        pair(&self.weights, values)
    }

    pub fn scaled(&self, c: C64) -> Measure {
        Measure {
            space: self.space.clone(),
            weights: self.weights.iter().map(|w| w * c).collect(),
        }
    }
}
