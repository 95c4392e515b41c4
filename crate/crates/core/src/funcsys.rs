//! Discretized uniform algebras.
//!
//! A [`FunctionSystem`] is the span of the constant function and all
//! monomials in a list of generator tables up to a (weighted) degree cap.
//! Full multiplicative closure is deliberately avoided: on a finite grid
//! any separating unital algebra closed under products is the whole of
//! `C(grid)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, OrthoFrame, C64};
use crate::space::{same_space, FiniteSpace, SurjectionMap};

pub const DEFAULT_RANK_TOL: f64 = 1e-9;
pub const SEPARATION_TOL: f64 = 1e-10;
/// Least-squares residual below which an interpolation problem counts as solved.
pub const INTERPOLATION_TOL: f64 = 1e-8;

/// Complex values on the points of a space.
#[derive(Debug, Clone)]
pub struct FunctionTable {
    space: Arc<FiniteSpace>,
    values: Vec<C64>,
    name: Option<String>,
}

impl FunctionTable {
    pub fn new(space: Arc<FiniteSpace>, values: Vec<C64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::input(format!(
                "table has {} values for a space of {} points",
                values.len(),
                space.len()
            )));
        }
        Ok(FunctionTable {
            space,
            values,
            name: None,
        })
    }

    pub fn from_fn(space: Arc<FiniteSpace>, f: impl Fn(&[C64]) -> C64) -> Self {
        let values = space.points().iter().map(|p| f(&p.coords)).collect();
        FunctionTable {
            space,
            values,
            name: None,
        }
    }

    pub fn constant(space: Arc<FiniteSpace>, c: C64) -> Self {
        let n = space.len();
        FunctionTable {
            space,
            values: vec![c; n],
            name: None,
        }
    }

    /// The `k`-th coordinate function.
    pub fn coordinate(space: Arc<FiniteSpace>, k: usize) -> Self {
        Self::from_fn(space, |c| c[k])
    }

    pub fn indicator(space: Arc<FiniteSpace>, i: usize) -> Self {
        let mut t = Self::constant(space, C64::new(0.0, 0.0));
        t.values[i] = C64::new(1.0, 0.0);
        t
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> FunctionTable {
        FunctionTable {
            space: self.space.clone(),
            values: self.values.iter().map(|&z| f(z)).collect(),
            name: None,
        }
    }

    fn zip_with(&self, other: &FunctionTable, f: impl Fn(C64, C64) -> C64) -> Result<FunctionTable> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::input("tables live on different spaces"));
        }
        Ok(FunctionTable {
            space: self.space.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            name: None,
        })
    }

    pub fn mul(&self, other: &FunctionTable) -> Result<FunctionTable> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &FunctionTable) -> Result<FunctionTable> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FunctionTable) -> Result<FunctionTable> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: C64) -> FunctionTable {
        self.map(|z| z * c)
    }

    /// `|f|_X`, the maximum modulus over the points.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `Π* f = f ∘ Π` for a table on the map's target.
    pub fn pullback(&self, map: &SurjectionMap) -> Result<FunctionTable> {
        if !same_space(&self.space, map.target()) {
            return Err(Error::input("table does not live on the map's target"));
        }
        Ok(FunctionTable {
            space: map.source().clone(),
            values: map.assignment().iter().map(|&x| self.values[x]).collect(),
            name: self.name.clone(),
        })
    }

    /// Restriction to a sub-space given by point indices into `self.space`.
    pub fn restrict(&self, sub: Arc<FiniteSpace>, indices: &[usize]) -> Result<FunctionTable> {
        if indices.len() != sub.len() {
            return Err(Error::input("index list does not match the sub-space"));
        }
        Ok(FunctionTable {
            space: sub,
            values: indices.iter().map(|&i| self.values[i]).collect(),
            name: self.name.clone(),
        })
    }
}

/// `|f|_X`.
pub fn sup_norm(f: &FunctionTable) -> f64 {
    f.sup_norm()
}

/// A finite-dimensional space of tables: the span of `1` and every
/// generator monomial of weighted degree at most `degree_cap`.
#[derive(Debug, Clone)]
pub struct FunctionSystem {
    space: Arc<FiniteSpace>,
    generators: Vec<FunctionTable>,
    weights: Vec<u32>,
    degree_cap: u32,
    rank_tol: f64,
    basis: Vec<FunctionTable>,
    frame: OrthoFrame,
    separates_points: bool,
}

struct Monomial {
    weight: u32,
    factors: Vec<usize>,
    values: Vec<C64>,
}

fn enumerate_monomials(gens: &[FunctionTable], weights: &[u32], cap: u32, n: usize) -> Vec<Monomial> {
    fn dfs(
        gens: &[FunctionTable],
        weights: &[u32],
        cap: u32,
        start: usize,
        cur: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        for g in start..gens.len() {
            let w = cur.weight + weights[g];
            if w > cap {
                continue;
            }
            let mut factors = cur.factors.clone();
            factors.push(g);
            let values = cur.values.iter().zip(gens[g].values()).map(|(a, b)| a * b).collect();
            let mut next = Monomial {
                weight: w,
                factors,
                values,
            };
            dfs(gens, weights, cap, g, &mut next, out);
            out.push(next);
        }
    }
    let mut one = Monomial {
        weight: 0,
        factors: Vec::new(),
        values: vec![C64::new(1.0, 0.0); n],
    };
    let mut out = Vec::new();
    dfs(gens, weights, cap, 0, &mut one, &mut out);
    out.push(one);
    out.sort_by(|a, b| a.weight.cmp(&b.weight).then_with(|| a.factors.cmp(&b.factors)));
    out
}

fn monomial_name(gens: &[FunctionTable], factors: &[usize]) -> String {
    if factors.is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let g = factors[i];
        let mut e = 0;
        while i < factors.len() && factors[i] == g {
            e += 1;
            i += 1;
        }
        let name = gens[g].name().map_or_else(|| format!("g{g}"), str::to_string);
        parts.push(if e == 1 { name } else { format!("{name}^{e}") });
    }
    parts.join("*")
}

/// Generates the system spanned by `1` and all monomials in `generators` of
/// total degree `<= degree_cap`, each generator counting 1.
pub fn generate_system(
    space: Arc<FiniteSpace>,
    generators: Vec<FunctionTable>,
    degree_cap: u32,
    rank_tol: f64,
) -> Result<FunctionSystem> {
    let weights = vec![1; generators.len()];
    generate_weighted_system(space, generators, weights, degree_cap, rank_tol)
}

/// As [`generate_system`] with a per-generator degree weight.
pub fn generate_weighted_system(
    space: Arc<FiniteSpace>,
    generators: Vec<FunctionTable>,
    weights: Vec<u32>,
    degree_cap: u32,
    rank_tol: f64,
) -> Result<FunctionSystem> {
    if generators.is_empty() {
        return Err(Error::input("a function system needs at least one generator"));
    }
    if weights.len() != generators.len() || weights.contains(&0) {
        return Err(Error::input("one positive weight per generator is required"));
    }
    if degree_cap < 1 {
        return Err(Error::input("degree cap must be at least 1"));
    }
    if generators.iter().any(|g| !same_space(g.space(), &space)) {
        return Err(Error::input("generator lives on a different space"));
    }
    let n = space.len();
    let mut frame = OrthoFrame::new(n);
    let mut basis = Vec::new();
    for mono in enumerate_monomials(&generators, &weights, degree_cap, n) {
        if frame.try_push(&mono.values, rank_tol) {
            let name = monomial_name(&generators, &mono.factors);
            basis.push(FunctionTable {
                space: space.clone(),
                values: mono.values,
                name: Some(name),
            });
        }
    }
    Ok(FunctionSystem::assemble(space, generators, weights, degree_cap, rank_tol, basis, frame))
}

impl FunctionSystem {
    fn assemble(
        space: Arc<FiniteSpace>,
        generators: Vec<FunctionTable>,
        weights: Vec<u32>,
        degree_cap: u32,
        rank_tol: f64,
        basis: Vec<FunctionTable>,
        frame: OrthoFrame,
    ) -> FunctionSystem {
        let mut sys = FunctionSystem {
            space,
            generators,
            weights,
            degree_cap,
            rank_tol,
            basis,
            frame,
            separates_points: false,
        };
        sys.separates_points = sys.inseparable_pair().is_none();
        sys
    }

    /// A system with an explicitly given spanning set. The constant table is
    /// prepended, and the tables are reduced to an independent basis in order.
    pub fn from_tables(
        space: Arc<FiniteSpace>,
        tables: Vec<FunctionTable>,
        generators: Vec<FunctionTable>,
        weights: Vec<u32>,
        degree_cap: u32,
        rank_tol: f64,
    ) -> Result<FunctionSystem> {
        if tables.iter().chain(&generators).any(|t| !same_space(t.space(), &space)) {
            return Err(Error::input("table lives on a different space"));
        }
        if weights.len() != generators.len() {
            return Err(Error::input("one weight per generator is required"));
        }
        let mut frame = OrthoFrame::new(space.len());
        let mut basis = Vec::new();
        let one = FunctionTable::constant(space.clone(), C64::new(1.0, 0.0)).named("1");
        for t in std::iter::once(one).chain(tables) {
            if frame.try_push(&t.values, rank_tol) {
                basis.push(t);
            }
        }
        Ok(FunctionSystem::assemble(space, generators, weights, degree_cap, rank_tol, basis, frame))
    }

    /// `C(X)` itself, generated by point indicators.
    pub fn full(space: Arc<FiniteSpace>) -> FunctionSystem {
        let gens = (0..space.len())
            .map(|i| FunctionTable::indicator(space.clone(), i).named(format!("e_{}", space.label(i))))
            .collect();
        generate_system(space, gens, 1, DEFAULT_RANK_TOL).expect("indicator system is well formed")
    }

    /// The constants.
    pub fn constants(space: Arc<FiniteSpace>) -> FunctionSystem {
        let one = FunctionTable::constant(space.clone(), C64::new(1.0, 0.0)).named("1");
        generate_system(space, vec![one], 1, DEFAULT_RANK_TOL).expect("constant system is well formed")
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn basis(&self) -> &[FunctionTable] {
        &self.basis
    }

    pub fn generators(&self) -> &[FunctionTable] {
        &self.generators
    }

    pub fn generator_weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn separates_points(&self) -> bool {
        self.separates_points
    }

    /// Orthonormal frame of the span (columns aligned with the space).
    pub fn frame(&self) -> &OrthoFrame {
        &self.frame
    }

    fn check_space(&self, f: &FunctionTable) -> Result<()> {
        if !same_space(f.space(), &self.space) {
            return Err(Error::input("table does not live on the system's space"));
        }
        Ok(())
    }

    /// Euclidean distance from `f` to the span.
    pub fn span_residual(&self, f: &FunctionTable) -> Result<f64> {
        self.check_space(f)?;
        Ok(self.frame.residual(f.values()))
    }

    /// Least-squares coefficients of `f` on the basis.
    pub fn coefficients(&self, f: &FunctionTable) -> Result<Vec<C64>> {
        self.check_space(f)?;
        Ok(self.frame.candidate_coefficients(f.values()))
    }

    /// `sum_k c_k b_k`.
    pub fn combination(&self, coeffs: &[C64]) -> Result<FunctionTable> {
        if coeffs.len() != self.dim() {
            return Err(Error::input(format!(
                "expected {} coefficients, got {}",
                self.dim(),
                coeffs.len()
            )));
        }
        let mut values = vec![C64::new(0.0, 0.0); self.space.len()];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (v, bv) in values.iter_mut().zip(b.values()) {
                *v += c * bv;
            }
        }
        FunctionTable::new(self.space.clone(), values)
    }

    /// `|sum_k c_k b_k|_X`.
    pub fn sup_norm_of(&self, coeffs: &[C64]) -> Result<f64> {
        Ok(self.combination(coeffs)?.sup_norm())
    }

    /// A pair of points no basis member tells apart, if any.
    pub fn inseparable_pair(&self) -> Option<(usize, usize)> {
        let n = self.space.len();
        if n < 2 {
            return None;
        }
        // Sort by a fixed generic combination; an inseparable pair must be
        // close in that key.
        let coef: Vec<f64> = (0..self.dim()).map(|k| 1.0 / (k as f64 + 1.0).sqrt()).collect();
        let key: Vec<f64> = (0..n)
            .map(|i| {
                self.basis
                    .iter()
                    .zip(&coef)
                    .map(|(b, c)| c * (b.values()[i].re + 0.618 * b.values()[i].im))
                    .sum()
            })
            .collect();
        let band = SEPARATION_TOL * coef.iter().sum::<f64>() * 2.0;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| key[a].total_cmp(&key[b]).then(a.cmp(&b)));
        for (k, &i) in order.iter().enumerate() {
            for &j in order[..k].iter().rev() {
                if key[j] < key[i] - band {
                    break;
                }
                let same = self
                    .basis
                    .iter()
                    .all(|b| (b.values()[i] - b.values()[j]).norm() <= SEPARATION_TOL);
                if same {
                    return Some((i.min(j), i.max(j)));
                }
            }
        }
        None
    }
}

/// Euclidean distance from `f` to the span of `system`.
pub fn span_residual(system: &FunctionSystem, f: &FunctionTable) -> Result<f64> {
    system.span_residual(f)
}

/// The system restricted to the points `subset`, re-reduced to an
/// independent basis on the sub-space. Returns the sub-space's system;
/// point `k` of the sub-space is `subset[k]` of the original.
pub fn restrict_system(system: &FunctionSystem, subset: &[usize]) -> Result<FunctionSystem> {
    if subset.is_empty() {
        return Err(Error::input("cannot restrict to an empty set"));
    }
    let sub = Arc::new(system.space.subspace(subset)?);
    let tables = system
        .basis
        .iter()
        .map(|b| b.restrict(sub.clone(), subset))
        .collect::<Result<Vec<_>>>()?;
    let gens = system
        .generators
        .iter()
        .map(|g| g.restrict(sub.clone(), subset))
        .collect::<Result<Vec<_>>>()?;
    FunctionSystem::from_tables(sub, tables, gens, system.weights.clone(), system.degree_cap, system.rank_tol)
}

/// `Π*(system)` on the map's source.
pub fn pullback_system(map: &SurjectionMap, system: &FunctionSystem) -> Result<FunctionSystem> {
    if !same_space(map.target(), &system.space) {
        return Err(Error::input("system does not live on the map's target"));
    }
    let tables = system.basis.iter().map(|b| b.pullback(map)).collect::<Result<Vec<_>>>()?;
    let gens = system.generators.iter().map(|g| g.pullback(map)).collect::<Result<Vec<_>>>()?;
    FunctionSystem::from_tables(
        map.source().clone(),
        tables,
        gens,
        system.weights.clone(),
        system.degree_cap,
        system.rank_tol,
    )
}

#[derive(Debug, Clone)]
pub struct Interpolation {
    pub feasible: bool,
    pub residual: f64,
    /// Coefficients on the system basis of the least-squares solution.
    pub coefficients: Vec<C64>,
}

/// Is there a member equal to `value_on_k` on `k` and vanishing on `e`?
/// Solved in least squares over the basis coefficients.
pub fn interpolation_feasible(
    system: &FunctionSystem,
    k: &[usize],
    e: &[usize],
    value_on_k: C64,
) -> Result<Interpolation> {
    if k.is_empty() || e.is_empty() {
        return Err(Error::input("both point sets must be non-empty"));
    }
    let n = system.space.len();
    let mut in_k = vec![false; n];
    for &i in k {
        if i >= n {
            return Err(Error::input(format!("point index {i} out of range")));
        }
        in_k[i] = true;
    }
    if let Some(&i) = e.iter().find(|&&i| i >= n || in_k[i]) {
        return Err(Error::input(format!("point index {i} is out of range or lies in both sets")));
    }
    let rows: Vec<usize> = k.iter().chain(e).copied().collect();
    let target: Vec<C64> = k
        .iter()
        .map(|_| value_on_k)
        .chain(e.iter().map(|_| C64::new(0.0, 0.0)))
        .collect();
    let mut frame = OrthoFrame::new(rows.len());
    let mut accepted = Vec::new();
    for (idx, b) in system.basis.iter().enumerate() {
        let col: Vec<C64> = rows.iter().map(|&i| b.values()[i]).collect();
        if frame.try_push(&col, system.rank_tol) {
            accepted.push(idx);
        }
    }
    let residual = frame.residual(&target);
    let partial = frame.candidate_coefficients(&target);
    let mut coefficients = vec![C64::new(0.0, 0.0); system.dim()];
    for (c, &idx) in partial.iter().zip(&accepted) {
        coefficients[idx] = *c;
    }
    Ok(Interpolation {
        feasible: residual <= INTERPOLATION_TOL,
        residual,
        coefficients,
    })
}

/// Smallest singular value relative to the largest, for the basis matrix.
pub fn basis_conditioning(system: &FunctionSystem) -> f64 {
    let cols: Vec<Vec<C64>> = system.basis.iter().map(|b| b.values().to_vec()).collect();
    let s = linalg::singular_values(&cols);
    match (s.first(), s.last()) {
        (Some(&a), Some(&b)) if a > 0.0 => b / a,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{make_space, make_surjection};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn circle_space(n: usize) -> Arc<FiniteSpace> {
        let raw: Vec<Vec<C64>> = (0..n).map(|j| vec![C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)]).collect();
        Arc::new(make_space(&raw, 1e-8).unwrap())
    }

    /// Deterministic scattered points in the unit disk (golden-angle spiral).
    fn disk_space(n: usize) -> Arc<FiniteSpace> {
        let raw: Vec<Vec<C64>> = (0..n)
            .map(|j| {
                let r = ((j as f64 + 0.5) / n as f64).sqrt();
                vec![C64::from_polar(r, 2.399963229728653 * j as f64)]
            })
            .collect();
        Arc::new(make_space(&raw, 1e-8).unwrap())
    }

    fn z(space: &Arc<FiniteSpace>) -> FunctionTable {
        FunctionTable::coordinate(space.clone(), 0).named("z")
    }

    #[test]
    fn polynomial_system_dimension() {
        let s = disk_space(100);
        let sys = generate_system(s.clone(), vec![z(&s)], 5, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(sys.dim(), 6);
        assert_eq!(sys.basis()[0].name(), Some("1"));
        assert_eq!(sys.basis()[5].name(), Some("z^5"));
        assert!(sys.separates_points());
        assert!(basis_conditioning(&sys) >= DEFAULT_RANK_TOL);
    }

    #[test]
    fn constant_generator_is_degenerate() {
        let s = circle_space(4);
        let sys = generate_system(s.clone(), vec![FunctionTable::constant(s, c(1.0, 0.0))], 3, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(sys.dim(), 1);
        assert!(!sys.separates_points());
    }

    #[test]
    fn laurent_system_on_annulus() {
        let raw: Vec<Vec<C64>> = (0..3)
            .flat_map(|i| {
                let r = 0.5 + 0.15 * i as f64;
                (0..17).map(move |j| vec![C64::from_polar(r, 2.0 * PI * j as f64 / 17.0 + 0.1 * i as f64)])
            })
            .collect();
        let s = Arc::new(make_space(&raw, 1e-8).unwrap());
        let inv = z(&s).map(|v| 1.0 / v).named("1/z");
        let sys = generate_system(s.clone(), vec![z(&s), inv], 4, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(sys.dim(), 9);
    }

    #[test]
    fn sup_norms() {
        let s = circle_space(64);
        assert_eq!(FunctionTable::constant(s.clone(), c(1.0, 0.0)).sup_norm(), 1.0);
        assert!((z(&s).sup_norm() - 1.0).abs() < 1e-15);
        let f = z(&s).map(|v| v * v - 1.0);
        assert!((f.sup_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn span_residuals() {
        let s = disk_space(100);
        let sys = generate_system(s.clone(), vec![z(&s)], 5, DEFAULT_RANK_TOL).unwrap();
        for b in sys.basis() {
            assert!(sys.span_residual(b).unwrap() <= 1e-12);
        }
        let conj = z(&s).map(|v| v.conj());
        assert!(sys.span_residual(&conj).unwrap() > 0.1);

        let circ = circle_space(64);
        let sys = generate_system(circ.clone(), vec![z(&circ)], 5, DEFAULT_RANK_TOL).unwrap();
        let z6 = z(&circ).map(|v| v.powi(6));
        assert!(sys.span_residual(&z6).unwrap() > 0.5);
        // six samples alias z^6 to the constant
        let tiny = circle_space(6);
        let sys = generate_system(tiny.clone(), vec![z(&tiny)], 5, DEFAULT_RANK_TOL).unwrap();
        assert!(sys.span_residual(&z(&tiny).map(|v| v.powi(6))).unwrap() < 1e-12);
        let other = circle_space(7);
        assert!(sys.span_residual(&z(&other)).is_err());
    }

    #[test]
    fn restriction_dimensions() {
        let s = disk_space(50);
        let sys = generate_system(s.clone(), vec![z(&s)], 5, DEFAULT_RANK_TOL).unwrap();
        let all: Vec<usize> = (0..50).collect();
        assert_eq!(restrict_system(&sys, &all).unwrap().dim(), 6);
        assert!(restrict_system(&sys, &[0, 7, 9]).unwrap().dim() <= 3);
        assert!(restrict_system(&sys, &[]).is_err());
    }

    #[test]
    fn pullback_is_isometric_on_double_cover() {
        let base = disk_space(30);
        let raw: Vec<Vec<C64>> = (0..30)
            .flat_map(|i| {
                let x = base.coords(i)[0];
                [vec![x, c(1.0, 0.0)], vec![x, c(-1.0, 0.0)]]
            })
            .collect();
        let cover = Arc::new(make_space(&raw, 1e-8).unwrap());
        let assignment = (0..cover.len())
            .map(|y| (0..30).find(|&i| base.coords(i)[0] == cover.coords(y)[0]).unwrap())
            .collect();
        let map = make_surjection(cover, base.clone(), assignment).unwrap();
        let sys = generate_system(base.clone(), vec![z(&base)], 4, DEFAULT_RANK_TOL).unwrap();
        let pulled = pullback_system(&map, &sys).unwrap();
        assert_eq!(pulled.dim(), sys.dim());
        for (b, pb) in sys.basis().iter().zip(pulled.basis()) {
            assert_eq!(b.sup_norm(), pb.sup_norm());
            for fiber in map.fibers() {
                assert_eq!(pb.values()[fiber[0]], pb.values()[fiber[1]]);
            }
        }
        assert!(!pulled.separates_points());
    }

    #[test]
    fn interpolation_cases() {
        let s = circle_space(8);
        let full = FunctionSystem::full(s.clone());
        assert_eq!(full.dim(), 8);
        let r = interpolation_feasible(&full, &[0, 1], &[4, 5, 6], c(1.0, 0.0)).unwrap();
        assert!(r.feasible);
        let consts = FunctionSystem::constants(s.clone());
        let r = interpolation_feasible(&consts, &[0], &[4], c(1.0, 0.0)).unwrap();
        assert!(!r.feasible);
        assert!(interpolation_feasible(&full, &[0, 1], &[1], c(1.0, 0.0)).is_err());
    }

    #[test]
    fn multiplicative_consistency() {
        let s = disk_space(60);
        let w = z(&s).map(|v| v.conj() * 0.5).named("w");
        let sys = generate_system(s.clone(), vec![z(&s), w.clone()], 3, DEFAULT_RANK_TOL).unwrap();
        let zz = z(&s);
        for (a, b) in [(&zz, &zz), (&zz, &w), (&w, &w)] {
            assert!(sys.span_residual(&a.mul(b).unwrap()).unwrap() <= 1e-10);
        }
    }
}
