//! Operators between function spaces given by row measures, extension
//! bundles, and the averaging and extension certificates.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cert::{Certificate, Clause, ProbeRecord};
use crate::error::{Error, Result};
use crate::funcsys::{FunctionSystem, FunctionTable};
use crate::hull::hull_distance;
use crate::linalg::{self, OrthoFrame, C64};
use crate::measures::annihilator_basis;
use crate::space::{same_space, FiniteSpace, Measure, SurjectionMap};
use crate::tol::Tolerances;

pub const DEFAULT_RANDOM_PROBES: usize = 20;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// A linear map `C(source) -> C(target)`, `(T f)(x) = ∫ f dμ_x`, stored as
/// sparse row measures.
#[derive(Debug, Clone)]
pub struct OperatorTable {
    source: Arc<FiniteSpace>,
    target: Arc<FiniteSpace>,
    rows: Vec<Vec<(usize, C64)>>,
}

impl OperatorTable {
    /// Rows indexed by target points; entries `(source index, weight)`.
    pub fn from_sparse(
        source: Arc<FiniteSpace>,
        target: Arc<FiniteSpace>,
        rows: Vec<Vec<(usize, C64)>>,
    ) -> Result<OperatorTable> {
        if rows.len() != target.len() {
            return Err(Error::input(format!(
                "operator has {} rows for {} target points",
                rows.len(),
                target.len()
            )));
        }
        let mut clean = Vec::with_capacity(rows.len());
        for (x, mut row) in rows.into_iter().enumerate() {
            if let Some(&(y, _)) = row.iter().find(|(y, _)| *y >= source.len()) {
                return Err(Error::input(format!("row {x} references source point {y} out of range")));
            }
            if row.iter().any(|(_, w)| !w.re.is_finite() || !w.im.is_finite()) {
                return Err(Error::input(format!("row {x} has a non-finite weight")));
            }
            row.sort_by_key(|&(y, _)| y);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(row.len());
            for (y, w) in row {
                match merged.last_mut() {
                    Some((ly, lw)) if *ly == y => *lw += w,
                    _ => merged.push((y, w)),
                }
            }
            clean.push(merged);
        }
        Ok(OperatorTable {
            source,
            target,
            rows: clean,
        })
    }

    pub fn identity(space: Arc<FiniteSpace>) -> OperatorTable {
        let rows = (0..space.len()).map(|i| vec![(i, C64::new(1.0, 0.0))]).collect();
        OperatorTable {
            source: space.clone(),
            target: space,
            rows,
        }
    }

    /// `Π*` as an operator `C(X) -> C(Y)`.
    pub fn pullback(pi: &SurjectionMap) -> OperatorTable {
        let rows = pi.assignment().iter().map(|&x| vec![(x, C64::new(1.0, 0.0))]).collect();
        OperatorTable {
            source: pi.target().clone(),
            target: pi.source().clone(),
            rows,
        }
    }

    /// Uniform average over each fiber of `pi`, as an operator `C(Y) -> C(X)`.
    pub fn fiber_average(pi: &SurjectionMap) -> OperatorTable {
        let rows = pi
            .fibers()
            .iter()
            .map(|f| {
                let w = C64::new(1.0 / f.len() as f64, 0.0);
                f.iter().map(|&y| (y, w)).collect()
            })
            .collect();
        OperatorTable {
            source: pi.source().clone(),
            target: pi.target().clone(),
            rows,
        }
    }

    pub fn source(&self) -> &Arc<FiniteSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSpace> {
        &self.target
    }

    pub fn rows(&self) -> &[Vec<(usize, C64)>] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &[(usize, C64)] {
        &self.rows[x]
    }

    pub fn row_measure(&self, x: usize) -> Measure {
        let mut w = vec![zero(); self.source.len()];
        for &(y, v) in &self.rows[x] {
            w[y] += v;
        }
        Measure::new(self.source.clone(), w).expect("row weights match the source space")
    }

    pub fn apply(&self, values: &[C64]) -> Vec<C64> {
        debug_assert_eq!(values.len(), self.source.len());
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(y, w)| w * values[y]).sum())
            .collect()
    }

    pub fn apply_table(&self, f: &FunctionTable) -> Result<FunctionTable> {
        if !same_space(f.space(), &self.source) {
            return Err(Error::input("table does not live on the operator's source"));
        }
        FunctionTable::new(self.target.clone(), self.apply(f.values()))
    }

    /// Weights on the source of `sum_x λ_x μ_x`.
    pub fn adjoint_weights(&self, lam: &[C64]) -> Vec<C64> {
        let mut out = vec![zero(); self.source.len()];
        for (r, &l) in self.rows.iter().zip(lam) {
            if l == zero() {
                continue;
            }
            for &(y, w) in r {
                out[y] += l * w;
            }
        }
        out
    }

    /// Sup-norm operator norm: the largest row total variation.
    pub fn norm(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(_, w)| w.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `max_x |T(1)(x) - 1|`.
    pub fn unital_residual(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.iter().map(|&(_, w)| w).sum::<C64>() - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// `self ∘ inner`, where `inner: C(Z) -> C(source)`.
    pub fn compose(&self, inner: &OperatorTable) -> Result<OperatorTable> {
        if !same_space(inner.target(), &self.source) {
            return Err(Error::input("operators do not compose"));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, C64> = BTreeMap::new();
                for &(y, w) in r {
                    for &(z, v) in &inner.rows[y] {
                        *acc.entry(z).or_insert(zero()) += w * v;
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        Ok(OperatorTable {
            source: inner.source.clone(),
            target: self.target.clone(),
            rows,
        })
    }

    /// `a·self + b·other` on equal spaces.
    pub fn combine(&self, a: C64, other: &OperatorTable, b: C64) -> Result<OperatorTable> {
        if !same_space(&self.source, &other.source) || !same_space(&self.target, &other.target) {
            return Err(Error::input("operators act between different spaces"));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(r, s)| r.iter().map(|&(y, w)| (y, a * w)).chain(s.iter().map(|&(y, w)| (y, b * w))).collect())
            .collect();
        OperatorTable::from_sparse(self.source.clone(), self.target.clone(), rows)
    }

    /// Largest entrywise difference of the two row tables.
    pub fn max_entry_diff(&self, other: &OperatorTable) -> f64 {
        let d = self.combine(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0));
        match d {
            Ok(d) => d
                .rows
                .iter()
                .flat_map(|r| r.iter().map(|(_, w)| w.norm()))
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Validates rows given as measures on `pi.source`, one per target point.
pub fn make_operator(pi: &SurjectionMap, rows: Vec<Measure>) -> Result<OperatorTable> {
    if rows.len() != pi.target().len() {
        return Err(Error::input(format!(
            "{} rows given for {} base points",
            rows.len(),
            pi.target().len()
        )));
    }
    let mut sparse = Vec::with_capacity(rows.len());
    for (x, m) in rows.into_iter().enumerate() {
        if !same_space(m.space(), pi.source()) {
            return Err(Error::input(format!("row {x} is not a measure on the cover")));
        }
        sparse.push(
            m.weights()
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != zero())
                .map(|(y, &w)| (y, w))
                .collect(),
        );
    }
    OperatorTable::from_sparse(pi.source().clone(), pi.target().clone(), sparse)
}

pub fn operator_norm(t: &OperatorTable) -> f64 {
    t.norm()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BundleFlags {
    pub open_map: bool,
    pub group_implemented: bool,
}

/// An extension `(A, B, Π)` with an optional averaging operator `T`.
#[derive(Debug, Clone)]
pub struct ExtensionBundle {
    a: FunctionSystem,
    b: FunctionSystem,
    pi: SurjectionMap,
    t: Option<OperatorTable>,
    pub flags: BundleFlags,
    /// Free-form provenance of the construction (builder name, parameters).
    pub meta: BTreeMap<String, String>,
}

/// Largest span residual of `Π*a` in `B` over the basis of `A`.
pub fn pullback_inclusion_residual(a: &FunctionSystem, b: &FunctionSystem, pi: &SurjectionMap) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for basis in a.basis() {
        worst = worst.max(b.span_residual(&basis.pullback(pi)?)?);
    }
    Ok(worst)
}

impl ExtensionBundle {
    /// Checks the spaces line up and `Π*(A) ⊆ B` within `span_tol`.
    pub fn new(
        a: FunctionSystem,
        b: FunctionSystem,
        pi: SurjectionMap,
        t: Option<OperatorTable>,
        flags: BundleFlags,
        span_tol: f64,
    ) -> Result<ExtensionBundle> {
        if !same_space(a.space(), pi.target()) || !same_space(b.space(), pi.source()) {
            return Err(Error::input("systems do not live on the map's spaces"));
        }
        if let Some(t) = &t {
            if !same_space(t.source(), pi.source()) || !same_space(t.target(), pi.target()) {
                return Err(Error::input("operator does not map C(Y) to C(X)"));
            }
        }
        let r = pullback_inclusion_residual(&a, &b, &pi)?;
        if r > span_tol {
            return Err(Error::validation(format!(
                "pullback of A is not contained in B (residual {r:e})"
            )));
        }
        Ok(ExtensionBundle {
            a,
            b,
            pi,
            t,
            flags,
            meta: BTreeMap::new(),
        })
    }

    pub fn a(&self) -> &FunctionSystem {
        &self.a
    }

    pub fn b(&self) -> &FunctionSystem {
        &self.b
    }

    pub fn pi(&self) -> &SurjectionMap {
        &self.pi
    }

    pub fn t(&self) -> Option<&OperatorTable> {
        self.t.as_ref()
    }

    /// Replaces the operator without re-validating anything but its spaces.
    pub fn with_operator(mut self, t: OperatorTable) -> Result<ExtensionBundle> {
        if !same_space(t.source(), self.pi.source()) || !same_space(t.target(), self.pi.target()) {
            return Err(Error::input("operator does not map C(Y) to C(X)"));
        }
        self.t = Some(t);
        Ok(self)
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> ExtensionBundle {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    fn require_t(&self) -> Result<&OperatorTable> {
        self.t.as_ref().ok_or_else(|| Error::input("bundle has no averaging operator"))
    }

    /// `P = Π*∘T` as an operator on `C(Y)`.
    pub fn projection(&self) -> Result<OperatorTable> {
        OperatorTable::pullback(&self.pi).compose(self.require_t()?)
    }
}

/// Restriction of a bundle to `(K, Π⁻¹(K))`.
pub fn restrict_bundle(bundle: &ExtensionBundle, k: &[usize], span_tol: f64) -> Result<ExtensionBundle> {
    let pi = bundle.pi();
    let mut ks = k.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() || ks.iter().any(|&x| x >= pi.target().len()) {
        return Err(Error::input("restriction set must be non-empty and inside X"));
    }
    let ys = pi.preimage(&ks);
    let xk = Arc::new(pi.target().subspace(&ks)?);
    let yk = Arc::new(pi.source().subspace(&ys)?);
    let mut x_new = vec![usize::MAX; pi.target().len()];
    for (i, &x) in ks.iter().enumerate() {
        x_new[x] = i;
    }
    let mut y_new = vec![usize::MAX; pi.source().len()];
    for (i, &y) in ys.iter().enumerate() {
        y_new[y] = i;
    }
    let assignment = ys.iter().map(|&y| x_new[pi.apply(y)]).collect();
    let pik = crate::space::make_surjection(yk.clone(), xk.clone(), assignment)?;
    let ak = crate::funcsys::restrict_system(bundle.a(), &ks)?;
    let bk = crate::funcsys::restrict_system(bundle.b(), &ys)?;
    // the restricted systems live on fresh spaces; move them onto ours
    let ak = FunctionSystem::from_tables(
        xk.clone(),
        ak.basis().iter().map(|t| FunctionTable::new(xk.clone(), t.values().to_vec())).collect::<Result<_>>()?,
        ak.generators().iter().map(|t| FunctionTable::new(xk.clone(), t.values().to_vec())).collect::<Result<_>>()?,
        ak.generator_weights().to_vec(),
        ak.degree_cap(),
        ak.rank_tol(),
    )?;
    let bk = FunctionSystem::from_tables(
        yk.clone(),
        bk.basis().iter().map(|t| FunctionTable::new(yk.clone(), t.values().to_vec())).collect::<Result<_>>()?,
        bk.generators().iter().map(|t| FunctionTable::new(yk.clone(), t.values().to_vec())).collect::<Result<_>>()?,
        bk.generator_weights().to_vec(),
        bk.degree_cap(),
        bk.rank_tol(),
    )?;
    let tk = match bundle.t() {
        None => None,
        Some(t) => {
            let mut rows = Vec::with_capacity(ks.len());
            for &x in &ks {
                let mut row = Vec::new();
                for &(y, w) in t.row(x) {
                    if y_new[y] == usize::MAX {
                        if w.norm() > 1e-12 {
                            return Err(Error::input(format!(
                                "row of {} has mass outside the restricted cover",
                                pi.target().label(x)
                            )));
                        }
                        continue;
                    }
                    row.push((y_new[y], w));
                }
                rows.push(row);
            }
            Some(OperatorTable::from_sparse(yk.clone(), xk.clone(), rows)?)
        }
    };
    let mut out = ExtensionBundle::new(ak, bk, pik, tk, bundle.flags, span_tol)?;
    out.meta = bundle.meta.clone();
    out.meta.insert("restricted_to".into(), format!("{} base points", ks.len()));
    Ok(out)
}

/// Probe tables for certificates: basis members and seeded random
/// combinations, each scaled to sup norm 1.
#[derive(Debug, Clone)]
pub struct ProbeSet {
    pub tables: Vec<FunctionTable>,
    pub record: ProbeRecord,
}

fn normalized(t: FunctionTable) -> FunctionTable {
    let n = t.sup_norm();
    if n > 0.0 {
        t.scale(C64::new(1.0 / n, 0.0))
    } else {
        t
    }
}

pub fn default_probes(system: &FunctionSystem, seed: u64, random: usize) -> ProbeSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tables: Vec<FunctionTable> = system.basis().iter().cloned().map(normalized).collect();
    let normed: Vec<FunctionTable> = tables.clone();
    for _ in 0..random {
        let mut values = vec![zero(); system.space().len()];
        for b in &normed {
            let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for (v, bv) in values.iter_mut().zip(b.values()) {
                *v += c * bv;
            }
        }
        let t = FunctionTable::new(system.space().clone(), values).expect("length matches");
        tables.push(normalized(t));
    }
    ProbeSet {
        tables,
        record: ProbeRecord {
            seed,
            basis_members: system.dim(),
            random_combinations: random,
        },
    }
}

fn sup_diff(a: &[C64], b: &[C64]) -> f64 {
    linalg::max_abs_diff(a, b)
}

fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// `max_a |T(Π* a) - a|` over the basis of `A`.
pub fn section_residual(t: &OperatorTable, pi: &SurjectionMap, a: &FunctionSystem) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for b in a.basis() {
        let back = t.apply(b.pullback(pi)?.values());
        worst = worst.max(sup_diff(&back, b.values()));
    }
    Ok(worst)
}

/// Clauses (a) to (d) of the averaging equivalences for `T` over `Π`,
/// with `T∘Π* = id` on `A` as the applicability precondition.
pub fn equivalences_report(
    t: &OperatorTable,
    pi: &SurjectionMap,
    a: &FunctionSystem,
    probes: &ProbeSet,
    tol: &Tolerances,
) -> Result<Certificate> {
    if !same_space(t.source(), pi.source()) || !same_space(t.target(), pi.target()) {
        return Err(Error::input("operator does not match the map"));
    }
    if !same_space(a.space(), pi.target()) {
        return Err(Error::input("system A does not live on the base"));
    }
    if probes.tables.iter().any(|p| !same_space(p.space(), pi.source())) {
        return Err(Error::input("probe does not live on the cover"));
    }
    let mut cert = Certificate::new("averaging_equivalences");
    cert.probes = Some(probes.record.clone());
    let sec = section_residual(t, pi, a)?;
    cert.applicable = sec <= tol.section;
    cert.push(
        Clause::bounded("section_identity", sec, tol.section, a.dim())
            .with_note("precondition T∘Π* = id on A")
            .informational(),
    );

    let p_of = |v: &[C64]| -> Vec<C64> {
        let tv = t.apply(v);
        pi.assignment().iter().map(|&x| tv[x]).collect()
    };
    let pv: Vec<Vec<C64>> = probes.tables.iter().map(|f| p_of(f.values())).collect();

    let mut kelley: f64 = 0.0;
    for f in &probes.tables {
        for ph in &pv {
            let lhs = p_of(&mul(f.values(), ph));
            let rhs = mul(&p_of(f.values()), ph);
            kelley = kelley.max(sup_diff(&lhs, &rhs));
        }
    }
    let n = probes.tables.len();
    cert.push(Clause::bounded("a_kelley_identity", kelley, tol.algebraic, n * n));

    let mut module: f64 = 0.0;
    for f in &probes.tables {
        let tf = t.apply(f.values());
        for g in a.basis() {
            let lhs = t.apply(&mul(f.values(), g.pullback(pi)?.values()));
            let rhs = mul(&tf, g.values());
            module = module.max(sup_diff(&lhs, &rhs) / g.sup_norm().max(1.0));
        }
    }
    cert.push(Clause::bounded("b_module_property", module, tol.algebraic, n * a.dim()));

    let mut off: f64 = 0.0;
    for (x, row) in t.rows().iter().enumerate() {
        let m: f64 = row.iter().filter(|(y, _)| pi.apply(*y) != x).map(|(_, w)| w.norm()).sum();
        off = off.max(m);
    }
    cert.push(
        Clause::bounded("c_fiber_support", off, tol.support, t.rows().len())
            .with_note("largest total variation of a row off its fiber"),
    );

    let mut hull: f64 = 0.0;
    for f in &probes.tables {
        let tf = t.apply(f.values());
        for (x, fiber) in pi.fibers().iter().enumerate() {
            let vals: Vec<C64> = fiber.iter().map(|&y| f.values()[y]).collect();
            hull = hull.max(hull_distance(&vals, tf[x]));
        }
    }
    cert.push(Clause::bounded("d_convex_hull", hull, tol.hull, n));
    Ok(cert)
}

/// Orthonormal frame of `Π*(A)` on `Y`.
fn pulled_frame(a: &FunctionSystem, pi: &SurjectionMap) -> Result<OrthoFrame> {
    let mut f = OrthoFrame::new(pi.source().len());
    for b in a.basis() {
        f.try_push(b.pullback(pi)?.values(), a.rank_tol());
    }
    Ok(f)
}

/// Checks `Π*(C(X)) ∩ B = Π*(A)`: the intersection of `B` with the
/// fiber-constant tables, computed by principal angles, must have the
/// dimension of `A` and lie in `Π*(A)`.
pub fn invariant_intersection_clause(
    a: &FunctionSystem,
    b: &FunctionSystem,
    pi: &SurjectionMap,
    tol: &Tolerances,
) -> Result<Clause> {
    let ny = pi.source().len();
    let fibers: Vec<Vec<C64>> = pi
        .fibers()
        .iter()
        .map(|f| {
            let mut v = vec![zero(); ny];
            let w = C64::new(1.0 / (f.len() as f64).sqrt(), 0.0);
            for &y in f {
                v[y] = w;
            }
            v
        })
        .collect();
    let inter = linalg::intersection(b.frame(), &fibers, tol.angle);
    let pa = pulled_frame(a, pi)?;
    let worst = inter.iter().map(|v| pa.residual(v)).fold(0.0, f64::max);
    let dim_ok = inter.len() == a.dim();
    let clause = Clause::flag(
        "invariant_intersection",
        dim_ok && worst <= tol.span,
        if dim_ok { worst } else { f64::INFINITY },
        tol.span,
        inter.len(),
    )
    .with_note(format!(
        "dim(Π*(C(X)) ∩ B) = {}, dim A = {}",
        inter.len(),
        a.dim()
    ));
    Ok(clause)
}

/// The extension-lemma checklist for a bundle with an operator.
pub fn gce_certificate(bundle: &ExtensionBundle, probes: &ProbeSet, tol: &Tolerances) -> Result<Certificate> {
    let t = bundle.require_t()?;
    let (a, b, pi) = (bundle.a(), bundle.b(), bundle.pi());
    let mut cert = Certificate::new("generalised_cole_extension");
    cert.probes = Some(probes.record.clone());

    cert.push(Clause::bounded("unital", t.unital_residual(), tol.unital, t.rows().len()));
    let norm = t.norm();
    cert.push(Clause::bounded("norm_one", (norm - 1.0).abs(), tol.norm, t.rows().len()).with_note(format!("‖T‖ = {norm}")));
    let mut negative: f64 = 0.0;
    for r in t.rows() {
        for (_, w) in r {
            negative = negative.max(w.im.abs()).max(-w.re);
        }
    }
    cert.push(
        Clause::bounded("positive_rows", negative.max(0.0), tol.support, t.rows().len())
            .with_note("largest negative or imaginary row weight")
            .informational(),
    );
    let sec = section_residual(t, pi, a)?;
    cert.push(Clause::bounded("section_identity", sec, tol.section, a.dim()));

    let mut range: f64 = 0.0;
    for f in b.basis().iter().chain(&probes.tables) {
        let tf = FunctionTable::new(a.space().clone(), t.apply(f.values()))?;
        range = range.max(a.span_residual(&tf)?);
    }
    cert.push(Clause::bounded("range_in_a", range, tol.span, b.dim() + probes.tables.len()));
    cert.push(
        Clause::bounded("onto_a", sec, tol.section, a.dim())
            .with_note("a = T(Π* a) for every basis member of A")
            .informational(),
    );

    let ann = annihilator_basis(a);
    let nb = ann.measures.len();
    let mut annihil: f64 = 0.0;
    let mut inverse: f64 = 0.0;
    let mut pushed = Vec::with_capacity(nb);
    let b_sup: Vec<f64> = b.basis().iter().map(|f| f.sup_norm().max(f64::MIN_POSITIVE)).collect();
    for nu in &ann.measures {
        let mu = t.adjoint_weights(nu.weights());
        let tv: f64 = mu.iter().map(|w| w.norm()).sum();
        for (f, s) in b.basis().iter().zip(&b_sup) {
            let v = linalg::pair(f.values(), &mu).norm();
            annihil = annihil.max(v / (tv.max(f64::MIN_POSITIVE) * s));
        }
        let mut back = vec![zero(); a.space().len()];
        for (y, w) in mu.iter().enumerate() {
            back[pi.apply(y)] += w;
        }
        inverse = inverse.max(sup_diff(&back, nu.weights()));
        pushed.push(back);
    }
    cert.push(
        Clause::bounded("adjoint_annihilators", annihil, tol.annihilation, nb)
            .with_note("T*(A⊥) ⊆ B⊥, relative to total variation and sup norm"),
    );
    cert.push(Clause::bounded("pushforward_inverts_adjoint", inverse, tol.section, nb));

    let incl = pullback_inclusion_residual(a, b, pi)?;
    let rank = if pushed.is_empty() { 0 } else { linalg::rank(&pushed, tol.span) };
    cert.push(
        Clause::flag("annihilator_pushforward_onto", rank == nb && incl <= tol.span, incl, tol.span, nb)
            .with_note(format!("rank of pushed annihilators {rank} of {nb}; Π*(A) ⊆ B residual bounds the reverse inclusion")),
    );

    let (nontrivial_pass, note) = if a.dim() < a.space().len() {
        let certified = nb > 0 && annihil <= tol.annihilation && inverse <= tol.section;
        (
            certified,
            format!(
                "dim A = {} < |X| = {}; nonzero T*ν annihilates B, so dim B < |Y| (dim B = {}, |Y| = {})",
                a.dim(),
                a.space().len(),
                b.dim(),
                b.space().len()
            ),
        )
    } else {
        (true, "A = C(X); nothing to propagate".to_string())
    };
    cert.push(Clause::flag("nontriviality_propagates", nontrivial_pass, annihil, tol.annihilation, nb).with_note(note));

    cert.push(invariant_intersection_clause(a, b, pi, tol)?);
    Ok(cert)
}

/// `max |T(fg) - T(f)T(g)|`.
pub fn multiplicativity_residual(t: &OperatorTable, f: &FunctionTable, g: &FunctionTable) -> f64 {
    let lhs = t.apply(&mul(f.values(), g.values()));
    let rhs = mul(&t.apply(f.values()), &t.apply(g.values()));
    sup_diff(&lhs, &rhs)
}

/// For each base point, the source point whose evaluation the row measure
/// reproduces on `B`, if any.
pub fn represented_points(t: &OperatorTable, b: &FunctionSystem, tol: f64) -> Vec<Option<usize>> {
    let ny = b.space().len();
    (0..t.rows().len())
        .map(|x| {
            let targets: Vec<C64> = b.basis().iter().map(|f| t.row(x).iter().map(|&(y, w)| w * f.values()[y]).sum()).collect();
            let scale: Vec<f64> = b.basis().iter().map(|f| f.sup_norm().max(1.0)).collect();
            (0..ny).find(|&y| {
                b.basis()
                    .iter()
                    .zip(&targets)
                    .zip(&scale)
                    .all(|((f, v), s)| (f.values()[y] - v).norm() <= tol * s)
            })
        })
        .collect()
}

/// `T|B` multiplicativity against the row-representation criterion.
pub fn homomorphism_report(bundle: &ExtensionBundle, probes: &ProbeSet, tol: &Tolerances) -> Result<Certificate> {
    let t = bundle.require_t()?;
    let mut cert = Certificate::new("homomorphism");
    cert.probes = Some(probes.record.clone());
    let mut worst: f64 = 0.0;
    for f in &probes.tables {
        for g in &probes.tables {
            worst = worst.max(multiplicativity_residual(t, f, g));
        }
    }
    let n = probes.tables.len();
    let multiplicative = worst <= tol.algebraic;
    let reps = represented_points(t, bundle.b(), tol.algebraic);
    let missing = reps.iter().filter(|r| r.is_none()).count();
    let point_masses = t.rows().iter().filter(|r| r.len() == 1 && (r[0].1 - 1.0).norm() <= tol.unital).count();
    cert.push(Clause::flag("multiplicative_on_probes", multiplicative, worst, tol.algebraic, n * n).informational());
    cert.push(
        Clause::flag("rows_represent_points", missing == 0, missing as f64, 0.0, reps.len())
            .with_note(format!("{point_masses} of {} rows are point masses", reps.len()))
            .informational(),
    );
    cert.push(Clause::flag(
        "criterion_consistent",
        multiplicative == (missing == 0),
        if multiplicative == (missing == 0) { 0.0 } else { 1.0 },
        0.0,
        n * n,
    ));
    Ok(cert)
}
