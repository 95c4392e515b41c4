//! Finite group actions, Haar averages, and recovering Cole structure from
//! bicontractive projections.

use std::collections::HashMap;
use std::sync::Arc;

use crate::averaging::{
    invariant_intersection_clause, BundleFlags, ExtensionBundle, OperatorTable, ProbeSet,
};
use crate::cert::{Certificate, Clause};
use crate::cole::{cole_extend, ColeBundle, ColeSpec};
use crate::error::{Error, Result};
use crate::funcsys::{FunctionSystem, FunctionTable};
use crate::linalg::{self, C64};
use crate::space::{make_surjection, same_space, FiniteSpace, Point, SurjectionMap};
use crate::tol::Tolerances;

/// A finite group acting on a space by permutations: `s·y = elements[s][y]`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    space: Arc<FiniteSpace>,
    elements: Vec<Vec<usize>>,
    /// `table[s][t]` is the index of `s ∘ t`.
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

/// Validates closure, identity and inverses, and computes the orbits.
pub fn make_action(space: Arc<FiniteSpace>, permutations: Vec<Vec<usize>>) -> Result<GroupAction> {
    let n = space.len();
    if permutations.is_empty() {
        return Err(Error::input("a group needs at least one element"));
    }
    for (s, p) in permutations.iter().enumerate() {
        if p.len() != n {
            return Err(Error::input(format!("element {s} has length {}, expected {n}", p.len())));
        }
        let mut seen = vec![false; n];
        for &y in p {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(Error::input(format!("element {s} is not a bijection")));
            }
        }
    }
    let index: HashMap<&[usize], usize> = permutations.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    if index.len() != permutations.len() {
        return Err(Error::validation("group elements are listed twice"));
    }
    let id: Vec<usize> = (0..n).collect();
    let identity = *index
        .get(id.as_slice())
        .ok_or_else(|| Error::validation("identity permutation missing"))?;
    let mut table = Vec::with_capacity(permutations.len());
    let mut buf = vec![0; n];
    for (s, ps) in permutations.iter().enumerate() {
        let mut row = Vec::with_capacity(permutations.len());
        for (t, pt) in permutations.iter().enumerate() {
            for y in 0..n {
                buf[y] = ps[pt[y]];
            }
            let st = *index
                .get(buf.as_slice())
                .ok_or_else(|| Error::validation(format!("elements {s} and {t} compose outside the list")))?;
            row.push(st);
        }
        table.push(row);
    }
    let inverses = (0..permutations.len())
        .map(|s| {
            table[s]
                .iter()
                .position(|&st| st == identity)
                .ok_or_else(|| Error::validation(format!("element {s} has no inverse")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    for y in 0..n {
        if orbit_of[y] != usize::MAX {
            continue;
        }
        let mut orbit: Vec<usize> = permutations.iter().map(|p| p[y]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &z in &orbit {
            orbit_of[z] = orbits.len();
        }
        orbits.push(orbit);
    }
    Ok(GroupAction {
        space,
        elements: permutations,
        table,
        identity,
        inverses,
        orbits,
        orbit_of,
    })
}

/// The cyclic group generated by one permutation.
pub fn cyclic_action(space: Arc<FiniteSpace>, generator: Vec<usize>) -> Result<GroupAction> {
    let n = space.len();
    let id: Vec<usize> = (0..n).collect();
    let mut elements = vec![id.clone()];
    let mut cur = generator.clone();
    if cur.len() != n {
        return Err(Error::input("generator length does not match the space"));
    }
    while cur != id {
        if elements.len() > n.max(1) * 64 {
            return Err(Error::input("generator order is implausibly large"));
        }
        elements.push(cur.clone());
        cur = (0..n).map(|y| generator[cur[y]]).collect();
    }
    make_action(space, elements)
}

impl GroupAction {
    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn multiply(&self, s: usize, t: usize) -> usize {
        self.table[s][t]
    }

    pub fn inverse(&self, s: usize) -> usize {
        self.inverses[s]
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, y: usize) -> usize {
        self.orbit_of[y]
    }

    /// `f_s(y) = f(s·y)`.
    pub fn translate(&self, f: &FunctionTable, s: usize) -> FunctionTable {
        let p = &self.elements[s];
        let vals = (0..p.len()).map(|y| f.values()[p[y]]).collect();
        FunctionTable::new(f.space().clone(), vals).expect("permutation preserves length")
    }

    /// The Haar-average projector `P f(y) = (1/|G|) Σ_s f(s·y)` on `C(Y)`.
    pub fn haar_projection(&self) -> OperatorTable {
        let w = C64::new(1.0 / self.order() as f64, 0.0);
        let rows = (0..self.space.len())
            .map(|y| self.elements.iter().map(|p| (p[y], w)).collect())
            .collect();
        OperatorTable::from_sparse(self.space.clone(), self.space.clone(), rows).expect("indices are in range")
    }
}

/// The orbit quotient `X = Y/G` with `T` the Haar average and `A` the span of
/// `T(B)`. Fails with a validation error if `B` is not `G`-stable enough for
/// `Π*(A) ⊆ B`.
pub fn haar_extension(action: &GroupAction, b: &FunctionSystem, merge_tol: f64, span_tol: f64) -> Result<ExtensionBundle> {
    if !same_space(action.space(), b.space()) {
        return Err(Error::input("action and system live on different spaces"));
    }
    let y = action.space();
    let quotient_points = |with_rep: bool| -> Vec<Point> {
        action
            .orbits()
            .iter()
            .map(|orbit| {
                let rep = orbit[0];
                let mut coords = vec![C64::new(0.0, 0.0); y.arity()];
                for &z in orbit {
                    for (c, v) in coords.iter_mut().zip(y.coords(z)) {
                        *c += v;
                    }
                }
                for c in coords.iter_mut() {
                    *c /= orbit.len() as f64;
                }
                if with_rep {
                    coords.extend_from_slice(y.coords(rep));
                }
                Point {
                    label: y.label(rep).to_string(),
                    coords,
                }
            })
            .collect()
    };
    let x = match FiniteSpace::new(quotient_points(false), merge_tol) {
        Ok(s) => s,
        Err(Error::Validation(_)) => FiniteSpace::new(quotient_points(true), merge_tol)?,
        Err(e) => return Err(e),
    };
    let x = Arc::new(x);
    let assignment = (0..y.len()).map(|z| action.orbit_of(z)).collect();
    let pi = make_surjection(y.clone(), x.clone(), assignment)?;
    let w = C64::new(1.0 / action.order() as f64, 0.0);
    let rows = action
        .orbits()
        .iter()
        .map(|orbit| action.elements().iter().map(|p| (p[orbit[0]], w)).collect())
        .collect();
    let t = OperatorTable::from_sparse(y.clone(), x.clone(), rows)?;
    let tables = b
        .basis()
        .iter()
        .map(|f| t.apply_table(f))
        .collect::<Result<Vec<_>>>()?;
    let mut gens = Vec::new();
    let mut weights = Vec::new();
    for (g, &wg) in b.generators().iter().zip(b.generator_weights()) {
        let invariant = (0..action.order()).all(|s| linalg::max_abs_diff(action.translate(g, s).values(), g.values()) <= 1e-12);
        if invariant {
            let mut tg = t.apply_table(g)?;
            if let Some(name) = g.name() {
                tg = tg.named(name);
            }
            gens.push(tg);
            weights.push(wg);
        }
    }
    let a = FunctionSystem::from_tables(x, tables, gens, weights, b.degree_cap(), b.rank_tol())?;
    let flags = BundleFlags {
        open_map: true,
        group_implemented: true,
    };
    Ok(ExtensionBundle::new(a, b.clone(), pi, Some(t), flags, span_tol)?.with_meta("construction", "haar"))
}

/// Orbits against fibers, rows against orbit averages, `G`-stability of
/// `B`, and the invariant intersection.
pub fn implemented_report(
    bundle: &ExtensionBundle,
    action: &GroupAction,
    probes: &ProbeSet,
    tol: &Tolerances,
) -> Result<Certificate> {
    if !same_space(action.space(), bundle.b().space()) {
        return Err(Error::input("action does not live on the bundle's cover"));
    }
    let pi = bundle.pi();
    let mut cert = Certificate::new("implemented_by_group");
    cert.probes = Some(probes.record.clone());

    let mismatched = pi
        .fibers()
        .iter()
        .filter(|f| action.orbits()[action.orbit_of(f[0])] != **f)
        .count();
    cert.push(
        Clause::flag("orbits_equal_fibers", mismatched == 0, mismatched as f64, 0.0, pi.fibers().len())
            .with_note("fibers that are not a single orbit"),
    );

    let rows_res = match bundle.t() {
        Some(t) => {
            let mut worst: f64 = 0.0;
            for (x, fiber) in pi.fibers().iter().enumerate() {
                let orbit = &action.orbits()[action.orbit_of(fiber[0])];
                let mut w = vec![C64::new(0.0, 0.0); pi.source().len()];
                for &z in orbit {
                    w[z] -= 1.0 / orbit.len() as f64;
                }
                for &(y, v) in t.row(x) {
                    w[y] += v;
                }
                worst = worst.max(w.iter().map(|v| v.norm()).fold(0.0, f64::max));
            }
            worst
        }
        None => f64::INFINITY,
    };
    cert.push(Clause::bounded("rows_are_orbit_averages", rows_res, tol.section, pi.fibers().len()));

    let b = bundle.b();
    let pairs: Vec<(usize, usize)> = (0..b.dim()).flat_map(|k| (0..action.order()).map(move |s| (k, s))).collect();
    use rayon::prelude::*;
    let stability = pairs
        .par_iter()
        .map(|&(k, s)| {
            let f = &b.basis()[k];
            b.frame().residual(action.translate(f, s).values()) / f.sup_norm().max(1.0)
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max);
    cert.push(
        Clause::bounded("translates_stay_in_b", stability, tol.span, pairs.len())
            .with_note("f_s ∈ B for every basis member f and every group element s"),
    );
    cert.push(invariant_intersection_clause(bundle.a(), b, pi, tol)?);
    Ok(cert)
}

#[derive(Debug, Clone)]
pub struct BicontractiveAnalysis {
    pub is_bicontractive: bool,
    /// `θ = 2P - I`.
    pub theta: OperatorTable,
    /// The involution with `θ f = f ∘ ρ`, when `θ` is a composition operator.
    pub rho: Option<Vec<usize>>,
    pub action: Option<GroupAction>,
    pub certificate: Certificate,
}

/// Tests `‖P‖ = ‖I - P‖ = 1` for a unital projection on `C(Y)` and, if so,
/// recovers the involution behind `θ = 2P - I`.
pub fn bicontractive_analyze(
    p: &OperatorTable,
    b: &FunctionSystem,
    probes: &ProbeSet,
    tol: &Tolerances,
) -> Result<BicontractiveAnalysis> {
    let y = p.source().clone();
    if !same_space(&y, p.target()) || !same_space(&y, b.space()) {
        return Err(Error::input("projection must act on the system's space"));
    }
    let idem = p.compose(p)?.max_entry_diff(p);
    if idem > 1e-10 {
        return Err(Error::input(format!("operator is not a projection (|P² - P| = {idem:e})")));
    }
    let unital = p.unital_residual();
    if unital > tol.unital.max(1e-10) {
        return Err(Error::input(format!("projection is not unital (|P1 - 1| = {unital:e})")));
    }
    let id = OperatorTable::identity(y.clone());
    let one = C64::new(1.0, 0.0);
    let i_minus_p = id.combine(one, p, -one)?;
    let norm_p = p.norm();
    let norm_q = i_minus_p.norm();
    let is_bicontractive = (norm_p - 1.0).abs() <= tol.norm && (norm_q - 1.0).abs() <= tol.norm;
    let theta = p.combine(C64::new(2.0, 0.0), &id, -one)?;
    let involution = theta.compose(&theta)?.max_entry_diff(&id);
    let mut mult: f64 = 0.0;
    for f in &probes.tables {
        let tf = theta.apply(f.values());
        for g in &probes.tables {
            let fg: Vec<C64> = f.values().iter().zip(g.values()).map(|(a, b)| a * b).collect();
            let lhs = theta.apply(&fg);
            let tg = theta.apply(g.values());
            let rhs: Vec<C64> = tf.iter().zip(&tg).map(|(a, b)| a * b).collect();
            mult = mult.max(linalg::max_abs_diff(&lhs, &rhs));
        }
    }
    let rho: Option<Vec<usize>> = theta
        .rows()
        .iter()
        .map(|row| {
            let big: Vec<&(usize, C64)> = row.iter().filter(|(_, w)| w.norm() > 1e-9).collect();
            match big.as_slice() {
                [(z, w)] if (w - one).norm() <= 1e-9 => Some(*z),
                _ => None,
            }
        })
        .collect();
    let rho = rho.filter(|r| (0..r.len()).all(|y| r[r[y]] == y));

    let mut cert = Certificate::new("bicontractive_projection");
    cert.probes = Some(probes.record.clone());
    cert.push(Clause::bounded("idempotent", idem, 1e-10, y.len()).informational());
    cert.push(Clause::bounded("norm_p", (norm_p - 1.0).abs(), tol.norm, y.len()).with_note(format!("‖P‖ = {norm_p}")));
    cert.push(
        Clause::bounded("norm_i_minus_p", (norm_q - 1.0).abs(), tol.norm, y.len())
            .with_note(format!("‖I - P‖ = {norm_q}")),
    );
    cert.push(Clause::bounded("theta_involution", involution, tol.section, y.len()));
    cert.push(Clause::bounded("theta_multiplicative", mult, tol.algebraic, probes.tables.len().pow(2)));
    let rho_note = match &rho {
        Some(r) => format!("involution with {} fixed points", (0..r.len()).filter(|&i| r[i] == i).count()),
        None => "θ rows are not single unit point masses; no composition structure".to_string(),
    };
    cert.push(Clause::flag("rho_recovered", rho.is_some(), if rho.is_some() { 0.0 } else { 1.0 }, 0.0, y.len()).with_note(rho_note));

    let action = match &rho {
        Some(r) if is_bicontractive => {
            let ident: Vec<usize> = (0..r.len()).collect();
            let elems = if *r == ident { vec![ident] } else { vec![ident, r.clone()] };
            Some(make_action(y.clone(), elems)?)
        }
        _ => None,
    };
    Ok(BicontractiveAnalysis {
        is_bicontractive,
        theta,
        rho,
        action,
        certificate: cert,
    })
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// `ψ: Y -> X^q`, when a bijection was found.
    pub psi: Option<SurjectionMap>,
    pub matched: bool,
    /// Labels of two points of `Y` with the same image.
    pub collision: Option<(String, String)>,
    pub cole: ColeBundle,
    pub certificate: Certificate,
}

/// Rebuilds the Cole extension for `q(t) = t² - h`, where `h0² = Π*(h)`,
/// and matches `Y` to `X^q` through `ψ(y) = (Π(y), h0(y))`.
///
/// `generated_by_h0` is the caller's declaration that `B` is generated by
/// `Π*(A)` and `h0`; it is recorded, not verified.
pub fn reconstruct_cole(
    bundle: &ExtensionBundle,
    rho: &[usize],
    h0: &FunctionTable,
    generated_by_h0: bool,
    merge_tol: f64,
    tol: &Tolerances,
) -> Result<Reconstruction> {
    let t = bundle.t().ok_or_else(|| Error::input("bundle has no averaging operator"))?;
    let pi = bundle.pi();
    let y = pi.source();
    if !same_space(h0.space(), y) {
        return Err(Error::input("h0 does not live on the cover"));
    }
    if rho.len() != y.len() || rho.iter().any(|&z| z >= y.len()) {
        return Err(Error::input("involution does not match the cover"));
    }
    let th0 = t.apply(h0.values()).iter().map(|v| v.norm()).fold(0.0, f64::max);
    if th0 > 1e-9 {
        return Err(Error::input(format!("T(h0) does not vanish (max {th0:e})")));
    }
    let sq: Vec<C64> = h0.values().iter().map(|v| v * v).collect();
    let mut spread: f64 = 0.0;
    for fiber in pi.fibers() {
        for &z in fiber {
            spread = spread.max((sq[z] - sq[fiber[0]]).norm());
        }
    }
    if spread > 1e-9 {
        return Err(Error::Reconstruction(format!("h0² is not constant on fibers (spread {spread:e})")));
    }
    let x = pi.target().clone();
    let h = FunctionTable::new(x.clone(), pi.fibers().iter().map(|f| sq[f[0]]).collect())?;
    let zero = FunctionTable::constant(x.clone(), C64::new(0.0, 0.0));
    let spec = ColeSpec::new(bundle.a().clone(), vec![h.scale(C64::new(-1.0, 0.0)), zero], None)?;
    let cole = cole_extend(&spec, merge_tol, tol.span)?;
    let piq = cole.bundle.pi();
    let xq = piq.source().clone();

    let mut image = vec![usize::MAX; y.len()];
    let mut owner: Vec<Option<usize>> = vec![None; xq.len()];
    let mut collision = None;
    let mut unmatched = None;
    for z in 0..y.len() {
        let xz = pi.apply(z);
        let hit = piq
            .fiber(xz)?
            .iter()
            .copied()
            .find(|&w| (cole.p_q.values()[w] - h0.values()[z]).norm() <= merge_tol);
        match hit {
            None => {
                unmatched.get_or_insert(z);
            }
            Some(w) => {
                image[z] = w;
                match owner[w] {
                    Some(prev) if collision.is_none() => collision = Some((y.label(prev).to_string(), y.label(z).to_string())),
                    Some(_) => {}
                    None => owner[w] = Some(z),
                }
            }
        }
    }
    let matched = collision.is_none() && unmatched.is_none() && y.len() == xq.len();

    let mut cert = Certificate::new("cole_reconstruction");
    cert.push(Clause::bounded("t_h0_vanishes", th0, 1e-9, y.len()));
    cert.push(Clause::bounded("h0_square_fiber_constant", spread, 1e-9, y.len()));
    let match_note = match (&collision, unmatched) {
        (Some((a, b)), _) => format!("points {a} and {b} have the same image"),
        (None, Some(z)) => format!("no root over the base matches h0 at {}", y.label(z)),
        (None, None) if !matched => "cover and root locus have different sizes".to_string(),
        _ => "ψ is a bijection".to_string(),
    };
    cert.push(Clause::flag("psi_bijective", matched, if matched { 0.0 } else { 1.0 }, 0.0, y.len()).with_note(match_note));
    cert.push(Clause::info(
        "b_generated_by_h0",
        if generated_by_h0 {
            "declared by the caller: B is generated by Π*(A) and h0"
        } else {
            "not declared: B may be larger than the algebra generated by Π*(A) and h0"
        },
    ));

    let psi = if matched {
        let psi = make_surjection(y.clone(), xq.clone(), image.clone())?;
        let compat = (0..y.len()).filter(|&z| piq.apply(image[z]) != pi.apply(z)).count();
        cert.push(Clause::flag("base_compatible", compat == 0, compat as f64, 0.0, y.len()));
        let mut neg: f64 = 0.0;
        let mut pq: f64 = 0.0;
        for z in 0..y.len() {
            let pz = cole.p_q.values()[image[z]];
            neg = neg.max((cole.p_q.values()[image[rho[z]]] + pz).norm());
            pq = pq.max((pz - h0.values()[z]).norm());
        }
        cert.push(Clause::bounded("rho_is_root_negation", neg, 1e-9, y.len()));
        cert.push(Clause::bounded("p_q_pulls_back_to_h0", pq, merge_tol, y.len()));
        let b = bundle.b();
        let mut worst: f64 = 0.0;
        for g in cole.bundle.b().basis() {
            let vals = image.iter().map(|&w| g.values()[w]).collect();
            let pulled = FunctionTable::new(y.clone(), vals)?;
            worst = worst.max(b.span_residual(&pulled)? / g.sup_norm().max(1.0));
        }
        cert.push(Clause::bounded("pullback_of_aq_in_b", worst, 1e-8, cole.bundle.b().dim()));
        Some(psi)
    } else {
        None
    };
    Ok(Reconstruction {
        psi,
        matched,
        collision,
        cole,
        certificate: cert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::averaging::{default_probes, gce_certificate};
    use crate::funcsys::generate_system;
    use crate::space::make_space;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Two sheets ±1 over four base points on a line; sheet swap as Z2.
    fn sheets() -> (Arc<FiniteSpace>, Vec<usize>) {
        let raw: Vec<Vec<C64>> = (0..4)
            .flat_map(|i| [vec![c(i as f64, 0.0), c(1.0, 0.0)], vec![c(i as f64, 0.0), c(-1.0, 0.0)]])
            .collect();
        let s = Arc::new(make_space(&raw, 1e-8).unwrap());
        let swap = (0..s.len())
            .map(|y| {
                let mut t = s.coords(y).to_vec();
                t[1] = -t[1];
                (0..s.len()).find(|&z| s.coords(z) == t.as_slice()).unwrap()
            })
            .collect();
        (s, swap)
    }

    fn sheet_system(s: &Arc<FiniteSpace>) -> FunctionSystem {
        let gens = vec![
            FunctionTable::coordinate(s.clone(), 0).named("x"),
            FunctionTable::coordinate(s.clone(), 1).named("s"),
        ];
        generate_system(s.clone(), gens, 4, 1e-9).unwrap()
    }

    #[test]
    fn trivial_and_swap_actions() {
        let (s, swap) = sheets();
        let id: Vec<usize> = (0..s.len()).collect();
        let triv = make_action(s.clone(), vec![id.clone()]).unwrap();
        assert!(triv.orbits().iter().all(|o| o.len() == 1));
        let z2 = make_action(s.clone(), vec![id.clone(), swap.clone()]).unwrap();
        assert_eq!(z2.orbits().len(), 4);
        assert_eq!(z2.inverse(1), 1);
        assert!(make_action(s.clone(), vec![swap.clone()]).is_err());
        let mut bad = swap.clone();
        bad.swap(0, 2);
        assert!(make_action(s.clone(), vec![id, swap, bad]).is_err());
    }

    #[test]
    fn haar_projector_laws() {
        let (s, swap) = sheets();
        let z2 = cyclic_action(s.clone(), swap).unwrap();
        assert_eq!(z2.order(), 2);
        let p = z2.haar_projection();
        assert!(p.compose(&p).unwrap().max_entry_diff(&p) <= 1e-12);
        assert_eq!(p.norm(), 1.0);
        let f = FunctionTable::new(s.clone(), (0..s.len()).map(|i| c(i as f64, -(i as f64))).collect()).unwrap();
        assert_eq!(p.apply(z2.translate(&f, 1).values()), p.apply(f.values()));
    }

    #[test]
    fn haar_extension_of_sheets() {
        let (s, swap) = sheets();
        let z2 = cyclic_action(s.clone(), swap.clone()).unwrap();
        let b = sheet_system(&s);
        let bundle = haar_extension(&z2, &b, 1e-8, 1e-9).unwrap();
        assert_eq!(bundle.pi().target().len(), 4);
        let tol = Tolerances::default();
        let probes = default_probes(&b, 0, 5);
        let cert = implemented_report(&bundle, &z2, &probes, &tol).unwrap();
        assert!(cert.passes(), "{}", cert.render_table());
        let g = gce_certificate(&bundle, &probes, &tol).unwrap();
        assert!(g.passes(), "{}", g.render_table());

        let analysis = bicontractive_analyze(&bundle.projection().unwrap(), &b, &probes, &tol).unwrap();
        assert!(analysis.is_bicontractive);
        assert_eq!(analysis.rho.as_deref(), Some(swap.as_slice()));

        let trivial = make_action(s.clone(), vec![(0..s.len()).collect()]).unwrap();
        let tb = haar_extension(&trivial, &b, 1e-8, 1e-9).unwrap();
        assert_eq!(tb.pi().target().len(), s.len());
        assert!(tb.t().unwrap().max_entry_diff(&OperatorTable::identity(s.clone())).is_finite());
    }

    #[test]
    fn merged_orbits_fail_the_fiber_clause() {
        let (s, swap) = sheets();
        let z2 = cyclic_action(s.clone(), swap).unwrap();
        let bundle = haar_extension(&z2, &FunctionSystem::full(s.clone()), 1e-8, 1e-9).unwrap();
        // rotate base points 0 <-> 1 on both sheets: orbits of size 4
        let shift: Vec<usize> = (0..s.len())
            .map(|y| {
                let mut t = s.coords(y).to_vec();
                t[0] = c(if t[0].re < 2.0 { 1.0 - t[0].re } else { t[0].re }, 0.0);
                (0..s.len()).find(|&z| s.coords(z) == t.as_slice()).unwrap()
            })
            .collect();
        let big = cyclic_action(s.clone(), shift).unwrap();
        let probes = default_probes(bundle.b(), 0, 0);
        let cert = implemented_report(&bundle, &big, &probes, &Tolerances::default()).unwrap();
        assert!(!cert.clause("orbits_equal_fibers").unwrap().pass);
    }

    #[test]
    fn unbalanced_projection_is_not_bicontractive() {
        let (s, swap) = sheets();
        let rows = (0..s.len())
            .map(|y| {
                let (lo, hi) = if y < swap[y] { (y, swap[y]) } else { (swap[y], y) };
                vec![(lo, c(0.75, 0.0)), (hi, c(0.25, 0.0))]
            })
            .collect();
        let p = OperatorTable::from_sparse(s.clone(), s.clone(), rows).unwrap();
        let b = FunctionSystem::full(s.clone());
        let probes = default_probes(&b, 0, 0);
        let a = bicontractive_analyze(&p, &b, &probes, &Tolerances::default()).unwrap();
        assert!(!a.is_bicontractive);
        let nq = OperatorTable::identity(s.clone()).combine(c(1.0, 0.0), &p, c(-1.0, 0.0)).unwrap().norm();
        assert!((nq - 1.5).abs() < 1e-15);
        let not_proj = OperatorTable::from_sparse(s.clone(), s.clone(), (0..s.len()).map(|y| vec![(swap[y], c(1.0, 0.0))]).collect()).unwrap();
        assert!(bicontractive_analyze(&not_proj, &b, &probes, &Tolerances::default()).is_err());
    }

    #[test]
    fn reconstruct_copy_extension() {
        let (s, swap) = sheets();
        let z2 = cyclic_action(s.clone(), swap.clone()).unwrap();
        let b = sheet_system(&s);
        let bundle = haar_extension(&z2, &b, 1e-8, 1e-9).unwrap();
        let h0 = FunctionTable::coordinate(s.clone(), 1);
        let r = reconstruct_cole(&bundle, &swap, &h0, true, 1e-8, &Tolerances::default()).unwrap();
        assert!(r.matched, "{}", r.certificate.render_table());
        assert!(r.certificate.passes(), "{}", r.certificate.render_table());
        // h0 vanishing on one whole fiber collapses it
        let vals = (0..s.len()).map(|y| if s.coords(y)[0].re == 0.0 { c(0.0, 0.0) } else { s.coords(y)[1] }).collect();
        let h0 = FunctionTable::new(s.clone(), vals).unwrap();
        let mut b2 = b.clone();
        b2 = FunctionSystem::from_tables(s.clone(), b2.basis().iter().cloned().chain([h0.clone()]).collect(), vec![], vec![], 4, 1e-9).unwrap();
        let bundle2 = haar_extension(&z2, &b2, 1e-8, 1e-9).unwrap();
        let r = reconstruct_cole(&bundle2, &swap, &h0, false, 1e-8, &Tolerances::default()).unwrap();
        assert!(!r.matched);
        assert!(r.collision.is_some());
    }
}
