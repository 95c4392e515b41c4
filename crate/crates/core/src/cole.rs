//! Cole extensions: adjoining the roots of a monic polynomial over `A`.

use rayon::prelude::*;

use crate::averaging::{gce_certificate, BundleFlags, ExtensionBundle, OperatorTable, ProbeSet};
use crate::boundary::choquet_set;
use crate::cert::{Certificate, Clause};
use crate::error::{Error, Result};
use crate::funcsys::{generate_weighted_system, FunctionSystem, FunctionTable};
use crate::linalg::{self, C64};
use crate::space::{fibered_space, make_surjection, same_space};
use crate::tol::Tolerances;
use std::sync::Arc;

/// Relative residual demanded of every root.
pub const ROOT_TOL: f64 = 1e-10;
const ABERTH_ITERATIONS: usize = 1000;

/// `p(z)` and `p'(z)` for the monic `t^n + c[n-1] t^(n-1) + ... + c[0]`.
fn eval_monic(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(1.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

fn coefficient_scale(c: &[C64]) -> f64 {
    c.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

fn residual_ratio(c: &[C64], z: C64) -> f64 {
    let n = c.len() as i32;
    eval_monic(c, z).0.norm() / (coefficient_scale(c) * (1.0 + z.norm()).powi(n))
}

fn clean(z: C64) -> C64 {
    C64::new(z.re + 0.0, z.im + 0.0)
}

fn aberth(c: &[C64]) -> Vec<C64> {
    let n = c.len();
    let center = -c[n - 1] / n as f64;
    let radius = c
        .iter()
        .enumerate()
        .map(|(k, ck)| ck.norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        * 2.0
        + 1e-3;
    let mut z: Vec<C64> = (0..n)
        .map(|k| center + C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.7))
        .collect();
    for _ in 0..ABERTH_ITERATIONS {
        let mut moved: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = eval_monic(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[k] -= w;
            moved = moved.max(w.norm() / (1.0 + z[k].norm()));
        }
        if moved <= 4.0 * f64::EPSILON {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_monic(c, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *zk - p / dp;
            if eval_monic(c, cand).0.norm() < p.norm() {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    z
}

/// The `n = coeffs.len()` roots, with multiplicity, of
/// `t^n + coeffs[n-1] t^(n-1) + ... + coeffs[0]`, sorted by real then
/// imaginary part. Each root satisfies
/// `|q(z)| <= 1e-10 · max(1, max|coeff|) · (1 + |z|)^n`.
pub fn roots_of_monic(coeffs: &[C64]) -> Result<Vec<C64>> {
    let n = coeffs.len();
    if n == 0 {
        return Err(Error::input("a monic polynomial needs degree at least 1"));
    }
    if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::input("coefficients must be finite"));
    }
    let mut roots = match n {
        1 => vec![-coeffs[0]],
        2 => {
            let (b, c) = (coeffs[1], coeffs[0]);
            let s = (b * b - 4.0 * c).sqrt();
            let big = if (b + s).norm() >= (b - s).norm() { b + s } else { b - s };
            if big.norm() == 0.0 {
                vec![C64::new(0.0, 0.0); 2]
            } else {
                let r1 = -big / 2.0;
                vec![r1, c / r1]
            }
        }
        _ if coeffs.iter().all(|z| z.norm() == 0.0) => vec![C64::new(0.0, 0.0); n],
        _ => aberth(coeffs),
    };
    let worst = roots.iter().map(|&z| residual_ratio(coeffs, z)).fold(0.0, f64::max);
    if !(worst <= ROOT_TOL) {
        return Err(Error::RootFinder {
            point: String::new(),
            residual: worst,
        });
    }
    for z in roots.iter_mut() {
        *z = clean(*z);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// A monic `q(t) = t^n + h_(n-1) t^(n-1) + ... + h_0` over `A`.
#[derive(Debug, Clone)]
pub struct ColeSpec {
    pub base: FunctionSystem,
    /// `h_0, ..., h_(n-1)`.
    pub coefficients: Vec<FunctionTable>,
    /// Weighted degree cap of `A^q`; defaults to `n` times the base cap.
    pub extension_degree_cap: Option<u32>,
}

impl ColeSpec {
    pub fn new(base: FunctionSystem, coefficients: Vec<FunctionTable>, extension_degree_cap: Option<u32>) -> Result<ColeSpec> {
        let spec = ColeSpec {
            base,
            coefficients,
            extension_degree_cap,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree() < 2 {
            return Err(Error::input("the polynomial must have degree at least 2"));
        }
        for (i, h) in self.coefficients.iter().enumerate() {
            if !same_space(h.space(), self.base.space()) {
                return Err(Error::input(format!("coefficient h_{i} is not on the base space")));
            }
            let r = self.base.span_residual(h)?;
            if r > 1e-9 {
                return Err(Error::validation(format!(
                    "coefficient h_{i} is not in the base system (residual {r:e})"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ColeBundle {
    pub bundle: ExtensionBundle,
    /// The `n` roots over each base point, with multiplicity.
    pub root_slots: Vec<Vec<C64>>,
    pub p_q: FunctionTable,
    pub coefficients: Vec<FunctionTable>,
}

impl ColeBundle {
    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// `max_x |Σ roots + h_(n-1)|` and `max_x |Π roots - (-1)^n h_0| / scale(x)`.
    pub fn vieta_residuals(&self) -> (f64, f64) {
        let n = self.degree();
        let mut sum_res: f64 = 0.0;
        let mut prod_res: f64 = 0.0;
        for (x, roots) in self.root_slots.iter().enumerate() {
            let h: Vec<C64> = self.coefficients.iter().map(|t| t.values()[x]).collect();
            let s: C64 = roots.iter().sum();
            let p: C64 = roots.iter().product();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sum_res = sum_res.max((s + h[n - 1]).norm());
            prod_res = prod_res.max((p - h[0] * sign).norm() / coefficient_scale(&h));
        }
        (sum_res, prod_res)
    }
}

/// Builds `X^q`, `Π_q`, `p_q`, `A^q` and the root-average operator.
///
/// `A^q` is generated by `p_q` (weight 1) and the pulled-back generators
/// of `A` (weight `n` times their weight in `A`), so the operator maps
/// in-cap members of `A^q` into the cap of `A`.
pub fn cole_extend(spec: &ColeSpec, merge_tol: f64, span_tol: f64) -> Result<ColeBundle> {
    spec.validate()?;
    let a = &spec.base;
    let x_space = a.space().clone();
    let n = spec.degree();
    let root_slots: Vec<Vec<C64>> = (0..x_space.len())
        .into_par_iter()
        .map(|x| {
            let c: Vec<C64> = spec.coefficients.iter().map(|t| t.values()[x]).collect();
            roots_of_monic(&c).map_err(|e| match e {
                Error::RootFinder { residual, .. } => Error::RootFinder {
                    point: x_space.label(x).to_string(),
                    residual,
                },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let extra: Vec<Vec<Vec<C64>>> = root_slots.iter().map(|r| r.iter().map(|&z| vec![z]).collect()).collect();
    let (y, assignment, slots) = fibered_space(&x_space, &extra, merge_tol)?;
    let y = Arc::new(y);
    let pi = make_surjection(y.clone(), x_space.clone(), assignment)?;
    let p_q = FunctionTable::coordinate(y.clone(), x_space.arity()).named("p_q");
    let w = C64::new(1.0 / n as f64, 0.0);
    let rows = slots.iter().map(|s| s.iter().map(|&i| (i, w)).collect()).collect();
    let t = OperatorTable::from_sparse(y.clone(), x_space.clone(), rows)?;

    let mut gens = vec![p_q.clone()];
    let mut weights = vec![1];
    if a.generators().is_empty() {
        // no generating set recorded: every basis member is a degree-one generator
        for g in a.basis().iter().skip(1) {
            gens.push(g.pullback(&pi)?);
            weights.push(n as u32);
        }
    } else {
        for (g, &wg) in a.generators().iter().zip(a.generator_weights()) {
            gens.push(g.pullback(&pi)?);
            weights.push(wg * n as u32);
        }
    }
    let cap = spec.extension_degree_cap.unwrap_or(a.degree_cap() * n as u32);
    let b = generate_weighted_system(y, gens, weights, cap, a.rank_tol())?;
    let bundle = ExtensionBundle::new(a.clone(), b, pi, Some(t), BundleFlags::default(), span_tol)?
        .with_meta("construction", "cole")
        .with_meta("degree", n.to_string());
    Ok(ColeBundle {
        bundle,
        root_slots,
        p_q,
        coefficients: spec.coefficients.clone(),
    })
}

/// Extension checklist, fiber sizes and fiber spans, Vieta, and the
/// Shilov pullback.
pub fn cole_report(cb: &ColeBundle, probes: &ProbeSet, tol: &Tolerances) -> Result<Certificate> {
    let bundle = &cb.bundle;
    let mut cert = Certificate::new("cole_extension");
    cert.absorb("a", gce_certificate(bundle, probes, tol)?);

    let n = cb.degree();
    let pi = bundle.pi();
    let largest = pi.fibers().iter().map(Vec::len).max().unwrap_or(0);
    cert.push(
        Clause::flag("b_fiber_sizes", largest <= n, largest as f64, n as f64, pi.fibers().len())
            .with_note("largest fiber size against the degree"),
    );
    let mut deficient = 0usize;
    for fiber in pi.fibers() {
        let vecs: Vec<Vec<C64>> = bundle
            .b()
            .basis()
            .iter()
            .map(|b| fiber.iter().map(|&y| b.values()[y]).collect())
            .collect();
        if linalg::rank(&vecs, bundle.b().rank_tol()) != fiber.len() {
            deficient += 1;
        }
    }
    cert.push(
        Clause::flag("b_fiber_full_space", deficient == 0, deficient as f64, 0.0, pi.fibers().len())
            .with_note("fibers where A^q restricted is not the full function space"),
    );
    let (s, p) = cb.vieta_residuals();
    cert.push(Clause::bounded("vieta_sum", s, ROOT_TOL, cb.root_slots.len()));
    cert.push(Clause::bounded("vieta_product", p, ROOT_TOL, cb.root_slots.len()));
    cert.push(Clause::info(
        "c_naturality",
        "naturality quantifies over the character space and is out of scope on finite grids",
    ));
    let ga = choquet_set(bundle.a(), tol)?;
    let gb = choquet_set(bundle.b(), tol)?;
    let pulled = pi.preimage(&ga);
    let diff = symmetric_difference(&gb, &pulled);
    cert.push(
        Clause::flag("d_choquet_pullback", diff == 0, diff as f64, 0.0, pi.source().len())
            .with_note(format!("|Γ(A)| = {}, |Γ(A^q)| = {}, |Π⁻¹Γ(A)| = {}", ga.len(), gb.len(), pulled.len())),
    );
    Ok(cert)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> usize {
    let sa: std::collections::BTreeSet<_> = a.iter().collect();
    let sb: std::collections::BTreeSet<_> = b.iter().collect();
    sa.symmetric_difference(&sb).count()
}

/// The composite of `upper` (over `Y1`) and `lower` (`Y1` over `X`):
/// projection `Π_lower ∘ Π_upper`, operator `T_lower ∘ T_upper`.
pub fn compose_bundles(upper: &ExtensionBundle, lower: &ExtensionBundle, span_tol: f64) -> Result<ExtensionBundle> {
    if !same_space(upper.pi().target(), lower.pi().source()) {
        return Err(Error::input("upper bundle does not sit over the lower cover"));
    }
    let pi = lower.pi().after(upper.pi())?;
    let t = match (upper.t(), lower.t()) {
        (Some(tu), Some(tl)) => Some(tl.compose(tu)?),
        _ => None,
    };
    let out = ExtensionBundle::new(lower.a().clone(), upper.b().clone(), pi, t, BundleFlags::default(), span_tol)?;
    Ok(out.with_meta("construction", "composite"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::averaging::{default_probes, section_residual};
    use crate::funcsys::generate_system;
    use crate::space::{make_space, FiniteSpace};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn small_root_sets() {
        assert_eq!(roots_of_monic(&[c(-1.0, 0.0), c(0.0, 0.0)]).unwrap(), vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(roots_of_monic(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap(), vec![c(0.0, -1.0), c(0.0, 1.0)]);
        // (t-1)(t-2)(t-3)
        let r = roots_of_monic(&[c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0)]).unwrap();
        assert!(close(&r, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)], 1e-10), "{r:?}");
        assert_eq!(roots_of_monic(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap(), vec![c(0.0, 0.0); 2]);
        assert!(roots_of_monic(&[]).is_err());
    }

    #[test]
    fn repeated_and_complex_roots() {
        // (t-1)^3
        let r = roots_of_monic(&[c(-1.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0)]).unwrap();
        for z in &r {
            assert!((z - 1.0).norm() < 1e-4);
        }
        // t^4 + 1
        let r = roots_of_monic(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        for z in &r {
            assert!((z.powi(4) + 1.0).norm() < 1e-12);
        }
        let r = roots_of_monic(&[c(0.3, -0.2), c(-1.0, 2.0), c(0.5, 0.5), c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(r.len(), 5);
    }

    fn disk_base(cap: u32) -> FunctionSystem {
        let mut raw: Vec<Vec<C64>> = (0..16).map(|j| vec![C64::from_polar(1.0, std::f64::consts::PI * j as f64 / 8.0)]).collect();
        for i in -2i32..=2 {
            for k in -2i32..=2 {
                raw.push(vec![c(0.3 * i as f64, 0.3 * k as f64)]);
            }
        }
        let s: Arc<FiniteSpace> = Arc::new(make_space(&raw, 1e-8).unwrap());
        generate_system(s.clone(), vec![FunctionTable::coordinate(s, 0).named("z")], cap, 1e-9).unwrap()
    }

    #[test]
    fn copy_extension() {
        let a = disk_base(3);
        let s = a.space().clone();
        let h = vec![FunctionTable::constant(s.clone(), c(-1.0, 0.0)), FunctionTable::constant(s.clone(), c(0.0, 0.0))];
        let cb = cole_extend(&ColeSpec::new(a, h, None).unwrap(), 1e-8, 1e-9).unwrap();
        let b = &cb.bundle;
        assert_eq!(b.pi().source().len(), 2 * s.len());
        assert!(b.pi().fibers().iter().all(|f| f.len() == 2));
        assert_eq!(section_residual(b.t().unwrap(), b.pi(), b.a()).unwrap(), 0.0);
        let probes = default_probes(b.b(), 0, 5);
        let cert = cole_report(&cb, &probes, &Tolerances::default()).unwrap();
        assert!(cert.passes(), "{}", cert.render_table());
    }

    #[test]
    fn square_root_extension() {
        let a = disk_base(3);
        let s = a.space().clone();
        let z = FunctionTable::coordinate(s.clone(), 0);
        let h = vec![z.scale(c(-1.0, 0.0)), FunctionTable::constant(s.clone(), c(0.0, 0.0))];
        let cb = cole_extend(&ColeSpec::new(a, h, None).unwrap(), 1e-8, 1e-9).unwrap();
        let b = &cb.bundle;
        let origin = (0..s.len()).find(|&x| s.coords(x)[0].norm() == 0.0).unwrap();
        let pi = b.pi();
        assert_eq!(pi.fiber(origin).unwrap().len(), 1);
        assert_eq!(b.t().unwrap().row(origin), &[(pi.fiber(origin).unwrap()[0], c(1.0, 0.0))]);
        let tp = b.t().unwrap().apply(cb.p_q.values());
        assert!(tp.iter().all(|v| v.norm() <= 1e-12));
        let (vs, vp) = cb.vieta_residuals();
        assert!(vs <= 1e-10 && vp <= 1e-10);
        let probes = default_probes(b.b(), 0, 5);
        let cert = cole_report(&cb, &probes, &Tolerances::default()).unwrap();
        assert!(cert.passes(), "{}", cert.render_table());
    }

    #[test]
    fn tower_composes() {
        let a = disk_base(2);
        let s = a.space().clone();
        let z = FunctionTable::coordinate(s.clone(), 0);
        let zero = FunctionTable::constant(s.clone(), c(0.0, 0.0));
        let g1 = z.map(|v| -(v - 0.5) * (v - 0.5));
        let cb1 = cole_extend(&ColeSpec::new(a, vec![g1, zero], None).unwrap(), 1e-8, 1e-9).unwrap();
        let y1 = cb1.bundle.pi().source().clone();
        let g2 = z.map(|v| -(v + 0.5) * (v + 0.5)).pullback(cb1.bundle.pi()).unwrap();
        let spec2 = ColeSpec::new(cb1.bundle.b().clone(), vec![g2, FunctionTable::constant(y1, c(0.0, 0.0))], None).unwrap();
        let cb2 = cole_extend(&spec2, 1e-8, 1e-9).unwrap();
        let comp = compose_bundles(&cb2.bundle, &cb1.bundle, 1e-9).unwrap();
        let t = comp.t().unwrap();
        assert!(t.unital_residual() <= 1e-12);
        assert!((t.norm() - 1.0).abs() <= 1e-12);
        assert!(section_residual(t, comp.pi(), comp.a()).unwrap() <= 1e-12);
        // composition of averages, either way round
        let f: Vec<C64> = (0..comp.pi().source().len()).map(|i| c(i as f64, 1.0)).collect();
        let stepwise = cb1.bundle.t().unwrap().apply(&cb2.bundle.t().unwrap().apply(&f));
        assert!(close(&t.apply(&f), &stepwise, 1e-12));
    }
}
