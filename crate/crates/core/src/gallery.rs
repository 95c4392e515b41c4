//! Builders for the standard examples, each ready for the certificate suites.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::averaging::{BundleFlags, ExtensionBundle, OperatorTable};
use crate::error::{Error, Result};
use crate::funcsys::{generate_system, FunctionSystem, FunctionTable, DEFAULT_RANK_TOL};
use crate::group_ext::{cyclic_action, GroupAction};
use crate::linalg::{self, C64};
use crate::space::{fibered_space, make_space, make_surjection, FiniteSpace, Point, DEFAULT_MERGE_TOL};

const SPAN_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Boundary circle samples plus a square lattice centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiskGrid {
    pub boundary: usize,
    /// Lattice points per side.
    pub lattice: usize,
    pub spacing: f64,
}

impl Default for DiskGrid {
    fn default() -> Self {
        DiskGrid {
            boundary: 32,
            lattice: 7,
            spacing: 0.2,
        }
    }
}

impl DiskGrid {
    pub fn points(&self) -> Result<Vec<C64>> {
        let mut pts: Vec<C64> = (0..self.boundary)
            .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / self.boundary as f64))
            .collect();
        let half = (self.lattice as f64 - 1.0) / 2.0;
        for i in 0..self.lattice {
            for j in 0..self.lattice {
                let z = c((i as f64 - half) * self.spacing, (j as f64 - half) * self.spacing);
                if z.norm() >= 1.0 - 1e-9 {
                    return Err(Error::input(format!("lattice point {z} is not interior")));
                }
                pts.push(z);
            }
        }
        if pts.is_empty() {
            return Err(Error::input("empty disk grid"));
        }
        Ok(pts)
    }

    pub fn space(&self) -> Result<Arc<FiniteSpace>> {
        let raw: Vec<Vec<C64>> = self.points()?.into_iter().map(|z| vec![z]).collect();
        Ok(Arc::new(make_space(&raw, DEFAULT_MERGE_TOL)?))
    }
}

/// Polynomials in `z` of degree at most `cap` on a disk grid, with warnings
/// about grid features the boundary computations rely on.
pub fn build_disk_algebra(grid: &DiskGrid, cap: u32) -> Result<(FunctionSystem, Vec<String>)> {
    let s = grid.space()?;
    let mut warnings = Vec::new();
    if grid.boundary == 0 {
        warnings.push("grid has no boundary circle samples; Choquet scans will not see the circle".to_string());
    } else if (grid.boundary as u32) <= cap {
        warnings.push(format!(
            "{} boundary samples do not exceed the degree cap {cap}; the circle mean no longer reproduces z^{}",
            grid.boundary, grid.boundary
        ));
    }
    let z = FunctionTable::coordinate(s.clone(), 0).named("z");
    Ok((generate_system(s, vec![z], cap, DEFAULT_RANK_TOL)?, warnings))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BasenerParams {
    pub r0: f64,
    pub r1: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub m: usize,
    pub cap: u32,
}

impl Default for BasenerParams {
    fn default() -> Self {
        BasenerParams {
            r0: 0.4,
            r1: 0.7,
            n_r: 5,
            n_theta: 24,
            m: 64,
            cap: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GalleryBundle {
    pub bundle: ExtensionBundle,
    pub action: Option<GroupAction>,
}

fn meta(bundle: ExtensionBundle, name: &str, params: &impl Serialize) -> ExtensionBundle {
    let p = serde_json::to_string(params).expect("parameters serialize");
    bundle.with_meta("construction", name).with_meta("parameters", p)
}

/// Rotating every fiber one slot forward; fibers are sampled in slot order.
fn slot_rotation(space: &Arc<FiniteSpace>, slots: &[Vec<usize>]) -> Result<GroupAction> {
    let mut perm: Vec<usize> = (0..space.len()).collect();
    for s in slots {
        if s.len() > 1 {
            for (k, &y) in s.iter().enumerate() {
                perm[y] = s[(k + 1) % s.len()];
            }
        }
    }
    cyclic_action(space.clone(), perm)
}

/// The annulus model: `K` an annulus grid, `Y` the points `(z, w)` with
/// `|z|² + |w|² = 1`, each fiber sampled at `M` points. `A` is generated by
/// `z, 1/z`; `B` by `p, 1/p, z, 1/z`; `T` is the fiber average.
pub fn build_basener(params: &BasenerParams) -> Result<GalleryBundle> {
    let BasenerParams { r0, r1, n_r, n_theta, m, cap } = *params;
    if !(0.0 < r0 && r0 < r1 && r1 <= 1.0 - 1e-3) {
        return Err(Error::input(format!("need 0 < r0 < r1 <= 1 - 1e-3, got r0 = {r0}, r1 = {r1}")));
    }
    if n_r < 1 || n_theta < 1 || m < 2 || cap < 1 {
        return Err(Error::input("grid sizes, M and cap must be positive (M >= 2)"));
    }
    let mut raw = Vec::with_capacity(n_r * n_theta);
    for i in 0..n_r {
        let r = if n_r == 1 { r0 } else { r0 + (r1 - r0) * i as f64 / (n_r - 1) as f64 };
        for j in 0..n_theta {
            raw.push(vec![C64::from_polar(r, 2.0 * PI * j as f64 / n_theta as f64)]);
        }
    }
    let x = Arc::new(make_space(&raw, DEFAULT_MERGE_TOL)?);
    let z = FunctionTable::coordinate(x.clone(), 0).named("z");
    let zinv = z.map(|v| 1.0 / v).named("1/z");
    let a = generate_system(x.clone(), vec![z.clone(), zinv.clone()], cap, DEFAULT_RANK_TOL)?;

    let extra: Vec<Vec<Vec<C64>>> = (0..x.len())
        .map(|i| {
            let radius = (1.0 - x.coords(i)[0].norm_sqr()).sqrt();
            (0..m).map(|k| vec![C64::from_polar(radius, 2.0 * PI * k as f64 / m as f64)]).collect()
        })
        .collect();
    let (y, assignment, slots) = fibered_space(&x, &extra, DEFAULT_MERGE_TOL)?;
    let y = Arc::new(y);
    let pi = make_surjection(y.clone(), x.clone(), assignment)?;
    let p = FunctionTable::coordinate(y.clone(), 1).named("p");
    let pinv = p.map(|v| 1.0 / v).named("1/p");
    let gens = vec![p, pinv, z.pullback(&pi)?, zinv.pullback(&pi)?];
    let b = generate_system(y.clone(), gens, cap, DEFAULT_RANK_TOL)?;
    let t = OperatorTable::fiber_average(&pi);
    let flags = BundleFlags {
        open_map: true,
        group_implemented: true,
    };
    let bundle = meta(ExtensionBundle::new(a, b, pi, Some(t), flags, SPAN_TOL)?, "basener", params);
    let action = slot_rotation(&y, &slots)?;
    Ok(GalleryBundle {
        bundle,
        action: Some(action),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DfpParams {
    pub grid: DiskGrid,
    pub base_cap: u32,
    /// Number of null functions `f_n = z·g_n`.
    pub n: usize,
    pub m: usize,
    pub cap: u32,
}

impl Default for DfpParams {
    fn default() -> Self {
        DfpParams {
            grid: DiskGrid::default(),
            base_cap: 3,
            n: 8,
            m: 32,
            cap: 3,
        }
    }
}

/// `f_n(z) = z (2 + e^{2πin/N} z) / (3(n+1))`: vanishes only at 0 on the
/// closed disk and has degree 2.
pub fn dfp_null_functions(x: &Arc<FiniteSpace>, n: usize) -> Vec<FunctionTable> {
    (0..n)
        .map(|k| {
            let u = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            let s = 3.0 * (k + 1) as f64;
            FunctionTable::coordinate(x.clone(), 0)
                .map(|z| z * (2.0 + u * z) / s)
                .named(format!("f{}", k + 1))
        })
        .collect()
}

/// The distinguished-point construction over the truncated disk algebra with
/// `x0 = 0` and the null functions of [`dfp_null_functions`].
pub fn build_dfp(params: &DfpParams) -> Result<GalleryBundle> {
    let (base, _) = build_disk_algebra(&params.grid, params.base_cap)?;
    let x = base.space().clone();
    let x0 = (0..x.len())
        .find(|&i| x.coords(i)[0].norm() == 0.0)
        .ok_or_else(|| Error::input("disk grid must contain the origin"))?;
    let f = dfp_null_functions(&x, params.n);
    let g = build_dfp_from(&base, x0, &f, params.m, params.cap)?;
    Ok(GalleryBundle {
        bundle: meta(g.bundle, "dfp", params),
        action: g.action,
    })
}

/// Points `(x, z_1..z_N, w)` with `z_n w = f_n(x)`, `|w|² = max |f_n(x)|`,
/// `|z_n|² <= |f_n(x)|`; `M` samples of `w` per fiber and a single point
/// where every `f_n` vanishes. `B` is generated by `Π*` of the base
/// generators, the `z_n` and `w`.
pub fn build_dfp_from(
    base: &FunctionSystem,
    x0: usize,
    f: &[FunctionTable],
    m: usize,
    cap: u32,
) -> Result<GalleryBundle> {
    let x = base.space().clone();
    if f.is_empty() {
        return Err(Error::input("at least one null function is required"));
    }
    if m < 2 {
        return Err(Error::input("M must be at least 2"));
    }
    for (k, fk) in f.iter().enumerate() {
        if fk.values()[x0].norm() > 1e-12 {
            return Err(Error::input(format!("f{} does not vanish at {}", k + 1, x.label(x0))));
        }
    }
    let n = f.len();
    let extra: Vec<Vec<Vec<C64>>> = (0..x.len())
        .map(|i| {
            let mx = f.iter().map(|fk| fk.values()[i].norm()).fold(0.0, f64::max);
            if mx == 0.0 {
                return vec![vec![c(0.0, 0.0); n + 1]];
            }
            (0..m)
                .map(|k| {
                    let w = C64::from_polar(mx.sqrt(), 2.0 * PI * k as f64 / m as f64);
                    let mut t: Vec<C64> = f.iter().map(|fk| fk.values()[i] / w).collect();
                    t.push(w);
                    t
                })
                .collect()
        })
        .collect();
    let (y, assignment, slots) = fibered_space(&x, &extra, DEFAULT_MERGE_TOL)?;
    let y = Arc::new(y);
    let pi = make_surjection(y.clone(), x.clone(), assignment)?;
    let d = x.arity();
    let mut gens = base
        .generators()
        .iter()
        .map(|g| {
            let mut p = g.pullback(&pi)?;
            if let Some(name) = g.name() {
                p = p.named(name);
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    for k in 0..n {
        gens.push(FunctionTable::coordinate(y.clone(), d + k).named(format!("z{}", k + 1)));
    }
    gens.push(FunctionTable::coordinate(y.clone(), d + n).named("w"));
    let b = generate_system(y.clone(), gens, cap, base.rank_tol())?;
    let t = OperatorTable::fiber_average(&pi);
    let flags = BundleFlags {
        open_map: true,
        group_implemented: true,
    };
    let bundle = ExtensionBundle::new(base.clone(), b, pi, Some(t), flags, SPAN_TOL)?
        .with_meta("null_functions", n.to_string())
        .with_meta("distinguished_point", x.label(x0));
    let action = slot_rotation(&y, &slots)?;
    Ok(GalleryBundle {
        bundle,
        action: Some(action),
    })
}

/// Residuals of the three defining constraints at every point of a DFP
/// cover: `max |z_n w - f_n|`, `max ||w|² - max_n |f_n||`, and
/// `max (|z_n|² - |f_n|)⁺`.
pub fn dfp_constraint_residuals(bundle: &ExtensionBundle, f: &[FunctionTable]) -> [f64; 3] {
    let pi = bundle.pi();
    let y = pi.source();
    let d = pi.target().arity();
    let n = f.len();
    let mut r = [0.0f64; 3];
    for i in 0..y.len() {
        let x = pi.apply(i);
        let co = y.coords(i);
        let w = co[d + n];
        let mut mx: f64 = 0.0;
        for (k, fk) in f.iter().enumerate() {
            let fx = fk.values()[x];
            mx = mx.max(fx.norm());
            r[0] = r[0].max((co[d + k] * w - fx).norm());
            r[2] = r[2].max(co[d + k].norm_sqr() - fx.norm());
        }
        r[1] = r[1].max((w.norm_sqr() - mx).abs());
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TensorDiskParams {
    /// Points on the real diameter `[-1, 1]`.
    pub diameter: usize,
    pub m: usize,
    pub cap: u32,
}

impl Default for TensorDiskParams {
    fn default() -> Self {
        TensorDiskParams {
            diameter: 11,
            m: 16,
            cap: 4,
        }
    }
}

/// `Y = D × T` on grids, `B` generated by `z, w`, and `T` evaluation on the
/// section `w = 1`.
pub fn build_tensor_disk(params: &TensorDiskParams) -> Result<GalleryBundle> {
    let TensorDiskParams { diameter, m, cap } = *params;
    if diameter < 2 || m < 2 {
        return Err(Error::input("diameter grid and M need at least 2 points"));
    }
    let raw: Vec<Vec<C64>> = (0..diameter)
        .map(|i| vec![c(-1.0 + 2.0 * i as f64 / (diameter - 1) as f64, 0.0)])
        .collect();
    let x = Arc::new(make_space(&raw, DEFAULT_MERGE_TOL)?);
    let z = FunctionTable::coordinate(x.clone(), 0).named("z");
    let a = generate_system(x.clone(), vec![z.clone()], cap, DEFAULT_RANK_TOL)?;
    let circle: Vec<Vec<C64>> = (0..m).map(|k| vec![C64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)]).collect();
    let (y, assignment, slots) = fibered_space(&x, &vec![circle; x.len()], DEFAULT_MERGE_TOL)?;
    let y = Arc::new(y);
    let pi = make_surjection(y.clone(), x.clone(), assignment)?;
    let gens = vec![z.pullback(&pi)?.named("z"), FunctionTable::coordinate(y.clone(), 1).named("w")];
    let b = generate_system(y.clone(), gens, cap, DEFAULT_RANK_TOL)?;
    let rows = slots.iter().map(|s| vec![(s[0], c(1.0, 0.0))]).collect();
    let t = OperatorTable::from_sparse(y.clone(), x.clone(), rows)?;
    let bundle = ExtensionBundle::new(a, b, pi, Some(t), BundleFlags { open_map: true, group_implemented: false }, SPAN_TOL)?
        .with_meta("homomorphism", "declared");
    Ok(GalleryBundle {
        bundle: meta(bundle, "tensor_disk", params),
        action: None,
    })
}

/// What the contracted set carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ContractionAlgebra {
    Constants,
    Full,
    /// Polynomials in the first coordinate.
    Polynomial { cap: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContractionParams {
    /// `Y` is this many circle samples plus the origin.
    pub circle: usize,
    /// `K` is the first `k` circle samples.
    pub k: usize,
    pub a0: ContractionAlgebra,
}

impl Default for ContractionParams {
    fn default() -> Self {
        ContractionParams {
            circle: 12,
            k: 3,
            a0: ContractionAlgebra::Constants,
        }
    }
}

/// `X` is `Y` with `K` contracted to a point; `A = C(X)` and
/// `B = {f : f|K ∈ A0}`, computed as the functions killed by the
/// annihilators of `A0` extended by zero.
pub fn build_contraction(y: Arc<FiniteSpace>, k: &[usize], a0: &FunctionSystem) -> Result<ExtensionBundle> {
    let mut in_k = vec![false; y.len()];
    for &i in k {
        if i >= y.len() || std::mem::replace(&mut in_k[i], true) {
            return Err(Error::input(format!("bad or repeated index {i} in K")));
        }
    }
    if k.len() < 2 || k.len() >= y.len() {
        return Err(Error::input("K must be a proper subset with at least 2 points"));
    }
    if a0.space().len() != k.len() {
        return Err(Error::input("A0 must live on a space with one point per member of K"));
    }
    let rest: Vec<usize> = (0..y.len()).filter(|&i| !in_k[i]).collect();
    let centroid = |i: usize| -> C64 { k.iter().map(|&j| y.coords(j)[i]).sum::<C64>() / k.len() as f64 };
    let mut points: Vec<Point> = rest
        .iter()
        .map(|&i| {
            let mut coords = y.coords(i).to_vec();
            coords.push(c(0.0, 0.0));
            Point {
                label: y.label(i).to_string(),
                coords,
            }
        })
        .collect();
    let mut x0 = (0..y.arity()).map(centroid).collect::<Vec<_>>();
    x0.push(c(1.0, 0.0));
    points.push(Point {
        label: "x0".to_string(),
        coords: x0,
    });
    let x = Arc::new(FiniteSpace::new(points, DEFAULT_MERGE_TOL)?);
    let mut assignment = vec![rest.len(); y.len()];
    for (j, &i) in rest.iter().enumerate() {
        assignment[i] = j;
    }
    let pi = make_surjection(y.clone(), x.clone(), assignment)?;

    let ann = linalg::orthogonal_complement(a0.frame());
    let mut constraints = linalg::OrthoFrame::new(y.len());
    for v in &ann {
        // ν annihilates A0 iff conj(v) ⊥ A0, so f|K ∈ A0 iff <v, f|K> = 0 for all such v
        let mut ext = vec![c(0.0, 0.0); y.len()];
        for (j, &i) in k.iter().enumerate() {
            ext[i] = v[j];
        }
        constraints.try_push(&ext, DEFAULT_RANK_TOL);
    }
    let tables = linalg::orthogonal_complement(&constraints)
        .into_iter()
        .enumerate()
        .map(|(i, v)| FunctionTable::new(y.clone(), v).map(|t| t.named(format!("b{i}"))))
        .collect::<Result<Vec<_>>>()?;
    let b = FunctionSystem::from_tables(y.clone(), tables, vec![], vec![], 1, DEFAULT_RANK_TOL)?;
    let a = FunctionSystem::full(x);
    Ok(ExtensionBundle::new(a, b, pi, None, BundleFlags::default(), SPAN_TOL)?
        .with_meta("construction", "contraction")
        .with_meta("contracted", k.len().to_string()))
}

pub fn build_contraction_default(params: &ContractionParams) -> Result<ExtensionBundle> {
    if params.circle < 3 {
        return Err(Error::input("need at least 3 circle samples"));
    }
    let mut raw: Vec<Vec<C64>> = (0..params.circle)
        .map(|j| vec![C64::from_polar(1.0, 2.0 * PI * j as f64 / params.circle as f64)])
        .collect();
    raw.push(vec![c(0.0, 0.0)]);
    let y = Arc::new(FiniteSpace::new(
        raw.into_iter()
            .enumerate()
            .map(|(i, coords)| Point {
                label: format!("y{i}"),
                coords,
            })
            .collect(),
        DEFAULT_MERGE_TOL,
    )?);
    let k: Vec<usize> = (0..params.k).collect();
    let ks = Arc::new(y.subspace(&k)?);
    let a0 = match params.a0 {
        ContractionAlgebra::Constants => FunctionSystem::constants(ks),
        ContractionAlgebra::Full => FunctionSystem::full(ks),
        ContractionAlgebra::Polynomial { cap } => {
            generate_system(ks.clone(), vec![FunctionTable::coordinate(ks, 0).named("z")], cap, DEFAULT_RANK_TOL)?
        }
    };
    Ok(meta(build_contraction(y, &k, &a0)?, "contraction", params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::averaging::{default_probes, gce_certificate};
    use crate::boundary::{check_peak_witness, peak_set_feasible};
    use crate::funcsys::restrict_system;
    use crate::group_ext::implemented_report;
    use crate::tol::Tolerances;

    #[test]
    fn disk_algebra_dimensions() {
        let g = DiskGrid::default();
        let (sys, warn) = build_disk_algebra(&g, 1).unwrap();
        assert!(warn.is_empty());
        assert_eq!(sys.dim(), 2);
        assert_eq!(sys.space().len(), 81);
        assert_eq!(build_disk_algebra(&g, 10).unwrap().0.dim(), 11);
        let bare = DiskGrid { boundary: 0, ..g };
        assert_eq!(build_disk_algebra(&bare, 2).unwrap().1.len(), 1);
    }

    #[test]
    fn small_basener() {
        let params = BasenerParams {
            n_r: 2,
            n_theta: 6,
            m: 16,
            cap: 3,
            ..Default::default()
        };
        let g = build_basener(&params).unwrap();
        let bundle = &g.bundle;
        let pi = bundle.pi();
        for (x, fiber) in pi.fibers().iter().enumerate() {
            let r = (1.0 - pi.target().coords(x)[0].norm_sqr()).sqrt();
            assert_eq!(fiber.len(), 16);
            for &y in fiber {
                assert!((pi.source().coords(y)[1].norm() - r).abs() < 1e-15);
            }
        }
        let fiber = pi.fibers()[0].clone();
        let sub = restrict_system(bundle.b(), &fiber).unwrap();
        assert_eq!(sub.dim(), 7);
        let tol = Tolerances::default();
        let probes = default_probes(bundle.b(), 1, 5);
        assert!(gce_certificate(bundle, &probes, &tol).unwrap().passes());
        let action = g.action.as_ref().unwrap();
        assert_eq!(action.order(), 16);
        let cert = implemented_report(bundle, action, &probes, &tol).unwrap();
        assert!(cert.passes(), "{}", cert.render_table());
        assert!(build_basener(&BasenerParams { r1: 1.0, ..params }).is_err());
    }

    #[test]
    fn small_dfp() {
        let params = DfpParams {
            grid: DiskGrid {
                boundary: 8,
                lattice: 3,
                spacing: 0.4,
            },
            n: 3,
            m: 8,
            ..Default::default()
        };
        let g = build_dfp(&params).unwrap();
        let b = &g.bundle;
        let x = b.pi().target();
        let x0 = x.index_of(&b.meta["distinguished_point"]).unwrap();
        assert_eq!(b.pi().fibers()[x0].len(), 1);
        let f = dfp_null_functions(x, 3);
        let r = dfp_constraint_residuals(b, &f);
        assert!(r.iter().all(|&v| v <= 1e-12), "{r:?}");
        let tol = Tolerances::default();
        let probes = default_probes(b.b(), 0, 5);
        let cert = gce_certificate(b, &probes, &tol).unwrap();
        assert!(cert.passes(), "{}", cert.render_table());
        let imp = implemented_report(b, g.action.as_ref().unwrap(), &probes, &tol).unwrap();
        assert!(imp.passes(), "{}", imp.render_table());
    }

    #[test]
    fn tensor_disk_rows_are_point_masses() {
        let g = build_tensor_disk(&TensorDiskParams {
            diameter: 5,
            m: 6,
            cap: 3,
        })
        .unwrap();
        let t = g.bundle.t().unwrap();
        let y = g.bundle.pi().source();
        for row in t.rows() {
            assert_eq!(row.len(), 1);
            assert_eq!(y.coords(row[0].0)[1], c(1.0, 0.0));
        }
        let probes = default_probes(g.bundle.b(), 0, 5);
        let cert = gce_certificate(&g.bundle, &probes, &Tolerances::default()).unwrap();
        assert!(cert.passes(), "{}", cert.render_table());
    }

    #[test]
    fn contraction_dimensions_and_peaks() {
        let full = build_contraction_default(&ContractionParams {
            a0: ContractionAlgebra::Full,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(full.b().dim(), 13);
        let consts = build_contraction_default(&ContractionParams::default()).unwrap();
        assert_eq!(consts.b().dim(), 11);
        assert!(consts.t().is_none());
        let x = consts.pi().target();
        let x0 = x.index_of("x0").unwrap();
        let tol = Tolerances::default();
        let ra = peak_set_feasible(consts.a(), &[x0], 1e-3, 16, &tol).unwrap();
        assert!(ra.feasible);
        let pre = consts.pi().preimage(&[x0]);
        let w = ra.witness.unwrap().pullback(consts.pi()).unwrap();
        assert!(consts.b().span_residual(&w).unwrap() < 1e-9);
        assert!(check_peak_witness(&w, &pre).peaks(1e-9));
        assert!(peak_set_feasible(consts.b(), &pre, 1e-3, 16, &tol).unwrap().feasible);
    }
}
