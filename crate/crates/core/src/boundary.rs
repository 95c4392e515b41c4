//! Choquet boundary by linear programming and polygonal peak-set tests.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcsys::{FunctionSystem, FunctionTable};
use crate::linalg::C64;
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::space::Measure;
use crate::tol::Tolerances;

pub const DEFAULT_PEAK_MARGIN: f64 = 1e-3;
pub const DEFAULT_POLYGON_SIDES: usize = 16;
const ZERO_ROW: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct ChoquetReport {
    pub point: usize,
    pub is_choquet: bool,
    pub escaping_mass: f64,
    /// An optimal representing measure for evaluation at the point.
    pub witness: Option<Measure>,
}

/// Maximal mass a representing measure for evaluation at `x` can put off `x`.
pub fn choquet_escape(system: &FunctionSystem, x: usize, tol: &Tolerances) -> Result<ChoquetReport> {
    let n = system.space().len();
    if x >= n {
        return Err(Error::input(format!("point index {x} out of range")));
    }
    let mut rows = vec![vec![1.0; n]];
    for q in system.frame().columns() {
        let re: Vec<f64> = q.iter().map(|z| z.re).collect();
        let im: Vec<f64> = q.iter().map(|z| z.im).collect();
        for row in [re, im] {
            if row.iter().any(|v| v.abs() > ZERO_ROW) {
                rows.push(row);
            }
        }
    }
    // The constraints say the moments of the measure match column `x`, so
    // after rotating the rows the right-hand side is column `x` of the result.
    let rows = orthonormal_rows(&rows);
    let rhs: Vec<f64> = rows.iter().map(|r| r[x]).collect();
    let mut objective = vec![1.0; n];
    objective[x] = 0.0;
    let lp = LpProblem::nonnegative(objective, rows, rhs)?;
    let res = solve_lp(&lp, tol.lp_feas, tol.lp_opt)?;
    match res.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::Solver(format!(
                "point mass at {} reported infeasible",
                system.space().label(x)
            )))
        }
        LpStatus::Unbounded => return Err(Error::Solver("bounded escape problem reported unbounded".into())),
    }
    let sol = res.solution.expect("optimal results carry a solution");
    let escaping = res.objective_value.expect("optimal results carry a value").clamp(0.0, 1.0);
    let witness = Measure::new(system.space().clone(), sol.iter().map(|&v| C64::new(v, 0.0)).collect())?;
    Ok(ChoquetReport {
        point: x,
        is_choquet: escaping <= tol.choquet,
        escaping_mass: escaping,
        witness: Some(witness),
    })
}

/// Rows of `Vᵀ` from the thin SVD `R = UΣVᵀ` for singular values above
/// `1e-10·σ_max`. Real and imaginary parts of the basis are often nearly
/// dependent, and the mass row repeats the constants.
fn orthonormal_rows(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (m, n) = (rows.len(), rows[0].len());
    let mat = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let svd = mat.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &sv)| sv > 1e-10 * smax)
        .map(|(k, _)| vt.row(k).iter().copied().collect())
        .collect()
}

/// Escape reports for every point, in point order.
pub fn choquet_scan(system: &FunctionSystem, tol: &Tolerances) -> Result<Vec<ChoquetReport>> {
    (0..system.space().len())
        .into_par_iter()
        .map(|x| choquet_escape(system, x, tol))
        .collect()
}

/// Indices of the Choquet points; on a finite grid also the Shilov boundary.
pub fn choquet_set(system: &FunctionSystem, tol: &Tolerances) -> Result<Vec<usize>> {
    Ok(choquet_scan(system, tol)?
        .into_iter()
        .filter(|r| r.is_choquet)
        .map(|r| r.point)
        .collect())
}

/// One row per point: `label,escaping_mass,is_choquet`.
pub fn choquet_csv(system: &FunctionSystem, reports: &[ChoquetReport]) -> String {
    let mut out = String::from("label,escaping_mass,is_choquet\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{}\n",
            system.space().label(r.point),
            serde_json::to_string(&r.escaping_mass).expect("finite float"),
            r.is_choquet
        ));
    }
    out
}

#[derive(Debug, Clone)]
pub struct PeakResult {
    pub feasible: bool,
    /// A member equal to 1 on `E` with values in the inscribed polygon off `E`.
    pub witness: Option<FunctionTable>,
}

/// Is there a member of `system` equal to 1 on `e` whose values off `e` lie
/// in the regular `polygon_sides`-gon inscribed in the disk of radius
/// `1 - margin`? Feasibility proves peaking at grid scale; infeasibility
/// only says no witness exists at this margin and polygon.
pub fn peak_set_feasible(
    system: &FunctionSystem,
    e: &[usize],
    margin: f64,
    polygon_sides: usize,
    tol: &Tolerances,
) -> Result<PeakResult> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::input(format!("margin {margin} must lie in (0, 1)")));
    }
    if polygon_sides < 8 {
        return Err(Error::input("polygon needs at least 8 sides"));
    }
    let n = system.space().len();
    let mut in_e = vec![false; n];
    for &y in e {
        if y >= n {
            return Err(Error::input(format!("point index {y} out of range")));
        }
        in_e[y] = true;
    }
    let ne = in_e.iter().filter(|&&b| b).count();
    if ne == 0 || ne == n {
        return Err(Error::input("peak set must be a non-empty proper subset"));
    }
    let cols = system.frame().columns();
    let d = cols.len();
    let outside: Vec<usize> = (0..n).filter(|&y| !in_e[y]).collect();
    let nslack = outside.len() * polygon_sides;
    let nvar = 2 * d + nslack;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    // f = Σ (a_k + i b_k) q_k
    for y in (0..n).filter(|&y| in_e[y]) {
        let mut re = vec![0.0; nvar];
        let mut im = vec![0.0; nvar];
        for (k, q) in cols.iter().enumerate() {
            re[k] = q[y].re;
            re[d + k] = -q[y].im;
            im[k] = q[y].im;
            im[d + k] = q[y].re;
        }
        rows.push(re);
        rhs.push(1.0);
        rows.push(im);
        rhs.push(0.0);
    }
    let apothem = (1.0 - margin) * (PI / polygon_sides as f64).cos();
    for (oi, &y) in outside.iter().enumerate() {
        for j in 0..polygon_sides {
            let phi = 2.0 * PI * (j as f64 + 0.5) / polygon_sides as f64;
            let rot = C64::from_polar(1.0, -phi);
            let mut row = vec![0.0; nvar];
            for (k, q) in cols.iter().enumerate() {
                let u = rot * q[y];
                row[k] = u.re;
                row[d + k] = -u.im;
            }
            row[2 * d + oi * polygon_sides + j] = 1.0;
            rows.push(row);
            rhs.push(apothem);
        }
    }
    let mut lower = vec![f64::NEG_INFINITY; 2 * d];
    lower.extend(vec![0.0; nslack]);
    let upper = vec![f64::INFINITY; nvar];
    let lp = LpProblem::new(vec![0.0; nvar], rows, rhs, lower, upper)?;
    let res = solve_lp(&lp, tol.lp_feas, tol.lp_opt)?;
    if res.status != LpStatus::Optimal {
        return Ok(PeakResult {
            feasible: false,
            witness: None,
        });
    }
    let sol = res.solution.expect("optimal results carry a solution");
    let mut values = vec![C64::new(0.0, 0.0); n];
    for (k, q) in cols.iter().enumerate() {
        let c = C64::new(sol[k], sol[d + k]);
        for (v, qv) in values.iter_mut().zip(q) {
            *v += c * qv;
        }
    }
    Ok(PeakResult {
        feasible: true,
        witness: Some(FunctionTable::new(system.space().clone(), values)?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakCheck {
    /// `max_E |f - 1|`.
    pub on_set: f64,
    /// `max` of `|f|` off `E`.
    pub off_set: f64,
}

impl PeakCheck {
    pub fn peaks(&self, tol: f64) -> bool {
        self.on_set <= tol && self.off_set < 1.0
    }
}

pub fn check_peak_witness(f: &FunctionTable, e: &[usize]) -> PeakCheck {
    let mut in_e = vec![false; f.values().len()];
    for &y in e {
        in_e[y] = true;
    }
    let mut on_set: f64 = 0.0;
    let mut off_set: f64 = 0.0;
    for (y, v) in f.values().iter().enumerate() {
        if in_e[y] {
            on_set = on_set.max((v - 1.0).norm());
        } else {
            off_set = off_set.max(v.norm());
        }
    }
    PeakCheck { on_set, off_set }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcsys::generate_system;
    use crate::space::{make_space, FiniteSpace};
    use std::sync::Arc;

    fn circle_plus_center(n: usize) -> Arc<FiniteSpace> {
        let mut raw: Vec<Vec<C64>> = (0..n).map(|j| vec![C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)]).collect();
        raw.push(vec![C64::new(0.0, 0.0)]);
        raw.push(vec![C64::new(0.2, 0.1)]);
        Arc::new(make_space(&raw, 1e-8).unwrap())
    }

    fn z_system(s: &Arc<FiniteSpace>, cap: u32) -> FunctionSystem {
        generate_system(s.clone(), vec![FunctionTable::coordinate(s.clone(), 0).named("z")], cap, 1e-9).unwrap()
    }

    #[test]
    fn full_and_constant_systems() {
        let s = circle_plus_center(6);
        let tol = Tolerances::default();
        assert_eq!(choquet_set(&FunctionSystem::full(s.clone()), &tol).unwrap().len(), s.len());
        let consts = FunctionSystem::constants(s.clone());
        for r in choquet_scan(&consts, &tol).unwrap() {
            assert!((r.escaping_mass - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn disk_polynomials_on_small_grid() {
        let s = circle_plus_center(12);
        let tol = Tolerances::default();
        let sys = z_system(&s, 3);
        let reports = choquet_scan(&sys, &tol).unwrap();
        for r in &reports {
            let on_circle = (s.coords(r.point)[0].norm() - 1.0).abs() < 1e-12;
            assert_eq!(r.is_choquet, on_circle, "{} escapes {}", s.label(r.point), r.escaping_mass);
            let w = r.witness.as_ref().unwrap();
            assert!(w.is_probability(1e-12));
            for b in sys.basis() {
                assert!((w.integrate(b.values()) - b.values()[r.point]).norm() < 1e-8);
            }
        }
        let csv = choquet_csv(&sys, &reports);
        assert_eq!(csv.lines().count(), s.len() + 1);
    }

    #[test]
    fn escape_shrinks_as_cap_grows() {
        let s = circle_plus_center(10);
        let tol = Tolerances::default();
        let x = s.len() - 1;
        let mut last = f64::INFINITY;
        for cap in 1..=4 {
            let e = choquet_escape(&z_system(&s, cap), x, &tol).unwrap().escaping_mass;
            assert!(e <= last + 1e-9);
            last = e;
        }
    }

    #[test]
    fn peak_sets() {
        let s = circle_plus_center(8);
        let tol = Tolerances::default();
        let full = FunctionSystem::full(s.clone());
        let r = peak_set_feasible(&full, &[0, 1], DEFAULT_PEAK_MARGIN, DEFAULT_POLYGON_SIDES, &tol).unwrap();
        assert!(r.feasible);
        assert!(check_peak_witness(r.witness.as_ref().unwrap(), &[0, 1]).peaks(1e-9));
        let consts = FunctionSystem::constants(s.clone());
        assert!(!peak_set_feasible(&consts, &[0], 0.01, 16, &tol).unwrap().feasible);
        // a circle point peaks for (1 + conj(ζ) z) / 2
        let sys = z_system(&s, 2);
        let r = peak_set_feasible(&sys, &[0], DEFAULT_PEAK_MARGIN, DEFAULT_POLYGON_SIDES, &tol).unwrap();
        assert!(r.feasible);
        assert!(peak_set_feasible(&sys, &[0], 1.5, 16, &tol).is_err());
        assert!(peak_set_feasible(&sys, &[0], 0.1, 4, &tol).is_err());
    }
}
