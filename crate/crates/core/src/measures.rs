//! Annihilating measures, adjoint measures, and Jensen-measure checks.

use serde::{Deserialize, Serialize};

use crate::averaging::OperatorTable;
use crate::error::{Error, Result};
use crate::funcsys::{FunctionSystem, FunctionTable};
use crate::linalg::{self, C64};
use crate::space::{same_space, Measure, DEFAULT_SUPPORT_TOL};

/// Moduli below this count as zero when taking logarithms.
pub const LOG_ZERO: f64 = 1e-300;
pub const JENSEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct AnnihilatorBasis {
    pub measures: Vec<Measure>,
}

/// Orthonormal basis of the measures annihilating `system`.
///
/// `∫ f dν = Σ f_i ν_i = <conj ν, f>`, so the annihilators are the
/// conjugates of the orthogonal complement of the span.
pub fn annihilator_basis(system: &FunctionSystem) -> AnnihilatorBasis {
    let comp = linalg::orthogonal_complement(system.frame());
    let measures = comp
        .into_iter()
        .map(|v| {
            Measure::new(system.space().clone(), v.iter().map(|z| z.conj()).collect())
                .expect("complement vectors match the space")
        })
        .collect();
    AnnihilatorBasis { measures }
}

/// `μ_λ` on the source of `t` with `∫ f dμ_λ = ∫ T(f) dλ`.
pub fn adjoint_measure(t: &OperatorTable, lam: &Measure) -> Result<Measure> {
    if !same_space(lam.space(), t.target()) {
        return Err(Error::input("measure does not live on the operator's target"));
    }
    Measure::new(t.source().clone(), t.adjoint_weights(lam.weights()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JensenReport {
    pub check: String,
    pub holds: bool,
    /// Largest `log|φ(f)| - ∫ log|f| dμ` over the probes (`-inf` if none).
    pub worst_violation: f64,
    pub probe_count: usize,
}

/// Basis members and all products of at most two generators.
pub fn default_jensen_probes(system: &FunctionSystem) -> Result<Vec<FunctionTable>> {
    let mut probes: Vec<FunctionTable> = system.basis().to_vec();
    let g = system.generators();
    for i in 0..g.len() {
        probes.push(g[i].clone());
        for j in i..g.len() {
            probes.push(g[i].mul(&g[j])?);
        }
    }
    Ok(probes)
}

/// Checks `log|φ(f)| <= ∫ log|f| dμ` on every probe. `phi_values` gives `φ`
/// on the basis; probes are expanded in the basis to evaluate `φ`. Where the
/// right side is `-∞` the check demands `φ(f) = 0`.
pub fn jensen_check(
    mu: &Measure,
    phi_values: &[C64],
    system: &FunctionSystem,
    probes: &[FunctionTable],
) -> Result<JensenReport> {
    if !same_space(mu.space(), system.space()) {
        return Err(Error::input("measure does not live on the system's space"));
    }
    if !mu.is_probability(DEFAULT_SUPPORT_TOL) {
        return Err(Error::input("Jensen checks need a probability measure"));
    }
    if phi_values.len() != system.dim() {
        return Err(Error::input("one functional value per basis member is required"));
    }
    let support = mu.support(DEFAULT_SUPPORT_TOL);
    let mut worst = f64::NEG_INFINITY;
    for f in probes {
        let coeffs = system.coefficients(f)?;
        let phi: C64 = coeffs.iter().zip(phi_values).map(|(c, p)| c * p).sum();
        let scale = f.sup_norm().max(1.0);
        let mut rhs = 0.0;
        let mut minus_inf = false;
        for &y in &support {
            let m = f.values()[y].norm();
            if m < LOG_ZERO {
                minus_inf = true;
                break;
            }
            rhs += mu.weights()[y].re * m.ln();
        }
        let violation = if minus_inf {
            if phi.norm() <= JENSEN_TOL * scale {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        } else if phi.norm() < LOG_ZERO {
            f64::NEG_INFINITY
        } else {
            phi.norm().ln() - rhs
        };
        worst = worst.max(violation);
    }
    Ok(JensenReport {
        check: "jensen".into(),
        holds: worst <= JENSEN_TOL,
        worst_violation: worst,
        probe_count: probes.len(),
    })
}

/// `φ = evaluation at x` on the basis.
pub fn evaluation_functional(system: &FunctionSystem, x: usize) -> Vec<C64> {
    system.basis().iter().map(|b| b.values()[x]).collect()
}
