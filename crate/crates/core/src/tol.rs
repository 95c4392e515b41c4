use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Tolerances used by certificates and solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `|T(1) - 1|`.
    pub unital: f64,
    /// `|‖T‖ - 1|`.
    pub norm: f64,
    /// `|T(Π* a) - a|`.
    pub section: f64,
    /// Least-squares distance to a span.
    pub span: f64,
    /// Row mass off a fiber.
    pub support: f64,
    pub hull: f64,
    /// Kelley, module, and multiplicativity identities.
    pub algebraic: f64,
    /// Relative integral of a basis member against a would-be annihilator.
    pub annihilation: f64,
    /// Escaping mass below which a point counts as Choquet.
    pub choquet: f64,
    /// `1 - cos` of a principal angle counted as zero.
    pub angle: f64,
    pub lp_feas: f64,
    pub lp_opt: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unital: 1e-12,
            norm: 1e-10,
            section: 1e-10,
            span: 1e-9,
            support: 1e-12,
            hull: 1e-9,
            algebraic: 1e-10,
            annihilation: 1e-9,
            choquet: 1e-6,
            angle: 1e-9,
            lp_feas: 1e-9,
            lp_opt: 1e-9,
        }
    }
}

impl Tolerances {
    /// Multiplies every certificate tolerance by `factor`; solver
    /// tolerances are left alone.
    pub fn scaled(self, factor: f64) -> Tolerances {
        Tolerances {
            unital: self.unital * factor,
            norm: self.norm * factor,
            section: self.section * factor,
            span: self.span * factor,
            support: self.support * factor,
            hull: self.hull * factor,
            algebraic: self.algebraic * factor,
            annihilation: self.annihilation * factor,
            choquet: self.choquet * factor,
            angle: self.angle * factor,
            ..self
        }
    }

    pub fn to_map(&self) -> BTreeMap<String, f64> {
        let v = serde_json::to_value(self).expect("tolerances serialize");
        v.as_object()
            .expect("struct serializes to an object")
            .iter()
            .map(|(k, v)| (k.clone(), v.as_f64().unwrap_or(f64::NAN)))
            .collect()
    }
}
