//! JSON documents for spaces, maps, measures, systems and bundles.
//!
//! Complex numbers are `[re, im]` pairs. Floats are written in shortest
//! round-trip form, so reading a document back reproduces every finite
//! double bit for bit.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::averaging::{BundleFlags, ExtensionBundle, OperatorTable};
use crate::cert::RunManifest;
use crate::cole::ColeBundle;
use crate::error::{Error, Result};
use crate::funcsys::{FunctionSystem, FunctionTable};
use crate::group_ext::{make_action, GroupAction};
use crate::linalg::C64;
use crate::space::{make_surjection, same_space, FiniteSpace, Measure, Point, SurjectionMap};

pub type Pair = [f64; 2];

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

fn complex(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn pairs(v: &[C64]) -> Vec<Pair> {
    v.iter().copied().map(pair).collect()
}

fn complexes(v: &[Pair]) -> Vec<C64> {
    v.iter().copied().map(complex).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointDto {
    pub label: String,
    pub coords: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDto {
    pub points: Vec<PointDto>,
}

impl SpaceDto {
    pub fn from_space(s: &FiniteSpace) -> SpaceDto {
        SpaceDto {
            points: s
                .points()
                .iter()
                .map(|p| PointDto {
                    label: p.label.clone(),
                    coords: pairs(&p.coords),
                })
                .collect(),
        }
    }

    /// Rebuilds the space in stored order; distinct points closer than
    /// `merge_tol` are rejected rather than merged.
    pub fn to_space(&self, merge_tol: f64) -> Result<FiniteSpace> {
        let pts = self
            .points
            .iter()
            .map(|p| Point {
                label: p.label.clone(),
                coords: complexes(&p.coords),
            })
            .collect();
        FiniteSpace::new(pts, merge_tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDto {
    pub assignment: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureDto {
    pub weights: Vec<Pair>,
}

impl MeasureDto {
    pub fn from_measure(m: &Measure) -> MeasureDto {
        MeasureDto {
            weights: pairs(m.weights()),
        }
    }

    pub fn to_measure(&self, space: Arc<FiniteSpace>) -> Result<Measure> {
        Measure::new(space, complexes(&self.weights))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub values: Vec<Pair>,
}

impl TableDto {
    pub fn from_table(t: &FunctionTable) -> TableDto {
        TableDto {
            name: t.name().map(str::to_string),
            values: pairs(t.values()),
        }
    }

    pub fn to_table(&self, space: Arc<FiniteSpace>) -> Result<FunctionTable> {
        let t = FunctionTable::new(space, complexes(&self.values))?;
        Ok(match &self.name {
            Some(n) => t.named(n.clone()),
            None => t,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDto {
    #[serde(flatten)]
    pub table: TableDto,
    pub weight: u32,
}

/// A system with its generators and basis; the basis is re-orthonormalized
/// on load in stored order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDto {
    pub degree_cap: u32,
    pub rank_tol: f64,
    pub generators: Vec<GeneratorDto>,
    pub basis: Vec<TableDto>,
}

impl SystemDto {
    pub fn from_system(s: &FunctionSystem) -> SystemDto {
        SystemDto {
            degree_cap: s.degree_cap(),
            rank_tol: s.rank_tol(),
            generators: s
                .generators()
                .iter()
                .zip(s.generator_weights())
                .map(|(g, &w)| GeneratorDto {
                    table: TableDto::from_table(g),
                    weight: w,
                })
                .collect(),
            basis: s.basis().iter().map(TableDto::from_table).collect(),
        }
    }

    pub fn to_system(&self, space: Arc<FiniteSpace>) -> Result<FunctionSystem> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.table.to_table(space.clone()))
            .collect::<Result<Vec<_>>>()?;
        let weights = self.generators.iter().map(|g| g.weight).collect();
        let basis = self
            .basis
            .iter()
            .map(|t| t.to_table(space.clone()))
            .collect::<Result<Vec<_>>>()?;
        let expected = basis.len();
        let sys = FunctionSystem::from_tables(space, basis, gens, weights, self.degree_cap, self.rank_tol)?;
        if sys.dim() != expected {
            return Err(Error::validation(format!(
                "stored basis has {expected} members but only {} are independent",
                sys.dim()
            )));
        }
        Ok(sys)
    }
}

/// A sparse operator: for each target point, `(source index, weight)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDto {
    pub rows: Vec<Vec<(usize, Pair)>>,
}

impl OperatorDto {
    pub fn from_operator(t: &OperatorTable) -> OperatorDto {
        OperatorDto {
            rows: t
                .rows()
                .iter()
                .map(|r| r.iter().map(|&(y, w)| (y, pair(w))).collect())
                .collect(),
        }
    }

    pub fn to_operator(&self, source: Arc<FiniteSpace>, target: Arc<FiniteSpace>) -> Result<OperatorTable> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&(y, w)| (y, complex(w))).collect())
            .collect();
        OperatorTable::from_sparse(source, target, rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionDto {
    /// Each group element as the image of every point.
    pub elements: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColeDto {
    /// `h_0, ..., h_(n-1)` on the base.
    pub coefficients: Vec<Vec<Pair>>,
    pub root_slots: Vec<Vec<Pair>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagsDto {
    pub open_map: bool,
    pub group_implemented: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleDto {
    pub base: SpaceDto,
    pub cover: SpaceDto,
    pub map: MapDto,
    pub a: SystemDto,
    pub b: SystemDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<OperatorDto>,
    pub flags: FlagsDto,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cole: Option<ColeDto>,
}

/// A bundle with whatever structure it was saved with.
#[derive(Debug, Clone)]
pub struct LoadedBundle {
    pub bundle: ExtensionBundle,
    pub action: Option<GroupAction>,
    pub cole: Option<ColeBundle>,
}

impl BundleDto {
    pub fn from_parts(bundle: &ExtensionBundle, action: Option<&GroupAction>, cole: Option<&ColeBundle>) -> BundleDto {
        let pi = bundle.pi();
        BundleDto {
            base: SpaceDto::from_space(pi.target()),
            cover: SpaceDto::from_space(pi.source()),
            map: MapDto {
                assignment: pi.assignment().to_vec(),
            },
            a: SystemDto::from_system(bundle.a()),
            b: SystemDto::from_system(bundle.b()),
            t: bundle.t().map(OperatorDto::from_operator),
            flags: FlagsDto {
                open_map: bundle.flags.open_map,
                group_implemented: bundle.flags.group_implemented,
            },
            meta: bundle.meta.clone(),
            action: action.map(|a| ActionDto {
                elements: a.elements().to_vec(),
            }),
            cole: cole.map(|c| ColeDto {
                coefficients: c.coefficients.iter().map(|t| pairs(t.values())).collect(),
                root_slots: c.root_slots.iter().map(|r| pairs(r)).collect(),
            }),
        }
    }

    pub fn load(&self, merge_tol: f64, span_tol: f64) -> Result<LoadedBundle> {
        let x = Arc::new(self.base.to_space(merge_tol)?);
        let y = Arc::new(self.cover.to_space(merge_tol)?);
        let pi = make_surjection(y.clone(), x.clone(), self.map.assignment.clone())?;
        let a = self.a.to_system(x.clone())?;
        let b = self.b.to_system(y.clone())?;
        let t = self.t.as_ref().map(|t| t.to_operator(y.clone(), x.clone())).transpose()?;
        let flags = BundleFlags {
            open_map: self.flags.open_map,
            group_implemented: self.flags.group_implemented,
        };
        let mut bundle = ExtensionBundle::new(a, b, pi, t, flags, span_tol)?;
        bundle.meta = self.meta.clone();
        let action = self
            .action
            .as_ref()
            .map(|a| make_action(y.clone(), a.elements.clone()))
            .transpose()?;
        let cole = match &self.cole {
            Some(c) => Some(cole_from_dto(c, &bundle, &x, &y)?),
            None => None,
        };
        Ok(LoadedBundle { bundle, action, cole })
    }
}

fn cole_from_dto(c: &ColeDto, bundle: &ExtensionBundle, x: &Arc<FiniteSpace>, y: &Arc<FiniteSpace>) -> Result<ColeBundle> {
    if c.root_slots.len() != x.len() || c.coefficients.is_empty() {
        return Err(Error::input("Cole data does not match the base"));
    }
    if y.arity() != x.arity() + 1 {
        return Err(Error::input("a Cole cover carries exactly one coordinate beyond the base"));
    }
    let coefficients = c
        .coefficients
        .iter()
        .map(|v| FunctionTable::new(x.clone(), complexes(v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ColeBundle {
        bundle: bundle.clone(),
        root_slots: c.root_slots.iter().map(|r| complexes(r)).collect(),
        p_q: FunctionTable::coordinate(y.clone(), x.arity()).named("p_q"),
        coefficients,
    })
}

/// A standalone system on its own space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    pub space: SpaceDto,
    pub system: SystemDto,
}

impl SystemDocument {
    pub fn new(system: &FunctionSystem, manifest: Option<RunManifest>) -> SystemDocument {
        SystemDocument {
            manifest,
            space: SpaceDto::from_space(system.space()),
            system: SystemDto::from_system(system),
        }
    }

    pub fn load(&self, merge_tol: f64) -> Result<FunctionSystem> {
        self.system.to_system(Arc::new(self.space.to_space(merge_tol)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
    pub bundle: BundleDto,
}

pub fn map_dto(map: &SurjectionMap) -> MapDto {
    MapDto {
        assignment: map.assignment().to_vec(),
    }
}

/// Checks that `t` lives on `space` before it is written next to it.
pub fn table_on(space: &Arc<FiniteSpace>, t: &FunctionTable) -> Result<TableDto> {
    if !same_space(space, t.space()) {
        return Err(Error::input("table does not live on the given space"));
    }
    Ok(TableDto::from_table(t))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
