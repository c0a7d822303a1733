//! On-disk fixture schema.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::BinaryForm;
use crate::sections::QPart;
use crate::topology::{GraphFile, SeifertData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Curve,
    Root,
    Graph,
    Presentation,
    Identity,
}

impl Kind {
    pub fn dir(self) -> &'static str {
        match self {
            Kind::Curve => "curves",
            Kind::Root => "roots",
            Kind::Graph => "graphs",
            Kind::Presentation => "presentations",
            Kind::Identity => "identities",
        }
    }

    pub const ALL: [Kind; 5] = [Kind::Curve, Kind::Root, Kind::Graph, Kind::Presentation, Kind::Identity];
}

/// One expected value with its provenance string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub check: String,
    #[serde(default)]
    pub args: Value,
    pub value: Value,
    pub source: String,
}

/// Envelope shared by every fixture; `input` is decoded per kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub id: String,
    pub kind: Kind,
    #[serde(default)]
    pub slow: bool,
    #[serde(default)]
    pub notes: String,
    pub input: Value,
    pub expect: Vec<Expectation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CurveInput {
    #[serde(default)]
    pub coords: Vec<BinaryForm>,
    /// Linear forms φ; coordinates become ∏_{j≠i} φⱼ².
    #[serde(default)]
    pub reciprocal: Vec<BinaryForm>,
    /// Coordinate names used by plane bindings and implicit equations.
    #[serde(default)]
    pub names: Vec<String>,
    /// Equations in the coordinate names that must vanish on the curve.
    #[serde(default)]
    pub equations: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RootInput {
    pub curve: String,
    #[serde(default)]
    pub rho: u32,
    #[serde(default)]
    pub a_units: u32,
    #[serde(default)]
    pub kappa: i64,
    #[serde(default)]
    pub key_form: Option<BinaryForm>,
    /// A ℚ-divisor replaces the root data when present.
    #[serde(default)]
    pub qdivisor: Option<Vec<QPart>>,
    /// c with conormal bundle cL; p_g sums h⁰(jcL) for jc ≤ κ.
    #[serde(default = "one")]
    pub conormal: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Binding {
    Form(BinaryForm),
    Plane(PlaneBinding),
}

/// P(coords)/over^power; `power` defaults to (ρe − degree)/a from the root.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PlaneBinding {
    pub plane: String,
    #[serde(default)]
    pub degree: Option<u64>,
    #[serde(default)]
    pub power: Option<u32>,
    #[serde(default)]
    pub over: Option<BinaryForm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GenSpec {
    pub name: String,
    pub degree: u64,
    pub form: Binding,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PresentationInput {
    pub root: String,
    /// Generators are searched through this degree.
    pub max_degree: u64,
    /// Relations are searched through this degree.
    pub relation_degree: u64,
    #[serde(default)]
    pub generators: Vec<GenSpec>,
    /// Equations in the generator names that must be minimal relations.
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MatrixSystem {
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub vectors: BTreeMap<String, Vec<String>>,
    pub equations: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RollingTermSpec {
    pub coeff: String,
    pub slots: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RollingCase {
    pub label: String,
    pub phi: String,
    /// Equations as printed; compared with the expansion up to sign and order.
    #[serde(default)]
    pub displayed: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RollingSpec {
    pub matrix: [[String; 4]; 2],
    pub base: Vec<RollingTermSpec>,
    pub steps: usize,
    pub phi_entry: [usize; 2],
    pub cases: Vec<RollingCase>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Substitution {
    pub label: String,
    pub source_vars: Vec<String>,
    pub target_vars: Vec<String>,
    pub map: BTreeMap<String, String>,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Membership {
    pub label: String,
    /// (name, weight) pairs; the order is the variable order.
    pub vars: Vec<(String, u32)>,
    pub generators: Vec<String>,
    pub polynomial: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct IdentityInput {
    #[serde(default)]
    pub root: Option<String>,
    #[serde(default)]
    pub curve: Option<String>,
    #[serde(default)]
    pub bindings: BTreeMap<String, Binding>,
    #[serde(default)]
    pub equations: Vec<String>,
    #[serde(default)]
    pub matrix_system: Option<MatrixSystem>,
    #[serde(default)]
    pub rolling: Option<RollingSpec>,
    #[serde(default)]
    pub substitutions: Vec<Substitution>,
    #[serde(default)]
    pub membership: Vec<Membership>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GraphInput {
    #[serde(default)]
    pub graph: Option<GraphFile>,
    #[serde(default)]
    pub seifert: Option<SeifertData>,
    #[serde(default)]
    pub brieskorn: Option<[u64; 3]>,
    #[serde(default)]
    pub pg: Option<i64>,
}
