//! Special-fiber models: the JSON document schema, its normalized form, the
//! specialization matrix, and the consistency checks a model must pass.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::{xi_weights, ComponentOrbit, PermutationAction};
use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
}

fn schema(msg: impl Into<String>) -> ModelError {
    ModelError::Schema(msg.into())
}

/// User-asserted hypotheses, echoed in reports and never checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hypotheses {
    pub reduced_components_smooth: bool,
    pub pic_unramified_descent: bool,
}

/// Regression target carried by fixtures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedResult {
    pub b0_rank: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub b0_torsion: Vec<BigInt>,
    pub source: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    name: String,
    #[serde(default)]
    hypotheses: Hypotheses,
    orbits: Vec<OrbitDocument>,
    #[serde(default)]
    generators: Vec<GeneratorDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometric: Option<GeometricDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<ExpectedResult>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitDocument {
    name: String,
    multiplicity: i64,
    size: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorDocument {
    name: String,
    host: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degrees: Option<BTreeMap<String, IntValue>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometricDocument {
    components: Vec<String>,
    frobenius: Vec<String>,
    orbit_of: BTreeMap<String, String>,
    #[serde(default)]
    degrees: BTreeMap<String, BTreeMap<String, IntValue>>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(transparent)]
struct IntValue(#[serde(with = "crate::serde_int")] BigInt);

/// A Picard generator of a component, with its degree against every orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicGenerator {
    pub name: String,
    /// Orbit carrying the curve.
    pub host: String,
    /// One entry per orbit, in model order.
    pub degrees: Vec<BigInt>,
}

/// Raw per-geometric-component data, kept so that constancy on orbits can be
/// checked rather than assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricData {
    pub action: PermutationAction,
    pub orbit_of: BTreeMap<String, String>,
    /// generator name → geometric component → degree (absent means 0).
    pub degrees: BTreeMap<String, BTreeMap<String, BigInt>>,
}

/// Normalized special-fiber model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberModel {
    pub name: String,
    pub hypotheses: Hypotheses,
    pub orbits: Vec<ComponentOrbit>,
    pub generators: Vec<PicGenerator>,
    pub geometric: Option<GeometricData>,
    pub notes: Option<String>,
    pub expected: Option<ExpectedResult>,
}

impl FiberModel {
    /// Orbit-level model without geometric data. Checks names, hosts and
    /// degree-vector lengths.
    pub fn new(
        name: impl Into<String>,
        orbits: Vec<ComponentOrbit>,
        generators: Vec<PicGenerator>,
    ) -> Result<Self, ModelError> {
        let m = FiberModel {
            name: name.into(),
            hypotheses: Hypotheses::default(),
            orbits,
            generators,
            geometric: None,
            notes: None,
            expected: None,
        };
        m.check_structure()?;
        Ok(m)
    }

    fn check_structure(&self) -> Result<(), ModelError> {
        if self.orbits.is_empty() {
            return Err(schema("orbit list is empty"));
        }
        let mut orbit_names = HashSet::new();
        for o in &self.orbits {
            if !orbit_names.insert(o.name.as_str()) {
                return Err(schema(format!("duplicate orbit name {:?}", o.name)));
            }
            if o.multiplicity < 1 {
                return Err(schema(format!("orbit {:?}: multiplicity must be at least 1", o.name)));
            }
            if o.members.is_empty() {
                return Err(schema(format!("orbit {:?}: size must be at least 1", o.name)));
            }
        }
        let mut gen_names = HashSet::new();
        for g in &self.generators {
            if !gen_names.insert(g.name.as_str()) {
                return Err(schema(format!("duplicate generator name {:?}", g.name)));
            }
            if !orbit_names.contains(g.host.as_str()) {
                return Err(schema(format!(
                    "generator {:?}: host {:?} is not an orbit",
                    g.name, g.host
                )));
            }
            if g.degrees.len() != self.orbits.len() {
                return Err(schema(format!(
                    "generator {:?}: {} degrees for {} orbits",
                    g.name,
                    g.degrees.len(),
                    self.orbits.len()
                )));
            }
        }
        Ok(())
    }

    pub fn orbit_index(&self, name: &str) -> Option<usize> {
        self.orbits.iter().position(|o| o.name == name)
    }

    pub fn generator(&self, name: &str) -> Option<&PicGenerator> {
        self.generators.iter().find(|g| g.name == name)
    }

    /// Serializes back into the document format (pretty JSON, explicit zeros).
    pub fn to_json(&self) -> String {
        let doc = ModelDocument {
            name: self.name.clone(),
            hypotheses: self.hypotheses,
            orbits: self
                .orbits
                .iter()
                .map(|o| OrbitDocument {
                    name: o.name.clone(),
                    multiplicity: o.multiplicity as i64,
                    size: o.size() as i64,
                })
                .collect(),
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorDocument {
                    name: g.name.clone(),
                    host: g.host.clone(),
                    degrees: Some(
                        self.orbits
                            .iter()
                            .zip(&g.degrees)
                            .map(|(o, d)| (o.name.clone(), IntValue(d.clone())))
                            .collect(),
                    ),
                })
                .collect(),
            geometric: self.geometric.as_ref().map(|geo| GeometricDocument {
                components: geo.action.ground_set().to_vec(),
                frobenius: geo.action.frobenius().to_vec(),
                orbit_of: geo.orbit_of.clone(),
                degrees: geo
                    .degrees
                    .iter()
                    .map(|(g, per)| {
                        let per = per.iter().map(|(z, d)| (z.clone(), IntValue(d.clone()))).collect();
                        (g.clone(), per)
                    })
                    .collect(),
            }),
            notes: self.notes.clone(),
            expected: self.expected.clone(),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("model documents always serialize");
        out.push('\n');
        out
    }
}

/// Parses and normalizes a model document.
pub fn parse_model(document: &str) -> Result<FiberModel, ModelError> {
    let doc: ModelDocument = serde_json::from_str(document).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => ModelError::Schema(e.to_string()),
            _ => ModelError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        }
    })?;
    normalize(doc)
}

fn normalize(doc: ModelDocument) -> Result<FiberModel, ModelError> {
    if doc.orbits.is_empty() {
        return Err(schema("orbit list is empty"));
    }
    for o in &doc.orbits {
        if o.multiplicity < 1 {
            return Err(schema(format!("orbit {:?}: multiplicity must be at least 1", o.name)));
        }
        if o.size < 1 {
            return Err(schema(format!("orbit {:?}: size must be at least 1", o.name)));
        }
    }
    let orbit_pos: HashMap<&str, usize> = doc
        .orbits
        .iter()
        .enumerate()
        .map(|(i, o)| (o.name.as_str(), i))
        .collect();
    if orbit_pos.len() != doc.orbits.len() {
        let mut seen = HashSet::new();
        let dup = doc.orbits.iter().find(|o| !seen.insert(&o.name)).unwrap();
        return Err(schema(format!("duplicate orbit name {:?}", dup.name)));
    }

    let geometric = doc
        .geometric
        .as_ref()
        .map(|g| normalize_geometric(g, &doc))
        .transpose()?;

    let orbits: Vec<ComponentOrbit> = doc
        .orbits
        .iter()
        .map(|o| {
            let members = geometric.as_ref().map(|(_, members)| members[orbit_pos[o.name.as_str()]].clone());
            match members {
                Some(members) => ComponentOrbit {
                    name: o.name.clone(),
                    members,
                    multiplicity: o.multiplicity as u64,
                },
                None => ComponentOrbit::with_size(o.name.clone(), o.size as usize, o.multiplicity as u64),
            }
        })
        .collect();
    let geometric = geometric.map(|(g, _)| g);

    let mut generators = Vec::with_capacity(doc.generators.len());
    for g in &doc.generators {
        let mut degrees = vec![BigInt::zero(); orbits.len()];
        match (&g.degrees, geometric.as_ref().and_then(|geo| geo.degrees.get(&g.name))) {
            (Some(map), _) => {
                for (orbit, d) in map {
                    let &i = orbit_pos.get(orbit.as_str()).ok_or_else(|| {
                        schema(format!("generator {:?}: unknown orbit {orbit:?} in degrees", g.name))
                    })?;
                    degrees[i] = d.0.clone();
                }
            }
            // Reduce raw geometric data to orbit level through each orbit's
            // first member; constancy is checked by `validate`.
            (None, Some(per)) => {
                for (i, o) in orbits.iter().enumerate() {
                    if let Some(d) = per.get(&o.members[0]) {
                        degrees[i] = d.clone();
                    }
                }
            }
            (None, None) => {}
        }
        generators.push(PicGenerator {
            name: g.name.clone(),
            host: g.host.clone(),
            degrees,
        });
    }

    let model = FiberModel {
        name: doc.name,
        hypotheses: doc.hypotheses,
        orbits,
        generators,
        geometric,
        notes: doc.notes,
        expected: doc.expected,
    };
    model.check_structure()?;
    Ok(model)
}

/// Validates the geometric section and returns it with the member lists of
/// each declared orbit (in declared order).
fn normalize_geometric(
    g: &GeometricDocument,
    doc: &ModelDocument,
) -> Result<(GeometricData, Vec<Vec<String>>), ModelError> {
    let action = PermutationAction::new(g.components.clone(), g.frobenius.clone())
        .map_err(|e| schema(format!("geometric: {e}")))?;
    let declared: HashMap<&str, usize> = doc
        .orbits
        .iter()
        .enumerate()
        .map(|(i, o)| (o.name.as_str(), i))
        .collect();

    for z in action.ground_set() {
        if !g.orbit_of.contains_key(z) {
            return Err(schema(format!("geometric: component {z:?} has no orbit_of entry")));
        }
    }
    for (z, orbit) in &g.orbit_of {
        if !action.ground_set().contains(z) {
            return Err(schema(format!("geometric: orbit_of names unknown component {z:?}")));
        }
        if !declared.contains_key(orbit.as_str()) {
            return Err(schema(format!("geometric: component {z:?} assigned to unknown orbit {orbit:?}")));
        }
    }

    let mut members: Vec<Option<Vec<String>>> = vec![None; doc.orbits.len()];
    for cycle in action.orbits() {
        let target = &g.orbit_of[&cycle[0]];
        if let Some(z) = cycle.iter().find(|z| &g.orbit_of[*z] != target) {
            return Err(schema(format!(
                "geometric: frobenius moves {:?} (orbit {target:?}) to {z:?} (orbit {:?})",
                cycle[0], g.orbit_of[z]
            )));
        }
        let i = declared[target.as_str()];
        if members[i].is_some() {
            return Err(schema(format!(
                "geometric: orbit {target:?} contains more than one frobenius cycle"
            )));
        }
        if cycle.len() as i64 != doc.orbits[i].size {
            return Err(schema(format!(
                "geometric: orbit {target:?} declares size {} but its frobenius cycle has {}",
                doc.orbits[i].size,
                cycle.len()
            )));
        }
        members[i] = Some(cycle);
    }
    let members: Vec<Vec<String>> = members
        .into_iter()
        .zip(&doc.orbits)
        .map(|(m, o)| m.ok_or_else(|| schema(format!("geometric: orbit {:?} has no components", o.name))))
        .collect::<Result<_, _>>()?;

    let gen_names: HashSet<&str> = doc.generators.iter().map(|g| g.name.as_str()).collect();
    let mut degrees = BTreeMap::new();
    for (gen, per) in &g.degrees {
        if !gen_names.contains(gen.as_str()) {
            return Err(schema(format!("geometric: degrees given for unknown generator {gen:?}")));
        }
        let mut map = BTreeMap::new();
        for (z, d) in per {
            if !action.ground_set().contains(z) {
                return Err(schema(format!(
                    "geometric: generator {gen:?} has a degree on unknown component {z:?}"
                )));
            }
            map.insert(z.clone(), d.0.clone());
        }
        degrees.insert(gen.clone(), map);
    }

    Ok((
        GeometricData {
            action,
            orbit_of: g.orbit_of.clone(),
            degrees,
        },
        members,
    ))
}

/// Rows indexed by orbits, columns by generators, entry = degree.
pub fn build_specialization_matrix(m: &FiberModel) -> IntMatrix {
    let mut a = IntMatrix::zeros(m.orbits.len(), m.generators.len());
    for (j, g) in m.generators.iter().enumerate() {
        for (i, d) in g.degrees.iter().enumerate() {
            a[(i, j)] = d.clone();
        }
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

/// The fixed set of diagnostic codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DiagnosticCode {
    /// A generator column has nonzero weighted degree sum.
    #[serde(rename = "xi-orthogonality")]
    XiOrthogonality,
    /// Geometric-level degrees vary within an orbit or disagree with the
    /// orbit-level value.
    #[serde(rename = "orbit-constancy")]
    OrbitConstancy,
    /// Several orbits but no generators.
    #[serde(rename = "no-generators")]
    NoGenerators,
    /// The weights share a factor, so the degree map is not onto `Z`.
    #[serde(rename = "multiplicity-gcd")]
    MultiplicityGcd,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::XiOrthogonality => "xi-orthogonality",
            DiagnosticCode::OrbitConstancy => "orbit-constancy",
            DiagnosticCode::NoGenerators => "no-generators",
            DiagnosticCode::MultiplicityGcd => "multiplicity-gcd",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.severity, self.code, self.subject, self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

/// Weighted degree sum `Σ_Y w_Y · deg_Y` of every generator column.
pub fn column_weighted_sums(m: &FiberModel) -> Vec<BigInt> {
    let w = xi_weights(&m.orbits);
    m.generators.iter().map(|g| w.pair(&g.degrees)).collect()
}

/// Runs every consistency check. Output order: orthogonality by column,
/// constancy by generator and orbit, then the model-level warnings.
pub fn validate(m: &FiberModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let w = xi_weights(&m.orbits);

    for (j, (g, sum)) in m.generators.iter().zip(column_weighted_sums(m)).enumerate() {
        if !sum.is_zero() {
            out.push(Diagnostic {
                severity: Severity::Error,
                code: DiagnosticCode::XiOrthogonality,
                subject: g.name.clone(),
                message: format!(
                    "column {} has weighted degree sum {sum} (must be 0)",
                    j + 1
                ),
            });
        }
    }

    if let Some(geo) = &m.geometric {
        for g in &m.generators {
            let Some(per) = geo.degrees.get(&g.name) else {
                continue;
            };
            for (o, orbit_degree) in m.orbits.iter().zip(&g.degrees) {
                let values: Vec<(&String, BigInt)> = o
                    .members
                    .iter()
                    .map(|z| (z, per.get(z).cloned().unwrap_or_default()))
                    .collect();
                if values.iter().any(|(_, d)| d != orbit_degree) {
                    let listed: Vec<String> = values.iter().map(|(z, d)| format!("{z}={d}")).collect();
                    out.push(Diagnostic {
                        severity: Severity::Error,
                        code: DiagnosticCode::OrbitConstancy,
                        subject: g.name.clone(),
                        message: format!(
                            "degrees on orbit {} are {} but the orbit-level degree is {orbit_degree}",
                            o.name,
                            listed.join(", ")
                        ),
                    });
                }
            }
        }
    }

    if m.orbits.len() > 1 && m.generators.is_empty() {
        out.push(Diagnostic {
            severity: Severity::Warning,
            code: DiagnosticCode::NoGenerators,
            subject: m.name.clone(),
            message: format!("{} orbits but no Picard generators", m.orbits.len()),
        });
    }

    let index = w.index();
    if !index.is_one() {
        let ws: Vec<String> = w.weights.iter().map(ToString::to_string).collect();
        out.push(Diagnostic {
            severity: Severity::Warning,
            code: DiagnosticCode::MultiplicityGcd,
            subject: m.name.clone(),
            message: format!(
                "weights ({}) have gcd {index}; the degree map has image {index}Z",
                ws.join(", ")
            ),
        });
    }
    out
}
