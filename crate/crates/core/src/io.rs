//! Structure specification files: JSON in, validated structure plus
//! probability functor out.

use crate::error::{Error, Result};
use crate::prob::ProbabilityFunctor;
use crate::structure::{
    build_concrete_structure, build_simplicial_structure, validate_structure, Arrow,
    InfoStructure, Variable,
};
use crate::partition::Partition;
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    kind: String,
    #[serde(default)]
    omega: Option<Vec<String>>,
    #[serde(default)]
    partitions: Option<Vec<PartitionSpec>>,
    #[serde(default)]
    close: Option<bool>,
    #[serde(default)]
    variables: Option<Vec<VariableSpec>>,
    #[serde(default)]
    arrows: Option<Vec<ArrowSpec>>,
    #[serde(default)]
    terminal: Option<String>,
    #[serde(default)]
    vertices: Option<Vec<VertexSpec>>,
    #[serde(default)]
    faces: Option<Vec<Vec<String>>>,
    #[serde(rename = "Q", default)]
    q: Option<QSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionSpec {
    id: String,
    blocks: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableSpec {
    id: String,
    values: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowSpec {
    from: String,
    to: String,
    map: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexSpec {
    id: String,
    cardinality: usize,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum QSpec {
    Keyword(String),
    PerVariable(BTreeMap<String, QEntry>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QEntry {
    maximal_supports: Vec<Vec<String>>,
}

fn require<T>(field: Option<T>, kind: &str, name: &str) -> Result<T> {
    field.ok_or_else(|| Error::Input(format!("kind `{kind}` requires the field `{name}`")))
}

fn forbid<T>(field: &Option<T>, kind: &str, name: &str) -> Result<()> {
    if field.is_some() {
        return Err(Error::Input(format!(
            "field `{name}` does not belong to kind `{kind}`"
        )));
    }
    Ok(())
}

fn build_concrete(spec: SpecFile) -> Result<InfoStructure> {
    let kind = "concrete";
    forbid(&spec.variables, kind, "variables")?;
    forbid(&spec.arrows, kind, "arrows")?;
    forbid(&spec.terminal, kind, "terminal")?;
    forbid(&spec.vertices, kind, "vertices")?;
    forbid(&spec.faces, kind, "faces")?;
    let omega = require(spec.omega, kind, "omega")?;
    let partitions = require(spec.partitions, kind, "partitions")?;
    let close = spec.close.unwrap_or(false);
    let point: BTreeMap<&str, usize> = omega
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut generators = Vec::new();
    for p in partitions {
        let mut blocks = Vec::new();
        for block in &p.blocks {
            let mut indices = Vec::new();
            for label in block {
                let &i = point.get(label.as_str()).ok_or_else(|| {
                    Error::Input(format!(
                        "partition `{}` mentions unknown point `{label}`",
                        p.id
                    ))
                })?;
                indices.push(i);
            }
            blocks.push(indices);
        }
        generators.push((p.id, Partition::from_blocks(omega.len(), &blocks)?));
    }
    Ok(build_concrete_structure(omega, generators, close)?.structure)
}

fn build_abstract(spec: SpecFile) -> Result<InfoStructure> {
    let kind = "abstract";
    forbid(&spec.omega, kind, "omega")?;
    forbid(&spec.partitions, kind, "partitions")?;
    forbid(&spec.close, kind, "close")?;
    forbid(&spec.vertices, kind, "vertices")?;
    forbid(&spec.faces, kind, "faces")?;
    let variables = require(spec.variables, kind, "variables")?;
    let arrow_specs = require(spec.arrows, kind, "arrows")?;
    let terminal = require(spec.terminal, kind, "terminal")?;
    let vars: Vec<Variable> = variables
        .iter()
        .map(|v| Variable::new(v.id.clone(), v.values.clone()))
        .collect();
    let index: BTreeMap<&str, usize> = variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.as_str(), i))
        .collect();
    let look = |id: &str| -> Result<usize> {
        index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    };
    let mut arrows = Vec::new();
    for a in &arrow_specs {
        let from = look(&a.from)?;
        let to = look(&a.to)?;
        let mut map = Vec::with_capacity(variables[from].values.len());
        for value in &variables[from].values {
            let target = a.map.get(value).ok_or_else(|| {
                Error::Input(format!(
                    "arrow {} -> {} misses value `{value}`",
                    a.from, a.to
                ))
            })?;
            let tv = variables[to]
                .values
                .iter()
                .position(|w| w == target)
                .ok_or_else(|| {
                    Error::Input(format!(
                        "arrow {} -> {} sends `{value}` to unknown value `{target}`",
                        a.from, a.to
                    ))
                })?;
            map.push(tv);
        }
        for (extra, _) in &a.map {
            if !variables[from].values.contains(extra) {
                return Err(Error::Input(format!(
                    "arrow {} -> {} maps unknown value `{extra}`",
                    a.from, a.to
                )));
            }
        }
        arrows.push(Arrow { from, to, map });
    }
    InfoStructure::assemble(vars, arrows, look(&terminal)?)
}

fn build_simplicial(spec: SpecFile) -> Result<InfoStructure> {
    let kind = "simplicial";
    forbid(&spec.omega, kind, "omega")?;
    forbid(&spec.partitions, kind, "partitions")?;
    forbid(&spec.close, kind, "close")?;
    forbid(&spec.variables, kind, "variables")?;
    forbid(&spec.arrows, kind, "arrows")?;
    forbid(&spec.terminal, kind, "terminal")?;
    let vertices = require(spec.vertices, kind, "vertices")?;
    let faces = require(spec.faces, kind, "faces")?;
    build_simplicial_structure(
        vertices.into_iter().map(|v| (v.id, v.cardinality)).collect(),
        faces,
    )
}

fn build_q(s: &InfoStructure, q: Option<QSpec>) -> Result<ProbabilityFunctor> {
    match q {
        None => Ok(ProbabilityFunctor::full(s)),
        Some(QSpec::Keyword(word)) if word == "full" => Ok(ProbabilityFunctor::full(s)),
        Some(QSpec::Keyword(word)) => Err(Error::Input(format!(
            "unknown Q keyword `{word}`; expected \"full\" or per-variable supports"
        ))),
        Some(QSpec::PerVariable(entries)) => {
            let mut given = Vec::new();
            for (id, entry) in entries {
                let var = s.index_of(&id)?;
                let values = &s.var(var).values;
                let mut supports = Vec::new();
                for support in &entry.maximal_supports {
                    let mut set = BTreeSet::new();
                    for label in support {
                        let v = values.iter().position(|w| w == label).ok_or_else(|| {
                            Error::Input(format!(
                                "support for `{id}` mentions unknown value `{label}`"
                            ))
                        })?;
                        set.insert(v);
                    }
                    supports.push(set);
                }
                given.push((var, supports));
            }
            ProbabilityFunctor::with_supports(s, given)
        }
    }
}

fn build_from_text(text: &str) -> Result<(InfoStructure, ProbabilityFunctor)> {
    let mut spec: SpecFile = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("malformed specification: {e}")))?;
    let q_spec = spec.q.take();
    let s = match spec.kind.as_str() {
        "concrete" => build_concrete(spec)?,
        "abstract" => build_abstract(spec)?,
        "simplicial" => build_simplicial(spec)?,
        other => {
            return Err(Error::Input(format!(
                "unknown kind `{other}`; expected concrete, abstract or simplicial"
            )))
        }
    };
    let q = build_q(&s, q_spec)?;
    Ok((s, q))
}

/// Parses a structure specification from JSON text: builds the structure for
/// its kind, checks the axioms, and attaches the probability functor
/// (default: full simplices).
pub fn parse_spec_str(text: &str) -> Result<(InfoStructure, ProbabilityFunctor)> {
    let (s, q) = build_from_text(text)?;
    let report = validate_structure(&s);
    if !report.all_pass() {
        let failures: Vec<String> = report
            .failures()
            .iter()
            .map(|c| match &c.witness {
                Some(w) => format!("{} ({w})", c.name),
                None => c.name.to_string(),
            })
            .collect();
        return Err(Error::Input(format!(
            "structure fails axioms: {}",
            failures.join("; ")
        )));
    }
    Ok((s, q))
}

fn at_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

/// Reads and parses a specification file.
pub fn parse_spec(path: &Path) -> Result<(InfoStructure, ProbabilityFunctor)> {
    let text = read_file(path)?;
    at_path(path, parse_spec_str(&text))
}

/// Like `parse_spec` but skips the axiom check, so callers can report the
/// failing axioms themselves.
pub fn parse_spec_unvalidated(path: &Path) -> Result<(InfoStructure, ProbabilityFunctor)> {
    let text = read_file(path)?;
    at_path(path, build_from_text(&text))
}
