//! Single-fixture entry points used by the command line.

use serde::Serialize;
use thiserror::Error;

use super::checks::{load_root, LoadedRoot};
use super::model::{GraphInput, PresentationInput};
use super::{CheckError, Corpus, Fixture, Kind};
use crate::ring::{find_generators, find_relations, GradedRingModel, RingOptions};
use crate::topology::{brieskorn_seifert, star_graph, GraphError, ResolutionGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToolError {
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Other(String),
}

impl From<CheckError> for ToolError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Budget(s) => ToolError::Budget(s),
            CheckError::Other(s) => ToolError::Other(s),
        }
    }
}

fn wrong_kind(fx: &Fixture, want: &str) -> ToolError {
    ToolError::Other(format!("{} is a {} fixture; expected {want}", fx.id(), fx.file.kind.dir()))
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionRow {
    pub n: u64,
    pub dim: usize,
    pub basis: Vec<String>,
}

/// Root fixture, or the root named by a presentation fixture.
fn root_of(corpus: &Corpus, fx: &Fixture) -> Result<LoadedRoot, ToolError> {
    match fx.file.kind {
        Kind::Root => Ok(load_root(corpus, fx)?),
        Kind::Presentation => {
            let input: PresentationInput = fx.input().map_err(|e| ToolError::Other(e.to_string()))?;
            Ok(load_root(corpus, corpus.get(&input.root).map_err(|e| ToolError::Other(e.to_string()))?)?)
        }
        _ => Err(wrong_kind(fx, "a root or presentation")),
    }
}

pub fn sections(corpus: &Corpus, fx: &Fixture, range: (u64, u64)) -> Result<Vec<SectionRow>, ToolError> {
    let root = root_of(corpus, fx)?;
    let src = root.source()?;
    (range.0..=range.1)
        .map(|n| {
            let basis = src.sections(n).map_err(|e| ToolError::from(CheckError::from(e)))?;
            Ok(SectionRow { n, dim: basis.len(), basis: basis.iter().map(|f| f.to_string()).collect() })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PgReport {
    pub pg: usize,
    pub kappa: i64,
    pub conormal: u32,
    /// (n, h⁰(nL)) for the summed degrees
    pub terms: Vec<(u64, usize)>,
}

/// Σ h⁰(jcL) over jc ≤ κ.
pub fn pg(corpus: &Corpus, fx: &Fixture) -> Result<PgReport, ToolError> {
    let root = root_of(corpus, fx)?;
    let src = root.source()?;
    let c = root.input.conormal.max(1) as i64;
    let mut terms = Vec::new();
    let mut j = 0;
    while j * c <= root.input.kappa {
        let n = (j * c) as u64;
        terms.push((n, src.sections(n).map_err(|e| ToolError::from(CheckError::from(e)))?.len()));
        j += 1;
    }
    Ok(PgReport { pg: terms.iter().map(|t| t.1).sum(), kappa: root.input.kappa, conormal: root.input.conormal, terms })
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorRow {
    pub name: String,
    pub degree: u64,
    pub form: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RingReport {
    pub generators: Vec<GeneratorRow>,
    pub relations: Vec<String>,
    pub relation_degrees: Vec<u64>,
    pub hilbert_numerator: Vec<i64>,
    pub palindromic: bool,
    pub searched_to: u64,
}

/// Generators through `max_degree` and relations through `relation_degree`;
/// a presentation fixture supplies both bounds unless overridden.
pub fn ring(
    corpus: &Corpus,
    fx: &Fixture,
    max_degree: Option<u64>,
    relation_degree: Option<u64>,
) -> Result<RingReport, ToolError> {
    let root = root_of(corpus, fx)?;
    let (default_max, default_rel) = match fx.file.kind {
        Kind::Presentation => {
            let input: PresentationInput = fx.input().map_err(|e| ToolError::Other(e.to_string()))?;
            (input.max_degree, Some(input.relation_degree))
        }
        _ => (12, None),
    };
    let src = root.source()?;
    let model: GradedRingModel = find_generators(src.as_ref(), max_degree.unwrap_or(default_max), false)
        .map_err(|e| ToolError::from(CheckError::from(e)))?;
    let top = model.degrees().into_iter().max().unwrap_or(0);
    let rel = relation_degree.or(default_rel).unwrap_or(2 * top + 2);
    let generators = model
        .generators
        .iter()
        .map(|g| GeneratorRow { name: g.name.clone(), degree: g.degree, form: g.form.to_string() })
        .collect();
    if rel == 0 {
        return Ok(RingReport {
            generators,
            relations: Vec::new(),
            relation_degrees: Vec::new(),
            hilbert_numerator: Vec::new(),
            palindromic: false,
            searched_to: 0,
        });
    }
    let pres = find_relations(&model, src.as_ref(), &RingOptions::up_to(rel)).map_err(|e| ToolError::from(CheckError::from(e)))?;
    Ok(RingReport {
        generators,
        relations: pres.relations.iter().map(|r| r.to_string()).collect(),
        relation_degrees: pres.relation_degrees,
        hilbert_numerator: pres.hilbert_numerator,
        palindromic: pres.palindromic,
        searched_to: pres.searched_to,
    })
}

/// None when the input names no graph source.
pub fn graph_from_input(input: &GraphInput) -> Option<Result<ResolutionGraph, GraphError>> {
    match (&input.graph, &input.seifert, &input.brieskorn) {
        (Some(g), _, _) => Some(g.to_graph()),
        (None, Some(s), _) => Some(star_graph(s)),
        (None, None, Some(e)) => Some(brieskorn_seifert(*e).and_then(|s| star_graph(&s))),
        _ => None,
    }
}

/// Graph fixture input plus its optional p_g.
pub fn graph(fx: &Fixture) -> Result<(GraphInput, Result<ResolutionGraph, GraphError>), ToolError> {
    if fx.file.kind != Kind::Graph {
        return Err(wrong_kind(fx, "a graph"));
    }
    let input: GraphInput = fx.input().map_err(|e| ToolError::Other(e.to_string()))?;
    let g = graph_from_input(&input).ok_or_else(|| ToolError::Other("graph input needs 'graph', 'seifert' or 'brieskorn'".into()))?;
    Ok((input, g))
}
