//! Resolution-graph calculus: intersection matrices, determinants, canonical
//! cycles, Laufer/Durfee bookkeeping, splice diagrams with the semigroup
//! condition, and star-shaped (Seifert) constructors with splice-type
//! equations.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::mpoly::vars;
use crate::algebra::{rat, MatrixQ, MultiPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex id '{0}'")]
    DuplicateVertex(String),
    #[error("edge refers to unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("loop at vertex '{0}'")]
    SelfLoop(String),
    #[error("vertex '{id}' has self-intersection {weight}; expected <= -1")]
    Weight { id: String, weight: i64 },
    #[error("graph is disconnected: '{0}' is unreachable")]
    Disconnected(String),
    #[error("{0}")]
    NotNegativeDefinite(DefinitenessCertificate),
    #[error("splice diagrams need a tree with all genera 0: {0}")]
    SpliceUndefined(String),
    #[error("invalid arm alpha={alpha}, beta={beta}")]
    BadArm { alpha: u64, beta: u64 },
    #[error("Brieskorn exponents must be >= 2, found {0:?}")]
    BadExponents(Vec<u64>),
    #[error("value {0} does not fit in 64 bits")]
    Overflow(String),
}

/// Witness that −M is not positive definite: the leading principal block on
/// `vertices` has determinant `minor <= 0`, and the integer vector `vector`
/// (supported there) has `vector·M·vector = self_intersection >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitenessCertificate {
    pub vertices: Vec<String>,
    pub minor: BigInt,
    pub vector: Vec<BigInt>,
    pub self_intersection: BigInt,
}

impl fmt::Display for DefinitenessCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vector.iter().map(|x| x.to_string()).collect();
        write!(
            f,
            "not negative definite: leading minor on [{}] is {}; Z = ({}) has Z.Z = {}",
            self.vertices.join(","),
            self.minor,
            v.join(","),
            self.self_intersection
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub weight: i64,
    pub genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexId {
    Int(i64),
    Str(String),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Int(i) => write!(f, "{i}"),
            VertexId::Str(s) => f.write_str(s),
        }
    }
}

fn minus_two() -> i64 {
    -2
}

/// On-disk vertex. Unlabeled vertices default to weight −2 and genus 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: VertexId,
    #[serde(default = "minus_two")]
    pub weight: i64,
    #[serde(default)]
    pub genus: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default)]
    pub name: String,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[VertexId; 2]>,
    #[serde(default)]
    pub notes: String,
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<ResolutionGraph, GraphError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex { id: v.id.to_string(), weight: v.weight, genus: v.genus })
            .collect();
        let edges = self.edges.iter().map(|[a, b]| (a.to_string(), b.to_string())).collect();
        ResolutionGraph::new(vertices, edges)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl ResolutionGraph {
    /// Validates connectivity, weights and negative definiteness.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(String, String)>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
            if v.weight > -1 {
                return Err(GraphError::Weight { id: v.id.clone(), weight: v.weight });
            }
        }
        let lookup = |id: &String| index.get(id).copied().ok_or_else(|| GraphError::UnknownVertex(id.clone()));
        let mut adjacency = vec![Vec::new(); vertices.len()];
        let mut es = Vec::with_capacity(edges.len());
        for (a, b) in &edges {
            let (i, j) = (lookup(a)?, lookup(b)?);
            if i == j {
                return Err(GraphError::SelfLoop(a.clone()));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
            es.push((i, j));
        }
        let g = ResolutionGraph { vertices, edges: es, adjacency };
        let reached = g.component(0, None);
        if reached.len() < g.vertices.len() {
            let missing = (0..g.vertices.len()).find(|i| !reached.contains(i)).unwrap();
            return Err(GraphError::Disconnected(g.vertices[missing].id.clone()));
        }
        if let Some(cert) = g.definiteness_certificate() {
            return Err(GraphError::NotNegativeDefinite(cert));
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn valence(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Intersection matrix M (edge multiplicities off the diagonal).
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            m[i][i] = v.weight;
        }
        for &(i, j) in &self.edges {
            m[i][j] += 1;
            m[j][i] += 1;
        }
        m
    }

    fn neg_block(&self, subset: &[usize]) -> MatrixQ {
        let m = self.intersection_matrix();
        let rows: Vec<Vec<i64>> = subset.iter().map(|&i| subset.iter().map(|&j| -m[i][j]).collect()).collect();
        MatrixQ::from_i64(&rows).expect("square block")
    }

    /// det(−M) restricted to `subset`; 1 for the empty set.
    pub fn neg_det(&self, subset: &[usize]) -> BigInt {
        if subset.is_empty() {
            return BigInt::one();
        }
        self.neg_block(subset).determinant().to_integer()
    }

    /// Vertices reachable from `start` without passing through `removed`.
    pub fn component(&self, start: usize, removed: Option<usize>) -> Vec<usize> {
        let mut seen = vec![false; self.vertices.len()];
        if let Some(r) = removed {
            seen[r] = true;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut out = Vec::new();
        while let Some(u) = queue.pop_front() {
            out.push(u);
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn definiteness_certificate(&self) -> Option<DefinitenessCertificate> {
        let n = self.vertices.len();
        for k in 1..=n {
            let lead: Vec<usize> = (0..k).collect();
            let minor = self.neg_det(&lead);
            if minor.is_positive() {
                continue;
            }
            // column k of adj(A) for A = −M on the leading block
            let block = self.neg_block(&lead);
            let mut vector = Vec::with_capacity(k);
            for i in 0..k {
                let rows: Vec<Vec<Rational>> = (0..k)
                    .filter(|&r| r != k - 1)
                    .map(|r| (0..k).filter(|&c| c != i).map(|c| block.get(r, c).clone()).collect())
                    .collect();
                let cof = if rows.is_empty() {
                    BigInt::one()
                } else {
                    MatrixQ::from_rows(rows).expect("square").determinant().to_integer()
                };
                vector.push(if (i + k - 1) % 2 == 0 { cof } else { -cof });
            }
            let m = self.intersection_matrix();
            let mut q = BigInt::zero();
            for i in 0..k {
                for j in 0..k {
                    q += &vector[i] * &vector[j] * m[i][j];
                }
            }
            return Some(DefinitenessCertificate {
                vertices: self.vertices[..k].iter().map(|v| v.id.clone()).collect(),
                minor,
                vector,
                self_intersection: q,
            });
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphAnalysis {
    pub determinant: String,
    pub definite: bool,
    pub b1: u64,
    pub b2: usize,
    pub cycle_rank: usize,
}

impl GraphAnalysis {
    pub fn determinant_value(&self) -> BigInt {
        self.determinant.parse().expect("decimal determinant")
    }
}

pub fn graph_analyze(g: &ResolutionGraph) -> GraphAnalysis {
    let all: Vec<usize> = (0..g.vertices.len()).collect();
    let genus: u64 = g.vertices.iter().map(|v| v.genus).sum();
    GraphAnalysis {
        determinant: g.neg_det(&all).abs().to_string(),
        definite: true,
        b1: 2 * genus + g.cycle_rank() as u64,
        b2: g.vertices.len(),
        cycle_rank: g.cycle_rank(),
    }
}

/// A ℚ-cycle Σ cᵢEᵢ on the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleQ {
    pub coefficients: Vec<(String, Rational)>,
}

impl CycleQ {
    pub fn get(&self, id: &str) -> Option<&Rational> {
        self.coefficients.iter().find(|(v, _)| v == id).map(|(_, c)| c)
    }

    pub fn values(&self) -> Vec<Rational> {
        self.coefficients.iter().map(|(_, c)| c.clone()).collect()
    }
}

impl fmt::Display for CycleQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (id, c) in &self.coefficients {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            let coeff = if a.is_one() { String::new() } else { crate::algebra::format_rational(&a) };
            if first {
                write!(f, "{}{coeff}E[{id}]", if c.is_negative() { "-" } else { "" })?;
            } else {
                write!(f, " {sign} {coeff}E[{id}]")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalCycle {
    pub cycle: CycleQ,
    pub k_squared: Rational,
    /// All coefficients integral (numerically Gorenstein).
    pub integral: bool,
}

fn adjunction_rhs(g: &ResolutionGraph) -> Vec<Rational> {
    g.vertices.iter().map(|v| rat(2 * v.genus as i64 - 2 - v.weight)).collect()
}

fn matrix_q(g: &ResolutionGraph) -> MatrixQ {
    MatrixQ::from_i64(&g.intersection_matrix()).expect("square")
}

pub fn canonical_cycle(g: &ResolutionGraph) -> CanonicalCycle {
    let rhs = adjunction_rhs(g);
    let k = matrix_q(g)
        .solve(&rhs)
        .expect("dimensions agree")
        .expect("definite intersection matrix is invertible");
    let k_squared = k.iter().zip(&rhs).map(|(a, b)| a * b).fold(Rational::zero(), |s, x| s + x);
    let integral = k.iter().all(|c| c.is_integer());
    CanonicalCycle {
        cycle: CycleQ { coefficients: g.vertices.iter().map(|v| v.id.clone()).zip(k).collect() },
        k_squared,
        integral,
    }
}

/// (K + Eᵢ)·Eᵢ − (2gᵢ − 2) for every vertex.
pub fn adjunction_residual(g: &ResolutionGraph, k: &CycleQ) -> Vec<Rational> {
    let m = matrix_q(g);
    let kv = m.mul_vec(&k.values()).expect("dimensions agree");
    g.vertices
        .iter()
        .zip(kv)
        .map(|(v, ke)| ke + rat(v.weight) - rat(2 * v.genus as i64 - 2))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LauferDurfee {
    pub k_squared: Rational,
    pub b1: u64,
    pub b2: usize,
    pub mu: Rational,
    pub sigma: Rational,
    pub predicted_pg: Option<Rational>,
}

/// μ = 12p_g − b₁ + b₂ + K², σ = 8p_g − b₂ − K², and p_g = sw − (K² + r)/8
/// when a Seiberg–Witten value is supplied.
pub fn laufer_durfee_sw(g: &ResolutionGraph, pg: i64, sw: Option<&Rational>) -> LauferDurfee {
    let k = canonical_cycle(g);
    let a = graph_analyze(g);
    let b2 = rat(a.b2 as i64);
    let mu = rat(12 * pg) - rat(a.b1 as i64) + &b2 + &k.k_squared;
    let sigma = rat(8 * pg) - &b2 - &k.k_squared;
    let predicted_pg = sw.map(|s| s - (&k.k_squared + &b2) / rat(8));
    LauferDurfee { k_squared: k.k_squared, b1: a.b1, b2: a.b2, mu, sigma, predicted_pg }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpliceEnd {
    pub vertex: String,
    /// Present exactly at node ends.
    pub weight: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpliceEdge {
    pub ends: [SpliceEnd; 2],
    /// Valence-2 vertices contracted into this edge, in order.
    pub chain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpliceDiagram {
    pub nodes: Vec<String>,
    pub leaves: Vec<String>,
    pub edges: Vec<SpliceEdge>,
}

impl SpliceDiagram {
    fn is_node(&self, v: &str) -> bool {
        self.nodes.iter().any(|n| n == v)
    }

    /// Edges at `v` as (edge index, far end, weight at v).
    fn star(&self, v: &str) -> Vec<(usize, &str, Option<u64>)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for side in 0..2 {
                if e.ends[side].vertex == v {
                    out.push((i, e.ends[1 - side].vertex.as_str(), e.ends[side].weight));
                }
            }
        }
        out
    }

    /// The weights at node `v`, in edge order.
    pub fn weights_at(&self, v: &str) -> Vec<u64> {
        self.star(v).into_iter().filter_map(|(_, _, w)| w).collect()
    }
}

fn to_u64(x: &BigInt) -> Result<u64, GraphError> {
    x.abs().to_u64().ok_or_else(|| GraphError::Overflow(x.to_string()))
}

pub fn splice_diagram(g: &ResolutionGraph) -> Result<SpliceDiagram, GraphError> {
    if g.cycle_rank() > 0 {
        return Err(GraphError::SpliceUndefined("graph has cycles".into()));
    }
    if let Some(v) = g.vertices.iter().find(|v| v.genus > 0) {
        return Err(GraphError::SpliceUndefined(format!("vertex '{}' has genus {}", v.id, v.genus)));
    }
    let n = g.vertices.len();
    let id = |i: usize| g.vertices[i].id.clone();
    let nodes: Vec<usize> = (0..n).filter(|&i| g.valence(i) >= 3).collect();
    let leaves: Vec<usize> = (0..n).filter(|&i| g.valence(i) <= 1).collect();
    let walk = |from: usize, first: usize| -> (Vec<usize>, usize) {
        let (mut prev, mut cur) = (from, first);
        let mut chain = Vec::new();
        while g.valence(cur) == 2 {
            chain.push(cur);
            let next = g.adjacency[cur].iter().copied().find(|&w| w != prev).unwrap();
            prev = cur;
            cur = next;
        }
        (chain, cur)
    };
    let mut edges = Vec::new();
    if nodes.is_empty() {
        if n > 1 {
            let (a, b) = (leaves[0], leaves[1]);
            let (chain, end) = walk(a, g.adjacency[a][0]);
            debug_assert_eq!(end, b);
            edges.push(SpliceEdge {
                ends: [SpliceEnd { vertex: id(a), weight: None }, SpliceEnd { vertex: id(b), weight: None }],
                chain: chain.into_iter().map(id).collect(),
            });
        }
    } else {
        for &v in &nodes {
            for &first in &g.adjacency[v] {
                let (chain, end) = walk(v, first);
                let end_is_node = g.valence(end) >= 3;
                if end_is_node && end < v {
                    continue;
                }
                let dv = to_u64(&g.neg_det(&g.component(first, Some(v))))?;
                let far_weight = if end_is_node {
                    let toward = chain.last().copied().unwrap_or(v);
                    Some(to_u64(&g.neg_det(&g.component(toward, Some(end))))?)
                } else {
                    None
                };
                edges.push(SpliceEdge {
                    ends: [SpliceEnd { vertex: id(v), weight: Some(dv) }, SpliceEnd { vertex: id(end), weight: far_weight }],
                    chain: chain.into_iter().map(id).collect(),
                });
            }
        }
    }
    Ok(SpliceDiagram {
        nodes: nodes.into_iter().map(id).collect(),
        leaves: leaves.into_iter().map(id).collect(),
        edges,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupViolation {
    pub node: String,
    pub toward: String,
    pub value: u64,
    pub generators: Vec<u64>,
}

impl fmt::Display for SemigroupViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "{} not in <{}> at node {} (edge toward {})", self.value, gens.join(","), self.node, self.toward)
    }
}

/// Membership in the numerical semigroup generated by `gens`.
pub fn in_semigroup(value: u64, gens: &[u64]) -> bool {
    if value == 0 {
        return true;
    }
    let gens: Vec<u64> = gens.iter().copied().filter(|&g| g > 0).collect();
    let Some(d) = gens.iter().copied().reduce(|a, b| a.gcd(&b)) else {
        return false;
    };
    if value % d != 0 {
        return false;
    }
    let value = value / d;
    let gens: Vec<u64> = gens.iter().map(|g| g / d).collect();
    let (lo, hi) = (*gens.iter().min().unwrap(), *gens.iter().max().unwrap());
    if (lo - 1).saturating_mul(hi - 1) <= value {
        return true;
    }
    let mut reach = vec![false; value as usize + 1];
    reach[0] = true;
    for k in 1..=value as usize {
        reach[k] = gens.iter().any(|&g| g as usize <= k && reach[k - g as usize]);
    }
    reach[value as usize]
}

/// Leaves beyond edge `e` seen from `v`, with ℓ' = product of the weights
/// adjacent to but not on the path (weights at `v` excluded).
fn leaves_beyond(sd: &SpliceDiagram, v: &str, e: usize, product: u64, out: &mut Vec<(String, u64)>) {
    let edge = &sd.edges[e];
    let u = if edge.ends[0].vertex == v { &edge.ends[1].vertex } else { &edge.ends[0].vertex };
    if !sd.is_node(u) {
        out.push((u.clone(), product));
        return;
    }
    let star = sd.star(u);
    for &(f, _, _) in star.iter().filter(|(f, _, _)| *f != e) {
        let others: u64 = star
            .iter()
            .filter(|(g, _, _)| *g != e && *g != f)
            .map(|(_, _, w)| w.unwrap_or(1))
            .product();
        leaves_beyond(sd, u, f, product.saturating_mul(others), out);
    }
}

/// Checks every node-to-node edge end; an empty list means the condition holds.
pub fn semigroup_condition(sd: &SpliceDiagram) -> Vec<SemigroupViolation> {
    let mut violations = Vec::new();
    for v in &sd.nodes {
        for (e, far, weight) in sd.star(v) {
            if !sd.is_node(far) {
                continue;
            }
            let value = weight.expect("node ends carry weights");
            let mut leaves = Vec::new();
            leaves_beyond(sd, v, e, 1, &mut leaves);
            let generators: Vec<u64> = leaves.iter().map(|(_, l)| *l).collect::<BTreeSet<_>>().into_iter().collect();
            if !in_semigroup(value, &generators) {
                violations.push(SemigroupViolation { node: v.clone(), toward: far.to_string(), value, generators });
            }
        }
    }
    violations
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeDeterminant {
    pub nodes: [String; 2],
    pub lhs: String,
    pub rhs: String,
}

impl EdgeDeterminant {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// For each node-to-node edge: d_vw·d_wv − (other weights at v)(other weights
/// at w) against det(−M)·det(−M on the contracted chain).
pub fn edge_determinants(g: &ResolutionGraph, sd: &SpliceDiagram) -> Vec<EdgeDeterminant> {
    let all: Vec<usize> = (0..g.vertices.len()).collect();
    let det = g.neg_det(&all);
    let mut out = Vec::new();
    for (i, e) in sd.edges.iter().enumerate() {
        let (v, w) = (&e.ends[0].vertex, &e.ends[1].vertex);
        if !sd.is_node(v) || !sd.is_node(w) {
            continue;
        }
        let others = |x: &str| -> BigInt {
            sd.star(x)
                .into_iter()
                .filter(|(f, _, _)| *f != i)
                .map(|(_, _, wt)| BigInt::from(wt.unwrap_or(1)))
                .product()
        };
        let dvw = BigInt::from(e.ends[0].weight.unwrap());
        let dwv = BigInt::from(e.ends[1].weight.unwrap());
        let lhs = dvw * dwv - others(v) * others(w);
        let chain: Vec<usize> = e.chain.iter().map(|c| g.index_of(c).unwrap()).collect();
        let rhs = &det * g.neg_det(&chain);
        out.push(EdgeDeterminant { nodes: [v.clone(), w.clone()], lhs: lhs.to_string(), rhs: rhs.to_string() });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arm {
    pub alpha: u64,
    pub beta: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeifertData {
    pub central_weight: i64,
    #[serde(default)]
    pub central_genus: u64,
    pub arms: Vec<Arm>,
}

/// Hirzebruch–Jung expansion α/β = b₁ − 1/(b₂ − …), returned as the chain
/// weights −b₁, −b₂, … starting next to the center.
pub fn hj_chain(alpha: u64, beta: u64) -> Result<Vec<i64>, GraphError> {
    if alpha < 2 || beta == 0 || beta >= alpha || alpha.gcd(&beta) != 1 {
        return Err(GraphError::BadArm { alpha, beta });
    }
    let (mut a, mut b) = (alpha as i64, beta as i64);
    let mut out = Vec::new();
    while b > 0 {
        let c = (a + b - 1) / b;
        out.push(-c);
        (a, b) = (b, c * b - a);
    }
    Ok(out)
}

/// Reads α/β back from a chain of weights −b₁, −b₂, ….
pub fn hj_fraction(chain: &[i64]) -> Rational {
    let mut it = chain.iter().rev();
    let mut value = rat(-*it.next().expect("nonempty chain"));
    for &b in it {
        value = rat(-b) - value.recip();
    }
    value
}

/// Star-shaped graph with center "c" and arm vertices "a{i}_{j}".
pub fn star_graph(data: &SeifertData) -> Result<ResolutionGraph, GraphError> {
    let mut vertices = vec![Vertex { id: "c".into(), weight: data.central_weight, genus: data.central_genus }];
    let mut edges = Vec::new();
    for (i, arm) in data.arms.iter().enumerate() {
        let mut prev = "c".to_string();
        for (j, w) in hj_chain(arm.alpha, arm.beta)?.into_iter().enumerate() {
            let id = format!("a{}_{}", i + 1, j + 1);
            vertices.push(Vertex { id: id.clone(), weight: w, genus: 0 });
            edges.push((prev, id.clone()));
            prev = id;
        }
    }
    ResolutionGraph::new(vertices, edges)
}

/// Seifert data of a graph with exactly one vertex of valence ≥ 3 whose arms
/// are genus-0 chains.
pub fn seifert_data(g: &ResolutionGraph) -> Option<SeifertData> {
    if g.cycle_rank() > 0 {
        return None;
    }
    let nodes: Vec<usize> = (0..g.vertices.len()).filter(|&i| g.valence(i) >= 3).collect();
    let [c] = nodes[..] else {
        return None;
    };
    let mut arms = Vec::new();
    for &first in &g.adjacency[c] {
        let (mut prev, mut cur) = (c, first);
        let mut chain = Vec::new();
        loop {
            if g.vertices[cur].genus > 0 {
                return None;
            }
            chain.push(g.vertices[cur].weight);
            match g.adjacency[cur].iter().copied().find(|&w| w != prev) {
                Some(next) => (prev, cur) = (cur, next),
                None => break,
            }
        }
        let frac = hj_fraction(&chain);
        arms.push(Arm { alpha: frac.numer().to_u64()?, beta: frac.denom().to_u64()? });
    }
    Some(SeifertData { central_weight: g.vertices[c].weight, central_genus: g.vertices[c].genus, arms })
}

/// Orbifold Euler number e = b + Σ βᵢ/αᵢ (b the central weight).
pub fn euler_number(data: &SeifertData) -> Rational {
    data.arms
        .iter()
        .fold(rat(data.central_weight), |e, a| e + Rational::new(a.beta.into(), a.alpha.into()))
}

/// Seifert data for exponents (p,q,r): central −1 and the coprime βᵢ that
/// maximize Σ βᵢ/αᵢ below 1 (first maximizer in lexicographic order).
pub fn brieskorn_seifert(exponents: [u64; 3]) -> Result<SeifertData, GraphError> {
    if exponents.iter().any(|&a| a < 2) {
        return Err(GraphError::BadExponents(exponents.to_vec()));
    }
    let coprime = |a: u64| (1..a).filter(move |b| b.gcd(&a) == 1);
    let [p, q, r] = exponents;
    let mut best: Option<(Rational, [u64; 3])> = None;
    for b1 in coprime(p) {
        for b2 in coprime(q) {
            let s = Rational::new(b1.into(), p.into()) + Rational::new(b2.into(), q.into());
            if s >= rat(1) {
                continue;
            }
            // largest b3 with s + b3/r < 1
            let room = (rat(1) - &s) * rat(r as i64);
            let mut b3 = room.ceil().to_integer().to_u64().unwrap_or(r).min(r) as i64 - 1;
            while b3 >= 1 && (b3 as u64).gcd(&r) != 1 {
                b3 -= 1;
            }
            if b3 < 1 {
                continue;
            }
            let total = &s + Rational::new(b3.into(), (r as i64).into());
            if best.as_ref().map_or(true, |(t, _)| total > *t) {
                best = Some((total, [b1, b2, b3 as u64]));
            }
        }
    }
    let (_, betas) = best.ok_or(GraphError::BadExponents(exponents.to_vec()))?;
    Ok(SeifertData {
        central_weight: -1,
        central_genus: 0,
        arms: exponents.iter().zip(betas).map(|(&alpha, beta)| Arm { alpha, beta }).collect(),
    })
}

/// Diagonal action on the splice-type coordinates: each generator is a vector
/// of exponents aⱼ ∈ [0,1), acting by zⱼ ↦ e^{2πi aⱼ} zⱼ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalAction {
    pub generators: Vec<Vec<Rational>>,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarConstruction {
    pub seifert: SeifertData,
    pub graph: ResolutionGraph,
    pub equations: Vec<MultiPoly>,
    pub action: DiagonalAction,
}

fn frac_part(x: &Rational) -> Rational {
    x - x.floor()
}

/// Star graph, splice-type equations Σⱼ jⁱ zⱼ^{αⱼ} (i = 0..k−3; a Vandermonde
/// coefficient matrix, so every maximal minor is nonzero) and the discriminant
/// group acting diagonally on z₁..z_k.
pub fn star_graph_tools(data: &SeifertData) -> Result<StarConstruction, GraphError> {
    let graph = star_graph(data)?;
    let k = data.arms.len();
    let lcm = data.arms.iter().fold(1u64, |l, a| l.lcm(&a.alpha));
    let names: Vec<String> = (1..=k).map(|j| format!("z{j}")).collect();
    let spec: Vec<(&str, u32)> = names
        .iter()
        .zip(&data.arms)
        .map(|(n, a)| (n.as_str(), (lcm / a.alpha) as u32))
        .collect();
    let zs = vars(&spec);
    let equations = (0..k.saturating_sub(2))
        .map(|i| {
            MultiPoly::from_terms(
                &zs,
                data.arms.iter().enumerate().map(|(j, a)| {
                    let mut e = vec![0u32; k];
                    e[j] = a.alpha as u32;
                    (e, rat((j as i64 + 1).pow(i as u32)))
                }),
            )
        })
        .collect();

    // arm ends carry the coordinates
    let ends: Vec<usize> = (0..k)
        .map(|i| {
            let len = hj_chain(data.arms[i].alpha, data.arms[i].beta).map(|c| c.len()).unwrap_or(0);
            graph.index_of(&format!("a{}_{}", i + 1, len)).expect("arm end")
        })
        .collect();
    let all: Vec<usize> = (0..graph.vertices.len()).collect();
    let inv = graph.neg_block(&all).inverse().expect("definite");
    let rows: Vec<Vec<Rational>> = all
        .iter()
        .map(|&v| ends.iter().map(|&w| frac_part(inv.get(v, w))).collect())
        .collect();
    let det = graph.neg_det(&all).to_u64().unwrap_or(u64::MAX);
    let mut group: HashSet<Vec<Rational>> = HashSet::from([vec![Rational::zero(); k]]);
    let mut generators = Vec::new();
    for row in rows {
        if group.contains(&row) || group.len() as u64 >= det {
            continue;
        }
        generators.push(row);
        group = closure(&generators, k, det);
    }
    Ok(StarConstruction {
        seifert: data.clone(),
        graph,
        equations,
        action: DiagonalAction { generators, order: group.len() as u64 },
    })
}

fn closure(gens: &[Vec<Rational>], k: usize, cap: u64) -> HashSet<Vec<Rational>> {
    let zero = vec![Rational::zero(); k];
    let mut seen = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<Rational> = x.iter().zip(g).map(|(a, b)| frac_part(&(a + b))).collect();
            if seen.insert(y.clone()) {
                if seen.len() as u64 > cap {
                    return seen;
                }
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Each generator must multiply every equation by a single character: the
/// values αⱼ·aⱼ mod 1 agree across the support of each equation.
pub fn action_preserves_equations(c: &StarConstruction) -> bool {
    c.action.generators.iter().all(|g| {
        c.equations.iter().all(|eq| {
            let chars: HashSet<Rational> = eq
                .terms()
                .keys()
                .map(|e| {
                    let x = e
                        .iter()
                        .zip(g)
                        .fold(Rational::zero(), |s, (p, a)| s + a * rat(*p as i64));
                    frac_part(&x)
                })
                .collect();
            chars.len() <= 1
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn graph(spec: &[(&str, i64, u64)], edges: &[(&str, &str)]) -> ResolutionGraph {
        ResolutionGraph::new(
            spec.iter().map(|&(id, weight, genus)| Vertex { id: id.into(), weight, genus }).collect(),
            edges.iter().map(|&(a, b)| (a.into(), b.into())).collect(),
        )
        .unwrap()
    }

    fn intro_graph() -> ResolutionGraph {
        graph(
            &[("v", -1, 0), ("l3", -3, 0), ("l2", -2, 0), ("w", -7, 0), ("m1", -3, 0), ("m2", -3, 0)],
            &[("v", "l3"), ("v", "l2"), ("v", "w"), ("w", "m1"), ("w", "m2")],
        )
    }

    fn cuspprop_graph() -> ResolutionGraph {
        let mut spec = vec![("c".to_string(), -19, 0)];
        let mut edges = Vec::new();
        for i in 1..=3 {
            spec.push((format!("s{i}"), -1, 0));
            spec.push((format!("s{i}a"), -2, 0));
            spec.push((format!("s{i}b"), -3, 0));
            edges.push(("c".to_string(), format!("s{i}")));
            edges.push((format!("s{i}"), format!("s{i}a")));
            edges.push((format!("s{i}"), format!("s{i}b")));
        }
        ResolutionGraph::new(
            spec.into_iter().map(|(id, weight, genus)| Vertex { id, weight, genus }).collect(),
            edges,
        )
        .unwrap()
    }

    #[test]
    fn determinants() {
        assert_eq!(graph_analyze(&intro_graph()).determinant, "3");
        let a = graph_analyze(&cuspprop_graph());
        assert_eq!((a.determinant.as_str(), a.b2, a.b1), ("1", 10, 0));
        let chain = graph(
            &[("c", -1, 0), ("x", -13, 0), ("y1", -2, 0), ("y2", -2, 0), ("z", -4, 0)],
            &[("c", "x"), ("c", "y1"), ("y1", "y2"), ("c", "z")],
        );
        assert_eq!(graph_analyze(&chain).determinant, "1");
    }

    #[test]
    fn indefinite_rejected_with_certificate() {
        let err = ResolutionGraph::new(
            vec![
                Vertex { id: "a".into(), weight: -1, genus: 0 },
                Vertex { id: "b".into(), weight: -1, genus: 0 },
            ],
            vec![("a".into(), "b".into())],
        )
        .unwrap_err();
        let GraphError::NotNegativeDefinite(cert) = err else { panic!("{err:?}") };
        assert!(cert.minor <= BigInt::zero());
        assert!(cert.self_intersection >= BigInt::zero());
        assert!(cert.vector.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn canonical_cycles() {
        let laufer = graph(&[("E0", -1, 1), ("E1", -2, 0), ("E2", -2, 0)], &[("E0", "E1"), ("E1", "E2")]);
        let k = canonical_cycle(&laufer);
        assert_eq!(k.cycle.values(), vec![rat(-3), rat(-2), rat(-1)]);
        assert!(k.integral);
        assert!(adjunction_residual(&laufer, &k.cycle).iter().all(|r| r.is_zero()));

        let minimal = graph(&[("E0", -1, 1), ("E1", -3, 0), ("E2", -3, 0)], &[("E0", "E1"), ("E0", "E2")]);
        assert_eq!(canonical_cycle(&minimal).cycle.values(), vec![rat(-5), rat(-2), rat(-2)]);

        let single = graph(&[("C", -2, 6)], &[]);
        let k = canonical_cycle(&single);
        assert_eq!(k.cycle.values(), vec![rat(-6)]);
        assert_eq!(k.k_squared, rat(-72));
    }

    #[test]
    fn laufer_formula_on_brieskorn() {
        let star = star_graph(&brieskorn_seifert([4, 3, 13]).unwrap()).unwrap();
        let ld = laufer_durfee_sw(&star, 8, None);
        assert_eq!(ld.k_squared, rat(-29));
        assert_eq!(ld.mu, rat(72));
        assert_eq!(ld.sigma, rat(88));
        assert_eq!(ld.predicted_pg, None);
        let ld0 = laufer_durfee_sw(&star, 0, Some(&ratio(3, 1)));
        assert_eq!(ld0.mu, &ld0.k_squared + rat(5));
        assert_eq!(ld0.predicted_pg, Some(rat(3) - (rat(-29) + rat(5)) / rat(8)));
    }

    #[test]
    fn splice_of_intro_graph() {
        let g = intro_graph();
        let sd = splice_diagram(&g).unwrap();
        assert_eq!(sd.nodes, vec!["v", "w"]);
        let mut wv = sd.weights_at("v");
        wv.sort();
        assert_eq!(wv, vec![2, 3, 57]);
        let mut ww = sd.weights_at("w");
        ww.sort();
        assert_eq!(ww, vec![1, 3, 3]);
        let viol = semigroup_condition(&sd);
        assert_eq!(viol.len(), 1);
        assert_eq!((viol[0].node.as_str(), viol[0].value, viol[0].generators.clone()), ("w", 1, vec![2, 3]));
        for ed in edge_determinants(&g, &sd) {
            assert!(ed.holds(), "{ed:?}");
        }
    }

    #[test]
    fn splice_of_cuspprop_graph() {
        let g = cuspprop_graph();
        let sd = splice_diagram(&g).unwrap();
        assert_eq!(sd.weights_at("c"), vec![1, 1, 1]);
        let mut s = sd.weights_at("s1");
        s.sort();
        assert_eq!(s, vec![2, 3, 7]);
        let viol = semigroup_condition(&sd);
        assert_eq!(viol.len(), 3);
        assert!(viol.iter().all(|v| v.node == "c" && v.value == 1 && v.generators == vec![2, 3]));
        assert!(edge_determinants(&g, &sd).iter().all(|e| e.holds() && e.lhs == "1"));
    }

    #[test]
    fn brieskorn_stars() {
        let s13 = brieskorn_seifert([4, 3, 13]).unwrap();
        assert_eq!(s13.arms.iter().map(|a| a.beta).collect::<Vec<_>>(), vec![1, 2, 1]);
        let s16 = brieskorn_seifert([4, 3, 16]).unwrap();
        assert_eq!(s16.arms.iter().map(|a| a.beta).collect::<Vec<_>>(), vec![1, 2, 1]);
        let c = star_graph_tools(&s16).unwrap();
        let mut weights: Vec<i64> = c.graph.vertices().iter().map(|v| v.weight).collect();
        weights.sort();
        assert_eq!(weights, vec![-16, -4, -2, -2, -1]);
        assert_eq!(c.action.order, 4);
        assert_eq!(c.equations.len(), 1);
        assert_eq!(c.equations[0].num_terms(), 3);
        assert!(action_preserves_equations(&c));
        assert_eq!(seifert_data(&c.graph), Some(s16));
        let sd = splice_diagram(&c.graph).unwrap();
        let mut w = sd.weights_at("c");
        w.sort();
        assert_eq!(w, vec![3, 4, 16]);
        assert!(semigroup_condition(&sd).is_empty());
    }

    #[test]
    fn yomdin_four_arm_star() {
        let data = SeifertData {
            central_weight: -2,
            central_genus: 0,
            arms: vec![
                Arm { alpha: 10, beta: 1 },
                Arm { alpha: 3, beta: 2 },
                Arm { alpha: 3, beta: 2 },
                Arm { alpha: 2, beta: 1 },
            ],
        };
        let c = star_graph_tools(&data).unwrap();
        assert_eq!(graph_analyze(&c.graph).determinant, "12");
        assert_eq!(c.action.order, 12);
        assert_eq!(c.equations.len(), 2);
        assert!(action_preserves_equations(&c));
        assert_eq!(euler_number(&data), ratio(-1, 15));
    }

    #[test]
    fn hirzebruch_jung() {
        assert_eq!(hj_chain(3, 2).unwrap(), vec![-2, -2]);
        assert_eq!(hj_chain(7, 3).unwrap(), vec![-3, -2, -2]);
        assert_eq!(hj_fraction(&[-3, -2, -2]), ratio(7, 3));
        assert!(hj_chain(4, 2).is_err());
    }

    #[test]
    fn semigroup_membership() {
        assert!(!in_semigroup(1, &[2, 3]));
        assert!(in_semigroup(7, &[2, 3]));
        assert!(in_semigroup(57, &[3]));
        assert!(!in_semigroup(58, &[3]));
        assert!(!in_semigroup(11, &[5, 7]));
        assert!(in_semigroup(24, &[5, 7]));
    }
}
