//! Per-kind evaluation of fixture expectations.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::eval::{column, is_zero_matrix, FormEnv, MatrixEnv};
use super::model::*;
use super::{CheckError, CheckResult, Corpus, Fixture, RunOptions, Status};
use crate::algebra::linalg::{span_basis, span_contains};
use crate::algebra::mpoly::vars as make_vars;
use crate::algebra::{format_rational, parse_in, parse_rational, BinaryForm, MultiPoly, Rational};
use crate::curve::ParamCurve;
use crate::ideal::{contains, groebner_basis, IdealBasis, MonomialOrder};
use crate::ring::{
    check_generators, find_generators, find_relations, proportional, rolling_factors, Generator, GradedRingModel,
    Presentation, RingOptions, RollingFactorsData, RollingTerm,
};
use crate::sections::{
    cusp_free_roots, local_section_space, power_search, CurveContext, LocalRoot, QDivisor, QDivisorSections,
    RootBundleData, SectionEngine, SectionSource,
};
use crate::topology::{
    action_preserves_equations, brieskorn_seifert, canonical_cycle, edge_determinants, euler_number, graph_analyze,
    laufer_durfee_sw, seifert_data, semigroup_condition, splice_diagram, star_graph_tools, GraphError,
    ResolutionGraph, SeifertData,
};

type CheckOut = Result<(Value, bool), CheckError>;

fn other(msg: impl Into<String>) -> CheckError {
    CheckError::Other(msg.into())
}

pub(crate) fn evaluate(corpus: &Corpus, fx: &Fixture, opts: &RunOptions) -> Result<Vec<CheckResult>, CheckError> {
    let mut subject: Box<dyn Subject + '_> = match fx.file.kind {
        Kind::Curve => Box::new(CurveSubject::new(fx)?),
        Kind::Root => Box::new(RootSubject::new(corpus, fx)?),
        Kind::Presentation => Box::new(PresentationSubject::new(corpus, fx, opts)?),
        Kind::Identity => Box::new(IdentitySubject::new(corpus, fx, opts)?),
        Kind::Graph => Box::new(GraphSubject::new(fx)?),
    };
    let mut out = Vec::new();
    for x in &fx.file.expect {
        let (measured, status, message) = match subject.check(&x.check, &x.args, &x.value) {
            Ok((m, true)) => (m, Status::Pass, None),
            Ok((m, false)) => (m, Status::Fail, None),
            Err(CheckError::Budget(s)) => (Value::Null, Status::Budget, Some(s)),
            Err(CheckError::Other(s)) => (Value::Null, Status::Fail, Some(s)),
        };
        out.push(CheckResult {
            check: x.check.clone(),
            args: x.args.clone(),
            expected: x.value.clone(),
            measured,
            status,
            source: x.source.clone(),
            message,
        });
    }
    Ok(out)
}

trait Subject {
    fn check(&mut self, name: &str, args: &Value, expected: &Value) -> CheckOut;
}

fn unknown(name: &str) -> CheckOut {
    Err(other(format!("unknown check '{name}'")))
}

/// Numbers and rational strings compare by value; arrays and objects recurse.
pub(crate) fn normalize(v: &Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::String(s) => match parse_rational(s) {
            Ok(r) => Value::String(format_rational(&r)),
            Err(_) => Value::String(s.clone()),
        },
        Value::Array(a) => Value::Array(a.iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), normalize(v))).collect()),
        other => other.clone(),
    }
}

fn same(measured: Value, expected: &Value) -> CheckOut {
    let ok = normalize(&measured) == normalize(expected);
    Ok((measured, ok))
}

fn arg_u64(args: &Value, key: &str) -> Result<u64, CheckError> {
    args.get(key).and_then(Value::as_u64).ok_or_else(|| other(format!("missing integer argument '{key}'")))
}

fn arg_str<'a>(args: &'a Value, key: &str) -> Result<&'a str, CheckError> {
    args.get(key).and_then(Value::as_str).ok_or_else(|| other(format!("missing string argument '{key}'")))
}

/// "a..b", inclusive at both ends.
pub fn parse_range(text: &str) -> Result<(u64, u64), String> {
    let (a, b) = text.split_once("..").ok_or_else(|| format!("range '{text}' is not of the form a..b"))?;
    let a: u64 = a.trim().parse().map_err(|_| format!("bad range start in '{text}'"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad range end in '{text}'"))?;
    if a > b {
        return Err(format!("empty range '{text}'"));
    }
    Ok((a, b))
}

fn arg_range(args: &Value) -> Result<(u64, u64), CheckError> {
    parse_range(arg_str(args, "range")?).map_err(other)
}

fn forms_of(v: &Value) -> Result<Vec<BinaryForm>, CheckError> {
    let list = v.as_array().ok_or_else(|| other("expected a list of forms"))?;
    list.iter()
        .map(|x| x.as_str().ok_or_else(|| other("forms must be strings")).and_then(|s| Ok(BinaryForm::parse(s)?)))
        .collect()
}

fn form_strings(forms: &[BinaryForm]) -> Value {
    Value::Array(forms.iter().map(|f| Value::String(f.to_string())).collect())
}

fn same_span(a: &[BinaryForm], b: &[BinaryForm]) -> Result<bool, CheckError> {
    if a.is_empty() || b.is_empty() {
        return Ok(a.is_empty() && b.is_empty());
    }
    let d = a[0].degree();
    if b[0].degree() != d {
        return Ok(false);
    }
    Ok(span_basis(a, d)? == span_basis(b, d)?)
}

// ---------------------------------------------------------------- curves

pub(crate) struct LoadedCurve {
    pub curve: ParamCurve,
    pub names: Vec<String>,
    pub equations: Vec<String>,
}

pub(crate) fn load_curve(fx: &Fixture) -> Result<LoadedCurve, CheckError> {
    let input: CurveInput = fx.input()?;
    let curve = match (input.coords.is_empty(), input.reciprocal.is_empty()) {
        (false, true) => ParamCurve::new(fx.id(), input.coords.clone())?,
        (true, false) => ParamCurve::reciprocal_cusp_curve(fx.id(), &input.reciprocal)?,
        _ => return Err(other(format!("{}: give exactly one of 'coords' and 'reciprocal'", fx.path.display()))),
    };
    let n = curve.coords().len();
    let names = if input.names.is_empty() {
        match n {
            3 => vec!["x".into(), "y".into(), "z".into()],
            _ => (0..n).map(|i| format!("x{i}")).collect(),
        }
    } else if input.names.len() == n {
        input.names.clone()
    } else {
        return Err(other(format!("{} names for {} coordinates", input.names.len(), n)));
    };
    Ok(LoadedCurve { curve, names, equations: input.equations })
}

fn coordinate_env(lc: &LoadedCurve) -> FormEnv {
    let mut env = FormEnv::default();
    for (n, f) in lc.names.iter().zip(lc.curve.coords()) {
        env.insert(n, f.clone());
    }
    env
}

struct CurveSubject {
    lc: LoadedCurve,
    ctx: Option<CurveContext>,
}

impl CurveSubject {
    fn new(fx: &Fixture) -> Result<Self, CheckError> {
        Ok(CurveSubject { lc: load_curve(fx)?, ctx: None })
    }

    fn ctx(&mut self) -> Result<&CurveContext, CheckError> {
        if self.ctx.is_none() {
            self.ctx = Some(CurveContext::new(self.lc.curve.clone())?);
        }
        Ok(self.ctx.as_ref().unwrap())
    }
}

impl Subject for CurveSubject {
    fn check(&mut self, name: &str, _args: &Value, expected: &Value) -> CheckOut {
        match name {
            "degree" => same(json!(self.lc.curve.degree()), expected),
            "plane" => same(json!(self.lc.curve.is_plane()), expected),
            "birational" => same(json!(self.lc.curve.is_birational()), expected),
            "genus" => {
                let g = self.ctx()?.genus;
                same(json!(g), expected)
            }
            "cuspCount" => {
                let c = self.ctx()?.cusps.len();
                same(json!(c), expected)
            }
            "deltaSum" => {
                let d: u64 = self.ctx()?.cusps.iter().map(|c| c.delta).sum();
                same(json!(d), expected)
            }
            "cusps" => {
                let mut list: Vec<Value> = self
                    .ctx()?
                    .cusps
                    .iter()
                    .map(|c| json!({"semigroup": c.semigroup, "delta": c.delta}))
                    .collect();
                list.sort_by_key(|v| v.to_string());
                let mut exp = expected.as_array().cloned().unwrap_or_default();
                exp.sort_by_key(|v| normalize(v).to_string());
                let ok = normalize(&Value::Array(list.clone())) == normalize(&Value::Array(exp));
                Ok((Value::Array(list), ok))
            }
            "equationsVanish" => {
                let env = coordinate_env(&self.lc);
                let mut all = true;
                for e in &self.lc.equations {
                    all &= env.eval(e)?.is_zero();
                }
                same(json!(all), expected)
            }
            _ => unknown(name),
        }
    }
}

// ----------------------------------------------------------------- roots

pub(crate) struct LoadedRoot {
    pub lc: LoadedCurve,
    pub ctx: CurveContext,
    pub input: RootInput,
}

pub(crate) fn load_root(corpus: &Corpus, fx: &Fixture) -> Result<LoadedRoot, CheckError> {
    let input: RootInput = fx.input()?;
    let curve_fx = corpus.get(&input.curve)?;
    let lc = load_curve(curve_fx)?;
    let ctx = CurveContext::new(lc.curve.clone())?;
    Ok(LoadedRoot { lc, ctx, input })
}

impl LoadedRoot {
    /// The section source described by the root file.
    pub fn source(&self) -> Result<Box<dyn SectionSource + '_>, CheckError> {
        let i = &self.input;
        if let Some(parts) = &i.qdivisor {
            return Ok(Box::new(QDivisorSections::new(&self.ctx, QDivisor { parts: parts.clone() })?));
        }
        if i.rho == 0 {
            return Err(other("root data needs rho > 0"));
        }
        match &i.key_form {
            Some(k) => Ok(Box::new(SectionEngine::new(&self.ctx, RootBundleData::new(i.rho, i.a_units, i.kappa, k.clone()))?)),
            None => Ok(Box::new(LocalRoot { ctx: &self.ctx, rho: i.rho })),
        }
    }

    pub fn degree_ratio(&self) -> Rational {
        Rational::new(BigInt::from(self.ctx.curve.degree()), BigInt::from(self.input.rho.max(1)))
    }
}

struct RootSubject {
    root: LoadedRoot,
}

impl RootSubject {
    fn new(corpus: &Corpus, fx: &Fixture) -> Result<Self, CheckError> {
        Ok(RootSubject { root: load_root(corpus, fx)? })
    }
}

impl Subject for RootSubject {
    fn check(&mut self, name: &str, args: &Value, expected: &Value) -> CheckOut {
        if name == "keyRejected" {
            let m = match self.root.source() {
                Ok(_) => json!(false),
                Err(CheckError::Other(s)) => json!(s),
                Err(e) => return Err(e),
            };
            let ok = match (expected, &m) {
                (Value::Bool(b), Value::Bool(false)) => !b,
                (Value::Bool(b), Value::String(_)) => *b,
                (Value::String(want), Value::String(got)) => got.contains(want.as_str()),
                _ => false,
            };
            return Ok((m, ok));
        }
        let src = self.root.source()?;
        let h = |n: i64| -> Result<usize, CheckError> { if n < 0 { Ok(0) } else { Ok(src.sections(n as u64)?.len()) } };
        match name {
            "dims" => {
                let (a, b) = arg_range(args)?;
                let dims: Vec<usize> = (a..=b).map(|n| h(n as i64)).collect::<Result<_, _>>()?;
                same(json!(dims), expected)
            }
            "h0" => same(json!(h(arg_u64(args, "n")? as i64)?), expected),
            "pg" => {
                let i = &self.root.input;
                let c = i.conormal.max(1) as i64;
                let mut total = 0;
                let mut j = 0;
                while j * c <= i.kappa {
                    total += h(j * c)?;
                    j += 1;
                }
                same(json!(total), expected)
            }
            "rrResidual" => {
                let (a, b) = arg_range(args)?;
                let g = self.root.ctx.genus as i64;
                let ratio = self.root.degree_ratio();
                let mut worst = 0i64;
                for n in a..=b {
                    let deg = (ratio.clone() * Rational::from_integer(BigInt::from(n))).floor().to_integer();
                    let deg: i64 = deg.try_into().map_err(|_| other("degree overflow"))?;
                    let r = h(n as i64)? as i64 - h(self.root.input.kappa - n as i64)? as i64 - (deg - g + 1);
                    if r.abs() > worst.abs() {
                        worst = r;
                    }
                }
                same(json!(worst), expected)
            }
            "localAgrees" => {
                let (a, b) = arg_range(args)?;
                let mut ok = true;
                for n in a..=b {
                    let local = local_section_space(&self.root.ctx, self.root.input.rho, n)?.basis;
                    ok &= same_span(&src.sections(n)?, &local)?;
                }
                same(json!(ok), expected)
            }
            "sectionBasis" => {
                let got = src.sections(arg_u64(args, "n")?)?;
                let want = forms_of(expected)?;
                let ok = same_span(&got, &want)?;
                Ok((form_strings(&got), ok))
            }
            "squareRoots" => {
                let n = arg_u64(args, "n")?;
                let k = arg_u64(args, "k").unwrap_or(2) as u32;
                let space = src.sections(n)?;
                let found = power_search(&space, k, &crate::ideal::Budget::default())?;
                let mut roots: Vec<BinaryForm> = cusp_free_roots(&self.root.ctx, &found).iter().map(|r| r.normalized()).collect();
                roots.sort_by_key(|r| r.to_string());
                let mut want: Vec<BinaryForm> = forms_of(expected)?.iter().map(|r| r.normalized()).collect();
                want.sort_by_key(|r| r.to_string());
                Ok((form_strings(&roots), roots == want))
            }
            _ => unknown(name),
        }
    }
}

// ---------------------------------------------------------- bindings

/// Evaluate a binding, resolving plane expressions against the curve and the
/// root key form.
fn binding_form(b: &Binding, degree: Option<u64>, root: Option<&LoadedRoot>, curve: Option<&LoadedCurve>) -> Result<BinaryForm, CheckError> {
    match b {
        Binding::Form(f) => Ok(f.clone()),
        Binding::Plane(p) => {
            let lc = curve.or(root.map(|r| &r.lc)).ok_or_else(|| other("plane binding needs a curve"))?;
            let num = coordinate_env(lc).eval(&p.plane)?;
            let over = match (&p.over, root.and_then(|r| r.input.key_form.clone())) {
                (Some(o), _) => o.clone(),
                (None, Some(k)) => k,
                (None, None) => BinaryForm::one(),
            };
            let power = match (p.power, p.degree.or(degree), root) {
                (Some(q), _, _) => q,
                (None, Some(n), Some(r)) => {
                    let d = lc.curve.degree() as u64;
                    if num.degree() as u64 % d != 0 {
                        return Err(other(format!("'{}' is not homogeneous in the coordinates", p.plane)));
                    }
                    let e = num.degree() as u64 / d;
                    let (rho, a) = (r.input.rho as u64, r.input.a_units as u64);
                    if a == 0 || rho * e < n || (rho * e - n) % a != 0 {
                        return Err(other(format!("no key power binds '{}' in degree {n}", p.plane)));
                    }
                    ((rho * e - n) / a) as u32
                }
                _ => return Err(other(format!("plane binding '{}' needs a power or a degree with a root", p.plane))),
            };
            Ok(num.div_exact(&over.pow(power))?)
        }
    }
}

// ---------------------------------------------------------- presentations

struct PresentationSubject {
    root: LoadedRoot,
    opts: RunOptions,
    input: PresentationInput,
    canonical: OnceLock<Result<GradedRingModel, String>>,
    presentation: OnceLock<Result<Presentation, String>>,
}

impl PresentationSubject {
    fn new(corpus: &Corpus, fx: &Fixture, opts: &RunOptions) -> Result<Self, CheckError> {
        let input: PresentationInput = fx.input()?;
        let root = load_root(corpus, corpus.get(&input.root)?)?;
        Ok(PresentationSubject { root, opts: *opts, input, canonical: OnceLock::new(), presentation: OnceLock::new() })
    }

    fn listed(&self) -> Result<Option<GradedRingModel>, CheckError> {
        if self.input.generators.is_empty() {
            return Ok(None);
        }
        let gens = self
            .input
            .generators
            .iter()
            .map(|g| Ok(Generator { name: g.name.clone(), degree: g.degree, form: binding_form(&g.form, Some(g.degree), Some(&self.root), None)? }))
            .collect::<Result<Vec<_>, CheckError>>()?;
        Ok(Some(GradedRingModel::new(gens)?))
    }

    fn canonical(&self) -> Result<&GradedRingModel, CheckError> {
        self.canonical
            .get_or_init(|| {
                let src = self.root.source().map_err(|e| format!("{e:?}"))?;
                find_generators(src.as_ref(), self.input.max_degree, false).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| CheckError::from(e.clone()))
    }

    fn presentation(&self) -> Result<&Presentation, CheckError> {
        let res = self.presentation.get_or_init(|| {
            let model = match self.listed().map_err(|e| format!("{e:?}"))? {
                Some(m) => m,
                None => self.canonical().map_err(|e| format!("{e:?}"))?.clone(),
            };
            let src = self.root.source().map_err(|e| format!("{e:?}"))?;
            find_relations(&model, src.as_ref(), &RingOptions::up_to(self.input.relation_degree)).map_err(|e| e.to_string())
        });
        res.as_ref().map_err(|e| CheckError::from(e.clone()))
    }
}

impl Subject for PresentationSubject {
    fn check(&mut self, name: &str, _args: &Value, expected: &Value) -> CheckOut {
        match name {
            "generatorDegrees" => same(json!(self.canonical()?.degrees()), expected),
            "generatorCount" => same(json!(self.canonical()?.generators.len()), expected),
            "generatorDegreeRange" => {
                let d = self.canonical()?.degrees();
                same(json!([d.iter().min(), d.iter().max()]), expected)
            }
            "paperGenerators" => {
                let model = self.listed()?.ok_or_else(|| other("no generators listed"))?;
                let src = self.root.source()?;
                let m = match check_generators(&model, src.as_ref(), self.input.max_degree) {
                    Ok(()) => json!(true),
                    Err(e) => json!(e.to_string()),
                };
                let ok = m == *expected;
                Ok((m, ok))
            }
            "generatorForms" => {
                // each listed form lies in the algebra generated by the canonical generators
                let model = self.canonical()?;
                let items = expected.as_array().ok_or_else(|| other("expected a list of {degree, form}"))?;
                let mut ok = true;
                for it in items {
                    let n = it.get("degree").and_then(Value::as_u64).ok_or_else(|| other("missing degree"))?;
                    let f = BinaryForm::parse(it.get("form").and_then(Value::as_str).ok_or_else(|| other("missing form"))?)?;
                    let span = subalgebra_piece(model, n)?;
                    ok &= span_contains(&span, &f)?;
                }
                Ok((json!(ok), ok))
            }
            "relationCount" => same(json!(self.presentation()?.relations.len()), expected),
            "relationDegrees" => same(json!(self.presentation()?.relation_degrees), expected),
            "palindromic" => same(json!(self.presentation()?.palindromic), expected),
            "hilbertNumerator" => same(json!(self.presentation()?.hilbert_numerator), expected),
            "relations" => {
                // listed equations vanish and generate the computed relations
                let pres = self.presentation()?;
                let model = self.listed()?.ok_or_else(|| other("relations need listed generators"))?;
                let vars = model.vars();
                let bindings = model.bindings();
                let listed = self.input.relations.iter().map(|t| parse_in(t, &vars)).collect::<Result<Vec<_>, _>>()?;
                let mut ok = pres.relations.len() == listed.len();
                for p in &listed {
                    ok &= p.subst_forms(&bindings)?.is_zero();
                }
                if ok {
                    let gb = groebner_basis(&IdealBasis::new(&vars, listed, MonomialOrder::Grevlex)?, &self.opts.budget)?;
                    for r in &pres.relations {
                        ok &= contains(&gb, r)?;
                    }
                }
                let shown: Vec<String> = pres.relations.iter().map(|r| r.to_string()).collect();
                Ok((json!(shown), ok == expected.as_bool().unwrap_or(true)))
            }
            _ => unknown(name),
        }
    }
}

/// Degree-n part of the algebra generated by the model's generators.
fn subalgebra_piece(model: &GradedRingModel, n: u64) -> Result<Vec<BinaryForm>, CheckError> {
    let mut by_degree: BTreeMap<u64, Vec<BinaryForm>> = BTreeMap::new();
    by_degree.insert(0, vec![BinaryForm::one()]);
    for d in 1..=n {
        let mut forms = Vec::new();
        for g in model.generators.iter().filter(|g| g.degree <= d) {
            if let Some(lower) = by_degree.get(&(d - g.degree)) {
                forms.extend(lower.iter().map(|f| f * &g.form));
            }
        }
        if !forms.is_empty() {
            let deg = forms[0].degree();
            by_degree.insert(d, span_basis(&forms, deg)?);
        }
    }
    Ok(by_degree.remove(&n).unwrap_or_default())
}

// ------------------------------------------------------------ identities

struct IdentitySubject {
    input: IdentityInput,
    env: FormEnv,
    opts: RunOptions,
}

impl IdentitySubject {
    fn new(corpus: &Corpus, fx: &Fixture, opts: &RunOptions) -> Result<Self, CheckError> {
        let input: IdentityInput = fx.input()?;
        let root = match &input.root {
            Some(r) => Some(load_root(corpus, corpus.get(r)?)?),
            None => None,
        };
        let curve = match &input.curve {
            Some(c) => Some(load_curve(corpus.get(c)?)?),
            None => None,
        };
        let mut env = FormEnv::default();
        for (name, b) in &input.bindings {
            env.insert(name, binding_form(b, None, root.as_ref(), curve.as_ref())?);
        }
        Ok(IdentitySubject { input, env, opts: *opts })
    }

    fn rolling(&self, case: &str) -> Result<(Vec<MultiPoly>, &RollingCase), CheckError> {
        let spec = self.input.rolling.as_ref().ok_or_else(|| other("no rolling data"))?;
        let c = spec.cases.iter().find(|c| c.label == case).ok_or_else(|| other(format!("no rolling case '{case}'")))?;
        let p = |t: &str| self.env.parse(t);
        let row = |r: &[String; 4]| -> Result<[MultiPoly; 4], CheckError> { Ok([p(&r[0])?, p(&r[1])?, p(&r[2])?, p(&r[3])?]) };
        let data = RollingFactorsData {
            matrix: [row(&spec.matrix[0])?, row(&spec.matrix[1])?],
            base: spec
                .base
                .iter()
                .map(|t| Ok(RollingTerm { coeff: p(&t.coeff)?, slots: t.slots.clone() }))
                .collect::<Result<_, CheckError>>()?,
            steps: spec.steps,
            phi_entry: (spec.phi_entry[0], spec.phi_entry[1]),
        };
        Ok((rolling_factors(&data, &p(&c.phi)?)?, c))
    }

    fn vanishes(&self, eqs: &[MultiPoly]) -> Result<Vec<usize>, CheckError> {
        let map = self.env.map();
        let mut failing = Vec::new();
        for (i, e) in eqs.iter().enumerate() {
            // a non-homogeneous polynomial cannot vanish identically unless each component does
            let zero = e.homogeneous_components().values().try_fold(true, |acc, c| -> Result<bool, CheckError> {
                Ok(acc && c.subst_forms(&map)?.is_zero())
            })?;
            if !zero {
                failing.push(i);
            }
        }
        Ok(failing)
    }

    fn matrix_failures(&self) -> Result<Vec<String>, CheckError> {
        let sys = self.input.matrix_system.as_ref().ok_or_else(|| other("no matrix system"))?;
        let mut mats = HashMap::new();
        for (name, rows) in &sys.matrices {
            let m = rows
                .iter()
                .map(|r| r.iter().map(|t| Ok(self.env.eval(t)?)).collect::<Result<Vec<_>, CheckError>>())
                .collect::<Result<Vec<_>, _>>()?;
            mats.insert(name.clone(), m);
        }
        for (name, v) in &sys.vectors {
            let col = v.iter().map(|t| Ok(self.env.eval(t)?)).collect::<Result<Vec<_>, CheckError>>()?;
            mats.insert(name.clone(), column(col));
        }
        let menv = MatrixEnv { mats };
        let mut failing = Vec::new();
        for e in &sys.equations {
            if !is_zero_matrix(&menv.eval(e)?) {
                failing.push(e.clone());
            }
        }
        Ok(failing)
    }
}

impl Subject for IdentitySubject {
    fn check(&mut self, name: &str, args: &Value, expected: &Value) -> CheckOut {
        match name {
            "vanish" | "failingEquations" => {
                let eqs = self.input.equations.iter().map(|t| self.env.parse(t)).collect::<Result<Vec<_>, _>>()?;
                let failing = self.vanishes(&eqs)?;
                if name == "vanish" {
                    same(json!(failing.is_empty()), expected)
                } else {
                    same(json!(failing), expected)
                }
            }
            "matrixSystem" => {
                let failing = self.matrix_failures()?;
                let ok = failing.is_empty() == expected.as_bool().unwrap_or(true);
                Ok((if failing.is_empty() { json!(true) } else { json!(failing) }, ok))
            }
            "rollingCount" => {
                let (eqs, _) = self.rolling(arg_str(args, "case")?)?;
                same(json!(eqs.len()), expected)
            }
            "rollingVanish" => {
                let (eqs, _) = self.rolling(arg_str(args, "case")?)?;
                let failing = self.vanishes(&eqs)?;
                let m = if failing.is_empty() { json!(true) } else { json!(failing) };
                Ok((m, failing.is_empty() == expected.as_bool().unwrap_or(true)))
            }
            "rollingDisplayed" => {
                let (eqs, case) = self.rolling(arg_str(args, "case")?)?;
                let shown = case.displayed.iter().map(|t| self.env.parse(t)).collect::<Result<Vec<_>, _>>()?;
                let mut used = vec![false; eqs.len()];
                let mut unmatched = Vec::new();
                for (i, d) in shown.iter().enumerate() {
                    match (0..eqs.len()).find(|&j| !used[j] && proportional(&eqs[j], d)) {
                        Some(j) => used[j] = true,
                        None => unmatched.push(case.displayed[i].clone()),
                    }
                }
                let ok = unmatched.is_empty();
                let m = if ok { json!(true) } else { json!({"unmatched": unmatched, "expanded": eqs.iter().map(|e| e.to_string()).collect::<Vec<_>>()}) };
                Ok((m, ok == expected.as_bool().unwrap_or(true)))
            }
            "holds" => {
                let label = arg_str(args, "label")?;
                let sub = self
                    .input
                    .substitutions
                    .iter()
                    .find(|s| s.label == label)
                    .ok_or_else(|| other(format!("no substitution '{label}'")))?;
                let weights = |names: &[String]| make_vars(&names.iter().map(|n| (n.as_str(), 1)).collect::<Vec<_>>());
                let (sv, tv) = (weights(&sub.source_vars), weights(&sub.target_vars));
                let map = sub
                    .map
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), parse_in(v, &tv)?)))
                    .collect::<Result<HashMap<_, _>, CheckError>>()?;
                let lhs = parse_in(&sub.source, &sv)?.subst_polys(&map, &tv)?;
                let rhs = parse_in(&sub.target, &tv)?;
                same(json!(lhs == rhs), expected)
            }
            "member" => {
                let label = arg_str(args, "label")?;
                let m = self
                    .input
                    .membership
                    .iter()
                    .find(|s| s.label == label)
                    .ok_or_else(|| other(format!("no membership problem '{label}'")))?;
                let vars = make_vars(&m.vars.iter().map(|(n, w)| (n.as_str(), *w)).collect::<Vec<_>>());
                let gens = m.generators.iter().map(|t| parse_in(t, &vars)).collect::<Result<Vec<_>, _>>()?;
                let p = parse_in(&m.polynomial, &vars)?;
                let gb = groebner_basis(&IdealBasis::new(&vars, gens, MonomialOrder::Grevlex)?, &self.opts.budget)?;
                same(json!(contains(&gb, &p)?), expected)
            }
            _ => unknown(name),
        }
    }
}

// ---------------------------------------------------------------- graphs

struct GraphSubject {
    input: GraphInput,
    graph: Result<ResolutionGraph, GraphError>,
}

impl GraphSubject {
    fn new(fx: &Fixture) -> Result<Self, CheckError> {
        let input: GraphInput = fx.input()?;
        let graph = super::tools::graph_from_input(&input)
            .ok_or_else(|| other("graph input needs 'graph', 'seifert' or 'brieskorn'"))?;
        Ok(GraphSubject { input, graph })
    }

    fn seifert(&self) -> Result<SeifertData, CheckError> {
        let g = self.graph.as_ref().map_err(|e| other(e.to_string()))?;
        seifert_data(g).ok_or_else(|| other("graph is not star-shaped"))
    }
}

fn sorted_seifert(mut s: SeifertData) -> Value {
    s.arms.sort_by_key(|a| (a.alpha, a.beta));
    json!(s)
}

impl Subject for GraphSubject {
    fn check(&mut self, name: &str, _args: &Value, expected: &Value) -> CheckOut {
        if name == "definite" {
            let m = match &self.graph {
                Ok(_) => json!(true),
                Err(GraphError::NotNegativeDefinite(_)) => json!(false),
                Err(e) => return Err(other(e.to_string())),
            };
            return same(m, expected);
        }
        let g = self.graph.as_ref().map_err(|e| other(e.to_string()))?;
        match name {
            "determinant" => same(json!(graph_analyze(g).determinant), expected),
            "b1" => same(json!(graph_analyze(g).b1), expected),
            "b2" => same(json!(graph_analyze(g).b2), expected),
            "cycleRank" => same(json!(graph_analyze(g).cycle_rank), expected),
            "canonicalCycle" => {
                let k = canonical_cycle(g);
                let m: serde_json::Map<String, Value> =
                    k.cycle.coefficients.iter().map(|(v, c)| (v.clone(), json!(format_rational(c)))).collect();
                same(Value::Object(m), expected)
            }
            "kSquared" => same(json!(format_rational(&canonical_cycle(g).k_squared)), expected),
            "integral" => same(json!(canonical_cycle(g).integral), expected),
            "mu" | "sigma" => {
                let pg = self.input.pg.ok_or_else(|| other("mu/sigma need 'pg'"))?;
                let ld = laufer_durfee_sw(g, pg, None);
                let v = if name == "mu" { ld.mu } else { ld.sigma };
                same(json!(format_rational(&v)), expected)
            }
            "spliceWeights" => {
                let sd = splice_diagram(g)?;
                let m: serde_json::Map<String, Value> = sd
                    .nodes
                    .iter()
                    .map(|n| {
                        let mut w = sd.weights_at(n);
                        w.sort_unstable();
                        (n.clone(), json!(w))
                    })
                    .collect();
                same(Value::Object(m), expected)
            }
            "semigroupViolations" => {
                let sd = splice_diagram(g)?;
                let mut v: Vec<String> = semigroup_condition(&sd)
                    .iter()
                    .map(|x| {
                        let gens: Vec<String> = x.generators.iter().map(|g| g.to_string()).collect();
                        format!("{} not in <{}>", x.value, gens.join(","))
                    })
                    .collect();
                v.sort();
                let mut want: Vec<Value> = expected.as_array().cloned().unwrap_or_default();
                want.sort_by_key(|x| x.to_string());
                let ok = json!(v) == Value::Array(want);
                Ok((json!(v), ok))
            }
            "edgeDeterminants" => {
                let sd = splice_diagram(g)?;
                let eds = edge_determinants(g, &sd);
                same(json!(eds.iter().all(|e| e.holds())), expected)
            }
            "seifert" => {
                let mut want: SeifertData = serde_json::from_value(expected.clone()).map_err(|e| other(e.to_string()))?;
                want.arms.sort_by_key(|a| (a.alpha, a.beta));
                let got = sorted_seifert(self.seifert()?);
                let ok = got == json!(want);
                Ok((got, ok))
            }
            "matchesBrieskorn" => {
                let e = self.input.brieskorn.ok_or_else(|| other("no 'brieskorn' exponents given"))?;
                let ok = sorted_seifert(self.seifert()?) == sorted_seifert(brieskorn_seifert(e)?);
                same(json!(ok), expected)
            }
            "euler" => same(json!(format_rational(&euler_number(&self.seifert()?))), expected),
            "actionOrder" | "equationCount" | "actionPreserves" => {
                let c = star_graph_tools(&self.seifert()?)?;
                let m = match name {
                    "actionOrder" => json!(c.action.order),
                    "equationCount" => json!(c.equations.len()),
                    _ => json!(action_preserves_equations(&c)),
                };
                same(m, expected)
            }
            _ => unknown(name),
        }
    }
}
