use std::fmt::Write as _;
use std::sync::Arc;

use bsloc_core::bscomb::{EtaVector, GkmCheck};
use bsloc_core::flagpush::DEFAULT_WEYL_BOUND;
use bsloc_core::json::{
    eta_to_json, gkm_to_json, series_to_json, wfunction_to_json, SubsetFunctionJson,
};
use bsloc_core::render::render_series;
use bsloc_core::subset::ordered_subsets;
use bsloc_core::verify::{self, Outcome, SuiteConfig};
use bsloc_core::{
    BottSamelson, Error, FlagVariety, FormalGroupAlgebra, FormalGroupLaw, LatticeVector,
    LocalizedElement, Result, RootDatum, Series, Subset, WFunction, WeylGroup,
};
use serde_json::{json, Value};

use crate::{FglChoice, Options};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    MathFailure,
    PrecisionExhausted,
}

pub struct Report {
    pub json: Value,
    pub text: String,
    pub status: Status,
}

pub struct Context {
    alg: Arc<FormalGroupAlgebra>,
    seq: Option<Vec<usize>>,
    subset: Option<String>,
    seed: u64,
    samples: usize,
    input: Option<std::path::PathBuf>,
}

/// 1 for configuration problems, 2 for mathematical failures, 3 when the
/// truncation precision ran out.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted { .. } => 3,
        Error::NotDivisible { .. }
        | Error::NotUnit(_)
        | Error::ResidualDenominator { .. }
        | Error::NonzeroConstantTerm
        | Error::Mismatch(_) => 2,
        _ => 1,
    }
}

fn parse_seq(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse()
                .map_err(|_| Error::Parse(format!("bad sequence entry {p:?}")))
        })
        .collect()
}

impl Context {
    pub fn build(o: &Options) -> Result<Self> {
        let datum = match (&o.datum, &o.cartan_file) {
            (Some(name), None) => RootDatum::named(name)?,
            (None, Some(path)) => RootDatum::from_file(path)?,
            _ => {
                return Err(Error::Parse(
                    "exactly one of --type and --cartan-file is required".into(),
                ))
            }
        };
        let fgl = match (&o.fgl, &o.fgl_file) {
            (_, Some(path)) => FormalGroupLaw::from_file(path)?,
            (Some(FglChoice::Multiplicative), None) => FormalGroupLaw::multiplicative(),
            _ => FormalGroupLaw::additive(),
        };
        let alg = FormalGroupAlgebra::new(datum, fgl, o.trunc)?;
        let seq = o.seq.as_deref().map(parse_seq).transpose()?;
        if let Some(seq) = &seq {
            // validates the indices against the datum
            BottSamelson::new(alg.clone(), seq.clone())?;
        }
        Ok(Context {
            alg,
            seq,
            subset: o.subset.clone(),
            seed: o.seed,
            samples: o.samples,
            input: o.input.clone(),
        })
    }

    fn bott_samelson(&self) -> Result<BottSamelson> {
        let seq = self
            .seq
            .clone()
            .ok_or_else(|| Error::Parse("--seq is required".into()))?;
        BottSamelson::new(self.alg.clone(), seq)
    }

    fn subset(&self, l: usize) -> Result<Option<Subset>> {
        self.subset
            .as_deref()
            .map(|s| Subset::parse(s, l))
            .transpose()
    }

    fn header(&self) -> String {
        let mut h = format!(
            "# {}, {} law, N = {}",
            self.alg.datum().name(),
            self.alg.fgl().kind().as_str(),
            self.alg.precision()
        );
        if let Some(seq) = &self.seq {
            let _ = write!(
                h,
                ", I = ({})",
                seq.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
        }
        h.push('\n');
        h
    }

    fn meta(&self) -> Value {
        json!({
            "datum": self.alg.datum().name(),
            "cartan": self.alg.datum().cartan(),
            "fgl": self.alg.fgl().kind().as_str(),
            "precision": self.alg.precision(),
            "seq": self.seq,
        })
    }

    fn render(&self, s: &Series) -> String {
        render_series(&self.alg, s)
    }

    fn render_localized(&self, v: &LocalizedElement) -> String {
        let num = self.render(v.numerator());
        if v.is_integral() {
            return num;
        }
        let den: Vec<String> = v
            .denominator()
            .iter()
            .map(|r| format!("x_{{{}}}", self.alg.datum().label(r)))
            .collect();
        format!("({num})/({})", den.join("*"))
    }

    fn weight_json(&self, v: &LatticeVector) -> Value {
        json!({ "label": self.alg.datum().label(v), "weight": v.coords() })
    }
}

fn eta_label(l: Subset) -> String {
    if l.is_empty() {
        "η_∅".to_string()
    } else {
        let pos: Vec<String> = l.positions().map(|j| j.to_string()).collect();
        format!("η_{{{}}}", pos.join(","))
    }
}

/// Joins signed terms as `a + b - c`.
fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

/// Coefficient times a basis label, eliding unit coefficients.
fn scaled(c: String, label: String) -> String {
    let c = if c.contains(" + ") || c.contains(" - ") {
        format!("({c})")
    } else {
        c
    };
    match c.as_str() {
        "1" => label,
        "-1" => format!("-{label}"),
        _ => format!("{c}*{label}"),
    }
}

/// `c1*η_{L1} + c2*η_{L2} + …` over the nonzero coefficients.
fn eta_expansion(ctx: &Context, v: &EtaVector) -> String {
    let terms: Vec<String> = ordered_subsets(v.len())
        .into_iter()
        .filter(|&l| !v.get(l).is_zero())
        .map(|l| {
            let c = ctx.render(v.get(l));
            if l.is_empty() {
                c
            } else {
                scaled(c, eta_label(l))
            }
        })
        .collect();
    join_terms(&terms)
}

fn wfunction_text(ctx: &Context, f: &WFunction) -> String {
    let mut t = String::new();
    for (w, v) in f.iter() {
        let _ = writeln!(t, "  {w:?}: {}", ctx.render_localized(v));
    }
    t
}

fn outcome_status(o: &Outcome) -> Status {
    match o {
        Outcome::Pass => Status::Ok,
        Outcome::Fail(_) => Status::MathFailure,
        Outcome::Precision(_) => Status::PrecisionExhausted,
    }
}

fn worst(a: Status, b: Status) -> Status {
    use Status::*;
    match (a, b) {
        (MathFailure, _) | (_, MathFailure) => MathFailure,
        (PrecisionExhausted, _) | (_, PrecisionExhausted) => PrecisionExhausted,
        _ => Ok,
    }
}

pub fn roots(ctx: &Context) -> Result<Report> {
    let d = ctx.alg.datum();
    let weyl_order = WeylGroup::enumerate(d.clone(), DEFAULT_WEYL_BOUND)
        .ok()
        .map(|g| g.len());
    let mut text = ctx.header();
    let _ = writeln!(
        text,
        "rank {}, {} positive roots",
        d.rank(),
        d.positive_roots().len()
    );
    match weyl_order {
        Some(n) => {
            let _ = writeln!(text, "|W| = {n}");
        }
        None => {
            let _ = writeln!(text, "|W| > {DEFAULT_WEYL_BOUND}");
        }
    }
    for r in d.positive_roots() {
        let _ = writeln!(text, "  {} = {:?}", d.label(r), r.coords());
    }
    let mut fixed = Vec::new();
    if ctx.seq.is_some() {
        let bs = ctx.bott_samelson()?;
        let _ = writeln!(text, "fixed points:");
        for l in ordered_subsets(bs.len()) {
            let v = bs.v(l)?;
            let weights = bs.tangent_weights(l)?;
            let x = bs.x_il(l)?;
            let labels: Vec<String> = weights.iter().map(|w| d.label(w)).collect();
            let _ = writeln!(
                text,
                "  L = {} v = {v:?}  weights [{}]  x_{{I,L}} = {}",
                l.label(bs.len()),
                labels.join(", "),
                ctx.render(&x)
            );
            fixed.push(json!({
                "subset": l.0,
                "label": l.label(bs.len()),
                "v_word": v.word(),
                "tangent_weights": weights.iter().map(|w| ctx.weight_json(w)).collect::<Vec<_>>(),
                "x_il": series_to_json(&x),
            }));
        }
    }
    let json = json!({
        "meta": ctx.meta(),
        "rank": d.rank(),
        "simple_roots": d.simple_roots().iter().map(|r| ctx.weight_json(r)).collect::<Vec<_>>(),
        "positive_roots": d.positive_roots().iter().map(|r| ctx.weight_json(r)).collect::<Vec<_>>(),
        "weyl_order": weyl_order,
        "fixed_points": fixed,
    });
    Ok(Report {
        json,
        text,
        status: Status::Ok,
    })
}

pub fn restrict(ctx: &Context) -> Result<Report> {
    let bs = ctx.bott_samelson()?;
    let l = bs.len();
    let mut text = ctx.header();
    if let Some(row) = ctx.subset(l)? {
        let g = bs.restrict_eta(row)?;
        let _ = writeln!(text, "restriction of {}:", eta_label(row));
        for m in ordered_subsets(l) {
            let _ = writeln!(text, "  f_{{{}}}: {}", m.label(l), ctx.render(g.get(m)));
        }
        let json = serde_json::to_value(gkm_to_json(bs.seq(), &g))?;
        return Ok(Report {
            json,
            text,
            status: Status::Ok,
        });
    }
    let m = bs.restriction_matrix();
    let mut rows = Vec::new();
    for (r, lrow) in m.order.iter().enumerate() {
        let terms: Vec<String> = m
            .order
            .iter()
            .enumerate()
            .filter(|(c, _)| !m.rows[r][*c].is_zero())
            .map(|(c, col)| scaled(ctx.render(&m.rows[r][c]), format!("f_{{{}}}", col.label(l))))
            .collect();
        let _ = writeln!(text, "j*({}) = {}", eta_label(*lrow), join_terms(&terms));
        rows.push(json!({
            "subset": lrow.0,
            "values": m.rows[r].iter().map(series_to_json).collect::<Vec<_>>(),
        }));
    }
    let json = json!({
        "meta": ctx.meta(),
        "order": m.order.iter().map(|s| s.0).collect::<Vec<_>>(),
        "rows": rows,
        "skew_triangular": m.is_skew_triangular(),
    });
    Ok(Report {
        json,
        text,
        status: Status::Ok,
    })
}

pub fn relations(ctx: &Context) -> Result<Report> {
    let bs = ctx.bott_samelson()?;
    let mut text = ctx.header();
    let mut rels = Vec::new();
    for j in 1..=bs.len() {
        let r = bs.quadratic_relation(j)?;
        let _ = writeln!(
            text,
            "{}^2 = {}",
            eta_label(Subset::from_positions(&[j])),
            eta_expansion(ctx, &r)
        );
        rels.push(json!({ "j": j, "square": eta_to_json(bs.seq(), &r) }));
    }
    let json = json!({ "meta": ctx.meta(), "relations": rels });
    Ok(Report {
        json,
        text,
        status: Status::Ok,
    })
}

pub fn pushforward(ctx: &Context, check: bool) -> Result<Report> {
    let bs = ctx.bott_samelson()?;
    let l = ctx
        .subset(bs.len())?
        .ok_or_else(|| Error::Parse("--subset is required".into()))?;
    let fv = FlagVariety::new(ctx.alg.clone())?;
    let f = fv.pushforward_eta(&bs, l)?;
    let mut text = ctx.header();
    let _ = writeln!(
        text,
        "push-forward of {} (|W| = {}):",
        eta_label(l),
        fv.group().len()
    );
    text.push_str(&wfunction_text(ctx, &f));
    let _ = writeln!(
        text,
        "integral: {}",
        if f.is_integral() { "yes" } else { "no" }
    );
    let mut status = Status::Ok;
    let mut agreement = Value::Null;
    if check {
        let outcome: Outcome = verify::check_pushforward_at(&fv, &bs, l).into();
        let _ = writeln!(text, "three-way agreement: {outcome}");
        status = outcome_status(&outcome);
        agreement = json!({ "outcome": outcome_tag(&outcome), "detail": outcome.to_string() });
    }
    let json = json!({
        "meta": ctx.meta(),
        "subset": l.0,
        "integral": f.is_integral(),
        "value": wfunction_to_json(&f),
        "agreement": agreement,
    });
    Ok(Report { json, text, status })
}

pub fn gkm(ctx: &Context) -> Result<Report> {
    let path = ctx
        .input
        .as_ref()
        .ok_or_else(|| Error::Parse("--input is required".into()))?;
    let file: SubsetFunctionJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if let Some(seq) = &ctx.seq {
        if *seq != file.seq {
            return Err(Error::Parse(format!(
                "--seq {seq:?} differs from the file's {:?}",
                file.seq
            )));
        }
    }
    let g = file.to_gkm()?;
    for (_, s) in g.iter() {
        if s.nvars() != ctx.alg.nvars() {
            return Err(Error::DimensionMismatch {
                expected: ctx.alg.nvars(),
                got: s.nvars(),
            });
        }
    }
    let bs = BottSamelson::new(ctx.alg.clone(), file.seq.clone())?;
    let mut text = ctx.header();
    match bs.gkm_check(&g)? {
        GkmCheck::Fail(w) => {
            let _ = writeln!(
                text,
                "GKM condition fails: L1 = {:?}, L2 = {:?}, k = {}, obstruction at monomial {:?}",
                w.l1, w.l2, w.k, w.monomial
            );
            let json = json!({
                "meta": ctx.meta(),
                "check": "fail",
                "witness": { "l1": w.l1.0, "l2": w.l2.0, "k": w.k, "monomial": w.monomial },
            });
            Ok(Report {
                json,
                text,
                status: Status::MathFailure,
            })
        }
        GkmCheck::Pass => {
            let eta = bs.gkm_to_eta(&g)?;
            let back = bs.eta_to_gkm(&eta)?;
            let round_trip = back.agrees_with(&g);
            let _ = writeln!(text, "GKM condition holds");
            let _ = writeln!(text, "η-expansion: {}", eta_expansion(ctx, &eta));
            let _ = writeln!(
                text,
                "round trip: {}",
                if round_trip { "exact" } else { "MISMATCH" }
            );
            let json = json!({
                "meta": ctx.meta(),
                "check": "pass",
                "eta": eta_to_json(bs.seq(), &eta),
                "round_trip": round_trip,
            });
            let status = if round_trip {
                Status::Ok
            } else {
                Status::MathFailure
            };
            Ok(Report { json, text, status })
        }
    }
}

pub fn chevalley(ctx: &Context) -> Result<Report> {
    let bs = ctx.bott_samelson()?;
    let fv = FlagVariety::new(ctx.alg.clone())?;
    let mut text = ctx.header();
    let mut checks = Vec::new();
    let mut status = Status::Ok;
    for i in 1..=ctx.alg.nvars() {
        let u = ctx.alg.var(i)?;
        let outcome: Outcome = verify::check_chevalley(&fv, &bs, &u).into();
        let coeffs = fv.chevalley_expand(&bs, &u)?;
        let _ = writeln!(
            text,
            "u = x_{{w{i}}}: c(u) = {}",
            eta_expansion(ctx, &coeffs)
        );
        let _ = writeln!(
            text,
            "  pointwise on W ({} points): {outcome}",
            fv.group().len()
        );
        status = worst(status, outcome_status(&outcome));
        checks.push(json!({
            "u": format!("x_{{w{i}}}"),
            "coefficients": eta_to_json(bs.seq(), &coeffs),
            "outcome": outcome_tag(&outcome),
            "detail": outcome.to_string(),
        }));
    }
    let json = json!({ "meta": ctx.meta(), "checks": checks });
    Ok(Report { json, text, status })
}

fn outcome_tag(o: &Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail(_) => "fail",
        Outcome::Precision(_) => "precision",
    }
}

pub fn verify(ctx: &Context) -> Result<Report> {
    let cfg = SuiteConfig {
        seed: ctx.seed,
        samples: ctx.samples,
        sequences: ctx.seq.clone().map(|s| vec![s]).unwrap_or_default(),
    };
    let results = verify::run_suite(&ctx.alg, &cfg);
    let mut text = ctx.header();
    let _ = writeln!(
        text,
        "seed {}, {} samples per property",
        ctx.seed, ctx.samples
    );
    let mut status = Status::Ok;
    let mut rows = Vec::new();
    let width = results
        .iter()
        .map(|r| r.name.chars().count())
        .max()
        .unwrap_or(0);
    for r in &results {
        let tag = match &r.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail(_) => "FAIL",
            Outcome::Precision(_) => "PREC",
        };
        match &r.outcome {
            Outcome::Pass => {
                let _ = writeln!(text, "{tag}  {}", r.name);
            }
            Outcome::Fail(m) | Outcome::Precision(m) => {
                let _ = writeln!(text, "{tag}  {:width$}  {m}", r.name);
            }
        }
        status = worst(status, outcome_status(&r.outcome));
        rows.push(json!({ "check": r.name, "outcome": outcome_tag(&r.outcome), "detail": r.outcome.to_string() }));
    }
    let passed = results.iter().filter(|r| r.outcome.is_pass()).count();
    let _ = writeln!(text, "{passed}/{} passed", results.len());
    let json =
        json!({ "meta": ctx.meta(), "seed": ctx.seed, "samples": ctx.samples, "results": rows });
    Ok(Report { json, text, status })
}
