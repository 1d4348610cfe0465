//! Runs every applicable route on a document and cross-checks them.

use std::fmt::Write as _;

use clap::ValueEnum;
use deftan::borne::{self, BorneReport, DigitOrder};
use deftan::prank::{self, PrankReport};
use deftan::{weakly, CoverSpec, GroupShape};

use crate::document::CoverDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Weak,
    Cyclic,
    Prank,
    Borne,
    All,
}

impl Method {
    fn includes(self, other: Method) -> bool {
        self == Method::All || self == other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Agree,
    Disagree,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Agree => "agree",
            Status::Disagree => "disagree",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crosscheck {
    pub name: String,
    pub status: Status,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
    /// The two formulas being compared.
    pub refs: [&'static str; 2],
    pub mandatory: bool,
    pub note: String,
}

impl Crosscheck {
    fn compare(name: impl Into<String>, refs: [&'static str; 2], mandatory: bool, lhs: i64, rhs: i64) -> Self {
        Crosscheck {
            name: name.into(),
            status: if lhs == rhs { Status::Agree } else { Status::Disagree },
            lhs: Some(lhs),
            rhs: Some(rhs),
            refs,
            mandatory,
            note: String::new(),
        }
    }

    fn skipped(name: impl Into<String>, refs: [&'static str; 2], mandatory: bool, why: impl Into<String>) -> Self {
        Crosscheck {
            name: name.into(),
            status: Status::Skipped,
            lhs: None,
            rhs: None,
            refs,
            mandatory,
            note: why.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.mandatory && self.status == Status::Disagree
    }
}

/// Outcome of one route: a value, or the reason it was not run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Computed(T),
    Skipped(String),
    NotRequested,
}

impl<T> Outcome<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Outcome::Computed(v) => Some(v),
            _ => None,
        }
    }

    fn label(&self) -> (&'static str, &str) {
        match self {
            Outcome::Computed(_) => ("computed", ""),
            Outcome::Skipped(why) => ("skipped", why),
            Outcome::NotRequested => ("not_requested", ""),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derived {
    pub g_top: i64,
    pub prank_top: Option<i64>,
    pub deg_ramification_divisor: i64,
    pub deg_dstar: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakResult {
    pub closed_form: i64,
    pub h1_total: i64,
    pub projective: i64,
    pub h0_total: i64,
    /// Assembly from the bar resolution, when within the work limit.
    pub computed: Option<weakly::WeakAssembly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrankResult {
    pub report: PrankReport,
    /// `|G|(g_Y - gamma_Y) + |G| sum (e_nu - 1)/e_0 - r` as printed.
    pub nilpotent_display: String,
    /// `dim_h1_weak - B`, when the weak route applies.
    pub implied_nilpotent_covariants: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricExample {
    pub label: String,
    pub a0: i64,
    pub k: u32,
    pub direct: i64,
    pub closed_form: i64,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub doc: CoverDocument,
    pub method: Method,
    pub derived: Derived,
    pub weak: Outcome<WeakResult>,
    pub cyclic: Outcome<i64>,
    pub prank: Outcome<PrankResult>,
    pub borne: Outcome<BorneReport>,
    pub examples: Vec<GeometricExample>,
    pub crosschecks: Vec<Crosscheck>,
    pub warnings: Vec<String>,
}

const WEAK_FORMULA: &str = "3g_Y - 3 + r + sum log_p|G(P)|";
const CYCLIC_FORMULA: &str = "3(g_Y - 1) + 2r + sum (2f(P) + Delta^k(-2N_P - 2))";
const DEG_D1_FORMULA: &str = "deg D(1) + 1 - g_Y";
const SUM_M: &str = "sum_j m_j";

impl Report {
    /// A mandatory identity failed.
    pub fn has_failure(&self) -> bool {
        self.crosschecks.iter().any(Crosscheck::failed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.has_failure() {
            2
        } else {
            0
        }
    }
}

fn weak_route(spec: &CoverSpec, work_limit: u64) -> Outcome<WeakResult> {
    if let Some(b) = spec.branch().iter().find(|b| !b.filt.is_weak()) {
        return Outcome::Skipped(format!("branch point {} is not weakly ramified", b.label));
    }
    let closed_form = match weakly::dim_h1_weak(spec) {
        Ok(v) => v,
        Err(e) => return Outcome::Skipped(e.to_string()),
    };
    let lemma = match weakly::weak_assembly(spec, |t| Ok((1, t as i64 - 1))) {
        Ok(a) => a,
        Err(e) => return Outcome::Skipped(e.to_string()),
    };
    Outcome::Computed(WeakResult {
        closed_form,
        h1_total: lemma.h1_total,
        projective: lemma.projective,
        h0_total: lemma.h0_total,
        computed: weakly::weak_assembly_computed(spec, work_limit).ok(),
    })
}

fn cyclic_route(spec: &CoverSpec) -> Outcome<i64> {
    if !spec.group().is_cyclic() {
        return Outcome::Skipped("group is not cyclic".into());
    }
    if let Err(e) = spec.require_genus_at_least_two() {
        return Outcome::Skipped(e.to_string());
    }
    match borne::dim_h1_cyclic_closed_form(spec) {
        Ok(v) => Outcome::Computed(v),
        Err(e) => Outcome::Skipped(e.to_string()),
    }
}

fn borne_route(spec: &CoverSpec, order: DigitOrder) -> Outcome<BorneReport> {
    if !spec.group().is_cyclic() {
        return Outcome::Skipped("group is not cyclic".into());
    }
    match borne::borne_multiplicities_with(spec, order) {
        Ok(r) => Outcome::Computed(r),
        Err(e) => Outcome::Skipped(e.to_string()),
    }
}

fn prank_route(spec: &CoverSpec, weak: Option<&WeakResult>) -> Outcome<PrankResult> {
    match PrankReport::new(spec) {
        Ok(report) => {
            let display = prank::nilpotent_display(spec).map(|r| r.to_string()).unwrap_or_default();
            Outcome::Computed(PrankResult {
                implied_nilpotent_covariants: weak.map(|w| w.closed_form - report.b),
                report,
                nilpotent_display: display,
            })
        }
        Err(e) => Outcome::Skipped(e.to_string()),
    }
}

/// Builds the full report. Every computation is deterministic.
pub fn build_report(doc: &CoverDocument, method: Method, work_limit: u64) -> Report {
    let spec = &doc.spec;
    let p = spec.p().as_i64();
    let mut warnings = Vec::new();
    if p == 3 {
        warnings.push("p = 3 is admitted here although the formulas are stated for p > 3".to_string());
    }
    if doc.options.digit_order == DigitOrder::Reversed {
        warnings.push("digit order is reversed; Borne multiplicities use the mutant schedule".to_string());
    }
    for (label, issue) in &doc.schmid {
        warnings.push(format!("branch point {label}: {issue}"));
    }

    let derived = Derived {
        g_top: spec.genus_top().expect("validated document has a genus"),
        prank_top: spec.prank_top().ok(),
        deg_ramification_divisor: spec.ramification_degree(),
        deg_dstar: spec.dstar_degree().ok(),
    };

    let weak = if method.includes(Method::Weak) { weak_route(spec, work_limit) } else { Outcome::NotRequested };
    let cyclic = if method.includes(Method::Cyclic) { cyclic_route(spec) } else { Outcome::NotRequested };
    let borne = if method.includes(Method::Borne) {
        borne_route(spec, doc.options.digit_order)
    } else {
        Outcome::NotRequested
    };
    let prank = if method.includes(Method::Prank) {
        prank_route(spec, weak.value())
    } else {
        Outcome::NotRequested
    };

    let mut checks = Vec::new();

    // (a) three routes to the covariant dimension
    let a_refs1 = [SUM_M, DEG_D1_FORMULA];
    let a_refs2 = [DEG_D1_FORMULA, CYCLIC_FORMULA];
    match (borne.value(), cyclic.value()) {
        (Some(b), Some(&c)) => {
            let deg_route = b.deg_d1 + 1 - spec.g_y();
            checks.push(Crosscheck::compare("dim_sum_m_vs_deg_d1", a_refs1, true, b.sum_m(), deg_route));
            checks.push(Crosscheck::compare("dim_deg_d1_vs_closed_form", a_refs2, true, deg_route, c));
        }
        _ => {
            checks.push(Crosscheck::skipped("dim_sum_m_vs_deg_d1", a_refs1, true, "needs the borne and cyclic routes"));
            checks.push(Crosscheck::skipped("dim_deg_d1_vs_closed_form", a_refs2, true, "needs the borne and cyclic routes"));
        }
    }

    // (b) module dimension and non-negativity
    let b_refs = ["sum_j j * m_j", "3g_X - 3"];
    let nn_refs = ["min_j m_j", "0"];
    match borne.value() {
        Some(b) => {
            checks.push(Crosscheck::compare("conservation", b_refs, true, b.sum_jm(), 3 * derived.g_top - 3));
            let min = b.min_m();
            let mut c = Crosscheck::compare("non_negativity", nn_refs, doc.schmid_valid(), min, 0);
            c.status = if min >= 0 { Status::Agree } else { Status::Disagree };
            if !doc.schmid_valid() {
                c.note = "jumps violate Schmid's congruences; negative multiplicities are possible".into();
            }
            checks.push(c);
        }
        None => {
            checks.push(Crosscheck::skipped("conservation", b_refs, true, "borne route not run"));
            checks.push(Crosscheck::skipped("non_negativity", nn_refs, doc.schmid_valid(), "borne route not run"));
        }
    }

    let t_refs = ["per-level Riemann-Hurwitz up the tower", "Riemann-Hurwitz for X -> Y"];
    if spec.group().is_cyclic() {
        match spec.genus_top_telescoping() {
            Ok(g) => checks.push(Crosscheck::compare("telescoping_genus", t_refs, true, g, derived.g_top)),
            Err(e) => checks.push(Crosscheck::skipped("telescoping_genus", t_refs, true, e.to_string())),
        }
    } else {
        checks.push(Crosscheck::skipped("telescoping_genus", t_refs, true, "group is not cyclic"));
    }

    // (c) the weakly ramified closed form against the cyclic one and
    // against homology computed from the bar resolution
    let c_refs = [WEAK_FORMULA, CYCLIC_FORMULA];
    match (weak.value(), cyclic.value()) {
        (Some(w), Some(&c)) => {
            let mut check = Crosscheck::compare("weak_vs_cyclic", c_refs, false, w.closed_form, c);
            if check.status == Status::Disagree {
                let gap = c - w.closed_form;
                let r = spec.r();
                check.note = format!("gap {gap} over {r} branch points");
                warnings.push(format!(
                    "weak and cyclic closed forms differ by {gap} at p = {p} ({} per branch point)",
                    if r > 0 && gap % r == 0 { (gap / r).to_string() } else { format!("{gap}/{r}") }
                ));
            }
            checks.push(check);
        }
        _ => checks.push(Crosscheck::skipped("weak_vs_cyclic", c_refs, false, "needs the weak and cyclic routes")),
    }
    let h_refs = [WEAK_FORMULA, "H_1 + projective - H_0 with bar-resolution homology"];
    match weak.value() {
        Some(WeakResult { closed_form, computed: Some(a), .. }) => {
            let check = Crosscheck::compare("weak_closed_form_vs_homology", h_refs, false, *closed_form, a.value());
            if check.status == Status::Disagree {
                warnings.push(format!(
                    "bar-resolution H_1 totals {} where the closed form assumes {}",
                    a.h1_total,
                    weak.value().map_or(0, |w| w.h1_total)
                ));
            }
            checks.push(check);
        }
        Some(_) => checks.push(Crosscheck::skipped(
            "weak_closed_form_vs_homology",
            h_refs,
            false,
            format!("some |G(P)| exceeds the work limit {work_limit}"),
        )),
        None => checks.push(Crosscheck::skipped("weak_closed_form_vs_homology", h_refs, false, "weak route not run")),
    }

    // (d) the semisimple part two ways
    let d_refs = ["|G| * B", "gamma_X + deg D*_red - 1"];
    match prank.value() {
        Some(pr) => checks.push(Crosscheck::compare(
            "semisimple_two_routes",
            d_refs,
            true,
            pr.report.semisimple_dim,
            pr.report.subrao_dim,
        )),
        None => checks.push(Crosscheck::skipped("semisimple_two_routes", d_refs, true, "prank route not run")),
    }

    // (e) geometric upper jumps
    let e_refs = ["f(P) + Delta^k(-2N_P - 2)", "a_0(p^k - 1) + floor(-2a_0(p^2k - 1)/(p^(k+1)(p+1)) - 2/p^k)"];
    let mut examples = Vec::new();
    if spec.group().is_cyclic() && method.includes(Method::Cyclic) {
        for b in spec.branch() {
            let Ok(upper) = b.filt.upper_jumps() else { continue };
            let geometric = upper.sigma.windows(2).all(|w| w[1] == p * w[0]);
            if !geometric {
                continue;
            }
            let Ok(ex) = borne::example_geometric_jumps(upper.sigma[0], b.k(), spec.p()) else { continue };
            let mut check = Crosscheck::compare(format!("geometric_jumps_example.{}", b.label), e_refs, false, ex.direct, ex.paper_closed_form);
            if check.status == Status::Disagree {
                check.note = format!("jumps {}", join(&ex.jumps));
                warnings.push(format!(
                    "closed form for geometric upper jumps gives {} at {}, direct evaluation gives {}",
                    ex.paper_closed_form, b.label, ex.direct
                ));
            }
            checks.push(check);
            examples.push(GeometricExample {
                label: b.label.clone(),
                a0: upper.sigma[0],
                k: b.k(),
                direct: ex.direct,
                closed_form: ex.paper_closed_form,
            });
        }
    }
    if examples.is_empty() {
        checks.push(Crosscheck::skipped("geometric_jumps_example", e_refs, false, "no branch point with geometric upper jumps"));
    }

    Report {
        doc: doc.clone(),
        method,
        derived,
        weak,
        cyclic,
        prank,
        borne,
        examples,
        crosschecks: checks,
        warnings,
    }
}

pub fn join(values: &[i64]) -> String {
    values.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn opt(v: Option<i64>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

fn shape_name(g: GroupShape) -> &'static str {
    g.name()
}

/// Flat `key=value` lines in a fixed order.
pub fn machine_output(r: &Report) -> String {
    let spec = &r.doc.spec;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k}={v}");
    };
    kv("characteristic", spec.p().to_string());
    kv("group.shape", shape_name(spec.group()).to_string());
    kv("group.exponent_or_rank", spec.group().log_order().to_string());
    kv("genus_base", spec.g_y().to_string());
    kv("p_rank_base", opt(spec.gamma_y()));
    kv("branch.count", spec.branch().len().to_string());
    for (i, b) in spec.branch().iter().enumerate() {
        kv(&format!("branch.{i}.label"), b.label.clone());
        kv(&format!("branch.{i}.k"), b.k().to_string());
        kv(&format!("branch.{i}.jumps"), join(b.filt.jumps()));
    }
    kv("options.strict_schmid", r.doc.options.strict_schmid.to_string());
    kv("options.digit_order", r.doc.options.digit_order.name().to_string());
    kv("method", format!("{:?}", r.method).to_lowercase());

    kv("derived.g_top", r.derived.g_top.to_string());
    kv("derived.prank_top", opt(r.derived.prank_top));
    kv("derived.deg_ramification_divisor", r.derived.deg_ramification_divisor.to_string());
    kv("derived.deg_dstar", opt(r.derived.deg_dstar));

    let (status, why) = r.weak.label();
    kv("weak.status", status.to_string());
    kv("weak.reason", why.to_string());
    if let Some(w) = r.weak.value() {
        kv("weak", w.closed_form.to_string());
        kv("weak.h1_total", w.h1_total.to_string());
        kv("weak.projective", w.projective.to_string());
        kv("weak.h0_total", w.h0_total.to_string());
        kv("weak.computed_h1_total", opt(w.computed.map(|a| a.h1_total)));
        kv("weak.computed_h0_total", opt(w.computed.map(|a| a.h0_total)));
        kv("weak.computed_assembly", opt(w.computed.map(|a| a.value())));
    }

    let (status, why) = r.cyclic.label();
    kv("cyclic.status", status.to_string());
    kv("cyclic.reason", why.to_string());
    if let Some(c) = r.cyclic.value() {
        kv("cyclic", c.to_string());
    }

    let (status, why) = r.prank.label();
    kv("prank.status", status.to_string());
    kv("prank.reason", why.to_string());
    if let Some(pr) = r.prank.value() {
        kv("prank.B", pr.report.b.to_string());
        kv("prank.semisimple_dim", pr.report.semisimple_dim.to_string());
        kv("prank.nilpotent_dim", pr.report.nilpotent_dim.to_string());
        kv("prank.nilpotent_display", pr.nilpotent_display.clone());
        kv("prank.gamma_x", pr.report.gamma_x.to_string());
        kv("prank.deg_dred", pr.report.deg_dred.to_string());
        kv("prank.formula", format!("{} + n", pr.report.b));
        kv("prank.implied_nilpotent_covariants", opt(pr.implied_nilpotent_covariants));
    }

    let (status, why) = r.borne.label();
    kv("borne.status", status.to_string());
    kv("borne.reason", why.to_string());
    if let Some(b) = r.borne.value() {
        kv("borne.m", join(&b.m));
        kv("borne.deg_d", join(&b.deg_d));
        kv("borne.sum_m", b.sum_m().to_string());
        kv("borne.sum_jm", b.sum_jm().to_string());
    }

    for c in &r.crosschecks {
        let base = format!("crosscheck.{}", c.name);
        kv(&format!("{base}.status"), c.status.as_str().to_string());
        kv(&format!("{base}.lhs"), opt(c.lhs));
        kv(&format!("{base}.rhs"), opt(c.rhs));
        kv(&format!("{base}.paper_refs"), format!("{} | {}", c.refs[0], c.refs[1]));
        kv(&format!("{base}.mandatory"), c.mandatory.to_string());
        kv(&format!("{base}.note"), c.note.clone());
    }
    kv("warning.count", r.warnings.len().to_string());
    for (i, w) in r.warnings.iter().enumerate() {
        kv(&format!("warning.{i}"), w.clone());
    }
    kv("exit_code", r.exit_code().to_string());
    out
}

pub fn human_output(r: &Report) -> String {
    let spec = &r.doc.spec;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "cover: p = {}, G = {} {}, g_Y = {}, p-rank(Y) = {}, {} branch point(s)",
        spec.p(),
        shape_name(spec.group()),
        spec.group().log_order(),
        spec.g_y(),
        opt(spec.gamma_y()),
        spec.r()
    );
    for b in spec.branch() {
        let _ = writeln!(out, "  {}: |G(P)| = {}^{}, lower jumps {}", b.label, spec.p(), b.k(), join(b.filt.jumps()));
    }
    let _ = writeln!(
        out,
        "g_X = {}, p-rank(X) = {}, deg R = {}, deg D* = {}",
        r.derived.g_top,
        opt(r.derived.prank_top),
        r.derived.deg_ramification_divisor,
        opt(r.derived.deg_dstar)
    );
    let _ = writeln!(out);
    let line = |out: &mut String, name: &str, outcome: (&str, &str), value: Option<String>| {
        let _ = match value {
            Some(v) => writeln!(out, "{name:<8} {v}"),
            None if outcome.0 == "skipped" => writeln!(out, "{name:<8} skipped ({})", outcome.1),
            None => writeln!(out, "{name:<8} not requested"),
        };
    };
    line(
        &mut out,
        "weak",
        r.weak.label(),
        r.weak.value().map(|w| {
            let computed = w
                .computed
                .map_or(String::new(), |a| format!("; bar resolution {} + {} - {} = {}", a.h1_total, a.projective, a.h0_total, a.value()));
            format!("dim H^1 = {} ({} + {} - {}{computed})", w.closed_form, w.h1_total, w.projective, w.h0_total)
        }),
    );
    line(&mut out, "cyclic", r.cyclic.label(), r.cyclic.value().map(|c| format!("dim H^1 = {c}")));
    line(
        &mut out,
        "prank",
        r.prank.label(),
        r.prank.value().map(|pr| {
            format!(
                "B = {}, semisimple {}, nilpotent {}, dim H^1 = {} + n",
                pr.report.b, pr.report.semisimple_dim, pr.report.nilpotent_dim, pr.report.b
            )
        }),
    );
    line(
        &mut out,
        "borne",
        r.borne.label(),
        r.borne.value().map(|b| format!("m = ({}), sum m = {}, sum j*m = {}", join(&b.m), b.sum_m(), b.sum_jm())),
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "crosschecks:");
    for c in &r.crosschecks {
        let values = match (c.lhs, c.rhs) {
            (Some(l), Some(rh)) => format!("{l} vs {rh}"),
            _ => c.note.clone(),
        };
        let tag = if c.mandatory { "" } else { " (informational)" };
        let _ = writeln!(out, "  {:<9} {}{tag}: {values}", c.status.as_str(), c.name);
        let _ = writeln!(out, "            {} | {}", c.refs[0], c.refs[1]);
    }
    if !r.warnings.is_empty() {
        let _ = writeln!(out);
        for w in &r.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
    }
    out
}
