//! The TOML cover document.
//!
//! ```toml
//! characteristic = 3
//! genus_base = 1
//! p_rank_base = 0          # optional
//!
//! [group]
//! shape = "cyclic"         # or "elementary", "pgroup"
//! exponent_or_rank = 2
//!
//! [[branch]]
//! label = "P"
//! k = 2
//! jumps = [1, 4]
//!
//! [options]                # optional
//! strict_schmid = false
//! digit_order = "paper"    # or "reversed"
//! ```

use std::fmt;
use std::ops::Range;

use deftan::borne::DigitOrder;
use deftan::filtration::SchmidIssue;
use deftan::{BranchPoint, CoverSpec, Error, GroupShape, LowerFiltration, PrimeChar};
use serde::Deserialize;
use toml::Spanned;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    characteristic: Spanned<i64>,
    group: Spanned<RawGroup>,
    genus_base: Spanned<i64>,
    p_rank_base: Option<Spanned<i64>>,
    #[serde(default)]
    branch: Vec<Spanned<RawBranch>>,
    #[serde(default)]
    options: RawOptions,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    shape: Spanned<String>,
    exponent_or_rank: Spanned<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBranch {
    label: String,
    k: Spanned<i64>,
    jumps: Spanned<Vec<i64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    #[serde(default)]
    strict_schmid: bool,
    digit_order: Option<Spanned<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Options {
    pub strict_schmid: bool,
    pub digit_order: DigitOrder,
}

#[derive(Debug, Clone)]
pub struct CoverDocument {
    pub spec: CoverSpec,
    pub options: Options,
    /// Schmid issues per branch label; fatal only under `strict_schmid`.
    pub schmid: Vec<(String, SchmidIssue)>,
}

impl CoverDocument {
    /// Every branch point satisfies Schmid's congruences.
    pub fn schmid_valid(&self) -> bool {
        self.schmid.is_empty()
    }
}

/// A message with a 1-based source position when one is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn at(text: &str, span: Option<Range<usize>>, message: impl Into<String>) -> Self {
        let (line, column) = match span {
            Some(span) => {
                let (l, c) = position(text, span.start);
                (Some(l), Some(c))
            }
            None => (None, None),
        };
        Diagnostic {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{l}:{c}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

fn small<T: TryFrom<i64>>(text: &str, value: &Spanned<i64>, what: &str) -> Result<T, Diagnostic> {
    T::try_from(*value.get_ref())
        .map_err(|_| Diagnostic::at(text, Some(value.span()), format!("{what} out of range")))
}

/// Parses and validates a document. All errors carry a position.
pub fn parse_document(text: &str) -> Result<CoverDocument, Vec<Diagnostic>> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| vec![Diagnostic::at(text, e.span(), e.message().trim())])?;
    build(text, raw)
}

fn build(text: &str, raw: RawDocument) -> Result<CoverDocument, Vec<Diagnostic>> {
    let mut diags = Vec::new();

    let p_value: u32 = small(text, &raw.characteristic, "characteristic").map_err(|d| vec![d])?;
    let p = PrimeChar::new(p_value)
        .map_err(|e| vec![Diagnostic::at(text, Some(raw.characteristic.span()), e.to_string())])?;

    let group = raw.group.get_ref();
    let exponent: u32 = small(text, &group.exponent_or_rank, "exponent_or_rank").map_err(|d| vec![d])?;
    let shape = match group.shape.get_ref().as_str() {
        "cyclic" => GroupShape::Cyclic(exponent),
        "elementary" => GroupShape::ElementaryAbelian(exponent),
        "pgroup" => GroupShape::GenericPGroup(exponent),
        other => {
            return Err(vec![Diagnostic::at(
                text,
                Some(group.shape.span()),
                format!("unknown group shape {other:?}; expected cyclic, elementary or pgroup"),
            )])
        }
    };

    let digit_order = match &raw.options.digit_order {
        None => DigitOrder::Paper,
        Some(s) => match s.get_ref().as_str() {
            "paper" => DigitOrder::Paper,
            "reversed" => DigitOrder::Reversed,
            other => {
                return Err(vec![Diagnostic::at(
                    text,
                    Some(s.span()),
                    format!("unknown digit_order {other:?}; expected paper or reversed"),
                )])
            }
        },
    };
    let options = Options {
        strict_schmid: raw.options.strict_schmid,
        digit_order,
    };

    let mut branch = Vec::new();
    let mut schmid = Vec::new();
    for entry in &raw.branch {
        let b = entry.get_ref();
        let k: u32 = match small(text, &b.k, "k") {
            Ok(k) => k,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        let report = deftan::filtration::validate_filtration(p, k, b.jumps.get_ref(), true);
        for v in &report.violations {
            diags.push(Diagnostic::at(
                text,
                Some(b.jumps.span()),
                format!("branch point {}: {}", b.label, v),
            ));
        }
        if !report.is_valid() {
            continue;
        }
        for issue in report.schmid.into_iter().filter(|_| shape.is_cyclic()) {
            if options.strict_schmid {
                diags.push(Diagnostic::at(
                    text,
                    Some(b.jumps.span()),
                    format!("branch point {}: {issue}", b.label),
                ));
            }
            schmid.push((b.label.clone(), issue));
        }
        match LowerFiltration::new(p, k, b.jumps.get_ref().clone()) {
            Ok(filt) => branch.push((entry.span(), BranchPoint::new(b.label.clone(), filt))),
            Err(e) => diags.push(Diagnostic::at(text, Some(b.jumps.span()), e.to_string())),
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let gamma_y = raw.p_rank_base.as_ref().map(|g| *g.get_ref());
    let spans: Vec<Range<usize>> = branch.iter().map(|(s, _)| s.clone()).collect();
    let labels: Vec<String> = branch.iter().map(|(_, b)| b.label.clone()).collect();
    let spec = CoverSpec::new(p, shape, *raw.genus_base.get_ref(), gamma_y, branch.into_iter().map(|(_, b)| b).collect())
        .map_err(|e| vec![spec_error(text, &raw, &spans, &labels, e)])?;
    if let Err(e) = spec.genus_top() {
        return Err(vec![Diagnostic::at(text, Some(raw.genus_base.span()), e.to_string())]);
    }
    Ok(CoverDocument { spec, options, schmid })
}

/// Attaches the most specific position available to a spec-level error.
fn spec_error(text: &str, raw: &RawDocument, spans: &[Range<usize>], labels: &[String], e: Error) -> Diagnostic {
    let message = e.to_string();
    let span = labels
        .iter()
        .position(|l| message.contains(&format!("{l:?}")) || message.contains(&format!("point {l}:")))
        .map(|i| spans[i].clone())
        .or_else(|| match e {
            Error::InvalidSpec(ref m) if m.contains("p-rank") => raw.p_rank_base.as_ref().map(|g| g.span()),
            Error::InvalidSpec(ref m) if m.contains("genus") => Some(raw.genus_base.span()),
            _ => Some(raw.group.span()),
        });
    Diagnostic::at(text, span, message)
}
