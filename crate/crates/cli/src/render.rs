use std::env;
use std::fmt::Write as _;
use std::io::IsTerminal;

use chowfiber::chow::ChowReport;
use chowfiber::model::{Diagnostic, Severity};

/// Terminal styling, controlled by `CHOWFIBER_COLOR` (auto, never, always).
#[derive(Clone, Copy, Debug)]
pub struct Style {
    color: bool,
}

impl Style {
    pub fn from_env() -> Self {
        let color = match env::var("CHOWFIBER_COLOR").as_deref() {
            Ok("always") => true,
            Ok("never") => false,
            _ => std::io::stdout().is_terminal(),
        };
        Style { color }
    }

    fn paint(&self, text: &str, code: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    pub fn diagnostic(&self, d: &Diagnostic) -> String {
        let line = d.to_string();
        match d.severity {
            Severity::Error => self.paint(&line, "31"),
            Severity::Warning => self.paint(&line, "33"),
        }
    }
}

/// One-line summary shared by the human output and the JSON round-trip tests.
pub fn summary_line(r: &ChowReport) -> String {
    let b0 = r
        .b0
        .as_ref()
        .map_or_else(|| "undefined".to_string(), ToString::to_string);
    let index = r
        .index
        .as_ref()
        .map_or_else(|| "undefined".to_string(), ToString::to_string);
    let mut line = format!("B(X) = {}, B(X)_0 = {b0}, index = {index}", r.b);
    if r.special_case.is_some() {
        line.push_str(", special case: irreducible fiber");
    }
    if r.formal_only {
        line.push_str(" (formal cokernel only)");
    }
    line
}

pub fn report_human(r: &ChowReport, style: Style) -> String {
    let mut s = String::new();
    let undefined = || "undefined".to_string();
    let _ = writeln!(s, "{}", summary_line(r));
    let _ = writeln!(s);
    let _ = writeln!(s, "  model             {}", r.name);
    let _ = writeln!(s, "  B(X)              {}", r.b);
    let _ = writeln!(
        s,
        "  B(X)_0            {}",
        r.b0.as_ref().map_or_else(undefined, ToString::to_string)
    );
    let _ = writeln!(
        s,
        "  index             {}",
        r.index.as_ref().map_or_else(undefined, ToString::to_string)
    );
    let xi: Vec<String> = r.xi_on_generators.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        s,
        "  xi on generators  {}",
        if r.formal_only {
            undefined()
        } else {
            format!("({})", xi.join(", "))
        }
    );
    let _ = writeln!(
        s,
        "  special case      {}",
        r.special_case.map_or("none", |c| c.as_str())
    );
    let _ = writeln!(
        s,
        "  hypotheses        reduced_components_smooth={} pic_unramified_descent={}",
        r.hypotheses.reduced_components_smooth, r.hypotheses.pic_unramified_descent
    );
    if r.formal_only {
        let _ = writeln!(
            s,
            "  interpretation    formal cokernel only: the model fails validation, so B(X) is not identified with A0(X_K)"
        );
    } else {
        let _ = writeln!(
            s,
            "  interpretation    A0(X_K) = B(X) and A0(X_K)_0 = B(X)_0, conditional on the hypotheses above"
        );
    }
    if let Some(e) = &r.expected {
        let torsion: Vec<String> = e.b0_torsion.iter().map(ToString::to_string).collect();
        let status = match r.matches_expected() {
            Some(true) => "matches",
            Some(false) => "differs",
            None => "not compared",
        };
        let _ = writeln!(
            s,
            "  expected B(X)_0   rank {}, torsion [{}] ({status}; {})",
            e.b0_rank,
            torsion.join(", "),
            e.source
        );
    }
    if r.diagnostics.is_empty() {
        let _ = writeln!(s, "  diagnostics       (none)");
    } else {
        let _ = writeln!(s, "  diagnostics");
        for d in &r.diagnostics {
            let _ = writeln!(s, "    {}", style.diagnostic(d));
        }
    }
    s
}

pub fn report_json(r: &ChowReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports always serialize");
    s.push('\n');
    s
}
