//! Artifact formatting: key=value reports, plot data and the run sidecar.

use std::fmt::Write as _;
use std::path::Path;

use tscale_core::SolutionTrace;

use crate::error::CliError;

/// Ordered `key=value` lines.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn set(&mut self, key: impl Into<String>, value: impl ReportValue) -> &mut Self {
        self.lines.push((key.into(), value.render()));
        self
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

pub trait ReportValue {
    fn render(&self) -> String;
}

impl ReportValue for f64 {
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

impl ReportValue for usize {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ReportValue for u64 {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ReportValue for bool {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ReportValue for &str {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl ReportValue for String {
    fn render(&self) -> String {
        self.clone()
    }
}

impl ReportValue for Option<f64> {
    fn render(&self) -> String {
        self.map_or_else(|| "none".into(), |v| format!("{v:?}"))
    }
}

impl ReportValue for &[f64] {
    fn render(&self) -> String {
        self.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
    }
}

/// Gnuplot-ready columns `t v1 ... vd` with a comment header naming the
/// window and the residual.
pub fn emit_plot_data(trace: &SolutionTrace) -> String {
    let w = &trace.window;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# window a={:?} end={:?} b_star={:?} sigma_b_star={:?} guard_ok={}",
        w.a, w.end, w.b_star, w.sigma_b_star, w.guard_ok
    );
    let _ = writeln!(out, "# residual={:?}", trace.residual);
    let _ = write!(out, "# t");
    for k in 1..=trace.u.dim() {
        let _ = write!(out, " v{k}");
    }
    out.push('\n');
    for (t, row) in trace.u.rows() {
        let _ = write!(out, "{t:?}");
        for v in row {
            let _ = write!(out, " {v:?}");
        }
        out.push('\n');
    }
    out
}

/// Window and residual lines shared by the trace-producing commands.
pub fn trace_report(report: &mut Report, trace: &SolutionTrace) {
    let w = &trace.window;
    report
        .set("window_a", w.a)
        .set("window_c", w.c)
        .set("b_star", w.b_star)
        .set("sigma_b_star", w.sigma_b_star)
        .set("guard_ok", w.guard_ok)
        .set("attained", w.attained)
        .set("window_end", w.end)
        .set("nodes", trace.u.len())
        .set("residual", trace.residual)
        .set("ball_exit", trace.ball_exit);
    for (k, warning) in trace.warnings.iter().enumerate() {
        report.set(format!("warning_{}", k + 1), warning.clone());
    }
}

pub fn write_all(dir: &Path, files: &[(String, String)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Validation(format!("cannot create {}: {e}", dir.display())))?;
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
