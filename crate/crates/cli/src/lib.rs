//! Command-line front end: parses arguments, runs the selected checks and
//! writes JSON, text or CSV reports.

pub mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ewlimit_core::limit::{
    decoupling_check, field_equation, frozen_lagrangian, log_spaced, mass_invariance_check, scaling_sweep, scaling_verdict,
};
use ewlimit_core::matrix::{verify_commutators, verify_group};
use ewlimit_core::model::{
    check_su2_invariance, check_u1_invariance, extract_masses, verify_grading, verify_matter_radial, verify_radial_split,
    verify_trace_identity, ModelConfig,
};
use ewlimit_core::algebra::Field;
use ewlimit_core::{DecisionPath, VerificationReport};
use serde::Serialize;
use serde_json::json;

pub use config::{load_config, ConfigError, Settings};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ewlimit", version, about = "Checks the contracted SU(2;j)xU(1) electroweak model")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Contraction parameter: 1, iota or a small number.
    #[arg(long = "j", global = true, value_name = "1|iota|FLOAT")]
    pub j: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub g: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gp: Option<String>,
    #[arg(long = "R", global = true, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Force exact (true) or floating (false) coupling arithmetic.
    #[arg(long, global = true)]
    pub exact: Option<bool>,
    /// JSON file with keys g, gp, R, jmode, seed, samples, exact.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Keep wall-clock durations in the reports.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Mass spectrum at the configured couplings.
    Masses,
    /// Suppression of the fiber and quartic parts as j decreases.
    Sweep {
        /// Largest j of the sweep.
        #[arg(long, default_value_t = 1e-1)]
        j_max: f64,
        /// Smallest j of the sweep.
        #[arg(long, default_value_t = 1e-3)]
        j_min: f64,
        /// Number of log-spaced points.
        #[arg(long, default_value_t = 9)]
        points: usize,
    },
    /// Field equations of Z, Aem and W+ at rho = R, with the decoupling check.
    Eom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Group,
    Lagrangian,
    Gauge,
    Trace,
    Limit,
    All,
}

type Check = Box<dyn FnOnce() -> Vec<VerificationReport> + Send>;

fn suite_checks(suite: Suite, cfg: &ModelConfig) -> Vec<Check> {
    let mode = cfg.jmode;
    let (n, seed) = (cfg.samples, cfg.seed);
    let c = cfg.clone();
    let mut out: Vec<Check> = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Group {
        out.push(Box::new(move || vec![verify_commutators(mode), verify_group(mode, n, seed)]));
    }
    if all || suite == Suite::Lagrangian {
        let c = c.clone();
        out.push(Box::new(move || vec![verify_grading(&c), verify_matter_radial(&c)]));
    }
    if all || suite == Suite::Gauge {
        let c = c.clone();
        out.push(Box::new(move || vec![check_u1_invariance(&c), check_su2_invariance(mode)]));
    }
    if all || suite == Suite::Trace {
        out.push(Box::new(move || vec![verify_trace_identity(mode, n, seed), verify_radial_split(mode, n, seed)]));
    }
    if all || suite == Suite::Limit {
        let c = c.clone();
        out.push(Box::new(move || vec![decoupling_check(&c), mass_invariance_check(&c)]));
    }
    out
}

/// Runs the checks on separate threads and returns the reports in declared order.
fn run_checks(checks: Vec<Check>) -> Vec<VerificationReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = checks.into_iter().map(|c| s.spawn(c)).collect();
        handles.into_iter().flat_map(|h| h.join().expect("check thread panicked")).collect()
    })
}

#[derive(Debug, Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    status: &'static str,
}

fn summary(reports: &[VerificationReport]) -> Summary {
    let passed = reports.iter().filter(|r| r.passed()).count();
    Summary {
        total: reports.len(),
        passed,
        failed: reports.len() - passed,
        status: if passed == reports.len() { "pass" } else { "fail" },
    }
}

fn text_line(r: &VerificationReport) -> String {
    let mut line = format!(
        "{} {} [{}] {} max_abs_error={:e}",
        if r.passed() { "PASS" } else { "FAIL" },
        r.check_name,
        r.mode,
        match r.decision_path {
            DecisionPath::ExactSymbolic => "exact-symbolic",
            DecisionPath::NumericOracle => "numeric-oracle",
        },
        r.max_abs_error
    );
    if let Some(ms) = r.duration_ms {
        line.push_str(&format!(" {ms}ms"));
    }
    if let Some(w) = &r.witness {
        line.push_str(&format!("\n    witness: {w}"));
    }
    line
}

fn render_reports(reports: &[VerificationReport], format: Format) -> Result<String, String> {
    let s = summary(reports);
    match format {
        Format::Json => Ok(to_json(&json!({ "reports": reports, "summary": s }))),
        Format::Text => {
            let mut out: String = reports.iter().map(|r| text_line(r) + "\n").collect();
            out.push_str(&format!("{} of {} checks passed\n", s.passed, s.total));
            Ok(out)
        }
        Format::Csv => Err("--format csv is only available for the sweep command".into()),
    }
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report serialization") + "\n"
}

struct Output {
    text: String,
    ok: bool,
}

fn execute(cli: &Cli, cfg: &ModelConfig) -> Result<Output, String> {
    let strip = |mut r: Vec<VerificationReport>| {
        if !cli.common.timings {
            r = r.into_iter().map(VerificationReport::without_timing).collect();
        }
        r
    };
    match &cli.command {
        Command::Verify { suite } => {
            let reports = strip(run_checks(suite_checks(*suite, cfg)));
            let ok = reports.iter().all(|r| r.passed());
            Ok(Output { text: render_reports(&reports, cli.common.format)?, ok })
        }
        Command::Masses => {
            let m = extract_masses(cfg).map_err(|e| e.to_string())?;
            let text = match cli.common.format {
                Format::Json => to_json(&json!({ "mode": cfg.jmode.label(), "config": cfg.label(), "spectrum": m })),
                Format::Text => {
                    let mut t = format!(
                        "m_W = {}\nm_Z = {}\nm_A = {}\ne = {}\ncos_theta_W = {}\n",
                        m.m_w, m.m_z, m.m_a, m.e_charge, m.cos_theta_w
                    );
                    if let Some(x) = &m.exact {
                        t.push_str(&format!(
                            "exact: m_W = {}, m_Z = {}, m_A = {}, e = {}, cos_theta_W = {}\n",
                            x.m_w, x.m_z, x.m_a, x.e_charge, x.cos_theta_w
                        ));
                    }
                    t
                }
                Format::Csv => return Err("--format csv is only available for the sweep command".into()),
            };
            Ok(Output { text, ok: true })
        }
        Command::Sweep { j_max, j_min, points } => {
            let js = log_spaced(*j_max, *j_min, *points);
            let report = scaling_sweep(&js, cfg.samples, cfg, cfg.seed).map_err(|e| e.to_string())?;
            let check = strip(vec![scaling_verdict(&report)]);
            let ok = check[0].passed();
            let text = match cli.common.format {
                Format::Csv => report.to_csv(),
                Format::Json => to_json(&json!({ "sweep": report, "reports": check, "summary": summary(&check) })),
                Format::Text => format!(
                    "{}slope_f = {:.6}\nslope_h = {:.6}\nR^2 = {:.9}\n{}\n",
                    report.to_csv(),
                    report.slope_f,
                    report.slope_h,
                    report.fit_r2,
                    text_line(&check[0])
                ),
            };
            Ok(Output { text, ok })
        }
        Command::Eom => {
            let l = frozen_lagrangian(cfg).map_err(|e| e.to_string())?;
            let mut eqs = serde_json::Map::new();
            for f in [Field::Z, Field::Aem, Field::WPlus] {
                let e = field_equation(&l, f, cfg.jmode).map_err(|e| e.to_string())?;
                eqs.insert(f.name().to_string(), e.to_string().into());
            }
            let check = strip(vec![decoupling_check(cfg)]);
            let ok = check[0].passed();
            let text = match cli.common.format {
                Format::Json => {
                    to_json(&json!({ "mode": cfg.jmode.label(), "equations": eqs, "reports": check, "summary": summary(&check) }))
                }
                Format::Text => {
                    let mut t: String = eqs.iter().map(|(k, v)| format!("{k}: {} = 0\n", v.as_str().unwrap_or(""))).collect();
                    t.push_str(&text_line(&check[0]));
                    t.push('\n');
                    t
                }
                Format::Csv => return Err("--format csv is only available for the sweep command".into()),
            };
            Ok(Output { text, ok })
        }
    }
}

fn settings(common: &Common) -> Result<ModelConfig, ConfigError> {
    let base = match &common.config {
        Some(p) => config::load_settings(p)?,
        None => Settings::default(),
    };
    let flags = Settings {
        g: common.g.clone(),
        gp: common.gp.clone(),
        r: common.r.clone(),
        jmode: common.j.clone(),
        seed: common.seed,
        samples: common.samples,
        exact: common.exact,
    };
    base.merge(flags).resolve()
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let cfg = match settings(&cli.common) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let out = match execute(&cli, &cfg) {
        Ok(o) => o,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.common.out {
        Some(p) => std::fs::write(p, &out.text).map_err(|e| format!("{}: {e}", p.display())),
        None => stdout.write_all(out.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_FAIL;
    }
    if out.ok {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
