//! The `qwvd` command line.

pub mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use qwvd::convcorr::{Combined, Operator};
use qwvd::verify::{self, TheoremId, VerificationReport};
use qwvd::{Envelope, GridPlan, GridSpec2D, Quaternion, Settings, Signal, SignalGrid, WvdEvaluator};

pub use config::{Cli, Command, RunConfig};

/// Why a run stopped early, mapped onto the process exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or parameters (exit 2).
    Usage(String),
    /// Reading or writing files failed (exit 3).
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<qwvd::Error> for Failure {
    fn from(e: qwvd::Error) -> Self {
        match e {
            qwvd::Error::Io(_) | qwvd::Error::Csv(_) | qwvd::Error::Json(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Exit status of a completed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// At least one identity failed without being explained as a mismatch
    /// in the identity itself.
    IdentityFailed,
}

/// Parses `args` (including the program name), runs and returns the exit
/// status. Errors go to stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match RunConfig::resolve(cli).and_then(|c| run(&c)) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::IdentityFailed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Executes a resolved configuration. Under `serial` everything runs on a
/// single worker thread.
pub fn run(config: &RunConfig) -> Result<Outcome, Failure> {
    if config.serial {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| Failure::Usage(e.to_string()))?;
        pool.install(|| dispatch(config))
    } else {
        dispatch(config)
    }
}

fn dispatch(c: &RunConfig) -> Result<Outcome, Failure> {
    match &c.command {
        Command::Wvd { t, u, slice, heatmap } => wvd(c, t.as_deref(), u.as_deref(), slice.as_deref(), heatmap.as_deref()),
        Command::Qolct { u } => qolct(c, u.as_deref()),
        Command::Convolve { t } => combine(c, Operator::Convolution, t.as_deref()),
        Command::Correlate { t } => combine(c, Operator::Correlation, t.as_deref()),
        Command::Verify { theorem } => verify_cmd(c, theorem),
        Command::Sweep { theorem, scales } => sweep(c, theorem, scales),
    }
}

fn settings(c: &RunConfig) -> Settings {
    Settings { half_width: c.half_width, ..Settings::default().with_sizes(c.sizes) }
}

fn plan_for(c: &RunConfig, env: &Envelope) -> Result<GridPlan, Failure> {
    Ok(settings(c).plan(env, &c.params)?)
}

fn format_q(q: Quaternion) -> String {
    format!("{:.12e} {:.12e} {:.12e} {:.12e}", q.w, q.x, q.y, q.z)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn in_out(c: &RunConfig, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        c.out.join(path)
    }
}

fn write_meta(c: &RunConfig, dir: &Path) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct Meta<'a> {
        version: &'static str,
        config: &'a RunConfig,
    }
    let json =
        serde_json::to_string_pretty(&Meta { version: env!("CARGO_PKG_VERSION"), config: c }).map_err(|e| Failure::Io(e.to_string()))?;
    let mut w = create(&dir.join("meta.json"))?;
    writeln!(w, "{json}")?;
    w.flush()?;
    Ok(())
}

fn write_grid(c: &RunConfig, name: &str, grid: &SignalGrid) -> Result<PathBuf, Failure> {
    let path = c.out.join(name);
    let mut w = create(&path)?;
    grid.write_csv(&mut w)?;
    w.flush()?;
    write_meta(c, &c.out)?;
    Ok(path)
}

fn wvd(c: &RunConfig, t: Option<&str>, u: Option<&str>, slice: Option<&str>, heatmap: Option<&Path>) -> Result<Outcome, Failure> {
    let (f, g) = (&c.signal_f, &c.signal_g);
    let plan = plan_for(c, &Envelope::of(&[f, g]))?;
    let eval = WvdEvaluator::new(c.params, plan.n);
    match (t, u, slice) {
        (Some(t), Some(u), None) => {
            let (t, u) = (config::parse_point(t)?, config::parse_point(u)?);
            println!("{}", format_q(eval.point(f, g, t, u)));
        }
        (None, None, Some(spec)) => {
            let (axis, value) =
                spec.split_once('=').ok_or_else(|| Failure::Usage(format!("--slice expects t=a,b or u=a,b, got {spec:?}")))?;
            let at = config::parse_point(value)?;
            let grid = match axis.trim() {
                "t" => eval.slice(f, g, at, plan.u),
                "u" => {
                    let n = plan.t.n;
                    let values = (0..n * n).into_par_iter().map(|i| eval.at_time(f, g, plan.t.point(i / n, i % n), &[at])[0]).collect();
                    SignalGrid::new(plan.t, values)?
                }
                other => return Err(Failure::Usage(format!("--slice axis must be t or u, got {other:?}"))),
            };
            let path = write_grid(c, "wvd_slice.csv", &grid)?;
            println!("wrote {}", path.display());
            if let Some(h) = heatmap {
                let path = in_out(c, h);
                let mut w = create(&path)?;
                grid.write_pgm(&mut w)?;
                w.flush()?;
                println!("wrote {}", path.display());
            }
        }
        (None, None, None) => {
            let grid = eval.grid(f, g, plan.t, plan.u);
            let path = c.out.join("wvd.csv");
            let mut w = create(&path)?;
            grid.write_csv(&mut w)?;
            w.flush()?;
            write_meta(c, &c.out)?;
            println!("wrote {}", path.display());
        }
        _ => return Err(Failure::Usage("wvd takes both --t and --u, or --slice, or neither".into())),
    }
    Ok(Outcome::Ok)
}

fn qolct(c: &RunConfig, u: Option<&str>) -> Result<Outcome, Failure> {
    let f = &c.signal_f;
    let plan = plan_for(c, &Envelope::of(&[f]))?;
    match u {
        Some(u) => {
            let u = config::parse_point(u)?;
            println!("{}", format_q(qwvd::qolct_forward(f, &c.params, u, plan.signal)?));
        }
        None => {
            let n = plan.u.n;
            let values = (0..n * n)
                .into_par_iter()
                .map(|i| qwvd::qolct_forward(f, &c.params, plan.u.point(i / n, i % n), plan.signal))
                .collect::<qwvd::Result<Vec<_>>>()?;
            let path = write_grid(c, "qolct.csv", &SignalGrid::new(plan.u, values)?)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(Outcome::Ok)
}

fn combine(c: &RunConfig, op: Operator, t: Option<&str>) -> Result<Outcome, Failure> {
    let (f, g) = (&c.signal_f, &c.signal_g);
    let env = Envelope::of(&[f, g]);
    let plan = plan_for(c, &env)?;
    let h = Combined::new(op, f, g, &c.params, plan.signal)?;
    match t {
        Some(t) => println!("{}", format_q(h.eval(config::parse_point(t)?))),
        None => {
            let spec = match c.half_width {
                Some(l) => GridSpec2D::new(c.sizes.n_t, l)?,
                None => GridSpec2D::new(c.sizes.n_t, env.combined().signal_extent())?,
            };
            let n = spec.n;
            let values = (0..n * n).into_par_iter().map(|i| h.eval(spec.point(i / n, i % n))).collect();
            let name = match op {
                Operator::Convolution => "convolution.csv",
                Operator::Correlation => "correlation.csv",
            };
            let path = write_grid(c, name, &SignalGrid::new(spec, values)?)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(Outcome::Ok)
}

fn theorems(name: &str) -> Result<Vec<TheoremId>, Failure> {
    if name == "all" {
        Ok(TheoremId::ALL.to_vec())
    } else {
        Ok(vec![name.parse::<TheoremId>()?])
    }
}

fn run_checks(c: &RunConfig, ids: &[TheoremId], settings: &Settings) -> Vec<VerificationReport> {
    let variants = c.variants();
    let mut reports: Vec<VerificationReport> =
        ids.iter().flat_map(|&id| verify::verify_one(id, &c.signal_f, &c.signal_g, &c.params, settings, &variants)).collect();
    if c.serial {
        for r in &mut reports {
            if let Some(s) = r.runtime_seconds.take() {
                eprintln!("{} runtime {s:.3} s", r.file_stem());
            }
        }
    }
    reports
}

fn status(r: &VerificationReport) -> &'static str {
    if r.pass {
        "PASS"
    } else if r.theorem_mismatch {
        "MISMATCH"
    } else {
        "FAIL"
    }
}

fn print_report(r: &VerificationReport, prefix: &str) {
    let mut line = format!("{prefix}{:<8} {:<40} residual {:.3e} tolerance {:.1e}", status(r), r.file_stem(), r.residual, r.tolerance);
    if let Some(o) = r.oracle_residual {
        line.push_str(&format!(" oracle {o:.3e}"));
    }
    if let Some(e) = &r.error {
        line.push_str(&format!(" error: {e}"));
    }
    println!("{line}");
}

fn save(c: &RunConfig, dir: &Path, reports: &[VerificationReport]) -> Result<(), Failure> {
    verify::write_reports(dir, reports)?;
    if !c.serial {
        let mut w = create(&dir.join("timing.csv"))?;
        verify::write_timing(&mut w, reports)?;
        w.flush()?;
    }
    Ok(())
}

fn outcome(reports: &[VerificationReport]) -> Outcome {
    if reports.iter().any(VerificationReport::is_failure) {
        Outcome::IdentityFailed
    } else {
        Outcome::Ok
    }
}

fn verify_cmd(c: &RunConfig, theorem: &str) -> Result<Outcome, Failure> {
    let ids = theorems(theorem)?;
    let reports = run_checks(c, &ids, &settings(c));
    save(c, &c.out, &reports)?;
    write_meta(c, &c.out)?;
    for r in &reports {
        print_report(r, "");
    }
    Ok(outcome(&reports))
}

fn sweep(c: &RunConfig, theorem: &str, scales: &str) -> Result<Outcome, Failure> {
    let ids = theorems(theorem)?;
    let scales = config::parse_floats(scales)?;
    if scales.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Failure::Usage(format!("scales must be positive, got {scales:?}")));
    }
    let mut all = Vec::new();
    for &scale in &scales {
        let sizes = c.sizes.scaled(scale);
        sizes.validate()?;
        let reports = run_checks(c, &ids, &settings(c).with_sizes(sizes));
        save(c, &c.out.join(format!("scale-{scale}")), &reports)?;
        for r in &reports {
            print_report(r, &format!("x{scale:<4} "));
        }
        all.extend(reports.into_iter().map(|r| (scale, sizes, r)));
    }
    let mut w = csv::Writer::from_writer(create(&c.out.join("sweep.csv"))?);
    w.write_record(["theorem", "variant", "scale", "n_t", "n_u", "n_n", "n_w", "residual", "tolerance", "pass", "theorem_mismatch"])
        .map_err(|e| Failure::Io(e.to_string()))?;
    for (scale, s, r) in &all {
        let variant = r.variant.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([
            r.theorem_id.to_string(),
            variant,
            scale.to_string(),
            s.n_t.to_string(),
            s.n_u.to_string(),
            s.n_n.to_string(),
            s.n_w.to_string(),
            format!("{:e}", r.residual),
            format!("{:e}", r.tolerance),
            r.pass.to_string(),
            r.theorem_mismatch.to_string(),
        ])
        .map_err(|e| Failure::Io(e.to_string()))?;
    }
    w.flush()?;
    write_meta(c, &c.out)?;
    let reports: Vec<_> = all.into_iter().map(|(_, _, r)| r).collect();
    Ok(outcome(&reports))
}
