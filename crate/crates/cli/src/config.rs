//! Command-line and config-file options and their resolution into a
//! [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use qwvd::convcorr::{CorrSign, SecondFactor, TheoremVariant};
use qwvd::olct::{OlctParams, ParamPair};
use qwvd::plan::GridSizes;
use qwvd::signal::{AnalyticSignal, Point};

use crate::Failure;

/// Output directory used when neither `--out`, the config file nor
/// `QWVD_OUT` name one.
pub const DEFAULT_OUT: &str = "qwvd-out";

#[derive(Debug, Parser)]
#[command(name = "qwvd", version, about = "Wigner-Ville distribution of the quaternion offset linear canonical transform")]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand. The same keys may be given in a JSON
/// file passed with `--config`; flags take precedence.
#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// Parameters of the i-side transform: a,b,c,d[,r,s] with ad - bc = 1.
    #[arg(long = "A1", global = true, value_name = "a,b,c,d,r,s", allow_hyphen_values = true)]
    #[serde(rename = "A1")]
    pub a1: Option<String>,
    /// Parameters of the j-side transform.
    #[arg(long = "A2", global = true, value_name = "a,b,c,d,r,s", allow_hyphen_values = true)]
    #[serde(rename = "A2")]
    pub a2: Option<String>,
    /// First signal, e.g. `coeff=1,1,1,1;alpha=3.14159;shift=0,0;modi=0;modj=0`.
    #[arg(long, global = true, value_name = "SPEC", allow_hyphen_values = true)]
    pub signal_f: Option<String>,
    /// Second signal (window); defaults to the first.
    #[arg(long, global = true, value_name = "SPEC", allow_hyphen_values = true)]
    pub signal_g: Option<String>,
    /// Points in t and u, twice as many in the lag and w grids; the
    /// specific sizes below override it.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long = "n-t", global = true)]
    pub n_t: Option<usize>,
    #[arg(long = "n-u", global = true)]
    pub n_u: Option<usize>,
    #[arg(long = "n-n", global = true)]
    pub n_n: Option<usize>,
    #[arg(long = "n-w", global = true)]
    pub n_w: Option<usize>,
    /// One half-width for every grid instead of extents fitted to the signals.
    #[arg(long = "L", global = true)]
    #[serde(rename = "L")]
    pub half_width: Option<f64>,
    /// Reading of the conjugated factor: conj-conv or conv-conj.
    #[arg(long, global = true)]
    pub second_factor: Option<String>,
    /// Sign of r2^2 in the convolution prefactor: plus or minus.
    #[arg(long, global = true)]
    pub corr_sign: Option<String>,
    /// Evaluate every variant of the convolution and correlation theorems.
    #[arg(long, global = true)]
    pub sweep_variants: bool,
    /// Single worker thread; makes every output byte-reproducible.
    #[arg(long, global = true)]
    pub serial: bool,
    /// Output directory [env: QWVD_OUT].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the options above.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Options {
    /// `self` with every unset option taken from `file`.
    pub fn merged(self, file: Options) -> Options {
        Options {
            a1: self.a1.or(file.a1),
            a2: self.a2.or(file.a2),
            signal_f: self.signal_f.or(file.signal_f),
            signal_g: self.signal_g.or(file.signal_g),
            n: self.n.or(file.n),
            n_t: self.n_t.or(file.n_t),
            n_u: self.n_u.or(file.n_u),
            n_n: self.n_n.or(file.n_n),
            n_w: self.n_w.or(file.n_w),
            half_width: self.half_width.or(file.half_width),
            second_factor: self.second_factor.or(file.second_factor),
            corr_sign: self.corr_sign.or(file.corr_sign),
            sweep_variants: self.sweep_variants || file.sweep_variants,
            serial: self.serial || file.serial,
            out: self.out.or(file.out),
            config: self.config,
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    /// Evaluate the distribution at a point, on a slice or on the full grid.
    Wvd {
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        /// `t=t1,t2` for a frequency slice or `u=u1,u2` for a time slice.
        #[arg(long, allow_hyphen_values = true)]
        slice: Option<String>,
        /// Write the slice magnitude as a PGM image.
        #[arg(long, requires = "slice")]
        heatmap: Option<PathBuf>,
    },
    /// Forward transform of the first signal.
    Qolct {
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
    },
    /// Convolution of the two signals.
    Convolve {
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Correlation of the two signals.
    Correlate {
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Check one identity, or `all`.
    Verify { theorem: String },
    /// Repeat checks over grid refinements.
    Sweep {
        #[arg(long, default_value = "all")]
        theorem: String,
        /// Comma-separated factors applied to every grid size.
        #[arg(long, default_value = "1")]
        scales: String,
    },
}

/// Fully resolved configuration, written to `meta.json` next to outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: ParamPair,
    pub signal_f: AnalyticSignal,
    pub signal_g: AnalyticSignal,
    pub sizes: GridSizes,
    pub half_width: Option<f64>,
    pub variant: TheoremVariant,
    pub sweep_variants: bool,
    pub serial: bool,
    pub out: PathBuf,
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| usage(format!("{v:?} is not a number in {s:?}")))).collect()
}

pub fn parse_point(s: &str) -> Result<Point, Failure> {
    match parse_floats(s)?[..] {
        [a, b] => Ok([a, b]),
        _ => Err(usage(format!("expected two comma-separated numbers, got {s:?}"))),
    }
}

fn parse_params(name: &str, s: Option<&str>) -> Result<OlctParams, Failure> {
    match s {
        None => Ok(qwvd::olct::qft_params()),
        Some(s) => OlctParams::from_slice(&parse_floats(s)?).map_err(|e| usage(format!("--{name}: {e}"))),
    }
}

fn read_config(path: &Path) -> Result<Options, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<RunConfig, Failure> {
        let file = match &cli.options.config {
            Some(p) => read_config(p)?,
            None => Options::default(),
        };
        let o = cli.options.merged(file);
        let params = ParamPair::new(parse_params("A1", o.a1.as_deref())?, parse_params("A2", o.a2.as_deref())?);
        let signal = |name: &str, s: Option<&String>| -> Result<Option<AnalyticSignal>, Failure> {
            s.map(|s| s.parse::<AnalyticSignal>().map_err(|e| usage(format!("--{name}: {e}")))).transpose()
        };
        let signal_f = signal("signal-f", o.signal_f.as_ref())?.unwrap_or_else(AnalyticSignal::unit_gaussian);
        let signal_g = signal("signal-g", o.signal_g.as_ref())?.unwrap_or(signal_f);
        let base = o.n.map(GridSizes::base).unwrap_or_default();
        let sizes = GridSizes {
            n_t: o.n_t.unwrap_or(base.n_t),
            n_u: o.n_u.unwrap_or(base.n_u),
            n_n: o.n_n.unwrap_or(base.n_n),
            n_w: o.n_w.unwrap_or(base.n_w),
        };
        sizes.validate().map_err(usage)?;
        if let Some(l) = o.half_width {
            if !(l > 0.0 && l.is_finite()) {
                return Err(usage(format!("--L must be positive, got {l}")));
            }
        }
        let variant = TheoremVariant {
            second_factor: o.second_factor.as_deref().map(str::parse::<SecondFactor>).transpose().map_err(usage)?.unwrap_or_default(),
            corr_sign: o.corr_sign.as_deref().map(str::parse::<CorrSign>).transpose().map_err(usage)?.unwrap_or_default(),
        };
        let out = o.out.or_else(|| std::env::var_os("QWVD_OUT").map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        Ok(RunConfig {
            command: cli.command,
            params,
            signal_f,
            signal_g,
            sizes,
            half_width: o.half_width,
            variant,
            sweep_variants: o.sweep_variants,
            serial: o.serial,
            out,
        })
    }

    pub fn variants(&self) -> Vec<TheoremVariant> {
        if self.sweep_variants {
            TheoremVariant::all().to_vec()
        } else {
            vec![self.variant]
        }
    }
}
