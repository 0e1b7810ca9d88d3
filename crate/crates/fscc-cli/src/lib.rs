//! Command line front end: `verify`, `render` and `eval`.

pub mod figures;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fscc::cycle::SignMatrix;
use fscc::render::{self, Style, Viewport};
use fscc::verify::{self, Config, ScalarKind};
use fscc::{Cycle, Cycle2D, Frame, Rational, Scalar};
use num_bigint::BigInt;

pub const SEED_ENV: &str = "FSCC_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fscc", version, about = "Cycles in elliptic, parabolic and hyperbolic planes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the identity catalogue on random tuples.
    Verify(VerifyArgs),
    /// Draw a corpus figure or a single cycle.
    Render(RenderArgs),
    /// Print a quantity of one cycle.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScalarArg {
    Rational,
    Float,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Report {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma separated check names; all checks when omitted.
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
    /// Master seed; defaults to $FSCC_SEED, then 1.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "rational")]
    pub scalar: ScalarArg,
    #[arg(long, value_enum, default_value = "text")]
    pub report: Report,
    /// Random tuples per signature combination.
    #[arg(long, default_value_t = 20)]
    pub tuples: usize,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub parallelism: usize,
    /// Include wall-clock times in the JSON report.
    #[arg(long)]
    pub timings: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// List check names and exit.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Asy,
    Svg,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Asy => "asy",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Corpus figure name, or `all`.
    #[arg(long, conflicts_with = "cycle")]
    pub figure: Option<String>,
    /// Cycle literal `k,l,n,m`.
    #[arg(long, allow_hyphen_values = true)]
    pub cycle: Option<String>,
    /// Signature `sigma` of the point space for `--cycle`.
    #[arg(long, allow_hyphen_values = true, default_value = "-1")]
    pub sig: String,
    /// `xmin,xmax,ymin,ymax` for `--cycle`.
    #[arg(long, allow_hyphen_values = true)]
    pub viewport: Option<String>,
    #[arg(long, value_enum, default_value = "asy")]
    pub format: Format,
    #[arg(long, default_value_t = 2)]
    pub precision: usize,
    /// Output file (single figure or cycle) or directory (`--figure all`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// List figure names and exit.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Query {
    Det,
    Center,
    Focus,
    Roots,
    Matrix,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Cycle literal `k,l,n,m` with rational entries.
    #[arg(long, allow_hyphen_values = true)]
    pub cycle: String,
    /// `sigma[,sigma1[,sigma2]]`: point space, cycle space, focus metric.
    #[arg(long, allow_hyphen_values = true, default_value = "-1")]
    pub sig: String,
    #[arg(long, value_enum)]
    pub query: Query,
    /// Ordinate for `roots`.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub at: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Render(#[from] render::RenderError),
    #[error(transparent)]
    Figure(#[from] figures::FigureError),
    #[error(transparent)]
    Cycle(#[from] fscc::CycleError),
    #[error(transparent)]
    Verify(#[from] verify::VerifyError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => EXIT_IO,
            CliError::Render(render::RenderError::Io(_)) => EXIT_IO,
            CliError::Figure(figures::FigureError::Unknown(_)) => EXIT_USAGE,
            CliError::Cycle(_) | CliError::Figure(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses `3`, `-2/3` or `0.25` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("not a rational number: `{s}`"));
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n = BigInt::from_str(&digits).map_err(|_| bad())?;
        let d = BigInt::from(10u32).pow(frac.len() as u32);
        let r = Rational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let r = Rational::from_str(s).map_err(|_| bad())?;
    Ok(r)
}

fn parse_list(s: &str, n: std::ops::RangeInclusive<usize>, what: &str) -> Result<Vec<Rational>, CliError> {
    let v = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    if !n.contains(&v.len()) {
        return Err(CliError::Usage(format!("{what} needs {n:?} comma separated values, got {}", v.len())));
    }
    Ok(v)
}

/// `k,l,n,m` in the metric `diag(-1, sigma)`.
pub fn parse_cycle(s: &str, sigma: &Rational) -> Result<Cycle2D<Rational>, CliError> {
    let v = parse_list(s, 4..=4, "a cycle")?;
    let [k, l, n, m]: [Rational; 4] = v.try_into().expect("length checked");
    Ok(Cycle2D::new(k, l, n, m, Frame::plane(sigma.clone()))?)
}

pub fn parse_signs(s: &str) -> Result<Vec<Rational>, CliError> {
    parse_list(s, 1..=3, "a signature")
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Result text of `eval`.
pub fn eval(args: &EvalArgs) -> Result<String, CliError> {
    let sig = parse_signs(&args.sig)?;
    let sigma = sig[0].clone();
    let sigma1 = sig.get(1).cloned().unwrap_or_else(|| sigma.clone());
    let c = parse_cycle(&args.cycle, &sigma)?;
    let es = Frame::plane(sigma1);
    Ok(match args.query {
        Query::Det => c.det(Some(&es), None)?.to_string(),
        Query::Center => fmt_vec(&c.center(None)?),
        Query::Focus => {
            let f = match sig.get(2) {
                Some(s2) => c.focus(Some(&Frame::plane(s2.clone())))?,
                None => c.focus(None)?,
            };
            fmt_vec(&f)
        }
        Query::Roots => {
            let y = parse_rational(&args.at)?;
            let f: Cycle2D<f64> = to_float(&c)?;
            match c.roots(&y, true) {
                Ok(r) => fmt_vec(&r),
                // irrational roots are printed in floating point
                Err(_) => {
                    let r = f.roots(&y.to_f64(), true)?;
                    let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                    format!("({})", parts.join(", "))
                }
            }
        }
        Query::Matrix => {
            let m = c.to_matrix(Some(&es), Some(&SignMatrix::identity(2)))?;
            let mut s = String::new();
            for i in 0..2 {
                let row: Vec<String> = (0..2).map(|j| m.get(i, j).to_string()).collect();
                s.push_str(&format!("[{}]", row.join(", ")));
                if i == 0 {
                    s.push('\n');
                }
            }
            s
        }
    })
}

fn to_float(c: &Cycle2D<Rational>) -> Result<Cycle2D<f64>, CliError> {
    let g: Vec<f64> = c.metric().signature().iter().map(|x| x.to_f64()).collect();
    let l: Vec<f64> = c.l().iter().map(|x| x.to_f64()).collect();
    let cf = Cycle::new(c.k().to_f64(), l, c.m().to_f64(), Frame::new(g).map_err(fscc::CycleError::from)?)?;
    Ok(Cycle2D::from_cycle(cf)?)
}

fn seed(arg: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = arg {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(1),
    }
}

/// Runs the checks and returns the report text and whether all passed.
pub fn verify_report(args: &VerifyArgs) -> Result<(String, bool), CliError> {
    if args.list {
        let mut s = verify::check_names().join("\n");
        s.push('\n');
        return Ok((s, true));
    }
    let cfg = Config {
        seed: seed(args.seed)?,
        tuples: args.tuples,
        scalar: match args.scalar {
            ScalarArg::Rational => ScalarKind::Rational,
            ScalarArg::Float => ScalarKind::Float,
        },
        ..Config::default()
    };
    let names: Vec<String> = if args.checks.is_empty() {
        verify::check_names().iter().map(|s| s.to_string()).collect()
    } else {
        args.checks.clone()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.parallelism)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut results = pool.install(|| verify::run_checks(&names, &cfg))?;
    let ok = results.iter().all(|r| r.passed);
    let text = match args.report {
        Report::Text => {
            let mut s = String::new();
            for r in &results {
                s.push_str(&r.text_line());
                s.push('\n');
            }
            s
        }
        Report::Json => {
            if !args.timings {
                for r in &mut results {
                    r.millis = 0;
                }
            }
            let mut s = serde_json::to_string_pretty(&results).map_err(io::Error::other)?;
            s.push('\n');
            s
        }
    };
    Ok((text, ok))
}

fn parse_viewport(s: Option<&str>, precision: usize) -> Result<Viewport, CliError> {
    let mut vp = Viewport::default();
    if let Some(s) = s {
        let v = parse_list(s, 4..=4, "a viewport")?;
        vp = Viewport::new(v[0].to_f64(), v[1].to_f64(), v[2].to_f64(), v[3].to_f64())?;
    }
    vp.precision = precision;
    vp.validate()?;
    Ok(vp)
}

/// Text of one corpus figure in the given format.
pub fn figure_text(name: &str, format: Format, precision: usize) -> Result<String, CliError> {
    let mut fig = figures::build(name)?;
    fig.set_precision(precision);
    fig.viewport.validate()?;
    fig.self_check()?;
    Ok(match format {
        Format::Asy => fig.to_asymptote(),
        Format::Svg => fig.to_svg(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(())
}

pub fn render_cmd(args: &RenderArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if args.list {
        for n in figures::names() {
            writeln!(stdout, "{n}")?;
        }
        return Ok(());
    }
    if let Some(name) = &args.figure {
        if name == "all" {
            let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir)?;
            for n in figures::names() {
                let text = figure_text(&n, args.format, args.precision)?;
                let path = dir.join(format!("{n}.{}", args.format.ext()));
                write_file(&path, &text)?;
                writeln!(stdout, "{}", path.display())?;
            }
            return Ok(());
        }
        let text = figure_text(name, args.format, args.precision)?;
        let path = args
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{name}.{}", args.format.ext())));
        write_file(&path, &text)?;
        writeln!(stdout, "{}", path.display())?;
        return Ok(());
    }
    let Some(lit) = &args.cycle else {
        return Err(CliError::Usage("render needs --figure or --cycle".into()));
    };
    let sig = parse_signs(&args.sig)?;
    let c = parse_cycle(lit, &sig[0])?;
    let vp = parse_viewport(args.viewport.as_deref(), args.precision)?;
    let ps = render::trace(&c, &vp);
    let style = Style::new();
    let text = match args.format {
        Format::Asy => render::asymptote_string(&ps, &style, vp.precision),
        Format::Svg => render::svg_document(&[(ps, style)], &vp),
    };
    match &args.out {
        Some(p) => write_file(p, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command, writing to `stdout`; returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let r = match &cli.command {
        Command::Verify(a) => verify_report(a).and_then(|(text, ok)| {
            match &a.out {
                Some(p) => write_file(p, &text)?,
                None => stdout.write_all(text.as_bytes())?,
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAIL })
        }),
        Command::Render(a) => render_cmd(a, stdout).map(|_| EXIT_OK),
        Command::Eval(a) => eval(a).and_then(|s| {
            writeln!(stdout, "{s}")?;
            Ok(EXIT_OK)
        }),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `argv` and runs it; usage errors exit with code 2.
pub fn main_with(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            code
        }
    }
}
