//! The `isotrivial` command line. `run` takes the argument list and returns
//! what would be printed plus the exit code, so tests and the golden-file
//! check can drive it in-process.

mod verify;

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use isotrivial::algebra::Gf;
use isotrivial::families::{
    plane_family_to_surface, space_family_to_surface, PlaneCurveFamily, Root, SpaceCurveFamily,
};
use isotrivial::invariants::{classify, render_table, EType, SurfaceData};
use isotrivial::ramification::{ramify, RamifyInput};
use isotrivial::suite::{run_suite, SuiteConfig};

pub use verify::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ETypeArg {
    Ordinary,
    Supersingular,
}

impl From<ETypeArg> for EType {
    fn from(e: ETypeArg) -> Self {
        match e {
            ETypeArg::Ordinary => EType::Ordinary,
            ETypeArg::Supersingular => EType::Supersingular,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "isotrivial", version, about = "Invariants of isotrivial elliptic surfaces (E x C)/G")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify surface data given as a JSON file, inline JSON, or `-` for stdin.
    Classify { input: String },
    /// Run a named symbolic verification.
    Verify {
        #[arg(value_enum)]
        check: Check,
        /// Characteristic (defaults: 2 for group-law checks, 5 for calcoli).
        #[arg(long)]
        p: Option<u64>,
        /// Largest field size for point scans (default p^3).
        #[arg(long)]
        q_max: Option<u64>,
        /// RNG seed for sampled families.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Local ramification data of a constant group action, from JSON.
    Ramify {
        input: String,
        /// Initial series precision (doubled until i_x is stable).
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Build surface data for one of the explicit curve families.
    Example {
        #[command(subcommand)]
        family: Family,
    },
    /// Run every acceptance criterion and print a scoreboard.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scan bound for the joint fixed-point criterion (default 8 = 2^3).
        #[arg(long)]
        q_max: Option<u64>,
        /// Directory of `<name>.args` / `<name>.out` pairs to replay.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// z^e = f(x, y) in P^2 with μ_m scaling z; f given by its roots.
    Plane {
        #[arg(long)]
        p: u64,
        /// e = m = p^r unless --exponent / --group-order are given.
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Roots of f as field elements (integers c0 + c1 p + ..., the base-p
        /// digits being coordinates in the field generator) or `inf`.
        #[arg(long, value_delimiter = ',', required = true)]
        roots: Vec<String>,
        /// Field F_{p^k} holding the roots (default k = r).
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        exponent: Option<u64>,
        #[arg(long)]
        group_order: Option<u64>,
        #[arg(long, value_enum, default_value_t = ETypeArg::Ordinary)]
        e_type: ETypeArg,
    },
    /// w^{p^n} = z h(x, z) + y^{p^n} over y^2 z = x(x + z)(x - z).
    Space {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// The a_i as elements of F_{p^k} (default: a standard choice).
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<u32>>,
        /// Field F_{p^k} holding the a_i (default k = n + 1).
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value_t = ETypeArg::Ordinary)]
        e_type: ETypeArg,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: 0 }
    }

    fn fail(code: i32, msg: impl std::fmt::Display) -> Self {
        Self { stdout: String::new(), stderr: format!("error: {msg}\n"), code }
    }
}

fn read_input(input: &str) -> Result<String, String> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        return Ok(input.to_string());
    }
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("reading stdin: {e}"))?;
        return Ok(s);
    }
    std::fs::read_to_string(input).map_err(|e| format!("reading {input}: {e}"))
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn run_classify(input: &str, format: Format) -> Output {
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return Output::fail(1, e),
    };
    let result = SurfaceData::from_json(&text).and_then(|d| d.validate()).and_then(|s| classify(&s));
    match result {
        Ok(r) => Output::ok(match format {
            Format::Json => with_newline(r.to_json()),
            Format::Table => render_table(&r),
        }),
        Err(e) => Output::fail(e.exit_code(), e),
    }
}

fn run_ramify(input: &str, precision: Option<usize>, format: Format) -> Output {
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return Output::fail(1, e),
    };
    let mut data = match RamifyInput::from_json(&text) {
        Ok(d) => d,
        Err(e) => return Output::fail(1, format!("could not parse action: {e}")),
    };
    if precision.is_some() {
        data.precision = precision;
    }
    match ramify(&data) {
        Ok(r) => Output::ok(match format {
            Format::Json => with_newline(serde_json::to_string_pretty(&r).expect("report serializes")),
            Format::Table => {
                let mut s = String::new();
                let _ = writeln!(s, "p          {}", r.p);
                let _ = writeln!(s, "|G|        {}", r.order);
                let _ = writeln!(s, "|H|        {}", r.stab);
                let values: Vec<String> = r.i_values.iter().map(u64::to_string).collect();
                let _ = writeln!(s, "i_x(g^k)   {}", values.join(" "));
                let _ = writeln!(s, "a(x)       {}", r.artin_a);
                let _ = writeln!(s, "tame       {}", r.tame);
                if let (Some(g), Some(d)) = (r.g_y, r.deg_omega_x) {
                    let _ = writeln!(s, "deg ω_X    {d}  (g(Y) = {g}, {} branch point(s))", r.count);
                }
                s
            }
        }),
        Err(e) => Output::fail(1, e),
    }
}

fn parse_root(s: &str, field: &Gf) -> Result<Root, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Root::Infinity);
    }
    let v: i64 = s.parse().map_err(|_| format!("root `{s}` is neither an integer nor `inf`"))?;
    if v < 0 && field.degree() == 1 {
        return Ok(Root::Finite(v.rem_euclid(field.q() as i64) as u32));
    }
    if v < 0 || v as u64 >= field.q() {
        return Err(format!("root {v} is not an element of F_{}", field.q()));
    }
    Ok(Root::Finite(v as u32))
}

fn run_example(family: &Family) -> Output {
    let result: Result<SurfaceData, String> = match family {
        Family::Plane { p, r, roots, k, exponent, group_order, e_type } => (|| {
            let field = Gf::new(*p, k.unwrap_or(*r)).map_err(|e| e.to_string())?;
            let roots = roots.iter().map(|s| parse_root(s, &field)).collect::<Result<Vec<_>, _>>()?;
            let e = exponent.unwrap_or_else(|| p.pow(*r));
            let m = group_order.unwrap_or(e);
            let fam = PlaneCurveFamily::new(field, e, m, roots).map_err(|e| e.to_string())?;
            Ok(plane_family_to_surface(&fam, (*e_type).into()))
        })(),
        Family::Space { p, n, a, k, e_type } => (|| {
            let fam = match a {
                None if k.is_none() => SpaceCurveFamily::standard(*p, *n),
                _ => {
                    let field = match k {
                        Some(k) => Gf::new(*p, *k).map_err(|e| e.to_string())?,
                        None => SpaceCurveFamily::default_field(*p, *n).map_err(|e| e.to_string())?,
                    };
                    let a = a.clone().ok_or("--k needs --a")?;
                    SpaceCurveFamily::new(field, *n, a)
                }
            }
            .map_err(|e| e.to_string())?;
            Ok(space_family_to_surface(&fam, (*e_type).into()))
        })(),
    };
    match result {
        Ok(d) => Output::ok(with_newline(d.to_json())),
        Err(e) => Output::fail(1, e),
    }
}

/// Line diff of expected against actual, `-` for expected and `+` for actual.
pub fn diff(expected: &str, actual: &str) -> String {
    let d = similar::TextDiff::from_lines(expected, actual);
    d.unified_diff().context_radius(2).header("expected", "actual").to_string()
}

/// Replays `<name>.args` (one argument per line) and compares stdout and the
/// exit code with `<name>.out`, whose last line is `exit: <code>`.
pub fn check_golden_dir(dir: &Path) -> Result<Vec<(String, Option<String>)>, String> {
    let mut names: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("reading {}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "args"))
        .collect();
    names.sort();
    let mut results = Vec::new();
    for args_path in names {
        let name = args_path.file_stem().unwrap().to_string_lossy().into_owned();
        let args_text = std::fs::read_to_string(&args_path).map_err(|e| e.to_string())?;
        let out_path = args_path.with_extension("out");
        let expected = std::fs::read_to_string(&out_path).map_err(|e| format!("{}: {e}", out_path.display()))?;
        let args: Vec<String> = args_text.lines().filter(|l| !l.is_empty()).map(str::to_string).collect();
        let got = run(std::iter::once("isotrivial".to_string()).chain(args));
        let actual = golden_text(&got);
        let verdict = (expected != actual).then(|| diff(&expected, &actual));
        results.push((name, verdict));
    }
    Ok(results)
}

/// What a golden `.out` file records for one run.
pub fn golden_text(out: &Output) -> String {
    format!("{}exit: {}\n", out.stdout, out.code)
}

fn run_suite_cmd(seed: u64, q_max: Option<u64>, golden_dir: Option<&Path>) -> Output {
    let cfg = SuiteConfig { seed, q_max: q_max.unwrap_or(8), ..SuiteConfig::default() };
    let board = run_suite(&cfg);
    let mut text = board.render();
    let mut ok = board.all_passed();
    if let Some(dir) = golden_dir {
        match check_golden_dir(dir) {
            Ok(results) => {
                let bad = results.iter().filter(|(_, d)| d.is_some()).count();
                let _ = writeln!(
                    text,
                    "golden: {} ({}/{} files match)",
                    if bad == 0 { "PASS" } else { "FAIL" },
                    results.len() - bad,
                    results.len()
                );
                for (name, d) in &results {
                    if let Some(d) = d {
                        let _ = writeln!(text, "  {name} differs:");
                        for line in d.lines() {
                            let _ = writeln!(text, "    {line}");
                        }
                    }
                }
                ok &= bad == 0;
            }
            Err(e) => {
                let _ = writeln!(text, "golden: FAIL ({e})");
                ok = false;
            }
        }
    }
    Output { stdout: text, stderr: String::new(), code: if ok { 0 } else { 1 } }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Output::ok(text) } else { Output { stdout: String::new(), stderr: text, code } };
        }
    };
    match &cli.command {
        Command::Classify { input } => run_classify(input, cli.format),
        Command::Verify { check, p, q_max, seed } => verify::run_verify(*check, *p, *q_max, *seed, cli.format),
        Command::Ramify { input, precision } => run_ramify(input, *precision, cli.format),
        Command::Example { family } => run_example(family),
        Command::Suite { seed, q_max, golden_dir } => run_suite_cmd(*seed, *q_max, golden_dir.as_deref()),
    }
}
