use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use stbc_core::channel_sim::{self, ChannelConfig, Fading};
use stbc_core::code_metrics::{self, CheckSelection, Constellation, EnumConfig};
use stbc_core::code_spec::CodeSpecFile;
use stbc_core::exact_algebra::rational_from_json;
use stbc_core::number_theory::{self, FieldKind};
use stbc_core::presets;
use stbc_core::{CodeSpec, FieldElem, Rational, TowerSpec};

// stdout writes that exit quietly when the reader goes away (`stbc ... | head`)
macro_rules! out {
    ($($t:tt)*) => {
        emit(format_args!($($t)*), true)
    };
}

fn emit(args: std::fmt::Arguments, newline: bool) {
    let mut so = io::stdout().lock();
    let res = if newline {
        writeln!(so, "{args}")
    } else {
        write!(so, "{args}")
    };
    match res {
        Ok(()) => {}
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => {
            eprintln!("error: writing to stdout: {e}");
            std::process::exit(2);
        }
    }
}

#[derive(Parser)]
#[command(
    name = "stbc",
    version,
    about = "Build and verify space-time block codes from quaternion algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the codeword for four information symbols.
    Build(BuildArgs),
    /// Run diversity / determinant / NVD / shaping / energy checks.
    Check(CheckArgs),
    /// Monte Carlo codeword error rates (CSV).
    Simulate(SimArgs),
    /// Number-theory queries (JSON).
    Nt {
        #[command(subcommand)]
        query: NtCmd,
    },
    /// List built-in codes, or print one as a spec file.
    Presets {
        #[arg(long)]
        show: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Source {
    /// A built-in code (see `stbc presets`).
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    /// A JSON code spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct ConsArgs {
    /// Box constellation {a + b·ω : |a|, |b| ≤ L}.
    #[arg(long = "L", conflicts_with = "qam")]
    l: Option<u32>,
    /// Square QAM (PAM over Q).
    #[arg(long)]
    qam: Option<u32>,
    /// Restrict the box to rational symbols.
    #[arg(long, requires = "l")]
    rational: bool,
}

impl ConsArgs {
    fn pick(&self, default: &Constellation) -> Constellation {
        match (self.l, self.qam) {
            (Some(l), _) if self.rational => Constellation::rational_box(l),
            (Some(l), _) => Constellation::boxed(l),
            (None, Some(q)) => Constellation::qam(q),
            (None, None) => default.clone(),
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    src: Source,
    /// Symbols c d e f: rationals, Gaussian forms like `1-2i`, or base
    /// coordinates as JSON (`[1,"1/2"]`). Put `--` before the symbols when
    /// one looks like `-1-2i`.
    #[arg(num_args = 4, value_names = ["C", "D", "E", "F"], allow_negative_numbers = true)]
    symbols: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    src: Source,
    #[command(flatten)]
    cons: ConsArgs,
    #[arg(long)]
    diversity: bool,
    #[arg(long)]
    mindet: bool,
    #[arg(long)]
    nvd: bool,
    #[arg(long)]
    shaping: bool,
    #[arg(long)]
    energy: bool,
    #[arg(long)]
    all: bool,
    /// Maximum number of enumerated tuples.
    #[arg(long, default_value_t = 10_000_000)]
    cap: u128,
    /// Also write every tuple's determinant metric to this CSV file.
    #[arg(long)]
    det_csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FadingArg {
    Rayleigh,
    Identity,
}

#[derive(Args)]
struct SimArgs {
    /// Built-in codes; repeat to compare several.
    #[arg(long)]
    preset: Vec<String>,
    /// Spec files; repeat to compare several.
    #[arg(long)]
    spec: Vec<PathBuf>,
    #[arg(long = "L", conflicts_with = "qam")]
    l: Option<u32>,
    #[arg(long, default_value_t = 4)]
    qam: u32,
    /// SNR points in dB, comma-separated; `inf` is noiseless.
    #[arg(long, value_delimiter = ',', default_value = "0,5,10,15,20")]
    snr: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Receive antennas (default: as many as transmit antennas).
    #[arg(long)]
    nrx: Option<usize>,
    #[arg(long, value_enum, default_value = "rayleigh")]
    fading: FadingArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum NtCmd {
    /// |d_{K/Q(i)}| for K = Q(i)(√m).
    Reldisc {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Class number one, by table.
    H1 {
        #[arg(long, conflicts_with = "imag")]
        qi_ext: Option<i64>,
        #[arg(long)]
        imag: Option<i64>,
    },
    /// Unit rank r + s − 1.
    Unitrank {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
    },
    /// Discriminant and integral basis of Q(√m).
    Field {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
}

enum Failure {
    /// A requested check did not meet its expectation.
    Check,
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Build(a) => build(a),
        Cmd::Check(a) => check(a),
        Cmd::Simulate(a) => simulate(a),
        Cmd::Nt { query } => nt(query),
        Cmd::Presets { show, json } => list_presets(show, json),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_spec_file(path: &Path) -> std::result::Result<CodeSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let file: CodeSpecFile = serde_path_to_error::deserialize(de).map_err(|e| {
        // the inner message already carries line and column
        format!("{}: field `{}`: {}", path.display(), e.path(), e.inner())
    })?;
    CodeSpec::from_file(&file).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(src: &Source) -> std::result::Result<CodeSpec, Failure> {
    match (&src.preset, &src.spec) {
        (Some(p), _) => Ok(presets::preset(p)?),
        (None, Some(path)) => Ok(load_spec_file(path)?),
        (None, None) => Err(Failure::Usage("one of --preset or --spec is required".into())),
    }
}

// `a+bi`, `-i`, `3i` over a base field containing i.
fn parse_gaussian(s: &str, tower: &TowerSpec) -> Option<FieldElem> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let body = t.strip_suffix('i')?;
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let coef = |x: &str| -> Option<Rational> {
        match x {
            "" | "+" => Some(Rational::one()),
            "-" => Some(Rational::from_int(-1)),
            _ => x.trim_start_matches('+').parse().ok(),
        }
    };
    tower.gaussian_elem(re.parse::<Rational>().ok()?, coef(im)?).ok()
}

fn parse_symbol(s: &str, tower: &TowerSpec) -> std::result::Result<FieldElem, String> {
    let s = s.trim();
    if s.starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| format!("symbol {s}: {e}"))?;
        let coords = v
            .as_array()
            .ok_or_else(|| format!("symbol {s}: expected an array"))?
            .iter()
            .map(rational_from_json)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| format!("symbol {s}: {e}"))?;
        return tower.from_base(&coords).map_err(|e| format!("symbol {s}: {e}"));
    }
    if s.ends_with('i') {
        return parse_gaussian(s, tower).ok_or_else(|| format!("symbol {s}: not a Gaussian number in {tower}"));
    }
    s.parse::<Rational>()
        .map(|r| tower.from_rational(r))
        .map_err(|e| format!("symbol {s}: {e}"))
}

fn build(a: BuildArgs) -> CliResult {
    let code = load(&a.src)?;
    let t = code.tower().clone();
    let syms: Vec<FieldElem> = if a.symbols.is_empty() {
        vec![t.one(), t.zero(), t.zero(), t.zero()]
    } else {
        a.symbols
            .iter()
            .map(|s| parse_symbol(s, &t))
            .collect::<std::result::Result<_, _>>()?
    };
    let syms: [FieldElem; 4] = syms
        .try_into()
        .map_err(|_| Failure::Usage("need four symbols".into()))?;
    let cw = code.codeword(&syms)?;
    if a.json {
        out!("{}", serde_json::to_string_pretty(&cw)?);
        return Ok(());
    }
    out!(
        "{} over {} ({}), symbols ({})",
        code.name,
        t,
        code.shape,
        code_metrics::format_tuple(&syms)
    );
    match code.shaping {
        Some(n) => out!("exact (times 1/√{n}):"),
        None => out!("exact:"),
    }
    out!("{}", cw.matrix);
    out!("embedded:");
    for row in cw.embed() {
        let cells: Vec<String> = row.iter().map(|z| format!("{:>9.5} {:+.5}i", z.re, z.im)).collect();
        out!("  {}", cells.join("   "));
    }
    Ok(())
}

fn check(a: CheckArgs) -> CliResult {
    let code = load(&a.src)?;
    let cons = a.cons.pick(&code.constellation);
    let mut sel = CheckSelection {
        diversity: a.diversity,
        mindet: a.mindet,
        nvd: a.nvd,
        shaping: a.shaping,
        energy: a.energy,
    };
    if a.all || sel.is_empty() {
        sel = CheckSelection::all();
    }
    let cfg = EnumConfig {
        cap: a.cap,
        ..EnumConfig::default()
    };
    if let Some(path) = &a.det_csv {
        let f = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        code_metrics::write_det_csv(&code, &cons, &cfg, BufWriter::new(f))?;
    }
    let report = code_metrics::run_checks(&code, &cons, sel, &cfg)?;
    if a.json {
        out!("{}", report.to_json());
    } else {
        emit(format_args!("{report}"), false);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn simulate(a: SimArgs) -> CliResult {
    let mut codes = Vec::new();
    for p in &a.preset {
        codes.push(presets::preset(p)?);
    }
    for s in &a.spec {
        codes.push(load_spec_file(s)?);
    }
    if codes.is_empty() {
        return Err(Failure::Usage("at least one --preset or --spec is required".into()));
    }
    let cons = match a.l {
        Some(l) => Constellation::boxed(l),
        None => Constellation::qam(a.qam),
    };
    let mut results = Vec::new();
    for code in &codes {
        let cb = channel_sim::build_codebook(code, &cons)?;
        let mut cfg = ChannelConfig::new(cb.rows, a.nrx.unwrap_or(cb.rows), a.snr.clone(), a.trials, a.seed);
        cfg.fading = match a.fading {
            FadingArg::Rayleigh => Fading::RayleighBlock,
            FadingArg::Identity => Fading::Identity,
        };
        results.push(channel_sim::run_sweep(&cfg, &cb)?);
    }
    let text = if a.json {
        serde_json::to_string_pretty(&results)? + "\n"
    } else {
        channel_sim::to_csv(&results)?
    };
    match &a.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn nt(q: NtCmd) -> CliResult {
    let v = match q {
        NtCmd::Reldisc { m } => json!({
            "m": m,
            "rel_disc": number_theory::rel_disc_over_qi(m)?,
            "disc": number_theory::disc_biquadratic_over_qi(m)?,
        }),
        NtCmd::H1 { qi_ext, imag } => {
            let kind = match (qi_ext, imag) {
                (Some(m), _) => FieldKind::QiExt(m),
                (None, Some(m)) => FieldKind::ImagQuad(m),
                (None, None) => return Err(Failure::Usage("one of --qi-ext or --imag is required".into())),
            };
            let (label, m) = match kind {
                FieldKind::QiExt(m) => ("qi_ext", m),
                FieldKind::ImagQuad(m) => ("imag", m),
            };
            json!({ "field": label, "m": m, "class_number_one": number_theory::class_number_is_one(kind)? })
        }
        NtCmd::Unitrank { r, s } => json!({ "r": r, "s": s, "unit_rank": number_theory::unit_rank(r, s)? }),
        NtCmd::Field { m } => serde_json::to_value(number_theory::quad_field_info(m)?)?,
    };
    out!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

fn list_presets(show: Option<String>, json: bool) -> CliResult {
    if let Some(name) = show {
        let spec = presets::preset(&name)?;
        out!("{}", spec.to_json());
        return Ok(());
    }
    let all = presets::all_presets();
    if json {
        let v: Vec<_> = all
            .iter()
            .map(|c| json!({"name": c.name, "shape": c.shape, "description": c.description}))
            .collect();
        out!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        for c in all {
            out!("{:<14} {:<4} {}", c.name, c.shape.as_str(), c.description);
        }
    }
    Ok(())
}
