use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use pdakit::construct::{
    construct_pm, construct_pmt, g2_base_pda, mn_pda, transform_to_base, transpose_pda,
    BuildOptions, ConstructError, DEFAULT_CELL_BUDGET,
};
use pdakit::io::{read_any, PdaDocument, Provenance};
use pdakit::schemes::{
    baseline_params, compare_ratios, decimal, scheme_build, BaselineSpec, SchemeError, SchemeParams,
};
use pdakit::sim::{
    deliver, place, sweep_demands, FileLibrary, SimError, SweepMode, DEFAULT_DEMAND_BUDGET,
    DEFAULT_PACKET_BYTES,
};
use pdakit::{verify_base_pda, verify_pda, PdaArray, PdaError};

#[derive(Parser)]
#[command(name = "pdakit", version, about = "Build, check and simulate placement delivery arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an array and write it as a JSON document.
    Construct(ConstructArgs),
    /// Check an array file; exits 1 on the first violation.
    Verify(VerifyArgs),
    /// Run placement and delivery on synthetic files.
    Simulate(SimulateArgs),
    /// Print the closed-form parameters of one scheme.
    Params(ParamsArgs),
    /// Evaluate every scheme listed in a spec file as CSV.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    A,
    B,
    C,
    Pm,
    Pmt,
    Mn,
    G2,
    Transform,
}

#[derive(clap::Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    scheme: Kind,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    z: Option<usize>,
    /// Base array for pm/pmt, or the array to transform.
    #[arg(long)]
    base: Option<PathBuf>,
    /// Period of the base; defaults to the value stored in the base file, else 1.
    #[arg(long)]
    lambda: Option<usize>,
    /// Use the transposed MN array (mn and transform).
    #[arg(long)]
    transpose: bool,
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    budget: usize,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Also check the base conditions and print the star-row assignment.
    #[arg(long)]
    base: bool,
    #[arg(long)]
    lambda: Option<usize>,
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["demand", "exhaustive", "sample"])))]
struct SimulateArgs {
    file: PathBuf,
    #[arg(long)]
    files: usize,
    /// Comma-separated 1-based file index per user.
    #[arg(long, value_delimiter = ',')]
    demand: Option<Vec<usize>>,
    #[arg(long)]
    exhaustive: bool,
    /// Number of random demand vectors.
    #[arg(long)]
    sample: Option<usize>,
    /// Seed for demand sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seed for file contents.
    #[arg(long, default_value_t = 0)]
    library_seed: u64,
    #[arg(long, default_value_t = DEFAULT_PACKET_BYTES)]
    packet_bytes: usize,
    #[arg(long, default_value_t = DEFAULT_DEMAND_BUDGET)]
    budget: u64,
    /// Write the single-demand transcript as JSON lines.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(clap::Args)]
struct ParamsArgs {
    /// One of mn, grouping, wclc, wcwc, ytcc, cksm1, cksm2, a, b, c.
    #[arg(long)]
    scheme: String,
    #[arg(long, value_delimiter = ',', required = true)]
    args: Vec<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(clap::Args)]
struct CompareArgs {
    /// Lines of `series scheme args`; an argument may be an inclusive range `lo..hi`.
    #[arg(long)]
    specs: PathBuf,
    /// Emit ratios against the matched WCLC instance for the a/b/c rows instead.
    #[arg(long)]
    ratios: bool,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

/// Marks a failed check so it maps to exit code 1.
#[derive(Debug)]
struct Violation(String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Violation>() || cause.is::<PdaError>() {
            return 1;
        }
        let construct = cause
            .downcast_ref::<ConstructError>()
            .or_else(|| match cause.downcast_ref::<SchemeError>() {
                Some(SchemeError::Construct(e)) => Some(e),
                _ => None,
            });
        match construct {
            Some(ConstructError::CellBudgetExceeded { .. }) => return 3,
            Some(ConstructError::VerificationFailed(_)) | Some(ConstructError::Pda(_)) => return 1,
            _ => {}
        }
        match cause.downcast_ref::<SimError>() {
            Some(SimError::BudgetExceeded { .. }) => return 3,
            Some(SimError::DecodeFailure { .. }) => return 1,
            _ => {}
        }
        if let Some(SchemeError::Mismatch(_)) = cause.downcast_ref::<SchemeError>() {
            return 1;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Simulate(a) => simulate(a),
        Command::Params(a) => params(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn read_doc(path: &Path) -> Result<PdaDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_any(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing output"),
    }
}

fn need(value: Option<usize>, flag: &str, kind: Kind) -> Result<usize> {
    value.ok_or_else(|| anyhow!("--{flag} is required for --scheme {kind:?}").context("usage"))
}

fn construct(a: ConstructArgs) -> Result<()> {
    let opts = BuildOptions { cell_budget: a.budget, verify: true };
    let mut prov: Vec<(&str, String)> = Vec::new();
    for (name, v) in [("m", a.m), ("t", a.t), ("q", a.q), ("z", a.z), ("lambda", a.lambda)] {
        if let Some(v) = v {
            prov.push((name, v.to_string()));
        }
    }
    if let Some(b) = &a.base {
        prov.push(("base", b.display().to_string()));
    }
    if a.transpose {
        prov.push(("transpose", "true".into()));
    }
    let kind = a.scheme;
    let name = format!("{kind:?}").to_lowercase();
    let provenance = Some(Provenance::new(&name, prov));

    let load_base = || -> Result<pdakit::BasePda> {
        let path = a.base.as_deref().ok_or_else(|| anyhow!("--base is required for --scheme {name}"))?;
        let doc = read_doc(path)?;
        let lambda = a.lambda.or(doc.base.as_ref().map(|b| b.lambda)).unwrap_or(1);
        Ok(verify_base_pda(&doc.to_array()?, lambda)?)
    };
    let mn_source = || -> Result<PdaArray> {
        let mn = mn_pda(need(a.q, "q", kind)?, need(a.z, "z", kind)?)?;
        Ok(if a.transpose { transpose_pda(&mn)? } else { mn })
    };

    let doc = match kind {
        Kind::A | Kind::B | Kind::C => {
            let (m, t, q) = (need(a.m, "m", kind)?, need(a.t, "t", kind)?, need(a.q, "q", kind)?);
            let spec = match kind {
                Kind::A => BaselineSpec::SchemeA { m: m as u64, t: t as u64, q: q as u64, z: need(a.z, "z", kind)? as u64 },
                Kind::B => BaselineSpec::SchemeB { m: m as u64, t: t as u64, q: q as u64, z: need(a.z, "z", kind)? as u64 },
                _ => BaselineSpec::SchemeC { m: m as u64, t: t as u64, q: q as u64 },
            };
            PdaDocument::from_array(&scheme_build(&spec, opts)?, provenance)
        }
        Kind::Pm => PdaDocument::from_array(&construct_pm(&load_base()?, need(a.m, "m", kind)?, opts)?, provenance),
        Kind::Pmt => {
            let base = load_base()?;
            PdaDocument::from_array(&construct_pmt(&base, need(a.m, "m", kind)?, need(a.t, "t", kind)?, opts)?, provenance)
        }
        Kind::Mn => PdaDocument::from_array(&mn_source()?, provenance),
        Kind::G2 => PdaDocument::from_base(&g2_base_pda(need(a.q, "q", kind)?)?, provenance),
        Kind::Transform => {
            let source = match &a.base {
                Some(path) => read_doc(path)?.to_array()?,
                None => mn_source()?,
            };
            PdaDocument::from_base(&transform_to_base(&source)?, provenance)
        }
    };
    write_out(a.out.as_deref(), &doc.to_json())
}

fn describe(p: &pdakit::PdaParams) -> String {
    let g = p.regular_g.map_or("irregular".to_string(), |g| format!("g={g}"));
    format!("K={} F={} Z={} S={} {g}", p.k, p.f, p.z, p.s)
}

fn verify(a: VerifyArgs) -> Result<()> {
    let doc = read_doc(&a.file)?;
    let array = doc.to_array()?;
    if a.base || a.lambda.is_some() {
        let lambda = a.lambda.or(doc.base.as_ref().map(|b| b.lambda)).unwrap_or(1);
        let base = verify_base_pda(&array, lambda)?;
        println!("{}", describe(&base.params()));
        println!("base lambda={lambda}");
        let phi: Vec<String> = base.phi().iter().enumerate().map(|(s, r)| format!("{}->{}", s + 1, r + 1)).collect();
        println!("phi {}", phi.join(" "));
    } else {
        println!("{}", describe(&verify_pda(&array)?));
    }
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let array = read_doc(&a.file)?.to_array()?;
    let params = verify_pda(&array)?;
    let library = FileLibrary::new(a.files, array.rows(), a.packet_bytes, a.library_seed);
    let caches = place(&array, &library)?;
    let cached: Vec<usize> = caches.iter().map(|c| c.len()).collect();
    println!(
        "users={} packets={} files={} cached_per_user={}",
        params.k,
        params.f,
        a.files,
        cached.first().copied().unwrap_or(0)
    );
    if let Some(demand) = &a.demand {
        let t = deliver(&array, &library, &caches, demand)?;
        let ok = t.decoded.iter().filter(|&&d| d).count();
        println!("messages={} decoded={ok}/{} load={} measured={}", t.messages.len(), t.decoded.len(), t.load, t.measured_load());
        if let Some(path) = &a.transcript {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            t.write_jsonl(std::io::BufWriter::new(file))?;
        }
        if !t.all_decoded() {
            return Err(Violation(format!("{} users failed to decode", t.decoded.len() - ok)).into());
        }
        return Ok(());
    }
    let mode = match a.sample {
        Some(count) => SweepMode::Sampled { count, seed: a.seed },
        None => SweepMode::Exhaustive { budget: a.budget },
    };
    let s = sweep_demands(&array, &library, &caches, mode)?;
    println!("demands={} all_decoded={} max_load={} mean_load={}", s.demands, s.all_decoded, s.max_load, s.mean_load);
    if !s.all_ok() {
        return Err(Violation(format!("{} demands had decoding failures", s.demands - s.all_decoded)).into());
    }
    Ok(())
}

fn rat_int(x: &num_bigint::BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// `(name, exact, decimal)` for K, M/N, F, R, g.
fn fields(p: &SchemeParams) -> Vec<(&'static str, String, String)> {
    let mut out = vec![
        ("K", p.users.to_string(), decimal(&rat_int(&p.users), 6)),
        ("M/N", p.memory_ratio.to_string(), decimal(&p.memory_ratio, 6)),
        ("F", p.subpacketization.to_string(), decimal(&rat_int(&p.subpacketization), 6)),
        ("R", p.load.to_string(), decimal(&p.load, 6)),
    ];
    match &p.gain {
        Some(g) => out.push(("g", g.to_string(), decimal(g, 6))),
        None => out.push(("g", "undefined".into(), "undefined".into())),
    }
    out
}

const CSV_HEADER: &str = "series,scheme,args,K,M/N,M/N_decimal,F,F_decimal,R,R_decimal,g";

fn csv_row(series: &str, spec: &BaselineSpec, p: &SchemeParams) -> String {
    let args: Vec<String> = spec.args().iter().map(u64::to_string).collect();
    let f = fields(p);
    format!(
        "{series},{},\"{}\",{},{},{},{},{},{},{},{}",
        spec.name(),
        args.join(","),
        f[0].1,
        f[1].1,
        f[1].2,
        f[2].1,
        f[2].2,
        f[3].1,
        f[3].2,
        f[4].1
    )
}

fn params(a: ParamsArgs) -> Result<()> {
    let spec = BaselineSpec::from_args(&a.scheme, &a.args)?;
    let p = baseline_params(&spec)?;
    let text = match a.format {
        Format::Table => {
            let mut s = format!("{spec}\n");
            for (name, exact, dec) in fields(&p) {
                s.push_str(&format!("{name:<4} {exact:<24} {dec}\n"));
            }
            s
        }
        Format::Csv => format!("{CSV_HEADER}\n{}\n", csv_row("", &spec, &p)),
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("scheme".into(), spec.name().into());
            obj.insert("args".into(), spec.args().into());
            for (name, exact, dec) in fields(&p) {
                obj.insert(name.into(), serde_json::json!({ "exact": exact, "decimal": dec }));
            }
            format!("{}\n", serde_json::to_string_pretty(&obj)?)
        }
    };
    write_out(None, &text)
}

/// Expands one argument list, where any entry may be an inclusive range.
fn expand_args(text: &str) -> Result<(Vec<Vec<u64>>, bool)> {
    let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
    let mut ranged = false;
    for tok in text.split(',') {
        let tok = tok.trim();
        let values: Vec<u64> = match tok.split_once("..") {
            Some((lo, hi)) => {
                ranged = true;
                let (lo, hi): (u64, u64) = (lo.parse()?, hi.parse()?);
                if lo > hi {
                    bail!("empty range {tok}");
                }
                (lo..=hi).collect()
            }
            None => vec![tok.parse().with_context(|| format!("bad argument {tok:?}"))?],
        };
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |&v| {
                    let mut c = c.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    Ok((combos, ranged))
}

fn compare(a: CompareArgs) -> Result<()> {
    let text = fs::read_to_string(&a.specs).with_context(|| format!("reading {}", a.specs.display()))?;
    let mut out = String::new();
    out.push_str(if a.ratios {
        "series,scheme,args,baseline,F_ratio,F_ratio_decimal,R_ratio,R_ratio_decimal,same_K,same_M/N\n"
    } else {
        ""
    });
    if !a.ratios {
        out.push_str(CSV_HEADER);
        out.push('\n');
    }
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ctx = || format!("{}:{}", a.specs.display(), idx + 1);
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [series, scheme, args] = parts[..] else {
            bail!("{}: expected `series scheme args`", ctx());
        };
        let (combos, ranged) = expand_args(args).with_context(ctx)?;
        for combo in combos {
            let spec = match BaselineSpec::from_args(scheme, &combo) {
                Ok(s) => s,
                Err(e) => return Err(anyhow::Error::new(e).context(ctx())),
            };
            if a.ratios {
                if !matches!(spec, BaselineSpec::SchemeA { .. } | BaselineSpec::SchemeB { .. } | BaselineSpec::SchemeC { .. }) {
                    continue;
                }
                match compare_ratios(&spec) {
                    Ok(r) => {
                        let args: Vec<String> = spec.args().iter().map(u64::to_string).collect();
                        out.push_str(&format!(
                            "{series},{},\"{}\",\"{}\",{},{},{},{},{},{}\n",
                            spec.name(),
                            args.join(","),
                            r.baseline,
                            r.subpacketization_ratio,
                            decimal(&r.subpacketization_ratio, 6),
                            r.load_ratio,
                            decimal(&r.load_ratio, 6),
                            r.same_users,
                            r.same_memory
                        ));
                    }
                    Err(SchemeError::InvalidRange(_)) if ranged => {}
                    Err(e) => return Err(anyhow::Error::new(e).context(ctx())),
                }
                continue;
            }
            match baseline_params(&spec) {
                Ok(p) => {
                    out.push_str(&csv_row(series, &spec, &p));
                    out.push('\n');
                }
                Err(SchemeError::InvalidRange(_)) if ranged => {}
                Err(e) => return Err(anyhow::Error::new(e).context(ctx())),
            }
        }
    }
    write_out(a.out.as_deref(), &out)
}
