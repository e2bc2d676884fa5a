//! `sumprod`: command-line front end for the sumset/product-set workbench.
//!
//! Exit status is 0 on success, 1 on a usage or input error and 2 when a
//! pipeline stage fails or a certificate does not recheck.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sumprod::cube::{greedy_cube, verify_cube};
use sumprod::harness::{gen_gp, gen_multiplicative_cube, gen_random_integers, run_experiment, ExperimentFile, RunOptions};
use sumprod::pte::{
    pte_polynomial, prouhet_solution, search_pte, taylor_at_one, vanishing_order, verify_lists, PteSolution,
};
use sumprod::setcore::{k_fold_sum_capped, productset, sumset, SetError, DEFAULT_ELEMENT_CAP};
use sumprod::witness::{
    min_gap_block, recheck_detailed, ruzsa_plunnecke_audit_capped, theorem1_certificate_with,
    theorem2_certificate_with, GrowthCertificate, PipelineOptions, Thinning,
};
use sumprod::{FiniteSet, Scalar};

#[derive(Parser)]
#[command(name = "sumprod", version, about = "Exact sumset and product-set experiments with growth certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated set file.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        /// Output file; stdout when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Sumset A + B (B defaults to A).
    Sumset(PairArgs),
    /// Product set A.B (B defaults to A).
    Product(PairArgs),
    /// |A|, |A+A|, |A.A| and the iterated sumsets |hA|, |h(A.A)|.
    Growth {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        h: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Prouhet–Tarry–Escott solutions and their polynomials.
    Pte {
        #[command(subcommand)]
        command: PteCommand,
    },
    /// Greedy multiplicative cube of dimension k.
    Cube {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        k: usize,
        /// Ratio source B; the minimal block for --delta when absent.
        #[arg(long, conflicts_with = "delta")]
        block: Option<PathBuf>,
        #[arg(long, value_parser = parse_scalar)]
        delta: Option<Scalar>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Growth certificate from the cube pipeline.
    Witness1(WitnessArgs),
    /// Growth certificate from the polynomial pipeline.
    Witness2(WitnessArgs),
    /// Check |kA - ℓA| <= (|A+A|/|A|)^(k+ℓ) |A| exactly.
    Audit {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run an experiment file.
    Sweep {
        file: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Omit the timestamp header comment from the CSV.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Re-verify a certificate against its source set.
    Recheck {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        set: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// {a r^i : 0 <= i < n}.
    Gp {
        #[arg(long, value_parser = parse_scalar, default_value = "1")]
        a: Scalar,
        #[arg(long, value_parser = parse_scalar)]
        r: Scalar,
        #[arg(long)]
        n: usize,
    },
    /// {∏ p_i^e_i : 0 <= e_i < d_i}.
    Cube {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
    },
    /// n distinct integers from [lo, hi].
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lo: i64,
        #[arg(long)]
        hi: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    set: PathBuf,
    /// Second operand.
    #[arg(long)]
    with: Option<PathBuf>,
    /// Output set file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PteCommand {
    /// Prouhet solution of degree k, or the smallest solution in [0, range].
    Solve {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        range: Option<u64>,
        /// Largest list size tried by the search.
        #[arg(long, default_value_t = 8)]
        size_cap: usize,
    },
    /// Degree up to which two lists have equal power sums.
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        xs: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        ys: Vec<u64>,
    },
    /// Polynomial, vanishing order at 1 and Taylor coefficients at 1.
    Polynomial {
        /// Use the Prouhet solution of degree k.
        #[arg(long, conflicts_with_all = ["xs", "ys"])]
        k: Option<u32>,
        #[arg(long, value_delimiter = ',', requires = "ys")]
        xs: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',', requires = "xs")]
        ys: Option<Vec<u64>>,
    },
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_scalar)]
    delta: Scalar,
    #[arg(long, value_enum, default_value_t = ThinningArg::StrideThenSeparated)]
    thinning: ThinningArg,
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    cap: usize,
    /// Directory for the certificate file; the certificate goes to stdout
    /// when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThinningArg {
    Stride,
    Separated,
    StrideThenSeparated,
}

impl From<ThinningArg> for Thinning {
    fn from(t: ThinningArg) -> Self {
        match t {
            ThinningArg::Stride => Thinning::Stride,
            ThinningArg::Separated => Thinning::Separated,
            ThinningArg::StrideThenSeparated => Thinning::StrideThenSeparated,
        }
    }
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(anyhow::Error),
    Stage(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> anyhow::Result<FiniteSet> {
    FiniteSet::load(path).with_context(|| format!("reading set file {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_line(fields: &[String]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(fields).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 fields")
}

/// Cap overflows are stage failures; anything else is bad input.
fn set_failure(e: SetError) -> Failure {
    match e {
        SetError::Blowup { .. } => Failure::Stage(e.to_string()),
        other => Failure::Usage(other.into()),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen { family, out } => {
            let set = match family {
                GenFamily::Gp { a, r, n } => gen_gp(&a, &r, n)?,
                GenFamily::Cube { primes, dims } => gen_multiplicative_cube(&primes, &dims)?,
                GenFamily::Random { n, lo, hi, seed } => gen_random_integers(n, lo, hi, seed)?,
            };
            emit(out.as_deref(), &set.to_set_file())?;
        }
        Command::Sumset(args) => pair(args, sumset)?,
        Command::Product(args) => pair(args, productset)?,
        Command::Growth { set, h, cap, format } => growth(&load(&set)?, &h, cap, format)?,
        Command::Pte { command } => pte(command)?,
        Command::Cube { set, k, block, delta, format } => {
            let a = load(&set)?;
            let b = match (block, delta) {
                (Some(p), _) => load(&p)?,
                (None, Some(d)) => min_gap_block(&a, &d).map_err(|e| Failure::Stage(e.to_string()))?.elements,
                (None, None) => return Err(Failure::Usage(anyhow!("cube needs --block or --delta"))),
            };
            let cert = greedy_cube(&a, &b, k).map_err(|e| Failure::Stage(format!("stage cube failed: {e}")))?;
            debug_assert!(verify_cube(&cert, &a));
            match format {
                Format::Json => emit(None, &pretty(&serde_json::to_value(&cert)?))?,
                Format::Csv => {
                    let mut text = csv_line(&["step".into(), "s".into(), "t".into(), "theta".into(), "survivors".into()]);
                    for (i, st) in cert.steps.iter().enumerate() {
                        text.push_str(&csv_line(&[
                            (i + 1).to_string(),
                            st.s.to_string(),
                            st.t.to_string(),
                            st.theta.to_string(),
                            st.survivors.to_string(),
                        ]));
                    }
                    emit(None, &text)?;
                }
            }
        }
        Command::Witness1(args) => witness(args, true)?,
        Command::Witness2(args) => witness(args, false)?,
        Command::Audit { set, k, ell, cap, format } => {
            let a = load(&set)?;
            let r = ruzsa_plunnecke_audit_capped(&a, k, ell, cap).map_err(set_failure)?;
            match format {
                Format::Json => emit(None, &pretty(&serde_json::to_value(&r)?))?,
                Format::Csv => {
                    let head = ["n", "k", "ell", "sumset", "doubling", "combination", "bound", "holds"];
                    let mut text = csv_line(&head.map(String::from));
                    text.push_str(&csv_line(&[
                        r.n.to_string(),
                        r.k.to_string(),
                        r.ell.to_string(),
                        r.sumset_size.to_string(),
                        r.doubling.to_string(),
                        r.combination_size.to_string(),
                        r.bound.to_string(),
                        r.holds.to_string(),
                    ]));
                    emit(None, &text)?;
                }
            }
            if !r.holds {
                return Err(Failure::Stage(format!("audit: |kA - lA| = {} exceeds {}", r.combination_size, r.bound)));
            }
        }
        Command::Sweep { file, out, no_timestamp } => {
            let exp = ExperimentFile::load(&file).with_context(|| format!("loading {}", file.display()))?;
            let base = file.parent().map(Path::to_path_buf).unwrap_or_default();
            let opts = RunOptions { out_dir: out, base_dir: base, timestamp: !no_timestamp };
            let outcome = run_experiment(&exp, &opts)?;
            let failed = outcome.rows.iter().filter(|r| !r.is_ok()).count();
            eprintln!(
                "{} rows ({} failed), {} certificates",
                outcome.rows.len(),
                failed,
                outcome.certificates.len()
            );
            println!("{}", outcome.csv_path.display());
        }
        Command::Recheck { cert, set } => {
            let a = load(&set)?;
            let text = fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let c = GrowthCertificate::from_json(&text).map_err(|e| Failure::Stage(format!("certificate rejected: {e}")))?;
            recheck_detailed(&c, &a).map_err(|e| Failure::Stage(format!("recheck failed: {e}")))?;
            println!("ok: N = {} distinct values in {}A - {}A", c.n(), c.expansion_bound.k_plus, c.expansion_bound.l_minus);
        }
    }
    Ok(())
}

fn pair(args: PairArgs, op: fn(&FiniteSet, &FiniteSet) -> FiniteSet) -> anyhow::Result<()> {
    let a = load(&args.set)?;
    let b = match &args.with {
        Some(p) => load(p)?,
        None => a.clone(),
    };
    emit(args.out.as_deref(), &op(&a, &b).to_set_file())
}

fn growth(a: &FiniteSet, hs: &[usize], cap: usize, format: Format) -> Outcome {
    let aa = productset(a, a);
    let mut h_sum = Vec::new();
    let mut h_prod = Vec::new();
    for &h in hs {
        h_sum.push(k_fold_sum_capped(a, h, cap).map_err(set_failure)?.len());
        h_prod.push(k_fold_sum_capped(&aa, h, cap).map_err(set_failure)?.len());
    }
    let ss = sumset(a, a).len();
    match format {
        Format::Json => emit(
            None,
            &pretty(&json!({
                "n": a.len(), "sumset": ss, "productset": aa.len(),
                "h": hs, "h_sumset": h_sum, "h_productset": h_prod,
            })),
        )?,
        Format::Csv => {
            let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(";");
            let mut text = csv_line(&["n", "sumset", "productset", "h", "h_sumset", "h_productset"].map(String::from));
            text.push_str(&csv_line(&[
                a.len().to_string(),
                ss.to_string(),
                aa.len().to_string(),
                join(hs),
                join(&h_sum),
                join(&h_prod),
            ]));
            emit(None, &text)?;
        }
    }
    Ok(())
}

fn pte(command: PteCommand) -> Outcome {
    match command {
        PteCommand::Solve { k, range: None, .. } => {
            let sol = prouhet_solution(k)?;
            emit(None, &pretty(&serde_json::to_value(&sol)?))?;
        }
        PteCommand::Solve { k, range: Some(range), size_cap } => {
            let found = search_pte(k, range, size_cap)?;
            match found.solution {
                Some(sol) => emit(None, &pretty(&serde_json::to_value(&sol)?))?,
                None if found.budget_exhausted => {
                    return Err(Failure::Stage(format!(
                        "search budget exhausted after {} subsets",
                        found.subsets_examined
                    )))
                }
                None => return Err(Failure::Stage(format!("no solution of degree {k} in [0, {range}] up to size {size_cap}"))),
            }
        }
        PteCommand::Verify { xs, ys } => {
            let degree = verify_lists(&xs, &ys)?;
            emit(None, &pretty(&json!({ "degree": degree })))?;
        }
        PteCommand::Polynomial { k, xs, ys } => {
            let sol = match (k, xs, ys) {
                (Some(k), _, _) => prouhet_solution(k)?,
                (None, Some(xs), Some(ys)) => PteSolution::new(xs, ys)?,
                _ => return Err(Failure::Usage(anyhow!("polynomial needs --k or both --xs and --ys"))),
            };
            let f = pte_polynomial(&sol);
            let order = vanishing_order(&f)?;
            let taylor = taylor_at_one(&f)?;
            emit(
                None,
                &pretty(&json!({
                    "polynomial": f.to_string(),
                    "coefficients": f,
                    "degree_k": sol.degree_k,
                    "vanishing_order": order,
                    "taylor_at_one": taylor,
                })),
            )?;
        }
    }
    Ok(())
}

fn witness(args: WitnessArgs, cube: bool) -> Outcome {
    let a = load(&args.set)?;
    let opts = PipelineOptions {
        thinning: args.thinning.into(),
        caps: sumprod::setcore::Caps::new(args.cap),
        ..PipelineOptions::default()
    };
    let result = if cube {
        theorem1_certificate_with(&a, args.k, &args.delta, &opts)
    } else {
        theorem2_certificate_with(&a, args.k, &args.delta, &opts)
    };
    let cert = result.map_err(|e| Failure::Stage(e.to_string()))?;
    let json = cert.to_json();
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let stem = args.set.file_stem().and_then(|s| s.to_str()).unwrap_or("set");
        let name = format!("{stem}-{}-k{}.json", if cube { "witness1" } else { "witness2" }, args.k);
        let path = dir.join(name);
        fs::write(&path, &json).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    match args.format {
        Format::Json if args.out.is_none() => emit(None, &json)?,
        Format::Json => emit(
            None,
            &pretty(&json!({
                "n": cert.n(), "k": cert.expansion_bound.k_plus, "l": cert.expansion_bound.l_minus,
                "content_hash": cert.content_hash(),
            })),
        )?,
        Format::Csv => {
            let mut text = csv_line(&["n", "k_plus", "l_minus", "branch", "content_hash"].map(String::from));
            text.push_str(&csv_line(&[
                cert.n().to_string(),
                cert.expansion_bound.k_plus.to_string(),
                cert.expansion_bound.l_minus.to_string(),
                serde_json::to_value(cert.branch)?.as_str().unwrap_or_default().to_string(),
                cert.content_hash(),
            ]));
            emit(None, &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Stage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
