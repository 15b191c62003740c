use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use padset::format::{
    function_from_json, function_to_json, partition_from_json, partition_to_json, set_from_json,
    set_to_json,
};
use padset::gss::{
    construct_gss, experiment_scaling_implies_gss, generate_family, verify_gss,
    verify_multiwavelet_set, FamilyKind,
};
use padset::padic::format_rational;
use padset::report::{render_report, Format};
use padset::scaling::{
    count_integers_report, extract_filter, verify_scaling_set, verify_translate_identity, FilterStatus,
};
use padset::{Check, ClopenSet, Direction, Error, LCFunction, Limits, Prime, VerificationReport, Verdict, Witness};

#[derive(Parser)]
#[command(name = "padset", version, about = "Exact certificates for p-adic scaling, wavelet and generalized scaling sets")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Prime; must match the prime of every input file
    #[arg(long, global = true)]
    p: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Check a set against the necessary conditions of a structure
    Verify {
        #[arg(value_enum)]
        subject: VerifySubject,
        #[arg(long, short = 'i')]
        input: PathBuf,
        /// Order L of a generalized scaling set
        #[arg(long = "order", short = 'L')]
        order: Option<u64>,
        /// Explicit split of p⁻¹G ∖ G into unit-measure pieces
        #[arg(long)]
        partition: Option<PathBuf>,
        /// For scaling sets: also solve for the filter and check the
        /// translate identity with translations |a|_p <= p^K
        #[arg(long = "bound", short = 'K')]
        bound: Option<u32>,
    },
    /// Build G_J from multiwavelet pieces
    Construct {
        #[arg(value_enum)]
        subject: ConstructSubject,
        /// Partition file holding the pieces of W
        #[arg(long, short = 'i')]
        input: PathBuf,
        #[arg(long = "depth", short = 'J')]
        depth: u32,
    },
    /// Emit a known family and verify it
    Generate {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Fourier transform of a function
    Fourier {
        #[arg(long, short = 'i')]
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Exact inner product of two functions
    Inner {
        #[arg(long, short = 'i', num_args = 2, required = true)]
        input: Vec<PathBuf>,
    },
    /// Count integers n < p^{M+N} with p^{-M} n in a set
    CountIntegers {
        #[arg(long, short = 'i')]
        input: PathBuf,
        #[arg(long = "M")]
        m: i64,
        #[arg(long = "N")]
        n: i64,
        /// Filter degree, compared against ⌈deg/(p−1)⌉
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Run verifiers side by side without asserting a theorem
    Experiment {
        #[arg(value_enum)]
        name: ExperimentName,
        #[arg(long, short = 'i')]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifySubject {
    Scaling,
    Wavelet,
    Gss,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructSubject {
    Gss,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Kozyrev,
    KhrennikovShelkovich,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    ScalingImpliesGss,
}

/// What a command produced: text and JSON renderings plus the verdict that
/// decides the exit status.
struct Outcome {
    text: String,
    json: Value,
    verdict: Verdict,
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass | Verdict::CertifiedNecessary => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 2,
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::ResolutionLimit(_) | Error::Inconsistent(_) => 2,
        _ => 3,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: Result<T, Error>) -> Result<T, Error> {
    r.map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn check_prime(expected: Option<u64>, actual: Prime, path: &Path) -> Result<(), Error> {
    match expected {
        Some(p) if p != actual.get() => Err(Error::InvalidInput(format!(
            "{}: file uses p = {actual}, but --p {p} was given",
            path.display()
        ))),
        _ => Ok(()),
    }
}

fn load_set(path: &Path, p: Option<u64>) -> Result<ClopenSet, Error> {
    let s = with_path(path, set_from_json(&read(path)?))?;
    check_prime(p, s.prime(), path)?;
    Ok(s)
}

fn load_function(path: &Path, p: Option<u64>) -> Result<LCFunction, Error> {
    let f = with_path(path, function_from_json(&read(path)?))?;
    check_prime(p, f.prime(), path)?;
    Ok(f)
}

/// A partition file, or a set file read as a single piece.
fn load_pieces(path: &Path, p: Option<u64>) -> Result<Vec<ClopenSet>, Error> {
    let text = read(path)?;
    let pieces = match partition_from_json(&text) {
        Ok(pieces) => pieces,
        Err(_) => vec![with_path(path, set_from_json(&text))?],
    };
    for s in &pieces {
        check_prime(p, s.prime(), path)?;
    }
    Ok(pieces)
}

fn report_outcome(r: VerificationReport) -> Outcome {
    Outcome {
        text: render_report(&r, Format::Text),
        json: serde_json::to_value(&r).expect("report serializes"),
        verdict: r.verdict,
    }
}

fn json_of(s: &str) -> Value {
    serde_json::from_str(s).expect("own output parses")
}

/// Appends the filter realization and the translate identity at `b = 0`.
fn with_filter_checks(
    report: VerificationReport,
    s: &ClopenSet,
    bound: u32,
    limits: &Limits,
) -> Result<VerificationReport, Error> {
    const FILTER: &str = "m₀ = 1 on pS, m₀ = 0 on S ∖ pS";
    let mut checks = report.checks;
    match extract_filter(s, bound, limits) {
        Ok(f) if f.status == FilterStatus::Realized => {
            let alphas: Vec<String> = f
                .coefficients
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(a, c)| format!("α_{a} = {c}"))
                .collect();
            checks.push(
                Check::pass("filter", FILTER, Witness::integer(alphas.len())).with_detail(alphas.join(", ")),
            );
        }
        Ok(_) => checks.push(Check::inconclusive(
            "filter",
            FILTER,
            Witness::integer(bound),
            format!("no character sum with |a|_p <= p^{bound}"),
        )),
        Err(Error::Precondition { reason, witness }) => {
            checks.push(Check::fail("filter", FILTER, Witness::Point { value: witness }, reason));
        }
        Err(e) => return Err(e),
    }
    if !s.is_empty() {
        let zero = padset::PAdicRational::zero(s.prime());
        let t = verify_translate_identity(s, &zero, bound, limits)?;
        checks.extend(t.checks);
    }
    Ok(VerificationReport::from_checks(checks, Verdict::CertifiedNecessary))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let limits = Limits::from_env()?;
    let p = cli.p;
    if let Some(p) = p {
        Prime::new(p)?;
    }
    match &cli.verb {
        Verb::Verify { subject, input, order, partition, bound } => match subject {
            VerifySubject::Scaling => {
                let s = load_set(input, p)?;
                let mut report = verify_scaling_set(&s, &limits);
                if let Some(k) = bound {
                    report = with_filter_checks(report, &s, *k, &limits)?;
                }
                Ok(report_outcome(report))
            }
            VerifySubject::Wavelet => {
                let pieces = load_pieces(input, p)?;
                Ok(report_outcome(verify_multiwavelet_set(&pieces, &limits)?))
            }
            VerifySubject::Gss => {
                let g = load_set(input, p)?;
                let order = order.ok_or_else(|| Error::InvalidInput("verify gss requires --order".into()))?;
                if order == 0 {
                    return Err(Error::InvalidInput("--order must be at least 1".into()));
                }
                let parts = partition.as_deref().map(|path| load_pieces(path, Some(g.prime().get()))).transpose()?;
                Ok(report_outcome(verify_gss(&g, order, parts.as_deref(), &limits)?))
            }
        },
        Verb::Construct { subject: ConstructSubject::Gss, input, depth } => {
            let pieces = load_pieces(input, p)?;
            let (g, tail) = construct_gss(&pieces, *depth)?;
            let tail_s = format_rational(&tail);
            Ok(Outcome {
                text: format!("G_{depth} = {g}\nmeasure = {}\ntail = {tail_s}\n", format_rational(&g.measure())),
                json: json!({
                    "depth": depth,
                    "g": json_of(&set_to_json(&g)),
                    "measure": format_rational(&g.measure()),
                    "tail": tail_s,
                }),
                verdict: Verdict::Pass,
            })
        }
        Verb::Generate { family, m } => {
            let p = Prime::new(p.ok_or_else(|| Error::InvalidInput("generate requires --p".into()))?)?;
            let (kind, name) = match family {
                FamilyArg::Kozyrev => (FamilyKind::Kozyrev, "kozyrev"),
                FamilyArg::KhrennikovShelkovich => (FamilyKind::KhrennikovShelkovich, "khrennikov-shelkovich"),
            };
            let fam = generate_family(kind, p, *m)?;
            let report = verify_gss(&fam.g, fam.order, Some(&fam.pieces), &limits)?;
            let mut text = format!("family: {name}\np = {p}\nL = {}\nG = {}\n", fam.order, fam.g);
            for (i, piece) in fam.pieces.iter().enumerate() {
                text.push_str(&format!("W_{i} = {piece}\n"));
            }
            text.push_str(&render_report(&report, Format::Text));
            Ok(Outcome {
                text,
                json: json!({
                    "family": name,
                    "p": p.get(),
                    "order": fam.order,
                    "g": json_of(&set_to_json(&fam.g)),
                    "pieces": json_of(&partition_to_json(&fam.pieces)?)["pieces"],
                    "report": serde_json::to_value(&report).expect("serializes"),
                }),
                verdict: report.verdict,
            })
        }
        Verb::Fourier { input, inverse } => {
            let f = load_function(input, p)?;
            let dir = if *inverse { Direction::Inverse } else { Direction::Forward };
            let g = f.fourier(dir);
            let js = function_to_json(&g);
            Ok(Outcome { text: format!("{g}\n{js}\n"), json: json_of(&js), verdict: Verdict::Pass })
        }
        Verb::Inner { input } => {
            let f = load_function(&input[0], p)?;
            let g = load_function(&input[1], Some(f.prime().get()))?;
            let v = f.inner_product(&g)?;
            let w = Witness::value(&v);
            Ok(Outcome { text: format!("{w}\n"), json: serde_json::to_value(&w).expect("serializes"), verdict: Verdict::Pass })
        }
        Verb::CountIntegers { input, m, n, degree, .. } => {
            let s = load_set(input, p)?;
            let (count, report) = count_integers_report(&s, *m, *n, *degree, &limits)?;
            Ok(Outcome {
                text: format!("{count}\n{}", render_report(&report, Format::Text)),
                json: json!({
                    "count": count,
                    "report": serde_json::to_value(&report).expect("serializes"),
                }),
                verdict: report.verdict,
            })
        }
        Verb::Experiment { name: ExperimentName::ScalingImpliesGss, input } => {
            let s = load_set(input, p)?;
            let e = experiment_scaling_implies_gss(&s, &limits)?;
            let mut text = format!("scaling set:\n{}", render_report(&e.scaling, Format::Text));
            for (l, r) in &e.gss {
                text.push_str(&format!("generalized scaling set, L = {l}:\n{}", render_report(r, Format::Text)));
            }
            text.push_str(&format!("outcome: {}\n", e.outcome().label()));
            Ok(Outcome {
                text,
                json: json!({
                    "scaling": serde_json::to_value(&e.scaling).expect("serializes"),
                    "gss": e.gss.iter().map(|(l, r)| json!({"order": l, "report": r})).collect::<Vec<_>>(),
                    "outcome": e.outcome(),
                }),
                verdict: e.outcome(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                OutputFormat::Text => print!("{}", out.text),
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializes")),
            }
            ExitCode::from(exit_code(out.verdict))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
