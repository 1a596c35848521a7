use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use posiflag::dynamics::{limit_convergence, power_positivity_threshold, DEFAULT_CAP};
use posiflag::flags::{transverse, Flag};
use posiflag::format;
use posiflag::positivity::{tp_oracle, tp_staged, PositivityVerdict};
use posiflag::reps::{barbot_flag, barbot_matrix, barbot_spec, pascal, sym_power, veronese_flag, ProjectivePoint};
use posiflag::samples::{barbot_sample, random_points, veronese_sample};
use posiflag::tuples::{check_sampled_positivity, is_positive_tuple_chain, is_positive_tuple_quad, SampleOutcome};
use posiflag::{bench, Error};

#[derive(Parser, Debug)]
#[command(name = "posiflag", version, about = "Exact total positivity and flag positivity toolkit")]
struct Cli {
    /// Report style for verdicts.
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Seed for generated inputs.
    #[arg(long, global = true, env = "POSIFLAG_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TpMethod {
    Staged,
    Oracle,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TpEmit {
    Verdict,
    Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TupleMethod {
    Chain,
    Quad,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BarbotEmit {
    Basis,
    Matrix,
    Flags,
    Sample,
    Spec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VeroneseEmit {
    Flags,
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LimitEmit {
    Series,
    Summary,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide total positivity of a unipotent upper-triangular matrix.
    TpCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = TpMethod::Both)]
        method: TpMethod,
        /// `witness` prints `k;I;J;value` per method.
        #[arg(long, value_enum, default_value_t = TpEmit::Verdict)]
        emit: TpEmit,
    },
    /// Decide positivity of a tuple of flags.
    TupleCheck {
        #[arg(long)]
        flags: PathBuf,
        #[arg(long, value_enum, default_value_t = TupleMethod::Chain)]
        method: TupleMethod,
    },
    /// Check that one positive triple forces all quadruples of a sample to be positive.
    MapCheck {
        #[arg(long)]
        sample: PathBuf,
    },
    /// Test transversality of one pair of flags, or of every pair.
    FlagsTransverse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Option<Vec<usize>>,
    },
    /// Print the upper-triangular Pascal matrix.
    Pascal {
        #[arg(long)]
        d: usize,
    },
    /// Print the d-dimensional irreducible image of a 2x2 matrix.
    SymPower {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        g: PathBuf,
    },
    /// Barbot representation objects in the interleaved basis.
    Barbot {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, value_enum)]
        emit: BarbotEmit,
        /// Required for `--emit matrix`.
        #[arg(long)]
        g: Option<PathBuf>,
        /// Points for `flags` and `sample`; seeded random points otherwise.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Number of seeded random points when `--points` is absent.
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Veronese flags at points of the projective line.
    Veronese {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, value_enum, default_value_t = VeroneseEmit::Flags)]
        emit: VeroneseEmit,
    },
    /// Least t with (F, u^t G, G) positive, F the flag fixed by u.
    Threshold {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        flag: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Distance from the SVD flag of τ(g^n) to the attracting Barbot flag.
    LimitDemo {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value_t = 50)]
        iters: u64,
        #[arg(long, value_enum, default_value_t = LimitEmit::Series)]
        emit: LimitEmit,
    },
    /// Evaluation counts of the staged and oracle tests on seeded inputs.
    Bench {
        #[arg(long, default_value_t = 3)]
        d_min: usize,
        #[arg(long, default_value_t = 10)]
        d_max: usize,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

enum Failure {
    Error(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(..) => 2,
            Failure::Error(e) => match e {
                Error::Parse(_)
                | Error::BadParameters(_)
                | Error::IndexOutOfRange { .. }
                | Error::InvalidIndex(_)
                | Error::NotSquare { .. }
                | Error::DimensionMismatch(..) => 2,
                Error::CapExceeded(_) => 4,
                _ => 3,
            },
        }
    }
}

/// Standard output and the affirmative/negative verdict.
struct Report {
    out: String,
    affirmative: bool,
}

impl Report {
    fn success(out: String) -> Self {
        Report { out, affirmative: true }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn witness_text(v: &PositivityVerdict) -> String {
    v.witness.as_ref().map_or("-".into(), |w| w.to_string())
}

fn verdict_line(out: &mut String, fmt: OutputFormat, record: &str, v: &PositivityVerdict) {
    match fmt {
        OutputFormat::Machine => writeln!(
            out,
            "record={record} method={} status={} evaluations={} witness={}",
            v.method,
            v.status,
            v.evaluations,
            witness_text(v)
        ),
        OutputFormat::Text => match &v.witness {
            Some(w) => writeln!(out, "{}: {} (witness {w}, {} evaluations)", v.method, v.status, v.evaluations),
            None => writeln!(out, "{}: {} ({} evaluations)", v.method, v.status, v.evaluations),
        },
    }
    .unwrap();
}

fn tp_check(fmt: OutputFormat, input: &Path, method: TpMethod, emit: TpEmit) -> Result<Report, Failure> {
    let u = format::parse_matrix(&read(input)?)?;
    let mut verdicts = Vec::new();
    if method != TpMethod::Oracle {
        verdicts.push(tp_staged(&u)?);
    }
    if method != TpMethod::Staged {
        verdicts.push(tp_oracle(&u)?);
    }
    let mut out = String::new();
    for v in &verdicts {
        match emit {
            TpEmit::Witness if verdicts.len() == 1 => writeln!(out, "{}", witness_text(v)).unwrap(),
            TpEmit::Witness => writeln!(out, "{} {}", v.method, witness_text(v)).unwrap(),
            TpEmit::Verdict => verdict_line(&mut out, fmt, "tp-check", v),
        }
    }
    if verdicts.windows(2).any(|w| w[0].status != w[1].status) {
        eprintln!("warning: methods disagree");
    }
    Ok(Report { out, affirmative: verdicts.iter().all(PositivityVerdict::is_positive) })
}

fn tuple_check(fmt: OutputFormat, path: &Path, method: TupleMethod) -> Result<Report, Failure> {
    let flags = format::parse_flags(&read(path)?)?;
    let mut out = String::new();
    let mut affirmative = true;
    if method != TupleMethod::Quad {
        let (v, cert) = is_positive_tuple_chain(&flags)?;
        affirmative &= v.is_positive();
        match fmt {
            OutputFormat::Machine => {
                writeln!(
                    out,
                    "record=tuple-check method=chain status={} evaluations={} witness={}",
                    v.status,
                    v.evaluations,
                    witness_text(&v)
                )
                .unwrap();
                for (i, f) in cert.verdicts.iter().enumerate() {
                    writeln!(
                        out,
                        "record=tuple-factor index={} status={} witness={}",
                        i + 2,
                        f.status,
                        witness_text(f)
                    )
                    .unwrap();
                }
                for (i, j) in &cert.nontransverse_pairs {
                    writeln!(out, "record=nontransverse pair={i},{j}").unwrap();
                }
            }
            OutputFormat::Text => {
                writeln!(out, "chain: {} ({} evaluations)", v.status, v.evaluations).unwrap();
                writeln!(out, "  signs {:?}", cert.signs).unwrap();
                for (i, f) in cert.verdicts.iter().enumerate() {
                    writeln!(out, "  u_{}: {} witness {}", i + 2, f.status, witness_text(f)).unwrap();
                }
                for (i, j) in &cert.nontransverse_pairs {
                    writeln!(out, "  flags {i} and {j} are not transverse").unwrap();
                }
            }
        }
    }
    if method != TupleMethod::Chain {
        let v = is_positive_tuple_quad(&flags)?;
        affirmative &= v.is_positive();
        match fmt {
            OutputFormat::Machine => writeln!(
                out,
                "record=tuple-check method=quad status={} evaluations={} witness={}",
                v.status,
                v.evaluations,
                witness_text(&v)
            )
            .unwrap(),
            OutputFormat::Text => writeln!(out, "quad: {} ({} evaluations)", v.status, v.evaluations).unwrap(),
        }
    }
    Ok(Report { out, affirmative })
}

fn indices(x: Option<[usize; 3]>) -> String {
    x.map_or("-".into(), |a| a.map(|i| i.to_string()).join(","))
}

fn map_check(fmt: OutputFormat, path: &Path) -> Result<Report, Failure> {
    let sample = format::parse_sample(&read(path)?)?;
    let r = check_sampled_positivity(&sample)?;
    let counterexample = r.counterexample.map_or("-".into(), |a| a.map(|i| i.to_string()).join(","));
    let out = match fmt {
        OutputFormat::Machine => format!(
            "record=map-check outcome={} triples={} positive_triples={} first_positive={} quadruples={} counterexample={}\n",
            match r.outcome {
                SampleOutcome::Consistent => "consistent",
                SampleOutcome::VacuouslyConsistent => "vacuous",
                SampleOutcome::Inconsistent => "inconsistent",
            },
            r.triples_checked,
            r.positive_triples,
            indices(r.first_positive_triple),
            r.quadruples_checked,
            counterexample
        ),
        OutputFormat::Text => format!(
            "{}\n  {} of {} triples positive, first {}\n  {} quadruples checked, counterexample {}\n",
            r.outcome,
            r.positive_triples,
            r.triples_checked,
            indices(r.first_positive_triple),
            r.quadruples_checked,
            counterexample
        ),
    };
    Ok(Report { out, affirmative: r.outcome != SampleOutcome::Inconsistent })
}

fn flags_transverse(fmt: OutputFormat, path: &Path, pair: Option<Vec<usize>>) -> Result<Report, Failure> {
    let flags = format::parse_flags(&read(path)?)?;
    let n = flags.len();
    let pairs: Vec<(usize, usize)> = match pair {
        Some(p) => {
            for &i in &p {
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, dim: n }.into());
                }
            }
            vec![(p[0], p[1])]
        }
        None => (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect(),
    };
    let mut out = String::new();
    let mut affirmative = true;
    for (i, j) in pairs {
        let t = transverse(&flags[i - 1], &flags[j - 1])?;
        affirmative &= t;
        match fmt {
            OutputFormat::Machine => writeln!(out, "record=transverse pair={i},{j} transverse={t}").unwrap(),
            OutputFormat::Text => {
                writeln!(out, "flags {i} and {j}: {}", if t { "transverse" } else { "not transverse" }).unwrap()
            }
        }
    }
    Ok(Report { out, affirmative })
}

fn points_or_random(path: Option<&Path>, count: usize, seed: u64) -> Result<Vec<ProjectivePoint>, Failure> {
    match path {
        Some(p) => Ok(format::parse_points(&read(p)?)?),
        None if count == 0 => Err(Error::BadParameters("count must be positive".into()).into()),
        None => Ok(random_points(count, 20, seed)),
    }
}

fn require_dim(d: usize) -> Result<(), Failure> {
    if d < 2 {
        return Err(Error::BadParameters(format!("d = {d} must be at least 2")).into());
    }
    Ok(())
}

fn barbot(
    d: usize,
    j: usize,
    emit: BarbotEmit,
    g: Option<&Path>,
    points: Option<&Path>,
    count: usize,
    seed: u64,
) -> Result<Report, Failure> {
    let spec = barbot_spec(d, j)?;
    let out = match emit {
        BarbotEmit::Spec => {
            let perm: Vec<String> = spec.perm.iter().map(|p| p.to_string()).collect();
            format!("d={} j={} k={} perm={}\n", spec.d, spec.j, spec.k, perm.join(","))
        }
        BarbotEmit::Basis => format::write_matrix(&spec.basis_matrix()),
        BarbotEmit::Matrix => {
            let path = g.ok_or_else(|| Error::BadParameters("--emit matrix needs --g".into()))?;
            format::write_matrix(&barbot_matrix(&spec, &format::parse_moebius(&read(path)?)?)?)
        }
        BarbotEmit::Flags => {
            let pts = points_or_random(points, count, seed)?;
            format::write_flags(&pts.iter().map(|x| barbot_flag(&spec, x)).collect::<Vec<Flag>>())
        }
        BarbotEmit::Sample => {
            let pts = distinct(points_or_random(points, count, seed)?)?;
            format::write_sample(&barbot_sample(&spec, &pts))
        }
    };
    Ok(Report::success(out))
}

fn distinct(mut points: Vec<ProjectivePoint>) -> Result<Vec<ProjectivePoint>, Failure> {
    points.sort();
    if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::PreconditionViolated(format!("point {} is repeated", w[0])).into());
    }
    Ok(points)
}

fn veronese(d: usize, points: Option<&Path>, count: usize, emit: VeroneseEmit, seed: u64) -> Result<Report, Failure> {
    require_dim(d)?;
    let pts = points_or_random(points, count, seed)?;
    let out = match emit {
        VeroneseEmit::Flags => format::write_flags(&pts.iter().map(|x| veronese_flag(x, d)).collect::<Vec<_>>()),
        VeroneseEmit::Sample => format::write_sample(&veronese_sample(d, &distinct(pts)?)),
    };
    Ok(Report::success(out))
}

fn threshold(fmt: OutputFormat, u: &Path, flag: &Path, cap: u64) -> Result<Report, Failure> {
    let u = format::parse_matrix(&read(u)?)?;
    let g = format::parse_flag(&read(flag)?)?;
    let t = power_positivity_threshold(&u, &g, cap)?;
    let out = match fmt {
        OutputFormat::Machine => format!("record=threshold t={t} cap={cap}\n"),
        OutputFormat::Text => format!("threshold {t}\n"),
    };
    Ok(Report::success(out))
}

fn limit_demo(fmt: OutputFormat, d: usize, j: usize, g: &Path, iters: u64, emit: LimitEmit) -> Result<Report, Failure> {
    let spec = barbot_spec(d, j)?;
    if iters == 0 {
        return Err(Error::BadParameters("iters must be positive".into()).into());
    }
    let g = format::parse_moebius(&read(g)?)?;
    let series = limit_convergence(&spec, &g, iters)?;
    let mut out = String::new();
    let first = series.first_below.map_or("-".into(), |n| n.to_string());
    match emit {
        LimitEmit::Series => {
            out.push_str("n,distance,min_gap\n");
            for p in &series.points {
                let distance = p.distance.map_or("skipped".into(), |x| format!("{x:e}"));
                writeln!(out, "{},{},{:e}", p.n, distance, p.min_gap).unwrap();
            }
        }
        LimitEmit::Summary => {
            let last = series.points.last().expect("iters > 0");
            let distance = last.distance.map_or("skipped".into(), |x| format!("{x:e}"));
            match fmt {
                OutputFormat::Machine => writeln!(
                    out,
                    "record=limit-demo d={d} j={j} iters={iters} final_distance={distance} first_below={first}"
                ),
                OutputFormat::Text => writeln!(
                    out,
                    "tau_{{{d},{j}}}: distance {distance} at n = {iters}, below threshold from n = {first}"
                ),
            }
            .unwrap();
        }
    }
    Ok(Report { out, affirmative: series.first_below.is_some() })
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let fmt = cli.format;
    match cli.command {
        Command::TpCheck { input, method, emit } => tp_check(fmt, &input, method, emit),
        Command::TupleCheck { flags, method } => tuple_check(fmt, &flags, method),
        Command::MapCheck { sample } => map_check(fmt, &sample),
        Command::FlagsTransverse { input, pair } => flags_transverse(fmt, &input, pair),
        Command::Pascal { d } => {
            require_dim(d)?;
            Ok(Report::success(format::write_matrix(&pascal(d))))
        }
        Command::SymPower { d, g } => {
            require_dim(d)?;
            let g = format::parse_moebius(&read(&g)?)?;
            Ok(Report::success(format::write_matrix(&sym_power(&g, d))))
        }
        Command::Barbot { d, j, emit, g, points, count } => {
            barbot(d, j, emit, g.as_deref(), points.as_deref(), count, cli.seed)
        }
        Command::Veronese { d, points, count, emit } => veronese(d, points.as_deref(), count, emit, cli.seed),
        Command::Threshold { u, flag, cap } => threshold(fmt, &u, &flag, cap),
        Command::LimitDemo { d, j, g, iters, emit } => limit_demo(fmt, d, j, &g, iters, emit),
        Command::Bench { d_min, d_max, samples } => {
            let report = bench::bench(d_min..=d_max, samples, cli.seed)?;
            let out = match fmt {
                OutputFormat::Machine => report.machine(),
                OutputFormat::Text => report.text(),
            };
            Ok(Report { affirmative: report.staged_counts_match(), out })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{}", report.out);
            ExitCode::from(if report.affirmative { 0 } else { 1 })
        }
        Err(f) => {
            match &f {
                Failure::Io(path, e) => eprintln!("error: {}: {e}", path.display()),
                Failure::Error(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}
