//! Command-line frontend: counting, construction, verification, search
//! oracles, and the inequality-grid lab. Exit codes: 0 success/pass, 1
//! verification failure, 2 usage or parse errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::One;
use serde::Deserialize;

use qekr::counting::{
    count_disjoint, gaussian, hm_threshold, size_example, size_pencil, theta, ExampleId, Form,
    Params,
};
use qekr::families::{
    canonical_anchors, cover_analysis, family_load, family_save, is_maximal,
    is_pairwise_t_intersecting, make_example, make_pencil, Anchors, Psi,
};
use qekr::geometry::{AmbientSpace, SpaceKind};
use qekr::grid::GridSpec;
use qekr::lemmas::{decomposition_identities, run_grid, LemmaId, Verdict};
use qekr::search::{max_clique, second_largest_probe, Seeding};
use qekr::subspace::Subspace;
use qekr::{Error, Result};

#[derive(Parser)]
#[command(name = "qekr", version, about = "Intersecting families of k-spaces in PG(n,q) and AG(n,q)")]
struct Cli {
    /// Worker thread cap (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Pg,
    Ag,
}

impl From<SpaceArg> for SpaceKind {
    fn from(s: SpaceArg) -> SpaceKind {
        match s {
            SpaceArg::Pg => SpaceKind::Pg,
            SpaceArg::Ag => SpaceKind::Ag,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact closed-form counts.
    #[command(subcommand)]
    Count(CountCmd),
    /// Build an example family and write it to a JSON file.
    Construct(ConstructArgs),
    /// Check a family property; exits 1 when it fails.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Structural analysis of a family.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Brute-force search oracles.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Evaluate appendix lemmas over parameter grids.
    Check(CheckArgs),
}

#[derive(Subcommand)]
enum CountCmd {
    /// Gaussian binomial coefficient [n k]_q.
    Gaussian {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        q: u32,
    },
    /// Number of points of PG(n,q).
    Theta {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        q: u32,
    },
    /// Number of j-spaces disjoint from a fixed m-space in PG(n,q).
    Disjoint {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        j: i64,
        #[arg(long)]
        q: u32,
    },
    /// Size of an example family, in the requested formula form.
    Size {
        #[arg(long)]
        example: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        t: i64,
    },
    /// Hilton-Milner threshold f_p or f_a with its attained branch.
    Threshold {
        #[arg(long)]
        space: SpaceArg,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        t: i64,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    example: String,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: i64,
    #[arg(long)]
    k: i64,
    #[arg(long)]
    t: i64,
    /// JSON file overriding the canonical anchor subspaces.
    #[arg(long)]
    anchors: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every member pair meets in dimension >= t.
    #[command(name = "t-intersecting")]
    TIntersecting {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        t: i64,
    },
    /// No k-space of the ambient extends the family.
    Maximal {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        t: i64,
    },
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Minimum cover dimension psi and the cover set.
    Cover {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        t: i64,
        #[arg(long)]
        max_dim: Option<i64>,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Exact maximum t-intersecting family of k-spaces.
    #[command(name = "max-clique")]
    MaxClique {
        #[arg(long)]
        space: SpaceArg,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        t: i64,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Heuristic probe for large non-pencil maximal families.
    Probe {
        #[arg(long)]
        space: SpaceArg,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        t: i64,
        #[arg(long)]
        seeds: String,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[command(subcommand)]
    sub: Option<CheckSub>,
    #[arg(long)]
    lemma: Option<String>,
    /// Grid such as "q=2..3,t=1..2,k=t+1..t+4,n=2k-t+1..2k+6".
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum CheckSub {
    /// The refined/difference decomposition identities on the boundary
    /// k-slice (k = 2t+2 projectively, k = 2t+1 affinely).
    Decompositions {
        #[arg(long)]
        space: SpaceArg,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        t: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
}

/// Anchor override file: basis rows of the anchor subspaces.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum AnchorsFile {
    OneType {
        delta: Vec<Vec<u8>>,
        pi: Vec<Vec<u8>>,
    },
    TwoType {
        gamma: Vec<Vec<u8>>,
    },
}

fn load_anchors(path: &PathBuf, space: &AmbientSpace) -> Result<Anchors> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
    let file: AnchorsFile =
        serde_json::from_str(&text).map_err(|e| Error::ParseError(e.to_string()))?;
    let sub = |rows: Vec<Vec<u8>>| Subspace::canonicalize(space.field.clone(), space.n, rows);
    Ok(match file {
        AnchorsFile::OneType { delta, pi } => Anchors::OneType {
            delta: sub(delta)?,
            pi: sub(pi)?,
        },
        AnchorsFile::TwoType { gamma } => Anchors::TwoType { gamma: sub(gamma)? },
    })
}

fn format_rational(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn opt(v: Option<i64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn print_verdicts(verdicts: &[Verdict], format: FormatArg) {
    match format {
        FormatArg::Csv => {
            println!("lemma,q,n,k,t,x,j,lhs,rhs,relation,holds");
            for v in verdicts {
                let p = v.params;
                println!(
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    v.lemma,
                    p.q,
                    p.n,
                    p.k,
                    p.t,
                    opt(p.x),
                    opt(p.j),
                    format_rational(&v.lhs),
                    format_rational(&v.rhs),
                    v.relation,
                    v.holds
                );
            }
        }
        FormatArg::Json => {
            let items: Vec<serde_json::Value> = verdicts
                .iter()
                .map(|v| {
                    let p = v.params;
                    serde_json::json!({
                        "lemma": v.lemma.to_string(),
                        "check": v.check,
                        "q": p.q,
                        "n": p.n,
                        "k": p.k,
                        "t": p.t,
                        "x": p.x,
                        "j": p.j,
                        "lhs": format_rational(&v.lhs),
                        "rhs": format_rational(&v.rhs),
                        "relation": v.relation.to_string(),
                        "holds": v.holds,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&items).unwrap());
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Count(cmd) => {
            match cmd {
                CountCmd::Gaussian { n, k, q } => println!("{}", gaussian(n, k, q)?),
                CountCmd::Theta { n, q } => println!("{}", theta(n, q)?),
                CountCmd::Disjoint { n, m, j, q } => println!("{}", count_disjoint(n, m, j, q)?),
                CountCmd::Size {
                    example,
                    form,
                    q,
                    n,
                    k,
                    t,
                } => {
                    let params = Params::new(q, n, k, t);
                    if example.eq_ignore_ascii_case("PENCIL") {
                        println!("{}", size_pencil(params)?);
                    } else {
                        let id: ExampleId = example.parse()?;
                        let form: Form = form.parse()?;
                        println!("{}", size_example(id, form, params)?);
                    }
                }
                CountCmd::Threshold { space, q, n, k, t } => {
                    let th = hm_threshold(space.into(), Params::new(q, n, k, t))?;
                    println!("{} {}", th.value, th.branch);
                }
            }
            Ok(0)
        }
        Command::Construct(args) => {
            let ConstructArgs {
                example,
                q,
                n,
                k,
                t,
                anchors,
                out,
            } = args;
            let params = Params::new(q, n, k, t);
            let (fam, expected) = if example.eq_ignore_ascii_case("PENCIL") {
                // A pencil is the same object in both geometries; build the
                // projective one through the canonical t-space.
                let space = AmbientSpace::new(SpaceKind::Pg, n as usize, q)?;
                let anchors = anchors.map(|p| load_anchors(&p, &space)).transpose()?;
                let delta = match anchors {
                    Some(Anchors::OneType { delta, .. }) => delta,
                    Some(Anchors::TwoType { gamma }) => gamma,
                    None => match canonical_anchors(ExampleId::P1, &space, params) {
                        Anchors::OneType { delta, .. } => delta,
                        Anchors::TwoType { .. } => unreachable!(),
                    },
                };
                (make_pencil(&space, &delta, k)?, size_pencil(params)?)
            } else {
                let id: ExampleId = example.parse()?;
                let space = AmbientSpace::new(id.space_kind(), n as usize, q)?;
                let anchors = anchors.map(|p| load_anchors(&p, &space)).transpose()?;
                (
                    make_example(id, &space, params, anchors)?,
                    size_example(id, Form::Closed, params)?,
                )
            };
            family_save(&fam, &out)?;
            println!("members {} closed-form {}", fam.len(), expected);
            Ok(if expected == fam.len().into() { 0 } else { 1 })
        }
        Command::Verify(cmd) => match cmd {
            VerifyCmd::TIntersecting { family, t } => {
                let fam = family_load(&family)?;
                let report = is_pairwise_t_intersecting(&fam, t);
                if report.holds {
                    println!("PASS t-intersecting t={t} members={}", fam.len());
                    Ok(0)
                } else {
                    let (a, b) = report.witness.unwrap();
                    println!("FAIL t-intersecting t={t} witness {:?} {:?}", a.basis, b.basis);
                    Ok(1)
                }
            }
            VerifyCmd::Maximal { family, t } => {
                let fam = family_load(&family)?;
                let report = is_maximal(&fam, t)?;
                if report.holds {
                    println!("PASS maximal t={t} members={}", fam.len());
                    Ok(0)
                } else {
                    let ext = report.extension.unwrap();
                    println!("FAIL maximal t={t} extension {:?}", ext.basis);
                    Ok(1)
                }
            }
        },
        Command::Analyze(AnalyzeCmd::Cover { family, t, max_dim }) => {
            let fam = family_load(&family)?;
            let max_dim = max_dim.unwrap_or(fam.space.n as i64);
            let report = cover_analysis(&fam, t, max_dim)?;
            match report.psi {
                Psi::Found(d) => {
                    println!("psi {} covers {}", d, report.covers.len());
                    for c in &report.covers.members {
                        println!("cover {:?}", c.basis);
                    }
                }
                Psi::NotFound(d) => println!("psi not-found searched-up-to {d}"),
            }
            Ok(0)
        }
        Command::Search(cmd) => match cmd {
            SearchCmd::MaxClique {
                space,
                q,
                n,
                k,
                t,
                budget,
            } => {
                let space = AmbientSpace::new(space.into(), n as usize, q)?;
                let result = max_clique(&space, k, t, budget)?;
                println!("size {} optimal {}", result.size, result.optimal);
                for m in &result.witness.members {
                    println!("member {:?}", m.basis);
                }
                Ok(0)
            }
            SearchCmd::Probe {
                space,
                q,
                n,
                k,
                t,
                seeds,
                budget,
            } => {
                let seeding: Seeding = seeds.parse()?;
                let space = AmbientSpace::new(space.into(), n as usize, q)?;
                let report = second_largest_probe(&space, k, t, seeding, budget)?;
                println!("heuristic {}", report.heuristic);
                println!("max-size {}", report.max_size);
                for (size, count) in &report.histogram {
                    println!("size {size} families {count}");
                }
                for w in &report.witnesses {
                    println!(
                        "witness size {} span-dim {} matches {}",
                        w.size,
                        w.span_dim,
                        w.matches_example
                            .map(|e| e.to_string())
                            .unwrap_or_else(|| "-".into())
                    );
                }
                Ok(0)
            }
        },
        Command::Check(args) => {
            let (verdicts, format) = match args.sub {
                Some(CheckSub::Decompositions {
                    space,
                    q,
                    n,
                    t,
                    format,
                }) => {
                    let kind: SpaceKind = space.into();
                    let k = match kind {
                        SpaceKind::Pg => 2 * t + 2,
                        SpaceKind::Ag => 2 * t + 1,
                    };
                    (
                        decomposition_identities(kind, Params::new(q, n, k, t))?,
                        format,
                    )
                }
                None => {
                    let lemma: LemmaId = args
                        .lemma
                        .ok_or_else(|| Error::ParseError("--lemma is required".into()))?
                        .parse()?;
                    let grid = match args.grid {
                        Some(g) => GridSpec::parse(&g)?,
                        None => GridSpec::parse(qekr::lemmas::default_grid(lemma))?,
                    };
                    let (verdicts, summary) = run_grid(lemma, &grid)?;
                    eprintln!(
                        "tuples {} checks {} passed {} failed {}",
                        summary.tuples, summary.checks, summary.passed, summary.failed
                    );
                    (verdicts, args.format)
                }
            };
            print_verdicts(&verdicts, format);
            Ok(if verdicts.iter().all(|v| v.holds) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
