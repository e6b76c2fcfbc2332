use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hlcluster::gridseeds::initial_seed;
use hlcluster::heights::{build_from_hlr, HeightFunction};
use hlcluster::hl::{exchange_predictions, ghl_monomial, mutation_relations, recursion_relation, GhlSpec};
use hlcluster::oracle::{closure, FactorEval, CLOSURE_CAP};
use hlcluster::quiver::IcedQuiver;
use hlcluster::sequences::{build_q_xi, defect_nodes, ell_policy, pick_p, seq_s, seq_s_prime, seq_s_t, to_sm, to_sm_prime};
use hlcluster::serve::{load_session, mutate_session, seed_value, serve, undo_session, LoadRequest};
use hlcluster::verify::{
    appendix_family, random_specs, sweep_appendix, sweep_arrows, sweep_ghl, sweep_highest, sweep_oracle, verify_appendix,
    verify_ghl, verify_highest_weights, verify_lemma_arrows, verify_oracle_suite, AppendixConfig, VerificationReport,
};

#[derive(Parser)]
#[command(name = "hlcluster", version, about = "Tracked mutation and highest l-weight checks for HL-type modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Quiver(QuiverCmd),
    #[command(subcommand)]
    Grid(GridCmd),
    #[command(subcommand)]
    Seq(SeqCmd),
    #[command(subcommand)]
    Oracle(OracleCmd),
    #[command(subcommand)]
    Hl(HlCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Load a session seed, apply mutations and undos, and print it as the server does.
    Seed {
        #[command(flatten)]
        load: LoadArgs,
        #[arg(long = "mutate")]
        mutate: Vec<String>,
        /// Undo this many of the mutations afterwards.
        #[arg(long, default_value_t = 0)]
        undo: usize,
    },
    /// Serve the session endpoints on 127.0.0.1.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[command(flatten)]
        load: LoadArgs,
    },
}

#[derive(Args, Clone, Default)]
struct LoadArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xi: Option<Vec<i64>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    ell: Option<i64>,
    #[arg(long)]
    r: Option<i64>,
    /// Load the Laurent-polynomial seed of `xi`.
    #[arg(long)]
    oracle: bool,
}

impl LoadArgs {
    /// Defaults to `xi = (-3,-2,-3,-4,-5,-4)` when neither `xi` nor `n` is given.
    fn request(&self) -> LoadRequest {
        let mut req =
            LoadRequest { xi: self.xi.clone(), n: self.n, ell: self.ell, r: self.r, oracle: self.oracle };
        if req.xi.is_none() && req.n.is_none() {
            req.xi = Some(vec![-3, -2, -3, -4, -5, -4]);
        }
        req
    }
}

#[derive(Subcommand)]
enum QuiverCmd {
    /// Q_xi as JSON.
    Build {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        xi: Vec<i64>,
    },
    /// Mutate a quiver read from a JSON file at each vertex in turn.
    Mutate {
        #[arg(long)]
        file: PathBuf,
        #[arg(long = "vertex", required = true)]
        vertices: Vec<String>,
    },
    Export {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum GridCmd {
    Init {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: i64,
    },
    /// The grid seed after the grid sequences, normalized unless `--raw`.
    Run {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        xi: Vec<i64>,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        ell: Option<i64>,
        #[arg(long)]
        raw: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqKind {
    S,
    Defect,
    Prime,
}

#[derive(Subcommand)]
enum SeqCmd {
    Build {
        #[arg(long, value_enum)]
        kind: SeqKind,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Option<Vec<i64>>,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        ell: Option<i64>,
        #[command(flatten)]
        spec: SpecArgs,
    },
}

#[derive(Args, Clone, Default)]
struct SpecArgs {
    #[arg(long, value_delimiter = ',')]
    idx: Option<Vec<usize>>,
    #[arg(long = "as", value_delimiter = ',', allow_hyphen_values = true)]
    as_: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    rs: Option<Vec<i64>>,
}

impl SpecArgs {
    fn spec(&self, r: i64) -> Result<GhlSpec> {
        let (Some(idx), Some(as_)) = (&self.idx, &self.as_) else {
            bail!("--idx and --as are required");
        };
        let rs = self.rs.clone().unwrap_or_else(|| vec![0; idx.len()]);
        let spec = GhlSpec::new(idx, as_, r, &rs);
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Every cluster variable reachable from the Q_xi seed.
    Closure {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        xi: Vec<i64>,
        #[arg(long, default_value_t = CLOSURE_CAP)]
        cap: usize,
    },
    /// Check the relations for mutating `i..=j` as polynomial identities.
    Check {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        xi: Vec<i64>,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Subcommand)]
enum HlCmd {
    Ghl {
        #[arg(long)]
        r: i64,
        #[command(flatten)]
        spec: SpecArgs,
    },
    Predict {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        xi: Vec<i64>,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = 1)]
        r: i64,
    },
}

#[derive(Args, Clone)]
struct VerifyArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xi: Option<Vec<i64>>,
    /// Sweep every height function on at most this many nodes.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum VerifyCmd {
    Arrows(VerifyArgs),
    Highest(VerifyArgs),
    Ghl {
        #[command(flatten)]
        common: VerifyArgs,
        #[command(flatten)]
        spec: SpecArgs,
        /// Number of random specs when no spec is given.
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    Appendix {
        #[command(flatten)]
        common: VerifyArgs,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        case: Option<u8>,
    },
    Oracle(VerifyArgs),
}

fn height(xi: &[i64]) -> Result<HeightFunction> {
    Ok(HeightFunction::new(xi.to_vec())?)
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn read_quiver(path: &PathBuf) -> Result<IcedQuiver> {
    let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(IcedQuiver::from_json(&s)?)
}

fn report(rep: &VerificationReport, as_json: bool) -> Result<bool> {
    if as_json {
        print_json(rep)?;
    } else {
        let verdict = if rep.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {} checks={} failures={}", rep.suite, rep.checks, rep.failures.len());
        for (k, v) in &rep.stats {
            println!("  {k}: {v}");
        }
        for f in rep.failures.iter().take(5) {
            println!("  {}: {}", f.what, f.detail);
        }
    }
    Ok(rep.passed)
}

fn run_verify(cmd: VerifyCmd) -> Result<bool> {
    match cmd {
        VerifyCmd::Arrows(a) => {
            let rep = match &a.xi {
                Some(xi) => verify_lemma_arrows(&height(xi)?),
                None => sweep_arrows(a.n.unwrap_or(6)),
            };
            report(&rep, a.json)
        }
        VerifyCmd::Highest(a) => {
            let rep = match (&a.xi, a.r) {
                (Some(xi), Some(r)) => verify_highest_weights(&height(xi)?, r),
                (Some(xi), None) => VerificationReport::merge(
                    "highest",
                    json!({ "xi": xi }),
                    (1..=3).map(|r| height(xi).map(|x| verify_highest_weights(&x, r))).collect::<Result<_>>()?,
                ),
                (None, r) => sweep_highest(a.n.unwrap_or(6), &r.map_or(vec![1, 2, 3], |r| vec![r])),
            };
            report(&rep, a.json)
        }
        VerifyCmd::Ghl { common, spec, count } => {
            let rep = if spec.idx.is_some() {
                verify_ghl(&spec.spec(common.r.unwrap_or(1))?)
            } else {
                sweep_ghl(&random_specs(common.seed, count, 3, common.r.unwrap_or(3), 2))
            };
            report(&rep, common.json)
        }
        VerifyCmd::Appendix { common, spec, case } => {
            let rep = if spec.idx.is_some() {
                let sp = spec.spec(common.r.unwrap_or(1))?;
                let cfg = match &common.xi {
                    Some(xi) => AppendixConfig { spec: sp, xi: xi.clone() },
                    None => AppendixConfig::from_spec(sp)?,
                };
                verify_appendix(case, &cfg)
            } else {
                sweep_appendix(case, &appendix_family(3, common.r.unwrap_or(3), -2, 3))
            };
            report(&rep, common.json)
        }
        VerifyCmd::Oracle(a) => {
            let rep = match &a.xi {
                Some(xi) => verify_oracle_suite(&height(xi)?),
                None => sweep_oracle(a.n.unwrap_or(5)),
            };
            report(&rep, a.json)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Quiver(QuiverCmd::Build { xi }) => print_json(&build_q_xi(&height(&xi)?).to_json_value())?,
        Command::Quiver(QuiverCmd::Mutate { file, vertices }) => {
            let mut q = read_quiver(&file)?;
            for v in &vertices {
                q.mutate_in_place(v)?;
            }
            print_json(&q.to_json_value())?;
        }
        Command::Quiver(QuiverCmd::Export { file, format }) => {
            let q = read_quiver(&file)?;
            match format {
                Format::Dot => print!("{}", q.to_dot()),
                Format::Json => print_json(&q.to_json_value())?,
            }
        }
        Command::Grid(GridCmd::Init { n, ell }) => print_json(&initial_seed(n, ell)?.to_json_value())?,
        Command::Grid(GridCmd::Run { xi, r, ell, raw }) => {
            let xi = height(&xi)?;
            let ell = ell.unwrap_or_else(|| ell_policy(xi.n(), r, 0));
            let run = if raw { to_sm(&xi, r, ell)? } else { to_sm_prime(&xi, r, ell)? };
            print_json(&run.seed.to_json_value())?;
        }
        Command::Seq(SeqCmd::Build { kind, xi, r, ell, spec }) => {
            let seq: Value = match kind {
                SeqKind::Prime => {
                    let sp = spec.spec(r)?;
                    let xi = match xi {
                        Some(x) => height(&x)?,
                        None => build_from_hlr(&sp.idx, &sp.as_)?,
                    };
                    json!(seq_s_prime(&xi, &sp)?)
                }
                SeqKind::S | SeqKind::Defect => {
                    let Some(xi) = xi else { bail!("--xi is required") };
                    let xi = height(&xi)?;
                    let ell = ell.unwrap_or_else(|| ell_policy(xi.n(), r, 0));
                    if matches!(kind, SeqKind::S) {
                        json!(seq_s(xi.n(), ell, pick_p(&xi, r, ell)))
                    } else {
                        let parts = (1..=defect_nodes(&xi).len())
                            .rev()
                            .map(|t| seq_s_t(&xi, r, t, ell))
                            .collect::<hlcluster::Result<Vec<_>>>()?;
                        json!(parts)
                    }
                }
            };
            print_json(&seq)?;
        }
        Command::Oracle(OracleCmd::Closure { xi, cap }) => {
            let cl = closure(&height(&xi)?, cap)?;
            let vars: Vec<String> = cl.variables.iter().map(|p| p.to_string()).collect();
            print_json(&json!({ "seeds": cl.seeds, "count": vars.len(), "variables": vars }))?;
        }
        Command::Oracle(OracleCmd::Check { xi, i, j }) => {
            let xi = height(&xi)?;
            let mut rels = mutation_relations(&xi, i, j)?;
            if j < xi.n() && xi.d(j) && xi.d(j + 1) {
                rels.push(recursion_relation(&xi, i, j)?);
            }
            let mut ev = FactorEval::new(&xi);
            let mut all = true;
            let mut out = Vec::new();
            for rel in rels {
                let ok = ev.check(&rel)?;
                all &= ok;
                out.push(json!({ "relation": rel, "holds": ok }));
            }
            print_json(&out)?;
            return Ok(all);
        }
        Command::Hl(HlCmd::Ghl { r, spec }) => println!("{}", ghl_monomial(&spec.spec(r)?)?),
        Command::Hl(HlCmd::Predict { xi, i, j, r }) => print_json(&exchange_predictions(&height(&xi)?, i, j, r)?)?,
        Command::Verify(v) => return run_verify(v),
        Command::Seed { load, mutate, undo } => {
            let mut session = load_session(&load.request())?;
            for v in &mutate {
                mutate_session(&mut session, v)?;
            }
            for _ in 0..undo {
                undo_session(&mut session)?;
            }
            println!("{}", serde_json::to_string(&seed_value(&session))?);
        }
        Command::Serve { port, load } => {
            let session = load_session(&load.request())?;
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on 127.0.0.1:{port}");
            rt.block_on(serve(port, session))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
