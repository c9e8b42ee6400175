//! Command-line front end: argument definitions and the command runner.

pub mod files;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use multideg::asymptotic::corollary_q;
use multideg::exact::{census, count_exact_with, count_region_with, CountOptions, Strategy};
use multideg::naive::{naive_corollary_prediction, sample_matrix_with};
use multideg::pairing::sample_pairing_with;
use multideg::switching::preimages;
use multideg::{
    active_colour_of, apply_move, corollary_regular_estimate, enumerate_moves, feasible, g_naive, magic_factor,
    nominal_bounds, project, reverse_count, simple_pairing_asymptotic, solve_p0, stats, sum_with_bounds_41,
    sum_with_bounds_42, theorem1_estimate, theorem5_prediction, validate, verify_bound, w_weight, ClassSignature,
    DegreeSequence, Error, Estimate, MultiplicitySet, NaiveParams, PMode, Region, Result, Spec41, Spec42,
    SwitchContext, SwitchingMove, Thresholds,
};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use files::{read_json, GraphFile, NetworkFile};

#[derive(Debug, Parser)]
#[command(name = "multideg", version, about = "Count, estimate and switch multigraphs with a given degree sequence")]
pub struct Cli {
    /// Degree sequence, e.g. 3,3,3,3.
    #[arg(long, global = true)]
    pub degrees: Option<String>,
    /// Allowed link multiplicities, e.g. "0,1" or "0,1,+4".
    #[arg(long = "J", global = true, default_value = "0,1")]
    pub j: String,
    /// Allowed loop multiplicities.
    #[arg(long = "Jstar", global = true, default_value = "0")]
    pub jstar: String,
    /// Print the full run report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Node budget for exhaustive searches.
    #[arg(long, global = true, default_value_t = multideg::exact::DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact counts.
    #[command(subcommand)]
    Count(CountCmd),
    /// Asymptotic and model-based estimates.
    #[command(subcommand)]
    Estimate(EstimateCmd),
    /// Exact count next to every applicable estimate.
    Compare,
    /// Random pairings or random matrices.
    Sample {
        #[arg(value_enum)]
        what: SampleKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Matrix size; defaults to the length of --degrees.
        #[arg(long)]
        n: Option<usize>,
        /// Matrix model parameter; defaults to p0 for --degrees.
        #[arg(long)]
        p: Option<f64>,
    },
    /// Switching diagnostics on a multigraph.
    Switch {
        #[arg(value_enum)]
        what: SwitchKind,
        /// JSON file `{"n": .., "mult": [[..]]}`
        #[arg(long)]
        graph: PathBuf,
        /// Switching colour 1-15, required by moves, apply and reverse
        #[arg(long)]
        colour: Option<u8>,
        /// 1-based vertex sequence for `apply`.
        #[arg(long)]
        seq: Option<String>,
    },
    /// Checks of the flow calculus, the switchings and the summation bounds.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
pub enum CountCmd {
    /// Every multigraph with the degree sequence
    Exact {
        #[arg(long, value_enum, default_value = "row-dp")]
        strategy: StrategyArg,
    },
    /// Multigraphs inside one region of the switching analysis
    Region {
        /// G0, G0_minus_Y or Z.
        #[arg(long, default_value = "G0")]
        region: String,
    },
    /// Pairings projecting to a given number of loops, doubles and triples
    Class {
        #[arg(long, default_value_t = 0)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        t: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum EstimateCmd {
    /// Asymptotic count for a general degree sequence
    Theorem1,
    /// Regular degree sequences, reported with the exponent Q
    Corollary {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
    },
    /// Simple graphs from the pairing model
    Pairing,
    /// Independent-entry model probability
    Naive {
        /// Fixed p; defaults to p0.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_enum, default_value = "exact")]
        p_mode: PModeArg,
    },
    /// Independent-entry model with its correction factors
    Theorem5,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Flow-network bound on a JSON network
    Theorem2 {
        #[arg(long)]
        network: PathBuf,
    },
    /// Soundness of every switching on a JSON graph
    Switchings {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Enclosure of a summation by its bounds
    Summation {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "41")]
        form: SummationForm,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SampleKind {
    Pairing,
    Matrix,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SwitchKind {
    Stats,
    Active,
    Moves,
    Apply,
    Reverse,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Backtracking,
    RowDp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PModeArg {
    Exact,
    Pdef,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SummationForm {
    #[value(name = "41")]
    F41,
    #[value(name = "42")]
    F42,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub timings: Timings,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub parse_seconds: f64,
    pub compute_seconds: f64,
}

struct Common {
    j: MultiplicitySet,
    jstar: MultiplicitySet,
    degrees: Option<DegreeSequence>,
    budget: u64,
}

impl Common {
    fn degrees(&self) -> Result<&DegreeSequence> {
        self.degrees
            .as_ref()
            .ok_or_else(|| Error::Parse("--degrees is required for this command".into()))
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("payloads serialize")
}

fn big(x: &BigUint) -> Value {
    Value::String(x.to_string())
}

fn estimate_payload(name: &str, est: &Estimate) -> Value {
    json!({
        "mode": "estimate",
        "estimator": name,
        "estimate": to_value(est),
        "value": est.value(),
    })
}

pub fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Count(c) => format!(
            "count {}",
            match c {
                CountCmd::Exact { .. } => "exact",
                CountCmd::Region { .. } => "region",
                CountCmd::Class { .. } => "class",
            }
        ),
        Command::Estimate(e) => format!(
            "estimate {}",
            match e {
                EstimateCmd::Theorem1 => "theorem1",
                EstimateCmd::Corollary { .. } => "corollary",
                EstimateCmd::Pairing => "pairing",
                EstimateCmd::Naive { .. } => "naive",
                EstimateCmd::Theorem5 => "theorem5",
            }
        ),
        Command::Compare => "compare".into(),
        Command::Sample { what, .. } => format!("sample {}", format!("{what:?}").to_lowercase()),
        Command::Switch { what, .. } => format!("switch {}", format!("{what:?}").to_lowercase()),
        Command::Verify(v) => format!(
            "verify {}",
            match v {
                VerifyCmd::Theorem2 { .. } => "theorem2",
                VerifyCmd::Switchings { .. } => "switchings",
                VerifyCmd::Summation { .. } => "summation",
            }
        ),
    }
}

pub fn run(cli: &Cli) -> Result<RunReport> {
    let t0 = Instant::now();
    let common = Common {
        j: cli.j.parse()?,
        jstar: cli.jstar.parse()?,
        degrees: cli.degrees.as_deref().map(str::parse).transpose()?,
        budget: cli.budget,
    };
    let parse_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let (result, seed) = dispatch(&cli.command, &common)?;
    let compute_seconds = t1.elapsed().as_secs_f64();
    Ok(RunReport {
        command: command_name(&cli.command),
        inputs: json!({
            "degrees": common.degrees.as_ref().map(|k| k.degrees().to_vec()),
            "J": common.j.to_string(),
            "Jstar": common.jstar.to_string(),
            "budget": common.budget,
            "args": format!("{:?}", cli.command),
        }),
        result,
        timings: Timings {
            parse_seconds,
            compute_seconds,
        },
        seed,
    })
}

fn dispatch(cmd: &Command, c: &Common) -> Result<(Value, Option<u64>)> {
    let out = match cmd {
        Command::Count(cc) => count(cc, c)?,
        Command::Estimate(e) => estimate(e, c)?,
        Command::Compare => compare(c)?,
        Command::Sample {
            what,
            seed,
            reps,
            n,
            p,
        } => return Ok((sample(*what, *seed, *reps, *n, *p, c)?, Some(*seed))),
        Command::Switch {
            what,
            graph,
            colour,
            seq,
        } => switch(*what, graph, *colour, seq.as_deref(), c)?,
        Command::Verify(v) => verify(v, c)?,
    };
    Ok((out, None))
}

fn count(cmd: &CountCmd, c: &Common) -> Result<Value> {
    let k = c.degrees()?;
    Ok(match cmd {
        CountCmd::Exact { strategy } => {
            let strategy = match strategy {
                StrategyArg::Backtracking => Strategy::Backtracking,
                StrategyArg::RowDp => Strategy::RowDp,
            };
            let n = count_exact_with(
                k,
                &c.j,
                &c.jstar,
                CountOptions {
                    budget: c.budget,
                    strategy,
                },
            )?;
            json!({"mode": "exact", "count": big(&n), "strategy": to_value(&strategy)})
        }
        CountCmd::Region { region } => {
            let region: Region = region.parse()?;
            k.check_even()?;
            let th = Thresholds::new(k);
            let n = count_region_with(k, &c.j, &c.jstar, region, &th, c.budget)?;
            json!({"mode": "exact", "region": to_value(&region), "count": big(&n), "thresholds": to_value(&th)})
        }
        CountCmd::Class { ell, d, t } => {
            let sig = ClassSignature::new(*ell, *d, *t);
            let all = census(
                k,
                &MultiplicitySet::finite([0, 1]),
                &MultiplicitySet::finite([0, 1, 2, 3]),
                c.budget,
            )?;
            let n = all.get(&sig).cloned().unwrap_or_default();
            json!({
                "mode": "exact",
                "signature": to_value(&sig),
                "count": big(&n),
                "w": big(&w_weight(k, sig)?),
            })
        }
    })
}

fn p_mode(m: PModeArg) -> PMode {
    match m {
        PModeArg::Exact => PMode::SolvedExact,
        PModeArg::Pdef => PMode::AsymptoticPdef,
    }
}

fn naive_params(k: &DegreeSequence, c: &Common, p: Option<f64>, mode: PMode) -> Result<NaiveParams> {
    match p {
        Some(p) => Ok(NaiveParams::fixed(p)),
        None => {
            let kbar = k.total() as f64 / k.n() as f64;
            solve_p0(kbar, k.n(), &c.j, &c.jstar, mode)
        }
    }
}

fn estimate(cmd: &EstimateCmd, c: &Common) -> Result<Value> {
    Ok(match cmd {
        EstimateCmd::Theorem1 => estimate_payload("theorem1", &theorem1_estimate(c.degrees()?, &c.j, &c.jstar)?),
        EstimateCmd::Corollary { k, n } => {
            let est = corollary_regular_estimate(*k, *n, &c.j, &c.jstar)?;
            let q = corollary_q(*k, *n, &c.j, &c.jstar);
            let mut v = estimate_payload("corollary", &est);
            v["Q"] = json!(multideg::arith::rational_to_f64(&q));
            v["Q_exact"] = json!(q.to_string());
            v
        }
        EstimateCmd::Pairing => {
            let mut v = estimate_payload("pairing", &simple_pairing_asymptotic(c.degrees()?)?);
            v["counts"] = json!("pairings with no loops and no multiple pairs");
            v
        }
        EstimateCmd::Naive { p, p_mode: m } => {
            let k = c.degrees()?;
            validate(k, &c.j, &c.jstar)?;
            let params = naive_params(k, c, *p, p_mode(*m))?;
            let mut v = estimate_payload("naive", &g_naive(k, &c.j, &c.jstar, &params)?);
            v["params"] = to_value(&params);
            v
        }
        EstimateCmd::Theorem5 => {
            let k = c.degrees()?;
            let mut v = estimate_payload("theorem5", &theorem5_prediction(k, &c.j, &c.jstar)?);
            v["magic_factor"] = json!(magic_factor(c.j.indicator(2)));
            v
        }
    })
}

fn compare(c: &Common) -> Result<Value> {
    let k = c.degrees()?;
    let exact = count_exact_with(k, &c.j, &c.jstar, CountOptions {
        budget: c.budget,
        strategy: Strategy::RowDp,
    })?;
    let log_exact = if exact == BigUint::default() {
        f64::NEG_INFINITY
    } else {
        multideg::arith::ln_biguint(&exact)
    };
    let mut rows = Vec::new();
    let mut push = |name: &str, r: Result<Estimate>| {
        rows.push(match r {
            Ok(est) => json!({
                "estimator": name,
                "log_value": est.log_value,
                "estimate": est.value(),
                "log_difference": log_exact - est.log_value,
                "ratio_exact_over_estimate": (log_exact - est.log_value).exp(),
                "error_scale": est.error_scale_f64(),
            }),
            Err(e) => json!({"estimator": name, "error": e.name(), "message": e.to_string()}),
        })
    };
    push("theorem1", theorem1_estimate(k, &c.j, &c.jstar));
    if k.is_regular() && k.n() > 0 {
        push(
            "corollary",
            corollary_regular_estimate(k.degrees()[0], k.n(), &c.j, &c.jstar),
        );
    }
    push(
        "naive",
        validate(k, &c.j, &c.jstar).and_then(|_| {
            let params = naive_params(k, c, None, PMode::SolvedExact)?;
            g_naive(k, &c.j, &c.jstar, &params)
        }),
    );
    push("naive_corollary", naive_corollary_prediction(k, &c.j, &c.jstar));
    push("theorem5", theorem5_prediction(k, &c.j, &c.jstar));
    Ok(json!({
        "exact": {"mode": "exact", "count": big(&exact), "log_value": log_exact},
        "estimates": rows,
    }))
}

fn sample(what: SampleKind, seed: u64, reps: usize, n: Option<usize>, p: Option<f64>, c: &Common) -> Result<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match what {
        SampleKind::Pairing => {
            let k = c.degrees()?;
            let mut out = Vec::with_capacity(reps);
            for _ in 0..reps {
                let pairing = sample_pairing_with(k, &mut rng)?;
                let g = project(&pairing);
                out.push(json!({
                    "pairing": to_value(&pairing),
                    "graph": to_value(&GraphFile::from_graph(&g)),
                    "respects": g.respects(&c.j, &c.jstar),
                }));
            }
            json!({"mode": "sample", "samples": out})
        }
        SampleKind::Matrix => {
            let (n, params) = match (n, p, c.degrees.as_ref()) {
                (Some(n), Some(p), _) => (n, NaiveParams::fixed(p)),
                (n, p, Some(k)) => (n.unwrap_or(k.n()), naive_params(k, c, p, PMode::SolvedExact)?),
                _ => return Err(Error::Parse("matrix sampling needs --n and --p, or --degrees".into())),
            };
            let mut out = Vec::with_capacity(reps);
            for _ in 0..reps {
                let g = sample_matrix_with(n, params.p, &c.j, &c.jstar, &mut rng)?;
                out.push(to_value(&GraphFile::from_graph(&g)));
            }
            json!({"mode": "sample", "params": to_value(&params), "samples": out})
        }
    })
}

fn parse_seq(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(Error::Parse(format!("bad vertex id {t:?} (1-based)"))),
        })
        .collect()
}

fn switch(what: SwitchKind, graph: &Path, colour: Option<u8>, seq: Option<&str>, c: &Common) -> Result<Value> {
    let q = read_json::<GraphFile>(graph)?.into_graph()?;
    let k = DegreeSequence::new(q.degrees());
    if let Some(given) = &c.degrees {
        if given.degrees() != k.degrees() {
            return Err(Error::InvalidInput("--degrees does not match the graph".into()));
        }
    }
    let ctx = SwitchContext::new(k.clone(), c.j.clone(), c.jstar.clone());
    let need_colour = || colour.ok_or_else(|| Error::Parse("--colour is required".into()));
    Ok(match what {
        SwitchKind::Stats => {
            let s = stats(&q);
            json!({
                "stats": to_value(&s),
                "thresholds": to_value(&ctx.thresholds),
                "in_g0": ctx.in_g0(&q),
                "in_z": s.in_z(&ctx.thresholds),
                "in_y": s.in_y(&ctx.thresholds),
            })
        }
        SwitchKind::Active => json!({"active": ctx.active_colour(&q)?}),
        SwitchKind::Moves => {
            let col = need_colour()?;
            let moves = enumerate_moves(&ctx, &q, col)?;
            json!({"colour": col, "count": moves.len(), "moves": to_value(&moves)})
        }
        SwitchKind::Apply => {
            let m = SwitchingMove {
                colour: need_colour()?,
                seq: parse_seq(seq.ok_or_else(|| Error::Parse("--seq is required".into()))?)?,
            };
            let r = apply_move(&q, &m, &ctx.thresholds)?;
            json!({"move": to_value(&m), "graph": to_value(&GraphFile::from_graph(&r))})
        }
        SwitchKind::Reverse => {
            let col = need_colour()?;
            let n = reverse_count(&ctx, &q, col)?;
            let pre: Vec<Value> = preimages(&ctx, &q, col)
                .into_iter()
                .map(|(g, m)| json!({"graph": to_value(&GraphFile::from_graph(&g)), "move": to_value(&m)}))
                .collect();
            json!({"colour": col, "count": big(&n), "preimages": pre})
        }
    })
}

fn verify(cmd: &VerifyCmd, c: &Common) -> Result<Value> {
    Ok(match cmd {
        VerifyCmd::Theorem2 { network } => {
            let file: NetworkFile = read_json(network)?;
            let (net, y, z) = file.build()?;
            let feas = feasible(&net);
            let cert = verify_bound(&net, &y, &z)?;
            json!({
                "feasible": feas.ok,
                "violations": to_value(&feas.violations),
                "lhs": cert.lhs,
                "rhs": cert.rhs,
                "max_yz": cert.max_yz,
                "max_yy": cert.max_yy,
                "holds": cert.holds && feas.ok,
            })
        }
        VerifyCmd::Switchings { graph } => {
            let q = read_json::<GraphFile>(graph)?.into_graph()?;
            let k = DegreeSequence::new(q.degrees());
            let ctx = SwitchContext::new(k.clone(), c.j.clone(), c.jstar.clone());
            let s = stats(&q);
            let Some(col) = active_colour_of(&s, &ctx.thresholds).filter(|_| ctx.in_g0(&q)) else {
                ctx.check_g0(&q)?;
                return Ok(json!({"active": null, "moves": 0, "sound": true}));
            };
            let bounds = nominal_bounds(col, &k, &s)?;
            let b = bounds.b.to_f64();
            let moves = enumerate_moves(&ctx, &q, col)?;
            let mut failures = Vec::new();
            for m in &moves {
                let r = apply_move(&q, m, &ctx.thresholds)?;
                let back = reverse_count(&ctx, &r, col)?;
                let recovered = preimages(&ctx, &r, col).contains(&(q.clone(), m.clone()));
                let back_f: f64 = back.to_string().parse().unwrap_or(f64::INFINITY);
                let ok = r.degrees() == q.degrees() && ctx.in_g0(&r) && recovered && back_f <= b * (1.0 + 1e-12);
                if !ok {
                    failures.push(json!({"move": to_value(m), "reverse_count": big(&back), "recovered": recovered}));
                }
            }
            json!({
                "active": col,
                "moves": moves.len(),
                "nominal": to_value(&bounds),
                "failures": failures,
                "sound": failures.is_empty(),
            })
        }
        VerifyCmd::Summation { spec, form } => {
            let env = match form {
                SummationForm::F41 => sum_with_bounds_41(&read_json::<Spec41>(spec)?)?,
                SummationForm::F42 => sum_with_bounds_42(&read_json::<Spec42>(spec)?)?,
            };
            json!({"sum": env.sum, "sigma1": env.sigma1, "sigma2": env.sigma2, "holds": env.contains_sum()})
        }
    })
}
