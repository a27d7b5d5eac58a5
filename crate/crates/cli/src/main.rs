use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use ipslab::config::{write_output, CsvWriter, Envelope, ExperimentConfig};
use ipslab::{exhaustive_limit, pipelines};
use ipslab_core::algebra::{
    poly_from_json_str, poly_to_json, FieldSpec, MonomialOrder, SparsePoly, VarId,
};
use ipslab_core::hypercube::{boolean_inverse, coeff_on_support, is_unsat_on_cube};
use ipslab_core::instances::{self, BlockNames, KChoice, PiChoice, SubsetMode};
use ipslab_core::measures::{kalorkoti_bound, rank_over_function_field};
use ipslab_core::refute::{
    build_subset_sum_refutation, certificate_from_json, certificate_to_json,
    functional_check_mult_ips, lift_sparse_refutation, verify_exact, verify_randomized,
    CertificateJson,
};
use ipslab_core::roabp::{
    multilinearize_sum_with_witnesses, roabp_from_json, roabp_to_json, sum_from_json, sum_to_json,
    weakness_experiment, RoabpJson, SumRoabpJson,
};

#[derive(Parser)]
#[command(
    name = "ipslab",
    version,
    about = "Exact desk-scale experiments on refutations over the Boolean hypercube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Coefficient field: Q, Fp:<p>, or Fpk:p=<p>,k=<k>
    #[arg(long, global = true)]
    field: Option<String>,
    /// Seed for every randomized component
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trial count for randomized components
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the exhaustive-enumeration variable limit
    #[arg(long, global = true)]
    guard_vars: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an axiom instance plus its sidecar descriptor
    Gen(GenArgs),
    /// Multilinear inverse of an axiom on the Boolean cube
    Inverse {
        #[arg(long)]
        poly: PathBuf,
    },
    /// One coefficient of the inverse, by targeted extraction
    Coeff {
        #[arg(long)]
        poly: PathBuf,
        /// Comma-separated support variables
        #[arg(long)]
        support: String,
    },
    /// Complexity measures
    Measure {
        #[command(subcommand)]
        cmd: MeasureCmd,
    },
    /// Rank computations
    Rank {
        #[command(subcommand)]
        cmd: RankCmd,
    },
    /// Branching-program operations
    Roabp {
        #[command(subcommand)]
        cmd: RoabpCmd,
    },
    /// Certificate operations
    Refute {
        #[command(subcommand)]
        cmd: RefuteCmd,
    },
    /// End-to-end experiment pipelines
    Pipeline {
        #[command(subcommand)]
        cmd: PipelineCmd,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = ["blockwise", "smconst", "subset", "quadratic", "scaled", "vecinv", "esym"])]
    family: String,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    c: Option<u64>,
    #[arg(long)]
    d: Option<u64>,
    /// Shift constant, in the field's wire syntax
    #[arg(long)]
    beta: Option<String>,
    /// Characteristic for the scaled family
    #[arg(long)]
    p: Option<u64>,
    /// Explicit extension degree for the scaled family
    #[arg(long)]
    k: Option<u32>,
    /// Extension-degree rule when k is not given
    #[arg(long, value_parser = ["pairs", "central"])]
    k_rule: Option<String>,
    #[arg(long, value_parser = ["inclusive", "proper"])]
    subset_mode: Option<String>,
    /// List valid (n, c) pairs for the set-multilinear family and exit
    #[arg(long)]
    list_valid: bool,
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Per-block trailing-monomial rank bounds and their sum
    Kalorkoti {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        blocks: PathBuf,
        #[arg(long, default_value = "X>Y")]
        order: String,
    },
}

#[derive(Subcommand)]
enum RankCmd {
    /// Partial-derivative-matrix rank, optionally after substituting the
    /// leftover variables at random points mod p
    Pd {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, alias = "Y", value_name = "VARS")]
        y: String,
        #[arg(long, alias = "Z", value_name = "VARS")]
        z: String,
        /// Modular field for trials, e.g. Fp:2147483659
        #[arg(long)]
        over: Option<String>,
    },
}

#[derive(Subcommand)]
enum RoabpCmd {
    /// Extract the computed polynomial
    Extract {
        #[arg(long)]
        roabp: PathBuf,
    },
    /// Multilinearize the program (labels clamped to linear)
    Mult {
        #[arg(long)]
        roabp: PathBuf,
    },
    /// Multilinearize a sum and recover the Boolean-axiom witnesses
    Witnesses {
        #[arg(long)]
        sum: PathBuf,
    },
    /// Rank-collapse experiment over random balanced partitions
    Weakness {
        #[arg(long)]
        sum: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand)]
enum RefuteCmd {
    /// Build the explicit subset-sum certificate
    Build {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        beta: String,
    },
    /// Lift a sparse axiom through monomial substitution
    Lift {
        #[arg(long)]
        poly: PathBuf,
    },
    /// Verify a certificate (exit code 2 on failure)
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        randomized: bool,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Extract P(X,1,0) and compare it against the canonical inverse
    FunctionalCheck {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Subcommand)]
enum PipelineCmd {
    /// Blockwise instance: support structure, forced zeros, partition sum
    Theorem1 {
        #[arg(long, default_value_t = 4)]
        n: u64,
    },
    /// Constant-degree set-multilinear instance, targeted checks
    Constdeg {
        #[arg(long, default_value_t = 4)]
        n: u64,
        #[arg(long, default_value_t = 4)]
        c: u64,
    },
    /// Quadratic-instance rank across balanced partitions
    Fstw {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        prime: Option<u64>,
        /// Number of sampled partitions in dense mode
        #[arg(long, default_value_t = 5)]
        partitions: usize,
        /// Negative control: truncate the inverse to this total degree first
        #[arg(long)]
        truncate_deg: Option<u64>,
    },
    /// Rank-collapse experiment on a generated sum of random ROABPs
    Weakness {
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value_t = 4)]
        width: usize,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        q: usize,
        #[arg(long, default_value_t = 4)]
        r: usize,
    },
}

fn parse_field(g: &GlobalArgs) -> anyhow::Result<FieldSpec> {
    match &g.field {
        None => Ok(FieldSpec::rationals()),
        Some(s) => Ok(FieldSpec::parse(s)?),
    }
}

fn load_poly(path: &PathBuf) -> anyhow::Result<SparsePoly> {
    let s = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(poly_from_json_str(&s)?)
}

fn parse_vars(poly: &SparsePoly, list: &str) -> anyhow::Result<Vec<VarId>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            poly.vars()
                .id(name)
                .ok_or_else(|| anyhow!("unknown variable {name}"))
        })
        .collect()
}

#[derive(Serialize)]
struct GenOutput {
    poly: ipslab_core::algebra::PolyJson,
    descriptor: instances::InstanceDescriptor,
    unsat_on_cube: Option<bool>,
}

#[derive(Deserialize)]
struct BlocksFile {
    blocks: Vec<BlockNames>,
}

/// Accepts either a bare `{"blocks": [...]}` file or an enveloped descriptor
/// (`{"result": {"blocks": [...]}}`) as written by `gen --out`.
fn load_blocks(path: &PathBuf) -> anyhow::Result<Vec<BlockNames>> {
    let s = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&s)?;
    let node = if v.get("blocks").is_some() {
        v
    } else if let Some(r) = v.get("result") {
        r.clone()
    } else {
        bail!("{} has no blocks field", path.display());
    };
    let f: BlocksFile = serde_json::from_value(node)?;
    Ok(f.blocks)
}

fn emit<T: Serialize>(g: &GlobalArgs, config: ExperimentConfig, result: T) -> anyhow::Result<()> {
    let env = Envelope::new(config, result);
    write_output(g.out.as_deref(), &env.to_json_string())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let g = cli.global.clone();
    let limit = exhaustive_limit(g.guard_vars);
    let seed = g.seed.unwrap_or(7);
    let trials = g.trials.unwrap_or(3);
    let default_prime = ipslab_core::algebra::field::default_rank_prime();
    match cli.command {
        Command::Gen(args) => run_gen(&g, args, limit, seed),
        Command::Inverse { poly } => {
            let f = load_poly(&poly)?;
            let inv = boolean_inverse(&f, limit)?;
            let config = ExperimentConfig::new("inverse")
                .set("poly", poly.display())
                .set("guard_vars", limit);
            emit(&g, config, poly_to_json(inv.inverse()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Coeff { poly, support } => {
            let f = load_poly(&poly)?;
            let vars = parse_vars(&f, &support)?;
            let s: BTreeSet<VarId> = vars.into_iter().collect();
            let c = coeff_on_support(&f, &s)?;
            let config = ExperimentConfig::new("coeff")
                .set("poly", poly.display())
                .set("support", &support);
            #[derive(Serialize)]
            struct CoeffOut {
                support: Vec<String>,
                coeff: String,
            }
            let out = CoeffOut {
                support: s.iter().map(|&v| f.vars().name(v).to_string()).collect(),
                coeff: f.field().value_to_string(&c),
            };
            emit(&g, config, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Measure {
            cmd: MeasureCmd::Kalorkoti {
                poly,
                blocks,
                order,
            },
        } => {
            let f = load_poly(&poly)?;
            let block_list = load_blocks(&blocks)?;
            let block_ids = block_list
                .iter()
                .map(|b| {
                    let ids = b
                        .vars
                        .iter()
                        .map(|n| {
                            f.vars()
                                .id(n)
                                .ok_or_else(|| anyhow!("unknown variable {n}"))
                        })
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    Ok((b.name.clone(), ids))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let partition = ipslab_core::algebra::VarPartition::new(block_ids)?;
            let ord = MonomialOrder::parse(&order, f.vars())?;
            let report = kalorkoti_bound(&f, &partition, &ord)?;
            let config = ExperimentConfig::new("measure kalorkoti")
                .set("poly", poly.display())
                .set("blocks", blocks.display())
                .set("order", &order);
            #[derive(Serialize)]
            struct BlockOut {
                name: String,
                bound: usize,
                trailing_monomials: Vec<String>,
            }
            #[derive(Serialize)]
            struct KalOut {
                blocks: Vec<BlockOut>,
                sum: usize,
            }
            let out = KalOut {
                blocks: report
                    .blocks
                    .iter()
                    .map(|b| BlockOut {
                        name: b.name.clone(),
                        bound: b.tm.bound,
                        trailing_monomials: b
                            .tm
                            .tm_set
                            .iter()
                            .map(|m| m.display(f.vars()))
                            .collect(),
                    })
                    .collect(),
                sum: report.sum,
            };
            if g.format.as_deref() == Some("csv") {
                let mut csv = CsvWriter::new(&config);
                for b in &out.blocks {
                    csv.row(
                        "kalorkoti",
                        f.vars().len(),
                        &f.field().to_string(),
                        "-",
                        &format!("block_bound:{}", b.name),
                        b.bound,
                        "-",
                        true,
                    );
                }
                csv.row(
                    "kalorkoti",
                    f.vars().len(),
                    &f.field().to_string(),
                    "-",
                    "sum",
                    out.sum,
                    "-",
                    true,
                );
                write_output(g.out.as_deref(), &csv.render())?;
            } else {
                emit(&g, config, out)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rank {
            cmd: RankCmd::Pd { poly, y, z, over },
        } => {
            let f = load_poly(&poly)?;
            let yv = parse_vars(&f, &y)?;
            let zv = parse_vars(&f, &z)?;
            let config = ExperimentConfig::new("rank pd")
                .set("poly", poly.display())
                .set("y", &y)
                .set("z", &z)
                .set("trials", trials)
                .set("seed", seed)
                .set_opt("over", over.as_ref());
            #[derive(Serialize)]
            struct RankOut {
                rank: usize,
                trial_ranks: Option<Vec<Option<usize>>>,
                discarded: usize,
            }
            let leftover: Vec<VarId> = f
                .support_vars()
                .into_iter()
                .filter(|v| !yv.contains(v) && !zv.contains(v))
                .collect();
            let out = if leftover.is_empty() && over.is_none() {
                let m = ipslab_core::measures::pd_matrix(&f, &yv, &zv)?;
                RankOut {
                    rank: ipslab_core::measures::rank_exact(&m)?,
                    trial_ranks: None,
                    discarded: 0,
                }
            } else {
                let prime = match &over {
                    Some(s) => match FieldSpec::parse(s)? {
                        FieldSpec::Prime(p) => p,
                        other => bail!("--over expects a prime field, got {other}"),
                    },
                    None => default_prime,
                };
                let rep = rank_over_function_field(&f, &yv, &zv, trials, prime, seed)?;
                RankOut {
                    rank: rep.max_rank,
                    trial_ranks: Some(rep.ranks),
                    discarded: rep.discarded,
                }
            };
            if g.format.as_deref() == Some("csv") {
                let mut csv = CsvWriter::new(&config);
                csv.row(
                    "rank_pd",
                    f.vars().len(),
                    &f.field().to_string(),
                    seed,
                    "rank",
                    out.rank,
                    "-",
                    true,
                );
                write_output(g.out.as_deref(), &csv.render())?;
            } else {
                emit(&g, config, out)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Roabp { cmd } => run_roabp(&g, cmd, trials, seed),
        Command::Refute { cmd } => run_refute(&g, cmd, limit, trials, seed, default_prime),
        Command::Pipeline { cmd } => run_pipeline(&g, cmd, limit, trials, seed, default_prime),
    }
}

fn run_gen(g: &GlobalArgs, args: GenArgs, limit: usize, seed: u64) -> anyhow::Result<ExitCode> {
    let field = parse_field(g)?;
    let config = ExperimentConfig::new("gen")
        .set("family", &args.family)
        .set("field", field.to_string())
        .set_opt("n", args.n)
        .set_opt("c", args.c)
        .set_opt("d", args.d)
        .set_opt("beta", args.beta.as_ref())
        .set_opt("p", args.p)
        .set_opt("k", args.k)
        .set_opt("subset_mode", args.subset_mode.as_ref())
        .set("seed", seed);

    if args.list_valid {
        let valid = instances::list_valid_smconst(256, 4..=8);
        emit(g, config.set("list_valid", true), valid)?;
        return Ok(ExitCode::SUCCESS);
    }

    let n = args.n.ok_or_else(|| anyhow!("--n is required"))?;
    let beta_val = |default: i64| -> anyhow::Result<ipslab_core::algebra::Value> {
        match &args.beta {
            Some(s) => Ok(field.value_from_string(s)?),
            None => Ok(field.integer(default)),
        }
    };
    let (poly, descriptor) = match args.family.as_str() {
        "blockwise" => {
            let mode = match args.subset_mode.as_deref() {
                Some("proper") => SubsetMode::ProperNonempty,
                _ => SubsetMode::Inclusive,
            };
            let inst = instances::gen_blockwise_binary(n, &field, mode)?;
            (inst.poly, inst.descriptor)
        }
        "smconst" => {
            let c = args.c.ok_or_else(|| anyhow!("--c is required for smconst"))?;
            let pi = match g.seed {
                Some(s) => PiChoice::Seeded(s),
                None => PiChoice::Lex,
            };
            let inst = instances::gen_setmultilinear_constdeg(n, c, &field, pi)?;
            (inst.poly, inst.descriptor)
        }
        "subset" => {
            let beta = beta_val(n as i64 + 1)?;
            let inst = instances::gen_subset_sum(n, &beta, &field)?;
            (inst.poly, inst.descriptor)
        }
        "quadratic" => {
            let inst = instances::gen_quadratic_subset_sum(n, &field)?;
            (inst.poly, inst.descriptor)
        }
        "scaled" => {
            let p = args.p.ok_or_else(|| anyhow!("--p is required for scaled"))?;
            let k = match (args.k, args.k_rule.as_deref()) {
                (Some(k), _) => KChoice::Explicit(k),
                (None, Some("central")) => KChoice::RuleCentral,
                _ => KChoice::RulePairs,
            };
            let inst = instances::gen_scaled_quadratic(n, p, k, None, seed)?;
            (inst.poly, inst.descriptor)
        }
        "vecinv" => {
            let beta = beta_val(2)?;
            let inst = instances::gen_vector_invariant(n, &beta, &field)?;
            let unsat = if inst.poly.vars.len() <= limit {
                Some(inst.poly.is_unsat_on_cube(limit)?.unsat)
            } else {
                None
            };
            // factored instances serialize their factors
            #[derive(Serialize)]
            struct FactoredOut {
                factors: Vec<ipslab_core::algebra::PolyJson>,
                constant: String,
                descriptor: instances::InstanceDescriptor,
                unsat_on_cube: Option<bool>,
            }
            let out = FactoredOut {
                factors: inst.poly.factors.iter().map(poly_to_json).collect(),
                constant: field.value_to_string(&inst.poly.constant),
                descriptor: inst.descriptor,
                unsat_on_cube: unsat,
            };
            emit(g, config, out)?;
            return Ok(ExitCode::SUCCESS);
        }
        "esym" => {
            let d = args.d.ok_or_else(|| anyhow!("--d is required for esym"))?;
            let default_beta = {
                let mut b = 1i64;
                for i in 0..d {
                    b = b * (n - i) as i64 / (i + 1) as i64;
                }
                b + 1
            };
            let beta = beta_val(default_beta)?;
            let inst = instances::gen_elem_sym_axiom(n, d, &beta, &field)?;
            (inst.poly, inst.descriptor)
        }
        other => bail!("unknown family {other}"),
    };
    let unsat = if poly.vars().len() <= limit {
        Some(is_unsat_on_cube(&poly, limit)?.unsat)
    } else {
        None
    };
    let out = GenOutput {
        poly: poly_to_json(&poly),
        descriptor,
        unsat_on_cube: unsat,
    };
    if let Some(path) = &g.out {
        // poly to --out, descriptor to a sidecar
        write_output(Some(path), &serde_json::to_string_pretty(&out.poly)?)?;
        let sidecar = path.with_extension("desc.json");
        let env = Envelope::new(config, &out.descriptor);
        write_output(Some(&sidecar), &env.to_json_string())?;
    } else {
        emit(g, config, out)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_roabp(g: &GlobalArgs, cmd: RoabpCmd, trials: usize, seed: u64) -> anyhow::Result<ExitCode> {
    match cmd {
        RoabpCmd::Extract { roabp } => {
            let j: RoabpJson = serde_json::from_str(&std::fs::read_to_string(&roabp)?)?;
            let a = roabp_from_json(&j)?;
            let f = a.extract()?;
            let config = ExperimentConfig::new("roabp extract").set("roabp", roabp.display());
            emit(g, config, poly_to_json(&f))?;
            Ok(ExitCode::SUCCESS)
        }
        RoabpCmd::Mult { roabp } => {
            let j: RoabpJson = serde_json::from_str(&std::fs::read_to_string(&roabp)?)?;
            let a = roabp_from_json(&j)?;
            let config = ExperimentConfig::new("roabp mult").set("roabp", roabp.display());
            emit(g, config, roabp_to_json(&a.multilinearize()?))?;
            Ok(ExitCode::SUCCESS)
        }
        RoabpCmd::Witnesses { sum } => {
            let j: SumRoabpJson = serde_json::from_str(&std::fs::read_to_string(&sum)?)?;
            let s = sum_from_json(&j)?;
            let mw = multilinearize_sum_with_witnesses(&s)?;
            let config = ExperimentConfig::new("roabp witnesses").set("sum", sum.display());
            #[derive(Serialize)]
            struct WitnessOut {
                multilinearized: SumRoabpJson,
                witnesses: Vec<(String, ipslab_core::algebra::PolyJson)>,
            }
            let out = WitnessOut {
                multilinearized: sum_to_json(&mw.b),
                witnesses: mw
                    .witnesses
                    .iter()
                    .map(|(v, h)| (s.vars().name(*v).to_string(), poly_to_json(h)))
                    .collect(),
            };
            emit(g, config, out)?;
            Ok(ExitCode::SUCCESS)
        }
        RoabpCmd::Weakness { sum, q, r } => {
            let j: SumRoabpJson = serde_json::from_str(&std::fs::read_to_string(&sum)?)?;
            let s = sum_from_json(&j)?;
            let rep = weakness_experiment(&s, q, r, trials, seed)?;
            let config = ExperimentConfig::new("roabp weakness")
                .set("sum", sum.display())
                .set("q", q)
                .set("r", r)
                .set("trials", trials)
                .set("seed", seed);
            let code = if rep.cap_violations == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            };
            if g.format.as_deref() == Some("csv") {
                let mut csv = CsvWriter::new(&config);
                for (i, t) in rep.trials.iter().enumerate() {
                    csv.row(
                        "weakness",
                        rep.n,
                        &s.field().to_string(),
                        seed,
                        &format!("trial_{i}_rank"),
                        t.measured_rank,
                        t.summand_cap,
                        t.within_cap,
                    );
                }
                write_output(g.out.as_deref(), &csv.render())?;
            } else {
                emit(g, config, rep)?;
            }
            Ok(code)
        }
    }
}

fn run_refute(
    g: &GlobalArgs,
    cmd: RefuteCmd,
    limit: usize,
    trials: usize,
    seed: u64,
    default_prime: u64,
) -> anyhow::Result<ExitCode> {
    match cmd {
        RefuteCmd::Build { n, beta } => {
            let q = FieldSpec::rationals();
            let b = match q.value_from_string(&beta)? {
                ipslab_core::algebra::Value::Rat(r) => r,
                _ => unreachable!(),
            };
            let cert = build_subset_sum_refutation(n, &b)?;
            let config = ExperimentConfig::new("refute build")
                .set("n", n)
                .set("beta", &beta);
            emit(g, config, certificate_to_json(&cert))?;
            Ok(ExitCode::SUCCESS)
        }
        RefuteCmd::Lift { poly } => {
            let f = poly_from_json_str(&std::fs::read_to_string(&poly)?)?;
            let cert = lift_sparse_refutation(&f)?;
            let config = ExperimentConfig::new("refute lift").set("poly", poly.display());
            emit(g, config, certificate_to_json(&cert))?;
            Ok(ExitCode::SUCCESS)
        }
        RefuteCmd::Verify {
            cert,
            exact,
            randomized,
            prime,
        } => {
            let j: CertificateJson = serde_json::from_str(&std::fs::read_to_string(&cert)?)?;
            let c = certificate_from_json(&j)?;
            let mode_exact = exact || !randomized;
            let config = ExperimentConfig::new("refute verify")
                .set("cert", cert.display())
                .set("mode", if mode_exact { "exact" } else { "randomized" })
                .set("trials", trials)
                .set("seed", seed);
            #[derive(Serialize)]
            struct VerifyOut {
                ok: bool,
                mode: String,
                residual_terms: Option<usize>,
                residual: Option<ipslab_core::algebra::PolyJson>,
            }
            let (ok, residual) = if mode_exact {
                let out = verify_exact(&c)?;
                (out.ok, out.residual)
            } else {
                let p = prime.unwrap_or(default_prime);
                (verify_randomized(&c, trials, p, seed)?, None)
            };
            let out = VerifyOut {
                ok,
                mode: if mode_exact { "exact" } else { "randomized" }.into(),
                residual_terms: residual.as_ref().map(|r| r.num_terms()),
                residual: residual.as_ref().map(poly_to_json),
            };
            emit(g, config, out)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        RefuteCmd::FunctionalCheck { cert } => {
            let j: CertificateJson = serde_json::from_str(&std::fs::read_to_string(&cert)?)?;
            let c = certificate_from_json(&j)?;
            let rep = functional_check_mult_ips(&c, limit)?;
            let config =
                ExperimentConfig::new("refute functional-check").set("cert", cert.display());
            #[derive(Serialize)]
            struct FuncOut {
                verified: bool,
                g_multilinear: bool,
                cube_agreement: bool,
                matches_canonical: bool,
            }
            let out = FuncOut {
                verified: rep.verified,
                g_multilinear: rep.g_multilinear,
                cube_agreement: rep.cube_agreement,
                matches_canonical: rep.matches_canonical,
            };
            let ok = rep.verified && rep.cube_agreement;
            emit(g, config, out)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}

fn run_pipeline(
    g: &GlobalArgs,
    cmd: PipelineCmd,
    limit: usize,
    trials: usize,
    seed: u64,
    default_prime: u64,
) -> anyhow::Result<ExitCode> {
    let field = parse_field(g)?;
    match cmd {
        PipelineCmd::Theorem1 { n } => {
            let rep = pipelines::theorem1(n, &field, limit, seed)?;
            let config = ExperimentConfig::new("pipeline theorem1")
                .set("n", n)
                .set("field", field.to_string())
                .set("seed", seed)
                .set("guard_vars", limit);
            let ok = rep.support_ok && rep.zero_rule_ok;
            if g.format.as_deref() == Some("csv") {
                let mut csv = CsvWriter::new(&config);
                for b in &rep.blocks {
                    csv.row(
                        "blockwise",
                        n,
                        &rep.field,
                        seed,
                        &format!("block_bound:{}", b.name),
                        b.bound,
                        "-",
                        b.independent,
                    );
                }
                csv.row(
                    "blockwise",
                    n,
                    &rep.field,
                    seed,
                    "kalorkoti_sum",
                    rep.kalorkoti_sum,
                    rep.reference_bound,
                    rep.kalorkoti_sum as u64 >= rep.reference_bound,
                );
                write_output(g.out.as_deref(), &csv.render())?;
            } else {
                emit(g, config, &rep)?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        PipelineCmd::Constdeg { n, c } => {
            let rep = pipelines::constdeg(n, c, &field, seed)?;
            let config = ExperimentConfig::new("pipeline constdeg")
                .set("n", n)
                .set("c", c)
                .set("field", field.to_string())
                .set("seed", seed);
            let ok = rep.support_ok && rep.zero_rule_ok && rep.blocks.iter().all(|b| b.independent);
            if g.format.as_deref() == Some("csv") {
                let mut csv = CsvWriter::new(&config);
                for b in &rep.blocks {
                    csv.row(
                        "smconst",
                        n,
                        &rep.field,
                        seed,
                        &format!("block_bound:{}", b.name),
                        b.bound,
                        n * n,
                        b.bound as u64 >= n * n,
                    );
                }
                csv.row(
                    "smconst",
                    n,
                    &rep.field,
                    seed,
                    "sum",
                    rep.kalorkoti_sum,
                    "-",
                    ok,
                );
                write_output(g.out.as_deref(), &csv.render())?;
            } else {
                emit(g, config, &rep)?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        PipelineCmd::Fstw {
            n,
            prime,
            partitions,
            truncate_deg,
        } => {
            let p = prime.unwrap_or(default_prime);
            let rep = pipelines::fstw(n, trials, p, seed, partitions, truncate_deg, limit)?;
            let config = ExperimentConfig::new("pipeline fstw")
                .set("n", n)
                .set("prime", p)
                .set("trials", trials)
                .set("seed", seed)
                .set("partitions", partitions)
                .set_opt("truncate_deg", truncate_deg);
            let ok = rep.meets_bound;
            if g.format.as_deref() == Some("csv") {
                let mut csv = CsvWriter::new(&config);
                for (i, row) in rep.partitions.iter().enumerate() {
                    csv.row(
                        "quadratic",
                        n,
                        "Q",
                        seed,
                        &format!("partition_{i}_rank"),
                        row.rank,
                        rep.bound,
                        row.rank as u64 >= rep.bound,
                    );
                }
                csv.row(
                    "quadratic",
                    n,
                    "Q",
                    seed,
                    "min_rank",
                    rep.min_rank,
                    rep.bound,
                    rep.meets_bound,
                );
                write_output(g.out.as_deref(), &csv.render())?;
            } else {
                emit(g, config, &rep)?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        PipelineCmd::Weakness {
            t,
            width,
            n,
            q,
            r,
        } => {
            let rep = pipelines::weakness_generated(t, width, n, q, r, trials, seed, &field)?;
            let config = ExperimentConfig::new("pipeline weakness")
                .set("t", t)
                .set("width", width)
                .set("n", n)
                .set("q", q)
                .set("r", r)
                .set("trials", trials)
                .set("seed", seed)
                .set("field", field.to_string());
            let ok = rep.report.cap_violations == 0 && rep.sampler_marginal_ok;
            if g.format.as_deref() == Some("csv") {
                let mut csv = CsvWriter::new(&config);
                for (i, tr) in rep.report.trials.iter().enumerate() {
                    csv.row(
                        "weakness",
                        n,
                        &field.to_string(),
                        seed,
                        &format!("trial_{i}_rank"),
                        tr.measured_rank,
                        tr.summand_cap,
                        tr.within_cap,
                    );
                }
                csv.row(
                    "weakness",
                    n,
                    &field.to_string(),
                    seed,
                    "sampler_max_marginal_deviation",
                    format!("{:.4}", rep.sampler_max_marginal_deviation),
                    "0.02",
                    rep.sampler_marginal_ok,
                );
                write_output(g.out.as_deref(), &csv.render())?;
            } else {
                emit(g, config, &rep)?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
