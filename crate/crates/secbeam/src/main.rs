use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use secbeam::allocator::{allocate, sweep, SolveStatus, SweepAxis};
use secbeam::oracle::{grid_problem1, grid_problem2, random_scenario};
use secbeam::public::{solve_problem2, PublicVariant};
use secbeam::scenario::{load_scenario, paper_n2j3, ChannelScenario, EveCsi, SolveConfig};
use secbeam::secret::solve_problem1;
use std::error::Error;
use std::io::Write;
use std::path::PathBuf;

/// Power allocation and relay beamforming for a decode-and-forward network
/// with one secret and one non-secret message.
#[derive(Parser)]
#[command(name = "secbeam", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the allocation.
    Solve(SolveArgs),
    /// Solve along a parameter axis and write the results as CSV.
    Sweep(SweepArgs),
    /// Compare the solver against the independent grid oracle on random
    /// instances.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config with `scenario` and `solve` sections; defaults to the
    /// bundled two-relay, three-eavesdropper example.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the total power budget, in dB.
    #[arg(long, allow_negative_numbers = true)]
    total_power_db: Option<f64>,
    /// Override the fixed public rate R0, in bits per channel use.
    #[arg(long)]
    public_rate: Option<f64>,
    /// Override the RNG seed used for rank-one randomization.
    #[arg(long)]
    seed: Option<u64>,
    /// Require every eavesdropper to decode the public stream.
    #[arg(long)]
    eve_decode_public: bool,
    /// Use the statistical-CSI surrogate for the eavesdropper channels.
    #[arg(long)]
    statistical_csi: bool,
    /// Number of worker threads (defaults to all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Write the per-split search trace to this file as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy)]
enum AxisArg {
    #[value(name = "power_db")]
    PowerDb,
    #[value(name = "public_rate")]
    PublicRate,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Quantity varied along the sweep.
    #[arg(long, value_enum)]
    axis: AxisArg,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long)]
    points: usize,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of random instances to check.
    #[arg(long, default_value_t = 5)]
    trials: usize,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, Box<dyn Error>> {
    match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Sweep(args) => run_sweep(args),
        Command::OracleCheck(args) => run_oracle_check(args),
    }
}

fn load(common: &CommonArgs) -> Result<(ChannelScenario, SolveConfig), Box<dyn Error>> {
    let (mut sc, mut cfg) = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            load_scenario(&text)?
        }
        None => {
            let doc = paper_n2j3();
            (doc.scenario, doc.solve)
        }
    };
    if let Some(db) = common.total_power_db {
        cfg.total_power_db = db;
    }
    if let Some(r0) = common.public_rate {
        cfg.public_rate = r0;
    }
    if let Some(seed) = common.seed {
        cfg.rng_seed = seed;
    }
    if common.eve_decode_public {
        cfg.eve_must_decode_public = true;
    }
    if common.statistical_csi {
        sc.eve_csi = EveCsi::Statistical;
    }
    if let Some(jobs) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| format!("cannot set --jobs: {e}"))?;
    }
    sc.validate()?;
    cfg.validate()?;
    secbeam::scenario::validate_pair(&sc, &cfg)?;
    Ok((sc, cfg))
}

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn fmt_vec(v: &[Complex64]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|z| format!("{:.6}{:+.6}i", z.re, z.im))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn run_solve(args: SolveArgs) -> Result<i32, Box<dyn Error>> {
    let (sc, cfg) = load(&args.common)?;
    let sol = allocate(&sc, &cfg);
    if let Some(path) = &args.trace {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        w.write_record(["m", "P_m", "Rs", "public_total", "public_feasible"])?;
        for step in &sol.trace {
            w.write_record([
                step.m.to_string(),
                format!("{:.6}", step.p_m),
                format!("{:.6}", step.rs),
                format!("{:.6}", step.public_total),
                step.public_feasible.to_string(),
            ])?;
        }
        w.flush()?;
    }

    let budget = cfg.total_power();
    let csi = match sc.eve_csi {
        EveCsi::Perfect => "perfect",
        EveCsi::Statistical => "statistical",
    };
    println!(
        "scenario: {} relays, {} eavesdroppers, {csi} eavesdropper CSI",
        sc.n_relays, sc.n_eves
    );
    println!(
        "budget: {budget:.6} ({:.2} dB), public rate R0 = {:.6} bit/use",
        cfg.total_power_db, cfg.public_rate
    );

    if sol.status == SolveStatus::PublicInfeasible {
        println!("status: infeasible — the public rate cannot be served within the budget");
        if let Some(reason) = &sol.public.reason {
            println!("reason: {reason}");
        }
        println!("splits tried: {}", sol.trace.len());
        return Ok(2);
    }

    let alloc = sol.allocation();
    let m_star = sol.m_star.expect("solved implies a winning split");
    println!(
        "status: solved (m* = {m_star} of {} splits, secret budget P_m = {:.6})",
        cfg.power_steps, sol.p_m
    );
    println!("secrecy rate Rs: {:.6} bit/use", sol.rates.secrecy_rate);
    println!("powers (linear / dB):");
    let pr0 = secbeam::rates::norm2(&alloc.phi);
    let psi2 = secbeam::rates::norm2(&alloc.psi);
    for (name, val) in [
        ("Ps0", alloc.ps0),
        ("Ps1", alloc.ps1),
        ("P_R0", pr0),
        ("|psi|^2", psi2),
    ] {
        println!("  {name:<8} {val:>12.6} / {:>8.2} dB", db(val));
    }
    println!(
        "  {:<8} {:>12.6} of {budget:.6} (slack {:.6})",
        "total",
        alloc.total_power(),
        budget - alloc.total_power()
    );
    println!("public beam direction phi_u: {}", fmt_vec(&sol.public.phi_u));
    println!("secret beam psi:             {}", fmt_vec(&alloc.psi));
    let worst_eve = sol
        .rates
        .eve_secret_rates
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let min_relay_public = sol
        .rates
        .relay_public_rates
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    println!("rates (bit/use):");
    println!(
        "  public: relays min {:.6}, destination {:.6} (target {:.6})",
        min_relay_public, sol.rates.dest_public_rate, cfg.public_rate
    );
    if sc.n_eves > 0 {
        println!(
            "  secret: destination {:.6}, worst eavesdropper {:.6}",
            sol.rates.dest_secret_rate, worst_eve
        );
    } else {
        println!("  secret: destination {:.6}", sol.rates.dest_secret_rate);
    }
    let variant = match sol.public.variant {
        PublicVariant::DestOnly => "destination-only",
        PublicVariant::EveDecode => "everyone-decodes",
    };
    println!("diagnostics:");
    println!(
        "  bisection iterations {}, relaxation rate {:.6}, rank-1 defect {:.2e}",
        sol.secret.bisect_iters, sol.secret.relax_rate, sol.secret.rank1_defect
    );
    println!("  public variant: {variant}");
    if sol.secret.clamped {
        println!("  note: raw secrecy objective was negative and clamped to zero");
    }
    Ok(0)
}

fn run_sweep(args: SweepArgs) -> Result<i32, Box<dyn Error>> {
    let (sc, cfg) = load(&args.common)?;
    let axis = match args.axis {
        AxisArg::PowerDb => SweepAxis::PowerDb,
        AxisArg::PublicRate => SweepAxis::PublicRate,
    };
    let rows = sweep(&sc, &cfg, axis, args.from, args.to, args.points);
    let out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(
            std::fs::File::create(path)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "axis",
        "value",
        "Rs",
        "m_star",
        "feasible",
        "Ps0",
        "Ps1",
        "PR0",
        "psi_norm2",
    ])?;
    for row in &rows {
        w.write_record([
            row.axis.column_name().to_string(),
            format!("{:.6}", row.axis_value),
            format!("{:.6}", row.rs),
            row.m_star.map_or(String::new(), |m| m.to_string()),
            row.feasible.to_string(),
            format!("{:.6}", row.ps0),
            format!("{:.6}", row.ps1),
            format!("{:.6}", row.pr0),
            format!("{:.6}", row.psi_norm2),
        ])?;
    }
    w.flush()?;
    Ok(0)
}

const ORACLE_P1_TOL: f64 = 2e-2;
const ORACLE_P2_TOL: f64 = 1e-3;

fn run_oracle_check(args: OracleArgs) -> Result<i32, Box<dyn Error>> {
    let (_, cfg) = load(&args.common)?;
    if args.trials == 0 {
        eprintln!("warning: --trials 0 requested; no instances were checked");
        println!("oracle check passed (vacuously)");
        return Ok(0);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.rng_seed);
    let mut max_p1 = 0.0f64;
    let mut max_p2 = 0.0f64;
    let mut mismatch = false;
    for trial in 0..args.trials {
        let n_eves = 1 + trial % 3;
        let csi = if trial % 2 == 0 {
            EveCsi::Perfect
        } else {
            EveCsi::Statistical
        };
        let sc = random_scenario(&mut rng, n_eves, csi);
        let p_m = rng.gen_range(0.5..4.0);
        let r0 = rng.gen_range(0.1..0.8);
        let budget = rng.gen_range(1.0..4.0);

        let secret = solve_problem1(&sc, p_m, &cfg);
        let grid1 = grid_problem1(&sc, p_m);
        let dev1 = (secret.secrecy_rate - grid1.rs).abs();
        max_p1 = max_p1.max(dev1);

        let mut p2_cfg = cfg.clone();
        p2_cfg.public_rate = r0;
        p2_cfg.eve_must_decode_public = csi == EveCsi::Perfect && trial % 2 == 0;
        let public = solve_problem2(&sc, &p2_cfg, budget, secret.ps1, &secret.psi);
        let grid2 = grid_problem2(
            &sc,
            r0,
            budget,
            secret.ps1,
            &secret.psi,
            &public.phi_u,
            p2_cfg.eve_must_decode_public,
        );
        let dev2 = match (public.feasible, grid2) {
            (true, Some((total, _, _))) => (total - public.total).abs(),
            (false, None) => 0.0,
            _ => {
                mismatch = true;
                f64::INFINITY
            }
        };
        max_p2 = max_p2.max(dev2);
        println!(
            "trial {}/{}: J={n_eves} {} Rs {:.4}  P1 dev {dev1:.2e}  P2 dev {dev2:.2e}",
            trial + 1,
            args.trials,
            if csi == EveCsi::Perfect {
                "perfect    "
            } else {
                "statistical"
            },
            secret.secrecy_rate,
        );
    }
    println!("max P1 deviation {max_p1:.2e} (tolerance {ORACLE_P1_TOL:.1e})");
    println!("max P2 deviation {max_p2:.2e} (tolerance {ORACLE_P2_TOL:.1e})");
    if max_p1 > ORACLE_P1_TOL || max_p2 > ORACLE_P2_TOL || mismatch {
        eprintln!("oracle check FAILED");
        return Ok(1);
    }
    println!("oracle check passed");
    Ok(0)
}
