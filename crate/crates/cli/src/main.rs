use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use gasket_cli::{figure, render_svg};
use gasket_core::verifier::{
    check_constants, check_geometry, derive_geometry, enumerate_candidates, find_ifs, recount_candidates,
    verify_attractor, verify_base_case, verify_theorem, Sabotage, VerifyOptions,
};

#[derive(Parser)]
#[command(name = "gasket", version, about = "Exact verifier for five Sierpinski gaskets in a line")]
struct Cli {
    /// Subdivision budget for subset and disjointness decisions.
    #[arg(long, global = true, default_value_t = 12)]
    depth_budget: u32,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Where `verify` writes the certificate.
    #[arg(long, global = true, default_value = "certificate.json")]
    cert_out: PathBuf,
    /// Seed for the sampled floating cross-check; never changes a verdict.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification and write the certificate.
    Verify {
        /// Negative control: corrupt one checked input.
        #[arg(long, hide = true)]
        sabotage: Option<Sabotage>,
    },
    /// Exhaustive check at scale 2^-m.
    BaseCase {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=6))]
        m: u32,
    },
    /// List (or count) the candidate similitudes at scale 2^-m.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=8))]
        m: u32,
        #[arg(long)]
        count_only: bool,
    },
    /// Search for an IFS whose attractor is n gaskets in a line.
    Ifs {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=5))]
        n: u32,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i32).range(1..=5))]
        max_scale: i32,
    },
    /// Write a figure as SVG.
    Render {
        /// 1..8, A<n> or B<n>.
        #[arg(long, allow_hyphen_values = true)]
        figure: String,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// Output path; `-` for stdout.
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Print the exact constant checks.
    Constants {
        #[arg(long, hide = true)]
        sabotage: Option<Sabotage>,
    },
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let budget = cli.depth_budget;
    match cli.command {
        Command::Verify { sabotage } => {
            let opts = VerifyOptions { depth_budget: budget, seed: cli.seed, sabotage, ..VerifyOptions::default() };
            let start = Instant::now();
            let cert = verify_theorem(&opts);
            fs::write(&cli.cert_out, cert.to_json()).with_context(|| format!("writing {}", cli.cert_out.display()))?;
            for b in &cert.base_cases {
                println!(
                    "m={} candidates={} admissible={} violations={} inconclusive={}",
                    b.m,
                    b.candidate_count,
                    b.admissible_count,
                    b.violations.len(),
                    b.inconclusive
                );
            }
            println!("verdict: {}", cert.verdict);
            if let Some(f) = &cert.first_failure {
                println!("first failure: {f}");
            }
            println!("certificate: {}", cli.cert_out.display());
            eprintln!("runtime: {:.2}s", start.elapsed().as_secs_f64());
            Ok(status(cert.passed()))
        }
        Command::BaseCase { m } => {
            let (marks, _) = derive_geometry()?;
            let start = Instant::now();
            let r = verify_base_case(m, &marks.tri_678, budget, cli.seed, 10);
            println!(
                "m={} candidates={} recount={} admissible={} up_cells={} violations={} inconclusive={} monotone_k={} \
                 max_depth={} witnesses={}/{}",
                r.m,
                r.candidate_count,
                r.recount,
                r.admissible_count,
                r.up_cell_images,
                r.violations.len(),
                r.inconclusive,
                r.monotone_k,
                r.max_depth_used,
                r.witnesses.verified,
                r.witnesses.emitted
            );
            println!("digest={}", r.decisions_digest);
            eprintln!("runtime: {:.2}s", start.elapsed().as_secs_f64());
            Ok(status(r.holds()))
        }
        Command::Enumerate { m, count_only } => {
            let c = enumerate_candidates(m);
            if count_only {
                println!("m={m} candidates={} recount={}", c.len(), recount_candidates(m));
            } else {
                for f in &c {
                    println!("{f}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ifs { n, max_scale } => {
            let s = find_ifs(n, max_scale);
            match &s.ifs {
                Some(ifs) => {
                    for f in ifs.maps() {
                        println!("{f}");
                    }
                    let d = verify_attractor(ifs, n, budget);
                    println!("n={n} maps={} {} attractor: {d}", ifs.maps().len(), s.note);
                    Ok(status(d.is_holds()))
                }
                None => {
                    println!("n={n} none up to scale 2^-{max_scale} (non-conclusive): {}", s.note);
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Render { figure: name, depth, out } => {
            let svg = render_svg(&figure(&name)?, depth)?;
            if out.as_os_str() == "-" {
                print!("{svg}");
            } else {
                fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Constants { sabotage } => {
            let (mut marks, _) = derive_geometry()?;
            if let Some(s) = sabotage {
                marks.apply(s);
            }
            let report = check_geometry(&marks, budget);
            let checks = check_constants(&marks, &report);
            for c in &checks {
                println!("{c}");
            }
            Ok(status(checks.iter().all(|c| c.holds)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
