use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use dcover_core::arrangements::{automorphism_group, ch_passes, cynk_hulek_report};
use dcover_core::ffcore::{odd_primes_in, FieldCtx};
use dcover_core::hypergeometric::hypergeometric_table;
use dcover_core::modforms::{cm_coefficients, default_data_dir};
use dcover_core::quotients::{count_quotient, QuotientSpec};
use dcover_core::workbench::report::render_parts;
use dcover_core::workbench::{self, render, render_run, Cache, Format, Variety, Workbench, CLAIMS};
use dcover_core::{Error, Method};

#[derive(Parser)]
#[command(name = "dcover", version, about = "Point counts of double covers branched along hyperplane arrangements")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSONL result cache (default: $DCOVER_CACHE or ./pointcounts.jsonl).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Do not read or write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Recompute cached counts and check them against the cache.
    #[arg(long, global = true)]
    recompute: bool,
    /// Directory with coefficient and arrangement files.
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the Hilbert 90 trivialization.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// csv, json or markdown.
    #[arg(long, global = true, default_value = "markdown")]
    format: String,
}

#[derive(Args)]
struct Primes {
    /// A single odd prime.
    #[arg(short, long)]
    prime: Option<u32>,
    /// Odd primes in an inclusive range, e.g. 3..31.
    #[arg(long)]
    range: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Count points of a variety.
    Count {
        /// f1, v32, k32, k_minus_one, l_minus_one, script_l, k_lambda@N, l_lambda@N or a file.
        variety: String,
        /// Prime, as an alternative to --prime.
        at: Option<u32>,
        /// Method, as an alternative to --method.
        how: Option<String>,
        #[command(flatten)]
        primes: Primes,
        /// brute, fibration, formula or hypergeometric.
        #[arg(long)]
        method: Option<String>,
    },
    /// Check a registered claim over a range of primes.
    Verify {
        /// Claim id; `list` prints the registry.
        claim: String,
        /// Lower and upper prime bounds, as an alternative to --range.
        #[arg(num_args = 0..=2)]
        bounds: Vec<u32>,
        #[command(flatten)]
        primes: Primes,
    },
    /// Tables of every cached count and verification run.
    Report,
    /// CM and level-8 coefficients as CSV.
    Forms {
        #[command(flatten)]
        primes: Primes,
    },
    /// p^2 3F2(lambda) and 3A2(p, lambda) as CSV.
    Hypergeo {
        #[command(flatten)]
        primes: Primes,
    },
    /// Crepant-resolution criterion and automorphism group of an arrangement.
    Analyze {
        /// Bundled cover name or arrangement file.
        variety: String,
    },
    /// Count points of a quotient by a group of lifted automorphisms.
    Quotient {
        /// iota1, iota2, iota3, alpha1, alpha2, alpha1alpha2, g4 or a quotient spec file.
        group: String,
        #[command(flatten)]
        primes: Primes,
        /// quotient-h90 or quotient-brute.
        #[arg(long, default_value = "quotient-h90")]
        method: String,
    },
}

fn parse_range(primes: &Primes, default: Option<(u32, u32)>) -> anyhow::Result<(u32, u32)> {
    match (primes.prime, &primes.range) {
        (Some(p), None) => Ok((p, p)),
        (None, Some(r)) => {
            let (a, b) = r
                .split_once("..")
                .or_else(|| r.split_once('-'))
                .ok_or_else(|| anyhow!(Error::Domain { op: "range", detail: format!("expected LO..HI, got {r}") }))?;
            let lo = a.trim().parse().map_err(|_| anyhow!(Error::Domain { op: "range", detail: format!("bad bound {a}") }))?;
            let hi = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| anyhow!(Error::Domain { op: "range", detail: format!("bad bound {b}") }))?;
            Ok((lo, hi))
        }
        (None, None) => default.ok_or_else(|| {
            anyhow!(Error::Domain {
                op: "primes",
                detail: "give --prime or --range".into()
            })
        }),
        (Some(_), Some(_)) => Err(anyhow!(Error::Domain {
            op: "primes",
            detail: "--prime and --range are exclusive".into()
        })),
    }
}

fn primes_in(lo: u32, hi: u32) -> anyhow::Result<Vec<u32>> {
    if lo == hi {
        FieldCtx::new(lo as u64)?;
        return Ok(vec![lo]);
    }
    Ok(odd_primes_in(lo as u64, hi as u64))
}

fn config(detail: String) -> anyhow::Error {
    anyhow!(Error::Domain { op: "arguments", detail })
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let g = &cli.global;
    if let Some(j) = g.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| config(e.to_string()))?;
    }
    let format = Format::parse(&g.format).ok_or_else(|| config(format!("unknown format {}", g.format)))?;
    let data_dir = g.data_dir.clone().unwrap_or_else(default_data_dir);
    let cache = if g.no_cache {
        None
    } else {
        let path = g.cache.clone().unwrap_or_else(workbench::default_cache_path);
        Some(Cache::open(&path).with_context(|| format!("opening cache {}", path.display()))?)
    };
    let mut wb = Workbench::new(cache, data_dir, g.seed);
    wb.recompute = g.recompute;

    match &cli.command {
        Command::Count {
            variety,
            at,
            how,
            primes,
            method,
        } => {
            let method = method.as_deref().or(how.as_deref()).unwrap_or("brute");
            let m = Method::parse(method).ok_or_else(|| config(format!("unknown method {method}")))?;
            let v = Variety::parse(variety)?;
            let (lo, hi) = parse_range(primes, at.map(|p| (p, p)))?;
            let mut recs = Vec::new();
            for p in primes_in(lo, hi)? {
                recs.push(wb.count(&v, p, m)?);
            }
            print!("{}", render_parts(recs.iter().collect(), &[], format));
            Ok(true)
        }
        Command::Verify { claim, bounds, primes } => {
            if claim == "list" {
                for c in CLAIMS {
                    let tag = if c.conjecture { " (conjecture)" } else { "" };
                    println!("{}{tag}: {}", c.id, c.statement);
                }
                return Ok(true);
            }
            let default = match bounds.as_slice() {
                [] => (3, 19),
                [p] => (*p, *p),
                [lo, hi, ..] => (*lo, *hi),
            };
            let (lo, hi) = parse_range(primes, Some(default))?;
            let run = wb.verify(claim, lo, hi)?;
            print!("{}", render_run(&run, format));
            if format != Format::Markdown {
                eprintln!("{}: {}", run.claim, run.summary);
            }
            Ok(run.pass)
        }
        Command::Report => {
            let cache = wb.cache.as_ref().ok_or_else(|| config("report needs the cache".into()))?;
            print!("{}", render(cache, format)?);
            Ok(true)
        }
        Command::Forms { primes } => {
            let (lo, hi) = parse_range(primes, Some((3, 97)))?;
            let l8 = wb.level8()?.clone();
            println!("p,a2,a3,a4,a6,a_p,b_p");
            for p in primes_in(lo, hi)? {
                let [a2, a3, a4, a6] = cm_coefficients(p)?;
                let a = l8.weight6.coeff(p as u64)?;
                let b = l8.weight4.coeff(p as u64)?;
                println!("{p},{a2},{a3},{a4},{a6},{a},{b}");
            }
            Ok(true)
        }
        Command::Hypergeo { primes } => {
            let (lo, hi) = parse_range(primes, None)?;
            println!("p,lambda,p2_f32,a32");
            for p in primes_in(lo, hi)? {
                for (p, l, f, a) in hypergeometric_table(&FieldCtx::new(p as u64)?)? {
                    println!("{p},{l},{f},{}", a.map_or_else(String::new, |a| a.to_string()));
                }
            }
            Ok(true)
        }
        Command::Analyze { variety } => {
            let spec = match Variety::parse(variety)? {
                Variety::Bundled(s) | Variety::File(s) | Variety::Family { spec: s, .. } => s,
                Variety::ScriptL => return Err(config("script_l is not a cover of projective space".into())),
            };
            let reports = cynk_hulek_report(&spec)?;
            let failures: Vec<_> = reports.iter().filter(|r| !r.ch_ok).collect();
            println!("{}: {} forms in P^{}", spec.name(), spec.forms().len(), spec.dim());
            println!("criterion: {}", if ch_passes(&reports) { "pass" } else { "fail" });
            for r in &failures {
                let forms: Vec<String> = r.subset.iter().map(|&i| format!("{:?}", spec.forms()[i])).collect();
                let at = r.point.as_ref().map_or_else(String::new, |pt| format!(" at {pt:?}"));
                println!("  fails on {} (dim {}){at}", forms.join(" "), r.intersection_dim);
            }
            let group = automorphism_group(&spec)?;
            let s = group.structure();
            println!(
                "automorphisms: {} projective, {} on the cover; center {}, exponent {}, C2 x G32: {}",
                group.pgl_order(),
                group.cover_order(),
                s.center_order,
                s.exponent,
                s.c2_times_g32
            );
            for gen in &group.generators {
                println!("  generator {:?}", gen.matrix);
            }
            Ok(true)
        }
        Command::Quotient { group, primes, method } => {
            let q = if std::path::Path::new(group).exists() {
                QuotientSpec::from_json(&std::fs::read_to_string(group)?)?
            } else {
                QuotientSpec::named(group)?
            };
            let brute = match Method::parse(method) {
                Some(Method::QuotientH90) => false,
                Some(Method::QuotientBrute) => true,
                _ => return Err(config(format!("unknown quotient method {method}"))),
            };
            let (lo, hi) = parse_range(primes, None)?;
            println!("quotient,p,method,order,count");
            for p in primes_in(lo, hi)? {
                let ctx = FieldCtx::new(p as u64)?;
                let r = count_quotient(&ctx, &q.spec, &q.group, brute, g.seed)?;
                println!("{group},{p},{},{},{}", r.record.method.as_str(), q.group.len(), r.record.count);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli);
    let code = match &outcome {
        Ok(pass) => workbench::exit_code(&Ok(*pass)),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(inner) if !inner.is_configuration() => workbench::EXIT_FAIL,
                _ => workbench::EXIT_CONFIG,
            }
        }
    };
    ExitCode::from(code as u8)
}
