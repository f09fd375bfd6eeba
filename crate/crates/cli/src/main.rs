//! `tam`: command-line front end for tam-core.
//!
//! Exit codes: 0 for an affirmative verdict, 1 for a negative one, 2 for
//! input or usage errors. Verdicts go to stdout, diagnostics to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tam_core::assembly_tree::validate;
use tam_core::bench::{bench, geometric_sizes, write_csv, BenchConfig, Family};
use tam_core::io::{parse_assembly, parse_tileset, parse_tree, write_assembly, write_tileset, write_tree};
use tam_core::producible::{run_fast, run_naive, FastOptions, TieBreak};
use tam_core::upv::{upv_hier_t1, upv_seeded_t1, UpvDiagnostic, UpvVerdict};
use tam_core::{merge_trees, Assembly, Error, Position, TileSet, TileSystem};

#[derive(Parser)]
#[command(
    name = "tam",
    version,
    about = "Verification tools for the abstract Tile Assembly Model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an assembly is producible in the hierarchical model.
    CheckProducible {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        assembly: PathBuf,
        /// Overrides the temperature in the tile set file.
        #[arg(long)]
        temperature: Option<u32>,
        /// Use the quadratic reference decider.
        #[arg(long)]
        naive: bool,
        /// Write the witness assembly tree here when producible.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Seeded unique production at temperature 1.
    UpvSeeded {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        assembly: PathBuf,
        /// Name of the seed tile type.
        #[arg(long)]
        seed: String,
        /// Seed position as `X,Y`; defaults to the least occurrence of the seed tile.
        #[arg(long, value_parser = parse_position, allow_hyphen_values = true)]
        anchor: Option<Position>,
        /// Check every occurrence of the seed tile as an anchor; all must pass.
        #[arg(long, conflicts_with = "anchor")]
        strict_anchors: bool,
    },
    /// Hierarchical unique production at temperature 1.
    UpvHier {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        assembly: PathBuf,
    },
    /// Merge the assembly trees of two overlapping producible assemblies.
    UnionTrees {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        temperature: Option<u32>,
        #[arg(long)]
        assembly_a: PathBuf,
        #[arg(long)]
        tree_a: PathBuf,
        #[arg(long)]
        assembly_b: PathBuf,
        #[arg(long)]
        tree_b: PathBuf,
        /// Where to write the merged tree; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a tree is a valid assembly tree for an assembly.
    ValidateTree {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        assembly: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        temperature: Option<u32>,
    },
    /// Time the fast decider; CSV on stdout.
    Bench {
        #[arg(long, value_enum)]
        family: BenchFamily,
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 2)]
        factor: u64,
        #[arg(long, default_value_t = 1)]
        temperature: u32,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        /// Also run the naive decider up to this many tiles.
        #[arg(long, default_value_t = 10_000)]
        naive_limit: u64,
    },
    /// Generate a tile set and assembly.
    Gen {
        #[arg(long, value_enum)]
        family: GenFamily,
        /// Side length for squares, length for lines, tile count for random.
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        temperature: u32,
        #[arg(long, default_value_t = 0)]
        seed_rng: u64,
        #[arg(long)]
        tileset_out: PathBuf,
        #[arg(long)]
        assembly_out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFamily {
    Square,
    Line,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    Square,
    Line,
    /// Random shape with random glues of strength at most the temperature.
    Random,
}

/// Outcome of a subcommand that ran to completion.
enum Verdict {
    Yes,
    No,
}

fn parse_position(s: &str) -> Result<Position, String> {
    let (x, y) = s.split_once(',').ok_or("expected `X,Y`")?;
    let num = |w: &str| w.trim().parse::<i32>().map_err(|_| format!("bad coordinate `{w}`"));
    Ok(Position::new(num(x)?, num(y)?))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_system(path: &Path) -> Result<TileSystem> {
    let parsed = parse_tileset(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let ts = &parsed.system.tileset;
    for n in &parsed.nulled {
        eprintln!(
            "note: glue `{}` on the {} side of {} can never bind; treated as null",
            ts.label(n.label),
            n.direction,
            ts.name(n.tile)
        );
    }
    Ok(parsed.system)
}

fn load_assembly(path: &Path, ts: &TileSet) -> Result<Assembly> {
    parse_assembly(&read(path)?, ts).with_context(|| format!("in {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}

fn temperature_one(sys: &TileSystem) -> Result<()> {
    if sys.temperature != 1 {
        bail!(
            "unique production is decided at temperature 1 only; tile set has temperature {}",
            sys.temperature
        );
    }
    Ok(())
}

fn describe(v: &UpvVerdict, ts: &TileSet) -> String {
    match v {
        UpvVerdict::Unique | UpvVerdict::NotProducible => String::new(),
        UpvVerdict::NotTerminal { position, direction } => {
            format!("positive glue at {position} faces an empty position to the {direction}")
        }
        UpvVerdict::NotUnique(d) => match *d {
            UpvDiagnostic::Alternative {
                position,
                via,
                alternative,
            } => format!(
                "tile {} can attach at {position} via its {via} side",
                ts.name(alternative)
            ),
            UpvDiagnostic::UnusedTileType(t) => format!("tile type {} does not occur in the assembly", ts.name(t)),
            UpvDiagnostic::Seeded {
                seed,
                anchor,
                position,
                via,
                alternative,
            } => format!(
                "seeded from {} at {anchor}: tile {} can attach at {position} via its {via} side",
                ts.name(seed),
                ts.name(alternative)
            ),
        },
    }
}

fn report_upv(v: &UpvVerdict, ts: &TileSet) -> Verdict {
    println!("{v}");
    let why = describe(v, ts);
    if !why.is_empty() {
        eprintln!("{why}");
    }
    if v.is_unique() {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn run(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Command::CheckProducible {
            tileset,
            assembly,
            temperature,
            naive,
            witness,
        } => {
            let sys = load_system(&tileset)?;
            let a = load_assembly(&assembly, &sys.tileset)?;
            let tau = temperature.unwrap_or(sys.temperature);
            let r = if naive {
                run_naive(&a, &sys.tileset, tau, TieBreak::LeastIds)?
            } else {
                let opts = FastOptions {
                    build_tree: witness.is_some(),
                    self_check: false,
                    ..FastOptions::default()
                };
                run_fast(&a, &sys.tileset, tau, opts)?
            };
            println!("{}", if r.producible { "producible" } else { "not-producible" });
            if let (Some(path), Some(tree)) = (witness, &r.tree) {
                write_output(Some(&path), &write_tree(tree, &sys.tileset))?;
            }
            Ok(if r.producible { Verdict::Yes } else { Verdict::No })
        }
        Command::UpvSeeded {
            tileset,
            assembly,
            seed,
            anchor,
            strict_anchors,
        } => {
            let sys = load_system(&tileset)?;
            temperature_one(&sys)?;
            let ts = &sys.tileset;
            let a = load_assembly(&assembly, ts)?;
            let t = ts
                .tile_by_name(&seed)
                .ok_or_else(|| anyhow!("unknown seed tile `{seed}`"))?;
            let occurrences: Vec<Position> = a.cells().iter().filter(|c| c.1 == t).map(|c| c.0).collect();
            let anchors = match anchor {
                Some(p) => vec![p],
                None if occurrences.is_empty() => bail!("seed tile `{seed}` does not occur in the assembly"),
                None if strict_anchors => occurrences,
                None => vec![occurrences[0]],
            };
            for p in anchors {
                let v = upv_seeded_t1(ts, t, &a, p)?;
                if !v.is_unique() {
                    eprintln!("anchor {p}");
                    return Ok(report_upv(&v, ts));
                }
            }
            Ok(report_upv(&UpvVerdict::Unique, ts))
        }
        Command::UpvHier { tileset, assembly } => {
            let sys = load_system(&tileset)?;
            temperature_one(&sys)?;
            let a = load_assembly(&assembly, &sys.tileset)?;
            Ok(report_upv(&upv_hier_t1(&sys.tileset, &a)?, &sys.tileset))
        }
        Command::UnionTrees {
            tileset,
            temperature,
            assembly_a,
            tree_a,
            assembly_b,
            tree_b,
            out,
        } => {
            let sys = load_system(&tileset)?;
            let ts = &sys.tileset;
            let tau = temperature.unwrap_or(sys.temperature);
            let a = load_assembly(&assembly_a, ts)?;
            let b = load_assembly(&assembly_b, ts)?;
            let ta = parse_tree(&read(&tree_a)?, ts).with_context(|| format!("in {}", tree_a.display()))?;
            let tb = parse_tree(&read(&tree_b)?, ts).with_context(|| format!("in {}", tree_b.display()))?;
            validate(&ta, &a, ts, tau).map_err(|v| anyhow!("{}: {v}", tree_a.display()))?;
            validate(&tb, &b, ts, tau).map_err(|v| anyhow!("{}: {v}", tree_b.display()))?;
            match merge_trees(&ta, &a, &tb, &b, ts, tau) {
                Ok(tree) => {
                    write_output(out.as_deref(), &write_tree(&tree, ts))?;
                    Ok(Verdict::Yes)
                }
                Err(e @ (Error::Conflict(_) | Error::EmptyOverlap)) => {
                    eprintln!("{e}");
                    Ok(Verdict::No)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::ValidateTree {
            tileset,
            assembly,
            tree,
            temperature,
        } => {
            let sys = load_system(&tileset)?;
            let a = load_assembly(&assembly, &sys.tileset)?;
            let t = parse_tree(&read(&tree)?, &sys.tileset).with_context(|| format!("in {}", tree.display()))?;
            match validate(&t, &a, &sys.tileset, temperature.unwrap_or(sys.temperature)) {
                Ok(()) => {
                    println!("valid");
                    Ok(Verdict::Yes)
                }
                Err(v) => {
                    println!("invalid");
                    eprintln!("{v}");
                    Ok(Verdict::No)
                }
            }
        }
        Command::Bench {
            family,
            min,
            max,
            factor,
            temperature,
            repetitions,
            naive_limit,
        } => {
            let family = match family {
                BenchFamily::Square => Family::Square,
                BenchFamily::Line => Family::Line,
            };
            let cfg = BenchConfig {
                tau: temperature,
                repetitions,
                naive_limit,
            };
            let sizes = geometric_sizes(min, max, factor);
            if sizes.is_empty() {
                bail!("no sizes between {min} and {max}");
            }
            let records = bench(family, &sizes, &cfg)?;
            write_csv(&records, std::io::stdout()).context("writing CSV")?;
            let mut verdict = Verdict::Yes;
            for r in records.iter().filter(|r| r.naive_agrees == Some(false)) {
                eprintln!("naive and fast deciders disagree at n = {}", r.n);
                verdict = Verdict::No;
            }
            Ok(verdict)
        }
        Command::Gen {
            family,
            n,
            temperature,
            seed_rng,
            tileset_out,
            assembly_out,
        } => {
            if n == 0 || temperature == 0 {
                bail!("--n and --temperature must be positive");
            }
            let (sys, a) = match family {
                GenFamily::Square => tam_core::gen::generate_square(n, temperature),
                GenFamily::Line => tam_core::gen::generate_line(n, temperature),
                GenFamily::Random => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed_rng);
                    let shape = tam_core::gen::random_shape(&mut rng, n as usize);
                    let p_bind = rng.gen_range(0.5..1.0);
                    let (ts, a) = tam_core::gen::random_glues(&mut rng, &shape, temperature, p_bind);
                    (TileSystem::new(ts, temperature, None)?, a)
                }
            };
            write_output(Some(&tileset_out), &write_tileset(&sys))?;
            write_output(Some(&assembly_out), &write_assembly(&a, &sys.tileset))?;
            eprintln!(
                "seed-rng {seed_rng}: {} tiles, {} tile types",
                a.len(),
                sys.tileset.len()
            );
            Ok(Verdict::Yes)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
