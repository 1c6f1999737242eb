//! Command-line interface. Semantic verdicts use exit codes 0/1 (found /
//! not found, separable / not separable); usage, parse and internal errors
//! exit with code 2.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use turanpal::builtins;
use turanpal::colorability::{
    check_certificate, colorable, min_induced_density, min_induced_density_sampled,
    ordered_colorable, random_palette_hypergraph, SearchLimits,
};
use turanpal::hom::{count_homs, exists_hom};
use turanpal::io::{
    parse_hypergraph, parse_palette, serialize_hypergraph, serialize_hypergraph_with_coloring,
    serialize_palette, HypergraphDoc, PaletteDoc,
};
use turanpal::numfmt::{f64_decimal, rational_with_decimal};
use turanpal::palette::{product, Palette};
use turanpal::simplex::{lagrangian, SimplexPoint};
use turanpal::turan::{
    family_condition, verify_481, witness_search, SeparationQuery, TargetDirection,
};

#[derive(Parser)]
#[command(
    name = "turanpal",
    version,
    about = "Palette calculus for uniform Turán densities: operations, homomorphisms, Lagrangians, colorability and separation conditions",
    after_help = "Palette arguments take a file path or a built-in name prefixed with '@' \
                  (@P_LM, @P_3T, @P_4_81, @P_two_color)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact density |T|/|C|^3 of a palette.
    Density { palette: String },
    /// Maximize the palette objective over the probability simplex.
    Lagrangian {
        palette: String,
        #[arg(long, default_value_t = 200)]
        restarts: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide homomorphism existence from one palette to another.
    Hom {
        src: String,
        dst: String,
        /// Test against the inverse of the destination palette.
        #[arg(long)]
        inv: bool,
        /// Count homomorphisms (saturating at the limit) instead of
        /// printing a witness.
        #[arg(long, value_name = "LIMIT")]
        count: Option<u64>,
    },
    /// Apply a palette operation and print the result as a palette file.
    Op {
        #[command(subcommand)]
        op: OpCommand,
    },
    /// Search for a coloring certificate of a hypergraph.
    Colorable { hypergraph: String, palette: String },
    /// Decide whether some hypergraph is colorable by every positive
    /// palette and by no negative palette.
    Separates(QueryArgs),
    /// Search for a small separating hypergraph.
    Witness {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long = "max-vertices", default_value_t = 5)]
        max_vertices: usize,
    },
    /// Sample the palette-based random hypergraph and print it.
    RandomHg {
        palette: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pair-color distribution as comma-separated weights (uniform if
        /// omitted).
        #[arg(long)]
        dist: Option<String>,
    },
    /// Report the minimum induced edge density over large vertex subsets.
    InducedDensity {
        hypergraph: String,
        #[arg(long, default_value_t = 0.5)]
        min_frac: f64,
        /// Sample subsets instead of exact enumeration (needed above 20
        /// vertices).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the complete 4/81 verification and report each check.
    #[command(name = "verify-481")]
    Verify481,
}

#[derive(Subcommand)]
enum OpCommand {
    /// Reverse every feasible triple.
    Inv { palette: String },
    /// Symmetrize: clone every color and close triples under reordering.
    Sym { palette: String },
    /// Componentwise product of two or more palettes.
    Product {
        #[arg(required = true, num_args = 1..)]
        palettes: Vec<String>,
    },
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long = "pos", required = true, num_args = 1.., value_name = "PALETTE")]
    positives: Vec<String>,
    #[arg(long = "neg", required = true, num_args = 1.., value_name = "PALETTE")]
    negatives: Vec<String>,
}

/// Errors that terminate the run with exit code 2.
struct CliError(String);

macro_rules! wrap_errors {
    ($($ty:ty),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError(e.to_string())
            }
        })*
    };
}

wrap_errors!(
    turanpal::colorability::InstanceTooLarge,
    turanpal::palette::EmptyProduct,
    turanpal::simplex::DimensionMismatch,
    turanpal::simplex::SimplexError,
    turanpal::turan::QueryError,
    turanpal::turan::WitnessBoundTooLarge,
);

fn load_palette(arg: &str) -> Result<PaletteDoc, CliError> {
    if let Some(name) = arg.strip_prefix('@') {
        return match builtins::lookup(name) {
            Some(palette) => Ok(PaletteDoc {
                name: name.to_string(),
                palette,
            }),
            None => Err(CliError(format!(
                "unknown built-in palette `@{name}` (available: {})",
                builtins::NAMES.join(", ")
            ))),
        };
    }
    let text = fs::read_to_string(arg).map_err(|e| CliError(format!("{arg}: {e}")))?;
    parse_palette(&text).map_err(|e| CliError(format!("{arg}: {e}")))
}

fn load_hypergraph(arg: &str) -> Result<HypergraphDoc, CliError> {
    let text = fs::read_to_string(arg).map_err(|e| CliError(format!("{arg}: {e}")))?;
    parse_hypergraph(&text).map_err(|e| CliError(format!("{arg}: {e}")))
}

fn load_query(args: &QueryArgs) -> Result<SeparationQuery, CliError> {
    let positives = args
        .positives
        .iter()
        .map(|s| load_palette(s).map(|d| d.palette))
        .collect::<Result<Vec<_>, _>>()?;
    let negatives = args
        .negatives
        .iter()
        .map(|s| load_palette(s).map(|d| d.palette))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SeparationQuery::new(positives, negatives)?)
}

fn parse_distribution(arg: &str, colors: usize) -> Result<SimplexPoint, CliError> {
    let weights = arg
        .split(',')
        .map(|w| w.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError(format!("invalid distribution: {e}")))?;
    if weights.len() != colors {
        return Err(CliError(format!(
            "distribution has {} weights but the palette has {colors} colors",
            weights.len()
        )));
    }
    Ok(SimplexPoint::new(weights)?)
}

/// Semantic outcome: exit 0 for a positive verdict, 1 for a negative one.
enum Verdict {
    Positive,
    Negative,
}

fn run(cli: Cli) -> Result<Verdict, CliError> {
    match cli.command {
        Command::Density { palette } => {
            let doc = load_palette(&palette)?;
            println!("{}", rational_with_decimal(&doc.palette.density()));
            Ok(Verdict::Positive)
        }
        Command::Lagrangian {
            palette,
            restarts,
            tol,
            seed,
        } => {
            let doc = load_palette(&palette)?;
            let result = lagrangian(&doc.palette, restarts, tol, seed);
            println!("value = {}", f64_decimal(result.value));
            let rendered: Vec<String> = doc
                .palette
                .names()
                .iter()
                .zip(result.argmax.weights())
                .map(|(name, &w)| format!("{name}={}", f64_decimal(w)))
                .collect();
            println!("argmax: {}", rendered.join(" "));
            println!("kkt_residual = {:.3e}", result.kkt_residual);
            Ok(Verdict::Positive)
        }
        Command::Hom {
            src,
            dst,
            inv,
            count,
        } => {
            let src = load_palette(&src)?;
            let dst = load_palette(&dst)?;
            let target = if inv {
                dst.palette.inverse()
            } else {
                dst.palette
            };
            match count {
                Some(limit) => {
                    let n = count_homs(&src.palette, &target, limit);
                    println!("{n}");
                    Ok(if n > 0 {
                        Verdict::Positive
                    } else {
                        Verdict::Negative
                    })
                }
                None => match exists_hom(&src.palette, &target) {
                    Some(hom) => {
                        for color in src.palette.colors() {
                            println!(
                                "{} -> {}",
                                src.palette.name(color),
                                target.name(hom.apply(color))
                            );
                        }
                        Ok(Verdict::Positive)
                    }
                    None => {
                        println!("none");
                        Ok(Verdict::Negative)
                    }
                },
            }
        }
        Command::Op { op } => {
            let doc = match op {
                OpCommand::Inv { palette } => {
                    let doc = load_palette(&palette)?;
                    PaletteDoc {
                        name: format!("inv_{}", doc.name),
                        palette: doc.palette.inverse(),
                    }
                }
                OpCommand::Sym { palette } => {
                    let doc = load_palette(&palette)?;
                    PaletteDoc {
                        name: format!("sym_{}", doc.name),
                        palette: doc.palette.symmetrize(),
                    }
                }
                OpCommand::Product { palettes } => {
                    let docs = palettes
                        .iter()
                        .map(|s| load_palette(s))
                        .collect::<Result<Vec<_>, _>>()?;
                    let factors: Vec<Palette> = docs.iter().map(|d| d.palette.clone()).collect();
                    let names: Vec<&str> = docs.iter().map(|d| d.name.as_str()).collect();
                    PaletteDoc {
                        name: format!("product_{}", names.join("_")),
                        palette: product(&factors)?,
                    }
                }
            };
            print!("{}", serialize_palette(&doc));
            Ok(Verdict::Positive)
        }
        Command::Colorable {
            hypergraph,
            palette,
        } => {
            let hg = load_hypergraph(&hypergraph)?;
            let doc = load_palette(&palette)?;
            let limits = SearchLimits::default();
            let witness = match hg.to_ordered() {
                Some(ordered) => ordered_colorable(&ordered, &doc.palette, &limits)?
                    .map(|coloring| (ordered.order().to_vec(), coloring)),
                None => colorable(&hg.hypergraph, &doc.palette, &limits)?,
            };
            match witness {
                Some((order, coloring)) => {
                    let rendered: Vec<String> = order.iter().map(ToString::to_string).collect();
                    println!("order {}", rendered.join(" "));
                    let n = hg.hypergraph.vertex_count();
                    for u in 0..n {
                        for v in (u + 1)..n {
                            println!("pair {u} {v} {}", doc.palette.name(coloring.get(u, v)));
                        }
                    }
                    Ok(Verdict::Positive)
                }
                None => {
                    println!("none");
                    Ok(Verdict::Negative)
                }
            }
        }
        Command::Separates(args) => {
            let query = load_query(&args)?;
            let verdict = family_condition(&query);
            if verdict.separable() {
                println!("separable");
                Ok(Verdict::Positive)
            } else {
                println!("not separable");
                for c in &verdict.certificates {
                    let target = match c.direction {
                        TargetDirection::Straight => args.negatives[c.negative_index].clone(),
                        TargetDirection::Inverted => {
                            format!("inv({})", args.negatives[c.negative_index])
                        }
                    };
                    println!(
                        "certificate: positive {} via {} -> {}: {}",
                        c.positive_index, c.direction, target, c.hom
                    );
                }
                Ok(Verdict::Negative)
            }
        }
        Command::Witness {
            query: args,
            max_vertices,
        } => {
            let query = load_query(&args)?;
            let verdict = family_condition(&query);
            if !verdict.separable() {
                println!("none (not separable)");
                return Ok(Verdict::Negative);
            }
            match witness_search(&query, max_vertices)? {
                Some(h) => {
                    let doc = HypergraphDoc {
                        name: "witness".to_string(),
                        hypergraph: h,
                        order: None,
                    };
                    print!("{}", serialize_hypergraph(&doc));
                    Ok(Verdict::Positive)
                }
                None => {
                    println!("none (bound exhausted)");
                    Ok(Verdict::Negative)
                }
            }
        }
        Command::RandomHg {
            palette,
            n,
            seed,
            dist,
        } => {
            let doc = load_palette(&palette)?;
            let distribution = match dist {
                Some(arg) => parse_distribution(&arg, doc.palette.color_count())?,
                None => SimplexPoint::uniform(doc.palette.color_count()),
            };
            let (ordered, coloring) =
                random_palette_hypergraph(&doc.palette, n, &distribution, seed)?;
            debug_assert_eq!(
                check_certificate(&ordered, &doc.palette, &coloring),
                Ok(true)
            );
            let out = HypergraphDoc {
                name: format!("random_{}_{n}_{seed}", doc.name),
                hypergraph: ordered.base().clone(),
                order: Some(ordered.order().to_vec()),
            };
            print!(
                "{}",
                serialize_hypergraph_with_coloring(&out, &doc.palette, &coloring)
            );
            Ok(Verdict::Positive)
        }
        Command::InducedDensity {
            hypergraph,
            min_frac,
            samples,
            seed,
        } => {
            let hg = load_hypergraph(&hypergraph)?;
            let value = match samples {
                Some(samples) => {
                    min_induced_density_sampled(&hg.hypergraph, min_frac, samples, seed)
                }
                None => min_induced_density(&hg.hypergraph, min_frac)?,
            };
            println!("{}", f64_decimal(value));
            Ok(Verdict::Positive)
        }
        Command::Verify481 => {
            let report = verify_481();
            println!("{report}");
            if report.all_passed() {
                Ok(Verdict::Positive)
            } else {
                Ok(Verdict::Negative)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Positive) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
