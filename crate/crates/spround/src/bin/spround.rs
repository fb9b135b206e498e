//! Command-line interface: decide/round/minimize on trees, verify roundings
//! of arbitrary graphs, brute-force oracles, 3-CNF reduction graphs, and
//! seeded random tree generation.
//!
//! Exit codes: 0 = yes/pass, 1 = no/fail, 2 = usage or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spround::dimacs::parse_dimacs;
use spround::gen::{random_tree, TreeGenConfig};
use spround::io::{parse_graph, parse_path, parse_tree, serialize_graph};
use spround::json::{rounding_for_graph, MinimizeDoc, ReportDoc, RoundingDoc, SidecarDoc};
use spround_core::oracle;
use spround_core::path::round_path;
use spround_core::rational::{format_rational, parse_rational, Rational};
use spround_core::reduction::build_reduction;
use spround_core::tree;
use spround_core::verify::{verify_rounding, Comparison, VerificationLevel};

#[derive(Parser)]
#[command(
    name = "spround",
    about = "Shortest-path-preserving integer rounding of edge weights",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Closed,
}

impl From<ModeArg> for Comparison {
    fn from(m: ModeArg) -> Comparison {
        match m {
            ModeArg::Strict => Comparison::Strict,
            ModeArg::Closed => Comparison::Closed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Oblivious,
    Weak,
    Strong,
}

impl From<LevelArg> for VerificationLevel {
    fn from(l: LevelArg) -> VerificationLevel {
        match l {
            LevelArg::Oblivious => VerificationLevel::PathOblivious,
            LevelArg::Weak => VerificationLevel::Weak,
            LevelArg::Strong => VerificationLevel::Strong,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct TreeInput {
    /// tree file in edge-list format ('-' for standard input)
    file: PathBuf,
    /// root vertex (algorithmic scaffolding only; results are root-free)
    #[arg(long, default_value_t = 0)]
    root: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a tree admits an epsilon-rounding (exit 0 = yes, 1 = no)
    Decide {
        /// error threshold, e.g. 1, 7/8, or 0.9
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
        /// print the root error range set
        #[arg(long)]
        show_set: bool,
        #[command(flatten)]
        input: TreeInput,
    },
    /// Produce an epsilon-rounding of a tree as JSON (exit 1 if none exists)
    Round {
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
        #[command(flatten)]
        input: TreeInput,
    },
    /// Compute the smallest achievable maximum path error and a witness
    Minimize {
        #[command(flatten)]
        input: TreeInput,
    },
    /// Round a path given as a whitespace-separated weight list
    RoundPath {
        /// path file: whitespace-separated weights ('-' for standard input)
        file: PathBuf,
    },
    /// Check a rounding against a graph (exit 0 = pass, 1 = fail)
    Verify {
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value = "strong")]
        level: LevelArg,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
        /// rounding JSON produced by `round` or `minimize`
        #[arg(long)]
        rounding: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// graph file in edge-list format
        file: PathBuf,
    },
    /// Brute-force reference solvers for small instances
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Build the reduction graph of a 3-CNF formula (DIMACS input)
    Reduce {
        /// write the anchors/roles sidecar JSON here
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// write the edge list here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
        /// DIMACS CNF file
        file: PathBuf,
    },
    /// Generate a seeded random tree in edge-list format
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        vertices: usize,
        #[arg(long, default_value_t = 100)]
        max_denominator: u32,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustively decide epsilon-roundability (exit 0 = yes, 1 = no)
    Decide {
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value = "oblivious")]
        level: LevelArg,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
        #[arg(long, default_value_t = oracle::DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        file: PathBuf,
    },
    /// Minimum achievable maximum path error of a tree, by enumeration
    MinEps {
        #[arg(long, default_value_t = oracle::DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        file: PathBuf,
    },
    /// Backtracking search with optional pinned edges
    Solve {
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value = "oblivious")]
        level: LevelArg,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
        /// pin an edge: u,v=up or u,v=down (repeatable)
        #[arg(long = "pin")]
        pins: Vec<String>,
        #[arg(long, default_value_t = oracle::DEFAULT_NODE_BUDGET)]
        budget: u64,
        file: PathBuf,
    },
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("standard input: {e}"))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn parse_epsilon(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| format!("--epsilon: {e}"))
}

fn parse_pins(specs: &[String]) -> Result<oracle::Pins, String> {
    let mut pins = oracle::Pins::new();
    for spec in specs {
        let (pair, dir) = spec
            .split_once('=')
            .ok_or_else(|| format!("--pin '{spec}': expected u,v=up|down"))?;
        let (u, v) = pair
            .split_once(',')
            .ok_or_else(|| format!("--pin '{spec}': expected u,v=up|down"))?;
        let u: u32 = u.trim().parse().map_err(|_| format!("--pin '{spec}': bad vertex"))?;
        let v: u32 = v.trim().parse().map_err(|_| format!("--pin '{spec}': bad vertex"))?;
        let direction = match dir.trim() {
            "up" => oracle::PinDirection::Up,
            "down" => oracle::PinDirection::Down,
            other => return Err(format!("--pin '{spec}': unknown direction '{other}'")),
        };
        pins.insert(spround_core::graph::edge_key(u, v), direction);
    }
    Ok(pins)
}

fn emit(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Ok(true) maps to exit 0, Ok(false) to exit 1, Err to exit 2.
fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Decide {
            epsilon,
            mode,
            show_set,
            input,
        } => {
            let epsilon = parse_epsilon(&epsilon)?;
            let tree = parse_tree(&read_input(&input.file)?, input.root)
                .map_err(|e| e.to_string())?;
            let comparison = mode.into();
            let admits = tree::decide(&tree, &epsilon, comparison);
            if show_set {
                match tree::error_range_set(&tree, &epsilon, comparison) {
                    Ok(set) => {
                        for r in set {
                            println!(
                                "[{}, {}]",
                                format_rational(&r.lo),
                                format_rational(&r.hi)
                            );
                        }
                    }
                    Err(e) => println!("({e})"),
                }
            }
            println!("{}", if admits { "yes" } else { "no" });
            Ok(admits)
        }
        Command::Round {
            epsilon,
            mode,
            input,
        } => {
            let epsilon = parse_epsilon(&epsilon)?;
            let tree = parse_tree(&read_input(&input.file)?, input.root)
                .map_err(|e| e.to_string())?;
            match tree::extract_rounding(&tree, &epsilon, mode.into()) {
                Some(rounding) => {
                    let doc = RoundingDoc::from_rounding(&rounding);
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(true)
                }
                None => {
                    eprintln!("no rounding exists at this threshold");
                    Ok(false)
                }
            }
        }
        Command::Minimize { input } => {
            let tree = parse_tree(&read_input(&input.file)?, input.root)
                .map_err(|e| e.to_string())?;
            let (epsilon, witness) = tree::minimize_epsilon(&tree);
            let doc = MinimizeDoc::new(&epsilon, &witness);
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(true)
        }
        Command::RoundPath { file } => {
            let path = parse_path(&read_input(&file)?)?;
            let rounded = round_path(&path);
            let line: Vec<String> = rounded.iter().map(u64::to_string).collect();
            println!("{}", line.join(" "));
            Ok(true)
        }
        Command::Verify {
            epsilon,
            level,
            mode,
            rounding,
            format,
            file,
        } => {
            let epsilon = parse_epsilon(&epsilon)?;
            let graph = parse_graph(&read_input(&file)?).map_err(|e| e.to_string())?;
            let doc: RoundingDoc = serde_json::from_str(&read_input(&rounding)?)
                .map_err(|e| format!("{}: {e}", rounding.display()))?;
            let rounding = rounding_for_graph(&doc, &graph)?;
            let report = verify_rounding(&graph, &rounding, &epsilon, level.into(), mode.into())
                .map_err(|e| e.to_string())?;
            let doc = ReportDoc::from_report(&report);
            match format {
                FormatArg::Json => println!("{}", serde_json::to_string_pretty(&doc).unwrap()),
                FormatArg::Text => println!("{}", doc.to_text()),
            }
            Ok(report.passed)
        }
        Command::Oracle(cmd) => run_oracle(cmd),
        Command::Reduce {
            sidecar,
            output,
            file,
        } => {
            let formula = parse_dimacs(&read_input(&file)?).map_err(|e| e.to_string())?;
            let formula = spround_core::reduction::normalize_cnf(&formula);
            let gadget = build_reduction(&formula).map_err(|e| e.to_string())?;
            emit(&output, &serialize_graph(&gadget.graph))?;
            if let Some(path) = sidecar {
                let doc = SidecarDoc::from_gadget(&gadget);
                let text = serde_json::to_string_pretty(&doc).unwrap();
                fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(true)
        }
        Command::Gen {
            seed,
            vertices,
            max_denominator,
            max_weight,
            output,
        } => {
            let config = TreeGenConfig {
                vertices,
                max_denominator,
                max_weight,
            };
            let graph = random_tree(seed, &config);
            emit(&output, &serialize_graph(&graph))
                .map(|_| true)
        }
    }
}

fn run_oracle(cmd: OracleCommand) -> Result<bool, String> {
    match cmd {
        OracleCommand::Decide {
            epsilon,
            level,
            mode,
            budget,
            file,
        } => {
            let epsilon = parse_epsilon(&epsilon)?;
            let graph = parse_graph(&read_input(&file)?).map_err(|e| e.to_string())?;
            let witness =
                oracle::brute_force_decide(&graph, &epsilon, level.into(), mode.into(), budget)
                    .map_err(|e| e.to_string())?;
            match witness {
                Some(rounding) => {
                    let doc = RoundingDoc::from_rounding(&rounding);
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(true)
                }
                None => {
                    println!("no");
                    Ok(false)
                }
            }
        }
        OracleCommand::MinEps { budget, file } => {
            let graph = parse_graph(&read_input(&file)?).map_err(|e| e.to_string())?;
            if !graph.is_forest() || !graph.is_connected() || graph.vertex_count() == 0 {
                return Err("min-eps requires a tree".to_string());
            }
            let eps = oracle::brute_force_min_epsilon(&graph, budget)
                .map_err(|e| e.to_string())?;
            println!("{}", format_rational(&eps));
            Ok(true)
        }
        OracleCommand::Solve {
            epsilon,
            level,
            mode,
            pins,
            budget,
            file,
        } => {
            let epsilon = parse_epsilon(&epsilon)?;
            let graph = parse_graph(&read_input(&file)?).map_err(|e| e.to_string())?;
            let pins = parse_pins(&pins)?;
            let witness = oracle::backtracking_solve(
                &graph,
                &epsilon,
                level.into(),
                mode.into(),
                &pins,
                budget,
            )
            .map_err(|e| e.to_string())?;
            match witness {
                Some(rounding) => {
                    let doc = RoundingDoc::from_rounding(&rounding);
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(true)
                }
                None => {
                    println!("none");
                    Ok(false)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
