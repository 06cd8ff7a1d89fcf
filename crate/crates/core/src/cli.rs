//! Command-line front end.
//!
//! Collections and list assignments are JSON; hypergraphs use the plain text
//! format of [`Multihypergraph::to_text`]. A file argument of `-` reads
//! standard input. Exit status: 0 success, 1 infeasible or invalid, 2 usage
//! or input error, 3 budget exhausted.

use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::constructions::{
    affine_plane, bipartite_lower_bound, fks_extremal, list_counterexample,
    nu_lower_bound_hypergraph, projective_plane, same_set_gadget, star_split_lower_bound,
};
use crate::exact_color::{
    hypergraph_index, simultaneous_index, simultaneous_list_feasible, Budget, ColourError,
    ListOutcome, DEFAULT_NODE_BUDGET,
};
use crate::fraclp::{
    nu_search, nu_star, tau_star, NuSearchConfig, Rational, DEFAULT_FAMILY_BUDGET,
};
use crate::graph_core::{
    ColouringCertificate, GraphCollection, ListAssignment, Multihypergraph, Profile,
};
use crate::sparsifier::{pipeline, SparsifyError, SparsifyParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "simcol",
    version,
    about = "Simultaneous edge-colouring toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simultaneous chromatic index of a collection.
    Solve {
        file: String,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Simultaneous list colouring of a collection.
    ListSolve {
        file: String,
        lists: String,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Chromatic index of a multihypergraph.
    HyperIndex {
        file: String,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Fractional matching and cover numbers of a multihypergraph.
    Nu { file: String },
    /// Largest fractional matching over intersecting families on K points.
    NuSearch {
        k: usize,
        #[arg(long, default_value_t = DEFAULT_FAMILY_BUDGET)]
        budget: u64,
        /// Start from scratch instead of the best plane-based family.
        #[arg(long)]
        no_seed: bool,
    },
    /// Emit a named construction.
    Construct {
        /// projective, affine, fks, nu-lower, bipartite-lb, same-set, list-counter or star-split
        name: String,
        args: Vec<usize>,
    },
    /// Colour a collection through the list sparsification pipeline.
    Sparsify {
        file: String,
        #[arg(long, default_value = "1/12")]
        eps: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        retries: usize,
        /// List assignment; defaults to a uniform palette.
        #[arg(long)]
        lists: Option<String>,
        #[arg(long)]
        gadgets: bool,
    },
    /// Check a colouring certificate, optionally against lists.
    Verify {
        file: String,
        cert: String,
        lists: Option<String>,
    },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, String> {
        if path == "-" {
            if self.stdin_used {
                return Err("standard input can be read only once".into());
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| e.to_string())?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
        }
    }
}

struct Outcome {
    code: i32,
    body: String,
}

fn ok(v: Value) -> Outcome {
    Outcome {
        code: EXIT_OK,
        body: serde_json::to_string_pretty(&v).expect("report serializes"),
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// the report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let mut io = Io {
        stdin,
        stdin_used: false,
    };
    match dispatch(cli.command, &mut io) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.body);
            o.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn collection_value(c: &GraphCollection) -> Value {
    serde_json::from_str(&c.to_json()).expect("collection JSON")
}

fn colouring_value(cert: &ColouringCertificate, c: &GraphCollection) -> Value {
    serde_json::from_str::<Value>(&cert.to_json(c)).expect("certificate JSON")["colouring"].take()
}

fn dispatch(command: Command, io: &mut Io) -> Result<Outcome, String> {
    let s = |e: &dyn std::fmt::Display| e.to_string();
    match command {
        Command::Solve { file, budget } => {
            let c = GraphCollection::from_json(&io.read(&file)?).map_err(|e| s(&e))?;
            let r = simultaneous_index(&c, Budget::nodes(budget));
            let mut o = ok(json!({
                "optimum": r.optimum,
                "lower_bound": r.lower_bound,
                "optimal": r.optimal,
                "nodes_explored": r.nodes_explored,
                "verdict": r.certificate.verdict,
                "colouring": colouring_value(&r.certificate, &c),
            }));
            if !r.optimal {
                o.code = EXIT_BUDGET;
            }
            Ok(o)
        }
        Command::ListSolve {
            file,
            lists,
            budget,
        } => {
            let c = GraphCollection::from_json(&io.read(&file)?).map_err(|e| s(&e))?;
            let l = ListAssignment::from_json(&io.read(&lists)?, &c).map_err(|e| s(&e))?;
            match simultaneous_list_feasible(&c, &l, Budget::nodes(budget)) {
                Ok(ListOutcome::Feasible(cert)) => Ok(ok(json!({
                    "feasible": true,
                    "verdict": cert.verdict,
                    "colouring": colouring_value(&cert, &c),
                }))),
                Ok(ListOutcome::Infeasible { nodes_explored }) => {
                    let mut o = ok(json!({ "feasible": false, "nodes_explored": nodes_explored }));
                    o.code = EXIT_NEGATIVE;
                    Ok(o)
                }
                Err(ColourError::BudgetExceeded(n)) => {
                    let mut o = ok(json!({ "feasible": null, "budget": n }));
                    o.code = EXIT_BUDGET;
                    Ok(o)
                }
                Err(e) => Err(s(&e)),
            }
        }
        Command::HyperIndex { file, budget } => {
            let h = Multihypergraph::from_text(&io.read(&file)?).map_err(|e| s(&e))?;
            let r = hypergraph_index(&h, Budget::nodes(budget));
            let mut o = ok(json!({
                "optimum": r.optimum,
                "lower_bound": r.lower_bound,
                "optimal": r.optimal,
                "nodes_explored": r.nodes_explored,
                "edges": h.edge_count(),
                "max_degree": h.max_degree(),
                "colouring": r.certificate.assignment,
            }));
            if !r.optimal {
                o.code = EXIT_BUDGET;
            }
            Ok(o)
        }
        Command::Nu { file } => {
            let h = Multihypergraph::from_text(&io.read(&file)?).map_err(|e| s(&e))?;
            let m = nu_star(&h);
            let t = tau_star(&h);
            let one_based: Vec<Vec<usize>> = m
                .edges
                .iter()
                .map(|e| e.iter().map(|v| v + 1).collect())
                .collect();
            Ok(ok(json!({
                "nu_star": m.size,
                "tau_star": t.size,
                "duality": m.size == t.size,
                "intersecting": h.is_intersecting(),
                "edges": one_based,
                "weights": m.weights,
                "cover": t.weights,
            })))
        }
        Command::NuSearch { k, budget, no_seed } => {
            let w = nu_search(
                k,
                NuSearchConfig {
                    budget,
                    seed_with_planes: !no_seed,
                },
            )
            .map_err(|e| s(&e))?;
            Ok(Outcome {
                code: if w.optimal { EXIT_OK } else { EXIT_BUDGET },
                body: w.to_json(),
            })
        }
        Command::Construct { name, args } => construct(&name, &args),
        Command::Sparsify {
            file,
            eps,
            seed,
            retries,
            lists,
            gadgets,
        } => {
            let c = GraphCollection::from_json(&io.read(&file)?).map_err(|e| s(&e))?;
            let l = match lists {
                Some(p) => Some(ListAssignment::from_json(&io.read(&p)?, &c).map_err(|e| s(&e))?),
                None => None,
            };
            let params = SparsifyParams {
                epsilon: eps,
                seed,
                max_retries: retries,
                gadgets,
                ..SparsifyParams::default()
            };
            match pipeline(&c, l.as_ref(), &params) {
                Ok(out) => {
                    let report: Value =
                        serde_json::from_str(&out.report.to_json()).expect("report JSON");
                    let mut o = ok(json!({
                        "colouring": colouring_value(&out.certificate, &c),
                        "report": report,
                    }));
                    if !out.report.valid {
                        o.code = EXIT_NEGATIVE;
                    }
                    Ok(o)
                }
                Err(e) => {
                    let code = if budget_error(&e) {
                        EXIT_BUDGET
                    } else if infeasible_error(&e) {
                        EXIT_NEGATIVE
                    } else {
                        return Err(s(&e));
                    };
                    Ok(Outcome {
                        code,
                        body: json!({ "error": e.to_string() }).to_string(),
                    })
                }
            }
        }
        Command::Verify { file, cert, lists } => {
            let c = GraphCollection::from_json(&io.read(&file)?).map_err(|e| s(&e))?;
            let a = ColouringCertificate::assignment_from_json(&io.read(&cert)?, &c)
                .map_err(|e| s(&e))?;
            let l = match lists {
                Some(p) => Some(ListAssignment::from_json(&io.read(&p)?, &c).map_err(|e| s(&e))?),
                None => None,
            };
            let verdict = c.validate(&a, l.as_ref()).map_err(|e| s(&e))?;
            let mut o = ok(json!({ "verdict": verdict }));
            if !verdict.is_valid() {
                o.code = EXIT_NEGATIVE;
            }
            Ok(o)
        }
    }
}

fn budget_error(e: &SparsifyError) -> bool {
    match e {
        SparsifyError::Stage { source, .. } => budget_error(source),
        SparsifyError::Gamma { .. } => true,
        SparsifyError::Colour(ColourError::BudgetExceeded(_)) => true,
        _ => false,
    }
}

fn infeasible_error(e: &SparsifyError) -> bool {
    match e {
        SparsifyError::Stage { source, .. } => infeasible_error(source),
        SparsifyError::Infeasible => true,
        _ => false,
    }
}

fn construct(name: &str, args: &[usize]) -> Result<Outcome, String> {
    let want = |n: usize| -> Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!(
                "construct {name} takes {n} argument(s), got {}",
                args.len()
            ))
        }
    };
    let text = |h: Multihypergraph| Outcome {
        code: EXIT_OK,
        body: h.to_text().trim_end().to_string(),
    };
    let s = |e: &dyn std::fmt::Display| e.to_string();
    match name {
        "projective" => {
            want(1)?;
            Ok(text(projective_plane(args[0]).map_err(|e| s(&e))?))
        }
        "affine" => {
            want(1)?;
            Ok(text(affine_plane(args[0]).map_err(|e| s(&e))?))
        }
        "fks" => {
            want(2)?;
            Ok(text(fks_extremal(args[0], args[1]).map_err(|e| s(&e))?))
        }
        "nu-lower" => {
            want(2)?;
            Ok(text(
                nu_lower_bound_hypergraph(args[0], args[1]).map_err(|e| s(&e))?,
            ))
        }
        "bipartite-lb" => {
            want(1)?;
            let c = bipartite_lower_bound(args[0]).map_err(|e| s(&e))?;
            Ok(Outcome {
                code: EXIT_OK,
                body: c.to_json(),
            })
        }
        "star-split" => {
            want(2)?;
            let c = star_split_lower_bound(args[0], args[1]).map_err(|e| s(&e))?;
            Ok(Outcome {
                code: EXIT_OK,
                body: c.to_json(),
            })
        }
        "same-set" => {
            want(1)?;
            let g = same_set_gadget(args[0]).map_err(|e| s(&e))?;
            let one = Profile::from_indices([1]);
            let c = GraphCollection::new(
                1,
                &[],
                g.graph
                    .edges()
                    .into_iter()
                    .map(|(a, b)| (a as u32, b as u32, one)),
            )
            .map_err(|e| s(&e))?;
            let mut v = collection_value(&c);
            v["x"] = json!(g.x);
            v["y"] = json!(g.y);
            Ok(Outcome {
                code: EXIT_OK,
                body: v.to_string(),
            })
        }
        "list-counter" => {
            want(1)?;
            let lc = list_counterexample(args[0]).map_err(|e| s(&e))?;
            // one file serving as both the collection and the list assignment
            let mut v = collection_value(&lc.collection);
            let lists: Value =
                serde_json::from_str(&lc.lists.to_json(&lc.collection)).expect("lists JSON");
            v["lists"] = lists["lists"].clone();
            Ok(Outcome {
                code: EXIT_OK,
                body: v.to_string(),
            })
        }
        other => Err(format!("unknown construction `{other}`")),
    }
}
