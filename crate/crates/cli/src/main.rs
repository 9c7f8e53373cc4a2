use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ac_patterns::ac::{enforce_ac, enforce_ac_shuffled, is_arc_consistent};
use ac_patterns::catalog::{catalog_by_name, catalog_instance, fig13_table, CatalogName};
use ac_patterns::classify::{classify_with, maximal_patterns};
use ac_patterns::enumerate::enumerate_simple_patterns;
use ac_patterns::generate::gen_pattern_free_instance;
use ac_patterns::occurrence::{in_class, occurs, occurs_in_instance, DEFAULT_ORDER_CAP};
use ac_patterns::oracle::{brute_force_solve, count_solutions, SearchResult};
use ac_patterns::recognition::dimacs::parse_dimacs;
use ac_patterns::recognition::gadget::{gen_gadget, Gadget};
use ac_patterns::recognition::{find_dom_order, find_var_order, RecognitionTarget};
use ac_patterns::solvers::{solve_class, solve_mac, SolverClass, ValPolicy, VarPolicy};
use ac_patterns::{Instance, Pattern, PatternName, TotalOrder};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "acpat", version, about = "Forbidden patterns, arc consistency and tractable CSP classes")]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enforce arc consistency and report removed values.
    Ac {
        instance: PathBuf,
        /// Process arcs in a seeded random order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a class solver (after arc consistency) or MAC.
    Solve {
        #[arg(long)]
        class: SolverClass,
        instance: PathBuf,
        #[arg(long)]
        var_order: Option<String>,
        #[arg(long)]
        dom_order: Option<String>,
        /// Variable selection for MAC.
        #[arg(long, value_enum, default_value = "in-order")]
        var_policy: VarChoice,
        /// Value selection for MAC.
        #[arg(long, value_enum, default_value = "smallest")]
        val_policy: ValChoice,
    },
    /// Decide whether one pattern occurs in another.
    Occurs {
        /// Built-in name or pattern JSON file.
        #[arg(long)]
        pattern: String,
        /// Built-in name or pattern JSON file.
        #[arg(long)]
        target: String,
    },
    /// Search for orders under which a pattern does not occur in an instance.
    InClass {
        #[arg(long)]
        pattern: String,
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: u64,
        /// Only test these orders instead of searching.
        #[arg(long)]
        var_order: Option<String>,
        #[arg(long)]
        dom_order: Option<String>,
    },
    /// Find an order avoiding a target pattern when the other order is fixed.
    Recognize {
        #[arg(long)]
        target: RecognitionTarget,
        #[arg(long, value_enum)]
        fixed: Fixed,
        /// The fixed order; defaults to declaration or universe order.
        #[arg(long)]
        order: Option<String>,
        instance: PathBuf,
    },
    /// Decide AC-solvability of a simple pattern.
    Classify {
        /// Built-in name or pattern JSON file.
        pattern: String,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: u64,
    },
    /// The catalogue of arc-consistent unsatisfiable instances.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        what: GenWhat,
    },
    /// Brute-force satisfiability check.
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
        /// Also count all solutions.
        #[arg(long)]
        count: bool,
    },
    /// Enumerate simple patterns up to isomorphism and classify them.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        max_vars: usize,
        #[arg(long, default_value_t = 2)]
        max_points: usize,
        #[arg(long, default_value_t = 2)]
        max_neg: usize,
        /// Write every pattern with its verdict to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
        cap: u64,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: CatalogName },
    Verify,
}

#[derive(Subcommand)]
enum GenWhat {
    /// Hardness gadget for a 3-CNF formula in DIMACS format.
    Gadget {
        #[arg(long)]
        target: RecognitionTarget,
        #[arg(long)]
        cnf: PathBuf,
    },
    /// Random instance in which a pattern does not occur under returned orders.
    Instance {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 5)]
        vars: usize,
        #[arg(long, default_value_t = 4)]
        dom: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixed {
    Dom,
    Var,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarChoice {
    InOrder,
    Declaration,
    MinDomain,
}

#[derive(Clone, Copy, ValueEnum)]
enum ValChoice {
    Smallest,
    Largest,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    Ok(Instance::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?)
}

fn load_pattern(arg: &str) -> Result<Pattern> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(Pattern::from_json(&read(path)?).with_context(|| format!("in {arg}"))?);
    }
    match arg.parse::<PatternName>() {
        Ok(name) => Ok(Pattern::builtin(name)),
        Err(_) => bail!("`{arg}` is neither a pattern file nor a built-in pattern name"),
    }
}

fn split(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn var_order(inst: &Instance, arg: Option<&str>) -> Result<TotalOrder> {
    match arg {
        None => Ok(TotalOrder::identity(inst.num_vars())),
        Some(list) => {
            let seq = split(list).map(|name| inst.var_index(name)).collect::<ac_patterns::Result<Vec<_>>>()?;
            Ok(TotalOrder::from_sequence(seq)?)
        }
    }
}

fn dom_order(inst: &Instance, arg: Option<&str>) -> Result<TotalOrder> {
    let u = inst.universe();
    match arg {
        None => Ok(TotalOrder::identity(u.len())),
        Some(list) => {
            let seq = split(list)
                .map(|s| {
                    let label: i64 = s.parse().with_context(|| format!("bad value `{s}`"))?;
                    u.index_of(label).with_context(|| format!("value {label} is not in the universe"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TotalOrder::from_sequence(seq)?)
        }
    }
}

fn var_order_json(inst: &Instance, o: &TotalOrder) -> Value {
    json!(o.sequence().iter().map(|&v| inst.variable_name(v)).collect::<Vec<_>>())
}

fn dom_order_json(inst: &Instance, o: &TotalOrder) -> Value {
    json!(o.sequence().iter().map(|&a| inst.universe().label(a)).collect::<Vec<_>>())
}

fn instance_json(inst: &Instance) -> Value {
    serde_json::from_str(&inst.to_json()).expect("instance serialization is valid JSON")
}

fn gadget_json(g: &Gadget) -> Value {
    let inst = &g.instance;
    let label = |a: usize| inst.universe().label(a);
    let m = &g.meta;
    json!({
        "target": g.target.as_str(),
        "instance": instance_json(inst),
        "varOrder": g.var_order.as_ref().map(|o| var_order_json(inst, o)),
        "meta": {
            "n": m.n,
            "m": m.m,
            "a": m.a.iter().map(|&a| label(a)).collect::<Vec<_>>(),
            "aMax": label(m.a_max),
            "clauseValues": m.clause_values.iter().map(|t| t.map(label)).collect::<Vec<_>>(),
            "edges": m.edges.iter().map(|e| json!({
                "literal": e.literal,
                "y": inst.variable_name(e.y_var),
                "z": inst.variable_name(e.z_var),
                "lo": label(e.lo),
                "hi": label(e.hi),
            })).collect::<Vec<_>>(),
        },
    })
}

/// Runs a command, returning its JSON output and exit code.
fn run(cmd: Command) -> Result<(Value, u8)> {
    let out = match cmd {
        Command::Ac { instance, seed } => {
            let inst = load_instance(&instance)?;
            let (reduced, trace) = match seed {
                Some(s) => enforce_ac_shuffled(&inst, s),
                None => enforce_ac(&inst),
            };
            let u = inst.universe();
            json!({
                "wipeout": trace.wipeout,
                "arcConsistent": !trace.wipeout && is_arc_consistent(&reduced),
                "removals": trace.removals.iter().map(|r| json!({
                    "variable": inst.variable_name(r.variable),
                    "value": u.label(r.value),
                    "blame": inst.variable_name(r.blame),
                })).collect::<Vec<_>>(),
                "instance": (!trace.wipeout).then(|| instance_json(&reduced)),
            })
        }
        Command::Solve {
            class,
            instance,
            var_order: vo,
            dom_order: dord,
            var_policy,
            val_policy,
        } => {
            let inst = load_instance(&instance)?;
            let vo = var_order(&inst, vo.as_deref())?;
            let dord = dom_order(&inst, dord.as_deref())?;
            let outcome = if class == SolverClass::Mac {
                let vp = match var_policy {
                    VarChoice::InOrder => VarPolicy::InOrder(vo),
                    VarChoice::Declaration => VarPolicy::Declaration,
                    VarChoice::MinDomain => VarPolicy::MinDomain,
                };
                let val = match val_policy {
                    ValChoice::Smallest => ValPolicy::Smallest,
                    ValChoice::Largest => ValPolicy::Largest,
                };
                solve_mac(&inst, &vp, val)?
            } else {
                solve_class(class, &inst, &vo, &dord)?
            };
            let mut v = outcome.to_json_value(&inst);
            v["class"] = json!(class.as_str());
            v["backtracks"] = json!(outcome.backtracks());
            v
        }
        Command::Occurs { pattern, target } => {
            let p = load_pattern(&pattern)?;
            let q = load_pattern(&target)?;
            occurs(&p, &q).to_json_value(&p)
        }
        Command::InClass {
            pattern,
            instance,
            cap,
            var_order: vo,
            dom_order: dord,
        } => {
            let p = load_pattern(&pattern)?;
            let inst = load_instance(&instance)?;
            if vo.is_some() || dord.is_some() {
                let vo = var_order(&inst, vo.as_deref())?;
                let dord = dom_order(&inst, dord.as_deref())?;
                let occ = occurs_in_instance(&p, &inst, &vo, &dord)?;
                json!({
                    "inClass": !occ,
                    "varOrder": var_order_json(&inst, &vo),
                    "domOrder": dom_order_json(&inst, &dord),
                })
            } else {
                match in_class(&p, &inst, cap)? {
                    Some((vo, dord)) => json!({
                        "inClass": true,
                        "varOrder": var_order_json(&inst, &vo),
                        "domOrder": dom_order_json(&inst, &dord),
                    }),
                    None => json!({ "inClass": false }),
                }
            }
        }
        Command::Recognize {
            target,
            fixed,
            order,
            instance,
        } => {
            let inst = load_instance(&instance)?;
            let p = target.pattern();
            let (found, vo, dord) = match fixed {
                Fixed::Dom => {
                    let dord = dom_order(&inst, order.as_deref())?;
                    let vo = find_var_order(&inst, target, &dord)?;
                    (vo.is_some(), vo, Some(dord))
                }
                Fixed::Var => {
                    let vo = var_order(&inst, order.as_deref())?;
                    let dord = find_dom_order(&inst, target, &vo)?;
                    (dord.is_some(), Some(vo), dord)
                }
            };
            if !found {
                return Ok((json!({ "target": target.as_str(), "order": "none" }), 1));
            }
            let (vo, dord) = (vo.expect("found"), dord.expect("found"));
            let certified = !occurs_in_instance(&p, &inst, &vo, &dord)?;
            let order = match fixed {
                Fixed::Dom => var_order_json(&inst, &vo),
                Fixed::Var => dom_order_json(&inst, &dord),
            };
            json!({
                "target": target.as_str(),
                "order": order,
                "certificate": {
                    "varOrder": var_order_json(&inst, &vo),
                    "domOrder": dom_order_json(&inst, &dord),
                    "occurs": !certified,
                },
            })
        }
        Command::Classify { pattern, cap } => {
            let p = load_pattern(&pattern)?;
            let c = classify_with(&p, &maximal_patterns(), cap)?;
            let mut v = c.to_json_value(&p);
            if let ac_patterns::classify::Classification::NotAcSolvable {
                instance,
                var_order: vo,
                dom_order: dord,
            } = &c
            {
                let inst = catalog_instance(*instance).instance;
                v["varOrder"] = var_order_json(&inst, vo);
                v["domOrder"] = dom_order_json(&inst, dord);
            }
            v
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => json!(CatalogName::ALL
                .iter()
                .map(|&n| {
                    let c = catalog_instance(n);
                    json!({
                        "name": n.as_str(),
                        "variables": c.instance.num_vars(),
                        "points": c.instance.num_points(),
                        "patterns": c.notes.iter().map(|p| p.as_str()).collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>()),
            CatalogAction::Show { name } => {
                let c = catalog_by_name(name.as_str())?;
                json!({
                    "name": c.name.as_str(),
                    "instance": instance_json(&c.instance),
                    "canonicalVarOrder": var_order_json(&c.instance, &c.canonical_var_order),
                    "canonicalDomOrder": dom_order_json(&c.instance, &c.canonical_dom_order),
                    "patterns": c.notes.iter().map(|p| p.as_str()).collect::<Vec<_>>(),
                })
            }
            CatalogAction::Verify => {
                let instances = CatalogName::ALL
                    .iter()
                    .map(|&n| {
                        let inst = catalog_instance(n).instance;
                        Ok(json!({
                            "name": n.as_str(),
                            "ac": is_arc_consistent(&inst),
                            "solutions": count_solutions(&inst, u64::MAX)?,
                        }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let checks = fig13_table()
                    .par_iter()
                    .map(|&(pn, cn)| {
                        let c = catalog_instance(cn);
                        let p = Pattern::builtin(pn);
                        let canonical = !occurs_in_instance(&p, &c.instance, &c.canonical_var_order, &c.canonical_dom_order)?;
                        let some = in_class(&p, &c.instance, DEFAULT_ORDER_CAP)?.is_some();
                        Ok(json!({
                            "pattern": pn.as_str(),
                            "instance": cn.as_str(),
                            "notOccursCanonical": canonical,
                            "inClass": some,
                        }))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let ok = instances.iter().all(|i| i["ac"] == json!(true) && i["solutions"] == json!(0))
                    && checks.iter().all(|c| c["notOccursCanonical"] == json!(true) && c["inClass"] == json!(true));
                json!({ "ok": ok, "instances": instances, "fig13": checks })
            }
        },
        Command::Gen { what } => match what {
            GenWhat::Gadget { target, cnf } => {
                let cnf = parse_dimacs(&read(&cnf)?)?;
                gadget_json(&gen_gadget(target, &cnf)?)
            }
            GenWhat::Instance {
                pattern,
                vars,
                dom,
                density,
                seed,
            } => {
                let p = load_pattern(&pattern)?;
                let (inst, vo, dord) = gen_pattern_free_instance(&p, vars, dom, density, seed)?;
                json!({
                    "instance": instance_json(&inst),
                    "varOrder": var_order_json(&inst, &vo),
                    "domOrder": dom_order_json(&inst, &dord),
                })
            }
        },
        Command::Oracle { instance, cap, count } => {
            let inst = load_instance(&instance)?;
            let mut v = match brute_force_solve(&inst, cap) {
                SearchResult::Solution(a) => json!({ "result": "sat", "solution": a.to_labels(&inst) }),
                SearchResult::Unsat => json!({ "result": "unsat" }),
                SearchResult::BudgetExceeded => json!({ "result": "budget-exceeded" }),
            };
            if count {
                v["count"] = match count_solutions(&inst, cap) {
                    Ok(n) => json!(n),
                    Err(_) => Value::Null,
                };
            }
            v
        }
        Command::Enumerate {
            max_vars,
            max_points,
            max_neg,
            report,
            cap,
        } => {
            if max_vars > 3 || max_points > 2 || max_neg > 2 {
                bail!("bounds are limited to 3 variables, 2 points per variable and 2 negative edges");
            }
            let patterns = enumerate_simple_patterns(max_vars, max_points, max_neg);
            let maximal = maximal_patterns();
            let verdicts = patterns
                .par_iter()
                .map(|p| classify_with(p, &maximal, cap).map(|c| (c.verdict(), c.to_json_value(p))))
                .collect::<ac_patterns::Result<Vec<_>>>()?;
            let mut counts = std::collections::BTreeMap::new();
            for (verdict, _) in &verdicts {
                *counts.entry(*verdict).or_insert(0usize) += 1;
            }
            if let Some(path) = report {
                let full: Vec<Value> = patterns
                    .iter()
                    .zip(&verdicts)
                    .map(|(p, (_, c))| json!({ "pattern": p.to_json_value(), "classification": c }))
                    .collect();
                std::fs::write(&path, serde_json::to_string(&full)?)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            json!({
                "bounds": { "maxVars": max_vars, "maxPoints": max_points, "maxNeg": max_neg },
                "patterns": patterns.len(),
                "verdicts": counts,
            })
        }
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((value, code)) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            }
            .expect("JSON values serialize");
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
