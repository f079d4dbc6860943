use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use invsemi::coarse::{asdim0_evidence, r_components, sparse_evidence};
use invsemi::embed::{cross_check, embed_space, verify_distortion, Colorer, FiniteMetricSpace};
use invsemi::metric::{
    coarse_triviality, complete_word_metric, length_from_metric, schuetzenberger_graph, validate_metric,
    weighted_word_metric, MetricTable, WeightedGenerators,
};
use invsemi::roe::{decompose_band, propagation, wagner_preston_on, BandOperator, Choice};
use invsemi::semigroup::{
    classify, generate_closure, make_family, ConcreteDocument, Element, FamilyDescriptor, FiniteSemigroup,
    GreenTable, InverseSemigroup, SemigroupOracle,
};
use invsemi::{suite, Error};

#[derive(Parser, Debug)]
#[command(name = "invsemi", version, about = "Coarse geometry of inverse semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Green's relations of a finite semigroup or closure.
    Green(Common),
    /// A Schützenberger graph ball around a root element.
    Graph {
        #[command(flatten)]
        common: Common,
        /// Root element as a JSON key; defaults to the first basepoint.
        #[arg(long)]
        root: Option<String>,
    },
    /// Word metric table with validation.
    Metric(Common),
    /// Asymptotic dimension 0, sparseness and coarse triviality at scale.
    Coarse(Common),
    /// Embed a finite metric space into an L-class.
    Embed {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
        #[arg(long, value_enum, default_value_t = ColorerArg::Greedy)]
        colorer: ColorerArg,
        /// Check the distortion bounds and recompute distances in the semigroup.
        #[arg(long)]
        verify: bool,
    },
    /// Propagation and band decomposition of an operator.
    Roe {
        #[command(flatten)]
        common: Common,
        /// Use the Wagner–Preston matrix of this element instead of --input.
        #[arg(long)]
        element: Option<String>,
        #[arg(long, value_enum, default_value_t = ChoiceArg::Least)]
        choice: ChoiceArg,
    },
    /// Run the seeded property suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated criterion numbers, default all.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Family shorthand (I3, bicyclic, fim1, Z2xN, chain-nat, ..) or JSON descriptor.
    #[arg(long)]
    family: Option<String>,
    /// Input file: family descriptor or concrete table, metric space, or operator.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Scope depth for infinite families.
    #[arg(long)]
    scope: Option<u64>,
    /// Exploration radius inside each L-class.
    #[arg(long)]
    radius: Option<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1u64, 2, 3])]
    scales: Vec<u64>,
    /// JSON list of `[element, weight]` pairs.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long, default_value_t = 4096)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ColorerArg {
    Greedy,
    MisraGries,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ChoiceArg {
    Least,
    Greatest,
}

enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DistortionViolation { .. } | Error::DecompositionUnavailable { .. } | Error::InfinitePropagation => {
                Failure::Violation(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Outcome {
    text: String,
    violated: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            if out.violated {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Green(c) => green(c),
        Command::Graph { common, root } => graph(common, root.as_deref()),
        Command::Metric(c) => metric(c),
        Command::Coarse(c) => coarse(c),
        Command::Embed { common, basepoint, colorer, verify } => embed(common, *basepoint, *colorer, *verify),
        Command::Roe { common, element, choice } => roe(common, element.as_deref(), *choice),
        Command::Verify { common, criteria } => verify(common, criteria),
    }
}

fn document(command: &str, config: Value, report: Value) -> String {
    let doc = json!({"config": {"command": command, "options": config}, "report": report});
    format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON values serialize"))
}

fn config_of(c: &Common, extra: Value) -> Value {
    let mut v = serde_json::to_value(c).expect("config serializes");
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.extend(more);
    }
    v
}

fn reject_format(c: &Common, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&c.format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--format {:?} is not available here", c.format).to_lowercase()))
    }
}

fn oracle(c: &Common) -> Result<SemigroupOracle, Failure> {
    let desc = match (&c.family, &c.input) {
        (Some(f), _) => FamilyDescriptor::parse(f)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            match FamilyDescriptor::parse(&text) {
                Ok(d) => d,
                Err(_) => {
                    let doc: ConcreteDocument =
                        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    FamilyDescriptor::Concrete(doc)
                }
            }
        }
        (None, None) => return Err(Failure::Usage("one of --family or --input is required".into())),
    };
    Ok(make_family(&desc)?)
}

/// The metric setting: a complete closure for finite families, otherwise a
/// scoped ball.
struct Setting {
    oracle: SemigroupOracle,
    closure: Option<FiniteSemigroup>,
    gens: WeightedGenerators,
    table: MetricTable,
}

fn generators(c: &Common, s: &dyn InverseSemigroup, o: &SemigroupOracle, depth: u64) -> Result<WeightedGenerators, Failure> {
    match &c.weights {
        None => Ok(WeightedGenerators::unit(s, &o.generators(depth))?),
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let rows: Vec<(Value, u64)> =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let entries = rows
                .iter()
                .map(|(k, w)| Ok((o.parse_key(k)?, *w)))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(WeightedGenerators::symmetric(s, entries)?)
        }
    }
}

fn default_radius(o: &SemigroupOracle, c: &Common, scope: u64) -> Option<u64> {
    c.radius.or(match o.family() {
        invsemi::semigroup::Family::Fim1 | invsemi::semigroup::Family::Chain(_) => None,
        _ => Some(2 * scope),
    })
}

fn setting(c: &Common) -> Result<Setting, Failure> {
    let o = oracle(c)?;
    if o.is_finite() {
        let closure = generate_closure(&o, &o.generators(0), c.cap)?;
        if closure.is_complete() {
            let gens = generators(c, &closure, &o, 0)?;
            let table = complete_word_metric(&closure, &gens)?;
            return Ok(Setting { oracle: o, closure: Some(closure), gens, table });
        }
    }
    let scope = c.scope.ok_or(Error::ScopeRequired)?;
    let base = o.scope_basepoints(scope).ok_or(Error::ScopeRequired)?;
    let gens = generators(c, &o, &o, scope)?;
    let table = weighted_word_metric(&o, &gens, &base, default_radius(&o, c, scope))?;
    Ok(Setting { oracle: o, closure: None, gens, table })
}

fn green(c: &Common) -> Result<Outcome, Failure> {
    reject_format(c, &[Format::Json, Format::Csv])?;
    let o = oracle(c)?;
    let closure = if o.is_finite() {
        generate_closure(&o, &o.generators(0), c.cap)?
    } else {
        let scope = c.scope.ok_or(Error::ScopeRequired)?;
        generate_closure(&o, &o.generators(scope), c.cap)?
    };
    let table = GreenTable::new(&closure);
    let text = if c.format == Format::Csv {
        let mut out = String::from("element,l,r,d\n");
        for (i, e) in closure.elements().iter().enumerate() {
            out.push_str(&format!("\"{}\",{},{},{}\n", e.to_json().to_string().replace('"', "\"\""), table.l[i], table.r[i], table.d[i]));
        }
        out
    } else {
        let rows: Vec<Value> = closure
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| json!({"element": e, "l": table.l[i], "r": table.r[i], "d": table.d[i]}))
            .collect();
        document(
            "green",
            config_of(c, json!({})),
            json!({
                "status": closure.status(),
                "elements": closure.len(),
                "layer_sizes": closure.layer_sizes(),
                "class_counts": {
                    "l": table.l.iter().max().map_or(0, |m| m + 1),
                    "r": table.r.iter().max().map_or(0, |m| m + 1),
                    "d": table.d.iter().max().map_or(0, |m| m + 1),
                },
                "classification": classify(&closure),
                "table": rows,
            }),
        )
    };
    Ok(Outcome { text, violated: false })
}

fn graph(c: &Common, root: Option<&str>) -> Result<Outcome, Failure> {
    reject_format(c, &[Format::Json, Format::Dot])?;
    let s = setting(c)?;
    let root = match root {
        Some(text) => {
            let v: Value = serde_json::from_str(text).map_err(|e| Failure::Usage(format!("--root: {e}")))?;
            s.oracle.parse_key(&v)?
        }
        None => s.table.classes().first().map(|cl| cl.idempotent.clone()).ok_or(Error::ScopeRequired)?,
    };
    let radius = c.radius.or(c.scope).unwrap_or(8);
    let g = match &s.closure {
        Some(t) => schuetzenberger_graph(t, &s.gens, &root, radius)?,
        None => schuetzenberger_graph(&s.oracle, &s.gens, &root, radius)?,
    };
    let text = if c.format == Format::Dot {
        g.to_dot()
    } else {
        document("graph", config_of(c, json!({"root": root})), serde_json::to_value(&g).map_err(Error::from)?)
    };
    Ok(Outcome { text, violated: false })
}

fn metric(c: &Common) -> Result<Outcome, Failure> {
    reject_format(c, &[Format::Json, Format::Csv])?;
    let s = setting(c)?;
    let r_max = c.scales.iter().copied().max().unwrap_or(1);
    let validation = match &s.closure {
        Some(t) => validate_metric(t, &s.table, r_max),
        None => validate_metric(&s.oracle, &s.table, r_max),
    };
    let l = length_from_metric(&s.table);
    let audit = match &s.closure {
        Some(t) => l.audit(t),
        None => l.audit(&s.oracle),
    };
    let violated = !validation.passed() || audit.violations() > 0;
    let text = if c.format == Format::Csv {
        s.table.to_csv()
    } else {
        document(
            "metric",
            config_of(c, json!({"generators": s.gens})),
            json!({"validation": validation, "length_audit": audit, "table": s.table}),
        )
    };
    Ok(Outcome { text, violated })
}

fn coarse(c: &Common) -> Result<Outcome, Failure> {
    reject_format(c, &[Format::Json, Format::Csv])?;
    let s = setting(c)?;
    let text = if c.format == Format::Csv {
        let r = c.scales.first().copied().unwrap_or(1);
        r_components(&s.table, r).to_csv()
    } else {
        let partitions: Vec<Value> = c
            .scales
            .iter()
            .map(|&r| {
                let p = r_components(&s.table, r);
                json!({"scale": r, "blocks": p.blocks.len(), "max_size": p.max_size(), "max_diameter": p.max_diameter()})
            })
            .collect();
        document(
            "coarse",
            config_of(c, json!({"scope": s.table.scope()})),
            json!({
                "asdim0": asdim0_evidence(&s.table, &c.scales),
                "sparse": sparse_evidence(&s.table, &c.scales),
                "coarsely_trivial": coarse_triviality(&s.table),
                "components": partitions,
            }),
        )
    };
    Ok(Outcome { text, violated: false })
}

fn load_space(path: &PathBuf) -> Result<FiniteMetricSpace, Failure> {
    let text = fs::read_to_string(path)?;
    let space = if text.trim_start().starts_with('{') {
        FiniteMetricSpace::from_edge_list_json(&text)?
    } else {
        FiniteMetricSpace::from_csv(&text)?
    };
    Ok(space)
}

fn embed(c: &Common, basepoint: usize, colorer: ColorerArg, verify: bool) -> Result<Outcome, Failure> {
    reject_format(c, &[Format::Json, Format::Dot])?;
    let path = c.input.as_ref().ok_or_else(|| Failure::Usage("embed needs --input".into()))?;
    let x = load_space(path)?;
    let colorer = match colorer {
        ColorerArg::Greedy => Colorer::Greedy,
        ColorerArg::MisraGries => Colorer::MisraGries,
    };
    let e = embed_space(&x, basepoint, colorer)?;
    if c.format == Format::Dot {
        return Ok(Outcome { text: e.to_dot(), violated: false });
    }
    let mut report = json!({
        "points": x.len(),
        "diameter": x.diameter(),
        "levels": e.family.levels.iter().map(|l| json!({"n": l.n, "edges": l.edges.len(), "max_degree": l.max_degree, "matchings": l.matchings.len()})).collect::<Vec<_>>(),
        "embedding": e.generators_json(),
        "images": (0..e.len()).map(|y| json!({"point": x.labels()[y], "image": Element::map(e.image(y).clone())})).collect::<Vec<_>>(),
    });
    if verify {
        let distortion = verify_distortion(&x, &e)?;
        let bounds_hold = distortion.rho_minus.iter().all(|(r, v)| v >= r)
            && distortion.rho_plus.iter().all(|(r, v)| *v <= r + 1);
        let cross = if x.len() <= 16 { Some(cross_check(&e)?) } else { None };
        report["distortion"] = json!({
            "report": distortion,
            "rho_minus_at_least_r": bounds_hold,
            "cross_check": cross,
        });
        let violated = !bounds_hold || cross.as_ref().is_some_and(|cc| !cc.passed());
        return Ok(Outcome { text: document("embed", config_of(c, json!({"basepoint": basepoint, "colorer": colorer})), report), violated });
    }
    Ok(Outcome {
        text: document("embed", config_of(c, json!({"basepoint": basepoint, "colorer": colorer})), report),
        violated: false,
    })
}

fn roe(c: &Common, element: Option<&str>, choice: ChoiceArg) -> Result<Outcome, Failure> {
    reject_format(c, &[Format::Json])?;
    let family_only = Common { input: None, ..c.clone() };
    let s = setting(&family_only)?;
    let indices: Vec<Element> = match &s.closure {
        Some(t) => t.elements().to_vec(),
        None => s.table.elements(),
    };
    let t = match (element, &c.input) {
        (Some(text), _) => {
            let v: Value = serde_json::from_str(text).map_err(|e| Failure::Usage(format!("--element: {e}")))?;
            let g = s.oracle.parse_key(&v)?;
            match &s.closure {
                Some(cl) => wagner_preston_on(cl, &indices, &g)?,
                None => wagner_preston_on(&s.oracle, &indices, &g)?,
            }
        }
        (None, Some(path)) => BandOperator::from_json(&s.oracle, &fs::read_to_string(path)?)?,
        (None, None) => return Err(Failure::Usage("roe needs --element or --input".into())),
    }
    .with_tolerance(c.tolerance);
    let choice = match choice {
        ChoiceArg::Least => Choice::Least,
        ChoiceArg::Greatest => Choice::Greatest,
    };
    let prop = propagation(&t, &s.table)?;
    let dec = match &s.closure {
        Some(cl) => decompose_band(&t, &s.table, cl, choice)?,
        None => decompose_band(&t, &s.table, &s.oracle, choice)?,
    };
    let violated = dec.residual_operator > c.tolerance;
    let text = document(
        "roe",
        config_of(c, json!({"element": element, "choice": choice, "scope": s.table.scope()})),
        json!({"dimension": t.dim(), "propagation": prop, "decomposition": dec}),
    );
    Ok(Outcome { text, violated })
}

fn verify(c: &Common, criteria: &[u8]) -> Result<Outcome, Failure> {
    reject_format(c, &[Format::Json])?;
    let list: Vec<u8> = if criteria.is_empty() { suite::CRITERIA.to_vec() } else { criteria.to_vec() };
    let reports = list.iter().map(|&k| suite::run(k, c.seed)).collect::<Result<Vec<_>, _>>()?;
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.criterion).collect();
    let text = document(
        "verify",
        config_of(c, json!({"criteria": list})),
        json!({"passed": failed.is_empty(), "failed": failed, "criteria": reports}),
    );
    Ok(Outcome { text, violated: !failed.is_empty() })
}
