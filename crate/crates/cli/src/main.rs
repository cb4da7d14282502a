mod load;
mod sweep;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use quandle_homotopy::cocycles::{build_basis, check_cocycles, rank_modulo_coboundaries, CocyclePolynomial};
use quandle_homotopy::homology::{AbelianGroupClass, ChainComplex, Variant};
use quandle_homotopy::homotopy::{pi2_quandle_space, pi2_rack_space, pi3_quandle, rational_ranks, HomotopyResult};
use quandle_homotopy::link::{
    count_colorings_linear, shadow_invariant, two_cocycle_invariant, CocycleTable, ColoringSearch,
};
use quandle_homotopy::quandle::XSetAction;
use quandle_homotopy::tables::{evaluate_row, regular_table};
use serde_json::{json, Value};

use load::CocycleSource;

#[derive(Parser)]
#[command(
    name = "qhom",
    version,
    about = "Quandle homology, homotopy groups of quandle spaces, cocycles and link invariants"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe and validate a quandle (`dihedral:5`, `gf:3^2:omega=-1`, `trivial:2`, `table:<file>`).
    Quandle {
        quandle: String,
        /// Also print the operation table in the `quandle v1` format.
        #[arg(long)]
        table: bool,
    },
    /// Integral (or mod p) homology of one of the four complexes.
    Homology {
        quandle: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "Q")]
        variant: VariantArg,
        #[arg(long = "coefficients", value_enum, default_value = "pt")]
        coefficients: CoeffArg,
        /// Dimension over F_p instead of the integral group.
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Homotopy groups of the rack and quandle spaces.
    Homotopy {
        #[command(subcommand)]
        target: HomotopyCmd,
    },
    /// Cocycles of Alexander quandles on finite fields.
    Cocycles {
        #[command(subcommand)]
        action: CocycleCmd,
    },
    /// Colorings and cocycle invariants of link diagrams.
    Link {
        #[command(subcommand)]
        action: LinkCmd,
    },
    /// Reproduce the built-in tables; exits 1 on any mismatch.
    Tables {
        #[command(subcommand)]
        table: TableCmd,
    },
    /// Scan every omega over the given fields. Cached in $QHOM_CACHE_DIR or --cache-dir.
    Sweep {
        /// Characteristics, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Extension degrees, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        degrees: Vec<u32>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "R")]
    R,
    #[value(name = "D")]
    D,
    #[value(name = "Q")]
    Q,
    #[value(name = "L")]
    L,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffArg {
    #[value(name = "pt")]
    Pt,
    #[value(name = "X")]
    X,
    #[value(name = "Inn")]
    Inn,
}

#[derive(Subcommand)]
enum HomotopyCmd {
    /// pi_2 of the quandle space.
    Pi2q { quandle: String },
    /// pi_2 of the rack space.
    Pi2 { quandle: String },
    /// pi_3 of the quandle space.
    Pi3q { quandle: String },
    /// Rational ranks of pi_2 and pi_3 for a quandle with this many components.
    Ranks {
        #[arg(long)]
        components: u64,
    },
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// The spanning family and the dimensions of H^2 and H^3.
    List {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
    /// Check the cocycle condition (all explicit members, or one).
    Verify {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long)]
        cocycle: Option<String>,
        /// Also check linear independence modulo coboundaries (dense; small fields only).
        #[arg(long)]
        independence: bool,
    },
    /// Evaluate a cocycle at a triple of field elements.
    Eval {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long)]
        cocycle: String,
        /// Comma separated x1,x2,x3.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
}

#[derive(Subcommand)]
enum LinkCmd {
    /// Count colorings (backtracking, and linear algebra for Alexander quandles).
    Color {
        #[arg(long)]
        quandle: String,
        /// PD file, `braid:<strands>:<word>` or `unknot`.
        #[arg(long)]
        diagram: String,
        /// List the colorings.
        #[arg(long)]
        list: bool,
    },
    /// Cocycle state sum: shadow sum for 3-cocycles, arc sum for 2-cocycles.
    Invariant {
        #[arg(long)]
        quandle: String,
        /// Family name (`E1(1,p*1)`, `#0`) or a JSON file.
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        diagram: String,
    },
}

#[derive(Subcommand)]
enum TableCmd {
    /// H_2^Q, H_3^Q and pi_2 for the small regular Alexander quandles.
    Regular,
}

/// What a command produced: output in both forms plus whether its checks passed.
struct Report {
    json: Value,
    text: String,
    pass: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Report {
        Report { json, text, pass: true }
    }
}

fn group_json(g: &AbelianGroupClass) -> Value {
    json!({"group": g.to_string(), "rank": g.rank(), "torsion": g.torsion()})
}

fn quandle_cmd(spec: &str, show_table: bool) -> Result<Report> {
    let x = load::quandle(spec)?;
    let q = x.quandle();
    let comps = q.connected_components();
    let mut j = json!({
        "quandle": x.label(),
        "order": q.order(),
        "components": comps.len(),
        "connected": comps.len() == 1,
    });
    let mut text = format!("{}\n  order {}\n  components {}\n", x.label(), q.order(), comps.len());
    let mut pass = true;
    if let Ok(a) = x.alexander() {
        let r = a.regularity();
        j["t_order"] = json!(r.e);
        j["regular"] = json!(r.regular);
        writeln!(text, "  T-order {}\n  regular {}", r.e, r.regular)?;
        if r.regular {
            let inn = a.inn_structure_check()?;
            pass = inn.passed();
            j["inn"] = json!({"order": inn.inn_order, "expected": inn.expected_order, "witness": inn.witness});
            writeln!(text, "  |Inn| {} (semidirect product order {})", inn.inn_order, inn.expected_order)?;
            if let Some(w) = &inn.witness {
                writeln!(text, "  Inn structure FAILS: {w}")?;
            }
        }
    } else {
        let inn = q.inner_group()?;
        j["inn_order"] = json!(inn.order());
        writeln!(text, "  |Inn| {}", inn.order())?;
    }
    if show_table {
        j["table"] = json!(q.rows());
        text.push_str(&q.to_table_text());
    }
    Ok(Report { json: j, text, pass })
}

fn homology_cmd(
    spec: &str,
    degree: usize,
    variant: VariantArg,
    coeff: CoeffArg,
    modulus: Option<u64>,
) -> Result<Report> {
    if degree == 0 {
        bail!("degree must be at least 1");
    }
    let x = load::quandle(spec)?;
    let q = x.quandle();
    let variant = match variant {
        VariantArg::R => Variant::R,
        VariantArg::D => Variant::D,
        VariantArg::Q => Variant::Q,
        VariantArg::L => Variant::L,
    };
    let group;
    let y = match coeff {
        CoeffArg::Pt => XSetAction::point(q),
        CoeffArg::X => XSetAction::quandle(q),
        CoeffArg::Inn => {
            group = q.inner_group()?;
            XSetAction::inner(q, &group)
        }
    };
    let c = ChainComplex::build(q, &y, variant, degree + 1)?;
    let base = json!({
        "quandle": x.label(),
        "variant": variant.to_string(),
        "coefficients": y.kind().label(),
        "degree": degree,
    });
    let mut j = base;
    let label = format!("H_{degree}^{variant}({}; {})", x.label(), y.kind().label());
    let text = match modulus {
        Some(p) => {
            let d = c.homology_mod(degree, p)?;
            j["prime"] = json!(p);
            j["dimension"] = json!(d);
            format!("dim_F{p} {label} = {d}\n")
        }
        None => {
            let g = c.homology(degree)?;
            j["rank"] = json!(g.rank());
            j["torsion"] = json!(g.torsion());
            format!("{label} = {g}\n")
        }
    };
    Ok(Report::ok(j, text))
}

fn homotopy_json(label: &str, r: &HomotopyResult) -> (Value, String) {
    let mut j = json!({
        "quandle": label,
        "target": r.target.name(),
        "value": group_json(&r.value),
        "derivation": r.derivation.tag(),
        "verified": r.verified,
    });
    let mut text = format!("{} of {label} = {}\n  derivation: {}\n", r.target.name(), r.value, r.derivation.tag());
    for v in &r.verified {
        let _ = writeln!(text, "  checked: {v}");
    }
    if let Some(g) = &r.rack_pi3 {
        j["rack_pi3"] = group_json(g);
        let _ = writeln!(text, "  pi_3 of the rack space = {g}");
    }
    (j, text)
}

fn homotopy_cmd(cmd: &HomotopyCmd) -> Result<Report> {
    let (spec, f): (&str, fn(&_) -> _) = match cmd {
        HomotopyCmd::Ranks { components } => {
            if *components == 0 {
                bail!("a quandle has at least one component");
            }
            let (r2, r3) = rational_ranks(*components);
            let j = json!({"components": components, "pi2_rank": r2, "pi3_rank": r3});
            return Ok(Report::ok(j, format!("rank pi_2 = {r2}, rank pi_3 = {r3}\n")));
        }
        HomotopyCmd::Pi2q { quandle } => (quandle, pi2_quandle_space),
        HomotopyCmd::Pi2 { quandle } => (quandle, pi2_rack_space),
        HomotopyCmd::Pi3q { quandle } => (quandle, pi3_quandle),
    };
    let x = load::quandle(spec)?;
    let a = x.alexander()?;
    let r = f(a)?;
    let (j, text) = homotopy_json(&x.label(), &r);
    Ok(Report::ok(j, text))
}

fn poly_json(f: &CocyclePolynomial) -> Value {
    let field = f.field();
    Value::Array(f.terms().iter().map(|(e, &c)| json!({"e": e, "c": field.format(c)})).collect())
}

fn cocycles_cmd(cmd: &CocycleCmd) -> Result<Report> {
    match cmd {
        CocycleCmd::List { field, omega } => {
            let (s, x) = load::alexander_field(field, omega)?;
            let basis = build_basis(&s);
            let members: Vec<Value> = basis
                .members
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    json!({
                        "index": i,
                        "id": m.family.to_string(),
                        "kind": m.family.kind(),
                        "case": m.family.case(),
                        "polynomial": m.polynomial.as_ref().map(poly_json),
                    })
                })
                .collect();
            let mut text = format!("{}\n  dim H^2 = {}, dim H^3 = {}\n", x.spec(), basis.b2, basis.b3);
            for (i, m) in basis.members.iter().enumerate() {
                match &m.polynomial {
                    Some(p) => writeln!(text, "  #{i} {} = {p}", m.family)?,
                    None => writeln!(text, "  #{i} {} (counted, no closed form)", m.family)?,
                }
            }
            let j = json!({"quandle": x.spec().to_string(), "b2": basis.b2, "b3": basis.b3, "members": members});
            Ok(Report::ok(j, text))
        }
        CocycleCmd::Verify { field, omega, cocycle, independence } => {
            let (s, x) = load::alexander_field(field, omega)?;
            let named: Vec<(String, CocyclePolynomial)> = match cocycle {
                Some(id) => match load::cocycle(id, &load::Loaded::Alexander(x.clone()))? {
                    CocycleSource::Polynomial { name, poly } => vec![(name, poly)],
                    CocycleSource::Table { .. } => bail!("verify works on polynomial cocycles"),
                },
                None => build_basis(&s)
                    .members
                    .into_iter()
                    .filter_map(|m| m.polynomial.map(|p| (m.family.to_string(), p)))
                    .collect(),
            };
            let polys: Vec<CocyclePolynomial> = named.iter().map(|(_, p)| p.clone()).collect();
            let checks = check_cocycles(&polys, &x)?;
            let mut pass = true;
            let mut text = String::new();
            let mut rows = Vec::new();
            for ((name, _), c) in named.iter().zip(&checks) {
                pass &= c.passed();
                match &c.witness {
                    None => writeln!(text, "ok   {name}")?,
                    Some(w) => writeln!(text, "FAIL {name}: {w}")?,
                }
                rows.push(json!({"id": name, "cocycle": c.passed(), "witness": c.witness}));
            }
            let mut j = json!({"quandle": x.spec().to_string(), "results": rows});
            if *independence {
                let rank = rank_modulo_coboundaries(&polys, &x)?;
                let ok = rank == polys.len();
                pass &= ok;
                j["rank_modulo_coboundaries"] = json!(rank);
                writeln!(
                    text,
                    "{} rank modulo coboundaries {rank} of {}",
                    if ok { "ok  " } else { "FAIL" },
                    polys.len()
                )?;
            }
            j["pass"] = json!(pass);
            Ok(Report { json: j, text, pass })
        }
        CocycleCmd::Eval { field, omega, cocycle, at } => {
            let (_, x) = load::alexander_field(field, omega)?;
            let poly = match load::cocycle(cocycle, &load::Loaded::Alexander(x.clone()))? {
                CocycleSource::Polynomial { poly, .. } => poly,
                CocycleSource::Table { .. } => bail!("eval works on polynomial cocycles"),
            };
            let f = poly.field().clone();
            let xs = load::elements(&f, at)?;
            let [a, b, c] = xs[..] else { bail!("--at needs exactly three elements") };
            let v = poly.evaluate_triple([a, b, c]);
            let j = json!({
                "quandle": x.spec().to_string(),
                "cocycle": cocycle,
                "at": [f.format(a), f.format(b), f.format(c)],
                "value": f.format(v),
            });
            Ok(Report::ok(j, format!("{}\n", f.format(v))))
        }
    }
}

fn link_cmd(cmd: &LinkCmd) -> Result<Report> {
    match cmd {
        LinkCmd::Color { quandle, diagram, list } => {
            let x = load::quandle(quandle)?;
            let d = load::diagram(diagram)?;
            let search = ColoringSearch::new(x.quandle(), &d);
            let all = search.all();
            let linear = x.alexander().ok().map(|a| count_colorings_linear(a, &d));
            let pass = linear.is_none_or(|n| n == all.len() as u128);
            let mut j = json!({
                "quandle": x.label(),
                "diagram": diagram,
                "arcs": d.arc_count(),
                "colorings": all.len(),
                "linear": linear.map(|n| n.to_string()),
            });
            let mut text = format!("{} colorings of {diagram} by {}\n", all.len(), x.label());
            if let Some(n) = linear {
                writeln!(text, "  linear count {n}{}", if pass { "" } else { " (MISMATCH)" })?;
            }
            if *list {
                j["list"] = json!(all);
                for c in &all {
                    writeln!(text, "  {c:?}")?;
                }
            }
            Ok(Report { json: j, text, pass })
        }
        LinkCmd::Invariant { quandle, cocycle, diagram } => {
            let x = load::quandle(quandle)?;
            let d = load::diagram(diagram)?;
            let src = load::cocycle(cocycle, &x)?;
            let table = match &src {
                CocycleSource::Polynomial { poly, .. } => CocycleTable::from_polynomial(poly, x.alexander()?),
                CocycleSource::Table { table, .. } => table.clone(),
            };
            let sum = match table.arity() {
                2 => two_cocycle_invariant(x.quandle(), &d, &table)?,
                _ => shadow_invariant(x.quandle(), &d, &table)?,
            };
            let terms: Vec<Value> = sum.terms().into_iter().map(|(g, k)| json!({"element": g, "count": k})).collect();
            let j = json!({
                "quandle": x.label(),
                "cocycle": src.name(),
                "diagram": diagram,
                "arity": table.arity(),
                "state_sum": sum.to_string(),
                "terms": terms,
            });
            Ok(Report::ok(j, format!("{sum}\n")))
        }
    }
}

fn tables_cmd() -> Result<Report> {
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut pass = true;
    for row in regular_table() {
        let out = evaluate_row(&row);
        pass &= out.passed();
        let [h2, h3, pi2] = &row.expected;
        writeln!(
            text,
            "{} {:<20} H2 {h2:<8} H3 {h3:<10} pi2 {pi2}",
            if out.passed() { "ok  " } else { "FAIL" },
            row.label
        )?;
        let mut computed = Vec::new();
        for c in &out.computed {
            match &c.values {
                Ok(([a, b, p], der)) => {
                    if [a, b, p] != [h2, h3, pi2] {
                        writeln!(text, "     {} computed H2 {a} H3 {b} pi2 {p}", c.spec)?;
                    }
                    computed.push(json!({
                        "spec": c.spec, "h2": a.to_string(), "h3": b.to_string(), "pi2": p.to_string(),
                        "derivation": der.tag(),
                    }));
                }
                Err(e) => {
                    writeln!(text, "     {} error: {e}", c.spec)?;
                    computed.push(json!({"spec": c.spec, "error": e}));
                }
            }
        }
        rows.push(json!({
            "label": row.label,
            "expected": {"h2": h2.to_string(), "h3": h3.to_string(), "pi2": pi2.to_string()},
            "computed": computed,
            "pass": out.passed(),
        }));
    }
    Ok(Report { json: json!({"rows": rows, "pass": pass}), text, pass })
}

fn sweep_cmd(primes: &[u64], degrees: &[u32], cache_dir: Option<PathBuf>, json_out: bool) -> Result<Report> {
    let dir = cache_dir.or_else(|| std::env::var_os(sweep::CACHE_ENV).map(PathBuf::from));
    let mut cache = dir.as_deref().map(sweep::Cache::open).transpose()?;
    let jobs = sweep::jobs(primes, degrees)?;
    let records = sweep::run(&jobs, &mut cache)?;
    if let Some(c) = &cache {
        for path in &c.corrupt {
            eprintln!("warning: cache entry {path} failed its checksum; recomputed");
        }
    }
    let mut text = String::new();
    if json_out {
        for r in &records {
            writeln!(text, "{r}")?;
        }
    } else {
        writeln!(text, "{:<36} {:>4} {:>4} {:>8} {:>5}", "quandle", "b2", "b3", "pi2/p", "norm1")?;
        for r in &records {
            writeln!(
                text,
                "{:<36} {:>4} {:>4} {:>8} {:>5}",
                r["spec"].as_str().unwrap_or_default(),
                r["b2"].to_string(),
                r["b3"].to_string(),
                r["pi2_dim_mod_p"].to_string(),
                r["norm_one"].to_string()
            )?;
        }
    }
    // JSON lines are already in `text`
    Ok(Report { json: Value::Null, text, pass: true })
}

fn run(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Quandle { quandle, table } => quandle_cmd(&quandle, table),
        Command::Homology { quandle, degree, variant, coefficients, modulus } => {
            homology_cmd(&quandle, degree, variant, coefficients, modulus)
        }
        Command::Homotopy { target } => homotopy_cmd(&target),
        Command::Cocycles { action } => cocycles_cmd(&action),
        Command::Link { action } => link_cmd(&action),
        Command::Tables { table: TableCmd::Regular } => tables_cmd(),
        Command::Sweep { primes, degrees, cache_dir } => sweep_cmd(&primes, &degrees, cache_dir, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = cli.json;
    match run(cli) {
        Ok(r) => {
            if json_out && !r.json.is_null() {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("values serialize"));
            } else {
                print!("{}", r.text);
            }
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
