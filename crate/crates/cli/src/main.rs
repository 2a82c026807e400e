use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use valfield::artinschreier::{analyze, classify, ASInstance, ASOutcome};
use valfield::fields::FieldDesc;
use valfield::gallery::{self, Params, RenderMode};
use valfield::groups::{perron_basis, GroupDesc};
use valfield::hensel::{hensel_lift, SeriesPoly};
use valfield::series::Series;
use valfield::text::json::place_from_json;
use valfield::text::{parse_expr, parse_field, parse_group_desc, parse_group_elem, parse_poly, parse_series, render_valuation};
use valfield::{Error, Result};

#[derive(Parser)]
#[command(name = "valfield", version, about = "Exact computations in valued fields")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value and residue of a rational function under a place read from a JSON file.
    Eval {
        #[arg(long)]
        place: String,
        expr: String,
    },
    /// Newton lift of a simple root of a polynomial in X with coefficients in K[t].
    Lift {
        /// Polynomial in X and t, e.g. "X^2 - 1 - t".
        poly: String,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value = "Z")]
        group: String,
        /// Approximate root, a series such as "1 + t".
        #[arg(long)]
        start: String,
        #[arg(long)]
        precision: String,
    },
    /// Analyze X^p − X − c over F_p((t^Γ)).
    As {
        #[arg(long)]
        p: u64,
        /// The constant c as a series in t.
        #[arg(long)]
        c: String,
        /// Residue field; defaults to F_p.
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value = "8")]
        precision: String,
        #[arg(long, default_value_t = 16)]
        max_iter: usize,
    },
    /// Positive basis of the group generated by positive elements.
    Perron {
        #[arg(long, default_value = "quad")]
        group: String,
        #[arg(required = true)]
        elements: Vec<String>,
    },
    /// Run gallery scenarios (all when none are named).
    Gallery {
        names: Vec<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long)]
        precision: Option<String>,
        #[arg(long)]
        field_size: Option<u64>,
        /// Comma-separated denominator set S.
        #[arg(long, value_delimiter = ',')]
        s: Option<Vec<u64>>,
        #[arg(long)]
        seed: Option<u64>,
        /// Record wall-clock time in the reports.
        #[arg(long)]
        time: bool,
    },
    /// List the gallery catalog.
    List,
}

enum Outcome {
    Ok(String),
    ClaimFailure(String),
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json values serialize")
}

fn eval(place: &str, expr: &str, as_json: bool) -> Result<String> {
    let src = std::fs::read_to_string(place).map_err(|e| Error::Parse(format!("{place}: {e}")))?;
    let place = place_from_json(&src)?;
    let f = parse_expr(expr, &place.field()?, &place.vars())?;
    let v = render_valuation(&place.value(&f)?);
    let r = place.residue(&f)?.to_string();
    Ok(if as_json { pretty(json!({"expr": expr, "value": v, "residue": r})) } else { format!("v = {v}, residue = {r}") })
}

fn lift(poly: &str, field: &str, group: &str, start: &str, precision: &str, as_json: bool) -> Result<String> {
    let field = parse_field(field)?;
    let group = parse_group_desc(group)?;
    let vars = ["X".to_string(), "t".to_string()];
    let f = parse_poly(poly, &field, &vars)?;
    let mut coeffs = vec![Series::zero(&field, &group); f.degree_in(0) as usize + 1];
    for (e, c) in f.terms() {
        let term = Series::monomial(&group, c.clone(), group.from_int(e[1] as i64));
        coeffs[e[0] as usize] = coeffs[e[0] as usize].add(&term)?;
    }
    let sp = SeriesPoly::new(&field, &group, coeffs)?;
    let b = parse_series(start, &field, &group)?;
    let target = parse_group_elem(precision, &group)?;
    let r = hensel_lift(&sp, &b, &target)?;
    let steps: Vec<String> = r.steps.iter().map(render_valuation).collect();
    Ok(if as_json {
        pretty(json!({
            "poly": sp.to_string(),
            "start": b.to_string(),
            "target": target.to_string(),
            "result": r.root.to_string(),
            "steps": steps,
        }))
    } else {
        format!("f = {sp}\nroot = {}\nresidual values: {}", r.root, steps.join(", "))
    })
}

fn artin_schreier(
    p: u64,
    c: &str,
    field: Option<&str>,
    group: Option<&str>,
    precision: &str,
    max_iter: usize,
    as_json: bool,
) -> Result<String> {
    let field = match field {
        Some(f) => parse_field(f)?,
        None => FieldDesc::finite(p, 1)?,
    };
    if field.characteristic() != p {
        return Err(Error::InvalidParams(format!("field {field} does not have characteristic {p}")));
    }
    let group = match group {
        Some(g) => parse_group_desc(g)?,
        None => GroupDesc::p_divisible_hull(p)?,
    };
    let c = parse_series(c, &field, &group)?;
    let inst = ASInstance::new(c)?;
    let case = classify(&inst)?;
    let target = parse_group_elem(precision, &group)?;
    let out = analyze(&inst, &target, max_iter)?;
    let mut fields: Vec<(&str, String)> = vec![("case", case.to_string()), ("outcome", out.variant_name().to_string())];
    match &out {
        ASOutcome::Split { roots } => {
            fields.push(("roots", roots.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; ")));
        }
        ASOutcome::LiftedRoot { root } => fields.push(("root", root.to_string())),
        ASOutcome::NoResidueRoot { trace } => fields.push(("trace", trace.to_string())),
        ASOutcome::Ramified { root_value, note } => {
            fields.push(("root value", root_value.to_string()));
            fields.push(("note", note.clone()));
        }
        ASOutcome::DefectSuspect { partial, residual, iterations } => {
            fields.push(("partial", partial.to_string()));
            fields.push(("residual", residual.to_string()));
            fields.push(("iterations", iterations.to_string()));
        }
    }
    Ok(if as_json {
        let mut m = serde_json::Map::new();
        m.insert("polynomial".into(), json!(format!("X^{p} - X - ({})", inst.c)));
        for (k, v) in &fields {
            m.insert(k.replace(' ', "_"), json!(v));
        }
        if let ASOutcome::Split { roots } = &out {
            m.insert("roots".into(), json!(roots.iter().map(|r| r.to_string()).collect::<Vec<_>>()));
        }
        pretty(serde_json::Value::Object(m))
    } else {
        let w = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        fields.iter().map(|(k, v)| format!("{k:<w$}  {v}")).collect::<Vec<_>>().join("\n")
    })
}

fn perron(group: &str, elements: &[String], as_json: bool) -> Result<String> {
    let group = parse_group_desc(group)?;
    let alphas = elements.iter().map(|s| parse_group_elem(s, &group)).collect::<Result<Vec<_>>>()?;
    let r = perron_basis(&alphas, &alphas)?;
    r.verify(&alphas)?;
    let basis: Vec<String> = r.basis.iter().map(|g| g.to_string()).collect();
    Ok(if as_json {
        pretty(json!({
            "group": group.to_string(),
            "elements": alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "basis": basis,
            "coeffs": r.coeffs,
            "change_of_basis": r.change_of_basis,
        }))
    } else {
        let mut out = format!("basis: {}\n", basis.join(", "));
        let w = alphas.iter().map(|a| a.to_string().chars().count()).max().unwrap_or(0);
        for (a, row) in alphas.iter().zip(&r.coeffs) {
            let a = a.to_string();
            let cells: Vec<String> = row.iter().map(|n| n.to_string()).collect();
            out.push_str(&format!("{a}{}  [{}]\n", " ".repeat(w - a.chars().count()), cells.join(" ")));
        }
        out.trim_end().to_string()
    })
}

fn run_gallery(names: Vec<String>, params: Params, timed: bool, as_json: bool) -> Result<Outcome> {
    let names = if names.is_empty() || names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        gallery::list_scenarios().iter().map(|s| s.name.to_string()).collect()
    } else {
        for n in &names {
            gallery::canonical_name(n)?;
        }
        names
    };
    let reports = gallery::run_many(&names, &params, timed).into_iter().collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let mode = if as_json { RenderMode::Json } else { RenderMode::Text };
    let out = match mode {
        RenderMode::Json if reports.len() == 1 => gallery::render_json(&reports[0]),
        RenderMode::Json => serde_json::to_string_pretty(&reports).expect("reports serialize"),
        RenderMode::Text => reports.iter().map(gallery::render_text).collect::<Vec<_>>().join("\n").trim_end().to_string(),
    };
    Ok(if pass { Outcome::Ok(out) } else { Outcome::ClaimFailure(out) })
}

fn list(as_json: bool) -> String {
    let cat = gallery::list_scenarios();
    if as_json {
        return serde_json::to_string_pretty(&cat).expect("catalog serializes");
    }
    let mut out = String::new();
    for s in &cat {
        out.push_str(&format!("{}  {}  {}\n", s.name, s.title, s.reference));
        for p in &s.params {
            out.push_str(&format!("    {} ({}, default {}): {}\n", p.name, p.kind, p.default, p.constraint));
        }
    }
    out.trim_end().to_string()
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    let j = cli.json;
    Ok(match cli.command {
        Command::Eval { place, expr } => Outcome::Ok(eval(&place, &expr, j)?),
        Command::Lift { poly, field, group, start, precision } => Outcome::Ok(lift(&poly, &field, &group, &start, &precision, j)?),
        Command::As { p, c, field, group, precision, max_iter } => {
            Outcome::Ok(artin_schreier(p, &c, field.as_deref(), group.as_deref(), &precision, max_iter, j)?)
        }
        Command::Perron { group, elements } => Outcome::Ok(perron(&group, &elements, j)?),
        Command::Gallery { names, p, k_max, precision, field_size, s, seed, time } => {
            let params = Params { p, k_max, precision, field_size, s, seed };
            run_gallery(names, params, time, j)?
        }
        Command::List => Outcome::Ok(list(j)),
    })
}

/// Print to stdout, tolerating a closed pipe.
fn emit(out: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{out}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    match dispatch(cli) {
        Ok(Outcome::Ok(out)) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Ok(Outcome::ClaimFailure(out)) => {
            emit(&out);
            ExitCode::from(1)
        }
        Err(e) => {
            if as_json {
                eprintln!("{}", json!({"error": error_kind(&e), "message": e.to_string()}));
            } else {
                eprintln!("error[{}]: {e}", error_kind(&e));
            }
            ExitCode::from(2)
        }
    }
}
