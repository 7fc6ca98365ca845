//! `tremor`: estimates, monomial solving, thermal relations and the full
//! regression table over the bound-system catalog.
//!
//! Exit codes: 0 success, 1 estimation or solve failure, 2 usage or I/O error.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tremor_core::catalog::{builtin_catalog, load_catalog, QuantitySource};
use tremor_core::dimensions::parse_rational;
use tremor_core::literal::parse_unit_expr;
use tremor_core::solver::{solve, symbol_dim, MonomialDisplay, MonomialProblem};
use tremor_core::thermal::ThermalOutput;
use tremor_core::{
    check_all, evaluate, Constants, DimVec, Quantity, Rational, Registry, SolveError, SystemSpec, ThermalSpec,
    ValueSet, Verdict,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SetArg {
    Paper,
    Modern,
}

impl From<SetArg> for ValueSet {
    fn from(s: SetArg) -> ValueSet {
        match s {
            SetArg::Paper => ValueSet::Paper,
            SetArg::Modern => ValueSet::Modern,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "tremor",
    version,
    about = "Order-of-magnitude action estimates for bound systems"
)]
struct Cli {
    /// Constant value set.
    #[arg(long = "set", global = true, value_enum, default_value = "paper")]
    value_set: SetArg,

    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Catalog file (default: built-in).
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,

    /// Replaces every stored pass tolerance, in decades.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog entries.
    List,
    /// Show one catalog entry.
    Show { id: String },
    /// Evaluate one catalog entry.
    Estimate { id: String },
    /// Solve for monomial exponents with a target dimension.
    Solve(SolveArgs),
    /// Thermal relations.
    #[command(subcommand)]
    Thermal(ThermalCmd),
    /// Evaluate every catalog entry.
    CheckAll,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Target dimension: a name (action, force, energy, ...) or a unit expression.
    #[arg(long)]
    target: String,
    /// Comma-separated generators; `name:unit` gives an explicit dimension.
    #[arg(long = "gen", value_delimiter = ',', required = true)]
    generators: Vec<String>,
    /// Fixed exponent, `name=p/q`. Repeatable.
    #[arg(long = "fix")]
    fixed: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum ThermalCmd {
    /// Fluctuation time h / (k_B T).
    Tau {
        #[arg(long)]
        temperature: String,
    },
    /// Equivalent temperature of N constituents with a global time.
    EquivTemp {
        #[arg(long)]
        n: f64,
        #[arg(long = "global-time")]
        global_time: String,
    },
    /// Thermal unit of action h sqrt(N).
    Action {
        #[arg(long)]
        n: f64,
    },
    /// Emittance sqrt(N) h / (m c).
    Emittance {
        #[arg(long)]
        n: f64,
        #[arg(long, default_value = "m_e")]
        mass: String,
    },
    /// Condensate velocity (k_B / h)(T / sqrt(N)) R.
    BecVelocity {
        #[arg(long)]
        temperature: String,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        radius: String,
    },
    /// Nucleon count m k_B T R^2 / h^2.
    Nucleons {
        #[arg(long, default_value = "2.7 K")]
        temperature: String,
        #[arg(long, default_value = "m_nucleon")]
        mass: String,
        #[arg(long, default_value = "R_universe")]
        radius: String,
    },
}

/// A failure carrying its exit code.
struct Fail {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Fail {
    Fail {
        code: 2,
        message: message.to_string(),
    }
}

fn failure(message: impl ToString) -> Fail {
    Fail {
        code: 1,
        message: message.to_string(),
    }
}

struct Output {
    text: String,
    code: u8,
}

fn emit(cli: &Cli, text: String, value: serde_json::Value, code: u8) -> Output {
    let text = match cli.format {
        Format::Text => text,
        Format::Json => render::pretty(&value) + "\n",
    };
    Output { text, code }
}

fn catalog(cli: &Cli, registry: &Registry) -> Result<Vec<SystemSpec>, Fail> {
    match &cli.catalog {
        Some(path) => load_catalog(path, registry).map_err(usage),
        None => builtin_catalog(registry).map_err(usage),
    }
}

fn find<'a>(cat: &'a [SystemSpec], id: &str) -> Result<&'a SystemSpec, Fail> {
    cat.iter()
        .find(|s| s.id == id)
        .ok_or_else(|| usage(format!("unknown system id `{id}`")))
}

fn quantity_arg(text: &str, consts: &Constants<'_>, what: &str) -> Result<Quantity, Fail> {
    QuantitySource::parse(text)
        .and_then(|s| s.resolve(consts))
        .map_err(|e| usage(format!("--{what}: {e}")))
}

fn target_dim(text: &str) -> Result<DimVec, Fail> {
    if let Some(d) = DimVec::named(text) {
        return Ok(d);
    }
    parse_unit_expr(text).map_err(|e| usage(format!("--target `{text}`: {e}")))
}

fn generator_dim(spec: &str, consts: &Constants<'_>) -> Result<(String, DimVec), Fail> {
    if let Some((name, unit)) = spec.split_once(':') {
        let dim = parse_unit_expr(unit).map_err(|e| usage(format!("--gen `{spec}`: {e}")))?;
        return Ok((name.trim().to_string(), dim));
    }
    let name = spec.trim();
    let dim = match consts.dim(name) {
        Ok(d) => d,
        Err(_) => {
            symbol_dim(name).ok_or_else(|| usage(format!("--gen: no dimension known for `{name}`; use name:unit")))?
        }
    };
    Ok((name.to_string(), dim))
}

fn fixed_arg(spec: &str) -> Result<(String, Rational), Fail> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| usage(format!("--fix `{spec}`: expected name=p/q")))?;
    let e = parse_rational(value).map_err(|e| usage(format!("--fix `{spec}`: {e}")))?;
    Ok((name.trim().to_string(), e))
}

fn cmd_list(cli: &Cli, registry: &Registry) -> Result<Output, Fail> {
    let cat = catalog(cli, registry)?;
    let mut text = String::new();
    for s in &cat {
        text.push_str(&format!("{:<26} {}  [{}]\n", s.id, s.description, s.citation));
    }
    let rows: Vec<_> = cat
        .iter()
        .map(|s| json!({ "id": s.id, "description": s.description, "cite": s.citation }))
        .collect();
    Ok(emit(cli, text, json!({ "systems": rows }), 0))
}

fn cmd_show(cli: &Cli, registry: &Registry, id: &str) -> Result<Output, Fail> {
    let cat = catalog(cli, registry)?;
    let spec = find(&cat, id)?;
    Ok(emit(cli, render::spec_text(spec), render::spec_json(spec), 0))
}

fn cmd_estimate(cli: &Cli, registry: &Registry, id: &str) -> Result<Output, Fail> {
    let cat = catalog(cli, registry)?;
    let spec = find(&cat, id)?;
    let report = evaluate(spec, registry, cli.value_set.into(), cli.tolerance).map_err(failure)?;
    let code = if report.verdict == Verdict::Fail { 1 } else { 0 };
    Ok(emit(
        cli,
        render::report_text(&report),
        render::report_json(&report),
        code,
    ))
}

fn cmd_check_all(cli: &Cli, registry: &Registry) -> Result<Output, Fail> {
    let cat = catalog(cli, registry)?;
    let table = check_all(&cat, registry, cli.value_set.into(), cli.tolerance);
    let code = if table.all_ok() { 0 } else { 1 };
    Ok(emit(
        cli,
        render::table_text(&table),
        render::table_json(&table, cli.tolerance),
        code,
    ))
}

fn cmd_solve(cli: &Cli, registry: &Registry, args: &SolveArgs) -> Result<Output, Fail> {
    let consts = registry.set(cli.value_set.into());
    let target = target_dim(&args.target)?;
    let generators = args
        .generators
        .iter()
        .map(|g| generator_dim(g, &consts))
        .collect::<Result<Vec<_>, _>>()?;
    let fixed = args.fixed.iter().map(|f| fixed_arg(f)).collect::<Result<Vec<_>, _>>()?;
    match solve(&MonomialProblem::new(generators, fixed, target)) {
        Ok(sol) => {
            let text = format!("{}\n", MonomialDisplay(&sol.exponents));
            Ok(emit(cli, text, render::solution_json(&sol.exponents), 0))
        }
        Err(SolveError::InvalidProblem(m)) => Err(usage(m)),
        Err(SolveError::Inconsistent { diagnosis }) => {
            let text = format!("inconsistent: {diagnosis}\n");
            Ok(emit(
                cli,
                text,
                json!({ "status": "inconsistent", "diagnosis": diagnosis }),
                1,
            ))
        }
        Err(SolveError::Underdetermined { particular, nullspace }) => {
            let mut text = String::from("underdetermined\n");
            if let Some(p) = &particular {
                text.push_str(&format!("  particular: {}\n", MonomialDisplay(p)));
            }
            for v in &nullspace {
                text.push_str(&format!("  nullspace:  {}\n", MonomialDisplay(v)));
            }
            let value = json!({
                "status": "underdetermined",
                "particular": particular.as_ref().map(|p| render::solution_json(p)["exponents"].clone()),
                "nullspace": nullspace.iter().map(|v| render::solution_json(v)["exponents"].clone()).collect::<Vec<_>>(),
            });
            Ok(emit(cli, text, value, 1))
        }
    }
}

fn cmd_thermal(cli: &Cli, registry: &Registry, cmd: &ThermalCmd) -> Result<Output, Fail> {
    let consts = registry.set(cli.value_set.into());
    let q = |text: &str, what: &str| quantity_arg(text, &consts, what);
    let mut spec = ThermalSpec::default();
    let output = match cmd {
        ThermalCmd::Tau { temperature } => {
            spec.temperature = Some(q(temperature, "temperature")?);
            ThermalOutput::TauThermal
        }
        ThermalCmd::EquivTemp { n, global_time } => {
            spec.count_n = Some(*n);
            spec.global_time = Some(q(global_time, "global-time")?);
            ThermalOutput::EquivTemperature
        }
        ThermalCmd::Action { n } => {
            spec.count_n = Some(*n);
            ThermalOutput::ThermalAction
        }
        ThermalCmd::Emittance { n, mass } => {
            spec.count_n = Some(*n);
            spec.constituent_mass = Some(q(mass, "mass")?);
            ThermalOutput::Emittance
        }
        ThermalCmd::BecVelocity { temperature, n, radius } => {
            spec.temperature = Some(q(temperature, "temperature")?);
            spec.count_n = Some(*n);
            spec.radius = Some(q(radius, "radius")?);
            ThermalOutput::BecVelocity
        }
        ThermalCmd::Nucleons {
            temperature,
            mass,
            radius,
        } => {
            spec.temperature = Some(q(temperature, "temperature")?);
            spec.constituent_mass = Some(q(mass, "mass")?);
            spec.radius = Some(q(radius, "radius")?);
            ThermalOutput::NucleonCount
        }
    };
    let value = spec.evaluate(output, &consts).map_err(failure)?;
    let text = format!("{}  {}  (log10 {:.4})\n", output, value.short(), value.log10);
    let json = json!({
        "output": output.as_str(),
        "value_set": consts.value_set().as_str(),
        "value": render::quantity_json(&value),
    });
    Ok(emit(cli, text, json, 0))
}

fn run(cli: &Cli) -> Result<Output, Fail> {
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(usage(format!("--tolerance {t}: must be a non-negative number")));
        }
    }
    let registry = Registry::builtin();
    match &cli.command {
        Command::List => cmd_list(cli, &registry),
        Command::Show { id } => cmd_show(cli, &registry, id),
        Command::Estimate { id } => cmd_estimate(cli, &registry, id),
        Command::Solve(args) => cmd_solve(cli, &registry, args),
        Command::Thermal(cmd) => cmd_thermal(cli, &registry, cmd),
        Command::CheckAll => cmd_check_all(cli, &registry),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("tremor: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
