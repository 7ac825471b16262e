use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::{json, Value};

use pcmap::chaos::{
    bifurcation_point, bifurcation_sweep, lyapunov, lyapunov_sweep, run_with_threads, BRule,
};
use pcmap::orbits::{entry_time, orbit, preimage_step, simplex_orbit, simplex_piecewise_orbit};
use pcmap::periodic::{
    find_cycles, fixed_points, interleaved_regime, odd_period_scan, partition_sets,
    transition_check, two_cycle_closed_form, CycleRecord, Interval,
};
use pcmap::verify::{self, Suite, SuiteReport, VerifyConfig};
use pcmap::{InvariantInterval, MapParams, OrbitPolicy, SimplexState};

use crate::args::*;
use crate::output::{write_json_doc, Cell, Table};
use crate::CliError;

type P = MapParams<f64>;

/// A command's result before it is written out.
#[derive(Debug, Clone)]
pub enum Rendered {
    /// Tabular; CSV by default.
    Table(Table),
    /// Structured; JSON by default, `table` is the CSV view.
    Doc { data: Value, table: Table },
    /// Verification reports; text by default.
    Reports(Vec<SuiteReport>),
}

impl Rendered {
    pub fn write(&self, format: Option<Format>, out: &mut dyn Write) -> Result<(), CliError> {
        match (self, format) {
            (Rendered::Table(t), None | Some(Format::Csv)) => t.write_csv(out),
            (Rendered::Table(t), Some(Format::Json)) => t.write_json(out),
            (Rendered::Doc { table, .. }, Some(Format::Csv)) => table.write_csv(out),
            (Rendered::Doc { data, table }, _) => {
                write_json_doc(out, &table.command, &table.config, data)
            }
            (Rendered::Reports(r), Some(Format::Json)) => {
                serde_json::to_writer_pretty(&mut *out, r)?;
                writeln!(out)?;
                Ok(())
            }
            (Rendered::Reports(r), _) => {
                for report in r {
                    write!(out, "{report}")?;
                }
                Ok(())
            }
        }
    }

    /// Whether every verification suite passed; always true for other output.
    pub fn passed(&self) -> bool {
        match self {
            Rendered::Reports(r) => r.iter().all(|s| s.passed),
            _ => true,
        }
    }
}

/// Runs the command on a pool of `cli.global.threads` workers.
pub fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    run_with_threads(cli.global.threads, || dispatch(cli))
}

/// Executes, writes the output and maps the outcome to an exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|rendered| {
        match &cli.global.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                rendered.write(cli.global.format, &mut w)?;
                w.flush()?;
            }
            None => {
                let stdout = io::stdout();
                let mut w = BufWriter::new(stdout.lock());
                rendered.write(cli.global.format, &mut w)?;
                w.flush()?;
            }
        }
        if rendered.passed() {
            Ok(())
        } else {
            Err(CliError::Failed("one or more suites failed".into()))
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("pcmap: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Rendered, CliError> {
    let config = serde_json::to_value(cli)?;
    let name = cli.command.name();
    match &cli.command {
        Command::Orbit(args) => cmd_orbit(name, config, args),
        Command::EntryTime(args) => cmd_entry_time(name, config, args),
        Command::Preimages(args) => cmd_preimages(name, config, args),
        Command::Simplex(args) => cmd_simplex(name, config, args),
        Command::InvariantSet(args) => cmd_invariant_set(name, config, args),
        Command::FixedPoints(args) => cmd_fixed_points(name, config, args),
        Command::TwoCycle(args) => {
            let p = params(args)?;
            cycles_doc(
                name,
                config,
                two_cycle_closed_form(&p)?.into_iter().collect(),
            )
        }
        Command::Cycles(args) => {
            let p = params(&args.params)?;
            cycles_doc(
                name,
                config,
                find_cycles(&p, args.max_period, args.grid)?.cycles,
            )
        }
        Command::OddPeriods(args) => {
            let p = params(&args.params)?;
            cycles_doc(
                name,
                config,
                odd_period_scan(&p, args.max_odd, args.grid)?.cycles,
            )
        }
        Command::Lyapunov(args) => cmd_lyapunov(name, config, args),
        Command::Bifurcation(args) => cmd_bifurcation(name, config, args),
        Command::Bands(args) => cmd_bands(name, config, args),
        Command::Verify(args) => {
            let suite: Suite = args.suite.parse()?;
            let cfg = VerifyConfig {
                seed: cli.global.seed,
            };
            Ok(Rendered::Reports(verify::run(suite, &cfg)))
        }
    }
}

fn params(args: &ParamArgs) -> Result<P, CliError> {
    Ok(MapParams::new(args.a, args.b)?)
}

fn cmd_orbit(name: &str, config: Value, args: &OrbitArgs) -> Result<Rendered, CliError> {
    let p = params(&args.params)?;
    let policy = OrbitPolicy {
        stop_on_entry: args.stop_on_entry,
        stop_on_fixed_point: args.stop_on_fixed_point,
    };
    let rec = orbit(&p, args.x0, args.n, policy)?;
    let mut t = Table::new(name, config, &["n", "x"]);
    for (k, x) in rec.iterates.into_iter().enumerate() {
        t.push(vec![k.into(), x.into()]);
    }
    Ok(Rendered::Table(t))
}

fn cmd_entry_time(name: &str, config: Value, args: &EntryTimeArgs) -> Result<Rendered, CliError> {
    let p = params(&args.params)?;
    let n = entry_time(&p, args.x0, args.cap)?;
    let mut t = Table::new(name, config, &["x0", "entry_time"]);
    let cell = match n {
        Some(n) => Cell::from(n),
        None => Cell::from("none"),
    };
    t.push(vec![args.x0.into(), cell]);
    Ok(Rendered::Table(t))
}

fn cmd_preimages(name: &str, config: Value, args: &PreimageArgs) -> Result<Rendered, CliError> {
    let mut t = Table::new(name, config, &["n", "x"]);
    let mut x = args.x0;
    t.push(vec![0usize.into(), x.into()]);
    for k in 1..=args.n {
        x = preimage_step(args.b, x)?;
        t.push(vec![k.into(), x.into()]);
    }
    Ok(Rendered::Table(t))
}

fn cmd_simplex(name: &str, config: Value, args: &SimplexArgs) -> Result<Rendered, CliError> {
    let z0 = SimplexState::from_x(args.x0)?;
    let states = match args.b {
        Some(b) => simplex_piecewise_orbit(&MapParams::new(args.a, b)?, z0, args.n)?,
        None => simplex_orbit(args.a, z0, args.n)?,
    };
    let mut t = Table::new(name, config, &["n", "x", "y"]);
    for (k, z) in states.into_iter().enumerate() {
        t.push(vec![k.into(), z.x.into(), z.y.into()]);
    }
    Ok(Rendered::Table(t))
}

fn interval_row(label: &str, i: &Interval<f64>) -> Vec<Cell> {
    vec![
        label.into(),
        i.lo.into(),
        i.hi.into(),
        i.lo_closed.to_string().into(),
        i.hi_closed.to_string().into(),
    ]
}

const INTERVAL_HEADER: [&str; 5] = ["set", "lo", "hi", "lo_closed", "hi_closed"];

fn cmd_invariant_set(
    name: &str,
    config: Value,
    args: &InvariantSetArgs,
) -> Result<Rendered, CliError> {
    let p = params(&args.params)?;
    let a = InvariantInterval::of(&p)?;
    let mut t = Table::new(name, config, &INTERVAL_HEADER);
    t.push(interval_row("A", &Interval::left_open(a.lo, a.hi)));
    let mut data = json!({ "interval": a });
    if interleaved_regime(&p) {
        let sets = partition_sets(&p)?;
        for (label, set) in ["A1", "A2", "A3", "A4"].iter().zip(sets.all()) {
            t.push(interval_row(label, &set));
        }
        data["transitions"] = serde_json::to_value(transition_check(&p, args.samples)?)?;
    }
    Ok(Rendered::Doc { data, table: t })
}

fn cmd_fixed_points(name: &str, config: Value, args: &ParamArgs) -> Result<Rendered, CliError> {
    let set = fixed_points(&params(args)?);
    let mut t = Table::new(name, config, &INTERVAL_HEADER);
    for &x in &set.points {
        t.push(interval_row("point", &Interval::closed(x, x)));
    }
    for i in &set.intervals {
        t.push(interval_row("interval", i));
    }
    Ok(Rendered::Doc {
        data: serde_json::to_value(&set)?,
        table: t,
    })
}

fn cycles_doc(
    name: &str,
    config: Value,
    cycles: Vec<CycleRecord<f64>>,
) -> Result<Rendered, CliError> {
    let mut t = Table::new(
        name,
        config,
        &[
            "cycle",
            "period",
            "index",
            "x",
            "multiplier",
            "classification",
        ],
    );
    for (c, rec) in cycles.iter().enumerate() {
        for (i, &x) in rec.points.iter().enumerate() {
            t.push(vec![
                c.into(),
                rec.prime_period.into(),
                i.into(),
                x.into(),
                rec.multiplier.map_or(Cell::from(""), Cell::from),
                format!("{:?}", rec.classification).into(),
            ]);
        }
    }
    Ok(Rendered::Doc {
        data: serde_json::to_value(&cycles)?,
        table: t,
    })
}

/// The parameter points of a sweep, or the single point given by `--a/--b`.
enum Points {
    Single(P),
    Rule(BRule),
}

fn points(args: &SweepArgs) -> Result<Points, CliError> {
    match (&args.rule, args.a, args.b) {
        (Some(rule), _, _) => Ok(Points::Rule(rule.parse()?)),
        (None, Some(a), Some(b)) => Ok(Points::Single(MapParams::new(a, b)?)),
        _ => Err(CliError::Usage(
            "give either --rule or both --a and --b".into(),
        )),
    }
}

fn cmd_lyapunov(name: &str, config: Value, args: &LyapunovArgs) -> Result<Rendered, CliError> {
    let s = &args.sweep;
    let rows: Vec<(f64, f64, f64)> = match points(s)? {
        Points::Single(p) => {
            let est = lyapunov(&p, s.x0, s.burn, args.n)?;
            vec![(p.a(), p.b(), est.lambda)]
        }
        Points::Rule(rule) => {
            lyapunov_sweep(rule, s.a_min, s.a_max, s.steps, s.x0, s.burn, args.n)?
                .into_iter()
                .map(|r| (r.a, r.b, r.lambda))
                .collect()
        }
    };
    let mut t = Table::new(name, config, &["a", "b", "lambda"]);
    for (a, b, l) in rows {
        t.push(vec![a.into(), b.into(), l.into()]);
    }
    Ok(Rendered::Table(t))
}

fn samples(s: &SweepArgs, keep: usize) -> Result<Vec<pcmap::Sample>, CliError> {
    Ok(match points(s)? {
        Points::Single(p) => vec![bifurcation_point(&p, s.x0, s.burn, keep)?],
        Points::Rule(rule) => {
            bifurcation_sweep(rule, s.a_min, s.a_max, s.steps, s.x0, s.burn, keep)?
        }
    })
}

fn cmd_bifurcation(
    name: &str,
    config: Value,
    args: &BifurcationArgs,
) -> Result<Rendered, CliError> {
    let mut t = Table::new(name, config, &["a", "b", "x"]);
    for s in samples(&args.sweep, args.keep)? {
        for x in s.retained {
            t.push(vec![s.a.into(), s.b.into(), x.into()]);
        }
    }
    Ok(Rendered::Table(t))
}

fn cmd_bands(name: &str, config: Value, args: &BandArgs) -> Result<Rendered, CliError> {
    let mut t = Table::new(name, config, &["a", "b", "bands"]);
    for s in samples(&args.sweep, args.keep)? {
        t.push(vec![s.a.into(), s.b.into(), s.band_count(args.gap).into()]);
    }
    Ok(Rendered::Table(t))
}
