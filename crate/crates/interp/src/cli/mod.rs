//! Command-line front end.
//!
//! Exit codes: 0 success, 1 negative finding (violated, extensible, nothing
//! found, a table row failing), 2 input error, 3 solver failure.

mod args;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use clap::Parser;
use interp_core::conic::ConicBackend;
use interp_core::pep::{build_wc_pep, PepSpec, WcVariant};
use interp_core::search::{find_counterexample, table_suite, SearchReport, Table, TableParams};
use interp_core::{
    extension_gap, grid_oracle_gap, satisfies, ConstraintFamily, DataTriple, Error, FamilyKind,
    GapOptions, GridOptions, ProblemConfig,
};
use rayon::prelude::*;
use serde_json::json;

pub use args::{Backend, Cli, Command, FamilyArgs, Format, Variants, Which};

use crate::io::DatasetFile;
use crate::region::{self, run_region};
use crate::sdp::{write_instance, Clarabel, Ipm};
use crate::sweep::{gd_bounds, pep_sweep, StepRule, SweepParams, GD_CALIBRATION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Messages go to stderr, artifacts to `--out` or stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli =
        match with_config(args).and_then(|a| Cli::try_parse_from(a).map_err(anyhow::Error::from)) {
            Ok(cli) => cli,
            Err(e) => {
                if let Some(ce) = e.downcast_ref::<clap::Error>() {
                    let _ = ce.print();
                    return if ce.use_stderr() { EXIT_INPUT } else { EXIT_OK };
                }
                eprintln!("error: {e:#}");
                return EXIT_INPUT;
            }
        };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::SolverFailure(_)
            | Error::InaccurateSolution(_)
            | Error::BackendRequired
            | Error::UnboundedWitness,
        ) => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

/// Splices `--key value` pairs from the `--config` file right after the
/// subcommand, so flags given on the command line still win.
fn with_config(mut args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let pos = args.iter().position(|a| a == "--config");
    let path = match pos {
        Some(p) => args
            .get(p + 1)
            .cloned()
            .ok_or_else(|| anyhow!("--config needs a path"))?,
        None => match args
            .iter()
            .find_map(|a| a.to_str().and_then(|s| s.strip_prefix("--config=")))
        {
            Some(p) => p.into(),
            None => return Ok(args),
        },
    };
    let text = fs::read_to_string(&path)
        .with_context(|| format!("reading config {}", path.to_string_lossy()))?;
    let mut extra: Vec<OsString> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(a, b)| (a.trim(), b.trim()))
            .ok_or_else(|| anyhow!("config line {}: expected `key = value`", k + 1))?;
        match value {
            "true" => extra.push(format!("--{key}").into()),
            "false" => {}
            v => {
                extra.push(format!("--{key}").into());
                extra.push(v.trim_matches('"').into());
            }
        }
    }
    let sub = args
        .iter()
        .position(|a| a.to_str().is_some_and(|s| Command::NAMES.contains(&s)))
        .ok_or_else(|| anyhow!("missing subcommand"))?;
    let tail = args.split_off(sub + 1);
    args.extend(extra);
    args.extend(tail);
    Ok(args)
}

fn dispatch(cli: &Cli) -> anyhow::Result<i32> {
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            bail!("--tol must be positive");
        }
    }
    match &cli.command {
        Command::Check { dataset, family } => check(cli, dataset, family),
        Command::Extend {
            dataset,
            family,
            x,
            grid,
        } => extend(cli, dataset, family, x.as_deref(), *grid),
        Command::Hunt {
            family,
            n,
            d,
            budget,
            seeds,
        } => hunt(cli, family, *n, *d, *budget, *seeds),
        Command::VerifyTables { which } => verify_tables(cli, *which),
        Command::Pep {
            n,
            rho,
            r2,
            mu,
            b,
            h,
            variant,
            backend,
            gd,
        } => {
            if *gd {
                return calibration(cli, *backend);
            }
            let rule = StepRule::parse(h)
                .ok_or_else(|| anyhow!("--h must be classical, prior or a positive number"))?;
            let params = SweepParams {
                mu: *mu,
                b: *b,
                rho: *rho,
                r2: *r2,
            };
            pep(cli, &parse_range(n)?, rule, params, *variant, *backend)
        }
        Command::Region {
            anchor,
            x,
            family_a,
            family_b,
            params,
            g_min,
            g_max,
            steps,
        } => {
            if params.family.is_some() {
                bail!("region takes --family-a and --family-b, not --family");
            }
            let [ax, af, ag] = anchor[..] else {
                bail!("--anchor expects three numbers x,f,g")
            };
            let (fa, fb) = (
                resolve_family(family_a, params, true)?,
                resolve_family(family_b, params, true)?,
            );
            unused_region_flags(params, &[fa, fb])?;
            let rows = run_region(
                &DataTriple::scalar(ax, af, ag),
                *x,
                &fa,
                &fb,
                (*g_min, *g_max),
                *steps,
                cli.tol.unwrap_or(1e-9),
            )?;
            let (ma, mb) = region::max_f(&rows);
            eprintln!(
                "{} rows; B inside A: {}; max f: A {ma}, B {mb}",
                rows.len(),
                region::contained(&rows, 1e-7)
            );
            emit(cli, &json!(rows), |w| region::write_csv(&rows, w))?;
            Ok(EXIT_OK)
        }
    }
}

fn parse_range(s: &str) -> anyhow::Result<Vec<usize>> {
    let bad = || anyhow!("--N expects `3`, `1..5` or `1,2,4`, got `{s}`");
    let ns: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        );
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|v| v.trim().parse().map_err(|_| bad()))
            .collect::<anyhow::Result<_>>()?
    };
    if ns.is_empty() || ns.contains(&0) {
        return Err(bad());
    }
    Ok(ns)
}

fn flag_params(a: &FamilyArgs) -> anyhow::Result<Vec<(String, f64)>> {
    let named = [
        ("mu", a.mu),
        ("B", a.b),
        ("L", a.l),
        ("M", a.m),
        ("alpha", a.alpha),
        ("beta", a.beta),
        ("gamma", a.gamma),
        ("p", a.p),
        ("exponent", a.exponent),
        ("f_star", a.f_star),
    ];
    let mut out: Vec<(String, f64)> = named
        .iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect();
    for e in &a.extra {
        let (k, v) = e
            .split_once('=')
            .ok_or_else(|| anyhow!("--param expects NAME=VALUE, got `{e}`"))?;
        out.push((
            k.trim().to_string(),
            v.trim().parse().with_context(|| format!("--param {e}"))?,
        ));
    }
    Ok(out)
}

/// Kind plus inline parameters from `spec`, completed by flags. With
/// `lenient`, flags the kind does not accept are skipped.
fn resolve_family(
    spec: &str,
    flags: &FamilyArgs,
    lenient: bool,
) -> anyhow::Result<ConstraintFamily> {
    let mut words = spec.split_whitespace();
    let kind_name = words.next().ok_or_else(|| anyhow!("empty family"))?;
    let kind = FamilyKind::parse(kind_name).ok_or_else(|| Error::UnknownKind(kind_name.into()))?;
    let mut params: Vec<(String, f64)> = Vec::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value in family, got `{w}`"))?;
        params.push((
            k.to_string(),
            v.parse()
                .with_context(|| format!("family parameter `{w}`"))?,
        ));
    }
    for (k, v) in flag_params(flags)? {
        let accepted = kind
            .param_names()
            .iter()
            .any(|n| n.eq_ignore_ascii_case(&k));
        if !accepted && lenient {
            continue;
        }
        if !params.iter().any(|(p, _)| p.eq_ignore_ascii_case(&k)) {
            params.push((k, v));
        }
    }
    Ok(ConstraintFamily::from_params(
        kind.name(),
        params.iter().map(|(k, v)| (k.as_str(), *v)),
    )?)
}

fn unused_region_flags(flags: &FamilyArgs, fams: &[ConstraintFamily]) -> anyhow::Result<()> {
    for (k, _) in flag_params(flags)? {
        if !fams.iter().any(|f| {
            f.kind()
                .param_names()
                .iter()
                .any(|n| n.eq_ignore_ascii_case(&k))
        }) {
            bail!("parameter `{k}` is not used by either family");
        }
    }
    Ok(())
}

fn family_for(file: &DatasetFile, flags: &FamilyArgs) -> anyhow::Result<ConstraintFamily> {
    match (&flags.family, file.family) {
        (Some(spec), _) => resolve_family(spec, flags, false),
        (None, Some(f)) if flag_params(flags)?.is_empty() => Ok(f),
        (None, Some(_)) => bail!("parameter flags need --family"),
        (None, None) => bail!("no family: pass --family or embed one in the dataset file"),
    }
}

fn tolerance(cli: &Cli) -> f64 {
    cli.tol.unwrap_or(ProblemConfig::DEFAULT_TOLERANCE)
}

/// Writes the JSON value or the CSV rendering to `--out` or stdout.
fn emit<F>(cli: &Cli, value: &serde_json::Value, csv: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut dyn Write) -> anyhow::Result<()>,
{
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    match cli.format {
        Format::Json => writeln!(sink, "{}", serde_json::to_string_pretty(value)?)?,
        Format::Csv => csv(&mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

fn check(cli: &Cli, path: &Path, flags: &FamilyArgs) -> anyhow::Result<i32> {
    let file = DatasetFile::read(path)?;
    let family = family_for(&file, flags)?;
    let s = file.dataset()?;
    let sat = satisfies(&family, &s, tolerance(cli))?;
    let w = sat.worst;
    eprintln!(
        "{}: {} (worst residual {:e} at pair ({}, {}), component {})",
        family,
        if sat.ok { "satisfied" } else { "violated" },
        w.value,
        w.i,
        w.j,
        w.component
    );
    let report = json!({
        "family": family, "satisfied": sat.ok,
        "worst": { "i": w.i, "j": w.j, "component": w.component, "value": w.value },
    });
    emit(cli, &report, |out| {
        writeln!(out, "satisfied,i,j,component,value")?;
        writeln!(
            out,
            "{},{},{},{},{}",
            sat.ok, w.i, w.j, w.component, w.value
        )?;
        Ok(())
    })?;
    Ok(if sat.ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn extend(
    cli: &Cli,
    path: &Path,
    flags: &FamilyArgs,
    x: Option<&[f64]>,
    grid: bool,
) -> anyhow::Result<i32> {
    let file = DatasetFile::read(path)?;
    let family = family_for(&file, flags)?;
    let s = file.dataset()?;
    let x: Vec<f64> = match (x, &file.probe_x) {
        (Some(x), _) => x.to_vec(),
        (None, Some(p)) => p.to_vec(),
        (None, None) => bail!("no probe point: pass --x or set probe_x in the file"),
    };
    if x.len() != s.dim() {
        bail!(
            "probe has dimension {} but the data has {}",
            x.len(),
            s.dim()
        );
    }
    let tol = tolerance(cli);
    let opts = GapOptions {
        tol,
        ..GapOptions::default()
    };
    let backend = Clarabel::default();
    let gap = extension_gap(&s, &x, &family, &opts, Some(&backend))?;
    let oracle = if grid {
        if s.dim() != 1 {
            bail!("--grid needs one-dimensional data");
        }
        Some(grid_oracle_gap(&s, x[0], &family, &GridOptions::default())?.tau_star)
    } else {
        None
    };
    let extensible = gap.tau_star <= tol;
    eprintln!(
        "tau* = {:e} via {:?}{}: {}",
        gap.tau_star,
        gap.method,
        oracle.map_or_else(String::new, |o| format!(" (grid oracle {o:e})")),
        if extensible {
            "extensible"
        } else {
            "not extensible"
        }
    );
    let report = json!({
        "family": family, "probe_x": x, "tau_star": gap.tau_star, "method": format!("{:?}", gap.method),
        "witness_f": gap.witness_f, "witness_g": gap.witness_g, "witness_hess": gap.witness_hess,
        "oracle_tau": oracle, "extensible": extensible,
    });
    emit(cli, &report, |out| {
        writeln!(out, "tau_star,method,witness_f,oracle_tau,extensible")?;
        let o = oracle.map_or_else(String::new, |v| v.to_string());
        writeln!(
            out,
            "{},{:?},{},{o},{extensible}",
            gap.tau_star, gap.method, gap.witness_f
        )?;
        Ok(())
    })?;
    Ok(if extensible { EXIT_OK } else { EXIT_NEGATIVE })
}

/// Best report over the seeds; ties go to the lowest seed.
fn hunt(
    cli: &Cli,
    flags: &FamilyArgs,
    n: usize,
    d: usize,
    budget: usize,
    seeds: u64,
) -> anyhow::Result<i32> {
    let spec = flags
        .family
        .as_deref()
        .ok_or_else(|| anyhow!("hunt needs --family"))?;
    let family = resolve_family(spec, flags, false)?;
    if seeds == 0 || budget == 0 {
        bail!("--seeds and --budget must be positive");
    }
    let config = ProblemConfig::new(family)
        .with_budget(budget)
        .with_tolerance(tolerance(cli))?;
    let backend = Clarabel::default();
    let runs: Vec<(u64, interp_core::Result<SearchReport>)> = (0..seeds)
        .into_par_iter()
        .map(|k| {
            let seed = cli.seed.wrapping_add(k);
            (
                seed,
                find_counterexample(&family, n, d, &config.with_seed(seed), Some(&backend)),
            )
        })
        .collect();
    let mut best: Option<(u64, SearchReport)> = None;
    for (seed, r) in runs {
        let report = match r {
            Ok(r) => r,
            Err(Error::BudgetExhausted(r)) => *r,
            Err(e) => return Err(e.into()),
        };
        let better = best.as_ref().is_none_or(|(_, b)| {
            report.best.is_some() && b.best.is_none()
                || report.best.is_some() == b.best.is_some() && report.best_tau > b.best_tau
        });
        if better {
            best = Some((seed, report));
        }
    }
    let (seed, report) = best.expect("at least one seed");
    let Some(c) = &report.best else {
        eprintln!(
            "no certified counterexample; best tau* = {:e} over {} iterations",
            report.best_tau, report.iterations
        );
        emit(
            cli,
            &json!({ "found": false, "best_tau": report.best_tau, "seed": seed }),
            |out| {
                writeln!(out, "found,best_tau,seed\nfalse,{},{seed}", report.best_tau)?;
                Ok(())
            },
        )?;
        return Ok(EXIT_NEGATIVE);
    };
    eprintln!(
        "counterexample with tau* = {:e} (seed {seed}, {} iterations)",
        c.tau_star, report.iterations
    );
    let file = DatasetFile::from_counterexample(c);
    emit(cli, &serde_json::to_value(&file)?, |out| {
        writeln!(out, "x,f,g")?;
        for t in c.s.iter() {
            let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
            writeln!(out, "{},{},{}", join(&t.x), t.f, join(&t.g))?;
        }
        Ok(())
    })?;
    Ok(EXIT_OK)
}

fn verify_tables(cli: &Cli, which: Which) -> anyhow::Result<i32> {
    let tables: Vec<Table> = match which {
        Which::Table1 => vec![Table::Table1],
        Which::Table3 => vec![Table::Table3],
        Which::Table4 => vec![Table::Table4],
        Which::All => Table::ALL.to_vec(),
    };
    let tol = cli.tol.unwrap_or(1e-6);
    let params = TableParams::default();
    let mut rows = Vec::new();
    let mut failed = 0;
    for t in tables {
        for o in table_suite(t, &params, tol) {
            let (ok, tau, oracle, err) = match &o.result {
                Ok(c) => (true, Some(c.tau_star), c.oracle_tau, None),
                Err(e) => (false, None, None, Some(e.to_string())),
            };
            failed += usize::from(!ok);
            eprintln!(
                "{:<28} {}",
                o.id,
                if ok {
                    "certified".to_string()
                } else {
                    format!("FAILED: {}", err.as_deref().unwrap_or(""))
                }
            );
            rows.push(json!({ "id": o.id, "certified": ok, "tau_star": tau, "oracle_tau": oracle, "error": err }));
        }
    }
    eprintln!("{} of {} rows certified", rows.len() - failed, rows.len());
    emit(cli, &json!(rows), |out| {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "certified", "tau_star", "oracle_tau", "error"])?;
        for r in &rows {
            let cell = |k: &str| match &r[k] {
                serde_json::Value::Null => String::new(),
                serde_json::Value::String(s) => s.clone(),
                v => v.to_string(),
            };
            w.write_record(["id", "certified", "tau_star", "oracle_tau", "error"].map(cell))?;
        }
        w.flush()?;
        Ok(())
    })?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_NEGATIVE })
}

fn backend_for(b: Backend) -> Box<dyn ConicBackend + Sync> {
    match b {
        Backend::Ipm => Box::new(Ipm::default()),
        Backend::Clarabel => Box::new(Clarabel::default()),
    }
}

fn pep(
    cli: &Cli,
    ns: &[usize],
    rule: StepRule,
    p: SweepParams,
    variant: Variants,
    backend: Backend,
) -> anyhow::Result<i32> {
    let variants: Vec<WcVariant> = match variant {
        Variants::Tight => vec![WcVariant::Tight],
        Variants::Classical => vec![WcVariant::Classical],
        Variants::Both => vec![WcVariant::Tight, WcVariant::Classical],
    };
    // validate everything before solving
    for &n in ns {
        PepSpec {
            n,
            h: 1.0,
            mu: p.mu,
            b: p.b,
            rho: p.rho,
            r2: p.r2,
            variant: WcVariant::Tight,
        }
        .validate()?;
    }
    let backend = backend_for(backend);
    let rows = pep_sweep(ns, rule, p, &variants, backend.as_ref())?;
    if let Some(path) = &cli.dump_sdp {
        let single = rows.len() == 1 && variants.len() == 1;
        for r in &rows {
            for &v in &variants {
                let spec = PepSpec {
                    n: r.n,
                    h: r.h,
                    mu: p.mu,
                    b: p.b,
                    rho: p.rho,
                    r2: p.r2,
                    variant: v,
                };
                let target = if single {
                    path.clone()
                } else {
                    let stem = path
                        .file_stem()
                        .map_or_else(|| "sdp".into(), |s| s.to_string_lossy().into_owned());
                    let ext = path
                        .extension()
                        .map_or_else(String::new, |e| format!(".{}", e.to_string_lossy()));
                    path.with_file_name(format!(
                        "{stem}_N{}_{}{ext}",
                        r.n,
                        format!("{v:?}").to_lowercase()
                    ))
                };
                let f = File::create(&target)
                    .with_context(|| format!("creating {}", target.display()))?;
                write_instance(&build_wc_pep(&spec), io::BufWriter::new(f))?;
            }
        }
    }
    for r in &rows {
        let show = |v: Option<f64>| v.map_or_else(|| "-".into(), |v| format!("{v:.6}"));
        eprintln!(
            "N={} h={:.6} tight={} classical={} baselines {:.6} / {:.6}",
            r.n,
            r.h,
            show(r.tight),
            show(r.classical),
            r.baseline_classical,
            r.baseline_prior
        );
    }
    emit(cli, &json!(rows), |w| crate::sweep::write_csv(&rows, w))?;
    Ok(EXIT_OK)
}

fn calibration(cli: &Cli, backend: Backend) -> anyhow::Result<i32> {
    let c = GD_CALIBRATION;
    let (tight, weak) = gd_bounds(c, backend_for(backend).as_ref())?;
    eprintln!(
        "gradient descent N={} alpha={} L={} R2={}: tight {tight:.6}, weak {weak:.6}",
        c.n, c.alpha, c.l, c.r2
    );
    let v =
        json!({ "N": c.n, "alpha": c.alpha, "L": c.l, "R2": c.r2, "tight": tight, "weak": weak });
    emit(cli, &v, |out| {
        writeln!(
            out,
            "N,alpha,L,R2,tight,weak\n{},{},{},{},{tight},{weak}",
            c.n, c.alpha, c.l, c.r2
        )?;
        Ok(())
    })?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_errors_map_to_three() {
        let code = |e: Error| exit_code(&anyhow::Error::from(e));
        assert_eq!(code(Error::SolverFailure("stalled".into())), EXIT_SOLVER);
        assert_eq!(code(Error::UnboundedWitness), EXIT_SOLVER);
        assert_eq!(code(Error::BackendRequired), EXIT_SOLVER);
        assert_eq!(code(Error::EmptyDataset), EXIT_INPUT);
        assert_eq!(exit_code(&anyhow!("bad flag")), EXIT_INPUT);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_range("2,5").unwrap(), vec![2, 5]);
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn family_flags_complete_the_kind() {
        let flags = FamilyArgs {
            mu: Some(1.0),
            b: Some(2.0),
            ..FamilyArgs::default()
        };
        assert_eq!(
            resolve_family("wc-tight", &flags, false).unwrap(),
            ConstraintFamily::WeaklyConvexBoundedTight { mu: 1.0, b: 2.0 }
        );
        // inline values take precedence over flags
        assert_eq!(
            resolve_family("wc mu=3", &flags, false).unwrap(),
            ConstraintFamily::WeaklyConvexBounded { mu: 3.0, b: 2.0 }
        );
        assert!(resolve_family("convex", &flags, false).is_err());
        assert_eq!(
            resolve_family("convex", &flags, true).unwrap(),
            ConstraintFamily::Convex
        );
    }

    #[test]
    fn config_is_spliced_after_the_subcommand() {
        let dir = std::env::temp_dir().join(format!("interp-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("run.conf");
        fs::write(&cfg, "# defaults\nrho = 3\ngd = false\n").unwrap();
        let args: Vec<OsString> = [
            "interp",
            "--config",
            cfg.to_str().unwrap(),
            "pep",
            "--rho",
            "4",
        ]
        .iter()
        .map(Into::into)
        .collect();
        let spliced = with_config(args).unwrap();
        let cli = Cli::try_parse_from(&spliced).unwrap();
        match cli.command {
            Command::Pep { rho, gd, .. } => assert_eq!((rho, gd), (4.0, false)),
            _ => panic!("wrong command"),
        }
        fs::remove_dir_all(dir).unwrap();
    }
}
