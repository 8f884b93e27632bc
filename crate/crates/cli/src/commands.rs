use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use sendov_core::constructor::{self, newton_solve, NewtonOptions};
use sendov_core::derivcheck::{derivative_check, Fault};
use sendov_core::probe::{classify, scan_with_spectrum, Perturbation, DQ_SLACK};
use sendov_core::reference::ReferenceSet;
use sendov_core::{certify_all, json, spectrum, CandidateParams};

use crate::{ConstructArgs, DerivArgs, ProbeArgs, Source, TableArgs, VerifyArgs};

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let text = json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn read_candidate(path: &Path) -> Result<CandidateParams> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let params: CandidateParams =
        serde_json::from_str(&text).with_context(|| format!("parsing candidate {}", path.display()))?;
    params.validate().with_context(|| format!("invalid candidate {}", path.display()))?;
    Ok(params)
}

/// Newton from the bundled 3-decimal seed of a published degree.
fn published(n: usize) -> Result<CandidateParams> {
    let set = ReferenceSet::bundled();
    let Some(row) = set.row(n) else {
        bail!("no published candidate for n = {n}");
    };
    let out = newton_solve(n, &row.seed(3)?, &NewtonOptions::default())?;
    ensure!(out.converged, "n = {n}: Newton did not converge from the bundled seed");
    Ok(CandidateParams::from_vector(n, &out.x)?)
}

fn load(source: &Source) -> Result<CandidateParams> {
    match (&source.input, source.n) {
        (Some(path), _) => read_candidate(path),
        (None, Some(n)) => published(n),
        (None, None) => bail!("give a candidate with --in or a published degree with --n"),
    }
}

pub fn construct(args: ConstructArgs) -> Result<bool> {
    let n = args.n;
    let seeds: Vec<Vec<f64>> = if args.discover {
        constructor::discovery_seeds(n)
    } else if let Some(path) = &args.input {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing seeds {}", path.display()))?
    } else {
        let set = ReferenceSet::bundled();
        let Some(row) = set.row(n) else {
            bail!("no bundled seed for n = {n}; pass --in or --discover");
        };
        vec![row.seed(3)?]
    };
    let want = constructor::unknowns(n).len();
    if let Some((k, s)) = seeds.iter().enumerate().find(|(_, s)| s.len() != want) {
        bail!("seed {k} has {} entries, n = {n} needs {want}", s.len());
    }

    let result = constructor::construct(n, &seeds, &NewtonOptions::default())?;
    let mut log = fs::File::create(&args.report).with_context(|| format!("creating {}", args.report.display()))?;
    for entry in &result.log {
        writeln!(log, "{}", json::to_string_line(entry)?)?;
    }

    #[derive(Serialize)]
    struct Found<'a> {
        candidate: &'a CandidateParams,
        report: &'a sendov_core::PropertyReport,
    }
    let found: Vec<Found> = result
        .candidates
        .iter()
        .map(|(candidate, report)| Found { candidate, report })
        .collect();
    write_json(&args.out, &found)?;

    let converged = result.log.iter().filter(|l| l.converged).count();
    println!(
        "n = {n}: {} seeds, {converged} converged, {} certified",
        seeds.len(),
        found.len()
    );
    for (p, _) in &result.candidates {
        println!(
            "  beta {:.10}  a {:.10}  b {:.10}  c {:.10}",
            p.beta, p.a, p.b, p.c
        );
    }
    Ok(!found.is_empty())
}

pub fn verify(args: VerifyArgs) -> Result<bool> {
    let params = read_candidate(&args.input)?;
    let report = certify_all(&params)?;
    write_json(&args.out, &report)?;
    println!("n = {}  beta = {}", params.n, params.beta);
    for p in &report.properties {
        let margin = p.margin.iter().copied().fold(f64::INFINITY, f64::min);
        println!(
            "  {}  {}  margin {:>10.3e}  {}",
            p.id,
            if p.pass { "pass" } else { "FAIL" },
            margin,
            p.detail
        );
    }
    println!("overall: {}", if report.overall { "pass" } else { "FAIL" });
    Ok(report.overall)
}

#[derive(Serialize)]
struct TableRow {
    n: usize,
    candidate: Option<CandidateParams>,
    r: Option<f64>,
    #[serde(rename = "dP")]
    d_p: Option<f64>,
    overall: bool,
    max_deviation: Option<f64>,
    matches: bool,
    note: Option<String>,
}

pub fn table(args: TableArgs) -> Result<bool> {
    ensure!(args.tolerance > 0.0, "--tolerance must be positive");
    let set = match &args.seeds {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ReferenceSet::parse(&text).with_context(|| format!("invalid reference file {}", path.display()))?
        }
        None => ReferenceSet::bundled(),
    };

    println!(
        "{:>3}  {:>13}  {:>13}  {:>13}  {:>13}  {:>12}  {:>12}  {}",
        "n", "beta", "a", "b", "c", "r", "d(P)", "pass"
    );
    let mut rows = Vec::new();
    for row in &set.rows {
        let mut out = TableRow {
            n: row.n,
            candidate: None,
            r: None,
            d_p: None,
            overall: false,
            max_deviation: None,
            matches: false,
            note: None,
        };
        let solved = row
            .seed(3)
            .and_then(|seed| newton_solve(row.n, &seed, &NewtonOptions::default()))
            .and_then(|o| {
                if o.converged {
                    CandidateParams::from_vector(row.n, &o.x).map(Some)
                } else {
                    Ok(None)
                }
            });
        match solved {
            Ok(Some(params)) => {
                let dev = params
                    .to_vector()
                    .iter()
                    .zip(row.scalars())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                out.max_deviation = Some(dev);
                out.matches = dev <= args.tolerance;
                match certify_all(&params) {
                    Ok(report) => {
                        out.overall = report.overall;
                        out.r = Some(report.spectrum.r);
                        out.d_p = Some(report.spectrum.d_p);
                    }
                    Err(e) => out.note = Some(e.to_string()),
                }
                println!(
                    "{:>3}  {:>13.10}  {:>13.10}  {:>13.10}  {:>13.10}  {:>12.10}  {:>12.10}  {}",
                    row.n,
                    params.beta,
                    params.a,
                    params.b,
                    params.c,
                    out.r.unwrap_or(f64::NAN),
                    out.d_p.unwrap_or(f64::NAN),
                    if out.overall && out.matches { "yes" } else { "NO" }
                );
                out.candidate = Some(params);
            }
            Ok(None) => {
                out.note = Some("Newton did not converge".into());
                println!("{:>3}  did not converge", row.n);
            }
            Err(e) => {
                out.note = Some(e.to_string());
                println!("{:>3}  error: {e}", row.n);
            }
        }
        rows.push(out);
    }
    write_json(&args.out, &rows)?;

    if let Some(bad) = rows.iter().find(|r| !(r.overall && r.matches)) {
        let why = match (&bad.note, bad.matches) {
            (Some(note), _) => note.clone(),
            (None, false) => format!(
                "deviation {:.3e} exceeds tolerance {:.3e}",
                bad.max_deviation.unwrap_or(f64::NAN),
                args.tolerance
            ),
            (None, true) => "certification failed".into(),
        };
        eprintln!("first failing row: n = {} ({why})", bad.n);
        return Ok(false);
    }
    Ok(true)
}

pub fn probe(args: ProbeArgs) -> Result<bool> {
    ensure!(args.scale.is_finite() && args.scale >= 0.0, "--scale must be a finite non-negative number");
    ensure!(args.samples > 0, "--samples must be positive");
    let params = load(&args.source)?;
    let base = spectrum(&params)?;
    let stats = scan_with_spectrum(&params, &base, args.samples, args.scale, args.rng_seed);
    let witness = classify(&params, &base, &Perturbation::witness(&params))?;

    #[derive(Serialize)]
    struct ProbeOutput<'a> {
        n: usize,
        #[serde(flatten)]
        stats: &'a sendov_core::probe::ScanStats,
        witness_is_improvement: bool,
    }
    write_json(
        &args.out,
        &ProbeOutput {
            n: params.n,
            stats: &stats,
            witness_is_improvement: witness.is_improvement,
        },
    )?;

    println!("n = {}  samples {}  scale {:e}  seed {}", params.n, stats.count, stats.scale, stats.rng_seed);
    println!("  admissible     {}", stats.admissible);
    println!("  improvements   {}", stats.improvements);
    println!("  solver errors  {}", stats.solver_failures);
    match stats.max_d_q {
        Some(m) => println!("  max d(Q)       {m:.12}  (d(P) {:.12}, margin {:.3e})", stats.d_p, stats.d_p - m),
        None => println!("  max d(Q)       none admissible  (d(P) {:.12})", stats.d_p),
    }
    println!("  witness improvement: {}", witness.is_improvement);
    println!("  evidence is statistical, not a proof");

    let bounded = stats.max_d_q.is_none_or(|m| m <= stats.d_p + DQ_SLACK);
    Ok(stats.improvements == 0 && bounded && witness.is_improvement)
}

pub fn derivcheck(args: DerivArgs) -> Result<bool> {
    let params = load(&args.source)?;
    let fault = args.inject_fault.then_some(Fault::FlipBetaSign);
    let report = derivative_check(&params, fault)?;
    write_json(&args.out, &report)?;
    println!("n = {}  {} unit-circle roots", report.n, report.roots_checked);
    for k in &report.kinds {
        println!(
            "  {:<18} worst {:>10.3e}  tolerance {:>8.1e}  {}",
            k.kind,
            k.worst,
            k.tolerance,
            if k.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(report.pass)
}
