//! The six subcommands. Each emits one machine-readable document (JSON on
//! stdout, or a CSV file for `sweep`) and maps failures onto the exit-code
//! contract: 2 usage, 3 solver non-convergence, 4 I/O.

use crate::config::{parse_bloch, OutputFormat, RunConfig};
use crate::json::{
    self, CheckDoc, ClassicalDoc, FmaxDoc, KEntry, MaxentDoc, ProbeDoc, SCHEMA_VERSION,
};
use entroq::dual_geometry::{candidate_classes, canonicalize, multistart_maximize};
use entroq::entropy::{renyi_signed, smoothness_probe_default, Classification, GeneralOrder};
use entroq::oracle::{classical_representable, membership};
use entroq::solver::{minnorm, minnorm_nonneg2, NonnegSolve, NONNEG_TOL};
use entroq::{Error, EntropyOrder};
use std::io::Write;
use std::path::Path;
use std::process::exit;

pub enum CliError {
    /// Exit 2: bad flags, values, or config.
    Usage(String),
    /// Exit 3: the solver missed its convergence targets.
    Solver(String),
    /// Exit 4: output file could not be written.
    Io(String),
}

impl CliError {
    pub fn exit(self) -> ! {
        let (code, message) = match self {
            CliError::Usage(m) => (2, m),
            CliError::Solver(m) => (3, m),
            CliError::Io(m) => (4, m),
        };
        eprintln!("error: {message}");
        exit(code);
    }
}

fn order(k: u32) -> Result<EntropyOrder, CliError> {
    EntropyOrder::new(k).map_err(|_| CliError::Usage("k must be at least 1".into()))
}

fn require_json(config: &RunConfig, command: &str) -> Result<(), CliError> {
    if config.format == OutputFormat::Csv {
        return Err(CliError::Usage(format!(
            "csv output is not available for {command}; it applies to check and sweep"
        )));
    }
    Ok(())
}

fn print_doc<T: serde::Serialize>(doc: &T) {
    println!("{}", serde_json::to_string(doc).expect("document serialization"));
}

pub fn maxent(
    r_text: &str,
    k: u32,
    config: &RunConfig,
    timestamp: Option<String>,
) -> Result<(), CliError> {
    require_json(config, "maxent")?;
    let r = parse_bloch(r_text).map_err(CliError::Usage)?;
    let k = order(k)?;
    let report = minnorm(&r, k, &config.solver_options());
    let entropy = renyi_signed(&report.q_opt, k)
        .map_err(|err| CliError::Solver(err.to_string()))?;
    let doc = MaxentDoc {
        schema_version: SCHEMA_VERSION,
        command: "maxent",
        timestamp,
        r: r.components().to_vec(),
        k: k.k(),
        q: report.q_opt.components().to_vec(),
        entropy,
        primal_value: report.primal_value,
        dual_value: report.dual_value,
        gap: report.gap,
        converged: report.converged,
        iterations: report.iterations,
    };
    print_doc(&doc); // partial report still emitted when unconverged
    if !report.converged {
        return Err(CliError::Solver(format!(
            "norm minimization did not converge at k = {}",
            k.k()
        )));
    }
    Ok(())
}

const PREFIX_NOTE: &str = "satisfaction at k = 1 implies satisfaction at every order, so the \
                           finite prefix k = 1..k_max decides membership; higher orders are \
                           solver consistency checks";

pub fn check(
    r_text: &str,
    kmax: Option<u32>,
    config: &RunConfig,
    timestamp: Option<String>,
) -> Result<(), CliError> {
    let r = parse_bloch(r_text).map_err(CliError::Usage)?;
    let k_max = kmax.unwrap_or(config.k_max);
    if k_max == 0 {
        return Err(CliError::Usage("kmax must be at least 1".into()));
    }
    let verdict = membership(&r, k_max, &config.oracle_options())
        .map_err(|err| CliError::Solver(err.to_string()))?;

    match config.format {
        OutputFormat::Json => {
            let doc = CheckDoc {
                schema_version: SCHEMA_VERSION,
                command: "check",
                timestamp,
                r: r.components().to_vec(),
                k_max,
                per_k: verdict
                    .per_k
                    .iter()
                    .map(|v| KEntry {
                        k: v.k,
                        max_entropy: v.max_entropy,
                        satisfied: v.satisfied,
                        gap: v.gap,
                    })
                    .collect(),
                overall: verdict.overall,
                theorem_consistent: verdict.theorem_consistent,
                note: PREFIX_NOTE,
            };
            print_doc(&doc);
        }
        OutputFormat::Csv => {
            println!("k,max_entropy,satisfied,gap");
            for v in &verdict.per_k {
                println!(
                    "{},{},{},{}",
                    v.k,
                    json::format_f64(v.max_entropy),
                    v.satisfied,
                    json::format_f64(v.gap)
                );
            }
        }
    }
    Ok(())
}

pub fn classical(
    r_text: &str,
    config: &RunConfig,
    timestamp: Option<String>,
) -> Result<(), CliError> {
    require_json(config, "classical")?;
    let r = parse_bloch(r_text).map_err(CliError::Usage)?;
    let solve = minnorm_nonneg2(&r, NONNEG_TOL);
    let (feasible, value) = match &solve {
        NonnegSolve::Infeasible => (false, None),
        NonnegSolve::Optimal(report) => (true, Some(report.value)),
    };
    let doc = ClassicalDoc {
        schema_version: SCHEMA_VERSION,
        command: "classical",
        timestamp,
        r: r.components().to_vec(),
        classical: classical_representable(&r, config.tol_entropy),
        feasible,
        value,
        threshold: 0.5,
        tol: config.tol_entropy,
    };
    print_doc(&doc);
    Ok(())
}

pub fn fmax(
    k: u32,
    enumerate: bool,
    multistart: Option<u32>,
    seed: Option<u64>,
    config: &RunConfig,
    timestamp: Option<String>,
) -> Result<(), CliError> {
    require_json(config, "fmax")?;
    let k = order(k)?;
    let bound = 0.5f64.powf((f64::from(k.k()) - 1.0) / f64::from(k.k()));
    let _ = enumerate; // the default mode; kept as an explicit flag

    let doc = match multistart {
        None => {
            let classes = candidate_classes(k);
            let best = &classes[0];
            FmaxDoc {
                schema_version: SCHEMA_VERSION,
                command: "fmax",
                timestamp,
                k: k.k(),
                mode: "enumerate",
                max_f: best.f_value,
                bound,
                argmax_class: best.nonzeros,
                foc_residual: best.max_foc_residual,
                n_starts: None,
                seed: None,
            }
        }
        Some(n_starts) => {
            if n_starts == 0 {
                return Err(CliError::Usage("multistart needs at least one start".into()));
            }
            let seed = seed.unwrap_or(config.seed);
            let best = multistart_maximize(k, n_starts, seed);
            let canonical = canonicalize(&best.w);
            let argmax_class = canonical.iter().filter(|c| c.abs() > 1e-6).count();
            FmaxDoc {
                schema_version: SCHEMA_VERSION,
                command: "fmax",
                timestamp,
                k: k.k(),
                mode: "multistart",
                max_f: best.f_value,
                bound,
                argmax_class,
                foc_residual: best.foc_residual,
                n_starts: Some(n_starts),
                seed: Some(seed),
            }
        }
    };
    print_doc(&doc);
    Ok(())
}

pub fn sweep(k: u32, grid: f64, out: &Path, config: &RunConfig) -> Result<(), CliError> {
    let k = order(k)?;
    if !(grid > 0.0 && grid <= 1.0) {
        return Err(CliError::Usage("grid step must lie in (0, 1]".into()));
    }

    let oracle_options = config.oracle_options();
    let half_points = (1.0 / grid + 1e-9).floor() as i64;
    let axis: Vec<f64> = (-half_points..=half_points)
        .map(|i| i as f64 * grid)
        .collect();

    let mut rows = Vec::with_capacity(axis.len().pow(3));
    for &r1 in &axis {
        for &r2 in &axis {
            for &r3 in &axis {
                let r = entroq::BlochVector::new(r1, r2, r3);
                let verdict = membership(&r, k.k(), &oracle_options)
                    .map_err(|err| CliError::Solver(err.to_string()))?;
                let classical = classical_representable(&r, config.tol_entropy);
                rows.push(format!(
                    "{},{},{},{},{},{}",
                    json::format_f64(r1),
                    json::format_f64(r2),
                    json::format_f64(r3),
                    verdict.overall,
                    classical,
                    json::format_f64(verdict.per_k[0].max_entropy)
                ));
            }
        }
    }

    // Atomic write: temp file in the target directory, then rename.
    let dir = match out.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let io_err = |err: std::io::Error| CliError::Io(format!("{}: {err}", out.display()));
    let mut file = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    writeln!(file, "r1,r2,r3,member,classical,max_entropy_k1").map_err(io_err)?;
    for row in &rows {
        writeln!(file, "{row}").map_err(io_err)?;
    }
    file.persist(out)
        .map_err(|err| CliError::Io(format!("{}: {}", out.display(), err.error)))?;
    Ok(())
}

pub fn probe(
    alpha: f64,
    probe_order: u32,
    config: &RunConfig,
    timestamp: Option<String>,
) -> Result<(), CliError> {
    require_json(config, "probe")?;
    let alpha = GeneralOrder::new(alpha)
        .map_err(|_| CliError::Usage("alpha must be positive".into()))?;
    let report = smoothness_probe_default(alpha, probe_order).map_err(|err| match err {
        Error::InvalidOrder => {
            CliError::Usage("order must be at least 1 and alpha must not be 1".into())
        }
        other => CliError::Usage(other.to_string()),
    })?;
    let doc = ProbeDoc {
        schema_version: SCHEMA_VERSION,
        command: "probe",
        timestamp,
        alpha: report.alpha,
        order: report.order,
        steps: report.steps.clone(),
        plus: report.plus.clone(),
        minus: report.minus.clone(),
        plus_limit: report.plus_limit,
        minus_limit: report.minus_limit,
        noise_floor: report.noise_floor,
        classification: match report.classification {
            Classification::Match => "match",
            Classification::Jump => "jump",
            Classification::Diverge => "diverge",
        },
    };
    print_doc(&doc);
    Ok(())
}
