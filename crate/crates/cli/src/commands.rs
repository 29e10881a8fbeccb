use std::io::Write;

use fenton_core::schema::SCHEMA_VERSION;
use fenton_core::solvers::{
    brute_force, solve_all, BruteReport, SolveAll, TraceRecord, BRUTE_BUDGET, BRUTE_MAX_N,
};
use fenton_core::verify::{named, CheckContext};
use fenton_core::{
    CheckRegistry, CheckReport, Error, Kernel, KernelRegistry, NodeSystem, Problem,
    ProblemDescriptor, SolveOptions, SolveReport, SolveStatus,
};
use serde::{Deserialize, Serialize};

use crate::config::{Command, Format, RunConfig};
use crate::error::CliError;
use crate::sweep;

/// Largest landscape the oracle will write as CSV.
const LANDSCAPE_MAX_ROWS: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub h: Option<f64>,
    pub checks: Vec<String>,
    pub all: bool,
    pub trials: Option<usize>,
    pub usc_regularize: bool,
}

/// Output of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub schema: u32,
    pub problem: ProblemDescriptor,
    pub usc_regularized: bool,
    pub options: SolveOptions,
    /// `converged` or `none-found`.
    pub equioscillation_status: String,
    pub minimax: SolveReport,
    pub maximin: SolveReport,
    pub equioscillation: SolveReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOutput {
    pub schema: u32,
    pub problem: ProblemDescriptor,
    pub usc_regularized: bool,
    #[serde(flatten)]
    pub report: BruteReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub schema: u32,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

/// Where and how a command writes its result.
pub struct Sink {
    pub path: Option<std::path::PathBuf>,
    pub format: Format,
}

impl Sink {
    fn open(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.path {
            Some(p) => Box::new(std::fs::File::create(p).map_err(|e| CliError::Io(p.clone(), e))?),
            None => Box::new(std::io::stdout().lock()),
        })
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<(), CliError> {
        let mut w = self.open()?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w).map_err(|e| CliError::Output(e.to_string()))?;
        Ok(())
    }

    fn csv<I: IntoIterator<Item = Vec<String>>>(
        &self,
        header: Vec<String>,
        rows: I,
    ) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(self.open()?);
        w.write_record(&header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush().map_err(|e| CliError::Output(e.to_string()))?;
        Ok(())
    }
}

fn problem(c: &RunConfig, o: &Overrides) -> Result<(ProblemDescriptor, Problem), CliError> {
    let desc = c.problem()?.clone();
    let p = desc.build(&KernelRegistry::builtin())?;
    let p = if o.usc_regularize {
        p.usc_regularized()?
    } else {
        p
    };
    Ok((desc, p))
}

fn options(c: &RunConfig, o: &Overrides) -> Result<SolveOptions, CliError> {
    let mut opts = c.options.clone();
    if let Some(s) = o.seed {
        opts.seed = s;
    }
    if let Some(h) = o.h {
        opts.oracle_h = h;
    }
    opts.validate()?;
    Ok(opts)
}

fn trace_rows(trace: &[TraceRecord]) -> (Vec<String>, Vec<Vec<String>>) {
    let n = trace.first().map_or(0, |r| r.x.len());
    let mut header: Vec<String> = ["start", "eta", "iteration", "residual", "value"]
        .map(String::from)
        .to_vec();
    header.extend((1..=n).map(|i| format!("x{i}")));
    let rows = trace
        .iter()
        .map(|r| {
            let mut rec = vec![
                r.start.to_string(),
                r.eta.to_string(),
                r.iteration.to_string(),
                r.residual.to_string(),
                r.value.to_string(),
            ];
            rec.extend(r.x.iter().map(f64::to_string));
            rec
        })
        .collect();
    (header, rows)
}

pub fn run_solve(c: &RunConfig, o: &Overrides, sink: &Sink) -> Result<u8, CliError> {
    let (desc, p) = problem(c, o)?;
    let opts = options(c, o)?;
    let r = match solve_all(&p, &opts) {
        Ok(r) => r,
        Err(e @ Error::Infeasible { .. }) => {
            eprintln!("solve: {e}");
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let SolveAll {
        equioscillation,
        minimax,
        maximin,
    } = r;
    let converged =
        minimax.status == SolveStatus::Converged && maximin.status == SolveStatus::Converged;
    match sink.format {
        Format::Json => sink.json(&SolveOutput {
            schema: SCHEMA_VERSION,
            problem: desc,
            usc_regularized: o.usc_regularize,
            options: opts,
            equioscillation_status: if equioscillation.status == SolveStatus::Converged {
                "converged".into()
            } else {
                "none-found".into()
            },
            minimax,
            maximin,
            equioscillation,
        })?,
        Format::Csv => {
            let (header, rows) = trace_rows(&equioscillation.trace);
            sink.csv(header, rows)?;
        }
    }
    Ok(if converged { 0 } else { 1 })
}

/// Every nondecreasing tuple on `{0, h, ..., 1}`.
fn grid_tuples(n: usize, h: f64) -> Vec<Vec<f64>> {
    let steps = (1.0 / h).floor() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|k| k as f64 * h).collect();
    if grid.last() != Some(&1.0) {
        grid.push(1.0);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        out.push(idx.iter().map(|&i| grid[i]).collect());
        // next nondecreasing index tuple
        let Some(k) = (0..n).rev().find(|&k| idx[k] + 1 < grid.len()) else {
            return out;
        };
        let v = idx[k] + 1;
        idx[k..].iter_mut().for_each(|i| *i = v);
    }
}

fn multichoose(m: usize, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (m + i) as f64 / (i + 1) as f64)
}

pub fn run_oracle(c: &RunConfig, o: &Overrides, sink: &Sink) -> Result<u8, CliError> {
    let (desc, p) = problem(c, o)?;
    let opts = options(c, o)?;
    if p.n() > BRUTE_MAX_N {
        return Err(CliError::Config(format!(
            "oracle supports n <= {BRUTE_MAX_N}, got n = {}",
            p.n()
        )));
    }
    let h = opts.oracle_h;
    match sink.format {
        Format::Json => {
            let report = brute_force(&p, h)?;
            sink.json(&OracleOutput {
                schema: SCHEMA_VERSION,
                problem: desc,
                usc_regularized: o.usc_regularize,
                report,
            })?;
        }
        Format::Csv => {
            let points = (1.0 / h).floor() as usize + 2;
            if multichoose(points, p.n()) > LANDSCAPE_MAX_ROWS.min(BRUTE_BUDGET) {
                return Err(CliError::Config(format!(
                    "landscape at h = {h} is too large to write"
                )));
            }
            let mut header: Vec<String> = (1..=p.n()).map(|i| format!("x{i}")).collect();
            header.extend(["m_upper", "m_lower"].map(String::from));
            let mut rows = Vec::new();
            for t in grid_tuples(p.n(), h) {
                let m = p.interval_maxima(&NodeSystem::new(t.clone())?)?;
                let mut rec: Vec<String> = t.iter().map(f64::to_string).collect();
                rec.push(m.upper().to_string());
                rec.push(m.lower().to_string());
                rows.push(rec);
            }
            sink.csv(header, rows)?;
        }
    }
    Ok(0)
}

fn check_ids(
    c: &RunConfig,
    o: &Overrides,
    registry: &CheckRegistry,
) -> Result<Vec<String>, CliError> {
    let ids: Vec<String> = if o.all {
        registry.ids().map(String::from).collect()
    } else {
        let mut ids = c.checks.clone();
        for id in &o.checks {
            if !ids.contains(id) {
                ids.push(id.clone());
            }
        }
        ids
    };
    if ids.is_empty() {
        return Err(CliError::Config(
            "no checks selected; pass --check ID or --all".into(),
        ));
    }
    for id in &ids {
        registry.get(id)?;
    }
    Ok(ids)
}

fn kernels_of(p: &Problem) -> Vec<(String, Kernel)> {
    let mut out: Vec<(String, Kernel)> = Vec::new();
    for j in 0..p.n() {
        let k = p.kernel(j);
        let name = k.family().to_string();
        if !out.iter().any(|(n, _)| *n == name) {
            out.push((name, k.clone()));
        }
    }
    out
}

pub fn run_verify(c: &RunConfig, o: &Overrides, sink: &Sink) -> Result<u8, CliError> {
    let registry = CheckRegistry::builtin();
    let ids = check_ids(c, o, &registry)?;
    let opts = options(c, o)?;
    let mut ctx = CheckContext::new(opts.seed);
    ctx.options = opts;
    ctx.trials = o.trials.or(c.trials);
    if c.problem.is_some() {
        let (_, p) = problem(c, o)?;
        ctx.kernels = kernels_of(&p);
        ctx = ctx.with_problems(vec![named("config", p)]);
    }
    let reports = ids
        .iter()
        .map(|id| registry.run(id, &ctx))
        .collect::<fenton_core::Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    match sink.format {
        Format::Json => sink.json(&VerifyOutput {
            schema: SCHEMA_VERSION,
            seed: ctx.seed,
            passed,
            checks: reports,
        })?,
        Format::Csv => {
            let header = ["check_id", "trials", "violations", "worst_margin", "passed"]
                .map(String::from)
                .to_vec();
            let rows = reports.iter().map(|r| {
                vec![
                    r.check_id.clone(),
                    r.trials.to_string(),
                    r.violations.to_string(),
                    r.worst_margin.to_string(),
                    r.passed.to_string(),
                ]
            });
            sink.csv(header, rows)?;
        }
    }
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct SweepJson<'a> {
    schema: u32,
    parameters: &'a [String],
    rows: &'a [sweep::Row],
}

pub fn run_sweep(c: &RunConfig, o: &Overrides, sink: &Sink) -> Result<u8, CliError> {
    let desc = c.problem()?;
    let spec = c
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("config has no \"sweep\"".into()))?;
    let s = sweep::run(desc, spec, o.usc_regularize)?;
    match sink.format {
        Format::Csv => sink.csv(s.header(), s.records())?,
        Format::Json => sink.json(&SweepJson {
            schema: SCHEMA_VERSION,
            parameters: &s.names,
            rows: &s.rows,
        })?,
    }
    Ok(0)
}

pub fn default_format(cmd: Command) -> Format {
    match cmd {
        Command::Sweep => Format::Csv,
        _ => Format::Json,
    }
}
