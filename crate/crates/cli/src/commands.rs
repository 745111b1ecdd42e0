//! Subcommand dispatch and the report document.

use std::fmt::Write as _;

use ruelle::certificate::{
    verify_basic_inequalities, verify_convergence, verify_correlation_decay, verify_decomposition,
    verify_perron_bounds, verify_shift_invariance, verify_spectral_gap, ConstantEntry,
};
use ruelle::transfer::{perron_data_of_lift, spectrum_of_lift, DEFAULT_TOL};
use ruelle::{
    compute_constants, empirical_average, lift_matrix, CheckReport, CheckRow, GibbsMeasure,
    LocallyConstantFn, PerronData, Which,
};
use serde::Serialize;

use crate::document::{table_rows, Problem, ProblemDocument, WordValue};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Perron,
    Spectrum,
    Certificate,
    Verify { steps: usize },
    Invariance { depth: usize },
    Correlate { u: String, v: String, steps: usize },
    Sample { length: usize, seed: u64 },
    Pressure,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Perron => "perron",
            Command::Spectrum => "spectrum",
            Command::Certificate => "certificate",
            Command::Verify { .. } => "verify",
            Command::Invariance { .. } => "invariance",
            Command::Correlate { .. } => "correlate",
            Command::Sample { .. } => "sample",
            Command::Pressure => "pressure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub level: Option<usize>,
    pub tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            level: None,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronSection {
    pub level: usize,
    pub lambda: f64,
    pub pressure: f64,
    pub second_modulus: f64,
    pub bracket: [f64; 2],
    pub residual: f64,
    pub iterations: usize,
    pub h: Vec<WordValue>,
    pub nu: Vec<WordValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSection {
    pub function: String,
    pub remainder_norms: Vec<f64>,
    pub empirical_rate: Option<f64>,
    pub rho: f64,
    pub spectral_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub n: usize,
    pub correlation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Average {
    pub name: String,
    pub empirical: f64,
    pub exact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingSection {
    pub seed: u64,
    pub length: usize,
    pub averages: Vec<Average>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub input: ProblemDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pressure: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perron: Option<PerronSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<Eigenvalue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<Vec<ConstantEntry>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub convergence: Vec<ConvergenceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlations: Option<Vec<CorrelationRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckRow>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
    pub status: String,
}

impl ReportDocument {
    fn new(command: &Command, input: &ProblemDocument) -> Self {
        ReportDocument {
            command: command.name().into(),
            input: input.clone(),
            pressure: None,
            perron: None,
            spectrum: None,
            constants: None,
            convergence: Vec::new(),
            correlations: None,
            sampling: None,
            checks: None,
            violations: Vec::new(),
            status: "pass".into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.violations.is_empty() {
            0
        } else {
            2
        }
    }

    /// Keeps every row of a check, whether it passed or not.
    fn absorb(&mut self, result: ruelle::Result<CheckReport>) -> Result<(), CliError> {
        let rows = match result {
            Ok(report) => report.rows,
            Err(ruelle::Error::BoundViolated(v)) => {
                self.violations.push(v.to_string());
                self.status = "bound_violated".into();
                v.report.rows
            }
            Err(e) => return Err(e.into()),
        };
        self.checks.get_or_insert_with(Vec::new).extend(rows);
        Ok(())
    }
}

struct Context<'a> {
    problem: &'a Problem,
    pd: PerronData,
    spectrum: Option<Vec<Eigenvalue>>,
}

fn solve<'a>(
    problem: &'a Problem,
    options: &Options,
    with_spectrum: bool,
) -> Result<Context<'a>, CliError> {
    let f = &problem.potential;
    let level = options.level.unwrap_or(f.memory().saturating_sub(1).max(1));
    let lift = lift_matrix(f, level)?;
    let pd = perron_data_of_lift(&lift, options.tol)?;
    let spectrum = if with_spectrum {
        Some(
            spectrum_of_lift(&lift)?
                .into_iter()
                .map(|z| Eigenvalue {
                    re: z.re,
                    im: z.im,
                    modulus: z.norm(),
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(Context { problem, pd, spectrum })
}

fn perron_section(pd: &PerronData) -> PerronSection {
    PerronSection {
        level: pd.level,
        lambda: pd.lambda,
        pressure: pd.pressure(),
        second_modulus: pd.second_modulus,
        bracket: [pd.bracket.0, pd.bracket.1],
        residual: pd.residual,
        iterations: pd.iterations,
        h: table_rows(&pd.h),
        nu: pd
            .words()
            .iter()
            .zip(&pd.nu)
            .map(|(w, &value)| WordValue {
                word: w.symbols().to_vec(),
                value,
            })
            .collect(),
    }
}

/// Functions driven through the per-n checks: the observables, or the
/// potential itself when the document names none.
fn test_functions(problem: &Problem) -> Vec<(String, LocallyConstantFn)> {
    if problem.observables.is_empty() {
        vec![("potential".into(), problem.potential.clone())]
    } else {
        problem.observables.clone()
    }
}

pub fn run(command: &Command, problem: &Problem, options: &Options) -> Result<ReportDocument, CliError> {
    let mut report = ReportDocument::new(command, &problem.document);
    let f = &problem.potential;
    match command {
        Command::Pressure => {
            let ctx = solve(problem, options, false)?;
            report.pressure = Some(ctx.pd.pressure());
        }
        Command::Perron => {
            let ctx = solve(problem, options, true)?;
            report.pressure = Some(ctx.pd.pressure());
            report.perron = Some(perron_section(&ctx.pd));
            report.spectrum = ctx.spectrum;
        }
        Command::Spectrum => {
            let ctx = solve(problem, options, true)?;
            report.spectrum = ctx.spectrum;
        }
        Command::Certificate => {
            let ctx = solve(problem, options, false)?;
            let c = compute_constants(f, &problem.matrix, ctx.pd.lambda)?;
            report.constants = Some(c.entries());
        }
        Command::Verify { steps } => {
            let ctx = solve(problem, options, false)?;
            verify(&mut report, &ctx, *steps)?;
        }
        Command::Invariance { depth } => {
            let ctx = solve(problem, options, false)?;
            let gm = GibbsMeasure::new(f, &ctx.pd)?;
            report.absorb(verify_shift_invariance(&gm, *depth))?;
        }
        Command::Correlate { u, v, steps } => {
            let ctx = solve(problem, options, false)?;
            let (u, v) = (ctx.problem.observable(u)?, ctx.problem.observable(v)?);
            let gm = GibbsMeasure::new(f, &ctx.pd)?;
            let c = compute_constants(f, &problem.matrix, ctx.pd.lambda)?;
            let rows = (0..=*steps)
                .map(|n| {
                    Ok(CorrelationRow {
                        n,
                        correlation: gm.correlation(u, v, n)?,
                    })
                })
                .collect::<ruelle::Result<Vec<_>>>()?;
            report.correlations = Some(rows);
            report.absorb(verify_correlation_decay(&gm, &c, u, v, *steps))?;
        }
        Command::Sample { length, seed } => {
            let ctx = solve(problem, options, false)?;
            let gm = GibbsMeasure::new(f, &ctx.pd)?;
            let orbit = gm.sample_orbit(*length, *seed)?;
            let mut named: Vec<(String, LocallyConstantFn)> = (1..=problem.matrix.q())
                .map(|s| {
                    let w = ruelle::Word::new(vec![s]);
                    let g = LocallyConstantFn::indicator(problem.matrix.clone(), f.theta(), &w)?;
                    Ok((format!("symbol {s}"), g))
                })
                .collect::<ruelle::Result<_>>()?;
            named.push(("potential".into(), f.clone()));
            named.extend(problem.observables.iter().cloned());
            let averages = named
                .iter()
                .map(|(name, g)| {
                    Ok(Average {
                        name: name.clone(),
                        empirical: empirical_average(&orbit, g)?,
                        exact: gm.integrate(g, Which::NuHat)?,
                    })
                })
                .collect::<ruelle::Result<Vec<_>>>()?;
            report.sampling = Some(SamplingSection {
                seed: *seed,
                length: *length,
                averages,
            });
        }
    }
    Ok(report)
}

fn verify(report: &mut ReportDocument, ctx: &Context<'_>, steps: usize) -> Result<(), CliError> {
    let problem = ctx.problem;
    let f = &problem.potential;
    let pd = &ctx.pd;
    let c = compute_constants(f, &problem.matrix, pd.lambda)?;
    let gm = GibbsMeasure::new(f, pd)?;
    report.constants = Some(c.entries());
    report.perron = Some(perron_section(pd));

    let one = LocallyConstantFn::constant(problem.matrix.clone(), f.theta(), 1.0)?;
    report.absorb(verify_perron_bounds(pd, &c, f, std::slice::from_ref(&pd.h)))?;
    report.absorb(verify_spectral_gap(pd, &c))?;
    let functions = test_functions(problem);
    for (name, g) in &functions {
        report.absorb(verify_basic_inequalities(f, g, pd, &c, steps))?;
        match verify_convergence(f, g, pd, &c, steps) {
            Ok(conv) => {
                report.convergence.push(ConvergenceSection {
                    function: name.clone(),
                    remainder_norms: conv.remainder_norms,
                    empirical_rate: conv.empirical_rate,
                    rho: conv.rho,
                    spectral_ratio: conv.spectral_ratio,
                });
                report.absorb(Ok(conv.checks))?;
            }
            Err(e) => report.absorb(Err(e))?,
        }
    }
    for member in [&one, &pd.h] {
        report.absorb(verify_decomposition(f, member, pd, &c))?;
    }
    report.absorb(verify_shift_invariance(&gm, 4))?;
    let (_, g) = &functions[0];
    report.absorb(verify_correlation_decay(&gm, &c, g, g, steps))?;
    Ok(())
}

pub fn render_json(report: &ReportDocument) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
    out.push('\n');
    out
}

pub fn render_text(report: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", report.command);
    if let Some(p) = report.pressure {
        let _ = writeln!(out, "pressure: {p}");
    }
    if let Some(perron) = &report.perron {
        let _ = writeln!(out, "level: {}", perron.level);
        let _ = writeln!(out, "lambda: {}", perron.lambda);
        let _ = writeln!(out, "second modulus: {}", perron.second_modulus);
        let _ = writeln!(out, "bracket: [{}, {}]", perron.bracket[0], perron.bracket[1]);
        let _ = writeln!(out, "h:");
        for row in &perron.h {
            let _ = writeln!(out, "  {:?} {}", row.word, row.value);
        }
        let _ = writeln!(out, "nu:");
        for row in &perron.nu {
            let _ = writeln!(out, "  {:?} {}", row.word, row.value);
        }
    }
    if let Some(spectrum) = &report.spectrum {
        let _ = writeln!(out, "spectrum:");
        for z in spectrum {
            let _ = writeln!(out, "  {} {:+}i  |z| = {}", z.re, z.im, z.modulus);
        }
    }
    if let Some(constants) = &report.constants {
        let _ = writeln!(out, "constants:");
        for c in constants {
            let _ = writeln!(out, "  {} = {}  [{}]", c.name, c.value, c.definition);
        }
    }
    for conv in &report.convergence {
        let rate = conv
            .empirical_rate
            .map_or_else(|| "n/a".to_string(), |r| r.to_string());
        let _ = writeln!(
            out,
            "decay of {}: empirical rate {rate}, second_modulus/lambda {}, rho {}",
            conv.function, conv.spectral_ratio, conv.rho
        );
    }
    if let Some(rows) = &report.correlations {
        let _ = writeln!(out, "correlations:");
        for r in rows {
            let _ = writeln!(out, "  n = {}: {}", r.n, r.correlation);
        }
    }
    if let Some(s) = &report.sampling {
        let _ = writeln!(out, "sampling: seed {}, length {}", s.seed, s.length);
        for a in &s.averages {
            let _ = writeln!(out, "  {}: empirical {}, exact {}", a.name, a.empirical, a.exact);
        }
    }
    if let Some(checks) = &report.checks {
        let passed = checks.iter().filter(|r| r.pass).count();
        let _ = writeln!(out, "checks: {passed}/{} pass", checks.len());
        for r in checks.iter().filter(|r| !r.pass) {
            let n = r.n.map_or_else(String::new, |n| format!(" n={n}"));
            let _ = writeln!(
                out,
                "  FAIL {}{n}: bound {} actual {} margin {}",
                r.bound_id, r.bound_value, r.actual_value, r.margin
            );
        }
    }
    for v in &report.violations {
        let _ = writeln!(out, "violation: {v}");
    }
    let _ = writeln!(out, "status: {}", report.status);
    out
}
