//! Subcommand execution.

use consensus_core::checks::{inverse_row_sum_deviation, run_checks, Check};
use consensus_core::digraph::{build, decompose, export_dot_labeled};
use consensus_core::limits::resolvent;
use consensus_core::matrix::max_abs_diff_vec;
use consensus_core::oracle::{DEFAULT_CLASS_CAP, DEFAULT_FOREST_CAP};
use consensus_core::projection::{analyze_with_cap, consensus_value, simulate};
use consensus_core::{
    fixtures, validate_stochastic, ConsensusAnalysis, DenseMatrix, PreequalizationMode,
    ToleranceConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::input::InputDocument;
use crate::report::{
    matrix, CheckReport, Num, ReportDocument, ResolventProbe, SystemChecks, TrajectoryReport,
    VerificationReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Simulate,
    Verify,
    ExportDot,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Flags {
    /// Overrides `conv_tol`.
    pub tolerance: Option<f64>,
    pub max_iter: Option<usize>,
    pub mode: PreequalizationMode,
    /// Adds `(I + τL)⁻¹` at this τ to the report.
    pub tau: Option<f64>,
    /// Overrides both enumeration caps.
    pub oracle_cap: Option<usize>,
}

impl Flags {
    fn class_cap(&self) -> usize {
        self.oracle_cap.unwrap_or(DEFAULT_CLASS_CAP)
    }

    fn forest_cap(&self) -> usize {
        self.oracle_cap.unwrap_or(DEFAULT_FOREST_CAP)
    }
}

/// Text to emit and the number of failed verification checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub failed_checks: usize,
}

impl Outcome {
    fn text(text: String) -> Self {
        Outcome {
            text,
            failed_checks: 0,
        }
    }
}

/// Defaults, then the document's overrides, then the flags.
pub fn effective_tolerance(doc: Option<&InputDocument>, flags: &Flags) -> Result<ToleranceConfig, CliError> {
    let mut tol = ToleranceConfig::default();
    if let Some(o) = doc.and_then(|d| d.tolerance.as_ref()) {
        tol = o.apply(tol);
    }
    if let Some(t) = flags.tolerance {
        tol.conv_tol = t;
    }
    if let Some(m) = flags.max_iter {
        tol.max_iter = m;
    }
    tol.validate()
        .map_err(|_| CliError::Validation("tolerances must be positive and finite, max_iter at least 1".into()))?;
    Ok(tol)
}

fn mode_name(mode: PreequalizationMode) -> &'static str {
    match mode {
        PreequalizationMode::Orthogonal => "orthogonal",
        PreequalizationMode::Tilde => "tilde",
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report serializes");
    let mut s = crate::report::pretty(&v);
    s.push('\n');
    s
}

fn analysis_report(
    doc: &InputDocument,
    a: &ConsensusAnalysis,
    tol: &ToleranceConfig,
    flags: &Flags,
) -> Result<ReportDocument, CliError> {
    let mut report = ReportDocument::from_analysis(a, doc.labels.as_deref());
    if let Some(tau) = flags.tau {
        let r = resolvent(&a.kirchhoff, tau, tol)?;
        report.resolvent_probe = Some(ResolventProbe {
            tau: Num(tau),
            max_deviation_from_limit: Num(r.max_abs_diff(&a.p_inf.matrix)),
            matrix: matrix(&r),
        });
    }
    Ok(report)
}

pub fn execute(cmd: Command, doc: &InputDocument, flags: &Flags) -> Result<Outcome, CliError> {
    let tol = effective_tolerance(Some(doc), flags)?;
    let p = doc.stochastic(&tol)?;
    match cmd {
        Command::ExportDot => {
            let (g, _) = build(&p, &tol);
            let d = decompose(&g);
            Ok(Outcome::text(export_dot_labeled(&g, &d, doc.labels.as_deref())))
        }
        Command::Analyze => {
            let a = analyze_with_cap(&p, &tol, flags.class_cap())?;
            Ok(Outcome::text(to_json(&analysis_report(doc, &a, &tol, flags)?)))
        }
        Command::Simulate => {
            let s0 = doc.initial_opinions.as_ref().ok_or(CliError::MissingOpinions)?;
            let a = analyze_with_cap(&p, &tol, flags.class_cap())?;
            let mut report = analysis_report(doc, &a, &tol, flags)?;
            let t = simulate(&a, s0, flags.mode, &tol)?;
            let expected = consensus_value(&a, s0)?;
            report.trajectory = Some(TrajectoryReport::new(
                &a,
                &t,
                mode_name(flags.mode),
                doc.labels.as_deref(),
                expected,
            ));
            Ok(Outcome::text(to_json(&report)))
        }
        Command::Verify => {
            let cap = flags.forest_cap();
            if p.n() > cap {
                return Err(CliError::OracleTooLarge { n: p.n(), cap });
            }
            let a = analyze_with_cap(&p, &tol, flags.class_cap())?;
            let systems = vec![
                system("input", &run_checks(&a, &tol, cap)),
                system("inverse row sums", &inverse_samples(p.n(), &tol)),
            ];
            Ok(verification(systems))
        }
    }
}

fn system(name: &str, checks: &[Check]) -> SystemChecks {
    SystemChecks {
        system: name.to_string(),
        checks: checks.iter().map(CheckReport::from).collect(),
    }
}

fn verification(systems: Vec<SystemChecks>) -> Outcome {
    let report = VerificationReport::new(systems);
    Outcome {
        failed_checks: report.failed,
        text: to_json(&report),
    }
}

/// Random `n × n` matrices with first column `1` (seeded, so runs repeat)
/// whose inverses must have row sums `(1, 0, ..., 0)`.
pub fn inverse_samples(n: usize, tol: &ToleranceConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut out = Vec::new();
    while out.len() < 20 {
        let mut m = DenseMatrix::zeros(n, n);
        for r in 0..n {
            m[(r, 0)] = 1.0;
            for c in 1..n {
                m[(r, c)] = rng.gen_range(-1.0..1.0);
            }
        }
        if let Ok(inv) = m.invert(tol) {
            let scale = inv.norm_inf().max(1.0);
            out.push(Check::new(
                "row sums of the inverse are (1, 0, ..., 0)",
                inverse_row_sum_deviation(&inv) / scale,
                tol.agreement(),
            ));
        }
    }
    out
}

/// Cross-checks plus exact reference values for the two built-in systems.
pub fn verify_builtin(flags: &Flags) -> Result<Outcome, CliError> {
    let tol = effective_tolerance(None, flags)?;
    let cap = flags.forest_cap();
    let class_cap = flags.class_cap();
    let seven_p = validate_stochastic(DenseMatrix::from_rows(&fixtures::SEVEN_AGENT_P)?, &tol)?;
    let five_p = validate_stochastic(DenseMatrix::from_rows(&fixtures::FIVE_AGENT_P)?, &tol)?;
    let seven = analyze_with_cap(&seven_p, &tol, class_cap)?;
    let five = analyze_with_cap(&five_p, &tol, class_cap)?;

    let mut seven_checks = run_checks(&seven, &tol, cap);
    let alpha: Vec<f64> = fixtures::SEVEN_AGENT_ALPHA_TIMES_110.iter().map(|x| x / 110.0).collect();
    seven_checks.push(Check::new(
        "alpha equals (26, 26, 13, 18, 27, 0, 0)/110",
        max_abs_diff_vec(&seven.alpha, &alpha),
        1e-9,
    ));
    let s = DenseMatrix::from_rows(&fixtures::SEVEN_AGENT_S_TIMES_22)?.scale(1.0 / 22.0);
    seven_checks.push(Check::new("S equals the reference integers / 22", seven.s.s.max_abs_diff(&s), 1e-9));
    let mut exact = DenseMatrix::from_rows(&fixtures::SEVEN_AGENT_P_INF_ROUNDED)?;
    for (c, (r6, r7)) in [16.0, 16.0, 8.0, 6.0, 9.0]
        .iter()
        .zip([8.0, 8.0, 4.0, 14.0, 21.0])
        .enumerate()
    {
        exact[(5, c)] = r6 / 55.0;
        exact[(6, c)] = r7 / 55.0;
    }
    seven_checks.push(Check::new(
        "P-infinity equals the exact limit",
        seven.p_inf.matrix.max_abs_diff(&exact),
        1e-9,
    ));
    let u = DenseMatrix::from_rows(&fixtures::SEVEN_AGENT_U)?;
    seven_checks.push(Check::new("U equals the reference basis", seven.basis.u.max_abs_diff(&u), 4.0 * f64::EPSILON));

    let mut five_checks = run_checks(&five, &tol, cap);
    let x = DenseMatrix::from_rows(&fixtures::FIVE_AGENT_X)?;
    let z = DenseMatrix::from_rows(&fixtures::FIVE_AGENT_Z)?;
    five_checks.push(Check::new("X equals the reference matrix", five.xz.x.max_abs_diff(&x), 4.0 * f64::EPSILON));
    five_checks.push(Check::new("Z equals the reference matrix", five.xz.z.max_abs_diff(&z), 4.0 * f64::EPSILON));
    five_checks.push(Check::new(
        "alpha equals the basic part of the seven-agent alpha",
        max_abs_diff_vec(&five.alpha, &seven.alpha[..5]),
        1e-9,
    ));

    Ok(verification(vec![
        system("seven-agent", &seven_checks),
        system("five-agent", &five_checks),
        system("inverse row sums", &inverse_samples(7, &tol)),
    ]))
}
