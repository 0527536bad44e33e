//! Serializable report documents. Field order is declaration order and every
//! real is rounded to 12 significant digits, so identical runs produce
//! byte-identical output.

use consensus_core::checks::Check;
use consensus_core::projection::{OpinionTrajectory, TreeSource};
use consensus_core::{ConsensusAnalysis, DenseMatrix, LimitMethod, SpectralKind};
use serde::{Serialize, Serializer};

/// A real printed with 12 significant digits; magnitudes below `1e-12`
/// print as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x.abs() < 1e-12 {
        return 0.0;
    }
    format!("{:.11e}", x).parse().unwrap_or(x)
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = round12(self.0);
        if v.is_finite() {
            s.serialize_f64(v)
        } else {
            s.serialize_none()
        }
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

pub fn matrix(m: &DenseMatrix) -> Vec<Vec<Num>> {
    (0..m.rows()).map(|r| nums(m.row(r))).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

#[derive(Debug, Serialize)]
pub struct ClassReport {
    /// Agents, numbered from 1.
    pub agents: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub basic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct PowerLimitReport {
    pub method: String,
    pub matrix: Vec<Vec<Num>>,
}

#[derive(Debug, Serialize)]
pub struct ResolventProbe {
    pub tau: Num,
    pub matrix: Vec<Vec<Num>>,
    pub max_deviation_from_limit: Num,
}

#[derive(Debug, Serialize)]
pub struct ClassTreesReport {
    pub agents: Vec<usize>,
    pub stationary: Vec<Num>,
    pub tree_total: Num,
    pub trees_per_root: Vec<Num>,
    pub w: Num,
    pub beta: Num,
}

#[derive(Debug, Serialize)]
pub struct IgnoredOpinion {
    pub agent: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub opinion: Num,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryReport {
    pub mode: String,
    pub initial: Vec<Num>,
    pub preequalized: Vec<Num>,
    pub final_state: Vec<Num>,
    pub steps: usize,
    pub consensus: Num,
    /// `αᵀ s(0)`, for comparison with the simulated consensus.
    pub alpha_dot_initial: Num,
    /// Nonbasic agents: their initial opinions carry zero weight in `α`.
    pub ignored_by_alpha: Vec<IgnoredOpinion>,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub spectral_class: &'static str,
    pub nu: usize,
    pub b: usize,
    pub classes: Vec<ClassReport>,
    pub power_limit: PowerLimitReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolvent_probe: Option<ResolventProbe>,
    pub projector: Vec<Vec<Num>>,
    pub projector_tilde: Vec<Vec<Num>>,
    pub nonbasic_block_singular: bool,
    pub regularized_limit: Vec<Vec<Num>>,
    pub alpha: Vec<Num>,
    pub beta: Vec<Num>,
    pub tree_source: &'static str,
    pub final_classes: Vec<ClassTreesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryReport>,
}

pub fn spectral_name(kind: SpectralKind) -> &'static str {
    match kind {
        SpectralKind::Regular => "regular",
        SpectralKind::ProperNotRegular => "proper, not regular",
        SpectralKind::Improper => "improper",
    }
}

fn method_name(m: LimitMethod) -> String {
    match m {
        LimitMethod::Recursive { steps } => format!("out-forest trace recursion, {steps} steps"),
        LimitMethod::Resolvent { tau } => format!("extrapolated resolvent, tau up to {tau}"),
        LimitMethod::Iterative { squarings } => format!("repeated squaring, {squarings} squarings"),
    }
}

fn labels_of(labels: Option<&[String]>, agents: &[usize]) -> Option<Vec<String>> {
    labels.map(|l| agents.iter().map(|&v| l[v].clone()).collect())
}

impl ReportDocument {
    pub fn from_analysis(a: &ConsensusAnalysis, labels: Option<&[String]>) -> Self {
        let d = &a.decomposition;
        let classes = d
            .classes()
            .iter()
            .enumerate()
            .map(|(k, c)| ClassReport {
                agents: one_based(c),
                labels: labels_of(labels, c),
                basic: d.is_basic(k),
                period: a.spectral.periods.get(k).copied().filter(|_| d.is_basic(k)),
            })
            .collect();
        let final_classes = d
            .basic_classes()
            .iter()
            .zip(&a.trees.classes)
            .zip(&a.stationary)
            .zip(&a.beta)
            .map(|(((c, t), pi), beta)| ClassTreesReport {
                agents: one_based(c),
                stationary: nums(pi),
                tree_total: Num(t.total),
                trees_per_root: nums(&t.per_root),
                w: Num(t.w),
                beta: Num(*beta),
            })
            .collect();
        ReportDocument {
            n: a.n(),
            labels: labels.map(<[String]>::to_vec),
            spectral_class: spectral_name(a.spectral.kind),
            nu: d.nu(),
            b: d.b(),
            classes,
            power_limit: PowerLimitReport {
                method: method_name(a.p_inf.method),
                matrix: matrix(&a.p_inf.matrix),
            },
            resolvent_probe: None,
            projector: matrix(&a.s.s),
            projector_tilde: matrix(&a.s_tilde.s_tilde),
            nonbasic_block_singular: a.s_tilde.d_block_singular,
            regularized_limit: matrix(&a.p_hat),
            alpha: nums(&a.alpha),
            beta: nums(&a.beta),
            tree_source: match a.tree_source {
                TreeSource::Enumerated => "out-tree enumeration",
                TreeSource::Cofactors => "matrix-tree cofactors",
            },
            final_classes,
            trajectory: None,
        }
    }
}

impl TrajectoryReport {
    pub fn new(
        a: &ConsensusAnalysis,
        t: &OpinionTrajectory,
        mode: &str,
        labels: Option<&[String]>,
        alpha_dot_initial: f64,
    ) -> Self {
        let ignored_by_alpha = a
            .decomposition
            .nonbasic_vertices()
            .iter()
            .copied()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|v| IgnoredOpinion {
                agent: v + 1,
                label: labels.map(|l| l[v].clone()),
                opinion: Num(t.initial[v]),
            })
            .collect();
        TrajectoryReport {
            mode: mode.to_string(),
            initial: nums(&t.initial),
            preequalized: nums(&t.preequalized),
            final_state: nums(t.states.last().unwrap_or(&t.preequalized)),
            steps: t.converged_at,
            consensus: Num(t.consensus),
            alpha_dot_initial: Num(alpha_dot_initial),
            ignored_by_alpha,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub deviation: Num,
    pub tolerance: Num,
}

impl From<&Check> for CheckReport {
    fn from(c: &Check) -> Self {
        CheckReport {
            name: c.name.to_string(),
            passed: c.passed,
            deviation: Num(c.deviation),
            tolerance: Num(c.tolerance),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SystemChecks {
    pub system: String,
    pub checks: Vec<CheckReport>,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub failed: usize,
    pub systems: Vec<SystemChecks>,
}

impl VerificationReport {
    pub fn new(systems: Vec<SystemChecks>) -> Self {
        let failed = systems
            .iter()
            .flat_map(|s| &s.checks)
            .filter(|c| !c.passed)
            .count();
        VerificationReport {
            passed: failed == 0,
            failed,
            systems,
        }
    }
}

/// Indented JSON in which arrays of scalars (vectors and matrix rows) stay
/// on one line.
pub fn pretty(v: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn is_scalar(v: &serde_json::Value) -> bool {
    !matches!(v, serde_json::Value::Array(_) | serde_json::Value::Object(_))
}

fn write_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    use serde_json::Value;
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretty_keeps_rows_inline() {
        let v = serde_json::json!({"b": [[1.0, 2.0], [3.0, 4.0]], "a": "x", "e": []});
        assert_eq!(
            pretty(&v),
            "{\n  \"b\": [\n    [1.0, 2.0],\n    [3.0, 4.0]\n  ],\n  \"a\": \"x\",\n  \"e\": []\n}"
        );
    }

    #[test]
    fn rounding_to_twelve_digits() {
        assert_eq!(round12(26.0 / 110.0), 0.236363636364);
        assert_eq!(round12(-1e-17), 0.0);
        assert_eq!(round12(1.0), 1.0);
        assert_eq!(serde_json::to_string(&Num(-0.0)).unwrap(), "0.0");
        assert_eq!(serde_json::to_string(&Num(f64::INFINITY)).unwrap(), "null");
    }
}
