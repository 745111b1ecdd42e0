//! Explicit constants of the Ruelle–Perron–Frobenius theorem and checks of
//! every inequality they enter, evaluated against exact transfer-operator
//! computations.
//!
//! A check is a [`CheckRow`] with `margin = bound_value - actual_value`; it
//! passes when `margin >= -1e-9 * |bound_value|`. Lower bounds `L <= x` with
//! positive `x` are recorded in reciprocal form `1/x <= 1/L`, so every row
//! reads as an upper bound. Growth and convergence checks are reported in
//! λ-normalized units, i.e. with both sides divided by `λⁿ`.
//!
//! The rates `β` and `ρ` sit within `1e-16` of one for realistic constants,
//! so they are carried through their complements `1 - β`, `1 - ρ` and powers
//! are evaluated as `exp(n · ln_1p(-(1 - β)))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::LocallyConstantFn;
use crate::gibbs::{GibbsMeasure, Which};
use crate::symbolic::TransitionMatrix;
use crate::transfer::{lambda_bounds, PerronData, TransferOperator};

/// Absolute tolerance for `∫ g dν = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Relative slack on bound checks, absorbing rounding.
pub const BOUND_REL_TOL: f64 = 1e-9;
/// Largest admissible discrepancy of the shift-invariance check.
pub const INVARIANCE_TOL: f64 = 1e-10;

/// Every named constant, evaluated for one potential.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundConstants {
    pub theta: f64,
    pub q: usize,
    /// `|f|_∞`
    pub sup_f: f64,
    /// `|f|_θ`
    pub holder_f: f64,
    /// λ used for the diagnostic `K'`.
    pub lambda: f64,
    /// `b = max{1, |f|_θ}`
    pub b: f64,
    /// `m0`: the integer with `θ^{m0} < 1/b <= θ^{m0-1}`.
    pub m0: usize,
    /// Primitivity exponent `M` of the transition matrix.
    pub primitivity: usize,
    /// `r0 = (log q + 2|f|_∞) / |log θ|`
    pub r0: f64,
    /// `B = e^{2θ/(1-θ)} q^{M+1} e^{2(M+1)|f|_∞} / (1-θ)`
    pub big_b: f64,
    /// `K = B b^{r0}`
    pub k: f64,
    /// `μ = (1-θ) / (4K² e^{2θ/(1-θ)})`
    pub mu: f64,
    /// `A = 4K²`
    pub a: f64,
    /// `1 - β = (1-θ)/(4K³)`
    pub beta_complement: f64,
    /// `1 - ρ = (1-θ)/(8K³)`
    pub rho_complement: f64,
    /// `A1 = 8K²b`
    pub a1: f64,
    /// `A2 = 100K⁵b³/(1-θ)`
    pub a2: f64,
    /// `D_f = 100K⁵b³/(1-θ)`
    pub d_f: f64,
    /// Diagnostic `K' = B_{m0} λ^{m0+M} e^{(m0+M)|f|_∞}`.
    pub k_prime: f64,
    /// Diagnostic `1 - β'` with `β' = (1-μ)^{1/(m0+M)}`.
    pub beta_prime_complement: f64,
}

/// One constant as it appears in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub name: String,
    pub value: f64,
    pub definition: String,
}

/// The integer `m0 >= 1` with `θ^{m0} < 1/b <= θ^{m0-1}`, found by search.
pub fn cone_depth(theta: f64, b: f64) -> usize {
    let target = 1.0 / b;
    let mut m0 = 1;
    while theta.powi(m0 as i32) >= target {
        m0 += 1;
    }
    m0
}

/// Computes every constant from `f`'s norms, the shift and `λ`.
pub fn compute_constants(
    f: &LocallyConstantFn,
    a: &TransitionMatrix,
    lambda: f64,
) -> Result<BoundConstants> {
    let norms = f.holder_norms();
    BoundConstants::from_norms(
        f.theta(),
        a.q(),
        a.primitivity_exponent(),
        norms.sup_norm,
        norms.holder_seminorm,
        lambda,
    )
}

impl BoundConstants {
    pub fn from_norms(
        theta: f64,
        q: usize,
        primitivity: usize,
        sup_f: f64,
        holder_f: f64,
        lambda: f64,
    ) -> Result<Self> {
        crate::functions::check_theta(theta)?;
        if q < 2 || primitivity == 0 || !(sup_f >= 0.0) || !(holder_f >= 0.0) {
            return Err(Error::InvalidArgument(
                "constants need q >= 2, M >= 1 and nonnegative norms".into(),
            ));
        }
        let qf = q as f64;
        let mf = primitivity as f64;
        let one_minus = 1.0 - theta;
        let cone_base = (2.0 * theta / one_minus).exp();

        let b = holder_f.max(1.0);
        let m0 = cone_depth(theta, b);
        let r0 = (qf.ln() + 2.0 * sup_f) / theta.ln().abs();
        let big_b = cone_base * qf.powf(mf + 1.0) * (2.0 * (mf + 1.0) * sup_f).exp() / one_minus;
        let k = big_b * b.powf(r0);
        let mu = one_minus / (4.0 * k * k * cone_base);
        let k3 = k * k * k;
        let k5 = k3 * k * k;
        let steps = (m0 + primitivity) as f64;
        Ok(BoundConstants {
            theta,
            q,
            sup_f,
            holder_f,
            lambda,
            b,
            m0,
            primitivity,
            r0,
            big_b,
            k,
            mu,
            a: 4.0 * k * k,
            beta_complement: one_minus / (4.0 * k3),
            rho_complement: one_minus / (8.0 * k3),
            a1: 8.0 * k * k * b,
            a2: 100.0 * k5 * b.powi(3) / one_minus,
            d_f: 100.0 * k5 * b.powi(3) / one_minus,
            k_prime: cone_base * lambda.powf(steps) * (steps * sup_f).exp(),
            beta_prime_complement: -((-mu).ln_1p() / steps).exp_m1(),
        })
    }

    pub fn beta(&self) -> f64 {
        1.0 - self.beta_complement
    }

    pub fn rho(&self) -> f64 {
        1.0 - self.rho_complement
    }

    pub fn beta_prime(&self) -> f64 {
        1.0 - self.beta_prime_complement
    }

    /// `βⁿ`, accurate even when `β` rounds to one.
    pub fn beta_pow(&self, n: usize) -> f64 {
        (n as f64 * (-self.beta_complement).ln_1p()).exp()
    }

    /// `ρⁿ`.
    pub fn rho_pow(&self, n: usize) -> f64 {
        (n as f64 * (-self.rho_complement).ln_1p()).exp()
    }

    /// `m0 + M`, the block length of the cone contraction.
    pub fn block(&self) -> usize {
        self.m0 + self.primitivity
    }

    pub fn cone(&self) -> ConeSpec {
        ConeSpec {
            m0: self.m0,
            theta: self.theta,
        }
    }

    /// Named constants with their defining formulas, in report order.
    pub fn entries(&self) -> Vec<ConstantEntry> {
        let e = |name: &str, value: f64, definition: &str| ConstantEntry {
            name: name.into(),
            value,
            definition: definition.into(),
        };
        vec![
            e("b", self.b, "max{1, |f|_theta}"),
            e("m0", self.m0 as f64, "integer with theta^m0 < 1/b <= theta^(m0-1)"),
            e("M", self.primitivity as f64, "least M with A^M > 0"),
            e("r0", self.r0, "(log q + 2|f|_inf) / |log theta|"),
            e("B", self.big_b, "e^(2 theta/(1-theta)) q^(M+1) e^(2(M+1)|f|_inf) / (1-theta)"),
            e("K", self.k, "B b^r0"),
            e("B_m0", self.cone().b_m(self.m0), "e^(2 theta/(1-theta))"),
            e("mu", self.mu, "(1-theta) / (4 K^2 e^(2 theta/(1-theta)))"),
            e("A", self.a, "4 K^2"),
            e("beta", self.beta(), "1 - (1-theta)/(4 K^3)"),
            e("1-beta", self.beta_complement, "(1-theta)/(4 K^3)"),
            e("rho", self.rho(), "1 - (1-theta)/(8 K^3)"),
            e("1-rho", self.rho_complement, "(1-theta)/(8 K^3)"),
            e("A1", self.a1, "8 K^2 b"),
            e("A2", self.a2, "100 K^5 b^3 / (1-theta)"),
            e("D_f", self.d_f, "100 K^5 b^3 / (1-theta)"),
            e("K'", self.k_prime, "B_m0 lambda^(m0+M) e^((m0+M)|f|_inf) (diagnostic)"),
            e("beta'", self.beta_prime(), "(1-mu)^(1/(m0+M)) (diagnostic)"),
        ]
    }
}

/// Parameters of the cone `Λ`: for `m >= m0`,
/// `B_m = e^{2θ^{m-m0+1}/(1-θ)}` bounds `g(y)/g(x)` on cylinders `C_m[x]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeSpec {
    pub m0: usize,
    pub theta: f64,
}

impl ConeSpec {
    pub fn b_m(&self, m: usize) -> f64 {
        assert!(m >= self.m0, "B_m is defined for m >= m0");
        let exponent = (m - self.m0 + 1) as i32;
        (2.0 * self.theta.powi(exponent) / (1.0 - self.theta)).exp()
    }
}

/// Outcome of a successful cone-membership check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeMembership {
    /// Largest `(max g / min g) / B_m` over the constrained cylinders; zero
    /// when no cylinder constraint applies.
    pub worst_ratio_fraction: f64,
    /// Number of cylinder depths `m` that carried a nontrivial constraint.
    pub depths_checked: usize,
    pub integral: f64,
}

/// Worst ratio fraction and, if any, a description of the first violation.
fn cone_ratio_scan(g: &LocallyConstantFn, cone: &ConeSpec) -> (f64, usize, Option<String>) {
    let mut worst = 0.0f64;
    let mut first_violation = None;
    let words = g.words();
    let values = g.values();
    // C_m[x] fixes coordinates 0..=m; for m >= memory - 1 the function is constant on it
    let depths: Vec<usize> = (cone.m0..g.memory().saturating_sub(1)).collect();
    for &m in &depths {
        let bm = cone.b_m(m);
        let prefix = m + 1;
        let mut start = 0;
        while start < words.len() {
            let head = words[start].prefix(prefix);
            let mut end = start;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            while end < words.len() && words[end].prefix(prefix) == head {
                lo = lo.min(values[end]);
                hi = hi.max(values[end]);
                end += 1;
            }
            let ratio = if hi <= 0.0 {
                1.0
            } else if lo <= 0.0 {
                f64::INFINITY
            } else {
                hi / lo
            };
            let fraction = if hi <= 0.0 { 0.0 } else { ratio / bm };
            worst = worst.max(fraction);
            if fraction > 1.0 + BOUND_REL_TOL && first_violation.is_none() {
                first_violation = Some(format!(
                    "on C_{m}[{}] the ratio {ratio} exceeds B_{m} = {bm}",
                    crate::symbolic::Word::from(head)
                ));
            }
            start = end;
        }
    }
    (worst, depths.len(), first_violation)
}

/// Checks `g >= 0`, `∫ g dν = 1` and `g(y) <= B_m g(x)` for `y ∈ C_m[x]`,
/// `m >= m0`. Only `m <= memory - 2` can constrain a memory-`memory` function.
pub fn check_lambda_membership(
    g: &LocallyConstantFn,
    cone: &ConeSpec,
    gm: &GibbsMeasure,
) -> Result<ConeMembership> {
    let min = g.min_value();
    if min < 0.0 {
        return Err(Error::ConeViolation(format!("function takes the negative value {min}")));
    }
    let integral = gm.integrate(g, Which::Nu)?;
    if (integral - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { integral });
    }
    let (worst, depths, violation) = cone_ratio_scan(g, cone);
    match violation {
        Some(detail) => Err(Error::ConeViolation(detail)),
        None => Ok(ConeMembership {
            worst_ratio_fraction: worst,
            depths_checked: depths,
            integral,
        }),
    }
}

/// `g / ∫ g dν` for a strictly positive `g`, verified to lie in the cone.
pub fn normalize_into_cone(
    g: &LocallyConstantFn,
    cone: &ConeSpec,
    gm: &GibbsMeasure,
) -> Result<LocallyConstantFn> {
    let integral = gm.integrate(g, Which::Nu)?;
    if !(integral > 0.0) {
        return Err(Error::NotNormalized { integral });
    }
    let normalized = g.scale(1.0 / integral)?;
    check_lambda_membership(&normalized, cone, gm)?;
    Ok(normalized)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub bound_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub bound_value: f64,
    pub actual_value: f64,
    pub margin: f64,
    pub pass: bool,
}

impl CheckRow {
    /// Row for `actual <= bound`.
    pub fn upper(bound_id: &str, n: Option<usize>, bound_value: f64, actual_value: f64) -> Self {
        let margin = bound_value - actual_value;
        CheckRow {
            bound_id: bound_id.into(),
            n,
            bound_value,
            actual_value,
            margin,
            pass: margin >= -BOUND_REL_TOL * bound_value.abs(),
        }
    }
}

/// A failing check together with the full report it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub row: CheckRow,
    pub report: CheckReport,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.row.bound_id)?;
        if let Some(n) = self.row.n {
            write!(f, " at n = {n}")?;
        }
        write!(
            f,
            ": actual {} exceeds bound {} (margin {})",
            self.row.actual_value, self.row.bound_value, self.row.margin
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.rows.extend(other.rows);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn first_violation(&self) -> Option<&CheckRow> {
        self.rows.iter().find(|r| !r.pass)
    }

    /// Smallest margin relative to its bound; negative means a violation.
    pub fn worst_relative_margin(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| {
                if r.bound_value == 0.0 {
                    r.margin
                } else {
                    r.margin / r.bound_value.abs()
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `Err(BoundViolated)` naming the first failing row, else the report.
    pub fn finish(self) -> Result<Self> {
        match self.first_violation().cloned() {
            Some(row) => Err(Error::BoundViolated(Box::new(Violation { row, report: self }))),
            None => Ok(self),
        }
    }
}

fn check_same_theta(f: &LocallyConstantFn, c: &BoundConstants) -> Result<()> {
    if f.theta() != c.theta {
        return Err(Error::InvalidArgument(format!(
            "constants were computed for theta = {}, potential uses {}",
            c.theta,
            f.theta()
        )));
    }
    Ok(())
}

/// Bracket on λ, bounds `1/K <= h <= K` and `|h|_θ <= BbK`, and
/// `|g|_θ < BbK` for every supplied cone member.
pub fn verify_perron_bounds(
    pd: &PerronData,
    c: &BoundConstants,
    f: &LocallyConstantFn,
    members: &[LocallyConstantFn],
) -> Result<CheckReport> {
    check_same_theta(f, c)?;
    let (lo, hi) = lambda_bounds(f, c.q);
    let mut report = CheckReport::default();
    report.push(CheckRow::upper("lambda_lower", None, 1.0 / lo, 1.0 / pd.lambda));
    report.push(CheckRow::upper("lambda_upper", None, hi, pd.lambda));
    report.push(CheckRow::upper("h_lower", None, c.k, 1.0 / pd.h.min_value()));
    report.push(CheckRow::upper("h_upper", None, c.k, pd.h.max_value()));
    let holder_bound = c.big_b * c.b * c.k;
    report.push(CheckRow::upper("h_holder", None, holder_bound, pd.h.holder_seminorm()));
    for g in members {
        report.push(CheckRow::upper("cone_member_holder", None, holder_bound, g.holder_seminorm()));
    }
    report.finish()
}

/// Every non-leading eigenvalue of the lift has modulus at most `ρλ`.
pub fn verify_spectral_gap(pd: &PerronData, c: &BoundConstants) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    report.push(CheckRow::upper("spectral_gap", None, c.rho() * pd.lambda, pd.second_modulus));
    report.finish()
}

/// For `n = 0..=n_max`, with `T = L/λ`:
/// `|Tⁿg|_∞ <= K²|g|_∞`,
/// `|Tⁿg|_θ <= K²(2|f|_θ/(1-θ) |g|_∞ + θⁿ|g|_θ)` and
/// `‖Tⁿg‖_θ <= 4bK²/(1-θ) ‖g‖_θ`.
pub fn verify_basic_inequalities(
    f: &LocallyConstantFn,
    g: &LocallyConstantFn,
    pd: &PerronData,
    c: &BoundConstants,
    n_max: usize,
) -> Result<CheckReport> {
    check_same_theta(f, c)?;
    let op = TransferOperator::new(f)?;
    let g_norms = g.holder_norms();
    let k2 = c.k * c.k;
    let one_minus = 1.0 - c.theta;
    let mut report = CheckReport::default();
    let mut current = g.clone();
    for n in 0..=n_max {
        if n > 0 {
            current = op.apply_normalized(&current, pd.lambda)?;
        }
        let norms = current.holder_norms();
        report.push(CheckRow::upper("sup_growth", Some(n), k2 * g_norms.sup_norm, norms.sup_norm));
        let holder_bound = k2
            * (2.0 * c.holder_f / one_minus * g_norms.sup_norm
                + c.theta.powi(n as i32) * g_norms.holder_seminorm);
        report.push(CheckRow::upper("holder_growth", Some(n), holder_bound, norms.holder_seminorm));
        let norm_bound = 4.0 * c.b * k2 / one_minus * g_norms.total;
        report.push(CheckRow::upper("norm_growth", Some(n), norm_bound, norms.total));
    }
    report.finish()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub checks: CheckReport,
    /// `‖Tⁿg - h∫g dν‖_θ` for `n = 0..=n_max`.
    pub remainder_norms: Vec<f64>,
    /// `exp` of the least-squares log-slope of the remainder norms above the
    /// rounding floor; `None` when fewer than two such points exist.
    pub empirical_rate: Option<f64>,
    pub rho: f64,
    /// `second_modulus / λ` of the lift.
    pub spectral_ratio: f64,
    /// Whether the cone-specific sup bound was also checked.
    pub cone_member: bool,
}

/// With `rₙ = Tⁿg - h∫g dν`: `|rₙ|_∞ <= A1 βⁿ ‖g‖_θ` and
/// `‖rₙ‖_θ <= A2 ρⁿ ‖g‖_θ`; for `g` in the cone additionally
/// `|Tⁿg - h|_∞ <= A βⁿ`.
pub fn verify_convergence(
    f: &LocallyConstantFn,
    g: &LocallyConstantFn,
    pd: &PerronData,
    c: &BoundConstants,
    n_max: usize,
) -> Result<ConvergenceReport> {
    check_same_theta(f, c)?;
    let gm = GibbsMeasure::new(f, pd)?;
    let op = TransferOperator::new(f)?;
    let alpha = gm.integrate(g, Which::Nu)?;
    let g_norm = g.norm();
    let projection = pd.h.scale(alpha)?;
    let cone_member = check_lambda_membership(g, &c.cone(), &gm).is_ok();

    let mut report = CheckReport::default();
    let mut remainder_norms = Vec::with_capacity(n_max + 1);
    let mut current = g.clone();
    for n in 0..=n_max {
        if n > 0 {
            current = op.apply_normalized(&current, pd.lambda)?;
        }
        let remainder = current.sub(&projection)?;
        let norms = remainder.holder_norms();
        remainder_norms.push(norms.total);
        report.push(CheckRow::upper(
            "sup_convergence",
            Some(n),
            c.a1 * c.beta_pow(n) * g_norm,
            norms.sup_norm,
        ));
        report.push(CheckRow::upper(
            "holder_convergence",
            Some(n),
            c.a2 * c.rho_pow(n) * g_norm,
            norms.total,
        ));
        if cone_member {
            let gap = current.sub(&pd.h)?.sup_norm();
            report.push(CheckRow::upper("cone_convergence", Some(n), c.a * c.beta_pow(n), gap));
        }
    }
    let empirical_rate = decay_rate(&remainder_norms);
    Ok(ConvergenceReport {
        checks: report.finish()?,
        remainder_norms,
        empirical_rate,
        rho: c.rho(),
        spectral_ratio: pd.second_modulus / pd.lambda,
        cone_member,
    })
}

/// Geometric decay rate fitted to the points clearly above rounding noise.
fn decay_rate(norms: &[f64]) -> Option<f64> {
    let first = *norms.first()?;
    let floor = 1e-12 * first.max(f64::MIN_POSITIVE);
    let points: Vec<(f64, f64)> = norms
        .iter()
        .enumerate()
        .skip(1)
        .take_while(|(_, &v)| v > floor)
        .map(|(n, &v)| (n as f64, v.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let count = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / count;
    let my = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some((sxy / sxx).exp())
}

/// Splits `T^{m0+M}g = μh + (1-μ)g̃` for a cone member `g` and checks that
/// `g̃` is positive, normalized and in the cone, together with
/// `|g|_∞ <= K`, `1/K <= min T^{m0+M}g` and `μ max h <= min T^{m0+M}g`.
pub fn verify_decomposition(
    f: &LocallyConstantFn,
    g: &LocallyConstantFn,
    pd: &PerronData,
    c: &BoundConstants,
) -> Result<CheckReport> {
    check_same_theta(f, c)?;
    let gm = GibbsMeasure::new(f, pd)?;
    let cone = c.cone();
    check_lambda_membership(g, &cone, &gm)?;
    let op = TransferOperator::new(f)?;
    let steps = c.block();
    let pushed = op.iterate_normalized(g, steps, pd.lambda)?;
    let pushed_min = pushed.min_value();

    let mut report = CheckReport::default();
    report.push(CheckRow::upper("cone_sup", None, c.k, g.sup_norm()));
    let inv_min = if pushed_min > 0.0 { 1.0 / pushed_min } else { f64::INFINITY };
    report.push(CheckRow::upper("iterate_lower", Some(steps), c.k, inv_min));
    report.push(CheckRow::upper(
        "mu_h_below_iterate",
        Some(steps),
        pushed_min,
        c.mu * pd.h.max_value(),
    ));

    let remainder = pushed
        .sub(&pd.h.scale(c.mu)?)?
        .scale(1.0 / (1.0 - c.mu))?;
    report.push(CheckRow::upper("remainder_positive", None, 0.0, -remainder.min_value()));
    let integral = gm.integrate(&remainder, Which::Nu)?;
    report.push(CheckRow::upper(
        "remainder_normalized",
        None,
        NORMALIZATION_TOL,
        (integral - 1.0).abs(),
    ));
    let (fraction, _, _) = cone_ratio_scan(&remainder, &cone);
    report.push(CheckRow::upper("remainder_cone", None, 1.0, fraction));
    report.finish()
}

/// `|C(n)| <= D_f ρⁿ ‖u‖_θ ‖v‖_θ ‖h‖_θ`, which follows from the λ-normalized
/// convergence bound applied to `u h` and `‖uh‖_θ <= ‖u‖_θ ‖h‖_θ`.
pub fn verify_correlation_decay(
    gm: &GibbsMeasure,
    c: &BoundConstants,
    u: &LocallyConstantFn,
    v: &LocallyConstantFn,
    n_max: usize,
) -> Result<CheckReport> {
    let scale = c.d_f * u.norm() * v.norm() * gm.h().norm();
    let mut report = CheckReport::default();
    for n in 0..=n_max {
        let corr = gm.correlation(u, v, n)?;
        report.push(CheckRow::upper("correlation_decay", Some(n), scale * c.rho_pow(n), corr.abs()));
    }
    report.finish()
}

/// `ν̂(σ^{-1}[w]) = ν̂([w])` for all words up to `depth`, within [`INVARIANCE_TOL`].
pub fn verify_shift_invariance(gm: &GibbsMeasure, depth: usize) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let discrepancy = gm.check_shift_invariance(depth)?;
    report.push(CheckRow::upper("shift_invariance", Some(depth), INVARIANCE_TOL, discrepancy));
    report.finish()
}
