//! Exact and Monte Carlo evaluation of scheme instances, exponent fitting,
//! and cost auditing.
//!
//! The exact evaluator never touches individual sequences. Every scheme's
//! acceptance event factorizes over three independent blocks given the
//! encoder branch:
//!
//! * the pair block `(U^n, V^n)` decides the branch (a function of the `U`
//!   type) and the local test (a function of the `V` type), so one pass over
//!   joint `(U, V)` types under both hypotheses yields all four branch/test
//!   probabilities;
//! * the channel block is conditionally i.i.d. given the branch (repeated
//!   sure symbol, or a constant row), so its contribution is either the
//!   closed form `1 - (1 - gamma)^k` or one pass over output types.
//!
//! Probabilities accumulate in natural-log space; type-II errors far below
//! `2^-1000` survive, and the reported `log2_beta` is exact to rounding.

use crate::error::{Error, Result};
use crate::prob::{CostFunction, Dmc, JointPmf};
use crate::schemes::{branch_counts_typical, decide, encode, Regime, SchemeInstance};
use crate::typicality::{
    accumulate_type_events, counts_typical, ln_cells, LogSumAcc, DEFAULT_TYPE_CAP,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::LN_2;
use std::ops::Range;

/// Which hypothesis generated the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Null,
    Alternative,
}

/// How a result was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMethod {
    Exact,
    MonteCarlo,
}

/// Error probabilities and expected costs of one scheme instance.
#[derive(Debug, Clone, Serialize)]
pub struct EvaluationResult {
    pub regime: Regime,
    pub n: usize,
    /// Type-I error probability (reject under the null).
    pub alpha: f64,
    /// Base-2 log of the type-II error probability; `-inf` when the scheme
    /// cannot accept under the alternative at all.
    pub log2_beta: f64,
    /// Expected total channel input cost under each hypothesis.
    pub expected_cost_h0: f64,
    pub expected_cost_h1: f64,
    pub method: EvalMethod,
    pub trials: Option<u64>,
    /// 95% confidence halfwidths on the probability scale (Monte Carlo only).
    pub alpha_ci_halfwidth: Option<f64>,
    pub beta_ci_halfwidth: Option<f64>,
    /// True when no type-II error was observed and `log2_beta` is the 95%
    /// upper confidence bound instead of a point estimate.
    pub beta_is_upper_bound: bool,
}

impl EvaluationResult {
    /// The type-II error probability on the linear scale (may underflow
    /// to zero; prefer `log2_beta`).
    pub fn beta(&self) -> f64 {
        (self.log2_beta * LN_2).exp()
    }
}

fn check_shapes(inst: &SchemeInstance, p_uv: &JointPmf, q_uv: &JointPmf) -> Result<()> {
    for (joint, what) in [(p_uv, "null"), (q_uv, "alternative")] {
        if joint.nu() != inst.p_u.len() {
            return Err(Error::ShapeMismatch {
                op: match what {
                    "null" => "evaluate: null U alphabet",
                    _ => "evaluate: alternative U alphabet",
                },
                expected: inst.p_u.len(),
                got: joint.nu(),
            });
        }
        if joint.nv() != inst.p_v.len() {
            return Err(Error::ShapeMismatch {
                op: match what {
                    "null" => "evaluate: null V alphabet",
                    _ => "evaluate: alternative V alphabet",
                },
                expected: inst.p_v.len(),
                got: joint.nv(),
            });
        }
    }
    Ok(())
}

/// Joint-type pass: natural logs of `Pr[branch]`, `Pr[V typical]`,
/// `Pr[branch and V typical]`, `Pr[not branch and V typical]` under both
/// hypotheses, indexed `[hypothesis][event]`.
fn branch_test_probabilities(
    inst: &SchemeInstance,
    p_uv: &JointPmf,
    q_uv: &JointPmf,
    cap: u64,
) -> Result<Vec<Vec<f64>>> {
    let n = inst.n;
    let nu = inst.p_u.len();
    let nv = inst.p_v.len();
    let ln_dists = vec![ln_cells(p_uv.as_slice()), ln_cells(q_uv.as_slice())];
    let mut row_counts = vec![0usize; nu];
    let mut col_counts = vec![0usize; nv];
    accumulate_type_events(n, nu * nv, cap, &ln_dists, 4, |counts| {
        row_counts.iter_mut().for_each(|c| *c = 0);
        col_counts.iter_mut().for_each(|c| *c = 0);
        for u in 0..nu {
            for v in 0..nv {
                let c = counts[u * nv + v];
                row_counts[u] += c;
                col_counts[v] += c;
            }
        }
        let a = branch_counts_typical(inst, &row_counts, n);
        let b = counts_typical(&col_counts, n, inst.p_v.as_slice(), inst.v_slack);
        (a as u32) | ((b as u32) << 1) | (((a && b) as u32) << 2) | (((!a && b) as u32) << 3)
    })
}

const EV_BRANCH: usize = 0;
const EV_BRANCH_AND_TEST: usize = 2;
const EV_NOT_BRANCH_AND_TEST: usize = 3;

/// Exactly evaluates a scheme instance by enumerating empirical types.
pub fn evaluate_exact(
    inst: &SchemeInstance,
    p_uv: &JointPmf,
    q_uv: &JointPmf,
) -> Result<EvaluationResult> {
    evaluate_exact_with_cap(inst, p_uv, q_uv, DEFAULT_TYPE_CAP)
}

/// Same as [`evaluate_exact`] with an explicit cap on the number of
/// enumerated types.
pub fn evaluate_exact_with_cap(
    inst: &SchemeInstance,
    p_uv: &JointPmf,
    q_uv: &JointPmf,
    cap: u64,
) -> Result<EvaluationResult> {
    check_shapes(inst, p_uv, q_uv)?;
    let n = inst.n;
    let done = |alpha: f64, log2_beta: f64, cost_h0: f64, cost_h1: f64| EvaluationResult {
        regime: inst.regime,
        n,
        alpha: alpha.clamp(0.0, 1.0),
        log2_beta,
        expected_cost_h0: cost_h0,
        expected_cost_h1: cost_h1,
        method: EvalMethod::Exact,
        trials: None,
        alpha_ci_halfwidth: None,
        beta_ci_halfwidth: None,
        beta_is_upper_bound: false,
    };

    if inst.local_fallback || inst.regime == Regime::LocalOnly {
        let ln_dists = vec![
            ln_cells(p_uv.marginal_v().as_slice()),
            ln_cells(q_uv.marginal_v().as_slice()),
        ];
        let res = accumulate_type_events(n, inst.p_v.len(), cap, &ln_dists, 1, |counts| {
            counts_typical(counts, n, inst.p_v.as_slice(), inst.v_slack) as u32
        })?;
        let alpha = -f64::exp_m1(res[0][0]);
        let log2_beta = res[1][0] / LN_2;
        return Ok(done(alpha, log2_beta, 0.0, 0.0));
    }

    match inst.regime {
        Regime::SublinearUses | Regime::StrictCost => {
            let t = inst.triple.ok_or(Error::RegimeMismatch {
                op: "evaluate_exact",
                regime: format!("{} without a disconnection triple", inst.regime),
            })?;
            let probs = branch_test_probabilities(inst, p_uv, q_uv, cap)?;
            let ln_heard = (-(1.0 - t.gamma_x0).powi(inst.k as i32)).ln_1p();
            let alpha = -f64::exp_m1(probs[0][EV_BRANCH_AND_TEST] + ln_heard);
            let log2_beta = (probs[1][EV_BRANCH_AND_TEST] + ln_heard) / LN_2;
            let (c_typ, c_atyp) = inst.branch_costs;
            let pa0 = probs[0][EV_BRANCH].exp();
            let pa1 = probs[1][EV_BRANCH].exp();
            let cost_h0 = pa0 * c_typ + (1.0 - pa0) * c_atyp;
            let cost_h1 = pa1 * c_typ + (1.0 - pa1) * c_atyp;
            Ok(done(alpha, log2_beta, cost_h0, cost_h1))
        }
        Regime::ExpectedCostH0 | Regime::ExpectedCostBoth => {
            let y_ref = inst.y_ref.as_ref().ok_or(Error::RegimeMismatch {
                op: "evaluate_exact",
                regime: format!("{} without output laws", inst.regime),
            })?;
            let y_alt = inst.y_alt.as_ref().ok_or(Error::RegimeMismatch {
                op: "evaluate_exact",
                regime: format!("{} without output laws", inst.regime),
            })?;
            let ln_rows = vec![ln_cells(y_ref.as_slice()), ln_cells(y_alt.as_slice())];
            let y_res = accumulate_type_events(n, y_ref.len(), cap, &ln_rows, 1, |counts| {
                counts_typical(counts, n, y_ref.as_slice(), inst.y_slack) as u32
            })?;
            let (ln_w_quiet, ln_w_loud) = (y_res[0][0], y_res[1][0]);
            let probs = branch_test_probabilities(inst, p_uv, q_uv, cap)?;
            let ln_accept = |h: usize| {
                let mut acc = LogSumAcc::new();
                acc.add(probs[h][EV_BRANCH_AND_TEST] + ln_w_quiet);
                acc.add(probs[h][EV_NOT_BRANCH_AND_TEST] + ln_w_loud);
                acc.ln_total()
            };
            let alpha = -f64::exp_m1(ln_accept(0));
            let log2_beta = ln_accept(1) / LN_2;
            let loud_cost = inst.branch_costs.1;
            let cost_h0 = -f64::exp_m1(probs[0][EV_BRANCH]) * loud_cost;
            let cost_h1 = -f64::exp_m1(probs[1][EV_BRANCH]) * loud_cost;
            Ok(done(alpha, log2_beta, cost_h0, cost_h1))
        }
        Regime::LocalOnly => unreachable!("handled above"),
    }
}

/// Integer trial outcomes of a contiguous block of Monte Carlo trials.
///
/// Counts are a pure function of the master seed and the trial indices, so
/// splitting a range into blocks and merging gives identical integers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialCounts {
    pub trials: u64,
    pub rejections_h0: u64,
    pub acceptances_h1: u64,
    pub cost_sum_h0: f64,
    pub cost_sum_h1: f64,
}

impl TrialCounts {
    pub fn merge(&mut self, other: &TrialCounts) {
        self.trials += other.trials;
        self.rejections_h0 += other.rejections_h0;
        self.acceptances_h1 += other.acceptances_h1;
        self.cost_sum_h0 += other.cost_sum_h0;
        self.cost_sum_h1 += other.cost_sum_h1;
    }
}

fn cumulative(cells: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cum: Vec<f64> = cells
        .iter()
        .map(|&p| {
            acc += p;
            acc
        })
        .collect();
    if let Some(last) = cum.last_mut() {
        *last = 1.0;
    }
    cum
}

fn draw(rng: &mut ChaCha8Rng, cum: &[f64]) -> usize {
    let r: f64 = rng.gen();
    cum.iter().position(|&c| r < c).unwrap_or(cum.len() - 1)
}

/// Runs the trial indices in `range` and returns their raw outcomes.
///
/// Each trial runs both hypotheses from its own deterministic RNG stream
/// derived from `(seed, trial index, hypothesis)`, so any partition of the
/// index range reproduces the same per-trial randomness.
pub fn simulate_block(
    inst: &SchemeInstance,
    p_uv: &JointPmf,
    q_uv: &JointPmf,
    ch: &Dmc,
    cost: &CostFunction,
    seed: u64,
    range: Range<u64>,
) -> Result<TrialCounts> {
    check_shapes(inst, p_uv, q_uv)?;
    if ch.inputs() != cost.len() {
        return Err(Error::ShapeMismatch {
            op: "simulate: channel inputs",
            expected: cost.len(),
            got: ch.inputs(),
        });
    }
    let n = inst.n;
    let nv = inst.p_v.len();
    let cum_joint = [cumulative(p_uv.as_slice()), cumulative(q_uv.as_slice())];
    let cum_rows: Vec<Vec<f64>> = (0..ch.inputs()).map(|x| cumulative(ch.row(x))).collect();

    let mut counts = TrialCounts::default();
    let mut u_seq = vec![0usize; n];
    let mut v_seq = vec![0usize; n];
    for trial in range {
        counts.trials += 1;
        for hyp in 0..2u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(2 * trial + hyp);
            let cum = &cum_joint[hyp as usize];
            for i in 0..n {
                let cell = draw(&mut rng, cum);
                u_seq[i] = cell / nv;
                v_seq[i] = cell % nv;
            }
            let x_seq = encode(inst, &u_seq)?;
            let y_seq: Vec<usize> = x_seq.iter().map(|&x| draw(&mut rng, &cum_rows[x])).collect();
            let accept = decide(inst, &v_seq, &y_seq)?;
            let block_cost = cost.sequence_cost(&x_seq);
            if hyp == 0 {
                counts.cost_sum_h0 += block_cost;
                if !accept {
                    counts.rejections_h0 += 1;
                }
            } else {
                counts.cost_sum_h1 += block_cost;
                if accept {
                    counts.acceptances_h1 += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// Estimates a scheme instance's error probabilities and costs by Monte
/// Carlo simulation of `trials` independent trials per hypothesis.
pub fn simulate(
    inst: &SchemeInstance,
    p_uv: &JointPmf,
    q_uv: &JointPmf,
    ch: &Dmc,
    cost: &CostFunction,
    seed: u64,
    trials: u64,
) -> Result<EvaluationResult> {
    if trials == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let counts = simulate_block(inst, p_uv, q_uv, ch, cost, seed, 0..trials)?;
    let t = trials as f64;
    let alpha = counts.rejections_h0 as f64 / t;
    let beta = counts.acceptances_h1 as f64 / t;
    let halfwidth = |p: f64| 1.96 * (p * (1.0 - p) / t).sqrt();
    let (log2_beta, beta_ci, upper) = if counts.acceptances_h1 == 0 {
        ((-(0.05f64.powf(1.0 / t))).ln_1p() / LN_2, 0.0, true)
    } else {
        (beta.log2(), halfwidth(beta), false)
    };
    Ok(EvaluationResult {
        regime: inst.regime,
        n: inst.n,
        alpha,
        log2_beta,
        expected_cost_h0: counts.cost_sum_h0 / t,
        expected_cost_h1: counts.cost_sum_h1 / t,
        method: EvalMethod::MonteCarlo,
        trials: Some(trials),
        alpha_ci_halfwidth: Some(halfwidth(alpha)),
        beta_ci_halfwidth: Some(beta_ci),
        beta_is_upper_bound: upper,
    })
}

/// Least-squares fit of an error exponent from `(n, log2_beta)` points.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentFit {
    /// Fitted decay rate: `log2_beta ~ -exponent * n + intercept`.
    pub exponent: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    /// Points with finite `log2_beta` that entered the fit.
    pub points_used: usize,
}

/// Fits a straight line to `log2_beta` against `n` and returns the negated
/// slope. Non-finite points (impossible acceptance, underflow) are dropped;
/// at least three finite points on at least two distinct blocklengths are
/// required.
pub fn fit_exponent(points: &[(usize, f64)]) -> Result<ExponentFit> {
    let finite: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, y)| y.is_finite())
        .map(|&(n, y)| (n as f64, y))
        .collect();
    if finite.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: finite.len(),
        });
    }
    let len = finite.len() as f64;
    let mean_x = finite.iter().map(|&(x, _)| x).sum::<f64>() / len;
    let mean_y = finite.iter().map(|&(_, y)| y).sum::<f64>() / len;
    let sxx: f64 = finite.iter().map(|&(x, _)| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: 2, got: 1 });
    }
    let sxy: f64 = finite
        .iter()
        .map(|&(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rss: f64 = finite
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    Ok(ExponentFit {
        exponent: -slope,
        intercept,
        rms_residual: (rss / len).sqrt(),
        points_used: finite.len(),
    })
}

/// How a cost-constrained instance spends its budget.
#[derive(Debug, Clone, Serialize)]
pub struct CostAudit {
    pub regime: Regime,
    pub n: usize,
    pub budget: f64,
    /// Largest cost any single realization can incur.
    pub max_realized_cost: f64,
    /// Exact probability of the expensive encoder branch under each
    /// hypothesis.
    pub loud_probability_h0: f64,
    pub loud_probability_h1: f64,
    /// Concentration bound on the loud-branch probability that the slack
    /// choice of the expected-cost schemes is built around; `None` for the
    /// strict regime, whose budget holds on every realization.
    pub chebyshev_loud_bound: Option<f64>,
    pub expected_cost_h0: f64,
    pub expected_cost_h1: f64,
    /// Whether the costs the regime constrains stay within the budget.
    pub within_budget: bool,
}

/// Audits a cost-constrained instance: exact branch probabilities, expected
/// costs, worst-case cost, and the budget verdict.
///
/// Only the cost regimes carry a budget; auditing a local-only, fallback or
/// sublinear-uses instance is a [`Error::RegimeMismatch`].
pub fn audit_cost(
    inst: &SchemeInstance,
    p_uv: &JointPmf,
    q_uv: &JointPmf,
    cap: u64,
) -> Result<CostAudit> {
    check_shapes(inst, p_uv, q_uv)?;
    let budget = match (inst.cost_budget, inst.regime) {
        (Some(b), Regime::StrictCost | Regime::ExpectedCostH0 | Regime::ExpectedCostBoth)
            if !inst.local_fallback =>
        {
            b
        }
        _ => {
            return Err(Error::RegimeMismatch {
                op: "audit_cost",
                regime: inst.regime.to_string(),
            })
        }
    };
    let n = inst.n;
    let ln_dists = vec![
        ln_cells(p_uv.marginal_u().as_slice()),
        ln_cells(q_uv.marginal_u().as_slice()),
    ];
    let res = accumulate_type_events(n, inst.p_u.len(), cap, &ln_dists, 1, |counts| {
        branch_counts_typical(inst, counts, n) as u32
    })?;
    let off_branch_h0 = (-f64::exp_m1(res[0][0])).clamp(0.0, 1.0);
    let off_branch_h1 = (-f64::exp_m1(res[1][0])).clamp(0.0, 1.0);
    let (c_typ, c_atyp) = inst.branch_costs;
    let (loud_h0, loud_h1) = if c_typ > c_atyp {
        (1.0 - off_branch_h0, 1.0 - off_branch_h1)
    } else {
        (off_branch_h0, off_branch_h1)
    };
    let expected_cost_h0 = (1.0 - off_branch_h0) * c_typ + off_branch_h0 * c_atyp;
    let expected_cost_h1 = (1.0 - off_branch_h1) * c_typ + off_branch_h1 * c_atyp;
    let max_realized_cost = c_typ.max(c_atyp);
    let tol = 1e-9 * budget.max(1.0);
    let (chebyshev, within) = match inst.regime {
        Regime::StrictCost => (None, max_realized_cost <= budget + tol),
        Regime::ExpectedCostH0 => {
            let bound = (inst.p_u.len() as f64 / (4.0 * inst.u_slack.powi(2) * n as f64)).min(1.0);
            (Some(bound), expected_cost_h0 <= budget + tol)
        }
        Regime::ExpectedCostBoth => {
            let bound = (inst.p_u.len() as f64 / (4.0 * inst.u_slack.powi(2) * n as f64)).min(1.0);
            (
                Some(bound),
                expected_cost_h0 <= budget + tol && expected_cost_h1 <= budget + tol,
            )
        }
        _ => unreachable!("filtered above"),
    };
    Ok(CostAudit {
        regime: inst.regime,
        n,
        budget,
        max_realized_cost,
        loud_probability_h0: loud_h0,
        loud_probability_h1: loud_h1,
        chebyshev_loud_bound: chebyshev,
        expected_cost_h0,
        expected_cost_h1,
        within_budget: within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{resolve_instance, Schedules};

    fn z_channel() -> Dmc {
        Dmc::from_rows(vec![vec![1.0, 0.0], vec![0.1, 0.9]]).unwrap()
    }

    fn bsc(eps: f64) -> Dmc {
        Dmc::from_rows(vec![vec![1.0 - eps, eps], vec![eps, 1.0 - eps]]).unwrap()
    }

    fn problem() -> (JointPmf, JointPmf, CostFunction) {
        let p = JointPmf::from_rows(vec![vec![0.35, 0.15], vec![0.10, 0.40]]).unwrap();
        let q = JointPmf::from_rows(vec![vec![0.30, 0.20], vec![0.25, 0.25]]).unwrap();
        let cost = CostFunction::new(vec![0.0, 1.0], 0).unwrap();
        (p, q, cost)
    }

    fn instance(regime: Regime, n: usize, ch: &Dmc, mu: Option<f64>) -> SchemeInstance {
        let (p, q, cost) = problem();
        resolve_instance(regime, n, &p, &q, ch, &cost, &Schedules::default(), mu).unwrap()
    }

    /// Independent oracle: walks every `(u, v)` sequence of length `n` and
    /// sums the probability of the acceptance event directly.
    fn brute_force_accept(
        inst: &SchemeInstance,
        joint: &JointPmf,
        channel_factor: impl Fn(bool) -> f64,
    ) -> f64 {
        let nu = joint.nu();
        let nv = joint.nv();
        let cells = nu * nv;
        let n = inst.n;
        let mut seq = vec![0usize; n];
        let mut total = 0.0;
        loop {
            let mut prob = 1.0;
            let mut u_counts = vec![0usize; nu];
            let mut v_counts = vec![0usize; nv];
            for &cell in &seq {
                prob *= joint.as_slice()[cell];
                u_counts[cell / nv] += 1;
                v_counts[cell % nv] += 1;
            }
            if prob > 0.0 {
                let a = branch_counts_typical(inst, &u_counts, n);
                let b = counts_typical(&v_counts, n, inst.p_v.as_slice(), inst.v_slack);
                if b {
                    total += prob * channel_factor(a);
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return total;
                }
                seq[i] += 1;
                if seq[i] < cells {
                    break;
                }
                seq[i] = 0;
                i += 1;
            }
        }
    }

    /// Exact probability that an i.i.d. binary block of length `n` with
    /// ones-probability `p1` is strongly typical for `refp` with slack `mu`.
    fn binary_typical_prob(p1: f64, refp: &[f64], mu: f64, n: usize) -> f64 {
        let mut total = 0.0;
        for ones in 0..=n {
            if counts_typical(&[n - ones, ones], n, refp, mu) {
                let ln = crate::typicality::log_multinomial(&[n - ones, ones])
                    + ones as f64 * p1.ln()
                    + (n - ones) as f64 * (1.0 - p1).ln();
                total += ln.exp();
            }
        }
        total
    }

    #[test]
    fn local_test_matches_direct_binomial_sum() {
        let (p, q, _) = problem();
        let n = 40;
        let inst = instance(Regime::LocalOnly, n, &bsc(0.1), None);
        let res = evaluate_exact(&inst, &p, &q).unwrap();
        let accept_p = binary_typical_prob(0.55, inst.p_v.as_slice(), inst.v_slack, n);
        let accept_q = binary_typical_prob(0.45, inst.p_v.as_slice(), inst.v_slack, n);
        assert!((res.alpha - (1.0 - accept_p)).abs() < 1e-12);
        assert!((res.beta() - accept_q).abs() < 1e-12);
        assert_eq!(res.expected_cost_h0, 0.0);
        assert_eq!(res.expected_cost_h1, 0.0);
    }

    #[test]
    fn sublinear_uses_matches_sequence_enumeration() {
        let (p, q, _) = problem();
        let n = 8;
        let inst = instance(Regime::SublinearUses, n, &z_channel(), Some(0.2));
        let t = inst.triple.unwrap();
        let heard = 1.0 - (1.0 - t.gamma_x0).powi(inst.k as i32);
        let factor = |a: bool| if a { heard } else { 0.0 };
        let res = evaluate_exact(&inst, &p, &q).unwrap();
        let accept_p = brute_force_accept(&inst, &p, &factor);
        let accept_q = brute_force_accept(&inst, &q, &factor);
        assert!((res.alpha - (1.0 - accept_p)).abs() < 1e-12);
        assert!((res.beta() - accept_q).abs() < 1e-12);
    }

    #[test]
    fn expected_cost_matches_sequence_enumeration() {
        let (p, q, _) = problem();
        let n = 8;
        let ch = bsc(0.1);
        for regime in [Regime::ExpectedCostH0, Regime::ExpectedCostBoth] {
            let inst = instance(regime, n, &ch, None);
            let w_quiet =
                binary_typical_prob(0.1, inst.y_ref.as_ref().unwrap().as_slice(), inst.y_slack, n);
            let w_loud =
                binary_typical_prob(0.9, inst.y_ref.as_ref().unwrap().as_slice(), inst.y_slack, n);
            let factor = |a: bool| if a { w_quiet } else { w_loud };
            let res = evaluate_exact(&inst, &p, &q).unwrap();
            let accept_p = brute_force_accept(&inst, &p, &factor);
            let accept_q = brute_force_accept(&inst, &q, &factor);
            assert!((res.alpha - (1.0 - accept_p)).abs() < 1e-12);
            assert!((res.beta() - accept_q).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_hypotheses_force_alpha_plus_beta_one() {
        let (p, _, _) = problem();
        for (regime, ch) in [
            (Regime::LocalOnly, bsc(0.1)),
            (Regime::SublinearUses, z_channel()),
            (Regime::StrictCost, z_channel()),
            (Regime::ExpectedCostH0, bsc(0.1)),
            (Regime::ExpectedCostBoth, bsc(0.1)),
        ] {
            let (pp, _, cost) = problem();
            let inst =
                resolve_instance(regime, 60, &pp, &pp, &ch, &cost, &Schedules::default(), None)
                    .unwrap();
            let res = evaluate_exact(&inst, &p, &p).unwrap();
            assert!(
                (res.alpha + res.beta() - 1.0).abs() < 1e-12,
                "{regime}: alpha {} beta {}",
                res.alpha,
                res.beta()
            );
        }
    }

    #[test]
    fn strict_cost_ignores_padding_in_the_exact_count() {
        let (p, q, _) = problem();
        let n = 30;
        let inst = instance(Regime::StrictCost, n, &z_channel(), None);
        assert!(inst.k < n);
        let sub = {
            let (pp, qq, cost) = problem();
            let mut s = resolve_instance(
                Regime::SublinearUses,
                n,
                &pp,
                &qq,
                &z_channel(),
                &cost,
                &Schedules::default(),
                None,
            )
            .unwrap();
            s.k = inst.k;
            s
        };
        let a = evaluate_exact(&inst, &p, &q).unwrap();
        let b = evaluate_exact(&sub, &p, &q).unwrap();
        assert!((a.alpha - b.alpha).abs() < 1e-14);
        assert!((a.log2_beta - b.log2_beta).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_agrees_with_exact_within_confidence() {
        let (p, q, cost) = problem();
        let n = 40;
        let trials = 4000u64;
        for (regime, ch) in [
            (Regime::SublinearUses, z_channel()),
            (Regime::ExpectedCostH0, bsc(0.1)),
            (Regime::LocalOnly, bsc(0.1)),
        ] {
            let inst = instance(regime, n, &ch, Some(0.1));
            let exact = evaluate_exact(&inst, &p, &q).unwrap();
            let mc = simulate(&inst, &p, &q, &ch, &cost, 7, trials).unwrap();
            let slack = |v: f64| 4.0 * (v * (1.0 - v) / trials as f64).sqrt() + 4.0 / trials as f64;
            assert!(
                (mc.alpha - exact.alpha).abs() <= slack(exact.alpha),
                "{regime}: mc alpha {} vs exact {}",
                mc.alpha,
                exact.alpha
            );
            assert!(
                (mc.beta() - exact.beta()).abs() <= slack(exact.beta()),
                "{regime}: mc beta {} vs exact {}",
                mc.beta(),
                exact.beta()
            );
            assert!(
                (mc.expected_cost_h0 - exact.expected_cost_h0).abs()
                    <= 0.05 * exact.expected_cost_h0.max(1.0)
            );
        }
    }

    #[test]
    fn trial_counts_are_partition_invariant() {
        let (p, q, cost) = problem();
        let inst = instance(Regime::ExpectedCostH0, 50, &bsc(0.1), None);
        let ch = bsc(0.1);
        let whole = simulate_block(&inst, &p, &q, &ch, &cost, 99, 0..600).unwrap();
        let mut merged = simulate_block(&inst, &p, &q, &ch, &cost, 99, 0..251).unwrap();
        merged.merge(&simulate_block(&inst, &p, &q, &ch, &cost, 99, 251..600).unwrap());
        assert_eq!(whole.trials, merged.trials);
        assert_eq!(whole.rejections_h0, merged.rejections_h0);
        assert_eq!(whole.acceptances_h1, merged.acceptances_h1);
        assert!((whole.cost_sum_h0 - merged.cost_sum_h0).abs() < 1e-6);
        assert!((whole.cost_sum_h1 - merged.cost_sum_h1).abs() < 1e-6);
    }

    #[test]
    fn zero_acceptances_report_an_upper_bound() {
        let p = JointPmf::from_rows(vec![vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        let q = JointPmf::from_rows(vec![vec![0.495, 0.005], vec![0.495, 0.005]]).unwrap();
        let cost = CostFunction::new(vec![0.0, 1.0], 0).unwrap();
        let ch = bsc(0.1);
        let inst = resolve_instance(
            Regime::LocalOnly,
            51,
            &p,
            &q,
            &ch,
            &cost,
            &Schedules::default(),
            Some(0.005),
        )
        .unwrap();
        let trials = 200u64;
        let mc = simulate(&inst, &p, &q, &ch, &cost, 3, trials).unwrap();
        assert_eq!(mc.alpha, 1.0);
        assert!(mc.beta_is_upper_bound);
        let bound = (1.0 - 0.05f64.powf(1.0 / trials as f64)).log2();
        assert!((mc.log2_beta - bound).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_synthetic_decay_rates() {
        let line: Vec<(usize, f64)> = (1..=5).map(|i| (100 * i, -0.25 * (100 * i) as f64 + 3.0)).collect();
        let fit = fit_exponent(&line).unwrap();
        assert!((fit.exponent - 0.25).abs() < 1e-12);
        assert!((fit.intercept - 3.0).abs() < 1e-9);
        assert!(fit.rms_residual < 1e-9);

        let poly: Vec<(usize, f64)> = (1..=5)
            .map(|i| {
                let n = 100 * i;
                (n, -0.3 * n as f64 + 4.0 * ((n + 1) as f64).log2())
            })
            .collect();
        let fit = fit_exponent(&poly).unwrap();
        assert!((fit.exponent - 0.27753).abs() < 5e-5);
        assert!((fit.exponent - 0.3).abs() < 0.03);

        let mut with_inf = poly.clone();
        with_inf.push((600, f64::NEG_INFINITY));
        let fit2 = fit_exponent(&with_inf).unwrap();
        assert_eq!(fit2.points_used, 5);
        assert!((fit2.exponent - fit.exponent).abs() < 1e-15);

        assert!(matches!(
            fit_exponent(&poly[..2]),
            Err(Error::InsufficientData { .. })
        ));
        let degenerate = vec![(100, -1.0), (100, -2.0), (100, -3.0)];
        assert!(matches!(
            fit_exponent(&degenerate),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn cost_audit_closes_the_expected_cost_algebra() {
        let (p, q, _) = problem();
        let n = 100;
        let ch = bsc(0.1);
        for regime in [Regime::ExpectedCostH0, Regime::ExpectedCostBoth] {
            let inst = instance(regime, n, &ch, None);
            let audit = audit_cost(&inst, &p, &q, DEFAULT_TYPE_CAP).unwrap();
            let bound = audit.chebyshev_loud_bound.unwrap();
            // The slack is chosen so the concentration bound spends exactly
            // the budget: bound * n * c(x_hat) = C_n.
            assert!((bound * inst.branch_costs.1 - audit.budget).abs() < 1e-9);
            assert!(audit.loud_probability_h0 <= bound + 1e-12);
            assert!(audit.expected_cost_h0 <= audit.budget + 1e-9);
            assert!(audit.within_budget, "{regime}");
            assert_eq!(audit.max_realized_cost, inst.branch_costs.1);
        }
    }

    #[test]
    fn strict_audit_bounds_every_realization() {
        let (p, q, _) = problem();
        let inst = instance(Regime::StrictCost, 100, &z_channel(), None);
        let audit = audit_cost(&inst, &p, &q, DEFAULT_TYPE_CAP).unwrap();
        assert!(audit.max_realized_cost <= audit.budget + 1e-9);
        assert!(audit.within_budget);
        assert!(audit.chebyshev_loud_bound.is_none());
        assert!(audit.expected_cost_h0 <= audit.max_realized_cost);
    }

    #[test]
    fn auditing_an_unbudgeted_regime_is_rejected() {
        let (p, q, _) = problem();
        for (regime, ch) in [
            (Regime::LocalOnly, bsc(0.1)),
            (Regime::SublinearUses, z_channel()),
            (Regime::StrictCost, bsc(0.1)),
        ] {
            let inst = instance(regime, 50, &ch, None);
            assert!(matches!(
                audit_cost(&inst, &p, &q, DEFAULT_TYPE_CAP),
                Err(Error::RegimeMismatch { .. })
            ));
        }
    }

    #[test]
    fn evaluation_rejects_mismatched_shapes() {
        let (p, q, _) = problem();
        let inst = instance(Regime::LocalOnly, 20, &bsc(0.1), None);
        let wide = JointPmf::from_rows(vec![
            vec![0.2, 0.1, 0.1],
            vec![0.2, 0.2, 0.2],
        ])
        .unwrap();
        assert!(matches!(
            evaluate_exact(&inst, &wide, &q),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            evaluate_exact(&inst, &p, &wide),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn type_cap_propagates_as_resource_limit() {
        let (p, q, _) = problem();
        let inst = instance(Regime::SublinearUses, 200, &z_channel(), None);
        assert!(matches!(
            evaluate_exact_with_cap(&inst, &p, &q, 10),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn beta_helper_round_trips_log2() {
        let (p, q, _) = problem();
        let inst = instance(Regime::LocalOnly, 30, &bsc(0.1), None);
        let res = evaluate_exact(&inst, &p, &q).unwrap();
        assert!((res.beta().log2() - res.log2_beta).abs() < 1e-12);
    }
}
