//! The achievability schemes: resource schedules, per-blocklength scheme
//! instances, encoders and decision rules.
//!
//! All schemes share one shape. The sensor applies a typicality test to its
//! own observation block and communicates the one-bit outcome through the
//! channel as cheaply as the regime allows; the decision center combines
//! what it can read off the channel output with a typicality test on its own
//! block. The regimes differ only in how the bit is physically carried:
//!
//! * `SublinearUses` - `k(n)` channel uses, `k(n) = o(n)`: repeat one of two
//!   input symbols from a disconnection triple; the sure symbol `y*` can
//!   appear only under the typical branch.
//! * `StrictCost` - cost budget `C_n = o(n)` enforced on every realization:
//!   the same signal embedded into the first `k''` slots, padded with the
//!   free symbol, `k''` sized so both branches fit the budget.
//! * `ExpectedCostH0` / `ExpectedCostBoth` - cost budget in expectation: stay
//!   on the free symbol on the typical branch (cost 0) and jump to the most
//!   distinguishable symbol `x_hat` otherwise; the center reads the branch
//!   off the output empirical type. The `Both` variant also stays free when
//!   the block looks like the alternative, protecting the cost constraint
//!   under either hypothesis.
//! * `LocalOnly` - no communication at all; also the fallback behavior when
//!   a fully connected channel makes the sure-symbol schemes impossible.

use crate::channel::{best_binary_relay_exponent, classify, DisconnectionTriple};
use crate::error::{Error, Result};
use crate::prob::{CostFunction, Dmc, JointPmf, Pmf};
use crate::typicality::{counts_typical, EmpiricalType};
use serde::{Deserialize, Serialize};

/// Default typicality slack for the fixed-slack regimes.
pub const DEFAULT_MU: f64 = 0.05;

/// Communication regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SublinearUses,
    StrictCost,
    ExpectedCostH0,
    ExpectedCostBoth,
    LocalOnly,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::SublinearUses => "sublinear_uses",
            Regime::StrictCost => "strict_cost",
            Regime::ExpectedCostH0 => "expected_cost_h0",
            Regime::ExpectedCostBoth => "expected_cost_both",
            Regime::LocalOnly => "local_only",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A resource schedule: either channel uses `k(n)` or a cost budget `C_n`
/// as a function of the blocklength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// `sqrt(n)`, rounded up when used as a number of channel uses.
    SqrtN,
    /// `log2(n)`, rounded up (and floored at 1) when used as channel uses.
    LogN,
    /// Explicit per-blocklength table; every grid point must be present.
    Custom { table: Vec<(usize, f64)> },
}

impl Schedule {
    /// The raw schedule value at blocklength `n` (used as a cost budget).
    pub fn value(&self, n: usize) -> Result<f64> {
        let v = match self {
            Schedule::SqrtN => (n as f64).sqrt(),
            Schedule::LogN => (n as f64).log2(),
            Schedule::Custom { table } => table
                .iter()
                .find(|&&(m, _)| m == n)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::ScheduleViolation {
                    detail: format!("custom schedule has no entry for n = {n}"),
                })?,
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::ScheduleViolation {
                detail: format!("schedule value at n = {n} is {v}, must be positive"),
            });
        }
        Ok(v)
    }

    /// The schedule value as a number of channel uses (a positive integer).
    pub fn uses(&self, n: usize) -> Result<usize> {
        let v = self.value(n)?;
        let k = match self {
            Schedule::SqrtN | Schedule::LogN => v.ceil().max(1.0),
            Schedule::Custom { .. } => {
                if (v - v.round()).abs() > 1e-9 {
                    return Err(Error::ScheduleViolation {
                        detail: format!("channel-use schedule at n = {n} is {v}, not an integer"),
                    });
                }
                v.round()
            }
        };
        Ok(k as usize)
    }

    /// Sanity-checks sublinear growth on a blocklength grid: the schedule
    /// must not shrink between the first and last grid point, and its ratio
    /// to `n` must strictly decrease (a finite grid cannot certify the
    /// limits, so constants are allowed; linear growth is not).
    pub fn check_sublinear(&self, grid: &[usize], what: &str) -> Result<()> {
        if grid.is_empty() {
            return Err(Error::ScheduleViolation {
                detail: format!("{what}: empty blocklength grid"),
            });
        }
        let first = *grid.first().unwrap();
        let last = *grid.last().unwrap();
        let vf = self.value(first)?;
        let vl = self.value(last)?;
        if last > first {
            if vl < vf {
                return Err(Error::ScheduleViolation {
                    detail: format!("{what} shrinks from {vf} at n = {first} to {vl} at n = {last}"),
                });
            }
            if vl / last as f64 >= vf / first as f64 {
                return Err(Error::ScheduleViolation {
                    detail: format!(
                        "{what} is not sublinear on the grid: {vf}/{first} vs {vl}/{last}"
                    ),
                });
            }
        }
        Ok(())
    }
}

/// The pair of schedules an experiment needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedules {
    /// Channel uses `k(n)` for the sublinear-uses regime.
    pub uses: Schedule,
    /// Cost budget `C_n` for the cost-constrained regimes.
    pub cost: Schedule,
}

impl Default for Schedules {
    fn default() -> Self {
        Schedules {
            uses: Schedule::SqrtN,
            cost: Schedule::SqrtN,
        }
    }
}

/// A fully resolved scheme at one blocklength: every parameter the encoder,
/// the decision rule and the evaluators need.
#[derive(Debug, Clone)]
pub struct SchemeInstance {
    pub regime: Regime,
    pub n: usize,
    /// True when a fully connected channel forced the sure-symbol scheme to
    /// degrade to the local test.
    pub local_fallback: bool,
    /// Signal length: channel uses that carry the sensor's bit.
    pub k: usize,
    /// `ceil(C_n / c_min)`, the channel-use budget the strict-cost budget
    /// could buy in the worst case (diagnostic only).
    pub k_prime: Option<usize>,
    /// Cost budget `C_n` for the cost regimes.
    pub cost_budget: Option<f64>,
    /// Typicality slack of the sensor's test.
    pub u_slack: f64,
    /// Typicality slack of the center's test on `V`.
    pub v_slack: f64,
    /// Typicality slack of the center's test on the channel output block
    /// (expected-cost regimes).
    pub y_slack: f64,
    pub triple: Option<DisconnectionTriple>,
    pub x_hat: Option<usize>,
    pub zero_symbol: usize,
    pub p_u: Pmf,
    /// Alternative sensor marginal (the extra accept branch of `Both`).
    pub q_u: Option<Pmf>,
    pub p_v: Pmf,
    /// Output law of the free symbol (reference of the center's Y test).
    pub y_ref: Option<Pmf>,
    /// Output law of `x_hat` (needed to evaluate the Y test exactly).
    pub y_alt: Option<Pmf>,
    /// Total input cost on the (typical, atypical) encoder branch.
    pub branch_costs: (f64, f64),
}

impl SchemeInstance {
    /// Length of the channel input block this instance transmits.
    pub fn input_len(&self) -> usize {
        if self.local_fallback {
            return 0;
        }
        match self.regime {
            Regime::SublinearUses => self.k,
            Regime::StrictCost | Regime::ExpectedCostH0 | Regime::ExpectedCostBoth => self.n,
            Regime::LocalOnly => 0,
        }
    }

    fn requires_triple(&self) -> bool {
        !self.local_fallback
            && matches!(self.regime, Regime::SublinearUses | Regime::StrictCost)
    }
}

/// Whether `k` repetitions of the sure-symbol signal satisfy a type-I target
/// `epsilon`: the only way the typical branch is missed is `y*` never
/// appearing, which happens with probability `(1 - gamma_x0)^k`.
pub fn finite_k_feasibility(gamma_x0: f64, k: usize, epsilon: f64) -> bool {
    epsilon >= (1.0 - gamma_x0).powi(k as i32)
}

/// Resolves a regime at blocklength `n` into a concrete scheme instance.
///
/// `mu` overrides the typicality slack: for the fixed-slack regimes it
/// defaults to [`DEFAULT_MU`]; for the expected-cost regimes the sensor and
/// output slacks are tied to `mu_n = sqrt(|U| c(x_hat) / (4 C_n))` by design,
/// and `mu` overrides only the center's `V` slack (default `mu_n`).
///
/// Requesting a sure-symbol regime on a fully connected channel is not an
/// error: the instance degrades to the local test with `local_fallback` set.
pub fn resolve_instance(
    regime: Regime,
    n: usize,
    p_uv: &JointPmf,
    q_uv: &JointPmf,
    ch: &Dmc,
    cost: &CostFunction,
    schedules: &Schedules,
    mu: Option<f64>,
) -> Result<SchemeInstance> {
    if n == 0 {
        return Err(Error::InvalidConfig {
            detail: "blocklength must be positive".into(),
        });
    }
    if cost.len() != ch.inputs() {
        return Err(Error::ShapeMismatch {
            op: "resolve_instance",
            expected: ch.inputs(),
            got: cost.len(),
        });
    }
    if let Some(m) = mu {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidConfig {
                detail: format!("typicality slack must be positive, got {m}"),
            });
        }
    }
    let (p_u, p_v) = p_uv.marginals();
    let zero = cost.zero_symbol();

    let local = |regime: Regime, fallback: bool, slack: f64| SchemeInstance {
        regime,
        n,
        local_fallback: fallback,
        k: 0,
        k_prime: None,
        cost_budget: None,
        u_slack: slack,
        v_slack: slack,
        y_slack: 0.0,
        triple: None,
        x_hat: None,
        zero_symbol: zero,
        p_u: p_u.clone(),
        q_u: None,
        p_v: p_v.clone(),
        y_ref: None,
        y_alt: None,
        branch_costs: (0.0, 0.0),
    };

    match regime {
        Regime::LocalOnly => Ok(local(regime, false, mu.unwrap_or(DEFAULT_MU))),
        Regime::SublinearUses => {
            let slack = mu.unwrap_or(DEFAULT_MU);
            let report = classify(ch)?;
            match report.triple {
                None => Ok(local(regime, true, slack)),
                Some(t) => {
                    let k = schedules.uses.uses(n)?;
                    Ok(SchemeInstance {
                        regime,
                        n,
                        local_fallback: false,
                        k,
                        k_prime: None,
                        cost_budget: None,
                        u_slack: slack,
                        v_slack: slack,
                        y_slack: 0.0,
                        triple: Some(t),
                        x_hat: None,
                        zero_symbol: zero,
                        p_u,
                        q_u: None,
                        p_v,
                        y_ref: None,
                        y_alt: None,
                        branch_costs: (
                            k as f64 * cost.cost(t.x0),
                            k as f64 * cost.cost(t.x1),
                        ),
                    })
                }
            }
        }
        Regime::StrictCost => {
            let slack = mu.unwrap_or(DEFAULT_MU);
            let report = classify(ch)?;
            match report.triple {
                None => Ok(local(regime, true, slack)),
                Some(t) => {
                    let budget = schedules.cost.value(n)?;
                    let dearest = cost.cost(t.x0).max(cost.cost(t.x1));
                    // Both branches must fit the budget on every realization,
                    // so the signal length is set by the dearer symbol.
                    let k = ((budget / dearest).floor() as usize).max(1).min(n);
                    let k_prime = (budget / cost.c_min()).ceil() as usize;
                    Ok(SchemeInstance {
                        regime,
                        n,
                        local_fallback: false,
                        k,
                        k_prime: Some(k_prime),
                        cost_budget: Some(budget),
                        u_slack: slack,
                        v_slack: slack,
                        y_slack: 0.0,
                        triple: Some(t),
                        x_hat: None,
                        zero_symbol: zero,
                        p_u,
                        q_u: None,
                        p_v,
                        y_ref: None,
                        y_alt: None,
                        branch_costs: (
                            k as f64 * cost.cost(t.x0),
                            k as f64 * cost.cost(t.x1),
                        ),
                    })
                }
            }
        }
        Regime::ExpectedCostH0 | Regime::ExpectedCostBoth => {
            let budget = schedules.cost.value(n)?;
            let (x_hat, _) = best_binary_relay_exponent(ch, cost)?;
            let mu_n = (p_u.len() as f64 * cost.cost(x_hat) / (4.0 * budget)).sqrt();
            let q_u = if regime == Regime::ExpectedCostBoth {
                Some(q_uv.marginal_u())
            } else {
                None
            };
            Ok(SchemeInstance {
                regime,
                n,
                local_fallback: false,
                k: n,
                k_prime: None,
                cost_budget: Some(budget),
                u_slack: mu_n,
                v_slack: mu.unwrap_or(mu_n),
                y_slack: mu_n,
                triple: None,
                x_hat: Some(x_hat),
                zero_symbol: zero,
                p_u,
                q_u,
                p_v,
                y_ref: Some(Pmf::new(ch.row(zero).to_vec())?),
                y_alt: Some(Pmf::new(ch.row(x_hat).to_vec())?),
                branch_costs: (0.0, n as f64 * cost.cost(x_hat)),
            })
        }
    }
}

/// True when a sensor block with these symbol counts takes the scheme's
/// quiet (typical) branch.
pub(crate) fn branch_counts_typical(inst: &SchemeInstance, counts: &[usize], n: usize) -> bool {
    if counts_typical(counts, n, inst.p_u.as_slice(), inst.u_slack) {
        return true;
    }
    match &inst.q_u {
        Some(q_u) => counts_typical(counts, n, q_u.as_slice(), inst.u_slack),
        None => false,
    }
}

/// True when the sensor block takes the scheme's quiet (typical) branch.
pub(crate) fn on_typical_branch(inst: &SchemeInstance, u_type: &EmpiricalType) -> bool {
    branch_counts_typical(inst, &u_type.counts, u_type.n)
}

/// Encodes a sensor block into a channel input block.
pub fn encode(inst: &SchemeInstance, u_seq: &[usize]) -> Result<Vec<usize>> {
    if u_seq.len() != inst.n {
        return Err(Error::ShapeMismatch {
            op: "encode",
            expected: inst.n,
            got: u_seq.len(),
        });
    }
    if inst.requires_triple() && inst.triple.is_none() {
        return Err(Error::RegimeMismatch {
            op: "encode",
            regime: format!("{} without a disconnection triple", inst.regime),
        });
    }
    if inst.local_fallback || inst.regime == Regime::LocalOnly {
        return Ok(Vec::new());
    }
    let u_type = EmpiricalType::of_sequence(u_seq, inst.p_u.len());
    let typical = on_typical_branch(inst, &u_type);
    match inst.regime {
        Regime::SublinearUses => {
            let t = inst.triple.unwrap();
            let symbol = if typical { t.x0 } else { t.x1 };
            Ok(vec![symbol; inst.k])
        }
        Regime::StrictCost => {
            let t = inst.triple.unwrap();
            let symbol = if typical { t.x0 } else { t.x1 };
            let mut x = vec![inst.zero_symbol; inst.n];
            x[..inst.k].fill(symbol);
            Ok(x)
        }
        Regime::ExpectedCostH0 | Regime::ExpectedCostBoth => {
            let symbol = if typical {
                inst.zero_symbol
            } else {
                inst.x_hat.expect("expected-cost instance carries x_hat")
            };
            Ok(vec![symbol; inst.n])
        }
        Regime::LocalOnly => unreachable!("handled above"),
    }
}

/// The decision center's rule: true accepts the null hypothesis.
///
/// `y_seq` must have the instance's [`SchemeInstance::input_len`]; for the
/// strict-cost scheme only the first `k` slots carry signal and only they are
/// searched for the sure symbol.
pub fn decide(inst: &SchemeInstance, v_seq: &[usize], y_seq: &[usize]) -> Result<bool> {
    if v_seq.len() != inst.n {
        return Err(Error::ShapeMismatch {
            op: "decide",
            expected: inst.n,
            got: v_seq.len(),
        });
    }
    if y_seq.len() != inst.input_len() {
        return Err(Error::ShapeMismatch {
            op: "decide",
            expected: inst.input_len(),
            got: y_seq.len(),
        });
    }
    if inst.requires_triple() && inst.triple.is_none() {
        return Err(Error::RegimeMismatch {
            op: "decide",
            regime: format!("{} without a disconnection triple", inst.regime),
        });
    }
    let v_type = EmpiricalType::of_sequence(v_seq, inst.p_v.len());
    let v_ok = counts_typical(&v_type.counts, v_type.n, inst.p_v.as_slice(), inst.v_slack);
    if inst.local_fallback || inst.regime == Regime::LocalOnly {
        return Ok(v_ok);
    }
    match inst.regime {
        Regime::SublinearUses | Regime::StrictCost => {
            let y_star = inst.triple.unwrap().y_star;
            let heard = y_seq[..inst.k].contains(&y_star);
            Ok(heard && v_ok)
        }
        Regime::ExpectedCostH0 | Regime::ExpectedCostBoth => {
            let y_ref = inst.y_ref.as_ref().expect("expected-cost instance carries y_ref");
            let y_type = EmpiricalType::of_sequence(y_seq, y_ref.len());
            let y_ok = counts_typical(&y_type.counts, y_type.n, y_ref.as_slice(), inst.y_slack);
            Ok(y_ok && v_ok)
        }
        Regime::LocalOnly => unreachable!("handled above"),
    }
}
