//! Structural analysis of a DMC: the connectivity dichotomy and the channel
//! diagnostics the exponent formulas depend on.
//!
//! The crate's central case split is whether some output symbol separates a
//! pair of inputs perfectly: a *disconnection triple* `(x0, x1, y*)` with
//! `Gamma(y*|x0) > 0` and `Gamma(y*|x1) = 0`. When one exists the channel is
//! partially connected and a single sure symbol can carry one noiseless bit
//! with vanishing resources; when none exists every output is possible under
//! every input and communication under a vanishing budget is worthless.

use crate::error::{Error, Result};
use crate::prob::{kl_bits_or_inf, CostFunction, Dmc, JointPmf};

/// A perfectly separating output: `Gamma(y_star | x0) = gamma_x0 > 0` while
/// `Gamma(y_star | x1) = 0`, so observing `y_star` rules out `x1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisconnectionTriple {
    pub x0: usize,
    pub x1: usize,
    pub y_star: usize,
    pub gamma_x0: f64,
}

/// Outcome of [`classify`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityReport {
    pub is_fully_connected: bool,
    pub triple: Option<DisconnectionTriple>,
}

/// Classifies a channel as fully or partially connected.
///
/// The returned triple is canonical: the smallest `(y, x1)` pair (in that
/// order) with a zero entry wins, and `x0` maximizes `Gamma(y_star | x0)`
/// among the remaining inputs, smallest index on ties. Channels with an
/// output no input can produce are rejected as degenerate.
pub fn classify(ch: &Dmc) -> Result<ConnectivityReport> {
    for y in 0..ch.outputs() {
        if (0..ch.inputs()).all(|x| ch.prob(y, x) == 0.0) {
            return Err(Error::DegenerateChannel { output: y });
        }
    }
    for y in 0..ch.outputs() {
        for x1 in 0..ch.inputs() {
            if ch.prob(y, x1) != 0.0 {
                continue;
            }
            let mut x0 = usize::MAX;
            let mut best = 0.0;
            for x in 0..ch.inputs() {
                if x != x1 && ch.prob(y, x) > best {
                    best = ch.prob(y, x);
                    x0 = x;
                }
            }
            // Degeneracy was excluded above, so some other input reaches y.
            return Ok(ConnectivityReport {
                is_fully_connected: false,
                triple: Some(DisconnectionTriple {
                    x0,
                    x1,
                    y_star: y,
                    gamma_x0: best,
                }),
            });
        }
    }
    Ok(ConnectivityReport {
        is_fully_connected: true,
        triple: None,
    })
}

/// Smallest transition probability over all `(x, y)` pairs.
pub fn gamma_min(ch: &Dmc) -> f64 {
    let mut min = f64::INFINITY;
    for x in 0..ch.inputs() {
        for y in 0..ch.outputs() {
            min = min.min(ch.prob(y, x));
        }
    }
    min
}

/// Smallest likelihood ratio `Gamma(y|x1) / Gamma(y|x2)` over distinct input
/// pairs; lies in `(0, 1]` and equals 1 only when all rows coincide.
///
/// Only defined for fully connected channels; a zero entry is reported as
/// [`Error::NotFullyConnected`].
pub fn gamma_quotient(ch: &Dmc) -> Result<f64> {
    for x in 0..ch.inputs() {
        for y in 0..ch.outputs() {
            if ch.prob(y, x) == 0.0 {
                return Err(Error::NotFullyConnected {
                    input: x,
                    output: y,
                });
            }
        }
    }
    let mut min = f64::INFINITY;
    for x1 in 0..ch.inputs() {
        for x2 in 0..ch.inputs() {
            if x1 == x2 {
                continue;
            }
            for y in 0..ch.outputs() {
                min = min.min(ch.prob(y, x1) / ch.prob(y, x2));
            }
        }
    }
    Ok(min.min(1.0))
}

/// Best one-bit relay signal: the non-free input whose output law is hardest
/// to confuse with the free symbol's, i.e. the maximizer of
/// `D(Gamma(.|zero) || Gamma(.|x))` over `x != zero`.
///
/// An infinite divergence (the candidate's row misses support the free row
/// has) is a legitimate winner and is returned as `f64::INFINITY`. Ties go to
/// the smallest input index.
pub fn best_binary_relay_exponent(ch: &Dmc, cost: &CostFunction) -> Result<(usize, f64)> {
    if cost.len() != ch.inputs() {
        return Err(Error::ShapeMismatch {
            op: "best_binary_relay_exponent",
            expected: ch.inputs(),
            got: cost.len(),
        });
    }
    if ch.inputs() < 2 {
        return Err(Error::InvalidConfig {
            detail: "relay signalling needs at least two input symbols".into(),
        });
    }
    let zero = cost.zero_symbol();
    let free_row = ch.row(zero);
    let mut best: Option<(usize, f64)> = None;
    for x in 0..ch.inputs() {
        if x == zero {
            continue;
        }
        let d = kl_bits_or_inf(free_row, ch.row(x));
        if best.map_or(true, |(_, b)| d > b) {
            best = Some((x, d));
        }
    }
    Ok(best.expect("at least one non-free input"))
}

/// True when the sensor's observation is already summarized by the center's:
/// `sum_v P_V(v) Q_{U|V}(u|v) = P_U(u)` for every `u`, within `1e-10`.
///
/// Under this condition no communication strategy can beat the local test,
/// over any channel. Expects a validated problem (`Q` strictly positive).
pub fn check_useless_communication_condition(p_uv: &JointPmf, q_uv: &JointPmf) -> bool {
    let p_u = p_uv.marginal_u();
    let p_v = p_uv.marginal_v();
    let q_v = q_uv.marginal_v();
    for u in 0..p_uv.nu() {
        let mut mixed = 0.0;
        for v in 0..p_uv.nv() {
            if q_v.get(v) > 0.0 {
                mixed += p_v.get(v) * q_uv.get(u, v) / q_v.get(v);
            }
        }
        if (mixed - p_u.get(u)).abs() > 1e-10 {
            return false;
        }
    }
    true
}
