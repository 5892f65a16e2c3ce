//! Independent verification routes for the optimization and evaluation
//! code paths.
//!
//! Each oracle solves the same problem as a production routine by a
//! different method: the divergence minimization over fixed marginals is
//! redone by scanning the one-dimensional transportation segment (2x2) and
//! by projected gradient descent with an alternating-projection step
//! (general shapes), and scheme evaluation is redone by exhaustively
//! enumerating every source realization and channel outcome. Agreement
//! between two routes that share no code is the evidence the test suite is
//! built on, so these implementations deliberately avoid the iterative
//! proportional fitting and type enumeration used in production.

use crate::error::{Error, Result};
use crate::prob::{CostFunction, Dmc, JointPmf};
use crate::schemes::{decide, encode, SchemeInstance};
use std::f64::consts::LN_2;

/// Grid resolution of the segment scan.
const SEGMENT_GRID_POINTS: usize = 1_000_000;

/// Work cap on `|source alphabets|^n * |outputs|^(input length)`.
const EXHAUSTIVE_CAP: f64 = 2e8;

fn check_target(target: &[f64], len: usize, what: &'static str) -> Result<()> {
    if target.len() != len {
        return Err(Error::ShapeMismatch {
            op: what,
            expected: len,
            got: target.len(),
        });
    }
    for (i, &t) in target.iter().enumerate() {
        if t < 0.0 || !t.is_finite() {
            return Err(Error::NegativeEntry {
                what,
                index: i,
                value: t,
            });
        }
    }
    let sum: f64 = target.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { what, sum });
    }
    Ok(())
}

fn kl_bits_cells(pi: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&p, &qq) in pi.iter().zip(q) {
        if p > 0.0 {
            acc += p * (p / qq).ln();
        }
    }
    (acc / LN_2).max(0.0)
}

/// Minimum of `D(pi || q)` in bits over 2x2 joint pmfs with the given
/// marginals, by brute force over the transportation segment.
///
/// With both marginals fixed, a 2x2 joint has one degree of freedom,
/// `t = pi(0,0)`, ranging over a closed interval. The objective is convex
/// in `t`, so a dense grid scan followed by golden-section refinement of
/// the best bracket nails the minimum.
pub fn segment_minimum_2x2(q: &JointPmf, target_u: &[f64], target_v: &[f64]) -> Result<f64> {
    if q.nu() != 2 || q.nv() != 2 {
        return Err(Error::ShapeMismatch {
            op: "segment_minimum_2x2",
            expected: 2,
            got: q.nu().max(q.nv()),
        });
    }
    check_target(target_u, 2, "segment oracle row marginal")?;
    check_target(target_v, 2, "segment oracle column marginal")?;
    let a = target_u[0];
    let b = target_v[0];
    let lo = (a + b - 1.0).max(0.0);
    let hi = a.min(b);
    let f = |t: f64| {
        let pi = [t, a - t, b - t, 1.0 - a - b + t];
        kl_bits_cells(&pi, q.as_slice())
    };
    if hi - lo < 1e-15 {
        return Ok(f(0.5 * (lo + hi)));
    }
    let span = hi - lo;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..=SEGMENT_GRID_POINTS {
        let t = lo + span * i as f64 / SEGMENT_GRID_POINTS as f64;
        let v = f(t);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let mut left = lo + span * best_i.saturating_sub(1) as f64 / SEGMENT_GRID_POINTS as f64;
    let mut right = lo + span * (best_i + 1).min(SEGMENT_GRID_POINTS) as f64
        / SEGMENT_GRID_POINTS as f64;
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = right - inv_phi * (right - left);
    let mut x2 = left + inv_phi * (right - left);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if right - left < 1e-16 {
            break;
        }
        if f1 <= f2 {
            right = x2;
            x2 = x1;
            f2 = f1;
            x1 = right - inv_phi * (right - left);
            f1 = f(x1);
        } else {
            left = x1;
            x1 = x2;
            f1 = f2;
            x2 = left + inv_phi * (right - left);
            f2 = f(x2);
        }
    }
    Ok(best.min(f1).min(f2))
}

fn affine_marginal_projection(z: &[f64], a: &[f64], b: &[f64], m: usize, k: usize) -> Vec<f64> {
    let mut row_deficit = vec![0.0; m];
    let mut col_deficit = vec![0.0; k];
    for i in 0..m {
        let s: f64 = z[i * k..(i + 1) * k].iter().sum();
        row_deficit[i] = a[i] - s;
    }
    for j in 0..k {
        let s: f64 = (0..m).map(|i| z[i * k + j]).sum();
        col_deficit[j] = b[j] - s;
    }
    let total: f64 = row_deficit.iter().sum();
    let mut out = vec![0.0; m * k];
    for i in 0..m {
        for j in 0..k {
            out[i * k + j] =
                z[i * k + j] + row_deficit[i] / k as f64 + col_deficit[j] / m as f64
                    - total / (m * k) as f64;
        }
    }
    out
}

/// Euclidean projection onto the transportation polytope (marginals `a`, `b`,
/// nonnegative cells) by Dykstra's alternating projections.
fn transport_projection(z: &[f64], a: &[f64], b: &[f64], m: usize, k: usize) -> Vec<f64> {
    let mut x = z.to_vec();
    let mut affine_corr = vec![0.0; m * k];
    let mut orthant_corr = vec![0.0; m * k];
    for _ in 0..5_000 {
        let shifted: Vec<f64> = x.iter().zip(&affine_corr).map(|(&v, &c)| v + c).collect();
        let y = affine_marginal_projection(&shifted, a, b, m, k);
        for i in 0..m * k {
            affine_corr[i] = shifted[i] - y[i];
        }
        let shifted2: Vec<f64> = y.iter().zip(&orthant_corr).map(|(&v, &c)| v + c).collect();
        let x_new: Vec<f64> = shifted2.iter().map(|&v| v.max(0.0)).collect();
        for i in 0..m * k {
            orthant_corr[i] = shifted2[i] - x_new[i];
        }
        let moved = x
            .iter()
            .zip(&x_new)
            .map(|(&u, &v)| (u - v).abs())
            .fold(0.0f64, f64::max);
        x = x_new;
        let feasible = {
            let mut dev = 0.0f64;
            for i in 0..m {
                let s: f64 = x[i * k..(i + 1) * k].iter().sum();
                dev = dev.max((s - a[i]).abs());
            }
            for j in 0..k {
                let s: f64 = (0..m).map(|i| x[i * k + j]).sum();
                dev = dev.max((s - b[j]).abs());
            }
            dev < 1e-13
        };
        if moved < 1e-15 && feasible {
            break;
        }
    }
    x
}

/// Minimum of `D(pi || q)` in bits over joint pmfs with the given marginals,
/// by projected gradient descent with Dykstra projections.
///
/// `q` must be strictly positive; the minimizer is then strictly positive
/// and the descent stays interior.
pub fn projected_descent_minimum(
    q: &JointPmf,
    target_u: &[f64],
    target_v: &[f64],
) -> Result<f64> {
    let m = q.nu();
    let k = q.nv();
    check_target(target_u, m, "descent oracle row marginal")?;
    check_target(target_v, k, "descent oracle column marginal")?;
    if !q.is_strictly_positive() {
        return Err(Error::InvalidConfig {
            detail: "descent oracle requires a strictly positive reference".into(),
        });
    }
    let qs = q.as_slice();
    let f = |pi: &[f64]| -> f64 {
        let mut acc = 0.0;
        for (&p, &qq) in pi.iter().zip(qs) {
            if p > 0.0 {
                acc += p * (p / qq).ln();
            }
        }
        acc
    };
    let mut pi: Vec<f64> = (0..m * k)
        .map(|idx| target_u[idx / k] * target_v[idx % k])
        .collect();
    let mut fval = f(&pi);
    let mut step = 0.25;
    let mut grad = vec![0.0; m * k];
    for _ in 0..20_000 {
        for (g, (&p, &qq)) in grad.iter_mut().zip(pi.iter().zip(qs)) {
            *g = (p.max(1e-18) / qq).ln() + 1.0;
        }
        let trial: Vec<f64> = pi.iter().zip(&grad).map(|(&p, &g)| p - step * g).collect();
        let cand = transport_projection(&trial, target_u, target_v, m, k);
        let cf = f(&cand);
        if cf <= fval - 1e-16 {
            pi = cand;
            fval = cf;
            step = (step * 1.3).min(8.0);
        } else {
            step *= 0.5;
            if step < 1e-13 {
                break;
            }
        }
    }
    Ok((fval / LN_2).max(0.0))
}

/// Scheme error probabilities and costs from exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct ExhaustiveEvaluation {
    pub alpha: f64,
    pub beta: f64,
    pub expected_cost_h0: f64,
    pub expected_cost_h1: f64,
}

fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Evaluates a scheme instance by walking every `(u, v)` source block and
/// every channel output block, weighting decisions by their exact joint
/// probabilities. Feasible only at toy blocklengths; the work grows as
/// `(|U||V|)^n |Y|^(input length)`.
pub fn exhaustive_scheme_evaluation(
    inst: &SchemeInstance,
    p_uv: &JointPmf,
    q_uv: &JointPmf,
    ch: &Dmc,
    cost: &CostFunction,
) -> Result<ExhaustiveEvaluation> {
    let n = inst.n;
    let cells = p_uv.nu() * p_uv.nv();
    let in_len = inst.input_len();
    let outs = ch.outputs();
    let work = (cells as f64).powi(n as i32) * (outs as f64).powi(in_len as i32);
    if work > EXHAUSTIVE_CAP {
        return Err(Error::ResourceLimit {
            required: work,
            cap: EXHAUSTIVE_CAP as u64,
        });
    }
    let nv = p_uv.nv();
    let mut seq = vec![0usize; n];
    let mut u_seq = vec![0usize; n];
    let mut v_seq = vec![0usize; n];
    let mut accept_p = 0.0;
    let mut accept_q = 0.0;
    let mut cost_h0 = 0.0;
    let mut cost_h1 = 0.0;
    loop {
        let mut prob_p = 1.0;
        let mut prob_q = 1.0;
        for (i, &cell) in seq.iter().enumerate() {
            prob_p *= p_uv.as_slice()[cell];
            prob_q *= q_uv.as_slice()[cell];
            u_seq[i] = cell / nv;
            v_seq[i] = cell % nv;
        }
        if prob_p > 0.0 || prob_q > 0.0 {
            let x_seq = encode(inst, &u_seq)?;
            let block_cost = cost.sequence_cost(&x_seq);
            cost_h0 += prob_p * block_cost;
            cost_h1 += prob_q * block_cost;
            let mut accept_given_x = 0.0;
            let mut y_seq = vec![0usize; in_len];
            loop {
                let mut py = 1.0;
                for (i, &y) in y_seq.iter().enumerate() {
                    py *= ch.prob(y, x_seq[i]);
                }
                if py > 0.0 && decide(inst, &v_seq, &y_seq)? {
                    accept_given_x += py;
                }
                if !odometer(&mut y_seq, outs) {
                    break;
                }
            }
            accept_p += prob_p * accept_given_x;
            accept_q += prob_q * accept_given_x;
        }
        if !odometer(&mut seq, cells) {
            break;
        }
    }
    Ok(ExhaustiveEvaluation {
        alpha: 1.0 - accept_p,
        beta: accept_q,
        expected_cost_h0: cost_h0,
        expected_cost_h1: cost_h1,
    })
}
