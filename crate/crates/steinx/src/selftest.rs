//! A battery of cross-checks wiring the production code paths against the
//! independent oracles and a few hand-computed values.
//!
//! Each check runs one scenario through two routes that share as little
//! code as possible and records whether they agree. The CLI surfaces the
//! battery as a subcommand so an installation can vouch for itself.

use crate::channel::classify;
use crate::error::Result;
use crate::evaluation::{audit_cost, evaluate_exact, simulate};
use crate::exponents::{compute_e1, relaxed_e1, resolve_exponents};
use crate::oracle::{exhaustive_scheme_evaluation, projected_descent_minimum, segment_minimum_2x2};
use crate::prob::{kl_bits, kl_divergence, CostFunction, Dmc, JointPmf};
use crate::schemes::{finite_k_feasibility, resolve_instance, Regime, Schedules};
use crate::typicality::{typicality_event_probability, DEFAULT_TYPE_CAP};
use serde::Serialize;

/// Outcome of one self-test check.
#[derive(Debug, Clone, Serialize)]
pub struct SelfTestItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn item(name: &'static str, passed: bool, detail: String) -> SelfTestItem {
    SelfTestItem {
        name,
        passed,
        detail,
    }
}

fn guard(name: &'static str, run: impl FnOnce() -> Result<SelfTestItem>) -> SelfTestItem {
    match run() {
        Ok(it) => it,
        Err(e) => item(name, false, format!("errored: {e}")),
    }
}

fn fixtures() -> (JointPmf, JointPmf, Dmc, Dmc, CostFunction) {
    let p = JointPmf::from_rows(vec![vec![0.35, 0.15], vec![0.10, 0.40]]).unwrap();
    let q = JointPmf::from_rows(vec![vec![0.30, 0.20], vec![0.25, 0.25]]).unwrap();
    let z = Dmc::from_rows(vec![vec![1.0, 0.0], vec![0.1, 0.9]]).unwrap();
    let bsc = Dmc::from_rows(vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
    let cost = CostFunction::new(vec![0.0, 1.0], 0).unwrap();
    (p, q, z, bsc, cost)
}

/// Runs the whole battery and returns one row per check.
pub fn run_selftests() -> Vec<SelfTestItem> {
    let mut out = Vec::new();

    out.push(guard("divergence_hand_value", || {
        let v = kl_bits(&[0.5, 0.5], &[0.75, 0.25])?;
        let expect = 1.0 - 0.5 * 3.0f64.log2();
        Ok(item(
            "divergence_hand_value",
            (v - expect).abs() < 1e-12,
            format!("computed {v:.15}, expected {expect:.15}"),
        ))
    }));

    out.push(guard("connectivity_split", || {
        let (_, _, z, bsc, _) = fixtures();
        let rz = classify(&z)?;
        let rb = classify(&bsc)?;
        let z_ok = match rz.triple {
            Some(t) => (t.x0, t.x1, t.y_star) == (1, 0, 1),
            None => false,
        };
        Ok(item(
            "connectivity_split",
            z_ok && rb.is_fully_connected,
            format!("zero-entry channel triple {:?}, dense channel fully connected {}",
                rz.triple, rb.is_fully_connected),
        ))
    }));

    out.push(guard("projection_vs_segment_oracle", || {
        let (p, q, _, _, _) = fixtures();
        let fast = compute_e1(&p, &q)?;
        let (pu, pv) = p.marginals();
        let slow = segment_minimum_2x2(&q, pu.as_slice(), pv.as_slice())?;
        Ok(item(
            "projection_vs_segment_oracle",
            (fast - slow).abs() < 1e-8,
            format!("scaling {fast:.12} vs segment scan {slow:.12}"),
        ))
    }));

    out.push(guard("projection_vs_descent_oracle", || {
        let p = JointPmf::from_rows(vec![
            vec![0.10, 0.08, 0.12],
            vec![0.15, 0.05, 0.10],
            vec![0.06, 0.20, 0.14],
        ])?;
        let q = JointPmf::from_rows(vec![
            vec![0.11, 0.11, 0.11],
            vec![0.12, 0.10, 0.11],
            vec![0.11, 0.12, 0.11],
        ])?;
        let fast = compute_e1(&p, &q)?;
        let (pu, pv) = p.marginals();
        let slow = projected_descent_minimum(&q, pu.as_slice(), pv.as_slice())?;
        Ok(item(
            "projection_vs_descent_oracle",
            (fast - slow).abs() < 1e-6,
            format!("scaling {fast:.10} vs projected descent {slow:.10}"),
        ))
    }));

    out.push(guard("dichotomy_report_fields", || {
        let (p, q, z, bsc, cost) = fixtures();
        let open = resolve_exponents(&p, &q, &z, &cost)?;
        let dense = resolve_exponents(&p, &q, &bsc, &cost)?;
        let local = kl_divergence(&p.marginal_v(), &q.marginal_v())?;
        let ok = (open.sublinear_uses - open.e1).abs() < 1e-12
            && (dense.sublinear_uses - local).abs() < 1e-12
            && open.e1 > local + 1e-6;
        Ok(item(
            "dichotomy_report_fields",
            ok,
            format!(
                "zero-entry channel achieves {:.8}, dense channel only {:.8} (joint minimum {:.8})",
                open.sublinear_uses, dense.sublinear_uses, open.e1
            ),
        ))
    }));

    out.push(guard("type_enumeration_total_mass", || {
        let total = typicality_event_probability(&[0.2, 0.5, 0.3], 60, |_| true)?;
        Ok(item(
            "type_enumeration_total_mass",
            (total - 1.0).abs() < 1e-9,
            format!("all types of n = 60 over 3 cells sum to {total:.12}"),
        ))
    }));

    out.push(guard("exact_vs_exhaustive_evaluation", || {
        let (p, q, z, bsc, cost) = fixtures();
        let mut worst = 0.0f64;
        for (regime, ch) in [(Regime::LocalOnly, &bsc), (Regime::SublinearUses, &z)] {
            let inst =
                resolve_instance(regime, 6, &p, &q, ch, &cost, &Schedules::default(), Some(0.3))?;
            let slow = exhaustive_scheme_evaluation(&inst, &p, &q, ch, &cost)?;
            let fast = evaluate_exact(&inst, &p, &q)?;
            worst = worst
                .max((slow.alpha - fast.alpha).abs())
                .max((slow.beta - fast.beta()).abs());
        }
        Ok(item(
            "exact_vs_exhaustive_evaluation",
            worst < 1e-12,
            format!("largest deviation between type counting and sequence walking: {worst:.3e}"),
        ))
    }));

    out.push(guard("simulation_vs_exact", || {
        let (p, q, z, _, cost) = fixtures();
        let trials = 1500u64;
        let inst =
            resolve_instance(Regime::SublinearUses, 40, &p, &q, &z, &cost, &Schedules::default(), Some(0.1))?;
        let exact = evaluate_exact(&inst, &p, &q)?;
        let mc = simulate(&inst, &p, &q, &z, &cost, 5, trials)?;
        let slack = |v: f64| 4.0 * (v * (1.0 - v) / trials as f64).sqrt() + 4.0 / trials as f64;
        let ok = (mc.alpha - exact.alpha).abs() <= slack(exact.alpha)
            && (mc.beta() - exact.beta()).abs() <= slack(exact.beta());
        Ok(item(
            "simulation_vs_exact",
            ok,
            format!(
                "alpha {:.4} vs {:.4}, beta {:.4} vs {:.4} over {trials} trials",
                mc.alpha,
                exact.alpha,
                mc.beta(),
                exact.beta()
            ),
        ))
    }));

    out.push(guard("expected_cost_budget", || {
        let (p, q, _, bsc, cost) = fixtures();
        let inst = resolve_instance(
            Regime::ExpectedCostBoth,
            100,
            &p,
            &q,
            &bsc,
            &cost,
            &Schedules::default(),
            None,
        )?;
        let audit = audit_cost(&inst, &p, &q, DEFAULT_TYPE_CAP)?;
        let bound = audit.chebyshev_loud_bound.unwrap_or(f64::NAN);
        let algebra = (bound * inst.branch_costs.1 - audit.budget).abs() < 1e-9;
        Ok(item(
            "expected_cost_budget",
            audit.within_budget && algebra,
            format!(
                "expected costs ({:.4}, {:.4}) against budget {:.4}; concentration bound spends {:.4}",
                audit.expected_cost_h0,
                audit.expected_cost_h1,
                audit.budget,
                bound * inst.branch_costs.1
            ),
        ))
    }));

    out.push(guard("relaxed_minimum_brackets", || {
        let (p, q, _, _, _) = fixtures();
        let tight = compute_e1(&p, &q)?;
        let narrow = relaxed_e1(&p, &q, 0.02, 0.02)?;
        let wide = relaxed_e1(&p, &q, 0.1, 0.1)?;
        let ok = narrow <= tight + 1e-9 && wide <= narrow + 1e-9 && wide >= 0.0;
        Ok(item(
            "relaxed_minimum_brackets",
            ok,
            format!("exact {tight:.8} >= slack 0.02 relaxation {narrow:.8} >= slack 0.1 relaxation {wide:.8}"),
        ))
    }));

    out.push(guard("feasibility_threshold", || {
        let mut ok = true;
        for &(gamma, k, eps) in &[
            (0.9f64, 1usize, 0.1f64),
            (0.9, 1, 0.0999),
            (0.5, 10, 1e-3),
            (0.2, 20, 0.011),
        ] {
            let direct = eps >= (1.0 - gamma).powi(k as i32);
            if finite_k_feasibility(gamma, k, eps) != direct {
                ok = false;
            }
        }
        Ok(item(
            "feasibility_threshold",
            ok,
            "closed threshold agrees with direct evaluation on boundary cases".into(),
        ))
    }));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_whole_battery_passes() {
        let results = run_selftests();
        assert_eq!(results.len(), 11);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
