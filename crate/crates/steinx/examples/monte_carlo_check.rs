//! Cross-checks the Monte Carlo simulator against the exact type-enumeration
//! evaluator on the same scheme instance.
//!
//! Both paths share nothing but the encoder and the decision rule: one
//! enumerates empirical types and sums exact probabilities, the other draws
//! seeded i.i.d. trials and counts. Agreement within the binomial confidence
//! interval is strong evidence that both are implementing the same scheme.

use steinx::evaluation::{evaluate_exact, simulate};
use steinx::prob::{CostFunction, Dmc, JointPmf};
use steinx::schemes::{resolve_instance, Regime, Schedules};

fn main() -> steinx::Result<()> {
    let p_uv = JointPmf::from_rows(vec![vec![0.63, 0.07], vec![0.06, 0.24]])?;
    let q_uv = JointPmf::from_rows(vec![vec![0.20, 0.20], vec![0.30, 0.30]])?;
    let ch = Dmc::from_rows(vec![vec![1.0, 0.0], vec![0.2, 0.8]])?;
    let cost = CostFunction::new(vec![0.0, 1.0], 0)?;
    let schedules = Schedules::default();

    let n = 50;
    let trials = 200_000;
    let seed = 2024;

    for regime in [Regime::LocalOnly, Regime::SublinearUses, Regime::ExpectedCostH0] {
        let inst = resolve_instance(
            regime, n, &p_uv, &q_uv, &ch, &cost, &schedules, Some(0.1),
        )?;
        let exact = evaluate_exact(&inst, &p_uv, &q_uv)?;
        let mc = simulate(&inst, &p_uv, &q_uv, &ch, &cost, seed, trials)?;

        println!("{} at n = {n}, {trials} trials, seed {seed}:", regime);
        println!(
            "  alpha: exact {:.6}  simulated {:.6} +- {:.6}",
            exact.alpha,
            mc.alpha,
            mc.alpha_ci_halfwidth.unwrap()
        );
        let beta_exact = exact.beta();
        if mc.beta_is_upper_bound {
            println!(
                "  beta:  exact {:.3e}  simulated none in {trials} trials (95% bound {:.3e})",
                beta_exact,
                mc.beta()
            );
        } else {
            println!(
                "  beta:  exact {:.3e}  simulated {:.3e} +- {:.3e}",
                beta_exact,
                mc.beta(),
                mc.beta_ci_halfwidth.unwrap()
            );
        }
        println!(
            "  expected cost under the null: exact {:.4}  simulated {:.4}",
            exact.expected_cost_h0, mc.expected_cost_h0
        );
        let alpha_gap = (exact.alpha - mc.alpha).abs();
        let covered = alpha_gap <= mc.alpha_ci_halfwidth.unwrap();
        println!(
            "  alpha gap {:.2e}, inside the 95% interval: {covered}",
            alpha_gap
        );
        println!();
    }
    Ok(())
}
