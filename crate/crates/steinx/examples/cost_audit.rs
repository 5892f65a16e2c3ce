//! Audits how the cost-constrained schemes spend their budgets.
//!
//! The strict regime must stay within the budget on every realization, so it
//! embeds a fixed number of affordable signal slots and pads the rest with
//! the free symbol. The expected-cost regimes may exceed the budget on a
//! rare branch; the audit reports the exact probability of that branch under
//! both hypotheses and the Chebyshev bound the slack was sized to meet.

use steinx::evaluation::audit_cost;
use steinx::prob::{CostFunction, Dmc, JointPmf};
use steinx::schemes::{resolve_instance, Regime, Schedules};
use steinx::typicality::DEFAULT_TYPE_CAP;

fn main() -> steinx::Result<()> {
    let p_uv = JointPmf::from_rows(vec![vec![0.63, 0.07], vec![0.06, 0.24]])?;
    let q_uv = JointPmf::from_rows(vec![vec![0.20, 0.20], vec![0.30, 0.30]])?;
    let bsc = Dmc::from_rows(vec![vec![0.9, 0.1], vec![0.1, 0.9]])?;
    let z = Dmc::from_rows(vec![vec![1.0, 0.0], vec![0.2, 0.8]])?;
    let cost = CostFunction::new(vec![0.0, 1.0], 0)?;
    let schedules = Schedules::default();
    let n = 400;

    println!("blocklength n = {n}, budget schedule sqrt(n) = {}", (n as f64).sqrt());
    println!();

    for (name, regime, ch) in [
        ("strict cost over the Z-channel", Regime::StrictCost, &z),
        ("expected cost (null only) over the BSC", Regime::ExpectedCostH0, &bsc),
        ("expected cost (both) over the BSC", Regime::ExpectedCostBoth, &bsc),
    ] {
        let inst = resolve_instance(regime, n, &p_uv, &q_uv, ch, &cost, &schedules, None)?;
        let audit = audit_cost(&inst, &p_uv, &q_uv, DEFAULT_TYPE_CAP)?;
        println!("{name}:");
        println!("  budget C_n                    = {:.4}", audit.budget);
        println!("  worst single-realization cost = {:.4}", audit.max_realized_cost);
        println!(
            "  expensive-branch probability  = {:.3e} (null), {:.3e} (alternative)",
            audit.loud_probability_h0, audit.loud_probability_h1
        );
        match audit.chebyshev_loud_bound {
            Some(b) => println!("  Chebyshev bound on that branch = {:.3e}", b),
            None => println!("  budget holds on every realization, no concentration needed"),
        }
        println!(
            "  expected cost                 = {:.4} (null), {:.4} (alternative)",
            audit.expected_cost_h0, audit.expected_cost_h1
        );
        println!("  within budget: {}", audit.within_budget);
        println!();
    }

    println!("the uses-only and local regimes carry no budget, so auditing them fails:");
    let inst = resolve_instance(
        Regime::LocalOnly,
        n,
        &p_uv,
        &q_uv,
        &bsc,
        &cost,
        &schedules,
        None,
    )?;
    match audit_cost(&inst, &p_uv, &q_uv, DEFAULT_TYPE_CAP) {
        Err(e) => println!("  {e}"),
        Ok(_) => println!("  unexpectedly audited"),
    }
    Ok(())
}
