//! Shows how many channel uses are enough for the sure-symbol veto, and what
//! happens when a scheme is pinned below that number.
//!
//! On a partially connected channel the sensor repeats the input `x0` over
//! `k` slots; under the null the center misses the sure symbol `y*` with
//! probability `(1 - gamma)^k`, which must drop below the type-I budget
//! `epsilon`. Any `k(n)` growing without bound works eventually; a constant
//! `k` below the threshold leaves a floor under `alpha_n` forever.

use steinx::channel::classify;
use steinx::evaluation::evaluate_exact;
use steinx::prob::{CostFunction, Dmc, JointPmf};
use steinx::schemes::{finite_k_feasibility, resolve_instance, Regime, Schedule, Schedules};

fn main() -> steinx::Result<()> {
    let p_uv = JointPmf::from_rows(vec![vec![0.63, 0.07], vec![0.06, 0.24]])?;
    let q_uv = JointPmf::from_rows(vec![vec![0.20, 0.20], vec![0.30, 0.30]])?;
    let ch = Dmc::from_rows(vec![vec![0.55, 0.45], vec![0.0, 1.0]])?;
    let cost = CostFunction::new(vec![0.0, 1.0], 0)?;

    let triple = classify(&ch)?.triple.expect("channel is partially connected");
    let gamma = triple.gamma_x0;
    let epsilon = 0.05;
    println!(
        "sure symbol y* = {} appears with probability gamma = {gamma} per use of input {}",
        triple.y_star, triple.x0
    );
    println!("type-I budget epsilon = {epsilon}");
    println!();
    println!("{:>4}  {:>12}  {:>9}", "k", "miss prob", "feasible");
    let mut threshold = None;
    for k in 1..=10 {
        let miss = (1.0 - gamma).powi(k);
        let ok = finite_k_feasibility(gamma, k as usize, epsilon);
        if ok && threshold.is_none() {
            threshold = Some(k);
        }
        println!("{k:>4}  {miss:>12.6}  {ok:>9}");
    }
    println!();
    println!(
        "smallest sufficient k = {}",
        threshold.expect("threshold within scan range")
    );
    println!();

    let pinned = 2;
    println!("pinning the scheme to k = {pinned} on every blocklength:");
    let schedules = Schedules {
        uses: Schedule::Custom {
            table: (1..=500).map(|n| (n, pinned as f64)).collect(),
        },
        cost: Schedule::SqrtN,
    };
    let floor = (1.0 - gamma).powi(pinned);
    println!("  alpha can never drop below the miss floor {floor:.4}");
    println!("{:>6}  {:>12}", "n", "alpha");
    for n in [50, 100, 200, 400] {
        let inst = resolve_instance(
            Regime::SublinearUses,
            n,
            &p_uv,
            &q_uv,
            &ch,
            &cost,
            &schedules,
            Some(0.05),
        )?;
        let res = evaluate_exact(&inst, &p_uv, &q_uv)?;
        println!("{n:>6}  {:>12.6}", res.alpha);
    }
    println!();
    println!("with the default sqrt(n) schedule the miss floor vanishes:");
    println!("{:>6}  {:>4}  {:>12}", "n", "k", "alpha");
    for n in [50, 100, 200, 400] {
        let inst = resolve_instance(
            Regime::SublinearUses,
            n,
            &p_uv,
            &q_uv,
            &ch,
            &cost,
            &Schedules::default(),
            Some(0.05),
        )?;
        let res = evaluate_exact(&inst, &p_uv, &q_uv)?;
        println!("{n:>6}  {:>4}  {:>12.6}", inst.k, res.alpha);
    }
    Ok(())
}
