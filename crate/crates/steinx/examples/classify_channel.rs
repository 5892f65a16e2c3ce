//! Classifies a few channels as fully or partially connected and prints the
//! diagnostics the split is built on.
//!
//! A channel is partially connected when some output `y*` is reachable from
//! one input but impossible from another; a single channel use then carries
//! an unbounded log-likelihood ratio. Fully connected channels have no such
//! output, and `gamma_min` together with the worst-case transition quotient
//! measure how far from the boundary they sit.

use steinx::channel::{classify, gamma_min, gamma_quotient};
use steinx::prob::Dmc;

fn describe(name: &str, rows: Vec<Vec<f64>>) -> steinx::Result<()> {
    let ch = Dmc::from_rows(rows)?;
    let report = classify(&ch)?;
    println!("{name}:");
    println!(
        "  inputs = {}, outputs = {}, gamma_min = {:.4}",
        ch.inputs(),
        ch.outputs(),
        gamma_min(&ch)
    );
    match report.triple {
        Some(t) => {
            println!("  partially connected");
            println!(
                "  witness: output y* = {} has Gamma(y*|{}) = {:.4} but Gamma(y*|{}) = 0",
                t.y_star, t.x0, t.gamma_x0, t.x1
            );
        }
        None => {
            println!("  fully connected");
            println!(
                "  largest transition quotient = {:.4}",
                gamma_quotient(&ch)?
            );
        }
    }
    println!();
    Ok(())
}

fn main() -> steinx::Result<()> {
    describe(
        "binary symmetric channel, crossover 0.1",
        vec![vec![0.9, 0.1], vec![0.1, 0.9]],
    )?;
    describe(
        "Z-channel, flip probability 0.2",
        vec![vec![1.0, 0.0], vec![0.2, 0.8]],
    )?;
    describe(
        "binary erasure channel, erasure probability 0.3",
        vec![vec![0.7, 0.0, 0.3], vec![0.0, 0.7, 0.3]],
    )?;
    describe(
        "noisy ternary channel, all transitions positive",
        vec![
            vec![0.8, 0.1, 0.1],
            vec![0.1, 0.8, 0.1],
            vec![0.15, 0.15, 0.7],
        ],
    )?;
    println!("a channel with an unreachable output is rejected as degenerate:");
    let bad = Dmc::from_rows(vec![vec![1.0, 0.0], vec![1.0, 0.0]])?;
    match classify(&bad) {
        Err(e) => println!("  {e}"),
        Ok(_) => println!("  unexpectedly classified"),
    }
    Ok(())
}
