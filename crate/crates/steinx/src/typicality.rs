//! Empirical types, strong typicality, and exact type-level event
//! probabilities by direct enumeration.
//!
//! An i.i.d. sample of length `n` from a pmf on `m` cells is summarized by
//! its empirical type, the vector of cell counts. Every event this crate
//! cares about (typicality tests, encoder branches, decision regions) is a
//! pure function of the type, so its exact probability is a finite sum
//!
//! ```text
//! Pr[event] = sum over types t in event of  multinomial(n; t) * prod d_i^{t_i}
//! ```
//!
//! with `C(n + m - 1, m - 1)` terms. Individual terms underflow `f64` long
//! before they stop mattering, so all accumulation happens in natural-log
//! space with a streaming log-sum-exp; results are exponentiated once at the
//! end.

use crate::error::{Error, Result};
use crate::prob::Pmf;

/// Default cap on the number of enumerated types in one call.
pub const DEFAULT_TYPE_CAP: u64 = 50_000_000;

/// The empirical type of a length-`n` sequence: per-cell occurrence counts.
///
/// For a joint alphabet the counts are stored row-major, matching
/// [`crate::prob::JointPmf`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalType {
    pub counts: Vec<usize>,
    pub n: usize,
}

impl EmpiricalType {
    /// Builds a type from counts; `n` is their sum.
    pub fn new(counts: Vec<usize>) -> Self {
        let n = counts.iter().sum();
        EmpiricalType { counts, n }
    }

    /// The type of an explicit symbol sequence over `cells` symbols.
    pub fn of_sequence(seq: &[usize], cells: usize) -> Self {
        let mut counts = vec![0; cells];
        for &s in seq {
            counts[s] += 1;
        }
        EmpiricalType { counts, n: seq.len() }
    }

    /// Relative frequency of cell `i`.
    pub fn frequency(&self, i: usize) -> f64 {
        self.counts[i] as f64 / self.n as f64
    }

    /// Counts of the first coordinate when the cells form a `(.., cols)` grid.
    pub fn marginal_rows(&self, cols: usize) -> EmpiricalType {
        let rows = self.counts.len() / cols;
        let mut m = vec![0; rows];
        for r in 0..rows {
            for c in 0..cols {
                m[r] += self.counts[r * cols + c];
            }
        }
        EmpiricalType { counts: m, n: self.n }
    }

    /// Counts of the second coordinate when the cells form a `(.., cols)` grid.
    pub fn marginal_cols(&self, cols: usize) -> EmpiricalType {
        let mut m = vec![0; cols];
        for (i, &c) in self.counts.iter().enumerate() {
            m[i % cols] += c;
        }
        EmpiricalType { counts: m, n: self.n }
    }
}

/// A strong-typicality test: slack `mu` around a reference pmf.
#[derive(Debug, Clone)]
pub struct TypicalityParams {
    mu: f64,
    reference: Pmf,
}

impl TypicalityParams {
    pub fn new(mu: f64, reference: Pmf) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidConfig {
                detail: format!("typicality slack must be positive and finite, got {mu}"),
            });
        }
        Ok(TypicalityParams { mu, reference })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn reference(&self) -> &Pmf {
        &self.reference
    }
}

/// Strong typicality with the closed condition: cells where the reference is
/// zero must have count zero, and every other cell satisfies
/// `|count/n - ref| <= mu`.
pub fn is_strongly_typical(t: &EmpiricalType, params: &TypicalityParams) -> bool {
    counts_typical(&t.counts, t.n, params.reference.as_slice(), params.mu)
}

pub(crate) fn counts_typical(counts: &[usize], n: usize, reference: &[f64], mu: f64) -> bool {
    debug_assert_eq!(counts.len(), reference.len());
    for (&c, &r) in counts.iter().zip(reference.iter()) {
        if r == 0.0 {
            if c != 0 {
                return false;
            }
        } else if (c as f64 / n as f64 - r).abs() > mu {
            return false;
        }
    }
    true
}

/// Natural log of the multinomial coefficient `n! / prod(counts[i]!)` where
/// `n = sum(counts)`.
pub fn log_multinomial(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    let table = ln_fact_table(n);
    table[n] - counts.iter().map(|&c| table[c]).sum::<f64>()
}

/// Table of `ln(k!)` for `k = 0..=n`, built by cumulative summation. The
/// accumulated rounding stays within `1e-9` relative for `n <= 10^4`.
pub(crate) fn ln_fact_table(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(0.0);
    let mut acc = 0.0;
    for k in 1..=n {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}

/// Approximate number of types (compositions of `n` into `cells` parts).
pub fn type_count_estimate(n: usize, cells: usize) -> f64 {
    if cells == 0 {
        return 0.0;
    }
    let table = ln_fact_table(n + cells - 1);
    (table[n + cells - 1] - table[n] - table[cells - 1]).exp()
}

fn check_cap(n: usize, cells: usize, cap: u64) -> Result<()> {
    let required = type_count_estimate(n, cells);
    if required > cap as f64 {
        return Err(Error::ResourceLimit { required, cap });
    }
    Ok(())
}

/// Streaming enumeration state over all count vectors of length `cells`
/// summing to `n`, in lexicographically decreasing order starting from
/// `(n, 0, .., 0)`.
pub(crate) struct Compositions {
    counts: Vec<usize>,
    n: usize,
}

impl Compositions {
    pub fn new(n: usize, cells: usize) -> Self {
        assert!(cells >= 1, "need at least one cell");
        let mut counts = vec![0; cells];
        counts[0] = n;
        Compositions { counts, n }
    }

    pub fn current(&self) -> &[usize] {
        &self.counts
    }

    /// Steps to the next composition; false when the current one is the last.
    pub fn advance(&mut self) -> bool {
        let m = self.counts.len();
        if m == 1 || self.counts[m - 1] == self.n {
            return false;
        }
        // The largest movable index below the last cell; everything strictly
        // between it and the last cell is zero by construction.
        let mut i = m - 2;
        while self.counts[i] == 0 {
            i -= 1;
        }
        let tail = self.counts[m - 1];
        self.counts[i] -= 1;
        if i + 1 != m - 1 {
            self.counts[m - 1] = 0;
        }
        self.counts[i + 1] = tail + 1;
        true
    }
}

/// Iterator over all empirical types with `n` observations on `cells` cells.
pub struct TypeIter {
    inner: Compositions,
    exhausted: bool,
}

impl Iterator for TypeIter {
    type Item = EmpiricalType;

    fn next(&mut self) -> Option<EmpiricalType> {
        if self.exhausted {
            return None;
        }
        let item = EmpiricalType {
            counts: self.inner.current().to_vec(),
            n: self.inner.n,
        };
        self.exhausted = !self.inner.advance();
        Some(item)
    }
}

/// Enumerates all joint types of blocklength `n` over `cells` cells, refusing
/// with [`Error::ResourceLimit`] when there are more than [`DEFAULT_TYPE_CAP`].
pub fn enumerate_joint_types(n: usize, cells: usize) -> Result<TypeIter> {
    enumerate_joint_types_with_cap(n, cells, DEFAULT_TYPE_CAP)
}

/// Same as [`enumerate_joint_types`] with an explicit cap.
pub fn enumerate_joint_types_with_cap(n: usize, cells: usize, cap: u64) -> Result<TypeIter> {
    if cells == 0 {
        return Err(Error::InvalidConfig {
            detail: "type enumeration over zero cells".into(),
        });
    }
    check_cap(n, cells, cap)?;
    Ok(TypeIter {
        inner: Compositions::new(n, cells),
        exhausted: false,
    })
}

/// Streaming log-sum-exp accumulator: add natural-log terms, read the
/// natural log of their sum. Addition order changes the result only at the
/// level of rounding noise.
#[derive(Debug, Clone)]
pub(crate) struct LogSumAcc {
    max: f64,
    sum: f64,
}

impl LogSumAcc {
    pub fn new() -> Self {
        LogSumAcc {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    pub fn add(&mut self, l: f64) {
        if l == f64::NEG_INFINITY {
            return;
        }
        if l <= self.max {
            self.sum += (l - self.max).exp();
        } else {
            if self.max == f64::NEG_INFINITY {
                self.sum = 1.0;
            } else {
                self.sum = self.sum * (self.max - l).exp() + 1.0;
            }
            self.max = l;
        }
    }

    pub fn ln_total(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

/// One enumeration pass over all types of `(n, cells)`, accumulating the
/// natural-log probability of up to 32 type-level events under several
/// distributions at once.
///
/// `classify` maps a count vector to a bitmask of the events it belongs to;
/// the result is indexed `[distribution][event]`. Distributions enter as
/// natural logs of their cell probabilities (`-inf` for empty cells).
pub(crate) fn accumulate_type_events(
    n: usize,
    cells: usize,
    cap: u64,
    ln_dists: &[Vec<f64>],
    num_events: usize,
    mut classify: impl FnMut(&[usize]) -> u32,
) -> Result<Vec<Vec<f64>>> {
    assert!(num_events <= 32);
    for d in ln_dists {
        assert_eq!(d.len(), cells);
    }
    check_cap(n, cells, cap)?;
    let table = ln_fact_table(n);
    let mut accs = vec![vec![LogSumAcc::new(); num_events]; ln_dists.len()];
    let mut comp = Compositions::new(n, cells);
    loop {
        let counts = comp.current();
        let mask = classify(counts);
        if mask != 0 {
            let mut log_mult = table[n];
            for &c in counts {
                log_mult -= table[c];
            }
            for (di, ln_d) in ln_dists.iter().enumerate() {
                let mut ln_p = log_mult;
                for (i, &c) in counts.iter().enumerate() {
                    if c > 0 {
                        ln_p += c as f64 * ln_d[i];
                    }
                }
                if ln_p == f64::NEG_INFINITY {
                    continue;
                }
                for (e, acc) in accs[di].iter_mut().enumerate() {
                    if mask & (1 << e) != 0 {
                        acc.add(ln_p);
                    }
                }
            }
        }
        if !comp.advance() {
            break;
        }
    }
    Ok(accs
        .into_iter()
        .map(|row| row.into_iter().map(|a| a.ln_total()).collect())
        .collect())
}

pub(crate) fn ln_cells(dist: &[f64]) -> Vec<f64> {
    dist.iter()
        .map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY })
        .collect()
}

/// Natural log of the exact probability that an i.i.d. sample of length `n`
/// from `dist` has a type satisfying `predicate`.
pub fn typicality_event_ln_probability(
    dist: &[f64],
    n: usize,
    predicate: impl FnMut(&EmpiricalType) -> bool,
) -> Result<f64> {
    typicality_event_ln_probability_with_cap(dist, n, DEFAULT_TYPE_CAP, predicate)
}

/// Same as [`typicality_event_ln_probability`] with an explicit type cap.
pub fn typicality_event_ln_probability_with_cap(
    dist: &[f64],
    n: usize,
    cap: u64,
    mut predicate: impl FnMut(&EmpiricalType) -> bool,
) -> Result<f64> {
    let cells = dist.len();
    let ln_d = vec![ln_cells(dist)];
    let mut scratch = EmpiricalType {
        counts: vec![0; cells],
        n,
    };
    let res = accumulate_type_events(n, cells, cap, &ln_d, 1, |counts| {
        scratch.counts.copy_from_slice(counts);
        u32::from(predicate(&scratch))
    })?;
    Ok(res[0][0])
}

/// Exact probability that the type of an i.i.d. sample satisfies `predicate`.
///
/// Deterministic: repeated calls reproduce the result bit for bit.
pub fn typicality_event_probability(
    dist: &[f64],
    n: usize,
    predicate: impl FnMut(&EmpiricalType) -> bool,
) -> Result<f64> {
    Ok(typicality_event_ln_probability(dist, n, predicate)?.exp())
}

/// Same as [`typicality_event_probability`] with an explicit type cap.
pub fn typicality_event_probability_with_cap(
    dist: &[f64],
    n: usize,
    cap: u64,
    predicate: impl FnMut(&EmpiricalType) -> bool,
) -> Result<f64> {
    Ok(typicality_event_ln_probability_with_cap(dist, n, cap, predicate)?.exp())
}
