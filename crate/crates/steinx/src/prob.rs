//! Probability primitives: finite pmfs, joint pmfs, channels and input costs.
//!
//! Conventions used across the crate:
//!
//! * All divergences and exponents are measured in **bits** (base-2 logs).
//! * `0 * log(0) = 0`; a divergence is infinite exactly when the first
//!   argument puts mass where the second has none.
//! * Constructors accept vectors whose entries are nonnegative and sum to 1
//!   within `1e-12`; they renormalize exactly and reject anything else.
//!   Every value is immutable after construction.

use crate::error::{Error, Result};

/// Tolerance for simplex membership at construction time.
pub const SIMPLEX_TOL: f64 = 1e-12;

fn check_simplex(what: &'static str, entries: &[f64]) -> Result<f64> {
    if entries.is_empty() {
        return Err(Error::InvalidConfig {
            detail: format!("{what}: empty probability vector"),
        });
    }
    for (index, &value) in entries.iter().enumerate() {
        if value < 0.0 || !value.is_finite() {
            return Err(Error::NegativeEntry { what, index, value });
        }
    }
    let sum: f64 = entries.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::NotNormalized { what, sum });
    }
    Ok(sum)
}

/// A probability mass function on `{0, .., m-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates and renormalizes `probs`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::named("pmf", probs)
    }

    pub(crate) fn named(what: &'static str, mut probs: Vec<f64>) -> Result<Self> {
        let sum = check_simplex(what, &probs)?;
        for p in &mut probs {
            *p /= sum;
        }
        Ok(Pmf { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// True when every outcome has positive probability.
    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }
}

/// A joint pmf on `{0, .., nu-1} x {0, .., nv-1}`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    nu: usize,
    nv: usize,
    probs: Vec<f64>,
}

impl JointPmf {
    /// Validates and renormalizes a rectangular matrix of probabilities.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let nu = rows.len();
        if nu == 0 {
            return Err(Error::InvalidConfig {
                detail: "joint pmf: no rows".into(),
            });
        }
        let nv = rows[0].len();
        for row in &rows {
            if row.len() != nv {
                return Err(Error::ShapeMismatch {
                    op: "joint pmf construction",
                    expected: nv,
                    got: row.len(),
                });
            }
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        Self::from_flat(nu, nv, flat)
    }

    /// Same as [`JointPmf::from_rows`] for a row-major flat vector.
    pub fn from_flat(nu: usize, nv: usize, mut probs: Vec<f64>) -> Result<Self> {
        if probs.len() != nu * nv || nv == 0 {
            return Err(Error::ShapeMismatch {
                op: "joint pmf construction",
                expected: nu * nv,
                got: probs.len(),
            });
        }
        let sum = check_simplex("joint pmf", &probs)?;
        for p in &mut probs {
            *p /= sum;
        }
        Ok(JointPmf { nu, nv, probs })
    }

    /// Outer product `p_u(u) * p_v(v)` of two marginals.
    pub fn product(p_u: &Pmf, p_v: &Pmf) -> Self {
        let mut probs = Vec::with_capacity(p_u.len() * p_v.len());
        for u in 0..p_u.len() {
            for v in 0..p_v.len() {
                probs.push(p_u.get(u) * p_v.get(v));
            }
        }
        JointPmf {
            nu: p_u.len(),
            nv: p_v.len(),
            probs,
        }
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.probs[u * self.nv + v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// Marginal over the first coordinate (sums out `v`).
    pub fn marginal_u(&self) -> Pmf {
        let mut m = vec![0.0; self.nu];
        for u in 0..self.nu {
            for v in 0..self.nv {
                m[u] += self.get(u, v);
            }
        }
        Pmf { probs: m }
    }

    /// Marginal over the second coordinate (sums out `u`).
    pub fn marginal_v(&self) -> Pmf {
        let mut m = vec![0.0; self.nv];
        for u in 0..self.nu {
            for v in 0..self.nv {
                m[v] += self.get(u, v);
            }
        }
        Pmf { probs: m }
    }

    /// Both marginals.
    pub fn marginals(&self) -> (Pmf, Pmf) {
        (self.marginal_u(), self.marginal_v())
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }
}

/// A discrete memoryless channel: one output pmf per input symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc {
    inputs: usize,
    outputs: usize,
    rows: Vec<f64>,
}

impl Dmc {
    /// Validates a transition matrix, one row per input symbol.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let inputs = rows.len();
        if inputs == 0 {
            return Err(Error::InvalidConfig {
                detail: "channel: no input rows".into(),
            });
        }
        let outputs = rows[0].len();
        let mut flat = Vec::with_capacity(inputs * outputs);
        for row in rows {
            if row.len() != outputs {
                return Err(Error::ShapeMismatch {
                    op: "channel construction",
                    expected: outputs,
                    got: row.len(),
                });
            }
            let pmf = Pmf::named("channel row", row)?;
            flat.extend_from_slice(pmf.as_slice());
        }
        Ok(Dmc {
            inputs,
            outputs,
            rows: flat,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    /// Transition row `Gamma(. | x)`.
    pub fn row(&self, x: usize) -> &[f64] {
        &self.rows[x * self.outputs..(x + 1) * self.outputs]
    }

    /// Transition probability `Gamma(y | x)`.
    pub fn prob(&self, y: usize, x: usize) -> f64 {
        self.rows[x * self.outputs + y]
    }
}

/// Per-symbol input cost with a designated free symbol.
///
/// Exactly one symbol (the zero symbol) has cost 0; every other symbol has
/// strictly positive cost. This is what makes vanishing-cost signalling
/// possible: padding with the free symbol is never charged.
#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    costs: Vec<f64>,
    zero_symbol: usize,
}

impl CostFunction {
    pub fn new(costs: Vec<f64>, zero_symbol: usize) -> Result<Self> {
        if zero_symbol >= costs.len() {
            return Err(Error::InvalidCost {
                detail: format!(
                    "zero symbol {zero_symbol} out of range for {} symbols",
                    costs.len()
                ),
            });
        }
        for (x, &c) in costs.iter().enumerate() {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::InvalidCost {
                    detail: format!("cost of symbol {x} is {c}"),
                });
            }
            if x == zero_symbol && c != 0.0 {
                return Err(Error::InvalidCost {
                    detail: format!("zero symbol {x} must have cost 0, got {c}"),
                });
            }
            if x != zero_symbol && c == 0.0 {
                return Err(Error::InvalidCost {
                    detail: format!("symbol {x} has cost 0 but is not the zero symbol"),
                });
            }
        }
        Ok(CostFunction { costs, zero_symbol })
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    pub fn cost(&self, x: usize) -> f64 {
        self.costs[x]
    }

    pub fn zero_symbol(&self) -> usize {
        self.zero_symbol
    }

    /// Smallest positive cost, i.e. the cheapest non-free symbol.
    pub fn c_min(&self) -> f64 {
        self.costs
            .iter()
            .enumerate()
            .filter(|&(x, _)| x != self.zero_symbol)
            .map(|(_, &c)| c)
            .fold(f64::INFINITY, f64::min)
    }

    /// Total cost of an input sequence.
    pub fn sequence_cost(&self, xs: &[usize]) -> f64 {
        xs.iter().map(|&x| self.costs[x]).sum()
    }
}

/// Kullback-Leibler divergence `sum p * log2(p / q)` in bits over raw slices.
///
/// Errors with [`Error::AbsoluteContinuityViolation`] when `p[i] > 0` while
/// `q[i] = 0`. Rounding can push an analytically tiny positive divergence a
/// hair below zero; such values are clamped to 0 so the result is always
/// nonnegative and exactly 0 when `p == q`.
pub fn kl_bits(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::ShapeMismatch {
            op: "kl_divergence",
            expected: p.len(),
            got: q.len(),
        });
    }
    let mut sum = 0.0;
    for (index, (&pi, &qi)) in p.iter().zip(q.iter()).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::AbsoluteContinuityViolation { index, p_val: pi });
        }
        sum += pi * (pi / qi).log2();
    }
    Ok(if sum < 0.0 { 0.0 } else { sum })
}

/// KL divergence in bits, mapping an infinite divergence to `f64::INFINITY`
/// instead of an error.
pub fn kl_bits_or_inf(p: &[f64], q: &[f64]) -> f64 {
    match kl_bits(p, q) {
        Ok(v) => v,
        Err(_) => f64::INFINITY,
    }
}

/// KL divergence between two pmfs on the same alphabet.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    kl_bits(p.as_slice(), q.as_slice())
}

/// KL divergence between two joint pmfs of the same shape.
pub fn kl_divergence_joint(p: &JointPmf, q: &JointPmf) -> Result<f64> {
    if p.nu() != q.nu() || p.nv() != q.nv() {
        return Err(Error::ShapeMismatch {
            op: "kl_divergence_joint",
            expected: p.nu() * p.nv(),
            got: q.nu() * q.nv(),
        });
    }
    kl_bits(p.as_slice(), q.as_slice())
}

/// Checks that a hypothesis pair is admissible: same shape and `Q` strictly
/// positive in every cell (so every divergence against `Q` is finite and the
/// alternative dominates every empirical type).
pub fn validate_problem(p_uv: &JointPmf, q_uv: &JointPmf) -> Result<()> {
    if p_uv.nu() != q_uv.nu() || p_uv.nv() != q_uv.nv() {
        return Err(Error::ShapeMismatch {
            op: "validate_problem",
            expected: p_uv.nu() * p_uv.nv(),
            got: q_uv.nu() * q_uv.nv(),
        });
    }
    for u in 0..q_uv.nu() {
        for v in 0..q_uv.nv() {
            if q_uv.get(u, v) <= 0.0 {
                return Err(Error::SupportAssumptionViolation { u, v });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ber(p1: f64) -> Pmf {
        Pmf::new(vec![1.0 - p1, p1]).unwrap()
    }

    #[test]
    fn kl_of_identical_pmfs_is_exactly_zero() {
        let p = ber(0.3);
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let j = JointPmf::from_rows(vec![vec![0.1, 0.2], vec![0.3, 0.4]]).unwrap();
        assert_eq!(kl_divergence_joint(&j, &j).unwrap(), 0.0);
    }

    #[test]
    fn kl_half_vs_quarter_matches_hand_value() {
        // 0.5 log2(0.5/0.25) + 0.5 log2(0.5/0.75) = 1 - 0.5 log2(3)
        let expected = 1.0 - 0.5 * 3.0f64.log2();
        let got = kl_divergence(&ber(0.5), &ber(0.25)).unwrap();
        assert!((got - expected).abs() < 1e-15, "got {got}");
        assert!((got - 0.207_518_749_639_422).abs() < 1e-12);
    }

    #[test]
    fn kl_against_zero_mass_errors() {
        let err = kl_divergence(&ber(0.5), &ber(0.0)).unwrap_err();
        match err {
            Error::AbsoluteContinuityViolation { index, p_val } => {
                assert_eq!(index, 1);
                assert_eq!(p_val, 0.5);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert_eq!(
            kl_bits_or_inf(ber(0.5).as_slice(), ber(0.0).as_slice()),
            f64::INFINITY
        );
    }

    #[test]
    fn zero_mass_in_p_contributes_nothing() {
        // p = (0, 1) vs q = (0.5, 0.5): only the second cell counts.
        let got = kl_divergence(&ber(1.0), &ber(0.5)).unwrap();
        assert!((got - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constructors_reject_bad_vectors() {
        assert!(matches!(
            Pmf::new(vec![0.5, -0.1, 0.6]),
            Err(Error::NegativeEntry { index: 1, .. })
        ));
        assert!(matches!(
            Pmf::new(vec![0.5, 0.6]),
            Err(Error::NotNormalized { .. })
        ));
        // Within tolerance: accepted and renormalized to an exact simplex point.
        let p = Pmf::new(vec![0.5, 0.5 + 4e-13]).unwrap();
        assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn joint_rejects_ragged_rows() {
        assert!(matches!(
            JointPmf::from_rows(vec![vec![0.5, 0.5], vec![0.0]]),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn marginals_of_outer_product_recover_factors() {
        let pu = Pmf::new(vec![0.2, 0.3, 0.5]).unwrap();
        let pv = ber(0.4);
        let joint = JointPmf::product(&pu, &pv);
        let (mu, mv) = joint.marginals();
        for u in 0..3 {
            assert!((mu.get(u) - pu.get(u)).abs() <= 1e-12);
        }
        for v in 0..2 {
            assert!((mv.get(v) - pv.get(v)).abs() <= 1e-12);
        }
    }

    #[test]
    fn validate_problem_names_offending_cell() {
        let p = JointPmf::from_rows(vec![vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        let q = JointPmf::from_rows(vec![vec![0.5, 0.0], vec![0.25, 0.25]]).unwrap();
        match validate_problem(&p, &q).unwrap_err() {
            Error::SupportAssumptionViolation { u, v } => {
                assert_eq!((u, v), (0, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
        let q_ok = JointPmf::from_rows(vec![vec![0.5, 0.1], vec![0.2, 0.2]]).unwrap();
        assert!(validate_problem(&p, &q_ok).is_ok());
    }

    #[test]
    fn cost_function_checks_free_symbol_rules() {
        let c = CostFunction::new(vec![0.0, 1.0, 2.5], 0).unwrap();
        assert_eq!(c.c_min(), 1.0);
        assert_eq!(c.sequence_cost(&[0, 1, 2, 0]), 3.5);
        assert!(CostFunction::new(vec![0.5, 1.0], 0).is_err());
        assert!(CostFunction::new(vec![0.0, 0.0], 0).is_err());
        assert!(CostFunction::new(vec![0.0, -1.0], 0).is_err());
        assert!(CostFunction::new(vec![0.0, 1.0], 5).is_err());
    }

    #[test]
    fn channel_rows_are_validated_pmfs() {
        let ch = Dmc::from_rows(vec![vec![0.9, 0.1], vec![0.4, 0.6]]).unwrap();
        assert_eq!(ch.prob(1, 0), 0.1);
        assert_eq!(ch.row(1), &[0.4, 0.6]);
        assert!(Dmc::from_rows(vec![vec![0.9, 0.2]]).is_err());
    }

    fn arb_pmf(len: usize) -> impl Strategy<Value = Pmf> {
        prop::collection::vec(0.01..1.0f64, len).prop_map(|w| {
            let s: f64 = w.iter().sum();
            Pmf::new(w.iter().map(|x| x / s).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn kl_nonnegative_and_zero_only_at_equality(
            p in arb_pmf(4),
            q in arb_pmf(4),
        ) {
            let d = kl_divergence(&p, &q).unwrap();
            prop_assert!(d >= 0.0);
            prop_assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
            let tv: f64 = p.as_slice().iter().zip(q.as_slice()).map(|(a, b)| (a - b).abs()).sum();
            if tv > 1e-6 {
                prop_assert!(d > 0.0);
            }
        }

        #[test]
        fn kl_is_invariant_under_relabeling(
            p in arb_pmf(5),
            q in arb_pmf(5),
            seed in 0u64..1000,
        ) {
            // Any fixed permutation applied to both arguments preserves KL.
            let mut order: Vec<usize> = (0..5).collect();
            let rot = (seed % 5) as usize;
            order.rotate_left(rot);
            if seed % 2 == 0 {
                order.swap(0, 1);
            }
            let perm = |x: &Pmf| Pmf::new(order.iter().map(|&i| x.get(i)).collect()).unwrap();
            let d0 = kl_divergence(&p, &q).unwrap();
            let d1 = kl_divergence(&perm(&p), &perm(&q)).unwrap();
            prop_assert!((d0 - d1).abs() <= 1e-12);
        }
    }
}
