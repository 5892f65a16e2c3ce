//! Stein exponents for distributed hypothesis testing over a discrete
//! memoryless channel, together with the coding schemes that achieve them.
//!
//! A sensor observes `U^n`, a decision center observes `V^n`, and the sensor
//! may talk to the center only through a DMC under a vanishing communication
//! budget (sublinearly many channel uses, or sublinear input cost, enforced
//! almost surely or in expectation). The crate computes the best achievable
//! type-II error exponent under each budget, decides which of two structural
//! channel classes applies, and validates the answers numerically:
//!
//! * [`prob`] - pmfs, joint pmfs, channels, input costs, KL divergence.
//! * [`typicality`] - empirical types, strong typicality, exact probabilities
//!   of type-level events by direct enumeration.
//! * [`channel`] - connectivity classification and channel diagnostics.
//! * [`exponents`] - information projections and the exponent formulas.
//! * [`schemes`] - the achievability schemes (encoders and decision rules).
//! * [`evaluation`] - exact and Monte Carlo error probabilities, exponent
//!   fits, cost audits.
//! * [`oracle`] - slow independent solvers used to cross-check the fast ones.
//! * [`selftest`] - a built-in battery of cross-checks against frozen values.
//! * [`config`] / [`cli`] - file-driven experiment definitions and the
//!   commands behind the `steinx` binary.
//!
//! Each major capability has a runnable demo under `examples/`:
//!
//! ```text
//! cargo run --example classify_channel    # connectivity dichotomy + diagnostics
//! cargo run --example exponent_report     # E1/E2/E3 and per-regime exponents
//! cargo run --example dichotomy_swap      # same sources, two channels, two answers
//! cargo run --example exact_error_curves  # exact alpha/beta across a blocklength grid
//! cargo run --example monte_carlo_check   # simulation vs exact values
//! cargo run --example cost_audit          # communication cost accounting
//! cargo run --example finite_k_threshold  # how many channel uses are enough
//! ```

pub mod channel;
pub mod cli;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod exponents;
pub mod oracle;
pub mod prob;
pub mod schemes;
pub mod selftest;
pub mod typicality;

pub use error::{Error, Result};
pub use prob::{CostFunction, Dmc, JointPmf, Pmf};
