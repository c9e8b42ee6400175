//! Counting, estimating, sampling and switching multigraphs with a
//! prescribed degree sequence and restricted loop and link multiplicities.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN.

pub mod arith;
pub mod asymptotic;
pub mod calculus;
pub mod degree;
pub mod error;
pub mod exact;
pub mod naive;
pub mod pairing;
pub mod series;
pub mod switching;

pub use asymptotic::{
    correction_factors, corollary_q, corollary_regular_estimate, simple_pairing_asymptotic, theorem1_estimate,
    CorrectionFactors, Estimate,
};
pub use calculus::{feasible, from_counting_setup, hat_alpha_path, verify_bound, Certificate, CountingSetup, FlowNetwork};
pub use degree::{compute_moments, reduce_support, validate, DegreeSequence, Multigraph, MultiplicitySet, Reduction};
pub use error::{Error, Result};
pub use exact::{count_class, count_exact, count_region, enumerate_multigraphs, ClassSignature, Region};
pub use naive::{
    expected_row_sum, g_naive, magic_factor, probability_of_matrix, sample_matrix, solve_p0, theorem5_prediction,
    NaiveParams, PMode, TruncatedSeries,
};
pub use pairing::{pairings_of, project, sample_pairing, total_pairings, w_weight, Pairing};
pub use series::{sum_with_bounds_41, sum_with_bounds_42, Envelope, Spec41, Spec42};
pub use switching::{
    active_colour_of, apply_move, enumerate_moves, nominal_bounds, reverse_count, stats, MultStats,
    NominalBounds, SwitchContext, SwitchingMove, Thresholds,
};
