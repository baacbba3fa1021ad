//! Sweeps and spot checks driven by the command-line tool.

mod checks;
mod partitions;
mod sweep;

pub use checks::{
    check_c4_inequalities, check_cross_formulas, check_identities, check_lemma3, check_omega11_identity,
    counterexample_suite, lemma3_sum, omega11_rhs, positive_vectors, primitive_range, sample_evenly,
    CounterexampleReport, CrossBudget, CrossReport, IdentityReport, InequalityCheck, SuiteReport, ValueCheck,
    OMEGA11_COEFFS, OMEGA11_NAIVE,
};
pub use partitions::{partition_count, partitions, partitions_into, Partition};
pub use sweep::{
    primitive_vectors, sweep_genus, sweep_nesting, theorem2_sweep, theta_domain, theta_sweep, theta_vs_f, Extreme,
    SweepReport, Theorem2Report, ThetaCheck, DEVIATION_PRECISION, THEOREM2_CONSTANT,
};
