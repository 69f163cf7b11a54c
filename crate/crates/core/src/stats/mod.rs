//! Fixed-point and cycle statistics of tower groups and almost simple groups.

mod bound;
mod coset;
mod tower;

pub use bound::{few_cycles_bound, FewCyclesBound};
pub use coset::{
    coset_fpf_table, fpf_proportion, olds_coset_formula, symmetric_coset_table, CosetFpfTable, CosetRow,
    COSET_CAP,
};
pub use tower::{
    cycle_count_distribution, cycle_type_distribution, fixed_point_distribution, full_cycle_proportion,
    sampled_fixed_points, CountDistribution, FixedPointDistribution, Mode, Proportion, EXACT_MAX_DEGREE,
    EXACT_MAX_DEPTH, SHARD_SIZE,
};
