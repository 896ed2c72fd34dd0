//! Independence series, filtering diagnostics and closed-form bound calculators.

mod bounds;
mod filter;
mod probability;
mod series;

pub use bounds::{d_sequence, theoretical_bounds, BoundsRecord};
pub use filter::{filter_representatives, full_orbit_in, purge_full_classes, FilterMode};
pub use probability::{
    edge_probability, first_moment_bound, first_moment_log_bound, ln_binomial,
    purged_edge_probability_bound, purged_edge_probability_floor, smallest_s_below, BoundVariant,
    ClassProfile, ClassRegime,
};
pub use series::{
    independence_series, monotone_violations, LowerSources, Method, MonotoneViolation, SeriesEntry,
    SeriesMode, SeriesOptions, SeriesReport,
};
