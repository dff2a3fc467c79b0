//! Validation tooling and the commands behind the `tsou` binary.

pub mod commands;
pub mod plot;
pub mod stats;

pub use commands::{
    bench_accept, oracle_cf, path_csv, simulate, stationary, stationary_marginals, transition_draws, AcceptReport, CfPoint, CfReport,
    DirectionReport, StationaryReport,
};
pub use stats::{kde, ks_critical, ks_critical_two, ks_pvalue, ks_statistic, ks_two_sample, kolmogorov_sf, silverman_bandwidth, Bandwidth, KdeSpec};
