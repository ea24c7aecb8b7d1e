//! Writhe, geometric features of tight knots, and conjecture reports.

mod features;
mod library;
mod report;
mod writhe;

pub use features::{detect_features, Features, KINK_EXCESS_TOL, STRAIGHT_ANGLE_TOL};
pub use library::{parse_summands, CompositeEntry, KnotLibrary};
pub use report::{
    percent_difference,
    connect_sum_csv, connect_sum_report, writhe_additivity_report, writhe_report_csv,
    ConnectSumRow, WritheReportRow, ANOMALY_MIN_WRITHE, ANOMALY_PCT, ROPE_SAVED_PER_SUM,
};
pub use writhe::{pair_solid_angle, writhe};
