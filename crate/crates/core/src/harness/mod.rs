//! Monte-Carlo error measurement, point search and table reproduction.

mod data;
mod measure;
mod search;
mod studies;
mod tables;

pub use data::{curated_points, Curated, CURATED_SIZES};
pub use measure::{
    compare_reports, measure, measure_error, running_error_study, trial_inputs, Algorithm, Comparison, ErrorReport,
    Experiment, RunningErrorStudy,
};
pub use search::{candidate_pool, search_points, Candidate, Move, SearchConfig, SearchResult, SearchState};
pub use studies::{
    compare_chebyshev, growth_analysis, modified_vs_unmodified, strongest_unmodified, ChebyshevRow, GrowthPoint, GrowthStats,
    ModifiedComparison,
};
pub use tables::{
    channel_rows, chebyshev_rows, combined_rows, reproduce_table, table1_rows, table2_rows, table3_rows, two_decimals,
    ChannelRow, CombinedRow, ErrorRow, MixedRow, MultCell, Table, Table1Row, TableId, TableOptions, CHANNEL_COUNTS,
    CHANNEL_ROWS, TABLE1_POINTS,
};
