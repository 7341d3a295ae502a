//! Policy cases: schema, ingestion, derived features, encodings and splits.

pub mod case;
pub mod encode;
pub mod io;
pub mod schema;
pub mod split;
pub mod summary;

pub use case::{net_iga, rescale_p90, tally_alignments, zero_noncommittal, AlignmentTally, PolicyCase};
pub use encode::{encode, EncodedMatrix, FeatureSetId, FeatureSetSpec, P90Scale, PolicyEncoding};
pub use io::{load_cases, load_cases_from_path, load_cases_with_mapping, net_iga_mismatches, write_cases, NameMapping};
pub use schema::{PolicyArea, PolicyDomain, IG_COUNT};
pub use split::{random_split, retrodiction_split, SplitKind, SplitPlan, DEFAULT_CUTOFF_YEAR};
pub use summary::{domain_counts, DomainCounts};
