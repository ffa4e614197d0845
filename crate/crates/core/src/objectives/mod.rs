//! Concrete submodular objectives.

mod coverage;
mod cut;
mod io;
mod modular;
mod similarity;

pub use coverage::{make_sqrt_coverage, KeywordTable, SqrtCoverage};
pub use cut::{make_directed_cut, CutGraph, DirectedCut};
pub use io::{read_feature_csv, read_keyword_csv};
pub use modular::{make_modular, Modular};
pub use similarity::{
    make_coverage_minus_dispersion, make_facility_location, make_logdet,
    similarity_from_features, CoverageMinusDispersion, FacilityLocation, LogDet,
    ReservoirConfig, SimilarityMatrix, LOGDET_MAX_SET,
};
