//! Constructive certificates of uncommonness and the route selection that
//! produces them.

pub mod classify;
pub mod gowers;
pub mod pipeline;
pub mod psi;
pub mod report;
pub mod search;
pub mod theorem;

pub use classify::{classify_single_equation, EquationClass};
pub use pipeline::{uncommonness_pipeline, PipelineConfig, PipelineOutcome, RouteChoice};
pub use report::{verify_report, CertificateReport, ClassificationReport, Route, VerifyOutcome};
pub use search::{random_balanced_search, Sampler, SearchConfig};
pub use theorem::{critical_sum, theorem_main_certify};
