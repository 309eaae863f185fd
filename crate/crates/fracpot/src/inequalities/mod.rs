//! The verification harness: exponent-relation classification, empirical
//! checks of every boundedness theorem, pointwise estimate, embedding and
//! bilinear inequality, and the named suites tying them together.

pub mod checks;
pub mod exponents;
pub mod report;
pub mod suites;

pub use checks::{
    adams_check, boundedness_ratio, domination_check, embedding_check, hedberg_check, hls_form,
    holder_lemma_check, shell_lemma_check, FieldCache, Harness, HarnessSettings, HlsForm,
    OperatorTag, SourceNorm, TargetNorm, EXACT_CONSTANT_TOL, STABILITY_THRESHOLD,
};
pub use exponents::{classify, Classification, DerivedExponents, ExponentConfig, TheoremTag};
pub use report::{ConfigSummary, RatioEntry, Verdict, VerificationReport};
pub use suites::{run_suite, SuiteOutcome, SUITE_NAMES};
