//! Classical complexity measures of Boolean functions.

pub mod approx;
pub mod certificate;
pub mod iterated;
pub mod polynomial;
pub mod report;
pub mod sensitivity;
mod ternary;
pub mod tree;

pub use approx::{approx_degree, ApproxWitness};
pub use certificate::{certificate_complexity, certificate_sizes, Certificates};
pub use iterated::{iterated_certificates, IteratedCertificate};
pub use polynomial::{degree, exact_polynomial, MultilinearPolynomial};
pub use report::{ComplexityReport, Measure, ReportOptions};
pub use sensitivity::{
    block_sensitivity, block_sensitivity_at, block_sensitivity_witness, sensitive_mask,
    sensitivity, sensitivity_at,
};
pub use tree::{det_complexity, DecisionTree};
