//! Physics checks built on the two solution routes.

mod asymptote;
mod expectation;
mod profile;
mod scan;

pub use asymptote::{asymptote_check, AsymptotePoint, AsymptoteReport};
pub use expectation::{expectation, hellmann_feynman_check, HellmannFeynmanReport, Observable};
pub use profile::{compare_with_polynomial, eigenfunction_profile, Profile, ProfileComparison};
pub use scan::{curve_scan, truncation_b_curves, BCurvePoint, CurveScan, OverlayPoint, ScanSpec};
