//! Monte Carlo integration over dyadic level sets, threshold fits, L^p masses
//! and the Fréchet metric.

mod checks;
pub mod fit;
mod mass;
mod metric;
mod region;
mod shells;
mod threshold;

use serde::{Deserialize, Deserializer, Serializer};

pub use checks::{
    cauchy_derivative, cauchy_norm_control, log_law_fit, submean_check, CauchyControl, LogLawFit, LogLawPoint,
    SubmeanReport, SubmeanTrial,
};
pub use fit::Verdict;
pub use mass::{lp_mass, lp_mass_multi, MassEstimate, MassValue};
pub use metric::{
    canonical, distance_from_masses, metric_distance, scalar_continuity_check, Flavor, MetricDistance, MetricSpec,
    MetricTerm,
};
pub use region::Region;
pub use shells::{default_shells, shell_profile, LevelShellProfile};
pub use threshold::{estimate_threshold, PVerdict, ThresholdVerdict, MARGIN, P_MAX};

/// Writes non-finite floats as the strings "inf", "-inf", "nan".
pub(crate) fn ser_inf<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Num(f64),
    Str(String),
}

pub(crate) fn de_inf<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    match NumOrStr::deserialize(d)? {
        NumOrStr::Num(v) => Ok(v),
        NumOrStr::Str(s) => match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => Ok(f64::INFINITY),
            "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => other.parse().map_err(serde::de::Error::custom),
        },
    }
}
