//! Nonlinear reparameterization of trainable parameters into gate angles.
//!
//! A raw parameter `theta` never enters a gate directly; the gate sees
//! `sigma(theta)` where `sigma` is one of
//!
//! * linear: `theta`
//! * sine: `sin(theta)`
//! * memristor: `2 asin(sqrt(1 - R(theta)))`, with the oscillatory response
//!   `R(t) = T_osc / (4 pi T_int) * [sin((2 pi t - 2 pi T_int) / T_osc) - sin(2 pi t / T_osc)]`
//!   and `R` clamped into `[0, 1]`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_T_OSC: f64 = 1.0;
pub const DEFAULT_T_INT: f64 = 1.0;

/// Distance in reflectivity from a clamp boundary inside which finite
/// differences of the memristor map stop being trustworthy (the map has a
/// square-root cusp at `R = 0`).
pub const CLAMP_MARGIN: f64 = 0.05;

/// Reflectivities this close to zero are rounding residue of the sine
/// difference (e.g. `T_int = T_osc`) and are treated as exactly zero.
const REFLECTIVITY_SNAP: f64 = 1e-12;

#[inline]
fn snapped_response(t: f64, t_osc: f64, t_int: f64) -> f64 {
    let r = response_unchecked(t, t_osc, t_int);
    if r.abs() <= REFLECTIVITY_SNAP {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ActivationConfig", into = "ActivationConfig")]
pub enum Activation {
    Linear,
    Sine,
    Memristor { t_osc: f64, t_int: f64 },
}

impl Activation {
    pub fn memristor(t_osc: f64, t_int: f64) -> Result<Self> {
        check_periods(t_osc, t_int)?;
        Ok(Activation::Memristor { t_osc, t_int })
    }

    pub fn memristor_default() -> Self {
        Activation::Memristor {
            t_osc: DEFAULT_T_OSC,
            t_int: DEFAULT_T_INT,
        }
    }

    /// Parses the config-file names `linear`, `sin`, `bm`. Memristor periods
    /// fall back to the defaults when absent.
    pub fn from_name(kind: &str, t_osc: Option<f64>, t_int: Option<f64>) -> Result<Self> {
        match kind {
            "linear" => Ok(Activation::Linear),
            "sin" | "sine" => Ok(Activation::Sine),
            "bm" | "memristor" => Activation::memristor(
                t_osc.unwrap_or(DEFAULT_T_OSC),
                t_int.unwrap_or(DEFAULT_T_INT),
            ),
            other => Err(Error::Parse {
                what: "activation".into(),
                msg: format!("unknown kind {other:?} (expected linear, sin or bm)"),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Activation::Linear => "linear",
            Activation::Sine => "sin",
            Activation::Memristor { .. } => "bm",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Activation::Memristor { t_osc, t_int } => check_periods(t_osc, t_int),
            _ => Ok(()),
        }
    }

    /// True when `theta` maps to a reflectivity within `margin` of 0 or 1.
    /// Always false for the smooth activations.
    pub fn near_clamp(&self, theta: f64, margin: f64) -> bool {
        match *self {
            Activation::Memristor { t_osc, t_int } => {
                let r = response_unchecked(theta, t_osc, t_int);
                r.abs() < margin || (r - 1.0).abs() < margin
            }
            _ => false,
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Activation::Memristor { t_osc, t_int } => write!(f, "bm(t_osc={t_osc}, t_int={t_int})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ActivationConfig {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_osc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t_int: Option<f64>,
}

impl TryFrom<ActivationConfig> for Activation {
    type Error = Error;
    fn try_from(c: ActivationConfig) -> Result<Self> {
        Activation::from_name(&c.kind, c.t_osc, c.t_int)
    }
}

impl From<Activation> for ActivationConfig {
    fn from(a: Activation) -> Self {
        let (t_osc, t_int) = match a {
            Activation::Memristor { t_osc, t_int } => (Some(t_osc), Some(t_int)),
            _ => (None, None),
        };
        ActivationConfig {
            kind: a.name().to_string(),
            t_osc,
            t_int,
        }
    }
}

fn check_periods(t_osc: f64, t_int: f64) -> Result<()> {
    if !(t_osc > 0.0 && t_osc.is_finite() && t_int > 0.0 && t_int.is_finite()) {
        return Err(Error::config(format!(
            "memristor periods must be positive, got t_osc = {t_osc}, t_int = {t_int}"
        )));
    }
    Ok(())
}

/// Memristor response at time `t`.
pub fn response(t: f64, t_osc: f64, t_int: f64) -> Result<f64> {
    check_periods(t_osc, t_int)?;
    Ok(response_unchecked(t, t_osc, t_int))
}

#[inline]
fn response_unchecked(t: f64, t_osc: f64, t_int: f64) -> f64 {
    let tau = 2.0 * PI;
    let pre = t_osc / (t_int * 4.0 * PI);
    pre * (((tau * t - tau * t_int) / t_osc).sin() - (tau * t / t_osc).sin())
}

#[inline]
fn response_derivative(t: f64, t_osc: f64, t_int: f64) -> f64 {
    let tau = 2.0 * PI;
    // d/dt of the prefactor times the sine difference; the 2pi/T_osc from the
    // chain rule cancels against T_osc/(4 pi)
    (((tau * t - tau * t_int) / t_osc).cos() - (tau * t / t_osc).cos()) / (2.0 * t_int)
}

/// Beam-splitter angle for a reflectivity, `2 asin(sqrt(1 - r))` with `r`
/// clamped into `[0, 1]`. Non-finite input maps to the `r = 1` end.
pub fn reflectivity_to_angle(r: f64) -> f64 {
    let r = if r.is_nan() { 1.0 } else { r.clamp(0.0, 1.0) };
    2.0 * (1.0 - r).sqrt().asin()
}

pub fn activate(theta: f64, act: &Activation) -> f64 {
    match *act {
        Activation::Linear => theta,
        Activation::Sine => theta.sin(),
        Activation::Memristor { t_osc, t_int } => {
            reflectivity_to_angle(snapped_response(theta, t_osc, t_int))
        }
    }
}

/// `d sigma / d theta`. For the memristor map this is zero wherever the
/// reflectivity is clamped and at the endpoints `R = 0` and `R = 1`.
pub fn activate_derivative(theta: f64, act: &Activation) -> f64 {
    match *act {
        Activation::Linear => 1.0,
        Activation::Sine => theta.cos(),
        Activation::Memristor { t_osc, t_int } => {
            let r = snapped_response(theta, t_osc, t_int);
            if r <= 0.0 || r >= 1.0 {
                return 0.0;
            }
            // d/dR 2 asin(sqrt(1 - R)) = -1 / sqrt(R (1 - R))
            let dangle_dr = -1.0 / (r * (1.0 - r)).sqrt();
            dangle_dr * response_derivative(theta, t_osc, t_int)
        }
    }
}
