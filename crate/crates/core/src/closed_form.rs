//! Exact results for the single-bond model `H = J s.S`.
//!
//! Everything is written in terms of `x = exp(-(2s+1) beta J / 2)`, the
//! Boltzmann ratio of the upper to the lower level, so no exponent grows
//! with `beta`.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::spin::TwiceSpin;

/// Kelvin per meV (`e / k_B` scaled to meV).
pub const KELVIN_PER_MEV: f64 = 11.604_518_12;

/// The two levels of `s.S`, in units of `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoSiteLevels {
    pub ground: Rational64,
    pub ground_multiplicity: u32,
    pub excited: Rational64,
    pub excited_multiplicity: u32,
}

pub fn energies(s: TwiceSpin) -> TwoSiteLevels {
    let t = i64::from(s.twice());
    TwoSiteLevels {
        ground: Rational64::new(-(t + 2), 4),
        ground_multiplicity: s.twice(),
        excited: Rational64::new(t, 4),
        excited_multiplicity: s.twice() + 2,
    }
}

pub fn ground_negativity(s: TwiceSpin) -> f64 {
    1.0 / (f64::from(s.twice()) + 1.0)
}

/// Analytic thermodynamics of one antiferromagnetic `(1/2, s)` bond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteAnalytics {
    pub s: TwiceSpin,
    pub coupling: f64,
}

impl TwoSiteAnalytics {
    pub fn new(s: TwiceSpin, coupling: f64) -> Result<Self> {
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::InvalidChain(format!("coupling must be positive, got {coupling}")));
        }
        Ok(TwoSiteAnalytics { s, coupling })
    }

    pub fn unit(s: TwiceSpin) -> Self {
        TwoSiteAnalytics { s, coupling: 1.0 }
    }

    fn ratio(&self, beta: f64) -> f64 {
        (-(2.0 * self.s.value() + 1.0) * beta * self.coupling / 2.0).exp()
    }

    pub fn log_partition_function(&self, beta: f64) -> f64 {
        let s = self.s.value();
        let x = self.ratio(beta);
        (s + 1.0) * beta * self.coupling / 2.0 + (2.0 * s + 2.0 * (s + 1.0) * x).ln()
    }

    /// `Z = 2s e^{(s+1) beta J/2} + 2(s+1) e^{-s beta J/2}`; overflows to infinity
    /// for very large `beta`, use [`Self::log_partition_function`] there.
    pub fn partition_function(&self, beta: f64) -> f64 {
        self.log_partition_function(beta).exp()
    }

    /// `<s.S>`, dimensionless (not multiplied by `J`).
    pub fn correlator(&self, beta: f64) -> f64 {
        let s = self.s.value();
        let x = self.ratio(beta);
        -s * (s + 1.0) * (1.0 - x) / (2.0 * s + 2.0 * (s + 1.0) * x)
    }

    pub fn thermal_negativity(&self, beta: f64) -> f64 {
        let s = self.s.value();
        let x = self.ratio(beta);
        let bracket = 1.0 - 2.0 * (s + 1.0) * x;
        if bracket <= 0.0 {
            return 0.0;
        }
        2.0 * s / (2.0 * s + 1.0) * bracket / (2.0 * s + 2.0 * (s + 1.0) * x)
    }

    /// `e^{(s+1) beta J/2} - 2(s+1) e^{-s beta J/2}`, scaled by `e^{-(s+1) beta J/2}`.
    pub fn scaled_bracket(&self, beta: f64) -> f64 {
        1.0 - 2.0 * (self.s.value() + 1.0) * self.ratio(beta)
    }

    /// `T_th = J (2s+1) / (2 ln(2s+2))`.
    pub fn threshold_temperature(&self) -> f64 {
        let s = self.s.value();
        self.coupling * (2.0 * s + 1.0) / (2.0 * (2.0 * s + 2.0).ln())
    }
}

pub fn threshold_temperature(s: TwiceSpin) -> f64 {
    TwoSiteAnalytics::unit(s).threshold_temperature()
}

/// Threshold in Kelvin for an exchange constant given in meV.
pub fn threshold_in_kelvin(s: TwiceSpin, coupling_mev: f64) -> Result<f64> {
    if !(coupling_mev > 0.0 && coupling_mev.is_finite()) {
        return Err(Error::InvalidChain(format!("coupling must be positive, got {coupling_mev} meV")));
    }
    Ok(threshold_temperature(s) * coupling_mev * KELVIN_PER_MEV)
}

/// Ground-state correction `delta(s)` in `<s.S>_0 = -s/2 - delta`, supplied externally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinWaveEstimate {
    pub s: TwiceSpin,
    pub delta: f64,
}

impl SpinWaveEstimate {
    pub fn new(s: TwiceSpin, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 0.25) {
            return Err(Error::InvalidConfig(format!("delta must lie in (0, 1/4], got {delta}")));
        }
        Ok(SpinWaveEstimate { s, delta })
    }

    pub fn correlator(&self) -> f64 {
        -self.s.value() / 2.0 - self.delta
    }
}

/// `2 delta / (2s + 1)`.
pub fn spin_wave_negativity(est: &SpinWaveEstimate) -> f64 {
    2.0 * est.delta / (2.0 * est.s.value() + 1.0)
}
