//! Bogoliubov coefficients for charged scalars and Dirac fermions in a uniform
//! electric field, the squeezing parameters built from them, and the particle
//! spectra seen by inertial and accelerated observers.
//!
//! Natural units (hbar = c = 1) and unit charge are used throughout. All
//! Bogoliubov phases are fixed to zero, so only coefficient moduli appear.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Phase of alpha (scalar case, `alpha = e^{i phi_1} cosh r`).
pub const PHASE_ALPHA: f64 = 0.0;
/// Phase of beta (scalar case, `beta = e^{i phi_2} sinh r`).
pub const PHASE_BETA: f64 = 0.0;
/// Phase of the fermion alpha coefficient (`alpha_f = e^{i phi} cos r_f`).
pub const PHASE_FERMION: f64 = 0.0;

/// Largest scalar squeezing parameter, reached at infinite acceleration
/// (`|beta| = 1`).
pub const SCALAR_R_MAX: f64 = 0.881_373_587_019_543_f64;
/// Largest fermion squeezing parameter.
pub const FERMION_R_MAX: f64 = FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Scalar,
    Fermion,
}

impl std::str::FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scalar" | "boson" => Ok(Statistics::Scalar),
            "fermion" => Ok(Statistics::Fermion),
            other => Err(Error::domain(format!("unknown statistics '{other}'"))),
        }
    }
}

/// Mass and field strength of a unit-charged particle in a uniform field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    mass: f64,
    field: f64,
}

impl FieldConfig {
    pub fn new(mass: f64, field: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("field", field)?;
        Ok(FieldConfig { mass, field })
    }

    /// Field configuration producing classical acceleration `accel = E / m`.
    pub fn from_acceleration(mass: f64, accel: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("acceleration", accel)?;
        FieldConfig::new(mass, mass * accel)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn acceleration(&self) -> f64 {
        self.field / self.mass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovScalar {
    pub mu2: f64,
    pub alpha_mod: f64,
    pub beta_mod: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovFermion {
    pub mu2: f64,
    pub alpha_mod: f64,
    pub beta_mod: f64,
    pub r_f: f64,
}

/// Dimensionless pair-production exponent `mu^2 = m^2 / 2E`.
pub fn mu_squared(cfg: &FieldConfig) -> f64 {
    cfg.mass * cfg.mass / (2.0 * cfg.field)
}

/// `ln |Gamma(1/2 + i y)|` from the reflection identity
/// `|Gamma(1/2 + iy)|^2 = pi / cosh(pi y)`.
pub fn ln_gamma_modulus_half_plus_i(y: f64) -> f64 {
    0.5 * (PI.ln() - ln_cosh(PI * y))
}

/// `ln |Gamma(i y)|` for `y > 0`, from `|Gamma(iy)|^2 = pi / (y sinh(pi y))`.
pub fn ln_gamma_modulus_i(y: f64) -> f64 {
    0.5 * (PI.ln() - y.ln() - ln_sinh(PI * y))
}

/// Scalar coefficients for a given `mu^2 >= 0`.
///
/// `|alpha|` is evaluated from its Gamma-function form
/// `sqrt(2 pi) e^{-pi mu^2 / 2} / |Gamma(1/2 + i mu^2)|`, which reduces to
/// `sqrt(1 + e^{-2 pi mu^2})`.
pub fn scalar_coefficients(mu2: f64) -> Result<BogoliubovScalar> {
    check_mu2(mu2)?;
    let beta_mod = (-PI * mu2).exp();
    let ln_alpha = 0.5 * (2.0 * PI).ln() - 0.5 * PI * mu2 - ln_gamma_modulus_half_plus_i(mu2);
    Ok(BogoliubovScalar {
        mu2,
        alpha_mod: ln_alpha.exp(),
        beta_mod,
        r: beta_mod.asinh(),
    })
}

/// Fermion coefficients for a given `mu^2 >= 0`.
///
/// `|alpha_f| = sqrt(2 pi / mu^2) e^{-pi mu^2 / 2} / |Gamma(i mu^2)|`, which
/// reduces to `sqrt(1 - e^{-2 pi mu^2})`. At `mu^2 = 0` the limit
/// `|alpha_f| = 0`, `r_f = pi/2` is returned.
pub fn fermion_coefficients(mu2: f64) -> Result<BogoliubovFermion> {
    check_mu2(mu2)?;
    let beta_mod = (-PI * mu2).exp();
    if mu2 == 0.0 {
        return Ok(BogoliubovFermion {
            mu2,
            alpha_mod: 0.0,
            beta_mod,
            r_f: FRAC_PI_2,
        });
    }
    let ln_alpha =
        0.5 * (2.0 * PI / mu2).ln() - 0.5 * PI * mu2 - ln_gamma_modulus_i(mu2);
    Ok(BogoliubovFermion {
        mu2,
        alpha_mod: ln_alpha.exp(),
        beta_mod,
        r_f: beta_mod.asin(),
    })
}

/// Squeezing parameter for a particle of mass `m` with classical
/// acceleration `a`: `asinh(e^{-pi m / 2a})` for scalars and
/// `arcsin(e^{-pi m / 2a})` for fermions.
pub fn r_from_acceleration(mass: f64, accel: f64, stats: Statistics) -> Result<f64> {
    check_positive("mass", mass)?;
    check_positive("acceleration", accel)?;
    let beta = (-PI * mass / (2.0 * accel)).exp();
    Ok(match stats {
        Statistics::Scalar => beta.asinh(),
        Statistics::Fermion => beta.asin(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spectra {
    /// Mean out-particle number of accelerated scalars, `e^{-pi m / a}`.
    pub accelerated: f64,
    /// Thermal spectrum of an accelerated detector, `1 / (e^{2 pi omega / a} - 1)`.
    pub unruh: f64,
    /// `sinh^2 r` evaluated from [`r_from_acceleration`].
    pub sinh2_r: f64,
}

pub fn spectra(mass: f64, accel: f64, omega: f64) -> Result<Spectra> {
    check_positive("omega", omega)?;
    let r = r_from_acceleration(mass, accel, Statistics::Scalar)?;
    Ok(Spectra {
        accelerated: (-PI * mass / accel).exp(),
        unruh: 1.0 / (2.0 * PI * omega / accel).exp_m1(),
        sinh2_r: r.sinh().powi(2),
    })
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {value}")))
    }
}

fn check_mu2(mu2: f64) -> Result<()> {
    if mu2.is_nan() || mu2 < 0.0 {
        Err(Error::domain(format!("mu^2 must be non-negative, got {mu2}")))
    } else {
        Ok(())
    }
}

fn ln_cosh(z: f64) -> f64 {
    let z = z.abs();
    z + (-2.0 * z).exp().ln_1p() - std::f64::consts::LN_2
}

fn ln_sinh(z: f64) -> f64 {
    z + (-(-2.0 * z).exp()).ln_1p() - std::f64::consts::LN_2
}
