//! Non-relativistic Gaussian wave packets in a linear potential and the
//! symmetric/antisymmetric two-body states built from them.
//!
//! The purity of a two-body state is assembled from numerically integrated
//! one-dimensional overlaps; nothing here assumes the closed-form Schmidt
//! number, which is provided separately by [`schmidt_number_closed`] for
//! comparison.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// Half-width of the overlap integration window, in packet widths.
pub const WINDOW_SIGMAS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketParams {
    pub mass: f64,
    /// Squared-width parameter `b`; the t = 0 probability density has variance `b`.
    pub b: f64,
    pub x0: f64,
    pub v0: f64,
    pub accel: f64,
}

impl PacketParams {
    pub fn new(mass: f64, b: f64, x0: f64, v0: f64, accel: f64) -> Result<Self> {
        check_shape(mass, b)?;
        Ok(PacketParams { mass, b, x0, v0, accel })
    }

    /// Classical trajectory followed by the packet centre.
    pub fn center(&self, t: f64) -> f64 {
        self.x0 + self.v0 * t + 0.5 * self.accel * t * t
    }

    /// Standard deviation of `|psi|^2` at time `t`.
    pub fn sigma(&self, t: f64) -> f64 {
        packet_sigma(self.mass, self.b, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Two particles sharing mass, width and initial position. `a1` is attached
/// to the `x` coordinate and `a2` to `y`; the velocities are exchanged
/// between the two product terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoBodyParams {
    pub mass: f64,
    pub b: f64,
    pub x0: f64,
    pub v1: f64,
    pub v2: f64,
    pub a1: f64,
    pub a2: f64,
    pub sign: Sign,
}

impl TwoBodyParams {
    /// Frame with `v1 = 0`, `v2 = v`, chosen so that `m v sqrt(b) = v_tilde`,
    /// at unit mass and width.
    pub fn from_v_tilde(v_tilde: f64, sign: Sign) -> Self {
        TwoBodyParams {
            mass: 1.0,
            b: 1.0,
            x0: 0.0,
            v1: 0.0,
            v2: v_tilde,
            a1: 0.0,
            a2: 0.0,
            sign,
        }
    }

    pub fn v_tilde(&self) -> f64 {
        (self.v2 - self.v1) * self.mass * self.b.sqrt()
    }

    fn validate(&self) -> Result<()> {
        check_shape(self.mass, self.b)?;
        if self.sign == Sign::Minus && self.v1 == self.v2 {
            return Err(Error::DegenerateState(
                "antisymmetric state with equal velocities vanishes identically".into(),
            ));
        }
        Ok(())
    }

    fn packet(&self, v: f64, a: f64) -> PacketParams {
        PacketParams {
            mass: self.mass,
            b: self.b,
            x0: self.x0,
            v0: v,
            accel: a,
        }
    }

    /// The single-particle factors `(A_0, B_0), (A_1, B_1)` of
    /// `Psi = N [A_0(x) B_0(y) +- A_1(x) B_1(y)]`.
    pub fn factors(&self) -> [(PacketParams, PacketParams); 2] {
        [
            (self.packet(self.v1, self.a1), self.packet(self.v2, self.a2)),
            (self.packet(self.v2, self.a1), self.packet(self.v1, self.a2)),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchmidtResult {
    pub schmidt_number: f64,
    pub purity: f64,
}

impl SchmidtResult {
    fn from_purity(purity: f64) -> Self {
        SchmidtResult {
            schmidt_number: 1.0 / purity,
            purity,
        }
    }
}

/// Free Gaussian packet centred at the origin.
pub fn free_packet_amplitude(x: f64, t: f64, mass: f64, b: f64) -> Complex64 {
    let w = Complex64::new(4.0 * b, 2.0 * t / mass);
    let norm = (8.0 * b / std::f64::consts::PI).powf(0.25);
    (-(x * x) / w).exp() * norm / w.sqrt()
}

/// Packet whose centre follows `x0 + v0 t + a t^2 / 2` under the potential
/// `-m a x`.
pub fn accelerated_packet_amplitude(x: f64, t: f64, p: &PacketParams) -> Complex64 {
    let m = p.mass;
    let (v, a) = (p.v0, p.accel);
    let phase = m * (v * x + a * x * t - 0.5 * a * v * t * t - a * a * t.powi(3) / 6.0 - 0.5 * v * v * t);
    free_packet_amplitude(x - p.center(t), t, m, p.b) * Complex64::from_polar(1.0, phase)
}

pub fn packet_sigma(mass: f64, b: f64, t: f64) -> f64 {
    (b + t * t / (4.0 * mass * mass * b)).sqrt()
}

/// `<p|q>` at time `t` by adaptive quadrature over a window spanning both
/// packet centres.
pub fn overlap(p: &PacketParams, q: &PacketParams, t: f64, tol: Tolerance) -> Result<Complex64> {
    let sigma = p.sigma(t).max(q.sigma(t));
    let (cp, cq) = (p.center(t), q.center(t));
    let lo = cp.min(cq) - WINDOW_SIGMAS * sigma;
    let hi = cp.max(cq) + WINDOW_SIGMAS * sigma;
    let est = quadrature::integrate(
        |x| accelerated_packet_amplitude(x, t, p).conj() * accelerated_packet_amplitude(x, t, q),
        lo,
        hi,
        tol,
    )?;
    Ok(est.value)
}

/// A two-body state evaluated at a fixed time, with its Gram matrices.
#[derive(Debug, Clone)]
pub struct TwoBodyState {
    params: TwoBodyParams,
    t: f64,
    /// `gram_x[i][j] = <A_i|A_j>`.
    gram_x: [[Complex64; 2]; 2],
    /// `gram_y[i][j] = <B_i|B_j>`, with the sign folded into `B_1`.
    gram_y: [[Complex64; 2]; 2],
    norm_factor: f64,
}

impl TwoBodyState {
    pub fn new(params: TwoBodyParams, t: f64) -> Result<Self> {
        Self::with_tolerance(params, t, Tolerance::default())
    }

    pub fn with_tolerance(params: TwoBodyParams, t: f64, tol: Tolerance) -> Result<Self> {
        params.validate()?;
        let f = params.factors();
        let s = params.sign.factor();
        let mut gram_x = [[Complex64::default(); 2]; 2];
        let mut gram_y = [[Complex64::default(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                gram_x[i][j] = overlap(&f[i].0, &f[j].0, t, tol)?;
                let sy = if i == j { 1.0 } else { s };
                gram_y[i][j] = overlap(&f[i].1, &f[j].1, t, tol)? * sy;
            }
        }
        let mut norm2 = Complex64::default();
        for i in 0..2 {
            for j in 0..2 {
                norm2 += gram_x[i][j] * gram_y[i][j];
            }
        }
        if norm2.re < 1e-14 {
            return Err(Error::DegenerateState(format!(
                "two-body norm^2 = {:.3e} is numerically zero",
                norm2.re
            )));
        }
        Ok(TwoBodyState {
            params,
            t,
            gram_x,
            gram_y,
            norm_factor: 1.0 / norm2.re.sqrt(),
        })
    }

    pub fn params(&self) -> &TwoBodyParams {
        &self.params
    }

    pub fn norm_factor(&self) -> f64 {
        self.norm_factor
    }

    pub fn amplitude(&self, x: f64, y: f64) -> Complex64 {
        let f = self.params.factors();
        let t = self.t;
        let first = accelerated_packet_amplitude(x, t, &f[0].0) * accelerated_packet_amplitude(y, t, &f[0].1);
        let second = accelerated_packet_amplitude(x, t, &f[1].0) * accelerated_packet_amplitude(y, t, &f[1].1);
        (first + second * self.params.sign.factor()) * self.norm_factor
    }

    /// Purity of the one-particle reduced state,
    /// `N^4 sum_{ijkl} <A_k|A_i><A_l|A_j><B_l|B_i><B_k|B_j>`.
    pub fn purity(&self) -> Result<f64> {
        let (gx, gy) = (&self.gram_x, &self.gram_y);
        let mut p = Complex64::default();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        p += gx[k][i] * gx[l][j] * gy[l][i] * gy[k][j];
                    }
                }
            }
        }
        let p = p * self.norm_factor.powi(4);
        if p.im.abs() > 1e-9 || !(p.re > 0.0 && p.re <= 1.0 + 1e-9) {
            return Err(Error::Convergence {
                routine: "purity",
                detail: format!("purity {p} is not a real number in (0, 1]"),
            });
        }
        Ok(p.re.min(1.0))
    }

    pub fn schmidt(&self) -> Result<SchmidtResult> {
        self.purity().map(SchmidtResult::from_purity)
    }
}

pub fn two_body_amplitude(x: f64, y: f64, t: f64, p: &TwoBodyParams) -> Result<Complex64> {
    Ok(TwoBodyState::new(*p, t)?.amplitude(x, y))
}

pub fn purity(p: &TwoBodyParams, t: f64) -> Result<f64> {
    TwoBodyState::new(*p, t)?.purity()
}

pub fn schmidt_number_numeric(p: &TwoBodyParams, t: f64) -> Result<SchmidtResult> {
    TwoBodyState::new(*p, t)?.schmidt()
}

/// Closed-form Schmidt number in the frame `v1 = 0, v2 = v`, with
/// `v_tilde = v m sqrt(b)`.
pub fn schmidt_number_closed(v_tilde: f64, sign: Sign) -> f64 {
    match sign {
        Sign::Minus => 2.0,
        Sign::Plus => {
            let f = (-v_tilde * v_tilde).exp();
            2.0 / (1.0 + 4.0 * f / ((1.0 + f) * (1.0 + f)))
        }
    }
}

fn check_shape(mass: f64, b: f64) -> Result<()> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::domain(format!("mass must be positive, got {mass}")));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::domain(format!("width parameter b must be positive, got {b}")));
    }
    Ok(())
}
