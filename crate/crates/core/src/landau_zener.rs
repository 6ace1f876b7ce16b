//! The local two-channel transition matrix of one avoided crossing.
//!
//! For transition strength `gamma` and semiclassical parameter `h`, with
//! `delta = gamma / h`, the connection across the crossing is governed by
//! the amplitudes
//!
//! ```text
//! A = i h^{1/2 + i delta} Gamma(1 + i delta) e^{ pi delta / 2} / (sqrt(2 pi) alpha)
//! B = i h^{1/2 + i delta} Gamma(1 + i delta) e^{-pi delta / 2} / (sqrt(2 pi) alpha)
//! ```
//!
//! where `alpha = sqrt(gamma) e^{i arg_alpha}` carries a free gauge phase.
//! The transition matrix is `T = (1/A) [[-B, 1], [B^2 - A^2, -B]]`. Since
//! `B = A e^{-pi delta}` exactly and `|A|^2 = e^{pi delta} / (2 sinh(pi delta))`
//! by the Gamma reflection identity, the matrix reduces to
//!
//! ```text
//! T = [[-tau, rho e^{-i theta_a}], [-rho e^{i theta_a}, -tau]],
//! tau = e^{-pi delta},  rho = sqrt(1 - tau^2),  theta_a = arg A,
//! ```
//!
//! which is unitary by construction; the module builds this reduced form
//! (amplitudes through log-space so nothing overflows) and cross-checks it
//! against the direct formula in tests. The diagonal (magnitude `tau`) is
//! the amplitude for staying on a smooth branch through the crossing, the
//! off-diagonal (magnitude `rho`) the amplitude for adiabatically staying
//! on a sorted branch.
//!
//! The phases `delta ln h` and `-delta ln gamma / 2...` hidden in `theta_a`
//! diverge as `h -> 0` at fixed `delta`; they are not removed here — the
//! assembly layer cancels them against regularized-action counter-terms.

use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numeric::{log_gamma, CMat, UnitaryMatrix};

/// Beyond this `delta = gamma / h` the crossing is treated as fully
/// adiabatic: `tau = e^{-pi delta}` (< 4e-69) is flushed to exact zero and
/// the result is flagged.
pub const DELTA_FLUSH: f64 = 50.0;

/// The two-channel transition data of one avoided crossing.
#[derive(Debug, Clone)]
pub struct LocalScattering {
    /// `gamma / h`.
    pub delta: f64,
    /// Gauge phase of `alpha`.
    pub arg_alpha: f64,
    /// The reduced transition matrix (exactly unitary by construction).
    pub t_matrix: UnitaryMatrix,
    /// The amplitude `A`; `None` at `gamma = 0`, where `|A|` diverges while
    /// the matrix itself has the finite limit `-identity`.
    pub a_amp: Option<C64>,
    /// The amplitude `B = A e^{-pi delta}`; `None` exactly when `a_amp` is.
    pub b_amp: Option<C64>,
    /// `arg A` (well-defined for every `gamma >= 0`).
    pub theta_a: f64,
    /// Smooth-branch (diagonal) magnitude `e^{-pi delta}`, 0 when flushed.
    pub tau: f64,
    /// Sorted-branch (off-diagonal) magnitude `sqrt(1 - tau^2)`.
    pub rho: f64,
    /// True when `delta > DELTA_FLUSH` and `tau` was flushed to zero.
    pub adiabatic_flush: bool,
}

/// Build the local transition matrix for one avoided crossing.
pub fn lz_matrix(gamma: f64, h: f64, arg_alpha: f64) -> Result<LocalScattering> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::Domain(format!(
            "transition strength gamma = {gamma} must be finite and >= 0"
        )));
    }
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::Domain(format!("h = {h} must be finite and > 0")));
    }
    if !arg_alpha.is_finite() {
        return Err(Error::Domain("arg_alpha must be finite".into()));
    }

    let delta = gamma / h;
    let adiabatic_flush = delta > DELTA_FLUSH;
    let tau = if adiabatic_flush { 0.0 } else { (-PI * delta).exp() };
    let rho = (1.0 - tau * tau).sqrt();

    let lg = log_gamma(C64::new(1.0, delta))?;
    let theta_a = FRAC_PI_2 + delta * h.ln() + lg.im - arg_alpha;

    let (a_amp, b_amp) = if gamma > 0.0 {
        // |A| through log space: sqrt(h) |Gamma(1+i delta)| e^{pi delta/2}
        // / (sqrt(2 pi gamma)); the e^{pi delta/2} growth cancels against
        // the Gamma decay, so the exponent stays moderate at any delta.
        let ln_abs_a = 0.5 * h.ln() + lg.re + 0.5 * PI * delta
            - 0.5 * (2.0 * PI).ln()
            - 0.5 * gamma.ln();
        let a = C64::from_polar(ln_abs_a.exp(), theta_a);
        let b = a * (-PI * delta).exp();
        (Some(a), Some(b))
    } else {
        (None, None)
    };

    let mut t = CMat::zeros(2);
    t[(0, 0)] = C64::new(-tau, 0.0);
    t[(0, 1)] = C64::from_polar(rho, -theta_a);
    t[(1, 0)] = -C64::from_polar(rho, theta_a);
    t[(1, 1)] = C64::new(-tau, 0.0);

    Ok(LocalScattering {
        delta,
        arg_alpha,
        t_matrix: UnitaryMatrix::new(t),
        a_amp,
        b_amp,
        theta_a,
        tau,
        rho,
        adiabatic_flush,
    })
}

/// Stokes phase of one avoided crossing:
/// `phi_S(delta) = pi/4 + delta (ln delta - 1) + arg Gamma(1 - i delta)`.
///
/// This is the h-independent part of the adiabatic (stay) amplitude's phase
/// once the `delta ln(delta h)` action divergence has been moved into the
/// regularized cycle action. It decreases monotonically from `pi/4` at
/// `delta = 0` toward `0` as `delta -> infinity`.
pub fn stokes_phase(delta: f64) -> Result<f64> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::Domain(format!(
            "stokes_phase requires finite delta >= 0, got {delta}"
        )));
    }
    if delta == 0.0 {
        return Ok(std::f64::consts::FRAC_PI_4);
    }
    // arg Gamma(1 - i delta) = -Im log Gamma(1 + i delta).
    let lg = log_gamma(C64::new(1.0, delta))?;
    Ok(std::f64::consts::FRAC_PI_4 + delta * (delta.ln() - 1.0) - lg.im)
}
