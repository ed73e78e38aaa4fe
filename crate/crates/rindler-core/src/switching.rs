//! Catalog of smooth, compactly supported switching functions.
//!
//! Two constructions are provided, plus the adiabatic rescaling operation:
//!
//! * **Bump product**: χ(τ) = f(τ)·f(1/κ − τ) with
//!   f(τ) = (κτ)^{−3/2} e^{−1/(4κτ)} for τ > 0 and f(τ) = 0 otherwise.
//!   The factor is C∞ (all derivatives vanish as τ → 0⁺), so χ is a smooth
//!   window supported exactly on [0, 1/κ].
//! * **Plateau**: a smooth monotone ramp 0 → 1 on [0, Δτ_s] built as the
//!   normalized incomplete integral of the bump e^{−1/(u(Δτ_s−u))}, a flat
//!   stretch of duration Δτ at height 1, and the mirrored ramp down —
//!   support [0, 2Δτ_s + Δτ].
//! * **Adiabatic rescaling**: χ(τ) → χ(τ/λ). For the plateau kind the
//!   rescaling stretches the flat duration only (Δτ → λΔτ) and leaves the
//!   switching tails fixed; for the bump product it dilates the whole
//!   window.
//!
//! Values are exactly zero outside the declared support. The factor
//! e^{−1/(4κτ)} underflows the `f64` range once κτ drops below ~1/2800;
//! evaluation returns exact 0 there (the true value is below 10^{−299}).

use num_complex::Complex64;

use crate::quad;
use crate::{Error, Result};

/// Threshold on the (positive) argument of `exp`; beyond it the result
/// underflows to zero in `f64` and we return exact 0 instead.
const EXP_UNDERFLOW: f64 = 745.0;

/// The C∞ factor f(τ) = (κτ)^{−3/2} e^{−1/(4κτ)} for τ > 0, and 0 for
/// τ ≤ 0. Finite for every τ; exactly 0 once e^{−1/(4κτ)} leaves the
/// representable range (κτ ≲ 1/2800).
pub fn bump_factor(tau: f64, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::invalid("kappa", format!("must be > 0, got {kappa}")));
    }
    Ok(bump_factor_raw(tau, kappa))
}

fn bump_factor_raw(tau: f64, kappa: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    let x = kappa * tau;
    let expo = 1.0 / (4.0 * x);
    if expo > EXP_UNDERFLOW {
        return 0.0;
    }
    x.powf(-1.5) * (-expo).exp()
}

/// Complex continuation of [`bump_factor`] (principal branch of the power),
/// valid for Re z > 0. The one-sided transform ∫₀^∞ e^{−iωτ} f(τ) dτ of
/// this factor has the closed form (2√π/κ) e^{−√(iω/κ)}; evaluating the
/// integral on a rotated ray through this continuation is how the Fourier
/// machinery is checked against that closed form.
pub fn bump_factor_c(z: Complex64, kappa: f64) -> Complex64 {
    let x = kappa * z;
    let w = -0.25 / x;
    if w.re < -EXP_UNDERFLOW {
        return Complex64::new(0.0, 0.0);
    }
    x.powc(Complex64::new(-1.5, 0.0)) * w.exp()
}

/// The ramp generator b(u) = e^{−1/(u(d−u))} on (0, d), 0 outside.
pub(crate) fn plateau_bump(u: f64, d: f64) -> f64 {
    if u <= 0.0 || u >= d {
        return 0.0;
    }
    let q = u * (d - u);
    let expo = 1.0 / q;
    if expo > EXP_UNDERFLOW {
        return 0.0;
    }
    (-expo).exp()
}

/// Complex continuation of [`plateau_bump`], used by the rotated-contour
/// Fourier transform of the ramp generator.
pub(crate) fn plateau_bump_c(z: Complex64, d: f64) -> Complex64 {
    let w = -1.0 / (z * (d - z));
    if w.re < -EXP_UNDERFLOW {
        return Complex64::new(0.0, 0.0);
    }
    w.exp()
}

/// Which catalog construction a [`SwitchingFunction`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchKind {
    /// χ(τ) = f(τ)·f(1/κ − τ), support [0, 1/κ].
    BumpProduct,
    /// Ramp–flat–ramp window, support [0, 2Δτ_s + Δτ].
    Plateau,
    /// A bump product evaluated as χ(τ/λ), support [0, λ/κ].
    Rescaled,
}

/// A smooth switching window χ(τ) of compact support.
///
/// Immutable after construction; evaluation is pure, so values can be
/// shared freely across worker threads.
#[derive(Debug, Clone)]
pub struct SwitchingFunction {
    pub kind: SwitchKind,
    /// Inverse-time scale of the bump-product construction.
    pub kappa: f64,
    /// Plateau ramp (tail) duration Δτ_s.
    pub delta_tau_s: f64,
    /// Plateau flat duration Δτ.
    pub delta_tau: f64,
    /// Accumulated adiabatic scale λ (1 for an unscaled window).
    pub lambda: f64,
    /// Closed support interval [τ_min, τ_max]; χ(τ) = 0 outside.
    pub support: [f64; 2],
    /// Plateau only: normalization ∫₀^{Δτ_s} e^{−1/(u(Δτ_s−u))} du.
    ramp_norm: f64,
}

/// The bump-product window χ(τ) = f(τ)·f(1/κ − τ) on [0, 1/κ].
pub fn bump_product_switch(kappa: f64) -> Result<SwitchingFunction> {
    if !(kappa > 0.0) {
        return Err(Error::invalid("kappa", format!("must be > 0, got {kappa}")));
    }
    Ok(SwitchingFunction {
        kind: SwitchKind::BumpProduct,
        kappa,
        delta_tau_s: 0.0,
        delta_tau: 0.0,
        lambda: 1.0,
        support: [0.0, 1.0 / kappa],
        ramp_norm: 0.0,
    })
}

/// The plateau window: smooth ramp up over [0, Δτ_s], exactly 1 on
/// [Δτ_s, Δτ_s + Δτ], mirrored ramp down over the final Δτ_s.
pub fn plateau_switch(delta_tau_s: f64, delta_tau: f64) -> Result<SwitchingFunction> {
    if !(delta_tau_s > 0.0) {
        return Err(Error::invalid(
            "delta_tau_s",
            format!("ramp duration must be > 0, got {delta_tau_s}"),
        ));
    }
    if !(delta_tau >= 0.0) {
        return Err(Error::invalid(
            "delta_tau",
            format!("flat duration must be >= 0, got {delta_tau}"),
        ));
    }
    let d = delta_tau_s;
    let (norm, _) = quad::adaptive(
        |u| plateau_bump(u, d),
        &[0.0, 0.5 * d, d],
        0.0,
        1e-13,
        400,
    )?;
    Ok(SwitchingFunction {
        kind: SwitchKind::Plateau,
        kappa: 0.0,
        delta_tau_s,
        delta_tau,
        lambda: 1.0,
        support: [0.0, 2.0 * delta_tau_s + delta_tau],
        ramp_norm: norm,
    })
}

/// The adiabatic rescaling χ(τ) → χ(τ/λ). Bump-product windows dilate as a
/// whole; plateau windows stretch the flat duration only (Δτ → λΔτ),
/// keeping the switching tails fixed.
pub fn adiabatic_rescale(chi: &SwitchingFunction, lambda: f64) -> Result<SwitchingFunction> {
    if !(lambda > 0.0) {
        return Err(Error::invalid(
            "lambda",
            format!("must be > 0, got {lambda}"),
        ));
    }
    let mut out = chi.clone();
    match chi.kind {
        SwitchKind::BumpProduct | SwitchKind::Rescaled => {
            out.kind = SwitchKind::Rescaled;
            out.lambda = chi.lambda * lambda;
            out.support = [0.0, out.lambda / chi.kappa];
        }
        SwitchKind::Plateau => {
            out.delta_tau = chi.delta_tau * lambda;
            out.lambda = chi.lambda * lambda;
            out.support = [0.0, 2.0 * chi.delta_tau_s + out.delta_tau];
        }
    }
    Ok(out)
}

impl SwitchingFunction {
    /// Evaluates χ(τ). Exactly 0 outside [`Self::support`].
    pub fn value(&self, tau: f64) -> f64 {
        if tau <= self.support[0] || tau >= self.support[1] {
            return 0.0;
        }
        match self.kind {
            SwitchKind::BumpProduct => {
                bump_factor_raw(tau, self.kappa) * bump_factor_raw(1.0 / self.kappa - tau, self.kappa)
            }
            SwitchKind::Rescaled => {
                let t = tau / self.lambda;
                bump_factor_raw(t, self.kappa) * bump_factor_raw(1.0 / self.kappa - t, self.kappa)
            }
            SwitchKind::Plateau => {
                let d = self.delta_tau_s;
                let flat_end = d + self.delta_tau;
                if tau >= d && tau <= flat_end {
                    1.0
                } else if tau < d {
                    self.ramp(tau)
                } else {
                    self.ramp(self.support[1] - tau)
                }
            }
        }
    }

    /// Complex continuation χ(z) for the bump-product kinds; used by the
    /// rotated-contour Fourier transform, which never deforms a plateau
    /// window directly (its transform factorizes through the ramp bump).
    pub(crate) fn value_c(&self, z: Complex64) -> Complex64 {
        match self.kind {
            SwitchKind::BumpProduct => {
                let k = self.kappa;
                bump_factor_c(z, k) * bump_factor_c(1.0 / k - z, k)
            }
            SwitchKind::Rescaled => {
                let k = self.kappa;
                let w = z / self.lambda;
                bump_factor_c(w, k) * bump_factor_c(1.0 / k - w, k)
            }
            SwitchKind::Plateau => {
                unreachable!("complex evaluation is only used for bump-product windows")
            }
        }
    }

    /// Plateau ramp normalization ∫₀^{Δτ_s} e^{−1/(u(Δτ_s−u))} du (0 for
    /// the other kinds).
    pub(crate) fn ramp_norm(&self) -> f64 {
        self.ramp_norm
    }

    /// The un-rescaled base window (λ = 1). For `rescaled` this is the
    /// underlying bump product; plateau and bump-product windows are their
    /// own base.
    pub fn base(&self) -> SwitchingFunction {
        match self.kind {
            SwitchKind::Rescaled => SwitchingFunction {
                kind: SwitchKind::BumpProduct,
                lambda: 1.0,
                support: [0.0, 1.0 / self.kappa],
                ..self.clone()
            },
            _ => self.clone(),
        }
    }

    /// Normalized incomplete integral of the ramp bump on [0, τ].
    fn ramp(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        let d = self.delta_tau_s;
        if tau >= d {
            return 1.0;
        }
        let breaks = if tau > 0.5 * d {
            vec![0.0, 0.5 * d, tau]
        } else {
            vec![0.0, tau]
        };
        let (v, _) = quad::adaptive(|u| plateau_bump(u, d), &breaks, 1e-300, 1e-13, 400)
            .unwrap_or((0.0, 0.0));
        (v / self.ramp_norm).clamp(0.0, 1.0)
    }
}
