//! Named constants of the spectral asymptotics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::zeta::{zeta_real, Quality};

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// The coefficient γ₁ of (σ − 1) in ζ(σ) − 1/(σ − 1) = γ + γ₁(σ − 1) + ….
///
/// This is the *negative* of the conventional Stieltjes constant
/// γ₁ = −0.0728158454836767…; the expansion coefficient carries the
/// factor (−1)^j / j!.
pub const GAMMA1_EXPANSION: f64 = 0.072_815_845_483_676_72;

/// Observed lower end of λ₁/N, printed in scan reports. Annotation only.
pub const D4_ANNOTATION: f64 = -0.572;

/// The constants γ, γ₁, ζ(1/2), α, β, c₁…c₅.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub gamma: f64,
    /// Expansion-coefficient convention, see [`GAMMA1_EXPANSION`].
    pub gamma1: f64,
    pub zeta_half: f64,
    /// α = −ζ(1/2), the constant in the trace asymptotic.
    pub alpha: f64,
    /// Limit of φ(N): 1 − π²/24 − ½(log 2π − 1)² + ½(1 − γ)².
    pub beta: f64,
    /// Σ_{ℓ≤x} τ₃(ℓ) constant: 3γ² − 3γ + 3γ₁ + 1.
    pub c1: f64,
    /// ∫₁^∞ Δ(x)x^{−2}dx = γ² − 2γ + 2γ₁ + 1.
    pub c2: f64,
    /// c₁ − 2c₂ = γ² + γ − γ₁ − 1.
    pub c3: f64,
    /// wᵀAw ~ c₄N²: c₃ − γ² = γ − γ₁ − 1.
    pub c4: f64,
    /// Tr(Z²) ~ c₅N²: β + ¼ + c₃ − γ².
    pub c5: f64,
}

impl Constants {
    pub fn new() -> Self {
        let gamma = EULER_GAMMA;
        let gamma1 = GAMMA1_EXPANSION;
        let zeta_half = zeta_real(0.5, Quality::default()).expect("ζ(1/2) is in the domain");
        let beta = 1.0 - PI * PI / 24.0 - 0.5 * ((2.0 * PI).ln() - 1.0).powi(2) + 0.5 * (1.0 - gamma).powi(2);
        let c1 = 3.0 * gamma * gamma - 3.0 * gamma + 3.0 * gamma1 + 1.0;
        let c2 = gamma * gamma - 2.0 * gamma + 2.0 * gamma1 + 1.0;
        let c3 = c1 - 2.0 * c2;
        let c4 = c3 - gamma * gamma;
        let c5 = beta + 0.25 + c3 - gamma * gamma;
        Self { gamma, gamma1, zeta_half, alpha: -zeta_half, beta, c1, c2, c3, c4, c5 }
    }

    /// (name, value, note) rows for report dumps.
    pub fn rows(&self) -> Vec<(&'static str, f64, &'static str)> {
        vec![
            ("gamma", self.gamma, "Euler's constant"),
            ("gamma1", self.gamma1, "coefficient of (sigma-1) in zeta(sigma)-1/(sigma-1); minus the Stieltjes gamma_1"),
            ("zeta_half", self.zeta_half, "zeta(1/2) by accelerated eta series"),
            ("alpha", self.alpha, "-zeta(1/2); Tr(A) = zeta_2 N^2 - (alpha-1) N + O(N^(2/3))"),
            ("beta", self.beta, "limit of phi(N)"),
            ("c1", self.c1, "3 gamma^2 - 3 gamma + 3 gamma1 + 1"),
            ("c2", self.c2, "gamma^2 - 2 gamma + 2 gamma1 + 1"),
            ("c3", self.c3, "c1 - 2 c2"),
            ("c4", self.c4, "gamma - gamma1 - 1; w^T A w ~ c4 N^2"),
            ("c5", self.c5, "beta + 1/4 + c3 - gamma^2; Tr(Z^2) ~ c5 N^2"),
        ]
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::new()
    }
}
