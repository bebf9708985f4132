//! Lag kernels `K₁`, the time-smoothing kernel `K₂` and the product taper
//! `K₂*` used by the double-kernel estimators.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// `∫₀¹ K₂²(x) dx` for `K₂(x) = 6x(1−x)`.
pub const K2_SQUARED_INTEGRAL: f64 = 1.2;

/// `(∫₀¹ x² K₂(x) dx)²` for `K₂(x) = 6x(1−x)`.
pub const K2_SECOND_MOMENT_SQ: f64 = 0.09;

/// Lag kernels of the `K₁` class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LagKernel {
    QuadraticSpectral,
    Bartlett,
    Parzen,
    TukeyHanning,
    Truncated,
}

/// Characteristic exponent `q`, generalized derivative `K₁,q` and `∫K₁²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConstants {
    pub q: f64,
    pub k1q: f64,
    pub int_k1_sq: f64,
}

impl LagKernel {
    pub const ALL: [LagKernel; 5] = [
        LagKernel::QuadraticSpectral,
        LagKernel::Bartlett,
        LagKernel::Parzen,
        LagKernel::TukeyHanning,
        LagKernel::Truncated,
    ];

    /// Kernel weight at lag argument `x`.
    pub fn weight(self, x: f64) -> f64 {
        let ax = x.abs();
        match self {
            LagKernel::QuadraticSpectral => quadratic_spectral(ax),
            LagKernel::Bartlett => {
                if ax <= 1.0 {
                    1.0 - ax
                } else {
                    0.0
                }
            }
            LagKernel::Parzen => {
                if ax <= 0.5 {
                    1.0 - 6.0 * ax * ax + 6.0 * ax * ax * ax
                } else if ax <= 1.0 {
                    2.0 * (1.0 - ax).powi(3)
                } else {
                    0.0
                }
            }
            LagKernel::TukeyHanning => {
                if ax <= 1.0 {
                    0.5 * (1.0 + (PI * ax).cos())
                } else {
                    0.0
                }
            }
            LagKernel::Truncated => {
                if ax <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Smoothness constants; `None` for the truncated kernel, which has no
    /// finite `K₁,q` and so cannot drive the automatic bandwidth.
    pub fn constants(self) -> Option<KernelConstants> {
        match self {
            LagKernel::QuadraticSpectral => Some(KernelConstants {
                q: 2.0,
                k1q: 1.421223,
                int_k1_sq: 1.0,
            }),
            LagKernel::Bartlett => Some(KernelConstants {
                q: 1.0,
                k1q: 1.0,
                int_k1_sq: 2.0 / 3.0,
            }),
            LagKernel::Parzen => Some(KernelConstants {
                q: 2.0,
                k1q: 6.0,
                int_k1_sq: 151.0 / 280.0,
            }),
            LagKernel::TukeyHanning => Some(KernelConstants {
                q: 2.0,
                k1q: PI * PI / 4.0,
                int_k1_sq: 0.75,
            }),
            LagKernel::Truncated => None,
        }
    }
}

fn quadratic_spectral(ax: f64) -> f64 {
    let z = 6.0 * PI * ax / 5.0;
    if z < 0.1 {
        // Series of the closed form about 0; the closed form cancels badly here.
        let z2 = z * z;
        return 1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15_120.0
            + z2 * z2 * z2 * z2 / 1_330_560.0;
    }
    3.0 / (z * z) * (z.sin() / z - z.cos())
}

/// Time-smoothing kernel `K₂(x) = 6x(1−x)` on `[0, 1]`, zero elsewhere.
pub fn time_kernel(x: f64) -> f64 {
    if (0.0..=1.0).contains(&x) {
        6.0 * x * (1.0 - x)
    } else {
        0.0
    }
}

/// Product-form taper `K₂*(a, b) = (K₂(a) K₂(b))^{1/2}`.
pub fn taper_weight(a: f64, b: f64) -> f64 {
    let prod = time_kernel(a) * time_kernel(b);
    if prod <= 0.0 {
        0.0
    } else {
        prod.sqrt()
    }
}
