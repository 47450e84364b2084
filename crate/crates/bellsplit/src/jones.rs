//! Single-photon polarization states and unitary polarization optics.
//!
//! A Jones vector holds the vertical amplitude `alpha` and the horizontal
//! amplitude `beta` of one photon, `|psi> = alpha |V> + beta |H>`, with
//! `|alpha|^2 + |beta|^2 = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::{ModeAmplitudes, ModeIndex, Path, Polarization};
use crate::EXACT_TOL;

/// Normalized polarization state of one photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    alpha: Complex64,
    beta: Complex64,
}

impl JonesVector {
    /// Builds a Jones vector from the V and H amplitudes; rejects inputs
    /// whose squared norm strays from 1 by more than `EXACT_TOL`.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let deviation = (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs();
        if deviation > EXACT_TOL {
            return Err(Error::NotNormalized {
                what: "jones vector",
                deviation,
                tolerance: EXACT_TOL,
            });
        }
        Ok(JonesVector { alpha, beta })
    }

    /// Linear polarization tilted by `theta` from vertical:
    /// `(cos theta) |V> + (sin theta) |H>`.
    pub fn from_angle(theta: f64) -> Self {
        JonesVector {
            alpha: Complex64::from(theta.cos()),
            beta: Complex64::from(theta.sin()),
        }
    }

    pub fn vertical() -> Self {
        JonesVector { alpha: Complex64::ONE, beta: Complex64::ZERO }
    }

    pub fn horizontal() -> Self {
        JonesVector { alpha: Complex64::ZERO, beta: Complex64::ONE }
    }

    /// Equal V and H amplitudes, `(|V> + |H>)/sqrt(2)`.
    pub fn diagonal() -> Self {
        let w = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
        JonesVector { alpha: w, beta: w }
    }

    /// `(|V> - |H>)/sqrt(2)`.
    pub fn antidiagonal() -> Self {
        let w = std::f64::consts::FRAC_1_SQRT_2;
        JonesVector { alpha: Complex64::from(w), beta: Complex64::from(-w) }
    }

    /// Vertical amplitude.
    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// Horizontal amplitude.
    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn amplitude(&self, pol: Polarization) -> Complex64 {
        match pol {
            Polarization::V => self.alpha,
            Polarization::H => self.beta,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    /// The photon placed in `path`, as amplitudes over the four modes.
    pub fn mode_amplitudes(&self, path: Path) -> ModeAmplitudes {
        let mut amps = ModeAmplitudes::zero();
        for pol in Polarization::BOTH {
            amps.set(ModeIndex::new(path, pol), self.amplitude(pol));
        }
        amps
    }
}

/// A 2x2 unitary acting on the (V, H) amplitudes of one path.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationRotation {
    /// Row and column order (V, H): `m[out][in]`.
    m: [[Complex64; 2]; 2],
}

fn pol_slot(pol: Polarization) -> usize {
    match pol {
        Polarization::V => 0,
        Polarization::H => 1,
    }
}

impl PolarizationRotation {
    /// Accepts a matrix in (V, H) row and column order; rejects it when
    /// `U* U` strays from the identity by more than `EXACT_TOL`.
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let deviation = max_nonunitarity(&m);
        if deviation > EXACT_TOL {
            return Err(Error::NotUnitary {
                what: "polarization rotation",
                deviation,
                tolerance: EXACT_TOL,
            });
        }
        Ok(PolarizationRotation { m })
    }

    pub fn identity() -> Self {
        PolarizationRotation {
            m: [[Complex64::ONE, Complex64::ZERO], [Complex64::ZERO, Complex64::ONE]],
        }
    }

    /// Rotation by `theta`: takes `|V>` to `(cos theta)|V> + (sin theta)|H>`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        PolarizationRotation {
            m: [
                [Complex64::from(c), Complex64::from(-s)],
                [Complex64::from(s), Complex64::from(c)],
            ],
        }
    }

    /// Exchanges the V and H amplitudes.
    pub fn swap_vh() -> Self {
        PolarizationRotation {
            m: [[Complex64::ZERO, Complex64::ONE], [Complex64::ONE, Complex64::ZERO]],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Matrix element taking the `input` amplitude into the `output` one.
    pub fn entry(&self, output: Polarization, input: Polarization) -> Complex64 {
        self.m[pol_slot(output)][pol_slot(input)]
    }

    pub fn apply(&self, jones: &JonesVector) -> JonesVector {
        let alpha = self.m[0][0] * jones.alpha() + self.m[0][1] * jones.beta();
        let beta = self.m[1][0] * jones.alpha() + self.m[1][1] * jones.beta();
        // A unitary map keeps the norm; skip revalidation.
        JonesVector { alpha, beta }
    }
}

pub(crate) fn max_nonunitarity(m: &[[Complex64; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut e = Complex64::ZERO;
            for row in m.iter() {
                e += row[i].conj() * row[j];
            }
            if i == j {
                e -= Complex64::ONE;
            }
            worst = worst.max(e.norm());
        }
    }
    worst
}
