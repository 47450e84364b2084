//! Lossless beam splitter with polarization-dependent reflectance.
//!
//! For each polarization `p` the splitter acts on the path amplitudes as
//! a 2x2 unitary with real positive reflections and pure imaginary
//! transmissions:
//!
//! ```text
//! (a,p) -> r_p (a,p) + i s t_p (b,p)
//! (b,p) -> i s t_p (a,p) + r_p (b,p)        s = +1 or -1
//! ```
//!
//! with `r_p^2 + t_p^2 = 1`. Under this phase convention the lossless
//! phase condition `d_ta - d_ra + d_tb - d_rb = pi (mod 2 pi)` holds for
//! either sign, and every coincidence observable is independent of `s`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::{ModeAmplitudes, ModeIndex, Path, Polarization};
use crate::EXACT_TOL;

/// Phase of the transmitted amplitude: `+i t` or `-i t`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TransmissionSign {
    #[default]
    PlusI,
    MinusI,
}

impl TransmissionSign {
    pub fn signum(self) -> f64 {
        match self {
            TransmissionSign::PlusI => 1.0,
            TransmissionSign::MinusI => -1.0,
        }
    }

    /// The unit factor `i s` carried by every transmission.
    pub fn factor(self) -> Complex64 {
        Complex64::new(0.0, self.signum())
    }

    pub fn flipped(self) -> Self {
        match self {
            TransmissionSign::PlusI => TransmissionSign::MinusI,
            TransmissionSign::MinusI => TransmissionSign::PlusI,
        }
    }
}

impl fmt::Display for TransmissionSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransmissionSign::PlusI => write!(f, "1"),
            TransmissionSign::MinusI => write!(f, "-1"),
        }
    }
}

/// Reflection and transmission magnitudes per polarization, plus the
/// transmission phase sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterParams {
    r_v: f64,
    t_v: f64,
    r_h: f64,
    t_h: f64,
    sign: TransmissionSign,
}

impl BeamSplitterParams {
    /// Builds a lossless splitter from the two reflection magnitudes;
    /// transmissions follow from `t_p = sqrt(1 - r_p^2)`.
    pub fn new(r_v: f64, r_h: f64, sign: TransmissionSign) -> Result<Self> {
        check_unit_interval("r_v", r_v)?;
        check_unit_interval("r_h", r_h)?;
        Ok(BeamSplitterParams {
            r_v,
            t_v: (1.0 - r_v * r_v).sqrt(),
            r_h,
            t_h: (1.0 - r_h * r_h).sqrt(),
            sign,
        })
    }

    /// Polarization-independent splitter with reflected power `r_sq`.
    /// Computing both magnitudes from the power keeps `r == t` bitwise at
    /// `r_sq = 1/2`, so complete bunching cancels exactly.
    pub fn from_r_squared(r_sq: f64, sign: TransmissionSign) -> Result<Self> {
        check_unit_interval("r_sq", r_sq)?;
        let r = r_sq.sqrt();
        let t = (1.0 - r_sq).sqrt();
        Ok(BeamSplitterParams { r_v: r, t_v: t, r_h: r, t_h: t, sign })
    }

    /// The symmetric 50-50 splitter.
    pub fn symmetric_50_50() -> Self {
        Self::from_r_squared(0.5, TransmissionSign::default()).expect("1/2 is in range")
    }

    /// Full reflector: photons never change arms.
    pub fn mirror() -> Self {
        Self::new(1.0, 1.0, TransmissionSign::default()).expect("1 is in range")
    }

    /// Assembles raw magnitudes without any validation, so that lossy or
    /// otherwise defective parameter sets can be fed to
    /// [`verify_unitarity`](Self::verify_unitarity) and reported on.
    pub fn from_raw_amplitudes(
        r_v: f64,
        t_v: f64,
        r_h: f64,
        t_h: f64,
        sign: TransmissionSign,
    ) -> Self {
        BeamSplitterParams { r_v, t_v, r_h, t_h, sign }
    }

    pub fn r(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::V => self.r_v,
            Polarization::H => self.r_h,
        }
    }

    pub fn t(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::V => self.t_v,
            Polarization::H => self.t_h,
        }
    }

    pub fn r_v(&self) -> f64 {
        self.r_v
    }

    pub fn t_v(&self) -> f64 {
        self.t_v
    }

    pub fn r_h(&self) -> f64 {
        self.r_h
    }

    pub fn t_h(&self) -> f64 {
        self.t_h
    }

    pub fn sign(&self) -> TransmissionSign {
        self.sign
    }

    pub fn with_sign(&self, sign: TransmissionSign) -> Self {
        BeamSplitterParams { sign, ..*self }
    }

    /// The complex transmitted amplitude `i s t_p`.
    pub fn transmission(&self, pol: Polarization) -> Complex64 {
        self.sign.factor() * self.t(pol)
    }

    /// `r_p^2 - t_p^2`, the imbalance that drives cross-side coincidence
    /// amplitudes for identically polarized photons.
    pub fn contrast(&self, pol: Polarization) -> f64 {
        self.r(pol) * self.r(pol) - self.t(pol) * self.t(pol)
    }

    /// Per-polarization path matrix, rows and columns ordered (a, b).
    pub fn matrix(&self, pol: Polarization) -> [[Complex64; 2]; 2] {
        let r = Complex64::from(self.r(pol));
        let t = self.transmission(pol);
        [[r, t], [t, r]]
    }

    /// The splitter as a 4x4 single-photon unitary over the canonical
    /// modes; block diagonal in polarization.
    pub fn single_photon_matrix(&self) -> [[Complex64; 4]; 4] {
        let mut u = [[Complex64::ZERO; 4]; 4];
        for pol in Polarization::BOTH {
            let b = self.matrix(pol);
            for (row_path, brow) in Path::BOTH.iter().zip(b.iter()) {
                for (col_path, entry) in Path::BOTH.iter().zip(brow.iter()) {
                    let row = ModeIndex::new(*row_path, pol).index();
                    let col = ModeIndex::new(*col_path, pol).index();
                    u[row][col] = *entry;
                }
            }
        }
        u
    }

    /// Image of a single occupied mode: the weighted superposition the
    /// splitter maps it onto. Polarization is never changed.
    pub fn mode_transform(&self, mode: ModeIndex) -> ModeAmplitudes {
        let mut out = ModeAmplitudes::zero();
        out.set(mode, Complex64::from(self.r(mode.pol)));
        out.set(ModeIndex::new(mode.path.other(), mode.pol), self.transmission(mode.pol));
        out
    }

    /// Checks losslessness, determinant magnitude and the transmission
    /// phase condition of both per-polarization matrices.
    pub fn verify_unitarity(&self) -> UnitarityReport {
        let mut max_unitarity = 0.0f64;
        let mut max_det = 0.0f64;
        let mut max_phase = 0.0f64;
        for pol in Polarization::BOTH {
            let b = self.matrix(pol);
            for i in 0..2 {
                for j in 0..2 {
                    let mut e = Complex64::ZERO;
                    for row in b.iter() {
                        e += row[i].conj() * row[j];
                    }
                    if i == j {
                        e -= Complex64::ONE;
                    }
                    max_unitarity = max_unitarity.max(e.norm());
                }
            }
            let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
            max_det = max_det.max((det.norm() - 1.0).abs());
            max_phase = max_phase.max(self.phase_sum_residual(pol));
        }
        UnitarityReport {
            max_unitarity_deviation: max_unitarity,
            max_determinant_deviation: max_det,
            phase_sum_residual: max_phase,
            tolerance: EXACT_TOL,
        }
    }

    /// |d_ta - d_ra + d_tb - d_rb - pi| wrapped to [0, pi]. A vanishing
    /// amplitude contributes its conventional phase (0 for reflections,
    /// `s pi/2` for transmissions) since the phase of zero is free.
    fn phase_sum_residual(&self, pol: Polarization) -> f64 {
        let b = self.matrix(pol);
        let conventional_t = self.sign.signum() * std::f64::consts::FRAC_PI_2;
        let d_ra = arg_or(b[0][0], 0.0);
        let d_rb = arg_or(b[1][1], 0.0);
        let d_ta = arg_or(b[1][0], conventional_t);
        let d_tb = arg_or(b[0][1], conventional_t);
        let sum = d_ta - d_ra + d_tb - d_rb;
        wrap_to_pi(sum - std::f64::consts::PI).abs()
    }
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(Error::OutOfRange { name, value, min: 0.0, max: 1.0 });
    }
    Ok(())
}

fn arg_or(z: Complex64, conventional: f64) -> f64 {
    if z == Complex64::ZERO {
        conventional
    } else {
        z.arg()
    }
}

/// Maps an angle into (-pi, pi].
fn wrap_to_pi(x: f64) -> f64 {
    use std::f64::consts::PI;
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Residuals of the lossless-splitter checks, each compared against
/// `EXACT_TOL`.
#[derive(Debug, Clone, Copy)]
pub struct UnitarityReport {
    /// Worst entry of `B* B - I` over both polarizations.
    pub max_unitarity_deviation: f64,
    /// Worst `||det B| - 1|` over both polarizations.
    pub max_determinant_deviation: f64,
    /// Worst wrapped deviation of the phase sum from pi.
    pub phase_sum_residual: f64,
    pub tolerance: f64,
}

impl UnitarityReport {
    pub fn unitarity_ok(&self) -> bool {
        self.max_unitarity_deviation <= self.tolerance
    }

    pub fn determinant_ok(&self) -> bool {
        self.max_determinant_deviation <= self.tolerance
    }

    pub fn phase_sum_ok(&self) -> bool {
        self.phase_sum_residual <= self.tolerance
    }

    pub fn passed(&self) -> bool {
        self.unitarity_ok() && self.determinant_ok() && self.phase_sum_ok()
    }
}

impl fmt::Display for UnitarityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(
            f,
            "losslessness  max |B*B - I|    = {:.3e}  {}",
            self.max_unitarity_deviation,
            verdict(self.unitarity_ok())
        )?;
        writeln!(
            f,
            "determinant   max ||det B| - 1| = {:.3e}  {}",
            self.max_determinant_deviation,
            verdict(self.determinant_ok())
        )?;
        write!(
            f,
            "phase sum     |sum - pi|        = {:.3e}  {}  (tolerance {:.0e})",
            self.phase_sum_residual,
            verdict(self.phase_sum_ok()),
            self.tolerance
        )
    }
}
