//! C ABI for the bellsplit library: opaque scenario handles, plain
//! structs for results, and integer status codes. Every function is
//! safe to call from any thread; error messages are thread-local and
//! valid until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use bellsplit::bell::{
    bell_decompose, case_config, classify_coincidence, fidelity_direct, fidelity_ratio,
    post_selected_fidelity, BellFamily, BellKind, DetectionStats, EventClass,
};
use bellsplit::circuit::{simulate_scenario, BellCase, ScenarioConfig};
use bellsplit::oracle::oracle_equivalence_suite;
use bellsplit::report::evaluate_scenario;
use bellsplit::{BeamSplitterParams, Error, JonesVector, TransmissionSign};
use num_complex::Complex64;

/// Result of every fallible call. Anything but `Ok` leaves a
/// description in `bellsplit_last_error_message`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellsplitStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was outside its documented encoding (bad case id,
    /// family id, or sign).
    InvalidArgument = 2,
    /// Text input (config file or event label) failed to parse.
    Parse = 3,
    /// A numeric argument violated its domain.
    Domain = 4,
    /// The arrangement makes the requested quantity undefined.
    Degenerate = 5,
    /// The operation does not apply to this scenario.
    Unsupported = 6,
    /// File system failure.
    Io = 7,
    /// An internal invariant failed; please report.
    Internal = 8,
}

/// One complex amplitude.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellsplitComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for BellsplitComplex {
    fn from(z: Complex64) -> Self {
        BellsplitComplex { re: z.re, im: z.im }
    }
}

/// Detector-level probabilities; the ten event fields sum to one.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellsplitDetectionStats {
    pub p_ah_bh: f64,
    pub p_ah_bv: f64,
    pub p_av_bh: f64,
    pub p_av_bv: f64,
    pub p_av_ah: f64,
    pub p_bv_bh: f64,
    pub p_ah2: f64,
    pub p_av2: f64,
    pub p_bh2: f64,
    pub p_bv2: f64,
    pub p_coincidence_total: f64,
}

impl From<DetectionStats> for BellsplitDetectionStats {
    fn from(s: DetectionStats) -> Self {
        BellsplitDetectionStats {
            p_ah_bh: s.p_ah_bh,
            p_ah_bv: s.p_ah_bv,
            p_av_bh: s.p_av_bh,
            p_av_bv: s.p_av_bv,
            p_av_ah: s.p_av_ah,
            p_bv_bh: s.p_bv_bh,
            p_ah2: s.p_ah2,
            p_av2: s.p_av2,
            p_bh2: s.p_bh2,
            p_bv2: s.p_bv2,
            p_coincidence_total: s.p_coincidence_total,
        }
    }
}

/// Bell-basis amplitudes of the interfering output plus the six
/// same-side residuals in canonical pair order.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellsplitBellCoefficients {
    pub c_phi_plus: BellsplitComplex,
    pub c_phi_minus: BellsplitComplex,
    pub c_psi_plus: BellsplitComplex,
    pub c_psi_minus: BellsplitComplex,
    pub bunched: [BellsplitComplex; 6],
}

/// How a detector coincidence is classified under an arrangement.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellsplitEventClass {
    PhiPlus = 0,
    PhiMinus = 1,
    PsiPlus = 2,
    PsiMinus = 3,
    /// Same-side event, dropped by post-selection.
    Ignore = 4,
}

/// Opaque scenario handle; create with one of the constructors and
/// release with `bellsplit_scenario_free`.
pub struct BellsplitScenario {
    inner: ScenarioConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("interior NULs removed");
    });
}

fn fail(status: BellsplitStatus, message: &str) -> BellsplitStatus {
    set_last_error(message);
    status
}

fn error_status(e: &Error) -> BellsplitStatus {
    match e {
        Error::OutOfRange { .. }
        | Error::NotNormalized { .. }
        | Error::NotUnitary { .. }
        | Error::ZeroNorm
        | Error::NoDraws
        | Error::DegreeOverflow => BellsplitStatus::Domain,
        Error::ConfigParse { .. }
        | Error::ConfigInvalid(_)
        | Error::UnknownEvent(_)
        | Error::UnknownObjective(_)
        | Error::UnknownSweepParameter(_)
        | Error::InvalidSweep { .. } => BellsplitStatus::Parse,
        Error::File { .. } => BellsplitStatus::Io,
        Error::Degenerate(_) => BellsplitStatus::Degenerate,
        Error::Unsupported(_) => BellsplitStatus::Unsupported,
    }
}

fn from_error(e: &Error) -> BellsplitStatus {
    fail(error_status(e), &e.to_string())
}

/// Runs `body`, converting panics into `Internal` so they never unwind
/// across the ABI boundary.
fn guarded(body: impl FnOnce() -> BellsplitStatus) -> BellsplitStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(BellsplitStatus::Internal, "internal panic"),
    }
}

fn parse_case(case: u32) -> Result<BellCase, BellsplitStatus> {
    match case {
        1 => Ok(BellCase::One),
        2 => Ok(BellCase::Two),
        other => Err(fail(
            BellsplitStatus::InvalidArgument,
            &format!("case must be 1 or 2, got {other}"),
        )),
    }
}

fn parse_family(family: u32) -> Result<BellFamily, BellsplitStatus> {
    match family {
        0 => Ok(BellFamily::Phi),
        1 => Ok(BellFamily::Psi),
        other => Err(fail(
            BellsplitStatus::InvalidArgument,
            &format!("family must be 0 (Phi) or 1 (Psi), got {other}"),
        )),
    }
}

fn parse_kind(kind: u32) -> Result<BellKind, BellsplitStatus> {
    match kind {
        0 => Ok(BellKind::PhiPlus),
        1 => Ok(BellKind::PhiMinus),
        2 => Ok(BellKind::PsiPlus),
        3 => Ok(BellKind::PsiMinus),
        other => Err(fail(
            BellsplitStatus::InvalidArgument,
            &format!("bell kind must be 0..=3, got {other}"),
        )),
    }
}

fn parse_sign(sign: i32) -> Result<TransmissionSign, BellsplitStatus> {
    match sign {
        1 => Ok(TransmissionSign::PlusI),
        -1 => Ok(TransmissionSign::MinusI),
        other => Err(fail(
            BellsplitStatus::InvalidArgument,
            &format!("sign must be 1 or -1, got {other}"),
        )),
    }
}

/// ABI revision of this header; bumped on any breaking change.
#[no_mangle]
pub extern "C" fn bellsplit_abi_version() -> u32 {
    1
}

/// Most recent error description for this thread, as a NUL-terminated
/// string; empty if no call has failed yet. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bellsplit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Builds one of the two standard case arrangements.
///
/// `case` is 1 or 2, `sign` is the transmission phase (1 or -1), `r_sq`
/// the common reflectance, `eps`/`eps_prime` the preparation-angle
/// perturbations, `gamma` the temporal overlap in [0, 1]. On success
/// `*out` owns the new scenario.
///
/// # Safety
/// `out` must be a valid pointer to writable scenario-pointer storage.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_case_scenario_new(
    case: u32,
    r_sq: f64,
    sign: i32,
    eps: f64,
    eps_prime: f64,
    gamma: f64,
    out: *mut *mut BellsplitScenario,
) -> BellsplitStatus {
    guarded(|| {
        if out.is_null() {
            return fail(BellsplitStatus::NullPointer, "out is null");
        }
        let case = match parse_case(case) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let sign = match parse_sign(sign) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let bs = match BeamSplitterParams::from_r_squared(r_sq, sign) {
            Ok(bs) => bs,
            Err(e) => return from_error(&e),
        };
        match case_config(case, bs, eps, eps_prime, gamma) {
            Ok(config) => {
                unsafe {
                    *out = Box::into_raw(Box::new(BellsplitScenario { inner: config }));
                }
                BellsplitStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Builds a free-form arrangement from explicit Jones amplitudes.
///
/// `amplitudes` points to eight doubles: alpha_re, alpha_im, beta_re,
/// beta_im for arm a, then the primed four for arm b; alpha is the V
/// amplitude and beta the H amplitude. Each arm must be normalized.
/// `r_v`/`r_h` are per-polarization reflection amplitudes.
///
/// # Safety
/// `amplitudes` must point to eight readable doubles and `out` to
/// writable scenario-pointer storage.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_custom_scenario_new(
    amplitudes: *const f64,
    r_v: f64,
    r_h: f64,
    sign: i32,
    gamma: f64,
    out: *mut *mut BellsplitScenario,
) -> BellsplitStatus {
    guarded(|| {
        if amplitudes.is_null() || out.is_null() {
            return fail(BellsplitStatus::NullPointer, "amplitudes or out is null");
        }
        let a = unsafe { std::slice::from_raw_parts(amplitudes, 8) };
        let sign = match parse_sign(sign) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let build = || -> Result<ScenarioConfig, Error> {
            let ja = JonesVector::new(Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3]))?;
            let jb = JonesVector::new(Complex64::new(a[4], a[5]), Complex64::new(a[6], a[7]))?;
            let bs = BeamSplitterParams::new(r_v, r_h, sign)?;
            ScenarioConfig::custom(ja, jb, bs, gamma)
        };
        match build() {
            Ok(config) => {
                unsafe {
                    *out = Box::into_raw(Box::new(BellsplitScenario { inner: config }));
                }
                BellsplitStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Loads a scenario from a key-value config file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` writable
/// scenario-pointer storage.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_scenario_from_file(
    path: *const c_char,
    out: *mut *mut BellsplitScenario,
) -> BellsplitStatus {
    guarded(|| {
        if path.is_null() || out.is_null() {
            return fail(BellsplitStatus::NullPointer, "path or out is null");
        }
        let path = match unsafe { CStr::from_ptr(path) }.to_str() {
            Ok(p) => p,
            Err(_) => return fail(BellsplitStatus::InvalidArgument, "path is not UTF-8"),
        };
        match ScenarioConfig::load(Path::new(path)) {
            Ok(config) => {
                unsafe {
                    *out = Box::into_raw(Box::new(BellsplitScenario { inner: config }));
                }
                BellsplitStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Releases a scenario. Null is accepted and ignored.
///
/// # Safety
/// `scenario` must have come from a bellsplit constructor and must not
/// be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_scenario_free(scenario: *mut BellsplitScenario) {
    if !scenario.is_null() {
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Detector statistics for the scenario (mixing in the distinguishable
/// branch when gamma < 1).
///
/// # Safety
/// Both pointers must be valid; `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_detection_stats(
    scenario: *const BellsplitScenario,
    out: *mut BellsplitDetectionStats,
) -> BellsplitStatus {
    guarded(|| {
        if scenario.is_null() || out.is_null() {
            return fail(BellsplitStatus::NullPointer, "scenario or out is null");
        }
        let config = unsafe { &(*scenario).inner };
        let stats = DetectionStats::from_output(&simulate_scenario(config));
        unsafe {
            *out = stats.into();
        }
        BellsplitStatus::Ok
    })
}

/// Bell decomposition of the interfering output branch.
///
/// # Safety
/// Both pointers must be valid; `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_bell_coefficients(
    scenario: *const BellsplitScenario,
    out: *mut BellsplitBellCoefficients,
) -> BellsplitStatus {
    guarded(|| {
        if scenario.is_null() || out.is_null() {
            return fail(BellsplitStatus::NullPointer, "scenario or out is null");
        }
        let config = unsafe { &(*scenario).inner };
        let c = bell_decompose(simulate_scenario(config).interfering_state());
        let mut bunched = [BellsplitComplex { re: 0.0, im: 0.0 }; 6];
        for (slot, amp) in bunched.iter_mut().zip(c.bunched.iter()) {
            *slot = (*amp).into();
        }
        unsafe {
            *out = BellsplitBellCoefficients {
                c_phi_plus: c.c_phi_plus.into(),
                c_phi_minus: c.c_phi_minus.into(),
                c_psi_plus: c.c_psi_plus.into(),
                c_psi_minus: c.c_psi_minus.into(),
                bunched,
            };
        }
        BellsplitStatus::Ok
    })
}

/// The ten interfering-output amplitudes in canonical pair order:
/// (aH,aH), (aH,aV), (aH,bH), (aH,bV), (aV,aV), (aV,bH), (aV,bV),
/// (bH,bH), (bH,bV), (bV,bV).
///
/// # Safety
/// `out_amplitudes` must point to ten writable complex slots;
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_output_state(
    scenario: *const BellsplitScenario,
    out_amplitudes: *mut BellsplitComplex,
) -> BellsplitStatus {
    guarded(|| {
        if scenario.is_null() || out_amplitudes.is_null() {
            return fail(BellsplitStatus::NullPointer, "scenario or out is null");
        }
        let config = unsafe { &(*scenario).inner };
        let output = simulate_scenario(config);
        let amplitudes = output.interfering_state().amplitudes();
        let out = unsafe { std::slice::from_raw_parts_mut(out_amplitudes, 10) };
        for (slot, amp) in out.iter_mut().zip(amplitudes.iter()) {
            *slot = (*amp).into();
        }
        BellsplitStatus::Ok
    })
}

/// The scenario's CSV row in the library's fixed 17-column schema.
/// Writes at most `capacity` bytes including the terminating NUL and
/// stores the required size (including NUL) in `*out_len`; returns
/// `InvalidArgument` when the buffer is too small.
///
/// # Safety
/// `buffer` must point to `capacity` writable bytes (it may be null
/// only when `capacity` is 0); `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_csv_row(
    scenario: *const BellsplitScenario,
    buffer: *mut c_char,
    capacity: usize,
    out_len: *mut usize,
) -> BellsplitStatus {
    guarded(|| {
        if scenario.is_null() || out_len.is_null() || (buffer.is_null() && capacity > 0) {
            return fail(BellsplitStatus::NullPointer, "scenario, buffer or out_len is null");
        }
        let config = unsafe { &(*scenario).inner };
        let row = evaluate_scenario(config).csv_row();
        let needed = row.len() + 1;
        unsafe {
            *out_len = needed;
        }
        if capacity < needed {
            return fail(
                BellsplitStatus::InvalidArgument,
                &format!("buffer of {capacity} bytes cannot hold {needed}"),
            );
        }
        unsafe {
            std::ptr::copy_nonoverlapping(row.as_ptr(), buffer.cast(), row.len());
            *buffer.add(row.len()) = 0;
        }
        BellsplitStatus::Ok
    })
}

/// Closed-form perturbation fidelities for a case arrangement; both
/// are squared cosines of eps-combinations, with the combination
/// assignment swapping between the cases.
///
/// # Safety
/// `out_phi` and `out_psi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_fidelity_law(
    case: u32,
    eps: f64,
    eps_prime: f64,
    out_phi: *mut f64,
    out_psi: *mut f64,
) -> BellsplitStatus {
    guarded(|| {
        if out_phi.is_null() || out_psi.is_null() {
            return fail(BellsplitStatus::NullPointer, "out_phi or out_psi is null");
        }
        let case = match parse_case(case) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let report = fidelity_ratio(case, eps, eps_prime);
        unsafe {
            *out_phi = report.fidelity_phi;
            *out_psi = report.fidelity_psi;
        }
        BellsplitStatus::Ok
    })
}

/// Overlap ratio of the perturbed arrangement against its target Bell
/// state, computed by direct simulation. `family` is 0 for Phi, 1 for
/// Psi. Fails as `Degenerate` when the unperturbed overlap vanishes.
///
/// # Safety
/// `out_ratio` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_fidelity_direct(
    case: u32,
    family: u32,
    eps: f64,
    eps_prime: f64,
    r_sq: f64,
    sign: i32,
    out_ratio: *mut f64,
) -> BellsplitStatus {
    guarded(|| {
        if out_ratio.is_null() {
            return fail(BellsplitStatus::NullPointer, "out_ratio is null");
        }
        let case = match parse_case(case) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let family = match parse_family(family) {
            Ok(f) => f,
            Err(status) => return status,
        };
        let sign = match parse_sign(sign) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let bs = match BeamSplitterParams::from_r_squared(r_sq, sign) {
            Ok(bs) => bs,
            Err(e) => return from_error(&e),
        };
        match fidelity_direct(case, family, eps, eps_prime, bs) {
            Ok(ratio) => {
                unsafe {
                    *out_ratio = ratio;
                }
                BellsplitStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Fidelity of the renormalized cross-side component against one Bell
/// state (0 PhiPlus, 1 PhiMinus, 2 PsiPlus, 3 PsiMinus). Fails as
/// `Domain` when no cross-side amplitude survives.
///
/// # Safety
/// Both pointers must be valid; `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_post_selected_fidelity(
    scenario: *const BellsplitScenario,
    kind: u32,
    out_fidelity: *mut f64,
) -> BellsplitStatus {
    guarded(|| {
        if scenario.is_null() || out_fidelity.is_null() {
            return fail(BellsplitStatus::NullPointer, "scenario or out is null");
        }
        let kind = match parse_kind(kind) {
            Ok(k) => k,
            Err(status) => return status,
        };
        let config = unsafe { &(*scenario).inner };
        let output = simulate_scenario(config);
        match post_selected_fidelity(output.interfering_state(), kind) {
            Ok(f) => {
                unsafe {
                    *out_fidelity = f;
                }
                BellsplitStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Classifies a four-character detector-pair label such as "AhBv"
/// under a case arrangement.
///
/// # Safety
/// `event` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_classify_coincidence(
    case: u32,
    event: *const c_char,
    out: *mut BellsplitEventClass,
) -> BellsplitStatus {
    guarded(|| {
        if event.is_null() || out.is_null() {
            return fail(BellsplitStatus::NullPointer, "event or out is null");
        }
        let case = match parse_case(case) {
            Ok(c) => c,
            Err(status) => return status,
        };
        let event = match unsafe { CStr::from_ptr(event) }.to_str() {
            Ok(e) => e,
            Err(_) => return fail(BellsplitStatus::InvalidArgument, "event is not UTF-8"),
        };
        match classify_coincidence(case, event) {
            Ok(class) => {
                let mapped = match class {
                    EventClass::Bell(BellKind::PhiPlus) => BellsplitEventClass::PhiPlus,
                    EventClass::Bell(BellKind::PhiMinus) => BellsplitEventClass::PhiMinus,
                    EventClass::Bell(BellKind::PsiPlus) => BellsplitEventClass::PsiPlus,
                    EventClass::Bell(BellKind::PsiMinus) => BellsplitEventClass::PsiMinus,
                    EventClass::Ignore => BellsplitEventClass::Ignore,
                };
                unsafe {
                    *out = mapped;
                }
                BellsplitStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Runs the engine-versus-oracle equivalence suite over seeded random
/// draws and stores the largest amplitude deviation observed.
///
/// # Safety
/// `out_max_deviation` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bellsplit_oracle_equivalence(
    draws: u64,
    seed: u64,
    out_max_deviation: *mut f64,
) -> BellsplitStatus {
    guarded(|| {
        if out_max_deviation.is_null() {
            return fail(BellsplitStatus::NullPointer, "out_max_deviation is null");
        }
        match oracle_equivalence_suite(draws as usize, seed) {
            Ok(report) => {
                unsafe {
                    *out_max_deviation = report.max_deviation;
                }
                if report.passed() {
                    BellsplitStatus::Ok
                } else {
                    fail(
                        BellsplitStatus::Internal,
                        &format!(
                            "engine deviates from the oracle by {:e}",
                            report.max_deviation
                        ),
                    )
                }
            }
            Err(e) => from_error(&e),
        }
    })
}
