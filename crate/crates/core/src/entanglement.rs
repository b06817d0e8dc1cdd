//! Concurrence of two-qubit and qubit-mode states, and the inversions that
//! read an initial concurrence back off a geometric phase.

use num_traits::Zero;

use crate::density::{QubitDensity, Scenario};
use crate::dynamics::JointState;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, inner, singular_values, CMat};
use crate::model::{quasicycle_period, Branch, ModelParams};
use crate::scalar::{cx, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConcurrenceMethod {
    Wootters,
    XState,
    HybridOverlap,
    PurityOracle,
    PhaseInversion,
}

impl ConcurrenceMethod {
    pub fn name(self) -> &'static str {
        match self {
            ConcurrenceMethod::Wootters => "wootters",
            ConcurrenceMethod::XState => "x_state",
            ConcurrenceMethod::HybridOverlap => "hybrid_overlap",
            ConcurrenceMethod::PurityOracle => "purity_oracle",
            ConcurrenceMethod::PhaseInversion => "phase_inversion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue<T> {
    pub value: T,
    pub method: ConcurrenceMethod,
}

impl<T: Real> ConcurrenceValue<T> {
    fn new(value: T, method: ConcurrenceMethod) -> Self {
        Self { value, method }
    }
}

/// Row `i` of the computational-order matrix (`|00⟩,|01⟩,|10⟩,|11⟩`) is row
/// `COMPUTATIONAL_ORDER[i]` of the branch-order matrix.
pub const COMPUTATIONAL_ORDER: [usize; 4] = [
    Branch::B00 as usize,
    Branch::B01 as usize,
    Branch::B10 as usize,
    Branch::B11 as usize,
];

/// Reorders a branch-order density matrix into the computational basis.
pub fn to_computational<T: Real>(m: &CMat<T>) -> CMat<T> {
    m.permuted(&COMPUTATIONAL_ORDER)
}

/// `σ_y ⊗ σ_y` in the computational basis.
pub fn sigma_yy<T: Real>() -> CMat<T> {
    let o = T::one();
    let mut y = CMat::zeros(4, 4);
    y[(0, 3)] = cx(-o, T::zero());
    y[(1, 2)] = cx(o, T::zero());
    y[(2, 1)] = cx(o, T::zero());
    y[(3, 0)] = cx(-o, T::zero());
    y
}

/// Descending square roots `λ₁..λ₄` of the spectrum of `ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`.
///
/// With `ρ = V V†`, `V = [√p_k e_k]`, these are the singular values of the
/// complex symmetric matrix `Vᵀ(σ_y⊗σ_y)V`, which avoids the non-Hermitian
/// eigenproblem and keeps full accuracy on rank-deficient states.
pub fn wootters_lambdas<T: Real>(rho: &QubitDensity<T>) -> Result<[T; 4]> {
    rho.validate()?;
    let comp = to_computational(rho.matrix());
    let eig = hermitian_eigen(&comp);
    let floor = T::tol(1e-14);
    let kept: Vec<usize> = (0..4).filter(|&k| eig.values[k] > floor).collect();
    let v = CMat::from_fn(4, kept.len(), |i, j| {
        let k = kept[j];
        eig.vectors[(i, k)].scale(eig.values[k].sqrt())
    });
    let tau = &(&v.transpose() * &sigma_yy()) * &v;
    let sv = singular_values(&tau);
    let mut out = [T::zero(); 4];
    for (o, s) in out.iter_mut().zip(sv) {
        *o = s;
    }
    Ok(out)
}

/// Wootters concurrence `max(0, λ₁ - λ₂ - λ₃ - λ₄)`.
pub fn concurrence_wootters<T: Real>(rho: &QubitDensity<T>) -> Result<ConcurrenceValue<T>> {
    let l = wootters_lambdas(rho)?;
    let c = (l[0] - l[1] - l[2] - l[3]).max(T::zero()).min(T::one());
    Ok(ConcurrenceValue::new(c, ConcurrenceMethod::Wootters))
}

fn check_x_state<T: Real>(w: T, x: T, y: T, z: Cx<T>) -> Result<()> {
    let neg = -T::tol(1e-12);
    for (name, v) in [("w", w), ("x", x), ("y", y)] {
        if !(v.is_finite() && v >= neg) {
            return Err(Error::Validation(format!("X-state population {name} = {v} is negative")));
        }
    }
    let total = w + T::lit(2.0) * x + y;
    if (total - T::one()).abs() > T::tol(1e-10) {
        return Err(Error::Validation(format!("X-state trace w + 2x + y = {total}, expected 1")));
    }
    let bound = (w.max(T::zero()) * y.max(T::zero())).sqrt();
    if !(z.norm() <= bound + T::tol(1e-12)) {
        return Err(Error::Validation(format!(
            "X-state coherence |z| = {} exceeds sqrt(wy) = {bound}",
            z.norm()
        )));
    }
    Ok(())
}

/// X-state `diag(w, y, x, x)` in branch order with `ρ₀₀,₁₁ = z`.
pub fn x_state_matrix<T: Real>(w: T, x: T, y: T, z: Cx<T>) -> Result<CMat<T>> {
    check_x_state(w, x, y, z)?;
    let mut m = CMat::diag(&[w, y, x, x]);
    m[(Branch::B00.index(), Branch::B11.index())] = z;
    m[(Branch::B11.index(), Branch::B00.index())] = z.conj();
    Ok(m)
}

/// `max(0, 2|z| - 2x)` for the X-state of [`x_state_matrix`].
pub fn concurrence_x_state<T: Real>(w: T, x: T, y: T, z: Cx<T>) -> Result<ConcurrenceValue<T>> {
    check_x_state(w, x, y, z)?;
    let c = (T::lit(2.0) * (z.norm() - x)).max(T::zero()).min(T::one());
    Ok(ConcurrenceValue::new(c, ConcurrenceMethod::XState))
}

/// Two readings of the concurrence of `cos η₀|a⟩|φ_a⟩ + sin η₀|b⟩|φ_b⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridConcurrence<T> {
    /// `|sin 2η₀| sqrt(1 - |⟨φ_a|φ_b⟩|)`; for coherent branches `|±α⟩`
    /// this is the printed `|sin 2η₀| sqrt(1 - e^{-2|α|²})`.
    pub verbatim: ConcurrenceValue<T>,
    /// `|sin 2η₀| sqrt(1 - |⟨φ_a|φ_b⟩|²)`.
    pub general: ConcurrenceValue<T>,
}

pub fn hybrid_concurrence<T: Real>(eta0: T, overlap: Cx<T>) -> Result<HybridConcurrence<T>> {
    let r = overlap.norm();
    if !(r <= T::one() + T::tol(1e-12)) {
        return Err(Error::Domain(format!("branch overlap modulus {r} exceeds 1")));
    }
    let r = r.min(T::one());
    let s = (T::lit(2.0) * eta0).sin().abs();
    Ok(HybridConcurrence {
        verbatim: ConcurrenceValue::new(s * (T::one() - r).sqrt(), ConcurrenceMethod::HybridOverlap),
        general: ConcurrenceValue::new(s * (T::one() - r * r).sqrt(), ConcurrenceMethod::HybridOverlap),
    })
}

/// Bipartition of the qubit-qubit-mode system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cut {
    /// Both qubits against the condensate mode.
    QubitsVsMode,
    /// First qubit against second qubit and mode.
    FirstQubitVsRest,
    /// Second qubit against first qubit and mode.
    SecondQubitVsRest,
}

fn single_qubit_state<T: Real>(state: &JointState<T>, first: bool) -> CMat<T> {
    let c = state.coeffs();
    let mut m = CMat::zeros(2, 2);
    for a in Branch::ALL {
        for b in Branch::ALL {
            let ((a1, a2), (b1, b2)) = (a.spins(), b.spins());
            let (keep_a, keep_b, same_rest) = if first {
                (a1, b1, a2 == b2)
            } else {
                (a2, b2, a1 == b1)
            };
            if !same_rest {
                continue;
            }
            let (ca, cb) = (c[a.index()], c[b.index()]);
            if ca.is_zero() || cb.is_zero() {
                continue;
            }
            let ov = inner(state.branch_state(b).amps(), state.branch_state(a).amps());
            let (i, j) = (keep_a as usize, keep_b as usize);
            m[(i, j)] += ca * cb.conj() * ov;
        }
    }
    m
}

fn purity<T: Real>(m: &CMat<T>) -> T {
    let mut acc = T::zero();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc
}

/// Concurrence `sqrt(2(1 - Tr ρ²))` of a pure joint state across `cut`,
/// computed from the explicit reduced state of the two-dimensional side.
pub fn purity_oracle<T: Real>(state: &JointState<T>, cut: Cut) -> Result<ConcurrenceValue<T>> {
    state.check_normalized()?;
    let reduced = match cut {
        Cut::QubitsVsMode => {
            let support = state.support();
            if support.len() > 2 {
                return Err(Error::UnsupportedCut(format!(
                    "qubit side spans {} branches; the two-level formula needs at most 2",
                    support.len()
                )));
            }
            let rho = crate::density::partial_trace(state, T::zero());
            let idx: Vec<usize> = support.iter().map(|b| b.index()).collect();
            rho.matrix().principal(&idx)
        }
        Cut::FirstQubitVsRest => single_qubit_state(state, true),
        Cut::SecondQubitVsRest => single_qubit_state(state, false),
    };
    // (Tr ρ)² - Tr ρ² equals 1 - Tr ρ² for unit trace and avoids cancelling against 1
    let tr = reduced.trace().re;
    let linear_entropy = (tr * tr - purity(&reduced)).max(T::zero());
    let c = (T::lit(2.0) * linear_entropy).sqrt().min(T::one());
    Ok(ConcurrenceValue::new(c, ConcurrenceMethod::PurityOracle))
}

/// Concurrence read off a geometric phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness<T> {
    /// The printed inversion formula; `None` where its square root is imaginary.
    pub verbatim: Option<T>,
    /// Exact inverse of the corresponding forward phase relation.
    pub consistent: ConcurrenceValue<T>,
}

fn sqrt_checked<T: Real>(arg: T, what: &str) -> Result<T> {
    if arg < -T::tol(1e-12) || !arg.is_finite() {
        return Err(Error::Domain(format!("{what}: square-root argument {arg} is negative")));
    }
    Ok(arg.max(T::zero()).sqrt())
}

/// Weak-coupling witness for the Bell-type initial state.
///
/// `phase` must lie in `[0, 4πλ|α|²/ω]`; `verbatim` is
/// `1 - (1 - ωΦ/(4πλ|α|²))²` and the consistent value is its square root.
pub fn witness_micro_micro<T: Real>(phase: T, p: &ModelParams<T>) -> Result<Witness<T>> {
    let tau = quasicycle_period(p)?;
    if !(p.lambda_c > T::zero()) || p.alpha_sq().is_zero() {
        return Err(Error::Domain("witness needs λ > 0 and α ≠ 0".into()));
    }
    if p.lambda_c * tau > T::lit(0.1) {
        return Err(Error::Precondition(format!(
            "weak-coupling witness needs λτ ≪ 1, got λτ = {}",
            p.lambda_c * tau
        )));
    }
    let full = T::lit(4.0) * T::PI() * p.lambda_c * p.alpha_sq() / p.omega;
    let slack = full * T::tol(1e-12);
    if !(phase >= -slack && phase <= full + slack) {
        return Err(Error::Domain(format!("phase {phase} outside [0, {full}]")));
    }
    let x = (phase / full).max(T::zero()).min(T::one());
    let verbatim = T::one() - (T::one() - x) * (T::one() - x);
    let consistent = sqrt_checked(x * (T::lit(2.0) - x), "micro-micro witness")?;
    Ok(Witness {
        verbatim: Some(verbatim),
        consistent: ConcurrenceValue::new(consistent, ConcurrenceMethod::PhaseInversion),
    })
}

/// Special-point phase of the hybrid state as a function of its concurrence:
/// `-(16+ω) ln(1 - C²)/64` for `MacroBoth` and
/// `-π(1 - 4J/ω) + ln(1 - C²)/4` for `MacroSingle`.
pub fn macro_phase_from_concurrence<T: Real>(concurrence: T, scenario: Scenario, p: &ModelParams<T>) -> Result<T> {
    if !(concurrence >= T::zero() && concurrence < T::one()) {
        return Err(Error::Domain(format!(
            "concurrence must lie in [0, 1), got {concurrence}"
        )));
    }
    let log = (-concurrence * concurrence).ln_1p();
    match scenario {
        Scenario::MacroBoth => Ok(-(T::lit(16.0) + p.omega) * log / T::lit(64.0)),
        Scenario::MacroSingle => {
            Ok(-T::PI() * (T::one() - T::lit(4.0) * p.j_vdw / p.omega) + log / T::lit(4.0))
        }
        Scenario::MicroMicro => Err(Error::Precondition(
            "hybrid phase relation is defined for the hybrid scenarios only".into(),
        )),
    }
}

/// Hybrid-state witness.
///
/// * `MacroBoth`: `sqrt(1 - exp(-64Φ/(16+ω)))`, which is already the exact
///   inverse, so both fields agree.
/// * `MacroSingle`: printed `sqrt(1 - exp(4Φ' - 16Jπ/ω))`; the exact inverse
///   of the forward relation is `sqrt(1 - exp(4Φ' + 4π - 16Jπ/ω))`.
pub fn witness_micro_macro<T: Real>(phase: T, scenario: Scenario, p: &ModelParams<T>) -> Result<Witness<T>> {
    p.validate()?;
    let (verbatim_arg, consistent_arg) = match scenario {
        Scenario::MacroBoth => {
            let a = T::one() - (-T::lit(64.0) * phase / (T::lit(16.0) + p.omega)).exp();
            (a, a)
        }
        Scenario::MacroSingle => {
            let tilt = T::lit(16.0) * p.j_vdw * T::PI() / p.omega;
            let four = T::lit(4.0);
            (
                T::one() - (four * phase - tilt).exp(),
                T::one() - (four * phase + four * T::PI() - tilt).exp(),
            )
        }
        Scenario::MicroMicro => {
            return Err(Error::Precondition(
                "hybrid witness is defined for the hybrid scenarios only".into(),
            ))
        }
    };
    let consistent = sqrt_checked(consistent_arg, "hybrid witness")?;
    let verbatim = sqrt_checked(verbatim_arg, "hybrid witness").ok();
    Ok(Witness {
        verbatim,
        consistent: ConcurrenceValue::new(consistent, ConcurrenceMethod::PhaseInversion),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::QubitDensity;
    use crate::dynamics::{branch_overlap, coherent, JointState};
    use crate::geomphase::weak_coupling_phase;
    use num_complex::Complex64 as C;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn pure_density(psi: [C; 4]) -> QubitDensity<f64> {
        let m = CMat::from_fn(4, 4, |i, j| psi[i] * psi[j].conj());
        QubitDensity::new(m, 0.0).unwrap()
    }

    #[test]
    fn bell_and_product() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = C::new(0.0, 0.0);
        let bell = pure_density([C::new(h, 0.0), C::new(h, 0.0), z, z]);
        assert!((concurrence_wootters(&bell).unwrap().value - 1.0).abs() < 1e-12);
        let singlet = pure_density([z, z, C::new(h, 0.0), C::new(-h, 0.0)]);
        assert!((concurrence_wootters(&singlet).unwrap().value - 1.0).abs() < 1e-12);
        let prod = pure_density([C::new(1.0, 0.0), z, z, z]);
        assert!(concurrence_wootters(&prod).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn hand_checked_ordering() {
        // |ψ⟩ = (|00⟩ + |01⟩)/√2 = |0⟩(|0⟩+|1⟩)/√2 is a product state; a
        // mis-ordered σ_y⊗σ_y would pair |00⟩ with |01⟩ and report C = 1
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = C::new(0.0, 0.0);
        let rho = pure_density([C::new(h, 0.0), z, C::new(h, 0.0), z]);
        assert!(concurrence_wootters(&rho).unwrap().value < 1e-12);
        let comp = to_computational(rho.matrix());
        assert!((comp[(0, 1)] - C::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(comp[(3, 3)], C::new(0.0, 0.0));
        // (|01⟩+|10⟩)/√2 is maximally entangled
        let psi = pure_density([z, z, C::new(h, 0.0), C::new(0.0, h)]);
        assert!((concurrence_wootters(&psi).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn werner_state_threshold() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = C::new(0.0, 0.0);
        let bell = pure_density([C::new(h, 0.0), C::new(h, 0.0), z, z]);
        for &f in &[0.2, 0.5, 0.8, 1.0] {
            let m = CMat::from_fn(4, 4, |i, j| {
                let id = if i == j { (1.0 - f) / 4.0 } else { 0.0 };
                bell.matrix()[(i, j)] * f + C::new(id, 0.0)
            });
            let rho = QubitDensity::new(m, 0.0).unwrap();
            let expected = f64::max(0.0, (3.0 * f - 1.0) / 2.0);
            assert!((concurrence_wootters(&rho).unwrap().value - expected).abs() < 1e-12, "f={f}");
        }
    }

    #[test]
    fn rejects_invalid_density() {
        let mut m = CMat::<f64>::identity(4);
        m[(0, 0)] = C::new(2.0, 0.0);
        let rho = QubitDensity::new_unchecked(m, 0.0).unwrap();
        assert!(matches!(concurrence_wootters(&rho), Err(Error::Validation(_))));
    }

    #[test]
    fn x_state_examples() {
        assert_eq!(concurrence_x_state(0.5, 0.0, 0.5, C::new(0.0, 0.0)).unwrap().value, 0.0);
        assert!((concurrence_x_state(0.5, 0.0, 0.5, C::new(0.5, 0.0)).unwrap().value - 1.0).abs() < 1e-15);
        assert!(concurrence_x_state(0.5, 0.1, 0.5, C::new(0.0, 0.0)).is_err());
        assert!(concurrence_x_state(0.6, 0.0, 0.4, C::new(0.5, 0.0)).is_err());
        assert!(concurrence_x_state(1.2, -0.1, 0.0, C::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn x_state_matches_wootters_on_random_draws() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let (a, b, c): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
            let s = a + 2.0 * b + c;
            let (w, x, y) = (a / s, b / s, c / s);
            let z = C::from_polar((w * y).sqrt() * rng.gen::<f64>(), rng.gen_range(-PI..PI));
            let m = x_state_matrix(w, x, y, z).unwrap();
            let rho = QubitDensity::new(m, 0.0).unwrap();
            let cw = concurrence_wootters(&rho).unwrap().value;
            let cx = concurrence_x_state(w, x, y, z).unwrap().value;
            assert!((cw - cx).abs() < 1e-10, "{cw} vs {cx}");
        }
    }

    #[test]
    fn hybrid_examples() {
        let h = hybrid_concurrence(FRAC_PI_4, C::new(0.0, 0.0)).unwrap();
        assert!((h.general.value - 1.0).abs() < 1e-15);
        let h = hybrid_concurrence(0.0, C::new(0.3, 0.1)).unwrap();
        assert_eq!(h.general.value, 0.0);
        assert_eq!(h.verbatim.value, 0.0);
        let ov = C::new((-2.0f64).exp(), 0.0);
        let h = hybrid_concurrence(FRAC_PI_4, ov).unwrap();
        assert!((h.verbatim.value - 0.929_873_9).abs() < 1e-6);
        assert!((h.general.value - 0.990_799_3).abs() < 1e-6);
        assert!(hybrid_concurrence(FRAC_PI_4, C::new(1.5, 0.0)).is_err());
    }

    #[test]
    fn purity_oracle_on_hybrid_states() {
        let alpha = C::new(1.0, 0.0);
        let s = JointState::hybrid_both(FRAC_PI_4, alpha, 1e-14).unwrap();
        let ov = branch_overlap(s.branch_state(Branch::B00), s.branch_state(Branch::B11)).unwrap();
        let oracle = purity_oracle(&s, Cut::QubitsVsMode).unwrap().value;
        let general = hybrid_concurrence(FRAC_PI_4, ov).unwrap().general.value;
        assert!((oracle - general).abs() < 1e-9);

        let s = JointState::hybrid_single(0.4, alpha, 1e-14).unwrap();
        let ov = branch_overlap(s.branch_state(Branch::B00), s.branch_state(Branch::B01)).unwrap();
        let general = hybrid_concurrence(0.4, ov).unwrap().general.value;
        for cut in [Cut::QubitsVsMode, Cut::SecondQubitVsRest] {
            assert!((purity_oracle(&s, cut).unwrap().value - general).abs() < 1e-9);
        }
        assert!(purity_oracle(&s, Cut::FirstQubitVsRest).unwrap().value < 1e-7);
    }

    #[test]
    fn purity_oracle_edge_cases() {
        let alpha = C::new(1.0, 0.0);
        let prod = JointState::product([C::new(1.0, 0.0), C::default(), C::default(), C::default()], alpha, 1e-12).unwrap();
        assert!(purity_oracle(&prod, Cut::QubitsVsMode).unwrap().value < 1e-7);
        let big = JointState::hybrid_both(FRAC_PI_4, C::new(4.0, 0.0), 1e-14).unwrap();
        assert!((purity_oracle(&big, Cut::QubitsVsMode).unwrap().value - 1.0).abs() < 1e-9);
        let n = coherent(alpha, 20);
        let h = C::new(0.5, 0.0);
        let spread = JointState::new([h; 4], [n.clone(), n.clone(), n.clone(), n]).unwrap();
        assert!(matches!(
            purity_oracle(&spread, Cut::QubitsVsMode),
            Err(Error::UnsupportedCut(_))
        ));
        // a product across qubit 1 regardless of support size
        assert!(purity_oracle(&spread, Cut::FirstQubitVsRest).unwrap().value < 1e-7);
    }

    fn weak() -> ModelParams<f64> {
        ModelParams::minimal(1.0, 1e-4, C::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn micro_micro_witness_endpoints_and_roundtrip() {
        let p = weak();
        let full = 4.0 * PI * 1e-4 / 1.0;
        assert_eq!(witness_micro_micro(0.0, &p).unwrap().consistent.value, 0.0);
        assert!((witness_micro_micro(full, &p).unwrap().consistent.value - 1.0).abs() < 1e-15);
        let phi = weak_coupling_phase(0.6, &p).unwrap();
        let w = witness_micro_micro(phi, &p).unwrap();
        assert!((w.consistent.value - 0.6).abs() < 1e-10);
        assert!((w.verbatim.unwrap() - 0.36).abs() < 1e-10);
        assert!(witness_micro_micro(full * 1.01, &p).is_err());
        assert!(witness_micro_micro(-1e-3, &p).is_err());
        let strong = ModelParams::minimal(1.0, 0.5, C::new(1.0, 0.0)).unwrap();
        assert!(matches!(witness_micro_micro(0.0, &strong), Err(Error::Precondition(_))));
    }

    #[test]
    fn macro_witness_roundtrips() {
        let mut p = weak();
        p.j_vdw = 0.13;
        for scenario in [Scenario::MacroBoth, Scenario::MacroSingle] {
            for k in 0..20 {
                let c = 0.02 + 0.95 * k as f64 / 19.0;
                let phi = macro_phase_from_concurrence(c, scenario, &p).unwrap();
                let w = witness_micro_macro(phi, scenario, &p).unwrap();
                assert!((w.consistent.value - c).abs() < 1e-10, "{scenario:?} c={c}");
            }
        }
        // printed single-qubit inversion is off by e^{4π}
        let phi = macro_phase_from_concurrence(0.5, Scenario::MacroSingle, &p).unwrap();
        let w = witness_micro_macro(phi, Scenario::MacroSingle, &p).unwrap();
        assert!((w.verbatim.unwrap() - 0.5).abs() > 0.4);
    }

    #[test]
    fn macro_witness_regression() {
        let p = ModelParams::minimal(1.0, 0.125, C::new(1.0, 0.0)).unwrap();
        let phi = 17.0 / 64.0 * 2f64.ln();
        let w = witness_micro_macro(phi, Scenario::MacroBoth, &p).unwrap();
        // exponent is -64·(17/64)ln2/17 = -ln 2
        assert!((w.consistent.value - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(w.verbatim, Some(w.consistent.value));
        assert!(witness_micro_macro(-0.1, Scenario::MacroBoth, &p).is_err());
        assert!(witness_micro_macro(0.1, Scenario::MicroMicro, &p).is_err());
        assert!(macro_phase_from_concurrence(1.0, Scenario::MacroBoth, &p).is_err());
    }
}
