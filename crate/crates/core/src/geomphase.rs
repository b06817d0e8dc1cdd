//! Kinematic geometric phase of a mixed-state path and the closed forms for
//! the two-branch scenarios.
//!
//! For a density path with eigen-branches `ε_i(t)`, `|ε_i(t)⟩` the phase is
//!
//! ```text
//! Φ_G = arg Σ_i sqrt(ε_i(0) ε_i(τ)) ⟨ε_i(0)|ε_i(τ)⟩ exp(-∫ ⟨ε_i|ε̇_i⟩ dt)
//! ```
//!
//! On a grid the parallel-transport factor is replaced by the product of
//! phase-normalised links `⟨ε_i(t_{k+1})|ε_i(t_k)⟩`, which turns every branch
//! term into a Bargmann invariant: exactly gauge invariant at each step, with
//! an `O(1/N²)` discretisation error that is removed by Richardson
//! extrapolation against the stride-2 subpath.

use num_traits::{One, Zero};

use crate::density::{analytic_path, eigen_path, DecayPhase, EigenPath, Scenario};
use crate::error::{Error, Result};
use crate::linalg::inner;
use crate::model::{quasicycle_period, ModelParams};
use crate::scalar::{cis, wrap_angle, Cx, Real};

pub const DEFAULT_STEPS: usize = 2048;
pub const DEFAULT_PHASE_TOL: f64 = 1e-7;
const MAX_REFINED_STEPS: usize = 1 << 17;

/// Non-fatal conditions met while computing a phase.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseWarning {
    /// Eigen-branches came within the degeneracy tolerance; continuation is ambiguous there.
    Degeneracy { step: usize, gap: f64 },
    /// The running branch sum passed close to zero, so the unwrapped value may be off by 2π.
    UnwrapAmbiguity { step: usize },
    /// The total branch sum vanishes at the endpoint; the phase is undefined.
    VanishingSum,
    /// Grid too coarse or of odd length; no Richardson correction applied.
    NoExtrapolation,
}

impl std::fmt::Display for PhaseWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhaseWarning::Degeneracy { step, gap } => write!(f, "degeneracy(step={step},gap={gap:e})"),
            PhaseWarning::UnwrapAmbiguity { step } => write!(f, "unwrap-ambiguity(step={step})"),
            PhaseWarning::VanishingSum => f.write_str("vanishing-sum"),
            PhaseWarning::NoExtrapolation => f.write_str("no-extrapolation"),
        }
    }
}

/// Kinematic geometric phase along one path.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResult<T> {
    /// Principal value in `(-π, π]`.
    pub principal: T,
    /// Continuous value accumulated from `Φ(0) = 0`, Richardson corrected.
    pub unwrapped: T,
    /// Unwrapped value on the full grid before extrapolation.
    pub raw_unwrapped: T,
    /// `sqrt(ε_i(0) ε_i(τ)) ⟨ε_i(0)|ε_i(τ)⟩ Π links` for each branch.
    pub per_branch: Vec<Cx<T>>,
    pub n_steps: usize,
    pub warnings: Vec<PhaseWarning>,
}

struct Bargmann<T> {
    per_branch: Vec<Cx<T>>,
    unwrapped: T,
    warnings: Vec<PhaseWarning>,
}

fn weight_floor<T: Real>() -> T {
    T::tol(1e-13)
}

/// `⟨b|a⟩ / |⟨b|a⟩|`, or `1` for a vanishing overlap.
fn unit_link<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> (Cx<T>, bool) {
    let z = inner(b, a);
    let r = z.norm();
    if r <= T::tol(1e-12) {
        (Cx::one(), false)
    } else {
        (z / r, true)
    }
}

fn bargmann<T: Real>(path: &EigenPath<T>) -> Bargmann<T> {
    let last = path.len() - 1;
    let m = path.n_branches();
    let floor = weight_floor::<T>();
    let active: Vec<bool> = (0..m).map(|i| path.eigenvalue(0, i) > floor).collect();
    let mut links = vec![Cx::<T>::one(); m];
    let mut warnings = Vec::new();
    let mut unwrapped = T::zero();
    let mut prev_arg = T::zero();
    let mut per_branch = vec![Cx::zero(); m];

    for k in 1..=last {
        let mut sum = Cx::zero();
        for i in 0..m {
            if !active[i] {
                continue;
            }
            let (l, ok) = unit_link(path.eigenvector(k - 1, i), path.eigenvector(k, i));
            if !ok {
                warnings.push(PhaseWarning::UnwrapAmbiguity { step: k });
            }
            links[i] *= l;
            let closing = inner(path.eigenvector(0, i), path.eigenvector(k, i));
            let w = (path.eigenvalue(0, i) * path.eigenvalue(k, i)).sqrt();
            let term = closing * links[i];
            sum += term.scale(w);
            if k == last {
                per_branch[i] = if path.eigenvalue(k, i) > floor {
                    term.scale(w)
                } else {
                    Cx::zero()
                };
            }
        }
        if sum.norm() <= T::tol(1e-12) {
            if k == last {
                warnings.push(PhaseWarning::VanishingSum);
            } else {
                warnings.push(PhaseWarning::UnwrapAmbiguity { step: k });
            }
            continue;
        }
        let arg = sum.arg();
        let step: T = wrap_angle(arg - prev_arg);
        if step.abs() > T::FRAC_PI_2() {
            warnings.push(PhaseWarning::UnwrapAmbiguity { step: k });
        }
        unwrapped += step;
        prev_arg = arg;
    }
    Bargmann {
        per_branch,
        unwrapped,
        warnings,
    }
}

/// Kinematic phase of an eigen-path covering one quasicycle.
///
/// Branches with vanishing initial or final weight contribute nothing. When
/// the number of steps is even and at least 4 the unwrapped value is
/// Richardson-extrapolated from the full grid and its stride-2 subgrid.
pub fn kinematic_phase<T: Real>(path: &EigenPath<T>) -> Result<PhaseResult<T>> {
    if path.len() < 2 {
        return Err(Error::Domain(format!(
            "kinematic phase needs at least 2 path points, got {}",
            path.len()
        )));
    }
    let n_steps = path.len() - 1;
    let fine = bargmann(path);
    let mut warnings: Vec<PhaseWarning> = path
        .flags()
        .iter()
        .map(|f| PhaseWarning::Degeneracy {
            step: f.step,
            gap: f.gap.to_f64_lossy(),
        })
        .collect();
    warnings.extend(fine.warnings);

    let unwrapped = match path.subsample(2).filter(|_| n_steps >= 4) {
        Some(coarse_path) => {
            let coarse = bargmann(&coarse_path);
            if (fine.unwrapped - coarse.unwrapped).abs() < T::FRAC_PI_2() {
                (T::lit(4.0) * fine.unwrapped - coarse.unwrapped) / T::lit(3.0)
            } else {
                warnings.push(PhaseWarning::NoExtrapolation);
                fine.unwrapped
            }
        }
        None => {
            warnings.push(PhaseWarning::NoExtrapolation);
            fine.unwrapped
        }
    };
    warnings.dedup();
    Ok(PhaseResult {
        principal: wrap_angle(unwrapped),
        unwrapped,
        raw_unwrapped: fine.unwrapped,
        per_branch: fine.per_branch,
        n_steps,
        warnings,
    })
}

/// Doubles the grid, starting from `n_start` steps, until two successive
/// unwrapped values differ by less than `phase_tol`.
pub fn kinematic_phase_refined<T, F>(mut make_path: F, n_start: usize, phase_tol: T) -> Result<PhaseResult<T>>
where
    T: Real,
    F: FnMut(usize) -> Result<EigenPath<T>>,
{
    let mut n = n_start.max(4);
    let mut prev = kinematic_phase(&make_path(n)?)?;
    loop {
        let next_n = n * 2;
        if next_n > MAX_REFINED_STEPS {
            return Err(Error::Refinement {
                steps: n,
                last_change: f64::NAN,
                tolerance: phase_tol.to_f64_lossy(),
            });
        }
        let next = kinematic_phase(&make_path(next_n)?)?;
        let change = wrap_angle(next.unwrapped - prev.unwrapped).abs();
        if change < phase_tol {
            return Ok(next);
        }
        if next_n * 2 > MAX_REFINED_STEPS {
            return Err(Error::Refinement {
                steps: next_n,
                last_change: change.to_f64_lossy(),
                tolerance: phase_tol.to_f64_lossy(),
            });
        }
        prev = next;
        n = next_n;
    }
}

/// Kinematic phase of a closed-form scenario path with `n_steps` steps.
pub fn scenario_phase<T: Real>(
    decay: DecayPhase,
    eta0: T,
    p: &ModelParams<T>,
    n_steps: usize,
    degeneracy_tol: T,
) -> Result<PhaseResult<T>> {
    let path = eigen_path(&analytic_path(decay, eta0, p, n_steps)?, degeneracy_tol)?;
    kinematic_phase(&path)
}

/// Composite Simpson rule with `n` (rounded up to even) panels.
pub fn simpson<T: Real>(f: impl Fn(T) -> T, a: T, b: T, n: usize) -> T {
    let n = (n + n % 2).max(2);
    let h = (b - a) / T::from_usize(n);
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { T::lit(4.0) } else { T::lit(2.0) };
        acc += w * f(a + h * T::from_usize(k));
    }
    acc * h / T::lit(3.0)
}

/// Mixing angle of the two-branch block: `(cos θ, sin θ)` with
/// `cos 2θ = cos 2η₀ / E` and `E = sqrt(1 + sin²2η₀ (e^{-2Γ} - 1))`.
fn mixing<T: Real>(eta0: T, gamma: T) -> (T, T, T) {
    let s2 = (T::lit(2.0) * eta0).sin().powi(2);
    let e = (T::one() + s2 * ((-T::lit(2.0) * gamma).exp() - T::one())).sqrt();
    let c2 = (T::lit(2.0) * eta0).cos();
    let two_e = T::lit(2.0) * e;
    let cos_t = ((e + c2) / two_e).max(T::zero()).sqrt();
    let sin_t = ((e - c2) / two_e).max(T::zero()).sqrt();
    (cos_t, sin_t, e)
}

/// Single-branch closed form for the Bell-type initial state,
/// `arg[cos η₀ cos θ(τ) + e^{-iΛ₁(τ)} sin η₀ sin θ(τ)] + ∫₀^τ Λ̇₁ sin²θ dt`,
/// with the integral taken by Simpson's rule on `n_quad` panels.
pub fn phase_micro_micro_closed<T: Real>(eta0: T, p: &ModelParams<T>, n_quad: usize) -> Result<T> {
    if n_quad < 16 {
        return Err(Error::Domain(format!("n_quad must be at least 16, got {n_quad}")));
    }
    let tau = quasicycle_period(p)?;
    let decay = DecayPhase::corrected(Scenario::MicroMicro);
    let (cos_tau, sin_tau, _) = mixing(eta0, decay.gamma(tau, p));
    let closing = Cx::from(eta0.cos() * cos_tau) + cis(-decay.lambda(tau, p)).scale(eta0.sin() * sin_tau);
    let integral = simpson(
        |t| {
            let (_, s, _) = mixing(eta0, decay.gamma(t, p));
            decay.lambda_rate(t, p) * s * s
        },
        T::zero(),
        tau,
        n_quad,
    );
    Ok(closing.arg() + integral)
}

/// Two-branch phase split into the leading-branch part and the
/// factorisation correction `arg(1 + F₁F₂F₃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBranchPhase<T> {
    pub phi1: T,
    pub phi2: T,
    pub total: T,
    pub f1: T,
    pub f2: Cx<T>,
    pub f3: Cx<T>,
}

/// Closed-form evaluation of the two-branch phase from the mixing angle,
/// with the transport integrals taken by Simpson's rule.
///
/// Here `F₂ = ⟨ε₂(0)|ε₂(τ)⟩ / ⟨ε₁(0)|ε₁(τ)⟩` is evaluated from its
/// definition; the printed ratio has numerator and denominator swapped,
/// which is invisible at `η₀ = π/4` where both equal one.
pub fn phase_two_branch_closed<T: Real>(
    decay: DecayPhase,
    eta0: T,
    p: &ModelParams<T>,
    n_quad: usize,
) -> Result<TwoBranchPhase<T>> {
    if n_quad < 16 {
        return Err(Error::Domain(format!("n_quad must be at least 16, got {n_quad}")));
    }
    let tau = quasicycle_period(p)?;
    let (c0, s0, e0) = mixing(eta0, decay.gamma(T::zero(), p));
    let (ct, st, et) = mixing(eta0, decay.gamma(tau, p));
    let rel = cis(decay.lambda(T::zero(), p) - decay.lambda(tau, p));
    let ov1 = Cx::from(c0 * ct) + rel.scale(s0 * st);
    let ov2 = Cx::from(s0 * st) + rel.scale(c0 * ct);
    if ov1.norm() <= T::tol(1e-14) {
        return Err(Error::DivisionByZero("⟨ε₁(0)|ε₁(τ)⟩ vanishes".into()));
    }
    let w1 = (T::one() + e0) * (T::one() + et);
    if w1 <= T::zero() {
        return Err(Error::DivisionByZero("ε₁(0)ε₁(τ) vanishes".into()));
    }
    let f1 = (((T::one() - e0) * (T::one() - et)).max(T::zero()) / w1).sqrt();
    let f2 = ov2 / ov1;
    let transport1 = simpson(
        |t| {
            let (_, s, _) = mixing(eta0, decay.gamma(t, p));
            decay.lambda_rate(t, p) * s * s
        },
        T::zero(),
        tau,
        n_quad,
    );
    let transport_diff = simpson(
        |t| {
            let (c, s, _) = mixing(eta0, decay.gamma(t, p));
            decay.lambda_rate(t, p) * (c * c - s * s)
        },
        T::zero(),
        tau,
        n_quad,
    );
    let f3 = cis(transport_diff);
    let phi1 = ov1.arg() + transport1;
    let phi2 = (Cx::<T>::one() + f2 * f3 * f1).arg();
    Ok(TwoBranchPhase {
        phi1,
        phi2,
        total: phi1 + phi2,
        f1,
        f2,
        f3,
    })
}

/// Factorisation functions read off an eigen-path in its stored gauge
/// (first non-negligible component real and non-negative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization<T> {
    /// `sqrt(ε₂(0)ε₂(τ) / (ε₁(0)ε₁(τ)))`.
    pub f1: T,
    /// `⟨ε₂(0)|ε₂(τ)⟩ / ⟨ε₁(0)|ε₁(τ)⟩`.
    pub f2: Cx<T>,
    /// `exp(-∫ (⟨ε₂|ε̇₂⟩ - ⟨ε₁|ε̇₁⟩) dt)`.
    pub f3: Cx<T>,
    /// `arg(1 + F₁F₂F₃)`.
    pub phi2: T,
}

fn transport_phase<T: Real>(path: &EigenPath<T>, branch: usize) -> T {
    let mut acc = T::zero();
    for k in 1..path.len() {
        let (l, _) = unit_link(path.eigenvector(k - 1, branch), path.eigenvector(k, branch));
        acc += l.arg();
    }
    acc
}

/// Computes `F₁, F₂, F₃` and `Φ₂ = arg(1 + F₁F₂F₃)` from a two-branch path.
pub fn factorization_functions<T: Real>(path: &EigenPath<T>) -> Result<Factorization<T>> {
    if path.n_branches() != 2 {
        return Err(Error::Domain(format!(
            "factorization needs a two-branch path, got {} branches",
            path.n_branches()
        )));
    }
    if path.len() < 2 {
        return Err(Error::Domain("factorization needs at least 2 path points".into()));
    }
    let last = path.len() - 1;
    let w1 = path.eigenvalue(0, 0) * path.eigenvalue(last, 0);
    if w1 <= T::zero() {
        return Err(Error::DivisionByZero("ε₁(0)ε₁(τ) vanishes".into()));
    }
    let floor = weight_floor::<T>();
    let (e20, e2t) = (path.eigenvalue(0, 1), path.eigenvalue(last, 1));
    let f1 = if e20 > floor && e2t > floor {
        (e20 * e2t / w1).sqrt()
    } else {
        T::zero()
    };
    let ov1 = inner(path.eigenvector(0, 0), path.eigenvector(last, 0));
    let ov2 = inner(path.eigenvector(0, 1), path.eigenvector(last, 1));
    if ov1.norm() <= T::tol(1e-14) {
        return Err(Error::DivisionByZero("⟨ε₁(0)|ε₁(τ)⟩ vanishes".into()));
    }
    let f2 = ov2 / ov1;
    let diff = |p: &EigenPath<T>| transport_phase(p, 1) - transport_phase(p, 0);
    let fine = diff(path);
    let phase3 = match path.subsample(2).filter(|_| last >= 4) {
        Some(coarse) => {
            let c = diff(&coarse);
            if wrap_angle(fine - c).abs() < T::FRAC_PI_2() {
                fine + wrap_angle(fine - c) / T::lit(3.0)
            } else {
                fine
            }
        }
        None => fine,
    };
    let f3 = cis(phase3);
    let phi2 = if f1.is_zero() {
        T::zero()
    } else {
        (Cx::<T>::one() + f2 * f3 * f1).arg()
    };
    Ok(Factorization { f1, f2, f3, phi2 })
}

/// `4πλ|α|²(1 - sqrt(1 - C²))/ω`.
pub fn weak_coupling_phase<T: Real>(concurrence: T, p: &ModelParams<T>) -> Result<T> {
    if !(concurrence >= T::zero() && concurrence <= T::one()) {
        return Err(Error::Domain(format!(
            "concurrence must lie in [0, 1], got {concurrence}"
        )));
    }
    let scale = T::lit(4.0) * T::PI() * p.lambda_c * p.alpha_sq() / p.omega;
    Ok(scale * (T::one() - (T::one() - concurrence * concurrence).sqrt()))
}

/// Unwrapped kinematic phase of the Bell-type state as `λ → 0`:
/// the mixing angle freezes at `η₀` and `Λ₁(τ) = 4π`, leaving
/// `4π sin²η₀ = 2π(1 - sqrt(1 - C²))`.
pub fn uncoupled_bell_phase<T: Real>(concurrence: T) -> Result<T> {
    if !(concurrence >= T::zero() && concurrence <= T::one()) {
        return Err(Error::Domain(format!(
            "concurrence must lie in [0, 1], got {concurrence}"
        )));
    }
    Ok(T::TAU() * (T::one() - (T::one() - concurrence * concurrence).sqrt()))
}

/// Printed special-point phases next to the kinematic value on the
/// oracle-consistent path.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroPhase<T> {
    /// The closed form exactly as printed.
    pub verbatim: T,
    /// For the single-qubit hybrid state: the printed form with the
    /// `(ω - 2J)` detuning. `None` for the two-qubit hybrid state.
    pub corrected: Option<T>,
    pub kinematic: PhaseResult<T>,
}

/// Closed-form phases of the hybrid states at `η₀ = π/4`, `λτ = π/4`.
///
/// * `MacroBoth`: `2π(1/4 + ω/64)|α|²/π`
/// * `MacroSingle`: `-π(1 - 4J/ω) - |α|²/2`, and the `(ω - 2J)` variant
///   `-π(1 - 2J/ω) - |α|²/2`.
pub fn phase_macro_closed<T: Real>(
    scenario: Scenario,
    eta0: T,
    p: &ModelParams<T>,
    n_steps: usize,
) -> Result<MacroPhase<T>> {
    let tau = quasicycle_period(p)?;
    let special = T::lit(1e-9).max(T::epsilon() * T::lit(64.0));
    if (eta0 - T::FRAC_PI_4()).abs() > special {
        return Err(Error::Precondition(format!("closed form needs η₀ = π/4, got {eta0}")));
    }
    if (p.lambda_c * tau - T::FRAC_PI_4()).abs() > special {
        return Err(Error::Precondition(format!(
            "closed form needs λτ = π/4, got {}",
            p.lambda_c * tau
        )));
    }
    let a2 = p.alpha_sq();
    let (verbatim, corrected) = match scenario {
        Scenario::MacroBoth => (
            T::TAU() * (T::lit(0.25) + p.omega / T::lit(64.0)) * a2 / T::PI(),
            None,
        ),
        Scenario::MacroSingle => {
            let shift = |k: f64| -T::PI() * (T::one() - T::lit(k) * p.j_vdw / p.omega) - a2 * T::lit(0.5);
            (shift(4.0), Some(shift(2.0)))
        }
        Scenario::MicroMicro => {
            return Err(Error::Precondition(
                "special-point closed form exists only for the hybrid scenarios".into(),
            ))
        }
    };
    let kinematic = scenario_phase(
        DecayPhase::corrected(scenario),
        eta0,
        p,
        n_steps,
        T::lit(crate::density::DEFAULT_DEGENERACY_TOL),
    )?;
    Ok(MacroPhase {
        verbatim,
        corrected,
        kinematic,
    })
}
