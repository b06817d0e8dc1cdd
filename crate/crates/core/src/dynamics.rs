//! Truncated Fock-space representation of the condensate mode and exact
//! evolution of each qubit branch.
//!
//! Every branch `|s1 s2⟩` sees a diagonal Hamiltonian in the number basis, so
//! a coherent state evolves into a generalized coherent state whose Fock
//! amplitudes pick up the phases `exp(-i t θ_b(n))`. This module is the
//! brute-force reference every closed form in the crate is checked against.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::inner;
use crate::model::{branch_frequency, Branch, ModelParams};
use crate::scalar::{cis, Cx, Real};

/// Smallest cutoff handed out by [`truncation_dim`].
pub const MIN_TRUNCATION: usize = 4;

/// Default certified Poisson tail mass.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Amplitudes on the number states `0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T> {
    amps: Vec<Cx<T>>,
}

impl<T: Real> FockVector<T> {
    pub fn from_amplitudes(amps: Vec<Cx<T>>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Validation("Fock vector needs at least one amplitude".into()));
        }
        let v = Self { amps };
        let mass = v.norm_sqr();
        if mass > T::one() + T::tol(1e-12) {
            return Err(Error::Validation(format!(
                "Fock vector norm² {mass} exceeds one"
            )));
        }
        Ok(v)
    }

    pub fn vacuum(n_max: usize) -> Self {
        let mut amps = vec![Cx::zero(); n_max + 1];
        amps[0] = Cx::new(T::one(), T::zero());
        Self { amps }
    }

    #[inline]
    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    #[inline]
    pub fn amps(&self) -> &[Cx<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Mass lost to the truncation, `1 - ‖v‖²`.
    pub fn missing_mass(&self) -> T {
        T::one() - self.norm_sqr()
    }
}

/// Smallest cutoff `n_max` whose Poisson tail `Σ_{n>n_max} e^{-|α|²}|α|^{2n}/n!`
/// is below `tail_tol`, floored at [`MIN_TRUNCATION`].
pub fn truncation_dim<T: Real>(alpha: Cx<T>, tail_tol: T) -> Result<usize> {
    if !(tail_tol > T::zero() && tail_tol < T::one()) {
        return Err(Error::Domain(format!(
            "tail tolerance must lie in (0, 1), got {tail_tol}"
        )));
    }
    let mean = alpha.norm_sqr();
    if mean.is_zero() {
        return Ok(MIN_TRUNCATION);
    }
    let modulus = mean.sqrt();
    let fallback = (mean + T::lit(10.0) * modulus + T::lit(20.0)).ceil();
    // far enough out that the remaining Poisson mass is far below any usable tolerance
    let far = (mean + T::lit(40.0) * modulus + T::lit(60.0))
        .max(fallback)
        .to_usize()
        .ok_or_else(|| Error::Domain(format!("|α|² = {mean} too large to truncate")))?;

    let ln_mean = mean.ln();
    let mut log_p = -mean;
    let mut probs = Vec::with_capacity(far + 1);
    probs.push(log_p.exp());
    for n in 1..=far {
        log_p += ln_mean - T::from_usize(n).ln();
        probs.push(log_p.exp());
    }
    // tail[n] = Σ_{m>n} p_m, accumulated from the far end
    let mut tail = T::zero();
    let mut answer = far;
    for n in (0..=far).rev() {
        if tail < tail_tol {
            answer = n;
        } else {
            break;
        }
        tail += probs[n];
    }
    Ok(answer.max(MIN_TRUNCATION))
}

/// Glauber coherent state `|α⟩` truncated at `n_max`.
pub fn coherent<T: Real>(alpha: Cx<T>, n_max: usize) -> FockVector<T> {
    let mean = alpha.norm_sqr();
    let mut amps = Vec::with_capacity(n_max + 1);
    let prefactor = (-mean * T::lit(0.5)).exp();
    if prefactor > T::min_positive_value() * T::lit(1e6) {
        let mut a = Cx::new(prefactor, T::zero());
        amps.push(a);
        for n in 1..=n_max {
            a = a * alpha / T::from_usize(n).sqrt();
            amps.push(a);
        }
    } else {
        // same recurrence carried in log-magnitude so e^{-|α|²/2} cannot underflow
        let ln_mod = mean.sqrt().ln();
        let arg = alpha.arg();
        let mut log_mag = -mean * T::lit(0.5);
        amps.push(Cx::new(log_mag.exp(), T::zero()));
        for n in 1..=n_max {
            log_mag += ln_mod - T::lit(0.5) * T::from_usize(n).ln();
            amps.push(cis(arg * T::from_usize(n)).scale(log_mag.exp()));
        }
    }
    FockVector { amps }
}

/// Applies `exp(-i t θ_b(n))` to every amplitude.
pub fn evolve_branch<T: Real>(
    phi0: &FockVector<T>,
    branch: Branch,
    t: T,
    p: &ModelParams<T>,
) -> FockVector<T> {
    let amps = phi0
        .amps
        .iter()
        .enumerate()
        .map(|(n, a)| a * cis(-t * branch_frequency(branch, n, p)))
        .collect();
    FockVector { amps }
}

/// `⟨a|b⟩` over the truncated basis.
pub fn branch_overlap<T: Real>(a: &FockVector<T>, b: &FockVector<T>) -> Result<Cx<T>> {
    if a.amps.len() != b.amps.len() {
        return Err(Error::DimensionMismatch {
            expected: a.amps.len(),
            found: b.amps.len(),
        });
    }
    Ok(inner(&a.amps, &b.amps))
}

/// Joint qubit-condensate state `Σ_i c_i |branch_i⟩ ⊗ |φ_i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState<T> {
    coeffs: [Cx<T>; 4],
    branch_states: [FockVector<T>; 4],
}

impl<T: Real> JointState<T> {
    pub fn new(coeffs: [Cx<T>; 4], branch_states: [FockVector<T>; 4]) -> Result<Self> {
        let dim = branch_states[0].amps.len();
        for s in &branch_states[1..] {
            if s.amps.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.amps.len(),
                });
            }
        }
        let state = Self {
            coeffs,
            branch_states,
        };
        state.check_normalized()?;
        Ok(state)
    }

    /// `(c0|00⟩ + c1|11⟩ + c2|01⟩ + c3|10⟩) ⊗ |α⟩`.
    pub fn product(coeffs: [Cx<T>; 4], alpha: Cx<T>, tail_tol: T) -> Result<Self> {
        let n_max = truncation_dim(alpha, tail_tol)?;
        let phi = coherent(alpha, n_max);
        Self::new(coeffs, std::array::from_fn(|_| phi.clone()))
    }

    /// `(cos η₀|00⟩ + sin η₀|11⟩) ⊗ |α⟩`.
    pub fn bell(eta0: T, alpha: Cx<T>, tail_tol: T) -> Result<Self> {
        let z = Cx::zero();
        Self::product([Cx::from(eta0.cos()), Cx::from(eta0.sin()), z, z], alpha, tail_tol)
    }

    /// `cos η₀|00⟩|α⟩ + sin η₀|11⟩|-α⟩`.
    pub fn hybrid_both(eta0: T, alpha: Cx<T>, tail_tol: T) -> Result<Self> {
        Self::two_branch_hybrid(eta0, alpha, tail_tol, Branch::B11)
    }

    /// `|0⟩ ⊗ (cos η₀|0⟩|α⟩ + sin η₀|1⟩|-α⟩)`.
    pub fn hybrid_single(eta0: T, alpha: Cx<T>, tail_tol: T) -> Result<Self> {
        Self::two_branch_hybrid(eta0, alpha, tail_tol, Branch::B01)
    }

    fn two_branch_hybrid(eta0: T, alpha: Cx<T>, tail_tol: T, partner: Branch) -> Result<Self> {
        let n_max = truncation_dim(alpha, tail_tol)?;
        let plus = coherent(alpha, n_max);
        let minus = coherent(-alpha, n_max);
        let mut coeffs = [Cx::zero(); 4];
        coeffs[0] = Cx::from(eta0.cos());
        coeffs[partner.index()] = Cx::from(eta0.sin());
        let mut states: [FockVector<T>; 4] = std::array::from_fn(|_| plus.clone());
        states[partner.index()] = minus;
        Self::new(coeffs, states)
    }

    #[inline]
    pub fn coeffs(&self) -> &[Cx<T>; 4] {
        &self.coeffs
    }

    #[inline]
    pub fn branch_state(&self, b: Branch) -> &FockVector<T> {
        &self.branch_states[b.index()]
    }

    #[inline]
    pub fn fock_dim(&self) -> usize {
        self.branch_states[0].amps.len()
    }

    /// `Σ_i |c_i|² ‖φ_i‖²`.
    pub fn norm_sqr(&self) -> T {
        self.coeffs
            .iter()
            .zip(&self.branch_states)
            .fold(T::zero(), |acc, (c, s)| acc + c.norm_sqr() * s.norm_sqr())
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::Validation(format!(
                "joint state must satisfy Σ|c_i|²‖φ_i‖² = 1, got {n}"
            )));
        }
        Ok(())
    }

    /// Branches carrying a non-zero coefficient.
    pub fn support(&self) -> Vec<Branch> {
        Branch::ALL
            .into_iter()
            .filter(|b| !self.coeffs[b.index()].is_zero())
            .collect()
    }
}

/// Evolves every branch under its own running frequencies; the coefficients
/// are untouched.
pub fn evolve_joint<T: Real>(state0: &JointState<T>, t: T, p: &ModelParams<T>) -> Result<JointState<T>> {
    state0.check_normalized()?;
    let branch_states = std::array::from_fn(|i| {
        evolve_branch(&state0.branch_states[i], Branch::ALL[i], t, p)
    });
    Ok(JointState {
        coeffs: state0.coeffs,
        branch_states,
    })
}
