//! Model parameters and the exact spectrum of the diagonal Hamiltonian.
//!
//! The total Hamiltonian is diagonal in `|s1 s2⟩ ⊗ |n⟩`:
//!
//! ```text
//! E(s1, s2, n) = ω(s1+s2)/2 + ω_b n + J s1 s2 + λ(s1+s2) n/2 + χ n(n-1)
//! ```
//!
//! with `σ_z|0⟩ = -|0⟩` and `σ_z|1⟩ = +|1⟩`, and `ħ = 1`.

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Physical constants of the impurity-doped condensate, all in angular
/// frequency units except the dimensionless coherent amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Qubit transition frequency ω.
    pub omega: T,
    /// Van der Waals coupling J between the two impurities.
    pub j_vdw: T,
    /// Condensate mode frequency ω_b.
    pub omega_b: T,
    /// Kerr nonlinearity χ.
    pub chi: T,
    /// Qubit-condensate coupling λ.
    pub lambda_c: T,
    /// Coherent amplitude α of the condensate.
    pub alpha: Cx<T>,
}

impl<T: Real> ModelParams<T> {
    pub fn new(omega: T, j_vdw: T, omega_b: T, chi: T, lambda_c: T, alpha: Cx<T>) -> Result<Self> {
        let p = Self {
            omega,
            j_vdw,
            omega_b,
            chi,
            lambda_c,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with only ω, λ and α set; the remaining couplings are zero.
    pub fn minimal(omega: T, lambda_c: T, alpha: Cx<T>) -> Result<Self> {
        Self::new(omega, T::zero(), T::zero(), T::zero(), lambda_c, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega", self.omega),
            ("j_vdw", self.j_vdw),
            ("omega_b", self.omega_b),
            ("chi", self.chi),
            ("lambda_c", self.lambda_c),
            ("alpha.re", self.alpha.re),
            ("alpha.im", self.alpha.im),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::Validation(format!("{name} must be finite, got {v}")));
            }
        }
        if self.omega <= T::zero() {
            return Err(Error::Validation(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        Ok(())
    }

    /// Mean condensate occupation `|α|²`.
    #[inline]
    pub fn alpha_sq(&self) -> T {
        self.alpha.norm_sqr()
    }
}

/// Single-qubit computational label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinLabel {
    Ground,
    Excited,
}

impl SpinLabel {
    /// σ_z eigenvalue: `-1` for `|0⟩`, `+1` for `|1⟩`.
    #[inline]
    pub fn sz<T: Real>(self) -> T {
        match self {
            SpinLabel::Ground => -T::one(),
            SpinLabel::Excited => T::one(),
        }
    }

    pub fn from_bit(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(SpinLabel::Ground),
            1 => Ok(SpinLabel::Excited),
            _ => Err(Error::Domain(format!("qubit label must be 0 or 1, got {bit}"))),
        }
    }
}

/// Two-qubit branch, in the order `|00⟩, |11⟩, |01⟩, |10⟩` used for the
/// coefficients `c0..c3` and for every 4×4 matrix in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    B00 = 0,
    B11 = 1,
    B01 = 2,
    B10 = 3,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::B00, Branch::B11, Branch::B01, Branch::B10];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| Error::Domain(format!("branch index must be in 0..=3, got {i}")))
    }

    /// `(first qubit, second qubit)` labels.
    pub fn spins(self) -> (SpinLabel, SpinLabel) {
        use SpinLabel::{Excited, Ground};
        match self {
            Branch::B00 => (Ground, Ground),
            Branch::B11 => (Excited, Excited),
            Branch::B01 => (Ground, Excited),
            Branch::B10 => (Excited, Ground),
        }
    }

    pub fn from_spins(s1: SpinLabel, s2: SpinLabel) -> Self {
        use SpinLabel::{Excited, Ground};
        match (s1, s2) {
            (Ground, Ground) => Branch::B00,
            (Excited, Excited) => Branch::B11,
            (Ground, Excited) => Branch::B01,
            (Excited, Ground) => Branch::B10,
        }
    }
}

/// Eigenvalue of the total Hamiltonian on `|s1 s2⟩ ⊗ |n⟩`.
pub fn energy<T: Real>(s1: SpinLabel, s2: SpinLabel, n: i64, p: &ModelParams<T>) -> Result<T> {
    if n < 0 {
        return Err(Error::Domain(format!("Fock index must be non-negative, got {n}")));
    }
    let (a, b) = (s1.sz::<T>(), s2.sz::<T>());
    let nf = T::from(n).ok_or_else(|| Error::Domain(format!("Fock index {n} not representable")))?;
    let half = T::lit(0.5);
    // H_R + H_B + H_I evaluated term by term
    let h_r = half * p.omega * (a + b) + p.j_vdw * a * b;
    let h_b = p.omega_b * nf + p.chi * nf * (nf - T::one());
    let h_i = half * p.lambda_c * (a + b) * nf;
    Ok(h_r + h_b + h_i)
}

/// Running frequency θ_b(n) of branch `b`.
#[inline]
pub fn branch_frequency<T: Real>(branch: Branch, n: usize, p: &ModelParams<T>) -> T {
    let nf = T::from_usize(n);
    let kerr = p.chi * nf * (nf - T::one());
    match branch {
        Branch::B00 => -p.omega + p.j_vdw + (p.omega_b - p.lambda_c) * nf + kerr,
        Branch::B11 => p.omega + p.j_vdw + (p.omega_b + p.lambda_c) * nf + kerr,
        Branch::B01 | Branch::B10 => -p.j_vdw + p.omega_b * nf + kerr,
    }
}

/// [`branch_frequency`] addressed by raw index.
pub fn branch_frequency_at<T: Real>(branch: usize, n: usize, p: &ModelParams<T>) -> Result<T> {
    Ok(branch_frequency(Branch::from_index(branch)?, n, p))
}

/// Quasicycle duration τ = 2π/ω.
pub fn quasicycle_period<T: Real>(p: &ModelParams<T>) -> Result<T> {
    if p.omega <= T::zero() || !p.omega.is_finite() {
        return Err(Error::Domain(format!(
            "quasicycle period needs omega > 0, got {}",
            p.omega
        )));
    }
    Ok(T::TAU() / p.omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn params() -> ModelParams<f64> {
        ModelParams::new(1.0, 0.1, 2.0, 0.01, 0.05, Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn energy_of_11_vacuum() {
        let p = params();
        let e = energy(SpinLabel::Excited, SpinLabel::Excited, 0, &p).unwrap();
        assert!((e - (p.omega + p.j_vdw)).abs() < 1e-15);
    }

    #[test]
    fn energy_of_00_two_quanta() {
        let e = energy(SpinLabel::Ground, SpinLabel::Ground, 2, &params()).unwrap();
        assert!((e - 3.02).abs() < 1e-13, "{e}");
    }

    #[test]
    fn energy_rejects_negative_fock_index() {
        assert!(matches!(
            energy(SpinLabel::Ground, SpinLabel::Ground, -1, &params()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn branch_01_matches_energy() {
        let p = params();
        for n in 0..10 {
            let e = energy(SpinLabel::Ground, SpinLabel::Excited, n, &p).unwrap();
            let nf = n as f64;
            let expected = -p.j_vdw + p.omega_b * nf + p.chi * nf * (nf - 1.0);
            assert!((e - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn branch_differences() {
        let p = params();
        for n in 0..50 {
            assert_eq!(
                branch_frequency(Branch::B01, n, &p),
                branch_frequency(Branch::B10, n, &p)
            );
            let d = branch_frequency(Branch::B11, n, &p) - branch_frequency(Branch::B00, n, &p);
            assert!((d - (2.0 * p.omega + 2.0 * p.lambda_c * n as f64)).abs() < 1e-11);
        }
        assert!((branch_frequency(Branch::B00, 0, &p) - (-p.omega + p.j_vdw)).abs() < 1e-15);
    }

    #[test]
    fn branch_index_out_of_range() {
        assert!(branch_frequency_at(4, 0, &params()).is_err());
    }

    #[test]
    fn uncoupled_branch_gap_is_constant() {
        let mut p = params();
        p.lambda_c = 0.0;
        for n in 0..50 {
            let d = branch_frequency(Branch::B11, n, &p) - branch_frequency(Branch::B00, n, &p);
            assert!((d - 2.0 * p.omega).abs() < 1e-12);
        }
    }

    #[test]
    fn period_values() {
        let mut p = params();
        p.omega = 2.0 * PI;
        assert!((quasicycle_period(&p).unwrap() - 1.0).abs() < 1e-15);
        p.omega = 1.0;
        assert!((quasicycle_period(&p).unwrap() - 2.0 * PI).abs() < 1e-15);
        p.omega = 4.0;
        assert!((quasicycle_period(&p).unwrap() - PI / 2.0).abs() < 1e-15);
        p.omega = 0.0;
        assert!(quasicycle_period(&p).is_err());
    }

    #[test]
    fn validation_rejects_bad_omega() {
        assert!(ModelParams::minimal(0.0, 0.1, Complex64::new(1.0, 0.0)).is_err());
        assert!(ModelParams::minimal(f64::NAN, 0.1, Complex64::new(1.0, 0.0)).is_err());
        assert!(ModelParams::minimal(1.0, 0.1, Complex64::new(f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn spin_label_roundtrip() {
        for b in Branch::ALL {
            let (s1, s2) = b.spins();
            assert_eq!(Branch::from_spins(s1, s2), b);
        }
        assert!(SpinLabel::from_bit(2).is_err());
        assert_eq!(SpinLabel::Ground.sz::<f64>(), -1.0);
    }
}
