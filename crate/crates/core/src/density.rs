//! Reduced two-qubit density matrices: the numerical partial trace over the
//! condensate, the closed-form two-branch blocks, and continuous eigen-branch
//! tracking along a time-ordered path.

use num_traits::Zero;

use crate::dynamics::{evolve_joint, JointState};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, inner, CMat};
use crate::model::{quasicycle_period, Branch, ModelParams};
use crate::scalar::{cis, Cx, Real};

/// Default gap below which two eigen-branches are flagged as ambiguous.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// Reduced state of the qubit pair in the basis `|00⟩, |11⟩, |01⟩, |10⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitDensity<T> {
    mat: CMat<T>,
    timestamp: T,
}

impl<T: Real> QubitDensity<T> {
    /// Wraps a 4×4 matrix after checking Hermiticity, trace and positivity.
    pub fn new(mat: CMat<T>, timestamp: T) -> Result<Self> {
        let rho = Self::new_unchecked(mat, timestamp)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a 4×4 matrix, checking only its shape.
    pub fn new_unchecked(mat: CMat<T>, timestamp: T) -> Result<Self> {
        if mat.rows() != 4 || mat.cols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: mat.rows().max(mat.cols()),
            });
        }
        Ok(Self { mat, timestamp })
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.mat.hermiticity_error();
        if herm > T::tol(1e-12) {
            return Err(Error::Validation(format!(
                "density matrix not Hermitian (max |ρ_ij - ρ_ji*| = {herm:e})"
            )));
        }
        let tr = self.mat.trace();
        if (tr.re - T::one()).abs() > T::tol(1e-10) || tr.im.abs() > T::tol(1e-10) {
            return Err(Error::Validation(format!("density matrix trace {tr} ≠ 1")));
        }
        let min = self.min_eigenvalue();
        if min < -T::tol(1e-10) {
            return Err(Error::Validation(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn matrix(&self) -> &CMat<T> {
        &self.mat
    }

    #[inline]
    pub fn timestamp(&self) -> T {
        self.timestamp
    }

    #[inline]
    pub fn entry(&self, a: Branch, b: Branch) -> Cx<T> {
        self.mat[(a.index(), b.index())]
    }

    /// 2×2 block on two branches.
    pub fn block(&self, a: Branch, b: Branch) -> CMat<T> {
        self.mat.principal(&[a.index(), b.index()])
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigen(&self.mat).values
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()
            .into_iter()
            .fold(T::infinity(), |acc, v| acc.min(v))
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        let n = self.mat.rows();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += self.mat[(i, j)].norm_sqr();
            }
        }
        acc
    }

    /// Basis indices whose population exceeds `tol`.
    pub fn support(&self, tol: T) -> Vec<usize> {
        (0..4).filter(|&i| self.mat[(i, i)].re > tol).collect()
    }
}

/// Reduced qubit state `ρ_ij = c_i c_j* ⟨φ_j|φ_i⟩` of a joint state.
pub fn partial_trace<T: Real>(state: &JointState<T>, timestamp: T) -> QubitDensity<T> {
    let c = state.coeffs();
    let mut mat = CMat::zeros(4, 4);
    for i in Branch::ALL {
        for j in Branch::ALL {
            if j < i {
                continue;
            }
            let (ci, cj) = (c[i.index()], c[j.index()]);
            if ci.is_zero() || cj.is_zero() {
                continue;
            }
            let ov = inner(state.branch_state(j).amps(), state.branch_state(i).amps());
            let v = ci * cj.conj() * ov;
            if i == j {
                mat[(i.index(), i.index())] = Cx::new(v.re, T::zero());
            } else {
                mat[(i.index(), j.index())] = v;
                mat[(j.index(), i.index())] = v.conj();
            }
        }
    }
    QubitDensity { mat, timestamp }
}

/// The three two-branch initial states with closed-form reduced dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// `(cos η₀|00⟩ + sin η₀|11⟩) ⊗ |α⟩`
    MicroMicro,
    /// `cos η₀|00⟩|α⟩ + sin η₀|11⟩|-α⟩`
    MacroBoth,
    /// `|0⟩(cos η₀|0⟩|α⟩ + sin η₀|1⟩|-α⟩)`
    MacroSingle,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::MicroMicro, Scenario::MacroBoth, Scenario::MacroSingle];

    /// The two occupied branches, in block order.
    pub fn branches(self) -> (Branch, Branch) {
        match self {
            Scenario::MicroMicro | Scenario::MacroBoth => (Branch::B00, Branch::B11),
            Scenario::MacroSingle => (Branch::B00, Branch::B01),
        }
    }

    pub fn initial_state<T: Real>(self, eta0: T, alpha: Cx<T>, tail_tol: T) -> Result<JointState<T>> {
        match self {
            Scenario::MicroMicro => JointState::bell(eta0, alpha, tail_tol),
            Scenario::MacroBoth => JointState::hybrid_both(eta0, alpha, tail_tol),
            Scenario::MacroSingle => JointState::hybrid_single(eta0, alpha, tail_tol),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::MicroMicro => "micro_micro",
            Scenario::MacroBoth => "macro_both",
            Scenario::MacroSingle => "macro_single",
        }
    }
}

/// Which closed form of the off-diagonal phase and decay to use.
///
/// The two only differ for [`Scenario::MacroSingle`]: the printed form has a
/// `(ω - 4J)` detuning and `2λt` arguments, while the branch-energy
/// difference `θ_01(n) - θ_00(n) = ω - 2J + λn` gives `(ω - 2J)` and `λt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    Verbatim,
    Corrected,
}

/// Phase `Λ(t)` and decay `Γ(t)` of the off-diagonal block element
/// `½ sin 2η₀ e^{iΛ - Γ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecayPhase {
    pub scenario: Scenario,
    pub form: ClosedForm,
}

impl DecayPhase {
    pub fn new(scenario: Scenario, form: ClosedForm) -> Self {
        Self { scenario, form }
    }

    /// Closed form that agrees with the partial-trace reference.
    pub fn corrected(scenario: Scenario) -> Self {
        Self::new(scenario, ClosedForm::Corrected)
    }

    pub fn verbatim(scenario: Scenario) -> Self {
        Self::new(scenario, ClosedForm::Verbatim)
    }

    pub fn lambda<T: Real>(&self, t: T, p: &ModelParams<T>) -> T {
        let a2 = p.alpha_sq();
        let two = T::lit(2.0);
        let lt = p.lambda_c * t;
        match (self.scenario, self.form) {
            (Scenario::MicroMicro, _) => two * p.omega * t + a2 * (two * lt).sin(),
            (Scenario::MacroBoth, _) => two * p.omega * t - a2 * (two * lt).sin(),
            (Scenario::MacroSingle, ClosedForm::Verbatim) => {
                (p.omega - T::lit(4.0) * p.j_vdw) * t - a2 * (two * lt).sin()
            }
            (Scenario::MacroSingle, ClosedForm::Corrected) => {
                (p.omega - two * p.j_vdw) * t - a2 * lt.sin()
            }
        }
    }

    /// `dΛ/dt`.
    pub fn lambda_rate<T: Real>(&self, t: T, p: &ModelParams<T>) -> T {
        let a2 = p.alpha_sq();
        let two = T::lit(2.0);
        let l = p.lambda_c;
        match (self.scenario, self.form) {
            (Scenario::MicroMicro, _) => two * p.omega + two * l * a2 * (two * l * t).cos(),
            (Scenario::MacroBoth, _) => two * p.omega - two * l * a2 * (two * l * t).cos(),
            (Scenario::MacroSingle, ClosedForm::Verbatim) => {
                p.omega - T::lit(4.0) * p.j_vdw - two * l * a2 * (two * l * t).cos()
            }
            (Scenario::MacroSingle, ClosedForm::Corrected) => {
                p.omega - two * p.j_vdw - l * a2 * (l * t).cos()
            }
        }
    }

    pub fn gamma<T: Real>(&self, t: T, p: &ModelParams<T>) -> T {
        let two = T::lit(2.0);
        let a2 = p.alpha_sq();
        let lt = p.lambda_c * t;
        match (self.scenario, self.form) {
            (Scenario::MicroMicro, _) => two * a2 * lt.sin().powi(2),
            (Scenario::MacroBoth, _) | (Scenario::MacroSingle, ClosedForm::Verbatim) => {
                two * a2 * lt.cos().powi(2)
            }
            (Scenario::MacroSingle, ClosedForm::Corrected) => {
                two * a2 * (lt * T::lit(0.5)).cos().powi(2)
            }
        }
    }
}

/// `[[cos²η₀, ½ sin2η₀ e^{iΛ-Γ}], [½ sin2η₀ e^{-iΛ-Γ}, sin²η₀]]`.
pub fn analytic_block<T: Real>(decay: DecayPhase, eta0: T, t: T, p: &ModelParams<T>) -> CMat<T> {
    let (c, s) = (eta0.cos(), eta0.sin());
    let half_sin = c * s;
    let lambda = decay.lambda(t, p);
    let damp = (-decay.gamma(t, p)).exp();
    let off = cis(lambda).scale(half_sin * damp);
    CMat::from_rows(&[
        vec![Cx::from(c * c), off],
        vec![off.conj(), Cx::from(s * s)],
    ])
}

/// [`analytic_block`] embedded in the 4×4 qubit basis.
pub fn analytic_density<T: Real>(
    decay: DecayPhase,
    eta0: T,
    t: T,
    p: &ModelParams<T>,
) -> QubitDensity<T> {
    let block = analytic_block(decay, eta0, t, p);
    let (a, b) = decay.scenario.branches();
    let idx = [a.index(), b.index()];
    let mut mat = CMat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            mat[(idx[i], idx[j])] = block[(i, j)];
        }
    }
    QubitDensity { mat, timestamp: t }
}

/// Uniform grid `t_k = kτ/n_steps`, `k = 0..=n_steps`, over one quasicycle.
pub fn quasicycle_grid<T: Real>(p: &ModelParams<T>, n_steps: usize) -> Result<Vec<T>> {
    if n_steps == 0 {
        return Err(Error::Domain("time grid needs at least one step".into()));
    }
    let tau = quasicycle_period(p)?;
    let n = T::from_usize(n_steps);
    Ok((0..=n_steps).map(|k| tau * T::from_usize(k) / n).collect())
}

/// Closed-form density path over one quasicycle.
pub fn analytic_path<T: Real>(
    decay: DecayPhase,
    eta0: T,
    p: &ModelParams<T>,
    n_steps: usize,
) -> Result<Vec<QubitDensity<T>>> {
    Ok(quasicycle_grid(p, n_steps)?
        .into_iter()
        .map(|t| analytic_density(decay, eta0, t, p))
        .collect())
}

/// Partial-trace density path over one quasicycle.
pub fn oracle_path<T: Real>(
    state0: &JointState<T>,
    p: &ModelParams<T>,
    n_steps: usize,
) -> Result<Vec<QubitDensity<T>>> {
    quasicycle_grid(p, n_steps)?
        .into_iter()
        .map(|t| Ok(partial_trace(&evolve_joint(state0, t, p)?, t)))
        .collect()
}

/// Interval where two eigen-branches come closer than the degeneracy tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneracyFlag<T> {
    /// Grid index at which the gap was observed.
    pub step: usize,
    pub gap: T,
}

/// Time-ordered eigen-branches of a density path, continued by overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPath<T> {
    times: Vec<T>,
    /// Basis indices spanned by the branches.
    support: Vec<usize>,
    /// `values[k][i]`: eigenvalue of branch `i` at `times[k]`.
    values: Vec<Vec<T>>,
    /// `vectors[k][i]`: eigenvector of branch `i`, components over `support`.
    vectors: Vec<Vec<Vec<Cx<T>>>>,
    /// `continuity[k][i]`: index in magnitude order that became branch `i` at step `k`.
    continuity: Vec<Vec<usize>>,
    flags: Vec<DegeneracyFlag<T>>,
}

impl<T: Real> EigenPath<T> {
    #[inline]
    pub fn len(&self) -> usize {
        self.times.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    #[inline]
    pub fn n_branches(&self) -> usize {
        self.support.len()
    }

    #[inline]
    pub fn times(&self) -> &[T] {
        &self.times
    }

    #[inline]
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    #[inline]
    pub fn eigenvalue(&self, step: usize, branch: usize) -> T {
        self.values[step][branch]
    }

    #[inline]
    pub fn eigenvector(&self, step: usize, branch: usize) -> &[Cx<T>] {
        &self.vectors[step][branch]
    }

    #[inline]
    pub fn continuity_map(&self) -> &[Vec<usize>] {
        &self.continuity
    }

    #[inline]
    pub fn flags(&self) -> &[DegeneracyFlag<T>] {
        &self.flags
    }

    /// `ε₁ - ε₂` at `step` for a two-branch path.
    pub fn gap(&self, step: usize) -> T {
        match self.n_branches() {
            0 | 1 => T::one(),
            _ => self.values[step][0] - self.values[step][1],
        }
    }

    /// Every `stride`-th grid point, always keeping both endpoints' spacing uniform.
    ///
    /// Returns `None` unless `stride` divides the number of steps.
    pub fn subsample(&self, stride: usize) -> Option<Self> {
        let steps = self.len().checked_sub(1)?;
        if stride == 0 || steps % stride != 0 || steps / stride == 0 {
            return None;
        }
        let pick = |k: usize| k * stride;
        let m = steps / stride + 1;
        Some(Self {
            times: (0..m).map(|k| self.times[pick(k)]).collect(),
            support: self.support.clone(),
            values: (0..m).map(|k| self.values[pick(k)].clone()).collect(),
            vectors: (0..m).map(|k| self.vectors[pick(k)].clone()).collect(),
            continuity: (0..m).map(|k| self.continuity[pick(k)].clone()).collect(),
            flags: self
                .flags
                .iter()
                .filter(|f| f.step % stride == 0)
                .map(|f| DegeneracyFlag {
                    step: f.step / stride,
                    gap: f.gap,
                })
                .collect(),
        })
    }

    /// Multiplies the eigenvector of branch `i` at step `k` by `exp(i·phase(k, i))`.
    pub fn rephased(&self, mut phase: impl FnMut(usize, usize) -> T) -> Self {
        let mut out = self.clone();
        for (k, vecs) in out.vectors.iter_mut().enumerate() {
            for (i, v) in vecs.iter_mut().enumerate() {
                let g = cis(phase(k, i));
                v.iter_mut().for_each(|z| *z *= g);
            }
        }
        out
    }
}

/// Puts the first component of appreciable size on the non-negative real axis.
fn fix_gauge<T: Real>(v: &mut [Cx<T>]) {
    let pivot = v
        .iter()
        .position(|z| z.norm() > T::tol(1e-9))
        .unwrap_or(0);
    let r = v[pivot].norm();
    if r > T::zero() {
        let g = v[pivot].conj() / r;
        v.iter_mut().for_each(|z| *z *= g);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Diagonalises every density on its occupied support and continues the
/// branches in time by maximal eigenvector overlap. At `t₀` branches are
/// ordered by decreasing eigenvalue.
pub fn eigen_path<T: Real>(rho_path: &[QubitDensity<T>], degeneracy_tol: T) -> Result<EigenPath<T>> {
    if rho_path.len() < 2 {
        return Err(Error::Domain(format!(
            "eigen path needs at least 2 time points, got {}",
            rho_path.len()
        )));
    }
    let pop_tol = T::tol(1e-14);
    let mut support: Vec<usize> = Vec::new();
    for rho in rho_path {
        rho.validate()?;
        for i in rho.support(pop_tol) {
            if !support.contains(&i) {
                support.push(i);
            }
        }
    }
    support.sort_unstable();
    if support.is_empty() {
        return Err(Error::Validation("density path has empty support".into()));
    }
    let m = support.len();
    let perms = permutations(m);

    let mut times = Vec::with_capacity(rho_path.len());
    let mut values: Vec<Vec<T>> = Vec::with_capacity(rho_path.len());
    let mut vectors: Vec<Vec<Vec<Cx<T>>>> = Vec::with_capacity(rho_path.len());
    let mut continuity = Vec::with_capacity(rho_path.len());
    let mut flags = Vec::new();

    for (k, rho) in rho_path.iter().enumerate() {
        let eig = hermitian_eigen(&rho.matrix().principal(&support));
        let mut vecs: Vec<Vec<Cx<T>>> = (0..m).map(|i| eig.vector(i)).collect();
        vecs.iter_mut().for_each(|v| fix_gauge(v));

        // pairs inside the numerical null space carry no weight and are not reported
        for w in eig.values.windows(2) {
            let gap = w[0] - w[1];
            if gap < degeneracy_tol && w[0] > pop_tol {
                flags.push(DegeneracyFlag { step: k, gap });
                break;
            }
        }

        let perm: Vec<usize> = if k == 0 {
            (0..m).collect()
        } else {
            let prev = &vectors[k - 1];
            let overlap: Vec<Vec<T>> = (0..m)
                .map(|i| (0..m).map(|j| inner(&prev[i], &vecs[j]).norm()).collect())
                .collect();
            perms
                .iter()
                .max_by(|a, b| {
                    let sa: T = a.iter().enumerate().fold(T::zero(), |s, (i, &j)| s + overlap[i][j]);
                    let sb: T = b.iter().enumerate().fold(T::zero(), |s, (i, &j)| s + overlap[i][j]);
                    sa.partial_cmp(&sb).unwrap_or(std::cmp::Ordering::Equal)
                })
                .cloned()
                .unwrap_or_else(|| (0..m).collect())
        };
        times.push(rho.timestamp());
        values.push(perm.iter().map(|&j| eig.values[j].max(T::zero())).collect());
        vectors.push(perm.iter().map(|&j| vecs[j].clone()).collect());
        continuity.push(perm);
    }

    Ok(EigenPath {
        times,
        support,
        values,
        vectors,
        continuity,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_joint, JointState};
    use num_complex::Complex64 as C;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn params(lambda: f64, alpha: f64) -> ModelParams<f64> {
        ModelParams::new(1.0, 0.13, 0.9, 0.02, lambda, C::new(alpha, 0.0)).unwrap()
    }

    #[test]
    fn product_state_traces_to_pure_00() {
        let z = C::new(0.0, 0.0);
        let s = JointState::product([C::new(1.0, 0.0), z, z, z], C::new(1.0, 0.0), 1e-12).unwrap();
        let p = params(0.1, 1.0);
        let rho = partial_trace(&evolve_joint(&s, 2.5, &p).unwrap(), 2.5);
        assert!((rho.entry(Branch::B00, Branch::B00).re - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_at_zero_matches_block() {
        let eta = 0.37;
        let s = JointState::bell(eta, C::new(1.0, 0.0), 1e-12).unwrap();
        let rho = partial_trace(&s, 0.0);
        let b = rho.block(Branch::B00, Branch::B11);
        assert!((b[(0, 0)].re - eta.cos().powi(2)).abs() < 1e-12);
        assert!((b[(1, 1)].re - eta.sin().powi(2)).abs() < 1e-12);
        assert!((b[(0, 1)] - C::new(0.5 * (2.0 * eta).sin(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn bell_coherence_decays_as_sin_squared() {
        let p = params(0.1, 1.0);
        let eta = FRAC_PI_4;
        let s = JointState::bell(eta, p.alpha, 1e-12).unwrap();
        let rho = partial_trace(&evolve_joint(&s, 1.0, &p).unwrap(), 1.0);
        let expected = 0.5 * (-2.0 * 0.1f64.sin().powi(2)).exp();
        assert!((rho.entry(Branch::B00, Branch::B11).norm() - expected).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_track_partial_trace() {
        let p = params(0.17, 1.3);
        let eta = 0.6;
        for scenario in Scenario::ALL {
            let s = scenario.initial_state(eta, p.alpha, 1e-12).unwrap();
            let decay = DecayPhase::corrected(scenario);
            for k in 0..20 {
                let t = 0.37 * k as f64;
                let oracle = partial_trace(&evolve_joint(&s, t, &p).unwrap(), t);
                let closed = analytic_density(decay, eta, t, &p);
                let d = oracle.matrix().max_abs_diff(closed.matrix());
                assert!(d < 1e-10, "{scenario:?} t={t} diff={d:e}");
            }
        }
    }

    #[test]
    fn verbatim_single_branch_form_differs_from_reference() {
        let p = params(0.17, 1.3);
        let s = Scenario::MacroSingle.initial_state(FRAC_PI_4, p.alpha, 1e-12).unwrap();
        let t = 1.1;
        let oracle = partial_trace(&evolve_joint(&s, t, &p).unwrap(), t);
        let verbatim = analytic_density(DecayPhase::verbatim(Scenario::MacroSingle), FRAC_PI_4, t, &p);
        assert!(oracle.matrix().max_abs_diff(verbatim.matrix()) > 1e-3);
    }

    #[test]
    fn decay_phase_initial_values() {
        let p = params(0.2, 1.0);
        for scenario in Scenario::ALL {
            for form in [ClosedForm::Verbatim, ClosedForm::Corrected] {
                let d = DecayPhase::new(scenario, form);
                assert_eq!(d.lambda(0.0, &p), 0.0);
                for k in 0..50 {
                    assert!(d.gamma(0.3 * k as f64, &p) >= 0.0);
                }
            }
        }
        let both = DecayPhase::corrected(Scenario::MacroBoth);
        assert!((both.gamma(0.0, &p) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_rate_is_derivative() {
        let p = params(0.23, 1.4);
        let h = 1e-5;
        for scenario in Scenario::ALL {
            for form in [ClosedForm::Verbatim, ClosedForm::Corrected] {
                let d = DecayPhase::new(scenario, form);
                for &t in &[0.0, 0.7, 3.1] {
                    let fd = (d.lambda(t + h, &p) - d.lambda(t - h, &p)) / (2.0 * h);
                    assert!((fd - d.lambda_rate(t, &p)).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn macro_both_block_at_zero() {
        let p = params(0.2, 1.0);
        let b = analytic_block(DecayPhase::corrected(Scenario::MacroBoth), FRAC_PI_4, 0.0, &p);
        assert!((b[(0, 1)].re - 0.5 * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn uncoupled_micro_block_keeps_coherence() {
        let p = params(0.0, 1.5);
        let eta = 0.3;
        for k in 0..10 {
            let b = analytic_block(DecayPhase::corrected(Scenario::MicroMicro), eta, k as f64, &p);
            assert!((b[(0, 1)].norm() - 0.5 * (2.0 * eta).sin().abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn validation_catches_bad_matrices() {
        let mut m = CMat::<f64>::zeros(4, 4);
        m[(0, 0)] = C::new(0.5, 0.0);
        assert!(QubitDensity::new(m.clone(), 0.0).is_err());
        m[(1, 1)] = C::new(0.5, 0.0);
        assert!(QubitDensity::new(m.clone(), 0.0).is_ok());
        m[(0, 1)] = C::new(0.1, 0.0);
        assert!(QubitDensity::new(m.clone(), 0.0).is_err());
        m[(1, 0)] = C::new(0.1, 0.0);
        assert!(QubitDensity::new(m.clone(), 0.0).is_ok());
        m[(0, 1)] = C::new(0.9, 0.0);
        m[(1, 0)] = C::new(0.9, 0.0);
        assert!(QubitDensity::new(m, 0.0).is_err());
        assert!(QubitDensity::new(CMat::<f64>::zeros(2, 2), 0.0).is_err());
    }

    #[test]
    fn eigen_path_needs_two_points() {
        let p = params(0.1, 1.0);
        let rho = analytic_density(DecayPhase::corrected(Scenario::MicroMicro), 0.4, 0.0, &p);
        assert!(eigen_path(&[rho], 1e-9).is_err());
    }

    #[test]
    fn bell_eigenvalues_start_pure() {
        let p = params(0.05, 2.0);
        let path = analytic_path(DecayPhase::corrected(Scenario::MicroMicro), PI / 6.0, &p, 64).unwrap();
        let ep = eigen_path(&path, 1e-9).unwrap();
        assert!((ep.eigenvalue(0, 0) - 1.0).abs() < 1e-14);
        assert!(ep.eigenvalue(0, 1).abs() < 1e-14);
        for k in 0..ep.len() {
            assert!((ep.eigenvalue(k, 0) + ep.eigenvalue(k, 1) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn equal_superposition_gap_is_coherence() {
        let p = params(0.1, 1.0);
        let decay = DecayPhase::corrected(Scenario::MicroMicro);
        let path = analytic_path(decay, FRAC_PI_4, &p, 64).unwrap();
        let ep = eigen_path(&path, 1e-9).unwrap();
        for (k, t) in ep.times().iter().enumerate() {
            assert!((ep.gap(k) - (-decay.gamma(*t, &p)).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn macro_both_special_point_gaps() {
        let alpha = 1.0;
        let mut p = params(0.0, alpha);
        p.lambda_c = p.omega / 8.0; // λτ = π/4
        let path = analytic_path(DecayPhase::corrected(Scenario::MacroBoth), FRAC_PI_4, &p, 128).unwrap();
        let ep = eigen_path(&path, 1e-9).unwrap();
        assert!((ep.gap(0) - (-2.0 * alpha * alpha).exp()).abs() < 1e-12);
        assert!((ep.gap(ep.len() - 1) - (-alpha * alpha).exp()).abs() < 1e-12);
    }

    #[test]
    fn mixing_angle_reproduces_eigenvectors() {
        let p = params(0.21, 1.2);
        let eta = 0.5;
        let decay = DecayPhase::corrected(Scenario::MicroMicro);
        let path = analytic_path(decay, eta, &p, 40).unwrap();
        let ep = eigen_path(&path, 1e-9).unwrap();
        for (k, &t) in ep.times().iter().enumerate() {
            let g = decay.gamma(t, &p);
            let e = (1.0 + (2.0 * eta).sin().powi(2) * ((-2.0 * g).exp() - 1.0)).sqrt();
            let sin_t = ((e - (2.0 * eta).cos()) / (2.0 * e)).sqrt();
            let cos_t = ((e + (2.0 * eta).cos()) / (2.0 * e)).sqrt();
            assert!((sin_t * sin_t + cos_t * cos_t - 1.0).abs() < 1e-14);
            let l = decay.lambda(t, &p);
            let e1 = [C::new(cos_t, 0.0), C::from_polar(sin_t, -l)];
            let e2 = [C::new(sin_t, 0.0), C::from_polar(-cos_t, -l)];
            assert!(inner(&e1, ep.eigenvector(k, 0)).norm() > 1.0 - 1e-9);
            assert!(inner(&e2, ep.eigenvector(k, 1)).norm() > 1.0 - 1e-9);
            assert!((ep.eigenvalue(k, 0) - 0.5 * (1.0 + e)).abs() < 1e-12);
        }
    }

    #[test]
    fn continuity_follows_crossings() {
        // diag(cos² s, sin² s) crosses at s = π/4; magnitude order would swap there
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * FRAC_PI_2 / 20.0).collect();
        let rhos: Vec<_> = times
            .iter()
            .map(|&s| {
                let mut m = CMat::zeros(4, 4);
                m[(0, 0)] = C::new(s.cos().powi(2), 0.0);
                m[(1, 1)] = C::new(s.sin().powi(2), 0.0);
                QubitDensity::new(m, s).unwrap()
            })
            .collect();
        let ep = eigen_path(&rhos, 1e-9).unwrap();
        // branch 0 starts on |00⟩ and must stay there
        for k in 0..ep.len() {
            assert!(ep.eigenvector(k, 0)[0].norm() > 0.999);
        }
        assert!(ep.eigenvalue(20, 0) < 1e-12);
        assert!(!ep.flags().is_empty());
    }
}
