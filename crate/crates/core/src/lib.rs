//! Two Rydberg impurity qubits dispersively coupled to a condensate mode:
//! exact dynamics on a truncated Fock space, reduced qubit densities, the
//! kinematic mixed-state geometric phase over one quasicycle and the
//! concurrence measures it can witness.
//!
//! Every kernel is generic over [`Real`] (`f32` or `f64`); the `*64` and
//! `*32` aliases below fix the precision.

pub mod density;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod geomphase;
pub mod linalg;
pub mod model;
pub mod scalar;

pub use density::{
    analytic_block, analytic_density, analytic_path, eigen_path, oracle_path, partial_trace, quasicycle_grid,
    ClosedForm, DecayPhase, DegeneracyFlag, EigenPath, QubitDensity, Scenario,
};
pub use dynamics::{branch_overlap, coherent, evolve_branch, evolve_joint, truncation_dim, FockVector, JointState};
pub use entanglement::{
    concurrence_wootters, concurrence_x_state, hybrid_concurrence, macro_phase_from_concurrence, purity_oracle,
    witness_micro_macro, witness_micro_micro, ConcurrenceMethod, ConcurrenceValue, Cut, HybridConcurrence, Witness,
};
pub use error::{Error, Result};
pub use geomphase::{
    factorization_functions, kinematic_phase, kinematic_phase_refined, phase_macro_closed, phase_micro_micro_closed,
    phase_two_branch_closed, scenario_phase, uncoupled_bell_phase, weak_coupling_phase, Factorization, MacroPhase,
    PhaseResult, PhaseWarning, TwoBranchPhase,
};
pub use linalg::CMat;
pub use model::{branch_frequency, energy, quasicycle_period, Branch, ModelParams, SpinLabel};
pub use scalar::{wrap_angle, Cx, Real};

pub type C64 = Cx<f64>;
pub type C32 = Cx<f32>;

pub type ModelParams64 = ModelParams<f64>;
pub type ModelParams32 = ModelParams<f32>;
pub type FockVector64 = FockVector<f64>;
pub type FockVector32 = FockVector<f32>;
pub type JointState64 = JointState<f64>;
pub type JointState32 = JointState<f32>;
pub type QubitDensity64 = QubitDensity<f64>;
pub type QubitDensity32 = QubitDensity<f32>;
pub type EigenPath64 = EigenPath<f64>;
pub type EigenPath32 = EigenPath<f32>;
pub type PhaseResult64 = PhaseResult<f64>;
pub type PhaseResult32 = PhaseResult<f32>;
pub type CMat64 = CMat<f64>;
pub type CMat32 = CMat<f32>;
