//! The bosonic electroweak Lagrangian for SU(2;j)×U(1).
//!
//! Fields are built from 2×2 matrices of symbolic expressions with the
//! covariant derivative `D = ∂ + g T_k A^k + g' Y B` and field strength
//! `F = ∂A − ∂A + [A, A]`, which is the combination left invariant by
//! `A → ΩAΩ⁻¹ − ∂Ω Ω⁻¹`.

mod basis;
mod config;
mod fields;
mod gauge;
mod masses;
mod radial;

pub use basis::{
    build_graded_lagrangian, build_graded_symbolic, contraction_rules, coupling_normal_form, verify_grading_against, physical_basis, physical_basis_symbolic, rename_gauge_to_radial,
    transformed_lagrangian, verify_grading, verify_matter_radial, GradedForm,
};
pub use config::{ModelConfig, ModelError, PYTHAGOREAN_TRIPLES};
pub use fields::{
    build_la, build_la_from_trace, build_lphi, build_matter_radial, build_stress_tensors, build_stress_tensors_with,
    covariant_derivative, gauge_potential, matter_radial_display, su2_components, ExprMatrix, StressTensors, NonlinearSign,
};
pub use gauge::{
    check_su2_invariance, check_su2_invariance_with, check_u1_invariance, check_u1_invariance_of, global_phase_variation, su2_rules,
    u1_doublet_rules, u1_physical_rules,
};
pub use masses::{calibrated_config, extract_masses, ExactSpectrum, MassSpectrum};
pub use radial::{radial_split, verify_radial_split, verify_trace_identity, RadialSplit};
