//! Numerical laboratory for extrinsic geometric flows and extrinsic
//! geometric solitons on codimension-one foliations.
//!
//! Kernels are generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the common `f64` instantiation.

// `!(x > 0)` is the NaN-rejecting form throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cohomology_solver;
pub mod flow_engine;
pub mod revolution_geometry;
pub mod scalar;
pub mod soliton_lab;
pub mod sym_curvature;

pub use scalar::Scalar;

pub type Spectrum = sym_curvature::PrincipalCurvatureSpectrum<f64>;
pub type Invariants = sym_curvature::SymmetricInvariants<f64>;
pub type Functional = sym_curvature::FlowFunctional<f64>;
pub type Grid = flow_engine::Grid<f64>;
pub type Profile = flow_engine::UmbilicalProfile<f64>;
pub type Control = flow_engine::StepControl<f64>;
pub type TauField = flow_engine::TauField<f64>;
pub type SolitonReport = soliton_lab::SolitonReport<f64>;
pub type BiregularGrid = soliton_lab::BiregularGrid<f64>;
pub type SpectrumClassification = soliton_lab::SpectrumClassification<f64>;
pub type CohomologyProblem = cohomology_solver::TorusCohomologyProblem<f64>;
pub type CohomologySolution = cohomology_solver::CohomologySolution<f64>;
pub type RevolutionProfile = revolution_geometry::RevolutionProfile<f64>;

pub type SpectrumF32 = sym_curvature::PrincipalCurvatureSpectrum<f32>;
pub type FunctionalF32 = sym_curvature::FlowFunctional<f32>;
pub type ProfileF32 = flow_engine::UmbilicalProfile<f32>;
