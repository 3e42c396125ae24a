//! Finite Γ-modules, Γ-maps and Yakovlev diagrams.

pub mod diagram;
pub mod hom;
pub mod local;
pub mod module;

pub use diagram::{
    diagram_direct_sum, diagram_direct_sum_all, diagram_isomorphic, diagram_isomorphic_with,
    indecomposability_certificate, lemma_diagram, library_labels, subtract_library, subtract_library_seeded,
    validate_diagram, IsoAnswer, Remainder, Subtraction, YakovlevDiagram, DEFAULT_BUDGET,
};
pub use hom::HomSpace;
pub use module::{recognize_standard_sum, FiniteGammaModule, GammaMap};
