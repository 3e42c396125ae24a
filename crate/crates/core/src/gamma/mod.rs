//! The cyclic group Γ of order `p^n`, its integral group ring and
//! Z_p[Γ]-lattices with exact normal-form linear algebra.

pub mod group_ring;
pub mod intmat;
pub mod lattice;
pub mod params;

pub use group_ring::{norm_element, relative_norm, GroupRingElt};
pub use intmat::{hnf_p_saturated, IntMatrix};
pub use lattice::{
    augmentation_quotient, direct_sum, direct_sum_all, fixed_rank, fixed_sublattice, mab_lattice,
    permutation_lattice, random_unimodular_change, GammaLattice,
};
pub use params::GroupParams;
