//! The classical mirror constructions, each reproduced through the duality:
//! Batyrev-Borisov nef partitions, Berglund-Hübsch transposition, and the
//! Givental / Hori-Vafa presentations.

mod bb;
mod bh;
mod givental;

pub use bb::{
    bb_dual, bb_mirror_via_duality, nef_subpartition_check, phi_check, BBDual, BBPipelineReport,
    NefData, NefVerdict,
};
pub use bh::{bh_dual, degree_d_monomials, BHData, BhDualResult};
pub use givental::{
    givental_presentation, hv_presentation, semigroup_generation_check,
    semigroup_generation_check_rows, GiventalPresentation, HvPresentation, SemigroupVerdict,
};
