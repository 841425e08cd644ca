//! Fusion rings: integrable and Bershadsky-Polyakov fusion tables, and Grothendieck fusion of
//! relaxed, semirelaxed and highest-weight modules.

pub mod lie;
pub mod verlinde;

pub use lie::{freudenthal_multiplicity, kac_walton_fusion, tensor_multiplicity};
pub use verlinde::{bp_fusion, kac_walton_table, verlinde_wzw, FusionMethod, FusionTable};
pub mod classes;
pub use classes::{GrothClass, GrothSum, ModuleLabel};
pub mod expand;
pub mod kform;
pub use expand::{groth_expand, Expansion, LazySum};
pub mod rules;
pub use rules::{check_rule, groth_fuse, groth_fuse_rule, relfus, Rule};
pub mod reduce;
pub use reduce::{standard_verlinde_reduce, ExpPoly};
