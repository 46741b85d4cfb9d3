//! The difference operator `L` and the objects built from it: Casorati
//! determinants, the truncated symmetry identity, the Green kernel and the
//! residues of `1/D` that produce the norms of the discrete spectrum.

pub mod casorati;
pub mod green;
pub mod operator;
pub mod residue;
pub mod scan;
pub mod symmetry;

pub use casorati::{casorati, casorati_closed_phi_phi, casorati_closed_pm, casorati_pm_two_term, casorati_values, CasoratiPair, CasoratiValue};
pub use green::{green_kernel, kernel_determinant, point_mass, resolvent_apply, resolvent_check, KernelMode, ResolventCheck};
pub use operator::OperatorL;
pub use residue::{k_t, norm_h, residue_closed, residue_inv_d, residue_step_exponent, Residue};
pub use scan::{classify_zero, compare_spectrum, scan_zeros, ScanOptions, ScanZero, SpectrumComparison, ZeroClass};
pub use symmetry::{symmetry_defect, truncated_inner_product, SymmetryDefect};
