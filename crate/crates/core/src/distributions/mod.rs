//! Principal-value distributions on the Heisenberg group, their kernels in the
//! Schrödinger-type representations, and the blow-up lower bound.

mod blowup;
mod fubini;
mod kernels;
mod lemma_c;
mod pairing;

pub use blowup::{blowup_curve, blowup_reference, geometric_radii, plateau_value, write_blowup_csv, BlowupPoint, Plateau};
pub use fubini::{fubini_defect, FubiniDefect, FubiniOptions};
pub use kernels::{
    commutator_kernel_residual, commutator_kernel_sl3, commutator_kernel_sp2, kernel_operator_norm, kernel_sl3, kernel_sp2,
    majorant_sl3, majorant_sp2, sample_kernel_points, KernelCase, KernelSpec, NystromGrid,
};
pub use lemma_c::{
    fit_normalization, lemma_c_khat, lemma_c_khat_numeric, InnerVariable, LemmaCGrid, NormalizationFit, LEMMA_C_NORMALIZATION,
    NORMALIZATION_CANDIDATES,
};
pub use pairing::{
    d_pairing, lemma_e_pair, representation_pairing, DPairingOptions, LemmaEPair, OuterOrder, PairingSetup,
    RepresentationPairing, INVARIANCE_TOLERANCE,
};
