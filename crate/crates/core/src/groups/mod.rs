//! The Heisenberg group, the four-dimensional Dixmier group, their
//! coordinate diffeomorphisms and the coadjoint-type orbits of the θ-action.

mod convolution;
mod dixmier;
mod element;
mod heisenberg;
mod orbits;

pub use convolution::{heis3_convolution, heis3_convolution_on, MAX_CONVOLUTION_NODES};
pub use dixmier::{dix4_inv, dix4_mul, gamma_prime, gamma_prime_conjugation_residual, Dix4Element};
pub use element::{Group, GroupElement, GroupKind};
pub use heisenberg::{
    gamma, gamma_conjugation_residual, gamma_invariance_defect, gamma_symmetrize, heis3_inv, heis3_mul, GammaSymmetrized,
    Heis3Element,
};
pub use orbits::{classify_orbit, theta_action, theta_dual, OrbitClass};

/// `√(1 + x²/4)`, the scale factor shared by γ and γ′.
pub(crate) fn shear_scale(x: f64) -> f64 {
    (1.0 + 0.25 * x * x).sqrt()
}

/// The rotation `u = (1/s)[[x/2, 1], [-1, x/2]]` used to conjugate by `K₀`.
pub(crate) fn rotation(x: f64) -> [[f64; 2]; 2] {
    let s = shear_scale(x);
    [[0.5 * x / s, 1.0 / s], [-1.0 / s, 0.5 * x / s]]
}

pub(crate) fn matmul<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> [[f64; N]; N] {
    let mut out = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub(crate) fn max_abs_diff<const N: usize>(a: &[[f64; N]; N], b: &[[f64; N]; N]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..N {
        for j in 0..N {
            worst = worst.max((a[i][j] - b[i][j]).abs());
        }
    }
    worst
}
