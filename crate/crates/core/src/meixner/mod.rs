//! The weight, the polynomial families and the q-Meixner functions.

pub mod closed;
pub mod functions;
pub mod grid;
pub mod inner;
pub mod params;
pub mod poly;
pub mod weight;

pub use functions::{
    big_phi, big_phi_all_routes, big_phi_asymptotic, big_phi_cx, c_coeff, k_factor, phi, phi_all_routes, phi_cx, phi_dagger, psi,
    psi_all_routes, psi_cx, BigPhiRoute, Evaluation, PhiRoute, Point, PsiRoute, Side,
};
pub use grid::{Family, GridFunction, Window};
pub use inner::{inner_single, inner_two_anchor, CachedFamily, InnerProduct};
pub use params::{classify_positivity, gamma_of_mu, mu, Genericity, Origin, Params, Positivity, SpectralPoint};
pub use poly::{poly_m, poly_p, poly_qmeixner};
pub use weight::{u_weight_cx, v_weight_cx, weight_asymptotic, weight_c_cx, weight_cx, weight_w};
