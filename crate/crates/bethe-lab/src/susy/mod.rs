//! Gaussian supersymmetric functions: the super Fourier transform T, the
//! matrix operator 𝕋, the vector expansion used by the transport identities,
//! and the λ = 0 fixed point with its closed-form bilinears.

mod expansion;
mod gaussian;
mod lambda0;
mod transform;

pub use expansion::{
    assemble, dd_coefficient, first_column_dot, gaussian_soul, gaussian_superfunction, psi_square,
    super_taylor_check, trace_pairing, vexp_closed_form, vexp_coefficient_check, vexp_engine, TAYLOR_TOL,
};
pub use gaussian::{
    derivative_factor, leibniz_check, matrix_derivative, matrix_derivative_single, minor_product, submatrix_det, CVec,
    GaussianSF, PairGaussianSF, VectorGaussianSF,
};
pub use lambda0::{
    closed_form_bilinears, lambda0_agreement_check, AGREEMENT_TOL, fixed_point_residual, lambda0_fixed_point, theta_from_xi, xi_lambda0, Bilinears};
pub use transform::{
    bbt_gaussian, bbt_via_derivatives, bosonic_quadrature_m1, gaussian_ft_factor, hat, involution_deviation, t_gaussian,
    t_quadrature_gate, thdt_check, QuadratureGate, QUADRATURE_GATE_TOL, THDT_TOL,
};
