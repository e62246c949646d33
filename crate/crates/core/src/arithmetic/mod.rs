//! Multiplicative functions, real zeta values and Euler products.

mod local;
mod multiplicative;
mod zeta;

pub use local::{
    g12_product, local_dp, local_g12, predicted_constant, rational_to_f64, tau_p, tau_product,
    LocalFactor, PredictedConstant, TauProduct, ALPHA, MIN_PRIME_CUTOFF,
};
pub use multiplicative::{
    delta, delta_partial_sum, phi_star, theta_bruteforce, theta_closed, EtaTuple,
    FactoredInteger, Rational,
};
pub use zeta::{e1, e2, zeta_real};
