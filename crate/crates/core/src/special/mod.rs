//! Special functions: complex gamma, Gauss ₂F₁ and spherical functions.

mod dd;
pub mod gamma;
pub mod hypergeometric;
pub mod spherical;

pub use gamma::{gamma, is_gamma_pole, ln_gamma, pochhammer, rgamma};
pub use hypergeometric::{gauss_2f1, gauss_2f1_split, hyp2f1_connection, hyp2f1_series, Z_SWITCH};
pub use spherical::{
    hardy_profile, hc_c_function, spherical_fn, spherical_fn_at, KTypeIndex, RadialPoint, SpectralParam, RHO,
};
