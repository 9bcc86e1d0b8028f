//! Wigner-Ville distribution of the two-sided quaternion offset linear
//! canonical transform (WVD-QOLCT), its convolution and correlation
//! operators, and a quadrature harness that checks the identities the
//! distribution satisfies.
//!
//! Signals are quaternion valued functions on the plane ([`signal::Signal`]).
//! All integrals are midpoint Riemann sums on uniform grids
//! ([`grid::GridSpec2D`]); the extent of each grid is chosen per integration
//! domain by [`plan::GridPlan`].

pub mod convcorr;
pub mod error;
pub mod grid;
pub mod olct;
pub mod plan;
pub mod quaternion;
pub mod signal;
pub mod verify;
pub mod wvd;

pub use convcorr::{
    conv_theorem_rhs, conv_theorem_rhs_qlct, convolve, corr_theorem_rhs, correlate, weight_psi, wvd_of_convolution, wvd_of_correlation,
    Combined, ConvSpecs, CorrSign, Operator, SecondFactor, TheoremSetup, TheoremVariant,
};
pub use error::{Error, Result};
pub use grid::{inner_product, integrate, l2_norm, sample, GridSpec2D, SignalGrid};
pub use olct::{kernel, qft_params, qlct_params, qolct_forward, qolct_inverse, Kernel, OlctParams, ParamPair};
pub use plan::{Envelope, GridPlan, GridSizes};
pub use quaternion::{inv_sqrt_2pib, sqrt_2pib, unit_exp, Axis, Quaternion};
pub use signal::{AnalyticSignal, Point, Signal};
pub use verify::{Settings, TheoremId, VerificationReport};
pub use wvd::{reconstruct, reconstruct_at, wvd_grid, wvd_inner_product, wvd_point, wvd_sampled, QuotientSide, WvdEvaluator, WvdGrid};
