//! Invariants of representation varieties of punctured-surface groups in
//! PSL(2,R).
//!
//! Two engines live side by side. The numeric engine ([`psl2`]) works on
//! explicit real matrices: conjugacy classification, rotation numbers of
//! lifted isometries, Euler numbers of representations, Milnor-Wood slack.
//! The exact engine ([`components`], [`higgs`], [`uniform`]) works over
//! rationals: admissible Euler numbers per boundary signature, topology of
//! connected components, sigma-fixed parabolic-Higgs strata, wall crossings,
//! compactness and hyperbolization criteria. [`bridge`] translates between
//! the two through the boundary-class dictionary, and [`sample`] produces
//! seeded random representations for empirical cross-checks.

pub mod bridge;
pub mod components;
pub mod higgs;
pub mod psl2;
pub mod rat;
pub mod sample;
pub mod uniform;

pub use rat::Rat;
