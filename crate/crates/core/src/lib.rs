//! Light-cone model of conformal geometry, with a focus on cyclic systems
//! and Guichard nets.
//!
//! Points of the conformal n-sphere are modeled as light rays in Minkowski
//! space R^{n+2} with signature (+,…,+,−), timelike slot last. Intersecting
//! the light cone with the affine hyperplane ⟨v, nk⟩ = 1 gives a quadric
//! Q_k^n of constant sectional curvature k = −⟨nk,nk⟩; oriented hyperspheres
//! are unit spacelike vectors; sphere/point incidence, intersection angles
//! and mean curvature are all read off the Lorentz product.
//!
//! On top of that linear-algebra layer the crate builds:
//!
//! - strips (sphere congruence + envelope), moving frames and their
//!   connection forms, Gauss/Ricci/Codazzi residuals, principal curvature
//!   framings, the Ribaucour flatness test ([`strip`]);
//! - circle congruences, the orthogonal-surface equation, normality tests
//!   and orthogonal families with their fixed cross ratio ([`cyclic`]);
//! - triply orthogonal systems on 3D grids: Lamé functions and rotation
//!   coefficients, the constant-curvature and conformal-flatness residual
//!   suites, Dupin's theorem check, the Guichard condition ([`triorth`]);
//! - parallel linear Weingarten families: closed-form principal curvatures,
//!   the quadratics c_K, c_H, c, the elliptic reparametrization, reductions
//!   to sine/sinh-Gordon and pendulum equations, and end-to-end synthesis of
//!   cyclic Guichard nets ([`weingarten`]);
//! - a Bonnet-theorem analyzer classifying special parallel surfaces by the
//!   roots of the three quadratics ([`bonnet`]).
//!
//! All numerics are plain `f64`; grids are uniform per axis; derivative
//! stencils are central second-order unless a routine documents otherwise.

pub mod bonnet;
pub mod cyclic;
pub mod error;
pub mod grid;
pub mod lorentz;
pub mod spaceform;
pub mod sphere;
pub mod strip;
#[cfg(test)]
pub(crate) mod testkit;
pub mod tol;
pub mod triorth;
pub mod weingarten;

pub use error::{Error, Result};
pub use lorentz::{CausalClass, MinkVec, PseudoFrame};
pub use spaceform::SpaceForm;
