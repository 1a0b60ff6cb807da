//! Optimal geodesics of the sub-Riemannian problem on the group of planar
//! rototranslations SE(2).

pub mod cut;
pub mod elliptic;
pub mod error;
pub mod exponential;
pub mod jacobian;
pub mod ode;
pub mod pendulum;
pub mod selftest;
pub mod synthesis;

pub use cut::{classify_cut, classify_state, cut_time, reflect_pose, CutClassification, CutKind};
pub use elliptic::{Elliptic, Jacobi, Modulus};
pub use error::{Error, Result};
pub use exponential::{exp, exp_trajectory, rectify, unrectify, Pose, RectifiedPose, Trajectory};
pub use jacobian::conj_time;
pub use pendulum::{Covector, EllipticCoords, Sign, Stratum, StratumTag};
pub use synthesis::{distance, solve, GeodesicSolution, Multiplicity, SynthesisResult};
