//! Conservative tangential Darcy flow on triangulated fissure surfaces.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! 1. [`mesh`]: triangulate the sampled domain and lift it onto the surface.
//! 2. [`darcy`]: solve the drained pressure problem and form the primary field.
//! 3. [`projection`]: project onto the conservative space.
//! 4. [`lifting`]: rotate the planar field into each tangent plane.
//! 5. [`transport`]: Markov-chain generator, exit times and the flow graph.
//! 6. [`observables`]: preferential direction and energy dissipation rates.
//!
//! [`pipeline`] strings the stages together from an [`config::ExperimentConfig`].

pub mod config;
pub mod darcy;
pub mod error;
pub mod fields;
pub mod lifting;
pub mod linalg;
pub mod mesh;
pub mod observables;
pub mod output;
pub mod pipeline;
pub mod presets;
pub mod projection;
pub mod transport;
pub mod verify;

pub use error::{Error, Result};

pub type Vec2 = nalgebra::Vector2<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;
