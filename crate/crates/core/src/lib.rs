//! Straight-line embedding of a cycle onto points inside a simple polygon,
//! minimising the number of crossings with a genetic algorithm.
//!
//! The fitness of an embedding is the number of self-crossings of the cycle
//! plus the number of (edge, polygon side) contacts; zero certifies a simple
//! closed polygon that stays clear of the container's boundary.
//!
//! ```
//! use polycycle::ga::{run_ga, GaConfig};
//! use polycycle::instance::{generate_instance, GenSpec};
//!
//! let inst = generate_instance(&GenSpec::new(10, 8, 42)).unwrap();
//! let result = run_ga(&inst, &GaConfig::v2(7).with_generations(200)).unwrap();
//! assert_eq!(result.best.len(), 8);
//! ```

pub mod experiment;
pub mod ga;
pub mod geom;
pub mod instance;
pub mod oracle;
pub mod render;
pub mod seed;
pub mod solution;

pub use ga::{run_ga, Chromosome, FitnessBreakdown, GaConfig, RunResult, Version};
pub use geom::{Point, Polygon};
pub use instance::{generate_instance, GenSpec, Instance};
