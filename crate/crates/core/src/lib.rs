//! Particle with position-dependent mass `m(x) = m₀/(1 + γx)²` confined to
//! the well `|x| < a`: eigenstates, information measures and statistical
//! complexities, in closed form and by quadrature.

pub mod complexity;
pub mod deformed_space;
pub mod error;
pub mod info_measures;
pub mod numerics;
pub mod profile;
pub mod special;
pub mod well_model;

pub use complexity::{complexity_closed, complexity_numeric, rydberg_asymptotics, ComplexitySet};
pub use deformed_space::{DeformedWell, WaveFunction};
pub use error::{Error, Result};
pub use info_measures::{closed_measures, f_of_n, numeric_measures, MeasureContext, MeasureSet};
pub use numerics::{Integrator, Interval, QuadratureResult};
pub use profile::{DensityProfile, OscillatoryTail, Space};
pub use well_model::{ClassicalEnsemble, EigenState, KMoments, Moments};
