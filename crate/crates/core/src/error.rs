use core::fmt;

/// Errors raised by the model, geometry and planner layers.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// An argument fell outside the domain of a function.
    Domain { what: &'static str, value: f64 },
    /// A truncation point carries no probability mass in double precision.
    NegligibleMass { cap: f64 },
    /// The evaluation grid would contain no points.
    EmptyGrid { d_b: f64, grid_step: f64 },
    /// A relay was placed outside sector 1.
    RelayOutsideSector { index: usize, x: f64, y: f64 },
    /// The rate is zero so every energy vanishes.
    DegenerateRate,
    /// A coverage hole was found at the given grid point.
    CoverageHole { x: f64, y: f64 },
    /// No candidate layout satisfied the coverage requirement.
    NoFeasibleLayout,
    /// An invalid configuration value.
    Invalid(&'static str),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            ModelError::NegligibleMass { cap } => {
                write!(f, "truncation at {cap} J leaves negligible probability mass")
            }
            ModelError::EmptyGrid { d_b, grid_step } => {
                write!(f, "grid step {grid_step} m exceeds cell edge {d_b} m")
            }
            ModelError::RelayOutsideSector { index, x, y } => {
                write!(f, "relay {index} at ({x}, {y}) lies outside sector 1")
            }
            ModelError::DegenerateRate => write!(f, "rate is zero; all energies vanish"),
            ModelError::CoverageHole { x, y } => write!(f, "coverage hole at ({x}, {y})"),
            ModelError::NoFeasibleLayout => write!(f, "no candidate layout covers the sector"),
            ModelError::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for ModelError {}
