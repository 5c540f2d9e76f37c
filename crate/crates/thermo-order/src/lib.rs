//! File formats, run reports and subcommands for the `thermo-order` tool.
//! The algorithms live in `thermo-order-core`.

pub mod commands;
pub mod example;
pub mod formats;
pub mod report;

/// Arithmetic used for reading states and for curve decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum NumericChoice {
    Float,
    Rational,
}

impl NumericChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            NumericChoice::Float => "float",
            NumericChoice::Rational => "rational",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub numeric: NumericChoice,
    /// Curve-comparison tolerance in float mode.
    pub tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            numeric: NumericChoice::Float,
            tol: 1e-10,
        }
    }
}
