use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter {name} = {value} outside allowed range {range}")]
    Parameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("{name} = {value} outside domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid decision problem: {0}")]
    Problem(String),

    #[error("membership for {label} is {value}, not one of 0, 0.25, 0.5, 0.75, 1")]
    Level { label: &'static str, value: f64 },

    #[error("response has zero membership on every label")]
    EmptyResponse,

    #[error("invalid membership function: {0}")]
    Membership(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("staircase state error: {0}")]
    State(&'static str),

    #[error("probe {got} does not match the outstanding probe {expected}")]
    Protocol { expected: f64, got: f64 },

    #[error("row {row}: w(p*) = 1 makes the chain ratio singular")]
    SingularRatio { row: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("degenerate metric: {0}")]
    DegenerateMetric(&'static str),

    #[error("statistic undefined: {0}")]
    Statistic(&'static str),

    #[error("subject model error: {0}")]
    Model(String),
}
