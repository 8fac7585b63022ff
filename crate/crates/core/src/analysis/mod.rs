//! Stochastic-matrix toolkit and trace verifiers.

mod matrix;
mod verify;

pub use matrix::{
    backward_product, connectivity_matrix, delta, lambda, nonzero_column_power, ConnectivityMatrix,
    RowStochasticMatrix,
};
pub use verify::{verify_epsilon_agreement, verify_validity, AgreementReport, ValidityReport};
