//! Quantum query complexity of symmetric Boolean functions: a faithful
//! state-vector simulation of Grover-style search with exact branch
//! enumeration, the composed weight-classification algorithm, extraction of
//! the acceptance probability as a polynomial, and LP ground truth for
//! eps-approximate degrees.

pub mod degree;
pub mod error;
pub mod exec;
pub mod grover;
pub mod polyx;
pub mod qsym;
pub mod symfun;
