//! A qubit-free quantum probabilistic programming language.
//!
//! Programs manipulate named bits with reversible statements (`qrand`,
//! `qneg`, `x ^= E`, `if`), allocate with `new`, observe with `measure`
//! and discard with `return`. There are no qubit handles: a program state is
//! a probability distribution over branches, each carrying a real amplitude
//! vector over the worlds of its live variables.
//!
//! ```
//! use qppl::{parse, run};
//!
//! let p = parse("def main(x, y : bit):
//!   qrand_bit(x)
//!   if x == 1:
//!     qnegate()
//!   qrand_bit(x)
//!   y ^= x
//!   return x, y
//! ").unwrap();
//! let dist = run(&p).unwrap().output_distribution();
//! assert!((dist.get_bits("11") - 1.0).abs() < 1e-10);
//! ```
//!
//! The [`density`] module gives an independent density-matrix semantics
//! used to cross-check [`engine`]; [`classical`] runs the destructive,
//! coin-flipping fragment.

pub mod classical;
pub mod cli;
pub mod corpus;
pub mod density;
pub mod engine;
pub mod error;
pub mod format;
pub mod gen;
pub mod sample;
pub mod state;
pub mod syntax;
pub mod validate;

pub use classical::{run_classical, trace_classical, ClassicalTraceStep};
pub use density::{check_equivalence, comp_unitary, run_density};
pub use engine::{
    apply_comp, apply_if, apply_measure, apply_new, apply_qneg, apply_qrand, apply_return,
    apply_xor_assign, comp_matrix, eval_expr, execute, run, trace, Execution, RunOptions,
    TraceStep,
};
pub use error::{Error, Result};
pub use sample::sample;
pub use state::{
    AmplitudeState, Branch, ClassicalDistribution, DensityMatrix, Distribution, Environment,
    TwoLayerState,
};
pub use syntax::{parse, Comp, CompKind, Expr, ParseError, Program, Stmt};
pub use validate::{validate, Diagnostic, Mode, Severity};
