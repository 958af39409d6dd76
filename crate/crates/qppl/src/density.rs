//! Density-matrix semantics, used as an oracle for the two-layer engine.
//!
//! Nothing here goes through the engine: computational statements are
//! turned into explicit matrices (Kronecker-placed Hadamards, permutation
//! matrices for `^=`, block-diagonal matrices for `if`) and applied as
//! `ρ ↦ UρUᵀ`; `new` is conjugation by an inclusion isometry, `measure` is
//! a sum of projections, and `return` measures then traces out the
//! discarded bits.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::engine::ensure_quantum;
use crate::error::{Error, Result};
use crate::state::DensityMatrix;
use crate::syntax::{Comp, CompKind, Expr, Program, Stmt};

/// Largest environment the oracle will handle (`4^n` entries).
pub const DENSITY_MAX_BITS: usize = 10;

/// Variable order used by the oracle: first name is the most significant
/// bit, new names are appended.
#[derive(Debug, Clone, Default)]
struct Vars(Vec<String>);

impl Vars {
    fn dim(&self) -> usize {
        1 << self.0.len()
    }

    fn pos(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn bit(&self, name: &str, world: usize) -> Result<bool> {
        let n = self.0.len();
        Ok((world >> (n - 1 - self.pos(name)?)) & 1 == 1)
    }

    fn with_bit(&self, name: &str, world: usize, value: bool) -> Result<usize> {
        let shift = self.0.len() - 1 - self.pos(name)?;
        Ok((world & !(1 << shift)) | (usize::from(value) << shift))
    }

    /// Values of `names` in `world`, packed with the first name as the
    /// most significant bit.
    fn read(&self, names: &[String], world: usize) -> Result<usize> {
        names
            .iter()
            .try_fold(0, |acc, n| Ok((acc << 1) | usize::from(self.bit(n, world)?)))
    }
}

fn truth(e: &Expr, vars: &Vars, world: usize) -> Result<bool> {
    Ok(match e {
        Expr::Var(x) => vars.bit(x, world)?,
        Expr::Const(b) => *b,
        Expr::Not(a) => !truth(a, vars, world)?,
        Expr::And(a, b) => truth(a, vars, world)? & truth(b, vars, world)?,
        Expr::Or(a, b) => truth(a, vars, world)? | truth(b, vars, world)?,
    })
}

fn hadamard_on(vars: &Vars, target: &str) -> Result<DMatrix<f64>> {
    let n = vars.0.len();
    let pos = vars.pos(target)?;
    let h = DMatrix::from_row_slice(2, 2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2]);
    let left = DMatrix::<f64>::identity(1 << pos, 1 << pos);
    let right = DMatrix::<f64>::identity(1 << (n - 1 - pos), 1 << (n - 1 - pos));
    Ok(left.kronecker(&h).kronecker(&right))
}

/// Unitary of a computational sequence, `U_last ⋯ U_first`.
pub fn comp_unitary(body: &[Comp], names: &[String]) -> Result<DMatrix<f64>> {
    let vars = Vars(names.to_vec());
    if vars.0.len() > DENSITY_MAX_BITS {
        return Err(Error::Capacity {
            needed: vars.0.len(),
            limit: DENSITY_MAX_BITS,
        });
    }
    sequence_unitary(body, &vars)
}

fn sequence_unitary(body: &[Comp], vars: &Vars) -> Result<DMatrix<f64>> {
    let dim = vars.dim();
    body.iter().try_fold(DMatrix::identity(dim, dim), |acc, c| {
        Ok(statement_unitary(c, vars)? * acc)
    })
}

fn statement_unitary(c: &Comp, vars: &Vars) -> Result<DMatrix<f64>> {
    let dim = vars.dim();
    match &c.kind {
        CompKind::QRand { target } => hadamard_on(vars, target),
        CompKind::QNeg => Ok(-DMatrix::<f64>::identity(dim, dim)),
        CompKind::XorAssign { target, rhs } => {
            let mut m = DMatrix::zeros(dim, dim);
            for col in 0..dim {
                let flipped = vars.bit(target, col)? ^ truth(rhs, vars, col)?;
                m[(vars.with_bit(target, col, flipped)?, col)] = 1.0;
            }
            Ok(m)
        }
        CompKind::If { cond, body } => {
            let inner = sequence_unitary(body, vars)?;
            let mut m = DMatrix::zeros(dim, dim);
            for col in 0..dim {
                if truth(cond, vars, col)? {
                    m.set_column(col, &inner.column(col));
                } else {
                    m[(col, col)] = 1.0;
                }
            }
            Ok(m)
        }
        CompKind::Assign { .. } | CompKind::RandBit { .. } => Err(Error::Precondition(
            "classical assignment has no unitary".into(),
        )),
    }
}

fn conjugate(rho: &DMatrix<f64>, u: &DMatrix<f64>) -> DMatrix<f64> {
    u * rho * u.transpose()
}

/// `Σ_r P_r ρ P_r` over the values `r` of `measured`.
fn project(rho: &DMatrix<f64>, vars: &Vars, measured: &[String]) -> Result<DMatrix<f64>> {
    let dim = vars.dim();
    let outcome: Vec<usize> = (0..dim)
        .map(|k| vars.read(measured, k))
        .collect::<Result<_>>()?;
    let mut out = DMatrix::zeros(dim, dim);
    for r in 0..(1usize << measured.len()) {
        let proj: Vec<f64> = outcome.iter().map(|&o| if o == r { 1.0 } else { 0.0 }).collect();
        for a in 0..dim {
            if proj[a] == 0.0 {
                continue;
            }
            for b in 0..dim {
                out[(a, b)] += proj[a] * rho[(a, b)] * proj[b];
            }
        }
    }
    Ok(out)
}

/// Trace out every variable not in `kept`.
fn partial_trace(rho: &DMatrix<f64>, vars: &Vars, kept: &[String]) -> Result<(DMatrix<f64>, Vars)> {
    let traced: Vec<String> = vars.0.iter().filter(|n| !kept.contains(n)).cloned().collect();
    let reduced = Vars(kept.to_vec());
    let (dk, dt) = (reduced.dim(), 1usize << traced.len());
    // index into the full space for (kept value, traced value)
    let mut embed = vec![vec![0usize; dt]; dk];
    for k in 0..vars.dim() {
        embed[vars.read(kept, k)?][vars.read(&traced, k)?] = k;
    }
    let mut out = DMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            out[(a, b)] = (0..dt).map(|y| rho[(embed[a][y], embed[b][y])]).sum();
        }
    }
    Ok((out, reduced))
}

fn check_capacity(n: usize) -> Result<()> {
    if n > DENSITY_MAX_BITS {
        return Err(Error::Capacity {
            needed: n,
            limit: DENSITY_MAX_BITS,
        });
    }
    Ok(())
}

/// Density matrix of a quantum program, computed without the two-layer
/// engine. With `check_invariants`, every intermediate `ρ` is checked for
/// symmetry, positivity and unit trace.
pub fn run_density_with(p: &Program, check_invariants: bool) -> Result<DensityMatrix> {
    ensure_quantum(p)?;
    let mut vars = Vars(p.inputs.clone());
    check_capacity(vars.0.len())?;
    let mut rho = DensityMatrix::pure_basis(vars.dim(), 0).into_matrix();

    let check = |rho: &DMatrix<f64>| -> Result<()> {
        if check_invariants {
            DensityMatrix::from_matrix(rho.clone())?.check_invariants()?;
        }
        Ok(())
    };

    for stmt in &p.body {
        match stmt {
            Stmt::Comp(c) => {
                rho = conjugate(&rho, &statement_unitary(c, &vars)?);
            }
            Stmt::New { names, .. } => {
                let old = vars.dim();
                vars.0.extend(names.iter().cloned());
                check_capacity(vars.0.len())?;
                let m = names.len();
                let mut v = DMatrix::zeros(vars.dim(), old);
                for k in 0..old {
                    v[(k << m, k)] = 1.0;
                }
                rho = conjugate(&rho, &v);
            }
            Stmt::Measure { names, .. } => {
                rho = project(&rho, &vars, names)?;
            }
        }
        check(&rho)?;
    }

    if let Some(r) = &p.returns {
        let kept: Vec<String> = vars.0.iter().filter(|n| r.names.contains(n)).cloned().collect();
        let discarded: Vec<String> = vars.0.iter().filter(|n| !kept.contains(n)).cloned().collect();
        rho = project(&rho, &vars, &discarded)?;
        let (reduced, reduced_vars) = partial_trace(&rho, &vars, &kept)?;
        rho = reduced;
        vars = reduced_vars;
        check(&rho)?;
    }
    debug_assert_eq!(rho.nrows(), vars.dim());
    DensityMatrix::from_matrix(rho)
}

pub fn run_density(p: &Program) -> Result<DensityMatrix> {
    run_density_with(p, false)
}

/// `‖to_density(run(p)) − run_density(p)‖_max`.
pub fn check_equivalence(p: &Program) -> Result<f64> {
    let two_layer = crate::engine::run(p)?.to_density();
    let direct = run_density(p)?;
    Ok(two_layer.max_abs_diff(&direct))
}
