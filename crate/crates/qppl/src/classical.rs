//! Classical probabilistic mode: probability vectors that sum to 1,
//! destructive assignment and fair coin flips. Every statement is a
//! column-stochastic matrix acting on the distribution.

use nalgebra::DMatrix;

use crate::engine::{ensure_classical, Resolved};
use crate::error::{Error, Result};
use crate::state::{ClassicalDistribution, Distribution, Environment};
use crate::syntax::{pretty_stmt, Comp, CompKind, Program, Stmt};

fn step(c: &Comp, env: &Environment, probs: Vec<f64>) -> Result<Vec<f64>> {
    let dim = probs.len();
    let mut out = vec![0.0; dim];
    match &c.kind {
        CompKind::Assign { target, rhs } => {
            let mask = env.mask(target)?;
            let rhs = Resolved::new(rhs, env)?;
            for (k, p) in probs.iter().enumerate() {
                let to = if rhs.eval(k) { k | mask } else { k & !mask };
                out[to] += p;
            }
        }
        CompKind::XorAssign { target, rhs } => {
            let mask = env.mask(target)?;
            let rhs = Resolved::new(rhs, env)?;
            for (k, p) in probs.iter().enumerate() {
                let to = if rhs.eval(k) { k ^ mask } else { k };
                out[to] += p;
            }
        }
        CompKind::RandBit { target } => {
            let mask = env.mask(target)?;
            for (k, p) in probs.iter().enumerate() {
                out[k & !mask] += 0.5 * p;
                out[k | mask] += 0.5 * p;
            }
        }
        CompKind::If { cond, body } => {
            let cond = Resolved::new(cond, env)?;
            let mut taken = vec![0.0; dim];
            for (k, p) in probs.iter().enumerate() {
                if cond.eval(k) {
                    taken[k] = *p;
                } else {
                    out[k] = *p;
                }
            }
            for b in body {
                taken = step(b, env, taken)?;
            }
            for (o, t) in out.iter_mut().zip(taken) {
                *o += t;
            }
        }
        CompKind::QRand { .. } | CompKind::QNeg => {
            return Err(Error::Precondition(
                "quantum operation in classical mode".into(),
            ))
        }
    }
    Ok(out)
}

/// Stochastic matrix of one statement, probed column by column.
pub fn statement_matrix(c: &Comp, env: &Environment) -> Result<DMatrix<f64>> {
    let dim = env.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        let col = step(c, env, e)?;
        m.set_column(k, &nalgebra::DVector::from_vec(col));
    }
    Ok(m)
}

fn marginal(dist: &Distribution, kept: &[String]) -> Result<Distribution> {
    let env = Environment::new(kept.iter().cloned())?;
    let masks: Vec<usize> = kept
        .iter()
        .map(|n| dist.env.mask(n))
        .collect::<Result<_>>()?;
    let width = masks.len();
    let mut probs = vec![0.0; env.dim()];
    for (k, p) in dist.probs.iter().enumerate() {
        let r = masks
            .iter()
            .enumerate()
            .filter(|(_, m)| k & **m != 0)
            .fold(0, |acc, (i, _)| acc | 1 << (width - 1 - i));
        probs[r] += p;
    }
    Distribution::new(env, probs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTraceStep {
    pub statement: String,
    pub dist: Distribution,
}

fn execute(p: &Program, mut on_step: impl FnMut(String, &Distribution)) -> Result<Distribution> {
    ensure_classical(p)?;
    let env = Environment::new(p.inputs.iter().cloned())?;
    let mut probs = vec![0.0; env.dim()];
    probs[0] = 1.0;
    let mut dist = Distribution::new(env, probs)?;
    for stmt in &p.body {
        match stmt {
            Stmt::New { names, .. } => {
                let m = names.len();
                let mut all = dist.env.names().to_vec();
                all.extend(names.iter().cloned());
                let env = Environment::new(all)?;
                let mut probs = vec![0.0; env.dim()];
                for (k, p) in dist.probs.iter().enumerate() {
                    probs[k << m] = *p;
                }
                dist = Distribution::new(env, probs)?;
            }
            Stmt::Comp(c) => {
                let probs = step(c, &dist.env, std::mem::take(&mut dist.probs))?;
                dist.probs = probs;
            }
            Stmt::Measure { .. } => {
                return Err(Error::Precondition("measure in classical mode".into()))
            }
        }
        on_step(pretty_stmt(stmt), &dist);
    }
    if let Some(r) = &p.returns {
        let kept: Vec<String> = dist
            .env
            .names()
            .iter()
            .filter(|n| r.names.contains(n))
            .cloned()
            .collect();
        dist = marginal(&dist, &kept)?;
        on_step(format!("return {}", r.names.join(", ")).trim_end().to_string(), &dist);
    }
    Ok(dist)
}

/// Run a classical-mode program and return its output distribution.
pub fn run_classical(p: &Program) -> Result<ClassicalDistribution> {
    execute(p, |_, _| {})
}

pub fn trace_classical(p: &Program) -> Result<Vec<ClassicalTraceStep>> {
    let mut steps = Vec::new();
    execute(p, |statement, dist| {
        steps.push(ClassicalTraceStep {
            statement,
            dist: dist.clone(),
        })
    })?;
    Ok(steps)
}
