//! Two-layer interpreter for quantum-mode programs.
//!
//! Computational statements act on every branch's amplitude vector in
//! place. An `if` is applied by restricting its body to the worlds where
//! the condition holds; since the body never writes a variable its
//! condition reads, each world stays on its side of the condition and the
//! result equals the block-diagonal operator of the denotational rule.
//! `measure`, `new` and `return` act on the classical layer.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::state::{AmplitudeState, Branch, Environment, TwoLayerState, PRUNE_THRESHOLD};
use crate::syntax::{free_vars, pretty_stmt, Comp, CompKind, Expr, Program, Stmt};
use crate::validate::{has_errors, validate, Mode};

/// Largest environment [`comp_matrix`] will materialise.
pub const COMP_MATRIX_MAX_BITS: usize = 12;

/// Expression with variables resolved to bit masks.
#[derive(Debug, Clone)]
pub(crate) enum Resolved {
    Bit(usize),
    Const(bool),
    Not(Box<Resolved>),
    And(Box<Resolved>, Box<Resolved>),
    Or(Box<Resolved>, Box<Resolved>),
}

impl Resolved {
    pub(crate) fn new(e: &Expr, env: &Environment) -> Result<Self> {
        Ok(match e {
            Expr::Var(x) => Resolved::Bit(env.mask(x)?),
            Expr::Const(b) => Resolved::Const(*b),
            Expr::Not(a) => Resolved::Not(Box::new(Resolved::new(a, env)?)),
            Expr::And(a, b) => Resolved::And(
                Box::new(Resolved::new(a, env)?),
                Box::new(Resolved::new(b, env)?),
            ),
            Expr::Or(a, b) => Resolved::Or(
                Box::new(Resolved::new(a, env)?),
                Box::new(Resolved::new(b, env)?),
            ),
        })
    }

    pub(crate) fn eval(&self, world: usize) -> bool {
        match self {
            Resolved::Bit(m) => world & m != 0,
            Resolved::Const(b) => *b,
            Resolved::Not(a) => !a.eval(world),
            Resolved::And(a, b) => a.eval(world) && b.eval(world),
            Resolved::Or(a, b) => a.eval(world) || b.eval(world),
        }
    }
}

/// Value of `e` in the basis state `world`.
pub fn eval_expr(e: &Expr, world: usize, env: &Environment) -> Result<bool> {
    Ok(Resolved::new(e, env)?.eval(world))
}

/// A computational statement compiled against an environment.
#[derive(Debug, Clone)]
enum Op {
    If { cond: Resolved, body: Vec<Op> },
    Xor { target: usize, rhs: Resolved },
    Hadamard { target: usize },
    Negate,
}

fn compile(c: &Comp, env: &Environment) -> Result<Op> {
    Ok(match &c.kind {
        CompKind::If { cond, body } => {
            let fv = free_vars(cond);
            if let Some(clash) = crate::syntax::assigned_vars(body).intersection(&fv).next() {
                return Err(Error::Precondition(format!(
                    "`if` body assigns `{clash}`, which its condition reads"
                )));
            }
            Op::If {
                cond: Resolved::new(cond, env)?,
                body: body.iter().map(|b| compile(b, env)).collect::<Result<_>>()?,
            }
        }
        CompKind::XorAssign { target, rhs } => {
            if free_vars(rhs).contains(target) {
                return Err(Error::Precondition(format!(
                    "`{target} ^= E` with `{target}` free in E"
                )));
            }
            Op::Xor {
                target: env.mask(target)?,
                rhs: Resolved::new(rhs, env)?,
            }
        }
        CompKind::QRand { target } => Op::Hadamard {
            target: env.mask(target)?,
        },
        CompKind::QNeg => Op::Negate,
        CompKind::Assign { .. } | CompKind::RandBit { .. } => {
            return Err(Error::Precondition(
                "classical assignment in a quantum program".into(),
            ))
        }
    })
}

fn guarded(guards: &[&Resolved], world: usize) -> bool {
    guards.iter().all(|g| g.eval(world))
}

fn apply_op<'a>(amps: &mut [f64], op: &'a Op, guards: &mut Vec<&'a Resolved>) {
    match op {
        Op::Negate => {
            for (k, q) in amps.iter_mut().enumerate() {
                if guarded(guards, k) {
                    *q = -*q;
                }
            }
        }
        Op::Hadamard { target } => {
            for k in 0..amps.len() {
                // guards never read the target, so k and k|target agree
                if k & target == 0 && guarded(guards, k) {
                    let (a, b) = (amps[k], amps[k | target]);
                    amps[k] = (a + b) * FRAC_1_SQRT_2;
                    amps[k | target] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        Op::Xor { target, rhs } => {
            for k in 0..amps.len() {
                if k & target == 0 && guarded(guards, k) && rhs.eval(k) {
                    amps.swap(k, k | target);
                }
            }
        }
        Op::If { cond, body } => {
            guards.push(cond);
            for b in body {
                apply_op(amps, b, guards);
            }
            guards.pop();
        }
    }
}

fn apply_ops(s: &mut TwoLayerState, ops: &[Op]) {
    for b in &mut s.branches {
        let amps = b.amps.as_mut_slice();
        let mut guards = Vec::new();
        for op in ops {
            apply_op(amps, op, &mut guards);
        }
    }
}

/// Apply any computational statement to every branch.
pub fn apply_comp(s: &mut TwoLayerState, c: &Comp) -> Result<()> {
    let op = compile(c, &s.env)?;
    apply_ops(s, std::slice::from_ref(&op));
    Ok(())
}

/// `qrand(target)`: Hadamard on the target bit.
pub fn apply_qrand(s: &mut TwoLayerState, target: &str) -> Result<()> {
    apply_comp(
        s,
        &Comp::new(CompKind::QRand {
            target: target.to_string(),
        }),
    )
}

/// `qneg()`: multiply every amplitude by −1.
pub fn apply_qneg(s: &mut TwoLayerState) {
    apply_ops(s, &[Op::Negate]);
}

/// `target ^= rhs`: permute worlds, flipping `target` where `rhs` holds.
pub fn apply_xor_assign(s: &mut TwoLayerState, target: &str, rhs: &Expr) -> Result<()> {
    apply_comp(
        s,
        &Comp::new(CompKind::XorAssign {
            target: target.to_string(),
            rhs: rhs.clone(),
        }),
    )
}

/// `if cond: body` restricted to the worlds where `cond` is 1.
pub fn apply_if(s: &mut TwoLayerState, cond: &Expr, body: &[Comp]) -> Result<()> {
    apply_comp(
        s,
        &Comp::new(CompKind::If {
            cond: cond.clone(),
            body: body.to_vec(),
        }),
    )
}

fn distinct<S: AsRef<str>>(names: &[S], what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_ref()) {
            return Err(Error::Precondition(format!(
                "`{}` {what} more than once",
                n.as_ref()
            )));
        }
    }
    Ok(())
}

/// Measure `vars`: every branch splits by the observed value `y` of the
/// measured bits, with probability `p·Q²` and amplitudes rescaled by `1/Q`,
/// where `Q² = Σ q²` over the worlds showing `y`. Children are ordered by
/// parent, then by observed value.
pub fn apply_measure<S: AsRef<str>>(s: &mut TwoLayerState, vars: &[S]) -> Result<()> {
    distinct(vars, "measured")?;
    let mask = s.env.mask_of(vars)?;
    let mut out = Vec::new();
    for b in &s.branches {
        let q = b.amps.as_slice();
        let mut mass: BTreeMap<usize, f64> = BTreeMap::new();
        for (k, qk) in q.iter().enumerate() {
            *mass.entry(k & mask).or_default() += qk * qk;
        }
        for (y, q2) in mass {
            let p = b.p * q2;
            if p <= PRUNE_THRESHOLD {
                continue;
            }
            let norm = q2.sqrt();
            let amps = q
                .iter()
                .enumerate()
                .map(|(k, qk)| if k & mask == y { qk / norm } else { 0.0 })
                .collect();
            out.push(Branch {
                p,
                amps: AmplitudeState::from_vec(amps),
            });
        }
    }
    let total: f64 = out.iter().map(|b| b.p).sum();
    for b in &mut out {
        b.p /= total;
    }
    s.branches = out;
    Ok(())
}

/// `new (names)`: allocate zero-initialised bits.
pub fn apply_new<S: AsRef<str>>(s: &mut TwoLayerState, names: &[S]) -> Result<()> {
    s.extend(names)
}

/// Keep only `returns`: measure everything else, then drop those bits.
/// The remaining environment keeps declaration order.
pub fn apply_return<S: AsRef<str>>(s: &mut TwoLayerState, returns: &[S]) -> Result<()> {
    distinct(returns, "returned")?;
    for r in returns {
        s.env.mask(r.as_ref())?;
    }
    let keep: BTreeSet<&str> = returns.iter().map(|r| r.as_ref()).collect();
    let (kept, discarded): (Vec<String>, Vec<String>) = s
        .env
        .names()
        .iter()
        .cloned()
        .partition(|n| keep.contains(n.as_str()));
    if discarded.is_empty() {
        return Ok(());
    }
    apply_measure(s, &discarded)?;

    let dropped = s.env.mask_of(&discarded)?;
    let kept_masks: Vec<usize> = kept
        .iter()
        .map(|n| s.env.mask(n))
        .collect::<Result<_>>()?;
    let new_env = Environment::new(kept.iter().cloned())?;
    let width = kept_masks.len();
    for b in &mut s.branches {
        // after measurement the discarded bits hold one value per branch
        let fixed = b.amps.argmax() & dropped;
        let old = b.amps.as_slice();
        let amps = (0..new_env.dim())
            .map(|r| {
                let idx = kept_masks
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| r >> (width - 1 - i) & 1 == 1)
                    .fold(fixed, |acc, (_, m)| acc | m);
                old[idx]
            })
            .collect();
        b.amps = AmplitudeState::from_vec(amps);
    }
    s.env = new_env;
    Ok(())
}

/// The state after one top-level statement.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    /// Canonical source text of the statement.
    pub statement: String,
    pub state: TwoLayerState,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Check the state invariants after every statement.
    pub check_invariants: bool,
    /// Record a [`TraceStep`] per statement.
    pub trace: bool,
}

#[derive(Debug, Clone)]
pub struct Execution {
    pub state: TwoLayerState,
    pub trace: Vec<TraceStep>,
}

fn ensure_valid(p: &Program, mode: Mode) -> Result<()> {
    let diags = validate(p, mode);
    if has_errors(&diags) {
        return Err(Error::Invalid(diags));
    }
    Ok(())
}

pub(crate) fn ensure_quantum(p: &Program) -> Result<()> {
    ensure_valid(p, Mode::Quantum)
}

pub(crate) fn ensure_classical(p: &Program) -> Result<()> {
    ensure_valid(p, Mode::Classical)
}

pub fn execute(p: &Program, opts: RunOptions) -> Result<Execution> {
    ensure_quantum(p)?;
    let mut state = TwoLayerState::initial(&p.inputs)?;
    let mut trace = Vec::new();
    let mut step = |state: &TwoLayerState, text: String| -> Result<()> {
        if opts.check_invariants {
            state.check_invariants().map_err(|e| match e {
                Error::MalformedState(m) => Error::MalformedState(format!("after `{text}`: {m}")),
                e => e,
            })?;
        }
        if opts.trace {
            trace.push(TraceStep {
                statement: text,
                state: state.clone(),
            });
        }
        Ok(())
    };
    for stmt in &p.body {
        match stmt {
            Stmt::New { names, .. } => apply_new(&mut state, names)?,
            Stmt::Measure { names, .. } => apply_measure(&mut state, names)?,
            Stmt::Comp(c) => apply_comp(&mut state, c)?,
        }
        step(&state, pretty_stmt(stmt))?;
    }
    if let Some(r) = &p.returns {
        apply_return(&mut state, &r.names)?;
        step(&state, format!("return {}", r.names.join(", ")).trim_end().to_string())?;
    }
    Ok(Execution { state, trace })
}

/// Run a validated quantum program from `[(1, |0…0⟩)]`.
pub fn run(p: &Program) -> Result<TwoLayerState> {
    execute(p, RunOptions::default()).map(|e| e.state)
}

/// Run and record the state after each top-level statement.
pub fn trace(p: &Program) -> Result<Vec<TraceStep>> {
    execute(
        p,
        RunOptions {
            trace: true,
            ..RunOptions::default()
        },
    )
    .map(|e| e.trace)
}

/// Matrix of a computational sequence: column `k` is the body applied to
/// `|k⟩`.
pub fn comp_matrix(body: &[Comp], env: &Environment) -> Result<DMatrix<f64>> {
    if env.len() > COMP_MATRIX_MAX_BITS {
        return Err(Error::Capacity {
            needed: env.len(),
            limit: COMP_MATRIX_MAX_BITS,
        });
    }
    let ops: Vec<Op> = body.iter().map(|c| compile(c, env)).collect::<Result<_>>()?;
    let dim = env.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let mut col = AmplitudeState::basis(dim, k).into_vec();
        let mut guards = Vec::new();
        for op in &ops {
            apply_op(&mut col, op, &mut guards);
        }
        m.set_column(k, &nalgebra::DVector::from_vec(col));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use std::f64::consts::FRAC_1_SQRT_2 as R;

    fn env(names: &[&str]) -> Environment {
        Environment::new(names.iter().copied()).unwrap()
    }

    fn state(names: &[&str], branches: Vec<(f64, Vec<f64>)>) -> TwoLayerState {
        TwoLayerState::from_branches(env(names), branches).unwrap()
    }

    fn assert_state(s: &TwoLayerState, expected: &[(f64, &[f64])], tol: f64) {
        assert_eq!(s.branches().len(), expected.len(), "{s:?}");
        for (b, (p, amps)) in s.branches().iter().zip(expected) {
            assert!((b.p - p).abs() <= tol, "{s:?}");
            for (q, e) in b.amps.as_slice().iter().zip(amps.iter()) {
                assert!((q - e).abs() <= tol, "{s:?}");
            }
        }
    }

    fn comp(src: &str, vars: &str) -> Comp {
        let p = parse(&format!("def main({vars} : bit):\n  {src}")).unwrap();
        match p.body.into_iter().next().unwrap() {
            Stmt::Comp(c) => c,
            _ => panic!(),
        }
    }

    #[test]
    fn eval_expr_examples() {
        let e = env(&["x", "y"]);
        let and = Expr::and(Expr::var("x"), Expr::var("y"));
        assert!(eval_expr(&and, 0b11, &e).unwrap());
        let e1 = env(&["x"]);
        assert!(eval_expr(&Expr::not(Expr::var("x")), 0, &e1).unwrap());
        let or = Expr::or(Expr::Const(false), Expr::var("y"));
        assert!(!eval_expr(&or, 0b10, &e).unwrap());
        assert!(eval_expr(&Expr::var("z"), 0, &e).is_err());
    }

    #[test]
    fn qrand_examples() {
        let mut s = state(&["x"], vec![(1.0, vec![1.0, 0.0])]);
        apply_qrand(&mut s, "x").unwrap();
        assert_state(&s, &[(1.0, &[R, R])], 1e-15);

        let mut s = state(&["x"], vec![(1.0, vec![0.0, 1.0])]);
        apply_qrand(&mut s, "x").unwrap();
        assert_state(&s, &[(1.0, &[R, -R])], 1e-15);

        let mut s = state(&["x"], vec![(1.0, vec![R, R])]);
        apply_qrand(&mut s, "x").unwrap();
        assert_state(&s, &[(1.0, &[1.0, 0.0])], 1e-15);
    }

    #[test]
    fn qneg_examples() {
        let mut s = TwoLayerState::initial(&["x"]).unwrap();
        apply_qneg(&mut s);
        assert_state(&s, &[(1.0, &[-1.0, 0.0])], 0.0);

        let mut s = state(&["x"], vec![(1.0, vec![R, R])]);
        let before = s.to_density();
        apply_qneg(&mut s);
        assert_eq!(s.to_density(), before);

        let mut s = state(&["x"], vec![(1.0, vec![R, R])]);
        apply_if(&mut s, &Expr::var("x"), &[Comp::new(CompKind::QNeg)]).unwrap();
        assert_state(&s, &[(1.0, &[R, -R])], 0.0);
    }

    #[test]
    fn xor_assign_examples() {
        let mut s = state(&["x", "y"], vec![(1.0, vec![0.0, 0.0, 1.0, 0.0])]);
        apply_xor_assign(&mut s, "y", &Expr::var("x")).unwrap();
        assert_state(&s, &[(1.0, &[0.0, 0.0, 0.0, 1.0])], 0.0);
        apply_xor_assign(&mut s, "y", &Expr::var("x")).unwrap();
        assert_state(&s, &[(1.0, &[0.0, 0.0, 1.0, 0.0])], 0.0);

        let mut s = state(&["x", "y"], vec![(1.0, vec![R, 0.0, R, 0.0])]);
        apply_xor_assign(&mut s, "y", &Expr::var("x")).unwrap();
        assert_state(&s, &[(1.0, &[R, 0.0, 0.0, R])], 0.0);

        assert!(matches!(
            apply_xor_assign(&mut s, "y", &Expr::var("y")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn if_examples() {
        let mut s = state(&["x", "y"], vec![(1.0, vec![R, 0.0, R, 0.0])]);
        apply_if(&mut s, &Expr::var("x"), &[Comp::new(CompKind::QNeg)]).unwrap();
        assert_state(&s, &[(1.0, &[R, 0.0, -R, 0.0])], 0.0);

        let mut s = state(&["x", "y"], vec![(1.0, vec![0.5, 0.5, -0.5, 0.5])]);
        let before = s.clone();
        apply_if(&mut s, &Expr::Const(false), &[comp("qrand(y)", "x, y")]).unwrap();
        assert_eq!(s, before);

        let bad = apply_if(&mut s, &Expr::var("y"), &[comp("qrand(y)", "x, y")]);
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn measure_examples() {
        let mut s = state(&["x"], vec![(1.0, vec![R, R])]);
        apply_measure(&mut s, &["x"]).unwrap();
        assert_state(&s, &[(0.5, &[1.0, 0.0]), (0.5, &[0.0, 1.0])], 1e-12);

        let mut s = state(&["x"], vec![(0.25, vec![0.0, -1.0]), (0.75, vec![1.0, 0.0])]);
        let before = s.clone();
        apply_measure(&mut s, &["x"]).unwrap();
        assert_eq!(s, before);

        let mut s = state(&["x", "y"], vec![(1.0, vec![0.5; 4])]);
        apply_measure(&mut s, &["y"]).unwrap();
        assert_state(
            &s,
            &[(0.5, &[R, 0.0, R, 0.0]), (0.5, &[0.0, R, 0.0, R])],
            1e-12,
        );
    }

    #[test]
    fn measure_rejects_duplicates_and_unknowns() {
        let mut s = TwoLayerState::initial(&["x"]).unwrap();
        assert!(apply_measure(&mut s, &["x", "x"]).is_err());
        assert!(apply_measure(&mut s, &["q"]).is_err());
    }

    #[test]
    fn allocation_and_return_listing() {
        let p = parse("def main (x : bit):\n  new y := not x\n  new z := y\n  return y").unwrap();
        let s = run(&p).unwrap();
        assert_eq!(s.env().names(), &["y"]);
        assert_state(&s, &[(1.0, &[0.0, 1.0])], 0.0);
    }

    #[test]
    fn return_edge_cases() {
        let mut s = state(&["x", "y"], vec![(1.0, vec![0.5, 0.5, -0.5, 0.5])]);
        let before = s.clone();
        apply_return(&mut s, &["y", "x"]).unwrap();
        assert_eq!(s, before);

        apply_return::<&str>(&mut s, &[]).unwrap();
        assert_eq!(s.env().len(), 0);
        assert_eq!(s.branches().len(), 4);
        for b in s.branches() {
            assert!((b.p - 0.25).abs() < 1e-12);
            assert!((b.amps.as_slice()[0].abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn return_keeps_coherence_of_kept_bits() {
        // y is discarded while x stays in superposition
        let mut s = state(&["x", "y"], vec![(1.0, vec![R, 0.0, R, 0.0])]);
        apply_return(&mut s, &["x"]).unwrap();
        assert_state(&s, &[(1.0, &[R, R])], 1e-15);
    }

    #[test]
    fn interference_example_trace() {
        let src = "def main(x,y : bit):\n  qrand_bit(x)\n  if x == 1:\n    qnegate()\n  qrand_bit(x)\n  y ^= x\n  return x,y\n";
        let steps = trace(&parse(src).unwrap()).unwrap();
        assert_eq!(steps.len(), 5);
        assert_state(&steps[0].state, &[(1.0, &[R, 0.0, R, 0.0])], 1e-10);
        assert_state(&steps[1].state, &[(1.0, &[R, 0.0, -R, 0.0])], 1e-10);
        assert_state(&steps[2].state, &[(1.0, &[0.0, 0.0, 1.0, 0.0])], 1e-10);
        assert_state(&steps[4].state, &[(1.0, &[0.0, 0.0, 0.0, 1.0])], 1e-10);
        assert_eq!(steps[1].statement, "if x:\n  qneg()");
    }

    #[test]
    fn comp_matrix_examples() {
        let h = comp_matrix(&[comp("qrand(x)", "x")], &env(&["x"])).unwrap();
        assert_eq!(h.as_slice(), &[R, R, R, -R]);

        let t = comp_matrix(&[comp("z ^= x and y", "x, y, z")], &env(&["x", "y", "z"])).unwrap();
        let mut toffoli = DMatrix::<f64>::identity(8, 8);
        toffoli.swap_columns(6, 7);
        assert_eq!(t, toffoli);

        let neg = comp_matrix(&[Comp::new(CompKind::QNeg)], &env(&["x", "y"])).unwrap();
        assert_eq!(neg, -DMatrix::<f64>::identity(4, 4));

        let big = Environment::new((0..13).map(|i| format!("v{i}"))).unwrap();
        assert!(matches!(comp_matrix(&[], &big), Err(Error::Capacity { .. })));
    }

    #[test]
    fn run_rejects_invalid_programs() {
        let p = parse("def main(x : bit):\n  x ^= x").unwrap();
        assert!(matches!(run(&p), Err(Error::Invalid(_))));
    }

    #[test]
    fn branches_evolve_independently() {
        let mut s = state(&["x"], vec![(0.5, vec![R, R]), (0.5, vec![R, -R])]);
        apply_qrand(&mut s, "x").unwrap();
        assert_state(&s, &[(0.5, &[1.0, 0.0]), (0.5, &[0.0, 1.0])], 1e-12);
    }
}
