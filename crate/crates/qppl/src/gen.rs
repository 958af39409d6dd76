//! Grammar-directed random programs that pass validation by construction.
//! Used by the property suites; the weights live in [`GenConfig`].

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{free_vars, Comp, CompKind, Expr, Program, Return, Span, Stmt};

#[derive(Debug, Clone, Copy)]
pub struct Weights {
    pub qrand: u32,
    pub qneg: u32,
    pub xor: u32,
    pub cond: u32,
    pub new: u32,
    pub measure: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            qrand: 4,
            qneg: 1,
            xor: 4,
            cond: 3,
            new: 1,
            measure: 1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    /// Upper bound on live bits at any point.
    pub max_bits: usize,
    /// Upper bound on statements, counting those nested inside `if`.
    pub max_statements: usize,
    pub max_if_depth: usize,
    pub max_expr_depth: usize,
    pub weights: Weights,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_bits: 5,
            max_statements: 30,
            max_if_depth: 2,
            max_expr_depth: 2,
            weights: Weights::default(),
        }
    }
}

fn random_expr<R: Rng>(rng: &mut R, vars: &[String], depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.4) {
        if vars.is_empty() || rng.gen_bool(0.1) {
            return Expr::Const(rng.gen());
        }
        return Expr::Var(vars.choose(rng).unwrap().clone());
    }
    match rng.gen_range(0..3) {
        0 => Expr::not(random_expr(rng, vars, depth - 1)),
        1 => Expr::and(
            random_expr(rng, vars, depth - 1),
            random_expr(rng, vars, depth - 1),
        ),
        _ => Expr::or(
            random_expr(rng, vars, depth - 1),
            random_expr(rng, vars, depth - 1),
        ),
    }
}

struct Gen<'a, R> {
    rng: &'a mut R,
    cfg: GenConfig,
    budget: usize,
}

impl<R: Rng> Gen<'_, R> {
    /// One computational statement over `live`, never assigning `frozen`.
    fn comp(&mut self, live: &[String], frozen: &BTreeSet<String>, depth: usize) -> Comp {
        self.budget = self.budget.saturating_sub(1);
        let targets: Vec<String> = live.iter().filter(|v| !frozen.contains(*v)).cloned().collect();
        let w = self.cfg.weights;
        let can_assign = !targets.is_empty();
        let can_nest = depth < self.cfg.max_if_depth && self.budget > 0;
        let choices = [
            (0, if can_assign { w.qrand } else { 0 }),
            (1, w.qneg),
            (2, if can_assign { w.xor } else { 0 }),
            (3, if can_nest { w.cond } else { 0 }),
        ];
        let kind = weighted(self.rng, &choices).unwrap_or(1);
        let ck = match kind {
            0 => CompKind::QRand {
                target: targets.choose(self.rng).unwrap().clone(),
            },
            2 => {
                let target = targets.choose(self.rng).unwrap().clone();
                let others: Vec<String> = live.iter().filter(|v| **v != target).cloned().collect();
                CompKind::XorAssign {
                    rhs: random_expr(self.rng, &others, self.cfg.max_expr_depth),
                    target,
                }
            }
            3 => {
                let cond = random_expr(self.rng, live, self.cfg.max_expr_depth);
                let mut inner = frozen.clone();
                inner.extend(free_vars(&cond));
                let len = self.rng.gen_range(1..=3);
                let mut body = Vec::new();
                while body.len() < len && self.budget > 0 {
                    body.push(self.comp(live, &inner, depth + 1));
                }
                CompKind::If { cond, body }
            }
            _ => CompKind::QNeg,
        };
        Comp::new(ck)
    }
}

fn weighted<R: Rng>(rng: &mut R, choices: &[(u8, u32)]) -> Option<u8> {
    let total: u32 = choices.iter().map(|c| c.1).sum();
    if total == 0 {
        return None;
    }
    let mut pick = rng.gen_range(0..total);
    for (k, w) in choices {
        if pick < *w {
            return Some(*k);
        }
        pick -= w;
    }
    None
}

fn input_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// A program made only of computational statements over `bits` inputs.
pub fn random_comp_program<R: Rng>(rng: &mut R, bits: usize, cfg: &GenConfig) -> Program {
    let inputs = input_names(bits);
    let mut g = Gen {
        rng,
        cfg: *cfg,
        budget: 0,
    };
    g.budget = g.rng.gen_range(1..=cfg.max_statements.max(1));
    let mut body = Vec::new();
    while g.budget > 0 {
        body.push(Stmt::Comp(g.comp(&inputs, &BTreeSet::new(), 0)));
    }
    Program {
        inputs,
        body,
        returns: None,
        span: Span::default(),
    }
}

/// The computational body of [`random_comp_program`].
pub fn random_comp_body<R: Rng>(rng: &mut R, bits: usize, cfg: &GenConfig) -> (Vec<String>, Vec<Comp>) {
    let p = random_comp_program(rng, bits, cfg);
    let body = p
        .body
        .into_iter()
        .filter_map(|s| match s {
            Stmt::Comp(c) => Some(c),
            _ => None,
        })
        .collect();
    (p.inputs, body)
}

/// A full program mixing computation with `new`, `measure` and an optional
/// `return`.
pub fn random_program<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Program {
    let n_inputs = rng.gen_range(1..=cfg.max_bits.clamp(1, 3));
    let mut live = input_names(n_inputs);
    let inputs = live.clone();
    let mut fresh = 0;
    let mut g = Gen {
        rng,
        cfg: *cfg,
        budget: 0,
    };
    g.budget = g.rng.gen_range(1..=cfg.max_statements.max(1));
    let w = cfg.weights;
    let mut body = Vec::new();
    while g.budget > 0 {
        let comp_weight = w.qrand + w.qneg + w.xor + w.cond;
        let choices = [
            (0, comp_weight),
            (1, if live.len() < cfg.max_bits { w.new } else { 0 }),
            (2, w.measure),
        ];
        match weighted(g.rng, &choices) {
            Some(1) => {
                g.budget -= 1;
                let room = cfg.max_bits - live.len();
                let m = g.rng.gen_range(1..=room.min(2));
                let names: Vec<String> = (0..m)
                    .map(|_| {
                        fresh += 1;
                        format!("t{fresh}")
                    })
                    .collect();
                live.extend(names.iter().cloned());
                body.push(Stmt::New {
                    names,
                    span: Span::default(),
                });
            }
            Some(2) => {
                g.budget -= 1;
                let m = g.rng.gen_range(1..=live.len().min(2));
                let names: Vec<String> = live.choose_multiple(g.rng, m).cloned().collect();
                body.push(Stmt::Measure {
                    names,
                    span: Span::default(),
                });
            }
            _ => body.push(Stmt::Comp(g.comp(&live, &BTreeSet::new(), 0))),
        }
    }
    let returns = if g.rng.gen_bool(0.5) {
        let m = g.rng.gen_range(0..=live.len());
        Some(Return {
            names: live.choose_multiple(g.rng, m).cloned().collect(),
            span: Span::default(),
        })
    } else {
        None
    };
    Program {
        inputs,
        body,
        returns,
        span: Span::default(),
    }
}
