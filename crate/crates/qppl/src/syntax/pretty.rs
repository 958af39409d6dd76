use super::ast::*;
use std::fmt::Write;

const INDENT: &str = "  ";

/// Render a program in canonical concrete syntax. `parse` of the output
/// yields the same tree up to spans.
pub fn pretty_program(p: &Program) -> String {
    let mut out = String::new();
    if p.inputs.is_empty() {
        out.push_str("def main():\n");
    } else {
        let _ = writeln!(out, "def main({} : bit):", p.inputs.join(", "));
    }
    for s in &p.body {
        write_stmt(&mut out, s, 1);
    }
    if let Some(r) = &p.returns {
        if r.names.is_empty() {
            let _ = writeln!(out, "{INDENT}return");
        } else {
            let _ = writeln!(out, "{INDENT}return {}", r.names.join(", "));
        }
    }
    out
}

/// A top-level statement, possibly spanning several lines, without a
/// trailing newline.
pub fn pretty_stmt(s: &Stmt) -> String {
    let mut out = String::new();
    write_stmt(&mut out, s, 0);
    out.truncate(out.trim_end().len());
    out
}

pub fn pretty_comp(c: &Comp) -> String {
    let mut out = String::new();
    write_comp(&mut out, c, 0);
    out.truncate(out.trim_end().len());
    out
}

fn write_stmt(out: &mut String, s: &Stmt, depth: usize) {
    let pad = INDENT.repeat(depth);
    match s {
        Stmt::New { names, .. } => {
            let _ = writeln!(out, "{pad}new ({})", names.join(", "));
        }
        Stmt::Measure { names, .. } => {
            let _ = writeln!(out, "{pad}measure({})", names.join(", "));
        }
        Stmt::Comp(c) => write_comp(out, c, depth),
    }
}

fn write_comp(out: &mut String, c: &Comp, depth: usize) {
    let pad = INDENT.repeat(depth);
    match &c.kind {
        CompKind::If { cond, body } => {
            let _ = writeln!(out, "{pad}if {}:", pretty_expr(cond));
            for b in body {
                write_comp(out, b, depth + 1);
            }
        }
        CompKind::XorAssign { target, rhs } => {
            let _ = writeln!(out, "{pad}{target} ^= {}", pretty_expr(rhs));
        }
        CompKind::QRand { target } => {
            let _ = writeln!(out, "{pad}qrand({target})");
        }
        CompKind::QNeg => {
            let _ = writeln!(out, "{pad}qneg()");
        }
        CompKind::Assign { target, rhs } => {
            let _ = writeln!(out, "{pad}{target} := {}", pretty_expr(rhs));
        }
        CompKind::RandBit { target } => {
            let _ = writeln!(out, "{pad}{target} := rand_bit()");
        }
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Or(..) => 1,
        Expr::And(..) => 2,
        Expr::Not(..) => 3,
        Expr::Var(_) | Expr::Const(_) => 4,
    }
}

pub fn pretty_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let paren = precedence(e) < min;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Var(x) => out.push_str(x),
        Expr::Const(b) => out.push(if *b { '1' } else { '0' }),
        Expr::Not(a) => {
            out.push_str("not ");
            write_expr(out, a, 3);
        }
        // Both connectives parse left-associatively, so a right operand of
        // the same kind needs parentheses.
        Expr::And(a, b) => {
            write_expr(out, a, 2);
            out.push_str(" and ");
            write_expr(out, b, 3);
        }
        Expr::Or(a, b) => {
            write_expr(out, a, 1);
            out.push_str(" or ");
            write_expr(out, b, 2);
        }
    }
    if paren {
        out.push(')');
    }
}
