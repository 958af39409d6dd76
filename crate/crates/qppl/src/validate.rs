//! Static checks run before execution: reversibility side conditions,
//! scoping, and which statement set the selected mode admits.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{assigned_vars, free_vars, Comp, CompKind, Expr, Program, Span, Stmt};

/// Which interpreter a program is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    DuplicateInput,
    UndeclaredVariable,
    RedeclaredVariable,
    XorSelfReference,
    CondAssignsConditionVar,
    DuplicateMeasure,
    DuplicateReturn,
    ClassicalOpInQuantum,
    QuantumOpInClassical,
    UnusedVariable,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::DuplicateInput => "DUPLICATE_INPUT",
            Code::UndeclaredVariable => "UNDECLARED_VARIABLE",
            Code::RedeclaredVariable => "REDECLARED_VARIABLE",
            Code::XorSelfReference => "XOR_SELF_REFERENCE",
            Code::CondAssignsConditionVar => "COND_ASSIGNS_CONDITION_VAR",
            Code::DuplicateMeasure => "DUPLICATE_MEASURE",
            Code::DuplicateReturn => "DUPLICATE_RETURN",
            Code::ClassicalOpInQuantum => "CLASSICAL_OP_IN_QUANTUM",
            Code::QuantumOpInClassical => "QUANTUM_OP_IN_CLASSICAL",
            Code::UnusedVariable => "UNUSED_VARIABLE",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    fn error(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }

    fn warning(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity[code]: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{self}")
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}[{}]: {}",
            self.span.line, self.span.col, self.severity, self.code, self.message
        )
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

/// Check `p` against the rules of `mode`. An empty result means the program
/// is well formed; warnings alone do not block execution.
pub fn validate(p: &Program, mode: Mode) -> Vec<Diagnostic> {
    let mut v = Validator {
        mode,
        declared: BTreeSet::new(),
        diags: Vec::new(),
    };
    v.program(p);
    v.diags.sort_by_key(|d| d.span);
    v.diags
}

struct Validator {
    mode: Mode,
    declared: BTreeSet<String>,
    diags: Vec<Diagnostic>,
}

impl Validator {
    fn program(&mut self, p: &Program) {
        for name in &p.inputs {
            if !self.declared.insert(name.clone()) {
                self.diags.push(Diagnostic::error(
                    Code::DuplicateInput,
                    p.span,
                    format!("input `{name}` is declared more than once"),
                ));
            }
        }

        for (i, stmt) in p.body.iter().enumerate() {
            match stmt {
                Stmt::New { names, span } => {
                    for name in names {
                        if !self.declared.insert(name.clone()) {
                            self.diags.push(Diagnostic::error(
                                Code::RedeclaredVariable,
                                *span,
                                format!("`{name}` is already declared"),
                            ));
                        } else if !used_after(name, &p.body[i + 1..], p) {
                            self.diags.push(Diagnostic::warning(
                                Code::UnusedVariable,
                                *span,
                                format!("`{name}` is allocated but never used"),
                            ));
                        }
                    }
                }
                Stmt::Measure { names, span } => {
                    if self.mode == Mode::Classical {
                        self.diags.push(Diagnostic::error(
                            Code::QuantumOpInClassical,
                            *span,
                            "`measure` is not available in classical mode",
                        ));
                    }
                    self.name_list(names, *span, Code::DuplicateMeasure, "measured");
                }
                Stmt::Comp(c) => self.comp(c),
            }
        }

        if let Some(r) = &p.returns {
            self.name_list(&r.names, r.span, Code::DuplicateReturn, "returned");
        }
    }

    fn name_list(&mut self, names: &[String], span: Span, dup: Code, what: &str) {
        let mut seen = BTreeSet::new();
        for name in names {
            self.require_declared(name, span);
            if !seen.insert(name) {
                self.diags.push(Diagnostic::error(
                    dup,
                    span,
                    format!("`{name}` is {what} more than once"),
                ));
            }
        }
    }

    fn require_declared(&mut self, name: &str, span: Span) {
        if !self.declared.contains(name) {
            self.diags.push(Diagnostic::error(
                Code::UndeclaredVariable,
                span,
                format!("`{name}` is not declared"),
            ));
        }
    }

    fn expr(&mut self, e: &Expr, span: Span) {
        for name in free_vars(e) {
            self.require_declared(&name, span);
        }
    }

    fn comp(&mut self, c: &Comp) {
        let span = c.span;
        match (&c.kind, self.mode) {
            (CompKind::QRand { .. } | CompKind::QNeg, Mode::Classical) => {
                self.diags.push(Diagnostic::error(
                    Code::QuantumOpInClassical,
                    span,
                    "quantum operation is not available in classical mode",
                ));
            }
            (CompKind::Assign { .. } | CompKind::RandBit { .. }, Mode::Quantum) => {
                self.diags.push(Diagnostic::error(
                    Code::ClassicalOpInQuantum,
                    span,
                    "destructive assignment is irreversible; use `x ^= E` or `qrand(x)` in quantum mode",
                ));
            }
            _ => {}
        }

        match &c.kind {
            CompKind::If { cond, body } => {
                self.expr(cond, span);
                if self.mode == Mode::Quantum {
                    let fv = free_vars(cond);
                    let av = assigned_vars(body);
                    let clash: Vec<_> = fv.intersection(&av).cloned().collect();
                    if !clash.is_empty() {
                        self.diags.push(Diagnostic::error(
                            Code::CondAssignsConditionVar,
                            span,
                            format!(
                                "body of `if` assigns {} read by its condition",
                                quote_list(&clash)
                            ),
                        ));
                    }
                }
                for b in body {
                    self.comp(b);
                }
            }
            CompKind::XorAssign { target, rhs } => {
                self.require_declared(target, span);
                self.expr(rhs, span);
                if self.mode == Mode::Quantum && free_vars(rhs).contains(target) {
                    self.diags.push(Diagnostic::error(
                        Code::XorSelfReference,
                        span,
                        format!("`{target} ^= E` requires that E does not mention `{target}`"),
                    ));
                }
            }
            CompKind::Assign { target, rhs } => {
                self.require_declared(target, span);
                self.expr(rhs, span);
            }
            CompKind::QRand { target } | CompKind::RandBit { target } => {
                self.require_declared(target, span);
            }
            CompKind::QNeg => {}
        }
    }
}

fn quote_list(names: &[String]) -> String {
    names
        .iter()
        .map(|n| format!("`{n}`"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn used_after(name: &str, rest: &[Stmt], p: &Program) -> bool {
    let Some(r) = &p.returns else {
        // implicitly returned
        return true;
    };
    if r.names.iter().any(|n| n == name) {
        return true;
    }
    rest.iter().any(|s| match s {
        Stmt::New { .. } => false,
        Stmt::Measure { names, .. } => names.iter().any(|n| n == name),
        Stmt::Comp(c) => comp_mentions(c, name),
    })
}

fn comp_mentions(c: &Comp, name: &str) -> bool {
    match &c.kind {
        CompKind::If { cond, body } => {
            free_vars(cond).contains(name) || body.iter().any(|b| comp_mentions(b, name))
        }
        CompKind::XorAssign { target, rhs } | CompKind::Assign { target, rhs } => {
            target == name || free_vars(rhs).contains(name)
        }
        CompKind::QRand { target } | CompKind::RandBit { target } => target == name,
        CompKind::QNeg => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn codes(src: &str, mode: Mode) -> Vec<Code> {
        validate(&parse(src).unwrap(), mode)
            .into_iter()
            .map(|d| d.code)
            .collect()
    }

    #[test]
    fn interference_example_is_clean() {
        let src = "def main(x,y : bit):\n  qrand_bit(x)\n  if x == 1:\n    qnegate()\n  qrand_bit(x)\n  y ^= x\n  return x,y\n";
        assert!(codes(src, Mode::Quantum).is_empty());
    }

    #[test]
    fn xor_self_reference() {
        assert_eq!(
            codes("def main(x : bit):\n  x ^= x", Mode::Quantum),
            vec![Code::XorSelfReference]
        );
        // relaxed in classical mode
        assert!(codes("def main(x : bit):\n  x ^= x", Mode::Classical).is_empty());
    }

    #[test]
    fn condition_assigned_in_body() {
        let src = "def main(x : bit):\n  if x == 1:\n    qrand_bit(x)";
        assert_eq!(codes(src, Mode::Quantum), vec![Code::CondAssignsConditionVar]);
        let nested = "def main(x, y : bit):\n  if x:\n    if y:\n      x ^= 1";
        assert_eq!(codes(nested, Mode::Quantum), vec![Code::CondAssignsConditionVar]);
    }

    #[test]
    fn scoping_rules() {
        assert_eq!(
            codes("def main(x : bit):\n  y ^= x", Mode::Quantum),
            vec![Code::UndeclaredVariable]
        );
        assert_eq!(
            codes("def main(x : bit):\n  y ^= x\n  new y", Mode::Quantum),
            vec![Code::UndeclaredVariable]
        );
        assert_eq!(
            codes("def main(x : bit):\n  new x", Mode::Quantum),
            vec![Code::RedeclaredVariable]
        );
        assert_eq!(
            codes("def main(x, x : bit):\n  qneg()", Mode::Quantum),
            vec![Code::DuplicateInput]
        );
    }

    #[test]
    fn measure_and_return_lists() {
        assert_eq!(
            codes("def main(x : bit):\n  measure(x, x)", Mode::Quantum),
            vec![Code::DuplicateMeasure]
        );
        assert_eq!(
            codes("def main(x : bit):\n  measure(z)", Mode::Quantum),
            vec![Code::UndeclaredVariable]
        );
        assert_eq!(
            codes("def main(x : bit):\n  qneg()\n  return x, x", Mode::Quantum),
            vec![Code::DuplicateReturn]
        );
    }

    #[test]
    fn mode_restrictions() {
        assert_eq!(
            codes("def main(x : bit):\n  x := rand_bit()", Mode::Quantum),
            vec![Code::ClassicalOpInQuantum]
        );
        assert_eq!(
            codes("def main(x : bit):\n  qrand(x)\n  measure(x)", Mode::Classical),
            vec![Code::QuantumOpInClassical, Code::QuantumOpInClassical]
        );
    }

    #[test]
    fn unused_allocation_warns() {
        let d = validate(
            &parse("def main(x : bit):\n  new t\n  qrand(x)\n  return x").unwrap(),
            Mode::Quantum,
        );
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
        assert_eq!(d[0].code, Code::UnusedVariable);
        assert!(!has_errors(&d));
        // allocation listing from the measurement section: z is written
        let src = "def main (x : bit):\n  new y := not x\n  new z := y\n  return y";
        assert!(codes(src, Mode::Quantum).is_empty());
    }

    #[test]
    fn rendering() {
        let d = validate(&parse("def main(x : bit):\n  x ^= x").unwrap(), Mode::Quantum);
        assert_eq!(
            d[0].render("a.qppl"),
            "a.qppl:2:3: error[XOR_SELF_REFERENCE]: `x ^= E` requires that E does not mention `x`"
        );
    }

    #[test]
    fn idempotent_and_pure() {
        let p = parse("def main(x : bit):\n  if x:\n    qrand(x)\n  new x").unwrap();
        let before = p.clone();
        let a = validate(&p, Mode::Quantum);
        let b = validate(&p, Mode::Quantum);
        assert_eq!(a, b);
        assert_eq!(p, before);
    }
}
