use std::collections::BTreeSet;
use std::fmt;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Boolean expressions over bit variables. Comparison and xor sugar is
/// expanded by the parser, so only these constructors ever reach the
/// interpreters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Const(bool),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        Expr::Or(Box::new(a), Box::new(b))
    }

    /// `a xor b` expanded into the core connectives.
    pub fn xor(a: Expr, b: Expr) -> Self {
        match (a, b) {
            (e, Expr::Const(false)) | (Expr::Const(false), e) => e,
            (e, Expr::Const(true)) | (Expr::Const(true), e) => Expr::not(e),
            (a, b) => Expr::or(
                Expr::and(a.clone(), Expr::not(b.clone())),
                Expr::and(Expr::not(a), b),
            ),
        }
    }

    /// `a == b` expanded into the core connectives.
    pub fn equiv(a: Expr, b: Expr) -> Self {
        match (a, b) {
            (e, Expr::Const(true)) | (Expr::Const(true), e) => e,
            (e, Expr::Const(false)) | (Expr::Const(false), e) => Expr::not(e),
            (a, b) => Expr::or(
                Expr::and(a.clone(), b.clone()),
                Expr::and(Expr::not(a), Expr::not(b)),
            ),
        }
    }
}

/// Computational statements: the only statements allowed inside `if`.
#[derive(Debug, Clone, PartialEq)]
pub struct Comp {
    pub kind: CompKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CompKind {
    If { cond: Expr, body: Vec<Comp> },
    XorAssign { target: String, rhs: Expr },
    QRand { target: String },
    QNeg,
    /// Classical destructive assignment `x := E`.
    Assign { target: String, rhs: Expr },
    /// Classical coin flip `x := rand_bit()`.
    RandBit { target: String },
}

impl Comp {
    pub fn new(kind: CompKind) -> Self {
        Comp {
            kind,
            span: Span::default(),
        }
    }

    pub fn at(kind: CompKind, span: Span) -> Self {
        Comp { kind, span }
    }

    pub fn is_classical_only(&self) -> bool {
        matches!(self.kind, CompKind::Assign { .. } | CompKind::RandBit { .. })
    }

    pub fn is_quantum_only(&self) -> bool {
        matches!(self.kind, CompKind::QRand { .. } | CompKind::QNeg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    New { names: Vec<String>, span: Span },
    Measure { names: Vec<String>, span: Span },
    Comp(Comp),
}

impl Stmt {
    pub fn span(&self) -> Span {
        match self {
            Stmt::New { span, .. } | Stmt::Measure { span, .. } => *span,
            Stmt::Comp(c) => c.span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Return {
    pub names: Vec<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub inputs: Vec<String>,
    pub body: Vec<Stmt>,
    /// `None` means every live variable is returned.
    pub returns: Option<Return>,
    pub span: Span,
}

impl Program {
    /// Copy of the tree with every span reset, for structural comparison.
    pub fn without_spans(&self) -> Program {
        fn comp(c: &Comp) -> Comp {
            let kind = match &c.kind {
                CompKind::If { cond, body } => CompKind::If {
                    cond: cond.clone(),
                    body: body.iter().map(comp).collect(),
                },
                k => k.clone(),
            };
            Comp::new(kind)
        }
        Program {
            inputs: self.inputs.clone(),
            body: self
                .body
                .iter()
                .map(|s| match s {
                    Stmt::New { names, .. } => Stmt::New {
                        names: names.clone(),
                        span: Span::default(),
                    },
                    Stmt::Measure { names, .. } => Stmt::Measure {
                        names: names.clone(),
                        span: Span::default(),
                    },
                    Stmt::Comp(c) => Stmt::Comp(comp(c)),
                })
                .collect(),
            returns: self.returns.as_ref().map(|r| Return {
                names: r.names.clone(),
                span: Span::default(),
            }),
            span: Span::default(),
        }
    }

    /// Every variable the program declares, in declaration order.
    pub fn declared_vars(&self) -> Vec<String> {
        let mut out = self.inputs.clone();
        for s in &self.body {
            if let Stmt::New { names, .. } = s {
                out.extend(names.iter().cloned());
            }
        }
        out
    }
}

/// FV(e): the variables read by an expression.
pub fn free_vars(e: &Expr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(e, &mut out);
    out
}

fn collect_free(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Var(x) => {
            out.insert(x.clone());
        }
        Expr::Const(_) => {}
        Expr::Not(a) => collect_free(a, out),
        Expr::And(a, b) | Expr::Or(a, b) => {
            collect_free(a, out);
            collect_free(b, out);
        }
    }
}

/// AV(C̄): the variables written by a sequence of computational statements.
pub fn assigned_vars(cs: &[Comp]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for c in cs {
        collect_assigned(c, &mut out);
    }
    out
}

fn collect_assigned(c: &Comp, out: &mut BTreeSet<String>) {
    match &c.kind {
        CompKind::If { body, .. } => {
            for b in body {
                collect_assigned(b, out);
            }
        }
        CompKind::XorAssign { target, .. }
        | CompKind::QRand { target }
        | CompKind::Assign { target, .. }
        | CompKind::RandBit { target } => {
            out.insert(target.clone());
        }
        CompKind::QNeg => {}
    }
}
