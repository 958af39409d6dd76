//! Example programs shipped with the crate.

use crate::validate::Mode;

#[derive(Debug, Clone, Copy)]
pub struct Example {
    /// File name, e.g. `fig3.qppl`.
    pub name: &'static str,
    pub mode: Mode,
    pub summary: &'static str,
    pub source: &'static str,
}

macro_rules! example {
    ($name:literal, $mode:expr, $summary:literal) => {
        Example {
            name: $name,
            mode: $mode,
            summary: $summary,
            source: include_str!(concat!("../corpus/", $name)),
        }
    };
}

pub const EXAMPLES: &[Example] = &[
    example!("fig2.qppl", Mode::Classical, "classical coin flipped twice and copied"),
    example!("fig3.qppl", Mode::Quantum, "destructive interference leaves |11>"),
    example!("deutsch_const0.qppl", Mode::Quantum, "Deutsch, f(x) = 0"),
    example!("deutsch_const1.qppl", Mode::Quantum, "Deutsch, f(x) = 1"),
    example!("deutsch_id.qppl", Mode::Quantum, "Deutsch, f(x) = x"),
    example!("deutsch_not.qppl", Mode::Quantum, "Deutsch, f(x) = not x"),
    example!("measure_example.qppl", Mode::Quantum, "measurement then per-branch interference"),
    example!("new_return.qppl", Mode::Quantum, "allocation with initializers and discarding return"),
];

/// Look up a bundled example by file name, with or without `.qppl`.
pub fn find(name: &str) -> Option<&'static Example> {
    let base = name.rsplit(['/', '\\']).next().unwrap_or(name);
    EXAMPLES
        .iter()
        .find(|e| e.name == base || e.name.strip_suffix(".qppl") == Some(base))
}
