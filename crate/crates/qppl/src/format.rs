//! Text rendering of states in the row layout used by `--trace`.

use std::fmt::{self, Write};

use crate::classical::ClassicalTraceStep;
use crate::engine::TraceStep;
use crate::state::{Branch, Distribution, Environment, TwoLayerState};

/// Amplitudes with magnitude at or below this are left out of a row.
const HIDE_BELOW: f64 = 1e-12;

/// `%g`-style rendering with six significant digits.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        let s = format!("{v:.5e}");
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        return format!("{}e{}", trim_zeros(mantissa), e);
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn ket(env: &Environment, k: usize) -> String {
    format!("|{}⟩", env.bits(k))
}

/// Signed weighted sum such as `0.707107|00⟩ - 0.707107|10⟩`.
fn weighted_sum(env: &Environment, weights: &[f64]) -> String {
    let mut out = String::new();
    for (k, w) in weights.iter().enumerate() {
        if w.abs() <= HIDE_BELOW {
            continue;
        }
        if out.is_empty() {
            out.push_str(&fmt_sig(*w));
        } else {
            out.push_str(if *w < 0.0 { " - " } else { " + " });
            out.push_str(&fmt_sig(w.abs()));
        }
        out.push_str(&ket(env, k));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `p=<prob>: <amp>|bits⟩ + ...`
pub fn format_branch(env: &Environment, b: &Branch) -> String {
    format!("p={}: {}", fmt_sig(b.p), weighted_sum(env, b.amps.as_slice()))
}

/// One line per branch, each prefixed by `indent`.
pub fn format_state(s: &TwoLayerState, indent: &str) -> String {
    let mut out = String::new();
    for b in s.branches() {
        let _ = writeln!(out, "{indent}{}", format_branch(s.env(), b));
    }
    out
}

/// Probability-weighted row such as `0.5|00⟩ + 0.5|11⟩`.
pub fn format_distribution_row(d: &Distribution) -> String {
    weighted_sum(d.env(), d.probs())
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.statement)?;
        f.write_str(&format_state(&self.state, "    "))
    }
}

impl fmt::Display for ClassicalTraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.statement)?;
        writeln!(f, "    {}", format_distribution_row(&self.dist))
    }
}
