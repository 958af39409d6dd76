//! Deutsch's problem with the oracle written inline as a condition on `x`.
//! One query decides whether `f` is constant (output 0) or balanced
//! (output 1).
//!
//! cargo run --example deutsch

use qppl::{parse, run};

fn main() -> qppl::Result<()> {
    let oracles = [("f(x) = 0", "0"), ("f(x) = 1", "1"), ("f(x) = x", "x"), ("f(x) = not x", "not x")];
    for (label, f) in oracles {
        let src = format!("def main(x : bit):\n  qrand_bit(x)\n  if {f}:\n    qnegate()\n  qrand_bit(x)\n  return x\n");
        let dist = run(&parse(&src)?)?.output_distribution();
        let verdict = if dist.get(1) > 0.5 { "balanced" } else { "constant" };
        println!("{label:<14} P(x=0) = {:.6}  -> {verdict}", dist.get(0));
    }
    Ok(())
}
