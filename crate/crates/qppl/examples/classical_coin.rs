//! The classical fragment: destructive assignment and fair coins, run on
//! probability vectors.
//!
//! cargo run --example classical_coin

use qppl::{parse, trace_classical};

fn main() -> qppl::Result<()> {
    let p = parse("def main(x, y : bit):\n  x := rand_bit()\n  x := rand_bit()\n  y := x\n  return x, y\n")?;
    for step in trace_classical(&p)? {
        print!("{step}");
    }
    // the quantum interpreter refuses destructive assignment
    if let Err(qppl::Error::Invalid(diags)) = qppl::run(&p) {
        println!("\nrejected in quantum mode:");
        for d in diags {
            println!("  {d}");
        }
    }
    Ok(())
}
