//! Measurement moves amplitude into the outer probability layer. After it,
//! each branch interferes on its own; there is no interference across
//! branches.
//!
//! cargo run --example measurement

use qppl::state::{Environment, TwoLayerState};
use qppl::{apply_measure, parse, trace};

fn main() -> qppl::Result<()> {
    let p = parse("def main(x : bit):\n  qrand_bit(x)\n  measure(x)\n  qrand_bit(x)\n  qrand_bit(x)\n")?;
    println!("initial\n    p=1: 1|0⟩");
    for step in trace(&p)? {
        print!("{step}");
    }

    // measuring only the low bit of a uniform two-bit superposition
    let env = Environment::new(["x", "y"])?;
    let mut s = TwoLayerState::from_branches(env, vec![(1.0, vec![0.5; 4])])?;
    apply_measure(&mut s, &["y"])?;
    println!("\nuniform over x, y after measure(y):");
    print!("{}", qppl::format::format_state(&s, "    "));
    Ok(())
}
