//! Destructive interference: two Hadamards around a conditional sign flip
//! send `x` to 1 with certainty, and `y ^= x` copies it.
//!
//! cargo run --example interference

use qppl::format::format_state;
use qppl::{parse, trace};

const SRC: &str = "\
def main(x, y : bit):
  qrand_bit(x)
  if x == 1:
    qnegate()
  qrand_bit(x)
  y ^= x
  return x, y
";

fn main() -> qppl::Result<()> {
    let p = parse(SRC)?;
    for step in trace(&p)? {
        print!("{step}");
    }
    let last = qppl::run(&p)?;
    println!("\nfinal state:\n{}", format_state(&last, "  "));
    print!("{}", last.output_distribution());
    Ok(())
}
