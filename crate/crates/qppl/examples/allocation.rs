//! `new` appends zero bits, `return` measures and drops everything not
//! returned. Dropping an entangled bit leaves a mixture.
//!
//! cargo run --example allocation

use qppl::{parse, run, run_density};

fn main() -> qppl::Result<()> {
    let copy = parse("def main(x : bit):\n  qrand(x)\n  new y := x\n  return y\n")?;
    let s = run(&copy)?;
    println!("copy then discard x:");
    print!("{}", qppl::format::format_state(&s, "  "));
    println!("density matrix:{}", run_density(&copy)?.matrix());

    let keep = parse("def main(x : bit):\n  qrand(x)\n  new y\n  return x\n")?;
    println!("allocate an unused bit, keep x:");
    print!("{}", qppl::format::format_state(&run(&keep)?, "  "));
    Ok(())
}
