//! Seeded sampling from the exact output distribution. The same seed gives
//! the same stream.
//!
//! cargo run --example sampling -- 7 20

use qppl::sample::{render_outcome, sample};
use qppl::{parse, run};

fn main() -> qppl::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let shots = args.next().and_then(|s| s.parse().ok()).unwrap_or(16);

    let p = parse("def main(x, y : bit):\n  qrand(x)\n  qrand(y)\n  if x and y:\n    qneg()\n  qrand(y)\n")?;
    let dist = run(&p)?.output_distribution();
    print!("{dist}");
    let draws = sample(&dist, seed, shots);
    let line: Vec<String> = draws.iter().map(|&k| render_outcome(dist.env(), k)).collect();
    println!("seed {seed}: {}", line.join(" "));
    Ok(())
}
