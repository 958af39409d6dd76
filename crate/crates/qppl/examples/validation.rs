//! Static checks: the side conditions that keep every statement
//! reversible, scoping, and mode restrictions.
//!
//! cargo run --example validation

use qppl::{parse, validate, Mode};

fn main() {
    let programs = [
        ("self.qppl", "def main(x : bit):\n  x ^= x and 1\n"),
        ("cond.qppl", "def main(x, y : bit):\n  if x:\n    x ^= y\n"),
        ("scope.qppl", "def main(x : bit):\n  y ^= x\n  new x\n"),
        ("mode.qppl", "def main(x : bit):\n  x := rand_bit()\n"),
        ("unused.qppl", "def main(x : bit):\n  new t\n  qrand(x)\n  return x\n"),
        ("measure.qppl", "def main(x : bit):\n  if x:\n    measure(x)\n"),
    ];
    for (file, src) in programs {
        match parse(src) {
            Err(e) => println!("{file}:{e}"),
            Ok(p) => {
                for d in validate(&p, Mode::Quantum) {
                    println!("{}", d.render(file));
                }
            }
        }
    }
}
