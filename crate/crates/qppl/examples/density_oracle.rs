//! The density-matrix semantics as a cross-check. Two different ensembles
//! can have the same density matrix: the two-layer state keeps them apart,
//! the density matrix does not.
//!
//! cargo run --example density_oracle

use qppl::state::{Environment, TwoLayerState};
use qppl::{check_equivalence, corpus, parse, Mode};

fn main() -> qppl::Result<()> {
    for e in corpus::EXAMPLES.iter().filter(|e| e.mode == Mode::Quantum) {
        let dev = check_equivalence(&parse(e.source)?)?;
        println!("{:<22} max |ρ_two-layer − ρ_direct| = {dev:.2e}", e.name);
    }

    let env = Environment::new(["x"])?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let basis = TwoLayerState::from_branches(env.clone(), vec![(0.5, vec![1.0, 0.0]), (0.5, vec![0.0, 1.0])])?;
    let signs = TwoLayerState::from_branches(env, vec![(0.5, vec![r, r]), (0.5, vec![r, -r])])?;
    println!("\n[(½,|0⟩),(½,|1⟩)] →{}", basis.to_density().matrix());
    println!("[(½,|+⟩),(½,|−⟩)] →{}", signs.to_density().matrix());
    println!("same density: {}", basis.to_density().max_abs_diff(&signs.to_density()) < 1e-12);
    Ok(())
}
