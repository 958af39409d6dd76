//! Every computational sequence denotes an orthogonal matrix. Toffoli and
//! Hadamard are expressible directly, and random programs stay orthogonal.
//!
//! cargo run --example universality

use nalgebra::DMatrix;
use qppl::gen::{random_comp_body, GenConfig};
use qppl::state::Environment;
use qppl::syntax::pretty_comp;
use qppl::{comp_matrix, comp_unitary, parse, Stmt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qppl::Result<()> {
    let p = parse("def main(x, y, z : bit):\n  z ^= x and y\n")?;
    let Stmt::Comp(toffoli) = &p.body[0] else { unreachable!() };
    let env = Environment::new(["x", "y", "z"])?;
    println!("z ^= x and y:{}", comp_matrix(std::slice::from_ref(toffoli), &env)?);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (vars, body) = random_comp_body(&mut rng, 3, &GenConfig { max_statements: 8, ..GenConfig::default() });
    println!("random body over {vars:?}:");
    for c in &body {
        println!("  {}", pretty_comp(c).replace('\n', "\n  "));
    }
    let env = Environment::new(vars.clone())?;
    let m = comp_matrix(&body, &env)?;
    let dim = env.dim();
    println!("‖MᵀM − I‖_max = {:.2e}", (m.transpose() * &m - DMatrix::<f64>::identity(dim, dim)).amax());
    println!("engine vs rule-built matrix: {:.2e}", (m - comp_unitary(&body, &vars)?).amax());
    Ok(())
}
