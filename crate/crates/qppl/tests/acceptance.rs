//! Acceptance criteria, one line per criterion. Run with
//! `cargo test -p qppl --test acceptance`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use qppl::gen::{random_comp_body, random_program, GenConfig};
use qppl::state::{Environment, TwoLayerState};
use qppl::{apply_measure, comp_matrix, corpus, parse, run, run_classical, run_density, trace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn program(name: &str) -> qppl::Program {
    parse(corpus::find(name).expect("bundled example").source).expect("parses")
}

/// Largest entrywise gap between a branch list and the expected one.
fn state_gap(s: &TwoLayerState, expected: &[(f64, Vec<f64>)]) -> f64 {
    if s.branches().len() != expected.len() {
        return f64::INFINITY;
    }
    s.branches()
        .iter()
        .zip(expected)
        .map(|(b, (p, amps))| {
            if b.amps.len() != amps.len() {
                return f64::INFINITY;
            }
            b.amps
                .as_slice()
                .iter()
                .zip(amps)
                .map(|(x, y)| (x - y).abs())
                .fold((b.p - p).abs(), f64::max)
        })
        .fold(0.0, f64::max)
}

fn interference() -> Outcome {
    let p = program("fig3");
    let start = Instant::now();
    let s = run(&p).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let gap = state_gap(&s, &[(1.0, vec![0.0, 0.0, 0.0, 1.0])]);
    ensure(gap <= 1e-10, || format!("final state off by {gap:e}"))?;

    let steps = trace(&p).map_err(|e| e.to_string())?;
    let r = FRAC_1_SQRT_2;
    let rows = [
        (0, vec![r, 0.0, r, 0.0]),
        (1, vec![r, 0.0, -r, 0.0]),
    ];
    for (i, amps) in rows {
        let gap = state_gap(&steps[i].state, &[(1.0, amps)]);
        ensure(gap <= 1e-10, || format!("trace row {i} off by {gap:e}"))?;
    }
    ensure(elapsed < Duration::from_millis(10), || format!("took {elapsed:?}"))?;
    Ok(format!("final |11⟩, max gap {gap:.1e}, {elapsed:?}"))
}

fn deutsch() -> Outcome {
    // f(0), f(1) for each oracle
    let cases = [
        ("deutsch_const0", false, false),
        ("deutsch_const1", true, true),
        ("deutsch_id", false, true),
        ("deutsch_not", true, false),
    ];
    let mut slowest = Duration::ZERO;
    for (name, f0, f1) in cases {
        let p = program(name);
        let start = Instant::now();
        let d = run(&p).map_err(|e| e.to_string())?.output_distribution();
        slowest = slowest.max(start.elapsed());
        // final amplitude of |0⟩ is ((-1)^f(0) + (-1)^f(1)) / 2
        let sign = |b: bool| if b { -1.0 } else { 1.0 };
        let a0 = (sign(f0) + sign(f1)) / 2.0;
        let expected = [a0 * a0, 1.0 - a0 * a0];
        let gap = d.probs().iter().zip(expected).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        ensure(gap <= 1e-10, || format!("{name}: {:?}", d.probs()))?;
    }
    ensure(slowest < Duration::from_millis(10), || format!("took {slowest:?}"))?;
    Ok(format!("constant → 0, balanced → 1, slowest {slowest:?}"))
}

fn measurement_trace() -> Outcome {
    let p = program("measure_example");
    let steps = trace(&p).map_err(|e| e.to_string())?;
    let r = FRAC_1_SQRT_2;
    let expected: [Vec<(f64, Vec<f64>)>; 4] = [
        vec![(1.0, vec![r, r])],
        vec![(0.5, vec![1.0, 0.0]), (0.5, vec![0.0, 1.0])],
        vec![(0.5, vec![r, r]), (0.5, vec![r, -r])],
        vec![(0.5, vec![1.0, 0.0]), (0.5, vec![0.0, 1.0])],
    ];
    let initial = TwoLayerState::initial(&p.inputs).map_err(|e| e.to_string())?;
    let mut worst = state_gap(&initial, &[(1.0, vec![1.0, 0.0])]);
    ensure(steps.len() == 4, || format!("{} steps", steps.len()))?;
    for (step, want) in steps.iter().zip(&expected) {
        let gap = state_gap(&step.state, want);
        ensure(gap <= 1e-10, || format!("after `{}`: {:?}", step.statement, step.state.branches()))?;
        worst = worst.max(gap);
    }
    Ok(format!("5 states, max gap {worst:.1e}"))
}

fn classical_coin() -> Outcome {
    let d = run_classical(&program("fig2")).map_err(|e| e.to_string())?;
    let expected = [0.5, 0.0, 0.0, 0.5];
    let gap = d.probs().iter().zip(expected).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    ensure(gap <= 1e-12, || format!("{:?}", d.probs()))?;
    Ok(format!("{{00: ½, 11: ½}}, gap {gap:.1e}"))
}

fn unitarity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let cfg = GenConfig {
        max_statements: 25,
        ..GenConfig::default()
    };
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let bits = rng.gen_range(1..=6);
        let (vars, body) = random_comp_body(&mut rng, bits, &cfg);
        let env = Environment::new(vars).map_err(|e| e.to_string())?;
        let m = comp_matrix(&body, &env).map_err(|e| format!("program {i}: {e}"))?;
        let dim = env.dim();
        let gap = (m.transpose() * &m - DMatrix::<f64>::identity(dim, dim)).amax();
        ensure(gap <= 1e-10, || format!("program {i}: ‖MᵀM − I‖ = {gap:e}"))?;
        worst = worst.max(gap);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("500 programs, max ‖MᵀM − I‖ {worst:.1e}, {elapsed:.2?}"))
}

fn semantics_agree() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let cfg = GenConfig::default();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let (mut measured, mut allocated) = (0, 0);
    for i in 0..200 {
        let p = random_program(&mut rng, &cfg);
        let text = qppl::syntax::pretty_program(&p);
        measured += usize::from(text.contains("measure"));
        allocated += usize::from(text.contains("new"));
        let two_layer = run(&p).map_err(|e| format!("program {i}: {e}"))?.to_density();
        let direct = run_density(&p).map_err(|e| format!("program {i}: {e}"))?;
        let gap = two_layer.max_abs_diff(&direct);
        ensure(gap <= 1e-10, || format!("program {i} differs by {gap:e}:\n{text}"))?;
        worst = worst.max(gap);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "200 programs ({measured} measure, {allocated} new), max gap {worst:.1e}, {elapsed:.2?}"
    ))
}

fn universality() -> Outcome {
    let env = Environment::new(["x", "y", "z"]).map_err(|e| e.to_string())?;
    let p = parse("def main(x, y, z : bit):\n  z ^= x and y\n").map_err(|e| e.to_string())?;
    let body = comps(&p);
    let m = comp_matrix(&body, &env).map_err(|e| e.to_string())?;
    let mut toffoli = DMatrix::<f64>::identity(8, 8);
    toffoli.swap_columns(6, 7);
    ensure(m == toffoli, || format!("Toffoli mismatch:\n{m}"))?;

    let env = Environment::new(["x"]).map_err(|e| e.to_string())?;
    let p = parse("def main(x : bit):\n  qrand(x)\n").map_err(|e| e.to_string())?;
    let h = comp_matrix(&comps(&p), &env).map_err(|e| e.to_string())?;
    let r = FRAC_1_SQRT_2;
    let gap = (h - DMatrix::from_row_slice(2, 2, &[r, r, r, -r])).amax();
    ensure(gap <= 1e-15, || format!("H off by {gap:e}"))?;
    Ok(format!("Toffoli exact, H gap {gap:.1e}"))
}

fn comps(p: &qppl::Program) -> Vec<qppl::Comp> {
    p.body
        .iter()
        .filter_map(|s| match s {
            qppl::Stmt::Comp(c) => Some(c.clone()),
            _ => None,
        })
        .collect()
}

/// Measurement by brute force: group each branch's worlds by the value of
/// the measured bits, square the group mass into probability, renormalise
/// the amplitudes, drop empty groups.
fn grouped(env: &Environment, branches: &[(f64, Vec<f64>)], measured: &[&str]) -> Vec<(f64, Vec<f64>)> {
    let value = |k: usize| -> Vec<bool> { measured.iter().map(|v| env.value(v, k).unwrap()).collect() };
    let mut out = Vec::new();
    for (p, amps) in branches {
        let mut groups: Vec<Vec<bool>> = (0..amps.len()).map(value).collect();
        groups.sort();
        groups.dedup();
        for g in groups {
            let members: Vec<usize> = (0..amps.len()).filter(|&k| value(k) == g).collect();
            let mass: f64 = members.iter().map(|&k| amps[k] * amps[k]).sum();
            if p * mass <= 1e-12 {
                continue;
            }
            let mut v = vec![0.0; amps.len()];
            for k in members {
                v[k] = amps[k] / mass.sqrt();
            }
            out.push((p * mass, v));
        }
    }
    let total: f64 = out.iter().map(|b| b.0).sum();
    out.into_iter().map(|(p, v)| (p / total, v)).collect()
}

fn partial_measurement() -> Outcome {
    let env = Environment::new(["x", "y"]).map_err(|e| e.to_string())?;
    let initial = vec![(1.0, vec![0.5; 4])];
    let mut s = TwoLayerState::from_branches(env.clone(), initial.clone()).map_err(|e| e.to_string())?;
    apply_measure(&mut s, &["y"]).map_err(|e| e.to_string())?;
    let r = FRAC_1_SQRT_2;
    let hand = [(0.5, vec![r, 0.0, r, 0.0]), (0.5, vec![0.0, r, 0.0, r])];
    let oracle = grouped(&env, &initial, &["y"]);
    let mut worst = state_gap(&s, &oracle).max(state_gap(&s, &hand));
    ensure(worst <= 1e-12, || format!("{:?}", s.branches()))?;

    // the same comparison on arbitrary multi-branch states
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let env = Environment::new(["a", "b", "c"]).map_err(|e| e.to_string())?;
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let branches: Vec<(f64, Vec<f64>)> = (0..n)
            .map(|_| {
                let raw: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
                (1.0 / n as f64, raw.into_iter().map(|v| v / norm).collect())
            })
            .collect();
        let pool = ["a", "b", "c"];
        let measured: Vec<&str> = pool.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let mut s = TwoLayerState::from_branches(env.clone(), branches.clone()).map_err(|e| e.to_string())?;
        apply_measure(&mut s, &measured).map_err(|e| e.to_string())?;
        let gap = state_gap(&s, &grouped(&env, &branches, &measured));
        ensure(gap <= 1e-12, || format!("measuring {measured:?} off by {gap:e}"))?;
        worst = worst.max(gap);
    }
    Ok(format!("hand example and 200 random states, max gap {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("interference program ends in |11⟩", interference),
        ("Deutsch with all four oracles", deutsch),
        ("measurement example trace", measurement_trace),
        ("classical coin copy", classical_coin),
        ("computational sequences are orthogonal", unitarity),
        ("two-layer and density semantics agree", semantics_agree),
        ("Toffoli and Hadamard witnesses", universality),
        ("partial measurement vs grouping oracle", partial_measurement),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
