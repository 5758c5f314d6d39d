//! The coordinate poll set and its gradient-pruned subsets.
//!
//!     cargo run --example pruning

use dms::problems::find_problem;
use dms::solver::{generate_pss, prune};

fn show(label: &str, dirs: &[Vec<f64>]) {
    let list: Vec<String> = dirs.iter().map(|d| format!("{d:?}")).collect();
    println!("{label:<28} {}", list.join(" "));
}

fn main() -> dms::Result<()> {
    let full = generate_pss(2)?;
    show("full set", full.as_slice());

    // a single gradient keeps only the directions with a positive descent product
    show("grad f = (1, 0)", prune(&full, &[vec![1.0, 0.0]])?.as_slice());
    show("grad f = (1, -2)", prune(&full, &[vec![1.0, -2.0]])?.as_slice());

    // with several objectives a direction survives if it descends for any of them
    show("grads (1, 0) and (0, 1)", prune(&full, &[vec![1.0, 0.0], vec![0.0, 1.0]])?.as_slice());
    show("grads (1, 1) and (-1, -1)", prune(&full, &[vec![1.0, 1.0], vec![-1.0, -1.0]])?.as_slice());

    // at a stationary point nothing is left and the solver polls the full set instead
    println!("{:<28} {} directions", "zero gradient", prune(&full, &[vec![0.0, 0.0]])?.len());

    let sp1 = find_problem("SP1")?;
    let x = [0.5, 2.0];
    let grads = sp1.gradient(&x)?;
    show(&format!("SP1 at {x:?}"), prune(&full, &grads)?.as_slice());
    Ok(())
}
