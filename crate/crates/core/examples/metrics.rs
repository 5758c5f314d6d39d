//! Front quality metrics on two small hand-made fronts, and the exact
//! hypervolume in two and three objectives.
//!
//!     cargo run --example metrics

use dms::metrics::{build_reference_front, delta_spread, extreme_points, gamma_spread, hypervolume, purity, score_problem};
use dms::{Front, ObjectiveVector};

fn front(points: &[&[f64]]) -> Front {
    Front::new(points.iter().map(|p| ObjectiveVector::from(*p)).collect()).expect("uniform dimension")
}

fn main() -> dms::Result<()> {
    let a = front(&[&[0.0, 1.0], &[0.5, 0.6], &[1.0, 0.0]]);
    let b = front(&[&[0.2, 0.8], &[0.5, 0.5]]);

    let reference = build_reference_front(&[a.clone(), b.clone()])?;
    let ext = extreme_points(&reference).expect("nonempty reference");
    let points: Vec<&[f64]> = reference.points().iter().map(|p| p.as_slice()).collect();
    println!("reference front: {points:?}");
    println!("extremes: min {:?} max {:?}", ext.min, ext.max);
    for (name, f) in [("a", &a), ("b", &b)] {
        println!(
            "{name}: purity {:?} gamma {:?} delta {:?}",
            purity(f, &reference),
            gamma_spread(f, &ext),
            delta_spread(f, &ext)
        );
    }

    println!("hv 2d: {}", hypervolume(&[[0.0, 0.5], [0.5, 0.0]], &[1.0, 1.0])?);
    println!("hv 3d: {}", hypervolume(&[[0.0, 0.5, 0.5], [0.5, 0.0, 0.5]], &[1.0, 1.0, 1.0])?);

    // the full report: reference point and ideal are taken from the union
    for r in score_problem("toy", &[("a".into(), a), ("b".into(), b)], None)? {
        println!("{}", serde_json::to_string(&r).expect("serializable"));
    }
    Ok(())
}
