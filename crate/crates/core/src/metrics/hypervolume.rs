//! Exact hypervolume for one, two and three objectives.
//!
//! Two objectives use a sort-and-sweep over the staircase; three objectives
//! sweep along the last objective and sum slab areas computed in 2D.

use crate::error::{DmsError, Result};

/// Lebesgue measure of the union of boxes `[x, reference]` over `points`.
///
/// Points that are not strictly below `reference` in every objective span a
/// degenerate or empty box and are skipped.
pub fn hypervolume<V: AsRef<[f64]>>(points: &[V], reference: &[f64]) -> Result<f64> {
    let p = reference.len();
    if let Some(bad) = points.iter().find(|x| x.as_ref().len() != p) {
        return Err(DmsError::Dimension {
            expected: p,
            found: bad.as_ref().len(),
        });
    }
    let inside: Vec<&[f64]> = points
        .iter()
        .map(AsRef::as_ref)
        .filter(|x| x.iter().zip(reference).all(|(v, r)| v < r))
        .collect();
    match p {
        1 => Ok(inside.iter().map(|x| reference[0] - x[0]).fold(0.0, f64::max)),
        2 => {
            let mut pts: Vec<[f64; 2]> = inside.iter().map(|x| [x[0], x[1]]).collect();
            Ok(area_2d(&mut pts, [reference[0], reference[1]]))
        }
        3 => Ok(volume_3d(&inside, reference)),
        _ => Err(DmsError::Dimension { expected: 3, found: p }),
    }
}

fn area_2d(pts: &mut [[f64; 2]], reference: [f64; 2]) -> f64 {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut ceiling = reference[1];
    let mut area = 0.0;
    for q in pts.iter() {
        if q[1] < ceiling {
            area += (reference[0] - q[0]) * (ceiling - q[1]);
            ceiling = q[1];
        }
    }
    area
}

fn volume_3d(pts: &[&[f64]], reference: &[f64]) -> f64 {
    let mut order: Vec<&[f64]> = pts.to_vec();
    order.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut volume = 0.0;
    let mut slab: Vec<[f64; 2]> = Vec::with_capacity(order.len());
    for (k, q) in order.iter().enumerate() {
        slab.push([q[0], q[1]]);
        let top = order.get(k + 1).map_or(reference[2], |next| next[2]);
        let height = top - q[2];
        if height > 0.0 {
            volume += area_2d(&mut slab, [reference[0], reference[1]]) * height;
        }
    }
    volume
}
