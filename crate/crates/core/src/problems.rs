//! Benchmark problems with analytic gradients.
//!
//! Formulas follow the usual published definitions of each problem, all
//! posed as minimization over a box.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{DmsError, Result};
use crate::pareto::{BoxDomain, ObjectiveVector};

type ObjectiveFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;

/// A box-constrained multiobjective problem `min F(x) = (f_1(x), ..., f_p(x))`.
#[derive(Clone)]
pub struct MooProblem {
    id: String,
    n_objectives: usize,
    domain: BoxDomain,
    objectives: ObjectiveFn,
    gradient: Option<GradientFn>,
}

impl fmt::Debug for MooProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MooProblem")
            .field("id", &self.id)
            .field("n", &self.dim())
            .field("p", &self.n_objectives)
            .field("has_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl MooProblem {
    pub fn new<F>(id: impl Into<String>, domain: BoxDomain, n_objectives: usize, objectives: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        assert!(n_objectives >= 1, "a problem needs at least one objective");
        Self {
            id: id.into(),
            n_objectives,
            domain,
            objectives: Arc::new(objectives),
            gradient: None,
        }
    }

    /// Attaches analytic gradients; `gradient(x)[i]` must be `∇f_i(x)`.
    pub fn with_gradient<G>(mut self, gradient: G) -> Self
    where
        G: Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn n_objectives(&self) -> usize {
        self.n_objectives
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<ObjectiveVector> {
        self.check_point(x)?;
        Ok(self.evaluate_unchecked(x))
    }

    /// Evaluates without the feasibility check. The caller guarantees `x` is in the box.
    pub(crate) fn evaluate_unchecked(&self, x: &[f64]) -> ObjectiveVector {
        let values = (self.objectives)(x);
        assert_eq!(
            values.len(),
            self.n_objectives,
            "problem `{}` returned the wrong number of objectives",
            self.id
        );
        values.into()
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let grad = self
            .gradient
            .as_ref()
            .ok_or_else(|| DmsError::MissingGradient(self.id.clone()))?;
        self.check_point(x)?;
        Ok(grad(x))
    }

    /// Largest relative error between the analytic partials and central
    /// differences with step `h`. Denominators are floored at 1.
    pub fn check_gradient(&self, x: &[f64], h: f64) -> Result<f64> {
        let analytic = self.gradient(x)?;
        let mut probe = x.to_vec();
        let mut worst = 0.0f64;
        for j in 0..x.len() {
            probe[j] = x[j] + h;
            let forward = self.evaluate(&probe)?;
            probe[j] = x[j] - h;
            let backward = self.evaluate(&probe)?;
            probe[j] = x[j];
            for i in 0..self.n_objectives {
                let fd = (forward[i] - backward[i]) / (2.0 * h);
                let exact = analytic[i][j];
                worst = worst.max((exact - fd).abs() / exact.abs().max(1.0));
            }
        }
        Ok(worst)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(DmsError::Dimension {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if !self.domain.contains(x) {
            return Err(DmsError::Domain);
        }
        Ok(())
    }
}

fn square_box(n: usize, lo: f64, hi: f64) -> BoxDomain {
    BoxDomain::uniform(n, lo, hi).expect("catalog bounds are valid")
}

/// The twelve benchmark problems shipped with the crate.
pub fn catalog() -> Vec<MooProblem> {
    vec![
        bk1(),
        sp1(),
        fonseca_fleming("Fonseca", 2),
        fonseca_fleming("MOP2", 4),
        mop3(),
        mop7(),
        jin1(),
        lovison1(),
        ssfyy1(),
        mhhm2(),
        vfm1(),
        zdt2(30),
    ]
}

/// Looks a catalog problem up by id (case-insensitive).
pub fn find_problem(id: &str) -> Result<MooProblem> {
    catalog()
        .into_iter()
        .find(|p| p.id().eq_ignore_ascii_case(id))
        .ok_or_else(|| {
            let known: Vec<String> = catalog().iter().map(|p| p.id().to_string()).collect();
            DmsError::Config(format!("unknown problem `{id}`; valid ids: {}", known.join(", ")))
        })
}

pub fn bk1() -> MooProblem {
    MooProblem::new("BK1", square_box(2, -5.0, 10.0), 2, |x| {
        vec![
            x[0] * x[0] + x[1] * x[1],
            (x[0] - 5.0).powi(2) + (x[1] - 5.0).powi(2),
        ]
    })
    .with_gradient(|x| {
        vec![
            vec![2.0 * x[0], 2.0 * x[1]],
            vec![2.0 * (x[0] - 5.0), 2.0 * (x[1] - 5.0)],
        ]
    })
}

pub fn sp1() -> MooProblem {
    MooProblem::new("SP1", square_box(2, -1.0, 5.0), 2, |x| {
        let d = x[0] - x[1];
        vec![(x[0] - 1.0).powi(2) + d * d, (x[1] - 3.0).powi(2) + d * d]
    })
    .with_gradient(|x| {
        let d = x[0] - x[1];
        vec![
            vec![2.0 * (x[0] - 1.0) + 2.0 * d, -2.0 * d],
            vec![2.0 * d, 2.0 * (x[1] - 3.0) - 2.0 * d],
        ]
    })
}

/// Fonseca–Fleming on `[-4, 4]^n`.
pub fn fonseca_fleming(id: &str, n: usize) -> MooProblem {
    let c = 1.0 / (n as f64).sqrt();
    let sums = move |x: &[f64]| {
        x.iter().fold((0.0, 0.0), |(a, b), &v| {
            (a + (v - c).powi(2), b + (v + c).powi(2))
        })
    };
    MooProblem::new(id, square_box(n, -4.0, 4.0), 2, move |x| {
        let (s1, s2) = sums(x);
        vec![1.0 - (-s1).exp(), 1.0 - (-s2).exp()]
    })
    .with_gradient(move |x| {
        let (s1, s2) = sums(x);
        let (e1, e2) = ((-s1).exp(), (-s2).exp());
        vec![
            x.iter().map(|v| 2.0 * e1 * (v - c)).collect(),
            x.iter().map(|v| 2.0 * e2 * (v + c)).collect(),
        ]
    })
}

fn poloni_terms(x1: f64, x2: f64) -> (f64, f64) {
    (
        0.5 * x1.sin() - 2.0 * x1.cos() + x2.sin() - 1.5 * x2.cos(),
        1.5 * x1.sin() - x1.cos() + 2.0 * x2.sin() - 0.5 * x2.cos(),
    )
}

/// Poloni's problem.
pub fn mop3() -> MooProblem {
    let (a1, a2) = poloni_terms(1.0, 2.0);
    MooProblem::new("MOP3", square_box(2, -PI, PI), 2, move |x| {
        let (b1, b2) = poloni_terms(x[0], x[1]);
        vec![
            1.0 + (a1 - b1).powi(2) + (a2 - b2).powi(2),
            (x[0] + 3.0).powi(2) + (x[1] + 1.0).powi(2),
        ]
    })
    .with_gradient(move |x| {
        let (b1, b2) = poloni_terms(x[0], x[1]);
        let (s1, c1, s2, c2) = (x[0].sin(), x[0].cos(), x[1].sin(), x[1].cos());
        let db1 = [0.5 * c1 + 2.0 * s1, c2 + 1.5 * s2];
        let db2 = [1.5 * c1 + s1, 2.0 * c2 + 0.5 * s2];
        let g1 = (0..2)
            .map(|k| -2.0 * (a1 - b1) * db1[k] - 2.0 * (a2 - b2) * db2[k])
            .collect();
        vec![g1, vec![2.0 * (x[0] + 3.0), 2.0 * (x[1] + 1.0)]]
    })
}

pub fn mop7() -> MooProblem {
    MooProblem::new("MOP7", square_box(2, -400.0, 400.0), 3, |x| {
        let (x1, x2) = (x[0], x[1]);
        vec![
            (x1 - 2.0).powi(2) / 2.0 + (x2 + 1.0).powi(2) / 13.0 + 3.0,
            (x1 + x2 - 3.0).powi(2) / 36.0 + (-x1 + x2 + 2.0).powi(2) / 8.0 - 17.0,
            (x1 + 2.0 * x2 - 1.0).powi(2) / 175.0 + (2.0 * x2 - x1).powi(2) / 17.0 - 13.0,
        ]
    })
    .with_gradient(|x| {
        let (x1, x2) = (x[0], x[1]);
        let a = x1 + x2 - 3.0;
        let b = -x1 + x2 + 2.0;
        let c = x1 + 2.0 * x2 - 1.0;
        let d = 2.0 * x2 - x1;
        vec![
            vec![x1 - 2.0, 2.0 * (x2 + 1.0) / 13.0],
            vec![a / 18.0 - b / 4.0, a / 18.0 + b / 4.0],
            vec![2.0 * c / 175.0 - 2.0 * d / 17.0, 4.0 * c / 175.0 + 4.0 * d / 17.0],
        ]
    })
}

pub fn jin1() -> MooProblem {
    MooProblem::new("Jin1", square_box(2, 0.0, 1.0), 2, |x| {
        let n = x.len() as f64;
        vec![
            x.iter().map(|v| v * v).sum::<f64>() / n,
            x.iter().map(|v| (v - 2.0).powi(2)).sum::<f64>() / n,
        ]
    })
    .with_gradient(|x| {
        let n = x.len() as f64;
        vec![
            x.iter().map(|v| 2.0 * v / n).collect(),
            x.iter().map(|v| 2.0 * (v - 2.0) / n).collect(),
        ]
    })
}

pub fn lovison1() -> MooProblem {
    MooProblem::new("lovison1", square_box(2, 0.0, 3.0), 2, |x| {
        vec![
            1.05 * x[0] * x[0] + 0.98 * x[1] * x[1],
            0.99 * (x[0] - 3.0).powi(2) + 1.03 * (x[1] - 2.5).powi(2),
        ]
    })
    .with_gradient(|x| {
        vec![
            vec![2.1 * x[0], 1.96 * x[1]],
            vec![1.98 * (x[0] - 3.0), 2.06 * (x[1] - 2.5)],
        ]
    })
}

pub fn ssfyy1() -> MooProblem {
    MooProblem::new("SSFYY1", square_box(2, -100.0, 100.0), 2, |x| {
        vec![
            x[0] * x[0] + x[1] * x[1],
            (x[0] - 1.0).powi(2) + (x[1] - 2.0).powi(2),
        ]
    })
    .with_gradient(|x| {
        vec![
            vec![2.0 * x[0], 2.0 * x[1]],
            vec![2.0 * (x[0] - 1.0), 2.0 * (x[1] - 2.0)],
        ]
    })
}

const MHHM2_CENTERS: [[f64; 2]; 3] = [[0.8, 0.6], [0.85, 0.7], [0.9, 0.6]];

pub fn mhhm2() -> MooProblem {
    MooProblem::new("MHHM2", square_box(2, 0.0, 1.0), 3, |x| {
        MHHM2_CENTERS
            .iter()
            .map(|c| (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2))
            .collect()
    })
    .with_gradient(|x| {
        MHHM2_CENTERS
            .iter()
            .map(|c| vec![2.0 * (x[0] - c[0]), 2.0 * (x[1] - c[1])])
            .collect()
    })
}

/// Viennet's first problem.
pub fn vfm1() -> MooProblem {
    MooProblem::new("VFM1", square_box(2, -2.0, 2.0), 3, |x| {
        vec![
            x[0] * x[0] + (x[1] - 1.0).powi(2),
            x[0] * x[0] + (x[1] + 1.0).powi(2) + 1.0,
            (x[0] - 1.0).powi(2) + x[1] * x[1] + 2.0,
        ]
    })
    .with_gradient(|x| {
        vec![
            vec![2.0 * x[0], 2.0 * (x[1] - 1.0)],
            vec![2.0 * x[0], 2.0 * (x[1] + 1.0)],
            vec![2.0 * (x[0] - 1.0), 2.0 * x[1]],
        ]
    })
}

/// ZDT2 on `[0, 1]^n`. The Pareto set is `x_1 ∈ [0, 1]`, `x_2 = ... = x_n = 0`.
pub fn zdt2(n: usize) -> MooProblem {
    assert!(n >= 2);
    let scale = 9.0 / (n - 1) as f64;
    MooProblem::new("ZDT2", square_box(n, 0.0, 1.0), 2, move |x| {
        let g = 1.0 + scale * x[1..].iter().sum::<f64>();
        vec![x[0], g - x[0] * x[0] / g]
    })
    .with_gradient(move |x| {
        let g = 1.0 + scale * x[1..].iter().sum::<f64>();
        let mut df1 = vec![0.0; x.len()];
        df1[0] = 1.0;
        let tail = scale * (1.0 + x[0] * x[0] / (g * g));
        let mut df2 = vec![tail; x.len()];
        df2[0] = -2.0 * x[0] / g;
        vec![df1, df2]
    })
}
