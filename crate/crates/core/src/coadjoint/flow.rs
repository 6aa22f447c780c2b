use serde::Serialize;

use crate::exact_la::{numeric_rank, rat_to_f64, Matrix, Rat};
use crate::lie::{LieAlgebra, LieError};

use super::bform_numeric;

/// Parameters of the numeric flow and of the sampling census.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowConfig {
    /// Integrator step size.
    pub step: f64,
    /// Largest number of integrator steps for one trajectory.
    pub step_cap: usize,
    /// Number of sample points drawn by the census.
    pub samples: usize,
    /// Numeric tolerance for rank checks along trajectories.
    pub tol: f64,
    /// Half-length of the time interval used by flow probes.
    pub probe_time: f64,
    pub seed: u64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            step: 0.01,
            step_cap: 100_000,
            samples: 512,
            tol: 1e-6,
            probe_time: 3.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.points.last().expect("trajectory holds the initial point")
    }
}

/// Generator `M` of the linear flow `dξ/dt = M ξ` for the direction `x`:
/// `M = −(ad x)ᵀ`.
pub fn flow_generator(l: &LieAlgebra<Rat>, x: &[f64]) -> Result<Matrix<f64>, LieError> {
    let m = l.dim();
    if x.len() != m {
        return Err(LieError::La(crate::exact_la::LaError::Dimension {
            expected: m,
            found: x.len(),
        }));
    }
    let mut g = Matrix::zeros(m, m);
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0.0 {
            continue;
        }
        for k in 0..m {
            for t in 0..m {
                let c = l.c(i, k, t);
                if !num_traits::Zero::is_zero(c) {
                    g[(k, t)] -= xi * rat_to_f64(c);
                }
            }
        }
    }
    Ok(g)
}

/// Integrates the coadjoint flow from `xi0` along `x` up to `t_final` with
/// the classical fourth-order Runge–Kutta scheme.
pub fn coadjoint_flow(
    l: &LieAlgebra<Rat>,
    xi0: &[f64],
    x: &[f64],
    t_final: f64,
    cfg: &FlowConfig,
) -> Result<Trajectory, LieError> {
    if xi0.len() != l.dim() {
        return Err(LieError::La(crate::exact_la::LaError::Dimension {
            expected: l.dim(),
            found: xi0.len(),
        }));
    }
    if !(cfg.step > 0.0) || !t_final.is_finite() {
        return Err(LieError::Input("flow needs a positive step and finite time".into()));
    }
    let g = flow_generator(l, x)?;
    let steps = (t_final.abs() / cfg.step).ceil() as usize;
    if steps > cfg.step_cap {
        return Err(LieError::Input(format!(
            "flow needs {steps} steps, cap is {}",
            cfg.step_cap
        )));
    }
    let h = if steps == 0 { 0.0 } else { t_final / steps as f64 };
    let f = |v: &[f64]| g.try_mul_vec(v).expect("generator is square");
    let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + s * y).collect()
    };
    let mut times = vec![0.0];
    let mut points = vec![xi0.to_vec()];
    let mut cur = xi0.to_vec();
    for k in 1..=steps {
        let k1 = f(&cur);
        let k2 = f(&axpy(&cur, h / 2.0, &k1));
        let k3 = f(&axpy(&cur, h / 2.0, &k2));
        let k4 = f(&axpy(&cur, h, &k3));
        cur = cur
            .iter()
            .enumerate()
            .map(|(i, c)| c + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if cur.iter().any(|v| !v.is_finite()) {
            return Err(LieError::La(crate::exact_la::LaError::Numeric(
                "flow left the float range".into(),
            )));
        }
        times.push(h * k as f64);
        points.push(cur.clone());
    }
    Ok(Trajectory { times, points })
}

/// Numeric rank of `B_ξ` at each trajectory point.
pub fn flow_rank_profile(l: &LieAlgebra<Rat>, traj: &Trajectory, tol: f64) -> Result<Vec<usize>, LieError> {
    traj.points
        .iter()
        .map(|p| Ok(numeric_rank(&bform_numeric(l, p)?, tol)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::corpus;

    #[test]
    fn isotropy_direction_is_stationary() {
        let h = corpus::heisenberg();
        let t = coadjoint_flow(&h, &[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0], 1.0, &FlowConfig::default()).unwrap();
        assert!(t.points.iter().all(|p| p == &[0.0, 0.0, 1.0]));
    }

    #[test]
    fn axb_decay() {
        let a = corpus::ax_plus_b();
        let t = coadjoint_flow(&a, &[0.0, 1.0], &[1.0, 0.0], 2.0, &FlowConfig::default()).unwrap();
        for (s, p) in t.times.iter().zip(&t.points) {
            assert!((p[1] - (-s).exp()).abs() < 1e-9);
            assert!(p[1] > 0.0 && p[0] == 0.0);
        }
    }

    #[test]
    fn heisenberg_moves_in_one_coordinate() {
        let h = corpus::heisenberg();
        let t = coadjoint_flow(&h, &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], 1.5, &FlowConfig::default()).unwrap();
        for (s, p) in t.times.iter().zip(&t.points) {
            assert_eq!(p[0], 0.0);
            assert!((p[1] + s).abs() < 1e-12);
            assert_eq!(p[2], 1.0);
        }
        let ranks = flow_rank_profile(&h, &t, 1e-6).unwrap();
        assert!(ranks.iter().all(|&r| r == 2));
    }

    #[test]
    fn step_cap() {
        let cfg = FlowConfig {
            step_cap: 10,
            ..FlowConfig::default()
        };
        let h = corpus::heisenberg();
        assert!(coadjoint_flow(&h, &[0.0; 3], &[1.0, 0.0, 0.0], 1.0, &cfg).is_err());
    }
}
