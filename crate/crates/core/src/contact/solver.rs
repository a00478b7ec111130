//! Quasi-static equilibrium of the actuated chain against one obstacle.
//!
//! The joint energy `Σ ½ k φ² − k_τ p φ` is minimised over the box
//! `0 ≤ φ ≤ joint_limit` with the clearance constraint on every centerline
//! sample enforced by an exterior quadratic penalty. The penalty weight is
//! raised until the worst violation falls below `penetration_tol`. Each
//! penalised subproblem is solved by a projected Newton iteration
//! (two-metric projection) with Armijo backtracking along the projection
//! arc, falling back to a plain projected-gradient step when the Newton
//! direction fails to descend. Pressure is ramped up in small increments
//! and each step is warm-started from the previous one.

use crate::contact::linalg::SymMatrix;
use crate::contact::Scene;
use crate::error::{Error, Result, SolverDiagnostics};
use crate::geometry::{chain_poses, JointState, Point2};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Centerline samples per link used for the clearance constraint (≥ 8).
    pub samples_per_link: usize,
    /// Pressure increment of the warm-started ramp (kPa).
    pub ramp_step: T,
    /// Inner iteration budget per ramp step.
    pub max_iterations: usize,
    /// Accepted clearance violation (mm).
    pub penetration_tol: T,
    /// Accepted projected-gradient norm of the penalised energy (N·mm).
    pub stationarity_tol: T,
    /// Penalty weight at the first ramp step (N/mm).
    pub initial_penalty: T,
    pub max_penalty: T,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            samples_per_link: 8,
            ramp_step: T::of(5.0),
            max_iterations: 10_000,
            penetration_tol: T::of(1e-3),
            stationarity_tol: T::of(1e-6),
            initial_penalty: T::of(10.0),
            max_penalty: T::of(1e10),
        }
    }
}

/// Equilibrium at one pressure plus solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactSolution<T> {
    /// kPa
    pub pressure: T,
    pub state: JointState<T>,
    /// mm
    pub max_penetration: T,
    /// N·mm
    pub stationarity_residual: T,
    pub iterations: usize,
    /// Joint energy without the penalty term (N·mm).
    pub energy: T,
    /// Final penalty weight (N/mm).
    pub penalty: T,
    pub samples_per_link: usize,
}

/// Pressures visited by a ramp from zero to `target`, ending exactly at `target`.
pub fn pressure_ramp<T: Scalar>(target: T, step: T) -> Result<Vec<T>> {
    if !(target.is_finite() && target >= T::zero()) {
        return Err(Error::InvalidPressure(target.as_f64()));
    }
    if !(step.is_finite() && step > T::zero()) {
        return Err(crate::geometry::invalid("ramp_step", "must be finite and > 0"));
    }
    let mut out = vec![T::zero()];
    let mut k = 1usize;
    loop {
        let p = step * T::from_usize(k).unwrap();
        // Skip a sliver step right below the target.
        if p >= target - step * T::of(1e-9) {
            break;
        }
        out.push(p);
        k += 1;
    }
    if target > T::zero() {
        out.push(target);
    }
    Ok(out)
}

/// Result of a ramped solve, keeping the completed steps when a step fails.
#[derive(Debug, Clone)]
pub struct RampOutcome<T> {
    pub steps: Vec<ContactSolution<T>>,
    pub failure: Option<Error>,
}

impl<T: Scalar> RampOutcome<T> {
    pub fn into_result(self) -> Result<Vec<ContactSolution<T>>> {
        match self.failure {
            Some(err) => Err(err),
            None => Ok(self.steps),
        }
    }
}

/// Runs the pressure ramp from 0 to `pressure`, returning one solution per step.
pub fn solve_contact_ramp<T: Scalar>(
    scene: &Scene<T>,
    pressure: T,
    options: &SolverOptions<T>,
) -> Result<Vec<ContactSolution<T>>> {
    ramp_outcome(scene, pressure, options)?.into_result()
}

/// Like [`solve_contact_ramp`] but hands back the steps solved before a failure.
///
/// Input errors (bad scene, infeasible start) are still returned as `Err`.
pub fn ramp_outcome<T: Scalar>(
    scene: &Scene<T>,
    pressure: T,
    options: &SolverOptions<T>,
) -> Result<RampOutcome<T>> {
    scene.validate()?;
    if options.samples_per_link < 2 {
        return Err(crate::geometry::invalid("samples_per_link", "must be at least 2"));
    }
    let ramp = pressure_ramp(pressure, options.ramp_step)?;

    let straight = JointState::zeros(scene.spec.joint_count());
    let initial = scene.max_penetration(&straight, options.samples_per_link);
    if initial > options.penetration_tol {
        return Err(Error::InfeasibleScene {
            penetration_mm: initial.as_f64(),
        });
    }

    let active = scene.mask.active_indices();
    let mut x = vec![T::zero(); active.len()];
    let mut mu = options.initial_penalty;
    let mut steps = Vec::with_capacity(ramp.len());
    for p in ramp {
        let problem = PenaltyProblem::new(scene, &active, p, options.samples_per_link);
        match problem.solve(&mut x, &mut mu, options) {
            Ok(sol) => steps.push(sol),
            Err(err) => {
                return Ok(RampOutcome {
                    steps,
                    failure: Some(err),
                })
            }
        }
    }
    Ok(RampOutcome {
        steps,
        failure: None,
    })
}

/// Equilibrium at `pressure`, reached through the warm-started ramp.
pub fn solve_equilibrium_with_contact<T: Scalar>(
    scene: &Scene<T>,
    pressure: T,
    options: &SolverOptions<T>,
) -> Result<ContactSolution<T>> {
    let mut steps = solve_contact_ramp(scene, pressure, options)?;
    Ok(steps.pop().expect("ramp has at least one step"))
}

struct Evaluation<T> {
    value: T,
    grad: Vec<T>,
    hess: SymMatrix<T>,
}

struct PenaltyProblem<'a, T> {
    scene: &'a Scene<T>,
    /// 0-based joint indices of the optimisation variables.
    active: &'a [usize],
    pressure: T,
    drive: T,
    samples: usize,
    sign: T,
}

enum Inner<T> {
    Converged(T),
    Stalled(T),
    OutOfBudget(T),
}

impl<'a, T: Scalar> PenaltyProblem<'a, T> {
    fn new(scene: &'a Scene<T>, active: &'a [usize], pressure: T, samples: usize) -> Self {
        Self {
            scene,
            active,
            pressure,
            drive: scene.model.torque_coeff * pressure,
            samples,
            sign: match scene.curl {
                super::Curl::CounterClockwise => T::one(),
                super::Curl::Clockwise => -T::one(),
            },
        }
    }

    fn limit(&self) -> T {
        self.scene.model.joint_limit
    }

    fn state(&self, x: &[T]) -> JointState<T> {
        let mut angles = vec![T::zero(); self.scene.spec.joint_count()];
        for (&j, &v) in self.active.iter().zip(x) {
            angles[j] = v;
        }
        JointState::new(angles).expect("finite iterate")
    }

    fn world_angles(&self, x: &[T]) -> Vec<T> {
        let mut angles = vec![T::zero(); self.scene.spec.joint_count()];
        for (&j, &v) in self.active.iter().zip(x) {
            angles[j] = v * self.sign;
        }
        angles
    }

    fn max_penetration(&self, x: &[T]) -> T {
        self.scene.max_penetration(&self.state(x), self.samples)
    }

    fn value(&self, x: &[T], mu: T) -> T {
        self.evaluate(x, mu, false).value
    }

    fn evaluate(&self, x: &[T], mu: T, derivatives: bool) -> Evaluation<T> {
        let n = x.len();
        let k = self.scene.model.spring_coeff;
        let mut value = T::zero();
        let mut grad = vec![T::zero(); n];
        let mut hess = SymMatrix::zeros(if derivatives { n } else { 0 });
        for (i, &xi) in x.iter().enumerate() {
            value = value + T::half() * k * xi * xi - self.drive * xi;
            if derivatives {
                grad[i] = k * xi - self.drive;
                hess.add(i, i, k);
            }
        }

        let pitch = self.scene.spec.module_pitch;
        let poses = chain_poses(pitch, &self.world_angles(x));
        let denom = T::from_usize(self.samples - 1).unwrap();
        let clearance = self.scene.clearance;
        // Joint origin of each variable (pose index == 1-based joint number).
        let pivots: Vec<Point2<T>> = self.active.iter().map(|&j| poses[j + 1].position()).collect();
        let mut dq = vec![Point2::origin(); n];
        let mut a = vec![T::zero(); n];

        for link in 0..poses.len() - 1 {
            let start = poses[link];
            for s in 0..self.samples {
                let q = if s + 1 == self.samples {
                    poses[link + 1].position()
                } else {
                    start.advanced(pitch * T::from_usize(s).unwrap() / denom).position()
                };
                let sample = self.scene.obstacle.sample(q);
                let violation = clearance - sample.distance;
                if violation <= T::zero() {
                    continue;
                }
                value = value + T::half() * mu * violation * violation;
                if !derivatives {
                    continue;
                }
                // Variables whose joint lies proximal to this link move the sample.
                for i in 0..n {
                    if self.active[i] < link {
                        dq[i] = (q - pivots[i]).perp() * self.sign;
                        a[i] = sample.normal.dot(dq[i]);
                    } else {
                        dq[i] = Point2::origin();
                        a[i] = T::zero();
                    }
                }
                for i in 0..n {
                    if self.active[i] >= link {
                        continue;
                    }
                    grad[i] = grad[i] - mu * violation * a[i];
                    for m in 0..n {
                        if self.active[m] >= link {
                            continue;
                        }
                        let pivot = if self.active[i] >= self.active[m] { pivots[i] } else { pivots[m] };
                        let second = -sample.normal.dot(q - pivot);
                        let curv = sample.curvature * (dq[i].dot(dq[m]) - a[i] * a[m]);
                        hess.add(i, m, mu * (a[i] * a[m] - violation * (curv + second)));
                    }
                }
            }
        }
        Evaluation { value, grad, hess }
    }

    fn projected_gradient_norm(&self, x: &[T], g: &[T]) -> T {
        let lim = self.limit();
        x.iter()
            .zip(g)
            .map(|(&xi, &gi)| {
                let r = xi - (xi - gi).max(T::zero()).min(lim);
                r * r
            })
            .fold(T::zero(), |acc, v| acc + v)
            .sqrt()
    }

    fn project(&self, v: T) -> T {
        v.max(T::zero()).min(self.limit())
    }

    /// Minimises the penalised energy at fixed `mu`, updating `x` in place.
    fn inner(&self, x: &mut [T], mu: T, budget: usize, used: &mut usize, tol: T) -> Inner<T> {
        let n = x.len();
        let sigma = T::of(1e-4);
        let lim = self.limit();
        loop {
            let eval = self.evaluate(x, mu, true);
            let residual = self.projected_gradient_norm(x, &eval.grad);
            if residual <= tol {
                return Inner::Converged(residual);
            }
            if *used >= budget {
                return Inner::OutOfBudget(residual);
            }
            *used += 1;

            let eps = residual.min(T::of(1e-3));
            let (binding, free): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| {
                (x[i] <= eps && eval.grad[i] > T::zero()) || (x[i] >= lim - eps && eval.grad[i] < T::zero())
            });
            let mut dir = vec![T::zero(); n];
            if !free.is_empty() {
                let h = eval.hess.select(&free);
                let rhs: Vec<T> = free.iter().map(|&i| -eval.grad[i]).collect();
                for (d, &i) in h.solve_regularized(&rhs).into_iter().zip(&free) {
                    dir[i] = d;
                }
            }
            for &i in &binding {
                dir[i] = -eval.grad[i] / eval.hess.get(i, i).max(self.scene.model.spring_coeff);
            }

            let accepted = self
                .arc_search(x, &eval, &dir, mu, sigma)
                .or_else(|| {
                    let scale = (0..n).map(|i| eval.hess.get(i, i)).fold(T::zero(), T::max);
                    let steepest: Vec<T> = eval.grad.iter().map(|&g| -g / scale).collect();
                    self.arc_search(x, &eval, &steepest, mu, sigma)
                });
            match accepted {
                Some(next) => x.copy_from_slice(&next),
                None => return Inner::Stalled(residual),
            }
        }
    }

    fn arc_search(&self, x: &[T], eval: &Evaluation<T>, dir: &[T], mu: T, sigma: T) -> Option<Vec<T>> {
        let mut alpha = T::one();
        for _ in 0..60 {
            let trial: Vec<T> = x.iter().zip(dir).map(|(&xi, &di)| self.project(xi + alpha * di)).collect();
            let decrease = trial
                .iter()
                .zip(x)
                .zip(&eval.grad)
                .fold(T::zero(), |acc, ((&t, &xi), &g)| acc + g * (t - xi));
            if decrease < T::zero() && self.value(&trial, mu) <= eval.value + sigma * decrease {
                return Some(trial);
            }
            alpha = alpha * T::half();
        }
        None
    }

    fn solve(&self, x: &mut [T], mu: &mut T, options: &SolverOptions<T>) -> Result<ContactSolution<T>> {
        let mut used = 0usize;
        let inner_tol = options.stationarity_tol * T::of(0.01);
        loop {
            let outcome = self.inner(x, *mu, options.max_iterations, &mut used, inner_tol);
            let penetration = self.max_penetration(x);
            let (residual, stationary) = match outcome {
                Inner::Converged(r) => (r, true),
                Inner::Stalled(r) => (r, r <= options.stationarity_tol),
                Inner::OutOfBudget(r) => (r, false),
            };
            let out_of_budget = matches!(outcome, Inner::OutOfBudget(_));
            if stationary && penetration <= options.penetration_tol {
                let state = self.state(x);
                return Ok(ContactSolution {
                    pressure: self.pressure,
                    energy: self.scene.energy(self.pressure, &state),
                    state,
                    max_penetration: penetration,
                    stationarity_residual: residual,
                    iterations: used,
                    penalty: *mu,
                    samples_per_link: self.samples,
                });
            }
            let growth = (T::of(1.5) * penetration / options.penetration_tol)
                .max(T::of(2.0))
                .min(T::of(100.0));
            if out_of_budget || penetration <= options.penetration_tol || *mu * growth > options.max_penalty {
                return Err(Error::SolverFailure(Box::new(SolverDiagnostics {
                    pressure_kpa: self.pressure.as_f64(),
                    angles_rad: self.state(x).angles().iter().map(|a| a.as_f64()).collect(),
                    max_penetration_mm: penetration.as_f64(),
                    stationarity_residual: residual.as_f64(),
                    iterations: used,
                    penalty: mu.as_f64(),
                })));
            }
            *mu = *mu * growth;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::Obstacle;
    use crate::geometry::ActuatorSpec;
    use crate::locking::{resolve_mask, Preset};
    use crate::mechanics::{calibrate, default_joint_limit, CalibrationAnchors};

    fn scene(obstacle: Obstacle<f64>, preset: Preset) -> Scene<f64> {
        let spec = ActuatorSpec::default();
        let model = calibrate(&CalibrationAnchors::default(), &spec, default_joint_limit()).unwrap();
        let mask = resolve_mask(&spec, &preset.lock_config()).unwrap();
        Scene::new(spec, model, mask, obstacle)
    }

    #[test]
    fn ramp_ends_at_target() {
        assert_eq!(pressure_ramp(12.0, 5.0).unwrap(), vec![0.0, 5.0, 10.0, 12.0]);
        assert_eq!(pressure_ramp(10.0, 5.0).unwrap(), vec![0.0, 5.0, 10.0]);
        assert_eq!(pressure_ramp(0.0, 5.0).unwrap(), vec![0.0]);
        assert!(pressure_ramp(-1.0, 5.0).is_err());
        assert!(pressure_ramp(10.0, 0.0).is_err());
    }

    #[test]
    fn analytic_gradient_and_hessian_match_differences() {
        let s = scene(Obstacle::circle(Point2::new(55.0, 50.0), 35.0), Preset::SixR);
        let active = s.mask.active_indices();
        let problem = PenaltyProblem::new(&s, &active, 100.0, 8);
        let x = vec![0.3, 0.35, 0.4, 0.3, 0.45, 0.2];
        let mu = 50.0;
        let eval = problem.evaluate(&x, mu, true);
        assert!(problem.max_penetration(&x) > 0.0);
        let h = 1e-6;
        for i in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let fd = (problem.value(&xp, mu) - problem.value(&xm, mu)) / (2.0 * h);
            assert!((fd - eval.grad[i]).abs() < 1e-4 * (1.0 + fd.abs()), "grad {i}: {fd} vs {}", eval.grad[i]);
            let gp = problem.evaluate(&xp, mu, true).grad;
            let gm = problem.evaluate(&xm, mu, true).grad;
            for m in 0..x.len() {
                let fd = (gp[m] - gm[m]) / (2.0 * h);
                let an = eval.hess.get(i, m);
                assert!((fd - an).abs() < 1e-3 * (1.0 + fd.abs()), "hess {i},{m}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn infeasible_start_rejected() {
        let s = scene(Obstacle::circle(Point2::new(50.0, 5.0), 10.0), Preset::SixR);
        let err = solve_equilibrium_with_contact(&s, 50.0, &SolverOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InfeasibleScene { .. }));
    }

    #[test]
    fn exhausted_budget_reports_diagnostics() {
        let s = scene(Obstacle::circle(Point2::new(60.0, 50.0), 35.0), Preset::SixR);
        let opts = SolverOptions {
            max_iterations: 1,
            ..SolverOptions::default()
        };
        match solve_equilibrium_with_contact(&s, 100.0, &opts).unwrap_err() {
            Error::SolverFailure(d) => assert_eq!(d.angles_rad.len(), 6),
            other => panic!("{other:?}"),
        }
    }
}
