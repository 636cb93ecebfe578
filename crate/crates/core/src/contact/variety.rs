//! Germs under study and points on the levels `ρ = ε`.
//!
//! Everything is expressed in *domain* coordinates: `C^n` for a smooth chart,
//! the ambient `C^{n+1}` for a hypersurface. The rug function is
//! `ρ = Σ |φ_k|²` with `φ_k` the chart map components, or the ambient
//! coordinates restricted to the hypersurface.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::poly::{Polynomial, C64};
use crate::error::ContactError;

/// Newton stopping tolerance (relative).
pub const NEWTON_TOL: f64 = 1e-12;
/// Acceptance tolerance on `|ρ − ε| / ε` and on `|h| / magnitude(h)`.
pub const ACCEPT_TOL: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 50;
pub const NEWTON_DAMPING: f64 = 0.5;
/// Minimum fraction of converged draws before sampling gives up.
pub const MIN_ACCEPT_RATE: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub enum VarietyModel {
    /// `C^dim` with a polynomial map `Φ = (φ_1, …, φ_N)`.
    SmoothChart { dim: usize, map: Vec<Polynomial> },
    /// `{h = 0} ⊂ C^{n+1}`, isolated singularity at the origin.
    Hypersurface { equation: Polynomial },
}

impl VarietyModel {
    /// `C^dim` with `Φ = id`.
    pub fn identity(dim: usize) -> Self {
        Self::SmoothChart {
            dim,
            map: (0..dim).map(|k| Polynomial::variable(k, dim)).collect(),
        }
    }

    pub fn chart(dim: usize, map: Vec<Polynomial>) -> Result<Self, ContactError> {
        if let Some(p) = map.iter().find(|p| p.n_vars() != dim) {
            return Err(ContactError::VariableMismatch {
                expected: dim,
                found: p.n_vars(),
            });
        }
        Ok(Self::SmoothChart { dim, map })
    }

    pub fn hypersurface(equation: Polynomial) -> Self {
        Self::Hypersurface { equation }
    }

    /// Number of domain coordinates.
    pub fn domain_dim(&self) -> usize {
        match self {
            Self::SmoothChart { dim, .. } => *dim,
            Self::Hypersurface { equation } => equation.n_vars(),
        }
    }

    /// Complex dimension of the variety.
    pub fn tangent_dim(&self) -> usize {
        match self {
            Self::SmoothChart { dim, .. } => *dim,
            Self::Hypersurface { equation } => equation.n_vars() - 1,
        }
    }

    /// Components of `Φ` at `z`.
    pub fn phi(&self, z: &[C64]) -> Vec<C64> {
        match self {
            Self::SmoothChart { map, .. } => map.iter().map(|p| p.eval(z)).collect(),
            Self::Hypersurface { .. } => z.to_vec(),
        }
    }

    /// Complex Jacobian of `Φ` (rows: components, columns: domain coords).
    pub fn jacobian(&self, z: &[C64]) -> DMatrix<C64> {
        match self {
            Self::SmoothChart { dim, map } => {
                let mut jac = DMatrix::zeros(map.len(), *dim);
                for (k, p) in map.iter().enumerate() {
                    for (j, d) in p.gradient(z).into_iter().enumerate() {
                        jac[(k, j)] = d;
                    }
                }
                jac
            }
            Self::Hypersurface { equation } => DMatrix::identity(equation.n_vars(), equation.n_vars()),
        }
    }

    pub fn rho(&self, z: &[C64]) -> f64 {
        self.phi(z).iter().map(|w| w.norm_sqr()).sum()
    }

    /// `dρ(w) = 2 Re Σ conj(φ_k) dφ_k(w)` for a domain direction `w`.
    pub fn d_rho(&self, z: &[C64], w: &[C64]) -> f64 {
        let phi = self.phi(z);
        let dphi = self.jacobian(z) * DVector::from_column_slice(w);
        2.0 * phi.iter().zip(dphi.iter()).map(|(p, d)| p.conj() * d).sum::<C64>().re
    }

    /// `α(w) = −d^cρ(w) = −dρ(i·w)` for a domain direction `w`.
    pub fn alpha(&self, z: &[C64], w: &[C64]) -> f64 {
        let iw: Vec<C64> = w.iter().map(|x| x * C64::i()).collect();
        -self.d_rho(z, &iw)
    }

    /// Polynomials handed in as functions on the germ must live in the
    /// domain coordinates.
    pub fn check_function(&self, f: &Polynomial) -> Result<(), ContactError> {
        if f.n_vars() == self.domain_dim() {
            Ok(())
        } else {
            Err(ContactError::VariableMismatch {
                expected: self.domain_dim(),
                found: f.n_vars(),
            })
        }
    }
}

/// A point of `M_{ρ,ε}` with an orthonormal (ambient hermitian) basis of
/// its complex tangent space, stored as the columns of `tangent_basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSample {
    pub point: Vec<C64>,
    pub tangent_basis: DMatrix<C64>,
    pub rho_value: f64,
}

impl PointSample {
    /// Builds the sample data at an explicit point.
    pub fn at(model: &VarietyModel, point: Vec<C64>) -> Result<Self, ContactError> {
        if point.len() != model.domain_dim() {
            return Err(ContactError::DimensionMismatch {
                expected: model.domain_dim(),
                found: point.len(),
            });
        }
        let tangent_basis = match model {
            VarietyModel::SmoothChart { dim, .. } => DMatrix::identity(*dim, *dim),
            VarietyModel::Hypersurface { equation } => hypersurface_tangent(equation, &point)?,
        };
        Ok(Self {
            rho_value: model.rho(&point),
            point,
            tangent_basis,
        })
    }

    pub fn tangent_dim(&self) -> usize {
        self.tangent_basis.ncols()
    }

    pub fn scale(&self) -> f64 {
        self.point.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Orthonormal basis of `ker dh` via Gram–Schmidt against the normal
/// `conj(∂h)`.
fn hypersurface_tangent(equation: &Polynomial, point: &[C64]) -> Result<DMatrix<C64>, ContactError> {
    let n = point.len();
    let grad = equation.gradient(point);
    let grad_norm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    let radius = point.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    // |∇h|·|z| against |h|'s natural size; Euler-type identities make these
    // comparable for quasi-homogeneous h away from the singular locus.
    let reference = equation.magnitude(point).max(f64::MIN_POSITIVE);
    if grad_norm == 0.0 || grad_norm * radius < 1e-8 * reference {
        return Err(ContactError::DegenerateTangent {
            sigma_min: grad_norm,
        });
    }
    let normal: Vec<C64> = grad.iter().map(|g| g.conj() / grad_norm).collect();
    let mut basis: Vec<Vec<C64>> = vec![normal];
    for k in 0..n {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[k] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let coeff: C64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= coeff * bi;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
        if basis.len() == n {
            break;
        }
    }
    let columns: Vec<DVector<C64>> = basis[1..].iter().map(|v| DVector::from_vec(v.clone())).collect();
    Ok(DMatrix::from_columns(&columns))
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Draws `count` points of `M_{ρ,ε}` reproducibly from `seed`.
///
/// Each draw picks a random direction and runs damped Newton on
/// `ρ = ε` (and `h = 0` for hypersurfaces); non-converged draws are
/// rejected. Fails when fewer than 10% of draws converge.
pub fn sample_points(
    model: &VarietyModel,
    epsilon: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<PointSample>, ContactError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(ContactError::SamplingFailed {
            accepted: 0,
            attempts: 0,
            needed: count,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_attempts = ((count as f64 / MIN_ACCEPT_RATE).ceil() as usize).max(10);
    let mut samples = Vec::with_capacity(count);
    let mut attempts = 0;
    while samples.len() < count {
        if attempts >= max_attempts {
            return Err(ContactError::SamplingFailed {
                accepted: samples.len(),
                attempts,
                needed: count,
            });
        }
        attempts += 1;
        let direction = random_direction(&mut rng, model.domain_dim());
        let point = match model {
            VarietyModel::SmoothChart { .. } => solve_on_ray(model, &direction, epsilon),
            VarietyModel::Hypersurface { equation } => solve_on_hypersurface(model, equation, &direction, epsilon),
        };
        let Some(point) = point else { continue };
        if let Ok(sample) = PointSample::at(model, point) {
            if chart_is_immersive(model, &sample) {
                samples.push(sample);
            }
        }
    }
    Ok(samples)
}

fn chart_is_immersive(model: &VarietyModel, sample: &PointSample) -> bool {
    match model {
        VarietyModel::Hypersurface { .. } => true,
        VarietyModel::SmoothChart { .. } => {
            let a = model.jacobian(&sample.point) * &sample.tangent_basis;
            let sv = a.singular_values();
            let max = sv.max();
            max > 0.0 && sv.min() > 1e-10 * max && a.nrows() >= a.ncols()
        }
    }
}

/// Finds `t > 0` with `ρ(t·u) = ε`.
fn solve_on_ray(model: &VarietyModel, u: &[C64], epsilon: f64) -> Option<Vec<C64>> {
    let at = |t: f64| -> Vec<C64> { u.iter().map(|x| x * t).collect() };
    let unit_rho = model.rho(u);
    let mut t = if unit_rho > 0.0 { (epsilon / unit_rho).sqrt() } else { epsilon.sqrt() };
    let mut residual = model.rho(&at(t)) - epsilon;
    for _ in 0..NEWTON_MAX_ITER {
        if residual.abs() <= NEWTON_TOL * epsilon {
            break;
        }
        let slope = model.d_rho(&at(t), u);
        if slope == 0.0 || !slope.is_finite() {
            return None;
        }
        let step = -residual / slope;
        let mut damping = 1.0;
        loop {
            let candidate = t + damping * step;
            if candidate > 0.0 {
                let r = model.rho(&at(candidate)) - epsilon;
                if r.abs() < residual.abs() {
                    t = candidate;
                    residual = r;
                    break;
                }
            }
            damping *= NEWTON_DAMPING;
            if damping < 1e-12 {
                return None;
            }
        }
    }
    (residual.abs() <= ACCEPT_TOL * epsilon).then(|| at(t))
}

/// Minimum-norm damped Newton on `(Re h, Im h, ρ − ε) = 0` in real
/// coordinates, started at `√ε·u`.
fn solve_on_hypersurface(model: &VarietyModel, equation: &Polynomial, u: &[C64], epsilon: f64) -> Option<Vec<C64>> {
    let n = u.len();
    let mut z: Vec<C64> = u.iter().map(|x| x * epsilon.sqrt()).collect();
    let h_scale = equation.magnitude(&z).max(epsilon);
    let residual = |z: &[C64]| -> [f64; 3] {
        let h = equation.eval(z);
        [h.re / h_scale, h.im / h_scale, (model.rho(z) - epsilon) / epsilon]
    };
    let norm = |r: &[f64; 3]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut r = residual(&z);
    for _ in 0..NEWTON_MAX_ITER {
        if norm(&r) <= NEWTON_TOL {
            break;
        }
        let grad = equation.gradient(&z);
        let mut jac = DMatrix::<f64>::zeros(3, 2 * n);
        for k in 0..n {
            jac[(0, 2 * k)] = grad[k].re / h_scale;
            jac[(0, 2 * k + 1)] = -grad[k].im / h_scale;
            jac[(1, 2 * k)] = grad[k].im / h_scale;
            jac[(1, 2 * k + 1)] = grad[k].re / h_scale;
            jac[(2, 2 * k)] = 2.0 * z[k].re / epsilon;
            jac[(2, 2 * k + 1)] = 2.0 * z[k].im / epsilon;
        }
        let gram = &jac * jac.transpose();
        let rhs = DVector::from_column_slice(&r);
        let y = gram.lu().solve(&rhs)?;
        let step = jac.transpose() * y;
        let mut damping = 1.0;
        loop {
            let candidate: Vec<C64> = (0..n)
                .map(|k| z[k] - C64::new(step[2 * k], step[2 * k + 1]) * damping)
                .collect();
            let rc = residual(&candidate);
            if norm(&rc) < norm(&r) {
                z = candidate;
                r = rc;
                break;
            }
            damping *= NEWTON_DAMPING;
            if damping < 1e-12 {
                return None;
            }
        }
    }
    let h = equation.eval(&z);
    let ok_h = h.norm() <= ACCEPT_TOL * equation.magnitude(&z).max(f64::MIN_POSITIVE);
    let ok_rho = (model.rho(&z) - epsilon).abs() <= ACCEPT_TOL * epsilon;
    (ok_h && ok_rho && z.iter().all(|x| x.re.is_finite() && x.im.is_finite())).then_some(z)
}
