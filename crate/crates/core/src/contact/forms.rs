//! Pointwise forms of the rug function: `α = −d^cρ`, `ω = dα`,
//! `g(u, v) = ω(u, Jv)` and `h = g + iω`.
//!
//! Tangent vectors are complex coefficient vectors `c` in the sample's
//! tangent basis `T`; the domain vector is `T·c` and `J` is multiplication
//! by `i`. With `A = dΦ·T`, the hermitian form is `h(u, v) = 4·u* A* A v`:
//! conjugate-linear in the first slot, complex-linear in the second.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::poly::{Polynomial, C64};
use super::variety::{PointSample, VarietyModel};
use crate::error::ContactError;

/// Relative rank threshold for the immersion test.
pub const IMMERSION_TOL: f64 = 1e-10;
/// Finite-difference step, relative to the point's norm.
pub const FD_STEP: f64 = 1e-6;

/// Complex tangent vector in coordinates of a [`PointSample`]'s basis.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector(pub DVector<C64>);

impl TangentVector {
    pub fn zeros(d: usize) -> Self {
        Self(DVector::zeros(d))
    }

    pub fn coords(&self) -> &DVector<C64> {
        &self.0
    }

    /// The same vector in domain coordinates.
    pub fn to_domain(&self, sample: &PointSample) -> Vec<C64> {
        (&sample.tangent_basis * &self.0).iter().copied().collect()
    }

    /// Euclidean norm in domain coordinates (the tangent basis is
    /// orthonormal, so this is the coefficient norm).
    pub fn ambient_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn times_i(&self) -> Self {
        self.scale(C64::i())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }
}

/// Real basis `t_1, i·t_1, t_2, i·t_2, …` of the tangent space.
pub fn real_basis(d: usize) -> Vec<TangentVector> {
    (0..2 * d)
        .map(|a| {
            let mut v = DVector::zeros(d);
            v[a / 2] = if a % 2 == 0 { C64::new(1.0, 0.0) } else { C64::i() };
            TangentVector(v)
        })
        .collect()
}

/// Linear data of the rug function at one sample, shared by all the
/// pointwise operations.
pub struct Frame<'a> {
    pub model: &'a VarietyModel,
    pub sample: &'a PointSample,
    /// `dΦ·T`, columns indexed by tangent coordinates.
    pub dphi: DMatrix<C64>,
    pub phi: Vec<C64>,
    /// Matrix of `h` in the tangent basis.
    pub hermitian: DMatrix<C64>,
    cholesky: Cholesky<C64, Dyn>,
    /// `∂ρ(c) = β^T c`, so that `dρ = 2 Re ∂ρ`.
    beta: DVector<C64>,
    pub grad_rho: TangentVector,
    /// `‖∇ρ‖²` for the metric `g`.
    pub grad_rho_norm2: f64,
}

impl<'a> Frame<'a> {
    pub fn new(model: &'a VarietyModel, sample: &'a PointSample) -> Result<Self, ContactError> {
        let dphi = model.jacobian(&sample.point) * &sample.tangent_basis;
        let sv = dphi.clone().singular_values();
        let (max, min) = (sv.max(), sv.min());
        if dphi.nrows() < dphi.ncols() || !(max > 0.0) || min <= IMMERSION_TOL * max {
            return Err(ContactError::DegenerateTangent { sigma_min: min });
        }
        let hermitian = dphi.adjoint() * &dphi * C64::new(4.0, 0.0);
        let cholesky = Cholesky::new(hermitian.clone()).ok_or(ContactError::SingularMetric)?;
        let phi = model.phi(&sample.point);
        let phi_conj = DVector::from_iterator(phi.len(), phi.iter().map(|p| p.conj()));
        let beta = dphi.transpose() * phi_conj;
        let grad_rho = TangentVector(cholesky.solve(&beta.map(|b| b.conj())) * C64::new(2.0, 0.0));
        let mut frame = Self {
            model,
            sample,
            dphi,
            phi,
            hermitian,
            cholesky,
            beta,
            grad_rho,
            grad_rho_norm2: 0.0,
        };
        frame.grad_rho_norm2 = frame.norm2(&frame.grad_rho);
        Ok(frame)
    }

    pub fn dim(&self) -> usize {
        self.sample.tangent_dim()
    }

    pub fn h(&self, u: &TangentVector, v: &TangentVector) -> C64 {
        (u.0.adjoint() * &self.hermitian * &v.0)[(0, 0)]
    }

    pub fn g(&self, u: &TangentVector, v: &TangentVector) -> f64 {
        self.h(u, v).re
    }

    pub fn omega(&self, u: &TangentVector, v: &TangentVector) -> f64 {
        self.h(u, v).im
    }

    /// `‖v‖²` for `g`.
    pub fn norm2(&self, v: &TangentVector) -> f64 {
        self.g(v, v)
    }

    pub fn d_rho(&self, v: &TangentVector) -> f64 {
        2.0 * (self.beta.transpose() * &v.0)[(0, 0)].re
    }

    /// `d^cρ(v) = dρ(Jv)`.
    pub fn dc_rho(&self, v: &TangentVector) -> f64 {
        self.d_rho(&v.times_i())
    }

    pub fn alpha(&self, v: &TangentVector) -> f64 {
        -self.dc_rho(v)
    }

    /// Gradient for `g` of the real covector `v ↦ Re(γ^T v)`.
    pub fn real_gradient(&self, gamma: &DVector<C64>) -> TangentVector {
        TangentVector(self.cholesky.solve(&gamma.map(|x| x.conj())))
    }

    /// Row vector `b` with `dφ(v) = b^T v` for a holomorphic `φ`.
    pub fn differential(&self, phi: &Polynomial) -> DVector<C64> {
        let grad = DVector::from_vec(phi.gradient(&self.sample.point));
        self.sample.tangent_basis.transpose() * grad
    }

    /// Solves `h(x, ·) = dφ`; the holomorphic gradient.
    pub fn holomorphic_gradient(&self, phi: &Polynomial) -> TangentVector {
        self.real_gradient(&self.differential(phi))
    }

    /// `ω(u, v)` from the sum of 2×2 determinants over the components of Φ,
    /// using `ω(u, v) = −dd^cρ(u, J w)` with `w = −Jv`.
    pub fn omega_determinant(&self, u: &TangentVector, v: &TangentVector) -> f64 {
        let w = v.times_i().scale(C64::new(-1.0, 0.0));
        let du = &self.dphi * &u.0;
        let dw = &self.dphi * &w.0;
        let mut total = C64::new(0.0, 0.0);
        for k in 0..self.dphi.nrows() {
            let (a, b) = (du[k], dw[k]);
            // det [[a, −b], [ā, b̄]]
            total += a * b.conj() - (-b) * a.conj();
        }
        debug_assert!(total.im.abs() <= 1e-9 * (1.0 + total.re.abs()));
        2.0 * total.re
    }

    /// Projection of a vector of the tangent space to the level tangent
    /// space `ker dρ`, orthogonal for `g`.
    pub fn to_level(&self, v: &TangentVector) -> TangentVector {
        let coeff = self.d_rho(v) / self.grad_rho_norm2;
        v.sub(&self.grad_rho.scale(C64::new(coeff, 0.0)))
    }

    /// `g`-orthonormal real basis of `ker dρ` (dimension `2d − 1`).
    pub fn level_basis(&self) -> Vec<TangentVector> {
        let mut basis: Vec<TangentVector> = Vec::new();
        let unit = self.grad_rho.scale(C64::new(1.0 / self.grad_rho_norm2.sqrt(), 0.0));
        for e in real_basis(self.dim()) {
            let mut v = e;
            for _ in 0..2 {
                for b in std::iter::once(&unit).chain(basis.iter()) {
                    let c = self.g(b, &v);
                    v = v.sub(&b.scale(C64::new(c, 0.0)));
                }
            }
            let n = self.norm2(&v).sqrt();
            if n > 1e-6 * self.norm2(&real_basis(self.dim())[0]).sqrt() {
                basis.push(v.scale(C64::new(1.0 / n, 0.0)));
            }
            if basis.len() + 1 == 2 * self.dim() {
                break;
            }
        }
        basis
    }
}

/// Real matrices of the forms on the basis `t_1, i·t_1, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormsAtPoint {
    pub alpha: Vec<f64>,
    /// `ω` from the determinant formula.
    pub omega: DMatrix<f64>,
    pub metric_g: DMatrix<f64>,
    pub hermitian_h: DMatrix<C64>,
    pub grad_rho: TangentVector,
    pub reeb: TangentVector,
    /// Central finite differences of `d(−d^cρ)` on the same basis.
    pub omega_finite_difference: DMatrix<f64>,
    /// `max |ω_det − ω_fd| / max |ω_det|`.
    pub fd_deviation: f64,
}

/// Evaluates every form at `sample`.
pub fn eval_forms(model: &VarietyModel, sample: &PointSample) -> Result<FormsAtPoint, ContactError> {
    let frame = Frame::new(model, sample)?;
    if frame.grad_rho_norm2 <= 0.0 {
        return Err(ContactError::ZeroGradient);
    }
    let basis = real_basis(frame.dim());
    let n = basis.len();
    let alpha = basis.iter().map(|e| frame.alpha(e)).collect();
    let omega = DMatrix::from_fn(n, n, |a, b| frame.omega_determinant(&basis[a], &basis[b]));
    let metric_g = DMatrix::from_fn(n, n, |a, b| frame.omega_determinant(&basis[a], &basis[b].times_i()));
    let omega_fd = omega_finite_difference(model, sample, &basis);
    let scale = omega.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let fd_deviation = (&omega - &omega_fd).iter().fold(0.0f64, |m, x| m.max(x.abs())) / scale;
    let reeb = frame
        .grad_rho
        .times_i()
        .scale(C64::new(1.0 / frame.grad_rho_norm2, 0.0));
    Ok(FormsAtPoint {
        alpha,
        omega,
        metric_g,
        hermitian_h: frame.hermitian.clone(),
        grad_rho: frame.grad_rho.clone(),
        reeb,
        omega_finite_difference: omega_fd,
        fd_deviation,
    })
}

/// `dα(U, V) = U(α(V)) − V(α(U))` for constant domain fields, the outer
/// derivative by central differences of the exact `α`.
fn omega_finite_difference(model: &VarietyModel, sample: &PointSample, basis: &[TangentVector]) -> DMatrix<f64> {
    let step = FD_STEP * sample.scale().max(f64::MIN_POSITIVE.sqrt());
    let domain: Vec<Vec<C64>> = basis.iter().map(|e| e.to_domain(sample)).collect();
    let shifted = |dir: &[C64], s: f64| -> Vec<C64> {
        sample.point.iter().zip(dir).map(|(p, d)| p + d * s).collect()
    };
    let derivative = |along: &[C64], of: &[C64]| -> f64 {
        (model.alpha(&shifted(along, step), of) - model.alpha(&shifted(along, -step), of)) / (2.0 * step)
    };
    let n = basis.len();
    DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            0.0
        } else {
            derivative(&domain[a], &domain[b]) - derivative(&domain[b], &domain[a])
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::variety::sample_points;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn one_variable_at_z_equals_one() {
        // ρ = x² + y²: α = −d^cρ = 2x dy − 2y dx, ω = 4 dx∧dy.
        let model = VarietyModel::identity(1);
        let sample = PointSample::at(&model, vec![c(1.0, 0.0)]).unwrap();
        let forms = eval_forms(&model, &sample).unwrap();
        assert!((forms.alpha[0] - 0.0).abs() < 1e-15);
        assert!((forms.alpha[1] - 2.0).abs() < 1e-15);
        // ω(∂x, J∂x) = ω(∂x, ∂y)
        assert!((forms.omega[(0, 1)] - 4.0).abs() < 1e-14);
        assert!((forms.metric_g[(0, 0)] - 4.0).abs() < 1e-14);
        assert!(forms.fd_deviation < 1e-8);
    }

    #[test]
    fn forms_are_consistent_on_brieskorn_samples() {
        let model = VarietyModel::hypersurface(Polynomial::parse("z0^2 + z1^3 + z2^5", 3).unwrap());
        for sample in sample_points(&model, 0.01, 25, 2).unwrap() {
            let forms = eval_forms(&model, &sample).unwrap();
            let n = forms.omega.nrows();
            let basis = real_basis(sample.tangent_dim());
            let frame = Frame::new(&model, &sample).unwrap();
            for a in 0..n {
                assert!(forms.omega[(a, a)].abs() < 1e-12);
                for b in 0..n {
                    assert!((forms.omega[(a, b)] + forms.omega[(b, a)]).abs() < 1e-10);
                    assert!((forms.metric_g[(a, b)] - forms.metric_g[(b, a)]).abs() < 1e-10);
                    let h = frame.h(&basis[a], &basis[b]);
                    assert!((h.re - forms.metric_g[(a, b)]).abs() < 1e-10);
                    assert!((h.im - forms.omega[(a, b)]).abs() < 1e-10);
                }
            }
            assert!(forms.fd_deviation <= 1e-5, "fd deviation {}", forms.fd_deviation);
        }
    }

    #[test]
    fn non_immersive_chart_is_rejected() {
        // Φ(z) = (z0², z1) has dΦ singular along z0 = 0
        let map = vec![Polynomial::parse("z0^2", 2).unwrap(), Polynomial::parse("z1", 2).unwrap()];
        let model = VarietyModel::chart(2, map).unwrap();
        let sample = PointSample::at(&model, vec![c(0.0, 0.0), c(0.3, 0.0)]).unwrap();
        assert!(matches!(
            eval_forms(&model, &sample),
            Err(ContactError::DegenerateTangent { .. })
        ));
        let fine = PointSample::at(&model, vec![c(0.2, 0.1), c(0.3, 0.0)]).unwrap();
        assert!(eval_forms(&model, &fine).is_ok());
    }
}
