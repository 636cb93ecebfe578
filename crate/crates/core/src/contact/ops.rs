//! Numerical checks of the contact structure `ker α` on `M_{ρ,ε}` and of the
//! Milnor open book `θ = arg f` against it.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::forms::{real_basis, Frame, TangentVector};
use super::poly::{Polynomial, C64};
use super::variety::{sample_points, PointSample, VarietyModel};
use crate::error::ContactError;

/// `|f(p)|` below this fraction of `f`'s term magnitude counts as on the
/// binding.
pub const BINDING_TOL: f64 = 1e-12;
/// Relative size of `pr_ξ ∇θ` below which `∇θ` counts as proportional to
/// `i∇ρ` in the adaptation search.
pub const CONE_TOL: f64 = 1e-9;
pub const DEFAULT_PROPORTIONALITY_TOL: f64 = 1e-3;
/// Default `η` relative to `max |f|²` on the mesh.
pub const DEFAULT_ETA_FRACTION: f64 = 1e-4;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Values of a holomorphic function at a sample.
struct FunctionAt {
    value: C64,
    /// `df(v) = b^T v`.
    differential: DVector<C64>,
}

impl FunctionAt {
    fn new(frame: &Frame<'_>, f: &Polynomial) -> Self {
        Self {
            value: f.eval(&frame.sample.point),
            differential: frame.differential(f),
        }
    }

    fn df(&self, v: &TangentVector) -> C64 {
        (self.differential.transpose() * &v.0)[(0, 0)]
    }

    /// `dθ = Im(df / f)`.
    fn d_theta(&self, v: &TangentVector) -> f64 {
        (self.df(v) / self.value).im
    }

    /// `∇θ = i∇f / f̄`.
    fn grad_theta(&self, frame: &Frame<'_>) -> TangentVector {
        frame
            .real_gradient(&self.differential)
            .scale(C64::i() / self.value.conj())
    }

    fn on_binding(&self, f: &Polynomial, point: &[C64]) -> bool {
        let magnitude = f.magnitude(point);
        self.value.norm() <= BINDING_TOL * magnitude || magnitude == 0.0
    }
}

fn ensure_off_binding(at: &FunctionAt, f: &Polynomial, point: &[C64]) -> Result<(), ContactError> {
    if at.on_binding(f, point) {
        Err(ContactError::OnBinding {
            modulus: at.value.norm(),
        })
    } else {
        Ok(())
    }
}

fn complex_normal(rng: &mut ChaCha8Rng, d: usize) -> TangentVector {
    TangentVector(DVector::from_fn(d, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpshReport {
    /// Minimum of `ω(v, Jv) / ‖v‖²` over the random trials.
    pub min_levi_quotient: f64,
    /// Minimum over samples of the least eigenvalue of `h` in the
    /// orthonormal tangent basis (the exact infimum of the quotient).
    pub min_eigen_quotient: f64,
    pub samples: usize,
    pub trials: usize,
}

/// Minimum Levi quotient `ω(v, Jv) / ‖v‖²` over samples and random `v`.
pub fn check_spsh(
    model: &VarietyModel,
    samples: &[PointSample],
    trials: usize,
    seed: u64,
) -> Result<SpshReport, ContactError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_levi = f64::INFINITY;
    let mut min_eigen = f64::INFINITY;
    for sample in samples {
        let frame = Frame::new(model, sample)?;
        for _ in 0..trials {
            let v = complex_normal(&mut rng, frame.dim());
            let norm2 = v.ambient_norm().powi(2);
            if norm2 == 0.0 {
                continue;
            }
            let quotient = frame.omega_determinant(&v, &v.times_i()) / norm2;
            min_levi = min_levi.min(quotient);
        }
        let eigen = frame.hermitian.clone().symmetric_eigenvalues().min();
        min_eigen = min_eigen.min(eigen);
    }
    Ok(SpshReport {
        min_levi_quotient: min_levi,
        min_eigen_quotient: min_eigen,
        samples: samples.len(),
        trials,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradientCheck {
    pub gradient: TangentVector,
    /// Relative deviation of `2φ∇φ` from the `g`-gradient of `|φ|²`.
    pub modulus_residual: f64,
    /// Relative deviation of `i∇φ/φ̄` from the `g`-gradient of `arg φ`;
    /// `None` where `φ` vanishes.
    pub argument_residual: Option<f64>,
}

/// The vector `∇φ` with `h(∇φ, ·) = dφ`, plus the gradient identities for
/// `|φ|²` and `arg φ`, each checked against a gradient obtained by solving
/// with the real matrix of `g`.
pub fn holomorphic_gradient(
    model: &VarietyModel,
    sample: &PointSample,
    phi: &Polynomial,
) -> Result<GradientCheck, ContactError> {
    model.check_function(phi)?;
    let frame = Frame::new(model, sample)?;
    let gradient = frame.holomorphic_gradient(phi);
    let at = FunctionAt::new(&frame, phi);

    let basis = real_basis(frame.dim());
    let n = basis.len();
    let gram = DMatrix::from_fn(n, n, |a, b| frame.g(&basis[a], &basis[b]));
    let lu = gram.lu();
    let solve_real = |covector: DVector<f64>| -> Result<TangentVector, ContactError> {
        let x = lu.solve(&covector).ok_or(ContactError::SingularMetric)?;
        Ok(TangentVector(DVector::from_fn(frame.dim(), |j, _| C64::new(x[2 * j], x[2 * j + 1]))))
    };
    let relative = |a: &TangentVector, b: &TangentVector| -> f64 {
        let scale = frame.norm2(b).sqrt().max(frame.norm2(a).sqrt());
        if scale == 0.0 {
            0.0
        } else {
            frame.norm2(&a.sub(b)).sqrt() / scale
        }
    };

    let d_modulus = DVector::from_fn(n, |a, _| 2.0 * (at.value.conj() * at.df(&basis[a])).re);
    let real_route = solve_real(d_modulus)?;
    let modulus_residual = relative(&gradient.scale(at.value * 2.0), &real_route);

    let argument_residual = if at.on_binding(phi, &sample.point) {
        None
    } else {
        let d_arg = DVector::from_fn(n, |a, _| at.d_theta(&basis[a]));
        let real_route = solve_real(d_arg)?;
        let formula = gradient.scale(C64::i() / at.value.conj());
        Some(relative(&formula, &real_route))
    };
    Ok(GradientCheck {
        gradient,
        modulus_residual,
        argument_residual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReebCheck {
    pub reeb: TangentVector,
    pub alpha_of_reeb: f64,
    /// `max |ω(R, v)| / ‖v‖` over a basis of level-tangent vectors `v`.
    pub max_omega_defect: f64,
    /// `|dρ(R)| / ‖R‖`; zero when `R` is tangent to the level.
    pub level_defect: f64,
}

/// `R = i∇ρ / ‖∇ρ‖²` with its defining contract measured.
pub fn reeb_field(model: &VarietyModel, sample: &PointSample) -> Result<ReebCheck, ContactError> {
    let frame = Frame::new(model, sample)?;
    reeb_in_frame(&frame)
}

fn reeb_in_frame(frame: &Frame<'_>) -> Result<ReebCheck, ContactError> {
    if !(frame.grad_rho_norm2 > 0.0) {
        return Err(ContactError::ZeroGradient);
    }
    let reeb = frame.grad_rho.times_i().scale(real(1.0 / frame.grad_rho_norm2));
    let max_omega_defect = frame
        .level_basis()
        .iter()
        .map(|v| frame.omega(&reeb, v).abs() / v.ambient_norm())
        .fold(0.0, f64::max);
    Ok(ReebCheck {
        alpha_of_reeb: frame.alpha(&reeb),
        level_defect: frame.d_rho(&reeb).abs() / reeb.ambient_norm(),
        max_omega_defect,
        reeb,
    })
}

fn xi_projection_in_frame(frame: &Frame<'_>, w: &TangentVector) -> TangentVector {
    let coeff = frame.h(&frame.grad_rho, w) / frame.grad_rho_norm2;
    w.sub(&frame.grad_rho.scale(coeff))
}

/// `h`-orthogonal projection onto `ξ`, killing the complex line `C·∇ρ`.
pub fn xi_projection(
    model: &VarietyModel,
    sample: &PointSample,
    w: &TangentVector,
) -> Result<TangentVector, ContactError> {
    let frame = Frame::new(model, sample)?;
    if !(frame.grad_rho_norm2 > 0.0) {
        return Err(ContactError::ZeroGradient);
    }
    Ok(xi_projection_in_frame(&frame, w))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionCheck {
    /// `|h(pr w, ∇ρ)| / (‖w‖‖∇ρ‖)`.
    pub orthogonality: f64,
    pub d_rho: f64,
    pub dc_rho: f64,
    /// `‖pr(pr w) − pr w‖ / ‖w‖`.
    pub idempotence: f64,
}

pub fn check_xi_projection(
    model: &VarietyModel,
    sample: &PointSample,
    w: &TangentVector,
) -> Result<ProjectionCheck, ContactError> {
    let frame = Frame::new(model, sample)?;
    if !(frame.grad_rho_norm2 > 0.0) {
        return Err(ContactError::ZeroGradient);
    }
    let pr = xi_projection_in_frame(&frame, w);
    let w_norm = frame.norm2(w).sqrt().max(f64::MIN_POSITIVE);
    let grad_norm = frame.grad_rho_norm2.sqrt();
    let twice = xi_projection_in_frame(&frame, &pr);
    Ok(ProjectionCheck {
        orthogonality: frame.h(&pr, &frame.grad_rho).norm() / (w_norm * grad_norm),
        d_rho: frame.d_rho(&pr).abs() / (w_norm * grad_norm),
        dc_rho: frame.dc_rho(&pr).abs() / (w_norm * grad_norm),
        idempotence: frame.norm2(&twice.sub(&pr)).sqrt() / w_norm,
    })
}

/// Reeb field of `α_c = e^{−c|f|²} α` on the level, found by solving
/// `α_c(R_c) = 1`, `ι_{R_c} dα_c = 0` on `ker dρ` (least squares).
fn solve_rescaled_reeb(frame: &Frame<'_>, at: &FunctionAt, c: f64) -> Result<TangentVector, ContactError> {
    let basis = frame.level_basis();
    let k = basis.len();
    let modulus2 = at.value.norm_sqr();
    let weight = (-c * modulus2).exp();
    // dH = −c H d|f|², d|f|²(v) = 2 Re(f̄ df(v))
    let d_weight = |v: &TangentVector| -c * weight * 2.0 * (at.value.conj() * at.df(v)).re;
    let d_alpha_c = |u: &TangentVector, v: &TangentVector| {
        d_weight(u) * frame.alpha(v) - d_weight(v) * frame.alpha(u) + weight * frame.omega(u, v)
    };
    let mut system = DMatrix::<f64>::zeros(k + 1, k);
    let mut rhs = DVector::<f64>::zeros(k + 1);
    for a in 0..k {
        for b in 0..k {
            system[(a, b)] = d_alpha_c(&basis[b], &basis[a]);
        }
    }
    for b in 0..k {
        system[(k, b)] = weight * frame.alpha(&basis[b]);
    }
    rhs[k] = 1.0;
    let qr = system.qr();
    let y = qr
        .r()
        .solve_upper_triangular(&(qr.q().transpose() * rhs))
        .ok_or(ContactError::SingularMetric)?;
    let mut out = TangentVector::zeros(frame.dim());
    for (b, v) in basis.iter().enumerate() {
        out = out.add(&v.scale(real(y[b])));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResidual {
    /// `dθ(R_c)` with `R_c` solved from its defining equations.
    pub lhs: f64,
    /// `e^{c|f|²}(dθ(R) + 2c|f|²‖pr_ξ ∇θ‖²)`.
    pub rhs: f64,
    /// `|lhs − rhs| / (1 + |lhs|)`.
    pub residual: f64,
    /// Same comparison for `R_c = e^{c|f|²}(R + pr_ξ(2c|f|²∇θ))`.
    pub construction_residual: f64,
}

/// Checks the formula for `dθ` on the Reeb field of the rescaled form.
pub fn rescaled_reeb_identity(
    model: &VarietyModel,
    f: &Polynomial,
    c: f64,
    sample: &PointSample,
) -> Result<IdentityResidual, ContactError> {
    model.check_function(f)?;
    let frame = Frame::new(model, sample)?;
    let at = FunctionAt::new(&frame, f);
    ensure_off_binding(&at, f, &sample.point)?;
    let reeb = reeb_in_frame(&frame)?.reeb;
    let modulus2 = at.value.norm_sqr();
    let grad_theta = at.grad_theta(&frame);
    let projected = xi_projection_in_frame(&frame, &grad_theta);
    let growth = (c * modulus2).exp();
    let rhs = growth * (at.d_theta(&reeb) + 2.0 * c * modulus2 * frame.norm2(&projected));

    let solved = solve_rescaled_reeb(&frame, &at, c)?;
    let lhs = at.d_theta(&solved);

    let shift = xi_projection_in_frame(&frame, &grad_theta.scale(real(2.0 * c * modulus2)));
    let constructed = reeb.add(&shift).scale(real(growth));
    let constructed_value = at.d_theta(&constructed);

    Ok(IdentityResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / (1.0 + lhs.abs()),
        construction_residual: (constructed_value - rhs).abs() / (1.0 + constructed_value.abs()),
    })
}

/// Per-point quantities entering the choice of `c`.
struct AdaptationPoint {
    modulus2: f64,
    d_theta_r: f64,
    projected_norm2: f64,
    ratio: f64,
}

fn adaptation_point(frame: &Frame<'_>, at: &FunctionAt) -> Result<AdaptationPoint, ContactError> {
    let reeb = reeb_in_frame(frame)?.reeb;
    let grad_theta = at.grad_theta(frame);
    let projected = xi_projection_in_frame(frame, &grad_theta);
    let projected_norm2 = frame.norm2(&projected);
    let full = frame.norm2(&grad_theta);
    Ok(AdaptationPoint {
        modulus2: at.value.norm_sqr(),
        d_theta_r: at.d_theta(&reeb),
        projected_norm2,
        ratio: if full > 0.0 { (projected_norm2 / full).sqrt() } else { 0.0 },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdaptationReport {
    pub c: f64,
    pub verified: bool,
    /// `max(0, −min dθ(R))` over the region.
    pub m: f64,
    /// `min |f|²‖pr_ξ ∇θ‖²` over region points with `dθ(R) ≤ 0`;
    /// `None` when there are none.
    pub k: Option<f64>,
    pub eta: f64,
    pub mesh: usize,
    /// Mesh points with `|f|² ≥ η`.
    pub region_points: usize,
    /// Region points with `dθ(R) ≤ 0`.
    pub nonpositive_points: usize,
    /// Minimum of `dθ(R_c)` over the region, `R_c` solved directly.
    pub min_d_theta_rc: f64,
}

/// `c = m/k` over a mesh of the level, then a direct check of
/// `dθ(R_c) > 0` at every region point.
pub fn find_adaptation_constant(
    model: &VarietyModel,
    f: &Polynomial,
    epsilon: f64,
    eta: Option<f64>,
    mesh: usize,
    seed: u64,
) -> Result<AdaptationReport, ContactError> {
    if mesh == 0 {
        return Err(ContactError::InvalidMesh);
    }
    model.check_function(f)?;
    let samples = sample_points(model, epsilon, mesh, seed)?;
    let eta = resolve_eta(f, &samples, eta);

    let mut region = Vec::new();
    for sample in &samples {
        let modulus2 = f.eval(&sample.point).norm_sqr();
        if modulus2 >= eta && modulus2 > 0.0 {
            let frame = Frame::new(model, sample)?;
            let at = FunctionAt::new(&frame, f);
            region.push((sample, adaptation_point(&frame, &at)?));
        }
    }
    if region.is_empty() {
        return Err(ContactError::EmptyRegion { eta });
    }

    let min_d_theta = region.iter().map(|(_, p)| p.d_theta_r).fold(f64::INFINITY, f64::min);
    let m = (-min_d_theta).max(0.0);
    let mut k: Option<f64> = None;
    let mut nonpositive_points = 0;
    for (index, (_, p)) in region.iter().enumerate() {
        if p.d_theta_r > 0.0 {
            continue;
        }
        nonpositive_points += 1;
        if p.ratio < CONE_TOL {
            return Err(ContactError::ConeViolation {
                index,
                dtheta_r: p.d_theta_r,
                ratio: p.ratio,
            });
        }
        let value = p.modulus2 * p.projected_norm2;
        k = Some(k.map_or(value, |x: f64| x.min(value)));
    }
    let c = match k {
        Some(k) => m / k,
        None => 0.0,
    };

    let mut min_d_theta_rc = f64::INFINITY;
    for (sample, _) in &region {
        let frame = Frame::new(model, sample)?;
        let at = FunctionAt::new(&frame, f);
        let rc = solve_rescaled_reeb(&frame, &at, c)?;
        min_d_theta_rc = min_d_theta_rc.min(at.d_theta(&rc));
    }
    Ok(AdaptationReport {
        c,
        verified: min_d_theta_rc > 0.0,
        m,
        k,
        eta,
        mesh,
        region_points: region.len(),
        nonpositive_points,
        min_d_theta_rc,
    })
}

fn resolve_eta(f: &Polynomial, samples: &[PointSample], eta: Option<f64>) -> f64 {
    eta.unwrap_or_else(|| {
        let max = samples
            .iter()
            .map(|s| f.eval(&s.point).norm_sqr())
            .fold(0.0, f64::max);
        DEFAULT_ETA_FRACTION * max
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeReport {
    pub proportionality_tol: f64,
    pub samples: usize,
    pub on_binding: usize,
    pub qualifying: usize,
    pub min_re_lambda: Option<f64>,
    /// Largest `|arg λ|`, branch `(−π, π]`.
    pub max_abs_arg: Option<f64>,
}

impl ConeReport {
    pub fn is_empty(&self) -> bool {
        self.qualifying == 0
    }

    pub fn passes(&self) -> bool {
        self.min_re_lambda.is_none_or(|x| x > 0.0)
    }
}

/// Where `∇θ ≈ iλ∇ρ`, reports `λ = h(i∇ρ, ∇θ) / ‖∇ρ‖²`.
pub fn lambda_cone_check(
    model: &VarietyModel,
    f: &Polynomial,
    samples: &[PointSample],
    proportionality_tol: f64,
) -> Result<ConeReport, ContactError> {
    model.check_function(f)?;
    let mut report = ConeReport {
        proportionality_tol,
        samples: samples.len(),
        on_binding: 0,
        qualifying: 0,
        min_re_lambda: None,
        max_abs_arg: None,
    };
    for sample in samples {
        let frame = Frame::new(model, sample)?;
        let at = FunctionAt::new(&frame, f);
        if at.on_binding(f, &sample.point) {
            report.on_binding += 1;
            continue;
        }
        let grad_theta = at.grad_theta(&frame);
        let full = frame.norm2(&grad_theta).sqrt();
        let projected = frame.norm2(&xi_projection_in_frame(&frame, &grad_theta)).sqrt();
        if full == 0.0 || projected > proportionality_tol * full {
            continue;
        }
        let lambda = frame.h(&frame.grad_rho.times_i(), &grad_theta) / frame.grad_rho_norm2;
        let arg = principal_arg(lambda);
        report.qualifying += 1;
        report.min_re_lambda = Some(report.min_re_lambda.map_or(lambda.re, |m| m.min(lambda.re)));
        report.max_abs_arg = Some(report.max_abs_arg.map_or(arg.abs(), |m| m.max(arg.abs())));
    }
    Ok(report)
}

/// Argument in `(−π, π]`.
pub fn principal_arg(z: C64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub eta: f64,
    pub mesh: usize,
    pub outer_points: usize,
    pub inner_points: usize,
    /// `min ‖dθ|_{TM}‖` over `|f|² ≥ η`; `None` when that set is empty.
    pub min_d_theta: Option<f64>,
    /// Smallest singular value of `df|_{TM}` over `|f|² ≤ η`; `None` when
    /// that set is empty.
    pub min_df: Option<f64>,
}

impl CriterionReport {
    pub fn passes(&self) -> bool {
        self.min_d_theta.is_none_or(|x| x > 0.0) && self.min_df.is_none_or(|x| x > 0.0)
    }
}

/// Checks the two open-book hypotheses on a mesh: `dθ ≠ 0` away from the
/// binding and `df` a submersion near it, both restricted to the level.
pub fn openbook_criterion_check(
    model: &VarietyModel,
    f: &Polynomial,
    epsilon: f64,
    eta: Option<f64>,
    mesh: usize,
    seed: u64,
) -> Result<CriterionReport, ContactError> {
    if mesh == 0 {
        return Err(ContactError::InvalidMesh);
    }
    model.check_function(f)?;
    let samples = sample_points(model, epsilon, mesh, seed)?;
    let eta = resolve_eta(f, &samples, eta);
    let mut report = CriterionReport {
        eta,
        mesh,
        outer_points: 0,
        inner_points: 0,
        min_d_theta: None,
        min_df: None,
    };
    for sample in &samples {
        let frame = Frame::new(model, sample)?;
        let at = FunctionAt::new(&frame, f);
        let modulus2 = at.value.norm_sqr();
        if modulus2 >= eta && !at.on_binding(f, &sample.point) {
            report.outer_points += 1;
            let restricted = frame.to_level(&at.grad_theta(&frame));
            let norm = frame.norm2(&restricted).sqrt();
            report.min_d_theta = Some(report.min_d_theta.map_or(norm, |m| m.min(norm)));
        } else {
            report.inner_points += 1;
            // gradients of Re f and Im f, restricted to the level
            let grad_re = frame.to_level(&frame.real_gradient(&at.differential));
            let grad_im = frame.to_level(&frame.real_gradient(&at.differential.map(|b| -b * C64::i())));
            let gram = nalgebra::Matrix2::new(
                frame.g(&grad_re, &grad_re),
                frame.g(&grad_re, &grad_im),
                frame.g(&grad_im, &grad_re),
                frame.g(&grad_im, &grad_im),
            );
            let sigma = gram.symmetric_eigenvalues().min().max(0.0).sqrt();
            report.min_df = Some(report.min_df.map_or(sigma, |m| m.min(sigma)));
        }
    }
    Ok(report)
}
