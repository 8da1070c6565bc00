//! The abstract 2×2 side of the Schrödinger family.
//!
//! With `E = [[0,1],[0,0]]`, `H = [[1,0],[0,-1]]`, `F = [[0,0],[1,0]]`, the
//! pencil `X_λ = λE + F` falls into one of three `SL₂(ℝ)`-conjugacy classes
//! according to the sign of λ (eigenvalues `±√λ`); `classify_and_conjugate`
//! returns an explicit determinant-one conjugator to the normal form.
//!
//! The monodromy `M = exp(-i ∮ dθ / c_λ(θ))` with
//! `c_λ(θ) = cos²θ - λ sin²θ` is unimodular exactly on the candidate set
//! `{-κ²/m²}`; off the real axis `|M| = exp(Im(λ) ∮ sin²θ/|c_λ|² dθ) ≠ 1`.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

pub type Mat2 = Matrix2<f64>;

pub fn mat_e() -> Mat2 {
    Mat2::new(0.0, 1.0, 0.0, 0.0)
}

pub fn mat_h() -> Mat2 {
    Mat2::new(1.0, 0.0, 0.0, -1.0)
}

pub fn mat_f() -> Mat2 {
    Mat2::new(0.0, 0.0, 1.0, 0.0)
}

/// `X_λ = λE + F`.
pub fn pencil_matrix(lambda: f64) -> Mat2 {
    mat_e() * lambda + mat_f()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConjugacyClass {
    /// Conjugate to `ν(F - E)`, `ν = √|λ|`.
    Elliptic(f64),
    /// Conjugate to `-E`.
    Nilpotent,
    /// Conjugate to `νH`, `ν = √λ`.
    Hyperbolic(f64),
}

impl ConjugacyClass {
    pub fn normal_form(&self) -> Mat2 {
        match *self {
            ConjugacyClass::Elliptic(nu) => (mat_f() - mat_e()) * nu,
            ConjugacyClass::Nilpotent => -mat_e(),
            ConjugacyClass::Hyperbolic(nu) => mat_h() * nu,
        }
    }
}

impl std::fmt::Display for ConjugacyClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ConjugacyClass::Elliptic(nu) => write!(f, "elliptic, nu={nu}"),
            ConjugacyClass::Nilpotent => write!(f, "nilpotent"),
            ConjugacyClass::Hyperbolic(nu) => write!(f, "hyperbolic, nu={nu}"),
        }
    }
}

/// Classifies `X_λ` and returns `A ∈ SL₂(ℝ)` with `A X_λ A⁻¹` equal to the
/// class normal form. The conjugator is built by explicit scaling /
/// rotation / diagonalization and re-verified by multiplication.
pub fn classify_and_conjugate(lambda: f64) -> (ConjugacyClass, Mat2) {
    let (class, a) = if lambda < 0.0 {
        let nu = (-lambda).sqrt();
        let s = nu.sqrt();
        (
            ConjugacyClass::Elliptic(nu),
            Mat2::new(1.0 / s, 0.0, 0.0, s),
        )
    } else if lambda == 0.0 {
        (ConjugacyClass::Nilpotent, Mat2::new(0.0, 1.0, -1.0, 0.0))
    } else {
        // Rows of A are left eigenvectors of X_λ, scaled to det 1.
        let nu = lambda.sqrt();
        let c = 1.0 / (2.0 * nu).sqrt();
        (
            ConjugacyClass::Hyperbolic(nu),
            Mat2::new(c, c * nu, -c, c * nu),
        )
    };
    debug_assert!((a.determinant() - 1.0).abs() < 1e-12);
    debug_assert!(
        (a * pencil_matrix(lambda) * a.try_inverse().unwrap() - class.normal_form())
            .abs()
            .max()
            < 1e-12
    );
    (class, a)
}

#[derive(Debug, Error)]
pub enum PencilError {
    #[error("monodromy undefined for lambda on [0, inf): c_lambda vanishes on the contour")]
    RealNonnegativeLambda,
    #[error("quadrature did not converge to 1e-12 (last increment {0:.3e})")]
    QuadratureDiverged(f64),
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MonodromyResult {
    pub lambda: (f64, f64),
    /// `I(λ) = ∫₀^{2π} dθ/c_λ(θ)` as (re, im).
    pub integral: (f64, f64),
    /// `M = exp(-i I)` as (re, im).
    pub monodromy: (f64, f64),
    pub abs_m: f64,
    /// `|M|` recomputed from `exp(Im(λ) ∫ sin²θ/|c_λ|² dθ)`.
    pub abs_m_formula: f64,
}

/// Gauss–Legendre nodes and weights on [-1, 1] (Golub–Welsch).
fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(m, m);
    for k in 1..m {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

fn c_lambda(lambda: Complex64, theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c * c, 0.0) - lambda * (s * s)
}

/// Periodic contour integral of `f(θ)` over `[0, 2π]` by composite 32-point
/// Gauss–Legendre panels, with the panel count doubled from four (one per
/// quarter period) until two successive values agree to 1e-12.
fn contour_integral<T, F>(f: F) -> Result<T, PencilError>
where
    T: Copy
        + std::ops::Add<Output = T>
        + std::ops::Sub<Output = T>
        + std::ops::Mul<f64, Output = T>
        + Default
        + Normed,
    F: Fn(f64) -> T,
{
    let (x, w) = gauss_legendre(32);
    let mut panels = 4usize;
    let mut prev: Option<T> = None;
    loop {
        let h = 2.0 * std::f64::consts::PI / panels as f64;
        let mut acc = T::default();
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (&xi, &wi) in x.iter().zip(&w) {
                acc = acc + f(mid + 0.5 * h * xi) * (0.5 * h * wi);
            }
        }
        if let Some(prev) = prev {
            let inc = (acc - prev).norm_value();
            if inc < 1e-12 * acc.norm_value().max(1.0) {
                return Ok(acc);
            }
            if panels > 1 << 16 {
                return Err(PencilError::QuadratureDiverged(inc));
            }
        }
        prev = Some(acc);
        panels *= 2;
    }
}

/// Helper trait so the panel-doubling loop can measure convergence for both
/// real and complex accumulators.
pub trait Normed {
    fn norm_value(&self) -> f64;
}

impl Normed for f64 {
    fn norm_value(&self) -> f64 {
        self.abs()
    }
}

impl Normed for Complex64 {
    fn norm_value(&self) -> f64 {
        self.norm()
    }
}

/// Monodromy of the Schrödinger pencil at `λ ∉ [0, ∞)`.
pub fn monodromy(lambda: Complex64) -> Result<MonodromyResult, PencilError> {
    if lambda.im == 0.0 && lambda.re >= 0.0 {
        return Err(PencilError::RealNonnegativeLambda);
    }
    let integral: Complex64 = contour_integral(|theta| c_lambda(lambda, theta).inv())?;
    let m = (-Complex64::i() * integral).exp();
    let sin2_over_abs: f64 = contour_integral(|theta| {
        let s = theta.sin();
        s * s / c_lambda(lambda, theta).norm_sqr()
    })?;
    Ok(MonodromyResult {
        lambda: (lambda.re, lambda.im),
        integral: (integral.re, integral.im),
        monodromy: (m.re, m.im),
        abs_m: m.norm(),
        abs_m_formula: (lambda.im * sin2_over_abs).exp(),
    })
}

/// Closed form `I(λ) = 2π/√|λ|` for real `λ < 0`.
pub fn closed_form_integral(lambda: f64) -> f64 {
    assert!(lambda < 0.0);
    2.0 * std::f64::consts::PI / (-lambda).sqrt()
}

/// The monodromy-admissible negative candidate set `{-κ²/m² : m ≤ m_max}`.
/// This contains the bound-state spectrum `{-κ²/(4n)²·4} = {-κ²/(2n)²}`
/// as the even-m half; membership is necessary, not sufficient.
pub fn candidate_spectrum(kappa: f64, m_max: u32) -> Vec<f64> {
    assert!(kappa > 0.0);
    (1..=m_max)
        .map(|m| -kappa * kappa / ((m * m) as f64))
        .collect()
}

/// `|M(λ) - 1|` sampled over a real negative grid `[a, b]` with the given
/// step; returns `(λ, |M-1|)` pairs.
pub fn monodromy_scan(a: f64, b: f64, step: f64) -> Result<Vec<(f64, f64)>, PencilError> {
    assert!(a < b && b < 0.0 && step > 0.0);
    let mut out = Vec::new();
    let mut lam = a;
    while lam <= b + 1e-15 {
        let r = monodromy(Complex64::new(lam, 0.0))?;
        let m = Complex64::new(r.monodromy.0, r.monodromy.1);
        out.push((lam, (m - Complex64::new(1.0, 0.0)).norm()));
        lam += step;
    }
    Ok(out)
}
