//! Floating-point spectral layer for the radial Schrödinger family on the
//! half line with the measure `(1/2) t dt`.
//!
//! The discretization basis is
//! `φ_k(t) = N_k t^l e^{-βt/2} L_k^{(2l+1)}(βt)`, orthonormal for the
//! measure; the eigenvalue problem `(t d^2 + 2d - l(l+1)/t + κ) ψ = -λ t ψ`
//! becomes the symmetric-definite pencil `A ψ = -λ B ψ`, whose negative
//! eigenvalues approximate the bound states `-κ²/(4n²)`, `n > l`.
//!
//! All integrals use Gauss–Laguerre quadrature after factoring `e^{-βt}`,
//! so polynomial integrands are handled exactly up to rounding. To stay in
//! range at several hundred nodes, every Laguerre evaluation is carried in
//! the scaled form `e^{-x/2} L_k(x)` and the quadrature weights are carried
//! with the `e^{x}` factor already multiplied in.

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("basis parameters must be positive (size {0}, beta {1})")]
    BadParameters(usize, f64),
    #[error("assembled matrix asymmetry {0:.3e} exceeds 1e-10")]
    Asymmetric(f64),
    #[error("mass matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("level n={0} detected in a pencil with l >= n")]
    SpuriousLevel(u32),
}

/// Scaled Laguerre values `ψ_k(x) = e^{-x/2} L_k^{(α)}(x)` for
/// `k = 0..=k_max`, by the three-term recurrence.
///
/// The recurrence runs on internally rescaled values with the exponent
/// tracked separately: at large `x` the seed `e^{-x/2}` underflows while
/// `ψ_k` for large `k` is of order one, so a plain f64 recurrence would
/// flush the entire sequence to zero.
fn scaled_laguerre(k_max: usize, alpha: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    // Actual ψ_k = value_k · exp(log_scale).
    let mut log_scale = -x / 2.0;
    let mut prev = 0.0f64; // ψ_{-1}
    let mut cur = 1.0f64; // ψ_0 / exp(log_scale)
    let emit = |v: f64, log_scale: f64| -> f64 {
        if v == 0.0 {
            0.0
        } else {
            v.signum() * (log_scale + v.abs().ln()).exp()
        }
    };
    out.push(emit(cur, log_scale));
    for k in 0..k_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let mag = prev.abs().max(cur.abs());
        if mag > 1e200 {
            prev *= 1e-200;
            cur *= 1e-200;
            log_scale += 200.0 * std::f64::consts::LN_10;
        } else if mag != 0.0 && mag < 1e-200 {
            prev *= 1e200;
            cur *= 1e200;
            log_scale -= 200.0 * std::f64::consts::LN_10;
        }
        out.push(emit(cur, log_scale));
    }
    out
}

/// Gauss–Laguerre rule (weight `e^{-x}` on `[0, ∞)`), returned with the
/// exponential factored back in: `∫ f(x) dx ≈ Σ W_q f(x_q)` exactly for
/// `f = polynomial × e^{-x}` of degree < 2m.
pub fn gauss_laguerre_total(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    // Golub–Welsch: nodes are eigenvalues of the Jacobi matrix
    // diag(1, 3, 5, ...) with off-diagonal (1, 2, 3, ...).
    let mut j = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        j[(i, i)] = 2.0 * i as f64 + 1.0;
        if i + 1 < m {
            j[(i, i + 1)] = (i + 1) as f64;
            j[(i + 1, i)] = (i + 1) as f64;
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Total weights via W_q = x_q / ((m+1) ψ_{m+1}(x_q))² with
    // ψ = e^{-x/2} L; this is w_q e^{x_q} evaluated without under/overflow.
    let weights = nodes
        .iter()
        .map(|&x| {
            let psi = scaled_laguerre(m + 1, 0.0, x)[m + 1];
            let d = (m as f64 + 1.0) * psi;
            x / (d * d)
        })
        .collect();
    (nodes, weights)
}

/// Orthonormal Laguerre-type basis on the half line with the measure
/// `(1/2) t dt`, tabulated with first and second derivatives on a
/// Gauss–Laguerre grid matched to the basis scale.
pub struct RadialBasis {
    pub ell: u32,
    pub size: usize,
    pub beta: f64,
    /// Quadrature nodes in the physical variable `t`.
    t: Vec<f64>,
    /// Measure weights: `Σ_q mw_q f(t_q) ≈ ∫ f(t) (1/2) t dt`.
    mw: Vec<f64>,
    phi: DMatrix<f64>,
    dphi: DMatrix<f64>,
    ddphi: DMatrix<f64>,
}

impl RadialBasis {
    pub fn build(ell: u32, size: usize, beta: f64) -> Result<Self, SpectralError> {
        if size == 0 || beta.is_nan() || beta <= 0.0 {
            return Err(SpectralError::BadParameters(size, beta));
        }
        let m = size + ell as usize + 6;
        let (x, w_total) = gauss_laguerre_total(m);
        let t: Vec<f64> = x.iter().map(|&xi| xi / beta).collect();
        let mw: Vec<f64> = w_total
            .iter()
            .zip(&t)
            .map(|(&wi, &ti)| 0.5 * ti * wi / beta)
            .collect();

        let alpha = 2.0 * ell as f64 + 1.0;
        // Orthonormalization constants, built iteratively:
        // N_0 = sqrt(2 β^{2l+2} / (2l+1)!), N_k = N_{k-1} sqrt(k/(k+2l+1)).
        let mut norms = Vec::with_capacity(size);
        let mut fact = 1.0f64;
        for j in 1..=(2 * ell + 1) {
            fact *= j as f64;
        }
        let mut nk = (2.0 * beta.powi(2 * ell as i32 + 2) / fact).sqrt();
        norms.push(nk);
        for k in 1..size {
            nk *= (k as f64 / (k as f64 + 2.0 * ell as f64 + 1.0)).sqrt();
            norms.push(nk);
        }

        let mut phi = DMatrix::<f64>::zeros(size, m);
        let mut dphi = DMatrix::<f64>::zeros(size, m);
        let mut ddphi = DMatrix::<f64>::zeros(size, m);
        for (q, (&xq, &tq)) in x.iter().zip(&t).enumerate() {
            // g = e^{-x/2} L_k^{(α)}, with derivatives in x through the
            // shifted families α+1, α+2.
            let ga = scaled_laguerre(size.saturating_sub(1), alpha, xq);
            let gb = scaled_laguerre(size.saturating_sub(1), alpha + 1.0, xq);
            let gc = scaled_laguerre(size.saturating_sub(1), alpha + 2.0, xq);
            let le = ell as f64;
            let tl = tq.powi(ell as i32);
            for k in 0..size {
                let g = ga[k];
                let g1 = -0.5 * g - if k >= 1 { gb[k - 1] } else { 0.0 };
                let g2 = 0.25 * g
                    + if k >= 1 { gb[k - 1] } else { 0.0 }
                    + if k >= 2 { gc[k - 2] } else { 0.0 };
                let nk = norms[k];
                phi[(k, q)] = nk * tl * g;
                let mut d1 = nk * tl * beta * g1;
                if ell >= 1 {
                    d1 += nk * le * tq.powi(ell as i32 - 1) * g;
                }
                dphi[(k, q)] = d1;
                let mut d2 = nk * tl * beta * beta * g2;
                if ell >= 1 {
                    d2 += nk * 2.0 * le * beta * tq.powi(ell as i32 - 1) * g1;
                }
                if ell >= 2 {
                    d2 += nk * le * (le - 1.0) * tq.powi(ell as i32 - 2) * g;
                }
                ddphi[(k, q)] = d2;
            }
        }
        Ok(RadialBasis {
            ell,
            size,
            beta,
            t,
            mw,
            phi,
            dphi,
            ddphi,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.t
    }

    /// Gram matrix under the half-line measure; identity up to rounding.
    pub fn gram(&self) -> DMatrix<f64> {
        self.weighted_product(&self.phi)
    }

    /// `G_ij = Σ_q mw_q φ_i(t_q) v_j(t_q)` for a value table `v`.
    fn weighted_product(&self, values: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.t.len();
        let mut scaled = values.clone();
        for q in 0..m {
            for k in 0..self.size {
                scaled[(k, q)] *= self.mw[q];
            }
        }
        &self.phi * scaled.transpose()
    }

    /// Apply the differential operator with smooth coefficient functions
    /// `c2 t d² + c1 d + c0(t)` pointwise to all tabulated basis functions.
    fn apply_pointwise<F: Fn(f64) -> f64>(
        &self,
        second: F,
        first: impl Fn(f64) -> f64,
        zeroth: impl Fn(f64) -> f64,
    ) -> DMatrix<f64> {
        let m = self.t.len();
        let mut out = DMatrix::<f64>::zeros(self.size, m);
        for q in 0..m {
            let t = self.t[q];
            let (c2, c1, c0) = (second(t), first(t), zeroth(t));
            for k in 0..self.size {
                out[(k, q)] =
                    c2 * self.ddphi[(k, q)] + c1 * self.dphi[(k, q)] + c0 * self.phi[(k, q)];
            }
        }
        out
    }

    fn centrifugal(&self) -> f64 {
        (self.ell * (self.ell + 1)) as f64
    }
}

/// Symmetric matrix pair for `A ψ = -λ B ψ`.
pub struct Pencil {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

fn symmetrize(m: DMatrix<f64>) -> Result<DMatrix<f64>, SpectralError> {
    // Relative to the matrix scale: entries grow with the basis size, so an
    // absolute threshold would flag plain quadrature round-off.
    let dev = (&m - m.transpose()).abs().max() / m.abs().max().max(1.0);
    if dev > 1e-10 {
        return Err(SpectralError::Asymmetric(dev));
    }
    Ok((&m + m.transpose()) * 0.5)
}

/// `A_ij = <φ_i, (t d² + 2d - l(l+1)/t + κ) φ_j>`, `B_ij = <φ_i, t φ_j>`.
pub fn assemble_pencil(basis: &RadialBasis, kappa: f64) -> Result<Pencil, SpectralError> {
    let c = basis.centrifugal();
    let op = basis.apply_pointwise(|t| t, |_| 2.0, |t| kappa - c / t);
    let a = symmetrize(basis.weighted_product(&op))?;
    let bt = basis.apply_pointwise(|_| 0.0, |_| 0.0, |t| t);
    let b = symmetrize(basis.weighted_product(&bt))?;
    Ok(Pencil { a, b })
}

/// All pencil eigenvalues λ (from `A ψ = -λ B ψ`), ascending. Solved by
/// Cholesky reduction of the positive definite `B` to a standard symmetric
/// problem.
pub fn pencil_eigenvalues(p: &Pencil) -> Result<Vec<f64>, SpectralError> {
    let chol =
        p.b.clone()
            .cholesky()
            .ok_or(SpectralError::NotPositiveDefinite)?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or(SpectralError::NotPositiveDefinite)?;
    let c = &l_inv * &p.a * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().map(|&mu| -mu).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// The certified (negative) part of the spectrum, ascending, truncated to
/// `count` entries. Nonnegative pencil eigenvalues are discretization
/// artifacts of the continuous spectrum and are not returned here.
pub fn bound_states(p: &Pencil, count: usize) -> Result<Vec<f64>, SpectralError> {
    let vals = pencil_eigenvalues(p)?;
    Ok(vals.into_iter().filter(|&v| v < 0.0).take(count).collect())
}

/// Bound-state computation for the lower half cone, realized through the
/// sign change `t -> -t` which maps the problem to the upper cone with
/// `κ -> -κ`. Returns (eigenvalues below `-1e-10`, smallest positive
/// eigenvalue).
pub fn lower_cone_bound_states(
    kappa: f64,
    ell: u32,
    size: usize,
    beta: f64,
) -> Result<(Vec<f64>, f64), SpectralError> {
    let basis = RadialBasis::build(ell, size, beta)?;
    let pencil = assemble_pencil(&basis, -kappa)?;
    let vals = pencil_eigenvalues(&pencil)?;
    let neg: Vec<f64> = vals.iter().copied().filter(|&v| v < -1e-10).collect();
    let min_pos = vals
        .iter()
        .copied()
        .filter(|&v| v > 0.0)
        .fold(f64::INFINITY, f64::min);
    Ok((neg, min_pos))
}

/// Spectrum of the compact generator `i(F - E) = -t d² - 2d + l(l+1)/t + t`
/// in the given basis, ascending. The exact eigenvalues are `2(k + l + 1)`.
pub fn compact_spectrum(basis: &RadialBasis) -> Result<Vec<f64>, SpectralError> {
    let c = basis.centrifugal();
    let op = basis.apply_pointwise(|t| -t, |_| -2.0, |t| c / t + t);
    let m = symmetrize(basis.weighted_product(&op))?;
    let eig = SymmetricEigen::new(m);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// One row of the degeneracy table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DegeneracyRow {
    pub n: u32,
    /// The l with a detected eigenvalue at -κ²/(4n²).
    pub ells: Vec<u32>,
    /// Σ (2l+1) over the detected l.
    pub total: u32,
    pub expected: u32,
}

/// Relative tolerance for level detection at principal quantum number `n`.
pub fn level_tolerance(n: u32) -> f64 {
    if n <= 3 {
        1e-8
    } else {
        1e-3
    }
}

/// Detects the level `-κ²/(4n²)` in every pencil with `l < n ≤ n_max`,
/// asserts its absence (within 10× tolerance) for `l ≥ n`, and reports the
/// degeneracy sums. The per-l eigenvalue lists are computed independently.
pub fn degeneracy_table(
    kappa: f64,
    n_max: u32,
    size: usize,
    beta: f64,
) -> Result<Vec<DegeneracyRow>, SpectralError> {
    let ell_max = n_max; // include one l beyond every n for absence checks
    let mut spectra = Vec::new();
    for ell in 0..=ell_max {
        let basis = RadialBasis::build(ell, size, beta)?;
        let pencil = assemble_pencil(&basis, kappa)?;
        spectra.push(bound_states(&pencil, size)?);
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let target = -kappa * kappa / (4.0 * (n * n) as f64);
        let tol = level_tolerance(n);
        let mut ells = Vec::new();
        for (ell, vals) in spectra.iter().enumerate() {
            let ell = ell as u32;
            let hit = vals
                .iter()
                .any(|&v| ((v - target) / target.abs()).abs() < tol);
            if ell < n {
                if hit {
                    ells.push(ell);
                }
            } else {
                let near = vals
                    .iter()
                    .any(|&v| ((v - target) / target.abs()).abs() < 10.0 * tol);
                if near {
                    return Err(SpectralError::SpuriousLevel(n));
                }
            }
        }
        let total = ells.iter().map(|&l| 2 * l + 1).sum();
        rows.push(DegeneracyRow {
            n,
            ells,
            total,
            expected: n * n,
        });
    }
    Ok(rows)
}

/// The closed-form bound eigenfunction
/// `ψ_{n,l}(t) = t^l e^{-κt/(2n)} L_{n-l-1}^{(2l+1)}(κt/n)` and the relative
/// residual `‖S_κ(-κ²/4n²) ψ‖ / ‖ψ‖` under quadrature at the eigenfunction's
/// own scale.
pub fn eigenfunction_residual(n: u32, ell: u32, kappa: f64) -> f64 {
    assert!(n > ell, "bound state requires n > l");
    let k = (n - ell - 1) as usize;
    let rate = kappa / n as f64; // ψ² decays like e^{-rate·t}
    let m = 2 * (k + ell as usize) + 16;
    let (x, w_total) = gauss_laguerre_total(m);
    let lambda = -kappa * kappa / (4.0 * (n * n) as f64);
    let c = (ell * (ell + 1)) as f64;
    let alpha = 2.0 * ell as f64 + 1.0;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&xq, &wq) in x.iter().zip(&w_total) {
        let t = xq / rate;
        // ψ and derivatives from the scaled Laguerre family at x = rate·t.
        let ga = scaled_laguerre(k, alpha, xq);
        let gb = scaled_laguerre(k, alpha + 1.0, xq);
        let gc = scaled_laguerre(k, alpha + 2.0, xq);
        let g = ga[k];
        let g1 = -0.5 * g - if k >= 1 { gb[k - 1] } else { 0.0 };
        let g2 =
            0.25 * g + if k >= 1 { gb[k - 1] } else { 0.0 } + if k >= 2 { gc[k - 2] } else { 0.0 };
        let le = ell as f64;
        let tl = t.powi(ell as i32);
        let psi = tl * g;
        let mut d1 = tl * rate * g1;
        if ell >= 1 {
            d1 += le * t.powi(ell as i32 - 1) * g;
        }
        let mut d2 = tl * rate * rate * g2;
        if ell >= 1 {
            d2 += 2.0 * le * rate * t.powi(ell as i32 - 1) * g1;
        }
        if ell >= 2 {
            d2 += le * (le - 1.0) * t.powi(ell as i32 - 2) * g;
        }
        let s_psi = t * d2 + 2.0 * d1 + (kappa - c / t + lambda * t) * psi;
        let measure = 0.5 * t * wq / rate;
        num += measure * s_psi * s_psi;
        den += measure * psi * psi;
    }
    (num / den).sqrt()
}

/// Skewness deviations `|<ρ(d)φ_a, φ_b> - <φ_a, ρ(d*)φ_b>|` for the three
/// generators (all of which satisfy `d* = -d`), maximized over the first
/// `pairs` basis pairs. Returns (dev_e, dev_h, dev_f).
pub fn adjoint_deviations(basis: &RadialBasis, pairs: usize) -> (f64, f64, f64) {
    let c = basis.centrifugal();
    // Real building blocks: ρ(e) = i·t, ρ(h) = 2t d + 2,
    // ρ(f) = i·(t d² + 2d - c/t). For real-valued basis functions the
    // skewness of e and f reduces to symmetry of the real operators t and
    // t d² + 2d - c/t; for h it is genuine antisymmetry.
    let t_op = basis.apply_pointwise(|_| 0.0, |_| 0.0, |t| t);
    let h_op = basis.apply_pointwise(|_| 0.0, |t| 2.0 * t, |_| 2.0);
    let f_op = basis.apply_pointwise(|t| t, |_| 2.0, |t| -c / t);
    let gt = basis.weighted_product(&t_op);
    let gh = basis.weighted_product(&h_op);
    let gf = basis.weighted_product(&f_op);
    let mut dev = [0.0f64; 3];
    let p = pairs.min(basis.size);
    for a in 0..p {
        for b in 0..p {
            // <i T f, g> - <f, -i T g> = -i (T_ab - T_ba) for real T values;
            // symmetric T makes this vanish.
            dev[0] = dev[0].max((gt[(a, b)] - gt[(b, a)]).abs());
            dev[2] = dev[2].max((gf[(a, b)] - gf[(b, a)]).abs());
            // <H f, g> - <f, -H g> = H_ab + H_ba.
            dev[1] = dev[1].max((gh[(a, b)] + gh[(b, a)]).abs());
        }
    }
    (dev[0], dev[1], dev[2])
}
