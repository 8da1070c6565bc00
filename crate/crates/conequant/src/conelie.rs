//! The generating Lie algebra of the cone.
//!
//! From a nondegenerate quadratic form `Q` on `n > 2` variables the module
//! builds the finite-dimensional Lie algebra spanned (as operators on the
//! cone `{Q = 0}`) by
//!
//! * multiplications by linear functionals `tau(v) = B(v, ·)`,
//! * the rotations `L_{u,v} = tau(u)∘∂_v − tau(v)∘∂_u`,
//! * the shifted Euler operator `h = 2χ + (n−2)` and the constant `1`,
//! * the second-order operators `Psi^Q(φ) = φ·box_Q − h·∂_φ^Q`,
//!
//! computes its exact structure constants modulo the ideal of the cone, and
//! exposes the derived structures: the sl2-triple attached to a pointed
//! Lorentzian quadratic space, the mutually-centralizing dual pair, the star
//! involution with its Cayley-type rotation `F`, and the Schrödinger family
//! `κ·1 + λ·w + Psi^Q(w)`.

use crate::qlinalg;
use crate::scalar::Scalar;
use crate::weyl::{MultiIndex, Polynomial, QuadraticForm, WeylElement};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConeLieError {
    #[error("quadratic form does not have Lorentzian signature (n-1, 1): got ({0}, {1})")]
    NotLorentzian(usize, usize),
    #[error("the distinguished covector must have dual norm -1, got {0}")]
    BadCovectorNorm(BigRational),
    #[error("covector length {0} does not match dimension {1}")]
    CovectorDimension(usize, usize),
    #[error("bracket [{0}, {1}] does not lie in the span of the basis")]
    BracketNotInSpan(usize, usize),
    #[error("element does not lie in the span of the basis")]
    NotInSpan,
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiFailure(usize, usize, usize),
    #[error("{0}")]
    Structural(String),
}

/// Pointed Lorentzian quadratic space: a rational symmetric form of
/// signature (n−1, 1) with a distinguished covector of dual norm −1.
#[derive(Clone, Debug)]
pub struct Plqs {
    q: QuadraticForm,
    w: Vec<BigRational>,
}

impl Plqs {
    pub fn new(q: QuadraticForm, w: Vec<BigRational>) -> Result<Self, ConeLieError> {
        let n = q.dim();
        if w.len() != n {
            return Err(ConeLieError::CovectorDimension(w.len(), n));
        }
        let (pos, neg) = q.signature();
        if (pos, neg) != (n - 1, 1) {
            return Err(ConeLieError::NotLorentzian(pos, neg));
        }
        let norm = dual_norm(&q, &w);
        if norm != -BigRational::one() {
            return Err(ConeLieError::BadCovectorNorm(norm));
        }
        Ok(Plqs { q, w })
    }

    /// Standard form diag(1,…,1,−1) with `w` the last coordinate functional.
    pub fn standard(n: usize) -> Self {
        let q = QuadraticForm::standard(n);
        let mut w = vec![BigRational::zero(); n];
        w[n - 1] = BigRational::one();
        Plqs::new(q, w).expect("standard PLQS is valid")
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.q
    }

    pub fn covector(&self) -> &[BigRational] {
        &self.w
    }

    /// The vector `v_w = tau^{-1}(w)`, i.e. `B^{-1} w`.
    pub fn dual_vector(&self) -> Vec<BigRational> {
        apply_matrix(self.q.matrix_inv(), &self.w)
    }
}

/// Dual norm `q*(w) = w^T B^{-1} w = Q(tau^{-1} w)`.
pub fn dual_norm(q: &QuadraticForm, w: &[BigRational]) -> BigRational {
    let vw = apply_matrix(q.matrix_inv(), w);
    q.bilinear(&vw, &vw)
}

fn apply_matrix(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(a, b)| a * b)
                .fold(BigRational::zero(), |acc, x| acc + x)
        })
        .collect()
}

/// The covector `tau(v) = B(v, ·)` as coordinates in `V*`.
pub fn tau(q: &QuadraticForm, v: &[BigRational]) -> Vec<BigRational> {
    apply_matrix(q.matrix(), v)
}

/// Multiplication operator by the linear functional with coordinates `w`.
pub fn covector_mult(n: usize, w: &[BigRational]) -> WeylElement {
    let mut p = Polynomial::zero(n);
    for (i, wi) in w.iter().enumerate() {
        if !wi.is_zero() {
            p.add_term(MultiIndex::unit(n, i), Scalar::from_rational(wi.clone()));
        }
    }
    WeylElement::from_polynomial(p)
}

/// The rotation `L_{u,v} = tau(u)∘∂_v − tau(v)∘∂_u`.
pub fn rotation(q: &QuadraticForm, u: &[BigRational], v: &[BigRational]) -> WeylElement {
    let n = q.dim();
    let a = covector_mult(n, &tau(q, u))
        .normal_mul(&WeylElement::directional(n, v))
        .expect("same dimension");
    let b = covector_mult(n, &tau(q, v))
        .normal_mul(&WeylElement::directional(n, u))
        .expect("same dimension");
    a.sub(&b)
}

/// `Phi^Q(d) = sum_ij B_ij z_i d z_j`, the weight-raising contraction.
pub fn phi_map(q: &QuadraticForm, d: &WeylElement) -> WeylElement {
    let n = q.dim();
    let mut out = WeylElement::zero(n);
    for i in 0..n {
        for j in 0..n {
            let bij = &q.matrix()[i][j];
            if bij.is_zero() {
                continue;
            }
            let zi = WeylElement::coordinate(n, i);
            let zj = WeylElement::coordinate(n, j);
            let term = zi
                .normal_mul(d)
                .and_then(|x| x.normal_mul(&zj))
                .expect("same dimension");
            out = out.add(&term.scale(&Scalar::from_rational(bij.clone())));
        }
    }
    out
}

/// `Psi^Q(φ) = φ·box_Q − h·∂_φ^Q`, where `∂_φ^Q` is the directional
/// derivative along `tau^{-1}(φ)`.
pub fn psi_map(q: &QuadraticForm, phi: &[BigRational]) -> WeylElement {
    let n = q.dim();
    let v_phi = apply_matrix(q.matrix_inv(), phi);
    let first = covector_mult(n, phi)
        .normal_mul(&q.box_operator())
        .expect("same dimension");
    let second = WeylElement::shifted_euler(n)
        .normal_mul(&WeylElement::directional(n, &v_phi))
        .expect("same dimension");
    first.sub(&second)
}

/// Tags identifying the members of the spanning set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LieTag {
    /// Multiplication by `tau(e_i)`.
    Mult(usize),
    /// `L_{e_i, e_j}` with `i < j`.
    Rot(usize, usize),
    /// Shifted Euler operator.
    H,
    /// The constant 1 (central in the spanned algebra).
    One,
    /// `Psi^Q(tau(e_i))`.
    Psi(usize),
}

#[derive(Clone, Debug)]
pub struct LieBasisElement {
    pub tag: LieTag,
    pub op: WeylElement,
}

/// The spanning set `{tau(e_i)} ∪ {L_{e_i,e_j}} ∪ {h, 1} ∪ {Psi^Q(tau(e_i))}`
/// of size n(n+3)/2 + 2. Every element restricts to the cone.
pub fn spanning_set(q: &QuadraticForm) -> Vec<LieBasisElement> {
    let n = q.dim();
    let mut basis = Vec::with_capacity(n * (n + 3) / 2 + 2);
    let e = |i: usize| -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); n];
        v[i] = BigRational::one();
        v
    };
    for i in 0..n {
        basis.push(LieBasisElement {
            tag: LieTag::Mult(i),
            op: covector_mult(n, &tau(q, &e(i))),
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            basis.push(LieBasisElement {
                tag: LieTag::Rot(i, j),
                op: rotation(q, &e(i), &e(j)),
            });
        }
    }
    basis.push(LieBasisElement {
        tag: LieTag::H,
        op: WeylElement::shifted_euler(n),
    });
    basis.push(LieBasisElement {
        tag: LieTag::One,
        op: WeylElement::one(n),
    });
    for i in 0..n {
        basis.push(LieBasisElement {
            tag: LieTag::Psi(i),
            op: psi_map(q, &tau(q, &e(i))),
        });
    }
    basis
}

/// Coordinates of cone-classes of operators: canonical representatives
/// modulo the ideal, vectorized over their (∂-index, monomial) support.
struct ConeCoordinates {
    keys: BTreeMap<(MultiIndex, MultiIndex), usize>,
    /// columns[k] = coordinate vector of basis element k
    columns: Vec<Vec<Scalar>>,
}

impl ConeCoordinates {
    fn new(q: &QuadraticForm, basis: &[WeylElement]) -> Self {
        let reduced: Vec<WeylElement> = basis.iter().map(|b| b.reduce_mod_ideal(q)).collect();
        let mut keys = BTreeMap::new();
        for r in &reduced {
            for (alpha, p) in r.terms() {
                for (m, _) in p.terms() {
                    let len = keys.len();
                    keys.entry((alpha.clone(), m.clone())).or_insert(len);
                }
            }
        }
        let columns = reduced
            .iter()
            .map(|r| {
                let mut col = vec![Scalar::zero(); keys.len()];
                for (alpha, p) in r.terms() {
                    for (m, c) in p.terms() {
                        col[keys[&(alpha.clone(), m.clone())]] = c.clone();
                    }
                }
                col
            })
            .collect();
        ConeCoordinates { keys, columns }
    }

    fn vectorize(&self, q: &QuadraticForm, d: &WeylElement) -> Option<Vec<Scalar>> {
        let r = d.reduce_mod_ideal(q);
        let mut v = vec![Scalar::zero(); self.keys.len()];
        for (alpha, p) in r.terms() {
            for (m, c) in p.terms() {
                let idx = self.keys.get(&(alpha.clone(), m.clone()))?;
                v[*idx] = c.clone();
            }
        }
        Some(v)
    }

    /// Express `d` in the basis (unique if the basis is independent).
    fn express(&self, q: &QuadraticForm, d: &WeylElement) -> Option<Vec<Scalar>> {
        let target = self.vectorize(q, d)?;
        let rows = self.keys.len();
        let cols = self.columns.len();
        let mat: Vec<Vec<Scalar>> = (0..rows)
            .map(|r| (0..cols).map(|c| self.columns[c][r].clone()).collect())
            .collect();
        qlinalg::solve(&mat, &target).map(|(x, _)| x)
    }
}

/// The spanning set with its full bracket tensor, all brackets taken as
/// cone operators (reduced modulo the ideal).
pub struct StructureConstants {
    pub basis: Vec<LieBasisElement>,
    /// c[i][j] = coordinates of [b_i, b_j] in the basis.
    pub c: Vec<Vec<Vec<Scalar>>>,
    q: QuadraticForm,
    coords: ConeCoordinates,
}

impl StructureConstants {
    pub fn compute(q: &QuadraticForm, basis: Vec<LieBasisElement>) -> Result<Self, ConeLieError> {
        let ops: Vec<WeylElement> = basis.iter().map(|b| b.op.clone()).collect();
        let coords = ConeCoordinates::new(q, &ops);
        let dim = basis.len();
        let mut c = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    c[i][j] = vec![Scalar::zero(); dim];
                    continue;
                }
                let br = basis[i]
                    .op
                    .commutator(&basis[j].op)
                    .expect("same dimension");
                let x = coords
                    .express(q, &br)
                    .ok_or(ConeLieError::BracketNotInSpan(i, j))?;
                c[i][j] = x;
            }
        }
        Ok(StructureConstants {
            basis,
            c,
            q: q.clone(),
            coords,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, tag: LieTag) -> Option<usize> {
        self.basis.iter().position(|b| b.tag == tag)
    }

    /// Bracket of coordinate vectors through the c-tensor.
    pub fn bracket_coords(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        let mut out = vec![Scalar::zero(); dim];
        for i in 0..dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for m in 0..dim {
                    if !self.c[i][j][m].is_zero() {
                        out[m] += &(&f * &self.c[i][j][m]);
                    }
                }
            }
        }
        out
    }

    pub fn express(&self, d: &WeylElement) -> Result<Vec<Scalar>, ConeLieError> {
        self.coords
            .express(&self.q, d)
            .ok_or(ConeLieError::NotInSpan)
    }

    pub fn realize(&self, x: &[Scalar]) -> WeylElement {
        let n = self.q.dim();
        let mut out = WeylElement::zero(n);
        for (xi, b) in x.iter().zip(&self.basis) {
            if !xi.is_zero() {
                out = out.add(&b.op.scale(xi));
            }
        }
        out
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.q
    }
}

/// Verification report for the so(n+2)-structure of the spanned algebra.
#[derive(Debug)]
pub struct SoReport {
    /// Dimension of the derived algebra s (basis without the constant).
    pub dim_s: usize,
    /// Number of basis triples on which Jacobi was verified.
    pub jacobi_triples: usize,
    /// Rank of the Killing form of s.
    pub killing_rank: usize,
    /// (positives, negatives) of the Killing form on the real basis.
    pub killing_signature: (usize, usize),
    /// Dimensions of the weight-(1, 0, −1) graded pieces of the spanning set.
    pub graded_dims: (usize, usize, usize),
}

/// Checks dim s = (n+2)(n+1)/2, the Jacobi identity on all basis triples,
/// nondegeneracy of the Killing form of s, the graded-piece dimensions, and
/// the Killing signature of the real basis (so(n,2): positives = count of
/// noncompact directions).
pub fn verify_so_structure(sc: &StructureConstants) -> Result<SoReport, ConeLieError> {
    let dim = sc.dim();
    let n = sc.q.dim();

    // Antisymmetry of the tensor.
    for i in 0..dim {
        for j in 0..dim {
            for m in 0..dim {
                let sum = sc.c[i][j][m].clone() + &sc.c[j][i][m];
                if !sum.is_zero() {
                    return Err(ConeLieError::Structural(format!(
                        "bracket tensor not antisymmetric at ({i}, {j})"
                    )));
                }
            }
        }
    }

    // Jacobi on all triples, via the tensor.
    let mut unit = |k: usize| -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); dim];
        v[k] = Scalar::one();
        v
    };
    let units: Vec<Vec<Scalar>> = (0..dim).map(&mut unit).collect();
    let mut jacobi_triples = 0;
    for i in 0..dim {
        for j in i + 1..dim {
            for k in j + 1..dim {
                let mut acc =
                    sc.bracket_coords(&sc.bracket_coords(&units[i], &units[j]), &units[k]);
                let t2 = sc.bracket_coords(&sc.bracket_coords(&units[j], &units[k]), &units[i]);
                let t3 = sc.bracket_coords(&sc.bracket_coords(&units[k], &units[i]), &units[j]);
                for m in 0..dim {
                    acc[m] += &t2[m];
                    acc[m] += &t3[m];
                    if !acc[m].is_zero() {
                        return Err(ConeLieError::JacobiFailure(i, j, k));
                    }
                }
                jacobi_triples += 1;
            }
        }
    }

    // s = basis without the central constant.
    let one_idx = sc.index_of(LieTag::One).expect("basis contains 1");
    let s_idx: Vec<usize> = (0..dim).filter(|&k| k != one_idx).collect();
    let dim_s = s_idx.len();
    if dim_s != (n + 2) * (n + 1) / 2 {
        return Err(ConeLieError::Structural(format!(
            "dim s = {dim_s}, expected {}",
            (n + 2) * (n + 1) / 2
        )));
    }
    // Closure of s: no bracket of s-elements has a component on 1.
    for &i in &s_idx {
        for &j in &s_idx {
            if !sc.c[i][j][one_idx].is_zero() {
                return Err(ConeLieError::Structural(
                    "derived algebra not closed: constant appears in a bracket".into(),
                ));
            }
        }
    }

    // Killing form k(x, y) = tr(ad x ad y) on s.
    let pos_in_s: BTreeMap<usize, usize> = s_idx.iter().enumerate().map(|(a, &k)| (k, a)).collect();
    let ad = |k: usize| -> Vec<Vec<Scalar>> {
        // matrix of ad(b_k) on s in the s-basis
        let mut m = vec![vec![Scalar::zero(); dim_s]; dim_s];
        for (col, &j) in s_idx.iter().enumerate() {
            for (&row_full, &row) in pos_in_s.iter() {
                m[row][col] = sc.c[k][j][row_full].clone();
            }
        }
        m
    };
    let ads: Vec<Vec<Vec<Scalar>>> = s_idx.iter().map(|&k| ad(k)).collect();
    let mut killing = vec![vec![Scalar::zero(); dim_s]; dim_s];
    for a in 0..dim_s {
        for b in a..dim_s {
            let mut tr = Scalar::zero();
            for r in 0..dim_s {
                for t in 0..dim_s {
                    tr += &(&ads[a][r][t] * &ads[b][t][r]);
                }
            }
            killing[a][b] = tr.clone();
            killing[b][a] = tr;
        }
    }
    let killing_rank = qlinalg::rank(&killing);
    if killing_rank != dim_s {
        return Err(ConeLieError::Structural(format!(
            "Killing form degenerate: rank {killing_rank} < {dim_s}"
        )));
    }

    // Signature on the real basis (structure constants of the spanning set
    // are rational, so the Killing matrix is rational symmetric).
    let killing_rat: Vec<Vec<BigRational>> = killing
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    if !s.is_real() {
                        panic!("Killing form of the real basis must be real");
                    }
                    s.re.clone()
                })
                .collect()
        })
        .collect();
    let killing_signature = qlinalg::signature(&killing_rat);

    // Graded pieces of the spanning set by rescaling weight.
    let mut up = 0;
    let mut mid = 0;
    let mut down = 0;
    for b in &sc.basis {
        let weight = match b.tag {
            LieTag::Mult(_) => 1i64,
            LieTag::Rot(..) | LieTag::H | LieTag::One => 0,
            LieTag::Psi(_) => -1,
        };
        if !b.op.is_homogeneous_of_weight(weight) {
            return Err(ConeLieError::Structural(format!(
                "basis element {:?} is not homogeneous of weight {weight}",
                b.tag
            )));
        }
        match weight {
            1 => up += 1,
            0 => mid += 1,
            _ => down += 1,
        }
    }

    Ok(SoReport {
        dim_s,
        jacobi_triples,
        killing_rank,
        killing_signature,
        graded_dims: (up, mid, down),
    })
}

/// The sl2-triple of a PLQS: `e = i·w`, `h`, `f = i·Psi^Q(w)`.
pub struct Sl2Triple {
    pub e: WeylElement,
    pub h: WeylElement,
    pub f: WeylElement,
}

pub fn sl2_triple(plqs: &Plqs) -> Result<Sl2Triple, ConeLieError> {
    let n = plqs.dim();
    let q = plqs.form();
    let e = covector_mult(n, plqs.covector()).scale(&Scalar::i());
    let h = WeylElement::shifted_euler(n);
    let f = psi_map(q, plqs.covector()).scale(&Scalar::i());
    let two = Scalar::from_int(2);
    let checks = [
        (e.commutator(&f).unwrap(), h.clone()),
        (h.commutator(&e).unwrap(), e.scale(&two)),
        (h.commutator(&f).unwrap(), f.scale(&-two)),
    ];
    for (got, want) in checks {
        if !got.cone_equal(&want, q) {
            return Err(ConeLieError::Structural(
                "sl2 relations fail; tau normalization drift".into(),
            ));
        }
    }
    Ok(Sl2Triple { e, h, f })
}

/// Jacobson–Morozov uniqueness: inside the spanned algebra, the system
/// `[h, x] = −2x`, `[e, x] = −h` has exactly one solution, namely `f`.
/// Returns the solution's coordinates in the basis of `sc`.
pub fn jm_unique_f(
    sc: &StructureConstants,
    triple: &Sl2Triple,
) -> Result<Vec<Scalar>, ConeLieError> {
    let dim = sc.dim();
    let e_coords = sc.express(&triple.e)?;
    let h_coords = sc.express(&triple.h)?;
    let f_coords = sc.express(&triple.f)?;
    // Unknown x = sum_k x_k b_k. Equations (rows stacked over m):
    //   sum_k x_k ( [h, b_k] + 2 b_k )_m = 0      ([h, x] = -2x)
    //   sum_k x_k  [e, b_k]_m            = h_m    ([e, x] = h)
    let units: Vec<Vec<Scalar>> = (0..dim)
        .map(|k| {
            let mut v = vec![Scalar::zero(); dim];
            v[k] = Scalar::one();
            v
        })
        .collect();
    let mut mat: Vec<Vec<Scalar>> = Vec::with_capacity(2 * dim);
    let mut rhs: Vec<Scalar> = Vec::with_capacity(2 * dim);
    let two = Scalar::from_int(2);
    for m in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for k in 0..dim {
            let br = sc.bracket_coords(&h_coords, &units[k]);
            let mut v = br[m].clone();
            if k == m {
                v += &two;
            }
            row.push(v);
        }
        mat.push(row);
        rhs.push(Scalar::zero());
    }
    for m in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for k in 0..dim {
            let br = sc.bracket_coords(&e_coords, &units[k]);
            row.push(br[m].clone());
        }
        mat.push(row);
        rhs.push(h_coords[m].clone());
    }
    let (x, unique) = qlinalg::solve(&mat, &rhs)
        .ok_or_else(|| ConeLieError::Structural("Jacobson–Morozov system inconsistent".into()))?;
    if !unique {
        return Err(ConeLieError::Structural(
            "Jacobson–Morozov solution not unique".into(),
        ));
    }
    if x != f_coords {
        return Err(ConeLieError::Structural(
            "Jacobson–Morozov solution differs from f".into(),
        ));
    }
    Ok(x)
}

/// The dual pair attached to a PLQS: k_w = rotations of the perpendicular
/// hyperplane, and its centralizer l_w = span{e, h, f}, verified to be
/// mutual centralizers by exact null-space computations in the c-tensor.
pub struct DualPair {
    /// Coordinates (in the basis of `sc`) of a basis of k_w.
    pub k_basis: Vec<Vec<Scalar>>,
    /// Coordinates of a basis of l_w = Cent(k_w) within s.
    pub l_basis: Vec<Vec<Scalar>>,
}

pub fn dual_pair(plqs: &Plqs, sc: &StructureConstants) -> Result<DualPair, ConeLieError> {
    let n = plqs.dim();
    let q = plqs.form();
    let dim = sc.dim();
    // Rational basis of the hyperplane w(v) = 0.
    let w_row: Vec<Vec<Scalar>> = vec![plqs
        .covector()
        .iter()
        .map(|x| Scalar::from_rational(x.clone()))
        .collect()];
    let perp = qlinalg::nullspace(&w_row);
    if perp.len() != n - 1 {
        return Err(ConeLieError::Structural(
            "perpendicular space has wrong dimension".into(),
        ));
    }
    let perp_rat: Vec<Vec<BigRational>> = perp
        .iter()
        .map(|v| v.iter().map(|s| s.re.clone()).collect())
        .collect();
    let mut k_basis = Vec::new();
    for a in 0..perp_rat.len() {
        for b in a + 1..perp_rat.len() {
            let l = rotation(q, &perp_rat[a], &perp_rat[b]);
            k_basis.push(sc.express(&l)?);
        }
    }
    if k_basis.len() != (n - 1) * (n - 2) / 2 {
        return Err(ConeLieError::Structural("k_w has wrong dimension".into()));
    }

    let one_idx = sc.index_of(LieTag::One).expect("basis contains 1");
    // Centralizer within s of a list of coordinate vectors: null space of
    // the stacked maps x -> [x, k_j], with the constant direction excluded.
    let centralizer = |of: &[Vec<Scalar>]| -> Vec<Vec<Scalar>> {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for kv in of {
            for m in 0..dim {
                let mut row = Vec::with_capacity(dim);
                for x in 0..dim {
                    // coefficient of x_x in [b_x, kv]_m
                    let mut acc = Scalar::zero();
                    for j in 0..dim {
                        if !kv[j].is_zero() {
                            acc += &(&kv[j] * &sc.c[x][j][m]);
                        }
                    }
                    row.push(acc);
                }
                rows.push(row);
            }
        }
        // Exclude the central constant from the ambient space.
        let mut pin = vec![Scalar::zero(); dim];
        pin[one_idx] = Scalar::one();
        rows.push(pin);
        qlinalg::nullspace(&rows)
    };

    let l_basis = centralizer(&k_basis);
    if l_basis.len() != 3 {
        return Err(ConeLieError::Structural(format!(
            "centralizer of k_w has dimension {}, expected 3",
            l_basis.len()
        )));
    }
    // l_w = span{e, h, f}: check both inclusions by rank.
    let triple = sl2_triple(plqs)?;
    let ehf = [
        sc.express(&triple.e)?,
        sc.express(&triple.h)?,
        sc.express(&triple.f)?,
    ];
    let mut combined: Vec<Vec<Scalar>> = l_basis.clone();
    combined.extend(ehf.iter().cloned());
    if qlinalg::rank(&combined) != 3 {
        return Err(ConeLieError::Structural(
            "centralizer of k_w differs from span{e, h, f}".into(),
        ));
    }
    // Mutual: Cent(Cent(k_w)) = k_w.
    let back = centralizer(&l_basis);
    if back.len() != k_basis.len() {
        return Err(ConeLieError::Structural(
            "double centralizer has wrong dimension".into(),
        ));
    }
    let mut both: Vec<Vec<Scalar>> = back.clone();
    both.extend(k_basis.iter().cloned());
    if qlinalg::rank(&both) != k_basis.len() {
        return Err(ConeLieError::Structural(
            "double centralizer differs from k_w".into(),
        ));
    }
    Ok(DualPair { k_basis, l_basis })
}

/// The star involution, defined on the spanning generators by
/// `tau(v)* = tau(v)`, `L* = −L`, `h* = −h`, `1* = 1`, `Psi* = Psi` and
/// extended antilinearly.
pub fn star(sc: &StructureConstants, d: &WeylElement) -> Result<WeylElement, ConeLieError> {
    let coords = sc.express(d)?;
    let n = sc.q.dim();
    let mut out = WeylElement::zero(n);
    for (x, b) in coords.iter().zip(&sc.basis) {
        if x.is_zero() {
            continue;
        }
        let sign = match b.tag {
            LieTag::Mult(_) | LieTag::One | LieTag::Psi(_) => Scalar::one(),
            LieTag::Rot(..) | LieTag::H => -Scalar::one(),
        };
        out = out.add(&b.op.scale(&(&x.conj() * &sign)));
    }
    Ok(out)
}

/// The Cayley-type rotation `F = exp(ad_{iπh/4})`: multiplication by
/// `e^{iℓπ/2} = i^ℓ` on the weight-ℓ piece.
pub fn cayley(d: &WeylElement) -> WeylElement {
    let n = d.dim();
    let mut out = WeylElement::zero(n);
    for ((_, l), comp) in d.bigrade() {
        let factor = match l.rem_euclid(4) {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => -Scalar::one(),
            _ => -Scalar::i(),
        };
        out = out.add(&comp.scale(&factor));
    }
    out
}

/// The Schrödinger family member `S_κ(λ) = κ·1 − i(λe + f) = κ + λw + Psi^Q(w)`.
pub fn schrodinger_element(plqs: &Plqs, kappa: &BigRational, lambda: &Scalar) -> WeylElement {
    let n = plqs.dim();
    WeylElement::constant(n, Scalar::from_rational(kappa.clone()))
        .add(&covector_mult(n, plqs.covector()).scale(lambda))
        .add(&psi_map(plqs.form(), plqs.covector()))
}

/// Conjugation of an operator by an invertible rational matrix `g`
/// (acting on functions by `(g·f)(z) = f(g^{-1} z)`): coordinates transform
/// by `g^{-1}`, directional derivatives by `g`.
pub fn conjugate_by(d: &WeylElement, g: &[Vec<BigRational>]) -> WeylElement {
    let n = d.dim();
    let g_inv = qlinalg::invert_rational(g).expect("conjugating matrix must be invertible");
    let mut out = WeylElement::zero(n);
    for (alpha, p) in d.terms() {
        // Substitute z_i -> sum_j (g^{-1})_{ij} z_j in the coefficient.
        let mut coeff = Polynomial::constant(n, Scalar::one());
        let mut subst = Polynomial::zero(n);
        for (m, c) in p.terms() {
            let mut term = Polynomial::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    let mut lin = Polynomial::zero(n);
                    for j in 0..n {
                        lin.add_term(
                            MultiIndex::unit(n, j),
                            Scalar::from_rational(g_inv[i][j].clone()),
                        );
                    }
                    term = term.mul(&lin);
                }
            }
            subst = subst.add(&term);
        }
        std::mem::swap(&mut coeff, &mut subst);
        // Replace d^alpha by the product of directional derivatives along
        // the columns of g.
        let mut deriv = WeylElement::one(n);
        for (i, &e) in alpha.0.iter().enumerate() {
            let col: Vec<BigRational> = (0..n).map(|r| g[r][i].clone()).collect();
            let dir = WeylElement::directional(n, &col);
            for _ in 0..e {
                deriv = deriv.normal_mul(&dir).expect("same dimension");
            }
        }
        out = out.add(
            &WeylElement::from_polynomial(coeff)
                .normal_mul(&deriv)
                .expect("same dimension"),
        );
    }
    out
}

/// A rational `B`-orthogonal matrix from the Cayley transform of a
/// `B`-antisymmetric rational matrix: `g = (I − S)(I + S)^{-1}` with
/// `S = B^{-1} A`, `A` antisymmetric. Returns `None` if `I + S` is singular.
pub fn cayley_orthogonal(
    q: &QuadraticForm,
    antisym: &[Vec<BigRational>],
) -> Option<Vec<Vec<BigRational>>> {
    let n = q.dim();
    let b_inv = q.matrix_inv();
    let s: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| &b_inv[i][k] * &antisym[k][j])
                        .fold(BigRational::zero(), |acc, x| acc + x)
                })
                .collect()
        })
        .collect();
    let mut i_plus = s.clone();
    let mut i_minus = s;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                i_plus[i][j] += BigRational::one();
                i_minus[i][j] = BigRational::one() - &i_minus[i][j];
            } else {
                i_minus[i][j] = -i_minus[i][j].clone();
            }
        }
    }
    let inv = qlinalg::invert_rational(&i_plus)?;
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| &i_minus[i][k] * &inv[k][j])
                            .fold(BigRational::zero(), |acc, x| acc + x)
                    })
                    .collect()
            })
            .collect(),
    )
}
