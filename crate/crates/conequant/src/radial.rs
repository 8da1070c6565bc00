//! Radial shadows of the sl2 part of the cone algebra.
//!
//! On the degree-`ℓ` isotypic component of the half cones, the abstract
//! generators act as univariate operators in the radial variable `t`:
//!
//! ```text
//! E  ->  i t,        H  ->  2 t d + 2,        F  ->  i (t d^2 + 2 d - l(l+1)/t)
//! ```
//!
//! Coefficients of radial operators are Laurent polynomials whose exponents
//! stay at or above −1 (the centrifugal term); compositions are checked to
//! remain in this class. The coefficient ring is generic, so the same code
//! runs with exact Gaussian rationals or with polynomials in the symbols
//! `κ, λ` — the physics identity below is a fully symbolic statement.

use crate::scalar::Scalar;
use num_rational::BigRational;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RadialError {
    #[error("composition leaves the admissible class: exponent {0} < -1")]
    ExponentTooNegative(i64),
    #[error("expected a scalar, found derivative terms")]
    NonScalar,
}

/// Exact commutative coefficient ring for radial operators.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_scalar(s: Scalar) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn from_int(k: i64) -> Self {
        Self::from_scalar(Scalar::from_int(k))
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.clone() + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
}

/// Polynomials in the two commuting symbols `κ` and `λ` over Q(i).
#[derive(Clone, PartialEq, Debug)]
pub struct KappaLambdaPoly {
    /// (power of κ, power of λ) -> coefficient; no zero entries.
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl KappaLambdaPoly {
    pub fn kappa() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((1, 0), Scalar::one());
        KappaLambdaPoly { terms }
    }

    pub fn lambda() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 1), Scalar::one());
        KappaLambdaPoly { terms }
    }

    fn insert(&mut self, key: (u32, u32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl Coeff for KappaLambdaPoly {
    fn zero() -> Self {
        KappaLambdaPoly {
            terms: BTreeMap::new(),
        }
    }
    fn one() -> Self {
        Self::from_scalar(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, c.clone());
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.insert((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        KappaLambdaPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
    fn from_scalar(s: Scalar) -> Self {
        let mut out = Self::zero();
        out.insert((0, 0), s);
        out
    }
}

/// Sparse Laurent polynomial in `t`.
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentPoly<C: Coeff> {
    terms: BTreeMap<i64, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(exp: i64, c: C) -> Self {
        let mut p = Self::zero();
        p.insert(exp, c);
        p
    }

    pub fn constant(c: C) -> Self {
        Self::term(0, c)
    }

    fn insert(&mut self, exp: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &C)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert(e1 + e2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.insert(*e, v.mul(c));
        }
        out
    }

    /// Formal derivative d/dt.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if *e != 0 {
                out.insert(e - 1, c.mul(&C::from_int(*e)));
            }
        }
        out
    }

    /// Substitute `t = -s` (multiply each coefficient by (-1)^exp).
    pub fn flip_sign(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let v = if e.rem_euclid(2) == 0 {
                c.clone()
            } else {
                c.neg()
            };
            out.insert(*e, v);
        }
        out
    }
}

/// Univariate differential operator `sum_j c_j(t) d^j` with Laurent
/// polynomial coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct RadialOperator<C: Coeff> {
    terms: BTreeMap<u32, LaurentPoly<C>>,
}

impl<C: Coeff> RadialOperator<C> {
    pub fn zero() -> Self {
        RadialOperator {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_coeff(order: u32, c: LaurentPoly<C>) -> Self {
        let mut op = Self::zero();
        op.add_term(order, c);
        op
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeff(0, LaurentPoly::constant(c))
    }

    pub fn add_term(&mut self, order: u32, c: LaurentPoly<C>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(order) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn coefficient(&self, order: u32) -> Option<&LaurentPoly<C>> {
        self.terms.get(&order)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &LaurentPoly<C>)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (j, c) in &other.terms {
            out.add_term(*j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RadialOperator {
            terms: self.terms.iter().map(|(j, c)| (*j, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (j, p) in &self.terms {
            out.add_term(*j, p.scale(c));
        }
        out
    }

    /// Composition `self ∘ other` via the univariate Leibniz rule
    /// `(c d^j)(e d^k) = c sum_m C(j, m) e^{(m)} d^{j - m + k}`.
    /// Fails if the result leaves the admissible class (exponents ≥ −1).
    pub fn compose(&self, other: &Self) -> Result<Self, RadialError> {
        let out = self.compose_unchecked(other);
        out.check_class()?;
        Ok(out)
    }

    fn compose_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (j, c) in &self.terms {
            for (k, e) in &other.terms {
                let mut der = e.clone();
                let mut binom: i64 = 1;
                for m in 0..=*j {
                    if m > 0 {
                        der = der.derivative();
                        binom = binom * (*j as i64 - m as i64 + 1) / m as i64;
                    }
                    if der.is_zero() {
                        break;
                    }
                    let piece = c.mul(&der).scale(&C::from_int(binom));
                    out.add_term(j - m + k, piece);
                }
            }
        }
        out
    }

    fn check_class(&self) -> Result<(), RadialError> {
        for p in self.terms.values() {
            if let Some(e) = p.min_exp() {
                if e < -1 {
                    return Err(RadialError::ExponentTooNegative(e));
                }
            }
        }
        Ok(())
    }

    /// The class guard applies to the bracket itself, not to the two
    /// one-sided products: terms like `f∘f` produce matching `t^{-2}`
    /// pieces on both sides that cancel in the difference.
    pub fn commutator(&self, other: &Self) -> Result<Self, RadialError> {
        let out = self
            .compose_unchecked(other)
            .sub(&other.compose_unchecked(self));
        out.check_class()?;
        Ok(out)
    }

    /// Substitute `t = -s`, `d_t = -d_s`, then normalize the global sign so
    /// that the coefficient of the top derivative order keeps its leading
    /// coefficient. For the radial Schrödinger operator this implements the
    /// passage to the lower cone: the result is the upper-cone operator with
    /// `κ` replaced by `-κ`.
    pub fn lower_cone_transform(&self) -> Self {
        let mut flipped = Self::zero();
        for (j, c) in &self.terms {
            let v = c.flip_sign();
            let v = if j.rem_euclid(2) == 1 { v.neg() } else { v };
            flipped.add_term(*j, v);
        }
        // Compare the leading coefficient of the top order with the
        // original; negate globally if it changed sign.
        let top = self.order();
        let flip = match (self.terms.get(&top), flipped.terms.get(&top)) {
            (Some(a), Some(b)) => {
                let lead = a.terms.keys().next_back().copied();
                match lead {
                    Some(e) => b
                        .terms
                        .get(&e)
                        .map(|c| *c == a.terms[&e].neg())
                        .unwrap_or(false),
                    None => false,
                }
            }
            _ => false,
        };
        if flip {
            flipped.neg()
        } else {
            flipped
        }
    }
}

impl RadialOperator<Scalar> {
    /// Formal application to the power `t^mu` with `mu` in Q(i). The result
    /// is returned as a map shift -> coefficient, meaning
    /// `sum_s coeff_s t^(mu + s)`.
    pub fn apply_to_power(&self, mu: &Scalar) -> BTreeMap<i64, Scalar> {
        let mut out: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (j, c) in &self.terms {
            // mu (mu-1) ... (mu-j+1)
            let mut fall = Scalar::one();
            for m in 0..*j {
                fall = &fall * &(mu.clone() - Scalar::from_int(m as i64));
            }
            for (e, v) in c.terms() {
                let shift = e - *j as i64;
                let add = &fall * v;
                let entry = out.entry(shift).or_insert_with(Scalar::zero);
                *entry += &add;
                if entry.is_zero() {
                    out.remove(&shift);
                }
            }
        }
        out
    }
}

/// Coordinates of an element of span{E, H, F, 1}.
#[derive(Clone, Debug)]
pub struct Sl2Span<C: Coeff> {
    pub e: C,
    pub h: C,
    pub f: C,
    pub one: C,
}

impl<C: Coeff> Sl2Span<C> {
    pub fn new(e: C, h: C, f: C, one: C) -> Self {
        Sl2Span { e, h, f, one }
    }
}

/// The radial shadow on the degree-`ℓ` isotypic component:
/// `E -> it`, `H -> 2td + 2`, `F -> i(t d^2 + 2d - l(l+1)/t)`, `1 -> 1`.
pub fn isotypic_restrict<C: Coeff>(x: &Sl2Span<C>, ell: u32) -> RadialOperator<C> {
    let i = C::from_scalar(Scalar::i());
    let mut out = RadialOperator::zero();
    // E
    out.add_term(0, LaurentPoly::term(1, x.e.mul(&i)));
    // H
    out.add_term(1, LaurentPoly::term(1, x.h.mul(&C::from_int(2))));
    out.add_term(0, LaurentPoly::constant(x.h.mul(&C::from_int(2))));
    // F
    let fi = x.f.mul(&i);
    out.add_term(2, LaurentPoly::term(1, fi.clone()));
    out.add_term(1, LaurentPoly::constant(fi.mul(&C::from_int(2))));
    let cent = (ell as i64) * (ell as i64 + 1);
    out.add_term(0, LaurentPoly::term(-1, fi.mul(&C::from_int(-cent))));
    // 1
    out.add_term(0, LaurentPoly::constant(x.one.clone()));
    out
}

/// The radial Schrödinger operator
/// `t d^2 + 2d - l(l+1)/t + κ + λ t`, i.e. the shadow of
/// `κ - i(λ E + F)`.
pub fn schrodinger_radial<C: Coeff>(kappa: &C, lambda: &C, ell: u32) -> RadialOperator<C> {
    let minus_i = C::from_scalar(-Scalar::i());
    isotypic_restrict(
        &Sl2Span::new(lambda.mul(&minus_i), C::zero(), minus_i, kappa.clone()),
        ell,
    )
}

/// The generators in the radial model over the given ring.
pub fn radial_e<C: Coeff>() -> RadialOperator<C> {
    isotypic_restrict(&Sl2Span::new(C::one(), C::zero(), C::zero(), C::zero()), 0)
}

pub fn radial_h<C: Coeff>() -> RadialOperator<C> {
    isotypic_restrict(&Sl2Span::new(C::zero(), C::one(), C::zero(), C::zero()), 0)
}

pub fn radial_f<C: Coeff>(ell: u32) -> RadialOperator<C> {
    isotypic_restrict(
        &Sl2Span::new(C::zero(), C::zero(), C::one(), C::zero()),
        ell,
    )
}

/// Exact coefficient comparison of the Schrödinger shadow with the physics
/// operator `r(Δ_rad + κ/r + λ)` where
/// `Δ_rad = d^2 + (2/r) d - l(l+1)/r^2`, identifying `t = r`. Both sides
/// are polynomials in the symbols `κ, λ`.
pub fn physics_identity(ell: u32) -> bool {
    type K = KappaLambdaPoly;
    let kappa = K::kappa();
    let lambda = K::lambda();
    let lhs = schrodinger_radial(&kappa, &lambda, ell);

    // r * (Δ_rad + κ/r + λ), assembled by composition with the
    // multiplication operator r.
    let mut inner: RadialOperator<K> = RadialOperator::zero();
    inner.add_term(2, LaurentPoly::constant(K::one()));
    inner.add_term(1, LaurentPoly::term(-1, K::from_int(2)));
    let cent = (ell as i64) * (ell as i64 + 1);
    inner.add_term(0, LaurentPoly::term(-2, K::from_int(-cent)));
    inner.add_term(0, LaurentPoly::term(-1, kappa));
    inner.add_term(0, LaurentPoly::constant(lambda));
    let r: RadialOperator<K> = RadialOperator::from_coeff(0, LaurentPoly::term(1, K::one()));
    let rhs = match r.compose(&inner) {
        Ok(x) => x,
        Err(_) => return false,
    };
    lhs == rhs
}

/// The sl2 Casimir `h^2/2 + ef + fe` in the radial model; all derivative
/// terms cancel and the scalar `2 l (l+1)` remains.
pub fn casimir_scalar(ell: u32) -> Result<LaurentPoly<Scalar>, RadialError> {
    let e = radial_e::<Scalar>();
    let h = radial_h::<Scalar>();
    let f = radial_f::<Scalar>(ell);
    let half = Scalar::from_ratio(1, 2);
    let total = h
        .compose(&h)?
        .scale(&half)
        .add(&e.compose(&f)?)
        .add(&f.compose(&e)?);
    if total.order() != 0 {
        return Err(RadialError::NonScalar);
    }
    Ok(total
        .coefficient(0)
        .cloned()
        .unwrap_or_else(LaurentPoly::zero))
}

/// Kernel check for the λ>0 normal form: applies `1 + 2iν + 2iν t d_t` to
/// `t^mu` with `mu = -1 + i/(2ν)` and reports whether the result vanishes
/// identically.
pub fn power_solution_check(nu: &BigRational, mu: &Scalar) -> bool {
    assert!(
        nu > &BigRational::from_integer(0.into()),
        "nu must be positive"
    );
    let two_i_nu = Scalar::i() * Scalar::from_rational(nu + nu);
    let mut op: RadialOperator<Scalar> = RadialOperator::zero();
    op.add_term(0, LaurentPoly::constant(Scalar::one() + &two_i_nu));
    op.add_term(1, LaurentPoly::term(1, two_i_nu));
    op.apply_to_power(mu).is_empty()
}

/// The distinguished exponent `mu = -1 + i/(2ν)` of the λ>0 case.
pub fn power_exponent(nu: &BigRational) -> Scalar {
    Scalar::from_int(-1) + &(Scalar::i() * Scalar::from_rational((nu + nu).recip()))
}
