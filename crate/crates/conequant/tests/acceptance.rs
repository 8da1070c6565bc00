//! Acceptance gate: twelve end-to-end criteria, one pass/fail line each
//! (run with `--nocapture` to see the lines; a panic marks the criterion
//! failed).

use conequant::conelie::{
    self, covector_mult, dual_pair, jm_unique_f, psi_map, rotation, sl2_triple, spanning_set, tau,
    verify_so_structure, Plqs, StructureConstants,
};
use conequant::dsl::{format_weyl, parse_weyl};
use conequant::radial::{casimir_scalar, physics_identity, LaurentPoly};
use conequant::spectral::{
    adjoint_deviations, assemble_pencil, bound_states, compact_spectrum, degeneracy_table,
    eigenfunction_residual, level_tolerance, lower_cone_bound_states, RadialBasis,
};
use conequant::{MultiIndex, Polynomial, QuadraticForm, Scalar, WeylElement};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

fn rat(k: i64) -> BigRational {
    BigRational::from(BigInt::from(k))
}

fn pass(line: &str) {
    println!("PASS: {line}");
}

/// Exact so(n+2) structure at n = 4 and n = 6: spanning-set closure, the
/// generator commutation relations, the Jacobi identity on all basis
/// triples, and Phi∘Psi = (2−n)·id.
#[test]
fn criterion_01_symbolic_lie_structure() {
    for (n, expected_dim) in [(4usize, 15usize), (6, 28)] {
        let q = QuadraticForm::standard(n);
        let sc = StructureConstants::compute(&q, spanning_set(&q)).unwrap();
        let so = verify_so_structure(&sc).unwrap();
        assert_eq!(so.dim_s, expected_dim, "dim s at n={n}");
        let triples = so.dim_s + 1;
        assert_eq!(
            so.jacobi_triples,
            triples * (triples - 1) * (triples - 2) / 6,
            "Jacobi triple count at n={n}"
        );

        // Generator relations on non-axis rational vectors.
        let h = WeylElement::shifted_euler(n);
        let vec_of = |seed: i64| -> Vec<BigRational> {
            (0..n).map(|i| rat((seed + i as i64 * 3) % 5 - 2)).collect()
        };
        let (u, v, w) = (vec_of(1), vec_of(2), vec_of(4));
        let tau_op = |x: &[BigRational]| covector_mult(n, &tau(&q, x));
        let psi_op = |x: &[BigRational]| psi_map(&q, &tau(&q, x));
        let b = |x: &[BigRational], y: &[BigRational]| Scalar::from_rational(q.bilinear(x, y));

        let lhs = rotation(&q, &u, &v).commutator(&tau_op(&w)).unwrap();
        let rhs = tau_op(&u)
            .scale(&b(&v, &w))
            .sub(&tau_op(&v).scale(&b(&u, &w)));
        assert!(lhs.cone_equal(&rhs, &q), "[L, tau] at n={n}");

        let lhs = rotation(&q, &u, &v).commutator(&psi_op(&w)).unwrap();
        let rhs = psi_op(&u)
            .scale(&b(&v, &w))
            .sub(&psi_op(&v).scale(&b(&u, &w)));
        assert!(lhs.cone_equal(&rhs, &q), "[L, psi] at n={n}");

        let lhs = psi_op(&v).commutator(&tau_op(&u)).unwrap();
        let rhs = rotation(&q, &v, &u)
            .scale(&Scalar::from_int(2))
            .sub(&h.scale(&b(&v, &u)));
        assert!(lhs.cone_equal(&rhs, &q), "[psi(tau v), tau u] at n={n}");

        assert!(h
            .commutator(&tau_op(&u))
            .unwrap()
            .cone_equal(&tau_op(&u).scale(&Scalar::from_int(2)), &q));
        assert!(h
            .commutator(&psi_op(&v))
            .unwrap()
            .cone_equal(&psi_op(&v).scale(&Scalar::from_int(-2)), &q));
        assert!(h.commutator(&rotation(&q, &u, &v)).unwrap().is_zero());

        // Phi∘Psi = (2-n)·id on the covector basis.
        for i in 0..n {
            let mut e_i = vec![rat(0); n];
            e_i[i] = rat(1);
            let lhs = conelie::phi_map(&q, &psi_map(&q, &e_i));
            let rhs = covector_mult(n, &e_i).scale(&Scalar::from_int(2 - n as i64));
            assert!(lhs.cone_equal(&rhs, &q), "Phi(Psi(e_{i})) at n={n}");
        }
    }
    pass("symbolic Lie structure: dim s = 15 (n=4) and 28 (n=6), relations, Jacobi, Phi∘Psi = (2-n)id");
}

/// sl2-triple relations under cone equality and Jacobson–Morozov
/// uniqueness of the completion f.
#[test]
fn criterion_02_sl2_triple_and_jm_uniqueness() {
    let plqs = Plqs::standard(4);
    let q = plqs.form().clone();
    let sc = StructureConstants::compute(&q, spanning_set(&q)).unwrap();
    let triple = sl2_triple(&plqs).unwrap(); // verifies [e,f]=h, [h,e]=2e, [h,f]=-2f
    let coords = jm_unique_f(&sc, &triple).unwrap(); // verifies the solution is unique
    assert_eq!(coords, sc.express(&triple.f).unwrap());
    pass("sl2-triple relations hold; the JM linear system has exactly one solution, equal to f");
}

/// The dual pair at n = 4: dim k_w = dim l_w = 3, mutual centralizers.
#[test]
fn criterion_03_dual_pair() {
    let plqs = Plqs::standard(4);
    let q = plqs.form().clone();
    let sc = StructureConstants::compute(&q, spanning_set(&q)).unwrap();
    let dp = dual_pair(&plqs, &sc).unwrap(); // verifies mutual centralizing
    assert_eq!(dp.k_basis.len(), 3);
    assert_eq!(dp.l_basis.len(), 3);
    pass("dual pair: dim k_w = 3, dim l_w = 3, mutual centralizers (exact null spaces)");
}

/// Radial physics identity with fully symbolic kappa and lambda, and the
/// Casimir value 2l(l+1), for l = 0..=10.
#[test]
fn criterion_04_physics_identity_and_casimir() {
    for ell in 0..=10u32 {
        assert!(physics_identity(ell), "physics identity at l={ell}");
        let c = casimir_scalar(ell).unwrap();
        let expected = LaurentPoly::constant(Scalar::from_int(2 * (ell * (ell + 1)) as i64));
        assert_eq!(c, expected, "Casimir at l={ell}");
    }
    pass("physics identity (symbolic kappa, lambda) and Casimir = 2l(l+1), l = 0..=10");
}

/// Hydrogen levels -1/(4n^2) at kappa = 1, N = 200, beta = 1: present with
/// the stated tolerance for every l < n <= 6, absent for l >= n.
#[test]
fn criterion_05_hydrogen_spectrum() {
    let (kappa, size, beta) = (1.0, 200usize, 1.0);
    let mut spectra = Vec::new();
    for ell in 0..=6u32 {
        let basis = RadialBasis::build(ell, size, beta).unwrap();
        let pencil = assemble_pencil(&basis, kappa).unwrap();
        spectra.push(bound_states(&pencil, size).unwrap());
    }
    for n in 1..=6u32 {
        let target = -1.0 / (4.0 * (n * n) as f64);
        let tol = level_tolerance(n);
        for (ell, vals) in spectra.iter().enumerate() {
            let best = vals
                .iter()
                .map(|&v| ((v - target) / target.abs()).abs())
                .fold(f64::INFINITY, f64::min);
            if (ell as u32) < n {
                assert!(
                    best < tol,
                    "level n={n} missing in l={ell}: best rel err {best:.3e}"
                );
            } else {
                assert!(
                    best > 10.0 * tol,
                    "level n={n} spuriously present in l={ell}: rel err {best:.3e}"
                );
            }
        }
    }
    pass("spectrum -1/(4n^2): rel err < 1e-8 (n<=3) and < 1e-3 (n<=6) for all l < n; absent for l >= n");
}

/// Degeneracy sums n^2 for n <= 5.
#[test]
fn criterion_06_degeneracy() {
    let rows = degeneracy_table(1.0, 5, 200, 1.0).unwrap();
    for row in &rows {
        assert_eq!(row.total, row.n * row.n, "degeneracy at n={}", row.n);
        assert_eq!(row.ells.len() as u32, row.n);
    }
    pass("degeneracy: sum of (2l+1) over l < n equals n^2 for n <= 5");
}

/// Lower cone: no bound states at any tested resolution, and the smallest
/// positive eigenvalue decreases toward the continuum edge as N grows.
#[test]
fn criterion_07_lower_cone() {
    for ell in 0..=3u32 {
        let mut prev_min = f64::INFINITY;
        for size in [100usize, 200, 400] {
            let (neg, min_pos) = lower_cone_bound_states(1.0, ell, size, 1.0).unwrap();
            assert!(
                neg.is_empty(),
                "negative eigenvalues at l={ell}, N={size}: {neg:?}"
            );
            assert!(
                min_pos < prev_min,
                "min positive eigenvalue not decreasing at l={ell}, N={size}"
            );
            prev_min = min_pos;
        }
    }
    pass("lower cone: no eigenvalue below -1e-10 (l <= 3, N in {100,200,400}); continuum edge decreasing in N");
}

/// Compact generator i(F-E): eigenvalues 2(k+l+1).
#[test]
fn criterion_08_compact_generator() {
    for ell in 0..=2u32 {
        let basis = RadialBasis::build(ell, 60, 1.0).unwrap();
        let vals = compact_spectrum(&basis).unwrap();
        for (k, &v) in vals.iter().take(10).enumerate() {
            let expected = 2.0 * (k as f64 + ell as f64 + 1.0);
            assert!(
                (v - expected).abs() < 1e-8,
                "mode k={k}, l={ell}: {v} vs {expected}"
            );
        }
    }
    pass("compact generator i(F-E): first 10 modes equal 2(k+l+1) for l in {0,1,2} within 1e-8");
}

/// Scaling covariance: the kappa = 2 spectrum is 4x the kappa = 1 one.
#[test]
fn criterion_09_scaling_covariance() {
    for ell in 0..=1u32 {
        let basis1 = RadialBasis::build(ell, 120, 1.0).unwrap();
        let s1 = bound_states(&assemble_pencil(&basis1, 1.0).unwrap(), 4).unwrap();
        let basis2 = RadialBasis::build(ell, 120, 2.0).unwrap();
        let s2 = bound_states(&assemble_pencil(&basis2, 2.0).unwrap(), 4).unwrap();
        assert!(s1.len() >= 3 && s2.len() >= 3);
        for (a, b) in s1.iter().zip(&s2).take(3) {
            let rel = (b / (4.0 * a) - 1.0).abs();
            assert!(rel < 1e-6, "l={ell}: {b} vs 4*{a} (rel {rel:.3e})");
        }
    }
    pass("scaling covariance: bound states at kappa=2 equal 4x those at kappa=1 within 1e-6");
}

/// Monodromy: closed form, unimodularity exactly on the candidate set, and
/// |M| != 1 off the real axis.
#[test]
fn criterion_10_monodromy() {
    use conequant::sl2pencil::{closed_form_integral, monodromy, monodromy_scan};
    for k in 1..=20 {
        let lam = -(k as f64) / 10.0;
        let r = monodromy(Complex64::new(lam, 0.0)).unwrap();
        let exact = closed_form_integral(lam);
        assert!(((r.integral.0 - exact) / exact).abs() < 1e-10, "I({lam})");
    }
    // M = 1 at the candidates themselves...
    for m in 1..=6u32 {
        let r = monodromy(Complex64::new(-1.0 / ((m * m) as f64), 0.0)).unwrap();
        let dev = (Complex64::new(r.monodromy.0, r.monodromy.1) - 1.0).norm();
        assert!(dev < 1e-10, "M at -1/{}^2: dev {dev:.3e}", m);
    }
    // ...and nowhere else on the grid: every grid point with small |M-1|
    // lies within 2e-3 of a candidate.
    let candidates: Vec<f64> = (1..=12u32).map(|m| -1.0 / ((m * m) as f64)).collect();
    let scan = monodromy_scan(-1.2, -0.01, 1e-3).unwrap();
    for &(lam, dev) in &scan {
        let near = candidates.iter().any(|&c| (lam - c).abs() < 2e-3);
        if dev < 1e-6 {
            assert!(near, "|M-1| = {dev:.3e} at off-candidate lambda = {lam}");
        }
    }
    let r = monodromy(Complex64::i()).unwrap();
    assert!((r.abs_m - 1.0).abs() > 0.1);
    pass("monodromy: I = 2pi/sqrt(|lambda|) to 1e-10; M = 1 exactly on {-1/m^2}; |M| off by > 0.1 at lambda = i");
}

/// Closed-form eigenfunction residuals and generator skewness.
#[test]
fn criterion_11_residuals_and_adjoints() {
    for (n, ell) in [(1u32, 0u32), (2, 0), (2, 1), (3, 1)] {
        let r = eigenfunction_residual(n, ell, 1.0);
        assert!(r < 1e-8, "residual at (n,l)=({n},{ell}): {r:.3e}");
    }
    let basis = RadialBasis::build(1, 40, 1.0).unwrap();
    let (de, dh, df) = adjoint_deviations(&basis, 20);
    assert!(
        de < 1e-9 && dh < 1e-9 && df < 1e-9,
        "skewness {de:.1e} {dh:.1e} {df:.1e}"
    );
    pass("eigenfunction residuals < 1e-8 for (1,0),(2,0),(2,1),(3,1); generator skewness < 1e-9 on 20 pairs");
}

/// DSL: 100 round trips on pseudo-random elements plus documented error
/// positions on 10 malformed inputs.
#[test]
fn criterion_12_dsl() {
    // Small deterministic generator (xorshift64*).
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        state = state.wrapping_mul(0x2545f4914f6cdd1d);
        state
    };
    let n = 4;
    for case in 0..100 {
        let mut w = WeylElement::zero(n);
        let terms = 1 + (next() % 3) as usize;
        for _ in 0..terms {
            let alpha = MultiIndex((0..n).map(|_| (next() % 3) as u32).collect());
            let idx = MultiIndex((0..n).map(|_| (next() % 3) as u32).collect());
            let c = Scalar::from_ratio((next() % 13) as i64 - 6, 1 + (next() % 4) as i64)
                + Scalar::from_ratio((next() % 9) as i64 - 4, 1) * Scalar::i();
            if c.is_zero() {
                continue;
            }
            w.add_term(alpha, Polynomial::monomial(n, idx, c));
        }
        let text = format_weyl(&w);
        let back = parse_weyl(&text, n).unwrap_or_else(|e| panic!("case {case}: {text:?}: {e}"));
        assert_eq!(back, w, "round trip failed on {text:?}");
    }
    let malformed: [(&str, usize); 10] = [
        ("z1 + + z2", 5),
        ("z1 * ", 5),
        ("(z1 + z2", 8),
        ("z", 0),
        ("z1 ? z2", 3),
        ("z5*d1", 0),
        ("[z1, d1", 7),
        ("z1^", 3),
        ("1/0", 2),
        ("* z1", 0),
    ];
    for (text, pos) in malformed {
        let err = parse_weyl(text, n).unwrap_err();
        assert_eq!(err.pos, pos, "position for {text:?} ({})", err.msg);
    }
    pass("DSL: 100-case round trip; error positions verified on 10 malformed inputs");
}
