//! Release acceptance battery. One test per gate; each prints an explicit
//! pass line once every assertion in the gate holds, and the tolerances are
//! pinned as constants right here, next to the checks they govern.
//!
//! Exact gates assert residuals of literally zero in rational arithmetic;
//! quadrature-backed gates assert against the stated numeric bands.

use m1jacobi::bigm1::{
    bigm1_coeffs, eigenvalue_lambda, monic_coeffs, norm_h, norm_h_bare, operator_l_apply,
    recurrence_coeffs, support, weight_ctx, UniParams, UniRegime,
};
use m1jacobi::bigq::{
    bigq_biv_coeffs, biv_limit_deviation, limit_qparams, omega_apply, omega_eigenvalue,
    q_x_recurrence_coeffs, q_y_recurrence_coeffs, QParams,
};
use m1jacobi::bivariate::{
    biv_coeffs, domain_area, domain_biv, eigenvalue_mu, eigenvalue_nu, l1_apply, l2_apply,
    pearson_grid_points, pearson_residuals, recurrence_deviations, weight_biv, x_recurrence_coeffs,
    y_recurrence_coeffs, BivIndex, BivParams, BivRegime, CoeffSource, WeightPerturbation,
};
use m1jacobi::chihara::{christoffel_kernel, norm_h_via_kernel, relation_check};
use m1jacobi::exact::ExactScalar;
use m1jacobi::laurent::{NumPoly2, RatPoly1, RatPoly2};
use m1jacobi::quad::{
    integrate_union, integrate_union_stable, integrate_union_vec, IntervalUnion, QuadratureSpec,
    SegmentCtx,
};
use m1jacobi::verify::{biv_gram_rows, uni_gram_rows};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNI_GRAM_REL: f64 = 1e-8;
const PI_ANCHOR_ABS: f64 = 1e-10;
const NORM_ROUTE_REL: f64 = 1e-8;
const RELATION_ABS: f64 = 1e-10;
const BIV_GRAM_REL: f64 = 1e-6;
const COEFF_AGREE_ABS: f64 = 1e-7;
const Q_IDENTITY_REL: f64 = 1e-9;
const ORDER_WINDOW: f64 = 0.3;
const OPERATOR_LIMIT_REL: f64 = 1e-3;
const PEARSON_ABS: f64 = 1e-10;
const PEARSON_CONTROL_MIN: f64 = 1e-3;
const INV_SQRT_ABS: f64 = 1e-10;
const DEGREE20_ABS: f64 = 1e-12;
const AREA_ABS: f64 = 1e-9;

fn rat(p: i64, q: i64) -> ExactScalar {
    ExactScalar::ratio(p, q)
}

fn uni_params(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> UniParams {
    UniParams::new(rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1)).unwrap()
}

/// Three rational parameter sets per regime.
fn uni_sets() -> Vec<(UniParams, UniRegime)> {
    vec![
        (uni_params((1, 2), (3, 4), (1, 5)), UniRegime::Inside),
        (uni_params((1, 3), (1, 2), (-2, 7)), UniRegime::Inside),
        (uni_params((2, 1), (1, 1), (1, 2)), UniRegime::Inside),
        (uni_params((1, 2), (3, 4), (5, 2)), UniRegime::Outside),
        (uni_params((1, 3), (1, 2), (-7, 3)), UniRegime::Outside),
        (uni_params((2, 1), (1, 1), (3, 2)), UniRegime::Outside),
    ]
}

fn biv_params(delta: (i64, i64)) -> BivParams {
    BivParams::from_ratios((1, 2), (1, 2), (1, 2), delta).unwrap()
}

fn biv_regimes() -> [(BivParams, BivRegime); 2] {
    [(biv_params((1, 5)), BivRegime::Inside), (biv_params((5, 2)), BivRegime::Outside)]
}

fn quad_spec() -> QuadratureSpec {
    QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-10, level_max: 13 }
}

fn poly1_zero(f: &RatPoly1) -> bool {
    f.is_zero()
}

fn num2_max(f: &NumPoly2) -> f64 {
    f.terms().map(|(_, c)| c.abs()).fold(0.0, f64::max)
}

#[test]
fn c01_univariate_exact_identities() {
    let one = ExactScalar::one();
    let x = RatPoly1::monomial(1, one.clone());
    for (p, _) in uni_sets() {
        for n in 0..=8u32 {
            let jn = bigm1_coeffs(n, &p).unwrap();
            let at_one = jn.evaluate_exact(&one);
            assert!(at_one == one, "value at 1 is {at_one} for n = {n}");

            let (a_n, c_n) = recurrence_coeffs(n, &p).unwrap();
            let b_n = &one - &a_n - &c_n;
            let mut rhs = bigm1_coeffs(n + 1, &p).unwrap().scale(&a_n).add(&jn.scale(&b_n));
            if n > 0 {
                rhs = rhs.add(&bigm1_coeffs(n - 1, &p).unwrap().scale(&c_n));
            }
            assert!(poly1_zero(&x.mul(&jn).sub(&rhs)), "three-term relation fails at n = {n}");

            let lambda = eigenvalue_lambda(n, &p);
            let eig = operator_l_apply(&p, &jn).unwrap().sub(&jn.scale(&lambda));
            assert!(poly1_zero(&eig), "eigen relation fails at n = {n}");
        }
    }
    println!(
        "c01 pass: recurrence, eigen relation, and normalization exact over 6 parameter sets, n <= 8"
    );
}

#[test]
fn c02_univariate_orthogonality() {
    let spec = quad_spec();
    for (p, regime) in [
        (uni_params((1, 2), (3, 4), (1, 5)), UniRegime::Inside),
        (uni_params((1, 2), (3, 4), (5, 2)), UniRegime::Outside),
    ] {
        let norms: Vec<f64> = (0..=8).map(|n| norm_h(n, &p, regime).unwrap()).collect();
        for row in uni_gram_rows(&p, 8, &spec).unwrap() {
            let (i, j) = (row.n1 as usize, row.n2 as usize);
            if i == j {
                let rel = (row.value - norms[i]).abs() / norms[i].abs();
                assert!(rel <= UNI_GRAM_REL, "diagonal ({i}) off by {rel} in {regime:?}");
            } else {
                let rel = row.value.abs() / (norms[i] * norms[j]).abs().sqrt();
                assert!(rel <= UNI_GRAM_REL, "entry ({i}, {j}) residual {rel} in {regime:?}");
            }
        }
    }

    let p0 = uni_params((0, 1), (0, 1), (0, 1));
    let w = weight_ctx(&p0, UniRegime::Inside);
    let (mass, _) =
        integrate_union_stable(|ctx| w(ctx), &support(&p0, UniRegime::Inside).unwrap(), &spec)
            .unwrap();
    assert!(
        (mass - std::f64::consts::PI).abs() <= PI_ANCHOR_ABS,
        "zero-parameter mass is {mass}, not pi"
    );
    println!(
        "c02 pass: 9x9 Gram diagonal within {UNI_GRAM_REL} in both regimes; mass at zero \
         parameters equals pi within {PI_ANCHOR_ABS}"
    );
}

#[test]
fn c03_kernel_triangle() {
    let p = uni_params((1, 2), (3, 4), (1, 5));
    let spec = quad_spec();

    // Pointwise agreement between the kernel family and the rescaled
    // Chihara family.
    let points: Vec<f64> = (0..21).map(|i| -0.95 + 0.095 * i as f64).collect();
    let (rel_res, witness) = relation_check(&p, 6, &points).unwrap();
    assert!(rel_res <= RELATION_ABS, "kernel/Chihara relation residual {rel_res} at {witness}");

    // The synthetic division defining the kernel leaves no remainder.
    let nu = ExactScalar::one();
    for n in 0..=6u32 {
        let jn = monic_coeffs(n, &p).unwrap();
        let jn1 = monic_coeffs(n + 1, &p).unwrap();
        let ratio = jn1.evaluate_exact(&nu) / jn.evaluate_exact(&nu);
        let kernel = christoffel_kernel(n, &p, &nu).unwrap();
        let lin = RatPoly1::from_coeffs(&[ExactScalar::zero() - &nu, ExactScalar::one()]);
        let rebuilt = lin.mul(&kernel).add(&jn.scale(&ratio));
        assert!(poly1_zero(&rebuilt.sub(&jn1)), "kernel division remainder at n = {n}");
    }

    // Three norm routes agree pairwise: closed form, kernel pipeline,
    // quadrature.
    let polys: Vec<_> = (0..=6).map(|n| bigm1_coeffs(n, &p).unwrap().to_num()).collect();
    let w = weight_ctx(&p, UniRegime::Inside);
    let f = |ctx: &SegmentCtx, out: &mut [f64]| {
        let weight = w(ctx);
        for (slot, poly) in polys.iter().enumerate() {
            let v = poly.evaluate(ctx.x).unwrap_or(f64::NAN);
            out[slot] = v * v * weight;
        }
    };
    let (diag, _) =
        integrate_union_vec(&f, 7, &support(&p, UniRegime::Inside).unwrap(), &spec).unwrap();
    for n in 0..=6u32 {
        let closed = norm_h(n, &p, UniRegime::Inside).unwrap();
        let prefactor = closed / norm_h_bare(n, p.a.to_f64(), p.b.to_f64()).unwrap();
        let kernel = norm_h_via_kernel(n, &p).unwrap() * prefactor;
        let quad = diag[n as usize];
        for (label, lhs, rhs) in [
            ("closed/kernel", closed, kernel),
            ("closed/quad", closed, quad),
            ("kernel/quad", kernel, quad),
        ] {
            let rel = (lhs - rhs).abs() / lhs.abs();
            assert!(rel <= NORM_ROUTE_REL, "{label} disagree by {rel} at n = {n}");
        }
    }
    println!(
        "c03 pass: three norm routes pairwise within {NORM_ROUTE_REL} for n <= 6, division \
         remainder exactly zero, kernel relation within {RELATION_ABS}"
    );
}

#[test]
fn c04_bivariate_construction() {
    for (p, _) in biv_regimes() {
        for n in 0..=5u32 {
            for k in 0..=n {
                // Construction certifies internally that every inverse power
                // cancels before returning.
                let poly = biv_coeffs(BivIndex { n, k }, &p).unwrap();
                assert_eq!(poly.total_degree(), Some(n as i64), "total degree at ({n}, {k})");
                assert_eq!(poly.x_degree(), Some(k as i64), "x degree at ({n}, {k})");
            }
        }
    }
    println!(
        "c04 pass: polynomiality and degree pattern confirmed for 0 <= k <= n <= 5, both regimes"
    );
}

#[test]
fn c05_bivariate_bispectrality() {
    for (p, _) in biv_regimes() {
        for n in 0..=5u32 {
            let mu = eigenvalue_mu(n, &p);
            for k in 0..=n {
                let poly = biv_coeffs(BivIndex { n, k }, &p).unwrap();
                let r1 = l1_apply(&p, &poly).unwrap().sub(&poly.scale(&mu));
                assert!(r1.is_zero(), "principal eigen relation fails at ({n}, {k})");
                let nu = eigenvalue_nu(k, &p);
                let r2 = l2_apply(&p, &poly).unwrap().sub(&poly.scale(&nu));
                assert!(r2.is_zero(), "section eigen relation fails at ({n}, {k})");
            }
        }
    }

    let p = biv_params((1, 5));
    for i in 0..=6i64 {
        for j in 0..=(6 - i) {
            let f = RatPoly2::monomial(i, j, ExactScalar::one());
            let a1 = l1_apply(&p, &f).unwrap();
            let a2 = l2_apply(&p, &f).unwrap();
            assert!(a1.total_degree().unwrap_or(0) <= i + j, "degree raised on x^{i} y^{j}");
            assert!(a2.total_degree().unwrap_or(0) <= i + j, "degree raised on x^{i} y^{j}");
            let commutator = l2_apply(&p, &a1).unwrap().sub(&l1_apply(&p, &a2).unwrap());
            assert!(commutator.is_zero(), "operators do not commute on x^{i} y^{j}");
        }
    }
    println!(
        "c05 pass: both eigen relations exact for n <= 5 in both regimes; commutation and \
         degree preservation exact on all monomials of total degree <= 6"
    );
}

#[test]
fn c06_bivariate_orthogonality() {
    let spec = QuadratureSpec { abs_tol: 1e-11, rel_tol: 1e-9, level_max: 12 };
    for (p, regime) in biv_regimes() {
        let indices: Vec<BivIndex> =
            (0..=4).flat_map(|n| (0..=n).map(move |k| BivIndex { n, k })).collect();
        let norms: Vec<f64> = indices
            .iter()
            .map(|&idx| m1jacobi::bivariate::norm_h_biv(idx, &p, regime).unwrap())
            .collect();
        let rows = biv_gram_rows(&p, regime, 4, &spec).unwrap();
        for (slot, row) in rows.iter().enumerate() {
            let i = slot / indices.len();
            let j = slot % indices.len();
            if i == j {
                let rel = (row.value - norms[i]).abs() / norms[i].abs();
                assert!(
                    rel <= BIV_GRAM_REL,
                    "diagonal {:?} off by {rel} in {regime:?}",
                    indices[i]
                );
            } else {
                let rel = row.value.abs() / (norms[i] * norms[j]).abs().sqrt();
                assert!(
                    rel <= BIV_GRAM_REL,
                    "entry ({:?}, {:?}) residual {rel} in {regime:?}",
                    indices[i],
                    indices[j]
                );
            }
        }

        // Positivity at 1000 random interior points.
        let dom = domain_biv(&p, regime).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0u32;
        while checked < 1000 {
            let segs = dom.y_support.segments().to_vec();
            let seg = segs[rng.gen_range(0..segs.len())];
            let y = rng.gen_range(seg.0..seg.1);
            let xsegs = dom.x_support_of(y).segments().to_vec();
            if xsegs.is_empty() {
                continue;
            }
            let xseg = xsegs[rng.gen_range(0..xsegs.len())];
            if xseg.1 - xseg.0 < 1e-9 {
                continue;
            }
            let x = rng.gen_range(xseg.0..xseg.1);
            let value = weight_biv(x, y, &p, regime).unwrap();
            assert!(value > 0.0, "weight {value} at ({x}, {y}) in {regime:?}");
            checked += 1;
        }
    }
    println!(
        "c06 pass: 15x15 Gram diagonal within {BIV_GRAM_REL} against the closed-form norms in \
         both regimes; weight positive at 1000 random interior points per regime"
    );
}

#[test]
fn c07_recurrence_adjudication() {
    let p = biv_params((1, 5));

    // The closed-form tables and the expansion oracle agree exactly, so the
    // deviations report is empty and the agreement band is met with room.
    let deviations = recurrence_deviations(&p, 3).unwrap();
    assert!(
        deviations.is_empty(),
        "coefficient routes disagree beyond {COEFF_AGREE_ABS}: {deviations:?}"
    );

    // Both relations hold as exact polynomial identities through n = 4,
    // whichever route produced the coefficients.
    for source in [CoeffSource::ClosedForm, CoeffSource::Expansion] {
        for n in 0..=4u32 {
            for k in 0..=n {
                let idx = BivIndex { n, k };
                let base = biv_coeffs(idx, &p).unwrap();
                for (coeffs, shift, label) in [
                    (y_recurrence_coeffs(idx, &p, source).unwrap(), (0i64, 1i64), "y"),
                    (x_recurrence_coeffs(idx, &p, source).unwrap(), (1, 0), "x"),
                ] {
                    let mut acc = RatPoly2::zero();
                    for sc in &coeffs {
                        let sn = n as i64 + sc.dn as i64;
                        let sk = k as i64 + sc.dk as i64;
                        if sn < 0 || sk < 0 || sk > sn {
                            assert!(
                                sc.value.is_zero(),
                                "{label}-relation points outside the family at ({n}, {k})"
                            );
                            continue;
                        }
                        let member =
                            biv_coeffs(BivIndex { n: sn as u32, k: sk as u32 }, &p).unwrap();
                        acc = acc.add(&member.scale(&sc.value));
                    }
                    let residual = acc.sub(&base.shift(shift.0, shift.1));
                    assert!(
                        residual.is_zero(),
                        "{label}-relation not exact at ({n}, {k}) via {source:?}"
                    );
                }
            }
        }
    }
    println!(
        "c07 pass: closed-form and expansion coefficients identical (0 deviations recorded, \
         band {COEFF_AGREE_ABS}); both structure relations exact through n = 4"
    );
}

#[test]
fn c08_q_degeneration() {
    let p = biv_params((1, 5));
    let eps_seq = [1e-2, 1e-3, 1e-4];

    // Coefficient deviations decay at first order along the path.
    for n in 0..=3u32 {
        for k in 0..=n {
            let idx = BivIndex { n, k };
            let devs: Vec<f64> =
                eps_seq.iter().map(|&e| biv_limit_deviation(idx, &p, e).unwrap()).collect();
            if devs.iter().all(|d| *d <= 1e-13) {
                continue; // constant member, both sides identical
            }
            for w in devs.windows(2) {
                assert!(w[1] < w[0], "deviation grows at ({n}, {k}): {:?}", devs);
                let order = (w[0] / w[1]).log10();
                assert!(
                    (order - 1.0).abs() <= ORDER_WINDOW,
                    "decay order {order} outside 1 +/- {ORDER_WINDOW} at ({n}, {k})"
                );
            }
        }
    }

    // Eigen relation and both structure relations on the q side.
    for qp in [
        QParams::new(0.5, 0.6, 0.4, 0.3, 0.7).unwrap(),
        QParams::new(0.3, 0.5, 0.7, -0.2, 0.55).unwrap(),
    ] {
        for n in 0..=4u32 {
            let lambda = omega_eigenvalue(n, &qp);
            for k in 0..=n {
                let idx = BivIndex { n, k };
                let poly = bigq_biv_coeffs(idx, &qp).unwrap();
                let scale = num2_max(&poly).max(1.0) * lambda.abs().max(1.0);
                let residual = omega_apply(&qp, &poly).sub(&poly.scale(&lambda));
                assert!(
                    num2_max(&residual) / scale <= Q_IDENTITY_REL,
                    "q eigen relation residual at ({n}, {k})"
                );

                let base_scale = num2_max(&poly).max(1.0);
                for (coeffs, shift, label) in [
                    (q_y_recurrence_coeffs(idx, &qp).unwrap(), (0i64, 1i64), "y"),
                    (q_x_recurrence_coeffs(idx, &qp).unwrap(), (1, 0), "x"),
                ] {
                    let mut acc = NumPoly2::zero();
                    for &(dn, dk, value) in &coeffs {
                        let sn = n as i64 + dn as i64;
                        let sk = k as i64 + dk as i64;
                        if sn < 0 || sk < 0 || sk > sn {
                            assert!(
                                value.abs() / base_scale <= Q_IDENTITY_REL,
                                "q {label}-relation points outside the family at ({n}, {k})"
                            );
                            continue;
                        }
                        let member =
                            bigq_biv_coeffs(BivIndex { n: sn as u32, k: sk as u32 }, &qp).unwrap();
                        acc = acc.add(&member.scale(&value));
                    }
                    let residual = acc.sub(&poly.shift(shift.0, shift.1));
                    assert!(
                        num2_max(&residual) / base_scale <= Q_IDENTITY_REL,
                        "q {label}-relation residual at ({n}, {k})"
                    );
                }
            }
        }
    }

    // Near the endpoint of the path, the rescaled q operator reproduces the
    // principal reflection operator on low-degree polynomials.
    let qp = limit_qparams(&p, 1e-4);
    for i in 0..=3i64 {
        for j in 0..=(3 - i) {
            let f = RatPoly2::monomial(i, j, ExactScalar::one());
            let target = l1_apply(&p, &f).unwrap().to_num();
            let got = omega_apply(&qp, &f.to_num()).scale(&(1.0 / (1.0 + qp.q)));
            let gap = num2_max(&got.sub(&target)) / num2_max(&target).max(1.0);
            assert!(gap <= OPERATOR_LIMIT_REL, "operator gap {gap} on x^{i} y^{j}");
        }
    }
    println!(
        "c08 pass: first-order decay (order 1 +/- {ORDER_WINDOW}) for n <= 3; q eigen and both \
         q structure relations within {Q_IDENTITY_REL} at two parameter sets; operator \
         degeneration within {OPERATOR_LIMIT_REL}"
    );
}

#[test]
fn c09_pearson_system() {
    let p = biv_params((1, 5));
    let points = pearson_grid_points(&p, 10).unwrap();
    assert_eq!(points.len(), 100);
    for report in pearson_residuals(&p, WeightPerturbation::None, &points).unwrap() {
        assert!(
            report.max_residual <= PEARSON_ABS,
            "balance {} residual {} at {:?}",
            report.equation,
            report.max_residual,
            report.witness
        );
    }

    // Negative controls: a distorted weight must break the system visibly.
    for pert in
        [WeightPerturbation::YEdgeExponentShift(0.3), WeightPerturbation::XFactorOffset(0.1)]
    {
        let worst = pearson_residuals(&p, pert, &points)
            .unwrap()
            .iter()
            .map(|r| r.max_residual)
            .fold(0.0, f64::max);
        assert!(
            worst >= PEARSON_CONTROL_MIN,
            "control {pert:?} went undetected: max residual {worst}"
        );
    }
    println!(
        "c09 pass: all 7 balance equations within {PEARSON_ABS} on a 10x10 interior grid; both \
         negative controls exceed {PEARSON_CONTROL_MIN}"
    );
}

#[test]
fn c10_quadrature_engine() {
    let spec = quad_spec();

    let unit = IntervalUnion::new(vec![(0.0, 1.0)]);
    let (inv_sqrt, _) =
        integrate_union_stable(|ctx| 1.0 / ctx.affine(0.0).abs().sqrt(), &unit, &spec).unwrap();
    assert!((inv_sqrt - 2.0).abs() <= INV_SQRT_ABS, "endpoint-singular mass is {inv_sqrt}");

    let sym = IntervalUnion::new(vec![(-1.0, 1.0)]);
    let (moment, _) = integrate_union(|x| x.powi(20), &sym, &spec).unwrap();
    assert!((moment - 2.0 / 21.0).abs() <= DEGREE20_ABS, "degree-20 moment is {moment}");

    // With the inner vertex at the origin the support is two opposite
    // triangles of unit area each: 2 (1 - |delta|)^2 = 2.
    let p0 = BivParams::new(rat(1, 2), rat(1, 2), rat(1, 2), ExactScalar::zero()).unwrap();
    let expected = domain_area(&p0, BivRegime::Inside).unwrap();
    assert_eq!(expected, 2.0);
    let dom = domain_biv(&p0, BivRegime::Inside).unwrap();
    let (area, _) = m1jacobi::quad::integrate_biv(|_, _| 1.0, &dom, &spec).unwrap();
    assert!((area - expected).abs() <= AREA_ABS, "support area is {area}, expected {expected}");
    println!(
        "c10 pass: endpoint-singular integral within {INV_SQRT_ABS}, degree-20 exactness within \
         {DEGREE20_ABS}, degenerate support area within {AREA_ABS} of the closed form"
    );
}
