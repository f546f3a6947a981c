use divren_core::distribution::*;
use divren_core::quadrature::QuadratureConfig;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default().with_tolerances(1e-12, 1e-12)
}

fn dyadic() -> Vec<f64> {
    (0..=10).map(|k| 2f64.powi(-k)).collect()
}

fn degree(t: &Distribution, probes: &[TestFunction]) -> ScalingReport {
    let refs: Vec<&dyn Probe> = probes.iter().map(|p| p as &dyn Probe).collect();
    estimate_scaling_degree(t, &refs, &dyadic(), &cfg()).unwrap()
}

fn punctured_probes(dim: usize) -> Vec<TestFunction> {
    if dim == 1 {
        vec![
            TestFunction::mollifier(1, 1.0, 0.5).unwrap(),
            TestFunction::mollifier(1, -2.0, 1.0).unwrap().with_prefactor(vec![1.0, 0.3]),
        ]
    } else {
        vec![
            TestFunction::mollifier(dim, 1.0, 0.5).unwrap(),
            TestFunction::mollifier(dim, 2.0, 1.5).unwrap(),
        ]
    }
}

#[test]
fn scaling_degree_of_inverse_distance() {
    let t = Distribution::punctured(1, Kernel::power_law(1.0)).unwrap();
    let r = degree(&t, &punctured_probes(1));
    assert!((r.fitted_degree - 1.0).abs() < 0.05, "{}", r.fitted_degree);
    assert!(r.confident);
}

#[test]
fn scaling_degrees_in_four_dimensions() {
    for (p, expect) in [(4.0, 4.0), (6.0, 6.0)] {
        let t = Distribution::punctured(4, Kernel::power_law(p)).unwrap();
        let r = degree(&t, &punctured_probes(4));
        assert!((r.fitted_degree - expect).abs() < 0.1, "p={p}: {}", r.fitted_degree);
        assert_eq!(r.probe_count, 2);
        assert_eq!(r.samples.len(), 2);
    }
    let d = Distribution::delta(4).unwrap();
    let r = degree(&d, &punctured_probes(4));
    assert!(r.exact && r.fitted_degree == 4.0);
    assert_eq!(propagator_sd(4), 2.0);
}

#[test]
fn power_law_degrees() {
    for p in [0.5, 1.0, 1.5] {
        let t = Distribution::punctured(1, Kernel::power_law(p)).unwrap();
        let r = degree(&t, &punctured_probes(1));
        assert!((r.fitted_degree - p).abs() < 0.05, "p={p}: {}", r.fitted_degree);
    }
    // a locally integrable power seen by probes through the origin
    let t = Distribution::regular(1, Kernel::power_law(0.5)).unwrap();
    let probes = vec![
        TestFunction::mollifier(1, 0.0, 1.0).unwrap(),
        TestFunction::mollifier(1, 0.2, 0.6).unwrap(),
    ];
    let r = degree(&t, &probes);
    assert!((r.fitted_degree - 0.5).abs() < 0.05, "{}", r.fitted_degree);
}

#[test]
fn mollifier_mass_against_simpson_oracle() {
    let n = 200_000;
    let h = 2.0 / n as f64;
    let f = |x: f64| if x.abs() < 1.0 { (-1.0 / (1.0 - x * x)).exp() } else { 0.0 };
    let mut s = f(-1.0) + f(1.0);
    for i in 1..n {
        let x = -1.0 + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    let oracle = s * h / 3.0;
    let one = Distribution::regular(1, Kernel::Constant(1.0)).unwrap();
    let phi = TestFunction::mollifier(1, 0.0, 1.0).unwrap();
    let v = one.apply(&phi, &cfg()).unwrap();
    assert!((v - oracle).abs() < 1e-6);
    assert!((v - 0.443994).abs() < 1e-6);
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

#[test]
fn radial_reduction_matches_product_grid() {
    let kernel = Kernel::Gaussian { width: 0.7 };
    let phi = TestFunction::mollifier(4, 0.0, 1.0).unwrap();
    let radial = Distribution::regular(4, kernel.clone()).unwrap().apply(&phi, &cfg()).unwrap();
    let gl = gauss_legendre(28);
    let mut total = 0.0;
    for &(x1, w1) in &gl {
        for &(x2, w2) in &gl {
            for &(x3, w3) in &gl {
                for &(x4, w4) in &gl {
                    let r = (x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4).sqrt();
                    total += w1 * w2 * w3 * w4 * kernel.eval(r) * phi.value(r);
                }
            }
        }
    }
    assert!((radial - total).abs() < 1e-4, "{radial} {total}");
}

#[test]
fn derivatives_match_central_differences() {
    let probes = [
        TestFunction::mollifier(1, 0.1, 0.9).unwrap().with_prefactor(vec![1.0, -0.4, 0.25]),
        TestFunction::new(1, 0.0, 1.0, vec![0.5, 1.0], Smoothing::SmoothedStep { width: 0.25 }, 1.5).unwrap(),
    ];
    let h = 1e-5;
    for p in &probes {
        let (a, b) = p.support();
        for i in 1..=10 {
            let t = a + (b - a) * (i as f64 - 0.37) / 10.0;
            for k in 1..=4 {
                let central = |h: f64| {
                    (p.jet(t + h).derivative(k - 1).unwrap() - p.jet(t - h).derivative(k - 1).unwrap()) / (2.0 * h)
                };
                // Richardson step removes the h² term near the steep edges
                let fd = (4.0 * central(h) - central(2.0 * h)) / 3.0;
                let exact = p.jet(t).derivative(k).unwrap();
                assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "t={t} k={k}: {fd} vs {exact}");
            }
        }
    }
}

#[test]
fn flat_at_the_support_boundary() {
    let p = TestFunction::mollifier(1, 0.3, 0.8).unwrap();
    let edge = 0.3 + 0.8;
    assert_eq!(p.value(edge), 0.0);
    assert_eq!(p.value(edge + 1e-9), 0.0);
    assert_eq!(p.value(-0.5 - 1e-12), 0.0);
    for delta in [5e-3, 2e-3, 1e-3] {
        let x = edge - 0.8 * delta;
        let h = 0.8 * delta / 8.0;
        let f: Vec<f64> = (0..=4).map(|j| p.value(x - j as f64 * h)).collect();
        for k in 1..=4usize {
            // k-th backward difference
            let mut d = 0.0;
            for j in 0..=k {
                let binom = (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64);
                d += if j % 2 == 0 { 1.0 } else { -1.0 } * binom * f[j];
            }
            let deriv = d / h.powi(k as i32);
            assert!(deriv.abs() < 1e-8, "δ={delta} k={k}: {deriv}");
            assert!(p.jet(x).derivative(k).unwrap().abs() < 1e-8);
        }
    }
}

#[test]
fn scaling_consistency() {
    let regulars = vec![
        Distribution::punctured(1, Kernel::power_law(1.0)).unwrap(),
        Distribution::regular(1, Kernel::Gaussian { width: 0.4 }).unwrap(),
        Distribution::delta_derivative(MultiIndex::single(2), 1.5).unwrap(),
    ];
    let probes = [
        TestFunction::mollifier(1, 1.2, 0.6).unwrap(),
        TestFunction::mollifier(1, -1.5, 0.9).unwrap().with_prefactor(vec![2.0, 1.0]),
        TestFunction::mollifier(1, 0.8, 0.4).unwrap(),
    ];
    for t in &regulars {
        for lam in [0.13, 0.5, 0.77, 1.9, 3.3] {
            let scaled = t.scale(lam).unwrap();
            for phi in &probes {
                let a = scaled.apply(phi, &cfg()).unwrap();
                let b = t.apply(&Scaled { inner: phi, lambda: lam }, &cfg()).unwrap();
                assert!((a - b).abs() <= 1e-7 * b.abs().max(1e-12), "λ={lam}: {a} {b}");
            }
        }
    }
    // δ_λ[φ] = λ^{−n} φ(0)
    let d = Distribution::delta(1).unwrap();
    let phi = TestFunction::mollifier(1, 0.0, 1.0).unwrap();
    let v = d.scale(0.25).unwrap().apply(&phi, &cfg()).unwrap();
    assert!((v - 4.0 * phi.value(0.0)).abs() < 1e-15);
}

fn mollifier_strategy() -> impl Strategy<Value = TestFunction> {
    (-0.5f64..0.5, 0.3f64..1.2, -1.0f64..1.0).prop_map(|(c, r, a1)| {
        TestFunction::mollifier(1, c, r).unwrap().with_prefactor(vec![1.0, a1])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn apply_is_linear(
        phi in mollifier_strategy(),
        psi in mollifier_strategy(),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let ts = vec![
            Distribution::regular(1, Kernel::Gaussian { width: 0.5 }).unwrap(),
            Distribution::regular(1, Kernel::power_law(0.5)).unwrap(),
            Distribution::delta_derivative(MultiIndex::single(1), 2.0).unwrap(),
            Distribution::derivative(
                Distribution::regular(1, Kernel::LogStep { mass: 1.0, smoothing: 0.1 }).unwrap(),
                MultiIndex::single(1),
            ).unwrap(),
        ];
        let combo = Combination { a, first: &phi, b, second: &psi };
        for t in &ts {
            let lhs = t.apply(&combo, &cfg()).unwrap();
            let tp = t.apply(&phi, &cfg()).unwrap();
            let tq = t.apply(&psi, &cfg()).unwrap();
            let rhs = a * tp + b * tq;
            let scale = (a * tp).abs() + (b * tq).abs();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * scale.max(1e-3), "{lhs} {rhs}");
        }
    }
}
