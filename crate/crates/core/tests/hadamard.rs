use photon_green::hadamard::*;
use photon_green::tensor::{max_abs4, zip4, Tensor4};
use photon_green::{Error, MetricModel};
use proptest::prelude::*;

const P: [f64; 4] = [0.3, -0.2, 0.1, 0.4];

fn diff(a: &Tensor4, b: &Tensor4) -> f64 {
    max_abs4(&zip4(a, b, |x, y| x - y))
}

fn ledger_diff(a: &WeightLedger<Tensor4>, b: &WeightLedger<Tensor4>, k: f64) -> f64 {
    let s = |x: &Tensor4, y: &Tensor4| max_abs4(&zip4(x, y, |u, v| u - k * v));
    s(&a.inv_eps, &b.inv_eps).max(s(&a.gamma0, &b.gamma0)).max(s(&a.gamma_minus1, &b.gamma_minus1))
}

#[test]
fn flat_space_is_null() {
    for m in [MetricModel::minkowski(), MetricModel::euclidean()] {
        for alpha in [0.5, 1.0, 2.0] {
            let r = divergence_report(&m, P, alpha).unwrap();
            for t in [&r.tensor_a, &r.tensor_b, &r.tensor_c] {
                assert!(max_abs4(t) <= 1e-8);
            }
            assert!(r.minimal.max_abs() <= 1e-8 && r.nonminimal.max_abs() <= 1e-8);
            let ff = ff_correlator(&m, P, alpha, 2, 1.0).unwrap();
            assert!(ff.ledger.max_abs() <= 1e-8 && max_abs4(&ff.finite) <= 1e-8);
            let s = maxwell_stress(&m, P, alpha, 2, 1.0).unwrap();
            let all = [&s.finite, &s.ledger.inv_eps, &s.ledger.gamma0, &s.ledger.gamma_minus1];
            assert!(all.iter().all(|t| t.iter().flatten().all(|v| v.abs() <= 1e-8)));
        }
    }
}

#[test]
fn nonminimal_ledger_is_linear_in_alpha_minus_one() {
    let m = MetricModel::sphere(1.0);
    let r2 = divergence_report(&m, P, 2.0).unwrap();
    let r3 = divergence_report(&m, P, 3.0).unwrap();
    assert!(ledger_diff(&r3.nonminimal, &r2.nonminimal, 2.0) < 1e-6);
    assert!(ledger_diff(&r3.minimal, &r2.minimal, 1.0) < 1e-12);
    let h2 = hadamard_second_derivs(&m, P, 2.0, 2, 1.0).unwrap();
    let h3 = hadamard_second_derivs(&m, P, 3.0, 2, 1.0).unwrap();
    assert!(ledger_diff(&h3.nonminimal, &h2.nonminimal, 2.0) < 1e-6);
    let r1 = divergence_report(&m, P, 1.0).unwrap();
    assert_eq!(r1.nonminimal.max_abs(), 0.0);
}

#[test]
fn ledger_scales_as_inverse_fourth_power_of_radius() {
    let origin = [0.0; 4];
    let r1 = divergence_report(&MetricModel::sphere(1.0), origin, 2.0).unwrap();
    let r2 = divergence_report(&MetricModel::sphere(2.0), origin, 2.0).unwrap();
    assert!(r1.nonminimal.max_abs() > 0.1);
    assert!(ledger_diff(&r2.minimal, &r1.minimal, 1.0 / 16.0) < 1e-6);
    assert!(ledger_diff(&r2.nonminimal, &r1.nonminimal, 1.0 / 16.0) < 1e-6);
    let h1 = hadamard_second_derivs(&MetricModel::sphere(1.0), origin, 2.0, 2, 1.0).unwrap();
    let h2 = hadamard_second_derivs(&MetricModel::sphere(2.0), origin, 2.0, 2, 1.0).unwrap();
    assert!(ledger_diff(&h2.nonminimal, &h1.nonminimal, 1.0 / 16.0) < 1e-6);
    assert!(ledger_diff(&h2.minimal, &h1.minimal, 1.0 / 16.0) < 1e-6);
}

#[test]
fn minimal_buckets_match_the_displayed_structure() {
    let m = MetricModel::sphere(1.0);
    let r = divergence_report(&m, P, 1.0).unwrap();
    let h = hadamard_second_derivs(&m, P, 1.0, 2, 1.0).unwrap();
    let scale = max_abs4(&r.minimal.gamma0);
    assert!(diff(&r.minimal.gamma0, &h.minimal.gamma0) <= 1e-5 * scale);
    assert!(diff(&r.minimal.gamma_minus1, &h.minimal.gamma_minus1) <= 1e-5 * scale);
}

#[test]
fn inverse_epsilon_bucket_equals_tensor_a() {
    let m = MetricModel::sphere(1.0);
    let r = divergence_report(&m, P, 2.0).unwrap();
    let h = hadamard_second_derivs(&m, P, 2.0, 2, 1.0).unwrap();
    assert!(r.route_mismatch.inv_eps < 1e-5);
    assert!(diff(&h.nonminimal.inv_eps, &r.nonminimal.inv_eps) < 1e-5 * max_abs4(&r.tensor_a));
}

#[test]
fn gamma_minus_one_bucket_has_uniform_half_weights() {
    // derived: −½([b₂]_{τβ} g_{γρ} + [b₂]_{ρβ} g_{γτ} + [b₂]_{γβ} g_{ρτ})
    let m = MetricModel::sphere(1.0);
    let c = Coincidence::new(&m, P).unwrap();
    let h = hadamard_second_derivs(&m, P, 2.0, 2, 1.0).unwrap();
    let b2 = c.matrix(photon_green::bitensor::field::Kind::Sdw { n: 2, power: 0, with_delta: false }).unwrap();
    let g = c.g;
    let want: Tensor4 = std::array::from_fn(|be| {
        std::array::from_fn(|ga| {
            std::array::from_fn(|rh| {
                std::array::from_fn(|ta| -0.5 * (b2[ta][be] * g[ga][rh] + b2[rh][be] * g[ga][ta] + b2[ga][be] * g[rh][ta]))
            })
        })
    });
    assert!(diff(&h.nonminimal_raw[2], &want) < 1e-10);
    let r = divergence_report(&m, P, 2.0).unwrap();
    assert!(r.route_mismatch.gamma_minus1 > 0.5);
}

#[test]
fn gamma_zero_bucket_differs_from_tensor_b_by_two_terms() {
    let m = MetricModel::sphere(1.0);
    let c = Coincidence::new(&m, P).unwrap();
    let h = hadamard_second_derivs(&m, P, 2.0, 2, 1.0).unwrap();
    let b = tensor_b(&c).unwrap();
    let b1k = photon_green::bitensor::field::Kind::Sdw { n: 1, power: 0, with_delta: false };
    let b1 = c.matrix(b1k).unwrap();
    let mixed = c.mixed_second(b1k).unwrap();
    let riem = &c.riemann;
    let extra: Tensor4 = std::array::from_fn(|be| {
        std::array::from_fn(|ga| {
            std::array::from_fn(|rh| {
                std::array::from_fn(|ta| {
                    let rr: f64 = (0..4).map(|l| b1[l][be] * (riem[l][rh][ga][ta] + riem[l][ta][ga][rh])).sum();
                    0.5 * mixed[be][ga][rh][ta] + rr / 3.0
                })
            })
        })
    });
    let corrected = zip4(&b, &extra, |x, y| x + y);
    assert!(diff(&h.nonminimal_raw[1], &corrected) < 1e-10);
    assert!(diff(&h.nonminimal_raw[1], &b) > 0.1);
}

#[test]
fn tensor_b_is_isotropic_on_the_sphere() {
    // B_{βγρτ} = c₁ g_{βγ} g_{ρτ} + c₂ g_{βρ} g_{γτ} + c₃ g_{βτ} g_{γρ} at the origin (g = δ)
    let m = MetricModel::sphere(1.5);
    let c = Coincidence::new(&m, [0.0; 4]).unwrap();
    let b = tensor_b(&c).unwrap();
    let (c1, c2, c3) = (b[0][0][1][1], b[0][1][0][1], b[0][1][1][0]);
    let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    for i in 0..256 {
        let (be, ga, rh, ta) = (i / 64, (i / 16) % 4, (i / 4) % 4, i % 4);
        let want = c1 * d(be, ga) * d(rh, ta) + c2 * d(be, rh) * d(ga, ta) + c3 * d(be, ta) * d(ga, rh);
        assert!((b[be][ga][rh][ta] - want).abs() < 1e-10);
    }
}

#[test]
fn tensor_c_is_linear_in_b2() {
    let g = photon_green::tensor::identity();
    let base = [[0.3, 0.1, 0.0, 0.2], [0.1, -0.4, 0.5, 0.0], [0.0, 0.5, 0.7, 0.1], [0.2, 0.0, 0.1, 0.2]];
    let mut bumped = base;
    bumped[1][2] += 1.0;
    let d = zip4(&tensor_c_from(&bumped, &g), &tensor_c_from(&base, &g), |a, b| a - b);
    // δ[b₂]_{12}: β = 2 and the free slot equal to 1
    assert!((d[2][0][1][0] + 2.0).abs() < 1e-14); // τ = 1, γ = ρ
    assert!((d[2][0][0][1] + 2.0).abs() < 1e-14); // ρ = 1, γ = τ
    assert!((d[2][1][0][0] + 0.5).abs() < 1e-14); // γ = 1, ρ = τ
}

#[test]
fn stress_on_the_sphere_is_symmetric_and_traceless() {
    let m = MetricModel::sphere(1.0);
    for alpha in [1.0, 2.0] {
        let s = maxwell_stress(&m, P, alpha, 2, 1.0).unwrap();
        assert!(s.asymmetry < 1e-8);
        assert!(s.trace.abs() < 1e-8);
        assert!(s.flags.iter().any(|f| f == BBAR_FLAG));
    }
}

#[test]
fn correlator_difference_is_proportional_to_alpha_minus_one() {
    let m = MetricModel::sphere(1.0);
    let f1 = ff_correlator(&m, P, 1.0, 2, 1.0).unwrap();
    let f2 = ff_correlator(&m, P, 2.0, 2, 1.0).unwrap();
    let f3 = ff_correlator(&m, P, 3.0, 2, 1.0).unwrap();
    let d = |a: &Tensor4, b: &Tensor4| zip4(a, b, |x, y| x - y);
    for (x1, x2, x3) in [
        (&f1.ledger.inv_eps, &f2.ledger.inv_eps, &f3.ledger.inv_eps),
        (&f1.ledger.gamma0, &f2.ledger.gamma0, &f3.ledger.gamma0),
        (&f1.ledger.gamma_minus1, &f2.ledger.gamma_minus1, &f3.ledger.gamma_minus1),
    ] {
        let (d21, d31) = (d(x2, x1), d(x3, x1));
        assert!(max_abs4(&zip4(&d31, &d21, |a, b| a - 2.0 * b)) < 1e-10);
    }
}

#[test]
fn hadamard_part_of_flat_feynman_propagator() {
    let m = MetricModel::euclidean();
    let g = photon_green::green::green_asymptotics(&m, &photon_green::SpacetimePoint::new([0.0; 4]), &photon_green::SpacetimePoint::new([0.3, 0.2, 0.0, 0.1]), 1.0, 2, 1.0).unwrap();
    let h = hadamard_from_feynman(&g);
    let k = 1.0 / (8.0 * std::f64::consts::PI.powi(2));
    for a in 0..4 {
        for b in 0..4 {
            let want = if a == b { k } else { 0.0 };
            assert!((h.inverse_sigma[a][b] - want).abs() < 1e-12);
            assert!(h.log[a][b].abs() < 1e-12 && h.finite[a][b].abs() < 1e-12);
        }
    }
}

#[test]
fn geometries_without_closed_forms_are_rejected() {
    let m = MetricModel::de_sitter(1.0);
    assert!(matches!(hadamard_second_derivs(&m, [0.0; 4], 1.0, 2, 1.0), Err(Error::InvalidParameters(_))));
    assert!(matches!(hadamard_second_derivs(&MetricModel::sphere(1.0), P, -1.0, 2, 1.0), Err(Error::InvalidParameters(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn eight_term_combination_has_field_strength_symmetries(v in proptest::collection::vec(-1.0f64..1.0, 256), d in proptest::collection::vec(0.5f64..2.0, 4)) {
        let h = photon_green::tensor::unflat4(&v);
        let ff = ff_combination(&h);
        for i in 0..256 {
            let (r, g, t, b) = (i / 64, (i / 16) % 4, (i / 4) % 4, i % 4);
            prop_assert!((ff[r][g][t][b] + ff[g][r][t][b]).abs() < 1e-14);
            prop_assert!((ff[r][g][t][b] + ff[r][g][b][t]).abs() < 1e-14);
        }
        let inv = photon_green::tensor::diag([d[0], d[1], d[2], d[3]]);
        let t = stress_contraction(&inv, &ff);
        let g = photon_green::tensor::diag([1.0 / d[0], 1.0 / d[1], 1.0 / d[2], 1.0 / d[3]]);
        let mut trace = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                prop_assert!((t[a][b] - t[b][a]).abs() < 1e-12);
                trace += g[a][b] * t[a][b];
            }
        }
        prop_assert!(trace.abs() < 1e-12);
    }
}
