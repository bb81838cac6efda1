use kelvin_voigt::ilt::{contour_sum, invert, IltConfig, LaplaceImage};
use kelvin_voigt::specfun::erfc;
use num_complex::Complex64;

type Original = fn(f64) -> f64;

fn pairs() -> Vec<(&'static str, LaplaceImage, Original)> {
    let one = Complex64::new(1.0, 0.0);
    vec![
        ("1/s", LaplaceImage::new(0.0, move |s| one / s), |_| 1.0),
        ("1/s^2", LaplaceImage::new(0.0, move |s| one / (s * s)), |t| t),
        ("1/(s+1)", LaplaceImage::new(-1.0, move |s| one / (s + 1.0)), |t| (-t).exp()),
        ("1/(s^2+1)", LaplaceImage::new(0.0, move |s| one / (s * s + 1.0)).with_singularity_height(1.0), |t| t.sin()),
        ("exp(-sqrt s)/s", LaplaceImage::new(0.0, move |s| (-s.sqrt()).exp() / s), |t| erfc(0.5 / t.sqrt())),
    ]
}

fn times() -> impl Iterator<Item = f64> {
    (0..=120).map(|i| 0.1 * 100f64.powf(i as f64 / 120.0))
}

fn worst_error(image: &LaplaceImage, exact: Original, nodes: usize) -> f64 {
    times().map(|t| (contour_sum(image, t, nodes, 1.0).0 - exact(t)).abs()).fold(0.0, f64::max)
}

#[test]
fn known_pairs_with_default_config() {
    let cfg = IltConfig::default();
    for (name, image, exact) in pairs() {
        for t in times() {
            let out = invert(&image, t, &cfg).unwrap();
            assert!(out.converged, "{name} at t = {t}");
            assert!((out.value - exact(t)).abs() <= 1e-8, "{name} at t = {t}: {}", out.value);
        }
    }
}

#[test]
fn suite_error_does_not_grow_with_nodes() {
    let suite = |n: usize| pairs().iter().map(|(_, image, exact)| worst_error(image, *exact, n)).fold(0.0, f64::max);
    let errors: Vec<f64> = [16, 32, 64].iter().map(|&n| suite(n)).collect();
    for w in errors.windows(2) {
        assert!(w[1] <= 10.0 * w[0], "{errors:?}");
    }
}

#[test]
fn oscillating_original_needs_doubling() {
    let one = Complex64::new(1.0, 0.0);
    let image = LaplaceImage::new(0.0, move |s| one / (s * s + 1.0)).with_singularity_height(1.0);
    let fixed = invert(&image, 10.0, &IltConfig::with_nodes(32)).unwrap();
    assert!(!fixed.converged);
    let adaptive = invert(&image, 10.0, &IltConfig::default()).unwrap();
    assert!(adaptive.converged);
    assert!(adaptive.function_evals > fixed.function_evals);
}

#[test]
fn unenclosed_poles_are_refused() {
    let one = Complex64::new(1.0, 0.0);
    let omega = 3.0;
    let image = LaplaceImage::new(0.0, move |s| one / (s * s + omega * omega)).with_singularity_height(omega);
    let err = invert(&image, 10.0, &IltConfig::default()).unwrap_err();
    assert!(err.is_numerical());
    // more nodes bring the poles inside
    let cfg = IltConfig { max_node_count: 128, ..IltConfig::default() };
    let out = invert(&image, 10.0, &cfg).unwrap();
    assert!((out.value - (omega * 10.0).sin() / omega).abs() < 1e-6, "{out:?}");
}
