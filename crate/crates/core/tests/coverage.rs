mod common;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use restricted_hpd::coverage::{
    closed_form_coverage_exponential, estimate_coverage, hpd_oracle, verify_bounds, CoverageReport,
};
use restricted_hpd::models::{Family, ModelDescriptor, Noise};
use restricted_hpd::pivot::PivotLaw;
use restricted_hpd::{BoundDirection, Branch, Hpd, HpdError, IntervalSpec, Pivot, SufficientPair};

fn spec(alpha: f64) -> IntervalSpec {
    IntervalSpec::new(alpha).unwrap()
}

fn model(family: Family, a: f64) -> ModelDescriptor {
    ModelDescriptor::new(family, a).unwrap()
}

fn max_se_gap(report: &CoverageReport, target: impl Fn(f64) -> f64) -> f64 {
    report
        .rows
        .iter()
        .filter(|r| r.std_err > 0.0)
        .map(|r| (r.estimate - target(r.tau)).abs() / r.std_err)
        .fold(0.0, f64::max)
}

#[test]
fn reports_are_bit_identical_for_a_seed() {
    let m = model(Family::GammaScale { shape: 3.0 }, 1.0);
    let grid = [0.0, 0.4, 2.0];
    let a = estimate_coverage(&m, spec(0.05), &grid, 20_000, 17).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| estimate_coverage(&m, spec(0.05), &grid, 20_000, 17).unwrap());
    assert_eq!(a, b);
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.estimate.to_bits(), y.estimate.to_bits());
    }
    let c = estimate_coverage(&m, spec(0.05), &grid, 20_000, 18).unwrap();
    assert_ne!(a.rows, c.rows);
}

#[test]
fn report_fields() {
    let m = model(Family::Location { noise: Noise::Normal, sigma: 1.0 }, 0.0);
    let r = estimate_coverage(&m, spec(0.1), &[0.0, 1.0, 0.0, 3.0], 10_000, 1).unwrap();
    assert_eq!(r.boundary_rows().count(), 2);
    assert_eq!(r.interior_rows().count(), 2);
    for row in &r.rows {
        assert_eq!(row.n_reps, 10_000);
        assert_eq!(row.std_err, (row.estimate * (1.0 - row.estimate) / 1e4).sqrt());
        assert_eq!(row.bound_direction, BoundDirection::Floor);
        assert_eq!(row.closed_form, None);
        let want = if row.tau == 0.0 { 1.0 / 1.1 } else { 0.9 / 1.1 };
        assert_eq!(row.theory_bound, want);
    }
    // the two boundary rows use distinct streams
    assert_ne!(r.rows[0].estimate, r.rows[2].estimate);
}

#[test]
fn invalid_requests_are_rejected() {
    let m = model(Family::ExponentialLocation, 0.0);
    assert!(matches!(estimate_coverage(&m, spec(0.1), &[1.0], 9_999, 1), Err(HpdError::Domain(_))));
    assert!(matches!(estimate_coverage(&m, spec(0.1), &[], 10_000, 1), Err(HpdError::Domain(_))));
    assert!(matches!(estimate_coverage(&m, spec(0.1), &[-0.5], 10_000, 1), Err(HpdError::Domain(_))));
    assert!(matches!(estimate_coverage(&m, spec(0.1), &[f64::NAN], 10_000, 1), Err(HpdError::Domain(_))));
}

#[test]
fn exponential_monte_carlo_matches_closed_form() {
    let m = model(Family::ExponentialLocation, 0.0);
    let grid: Vec<f64> = (0..20).map(|i| 3.0 * i as f64 / 19.0).collect();
    let r = estimate_coverage(&m, spec(0.1), &grid, 100_000, 2024).unwrap();
    for row in &r.rows {
        let cf = closed_form_coverage_exponential(0.1, row.tau).unwrap();
        assert_eq!(row.closed_form, Some(cf));
        assert!((row.estimate - cf).abs() <= 4.0 * row.std_err, "τ = {}: {} vs {cf}", row.tau, row.estimate);
    }
    assert_eq!(r.rows[0].estimate, 0.0);
    assert!(verify_bounds(&r).all_pass());
}

#[test]
fn closed_form_limits() {
    assert_eq!(closed_form_coverage_exponential(0.1, 0.0).unwrap(), 0.0);
    let v = closed_form_coverage_exponential(0.1, 2f64.ln()).unwrap();
    assert!((v - 0.9 / 1.1).abs() < 1e-15);
    assert!((closed_form_coverage_exponential(0.2, 60.0).unwrap() - 0.8).abs() < 1e-15);
    assert_eq!(closed_form_coverage_exponential(0.2, f64::INFINITY).unwrap(), 0.8);
    assert!(closed_form_coverage_exponential(0.2, -1e-9).is_err());
}

#[test]
fn location_monte_carlo_matches_exact_coverage() {
    for (noise, law) in [(Noise::Normal, Pivot::normal()), (Noise::Laplace, Pivot::laplace())] {
        let m = model(Family::Location { noise, sigma: 1.0 }, 0.0);
        let grid = [0.0, 0.8, 1.7, 2.6, 3.5, 6.0];
        let r = estimate_coverage(&m, spec(0.1), &grid, 100_000, 31).unwrap();
        let gap = max_se_gap(&r, |tau| common::exact_location_coverage(law, 0.1, tau));
        assert!(gap <= 4.0, "{noise:?}: {gap} standard errors");
    }
}

#[test]
fn verify_bounds_examples() {
    let sym = model(Family::Location { noise: Noise::Logistic, sigma: 1.0 }, 0.0);
    let r = estimate_coverage(&sym, spec(0.05), &[0.0, 0.5, 1.5, 3.0, 12.0], 50_000, 5).unwrap();
    let v = verify_bounds(&r);
    assert!(v.all_pass(), "{v:?}");
    let deep = r.rows.last().unwrap();
    assert!((deep.estimate - 0.95).abs() <= 3.0 * deep.std_err);

    let c3 = model(Family::ExponentialLocation, 0.0);
    let r = estimate_coverage(&c3, spec(0.05), &[0.0, 0.2, 1.0, 4.0], 50_000, 6).unwrap();
    assert_eq!(r.rows[0].estimate, 0.0);
    assert_eq!(r.bounds.direction, BoundDirection::Ceiling);
    for row in r.interior_rows() {
        assert!(row.estimate <= 0.95 + 3.0 * row.std_err);
    }
    assert!(verify_bounds(&r).all_pass());

    let g = model(Family::GammaScale { shape: 3.0 }, 1.0);
    let r = estimate_coverage(&g, spec(0.05), &[0.0], 100_000, 7).unwrap();
    let row = r.rows[0];
    assert!((row.estimate - 0.979_353).abs() <= 3.0 * row.std_err);
    assert!(verify_bounds(&r).all_pass());

    // a doctored row must be flagged
    let mut bad = r.clone();
    bad.rows[0].estimate = 0.9;
    assert!(!verify_bounds(&bad).all_pass());
}

/// A typical `a₂` for the model: the median over a few simulated data sets.
fn typical_scale(m: &ModelDescriptor) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut v: Vec<f64> = (0..101)
        .map(|_| m.bind(&m.simulate(1.0, &mut rng).unwrap()).unwrap().pair.a2())
        .collect();
    v.sort_by(f64::total_cmp);
    v[50]
}

#[test]
fn coverage_reaches_nominal_far_from_the_boundary() {
    let families = vec![
        (Family::Location { noise: Noise::Normal, sigma: 1.0 }, 0.0),
        (Family::Location { noise: Noise::Laplace, sigma: 2.0 }, 0.0),
        (Family::Location { noise: Noise::Logistic, sigma: 1.0 }, 0.0),
        (Family::Location { noise: Noise::Cauchy, sigma: 1.0 }, 0.0),
        (Family::Location { noise: Noise::Student { df: 3.0 }, sigma: 1.0 }, 0.0),
        (Family::LocationScale { n: 10, sigma: 1.0 }, 0.0),
        (
            Family::MultivariateLocation {
                weights: vec![1.0, 2.0],
                covariance: DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]),
            },
            0.0,
        ),
        (
            Family::MultivariateLocationScale {
                weights: vec![1.0, -1.0],
                df: 6.0,
                sigma: 1.0,
            },
            0.0,
        ),
        (Family::LognormalScale { delta: 0.5 }, 1.0),
        (Family::GammaScale { shape: 3.0 }, 1.0),
        (Family::ScaleRatio { df1: 5.0, df2: 8.0 }, 1.0),
        (Family::ExponentialLocation, 0.0),
        (Family::SphericalConditional { d: 4.0, n: 5, sigma: 1.0 }, 0.0),
    ];
    let mut failures = Vec::new();
    for (i, (family, a)) in families.into_iter().enumerate() {
        let m = model(family, a);
        let law = m.pivot();
        let iqr = law.quantile(0.75).unwrap() - law.quantile(0.25).unwrap();
        let tau = 20.0 * iqr * typical_scale(&m);
        let r = estimate_coverage(&m, spec(0.1), &[tau], 100_000, 900 + i as u64).unwrap();
        let row = r.rows[0];
        if (row.estimate - 0.9).abs() > 3.0 * row.std_err {
            failures.push(format!("{:?} at τ = {tau}: {}", m.family(), row.estimate));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn oracle_reference_intervals() {
    let iv = hpd_oracle(&Pivot::normal(), SufficientPair::new(0.0, 1.0).unwrap(), spec(0.05), 1e-4).unwrap();
    assert_eq!(iv.lower, 0.0);
    assert!((iv.upper - common::PHI_INV_0_975).abs() < 5e-4);
    assert_eq!(iv.branch, Branch::BoundaryTouching);

    let iv = hpd_oracle(&Pivot::neg_exponential(), SufficientPair::new(1.0, 1.0).unwrap(), spec(0.1), 1e-4).unwrap();
    assert!((iv.lower - (0.9 + 0.1 * 1f64.exp()).ln()).abs() < 5e-4);
    assert!((iv.upper - 1.0).abs() < 5e-4);

    for step in [0.0, -1.0, f64::NAN] {
        assert!(hpd_oracle(&Pivot::normal(), SufficientPair::new(0.0, 1.0).unwrap(), spec(0.05), step).is_err());
    }
}

#[test]
fn analytic_intervals_agree_with_oracle() {
    let laws = [
        Pivot::normal(),
        Pivot::student(3.0).unwrap(),
        Pivot::laplace(),
        Pivot::logistic(),
        Pivot::cauchy(),
        Pivot::exponential(),
        Pivot::neg_exponential(),
        Pivot::log_gamma(3.0).unwrap(),
        Pivot::log_gamma(0.5).unwrap(),
        Pivot::log_fisher(4.0, 10.0).unwrap(),
    ];
    let step = 2e-3;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for law in laws {
        let hpd = Hpd::new(law, spec(0.1)).unwrap();
        for _ in 0..6 {
            let a2 = rand::Rng::random_range(&mut rng, 0.3..2.0);
            let s = law.support();
            let lo = if s.lo.is_finite() || s.hi.is_finite() { 0.05 } else { -1.0 };
            let t: f64 = rand::Rng::random_range(&mut rng, lo..5.0);
            let p = SufficientPair::new(t * a2, a2).unwrap();
            let a = hpd.interval(p).unwrap();
            let o = hpd_oracle(&law, p, spec(0.1), step).unwrap();
            assert!(
                common::agrees_with_oracle(&law, p, &a, &o, 5.0 * step),
                "{} at {p:?}: {a:?} vs {o:?}",
                law.name()
            );
        }
    }
}
