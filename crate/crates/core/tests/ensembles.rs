use ftw_core::edge::DimensionTriple;
use ftw_core::ensembles::{
    apply_sigma, apply_sigma_half, rank_one_theta, sample_matrix, spike_r, EntryDistribution,
    EntrySampler, Seed, SigmaConvention, SpikeSpec,
};
use ftw_core::error::Error;
use proptest::prelude::*;

const DRAWS: usize = 1_000_000;

fn draws(dist: EntryDistribution, base: u64) -> Vec<f64> {
    let mut s = EntrySampler::new(Seed::new(base, 0));
    (0..DRAWS).map(|_| s.draw(dist)).collect()
}

fn moments(v: &[f64]) -> (f64, f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = v.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    (mean, var, m4 / (var * var))
}

#[test]
fn golden_first_draws() {
    let mut s = EntrySampler::new(Seed::new(0, 0));
    let got: Vec<f64> = (0..8).map(|_| s.draw(EntryDistribution::Gaussian)).collect();
    let want = [
        0.5506856713610156,
        -0.08552572533438536,
        0.5219379785895267,
        -1.553338314788307,
        1.1705528370703355,
        0.1244771865197598,
        0.9501598269990661,
        1.5174742343356946,
    ];
    assert_eq!(got, want);
    let mut s = EntrySampler::new(Seed::new(42, 7));
    let got: Vec<f64> = (0..8).map(|_| s.next_open01()).collect();
    let want = [
        0.12850645375669295,
        0.326330706809797,
        0.6154445092677152,
        0.4938312383286732,
        0.39266083222098186,
        0.2202419755006309,
        0.22566668021973263,
        0.2514980164202298,
    ];
    assert_eq!(got, want);
}

#[test]
fn standardized_moments() {
    for (k, dist) in EntryDistribution::ALL.into_iter().enumerate() {
        let (mean, var, _) = moments(&draws(dist, 10 + k as u64));
        assert!(mean.abs() <= 0.005, "{dist}: mean {mean}");
        assert!((var - 1.0).abs() <= 0.01, "{dist}: var {var}");
    }
}

#[test]
fn gaussian_kurtosis() {
    let (_, _, kurt) = moments(&draws(EntryDistribution::Gaussian, 5));
    assert!((kurt - 3.0).abs() <= 0.05, "kurtosis {kurt}");
}

#[test]
fn three_point_frequencies() {
    let v = draws(EntryDistribution::ThreePoint, 6);
    let sqrt3 = 3f64.sqrt();
    let freq = |x: f64| v.iter().filter(|&&y| y == x).count() as f64 / DRAWS as f64;
    assert!((freq(sqrt3) - 1.0 / 6.0).abs() <= 0.002);
    assert!((freq(-sqrt3) - 1.0 / 6.0).abs() <= 0.002);
    assert!((freq(0.0) - 2.0 / 3.0).abs() <= 0.002);
}

#[test]
fn uniform_support() {
    let sqrt3 = 3f64.sqrt();
    assert!(draws(EntryDistribution::Uniform, 7).iter().all(|x| x.abs() <= sqrt3));
}

#[test]
fn matrix_is_row_major_keystream() {
    let m = sample_matrix(EntryDistribution::Uniform, 3, 4, Seed::new(8, 2)).unwrap();
    let mut s = EntrySampler::new(Seed::new(8, 2));
    let v: Vec<f64> = (0..12).map(|_| s.draw(EntryDistribution::Uniform)).collect();
    assert_eq!(m.as_slice(), &v[..]);
    assert!(sample_matrix(EntryDistribution::Uniform, 0, 4, Seed::new(8, 2)).is_err());
}

#[test]
fn deterministic_across_threads() {
    let seq: Vec<_> = (0..8)
        .map(|k| sample_matrix(EntryDistribution::Gaussian, 5, 7, Seed::new(3, k)).unwrap())
        .collect();
    let par: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..8)
            .map(|k| s.spawn(move || sample_matrix(EntryDistribution::Gaussian, 5, 7, Seed::new(3, k)).unwrap()))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(seq, par);
}

#[test]
fn rank_one_scales_first_row() {
    let t = DimensionTriple::new(5, 40, 10).unwrap();
    // independent evaluation of r and the spike size
    let (p, m, n) = (5.0f64, 40.0f64, 10.0f64);
    let r = (p / m + p / n - p * p / (m * n)).sqrt();
    let theta = 2.0 * (r - p / m) / (1.0 - p / m);
    assert!((spike_r(&t) - r).abs() < 1e-15);
    assert!((rank_one_theta(2.0, &t).unwrap() - theta).abs() < 1e-15);
    let x = sample_matrix(EntryDistribution::Gaussian, 5, 10, Seed::new(1, 1)).unwrap();
    let y = apply_sigma_half(&x, &SpikeSpec::RankOne { tau: 2.0 }, &t).unwrap();
    for j in 0..10 {
        assert!((y[(0, j)] - (1.0 + theta).sqrt() * x[(0, j)]).abs() < 1e-15);
        for i in 1..5 {
            assert_eq!(y[(i, j)], x[(i, j)]);
        }
    }
}

#[test]
fn spike_errors() {
    let t = DimensionTriple::new(30, 20, 25).unwrap();
    assert!(matches!(
        SpikeSpec::RankOne { tau: 1.0 }.validate(&t),
        Err(Error::SpikeInvalidForTriple(_))
    ));
    let x = sample_matrix(EntryDistribution::Gaussian, 4, 3, Seed::new(1, 1)).unwrap();
    let t = DimensionTriple::new(5, 40, 10).unwrap();
    assert!(matches!(
        apply_sigma_half(&x, &SpikeSpec::Identity, &t),
        Err(Error::DimensionMismatch(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn half_twice_is_full(p in 1usize..12, extra in 1usize..20, n in 1usize..10,
                          tau in 0.0f64..8.0, omega in 0.05f64..20.0, seed in 0u64..1000) {
        let t = DimensionTriple::new(p, p + extra, n).unwrap();
        let x = sample_matrix(EntryDistribution::Gaussian, p, n, Seed::new(seed, 0)).unwrap();
        for spike in [SpikeSpec::RankOne { tau }, SpikeSpec::Alternating { omega }] {
            let twice = apply_sigma_half(&apply_sigma_half(&x, &spike, &t).unwrap(), &spike, &t).unwrap();
            let full = apply_sigma(&x, &spike, &t, SigmaConvention::Full).unwrap();
            prop_assert!(twice.sub(&full).frobenius() <= 1e-10 * (1.0 + full.frobenius()));
        }
    }

    #[test]
    fn alternating_pattern(p in 1usize..15, omega in 0.05f64..20.0) {
        let t = DimensionTriple::new(p, p, 1).unwrap();
        let d = SpikeSpec::Alternating { omega }.sigma_diagonal(&t).unwrap();
        for (i, v) in d.iter().enumerate() {
            prop_assert_eq!(*v, if i % 2 == 1 { omega } else { 1.0 });
        }
    }

    #[test]
    fn spike_strings_round_trip(tau in -5.0f64..5.0, omega in 0.01f64..9.0) {
        for s in [SpikeSpec::RankOne { tau }, SpikeSpec::Alternating { omega }] {
            prop_assert_eq!(s.to_string().parse::<SpikeSpec>().unwrap(), s);
        }
    }
}
