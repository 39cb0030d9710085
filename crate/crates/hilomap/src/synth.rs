//! Synthetic weight generation over a base set of locations.
//!
//! Splits the locations into thirds by file position and draws weights from
//! three normal distributions: the first third low (mean 0.1), the second
//! third high (mean 0.9), and the rest neutral (mean 0.5), all with variance
//! 0.03 (standard deviation `sqrt(0.03)`). Draws are clamped into `[0, 1]`.
//!
//! Randomness comes from a ChaCha8 stream cipher, one draw per location in
//! file order, so a given seed always produces the same weights.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::types::{PointSet, WeightedPoint};

/// Parameters of the generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub seed: u64,
    /// Group means in generation order: low, high, neutral.
    pub means: [f64; 3],
    /// Shared variance of the three distributions.
    pub variance: f64,
}

impl SyntheticSpec {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            means: [0.1, 0.9, 0.5],
            variance: 0.03,
        }
    }
}

/// Sizes of the three position groups: `floor(k / 3)` each, remainder
/// appended to the last (neutral) group.
pub fn group_sizes(count: usize) -> [usize; 3] {
    let third = count / 3;
    [third, third, count - 2 * third]
}

/// Draw a weight for every location and return the weighted set in input
/// order.
pub fn generate_synthetic(locations: &[(f64, f64)], spec: &SyntheticSpec) -> Result<PointSet> {
    if locations.is_empty() {
        return Err(Error::Ingest("synthetic generation needs a non-empty base file".into()));
    }
    let sigma = spec.variance.sqrt();
    let distributions: Vec<Normal<f64>> = spec
        .means
        .iter()
        .map(|&mean| {
            Normal::new(mean, sigma)
                .map_err(|e| Error::Config(format!("bad synthetic distribution: {e}")))
        })
        .collect::<Result<_>>()?;

    let sizes = group_sizes(locations.len());
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points = Vec::with_capacity(locations.len());
    let mut index = 0;
    for (group, &size) in sizes.iter().enumerate() {
        for _ in 0..size {
            let (lon, lat) = locations[index];
            let weight = distributions[group].sample(&mut rng).clamp(0.0, 1.0);
            points.push(WeightedPoint::new(lon, lat, weight));
            index += 1;
        }
    }
    Ok(PointSet::new(points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn locations(n: usize) -> Vec<(f64, f64)> {
        (0..n).map(|i| (i as f64 * 0.001, i as f64 * 0.0005)).collect()
    }

    #[test]
    fn three_points_one_per_group() {
        let set = generate_synthetic(&locations(3), &SyntheticSpec::new(7)).unwrap();
        assert_eq!(set.len(), 3);
        let w: Vec<f64> = set.iter().map(|p| p.weight).collect();
        // group membership shows in distance to each mean
        assert!((w[0] - 0.1).abs() < 0.8);
        assert!(w.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn group_split_of_3387_is_even() {
        assert_eq!(group_sizes(3387), [1129, 1129, 1129]);
        assert_eq!(group_sizes(3), [1, 1, 1]);
    }

    #[test]
    fn remainder_goes_to_the_neutral_group() {
        assert_eq!(group_sizes(10), [3, 3, 4]);
        assert_eq!(group_sizes(2), [0, 0, 2]);
    }

    #[test]
    fn empty_base_is_an_error() {
        assert!(generate_synthetic(&[], &SyntheticSpec::new(1)).is_err());
    }

    #[test]
    fn same_seed_is_identical() {
        let a = generate_synthetic(&locations(100), &SyntheticSpec::new(42)).unwrap();
        let b = generate_synthetic(&locations(100), &SyntheticSpec::new(42)).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic(&locations(100), &SyntheticSpec::new(43)).unwrap();
        assert_ne!(a, c);
    }

    /// Expected value of a normal draw clamped into [0, 1], by Simpson
    /// quadrature; independent of the sampling path.
    fn clamped_normal_mean(mean: f64, sigma: f64) -> f64 {
        let lo = mean - 10.0 * sigma;
        let hi = mean + 10.0 * sigma;
        let n = 200_000usize; // even
        let h = (hi - lo) / n as f64;
        let density = |x: f64| {
            (-(x - mean) * (x - mean) / (2.0 * sigma * sigma)).exp()
                / (sigma * (2.0 * std::f64::consts::PI).sqrt())
        };
        let f = |x: f64| x.clamp(0.0, 1.0) * density(x);
        let mut acc = f(lo) + f(hi);
        for i in 1..n {
            let x = lo + i as f64 * h;
            acc += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn low_group_sample_mean_matches_quadrature() {
        // 30k locations puts 10k draws in the low group
        let set = generate_synthetic(&locations(30_000), &SyntheticSpec::new(1234)).unwrap();
        let low: Vec<f64> = set.iter().take(10_000).map(|p| p.weight).collect();
        let sample_mean = low.iter().sum::<f64>() / low.len() as f64;
        let expected = clamped_normal_mean(0.1, 0.03f64.sqrt());
        assert!(
            (sample_mean - expected).abs() < 0.01,
            "sample {sample_mean} vs quadrature {expected}"
        );
    }

    #[test]
    fn high_group_lands_high() {
        let set = generate_synthetic(&locations(3000), &SyntheticSpec::new(9)).unwrap();
        let high: Vec<f64> = set.iter().skip(1000).take(1000).map(|p| p.weight).collect();
        let mean = high.iter().sum::<f64>() / high.len() as f64;
        let expected = clamped_normal_mean(0.9, 0.03f64.sqrt());
        assert!((mean - expected).abs() < 0.02, "{mean} vs {expected}");
    }
}
