use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    #[serde(rename = "value_estimate")]
    pub estimate: f64,
    #[serde(rename = "value_stderr")]
    pub std_error: f64,
    pub samples: u64,
    pub hits: u64,
}

impl McEstimate {
    /// Whether `value` lies within `k` standard errors (inclusive).
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.std_error
    }
}

/// Hit-ratio volume estimate of `{x in box : inside(x)}`.
///
/// Samples are drawn in fixed-size chunks, each from its own ChaCha stream, so
/// the result depends only on `seed` and not on the thread count.
pub fn monte_carlo_volume<F>(inside: F, lo: &[f64], hi: &[f64], samples: u64, seed: u64) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    if samples == 0 {
        return Err(Error::invalid("at least one sample required"));
    }
    if lo.len() != hi.len() {
        return Err(Error::DimensionMismatch {
            expected: lo.len(),
            got: hi.len(),
        });
    }
    if lo.iter().zip(hi).any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
        return Err(Error::invalid("bounding box must satisfy lo <= hi with finite bounds"));
    }
    let d = lo.len();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![0.0; d];
            let mut h = 0;
            for _ in 0..n {
                for j in 0..d {
                    x[j] = lo[j] + (hi[j] - lo[j]) * rng.gen::<f64>();
                }
                if inside(&x) {
                    h += 1;
                }
            }
            h
        })
        .sum();
    let boxvol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: boxvol * p,
        std_error: boxvol * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_box_and_slab() {
        let full = monte_carlo_volume(|_| true, &[0.0, 0.0], &[1.0, 2.0], 1000, 1).unwrap();
        assert_eq!((full.estimate, full.std_error), (2.0, 0.0));
        let slab = monte_carlo_volume(|x| x[0] <= 0.5, &[0.0, 0.0], &[1.0, 1.0], 100_000, 7).unwrap();
        assert!(slab.within(0.5, 5.0), "{slab:?}");
    }

    #[test]
    fn parabola_region() {
        // between the chord y = x and the parabola y = x^2 on [0, 1]
        let est = monte_carlo_volume(|x| x[0] * x[0] <= x[1] && x[1] <= x[0], &[0.0, 0.0], &[1.0, 1.0], 100_000, 3)
            .unwrap();
        assert!(est.within(1.0 / 6.0, 5.0), "{est:?}");
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let f = |x: &[f64]| x[0] + x[1] <= 1.0;
        let a = monte_carlo_volume(f, &[0.0, 0.0], &[1.0, 1.0], 10_000, 42).unwrap();
        let b = monte_carlo_volume(f, &[0.0, 0.0], &[1.0, 1.0], 10_000, 42).unwrap();
        assert_eq!(a, b);
        assert!(monte_carlo_volume(f, &[0.0], &[1.0], 0, 1).is_err());
    }
}
