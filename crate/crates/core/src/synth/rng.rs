//! Counter-based deterministic random values.

use crate::math;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random stream for one sampled point, keyed on
/// `(seed, object id, primitive index, point index)`.
#[derive(Debug, Clone, Copy)]
pub struct PointRng {
    base: u64,
    counter: u64,
}

impl PointRng {
    pub fn new(seed: u64, object: u64, primitive: u64, point: u64) -> PointRng {
        let mut base = mix64(seed);
        base = mix64(base ^ object.wrapping_mul(GOLDEN));
        base = mix64(base ^ primitive.wrapping_mul(GOLDEN));
        base = mix64(base ^ point.wrapping_mul(GOLDEN));
        PointRng { base, counter: 0 }
    }

    fn next_u64(&mut self) -> u64 {
        let v = mix64(self.base ^ mix64(self.counter));
        self.counter += 1;
        v
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Zero-mean Gaussian via Box-Muller.
    pub fn gauss(&mut self, sigma: f64) -> f64 {
        if sigma == 0.0 {
            return 0.0;
        }
        let u1 = self.uniform().max(1e-300);
        let u2 = self.uniform();
        sigma * math::sqrt(-2.0 * math::log(u1)) * math::cos(core::f64::consts::TAU * u2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = PointRng::new(42, 7, 1, 99);
        let mut b = PointRng::new(42, 7, 1, 99);
        for _ in 0..16 {
            assert_eq!(a.uniform(), b.uniform());
        }
    }

    #[test]
    fn different_keys_give_different_streams() {
        let mut a = PointRng::new(42, 7, 1, 99);
        let mut b = PointRng::new(42, 7, 1, 100);
        assert_ne!(a.uniform(), b.uniform());
    }

    #[test]
    fn uniform_stays_in_range_and_fills_it() {
        let mut lo = 1.0f64;
        let mut hi = 0.0f64;
        for p in 0..1000 {
            let mut rng = PointRng::new(1, 2, 3, p);
            let v = rng.uniform();
            assert!((0.0..1.0).contains(&v));
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!(lo < 0.02 && hi > 0.98);
    }

    #[test]
    fn gauss_has_roughly_the_right_spread() {
        let mut sum = 0.0;
        let mut sq = 0.0;
        let n = 4000;
        for p in 0..n {
            let mut rng = PointRng::new(5, 0, 0, p);
            let v = rng.gauss(0.02);
            sum += v;
            sq += v * v;
        }
        let mean = sum / n as f64;
        let sd = (sq / n as f64 - mean * mean).sqrt();
        assert!(mean.abs() < 0.002);
        assert!((sd - 0.02).abs() < 0.002);
    }
}
