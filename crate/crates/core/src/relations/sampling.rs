//! Seeded per-sample parameter draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generators::{expected_shape, ParamShape, RootParam};
use crate::matrixcore::{GroupSpec, C64};
use crate::rootsystem::RootLabel;
use crate::Result;

/// SplitMix64 finalizer applied to `seed ^ golden·(i+1)`.
pub fn sub_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(i.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, i: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(sub_seed(seed, i)) }
    }

    /// Uniform on `[−2, 2]`.
    pub fn real(&mut self) -> f64 {
        self.rng.gen_range(-2.0..=2.0)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen()
    }

    /// Modulus in `[0.25, 2]` with a random sign.
    pub fn unit_real(&mut self) -> f64 {
        let r = self.rng.gen_range(0.25..=2.0);
        if self.coin() {
            r
        } else {
            -r
        }
    }

    pub fn cx(&mut self) -> C64 {
        C64::new(self.real(), self.real())
    }

    /// Modulus in `[0.25, 2]`, uniform argument.
    pub fn unit_cx(&mut self) -> C64 {
        let r = self.rng.gen_range(0.25..=2.0);
        C64::from_polar(r, self.angle())
    }

    pub fn angle(&mut self) -> f64 {
        self.rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
    }

    pub fn phase(&mut self) -> C64 {
        C64::from_polar(1.0, self.angle())
    }

    /// Uniform point on `S^{k−1}` by rejection from the cube.
    pub fn sphere(&mut self, k: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..k).map(|_| self.rng.gen_range(-1.0..=1.0)).collect();
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (0.1..=1.0).contains(&r) {
                return v.into_iter().map(|x| x / r).collect();
            }
        }
    }

    /// Uniform point on the unit sphere of `ℂ^k`.
    pub fn sphere_c(&mut self, k: usize) -> Vec<C64> {
        let v = self.sphere(2 * k);
        (0..k).map(|l| C64::new(v[2 * l], v[2 * l + 1])).collect()
    }

    /// Arbitrary parameter of the right shape.
    pub fn param(&mut self, spec: &GroupSpec, root: &RootLabel) -> Result<RootParam> {
        Ok(match expected_shape(spec, root)? {
            ParamShape::Scalar => RootParam::Scalar(self.real()),
            ParamShape::Cx => RootParam::Cx(self.cx()),
            ParamShape::RVec(k) => RootParam::RVec((0..k).map(|_| self.real()).collect()),
            ParamShape::Heis(k) => RootParam::Heis { t: self.real(), a: (0..k).map(|_| self.cx()).collect() },
        })
    }

    /// Parameter bounded away from zero, suitable for chain elements.
    pub fn nonzero_param(&mut self, spec: &GroupSpec, root: &RootLabel) -> Result<RootParam> {
        Ok(match expected_shape(spec, root)? {
            ParamShape::Scalar => RootParam::Scalar(self.unit_real()),
            ParamShape::Cx => RootParam::Cx(self.unit_cx()),
            ParamShape::RVec(k) => {
                let r = self.uniform(0.25, 2.0);
                RootParam::RVec(self.sphere(k).into_iter().map(|x| r * x).collect())
            }
            ParamShape::Heis(k) => {
                let r = self.uniform(0.0, 2.0);
                let a = self.sphere_c(k).into_iter().map(|z| z * r).collect();
                RootParam::Heis { t: self.unit_real(), a }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_seeds_differ_and_repeat() {
        assert_ne!(sub_seed(42, 0), sub_seed(42, 1));
        assert_eq!(sub_seed(7, 3), sub_seed(7, 3));
        let mut a = Sampler::new(1, 5);
        let mut b = Sampler::new(1, 5);
        assert_eq!(a.real(), b.real());
    }

    #[test]
    fn draws_respect_ranges() {
        let mut s = Sampler::new(0, 0);
        for _ in 0..200 {
            let x = s.unit_real().abs();
            assert!((0.25..=2.0).contains(&x));
            let z = s.unit_cx().norm();
            assert!((0.25 - 1e-12..=2.0 + 1e-12).contains(&z));
            let v = s.sphere_c(3);
            let r: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }
}
