//! SplitMix64, the generator behind every sampler draw.
//!
//! The stream is fixed: state advances by the golden-ratio increment
//! `0x9E37_79B9_7F4A_7C15` and each output is the state passed through the
//! standard xor-shift-multiply finalizer. Floats take the top 53 bits.

use num_complex::Complex64 as Complex;
use std::f64::consts::TAU;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform angle in [0, 2pi).
    pub fn angle(&mut self) -> f64 {
        TAU * self.next_f64()
    }

    pub fn unimodular(&mut self) -> Complex {
        Complex::from_polar(1.0, self.angle())
    }

    /// Uniform (by area) point of the disk |z| <= radius.
    pub fn disk_point(&mut self, radius: f64) -> Complex {
        let r = radius * self.next_f64().sqrt();
        Complex::from_polar(r, self.angle())
    }
}
