//! Counter-based random streams.
//!
//! A draw is a pure function of `(seed, stream, counter)`: Philox4x32-10
//! keyed by the seed, with the stream id and draw counter forming the
//! 128-bit counter block. Particles get one stream each.

use rand_core::{impls, Error as RandError, RngCore};
use rand_distr::{Distribution, StandardNormal};

const M0: u32 = 0xD251_1F53;
const M1: u32 = 0xCD9E_8D57;
const W0: u32 = 0x9E37_79B9;
const W1: u32 = 0xBB67_AE85;

#[inline(always)]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = (a as u64) * (b as u64);
    ((p >> 32) as u32, p as u32)
}

/// Philox4x32 with 10 rounds.
#[inline]
pub fn philox4x32(ctr: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut c = ctr;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(W0);
            k[1] = k[1].wrapping_add(W1);
        }
        let (hi0, lo0) = mulhilo(M0, c[0]);
        let (hi1, lo1) = mulhilo(M1, c[2]);
        c = [hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0];
    }
    c
}

/// Source of the two primitive draws the steppers need.
///
/// Tests implement this with scripted values.
pub trait Draws {
    /// E ~ Exp(1).
    fn standard_exponential(&mut self) -> f64;
    /// z ~ N(0, 1).
    fn standard_normal(&mut self) -> f64;
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    counter: u64,
    block: [u32; 4],
    block_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut s = RngStream { seed, stream, counter: 0, block: [0; 4], block_index: u64::MAX };
        s.refill(0);
        s
    }

    /// Stream positioned at an arbitrary draw index.
    pub fn at(seed: u64, stream: u64, counter: u64) -> Self {
        let mut s = Self::new(seed, stream);
        s.counter = counter;
        s
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of 64-bit words drawn so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    fn refill(&mut self, index: u64) {
        let ctr = [index as u32, (index >> 32) as u32, self.stream as u32, (self.stream >> 32) as u32];
        let key = [self.seed as u32, (self.seed >> 32) as u32];
        self.block = philox4x32(ctr, key);
        self.block_index = index;
    }

    /// Uniform on (0, 1], 53 bits. Never returns 0.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u64(&mut self) -> u64 {
        let index = self.counter >> 1;
        if index != self.block_index {
            self.refill(index);
        }
        let lane = (self.counter & 1) as usize * 2;
        self.counter += 1;
        (self.block[lane] as u64) | ((self.block[lane + 1] as u64) << 32)
    }

    fn next_u32(&mut self) -> u32 {
        self.next_u64() as u32
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        impls::fill_bytes_via_next(self, dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), RandError> {
        self.fill_bytes(dest);
        Ok(())
    }
}

impl Draws for RngStream {
    #[inline]
    fn standard_exponential(&mut self) -> f64 {
        -libm::log(self.uniform_open0())
    }

    #[inline]
    fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(self)
    }
}

impl<D: Draws + ?Sized> Draws for &mut D {
    fn standard_exponential(&mut self) -> f64 {
        (**self).standard_exponential()
    }
    fn standard_normal(&mut self) -> f64 {
        (**self).standard_normal()
    }
}
