//! Mixed-radix coding of digit vectors, least significant digit first.

/// Any ring admitted by the default guard has at most 2^16 elements, so a
/// vector of radices >= 2 never needs more than this many digits.
pub const MAX_DIGITS: usize = 16;

pub type Digits = [u32; MAX_DIGITS];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedRadix {
    radices: Vec<u32>,
    weights: Vec<u32>,
    total: u64,
}

impl MixedRadix {
    pub fn new(radices: Vec<u32>) -> Self {
        assert!(radices.len() <= MAX_DIGITS, "too many digits");
        let mut weights = Vec::with_capacity(radices.len());
        let mut w: u64 = 1;
        for &r in &radices {
            weights.push(w as u32);
            w *= r as u64;
        }
        MixedRadix {
            radices,
            weights,
            total: w,
        }
    }

    pub fn uniform(radix: u32, len: usize) -> Self {
        MixedRadix::new(vec![radix; len])
    }

    pub fn len(&self) -> usize {
        self.radices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radices.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn radix(&self, i: usize) -> u32 {
        self.radices[i]
    }

    #[inline]
    pub fn decode(&self, mut code: u32) -> Digits {
        let mut d = [0; MAX_DIGITS];
        for (slot, &r) in d.iter_mut().zip(&self.radices) {
            *slot = code % r;
            code /= r;
        }
        d
    }

    #[inline]
    pub fn encode(&self, digits: &Digits) -> u32 {
        digits
            .iter()
            .zip(&self.weights)
            .map(|(&d, &w)| d * w)
            .sum()
    }

    #[inline]
    pub fn digit(&self, code: u32, i: usize) -> u32 {
        (code / self.weights[i]) % self.radices[i]
    }
}
