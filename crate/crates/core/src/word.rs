//! Fixed-width data words.

use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;

use crate::device::BitState;
use crate::error::{Error, Result};

pub const MAX_WIDTH: usize = 512;

/// An ordered sequence of logical bits. Bit '0' maps to the parallel MTJ
/// state, '1' to anti-parallel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    bits: Vec<bool>,
}

impl Word {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_WIDTH {
            return Err(Error::Domain(alloc::format!(
                "word width must be in [1, {MAX_WIDTH}], got {}",
                bits.len()
            )));
        }
        Ok(Word { bits })
    }

    pub fn zero(width: usize) -> Result<Self> {
        Word::new(alloc::vec![false; width])
    }

    /// Parse a binary string such as "0110".
    pub fn from_binary(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Domain(alloc::format!(
                    "invalid binary digit '{other}'"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Word::new(bits)
    }

    /// Parse a hex string into `width` bits (most significant first).
    pub fn from_hex(s: &str, width: usize) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::Domain(alloc::format!(
                "word width must be in [1, {MAX_WIDTH}], got {width}"
            )));
        }
        let mut bits = Vec::with_capacity(s.len() * 4);
        for c in s.chars() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Domain(alloc::format!("invalid hex digit '{c}'")))?;
            for i in (0..4).rev() {
                bits.push(nibble >> i & 1 == 1);
            }
        }
        if bits.len() < width {
            return Err(Error::Domain(alloc::format!(
                "hex string '{s}' has only {} bits, need {width}",
                bits.len()
            )));
        }
        // Keep the least significant `width` bits.
        let bits = bits.split_off(bits.len() - width);
        Word::new(bits)
    }

    /// Uniform random word of the given width.
    pub fn random<R: Rng>(width: usize, rng: &mut R) -> Result<Self> {
        let bits = (0..width).map(|_| rng.gen::<bool>()).collect();
        Word::new(bits)
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn state(&self, i: usize) -> BitState {
        BitState::from_bit(self.bits[i])
    }

    /// Number of '1' bits.
    pub fn hamming_weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Append extra bits, returning a wider word.
    pub fn append(&self, extra: &[bool]) -> Result<Word> {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(extra);
        Word::new(bits)
    }

    /// Drop the last `n` bits.
    pub fn truncate(&self, n: usize) -> Result<Word> {
        if n >= self.bits.len() {
            return Err(Error::Domain(alloc::format!(
                "cannot drop {n} bits from a {}-bit word",
                self.bits.len()
            )));
        }
        Word::new(self.bits[..self.bits.len() - n].to_vec())
    }

    /// Canonical binary rendering, e.g. "0110".
    pub fn to_binary(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}
