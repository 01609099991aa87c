use std::ops::Index;

/// Maps a code bit to its bipolar symbol: 1 → +1, 0 → −1.
#[inline]
pub fn bipolar(bit: u8) -> f64 {
    if bit != 0 {
        1.0
    } else {
        -1.0
    }
}

/// Direction of a saturated LLR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn infinity(self) -> f64 {
        match self {
            Sign::Minus => f64::NEG_INFINITY,
            Sign::Plus => f64::INFINITY,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }
}

/// Signed log-likelihood ratios `log(Pr(·|+1) / Pr(·|−1))`.
///
/// Positive values favour bipolar +1, i.e. code bit 1. Entries are finite
/// unless explicitly saturated with [`LlrVector::saturate`], in which case
/// they hold `±∞`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LlrVector {
    values: Vec<f64>,
}

impl LlrVector {
    pub fn zeros(n: usize) -> Self {
        LlrVector {
            values: vec![0.0; n],
        }
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        LlrVector { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    /// Pins position `i` to `±∞` and returns the value it held before.
    pub fn saturate(&mut self, i: usize, sign: Sign) -> f64 {
        std::mem::replace(&mut self.values[i], sign.infinity())
    }

    /// Puts back a value previously returned by [`LlrVector::saturate`].
    pub fn restore(&mut self, i: usize, value: f64) {
        self.values[i] = value;
    }

    pub fn is_saturated(&self, i: usize) -> bool {
        self.values[i].is_infinite()
    }

    pub fn saturated_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_saturated(i)).collect()
    }

    /// Hard decisions: bit 1 where the LLR is strictly positive.
    pub fn hard_bits(&self) -> Vec<u8> {
        self.values.iter().map(|&v| u8::from(v > 0.0)).collect()
    }

    pub fn negated(&self) -> Self {
        LlrVector {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }
}

impl Index<usize> for LlrVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl From<Vec<f64>> for LlrVector {
    fn from(values: Vec<f64>) -> Self {
        LlrVector { values }
    }
}
