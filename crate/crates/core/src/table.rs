//! Functions `{0,1}^n -> Z3` stored as bit-sliced 64-bit words.
//!
//! Each word holds 64 consecutive inputs as two masks: `ones` marks entries
//! equal to 1 and `twos` entries equal to 2. Input `x` reads `x1` from its
//! least significant bit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{check_dims, Error, Result};
use crate::forms::{valid_mask, word_count, MAX_VARS};

/// 64 entries of a Z3-valued table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Z3Word {
    pub ones: u64,
    pub twos: u64,
}

impl Z3Word {
    pub const ZERO: Z3Word = Z3Word { ones: 0, twos: 0 };

    /// The character `2^q` of a form with truth-table bits `t`.
    #[inline]
    pub fn character(t: u64, valid: u64) -> Z3Word {
        Z3Word {
            ones: !t & valid,
            twos: t & valid,
        }
    }

    #[inline]
    pub fn support(self) -> u32 {
        (self.ones | self.twos).count_ones()
    }
}

impl Add for Z3Word {
    type Output = Z3Word;

    #[inline]
    fn add(self, o: Z3Word) -> Z3Word {
        let zs = !(self.ones | self.twos);
        let zo = !(o.ones | o.twos);
        Z3Word {
            ones: (zs & o.ones) | (self.ones & zo) | (self.twos & o.twos),
            twos: (zs & o.twos) | (self.twos & zo) | (self.ones & o.ones),
        }
    }
}

impl Neg for Z3Word {
    type Output = Z3Word;

    #[inline]
    fn neg(self) -> Z3Word {
        Z3Word {
            ones: self.twos,
            twos: self.ones,
        }
    }
}

impl Sub for Z3Word {
    type Output = Z3Word;

    #[inline]
    fn sub(self, o: Z3Word) -> Z3Word {
        self + -o
    }
}

impl Mul for Z3Word {
    type Output = Z3Word;

    #[inline]
    fn mul(self, o: Z3Word) -> Z3Word {
        Z3Word {
            ones: (self.ones & o.ones) | (self.twos & o.twos),
            twos: (self.ones & o.twos) | (self.twos & o.ones),
        }
    }
}

/// Value table of a function `(Z2)^n -> Z3`, length `2^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    n: usize,
    words: Vec<Z3Word>,
}

impl FunctionTable {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            words: vec![Z3Word::ZERO; word_count(n)],
        }
    }

    pub fn constant(n: usize, value: u8) -> Self {
        let v = valid_mask(n);
        let w = match value % 3 {
            0 => Z3Word::ZERO,
            1 => Z3Word { ones: v, twos: 0 },
            _ => Z3Word { ones: 0, twos: v },
        };
        Self {
            n,
            words: vec![w; word_count(n)],
        }
    }

    pub fn from_words(n: usize, words: Vec<Z3Word>) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::OutOfRange(format!("variable count {n}")));
        }
        if words.len() != word_count(n) {
            return Err(Error::InputShape(format!(
                "{} words for n = {n}",
                words.len()
            )));
        }
        let v = valid_mask(n);
        if words
            .iter()
            .any(|w| w.ones & w.twos != 0 || (w.ones | w.twos) & !v != 0)
        {
            return Err(Error::InputShape("overlapping or out-of-range bits".into()));
        }
        Ok(Self { n, words })
    }

    pub fn from_values(n: usize, values: &[u8]) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::OutOfRange(format!("variable count {n}")));
        }
        if values.len() != 1 << n {
            return Err(Error::InputShape(format!(
                "{} values for n = {n} (expected {})",
                values.len(),
                1usize << n
            )));
        }
        let mut t = Self::zeros(n);
        for (x, &v) in values.iter().enumerate() {
            if v > 2 {
                return Err(Error::InputShape(format!("value {v} not in Z3")));
            }
            t.set(x, v);
        }
        Ok(t)
    }

    /// Parses a string of `2^n` characters over `{0,1,2}`; `n` is inferred.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let len = s.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Parse(format!(
                "table length {len} is not 2^n with n >= 1"
            )));
        }
        let values = s
            .bytes()
            .map(|b| match b {
                b'0'..=b'2' => Ok(b - b'0'),
                _ => Err(Error::Parse(format!("invalid table digit {:?}", b as char))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_values(len.trailing_zeros() as usize, &values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[Z3Word] {
        &self.words
    }

    pub fn get(&self, x: usize) -> u8 {
        let w = self.words[x >> 6];
        let b = x & 63;
        if w.ones >> b & 1 == 1 {
            1
        } else if w.twos >> b & 1 == 1 {
            2
        } else {
            0
        }
    }

    pub fn set(&mut self, x: usize, v: u8) {
        let w = &mut self.words[x >> 6];
        let bit = 1u64 << (x & 63);
        w.ones &= !bit;
        w.twos &= !bit;
        match v % 3 {
            1 => w.ones |= bit,
            2 => w.twos |= bit,
            _ => {}
        }
    }

    pub fn values(&self) -> Vec<u8> {
        (0..self.len()).map(|x| self.get(x)).collect()
    }

    pub fn add(&self, other: &FunctionTable) -> Result<FunctionTable> {
        check_dims(self.n, other.n)?;
        Ok(self.zip(other, Z3Word::add))
    }

    pub fn sub(&self, other: &FunctionTable) -> Result<FunctionTable> {
        check_dims(self.n, other.n)?;
        Ok(self.zip(other, Z3Word::sub))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &FunctionTable) -> Result<FunctionTable> {
        check_dims(self.n, other.n)?;
        Ok(self.zip(other, Z3Word::mul))
    }

    pub(crate) fn add_assign_word(&mut self, idx: usize, w: Z3Word) {
        self.words[idx] = self.words[idx] + w;
    }

    fn zip(&self, other: &FunctionTable, op: impl Fn(Z3Word, Z3Word) -> Z3Word) -> FunctionTable {
        FunctionTable {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// Number of inputs with a nonzero value.
    pub fn support(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.support())).sum()
    }

    /// Counts of entries equal to 1 and to 2.
    pub fn ones_twos(&self) -> (u64, u64) {
        self.words.iter().fold((0, 0), |(o, t), w| {
            (
                o + u64::from(w.ones.count_ones()),
                t + u64::from(w.twos.count_ones()),
            )
        })
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| w.ones | w.twos == 0)
    }
}

impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len())
            .map(|x| char::from(b'0' + self.get(x)))
            .collect();
        f.write_str(&s)
    }
}

/// Table of `AND_n`: 1 on the all-ones input, 0 elsewhere.
pub fn and_table(n: usize) -> Result<FunctionTable> {
    if n == 0 || n > MAX_VARS {
        return Err(Error::OutOfRange(format!("variable count {n}")));
    }
    let mut t = FunctionTable::zeros(n);
    t.set((1 << n) - 1, 1);
    Ok(t)
}
