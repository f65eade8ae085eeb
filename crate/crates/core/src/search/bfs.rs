//! Exact minimum 2-weight by breadth-first search over every function
//! `{0,1}^n -> Z3` (`n <= 4`).
//!
//! A state is a table read as a base-3 integer with `2^n` digits, input `x`
//! at digit `x`. Distances live in one byte per state (`3^16` bytes at
//! `n = 4`); `UNSEEN` marks states not reached yet. Edges add one generator
//! character.

use std::fmt;

use crate::characters::{sum_table, CharacterSum};
use crate::error::{Error, Result};
use crate::forms::{valid_mask, QuadraticForm, WordCodec};
use crate::table::{FunctionTable, Z3Word};

pub const MAX_BFS_VARS: usize = 4;

const UNSEEN: u8 = u8::MAX;
const CHUNK_STATES: u32 = 6561; // 3^8

/// Which characters may be used as edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generators {
    /// `2^l` for affine forms `l` only.
    Linear,
    /// `2^q` for every quadratic form.
    Quadratic,
}

/// A character sum realizing `target` with `weight` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightWitness {
    pub target: FunctionTable,
    pub sum: CharacterSum,
    pub weight: usize,
}

impl WeightWitness {
    /// Parses the `target=`/`weight=`/`sum=` text written by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut target = None;
        let mut weight = None;
        let mut sum = None;
        for line in text.lines().map(str::trim) {
            if let Some(v) = line.strip_prefix("target=") {
                target = Some(FunctionTable::parse(v)?);
            } else if let Some(v) = line.strip_prefix("weight=") {
                weight = Some(
                    v.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("weight: {e}")))?,
                );
            } else if let Some(v) = line.strip_prefix("sum=") {
                sum = Some(v.to_string());
            }
        }
        let target = target.ok_or_else(|| Error::Parse("missing target=".into()))?;
        let weight = weight.ok_or_else(|| Error::Parse("missing weight=".into()))?;
        let sum = CharacterSum::parse(
            &sum.ok_or_else(|| Error::Parse("missing sum=".into()))?,
            target.n(),
        )?;
        Ok(Self {
            target,
            sum,
            weight,
        })
    }

    pub fn verify(&self) -> bool {
        self.sum.weight() == self.weight && sum_table(&self.sum) == self.target
    }
}

impl fmt::Display for WeightWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target={}", self.target)?;
        writeln!(f, "weight={}", self.weight)?;
        write!(f, "sum={}", self.sum)
    }
}

/// Base-3 codec for tables of at most 16 entries, 8 digits per lookup.
struct StateCodec {
    encode8: Vec<u32>,
    decode8: Vec<(u8, u8)>,
}

impl StateCodec {
    fn new() -> Self {
        let mut encode8 = vec![0u32; 1 << 16];
        let mut decode8 = vec![(0u8, 0u8); CHUNK_STATES as usize];
        for value in 0..CHUNK_STATES {
            let (mut ones, mut twos, mut v) = (0u8, 0u8, value);
            for digit in 0..8 {
                match v % 3 {
                    1 => ones |= 1 << digit,
                    2 => twos |= 1 << digit,
                    _ => {}
                }
                v /= 3;
            }
            encode8[usize::from(ones) | usize::from(twos) << 8] = value;
            decode8[value as usize] = (ones, twos);
        }
        Self { encode8, decode8 }
    }

    #[inline]
    fn encode(&self, w: Z3Word) -> u32 {
        let lo = (w.ones & 0xFF) as usize | ((w.twos & 0xFF) as usize) << 8;
        let hi = ((w.ones >> 8) & 0xFF) as usize | (((w.twos >> 8) & 0xFF) as usize) << 8;
        self.encode8[lo] + CHUNK_STATES * self.encode8[hi]
    }

    #[inline]
    fn decode(&self, idx: u32) -> Z3Word {
        let (lo1, lo2) = self.decode8[(idx % CHUNK_STATES) as usize];
        let (hi1, hi2) = self.decode8[(idx / CHUNK_STATES) as usize];
        Z3Word {
            ones: u64::from(lo1) | u64::from(hi1) << 8,
            twos: u64::from(lo2) | u64::from(hi2) << 8,
        }
    }
}

/// Minimum number of generator characters summing to `target`, with a
/// witness. Searches level by level from the zero function and stops at the
/// level where the target first appears.
pub fn bfs_min_weight(target: &FunctionTable, generators: Generators) -> Result<WeightWitness> {
    let n = target.n();
    if n > MAX_BFS_VARS {
        return Err(Error::Capacity(format!(
            "exact search holds 3^(2^n) states; n = {n} exceeds {MAX_BFS_VARS}"
        )));
    }
    let codec = WordCodec::new(n)?;
    let forms: Vec<u64> = match generators {
        Generators::Quadratic => (0..1u64 << codec.width()).collect(),
        Generators::Linear => (0..1u64 << (n + 1)).collect(),
    };
    let valid = valid_mask(n);
    let gens: Vec<Z3Word> = forms
        .iter()
        .map(|&c| Z3Word::character(codec.table(c), valid))
        .collect();

    let states = 3usize.pow(1 << n);
    let states_codec = StateCodec::new();
    let mut dist = vec![UNSEEN; states];
    dist[0] = 0;
    let goal = target.words()[0];
    let goal_idx = states_codec.encode(goal) as usize;

    let mut level: u8 = 0;
    let distance = loop {
        if dist[goal_idx] != UNSEEN {
            break dist[goal_idx];
        }
        // target is one edge past this level iff some predecessor is on it
        if gens
            .iter()
            .any(|&g| dist[states_codec.encode(goal - g) as usize] == level)
        {
            break level + 1;
        }
        let mut discovered = 0usize;
        for idx in 0..states {
            if dist[idx] != level {
                continue;
            }
            let s = states_codec.decode(idx as u32);
            for &g in &gens {
                let next = states_codec.encode(s + g) as usize;
                if dist[next] == UNSEEN {
                    dist[next] = level + 1;
                    discovered += 1;
                }
            }
        }
        if discovered == 0 {
            return Err(Error::Internal(format!(
                "target {target} unreachable after level {level}"
            )));
        }
        level += 1;
    };

    // Walk back along predecessors one level closer to zero.
    let mut terms = Vec::with_capacity(usize::from(distance));
    let mut cur = goal;
    for k in (1..=distance).rev() {
        let pick = gens
            .iter()
            .position(|&g| dist[states_codec.encode(cur - g) as usize] == k - 1)
            .ok_or_else(|| Error::Internal(format!("no predecessor at level {}", k - 1)))?;
        terms.push(QuadraticForm::from_code(n, forms[pick])?);
        cur = cur - gens[pick];
    }
    let witness = WeightWitness {
        target: target.clone(),
        sum: CharacterSum::new(n, terms)?,
        weight: usize::from(distance),
    };
    if !witness.verify() {
        return Err(Error::Internal("witness does not re-sum to target".into()));
    }
    Ok(witness)
}
