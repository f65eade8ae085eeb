//! Support histograms of random character sums, the exhaustive weight-3
//! enumeration over Witt normal forms, and the ones/twos occupancy grid.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::character_table;
use crate::error::{Error, Result};
use crate::forms::{
    check_n, normal_form_list, random_form, valid_mask, witt_normal_form, QuadraticForm, WordCodec,
};
use crate::table::{FunctionTable, Z3Word};

/// Per-sample random streams: one ChaCha stream per sample index, so results
/// do not depend on how indices are split across workers.
#[derive(Debug, Clone)]
pub struct SampleStreams {
    base: ChaCha8Rng,
}

impl SampleStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng
    }
}

/// Draws sums of `w` independent uniform quadratic characters.
#[derive(Debug, Clone)]
pub struct SumSampler {
    n: usize,
    w: usize,
    streams: SampleStreams,
    codec: Option<WordCodec>,
}

impl SumSampler {
    pub fn new(n: usize, w: usize, seed: u64) -> Result<Self> {
        if w == 0 {
            return Err(Error::OutOfRange("weight must be at least 1".into()));
        }
        check_n(n)?;
        Ok(Self {
            n,
            w,
            streams: SampleStreams::new(seed),
            codec: WordCodec::new(n).ok(),
        })
    }

    /// Table of sample `index`.
    pub fn table(&self, index: u64) -> FunctionTable {
        let mut rng = self.streams.stream(index);
        match &self.codec {
            Some(codec) => {
                let mask = (1u64 << codec.width()) - 1;
                let valid = valid_mask(self.n);
                let mut acc = Z3Word::ZERO;
                for _ in 0..self.w {
                    let code = rng.random::<u64>() & mask;
                    acc = acc + Z3Word::character(codec.table(code), valid);
                }
                FunctionTable::from_words(self.n, vec![acc]).expect("valid word")
            }
            None => {
                let mut acc = FunctionTable::zeros(self.n);
                for _ in 0..self.w {
                    let q = random_form(self.n, &mut rng).expect("n validated");
                    acc = acc.add(&character_table(&q)).expect("same n");
                }
                acc
            }
        }
    }

    // Calls `visit` on (ones, twos) of each sample in `range`.
    fn counts(&self, range: std::ops::Range<u64>, mut visit: impl FnMut(u64, u64)) {
        for i in range {
            let (ones, twos) = self.table(i).ones_twos();
            visit(ones, twos);
        }
    }
}

/// Support histogram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub n: usize,
    pub bins: BTreeMap<u64, u64>,
    pub total: u64,
    /// Counts carry class-size weights rather than sample counts.
    pub weighted: bool,
}

impl Histogram {
    fn from_dense(n: usize, dense: &[u64], weighted: bool) -> Self {
        let bins: BTreeMap<u64, u64> = dense
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, &c)| (s as u64, c))
            .collect();
        let total = bins.values().sum();
        Self {
            n,
            bins,
            total,
            weighted,
        }
    }

    pub fn count(&self, support: u64) -> u64 {
        self.bins.get(&support).copied().unwrap_or(0)
    }

    pub fn proportion(&self, support: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(support) as f64 / self.total as f64
    }

    /// Bins rescaled to sum to `scale`.
    pub fn normalized(&self, scale: f64) -> BTreeMap<u64, f64> {
        self.bins
            .keys()
            .map(|&s| (s, self.proportion(s) * scale))
            .collect()
    }

    /// Support value with the largest count (smallest such support on ties).
    pub fn mode(&self) -> Option<u64> {
        self.bins
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&s, _)| s)
    }

    /// `support,count`, or `support,weighted_count,normalized` (to 100000)
    /// for weighted histograms.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.weighted {
            out.push_str("support,weighted_count,normalized\n");
            for (&s, &c) in &self.bins {
                let _ = writeln!(out, "{s},{c},{:.3}", self.proportion(s) * 100_000.0);
            }
        } else {
            out.push_str("support,count\n");
            for (&s, &c) in &self.bins {
                let _ = writeln!(out, "{s},{c}");
            }
        }
        out
    }

    /// Reads `to_csv` output; lines starting with `#` are skipped.
    pub fn from_csv(n: usize, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty histogram".into()))?;
        let weighted = match header {
            "support,count" => false,
            "support,weighted_count,normalized" => true,
            _ => return Err(Error::Parse(format!("unknown header {header:?}"))),
        };
        let mut bins = BTreeMap::new();
        for line in lines {
            let mut cols = line.split(',');
            let mut field = |name: &str| -> Result<u64> {
                cols.next()
                    .ok_or_else(|| Error::Parse(format!("missing {name} in {line:?}")))?
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("{name} in {line:?}: {e}")))
            };
            let s = field("support")?;
            let c = field("count")?;
            if s > 1 << n {
                return Err(Error::OutOfRange(format!("support {s} above 2^{n}")));
            }
            bins.insert(s, c);
        }
        let total = bins.values().sum();
        Ok(Self {
            n,
            bins,
            total,
            weighted,
        })
    }
}

/// Splits `0..samples` into `parts` contiguous ranges.
fn partition(samples: u64, parts: usize) -> Vec<std::ops::Range<u64>> {
    let parts = parts.max(1) as u64;
    (0..parts)
        .map(|p| (samples * p / parts)..(samples * (p + 1) / parts))
        .filter(|r| !r.is_empty())
        .collect()
}

fn default_partitions() -> usize {
    rayon::current_num_threads() * 4
}

/// Support histogram of `samples` random sums of `w` characters.
pub fn sample_histogram(n: usize, w: usize, samples: u64, seed: u64) -> Result<Histogram> {
    sample_histogram_partitioned(n, w, samples, seed, default_partitions())
}

/// As [`sample_histogram`], with an explicit number of work partitions. The
/// output does not depend on `partitions`.
pub fn sample_histogram_partitioned(
    n: usize,
    w: usize,
    samples: u64,
    seed: u64,
    partitions: usize,
) -> Result<Histogram> {
    let sampler = SumSampler::new(n, w, seed)?;
    let size = (1usize << n) + 1;
    let dense = partition(samples, partitions)
        .into_par_iter()
        .map(|range| {
            let mut local = vec![0u64; size];
            sampler.counts(range, |ones, twos| local[(ones + twos) as usize] += 1);
            local
        })
        .reduce(|| vec![0u64; size], add_dense);
    Ok(Histogram::from_dense(n, &dense, false))
}

fn add_dense(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// `samples` random sums of `w` characters, in sample-index order.
pub fn sample_tables(n: usize, w: usize, samples: u64, seed: u64) -> Result<Vec<FunctionTable>> {
    let sampler = SumSampler::new(n, w, seed)?;
    Ok((0..samples)
        .into_par_iter()
        .map(|i| sampler.table(i))
        .collect())
}

/// Which (ones, twos) count pairs occur.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyGrid {
    n: usize,
    cells: Vec<bool>,
}

impl OccupancyGrid {
    pub fn empty(n: usize) -> Self {
        let side = (1usize << n) + 1;
        Self {
            n,
            cells: vec![false; side * side],
        }
    }

    pub fn side(&self) -> usize {
        (1 << self.n) + 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, ones: usize, twos: usize) -> bool {
        self.cells[twos * self.side() + ones]
    }

    pub fn mark(&mut self, ones: usize, twos: usize) {
        let side = self.side();
        self.cells[twos * side + ones] = true;
    }

    pub fn marked(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let side = self.side();
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(move |(k, _)| (k % side, k / side))
    }

    fn merge(mut self, other: OccupancyGrid) -> OccupancyGrid {
        for (a, b) in self.cells.iter_mut().zip(other.cells) {
            *a |= b;
        }
        self
    }

    /// One line per twos count (top row = 0), one character per ones count.
    pub fn to_text(&self) -> String {
        let side = self.side();
        let mut out = String::with_capacity(side * (side + 1));
        for row in self.cells.chunks(side) {
            out.extend(row.iter().map(|&c| if c { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let side = rows.len();
        if side < 3 || !(side - 1).is_power_of_two() {
            return Err(Error::Parse(format!("{side} grid rows is not 2^n + 1")));
        }
        let n = (side - 1).trailing_zeros() as usize;
        let mut grid = Self::empty(n);
        for (twos, row) in rows.iter().enumerate() {
            if row.len() != side {
                return Err(Error::Parse(format!("row {twos} has {} cells", row.len())));
            }
            for (ones, c) in row.bytes().enumerate() {
                match c {
                    b'1' => grid.mark(ones, twos),
                    b'0' => {}
                    _ => return Err(Error::Parse(format!("bad grid cell {:?}", c as char))),
                }
            }
        }
        Ok(grid)
    }
}

/// Marks the (ones, twos) counts seen across `samples` random sums of `w`
/// characters.
pub fn occupancy_grid(n: usize, w: usize, samples: u64, seed: u64) -> Result<OccupancyGrid> {
    let sampler = SumSampler::new(n, w, seed)?;
    Ok(partition(samples, default_partitions())
        .into_par_iter()
        .map(|range| {
            let mut grid = OccupancyGrid::empty(n);
            sampler.counts(range, |ones, twos| grid.mark(ones as usize, twos as usize));
            grid
        })
        .reduce(|| OccupancyGrid::empty(n), OccupancyGrid::merge))
}

/// Result of the exhaustive weight-3 enumeration.
#[derive(Debug, Clone)]
pub struct Weight3Enumeration {
    /// Witt normal forms with the number of forms in each class.
    pub classes: Vec<(QuadraticForm, u64)>,
    /// Supports of `2^0 + 2^u + 2^v`, each `u` weighted by its class size.
    pub histogram: Histogram,
}

/// Number of forms on `n <= 6` variables in each Witt normal-form class, in
/// [`normal_form_list`] order.
pub fn normal_form_class_sizes(n: usize) -> Result<Vec<(QuadraticForm, u64)>> {
    let list = normal_form_list(n)?;
    let width = QuadraticForm::code_width(n);
    if width > 32 {
        return Err(Error::Capacity(format!(
            "classifying 2^{width} forms is not supported"
        )));
    }
    let chunks = partition(1u64 << width, 256);
    let counts = chunks
        .into_par_iter()
        .map(|range| {
            let mut local = vec![0u64; list.len()];
            for code in range {
                let q = QuadraticForm::from_code(n, code).expect("code within width");
                let nf = witt_normal_form(&q);
                let k = list
                    .iter()
                    .position(|u| *u == nf)
                    .expect("normal form listed");
                local[k] += 1;
            }
            local
        })
        .reduce(|| vec![0u64; list.len()], add_dense);
    Ok(list.into_iter().zip(counts).collect())
}

/// Support distribution of every weight-3 function `2^0 + 2^u + 2^v` with
/// `u` a Witt normal form and `v` any form, weighted by the size of `u`'s
/// class. This is the exact support distribution of a sum of three uniform
/// characters.
pub fn enumerate_weight3(n: usize) -> Result<Weight3Enumeration> {
    if n != 6 {
        return Err(Error::OutOfRange(format!(
            "weight-3 enumeration is defined for n = 6, got {n}"
        )));
    }
    let classes = normal_form_class_sizes(n)?;
    let codec = WordCodec::new(n)?;
    let valid = valid_mask(n);
    let one = Z3Word::character(0, valid);
    let size = (1usize << n) + 1;
    let mut weighted = vec![0u64; size];
    for (u, class_size) in &classes {
        if *class_size == 0 {
            continue;
        }
        let u_code = u.to_code().expect("n = 6 fits a code");
        let base = one + Z3Word::character(codec.table(u_code), valid);
        let per_v = partition(1u64 << codec.width(), 64)
            .into_par_iter()
            .map(|range| {
                let mut local = vec![0u64; size];
                for v in range {
                    let t = base + Z3Word::character(codec.table(v), valid);
                    local[t.support() as usize] += 1;
                }
                local
            })
            .reduce(|| vec![0u64; size], add_dense);
        for (acc, c) in weighted.iter_mut().zip(per_v) {
            *acc += c * class_size;
        }
    }
    Ok(Weight3Enumeration {
        classes,
        histogram: Histogram::from_dense(n, &weighted, true),
    })
}
