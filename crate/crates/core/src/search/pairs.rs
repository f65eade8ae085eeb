//! Pairs of tables summing to `AND_n`.

use crate::error::{check_dims, Result};
use crate::table::{and_table, FunctionTable};

/// Whether `a + b = AND_n` pointwise mod 3.
pub fn pair_sums_to_and(a: &FunctionTable, b: &FunctionTable) -> Result<bool> {
    check_dims(a.n(), b.n())?;
    Ok(a.add(b)? == and_table(a.n())?)
}

/// All `(i, j)`, `i <= j`, with `pool[i] + pool[j] = AND_n`.
///
/// Away from the all-ones input, `a(x) = 1` iff `b(x) = 2`, `a(x) = 2` iff
/// `b(x) = 1`, and `a(x) = 0` iff `b(x) = 0`; the single remaining input
/// shifts each count by at most one. Pairs whose ones/twos counts violate
/// this are skipped before the full check.
pub fn scan_complementary_pairs(pool: &[FunctionTable]) -> Result<Vec<(usize, usize)>> {
    let Some(first) = pool.first() else {
        return Ok(Vec::new());
    };
    let n = first.n();
    for t in pool {
        check_dims(n, t.n())?;
    }
    let counts: Vec<(u64, u64)> = pool.iter().map(FunctionTable::ones_twos).collect();
    let target = and_table(n)?;
    let mut out = Vec::new();
    for i in 0..pool.len() {
        let (ones_a, twos_a) = counts[i];
        for j in i..pool.len() {
            let (ones_b, twos_b) = counts[j];
            if ones_a.abs_diff(twos_b) > 1
                || twos_a.abs_diff(ones_b) > 1
                || (ones_a + twos_a).abs_diff(ones_b + twos_b) > 1
            {
                continue;
            }
            if pool[i].add(&pool[j])? == target {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}
