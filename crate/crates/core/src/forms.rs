//! Linear and quadratic forms over Z2 and their Witt theory.
//!
//! Variables are `x1..xn` in text and `0..n` internally. A quadratic form is
//! stored as a symmetric adjacency matrix of its `xi*xj` terms (one `u16` row
//! per variable, zero diagonal), a linear coefficient mask and a constant bit.
//!
//! The compact integer encoding used for enumeration ("codes") puts the
//! constant in bit 0, `x1..xn` in bits `1..=n`, and the pairs `(i, j)`, `i < j`,
//! in lexicographic order after that. At `n = 6` this is `1 + 6 + 15 = 22` bits.

use std::fmt;

use rand::Rng;

use crate::error::{check_dims, Error, Result};

pub const MAX_VARS: usize = 16;

/// Truth-table patterns of `x1..x6` inside one 64-bit word (bit `k` is input `k`).
pub(crate) const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Number of 64-bit words holding a table over `n` variables.
pub fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

/// Mask of the meaningful bits in each word of a table over `n` variables.
pub fn valid_mask(n: usize) -> u64 {
    if n >= 6 {
        !0
    } else {
        (1u64 << (1 << n)) - 1
    }
}

/// Pattern of variable `i` (0-based) in word `w` of a truth table.
#[inline]
pub(crate) fn var_word(i: usize, w: usize) -> u64 {
    if i < 6 {
        VAR_MASKS[i]
    } else if (w >> (i - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VARS {
        return Err(Error::OutOfRange(format!(
            "variable count {n} not in 1..={MAX_VARS}"
        )));
    }
    Ok(())
}

fn low_mask(n: usize) -> u16 {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

/// Affine form `a1 x1 + ... + an xn + a0` over Z2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    n: usize,
    coeffs: u16,
    constant: bool,
}

impl LinearForm {
    pub fn new(n: usize, coeffs: u16, constant: bool) -> Result<Self> {
        check_n(n)?;
        if coeffs & !low_mask(n) != 0 {
            return Err(Error::InputShape(format!(
                "coefficient mask {coeffs:#x} has bits beyond x{n}"
            )));
        }
        Ok(Self {
            n,
            coeffs,
            constant,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: 0,
            constant: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Bit `i` is the coefficient of `x(i+1)`.
    pub fn coeffs(&self) -> u16 {
        self.coeffs
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs == 0
    }

    pub fn eval_index(&self, x: usize) -> bool {
        ((self.coeffs as usize & x).count_ones() & 1 == 1) ^ self.constant
    }

    pub fn add(&self, other: &LinearForm) -> Result<LinearForm> {
        check_dims(self.n, other.n)?;
        Ok(LinearForm {
            n: self.n,
            coeffs: self.coeffs ^ other.coeffs,
            constant: self.constant ^ other.constant,
        })
    }

    /// Product of two affine forms as a function on `{0,1}^n` (so `xi*xi = xi`).
    pub fn mul(&self, other: &LinearForm) -> Result<QuadraticForm> {
        check_dims(self.n, other.n)?;
        let (a, b) = (self.coeffs, other.coeffs);
        let mut q = QuadraticForm::zero(self.n);
        for i in 0..self.n {
            let mut row = 0u16;
            if a >> i & 1 == 1 {
                row ^= b;
            }
            if b >> i & 1 == 1 {
                row ^= a;
            }
            q.adj[i] = row & !(1 << i);
        }
        q.linear = a & b;
        if self.constant {
            q.linear ^= b;
        }
        if other.constant {
            q.linear ^= a;
        }
        q.constant = self.constant && other.constant;
        Ok(q)
    }

    pub fn to_quadratic(&self) -> QuadraticForm {
        QuadraticForm {
            n: self.n,
            adj: [0; MAX_VARS],
            linear: self.coeffs,
            constant: self.constant,
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_quadratic().fmt(f)
    }
}

/// Quadratic form over Z2 on `n` variables: `sum aij xi xj + sum ai xi + a0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    n: usize,
    adj: [u16; MAX_VARS],
    linear: u16,
    constant: bool,
}

impl QuadraticForm {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            adj: [0; MAX_VARS],
            linear: 0,
            constant: false,
        }
    }

    pub fn one(n: usize) -> Self {
        Self {
            constant: true,
            ..Self::zero(n)
        }
    }

    /// Builds a form from 0-based pairs and linear indices. Repeated terms cancel.
    pub fn from_terms(
        n: usize,
        pairs: &[(usize, usize)],
        linear: &[usize],
        constant: bool,
    ) -> Result<Self> {
        check_n(n)?;
        let mut q = Self::zero(n);
        q.constant = constant;
        for &i in linear {
            if i >= n {
                return Err(Error::OutOfRange(format!("x{} with n = {n}", i + 1)));
            }
            q.linear ^= 1 << i;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::OutOfRange(format!(
                    "x{}x{} with n = {n}",
                    i + 1,
                    j + 1
                )));
            }
            q.toggle_term(i, j);
        }
        Ok(q)
    }

    fn toggle_term(&mut self, i: usize, j: usize) {
        if i == j {
            self.linear ^= 1 << i;
        } else {
            self.adj[i] ^= 1 << j;
            self.adj[j] ^= 1 << i;
        }
    }

    /// Parses `"x1x2+x3x4+x5+1"`; `"0"` is the zero form. Terms may appear in
    /// any order and repeated terms cancel.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        check_n(n)?;
        let mut q = Self::zero(n);
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty form".into()));
        }
        for term in s.split('+') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            match term.as_str() {
                "" => return Err(Error::Parse(format!("empty term in {s:?}"))),
                "0" => {}
                "1" => q.constant ^= true,
                _ => {
                    let vars = parse_monomial(&term, n)?;
                    match vars.as_slice() {
                        [i] => q.linear ^= 1 << i,
                        [i, j] => q.toggle_term(*i, *j),
                        _ => return Err(Error::Parse(format!("term {term:?} has degree above 2"))),
                    }
                }
            }
        }
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    /// Bit `i` is the coefficient of `x(i+1)`.
    pub fn linear(&self) -> u16 {
        self.linear
    }

    /// Partners of variable `i`: bit `j` set iff `xi xj` is a term.
    pub fn row(&self, i: usize) -> u16 {
        self.adj[i]
    }

    pub fn has_term(&self, i: usize, j: usize) -> bool {
        i != j && (self.adj[i] >> j) & 1 == 1
    }

    /// Quadratic terms as 0-based `(i, j)` with `i < j`, lexicographic.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            let mut row = self.adj[i] & !((2u32 << i) - 1) as u16;
            while row != 0 {
                let j = row.trailing_zeros() as usize;
                out.push((i, j));
                row &= row - 1;
            }
        }
        out
    }

    pub fn is_linear(&self) -> bool {
        self.adj.iter().all(|&r| r == 0)
    }

    /// The affine part of the form (linear terms plus constant).
    pub fn affine_part(&self) -> LinearForm {
        LinearForm {
            n: self.n,
            coeffs: self.linear,
            constant: self.constant,
        }
    }

    /// The quadratic terms only.
    pub fn pure_part(&self) -> QuadraticForm {
        QuadraticForm {
            linear: 0,
            constant: false,
            ..*self
        }
    }

    /// Returns `q + 1`.
    pub fn complement(&self) -> QuadraticForm {
        QuadraticForm {
            constant: !self.constant,
            ..*self
        }
    }

    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::InputShape(format!(
                "assignment of length {} for a form on {} variables",
                x.len(),
                self.n
            )));
        }
        let idx = x
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | (usize::from(b) << i));
        Ok(self.eval_index(idx))
    }

    /// Evaluates at the assignment whose bit `i` is `x(i+1)`.
    pub fn eval_index(&self, x: usize) -> bool {
        let xs = x as u16;
        let mut acc = self.constant as u32 ^ (self.linear & xs).count_ones();
        for i in 0..self.n {
            if xs >> i & 1 == 1 {
                // each pair counted from its lower end only
                let upper = self.adj[i] & !((2u32 << i) - 1) as u16;
                acc ^= (upper & xs).count_ones();
            }
        }
        acc & 1 == 1
    }

    pub fn add(&self, other: &QuadraticForm) -> Result<QuadraticForm> {
        check_dims(self.n, other.n)?;
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.adj[i] ^= other.adj[i];
        }
        out.linear ^= other.linear;
        out.constant ^= other.constant;
        Ok(out)
    }

    pub fn add_linear(&self, l: &LinearForm) -> Result<QuadraticForm> {
        self.add(&l.to_quadratic())
    }

    /// Bits of the truth table (`1` where the form evaluates to 1), packed in
    /// 64-bit words, input `k` at bit `k % 64` of word `k / 64`.
    pub fn truth_table(&self) -> Vec<u64> {
        let words = word_count(self.n);
        let pairs = self.pairs();
        (0..words)
            .map(|w| {
                let mut t = if self.constant { !0 } else { 0 };
                let mut lin = self.linear;
                while lin != 0 {
                    t ^= var_word(lin.trailing_zeros() as usize, w);
                    lin &= lin - 1;
                }
                for &(i, j) in &pairs {
                    t ^= var_word(i, w) & var_word(j, w);
                }
                t & valid_mask(self.n)
            })
            .collect()
    }

    /// Number of inputs where the form evaluates to 1.
    pub fn support(&self) -> u64 {
        self.truth_table()
            .iter()
            .map(|w| u64::from(w.count_ones()))
            .sum()
    }

    /// Width of the integer encoding: `1 + n + n(n-1)/2`.
    pub fn code_width(n: usize) -> usize {
        1 + n + n * (n.saturating_sub(1)) / 2
    }

    /// Integer encoding; only defined while the width fits 64 bits (`n <= 10`).
    pub fn to_code(&self) -> Option<u64> {
        if Self::code_width(self.n) > 64 {
            return None;
        }
        let mut code = self.constant as u64 | (u64::from(self.linear) << 1);
        let mut bit = 1 + self.n;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_term(i, j) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        Some(code)
    }

    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        check_n(n)?;
        let width = Self::code_width(n);
        if width > 64 {
            return Err(Error::Capacity(format!(
                "code encoding needs {width} bits for n = {n}"
            )));
        }
        if width < 64 && code >> width != 0 {
            return Err(Error::OutOfRange(format!(
                "code {code:#x} exceeds {width} bits"
            )));
        }
        let mut q = Self::zero(n);
        q.constant = code & 1 == 1;
        q.linear = ((code >> 1) as u16) & low_mask(n);
        let mut bit = 1 + n;
        for i in 0..n {
            for j in i + 1..n {
                if code >> bit & 1 == 1 {
                    q.toggle_term(i, j);
                }
                bit += 1;
            }
        }
        Ok(q)
    }
}

fn parse_monomial(term: &str, n: usize) -> Result<Vec<usize>> {
    let mut vars: Vec<usize> = Vec::new();
    let bytes = term.as_bytes();
    let mut k = 0;
    while k < bytes.len() {
        if bytes[k] == b'*' {
            k += 1;
            continue;
        }
        if bytes[k] != b'x' {
            return Err(Error::Parse(format!(
                "unexpected {:?} in term {term:?}",
                bytes[k] as char
            )));
        }
        k += 1;
        let start = k;
        while k < bytes.len() && bytes[k].is_ascii_digit() {
            k += 1;
        }
        let idx: usize = term[start..k]
            .parse()
            .map_err(|_| Error::Parse(format!("missing variable index in {term:?}")))?;
        if idx == 0 || idx > n {
            return Err(Error::OutOfRange(format!("x{idx} with n = {n}")));
        }
        // xi*xi = xi on boolean inputs
        if !vars.contains(&(idx - 1)) {
            vars.push(idx - 1);
        }
    }
    Ok(vars)
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(i, j)| format!("x{}x{}", i + 1, j + 1))
            .collect();
        terms.extend(
            (0..self.n)
                .filter(|i| self.linear >> i & 1 == 1)
                .map(|i| format!("x{}", i + 1)),
        );
        if self.constant {
            terms.push("1".into());
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join("+"))
        }
    }
}

/// Maps codes of forms on at most 6 variables to their truth-table words.
#[derive(Debug, Clone)]
pub struct WordCodec {
    n: usize,
    masks: Vec<u64>,
}

impl WordCodec {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        if n > 6 {
            return Err(Error::Capacity(format!(
                "single-word tables need n <= 6, got {n}"
            )));
        }
        let valid = valid_mask(n);
        let mut masks = vec![valid];
        let vars = &VAR_MASKS[..n];
        masks.extend(vars.iter().map(|m| m & valid));
        for (i, mi) in vars.iter().enumerate() {
            for mj in &vars[i + 1..] {
                masks.push(mi & mj & valid);
            }
        }
        Ok(Self { n, masks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    pub fn table(&self, mut code: u64) -> u64 {
        let mut t = 0;
        while code != 0 {
            t ^= self.masks[code.trailing_zeros() as usize];
            code &= code - 1;
        }
        t
    }
}

/// Uniformly random form over all `2^(1 + n + n(n-1)/2)` forms.
pub fn random_form<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<QuadraticForm> {
    check_n(n)?;
    let width = QuadraticForm::code_width(n);
    if width <= 64 {
        let mask = if width == 64 { !0 } else { (1u64 << width) - 1 };
        return QuadraticForm::from_code(n, rng.random::<u64>() & mask);
    }
    let mut q = QuadraticForm::zero(n);
    q.constant = rng.random::<bool>();
    q.linear = rng.random::<u16>() & low_mask(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<bool>() {
                q.toggle_term(i, j);
            }
        }
    }
    Ok(q)
}

/// A Witt decomposition `l1 l2 + ... + l(2r-1) l(2r) + l0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittDecomposition {
    pub pairs: Vec<(LinearForm, LinearForm)>,
    pub residual: LinearForm,
}

impl WittDecomposition {
    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    /// Rebuilds the form as a polynomial.
    pub fn recompose(&self) -> QuadraticForm {
        self.pairs
            .iter()
            .fold(self.residual.to_quadratic(), |acc, (a, b)| {
                acc.add(&a.mul(b).expect("pair dimensions agree"))
                    .expect("pair dimensions agree")
            })
    }

    /// Coefficient vectors of the pair forms, plus the residual when it is
    /// nonconstant. These are linearly independent.
    pub fn basis_vectors(&self) -> Vec<u16> {
        let mut v: Vec<u16> = self
            .pairs
            .iter()
            .flat_map(|(a, b)| [a.coeffs, b.coeffs])
            .collect();
        if !self.residual.is_constant() {
            v.push(self.residual.coeffs);
        }
        v
    }
}

/// Witt decomposition by repeated elimination of a variable pair.
///
/// For the lowest remaining `i` with a partner, `j` is its smallest partner and
/// the pair is `(dq/dxi, dq/dxj)`: the partner sum of each variable, with the
/// variable's own linear coefficient as the constant. Adding their product
/// removes every occurrence of `xi` and `xj`.
pub fn witt_decompose(q: &QuadraticForm) -> WittDecomposition {
    let n = q.n;
    let mut cur = *q;
    let mut pairs = Vec::new();
    for i in 0..n {
        if cur.is_linear() {
            break;
        }
        if cur.adj[i] == 0 {
            continue;
        }
        let j = cur.adj[i].trailing_zeros() as usize;
        let first = LinearForm {
            n,
            coeffs: cur.adj[i],
            constant: cur.linear >> i & 1 == 1,
        };
        let second = LinearForm {
            n,
            coeffs: cur.adj[j],
            constant: cur.linear >> j & 1 == 1,
        };
        let product = first.mul(&second).expect("same n");
        cur = cur.add(&product).expect("same n");
        debug_assert!(cur.adj[i] == 0 && cur.adj[j] == 0);
        debug_assert!(cur.linear >> i & 1 == 0 && cur.linear >> j & 1 == 0);
        pairs.push((first, second));
    }
    WittDecomposition {
        pairs,
        residual: cur.affine_part(),
    }
}

pub fn witt_rank(q: &QuadraticForm) -> usize {
    witt_decompose(q).rank()
}

/// Canonical representative: `x1x2 + ... + x(2r-1)x(2r)`, plus `x(2r+1)` when
/// the residual is nonconstant, plus `1` when the residual's constant is set.
pub fn witt_normal_form(q: &QuadraticForm) -> QuadraticForm {
    let d = witt_decompose(q);
    normal_form(
        q.n,
        d.rank(),
        !d.residual.is_constant(),
        d.residual.constant,
    )
}

fn normal_form(n: usize, rank: usize, with_linear: bool, constant: bool) -> QuadraticForm {
    let mut out = QuadraticForm::zero(n);
    for k in 0..rank {
        out.toggle_term(2 * k, 2 * k + 1);
    }
    if with_linear {
        out.linear |= 1 << (2 * rank);
    }
    out.constant = constant;
    out
}

/// The `2n + 2` Witt normal forms on `n` variables, ordered by rank, then
/// linear term, then constant.
pub fn normal_form_list(n: usize) -> Result<Vec<QuadraticForm>> {
    check_n(n)?;
    let mut out = Vec::with_capacity(2 * n + 2);
    for rank in 0..=n / 2 {
        for with_linear in [false, true] {
            if with_linear && 2 * rank + 1 > n {
                continue;
            }
            for constant in [false, true] {
                out.push(normal_form(n, rank, with_linear, constant));
            }
        }
    }
    Ok(out)
}

/// Rank over GF(2) of a set of coefficient vectors.
pub fn gf2_rank(vectors: &[u16]) -> usize {
    let mut basis = [0u16; 16];
    let mut rank = 0;
    for &v in vectors {
        let mut v = v;
        while v != 0 {
            let top = 15 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

/// Extends independent `vectors` to a basis of `GF(2)^n` by adding standard
/// basis vectors in index order. Returns only the added vectors.
pub(crate) fn complete_basis(vectors: &[u16], n: usize) -> Vec<u16> {
    let mut have = vectors.to_vec();
    let mut added = Vec::new();
    for i in 0..n {
        if have.len() == n {
            break;
        }
        let e = 1u16 << i;
        have.push(e);
        if gf2_rank(&have) == have.len() {
            added.push(e);
        } else {
            have.pop();
        }
    }
    added
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportCount {
    pub support: u64,
    pub count: u64,
}

/// Support distribution of a family of forms sharing one pure quadratic part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyProfile {
    pub high: SupportCount,
    pub low: SupportCount,
    pub middle: SupportCount,
}

/// Supports (number of inputs evaluating to 1) across the `2^(n+1)` forms of a
/// family of Witt rank `r`.
pub fn family_support_profile(n: usize, r: usize) -> Result<FamilyProfile> {
    check_n(n)?;
    if r > n / 2 {
        return Err(Error::OutOfRange(format!(
            "Witt rank {r} exceeds {} for n = {n}",
            n / 2
        )));
    }
    let family = 1u64 << (n + 1);
    if r == 0 {
        return Ok(affine_family_profile(n));
    }
    let half = 1u64 << (n - 1);
    let delta = 1u64 << (n - r - 1);
    let extreme = 1u64 << (2 * r);
    Ok(FamilyProfile {
        high: SupportCount {
            support: half + delta,
            count: extreme,
        },
        low: SupportCount {
            support: half - delta,
            count: extreme,
        },
        middle: SupportCount {
            support: half,
            count: family - 2 * extreme,
        },
    })
}

// Rank 0 families are the affine forms; counted directly.
fn affine_family_profile(n: usize) -> FamilyProfile {
    let full = 1u64 << n;
    let (mut zero, mut all, mut half) = (0, 0, 0);
    for coeffs in 0..=u32::from(low_mask(n)) {
        for constant in [false, true] {
            let l = LinearForm {
                n,
                coeffs: coeffs as u16,
                constant,
            };
            match l.to_quadratic().support() {
                0 => zero += 1,
                s if s == full => all += 1,
                _ => half += 1,
            }
        }
    }
    FamilyProfile {
        high: SupportCount {
            support: full,
            count: all,
        },
        low: SupportCount {
            support: 0,
            count: zero,
        },
        middle: SupportCount {
            support: full / 2,
            count: half,
        },
    }
}
