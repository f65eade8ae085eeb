//! Characters `2^q` over Z3 (2 generates the multiplicative group), sums of
//! characters, and the identities that rewrite one character as a sum of
//! others.

use std::fmt;

use crate::error::{check_dims, Error, Result};
use crate::forms::{
    complete_basis, valid_mask, witt_decompose, LinearForm, QuadraticForm, MAX_VARS,
};
use crate::table::{FunctionTable, Z3Word};

/// Value table of `2^q`: 1 where `q = 0`, 2 where `q = 1`.
pub fn character_table(q: &QuadraticForm) -> FunctionTable {
    let v = valid_mask(q.n());
    let words = q
        .truth_table()
        .into_iter()
        .map(|t| Z3Word::character(t, v))
        .collect();
    FunctionTable::from_words(q.n(), words).expect("character words are well formed")
}

/// A multiset of quadratic forms standing for `sum 2^qi`. Coefficients are
/// folded into the forms (`2 * 2^q = 2^(q+1)`), so the weight is the number of
/// terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSum {
    n: usize,
    terms: Vec<QuadraticForm>,
}

impl CharacterSum {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            terms: Vec::new(),
        }
    }

    pub fn new(n: usize, terms: Vec<QuadraticForm>) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::OutOfRange(format!("variable count {n}")));
        }
        for t in &terms {
            check_dims(n, t.n())?;
        }
        Ok(Self { n, terms })
    }

    /// Parses form strings joined by `;`. A blank string is the empty sum.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let terms = s
            .split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| QuadraticForm::parse(t, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[QuadraticForm] {
        &self.terms
    }

    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn push(&mut self, q: QuadraticForm) -> Result<()> {
        check_dims(self.n, q.n())?;
        self.terms.push(q);
        Ok(())
    }

    pub fn is_linear(&self) -> bool {
        self.terms.iter().all(QuadraticForm::is_linear)
    }
}

impl fmt::Display for CharacterSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" ; "))
    }
}

/// Pointwise sum mod 3 of the terms' characters.
pub fn sum_table(s: &CharacterSum) -> FunctionTable {
    let v = valid_mask(s.n);
    let mut acc = FunctionTable::zeros(s.n);
    for q in &s.terms {
        for (i, t) in q.truth_table().into_iter().enumerate() {
            acc.add_assign_word(i, Z3Word::character(t, v));
        }
    }
    acc
}

// Every product of one term from `terms` and one from `factors`.
fn multiply(terms: &[QuadraticForm], factors: &[QuadraticForm]) -> Vec<QuadraticForm> {
    terms
        .iter()
        .flat_map(|t| factors.iter().map(move |f| t.add(f).expect("same n")))
        .collect()
}

// `2^(l1 l2) = 2^1 + 2^(l1+1) + 2^(l2+1) + 2^(l1+l2)` as exponent forms.
fn pair_as_linear_characters(a: &LinearForm, b: &LinearForm) -> [QuadraticForm; 4] {
    let n = a.n();
    let one = QuadraticForm::one(n);
    [
        one,
        a.to_quadratic().complement(),
        b.to_quadratic().complement(),
        a.add(b).expect("same n").to_quadratic(),
    ]
}

/// Expands `prod_k (2^1 + 2^(x(2k-1) x(2k)))` into `2^(n/2)` characters
/// summing to `AND_n`.
pub fn and_product_construction(n: usize) -> Result<CharacterSum> {
    if n < 2 || !n.is_multiple_of(2) || n > MAX_VARS {
        return Err(Error::OutOfRange(format!(
            "product construction needs even n in 2..={MAX_VARS}, got {n}"
        )));
    }
    let mut terms = vec![QuadraticForm::zero(n)];
    for k in 0..n / 2 {
        let factors = [
            QuadraticForm::one(n),
            QuadraticForm::from_terms(n, &[(2 * k, 2 * k + 1)], &[], false)?,
        ];
        terms = multiply(&terms, &factors);
    }
    CharacterSum::new(n, terms)
}

/// Writes `2^q` as at most `4^r` linear characters, `r` the Witt rank of `q`.
pub fn expand_character(q: &QuadraticForm) -> CharacterSum {
    let d = witt_decompose(q);
    let mut terms = vec![d.residual.to_quadratic()];
    for (a, b) in &d.pairs {
        terms = multiply(&terms, &pair_as_linear_characters(a, b));
    }
    CharacterSum { n: q.n(), terms }
}

/// Writes `2^q` as at most `4^c` full-rank characters, `c = n/2 - rank(q)`.
///
/// The decomposition's pair forms are completed to a basis with standard
/// vectors `m1..m2c`. With `M = m1 m2 + ... + m(2c-1) m(2c)`,
/// `2^q = 2^(q+M) * 2^M`, where `q + M` has full rank and `2^M` expands into
/// `4^c` linear characters.
pub fn expand_to_full_rank(q: &QuadraticForm) -> Result<CharacterSum> {
    let n = q.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "full rank needs even n, got {n}"
        )));
    }
    let d = witt_decompose(q);
    if d.rank() == n / 2 {
        return CharacterSum::new(n, vec![*q]);
    }
    let pair_vectors: Vec<u16> = d
        .pairs
        .iter()
        .flat_map(|(a, b)| [a.coeffs(), b.coeffs()])
        .collect();
    let extra = complete_basis(&pair_vectors, n);
    if extra.len() != n - pair_vectors.len() {
        return Err(Error::Internal(
            "decomposition forms are not independent".into(),
        ));
    }
    let mut base = *q;
    let mut factors_per_pair = Vec::new();
    for chunk in extra.chunks(2) {
        let a = LinearForm::new(n, chunk[0], false)?;
        let b = LinearForm::new(n, chunk[1], false)?;
        base = base.add(&a.mul(&b)?)?;
        factors_per_pair.push(pair_as_linear_characters(&a, &b));
    }
    let mut terms = vec![base];
    for factors in &factors_per_pair {
        terms = multiply(&terms, factors);
    }
    CharacterSum::new(n, terms)
}

/// Multiplies the sum by `2^r`, i.e. adds `r` to every exponent.
pub fn shift_sum(s: &CharacterSum, r: &QuadraticForm) -> Result<CharacterSum> {
    check_dims(s.n, r.n())?;
    let terms = s
        .terms
        .iter()
        .map(|t| t.add(r))
        .collect::<Result<Vec<_>>>()?;
    CharacterSum::new(s.n, terms)
}

/// Whether `w^2 * support >= 2^n` for a function known to have 2-weight at most `w`.
pub fn check_tradeoff(t: &FunctionTable, w: u64) -> bool {
    let lhs = u128::from(w) * u128::from(w) * u128::from(t.support());
    lhs >= 1u128 << t.n()
}

/// Multilinear polynomial over Z3; coefficient index is the monomial's
/// variable set as a bit mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    n: usize,
    coeffs: Vec<u8>,
}

impl MultilinearPoly {
    pub fn new(n: usize, coeffs: Vec<u8>) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::OutOfRange(format!("variable count {n}")));
        }
        if coeffs.len() != 1 << n {
            return Err(Error::InputShape(format!(
                "{} coefficients for n = {n}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c > 2) {
            return Err(Error::InputShape("coefficient outside Z3".into()));
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, monomial: usize) -> u8 {
        self.coeffs[monomial]
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Largest monomial size with a nonzero coefficient; 0 for constants and
    /// for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(m, _)| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Values on all of `{0,1}^n` (subset-sum transform).
    pub fn to_table(&self) -> FunctionTable {
        let mut v = self.coeffs.clone();
        for bit in 0..self.n {
            let step = 1 << bit;
            for x in 0..v.len() {
                if x & step != 0 {
                    v[x] = (v[x] + v[x ^ step]) % 3;
                }
            }
        }
        FunctionTable::from_values(self.n, &v).expect("values in Z3")
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut monomials: Vec<usize> = (0..self.coeffs.len())
            .filter(|&m| self.coeffs[m] != 0)
            .collect();
        if monomials.is_empty() {
            return f.write_str("0");
        }
        monomials.sort_by_key(|&m| (m.count_ones(), m.reverse_bits()));
        let parts: Vec<String> = monomials
            .into_iter()
            .map(|m| {
                let vars: String = (0..self.n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| format!("x{}", i + 1))
                    .collect();
                match (self.coeffs[m], vars.is_empty()) {
                    (c, true) => c.to_string(),
                    (1, false) => vars,
                    (c, false) => format!("{c}{vars}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The unique multilinear polynomial agreeing with `t` on `{0,1}^n`
/// (Möbius inversion over the subset lattice).
pub fn interpolate(t: &FunctionTable) -> MultilinearPoly {
    let mut c = t.values();
    for bit in 0..t.n() {
        let step = 1 << bit;
        for x in 0..c.len() {
            if x & step != 0 {
                c[x] = (c[x] + 3 - c[x ^ step]) % 3;
            }
        }
    }
    MultilinearPoly {
        n: t.n(),
        coeffs: c,
    }
}

pub fn poly_degree(p: &MultilinearPoly) -> usize {
    p.degree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::witt_rank;
    use crate::table::and_table;

    fn f(s: &str, n: usize) -> QuadraticForm {
        QuadraticForm::parse(s, n).unwrap()
    }

    #[test]
    fn character_tables() {
        assert_eq!(
            character_table(&QuadraticForm::zero(3)).to_string(),
            "11111111"
        );
        assert_eq!(character_table(&f("x1", 1)).to_string(), "12");
        let t = character_table(&f("x1x2+x3", 4));
        assert_eq!(t.support(), 16);
    }

    #[test]
    fn sum_table_examples() {
        assert!(sum_table(&CharacterSum::empty(4)).is_zero());
        let q = f("x1x2+x3", 4);
        let s = CharacterSum::new(4, vec![q, q.complement()]).unwrap();
        assert!(sum_table(&s).is_zero());
        let witness = CharacterSum::parse("0 ; x1x2+1 ; x3x4+1 ; x1x2+x3x4", 4).unwrap();
        assert_eq!(sum_table(&witness), and_table(4).unwrap());
        assert_eq!(witness.to_string(), "0 ; x1x2+1 ; x3x4+1 ; x1x2+x3x4");
        assert_eq!(CharacterSum::parse("", 3).unwrap().weight(), 0);
    }

    #[test]
    fn product_construction() {
        let s4 = and_product_construction(4).unwrap();
        let mut got: Vec<String> = s4.terms().iter().map(ToString::to_string).collect();
        got.sort();
        let mut want = vec!["0", "x1x2+1", "x3x4+1", "x1x2+x3x4"];
        want.sort();
        assert_eq!(got, want);
        for n in [2, 4, 6, 8] {
            let s = and_product_construction(n).unwrap();
            assert_eq!(s.weight(), 1 << (n / 2));
            assert_eq!(sum_table(&s), and_table(n).unwrap());
        }
        assert!(and_product_construction(5).is_err());
    }

    #[test]
    fn table_two_rows() {
        let s = expand_character(&f("x1x2", 2));
        let mut got: Vec<String> = s.terms().iter().map(ToString::to_string).collect();
        got.sort();
        // pair (x2, x1) from the derivative rule
        let mut want = vec!["1", "x2+1", "x1+1", "x1+x2"];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(sum_table(&s), character_table(&f("x1x2", 2)));
    }

    #[test]
    fn expansion_bounds() {
        let q = f("x1x2+x3x4", 4);
        let s = expand_character(&q);
        assert!(s.is_linear());
        assert!(s.weight() <= 16);
        assert_eq!(sum_table(&s), character_table(&q));
        let lin = f("x2+1", 4);
        assert_eq!(expand_character(&lin).terms(), &[lin]);

        let q = f("x1x2+x3x4", 6);
        let s = expand_to_full_rank(&q).unwrap();
        assert!(s.weight() <= 4);
        assert!(s.terms().iter().all(|t| witt_rank(t) == 3));
        assert_eq!(sum_table(&s), character_table(&q));

        let z = QuadraticForm::zero(4);
        let s = expand_to_full_rank(&z).unwrap();
        assert!(s.weight() <= 16);
        assert!(s.terms().iter().all(|t| witt_rank(t) == 2));
        assert_eq!(sum_table(&s), FunctionTable::constant(4, 1));

        let full = f("x1x3+x2x4+x1", 4);
        assert_eq!(expand_to_full_rank(&full).unwrap().terms(), &[full]);
        assert!(expand_to_full_rank(&f("x1", 3)).is_err());
    }

    #[test]
    fn shifts() {
        let w = and_product_construction(4).unwrap();
        assert_eq!(shift_sum(&w, &QuadraticForm::zero(4)).unwrap(), w);
        let doubled = sum_table(&shift_sum(&w, &QuadraticForm::one(4)).unwrap());
        assert_eq!(doubled.to_string(), "0000000000000002");
        let r = f("x1x4+x2x3+x2+1", 4);
        let shifted = sum_table(&shift_sum(&w, &r).unwrap());
        assert_eq!(shifted.support(), 1);
        assert_eq!(shifted, sum_table(&w).mul(&character_table(&r)).unwrap());
    }

    #[test]
    fn interpolation_examples() {
        let p = interpolate(&and_table(4).unwrap());
        assert_eq!(p.to_string(), "x1x2x3x4");
        assert_eq!(poly_degree(&p), 4);
        let p = interpolate(&FunctionTable::constant(3, 1));
        assert_eq!(p.to_string(), "1");
        assert_eq!(p.degree(), 0);
        let p = interpolate(&character_table(&f("x1", 1)));
        assert_eq!(p.to_string(), "1 + x1");
        assert_eq!(p.degree(), 1);
        let t = character_table(&f("x1x2+x3", 3));
        assert_eq!(interpolate(&t).to_table(), t);
    }

    #[test]
    fn tradeoff_examples() {
        assert!(check_tradeoff(&character_table(&f("x1x2", 6)), 1));
        assert!(check_tradeoff(&and_table(4).unwrap(), 4));
        assert!(!check_tradeoff(&and_table(4).unwrap(), 3));
    }
}
