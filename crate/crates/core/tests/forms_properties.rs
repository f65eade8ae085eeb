use std::collections::BTreeMap;

use charsum::{
    family_support_profile, normal_form_list, random_form, witt_decompose, witt_normal_form,
    witt_rank, LinearForm, QuadraticForm,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn form(n: usize) -> impl Strategy<Value = QuadraticForm> {
    let width = QuadraticForm::code_width(n);
    (0..1u64 << width).prop_map(move |c| QuadraticForm::from_code(n, c).unwrap())
}

fn sized_form() -> impl Strategy<Value = QuadraticForm> {
    prop_oneof![form(4), form(5), form(6), form(8)]
}

// Algebraic normal form of a boolean function given by its values.
fn anf_form(n: usize, values: &[bool]) -> QuadraticForm {
    let mut c: Vec<bool> = values.to_vec();
    for i in 0..n {
        for x in 0..c.len() {
            if x >> i & 1 == 1 {
                c[x] ^= c[x ^ 1 << i];
            }
        }
    }
    let mut pairs = Vec::new();
    let mut linear = Vec::new();
    for (m, &bit) in c.iter().enumerate().skip(1) {
        if !bit {
            continue;
        }
        let vars: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
        match vars.as_slice() {
            [i] => linear.push(*i),
            [i, j] => pairs.push((*i, *j)),
            _ => panic!("degree above 2 after a linear substitution"),
        }
    }
    QuadraticForm::from_terms(n, &pairs, &linear, c[0]).unwrap()
}

// q(A x + b) for an invertible matrix given by its column images.
fn substitute(q: &QuadraticForm, cols: &[u16], shift: u16) -> QuadraticForm {
    let n = q.n();
    let values: Vec<bool> = (0..1usize << n)
        .map(|x| {
            let y = (0..n)
                .filter(|&i| x >> i & 1 == 1)
                .fold(shift, |acc, i| acc ^ cols[i]);
            q.eval_index(usize::from(y))
        })
        .collect();
    anf_form(n, &values)
}

fn invertible(n: usize) -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(1u16..(1 << n), n).prop_filter("invertible", |cols| {
        charsum::forms::gf2_rank(cols) == cols.len()
    })
}

proptest! {
    #[test]
    fn decomposition_recomposes(q in sized_form()) {
        let d = witt_decompose(&q);
        prop_assert_eq!(d.recompose(), q);
        prop_assert!(2 * d.rank() <= q.n());
    }

    #[test]
    fn decomposition_forms_are_independent(q in sized_form()) {
        let d = witt_decompose(&q);
        let v = d.basis_vectors();
        prop_assert_eq!(charsum::forms::gf2_rank(&v), v.len());
    }

    #[test]
    fn rank_ignores_affine_part(q in form(6), coeffs in 0u16..64, c in any::<bool>()) {
        let l = LinearForm::new(6, coeffs, c).unwrap();
        prop_assert_eq!(witt_rank(&q.add_linear(&l).unwrap()), witt_rank(&q));
        prop_assert_eq!(witt_rank(&q.pure_part()), witt_rank(&q));
    }

    #[test]
    fn rank_invariant_under_change_of_basis(
        (q, cols) in (form(5), invertible(5)),
        shift in 0u16..32,
    ) {
        let moved = substitute(&q, &cols, shift);
        prop_assert_eq!(witt_rank(&moved), witt_rank(&q));
    }

    #[test]
    fn normal_form_preserves_rank_and_listed(q in sized_form()) {
        let nf = witt_normal_form(&q);
        prop_assert_eq!(witt_rank(&nf), witt_rank(&q));
        prop_assert!(normal_form_list(q.n()).unwrap().contains(&nf));
    }

    #[test]
    fn product_of_linear_forms_evaluates(a in 0u16..64, b in 0u16..64, ca in any::<bool>(), cb in any::<bool>()) {
        let la = LinearForm::new(6, a, ca).unwrap();
        let lb = LinearForm::new(6, b, cb).unwrap();
        let p = la.mul(&lb).unwrap();
        for x in 0..64 {
            prop_assert_eq!(p.eval_index(x), la.eval_index(x) && lb.eval_index(x));
        }
    }

    #[test]
    fn code_and_text_round_trip(q in sized_form()) {
        prop_assert_eq!(QuadraticForm::from_code(q.n(), q.to_code().unwrap()).unwrap(), q);
        prop_assert_eq!(QuadraticForm::parse(&q.to_string(), q.n()).unwrap(), q);
    }
}

#[test]
fn normal_forms_cover_every_form_at_six() {
    let list = normal_form_list(6).unwrap();
    assert_eq!(list.len(), 14);
    let mut hits = BTreeMap::new();
    for code in 0..1u64 << QuadraticForm::code_width(6) {
        let q = QuadraticForm::from_code(6, code).unwrap();
        let nf = witt_normal_form(&q);
        assert!(list.contains(&nf), "{q} -> {nf}");
        *hits.entry(nf.to_string()).or_insert(0u64) += 1;
    }
    assert_eq!(hits.len(), 14);
    assert_eq!(hits["x1x2+x3x4+x5x6"], 888_832);
    assert_eq!(hits["0"], 1);
}

fn brute_profile(q: &QuadraticForm) -> BTreeMap<u64, u64> {
    let n = q.n();
    let mut h = BTreeMap::new();
    for coeffs in 0..1u16 << n {
        for c in [false, true] {
            let l = LinearForm::new(n, coeffs, c).unwrap();
            *h.entry(q.add_linear(&l).unwrap().support()).or_insert(0) += 1;
        }
    }
    h
}

#[test]
fn support_laws_exhaustive_at_four_and_five() {
    for n in [4, 5] {
        let pair_count = n * (n - 1) / 2;
        for adj_code in 0..1u64 << pair_count {
            // pure forms only: pairs start after the constant and linear bits
            let pure = QuadraticForm::from_code(n, adj_code << (n + 1)).unwrap();
            let r = witt_rank(&pure);
            let p = family_support_profile(n, r).unwrap();
            let mut expected = BTreeMap::new();
            for s in [p.high, p.low, p.middle] {
                if s.count > 0 {
                    *expected.entry(s.support).or_insert(0) += s.count;
                }
            }
            assert_eq!(brute_profile(&pure), expected, "n={n} {pure}");
            if r >= 1 {
                assert_eq!(p.high.count, 1 << (2 * r));
                assert_eq!(p.low.count, 1 << (2 * r));
                assert_eq!(p.high.support, (1 << (n - 1)) + (1 << (n - r - 1)));
                assert_eq!(p.low.support, (1 << (n - 1)) - (1 << (n - r - 1)));
            }
        }
    }
}

#[test]
fn nonconstant_linear_forms_are_balanced() {
    for n in [4, 5, 6] {
        for coeffs in 1..1u16 << n {
            for c in [false, true] {
                let l = LinearForm::new(n, coeffs, c).unwrap();
                assert_eq!(l.to_quadratic().support(), 1 << (n - 1));
            }
        }
    }
}

#[test]
fn random_form_bits_are_uniform() {
    // chi-square over each of the 22 code bits at n = 6, 1 degree of freedom
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let draws = 20_000u64;
    let width = QuadraticForm::code_width(6);
    let mut ones = vec![0u64; width];
    for _ in 0..draws {
        let code = random_form(6, &mut rng).unwrap().to_code().unwrap();
        for (b, count) in ones.iter_mut().enumerate() {
            *count += code >> b & 1;
        }
    }
    let half = draws as f64 / 2.0;
    let chi: f64 = ones
        .iter()
        .map(|&o| {
            let d = o as f64 - half;
            2.0 * d * d / half
        })
        .sum();
    // 22 degrees of freedom: the 0.9999 quantile is about 52.6
    assert!(chi < 52.6, "chi-square {chi}");
}
