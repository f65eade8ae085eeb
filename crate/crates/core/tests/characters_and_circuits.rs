use charsum::search::{bfs_min_weight, Generators, SumSampler};
use charsum::{
    and_product_construction, and_table, character_table, characters_to_depth2,
    characters_to_depth3, check_tradeoff, depth2_to_characters, depth3_to_characters,
    expand_character, expand_to_full_rank, interpolate, poly_degree, random_form, shift_sum,
    sum_table, witt_rank, CharacterSum, FunctionTable, MultilinearPoly, QuadraticForm,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn accepts_where_zero(c: &charsum::Circuit, s: &CharacterSum) -> bool {
    let t = sum_table(s);
    (0..1usize << s.n()).all(|x| c.evaluate_index(x, s.n()).unwrap() == (t.get(x) == 0))
}

#[test]
fn expansion_exhaustive_at_four() {
    for code in 0..1u64 << QuadraticForm::code_width(4) {
        let q = QuadraticForm::from_code(4, code).unwrap();
        let r = witt_rank(&q);
        let target = character_table(&q);

        let lin = expand_character(&q);
        assert!(lin.is_linear());
        assert!(lin.weight() <= 1 << (2 * r));
        assert_eq!(sum_table(&lin), target, "{q}");

        let full = expand_to_full_rank(&q).unwrap();
        assert!(full.weight() <= 1 << (2 * (2 - r)));
        assert!(full.terms().iter().all(|t| witt_rank(t) == 2));
        assert_eq!(sum_table(&full), target, "{q}");
    }
}

#[test]
fn expansion_random_at_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let q = random_form(6, &mut rng).unwrap();
        let r = witt_rank(&q);
        let target = character_table(&q);
        let lin = expand_character(&q);
        assert!(lin.weight() <= 1 << (2 * r));
        assert_eq!(sum_table(&lin), target);
        let full = expand_to_full_rank(&q).unwrap();
        assert!(full.weight() <= 1 << (2 * (3 - r)));
        assert_eq!(sum_table(&full), target);
    }
}

#[test]
fn shifting_multiplies_by_a_character() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let s = CharacterSum::new(
            5,
            (0..4).map(|_| random_form(5, &mut rng).unwrap()).collect(),
        )
        .unwrap();
        let r = random_form(5, &mut rng).unwrap();
        let shifted = shift_sum(&s, &r).unwrap();
        assert_eq!(
            sum_table(&shifted),
            sum_table(&s).mul(&character_table(&r)).unwrap()
        );
    }
}

#[test]
fn product_construction_is_and() {
    for n in [2, 4, 6, 8, 10] {
        let s = and_product_construction(n).unwrap();
        assert_eq!(s.weight(), 1 << (n / 2));
        assert_eq!(sum_table(&s), and_table(n).unwrap());
    }
}

#[test]
fn and_has_full_degree() {
    for n in 1..=8 {
        let p = interpolate(&and_table(n).unwrap());
        assert_eq!(poly_degree(&p), n);
        assert_eq!(p.to_table(), and_table(n).unwrap());
    }
}

#[test]
fn nonzero_polynomials_respect_the_degree_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=4usize {
        for d in 0..=n {
            let top: Vec<usize> = (0..1usize << n)
                .filter(|m| m.count_ones() as usize == d)
                .collect();
            for _ in 0..10_000 {
                let mut coeffs: Vec<u8> = (0..1usize << n)
                    .map(|m| {
                        if m.count_ones() as usize <= d {
                            rng.random_range(0..3)
                        } else {
                            0
                        }
                    })
                    .collect();
                let lead = top[rng.random_range(0..top.len())];
                coeffs[lead] = rng.random_range(1..3);
                let p = MultilinearPoly::new(n, coeffs).unwrap();
                assert_eq!(poly_degree(&p), d);
                let t = p.to_table();
                assert!(t.support() >= 1 << (n - d), "n={n} d={d} {p}");
                assert_eq!(interpolate(&t), p);
            }
        }
    }
}

#[test]
fn tradeoff_holds_on_constructed_functions() {
    for w in 1..=4u64 {
        let sampler = SumSampler::new(6, w as usize, 100 + w).unwrap();
        for i in 0..20_000 {
            let t = sampler.table(i);
            if !t.is_zero() {
                assert!(check_tradeoff(&t, w), "w={w} table {t}");
            }
        }
    }
}

#[test]
fn bfs_matches_bounded_enumeration_at_three() {
    // reference: layered closure over sums of k characters, kept as tables
    let n = 3;
    let chars: Vec<FunctionTable> = (0..1u64 << QuadraticForm::code_width(n))
        .map(|c| character_table(&QuadraticForm::from_code(n, c).unwrap()))
        .collect();
    let mut reach: Vec<Vec<FunctionTable>> = vec![vec![FunctionTable::zeros(n)]];
    let mut seen = std::collections::HashSet::new();
    seen.insert(FunctionTable::zeros(n).to_string());
    while !reach.last().unwrap().is_empty() {
        let mut next = Vec::new();
        for t in reach.last().unwrap() {
            for c in &chars {
                let s = t.add(c).unwrap();
                if seen.insert(s.to_string()) {
                    next.push(s);
                }
            }
        }
        reach.push(next);
    }
    let targets = [
        and_table(3).unwrap(),
        FunctionTable::parse("12000000").unwrap(),
        FunctionTable::parse("10000001").unwrap(),
    ];
    for t in targets {
        let expected = reach
            .iter()
            .position(|level| level.contains(&t))
            .expect("every table is reachable");
        let w = bfs_min_weight(&t, Generators::Quadratic).unwrap();
        assert_eq!(w.weight, expected, "{t}");
        assert!(w.verify());
    }
}

fn sum_strategy() -> impl Strategy<Value = CharacterSum> {
    (1usize..=4, any::<u64>(), 0usize..=8).prop_map(|(n, seed, w)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CharacterSum::new(
            n,
            (0..w).map(|_| random_form(n, &mut rng).unwrap()).collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn depth3_round_trip_preserves_acceptance(s in sum_strategy()) {
        let c = characters_to_depth3(&s).unwrap();
        prop_assert!(c.depth() <= 3);
        prop_assert!(accepts_where_zero(&c, &s));
        let back = depth3_to_characters(&c).unwrap();
        prop_assert_eq!(sum_table(&back), sum_table(&s));
        prop_assert_eq!(charsum::Circuit::parse_netlist(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn depth2_round_trip_preserves_acceptance(s in sum_strategy()) {
        let lin = CharacterSum::new(
            s.n(),
            s.terms().iter().flat_map(|q| expand_character(q).terms().to_vec()).collect(),
        ).unwrap();
        let c = characters_to_depth2(&lin).unwrap();
        prop_assert!(c.depth() <= 2);
        prop_assert!(accepts_where_zero(&c, &s));
        let back = depth2_to_characters(&c).unwrap();
        prop_assert!(back.is_linear());
        prop_assert_eq!(sum_table(&back), sum_table(&s));
    }
}
