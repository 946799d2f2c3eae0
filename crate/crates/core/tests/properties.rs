use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revsynth_core::{
    build_atlas, census, decompose, embed, expand, is_realizable, min_ancilla, reduce,
    synthesize, verify_embedding, BoolMapping, Circuit, Gate, Parity, Permutation, StateVector,
};

fn permutation(m: usize) -> impl Strategy<Value = Permutation> {
    Just((0..1u32 << m).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(move |t| Permutation::new(m, t).unwrap())
}

fn mapping(max_n: usize) -> impl Strategy<Value = BoolMapping> {
    (1..=max_n).prop_flat_map(|n| {
        let size = 1u32 << n;
        (Just(n), 1..=size).prop_flat_map(move |(n, image)| {
            proptest::collection::vec(0..image, size as usize)
                .prop_map(move |t| BoolMapping::new(n, t).unwrap())
        })
    })
}

fn circuit(max_lines: usize) -> impl Strategy<Value = Circuit> {
    (1..=max_lines).prop_flat_map(|m| {
        let gate = (0..m, 0..1u32 << m)
            .prop_map(|(t, c)| Gate::from_mask(t, c & !(1 << t)).unwrap());
        (Just(m), 0..=m, proptest::collection::vec(gate, 0..30))
            .prop_map(|(m, s, gates)| Circuit::with_gates(m, s, gates).unwrap())
    })
}

proptest! {
    #[test]
    fn reduce_undoes_expand(n in 1usize..12, k in 0usize..8, raw in any::<u32>()) {
        let x = StateVector::new(n, raw & ((1 << n) - 1)).unwrap();
        prop_assert_eq!(reduce(expand(x, k).unwrap(), k).unwrap(), x);
    }

    #[test]
    fn parity_is_multiplicative(m in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a: Vec<u32> = (0..1u32 << m).collect();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let p = Permutation::new(m, a).unwrap();
        let q = Permutation::new(m, b).unwrap();
        prop_assert_eq!(p.compose(&q).unwrap().parity(), p.parity().combine(q.parity()));
    }

    #[test]
    fn moving_points_vanish_only_on_identity(p in permutation(3)) {
        prop_assert_eq!(p.moving_points() == 0, p.is_identity());
    }

    #[test]
    fn realizability_is_threshold(f in mapping(6), q in 0usize..8) {
        prop_assert_eq!(is_realizable(&f, q), q >= min_ancilla(&f));
        if f.is_bijective() {
            prop_assert_eq!(census(&f).d, 1);
        }
        prop_assert_eq!(census(&f).sizes.iter().sum::<u32>(), 1 << f.n());
    }

    #[test]
    fn embedding_verifies_and_is_deterministic(f in mapping(7), extra in 0usize..2) {
        let q = min_ancilla(&f) + extra;
        let e = embed(&f, q).unwrap();
        prop_assert!(verify_embedding(&f, &e));
        prop_assert_eq!(&e, &embed(&f, q).unwrap());
        let starts: std::collections::BTreeSet<u32> = e.chains.iter().map(|c| c.start).collect();
        prop_assert_eq!(starts.len(), e.chains.len());
    }

    #[test]
    fn circuit_text_round_trips(c in circuit(10)) {
        let text = c.serialize();
        let back = Circuit::parse(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.serialize(), text);
        prop_assert!(c.depth() <= c.complexity());
    }

    #[test]
    fn truth_table_round_trips(f in mapping(6)) {
        let text = f.serialize();
        prop_assert_eq!(BoolMapping::parse(&text).unwrap().serialize(), text);
    }

    #[test]
    fn synthesis_reproduces_any_three_line_permutation(p in permutation(3)) {
        let c = decompose(&synthesize(&p).unwrap()).unwrap();
        prop_assert_eq!(c.permutation(), p);
    }
}

#[test]
fn random_even_permutations_on_four_to_six_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for m in 4..=6usize {
        for _ in 0..400 {
            let mut table: Vec<u32> = (0..1u32 << m).collect();
            table.shuffle(&mut rng);
            let mut p = Permutation::new(m, table.clone()).unwrap();
            if p.parity() == Parity::Odd {
                table.swap(1, 2);
                p = Permutation::new(m, table).unwrap();
            }
            let generalized = synthesize(&p).unwrap();
            assert!(generalized.max_controls() < m - 1, "m - 1 controls on {m} lines");
            let c = decompose(&generalized).unwrap();
            assert!(c.is_omega2());
            assert_eq!(c.permutation(), p);
        }
    }
}

#[test]
fn decomposition_is_exact_for_every_gate_up_to_eight_lines() {
    for m in 3..=8usize {
        for target in 0..m {
            for controls in 0u32..1 << m {
                let k = controls.count_ones() as usize;
                if controls & (1 << target) != 0 || k + 2 > m && k >= 3 {
                    continue;
                }
                let c = Circuit::with_gates(m, m, vec![Gate::from_mask(target, controls).unwrap()])
                    .unwrap();
                let d = decompose(&c).unwrap();
                assert!(d.is_omega2());
                assert_eq!(d.permutation(), c.permutation());
            }
        }
    }
}

#[test]
fn atlas_distances_satisfy_triangle_property() {
    let atlas = build_atlas(3).unwrap();
    for (p, d) in atlas.entries() {
        for g in atlas.generators() {
            let moved = Permutation::new(3, p.table().iter().map(|&y| g.apply(y)).collect())
                .unwrap();
            let dm = atlas.distance(&moved).unwrap();
            assert!(dm <= d + 1 && d <= dm + 1);
        }
    }
}

#[test]
fn two_line_mappings_match_oracle_with_one_ancilla() {
    let atlas = build_atlas(3).unwrap();
    for code in 0..256u32 {
        let table = (0..4).map(|i| (code >> (2 * i)) & 3).collect();
        let f = BoolMapping::new(2, table).unwrap();
        assert_eq!(
            atlas.confirm_assertion1(&f, 1).unwrap(),
            !is_realizable(&f, 1),
            "{:?}",
            f.table()
        );
    }
}
