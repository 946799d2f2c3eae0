//! Preimage census and the minimal ancilla count of a mapping.

use crate::bitspace::{BoolMapping, Parity};

/// Preimage sizes `|A_y|` for every output `y`, and their maximum `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageCensus {
    pub n: usize,
    pub sizes: Vec<u32>,
    pub d: u32,
}

impl PreimageCensus {
    pub fn image_size(&self) -> usize {
        self.sizes.iter().filter(|&&s| s > 0).count()
    }
}

pub fn census(f: &BoolMapping) -> PreimageCensus {
    let mut sizes = vec![0u32; f.table().len()];
    for &y in f.table() {
        sizes[y as usize] += 1;
    }
    let d = sizes.iter().copied().max().unwrap_or(0);
    PreimageCensus {
        n: f.n(),
        sizes,
        d,
    }
}

/// `ceil(log2 d)` for `d >= 1`.
pub fn ceil_log2(d: u32) -> usize {
    debug_assert!(d >= 1);
    (32 - (d - 1).leading_zeros()) as usize
}

/// Smallest number of zero-initialized extra lines with which a
/// NOT/CNOT/Toffoli circuit can realize `f`.
///
/// Non-bijective mappings need `ceil(log2 d)` lines: fewer cannot separate
/// the `d` preimages of the most popular output, and that many always admit
/// an even completion (see [`crate::embed`]). Bijections need none unless
/// they are odd on four or more lines, where one extra line makes room for
/// a parity-fixing transposition.
pub fn min_ancilla(f: &BoolMapping) -> usize {
    match f.to_permutation() {
        Some(p) => {
            if f.n() < 4 || p.parity() == Parity::Even {
                0
            } else {
                1
            }
        }
        None => ceil_log2(census(f).d),
    }
}

/// Whether `f` is realizable with `q` ancilla lines.
pub fn is_realizable(f: &BoolMapping, q: usize) -> bool {
    q >= min_ancilla(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitspace::Permutation;

    /// `f(x1, x2) = <x1 & x2, x2>`.
    fn and_mapping() -> BoolMapping {
        BoolMapping::from_fn(2, |x| {
            let x1 = x & 1;
            let x2 = (x >> 1) & 1;
            (x1 & x2) | (x2 << 1)
        })
        .unwrap()
    }

    #[test]
    fn census_of_identity_and_constant() {
        let c = census(&BoolMapping::identity(2).unwrap());
        assert_eq!(c.sizes, vec![1, 1, 1, 1]);
        assert_eq!(c.d, 1);

        let c = census(&BoolMapping::constant(2, 0).unwrap());
        assert_eq!(c.sizes, vec![4, 0, 0, 0]);
        assert_eq!(c.d, 4);
    }

    #[test]
    fn census_of_and_mapping_matches_enumeration() {
        let f = and_mapping();
        let mut expected = [0u32; 4];
        for x1 in 0..2u32 {
            for x2 in 0..2u32 {
                let y = (x1 & x2) | (x2 << 1);
                expected[y as usize] += 1;
            }
        }
        let c = census(&f);
        assert_eq!(c.sizes, expected.to_vec());
        // 00 -> 2, 10 -> 0, 01 -> 1, 11 -> 1 (x_1 written first)
        assert_eq!(c.sizes, vec![2, 0, 1, 1]);
        assert_eq!(c.d, 2);
        assert_eq!(c.sizes.iter().sum::<u32>(), 4);
    }

    #[test]
    fn ceil_log2_values() {
        let expected = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (256, 8)];
        for (d, q) in expected {
            assert_eq!(ceil_log2(d), q, "d = {d}");
        }
    }

    #[test]
    fn min_ancilla_examples() {
        assert_eq!(min_ancilla(&BoolMapping::constant(2, 0).unwrap()), 2);
        assert_eq!(min_ancilla(&BoolMapping::identity(5).unwrap()), 0);
        assert_eq!(min_ancilla(&and_mapping()), 1);

        let swap = Permutation::transposition(4, 0, 1).unwrap();
        assert_eq!(swap.parity(), Parity::Odd);
        let f = BoolMapping::new(4, swap.into_table()).unwrap();
        assert_eq!(min_ancilla(&f), 1);

        // Odd bijections below four lines need nothing extra.
        let f = BoolMapping::new(3, Permutation::transposition(3, 0, 1).unwrap().into_table())
            .unwrap();
        assert_eq!(min_ancilla(&f), 0);
    }

    #[test]
    fn realizability_examples() {
        assert!(!is_realizable(&BoolMapping::constant(2, 0).unwrap(), 1));
        assert!(is_realizable(&BoolMapping::constant(3, 5).unwrap(), 3));
        let odd = BoolMapping::new(4, Permutation::transposition(4, 3, 9).unwrap().into_table())
            .unwrap();
        assert!(!is_realizable(&odd, 0));
        assert!(is_realizable(&odd, 1));
    }

    #[test]
    fn q_equal_n_realizes_every_small_mapping() {
        for n in 1..=2usize {
            let size = 1usize << n;
            let total = size.pow(size as u32);
            for code in 0..total {
                let mut c = code;
                let table: Vec<u32> = (0..size)
                    .map(|_| {
                        let v = (c % size) as u32;
                        c /= size;
                        v
                    })
                    .collect();
                let f = BoolMapping::new(n, table).unwrap();
                assert!(is_realizable(&f, n));
                assert_eq!(is_realizable(&f, 0), f.is_bijective());
            }
        }
    }
}
