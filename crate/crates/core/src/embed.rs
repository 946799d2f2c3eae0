//! Completion of a mapping `f: Z_2^n -> Z_2^n` to an even permutation on
//! `Z_2^{n+q}`.
//!
//! The inputs `X = {expand(x, q)}` are sent to `f(x)` tagged with distinct
//! ancilla patterns, one preimage of each output keeping the all-zero tag so
//! that its image stays inside `X`. The images falling outside `X` (the set
//! `Y'`) are the ends of chains starting at the points of `X` that have no
//! preimage in `X`; sending every chain end back to its start closes the
//! chains into cycles. Everything else is fixed. If the result is odd on four
//! or more lines, one chain is lengthened by a spare point, or two chains are
//! merged, which flips the parity while adding at most one moving point.

use std::fmt::Write as _;

use crate::analysis::min_ancilla;
use crate::bitspace::{
    check_width, format_bits, parse_bits, strip_comment, BoolMapping, Parity, Permutation,
    MAX_WIDTH,
};
use crate::error::{Error, Result};

const UNSET: u32 = u32::MAX;

/// One chain of the completion: `f_h^length(start) = end`, `start` in `X`
/// with no preimage in `X`, `end` outside `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chain {
    pub start: u32,
    pub end: u32,
    pub length: usize,
}

/// How an odd completion was made even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityFix {
    None,
    /// `f` is a bijection; the two given points outside `X` are swapped.
    Transposition { a: u32, b: u32 },
    /// Single chain: `end -> z -> start` instead of `end -> start`.
    ZInsertion { z: u32 },
    /// Two chains merged: `end_1 -> start_2`, `end_2 -> start_1`.
    CrossLink { end_1: u32, end_2: u32 },
}

impl std::fmt::Display for ParityFix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ParityFix::None => f.write_str("none"),
            ParityFix::Transposition { a, b } => write!(f, "transposition {a} {b}"),
            ParityFix::ZInsertion { z } => write!(f, "z_insertion {z}"),
            ParityFix::CrossLink { end_1, end_2 } => write!(f, "cross_link {end_1} {end_2}"),
        }
    }
}

/// An even completion `f_h` of a mapping together with its construction
/// report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub n: usize,
    pub q: usize,
    pub perm: Permutation,
    pub chains: Vec<Chain>,
    pub parity_fix: ParityFix,
    pub moving_count: usize,
}

impl Embedding {
    pub fn m(&self) -> usize {
        self.n + self.q
    }

    /// Permutation table file with the construction report as comments.
    pub fn serialize(&self) -> String {
        let m = self.m();
        let mut out = String::new();
        let _ = writeln!(out, "# embedding n {} q {}", self.n, self.q);
        for c in &self.chains {
            let _ = writeln!(
                out,
                "# chain start {} end {} length {}",
                format_bits(c.start, m),
                format_bits(c.end, m),
                c.length
            );
        }
        let _ = writeln!(out, "# parity_fix {}", self.fix_with_bits());
        let _ = writeln!(out, "# moving_points {}", self.moving_count);
        out.push_str(&serialize_permutation(&self.perm));
        out
    }

    fn fix_with_bits(&self) -> String {
        let m = self.m();
        match self.parity_fix {
            ParityFix::None => "none".to_string(),
            ParityFix::Transposition { a, b } => {
                format!("transposition {} {}", format_bits(a, m), format_bits(b, m))
            }
            ParityFix::ZInsertion { z } => format!("z_insertion {}", format_bits(z, m)),
            ParityFix::CrossLink { end_1, end_2 } => format!(
                "cross_link {} {}",
                format_bits(end_1, m),
                format_bits(end_2, m)
            ),
        }
    }
}

/// Writes `perm m <m>` followed by `<in> <out>` rows in binary.
pub fn serialize_permutation(p: &Permutation) -> String {
    let m = p.m();
    let mut out = String::with_capacity(12 + p.table().len() * (2 * m + 2));
    let _ = writeln!(out, "perm m {m}");
    for (x, &y) in p.table().iter().enumerate() {
        out.push_str(&format_bits(x as u32, m));
        out.push(' ');
        out.push_str(&format_bits(y, m));
        out.push('\n');
    }
    out
}

/// Reads a permutation table file; comment lines are ignored.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let mut m: Option<usize> = None;
    let mut table: Vec<u32> = Vec::new();
    let mut filled: Vec<bool> = Vec::new();
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last = lineno;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match m {
            None => {
                if parts.len() != 3 || parts[0] != "perm" || parts[1] != "m" {
                    return Err(Error::parse(lineno, "expected header `perm m <width>`"));
                }
                let width: usize = parts[2]
                    .parse()
                    .map_err(|_| Error::parse(lineno, "invalid width"))?;
                if width > MAX_WIDTH {
                    return Err(Error::parse(lineno, format!("width {width} exceeds {MAX_WIDTH}")));
                }
                m = Some(width);
                table = vec![UNSET; 1usize << width];
                filled = vec![false; 1usize << width];
            }
            Some(width) => {
                if parts.len() != 2 {
                    return Err(Error::parse(lineno, "expected `<in> <out>`"));
                }
                let x = parse_bits(parts[0], width).map_err(|e| Error::parse(lineno, e))?;
                let y = parse_bits(parts[1], width).map_err(|e| Error::parse(lineno, e))?;
                if std::mem::replace(&mut filled[x as usize], true) {
                    return Err(Error::parse(lineno, "input listed twice"));
                }
                table[x as usize] = y;
            }
        }
    }
    let m = m.ok_or_else(|| Error::parse(last.max(1), "missing header `perm m <width>`"))?;
    if filled.iter().any(|&f| !f) {
        return Err(Error::parse(last, format!("expected {} rows", 1usize << m)));
    }
    Permutation::new(m, table).map_err(|e| Error::parse(last, e.to_string()))
}

/// Output of the chain-closing step before any parity repair.
struct Closure {
    table: Vec<u32>,
    chains: Vec<Chain>,
    in_x_or_y: Vec<bool>,
}

/// Completes `f` to a permutation on `n + q` lines without repairing parity.
fn close_chains(f: &BoolMapping, q: usize) -> Closure {
    let n = f.n();
    let m = n + q;
    let x_size = 1usize << n;
    let mut table = vec![UNSET; 1usize << m];

    // Smallest preimage of each output keeps tag 0, later ones take 1, 2, ...
    let mut next_tag = vec![0u32; x_size];
    for x in 0..x_size {
        let y = f.apply(x as u32);
        let tag = next_tag[y as usize];
        next_tag[y as usize] += 1;
        debug_assert!((tag as usize) < (1usize << q));
        table[x] = y | (tag << n);
    }

    let mut has_preimage_in_x = vec![false; x_size];
    // Marks every point of X ∪ Y.
    let mut in_x_or_y = vec![false; 1usize << m];
    for x in 0..x_size {
        in_x_or_y[x] = true;
        let y = table[x] as usize;
        in_x_or_y[y] = true;
        if y < x_size {
            has_preimage_in_x[y] = true;
        }
    }

    let mut chains = Vec::new();
    for start in 0..x_size {
        if has_preimage_in_x[start] {
            continue;
        }
        let mut v = start;
        let mut length = 0;
        while v < x_size {
            v = table[v] as usize;
            length += 1;
        }
        chains.push(Chain {
            start: start as u32,
            end: v as u32,
            length,
        });
    }
    for c in &chains {
        table[c.end as usize] = c.start;
    }
    for (v, slot) in table.iter_mut().enumerate() {
        if *slot == UNSET {
            *slot = v as u32;
        }
    }
    Closure {
        table,
        chains,
        in_x_or_y,
    }
}

/// Completes `f` to an even permutation on `n + q` lines.
pub fn embed(f: &BoolMapping, q: usize) -> Result<Embedding> {
    let n = f.n();
    let m = n + q;
    check_width(m)?;
    let required = min_ancilla(f);
    if q < required {
        if q == 0 && f.is_bijective() {
            return Err(Error::OddPermutationNoAncilla { n });
        }
        return Err(Error::InsufficientAncilla { required, given: q });
    }

    let Closure {
        mut table,
        chains,
        in_x_or_y,
    } = close_chains(f, q);

    let mut parity_fix = ParityFix::None;
    if m >= 4 && Permutation::from_table_unchecked(m, table.clone()).parity() == Parity::Odd {
        let mut spare = (0..table.len() as u32).filter(|&v| !in_x_or_y[v as usize]);
        match chains.as_slice() {
            [] => {
                let a = spare.next().expect("q >= 1 leaves points outside X");
                let b = spare.next().expect("q >= 1 leaves two points outside X");
                table.swap(a as usize, b as usize);
                parity_fix = ParityFix::Transposition { a, b };
            }
            [only] => {
                let z = spare
                    .next()
                    .expect("|X ∪ Y| < 2^(n+q) whenever a chain exists");
                table[only.end as usize] = z;
                table[z as usize] = only.start;
                parity_fix = ParityFix::ZInsertion { z };
            }
            [first, second, ..] => {
                // chains are ordered by start, so these have the smallest starts
                table[first.end as usize] = second.start;
                table[second.end as usize] = first.start;
                parity_fix = ParityFix::CrossLink {
                    end_1: first.end,
                    end_2: second.end,
                };
            }
        }
    }

    let perm = Permutation::from_table_unchecked(m, table);
    let moving_count = perm.moving_points();
    Ok(Embedding {
        n,
        q,
        perm,
        chains,
        parity_fix,
        moving_count,
    })
}

/// Describes the first violated embedding property, if any.
pub fn embedding_violation(f: &BoolMapping, e: &Embedding) -> Option<String> {
    let n = f.n();
    if e.n != n {
        return Some(format!("embedding has n = {}, mapping has n = {n}", e.n));
    }
    let m = e.m();
    if e.perm.m() != m {
        return Some(format!("permutation width {} != n + q = {m}", e.perm.m()));
    }
    if let Err(err) = Permutation::new(m, e.perm.table().to_vec()) {
        return Some(format!("not a permutation: {err}"));
    }
    let low = (1u32 << n) - 1;
    for x in 0..1u32 << n {
        let got = e.perm.apply(x) & low;
        if got != f.apply(x) {
            return Some(format!(
                "input {} maps to {} but f gives {}",
                format_bits(x, n),
                format_bits(got, n),
                format_bits(f.apply(x), n)
            ));
        }
    }
    if m >= 4 && e.perm.parity() != Parity::Even {
        return Some("permutation is odd on four or more lines".to_string());
    }
    let moving = e.perm.moving_points();
    if moving != e.moving_count {
        return Some(format!(
            "recorded {} moving points, found {moving}",
            e.moving_count
        ));
    }
    if moving > 1usize << (n + 1) {
        return Some(format!("{moving} moving points exceed 2^(n+1)"));
    }
    None
}

pub fn verify_embedding(f: &BoolMapping, e: &Embedding) -> bool {
    embedding_violation(f, e).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent completion check: brute force over every state.
    fn brute_force_ok(f: &BoolMapping, e: &Embedding) -> bool {
        let n = f.n();
        let size = 1usize << e.m();
        let mut hits = vec![0u8; size];
        for &y in e.perm.table() {
            hits[y as usize] += 1;
        }
        let bijective = hits.iter().all(|&h| h == 1);
        let eq1 = (0..1u32 << n).all(|x| e.perm.apply(x) % (1 << n) == f.apply(x));
        let moving = (0..size).filter(|&x| e.perm.apply(x as u32) != x as u32).count();
        let parity_ok = e.m() < 4 || e.perm.parity() == Parity::Even;
        bijective && eq1 && moving == e.moving_count && moving <= 1 << (n + 1) && parity_ok
    }

    #[test]
    fn identity_embeds_as_identity() {
        let f = BoolMapping::identity(3).unwrap();
        let e = embed(&f, 0).unwrap();
        assert!(e.perm.is_identity());
        assert_eq!(e.moving_count, 0);
        assert_eq!(e.parity_fix, ParityFix::None);
        assert!(e.chains.is_empty());
        assert!(verify_embedding(&f, &e));
    }

    #[test]
    fn two_to_one_on_one_line() {
        // f(0) = f(1) = 1 with one ancilla. Tracing the construction by hand:
        // 0 keeps tag 0 -> 1, 1 takes tag 1 -> 3, chain 0 -> 1 -> 3 closes 3 -> 0.
        let f = BoolMapping::new(1, vec![1, 1]).unwrap();
        let e = embed(&f, 1).unwrap();
        assert_eq!(e.perm.table(), &[1, 3, 2, 0]);
        assert_eq!(
            e.chains,
            vec![Chain {
                start: 0,
                end: 3,
                length: 2
            }]
        );
        assert_eq!(e.parity_fix, ParityFix::None);
        assert_eq!(e.moving_count, 3);
        assert!(verify_embedding(&f, &e));
        assert!(brute_force_ok(&f, &e));
    }

    #[test]
    fn constant_on_two_lines_with_two_ancillas() {
        let f = BoolMapping::constant(2, 0).unwrap();
        let e = embed(&f, 2).unwrap();
        assert!(verify_embedding(&f, &e));
        assert!(brute_force_ok(&f, &e));
        assert!(e.moving_count <= 8);
        assert_eq!(e.perm.parity(), Parity::Even);
    }

    #[test]
    fn corrupted_entry_is_rejected() {
        let f = BoolMapping::new(1, vec![1, 1]).unwrap();
        let mut e = embed(&f, 1).unwrap();
        let mut table = e.perm.table().to_vec();
        table.swap(0, 2);
        e.perm = Permutation::new(2, table).unwrap();
        assert!(!verify_embedding(&f, &e));

        let mut e = embed(&f, 1).unwrap();
        e.moving_count += 1;
        assert!(!verify_embedding(&f, &e));
    }

    #[test]
    fn errors() {
        let constant = BoolMapping::constant(2, 0).unwrap();
        assert_eq!(
            embed(&constant, 1),
            Err(Error::InsufficientAncilla {
                required: 2,
                given: 1
            })
        );
        let odd = BoolMapping::new(4, Permutation::transposition(4, 0, 1).unwrap().into_table())
            .unwrap();
        assert_eq!(embed(&odd, 0), Err(Error::OddPermutationNoAncilla { n: 4 }));
        assert!(matches!(
            embed(&BoolMapping::identity(20).unwrap(), 5),
            Err(Error::WidthOverflow { .. })
        ));
    }

    #[test]
    fn odd_bijection_gets_transposition_outside_x() {
        let odd = BoolMapping::new(4, Permutation::transposition(4, 0, 1).unwrap().into_table())
            .unwrap();
        let e = embed(&odd, 1).unwrap();
        assert_eq!(e.parity_fix, ParityFix::Transposition { a: 16, b: 17 });
        assert_eq!(e.moving_count, 4);
        assert!(verify_embedding(&odd, &e));
    }

    #[test]
    fn odd_bijection_below_four_lines_is_left_odd() {
        let f = BoolMapping::new(2, vec![1, 0, 2, 3]).unwrap();
        let e = embed(&f, 0).unwrap();
        assert_eq!(e.perm.parity(), Parity::Odd);
        assert_eq!(e.parity_fix, ParityFix::None);
        assert!(verify_embedding(&f, &e));
    }

    #[test]
    fn parity_fix_flips_parity_exactly_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = [0usize; 3];
        for _ in 0..400 {
            let n = rng.gen_range(2..=5);
            let table: Vec<u32> = (0..1u32 << n)
                .map(|_| rng.gen_range(0..1u32 << n))
                .collect();
            let f = BoolMapping::new(n, table).unwrap();
            let q = min_ancilla(&f).max(4 - n.min(4));
            let closure = close_chains(&f, q);
            let before = Permutation::new(n + q, closure.table).unwrap().parity();
            let e = embed(&f, q).unwrap();
            match e.parity_fix {
                ParityFix::None => assert_eq!(before, Parity::Even),
                ParityFix::Transposition { .. } => {
                    seen[0] += 1;
                    assert_eq!(before, Parity::Odd)
                }
                ParityFix::ZInsertion { .. } => {
                    seen[1] += 1;
                    assert_eq!(before, Parity::Odd)
                }
                ParityFix::CrossLink { .. } => {
                    seen[2] += 1;
                    assert_eq!(before, Parity::Odd)
                }
            }
            assert_eq!(e.perm.parity(), Parity::Even);
            assert!(brute_force_ok(&f, &e));
        }
        assert!(seen[2] > 0, "cross-link never exercised: {seen:?}");
    }

    #[test]
    fn single_chain_uses_z_insertion_when_odd() {
        // n = 3, outputs 0 twice: one chain. Search small mappings for an odd closure.
        let mut found = false;
        for y in 0..8u32 {
            for dup in 1..8usize {
                let mut table: Vec<u32> = (0..8).collect();
                table[dup] = y;
                if table.iter().filter(|&&v| v == y).count() != 2 {
                    continue;
                }
                let f = BoolMapping::new(3, table).unwrap();
                let e = embed(&f, 1).unwrap();
                assert_eq!(e.chains.len(), 1);
                if let ParityFix::ZInsertion { z } = e.parity_fix {
                    found = true;
                    let chain = e.chains[0];
                    assert_eq!(e.perm.apply(chain.end), z);
                    assert_eq!(e.perm.apply(z), chain.start);
                    assert!(z >= 8);
                }
                assert!(verify_embedding(&f, &e));
            }
        }
        assert!(found);
    }

    #[test]
    fn chain_starts_are_distinct_and_count_outside_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let table: Vec<u32> = (0..1u32 << n)
                .map(|_| rng.gen_range(0..1u32 << n))
                .collect();
            let f = BoolMapping::new(n, table).unwrap();
            let q = min_ancilla(&f);
            let e = embed(&f, q).unwrap();
            let x_size = 1u32 << n;
            let outside = (0..x_size).filter(|&x| e.perm.apply(x) >= x_size).count();
            // The parity fix only redefines f_h outside X, so X's images still give Y'.
            assert_eq!(e.chains.len(), outside);
            let mut starts: Vec<u32> = e.chains.iter().map(|c| c.start).collect();
            starts.dedup();
            assert_eq!(starts.len(), e.chains.len());
            assert!(starts.iter().all(|&s| s < x_size));
        }
    }

    #[test]
    fn deterministic() {
        let f = BoolMapping::new(3, vec![0, 0, 0, 1, 1, 5, 5, 5]).unwrap();
        let a = embed(&f, 2).unwrap();
        let b = embed(&f, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.serialize(), b.serialize());
    }

    #[test]
    fn permutation_file_round_trip() {
        let f = BoolMapping::new(2, vec![3, 3, 0, 1]).unwrap();
        let e = embed(&f, 1).unwrap();
        let text = e.serialize();
        assert!(text.contains("# parity_fix"));
        let parsed = parse_permutation(&text).unwrap();
        assert_eq!(parsed, e.perm);
        assert_eq!(serialize_permutation(&parsed), serialize_permutation(&e.perm));
    }

    #[test]
    fn permutation_file_errors() {
        assert!(parse_permutation("perm m 1\n0 1\n").is_err());
        assert!(parse_permutation("perm m 1\n0 1\n0 0\n").is_err());
        assert!(parse_permutation("perm m 1\n0 1\n1 1\n").is_err());
        assert!(parse_permutation("m 1\n").is_err());
    }
}
