//! Boolean vectors, mappings and permutations over `Z_2^m`.
//!
//! A vector `<x_1, ..., x_m>` is encoded as an unsigned integer with `x_1`
//! in the least significant bit. Ancilla coordinates therefore occupy the
//! top bits, so [`expand`] is the numeric identity and [`reduce`] is a mask.

use std::fmt;

use crate::error::{Error, Result};

/// Largest line count for which full tables are materialized.
pub const MAX_WIDTH: usize = 24;

pub(crate) fn check_width(width: usize) -> Result<()> {
    if width > MAX_WIDTH {
        return Err(Error::WidthOverflow {
            width,
            max: MAX_WIDTH,
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn mask(width: usize) -> u32 {
    if width >= 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    }
}

/// A point of `Z_2^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateVector {
    width: usize,
    value: u32,
}

impl StateVector {
    pub fn new(width: usize, value: u32) -> Result<Self> {
        check_width(width)?;
        if value > mask(width) {
            return Err(Error::ValueOutOfRange { value, width });
        }
        Ok(Self { width, value })
    }

    /// Builds a vector from its coordinates, `x_1` first.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let value = bits
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
        Self::new(bits.len(), value)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// Coordinate `x_{i+1}` (zero-based `i`).
    pub fn bit(&self, i: usize) -> bool {
        i < self.width && (self.value >> i) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.width).map(|i| self.bit(i)).collect()
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for i in 0..self.width {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", u8::from(self.bit(i)))?;
        }
        write!(f, ">")
    }
}

/// Appends `k` zero coordinates: `<x_1..x_n>` becomes `<x_1..x_n,0..0>`.
pub fn expand(x: StateVector, k: usize) -> Result<StateVector> {
    check_width(x.width + k)?;
    Ok(StateVector {
        width: x.width + k,
        value: x.value,
    })
}

/// Drops the top `k` coordinates.
pub fn reduce(x: StateVector, k: usize) -> Result<StateVector> {
    if k >= x.width && !(k == 0 && x.width == 0) {
        return Err(Error::InvalidWidth(format!(
            "cannot drop {k} coordinates from a {}-wide vector",
            x.width
        )));
    }
    let width = x.width - k;
    Ok(StateVector {
        width,
        value: x.value & mask(width),
    })
}

/// Permutation parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_even(self) -> bool {
        self == Parity::Even
    }

    /// Parity of a product.
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// A total Boolean mapping `f: Z_2^n -> Z_2^n`, not necessarily bijective.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMapping {
    n: usize,
    table: Vec<u32>,
}

impl BoolMapping {
    pub fn new(n: usize, table: Vec<u32>) -> Result<Self> {
        check_width(n)?;
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(Error::TableLength {
                got: table.len(),
                expected,
            });
        }
        if let Some(&value) = table.iter().find(|&&v| v > mask(n)) {
            return Err(Error::ValueOutOfRange { value, width: n });
        }
        Ok(Self { n, table })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_width(n)?;
        Ok(Self {
            n,
            table: (0..1u32 << n).collect(),
        })
    }

    pub fn constant(n: usize, value: u32) -> Result<Self> {
        check_width(n)?;
        Self::new(n, vec![value; 1usize << n])
    }

    pub fn from_fn(n: usize, f: impl Fn(u32) -> u32) -> Result<Self> {
        check_width(n)?;
        Self::new(n, (0..1u32 << n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        self.table
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    /// The mapping as a permutation, if it is one.
    pub fn to_permutation(&self) -> Option<Permutation> {
        Permutation::new(self.n, self.table.clone()).ok()
    }

    /// Parses the truth-table text format.
    ///
    /// ```text
    /// # comment
    /// n 2
    /// 00
    /// 10
    /// 01
    /// 11
    /// ```
    ///
    /// Line `i` after the header holds `f(i)` with `x_1` written first.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut table = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            last_line = lineno;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            match n {
                None => {
                    let mut parts = line.split_whitespace();
                    if parts.next() != Some("n") {
                        return Err(Error::parse(lineno, "expected header `n <width>`"));
                    }
                    let width = parts
                        .next()
                        .and_then(|w| w.parse::<usize>().ok())
                        .ok_or_else(|| Error::parse(lineno, "missing or invalid width"))?;
                    if parts.next().is_some() {
                        return Err(Error::parse(lineno, "trailing tokens after width"));
                    }
                    if width > MAX_WIDTH {
                        return Err(Error::parse(
                            lineno,
                            format!("width {width} exceeds {MAX_WIDTH}"),
                        ));
                    }
                    n = Some(width);
                    table.reserve(1usize << width);
                }
                Some(width) => {
                    if table.len() == 1usize << width {
                        return Err(Error::parse(lineno, "more rows than 2^n"));
                    }
                    let value = parse_bits(line, width).map_err(|m| Error::parse(lineno, m))?;
                    table.push(value);
                }
            }
        }
        let n = n.ok_or_else(|| Error::parse(last_line.max(1), "missing header `n <width>`"))?;
        if table.len() != 1usize << n {
            return Err(Error::parse(
                last_line,
                format!("expected {} rows, found {}", 1usize << n, table.len()),
            ));
        }
        Self::new(n, table)
    }

    /// Writes the truth-table text format.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(8 + self.table.len() * (self.n + 1));
        out.push_str(&format!("n {}\n", self.n));
        for &v in &self.table {
            out.push_str(&format_bits(v, self.n));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => line[..pos].trim(),
        None => line.trim(),
    }
}

/// Binary string with `x_1` first.
pub fn format_bits(value: u32, width: usize) -> String {
    (0..width)
        .map(|i| if (value >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`format_bits`].
pub fn parse_bits(s: &str, width: usize) -> std::result::Result<u32, String> {
    if s.len() != width {
        return Err(format!("expected {width} binary digits, found {:?}", s));
    }
    s.chars().enumerate().try_fold(0u32, |acc, (i, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << i)),
        other => Err(format!("invalid binary digit {other:?}")),
    })
}

/// A bijection on `Z_2^m` stored as a full table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    m: usize,
    table: Vec<u32>,
}

impl Permutation {
    pub fn new(m: usize, table: Vec<u32>) -> Result<Self> {
        check_width(m)?;
        let expected = 1usize << m;
        if table.len() != expected {
            return Err(Error::TableLength {
                got: table.len(),
                expected,
            });
        }
        let mut seen = vec![false; expected];
        for &v in &table {
            if v > mask(m) {
                return Err(Error::ValueOutOfRange { value: v, width: m });
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::NotBijective(v));
            }
        }
        Ok(Self { m, table })
    }

    pub(crate) fn from_table_unchecked(m: usize, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), 1usize << m);
        Self { m, table }
    }

    pub fn identity(m: usize) -> Result<Self> {
        check_width(m)?;
        Ok(Self {
            m,
            table: (0..1u32 << m).collect(),
        })
    }

    /// Transposition of two states.
    pub fn transposition(m: usize, a: u32, b: u32) -> Result<Self> {
        let mut p = Self::identity(m)?;
        for v in [a, b] {
            if v > mask(m) {
                return Err(Error::ValueOutOfRange { value: v, width: m });
            }
        }
        p.table.swap(a as usize, b as usize);
        Ok(p)
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(m: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut table: Vec<u32> = (0..1u32 << m).collect();
        for cycle in cycles {
            for (i, &from) in cycle.iter().enumerate() {
                let to = cycle[(i + 1) % cycle.len()];
                if from > mask(m) || to > mask(m) {
                    return Err(Error::ValueOutOfRange {
                        value: from.max(to),
                        width: m,
                    });
                }
                table[from as usize] = to;
            }
        }
        Self::new(m, table)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn into_table(self) -> Vec<u32> {
        self.table
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.m != other.m {
            return Err(Error::InvalidWidth(format!(
                "cannot compose widths {} and {}",
                self.m, other.m
            )));
        }
        Ok(Self {
            m: self.m,
            table: other.table.iter().map(|&x| self.table[x as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut table = vec![0; self.table.len()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y as usize] = x as u32;
        }
        Self { m: self.m, table }
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.table.len()];
        let mut cycles = 0;
        for start in 0..self.table.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.table[x] as usize;
            }
        }
        cycles
    }

    /// Parity from the cycle structure: `(2^m - cycles) mod 2`.
    pub fn parity(&self) -> Parity {
        if (self.table.len() - self.cycle_count()).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Number of points with `p(x) != x`.
    pub fn moving_points(&self) -> usize {
        self.table
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x as u32 != y)
            .count()
    }
}
