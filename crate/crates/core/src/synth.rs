//! Transformation-based synthesis of permutations and decomposition of
//! multi-controlled gates into NOT/CNOT/Toffoli gates.
//!
//! Rows are fixed in ascending order. Row `x` currently holding `y > x` is
//! moved to `x` by single-bit flips whose control set `C` satisfies
//! `C as integer >= x`: every state containing `C` is then at least `x`, so
//! no finished row is disturbed. Control sets are shrunk greedily from the
//! current value, dropping low bits first.
//!
//! On four or more lines a gate with `m - 1` controls is an odd permutation
//! and cannot be decomposed. The greedy rule only needs one for rows `x`
//! with exactly one zero bit, whose only unfinished neighbour is the
//! all-ones state. Those rows are instead reached through a 3-cycle on
//! three states of weight `>= m - 1`, written as the group commutator of
//! two gates with at most `m - 2` controls each.

use std::fmt;

use crate::bitspace::{check_width, BoolMapping, Parity, Permutation};
use crate::circuit::{Circuit, Gate};
use crate::embed::{embed, Embedding};
use crate::error::{Error, Result};

/// Largest width accepted by [`synthesize`].
pub const MAX_SYNTH_WIDTH: usize = 16;

/// Statistics of a synthesis run.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthReport {
    pub generalized_gate_count: usize,
    pub final_gate_count: usize,
    pub final_depth: usize,
    pub max_controls_emitted: usize,
    pub decomposition_expansion: f64,
}

impl fmt::Display for SynthReport {
    /// Flat `key=value` block.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generalized_gate_count={}", self.generalized_gate_count)?;
        writeln!(f, "final_gate_count={}", self.final_gate_count)?;
        writeln!(f, "final_depth={}", self.final_depth)?;
        writeln!(f, "max_controls_emitted={}", self.max_controls_emitted)?;
        writeln!(f, "decomposition_expansion={:.4}", self.decomposition_expansion)
    }
}

/// Working table for row-by-row reduction: `rows[x]` is the current image of
/// `x`, `holder[v]` the row currently holding `v`.
struct Reducer {
    m: usize,
    rows: Vec<u32>,
    holder: Vec<u32>,
    applied: Vec<Gate>,
}

impl Reducer {
    fn new(p: &Permutation) -> Self {
        let rows = p.table().to_vec();
        let mut holder = vec![0u32; rows.len()];
        for (x, &y) in rows.iter().enumerate() {
            holder[y as usize] = x as u32;
        }
        Self {
            m: p.m(),
            rows,
            holder,
            applied: Vec::new(),
        }
    }

    /// Applies `g` to every row's value. Only states containing the controls
    /// move, so just those are visited.
    fn apply(&mut self, g: Gate) {
        let full = (1u32 << self.m) - 1;
        let controls = g.control_mask();
        let bit = 1u32 << g.target();
        let free = full & !(controls | bit);
        let mut sub = free;
        loop {
            let v = controls | sub;
            let w = v | bit;
            let (a, b) = (self.holder[v as usize], self.holder[w as usize]);
            self.rows.swap(a as usize, b as usize);
            self.holder[v as usize] = b;
            self.holder[w as usize] = a;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        self.applied.push(g);
    }

    /// Flips bit `bit` of row `x`'s value under the smallest greedy control
    /// set that leaves rows below `x` untouched.
    fn flip(&mut self, x: u32, bit: usize) {
        let current = self.rows[x as usize];
        let mut controls = current & !(1 << bit);
        debug_assert!(controls >= x);
        let mut rest = controls;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            rest &= !low;
            if controls & !low >= x {
                controls &= !low;
            }
        }
        // no finished row v < x contains the control pattern
        assert!(controls >= x, "control pattern would disturb finished rows");
        let gate = Gate::from_mask(bit, controls).expect("target outside controls");
        if self.m >= 4 {
            assert!(
                gate.control_count() <= self.m - 2,
                "{gate} has m - 1 controls on {} lines",
                self.m
            );
        }
        self.apply(gate);
    }

    fn fix_row(&mut self, x: u32) {
        let full = (1u32 << self.m) - 1;
        if self.m >= 4 && x.count_ones() as usize == self.m - 1 {
            self.fix_row_via_cycle(x);
            return;
        }
        let y = self.rows[x as usize];
        let mut raise = x & !y;
        while raise != 0 {
            let bit = raise.trailing_zeros() as usize;
            raise &= raise - 1;
            self.flip(x, bit);
        }
        let mut lower = self.rows[x as usize] & !x & full;
        while lower != 0 {
            let bit = lower.trailing_zeros() as usize;
            lower &= lower - 1;
            self.flip(x, bit);
        }
    }

    fn fix_row_via_cycle(&mut self, x: u32) {
        let m = self.m;
        let full = (1u32 << m) - 1;
        let zero_bit = (full & !x).trailing_zeros();
        // The row just below the all-ones state: with every other row fixed by
        // even gates only a transposition could remain, which parity excludes.
        assert!(zero_bit != 0, "odd residual permutation on the top two rows");

        // Raise the value until it has at most one zero bit.
        while (self.rows[x as usize].count_ones() as usize) < m - 1 {
            let current = self.rows[x as usize];
            let bit = (full & !current).trailing_zeros() as usize;
            self.flip(x, bit);
        }
        let current = self.rows[x as usize];
        let other = if current == full { full ^ 1 } else { current };
        let a = (full & !other).trailing_zeros() as usize;
        let b = zero_bit as usize;
        for g in three_cycle(m, a, b, current, x) {
            self.apply(g);
        }
        debug_assert_eq!(self.rows[x as usize], x);
    }
}

/// Gates realizing a 3-cycle on `{full, full ^ 2^a, full ^ 2^b}` that sends
/// `from` to `to`.
///
/// With `R` the remaining lines split into non-empty halves `R1`, `R2`,
/// `G1 = C(R1 + a; b)` and `G2 = C(R2 + b; a)` give `G1 G2 G1 G2`, which is
/// the identity unless all of `R` is set and there acts as the commutator of
/// two CNOTs on lines `a`, `b`: a 3-cycle on the nonzero pairs.
fn three_cycle(m: usize, a: usize, b: usize, from: u32, to: u32) -> [Gate; 4] {
    debug_assert!(m >= 4 && a != b);
    let full = (1u32 << m) - 1;
    let rest = full & !(1 << a) & !(1 << b);
    let half = rest.count_ones().div_ceil(2);
    let mut low = 0u32;
    let mut bits = rest;
    for _ in 0..half {
        let lowest = bits & bits.wrapping_neg();
        low |= lowest;
        bits &= !lowest;
    }
    let high = rest & !low;
    let g1 = Gate::from_mask(b, low | (1 << a)).expect("valid gate");
    let g2 = Gate::from_mask(a, high | (1 << b)).expect("valid gate");
    let forward = [g1, g2, g1, g2];
    let backward = [g2, g1, g2, g1];
    let run = |gates: &[Gate; 4]| gates.iter().fold(from, |v, g| g.apply(v));
    if run(&forward) == to {
        forward
    } else {
        debug_assert_eq!(run(&backward), to);
        backward
    }
}

/// Circuit of generalized Toffoli gates realizing `p`.
///
/// The result has `p.m()` lines, all significant. On four or more lines no
/// gate has `m - 1` controls, so [`decompose`] always succeeds on it.
pub fn synthesize(p: &Permutation) -> Result<Circuit> {
    let m = p.m();
    if m > MAX_SYNTH_WIDTH {
        return Err(Error::WidthOverflow {
            width: m,
            max: MAX_SYNTH_WIDTH,
        });
    }
    if m >= 4 && p.parity() == Parity::Odd {
        return Err(Error::OddPermutation { m });
    }
    let mut reducer = Reducer::new(p);
    let size = 1u32 << m;
    for x in 0..size {
        if reducer.rows[x as usize] != x {
            reducer.fix_row(x);
        }
        debug_assert_eq!(reducer.rows[x as usize], x);
    }
    assert!(
        reducer.rows.iter().enumerate().all(|(x, &y)| x as u32 == y),
        "reduction did not reach the identity"
    );
    let gates = reducer.applied.into_iter().rev().collect();
    Circuit::with_gates(m, m, gates)
}

/// Emits a gate with controls `controls` on `target`, expanding more than
/// two controls with a borrowed line.
fn emit_decomposed(lines: usize, controls: u32, target: usize, out: &mut Vec<Gate>) -> Result<()> {
    let k = controls.count_ones() as usize;
    if k <= 2 {
        out.push(Gate::from_mask(target, controls)?);
        return Ok(());
    }
    let used = controls | (1 << target);
    let borrowed = (0..lines).find(|&i| used & (1 << i) == 0).ok_or_else(|| {
        Error::NoBorrowLine {
            gate: Gate::from_mask(target, controls)
                .map(|g| g.to_string())
                .unwrap_or_default(),
            lines,
        }
    })?;
    let a = controls.trailing_zeros() as usize;
    let b = (controls & !(1 << a)).trailing_zeros() as usize;
    let pair = Gate::toffoli(a, b, borrowed);
    let reduced = (controls & !(1 << a) & !(1 << b)) | (1 << borrowed);
    // t ^= rest & w; w ^= a & b; t ^= rest & w; w ^= a & b  ==  t ^= rest & a & b
    out.push(pair);
    emit_decomposed(lines, reduced, target, out)?;
    out.push(pair);
    emit_decomposed(lines, reduced, target, out)
}

/// Rewrites every gate with three or more controls into Toffoli gates using
/// an idle line as a borrowed (dirty) bit; the circuit's table is unchanged.
pub fn decompose(c: &Circuit) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(c.complexity());
    for g in c.gates() {
        if g.control_count() >= 3 && g.control_count() + 2 > c.lines() {
            return Err(Error::NoBorrowLine {
                gate: g.to_string(),
                lines: c.lines(),
            });
        }
        emit_decomposed(c.lines(), g.control_mask(), g.target(), &mut gates)?;
    }
    let mut out = Circuit::new(c.lines(), c.significant())?;
    for g in gates {
        out.push_unchecked(g);
    }
    Ok(out)
}

/// Embeds `f` with `q` ancillas, synthesizes the completion and decomposes
/// it into NOT/CNOT/Toffoli gates.
pub fn synthesize_mapping(f: &BoolMapping, q: usize) -> Result<(Circuit, SynthReport, Embedding)> {
    let m = f.n() + q;
    check_width(m)?;
    if m > MAX_SYNTH_WIDTH {
        return Err(Error::WidthOverflow {
            width: m,
            max: MAX_SYNTH_WIDTH,
        });
    }
    let embedding = embed(f, q)?;
    let generalized = synthesize(&embedding.perm)?;
    let decomposed = decompose(&generalized)?;
    let circuit = Circuit::with_gates(m, f.n(), decomposed.gates().to_vec())?;
    let generalized_gate_count = generalized.complexity();
    let final_gate_count = circuit.complexity();
    let report = SynthReport {
        generalized_gate_count,
        final_gate_count,
        final_depth: circuit.depth(),
        max_controls_emitted: generalized.max_controls(),
        decomposition_expansion: if generalized_gate_count == 0 {
            1.0
        } else {
            final_gate_count as f64 / generalized_gate_count as f64
        },
    };
    Ok((circuit, report, embedding))
}

/// First input `x` (if any) with `reduce(simulate(expand(x))) != f(x)`.
pub fn find_counterexample(f: &BoolMapping, c: &Circuit) -> Result<Option<u32>> {
    let n = f.n();
    if c.significant() != n || c.lines() < n {
        return Err(Error::InvalidWidth(format!(
            "mapping has n = {n}, circuit has {} significant of {} lines",
            c.significant(),
            c.lines()
        )));
    }
    let low = (1u32 << n) - 1;
    Ok((0..1u32 << n).find(|&x| c.simulate_value(x) & low != f.apply(x)))
}
