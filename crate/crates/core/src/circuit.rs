//! Gates, circuits, simulation and the circuit text format.
//!
//! Lines are zero-based in the API and one-based in text (`C_{1,2;3}`,
//! `t3 1 2 3`), matching the usual `x_1 .. x_m` numbering.

use std::fmt;

use crate::bitspace::{check_width, strip_comment, Permutation, StateVector, MAX_WIDTH};
use crate::error::{Error, Result};

/// Generalized Toffoli gate: flips `target` iff every control line is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    target: u8,
    controls: u32,
}

impl Gate {
    /// `controls` and `target` are zero-based line indices.
    pub fn new(target: usize, controls: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &c in controls {
            if c >= MAX_WIDTH {
                return Err(Error::InvalidGate(format!("control line {} out of range", c + 1)));
            }
            if mask & (1 << c) != 0 {
                return Err(Error::InvalidGate(format!("control line {} repeated", c + 1)));
            }
            mask |= 1 << c;
        }
        Self::from_mask(target, mask)
    }

    pub fn from_mask(target: usize, controls: u32) -> Result<Self> {
        if target >= MAX_WIDTH {
            return Err(Error::InvalidGate(format!("target line {} out of range", target + 1)));
        }
        if controls >> MAX_WIDTH != 0 {
            return Err(Error::InvalidGate("control line out of range".into()));
        }
        if controls & (1 << target) != 0 {
            return Err(Error::InvalidGate(format!(
                "target line {} is also a control",
                target + 1
            )));
        }
        Ok(Self {
            target: target as u8,
            controls,
        })
    }

    pub fn not(target: usize) -> Self {
        Self::from_mask(target, 0).expect("valid NOT")
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(target, &[control]).expect("valid CNOT")
    }

    pub fn toffoli(a: usize, b: usize, target: usize) -> Self {
        Self::new(target, &[a, b]).expect("valid Toffoli")
    }

    pub fn target(&self) -> usize {
        self.target as usize
    }

    pub fn control_mask(&self) -> u32 {
        self.controls
    }

    pub fn controls(&self) -> Vec<usize> {
        (0..MAX_WIDTH).filter(|&i| self.controls & (1 << i) != 0).collect()
    }

    pub fn control_count(&self) -> usize {
        self.controls.count_ones() as usize
    }

    /// Target and controls.
    pub fn support(&self) -> u32 {
        self.controls | (1 << self.target)
    }

    /// Highest line used, plus one.
    pub fn span(&self) -> usize {
        32 - self.support().leading_zeros() as usize
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        if x & self.controls == self.controls {
            x ^ (1 << self.target)
        } else {
            x
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let controls: Vec<String> = self.controls().iter().map(|c| (c + 1).to_string()).collect();
        write!(f, "C_{{{};{}}}", controls.join(","), self.target + 1)
    }
}

/// Applies one gate to a state.
pub fn apply_gate(x: StateVector, g: &Gate) -> Result<StateVector> {
    if g.span() > x.width() {
        return Err(Error::InvalidGate(format!(
            "{g} does not fit a {}-line state",
            x.width()
        )));
    }
    StateVector::new(x.width(), g.apply(x.value()))
}

/// A gate sequence on `lines` lines, the first `significant` of which carry
/// the mapping; the rest are zero-initialized ancillas.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    lines: usize,
    significant: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(lines: usize, significant: usize) -> Result<Self> {
        check_width(lines)?;
        if significant > lines {
            return Err(Error::InvalidWidth(format!(
                "{significant} significant inputs exceed {lines} lines"
            )));
        }
        Ok(Self {
            lines,
            significant,
            gates: Vec::new(),
        })
    }

    pub fn with_gates(lines: usize, significant: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(lines, significant)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.span() > self.lines {
            return Err(Error::InvalidGate(format!(
                "{gate} does not fit a {}-line circuit",
                self.lines
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, gate: Gate) {
        debug_assert!(gate.span() <= self.lines);
        self.gates.push(gate);
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn significant(&self) -> usize {
        self.significant
    }

    pub fn ancilla(&self) -> usize {
        self.lines - self.significant
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// All gates are NOT, CNOT or Toffoli.
    pub fn is_omega2(&self) -> bool {
        self.gates.iter().all(|g| g.control_count() <= 2)
    }

    pub fn max_controls(&self) -> usize {
        self.gates.iter().map(Gate::control_count).max().unwrap_or(0)
    }

    /// Gate count.
    pub fn complexity(&self) -> usize {
        self.gates.len()
    }

    /// Layer count of the greedy left-to-right layering, where a gate joins
    /// the earliest layer after every earlier gate it shares a line with.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.lines];
        let mut depth = 0;
        for g in &self.gates {
            let support = g.support();
            let lines = (0..self.lines).filter(|&i| support & (1 << i) != 0);
            let layer = lines.clone().map(|i| level[i]).max().unwrap_or(0) + 1;
            for i in lines {
                level[i] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    #[inline]
    pub fn simulate_value(&self, x: u32) -> u32 {
        self.gates.iter().fold(x, |v, g| g.apply(v))
    }

    pub fn simulate(&self, x: StateVector) -> Result<StateVector> {
        if x.width() != self.lines {
            return Err(Error::InvalidWidth(format!(
                "{}-wide state on a {}-line circuit",
                x.width(),
                self.lines
            )));
        }
        StateVector::new(self.lines, self.simulate_value(x.value()))
    }

    /// Full table of the circuit's transformation.
    pub fn permutation(&self) -> Permutation {
        let size = 1u32 << self.lines;
        let mut table: Vec<u32> = (0..size).collect();
        for g in &self.gates {
            for v in table.iter_mut() {
                *v = g.apply(*v);
            }
        }
        Permutation::from_table_unchecked(self.lines, table)
    }

    /// Circuit realizing the inverse transformation.
    pub fn reversed(&self) -> Circuit {
        Circuit {
            lines: self.lines,
            significant: self.significant,
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    /// Parses the circuit text format:
    ///
    /// ```text
    /// .lines 3
    /// .significant 2
    /// t1 3        # NOT on line 3
    /// t2 1 2      # CNOT, control 1, target 2
    /// t3 1 2 3    # Toffoli
    /// ```
    ///
    /// `tk` lists `k` one-based lines; the last is the target.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines: Option<usize> = None;
        let mut significant: Option<usize> = None;
        let mut gates: Vec<(usize, Gate)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap_or_default();
            let rest: Vec<&str> = parts.collect();
            match head {
                ".lines" | ".significant" => {
                    if !gates.is_empty() {
                        return Err(Error::parse(lineno, format!("{head} after the first gate")));
                    }
                    let [value] = rest.as_slice() else {
                        return Err(Error::parse(lineno, format!("expected `{head} <count>`")));
                    };
                    let value: usize = value
                        .parse()
                        .map_err(|_| Error::parse(lineno, format!("invalid count {value:?}")))?;
                    let slot = if head == ".lines" {
                        &mut lines
                    } else {
                        &mut significant
                    };
                    if slot.replace(value).is_some() {
                        return Err(Error::parse(lineno, format!("duplicate {head}")));
                    }
                }
                _ => {
                    let k: usize = head
                        .strip_prefix('t')
                        .and_then(|k| k.parse().ok())
                        .ok_or_else(|| Error::parse(lineno, format!("unknown directive {head:?}")))?;
                    if k == 0 || rest.len() != k {
                        return Err(Error::parse(
                            lineno,
                            format!("t{k} expects {k} line indices, found {}", rest.len()),
                        ));
                    }
                    let mut indices = Vec::with_capacity(k);
                    for tok in &rest {
                        let i: usize = tok
                            .parse()
                            .ok()
                            .filter(|&i| i >= 1)
                            .ok_or_else(|| Error::parse(lineno, format!("invalid line {tok:?}")))?;
                        indices.push(i - 1);
                    }
                    let target = indices.pop().expect("k >= 1");
                    let gate =
                        Gate::new(target, &indices).map_err(|e| Error::parse(lineno, e.to_string()))?;
                    gates.push((lineno, gate));
                }
            }
        }
        let lines = lines.ok_or_else(|| Error::parse(1, "missing `.lines` header"))?;
        if lines > MAX_WIDTH {
            return Err(Error::parse(1, format!("{lines} lines exceed {MAX_WIDTH}")));
        }
        let significant = significant.unwrap_or(lines);
        let mut circuit = Circuit::new(lines, significant).map_err(|e| Error::parse(1, e.to_string()))?;
        for (lineno, g) in gates {
            circuit
                .push(g)
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
        }
        Ok(circuit)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!(".lines {}\n.significant {}\n", self.lines, self.significant);
        for g in &self.gates {
            out.push_str(&format!("t{}", g.control_count() + 1));
            for c in g.controls() {
                out.push_str(&format!(" {}", c + 1));
            }
            out.push_str(&format!(" {}\n", g.target() + 1));
        }
        out
    }
}

/// Table of a circuit's transformation.
pub fn circuit_permutation(c: &Circuit) -> Result<Permutation> {
    check_width(c.lines())?;
    Ok(c.permutation())
}
