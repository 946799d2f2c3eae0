//! Breadth-first enumeration of NOT/CNOT/Toffoli circuits on a few lines.
//!
//! The atlas maps every reachable permutation to its exact minimal gate
//! count. Permutations are keyed by their packed table (`m` bits per entry),
//! which fits a `u64` for `m <= 4`.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::bitspace::{BoolMapping, Permutation};
use crate::circuit::Gate;
use crate::error::{Error, Result};

/// Widest atlas whose closure is enumerated in full.
pub const MAX_FULL_WIDTH: usize = 3;
/// Widest atlas supported at all (depth-bounded beyond [`MAX_FULL_WIDTH`]).
pub const MAX_ATLAS_WIDTH: usize = 4;
/// Default gate budget for depth-bounded atlases.
pub const DEFAULT_MAX_GATES: u32 = 6;

const MAGIC: &[u8; 8] = b"REVATLAS";
const VERSION: u32 = 1;
const UNBOUNDED: u32 = u32::MAX;

/// Every NOT, CNOT and Toffoli gate on `m` lines.
pub fn omega2_gates(m: usize) -> Vec<Gate> {
    let mut gates = Vec::new();
    for target in 0..m {
        let others: Vec<usize> = (0..m).filter(|&i| i != target).collect();
        gates.push(Gate::not(target));
        for &c in &others {
            gates.push(Gate::cnot(c, target));
        }
        for (i, &a) in others.iter().enumerate() {
            for &b in &others[i + 1..] {
                gates.push(Gate::toffoli(a, b, target));
            }
        }
    }
    gates
}

fn pack(table: &[u32], m: usize) -> u64 {
    table
        .iter()
        .enumerate()
        .fold(0u64, |key, (x, &y)| key | (u64::from(y) << (m * x)))
}

fn unpack(key: u64, m: usize) -> Vec<u32> {
    let entry_mask = (1u64 << m) - 1;
    (0..1usize << m)
        .map(|x| ((key >> (m * x)) & entry_mask) as u32)
        .collect()
}

/// Exact minimal gate counts for every permutation reachable on `m` lines
/// (within the gate budget, if any).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsAtlas {
    m: usize,
    max_gates: Option<u32>,
    dist: HashMap<u64, u8>,
    generators: Vec<Gate>,
}

impl BfsAtlas {
    pub fn m(&self) -> usize {
        self.m
    }

    /// `None` for a complete closure.
    pub fn max_gates(&self) -> Option<u32> {
        self.max_gates
    }

    pub fn is_complete(&self) -> bool {
        self.max_gates.is_none()
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn generators(&self) -> &[Gate] {
        &self.generators
    }

    pub fn key(&self, p: &Permutation) -> Result<u64> {
        if p.m() != self.m {
            return Err(Error::InvalidWidth(format!(
                "{}-line permutation against a {}-line atlas",
                p.m(),
                self.m
            )));
        }
        Ok(pack(p.table(), self.m))
    }

    pub fn distance(&self, p: &Permutation) -> Option<u32> {
        let key = self.key(p).ok()?;
        self.dist.get(&key).map(|&d| u32::from(d))
    }

    /// Iterates over `(permutation, distance)` in unspecified order.
    pub fn entries(&self) -> impl Iterator<Item = (Permutation, u32)> + '_ {
        self.dist.iter().map(|(&k, &d)| {
            (
                Permutation::from_table_unchecked(self.m, unpack(k, self.m)),
                u32::from(d),
            )
        })
    }

    /// Number of permutations at each distance.
    pub fn histogram(&self) -> Vec<usize> {
        let mut hist = Vec::new();
        for &d in self.dist.values() {
            let d = d as usize;
            if hist.len() <= d {
                hist.resize(d + 1, 0);
            }
            hist[d] += 1;
        }
        hist
    }

    pub fn max_distance(&self) -> u32 {
        self.dist.values().copied().max().map_or(0, u32::from)
    }

    /// Writes the binary atlas: magic, version, `m`, gate budget, record
    /// count, then `(key: u64, dist: u8)` records sorted by key, little-endian.
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.m as u32).to_le_bytes())?;
        w.write_all(&self.max_gates.unwrap_or(UNBOUNDED).to_le_bytes())?;
        w.write_all(&(self.dist.len() as u64).to_le_bytes())?;
        let mut records: Vec<(u64, u8)> = self.dist.iter().map(|(&k, &d)| (k, d)).collect();
        records.sort_unstable();
        for (k, d) in records {
            w.write_all(&k.to_le_bytes())?;
            w.write_all(&[d])?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        fn array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
            let mut buf = [0u8; N];
            r.read_exact(&mut buf)?;
            Ok(buf)
        }
        let bad = |msg: &str| Error::Io(format!("malformed atlas file: {msg}"));
        if &array::<8>(r)? != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u32::from_le_bytes(array(r)?);
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let m = u32::from_le_bytes(array(r)?) as usize;
        if m == 0 || m > MAX_ATLAS_WIDTH {
            return Err(bad(&format!("width {m}")));
        }
        let budget = u32::from_le_bytes(array(r)?);
        let count = u64::from_le_bytes(array(r)?);
        let mut dist = HashMap::with_capacity(count.min(1 << 24) as usize);
        for _ in 0..count {
            let key = u64::from_le_bytes(array(r)?);
            let [d] = array::<1>(r)?;
            dist.insert(key, d);
        }
        Ok(Self {
            m,
            max_gates: (budget != UNBOUNDED).then_some(budget),
            dist,
            generators: omega2_gates(m),
        })
    }
}

fn breadth_first(m: usize, max_gates: Option<u32>) -> BfsAtlas {
    let generators = omega2_gates(m);
    let gate_tables: Vec<Vec<u32>> = generators
        .iter()
        .map(|g| (0..1u32 << m).map(|x| g.apply(x)).collect())
        .collect();
    let identity: Vec<u32> = (0..1u32 << m).collect();
    let mut dist = HashMap::new();
    dist.insert(pack(&identity, m), 0u8);
    let mut frontier = vec![identity];
    let mut depth = 0u32;
    while !frontier.is_empty() && max_gates.is_none_or(|b| depth < b) {
        depth += 1;
        let mut next = Vec::new();
        for table in &frontier {
            for g in &gate_tables {
                let moved: Vec<u32> = table.iter().map(|&y| g[y as usize]).collect();
                let key = pack(&moved, m);
                if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(key) {
                    slot.insert(depth as u8);
                    next.push(moved);
                }
            }
        }
        frontier = next;
    }
    BfsAtlas {
        m,
        max_gates,
        dist,
        generators,
    }
}

/// Complete closure from the identity over all gates on `m <= 3` lines.
pub fn build_atlas(m: usize) -> Result<BfsAtlas> {
    if m == 0 || m > MAX_FULL_WIDTH {
        return Err(Error::InvalidWidth(format!(
            "full atlas needs 1 <= m <= {MAX_FULL_WIDTH}, got {m}"
        )));
    }
    Ok(breadth_first(m, None))
}

/// Closure limited to `max_gates` gates; exact below the budget. Supports
/// `m <= 4`.
pub fn build_atlas_bounded(m: usize, max_gates: u32) -> Result<BfsAtlas> {
    if m == 0 || m > MAX_ATLAS_WIDTH {
        return Err(Error::InvalidWidth(format!(
            "atlas needs 1 <= m <= {MAX_ATLAS_WIDTH}, got {m}"
        )));
    }
    Ok(breadth_first(m, Some(max_gates)))
}

/// Exact minimal gate count of `p`.
pub fn min_gates(atlas: &BfsAtlas, p: &Permutation) -> Result<u32> {
    atlas.key(p)?;
    atlas.distance(p).ok_or(Error::Unreachable)
}

impl BfsAtlas {
    /// True iff no permutation in the atlas realizes `f` with `q` ancillas,
    /// i.e. `reduce(g(expand(x))) = f(x)` fails for every `g`.
    pub fn confirm_assertion1(&self, f: &BoolMapping, q: usize) -> Result<bool> {
        if f.n() + q != self.m {
            return Err(Error::InvalidWidth(format!(
                "n + q = {} but the atlas has {} lines",
                f.n() + q,
                self.m
            )));
        }
        if !self.is_complete() {
            return Err(Error::InvalidWidth(
                "impossibility needs a complete atlas".into(),
            ));
        }
        let entry_mask = (1u64 << self.m) - 1;
        let low = (1u64 << f.n()) - 1;
        let realizable = self.dist.keys().any(|&key| {
            (0..1usize << f.n()).all(|x| {
                let y = (key >> (self.m * x)) & entry_mask;
                y & low == u64::from(f.apply(x as u32))
            })
        });
        Ok(!realizable)
    }
}

/// Builds the complete atlas for `n + q <= 3` lines and checks that no
/// circuit realizes `f`.
pub fn confirm_assertion1(f: &BoolMapping, q: usize) -> Result<bool> {
    let atlas = build_atlas(f.n() + q)?;
    atlas.confirm_assertion1(f, q)
}
