//! Torus fixed points of the flag Quot scheme.
//!
//! A fixed point is a chain of coordinate subsets `J₁ ⊆ … ⊆ J_l` with
//! `|J_i| = s_i`, together with the exponents of the monomial subsheaves
//! `x^{a_{i,j}} y^{b_{i,j}} O(−d_{i,j}) e_j` spanning each level. Both layers
//! are enumerated lazily; nothing is ever materialized globally.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problem::{DegreeVector, FlagShape};

/// Nested coordinate subsets `J₁ ⊆ … ⊆ J_l`, each stored sorted with
/// zero-based coordinate indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetChain {
    levels: Vec<Vec<usize>>,
}

impl SubsetChain {
    /// Builds a chain from per-level sets and checks nesting and sizes
    /// against `shape`.
    pub fn new(shape: &FlagShape, mut levels: Vec<Vec<usize>>) -> Result<Self> {
        if levels.len() != shape.len() {
            return Err(Error::Precondition(format!(
                "chain has {} levels, flag has {}",
                levels.len(),
                shape.len()
            )));
        }
        for (i, level) in levels.iter_mut().enumerate() {
            level.sort_unstable();
            level.dedup();
            if level.len() != shape.step(i + 1) {
                return Err(Error::Precondition(format!(
                    "level {} has {} elements, expected {}",
                    i + 1,
                    level.len(),
                    shape.step(i + 1)
                )));
            }
            if level.iter().any(|&j| j >= shape.n()) {
                return Err(Error::Precondition("chain index out of range".into()));
            }
        }
        for w in levels.windows(2) {
            if !w[0].iter().all(|j| w[1].binary_search(j).is_ok()) {
                return Err(Error::Precondition("chain levels are not nested".into()));
            }
        }
        Ok(SubsetChain { levels })
    }

    /// Chain from a block labelling: `labels[j] = k` puts coordinate `j` in
    /// `J_{k+1} ∖ J_k` (and in no level when `k = l`).
    fn from_labels(labels: &[usize], l: usize) -> Self {
        let levels = (0..l)
            .map(|i| (0..labels.len()).filter(|&j| labels[j] <= i).collect())
            .collect();
        SubsetChain { levels }
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    /// `J_i` for one-based `i`.
    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i - 1]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Relabels coordinates through `perm` (coordinate `j` becomes `perm[j]`).
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let levels = self
            .levels
            .iter()
            .map(|lvl| {
                let mut v: Vec<usize> = lvl.iter().map(|&j| perm[j]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        SubsetChain { levels }
    }
}

impl fmt::Display for SubsetChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lvl) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, "⊆")?;
            }
            let items: Vec<String> = lvl.iter().map(|j| (j + 1).to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

/// One torus fixed point. `a[i][t]` and `b[i][t]` belong to the coordinate
/// `chain.levels()[i][t]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedPoint {
    chain: Arc<SubsetChain>,
    a: Vec<Vec<u32>>,
    b: Vec<Vec<u32>>,
}

impl FixedPoint {
    /// Builds a fixed point, validating every structural invariant.
    pub fn new(
        shape: &FlagShape,
        degrees: &DegreeVector,
        chain: SubsetChain,
        a: Vec<Vec<u32>>,
        b: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let fp = FixedPoint {
            chain: Arc::new(chain),
            a,
            b,
        };
        fp.validate(shape, degrees)?;
        Ok(fp)
    }

    pub fn chain(&self) -> &SubsetChain {
        &self.chain
    }

    /// Exponents of `x` per level, aligned with the chain levels.
    pub fn a(&self) -> &[Vec<u32>] {
        &self.a
    }

    /// Exponents of `y` per level, aligned with the chain levels.
    pub fn b(&self) -> &[Vec<u32>] {
        &self.b
    }

    /// `d_{i,j} = a_{i,j} + b_{i,j}` at zero-based level `i`, position `t`.
    pub fn d(&self, i: usize, t: usize) -> u32 {
        self.a[i][t] + self.b[i][t]
    }

    /// Checks nesting, row sums and the monotonicity `a_{i,j} ≥ a_{i+1,j}`,
    /// `b_{i,j} ≥ b_{i+1,j}`.
    pub fn validate(&self, shape: &FlagShape, degrees: &DegreeVector) -> Result<()> {
        let bad = |msg: String| Err(Error::Precondition(msg));
        SubsetChain::new(shape, self.chain.levels.clone())?;
        let l = shape.len();
        if self.a.len() != l || self.b.len() != l {
            return bad("weight matrices have the wrong number of levels".into());
        }
        for i in 0..l {
            let size = self.chain.levels[i].len();
            if self.a[i].len() != size || self.b[i].len() != size {
                return bad(format!("level {} weights misaligned with the chain", i + 1));
            }
            let row: u64 = (0..size).map(|t| self.d(i, t) as u64).sum();
            if row != degrees.get(i + 1) as u64 {
                return bad(format!(
                    "level {} degrees sum to {row}, expected {}",
                    i + 1,
                    degrees.get(i + 1)
                ));
            }
            if i + 1 < l {
                for (t, j) in self.chain.levels[i].iter().enumerate() {
                    let u = self.chain.levels[i + 1]
                        .binary_search(j)
                        .expect("nested chain");
                    if self.a[i][t] < self.a[i + 1][u] || self.b[i][t] < self.b[i + 1][u] {
                        return bad(format!(
                            "monotonicity fails at level {} coordinate {}",
                            i + 1,
                            j + 1
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.chain)?;
        for (i, lvl) in self.chain.levels.iter().enumerate() {
            let cells: Vec<String> = lvl
                .iter()
                .enumerate()
                .map(|(t, j)| format!("{}:({},{})", j + 1, self.a[i][t], self.b[i][t]))
                .collect();
            write!(f, " [{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Lazy stream of all subset chains of a flag shape, in lexicographic order
/// of their block labellings.
#[derive(Clone, Debug)]
pub struct ChainIter {
    labels: Vec<usize>,
    l: usize,
    done: bool,
}

impl Iterator for ChainIter {
    type Item = SubsetChain;

    fn next(&mut self) -> Option<SubsetChain> {
        if self.done {
            return None;
        }
        let chain = SubsetChain::from_labels(&self.labels, self.l);
        self.done = !next_permutation(&mut self.labels);
        Some(chain)
    }
}

// Lexicographic successor of a multiset permutation; false once the last
// arrangement has been reached.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let pivot = i - 1;
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[pivot])
        .expect("successor exists");
    v.swap(pivot, j);
    v[i..].reverse();
    true
}

pub fn enumerate_chains(shape: &FlagShape) -> ChainIter {
    let l = shape.len();
    let labels = (0..=l)
        .flat_map(|k| std::iter::repeat_n(k, shape.step(k + 1) - shape.step(k)))
        .collect();
    ChainIter {
        labels,
        l,
        done: false,
    }
}

/// `n! / (s₁!(s₂−s₁)!⋯(n−s_l)!)`.
pub fn chain_count(shape: &FlagShape) -> u64 {
    let mut count: u128 = 1;
    let mut placed = 0u128;
    for k in 1..=shape.len() + 1 {
        let block = (shape.step(k) - shape.step(k - 1)) as u128;
        // multiply by C(placed + block, block) incrementally; stays integral
        for t in 1..=block {
            count = count * (placed + t) / t;
        }
        placed += block;
    }
    u64::try_from(count).expect("chain count fits in u64")
}

/// Weak compositions of `total` into a fixed number of parts, stepped in
/// place, starting from `[total, 0, …, 0]` and ending at `[0, …, 0, total]`.
#[derive(Clone, Debug)]
struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    fn first(total: u32, len: usize) -> Self {
        let mut parts = vec![0; len];
        parts[0] = total;
        Composition { parts }
    }

    fn step(&mut self) -> bool {
        let k = self.parts.len();
        let Some(i) = (0..k - 1).rev().find(|&i| self.parts[i] > 0) else {
            return false;
        };
        let tail = std::mem::take(&mut self.parts[k - 1]);
        self.parts[i] -= 1;
        self.parts[i + 1] = tail + 1;
        true
    }
}

/// Lazy stream of all weight decorations of one chain.
///
/// Levels are filled from `l` down to `1`: each level adds a composition of
/// its remaining degree on top of the level above, so monotonicity holds by
/// construction and infeasible branches are cut as soon as the level above
/// already exceeds `d_i`.
#[derive(Clone, Debug)]
pub struct WeightMatrices {
    chain: Arc<SubsetChain>,
    degrees: Vec<u32>,
    // position of levels[i][t] inside levels[i + 1]
    parent_pos: Vec<Vec<usize>>,
    comps: Vec<Composition>,
    a: Vec<Vec<u32>>,
    b: Vec<Vec<u32>>,
    started: bool,
    done: bool,
}

impl WeightMatrices {
    fn new(degrees: &DegreeVector, chain: Arc<SubsetChain>) -> Self {
        let l = chain.len();
        let parent_pos = (0..l)
            .map(|i| {
                if i + 1 == l {
                    Vec::new()
                } else {
                    chain.levels[i]
                        .iter()
                        .map(|j| chain.levels[i + 1].binary_search(j).expect("nested chain"))
                        .collect()
                }
            })
            .collect();
        let a: Vec<Vec<u32>> = chain.levels.iter().map(|lvl| vec![0; lvl.len()]).collect();
        WeightMatrices {
            degrees: degrees.as_slice().to_vec(),
            parent_pos,
            comps: chain
                .levels
                .iter()
                .map(|lvl| Composition::first(0, 2 * lvl.len()))
                .collect(),
            b: a.clone(),
            a,
            chain,
            started: false,
            done: false,
        }
    }

    fn floor(&self, i: usize, t: usize) -> (u32, u32) {
        if i + 1 == self.chain.len() {
            (0, 0)
        } else {
            let u = self.parent_pos[i][t];
            (self.a[i + 1][u], self.b[i + 1][u])
        }
    }

    fn apply(&mut self, i: usize) {
        for t in 0..self.chain.levels[i].len() {
            let (fa, fb) = self.floor(i, t);
            self.a[i][t] = fa + self.comps[i].parts[2 * t];
            self.b[i][t] = fb + self.comps[i].parts[2 * t + 1];
        }
    }

    // Resets levels below `from` to their first composition. On failure
    // returns the level whose remaining degree went negative.
    fn reset_below(&mut self, from: usize) -> std::result::Result<(), usize> {
        for i in (0..from).rev() {
            let used: u64 = (0..self.chain.levels[i].len())
                .map(|t| {
                    let (fa, fb) = self.floor(i, t);
                    (fa + fb) as u64
                })
                .sum();
            let di = self.degrees[i] as u64;
            if used > di {
                return Err(i);
            }
            self.comps[i] = Composition::first((di - used) as u32, 2 * self.chain.levels[i].len());
            self.apply(i);
        }
        Ok(())
    }

    // Finds the next feasible state by stepping level `level` (and carrying
    // upward when it is exhausted).
    fn advance(&mut self, mut level: usize) -> bool {
        let top = self.chain.len() - 1;
        loop {
            if !self.comps[level].step() {
                if level == top {
                    return false;
                }
                level += 1;
                continue;
            }
            self.apply(level);
            match self.reset_below(level) {
                Ok(()) => return true,
                Err(failed) => level = failed + 1,
            }
        }
    }

    fn current(&self) -> FixedPoint {
        FixedPoint {
            chain: Arc::clone(&self.chain),
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }
}

impl Iterator for WeightMatrices {
    type Item = FixedPoint;

    fn next(&mut self) -> Option<FixedPoint> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            let top = self.chain.len();
            match self.reset_below(top) {
                Ok(()) => true,
                Err(failed) => self.advance(failed + 1),
            }
        } else {
            self.advance(0)
        };
        if ok {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

pub fn enumerate_weight_matrices(degrees: &DegreeVector, chain: SubsetChain) -> WeightMatrices {
    WeightMatrices::new(degrees, Arc::new(chain))
}

/// Every fixed point of `fQuot_d(Fl)`: chains in order, each followed by its
/// weight decorations.
pub fn enumerate_fixed_points<'a>(
    shape: &FlagShape,
    degrees: &'a DegreeVector,
) -> impl Iterator<Item = FixedPoint> + 'a {
    enumerate_chains(shape).flat_map(move |chain| enumerate_weight_matrices(degrees, chain))
}

/// Number of fixed points. Every chain has the same number of decorations,
/// so this counts the decorations of the first chain only.
pub fn count_fixed_points(shape: &FlagShape, degrees: &DegreeVector) -> u64 {
    let first = enumerate_chains(shape)
        .next()
        .expect("a shape has at least one chain");
    let per_chain = enumerate_weight_matrices(degrees, first).count() as u64;
    per_chain * chain_count(shape)
}
