//! Problem statement: which flag variety, which multidegree, which special
//! Schubert classes.

use std::fmt;

use crate::error::{Error, Result};

/// The partial flag variety `F(s₁,…,s_l; n)`.
///
/// Steps are addressed one-based with the conventions `s₀ = 0` and
/// `s_{l+1} = n`; the quotient ranks are `r_i = n − s_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagShape {
    n: usize,
    s: Vec<usize>,
}

impl FlagShape {
    pub fn new(n: usize, s: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ShapeInvalid("n must be positive".into()));
        }
        if s.is_empty() {
            return Err(Error::ShapeInvalid(
                "at least one flag step is required".into(),
            ));
        }
        if let Some(&bad) = s.iter().find(|&&si| si == 0 || si >= n) {
            return Err(Error::ShapeInvalid(format!(
                "flag step {bad} lies outside the open interval (0, {n})"
            )));
        }
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::ShapeInvalid(format!(
                "flag steps {s:?} are not strictly increasing"
            )));
        }
        Ok(FlagShape { n, s })
    }

    /// Grassmannian of `k`-planes in `ℂⁿ`.
    pub fn grassmannian(k: usize, n: usize) -> Result<Self> {
        FlagShape::new(n, vec![k])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of flag steps `l`.
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn steps(&self) -> &[usize] {
        &self.s
    }

    /// `s_i` for `0 ≤ i ≤ l+1`.
    pub fn step(&self, i: usize) -> usize {
        match i {
            0 => 0,
            i if i <= self.s.len() => self.s[i - 1],
            i if i == self.s.len() + 1 => self.n,
            _ => panic!("flag step index {i} out of range 0..={}", self.s.len() + 1),
        }
    }

    /// `r_i = n − s_i` for `0 ≤ i ≤ l+1`.
    pub fn rank(&self, i: usize) -> usize {
        self.n - self.step(i)
    }

    /// Dimension of the flag manifold, `Σ_i s_i (s_{i+1} − s_i)`.
    pub fn flag_dimension(&self) -> u64 {
        (1..=self.len())
            .map(|i| (self.step(i) * (self.step(i + 1) - self.step(i))) as u64)
            .sum()
    }
}

impl fmt::Display for FlagShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self.s.iter().map(|v| v.to_string()).collect();
        write!(f, "F({}; {})", steps.join(","), self.n)
    }
}

/// Every flag shape with ambient dimension `n`, in lexicographic order of
/// the step lists.
pub fn all_shapes(n: usize) -> Vec<FlagShape> {
    let inner = n.saturating_sub(1);
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << inner) {
        let s: Vec<usize> = (0..inner)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| b + 1)
            .collect();
        out.push(FlagShape::new(n, s).expect("subset of 1..n is a valid shape"));
    }
    out.sort_by(|a, b| a.s.cmp(&b.s));
    out
}

/// The multidegree `(d₁,…,d_l)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeVector(Vec<u32>);

impl DegreeVector {
    pub fn new(shape: &FlagShape, d: Vec<u32>) -> Result<Self> {
        if d.len() != shape.len() {
            return Err(Error::ShapeInvalid(format!(
                "degree vector has {} entries but the flag has {} steps",
                d.len(),
                shape.len()
            )));
        }
        Ok(DegreeVector(d))
    }

    pub fn zero(shape: &FlagShape) -> Self {
        DegreeVector(vec![0; shape.len()])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `d_i` for one-based `i`.
    pub fn get(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }
}

/// The special class `c_β(S_α^*)` inserted at a marked point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Insertion {
    pub alpha: usize,
    pub beta: usize,
}

impl Insertion {
    pub fn new(alpha: usize, beta: usize) -> Self {
        Insertion { alpha, beta }
    }
}

impl fmt::Display for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.alpha, self.beta)
    }
}

/// A validated problem: the dimension condition holds and every insertion is
/// in range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    shape: FlagShape,
    degrees: DegreeVector,
    insertions: Vec<Insertion>,
    allow_beta_overflow: bool,
    dimension: u64,
}

impl ProblemSpec {
    pub fn new(
        shape: FlagShape,
        degrees: DegreeVector,
        insertions: Vec<Insertion>,
        allow_beta_overflow: bool,
    ) -> Result<Self> {
        if degrees.as_slice().len() != shape.len() {
            return Err(Error::ShapeInvalid(
                "degree vector length does not match the flag".into(),
            ));
        }
        for ins in &insertions {
            check_insertion(&shape, ins, allow_beta_overflow)?;
        }
        let dimension = dim_fquot(&shape, &degrees);
        let insertion_degree: u64 = insertions.iter().map(|i| i.beta as u64).sum();
        if insertion_degree != dimension {
            return Err(Error::DimensionMismatch {
                insertion_degree,
                dimension,
            });
        }
        Ok(ProblemSpec {
            shape,
            degrees,
            insertions,
            allow_beta_overflow,
            dimension,
        })
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    pub fn degrees(&self) -> &DegreeVector {
        &self.degrees
    }

    pub fn insertions(&self) -> &[Insertion] {
        &self.insertions
    }

    pub fn allow_beta_overflow(&self) -> bool {
        self.allow_beta_overflow
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    /// True when some insertion violates `β < s_{α+1} − s_{α−1}`, i.e. the
    /// result lies outside the regime where the formula is proven.
    pub fn exceeds_beta_bound(&self) -> bool {
        self.insertions
            .iter()
            .any(|ins| ins.beta >= beta_bound(&self.shape, ins.alpha))
    }
}

/// `s_{α+1} − s_{α−1}`; admissible β are strictly below it.
pub fn beta_bound(shape: &FlagShape, alpha: usize) -> usize {
    shape.step(alpha + 1) - shape.step(alpha - 1)
}

fn check_insertion(shape: &FlagShape, ins: &Insertion, allow_beta_overflow: bool) -> Result<()> {
    if ins.alpha == 0 || ins.alpha > shape.len() {
        return Err(Error::ShapeInvalid(format!(
            "insertion alpha {} is not a flag step index in 1..={}",
            ins.alpha,
            shape.len()
        )));
    }
    let out_of_range = |reason: String| Error::BetaOutOfRange {
        alpha: ins.alpha,
        beta: ins.beta,
        reason,
    };
    if ins.beta == 0 {
        return Err(out_of_range("beta must be positive".into()));
    }
    let bound = beta_bound(shape, ins.alpha);
    if !allow_beta_overflow && ins.beta >= bound {
        return Err(out_of_range(format!(
            "beta must be < s_{{alpha+1}} - s_{{alpha-1}} = {bound} (override with allow_beta_overflow)"
        )));
    }
    let rank = shape.step(ins.alpha);
    if ins.beta > rank {
        return Err(out_of_range(format!(
            "beta exceeds the rank s_alpha = {rank} of the subbundle"
        )));
    }
    Ok(())
}

/// Dimension of the flag Quot scheme:
/// `Σ_i r_i (r_{i−1} − r_i) + Σ_i d_i (s_{i+1} − s_{i−1})`, with `r₀ = n`.
pub fn dim_fquot(shape: &FlagShape, degrees: &DegreeVector) -> u64 {
    assert_eq!(degrees.as_slice().len(), shape.len());
    (1..=shape.len())
        .map(|i| {
            let classical = shape.rank(i) * (shape.rank(i - 1) - shape.rank(i));
            let slope = shape.step(i + 1) - shape.step(i - 1);
            classical as u64 + degrees.get(i) as u64 * slope as u64
        })
        .sum()
}

/// Parses and validates raw problem data in one step.
pub fn validate_problem(
    n: usize,
    s: &[usize],
    d: &[u32],
    insertions: &[Insertion],
    allow_beta_overflow: bool,
) -> Result<ProblemSpec> {
    let shape = FlagShape::new(n, s.to_vec())?;
    let degrees = DegreeVector::new(&shape, d.to_vec())?;
    ProblemSpec::new(shape, degrees, insertions.to_vec(), allow_beta_overflow)
}
