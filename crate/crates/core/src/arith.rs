//! Exact arithmetic primitives: rationals, integer linear forms in the
//! equivariant parameters (ħ, λ₁…λₙ), weight samples and elementary
//! symmetric functions.
//!
//! Nothing in here rounds. Characters are evaluated at a sample first and only
//! then combined, so no polynomial algebra is needed downstream.

use std::fmt;
use std::ops::{Add, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Default bound on |ħ| and |λ_j| for random samples.
pub const DEFAULT_MAGNITUDE: u64 = 1 << 31;

pub fn rational_from_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// An integer linear form `c·ħ + Σ_j c_j·λ_j`.
///
/// Weight indices are zero-based internally; `Display` prints them one-based
/// (`λ1` is the first coordinate weight).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    hbar: i64,
    // sorted by index, no zero coefficients
    lambda: Vec<(usize, i64)>,
}

impl Character {
    pub fn zero() -> Self {
        Character {
            hbar: 0,
            lambda: Vec::new(),
        }
    }

    /// The pure loop-rotation character `c·ħ`.
    pub fn hbar(c: i64) -> Self {
        Character {
            hbar: c,
            lambda: Vec::new(),
        }
    }

    /// `c·ħ + λ_plus − λ_minus`. Collapses to `c·ħ` when `plus == minus`.
    pub fn weight_difference(c: i64, plus: usize, minus: usize) -> Self {
        if plus == minus {
            return Character::hbar(c);
        }
        let lambda = if plus < minus {
            vec![(plus, 1), (minus, -1)]
        } else {
            vec![(minus, -1), (plus, 1)]
        };
        Character { hbar: c, lambda }
    }

    /// Builds a form from arbitrary (index, coefficient) pairs, merging
    /// repeated indices.
    pub fn from_parts(hbar: i64, coeffs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut lambda: Vec<(usize, i64)> = coeffs.into_iter().collect();
        lambda.sort_unstable_by_key(|&(j, _)| j);
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(lambda.len());
        for (j, c) in lambda {
            match merged.last_mut() {
                Some((last, acc)) if *last == j => *acc += c,
                _ => merged.push((j, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        Character {
            hbar,
            lambda: merged,
        }
    }

    pub fn hbar_coeff(&self) -> i64 {
        self.hbar
    }

    pub fn lambda_coeffs(&self) -> &[(usize, i64)] {
        &self.lambda
    }

    pub fn is_zero(&self) -> bool {
        self.hbar == 0 && self.lambda.is_empty()
    }

    pub fn eval(&self, w: &WeightSample) -> Result<Rational> {
        eval_character(self, w)
    }
}

impl Add for &Character {
    type Output = Character;

    fn add(self, rhs: &Character) -> Character {
        Character::from_parts(
            self.hbar + rhs.hbar,
            self.lambda.iter().chain(rhs.lambda.iter()).copied(),
        )
    }
}

impl Neg for &Character {
    type Output = Character;

    fn neg(self) -> Character {
        Character {
            hbar: -self.hbar,
            lambda: self.lambda.iter().map(|&(j, c)| (j, -c)).collect(),
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, c: i64, sym: &str| -> fmt::Result {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            first = false;
            match c.abs() {
                1 => write!(f, "{sign}{sym}"),
                m => write!(f, "{sign}{m}{sym}"),
            }
        };
        if self.hbar != 0 {
            term(f, self.hbar, "ħ")?;
        }
        // positive weights first: λ3-λ1 rather than -λ1+λ3
        let positive = self.lambda.iter().filter(|t| t.1 > 0);
        for &(j, c) in positive.chain(self.lambda.iter().filter(|t| t.1 < 0)) {
            term(f, c, &format!("λ{}", j + 1))?;
        }
        Ok(())
    }
}

/// An exact assignment of values to ħ and λ₁…λₙ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSample {
    hbar: Rational,
    lambda: Vec<Rational>,
}

impl WeightSample {
    pub fn new(hbar: Rational, lambda: Vec<Rational>) -> Result<Self> {
        if hbar.is_zero() {
            return Err(Error::InvalidSample("hbar must be nonzero".into()));
        }
        for (i, a) in lambda.iter().enumerate() {
            if lambda[i + 1..].contains(a) {
                return Err(Error::InvalidSample(format!(
                    "lambda values must be pairwise distinct (repeated {a})"
                )));
            }
        }
        Ok(WeightSample { hbar, lambda })
    }

    pub fn from_integers(hbar: i64, lambda: &[i64]) -> Result<Self> {
        WeightSample::new(
            rational_from_int(hbar),
            lambda.iter().map(|&v| rational_from_int(v)).collect(),
        )
    }

    pub fn hbar(&self) -> &Rational {
        &self.hbar
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    /// Multiplies every parameter by `t`.
    pub fn scaled(&self, t: &Rational) -> Result<Self> {
        WeightSample::new(&self.hbar * t, self.lambda.iter().map(|v| v * t).collect())
    }

    /// The sample whose j-th weight is this sample's `perm[j]`-th weight.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.lambda.len() {
            return Err(Error::InvalidSample(
                "permutation length differs from sample size".into(),
            ));
        }
        let lambda = perm
            .iter()
            .map(|&p| {
                self.lambda.get(p).cloned().ok_or(Error::IndexOutOfRange {
                    index: p,
                    n: self.lambda.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        WeightSample::new(self.hbar.clone(), lambda)
    }
}

pub fn eval_character(ch: &Character, w: &WeightSample) -> Result<Rational> {
    let mut acc = Rational::zero();
    if ch.hbar != 0 {
        acc += &w.hbar * BigInt::from(ch.hbar);
    }
    for &(j, c) in &ch.lambda {
        let v = w.lambda.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            n: w.lambda.len(),
        })?;
        match c {
            1 => acc += v,
            -1 => acc -= v,
            _ => acc += v * BigInt::from(c),
        }
    }
    Ok(acc)
}

/// All elementary symmetric functions `e_0..=e_len` of `values`.
pub fn elementary_symmetric_all(values: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); values.len() + 1];
    e[0] = Rational::one();
    for (count, v) in values.iter().enumerate() {
        for k in (1..=count + 1).rev() {
            let term = &e[k - 1] * v;
            e[k] += term;
        }
    }
    e
}

pub fn elementary_symmetric(values: &[Rational], k: usize) -> Result<Rational> {
    if k > values.len() {
        return Err(Error::DegreeOutOfRange {
            k,
            len: values.len(),
        });
    }
    if k == 0 {
        return Ok(Rational::one());
    }
    // e_k only needs the first k+1 entries of the running table
    let mut e = vec![Rational::zero(); k + 1];
    e[0] = Rational::one();
    for (count, v) in values.iter().enumerate() {
        for i in (1..=k.min(count + 1)).rev() {
            let term = &e[i - 1] * v;
            e[i] += term;
        }
    }
    Ok(e.swap_remove(k))
}

/// Deterministic pseudo-random sample with `n` distinct integer weights and a
/// nonzero ħ, all bounded in absolute value by [`DEFAULT_MAGNITUDE`].
pub fn sample_weights(n: usize, seed: u64, attempt: u64) -> WeightSample {
    sample_weights_with_magnitude(n, seed, attempt, DEFAULT_MAGNITUDE)
}

/// As [`sample_weights`], with values drawn from `[-magnitude, magnitude]`.
/// `magnitude` is clamped below so that `n` distinct values always exist.
pub fn sample_weights_with_magnitude(
    n: usize,
    seed: u64,
    attempt: u64,
    magnitude: u64,
) -> WeightSample {
    let bound = magnitude.max(n as u64).min(i64::MAX as u64) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    let hbar = loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            break v;
        }
    };
    let mut lambda: Vec<i64> = Vec::with_capacity(n);
    while lambda.len() < n {
        let v = rng.gen_range(-bound..=bound);
        if !lambda.contains(&v) {
            lambda.push(v);
        }
    }
    WeightSample::from_integers(hbar, &lambda).expect("sampled weights satisfy the invariants")
}
