//! Torus localization on the flag Quot scheme.
//!
//! At a fixed point the tangent space of `∏ Quot_{d_i}(s_i, n)` and the
//! obstruction-free quotient `⊕ Hom(S_i, Q_{i+1})` split into one-dimensional
//! eigenspaces; their characters are the `tang1` and `tang2` lists. The
//! equivariant Euler class of `T fQuot` is `∏ tang1 / ∏ tang2`, so each fixed
//! point contributes
//!
//! ```text
//!   ∏_k σ_{α_k}^{β_k} · ∏ tang2 / ∏ tang1
//! ```
//!
//! evaluated at an exact weight sample. When the insertion degrees add up to
//! `dim fQuot` the sum is a constant, independent of the sample.

use std::sync::atomic::{AtomicBool, Ordering};
use std::thread;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{
    elementary_symmetric, sample_weights_with_magnitude, Character, Rational, WeightSample,
    DEFAULT_MAGNITUDE,
};
use crate::error::{Error, Result};
use crate::fixed_points::{enumerate_chains, enumerate_weight_matrices, FixedPoint};
use crate::problem::{FlagShape, Insertion, ProblemSpec};

/// Characters of the tangent space of the product of Quot schemes (`tang1`)
/// and of `⊕_{i<l} Hom(S_i, Q_{i+1})` (`tang2`), with multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TangentData {
    pub tang1: Vec<Character>,
    pub tang2: Vec<Character>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Quot,
    Compat,
}

/// Visits every tangent character as `(ħ coefficient, plus, minus)`, meaning
/// `c·ħ + λ_plus − λ_minus` (just `c·ħ` when `plus == minus`).
fn visit_characters(
    fp: &FixedPoint,
    shape: &FlagShape,
    mut visit: impl FnMut(Side, i64, usize, usize),
) {
    let chain = fp.chain().levels();
    let l = shape.len();
    let n = shape.n();
    let mut outside = vec![true; n];
    for i in 0..l {
        let here = &chain[i];
        let (a, b) = (&fp.a()[i], &fp.b()[i]);

        outside.iter_mut().for_each(|o| *o = true);
        for &j in here {
            outside[j] = false;
        }
        for (t, &j) in here.iter().enumerate() {
            let (aj, bj) = (a[t] as i64, b[t] as i64);
            for (u, &jp) in here.iter().enumerate() {
                for p in 0..a[u] as i64 {
                    visit(Side::Quot, p - aj, jp, j);
                }
                for p in 0..b[u] as i64 {
                    visit(Side::Quot, bj - p, jp, j);
                }
            }
            for m in (0..n).filter(|&m| outside[m]) {
                for p in 0..=(aj + bj) {
                    visit(Side::Quot, p - aj, m, j);
                }
            }
        }

        if i + 1 == l {
            continue;
        }
        let next = &chain[i + 1];
        let (na, nb) = (&fp.a()[i + 1], &fp.b()[i + 1]);
        outside.iter_mut().for_each(|o| *o = true);
        for &j in next {
            outside[j] = false;
        }
        for (t, &j) in here.iter().enumerate() {
            let (aj, bj) = (a[t] as i64, b[t] as i64);
            for (u, &jp) in next.iter().enumerate() {
                for p in 0..na[u] as i64 {
                    visit(Side::Compat, p - aj, jp, j);
                }
                for p in 0..nb[u] as i64 {
                    visit(Side::Compat, bj - p, jp, j);
                }
            }
            for m in (0..n).filter(|&m| outside[m]) {
                for p in 0..=(aj + bj) {
                    visit(Side::Compat, p - aj, m, j);
                }
            }
        }
    }
}

pub fn tangent_characters(fp: &FixedPoint, shape: &FlagShape) -> TangentData {
    let mut data = TangentData::default();
    visit_characters(fp, shape, |side, c, plus, minus| {
        let ch = Character::weight_difference(c, plus, minus);
        match side {
            Side::Quot => data.tang1.push(ch),
            Side::Compat => data.tang2.push(ch),
        }
    });
    data
}

fn eval_raw(w: &WeightSample, c: i64, plus: usize, minus: usize) -> Rational {
    let mut v = w.hbar() * BigInt::from(c);
    if plus != minus {
        v += &w.lambda()[plus];
        v -= &w.lambda()[minus];
    }
    v
}

/// `e_β` of the dual fiber characters `−(a_{α,j} ħ + λ_j)`, `j ∈ J_α`, of the
/// tautological subsheaf over `0 ∈ P¹`.
pub fn sigma(fp: &FixedPoint, alpha: usize, beta: usize, w: &WeightSample) -> Result<Rational> {
    if alpha == 0 || alpha > fp.chain().len() {
        return Err(Error::Precondition(format!("alpha {alpha} out of range")));
    }
    let level = fp.chain().level(alpha);
    if level.iter().any(|&j| j >= w.n()) {
        return Err(Error::IndexOutOfRange {
            index: level.iter().copied().max().unwrap_or(0),
            n: w.n(),
        });
    }
    let a = &fp.a()[alpha - 1];
    let values: Vec<Rational> = level
        .iter()
        .zip(a)
        .map(|(&j, &aj)| -(w.hbar() * BigInt::from(aj) + &w.lambda()[j]))
        .collect();
    elementary_symmetric(&values, beta)
}

/// One fixed point's term of the localization sum.
pub fn contribution(fp: &FixedPoint, problem: &ProblemSpec, w: &WeightSample) -> Result<Rational> {
    let shape = problem.shape();
    if w.n() != shape.n() {
        return Err(Error::Precondition(format!(
            "sample has {} weights, flag needs {}",
            w.n(),
            shape.n()
        )));
    }
    let mut denominator = Rational::one();
    let mut compat = Rational::one();
    let mut vanished = false;
    visit_characters(fp, shape, |side, c, plus, minus| {
        let v = eval_raw(w, c, plus, minus);
        match side {
            Side::Quot => {
                vanished |= v.is_zero();
                denominator *= v;
            }
            Side::Compat => compat *= v,
        }
    });
    if vanished {
        return Err(Error::ZeroDenominator);
    }
    let mut numerator = compat;
    for (ins, multiplicity) in grouped(problem.insertions()) {
        let s = sigma(fp, ins.alpha, ins.beta, w)?;
        if s.is_zero() {
            return Ok(Rational::zero());
        }
        numerator *= num_traits::pow(s, multiplicity);
    }
    Ok(numerator / denominator)
}

// Insertions as (class, multiplicity), in sorted order.
fn grouped(insertions: &[Insertion]) -> Vec<(Insertion, usize)> {
    let mut sorted = insertions.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<(Insertion, usize)> = Vec::new();
    for ins in sorted {
        match out.last_mut() {
            Some((last, m)) if *last == ins => *m += 1,
            _ => out.push((ins, 1)),
        }
    }
    out
}

/// Sum of all contributions at one sample, split over `workers` threads by
/// chain index. Returns the total and the number of fixed points visited.
pub fn localization_sum(
    problem: &ProblemSpec,
    w: &WeightSample,
    workers: usize,
) -> Result<(Rational, u64)> {
    let workers = workers.max(1);
    let shape = problem.shape();
    let degrees = problem.degrees();
    let abort = AtomicBool::new(false);

    let run = |worker: usize| -> Result<(Rational, u64)> {
        let mut total = Rational::zero();
        let mut count = 0u64;
        for chain in enumerate_chains(shape).skip(worker).step_by(workers) {
            if abort.load(Ordering::Relaxed) {
                break;
            }
            for fp in enumerate_weight_matrices(degrees, chain) {
                match contribution(&fp, problem, w) {
                    Ok(v) => total += v,
                    Err(e) => {
                        abort.store(true, Ordering::Relaxed);
                        return Err(e);
                    }
                }
                count += 1;
            }
        }
        Ok((total, count))
    };

    let partials: Vec<Result<(Rational, u64)>> = if workers == 1 {
        vec![run(0)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|worker| {
                    let run = &run;
                    scope.spawn(move || run(worker))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("localization worker panicked"))
                .collect()
        })
    };

    let mut total = Rational::zero();
    let mut count = 0u64;
    for partial in partials {
        let (t, c) = partial?;
        total += t;
        count += c;
    }
    Ok((total, count))
}

/// Knobs for [`invariant_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub seed: u64,
    pub samples: usize,
    pub workers: usize,
    pub magnitude: u64,
    /// Upper bound on sample draws that hit a vanishing denominator.
    pub max_resamples: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            seed: 0,
            samples: 2,
            workers: 1,
            magnitude: DEFAULT_MAGNITUDE,
            max_resamples: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantResult {
    pub value: Rational,
    pub is_integer: bool,
    pub fixed_point_count: u64,
    pub dimension: u64,
    pub samples_used: usize,
    pub seed: u64,
    /// Set when some insertion exceeds `β < s_{α+1} − s_{α−1}` (only possible
    /// with the override).
    pub beta_overflow: bool,
}

impl InvariantResult {
    pub fn as_integer(&self) -> Option<BigInt> {
        self.is_integer.then(|| self.value.to_integer())
    }
}

/// Evaluates `f` at `samples` admissible samples drawn from `seed`, resampling
/// whenever `f` reports a vanishing denominator.
pub fn sample_totals(
    n: usize,
    config: &EngineConfig,
    mut f: impl FnMut(&WeightSample) -> Result<Rational>,
) -> Result<Vec<Rational>> {
    let mut totals = Vec::with_capacity(config.samples);
    let mut attempt = 0u64;
    let mut rejected = 0u64;
    while totals.len() < config.samples {
        let w = sample_weights_with_magnitude(n, config.seed, attempt, config.magnitude);
        attempt += 1;
        match f(&w) {
            Ok(v) => totals.push(v),
            Err(Error::ZeroDenominator) => {
                rejected += 1;
                if rejected > config.max_resamples {
                    return Err(Error::ResampleExhausted { attempts: attempt });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(totals)
}

/// Checks that all sample totals coincide and are integral; returns the
/// common value.
pub fn certify_totals(totals: &[Rational]) -> Result<Rational> {
    let first = totals
        .first()
        .cloned()
        .ok_or_else(|| Error::Precondition("no samples".into()))?;
    if let Some(other) = totals.iter().find(|t| **t != first) {
        return Err(Error::SampleDisagreement {
            first: Box::new(first),
            other: Box::new(other.clone()),
        });
    }
    if !first.is_integer() {
        return Err(Error::NonIntegerResult(Box::new(first)));
    }
    Ok(first)
}

pub fn invariant(
    problem: &ProblemSpec,
    seed: u64,
    samples: usize,
    workers: usize,
) -> Result<InvariantResult> {
    invariant_with(
        problem,
        &EngineConfig {
            seed,
            samples,
            workers,
            ..EngineConfig::default()
        },
    )
}

/// The Gromov invariant of `problem`, certified by agreement across
/// `config.samples` independent samples.
pub fn invariant_with(problem: &ProblemSpec, config: &EngineConfig) -> Result<InvariantResult> {
    if config.samples < 2 {
        return Err(Error::Precondition(
            "at least two samples are required".into(),
        ));
    }
    let mut fixed_point_count = 0;
    let totals = sample_totals(problem.shape().n(), config, |w| {
        let (total, count) = localization_sum(problem, w, config.workers)?;
        fixed_point_count = count;
        Ok(total)
    })?;
    let value = certify_totals(&totals)?;
    Ok(InvariantResult {
        value,
        is_integer: true,
        fixed_point_count,
        dimension: problem.dimension(),
        samples_used: totals.len(),
        seed: config.seed,
        beta_overflow: problem.exceeds_beta_bound(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{eval_character, rational_from_int, sample_weights};
    use crate::fixed_points::{enumerate_fixed_points, SubsetChain};
    use crate::problem::{all_shapes, dim_fquot, validate_problem, DegreeVector};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn shape(n: usize, s: &[usize]) -> FlagShape {
        FlagShape::new(n, s.to_vec()).unwrap()
    }

    fn point(
        sh: &FlagShape,
        d: &[u32],
        levels: Vec<Vec<usize>>,
        a: Vec<Vec<u32>>,
        b: Vec<Vec<u32>>,
    ) -> FixedPoint {
        let dv = DegreeVector::new(sh, d.to_vec()).unwrap();
        let chain = SubsetChain::new(sh, levels).unwrap();
        FixedPoint::new(sh, &dv, chain, a, b).unwrap()
    }

    fn strings(chars: &[Character]) -> Vec<String> {
        chars.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn p1_degree_one_tangent_lists() {
        let sh = shape(2, &[1]);
        let fp = point(&sh, &[1], vec![vec![0]], vec![vec![1]], vec![vec![0]]);
        let t = tangent_characters(&fp, &sh);
        assert_eq!(strings(&t.tang1), ["-ħ", "-ħ+λ2-λ1", "λ2-λ1"]);
        assert!(t.tang2.is_empty());
    }

    #[test]
    fn grassmannian_coordinate_point() {
        let sh = shape(4, &[2]);
        let fp = point(
            &sh,
            &[0],
            vec![vec![0, 1]],
            vec![vec![0, 0]],
            vec![vec![0, 0]],
        );
        let t = tangent_characters(&fp, &sh);
        assert_eq!(strings(&t.tang1), ["λ3-λ1", "λ4-λ1", "λ3-λ2", "λ4-λ2"]);
        assert!(t.tang2.is_empty());
    }

    #[test]
    fn complete_flag_compatibility_character() {
        let sh = shape(3, &[1, 2]);
        let fp = point(
            &sh,
            &[0, 0],
            vec![vec![0], vec![0, 1]],
            vec![vec![0], vec![0, 0]],
            vec![vec![0], vec![0, 0]],
        );
        let t = tangent_characters(&fp, &sh);
        assert_eq!(strings(&t.tang2), ["λ3-λ1"]);
    }

    #[test]
    fn sigma_examples() {
        let sh = shape(2, &[1]);
        let w = WeightSample::from_integers(10, &[0, 1]).unwrap();
        let fp1 = point(&sh, &[1], vec![vec![0]], vec![vec![1]], vec![vec![0]]);
        let fp2 = point(&sh, &[1], vec![vec![1]], vec![vec![0]], vec![vec![1]]);
        assert_eq!(sigma(&fp1, 1, 1, &w).unwrap(), rational_from_int(-10));
        assert_eq!(sigma(&fp2, 1, 1, &w).unwrap(), rational_from_int(-1));
        assert_eq!(sigma(&fp1, 1, 0, &w).unwrap(), rational_from_int(1));
        assert!(sigma(&fp1, 1, 2, &w).is_err());
        assert!(sigma(&fp1, 2, 1, &w).is_err());
    }

    #[test]
    fn p1_degree_one_ledger() {
        let problem = validate_problem(2, &[1], &[1], &[Insertion::new(1, 1); 3], false).unwrap();
        let sh = problem.shape().clone();
        let w = WeightSample::from_integers(10, &[0, 1]).unwrap();
        let cases = [
            (0usize, (1u32, 0u32), q(-100, 9)),
            (0, (0, 1), q(0, 1)),
            (1, (1, 0), q(121, 10)),
            (1, (0, 1), q(1, 90)),
        ];
        for (j, (a, b), expected) in cases {
            let fp = point(&sh, &[1], vec![vec![j]], vec![vec![a]], vec![vec![b]]);
            assert_eq!(
                contribution(&fp, &problem, &w).unwrap(),
                expected,
                "J={{{}}} ({a},{b})",
                j + 1
            );
        }
        let (total, count) = localization_sum(&problem, &w, 1).unwrap();
        assert_eq!(total, rational_from_int(1));
        assert_eq!(count, 4);
    }

    #[test]
    fn zero_denominator_is_reported() {
        let problem = validate_problem(2, &[1], &[1], &[Insertion::new(1, 1); 3], false).unwrap();
        // λ₂ − λ₁ − ħ = 0
        let w = WeightSample::from_integers(1, &[0, 1]).unwrap();
        assert_eq!(
            localization_sum(&problem, &w, 2),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn contribution_matches_character_lists() {
        let problem = validate_problem(
            3,
            &[1, 2],
            &[1, 1],
            &[
                Insertion::new(1, 1),
                Insertion::new(1, 1),
                Insertion::new(1, 1),
                Insertion::new(2, 1),
                Insertion::new(2, 1),
                Insertion::new(2, 1),
                Insertion::new(2, 1),
            ],
            false,
        )
        .unwrap();
        let w = sample_weights(3, 5, 0);
        for fp in enumerate_fixed_points(problem.shape(), problem.degrees()) {
            let t = tangent_characters(&fp, problem.shape());
            let den = t.tang1.iter().fold(Rational::one(), |acc, c| {
                acc * eval_character(c, &w).unwrap()
            });
            let mut num = t.tang2.iter().fold(Rational::one(), |acc, c| {
                acc * eval_character(c, &w).unwrap()
            });
            for ins in problem.insertions() {
                num *= sigma(&fp, ins.alpha, ins.beta, &w).unwrap();
            }
            assert_eq!(contribution(&fp, &problem, &w).unwrap(), num / den);
        }
    }

    #[test]
    fn small_invariants() {
        let p1 = validate_problem(2, &[1], &[1], &[Insertion::new(1, 1); 3], false).unwrap();
        assert_eq!(invariant(&p1, 0, 3, 1).unwrap().value, rational_from_int(1));
        let p0 = validate_problem(2, &[1], &[0], &[Insertion::new(1, 1)], false).unwrap();
        let r = invariant(&p0, 7, 2, 1).unwrap();
        assert_eq!(r.as_integer(), Some(BigInt::from(1)));
        assert_eq!(r.fixed_point_count, 2);
        assert_eq!(r.dimension, 1);
        assert_eq!(r.samples_used, 2);
        assert!(!r.beta_overflow);
    }

    #[test]
    fn invariant_requires_two_samples() {
        let p0 = validate_problem(2, &[1], &[0], &[Insertion::new(1, 1)], false).unwrap();
        assert!(matches!(
            invariant(&p0, 0, 1, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn resampling_gives_up_eventually() {
        let config = EngineConfig {
            max_resamples: 5,
            ..EngineConfig::default()
        };
        let mut calls = 0;
        let out = sample_totals(3, &config, |_| {
            calls += 1;
            Err(Error::ZeroDenominator)
        });
        assert_eq!(out, Err(Error::ResampleExhausted { attempts: 6 }));
        assert_eq!(calls, 6);
    }

    #[test]
    fn resampling_skips_bad_draws() {
        let config = EngineConfig::default();
        let mut calls = 0;
        let totals = sample_totals(3, &config, |_| {
            calls += 1;
            if calls % 2 == 1 {
                Err(Error::ZeroDenominator)
            } else {
                Ok(rational_from_int(calls))
            }
        })
        .unwrap();
        assert_eq!(totals, vec![rational_from_int(2), rational_from_int(4)]);
    }

    #[test]
    fn certify_flags_disagreement_and_fractions() {
        let one = rational_from_int(1);
        assert_eq!(certify_totals(&[one.clone(), one.clone()]).unwrap(), one);
        assert!(matches!(
            certify_totals(&[one.clone(), rational_from_int(2)]),
            Err(Error::SampleDisagreement { .. })
        ));
        assert!(matches!(
            certify_totals(&[q(1, 2), q(1, 2)]),
            Err(Error::NonIntegerResult(_))
        ));
    }

    #[test]
    fn tangent_dimension_count_battery() {
        for n in 2..=4 {
            for sh in all_shapes(n) {
                let l = sh.len();
                let mut degree_lists = vec![vec![]];
                for _ in 0..l {
                    degree_lists = degree_lists
                        .into_iter()
                        .flat_map(|v: Vec<u32>| {
                            (0..=2u32).map(move |x| [v.clone(), vec![x]].concat())
                        })
                        .filter(|v| v.iter().sum::<u32>() <= 2)
                        .collect();
                }
                for d in degree_lists {
                    let dv = DegreeVector::new(&sh, d.clone()).unwrap();
                    let dim = dim_fquot(&sh, &dv) as usize;
                    for fp in enumerate_fixed_points(&sh, &dv) {
                        let t = tangent_characters(&fp, &sh);
                        assert_eq!(t.tang1.len() - t.tang2.len(), dim, "{sh} {d:?} {fp}");
                        assert!(t.tang1.iter().chain(&t.tang2).all(|c| !c.is_zero()));
                        for c in t.tang1.iter().chain(&t.tang2) {
                            let lc = c.lambda_coeffs();
                            assert!(lc.is_empty() || (lc.len() == 2 && lc[0].1 * lc[1].1 == -1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_totals_are_identical() {
        let problem = validate_problem(4, &[2], &[1], &[Insertion::new(1, 1); 8], false).unwrap();
        let w = sample_weights(4, 11, 0);
        let base = localization_sum(&problem, &w, 1).unwrap();
        for workers in [2, 3, 8, 50] {
            assert_eq!(localization_sum(&problem, &w, workers).unwrap(), base);
        }
    }

    #[test]
    fn grouping_counts_multiplicities() {
        let g = grouped(&[
            Insertion::new(1, 2),
            Insertion::new(1, 1),
            Insertion::new(1, 2),
        ]);
        assert_eq!(
            g,
            vec![(Insertion::new(1, 1), 1), (Insertion::new(1, 2), 2)]
        );
    }
}
