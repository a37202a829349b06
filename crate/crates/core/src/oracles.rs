//! Independent checks for the localization engine.
//!
//! None of these share code with the fixed-point enumeration or the tangent
//! character lists:
//!
//! * [`pn_localization_sum`]: the closed-form residue sum for `P^n`.
//! * [`classical_flag_integral`]: the degree-zero localization sum over the
//!   flag manifold itself, with its own chain enumeration.
//! * [`grassmannian_quantum_integral`]: small quantum Schubert calculus on
//!   `Gr(k, n)` via the column Pieri rule and rim-hook reduction. Assumes the
//!   fixed-point invariant equals the `q^d` coefficient of the point class in
//!   the iterated quantum product.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{elementary_symmetric, Rational, WeightSample};
use crate::error::{Error, Result};
use crate::localization::{certify_totals, sample_totals, EngineConfig};
use crate::problem::{FlagShape, Insertion};

/// Residue sum for `N = (n+1)d + n` hyperplane insertions on `P^n`, with
/// `w` carrying the `n+1` weights `λ₀…λ_n`:
///
/// ```text
///   Σ_{i,k} (λ_i + kħ)^N / ( ∏_{p≠k} (k−p)ħ · ∏_{q, j≠i} ((k−q)ħ + λ_i − λ_j) )
/// ```
///
/// This is the residue of `x^N dx / ∏_{i,k}(x − λ_i − kħ)` and equals 1.
pub fn pn_localization_sum(n: usize, d: usize, w: &WeightSample) -> Result<Rational> {
    let literal = pn_tautological_sum(n, d, w)?;
    let exponent = (n + 1) * d + n;
    Ok(if exponent.is_multiple_of(2) {
        literal
    } else {
        -literal
    })
}

/// The same double sum written for insertions of `x = c₁(O(−1))`:
/// denominators `(p−k)ħ` and `(q−k)ħ + λ_j − λ_i`. It differs from
/// [`pn_localization_sum`] by `(−1)^N`.
pub fn pn_tautological_sum(n: usize, d: usize, w: &WeightSample) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Precondition(
            "projective dimension must be positive".into(),
        ));
    }
    if w.n() != n + 1 {
        return Err(Error::Precondition(format!(
            "P^{n} needs {} weights, sample has {}",
            n + 1,
            w.n()
        )));
    }
    let exponent = (n + 1) * d + n;
    let h = w.hbar();
    let lam = w.lambda();
    let mut total = Rational::zero();
    for i in 0..=n {
        for k in 0..=d {
            let mut den = Rational::one();
            for p in (0..=d).filter(|&p| p != k) {
                den *= h * BigInt::from(p as i64 - k as i64);
            }
            for q in 0..=d {
                for j in (0..=n).filter(|&j| j != i) {
                    den *= h * BigInt::from(q as i64 - k as i64) + &lam[j] - &lam[i];
                }
            }
            if den.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            let base = &lam[i] + h * BigInt::from(k as i64);
            total += num_traits::pow(base, exponent) / den;
        }
    }
    Ok(total)
}

/// Certified value of [`pn_localization_sum`] over `config.samples` samples.
pub fn pn_invariant(n: usize, d: usize, config: &EngineConfig) -> Result<BigInt> {
    let totals = sample_totals(n + 1, config, |w| pn_localization_sum(n, d, w))?;
    Ok(certify_totals(&totals)?.to_integer())
}

// Chains J₁ ⊆ … ⊆ J_l as bitmasks, by plain recursion over subsets.
fn flag_chains(shape: &FlagShape) -> Vec<Vec<u64>> {
    fn extend(shape: &FlagShape, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let level = prefix.len() + 1;
        if level > shape.len() {
            out.push(prefix.clone());
            return;
        }
        let below = prefix.last().copied().unwrap_or(0);
        let want = shape.step(level);
        for mask in 0u64..(1 << shape.n()) {
            if mask & below == below && mask.count_ones() as usize == want {
                prefix.push(mask);
                extend(shape, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(shape, &mut Vec::new(), &mut out);
    out
}

/// Degree-zero localization on the flag manifold:
///
/// ```text
///   Σ_chains ∏_k e_{β_k}({−λ_j : j ∈ J_{α_k}}) / ∏_{i, j∈J_i, m∈J_{i+1}∖J_i} (λ_m − λ_j)
/// ```
///
/// with `J_{l+1} = {1..n}`.
pub fn classical_flag_integral(
    shape: &FlagShape,
    insertions: &[Insertion],
    w: &WeightSample,
) -> Result<Rational> {
    let degree: u64 = insertions.iter().map(|i| i.beta as u64).sum();
    let dimension = shape.flag_dimension();
    if degree != dimension {
        return Err(Error::DimensionMismatch {
            insertion_degree: degree,
            dimension,
        });
    }
    if shape.n() > 63 {
        return Err(Error::Precondition(
            "classical oracle supports n ≤ 63".into(),
        ));
    }
    if w.n() != shape.n() {
        return Err(Error::Precondition("sample size differs from n".into()));
    }
    for ins in insertions {
        if ins.alpha == 0 || ins.alpha > shape.len() {
            return Err(Error::Precondition(format!(
                "alpha {} out of range",
                ins.alpha
            )));
        }
    }
    let lam = w.lambda();
    let all = (1u64 << shape.n()) - 1;
    let members = |mask: u64| (0..shape.n()).filter(move |j| mask >> j & 1 == 1);
    let mut total = Rational::zero();
    for chain in flag_chains(shape) {
        let mut den = Rational::one();
        for (i, &mask) in chain.iter().enumerate() {
            let next = chain.get(i + 1).copied().unwrap_or(all);
            for j in members(mask) {
                for m in members(next & !mask) {
                    den *= &lam[m] - &lam[j];
                }
            }
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut num = Rational::one();
        for ins in insertions {
            let dual: Vec<Rational> = members(chain[ins.alpha - 1]).map(|j| -&lam[j]).collect();
            num *= elementary_symmetric(&dual, ins.beta)?;
        }
        total += num / den;
    }
    Ok(total)
}

/// Certified value of [`classical_flag_integral`].
pub fn classical_flag_invariant(
    shape: &FlagShape,
    insertions: &[Insertion],
    config: &EngineConfig,
) -> Result<BigInt> {
    let totals = sample_totals(shape.n(), config, |w| {
        classical_flag_integral(shape, insertions, w)
    })?;
    Ok(certify_totals(&totals)?.to_integer())
}

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The `rows × cols` rectangle.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        if cols == 0 {
            Partition::empty()
        } else {
            Partition(vec![cols; rows])
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn width(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Finitely supported polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QPolynomial(BTreeMap<u32, BigInt>);

impl QPolynomial {
    pub fn coeff(&self, exponent: u32) -> BigInt {
        self.0.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.0.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_term(&mut self, exponent: u32, c: BigInt) {
        let entry = self.0.entry(exponent).or_default();
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&exponent);
        }
    }
}

/// An element of `QH*(Gr(k, n))` in the Schubert basis with `q`-polynomial
/// coefficients.
pub type QuantumClass = BTreeMap<Partition, QPolynomial>;

/// Small quantum cohomology of the Grassmannian of `k`-planes in `ℂⁿ`,
/// presented by Schur polynomials in `k` variables (the Chern roots of `S*`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantumGrassmannian {
    k: usize,
    n: usize,
}

impl QuantumGrassmannian {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::Precondition(format!("Gr({k},{n}) needs 0 < k < n")));
        }
        Ok(QuantumGrassmannian { k, n })
    }

    pub fn point_class(&self) -> Partition {
        Partition::rectangle(self.k, self.n - self.k)
    }

    pub fn unit(&self) -> QuantumClass {
        let mut one = QPolynomial::default();
        one.add_term(0, BigInt::one());
        QuantumClass::from([(Partition::empty(), one)])
    }

    /// Rim-hook reduction of a partition with at most `k` rows into the
    /// `k × (n−k)` box. Returns `(partition, q-degree, sign)`, or `None` when
    /// the class vanishes.
    ///
    /// Works on beta numbers `b_i = λ_i + k − i`: removing an `n`-rim hook
    /// from the first row moves the largest bead down by `n`; the hook spans
    /// one row more than the number of beads it jumps, and each removal costs
    /// `q·(−1)^{k−h}`.
    pub fn reduce(&self, p: &Partition) -> Option<(Partition, u32, i32)> {
        let k = self.k;
        if p.rows() > k {
            return None;
        }
        let mut beads: Vec<usize> = (0..k).map(|i| p.part(i) + k - 1 - i).collect();
        let mut q_degree = 0u32;
        let mut sign = 1i32;
        while beads[0] >= self.n {
            let target = beads[0] - self.n;
            if beads.contains(&target) {
                return None;
            }
            let jumped = beads[1..].iter().filter(|&&b| b > target).count();
            let height = jumped + 1;
            if (k - height) % 2 == 1 {
                sign = -sign;
            }
            q_degree += 1;
            beads.remove(0);
            beads.insert(jumped, target);
        }
        let parts: Vec<usize> = beads
            .iter()
            .enumerate()
            .map(|(i, &b)| b + i + 1 - k)
            .collect();
        Some((
            Partition::new(parts).expect("beads stay decreasing"),
            q_degree,
            sign,
        ))
    }

    fn accumulate(&self, out: &mut QuantumClass, mu: Partition, coeff: &QPolynomial) {
        let Some((reduced, shift, sign)) = self.reduce(&mu) else {
            return;
        };
        let entry = out.entry(reduced.clone()).or_default();
        for (e, c) in coeff.terms() {
            entry.add_term(e + shift, c * sign);
        }
        if entry.is_zero() {
            out.remove(&reduced);
        }
    }

    /// Quantum product with `σ_{(1^β)} = c_β(S*) = e_β`: column Pieri rule
    /// (add β boxes, no two in one row) followed by rim-hook reduction.
    pub fn multiply_column(&self, class: &QuantumClass, beta: usize) -> QuantumClass {
        let mut out = QuantumClass::new();
        for (lam, coeff) in class {
            for mu in vertical_strips(lam, beta, self.k) {
                self.accumulate(&mut out, mu, coeff);
            }
        }
        out
    }

    /// Quantum product with `σ_m = h_m`: row Pieri rule (add m boxes, no two
    /// in one column) followed by rim-hook reduction.
    pub fn multiply_row(&self, class: &QuantumClass, m: usize) -> QuantumClass {
        let mut out = QuantumClass::new();
        for (lam, coeff) in class {
            for mu in horizontal_strips(lam, m, self.k) {
                self.accumulate(&mut out, mu, coeff);
            }
        }
        out
    }

    /// `σ_{(1^{β₁})} ⋆ σ_{(1^{β₂})} ⋆ ⋯`.
    pub fn column_product(&self, betas: &[usize]) -> QuantumClass {
        betas
            .iter()
            .fold(self.unit(), |acc, &beta| self.multiply_column(&acc, beta))
    }
}

/// Partitions `μ ⊇ λ` with `|μ/λ| = beta`, at most one new box per row and at
/// most `max_rows` rows.
fn vertical_strips(lam: &Partition, beta: usize, max_rows: usize) -> Vec<Partition> {
    fn rec(
        lam: &Partition,
        i: usize,
        left: usize,
        max_rows: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if i == max_rows {
            if left == 0 {
                out.push(Partition::new(cur.clone()).expect("strip keeps the order"));
            }
            return;
        }
        if left > max_rows - i {
            return;
        }
        for add in [0, 1] {
            if add > left {
                continue;
            }
            let v = lam.part(i) + add;
            if i > 0 && v > cur[i - 1] {
                continue;
            }
            cur.push(v);
            rec(lam, i + 1, left - add, max_rows, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lam, 0, beta, max_rows, &mut Vec::new(), &mut out);
    out
}

/// Partitions `μ ⊇ λ` with `|μ/λ| = m`, at most one new box per column and at
/// most `max_rows` rows.
fn horizontal_strips(lam: &Partition, m: usize, max_rows: usize) -> Vec<Partition> {
    fn rec(
        lam: &Partition,
        i: usize,
        left: usize,
        max_rows: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if i == max_rows {
            if left == 0 {
                out.push(Partition::new(cur.clone()).expect("strip keeps the order"));
            }
            return;
        }
        let low = lam.part(i);
        let high = if i == 0 {
            low + left
        } else {
            lam.part(i - 1).min(low + left)
        };
        for v in low..=high {
            cur.push(v);
            rec(lam, i + 1, left - (v - low), max_rows, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lam, 0, m, max_rows, &mut Vec::new(), &mut out);
    out
}

/// Number of degree-`d` maps `P¹ → Gr(k, n)` meeting the special Schubert
/// varieties `c_{β_i}(S*)` at fixed points: the `q^d` coefficient of the point
/// class in `σ_{(1^{β₁})} ⋆ ⋯ ⋆ σ_{(1^{β_N})}`.
pub fn grassmannian_quantum_integral(
    n: usize,
    k: usize,
    d: u32,
    betas: &[usize],
) -> Result<BigInt> {
    let gr = QuantumGrassmannian::new(k, n)?;
    let degree: u64 = betas.iter().map(|&b| b as u64).sum();
    let dimension = (k * (n - k)) as u64 + n as u64 * d as u64;
    if degree != dimension {
        return Err(Error::DimensionMismatch {
            insertion_degree: degree,
            dimension,
        });
    }
    if betas.contains(&0) {
        return Err(Error::Precondition(
            "insertion degrees must be positive".into(),
        ));
    }
    let product = gr.column_product(betas);
    Ok(product
        .get(&gr.point_class())
        .map(|c| c.coeff(d))
        .unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rational_from_int, sample_weights};

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn poly(terms: &[(u32, i64)]) -> QPolynomial {
        let mut out = QPolynomial::default();
        for &(e, c) in terms {
            out.add_term(e, BigInt::from(c));
        }
        out
    }

    fn config(seed: u64) -> EngineConfig {
        EngineConfig {
            seed,
            samples: 2,
            ..EngineConfig::default()
        }
    }

    #[test]
    fn pn_sum_is_one() {
        for n in 1..=3 {
            for d in 0..=2 {
                for seed in [0, 1, 2] {
                    let w = sample_weights(n + 1, seed, 0);
                    assert_eq!(
                        pn_localization_sum(n, d, &w).unwrap(),
                        rational_from_int(1),
                        "n={n} d={d}"
                    );
                }
                assert_eq!(pn_invariant(n, d, &config(9)).unwrap(), BigInt::from(1));
            }
        }
    }

    #[test]
    fn tautological_form_carries_the_sign() {
        for n in 1..=3 {
            for d in 0..=2 {
                let w = sample_weights(n + 1, 4, 0);
                let expected = if ((n + 1) * d + n) % 2 == 0 { 1 } else { -1 };
                assert_eq!(
                    pn_tautological_sum(n, d, &w).unwrap(),
                    rational_from_int(expected)
                );
            }
        }
    }

    #[test]
    fn pn_rejects_degenerate_samples() {
        // ħ = λ₂ − λ₁ makes (1−0)ħ + λ₁ − λ₂ vanish
        let w = WeightSample::from_integers(1, &[0, 1]).unwrap();
        assert_eq!(pn_localization_sum(1, 1, &w), Err(Error::ZeroDenominator));
        assert!(pn_localization_sum(2, 1, &w).is_err());
    }

    #[test]
    fn classical_examples() {
        let p1 = FlagShape::new(2, vec![1]).unwrap();
        let w = sample_weights(2, 0, 0);
        assert_eq!(
            classical_flag_integral(&p1, &[Insertion::new(1, 1)], &w).unwrap(),
            rational_from_int(1)
        );
        let g24 = FlagShape::new(4, vec![2]).unwrap();
        let w = sample_weights(4, 0, 0);
        assert_eq!(
            classical_flag_integral(&g24, &[Insertion::new(1, 2); 2], &w).unwrap(),
            rational_from_int(1)
        );
        // σ₁⁴ = 2 on Gr(2,4)
        assert_eq!(
            classical_flag_invariant(&g24, &[Insertion::new(1, 1); 4], &config(3)).unwrap(),
            BigInt::from(2)
        );
        let f3 = FlagShape::new(3, vec![1, 2]).unwrap();
        assert!(matches!(
            classical_flag_integral(&f3, &[Insertion::new(1, 1); 2], &sample_weights(3, 0, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn flag_chain_counts() {
        let f = FlagShape::new(4, vec![1, 3]).unwrap();
        assert_eq!(flag_chains(&f).len(), 12);
        let f = FlagShape::new(3, vec![1, 2]).unwrap();
        assert_eq!(flag_chains(&f).len(), 6);
    }

    #[test]
    fn classical_pieri_in_gr24() {
        let gr = QuantumGrassmannian::new(2, 4).unwrap();
        let prod = gr.column_product(&[1, 1]);
        let expected = QuantumClass::from([
            (part(&[2]), poly(&[(0, 1)])),
            (part(&[1, 1]), poly(&[(0, 1)])),
        ]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn sigma1_to_the_eighth_in_gr24() {
        let gr = QuantumGrassmannian::new(2, 4).unwrap();
        let prod = gr.column_product(&[1; 8]);
        let expected = QuantumClass::from([
            (part(&[2, 2]), poly(&[(1, 8)])),
            (Partition::empty(), poly(&[(2, 8)])),
        ]);
        assert_eq!(prod, expected);
        assert_eq!(
            grassmannian_quantum_integral(4, 2, 1, &[1; 8]).unwrap(),
            BigInt::from(8)
        );
    }

    #[test]
    fn projective_space_single_row() {
        for n in 1..=4usize {
            let gr = QuantumGrassmannian::new(1, n + 1).unwrap();
            assert_eq!(gr.reduce(&part(&[n + 1])), Some((Partition::empty(), 1, 1)));
            for d in 0..=3u32 {
                let count = (n + 1) * d as usize + n;
                assert_eq!(
                    grassmannian_quantum_integral(n + 1, 1, d, &vec![1; count]).unwrap(),
                    BigInt::from(1)
                );
            }
        }
    }

    #[test]
    fn rim_hook_sign_anchors() {
        let gr = QuantumGrassmannian::new(2, 4).unwrap();
        // s₂₁ · s₁ ∋ s₃₁, whose 4-hook spans two rows: sign (−1)^{2−2}
        assert_eq!(gr.reduce(&part(&[3, 1])), Some((Partition::empty(), 1, 1)));
        let s21 = QuantumClass::from([(part(&[2, 1]), poly(&[(0, 1)]))]);
        let p = gr.multiply_column(&s21, 1);
        assert_eq!(p.get(&Partition::empty()), Some(&poly(&[(1, 1)])));
        assert_eq!(p.get(&part(&[2, 2])), Some(&poly(&[(0, 1)])));
        let s11 = QuantumClass::from([(part(&[1, 1]), poly(&[(0, 1)]))]);
        let p = gr.multiply_row(&s11, 2);
        assert_eq!(
            p,
            QuantumClass::from([(Partition::empty(), poly(&[(1, 1)]))])
        );
    }

    #[test]
    fn reduction_edge_cases() {
        let gr24 = QuantumGrassmannian::new(2, 4).unwrap();
        assert_eq!(gr24.reduce(&part(&[1, 1, 1])), None);
        assert_eq!(gr24.reduce(&part(&[3])), None);
        assert_eq!(gr24.reduce(&part(&[2, 1])), Some((part(&[2, 1]), 0, 1)));
        assert_eq!(gr24.reduce(&part(&[4, 2])), Some((part(&[1, 1]), 1, 1)));
        // a one-row hook: sign (−1)^{2−1}
        assert_eq!(gr24.reduce(&part(&[5])), Some((part(&[1]), 1, -1)));

        let gr25 = QuantumGrassmannian::new(2, 5).unwrap();
        assert_eq!(
            gr25.reduce(&part(&[4, 1])),
            Some((Partition::empty(), 1, 1))
        );
        assert_eq!(gr25.reduce(&part(&[4])), None);

        let gr35 = QuantumGrassmannian::new(3, 5).unwrap();
        assert_eq!(
            gr35.reduce(&part(&[3, 1, 1])),
            Some((Partition::empty(), 1, 1))
        );
        assert_eq!(gr35.reduce(&part(&[3, 3, 1])), Some((part(&[2]), 1, 1)));
        assert_eq!(gr35.reduce(&part(&[3])), None);
        assert_eq!(gr35.reduce(&part(&[3, 2])), None);

        let gr36 = QuantumGrassmannian::new(3, 6).unwrap();
        assert_eq!(gr36.reduce(&part(&[4, 2])), None);
        assert_eq!(
            gr36.reduce(&part(&[4, 1, 1])),
            Some((Partition::empty(), 1, 1))
        );
        assert_eq!(gr24.reduce(&part(&[6, 2])), Some((part(&[2, 2]), 1, -1)));
        // several successive removals
        assert_eq!(
            gr24.reduce(&part(&[8, 4])),
            Some((Partition::empty(), 3, -1))
        );
        let gr13 = QuantumGrassmannian::new(1, 3).unwrap();
        assert_eq!(gr13.reduce(&part(&[6])), Some((Partition::empty(), 2, 1)));
    }

    #[test]
    fn quantum_matches_classical_at_degree_zero() {
        for (k, n) in [(1usize, 3usize), (2, 4), (2, 5), (1, 4)] {
            let shape = FlagShape::grassmannian(k, n).unwrap();
            let dim = k * (n - k);
            for betas in multisets_summing_to(dim, k) {
                let ins: Vec<Insertion> = betas.iter().map(|&b| Insertion::new(1, b)).collect();
                let classical = classical_flag_invariant(&shape, &ins, &config(1)).unwrap();
                let quantum = grassmannian_quantum_integral(n, k, 0, &betas).unwrap();
                assert_eq!(classical, quantum, "Gr({k},{n}) {betas:?}");
            }
        }
    }

    #[test]
    fn quantum_preconditions() {
        assert!(matches!(
            grassmannian_quantum_integral(4, 2, 1, &[1; 7]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(grassmannian_quantum_integral(4, 4, 0, &[]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    // weakly decreasing lists with parts in 1..=max_part summing to total
    fn multisets_summing_to(total: usize, max_part: usize) -> Vec<Vec<usize>> {
        fn rec(left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for p in (1..=cap.min(left)).rev() {
                cur.push(p);
                rec(left - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(total, max_part, &mut Vec::new(), &mut out);
        out
    }
}
