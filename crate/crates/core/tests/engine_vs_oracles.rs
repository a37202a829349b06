use fquot_core::localization::EngineConfig;
use fquot_core::oracles::{classical_flag_invariant, grassmannian_quantum_integral, pn_invariant};
use fquot_core::problem::{validate_problem, FlagShape};
use fquot_core::{invariant, Insertion};
use num_bigint::BigInt;

fn engine(n: usize, s: &[usize], d: &[u32], ins: &[Insertion], seed: u64) -> BigInt {
    let problem = validate_problem(n, s, d, ins, false).unwrap();
    invariant(&problem, seed, 2, 2)
        .unwrap()
        .as_integer()
        .unwrap()
}

/// Weakly decreasing lists of parts in `1..=max_part` summing to `total`.
fn multisets(total: usize, max_part: usize) -> Vec<Vec<usize>> {
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

#[test]
fn projective_spaces_agree_with_residue_sum() {
    for n in 1..=3usize {
        for d in 0..=2u32 {
            let count = (n + 1) * d as usize + n;
            let value = engine(n + 1, &[1], &[d], &vec![Insertion::new(1, 1); count], 3);
            assert_eq!(value, BigInt::from(1));
            let config = EngineConfig {
                seed: 3,
                ..EngineConfig::default()
            };
            assert_eq!(pn_invariant(n, d as usize, &config).unwrap(), value);
        }
    }
}

#[test]
fn grassmannians_agree_with_quantum_calculus() {
    // (n, k, d)
    for (n, k, d) in [
        (4usize, 2usize, 1u32),
        (3, 1, 2),
        (5, 2, 1),
        (4, 1, 1),
        (4, 3, 1),
    ] {
        let dim = k * (n - k) + n * d as usize;
        for betas in multisets(dim, k) {
            let ins: Vec<Insertion> = betas.iter().map(|&b| Insertion::new(1, b)).collect();
            let oracle = grassmannian_quantum_integral(n, k, d, &betas).unwrap();
            assert_eq!(
                engine(n, &[k], &[d], &ins, 1),
                oracle,
                "Gr({k},{n}) d={d} {betas:?}"
            );
        }
    }
}

#[test]
fn degree_zero_flags_agree_with_classical_integral() {
    let config = EngineConfig {
        seed: 5,
        ..EngineConfig::default()
    };
    for (n, s) in [
        (3usize, vec![1usize, 2]),
        (4, vec![2]),
        (4, vec![1, 3]),
        (4, vec![1, 2]),
    ] {
        let shape = FlagShape::new(n, s.clone()).unwrap();
        let dim = shape.flag_dimension() as usize;
        // every multiset of (alpha, beta) classes with beta under both bounds
        let mut classes = Vec::new();
        for alpha in 1..=shape.len() {
            let bound = shape.step(alpha + 1) - shape.step(alpha - 1);
            for beta in 1..bound.min(shape.step(alpha) + 1) {
                classes.push(Insertion::new(alpha, beta));
            }
        }
        let mut checked = 0;
        let mut stack: Vec<(Vec<Insertion>, usize, usize)> = vec![(vec![], 0, dim)];
        while let Some((cur, start, left)) = stack.pop() {
            if left == 0 {
                let classical = classical_flag_invariant(&shape, &cur, &config).unwrap();
                assert_eq!(
                    engine(n, &s, &vec![0; s.len()], &cur, 2),
                    classical,
                    "{shape} {cur:?}"
                );
                checked += 1;
                continue;
            }
            for (idx, c) in classes.iter().enumerate().skip(start) {
                if c.beta <= left {
                    let mut next = cur.clone();
                    next.push(*c);
                    stack.push((next, idx, left - c.beta));
                }
            }
        }
        assert!(checked > 0);
    }
}
