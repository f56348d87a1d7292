#![allow(dead_code)]

use counterpair::{CanonicalSpec, EigenGroup, ExactMatrix, ExactScalar};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn typed(t1: &[usize], t2: &[usize], t3: &[usize], t4: &[usize]) -> CanonicalSpec {
    CanonicalSpec {
        eigen: vec![],
        t1: t1.to_vec(),
        t2: t2.to_vec(),
        t3: t3.to_vec(),
        t4: t4.to_vec(),
    }
}

pub fn eigen_pool() -> Vec<ExactScalar> {
    vec![
        ExactScalar::from_int(1),
        ExactScalar::from_int(2),
        ExactScalar::i(),
    ]
}

/// One to three distinct eigenvalues from {1, 2, i}, each with one or two
/// Jordan sizes in 1..=4.
pub fn random_eigen_part(rng: &mut impl Rng) -> Vec<EigenGroup> {
    let mut pool = eigen_pool();
    pool.shuffle(rng);
    let count = rng.gen_range(1..=3);
    let mut groups: Vec<EigenGroup> = pool
        .into_iter()
        .take(count)
        .map(|lambda| {
            let mut sizes: Vec<usize> = (0..rng.gen_range(1..=2))
                .map(|_| rng.gen_range(1..=4))
                .collect();
            sizes.sort_unstable();
            EigenGroup { lambda, sizes }
        })
        .collect();
    groups.sort_by(|a, b| a.lambda.cmp(&b.lambda));
    groups
}

/// Up to `max_blocks` summands of the four size families, sizes in 1..=`max_size`.
pub fn random_typed_part(rng: &mut impl Rng, max_blocks: usize, max_size: usize) -> CanonicalSpec {
    let mut spec = CanonicalSpec::default();
    for _ in 0..rng.gen_range(0..=max_blocks) {
        let r = rng.gen_range(1..=max_size);
        match rng.gen_range(0..4) {
            0 => spec.t1.push(r),
            1 => spec.t2.push(r),
            2 => spec.t3.push(r),
            _ => spec.t4.push(r),
        }
    }
    for list in [&mut spec.t1, &mut spec.t2, &mut spec.t3, &mut spec.t4] {
        list.sort_unstable();
    }
    spec
}

pub fn random_eigen_spec(rng: &mut impl Rng) -> CanonicalSpec {
    CanonicalSpec {
        eigen: random_eigen_part(rng),
        ..Default::default()
    }
}

/// One or two eigenvalues from {1, 2, i} with a single Jordan size in 1..=2.
pub fn random_small_eigen_part(rng: &mut impl Rng) -> Vec<EigenGroup> {
    let mut pool = eigen_pool();
    pool.shuffle(rng);
    let count = rng.gen_range(1..=2);
    let mut groups: Vec<EigenGroup> = pool
        .into_iter()
        .take(count)
        .map(|lambda| EigenGroup {
            lambda,
            sizes: vec![rng.gen_range(1..=2)],
        })
        .collect();
    groups.sort_by(|a, b| a.lambda.cmp(&b.lambda));
    groups
}

/// A nonempty eigenvalue part plus a small typed part.
pub fn random_mixed_spec(rng: &mut impl Rng) -> CanonicalSpec {
    let mut spec = random_typed_part(rng, 3, 3);
    spec.eigen = random_small_eigen_part(rng);
    spec
}

pub fn random_int_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ExactMatrix {
    let entries = (0..rows * cols)
        .map(|_| ExactScalar::from_int(rng.gen_range(-3..=3)))
        .collect();
    ExactMatrix::from_entries(rows, cols, entries).unwrap()
}
