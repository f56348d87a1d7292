//! Complete invariants of contragredient equivalence and recovery of the
//! canonical form from an arbitrary counter pair.
//!
//! The invariants are the ranks of the alternating words `A, AB, ABA, …`
//! and `B, BA, BAB, …` together with the Jordan rank data of `AB` at the
//! caller's candidate eigenvalues. Both are additive over direct sums and
//! unchanged by `(A, B) ↦ (S⁻¹AR, R⁻¹BS)`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canonical::{assemble, CanonicalSpec, EigenGroup};
use crate::error::{Error, Result};
use crate::exactmat::{matmul, rank, ExactMatrix, ExactScalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JordanData {
    pub lambda: ExactScalar,
    /// `ranks[j - 1] = rank((AB − λI)^j)` for `j = 1..=m`.
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSignature {
    pub m: usize,
    pub n: usize,
    /// `words_a[l - 1]` is the rank of the alternating word of length `l`
    /// starting with `A`, for `l = 1..=m+n`.
    pub words_a: Vec<usize>,
    pub words_b: Vec<usize>,
    pub jordan_data: Vec<JordanData>,
}

impl InvariantSignature {
    /// Word ranks stabilize from length `m + n` on, so shorter sequences
    /// extend by repeating their last entry.
    fn word(words: &[usize], len: usize) -> usize {
        debug_assert!(len >= 1);
        words.get(len - 1).or(words.last()).copied().unwrap_or(0)
    }

    fn jordan_rank(&self, lambda: &ExactScalar, j: usize) -> usize {
        self.jordan_data
            .iter()
            .find(|d| &d.lambda == lambda)
            .map(|d| d.ranks.get(j - 1).or(d.ranks.last()).copied().unwrap_or(0))
            .unwrap_or(self.m)
    }

    /// Entrywise sum, i.e. the signature of the direct sum. Both operands
    /// must have been computed against the same candidate list.
    pub fn add(&self, other: &InvariantSignature) -> InvariantSignature {
        let (m, n) = (self.m + other.m, self.n + other.n);
        let len = m + n;
        let words = |x: &[usize], y: &[usize]| {
            (1..=len)
                .map(|l| Self::word(x, l) + Self::word(y, l))
                .collect()
        };
        let lambdas: Vec<ExactScalar> = self.jordan_data.iter().map(|d| d.lambda.clone()).collect();
        InvariantSignature {
            m,
            n,
            words_a: words(&self.words_a, &other.words_a),
            words_b: words(&self.words_b, &other.words_b),
            jordan_data: lambdas
                .into_iter()
                .map(|lambda| JordanData {
                    ranks: (1..=m)
                        .map(|j| self.jordan_rank(&lambda, j) + other.jordan_rank(&lambda, j))
                        .collect(),
                    lambda,
                })
                .collect(),
        }
    }
}

fn check_counter_pair(a: &ExactMatrix, b: &ExactMatrix) -> Result<(usize, usize)> {
    let (m, n) = a.shape();
    if b.shape() != (n, m) {
        return Err(Error::Dimension(format!(
            "B must be {n}x{m} for A of shape {m}x{n}, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    Ok((m, n))
}

/// Nonzero candidates, sorted and deduplicated.
fn clean_candidates(candidates: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut out: Vec<ExactScalar> = candidates
        .iter()
        .filter(|c| !c.is_zero())
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

fn word_ranks(first: &ExactMatrix, second: &ExactMatrix, len: usize) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(len);
    let mut word = first.clone();
    for l in 1..=len {
        if l > 1 {
            let next = if l % 2 == 0 { second } else { first };
            word = matmul(&word, next)?;
        }
        let r = rank(&word);
        out.push(r);
        if r == 0 {
            out.resize(len, 0);
            break;
        }
    }
    Ok(out)
}

pub fn signature(
    a: &ExactMatrix,
    b: &ExactMatrix,
    candidate_eigs: &[ExactScalar],
) -> Result<InvariantSignature> {
    let (m, n) = check_counter_pair(a, b)?;
    let ab = matmul(a, b)?;
    let jordan_data = clean_candidates(candidate_eigs)
        .into_iter()
        .map(|lambda| {
            let mut shifted = ab.clone();
            for i in 0..m {
                shifted.set(i, i, shifted.get(i, i) - &lambda);
            }
            let mut power = ExactMatrix::identity(m);
            let mut ranks = Vec::with_capacity(m);
            for _ in 0..m {
                power = matmul(&power, &shifted)?;
                ranks.push(rank(&power));
            }
            Ok(JordanData { lambda, ranks })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantSignature {
        m,
        n,
        words_a: word_ranks(a, b, m + n)?,
        words_b: word_ranks(b, a, m + n)?,
        jordan_data,
    })
}

/// One canonical summand, for [`block_profile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Eigen(ExactScalar),
    T1,
    T2,
    T3,
    T4,
}

impl BlockKind {
    fn single(&self, r: usize) -> CanonicalSpec {
        let mut spec = CanonicalSpec::default();
        match self {
            BlockKind::Eigen(lambda) => spec.eigen.push(EigenGroup {
                lambda: lambda.clone(),
                sizes: vec![r],
            }),
            BlockKind::T1 => spec.t1.push(r),
            BlockKind::T2 => spec.t2.push(r),
            BlockKind::T3 => spec.t3.push(r),
            BlockKind::T4 => spec.t4.push(r),
        }
        spec
    }
}

/// Signature of a single summand, measured on its assembled pair.
pub fn block_profile(
    kind: &BlockKind,
    r: usize,
    candidate_eigs: &[ExactScalar],
) -> Result<InvariantSignature> {
    let (a, b) = assemble(&kind.single(r))?;
    signature(&a, &b, candidate_eigs)
}

fn last_nonzero(words: &[usize]) -> usize {
    words.iter().rposition(|&w| w > 0).map_or(0, |i| i + 1)
}

fn sub_words(x: &mut [usize], y: &[usize]) -> Result<()> {
    for (l, v) in x.iter_mut().enumerate() {
        let d = InvariantSignature::word(y, l + 1);
        *v = v.checked_sub(d).ok_or_else(|| {
            Error::NonRecoverable(format!("word rank at length {} went negative", l + 1))
        })?;
    }
    Ok(())
}

/// Recovers the canonical spec of `(a, b)`.
///
/// Every nonzero eigenvalue of `AB` must be among `candidate_eigs`. The
/// eigenvalue part is read off the Jordan data; the nilpotent part is
/// peeled greedily, since the longest nonzero word identifies a summand:
/// `T1` of size `r` has last nonzero `A`-word at `2r − 1`, `T3` at `2r − 2`,
/// and `T2`/`T4` mirror these on the `B` side.
pub fn recover(
    a: &ExactMatrix,
    b: &ExactMatrix,
    candidate_eigs: &[ExactScalar],
) -> Result<CanonicalSpec> {
    let sig = signature(a, b, candidate_eigs)?;
    let (m, n) = (sig.m, sig.n);
    let mut spec = CanonicalSpec::default();

    let mut eigen_total = 0;
    for data in &sig.jordan_data {
        // at_least[j - 1] = number of Jordan blocks of size ≥ j
        let rank_at = |j: usize| if j == 0 { m } else { data.ranks[j - 1] };
        let at_least: Vec<usize> = (1..=m).map(|j| rank_at(j - 1) - rank_at(j)).collect();
        let mut sizes = Vec::new();
        for j in 1..=m {
            let next = at_least.get(j).copied().unwrap_or(0);
            sizes.extend(std::iter::repeat_n(j, at_least[j - 1] - next));
        }
        if !sizes.is_empty() {
            eigen_total += sizes.iter().sum::<usize>();
            spec.eigen.push(EigenGroup {
                lambda: data.lambda.clone(),
                sizes,
            });
        }
    }

    let stable = sig.words_a.last().copied().unwrap_or(0);
    if stable != eigen_total {
        return Err(Error::NonRecoverable(format!(
            "invertible part of AB has size {stable} but the candidates account for {eigen_total}"
        )));
    }

    let mut words_a = sig.words_a.clone();
    let mut words_b = sig.words_b.clone();
    let constant = vec![eigen_total; m + n];
    sub_words(&mut words_a, &constant)?;
    sub_words(&mut words_b, &constant)?;

    if eigen_total > m.min(n) {
        return Err(Error::NonRecoverable(
            "invertible part exceeds the pair dimensions".into(),
        ));
    }
    let (mut rest_m, mut rest_n) = (m - eigen_total, n - eigen_total);
    loop {
        let (la, lb) = (last_nonzero(&words_a), last_nonzero(&words_b));
        if la == 0 && lb == 0 {
            break;
        }
        let (kind, r) = if la >= lb {
            if la % 2 == 1 {
                (BlockKind::T1, la.div_ceil(2))
            } else {
                (BlockKind::T3, (la + 2) / 2)
            }
        } else if lb % 2 == 1 {
            (BlockKind::T2, lb.div_ceil(2))
        } else {
            (BlockKind::T4, (lb + 2) / 2)
        };
        let profile = block_profile(&kind, r, &[])?;
        sub_words(&mut words_a, &profile.words_a)?;
        sub_words(&mut words_b, &profile.words_b)?;
        rest_m = rest_m
            .checked_sub(profile.m)
            .ok_or_else(|| Error::NonRecoverable("row dimension exhausted".into()))?;
        rest_n = rest_n
            .checked_sub(profile.n)
            .ok_or_else(|| Error::NonRecoverable("column dimension exhausted".into()))?;
        match kind {
            BlockKind::T1 => spec.t1.push(r),
            BlockKind::T2 => spec.t2.push(r),
            BlockKind::T3 => spec.t3.push(r),
            BlockKind::T4 => spec.t4.push(r),
            BlockKind::Eigen(_) => unreachable!("eigen blocks are not peeled"),
        }
    }
    // Size-one summands of types 3 and 4 have zero words and only occupy a
    // row or a column.
    spec.t3.extend(std::iter::repeat_n(1, rest_m));
    spec.t4.extend(std::iter::repeat_n(1, rest_n));
    for list in [&mut spec.t1, &mut spec.t2, &mut spec.t3, &mut spec.t4] {
        list.sort_unstable();
    }
    let spec = spec.normalized();

    let (ra, rb) = assemble(&spec)?;
    if signature(&ra, &rb, candidate_eigs)? != sig {
        return Err(Error::NonRecoverable(format!(
            "residual signature after deconvolution into {}",
            spec.to_json()
        )));
    }
    Ok(spec)
}

/// Whether two counter pairs are contragrediently equivalent, given every
/// nonzero eigenvalue of either product among the candidates.
pub fn equivalent(
    a: &ExactMatrix,
    b: &ExactMatrix,
    a2: &ExactMatrix,
    b2: &ExactMatrix,
    candidate_eigs: &[ExactScalar],
) -> Result<bool> {
    let s1 = signature(a, b, candidate_eigs)?;
    let s2 = signature(a2, b2, candidate_eigs)?;
    Ok(s1 == s2)
}

/// An invertible matrix and its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform {
    pub matrix: ExactMatrix,
    pub inverse: ExactMatrix,
}

impl Transform {
    pub fn identity(dim: usize) -> Transform {
        Transform {
            matrix: ExactMatrix::identity(dim),
            inverse: ExactMatrix::identity(dim),
        }
    }

    /// Product of `ops` random elementary matrices with small integer
    /// entries: row additions, nonzero scalings and swaps.
    pub fn random(dim: usize, ops: usize, rng: &mut impl Rng) -> Transform {
        let mut t = Transform::identity(dim);
        if dim == 0 {
            return t;
        }
        fn nonzero(rng: &mut impl Rng) -> i64 {
            loop {
                let c: i64 = rng.gen_range(-3..=3);
                if c != 0 {
                    return c;
                }
            }
        }
        for _ in 0..ops {
            let i = rng.gen_range(0..dim);
            let j = rng.gen_range(0..dim);
            match rng.gen_range(0..3) {
                0 if i != j => {
                    // row_i += c·row_j on the left, column_j -= c·column_i on the inverse
                    let c = ExactScalar::from_int(nonzero(rng));
                    for k in 0..dim {
                        let v = t.matrix.get(i, k) + &(&c * t.matrix.get(j, k));
                        t.matrix.set(i, k, v);
                        let w = t.inverse.get(k, j) - &(&c * t.inverse.get(k, i));
                        t.inverse.set(k, j, w);
                    }
                }
                1 => {
                    let c = ExactScalar::from_int(nonzero(rng));
                    let c_inv = c.inv().expect("nonzero scale");
                    for k in 0..dim {
                        t.matrix.set(i, k, &c * t.matrix.get(i, k));
                        t.inverse.set(k, i, t.inverse.get(k, i) * &c_inv);
                    }
                }
                _ => {
                    for k in 0..dim {
                        let (x, y) = (t.matrix.get(i, k).clone(), t.matrix.get(j, k).clone());
                        t.matrix.set(i, k, y);
                        t.matrix.set(j, k, x);
                        let (x, y) = (t.inverse.get(k, i).clone(), t.inverse.get(k, j).clone());
                        t.inverse.set(k, i, y);
                        t.inverse.set(k, j, x);
                    }
                }
            }
        }
        t
    }
}

/// `(S⁻¹AR, R⁻¹BS)` for the given transforms.
pub fn transform_pair(
    a: &ExactMatrix,
    b: &ExactMatrix,
    s: &Transform,
    r: &Transform,
) -> Result<(ExactMatrix, ExactMatrix)> {
    check_counter_pair(a, b)?;
    let a2 = matmul(&matmul(&s.inverse, a)?, &r.matrix)?;
    let b2 = matmul(&matmul(&r.inverse, b)?, &s.matrix)?;
    Ok((a2, b2))
}

/// A seeded random member of the equivalence class of `(a, b)`, using at
/// most `2m` elementary operations for `S` and `2n` for `R`.
pub fn randomize(
    a: &ExactMatrix,
    b: &ExactMatrix,
    seed: u64,
) -> Result<(ExactMatrix, ExactMatrix)> {
    let (m, n) = check_counter_pair(a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Transform::random(m, 2 * m, &mut rng);
    let r = Transform::random(n, 2 * n, &mut rng);
    transform_pair(a, b, &s, &r)
}
