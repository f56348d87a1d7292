//! Exhaustive comparison of the rank oracle with both predicates.

use std::fmt;
use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::{injectivity, proof_predicate, theorem_predicate};
use crate::canonical::{CanonicalSpec, EigenGroup};
use crate::error::Result;
use crate::exactmat::ExactScalar;

pub const CSV_HEADER: [&str; 11] = [
    "spec_id",
    "spec_json",
    "m",
    "n",
    "k",
    "rank_phi",
    "injective",
    "pred_theorem",
    "pred_proof",
    "agree_theorem",
    "agree_proof",
];

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub max_total_size: usize,
    pub max_blocks: usize,
    /// Number of eigenvalue-bearing specs appended after the eigen-free ones.
    pub eigen_samples: usize,
    pub eigen_lambda: ExactScalar,
}

impl SweepConfig {
    pub fn new(max_total_size: usize, max_blocks: usize) -> Self {
        Self {
            max_total_size,
            max_blocks,
            eigen_samples: 0,
            eigen_lambda: ExactScalar::from_int(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub spec: CanonicalSpec,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub rank_phi: usize,
    pub injective: bool,
    pub pred_theorem: bool,
    pub pred_proof: bool,
}

impl SweepRow {
    pub fn evaluate(spec: CanonicalSpec) -> Result<SweepRow> {
        let inj = injectivity(&spec)?;
        let (m, n) = spec.dims();
        Ok(SweepRow {
            m,
            n,
            k: inj.k,
            rank_phi: inj.rank,
            injective: inj.injective(),
            pred_theorem: theorem_predicate(&spec),
            pred_proof: proof_predicate(&spec),
            spec,
        })
    }

    pub fn agree_theorem(&self) -> bool {
        self.pred_theorem == self.injective
    }

    pub fn agree_proof(&self) -> bool {
        self.pred_proof == self.injective
    }
}

/// Which predicates match the oracle on every row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    TheoremOnly,
    ProofOnly,
    Both,
    Neither,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::TheoremOnly => "theorem_predicate (four inequalities) matches the rank oracle; proof_predicate does not",
            Verdict::ProofOnly => "proof_predicate (three inequalities) matches the rank oracle; theorem_predicate does not",
            Verdict::Both => "both predicates match the rank oracle on every swept spec",
            Verdict::Neither => "neither predicate matches the rank oracle on every swept spec",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn verdict(&self) -> Verdict {
        let theorem = self.rows.iter().all(SweepRow::agree_theorem);
        let proof = self.rows.iter().all(SweepRow::agree_proof);
        match (theorem, proof) {
            (true, false) => Verdict::TheoremOnly,
            (false, true) => Verdict::ProofOnly,
            (true, true) => Verdict::Both,
            (false, false) => Verdict::Neither,
        }
    }

    pub fn disagreements_theorem(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.agree_theorem())
    }

    pub fn disagreements_proof(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| !r.agree_proof())
    }
}

/// Every eigenvalue-free spec with at most `max_blocks` summands and total
/// size `Σ r ≤ max_total_size`, ordered by (block count, type tuple, size
/// tuple). The empty spec comes first.
pub fn enumerate_typed_specs(max_total_size: usize, max_blocks: usize) -> Vec<CanonicalSpec> {
    fn extend(
        prefix: &mut Vec<(u8, usize)>,
        remaining: usize,
        slots: usize,
        out: &mut Vec<Vec<(u8, usize)>>,
    ) {
        out.push(prefix.clone());
        if slots == 0 {
            return;
        }
        let last = prefix.last().copied().unwrap_or((1, 1));
        for ty in last.0..=4u8 {
            let min_size = if ty == last.0 && !prefix.is_empty() {
                last.1
            } else {
                1
            };
            for size in min_size..=remaining {
                prefix.push((ty, size));
                extend(prefix, remaining - size, slots - 1, out);
                prefix.pop();
            }
        }
    }

    let mut multisets = Vec::new();
    extend(&mut Vec::new(), max_total_size, max_blocks, &mut multisets);
    multisets.sort_by(|x, y| {
        let key = |v: &Vec<(u8, usize)>| {
            (
                v.len(),
                v.iter().map(|p| p.0).collect::<Vec<_>>(),
                v.iter().map(|p| p.1).collect::<Vec<_>>(),
            )
        };
        key(x).cmp(&key(y))
    });
    multisets
        .into_iter()
        .map(|blocks| {
            let mut spec = CanonicalSpec::default();
            for (ty, size) in blocks {
                match ty {
                    1 => spec.t1.push(size),
                    2 => spec.t2.push(size),
                    3 => spec.t3.push(size),
                    _ => spec.t4.push(size),
                }
            }
            spec
        })
        .collect()
}

/// Deterministic eigenvalue-bearing companions of the eigen-free specs.
fn eigen_samples(base: &[CanonicalSpec], count: usize, lambda: &ExactScalar) -> Vec<CanonicalSpec> {
    if base.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|i| {
            let mut spec = base[(i * 7 + 1) % base.len()].clone();
            let sizes = match i % 3 {
                0 => vec![1],
                1 => vec![2],
                _ => vec![1, 2],
            };
            spec.eigen = vec![EigenGroup {
                lambda: lambda.clone(),
                sizes,
            }];
            spec
        })
        .collect()
}

/// Evaluates every enumerated spec, in parallel, in enumeration order.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    sweep_with_progress(config, |_, _, _| {})
}

/// Like [`sweep`], calling `progress(row, done, total)` as rows complete.
/// Completion order is arbitrary; the report is still in enumeration order.
pub fn sweep_with_progress(
    config: &SweepConfig,
    progress: impl Fn(&SweepRow, usize, usize) + Sync,
) -> Result<SweepReport> {
    let mut specs = enumerate_typed_specs(config.max_total_size, config.max_blocks);
    let extra = eigen_samples(&specs, config.eigen_samples, &config.eigen_lambda);
    specs.extend(extra);
    let total = specs.len();
    let done = AtomicUsize::new(0);
    let rows = specs
        .into_par_iter()
        .map(|spec| {
            let row = SweepRow::evaluate(spec)?;
            progress(&row, done.fetch_add(1, Ordering::Relaxed) + 1, total);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport { rows })
}

/// Compact human-readable identifier, e.g. `t1=1,2;t4=3` or `empty`.
pub fn spec_id(spec: &CanonicalSpec) -> String {
    let join = |v: &[usize]| {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut parts = Vec::new();
    for g in &spec.eigen {
        parts.push(format!("e({})={}", g.lambda, join(&g.sizes)));
    }
    for (name, list) in [
        ("t1", &spec.t1),
        ("t2", &spec.t2),
        ("t3", &spec.t3),
        ("t4", &spec.t4),
    ] {
        if !list.is_empty() {
            parts.push(format!("{name}={}", join(list)));
        }
    }
    if parts.is_empty() {
        "empty".to_string()
    } else {
        parts.join(";")
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            spec_id(&r.spec),
            r.spec.to_json(),
            r.m.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.rank_phi.to_string(),
            r.injective.to_string(),
            r.pred_theorem.to_string(),
            r.pred_proof.to_string(),
            r.agree_theorem().to_string(),
            r.agree_proof().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
