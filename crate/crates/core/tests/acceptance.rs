//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Everything is exact; nothing is compared with a tolerance.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use counterpair::canonical::{f_block, g_block, jordan};
use counterpair::deformation::build_template;
use counterpair::firstorder::{
    enumerate_typed_specs, is_injective, spec_id, sweep, SweepConfig, Verdict,
};
use counterpair::orbit::{
    expansion_residual, minimality_report, reduce_first_order, tangent_image,
};
use counterpair::recovery::{randomize, recover};
use counterpair::{assemble, CanonicalSpec, ExactMatrix, ExactScalar};

use common::*;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn eigenvalues(spec: &CanonicalSpec) -> Vec<ExactScalar> {
    spec.eigen.iter().map(|g| g.lambda.clone()).collect()
}

fn swept_specs() -> Vec<CanonicalSpec> {
    enumerate_typed_specs(6, 3)
}

fn eigen_bearing(count: usize, seed: u64) -> Vec<CanonicalSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_mixed_spec(&mut rng)).collect()
}

fn predicate_sweep() -> Outcome {
    let report = sweep(&SweepConfig::new(6, 3)).map_err(|e| e.to_string())?;
    let verdict = report.verdict();
    let detail = format!(
        "{} specs; {verdict}; theorem disagreements {}, proof disagreements {}",
        report.rows.len(),
        report.disagreements_theorem().count(),
        report.disagreements_proof().count()
    );
    match verdict {
        Verdict::TheoremOnly | Verdict::ProofOnly => Ok(detail),
        _ => Err(detail),
    }
}

fn eigen_only_injective() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let spec = random_eigen_spec(&mut rng);
        if !is_injective(&spec).map_err(|e| e.to_string())? {
            return Err(format!("not injective: {}", spec_id(&spec)));
        }
    }
    Ok("50 eigen-only specs injective".into())
}

fn eigen_part_irrelevant() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut injective = 0;
    for _ in 0..30 {
        let spec = random_mixed_spec(&mut rng);
        let full = is_injective(&spec).map_err(|e| e.to_string())?;
        let stripped = is_injective(&spec.without_eigen()).map_err(|e| e.to_string())?;
        if full != stripped {
            return Err(format!(
                "{}: {full} with eigen part, {stripped} without",
                spec_id(&spec)
            ));
        }
        injective += usize::from(full);
    }
    Ok(format!(
        "30 mixed specs agree with their eigen-free parts ({injective} injective)"
    ))
}

fn minimality() -> Outcome {
    let specs: Vec<_> = swept_specs()
        .into_iter()
        .chain(eigen_bearing(30, 4))
        .collect();
    for spec in &specs {
        let r = minimality_report(spec).map_err(|e| e.to_string())?;
        if !r.holds() {
            return Err(format!("{}: {r:?}", spec_id(spec)));
        }
    }
    Ok(format!("{} specs transversal and minimal", specs.len()))
}

fn reduction_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let mut spec = random_typed_part(&mut rng, 3, 3);
        if rand::Rng::gen_bool(&mut rng, 0.5) {
            spec.eigen = random_small_eigen_part(&mut rng);
        }
        let (a, b) = assemble(&spec).map_err(|e| e.to_string())?;
        let (m, n) = a.shape();
        let e = random_int_matrix(&mut rng, m, n);
        let f = random_int_matrix(&mut rng, n, m);
        let red = reduce_first_order(&spec, &e, &f).map_err(|e| e.to_string())?;
        let t = build_template(&spec).map_err(|e| e.to_string())?;
        let (te, tf) = tangent_image(&a, &b, &red.x, &red.y).map_err(|e| e.to_string())?;
        let (pe, pf) = t.instantiate(&red.params).map_err(|e| e.to_string())?;
        let re = e
            .try_sub(&te)
            .and_then(|d| d.try_sub(&pe))
            .map_err(|e| e.to_string())?;
        let rf = f
            .try_sub(&tf)
            .and_then(|d| d.try_sub(&pf))
            .map_err(|e| e.to_string())?;
        if !re.is_zero() || !rf.is_zero() {
            return Err(format!("{}: nonzero residual", spec_id(&spec)));
        }
        let again = reduce_first_order(&spec, &e, &f).map_err(|e| e.to_string())?;
        if again.params != red.params {
            return Err(format!("{}: params changed between runs", spec_id(&spec)));
        }
        let p: Vec<ExactScalar> = (0..t.k)
            .map(|_| ExactScalar::from_int(rand::Rng::gen_range(&mut rng, -3..=3)))
            .collect();
        let (de, df) = t.instantiate(&p).map_err(|e| e.to_string())?;
        let back = reduce_first_order(&spec, &de, &df).map_err(|e| e.to_string())?;
        if back.params != p {
            return Err(format!(
                "{}: template input did not round-trip",
                spec_id(&spec)
            ));
        }
    }
    Ok("50 instances: zero residual, stable params, template round-trip".into())
}

fn recovery_round_trip() -> Outcome {
    let specs: Vec<_> = swept_specs()
        .into_iter()
        .chain(eigen_bearing(20, 6))
        .collect();
    for spec in &specs {
        let cands = eigenvalues(spec);
        let (a, b) = assemble(spec).map_err(|e| e.to_string())?;
        for seed in 0..3 {
            let (a2, b2) = randomize(&a, &b, seed).map_err(|e| e.to_string())?;
            let got = recover(&a2, &b2, &cands).map_err(|e| format!("{}: {e}", spec_id(spec)))?;
            if &got != spec {
                return Err(format!(
                    "{} recovered as {} (seed {seed})",
                    spec_id(spec),
                    spec_id(&got)
                ));
            }
        }
    }
    Ok(format!("{} specs x 3 seeds", specs.len()))
}

fn structural_facts() -> Outcome {
    let zero = ExactScalar::from_int(0);
    for r in 1..=6 {
        let (f, g) = (f_block(r).unwrap(), g_block(r).unwrap());
        if f.matmul(&g).unwrap() != jordan(r, &zero).unwrap() {
            return Err(format!("F_{r} G_{r} != J_{r}(0)"));
        }
        let expected = if r == 1 {
            ExactMatrix::zeros(0, 0)
        } else {
            jordan(r - 1, &zero).unwrap()
        };
        if g.matmul(&f).unwrap() != expected {
            return Err(format!("G_{r} F_{r} != J_{}(0)", r - 1));
        }
    }
    Ok("r = 1..6".into())
}

fn second_order_remainder() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut done = 0;
    let mut eps_den = 3;
    while done < 20 {
        let spec = random_typed_part(&mut rng, 3, 3);
        let (a, b) = assemble(&spec).map_err(|e| e.to_string())?;
        let (m, n) = a.shape();
        let x = random_int_matrix(&mut rng, m, m);
        let y = random_int_matrix(&mut rng, n, n);
        let eps = ExactScalar::ratio(1, eps_den);
        eps_den += 2;
        let Ok((ra, rb)) = expansion_residual(&a, &b, &x, &y, &eps) else {
            continue;
        };
        // Closed forms of the remainder divided by ε².
        let s = ExactMatrix::identity(m).try_add(&x.scale(&eps)).unwrap();
        let r = ExactMatrix::identity(n).try_add(&y.scale(&eps)).unwrap();
        let (s_inv, r_inv) = (s.inverse().unwrap(), r.inverse().unwrap());
        let inv_eps2 = (&eps * &eps).inv().unwrap();
        let qa = x
            .pow(2)
            .unwrap()
            .matmul(&s_inv)
            .unwrap()
            .matmul(&a)
            .unwrap()
            .matmul(&r)
            .unwrap();
        let qa = qa
            .try_sub(&x.matmul(&a).unwrap().matmul(&y).unwrap())
            .unwrap();
        let qb = y
            .pow(2)
            .unwrap()
            .matmul(&r_inv)
            .unwrap()
            .matmul(&b)
            .unwrap()
            .matmul(&s)
            .unwrap();
        let qb = qb
            .try_sub(&y.matmul(&b).unwrap().matmul(&x).unwrap())
            .unwrap();
        if ra.scale(&inv_eps2) != qa || rb.scale(&inv_eps2) != qb {
            return Err(format!(
                "{}: remainder is not ε² times the closed form",
                spec_id(&spec)
            ));
        }
        done += 1;
    }
    Ok("20 instances exactly divisible by ε²".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        (
            "1 predicate sweep (size <= 6, <= 3 blocks)",
            predicate_sweep,
        ),
        ("2 eigen-only specs are injective", eigen_only_injective),
        (
            "3 eigen part does not affect injectivity",
            eigen_part_irrelevant,
        ),
        ("4 template transversal and minimal", minimality),
        ("5 first-order reduction soundness", reduction_soundness),
        ("6 recovery round-trip", recovery_round_trip),
        (
            "7 F_r G_r and G_r F_r are nilpotent Jordan blocks",
            structural_facts,
        ),
        (
            "8 expansion remainder is second order",
            second_order_remainder,
        ),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
