use minpoly_proj::catalog::table1_specs;
use minpoly_proj::exactprob::{pmp_exact, pmpmin_exact, DEFAULT_EXACT_LIMIT};
use minpoly_proj::field::{seeded_rng, Matrix, PrimeField};
use minpoly_proj::jordan::{build_explicit, similarity_classes, spec_minpoly};
use minpoly_proj::montecarlo::{estimate_pmp, exact_fraction};
use minpoly_proj::poly::{minpoly_block_sequence, BlockSequence, Poly, ScalarSequence};
use minpoly_proj::{ElementaryDivisorSpec, ExactProb, PrimaryComponent};
use rand::Rng;

/// Minimal polynomial of `U B^k V` using dense products only.
fn dense_projection_minpoly(b_mat: &Matrix, u: &Matrix, v: &Matrix, len: usize) -> Poly {
    let field = b_mat.field();
    let bs = u.rows();
    let mut terms = vec![Vec::with_capacity(len); bs * bs];
    let mut kv = v.clone();
    for _ in 0..len {
        let s = u.mul(&kv).unwrap();
        for i in 0..bs {
            for j in 0..bs {
                terms[i * bs + j].push(s.get(i, j));
            }
        }
        kv = b_mat.mul(&kv).unwrap();
    }
    let entries = terms
        .into_iter()
        .map(|t| ScalarSequence::new(field, t).unwrap())
        .collect();
    minpoly_block_sequence(&BlockSequence::new(bs, entries).unwrap())
}

fn all_matrices(field: PrimeField, rows: usize, cols: usize) -> Vec<Matrix> {
    let p = field.modulus() as i64;
    let total = (p as u64).pow((rows * cols) as u32);
    (0..total)
        .map(|mut code| {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| {
                            let d = (code % p as u64) as i64;
                            code /= p as u64;
                            d
                        })
                        .collect()
                })
                .collect();
            Matrix::from_rows(field, &data).unwrap()
        })
        .collect()
}

fn random_invertible(field: PrimeField, n: usize, seed: u64) -> Matrix {
    let mut rng = seeded_rng(seed);
    loop {
        let w = field.random_matrix(&mut rng, n, n).unwrap();
        if w.is_nonsingular() {
            return w;
        }
    }
}

#[test]
fn success_probability_is_a_similarity_invariant() {
    let cases = [
        (
            r#"{"q": 2, "blocks": [{"poly": "1,1", "exps": [2]}, {"poly": "0,1", "exps": [1]}]}"#,
            1usize,
        ),
        (
            r#"{"q": 2, "blocks": [{"poly": "1,1,1", "exps": [1]}, {"poly": "1,1", "exps": [1]}]}"#,
            1,
        ),
        (
            r#"{"q": 3, "blocks": [{"poly": "1,1", "exps": [2, 1]}]}"#,
            1,
        ),
        (r#"{"q": 3, "blocks": [{"poly": "1,0,1", "exps": [1]}]}"#, 2),
    ];
    for (seed, (json, b)) in cases.into_iter().enumerate() {
        let spec = ElementaryDivisorSpec::from_json(json).unwrap();
        let field = PrimeField::new(spec.q()).unwrap();
        let n = spec.dimension();
        let a = build_explicit(&spec).unwrap().to_dense();
        let w = random_invertible(field, n, seed as u64);
        let conj = w.mul(&a).unwrap().mul(&w.inverse().unwrap()).unwrap();
        assert_ne!(conj, a, "pick a W that actually moves A");
        let target = spec_minpoly(&spec).unwrap();
        let us = all_matrices(field, b, n);
        let vs = all_matrices(field, n, b);
        let mut hits = 0u64;
        for u in &us {
            for v in &vs {
                if dense_projection_minpoly(&conj, u, v, 2 * n + 2) == target {
                    hits += 1;
                }
            }
        }
        let total = (us.len() * vs.len()) as u64;
        assert_eq!(
            exact_fraction(hits, total),
            pmp_exact(&spec, b),
            "{json} b={b}"
        );
    }
}

#[test]
fn worst_case_is_the_minimum_over_similarity_classes() {
    for q in [2u64, 3] {
        let field = PrimeField::new(q).unwrap();
        for n in 1..=6usize {
            let classes = similarity_classes(field, n).unwrap();
            for b in 1..=3usize {
                let worst = pmpmin_exact(q, n as u64, b, DEFAULT_EXACT_LIMIT).unwrap();
                let min = classes
                    .iter()
                    .map(|c| pmp_exact(c, b))
                    .min_by(|x, y| x.value().cmp(y.value()))
                    .unwrap();
                assert_eq!(min, worst, "q={q} n={n} b={b}");
            }
        }
    }
}

#[test]
fn reference_matrices_are_ordered() {
    let specs = table1_specs();
    let p = |i: usize, b: usize| pmp_exact(&specs[i].1, b).into_inner();
    for b in 1..=4 {
        assert!(p(0, b) > p(2, b), "A1 > A3 at b={b}");
        assert!(p(2, b) > p(1, b), "A3 > A2 at b={b}");
        assert_eq!(p(1, b), p(3, b), "A2 = A4 at b={b}");
        assert!(p(3, b) > p(4, b), "A4 > A5 at b={b}");
        assert!(p(4, b) < p(4, b + 1), "pmp increases with b");
    }
}

#[test]
fn reference_values_are_stable_under_exponent_changes() {
    // only the degree and the number of blocks at the top exponent matter
    let base = ElementaryDivisorSpec::from_json(
        r#"{"q": 5, "blocks": [{"poly": "2,0,1", "exps": [1, 1]}, {"poly": "1,1", "exps": [1]}]}"#,
    )
    .unwrap();
    let raised = ElementaryDivisorSpec::from_json(
        r#"{"q": 5, "blocks": [{"poly": "2,0,1", "exps": [4, 4]}, {"poly": "1,1", "exps": [3]}]}"#,
    )
    .unwrap();
    for b in 1..=4 {
        assert_eq!(pmp_exact(&base, b), pmp_exact(&raised, b));
    }
}

#[test]
fn random_spec_battery_has_small_z_scores() {
    let mut rng = seeded_rng(2024);
    let mut worst_z: f64 = 0.0;
    let mut ran = 0;
    for case in 0..50u64 {
        let q = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let parts = rng.gen_range(1..=3);
        let mut components = Vec::new();
        for _ in 0..parts {
            let d = rng.gen_range(1..=3);
            let blocks = rng.gen_range(1..=2);
            let mut exps: Vec<u32> = (0..blocks).map(|_| rng.gen_range(1..=2)).collect();
            exps.sort_unstable_by(|a, b| b.cmp(a));
            components.push(PrimaryComponent::degree_only(d, exps));
        }
        let spec = match ElementaryDivisorSpec::new(q, components) {
            Ok(s) => s,
            // e.g. three distinct linears requested over F_2
            Err(_) => continue,
        };
        let b = rng.gen_range(1..=2);
        let report = estimate_pmp(&spec, b, 4000, 7000 + case, None).unwrap();
        let exact: &ExactProb = report.exact.as_ref().unwrap();
        assert_eq!(exact, &pmp_exact(&spec, b));
        ran += 1;
        worst_z = worst_z.max(report.z_score.abs());
        assert!(
            report.z_score.abs() <= 4.0,
            "case {case}: {spec} b={b} z={}",
            report.z_score
        );
    }
    assert!(ran >= 30, "only {ran} valid cases");
    assert!(worst_z > 0.0);
}
