use proptest::prelude::*;
use thermo_order_core::catalysis::{ctrump_possible, work_quantities};
use thermo_order_core::entropy::nonnegative_alpha_grid;
use thermo_order_core::majorization::thermomajorizes_with;
use thermo_order_core::witness::random_gibbs_stochastic;
use thermo_order_core::*;

fn normalize(raw: Vec<f64>) -> Vec<f64> {
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

fn distribution(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, n).prop_map(normalize)
}

fn levels(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..3.0, n)
}

fn state(n: usize) -> impl Strategy<Value = BlockState<f64>> {
    (levels(n), distribution(n))
        .prop_map(|(e, p)| BlockState::new(p, Hamiltonian::new(e).unwrap()).unwrap())
}

fn sized_state() -> impl Strategy<Value = BlockState<f64>> {
    (1usize..=5).prop_flat_map(state)
}

fn finite(x: ExtReal) -> f64 {
    x.finite().expect("finite value")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_associative(a in state(2), b in state(3), c in state(2)) {
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert_eq!(left.ham().levels().len(), right.ham().levels().len());
        for (x, y) in left.probs().iter().zip(right.probs()) {
            prop_assert!((x - y).abs() < 1e-15);
        }
        for (x, y) in left.ham().levels().iter().zip(right.ham().levels()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn gibbs_of_composite_is_product(e1 in levels(3), e2 in levels(2)) {
        let (h1, h2) = (Hamiltonian::new(e1).unwrap(), Hamiltonian::new(e2).unwrap());
        let joint = gibbs_state(&h1.combine(&h2));
        let product = tensor(&gibbs_state(&h1), &gibbs_state(&h2));
        for (x, y) in joint.probs().iter().zip(product.probs()) {
            prop_assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn free_energy_is_additive(a in state(3), b in state(2)) {
        let ab = tensor(&a, &b);
        for alpha in default_alpha_grid() {
            let lhs = finite(free_energy_alpha(&ab, alpha).unwrap());
            let rhs = finite(free_energy_alpha(&a, alpha).unwrap()) + finite(free_energy_alpha(&b, alpha).unwrap());
            prop_assert!((lhs - rhs).abs() < 1e-10, "α = {}: {} vs {}", alpha, lhs, rhs);
        }
    }

    #[test]
    fn gibbs_stochastic_maps_lower_free_energy(s in sized_state(), seed in any::<u64>()) {
        let m = random_gibbs_stochastic(s.ham(), seed);
        let out = BlockState::new(apply(&m, s.probs()).unwrap(), s.ham().clone()).unwrap();
        for alpha in nonnegative_alpha_grid() {
            let before = free_energy_alpha(&s, alpha).unwrap();
            let after = free_energy_alpha(&out, alpha).unwrap();
            prop_assert!(before.ge_within(after, 1e-9), "α = {}: {} → {}", alpha, before, after);
        }
        // The output is reachable, so its curve lies below.
        let cmp = thermomajorizes(&s, &out).unwrap();
        prop_assert!(cmp.verdict.allows() || cmp.violations.iter().all(|(_, g)| *g > -1e-9));
    }

    #[test]
    fn thermomajorization_is_reflexive_and_transitive(s in sized_state(), s1 in any::<u64>(), s2 in any::<u64>()) {
        prop_assert!(thermomajorizes(&s, &s).unwrap().verdict.allows());
        let m1 = random_gibbs_stochastic(s.ham(), s1);
        let m2 = random_gibbs_stochastic(s.ham(), s2);
        let q = BlockState::new(apply(&m1, s.probs()).unwrap(), s.ham().clone()).unwrap();
        let r = BlockState::new(apply(&m2, q.probs()).unwrap(), s.ham().clone()).unwrap();
        let tol = 1e-9;
        let ab = thermomajorizes_with(&s, &q, &tol).unwrap().verdict.allows();
        let bc = thermomajorizes_with(&q, &r, &tol).unwrap().verdict.allows();
        prop_assume!(ab && bc);
        prop_assert!(thermomajorizes_with(&s, &r, &tol).unwrap().verdict.allows());
    }

    #[test]
    fn renyi_entropy_is_schur_concave(p in (2usize..=6).prop_flat_map(distribution), seed in any::<u64>()) {
        let flat = Hamiltonian::trivial(p.len());
        let m = random_gibbs_stochastic(&flat, seed);
        let q = apply(&m, &p).unwrap();
        prop_assert!(majorizes(&p, &q).unwrap().verdict.allows());
        for alpha in nonnegative_alpha_grid() {
            let hp = renyi_entropy(&p, alpha).unwrap();
            let hq = renyi_entropy(&q, alpha).unwrap();
            prop_assert!(hq.ge_within(hp, 1e-9), "α = {}", alpha);
        }
    }

    #[test]
    fn exact_and_float_verdicts_agree(a in state(3), b in state(3)) {
        let b = BlockState::new(b.probs().to_vec(), a.ham().clone()).unwrap();
        let float = thermomajorizes(&a, &b).unwrap();
        // Skip instances within float tolerance of tangency.
        let near_tangent = float.violations.iter().any(|(_, g)| *g > -1e-8) || float.min_gap.abs() < 1e-8;
        prop_assume!(!near_tangent);
        let exact = thermomajorizes(&a.to_exact(), &b.to_exact()).unwrap();
        prop_assert_eq!(float.verdict.allows(), exact.verdict.allows());
    }

    #[test]
    fn embedding_reduces_to_majorization(
        d in prop::collection::vec(1u64..6, 2..=4),
        seed in any::<u64>(),
        raw in prop::collection::vec(0.01f64..1.0, 4),
    ) {
        let spec = EmbeddingSpec::new(d).unwrap();
        let ham = spec.hamiltonian();
        let n = spec.len();
        let p = BlockState::new(normalize(raw[..n].to_vec()), ham.clone()).unwrap().to_exact();
        let m = random_gibbs_stochastic(&ham, seed);
        let q = normalize(apply(&m, p.to_f64().probs()).unwrap());
        let q = BlockState::new(q, ham.clone()).unwrap().to_exact();
        for (x, y) in [(&p, &q), (&q, &p)] {
            let thermal = thermomajorizes(x, y).unwrap().verdict.allows();
            let plain = majorizes(&embed(x.probs(), &spec).unwrap(), &embed(y.probs(), &spec).unwrap())
                .unwrap()
                .verdict
                .allows();
            prop_assert_eq!(thermal, plain);
        }
        prop_assert_eq!(&unembed(&embed(p.probs(), &spec).unwrap(), &spec).unwrap(), p.probs());
    }

    #[test]
    fn embedded_gibbs_is_uniform(d in prop::collection::vec(1u64..8, 1..=5)) {
        let spec = EmbeddingSpec::new(d).unwrap();
        let embedded: Vec<f64> = embed(&spec.gibbs(), &spec).unwrap().iter().map(Scalar::to_f64).collect();
        let ln_d = (spec.total() as f64).ln();
        for alpha in nonnegative_alpha_grid() {
            prop_assert!((finite(renyi_entropy(&embedded, alpha).unwrap()) - ln_d).abs() < 1e-12);
        }
    }

    #[test]
    fn ctrump_is_a_quasi_order(p in distribution(3), q in distribution(3), r in distribution(3)) {
        prop_assert!(ctrump_possible(&p, &p).unwrap().possible);
        let pq = ctrump_possible(&p, &q).unwrap().possible;
        let qr = ctrump_possible(&q, &r).unwrap().possible;
        if pq && qr {
            prop_assert!(ctrump_possible(&p, &r).unwrap().possible);
        }
    }

    #[test]
    fn work_quantities_are_ordered(s in sized_state()) {
        let w = work_quantities(&s).unwrap();
        prop_assert!(w.f0.abs() < 1e-12, "full rank gives f0 = 0, got {}", w.f0);
        prop_assert!(w.f0 <= w.f1 + 1e-12 && w.f1 <= w.finf + 1e-12);
    }

    #[test]
    fn witness_feasibility_matches_curves(a in state(4), seed in any::<u64>(), other in distribution(4), flip in any::<bool>()) {
        let ham = a.ham().clone();
        let b = if flip {
            BlockState::new(other, ham.clone()).unwrap()
        } else {
            let m = random_gibbs_stochastic(&ham, seed);
            let mixed: Vec<f64> = apply(&m, a.probs()).unwrap().iter()
                .zip(gibbs_state(&ham).probs())
                .map(|(x, g)| 0.9 * x + 0.1 * g)
                .collect();
            BlockState::new(normalize(mixed), ham.clone()).unwrap()
        };
        let cmp = thermomajorizes(&a, &b).unwrap();
        let near_tangent = cmp.violations.iter().all(|(_, g)| *g > -1e-8) && cmp.min_gap.abs() < 1e-8;
        prop_assume!(!near_tangent);
        let outcome = find_witness(&a, &b).unwrap();
        prop_assert_eq!(outcome.is_feasible(), cmp.verdict.allows());
        if let WitnessOutcome::Feasible(w) = outcome {
            prop_assert!(w.validated());
            prop_assert!(w.residuals().target.unwrap() < 1e-8);
        }
    }

    #[test]
    fn total_correlation_is_nonnegative(raw in prop::collection::vec(0.01f64..1.0, 8)) {
        let joint = JointCatalyst::new(normalize(raw), vec![2, 2, 2]).unwrap();
        prop_assert!(total_correlation(&joint).unwrap() >= 0.0);
        prop_assert!(total_correlation(&joint.decorrelated()).unwrap().abs() < 1e-12);
    }
}
