use multipack::ensembles::{sample, EnsembleKind, EnsembleSpec};
use multipack::geometry::{
    avg_sq_radius, cheb_sq_radius, code_min_radius, code_min_radius_exhaustive, find_bad_lists, lift_ball_to_sphere,
    list_radius, max_sq_radius, AvgRadiusForm,
};
use multipack::montecarlo::mc_tail;
use multipack::{Code, RadiusNotion};
use proptest::prelude::*;

const NOTIONS: [RadiusNotion; 3] = [RadiusNotion::Chebyshev, RadiusNotion::AverageRadius, RadiusNotion::MaxToCentroid];

fn list_strategy() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(n, l)| prop::collection::vec(prop::collection::vec(-10.0f64..10.0, n), l))
}

fn code_strategy(max_m: usize) -> impl Strategy<Value = Code> {
    (1usize..4, 3usize..=max_m).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), m)
            .prop_map(move |rows| Code::with_duplicates(n, rows, None).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn radius_chain(list in list_strategy()) {
        let forms: Vec<f64> = AvgRadiusForm::ALL.iter().map(|&f| avg_sq_radius(&list, f).unwrap()).collect();
        let scale = 1.0 + forms[0];
        for v in &forms {
            prop_assert!((v - forms[0]).abs() <= 1e-9 * scale);
        }
        let (cheb, center) = cheb_sq_radius(&list).unwrap();
        let max = max_sq_radius(&list).unwrap();
        prop_assert!(forms[0] <= cheb + 1e-9 * scale);
        prop_assert!(cheb <= max + 1e-9 * scale);
        for p in &list {
            let d: f64 = p.iter().zip(&center).map(|(a, b)| (a - b).powi(2)).sum();
            prop_assert!(d <= cheb * (1.0 + 1e-12) + 1e-12);
        }
    }

    #[test]
    fn radii_are_translation_and_order_invariant(list in list_strategy(), shift in -5.0f64..5.0) {
        let moved: Vec<Vec<f64>> = list.iter().rev().map(|p| p.iter().map(|v| v + shift).collect()).collect();
        for notion in NOTIONS {
            let (a, _) = list_radius(&list, notion).unwrap();
            let (b, _) = list_radius(&moved, notion).unwrap();
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + a));
        }
    }

    #[test]
    fn pruned_minimum_equals_exhaustive(code in code_strategy(14), l in 2usize..5, which in 0usize..3) {
        prop_assume!(code.len() >= l);
        let notion = NOTIONS[which];
        let fast = code_min_radius(&code, l, notion).unwrap();
        let slow = code_min_radius_exhaustive(&code, l, notion).unwrap();
        prop_assert!((fast.radius_sq - slow.radius_sq).abs() <= 1e-9 * (1.0 + slow.radius_sq));
    }

    #[test]
    fn bad_lists_match_brute_force(code in code_strategy(12), l in 2usize..4, which in 0usize..3, t in 0.1f64..6.0) {
        prop_assume!(code.len() >= l);
        let notion = NOTIONS[which];
        let found: Vec<Vec<usize>> = find_bad_lists(&code, l, t, notion).into_iter().map(|w| w.indices).collect();
        let mut expect = Vec::new();
        let m = code.len();
        let mut idx: Vec<usize> = (0..l).collect();
        loop {
            let rows: Vec<&[f64]> = idx.iter().map(|&i| code.row(i)).collect();
            let (r, _) = list_radius(&rows, notion).unwrap();
            if r <= t * (1.0 + 1e-12) {
                expect.push(idx.clone());
            }
            let mut k = l;
            while k > 0 && idx[k - 1] == m - l + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..l {
                idx[j] = idx[j - 1] + 1;
            }
        }
        prop_assert_eq!(found, expect);
    }

    #[test]
    fn lifting_never_shrinks_radii(seed in 0u64..1000, n in 1usize..6, l in 2usize..5) {
        let code = sample(&EnsembleSpec::new(EnsembleKind::Ball, n, 1.0, seed), 8).unwrap();
        let lifted = lift_ball_to_sphere(&code).unwrap();
        let idx: Vec<usize> = (0..l).collect();
        for notion in [RadiusNotion::Chebyshev, RadiusNotion::AverageRadius] {
            let a: Vec<&[f64]> = idx.iter().map(|&i| code.row(i)).collect();
            let b: Vec<&[f64]> = idx.iter().map(|&i| lifted.row(i)).collect();
            let (ra, _) = list_radius(&a, notion).unwrap();
            let (rb, _) = list_radius(&b, notion).unwrap();
            prop_assert!(rb >= ra * (1.0 - 1e-9) - 1e-12);
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let spec = EnsembleSpec::new(EnsembleKind::Gaussian, 4, 1.0, 99);
    let run = || {
        let code = sample(&spec, 300).unwrap();
        let w = code_min_radius(&code, 3, RadiusNotion::Chebyshev).unwrap();
        let bad = find_bad_lists(&code, 2, 0.05, RadiusNotion::AverageRadius);
        let tail = mc_tail(&spec, 3, 2.0, 50_000, 5).unwrap();
        (code, w, bad, tail)
    };
    let reference = run();
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        assert_eq!(pool.install(run), reference, "{threads} threads");
    }
}
