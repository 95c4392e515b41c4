use std::sync::Arc;

use proptest::prelude::*;
use uaext::averaging::OperatorTable;
use uaext::cole::{cole_extend, ColeSpec};
use uaext::funcsys::{generate_system, FunctionTable};
use uaext::group_ext::cyclic_action;
use uaext::io::SpaceDto;
use uaext::space::{make_space, make_surjection, FiniteSpace, Measure, SurjectionMap, DEFAULT_MERGE_TOL};
use uaext::C64;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

/// Distinct points on a coarse lattice so merging never fires.
fn lattice_space(max: usize) -> impl Strategy<Value = Arc<FiniteSpace>> {
    proptest::sample::subsequence((0..100usize).collect::<Vec<_>>(), 2..max).prop_map(|cells| {
        let raw: Vec<Vec<C64>> = cells
            .iter()
            .map(|&k| vec![C64::new((k % 10) as f64 * 0.1, (k / 10) as f64 * 0.1)])
            .collect();
        Arc::new(make_space(&raw, DEFAULT_MERGE_TOL).unwrap())
    })
}

/// A random surjection from a lattice space onto its first `k` points.
fn surjection() -> impl Strategy<Value = SurjectionMap> {
    lattice_space(16)
        .prop_flat_map(|y| {
            let n = y.len();
            (Just(y), 1..=n)
        })
        .prop_flat_map(|(y, k)| {
            let n = y.len();
            (Just(y), Just(k), proptest::collection::vec(0..k, n))
        })
        .prop_map(|(y, k, mut assignment)| {
            for (x, slot) in assignment.iter_mut().take(k).enumerate() {
                *slot = x;
            }
            let x = Arc::new(y.subspace(&(0..k).collect::<Vec<_>>()).unwrap());
            make_surjection(y, x, assignment).unwrap()
        })
}

fn weights_for(pi: &SurjectionMap, raw: &[C64]) -> Vec<C64> {
    (0..pi.source().len()).map(|j| raw[j % raw.len()]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fibers_partition_the_source(pi in surjection()) {
        let mut seen = vec![0usize; pi.source().len()];
        for (x, fiber) in pi.fibers().iter().enumerate() {
            prop_assert!(!fiber.is_empty());
            for &y in fiber {
                prop_assert_eq!(pi.apply(y), x);
                seen[y] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&s| s == 1));
    }

    #[test]
    fn pushforward_keeps_mass_and_never_grows_variation(pi in surjection(), raw in proptest::collection::vec(c64(), 1..16)) {
        let mu = Measure::new(pi.source().clone(), weights_for(&pi, &raw)).unwrap();
        let nu = pi.pushforward_measure(&mu).unwrap();
        prop_assert!((nu.total_mass() - mu.total_mass()).norm() <= 1e-12);
        prop_assert!(nu.total_variation() <= mu.total_variation() + 1e-12);
    }

    #[test]
    fn fiber_average_is_a_left_inverse_of_pullback(pi in surjection(), raw in proptest::collection::vec(c64(), 1..16)) {
        let t = OperatorTable::fiber_average(&pi);
        let f: Vec<C64> = (0..pi.target().len()).map(|x| raw[x % raw.len()]).collect();
        let pulled: Vec<C64> = (0..pi.source().len()).map(|y| f[pi.apply(y)]).collect();
        for (u, v) in t.apply(&pulled).iter().zip(&f) {
            prop_assert!((u - v).norm() <= 1e-14);
        }
        prop_assert!((t.norm() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn haar_projection_is_a_unital_norm_one_idempotent(
        y in lattice_space(14),
        shuffle in proptest::collection::vec(any::<proptest::sample::Index>(), 14),
        raw in proptest::collection::vec(c64(), 14),
    ) {
        let n = y.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for (i, ix) in shuffle.iter().take(n).enumerate() {
            perm.swap(i, ix.index(n));
        }
        let action = cyclic_action(y.clone(), perm).unwrap();
        let p = action.haar_projection();
        let one = vec![C64::new(1.0, 0.0); n];
        prop_assert!(p.apply(&one).iter().all(|v| (v - 1.0).norm() <= 1e-14));
        prop_assert!((p.norm() - 1.0).abs() <= 1e-14);
        let f = &raw[..n];
        let pf = p.apply(f);
        for (u, v) in p.apply(&pf).iter().zip(&pf) {
            prop_assert!((u - v).norm() <= 1e-13);
        }
        for orbit in action.orbits() {
            for &j in orbit {
                prop_assert!((pf[j] - pf[orbit[0]]).norm() <= 1e-13);
            }
        }
    }

    #[test]
    fn space_documents_round_trip_bit_for_bit(
        raw in proptest::collection::vec((any::<f64>(), -1e300f64..1e300), 1..20)
    ) {
        let pts: Vec<Vec<C64>> = raw
            .iter()
            .filter(|(re, _)| re.is_finite())
            .map(|&(re, im)| vec![C64::new(re, im)])
            .collect();
        prop_assume!(!pts.is_empty());
        let s = make_space(&pts, 0.0);
        prop_assume!(s.is_ok());
        let s = s.unwrap();
        let text = serde_json::to_string(&SpaceDto::from_space(&s)).unwrap();
        let back = serde_json::from_str::<SpaceDto>(&text).unwrap().to_space(0.0).unwrap();
        prop_assert_eq!(back.len(), s.len());
        for i in 0..s.len() {
            prop_assert_eq!(back.label(i), s.label(i));
            prop_assert_eq!(back.coords(i)[0].re.to_bits(), s.coords(i)[0].re.to_bits());
            prop_assert_eq!(back.coords(i)[0].im.to_bits(), s.coords(i)[0].im.to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cole_roots_satisfy_vieta(h1 in c64(), h0 in c64(), slope in c64()) {
        let raw: Vec<Vec<C64>> = (0..9)
            .map(|j| vec![C64::from_polar(0.5 + 0.05 * j as f64, 0.7 * j as f64)])
            .collect();
        let x = Arc::new(make_space(&raw, DEFAULT_MERGE_TOL).unwrap());
        let z = FunctionTable::coordinate(x.clone(), 0);
        let a = generate_system(x.clone(), vec![z.clone()], 2, 1e-9).unwrap();
        let c1 = z.map(|v| h1 + slope * v);
        let c0 = FunctionTable::constant(x.clone(), h0);
        let spec = ColeSpec::new(a, vec![c0.clone(), c1.clone()], None).unwrap();
        let cb = cole_extend(&spec, DEFAULT_MERGE_TOL, 1e-8).unwrap();
        let (sum, prod) = cb.vieta_residuals();
        prop_assert!(sum <= 1e-9 && prod <= 1e-9, "{} {}", sum, prod);
        // direct check: every root solves t² + c1 t + c0 = 0 at its base point
        let pi = cb.bundle.pi();
        for j in 0..pi.source().len() {
            let i = pi.apply(j);
            let t = cb.p_q.values()[j];
            let r = t * t + c1.values()[i] * t + c0.values()[i];
            prop_assert!(r.norm() <= 1e-9 * (1.0 + t.norm_sqr()));
        }
    }
}
