mod oracles;

use arboreal::dynamics::{
    factor_count_mod_p, factor_degrees_mod_p, orbit, reduce_rational, scan, DynamicalSystem, Experiment, FpPoly,
    PrimeRange, ScanMode, DEFAULT_BIT_CAP,
};
use arboreal::perm::Perm;
use arboreal::PermGroup;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 13];

fn poly_strategy() -> impl Strategy<Value = (u64, Vec<u64>)> {
    (0..PRIMES.len(), 1usize..=12).prop_flat_map(|(i, degree)| {
        let p = PRIMES[i];
        (
            Just(p),
            prop::collection::vec(0..p, degree),
            1..p,
        )
            .prop_map(|(p, mut coeffs, lead)| {
                coeffs.push(lead);
                (p, coeffs)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn factor_counts_match_full_factorization((p, coeffs) in poly_strategy(), seed in any::<u64>()) {
        let f = FpPoly::new(p, coeffs.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut want = oracles::distinct_factor_degrees(&coeffs, p, &mut rng);
        let mut got = factor_degrees_mod_p(&f).unwrap();
        want.sort_unstable();
        got.sort_unstable();
        prop_assert_eq!(factor_count_mod_p(&f).unwrap(), want.len());
        prop_assert_eq!(got, want);
    }

    #[test]
    fn orbit_reduction_commutes(
        coeffs in prop::collection::vec(-5i64..=5, 2..=3),
        lead in prop::sample::select(vec![-2i64, -1, 1, 2, 3]),
        a0 in -4i64..=4,
        den in 1i64..=3,
        pi in 0..PRIMES.len(),
    ) {
        let p = [5u64, 7, 11, 13, 17][pi];
        let mut f: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        f.push(BigInt::from(lead));
        let start = BigRational::new(a0.into(), den.into());
        let sys = DynamicalSystem::new(f.clone(), BigRational::zero(), start.clone()).unwrap();
        let exact = orbit(&sys, 4, DEFAULT_BIT_CAP).unwrap();
        // Iterate directly in F_p.
        let fp: Vec<i64> = f.iter().map(|c| i64::try_from(c).unwrap()).collect();
        let poly = oracles::reduce(&fp, p);
        let Some(mut x) = reduce_rational(&start, p) else { return Ok(()) };
        for value in &exact {
            prop_assert_eq!(reduce_rational(value, p), Some(x));
            x = poly.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
        }
    }

    #[test]
    fn merge_is_associative(cut1 in 3u64..400, cut2 in 400u64..900) {
        let exp = Experiment {
            f: vec![1.into(), (-1).into(), 1.into()],
            a: BigRational::zero(),
            a0: BigRational::from_integer(2.into()),
            mode: ScanMode::Hits,
            c: None,
            n_max: None,
            primes: PrimeRange { from: 2, to: 1000 },
            seed: None,
        };
        let part = |from, to| scan(&Experiment { primes: PrimeRange { from, to }, ..exp.clone() }).unwrap();
        let (a, b, c) = (part(2, cut1 - 1), part(cut1, cut2 - 1), part(cut2, 1000));
        let left = a.merge(&b).unwrap().merge(&c).unwrap();
        let right = a.merge(&b.merge(&c).unwrap()).unwrap();
        let swapped = c.merge(&a).unwrap().merge(&b).unwrap();
        let whole = scan(&exp).unwrap();
        prop_assert_eq!(left.to_json(), whole.to_json());
        prop_assert_eq!(right.to_json(), whole.to_json());
        prop_assert_eq!(swapped.to_json(), whole.to_json());
    }

    #[test]
    fn group_order_matches_closure(
        images in prop::collection::vec(Just((0..7usize).collect::<Vec<_>>()).prop_shuffle(), 1..=2),
    ) {
        let gens: Vec<Perm> = images.iter().map(|v| Perm::from_images(v.clone()).unwrap()).collect();
        let g = PermGroup::new(7, gens).unwrap();
        let elements = oracles::closure(7, &images);
        prop_assert_eq!(g.small_order(), Some(elements.len() as u64));
        prop_assert_eq!(g.is_primitive().unwrap_or(false), oracles::is_primitive(7, &images));
    }
}
