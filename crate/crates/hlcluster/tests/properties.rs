use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hlcluster::gridseeds::{initial_seed, SeedJson, TrackedSeed};
use hlcluster::heights::{build_from_hlr, HeightFunction};
use hlcluster::hl::{closed_x_alpha, closed_x_bracket, ghl_monomial, validate_hl, GhlSpec};
use hlcluster::quiver::IcedQuiver;
use hlcluster::sequences::seq_s_prime;
use hlcluster::verify::random_spec;
use hlcluster::ymon::{compare_dominance, lift_r, CartanData, DomOrdering, YMonomial};
use hlcluster::Error;

fn quiver() -> impl Strategy<Value = IcedQuiver> {
    (1usize..=12)
        .prop_flat_map(|nv| (Just(nv), 0..=nv / 3, prop::collection::vec(-3i64..=3, nv * (nv - 1) / 2)))
        .prop_map(|(nv, nf, bs)| {
            let names: Vec<String> = (0..nv).map(|k| format!("v{k}")).collect();
            let mut q = IcedQuiver::new(&names, &names[nv - nf..]).unwrap();
            let pairs = (0..nv).flat_map(|u| (u + 1..nv).map(move |v| (u, v)));
            for ((u, v), b) in pairs.zip(bs) {
                if b != 0 && !(q.is_frozen_at(u) && q.is_frozen_at(v)) {
                    q.add_arrows_at(u, v, b);
                }
            }
            q
        })
}

fn height(n: usize) -> impl Strategy<Value = HeightFunction> {
    (-3i64..=3, prop::collection::vec(any::<bool>(), n - 1)).prop_map(|(start, steps)| {
        let mut v = vec![start];
        for up in steps {
            v.push(v[v.len() - 1] + if up { 1 } else { -1 });
        }
        HeightFunction::new(v).unwrap()
    })
}

fn spec(rjmax: i64) -> impl Strategy<Value = GhlSpec> {
    any::<u64>().prop_map(move |s| random_spec(&mut ChaCha8Rng::seed_from_u64(s), 3, 3, rjmax))
}

fn monomial(n: usize) -> impl Strategy<Value = YMonomial> {
    prop::collection::vec(((1..=n), -4i64..4, -2i64..=2), 0..6)
        .prop_map(|v| YMonomial::from_pairs(v.into_iter().map(|(i, s, e)| ((i, s), e))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mutation_is_an_involution(q in quiver(), pick in any::<prop::sample::Index>()) {
        let mutable: Vec<usize> = (0..q.len()).filter(|&k| !q.is_frozen_at(k)).collect();
        prop_assume!(!mutable.is_empty());
        let k = mutable[pick.index(mutable.len())];
        let mut m = q.clone();
        m.mutate_at(k).unwrap();
        m.mutate_at(k).unwrap();
        prop_assert_eq!(m, q);
    }

    #[test]
    fn mutation_keeps_skew_symmetry(q in quiver(), pick in any::<prop::sample::Index>()) {
        let mutable: Vec<usize> = (0..q.len()).filter(|&k| !q.is_frozen_at(k)).collect();
        prop_assume!(!mutable.is_empty());
        let mut m = q.clone();
        m.mutate_at(mutable[pick.index(mutable.len())]).unwrap();
        for u in 0..m.len() {
            for v in 0..m.len() {
                prop_assert_eq!(m.b_at(u, v), -m.b_at(v, u));
                if m.is_frozen_at(u) && m.is_frozen_at(v) {
                    prop_assert_eq!(m.b_at(u, v), 0);
                }
            }
        }
    }

    #[test]
    fn quiver_json_round_trip(q in quiver()) {
        prop_assert_eq!(IcedQuiver::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn dominance_is_antisymmetric(m1 in monomial(3), m2 in monomial(3)) {
        let c = CartanData::new(3);
        let (ab, ba) = (compare_dominance(&m1, &m2, &c), compare_dominance(&m2, &m1, &c));
        match (ab, ba) {
            (DomOrdering::Equal, DomOrdering::Equal) => prop_assert_eq!(m1, m2),
            (DomOrdering::Greater(x), DomOrdering::Less(y)) | (DomOrdering::Less(x), DomOrdering::Greater(y)) => {
                prop_assert_eq!(x, y)
            }
            (DomOrdering::Incomparable, DomOrdering::Incomparable) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn ghl_with_zero_offsets_is_lifted_hl(s in spec(0)) {
        let hl = YMonomial::from_pairs(s.idx.iter().zip(&s.as_).map(|(&i, &a)| ((i, a), 1)));
        prop_assert!(validate_hl(&hl));
        prop_assert_eq!(ghl_monomial(&s).unwrap(), lift_r(&hl, s.r).unwrap());
    }

    #[test]
    fn ghl_is_dominant_with_the_right_length(s in spec(2)) {
        let m = ghl_monomial(&s).unwrap();
        prop_assert!(m.is_dominant());
        let want: i64 = s.rs.iter().map(|x| s.r + x).sum();
        prop_assert_eq!(m.iter().map(|(_, e)| e).sum::<i64>(), want);
    }

    #[test]
    fn closed_x_alpha_is_hl_at_depth_one(xi in (1usize..=6).prop_flat_map(height), i in 1usize..=6, j in 1usize..=6) {
        prop_assume!(i <= j && j <= xi.n());
        let m = closed_x_alpha(&xi, i, j, 1).unwrap();
        prop_assert!(validate_hl(&m), "{}", m);
        prop_assert_eq!(closed_x_alpha(&xi, i, j, 2).unwrap(), lift_r(&m, 2).unwrap());
    }

    #[test]
    fn case_guards_never_overlap(s in spec(2)) {
        let xi = build_from_hlr(&s.idx, &s.as_).unwrap();
        for (j, row) in seq_s_prime(&xi, &s).unwrap() {
            if let Err(Error::NoCase(msg)) = closed_x_bracket(&s, &xi, j, row - s.r) {
                prop_assert!(!msg.contains("overlap"), "{}", msg);
            }
        }
    }

    #[test]
    fn undo_restores_the_seed(n in 1usize..=4, ell in 1i64..=4, picks in prop::collection::vec(any::<prop::sample::Index>(), 0..12)) {
        let start = initial_seed(n, ell).unwrap();
        let mutable: Vec<String> =
            start.quiver.names().iter().filter(|v| !start.quiver.is_frozen(v).unwrap()).cloned().collect();
        let mut s = start.clone();
        for p in &picks {
            s.mutate(&mutable[p.index(mutable.len())]).unwrap();
        }
        prop_assert_eq!(s.log.len(), picks.len());
        let mid: SeedJson = serde_json::from_str(&serde_json::to_string(&s.to_json_value()).unwrap()).unwrap();
        let back = TrackedSeed::from_json_value(&mid, CartanData::new(n)).unwrap();
        prop_assert_eq!(back.to_json_value(), s.to_json_value());
        while s.undo().unwrap().is_some() {}
        prop_assert_eq!(s.to_json_value(), start.to_json_value());
    }
}
