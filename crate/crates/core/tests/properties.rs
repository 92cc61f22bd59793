//! Structural and load invariants, checked on constructed arrays and on
//! random arrays derived from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use pda_cdc::combinatorics::binomial;
use pda_cdc::constructions::{man_pda, p1_pda, p2_pda};
use pda_cdc::loads::{achieved_load, optimal_load, optimal_load_int, u_value, z_value};
use pda_cdc::pda::{validate_pda, Pda, PdaEntry, PdaError};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Constructed arrays with at most 10 columns.
fn family() -> impl Strategy<Value = Pda> {
    prop_oneof![
        (2usize..=8).prop_flat_map(|k| (Just(k), 1..=k)).prop_map(|(k, i)| man_pda(k, i).unwrap()),
        (2usize..=4, 1usize..=4)
            .prop_filter("K <= 10", |(q, m)| q * m <= 10)
            .prop_map(|(q, m)| p1_pda(q, m).unwrap()),
        (2usize..=4, 1usize..=4)
            .prop_filter("K <= 10", |(q, m)| q * m <= 10)
            .prop_map(|(q, m)| p2_pda(q, m).unwrap()),
    ]
}

/// A random derived PDA: nonempty row subset of a constructed array, columns
/// shuffled, labels permuted. All of these keep conditions a) and b).
fn derived() -> impl Strategy<Value = Vec<Vec<PdaEntry>>> {
    family().prop_flat_map(|pda| {
        let (f, k) = (pda.f(), pda.k());
        let s = pda.s().max(1);
        (
            Just(pda),
            proptest::collection::vec(any::<bool>(), f),
            Just((0..k).collect::<Vec<_>>()).prop_shuffle(),
            Just((1..=s as u32).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(|(pda, keep, cols, labels)| {
                let mut rows: Vec<Vec<PdaEntry>> = pda
                    .to_rows()
                    .into_iter()
                    .zip(&keep)
                    .filter(|(_, &k)| k)
                    .map(|(row, _)| {
                        cols.iter()
                            .map(|&c| match row[c] {
                                PdaEntry::Symbol(x) => PdaEntry::Symbol(labels[x as usize - 1]),
                                PdaEntry::Star => PdaEntry::Star,
                            })
                            .collect()
                    })
                    .collect();
                if rows.is_empty() {
                    rows.push(pda.row(0).to_vec());
                }
                rows
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn render_parse_round_trip(rows in derived()) {
        let pda = Pda::from_rows(rows).unwrap();
        let text = pda.render();
        prop_assert_eq!(Pda::parse(text.as_bytes()).unwrap(), pda.clone());
        prop_assert!(validate_pda(&pda.to_rows()).is_ok());
    }

    #[test]
    fn symbol_count_identity(rows in derived()) {
        let pda = Pda::from_rows(rows).unwrap();
        let stats = pda.stats();
        let weighted: usize = stats.s_t.iter().map(|(t, n)| t * n).sum();
        prop_assert_eq!(weighted, pda.k() * pda.f() - pda.t());
        let theta_sum: BigRational = stats.theta.values().cloned().sum();
        if pda.s() > 0 {
            prop_assert_eq!(theta_sum, BigRational::one());
        }
    }

    #[test]
    fn subarrays_keep_conditions(pda in family(), mask in any::<u16>()) {
        let nodes: Vec<usize> = (0..pda.k()).filter(|c| mask >> c & 1 == 1).collect();
        prop_assume!(!nodes.is_empty());
        match pda.column_subarray(&nodes) {
            Ok(sub) => {
                prop_assert!(sub.validate().is_structurally_ok());
                let occ = sub.occurrences();
                let full = pda.occurrences();
                for (s, places) in occ {
                    prop_assert!(places.len() <= full[s as usize - 1].len());
                }
            }
            Err(PdaError::EmptyStarRow { row }) => {
                prop_assert!(nodes.iter().all(|&c| !pda.get(row, c).is_star()));
                prop_assert!(pda.stats().tau < pda.k() - nodes.len() + 1);
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn converse_bounds_every_derived_array(rows in derived()) {
        // No Comp-PDA scheme beats the optimal tradeoff at its own storage load.
        let pda = Pda::from_rows(rows).unwrap();
        let tau = pda.stats().tau;
        prop_assume!(tau >= 1);
        for q in pda.k() - tau + 1..=pda.k() {
            let a = achieved_load(&pda, q).unwrap();
            prop_assert!(a.l >= optimal_load(pda.k(), q, &a.r).unwrap());
        }
    }
}

#[test]
fn construction_sweep() {
    for q in 2..=4usize {
        for m in 1..=4usize {
            if q * m > 10 {
                continue;
            }
            let k = q * m;
            let qm1 = q.pow(m as u32 - 1);
            let p1 = p1_pda(q, m).unwrap();
            assert_eq!((p1.k(), p1.f(), p1.t(), p1.s()), (k, qm1, m * qm1, (q - 1) * qm1));
            assert_eq!(p1.stats().regular_g, Some(m));
            assert_eq!(p1.stats().tau, m);
            let p2 = p2_pda(q, m).unwrap();
            assert_eq!((p2.k(), p2.f(), p2.t(), p2.s()), (k, (q - 1) * qm1, m * (q - 1) * (q - 1) * qm1, qm1));
            assert_eq!(p2.stats().regular_g, Some(m * (q - 1)));
            assert_eq!(p2.stats().tau, m * (q - 1));
            for pda in [&p1, &p2] {
                assert!(validate_pda(&pda.to_rows()).is_ok());
            }
        }
    }
    for k in 1..=8usize {
        for i in 1..=k {
            let pda = man_pda(k, i).unwrap();
            assert!(validate_pda(&pda.to_rows()).is_ok());
            assert_eq!(BigInt::from(pda.f()), binomial(k as i64, i as i64));
            assert_eq!(pda.stats().tau, i);
            if i < k {
                assert_eq!(pda.stats().regular_g, Some(i + 1));
            }
        }
    }
}

#[test]
fn crossing_entries_are_stars() {
    // For every pair of occurrences of a symbol, the two crossing cells are
    // stars; checked directly, independent of the validator.
    let mut arrays = Vec::new();
    for k in 1..=8 {
        for i in 1..=k {
            arrays.push(man_pda(k, i).unwrap());
        }
    }
    for (q, m) in [(2, 2), (2, 3), (2, 4), (3, 2), (4, 2)] {
        arrays.push(p1_pda(q, m).unwrap());
        arrays.push(p2_pda(q, m).unwrap());
    }
    for pda in &arrays {
        for places in pda.occurrences() {
            for &(r1, c1) in &places {
                for &(r2, c2) in &places {
                    if (r1, c1) != (r2, c2) {
                        assert!(r1 != r2 && c1 != c2);
                        assert!(pda.get(r1, c2).is_star() && pda.get(r2, c1).is_star());
                    }
                }
            }
        }
    }
}

#[test]
fn z_is_strictly_decreasing_and_convex() {
    for k in 2..=20usize {
        for q in 2..=k {
            let z: Vec<BigRational> = (k - q + 1..=k).map(|u| z_value(k, q, u).unwrap()).collect();
            for w in z.windows(2) {
                assert!(w[1] < w[0], "K={k} Q={q}");
            }
            for w in z.windows(3) {
                assert!(&w[0] + &w[2] > &w[1] + &w[1], "K={k} Q={q}");
            }
            // Z / C(K, Q) is the optimal load at integer points.
            for (u, zu) in (k - q + 1..=k).zip(&z) {
                let normalized = zu / BigRational::from_integer(binomial(k as i64, q as i64));
                assert_eq!(normalized, optimal_load_int(k, q, u).unwrap());
            }
        }
    }
}

#[test]
fn u_sequence_shape() {
    for k in 2..=20usize {
        for q in 1..=k {
            let c = BigRational::from_integer(binomial(k as i64 - 1, q as i64 - 1));
            assert_eq!(u_value(k, q, 1).unwrap(), c, "K={k} Q={q}");
            assert_eq!(u_value(k, q, 2).unwrap(), c, "K={k} Q={q}");
            if q >= 3 {
                for u in 2..k {
                    assert!(u_value(k, q, u + 1).unwrap() < u_value(k, q, u).unwrap(), "K={k} Q={q} u={u}");
                }
            }
        }
    }
}

#[test]
fn optimal_load_shape() {
    for k in 1..=12usize {
        for q in 1..=k {
            assert_eq!(optimal_load_int(k, q, k).unwrap(), BigRational::zero());
            for r in k - q + 1..k {
                let here = optimal_load_int(k, q, r).unwrap();
                // Fewer stragglers, less to shuffle per node.
                if q < k && r + q >= k {
                    assert!(optimal_load_int(k, q + 1, r).unwrap() < here, "K={k} Q={q} r={r}");
                }
                assert!(optimal_load_int(k, q, r + 1).unwrap() < here);
            }
        }
        for r in 1..=k {
            assert_eq!(optimal_load_int(k, k, r).unwrap(), rat(k as i64 - r as i64, (k * r) as i64));
        }
    }
}

#[test]
fn tradeoff_interpolates_between_integer_points() {
    for k in 2..=8usize {
        for q in 1..=k {
            for r in k - q + 1..k {
                let (a, b) = (optimal_load_int(k, q, r).unwrap(), optimal_load_int(k, q, r + 1).unwrap());
                for (n, d) in [(1, 4), (1, 2), (2, 3)] {
                    let x = BigRational::from_integer(r.into()) + rat(n, d);
                    assert_eq!(optimal_load(k, q, &x).unwrap(), &a + (&b - &a) * rat(n, d));
                }
            }
        }
    }
}

#[test]
fn man_meets_the_tradeoff() {
    for k in 1..=8usize {
        for q in 1..=k {
            for r in k - q + 1..=k {
                let pda = man_pda(k, r).unwrap();
                let a = achieved_load(&pda, q).unwrap();
                assert_eq!(a.r, BigRational::from_integer(r.into()));
                assert_eq!(a.l, optimal_load_int(k, q, r).unwrap(), "K={k} Q={q} r={r}");
            }
        }
    }
}
