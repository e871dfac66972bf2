mod common;

use std::collections::BTreeMap;

use phfiber::analysis::{is_removable, lower_star_extension};
use phfiber::barcode::CombinatorialBarcode;
use phfiber::complex::{build_complex, SimplicialComplex};
use phfiber::field::FieldSpec;
use phfiber::persistence::{
    barcode_of_filter, betti_numbers, format_rational, parse_rational, Filter, TotalBarcode,
};
use phfiber::strata::{
    barcode_of_stratum, enumerate_filter_strata, stratum_closure_leq, FilterStratum, StratumMode,
};
use proptest::prelude::*;

use common::*;

fn complexes() -> Vec<SimplicialComplex> {
    vec![
        complex("triangle"),
        complex("interval"),
        complex("path5"),
        complex("wedge"),
        build_complex(&[vec![0, 1, 2], vec![2, 3]]).unwrap(),
    ]
}

fn monotone(k: &SimplicialComplex, raw: &[u8]) -> Filter {
    let mut lv = vec![0u8; k.simplex_count()];
    for s in 0..k.simplex_count() {
        lv[s] = k
            .facets(s)
            .iter()
            .map(|&f| lv[f])
            .max()
            .unwrap_or(0)
            .max(raw[s] % 7);
    }
    Filter::new(k, lv.iter().map(|&v| q(v as i64, 6)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn barcode_documents_round_trip(ki in 0..5usize, raw in prop::collection::vec(any::<u8>(), 12)) {
        let k = &complexes()[ki];
        let f = monotone(k, &raw);
        let b = barcode_of_filter(k, &f, FieldSpec::F2).unwrap();
        let json = serde_json::to_string(&b).unwrap();
        prop_assert_eq!(serde_json::from_str::<TotalBarcode>(&json).unwrap(), b.clone());
        let t = CombinatorialBarcode::from_barcode(&b);
        prop_assert_eq!(t.to_string().parse::<CombinatorialBarcode>().unwrap(), t.clone());
        let st = FilterStratum::of_filter(k, &f);
        let json = serde_json::to_string(&st).unwrap();
        prop_assert_eq!(serde_json::from_str::<FilterStratum>(&json).unwrap(), st.clone());
        prop_assert_eq!(barcode_of_stratum(k, &st, FieldSpec::F2), t);
    }

    #[test]
    fn rationals_round_trip(n in 0i64..10_000, d in 1i64..10_000) {
        let x = q(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)), Some(x));
    }

    #[test]
    fn lower_star_is_max_of_vertices(vals in prop::collection::vec(0i64..=12, 5)) {
        let k = complex("path5");
        let m: BTreeMap<u32, _> = vals.iter().enumerate().map(|(v, &x)| (v as u32, q(x, 12))).collect();
        let f = lower_star_extension(&k, &m).unwrap();
        for e in 5..9 {
            let v = k.simplex(e).vertices();
            let top = std::cmp::max(q(vals[v[0] as usize], 12), q(vals[v[1] as usize], 12));
            prop_assert_eq!(f.value(e), &top);
        }
        prop_assert!(FilterStratum::of_filter(&k, &f).is_lower_star(&k));
    }

    #[test]
    fn removable_subsets_keep_betti_numbers(ki in 0..5usize, mask in any::<u16>()) {
        let k = &complexes()[ki];
        let l: Vec<usize> = (0..k.simplex_count()).filter(|&s| mask >> (s % 16) & 1 == 1).collect();
        let r = is_removable(k, &l, FieldSpec::F2).unwrap();
        let keep: Vec<bool> = (0..k.simplex_count()).map(|s| !l.contains(&s)).collect();
        prop_assert_eq!(r.is_subcomplex_complement, k.is_closed(&keep));
        if r.removable() && !l.is_empty() {
            let (a, _) = k.subcomplex(&keep).unwrap();
            let mut ba = betti_numbers(&a, FieldSpec::F2);
            ba.resize(k.dimension() + 1, 0);
            prop_assert_eq!(ba, betti_numbers(k, FieldSpec::F2));
        }
    }
}

// A stratum is either entirely lower-star or contains no lower-star filter.
#[test]
fn lower_star_is_a_union_of_strata() {
    let path3 = build_complex(&[vec![0, 1], vec![1, 2]]).unwrap();
    for k in [complex("triangle"), path3, complex("interval")] {
        for st in enumerate_filter_strata(&k, StratumMode::All).unwrap() {
            let b = st.interior_dim() as i64;
            let samples = [
                (1..=b).map(|i| q(i, b + 1)).collect::<Vec<_>>(),
                (1..=b).map(|i| q(i * i, (b + 1) * (b + 1))).collect(),
            ];
            for vals in samples {
                let f = st.filter_with_values(&k, &vals).unwrap();
                let by_def = (0..k.simplex_count()).all(|s| {
                    let top = k
                        .vertex_ids(s)
                        .into_iter()
                        .map(|v| f.value(v).clone())
                        .max()
                        .unwrap();
                    *f.value(s) == top
                });
                assert_eq!(by_def, st.is_lower_star(&k), "{st}");
            }
        }
    }
}

#[test]
fn closure_is_a_partial_order_on_interval_strata() {
    let k = complex("interval");
    let all = enumerate_filter_strata(&k, StratumMode::All).unwrap();
    for a in &all {
        assert!(stratum_closure_leq(a, a));
        for b in &all {
            if a != b && stratum_closure_leq(a, b) {
                assert!(!stratum_closure_leq(b, a));
            }
            for c in &all {
                if stratum_closure_leq(a, b) && stratum_closure_leq(b, c) {
                    assert!(stratum_closure_leq(a, c));
                }
            }
        }
    }
}

#[test]
fn brute_force_agrees_with_enumeration() {
    for k in [complex("triangle"), complex("interval")] {
        let ours: Vec<FilterStratum> = enumerate_filter_strata(&k, StratumMode::All).unwrap();
        let oracle: Vec<FilterStratum> = brute_force_strata(&k, true).into_iter().collect();
        assert_eq!(ours, oracle);
    }
}
