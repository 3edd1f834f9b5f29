//! Sequence values against a direct oracle: multiply every pair of positions
//! of every d-ary partition and count the products equal to 1, 2, 4 or d.

use espart::partition::{enumerate, PartitionFamily};
use espart::sequences::{values, Route, SeqId};

fn pair_product_count(d: u64, n: i64, target: u64) -> i128 {
    let family = PartitionFamily::dary(n, d).unwrap();
    let mut total = 0;
    for p in enumerate(&family) {
        let parts = p.to_vec();
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if parts[i] * parts[j] == target {
                    total += 1;
                }
            }
        }
    }
    total
}

#[test]
fn binary_sequences_match_pair_products() {
    let a = values(SeqId::A, Route::SeriesCoeff, 30).unwrap();
    let b = values(SeqId::B, Route::SeriesCoeff, 30).unwrap();
    let c = values(SeqId::C, Route::SeriesCoeff, 30).unwrap();
    for n in 0..=30 {
        assert_eq!(a[n as usize], pair_product_count(2, n, 1), "a_{n}");
        assert_eq!(b[n as usize], pair_product_count(2, n, 2), "b_{n}");
        assert_eq!(c[n as usize], pair_product_count(2, n, 4), "c_{n}");
    }
}

#[test]
fn dary_sequences_match_pair_products() {
    for d in 3..=5u64 {
        let a = values(SeqId::Ad(d), Route::SeriesCoeff, 25).unwrap();
        let b = values(SeqId::Bd(d), Route::SeriesCoeff, 25).unwrap();
        for n in 0..=25 {
            assert_eq!(a[n as usize], pair_product_count(d, n, 1), "a_{n}({d})");
            assert_eq!(b[n as usize], pair_product_count(d, n, d), "b_{n}({d})");
        }
    }
}

#[test]
fn every_applicable_route_agrees_for_dary_lines() {
    for id in [SeqId::Ad(3), SeqId::Bd(3), SeqId::Ad(4), SeqId::Bd(4)] {
        let series = values(id, Route::SeriesCoeff, 30).unwrap();
        for route in Route::ALL.into_iter().filter(|r| r.applies_to(id)) {
            assert_eq!(values(id, route, 30).unwrap(), series, "{id} via {route}");
        }
    }
}

#[test]
fn initial_terms() {
    let a = values(SeqId::A, Route::SeriesCoeff, 10).unwrap();
    assert_eq!(a, [0, 0, 1, 3, 7, 13, 23, 37, 57, 83, 119]);
}
