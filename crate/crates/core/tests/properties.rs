use proptest::collection::vec;
use proptest::prelude::*;

use espart::colors::{colored_to_rooted, rooted_to_colored, ColorFamily, ColoredPartition};
use espart::esp::{image_mult_rec, pre_k};
use espart::partition::{count, enumerate, PartitionFamily};
use espart::rooted::{Root, RootedPartition};
use espart::series::TruncatedSeries;
use espart::Partition;

fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    vec(-1000i128..1000, order + 1).prop_map(move |c| TruncatedSeries::from_coeffs(c, order))
}

fn partition() -> impl Strategy<Value = Partition> {
    vec(1u64..12, 0..9).prop_map(|parts| Partition::from_parts(parts).unwrap())
}

fn binary_partition() -> impl Strategy<Value = Partition> {
    vec(0u32..5, 0..12).prop_map(|exps| Partition::from_parts(exps.into_iter().map(|e| 1u64 << e)).unwrap())
}

/// `e_k` of the parts by the usual one-variable-at-a-time recurrence.
fn elementary(parts: &[u64], k: usize) -> u128 {
    let mut e = vec![0u128; k + 1];
    e[0] = 1;
    for &x in parts {
        for j in (1..=k).rev() {
            e[j] += e[j - 1] * x as u128;
        }
    }
    e[k]
}

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn series_ring_axioms(a in series(12), b in series(12), c in series(12)) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&TruncatedSeries::one(12)).unwrap(), a.clone());
        prop_assert_eq!(a.sub(&a).unwrap(), TruncatedSeries::zero(12));
    }

    #[test]
    fn truncation_commutes_with_arithmetic(a in series(16), b in series(16), m in 0usize..16) {
        let (ta, tb) = (a.truncate(m), b.truncate(m));
        prop_assert_eq!(a.mul(&b).unwrap().truncate(m), ta.mul(&tb).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().truncate(m), ta.add(&tb).unwrap());
    }

    #[test]
    fn shift_is_multiplication_by_a_monomial(a in series(14), k in 0usize..16) {
        prop_assert_eq!(a.shift(k), a.mul(&TruncatedSeries::monomial(k, 1, 14)).unwrap());
    }

    #[test]
    fn partition_text_round_trip(p in partition()) {
        let text = p.to_string();
        prop_assert_eq!(text.parse::<Partition>().unwrap(), p.clone());
        prop_assert_eq!(p.weight(), p.parts().sum::<u64>());
        prop_assert_eq!(p.len() as usize, p.to_vec().len());
        prop_assert!(p.to_vec().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn direct_sum_and_scaling(p in partition(), q in partition(), m in 1u64..6) {
        let s = p.direct_sum(&q).unwrap();
        prop_assert_eq!(&s, &q.direct_sum(&p).unwrap());
        prop_assert_eq!(s.weight(), p.weight() + q.weight());
        prop_assert_eq!(s.len(), p.len() + q.len());
        let scaled = p.scale(m).unwrap();
        prop_assert_eq!(scaled.weight(), m * p.weight());
        prop_assert_eq!(scaled.unscale(m).unwrap(), p);
    }

    #[test]
    fn pre_k_sums_to_elementary_symmetric_value(p in partition(), k in 1u64..5) {
        let image = pre_k(&p, k).unwrap();
        prop_assert_eq!(image.len(), choose(p.len(), k));
        let expected = if p.len() < k { 0 } else { elementary(&p.to_vec(), k as usize) };
        prop_assert_eq!(image.weight() as u128, expected);
    }

    #[test]
    fn multiplicity_recursion_matches_the_image(p in partition(), j in 1u64..40) {
        prop_assert_eq!(image_mult_rec(&p, j).unwrap(), pre_k(&p, 2).unwrap().multiplicity(j));
    }

    #[test]
    fn rooted_direct_sum_shifts_right_slots(mut p in binary_partition(), mut q in binary_partition(), i in 0u64..4, j in 0u64..4) {
        p.push(1, i + 1).unwrap();
        q.push(1, j + 1).unwrap();
        let a = RootedPartition::new(p.clone(), vec![Root::new(1, i)]).unwrap();
        let b = RootedPartition::new(q.clone(), vec![Root::new(1, j)]).unwrap();
        let s = a.direct_sum(&b).unwrap();
        prop_assert_eq!(s.weight(), p.weight() + q.weight());
        prop_assert_eq!(s.slots_of(1), vec![i, p.multiplicity(1) + j]);
        prop_assert_eq!(s.to_string().parse::<RootedPartition>().unwrap(), s);
    }

    #[test]
    fn color_map_round_trips(p in binary_partition(), a in 0u64..4, b in 0u64..4) {
        let mut base = p;
        base.push(1, a.max(b) + 2).unwrap();
        let (lo, hi) = (a.min(b), a.max(b) + 1);
        let lambda = RootedPartition::new(base, vec![Root::new(1, lo), Root::new(1, hi)]).unwrap();
        let q = rooted_to_colored(&lambda, ColorFamily::PLAIN).unwrap();
        prop_assert_eq!(q.weight() + 2, lambda.weight());
        prop_assert_eq!(q.to_string().parse::<ColoredPartition>().unwrap(), q.clone());
        prop_assert_eq!(colored_to_rooted(&q, ColorFamily::PLAIN).unwrap(), lambda);
    }
}

#[test]
fn count_matches_enumeration() {
    for n in 0..=24 {
        for family in [PartitionFamily::all(n), PartitionFamily::binary(n), PartitionFamily::dary(n, 3).unwrap()] {
            for k in [0, 2, 3] {
                let f = family.with_min_length(k);
                let listed = enumerate(&f);
                assert_eq!(count(&f).unwrap(), listed.len() as u128, "n = {n}, k = {k}");
                assert!(listed.windows(2).all(|w| w[0].to_vec() > w[1].to_vec()), "order at n = {n}");
                assert!(listed.iter().all(|p| p.weight() == n as u64 && p.len() >= k));
            }
        }
    }
}
