//! The elementary symmetric partition map.
//!
//! `pre_k(λ)` is the partition whose parts are the summands of
//! `e_k(λ_1, …, λ_ℓ)`: one product for every choice of `k` distinct
//! positions. Equal values at different positions are different variables,
//! so the image is computed from multiplicities: choosing `c_v` of the
//! `m_v` copies of each value `v` contributes the part `∏ v^{c_v}` exactly
//! `∏ C(m_v, c_v)` times.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{binomial, Checked, Error, Result};
use crate::partition::{for_each_partition, FamilyKind, Partition, PartitionFamily};

/// Largest `k` the command line accepts by default.
pub const DEFAULT_K_CAP: u64 = 6;

fn accumulate(
    distinct: &[(u64, u64)],
    idx: usize,
    left: u64,
    product: u64,
    ways: u128,
    repetition: bool,
    out: &mut BTreeMap<u64, u128>,
) -> Result<()> {
    if left == 0 {
        let slot = out.entry(product).or_insert(0);
        *slot = slot.add_or(ways, "image multiplicity")?;
        return Ok(());
    }
    let Some(&(value, mult)) = distinct.get(idx) else {
        return Ok(());
    };
    let max_take = if repetition { left } else { left.min(mult) };
    let mut power = 1u64;
    for take in 0..=max_take {
        if take > 0 {
            power = power.mul_or(value, "image part")?;
        }
        let choose = if repetition {
            // monomials of degree `take` in `mult` variables
            binomial(mult + take - 1, take)?
        } else {
            binomial(mult, take)?
        };
        accumulate(
            distinct,
            idx + 1,
            left - take,
            product.mul_or(power, "image part")?,
            ways.mul_or(choose, "image multiplicity")?,
            repetition,
            out,
        )?;
    }
    Ok(())
}

fn evaluate(lambda: &Partition, k: u64, repetition: bool) -> Result<Partition> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let distinct: Vec<(u64, u64)> = lambda.distinct().collect();
    let mut parts = BTreeMap::new();
    accumulate(&distinct, 0, k, 1, 1, repetition, &mut parts)?;
    let mut image = Partition::empty();
    for (value, count) in parts {
        let count = u64::try_from(count).map_err(|_| Error::Overflow("image length"))?;
        image.push(value, count)?;
    }
    Ok(image)
}

/// `pre_k(λ)`; ε when `ℓ(λ) < k` (the empty sum).
pub fn pre_k(lambda: &Partition, k: u64) -> Result<Partition> {
    if k > 0 && lambda.len() < k {
        return Ok(Partition::empty());
    }
    evaluate(lambda, k, false)
}

/// The summands of the complete homogeneous polynomial `h_k` evaluated at
/// the parts of `λ`: every degree-`k` monomial in the positions, with
/// repetition.
pub fn pre_h(lambda: &Partition, k: u64) -> Result<Partition> {
    if lambda.is_empty() {
        return Err(Error::InvalidArgument("h_k needs a nonempty partition".into()));
    }
    evaluate(lambda, k, true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRecord {
    pub source: Partition,
    pub image: Partition,
}

/// One record per source partition of the family (length forced to `≥ k`).
/// Images are not deduplicated.
pub fn image_multiset(family: &PartitionFamily, k: u64) -> Result<Vec<ImageRecord>> {
    let family = family.with_min_length(k);
    let mut sources = Vec::new();
    for_each_partition(&family, |p| sources.push(p.clone()));
    sources
        .into_iter()
        .map(|source| {
            let image = pre_k(&source, k)?;
            Ok(ImageRecord { source, image })
        })
        .collect()
}

/// `m_i(S)` summed over the images.
pub fn m_total(records: &[ImageRecord], i: u64) -> Result<u64> {
    records
        .iter()
        .try_fold(0u64, |acc, r| acc.add_or(r.image.multiplicity(i), "m_total"))
}

/// `m_j(pre_2(λ))` straight from the multiplicities of `λ`:
/// pairs `e < f` with `ef = j`, plus `C(m_√j, 2)` when `j` is a square.
pub fn image_mult_rec(lambda: &Partition, j: u64) -> Result<u64> {
    let mut total = 0u64;
    for (e, me) in lambda.distinct() {
        if !j.is_multiple_of(e) {
            continue;
        }
        let f = j / e;
        if e < f {
            let mf = lambda.multiplicity(f);
            total = total.add_or(me.mul_or(mf, "image_mult_rec")?, "image_mult_rec")?;
        } else if e == f {
            let pairs = binomial(me, 2)?;
            let pairs = u64::try_from(pairs).map_err(|_| Error::Overflow("image_mult_rec"))?;
            total = total.add_or(pairs, "image_mult_rec")?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub n: i64,
    pub first: Partition,
    pub second: Partition,
    pub image: Partition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    pub kind: FamilyKind,
    pub k: u64,
    pub n_max: i64,
    pub sources_checked: u64,
    /// The collision at the smallest `n`, first in enumeration order.
    pub first_collision: Option<Collision>,
}

impl InjectivityReport {
    pub fn passed(&self) -> bool {
        self.first_collision.is_none()
    }
}

fn first_collision_at(
    family: &PartitionFamily,
    k: u64,
    filter: Option<&(dyn Fn(&Partition) -> bool + Sync)>,
) -> Result<(u64, Option<Collision>)> {
    let mut seen: HashMap<Partition, Partition> = HashMap::new();
    let mut checked = 0u64;
    let mut found = None;
    let mut failure = None;
    for_each_partition(family, |source| {
        if found.is_some() || failure.is_some() {
            return;
        }
        if filter.is_some_and(|keep| !keep(source)) {
            return;
        }
        checked += 1;
        match pre_k(source, k) {
            Ok(image) => {
                if let Some(prev) = seen.get(&image) {
                    found = Some(Collision {
                        n: family.n(),
                        first: prev.clone(),
                        second: source.clone(),
                        image,
                    });
                } else {
                    seen.insert(image, source.clone());
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok((checked, found)),
    }
}

/// Hashes every image of `pre_k` on the family for `0 ≤ n ≤ n_max` and
/// reports the first collision. `filter` restricts the sources (for
/// example to partitions with at least two 1's).
pub fn check_injectivity(
    kind: FamilyKind,
    n_max: i64,
    k: u64,
    filter: Option<&(dyn Fn(&Partition) -> bool + Sync)>,
) -> Result<InjectivityReport> {
    let per_n: Vec<(u64, Option<Collision>)> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let family = PartitionFamily::with_kind(kind, n)?.with_min_length(k);
            first_collision_at(&family, k, filter)
        })
        .collect::<Result<_>>()?;
    let sources_checked = per_n.iter().map(|(c, _)| c).sum();
    let first_collision = per_n.into_iter().find_map(|(_, c)| c);
    Ok(InjectivityReport { kind, k, n_max, sources_checked, first_collision })
}

/// Source filter: at least two parts equal to 1.
pub fn at_least_two_ones(p: &Partition) -> bool {
    p.multiplicity(1) >= 2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageLine {
    pub n: i64,
    pub k: u64,
    pub source: String,
    pub image: String,
}

/// JSON lines, one `{"n","k","source","image"}` object per record.
pub fn image_dump_jsonl(n: i64, k: u64, records: &[ImageRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let line = ImageLine { n, k, source: r.source.to_string(), image: r.image.to_string() };
        out.push_str(&serde_json::to_string(&line).expect("plain struct serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    /// Oracle: explicit expansion over all k-subsets of positions.
    fn pre_k_by_subsets(lambda: &Partition, k: usize) -> Partition {
        fn rec(parts: &[u64], start: usize, left: usize, prod: u64, out: &mut Vec<u64>) {
            if left == 0 {
                out.push(prod);
                return;
            }
            for i in start..parts.len() {
                rec(parts, i + 1, left - 1, prod * parts[i], out);
            }
        }
        let parts = lambda.to_vec();
        let mut out = Vec::new();
        if parts.len() >= k {
            rec(&parts, 0, k, 1, &mut out);
        }
        Partition::from_parts(out).unwrap()
    }

    #[test]
    fn worked_example() {
        assert_eq!(pre_k(&p("(3,2,1,1)"), 2).unwrap(), p("(6,3,3,2,2,1)"));
        assert_eq!(pre_k(&p("(1,1)"), 3).unwrap(), Partition::empty());
        assert_eq!(pre_k(&p("(2,2)"), 2).unwrap(), p("(4)"));
        assert!(pre_k(&p("(2,2)"), 0).is_err());
    }

    #[test]
    fn pre_one_is_identity() {
        for lambda in crate::partition::enumerate(&PartitionFamily::all(10)) {
            assert_eq!(pre_k(&lambda, 1).unwrap(), lambda);
        }
    }

    #[test]
    fn multiplicity_route_matches_subset_oracle() {
        for n in 0..=12 {
            for lambda in crate::partition::enumerate(&PartitionFamily::all(n)) {
                for k in 1..=4 {
                    assert_eq!(pre_k(&lambda, k).unwrap(), pre_k_by_subsets(&lambda, k as usize), "{lambda} k={k}");
                }
            }
        }
    }

    #[test]
    fn image_records() {
        let recs = image_multiset(&PartitionFamily::binary(3), 2).unwrap();
        let pairs: Vec<(String, String)> =
            recs.iter().map(|r| (r.source.to_string(), r.image.to_string())).collect();
        assert_eq!(
            pairs,
            vec![("(2,1)".into(), "(2)".into()), ("(1,1,1)".into(), "(1,1,1)".into())]
        );
        let recs = image_multiset(&PartitionFamily::all(4), 3).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].image, p("(2)"));
        assert_eq!(recs[1].image, p("(1,1,1,1)"));
    }

    #[test]
    fn m_total_values() {
        let im = |n| image_multiset(&PartitionFamily::binary(n), 2).unwrap();
        assert_eq!(m_total(&im(3), 1).unwrap(), 3);
        assert_eq!(m_total(&im(4), 1).unwrap(), 7);
        assert_eq!(m_total(&im(2), 2).unwrap(), 0);
    }

    #[test]
    fn multiplicity_recursion_examples() {
        assert_eq!(image_mult_rec(&p("(3,2,1,1)"), 2).unwrap(), 2);
        assert_eq!(image_mult_rec(&p("(1,1,1)"), 1).unwrap(), 3);
        assert_eq!(image_mult_rec(&p("(4,2,2,1)"), 8).unwrap(), 2);
    }

    #[test]
    fn complete_homogeneous_examples() {
        assert_eq!(pre_h(&p("(4,3)"), 3).unwrap(), p("(64,48,36,27)"));
        assert_eq!(pre_h(&p("(2,1)"), 2).unwrap(), p("(4,2,1)"));
        assert_eq!(pre_h(&p("(5,3,3)"), 1).unwrap(), p("(5,3,3)"));
        assert_eq!(pre_h(&p("(1,1)"), 2).unwrap(), p("(1,1,1)"));
        assert!(pre_h(&Partition::empty(), 2).is_err());
    }

    #[test]
    fn collision_is_reported_not_raised() {
        let report = check_injectivity(FamilyKind::All, 13, 3, None).unwrap();
        let c = report.first_collision.expect("9+2+2 and 6+6+1 share the product 36");
        assert_eq!(c.n, 13);
        assert_eq!(c.image, p("(36)"));
        assert_eq!(pre_k(&c.first, 3).unwrap(), pre_k(&c.second, 3).unwrap());
    }

    #[test]
    fn jsonl_dump() {
        let recs = image_multiset(&PartitionFamily::binary(2), 2).unwrap();
        assert_eq!(
            image_dump_jsonl(2, 2, &recs),
            "{\"n\":2,\"k\":2,\"source\":\"(1,1)\",\"image\":\"(1)\"}\n"
        );
    }
}
