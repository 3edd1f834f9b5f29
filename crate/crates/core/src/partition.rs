//! Integer partitions stored as multiplicity maps, plus exhaustive
//! enumeration and counting for the families `P(n)`, `B(n)` and `P(n, d)`.
//!
//! A [`Partition`] is canonically a map from part value to multiplicity; the
//! weakly decreasing sequence is a derived view. Enumeration always yields
//! partitions in strictly decreasing lexicographic order of that view.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Checked, Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Partition {
    mult: BTreeMap<u64, u64>,
    weight: u64,
    length: u64,
}

impl Partition {
    /// The empty partition of 0.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition from parts given in any order.
    pub fn from_parts<I: IntoIterator<Item = u64>>(parts: I) -> Result<Self> {
        let mut p = Self::empty();
        for part in parts {
            p.push(part, 1)?;
        }
        Ok(p)
    }

    /// Builds a partition from `(value, multiplicity)` pairs; zero
    /// multiplicities are dropped, repeated values accumulate.
    pub fn from_multiplicities<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut p = Self::empty();
        for (value, count) in pairs {
            p.push(value, count)?;
        }
        Ok(p)
    }

    /// Adds `count` copies of `value`.
    pub fn push(&mut self, value: u64, count: u64) -> Result<()> {
        if value == 0 {
            return Err(Error::MalformedInput("partition parts must be positive".into()));
        }
        if count == 0 {
            return Ok(());
        }
        let added = value.mul_or(count, "partition weight")?;
        self.weight = self.weight.add_or(added, "partition weight")?;
        self.length = self.length.add_or(count, "partition length")?;
        let slot = self.mult.entry(value).or_insert(0);
        *slot = slot.add_or(count, "partition multiplicity")?;
        Ok(())
    }

    /// Removes up to `count` copies of `value`, returning how many were removed.
    pub(crate) fn remove(&mut self, value: u64, count: u64) -> u64 {
        let Some(m) = self.mult.get_mut(&value) else {
            return 0;
        };
        let taken = count.min(*m);
        *m -= taken;
        if *m == 0 {
            self.mult.remove(&value);
        }
        self.weight -= taken * value;
        self.length -= taken;
        taken
    }

    /// |λ|
    pub fn weight(&self) -> u64 {
        self.weight
    }

    /// ℓ(λ)
    pub fn len(&self) -> u64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// m_v(λ), zero when `value` is not a part.
    pub fn multiplicity(&self, value: u64) -> u64 {
        self.mult.get(&value).copied().unwrap_or(0)
    }

    /// Distinct parts with their multiplicities, largest part first.
    pub fn distinct(&self) -> impl DoubleEndedIterator<Item = (u64, u64)> + '_ {
        self.mult.iter().rev().map(|(&v, &m)| (v, m))
    }

    pub fn distinct_count(&self) -> usize {
        self.mult.len()
    }

    /// The weakly decreasing sequence view.
    pub fn parts(&self) -> impl Iterator<Item = u64> + '_ {
        self.distinct()
            .flat_map(|(v, m)| std::iter::repeat_n(v, m as usize))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.parts().collect()
    }

    pub fn largest_part(&self) -> Option<u64> {
        self.mult.keys().next_back().copied()
    }

    /// λ ⊕ ν: multiplicities add.
    pub fn direct_sum(&self, other: &Partition) -> Result<Partition> {
        let mut out = self.clone();
        for (v, m) in other.distinct() {
            out.push(v, m)?;
        }
        Ok(out)
    }

    /// mλ: every part multiplied by `factor`.
    pub fn scale(&self, factor: u64) -> Result<Partition> {
        if factor == 0 {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        let mut out = Partition::empty();
        for (v, m) in self.distinct() {
            out.push(v.mul_or(factor, "partition scale")?, m)?;
        }
        Ok(out)
    }

    /// μ/m: every part divided by `divisor`.
    pub fn unscale(&self, divisor: u64) -> Result<Partition> {
        if divisor == 0 {
            return Err(Error::InvalidArgument("divisor must be positive".into()));
        }
        let mut out = Partition::empty();
        for (v, m) in self.distinct() {
            if v % divisor != 0 {
                return Err(Error::NotDivisible { part: v, divisor });
            }
            out.push(v / divisor, m)?;
        }
        Ok(out)
    }

    /// True when every part is a power of `base` (including `base^0 = 1`).
    pub fn is_power_partition(&self, base: u64) -> bool {
        self.mult.keys().all(|&v| is_power_of(v, base))
    }
}

pub(crate) fn is_power_of(mut v: u64, base: u64) -> bool {
    if v == 0 || base < 2 {
        return v == 1;
    }
    while v.is_multiple_of(base) {
        v /= base;
    }
    v == 1
}

impl Ord for Partition {
    /// Lexicographic order on the weakly decreasing sequence view.
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts().cmp(other.parts())
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Splits `(a,b,c)` into trimmed items; `()` gives no items.
pub(crate) fn split_parenthesized(s: &str) -> Result<Vec<&str>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::MalformedInput(format!("expected parenthesized list, got {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(str::trim).collect())
}

pub(crate) fn parse_part(item: &str) -> Result<u64> {
    match item.parse::<u64>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(Error::MalformedInput(format!("invalid part {item:?}"))),
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `(4,2,2,1)`; parts must be weakly decreasing and `()` is ε.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Partition::empty();
        let mut prev = u64::MAX;
        for item in split_parenthesized(s)? {
            let v = parse_part(item)?;
            if v > prev {
                return Err(Error::MalformedInput(format!("parts not weakly decreasing in {s:?}")));
            }
            prev = v;
            out.push(v, 1)?;
        }
        Ok(out)
    }
}

/// Which parts a family allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// Every positive integer.
    All,
    /// Powers of the base (`d ≥ 2`); `Dary(2)` is the binary family.
    Dary(u64),
}

/// `P_k(n)`, `B_k(n)` or `P_k(n, d)`: partitions of `n` of one kind with
/// at least `min_length` parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartitionFamily {
    kind: FamilyKind,
    n: i64,
    min_length: u64,
}

impl PartitionFamily {
    pub fn all(n: i64) -> Self {
        Self { kind: FamilyKind::All, n, min_length: 0 }
    }

    pub fn binary(n: i64) -> Self {
        Self { kind: FamilyKind::Dary(2), n, min_length: 0 }
    }

    pub fn dary(n: i64, d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("d-ary families need d >= 2, got {d}")));
        }
        Ok(Self { kind: FamilyKind::Dary(d), n, min_length: 0 })
    }

    pub fn with_kind(kind: FamilyKind, n: i64) -> Result<Self> {
        match kind {
            FamilyKind::All => Ok(Self::all(n)),
            FamilyKind::Dary(d) => Self::dary(n, d),
        }
    }

    pub fn with_min_length(mut self, k: u64) -> Self {
        self.min_length = k;
        self
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn min_length(&self) -> u64 {
        self.min_length
    }

    /// Allowed part values `≤ n`, largest first.
    pub fn allowed_parts(&self) -> Vec<u64> {
        if self.n <= 0 {
            return Vec::new();
        }
        allowed_parts(self.kind, self.n as u64)
    }

    pub fn admits(&self, value: u64) -> bool {
        match self.kind {
            FamilyKind::All => value >= 1,
            FamilyKind::Dary(d) => is_power_of(value, d),
        }
    }
}

pub(crate) fn allowed_parts(kind: FamilyKind, max: u64) -> Vec<u64> {
    match kind {
        FamilyKind::All => (1..=max).rev().collect(),
        FamilyKind::Dary(d) => {
            let mut out = Vec::new();
            let mut p = 1u64;
            while p <= max {
                out.push(p);
                match p.checked_mul(d) {
                    Some(next) => p = next,
                    None => break,
                }
            }
            out.reverse();
            out
        }
    }
}

/// Calls `visit` on every partition of the family in decreasing
/// lexicographic order without collecting them.
pub fn for_each_partition<F: FnMut(&Partition)>(family: &PartitionFamily, mut visit: F) {
    if family.n < 0 {
        return;
    }
    if family.n == 0 {
        if family.min_length == 0 {
            visit(&Partition::empty());
        }
        return;
    }
    let allowed = family.allowed_parts();
    let mut current = Partition::empty();
    walk(&allowed, 0, family.n as u64, family.min_length, &mut current, &mut visit);
}

fn walk<F: FnMut(&Partition)>(
    allowed: &[u64],
    idx: usize,
    remaining: u64,
    min_length: u64,
    current: &mut Partition,
    visit: &mut F,
) {
    if remaining == 0 {
        if current.len() >= min_length {
            visit(current);
        }
        return;
    }
    let Some(&value) = allowed.get(idx) else {
        return;
    };
    // the most parts still reachable is `remaining` ones
    if current.len() + remaining < min_length {
        return;
    }
    if value == 1 {
        current.push(1, remaining).expect("weight bounded by n");
        if current.len() >= min_length {
            visit(current);
        }
        current.remove(1, remaining);
        return;
    }
    for count in (0..=remaining / value).rev() {
        current.push(value, count).expect("weight bounded by n");
        walk(allowed, idx + 1, remaining - count * value, min_length, current, visit);
        current.remove(value, count);
    }
}

/// Every partition of the family exactly once, decreasing lexicographically.
pub fn enumerate(family: &PartitionFamily) -> Vec<Partition> {
    let mut out = Vec::new();
    for_each_partition(family, |p| out.push(p.clone()));
    out
}

/// `|enumerate(family)|`, by a knapsack over allowed parts whose length
/// coordinate saturates at `min_length`.
pub fn count(family: &PartitionFamily) -> Result<u128> {
    if family.n < 0 {
        return Ok(0);
    }
    let n = family.n as usize;
    let cap = family.min_length as usize;
    // table[w][l]: partitions of w with min(length, cap) == l
    let mut table = vec![vec![0u128; cap + 1]; n + 1];
    table[0][0] = 1;
    for value in family.allowed_parts() {
        let v = value as usize;
        for w in v..=n {
            for l in 0..=cap {
                let from = table[w - v][l];
                if from == 0 {
                    continue;
                }
                let to = (l + 1).min(cap);
                table[w][to] = table[w][to].add_or(from, "partition count")?;
            }
        }
    }
    Ok(table[n][cap])
}

/// `|P(m, d)|` (or `|P(m)|` for [`FamilyKind::All`]) for every `0 ≤ m ≤ max`.
pub fn count_table(kind: FamilyKind, max: u64) -> Result<Vec<u128>> {
    let n = max as usize;
    let mut table = vec![0u128; n + 1];
    table[0] = 1;
    for value in allowed_parts(kind, max) {
        let v = value as usize;
        for w in v..=n {
            table[w] = table[w].add_or(table[w - v], "partition count")?;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn p3_of_5_matches_listing() {
        let got = enumerate(&PartitionFamily::all(5).with_min_length(3));
        let want = vec![p("(3,1,1)"), p("(2,2,1)"), p("(2,1,1,1)"), p("(1,1,1,1,1)")];
        assert_eq!(got, want);
    }

    #[test]
    fn b3_of_5_matches_listing() {
        let got = enumerate(&PartitionFamily::binary(5).with_min_length(3));
        assert_eq!(got, vec![p("(2,2,1)"), p("(2,1,1,1)"), p("(1,1,1,1,1)")]);
    }

    #[test]
    fn degenerate_weights() {
        assert_eq!(enumerate(&PartitionFamily::binary(0)), vec![Partition::empty()]);
        assert!(enumerate(&PartitionFamily::binary(0).with_min_length(1)).is_empty());
        assert!(enumerate(&PartitionFamily::all(-3)).is_empty());
        assert_eq!(count(&PartitionFamily::all(0)).unwrap(), 1);
        assert_eq!(count(&PartitionFamily::all(-1)).unwrap(), 0);
    }

    #[test]
    fn binary_partitions_of_six() {
        let all = enumerate(&PartitionFamily::binary(6));
        let want: Vec<Partition> = ["(4,2)", "(4,1,1)", "(2,2,2)", "(2,2,1,1)", "(2,1,1,1,1)", "(1,1,1,1,1,1)"]
            .iter()
            .map(|s| p(s))
            .collect();
        assert_eq!(all, want);
        assert_eq!(count(&PartitionFamily::binary(6)).unwrap(), 6);
    }

    #[test]
    fn binary_counts_pair_up() {
        let table = count_table(FamilyKind::Dary(2), 41).unwrap();
        for m in 0..=20 {
            assert_eq!(table[2 * m], table[2 * m + 1], "m = {m}");
        }
    }

    #[test]
    fn count_agrees_with_enumeration() {
        for n in 0..=24 {
            for k in 0..=4 {
                for fam in [
                    PartitionFamily::all(n),
                    PartitionFamily::binary(n),
                    PartitionFamily::dary(n, 3).unwrap(),
                    PartitionFamily::dary(n, 5).unwrap(),
                ] {
                    let fam = fam.with_min_length(k);
                    assert_eq!(count(&fam).unwrap(), enumerate(&fam).len() as u128, "{fam:?}");
                }
            }
        }
    }

    #[test]
    fn order_is_strictly_decreasing_and_unique() {
        let all = enumerate(&PartitionFamily::all(16));
        assert!(all.windows(2).all(|w| w[0] > w[1]));
        let set: HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        assert_eq!(all.len(), 231);
    }

    #[test]
    fn dary_two_is_binary() {
        for n in 0..=20 {
            assert_eq!(
                enumerate(&PartitionFamily::dary(n, 2).unwrap()),
                enumerate(&PartitionFamily::binary(n))
            );
        }
        assert!(PartitionFamily::dary(4, 1).is_err());
    }

    #[test]
    fn direct_sum_and_scaling() {
        assert_eq!(p("(3,2,1)").direct_sum(&p("(3,1)")).unwrap(), p("(3,3,2,1,1)"));
        assert_eq!(p("(2,2)").direct_sum(&p("(2)")).unwrap(), p("(2,2,2)"));
        assert_eq!(p("(4,1)").direct_sum(&Partition::empty()).unwrap(), p("(4,1)"));
        assert_eq!(p("(4,2,1)").scale(2).unwrap(), p("(8,4,2)"));
        assert_eq!(p("(8,4,2)").unscale(2).unwrap(), p("(4,2,1)"));
        assert!(matches!(
            p("(3,2)").unscale(2),
            Err(Error::NotDivisible { part: 3, divisor: 2 })
        ));
    }

    #[test]
    fn text_format() {
        assert_eq!(Partition::empty().to_string(), "()");
        assert_eq!(p("(4, 2,2,1)").to_string(), "(4,2,2,1)");
        assert!("(1,2)".parse::<Partition>().is_err());
        assert!("(0)".parse::<Partition>().is_err());
        assert!("4,2".parse::<Partition>().is_err());
    }

    #[test]
    fn cached_statistics() {
        let q = p("(4,2,2,1)");
        assert_eq!(q.weight(), 9);
        assert_eq!(q.len(), 4);
        assert_eq!(q.multiplicity(2), 2);
        assert_eq!(q.multiplicity(3), 0);
        assert_eq!(q.distinct_count(), 3);
    }
}
