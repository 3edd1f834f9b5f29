//! Rooted partitions and the bijections between rooted families.
//!
//! A root is a `(value, slot)` pair: `slot` is the index of the hatted copy
//! among the `m_value` equal parts, counted from the left of the weakly
//! decreasing sequence. Two rooted partitions are equal exactly when their
//! bases and root sets agree, which models "the position of the root among
//! equal parts matters".
//!
//! Every map below splits its input into blocks of 1's (or 2's) around the
//! roots. The blocks are handled as slot ranges, so `μ ⊕ ν` with `ν` the run
//! of 1's from the hatted one onwards is just "1's with slot ≥ s".

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partition::{for_each_partition, parse_part, split_parenthesized, Partition, PartitionFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub value: u64,
    pub slot: u64,
}

impl Root {
    pub fn new(value: u64, slot: u64) -> Self {
        Self { value, slot }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootedPartition {
    base: Partition,
    /// Sorted by (value, slot); one or two entries.
    roots: Vec<Root>,
}

impl RootedPartition {
    pub fn new(base: Partition, mut roots: Vec<Root>) -> Result<Self> {
        if roots.is_empty() || roots.len() > 2 {
            return Err(Error::MalformedInput(format!(
                "rooted partitions carry one or two roots, got {}",
                roots.len()
            )));
        }
        roots.sort();
        if roots.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedInput("two roots on the same part".into()));
        }
        for r in &roots {
            if r.slot >= base.multiplicity(r.value) {
                return Err(Error::MalformedInput(format!(
                    "root {}@{} is not a part of {base}",
                    r.value, r.slot
                )));
            }
        }
        Ok(Self { base, roots })
    }

    pub fn base(&self) -> &Partition {
        &self.base
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn weight(&self) -> u64 {
        self.base.weight()
    }

    /// Slots of the roots with the given value, ascending.
    pub fn slots_of(&self, value: u64) -> Vec<u64> {
        self.roots.iter().filter(|r| r.value == value).map(|r| r.slot).collect()
    }

    /// `λ ⊕ ν` keeping roots: parts of `self` come before those of `other`
    /// among equal values, so the right operand's slots shift by `m_v(self)`.
    pub fn direct_sum(&self, other: &RootedPartition) -> Result<RootedPartition> {
        let base = self.base.direct_sum(&other.base)?;
        let mut roots = self.roots.clone();
        for r in &other.roots {
            roots.push(Root::new(r.value, r.slot + self.base.multiplicity(r.value)));
        }
        RootedPartition::new(base, roots)
    }

    fn single_root(&self, value: u64) -> Result<u64> {
        match self.roots.as_slice() {
            [r] if r.value == value => Ok(r.slot),
            _ => Err(Error::MalformedInput(format!("expected a single root of value {value} in {self}"))),
        }
    }

    pub(crate) fn double_root(&self, value: u64) -> Result<(u64, u64)> {
        match self.roots.as_slice() {
            [a, b] if a.value == value && b.value == value => Ok((a.slot, b.slot)),
            _ => Err(Error::MalformedInput(format!("expected two roots of value {value} in {self}"))),
        }
    }
}

impl fmt::Display for RootedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        let mut first = true;
        for (v, m) in self.base.distinct() {
            for slot in 0..m {
                if !first {
                    f.write_str(",")?;
                }
                first = false;
                if self.roots.contains(&Root::new(v, slot)) {
                    f.write_str("^")?;
                }
                write!(f, "{v}")?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for RootedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RootedPartition {
    type Err = Error;

    /// Parses `(4,2,2,1,^1,1,1)`: a caret marks each root.
    fn from_str(s: &str) -> Result<Self> {
        let mut base = Partition::empty();
        let mut roots = Vec::new();
        let mut prev = u64::MAX;
        for item in split_parenthesized(s)? {
            let (hat, digits) = match item.strip_prefix('^') {
                Some(rest) => (true, rest.trim()),
                None => (false, item),
            };
            let v = parse_part(digits)?;
            if v > prev {
                return Err(Error::MalformedInput(format!("parts not weakly decreasing in {s:?}")));
            }
            prev = v;
            if hat {
                roots.push(Root::new(v, base.multiplicity(v)));
            }
            base.push(v, 1)?;
        }
        RootedPartition::new(base, roots)
    }
}

/// Which parts carry roots: `{i}` or `{i, j}` (possibly `i = j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSpec {
    Single(u64),
    Double(u64, u64),
}

fn place_roots(base: &Partition, spec: RootSpec, out: &mut Vec<RootedPartition>) {
    let push = |roots: Vec<Root>, out: &mut Vec<RootedPartition>| {
        out.push(RootedPartition { base: base.clone(), roots });
    };
    match spec {
        RootSpec::Single(i) => {
            for s in 0..base.multiplicity(i) {
                push(vec![Root::new(i, s)], out);
            }
        }
        RootSpec::Double(i, j) if i == j => {
            let m = base.multiplicity(i);
            for a in 0..m {
                for b in a + 1..m {
                    push(vec![Root::new(i, a), Root::new(i, b)], out);
                }
            }
        }
        RootSpec::Double(i, j) => {
            let (lo, hi) = (i.min(j), i.max(j));
            for a in 0..base.multiplicity(lo) {
                for b in 0..base.multiplicity(hi) {
                    push(vec![Root::new(lo, a), Root::new(hi, b)], out);
                }
            }
        }
    }
}

/// Every (base, root placement) pair of the family exactly once; bases in
/// the family's enumeration order, placements by ascending slots.
pub fn enumerate_rooted(family: &PartitionFamily, spec: RootSpec) -> Vec<RootedPartition> {
    let mut out = Vec::new();
    for_each_partition(family, |base| place_roots(base, spec, &mut out));
    out
}

/// Number of root placements on one base.
pub fn placements(base: &Partition, spec: RootSpec) -> u128 {
    match spec {
        RootSpec::Single(i) => base.multiplicity(i) as u128,
        RootSpec::Double(i, j) if i == j => {
            let m = base.multiplicity(i) as u128;
            m * m.saturating_sub(1) / 2
        }
        RootSpec::Double(i, j) => base.multiplicity(i) as u128 * base.multiplicity(j) as u128,
    }
}

fn rooted_from(base: Partition, roots: Vec<Root>) -> Result<RootedPartition> {
    RootedPartition::new(base, roots)
}

/// Parts other than 1, halved. Fails on any part that is odd.
fn halve_non_ones(base: &Partition) -> Result<Partition> {
    let mut rest = base.clone();
    rest.remove(1, u64::MAX);
    rest.unscale(2)
}

fn ensure_binary(p: &Partition) -> Result<()> {
    if p.is_power_partition(2) {
        Ok(())
    } else {
        Err(Error::MalformedInput(format!("{p} is not a binary partition")))
    }
}

/// `BR_1(n) → B(2n−2)`.
///
/// Split `λ = μ ⊕ ν` where `ν` is the hatted 1 and every 1 after it,
/// `|ν| = j`; the image is `2μ ⊕ (1^{2j−2})`.
pub fn root_one_to_doubled(lambda: &RootedPartition) -> Result<Partition> {
    let slot = lambda.single_root(1)?;
    let base = lambda.base();
    let j = base.multiplicity(1) - slot;
    let mut mu = base.clone();
    mu.remove(1, j);
    let mut image = mu.scale(2)?;
    image.push(1, 2 * j - 2)?;
    Ok(image)
}

/// Inverse of [`root_one_to_doubled`]: with `k` ones in `λ'`, return
/// `λ'_{>1}/2 ⊕ (1̂, 1^{k/2})`.
pub fn doubled_to_root_one(image: &Partition) -> Result<RootedPartition> {
    ensure_binary(image)?;
    let k = image.multiplicity(1);
    if !k.is_multiple_of(2) {
        return Err(Error::MalformedInput(format!("{image} has an odd number of 1's")));
    }
    let mut base = halve_non_ones(image)?;
    let slot = base.multiplicity(1);
    base.push(1, 1 + k / 2)?;
    rooted_from(base, vec![Root::new(1, slot)])
}

/// `BR_1(n) → BR_{1,1}`: a bijection onto `BR_{1,1}((n+1)/2) ⊎
/// BR_{1,1}((n+3)/2)` for odd `n`, exactly 2-to-1 onto `BR_{1,1}((n+2)/2)`
/// for even `n`.
///
/// With `i` ones before the hatted 1 and `j` after it and `μ` the parts
/// larger than 1, the image is `μ/2 ⊕ (1̂) ⊕ (1^{⌊i/2⌋}) ⊕ (1̂) ⊕ (1^{⌊j/2⌋})`.
pub fn halve_around_root(lambda: &RootedPartition) -> Result<RootedPartition> {
    let i = lambda.single_root(1)?;
    let base = lambda.base();
    let j = base.multiplicity(1) - i - 1;
    let mut out = halve_non_ones(base)?;
    let first = out.multiplicity(1);
    let second = first + 1 + i / 2;
    out.push(1, 2 + i / 2 + j / 2)?;
    rooted_from(out, vec![Root::new(1, first), Root::new(1, second)])
}

/// Decomposes `λ' = μ' ⊕ (1̂) ⊕ (1^k) ⊕ (1̂) ⊕ (1^l)`, returning `(μ', k, l)`.
fn split_double_ones(image: &RootedPartition) -> Result<(Partition, u64, u64)> {
    let (a, b) = image.double_root(1)?;
    let mut mu = image.base().clone();
    let ones = mu.multiplicity(1);
    mu.remove(1, ones - a);
    Ok((mu, b - a - 1, ones - b - 1))
}

fn double_then_root(mu: &Partition, before: u64, after: u64) -> Result<RootedPartition> {
    let mut base = mu.scale(2)?;
    base.push(1, before + 1 + after)?;
    rooted_from(base, vec![Root::new(1, before)])
}

/// Preimages of `image` under [`halve_around_root`] restricted to `BR_1(n)`:
/// one element for odd `n`, two for even `n`, none if `image` has a weight
/// outside the codomain.
pub fn halve_around_root_fiber(image: &RootedPartition, n: u64) -> Result<Vec<RootedPartition>> {
    ensure_binary(image.base())?;
    let (mu, k, l) = split_double_ones(image)?;
    let w = image.weight();
    if n % 2 == 1 {
        if 2 * w == n + 1 {
            Ok(vec![double_then_root(&mu, 2 * k + 1, 2 * l + 1)?])
        } else if 2 * w == n + 3 {
            Ok(vec![double_then_root(&mu, 2 * k, 2 * l)?])
        } else {
            Ok(Vec::new())
        }
    } else if 2 * w == n + 2 {
        Ok(vec![
            double_then_root(&mu, 2 * k, 2 * l + 1)?,
            double_then_root(&mu, 2 * k + 1, 2 * l)?,
        ])
    } else {
        Ok(Vec::new())
    }
}

/// `BR_2(n) → BR_{1,1}(⌊n/2⌋+1)`.
///
/// Split off `ν`, the `i` ones; the image is `μ/2 ⊕ (1̂) ⊕ (1^{⌊i/2⌋})` where
/// the hatted 2 of `μ` becomes the first hatted 1 of `μ/2`.
pub fn root_two_to_root_ones(lambda: &RootedPartition) -> Result<RootedPartition> {
    let slot = lambda.single_root(2)?;
    let base = lambda.base();
    let i = base.multiplicity(1);
    let mut out = halve_non_ones(base)?;
    let second = out.multiplicity(1);
    out.push(1, 1 + i / 2)?;
    rooted_from(out, vec![Root::new(1, slot), Root::new(1, second)])
}

/// Inverse of [`root_two_to_root_ones`] on `BR_2(n)`; the parity of `n`
/// restores the number of 1's that was halved.
pub fn root_ones_to_root_two(image: &RootedPartition, n: u64) -> Result<RootedPartition> {
    ensure_binary(image.base())?;
    let (a, b) = image.double_root(1)?;
    if image.weight() != n / 2 + 1 {
        return Err(Error::MalformedInput(format!("{image} does not have weight {}", n / 2 + 1)));
    }
    let ones = image.base().multiplicity(1);
    let half_i = ones - b - 1;
    let i = 2 * half_i + n % 2;
    let mut mu_half = image.base().clone();
    mu_half.remove(1, ones - b);
    let mut base = mu_half.scale(2)?;
    base.push(1, i)?;
    rooted_from(base, vec![Root::new(2, a)])
}

/// `BR_{1,1}(n) → BR_{1,2}(n) ⊎ BR_{1,2}(n+1)`.
///
/// Write `λ = μ ⊕ ν ⊕ π` with `ν` the first hatted 1 and the 1's up to the
/// second, `π` the second hatted 1 and everything after it, `k = |ν|`.
/// `ν` is replaced by `⌈k/2⌉` copies of 2, the first of them hatted.
pub fn pair_ones_to_twos(lambda: &RootedPartition) -> Result<RootedPartition> {
    let (a, b) = lambda.double_root(1)?;
    let k = b - a;
    let mut base = lambda.base().clone();
    base.remove(1, k);
    let two_slot = base.multiplicity(2);
    base.push(2, k.div_ceil(2))?;
    rooted_from(base, vec![Root::new(1, a), Root::new(2, two_slot)])
}

/// Inverse of [`pair_ones_to_twos`] for the domain `BR_{1,1}(n)`: an image
/// of weight `n` came from an even block, weight `n+1` from an odd one.
pub fn twos_to_pair_ones(image: &RootedPartition, n: u64) -> Result<RootedPartition> {
    let roots = image.roots();
    let (one_slot, two_slot) = match roots {
        [r1, r2] if r1.value == 1 && r2.value == 2 => (r1.slot, r2.slot),
        _ => return Err(Error::MalformedInput(format!("expected roots 1̂ and 2̂ in {image}"))),
    };
    let c = image.base().multiplicity(2) - two_slot;
    let k = if image.weight() == n {
        2 * c
    } else if image.weight() == n + 1 {
        2 * c - 1
    } else {
        return Err(Error::MalformedInput(format!("{image} has weight outside {{{n}, {}}}", n + 1)));
    };
    let mut base = image.base().clone();
    base.remove(2, c);
    base.push(1, k)?;
    rooted_from(base, vec![Root::new(1, one_slot), Root::new(1, one_slot + k)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RootedPartition {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        let x = r("(4,2,2,1,^1,1,1)");
        assert_eq!(x.roots(), &[Root::new(1, 1)]);
        assert_eq!(x.to_string(), "(4,2,2,1,^1,1,1)");
        assert!("(^3,^3x)".parse::<RootedPartition>().is_err());
        assert!("(3,2)".parse::<RootedPartition>().is_err());
    }

    #[test]
    fn rooted_direct_sum_keeps_left_first() {
        let sum = r("(3,^3,3,2,1,1)").direct_sum(&r("(3,2,2,^1,1)")).unwrap();
        assert_eq!(sum.to_string(), "(3,^3,3,3,2,2,2,1,1,^1,1)");
    }

    #[test]
    fn small_rooted_counts() {
        let count = |n, spec| enumerate_rooted(&PartitionFamily::binary(n), spec).len();
        assert_eq!(count(3, RootSpec::Double(1, 1)), 3);
        assert_eq!(count(4, RootSpec::Double(1, 2)), 2);
        assert_eq!(count(2, RootSpec::Double(1, 1)), 1);
        let br2_4: Vec<String> = enumerate_rooted(&PartitionFamily::binary(4), RootSpec::Single(2))
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(br2_4, vec!["(^2,2)", "(2,^2)", "(^2,1,1)"]);
    }

    #[test]
    fn doubling_worked_example() {
        let lambda = r("(4,2,2,1,^1,1,1)");
        let image = root_one_to_doubled(&lambda).unwrap();
        assert_eq!(image, p("(8,4,4,2,1,1,1,1)"));
        assert_eq!(doubled_to_root_one(&image).unwrap(), lambda);
        assert_eq!(root_one_to_doubled(&r("(^1)")).unwrap(), Partition::empty());
        assert!(doubled_to_root_one(&p("(3,1,1)")).is_err());
        assert!(doubled_to_root_one(&p("(2,1)")).is_err());
    }

    #[test]
    fn root_two_small_cases() {
        assert_eq!(root_two_to_root_ones(&r("(^2)")).unwrap(), r("(^1,^1)"));
        assert_eq!(root_ones_to_root_two(&r("(^1,^1)"), 2).unwrap(), r("(^2)"));
    }

    #[test]
    fn pair_ones_small_case() {
        let image = pair_ones_to_twos(&r("(^1,^1)")).unwrap();
        assert_eq!(image, r("(^2,^1)"));
        assert_eq!(image.weight(), 3);
        assert_eq!(twos_to_pair_ones(&image, 2).unwrap(), r("(^1,^1)"));
    }

    #[test]
    fn halving_fibers_by_parity() {
        let odd = r("(2,1,^1,1)"); // n = 5, i = 1, j = 1
        let image = halve_around_root(&odd).unwrap();
        assert_eq!(image, r("(1,^1,^1)"));
        assert_eq!(halve_around_root_fiber(&image, 5).unwrap(), vec![odd]);
        let even = r("(^1,1)"); // n = 2
        let image = halve_around_root(&even).unwrap();
        let fiber = halve_around_root_fiber(&image, 2).unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(fiber.contains(&even));
    }
}
