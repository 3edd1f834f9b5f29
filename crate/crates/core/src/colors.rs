//! Color partitions into distinct colored parts and the bijection from
//! partitions with two rooted 1's.
//!
//! `Q(m)` is `Q(m, 2^1)`: both let `2^u` take `⌊u/d⌋ + 3` colors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{binomial, Checked, Error, Result};
use crate::partition::{for_each_partition, is_power_of, split_parenthesized, Partition, PartitionFamily};
use crate::rooted::{Root, RootedPartition};

/// Ordered by value, then color: `1_1 < 1_2 < 1_3 < 2_1 < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredPart {
    pub value: u64,
    pub color: u64,
}

impl ColoredPart {
    pub fn new(value: u64, color: u64) -> Self {
        Self { value, color }
    }
}

impl fmt::Display for ColoredPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.value, self.color)
    }
}

impl FromStr for ColoredPart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedInput(format!("colored part {s:?} is not `value_color`"));
        let (v, c) = s.trim().split_once('_').ok_or_else(bad)?;
        let value: u64 = v.trim().parse().map_err(|_| bad())?;
        let color: u64 = c.trim().parse().map_err(|_| bad())?;
        if value == 0 || color == 0 {
            return Err(bad());
        }
        Ok(Self { value, color })
    }
}

/// Distinct colored parts, strictly decreasing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColoredPartition {
    parts: Vec<ColoredPart>,
}

impl ColoredPartition {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Sorts the parts; repeated `(value, color)` pairs are rejected.
    pub fn new(mut parts: Vec<ColoredPart>) -> Result<Self> {
        parts.sort_by(|a, b| b.cmp(a));
        if let Some(w) = parts.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedInput(format!("colored part {} repeated", w[0])));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[ColoredPart] {
        &self.parts
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|p| p.value).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl Ord for ColoredPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

impl PartialOrd for ColoredPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ColoredPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for ColoredPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ColoredPartition {
    type Err = Error;

    /// Parses `(4_4,2_3,1_2)`; `()` is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let parts = split_parenthesized(s)?
            .into_iter()
            .map(str::parse)
            .collect::<Result<Vec<ColoredPart>>>()?;
        ColoredPartition::new(parts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorFamily {
    /// Parts `2^u` with `⌊u/d⌋ + 3` colors; `Pow(1)` is the plain family.
    Pow(u64),
    /// Parts `2^i (2d+1)^j`: three colors when `j = 0`, one otherwise.
    Odd(u64),
}

impl ColorFamily {
    pub const PLAIN: ColorFamily = ColorFamily::Pow(1);

    fn validate(self) -> Result<()> {
        match self {
            ColorFamily::Pow(0) | ColorFamily::Odd(0) => {
                Err(Error::InvalidArgument("color families need d >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Base of the d-ary partitions in bijection with this family.
    pub fn rooted_base(self) -> u64 {
        match self {
            ColorFamily::Pow(d) => 1u64 << d,
            ColorFamily::Odd(d) => 2 * d + 1,
        }
    }

    /// Number of colors for `value`; zero when the value is not allowed.
    pub fn palette(self, value: u64) -> u64 {
        if value == 0 {
            return 0;
        }
        let u = value.trailing_zeros() as u64;
        let odd = value >> u;
        match self {
            ColorFamily::Pow(d) if odd == 1 => u / d + 3,
            ColorFamily::Odd(_) if odd == 1 => 3,
            ColorFamily::Odd(d) if is_power_of(odd, 2 * d + 1) => 1,
            _ => 0,
        }
    }

    pub fn admits(self, part: ColoredPart) -> bool {
        part.color >= 1 && part.color <= self.palette(part.value)
    }

    /// Allowed colored parts of value at most `max`, descending.
    pub fn alphabet(self, max: u64) -> Vec<ColoredPart> {
        let mut out = Vec::new();
        for v in (1..=max).rev() {
            for c in (1..=self.palette(v)).rev() {
                out.push(ColoredPart::new(v, c));
            }
        }
        out
    }

    fn color_of_nu(self) -> u64 {
        2
    }

    fn color_of_pi(self) -> u64 {
        match self {
            ColorFamily::Pow(_) => 1,
            ColorFamily::Odd(_) => 3,
        }
    }
}

impl fmt::Display for ColorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorFamily::Pow(1) => write!(f, "Q"),
            ColorFamily::Pow(d) => write!(f, "Q(2^{d})"),
            ColorFamily::Odd(d) => write!(f, "Q({})", 2 * d + 1),
        }
    }
}

/// Checks palette bounds for every part.
pub fn check_palette(q: &ColoredPartition, family: ColorFamily) -> Result<()> {
    match q.parts.iter().find(|p| !family.admits(**p)) {
        Some(p) => Err(Error::MalformedInput(format!("{p} is outside the palette of {family}"))),
        None => Ok(()),
    }
}

/// Every partition of `m` into distinct allowed colored parts, in
/// decreasing lexicographic order.
pub fn enumerate_q(family: ColorFamily, m: u64) -> Result<Vec<ColoredPartition>> {
    family.validate()?;
    let alphabet = family.alphabet(m);
    let mut out = Vec::new();
    let mut current = Vec::new();
    walk(&alphabet, 0, m, &mut current, &mut out);
    Ok(out)
}

fn walk(
    alphabet: &[ColoredPart],
    start: usize,
    remaining: u64,
    current: &mut Vec<ColoredPart>,
    out: &mut Vec<ColoredPartition>,
) {
    if remaining == 0 {
        out.push(ColoredPartition { parts: current.clone() });
        return;
    }
    for (i, part) in alphabet.iter().enumerate().skip(start) {
        if part.value > remaining {
            continue;
        }
        current.push(*part);
        walk(alphabet, i + 1, remaining - part.value, current, out);
        current.pop();
    }
}

/// Nonzero terms `∏_v C(palette(v), m_v(λ))` over partitions `λ` of `m`
/// into allowed values, in the enumeration order of `λ`.
pub fn binomial_terms(family: ColorFamily, m: u64) -> Result<Vec<(Partition, u128)>> {
    family.validate()?;
    let values: Vec<u64> = (1..=m).filter(|&v| family.palette(v) > 0).collect();
    let mut out = Vec::new();
    let mut failure = None;
    let mut visit = |lambda: &Partition| {
        let term = lambda.distinct().try_fold(1u128, |acc, (v, mult)| {
            acc.mul_or(binomial(family.palette(v), mult)?, "binomial term")
        });
        match term {
            Ok(0) => {}
            Ok(t) => out.push((lambda.clone(), t)),
            Err(e) => failure = Some(e),
        }
    };
    match family {
        ColorFamily::Pow(_) => for_each_partition(&PartitionFamily::binary(m as i64), &mut visit),
        ColorFamily::Odd(_) => restricted_partitions(&values, m, &mut visit)?,
    }
    failure.map_or(Ok(out), Err)
}

/// `|Q(m)|` as the sum of [`binomial_terms`].
pub fn count_q_via_binomials(family: ColorFamily, m: u64) -> Result<u128> {
    binomial_terms(family, m)?
        .into_iter()
        .try_fold(0u128, |acc, (_, t)| acc.add_or(t, "binomial count"))
}

/// Partitions of `m` into parts from `values`, largest part first.
fn restricted_partitions(values: &[u64], m: u64, visit: &mut impl FnMut(&Partition)) -> Result<()> {
    fn rec(
        values: &[u64],
        remaining: u64,
        current: &mut Partition,
        visit: &mut impl FnMut(&Partition),
    ) -> Result<()> {
        if remaining == 0 {
            visit(current);
            return Ok(());
        }
        let Some((&v, rest)) = values.split_last() else { return Ok(()) };
        for mult in (0..=remaining / v).rev() {
            if mult > 0 {
                current.push(v, mult)?;
            }
            rec(rest, remaining - mult * v, current, visit)?;
            if mult > 0 {
                current.remove(v, mult);
            }
        }
        Ok(())
    }
    rec(values, m, &mut Partition::empty(), visit)
}

fn binary_digits(x: u64) -> impl Iterator<Item = u64> {
    (0..64).filter(move |r| x >> r & 1 == 1).map(|r| 1u64 << r)
}

/// `PR_{1,1}(n + 2)` over the family's rooted base `→ Q(n)`.
///
/// With `λ = μ ⊕ (1̂) ⊕ ν ⊕ (1̂) ⊕ π`, each multiplicity `s` of `b^t` in `μ`
/// is written in binary. For `Pow(d)` every `2^r` in `s` gives the part
/// `2^r · 2^{dt}` with color `t + 3`; for `Odd(d)` it gives `2^r (2d+1)^t`
/// with color 1. `|ν|` and `|π|` are written in binary with the colors
/// reserved for them.
pub fn rooted_to_colored(lambda: &RootedPartition, family: ColorFamily) -> Result<ColoredPartition> {
    family.validate()?;
    let b = family.rooted_base();
    let (first, second) = lambda.double_root(1)?;
    let base = lambda.base();
    if !base.is_power_partition(b) {
        return Err(Error::MalformedInput(format!("{base} is not a {b}-ary partition")));
    }
    let ones = base.multiplicity(1);
    let nu = second - first - 1;
    let pi = ones - second - 1;
    let mut parts = Vec::new();
    for (v, s) in base.distinct() {
        let s = if v == 1 { first } else { s };
        let t = v.trailing_zeros() as u64;
        for bit in binary_digits(s) {
            let part = match family {
                ColorFamily::Pow(d) => ColoredPart::new(v.mul_or(bit, "colored part")?, t / d + 3),
                ColorFamily::Odd(_) => ColoredPart::new(v.mul_or(bit, "colored part")?, 1),
            };
            parts.push(part);
        }
    }
    parts.extend(binary_digits(nu).map(|p| ColoredPart::new(p, family.color_of_nu())));
    parts.extend(binary_digits(pi).map(|p| ColoredPart::new(p, family.color_of_pi())));
    ColoredPartition::new(parts)
}

/// Inverse of [`rooted_to_colored`].
pub fn colored_to_rooted(q: &ColoredPartition, family: ColorFamily) -> Result<RootedPartition> {
    family.validate()?;
    check_palette(q, family)?;
    let (mut nu, mut pi) = (0u64, 0u64);
    let mut mu = Partition::empty();
    for p in q.parts() {
        let pure_two = p.value.is_power_of_two();
        match family {
            ColorFamily::Pow(_) if p.color == family.color_of_nu() => nu += p.value,
            ColorFamily::Pow(_) if p.color == family.color_of_pi() => pi += p.value,
            ColorFamily::Pow(d) => {
                let shift = d * (p.color - 3);
                mu.push(1u64 << shift, p.value >> shift)?;
            }
            ColorFamily::Odd(_) if pure_two && p.color == family.color_of_nu() => nu += p.value,
            ColorFamily::Odd(_) if pure_two && p.color == family.color_of_pi() => pi += p.value,
            ColorFamily::Odd(_) => {
                let r = p.value.trailing_zeros();
                mu.push(p.value >> r, 1u64 << r)?;
            }
        }
    }
    let before = mu.multiplicity(1);
    let mut base = mu;
    base.push(1, nu + pi + 2)?;
    RootedPartition::new(base, vec![Root::new(1, before), Root::new(1, before + nu + 1)])
}
