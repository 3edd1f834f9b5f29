//! Exact truncated power series in `q` and the generating functions built
//! from them.
//!
//! Every series carries its truncation order `N` and is exact modulo
//! `q^{N+1}`. Binary operations on series of different orders truncate to
//! the smaller one. Infinite products keep exactly the factors whose lowest
//! nonconstant degree is at most `N`.

use std::fmt;

use crate::error::{binomial, Checked, Error, Result};
use crate::partition::{allowed_parts, FamilyKind};

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<i128>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![0; order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, 1, order)
    }

    /// `coeff · q^degree`, which is zero when `degree > order`.
    pub fn monomial(degree: usize, coeff: i128, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = coeff;
        }
        s
    }

    /// Takes `coeffs` as `c_0, c_1, …`, padding or truncating to `order`.
    pub fn from_coeffs(mut coeffs: Vec<i128>, order: usize) -> Self {
        coeffs.resize(order + 1, 0);
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `[q^n]`, zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> i128 {
        self.coeffs.get(n).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| self.coeffs[i].add_or(other.coeffs[i], "series add"))
            .collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    pub fn neg(&self) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_neg().ok_or(Error::Overflow("series neg")))
            .collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let order = self.order().min(other.order());
        let mut coeffs = vec![0i128; order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b == 0 {
                    continue;
                }
                let term = a.mul_or(b, "series mul")?;
                coeffs[i + j] = coeffs[i + j].add_or(term, "series mul")?;
            }
        }
        Ok(Self { coeffs })
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![0i128; order + 1];
        for i in 0..=order {
            if i + k <= order {
                coeffs[i + k] = self.coeffs[i];
            }
        }
        Self { coeffs }
    }

    /// One `n c_n` line per coefficient, the OEIS b-file layout.
    pub fn to_bfile(&self) -> String {
        self.coeffs.iter().enumerate().map(|(n, c)| format!("{n} {c}\n")).collect()
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(q^{})", self.coeffs, self.order() + 1)
    }
}

/// Product of many series; the result has the smallest order among them.
pub fn product<I: IntoIterator<Item = Result<TruncatedSeries>>>(
    order: usize,
    factors: I,
) -> Result<TruncatedSeries> {
    let mut acc = TruncatedSeries::one(order);
    for f in factors {
        acc = acc.mul(&f?)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorSign {
    /// `(1 − q^m)^{−e}`
    Minus,
    /// `(1 + q^m)^{e}`
    Plus,
}

/// `(1 − q^m)^{−exponent}` or `(1 + q^m)^{exponent}` through `q^order`.
pub fn geom_factor(m: usize, sign: FactorSign, exponent: u64, order: usize) -> Result<TruncatedSeries> {
    if m == 0 {
        return Err(Error::InvalidArgument("geometric factor needs m >= 1".into()));
    }
    let mut s = TruncatedSeries::zero(order);
    let mut j = 0u64;
    while (j as usize) * m <= order {
        let c = match sign {
            FactorSign::Minus if exponent == 0 => u128::from(j == 0),
            FactorSign::Minus => binomial(exponent + j - 1, j)?,
            FactorSign::Plus => binomial(exponent, j)?,
        };
        if sign == FactorSign::Plus && j > exponent {
            break;
        }
        s.coeffs[j as usize * m] = i128::try_from(c).map_err(|_| Error::Overflow("geometric factor"))?;
        j += 1;
    }
    Ok(s)
}

/// `∏_{i≥0} 1/(1 − q^{d^i})`: the counts `|P(n, d)|`.
pub fn dary_partition_series(d: u64, order: usize) -> Result<TruncatedSeries> {
    product(
        order,
        allowed_parts(FamilyKind::Dary(d), order as u64)
            .into_iter()
            .map(|p| geom_factor(p as usize, FactorSign::Minus, 1, order)),
    )
}

fn powers_up_to(base: u64, max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 1u64;
    while p <= max {
        out.push(p);
        match p.checked_mul(base) {
            Some(next) => p = next,
            None => break,
        }
    }
    out
}

/// `∏_{i≥0} (1 + q^{2^i})^{e(i)}`.
fn binary_plus_product(order: usize, exponent: impl Fn(u64) -> u64) -> Result<TruncatedSeries> {
    product(
        order,
        powers_up_to(2, order as u64)
            .into_iter()
            .enumerate()
            .map(|(i, p)| geom_factor(p as usize, FactorSign::Plus, exponent(i as u64), order)),
    )
}

/// The generating-function catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gf {
    /// `q²/(1−q)² ∏ 1/(1−q^{2^i})`, the 1's in binary images.
    A,
    /// `q³/((1−q)(1−q²)) ∏ 1/(1−q^{2^i})`, the 2's.
    B,
    /// `q⁴(1+q+2q²)/((1−q²)(1−q⁴)) ∏ 1/(1−q^{2^i})`, the 4's.
    C,
    /// `q²/(1−q)² ∏ 1/(1−q^{d^i})`
    Ad(u64),
    /// `q^{d+1}/((1−q)(1−q^d)) ∏ 1/(1−q^{d^i})`
    Bd(u64),
    /// `q² ∏ (1+q^{2^i})^{i+3}`
    Color,
    /// `∏ (1+q^{2^i})^{i+3}`, counting `(n+3)`-color binary partitions.
    ColorCount,
    /// `q² ∏ (1+q^{2^i})^{⌊i/d⌋+3}`
    ColorPow(u64),
    /// `∏ (1+q^{2^i})^{⌊i/d⌋+3}`
    ColorPowCount(u64),
    /// `q² ∏ (1+q^{2^n})² ∏_{i,j} (1+q^{2^i(2d+1)^j})`
    ColorOdd(u64),
    /// `∏ (1+q^{2^n})² ∏_{i,j} (1+q^{2^i(2d+1)^j})`
    ColorOddCount(u64),
}

impl Gf {
    pub fn name(&self) -> String {
        match self {
            Gf::A => "GF_A".into(),
            Gf::B => "GF_B".into(),
            Gf::C => "GF_C".into(),
            Gf::Ad(d) => format!("GF_A_D({d})"),
            Gf::Bd(d) => format!("GF_B_D({d})"),
            Gf::Color => "GF_COLOR".into(),
            Gf::ColorCount => "GF_Q".into(),
            Gf::ColorPow(d) => format!("GF_COLOR_POW({d})"),
            Gf::ColorPowCount(d) => format!("GF_Q_POW({d})"),
            Gf::ColorOdd(d) => format!("GF_COLOR_ODD({d})"),
            Gf::ColorOddCount(d) => format!("GF_Q_ODD({d})"),
        }
    }

    /// Coefficients through `q^order`.
    pub fn series(&self, order: usize) -> Result<TruncatedSeries> {
        use FactorSign::*;
        let inv = |m: usize, e: u64| geom_factor(m, Minus, e, order);
        match *self {
            Gf::A => Gf::Ad(2).series(order),
            Gf::B => Gf::Bd(2).series(order),
            Gf::C => {
                let numerator = TruncatedSeries::from_coeffs(vec![0, 0, 0, 0, 1, 1, 2], order);
                product(order, [Ok(numerator), inv(2, 1), inv(4, 1), dary_partition_series(2, order)])
            }
            Gf::Ad(d) => {
                check_base(d)?;
                Ok(product(order, [inv(1, 2), dary_partition_series(d, order)])?.shift(2))
            }
            Gf::Bd(d) => {
                check_base(d)?;
                let shift = usize::try_from(d + 1).map_err(|_| Error::Overflow("gf shift"))?;
                Ok(product(order, [inv(1, 1), inv(d as usize, 1), dary_partition_series(d, order)])?
                    .shift(shift))
            }
            Gf::Color => Ok(Gf::ColorCount.series(order)?.shift(2)),
            Gf::ColorCount => binary_plus_product(order, |i| i + 3),
            Gf::ColorPow(d) => Ok(Gf::ColorPowCount(d).series(order)?.shift(2)),
            Gf::ColorPowCount(d) => {
                if d == 0 {
                    return Err(Error::InvalidArgument("color families need d >= 1".into()));
                }
                binary_plus_product(order, |i| i / d + 3)
            }
            Gf::ColorOdd(d) => Ok(Gf::ColorOddCount(d).series(order)?.shift(2)),
            Gf::ColorOddCount(d) => {
                if d == 0 {
                    return Err(Error::InvalidArgument("color families need d >= 1".into()));
                }
                let odd = 2 * d + 1;
                let mut factors = vec![binary_plus_product(order, |_| 2)];
                for two in powers_up_to(2, order as u64) {
                    for o in powers_up_to(odd, order as u64 / two) {
                        factors.push(geom_factor((two * o) as usize, Plus, 1, order));
                    }
                }
                product(order, factors)
            }
        }
    }
}

fn check_base(d: u64) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidArgument(format!("d-ary generating functions need d >= 2, got {d}")))
    } else {
        Ok(())
    }
}

/// Checks `1/(1−q) = ∏_{i≥0} (1 + q^{2^i})` through `q^order`.
pub fn identity_check_euler(order: usize) -> Result<bool> {
    identity_check_euler_substituted(0, order)
}

/// The same identity after `q → q^{2^s}`:
/// `1/(1 − q^{2^s}) = ∏_{i≥0} (1 + q^{2^{i+s}})`.
pub fn identity_check_euler_substituted(s: u32, order: usize) -> Result<bool> {
    let step = 1usize
        .checked_shl(s)
        .filter(|&st| st > 0)
        .ok_or(Error::Overflow("euler substitution"))?;
    let lhs = geom_factor(step, FactorSign::Minus, 1, order)?;
    let rhs = product(
        order,
        powers_up_to(2, order as u64)
            .into_iter()
            .filter(|&p| p as usize >= step)
            .map(|p| geom_factor(p as usize, FactorSign::Plus, 1, order)),
    )?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{count, PartitionFamily};

    fn s(v: &[i128], order: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(v.to_vec(), order)
    }

    #[test]
    fn geometric_factors() {
        assert_eq!(geom_factor(1, FactorSign::Minus, 1, 4).unwrap(), s(&[1, 1, 1, 1, 1], 4));
        assert_eq!(geom_factor(2, FactorSign::Plus, 2, 4).unwrap(), s(&[1, 0, 2, 0, 1], 4));
        assert_eq!(geom_factor(1, FactorSign::Minus, 2, 3).unwrap(), s(&[1, 2, 3, 4], 3));
        assert!(geom_factor(0, FactorSign::Plus, 1, 3).is_err());
    }

    #[test]
    fn products_truncate() {
        let p = s(&[1, 1], 2).mul(&s(&[1, -1], 2)).unwrap();
        assert_eq!(p, s(&[1, 0, -1], 2));
        let a = s(&[3, 1, 4, 1, 5], 4);
        assert_eq!(a.mul(&TruncatedSeries::one(4)).unwrap(), a);
        assert_eq!(a.mul(&TruncatedSeries::one(2)).unwrap().order(), 2);
    }

    #[test]
    fn binary_product_counts_binary_partitions() {
        let series = dary_partition_series(2, 40).unwrap();
        for n in 0..=40 {
            let c = count(&PartitionFamily::binary(n as i64)).unwrap();
            assert_eq!(series.coeff(n), c as i128, "n = {n}");
        }
    }

    #[test]
    fn catalog_spot_values() {
        let a = Gf::A.series(10).unwrap();
        assert_eq!(&a.coeffs()[..7], &[0, 0, 1, 3, 7, 13, 23]);
        assert_eq!(Gf::B.series(6).unwrap().coeff(4), 2);
        assert_eq!(Gf::C.series(6).unwrap().coeff(4), 1);
        assert_eq!(Gf::Color.series(8).unwrap().coeff(6), 23);
        assert_eq!(Gf::ColorCount.series(8).unwrap().coeff(4), 23);
        assert_eq!(Gf::ColorPowCount(2).series(4).unwrap().coeff(4), 16);
        assert_eq!(Gf::ColorOddCount(1).series(4).unwrap().coeff(4), 18);
    }

    #[test]
    fn overflow_is_an_error() {
        let big = s(&[i128::MAX / 2 + 1, 0], 1);
        assert!(matches!(big.add(&big), Err(Error::Overflow(_))));
        assert!(big.mul(&s(&[2], 1)).is_err());
    }

    #[test]
    fn euler_product() {
        assert!(identity_check_euler(64).unwrap());
        assert!(identity_check_euler(0).unwrap());
        assert!(identity_check_euler_substituted(2, 32).unwrap());
    }

    #[test]
    fn bfile_layout() {
        assert_eq!(s(&[1, 0, 2], 2).to_bfile(), "0 1\n1 0\n2 2\n");
    }
}
