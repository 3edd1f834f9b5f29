use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("part {part} is not divisible by {divisor}")]
    NotDivisible { part: u64, divisor: u64 },

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("route {route} does not apply to sequence {sequence}")]
    RouteNotApplicable { sequence: String, route: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("network access is disabled; pass --network (or network=true) to fetch {0}")]
    NetworkDisabled(String),

    #[error("network error: {0}")]
    Network(String),

    #[error("integrity error for {sequence}: index {index} has {fetched} upstream but {bundled} bundled")]
    Integrity {
        sequence: String,
        index: i64,
        fetched: i128,
        bundled: i128,
    },

    #[error("no reference data for {0}: not bundled and not in the cache")]
    FixtureUnavailable(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Checked arithmetic helpers that turn overflow into [`Error::Overflow`].
pub(crate) trait Checked: Sized {
    fn add_or(self, rhs: Self, ctx: &'static str) -> Result<Self>;
    fn mul_or(self, rhs: Self, ctx: &'static str) -> Result<Self>;
}

macro_rules! impl_checked {
    ($($t:ty),*) => {$(
        impl Checked for $t {
            #[inline]
            fn add_or(self, rhs: Self, ctx: &'static str) -> Result<Self> {
                self.checked_add(rhs).ok_or(Error::Overflow(ctx))
            }
            #[inline]
            fn mul_or(self, rhs: Self, ctx: &'static str) -> Result<Self> {
                self.checked_mul(rhs).ok_or(Error::Overflow(ctx))
            }
        }
    )*};
}

impl_checked!(u64, u128, i128);

/// Binomial coefficient C(n, k) with overflow detection.
pub(crate) fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        acc = acc.mul_or((n - i) as u128, "binomial")? / (i as u128 + 1);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(40, 20).unwrap(), 137_846_528_820);
    }

    #[test]
    fn checked_ops_report_overflow() {
        assert!(matches!(u64::MAX.add_or(1, "t"), Err(Error::Overflow("t"))));
        assert!(matches!(i128::MAX.mul_or(2, "t"), Err(Error::Overflow(_))));
    }
}
