use crate::error::{Error, Result};
use crate::scalar::{KahanSum, Real};

fn terminating_order(a_neg: i64) -> Result<u32> {
    if a_neg > 0 {
        return Err(Error::Domain(format!(
            "terminating series needs a non-positive integer first parameter, got {a_neg}"
        )));
    }
    u32::try_from(-a_neg).map_err(|_| Error::Domain(format!("series order {a_neg} too large")))
}

/// `2F1(a, b; c; x)` for `a = -n`, summed exactly over its `n + 1` terms.
pub fn hyp2f1_terminating<T: Real>(a_neg: i64, b: T, c: T, x: T) -> Result<T> {
    let n = terminating_order(a_neg)?;
    if c <= T::zero() && c == c.floor() && (-c).to_u32().is_none_or(|j| j < n) {
        return Err(Error::Domain(format!("2F1 lower parameter {c} hits a pole before the series ends")));
    }
    let mut term = T::one();
    let mut acc = KahanSum::new();
    acc.add(term);
    for k in 0..n {
        let kf = T::from_u32(k).unwrap();
        term = term * (T::from_i64(a_neg).unwrap() + kf) * (b + kf) / ((c + kf) * (kf + T::one())) * x;
        acc.add(term);
    }
    Ok(acc.total())
}

/// `1F1(a; b; z)` for `a = -n`, `b > 0`.
pub fn hyp1f1_terminating<T: Real>(a_neg: i64, b: T, z: T) -> Result<T> {
    let n = terminating_order(a_neg)?;
    if !(b > T::zero()) {
        return Err(Error::Domain(format!("1F1 lower parameter must be positive, got {b}")));
    }
    let mut term = T::one();
    let mut acc = KahanSum::new();
    acc.add(term);
    for k in 0..n {
        let kf = T::from_u32(k).unwrap();
        term = term * (T::from_i64(a_neg).unwrap() + kf) / ((b + kf) * (kf + T::one())) * z;
        acc.add(term);
    }
    Ok(acc.total())
}
