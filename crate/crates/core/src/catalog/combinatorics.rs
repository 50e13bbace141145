use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::scalar::Scalar;

/// `n!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Scalar {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Scalar::Exact(BigRational::from_integer(acc))
}

/// Binomial coefficient, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> Scalar {
    if k < 0 || n < 0 || k > n {
        return Scalar::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Scalar::Exact(BigRational::from_integer(acc))
}
