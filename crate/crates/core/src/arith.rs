//! Exact arithmetic in ℤ[√k] and ℚ(√k).
//!
//! Every value is a pair of 128-bit integers (plus a positive denominator for
//! [`QkNum`]). All ring and field operations are checked and report
//! [`Error::Overflow`] instead of wrapping. Orderings are decided with integer
//! arithmetic only; when the squares needed for a comparison do not fit in
//! 128 bits the comparison is redone with arbitrary-precision integers, so
//! [`Ring::cmp`] and [`Ring::cmp_q`] never fail.

use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};

/// The quadratic ring ℤ[√k] for a fixed non-square radicand `k ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    k: i128,
}

/// An element `a + b√k` of ℤ[√k].
///
/// The radicand is not stored; operations that depend on it live on [`Ring`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZkInt {
    pub a: i128,
    pub b: i128,
}

/// A canonical element `(a + b√k) / d` of ℚ(√k).
///
/// Canonical means `d ≥ 1` and `gcd(a, b, d) = 1`, so two values are equal as
/// real numbers exactly when their fields are equal. The derived `Ord` is the
/// structural tuple order (useful for map keys); the numeric order is
/// [`Ring::cmp_q`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QkNum {
    a: i128,
    b: i128,
    d: i128,
}

#[inline]
fn ck(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::Overflow)
}

impl ZkInt {
    pub const ZERO: ZkInt = ZkInt { a: 0, b: 0 };
    pub const ONE: ZkInt = ZkInt { a: 1, b: 0 };

    pub const fn new(a: i128, b: i128) -> Self {
        ZkInt { a, b }
    }

    pub const fn from_int(a: i128) -> Self {
        ZkInt { a, b: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `a − b√k`.
    pub fn conj(self) -> Result<Self> {
        Ok(ZkInt::new(self.a, ck(self.b.checked_neg())?))
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        Ok(ZkInt::new(
            ck(self.a.checked_add(rhs.a))?,
            ck(self.b.checked_add(rhs.b))?,
        ))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        Ok(ZkInt::new(
            ck(self.a.checked_sub(rhs.a))?,
            ck(self.b.checked_sub(rhs.b))?,
        ))
    }

    pub fn checked_neg(self) -> Result<Self> {
        Ok(ZkInt::new(
            ck(self.a.checked_neg())?,
            ck(self.b.checked_neg())?,
        ))
    }

    /// Multiplies both components by an ordinary integer.
    pub fn checked_scale(self, n: i128) -> Result<Self> {
        Ok(ZkInt::new(
            ck(self.a.checked_mul(n))?,
            ck(self.b.checked_mul(n))?,
        ))
    }
}

impl fmt::Display for ZkInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b < 0 {
            write!(f, "{}-{}√k", self.a, -self.b)
        } else {
            write!(f, "{}+{}√k", self.a, self.b)
        }
    }
}

impl From<ZkInt> for QkNum {
    fn from(z: ZkInt) -> Self {
        QkNum {
            a: z.a,
            b: z.b,
            d: 1,
        }
    }
}

impl QkNum {
    pub const ZERO: QkNum = QkNum { a: 0, b: 0, d: 1 };
    pub const ONE: QkNum = QkNum { a: 1, b: 0, d: 1 };

    /// Builds the canonical form of `(a + b√k) / d`.
    pub fn new(a: i128, b: i128, d: i128) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        let g = a.gcd(&b).gcd(&d);
        // g ≥ 1 because d ≠ 0
        let (mut a, mut b, mut d) = (a / g, b / g, d / g);
        if d < 0 {
            a = ck(a.checked_neg())?;
            b = ck(b.checked_neg())?;
            d = ck(d.checked_neg())?;
        }
        Ok(QkNum { a, b, d })
    }

    pub fn numerator(&self) -> ZkInt {
        ZkInt::new(self.a, self.b)
    }

    pub fn denominator(&self) -> i128 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// The ℤ[√k] element this value equals, if the denominator is 1.
    pub fn as_zk(&self) -> Option<ZkInt> {
        (self.d == 1).then(|| self.numerator())
    }

    /// Re-runs canonicalisation; the identity on every value this type can hold.
    pub fn canonicalize(&self) -> Result<Self> {
        QkNum::new(self.a, self.b, self.d)
    }

    pub fn checked_neg(&self) -> Result<Self> {
        Ok(QkNum {
            a: ck(self.a.checked_neg())?,
            b: ck(self.b.checked_neg())?,
            d: self.d,
        })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let l = self.d.lcm(&rhs.d);
        let ls = l / self.d;
        let lr = l / rhs.d;
        let a = ck(ck(self.a.checked_mul(ls))?.checked_add(ck(rhs.a.checked_mul(lr))?))?;
        let b = ck(ck(self.b.checked_mul(ls))?.checked_add(ck(rhs.b.checked_mul(lr))?))?;
        QkNum::new(a, b, l)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.checked_neg()?)
    }
}

impl fmt::Display for QkNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/{}", self.numerator(), self.d)
    }
}

/// Sign of `a + b√k` for arbitrary-precision inputs.
fn sign_big(a: &BigInt, b: &BigInt, k: i128) -> Ordering {
    let zero = BigInt::from(0);
    let sa = a.cmp(&zero);
    let sb = b.cmp(&zero);
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (sa, _) => {
            // mixed signs: compare a² with k·b²
            let lhs = a.abs() * a.abs();
            let rhs = b.abs() * b.abs() * BigInt::from(k);
            match lhs.cmp(&rhs) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => sa,
                Ordering::Less => sa.reverse(),
            }
        }
    }
}

/// Sign of `a + b√k`, or `None` when a square overflows 128 bits.
fn sign_small(a: i128, b: i128, k: i128) -> Option<Ordering> {
    let sa = a.cmp(&0);
    let sb = b.cmp(&0);
    Some(match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (sa, _) => {
            let ua = a.unsigned_abs();
            let ub = b.unsigned_abs();
            let lhs = ua.checked_mul(ua)?;
            let rhs = ub.checked_mul(ub)?.checked_mul(k as u128)?;
            match lhs.cmp(&rhs) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => sa,
                Ordering::Less => sa.reverse(),
            }
        }
    })
}

impl Ring {
    /// Validates `k` (at least 2, not a perfect square).
    pub fn new(k: i64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidRadicand(k));
        }
        let r = k.isqrt();
        if r * r == k {
            return Err(Error::InvalidRadicand(k));
        }
        Ok(Ring { k: k as i128 })
    }

    pub fn k(&self) -> i64 {
        self.k as i64
    }

    pub fn mul(&self, x: ZkInt, y: ZkInt) -> Result<ZkInt> {
        let aa = ck(x.a.checked_mul(y.a))?;
        let kbb = ck(ck(x.b.checked_mul(y.b))?.checked_mul(self.k))?;
        let ab = ck(x.a.checked_mul(y.b))?;
        let ba = ck(x.b.checked_mul(y.a))?;
        Ok(ZkInt::new(
            ck(aa.checked_add(kbb))?,
            ck(ab.checked_add(ba))?,
        ))
    }

    /// `a² − k·b²`.
    pub fn norm(&self, x: ZkInt) -> Result<i128> {
        let aa = ck(x.a.checked_mul(x.a))?;
        let kbb = ck(ck(x.b.checked_mul(x.b))?.checked_mul(self.k))?;
        ck(aa.checked_sub(kbb))
    }

    /// Sign of the real number `x`.
    pub fn signum(&self, x: ZkInt) -> Ordering {
        sign_small(x.a, x.b, self.k)
            .unwrap_or_else(|| sign_big(&BigInt::from(x.a), &BigInt::from(x.b), self.k))
    }

    /// Compares the real values of `x` and `y`.
    pub fn cmp(&self, x: ZkInt, y: ZkInt) -> Ordering {
        if let (Some(a), Some(b)) = (x.a.checked_sub(y.a), x.b.checked_sub(y.b)) {
            if let Some(s) = sign_small(a, b, self.k) {
                return s;
            }
        }
        let a = BigInt::from(x.a) - BigInt::from(y.a);
        let b = BigInt::from(x.b) - BigInt::from(y.b);
        sign_big(&a, &b, self.k)
    }

    /// Compares the real values of two field elements.
    pub fn cmp_q(&self, x: &QkNum, y: &QkNum) -> Ordering {
        let small = || -> Option<Ordering> {
            let a = x.a.checked_mul(y.d)?.checked_sub(y.a.checked_mul(x.d)?)?;
            let b = x.b.checked_mul(y.d)?.checked_sub(y.b.checked_mul(x.d)?)?;
            sign_small(a, b, self.k)
        };
        small().unwrap_or_else(|| {
            let (xd, yd) = (BigInt::from(x.d), BigInt::from(y.d));
            let a = BigInt::from(x.a) * &yd - BigInt::from(y.a) * &xd;
            let b = BigInt::from(x.b) * &yd - BigInt::from(y.b) * &xd;
            sign_big(&a, &b, self.k)
        })
    }

    /// `num / den`, rationalised by the conjugate of `den`.
    pub fn ratio(&self, num: ZkInt, den: ZkInt) -> Result<QkNum> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let top = self.mul(num, den.conj()?)?;
        // non-square k: the norm of a nonzero element is nonzero
        let n = self.norm(den)?;
        QkNum::new(top.a, top.b, n)
    }

    pub fn mul_q(&self, x: &QkNum, y: &QkNum) -> Result<QkNum> {
        let top = self.mul(x.numerator(), y.numerator())?;
        QkNum::new(top.a, top.b, ck(x.d.checked_mul(y.d))?)
    }

    pub fn add_q(&self, x: &QkNum, y: &QkNum) -> Result<QkNum> {
        x.checked_add(y)
    }

    pub fn sub_q(&self, x: &QkNum, y: &QkNum) -> Result<QkNum> {
        x.checked_sub(y)
    }

    /// `x / y` in ℚ(√k).
    pub fn div_q(&self, x: &QkNum, y: &QkNum) -> Result<QkNum> {
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = x.numerator().checked_scale(y.d)?;
        let den = y.numerator().checked_scale(x.d)?;
        self.ratio(num, den)
    }

    /// `x` times an element of ℤ[√k].
    pub fn mul_qz(&self, x: &QkNum, z: ZkInt) -> Result<QkNum> {
        let top = self.mul(x.numerator(), z)?;
        QkNum::new(top.a, top.b, x.d)
    }
}
