//! Exact rational constants stored in lowest terms.

use core::cmp::Ordering;
use core::fmt;

/// A rational number `num/den` with `den > 0` and `gcd(num, den) = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };
    pub const MINUS_ONE: Rational = Rational { num: -1, den: 1 };
    pub const HALF: Rational = Rational { num: 1, den: 2 };

    pub const fn integer(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    /// Builds `num/den` reduced to lowest terms. Returns `None` for a zero
    /// denominator or when the reduced value does not fit in `i64`.
    pub fn new(num: i64, den: i64) -> Option<Rational> {
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Option<Rational> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Some(Rational {
            num: i64::try_from(n).ok()?,
            den: i64::try_from(d).ok()?,
        })
    }

    /// Best approximation of `v` with denominator at most `max_den`, by
    /// continued fractions. `None` for non-finite or out-of-range values.
    pub fn approximate(v: f64, max_den: i64) -> Option<Rational> {
        if !v.is_finite() || v.abs() > 1e15 {
            return None;
        }
        let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
        let mut x = v;
        for _ in 0..64 {
            let a = libm::floor(x);
            let (p2, q2) = (a as i128 * p1 + p0, a as i128 * q1 + q0);
            if q2 > max_den as i128 {
                break;
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = x - a;
            if frac.abs() < 1e-12 {
                break;
            }
            x = 1.0 / frac;
        }
        Self::from_i128(p1, q1)
    }

    pub fn numer(self) -> i64 {
        self.num
    }

    pub fn denom(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_one(self) -> bool {
        self.num == 1 && self.den == 1
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    pub fn is_negative(self) -> bool {
        self.num < 0
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, o: Rational) -> Option<Rational> {
        Self::from_i128(
            self.num as i128 * o.den as i128 + o.num as i128 * self.den as i128,
            self.den as i128 * o.den as i128,
        )
    }

    pub fn checked_sub(self, o: Rational) -> Option<Rational> {
        self.checked_add(-o)
    }

    pub fn checked_mul(self, o: Rational) -> Option<Rational> {
        Self::from_i128(
            self.num as i128 * o.num as i128,
            self.den as i128 * o.den as i128,
        )
    }

    pub fn checked_div(self, o: Rational) -> Option<Rational> {
        Self::from_i128(
            self.num as i128 * o.den as i128,
            self.den as i128 * o.num as i128,
        )
    }

    /// Integer power; `None` on overflow or `0^negative`.
    pub fn checked_powi(self, exp: i64) -> Option<Rational> {
        if exp < 0 {
            return Rational::ONE.checked_div(self.checked_powi(exp.checked_neg()?)?);
        }
        let mut acc = Rational::ONE;
        for _ in 0..exp {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }

    /// Exact `self^exp` when the result is rational (perfect roots only).
    pub fn checked_pow(self, exp: Rational) -> Option<Rational> {
        if exp.is_integer() {
            if exp.num.unsigned_abs() > 64 {
                return None;
            }
            return self.checked_powi(exp.num);
        }
        if self.is_zero() {
            return if exp.is_negative() {
                None
            } else {
                Some(Rational::ZERO)
            };
        }
        let n = exact_root(self.num, exp.den)?;
        let d = exact_root(self.den, exp.den)?;
        Rational::new(n, d)?.checked_pow(Rational::integer(exp.num))
    }
}

/// Integer `k`-th root when exact (and real).
fn exact_root(v: i64, k: i64) -> Option<i64> {
    if k <= 0 || k > 64 {
        return None;
    }
    if v < 0 {
        return if k % 2 == 1 {
            exact_root(-v, k).map(|r| -r)
        } else {
            None
        };
    }
    let guess = libm::round(libm::pow(v as f64, 1.0 / k as f64)) as i64;
    for cand in [guess - 1, guess, guess + 1] {
        if cand < 0 {
            continue;
        }
        let mut acc: i128 = 1;
        let mut ok = true;
        for _ in 0..k {
            acc *= cand as i128;
            if acc > v as i128 {
                ok = false;
                break;
            }
        }
        if ok && acc == v as i128 {
            return Some(cand);
        }
    }
    None
}

impl core::ops::Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
