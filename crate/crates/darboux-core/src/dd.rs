//! Double-double arithmetic: an unevaluated sum of two `f64`s giving roughly
//! 32 significant decimal digits.
//!
//! This is the working precision for spectra of the irrational-mass
//! configurations and for monodromy integration, where plain `f64` leaves too
//! little headroom between the defective-eigenvalue noise floor and the
//! certification tolerances.
//!
//! The representation invariant is `|lo| <= ulp(hi)/2`, maintained by the
//! error-free transforms below. Operations assume no overflow of intermediate
//! products; all quantities in this crate stay far inside `1e±300`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Double-double number `hi + lo`.
#[derive(Clone, Copy, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: returns `(s, e)` with `s = fl(a+b)` and `a+b = s+e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Like `two_sum` but requires `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

/// Dekker split of a 53-bit float into two 26-bit halves.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Error-free product: `(p, e)` with `p = fl(a*b)` and `a*b = p+e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    // Splits generated from 50-digit references; each pair satisfies
    // |hi+lo - x| < ulp(lo).
    pub const PI: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };
    pub const PI_2: Dd = Dd { hi: 1.5707963267948966, lo: 6.123233995736766e-17 };
    pub const PI_4: Dd = Dd { hi: 0.7853981633974483, lo: 3.061616997868383e-17 };
    pub const TAU: Dd = Dd { hi: 6.283185307179586, lo: 2.4492935982947064e-16 };
    pub const LN_2: Dd = Dd { hi: 0.6931471805599453, lo: 2.3190468138462996e-17 };
    pub const E: Dd = Dd { hi: 2.718281828459045, lo: 1.4456468917292502e-16 };

    /// Unit roundoff of the format, used to scale convergence thresholds.
    pub const EPSILON: f64 = 2.465190328815662e-32; // 2^-105

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_i64(n: i64) -> Dd {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Dd::new(hi, lo)
    }

    #[inline]
    pub fn from_ratio(n: i64, d: i64) -> Dd {
        Dd::from_i64(n) / Dd::from_i64(d)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    #[inline]
    pub fn is_nan(self) -> bool {
        self.hi.is_nan()
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    /// Product with a plain double, error-free in the cross term.
    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (s, t) = quick_two_sum(p, e + self.lo * b);
        Dd { hi: s, lo: t }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        self / Dd::from_f64(b)
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn floor(self) -> Dd {
        let f = self.hi.floor();
        if f == self.hi {
            // hi already integral: the fractional part lives in lo.
            let (s, e) = quick_two_sum(f, self.lo.floor());
            Dd { hi: s, lo: e }
        } else {
            Dd { hi: f, lo: 0.0 }
        }
    }

    pub fn round(self) -> Dd {
        (self + Dd::from_ratio(1, 2)).floor()
    }

    pub fn sqrt(self) -> Dd {
        if self.is_zero() {
            return Dd::ZERO;
        }
        if self.hi < 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        // Newton on y^2 = x from the 53-bit seed; one step already reaches
        // full precision, the second shaves the last ulp.
        let mut y = Dd::from_f64(self.hi.sqrt());
        y = (y + self / y).mul_f64(0.5);
        y = (y + self / y).mul_f64(0.5);
        y
    }

    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn exp(self) -> Dd {
        if self.is_zero() {
            return Dd::ONE;
        }
        // e^x = 2^k * e^r with r = x - k ln2, |r| <= ln2/2.
        let k = (self.to_f64() / std::f64::consts::LN_2).round();
        assert!(k.abs() < 1000.0, "exp argument out of supported range");
        let r = self - Dd::LN_2.mul_f64(k);
        let mut term = r;
        let mut sum = Dd::ONE + r;
        let mut i = 2i64;
        loop {
            term = term * r / Dd::from_i64(i);
            sum += term;
            if term.hi.abs() < Dd::EPSILON * sum.hi.abs() || i > 40 {
                break;
            }
            i += 1;
        }
        let scale = 2f64.powi(k as i32);
        Dd { hi: sum.hi * scale, lo: sum.lo * scale }
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        // Newton on e^y = x; the f64 seed has ~16 correct digits and each
        // step doubles them.
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    /// Simultaneous sin/cos via range reduction modulo pi/2 and Taylor sums
    /// on |r| <= pi/4. Accurate for |x| up to ~1e10; arguments here are
    /// angles of bounded loops, far below that.
    pub fn sin_cos(self) -> (Dd, Dd) {
        if self.is_zero() {
            return (Dd::ZERO, Dd::ONE);
        }
        let k = (self.to_f64() / std::f64::consts::FRAC_PI_2).round();
        let r = self - Dd::PI_2.mul_f64(k);
        let (s, c) = taylor_sin_cos(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }

    pub fn cos(self) -> Dd {
        self.sin_cos().1
    }

    pub fn max(self, other: Dd) -> Dd {
        if self < other {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Dd) -> Dd {
        if other < self {
            other
        } else {
            self
        }
    }

    /// 10^e as a double-double; exact through e = 31, correctly rounded after.
    pub fn ten_pow(e: i32) -> Dd {
        Dd::from_i64(10).powi(e)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(self, digits: usize) -> String {
        assert!(digits >= 1 && digits <= 36);
        if self.is_nan() {
            return "NaN".to_string();
        }
        if !self.is_finite() {
            return if self.hi > 0.0 { "inf".into() } else { "-inf".into() };
        }
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_sign_negative();
        let x = self.abs();
        let mut e10 = x.hi.abs().log10().floor() as i32;
        let mut r = x / Dd::ten_pow(e10);
        // log10 of hi can land one off near powers of ten.
        if r >= Dd::from_i64(10) {
            r = r / Dd::from_i64(10);
            e10 += 1;
        }
        if r < Dd::ONE {
            r = r.mul_f64(10.0);
            e10 -= 1;
        }
        let mut ds: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = r.hi.floor();
            let di = if d < 0.0 { 0u8 } else if d > 9.0 { 9u8 } else { d as u8 };
            ds.push(di);
            r = (r - Dd::from_i64(di as i64)).mul_f64(10.0);
        }
        // Round on the guard digit and propagate the carry.
        if ds[digits] >= 5 {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    e10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        ds.truncate(digits);
        let mut mant = String::new();
        if neg {
            mant.push('-');
        }
        mant.push((b'0' + ds[0]) as char);
        if digits > 1 {
            mant.push('.');
            for &d in &ds[1..] {
                mant.push((b'0' + d) as char);
            }
        }
        if e10 != 0 {
            mant.push('e');
            mant.push_str(&e10.to_string());
        }
        mant
    }
}

fn taylor_sin_cos(r: Dd) -> (Dd, Dd) {
    // sin r = r - r^3/3! + ..., cos r = 1 - r^2/2! + ...; |r| <= pi/4 keeps
    // the terms below 1e-33 after ~30 of them.
    let r2 = r * r;
    let mut s = r;
    let mut term = r;
    let mut n = 1i64;
    loop {
        term = term * r2 / Dd::from_i64((n + 1) * (n + 2));
        term = -term;
        s += term;
        n += 2;
        if term.hi.abs() < Dd::EPSILON || n > 60 {
            break;
        }
    }
    let mut c = Dd::ONE;
    term = Dd::ONE;
    n = 0;
    loop {
        term = term * r2 / Dd::from_i64((n + 1) * (n + 2));
        term = -term;
        c += term;
        n += 2;
        if term.hi.abs() < Dd::EPSILON || n > 60 {
            break;
        }
    }
    (s, c)
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (s1, s2) = quick_two_sum(p, e);
        Dd { hi: s1, lo: s2 }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        // Long division: three quotient corrections give full precision.
        let q1 = self.hi / rhs.hi;
        let mut r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, rhs: Dd) {
        *self = *self + rhs;
    }
}

impl SubAssign for Dd {
    #[inline]
    fn sub_assign(&mut self, rhs: Dd) {
        *self = *self - rhs;
    }
}

impl MulAssign for Dd {
    #[inline]
    fn mul_assign(&mut self, rhs: Dd) {
        *self = *self * rhs;
    }
}

impl DivAssign for Dd {
    #[inline]
    fn div_assign(&mut self, rhs: Dd) {
        *self = *self / rhs;
    }
}

impl PartialEq for Dd {
    fn eq(&self, other: &Dd) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({})", self.to_decimal(32))
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(32))
    }
}

impl FromStr for Dd {
    type Err = String;

    /// Parses decimal literals like `-1.25e-3`. Digit accumulation is done in
    /// double-double, so inputs up to ~32 significant digits round-trip.
    fn from_str(s: &str) -> std::result::Result<Dd, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty number".into());
        }
        let bytes = s.as_bytes();
        let mut i = 0;
        let neg = match bytes[0] {
            b'-' => {
                i = 1;
                true
            }
            b'+' => {
                i = 1;
                false
            }
            _ => false,
        };
        let mut acc = Dd::ZERO;
        let mut frac_digits: i32 = 0;
        let mut seen_digit = false;
        let mut seen_dot = false;
        while i < bytes.len() {
            match bytes[i] {
                b'0'..=b'9' => {
                    acc = acc.mul_f64(10.0) + Dd::from_i64((bytes[i] - b'0') as i64);
                    if seen_dot {
                        frac_digits += 1;
                    }
                    seen_digit = true;
                    i += 1;
                }
                b'.' if !seen_dot => {
                    seen_dot = true;
                    i += 1;
                }
                b'e' | b'E' => break,
                _ => return Err(format!("unexpected character in number: {s}")),
            }
        }
        if !seen_digit {
            return Err(format!("no digits in number: {s}"));
        }
        let mut exp: i32 = 0;
        if i < bytes.len() {
            // Exponent part.
            exp = s[i + 1..]
                .parse::<i32>()
                .map_err(|e| format!("bad exponent in {s}: {e}"))?;
        }
        let e = exp - frac_digits;
        let mut v = if e >= 0 {
            acc * Dd::ten_pow(e)
        } else {
            acc / Dd::ten_pow(-e)
        };
        if neg {
            v = -v;
        }
        Ok(v)
    }
}
