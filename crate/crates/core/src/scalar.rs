//! Scalar backends.
//!
//! Two fields sit behind [`Scalar`]: [`GaussRat`] (exact Gaussian rationals with
//! arbitrary-precision numerators and denominators, literal equality) and
//! [`Cplx`] (complex doubles whose comparisons go through the active
//! [`ToleranceConfig`]).

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds used by the numeric backend.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eps_abs: f64,
    pub eps_rel: f64,
    /// Pivot / singular-value cutoff for rank decisions.
    pub rank_threshold: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eps_abs: 1e-10,
            eps_rel: 1e-9,
            rank_threshold: 1e-8,
        }
    }
}

thread_local! {
    static ACTIVE: Cell<ToleranceConfig> = Cell::new(ToleranceConfig::default());
}

impl ToleranceConfig {
    /// The configuration in force on this thread.
    pub fn current() -> Self {
        ACTIVE.with(|c| c.get())
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.eps_abs) && ok(self.eps_rel) && ok(self.rank_threshold) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "tolerances must be finite and strictly positive: {self:?}"
            )))
        }
    }

    /// Numeric equality contract: |x − y| ≤ ε_abs + ε_rel·max(|x|, |y|).
    pub fn close(&self, x: Complex64, y: Complex64) -> bool {
        (x - y).norm() <= self.eps_abs + self.eps_rel * x.norm().max(y.norm())
    }
}

/// Runs `f` with `cfg` as the active tolerance on this thread.
pub fn with_tolerance<R>(cfg: ToleranceConfig, f: impl FnOnce() -> R) -> R {
    struct Restore(ToleranceConfig);
    impl Drop for Restore {
        fn drop(&mut self) {
            ACTIVE.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(ToleranceConfig::current());
    ACTIVE.with(|c| c.set(cfg));
    f()
}

/// A complex scalar field.
///
/// Generic code never compares scalars with `==`; it goes through
/// [`Scalar::is_zero`], [`Scalar::approx_eq`] and [`Scalar::is_negligible`] so
/// that the numeric backend can apply its tolerances.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact backend: the dyadic rational equal to each part of `z`.
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;

    fn conj(&self) -> Self;
    /// Real part, as a scalar with zero imaginary part.
    fn re(&self) -> Self;
    /// Imaginary part, as a scalar with zero imaginary part.
    fn im(&self) -> Self;
    /// |x|², a real scalar.
    fn norm_sqr(&self) -> Self;
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    fn is_zero(&self) -> bool;
    fn approx_eq(&self, other: &Self) -> bool;
    /// Rank decisions: exact zero, or |x| ≤ rank_threshold·max(scale, 1).
    fn is_negligible(&self, scale: f64) -> bool;
    fn is_real(&self) -> bool;

    /// Square root of a non-negative real, when it lies in the field.
    fn try_sqrt(&self) -> Option<Self>;

    /// Best in-field representative of a floating value: the numeric backend
    /// returns it unchanged, the exact backend searches small-denominator
    /// rationals and may fail.
    fn rationalize(z: Complex64) -> Option<Self>;

    /// Total order on real parts (then imaginary parts); used only for
    /// deterministic tie-breaking.
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// `self -= a * b`
    fn sub_assign_mul(&mut self, a: &Self, b: &Self) {
        let t = a.clone() * b.clone();
        let s = std::mem::replace(self, Self::zero());
        *self = s - t;
    }

    /// `self += a * b`
    fn add_assign_mul(&mut self, a: &Self, b: &Self) {
        let t = a.clone() * b.clone();
        let s = std::mem::replace(self, Self::zero());
        *self = s + t;
    }

    /// Serialized entry form: `"a/b+c/d i"` for the exact backend.
    fn to_entry(&self) -> serde_json::Value;
    fn from_entry(v: &serde_json::Value) -> Result<Self>;
}

// ---------------------------------------------------------------------------
// Exact backend
// ---------------------------------------------------------------------------

/// Gaussian rational `re + im·i` with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn re_part(&self) -> &BigRational {
        &self.re
    }

    pub fn im_part(&self) -> &BigRational {
        &self.im
    }

    fn rat_from_f64(x: f64) -> BigRational {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

fn gauss_mul(a: &GaussRat, b: &GaussRat) -> GaussRat {
    let (ai, bi) = (a.im.is_zero(), b.im.is_zero());
    match (ai, bi) {
        (true, true) => GaussRat::real(&a.re * &b.re),
        (true, false) => GaussRat {
            re: &a.re * &b.re,
            im: &a.re * &b.im,
        },
        (false, true) => GaussRat {
            re: &a.re * &b.re,
            im: &a.im * &b.re,
        },
        (false, false) => GaussRat {
            re: &a.re * &b.re - &a.im * &b.im,
            im: &a.re * &b.im + &a.im * &b.re,
        },
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        gauss_mul(&self, &o)
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, o: GaussRat) -> GaussRat {
        assert!(!Scalar::is_zero(&o), "division by zero");
        if o.im.is_zero() {
            return GaussRat {
                re: self.re / &o.re,
                im: self.im / &o.re,
            };
        }
        let den = &o.re * &o.re + &o.im * &o.im;
        let num = gauss_mul(&self, &o.conj());
        GaussRat {
            re: num.re / &den,
            im: num.im / den,
        }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{} i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{} i", self.re, self.im)
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else if s.contains('.') || s.contains('e') || s.contains('E') {
        // decimal literal: read exactly
        let (mant, exp) = match s.find(['e', 'E']) {
            Some(p) => (&s[..p], s[p + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        let digits = format!("{int_part}{frac_part}");
        let n = BigInt::from_str(&digits).map_err(|_| bad())?;
        let shift = exp - frac_part.len() as i32;
        let ten = BigInt::from(10);
        Ok(if shift >= 0 {
            BigRational::from_integer(n * num_traits::pow(ten, shift as usize))
        } else {
            BigRational::new(n, num_traits::pow(ten, (-shift) as usize))
        })
    } else {
        Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
    }
}

impl FromStr for GaussRat {
    type Err = Error;

    /// Accepts `"a/b"`, `"a/b+c/d i"`, `"a-c/d i"`, `"c/d i"`, `"i"`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not the leading one and not after an exponent
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                let c = bytes[k] as char;
                if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                    split = Some(k);
                    break;
                }
            }
            let (re_s, im_s) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("0", body),
            };
            let im_s = match im_s {
                "" | "+" => "1",
                "-" => "-1",
                other => other.strip_prefix('+').unwrap_or(other),
            };
            Ok(GaussRat::new(parse_rational(re_s)?, parse_rational(im_s)?))
        } else {
            Ok(GaussRat::real(parse_rational(&t)?))
        }
    }
}

/// Continued-fraction search for p/q with q ≤ `max_den` and |x − p/q| ≤ `tol`.
fn small_rational(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h2), BigInt::from(k2)));
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac.abs() < 1e-300 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

impl Scalar for GaussRat {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn zero() -> Self {
        GaussRat::real(BigRational::zero())
    }
    fn one() -> Self {
        GaussRat::real(BigRational::one())
    }
    fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        GaussRat::real(BigRational::from_integer(BigInt::from(v)))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn from_c64(z: Complex64) -> Self {
        GaussRat::new(Self::rat_from_f64(z.re), Self::rat_from_f64(z.im))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }
    fn re(&self) -> Self {
        GaussRat::real(self.re.clone())
    }
    fn im(&self) -> Self {
        GaussRat::real(self.im.clone())
    }
    fn norm_sqr(&self) -> Self {
        GaussRat::real(&self.re * &self.re + &self.im * &self.im)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        Scalar::is_zero(self)
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    fn try_sqrt(&self) -> Option<Self> {
        if !self.im.is_zero() || self.re.is_negative() {
            return None;
        }
        let n = self.re.numer();
        let d = self.re.denom();
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(GaussRat::real(BigRational::new(rn, rd)))
        } else {
            None
        }
    }
    fn rationalize(z: Complex64) -> Option<Self> {
        let tol = 1e-9 * (1.0 + z.norm());
        let re = small_rational(z.re, 1_000_000, tol)?;
        let im = small_rational(z.im, 1_000_000, tol)?;
        Some(GaussRat::new(re, im))
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
    fn sub_assign_mul(&mut self, a: &Self, b: &Self) {
        if Scalar::is_zero(a) || Scalar::is_zero(b) {
            return;
        }
        let t = gauss_mul(a, b);
        self.re -= t.re;
        self.im -= t.im;
    }
    fn add_assign_mul(&mut self, a: &Self, b: &Self) {
        if Scalar::is_zero(a) || Scalar::is_zero(b) {
            return;
        }
        let t = gauss_mul(a, b);
        self.re += t.re;
        self.im += t.im;
    }
    fn to_entry(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
    fn from_entry(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => s.parse(),
            serde_json::Value::Number(_) => {
                let s = v.to_string();
                Ok(GaussRat::real(parse_rational(&s)?))
            }
            serde_json::Value::Array(parts) if parts.len() == 2 => {
                let re = parse_rational(&parts[0].to_string())?;
                let im = parse_rational(&parts[1].to_string())?;
                Ok(GaussRat::new(re, im))
            }
            other => Err(Error::Parse(format!("bad matrix entry {other}"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Numeric backend
// ---------------------------------------------------------------------------

/// Complex double compared through the active [`ToleranceConfig`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cplx(pub Complex64);

impl Cplx {
    pub fn new(re: f64, im: f64) -> Self {
        Cplx(Complex64::new(re, im))
    }
}

impl Add for Cplx {
    type Output = Cplx;
    fn add(self, o: Cplx) -> Cplx {
        Cplx(self.0 + o.0)
    }
}
impl Sub for Cplx {
    type Output = Cplx;
    fn sub(self, o: Cplx) -> Cplx {
        Cplx(self.0 - o.0)
    }
}
impl Mul for Cplx {
    type Output = Cplx;
    fn mul(self, o: Cplx) -> Cplx {
        Cplx(self.0 * o.0)
    }
}
impl Div for Cplx {
    type Output = Cplx;
    fn div(self, o: Cplx) -> Cplx {
        Cplx(self.0 / o.0)
    }
}
impl Neg for Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx(-self.0)
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.0.re, self.0.im)
    }
}

impl Scalar for Cplx {
    const EXACT: bool = false;
    const NAME: &'static str = "numeric";

    fn zero() -> Self {
        Cplx::new(0.0, 0.0)
    }
    fn one() -> Self {
        Cplx::new(1.0, 0.0)
    }
    fn i() -> Self {
        Cplx::new(0.0, 1.0)
    }
    fn from_i64(v: i64) -> Self {
        Cplx::new(v as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Cplx::new(num as f64 / den as f64, 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        Cplx(z)
    }
    fn to_c64(&self) -> Complex64 {
        self.0
    }
    fn conj(&self) -> Self {
        Cplx(self.0.conj())
    }
    fn re(&self) -> Self {
        Cplx::new(self.0.re, 0.0)
    }
    fn im(&self) -> Self {
        Cplx::new(self.0.im, 0.0)
    }
    fn norm_sqr(&self) -> Self {
        Cplx::new(self.0.norm_sqr(), 0.0)
    }
    fn is_zero(&self) -> bool {
        self.0.norm() <= ToleranceConfig::current().eps_abs
    }
    fn approx_eq(&self, other: &Self) -> bool {
        ToleranceConfig::current().close(self.0, other.0)
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.0.norm() <= ToleranceConfig::current().rank_threshold * scale.max(1.0)
    }
    fn is_real(&self) -> bool {
        self.0.im.abs() <= ToleranceConfig::current().eps_abs
    }
    fn try_sqrt(&self) -> Option<Self> {
        if self.0.re < -ToleranceConfig::current().eps_abs {
            return None;
        }
        Some(Cplx::new(self.0.re.max(0.0).sqrt(), 0.0))
    }
    fn rationalize(z: Complex64) -> Option<Self> {
        Some(Cplx(z))
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.0
            .re
            .total_cmp(&other.0.re)
            .then_with(|| self.0.im.total_cmp(&other.0.im))
    }
    fn sub_assign_mul(&mut self, a: &Self, b: &Self) {
        self.0 -= a.0 * b.0;
    }
    fn add_assign_mul(&mut self, a: &Self, b: &Self) {
        self.0 += a.0 * b.0;
    }
    fn to_entry(&self) -> serde_json::Value {
        serde_json::json!([self.0.re, self.0.im])
    }
    fn from_entry(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Array(parts) if parts.len() == 2 => {
                let re = parts[0].as_f64();
                let im = parts[1].as_f64();
                match (re, im) {
                    (Some(re), Some(im)) => Ok(Cplx::new(re, im)),
                    _ => Err(Error::Parse(format!("bad numeric entry {v}"))),
                }
            }
            serde_json::Value::Number(n) => n
                .as_f64()
                .map(|x| Cplx::new(x, 0.0))
                .ok_or_else(|| Error::Parse(format!("bad numeric entry {v}"))),
            serde_json::Value::String(s) => {
                let g: GaussRat = s.parse()?;
                Ok(Cplx(g.to_c64()))
            }
            other => Err(Error::Parse(format!("bad matrix entry {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussRat {
        s.parse().unwrap()
    }

    #[test]
    fn parses_all_entry_shapes() {
        assert_eq!(q("3"), GaussRat::from_i64(3));
        assert_eq!(q("1/2"), GaussRat::from_ratio(1, 2));
        assert_eq!(q("1/2+3/4 i"), GaussRat::from_ratio(1, 2) + q("3/4i"));
        assert_eq!(q("-1/2-3 i").im(), GaussRat::from_i64(-3));
        assert_eq!(q("i"), GaussRat::i());
        assert_eq!(q("-i"), -GaussRat::i());
        assert_eq!(q("0.25"), GaussRat::from_ratio(1, 4));
        assert_eq!(q("2.5e-1+1e1 i"), GaussRat::from_ratio(1, 4) + q("10i"));
        assert!("1/0".parse::<GaussRat>().is_err());
        assert!("abc".parse::<GaussRat>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0+0 i", "-7/3+2/9 i", "5-1/8 i"] {
            let x = q(s);
            assert_eq!(x.to_string(), s);
            assert_eq!(q(&x.to_string()), x);
        }
    }

    #[test]
    fn gaussian_division_is_exact() {
        let a = q("1+2 i");
        let b = q("3-4 i");
        let c = a.clone() / b.clone();
        assert_eq!(c * b, a);
    }

    #[test]
    fn exact_sqrt_only_for_squares() {
        assert_eq!(q("9/4").try_sqrt(), Some(q("3/2")));
        assert_eq!(q("2").try_sqrt(), None);
        assert_eq!(q("-1").try_sqrt(), None);
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        let z = Complex64::new(-3.0 / 7.0, 5.0 / 11.0);
        assert_eq!(GaussRat::rationalize(z), Some(q("-3/7+5/11 i")));
        assert_eq!(GaussRat::rationalize(Complex64::new(f64::NAN, 0.0)), None);
        // irrationals may still yield a close convergent; callers verify exactly
        let r = GaussRat::rationalize(Complex64::new(2f64.sqrt(), 0.0)).unwrap();
        assert_ne!(r.clone() * r, q("2"));
    }

    #[test]
    fn numeric_tolerance_contract() {
        let a = Cplx::new(1.0, 0.0);
        assert!(a.approx_eq(&Cplx::new(1.0 + 1e-12, 0.0)));
        assert!(!a.approx_eq(&Cplx::new(1.0 + 1e-6, 0.0)));
        let loose = ToleranceConfig {
            eps_abs: 1e-3,
            eps_rel: 1e-3,
            rank_threshold: 1e-3,
        };
        with_tolerance(loose, || {
            assert!(a.approx_eq(&Cplx::new(1.0 + 1e-6, 0.0)));
        });
        assert!(!a.approx_eq(&Cplx::new(1.0 + 1e-6, 0.0)));
    }

    #[test]
    fn invalid_tolerances_rejected() {
        let mut t = ToleranceConfig::default();
        t.rank_threshold = 0.0;
        assert!(t.validate().is_err());
        assert!(ToleranceConfig::default().validate().is_ok());
    }
}
