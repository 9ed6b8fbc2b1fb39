//! Infinite-precision integers and rationals.
//!
//! [`ExactRational`] is the value keeper of last resort: every format decodes
//! into it exactly, and every accuracy figure in the crate is measured against
//! it. Values are always kept in canonical form (positive denominator, reduced
//! by the gcd), so structural equality is value equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary-size natural number.
pub type UnboundedNatural = BigUint;
/// Arbitrary-size signed integer.
pub type UnboundedInteger = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    /// Division by zero, even root of a negative, logarithm of a nonpositive.
    #[error("undefined")]
    Undefined,
    #[error("cannot parse rational literal {0:?}")]
    Parse(String),
}

/// Euclidean division on signed integers: the remainder is always `>= 0`.
pub fn div_rem_euclid(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt), ExactError> {
    if b.is_zero() {
        return Err(ExactError::Undefined);
    }
    let (mut q, mut r) = a.div_rem(b);
    if r.is_negative() {
        if b.is_positive() {
            q -= 1;
            r += b;
        } else {
            q += 1;
            r -= b;
        }
    }
    Ok((q, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub const ALL: [ArithOp; 4] = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div];

    pub fn name(self) -> &'static str {
        match self {
            ArithOp::Add => "add",
            ArithOp::Sub => "sub",
            ArithOp::Mul => "mul",
            ArithOp::Div => "div",
        }
    }

    pub fn is_commutative(self) -> bool {
        matches!(self, ArithOp::Add | ArithOp::Mul)
    }
}

impl FromStr for ArithOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "add" => Ok(ArithOp::Add),
            "sub" => Ok(ArithOp::Sub),
            "mul" => Ok(ArithOp::Mul),
            "div" => Ok(ArithOp::Div),
            other => Err(format!("unknown operation {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesFn {
    Exp,
    Ln,
    Sin,
}

/// Signed rational in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactRational {
    num: BigInt,
    den: BigInt,
}

impl ExactRational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::Undefined);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(mut num: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        ExactRational { num, den }
    }

    pub fn zero() -> Self {
        ExactRational { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        ExactRational { num: v.into(), den: BigInt::one() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self, ExactError> {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    /// `mantissa * 2^exp`.
    pub fn from_dyadic(mantissa: impl Into<BigInt>, exp: i64) -> Self {
        let m: BigInt = mantissa.into();
        if exp >= 0 {
            Self::reduce(m << exp as usize, BigInt::one())
        } else {
            Self::reduce(m, BigInt::one() << (-exp) as usize)
        }
    }

    pub fn pow2(exp: i64) -> Self {
        Self::from_dyadic(1, exp)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn signum(&self) -> i32 {
        match self.num.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ExactRational { num: self.num.abs(), den: self.den.clone() }
    }

    pub fn neg(&self) -> Self {
        ExactRational { num: -&self.num, den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(&self.num + &o.num, self.den.clone());
        }
        Self::reduce(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::reduce(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Self) -> Result<Self, ExactError> {
        if o.is_zero() {
            return Err(ExactError::Undefined);
        }
        Ok(Self::reduce(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn arith(op: ArithOp, a: &Self, b: &Self) -> Result<Self, ExactError> {
        Ok(match op {
            ArithOp::Add => a.add(b),
            ArithOp::Sub => a.sub(b),
            ArithOp::Mul => a.mul(b),
            ArithOp::Div => return a.div(b),
        })
    }

    /// Exact integer power; negative exponents invert.
    pub fn pow(&self, n: i64) -> Result<Self, ExactError> {
        if n < 0 {
            return self.recip()?.pow(-n);
        }
        let e = n as u32;
        Ok(ExactRational {
            num: num_traits::pow(self.num.clone(), e as usize),
            den: num_traits::pow(self.den.clone(), e as usize),
        })
    }

    /// Floor of log2|x|; `None` for zero.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let nb = self.num.magnitude().bits() as i64;
        let db = self.den.magnitude().bits() as i64;
        let mut e = nb - db;
        // |num| / den in [2^(e-1), 2^(e+1)); pin it down with one comparison.
        let n = self.num.magnitude();
        let d = self.den.magnitude();
        let ge = if e >= 0 { *n >= d << e as usize } else { (n << (-e) as usize) >= *d };
        if !ge {
            e -= 1;
        }
        Some(e)
    }

    /// Best-effort conversion; saturates to infinities and flushes to zero.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.floor_log2().unwrap();
        // 64 significant bits of |x| / 2^(e-63)
        let shift = 63 - e;
        let n = self.num.magnitude();
        let d = self.den.magnitude();
        let q = if shift >= 0 { (n << shift as usize) / d } else { n / (d << (-shift) as usize) };
        let m = q.to_u64().unwrap_or(u64::MAX) as f64;
        let v = scale_pow2(m, -shift);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// log2|x| as a float, usable far beyond the f64 exponent range.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let e = self.floor_log2().unwrap();
        let frac = self.abs().mul(&Self::pow2(-e)).to_f64();
        e as f64 + frac.log2()
    }

    /// True when the value is `m * 2^k` for integers m, k.
    pub fn is_dyadic(&self) -> bool {
        let d = self.den.magnitude();
        d.trailing_zeros().map(|tz| (d >> tz as usize).is_one()).unwrap_or(false)
    }

    /// Series partial sum after exactly `iterations` summed terms.
    ///
    /// exp: sum x^k/k!; sin: sum (-1)^k x^(2k+1)/(2k+1)!;
    /// ln: 2 * sum t^(2k+1)/(2k+1) with t = (x-1)/(x+1).
    pub fn taylor_eval(fun: SeriesFn, x: &Self, iterations: u32) -> Result<Self, ExactError> {
        if fun == SeriesFn::Ln && x.signum() <= 0 {
            return Err(ExactError::Undefined);
        }
        if iterations == 0 {
            return Ok(Self::zero());
        }
        // Horner evaluation on unreduced integer fractions, one reduction at the end.
        let (p, q) = (x.num.clone(), x.den.clone());
        let (num, den) = match fun {
            SeriesFn::Exp => {
                // 1 + x(1 + x/2(1 + ... (1 + x/(N-1))))
                let (mut a, mut b) = (BigInt::one(), BigInt::one());
                for j in (1..iterations).rev() {
                    let jb = &q * BigInt::from(j) * &b;
                    a = &jb + &p * &a;
                    b = jb;
                }
                (a, b)
            }
            SeriesFn::Sin => {
                // x(1 - x^2/(2*3)(1 - x^2/(4*5)(...)))
                let pp = &p * &p;
                let qq = &q * &q;
                let (mut a, mut b) = (BigInt::one(), BigInt::one());
                for j in (1..iterations).rev() {
                    let f = BigInt::from(2 * j as u64) * BigInt::from(2 * j as u64 + 1);
                    let db = &qq * f * &b;
                    a = &db - &pp * &a;
                    b = db;
                }
                (a * &p, b * &q)
            }
            SeriesFn::Ln => {
                // t = (p - q)/(p + q); sum_k u^k/(2k+1), u = t^2; result 2t * sum
                let tn = &p - &q;
                let td = &p + &q;
                let un = &tn * &tn;
                let ud = &td * &td;
                let last = BigInt::from(2 * (iterations - 1) as u64 + 1);
                let (mut a, mut b) = (BigInt::one(), last);
                for k in (0..iterations - 1).rev() {
                    let c = BigInt::from(2 * k as u64 + 1);
                    let qb = &ud * &b;
                    a = &qb + &c * &un * &a;
                    b = c * qb;
                }
                (a * tn * 2, b * td)
            }
        };
        Self::new(num, den)
    }

    /// n-th root with |r - a^(1/n)| < 2^-precision_bits * max(1, a^(1/n)).
    ///
    /// Perfect powers (including 0 and 1) come back exact.
    pub fn root_approx(&self, n: u32, precision_bits: u32) -> Result<Self, ExactError> {
        if n == 0 || precision_bits == 0 {
            return Err(ExactError::Undefined);
        }
        if self.is_negative() {
            if n.is_multiple_of(2) {
                return Err(ExactError::Undefined);
            }
            return Ok(self.neg().root_approx(n, precision_bits)?.neg());
        }
        if self.is_zero() || n == 1 {
            return Ok(self.clone());
        }
        // Pull out powers of two so dyadic inputs with huge exponents stay small.
        let p = self.num.magnitude().clone();
        let q = self.den.magnitude().clone();
        let tp = p.trailing_zeros().unwrap_or(0);
        let tq = q.trailing_zeros().unwrap_or(0);
        let (p, q) = (p >> tp as usize, q >> tq as usize);
        let two_exp = tp as i64 - tq as i64;
        let s = two_exp.div_euclid(n as i64);
        let r0 = two_exp.rem_euclid(n as i64) as usize;
        let p = p << r0;
        let prec = precision_bits as usize + q.bits() as usize + 1;
        // floor((p * q^(n-1) * 2^(n*prec))^(1/n)) / (q * 2^prec)
        let radicand = (&p * q.pow(n - 1)) << (n as usize * prec);
        let root = radicand.nth_root(n);
        let num = BigInt::from_biguint(Sign::Plus, root);
        let den = BigInt::from_biguint(Sign::Plus, q) << prec;
        Ok(Self::reduce(num, den).mul(&Self::pow2(s)))
    }

    /// Decimal scientific rendering with `digits` fractional digits, truncated.
    pub fn to_sci_truncated(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let a = self.abs();
        let mut k = (a.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        let ten = Self::from_integer(10);
        // settle k so that 10^k <= a < 10^(k+1)
        loop {
            let lo = ten.pow(k).unwrap();
            if a < lo {
                k -= 1;
                continue;
            }
            let hi = ten.pow(k + 1).unwrap();
            if a >= hi {
                k += 1;
                continue;
            }
            break;
        }
        let scaled = a.mul(&ten.pow(digits as i64 - k).unwrap());
        let int = scaled.num.magnitude() / scaled.den.magnitude();
        let s = int.to_string();
        let (head, tail) = s.split_at(1);
        let sign = if self.is_negative() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{head}e{k}")
        } else {
            format!("{sign}{head}.{tail}e{k}")
        }
    }

    /// Plain decimal with `digits` fractional digits, truncated toward zero.
    pub fn to_fixed_truncated(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = (self.num.abs() * &scale) / &self.den;
        let mut s = scaled.to_string();
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        let (i, f) = s.split_at(s.len() - digits);
        let sign = if self.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{i}")
        } else {
            format!("{sign}{i}.{f}")
        }
    }
}

/// m * 2^e without intermediate overflow for moderately out-of-range e.
fn scale_pow2(m: f64, e: i64) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for ExactRational {
    type Err = ExactError;

    /// Accepts `p/q`, integers and decimals with an optional exponent
    /// (`333.74`, `6.626070150e-34`). Decimals are parsed exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ExactError::Parse(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            return Self::new(n, d).map_err(|_| err());
        }
        let (body, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
            None => (t, 0),
        };
        let (neg, body) = match body.as_bytes().first() {
            Some(b'-') => (true, &body[1..]),
            Some(b'+') => (false, &body[1..]),
            _ => (false, body),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        if ip.is_empty() && fp.is_empty() {
            return Err(err());
        }
        if !ip.bytes().chain(fp.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{ip}{fp}");
        let mut num: BigInt = digits.parse().map_err(|_| err())?;
        if neg {
            num = -num;
        }
        let scale = exp - fp.len() as i64;
        let ten = Self::from_integer(10);
        Ok(Self::from_integer(num).mul(&ten.pow(scale).map_err(|_| err())?))
    }
}

impl From<i64> for ExactRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}
