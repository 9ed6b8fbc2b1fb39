//! Sign-magnitude binary floating point with an unbounded exponent.
//!
//! Every operation leaves a mantissa of exactly `fs + 1` bits with the top bit
//! set and keeps whatever it produced beyond that precision in [`RestBits`],
//! so a later rounding step to any narrower fraction sees the exact guard and
//! sticky information.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact::{ArithOp, ExactRational};

/// Widest fraction the engine carries. Products of two mantissas must fit in
/// 128 bits.
pub const MAX_FRACTION_SIZE: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoundingMode {
    /// Toward zero (truncation).
    RZ,
    /// To nearest, ties to even.
    RE,
}

impl FromStr for RoundingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "RZ" | "rz" => Ok(RoundingMode::RZ),
            "RE" | "re" => Ok(RoundingMode::RE),
            other => Err(format!("unknown rounding mode {other:?}")),
        }
    }
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoundingMode::RZ => "RZ",
            RoundingMode::RE => "RE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FloatError {
    #[error("undefined")]
    Undefined,
}

/// Bits below the last mantissa bit, most significant first.
///
/// Up to 64 bits are kept explicitly; anything further is folded into a
/// sticky flag (set iff some discarded bit was 1).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RestBits {
    bits: u64,
    len: u8,
    sticky: bool,
}

impl RestBits {
    pub const EMPTY: RestBits = RestBits { bits: 0, len: 0, sticky: false };

    pub fn from_bits(bits: &[bool]) -> Self {
        assert!(bits.len() <= 64);
        let mut v = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v |= 1 << (63 - i);
            }
        }
        RestBits { bits: v, len: bits.len() as u8, sticky: false }
    }

    /// `len` explicit bits left-aligned in `bits`.
    fn aligned(bits: u64, len: u32, sticky: bool) -> Self {
        debug_assert!(len <= 64);
        let bits = if len == 0 { 0 } else { bits & (u64::MAX << (64 - len)) };
        RestBits { bits, len: len as u8, sticky }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0 && !self.sticky
    }

    /// No information was discarded: every kept bit is 0 and nothing is sticky.
    pub fn is_exact(&self) -> bool {
        self.bits == 0 && !self.sticky
    }

    pub fn sticky(&self) -> bool {
        self.sticky
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bits >> (63 - i) & 1 == 1)
    }

    pub fn to_vec(&self) -> Vec<bool> {
        self.iter().collect()
    }
}

/// Normalized float with unbounded exponent.
///
/// Value: `(-1)^neg * mant * 2^(exp - fs)`, plus the rest bits below the
/// mantissa. `mant` has exactly `fs + 1` bits unless the value is zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnboundedFloat {
    neg: bool,
    exp: i64,
    mant: u64,
    fs: u32,
    rest: RestBits,
}

impl fmt::Debug for UnboundedFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.neg { "-" } else { "+" };
        if self.is_zero() {
            return write!(f, "{s}0");
        }
        let m = format!("{:0w$b}", self.mant, w = self.fs as usize + 1);
        write!(f, "{s}{}.{}b*2^{} rest={:?}", &m[..1], &m[1..], self.exp, self.rest)
    }
}

impl UnboundedFloat {
    pub fn zero(neg: bool, fs: u32) -> Self {
        UnboundedFloat { neg, exp: 0, mant: 0, fs, rest: RestBits::EMPTY }
    }

    /// `(-1)^neg * mant * 2^scale`, normalized to `fs` fraction bits.
    ///
    /// Bits of `mant` below the mantissa go to the rest bits.
    pub fn from_scaled(neg: bool, mant: u128, scale: i64, fs: u32) -> Self {
        Self::normalize(neg, mant, scale, fs, false)
    }

    /// Value with an explicit leading 1: `1.f * 2^exp` where `frac < 2^fs`.
    pub fn from_fields(neg: bool, exp: i64, frac: u64, fs: u32) -> Self {
        debug_assert!(fs <= MAX_FRACTION_SIZE && (fs == 64 || frac >> fs == 0));
        UnboundedFloat { neg, exp, mant: (1u64 << fs) | frac, fs, rest: RestBits::EMPTY }
    }

    /// Like [`from_scaled`](Self::from_scaled) but with a sticky flag for
    /// nonzero bits below `mant`.
    pub fn from_scaled_inexact(neg: bool, mant: u128, scale: i64, fs: u32, sticky: bool) -> Self {
        Self::normalize(neg, mant, scale, fs, sticky)
    }

    fn normalize(neg: bool, s: u128, scale: i64, fs: u32, sticky: bool) -> Self {
        assert!(fs <= MAX_FRACTION_SIZE, "fraction size {fs} exceeds {MAX_FRACTION_SIZE}");
        if s == 0 {
            debug_assert!(!sticky);
            return Self::zero(neg, fs);
        }
        let p = 128 - s.leading_zeros();
        let exp = scale + p as i64 - 1;
        let keep = fs + 1;
        if p > keep {
            let d = p - keep;
            let mant = (s >> d) as u64;
            let tail = s & ((1u128 << d) - 1);
            let rest = if d <= 64 {
                RestBits::aligned((tail << (64 - d)) as u64, d, sticky)
            } else {
                let top = (tail >> (d - 64)) as u64;
                let low = tail & ((1u128 << (d - 64)) - 1);
                RestBits::aligned(top, 64, sticky || low != 0)
            };
            UnboundedFloat { neg, exp, mant, fs, rest }
        } else {
            let mant = (s << (keep - p)) as u64;
            UnboundedFloat { neg, exp, mant, fs, rest: RestBits::aligned(0, 0, sticky) }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    /// Binary exponent of the leading bit.
    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn mantissa(&self) -> u64 {
        self.mant
    }

    pub fn fraction_size(&self) -> u32 {
        self.fs
    }

    pub fn rest(&self) -> &RestBits {
        &self.rest
    }

    /// The mantissa bits below the hidden one.
    pub fn fraction(&self) -> u64 {
        if self.is_zero() {
            0
        } else {
            self.mant & ((1u64 << self.fs) - 1)
        }
    }

    pub fn is_exact(&self) -> bool {
        self.rest.is_exact()
    }

    pub fn negate(mut self) -> Self {
        self.neg = !self.neg;
        self
    }

    pub fn abs(mut self) -> Self {
        self.neg = false;
        self
    }

    pub fn with_sign(mut self, neg: bool) -> Self {
        self.neg = neg;
        self
    }

    /// Re-express with `fs` fraction bits. Narrowing moves dropped mantissa bits
    /// in front of the rest bits.
    pub fn with_fraction_size(self, fs: u32) -> Self {
        if fs == self.fs {
            return self;
        }
        if self.is_zero() {
            return Self::zero(self.neg, fs);
        }
        let wide = ((self.mant as u128) << 64) | self.rest.bits as u128;
        let r = Self::normalize(self.neg, wide, self.exp - self.fs as i64 - 64, fs, self.rest.sticky);
        debug_assert_eq!(r.exp, self.exp);
        r
    }

    /// Mantissa followed by the 64 explicit rest bits, as one integer.
    /// `|value| / 2^exponent` in `[1, 2)` from mantissa and explicit rest bits.
    pub fn significand_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.wide() as f64 / 2f64.powi(self.fs as i32 + 64)
    }

    /// Mantissa followed by the 64 explicit rest bits.
    pub fn significand_wide(&self) -> u128 {
        self.wide()
    }

    fn wide(&self) -> u128 {
        ((self.mant as u128) << 64) | self.rest.bits as u128
    }

    /// Rounds `|self| / 2^ulp_exp` to an integer. Returns the integer and whether
    /// any nonzero information was discarded.
    pub fn round_to_ulp(&self, ulp_exp: i64, mode: RoundingMode) -> (u128, bool) {
        if self.is_zero() {
            return (0, false);
        }
        let w = self.wide();
        let sticky_in = self.rest.sticky;
        // value = w * 2^(exp - fs - 64)
        let s = ulp_exp - (self.exp - self.fs as i64 - 64);
        if s <= 0 {
            let sh = (-s) as u32;
            assert!(sh + (128 - w.leading_zeros()) <= 128, "rounding position beyond 128 bits");
            return (w << sh, sticky_in);
        }
        let (q, guard, low) = if s >= 129 {
            (0, false, w != 0)
        } else {
            let s = s as u32;
            let q = if s >= 128 { 0 } else { w >> s };
            let guard = (w >> (s - 1)) & 1 == 1;
            let low = if s >= 2 { w & ((1u128 << (s - 1)) - 1) != 0 } else { false };
            (q, guard, low)
        };
        let sticky = low || sticky_in;
        let up = match mode {
            RoundingMode::RZ => false,
            RoundingMode::RE => guard && (sticky || q & 1 == 1),
        };
        (q + up as u128, guard || sticky)
    }

    /// Rounds to `target_fs` fraction bits; the result has empty rest bits.
    pub fn round_to(&self, target_fs: u32, mode: RoundingMode) -> Self {
        if self.is_zero() {
            return Self::zero(self.neg, target_fs);
        }
        let (q, _) = self.round_to_ulp(self.exp - target_fs as i64, mode);
        let r = Self::from_scaled(self.neg, q, self.exp - target_fs as i64, target_fs);
        debug_assert!(r.rest.is_exact());
        UnboundedFloat { rest: RestBits::EMPTY, ..r }
    }

    pub fn from_rational(x: &ExactRational, fs: u32) -> Self {
        if x.is_zero() {
            return Self::zero(false, fs);
        }
        let e = x.floor_log2().unwrap();
        // floor(|x| * 2^(fs + 64 - e)) carries the mantissa and 64 rest bits
        let shift = fs as i64 + 64 - e;
        let scaled = x.abs().mul(&ExactRational::pow2(shift));
        let (q, r) = num_integer::Integer::div_rem(scaled.numer(), scaled.denom());
        let q = q.to_u128().expect("mantissa window");
        Self::normalize(x.is_negative(), q, -shift, fs, r != BigInt::from(0))
    }

    /// Exact value; panics if rest bits carry information.
    pub fn to_rational(&self) -> ExactRational {
        assert!(self.rest.is_exact(), "to_rational on a value with pending rest bits");
        self.to_rational_truncated()
    }

    /// Exact value of mantissa and explicit rest bits, ignoring sticky.
    pub fn to_rational_truncated(&self) -> ExactRational {
        if self.is_zero() {
            return ExactRational::zero();
        }
        let v = ExactRational::from_dyadic(BigInt::from(self.wide()), self.exp - self.fs as i64 - 64);
        if self.neg {
            v.neg()
        } else {
            v
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return if self.neg { -0.0 } else { 0.0 };
        }
        let m = self.mant as f64 / (1u64 << self.fs) as f64;
        let v = if self.exp.abs() < 1000 {
            m * 2f64.powi(self.exp as i32)
        } else if self.exp > 0 {
            f64::INFINITY
        } else {
            0.0
        };
        if self.neg {
            -v
        } else {
            v
        }
    }

    /// log2 |x| (without rest bits); `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.exp as f64 + (self.mant as f64 / (1u64 << self.fs) as f64).log2()
    }

    /// Compare magnitudes of two exact (rest-free) values.
    pub fn cmp_abs(&self, o: &Self) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        self.exp.cmp(&o.exp).then_with(|| {
            let fs = self.fs.max(o.fs);
            (self.mant << (fs - self.fs)).cmp(&(o.mant << (fs - o.fs)))
        })
    }

    /// Signed value comparison of rest-free values; zeros compare equal.
    pub fn cmp_value(&self, o: &Self) -> Ordering {
        let sa = if self.is_zero() {
            0
        } else if self.neg {
            -1
        } else {
            1
        };
        let sb = if o.is_zero() {
            0
        } else if o.neg {
            -1
        } else {
            1
        };
        if sa != sb {
            return sa.cmp(&sb);
        }
        match sa {
            0 => Ordering::Equal,
            1 => self.cmp_abs(o),
            _ => o.cmp_abs(self),
        }
    }
}

/// Four-function arithmetic at `fs` working fraction bits.
///
/// Operands are re-expressed at `fs` first. All bits produced beyond `fs` are
/// kept in the result's rest bits; division and square root produce two extra
/// quotient bits plus a sticky flag for any nonzero remainder.
pub fn fc_arith(op: ArithOp, a: &UnboundedFloat, b: &UnboundedFloat, fs: u32) -> Result<UnboundedFloat, FloatError> {
    let a = a.with_fraction_size(fs);
    let b = b.with_fraction_size(fs);
    debug_assert!(a.rest.is_exact() && b.rest.is_exact());
    match op {
        ArithOp::Add => Ok(add(&a, &b, fs)),
        ArithOp::Sub => Ok(add(&a, &b.negate(), fs)),
        ArithOp::Mul => Ok(mul(&a, &b, fs)),
        ArithOp::Div => div(&a, &b, fs),
    }
}

fn add(a: &UnboundedFloat, b: &UnboundedFloat, fs: u32) -> UnboundedFloat {
    if a.is_zero() && b.is_zero() {
        return UnboundedFloat::zero(a.neg && b.neg, fs);
    }
    if a.is_zero() {
        return *b;
    }
    if b.is_zero() {
        return *a;
    }
    let (big, small) = if a.cmp_abs(b) == Ordering::Less { (b, a) } else { (a, b) };
    let shift = (big.exp - small.exp) as u64;
    let big_w = (big.mant as u128) << 64;
    let small_w = (small.mant as u128) << 64;
    let (aligned, sticky) = if shift >= 128 {
        (0, true)
    } else {
        let s = shift as u32;
        let lost = if s == 0 { 0 } else { small_w << (128 - s) };
        (small_w >> s, lost != 0)
    };
    let scale = big.exp - fs as i64 - 64;
    if big.neg == small.neg {
        UnboundedFloat::normalize(big.neg, big_w + aligned, scale, fs, sticky)
    } else {
        let mut d = big_w - aligned;
        if sticky {
            // true difference lies strictly between d - 1 and d
            d -= 1;
        }
        if d == 0 {
            return UnboundedFloat::zero(false, fs);
        }
        UnboundedFloat::normalize(big.neg, d, scale, fs, sticky)
    }
}

fn mul(a: &UnboundedFloat, b: &UnboundedFloat, fs: u32) -> UnboundedFloat {
    let neg = a.neg != b.neg;
    if a.is_zero() || b.is_zero() {
        return UnboundedFloat::zero(neg, fs);
    }
    let p = a.mant as u128 * b.mant as u128;
    UnboundedFloat::normalize(neg, p, a.exp + b.exp - 2 * fs as i64, fs, false)
}

fn div(a: &UnboundedFloat, b: &UnboundedFloat, fs: u32) -> Result<UnboundedFloat, FloatError> {
    if b.is_zero() {
        return Err(FloatError::Undefined);
    }
    let neg = a.neg != b.neg;
    if a.is_zero() {
        return Ok(UnboundedFloat::zero(neg, fs));
    }
    let k = fs + 3;
    let n = (a.mant as u128) << k;
    let d = b.mant as u128;
    let (q, r) = (n / d, n % d);
    Ok(UnboundedFloat::normalize(neg, q, a.exp - b.exp - k as i64, fs, r != 0))
}

/// Square root at `fs` working fraction bits with one guard bit and sticky.
pub fn fc_sqrt(a: &UnboundedFloat, fs: u32) -> Result<UnboundedFloat, FloatError> {
    let a = a.with_fraction_size(fs);
    if a.is_zero() {
        return Ok(a);
    }
    if a.neg {
        return Err(FloatError::Undefined);
    }
    // value = mant * 2^t; scale mant by 2^k so that t - k is even
    let t = a.exp - fs as i64;
    let k = if (t - (fs as i64 + 2)).rem_euclid(2) == 0 { fs + 2 } else { fs + 3 };
    let r = (a.mant as u128) << k;
    let root = isqrt_u128(r);
    let sticky = root * root != r;
    Ok(UnboundedFloat::normalize(false, root, (t - k as i64) / 2, fs, sticky))
}

/// Bitwise (digit-by-digit) integer square root.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut bit = 1u128 << ((127 - n.leading_zeros()) & !1);
    let mut x = n;
    let mut res = 0u128;
    while bit != 0 {
        if x >= res + bit {
            x -= res + bit;
            res = (res >> 1) + bit;
        } else {
            res >>= 1;
        }
        bit >>= 2;
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(v: &str, fs: u32) -> UnboundedFloat {
        UnboundedFloat::from_rational(&v.parse().unwrap(), fs)
    }

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn add_equal_powers() {
        let one = UnboundedFloat::from_fields(false, 0, 0, 4);
        let r = fc_arith(ArithOp::Add, &one, &one, 4).unwrap();
        assert_eq!(r.exponent(), 1);
        assert_eq!(r.fraction(), 0);
        assert!(r.rest().is_exact());
    }

    #[test]
    fn mul_keeps_rest_bits() {
        // 1.1b*2^3 * 1.1b*2^-1 = 10.01b*2^2 = 1.001b*2^3
        let a = UnboundedFloat::from_fields(false, 3, 1, 1);
        let b = UnboundedFloat::from_fields(false, -1, 1, 1);
        let r = fc_arith(ArithOp::Mul, &a, &b, 1).unwrap();
        assert_eq!(r.exponent(), 3);
        assert_eq!(r.mantissa(), 0b10);
        assert_eq!(r.rest().to_vec(), vec![false, true]);
        // exact rational product agrees
        let exact = a.to_rational().mul(&b.to_rational());
        assert_eq!(r.to_rational_truncated(), exact);
    }

    #[test]
    fn sub_self_is_positive_zero() {
        let x = f("-13/8", 10);
        let r = fc_arith(ArithOp::Sub, &x, &x, 10).unwrap();
        assert!(r.is_zero() && !r.is_negative());
        let pz = UnboundedFloat::zero(false, 10);
        let nz = UnboundedFloat::zero(true, 10);
        assert!(!fc_arith(ArithOp::Add, &pz, &nz, 10).unwrap().is_negative());
        assert!(fc_arith(ArithOp::Add, &nz, &nz, 10).unwrap().is_negative());
    }

    #[test]
    fn division_by_zero() {
        let x = f("3", 8);
        assert_eq!(fc_arith(ArithOp::Div, &x, &UnboundedFloat::zero(false, 8), 8), Err(FloatError::Undefined));
    }

    #[test]
    fn sqrt_cases() {
        let r = fc_sqrt(&UnboundedFloat::from_fields(false, 4, 0, 6), 6).unwrap();
        assert_eq!((r.exponent(), r.fraction()), (2, 0));
        assert!(r.is_exact());
        assert!(fc_sqrt(&UnboundedFloat::zero(false, 6), 6).unwrap().is_zero());
        assert_eq!(fc_sqrt(&f("-2", 6), 6), Err(FloatError::Undefined));
        // sqrt(2) = 1.0110101000001001111...b
        let r = fc_sqrt(&f("2", 10), 10).unwrap();
        assert_eq!(r.mantissa(), 0b1_0110101000);
        assert!(!r.rest().is_exact());
    }

    #[test]
    fn rounding_ties_and_carry() {
        // 1.1b with rest [1,0,0,0] at fs=1: tie, odd lsb -> round up to 10.0b
        let x = UnboundedFloat {
            rest: RestBits::from_bits(&[true, false, false, false]),
            ..UnboundedFloat::from_fields(false, 0, 1, 1)
        };
        let r = x.round_to(1, RoundingMode::RE);
        assert_eq!((r.exponent(), r.fraction()), (1, 0));
        // 1.0b with rest [1,0]: tie, even lsb -> stays
        let x =
            UnboundedFloat { rest: RestBits::from_bits(&[true, false]), ..UnboundedFloat::from_fields(false, 0, 0, 1) };
        let r = x.round_to(1, RoundingMode::RE);
        assert_eq!((r.exponent(), r.fraction()), (0, 0));
        // 1.111b + guard 1 -> 1.000b * 2^(e+1)
        let x =
            UnboundedFloat { rest: RestBits::from_bits(&[true]), ..UnboundedFloat::from_fields(false, 5, 0b111, 3) };
        let r = x.round_to(3, RoundingMode::RE);
        assert_eq!((r.exponent(), r.fraction()), (6, 0));
        let r = x.round_to(3, RoundingMode::RZ);
        assert_eq!((r.exponent(), r.fraction()), (5, 0b111));
    }

    #[test]
    fn rational_conversions() {
        let h = f("1/2", 8);
        assert_eq!((h.exponent(), h.fraction()), (-1, 0));
        assert!(f("0", 8).is_zero());
        let t = f("1/3", 4);
        assert_eq!((t.exponent(), t.mantissa()), (-2, 0b10101));
        assert!(t.rest().sticky());
        assert_eq!(f("3/2", 1).to_rational(), q("3/2"));
        assert!(f("0", 3).to_rational().is_zero());
        assert_eq!(f("-5/16", 8).to_rational(), q("-5/16"));
    }

    #[test]
    fn isqrt_small() {
        for n in 0u128..2000 {
            let r = isqrt_u128(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        let big = u128::MAX;
        let r = isqrt_u128(big);
        assert_eq!(r, u64::MAX as u128);
    }

    fn arb_float(fs: u32) -> impl Strategy<Value = UnboundedFloat> {
        (any::<bool>(), -300i64..300, 0u64..(1u64 << fs))
            .prop_map(move |(n, e, fr)| UnboundedFloat::from_fields(n, e, fr, fs))
    }

    proptest! {
        #[test]
        fn exactness_detection_is_sound(a in arb_float(20), b in arb_float(20), opi in 0usize..4) {
            let op = ArithOp::ALL[opi];
            let r = fc_arith(op, &a, &b, 20).unwrap();
            let exact = ExactRational::arith(op, &a.to_rational(), &b.to_rational()).unwrap();
            prop_assert_eq!(r.rest().sticky(), r.to_rational_truncated() != exact);
            if r.rest().is_exact() {
                prop_assert_eq!(r.with_fraction_size(20).to_rational(), exact);
            }
            prop_assert!(r.is_zero() || r.mantissa() >> 20 == 1);
        }

        #[test]
        fn rounding_error_bounds(a in arb_float(40), b in arb_float(40), opi in 0usize..4, tfs in 1u32..30) {
            let op = ArithOp::ALL[opi];
            let r = fc_arith(op, &a, &b, 40).unwrap();
            let exact = ExactRational::arith(op, &a.to_rational(), &b.to_rational()).unwrap();
            if exact.is_zero() { return Ok(()); }
            let ulp = ExactRational::pow2(r.exponent() - tfs as i64);
            let re = r.round_to(tfs, RoundingMode::RE).to_rational();
            prop_assert!(re.sub(&exact).abs().mul(&ExactRational::from(2)) <= ulp);
            let rz = r.round_to(tfs, RoundingMode::RZ).to_rational();
            prop_assert!(rz.abs() <= exact.abs());
            prop_assert!(rz.sub(&exact).abs() < ulp);
        }

        #[test]
        fn rounding_is_monotone(a in arb_float(30), b in arb_float(30), tfs in 0u32..20, re in any::<bool>()) {
            let mode = if re { RoundingMode::RE } else { RoundingMode::RZ };
            let (x, y) = if a.cmp_value(&b) == Ordering::Greater { (b, a) } else { (a, b) };
            prop_assert!(x.round_to(tfs, mode).cmp_value(&y.round_to(tfs, mode)) != Ordering::Greater);
        }

        #[test]
        fn from_rational_roundtrip(n in -100_000i64..100_000, e in -40i64..40) {
            let x = ExactRational::from_dyadic(n, e);
            let v = UnboundedFloat::from_rational(&x, 20);
            prop_assert!(v.is_exact());
            prop_assert_eq!(v.to_rational(), x);
        }
    }
}
