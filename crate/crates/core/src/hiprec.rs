//! Multi-precision dyadic arithmetic and interval evaluation of exp, ln and sin.
//!
//! Every evaluator returns an [`Enclosure`]: a pair of dyadics guaranteed to
//! bracket the true value. Callers round both ends and accept the result when
//! they agree.

use std::cmp::Ordering;
use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::ExactRational;
use crate::float::UnboundedFloat;

/// `m * 2^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub m: BigInt,
    pub e: i64,
}

/// Closed interval `[lo, hi]` containing the true value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Enclosure {
    pub fn exact(d: Dyadic) -> Self {
        Enclosure { lo: d.clone(), hi: d }
    }

    /// `[y - |y| 2^-rel, y + |y| 2^-rel]`.
    pub fn around(y: Dyadic, rel: u32) -> Self {
        let r = Dyadic { m: y.m.abs(), e: y.e - rel as i64 };
        Enclosure { lo: y.sub(&r), hi: y.add(&r) }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Dyadic {
        let s = self.lo.add(&self.hi);
        Dyadic { m: s.m, e: s.e - 1 }
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn one() -> Self {
        Dyadic { m: BigInt::one(), e: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic { m: BigInt::from(v), e: 0 }
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic { m: BigInt::one(), e }
    }

    /// Exact value of a float, ignoring any pending rest bits.
    pub fn from_float(v: &UnboundedFloat) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        let m = BigInt::from(v.mantissa());
        let m = if v.is_negative() { -m } else { m };
        Dyadic { m, e: v.exponent() - v.fraction_size() as i64 }
    }

    /// `None` when the denominator is not a power of two.
    pub fn from_rational(x: &ExactRational) -> Option<Self> {
        if !x.is_dyadic() {
            return None;
        }
        let tz = x.denom().trailing_zeros().unwrap_or(0);
        Some(Dyadic { m: x.numer().clone(), e: -(tz as i64) })
    }

    pub fn to_rational(&self) -> ExactRational {
        ExactRational::from_dyadic(self.m.clone(), self.e)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.sign() == Sign::Minus
    }

    pub fn bits(&self) -> u64 {
        self.m.bits()
    }

    /// `floor(log2 |x|) + 1`, the position just above the leading bit.
    pub fn mag(&self) -> i64 {
        self.m.bits() as i64 + self.e
    }

    pub fn neg(&self) -> Self {
        Dyadic { m: -&self.m, e: self.e }
    }

    pub fn abs(&self) -> Self {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    pub fn shl(&self, k: i64) -> Self {
        Dyadic { m: self.m.clone(), e: self.e + k }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &o.m << (o.e - e) as usize;
        Dyadic { m: a + b, e }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Dyadic { m: &self.m * &o.m, e: self.e + o.e }
    }

    /// Drops low bits so at most `p` significant bits remain (toward zero).
    pub fn trunc(mut self, p: u32) -> Self {
        let b = self.m.bits();
        if b > p as u64 {
            let d = b - p as u64;
            let neg = self.is_negative();
            let mut a = self.m.abs() >> d as usize;
            if neg {
                a = -a;
            }
            self.m = a;
            self.e += d as i64;
        }
        self
    }

    /// Quotient with at least `p` significant bits, truncated.
    pub fn div(&self, o: &Self, p: u32) -> Self {
        assert!(!o.is_zero(), "dyadic division by zero");
        let shift = (p as i64 + o.bits() as i64 - self.bits() as i64 + 1).max(0);
        let num = &self.m << shift as usize;
        Dyadic { m: num / &o.m, e: self.e - o.e - shift }
    }

    pub fn div_small(&self, k: u64, p: u32) -> Self {
        self.div(&Dyadic { m: BigInt::from(k), e: 0 }, p)
    }

    /// Nearest integer, ties away from zero.
    pub fn round_int(&self) -> BigInt {
        if self.e >= 0 {
            return &self.m << self.e as usize;
        }
        let d = (-self.e) as usize;
        let a = self.m.abs();
        let r = (a + (BigInt::one() << (d - 1))) >> d;
        if self.is_negative() {
            -r
        } else {
            r
        }
    }

    pub fn cmp_value(&self, o: &Self) -> Ordering {
        self.sub(o).m.sign().cmp(&Sign::NoSign)
    }

    pub fn to_f64(&self) -> f64 {
        let t = self.clone().trunc(60);
        let m = t.m.to_f64().unwrap_or(0.0);
        if t.e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if t.e < -2200 {
            return 0.0 * m.signum();
        }
        // two steps keep each scale factor finite and normal
        let h = t.e / 2;
        m * 2f64.powi(h as i32) * 2f64.powi((t.e - h) as i32)
    }

    /// Float with `fs` fraction bits; bits beyond the 120-bit window collapse
    /// into the sticky flag.
    pub fn to_float(&self, fs: u32) -> UnboundedFloat {
        if self.is_zero() {
            return UnboundedFloat::zero(false, fs);
        }
        let neg = self.is_negative();
        let a = self.m.abs();
        let b = a.bits();
        if b > 120 {
            let d = b - 120;
            let hi = (&a >> d as usize).to_u128().unwrap();
            let sticky = a.trailing_zeros().unwrap_or(0) < d;
            UnboundedFloat::from_scaled_inexact(neg, hi, self.e + d as i64, fs, sticky)
        } else {
            UnboundedFloat::from_scaled(neg, a.to_u128().unwrap(), self.e, fs)
        }
    }
}

/// Fixed-point `sum 1/((2i+1) q^(2i+1))` scaled by `2^scale`.
fn atanh_inv(q: u64, scale: u32) -> BigInt {
    let one = BigInt::one() << scale as usize;
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut pw = &one / &q;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !pw.is_zero() {
        sum += &pw / k;
        pw /= &q2;
        k += 2;
    }
    sum
}

fn atan_inv(q: u64, scale: u32) -> BigInt {
    let one = BigInt::one() << scale as usize;
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut pw = &one / &q;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    let mut plus = true;
    while !pw.is_zero() {
        if plus {
            sum += &pw / k;
        } else {
            sum -= &pw / k;
        }
        plus = !plus;
        pw /= &q2;
        k += 2;
    }
    sum
}

struct ConstCache {
    prec: u32,
    value: Dyadic,
}

static LN2: Mutex<Option<ConstCache>> = Mutex::new(None);
static PI: Mutex<Option<ConstCache>> = Mutex::new(None);

fn cached(cell: &Mutex<Option<ConstCache>>, p: u32, make: fn(u32) -> Dyadic) -> Dyadic {
    let mut g = cell.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(c) = g.as_ref() {
        if c.prec >= p {
            return c.value.clone().trunc(p + 2);
        }
    }
    let p2 = p.max(256) + p / 4;
    let value = make(p2);
    *g = Some(ConstCache { prec: p2, value: value.clone() });
    value.trunc(p + 2)
}

fn make_ln2(p: u32) -> Dyadic {
    let scale = p + 32;
    Dyadic { m: atanh_inv(3, scale) << 1usize, e: -(scale as i64) }
}

fn make_pi(p: u32) -> Dyadic {
    let scale = p + 32;
    let m = atan_inv(5, scale) * 16 - atan_inv(239, scale) * 4;
    Dyadic { m, e: -(scale as i64) }
}

/// ln 2 with relative error below `2^-p`.
pub fn ln2(p: u32) -> Dyadic {
    cached(&LN2, p, make_ln2)
}

/// π with relative error below `2^-p`.
pub fn pi(p: u32) -> Dyadic {
    cached(&PI, p, make_pi)
}

/// Saturation point for exponents; keeps i64 arithmetic clear of overflow.
const EXP_LIMIT: i64 = 1 << 61;

/// exp(x) approximated with relative error below `2^-(p-24)`.
fn exp_approx(x: &Dyadic, p: u32) -> Dyadic {
    let lx = x.mag().max(0);
    let l = ln2(p + lx as u32 + 16);
    let k = x.div(&l, lx as u32 + 8).round_int();
    let r = x.sub(&l.mul(&Dyadic { m: k.clone(), e: 0 })).trunc(p + 8);
    const HALVINGS: i64 = 12;
    let r = r.shl(-HALVINGS);
    let mut sum = Dyadic::one();
    let mut term = Dyadic::one();
    let mut i = 1u64;
    loop {
        term = term.mul(&r).div_small(i, p + 8).trunc(p + 8);
        if term.is_zero() || term.mag() < -(p as i64) - 8 {
            break;
        }
        sum = sum.add(&term).trunc(p + 8);
        i += 1;
    }
    for _ in 0..HALVINGS {
        sum = sum.mul(&sum).trunc(p + 8);
    }
    sum.shl(k.to_i64().expect("exp reduction index"))
}

/// Encloses e^x with relative width about `2^-t`.
pub fn exp_enclosure(x: &Dyadic, t: u32) -> Enclosure {
    if x.is_zero() {
        return Enclosure::exact(Dyadic::one());
    }
    let lx = x.mag();
    if lx > 62 {
        let e = if x.is_negative() { -EXP_LIMIT } else { EXP_LIMIT };
        return Enclosure::exact(Dyadic::pow2(e));
    }
    if lx < -(t as i64 / 2) - 2 {
        // 1 + x + x^2/4 < e^x < 1 + x + x^2 for tiny x
        let base = Dyadic::one().add(x);
        let x2 = x.mul(x);
        return Enclosure { lo: base.add(&x2.shl(-2)), hi: base.add(&x2) };
    }
    let p = t + 40;
    Enclosure::around(exp_approx(x, p), t + 8)
}

/// ln(x) for x > 0, relative error below `2^-(p-16)`.
fn ln_approx(x: &Dyadic, p: u32) -> Dyadic {
    let mut k = x.mag() - 1;
    let mut y = x.shl(-k);
    // y in [1,2); fold [1.5,2) down to [0.75,1)
    if y.cmp_value(&Dyadic { m: BigInt::from(3), e: -1 }) != Ordering::Less {
        k += 1;
        y = y.shl(-1);
    }
    let num = y.sub(&Dyadic::one());
    let mut sum = Dyadic::zero();
    if !num.is_zero() {
        let den = y.add(&Dyadic::one());
        let t = num.div(&den, p + 8);
        let t2 = t.mul(&t).trunc(p + 8);
        let mut pw = t.clone();
        sum = t;
        let mut i = 3u64;
        loop {
            pw = pw.mul(&t2).trunc(p + 8);
            let term = pw.div_small(i, p + 8);
            if term.is_zero() || term.mag() < sum.mag() - p as i64 - 8 {
                break;
            }
            sum = sum.add(&term).trunc(p + 8);
            i += 2;
        }
        sum = sum.shl(1);
    }
    if k != 0 {
        let kb = 64 - k.unsigned_abs().leading_zeros();
        let l = ln2(p + kb + 8);
        sum = sum.add(&l.mul(&Dyadic::from_i64(k))).trunc(p + 8);
    }
    sum
}

/// Encloses ln(x) for x > 0.
pub fn ln_enclosure(x: &Dyadic, t: u32) -> Enclosure {
    assert!(!x.is_zero() && !x.is_negative(), "ln of nonpositive");
    if *x == Dyadic::one() || (x.m.is_one() && x.e == 0) {
        return Enclosure::exact(Dyadic::zero());
    }
    let p = t + 40;
    Enclosure::around(ln_approx(x, p), t + 8)
}

fn sin_series(r: &Dyadic, p: u32) -> Dyadic {
    let r2 = r.mul(r).trunc(p + 8);
    let mut term = r.clone();
    let mut sum = r.clone();
    let mut i = 2u64;
    loop {
        term = term.mul(&r2).div_small(i * (i + 1), p + 8).neg();
        if term.is_zero() || term.mag() < sum.mag() - p as i64 - 8 {
            break;
        }
        sum = sum.add(&term).trunc(p + 8);
        i += 2;
    }
    sum
}

fn cos_series(r: &Dyadic, p: u32) -> Dyadic {
    let r2 = r.mul(r).trunc(p + 8);
    let mut term = Dyadic::one();
    let mut sum = Dyadic::one();
    let mut i = 1u64;
    loop {
        term = term.mul(&r2).div_small(i * (i + 1), p + 8).neg();
        if term.is_zero() || term.mag() < -(p as i64) - 8 {
            break;
        }
        sum = sum.add(&term).trunc(p + 8);
        i += 2;
    }
    sum
}

/// Encloses sin(x).
pub fn sin_enclosure(x: &Dyadic, t: u32) -> Enclosure {
    if x.is_zero() {
        return Enclosure::exact(Dyadic::zero());
    }
    if x.is_negative() {
        return -sin_enclosure(&x.neg(), t);
    }
    let lx = x.mag();
    if lx < -(t as i64 / 2) - 2 {
        // x - x^3/4 < sin x < x - x^3/8 for tiny x
        let x3 = x.mul(x).mul(x);
        return Enclosure { lo: x.sub(&x3.shl(-2)), hi: x.sub(&x3.shl(-3)) };
    }
    let p = t + 40;
    let extra = lx.max(0) as u32;
    let half_pi = pi(p + extra + 16).shl(-1);
    let n = x.div(&half_pi, extra + 8).round_int();
    let mut r = x.sub(&half_pi.mul(&Dyadic { m: n.clone(), e: 0 }));
    // cancellation loses bits when x sits near a multiple of pi/2
    let lost = (lx.max(0) - r.mag()).max(0) as u32;
    if lost > 0 && !n.is_zero() {
        let half_pi = pi(p + extra + lost + 16).shl(-1);
        r = x.sub(&half_pi.mul(&Dyadic { m: n.clone(), e: 0 }));
    }
    Enclosure::around(quadrant(&r.trunc(p + 8), &n, p), t + 8)
}

fn quadrant(r: &Dyadic, n: &BigInt, p: u32) -> Dyadic {
    let q = n.mod_floor(&BigInt::from(4)).to_u8().unwrap();
    match q {
        0 => sin_series(r, p),
        1 => cos_series(r, p),
        2 => sin_series(r, p).neg(),
        _ => cos_series(r, p).neg(),
    }
}

/// Encloses x^y for x > 0 through exp(y ln x).
pub fn pow_enclosure(x: &Dyadic, y: &Dyadic, t: u32) -> Enclosure {
    assert!(!x.is_zero() && !x.is_negative(), "pow base must be positive");
    if y.is_zero() || *x == Dyadic::one() {
        return Enclosure::exact(Dyadic::one());
    }
    let grow = (y.mag().max(0) + (x.mag().unsigned_abs() as i64 + 1).ilog2() as i64 + 1) as u32;
    let p = t + 48 + grow;
    let z = ln_approx(x, p).mul(y).trunc(p);
    if z.mag() > 62 {
        let e = if z.is_negative() { -EXP_LIMIT } else { EXP_LIMIT };
        return Enclosure::exact(Dyadic::pow2(e));
    }
    Enclosure::around(exp_approx(&z, t + 40), t + 8)
}

impl std::ops::Neg for Enclosure {
    type Output = Self;

    fn neg(self) -> Self {
        Enclosure { lo: self.hi.neg(), hi: self.lo.neg() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(d: &Dyadic, want: f64, rel: f64) -> bool {
        ((d.to_f64() - want) / want).abs() < rel
    }

    #[test]
    fn constants_match_f64() {
        assert!(close(&ln2(200), std::f64::consts::LN_2, 1e-15));
        assert!(close(&pi(300), std::f64::consts::PI, 1e-15));
        // tightening precision past the cache still agrees
        assert!(close(&pi(5000), std::f64::consts::PI, 1e-15));
    }

    #[test]
    fn pi_digits() {
        let p = pi(400).to_rational();
        assert_eq!(p.to_sci_truncated(60), "3.141592653589793238462643383279502884197169399375105820974944e0");
    }

    #[test]
    fn enclosures_contain_f64_values() {
        for &v in &[0.5f64, -3.25, 10.0, 100.0, 1e-3, -700.0, 2.0, 1.5] {
            let x = Dyadic::from_float(&UnboundedFloat::from_rational(
                &ExactRational::from_dyadic(BigInt::from((v * 1024.0) as i64), -10),
                40,
            ));
            let xv = x.to_f64();
            let e = exp_enclosure(&x, 60);
            assert!(e.lo.to_f64() <= xv.exp() * (1.0 + 1e-14) && e.hi.to_f64() >= xv.exp() * (1.0 - 1e-14));
            assert!(close(&e.midpoint(), xv.exp(), 1e-14), "exp({xv})");
            let s = sin_enclosure(&x, 60);
            assert!((s.midpoint().to_f64() - xv.sin()).abs() < 1e-13, "sin({xv})");
            if xv > 0.0 {
                let l = ln_enclosure(&x, 60);
                assert!((l.midpoint().to_f64() - xv.ln()).abs() < 1e-14, "ln({xv})");
            }
        }
    }

    #[test]
    fn sin_of_large_argument() {
        // sin(2^100) = -0.87218360541826730978...
        let s = sin_enclosure(&Dyadic::pow2(100), 60);
        assert!((s.midpoint().to_f64() + 0.872_183_605_418_267_3).abs() < 1e-14);
    }

    #[test]
    fn tiny_arguments_bracket() {
        let x = Dyadic::pow2(-400);
        let s = sin_enclosure(&x, 60);
        assert_eq!(s.hi.cmp_value(&x), Ordering::Less);
        assert_eq!(s.lo.cmp_value(&x.sub(&Dyadic::pow2(-1198))), Ordering::Greater);
        let e = exp_enclosure(&x.neg(), 60);
        assert_eq!(e.hi.cmp_value(&Dyadic::one()), Ordering::Less);
    }

    #[test]
    fn pow_matches_f64() {
        let x = Dyadic { m: BigInt::from(3), e: -1 };
        let y = Dyadic { m: BigInt::from(5), e: -2 };
        let r = pow_enclosure(&x, &y, 60).midpoint();
        assert!(close(&r, 1.5f64.powf(1.25), 1e-14));
    }
}
