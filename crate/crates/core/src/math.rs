//! Arithmetic and elementary functions on encoded patterns, and the decimal
//! accuracy metric.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{ArithOp, ExactRational};
use crate::float::{fc_arith, fc_sqrt, UnboundedFloat};
use crate::formats::{Codec, Kind, Num};
use crate::hiprec::{exp_enclosure, ln_enclosure, pow_enclosure, sin_enclosure, Dyadic, Enclosure};

/// Unary functions available on every format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnaryFn {
    Sqrt,
    /// n-th root, n ≥ 1.
    Root(u32),
    Inverse,
    Exp,
    Ln,
    Sin,
    Pow(ExactRational),
}

impl UnaryFn {
    /// The six functions of the unary sweep.
    pub fn sweep_set() -> Vec<UnaryFn> {
        vec![UnaryFn::Sqrt, UnaryFn::Ln, UnaryFn::Inverse, UnaryFn::Exp, UnaryFn::Sin, UnaryFn::Root(3)]
    }

    pub fn name(&self) -> String {
        match self {
            UnaryFn::Sqrt => "sqrt".into(),
            UnaryFn::Root(3) => "cbrt".into(),
            UnaryFn::Root(n) => format!("root{n}"),
            UnaryFn::Inverse => "inverse".into(),
            UnaryFn::Exp => "exp".into(),
            UnaryFn::Ln => "ln".into(),
            UnaryFn::Sin => "sin".into(),
            UnaryFn::Pow(y) => format!("pow{y}"),
        }
    }
}

impl fmt::Display for UnaryFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for UnaryFn {
    type Err = String;

    /// `sqrt`, `cbrt`, `rootN`, `inverse`, `exp`, `ln`, `sin`, `powY`.
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim().to_ascii_lowercase();
        Ok(match t.as_str() {
            "sqrt" => UnaryFn::Sqrt,
            "cbrt" => UnaryFn::Root(3),
            "inverse" | "inv" | "recip" => UnaryFn::Inverse,
            "exp" => UnaryFn::Exp,
            "ln" | "log" => UnaryFn::Ln,
            "sin" => UnaryFn::Sin,
            _ => {
                if let Some(n) = t.strip_prefix("root") {
                    let n: u32 = n.parse().map_err(|_| format!("bad root degree in '{s}'"))?;
                    if n == 0 {
                        return Err("root degree must be positive".into());
                    }
                    UnaryFn::Root(n)
                } else if let Some(y) = t.strip_prefix("pow") {
                    UnaryFn::Pow(y.parse().map_err(|_| format!("bad exponent in '{s}'"))?)
                } else {
                    return Err(format!("unknown function '{s}'"));
                }
            }
        })
    }
}

fn has_inf(codec: &Codec) -> bool {
    matches!(codec.desc().kind, Kind::Ieee754 { .. } | Kind::FloatP { .. })
}

fn inf_or_error(codec: &Codec, neg: bool) -> u64 {
    if has_inf(codec) {
        codec.encode(&Num::Inf { neg })
    } else {
        codec.error_pattern()
    }
}

fn zero_pattern(codec: &Codec, neg: bool) -> u64 {
    codec.encode(&Num::Zero { neg })
}

/// Arithmetic on decoded operands, returning the encoded result.
pub fn arith_num(codec: &Codec, op: ArithOp, x: &Num, y: &Num) -> u64 {
    if x.is_error() || y.is_error() {
        return codec.error_pattern();
    }
    let err = codec.error_pattern();
    let neg_of = |n: &Num| match n {
        Num::Finite(v) => v.is_negative(),
        Num::Zero { neg } | Num::Inf { neg } => *neg,
        _ => false,
    };
    let (xi, yi) = (matches!(x, Num::Inf { .. }), matches!(y, Num::Inf { .. }));
    if xi || yi {
        let (sx, sy) = (neg_of(x), neg_of(y));
        let is_zero = |n: &Num| matches!(n, Num::Zero { .. });
        return match op {
            ArithOp::Add | ArithOp::Sub => {
                let sy = if op == ArithOp::Sub { !sy } else { sy };
                match (xi, yi) {
                    (true, true) if sx != sy => err,
                    (true, _) => inf_or_error(codec, sx),
                    _ => inf_or_error(codec, sy),
                }
            }
            ArithOp::Mul => {
                if is_zero(x) || is_zero(y) {
                    err
                } else {
                    inf_or_error(codec, sx != sy)
                }
            }
            ArithOp::Div => match (xi, yi) {
                (true, true) => err,
                (true, false) => inf_or_error(codec, sx != sy),
                _ => zero_pattern(codec, sx != sy),
            },
        };
    }
    let fs = codec.work_fs();
    let (a, b) = (x.as_float(fs).unwrap(), y.as_float(fs).unwrap());
    match fc_arith(op, &a, &b, fs) {
        Ok(r) => codec.encode_float(&r),
        Err(_) => {
            // division by zero
            if a.is_zero() {
                err
            } else {
                inf_or_error(codec, a.is_negative() != b.is_negative())
            }
        }
    }
}

/// `a op b` on patterns of one format.
pub fn nrs_arith(codec: &Codec, op: ArithOp, a: u64, b: u64) -> u64 {
    arith_num(codec, op, &codec.decode(a), &codec.decode(b))
}

/// Rounds an enclosure-producing evaluation, widening precision once when
/// the two ends disagree.
fn round_enclosure(codec: &Codec, eval: impl Fn(u32) -> Enclosure) -> u64 {
    let fs = codec.work_fs();
    let mut last = None;
    for t in [fs + 32, fs + 64] {
        let e = eval(t);
        let lo = codec.encode_float(&e.lo.to_float(fs));
        let hi = codec.encode_float(&e.hi.to_float(fs));
        if lo == hi {
            return lo;
        }
        last = Some(e);
    }
    codec.encode_float(&last.unwrap().midpoint().to_float(fs))
}

/// Correctly rounded n-th root of a positive dyadic.
fn root_float(x: &Dyadic, n: u32, fs: u32) -> UnboundedFloat {
    // x = m 2^e; choose s so that e - s is a multiple of n and the root keeps fs + 8 bits
    let want = (fs as i64 + 8) * n as i64;
    let mut s = (want - x.m.bits() as i64).max(0);
    s += (x.e - s).rem_euclid(n as i64);
    let r = &x.m << s as usize;
    let q = r.nth_root(n);
    let sticky = q.pow(n) != r;
    let exp = (x.e - s) / n as i64;
    if sticky {
        // q + 1/2 sits strictly inside (q, q + 1) like the true root, and no
        // rounding boundary at fs bits falls in that open interval
        Dyadic { m: (q << 1usize) | BigInt::from(1), e: exp - 1 }.to_float(fs)
    } else {
        Dyadic { m: q, e: exp }.to_float(fs)
    }
}

/// Evaluates a unary function on a pattern.
pub fn nrs_fun(codec: &Codec, fun: &UnaryFn, a: u64) -> u64 {
    fun_num(codec, fun, &codec.decode(a))
}

/// Evaluates a unary function on a decoded operand.
pub fn fun_num(codec: &Codec, fun: &UnaryFn, x: &Num) -> u64 {
    let err = codec.error_pattern();
    if x.is_error() {
        return err;
    }
    let fs = codec.work_fs();
    let one = || codec.encode_rational(&ExactRational::one());
    match *x {
        Num::Inf { neg } => match fun {
            UnaryFn::Sqrt | UnaryFn::Ln if neg => err,
            UnaryFn::Sqrt | UnaryFn::Ln | UnaryFn::Exp if !neg => inf_or_error(codec, false),
            UnaryFn::Exp => zero_pattern(codec, false),
            UnaryFn::Root(n) if neg && n % 2 == 0 => err,
            UnaryFn::Root(_) => inf_or_error(codec, neg),
            UnaryFn::Inverse => zero_pattern(codec, neg),
            UnaryFn::Sin => err,
            UnaryFn::Pow(y) => {
                if y.is_zero() {
                    one()
                } else if y.is_negative() {
                    zero_pattern(codec, false)
                } else {
                    inf_or_error(codec, neg && y.is_integer() && !(y.numer() % 2u32).is_zero())
                }
            }
            _ => unreachable!(),
        },
        Num::Zero { neg } => match fun {
            UnaryFn::Sqrt | UnaryFn::Root(_) | UnaryFn::Sin => zero_pattern(codec, neg),
            UnaryFn::Inverse => inf_or_error(codec, neg),
            UnaryFn::Exp => one(),
            UnaryFn::Ln => inf_or_error(codec, true),
            UnaryFn::Pow(y) => {
                if y.is_zero() {
                    one()
                } else if y.is_negative() {
                    inf_or_error(codec, false)
                } else {
                    zero_pattern(codec, false)
                }
            }
        },
        Num::Finite(v) => {
            let d = Dyadic::from_float(&v);
            let neg = v.is_negative();
            match fun {
                UnaryFn::Sqrt => match fc_sqrt(&v, fs) {
                    Ok(r) => codec.encode_float(&r),
                    Err(_) => err,
                },
                UnaryFn::Root(n) => {
                    if neg && n % 2 == 0 {
                        return err;
                    }
                    let r = root_float(&d.abs(), *n, fs);
                    codec.encode_float(&if neg { r.negate() } else { r })
                }
                UnaryFn::Inverse => {
                    let one = UnboundedFloat::from_scaled(false, 1, 0, fs);
                    codec.encode_float(&fc_arith(ArithOp::Div, &one, &v, fs).unwrap())
                }
                UnaryFn::Exp => round_enclosure(codec, |t| exp_enclosure(&d, t)),
                UnaryFn::Ln => {
                    if neg {
                        return err;
                    }
                    round_enclosure(codec, |t| ln_enclosure(&d, t))
                }
                UnaryFn::Sin => round_enclosure(codec, |t| sin_enclosure(&d, t)),
                UnaryFn::Pow(y) => {
                    if y.is_integer() {
                        let k = y.numer().to_i64().unwrap_or(i64::MAX);
                        return pow_integer(codec, &d, k);
                    }
                    if neg {
                        return err;
                    }
                    let yd = Dyadic::from_rational(y).unwrap_or_else(|| {
                        let t = ExactRational::from_dyadic(1, -(fs as i64 + 200));
                        let scaled = y.div(&t).unwrap();
                        let q = scaled.numer() / scaled.denom();
                        Dyadic { m: q, e: -(fs as i64 + 200) }
                    });
                    round_enclosure(codec, |t| pow_enclosure(&d, &yd, t))
                }
            }
        }
        _ => unreachable!(),
    }
}

/// Integer powers by repeated squaring, exact before one final rounding.
fn pow_integer(codec: &Codec, d: &Dyadic, k: i64) -> u64 {
    if k == 0 {
        return codec.encode_rational(&ExactRational::one());
    }
    let fs = codec.work_fs();
    // huge exponents only saturate; avoid materializing them
    let mag = (d.mag() - 1).unsigned_abs().max(1) as u128 * k.unsigned_abs() as u128;
    if mag > 1 << 40 {
        let x = ExactRational::from_dyadic(d.m.clone(), d.e);
        let big = (d.mag() - 1) as i128 * k as i128 > 0;
        let odd_neg = x.is_negative() && k % 2 != 0;
        let v = if big { Dyadic::pow2(1 << 61) } else { Dyadic::pow2(-(1 << 61)) };
        let v = if odd_neg { v.neg() } else { v };
        return codec.encode_float(&v.to_float(fs));
    }
    let mut base = d.clone();
    let mut acc = Dyadic::one();
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    let r = acc.to_rational();
    let r = if k < 0 { r.recip().expect("nonzero power") } else { r };
    codec.encode_rational(&r)
}

/// Decimal accuracy of a computed value against a reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AccuracyResult {
    Exact,
    Digits(f64),
    Wrong,
}

/// Upper clamp for accuracy digits.
pub const MAX_DIGITS: f64 = 16.0;

impl AccuracyResult {
    /// Digits with Exact scored at the cap and Wrong at zero.
    pub fn digits(&self) -> f64 {
        match self {
            AccuracyResult::Exact => MAX_DIGITS,
            AccuracyResult::Digits(d) => *d,
            AccuracyResult::Wrong => 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AccuracyResult::Exact)
    }
}

/// `-log10 |log10(1 + delta)|` clamped to `[0, 16]`.
pub fn digits_from_delta(delta: f64) -> f64 {
    let l = delta.ln_1p().abs() / std::f64::consts::LN_10;
    clamp_digits(-l.log10())
}

/// Same metric from `log2 |c| - log2 |r|`.
pub fn digits_from_log2_gap(gap: f64) -> f64 {
    clamp_digits(-(gap.abs() * std::f64::consts::LOG10_2).log10())
}

fn clamp_digits(d: f64) -> f64 {
    if d.is_nan() {
        0.0
    } else {
        d.clamp(0.0, MAX_DIGITS)
    }
}

/// `None` for `computed` means a special (NaN, NaR, NR, infinity) result.
pub fn decimal_accuracy(computed: Option<&ExactRational>, reference: &ExactRational) -> AccuracyResult {
    let Some(c) = computed else {
        return AccuracyResult::Wrong;
    };
    if c == reference {
        return AccuracyResult::Exact;
    }
    if c.is_zero() || reference.is_zero() || c.is_negative() != reference.is_negative() {
        return AccuracyResult::Wrong;
    }
    // delta = c/r - 1
    let delta = c.sub(reference).div(reference).expect("nonzero reference");
    let df = delta.to_f64();
    if df.abs() < 0.5 {
        if df == 0.0 {
            return AccuracyResult::Digits(MAX_DIGITS);
        }
        return AccuracyResult::Digits(digits_from_delta(df));
    }
    AccuracyResult::Digits(digits_from_log2_gap(c.log2_abs() - reference.log2_abs()))
}

/// Accuracy of a decoded result against a reference.
pub fn num_accuracy(computed: &Num, reference: &ExactRational) -> AccuracyResult {
    decimal_accuracy(computed.to_rational().as_ref(), reference)
}

/// Exact n-th root if one exists.
pub fn exact_root(x: &ExactRational, n: u32) -> Option<ExactRational> {
    if x.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let p = x.numer().abs();
    let q = x.denom().clone();
    let (rp, rq) = (p.nth_root(n), q.nth_root(n));
    if rp.pow(n) == p && rq.pow(n) == q {
        let r = ExactRational::new(rp, rq).unwrap();
        Some(if x.is_negative() { r.neg() } else { r })
    } else {
        None
    }
}
