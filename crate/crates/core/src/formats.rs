//! Format descriptors and bit-level codecs.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exact::ExactRational;
use crate::float::{RoundingMode, UnboundedFloat, MAX_FRACTION_SIZE};
pub use crate::tapered::FieldsView;
use crate::tapered::{Tapered, TaperedKind, TaperedValue};

/// Default cap on the width of exhaustive enumerations.
pub const DEFAULT_WIDTH_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("unknown kind {0:?}")]
    UnknownKind(String),
    #[error("{kind} takes {expected} parameter(s), got {got}")]
    Arity { kind: &'static str, expected: usize, got: usize },
    #[error("missing rounding mode (RE or RZ)")]
    MissingRounding,
    #[error("bad parameter {token:?}: {reason}")]
    BadParam { token: String, reason: String },
    #[error("width {width} exceeds the cap of {cap} bits")]
    WidthOverCap { width: u32, cap: u32 },
    #[error("{0} has no binary representation")]
    NoBinaryForm(String),
    #[error("pattern {pattern} does not fit in {width} bits")]
    PatternTooWide { pattern: String, width: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Kind {
    FixedP { is: u32, fs: u32 },
    FloatP { es: u32, fs: u32 },
    Ieee754 { es: u32, fs: u32 },
    Posit { size: u32, es: u32 },
    Morris { size: u32, g: u32 },
    MorrisHeb { size: u32, g: u32 },
    MorrisBias { size: u32, g: u32 },
    MorrisUnary { size: u32 },
    Rational,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::FixedP { .. } => "fixedp",
            Kind::FloatP { .. } => "floatp",
            Kind::Ieee754 { .. } => "ieee754",
            Kind::Posit { .. } => "posit",
            Kind::Morris { .. } => "morris",
            Kind::MorrisHeb { .. } => "morrisheb",
            Kind::MorrisBias { .. } => "morrisbias",
            Kind::MorrisUnary { .. } => "morrisunary",
            Kind::Rational => "rational",
        }
    }

    fn params(&self) -> Vec<u32> {
        match *self {
            Kind::FixedP { is, fs } => vec![is, fs],
            Kind::FloatP { es, fs } | Kind::Ieee754 { es, fs } => vec![es, fs],
            Kind::Posit { size, es } => vec![size, es],
            Kind::Morris { size, g } | Kind::MorrisHeb { size, g } | Kind::MorrisBias { size, g } => vec![size, g],
            Kind::MorrisUnary { size } => vec![size],
            Kind::Rational => vec![],
        }
    }

    /// Total bit width; `None` for the exact rational system.
    pub fn width(&self) -> Option<u32> {
        match *self {
            Kind::FixedP { is, fs } => Some(is + fs),
            Kind::FloatP { es, fs } | Kind::Ieee754 { es, fs } => Some(1 + es + fs),
            Kind::Posit { size, .. }
            | Kind::Morris { size, .. }
            | Kind::MorrisHeb { size, .. }
            | Kind::MorrisBias { size, .. }
            | Kind::MorrisUnary { size } => Some(size),
            Kind::Rational => None,
        }
    }

    pub fn is_tapered(&self) -> bool {
        !matches!(self, Kind::FixedP { .. } | Kind::FloatP { .. } | Kind::Ieee754 { .. } | Kind::Rational)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NrsDescriptor {
    pub kind: Kind,
    pub rounding: RoundingMode,
}

fn check(ok: bool, token: &str, reason: &str) -> Result<(), FormatError> {
    if ok {
        Ok(())
    } else {
        Err(FormatError::BadParam { token: token.to_string(), reason: reason.to_string() })
    }
}

impl NrsDescriptor {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let name = parts[0].to_ascii_lowercase();
        let expected = match name.as_str() {
            "fixedp" | "floatp" | "ieee754" | "posit" | "morris" | "morrisheb" | "morrisbias" => 2,
            "morrisunary" => 1,
            "rational" => 0,
            _ => return Err(FormatError::UnknownKind(parts[0].to_string())),
        };
        let mut rest = &parts[1..];
        let rounding = match rest.last().map(|s| s.parse::<RoundingMode>()) {
            Some(Ok(m)) => {
                rest = &rest[..rest.len() - 1];
                m
            }
            _ if name == "rational" && rest.is_empty() => RoundingMode::RE,
            _ if rest.len() == expected => return Err(FormatError::MissingRounding),
            _ => return Err(Self::arity_error(&name, expected, rest.len())),
        };
        if rest.len() != expected {
            return Err(Self::arity_error(&name, expected, rest.len()));
        }
        let mut ps = Vec::new();
        for tok in rest {
            let v: u32 = tok
                .parse()
                .map_err(|_| FormatError::BadParam { token: tok.to_string(), reason: "not a count".into() })?;
            ps.push(v);
        }
        let t = |i: usize| rest[i];
        let kind = match name.as_str() {
            "fixedp" => {
                check(ps[0] >= 1, t(0), "integer size must be at least 1")?;
                check(ps[0] + ps[1] >= 2 && ps[0] + ps[1] <= MAX_FRACTION_SIZE, t(1), "total width must be 2..=62")?;
                Kind::FixedP { is: ps[0], fs: ps[1] }
            }
            "floatp" | "ieee754" => {
                let min_es = if name == "ieee754" { 2 } else { 1 };
                check(ps[0] >= min_es && ps[0] <= 20, t(0), "exponent size out of range")?;
                let min_fs = if name == "ieee754" { 1 } else { 0 };
                check(ps[1] >= min_fs && ps[1] <= 52, t(1), "fraction size out of range")?;
                if name == "ieee754" {
                    Kind::Ieee754 { es: ps[0], fs: ps[1] }
                } else {
                    Kind::FloatP { es: ps[0], fs: ps[1] }
                }
            }
            "posit" => {
                check((2..=56).contains(&ps[0]), t(0), "size must be 2..=56")?;
                check(ps[1] <= 16, t(1), "es must be 0..=16")?;
                Kind::Posit { size: ps[0], es: ps[1] }
            }
            "morris" | "morrisheb" | "morrisbias" => {
                check((1..=5).contains(&ps[1]), t(1), "g must be 1..=5")?;
                check(
                    ps[0] <= 56 && ps[0] >= ps[1] + 3,
                    t(0),
                    "size must leave room for the fields and be at most 56",
                )?;
                let (size, g) = (ps[0], ps[1]);
                match name.as_str() {
                    "morris" => Kind::Morris { size, g },
                    "morrisheb" => Kind::MorrisHeb { size, g },
                    _ => Kind::MorrisBias { size, g },
                }
            }
            "morrisunary" => {
                check((3..=56).contains(&ps[0]), t(0), "size must be 3..=56")?;
                Kind::MorrisUnary { size: ps[0] }
            }
            _ => Kind::Rational,
        };
        Ok(NrsDescriptor { kind, rounding })
    }

    fn arity_error(name: &str, expected: usize, got: usize) -> FormatError {
        let kind = match name {
            "fixedp" => "fixedp",
            "floatp" => "floatp",
            "ieee754" => "ieee754",
            "posit" => "posit",
            "morris" => "morris",
            "morrisheb" => "morrisheb",
            "morrisbias" => "morrisbias",
            "morrisunary" => "morrisunary",
            _ => "rational",
        };
        FormatError::Arity { kind, expected, got }
    }

    pub fn width(&self) -> Option<u32> {
        self.kind.width()
    }

    pub fn with_rounding(self, rounding: RoundingMode) -> Self {
        NrsDescriptor { rounding, ..self }
    }
}

impl FromStr for NrsDescriptor {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for NrsDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        for p in self.kind.params() {
            write!(f, ":{p}")?;
        }
        write!(f, ":{}", self.rounding)
    }
}

/// A fixed-width bit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitPattern {
    pub width: u32,
    pub bits: u64,
}

impl BitPattern {
    pub fn new(width: u32, bits: u64) -> Result<Self, FormatError> {
        if width < 64 && bits >> width != 0 {
            return Err(FormatError::PatternTooWide { pattern: format!("{bits:#x}"), width });
        }
        Ok(BitPattern { width, bits })
    }

    /// Parses `0x…`, `0b…` or decimal text.
    pub fn parse(text: &str, width: u32) -> Result<Self, FormatError> {
        let t = text.trim().replace('_', "");
        let bad = || FormatError::BadParam { token: text.to_string(), reason: "not a bit pattern".into() };
        let bits = if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            u64::from_str_radix(h, 16).map_err(|_| bad())?
        } else if let Some(b) = t.strip_prefix("0b").or_else(|| t.strip_prefix("0B")) {
            u64::from_str_radix(b, 2).map_err(|_| bad())?
        } else {
            t.parse::<u64>().map_err(|_| bad())?
        };
        Self::new(width, bits).map_err(|_| FormatError::PatternTooWide { pattern: text.to_string(), width })
    }

    pub fn to_hex(&self) -> String {
        format!("0x{:0w$x}", self.bits, w = self.width.div_ceil(4) as usize)
    }

    pub fn to_binary(&self) -> String {
        format!("{:0w$b}", self.bits, w = self.width as usize)
    }
}

impl fmt::Display for BitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValueClass {
    Finite,
    Zero { neg: bool },
    Inf { neg: bool },
    QNaN,
    SNaN,
    NaR,
    NR,
}

impl ValueClass {
    pub fn is_error(&self) -> bool {
        matches!(self, ValueClass::QNaN | ValueClass::SNaN | ValueClass::NaR | ValueClass::NR)
    }
}

/// A decoded number in working form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Num {
    /// Nonzero finite value.
    Finite(UnboundedFloat),
    Zero {
        neg: bool,
    },
    Inf {
        neg: bool,
    },
    QNaN,
    SNaN,
    NaR,
    NR,
}

impl Num {
    pub fn class(&self) -> ValueClass {
        match *self {
            Num::Finite(_) => ValueClass::Finite,
            Num::Zero { neg } => ValueClass::Zero { neg },
            Num::Inf { neg } => ValueClass::Inf { neg },
            Num::QNaN => ValueClass::QNaN,
            Num::SNaN => ValueClass::SNaN,
            Num::NaR => ValueClass::NaR,
            Num::NR => ValueClass::NR,
        }
    }

    pub fn is_error(&self) -> bool {
        self.class().is_error()
    }

    /// Working value for finite numbers including zero.
    pub fn as_float(&self, fs: u32) -> Option<UnboundedFloat> {
        match *self {
            Num::Finite(v) => Some(v),
            Num::Zero { neg } => Some(UnboundedFloat::zero(neg, fs)),
            _ => None,
        }
    }

    /// Exact value of finite numbers and zeros.
    pub fn to_rational(&self) -> Option<ExactRational> {
        match self {
            Num::Finite(v) => Some(v.to_rational()),
            Num::Zero { .. } => Some(ExactRational::zero()),
            _ => None,
        }
    }

    pub fn from_float(v: UnboundedFloat) -> Num {
        if v.is_zero() {
            Num::Zero { neg: v.is_negative() }
        } else {
            Num::Finite(v)
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Finite(v) => f.write_str(&v.to_rational().to_sci_truncated(3)),
            Num::Zero { neg: true } => f.write_str("-0"),
            Num::Zero { neg: false } => f.write_str("0"),
            Num::Inf { neg: true } => f.write_str("-Inf"),
            Num::Inf { neg: false } => f.write_str("+Inf"),
            Num::QNaN => f.write_str("qNaN"),
            Num::SNaN => f.write_str("sNaN"),
            Num::NaR => f.write_str("NaR"),
            Num::NR => f.write_str("NR"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedValue {
    pub class: ValueClass,
    /// Set iff `class` is `Finite`.
    pub value: Option<ExactRational>,
    pub fields: FieldsView,
}

#[derive(Debug, Clone)]
enum Engine {
    Fixed { is: u32, fs: u32 },
    Float { es: u32, fs: u32, ieee: bool },
    Tapered(Tapered),
}

/// A descriptor compiled for encoding and decoding.
#[derive(Debug, Clone)]
pub struct Codec {
    desc: NrsDescriptor,
    width: u32,
    engine: Engine,
}

fn mask(width: u32) -> u64 {
    u64::MAX >> (64 - width)
}

impl Codec {
    pub fn new(desc: NrsDescriptor) -> Result<Self, FormatError> {
        let width = desc.width().ok_or_else(|| FormatError::NoBinaryForm(desc.to_string()))?;
        let engine = match desc.kind {
            Kind::FixedP { is, fs } => Engine::Fixed { is, fs },
            Kind::FloatP { es, fs } => Engine::Float { es, fs, ieee: false },
            Kind::Ieee754 { es, fs } => Engine::Float { es, fs, ieee: true },
            Kind::Posit { size, es } => Engine::Tapered(Tapered::new(TaperedKind::Posit { es }, size)),
            Kind::Morris { size, g } => Engine::Tapered(Tapered::new(TaperedKind::Morris { g }, size)),
            Kind::MorrisHeb { size, g } => Engine::Tapered(Tapered::new(TaperedKind::MorrisHeb { g }, size)),
            Kind::MorrisBias { size, g } => Engine::Tapered(Tapered::new(TaperedKind::MorrisBias { g }, size)),
            Kind::MorrisUnary { size } => Engine::Tapered(Tapered::new(TaperedKind::MorrisUnary, size)),
            Kind::Rational => unreachable!(),
        };
        Ok(Codec { desc, width, engine })
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Self::new(NrsDescriptor::parse(text)?)
    }

    pub fn desc(&self) -> &NrsDescriptor {
        &self.desc
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn rounding(&self) -> RoundingMode {
        self.desc.rounding
    }

    /// Fraction size used for arithmetic on this format.
    pub fn work_fs(&self) -> u32 {
        match &self.engine {
            Engine::Fixed { is, fs } => is + fs,
            Engine::Float { fs, .. } => *fs,
            Engine::Tapered(t) => t.size(),
        }
    }

    pub fn pattern(&self, bits: u64) -> BitPattern {
        BitPattern { width: self.width, bits: bits & mask(self.width) }
    }

    /// The pattern for error results (NaN, NaR, NR).
    pub fn error_pattern(&self) -> u64 {
        match &self.engine {
            Engine::Fixed { .. } => 1u64 << (self.width - 1),
            Engine::Float { es, fs, ieee: true } => (mask(*es) << fs) | (1u64 << (fs - 1)),
            // no NaN in this format: errors go to +Inf
            Engine::Float { es: _, fs: _, ieee: false } => mask(self.width - 1),
            Engine::Tapered(t) => t.error_pattern(),
        }
    }

    fn error_num(&self) -> Num {
        match &self.engine {
            Engine::Fixed { .. } => Num::NR,
            Engine::Float { ieee: true, .. } => Num::QNaN,
            Engine::Float { ieee: false, .. } => Num::Inf { neg: false },
            Engine::Tapered(t) if t.is_posit() => Num::NaR,
            Engine::Tapered(_) => Num::NR,
        }
    }

    pub fn decode(&self, bits: u64) -> Num {
        let w = self.width;
        let bits = bits & mask(w);
        match &self.engine {
            Engine::Fixed { is, fs } => {
                let n = is + fs;
                if bits == 1u64 << (n - 1) {
                    return Num::NR;
                }
                if bits == 0 {
                    return Num::Zero { neg: false };
                }
                let neg = bits >> (n - 1) == 1;
                let m = if neg { bits.wrapping_neg() & mask(n) } else { bits };
                Num::Finite(UnboundedFloat::from_scaled(neg, m as u128, -(*fs as i64), n))
            }
            Engine::Float { es, fs, ieee } => {
                let (es, fs) = (*es, *fs);
                let neg = bits >> (w - 1) == 1;
                let field = (bits >> fs) & mask(es);
                let frac = bits & (mask(fs + 1) >> 1);
                let bias = (1i64 << (es - 1)) - 1;
                if *ieee {
                    if field == mask(es) {
                        return if frac == 0 {
                            Num::Inf { neg }
                        } else if frac >> (fs - 1) == 1 {
                            Num::QNaN
                        } else {
                            Num::SNaN
                        };
                    }
                    if field == 0 {
                        if frac == 0 {
                            return Num::Zero { neg };
                        }
                        return Num::Finite(UnboundedFloat::from_scaled(neg, frac as u128, 1 - bias - fs as i64, fs));
                    }
                } else {
                    let body = bits & mask(w - 1);
                    if body == 0 {
                        return Num::Zero { neg };
                    }
                    if body == mask(w - 1) {
                        return Num::Inf { neg };
                    }
                }
                Num::Finite(UnboundedFloat::from_fields(neg, field as i64 - bias, frac, fs))
            }
            Engine::Tapered(t) => match t.decode(bits).0 {
                TaperedValue::Zero => Num::Zero { neg: false },
                TaperedValue::Error => self.error_num(),
                TaperedValue::Finite { neg, exp, frac, fs } => {
                    let wfs = t.size();
                    Num::Finite(UnboundedFloat::from_fields(neg, exp, frac << (wfs - fs), wfs))
                }
            },
        }
    }

    /// Decoding with exact value and field breakdown.
    pub fn decode_full(&self, p: BitPattern) -> DecodedValue {
        let num = self.decode(p.bits);
        let fields = match &self.engine {
            Engine::Tapered(t) => t.decode(p.bits).1,
            Engine::Fixed { is, fs } => {
                let n = is + fs;
                FieldsView {
                    sign: p.bits >> (n - 1) == 1,
                    fraction_size: *fs,
                    fraction: p.bits & mask(*fs + 1) >> 1,
                    ..Default::default()
                }
            }
            Engine::Float { es, fs, ieee } => {
                let field = (p.bits >> fs) & mask(*es);
                let bias = (1i64 << (es - 1)) - 1;
                let exp = if *ieee && field == 0 { 1 - bias } else { field as i64 - bias };
                FieldsView {
                    sign: p.bits >> (self.width - 1) == 1,
                    exponent_size: Some(*es as i64),
                    exponent_bits: Some((field, *es)),
                    binary_exponent: Some(field),
                    exponent: Some(exp),
                    fraction_size: *fs,
                    fraction: p.bits & (mask(fs + 1) >> 1),
                    ..Default::default()
                }
            }
        };
        DecodedValue {
            class: num.class(),
            value: match num {
                Num::Finite(v) => Some(v.to_rational()),
                _ => None,
            },
            fields,
        }
    }

    /// Rounds a working value into the format with the descriptor's mode.
    pub fn encode_float(&self, v: &UnboundedFloat) -> u64 {
        self.encode_float_with(v, self.desc.rounding)
    }

    pub fn encode_float_with(&self, v: &UnboundedFloat, mode: RoundingMode) -> u64 {
        let w = self.width;
        let neg = v.is_negative();
        match &self.engine {
            Engine::Fixed { is, fs } => {
                if v.is_zero() {
                    return 0;
                }
                let n = is + fs;
                if v.exponent() + *fs as i64 >= n as i64 - 1 {
                    return self.error_pattern();
                }
                let (q, _) = v.round_to_ulp(-(*fs as i64), mode);
                if q == 0 {
                    return 0;
                }
                if q >= 1u128 << (n - 1) {
                    return self.error_pattern();
                }
                let q = q as u64;
                if neg {
                    q.wrapping_neg() & mask(n)
                } else {
                    q
                }
            }
            Engine::Float { es, fs, ieee } => {
                let (es, fs) = (*es, *fs);
                let sign = (neg as u64) << (w - 1);
                let inf = if *ieee { sign | (mask(es) << fs) } else { sign | mask(w - 1) };
                if v.is_zero() {
                    return sign;
                }
                let bias = (1i64 << (es - 1)) - 1;
                let e = v.exponent();
                if *ieee {
                    let emin = 1 - bias;
                    if e < emin {
                        let (q, _) = v.round_to_ulp(emin - fs as i64, mode);
                        // q == 2^fs lands on the smallest normal, which the same formula encodes
                        return sign | q as u64;
                    }
                    let (mut q, _) = v.round_to_ulp(e - fs as i64, mode);
                    let mut e = e;
                    if q >> (fs + 1) != 0 {
                        q >>= 1;
                        e += 1;
                    }
                    if e > bias {
                        return match mode {
                            RoundingMode::RE => inf,
                            RoundingMode::RZ => sign | (((mask(es) - 1) << fs) | mask(fs)),
                        };
                    }
                    sign | (((e + bias) as u64) << fs) | (q as u64 & mask(fs + 1) >> 1)
                } else {
                    if e < -bias {
                        return sign;
                    }
                    let (mut q, _) = v.round_to_ulp(e - fs as i64, mode);
                    let mut e = e;
                    if q >> (fs + 1) != 0 {
                        q >>= 1;
                        e += 1;
                    }
                    if e > bias + 1 {
                        return inf;
                    }
                    let frac = if fs == 0 { 0 } else { q as u64 & (mask(fs + 1) >> 1) };
                    // rounding onto the zero or infinity pattern yields that special
                    sign | (((e + bias) as u64) << fs) | frac
                }
            }
            Engine::Tapered(t) => t.fit(v, mode),
        }
    }

    /// Encodes any decoded number, mapping specials onto this format's policy.
    pub fn encode(&self, x: &Num) -> u64 {
        match x {
            Num::Finite(v) => self.encode_float(v),
            Num::Zero { neg } => self.encode_float(&UnboundedFloat::zero(*neg, self.work_fs())),
            Num::Inf { neg } => match &self.engine {
                Engine::Float { es, fs, ieee: true } => ((*neg as u64) << (self.width - 1)) | (mask(*es) << fs),
                Engine::Float { ieee: false, .. } => ((*neg as u64) << (self.width - 1)) | mask(self.width - 1),
                _ => self.error_pattern(),
            },
            Num::SNaN => match &self.engine {
                Engine::Float { es, fs, ieee: true } => (mask(*es) << fs) | 1,
                _ => self.error_pattern(),
            },
            Num::QNaN | Num::NaR | Num::NR => self.error_pattern(),
        }
    }

    pub fn encode_rational(&self, x: &ExactRational) -> u64 {
        self.encode_rational_with(x, self.desc.rounding)
    }

    pub fn encode_rational_with(&self, x: &ExactRational, mode: RoundingMode) -> u64 {
        self.encode_float_with(&UnboundedFloat::from_rational(x, self.work_fs()), mode)
    }

    /// Conversion of a decimal literal: tapered formats truncate, the others
    /// use the descriptor's rounding.
    pub fn encode_literal(&self, x: &ExactRational) -> u64 {
        let mode = if self.desc.kind.is_tapered() { RoundingMode::RZ } else { self.desc.rounding };
        self.encode_rational_with(x, mode)
    }

    pub fn enumerate(&self, cap: u32) -> Result<impl Iterator<Item = (u64, Num)> + '_, FormatError> {
        if self.width > cap {
            return Err(FormatError::WidthOverCap { width: self.width, cap });
        }
        Ok((0..1u64 << self.width).map(move |b| (b, self.decode(b))))
    }

    /// Order of two patterns; `None` if either is an error value.
    ///
    /// Formats with ordered encodings compare integers; the others compare
    /// decoded values.
    pub fn bit_compare(&self, p: u64, q: u64) -> Option<Ordering> {
        let (a, b) = (self.decode(p), self.decode(q));
        if a.is_error() || b.is_error() {
            return None;
        }
        let w = self.width;
        let signed = |x: u64| ((x << (64 - w)) as i64) >> (64 - w);
        let sign_mag = |x: u64| {
            let m = (x & mask(w - 1)) as i64;
            if x >> (w - 1) == 1 {
                -m
            } else {
                m
            }
        };
        match self.desc.kind {
            Kind::Posit { .. } | Kind::FixedP { .. } => Some(signed(p).cmp(&signed(q))),
            Kind::MorrisBias { .. } | Kind::MorrisUnary { .. } | Kind::FloatP { .. } | Kind::Ieee754 { .. } => {
                Some(sign_mag(p).cmp(&sign_mag(q)))
            }
            _ => Some(cmp_num(&a, &b)),
        }
    }

    /// Pattern of the largest finite positive value.
    pub fn max_pattern(&self) -> u64 {
        match &self.engine {
            Engine::Fixed { .. } => mask(self.width - 1),
            Engine::Float { es, fs, ieee: true } => ((mask(*es) - 1) << fs) | mask(*fs),
            Engine::Float { .. } => mask(self.width - 1) - 1,
            Engine::Tapered(t) => t.max_pattern(),
        }
    }

    /// Pattern of the smallest positive value.
    pub fn min_pattern(&self) -> u64 {
        match &self.engine {
            Engine::Tapered(t) => t.min_pattern(),
            _ => 1,
        }
    }
}

/// Total order on non-error numbers by value; zeros are equal.
pub fn cmp_num(a: &Num, b: &Num) -> Ordering {
    let key = |x: &Num| match x {
        Num::Inf { neg: true } => 0,
        Num::Inf { neg: false } => 2,
        _ => 1,
    };
    match key(a).cmp(&key(b)) {
        Ordering::Equal if key(a) == 1 => {
            let fa = a.as_float(0).unwrap();
            let fb = b.as_float(0).unwrap();
            fa.cmp_value(&fb)
        }
        o => o,
    }
}
