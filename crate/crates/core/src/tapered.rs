//! Tapered formats: posit and the Morris family.
//!
//! Each format is described by a list of segments. A segment is one choice of
//! the size field (regime or G) plus exponent sign: an arithmetic progression of
//! representable binary exponents sharing the same fraction width. Decoding
//! reads fields straight from the pattern; encoding rounds in value space
//! between the two representable neighbours of the input.

use std::cmp::Ordering;

use crate::float::{RoundingMode, UnboundedFloat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaperedKind {
    Posit { es: u32 },
    Morris { g: u32 },
    MorrisHeb { g: u32 },
    MorrisBias { g: u32 },
    MorrisUnary,
}

/// Sub-fields read from a pattern.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FieldsView {
    pub sign: bool,
    /// Regime `k` (posit, unary) or `G` (morris kinds, after bias removal).
    pub size_field: Option<i64>,
    pub exponent_sign: Option<bool>,
    /// Exponent size `es`; -1 means no exponent.
    pub exponent_size: Option<i64>,
    /// Exponent bits present in the pattern, as stored.
    pub exponent_bits: Option<(u64, u32)>,
    /// Binary exponent value after negation and zero padding.
    pub binary_exponent: Option<u64>,
    pub exponent: Option<i64>,
    pub fraction_size: u32,
    pub fraction: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaperedValue {
    Zero,
    /// NaR, NR or NaN depending on the kind.
    Error,
    Finite {
        neg: bool,
        exp: i64,
        frac: u64,
        fs: u32,
    },
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    start: i64,
    step_log: u32,
    count: u64,
    rev: bool,
    base: u64,
    fs: u32,
}

impl Segment {
    fn last(&self) -> i64 {
        self.start + (((self.count - 1) as i64) << self.step_log)
    }

    fn index_of(&self, e: i64) -> Option<u64> {
        if e < self.start || e > self.last() {
            return None;
        }
        let d = e - self.start;
        if d & ((1i64 << self.step_log) - 1) != 0 {
            return None;
        }
        Some((d >> self.step_log) as u64)
    }

    fn floor(&self, e: i64) -> Option<i64> {
        if e < self.start {
            return None;
        }
        Some(self.last().min(self.start + ((e - self.start) >> self.step_log << self.step_log)))
    }

    fn ceil(&self, e: i64) -> Option<i64> {
        if e > self.last() {
            return None;
        }
        if e <= self.start {
            return Some(self.start);
        }
        let step = 1i64 << self.step_log;
        Some(self.start + (e - self.start + step - 1) / step * step)
    }

    fn prefix(&self, i: u64) -> u64 {
        let code = if self.rev { self.count - 1 - i } else { i };
        self.base | (code << self.fs)
    }
}

/// A representable magnitude, or one of the two range ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cand {
    Zero,
    Val { exp: i64, frac: u64, fs: u32 },
    Over,
}

#[derive(Debug, Clone)]
pub struct Tapered {
    kind: TaperedKind,
    size: u32,
    segs: Vec<Segment>,
    lookup: Option<(i64, Vec<u16>)>,
    emin: i64,
    emax: i64,
}

const LOOKUP_LIMIT: i64 = 1 << 20;

fn regime_bits(k: i64, n: u32) -> (u64, u32) {
    // returns (value, length) of the regime field within n-1 magnitude bits
    let avail = n - 1;
    if k >= 0 {
        let run = k as u32 + 1;
        if run >= avail {
            ((1u64 << avail) - 1, avail)
        } else {
            (((1u64 << run) - 1) << 1, run + 1)
        }
    } else {
        let run = (-k) as u32;
        debug_assert!(run < avail);
        (1, run + 1)
    }
}

/// Regime `k` and number of bits it consumes, read from the top of `mag`.
fn read_regime(mag: u64, avail: u32) -> (i64, u32) {
    let first = mag >> (avail - 1) & 1;
    let mut run = 0;
    while run < avail && (mag >> (avail - 1 - run) & 1) == first {
        run += 1;
    }
    let used = (run + 1).min(avail);
    let k = if first == 1 { run as i64 - 1 } else { -(run as i64) };
    (k, used)
}

fn low_bits(v: u64, n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        v & (u64::MAX >> (64 - n))
    }
}

impl Tapered {
    pub fn new(kind: TaperedKind, size: u32) -> Self {
        assert!((3..=56).contains(&size) || matches!(kind, TaperedKind::Posit { .. }) && size >= 2);
        let segs = Self::build_segments(kind, size);
        let emin = segs.iter().map(|s| s.start).min().unwrap();
        let emax = segs.iter().map(|s| s.last()).max().unwrap();
        let mut t = Tapered { kind, size, segs, lookup: None, emin, emax };
        if emax - emin < LOOKUP_LIMIT {
            let mut table = vec![0u16; (emax - emin + 1) as usize];
            for (si, s) in t.segs.iter().enumerate().rev() {
                for i in 0..s.count {
                    let e = s.start + ((i as i64) << s.step_log);
                    table[(e - emin) as usize] = si as u16 + 1;
                }
            }
            t.lookup = Some((emin, table));
        }
        t
    }

    fn build_segments(kind: TaperedKind, n: u32) -> Vec<Segment> {
        let mut segs = Vec::new();
        // exponent field of `es` bits with `avail` bits left for exponent+fraction
        let push =
            |segs: &mut Vec<Segment>, base: u64, avail: u32, es: u32, offset: i64, neg: bool, rev_when_neg: bool| {
                let p = es.min(avail);
                let m = es - p;
                let fs = avail - p;
                let count = 1u64 << p;
                let span = ((count - 1) as i64) << m;
                let (start, rev) = if neg { (-(offset + span), rev_when_neg) } else { (offset, false) };
                segs.push(Segment { start, step_log: m, count, rev, base, fs });
            };
        match kind {
            TaperedKind::Posit { es } => {
                let kmax = n as i64 - 2;
                for k in -kmax..=kmax {
                    let (rv, rl) = regime_bits(k, n);
                    let rem = n - 1 - rl;
                    push(&mut segs, rv << rem, rem, es, k << es, false, false);
                }
            }
            TaperedKind::Morris { g } => {
                let avail = n - 2 - g;
                for gv in 0..(1u64 << g) {
                    let es = gv as u32 + 1;
                    for s in 0..2u64 {
                        let base = (gv << (avail + 1)) | (s << avail);
                        push(&mut segs, base, avail, es, 0, s == 1, true);
                    }
                }
            }
            TaperedKind::MorrisHeb { g } => {
                let avail = n - 2 - g;
                for gv in 0..(1u64 << g) {
                    for s in 0..2u64 {
                        let base = (gv << (avail + 1)) | (s << avail);
                        if gv == 0 {
                            segs.push(Segment { start: 0, step_log: 0, count: 1, rev: false, base, fs: avail });
                        } else {
                            let es = gv as u32 - 1;
                            push(&mut segs, base, avail, es, 1i64 << es, s == 1, true);
                        }
                    }
                }
            }
            TaperedKind::MorrisBias { g } => {
                let avail = n - 1 - g;
                let bias = (1i64 << (g - 1)) - 1;
                for bg in 0..(1u64 << g) {
                    let gv = bg as i64 - bias;
                    let base = bg << avail;
                    if gv == 0 {
                        segs.push(Segment { start: 0, step_log: 0, count: 1, rev: false, base, fs: avail });
                    } else {
                        let es = gv.unsigned_abs() as u32 - 1;
                        // negative exponents store negated bits, so codes rise with the value
                        push(&mut segs, base, avail, es, 1i64 << es, gv < 0, false);
                    }
                }
            }
            TaperedKind::MorrisUnary => {
                let kmax = n as i64 - 2;
                for k in -kmax..=kmax {
                    let (rv, rl) = regime_bits(k, n);
                    let rem = n - 1 - rl;
                    let base = rv << rem;
                    if k == 0 {
                        segs.push(Segment { start: 0, step_log: 0, count: 1, rev: false, base, fs: rem });
                    } else {
                        let es = (k.unsigned_abs() - 1) as u32;
                        push(&mut segs, base, rem, es, 1i64 << es, k < 0, false);
                    }
                }
            }
        }
        segs
    }

    pub fn kind(&self) -> TaperedKind {
        self.kind
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    fn mag_mask(&self) -> u64 {
        (1u64 << (self.size - 1)) - 1
    }

    fn sign_bit(&self) -> u64 {
        1u64 << (self.size - 1)
    }

    fn all_ones(&self) -> u64 {
        u64::MAX >> (64 - self.size)
    }

    /// The error pattern: NaR, NR, or NaN for morris.
    pub fn error_pattern(&self) -> u64 {
        match self.kind {
            TaperedKind::Morris { .. } => self.all_ones(),
            _ => self.sign_bit(),
        }
    }

    pub fn is_posit(&self) -> bool {
        matches!(self.kind, TaperedKind::Posit { .. })
    }

    /// Full pattern for a sign and magnitude pattern.
    fn assemble(&self, neg: bool, mag: u64) -> u64 {
        if !neg {
            mag
        } else if self.is_posit() {
            mag.wrapping_neg() & self.all_ones()
        } else {
            self.sign_bit() | mag
        }
    }

    fn reserved(&self, neg: bool, mag: u64) -> bool {
        match self.kind {
            TaperedKind::Posit { .. } => mag == 0,
            TaperedKind::Morris { .. } => (!neg && mag == 0) || (neg && mag == self.mag_mask()),
            _ => mag == 0,
        }
    }

    pub fn decode(&self, bits: u64) -> (TaperedValue, FieldsView) {
        let n = self.size;
        let bits = bits & self.all_ones();
        let neg = bits & self.sign_bit() != 0;
        if bits == 0 {
            return (TaperedValue::Zero, FieldsView::default());
        }
        if bits == self.error_pattern() {
            return (TaperedValue::Error, FieldsView { sign: neg, ..Default::default() });
        }
        let mag = if self.is_posit() && neg { bits.wrapping_neg() & self.mag_mask() } else { bits & self.mag_mask() };
        let avail = n - 1;
        let mut fv = FieldsView { sign: neg, ..Default::default() };
        // (exponent, bits left for exponent+fraction after the size fields)
        let (exp, rem_after) = match self.kind {
            TaperedKind::Posit { es } => {
                let (k, used) = read_regime(mag, avail);
                let rem = avail - used;
                let p = es.min(rem);
                let stored = low_bits(mag >> (rem - p), p);
                let e = stored << (es - p);
                fv.size_field = Some(k);
                fv.exponent_size = Some(es as i64);
                fv.exponent_bits = Some((stored, p));
                fv.binary_exponent = Some(e);
                (k * (1i64 << es) + e as i64, rem - p)
            }
            TaperedKind::Morris { g } => {
                let rem = avail - g - 1;
                let gv = mag >> (avail - g);
                let esign = mag >> rem & 1 == 1;
                let es = gv as u32 + 1;
                let p = es.min(rem);
                let stored = low_bits(mag >> (rem - p), p);
                let be = stored << (es - p);
                fv.size_field = Some(gv as i64);
                fv.exponent_sign = Some(esign);
                fv.exponent_size = Some(es as i64);
                fv.exponent_bits = Some((stored, p));
                fv.binary_exponent = Some(be);
                (if esign { -(be as i64) } else { be as i64 }, rem - p)
            }
            TaperedKind::MorrisHeb { g } => {
                let rem = avail - g - 1;
                let gv = mag >> (avail - g);
                let esign = mag >> rem & 1 == 1;
                fv.size_field = Some(gv as i64);
                fv.exponent_sign = Some(esign);
                if gv == 0 {
                    fv.exponent_size = Some(-1);
                    (0, rem)
                } else {
                    let es = gv as u32 - 1;
                    let p = es.min(rem);
                    let stored = low_bits(mag >> (rem - p), p);
                    let be = stored << (es - p);
                    let e = (1i64 << es) + be as i64;
                    fv.exponent_size = Some(es as i64);
                    fv.exponent_bits = Some((stored, p));
                    fv.binary_exponent = Some(be);
                    (if esign { -e } else { e }, rem - p)
                }
            }
            TaperedKind::MorrisBias { g } => {
                let rem = avail - g;
                let bias = (1i64 << (g - 1)) - 1;
                let gv = (mag >> rem) as i64 - bias;
                fv.size_field = Some(gv);
                if gv == 0 {
                    fv.exponent_size = Some(-1);
                    (0, rem)
                } else {
                    let es = gv.unsigned_abs() as u32 - 1;
                    let p = es.min(rem);
                    let stored = low_bits(mag >> (rem - p), p);
                    let b = if gv < 0 { low_bits(!stored, p) } else { stored };
                    let be = b << (es - p);
                    let e = (1i64 << es) + be as i64;
                    fv.exponent_size = Some(es as i64);
                    fv.exponent_bits = Some((stored, p));
                    fv.binary_exponent = Some(be);
                    (if gv < 0 { -e } else { e }, rem - p)
                }
            }
            TaperedKind::MorrisUnary => {
                let (k, used) = read_regime(mag, avail);
                let rem = avail - used;
                fv.size_field = Some(k);
                if k == 0 {
                    fv.exponent_size = Some(-1);
                    (0, rem)
                } else {
                    let es = (k.unsigned_abs() - 1) as u32;
                    let p = es.min(rem);
                    let stored = low_bits(mag >> (rem - p), p);
                    let b = if k < 0 { low_bits(!stored, p) } else { stored };
                    let be = b << (es - p);
                    let e = (1i64 << es) + be as i64;
                    fv.exponent_size = Some(es as i64);
                    fv.exponent_bits = Some((stored, p));
                    fv.binary_exponent = Some(be);
                    (if k < 0 { -e } else { e }, rem - p)
                }
            }
        };
        let fs = rem_after;
        let frac = low_bits(mag, fs);
        fv.exponent = Some(exp);
        fv.fraction_size = fs;
        fv.fraction = frac;
        (TaperedValue::Finite { neg, exp, frac, fs }, fv)
    }

    /// First segment (canonical order) holding exponent `e`.
    fn locate(&self, e: i64) -> Option<(usize, u64)> {
        if e < self.emin || e > self.emax {
            return None;
        }
        if let Some((lo, table)) = &self.lookup {
            let si = table[(e - lo) as usize];
            if si == 0 {
                return None;
            }
            let s = &self.segs[si as usize - 1];
            return Some((si as usize - 1, s.index_of(e).unwrap()));
        }
        self.segs.iter().enumerate().find_map(|(si, s)| s.index_of(e).map(|i| (si, i)))
    }

    fn floor_exp(&self, e: i64) -> Option<i64> {
        self.segs.iter().filter_map(|s| s.floor(e)).max()
    }

    fn ceil_exp(&self, e: i64) -> Option<i64> {
        self.segs.iter().filter_map(|s| s.ceil(e)).min()
    }

    fn val_at(&self, e: i64, top: bool) -> Cand {
        let (si, _) = self.locate(e).expect("representable exponent");
        let fs = self.segs[si].fs;
        Cand::Val { exp: e, frac: if top { (1u64 << fs) - 1 } else { 0 }, fs }
    }

    fn next_up(&self, c: Cand) -> Cand {
        match c {
            Cand::Zero => self.val_at(self.emin, false),
            Cand::Val { exp, frac, fs } => {
                if frac + 1 < (1u64 << fs) {
                    Cand::Val { exp, frac: frac + 1, fs }
                } else {
                    match self.ceil_exp(exp + 1) {
                        Some(c) => self.val_at(c, false),
                        None => Cand::Over,
                    }
                }
            }
            Cand::Over => Cand::Over,
        }
    }

    fn next_down(&self, c: Cand) -> Cand {
        match c {
            Cand::Zero => Cand::Zero,
            Cand::Val { exp, frac, fs } => {
                if frac > 0 {
                    Cand::Val { exp, frac: frac - 1, fs }
                } else {
                    match self.floor_exp(exp - 1) {
                        Some(f) => self.val_at(f, true),
                        None => Cand::Zero,
                    }
                }
            }
            Cand::Over => self.val_at(self.emax, true),
        }
    }

    /// Full pattern of a candidate; `None` if its pattern is reserved and no
    /// same-width duplicate exists.
    fn materialize(&self, c: Cand, neg: bool) -> Option<u64> {
        match c {
            Cand::Zero => Some(0),
            Cand::Over => None,
            Cand::Val { exp, frac, fs } => {
                let (si, i) = self.locate(exp)?;
                let mag = self.segs[si].prefix(i) | frac;
                if !self.reserved(neg, mag) {
                    return Some(self.assemble(neg, mag));
                }
                self.segs[si + 1..].iter().filter(|s| s.fs == fs).find_map(|s| {
                    let m = s.prefix(s.index_of(exp)?) | frac;
                    (!self.reserved(neg, m)).then(|| self.assemble(neg, m))
                })
            }
        }
    }

    /// Compare `|v|` with the midpoint of two neighbours (`lo < |v| < hi`).
    fn cmp_mid(v: &UnboundedFloat, lo: Cand, hi: Cand, over_next: (i64, u64, u32)) -> Ordering {
        // everything on the grid 2^g with g = exponent of v's lowest kept bit
        let g = v.exponent() - v.fraction_size() as i64 - 64;
        let (hv_exp, hv_mant, hv_fs) = match hi {
            Cand::Val { exp, frac, fs } => (exp, (1u64 << fs) | frac, fs),
            Cand::Over => over_next,
            Cand::Zero => unreachable!(),
        };
        if hv_exp >= v.exponent() + 2 {
            return Ordering::Less;
        }
        let (qv, _) = v.round_to_ulp(g, RoundingMode::RZ);
        let two_w = qv << 1;
        let hsh = hv_exp - hv_fs as i64 - g;
        debug_assert!(hsh >= 0);
        let h = (hv_mant as u128) << hsh;
        let (l, lfrac) = match lo {
            Cand::Zero => (0u128, false),
            Cand::Val { exp, frac, fs } => {
                let m = ((1u64 << fs) | frac) as u128;
                let sh = exp - fs as i64 - g;
                if sh >= 0 {
                    (m << sh, false)
                } else if sh <= -128 {
                    (0, true)
                } else {
                    let d = (-sh) as u32;
                    (m >> d, m & ((1u128 << d) - 1) != 0)
                }
            }
            Cand::Over => unreachable!(),
        };
        let sticky = v.rest().sticky();
        let sum = h + l;
        if two_w > sum {
            // 2v >= 2W >= sum + 1 > lo + hi
            return Ordering::Greater;
        }
        let d = sum - two_w;
        match (d, sticky, lfrac) {
            (0, false, false) => Ordering::Equal,
            (0, false, true) => Ordering::Less,
            (0, true, false) => Ordering::Greater,
            // sub-grid information on both sides; treated as below the midpoint
            _ => Ordering::Less,
        }
    }

    fn mant_of(c: Cand) -> (i64, u64, u32) {
        match c {
            Cand::Val { exp, frac, fs } => (exp, (1u64 << fs) | frac, fs),
            _ => unreachable!(),
        }
    }

    /// Choose between neighbours `lo <= |v| < hi`.
    fn choose(&self, v: &UnboundedFloat, neg: bool, mut lo: Cand, mut hi: Cand, mode: RoundingMode) -> Result<u64, ()> {
        let mut lo_m = self.materialize(lo, neg);
        while lo_m.is_none() && lo != Cand::Zero {
            lo = self.next_down(lo);
            lo_m = self.materialize(lo, neg);
        }
        let mut hi_m = self.materialize(hi, neg);
        while hi_m.is_none() && hi != Cand::Over {
            hi = self.next_up(hi);
            hi_m = self.materialize(hi, neg);
        }
        let lo_m = lo_m.unwrap();
        if mode == RoundingMode::RZ {
            return Ok(lo_m);
        }
        // the value just past the largest one, as if its binade continued
        let over_next = {
            let (e, m, fs) = Self::mant_of(self.val_at(self.emax, true));
            let m1 = m + 1;
            if m1 >> (fs + 1) != 0 {
                (e + 1, m1 >> 1, fs)
            } else {
                (e, m1, fs)
            }
        };
        match Self::cmp_mid(v, lo, hi, over_next) {
            Ordering::Less => Ok(lo_m),
            Ordering::Greater => hi_m.ok_or(()),
            Ordering::Equal => {
                if lo_m & 1 == 0 {
                    Ok(lo_m)
                } else {
                    hi_m.ok_or(())
                }
            }
        }
    }

    /// Round a value into the format. Returns the full bit pattern.
    pub fn fit(&self, v: &UnboundedFloat, mode: RoundingMode) -> u64 {
        if v.is_zero() {
            return 0;
        }
        let neg = v.is_negative();
        let posit = self.is_posit();
        let e = v.exponent();
        let result: Result<u64, ()> = if e > self.emax {
            Err(())
        } else if e < self.emin {
            if posit {
                Ok(self.materialize(self.val_at(self.emin, false), neg).unwrap())
            } else {
                self.choose(v, neg, Cand::Zero, self.val_at(self.emin, false), mode)
            }
        } else if let Some((si, i)) = self.locate(e) {
            let fs = self.segs[si].fs;
            let (q, _) = v.round_to_ulp(e - fs as i64, mode);
            if q >> (fs + 1) == 0 {
                let frac = q as u64 & ((1u64 << fs) - 1);
                let mag = self.segs[si].prefix(i) | frac;
                if self.reserved(neg, mag) {
                    let c = Cand::Val { exp: e, frac, fs };
                    match self.materialize(c, neg) {
                        Some(m) => Ok(m),
                        None => {
                            let (q, _) = v.round_to_ulp(e - fs as i64, RoundingMode::RZ);
                            let f = q as u64 & ((1u64 << fs) - 1);
                            let lo = Cand::Val { exp: e, frac: f, fs };
                            self.choose(v, neg, lo, self.next_up(lo), mode)
                        }
                    }
                } else {
                    Ok(self.assemble(neg, mag))
                }
            } else {
                let lo = Cand::Val { exp: e, frac: (1u64 << fs) - 1, fs };
                self.choose(v, neg, lo, self.next_up(lo), mode)
            }
        } else {
            let f = self.floor_exp(e).expect("exponent above minimum");
            let lo = self.val_at(f, true);
            self.choose(v, neg, lo, self.next_up(lo), mode)
        };
        match result {
            Ok(p) => p,
            Err(()) if posit => self.materialize(self.val_at(self.emax, true), neg).unwrap(),
            Err(()) => self.error_pattern(),
        }
    }

    /// Pattern of the largest finite positive value.
    pub fn max_pattern(&self) -> u64 {
        self.materialize(self.val_at(self.emax, true), false).unwrap()
    }

    /// Pattern of the smallest positive value.
    pub fn min_pattern(&self) -> u64 {
        let mut c = self.val_at(self.emin, false);
        loop {
            if let Some(m) = self.materialize(c, false) {
                return m;
            }
            c = self.next_up(c);
        }
    }
}
