//! Evaluation harness: dynamic range, density, golden zone, unary accuracy
//! distributions, exhaustive binary sweeps and throughput.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::exact::{ArithOp, ExactRational, SeriesFn};
use crate::float::{fc_arith, UnboundedFloat};
use crate::formats::{Codec, FormatError, Num};
use crate::hiprec::{exp_enclosure, ln_enclosure, pow_enclosure, sin_enclosure, Dyadic};
use crate::math::{
    decimal_accuracy, digits_from_delta, digits_from_log2_gap, exact_root, fun_num, AccuracyResult, UnaryFn, MAX_DIGITS,
};
use crate::par::Exec;

/// Default width cap for exhaustive binary sweeps.
pub const BINARY_WIDTH_CAP: u32 = 12;

fn check_cap(codec: &Codec, cap: u32) -> Result<(), FormatError> {
    if codec.width() > cap {
        Err(FormatError::WidthOverCap { width: codec.width(), cap })
    } else {
        Ok(())
    }
}

/// Distinct finite nonzero magnitudes in increasing order.
pub fn distinct_magnitudes(codec: &Codec, cap: u32) -> Result<Vec<UnboundedFloat>, FormatError> {
    let mut v: Vec<UnboundedFloat> = codec
        .enumerate(cap)?
        .filter_map(|(_, n)| match n {
            Num::Finite(f) => Some(f.abs()),
            _ => None,
        })
        .collect();
    v.sort_by(|a, b| a.cmp_abs(b));
    v.dedup_by(|a, b| a.cmp_abs(b) == Ordering::Equal);
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicRange {
    pub min_abs: ExactRational,
    /// Largest, second and third largest distinct magnitudes.
    pub max: Vec<ExactRational>,
    /// `log10(max / min_abs)`.
    pub dr: f64,
}

pub fn dynamic_range(codec: &Codec, cap: u32) -> Result<DynamicRange, FormatError> {
    let mags = distinct_magnitudes(codec, cap)?;
    let min = mags.first().expect("format has a nonzero value");
    let top = mags.last().unwrap();
    let dr = (top.log2_abs() - min.log2_abs()) * std::f64::consts::LOG10_2;
    Ok(DynamicRange {
        min_abs: min.to_rational(),
        max: mags.iter().rev().take(3).map(|m| m.to_rational()).collect(),
        dr,
    })
}

/// `floor(log10 |v|)` for nonzero `v`, exact at powers of ten.
pub fn floor_log10(v: &UnboundedFloat) -> i64 {
    let est = v.log2_abs() * std::f64::consts::LOG10_2;
    let k = est.floor() as i64;
    if (est - est.round()).abs() > 1e-6 {
        return k;
    }
    // near a decade boundary: settle it exactly
    let a = v.to_rational().abs();
    let ten = ExactRational::from_integer(10);
    let mut k = est.round() as i64;
    while a < ten.pow(k).unwrap() {
        k -= 1;
    }
    while a >= ten.pow(k + 1).unwrap() {
        k += 1;
    }
    k
}

/// Distinct magnitudes per decade `floor(log10 |v|)`.
pub fn density_histogram(codec: &Codec, cap: u32) -> Result<BTreeMap<i64, u64>, FormatError> {
    let mut h = BTreeMap::new();
    for m in distinct_magnitudes(codec, cap)? {
        *h.entry(floor_log10(&m)).or_insert(0) += 1;
    }
    Ok(h)
}

/// Distinct magnitudes strictly between `lo` and `hi`.
pub fn golden_zone_count(codec: &Codec, lo: &ExactRational, hi: &ExactRational, cap: u32) -> Result<u64, FormatError> {
    let (l2lo, l2hi) = (lo.log2_abs(), hi.log2_abs());
    let mut n = 0;
    for m in distinct_magnitudes(codec, cap)? {
        let l = m.log2_abs();
        // exact comparison only close to the bounds
        if l < l2lo - 1.0 || l > l2hi + 1.0 {
            continue;
        }
        let r = m.to_rational();
        if &r > lo && &r < hi {
            n += 1;
        }
    }
    Ok(n)
}

/// Reference used for exp, ln and sin in unary sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceMode {
    /// Exact partial sum of 30 series terms, for arguments within
    /// `2^±TAYLOR_EXP_LIMIT`; beyond that the precise value.
    #[default]
    Taylor30,
    /// Function value at 128+ bits.
    Precise,
}

/// Series terms of the Taylor reference.
pub const TAYLOR_TERMS: u32 = 30;
/// Largest argument exponent for which the series reference is evaluated.
pub const TAYLOR_EXP_LIMIT: i64 = 64;

const REF_BITS: u32 = 160;

enum Reference {
    Rational(ExactRational),
    Dyadic(Dyadic),
    Undefined,
}

fn reference_value(fun: &UnaryFn, x: &UnboundedFloat, mode: ReferenceMode) -> Reference {
    let xr = || x.to_rational();
    let d = Dyadic::from_float(x);
    let series = |f: SeriesFn| -> Option<Reference> {
        if mode == ReferenceMode::Taylor30 && (x.is_zero() || x.exponent().abs() <= TAYLOR_EXP_LIMIT) {
            Some(match ExactRational::taylor_eval(f, &xr(), TAYLOR_TERMS) {
                Ok(r) => Reference::Rational(r),
                Err(_) => Reference::Undefined,
            })
        } else {
            None
        }
    };
    match fun {
        UnaryFn::Sqrt | UnaryFn::Root(_) => {
            let n = if let UnaryFn::Root(n) = fun { *n } else { 2 };
            let r = xr();
            if r.is_negative() && n % 2 == 0 {
                return Reference::Undefined;
            }
            match exact_root(&r, n) {
                Some(e) => Reference::Rational(e),
                None => Reference::Rational(r.root_approx(n, 128).unwrap()),
            }
        }
        UnaryFn::Inverse => match xr().recip() {
            Ok(r) => Reference::Rational(r),
            Err(_) => Reference::Undefined,
        },
        UnaryFn::Exp => series(SeriesFn::Exp).unwrap_or_else(|| {
            if x.is_zero() {
                Reference::Rational(ExactRational::one())
            } else {
                Reference::Dyadic(exp_enclosure(&d, REF_BITS).midpoint())
            }
        }),
        UnaryFn::Sin => series(SeriesFn::Sin).unwrap_or_else(|| {
            if x.is_zero() {
                Reference::Rational(ExactRational::zero())
            } else {
                Reference::Dyadic(sin_enclosure(&d, REF_BITS).midpoint())
            }
        }),
        UnaryFn::Ln => {
            if x.is_zero() || x.is_negative() {
                return Reference::Undefined;
            }
            series(SeriesFn::Ln).unwrap_or_else(|| Reference::Dyadic(ln_enclosure(&d, REF_BITS).midpoint()))
        }
        UnaryFn::Pow(y) => {
            if y.is_integer() {
                return match xr().pow(y.numer().try_into().unwrap_or(i64::MAX)) {
                    Ok(r) => Reference::Rational(r),
                    Err(_) => Reference::Undefined,
                };
            }
            if x.is_zero() || x.is_negative() {
                return Reference::Undefined;
            }
            match Dyadic::from_rational(y) {
                Some(yd) => Reference::Dyadic(pow_enclosure(&d, &yd, REF_BITS).midpoint()),
                None => Reference::Undefined,
            }
        }
    }
}

fn accuracy_against(computed: &Num, reference: &Reference) -> AccuracyResult {
    match reference {
        Reference::Undefined => AccuracyResult::Wrong,
        Reference::Rational(r) => decimal_accuracy(computed.to_rational().as_ref(), r),
        Reference::Dyadic(r) => match computed {
            Num::Finite(c) => {
                if r.is_zero() || c.is_negative() != r.is_negative() {
                    return AccuracyResult::Wrong;
                }
                let gap = c.exponent() + 1 - r.mag();
                if gap.abs() > 64 {
                    return AccuracyResult::Digits(digits_from_log2_gap(gap as f64));
                }
                decimal_accuracy(Some(&c.to_rational()), &r.to_rational())
            }
            Num::Zero { .. } => {
                if r.is_zero() {
                    AccuracyResult::Exact
                } else {
                    AccuracyResult::Wrong
                }
            }
            _ => AccuracyResult::Wrong,
        },
    }
}

fn in_domain(fun: &UnaryFn, v: &UnboundedFloat) -> bool {
    match fun {
        UnaryFn::Sqrt => !v.is_negative() || v.is_zero(),
        UnaryFn::Root(n) => n % 2 == 1 || !v.is_negative() || v.is_zero(),
        UnaryFn::Inverse => !v.is_zero(),
        UnaryFn::Ln => !v.is_zero() && !v.is_negative(),
        UnaryFn::Exp | UnaryFn::Sin => true,
        UnaryFn::Pow(y) => {
            if v.is_zero() {
                !y.is_negative()
            } else {
                y.is_integer() || !v.is_negative()
            }
        }
    }
}

/// Accuracy of one unary evaluation on a decoded operand.
pub fn unary_accuracy(codec: &Codec, fun: &UnaryFn, x: &Num, mode: ReferenceMode) -> Option<AccuracyResult> {
    let v = x.as_float(codec.work_fs())?;
    if !in_domain(fun, &v) {
        return None;
    }
    let p = fun_num(codec, fun, x);
    let c = codec.decode(p);
    if !matches!(c, Num::Finite(_) | Num::Zero { .. }) {
        return Some(AccuracyResult::Wrong);
    }
    Some(accuracy_against(&c, &reference_value(fun, &v, mode)))
}

/// Sorted accuracy digits of a unary function over every finite operand in
/// its domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnaryResult {
    pub desc: String,
    pub fun: String,
    /// Ascending; Exact results count as the cap.
    pub digits: Vec<f64>,
    pub exact: u64,
}

impl UnaryResult {
    /// Fraction of results with at least `d` digits.
    pub fn fraction_at_least(&self, d: f64) -> f64 {
        if self.digits.is_empty() {
            return 0.0;
        }
        let below = self.digits.partition_point(|&x| x < d);
        (self.digits.len() - below) as f64 / self.digits.len() as f64
    }

    /// Empirical CDF sampled at `points`.
    pub fn cdf(&self, points: &[f64]) -> Vec<(f64, f64)> {
        points.iter().map(|&p| (p, 1.0 - self.fraction_at_least_strict(p))).collect()
    }

    fn fraction_at_least_strict(&self, d: f64) -> f64 {
        let upto = self.digits.partition_point(|&x| x <= d);
        (self.digits.len() - upto) as f64 / self.digits.len().max(1) as f64
    }
}

pub fn unary_sweep(
    codec: &Codec,
    fun: &UnaryFn,
    mode: ReferenceMode,
    exec: Exec,
    cap: u32,
) -> Result<UnaryResult, FormatError> {
    check_cap(codec, cap)?;
    let n = 1u64 << codec.width();
    let res = exec.map(0..n, |p| unary_accuracy(codec, fun, &codec.decode(p), mode));
    let mut exact = 0;
    let mut digits: Vec<f64> = res
        .into_iter()
        .flatten()
        .map(|a| {
            exact += a.is_exact() as u64;
            a.digits()
        })
        .collect();
    digits.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(UnaryResult { desc: codec.desc().to_string(), fun: fun.name(), digits, exact })
}

/// Outcome of one binary operation against its exact reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairOutcome {
    Exact,
    Inexact(f64),
    /// An operand is NaN, NaR, NR or infinite.
    SpecialOperand,
    /// Finite operands without a finite reference (division by zero).
    Undefined,
    /// Finite reference, error or infinite result.
    SpecialResult,
}

impl PairOutcome {
    pub fn is_special(self) -> bool {
        matches!(self, PairOutcome::SpecialOperand | PairOutcome::Undefined | PairOutcome::SpecialResult)
    }
}

/// How special pairs enter the summary figures.
///
/// `Strict` counts only computed == reference as exact and averages over
/// inexact finite results. `Lenient` also counts pairs with a special operand
/// or an undefined reference as exact, and scores special results from finite
/// references as 0 digits in the average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Convention {
    #[default]
    Strict,
    Lenient,
}

impl std::str::FromStr for Convention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(Convention::Strict),
            "lenient" => Ok(Convention::Lenient),
            _ => Err(format!("unknown convention `{s}` (strict, lenient)")),
        }
    }
}

/// Number of 0.1-digit histogram bins.
pub const HIST_BINS: usize = 161;
const ACC_SCALE: f64 = (1u64 << 40) as f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepStats {
    pub op: ArithOp,
    pub total_pairs: u64,
    pub exact_count: u64,
    /// Pairs with a NaN, NaR, NR or infinite operand.
    pub special_operand_count: u64,
    pub undefined_count: u64,
    pub special_result_count: u64,
    /// Sum of inexact digits in units of 2^-40; integer so merges are exact.
    pub accuracy_sum_fixed: u128,
    /// Inexact results in 0.1-digit bins.
    pub histogram: Vec<u64>,
    pub kops: f64,
}

impl SweepStats {
    pub fn new(op: ArithOp) -> Self {
        SweepStats {
            op,
            total_pairs: 0,
            exact_count: 0,
            special_operand_count: 0,
            undefined_count: 0,
            special_result_count: 0,
            accuracy_sum_fixed: 0,
            histogram: vec![0; HIST_BINS],
            kops: 0.0,
        }
    }

    pub fn record(&mut self, o: PairOutcome) {
        self.total_pairs += 1;
        match o {
            PairOutcome::Exact => self.exact_count += 1,
            PairOutcome::SpecialOperand => self.special_operand_count += 1,
            PairOutcome::Undefined => self.undefined_count += 1,
            PairOutcome::SpecialResult => self.special_result_count += 1,
            PairOutcome::Inexact(d) => {
                self.accuracy_sum_fixed += (d * ACC_SCALE).round() as u128;
                self.histogram[((d * 10.0).floor() as usize).min(HIST_BINS - 1)] += 1;
            }
        }
    }

    pub fn merge(&mut self, o: &SweepStats) {
        self.total_pairs += o.total_pairs;
        self.exact_count += o.exact_count;
        self.special_operand_count += o.special_operand_count;
        self.undefined_count += o.undefined_count;
        self.special_result_count += o.special_result_count;
        self.accuracy_sum_fixed += o.accuracy_sum_fixed;
        for (a, b) in self.histogram.iter_mut().zip(&o.histogram) {
            *a += b;
        }
    }

    pub fn special_count(&self) -> u64 {
        self.special_operand_count + self.undefined_count + self.special_result_count
    }

    pub fn inexact_count(&self) -> u64 {
        self.total_pairs - self.exact_count - self.special_count()
    }

    fn pct(&self, n: u64) -> f64 {
        if self.total_pairs == 0 {
            0.0
        } else {
            100.0 * n as f64 / self.total_pairs as f64
        }
    }

    pub fn exact_pct(&self, conv: Convention) -> f64 {
        match conv {
            Convention::Strict => self.pct(self.exact_count),
            Convention::Lenient => self.pct(self.exact_count + self.special_operand_count + self.undefined_count),
        }
    }

    pub fn special_pct(&self) -> f64 {
        self.pct(self.special_count())
    }

    pub fn special_operand_pct(&self) -> f64 {
        self.pct(self.special_operand_count)
    }

    /// Mean digits over inexact results; 0 when there are none.
    pub fn avg_digits(&self, conv: Convention) -> f64 {
        let n = match conv {
            Convention::Strict => self.inexact_count(),
            Convention::Lenient => self.inexact_count() + self.special_result_count,
        };
        if n == 0 {
            0.0
        } else {
            self.accuracy_sum_fixed as f64 / ACC_SCALE / n as f64
        }
    }
}

/// Per-pair accuracy, row and column in pattern order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorGrid {
    pub n: usize,
    /// Digits clamped to [0, 10], quantized to 0..=255.
    pub cells: Vec<u8>,
}

/// Digits at or above this render black.
pub const GRID_MAX_DIGITS: f64 = 10.0;

impl ColorGrid {
    pub fn level(o: PairOutcome) -> u8 {
        let d = match o {
            PairOutcome::Exact => GRID_MAX_DIGITS,
            PairOutcome::Inexact(d) => d,
            _ => 0.0,
        };
        (d.clamp(0.0, GRID_MAX_DIGITS) / GRID_MAX_DIGITS * 255.0).round() as u8
    }

    pub fn digits(&self, row: usize, col: usize) -> f64 {
        self.cells[row * self.n + col] as f64 / 255.0 * GRID_MAX_DIGITS
    }

    /// Plain PGM with black for high accuracy and white for none.
    pub fn to_pgm(&self) -> String {
        let mut s = format!("P2\n{} {}\n255\n", self.n, self.n);
        for row in self.cells.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|&c| (255 - c).to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Decoded pattern table for fast pair evaluation.
pub struct PreparedFormat {
    codec: Codec,
    nums: Vec<Num>,
    fs: u32,
}

impl PreparedFormat {
    pub fn new(codec: Codec) -> Self {
        let nums = (0..1u64 << codec.width()).map(|p| codec.decode(p)).collect();
        let fs = codec.work_fs();
        PreparedFormat { codec, nums, fs }
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn is_special(&self, p: u64) -> bool {
        !matches!(self.nums[p as usize], Num::Finite(_) | Num::Zero { .. })
    }

    /// Classifies `a op b`; the reference is the exact result held (with
    /// rest bits) by the working float.
    pub fn pair(&self, op: ArithOp, a: u64, b: u64) -> PairOutcome {
        let (x, y) = (&self.nums[a as usize], &self.nums[b as usize]);
        let (Some(xf), Some(yf)) = (x.as_float(self.fs), y.as_float(self.fs)) else {
            return PairOutcome::SpecialOperand;
        };
        let Ok(r) = fc_arith(op, &xf, &yf, self.fs) else {
            return PairOutcome::Undefined;
        };
        let p = self.codec.encode_float(&r);
        match &self.nums[p as usize] {
            Num::Zero { .. } => {
                if r.is_zero() {
                    PairOutcome::Exact
                } else {
                    PairOutcome::Inexact(0.0)
                }
            }
            Num::Finite(c) => {
                if r.is_zero() || c.is_negative() != r.is_negative() {
                    return PairOutcome::Inexact(0.0);
                }
                if r.is_exact() && c.exponent() == r.exponent() && c.mantissa() == r.mantissa() {
                    return PairOutcome::Exact;
                }
                if op == ArithOp::Div {
                    // the quotient keeps only guard bits, so form c / (x/y) as c*y/x
                    return PairOutcome::Inexact(quotient_digits(c, &xf, &yf));
                }
                PairOutcome::Inexact(ratio_digits(c, &r))
            }
            _ => PairOutcome::SpecialResult,
        }
    }
}

/// `(a * 2^sa - b * 2^sb) / (b * 2^sb)` in integers when the operands align
/// within 128 bits.
fn aligned_delta(a: u128, sa: i64, b: u128, sb: i64) -> Option<f64> {
    let d = sa - sb;
    let room = |v: u128, k: i64| (0..=4).contains(&k) && v.leading_zeros() as i64 > k + 1;
    let (a2, b2) = if d >= 0 {
        if !room(a, d) {
            return None;
        }
        (a << d, b)
    } else {
        if !room(b, -d) {
            return None;
        }
        (a, b << -d)
    };
    let diff = a2 as i128 - b2 as i128;
    Some(diff as f64 / b2 as f64)
}

/// Decimal accuracy of `c` against `r` from significands and exponents.
fn ratio_digits(c: &UnboundedFloat, r: &UnboundedFloat) -> f64 {
    if let Some(delta) = aligned_delta((c.mantissa() as u128) << 64, c.exponent(), r.significand_wide(), r.exponent()) {
        return delta_digits(delta);
    }
    let gap = c.exponent() - r.exponent();
    let q = c.significand_f64() / r.significand_f64();
    if gap.abs() > 60 {
        return digits_from_log2_gap(gap as f64 + q.log2());
    }
    q_digits(q * 2f64.powi(gap as i32))
}

/// Accuracy of `c` against `x / y`, via `(c y - x) / x`.
fn quotient_digits(c: &UnboundedFloat, x: &UnboundedFloat, y: &UnboundedFloat) -> f64 {
    let fs = c.fraction_size() as i64;
    let p = c.mantissa() as u128 * y.mantissa() as u128;
    let xm = (x.mantissa() as u128) << fs;
    if let Some(delta) = aligned_delta(p, c.exponent() + y.exponent(), xm, x.exponent()) {
        return delta_digits(delta);
    }
    let gap = c.exponent() + y.exponent() - x.exponent();
    let q = c.significand_f64() * y.significand_f64() / x.significand_f64();
    if gap.abs() > 60 {
        return digits_from_log2_gap(gap as f64 + q.log2());
    }
    q_digits(q * 2f64.powi(gap as i32))
}

fn delta_digits(delta: f64) -> f64 {
    if delta == 0.0 {
        MAX_DIGITS
    } else if delta.abs() < 0.5 {
        digits_from_delta(delta)
    } else {
        digits_from_log2_gap((1.0 + delta).log2())
    }
}

fn q_digits(q: f64) -> f64 {
    let delta = q - 1.0;
    if delta == 0.0 {
        return MAX_DIGITS;
    }
    if delta.abs() < 0.5 {
        digits_from_delta(delta)
    } else {
        digits_from_log2_gap(q.log2())
    }
}

/// The same classification through exact rationals; slow, used to check the
/// fast path.
pub fn pair_outcome_exact(codec: &Codec, op: ArithOp, a: u64, b: u64) -> PairOutcome {
    let (x, y) = (codec.decode(a), codec.decode(b));
    let (Some(xr), Some(yr)) = (x.to_rational(), y.to_rational()) else {
        return PairOutcome::SpecialOperand;
    };
    let Ok(reference) = ExactRational::arith(op, &xr, &yr) else {
        return PairOutcome::Undefined;
    };
    let c = codec.decode(crate::math::nrs_arith(codec, op, a, b));
    match c.to_rational() {
        None => PairOutcome::SpecialResult,
        Some(cr) => match decimal_accuracy(Some(&cr), &reference) {
            AccuracyResult::Exact => PairOutcome::Exact,
            a => PairOutcome::Inexact(a.digits()),
        },
    }
}

/// Random subset of the pair space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subsample {
    pub pairs: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub exec: Exec,
    pub grid: bool,
    pub cap: u32,
    pub subsample: Option<Subsample>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { exec: Exec::Parallel, grid: false, cap: BINARY_WIDTH_CAP, subsample: None }
    }
}

pub struct SweepResult {
    pub stats: SweepStats,
    pub grid: Option<ColorGrid>,
}

const SAMPLE_CHUNK: u64 = 1 << 16;

/// All ordered pattern pairs (or a seeded sample when the width exceeds the
/// cap and a subsample is given).
pub fn binary_sweep(fmt: &PreparedFormat, op: ArithOp, opts: &SweepOptions) -> Result<SweepResult, FormatError> {
    let w = fmt.codec.width();
    let start = Instant::now();
    let (mut stats, grid) = match opts.subsample {
        Some(s) if w > opts.cap || s.pairs < 1u64 << (2 * w.min(31)) => {
            if w > 32 {
                return Err(FormatError::WidthOverCap { width: w, cap: 32 });
            }
            let chunks = s.pairs.div_ceil(SAMPLE_CHUNK);
            let stats = opts.exec.map_fold(
                0..chunks,
                |k| {
                    let mut rng = StdRng::seed_from_u64(s.seed ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15));
                    let mut st = SweepStats::new(op);
                    let m = SAMPLE_CHUNK.min(s.pairs - k * SAMPLE_CHUNK);
                    for _ in 0..m {
                        let a = rng.gen_range(0..1u64 << w);
                        let b = rng.gen_range(0..1u64 << w);
                        st.record(fmt.pair(op, a, b));
                    }
                    st
                },
                SweepStats::new(op),
                |mut acc, st| {
                    acc.merge(&st);
                    acc
                },
            );
            (stats, None)
        }
        _ => {
            check_cap(&fmt.codec, opts.cap)?;
            let n = 1u64 << w;
            let rows = opts.exec.map(0..n, |a| {
                let mut st = SweepStats::new(op);
                let mut cells = if opts.grid { Vec::with_capacity(n as usize) } else { Vec::new() };
                for b in 0..n {
                    let o = fmt.pair(op, a, b);
                    st.record(o);
                    if opts.grid {
                        cells.push(ColorGrid::level(o));
                    }
                }
                (st, cells)
            });
            let mut stats = SweepStats::new(op);
            let mut cells = if opts.grid { Vec::with_capacity((n * n) as usize) } else { Vec::new() };
            for (st, row) in rows {
                stats.merge(&st);
                cells.extend_from_slice(&row);
            }
            let grid = opts.grid.then_some(ColorGrid { n: n as usize, cells });
            (stats, grid)
        }
    };
    let secs = start.elapsed().as_secs_f64().max(1e-9);
    stats.kops = stats.total_pairs as f64 / secs / 1000.0;
    Ok(SweepResult { stats, grid })
}

/// One CSV/JSON row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub desc: String,
    pub op: String,
    pub convention: Convention,
    pub total: u64,
    pub exact_pct: f64,
    pub special_pct: f64,
    pub special_operand_pct: f64,
    pub avg_digits: f64,
    pub kops: f64,
}

impl SweepSummary {
    pub fn new(desc: &str, s: &SweepStats, conv: Convention) -> Self {
        SweepSummary {
            desc: desc.to_string(),
            op: s.op.name().to_string(),
            convention: conv,
            total: s.total_pairs,
            exact_pct: s.exact_pct(conv),
            special_pct: s.special_pct(),
            special_operand_pct: s.special_operand_pct(),
            avg_digits: s.avg_digits(conv),
            kops: s.kops,
        }
    }
}

/// Thousands of `op` evaluations per second on seeded random operands.
pub fn throughput(codec: &Codec, op: ArithOp, duration: Duration, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let w = codec.width();
    let pairs: Vec<(u64, u64)> =
        (0..4096).map(|_| (rng.gen_range(0..=u64::MAX >> (64 - w)), rng.gen_range(0..=u64::MAX >> (64 - w)))).collect();
    let start = Instant::now();
    let mut ops = 0u64;
    let mut sink = 0u64;
    while start.elapsed() < duration {
        for &(a, b) in &pairs {
            sink ^= crate::math::nrs_arith(codec, op, a, b);
        }
        ops += pairs.len() as u64;
    }
    std::hint::black_box(sink);
    ops as f64 / start.elapsed().as_secs_f64() / 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_path_matches_exact_path() {
        let mut rng = StdRng::seed_from_u64(7);
        for d in [
            "floatp:4:7:RE",
            "fixedp:6:6:RE",
            "ieee754:4:7:RE",
            "posit:12:2:RE",
            "morris:12:3:RZ",
            "morrisheb:12:3:RZ",
            "morrisbias:12:3:RE",
            "morrisunary:12:RE",
        ] {
            let f = PreparedFormat::new(Codec::parse(d).unwrap());
            for _ in 0..3000 {
                let (a, b) = (rng.gen_range(0..4096), rng.gen_range(0..4096));
                for op in ArithOp::ALL {
                    let fast = f.pair(op, a, b);
                    let slow = pair_outcome_exact(f.codec(), op, a, b);
                    match (fast, slow) {
                        (PairOutcome::Inexact(x), PairOutcome::Inexact(y)) => {
                            assert!((x - y).abs() < 1e-6, "{d} {op:?} {a:#x} {b:#x}: {x} vs {y}")
                        }
                        _ => assert_eq!(fast, slow, "{d} {op:?} {a:#x} {b:#x}"),
                    }
                }
            }
        }
    }

    #[test]
    fn small_sweep_invariants() {
        let f = PreparedFormat::new(Codec::parse("posit:8:1:RE").unwrap());
        let opts = SweepOptions { grid: true, cap: 8, ..Default::default() };
        let r = binary_sweep(&f, ArithOp::Add, &opts).unwrap();
        let s = &r.stats;
        assert_eq!(s.total_pairs, 65536);
        assert_eq!(s.exact_count + s.special_count() + s.inexact_count(), s.total_pairs);
        assert!(s.exact_pct(Convention::Lenient) >= s.exact_pct(Convention::Strict));
        assert_eq!(s.histogram.iter().sum::<u64>(), s.inexact_count());
        let g = r.grid.unwrap();
        for i in 0..256 {
            for j in 0..256 {
                assert_eq!(g.cells[i * 256 + j], g.cells[j * 256 + i]);
            }
        }
        let seq = binary_sweep(&f, ArithOp::Add, &SweepOptions { exec: Exec::Sequential, ..opts }).unwrap();
        assert_eq!(SweepStats { kops: 0.0, ..seq.stats }, SweepStats { kops: 0.0, ..r.stats.clone() });
        assert!(g.to_pgm().starts_with("P2\n256 256\n255\n"));
    }

    #[test]
    fn fixed_point_add_is_exact_or_overflow() {
        let f = PreparedFormat::new(Codec::parse("fixedp:4:4:RE").unwrap());
        let r = binary_sweep(&f, ArithOp::Add, &SweepOptions { cap: 8, ..Default::default() }).unwrap();
        assert_eq!(r.stats.inexact_count(), 0);
    }

    #[test]
    fn over_cap_is_refused() {
        let f = PreparedFormat::new(Codec::parse("posit:14:2:RE").unwrap());
        assert!(binary_sweep(&f, ArithOp::Add, &SweepOptions::default()).is_err());
        let sub = SweepOptions { subsample: Some(Subsample { pairs: 10_000, seed: 1 }), ..Default::default() };
        let a = binary_sweep(&f, ArithOp::Mul, &sub).unwrap().stats;
        let b = binary_sweep(&f, ArithOp::Mul, &sub).unwrap().stats;
        assert_eq!(a.total_pairs, 10_000);
        assert_eq!(SweepStats { kops: 0.0, ..a }, SweepStats { kops: 0.0, ..b });
    }

    #[test]
    fn histogram_and_golden_zone_partition() {
        let c = Codec::parse("posit:10:1:RE").unwrap();
        let h = density_histogram(&c, 16).unwrap();
        let total: u64 = h.values().sum();
        assert_eq!(total as usize, distinct_magnitudes(&c, 16).unwrap().len());
        let one = ExactRational::one();
        assert_eq!(golden_zone_count(&c, &one, &one, 16).unwrap(), 0);
    }

    #[test]
    fn floor_log10_at_decades() {
        let f = |s: &str| UnboundedFloat::from_rational(&s.parse().unwrap(), 30);
        assert_eq!(floor_log10(&f("1000")), 3);
        assert_eq!(floor_log10(&f("999")), 2);
        assert_eq!(floor_log10(&f("1")), 0);
        assert_eq!(floor_log10(&f("0.5")), -1);
    }

    #[test]
    fn unary_sweep_basics() {
        let c = Codec::parse("posit:8:0:RE").unwrap();
        for fun in UnaryFn::sweep_set() {
            let r = unary_sweep(&c, &fun, ReferenceMode::Taylor30, Exec::Parallel, 16).unwrap();
            assert!(!r.digits.is_empty());
            assert!(r.digits.windows(2).all(|w| w[0] <= w[1]));
            let cdf = r.cdf(&[0.0, 1.0, 2.0, 3.0, 16.0]);
            assert!(cdf.windows(2).all(|w| w[0].1 <= w[1].1));
            assert_eq!(cdf.last().unwrap().1, 1.0);
        }
        // every exact square comes back exact
        let sq = unary_sweep(&c, &UnaryFn::Sqrt, ReferenceMode::Precise, Exec::Sequential, 16).unwrap();
        let squares = (0..256u64)
            .filter_map(|p| c.decode(p).to_rational())
            .filter(|r| {
                !r.is_negative()
                    && exact_root(r, 2).is_some_and(|s| c.decode(c.encode_rational(&s)).to_rational() == Some(s))
            })
            .count() as u64;
        assert_eq!(sq.exact, squares);
    }
}
