//! Classic numerical benchmarks, runnable on any format and on exact
//! rationals.
//!
//! Every program is written once against [`Arith`], in a fixed left-to-right
//! evaluation order, so the same operation sequence runs in every format.

use serde::{Deserialize, Serialize};

use crate::exact::{ArithOp, ExactRational};
use crate::formats::{Codec, Num};
use crate::hiprec::{exp_enclosure, ln_enclosure, pi, pow_enclosure, Dyadic};
use crate::math::{decimal_accuracy, exact_root, nrs_arith, nrs_fun, AccuracyResult, UnaryFn};

/// Bits kept by the oracle for irrational intermediates.
pub const ORACLE_BITS: u32 = 256;

/// Number system a benchmark runs in.
pub trait Arith {
    type V: Clone;
    fn label(&self) -> String;
    /// A constant written in the program text.
    fn lit(&self, x: &ExactRational) -> Self::V;
    fn op(&self, op: ArithOp, a: &Self::V, b: &Self::V) -> Self::V;
    fn fun(&self, f: &UnaryFn, a: &Self::V) -> Self::V;
    fn abs(&self, a: &Self::V) -> Self::V;
    /// Exact value, `None` for NaN, NaR, NR, infinities or undefined.
    fn value(&self, a: &Self::V) -> Option<ExactRational>;
    /// Short name of a special value.
    fn special_name(&self, a: &Self::V) -> String;

    fn int(&self, i: i64) -> Self::V {
        self.lit(&ExactRational::from(i))
    }
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V {
        self.op(ArithOp::Add, a, b)
    }
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V {
        self.op(ArithOp::Sub, a, b)
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        self.op(ArithOp::Mul, a, b)
    }
    fn div(&self, a: &Self::V, b: &Self::V) -> Self::V {
        self.op(ArithOp::Div, a, b)
    }
    fn sqrt(&self, a: &Self::V) -> Self::V {
        self.fun(&UnaryFn::Sqrt, a)
    }
    fn is_zero(&self, a: &Self::V) -> bool {
        self.value(a).is_some_and(|v| v.is_zero())
    }
    /// Square-and-multiply over the bits of `n`, low bit first.
    fn pow_squaring(&self, a: &Self::V, mut n: u32) -> Self::V {
        let mut r = self.int(1);
        let mut b = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(&b, &r);
            }
            n >>= 1;
            if n > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }
}

impl Arith for Codec {
    type V = u64;

    fn label(&self) -> String {
        self.desc().to_string()
    }
    fn lit(&self, x: &ExactRational) -> u64 {
        self.encode_literal(x)
    }
    fn op(&self, op: ArithOp, a: &u64, b: &u64) -> u64 {
        nrs_arith(self, op, *a, *b)
    }
    fn fun(&self, f: &UnaryFn, a: &u64) -> u64 {
        nrs_fun(self, f, *a)
    }
    fn abs(&self, a: &u64) -> u64 {
        match self.decode(*a) {
            Num::Finite(v) if v.is_negative() => self.encode(&Num::Finite(v.negate())),
            Num::Zero { .. } => self.encode(&Num::Zero { neg: false }),
            Num::Inf { .. } => self.encode(&Num::Inf { neg: false }),
            _ => *a,
        }
    }
    fn value(&self, a: &u64) -> Option<ExactRational> {
        self.decode(*a).to_rational()
    }
    fn special_name(&self, a: &u64) -> String {
        self.decode(*a).to_string()
    }
}

/// Exact rational arithmetic; irrational functions are evaluated to
/// [`ORACLE_BITS`] bits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Oracle;

fn to_dyadic(x: &ExactRational, bits: u32) -> Dyadic {
    Dyadic::from_rational(x).unwrap_or_else(|| {
        let n = Dyadic { m: x.numer().clone(), e: 0 };
        let d = Dyadic { m: x.denom().clone(), e: 0 };
        n.div(&d, bits)
    })
}

impl Oracle {
    fn eval(f: &UnaryFn, x: &ExactRational) -> Option<ExactRational> {
        let small = |x: &ExactRational| x.abs() < ExactRational::from_ratio(1, 2).unwrap();
        match f {
            UnaryFn::Sqrt => match exact_root(x, 2) {
                Some(r) => Some(r),
                None => x.root_approx(2, ORACLE_BITS).ok(),
            },
            UnaryFn::Root(n) => match exact_root(x, *n) {
                Some(r) => Some(r),
                None => x.root_approx(*n, ORACLE_BITS).ok(),
            },
            UnaryFn::Inverse => x.recip().ok(),
            // the partial sum keeps full relative accuracy in e^x - 1
            UnaryFn::Exp if small(x) => ExactRational::taylor_eval(crate::exact::SeriesFn::Exp, x, 60).ok(),
            UnaryFn::Exp => Some(exp_enclosure(&to_dyadic(x, ORACLE_BITS), ORACLE_BITS).midpoint().to_rational()),
            UnaryFn::Ln if x.signum() > 0 => {
                Some(ln_enclosure(&to_dyadic(x, ORACLE_BITS), ORACLE_BITS).midpoint().to_rational())
            }
            UnaryFn::Ln => None,
            UnaryFn::Sin => {
                Some(crate::hiprec::sin_enclosure(&to_dyadic(x, ORACLE_BITS), ORACLE_BITS).midpoint().to_rational())
            }
            UnaryFn::Pow(y) => {
                if y.is_integer() {
                    return x.pow(y.numer().try_into().ok()?).ok();
                }
                if x.signum() <= 0 {
                    return None;
                }
                let e = pow_enclosure(&to_dyadic(x, ORACLE_BITS), &to_dyadic(y, ORACLE_BITS), ORACLE_BITS);
                Some(e.midpoint().to_rational())
            }
        }
    }
}

impl Arith for Oracle {
    type V = Option<ExactRational>;

    fn label(&self) -> String {
        "rational".to_string()
    }
    fn lit(&self, x: &ExactRational) -> Self::V {
        Some(x.clone())
    }
    fn op(&self, op: ArithOp, a: &Self::V, b: &Self::V) -> Self::V {
        ExactRational::arith(op, a.as_ref()?, b.as_ref()?).ok()
    }
    fn fun(&self, f: &UnaryFn, a: &Self::V) -> Self::V {
        Oracle::eval(f, a.as_ref()?)
    }
    fn abs(&self, a: &Self::V) -> Self::V {
        a.as_ref().map(|v| v.abs())
    }
    fn value(&self, a: &Self::V) -> Option<ExactRational> {
        a.clone()
    }
    fn special_name(&self, _: &Self::V) -> String {
        "undefined".to_string()
    }
}

fn rat(s: &str) -> ExactRational {
    s.parse().expect("benchmark literal")
}

/// `2 * prod (2i)^2 / ((2i-1)(2i+1))`, i = 1..n.
pub fn wallis<A: Arith>(a: &A, n: u32) -> A::V {
    let mut p = a.int(2);
    for i in 1..=n as i64 {
        let num = a.mul(&a.int(2 * i), &a.int(2 * i));
        let den = a.mul(&a.int(2 * i - 1), &a.int(2 * i + 1));
        p = a.mul(&p, &a.div(&num, &den));
    }
    p
}

/// `u(i+2) = 111 - 1130/u(i+1) + 3000/(u(i) u(i+1))` from u0 = 2, u1 = -4,
/// after `steps` applications of the recurrence (u at index steps + 1).
pub fn kahan<A: Arith>(a: &A, steps: u32) -> A::V {
    let (mut u0, mut u1) = (a.int(2), a.int(-4));
    let (c111, c1130, c3000) = (a.int(111), a.int(1130), a.int(3000));
    for _ in 0..steps {
        let t = a.sub(&c111, &a.div(&c1130, &u1));
        let u2 = a.add(&t, &a.div(&c3000, &a.mul(&u0, &u1)));
        u0 = u1;
        u1 = u2;
    }
    u1
}

/// `H(x) = E(Q(x)^2)` with `E(z) = (e^z - 1)/z`, `E(0) = 1` and
/// `Q(x) = |x - sqrt(x^2 + 1)| - 1/(x + sqrt(x^2 + 1))`.
pub fn muller_h<A: Arith>(a: &A, x: i64) -> A::V {
    let one = a.int(1);
    let xv = a.int(x);
    let r = a.sqrt(&a.add(&a.mul(&xv, &xv), &one));
    let q = a.sub(&a.abs(&a.sub(&xv, &r)), &a.div(&one, &a.add(&xv, &r)));
    let z = a.mul(&q, &q);
    if a.is_zero(&z) {
        return one;
    }
    a.div(&a.sub(&a.fun(&UnaryFn::Exp, &z), &one), &z)
}

/// Inputs of the Rump polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RumpInput {
    pub x: i64,
    pub y: i64,
    /// Leading coefficient as a decimal literal.
    pub c: String,
}

impl Default for RumpInput {
    fn default() -> Self {
        RumpInput { x: 77617, y: 33096, c: "333.75".to_string() }
    }
}

impl RumpInput {
    /// The variant with x = 77517 and coefficient 333.74.
    pub fn variant() -> Self {
        RumpInput { x: 77517, y: 33096, c: "333.74".to_string() }
    }
}

/// `c y^6 + x^2 (11 x^2 y^2 - y^6 - 121 y^4 - 2) + 5.5 y^8 + x/(2y)`, powers
/// by binary exponentiation.
pub fn rump<A: Arith>(a: &A, input: &RumpInput) -> A::V {
    let x = a.int(input.x);
    let y = a.int(input.y);
    let x2 = a.pow_squaring(&x, 2);
    let y2 = a.pow_squaring(&y, 2);
    let y4 = a.pow_squaring(&y, 4);
    let y6 = a.pow_squaring(&y, 6);
    let y8 = a.pow_squaring(&y, 8);
    let t1 = a.mul(&a.lit(&rat(&input.c)), &y6);
    let inner = a.mul(&a.mul(&a.int(11), &x2), &y2);
    let inner = a.sub(&inner, &y6);
    let inner = a.sub(&inner, &a.mul(&a.int(121), &y4));
    let inner = a.sub(&inner, &a.int(2));
    let t2 = a.mul(&x2, &inner);
    let t3 = a.mul(&a.lit(&rat("5.5")), &y8);
    let t4 = a.div(&x, &a.mul(&a.int(2), &y));
    a.add(&a.add(&a.add(&t1, &t2), &t3), &t4)
}

/// `(-b + sqrt(b^2 - 4ac)) / (2a)` for a = 3, b = 100, c = 2.
pub fn quadratic_r1<A: Arith>(a: &A) -> A::V {
    let (qa, qb, qc) = (a.int(3), a.int(100), a.int(2));
    let disc = a.sub(&a.mul(&qb, &qb), &a.mul(&a.mul(&a.int(4), &qa), &qc));
    let num = a.add(&a.sub(&a.int(0), &qb), &a.sqrt(&disc));
    a.div(&num, &a.mul(&a.int(2), &qa))
}

/// The ill-conditioned 2x2 system, solved by Cramer's rule.
pub fn bailey<A: Arith>(a: &A) -> (A::V, A::V) {
    let l = |s: &str| a.lit(&rat(s));
    let (a11, a12, b1) = (l("0.25510582"), l("0.52746197"), l("0.79981812"));
    let (a21, a22, b2) = (l("0.80143857"), l("1.65707065"), l("2.51270273"));
    let det = a.sub(&a.mul(&a11, &a22), &a.mul(&a12, &a21));
    let dx = a.sub(&a.mul(&b1, &a22), &a.mul(&a12, &b2));
    let dy = a.sub(&a.mul(&a11, &b2), &a.mul(&b1, &a21));
    (a.div(&dx, &det), a.div(&dy, &det))
}

/// Heron's area for a = 7, b = c = (7 + 2^-25)/2.
pub fn thin_triangle<A: Arith>(a: &A) -> A::V {
    let sa = a.int(7);
    let sb = a.lit(&thin_side());
    let sc = sb.clone();
    let s = a.div(&a.add(&a.add(&sa, &sb), &sc), &a.int(2));
    let r = a.mul(&a.mul(&a.mul(&s, &a.sub(&s, &sa)), &a.sub(&s, &sb)), &a.sub(&s, &sc));
    a.sqrt(&r)
}

fn thin_side() -> ExactRational {
    ExactRational::from(7).add(&ExactRational::pow2(-25)).div(&ExactRational::from(2)).unwrap()
}

/// `((27/10 - e) / (pi - (sqrt 2 + sqrt 3)))^(67/16)` with e = exp(1) and
/// the power taken as `exp(67/16 * ln base)`.
pub fn gustafson_x<A: Arith>(a: &A) -> A::V {
    let p = pi(ORACLE_BITS).to_rational();
    let e = a.fun(&UnaryFn::Exp, &a.int(1));
    let top = a.sub(&a.div(&a.int(27), &a.int(10)), &e);
    let roots = a.add(&a.sqrt(&a.int(2)), &a.sqrt(&a.int(3)));
    let base = a.div(&top, &a.sub(&a.lit(&p), &roots));
    let y = a.div(&a.int(67), &a.int(16));
    a.fun(&UnaryFn::Exp, &a.mul(&y, &a.fun(&UnaryFn::Ln, &base)))
}

/// `x^n / n!` with the power by binary exponentiation and the factorial
/// accumulated from n down to 1.
pub fn power_factorial<A: Arith>(a: &A, x: i64, n: u32) -> A::V {
    let num = a.pow_squaring(&a.int(x), n);
    let mut den = a.int(1);
    for i in (1..=n as i64).rev() {
        den = a.mul(&den, &a.int(i));
    }
    a.div(&num, &den)
}

/// Physical constants of the representation test.
pub const CONSTANTS: [(&str, &str); 5] = [
    ("planck", "6.626070150e-34"),
    ("avogadro", "6.02214076e23"),
    ("light", "299792458"),
    ("charge", "1.602176634e-19"),
    ("boltzmann", "1.380649e-23"),
];

/// The constant as stored by the number system.
pub fn constant<A: Arith>(a: &A, literal: &str) -> A::V {
    a.lit(&rat(literal))
}

/// One rendered cell: a value or a decimal accuracy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub column: String,
    pub text: String,
    pub value: Option<f64>,
}

/// One row of results for a number system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub system: String,
    pub cells: Vec<Cell>,
}

impl BenchRow {
    pub fn cell(&self, column: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.column == column)
    }
}

/// Truncates toward zero at three decimals, scientific outside
/// [1e-3, 1e6).
pub fn render_rational(v: &ExactRational) -> String {
    let a = v.abs();
    let small = ExactRational::from_ratio(1, 1000).unwrap();
    if v.is_zero() || (a >= small && a < ExactRational::from(1_000_000)) {
        let s = v.to_fixed_truncated(3);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".to_string()
        } else {
            s.to_string()
        }
    } else {
        v.to_sci_truncated(3)
    }
}

/// Truncated three-decimal rendering of a digit count.
pub fn render_digits(d: f64) -> String {
    let t = (d * 1000.0).floor() / 1000.0;
    let s = format!("{t:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn show<A: Arith>(a: &A, v: &A::V) -> (String, Option<f64>) {
    match a.value(v) {
        Some(r) => (render_rational(&r), Some(r.to_f64())),
        None => (a.special_name(v), None),
    }
}

fn value_cell<A: Arith>(a: &A, column: &str, vs: &[A::V]) -> Cell {
    let parts: Vec<(String, Option<f64>)> = vs.iter().map(|v| show(a, v)).collect();
    let text = if parts.len() == 1 {
        parts[0].0.clone()
    } else {
        format!("({})", parts.iter().map(|p| p.0.as_str()).collect::<Vec<_>>().join(", "))
    };
    Cell { column: column.to_string(), text, value: parts.first().and_then(|p| p.1) }
}

/// Decimal accuracy of `v` against `reference`; exact scores the cap.
pub fn accuracy_of<A: Arith>(a: &A, v: &A::V, reference: &ExactRational) -> f64 {
    match decimal_accuracy(a.value(v).as_ref(), reference) {
        AccuracyResult::Exact => crate::math::MAX_DIGITS,
        r => r.digits(),
    }
}

fn digits_cell(column: &str, ds: &[f64]) -> Cell {
    let text = if ds.len() == 1 {
        render_digits(ds[0])
    } else {
        format!("({})", ds.iter().map(|d| render_digits(*d)).collect::<Vec<_>>().join(", "))
    };
    Cell { column: column.to_string(), text, value: ds.first().copied() }
}

/// References for the accuracy columns.
pub struct References {
    pub r1: ExactRational,
    pub triangle: ExactRational,
    pub x: ExactRational,
    pub fact: [ExactRational; 2],
}

impl References {
    pub fn compute() -> Self {
        let o = Oracle;
        References {
            r1: quadratic_r1(&o).expect("r1"),
            triangle: thin_triangle(&o).expect("area"),
            x: gustafson_x(&o).expect("x"),
            fact: [power_factorial(&o, 7, 20).unwrap(), power_factorial(&o, 25, 30).unwrap()],
        }
    }
}

pub const MULLER_POINTS: [i64; 4] = [15, 16, 17, 9999];
/// Wallis terms in the table: 30 single factors 2/1, 2/3, 4/3, ...
pub const WALLIS_TERMS: u32 = 15;
pub const KAHAN_STEPS: u32 = 30;

/// Columns: wallis, kahan, muller, rump, r1, bailey.
pub fn table4_row<A: Arith>(a: &A, refs: &References, rump_input: &RumpInput) -> BenchRow {
    let muller: Vec<A::V> = MULLER_POINTS.iter().map(|&x| muller_h(a, x)).collect();
    let (bx, by) = bailey(a);
    BenchRow {
        system: a.label(),
        cells: vec![
            value_cell(a, "wallis", &[wallis(a, WALLIS_TERMS)]),
            value_cell(a, "kahan", &[kahan(a, KAHAN_STEPS)]),
            value_cell(a, "muller", &muller),
            value_cell(a, "rump", &[rump(a, rump_input)]),
            digits_cell("r1", &[accuracy_of(a, &quadratic_r1(a), &refs.r1)]),
            value_cell(a, "bailey", &[bx, by]),
        ],
    }
}

/// Columns: triangle, x, fact, then one per physical constant.
pub fn table5_row<A: Arith>(a: &A, refs: &References) -> BenchRow {
    let mut cells = vec![
        digits_cell("triangle", &[accuracy_of(a, &thin_triangle(a), &refs.triangle)]),
        digits_cell("x", &[accuracy_of(a, &gustafson_x(a), &refs.x)]),
        digits_cell(
            "fact",
            &[
                accuracy_of(a, &power_factorial(a, 7, 20), &refs.fact[0]),
                accuracy_of(a, &power_factorial(a, 25, 30), &refs.fact[1]),
            ],
        ),
    ];
    for (name, lit) in CONSTANTS {
        cells.push(digits_cell(name, &[accuracy_of(a, &constant(a, lit), &rat(lit))]));
    }
    BenchRow { system: a.label(), cells }
}

/// The 32-bit systems of the benchmark tables.
pub const TABLE4_SYSTEMS: [&str; 8] = [
    "floatp:8:23:RE",
    "fixedp:16:16:RE",
    "ieee754:8:23:RE",
    "posit:32:2:RE",
    "morris:32:4:RZ",
    "morrisheb:32:4:RZ",
    "morrisbias:32:4:RE",
    "morrisunary:32:RE",
];

pub const TABLE5_SYSTEMS: [&str; 7] = [
    "fixedp:16:16:RE",
    "ieee754:8:23:RE",
    "posit:32:2:RE",
    "morris:32:4:RZ",
    "morrisheb:32:4:RZ",
    "morrisbias:32:4:RE",
    "morrisunary:32:RE",
];
