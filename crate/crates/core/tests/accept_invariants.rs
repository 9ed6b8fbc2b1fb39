use proptest::prelude::*;

use nrs_core::bench::{binary_sweep, PairOutcome, PreparedFormat, SweepOptions};
use nrs_core::exact::{ArithOp, ExactRational};
use nrs_core::formats::{Codec, Num};
use nrs_core::litbench::{table4_row, References, RumpInput};
use nrs_core::math::{decimal_accuracy, nrs_arith};
use nrs_core::par::Exec;

const WIDE: [&str; 6] = [
    "ieee754:8:23:RE",
    "floatp:8:23:RE",
    "posit:32:2:RE",
    "morrisbias:32:4:RE",
    "morrisunary:32:RE",
    "fixedp:16:16:RE",
];

fn codec(d: &str) -> Codec {
    Codec::parse(d).unwrap()
}

fn arb_rational() -> impl Strategy<Value = ExactRational> {
    (any::<i32>(), 1i64..1 << 40, -80i64..80)
        .prop_map(|(n, d, e)| ExactRational::from_ratio(n as i64, d).unwrap().mul(&ExactRational::pow2(e)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rational_field_laws(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a);
    }

    #[test]
    fn wide_round_trip(i in 0usize..WIDE.len(), bits in any::<u32>()) {
        let c = codec(WIDE[i]);
        let x = c.decode(bits as u64);
        if let Num::Finite(_) = x {
            prop_assert_eq!(c.encode(&x), bits as u64);
        }
    }

    #[test]
    fn bit_compare_is_value_order(i in 0usize..WIDE.len(), p in any::<u32>(), q in any::<u32>()) {
        let c = codec(WIDE[i]);
        let (a, b) = (c.decode(p as u64).to_rational(), c.decode(q as u64).to_rational());
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert_eq!(c.bit_compare(p as u64, q as u64), Some(a.cmp(&b)));
        }
    }

    #[test]
    fn commutative_ops_are_symmetric(i in 0usize..WIDE.len(), a in any::<u32>(), b in any::<u32>()) {
        let c = codec(WIDE[i]);
        for op in [ArithOp::Add, ArithOp::Mul] {
            prop_assert_eq!(nrs_arith(&c, op, a as u64, b as u64), nrs_arith(&c, op, b as u64, a as u64));
        }
    }

    #[test]
    fn encoding_is_monotone(i in 0usize..WIDE.len(), x in arb_rational(), y in arb_rational()) {
        let c = codec(WIDE[i]);
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        let (a, b) = (c.decode(c.encode_rational(&x)), c.decode(c.encode_rational(&y)));
        if let (Some(a), Some(b)) = (a.to_rational(), b.to_rational()) {
            prop_assert!(a <= b, "{} <= {} encoded as {} > {}", x, y, a, b);
        }
    }

    #[test]
    fn accuracy_symmetric_under_inversion(a in 1i64..1 << 40, b in 1i64..1 << 40) {
        let (x, y) = (ExactRational::from_integer(a), ExactRational::from_integer(b));
        let d1 = decimal_accuracy(Some(&x), &y).digits();
        let d2 = decimal_accuracy(Some(&y), &x).digits();
        prop_assert!((d1 - d2).abs() < 1e-9);
    }
}

#[test]
fn sweeps_are_deterministic_and_policy_independent() {
    for d in ["posit:8:1:RE", "morrisheb:8:2:RZ", "ieee754:3:4:RE"] {
        let fmt = PreparedFormat::new(codec(d));
        for op in ArithOp::ALL {
            let run = |exec| {
                let opts = SweepOptions { exec, grid: true, ..Default::default() };
                let r = binary_sweep(&fmt, op, &opts).unwrap();
                let mut s = r.stats;
                s.kops = 0.0;
                (s, r.grid.unwrap())
            };
            let a = run(Exec::Parallel);
            assert_eq!(a, run(Exec::Parallel), "{d} {op:?}");
            assert_eq!(a, run(Exec::Sequential), "{d} {op:?}");
        }
    }
}

#[test]
fn add_grid_is_symmetric() {
    for d in ["floatp:3:4:RE", "ieee754:3:4:RE", "morris:8:2:RZ", "morrisunary:8:RE", "posit:8:0:RE"] {
        let fmt = PreparedFormat::new(codec(d));
        let g =
            binary_sweep(&fmt, ArithOp::Add, &SweepOptions { grid: true, ..Default::default() }).unwrap().grid.unwrap();
        for r in 0..g.n {
            for c in 0..r {
                assert_eq!(g.cells[r * g.n + c], g.cells[c * g.n + r], "{d} ({r}, {c})");
            }
        }
    }
}

#[test]
fn fixed_point_add_is_exact_or_special() {
    let fmt = PreparedFormat::new(codec("fixedp:4:4:RE"));
    for a in 0..256 {
        for b in 0..256 {
            let o = fmt.pair(ArithOp::Add, a, b);
            assert!(matches!(o, PairOutcome::Exact) || o.is_special(), "{a:#x} + {b:#x}: {o:?}");
        }
    }
}

fn duplicate_count(d: &str) -> usize {
    let c = codec(d);
    let mut vals: Vec<ExactRational> = (0..1u64 << c.width()).filter_map(|p| c.decode(p).to_rational()).collect();
    let n = vals.len();
    vals.sort();
    vals.dedup();
    n - vals.len()
}

#[test]
fn hidden_exponent_bit_removes_duplicates() {
    for (m, h) in [("morris:12:3:RZ", "morrisheb:12:3:RZ"), ("morris:16:4:RZ", "morrisheb:16:4:RZ")] {
        let (dm, dh) = (duplicate_count(m), duplicate_count(h));
        assert!(dm > 0, "{m}");
        assert!(dh < dm, "{h}: {dh} vs {dm}");
    }
    for d in ["posit:12:2:RE", "morrisbias:12:3:RE", "morrisunary:12:RE"] {
        assert_eq!(duplicate_count(d), 0, "{d}");
    }
}

#[test]
fn benchmarks_are_deterministic() {
    let refs = References::compute();
    let c = codec("morrisbias:32:4:RE");
    let a = table4_row(&c, &refs, &RumpInput::default());
    assert_eq!(a, table4_row(&c, &refs, &RumpInput::default()));
    let v = table4_row(&c, &refs, &RumpInput::variant());
    assert_eq!(a.cell("wallis"), v.cell("wallis"));
}
