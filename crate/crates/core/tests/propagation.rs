use dtmm_core::basis::psi;
use dtmm_core::oracle::{rk_solve, OracleConfig};
use dtmm_core::profiles::{CoefficientProfile, QuadratureConfig};
use dtmm_core::propagate::{chained_transfer, make_partition, solve_ivp};
use dtmm_core::transfer::{build_q, Interval, State, TransferMatrix};
use nalgebra::Matrix4;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn real(g: &str) -> CoefficientProfile {
    CoefficientProfile::parse(g, None, -6.0, 6.0).unwrap()
}

fn complex(g: &str, h: &str) -> CoefficientProfile {
    CoefficientProfile::parse(g, Some(h), -6.0, 6.0).unwrap()
}

fn to_nalgebra(q: &TransferMatrix) -> Matrix4<f64> {
    let a = q.to_array();
    Matrix4::from_fn(|i, j| a[i][j])
}

fn smooth_profiles() -> Vec<CoefficientProfile> {
    vec![
        real("1 + 0.5*sin(x)"),
        real("2 - x + 0.3*x^2"),
        real("exp(-x^2) + 0.5"),
        complex("1 + 0.4*cos(2*x)", "0.3*x"),
    ]
}

#[test]
fn decomposition_defect_shrinks_with_interval() {
    for p in smooth_profiles() {
        for corrected in [false, true] {
            let defect = |len: f64| {
                let (a, x) = (0.3, 0.3 + len);
                let m = 0.5 * (a + x);
                let whole = build_q(&p, Interval::new(a, x), corrected, &cfg()).unwrap();
                let split = build_q(&p, Interval::new(a, m), corrected, &cfg())
                    .unwrap()
                    .then(&build_q(&p, Interval::new(m, x), corrected, &cfg()).unwrap());
                whole.max_abs_diff(&split)
            };
            let (big, small) = (defect(0.8), defect(0.4));
            assert!(big > 0.0);
            assert!(big >= 4.0 * small, "{big} vs {small}");
        }
    }
}

#[test]
fn constant_profile_decomposes_exactly() {
    let p = real("2.25");
    let whole = build_q(&p, Interval::new(-1.0, 2.0), true, &cfg()).unwrap();
    let chained = chained_transfer(&p, &make_partition(-1.0, 2.0, 17).unwrap(), true, &cfg()).unwrap();
    assert!(whole.max_abs_diff(&chained) < 1e-12);
}

#[test]
fn chained_transfer_keeps_unit_determinant() {
    for p in smooth_profiles() {
        for corrected in [false, true] {
            let q = chained_transfer(&p, &make_partition(-2.0, 3.0, 40).unwrap(), corrected, &cfg()).unwrap();
            assert!((q.det() - 1.0).abs() < 1e-9);
            let reference = to_nalgebra(&q).determinant();
            assert!((reference - q.det()).abs() < 1e-10 * reference.abs().max(1.0));
        }
    }
}

#[test]
fn block_algebra_matches_dense_algebra() {
    let p = complex("1.5 - 0.2*x", "0.7*sin(x)");
    let q1 = build_q(&p, Interval::new(0.0, 0.7), true, &cfg()).unwrap();
    let q2 = build_q(&p, Interval::new(0.7, 1.9), false, &cfg()).unwrap();
    let product = to_nalgebra(&(q2 * q1));
    assert!((product - to_nalgebra(&q2) * to_nalgebra(&q1)).abs().max() < 1e-14);

    let inv = to_nalgebra(&q1.inverse().unwrap());
    let dense_inv = to_nalgebra(&q1).try_inverse().unwrap();
    assert!((inv - dense_inv).abs().max() < 1e-12);
}

fn round_trip_error(p: &CoefficientProfile, s0: State, corrected: bool, n: usize) -> f64 {
    let there = solve_ivp(p, &make_partition(-1.0, 2.5, n).unwrap(), s0, corrected, 1, &cfg()).unwrap();
    let back = solve_ivp(p, &make_partition(2.5, -1.0, n).unwrap(), there.last().state, corrected, 1, &cfg()).unwrap();
    back.last().state.max_abs_diff(&s0)
}

#[test]
fn forward_then_backward_returns_initial_state() {
    let s0 = State::new(0.4, -1.1, 0.9, 0.2);
    for p in smooth_profiles() {
        for n in [32, 64, 128] {
            assert!(round_trip_error(&p, s0, false, n) < 1e-8);
        }
    }
}

#[test]
fn corrected_round_trip_converges_at_third_order() {
    // the corrected step is not its own inverse under reversal, so the
    // round trip carries a discretisation residue that vanishes as h³
    let s0 = State::new(0.4, -1.1, 0.9, 0.2);
    for p in smooth_profiles() {
        let errors: Vec<f64> = [32, 64, 128].iter().map(|&n| round_trip_error(&p, s0, true, n)).collect();
        assert!(errors[0] < 1e-3, "{errors:?}");
        for w in errors.windows(2) {
            assert!(w[0] >= 6.0 * w[1], "{errors:?}");
        }
    }
}

#[test]
fn refinement_converges_to_oracle() {
    let ocfg = OracleConfig::default();
    for p in [real("1 + 0.5*sin(3*x)"), complex("2 + x", "0.5*cos(x)")] {
        let s0 = State::new(1.0, 0.0, 0.5, -0.5);
        let reference = rk_solve(&p, 0.0, s0, 2.0, &ocfg).unwrap();
        for corrected in [false, true] {
            let errors: Vec<f64> = [4, 8, 16, 32, 64, 128, 256]
                .iter()
                .map(|&n| {
                    let part = make_partition(0.0, 2.0, n).unwrap();
                    let end = solve_ivp(&p, &part, s0, corrected, 1, &cfg()).unwrap().last().state;
                    end.max_abs_diff(&reference)
                })
                .collect();
            for w in errors.windows(2) {
                // below 1e-10 the oracle's own error is comparable
                if w[1] > 1e-10 {
                    assert!(w[0] >= 2.0 * w[1], "{corrected}: {errors:?}");
                }
            }
        }
    }
}

#[test]
fn fine_chain_beats_single_step() {
    let p = real("1 + x");
    let s0 = State::real(1.0, 0.0);
    let reference = rk_solve(&p, 0.0, s0, 1.0, &OracleConfig::default()).unwrap();
    let single = build_q(&p, Interval::new(0.0, 1.0), false, &cfg()).unwrap().apply(s0);
    let chained = chained_transfer(&p, &make_partition(0.0, 1.0, 100).unwrap(), false, &cfg()).unwrap().apply(s0);
    assert!(single.max_abs_diff(&chained) > 1e-4);
    assert!(chained.max_abs_diff(&reference) < single.max_abs_diff(&reference));
}

#[test]
fn constant_profile_is_partition_independent() {
    let p = real("3");
    let s0 = State::new(1.0, 0.5, -0.3, 0.8);
    let one = solve_ivp(&p, &make_partition(0.0, 4.0, 1).unwrap(), s0, true, 1, &cfg()).unwrap();
    for n in [3, 10, 57] {
        let many = solve_ivp(&p, &make_partition(0.0, 4.0, n).unwrap(), s0, true, 1, &cfg()).unwrap();
        assert!(many.last().state.max_abs_diff(&one.last().state) < 1e-12);
    }
}

#[test]
fn basis_matches_transfer_blocks() {
    for g in ["1 + 0.5*sin(x)", "-x", "2 - x + 0.3*x^2"] {
        let p = real(g);
        for (a, x) in [(0.0, 1.0), (-1.0, 0.5), (2.0, 0.3)] {
            for corrected in [false, true] {
                let b = psi(&p, a, x, corrected, &cfg()).unwrap();
                let q = build_q(&p, Interval::new(a, x), corrected, &cfg()).unwrap();
                let blocks = [q.upper_left, q.upper_right, q.lower_left, q.lower_right];
                for (value, block) in b.to_array().iter().zip(blocks) {
                    assert!((value - block.a).abs() < 1e-12);
                    assert_eq!(block.b, 0.0);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn complex_form_matches_real_form(
        c in prop::array::uniform4(-2.0f64..2.0),
        s in prop::array::uniform4(-3.0f64..3.0),
        a in -3.0f64..3.0,
        len in -2.0f64..2.0,
        corrected in any::<bool>(),
    ) {
        let g = format!("({:?}) + ({:?})*x", c[0], c[1]);
        let h = format!("({:?}) + ({:?})*sin(x)", c[2], c[3]);
        let p = complex(&g, &h);
        let q = build_q(&p, Interval::new(a, a + len), corrected, &cfg()).unwrap();
        let s0 = State::new(s[0], s[1], s[2], s[3]);
        let m = q.to_complex();
        let (y, dy) = (s0.y(), s0.dy());
        let expected = State::from_complex(m[0][0] * y + m[0][1] * dy, m[1][0] * y + m[1][1] * dy);
        prop_assert_eq!(q.apply(s0), expected);
    }

    #[test]
    fn real_profiles_collapse_to_real_entries(
        c in prop::array::uniform3(-2.0f64..2.0),
        a in -3.0f64..3.0,
        len in -2.0f64..2.0,
    ) {
        let p = real(&format!("({:?}) + ({:?})*cos(({:?})*x)", c[0], c[1], c[2]));
        let m = build_q(&p, Interval::new(a, a + len), true, &cfg()).unwrap().to_complex();
        for row in m {
            for entry in row {
                prop_assert_eq!(entry.im, 0.0);
            }
        }
    }

    #[test]
    fn uncorrected_backward_step_inverts_forward_step(
        c in prop::array::uniform3(-2.0f64..2.0),
        a in -3.0f64..3.0,
        len in -2.0f64..2.0,
    ) {
        let p = complex(&format!("({:?}) + ({:?})*x", c[0], c[1]), &format!("{:?}", c[2]));
        let forward = build_q(&p, Interval::new(a, a + len), false, &cfg()).unwrap();
        let backward = build_q(&p, Interval::new(a + len, a), false, &cfg()).unwrap();
        prop_assert!((backward * forward).max_abs_diff(&TransferMatrix::IDENTITY) < 1e-10);
    }
}
