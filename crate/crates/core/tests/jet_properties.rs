use crvol::jets::{Jet, Multidegree, C64, W, WB, Z, ZB};
use proptest::prelude::*;

const ORDER: usize = 4;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A random polynomial-plus-transcendental jet around a random base point.
fn jet_strategy() -> impl Strategy<Value = Jet> {
    (
        prop::array::uniform4(-0.8f64..0.8),
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 6),
        0usize..3,
    )
        .prop_map(|(p, k, shape)| {
            let [z, zb, w, wb] = Jet::coordinates(c(p[0], p[1]), c(p[2], p[3]), ORDER);
            let poly = &(&z.scale(c(k[0].0, k[0].1)) + &w.scale(c(k[1].0, k[1].1)))
                + &(&z * &wb).scale(c(k[2].0, k[2].1));
            let extra = match shape {
                0 => (&zb * &w).scale(c(k[3].0, k[3].1)),
                1 => (&z.scale(c(k[4].0, 0.0))).exp(),
                _ => (&w * &wb).add_const(c(1.5, 0.0)).recip().unwrap(),
            };
            (&poly + &extra).add_const(c(k[5].0, k[5].1))
        })
}

fn close(a: &Jet, b: &Jet, tol: f64) -> bool {
    (a - b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz_rule(f in jet_strategy(), g in jet_strategy(), v in 0usize..4) {
        let lhs = (&f * &g).partial(v).unwrap();
        let rhs = &(&f.partial(v).unwrap() * &g.truncate(ORDER - 1))
            + &(&f.truncate(ORDER - 1) * &g.partial(v).unwrap());
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn truncation_commutes_with_products(f in jet_strategy(), g in jet_strategy(), k in 0usize..ORDER) {
        let a = (&f * &g).truncate(k);
        let b = &f.truncate(k) * &g.truncate(k);
        prop_assert!(close(&a, &b, 1e-13));
    }

    #[test]
    fn modulus_squared_is_real(f in jet_strategy()) {
        let m = &f * &f.conjugate_swap();
        prop_assert!(close(&m, &m.conjugate_swap(), 1e-13));
        prop_assert!(m.value().im.abs() < 1e-13 * (1.0 + m.value().norm()));
    }

    #[test]
    fn exp_then_log(f in jet_strategy()) {
        // log needs a positive real constant term, so use a real function
        let g = f.re_part().scale_re(0.3);
        let back = g.exp().ln().unwrap();
        prop_assert!(close(&back, &g, 1e-12));
    }

    #[test]
    fn wirtinger_partials_of_product_of_coordinates(a in 0u8..3) {
        let [z, zb, _, wb] = Jet::coordinates(c(0.3, -0.1), c(0.2, 0.5), ORDER);
        let f = &z.powi(a as u32) * &(&zb * &wb);
        let d = f.wirtinger_partial(&Multidegree::new(a, 1, 0, 1)).unwrap();
        let fact: f64 = (1..=a as u32).map(f64::from).product();
        prop_assert!((d - c(fact, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn slot_constants_are_distinct() {
    let mut s = [Z, ZB, W, WB];
    s.sort();
    assert_eq!(s, [0, 1, 2, 3]);
}
