use proptest::prelude::*;

use admpair::invariants::{chi_arch, chi_nonarch, ArchInput};
use admpair::metgraph::{delta, Admissible, MetrizedGraph, Point, ResistanceKernel};
use admpair::numeric::{int, rat, Rat};
use admpair::symroots::{cross_ratio, sym_discriminant, symroot_pow, Moebius, RootConfig, Triple};

fn config(genus: u32) -> impl Strategy<Value = RootConfig> {
    let n = 2 * genus as usize + 2;
    prop::collection::btree_set(-60i64..60, n)
        .prop_map(move |s| RootConfig::from_finite(genus, s.into_iter().map(int)).unwrap())
}

fn moebius() -> impl Strategy<Value = Moebius> {
    (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4)
        .prop_filter("invertible", |(a, b, c, d)| a * d != b * c)
        .prop_map(|(a, b, c, d)| Moebius::new(int(a), int(b), int(c), int(d)).unwrap())
}

fn length() -> impl Strategy<Value = Rat> {
    (1i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Theta graph with a genus-`h` vertex hanging off one side by a bridge.
fn graph() -> impl Strategy<Value = MetrizedGraph> {
    (length(), length(), length(), length(), 0u32..=1).prop_map(|(a, b, c, e, h)| {
        MetrizedGraph::build(
            &[("u", 0), ("v", 0), ("w", h)],
            &[("u", "v", a), ("u", "v", b), ("u", "v", c), ("v", "w", e)],
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn moebius_invariance(cfg in config(2), m in moebius(), t in (0usize..6, 0usize..6, 0usize..6)) {
        let (i, j, k) = t;
        prop_assume!(i != j && j != k && i != k);
        let t = Triple::new(i, j, k);
        prop_assert_eq!(symroot_pow(&m.apply_config(&cfg), t).unwrap(), symroot_pow(&cfg, t).unwrap());
    }

    #[test]
    fn cocycle_and_product(cfg in config(3)) {
        let l = |i, j, k| symroot_pow(&cfg, Triple::new(i, j, k)).unwrap();
        prop_assert_eq!(l(0, 1, 2) * l(1, 2, 0) * l(2, 0, 1), int(-1));
        let prod = (1..cfg.len()).fold(int(1), |acc, k| acc * sym_discriminant(&cfg, 0, k).unwrap());
        prop_assert_eq!(prod, int(1));
    }

    #[test]
    fn cross_ratio_quotient(cfg in config(2)) {
        let q = symroot_pow(&cfg, Triple::new(0, 1, 2)).unwrap()
            / symroot_pow(&cfg, Triple::new(0, 1, 3)).unwrap();
        let mu = cross_ratio(&cfg, 0, 1, 2, 3).unwrap();
        prop_assert_eq!(q, num_traits::pow::Pow::pow(&mu, 4i32));
    }

    #[test]
    fn subdivision_invariance(g in graph(), e in 0usize..4, num in 1i64..5) {
        let off = &g.edges()[e].length * rat(num, 5);
        let (s, _) = g.subdivide(e, &off).unwrap();
        let (a, b) = (Admissible::new(&g).unwrap(), Admissible::new(&s).unwrap());
        prop_assert_eq!(a.epsilon(), b.epsilon());
        prop_assert_eq!(a.phi(), b.phi());
        prop_assert_eq!(delta(&g), delta(&s));
    }

    #[test]
    fn homogeneity(g in graph(), t in length()) {
        let s = g.scaled(&t).unwrap();
        let (a, b) = (Admissible::new(&g).unwrap(), Admissible::new(&s).unwrap());
        prop_assert_eq!(&t * a.epsilon(), b.epsilon());
        prop_assert_eq!(&t * a.phi(), b.phi());
        prop_assert_eq!(&t * delta(&g), delta(&s));
    }

    #[test]
    fn resistance_is_a_metric(g in graph()) {
        let k = ResistanceKernel::new(&g).unwrap();
        let pts: Vec<Point> = (0..g.num_vertices()).map(Point::Vertex)
            .chain((0..g.num_edges()).map(|e| Point::midpoint(&g, e)))
            .collect();
        for x in &pts {
            prop_assert_eq!(k.resistance(x, x).unwrap(), int(0));
            for y in &pts {
                let r = k.resistance(x, y).unwrap();
                prop_assert_eq!(&r, &k.resistance(y, x).unwrap());
                for z in &pts {
                    prop_assert!(r <= k.resistance(x, z).unwrap() + k.resistance(z, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn chi_nonarch_is_linear(d in length(), e in length(), de in length(), t in length()) {
        let a = chi_nonarch(3, &d, &e, &de);
        prop_assert_eq!(chi_nonarch(3, &(&t * &d), &(&t * &e), &(&t * &de)), &t * a);
    }

    #[test]
    fn chi_arch_is_affine(g in 2u32..6, x in -50.0f64..50.0, y in -50.0f64..50.0, s in 0.1f64..3.0) {
        // χ_arch is affine in (log‖Δ‖, δ_F): f(p + s v) − f(p) scales with s
        let f = |a: f64, b: f64| chi_arch(&ArchInput::new(g, a, b).unwrap());
        let base = f(0.0, 0.0);
        let lhs = f(s * x, s * y) - base;
        let rhs = s * (f(x, y) - base);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }
}
