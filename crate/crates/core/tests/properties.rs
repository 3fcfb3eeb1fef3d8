use proptest::prelude::*;

use econvex_core::conjugation::{biconjugate, c_conjugate, c_conjugate_exact, cprime_conjugate, DualGrid, DualPoint};
use econvex_core::duality::{
    c5_audit, c5bar_audit, value_hull_audit, dual_value, dual_value_via_p, primal_value, restriction_audit, weak_chain_audit,
    PerturbationProblem,
};
use econvex_core::esets::{EPolyhedron, Halfspace};
use econvex_core::extreal;
use econvex_core::funcrep::{Endpoint, Grid, GridLike, PerturbFn, PhiTable, PwAffine1, Sampled, SampledFn};
use econvex_core::lagrangian::{minimax_audit, saddle_audit, CLagrangian};
use econvex_core::scalar::{q, rv, Rational};
use econvex_core::subdifferential::{
    eps_c_subdifferential, is_c_subgradient, is_c_subgradient_via_conjugate, is_cprime_subgradient,
    is_cprime_subgradient_via_conjugate, projection_audit, transfer_audit,
};
use econvex_core::{ExtReal, Scalar};

type R = Rational;
type E = ExtReal<R>;

fn ext() -> impl Strategy<Value = E> {
    prop_oneof![
        1 => Just(E::NegInf),
        2 => Just(E::PosInf),
        6 => (-6i64..=6).prop_map(E::from_i64),
    ]
}

// Values of a proper-ish function: mostly finite, sometimes +inf.
fn value() -> impl Strategy<Value = E> {
    prop_oneof![
        1 => Just(E::PosInf),
        3 => (-5i64..=5).prop_map(E::from_i64),
    ]
}

fn line(lo: i64, hi: i64) -> Grid<R> {
    Grid::line((lo..=hi).map(|k| q(k, 1)).collect()).unwrap()
}

fn sampled(n: i64) -> impl Strategy<Value = SampledFn<R>> {
    prop::collection::vec(value(), (2 * n + 1) as usize).prop_map(move |v| Sampled::new(line(-n, n), v).unwrap())
}

fn subset(pool: &'static [i64]) -> impl Strategy<Value = Vec<i64>> {
    prop::sample::subsequence(pool, 1..=pool.len())
}

fn dual_grid(alphas: &'static [i64]) -> impl Strategy<Value = DualGrid<R>> {
    (subset(&[-2, -1, 0, 1, 2]), subset(&[-1, 0, 1]), subset(alphas)).prop_map(|(xs, us, al)| {
        let wrap = |v: &[i64]| v.iter().map(|&k| rv(&[k])).collect::<Vec<_>>();
        DualGrid::tensor(1, &wrap(&xs), &wrap(&us), &al.iter().map(|&a| q(a, 1)).collect::<Vec<_>>()).unwrap()
    })
}

fn problem() -> impl Strategy<Value = PerturbationProblem<R>> {
    (1i64..=3, 1i64..=3)
        .prop_flat_map(|(nx, ny)| {
            let cells = ((2 * nx + 1) * (2 * ny + 1)) as usize;
            (
                Just((nx, ny)),
                prop::collection::vec(value(), cells),
                dual_grid(&[1, 2, 3]),
                subset(&[-1, 0, 1]),
                subset(&[-1, 0, 1]),
            )
        })
        .prop_map(|((nx, ny), vals, dy, xs, us)| {
            let t = PhiTable::new(line(-nx, nx), line(-ny, ny), vals).unwrap();
            let mut pairs = Vec::new();
            for &a in &xs {
                for &b in &us {
                    pairs.push((rv(&[a]), rv(&[b])));
                }
            }
            PerturbationProblem::new(PerturbFn::Table(t), line(-nx, nx), line(-ny, ny), dy, pairs).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extreal_sum_is_commutative_and_associative(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(E::add(&a, &b), E::add(&b, &a));
        prop_assert_eq!(E::add(&E::add(&a, &b), &c), E::add(&a, &E::add(&b, &c)));
        prop_assert_eq!(E::sub(&a, &b), E::add(&a, &E::neg(&b)));
        prop_assert_eq!(E::neg(&E::neg(&a)), a);
    }

    #[test]
    fn extreal_sum_is_monotone(a in ext(), b in ext(), c in ext()) {
        if a <= b {
            prop_assert!(E::add(&a, &c) <= E::add(&b, &c));
        }
    }

    #[test]
    fn sup_and_inf_bound_their_family(v in prop::collection::vec(ext(), 0..6)) {
        let s = extreal::sup(v.iter().cloned());
        let i = extreal::inf(v.iter().cloned());
        prop_assert!(v.iter().all(|x| *x <= s && i <= *x));
        prop_assert!(v.is_empty() || v.contains(&s) && v.contains(&i));
    }

    #[test]
    fn hull_is_a_minorant_and_conjugates_agree(f in sampled(4), wg in dual_grid(&[-1, 0, 1, 2])) {
        let fc = c_conjugate(&f, &wg).unwrap();
        let h = cprime_conjugate(&fc, f.grid()).unwrap();
        prop_assert!(h.le(&f));
        prop_assert_eq!(c_conjugate(&h, &wg).unwrap(), fc);
        prop_assert_eq!(biconjugate(&h, &wg).unwrap(), h);
    }

    #[test]
    fn conjugation_reverses_order(f in sampled(3), g in sampled(3), wg in dual_grid(&[1, 2])) {
        let lo: Vec<E> = f.values().iter().zip(g.values()).map(|(a, b)| a.clone().min(b.clone())).collect();
        let lo = Sampled::new(f.grid().clone(), lo).unwrap();
        prop_assert!(c_conjugate(&f, &wg).unwrap().le(&c_conjugate(&lo, &wg).unwrap()));
    }

    #[test]
    fn grid_conjugate_is_below_the_exact_one(
        lo in -3i64..=0, hi in 0i64..=3, slope in -2i64..=2, k in -2i64..=2, u in -1i64..=1, a in 1i64..=3,
    ) {
        let ind = PwAffine1::indicator(Endpoint::Closed(q(lo, 1)), Endpoint::Closed(q(hi, 1))).unwrap();
        let w = DualPoint::new(rv(&[k]), rv(&[u]), q(a, 1));
        let wg = DualGrid::new(1, vec![w.clone()]).unwrap();
        for f in [PwAffine1::abs(), PwAffine1::affine(q(slope, 1), q(1, 1)), ind] {
            let grid = c_conjugate(&f.sample(&line(-4, 4)).unwrap(), &wg).unwrap();
            prop_assert!(*grid.value(0) <= c_conjugate_exact(&f, &w).unwrap());
        }
    }

    #[test]
    fn sampling_agrees_with_exact_evaluation(slope in -3i64..=3, c in -3i64..=3) {
        let f = PwAffine1::affine(q(slope, 1), q(c, 1));
        let s = f.sample(&line(-5, 5)).unwrap();
        for (x, v) in s.grid().points().iter().zip(s.values()) {
            prop_assert_eq!(v.clone(), f.eval(&x[0]));
        }
    }

    #[test]
    fn subgradient_forms_agree(f in sampled(3), wg in dual_grid(&[-1, 1, 2])) {
        let fc = c_conjugate(&f, &wg).unwrap();
        let fcc = cprime_conjugate(&fc, f.grid()).unwrap();
        for x in f.grid().points() {
            for w in wg.points() {
                prop_assert_eq!(is_c_subgradient(&f, x, w).unwrap(), is_c_subgradient_via_conjugate(&f, &fc, x, w).unwrap());
                prop_assert_eq!(
                    is_cprime_subgradient(&fc, w, x).unwrap(),
                    is_cprime_subgradient_via_conjugate(&fc, &fcc, w, x).unwrap()
                );
            }
        }
        let t = transfer_audit(&f, &wg).unwrap();
        prop_assert!(t.forward_ok && t.forms_agree);
        if t.econvex_surrogate {
            prop_assert!(t.converse_ok());
        }
    }

    #[test]
    fn epsilon_subdifferentials_grow(f in sampled(3), wg in dual_grid(&[1, 2]), e1 in 0i64..=3, de in 0i64..=3, x in -3i64..=3) {
        let small = eps_c_subdifferential(&f, &rv(&[x]), &q(e1, 2), &wg).unwrap();
        let large = eps_c_subdifferential(&f, &rv(&[x]), &q(e1 + de, 2), &wg).unwrap();
        prop_assert!(small.definitional_agrees && large.definitional_agrees);
        prop_assert!(small.members.iter().all(|k| large.members.contains(k)));
    }

    #[test]
    fn duality_inequalities(p in problem()) {
        let gp = primal_value(&p).value;
        let gd = dual_value(&p).value;
        prop_assert!(gd <= gp);
        prop_assert_eq!(dual_value_via_p(&p), gd);
        prop_assert!(weak_chain_audit(&p).ok());
        prop_assert!(c5_audit(&p).le_ok);
        prop_assert!(c5bar_audit(&p).le_ok);
        prop_assert!(restriction_audit(&p).ge_ok);
        prop_assert!(value_hull_audit(&p).le_ok);
    }

    #[test]
    fn projection_formula_superset(p in problem(), e in 0i64..=2) {
        for x in p.x_grid().points() {
            let a = projection_audit(&p, x, &q(e, 1)).unwrap();
            prop_assert!(a.superset_ok);
            if a.c5_holds {
                prop_assert!(a.equal);
            }
        }
    }

    #[test]
    fn lagrangian_identities(p in problem()) {
        let l = CLagrangian::new(&p);
        let m = minimax_audit(&l, 1e-9).unwrap();
        prop_assert!(m.exact_ok());
        if m.slice_surrogate {
            prop_assert!(m.infsup_is_primal_value);
        }
        let s = saddle_audit(&l).unwrap();
        prop_assert!(s.minimax_ok);
        if s.slice_surrogate {
            prop_assert!(s.expected_are_saddles);
        }
    }

    #[test]
    fn float_backend_matches_on_integers(f in sampled(3), wg in dual_grid(&[1, 2])) {
        let to_f = |v: &E| match v {
            ExtReal::Finite(r) => ExtReal::Finite(r.to_f64()),
            ExtReal::PosInf => ExtReal::PosInf,
            ExtReal::NegInf => ExtReal::NegInf,
        };
        let ff = Sampled::new(
            Grid::line((-3..=3).map(|k| k as f64).collect()).unwrap(),
            f.values().iter().map(to_f).collect(),
        ).unwrap();
        let wf = DualGrid::new(1, wg.points().iter().map(|w| DualPoint::new(vec![w.xstar[0].to_f64()], vec![w.ustar[0].to_f64()], w.alpha.to_f64())).collect()).unwrap();
        let exact: Vec<_> = c_conjugate(&f, &wg).unwrap().values().iter().map(to_f).collect();
        let fast = c_conjugate(&ff, &wf).unwrap();
        prop_assert_eq!(fast.values(), exact.as_slice());
    }

    #[test]
    fn separation_certificates_hold(
        a in -2i64..=2, b in -2i64..=2, c in -3i64..=3, strict in any::<bool>(),
        x0 in -4i64..=4, y0 in -4i64..=4, pts in prop::collection::vec((-20i64..=20, -20i64..=20, 1i64..=4), 50),
    ) {
        prop_assume!(a != 0 || b != 0);
        let set = EPolyhedron::new(2, vec![
            Halfspace::new(rv(&[a, b]), q(c, 1), strict),
            Halfspace::open(rv(&[0, -1]), q(5, 1)),
        ]).unwrap();
        let p0 = rv(&[x0, y0]);
        prop_assume!(!set.contains(&p0).unwrap());
        prop_assume!(!set.is_empty().unwrap());
        if let Some(n) = set.separate(&p0).unwrap() {
            prop_assert!(set.certifies(&p0, &n).unwrap());
            for (u, v, d) in pts {
                let z = vec![q(u, d), q(v, d)];
                if set.contains(&z).unwrap() {
                    let diff: Vec<R> = z.iter().zip(&p0).map(|(s, t)| s - t).collect();
                    prop_assert!(econvex_core::scalar::dot(&diff, &n) < q(0, 1));
                }
            }
        }
    }

    #[test]
    fn recession_directions_stay_inside(a in -2i64..=2, b in -2i64..=2, c in -3i64..=3, dy in -2i64..=2, dx in -2i64..=2) {
        let set = EPolyhedron::new(2, vec![Halfspace::open(rv(&[a, b]), q(c, 1))]).unwrap();
        let y = rv(&[dx, dy]);
        if let Some(p) = set.find_point().unwrap() {
            if set.in_recession_cone(&y).unwrap() {
                for lam in [1, 10, 1000] {
                    let z: Vec<R> = p.iter().zip(&y).map(|(s, t)| s + t * q(lam, 1)).collect();
                    prop_assert!(set.contains(&z).unwrap());
                }
            }
        }
    }
}
