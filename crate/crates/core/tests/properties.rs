// SPDX-License-Identifier: Apache-2.0

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use twistlat::brauer::{brauer_equal, exp_b_embed, kappa, pushforward_brauer};
use twistlat::hodge::{HodgeLattice, PeriodVector, SymbolBasis};
use twistlat::isometry::{find_isometry, genus_equal, verify, GenusVerdict};
use twistlat::kummer::{kummer_transcendental, square_ratio_check, theta};
use twistlat::normal_form::{hermite_rows, smith};
use twistlat::{picard_two, BField, Int, IntMatrix, IsometryMap, Lattice, Rat, Sublattice};

fn gram_strategy(max_rank: usize) -> impl Strategy<Value = Lattice> {
    (1..=max_rank)
        .prop_flat_map(|r| {
            prop::collection::vec(-5i64..=5, r * (r + 1) / 2).prop_map(move |v| (r, v))
        })
        .prop_filter_map("degenerate", |(r, v)| {
            let mut g = IntMatrix::zeros(r, r);
            let mut it = v.into_iter();
            for i in 0..r {
                for j in i..r {
                    let x = Int::from(it.next().unwrap());
                    g[(i, j)] = x.clone();
                    g[(j, i)] = x;
                }
            }
            Lattice::new(g).ok()
        })
}

fn unimodular(r: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut p = IntMatrix::identity(r);
    for &(a, b, c) in ops {
        let (a, b) = (a % r, b % r);
        if a == b {
            p.swap_rows(a, (a + 1) % r);
            continue;
        }
        for j in 0..r {
            let x = &p[(b, j)] * Int::from(c);
            p[(a, j)] += x;
        }
    }
    p
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..8)
}

fn rationals(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec((-6i64..=6, 1i64..=6), n).prop_map(|v| {
        v.into_iter()
            .map(|(a, b)| Rat::new(a.into(), b.into()))
            .collect()
    })
}

/// `L + U` with a formal period spanning `L`; no symbol products are
/// declared.
fn with_period(l: &Lattice) -> HodgeLattice {
    let r = l.rank();
    let ambient = l.direct_sum(&Lattice::hyperbolic());
    let mut names = vec!["1".to_string()];
    names.extend((0..r).map(|i| format!("s{i}")));
    let symbols = SymbolBasis::new(names).unwrap();
    let mut columns = vec![vec![Rat::zero(); r + 2]];
    for i in 0..r {
        let mut c = vec![Rat::zero(); r + 2];
        c[i] = Rat::one();
        columns.push(c);
    }
    HodgeLattice::new(
        ambient.clone(),
        symbols,
        PeriodVector::new(r + 2, columns).unwrap(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hermite_is_basis_invariant(l in gram_strategy(4), o in ops()) {
        let g = l.gram();
        let p = unimodular(g.rows(), &o);
        prop_assert_eq!(hermite_rows(&p.mul(g).unwrap()), hermite_rows(g));
    }

    #[test]
    fn smith_reconstructs(l in gram_strategy(4)) {
        let g = l.gram();
        let s = smith(g);
        let d = s.left.mul(g).unwrap().mul(&s.right).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let e = if i == j { s.diagonal[i].clone() } else { Int::zero() };
                prop_assert_eq!(&d[(i, j)], &e);
            }
        }
        prop_assert_eq!(s.diagonal.iter().product::<Int>(), l.det().abs());
    }

    #[test]
    fn discriminant_order_is_det(l in gram_strategy(4)) {
        prop_assert_eq!(l.discriminant_form().order(), l.det().abs());
    }

    #[test]
    fn genus_survives_basis_change(l in gram_strategy(4), o in ops()) {
        let p = unimodular(l.rank(), &o);
        let m = l.change_basis(&p).unwrap();
        prop_assert_eq!(genus_equal(&l, &m), GenusVerdict::MatchOrUnknown);
        let w = find_isometry(&m, &l, 2);
        if let Some(w) = w {
            prop_assert!(verify(&w).is_ok());
        }
    }

    #[test]
    fn kernel_index_is_order(l in gram_strategy(4), b in rationals(6)) {
        let h = with_period(&l);
        let b = BField::new(h.lattice().clone(), b[..h.lattice().rank()].to_vec()).unwrap();
        let t = h.transcendental_lattice();
        let alpha = kappa(&b, &t).unwrap();
        let k = alpha.kernel_lattice();
        let idx = t.coordinates_of_rows(k.basis()).unwrap().det().unwrap().abs();
        prop_assert_eq!(idx, alpha.order());
        let e = exp_b_embed(&k, &b, 2).unwrap();
        prop_assert!(verify(&e).is_ok());
    }

    #[test]
    fn brauer_equality_matches_kappa(l in gram_strategy(4), b1 in rationals(4), b2 in rationals(4)) {
        let r = l.rank();
        let t = Sublattice::full(l.clone());
        let b1 = BField::new(l.clone(), b1[..r].to_vec()).unwrap();
        let b2 = BField::new(l.clone(), b2[..r].to_vec()).unwrap();
        let same = kappa(&b1, &t).unwrap() == kappa(&b2, &t).unwrap();
        prop_assert_eq!(brauer_equal(&b1, &b2, &t).unwrap(), same);
        let lift = kappa(&b1, &t).unwrap().lift().unwrap();
        prop_assert!(brauer_equal(&b1, &lift, &t).unwrap());
    }

    #[test]
    fn pushforward_keeps_order(l in gram_strategy(4), o in ops(), b in rationals(4)) {
        let r = l.rank();
        let p = unimodular(r, &o);
        let m = l.change_basis(&p).unwrap();
        let g = IsometryMap::certify(Sublattice::full(m.clone()), Sublattice::full(l.clone()), p).unwrap();
        let alpha = kappa(&BField::new(m, b[..r].to_vec()).unwrap(), g.source()).unwrap();
        prop_assert_eq!(pushforward_brauer(&g, &alpha).unwrap().order(), alpha.order());
    }

    #[test]
    fn theta_is_additive_and_keeps_order(
        n in 1i64..=6,
        o in prop::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..8),
        b1 in rationals(6),
        b2 in rationals(6),
    ) {
        let base = picard_two::abelian_a(n);
        let p = unimodular(6, &o);
        let h = base.h2().change_basis(&p).unwrap();
        let a = twistlat::AbelianSurfaceModel::new(h).unwrap();
        let km = kummer_transcendental(&a).unwrap();
        let l = a.h2().lattice().clone();
        let b1 = BField::new(l.clone(), b1).unwrap();
        let b2 = BField::new(l, b2).unwrap();
        let t1 = theta(&km, &b1).unwrap();
        prop_assert_eq!(t1.order(), kappa(&b1, a.transcendental()).unwrap().order());
        let sum = theta(&km, &b1.add(&b2).unwrap()).unwrap();
        let t2 = theta(&km, &b2).unwrap();
        let expect: Vec<Rat> = t1.values().iter().zip(t2.values()).map(|(x, y)| x + y).collect();
        let expect = twistlat::BrauerClass::new(km.full(), expect).unwrap();
        prop_assert_eq!(sum, expect);
    }

    #[test]
    fn square_times_m(q in 1i64..1000, m in -1000i64..1000) {
        prop_assume!(m != 0);
        let a = Int::from(q) * Int::from(q) * Int::from(m);
        prop_assert!(square_ratio_check(&a, &Int::from(m)).unwrap());
    }
}
