// SPDX-License-Identifier: Apache-2.0

//! Fixtures for the abelian surfaces of Picard number two built from a
//! product `E x F` of elliptic curves with periods `w1`, `w2` and a
//! cyclic isogeny of degree `n`.
//!
//! - `S`: the abelian surface with `H^1` frame `(z1, z2, w1, w2)` and
//!   `theta: H^1(S) -> H^1(E x F)`, `z1 -> n x1`, `w1 -> y1 - x1`.
//! - `A_n`: `H^2 = U^3` with `T(A) = U + U(n)` and `NS(A) = U(-n)`.
//! - `E1 x F`: `H^2 = U^3` with `T = U + U` and the B-field `k2 / n`.

use alloc::vec;
use alloc::vec::Vec;

use crate::brauer::BField;
use crate::hodge::{
    int_column_period, wedge_square_lattice, wedge_square_map, H1Frame, HodgeLattice, PeriodVector,
    SymbolBasis,
};
use crate::kummer::AbelianSurfaceModel;
use crate::lattice::{Lattice, Sublattice};
use crate::matrix::{int_vec, IntMatrix};
use crate::Int;

pub fn symbols() -> SymbolBasis {
    SymbolBasis::two_periods()
}

pub fn frame_exf() -> H1Frame {
    H1Frame::new(["x1", "x2", "y1", "y2"]).expect("distinct labels")
}

pub fn frame_s() -> H1Frame {
    H1Frame::new(["z1", "z2", "w1", "w2"]).expect("distinct labels")
}

/// Rows: images of `z1, z2, w1, w2` in the frame `(x1, x2, y1, y2)`.
pub fn theta_matrix(n: i64) -> IntMatrix {
    IntMatrix::from_i64(&[&[n, 0, 0, 0], &[0, 1, 0, 0], &[-1, 0, 1, 0], &[0, 0, 0, 1]])
}

pub fn wedge_theta(n: i64) -> IntMatrix {
    wedge_square_map(&theta_matrix(n)).expect("theta is nonsingular")
}

// wedge basis positions: (01, 02, 03, 12, 13, 23)
const P01: usize = 0;
const P02: usize = 1;
const P03: usize = 2;
const P12: usize = 3;
const P13: usize = 4;
const P23: usize = 5;

fn unit(i: usize) -> Vec<i64> {
    let mut v = vec![0; 6];
    v[i] = 1;
    v
}

/// `x1y1 + w2 x1y2 + w1 x2y1 + w1w2 x2y2`.
pub fn sigma_exf() -> PeriodVector {
    int_column_period(
        &symbols(),
        6,
        &[
            ("1", unit(P02)),
            ("w2", unit(P03)),
            ("w1", unit(P12)),
            ("w1w2", unit(P13)),
        ],
    )
}

/// `z1w1 + w2 z1w2 + w1 (n z2w1 - z1z2) + n w1w2 z2w2`, the preimage of
/// `n sigma_exf` under `wedge^2 theta`.
pub fn sigma_s(n: i64) -> PeriodVector {
    let mut w1 = vec![0; 6];
    w1[P12] = n;
    w1[P01] = -1;
    let mut w1w2 = vec![0; 6];
    w1w2[P13] = n;
    int_column_period(
        &symbols(),
        6,
        &[
            ("1", unit(P02)),
            ("w2", unit(P03)),
            ("w1", w1),
            ("w1w2", w1w2),
        ],
    )
}

pub fn surface_exf() -> HodgeLattice {
    HodgeLattice::new(wedge_square_lattice(&frame_exf()), symbols(), sigma_exf())
        .expect("isotropic period")
}

pub fn surface_s(n: i64) -> HodgeLattice {
    HodgeLattice::new(wedge_square_lattice(&frame_s()), symbols(), sigma_s(n))
        .expect("isotropic period")
}

/// `<z1w1, z2w2, z1w2, n z2w1 - z1z2>`.
pub fn expected_t_s(n: i64) -> Sublattice {
    let mut last = vec![0; 6];
    last[P12] = n;
    last[P01] = -1;
    let rows: Vec<Vec<Int>> = [unit(P02), unit(P13), unit(P03), last]
        .iter()
        .map(|r| int_vec(r))
        .collect();
    Sublattice::new(
        wedge_square_lattice(&frame_s()),
        IntMatrix::from_rows(rows, 6).expect("width six"),
    )
    .expect("independent rows")
}

/// `<z1z2, z1w2 + n w1w2>`.
pub fn expected_ns_s(n: i64) -> Sublattice {
    let mut second = unit(P03);
    second[P23] = n;
    let rows = vec![int_vec(&unit(P01)), int_vec(&second)];
    Sublattice::new(
        wedge_square_lattice(&frame_s()),
        IntMatrix::from_rows(rows, 6).expect("width six"),
    )
    .expect("independent rows")
}

pub fn u3() -> Lattice {
    let u = Lattice::hyperbolic();
    u.direct_sum(&u).direct_sum(&u)
}

fn u3_labelled(names: [&str; 6]) -> Lattice {
    u3().with_labels(names).expect("six distinct labels")
}

/// `H^2(A_n)` on `(a0, b0, a1, b1, a2, b2)` with
/// `sigma_A = e1 - n w1w2 e2 + w1 f1 + w2 f2`, `e1 = a0`, `e2 = b0`,
/// `f1 = a1`, `f2 = n b1 + a2`.
pub fn abelian_a(n: i64) -> AbelianSurfaceModel {
    let l = u3_labelled(["a0", "b0", "a1", "b1", "a2", "b2"]);
    let p = int_column_period(
        &symbols(),
        6,
        &[
            ("1", vec![1, 0, 0, 0, 0, 0]),
            ("w1w2", vec![0, -n, 0, 0, 0, 0]),
            ("w1", vec![0, 0, 1, 0, 0, 0]),
            ("w2", vec![0, 0, 0, n, 1, 0]),
        ],
    );
    AbelianSurfaceModel::new(HodgeLattice::new(l, symbols(), p).expect("isotropic period"))
        .expect("nonzero period")
}

/// `T(A_n) = U + U(n)` on `(e1, e2, f1, f2)` with `sigma_A`.
pub fn t_a(n: i64) -> HodgeLattice {
    let l = Lattice::hyperbolic()
        .direct_sum(&Lattice::hyperbolic_scaled(n))
        .with_labels(["e1", "e2", "f1", "f2"])
        .expect("four labels");
    let p = int_column_period(
        &symbols(),
        4,
        &[
            ("1", vec![1, 0, 0, 0]),
            ("w1w2", vec![0, -n, 0, 0]),
            ("w1", vec![0, 0, 1, 0]),
            ("w2", vec![0, 0, 0, 1]),
        ],
    );
    HodgeLattice::new(l, symbols(), p).expect("isotropic period")
}

/// `H^2(E1 x F)` on `(g1, g2, k1, k2, u, v)` with
/// `sigma = g1 - n w1w2 g2 + n w1 k1 + w2 k2`.
pub fn e1_times_f(n: i64) -> AbelianSurfaceModel {
    let l = u3_labelled(["g1", "g2", "k1", "k2", "u", "v"]);
    let p = int_column_period(
        &symbols(),
        6,
        &[
            ("1", vec![1, 0, 0, 0, 0, 0]),
            ("w1w2", vec![0, -n, 0, 0, 0, 0]),
            ("w1", vec![0, 0, n, 0, 0, 0]),
            ("w2", vec![0, 0, 0, 1, 0, 0]),
        ],
    );
    AbelianSurfaceModel::new(HodgeLattice::new(l, symbols(), p).expect("isotropic period"))
        .expect("nonzero period")
}

/// `B = k2 / n` on `H^2(E1 x F)`.
pub fn brauer_field(n: i64) -> BField {
    let mut v = int_vec(&[0; 6]);
    v[3] = Int::from(1);
    BField::from_fraction(e1_times_f(n).h2().lattice().clone(), &v, &Int::from(n))
        .expect("n is nonzero")
}

/// `i1: T(A_n) -> H^2(E1 x F)`: `e_j -> g_j`, `f1 -> n k1`, `f2 -> k2`.
pub fn i1_matrix(n: i64) -> IntMatrix {
    IntMatrix::from_i64(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0],
        &[0, 0, n, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
    ])
}

/// Expected `T(E1 x F, B)`: `(g1, 0), (g2, 0), (n k1, 1), (k2, 0)` in the
/// Mukai basis `(h0, g1, g2, k1, k2, u, v, h4)`.
pub fn expected_twisted_t(n: i64) -> IntMatrix {
    IntMatrix::from_i64(&[
        &[0, 1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, n, 0, 0, 0, 1],
        &[0, 0, 0, 0, 1, 0, 0, 0],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brauer::{generalized_transcendental, kappa};
    use crate::isometry::{find_hodge_isometry, find_isometry};
    use crate::Rat;
    use num_traits::Zero;

    #[test]
    fn periods_are_isotropic() {
        for n in 1..7 {
            assert!(surface_s(n)
                .period_square()
                .unwrap()
                .iter()
                .all(Zero::is_zero));
            assert!(abelian_a(n)
                .h2()
                .period_square()
                .unwrap()
                .iter()
                .all(Zero::is_zero));
            assert!(e1_times_f(n)
                .h2()
                .period_square()
                .unwrap()
                .iter()
                .all(Zero::is_zero));
        }
    }

    #[test]
    fn wedge_theta_carries_sigma_s() {
        for n in 1..7 {
            let moved = sigma_s(n).map(&wedge_theta(n)).unwrap();
            assert_eq!(moved, sigma_exf().scaled(&Rat::from_integer(n.into())));
        }
    }

    #[test]
    fn lattices_of_s() {
        for n in 1..5 {
            let h = surface_s(n);
            let t = h.transcendental_lattice();
            assert!(t.same_span(&expected_t_s(n)));
            let (ns, rho) = h.ns_and_picard();
            assert_eq!(rho, 2);
            assert!(ns.same_span(&expected_ns_s(n)));
            assert_eq!(
                expected_ns_s(n).gram(),
                Lattice::hyperbolic_scaled(n).gram().clone()
            );
            let w = find_isometry(&ns.to_lattice().unwrap(), &Lattice::hyperbolic_scaled(n), 3);
            assert!(w.is_some());
            let th = h.restrict(&t).unwrap();
            let m = find_hodge_isometry(&th, &t_a(n), 3).unwrap();
            assert!(m.lambda().is_some());
        }
    }

    #[test]
    fn a_and_e1f() {
        for n in 1..7 {
            let a = abelian_a(n);
            assert_eq!(a.transcendental().gram(), t_a(n).lattice().gram().clone());
            assert_eq!(a.picard_number(), 2);
            let e = e1_times_f(n);
            let b = brauer_field(n);
            let alpha = kappa(&b, e.transcendental()).unwrap();
            assert_eq!(alpha.order(), Int::from(n));
            let img = Sublattice::new(e.h2().lattice().clone(), i1_matrix(n)).unwrap();
            assert!(alpha.kernel_lattice().same_span(&img));
            let g = generalized_transcendental(e.h2(), &b).unwrap();
            assert_eq!(
                g.basis(),
                &crate::normal_form::hermite_rows(&expected_twisted_t(n))
            );
        }
    }

    #[test]
    fn twisted_equivalence_and_transport() {
        use crate::kummer::{t_equivalence, theta, KummerPair, TVerdict, TwistedSurface};
        for n in 1..7 {
            let a = abelian_a(n);
            let e = e1_times_f(n);
            let b = brauer_field(n);
            let zero = BField::zero(a.h2().lattice().clone());
            let sa = TwistedSurface::new(a.h2().clone(), zero.clone()).unwrap();
            let se = TwistedSurface::new(e.h2().clone(), b.clone()).unwrap();
            let TVerdict::Equivalent(g) = t_equivalence(&sa, &se, 3).unwrap() else {
                panic!("n = {n}");
            };
            let pa = KummerPair::new(&a, &zero).unwrap();
            let pe = KummerPair::new(&e, &b).unwrap();
            let t = crate::kummer::transport_isometry(&pa, &pe, &g).unwrap();
            assert!(t.commutes());
            assert!(t.map.lambda().is_some());
            assert_eq!(theta(&pe.model, &b).unwrap().order(), Int::from(n));
        }
    }
}
