// SPDX-License-Identifier: Apache-2.0

//! The Kummer side: `T(Km(A)) = T(A)(2)`, the map `Theta_A` on Brauer
//! classes, the induced isometries of kernels, transport of isometries
//! between generalized transcendental lattices, and T-equivalence.
//!
//! `Km(A)` is modelled by its transcendental lattice only: the group of
//! `T(A)` in `T(A)`-coordinates with the form doubled.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::brauer::{
    exp_b_onto, exp_neg_b, gcy, generalized_transcendental, kappa, BField, BrauerClass,
};
use crate::discriminant::GenusMismatch;
use crate::hodge::HodgeLattice;
use crate::isometry::{find_hodge_isometry, genus_equal, GenusVerdict, IsometryMap};
use crate::lattice::{Lattice, Sublattice};
use crate::matrix::IntMatrix;
use crate::{Error, Int, Rat, Result};

/// `H^2(A)` with its period, transcendental lattice and Neron-Severi
/// lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianSurfaceModel {
    h2: HodgeLattice,
    t: Sublattice,
    ns: Sublattice,
}

impl AbelianSurfaceModel {
    pub fn new(h2: HodgeLattice) -> Result<Self> {
        let t = h2.transcendental_lattice();
        if t.rank() == 0 {
            return Err(Error::ZeroPeriod);
        }
        let ns = t.orthogonal_complement();
        Ok(Self { h2, t, ns })
    }

    pub fn h2(&self) -> &HodgeLattice {
        &self.h2
    }

    pub fn transcendental(&self) -> &Sublattice {
        &self.t
    }

    pub fn neron_severi(&self) -> &Sublattice {
        &self.ns
    }

    pub fn picard_number(&self) -> usize {
        self.ns.rank()
    }

    /// `T(A)` as a Hodge lattice in its own coordinates.
    pub fn t_hodge(&self) -> Result<HodgeLattice> {
        self.h2.restrict(&self.t)
    }
}

/// `T(Km(A))` with `pi_*` the identity on `T(A)`-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerModel {
    source: AbelianSurfaceModel,
    t_km: Lattice,
    pi_star: IsometryMap,
    hodge: HodgeLattice,
}

impl KummerModel {
    pub fn source(&self) -> &AbelianSurfaceModel {
        &self.source
    }

    pub fn t_km(&self) -> &Lattice {
        &self.t_km
    }

    pub fn pi_star(&self) -> &IsometryMap {
        &self.pi_star
    }

    /// `T_km` with the transported period.
    pub fn hodge(&self) -> &HodgeLattice {
        &self.hodge
    }

    pub fn full(&self) -> Sublattice {
        Sublattice::full(self.t_km.clone())
    }
}

pub fn kummer_transcendental(a: &AbelianSurfaceModel) -> Result<KummerModel> {
    let t_lat = a.t.to_lattice()?;
    let t_km = t_lat.twist(&Int::from(2))?;
    let pi_star = IsometryMap::certify_twisted(
        a.t.clone(),
        Int::from(2),
        Sublattice::full(t_km.clone()),
        Int::one(),
        IntMatrix::identity(a.t.rank()),
    )?;
    let period = a.h2.period().in_sublattice(&a.t)?;
    let hodge = HodgeLattice::new(t_km.clone(), a.h2.symbols().clone(), period)?;
    Ok(KummerModel {
        source: a.clone(),
        t_km,
        pi_star,
        hodge,
    })
}

/// `p(B)` in `T(A)`-coordinates: the unique `c` with `B - c T` orthogonal
/// to `T(A)`.
pub fn orthogonal_projection_t(a: &AbelianSurfaceModel, b: &BField) -> Result<Vec<Rat>> {
    if b.ambient().gram() != a.h2.lattice().gram() {
        return Err(Error::AmbientMismatch);
    }
    let gt = a.t.gram().to_rational();
    let rhs =
        a.t.basis()
            .row_iter()
            .map(|r| b.pair(r))
            .collect::<Result<Vec<_>>>()?;
    // c * G_T = (t_i . B)_i ; G_T is symmetric
    let inv = gt.inverse().map_err(|_| Error::Degenerate)?;
    inv.apply(&rhs)
}

/// `Xi(B) = pi_*(p(B)) / 2` as a B-field on `T_km`.
pub fn xi(km: &KummerModel, b: &BField) -> Result<BField> {
    let p = orthogonal_projection_t(&km.source, b)?;
    let half = Rat::new(Int::one(), Int::from(2));
    BField::new(km.t_km.clone(), p.iter().map(|x| x * &half).collect())
}

/// `Theta_A(kappa(B))`: the class of `Xi(B)` under the doubled pairing.
pub fn theta(km: &KummerModel, b: &BField) -> Result<BrauerClass> {
    kappa(&xi(km, b)?, &km.full())
}

/// `f: T(A, alpha)(2) -> T(Km(A), Theta(alpha))`, the identity on
/// `T(A)`-coordinates, certified onto the independently computed Km-side
/// kernel.
pub fn induced_f(km: &KummerModel, b: &BField) -> Result<IsometryMap> {
    let t = &km.source.t;
    let k_a = kappa(b, t)?;
    let k_km = theta(km, b)?.kernel_lattice();
    let matrix = k_km
        .coordinates_of_rows(&k_a.kernel_coordinates())
        .map_err(|_| Error::Certification("kernel of alpha leaves the Km-side kernel".into()))?;
    IsometryMap::certify_twisted(k_a.kernel_lattice(), Int::from(2), k_km, Int::one(), matrix)
}

/// A Hodge lattice with a B-field and the lattices attached to the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedSurface {
    hodge: HodgeLattice,
    b: BField,
    t: Sublattice,
    class: BrauerClass,
    kernel: Sublattice,
    gen_t: Sublattice,
}

impl TwistedSurface {
    pub fn new(hodge: HodgeLattice, b: BField) -> Result<Self> {
        let t = hodge.transcendental_lattice();
        let class = kappa(&b, &t)?;
        let kernel = class.kernel_lattice();
        let gen_t = generalized_transcendental(&hodge, &b)?;
        Ok(Self {
            hodge,
            b,
            t,
            class,
            kernel,
            gen_t,
        })
    }

    /// The Kummer side of an abelian surface with B-field: `(T_km, Xi(B))`.
    pub fn kummer(km: &KummerModel, b: &BField) -> Result<Self> {
        Self::new(km.hodge.clone(), xi(km, b)?)
    }

    pub fn hodge(&self) -> &HodgeLattice {
        &self.hodge
    }

    pub fn b_field(&self) -> &BField {
        &self.b
    }

    pub fn transcendental(&self) -> &Sublattice {
        &self.t
    }

    pub fn class(&self) -> &BrauerClass {
        &self.class
    }

    pub fn kernel(&self) -> &Sublattice {
        &self.kernel
    }

    /// `T(X, B)` inside the Mukai lattice.
    pub fn generalized(&self) -> &Sublattice {
        &self.gen_t
    }

    /// `T(X, B)` with the period `exp(B)(sigma)` in its own coordinates.
    pub fn generalized_hodge(&self) -> Result<HodgeLattice> {
        gcy(&self.hodge, &self.b)?.restrict(&self.gen_t)
    }

    /// `exp(B): T(X, alpha)(k) -> T(X, B)(k)`.
    pub fn exp_up(&self, k: u32) -> Result<IsometryMap> {
        exp_b_onto(&self.kernel, &self.b, k, &self.gen_t)
    }

    /// `exp(-B): T(X, B)(k) -> T(X, alpha)(k)`.
    pub fn exp_down(&self, k: u32) -> Result<IsometryMap> {
        exp_neg_b(&self.gen_t, &self.b, k, &self.kernel)
    }
}

/// An abelian surface with B-field together with its Kummer side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerPair {
    pub abelian: TwistedSurface,
    pub kummer: TwistedSurface,
    pub model: KummerModel,
    /// `f: T(A, alpha)(2) -> T(Km(A), Theta(alpha))`.
    pub f: IsometryMap,
}

impl KummerPair {
    pub fn new(a: &AbelianSurfaceModel, b: &BField) -> Result<Self> {
        let model = kummer_transcendental(a)?;
        let abelian = TwistedSurface::new(a.h2.clone(), b.clone())?;
        let kummer = TwistedSurface::kummer(&model, b)?;
        let f = induced_f(&model, b)?;
        if !f.source().same_span(abelian.kernel()) || !f.target().same_span(kummer.kernel()) {
            return Err(Error::Certification(
                "kernels of alpha and Theta(alpha) disagree".into(),
            ));
        }
        Ok(Self {
            abelian,
            kummer,
            model,
            f,
        })
    }

    /// `exp(-B)`, `f`, `exp(Xi(B))`: `T(A, B)(2) -> T(Km(A), Xi(B))`.
    pub fn vertical(&self) -> Result<IsometryMap> {
        self.abelian
            .exp_down(2)?
            .then(&self.f)?
            .then(&self.kummer.exp_up(1)?)
    }
}

/// The result of moving `g: T(A1, B1) -> T(A2, B2)` to the Kummer side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    /// `T(Km(A1), Xi(B1)) -> T(Km(A2), Xi(B2))`.
    pub map: IsometryMap,
    /// `V1` then `map`, in matrix form.
    pub via_kummer: IntMatrix,
    /// `g(2)` then `V2`, in matrix form.
    pub via_abelian: IntMatrix,
}

impl Transport {
    pub fn commutes(&self) -> bool {
        self.via_kummer == self.via_abelian
    }
}

/// `exp(Xi(B2)) o f2 o exp(-B2) o g o exp(B1) o f1^-1 o exp(-Xi(B1))`,
/// each step certified, with both paths around the diagram recorded.
pub fn transport_isometry(p1: &KummerPair, p2: &KummerPair, g: &IsometryMap) -> Result<Transport> {
    if !g.source().same_span(p1.abelian.generalized())
        || !g.target().same_span(p2.abelian.generalized())
    {
        return Err(Error::Certification(
            "isometry is not between the generalized lattices".into(),
        ));
    }
    let g2 = g.twisted(&Int::from(2))?;
    let map = p1
        .kummer
        .exp_down(1)?
        .then(&p1.f.inverse()?)?
        .then(&p1.abelian.exp_up(2)?)?
        .then(&g2)?
        .then(&p2.abelian.exp_down(2)?)?
        .then(&p2.f)?
        .then(&p2.kummer.exp_up(1)?)?;
    let map = match g.lambda() {
        Some(_) => map.with_periods(
            p1.kummer.generalized_hodge()?.period(),
            p2.kummer.generalized_hodge()?.period(),
        )?,
        None => map,
    };
    let via_kummer = p1.vertical()?.then(&map)?.matrix().clone();
    let via_abelian = g2.then(&p2.vertical()?)?.matrix().clone();
    Ok(Transport {
        map,
        via_kummer,
        via_abelian,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TVerdict {
    /// A certified Hodge isometry `T(X1, B1) -> T(X2, B2)` between the
    /// Mukai sublattices.
    Equivalent(IsometryMap),
    Refuted(GenusMismatch),
    /// No witness within the bound.
    Inconclusive {
        bound: u32,
    },
}

/// Whether `(X1, B1)` and `(X2, B2)` have Hodge-isometric generalized
/// transcendental lattices, decided by invariants or a bounded search.
pub fn t_equivalence(s1: &TwistedSurface, s2: &TwistedSurface, bound: u32) -> Result<TVerdict> {
    let h1 = s1.generalized_hodge()?;
    let h2 = s2.generalized_hodge()?;
    if let GenusVerdict::Differ(m) = genus_equal(h1.lattice(), h2.lattice()) {
        return Ok(TVerdict::Refuted(m));
    }
    match find_hodge_isometry(&h1, &h2, bound) {
        Some(w) => Ok(TVerdict::Equivalent(
            w.rebase(s1.gen_t.clone(), s2.gen_t.clone())?,
        )),
        None => Ok(TVerdict::Inconclusive { bound }),
    }
}

/// Whether `h1_sq / h2_sq` is the square of a nonzero rational.
pub fn square_ratio_check(h1_sq: &Int, h2_sq: &Int) -> Result<bool> {
    if h1_sq.is_zero() || h2_sq.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p: Int = h1_sq * h2_sq;
    if p.is_negative() {
        return Ok(false);
    }
    let r = p.sqrt();
    Ok(&r * &r == p)
}
