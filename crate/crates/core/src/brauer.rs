// SPDX-License-Identifier: Apache-2.0

//! B-fields, Brauer classes on a transcendental lattice, the Mukai lattice
//! and the `exp(B)` embedding.
//!
//! A class is stored as its values `t_i . B mod Z` on the stored basis
//! `t_i` of `T`. `H^4` is identified with `Z`, so `B ^ gamma` is the
//! rational number `B . gamma`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::discriminant::reduce_mod;
use crate::hodge::{HodgeLattice, PeriodVector};
use crate::isometry::IsometryMap;
use crate::lattice::{Lattice, Sublattice};
use crate::matrix::{to_rat_vec, IntMatrix};
use crate::normal_form::{hermite_rows, integer_kernel};
use crate::{Error, Int, Rat, Result};

/// A rational class in `H^2 (x) Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BField {
    ambient: Lattice,
    coords: Vec<Rat>,
}

impl BField {
    pub fn new(ambient: Lattice, coords: Vec<Rat>) -> Result<Self> {
        if coords.len() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                found: coords.len(),
            });
        }
        Ok(Self { ambient, coords })
    }

    pub fn zero(ambient: Lattice) -> Self {
        let coords = vec![Rat::zero(); ambient.rank()];
        Self { ambient, coords }
    }

    /// `v / d` for an integer vector `v`.
    pub fn from_fraction(ambient: Lattice, v: &[Int], d: &Int) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroScale);
        }
        let coords = v.iter().map(|x| Rat::new(x.clone(), d.clone())).collect();
        Self::new(ambient, coords)
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `B . v` for an integer vector.
    pub fn pair(&self, v: &[Int]) -> Result<Rat> {
        self.ambient.pair_rat(&self.coords, &to_rat_vec(v))
    }

    pub fn pair_rat(&self, v: &[Rat]) -> Result<Rat> {
        self.ambient.pair_rat(&self.coords, v)
    }

    fn check_ambient(&self, other: &Lattice) -> Result<()> {
        if self.ambient.gram() != other.gram() {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        other.check_ambient(&self.ambient)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.ambient.clone(), coords)
    }

    pub fn neg(&self) -> Self {
        Self {
            ambient: self.ambient.clone(),
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `B` written in new coordinates `x -> x * m` (rows of `m` are the
    /// images of the old basis).
    pub fn mapped(&self, m: &IntMatrix, target: Lattice) -> Result<Self> {
        let coords = m.to_rational().apply(&self.coords)?;
        Self::new(target, coords)
    }
}

/// A class in `Hom(T, Q/Z)`, stored by its values on the basis of `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerClass {
    transcendental: Sublattice,
    values: Vec<Rat>,
}

impl BrauerClass {
    pub fn new(transcendental: Sublattice, values: Vec<Rat>) -> Result<Self> {
        if values.len() != transcendental.rank() {
            return Err(Error::DimensionMismatch {
                expected: transcendental.rank(),
                found: values.len(),
            });
        }
        let one = Int::one();
        let values = values.iter().map(|v| reduce_mod(v, &one)).collect();
        Ok(Self {
            transcendental,
            values,
        })
    }

    pub fn trivial(transcendental: Sublattice) -> Self {
        let values = vec![Rat::zero(); transcendental.rank()];
        Self {
            transcendental,
            values,
        }
    }

    pub fn transcendental(&self) -> &Sublattice {
        &self.transcendental
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Lcm of the value denominators.
    pub fn order(&self) -> Int {
        self.values
            .iter()
            .fold(Int::one(), |acc, v| acc.lcm(v.denom()))
    }

    /// Hermite basis, in `T`-coordinates, of `{x : sum x_i values_i in Z}`.
    pub fn kernel_coordinates(&self) -> IntMatrix {
        let k = self.values.len();
        let n = self.order();
        if n.is_one() {
            return IntMatrix::identity(k);
        }
        // sum_i x_i (n values_i) + y n = 0 over Z, then forget y
        let mut row: Vec<Int> = self
            .values
            .iter()
            .map(|v| (v * Rat::from_integer(n.clone())).to_integer())
            .collect();
        row.push(n);
        let sys = IntMatrix::from_rows(vec![row], k + 1).expect("one row");
        let ker = integer_kernel(&sys);
        let projected: Vec<Vec<Int>> = ker.row_iter().map(|r| r[..k].to_vec()).collect();
        hermite_rows(&IntMatrix::from_rows(projected, k).expect("uniform rows"))
    }

    /// `T(X, alpha)`: the kernel as a sublattice of the ambient lattice,
    /// with basis `kernel_coordinates() * T`.
    pub fn kernel_lattice(&self) -> Sublattice {
        let basis = self
            .kernel_coordinates()
            .mul(self.transcendental.basis())
            .expect("kernel coordinates have rank T columns");
        Sublattice::new(self.transcendental.ambient().clone(), basis)
            .expect("kernel has full rank in T")
    }

    /// Some B-field with `kappa(B, T) = self`: the rational solution of
    /// `t_i . B = values_i` with free coordinates set to zero.
    pub fn lift(&self) -> Option<BField> {
        let ambient = self.transcendental.ambient();
        if self.transcendental.rank() == 0 {
            return Some(BField::zero(ambient.clone()));
        }
        let a = ambient
            .gram()
            .mul(&self.transcendental.basis().transpose())
            .ok()?
            .to_rational();
        let x = a.solve_left(&self.values)?;
        BField::new(ambient.clone(), x).ok()
    }
}

/// `kappa(B)`: `t_i -> t_i . B mod Z` on the basis of `T`.
pub fn kappa(b: &BField, t: &Sublattice) -> Result<BrauerClass> {
    b.check_ambient(t.ambient())?;
    let values = t
        .basis()
        .row_iter()
        .map(|r| b.pair(r))
        .collect::<Result<Vec<_>>>()?;
    BrauerClass::new(t.clone(), values)
}

/// Whether `B1 - B2` pairs integrally with every basis vector of `T`.
pub fn brauer_equal(b1: &BField, b2: &BField, t: &Sublattice) -> Result<bool> {
    let d = b1.sub(b2)?;
    d.check_ambient(t.ambient())?;
    for r in t.basis().row_iter() {
        if !d.pair(r)?.is_integer() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Transports `alpha` on the source of `g` to the target: `alpha o g^-1`.
pub fn pushforward_brauer(g: &IsometryMap, alpha: &BrauerClass) -> Result<BrauerClass> {
    if !g.source().same_span(alpha.transcendental()) {
        return Err(Error::AmbientMismatch);
    }
    // values on the basis of g.source()
    let change = alpha
        .transcendental()
        .coordinates_of_rows(g.source().basis())?;
    let on_source = change.to_rational().transpose().apply(alpha.values())?;
    let inv = g.inverse()?;
    let values = inv.matrix().to_rational().transpose().apply(&on_source)?;
    BrauerClass::new(g.target().clone(), values)
}

/// A vector `(h0, h2, h4)` of `H^0 + H^2 + H^4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub h0: Int,
    pub h2: Vec<Int>,
    pub h4: Int,
}

impl MukaiVector {
    pub fn new(h0: Int, h2: Vec<Int>, h4: Int) -> Self {
        Self { h0, h2, h4 }
    }

    /// Coordinates in the basis `(h0, h2..., h4)` of [`mukai_lattice`].
    pub fn to_coords(&self) -> Vec<Int> {
        let mut v = Vec::with_capacity(self.h2.len() + 2);
        v.push(self.h0.clone());
        v.extend(self.h2.iter().cloned());
        v.push(self.h4.clone());
        v
    }

    pub fn from_coords(v: &[Int]) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: v.len(),
            });
        }
        let last = v.len() - 1;
        Ok(Self {
            h0: v[0].clone(),
            h2: v[1..last].to_vec(),
            h4: v[last].clone(),
        })
    }

    /// `a2 . b2 - a0 b4 - a4 b0`.
    pub fn pair(&self, other: &Self, h2: &Lattice) -> Result<Int> {
        Ok(h2.pair(&self.h2, &other.h2)? - &self.h0 * &other.h4 - &self.h4 * &other.h0)
    }
}

/// `H^0 + H^2 + H^4` with the Mukai pairing, basis `(h0, h2..., h4)`.
pub fn mukai_lattice(h2: &Lattice) -> Lattice {
    let r = h2.rank();
    let mut gram = IntMatrix::zeros(r + 2, r + 2);
    for i in 0..r {
        for j in 0..r {
            gram[(i + 1, j + 1)] = h2.gram()[(i, j)].clone();
        }
    }
    gram[(0, r + 1)] = -Int::one();
    gram[(r + 1, 0)] = -Int::one();
    let mut labels: Vec<String> = vec!["h0".into()];
    labels.extend((0..r).map(|i| h2.label(i)));
    labels.push("h4".into());
    let lattice = Lattice::new(gram).expect("H^0 + H^4 block is unimodular");
    match lattice.clone().with_labels(labels) {
        Ok(l) => l,
        Err(_) => lattice,
    }
}

/// `exp(B)(sigma) = sigma + B ^ sigma`: per symbol, `(0, v_s, B . v_s)`.
pub fn gcy(h: &HodgeLattice, b: &BField) -> Result<HodgeLattice> {
    b.check_ambient(h.lattice())?;
    let columns = h
        .period()
        .columns()
        .iter()
        .map(|c| {
            let mut m = Vec::with_capacity(c.len() + 2);
            m.push(Rat::zero());
            m.extend(c.iter().cloned());
            m.push(b.pair_rat(c)?);
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let mukai = mukai_lattice(h.lattice());
    let period = PeriodVector::new(mukai.rank(), columns)?;
    HodgeLattice::new(mukai, h.symbols().clone(), period)
}

/// `T(X, B)`: the minimal primitive sublattice of the Mukai lattice whose
/// complexification contains `exp(B)(sigma)`.
pub fn generalized_transcendental(h: &HodgeLattice, b: &BField) -> Result<Sublattice> {
    Ok(gcy(h, b)?.transcendental_lattice())
}

fn exp_rows(kernel: &Sublattice, b: &BField) -> Result<IntMatrix> {
    b.check_ambient(kernel.ambient())?;
    let rows = kernel
        .basis()
        .row_iter()
        .map(|g| {
            let x = b.pair(g)?;
            if !x.is_integer() {
                return Err(Error::NonIntegralTwist);
            }
            Ok(MukaiVector::new(Int::zero(), g.to_vec(), x.to_integer()).to_coords())
        })
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(rows, kernel.ambient().rank() + 2)
}

/// `gamma -> (0, gamma, B . gamma)` from `K(k)` onto its image in the Mukai
/// lattice, twisted by `k`.
pub fn exp_b_embed(kernel: &Sublattice, b: &BField, k: u32) -> Result<IsometryMap> {
    check_k(k)?;
    let image = exp_rows(kernel, b)?;
    let target = Sublattice::new(mukai_lattice(kernel.ambient()), image)?;
    let k = Int::from(k);
    IsometryMap::certify_twisted(
        kernel.clone(),
        k.clone(),
        target,
        k,
        IntMatrix::identity(kernel.rank()),
    )
}

/// [`exp_b_embed`] certified onto `T(X, B)`, given as `gen_t`; fails unless
/// the image is all of `gen_t`.
pub fn exp_b_onto(
    kernel: &Sublattice,
    b: &BField,
    k: u32,
    gen_t: &Sublattice,
) -> Result<IsometryMap> {
    check_k(k)?;
    let image = exp_rows(kernel, b)?;
    if gen_t.ambient().gram() != mukai_lattice(kernel.ambient()).gram() {
        return Err(Error::AmbientMismatch);
    }
    let matrix = gen_t
        .coordinates_of_rows(&image)
        .map_err(|_| Error::Certification("exp(B) image leaves T(X, B)".into()))?;
    let k = Int::from(k);
    IsometryMap::certify_twisted(kernel.clone(), k.clone(), gen_t.clone(), k, matrix)
}

/// `exp(-B)` from `T(X, B)` back to the kernel: drop the `H^0`, `H^4`
/// parts after checking `h0 = 0` and `h4 = B . gamma`.
pub fn exp_neg_b(
    gen_t: &Sublattice,
    b: &BField,
    k: u32,
    kernel: &Sublattice,
) -> Result<IsometryMap> {
    check_k(k)?;
    let r = kernel.ambient().rank();
    let mut rows = Vec::with_capacity(gen_t.rank());
    for v in gen_t.basis().row_iter() {
        let m = MukaiVector::from_coords(v)?;
        if m.h2.len() != r {
            return Err(Error::AmbientMismatch);
        }
        if !m.h0.is_zero() || b.pair(&m.h2)? != Rat::from_integer(m.h4.clone()) {
            return Err(Error::Certification(format!(
                "vector {v:?} is not of the form (0, g, B.g)"
            )));
        }
        rows.push(m.h2);
    }
    let stripped = IntMatrix::from_rows(rows, r)?;
    let matrix = kernel
        .coordinates_of_rows(&stripped)
        .map_err(|_| Error::Certification("exp(-B) image leaves the kernel".into()))?;
    let k = Int::from(k);
    IsometryMap::certify_twisted(gen_t.clone(), k.clone(), kernel.clone(), k, matrix)
}

fn check_k(k: u32) -> Result<()> {
    if k == 1 || k == 2 {
        Ok(())
    } else {
        Err(Error::ZeroScale)
    }
}
