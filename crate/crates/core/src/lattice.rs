// SPDX-License-Identifier: Apache-2.0

//! Nondegenerate integral lattices and their sublattices.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::matrix::{dot_int, dot_rat, to_rat_vec, IntMatrix, RatMatrix};
use crate::normal_form::{hermite_rows, integer_kernel, saturate_rows, smith};
use crate::{Error, Int, Rat, Result};

/// The named building blocks `U`, `U(n)` and `<d>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    U,
    Un(i64),
    Rank1(i64),
}

/// A free Z-module of finite positive rank with a nondegenerate symmetric
/// integral form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    labels: Option<Vec<String>>,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if gram.rows() == 0 {
            return Err(Error::EmptyLattice);
        }
        if !gram.is_square() {
            return Err(Error::NotSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        if let Some((row, col)) = gram.asymmetry() {
            return Err(Error::Asymmetric { row, col });
        }
        if gram.det()?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Self { gram, labels: None })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn with_labels<S: Into<String>>(
        mut self,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if labels.len() != self.rank() || distinct.len() != labels.len() {
            return Err(Error::BadLabels { rank: self.rank() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn standard(kind: StandardKind) -> Result<Self> {
        match kind {
            StandardKind::U => Self::from_i64(&[&[0, 1], &[1, 0]]),
            StandardKind::Un(0) | StandardKind::Rank1(0) => Err(Error::Degenerate),
            StandardKind::Un(n) => Self::from_i64(&[&[0, n], &[n, 0]]),
            StandardKind::Rank1(d) => Self::from_i64(&[&[d]]),
        }
    }

    pub fn hyperbolic() -> Self {
        Self::standard(StandardKind::U).expect("U is nondegenerate")
    }

    /// `U(n)`; panics on `n = 0`.
    pub fn hyperbolic_scaled(n: i64) -> Self {
        Self::standard(StandardKind::Un(n)).expect("n is nonzero")
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("b{}", i + 1),
        }
    }

    pub fn det(&self) -> Int {
        self.gram.det().expect("gram is square")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| num_integer::Integer::is_even(&self.gram[(i, i)]))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// `L(m)`: same group, form scaled by `m`.
    pub fn twist(&self, m: &Int) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::ZeroScale);
        }
        Ok(Self {
            gram: self.gram.scale(m),
            labels: self.labels.clone(),
        })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let labels = match (&self.labels, &other.labels) {
            (None, None) => None,
            _ => {
                let mut seen = BTreeSet::new();
                let mut out = Vec::with_capacity(self.rank() + other.rank());
                let all = (0..self.rank())
                    .map(|i| self.label(i))
                    .chain((0..other.rank()).map(|i| other.label(i)));
                for l in all {
                    let mut name = l.clone();
                    let mut k = 2;
                    while seen.contains(&name) {
                        name = format!("{l}_{k}");
                        k += 1;
                    }
                    seen.insert(name.clone());
                    out.push(name);
                }
                Some(out)
            }
        };
        Self {
            gram: self.gram.block_diag(&other.gram),
            labels,
        }
    }

    pub fn pair(&self, v: &[Int], w: &[Int]) -> Result<Int> {
        self.check_len(v.len())?;
        self.check_len(w.len())?;
        let gw = self.gram.apply(w)?;
        Ok(dot_int(v, &gw))
    }

    pub fn pair_rat(&self, v: &[Rat], w: &[Rat]) -> Result<Rat> {
        self.check_len(v.len())?;
        self.check_len(w.len())?;
        let gw = self.gram.to_rational().apply(w)?;
        Ok(dot_rat(v, &gw))
    }

    pub fn norm(&self, v: &[Int]) -> Result<Int> {
        self.pair(v, v)
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: n,
            })
        }
    }

    /// Inertia `(positives, negatives)` by exact symmetric elimination.
    pub fn signature(&self) -> (usize, usize) {
        inertia(&self.gram.to_rational())
    }

    pub fn discriminant_form(&self) -> crate::DiscriminantForm {
        crate::DiscriminantForm::of(self)
    }

    pub fn genus_invariants(&self) -> crate::GenusInvariants {
        crate::GenusInvariants::of(self)
    }

    /// The lattice whose basis is the rows of `p`: Gram `p * G * p^T`.
    pub fn change_basis(&self, p: &IntMatrix) -> Result<Self> {
        Self::new(p.congruence(&self.gram)?)
    }
}

impl fmt::Display for Lattice {
    /// Canonical text rendering: rank, Gram rows, determinant, signature.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, n) = self.signature();
        writeln!(f, "rank {}", self.rank())?;
        if let Some(labels) = &self.labels {
            writeln!(f, "basis {}", labels.join(" "))?;
        }
        for row in self.gram.row_iter() {
            f.write_str("gram")?;
            for x in row {
                write!(f, " {x}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "det {}", self.det())?;
        write!(f, "signature ({p},{n})")
    }
}

/// Counts positive and negative eigenvalue signs of a symmetric rational
/// matrix by congruence diagonalization.
pub(crate) fn inertia(m: &RatMatrix) -> (usize, usize) {
    let mut a = m.clone();
    let n = a.rows();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                a.swap_rows(k, j);
                a.swap_cols(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                // e_k <- e_k + e_j gives a[k][k] = 2 a[k][j]
                for c in 0..n {
                    let x = a[(j, c)].clone();
                    a[(k, c)] += x;
                }
                for r in 0..n {
                    let x = a[(r, j)].clone();
                    a[(r, k)] += x;
                }
            } else {
                // row k is zero: a null direction
                k += 1;
                continue;
            }
        }
        let p = a[(k, k)].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &p;
            for c in k..n {
                let x = &a[(k, c)] * &f;
                a[(i, c)] -= x;
            }
            for r in k..n {
                let x = &a[(r, k)] * &f;
                a[(r, i)] -= x;
            }
        }
        k += 1;
    }
    (pos, neg)
}

/// A sublattice given by integer coordinates of its basis in an ambient
/// lattice. The basis may be isotropic or degenerate; it must be free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IntMatrix,
}

/// Index and elementary divisors of `ambient / sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientInfo {
    /// `None` when the quotient is infinite.
    pub index: Option<Int>,
    pub elementary_divisors: Vec<Int>,
}

impl Sublattice {
    pub fn new(ambient: Lattice, basis: IntMatrix) -> Result<Self> {
        if basis.cols() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                found: basis.cols(),
            });
        }
        if basis.rank() != basis.rows() {
            return Err(Error::DependentBasis);
        }
        Ok(Self { ambient, basis })
    }

    /// The sublattice spanned by arbitrary generators, Hermite-reduced.
    pub fn spanned_by(ambient: Lattice, generators: &IntMatrix) -> Result<Self> {
        if generators.cols() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                found: generators.cols(),
            });
        }
        Ok(Self {
            basis: hermite_rows(generators),
            ambient,
        })
    }

    pub fn full(ambient: Lattice) -> Self {
        let basis = IntMatrix::identity(ambient.rank());
        Self { ambient, basis }
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Induced Gram matrix `basis * G * basis^T`.
    pub fn gram(&self) -> IntMatrix {
        self.basis
            .congruence(self.ambient.gram())
            .expect("basis width matches ambient rank")
    }

    /// The sublattice as an abstract lattice; fails when the induced form
    /// is degenerate or the rank is zero.
    pub fn to_lattice(&self) -> Result<Lattice> {
        Lattice::new(self.gram())
    }

    pub fn hermite(&self) -> Self {
        Self {
            ambient: self.ambient.clone(),
            basis: hermite_rows(&self.basis),
        }
    }

    /// Same ambient Gram and the same subgroup.
    pub fn same_span(&self, other: &Self) -> bool {
        self.ambient.gram() == other.ambient.gram()
            && hermite_rows(&self.basis) == hermite_rows(&other.basis)
    }

    pub fn saturate(&self) -> Self {
        Self {
            ambient: self.ambient.clone(),
            basis: saturate_rows(&self.basis),
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.saturate().same_span(self)
    }

    /// `{v : v . s = 0 for all s in S}`, primitive by construction.
    pub fn orthogonal_complement(&self) -> Self {
        let n = self.ambient.rank();
        let basis = if self.rank() == 0 {
            IntMatrix::identity(n)
        } else {
            let m = self
                .basis
                .mul(self.ambient.gram())
                .expect("basis width matches ambient rank");
            integer_kernel(&m)
        };
        Self {
            ambient: self.ambient.clone(),
            basis,
        }
    }

    pub fn quotient(&self) -> QuotientInfo {
        let s = smith(&self.basis);
        let elementary_divisors = s.elementary_divisors();
        let index = (s.rank() == self.ambient.rank()).then(|| s.diagonal.iter().product::<Int>());
        QuotientInfo {
            index,
            elementary_divisors,
        }
    }

    /// Integer coordinates of `v` in this basis, if `v` lies in the span.
    pub fn coordinates_of(&self, v: &[Int]) -> Option<Vec<Int>> {
        let x = self.rational_coordinates_of(&to_rat_vec(v))?;
        x.iter()
            .all(|c| c.is_integer())
            .then(|| x.iter().map(Rat::to_integer).collect())
    }

    /// Rational coordinates of `v` in this basis, if `v` lies in the
    /// rational span.
    pub fn rational_coordinates_of(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if v.len() != self.ambient.rank() {
            return None;
        }
        if self.rank() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        self.basis.to_rational().solve_left(v)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates_of(v).is_some()
    }

    /// Coordinates of the rows of `other` in this basis (requires
    /// `other` inside `self`).
    pub fn coordinates_of_rows(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let rows = other
            .row_iter()
            .map(|r| self.coordinates_of(r).ok_or(Error::NotInSublattice))
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::from_rows(rows, self.rank())
    }

    /// Ambient vector for sublattice coordinates.
    pub fn embed(&self, coords: &[Int]) -> Result<Vec<Int>> {
        self.basis.apply(coords)
    }

    pub fn embed_rat(&self, coords: &[Rat]) -> Result<Vec<Rat>> {
        self.basis.to_rational().apply(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int_vec;

    fn u() -> Lattice {
        Lattice::hyperbolic()
    }

    #[test]
    fn standard_lattices() {
        assert_eq!(u().gram(), &IntMatrix::from_i64(&[&[0, 1], &[1, 0]]));
        assert_eq!(Lattice::standard(StandardKind::Un(1)).unwrap(), u());
        assert_eq!(
            Lattice::standard(StandardKind::Un(3)).unwrap().gram(),
            &IntMatrix::from_i64(&[&[0, 3], &[3, 0]])
        );
        assert_eq!(
            Lattice::standard(StandardKind::Un(0)),
            Err(Error::Degenerate)
        );
        assert_eq!(
            Lattice::standard(StandardKind::Rank1(0)),
            Err(Error::Degenerate)
        );
        assert_eq!(
            Lattice::standard(StandardKind::Rank1(-2)).unwrap().gram(),
            &IntMatrix::from_i64(&[&[-2]])
        );
    }

    #[test]
    fn construction_rejects_bad_grams() {
        assert_eq!(
            Lattice::from_i64(&[&[0, 1], &[2, 0]]),
            Err(Error::Asymmetric { row: 0, col: 1 })
        );
        assert_eq!(
            Lattice::from_i64(&[&[1, 1], &[1, 1]]),
            Err(Error::Degenerate)
        );
        assert_eq!(
            Lattice::new(IntMatrix::zeros(0, 0)),
            Err(Error::EmptyLattice)
        );
        assert!(u().with_labels(["e", "e"]).is_err());
        assert!(u().with_labels(["e"]).is_err());
    }

    #[test]
    fn twist_and_sum() {
        let t = u().twist(&Int::from(2)).unwrap();
        assert_eq!(t.gram(), &IntMatrix::from_i64(&[&[0, 2], &[2, 0]]));
        assert_eq!(u().twist(&Int::one()).unwrap(), u());
        let t6 = Lattice::hyperbolic_scaled(2).twist(&Int::from(3)).unwrap();
        assert_eq!(t6, Lattice::hyperbolic_scaled(6));
        assert_eq!(u().twist(&Int::zero()), Err(Error::ZeroScale));

        let s = u().direct_sum(&Lattice::hyperbolic_scaled(2));
        assert_eq!(s.rank(), 4);
        assert_eq!(s.det(), Int::from(4));
        let u3 = u().direct_sum(&u()).direct_sum(&u());
        assert_eq!(u3.rank(), 6);
        assert_eq!(u3.signature(), (3, 3));

        let a = u().with_labels(["e", "f"]).unwrap();
        let aa = a.direct_sum(&a);
        assert_eq!(aa.labels().unwrap(), ["e", "f", "e_2", "f_2"]);
    }

    #[test]
    fn pairing() {
        let e = int_vec(&[1, 0]);
        let f = int_vec(&[0, 1]);
        assert_eq!(u().pair(&e, &f).unwrap(), Int::one());
        assert_eq!(
            Lattice::hyperbolic_scaled(5).pair(&e, &f).unwrap(),
            Int::from(5)
        );
        assert_eq!(u().norm(&int_vec(&[1, 1])).unwrap(), Int::from(2));
        assert!(u().pair(&int_vec(&[1]), &f).is_err());
        let half = alloc::vec![Rat::new(1.into(), 2.into()), Rat::zero()];
        assert_eq!(
            u().pair_rat(&half, &to_rat_vec(&f)).unwrap(),
            Rat::new(1.into(), 2.into())
        );
    }

    #[test]
    fn complements() {
        let e = Sublattice::new(u(), IntMatrix::from_i64(&[&[1, 0]])).unwrap();
        let c = e.orthogonal_complement();
        assert!(c.same_span(&e));
        let full = Sublattice::full(u());
        assert_eq!(full.orthogonal_complement().rank(), 0);
        let zero = Sublattice::new(u(), IntMatrix::zeros(0, 2)).unwrap();
        assert!(zero.orthogonal_complement().same_span(&full));
    }

    #[test]
    fn saturation() {
        let two_e = Sublattice::new(u(), IntMatrix::from_i64(&[&[2, 0]])).unwrap();
        assert_eq!(two_e.saturate().basis(), &IntMatrix::from_i64(&[&[1, 0]]));
        let ef = Sublattice::new(u(), IntMatrix::from_i64(&[&[2, 2]])).unwrap();
        assert_eq!(ef.saturate().basis(), &IntMatrix::from_i64(&[&[1, 1]]));
        let prim = Sublattice::new(u(), IntMatrix::from_i64(&[&[1, 1]])).unwrap();
        assert!(prim.is_primitive());
        assert_eq!(prim.saturate().basis(), prim.basis());
        assert!(!two_e.is_primitive());
    }

    #[test]
    fn quotients() {
        let s = Sublattice::new(u(), IntMatrix::from_i64(&[&[1, 0], &[0, 2]])).unwrap();
        let q = s.quotient();
        assert_eq!(q.index, Some(Int::from(2)));
        assert_eq!(q.elementary_divisors, int_vec(&[2]));
        let q = Sublattice::full(u()).quotient();
        assert_eq!(q.index, Some(Int::one()));
        assert!(q.elementary_divisors.is_empty());
        let line = Sublattice::new(u(), IntMatrix::from_i64(&[&[2, 0]])).unwrap();
        assert_eq!(line.quotient().index, None);
    }

    #[test]
    fn signatures() {
        assert_eq!(u().signature(), (1, 1));
        assert_eq!(Lattice::from_i64(&[&[-2]]).unwrap().signature(), (0, 1));
        let e8ish = Lattice::from_i64(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]).unwrap();
        assert_eq!(e8ish.signature(), (3, 0));
    }

    #[test]
    fn dependent_basis_rejected() {
        let b = IntMatrix::from_i64(&[&[1, 0], &[2, 0]]);
        assert_eq!(Sublattice::new(u(), b), Err(Error::DependentBasis));
    }

    #[test]
    fn coordinates() {
        let s = Sublattice::new(u(), IntMatrix::from_i64(&[&[1, 0], &[0, 2]])).unwrap();
        assert_eq!(s.coordinates_of(&int_vec(&[3, 4])), Some(int_vec(&[3, 2])));
        assert_eq!(s.coordinates_of(&int_vec(&[3, 3])), None);
    }
}
