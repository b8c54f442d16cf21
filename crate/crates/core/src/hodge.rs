// SPDX-License-Identifier: Apache-2.0

//! Formal weight-two periods.
//!
//! A period `sigma` in `L (x) C` is written as `sum_s s * v_s` over a finite
//! list of symbols (`1`, `w1`, `w2`, `w1w2`, ...) assumed linearly
//! independent over Q, with one rational coefficient vector `v_s` per
//! symbol. Products of symbols are only known where declared.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::lattice::{Lattice, Sublattice};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::{Error, Int, Rat, Result};

pub const UNIT: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolBasis {
    symbols: Vec<String>,
    /// Keyed by `(i, j)` with `i <= j`; value is a coefficient vector over
    /// `symbols`.
    products: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl SymbolBasis {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        if !seen.contains(UNIT) {
            return Err(Error::MissingUnit);
        }
        Ok(Self {
            symbols,
            products: BTreeMap::new(),
        })
    }

    /// `1, w1, w2, w1w2` with `w1 * w2 = w1w2`.
    pub fn two_periods() -> Self {
        let mut b = Self::new([UNIT, "w1", "w2", "w1w2"]).expect("distinct symbols");
        b.declare_product("w1", "w2", &[(Rat::one(), "w1w2")])
            .expect("fresh product");
        b
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn unit_index(&self) -> usize {
        self.index_of(UNIT).expect("unit is always present")
    }

    fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.len()];
        v[i] = Rat::one();
        v
    }

    /// Declares `a * b = sum c_k s_k`. Products with `1` are fixed and may
    /// only be redeclared consistently.
    pub fn declare_product(&mut self, a: &str, b: &str, value: &[(Rat, &str)]) -> Result<()> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        let mut v = vec![Rat::zero(); self.len()];
        for (c, s) in value {
            v[self.index_of(s)?] += c;
        }
        let key = (i.min(j), i.max(j));
        let conflict = match self.product(key.0, key.1) {
            Ok(existing) => existing != v,
            Err(_) => false,
        };
        if conflict {
            return Err(Error::ConflictingProduct(a.to_string(), b.to_string()));
        }
        if i != self.unit_index() && j != self.unit_index() {
            self.products.insert(key, v);
        }
        Ok(())
    }

    pub fn product(&self, i: usize, j: usize) -> Result<Vec<Rat>> {
        let u = self.unit_index();
        if i == u {
            return Ok(self.basis_vector(j));
        }
        if j == u {
            return Ok(self.basis_vector(i));
        }
        self.products
            .get(&(i.min(j), i.max(j)))
            .cloned()
            .ok_or_else(|| {
                Error::UndeclaredProduct(self.symbols[i].clone(), self.symbols[j].clone())
            })
    }

    /// Declared products not involving `1`, as `(a, b, value)` with `a <= b`
    /// in symbol order.
    pub fn declared_products(&self) -> impl Iterator<Item = (&str, &str, &[Rat])> + '_ {
        self.products.iter().map(|(&(i, j), v)| {
            (
                self.symbols[i].as_str(),
                self.symbols[j].as_str(),
                v.as_slice(),
            )
        })
    }

    /// Renders an algebra element as `c*s + ...`.
    pub fn format_element(&self, v: &[Rat]) -> String {
        let terms: Vec<String> = v
            .iter()
            .zip(&self.symbols)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, s)| format!("{c}*{s}"))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Coefficient vectors of a period, one column per symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodVector {
    rank: usize,
    columns: Vec<Vec<Rat>>,
}

impl PeriodVector {
    pub fn new(rank: usize, columns: Vec<Vec<Rat>>) -> Result<Self> {
        for c in &columns {
            if c.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: c.len(),
                });
            }
        }
        if columns.iter().flatten().all(Zero::is_zero) {
            return Err(Error::ZeroPeriod);
        }
        Ok(Self { rank, columns })
    }

    /// Builds a period from `(symbol, integer vector)` terms; symbols not
    /// mentioned get a zero column.
    pub fn from_terms(
        symbols: &SymbolBasis,
        rank: usize,
        terms: &[(&str, Vec<Int>)],
    ) -> Result<Self> {
        let mut columns = vec![vec![Rat::zero(); rank]; symbols.len()];
        for (s, v) in terms {
            if v.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: v.len(),
                });
            }
            let col = &mut columns[symbols.index_of(s)?];
            for (slot, x) in col.iter_mut().zip(v) {
                *slot += Rat::from_integer(x.clone());
            }
        }
        Self::new(rank, columns)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_symbols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, s: usize) -> &[Rat] {
        &self.columns[s]
    }

    pub fn columns(&self) -> &[Vec<Rat>] {
        &self.columns
    }

    /// Columns as rows of a `|symbols| x rank` matrix.
    pub fn coefficient_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(self.columns.clone(), self.rank).expect("uniform columns")
    }

    /// Pushes the period through a linear map (rows = images of basis).
    pub fn map(&self, m: &IntMatrix) -> Result<Self> {
        let mr = m.to_rational();
        let columns = self
            .columns
            .iter()
            .map(|c| mr.apply(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m.cols(), columns)
    }

    pub fn scaled(&self, lambda: &Rat) -> Self {
        Self {
            rank: self.rank,
            columns: self
                .columns
                .iter()
                .map(|c| c.iter().map(|x| x * lambda).collect())
                .collect(),
        }
    }

    /// The same period written in the coordinates of `sub`.
    pub fn in_sublattice(&self, sub: &Sublattice) -> Result<Self> {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                sub.rational_coordinates_of(c)
                    .ok_or(Error::PeriodOutsideSublattice)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sub.rank(), columns)
    }

    /// The period of a sublattice written back in ambient coordinates.
    pub fn embedded(&self, sub: &Sublattice) -> Result<Self> {
        let columns = self
            .columns
            .iter()
            .map(|c| sub.embed_rat(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sub.ambient().rank(), columns)
    }

    /// Integer rows spanning the same rational space as the nonzero columns.
    pub fn cleared_rows(&self) -> IntMatrix {
        let rows: Vec<Vec<Int>> = self
            .columns
            .iter()
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .map(|c| {
                let m = RatMatrix::from_rows(vec![c.clone()], self.rank).expect("one row");
                let d = Rat::from_integer(m.denominator_lcm());
                c.iter().map(|x| (x * &d).to_integer()).collect()
            })
            .collect();
        IntMatrix::from_rows(rows, self.rank).expect("uniform columns")
    }
}

/// `sum_{s,t} (v_s . w_t) * (s * t)` as a coefficient vector over the
/// symbols.
pub fn period_pairing(
    lattice: &Lattice,
    symbols: &SymbolBasis,
    sigma: &PeriodVector,
    tau: &PeriodVector,
) -> Result<Vec<Rat>> {
    let k = symbols.len();
    for p in [sigma, tau] {
        if p.rank() != lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: lattice.rank(),
                found: p.rank(),
            });
        }
        if p.num_symbols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: p.num_symbols(),
            });
        }
    }
    let mut out = vec![Rat::zero(); k];
    for s in 0..k {
        for t in 0..k {
            let c = lattice.pair_rat(sigma.column(s), tau.column(t))?;
            if c.is_zero() {
                continue;
            }
            let prod = symbols.product(s, t)?;
            for (slot, p) in out.iter_mut().zip(&prod) {
                *slot += &c * p;
            }
        }
    }
    Ok(out)
}

/// A lattice with a formal weight-two period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeLattice {
    lattice: Lattice,
    symbols: SymbolBasis,
    period: PeriodVector,
}

impl HodgeLattice {
    /// Rejects a period whose square is computable and nonzero.
    pub fn new(lattice: Lattice, symbols: SymbolBasis, period: PeriodVector) -> Result<Self> {
        match period_pairing(&lattice, &symbols, &period, &period) {
            Ok(v) if v.iter().any(|x| !x.is_zero()) => return Err(Error::NonIsotropicPeriod),
            Ok(_) | Err(Error::UndeclaredProduct(..)) => {}
            Err(e) => return Err(e),
        }
        Ok(Self {
            lattice,
            symbols,
            period,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn symbols(&self) -> &SymbolBasis {
        &self.symbols
    }

    pub fn period(&self) -> &PeriodVector {
        &self.period
    }

    pub fn period_square(&self) -> Result<Vec<Rat>> {
        period_pairing(&self.lattice, &self.symbols, &self.period, &self.period)
    }

    /// The minimal primitive sublattice whose complexification contains
    /// the period. Relies on the symbols being independent over Q.
    pub fn transcendental_lattice(&self) -> Sublattice {
        let rows = self.period.cleared_rows();
        Sublattice::spanned_by(self.lattice.clone(), &rows)
            .expect("rows have lattice width")
            .saturate()
    }

    /// `(T^perp, rank T^perp)`.
    pub fn ns_and_picard(&self) -> (Sublattice, usize) {
        let ns = self.transcendental_lattice().orthogonal_complement();
        let rho = ns.rank();
        (ns, rho)
    }

    /// Restriction to a sublattice containing the period; the induced form
    /// must be nondegenerate.
    pub fn restrict(&self, sub: &Sublattice) -> Result<Self> {
        if sub.ambient() != &self.lattice {
            return Err(Error::AmbientMismatch);
        }
        let period = self.period.in_sublattice(sub)?;
        Self::new(sub.to_lattice()?, self.symbols.clone(), period)
    }

    pub fn transcendental_part(&self) -> Result<Self> {
        self.restrict(&self.transcendental_lattice())
    }

    /// The same Hodge structure on the basis given by the rows of the
    /// unimodular matrix `p`.
    pub fn change_basis(&self, p: &IntMatrix) -> Result<Self> {
        let inv = p.unimodular_inverse()?;
        let lattice = self.lattice.change_basis(p)?;
        let period = self.period.map(&inv)?;
        Self::new(lattice, self.symbols.clone(), period)
    }
}

/// Ordered basis of `H^1` of an abelian surface; the wedge of the four
/// classes in this order integrates to `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Frame {
    labels: [String; 4],
}

impl H1Frame {
    pub fn new<S: Into<String>>(labels: [S; 4]) -> Result<Self> {
        let labels = labels.map(Into::into);
        let set: BTreeSet<&String> = labels.iter().collect();
        if set.len() != 4 {
            return Err(Error::BadLabels { rank: 4 });
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[String; 4] {
        &self.labels
    }
}

/// Pairs `(i, j)`, `i < j`, in lexicographic order: the wedge basis.
pub fn wedge_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn permutation_sign(p: [usize; 4]) -> i64 {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0;
            }
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `H^2 = wedge^2 H^1` with `(a^b).(c^d)` the orientation sign of
/// `(a, b, c, d)`. Isometric to `U + U + U`.
pub fn wedge_square_lattice(frame: &H1Frame) -> Lattice {
    let pairs = wedge_pairs(4);
    let mut gram = IntMatrix::zeros(6, 6);
    for (r, &(i, j)) in pairs.iter().enumerate() {
        for (c, &(k, l)) in pairs.iter().enumerate() {
            gram[(r, c)] = Int::from(permutation_sign([i, j, k, l]));
        }
    }
    let labels = pairs
        .iter()
        .map(|&(i, j)| format!("{}^{}", frame.labels[i], frame.labels[j]));
    Lattice::new(gram)
        .expect("wedge form is unimodular")
        .with_labels(labels)
        .expect("frame labels are distinct")
}

/// `wedge^2 theta` on the wedge basis: `(a^b) -> theta(a)^theta(b)`.
pub fn wedge_square_map(theta: &IntMatrix) -> Result<IntMatrix> {
    if !theta.is_square() {
        return Err(Error::NotSquare {
            rows: theta.rows(),
            cols: theta.cols(),
        });
    }
    if theta.det()?.is_zero() {
        return Err(Error::Singular);
    }
    let pairs = wedge_pairs(theta.rows());
    let mut out = IntMatrix::zeros(pairs.len(), pairs.len());
    for (r, &(i, j)) in pairs.iter().enumerate() {
        for (c, &(k, l)) in pairs.iter().enumerate() {
            out[(r, c)] = &theta[(i, k)] * &theta[(j, l)] - &theta[(i, l)] * &theta[(j, k)];
        }
    }
    Ok(out)
}

/// `lambda` with `sigma = lambda * tau`, if one exists.
pub fn proportionality(sigma: &PeriodVector, tau: &PeriodVector) -> Option<Rat> {
    if sigma.rank() != tau.rank() || sigma.num_symbols() != tau.num_symbols() {
        return None;
    }
    let pairs = || {
        sigma
            .columns()
            .iter()
            .flatten()
            .zip(tau.columns().iter().flatten())
    };
    let (s0, t0) = pairs().find(|(_, t)| !t.is_zero())?;
    let lambda = s0 / t0;
    if lambda.is_zero() {
        return None;
    }
    pairs().all(|(s, t)| *s == &lambda * t).then_some(lambda)
}

pub(crate) fn int_column_period(
    symbols: &SymbolBasis,
    rank: usize,
    terms: &[(&str, Vec<i64>)],
) -> PeriodVector {
    let terms: Vec<(&str, Vec<Int>)> = terms
        .iter()
        .map(|(s, v)| (*s, v.iter().map(|&x| Int::from(x)).collect()))
        .collect();
    PeriodVector::from_terms(symbols, rank, &terms).expect("well-formed fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int_vec;

    fn frame() -> H1Frame {
        H1Frame::new(["x1", "x2", "y1", "y2"]).unwrap()
    }

    fn unit(i: usize) -> Vec<Int> {
        let mut v = vec![Int::zero(); 6];
        v[i] = Int::one();
        v
    }

    // wedge basis order: x1^x2, x1^y1, x1^y2, x2^y1, x2^y2, y1^y2
    #[test]
    fn wedge_pairings() {
        let h2 = wedge_square_lattice(&frame());
        assert_eq!(h2.pair(&unit(0), &unit(5)).unwrap(), Int::one());
        assert_eq!(h2.pair(&unit(1), &unit(2)).unwrap(), Int::zero());
        assert_eq!(h2.pair(&unit(1), &unit(4)).unwrap(), Int::from(-1));
        assert_eq!(h2.pair(&unit(2), &unit(3)).unwrap(), Int::one());
        assert_eq!(h2.signature(), (3, 3));
        assert!(h2.is_unimodular() && h2.is_even());
        assert_eq!(h2.labels().unwrap()[0], "x1^x2");
    }

    #[test]
    fn wedge_map_examples() {
        let id = IntMatrix::identity(4);
        assert_eq!(wedge_square_map(&id).unwrap(), IntMatrix::identity(6));
        let n = 5;
        let theta =
            IntMatrix::from_i64(&[&[n, 0, 0, 0], &[0, 1, 0, 0], &[-1, 0, 1, 0], &[0, 0, 0, 1]]);
        let w = wedge_square_map(&theta).unwrap();
        let mut expect = vec![Int::zero(); 6];
        expect[0] = Int::from(n);
        assert_eq!(w.row(0), expect.as_slice());
        assert_eq!(
            wedge_square_map(&IntMatrix::zeros(4, 4)),
            Err(Error::Singular)
        );
    }

    #[test]
    fn symbol_products() {
        let b = SymbolBasis::two_periods();
        let w1 = b.index_of("w1").unwrap();
        let w2 = b.index_of("w2").unwrap();
        assert_eq!(b.product(w1, w2).unwrap(), b.basis_vector(3));
        assert_eq!(b.product(w2, w1).unwrap(), b.basis_vector(3));
        assert_eq!(b.product(0, w2).unwrap(), b.basis_vector(w2));
        assert!(matches!(
            b.product(w1, w1),
            Err(Error::UndeclaredProduct(..))
        ));
        assert_eq!(SymbolBasis::new(["w"]), Err(Error::MissingUnit));
        assert!(SymbolBasis::new(["1", "a", "a"]).is_err());
        let mut b2 = b.clone();
        assert!(b2
            .declare_product("1", "w1", &[(Rat::one(), "w2")])
            .is_err());
        assert!(b2
            .declare_product("w1", "w2", &[(Rat::one(), "w1w2")])
            .is_ok());
    }

    #[test]
    fn period_square_exf() {
        // x1^y1 + w2 x1^y2 + w1 x2^y1 + w1w2 x2^y2
        let b = SymbolBasis::two_periods();
        let p = PeriodVector::from_terms(
            &b,
            6,
            &[
                ("1", unit(1)),
                ("w2", unit(2)),
                ("w1", unit(3)),
                ("w1w2", unit(4)),
            ],
        )
        .unwrap();
        let h = HodgeLattice::new(wedge_square_lattice(&frame()), b.clone(), p).unwrap();
        assert!(h.period_square().unwrap().iter().all(Zero::is_zero));
        let t = h.transcendental_lattice();
        assert_eq!(t.rank(), 4);
        let (ns, rho) = h.ns_and_picard();
        assert_eq!(rho, 2);
        assert!(ns.same_span(
            &Sublattice::new(
                h.lattice().clone(),
                IntMatrix::from_rows(vec![unit(0), unit(5)], 6).unwrap()
            )
            .unwrap()
        ));
    }

    #[test]
    fn undeclared_square_is_an_error() {
        let b = SymbolBasis::new(["1", "w"]).unwrap();
        let u = Lattice::hyperbolic();
        let p = PeriodVector::from_terms(&b, 2, &[("w", int_vec(&[1, 1]))]).unwrap();
        assert_eq!(
            period_pairing(&u, &b, &p, &p),
            Err(Error::UndeclaredProduct("w".into(), "w".into()))
        );
        // construction still succeeds: isotropy is only checked when computable
        assert!(HodgeLattice::new(u, b, p).is_ok());
    }

    #[test]
    fn full_support_period_gives_full_lattice() {
        let b = SymbolBasis::two_periods();
        let u = Lattice::hyperbolic().direct_sum(&Lattice::hyperbolic());
        let p = int_column_period(
            &b,
            4,
            &[
                ("1", vec![1, 0, 0, 0]),
                ("w1w2", vec![0, -1, 0, 0]),
                ("w1", vec![0, 0, 1, 0]),
                ("w2", vec![0, 0, 0, 1]),
            ],
        );
        let h = HodgeLattice::new(u.clone(), b, p).unwrap();
        assert!(h.transcendental_lattice().same_span(&Sublattice::full(u)));
        assert_eq!(h.ns_and_picard().1, 0);
    }

    #[test]
    fn proportionality_examples() {
        let b = SymbolBasis::two_periods();
        let p = int_column_period(&b, 2, &[("1", vec![1, 0]), ("w1", vec![0, 1])]);
        assert_eq!(proportionality(&p, &p), Some(Rat::one()));
        let three = p.scaled(&Rat::from_integer(3.into()));
        assert_eq!(
            proportionality(&three, &p),
            Some(Rat::from_integer(3.into()))
        );
        let swapped = int_column_period(&b, 2, &[("w1", vec![1, 0]), ("1", vec![0, 1])]);
        assert_eq!(proportionality(&p, &swapped), None);
        let other = int_column_period(&b, 2, &[("w2", vec![1, 0])]);
        assert_eq!(proportionality(&p, &other), None);
    }
}
