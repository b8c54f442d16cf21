// SPDX-License-Identifier: Apache-2.0

//! Certified isometries and bounded isometry search.
//!
//! Maps act on row vectors: row `i` of the matrix is the image of source
//! basis vector `i` in target coordinates, so an isometry satisfies
//! `M * G_target * M^T = G_source`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use num_traits::{One, Signed, Zero};

use crate::discriminant::GenusMismatch;
use crate::hodge::{proportionality, HodgeLattice, PeriodVector};
use crate::lattice::{Lattice, Sublattice};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::{Error, Int, Rat, Result};

/// Results of the checks recorded when a map was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub gram_preserved: bool,
    pub unimodular: bool,
    /// Period scalar: transported source period `= lambda *` target period.
    pub lambda: Option<Rat>,
}

/// An integer matrix certified to carry one (twisted) Gram matrix to
/// another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryMap {
    source: Sublattice,
    target: Sublattice,
    source_twist: Int,
    target_twist: Int,
    matrix: IntMatrix,
    certificate: Certificate,
}

fn twisted_gram(sub: &Sublattice, twist: &Int) -> IntMatrix {
    sub.gram().scale(twist)
}

/// Independent check that `m * gt * m^T == gs`, written with plain loops.
pub fn preserves_gram(gs: &IntMatrix, gt: &IntMatrix, m: &IntMatrix) -> bool {
    let (r, c) = (m.rows(), m.cols());
    if gs.rows() != r || gs.cols() != r || gt.rows() != c || gt.cols() != c {
        return false;
    }
    for i in 0..r {
        for j in i..r {
            let mut acc = Int::zero();
            for k in 0..c {
                if m[(i, k)].is_zero() {
                    continue;
                }
                for l in 0..c {
                    acc += &m[(i, k)] * &gt[(k, l)] * &m[(j, l)];
                }
            }
            if acc != gs[(i, j)] || gs[(i, j)] != gs[(j, i)] {
                return false;
            }
        }
    }
    true
}

/// Recomputes every recorded check of `map` from its source and target.
pub fn verify(map: &IsometryMap) -> core::result::Result<(), String> {
    let gs = twisted_gram(&map.source, &map.source_twist);
    let gt = twisted_gram(&map.target, &map.target_twist);
    if !preserves_gram(&gs, &gt, &map.matrix) {
        return Err("Gram matrix not preserved".into());
    }
    if map.certificate.unimodular {
        if !map.matrix.is_square() {
            return Err("non-square matrix claimed unimodular".into());
        }
        let d = map.matrix.det().map_err(|e| format!("{e}"))?;
        if !d.abs().is_one() {
            return Err(format!("determinant {d} is not a unit"));
        }
    }
    Ok(())
}

impl IsometryMap {
    /// Certifies an isometry `source -> target` (untwisted).
    pub fn certify(source: Sublattice, target: Sublattice, matrix: IntMatrix) -> Result<Self> {
        Self::certify_twisted(source, Int::one(), target, Int::one(), matrix)
    }

    /// Certifies an isometry `source(s) -> target(t)`: square, determinant
    /// `+-1`, and `M (t G_T) M^T = s G_S`.
    pub fn certify_twisted(
        source: Sublattice,
        source_twist: Int,
        target: Sublattice,
        target_twist: Int,
        matrix: IntMatrix,
    ) -> Result<Self> {
        Self::build(source, source_twist, target, target_twist, matrix, true)
    }

    /// Certifies an isometric embedding (Gram preserved, not necessarily
    /// onto).
    pub fn certify_embedding(
        source: Sublattice,
        target: Sublattice,
        matrix: IntMatrix,
    ) -> Result<Self> {
        Self::build(source, Int::one(), target, Int::one(), matrix, false)
    }

    fn build(
        source: Sublattice,
        source_twist: Int,
        target: Sublattice,
        target_twist: Int,
        matrix: IntMatrix,
        unimodular: bool,
    ) -> Result<Self> {
        if matrix.rows() != source.rank() || matrix.cols() != target.rank() {
            return Err(Error::Certification(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                source.rank(),
                target.rank()
            )));
        }
        let map = Self {
            source,
            target,
            source_twist,
            target_twist,
            matrix,
            certificate: Certificate {
                gram_preserved: true,
                unimodular,
                lambda: None,
            },
        };
        verify(&map).map_err(Error::Certification)?;
        Ok(map)
    }

    /// Records the period scalar; both periods are in the coordinates of
    /// the source and target bases respectively.
    pub fn with_periods(
        mut self,
        source_period: &PeriodVector,
        target_period: &PeriodVector,
    ) -> Result<Self> {
        let moved = source_period.map(&self.matrix)?;
        let lambda = proportionality(&moved, target_period)
            .ok_or_else(|| Error::Certification("periods are not proportional".into()))?;
        self.certificate.lambda = Some(lambda);
        Ok(self)
    }

    pub fn source(&self) -> &Sublattice {
        &self.source
    }

    pub fn target(&self) -> &Sublattice {
        &self.target
    }

    pub fn source_twist(&self) -> &Int {
        &self.source_twist
    }

    pub fn target_twist(&self) -> &Int {
        &self.target_twist
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn lambda(&self) -> Option<&Rat> {
        self.certificate.lambda.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_square() && self.matrix == IntMatrix::identity(self.matrix.rows())
    }

    /// Both sides twisted by `k`.
    pub fn twisted(&self, k: &Int) -> Result<Self> {
        let mut out = Self::build(
            self.source.clone(),
            &self.source_twist * k,
            self.target.clone(),
            &self.target_twist * k,
            self.matrix.clone(),
            self.certificate.unimodular,
        )?;
        out.certificate.lambda = self.certificate.lambda.clone();
        Ok(out)
    }

    /// `self` followed by `next`. The target of `self` and the source of
    /// `next` must be the same subgroup with the same twist; their bases may
    /// differ.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if !self.target.same_span(&next.source) || self.target_twist != next.source_twist {
            return Err(Error::Certification("composition endpoints differ".into()));
        }
        let change = next.source.coordinates_of_rows(self.target.basis())?;
        let matrix = self.matrix.mul(&change)?.mul(&next.matrix)?;
        let mut out = Self::build(
            self.source.clone(),
            self.source_twist.clone(),
            next.target.clone(),
            next.target_twist.clone(),
            matrix,
            self.certificate.unimodular && next.certificate.unimodular,
        )?;
        out.certificate.lambda = match (&self.certificate.lambda, &next.certificate.lambda) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.certificate.unimodular {
            return Err(Error::Certification("embedding is not invertible".into()));
        }
        let inv = self.matrix.unimodular_inverse()?;
        let mut out = Self::build(
            self.target.clone(),
            self.target_twist.clone(),
            self.source.clone(),
            self.source_twist.clone(),
            inv,
            true,
        )?;
        out.certificate.lambda = self.certificate.lambda.as_ref().map(Rat::recip);
        Ok(out)
    }

    /// The same matrix re-certified between other sublattices with the same
    /// Gram matrices.
    pub fn rebase(&self, source: Sublattice, target: Sublattice) -> Result<Self> {
        let mut out = Self::build(
            source,
            self.source_twist.clone(),
            target,
            self.target_twist.clone(),
            self.matrix.clone(),
            self.certificate.unimodular,
        )?;
        out.certificate.lambda = self.certificate.lambda.clone();
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenusVerdict {
    Differ(GenusMismatch),
    /// Invariants agree; this never asserts isometry.
    MatchOrUnknown,
}

pub fn genus_equal(l1: &Lattice, l2: &Lattice) -> GenusVerdict {
    match l1.genus_invariants().mismatch(&l2.genus_invariants()) {
        Some(m) => GenusVerdict::Differ(m),
        None => GenusVerdict::MatchOrUnknown,
    }
}

/// All nonzero `x` with `x G x^T <= max_norm` for positive definite `G`,
/// in lexicographic order. Exact rational Fincke-Pohst enumeration.
pub fn short_vectors(gram: &IntMatrix, max_norm: &Int) -> Vec<Vec<Int>> {
    let n = gram.rows();
    if max_norm.is_negative() || n == 0 {
        return Vec::new();
    }
    // q(x) = sum_i a_i (x_i + sum_{j>i} mu_ij x_j)^2
    let mut q = gram.to_rational();
    let mut a = vec![Rat::zero(); n];
    let mut mu = RatMatrix::zeros(n, n);
    for i in 0..n {
        a[i] = q[(i, i)].clone();
        assert!(a[i].is_positive(), "gram must be positive definite");
        for j in i + 1..n {
            mu[(i, j)] = &q[(i, j)] / &a[i];
        }
        for j in i + 1..n {
            for k in i + 1..n {
                let d = &mu[(i, j)] * &mu[(i, k)] * &a[i];
                q[(j, k)] -= d;
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![Int::zero(); n];
    enumerate_level(
        n,
        n - 1,
        &a,
        &mu,
        Rat::from_integer(max_norm.clone()),
        &mut x,
        &mut out,
    );
    out.retain(|v| v.iter().any(|c| !c.is_zero()));
    out.sort();
    out
}

fn enumerate_level(
    n: usize,
    i: usize,
    a: &[Rat],
    mu: &RatMatrix,
    budget: Rat,
    x: &mut Vec<Int>,
    out: &mut Vec<Vec<Int>>,
) {
    let mut center = Rat::zero();
    for j in i + 1..n {
        center -= &mu[(i, j)] * Rat::from_integer(x[j].clone());
    }
    let s = &budget / &a[i];
    // integer t >= sqrt(s)
    let t = s.floor().to_integer().sqrt() + Int::one();
    let lo = center.floor().to_integer() - &t;
    let hi = center.ceil().to_integer() + &t;
    let mut xi = lo;
    while xi <= hi {
        let d = Rat::from_integer(xi.clone()) - &center;
        let used = &a[i] * &d * &d;
        if used <= budget {
            x[i] = xi.clone();
            if i == 0 {
                out.push(x.clone());
            } else {
                enumerate_level(n, i - 1, a, mu, &budget - &used, x, out);
            }
        }
        xi += 1;
    }
    x[i] = Int::zero();
}

fn definiteness(l: &Lattice) -> Option<Int> {
    let (p, n) = l.signature();
    if n == 0 {
        Some(Int::one())
    } else if p == 0 {
        Some(-Int::one())
    } else {
        None
    }
}

/// Lexicographically ordered vectors of `target` with norm `norm`.
fn candidates(target: &Lattice, norm: &Int, bound: u32, definite: &Option<Int>) -> Vec<Vec<Int>> {
    let r = target.rank();
    match definite {
        Some(sign) => {
            let g = target.gram().scale(sign);
            let want = norm * sign;
            short_vectors(&g, &want)
                .into_iter()
                .filter(|v| target.norm(v).expect("rank matches") == *norm)
                .collect()
        }
        None => {
            let b = i64::from(bound);
            let mut out = Vec::new();
            let mut v = vec![-b; r];
            loop {
                let iv: Vec<Int> = v.iter().map(|&c| Int::from(c)).collect();
                if target.norm(&iv).expect("rank matches") == *norm {
                    out.push(iv);
                }
                // lexicographic odometer, last coordinate fastest
                let mut k = r;
                loop {
                    if k == 0 {
                        return out;
                    }
                    k -= 1;
                    if v[k] < b {
                        v[k] += 1;
                        for c in v.iter_mut().skip(k + 1) {
                            *c = -b;
                        }
                        break;
                    }
                }
            }
        }
    }
}

/// Depth-first search over isometries `l1 -> l2` in lexicographic order of
/// the matrix, calling `visit` on each complete one.
fn search<F>(l1: &Lattice, l2: &Lattice, bound: u32, mut visit: F)
where
    F: FnMut(&IntMatrix) -> ControlFlow<()>,
{
    let r = l1.rank();
    if r != l2.rank() || l1.det().abs() != l2.det().abs() || l1.signature() != l2.signature() {
        return;
    }
    let definite = definiteness(l2);
    let g1 = l1.gram();
    let g2 = l2.gram();
    let cands: Vec<Vec<(Vec<Int>, Vec<Int>)>> = (0..r)
        .map(|i| {
            candidates(l2, &g1[(i, i)], bound, &definite)
                .into_iter()
                .map(|v| {
                    let gv = g2.apply(&v).expect("rank matches");
                    (v, gv)
                })
                .collect()
        })
        .collect();
    if cands.iter().any(Vec::is_empty) {
        return;
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(r);
    let mut next = vec![0usize; r];
    let mut level = 0;
    loop {
        let mut advanced = false;
        while next[level] < cands[level].len() {
            let idx = next[level];
            next[level] += 1;
            let v = &cands[level][idx].0;
            let ok = chosen.iter().enumerate().all(|(j, &cj)| {
                let gw = &cands[j][cj].1;
                let p: Int = v.iter().zip(gw).map(|(a, b)| a * b).sum();
                p == g1[(level, j)]
            });
            if ok {
                chosen.push(idx);
                advanced = true;
                break;
            }
        }
        if advanced {
            if level + 1 == r {
                let rows: Vec<Vec<Int>> = chosen
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| cands[j][c].0.clone())
                    .collect();
                let m = IntMatrix::from_rows(rows, r).expect("uniform rows");
                if visit(&m).is_break() {
                    return;
                }
                chosen.pop();
            } else {
                level += 1;
                next[level] = 0;
            }
        } else {
            if level == 0 {
                return;
            }
            level -= 1;
            chosen.pop();
        }
    }
}

/// Lexicographically least isometry `l1 -> l2` with entries in
/// `[-bound, bound]` (unbounded for definite lattices). `None` means no
/// isometry within the bound, not non-isometry.
pub fn find_isometry(l1: &Lattice, l2: &Lattice, bound: u32) -> Option<IsometryMap> {
    let mut found = None;
    search(l1, l2, bound, |m| {
        found = Some(m.clone());
        ControlFlow::Break(())
    });
    let m = found?;
    let map = IsometryMap::certify(
        Sublattice::full(l1.clone()),
        Sublattice::full(l2.clone()),
        m,
    )
    .expect("search output satisfies the Gram equation");
    Some(map)
}

/// Every isometry within the bound, in lexicographic order.
pub fn all_isometries(l1: &Lattice, l2: &Lattice, bound: u32) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    search(l1, l2, bound, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out
}

/// A Hodge isometry `h1 -> h2`: an isometry carrying the period of `h1`
/// to a nonzero rational multiple of the period of `h2`. Witnesses with
/// positive scalar are preferred, then lexicographic order.
pub fn find_hodge_isometry(
    h1: &HodgeLattice,
    h2: &HodgeLattice,
    bound: u32,
) -> Option<IsometryMap> {
    let (l1, l2) = (h1.lattice(), h2.lattice());
    if l1.rank() != l2.rank() || h1.symbols().symbols() != h2.symbols().symbols() {
        return None;
    }
    let matrix = match period_determined_candidates(h1, h2) {
        Some(cands) => cands
            .into_iter()
            .find(|m| m.max_abs() <= Int::from(bound) && preserves_gram(l1.gram(), l2.gram(), m))?,
        None => {
            let mut negative = None;
            let mut positive = None;
            search(l1, l2, bound, |m| {
                let moved = h1.period().map(m).expect("square map");
                match proportionality(&moved, h2.period()) {
                    Some(l) if l.is_positive() => {
                        positive = Some(m.clone());
                        return ControlFlow::Break(());
                    }
                    Some(_) if negative.is_none() => negative = Some(m.clone()),
                    _ => {}
                }
                ControlFlow::Continue(())
            });
            positive.or(negative)?
        }
    };
    IsometryMap::certify(
        Sublattice::full(l1.clone()),
        Sublattice::full(l2.clone()),
        matrix,
    )
    .ok()?
    .with_periods(h1.period(), h2.period())
    .ok()
}

/// When the source period spans `L (x) Q`, every Hodge isometry is
/// `lambda * M0` for the unique rational `M0` carrying period to period.
/// Returns the (at most two) integral candidates, positive scalar first;
/// `None` if the period does not span.
fn period_determined_candidates(h1: &HodgeLattice, h2: &HodgeLattice) -> Option<Vec<IntMatrix>> {
    let r = h1.lattice().rank();
    let c = h1.period().coefficient_matrix();
    let d = h2.period().coefficient_matrix();
    let (_, pivots) = c.transpose().rref();
    if pivots.len() < r {
        return None;
    }
    let cr = c.select_rows(pivots.iter().copied());
    let dr = d.select_rows(pivots.iter().copied());
    let m0 = cr.inverse().ok()?.mul(&dr).ok()?;
    if c.mul(&m0).ok()? != d {
        return Some(Vec::new());
    }
    let moved = m0.congruence(&h2.lattice().gram().to_rational()).ok()?;
    let g1 = h1.lattice().gram().to_rational();
    let (i, j) = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .find(|&(i, j)| !moved[(i, j)].is_zero())?;
    let lambda_sq = &g1[(i, j)] / &moved[(i, j)];
    if moved.scale(&lambda_sq) != g1 || !lambda_sq.is_positive() {
        return Some(Vec::new());
    }
    let Some(lambda) = rational_sqrt(&lambda_sq) else {
        return Some(Vec::new());
    };
    let mut out = Vec::new();
    for l in [lambda.clone(), -lambda] {
        let m = m0.scale(&l);
        if m.is_integral() {
            out.push(m.map(Rat::to_integer));
        }
    }
    Some(out)
}

fn rational_sqrt(q: &Rat) -> Option<Rat> {
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::SymbolBasis;
    use crate::matrix::int_vec;

    fn brute_short(gram: &IntMatrix, max: i64, box_: i64) -> Vec<Vec<Int>> {
        let n = gram.rows();
        let mut out = Vec::new();
        let total = (2 * box_ + 1).pow(n as u32);
        for mut code in 0..total {
            let mut v = Vec::new();
            for _ in 0..n {
                v.push(Int::from(code % (2 * box_ + 1) - box_));
                code /= 2 * box_ + 1;
            }
            let gv = gram.apply(&v).unwrap();
            let q: Int = v.iter().zip(&gv).map(|(a, b)| a * b).sum();
            if q <= Int::from(max) && v.iter().any(|c| !c.is_zero()) {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn short_vectors_match_brute_force() {
        let a2 = IntMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        assert_eq!(short_vectors(&a2, &Int::from(2)).len(), 6);
        assert_eq!(short_vectors(&a2, &Int::from(6)), brute_short(&a2, 6, 4));
        let g = IntMatrix::from_i64(&[&[3, 1, 0], &[1, 2, 1], &[0, 1, 5]]);
        assert_eq!(short_vectors(&g, &Int::from(7)), brute_short(&g, 7, 4));
    }

    #[test]
    fn self_isometry_is_found() {
        let u = Lattice::hyperbolic();
        let m = find_isometry(&u, &u, 1).unwrap();
        // -I precedes I lexicographically
        assert_eq!(m.matrix(), &IntMatrix::from_i64(&[&[-1, 0], &[0, -1]]));
        verify(&m).unwrap();
        let a2 = Lattice::from_i64(&[&[2, -1], &[-1, 2]]).unwrap();
        assert_eq!(all_isometries(&a2, &a2, 1).len(), 12);
    }

    #[test]
    fn u_and_u2_are_separated() {
        let u = Lattice::hyperbolic();
        let u2 = Lattice::hyperbolic_scaled(2);
        assert!(find_isometry(&u, &u2, 3).is_none());
        assert!(matches!(genus_equal(&u, &u2), GenusVerdict::Differ(_)));
    }

    #[test]
    fn bad_certificates_are_rejected() {
        let u = Sublattice::full(Lattice::hyperbolic());
        let swap_wrong = IntMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        assert!(IsometryMap::certify(u.clone(), u.clone(), swap_wrong).is_err());
        let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let m = IsometryMap::certify(u.clone(), u.clone(), swap).unwrap();
        assert!(m.then(&m).unwrap().is_identity());
        assert_eq!(m.inverse().unwrap().matrix(), m.matrix());
    }

    #[test]
    fn hodge_identity_prefers_positive_scalar() {
        let b = SymbolBasis::two_periods();
        let uu = Lattice::hyperbolic().direct_sum(&Lattice::hyperbolic());
        let p = PeriodVector::from_terms(
            &b,
            4,
            &[
                ("1", int_vec(&[1, 0, 0, 0])),
                ("w1w2", int_vec(&[0, -1, 0, 0])),
                ("w1", int_vec(&[0, 0, 1, 0])),
                ("w2", int_vec(&[0, 0, 0, 1])),
            ],
        )
        .unwrap();
        let h = HodgeLattice::new(uu, b, p).unwrap();
        let m = find_hodge_isometry(&h, &h, 3).unwrap();
        assert!(m.is_identity());
        assert_eq!(m.lambda(), Some(&Rat::one()));
    }

    #[test]
    fn hodge_disjoint_supports_absent() {
        let b = SymbolBasis::two_periods();
        let u = Lattice::hyperbolic();
        let p = PeriodVector::from_terms(&b, 2, &[("1", int_vec(&[1, 0]))]).unwrap();
        let q = PeriodVector::from_terms(&b, 2, &[("w2", int_vec(&[1, 0]))]).unwrap();
        let h1 = HodgeLattice::new(u.clone(), b.clone(), p).unwrap();
        let h2 = HodgeLattice::new(u, b, q).unwrap();
        assert!(find_hodge_isometry(&h1, &h2, 3).is_none());
    }

    #[test]
    fn hodge_search_fallback_non_spanning() {
        // period spans only <e>; Hodge isometries must fix the line of e
        let b = SymbolBasis::two_periods();
        let u = Lattice::hyperbolic();
        let p = PeriodVector::from_terms(&b, 2, &[("1", int_vec(&[1, 0]))]).unwrap();
        let h = HodgeLattice::new(u, b, p).unwrap();
        let m = find_hodge_isometry(&h, &h, 2).unwrap();
        assert!(m.is_identity());
        verify(&m).unwrap();
    }
}
