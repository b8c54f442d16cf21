// SPDX-License-Identifier: Apache-2.0

//! Discriminant forms `L^v / L` and cheap genus invariants.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::lattice::Lattice;
use crate::matrix::{dot_rat, to_rat_vec};
use crate::normal_form::smith;
use crate::{Int, Rat};

/// Largest group order for which the full value histogram is computed.
pub const HISTOGRAM_LIMIT: u64 = 200_000;

/// The finite quadratic form on `L^v / L`, described on Smith generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantForm {
    /// `d_1 | d_2 | ...`, each greater than one.
    pub elementary_divisors: Vec<Int>,
    /// `q(x_i)` reduced into `[0, modulus)`.
    pub q_values: Vec<Rat>,
    /// `b(x_i, x_j)` reduced into `[0, 1)`; symmetric.
    pub pairings: Vec<Vec<Rat>>,
    /// 2 for even lattices (`q` in `Q/2Z`), 1 for odd ones (`q` in `Q/Z`).
    pub modulus: Int,
}

pub(crate) fn reduce_mod(x: &Rat, m: &Int) -> Rat {
    let m = Rat::from_integer(m.clone());
    let k = (x / &m).floor();
    x - k * m
}

impl DiscriminantForm {
    pub fn of(lattice: &Lattice) -> Self {
        let g = lattice.gram();
        let s = smith(g);
        let ginv = g.to_rational().inverse().expect("lattice is nondegenerate");
        let modulus = if lattice.is_even() {
            Int::from(2)
        } else {
            Int::one()
        };

        let mut gens = Vec::new();
        let mut elementary_divisors = Vec::new();
        for (i, d) in s.diagonal.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            elementary_divisors.push(d.clone());
            gens.push(to_rat_vec(s.right_inv.row(i)));
        }
        let duals: Vec<Vec<Rat>> = gens
            .iter()
            .map(|w| ginv.apply(w).expect("row length matches"))
            .collect();
        let k = gens.len();
        let mut pairings = alloc::vec![alloc::vec![Rat::zero(); k]; k];
        let mut q_values = Vec::with_capacity(k);
        for i in 0..k {
            let qi = dot_rat(&gens[i], &duals[i]);
            q_values.push(reduce_mod(&qi, &modulus));
            for j in 0..k {
                pairings[i][j] = reduce_mod(&dot_rat(&gens[i], &duals[j]), &Int::one());
            }
        }
        Self {
            elementary_divisors,
            q_values,
            pairings,
            modulus,
        }
    }

    pub fn order(&self) -> Int {
        self.elementary_divisors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.elementary_divisors.is_empty()
    }

    /// Multiset of `q(x)` over all group elements, or `None` above
    /// [`HISTOGRAM_LIMIT`].
    pub fn value_histogram(&self) -> Option<BTreeMap<Rat, u64>> {
        let order = self.order().to_u64().filter(|&o| o <= HISTOGRAM_LIMIT)?;
        let divs: Vec<u64> = self
            .elementary_divisors
            .iter()
            .map(|d| d.to_u64().expect("bounded by order"))
            .collect();
        let k = divs.len();
        let mut hist = BTreeMap::new();
        let mut c = alloc::vec![0u64; k];
        for _ in 0..order {
            let mut v = Rat::zero();
            for i in 0..k {
                if c[i] == 0 {
                    continue;
                }
                let ci = Rat::from_integer(Int::from(c[i]));
                v += &ci * &ci * &self.q_values[i];
                for j in i + 1..k {
                    if c[j] != 0 {
                        let cj = Rat::from_integer(Int::from(c[j]));
                        v += Rat::from_integer(Int::from(2)) * &ci * cj * &self.pairings[i][j];
                    }
                }
            }
            *hist.entry(reduce_mod(&v, &self.modulus)).or_insert(0) += 1;
            // odometer
            for i in 0..k {
                c[i] += 1;
                if c[i] < divs[i] {
                    break;
                }
                c[i] = 0;
            }
        }
        Some(hist)
    }

    /// Equality of the isometry-invariant parts: group structure, parity
    /// and (when small enough) the value histogram. `None` means the
    /// histogram was too large to compare and everything else agreed.
    pub fn invariants_agree(&self, other: &Self) -> Option<bool> {
        if self.elementary_divisors != other.elementary_divisors || self.modulus != other.modulus {
            return Some(false);
        }
        match (self.value_histogram(), other.value_histogram()) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        }
    }

    /// Exponent of the group (largest elementary divisor).
    pub fn exponent(&self) -> Int {
        self.elementary_divisors
            .iter()
            .fold(Int::one(), |acc, d| acc.lcm(d))
    }
}

impl fmt::Display for DiscriminantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("trivial");
        }
        let parts: Vec<_> = self
            .elementary_divisors
            .iter()
            .map(|d| alloc::format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))?;
        f.write_str("; q =")?;
        for q in &self.q_values {
            write!(f, " {q}")?;
        }
        write!(f, " (mod {})", self.modulus)
    }
}

/// Why two lattices cannot be isometric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenusMismatch {
    Rank(usize, usize),
    Signature((usize, usize), (usize, usize)),
    Parity,
    DiscriminantGroup(Vec<Int>, Vec<Int>),
    DiscriminantValues,
}

impl fmt::Display for GenusMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let group = |d: &[Int]| -> alloc::string::String {
            if d.is_empty() {
                "trivial".into()
            } else {
                d.iter()
                    .map(|x| alloc::format!("Z/{x}"))
                    .collect::<Vec<_>>()
                    .join(" + ")
            }
        };
        match self {
            Self::Rank(a, b) => write!(f, "rank {a} vs {b}"),
            Self::Signature(a, b) => write!(f, "signature {a:?} vs {b:?}"),
            Self::Parity => f.write_str("one lattice is even, the other odd"),
            Self::DiscriminantGroup(a, b) => {
                write!(f, "discriminant group {} vs {}", group(a), group(b))
            }
            Self::DiscriminantValues => f.write_str("discriminant form value counts differ"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusInvariants {
    pub rank: usize,
    pub signature: (usize, usize),
    pub disc: DiscriminantForm,
}

impl GenusInvariants {
    pub fn of(lattice: &Lattice) -> Self {
        Self {
            rank: lattice.rank(),
            signature: lattice.signature(),
            disc: DiscriminantForm::of(lattice),
        }
    }

    /// First invariant that separates the two lattices, if any.
    pub fn mismatch(&self, other: &Self) -> Option<GenusMismatch> {
        if self.rank != other.rank {
            return Some(GenusMismatch::Rank(self.rank, other.rank));
        }
        if self.signature != other.signature {
            return Some(GenusMismatch::Signature(self.signature, other.signature));
        }
        if self.disc.elementary_divisors != other.disc.elementary_divisors {
            return Some(GenusMismatch::DiscriminantGroup(
                self.disc.elementary_divisors.clone(),
                other.disc.elementary_divisors.clone(),
            ));
        }
        if self.disc.modulus != other.disc.modulus {
            return Some(GenusMismatch::Parity);
        }
        match self.disc.invariants_agree(&other.disc) {
            Some(false) => Some(GenusMismatch::DiscriminantValues),
            _ => None,
        }
    }
}
