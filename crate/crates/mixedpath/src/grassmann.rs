//! Exact anticommuting-number algebra for the fermionic mixed-path rules.
//!
//! Elements are real linear combinations of monomials in generators
//! `eta_1 .. eta_n` with `eta_i eta_j = -eta_j eta_i` and `eta_i^2 = 0`.
//! A monomial is stored as a bitmask over generators (bit `i-1` set means
//! `eta_i` present, factors in ascending index order); products pick up the
//! parity of the merge that re-sorts the concatenation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_GENERATORS: usize = 16;

/// Whether every stored monomial has odd generator count, even count, or a
/// mix. The zero element counts as even (it is a sum of zero even terms).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// An element of the Grassmann algebra on `num_generators` generators.
///
/// Canonical form: keys are ascending-index monomial masks, no explicit zero
/// coefficients are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannElement {
    num_generators: usize,
    terms: BTreeMap<u16, f64>,
}

impl GrassmannElement {
    /// The zero element.
    pub fn zero(num_generators: usize) -> Result<Self> {
        if num_generators > MAX_GENERATORS {
            return Err(Error::InvalidSpec(format!(
                "at most {MAX_GENERATORS} generators supported, got {num_generators}"
            )));
        }
        Ok(Self {
            num_generators,
            terms: BTreeMap::new(),
        })
    }

    /// The scalar `c` (coefficient of the empty monomial).
    pub fn scalar(c: f64, num_generators: usize) -> Result<Self> {
        let mut e = Self::zero(num_generators)?;
        if c != 0.0 {
            e.terms.insert(0, c);
        }
        Ok(e)
    }

    /// The single generator `eta_i`, indexed from 1.
    pub fn generator(i: usize, num_generators: usize) -> Result<Self> {
        let mut e = Self::zero(num_generators)?;
        if i == 0 || i > num_generators {
            return Err(Error::IndexOutOfRange {
                index: i,
                num_generators,
            });
        }
        e.terms.insert(1 << (i - 1), 1.0);
        Ok(e)
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with the given ascending generator
    /// indices (1-based).
    pub fn coefficient(&self, indices: &[usize]) -> f64 {
        let mut mask = 0u16;
        for &i in indices {
            if i == 0 || i > self.num_generators {
                return 0.0;
            }
            mask |= 1 << (i - 1);
        }
        self.terms.get(&mask).copied().unwrap_or(0.0)
    }

    /// Iterate terms as (ascending index list, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.terms.iter().map(|(&mask, &c)| (unpack(mask), c))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.num_generators != other.num_generators {
            return Err(Error::GeneratorMismatch {
                left: self.num_generators,
                right: other.num_generators,
            });
        }
        Ok(())
    }

    /// Coefficient-wise sum, canonical form restored.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        for (&mask, &c) in &other.terms {
            let entry = terms.entry(mask).or_insert(0.0);
            *entry += c;
            if *entry == 0.0 {
                terms.remove(&mask);
            }
        }
        Ok(Self {
            num_generators: self.num_generators,
            terms,
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self {
                num_generators: self.num_generators,
                terms: BTreeMap::new(),
            };
        }
        Self {
            num_generators: self.num_generators,
            terms: self.terms.iter().map(|(&m, &v)| (m, c * v)).collect(),
        }
    }

    /// Distributive product. Monomials with a repeated generator vanish;
    /// otherwise the coefficient picks up the sign of the permutation that
    /// sorts the concatenated index sequence.
    ///
    /// Contributions from a monomial pair and its swap are fused, and each
    /// output monomial reduces its contributions in a canonical order keyed
    /// by the unordered source pair. Cancellations forced by the sign
    /// algebra (odd squares, anticommutators of odd elements) therefore come
    /// out exactly zero rather than as float residue, and `a*b` is the exact
    /// negation of `b*a` whenever the signs demand it.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        // mask -> (unordered source pair -> fused contribution)
        let mut groups: BTreeMap<u16, BTreeMap<(u16, u16), f64>> = BTreeMap::new();
        for (&ma, &ca) in &self.terms {
            for (&mb, &cb) in &other.terms {
                if ma & mb != 0 {
                    continue; // some eta_i^2 = 0
                }
                let swapped_exists =
                    ma != mb && self.terms.contains_key(&mb) && other.terms.contains_key(&ma);
                let contribution = if swapped_exists {
                    if ma > mb {
                        continue; // fused when (mb, ma) was visited
                    }
                    merge_sign(ma, mb) * ca * cb
                        + merge_sign(mb, ma) * self.terms[&mb] * other.terms[&ma]
                } else {
                    merge_sign(ma, mb) * ca * cb
                };
                let key = (ma.min(mb), ma.max(mb));
                groups.entry(ma | mb).or_default().insert(key, contribution);
            }
        }
        let mut terms = BTreeMap::new();
        for (mask, contributions) in groups {
            let total: f64 = contributions.values().sum();
            if total != 0.0 {
                terms.insert(mask, total);
            }
        }
        Ok(Self {
            num_generators: self.num_generators,
            terms,
        })
    }

    pub fn parity(&self) -> Parity {
        let mut seen_even = false;
        let mut seen_odd = false;
        for &mask in self.terms.keys() {
            if mask.count_ones() & 1 == 0 {
                seen_even = true;
            } else {
                seen_odd = true;
            }
        }
        match (seen_even, seen_odd) {
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
            _ => Parity::Even,
        }
    }

    /// Anticommutator `self * other + other * self`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.add(&other.mul(self)?)
    }
}

/// Sign of moving every generator of `b` past the higher-indexed generators
/// of `a`: each such crossing is one transposition.
fn merge_sign(a: u16, b: u16) -> f64 {
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let lowest = bb & bb.wrapping_neg();
        let i = lowest.trailing_zeros();
        // generators of `a` strictly above index i must hop over eta_{i+1}
        let above = a >> (i + 1);
        inversions += above.count_ones();
        bb ^= lowest;
    }
    if inversions & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn unpack(mask: u16) -> Vec<usize> {
    (0..MAX_GENERATORS)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| i + 1)
        .collect()
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(&mask, &c)| {
                if mask == 0 {
                    format!("{c}")
                } else {
                    let gens: String = unpack(mask).iter().map(|i| format!("\u{3b7}{i}")).collect();
                    format!("{c}\u{b7}{gens}")
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// JSON view: a list of `{indices, coefficient}` terms.
#[derive(Debug, Serialize, Deserialize)]
pub struct GrassmannJson {
    pub num_generators: usize,
    pub terms: Vec<GrassmannTermJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GrassmannTermJson {
    pub indices: Vec<usize>,
    pub coefficient: f64,
}

impl From<&GrassmannElement> for GrassmannJson {
    fn from(e: &GrassmannElement) -> Self {
        GrassmannJson {
            num_generators: e.num_generators,
            terms: e
                .terms()
                .map(|(indices, coefficient)| GrassmannTermJson {
                    indices,
                    coefficient,
                })
                .collect(),
        }
    }
}

/// All monomials of odd degree on `n` generators, as elements.
pub fn odd_monomials(n: usize) -> Result<Vec<GrassmannElement>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() & 1 == 1 {
            let mut e = GrassmannElement::zero(n)?;
            e.terms.insert(mask as u16, 1.0);
            out.push(e);
        }
    }
    Ok(out)
}
