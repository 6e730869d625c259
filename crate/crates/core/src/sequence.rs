//! Sequences over a group as elements of the free abelian monoid `F(G)`:
//! finite multisets, stored sparsely as element → multiplicity.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, Homomorphism, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequence {
    group: GroupSpec,
    counts: BTreeMap<Element, u32>,
}

/// Subsets of `G` a sequence can be restricted to.
#[derive(Clone, Debug)]
pub enum Part {
    /// `⟨y⟩`
    Rotations,
    /// `x⟨y⟩`
    Reflections,
    Subgroup(Subgroup),
    /// The left coset `rep·H`.
    Coset { rep: Element, subgroup: Subgroup },
}

impl Sequence {
    pub fn empty(group: &GroupSpec) -> Self {
        Sequence {
            group: *group,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_elements(group: &GroupSpec, terms: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut s = Self::empty(group);
        for u in terms {
            s.push(u, 1)?;
        }
        Ok(s)
    }

    pub fn from_counts(
        group: &GroupSpec,
        counts: impl IntoIterator<Item = (Element, u32)>,
    ) -> Result<Self> {
        let mut s = Self::empty(group);
        for (u, c) in counts {
            s.push(u, c)?;
        }
        Ok(s)
    }

    /// Adds `count` copies of `u`.
    pub fn push(&mut self, u: Element, count: u32) -> Result<()> {
        self.group.check(u)?;
        if count > 0 {
            *self.counts.entry(u).or_insert(0) += count;
        }
        Ok(())
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.counts.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `v_g(S)`.
    pub fn multiplicity(&self, u: Element) -> u32 {
        self.counts.get(&u).copied().unwrap_or(0)
    }

    /// `(element, multiplicity)` pairs in canonical order.
    pub fn support(&self) -> impl Iterator<Item = (Element, u32)> + '_ {
        self.counts.iter().map(|(&u, &c)| (u, c))
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    /// Every term, repeated by multiplicity, in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = Element> + '_ {
        self.counts
            .iter()
            .flat_map(|(&u, &c)| std::iter::repeat_n(u, c as usize))
    }

    fn same_group(&self, other: &Sequence) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                left: self.group.to_string(),
                right: other.group.to_string(),
            })
        }
    }

    /// `S·T`.
    pub fn concat(&self, other: &Sequence) -> Result<Sequence> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (u, c) in other.support() {
            *out.counts.entry(u).or_insert(0) += c;
        }
        Ok(out)
    }

    pub fn divides(&self, other: &Sequence) -> bool {
        self.group == other.group && self.support().all(|(u, c)| other.multiplicity(u) >= c)
    }

    /// `S·T^{[-1]}`.
    pub fn remove(&self, other: &Sequence) -> Result<Sequence> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (u, c) in other.support() {
            let available = self.multiplicity(u);
            if available < c {
                return Err(Error::NotASubsequence {
                    element: u,
                    needed: c,
                    available,
                });
            }
            if available == c {
                out.counts.remove(&u);
            } else {
                out.counts.insert(u, available - c);
            }
        }
        Ok(out)
    }

    /// Removes a single term.
    pub fn without(&self, u: Element) -> Result<Sequence> {
        self.remove(&Sequence::from_elements(&self.group, [u])?)
    }

    /// `S_A`: the terms lying in `part`.
    pub fn restrict(&self, part: &Part) -> Result<Sequence> {
        let g = &self.group;
        let keep: Box<dyn Fn(Element) -> bool> = match part {
            Part::Rotations => Box::new(|u: Element| u.eps == 0),
            Part::Reflections => Box::new(|u: Element| u.eps == 1),
            Part::Subgroup(h) => {
                if h.group() != g {
                    return Err(Error::Precondition(format!(
                        "subgroup of {} cannot restrict a sequence over {g}",
                        h.group()
                    )));
                }
                Box::new(move |u| h.contains(u))
            }
            Part::Coset { rep, subgroup } => {
                if subgroup.group() != g || !g.contains(*rep) {
                    return Err(Error::Precondition(format!(
                        "coset {rep}{} is not resolvable in {g}",
                        subgroup.describe()
                    )));
                }
                let rep_inv = g.inv(*rep);
                Box::new(move |u| subgroup.contains(g.mul(rep_inv, u)))
            }
        };
        Ok(Sequence {
            group: *g,
            counts: self
                .counts
                .iter()
                .filter(|(&u, _)| keep(u))
                .map(|(&u, &c)| (u, c))
                .collect(),
        })
    }

    /// Sorted `(eps, a, multiplicity)` triples as big-endian bytes; equal
    /// multisets over the same group have equal keys.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(9 * self.counts.len());
        for (u, c) in self.support() {
            key.push(u.eps);
            key.extend_from_slice(&u.a.to_be_bytes());
            key.extend_from_slice(&c.to_be_bytes());
        }
        key
    }

    /// `φ(S)` for a homomorphism out of this sequence's group.
    pub fn map(&self, f: &Homomorphism) -> Result<Sequence> {
        if f.source() != &self.group {
            return Err(Error::GroupMismatch {
                left: self.group.to_string(),
                right: f.source().to_string(),
            });
        }
        let mut out = Sequence::empty(f.target());
        for (u, c) in self.support() {
            *out.counts.entry(f.apply(u)).or_insert(0) += c;
        }
        Ok(out)
    }

    /// The `group`/`seq` text form, one sequence per file.
    pub fn to_file_string(&self) -> String {
        format!("group {}\n{}\n", self.group, self)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seq")?;
        for (i, (u, c)) in self.support().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{u} * {c}")?;
        }
        Ok(())
    }
}
