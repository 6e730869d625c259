//! Constructive tools for the groups `C_{3n₂} ⋊_s C_2` with `gcd(6, n₂) = 1`,
//! `n₂ > 1`, `s ≡ −1 (mod 3)` and `s ≡ 1 (mod n₂)`. Each of them is
//! `≅ C_{n₂} × D₆`, and every sequence of length `9n₂` in them has a
//! product-one subsequence of length `6n₂`.
//!
//! The pieces: block extraction through the projection onto `⟨y³⟩`, block
//! decompositions with chosen products, the swap search over re-decompositions,
//! a laddered finder for `6n₂`-product-one witnesses, and the structure check
//! for length-`n₂` sequences with a single product.

mod decomposition;
mod egz;
mod pipeline;
mod structure;
mod swap;

pub use decomposition::{extract_product_h_blocks, improve_x_coverage, Decomposition};
pub use egz::{egz_extract, lifted_block};
pub use pipeline::{find_big_product_one, search_big_product_one, BigWitness, PipelineOptions, Rung, SearchOutcome};
pub use structure::{singleton_pi_structure, Clause, StructureReport};
pub use swap::{replay_swap_argument, six_selection, SwapOutcome};

use crate::error::{Error, Result};
use crate::group::{gcd, Element, Factor, GroupKind, GroupSpec, Homomorphism, Subgroup};
use crate::sequence::Sequence;

/// A validated member of the family, with the projection `φ: G → ⟨y³⟩` and
/// its kernel `H = ⟨x, y^{n₂}⟩ ≅ D₆`.
#[derive(Clone, Debug)]
pub struct FamilyGroup {
    group: GroupSpec,
    n2: u32,
    phi: Homomorphism,
    h: Subgroup,
}

impl FamilyGroup {
    pub fn new(g: &GroupSpec) -> Result<Self> {
        let out = || Error::OutOfFamily(g.to_string());
        if g.kind() != GroupKind::Metacyclic || !g.n().is_multiple_of(3) {
            return Err(out());
        }
        let n2 = g.n() / 3;
        if n2 <= 1 || gcd(6, n2 as u64) != 1 || g.s() % 3 != 2 || g.s() % n2 != 1 {
            return Err(out());
        }
        let f = g.factorize()?;
        debug_assert_eq!((f.n1, f.n2), (3, n2));
        let phi = Homomorphism::projection(g, Factor::Cyclic)?;
        let h = phi.kernel();
        debug_assert_eq!(h.order(), 6);
        Ok(FamilyGroup {
            group: *g,
            n2,
            phi,
            h,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    /// `φ: G → ⟨y³⟩`, images inside `G`.
    pub fn phi(&self) -> &Homomorphism {
        &self.phi
    }

    /// `ker φ = ⟨x, y^{n₂}⟩`.
    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    /// `6n₂`, the witness length.
    pub fn k(&self) -> usize {
        6 * self.n2 as usize
    }

    /// Block length `n₂`.
    pub fn block(&self) -> usize {
        self.n2 as usize
    }

    /// `(y^{t₁})^[6n₂−1] · (y^{t₂})^[3n₂−1] · (x y^{t₃})`.
    pub fn extremal(&self, t1: u32, t2: u32, t3: u32) -> Sequence {
        let n = self.group.n();
        let mut s = Sequence::empty(&self.group);
        s.push(Element::rotation(t1 % n), 6 * self.n2 - 1).expect("in G");
        s.push(Element::rotation(t2 % n), 3 * self.n2 - 1).expect("in G");
        s.push(Element::reflection(t3 % n), 1).expect("in G");
        s
    }

    /// `φ(u)` is trivial.
    pub fn in_h(&self, u: Element) -> bool {
        self.h.contains(u)
    }

    /// Sum of `φ` over a block, as an element of `⟨y³⟩`.
    pub fn phi_sum(&self, terms: impl IntoIterator<Item = Element>) -> Element {
        terms
            .into_iter()
            .fold(self.group.identity(), |acc, u| self.group.mul(acc, self.phi.apply(u)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_membership() {
        assert!(FamilyGroup::new(&GroupSpec::metacyclic(15, 11).unwrap()).is_ok());
        assert!(FamilyGroup::new(&GroupSpec::metacyclic(21, 8).unwrap()).is_ok());
        for (n, s) in [(21, 13), (15, 14), (15, 1), (9, 8), (3, 2)] {
            let g = GroupSpec::metacyclic(n, s).unwrap();
            assert!(matches!(FamilyGroup::new(&g), Err(Error::OutOfFamily(_))), "{g}");
        }
        assert!(FamilyGroup::new(&GroupSpec::cyclic(15).unwrap()).is_err());
    }

    #[test]
    fn kernel_is_d6() {
        let f = FamilyGroup::new(&GroupSpec::metacyclic(15, 11).unwrap()).unwrap();
        assert_eq!(f.h().describe(), "<x, y^5>");
        assert_eq!(f.phi().apply(Element::rotation(1)), Element::rotation(6));
        assert_eq!(f.phi().apply(Element::reflection(5)), Element::IDENTITY);
    }

    #[test]
    fn conjugation_identity_holds() {
        // h·y^{t n₂}·h⁻¹ = y^{t n₂ s} and y^{t n₂ s + t n₂} = 1 for all h ∈ x⟨y⟩
        for (n, s) in [(15u32, 11i64), (21, 8)] {
            let g = GroupSpec::metacyclic(n, s).unwrap();
            let n2 = n / 3;
            for c in 0..n {
                let h = Element::reflection(c);
                for t in 0..3 {
                    let r = Element::rotation(t * n2 % n);
                    let conj = g.mul(g.mul(h, r), g.inv(h));
                    assert_eq!(conj, Element::rotation((t * n2 * g.s()) % n));
                    assert!(g.mul(conj, r).is_identity());
                }
            }
        }
    }
}
