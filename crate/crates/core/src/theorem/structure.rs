use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Element, Factorization, GroupKind};
use crate::product::{self, SearchConfig};
use crate::sequence::{Part, Sequence};

/// Which structural conclusion applies to a length-`n₂` sequence with a
/// single product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// Product in `⟨y^{n₂}⟩` and a reflection present: the product is one.
    ProductOneForced,
    /// Product in `x⟨y^{n₂}⟩`: an odd number of reflections, their exponents
    /// congruent mod `n₁`, rotation exponents `≡ 0 (mod n₁)`, and the product
    /// `x y^b` with `b ≡ β (mod n₁)`, `b ≡ 0 (mod n₂)`.
    ReflectionPattern,
    NotApplicable,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::ProductOneForced => "product-one-forced",
            Clause::ReflectionPattern => "reflection-pattern",
            Clause::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub clause: Clause,
    pub holds: bool,
    pub product: Element,
    pub detail: String,
}

impl StructureReport {
    pub fn record(&self) -> String {
        format!(
            "structure clause={} holds={} product={} {}",
            self.clause, self.holds, self.product, self.detail
        )
    }
}

/// Checks the structure forced on `S` with `|S| = n₂` and `|π(S)| = 1`.
pub fn singleton_pi_structure(s: &Sequence, f: Factorization, cfg: &SearchConfig) -> Result<StructureReport> {
    let g = s.group();
    if g.kind() != GroupKind::Metacyclic || f.n1 * f.n2 != g.n() {
        return Err(Error::Precondition(format!("factorization n1={} n2={} does not fit {g}", f.n1, f.n2)));
    }
    if s.len() != f.n2 as usize {
        return Err(Error::Precondition(format!("need |S| = n2 = {}, got {}", f.n2, s.len())));
    }
    let pi = product::pi_set(s, cfg)?;
    if pi.len() != 1 {
        return Err(Error::Precondition(format!("|π(S)| = {}, expected 1", pi.len())));
    }
    let p = *pi.first().expect("one member");
    let (n1, n2) = (f.n1, f.n2);
    let refl: Vec<u32> = s.restrict(&Part::Reflections)?.terms().map(|u| u.a).collect();
    let rot: Vec<u32> = s.restrict(&Part::Rotations)?.terms().map(|u| u.a).collect();
    let in_g2 = p.a % n2 == 0;

    let report = |clause, holds, detail: String| StructureReport {
        clause,
        holds,
        product: p,
        detail,
    };
    if in_g2 && !p.is_reflection() && !refl.is_empty() {
        return Ok(report(
            Clause::ProductOneForced,
            p.is_identity(),
            format!("reflections={}", refl.len()),
        ));
    }
    if in_g2 && p.is_reflection() {
        let beta = refl.first().map(|b| b % n1);
        let odd = refl.len() % 2 == 1;
        let congruent = refl.iter().all(|b| Some(b % n1) == beta);
        let rotations_ok = rot.iter().all(|a| a % n1 == 0);
        let product_ok = beta == Some(p.a % n1);
        return Ok(report(
            Clause::ReflectionPattern,
            odd && congruent && rotations_ok && product_ok,
            format!(
                "reflections={} odd={odd} congruent={congruent} rotations_divisible={rotations_ok} product_matches={product_ok}",
                refl.len()
            ),
        ));
    }
    Ok(report(Clause::NotApplicable, true, String::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn setup() -> (GroupSpec, Factorization) {
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        let f = g.factorize().unwrap();
        (g, f)
    }

    #[test]
    fn product_one_forced() {
        let (g, f) = setup();
        // x·x·1·1·1: product 1, single product
        let s = Sequence::from_counts(&g, [(Element::reflection(0), 2), (Element::IDENTITY, 3)]).unwrap();
        let r = singleton_pi_structure(&s, f, &SearchConfig::default()).unwrap();
        assert_eq!(r.clause, Clause::ProductOneForced);
        assert!(r.holds);
    }

    #[test]
    fn reflection_pattern() {
        let (g, f) = setup();
        // x y^5 · y^3 · y^6 · y^3 · y^3 has product x y^{5+15} = x y^5, a ≡ 2 mod 3
        let s = Sequence::from_counts(
            &g,
            [
                (Element::reflection(5), 1),
                (Element::rotation(3), 3),
                (Element::rotation(6), 1),
            ],
        )
        .unwrap();
        let r = singleton_pi_structure(&s, f, &SearchConfig::default()).unwrap();
        assert_eq!(r.clause, Clause::ReflectionPattern);
        assert!(r.holds, "{}", r.record());
    }

    #[test]
    fn preconditions() {
        let (g, f) = setup();
        let cfg = SearchConfig::default();
        let short = Sequence::from_counts(&g, [(Element::IDENTITY, 4)]).unwrap();
        assert!(singleton_pi_structure(&short, f, &cfg).is_err());
        // two reflections with different residues give two products
        let wide = Sequence::from_counts(
            &g,
            [(Element::reflection(0), 1), (Element::reflection(1), 1), (Element::IDENTITY, 3)],
        )
        .unwrap();
        assert!(matches!(singleton_pi_structure(&wide, f, &cfg), Err(Error::Precondition(_))));
    }
}
