//! Witness checking that relies only on group multiplication and counting.
//! Nothing here touches the search kernels.

use std::collections::BTreeMap;
use std::fmt;

use crate::group::Element;
use crate::sequence::Sequence;
use crate::text::WitnessLine;

use super::ProductWitness;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessRejection {
    InvalidElement(Element),
    NotASubsequence {
        element: Element,
        needed: u32,
        available: u32,
    },
    WrongLength {
        claimed: usize,
        actual: usize,
    },
    WrongProduct {
        target: Element,
        actual: Element,
    },
}

impl WitnessRejection {
    /// Stable reason code for records.
    pub fn code(&self) -> &'static str {
        match self {
            WitnessRejection::InvalidElement(_) => "invalid-element",
            WitnessRejection::NotASubsequence { .. } => "not-a-subsequence",
            WitnessRejection::WrongLength { .. } => "wrong-length",
            WitnessRejection::WrongProduct { .. } => "wrong-product",
        }
    }
}

impl fmt::Display for WitnessRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessRejection::InvalidElement(u) => write!(f, "{}: {u}", self.code()),
            WitnessRejection::NotASubsequence {
                element,
                needed,
                available,
            } => write!(
                f,
                "{}: {element} used {needed} times, sequence has {available}",
                self.code()
            ),
            WitnessRejection::WrongLength { claimed, actual } => {
                write!(f, "{}: k={claimed} but {actual} elements", self.code())
            }
            WitnessRejection::WrongProduct { target, actual } => {
                write!(f, "{}: multiplies to {actual}, expected {target}", self.code())
            }
        }
    }
}

/// Accepts iff the witness multiset divides `s`, the left-to-right product
/// equals `target`, and the witness claims that same product.
pub fn verify_witness(s: &Sequence, w: &ProductWitness, target: Element) -> Result<(), WitnessRejection> {
    let g = s.group();
    let mut used: BTreeMap<Element, u32> = BTreeMap::new();
    for &u in &w.elements {
        if !g.contains(u) {
            return Err(WitnessRejection::InvalidElement(u));
        }
        *used.entry(u).or_insert(0) += 1;
    }
    for (&u, &needed) in &used {
        let available = s.multiplicity(u);
        if needed > available {
            return Err(WitnessRejection::NotASubsequence {
                element: u,
                needed,
                available,
            });
        }
    }
    if !g.contains(target) {
        return Err(WitnessRejection::InvalidElement(target));
    }
    let mut actual = g.identity();
    for &u in &w.elements {
        actual = g.mul(actual, u);
    }
    if actual != target || w.product != target {
        return Err(WitnessRejection::WrongProduct { target, actual });
    }
    Ok(())
}

/// Checks a parsed `witness` line, including its declared length.
pub fn verify_witness_line(s: &Sequence, line: &WitnessLine) -> Result<(), WitnessRejection> {
    if line.k != line.elements.len() {
        return Err(WitnessRejection::WrongLength {
            claimed: line.k,
            actual: line.elements.len(),
        });
    }
    let w = ProductWitness {
        elements: line.elements.clone(),
        product: line.target,
    };
    verify_witness(s, &w, line.target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn hand_multiplied_d6_word() {
        let g = GroupSpec::metacyclic(3, 2).unwrap();
        let (x, y) = (Element::reflection(0), Element::rotation(1));
        let s = Sequence::from_elements(&g, [x, x, y]).unwrap();
        let w = ProductWitness {
            elements: vec![x, y, x],
            product: Element::rotation(2),
        };
        assert_eq!(verify_witness(&s, &w, Element::rotation(2)), Ok(()));
        assert_eq!(
            verify_witness(&s, &w, Element::rotation(1)),
            Err(WitnessRejection::WrongProduct {
                target: Element::rotation(1),
                actual: Element::rotation(2)
            })
        );
    }

    #[test]
    fn rejects_foreign_terms() {
        let g = GroupSpec::metacyclic(3, 2).unwrap();
        let s = Sequence::from_elements(&g, [Element::reflection(0)]).unwrap();
        let w = ProductWitness {
            elements: vec![Element::rotation(1)],
            product: Element::rotation(1),
        };
        let err = verify_witness(&s, &w, Element::rotation(1)).unwrap_err();
        assert_eq!(err.code(), "not-a-subsequence");
        let bogus = ProductWitness {
            elements: vec![Element::rotation(7)],
            product: Element::rotation(7),
        };
        assert_eq!(
            verify_witness(&s, &bogus, Element::rotation(7)),
            Err(WitnessRejection::InvalidElement(Element::rotation(7)))
        );
    }

    #[test]
    fn line_length_is_checked() {
        let g = GroupSpec::metacyclic(3, 2).unwrap();
        let s = Sequence::from_elements(&g, [Element::IDENTITY; 3]).unwrap();
        let line = WitnessLine {
            k: 3,
            target: Element::IDENTITY,
            elements: vec![Element::IDENTITY; 2],
        };
        assert_eq!(
            verify_witness_line(&s, &line),
            Err(WitnessRejection::WrongLength { claimed: 3, actual: 2 })
        );
    }
}
