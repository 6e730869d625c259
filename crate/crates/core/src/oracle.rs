//! Brute-force reference implementations for cross-checking the product
//! engine. They share no code with the search kernels and are only meant
//! for small inputs.

use std::collections::BTreeSet;

use crate::group::Element;
use crate::sequence::Sequence;

/// `Π_k(S)` by enumerating every distinct ordered arrangement of `k` terms.
pub fn ordered_products(s: &Sequence, k: usize) -> BTreeSet<Element> {
    let g = *s.group();
    let support: Vec<Element> = s.support().map(|(u, _)| u).collect();
    let mut remaining: Vec<u32> = s.support().map(|(_, c)| c).collect();
    let mut out = BTreeSet::new();

    fn walk(
        g: &crate::group::GroupSpec,
        support: &[Element],
        remaining: &mut [u32],
        depth: usize,
        acc: Element,
        out: &mut BTreeSet<Element>,
    ) {
        if depth == 0 {
            out.insert(acc);
            return;
        }
        for i in 0..support.len() {
            if remaining[i] == 0 {
                continue;
            }
            remaining[i] -= 1;
            walk(g, support, remaining, depth - 1, g.mul(acc, support[i]), out);
            remaining[i] += 1;
        }
    }

    if k <= s.len() {
        walk(&g, &support, &mut remaining, k, g.identity(), &mut out);
    }
    out
}

/// `Π_k(S)` for abelian groups as sums of `k`-subsets. Small inputs go
/// through every index subset, larger ones through a bounded-knapsack table
/// over `(count, element)`.
pub fn abelian_subset_sums(s: &Sequence, k: usize) -> BTreeSet<Element> {
    let g = *s.group();
    assert!(g.is_abelian(), "abelian oracle called on {g}");
    let terms: Vec<Element> = s.terms().collect();
    if k > terms.len() {
        return BTreeSet::new();
    }
    if terms.len() <= 12 {
        let mut out = BTreeSet::new();
        for mask in 0u32..(1 << terms.len()) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let mut acc = g.identity();
            for (i, &u) in terms.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = g.mul(acc, u);
                }
            }
            out.insert(acc);
        }
        return out;
    }
    let order = g.order();
    // reach[c][i]: some c-subset of the processed terms sums to element i
    let mut reach = vec![vec![false; order]; k + 1];
    reach[0][g.index(g.identity())] = true;
    for (u, count) in s.support() {
        let mut next = reach.clone();
        for c in 0..=k {
            for (i, _) in reach[c].iter().enumerate().filter(|(_, &hit)| hit) {
                let mut acc = g.element_at(i);
                for m in 1..=count as usize {
                    if c + m > k {
                        break;
                    }
                    acc = g.mul(acc, u);
                    next[c + m][g.index(acc)] = true;
                }
            }
        }
        reach = next;
    }
    reach[k]
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .map(|(i, _)| g.element_at(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn d6_pair_of_reflections() {
        let g = GroupSpec::metacyclic(3, 2).unwrap();
        let s = Sequence::from_elements(&g, [Element::reflection(0), Element::reflection(1)]).unwrap();
        assert_eq!(
            ordered_products(&s, 2),
            BTreeSet::from([Element::rotation(1), Element::rotation(2)])
        );
        assert_eq!(ordered_products(&s, 0), BTreeSet::from([Element::IDENTITY]));
        assert!(ordered_products(&s, 3).is_empty());
    }

    #[test]
    fn both_abelian_paths_agree() {
        let g = GroupSpec::cyclic(7).unwrap();
        let s = Sequence::from_counts(&g, [(Element::rotation(1), 6), (Element::rotation(3), 6), (Element::rotation(5), 1)]).unwrap();
        assert_eq!(s.len(), 13);
        let small = s.without(Element::rotation(5)).unwrap();
        assert_eq!(small.len(), 12);
        for k in 0..=12 {
            assert_eq!(abelian_subset_sums(&small, k), ordered_products(&small, k), "k={k}");
        }
        let big = abelian_subset_sums(&s, 7);
        assert!(big.contains(&Element::IDENTITY));
    }
}
