//! Multisets over a group, enumerated as nondecreasing index vectors and
//! pruned to one representative per `Aut(G)`-orbit.
//!
//! A representative is the lexicographically least sorted index vector in
//! its orbit. Shards split on the first index and run on a rayon pool; the
//! merged output is sorted, so it does not depend on the job count.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{automorphisms, GroupSpec};
use crate::sequence::Sequence;

pub const DEFAULT_CEILING: f64 = 1e7;

/// Index permutations `i ↦ index(φ(element_at(i)))`, one per automorphism.
pub fn automorphism_permutations(g: &GroupSpec) -> Vec<Vec<usize>> {
    automorphisms(g)
        .iter()
        .map(|phi| g.elements().map(|u| g.index(phi.apply(u))).collect())
        .collect()
}

/// `C(length + |G| − 1, |G| − 1) / |Aut(G)|`, the expected number of orbit
/// representatives.
pub fn estimate(g: &GroupSpec, length: usize, aut_order: usize) -> f64 {
    let m = g.order() as f64;
    let mut acc = 1.0f64;
    for i in 1..=length {
        acc *= (m - 1.0 + i as f64) / i as f64;
    }
    acc / aut_order.max(1) as f64
}

pub fn check_feasible(g: &GroupSpec, length: usize, aut_order: usize, ceiling: f64) -> Result<()> {
    let estimate = estimate(g, length, aut_order);
    if estimate > ceiling {
        Err(Error::InfeasibleSize { estimate, ceiling })
    } else {
        Ok(())
    }
}

fn is_orbit_min(v: &[usize], perms: &[Vec<usize>], scratch: &mut Vec<usize>) -> bool {
    for p in perms {
        scratch.clear();
        scratch.extend(v.iter().map(|&i| p[i]));
        scratch.sort_unstable();
        if scratch.as_slice() < v {
            return false;
        }
    }
    true
}

/// Applies `visit` to every nondecreasing vector of `length` indices below
/// `order` (orbit minima only when `perms` is nonempty) and collects the
/// `Some` results, sorted.
pub fn for_each_multiset<T, F>(
    order: usize,
    length: usize,
    perms: &[Vec<usize>],
    jobs: usize,
    visit: F,
) -> Result<Vec<T>>
where
    T: Send + Ord,
    F: Fn(&[usize]) -> Option<T> + Sync,
{
    let shard = |first: usize| -> Vec<T> {
        let mut out = Vec::new();
        let mut v = vec![first; length];
        let mut scratch = Vec::with_capacity(length);
        if length == 0 {
            if first == 0 {
                out.extend(visit(&v));
            }
            return out;
        }
        loop {
            if is_orbit_min(&v, perms, &mut scratch) {
                out.extend(visit(&v));
            }
            // next nondecreasing vector with v[0] == first
            let mut i = length - 1;
            loop {
                if i == 0 {
                    return out;
                }
                if v[i] + 1 < order {
                    let next = v[i] + 1;
                    for slot in &mut v[i..] {
                        *slot = next;
                    }
                    break;
                }
                i -= 1;
            }
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let mut all: Vec<T> = pool.install(|| (0..order).into_par_iter().flat_map_iter(shard).collect());
    all.sort();
    Ok(all)
}

/// The sequence with the given element indices.
pub fn sequence_of(g: &GroupSpec, indices: &[usize]) -> Sequence {
    Sequence::from_elements(g, indices.iter().map(|&i| g.element_at(i))).expect("indices lie in the group")
}

/// Sorted index vector of a sequence.
pub fn indices_of(s: &Sequence) -> Vec<usize> {
    let g = s.group();
    s.terms().map(|u| g.index(u)).collect()
}

/// Every image of `s` under the given permutations, deduplicated and sorted.
pub fn orbit(s: &Sequence, perms: &[Vec<usize>]) -> Vec<Sequence> {
    let v = indices_of(s);
    let images: BTreeSet<Vec<usize>> = perms
        .iter()
        .map(|p| {
            let mut w: Vec<usize> = v.iter().map(|&i| p[i]).collect();
            w.sort_unstable();
            w
        })
        .collect();
    images.into_iter().map(|w| sequence_of(s.group(), &w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_all_multisets_without_pruning() {
        let g = GroupSpec::metacyclic(3, 2).unwrap();
        let all = for_each_multiset(6, 8, &[], 3, |v| Some(v.to_vec())).unwrap();
        assert_eq!(all.len(), 1287);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let empty = for_each_multiset(6, 0, &[], 1, |v| Some(v.len())).unwrap();
        assert_eq!(empty, vec![0]);
        assert_eq!(estimate(&g, 8, 1).round(), 1287.0);
    }

    #[test]
    fn pruning_picks_one_per_orbit() {
        let g = GroupSpec::metacyclic(3, 2).unwrap();
        let perms = automorphism_permutations(&g);
        assert_eq!(perms.len(), 6);
        let reps = for_each_multiset(6, 8, &perms, 2, |v| Some(v.to_vec())).unwrap();
        let mut covered = BTreeSet::new();
        for r in &reps {
            for s in orbit(&sequence_of(&g, r), &perms) {
                assert!(covered.insert(indices_of(&s)), "orbits overlap");
            }
        }
        assert_eq!(covered.len(), 1287);
    }

    #[test]
    fn job_count_does_not_matter() {
        let g = GroupSpec::cyclic(6).unwrap();
        let perms = automorphism_permutations(&g);
        let one = for_each_multiset(6, 7, &perms, 1, |v| Some(v.to_vec())).unwrap();
        let many = for_each_multiset(6, 7, &perms, 8, |v| Some(v.to_vec())).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn guard_refuses_large_spaces() {
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        let aut = automorphism_permutations(&g).len();
        assert!(matches!(
            check_feasible(&g, 45, aut, DEFAULT_CEILING),
            Err(Error::InfeasibleSize { .. })
        ));
        assert!(check_feasible(&GroupSpec::metacyclic(3, 2).unwrap(), 8, 6, DEFAULT_CEILING).is_ok());
    }
}
