//! Breadth-first search over `(used-counts, running product)`.
//!
//! The used-count vector over the support is packed mixed-radix, and the
//! state code is `used * |G| + index(product)`. Each reached state stores the
//! support index of the pick that first reached it. The search expands
//! layers in discovery order and tries picks in canonical order, so
//! witnesses are deterministic.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::sequence::Sequence;

/// Dense parent tables are used up to this many states.
const DENSE_LIMIT: u128 = 1 << 24;

const ROOT: u16 = u16::MAX;

/// `∏(cᵢ + 1) · |G|`, saturating.
pub(super) fn space_size(s: &Sequence) -> u128 {
    s.support()
        .fold(s.group().order() as u128, |acc, (_, c)| acc.saturating_mul(c as u128 + 1))
}

enum Parents {
    Dense(Vec<u16>),
    Sparse(HashMap<u128, u16>),
}

impl Parents {
    fn get(&self, code: u128) -> Option<u16> {
        match self {
            Parents::Dense(v) => match v[code as usize] {
                0 => None,
                p => Some(p),
            },
            Parents::Sparse(m) => m.get(&code).copied(),
        }
    }

    /// Records `parent` unless the state was already reached.
    fn insert(&mut self, code: u128, parent: u16) -> bool {
        match self {
            Parents::Dense(v) => {
                let slot = &mut v[code as usize];
                if *slot == 0 {
                    *slot = parent;
                    true
                } else {
                    false
                }
            }
            Parents::Sparse(m) => {
                if let std::collections::hash_map::Entry::Vacant(e) = m.entry(code) {
                    e.insert(parent);
                    true
                } else {
                    false
                }
            }
        }
    }
}

pub(super) struct Search {
    group: GroupSpec,
    support: Vec<Element>,
    strides: Vec<u128>,
    parents: Parents,
    last_layer: Vec<u128>,
}

impl Search {
    pub(super) fn run(s: &Sequence, k: usize, budget: u64) -> Result<Search> {
        let group = *s.group();
        let order = group.order() as u128;
        let support: Vec<Element> = s.support().map(|(u, _)| u).collect();
        let counts: Vec<u32> = s.support().map(|(_, c)| c).collect();
        if support.len() >= ROOT as usize {
            return Err(Error::Precondition("support too large for the state-space search".into()));
        }
        let mut strides = Vec::with_capacity(support.len());
        let mut stride: u128 = 1;
        for &c in &counts {
            strides.push(stride);
            stride = stride.checked_mul(c as u128 + 1).ok_or(Error::BudgetExceeded { states: budget })?;
        }
        let total = stride
            .checked_mul(order)
            .ok_or(Error::BudgetExceeded { states: budget })?;
        let mut parents = if total <= DENSE_LIMIT {
            Parents::Dense(vec![0; total as usize])
        } else {
            Parents::Sparse(HashMap::new())
        };

        let root = group.index(group.identity()) as u128;
        parents.insert(root, ROOT);
        let mut layer = vec![root];
        let mut visited: u64 = 1;
        for _ in 0..k {
            let mut next = Vec::new();
            for &code in &layer {
                let used = code / order;
                let product = group.element_at((code % order) as usize);
                for (i, &u) in support.iter().enumerate() {
                    let v_i = (used / strides[i]) % (counts[i] as u128 + 1);
                    if v_i == counts[i] as u128 {
                        continue;
                    }
                    let p = group.mul(product, u);
                    let next_code = (used + strides[i]) * order + group.index(p) as u128;
                    if parents.insert(next_code, i as u16 + 1) {
                        visited += 1;
                        if visited > budget {
                            return Err(Error::BudgetExceeded { states: visited });
                        }
                        next.push(next_code);
                    }
                }
            }
            layer = next;
        }
        Ok(Search {
            group,
            support,
            strides,
            parents,
            last_layer: layer,
        })
    }

    pub(super) fn members(&self) -> BTreeSet<Element> {
        let order = self.group.order() as u128;
        self.last_layer
            .iter()
            .map(|&code| self.group.element_at((code % order) as usize))
            .collect()
    }

    pub(super) fn witness(&self, target: Element) -> Option<Vec<Element>> {
        let order = self.group.order() as u128;
        let t = self.group.index(target) as u128;
        let mut code = *self.last_layer.iter().find(|&&c| c % order == t)?;
        let mut picks = Vec::new();
        loop {
            let parent = self.parents.get(code).expect("reached state has a parent");
            if parent == ROOT {
                break;
            }
            let i = (parent - 1) as usize;
            let u = self.support[i];
            picks.push(u);
            let used = code / order;
            let product = self.group.element_at((code % order) as usize);
            let prev = self.group.mul(product, self.group.inv(u));
            code = (used - self.strides[i]) * order + self.group.index(prev) as u128;
        }
        picks.reverse();
        Some(picks)
    }
}
