use std::collections::BTreeSet;

use super::egz::lifted_block;
use super::FamilyGroup;
use crate::error::{Error, Result};
use crate::group::{Element, Subgroup};
use crate::product::{self, SearchConfig};
use crate::sequence::Sequence;

/// `S = T₁·…·T_m·E` with every `T_i` of length `n₂` and `π(T_i) ⊂ H`, plus a
/// chosen `σ_i ∈ π(T_i)` per block.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub source: Sequence,
    pub blocks: Vec<Sequence>,
    pub sigma: Vec<Element>,
    pub remainder: Sequence,
    pub target: Subgroup,
}

impl Decomposition {
    /// Builds the decomposition choosing `σ_i = min π(T_i)`.
    pub fn new(
        fam: &FamilyGroup,
        source: Sequence,
        blocks: Vec<Sequence>,
        remainder: Sequence,
        cfg: &SearchConfig,
    ) -> Result<Self> {
        let sigma = blocks
            .iter()
            .map(|b| {
                let pi = product::pi_set(b, cfg)?;
                pi.iter()
                    .copied()
                    .find(|&u| fam.in_h(u))
                    .ok_or_else(|| Error::ClaimViolation(format!("block {b} has no product in H")))
            })
            .collect::<Result<Vec<_>>>()?;
        let d = Decomposition {
            source,
            blocks,
            sigma,
            remainder,
            target: fam.h().clone(),
        };
        d.validate(cfg)?;
        Ok(d)
    }

    /// Checks that the blocks and remainder exactly use up the source and
    /// that each `σ_i ∈ π(T_i) ∩ H`.
    pub fn validate(&self, cfg: &SearchConfig) -> Result<()> {
        let mut all = self.remainder.clone();
        for b in &self.blocks {
            all = all.concat(b)?;
        }
        if all != self.source {
            return Err(Error::ClaimViolation("blocks and remainder do not recompose the source".into()));
        }
        if self.blocks.len() != self.sigma.len() {
            return Err(Error::ClaimViolation("one σ per block".into()));
        }
        for (b, &u) in self.blocks.iter().zip(&self.sigma) {
            if !self.target.contains(u) {
                return Err(Error::ClaimViolation(format!("σ = {u} outside {}", self.target.describe())));
            }
            if product::find_product(b, b.len(), u, cfg)?.is_none() {
                return Err(Error::ClaimViolation(format!("{u} is not a product of {b}")));
            }
        }
        Ok(())
    }

    /// Number of blocks containing a reflection.
    pub fn x_coverage(&self) -> usize {
        self.blocks.iter().filter(|b| has_reflection(b)).count()
    }

    /// Block `i` ordered so that it multiplies to `σ_i`.
    pub fn ordered_block(&self, i: usize, cfg: &SearchConfig) -> Result<Vec<Element>> {
        ordered(&self.blocks[i], self.sigma[i], cfg)
    }

    /// `σ_i` are reflections at these indices.
    pub fn reflection_blocks(&self) -> Vec<usize> {
        (0..self.sigma.len()).filter(|&i| self.sigma[i].is_reflection()).collect()
    }

    /// Trace line.
    pub fn describe(&self) -> String {
        let sig: Vec<String> = self.sigma.iter().map(|u| u.to_string()).collect();
        format!(
            "blocks={} coverage={} remainder={} sigma=[{}]",
            self.blocks.len(),
            self.x_coverage(),
            self.remainder.len(),
            sig.join(" ")
        )
    }
}

pub(crate) fn has_reflection(s: &Sequence) -> bool {
    s.support().any(|(u, _)| u.is_reflection())
}

pub(crate) fn ordered(block: &Sequence, target: Element, cfg: &SearchConfig) -> Result<Vec<Element>> {
    match product::find_product(block, block.len(), target, cfg)? {
        Some(w) => Ok(w.elements),
        None => Err(Error::ClaimViolation(format!("{target} is not a product of {block}"))),
    }
}

/// Pulls `count` blocks of length `n₂` whose `φ`-images multiply to one, by
/// repeated zero-sum extraction over `⟨y³⟩ ≅ C_{n₂}`.
pub fn extract_product_h_blocks(
    fam: &FamilyGroup,
    s: &Sequence,
    count: usize,
    cfg: &SearchConfig,
) -> Result<Decomposition> {
    let m = fam.block();
    let need = (count + 1) * m - 1;
    if s.group() != fam.group() {
        return Err(Error::GroupMismatch {
            left: s.group().to_string(),
            right: fam.group().to_string(),
        });
    }
    if s.len() < need {
        return Err(Error::Precondition(format!(
            "{count} blocks of length {m} need {need} terms, got {}",
            s.len()
        )));
    }
    let mut pool = s.clone();
    let mut blocks = Vec::with_capacity(count);
    for _ in 0..count {
        let b = lifted_block(&pool, fam.phi(), m, fam.group().identity(), cfg)?
            .ok_or_else(|| Error::ClaimViolation(format!("no {m}-term zero-sum block among {} terms", pool.len())))?;
        pool = pool.remove(&b)?;
        blocks.push(b);
    }
    Decomposition::new(fam, s.clone(), blocks, pool, cfg)
}

/// Local term exchanges that keep every block's `φ`-sum trivial and strictly
/// raise the number of blocks holding a reflection, applied until none
/// applies. Exchanges are single terms or pairs, between a block and the
/// remainder or between two blocks.
pub fn improve_x_coverage(fam: &FamilyGroup, d: &Decomposition, cfg: &SearchConfig) -> Result<Decomposition> {
    let g = *fam.group();
    let phi = |u: Element| fam.phi().apply(u);
    let mut parts: Vec<Vec<Element>> = d.blocks.iter().map(|b| b.terms().collect()).collect();
    parts.push(d.remainder.terms().collect());
    let nb = d.blocks.len();
    let coverage = |parts: &[Vec<Element>]| parts[..nb].iter().filter(|p| p.iter().any(|u| u.is_reflection())).count();

    loop {
        let before = coverage(&parts);
        let mut improved = false;
        'search: for i in 0..nb {
            if parts[i].iter().any(|u| u.is_reflection()) {
                continue;
            }
            for j in 0..parts.len() {
                if j == i {
                    continue;
                }
                // single exchange
                for a in 0..parts[i].len() {
                    for b in 0..parts[j].len() {
                        let (u, v) = (parts[i][a], parts[j][b]);
                        if !v.is_reflection() || phi(u) != phi(v) {
                            continue;
                        }
                        let mut trial = parts.clone();
                        trial[i][a] = v;
                        trial[j][b] = u;
                        if coverage(&trial) > before {
                            parts = trial;
                            improved = true;
                            break 'search;
                        }
                    }
                }
                // pair exchange
                let pi = &parts[i];
                let pj = &parts[j];
                let mut pairs_i = BTreeSet::new();
                for a in 0..pi.len() {
                    for a2 in a + 1..pi.len() {
                        pairs_i.insert((g.mul(phi(pi[a]), phi(pi[a2])), a, a2));
                    }
                }
                for b in 0..pj.len() {
                    for b2 in b + 1..pj.len() {
                        if !pj[b].is_reflection() && !pj[b2].is_reflection() {
                            continue;
                        }
                        let key = g.mul(phi(pj[b]), phi(pj[b2]));
                        for &(_, a, a2) in pairs_i.range((key, 0, 0)..=(key, usize::MAX, usize::MAX)) {
                            let mut trial = parts.clone();
                            trial[i][a] = parts[j][b];
                            trial[i][a2] = parts[j][b2];
                            trial[j][b] = parts[i][a];
                            trial[j][b2] = parts[i][a2];
                            if coverage(&trial) > before {
                                parts = trial;
                                improved = true;
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }

    let mut blocks = Vec::with_capacity(nb);
    for p in &parts[..nb] {
        blocks.push(Sequence::from_elements(&g, p.iter().copied())?);
    }
    let remainder = Sequence::from_elements(&g, parts[nb].iter().copied())?;
    Decomposition::new(fam, d.source.clone(), blocks, remainder, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn fam() -> FamilyGroup {
        FamilyGroup::new(&GroupSpec::metacyclic(15, 11).unwrap()).unwrap()
    }

    #[test]
    fn extremal_sequence_splits_into_eight_blocks() {
        let f = fam();
        let cfg = SearchConfig::default();
        let s = f.extremal(1, 2, 0);
        let d = extract_product_h_blocks(&f, &s, 8, &cfg).unwrap();
        assert_eq!(d.blocks.len(), 8);
        assert_eq!(d.remainder.len(), 4);
        d.validate(&cfg).unwrap();
        let improved = improve_x_coverage(&f, &d, &cfg).unwrap();
        assert!(improved.x_coverage() >= d.x_coverage());
        improved.validate(&cfg).unwrap();
    }

    #[test]
    fn short_sequences_are_rejected() {
        let f = fam();
        let s = Sequence::from_counts(f.group(), [(Element::IDENTITY, 43)]).unwrap();
        assert!(matches!(
            extract_product_h_blocks(&f, &s, 8, &SearchConfig::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn tampered_decomposition_fails_validation() {
        let f = fam();
        let cfg = SearchConfig::default();
        let s = Sequence::from_counts(f.group(), [(Element::IDENTITY, 30), (Element::rotation(5), 14)]).unwrap();
        let mut d = extract_product_h_blocks(&f, &s, 8, &cfg).unwrap();
        d.sigma[0] = Element::reflection(0);
        assert!(d.validate(&cfg).is_err());
    }

    #[test]
    fn coverage_moves_spread_reflections() {
        // all reflections start in the remainder, φ-images match rotations in blocks
        let f = fam();
        let cfg = SearchConfig::default();
        let g = *f.group();
        let mut s = Sequence::from_counts(&g, [(Element::IDENTITY, 40)]).unwrap();
        s.push(Element::reflection(0), 4).unwrap();
        let blocks: Vec<Sequence> = (0..8)
            .map(|_| Sequence::from_counts(&g, [(Element::IDENTITY, 5)]).unwrap())
            .collect();
        let rem = Sequence::from_counts(&g, [(Element::reflection(0), 4)]).unwrap();
        let d = Decomposition::new(&f, s, blocks, rem, &cfg).unwrap();
        assert_eq!(d.x_coverage(), 0);
        let better = improve_x_coverage(&f, &d, &cfg).unwrap();
        assert_eq!(better.x_coverage(), 4);
    }
}
