use std::collections::HashMap;
use std::fmt;

use super::decomposition::{has_reflection, ordered};
use super::egz::lifted_block;
use super::swap::{replay_swap_argument, six_selection, SwapOutcome};
use super::{extract_product_h_blocks, improve_x_coverage, Decomposition, FamilyGroup};
use crate::error::{Error, Result};
use crate::group::{Element, Subgroup};
use crate::invariants::{check_template, TemplateMatch};
use crate::product::{self, verify_witness, ProductWitness, SearchConfig};
use crate::sequence::{Part, Sequence};

/// Which stage of the ladder produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rung {
    /// At most one reflection: two disjoint `3n₂`-blocks over `⟨y⟩`.
    CyclicPulls,
    /// Block decomposition, product choices, re-splits, conjugation
    /// orderings, swaps and absorption.
    Replay,
    /// Exact search over the whole sequence.
    Exact,
}

impl Rung {
    pub const ALL: [Rung; 3] = [Rung::CyclicPulls, Rung::Replay, Rung::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Rung::CyclicPulls => "cyclic-pulls",
            Rung::Replay => "replay",
            Rung::Exact => "exact",
        }
    }
}

impl fmt::Display for Rung {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub search: SearchConfig,
    /// Re-decompositions visited by the swap search.
    pub swap_cap: usize,
    /// Product choices tried per decomposition.
    pub sigma_cap: usize,
    /// Rebuilds of the decomposition before giving up on the replay.
    pub max_rounds: usize,
    /// Fall back to exact search when the earlier rungs find nothing.
    pub exact_fallback: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            search: SearchConfig::default(),
            swap_cap: 10_000,
            sigma_cap: 3usize.pow(8),
            max_rounds: 8,
            exact_fallback: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BigWitness {
    pub witness: ProductWitness,
    pub rung: Rung,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Witness(BigWitness),
    /// No `6n₂`-product-one subsequence exists.
    Free {
        template: Option<TemplateMatch>,
        trace: Vec<String>,
    },
    /// The constructive rungs failed and the exact fallback was disabled.
    Undecided { trace: Vec<String> },
}

/// A verified `6n₂`-product-one subsequence of a sequence of length at least
/// `9n₂`.
pub fn find_big_product_one(fam: &FamilyGroup, s: &Sequence, opts: &PipelineOptions) -> Result<BigWitness> {
    let need = 9 * fam.block();
    if s.len() < need {
        return Err(Error::Precondition(format!("need at least {need} terms, got {}", s.len())));
    }
    let opts = PipelineOptions {
        exact_fallback: true,
        ..*opts
    };
    match search_big_product_one(fam, s, &opts)? {
        SearchOutcome::Witness(w) => Ok(w),
        SearchOutcome::Free { .. } | SearchOutcome::Undecided { .. } => Err(Error::ClaimViolation(format!(
            "no product-one subsequence of length {} in {s}",
            fam.k()
        ))),
    }
}

/// The same ladder for sequences of length at least `9n₂ − 1`, where free
/// sequences can occur; a free answer comes with its template match.
pub fn search_big_product_one(fam: &FamilyGroup, s: &Sequence, opts: &PipelineOptions) -> Result<SearchOutcome> {
    if s.group() != fam.group() {
        return Err(Error::GroupMismatch {
            left: s.group().to_string(),
            right: fam.group().to_string(),
        });
    }
    let need = 9 * fam.block() - 1;
    if s.len() < need {
        return Err(Error::Precondition(format!("need at least {need} terms, got {}", s.len())));
    }
    let sx = s.restrict(&Part::Reflections)?;
    let sy = s.restrict(&Part::Rotations)?;
    let mut trace = vec![format!("step=start length={} reflections={}", s.len(), sx.len())];

    let found = if sx.len() <= 1 {
        cyclic_pulls(fam, &sy, &opts.search)?.map(|w| (w, Rung::CyclicPulls))
    } else {
        let mut r = Replay {
            fam,
            s,
            opts,
            trace: &mut trace,
            free_cache: HashMap::new(),
        };
        r.run()?.map(|w| (w, Rung::Replay))
    };
    if let Some((elements, rung)) = found {
        trace.push(format!("step=done rung={rung}"));
        return finish(s, elements, rung, trace).map(SearchOutcome::Witness);
    }
    if !opts.exact_fallback {
        trace.push("step=undecided".into());
        return Ok(SearchOutcome::Undecided { trace });
    }
    match product::has_product_one(s, fam.k(), &opts.search)? {
        Some(w) => {
            trace.push("step=done rung=exact".into());
            finish(s, w.elements, Rung::Exact, trace).map(SearchOutcome::Witness)
        }
        None => {
            let template = check_template(s);
            trace.push(format!(
                "step=free template={}",
                template.as_ref().map_or("none".to_string(), |m| m.to_string())
            ));
            Ok(SearchOutcome::Free { template, trace })
        }
    }
}

fn finish(s: &Sequence, elements: Vec<Element>, rung: Rung, trace: Vec<String>) -> Result<BigWitness> {
    let g = s.group();
    let witness = ProductWitness {
        elements,
        product: g.identity(),
    };
    verify_witness(s, &witness, g.identity())
        .map_err(|why| Error::ClaimViolation(format!("{rung} produced a rejected witness: {why}")))?;
    Ok(BigWitness { witness, rung, trace })
}

/// Two disjoint product-one blocks of length `3n₂` among the rotations.
fn cyclic_pulls(fam: &FamilyGroup, sy: &Sequence, cfg: &SearchConfig) -> Result<Option<Vec<Element>>> {
    let m = 3 * fam.block();
    if sy.len() + 1 < 3 * m {
        return Ok(None);
    }
    let Some(first) = product::has_product_one(sy, m, cfg)? else {
        return Err(Error::ClaimViolation(format!("no {m}-term zero-sum block in {sy}")));
    };
    let rest = sy.remove(&first.as_sequence(sy.group())?)?;
    let Some(second) = product::has_product_one(&rest, m, cfg)? else {
        return Err(Error::ClaimViolation(format!("no {m}-term zero-sum block in {rest}")));
    };
    let mut out = first.elements;
    out.extend(second.elements);
    Ok(Some(out))
}

struct Replay<'a> {
    fam: &'a FamilyGroup,
    s: &'a Sequence,
    opts: &'a PipelineOptions,
    trace: &'a mut Vec<String>,
    /// Sorted block products → whether six of them can multiply to one.
    free_cache: HashMap<Vec<Element>, bool>,
}

impl Replay<'_> {
    fn cfg(&self) -> &SearchConfig {
        &self.opts.search
    }

    fn run(&mut self) -> Result<Option<Vec<Element>>> {
        let fam = self.fam;
        let d = extract_product_h_blocks(fam, self.s, 8, self.cfg())?;
        let mut d = improve_x_coverage(fam, &d, self.cfg())?;
        self.trace.push(format!("step=extract {}", d.describe()));
        for round in 0..self.opts.max_rounds {
            if let Some(w) = self.sigma_selection(&d)? {
                return Ok(Some(w));
            }
            let refl = d.reflection_blocks();
            match refl.len() {
                0 => {
                    self.trace.push("step=stuck reason=rotation-products-without-selection".into());
                    return Ok(None);
                }
                1 => {
                    let r = refl[0];
                    let rest: Vec<usize> = (0..d.blocks.len()).filter(|&i| i != r).collect();
                    if rest.iter().any(|&i| has_reflection(&d.blocks[i])) {
                        return self.conjugation(&d, r);
                    }
                    let ys: Vec<Sequence> = rest.iter().map(|&i| d.blocks[i].clone()).collect();
                    let outcome = replay_swap_argument(fam, &ys, self.opts.swap_cap, self.cfg())?;
                    self.trace.push(format!("step=swap-search {}", outcome.record()));
                    if let SwapOutcome::Selection {
                        blocks, sigma, chosen, ..
                    } = outcome
                    {
                        let mut word = Vec::new();
                        for i in chosen {
                            word.extend(ordered(&blocks[i], sigma[i], self.cfg())?);
                        }
                        return Ok(Some(word));
                    }
                    match self.absorb(&d, r)? {
                        Some(next) => {
                            d = improve_x_coverage(fam, &next, self.cfg())?;
                            self.trace.push(format!("step=absorb round={round} {}", d.describe()));
                        }
                        None => {
                            self.trace.push("step=stuck reason=absorb-failed".into());
                            return Ok(None);
                        }
                    }
                }
                _ => return self.resplit(&d),
            }
        }
        self.trace.push("step=stuck reason=round-limit".into());
        Ok(None)
    }

    /// Tries choices of `σ_i ∈ π(T_i)` for six blocks multiplying to one.
    fn sigma_selection(&mut self, d: &Decomposition) -> Result<Option<Vec<Element>>> {
        let g = *self.fam.group();
        let options: Vec<Vec<Element>> = d
            .blocks
            .iter()
            .map(|b| product::pi_set(b, self.cfg()).map(|p| p.into_iter().collect()))
            .collect::<Result<_>>()?;
        let total: usize = options.iter().map(Vec::len).fold(1usize, |a, b| a.saturating_mul(b));
        let tries = total.min(self.opts.sigma_cap);
        for idx in 0..tries {
            let mut rem = idx;
            let choice: Vec<Element> = options
                .iter()
                .map(|o| {
                    let u = o[rem % o.len()];
                    rem /= o.len();
                    u
                })
                .collect();
            let mut sorted = choice.clone();
            sorted.sort();
            if self.free_cache.get(&sorted) == Some(&true) {
                continue;
            }
            match six_selection(&g, &choice, self.cfg())? {
                Some(chosen) => {
                    self.trace.push(format!("step=products tried={} of={total} found=true", idx + 1));
                    let mut word = Vec::new();
                    for i in chosen {
                        word.extend(ordered(&d.blocks[i], choice[i], self.cfg())?);
                    }
                    return Ok(Some(word));
                }
                None => {
                    self.free_cache.insert(sorted, true);
                }
            }
        }
        self.trace.push(format!("step=products tried={tries} of={total} found=false"));
        Ok(None)
    }

    /// Several blocks with reflection products: re-split their union around
    /// one reflection from each, then fall back to a block of `⟨y³⟩` terms.
    fn resplit(&mut self, d: &Decomposition) -> Result<Option<Vec<Element>>> {
        let fam = self.fam;
        let g = *fam.group();
        let m = fam.block();
        let refl = d.reflection_blocks();
        let plain: Vec<usize> = (0..d.blocks.len()).filter(|i| !refl.contains(i)).collect();
        let mut union = Sequence::empty(&g);
        for &i in &refl {
            union = union.concat(&d.blocks[i])?;
        }
        let mut pool = union.clone();
        for &i in &refl {
            let h = d.blocks[i].terms().find(|u| u.is_reflection()).expect("reflection product");
            pool = pool.without(h)?;
        }
        let mut parts: Vec<Sequence> = Vec::new();
        if let Some(t) = lifted_block(&pool, fam.phi(), m, g.identity(), self.cfg())? {
            let mut rest = union.remove(&t)?;
            parts.push(t);
            while rest.len() >= 2 * m {
                let Some(t) = lifted_block(&rest, fam.phi(), m, g.identity(), self.cfg())? else {
                    break;
                };
                rest = rest.remove(&t)?;
                parts.push(t);
            }
            if rest.len() == m {
                parts.push(rest);
            }
        }
        if parts.len() == refl.len() {
            let blocks: Vec<Sequence> = plain.iter().map(|&i| d.blocks[i].clone()).chain(parts).collect();
            let next = Decomposition::new(fam, d.source.clone(), blocks, d.remainder.clone(), self.cfg())?;
            self.trace.push(format!("step=resplit {}", next.describe()));
            if let Some(w) = self.sigma_selection(&next)? {
                return Ok(Some(w));
            }
        }
        // a zero-sum block of ⟨y³⟩ terms has product one outright
        let cube = Subgroup::rotations(&g, 3)?;
        let z = union.restrict(&Part::Subgroup(cube))?;
        self.trace.push(format!("step=cube-block available={}", z.len()));
        if plain.len() >= 5 && z.len() >= m {
            if let Some(t0) = lifted_block(&z, fam.phi(), m, g.identity(), self.cfg())? {
                for five in combinations(&plain, 5) {
                    let mut word = Vec::new();
                    for &i in &five {
                        word.extend(d.ordered_block(i, self.cfg())?);
                    }
                    word.extend(ordered(&t0, g.identity(), self.cfg())?);
                    if g.product(word.iter()).is_identity() {
                        return Ok(Some(word));
                    }
                }
            }
        }
        self.trace.push("step=stuck reason=resplit-failed".into());
        Ok(None)
    }

    /// One reflection block, and a reflection `h` inside another block:
    /// conjugating a pair of blocks by `h` cancels their products.
    fn conjugation(&mut self, d: &Decomposition, r: usize) -> Result<Option<Vec<Element>>> {
        let g = *self.fam.group();
        let m = self.fam.block();
        let rot: Vec<usize> = (0..d.blocks.len()).filter(|&i| i != r).collect();
        for &i in &rot {
            let hs: Vec<Element> = d.blocks[i].support().map(|(u, _)| u).filter(|u| u.is_reflection()).collect();
            for h in hs {
                let Some(tail) = product::find_product(&d.blocks[i].without(h)?, m - 1, g.inv(h), self.cfg())? else {
                    continue;
                };
                let others: Vec<usize> = rot.iter().copied().filter(|&j| j != i).collect();
                // h·ord(T_i − h) = 1; the pair (p, q) sits around h
                for (p, q) in pairs(&others) {
                    let fillers: Vec<usize> = others.iter().copied().filter(|&j| j != p && j != q).collect();
                    for extra in combinations(&fillers, 3) {
                        let mut word = d.ordered_block(p, self.cfg())?;
                        word.push(h);
                        word.extend(d.ordered_block(q, self.cfg())?);
                        word.extend(tail.elements.iter().copied());
                        for &j in &extra {
                            word.extend(d.ordered_block(j, self.cfg())?);
                        }
                        if g.product(word.iter()).is_identity() {
                            self.trace.push(format!("step=conjugation block={} pair={},{}", i + 1, p + 1, q + 1));
                            return Ok(Some(word));
                        }
                    }
                }
            }
        }
        self.trace.push("step=stuck reason=conjugation-failed".into());
        Ok(None)
    }

    /// All seven other blocks lie in `⟨y⟩`: fold a reflection into a new
    /// block using `n₂ − 1` rotation terms and rebuild the rest.
    fn absorb(&mut self, d: &Decomposition, r: usize) -> Result<Option<Decomposition>> {
        let fam = self.fam;
        let g = *fam.group();
        let m = fam.block();
        let mut ys = Sequence::empty(&g);
        for (i, b) in d.blocks.iter().enumerate() {
            if i != r {
                ys = ys.concat(b)?;
            }
        }
        let (h, keep_r) = match d.remainder.terms().find(|u| u.is_reflection()) {
            Some(h) => (h, true),
            None => {
                let hs: Vec<Element> = d.blocks[r].terms().filter(|u| u.is_reflection()).collect();
                if hs.len() < 2 {
                    return Ok(None);
                }
                (hs[0], false)
            }
        };
        let target = g.inv(fam.phi().apply(h));
        let Some(t0) = lifted_block(&ys, fam.phi(), m - 1, target, self.cfg())? else {
            return Ok(None);
        };
        let mut t1 = t0;
        t1.push(h, 1)?;
        let mut blocks = vec![t1.clone()];
        let mut pool = self.s.remove(&t1)?;
        if keep_r {
            pool = pool.remove(&d.blocks[r])?;
            blocks.push(d.blocks[r].clone());
        }
        while blocks.len() < 8 {
            let Some(b) = lifted_block(&pool, fam.phi(), m, g.identity(), self.cfg())? else {
                return Ok(None);
            };
            pool = pool.remove(&b)?;
            blocks.push(b);
        }
        Decomposition::new(fam, self.s.clone(), blocks, pool, self.cfg()).map(Some)
    }
}

fn pairs(items: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &a in items {
        for &b in items {
            if a != b {
                out.push((a, b));
            }
        }
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn fam(n: u32, s: i64) -> FamilyGroup {
        FamilyGroup::new(&GroupSpec::metacyclic(n, s).unwrap()).unwrap()
    }

    #[test]
    fn extremal_sequences_are_free_and_match() {
        let f = fam(15, 11);
        let s = f.extremal(1, 2, 7);
        match search_big_product_one(&f, &s, &PipelineOptions::default()).unwrap() {
            SearchOutcome::Free { template, .. } => assert!(template.is_some()),
            other => panic!("expected free, got {other:?}"),
        }
    }

    #[test]
    fn non_unit_difference_has_witness() {
        let f = fam(15, 11);
        let s = f.extremal(1, 4, 7);
        let SearchOutcome::Witness(w) = search_big_product_one(&f, &s, &PipelineOptions::default()).unwrap() else {
            panic!("expected a witness");
        };
        assert_eq!(w.witness.len(), 30);
    }

    #[test]
    fn one_more_term_always_has_a_witness() {
        let f = fam(15, 11);
        for extra in [Element::IDENTITY, Element::rotation(2), Element::reflection(3)] {
            let mut s = f.extremal(1, 2, 7);
            s.push(extra, 1).unwrap();
            let w = find_big_product_one(&f, &s, &PipelineOptions::default()).unwrap();
            assert_eq!(w.witness.len(), 30);
        }
    }

    #[test]
    fn rotation_heavy_input_uses_cyclic_pulls() {
        let f = fam(15, 11);
        let g = *f.group();
        let s = Sequence::from_elements(&g, (0..45u32).map(|i| Element::rotation((i * 7 + i / 4) % 15))).unwrap();
        let w = find_big_product_one(&f, &s, &PipelineOptions::default()).unwrap();
        assert_eq!(w.rung, Rung::CyclicPulls);
    }

    #[test]
    fn reflection_rich_input_uses_replay() {
        let f = fam(15, 11);
        let g = *f.group();
        let s = Sequence::from_elements(
            &g,
            (0..45u32).map(|i| Element {
                eps: (i % 3 == 0) as u8,
                a: (i * i + 2 * i) % 15,
            }),
        )
        .unwrap();
        let opts = PipelineOptions {
            exact_fallback: false,
            ..PipelineOptions::default()
        };
        let SearchOutcome::Witness(w) = search_big_product_one(&f, &s, &opts).unwrap() else {
            panic!("replay did not finish");
        };
        assert_eq!(w.rung, Rung::Replay);
    }

    #[test]
    fn short_input_is_rejected() {
        let f = fam(15, 11);
        let s = Sequence::from_counts(f.group(), [(Element::IDENTITY, 43)]).unwrap();
        assert!(matches!(
            search_big_product_one(&f, &s, &PipelineOptions::default()),
            Err(Error::Precondition(_))
        ));
        let s = Sequence::from_counts(f.group(), [(Element::IDENTITY, 44)]).unwrap();
        assert!(matches!(
            find_big_product_one(&f, &s, &PipelineOptions::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(&[0, 1, 2, 3, 4, 5, 6], 3).len(), 35);
        assert_eq!(pairs(&[1, 2, 3]).len(), 6);
    }
}
