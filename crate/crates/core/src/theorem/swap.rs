use std::collections::{BTreeMap, HashSet, VecDeque};

use super::egz::lifted_block;
use super::FamilyGroup;
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, Subgroup};
use crate::product::{self, SearchConfig};
use crate::sequence::Sequence;

/// Indices of six of the given products, in an order whose product is one.
pub fn six_selection(g: &GroupSpec, sigma: &[Element], cfg: &SearchConfig) -> Result<Option<Vec<usize>>> {
    if sigma.len() < 6 {
        return Ok(None);
    }
    if sigma.iter().all(|u| !u.is_reflection()) {
        // commuting values: drop the ones whose omission leaves a product of one
        let total = g.product(sigma.iter());
        if sigma.len() == 7 {
            return Ok(sigma
                .iter()
                .position(|&u| u == total)
                .map(|skip| (0..7).filter(|&i| i != skip).collect()));
        }
    }
    let seq = Sequence::from_elements(g, sigma.iter().copied())?;
    let Some(w) = product::has_product_one(&seq, 6, cfg)? else {
        return Ok(None);
    };
    let mut used = vec![false; sigma.len()];
    let order = w
        .elements
        .iter()
        .map(|&u| {
            let i = (0..sigma.len())
                .find(|&i| !used[i] && sigma[i] == u)
                .expect("witness terms come from the products");
            used[i] = true;
            i
        })
        .collect();
    Ok(Some(order))
}

#[derive(Clone, Debug, PartialEq)]
pub enum SwapOutcome {
    /// A re-decomposition of the same terms in which six blocks multiply to
    /// one in the listed order.
    Selection {
        blocks: Vec<Sequence>,
        sigma: Vec<Element>,
        chosen: Vec<usize>,
        explored: usize,
    },
    /// No explored re-decomposition has such a selection.
    Rigid {
        explored: usize,
        /// Every reachable re-decomposition was explored.
        complete: bool,
        /// `Π_{n₂−1}(φ(Y)) = ⟨y³⟩`.
        pi_full: bool,
        /// Multiplicities of the block products of the input.
        shape: Vec<(Element, usize)>,
    },
}

impl SwapOutcome {
    pub fn record(&self) -> String {
        match self {
            SwapOutcome::Selection { chosen, explored, .. } => {
                let c: Vec<String> = chosen.iter().map(|i| (i + 1).to_string()).collect();
                format!("swap outcome=selection explored={explored} chosen={}", c.join(","))
            }
            SwapOutcome::Rigid {
                explored,
                complete,
                pi_full,
                shape,
            } => {
                let sh: Vec<String> = shape.iter().map(|(u, c)| format!("{u}*{c}")).collect();
                format!(
                    "swap outcome=rigid explored={explored} complete={complete} pi_full={pi_full} shape={}",
                    sh.join(",")
                )
            }
        }
    }
}

type State = Vec<Vec<Element>>;

fn normalize(mut st: State) -> State {
    for b in &mut st {
        b.sort();
    }
    st
}

fn key(st: &State) -> Vec<Vec<Element>> {
    let mut k = st.clone();
    k.sort();
    k
}

/// Searches re-decompositions of seven rotation blocks `T₁ … T₇` (each of
/// length `n₂` with trivial `φ`-sum) for six blocks whose products multiply
/// to one.
///
/// Moves exchange equal-`φ` terms between blocks, and, when
/// `Π_{n₂−1}(φ(Y))` has a nontrivial stabilizer `⟨y^{3r}⟩` with `r ≥ 2`,
/// exchange zero-sum pieces drawn from its dominant coset. At most `cap`
/// states are visited.
pub fn replay_swap_argument(
    fam: &FamilyGroup,
    blocks: &[Sequence],
    cap: usize,
    cfg: &SearchConfig,
) -> Result<SwapOutcome> {
    let g = *fam.group();
    let m = fam.block();
    if blocks.len() != 7 {
        return Err(Error::Precondition(format!("need 7 blocks, got {}", blocks.len())));
    }
    for b in blocks {
        if b.len() != m || b.support().any(|(u, _)| u.is_reflection()) || !fam.phi_sum(b.terms()).is_identity() {
            return Err(Error::Precondition(format!(
                "blocks must be {m} rotations with trivial φ-sum, got {b}"
            )));
        }
    }
    let sigma_of = |st: &State| -> Vec<Element> { st.iter().map(|b| g.product(b.iter())).collect() };
    let start: State = normalize(blocks.iter().map(|b| b.terms().collect()).collect());

    let mut shape: BTreeMap<Element, usize> = BTreeMap::new();
    for u in sigma_of(&start) {
        *shape.entry(u).or_default() += 1;
    }
    let shape: Vec<(Element, usize)> = shape.into_iter().collect();

    let mut y = Sequence::empty(&g);
    for b in blocks {
        y = y.concat(b)?;
    }
    let image = y.map(fam.phi())?;
    let members = product::subproduct_members(&image, m - 1, cfg)?;
    let pi_full = members.len() == m;

    let mut seen: HashSet<Vec<Vec<Element>>> = HashSet::new();
    let mut explored = 0usize;
    let mut truncated = false;
    let found = |st: &State, explored: usize| -> Result<Option<SwapOutcome>> {
        let sigma = sigma_of(st);
        Ok(six_selection(&g, &sigma, cfg)?.map(|chosen| SwapOutcome::Selection {
            blocks: st
                .iter()
                .map(|b| Sequence::from_elements(&g, b.iter().copied()).expect("terms lie in G"))
                .collect(),
            sigma,
            chosen,
            explored,
        }))
    };

    // pieces from the dominant coset of the stabilizer, swapped whole
    if !pi_full {
        let stab = Subgroup::stabilizer_of(&g, &members);
        let piece = stab.order();
        let r = m / piece;
        if r >= 2 {
            let mut per_coset: BTreeMap<Element, usize> = BTreeMap::new();
            for (u, c) in image.support() {
                *per_coset.entry(stab.coset_rep(u)).or_default() += c as usize;
            }
            let (&rep, _) = per_coset.iter().max_by_key(|&(u, c)| (*c, std::cmp::Reverse(*u))).expect("nonempty");
            let mut dominant = Sequence::empty(&g);
            for (u, c) in y.support() {
                if stab.coset_rep(fam.phi().apply(u)) == rep {
                    dominant.push(u, c)?;
                }
            }
            let target = g.pow(rep, piece as u64);
            let mut pieces: Vec<Vec<Element>> = Vec::new();
            while dominant.len() >= piece {
                let Some(v) = lifted_block(&dominant, fam.phi(), piece, target, cfg)? else {
                    break;
                };
                dominant = dominant.remove(&v)?;
                pieces.push(v.terms().collect());
            }
            if pieces.len() >= 6 * r {
                // assignment: piece → block; blocks 0..6 take r pieces, block 6 the rest
                let assign: Vec<usize> = (0..pieces.len()).map(|i| (i / r).min(6)).collect();
                let build = |assign: &[usize]| -> Result<State> {
                    let mut st: State = vec![Vec::new(); 7];
                    let mut used = Sequence::empty(&g);
                    for (i, &b) in assign.iter().enumerate() {
                        st[b].extend(pieces[i].iter().copied());
                        used = used.concat(&Sequence::from_elements(&g, pieces[i].iter().copied())?)?;
                    }
                    st[6].extend(y.remove(&used)?.terms());
                    Ok(normalize(st))
                };
                let mut queue = VecDeque::from([assign]);
                let mut seen_assign: HashSet<Vec<usize>> = HashSet::new();
                while let Some(a) = queue.pop_front() {
                    if explored >= cap {
                        truncated = true;
                        break;
                    }
                    if !seen_assign.insert(a.clone()) {
                        continue;
                    }
                    let st = build(&a)?;
                    if !seen.insert(key(&st)) {
                        continue;
                    }
                    explored += 1;
                    if let Some(out) = found(&st, explored)? {
                        return Ok(out);
                    }
                    for i in 0..a.len() {
                        for j in i + 1..a.len() {
                            if a[i] != a[j] {
                                let mut b = a.clone();
                                b.swap(i, j);
                                queue.push_back(b);
                            }
                        }
                    }
                }
            }
        }
    }

    // single-term exchanges with equal φ
    seen.clear();
    let mut queue = VecDeque::from([start]);
    while let Some(st) = queue.pop_front() {
        if explored >= cap {
            truncated = true;
            break;
        }
        if !seen.insert(key(&st)) {
            continue;
        }
        explored += 1;
        if let Some(out) = found(&st, explored)? {
            return Ok(out);
        }
        for i in 0..7 {
            for j in i + 1..7 {
                for a in 0..m {
                    if a > 0 && st[i][a] == st[i][a - 1] {
                        continue;
                    }
                    for b in 0..m {
                        if b > 0 && st[j][b] == st[j][b - 1] {
                            continue;
                        }
                        let (u, v) = (st[i][a], st[j][b]);
                        if u == v || fam.phi().apply(u) != fam.phi().apply(v) {
                            continue;
                        }
                        let mut next = st.clone();
                        next[i][a] = v;
                        next[j][b] = u;
                        let next = normalize(next);
                        if !seen.contains(&key(&next)) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }

    Ok(SwapOutcome::Rigid {
        explored,
        complete: !truncated,
        pi_full,
        shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam() -> FamilyGroup {
        FamilyGroup::new(&GroupSpec::metacyclic(15, 11).unwrap()).unwrap()
    }

    fn block(g: &GroupSpec, terms: &[(u32, u32)]) -> Sequence {
        Sequence::from_counts(g, terms.iter().map(|&(a, c)| (Element::rotation(a), c))).unwrap()
    }

    #[test]
    fn six_selection_examples() {
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        let cfg = SearchConfig::default();
        let r = |a| Element::rotation(a);
        // five y^5 and two y^10: no six multiply to one
        let rigid = [r(5), r(5), r(5), r(5), r(5), r(10), r(10)];
        assert_eq!(six_selection(&g, &rigid, &cfg).unwrap(), None);
        let loose = [r(5), r(5), r(5), r(10), r(10), r(10), r(0)];
        let chosen = six_selection(&g, &loose, &cfg).unwrap().unwrap();
        assert_eq!(chosen, vec![0, 1, 2, 3, 4, 5]);
        // reflections need the general search
        let x = |a| Element::reflection(a);
        let mixed = [x(0), x(0), r(0), r(0), r(0), r(0), x(5), r(5)];
        let chosen = six_selection(&g, &mixed, &cfg).unwrap().unwrap();
        let word: Vec<Element> = chosen.iter().map(|&i| mixed[i]).collect();
        assert!(g.product(word.iter()).is_identity());
    }

    #[test]
    fn rigid_shape_is_reported() {
        // every block constant: y^5-blocks of y^1 and y^10-blocks of y^2
        let f = fam();
        let g = *f.group();
        let mut blocks = vec![block(&g, &[(1, 5)]); 5];
        blocks.extend(vec![block(&g, &[(2, 5)]); 2]);
        let out = replay_swap_argument(&f, &blocks, 10_000, &SearchConfig::default()).unwrap();
        match out {
            SwapOutcome::Rigid { complete, pi_full, shape, .. } => {
                assert!(complete);
                assert!(pi_full);
                assert_eq!(shape, vec![(Element::rotation(5), 5), (Element::rotation(10), 2)]);
            }
            other => panic!("expected rigid, got {other:?}"),
        }
    }

    #[test]
    fn swaps_find_a_selection() {
        // blocks with products y^5 ×5, y^10 ×2, but mixable terms
        let f = fam();
        let g = *f.group();
        let mut blocks = vec![block(&g, &[(1, 5)]); 4];
        blocks.push(block(&g, &[(1, 3), (6, 1), (11, 1)]));
        blocks.push(block(&g, &[(2, 5)]));
        blocks.push(block(&g, &[(2, 5)]));
        let out = replay_swap_argument(&f, &blocks, 10_000, &SearchConfig::default()).unwrap();
        let SwapOutcome::Selection { blocks: nb, sigma, chosen, .. } = out else {
            panic!("expected a selection");
        };
        let word: Vec<Element> = chosen.iter().map(|&i| sigma[i]).collect();
        assert!(g.product(word.iter()).is_identity());
        let total = |bs: &[Sequence]| bs.iter().fold(Sequence::empty(&g), |a, b| a.concat(b).unwrap());
        assert_eq!(total(&nb), total(&blocks));
    }

    #[test]
    fn rejects_bad_blocks() {
        let f = fam();
        let g = *f.group();
        let blocks = vec![block(&g, &[(1, 4), (2, 1)]); 7];
        assert!(replay_swap_argument(&f, &blocks, 100, &SearchConfig::default()).is_err());
    }
}
