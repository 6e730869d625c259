//! Stabilizers of subsets, and the DeVos–Goddyn–Mohar lower bound
//!
//! `|Π_n(S)| ≥ (Σ_{ḡ ∈ G/H} min{n, v_ḡ(φ_H(S))} − n + 1)·|H|`, with `H` the
//! stabilizer of `Π_n(S)`, checked on concrete abelian instances.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, Homomorphism, Subgroup};
use crate::product::{self, SearchConfig};
use crate::sequence::Sequence;

/// `H(A) = {g : gA = A}`.
pub fn stabilizer(members: &BTreeSet<Element>, g: &GroupSpec) -> Result<Subgroup> {
    if members.is_empty() {
        return Err(Error::Precondition("stabilizer of the empty set".into()));
    }
    if let Some(u) = members.iter().find(|&&u| !g.contains(u)) {
        return Err(Error::InvalidElement(format!("{u} in {g}")));
    }
    let h = Subgroup::stabilizer_of(g, members);
    assert_eq!(
        h.is_whole(),
        members.len() == g.order(),
        "H(A) = G exactly when A = G"
    );
    Ok(h)
}

#[derive(Clone, Debug)]
pub struct DgmReport {
    pub sequence: Sequence,
    pub n: usize,
    /// `|Π_n(S)|`
    pub lhs: usize,
    pub stabilizer: Subgroup,
    /// Unclamped; nonpositive values mean the bound is vacuous.
    pub rhs: i64,
    pub holds: bool,
}

impl DgmReport {
    pub fn record(&self) -> String {
        format!(
            "dgm n={} lhs={} stabilizer={} stabilizer_order={} rhs={} holds={}",
            self.n,
            self.lhs,
            self.stabilizer.describe(),
            self.stabilizer.order(),
            self.rhs,
            self.holds
        )
    }
}

/// Multiplicities of `φ_H(S)` indexed by coset.
fn coset_counts(s: &Sequence, h: &Subgroup) -> Result<Vec<u32>> {
    let g = s.group();
    if h.reflection().is_none() {
        let image = s.map(&Homomorphism::quotient(g, h.rotation_step())?)?;
        return Ok(image.support().map(|(_, c)| c).collect());
    }
    let mut counts: BTreeMap<Element, u32> = BTreeMap::new();
    for (u, c) in s.support() {
        *counts.entry(h.coset_rep(u)).or_insert(0) += c;
    }
    Ok(counts.into_values().collect())
}

pub fn dgm_check(s: &Sequence, n: usize, cfg: &SearchConfig) -> Result<DgmReport> {
    let g = s.group();
    if !g.is_abelian() {
        return Err(Error::NonAbelian(g.to_string()));
    }
    if n == 0 || n > s.len() {
        return Err(Error::Precondition(format!(
            "need 1 <= n <= |S| = {}, got n={n}",
            s.len()
        )));
    }
    let members = product::subproduct_members(s, n, cfg)?;
    let h = stabilizer(&members, g)?;
    let sum: i64 = coset_counts(s, &h)?
        .into_iter()
        .map(|c| (c as i64).min(n as i64))
        .sum();
    let rhs = (sum - n as i64 + 1) * h.order() as i64;
    let lhs = members.len();
    Ok(DgmReport {
        sequence: s.clone(),
        n,
        lhs,
        stabilizer: h,
        rhs,
        holds: lhs as i64 >= rhs,
    })
}

#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub trials: u64,
    pub passed: u64,
    pub violations: Vec<DgmReport>,
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dgm-fuzz trials={} passed={} violations={}",
            self.trials,
            self.passed,
            self.violations.len()
        )
    }
}

/// One random instance: `C_m` with `m ≤ max_order`, `1 ≤ |S| ≤ max_len`,
/// `1 ≤ n ≤ |S|`. Trial `i` draws from its own stream of `seed`.
pub fn random_instance(seed: u64, trial: u64, max_order: u32, max_len: usize) -> (Sequence, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let m = rng.random_range(1..=max_order.max(1));
    let g = GroupSpec::cyclic(m).expect("m >= 1");
    let len = rng.random_range(1..=max_len.max(1));
    let terms: Vec<Element> = (0..len).map(|_| Element::rotation(rng.random_range(0..m))).collect();
    let n = rng.random_range(1..=len);
    (Sequence::from_elements(&g, terms).expect("terms lie in C_m"), n)
}

pub fn fuzz(trials: u64, max_order: u32, max_len: usize, seed: u64, jobs: usize) -> Result<FuzzReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let results: Vec<Result<DgmReport>> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let (s, n) = random_instance(seed, t, max_order, max_len);
                dgm_check(&s, n, &SearchConfig::default())
            })
            .collect()
    });
    let mut report = FuzzReport {
        trials,
        passed: 0,
        violations: Vec::new(),
    };
    for r in results {
        let r = r?;
        if r.holds {
            report.passed += 1;
        } else {
            report.violations.push(r);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stabilizer_examples() {
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        assert!(stabilizer(&BTreeSet::from([Element::IDENTITY]), &g).unwrap().is_trivial());
        assert!(stabilizer(&g.elements().collect(), &g).unwrap().is_whole());
        let sub: BTreeSet<Element> = Subgroup::rotations(&g, 3).unwrap().elements().collect();
        let h = stabilizer(&sub, &g).unwrap();
        assert_eq!(h.order(), 5);
        assert_eq!(h.describe(), "<y^3>");
        assert!(stabilizer(&BTreeSet::new(), &g).is_err());
    }

    #[test]
    fn dgm_examples() {
        let cfg = SearchConfig::default();
        let c7 = GroupSpec::cyclic(7).unwrap();
        let s = Sequence::from_counts(&c7, [(Element::rotation(1), 7)]).unwrap();
        let r = dgm_check(&s, 7, &cfg).unwrap();
        assert_eq!(r.lhs, 1);
        assert!(r.holds && r.rhs <= 1);

        let ones = Sequence::from_counts(&c7, [(Element::IDENTITY, 5)]).unwrap();
        for n in 1..=5 {
            let r = dgm_check(&ones, n, &cfg).unwrap();
            assert_eq!(r.lhs, 1);
            assert!(r.holds);
        }
        assert!(dgm_check(&ones, 0, &cfg).is_err());

        let d6 = GroupSpec::metacyclic(3, 2).unwrap();
        let t = Sequence::from_elements(&d6, [Element::IDENTITY]).unwrap();
        assert!(matches!(dgm_check(&t, 1, &cfg), Err(Error::NonAbelian(_))));
    }

    #[test]
    fn bound_is_tight_for_arithmetic_runs() {
        // 0^[3] 1^[3] over C_12 with n = 3: Π_3 = {0,1,2,3}, H trivial,
        // rhs = (3 + 3 − 3 + 1)·1 = 4
        let g = GroupSpec::cyclic(12).unwrap();
        let s = Sequence::from_counts(&g, [(Element::IDENTITY, 3), (Element::rotation(1), 3)]).unwrap();
        let r = dgm_check(&s, 3, &SearchConfig::default()).unwrap();
        assert_eq!((r.lhs, r.rhs), (4, 4));
    }

    #[test]
    fn reflection_stabilizers_use_cosets() {
        // C_3 × C_2 written as metacyclic n=3 s=1
        let g = GroupSpec::metacyclic(3, 1).unwrap();
        let s = Sequence::from_counts(&g, [(Element::reflection(0), 2), (Element::IDENTITY, 2)]).unwrap();
        let r = dgm_check(&s, 1, &SearchConfig::default()).unwrap();
        assert_eq!(r.stabilizer.order(), 2);
        assert!(r.holds);
    }

    #[test]
    fn fuzz_is_deterministic_across_jobs() {
        let a = fuzz(300, 30, 20, 7, 1).unwrap();
        let b = fuzz(300, 30, 20, 7, 4).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a.passed, 300);
        assert_eq!(random_instance(7, 3, 30, 20).0, random_instance(7, 3, 30, 20).0);
    }
}
