//! Seeded reproduction suites. Each criterion returns a deterministic
//! record; elapsed time is kept separately so reports can be diffed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::additive;
use crate::error::{Error, Result};
use crate::group::{gcd, Element, GroupSpec};
use crate::invariants::{
    check_template, classify_extremal, davenport_constant, free_sequences, gao_constant, template::template_keys,
    EnumOptions, Freeness, TemplateKind,
};
use crate::oracle;
use crate::product::{self, verify_witness, SearchConfig, Strategy};
use crate::sequence::Sequence;
use crate::theorem::{
    find_big_product_one, search_big_product_one, singleton_pi_structure, Clause, FamilyGroup, PipelineOptions, Rung,
    SearchOutcome,
};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Cyclic,
    D6,
    MainTheorem,
    Dgm,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Cyclic => &[1, 2],
            Suite::D6 => &[1, 3, 10],
            Suite::MainTheorem => &[4, 5, 6, 9],
            Suite::Dgm => &[7, 8],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cyclic" => Suite::Cyclic,
            "d6" => Suite::D6,
            "main-theorem" => Suite::MainTheorem,
            "dgm" => Suite::Dgm,
            "all" => Suite::All,
            other => {
                return Err(Error::Precondition(format!(
                    "unknown suite {other:?} (cyclic, d6, main-theorem, dgm, all)"
                )))
            }
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReproConfig {
    pub seed: u64,
    pub jobs: usize,
}

impl Default for ReproConfig {
    fn default() -> Self {
        ReproConfig {
            seed: DEFAULT_SEED,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    /// Deterministic record (no timing).
    pub fn record(&self) -> String {
        format!(
            "criterion={} name={} result={} {}",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.record())
    }
}

pub fn criterion_name(id: u8) -> &'static str {
    match id {
        1 => "gao-constants",
        2 => "cyclic-inverse",
        3 => "d6-inverse",
        4 => "extremal-lower-bound",
        5 => "witness-sampling",
        6 => "inverse-sampling",
        7 => "dgm-fuzz",
        8 => "oracle-equivalence",
        9 => "singleton-structure",
        10 => "gao-davenport-identity",
        _ => "unknown",
    }
}

pub fn run_criterion(id: u8, cfg: &ReproConfig) -> Result<Outcome> {
    let start = Instant::now();
    let (pass, detail) = match id {
        1 => gao_constants(cfg)?,
        2 => cyclic_inverse(cfg)?,
        3 => d6_inverse(cfg)?,
        4 => extremal_lower_bound(cfg)?,
        5 => witness_sampling(cfg)?,
        6 => inverse_sampling(cfg)?,
        7 => dgm_fuzz(cfg)?,
        8 => oracle_equivalence(cfg)?,
        9 => singleton_structure(cfg)?,
        10 => gao_davenport(cfg)?,
        other => return Err(Error::Precondition(format!("no criterion {other}"))),
    };
    Ok(Outcome {
        id,
        name: criterion_name(id),
        pass,
        detail,
        elapsed: start.elapsed(),
    })
}

pub fn run_suite(suite: Suite, cfg: &ReproConfig) -> Result<Vec<Outcome>> {
    suite.criteria().iter().map(|&id| run_criterion(id, cfg)).collect()
}

fn enum_opts(cfg: &ReproConfig) -> EnumOptions {
    EnumOptions {
        jobs: cfg.jobs,
        ..EnumOptions::default()
    }
}

fn d6() -> GroupSpec {
    GroupSpec::metacyclic(3, 2).expect("D6")
}

fn pool(cfg: &ReproConfig) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))
}

/// Independent stream per (criterion, trial).
fn rng(cfg: &ReproConfig, salt: u64, trial: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    r.set_stream(trial);
    r
}

fn random_element(g: &GroupSpec, r: &mut ChaCha8Rng) -> Element {
    g.element_at(r.random_range(0..g.order()))
}

fn gao_constants(cfg: &ReproConfig) -> Result<(bool, String)> {
    let opts = enum_opts(cfg);
    let mut values = Vec::new();
    let mut pass = true;
    for n in 2..=6u32 {
        let v = gao_constant(&GroupSpec::cyclic(n)?, 4 * n as usize, &opts)?.value;
        pass &= v == (2 * n - 1) as usize;
        values.push(format!("C{n}={v}"));
    }
    let v = gao_constant(&d6(), 20, &opts)?.value;
    pass &= v == 9;
    values.push(format!("D6={v}"));
    Ok((pass, format!("values={}", values.join(","))))
}

fn cyclic_inverse(cfg: &ReproConfig) -> Result<(bool, String)> {
    let opts = enum_opts(cfg);
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 3..=5u32 {
        let g = GroupSpec::cyclic(n)?;
        let len = 3 * n as usize - 2;
        let free = free_sequences(&g, len, Freeness::Length(2 * n as usize), &opts)?;
        let keys: std::collections::BTreeSet<Vec<u8>> = free.iter().map(Sequence::canonical_key).collect();
        let equal = keys == template_keys(&g, TemplateKind::CyclicPair);
        pass &= equal;
        parts.push(format!("C{n}:free={}:equal={equal}", free.len()));
    }
    Ok((pass, parts.join(" ")))
}

fn d6_inverse(cfg: &ReproConfig) -> Result<(bool, String)> {
    let c = classify_extremal(&d6(), 8, 6, &enum_opts(cfg))?;
    let kinds: Vec<TemplateKind> = c.families.iter().map(|f| f.kind).collect();
    let pass = kinds == [TemplateKind::PairWithReflection, TemplateKind::DihedralSpecial]
        && c.families.iter().all(|f| f.complete)
        && c.unmatched.is_empty();
    let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    Ok((
        pass,
        format!("free={} families={} unmatched={}", c.free.len(), names.join(","), c.unmatched.len()),
    ))
}

/// Parameter triples drawn in a seeded order, split by whether
/// `gcd(t₁ − t₂, n) = 1`.
fn parameter_choices(cfg: &ReproConfig, n: u32, want: usize) -> (Vec<[u32; 3]>, Vec<[u32; 3]>) {
    let mut r = rng(cfg, 4, n as u64);
    let (mut unit, mut other) = (Vec::new(), Vec::new());
    let mut seen = std::collections::BTreeSet::new();
    while unit.len() < want || other.len() < want {
        let t = [r.random_range(0..n), r.random_range(0..n), r.random_range(0..n)];
        if t[0] == t[1] || !seen.insert(t) {
            continue;
        }
        let bucket = if gcd(((t[0] + n - t[1]) % n) as u64, n as u64) == 1 {
            &mut unit
        } else {
            &mut other
        };
        if bucket.len() < want {
            bucket.push(t);
        }
    }
    (unit, other)
}

fn extremal_lower_bound(cfg: &ReproConfig) -> Result<(bool, String)> {
    const WANT: usize = 20;
    let search = SearchConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, s) in [(15u32, 11i64), (21, 8), (21, 13)] {
        let g = GroupSpec::metacyclic(n, s)?;
        let n2 = n / 3;
        let k = 6 * n2 as usize;
        let (unit, other) = parameter_choices(cfg, n, WANT);
        let build = |t: [u32; 3]| {
            Sequence::from_counts(
                &g,
                [
                    (Element::rotation(t[0]), 6 * n2 - 1),
                    (Element::rotation(t[1]), 3 * n2 - 1),
                    (Element::reflection(t[2]), 1),
                ],
            )
        };
        let mut free = 0;
        for &t in &unit {
            if product::has_product_one(&build(t)?, k, &search)?.is_none() {
                free += 1;
            }
        }
        let mut witnessed = 0;
        for &t in &other {
            let seq = build(t)?;
            if let Some(w) = product::has_product_one(&seq, k, &search)? {
                if verify_witness(&seq, &w, g.identity()).is_ok() {
                    witnessed += 1;
                }
            }
        }
        pass &= free == unit.len() && witnessed == other.len();
        parts.push(format!("n={n}:s={s}:free={free}/{}:witnessed={witnessed}/{}", unit.len(), other.len()));
    }
    Ok((pass, parts.join(" ")))
}

fn family_15() -> FamilyGroup {
    FamilyGroup::new(&GroupSpec::metacyclic(15, 11).expect("valid")).expect("in the family")
}

/// The extremal shape with `replace` random terms swapped for random
/// elements.
fn near_template(fam: &FamilyGroup, r: &mut ChaCha8Rng, replace: usize) -> Result<Sequence> {
    let g = fam.group();
    let n = g.n();
    let base = fam.extremal(r.random_range(0..n), r.random_range(0..n), r.random_range(0..n));
    let mut terms: Vec<Element> = base.terms().collect();
    for _ in 0..replace {
        let i = r.random_range(0..terms.len());
        terms[i] = random_element(g, r);
    }
    Sequence::from_elements(g, terms)
}

fn random_sequence(g: &GroupSpec, r: &mut ChaCha8Rng, len: usize) -> Result<Sequence> {
    Sequence::from_elements(g, (0..len).map(|_| random_element(g, r)).collect::<Vec<_>>())
}

fn rung_tally(rungs: impl IntoIterator<Item = Rung>) -> String {
    let mut t: BTreeMap<&str, usize> = Rung::ALL.iter().map(|r| (r.name(), 0)).collect();
    for r in rungs {
        *t.get_mut(r.name()).expect("known rung") += 1;
    }
    t.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn witness_sampling(cfg: &ReproConfig) -> Result<(bool, String)> {
    const TRIALS: u64 = 1000;
    const ADVERSARIAL: u64 = 100;
    let fam = family_15();
    let g = *fam.group();
    let len = 9 * fam.block();
    let opts = PipelineOptions::default();
    let results: Vec<Result<Option<Rung>>> = pool(cfg)?.install(|| {
        (0..TRIALS)
            .into_par_iter()
            .map(|t| {
                let mut r = rng(cfg, 5, t);
                let s = if t < ADVERSARIAL {
                    let replace = r.random_range(0..=3);
                    let mut s = near_template(&fam, &mut r, replace)?;
                    s.push(random_element(&g, &mut r), 1)?;
                    s
                } else {
                    random_sequence(&g, &mut r, len)?
                };
                match find_big_product_one(&fam, &s, &opts) {
                    Ok(w) => Ok(verify_witness(&s, &w.witness, g.identity()).is_ok().then_some(w.rung)),
                    Err(Error::ClaimViolation(_)) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let ok = results.iter().flatten().count();
    Ok((
        ok as u64 == TRIALS,
        format!(
            "trials={TRIALS} adversarial={ADVERSARIAL} verified={ok} rungs={}",
            rung_tally(results.into_iter().flatten())
        ),
    ))
}

enum InverseResult {
    Witness(Rung),
    FreeMatching,
    /// A free sequence outside every template.
    Finding(Sequence),
}

fn inverse_sampling(cfg: &ReproConfig) -> Result<(bool, String)> {
    const TRIALS: u64 = 1000;
    const NEAR: u64 = 200;
    let fam = family_15();
    let g = *fam.group();
    let len = 9 * fam.block() - 1;
    let opts = PipelineOptions::default();
    let results: Vec<Result<InverseResult>> = pool(cfg)?.install(|| {
        (0..TRIALS)
            .into_par_iter()
            .map(|t| {
                let mut r = rng(cfg, 6, t);
                let s = loop {
                    let s = if t < NEAR {
                        let replace = r.random_range(1..=3);
                        near_template(&fam, &mut r, replace)?
                    } else {
                        random_sequence(&g, &mut r, len)?
                    };
                    if check_template(&s).is_none() {
                        break s;
                    }
                };
                Ok(match search_big_product_one(&fam, &s, &opts)? {
                    SearchOutcome::Witness(w) => {
                        if verify_witness(&s, &w.witness, g.identity()).is_err() {
                            return Err(Error::ClaimViolation("rejected witness".into()));
                        }
                        InverseResult::Witness(w.rung)
                    }
                    SearchOutcome::Free { template: Some(_), .. } => InverseResult::FreeMatching,
                    SearchOutcome::Free { template: None, .. } | SearchOutcome::Undecided { .. } => {
                        InverseResult::Finding(s)
                    }
                })
            })
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rungs = Vec::new();
    let mut matching = 0;
    let mut findings = Vec::new();
    for r in results {
        match r {
            InverseResult::Witness(rung) => rungs.push(rung),
            InverseResult::FreeMatching => matching += 1,
            InverseResult::Finding(s) => findings.push(s),
        }
    }
    let mut detail = format!(
        "trials={TRIALS} near_template={NEAR} witnesses={} free_matching={matching} findings={} rungs={}",
        rungs.len(),
        findings.len(),
        rung_tally(rungs.iter().copied())
    );
    for s in &findings {
        detail.push_str(&format!(" finding=\"{s}\""));
    }
    Ok((findings.is_empty() && rungs.len() as u64 == TRIALS, detail))
}

fn dgm_fuzz(cfg: &ReproConfig) -> Result<(bool, String)> {
    let report = additive::fuzz(10_000, 30, 20, cfg.seed, cfg.jobs)?;
    let mut detail = report.to_string().replacen("dgm-fuzz ", "", 1);
    for v in &report.violations {
        detail.push_str(&format!(" violation=\"{}\"", v.sequence));
    }
    Ok((report.violations.is_empty(), detail))
}

/// Groups of order at most 10.
fn small_groups() -> Vec<GroupSpec> {
    let mut out: Vec<GroupSpec> = (1..=10).map(|n| GroupSpec::cyclic(n).expect("n >= 1")).collect();
    for n in 1..=5u32 {
        for s in 0..n.max(1) as i64 {
            if let Ok(g) = GroupSpec::metacyclic(n, s) {
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
    }
    out
}

fn oracle_equivalence(cfg: &ReproConfig) -> Result<(bool, String)> {
    const TRIALS: u64 = 1000;
    let groups = small_groups();
    let results: Vec<Result<bool>> = pool(cfg)?.install(|| {
        (0..TRIALS)
            .into_par_iter()
            .map(|t| {
                let mut r = rng(cfg, 8, t);
                let g = groups[r.random_range(0..groups.len())];
                let len = r.random_range(1..=9);
                let s = random_sequence(&g, &mut r, len)?;
                let n = r.random_range(1..=len);
                let expected = format!("{:?}", oracle::ordered_products(&s, n));
                let mut same = true;
                for strategy in [Strategy::Auto, Strategy::StateSpace, Strategy::TwistDp] {
                    let got = product::subproduct_members(&s, n, &SearchConfig::with_strategy(strategy))?;
                    same &= format!("{got:?}") == expected;
                }
                Ok(same)
            })
            .collect()
    });
    let agree = results.into_iter().collect::<Result<Vec<_>>>()?.iter().filter(|&&b| b).count();
    Ok((
        agree as u64 == TRIALS,
        format!("trials={TRIALS} groups={} agree={agree}", groups.len()),
    ))
}

/// A length-`n₂` sequence biased toward single-product shapes: reflections
/// with congruent exponents mod 3 and rotations in `⟨y³⟩`, occasionally
/// perturbed.
fn structured_candidate(g: &GroupSpec, n2: u32, r: &mut ChaCha8Rng) -> Result<Sequence> {
    let n = g.n();
    let reflections = r.random_range(1..=n2);
    let residue = r.random_range(0..3);
    let mut terms = Vec::new();
    for i in 0..n2 {
        let a = 3 * r.random_range(0..n2);
        terms.push(if i < reflections {
            Element::reflection((a + residue) % n)
        } else {
            Element::rotation(a % n)
        });
    }
    if r.random_bool(0.2) {
        let i = r.random_range(0..terms.len());
        terms[i] = random_element(g, r);
    }
    Sequence::from_elements(g, terms)
}

fn singleton_structure(cfg: &ReproConfig) -> Result<(bool, String)> {
    const TRIALS: u64 = 1000;
    let g = GroupSpec::metacyclic(15, 11)?;
    let f = g.factorize()?;
    let search = SearchConfig::default();
    let results: Vec<Result<(Clause, bool)>> = pool(cfg)?.install(|| {
        (0..TRIALS)
            .into_par_iter()
            .map(|t| {
                let mut r = rng(cfg, 9, t);
                loop {
                    let s = structured_candidate(&g, f.n2, &mut r)?;
                    if product::pi_set(&s, &search)?.len() != 1 {
                        continue;
                    }
                    let report = singleton_pi_structure(&s, f, &search)?;
                    if report.clause != Clause::NotApplicable {
                        return Ok((report.clause, report.holds));
                    }
                }
            })
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let count = |c: Clause| results.iter().filter(|(k, _)| *k == c).count();
    let holds = results.iter().filter(|(_, h)| *h).count();
    let forced = count(Clause::ProductOneForced);
    let pattern = count(Clause::ReflectionPattern);
    Ok((
        holds as u64 == TRIALS && forced > 0 && pattern > 0,
        format!("trials={TRIALS} product_one_forced={forced} reflection_pattern={pattern} holds={holds}"),
    ))
}

fn gao_davenport(cfg: &ReproConfig) -> Result<(bool, String)> {
    let opts = enum_opts(cfg);
    let mut groups: Vec<(String, GroupSpec)> = (2..=6u32)
        .map(|n| (format!("C{n}"), GroupSpec::cyclic(n).expect("n >= 1")))
        .collect();
    groups.push(("D6".into(), d6()));
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, g) in groups {
        let e = gao_constant(&g, 4 * g.order(), &opts)?.value;
        let d = davenport_constant(&g, 2 * g.order(), &opts)?.value;
        let ok = e == d + g.order();
        pass &= ok;
        parts.push(format!("{name}:E={e}:d={d}:order={}", g.order()));
    }
    Ok((pass, parts.join(" ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("d6".parse::<Suite>().unwrap(), Suite::D6);
        assert_eq!("all".parse::<Suite>().unwrap().criteria().len(), 10);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn parameter_split_is_seeded() {
        let cfg = ReproConfig::default();
        let (a, b) = parameter_choices(&cfg, 15, 20);
        assert_eq!((a.len(), b.len()), (20, 20));
        assert_eq!(parameter_choices(&cfg, 15, 20), (a, b));
    }

    #[test]
    fn small_group_list() {
        let gs = small_groups();
        assert!(gs.iter().all(|g| g.order() <= 10));
        assert!(gs.contains(&GroupSpec::metacyclic(5, 4).unwrap()));
        assert!(gs.contains(&GroupSpec::metacyclic(3, 2).unwrap()));
    }

    #[test]
    fn d6_suite_passes() {
        let out = run_suite(Suite::D6, &ReproConfig::default()).unwrap();
        assert!(out.iter().all(|o| o.pass), "{out:?}");
    }
}
