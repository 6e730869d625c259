//! Exact `E(G)` and `d(G)` by exhaustive enumeration, and classification of
//! extremal sequences up to automorphism.

pub mod enumerate;
pub mod template;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::product::{self, SearchConfig};
use crate::sequence::Sequence;

use enumerate::{automorphism_permutations, check_feasible, for_each_multiset, orbit, sequence_of};
pub use template::{check_template, expand_template, TemplateKind, TemplateMatch};

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub jobs: usize,
    /// Refuse enumerations expected to visit more orbit representatives.
    pub ceiling: f64,
    /// Enumerate one representative per automorphism orbit.
    pub prune: bool,
    pub search: SearchConfig,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            jobs: 1,
            ceiling: enumerate::DEFAULT_CEILING,
            prune: true,
            search: SearchConfig::default(),
        }
    }
}

/// What it means for a sequence to be free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Freeness {
    /// No product-one subsequence of this length.
    Length(usize),
    /// No product-one subsequence of any positive length.
    AnyLength,
}

pub fn is_free(s: &Sequence, freeness: Freeness, cfg: &SearchConfig) -> Result<bool> {
    match freeness {
        Freeness::Length(k) if k > s.len() => Ok(true),
        Freeness::Length(k) => Ok(product::has_product_one(s, k, cfg)?.is_none()),
        Freeness::AnyLength => {
            for k in 1..=s.len() {
                if product::has_product_one(s, k, cfg)?.is_some() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// All free sequences of the given length, full orbits, sorted by
/// canonical key.
pub fn free_sequences(g: &GroupSpec, length: usize, freeness: Freeness, opts: &EnumOptions) -> Result<Vec<Sequence>> {
    let perms = automorphism_permutations(g);
    let divisor = if opts.prune { perms.len() } else { 1 };
    check_feasible(g, length, divisor, opts.ceiling)?;
    let used: &[Vec<usize>] = if opts.prune { &perms } else { &[] };
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let reps = for_each_multiset(g.order(), length, used, opts.jobs, |v| {
        let s = sequence_of(g, v);
        match is_free(&s, freeness, &opts.search) {
            Ok(true) => Some(v.to_vec()),
            Ok(false) => None,
            Err(e) => {
                failure.lock().expect("no panics while locked").get_or_insert(e);
                None
            }
        }
    })?;
    if let Some(e) = failure.into_inner().expect("no panics while locked") {
        return Err(e);
    }
    let mut out: BTreeMap<Vec<u8>, Sequence> = BTreeMap::new();
    for rep in reps {
        let s = sequence_of(g, &rep);
        let members = if opts.prune { orbit(&s, &perms) } else { vec![s] };
        for m in members {
            out.insert(m.canonical_key(), m);
        }
    }
    Ok(out.into_values().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantKind {
    Gao,
    Davenport,
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantKind::Gao => "gao",
            ConstantKind::Davenport => "davenport",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConstantReport {
    pub group: GroupSpec,
    pub kind: ConstantKind,
    pub value: usize,
    /// Every free sequence of maximal length, sorted by canonical key.
    pub certificates: Vec<Sequence>,
}

impl ConstantReport {
    /// One summary record followed by one `seq` line per certificate.
    pub fn records(&self) -> Vec<String> {
        let mut out = vec![format!(
            "constant={} group=\"{}\" value={} extremal_count={}",
            self.kind,
            self.group,
            self.value,
            self.certificates.len()
        )];
        out.extend(self.certificates.iter().map(|s| s.to_string()));
        out
    }
}

/// `E(G)`: the least `ℓ` such that every sequence of length `ℓ` has a
/// product-one subsequence of length `|G|`.
pub fn gao_constant(g: &GroupSpec, length_cap: usize, opts: &EnumOptions) -> Result<ConstantReport> {
    let k = g.order();
    let mut previous = free_sequences(g, k - 1, Freeness::Length(k), opts)?;
    for length in k..=length_cap {
        let free = free_sequences(g, length, Freeness::Length(k), opts)?;
        if free.is_empty() {
            return Ok(ConstantReport {
                group: *g,
                kind: ConstantKind::Gao,
                value: length,
                certificates: previous,
            });
        }
        previous = free;
    }
    Err(Error::LengthCapExceeded { cap: length_cap })
}

/// `d(G)`: the maximal length of a sequence without product-one
/// subsequences.
pub fn davenport_constant(g: &GroupSpec, length_cap: usize, opts: &EnumOptions) -> Result<ConstantReport> {
    let mut previous = vec![Sequence::empty(g)];
    for length in 1..=length_cap + 1 {
        let free = free_sequences(g, length, Freeness::AnyLength, opts)?;
        if free.is_empty() {
            return Ok(ConstantReport {
                group: *g,
                kind: ConstantKind::Davenport,
                value: length - 1,
                certificates: previous,
            });
        }
        previous = free;
    }
    Err(Error::LengthCapExceeded { cap: length_cap })
}

/// One automorphism orbit of free sequences.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub representative: Sequence,
    pub members: Vec<Sequence>,
    pub template: Option<TemplateMatch>,
}

#[derive(Clone, Debug)]
pub struct ExtremalFamily {
    pub kind: TemplateKind,
    pub orbits: Vec<Orbit>,
    /// Whether the orbits cover every sequence of the template.
    pub complete: bool,
}

impl ExtremalFamily {
    pub fn size(&self) -> usize {
        self.orbits.iter().map(|o| o.members.len()).sum()
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub group: GroupSpec,
    pub length: usize,
    pub k: usize,
    pub free: Vec<Sequence>,
    pub families: Vec<ExtremalFamily>,
    /// Orbits that match no known template.
    pub unmatched: Vec<Orbit>,
}

impl Classification {
    pub fn records(&self) -> Vec<String> {
        let mut out = vec![format!(
            "classify group=\"{}\" length={} k={} free={} families={} unmatched={}",
            self.group,
            self.length,
            self.k,
            self.free.len(),
            self.families.len(),
            self.unmatched.len()
        )];
        for f in &self.families {
            out.push(format!(
                "family template={} shape=\"{}\" orbits={} sequences={} complete={}",
                f.kind,
                f.kind.shape(),
                f.orbits.len(),
                f.size(),
                f.complete
            ));
            for o in &f.orbits {
                let m = o.template.as_ref().expect("family orbits are matched");
                out.push(format!("orbit size={} {m} rep=\"{}\"", o.members.len(), o.representative));
            }
        }
        for o in &self.unmatched {
            out.push(format!("UNMATCHED orbit size={} rep=\"{}\"", o.members.len(), o.representative));
        }
        out
    }
}

/// Every `k`-product-one free sequence of the given length, grouped into
/// `Aut(G)`-orbits and matched against the known templates.
pub fn classify_extremal(g: &GroupSpec, length: usize, k: usize, opts: &EnumOptions) -> Result<Classification> {
    let free = free_sequences(g, length, Freeness::Length(k), opts)?;
    for s in &free {
        if !is_free(s, Freeness::Length(k), &opts.search)? {
            return Err(Error::ClaimViolation(format!("enumerated sequence is not free: {s}")));
        }
    }
    let perms = automorphism_permutations(g);
    let mut orbits: BTreeMap<Vec<u8>, Orbit> = BTreeMap::new();
    for s in &free {
        let members = orbit(s, &perms);
        let representative = members.first().expect("orbit contains s").clone();
        orbits.entry(representative.canonical_key()).or_insert_with(|| Orbit {
            template: check_template(&representative),
            representative,
            members,
        });
    }

    let mut by_kind: BTreeMap<TemplateKind, Vec<Orbit>> = BTreeMap::new();
    let mut unmatched = Vec::new();
    for o in orbits.into_values() {
        match &o.template {
            Some(m) => by_kind.entry(m.kind).or_default().push(o),
            None => unmatched.push(o),
        }
    }
    let families = by_kind
        .into_iter()
        .map(|(kind, orbits)| {
            let enumerated: BTreeSet<Vec<u8>> = orbits
                .iter()
                .flat_map(|o| o.members.iter().map(Sequence::canonical_key))
                .collect();
            ExtremalFamily {
                kind,
                complete: enumerated == template::template_keys(g, kind),
                orbits,
            }
        })
        .collect();
    Ok(Classification {
        group: *g,
        length,
        k,
        free,
        families,
        unmatched,
    })
}
