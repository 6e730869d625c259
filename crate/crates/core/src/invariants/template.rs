//! Known shapes of extremal sequences, matched up to the choice of
//! generators.
//!
//! Coordinates are taken with respect to a [`Presentation`] `(τ, α)`. The
//! element `τ^e α^t` has coordinates `(e, t)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::group::{gcd, presentations, Element, GroupKind, GroupSpec, Presentation};
use crate::sequence::Sequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TemplateKind {
    /// `(α^{t₁})^[2n−1] · (α^{t₂})^[n−1]` over `C_n`, `gcd(t₁ − t₂, n) = 1`.
    CyclicPair,
    /// `(α^{t₁})^[2n−1] · (α^{t₂})^[n−1] · (τα^{t₃})`, `gcd(t₁ − t₂, n) = 1`.
    PairWithReflection,
    /// `1^[5] · τ · τα · τα²` over `D₆`.
    DihedralSpecial,
}

impl TemplateKind {
    pub const ALL: [TemplateKind; 3] = [
        TemplateKind::CyclicPair,
        TemplateKind::PairWithReflection,
        TemplateKind::DihedralSpecial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TemplateKind::CyclicPair => "cyclic-pair",
            TemplateKind::PairWithReflection => "pair-with-reflection",
            TemplateKind::DihedralSpecial => "dihedral-special",
        }
    }

    pub fn shape(self) -> &'static str {
        match self {
            TemplateKind::CyclicPair => "(a^t1)^[2n-1] (a^t2)^[n-1], gcd(t1-t2,n)=1",
            TemplateKind::PairWithReflection => "(a^t1)^[2n-1] (a^t2)^[n-1] (t*a^t3), gcd(t1-t2,n)=1",
            TemplateKind::DihedralSpecial => "1^[5] t (t*a) (t*a^2)",
        }
    }

    /// Whether the template is defined for `g` at all.
    pub fn applies_to(self, g: &GroupSpec) -> bool {
        match self {
            TemplateKind::CyclicPair => g.kind() == GroupKind::Cyclic && g.n() >= 2,
            TemplateKind::PairWithReflection => g.kind() == GroupKind::Metacyclic,
            TemplateKind::DihedralSpecial => *g == GroupSpec::metacyclic(3, 2).expect("D6"),
        }
    }

    /// Length of the template's sequences over `g`.
    pub fn length(self, g: &GroupSpec) -> usize {
        let n = g.n() as usize;
        match self {
            TemplateKind::CyclicPair => 3 * n - 2,
            TemplateKind::PairWithReflection => 3 * n - 1,
            TemplateKind::DihedralSpecial => 8,
        }
    }
}

impl fmt::Display for TemplateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateMatch {
    pub kind: TemplateKind,
    pub presentation: Presentation,
    /// `t₁, t₂[, t₃]`; empty for [`TemplateKind::DihedralSpecial`].
    pub params: Vec<u32>,
}

impl fmt::Display for TemplateMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "template={} alpha={}", self.kind, self.presentation.alpha)?;
        if let Some(tau) = self.presentation.tau {
            write!(f, " tau={tau}")?;
        }
        for (i, t) in self.params.iter().enumerate() {
            write!(f, " t{}={t}", i + 1)?;
        }
        Ok(())
    }
}

/// `element ↦ (e, t)` for a presentation.
fn coordinates(g: &GroupSpec, p: &Presentation) -> BTreeMap<Element, (u8, u32)> {
    let eps_range: &[u8] = if p.tau.is_some() { &[0, 1] } else { &[0] };
    let mut out = BTreeMap::new();
    for &e in eps_range {
        for t in 0..g.n() {
            out.insert(p.word(g, e, t), (e, t));
        }
    }
    out
}

fn match_with(s: &Sequence, kind: TemplateKind, p: &Presentation) -> Option<TemplateMatch> {
    let g = s.group();
    let n = g.n();
    if !kind.applies_to(g) || s.len() != kind.length(g) {
        return None;
    }
    let coords = coordinates(g, p);
    let found = |params: Vec<u32>| {
        Some(TemplateMatch {
            kind,
            presentation: *p,
            params,
        })
    };
    let rotation_pair = |terms: &[(Element, u32)]| -> Option<(u32, u32)> {
        let [(a, ca), (b, cb)] = terms else { return None };
        let (ea, ta) = coords[a];
        let (eb, tb) = coords[b];
        if ea != 0 || eb != 0 {
            return None;
        }
        let (t1, t2) = match (*ca, *cb) {
            (c1, c2) if c1 == 2 * n - 1 && c2 == n - 1 => (ta, tb),
            (c2, c1) if c1 == 2 * n - 1 && c2 == n - 1 => (tb, ta),
            _ => return None,
        };
        let diff = (t1 + n - t2) % n;
        (gcd(diff as u64, n as u64) == 1).then_some((t1, t2))
    };
    let support: Vec<(Element, u32)> = s.support().collect();
    match kind {
        TemplateKind::CyclicPair => {
            let (t1, t2) = rotation_pair(&support)?;
            found(vec![t1, t2])
        }
        TemplateKind::PairWithReflection => {
            let (refl, rot): (Vec<_>, Vec<_>) = support.iter().partition(|(u, _)| coords[u].0 == 1);
            let [(r, 1)] = refl.as_slice() else { return None };
            let (t1, t2) = rotation_pair(&rot)?;
            found(vec![t1, t2, coords[r].1])
        }
        TemplateKind::DihedralSpecial => {
            let expected: BTreeMap<(u8, u32), u32> =
                BTreeMap::from([((0, 0), 5), ((1, 0), 1), ((1, 1), 1), ((1, 2), 1)]);
            let got: BTreeMap<(u8, u32), u32> = support.iter().map(|(u, c)| (coords[u], *c)).collect();
            (got == expected).then(|| found(vec![])).flatten()
        }
    }
}

/// The first `(presentation, template)` match in canonical order.
pub fn check_template(s: &Sequence) -> Option<TemplateMatch> {
    let g = s.group();
    if !TemplateKind::ALL.iter().any(|k| k.applies_to(g) && k.length(g) == s.len()) {
        return None;
    }
    for p in presentations(g) {
        for kind in TemplateKind::ALL {
            if let Some(m) = match_with(s, kind, &p) {
                return Some(m);
            }
        }
    }
    None
}

/// Every sequence of the given template over `g`, across all presentations
/// and parameters, sorted by canonical key.
pub fn expand_template(g: &GroupSpec, kind: TemplateKind) -> Vec<Sequence> {
    if !kind.applies_to(g) {
        return Vec::new();
    }
    let n = g.n();
    let mut out: BTreeMap<Vec<u8>, Sequence> = BTreeMap::new();
    let mut add = |s: Sequence| {
        out.insert(s.canonical_key(), s);
    };
    for p in presentations(g) {
        match kind {
            TemplateKind::CyclicPair | TemplateKind::PairWithReflection => {
                for t1 in 0..n {
                    for t2 in 0..n {
                        if gcd(((t1 + n - t2) % n) as u64, n as u64) != 1 {
                            continue;
                        }
                        let base = [(p.word(g, 0, t1), 2 * n - 1), (p.word(g, 0, t2), n - 1)];
                        if kind == TemplateKind::CyclicPair {
                            add(Sequence::from_counts(g, base).expect("template terms lie in g"));
                        } else {
                            for t3 in 0..n {
                                let mut s = Sequence::from_counts(g, base).expect("template terms lie in g");
                                s.push(p.word(g, 1, t3), 1).expect("template terms lie in g");
                                add(s);
                            }
                        }
                    }
                }
            }
            TemplateKind::DihedralSpecial => {
                let terms = [(g.identity(), 5), (p.word(g, 1, 0), 1), (p.word(g, 1, 1), 1), (p.word(g, 1, 2), 1)];
                add(Sequence::from_counts(g, terms).expect("template terms lie in g"));
            }
        }
    }
    out.into_values().collect()
}

/// Canonical keys of [`expand_template`].
pub fn template_keys(g: &GroupSpec, kind: TemplateKind) -> BTreeSet<Vec<u8>> {
    expand_template(g, kind).iter().map(Sequence::canonical_key).collect()
}
