//! The groups `C_n ⋊_s C_2 = ⟨x, y : x² = yⁿ = 1, yx = xy^s⟩` and their
//! cyclic degenerations.
//!
//! Elements are kept in the normal form `x^eps y^a`, so equality of
//! [`Element`] values is equality in the group. Products use the law
//! `(e₁, a₁)·(e₂, a₂) = (e₁ ⊕ e₂, a₁·s^{e₂} + a₂ mod n)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// `x^eps y^a` in normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub eps: u8,
    pub a: u32,
}

impl Element {
    pub const IDENTITY: Element = Element { eps: 0, a: 0 };

    pub const fn rotation(a: u32) -> Self {
        Element { eps: 0, a }
    }

    pub const fn reflection(a: u32) -> Self {
        Element { eps: 1, a }
    }

    pub fn is_reflection(self) -> bool {
        self.eps == 1
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.eps, self.a) {
            (0, 0) => write!(f, "1"),
            (0, a) => write!(f, "y^{a}"),
            (_, 0) => write!(f, "x"),
            (_, a) => write!(f, "x*y^{a}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `C_n = ⟨y⟩`; no `x`.
    Cyclic,
    Metacyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    kind: GroupKind,
    n: u32,
    s: u32,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl GroupSpec {
    pub fn cyclic(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group needs n >= 1".into()));
        }
        Ok(GroupSpec {
            kind: GroupKind::Cyclic,
            n,
            s: 1 % n,
        })
    }

    /// Validated `C_n ⋊_s C_2` with `n >= 3`; `s` may be any integer and is
    /// reduced mod `n`.
    pub fn metacyclic(n: u32, s: i64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGroup(format!(
                "metacyclic group needs n >= 3, got n={n}"
            )));
        }
        let s = s.rem_euclid(n as i64) as u32;
        let sq = (s as u64 * s as u64) % n as u64;
        if sq != 1 % n as u64 {
            return Err(Error::InvalidGroup(format!(
                "s^2 = {s}^2 = {} ≢ 1 (mod {n})",
                s as u64 * s as u64
            )));
        }
        Ok(GroupSpec {
            kind: GroupKind::Metacyclic,
            n,
            s,
        })
    }

    /// `D_{2n}`, i.e. `s = -1`.
    pub fn dihedral(n: u32) -> Result<Self> {
        Self::metacyclic(n, -1)
    }

    /// Metacyclic group without the `n >= 3` guard; quotients and direct
    /// factors can be `C_2` (`n = 1`) or `C_2 × C_2` (`n = 2`).
    pub(crate) fn metacyclic_raw(n: u32, s: u32) -> Self {
        debug_assert!(n >= 1);
        let s = s % n;
        debug_assert_eq!((s as u64 * s as u64) % n as u64, 1 % n as u64);
        GroupSpec {
            kind: GroupKind::Metacyclic,
            n,
            s,
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_cyclic_kind(&self) -> bool {
        self.kind == GroupKind::Cyclic
    }

    pub fn order(&self) -> usize {
        match self.kind {
            GroupKind::Cyclic => self.n as usize,
            GroupKind::Metacyclic => 2 * self.n as usize,
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.kind == GroupKind::Cyclic || self.s == 1 % self.n
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn x(&self) -> Option<Element> {
        (self.kind == GroupKind::Metacyclic).then_some(Element::reflection(0))
    }

    pub fn y(&self) -> Element {
        Element::rotation(1 % self.n)
    }

    pub fn contains(&self, u: Element) -> bool {
        u.a < self.n
            && match self.kind {
                GroupKind::Cyclic => u.eps == 0,
                GroupKind::Metacyclic => u.eps <= 1,
            }
    }

    pub fn check(&self, u: Element) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(Error::InvalidElement(format!("{u} (eps={}, a={}) in {self}", u.eps, u.a)))
        }
    }

    /// `a · s^eps mod n`.
    #[inline]
    pub fn twist(&self, a: u32, eps: u8) -> u32 {
        if eps == 0 {
            a
        } else {
            ((a as u64 * self.s as u64) % self.n as u64) as u32
        }
    }

    #[inline]
    pub fn mul(&self, u: Element, v: Element) -> Element {
        let a = (self.twist(u.a, v.eps) as u64 + v.a as u64) % self.n as u64;
        Element {
            eps: u.eps ^ v.eps,
            a: a as u32,
        }
    }

    #[inline]
    pub fn inv(&self, u: Element) -> Element {
        let neg = |a: u32| (self.n - a % self.n) % self.n;
        if u.eps == 0 {
            Element::rotation(neg(u.a))
        } else {
            Element::reflection(neg(self.twist(u.a, 1)))
        }
    }

    pub fn pow(&self, u: Element, k: u64) -> Element {
        let mut acc = Element::IDENTITY;
        let mut base = u;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Left-to-right product of a word.
    pub fn product<'a>(&self, word: impl IntoIterator<Item = &'a Element>) -> Element {
        word.into_iter()
            .fold(Element::IDENTITY, |acc, &u| self.mul(acc, u))
    }

    pub fn order_of(&self, u: Element) -> usize {
        let mut k = 1;
        let mut p = u;
        while !p.is_identity() {
            p = self.mul(p, u);
            k += 1;
        }
        k
    }

    /// Dense index `eps·n + a`; agrees with the `(eps, a)` order.
    #[inline]
    pub fn index(&self, u: Element) -> usize {
        u.eps as usize * self.n as usize + u.a as usize
    }

    #[inline]
    pub fn element_at(&self, i: usize) -> Element {
        let n = self.n as usize;
        Element {
            eps: (i / n) as u8,
            a: (i % n) as u32,
        }
    }

    /// All elements in canonical `(eps, a)` order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + 'static {
        let g = *self;
        (0..g.order()).map(move |i| g.element_at(i))
    }

    /// Factorization `n = n₁n₂` with `s ≡ -1 (mod n₁)`,
    /// `s ≡ 1 (mod n₂)` and `gcd(n₁, n₂) ∈ {1, 2}`.
    pub fn factorize(&self) -> Result<Factorization> {
        if self.kind != GroupKind::Metacyclic {
            return Err(Error::Precondition(
                "factorization is defined for metacyclic groups".into(),
            ));
        }
        let (n, s) = (self.n as u64, self.s as u64);
        let ok = |n1: u64, n2: u64| {
            n1 * n2 == n
                && (s + 1) % n1 == 0
                && s % n2 == 1 % n2
                && gcd(n1, n2) <= 2
        };
        let found = if n % 2 == 1 {
            let pair = (gcd(n, s + 1), gcd(n, (s + n - 1) % n));
            ok(pair.0, pair.1).then_some(pair)
        } else {
            (1..=n)
                .rev()
                .filter(|d| n % d == 0)
                .map(|n1| (n1, n / n1))
                .find(|&(n1, n2)| ok(n1, n2))
        };
        let (n1, n2) = found.expect("every s with s^2 = 1 (mod n) admits a factorization");
        let f = Factorization {
            n1: n1 as u32,
            n2: n2 as u32,
        };
        assert_eq!(n1 * n2, n);
        assert_eq!((s + 1) % n1, 0);
        assert_eq!(s % n2, 1 % n2);
        assert!(gcd(n1, n2) <= 2);
        Ok(f)
    }

    /// Commutator subgroup `⟨y^{s-1}⟩`.
    pub fn commutator_subgroup(&self) -> Subgroup {
        let d = gcd(self.n as u64, ((self.s + self.n - 1) % self.n) as u64) as u32;
        Subgroup::rotations(self, d).expect("gcd divides n")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Cyclic => write!(f, "cyclic n={}", self.n),
            GroupKind::Metacyclic => write!(f, "metacyclic n={} s={}", self.n, self.s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub n1: u32,
    pub n2: u32,
}

impl Factorization {
    pub fn is_coprime(&self) -> bool {
        gcd(self.n1 as u64, self.n2 as u64) == 1
    }
}

/// A subgroup stored as a membership table together with its shape
/// `⟨y^d⟩` or `⟨x·y^c, y^d⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    group: GroupSpec,
    rotation_step: u32,
    reflection: Option<u32>,
    members: Vec<bool>,
}

impl Subgroup {
    /// `⟨y^d⟩` for `d | n`.
    pub fn rotations(g: &GroupSpec, d: u32) -> Result<Self> {
        if d == 0 || !g.n.is_multiple_of(d) {
            return Err(Error::Precondition(format!("d={d} does not divide n={}", g.n)));
        }
        let mut members = vec![false; g.order()];
        for a in (0..g.n).step_by(d as usize) {
            members[g.index(Element::rotation(a))] = true;
        }
        Ok(Subgroup {
            group: *g,
            rotation_step: d,
            reflection: None,
            members,
        })
    }

    pub fn trivial(g: &GroupSpec) -> Self {
        Self::rotations(g, g.n).expect("n divides n")
    }

    pub fn whole(g: &GroupSpec) -> Self {
        Self::from_members(g, g.elements()).expect("G is a subgroup of itself")
    }

    /// Subgroup generated by `gens`.
    pub fn generated_by(g: &GroupSpec, gens: &[Element]) -> Result<Self> {
        for &u in gens {
            g.check(u)?;
        }
        let mut members = vec![false; g.order()];
        members[g.index(Element::IDENTITY)] = true;
        let mut queue = VecDeque::from([Element::IDENTITY]);
        while let Some(u) = queue.pop_front() {
            for &v in gens {
                let w = g.mul(u, v);
                let i = g.index(w);
                if !members[i] {
                    members[i] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok(Self::from_table(g, members))
    }

    /// Validates closure; fails if `members` is not a subgroup.
    pub fn from_members(g: &GroupSpec, members: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut table = vec![false; g.order()];
        for u in members {
            g.check(u)?;
            table[g.index(u)] = true;
        }
        if !table[g.index(Element::IDENTITY)] {
            return Err(Error::Precondition("subset does not contain the identity".into()));
        }
        let list: Vec<Element> = g.elements().filter(|&u| table[g.index(u)]).collect();
        for &u in &list {
            for &v in &list {
                if !table[g.index(g.mul(u, v))] {
                    return Err(Error::Precondition(format!(
                        "subset not closed: {u}·{v} missing"
                    )));
                }
            }
        }
        Ok(Self::from_table(g, table))
    }

    fn from_table(g: &GroupSpec, members: Vec<bool>) -> Self {
        let rotation_step = (1..=g.n)
            .find(|&a| a == g.n || members[g.index(Element::rotation(a))])
            .unwrap_or(g.n);
        let reflection = match g.kind {
            GroupKind::Cyclic => None,
            GroupKind::Metacyclic => (0..g.n).find(|&c| members[g.index(Element::reflection(c))]),
        };
        Subgroup {
            group: *g,
            rotation_step,
            reflection,
            members,
        }
    }

    /// Full stabilizer `{g : gA = A}` of a subset under left multiplication.
    pub fn stabilizer_of(g: &GroupSpec, set: &BTreeSet<Element>) -> Self {
        let mut table = vec![false; g.order()];
        for (i, h) in g.elements().enumerate() {
            table[i] = set.iter().all(|&a| set.contains(&g.mul(h, a)));
        }
        Self::from_table(g, table)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// `d` with `H ∩ ⟨y⟩ = ⟨y^d⟩`.
    pub fn rotation_step(&self) -> u32 {
        self.rotation_step
    }

    /// Smallest `c` with `x·y^c ∈ H`, if any.
    pub fn reflection(&self) -> Option<u32> {
        self.reflection
    }

    pub fn order(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn contains(&self, u: Element) -> bool {
        self.group.contains(u) && self.members[self.group.index(u)]
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.group.elements().filter(|&u| self.contains(u))
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.group;
        g.elements().all(|u| {
            let ui = g.inv(u);
            self.elements().all(|h| self.contains(g.mul(g.mul(u, h), ui)))
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.group.order()
    }

    /// Smallest element of the left coset `u·H`.
    pub fn coset_rep(&self, u: Element) -> Element {
        self.elements()
            .map(|h| self.group.mul(u, h))
            .min()
            .expect("subgroup is nonempty")
    }

    pub fn describe(&self) -> String {
        let d = self.rotation_step;
        let rot = if d == self.group.n { "1".to_string() } else { format!("y^{d}") };
        match self.reflection {
            None => format!("<{rot}>"),
            Some(c) => format!("<{}, {rot}>", Element::reflection(c)),
        }
    }
}

/// A group homomorphism stored by its table of images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: GroupSpec,
    target: GroupSpec,
    images: Vec<Element>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `G → ⟨y^{n₁}⟩ ≅ C_{n₂}`, the central direct factor.
    Cyclic,
    /// `G → ⟨x, y^{n₂}⟩ ≅ D_{2n₁}`.
    Dihedral,
}

impl Homomorphism {
    pub fn from_fn(source: &GroupSpec, target: &GroupSpec, f: impl Fn(Element) -> Element) -> Self {
        let images = source.elements().map(f).collect();
        Homomorphism {
            source: *source,
            target: *target,
            images,
        }
    }

    pub fn source(&self) -> &GroupSpec {
        &self.source
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    #[inline]
    pub fn apply(&self, u: Element) -> Element {
        self.images[self.source.index(u)]
    }

    pub fn is_homomorphism(&self) -> bool {
        let (g, h) = (&self.source, &self.target);
        self.images.iter().all(|&u| h.contains(u))
            && g.elements().all(|u| {
                g.elements()
                    .all(|v| self.apply(g.mul(u, v)) == h.mul(self.apply(u), self.apply(v)))
            })
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.order() != self.target.order() {
            return false;
        }
        let mut seen = vec![false; self.target.order()];
        self.images.iter().all(|&u| {
            let i = self.target.index(u);
            !std::mem::replace(&mut seen[i], true)
        })
    }

    pub fn kernel(&self) -> Subgroup {
        let g = &self.source;
        Subgroup::from_members(g, g.elements().filter(|&u| self.apply(u).is_identity()))
            .expect("kernels are subgroups")
    }

    /// Natural map `G → G/⟨y^d⟩`, realized as the group with `n' = d`,
    /// `s' = s mod d`.
    pub fn quotient(g: &GroupSpec, d: u32) -> Result<Self> {
        if d == 0 || !g.n.is_multiple_of(d) {
            return Err(Error::Precondition(format!(
                "quotient by <y^{d}> needs d | n (n={})",
                g.n
            )));
        }
        let target = match g.kind {
            GroupKind::Cyclic => GroupSpec::cyclic(d)?,
            GroupKind::Metacyclic => GroupSpec::metacyclic_raw(d, g.s % d),
        };
        Ok(Self::from_fn(g, &target, |u| Element {
            eps: u.eps,
            a: u.a % d,
        }))
    }

    /// Projection of `G ≅ ⟨y^{n₁}⟩ × ⟨x, y^{n₂}⟩` onto one factor; images
    /// stay inside `G`. Needs a coprime factorization.
    pub fn projection(g: &GroupSpec, which: Factor) -> Result<Self> {
        let f = g.factorize()?;
        if !f.is_coprime() {
            return Err(Error::NotCoprime { n1: f.n1, n2: f.n2 });
        }
        let (n1, n2) = (f.n1, f.n2);
        Ok(Self::from_fn(g, g, |u| {
            let central = crt(u.a, n2, 0, n1);
            match which {
                Factor::Cyclic => Element::rotation(central),
                Factor::Dihedral => Element {
                    eps: u.eps,
                    a: crt(0, n2, u.a, n1),
                },
            }
        }))
    }
}

/// The `x ≡ r2 (mod m2)`, `x ≡ r1 (mod m1)` solution in `[0, m1·m2)` for
/// coprime moduli.
pub(crate) fn crt(r2: u32, m2: u32, r1: u32, m1: u32) -> u32 {
    let n = m1 * m2;
    (0..n)
        .step_by(m1 as usize)
        .map(|base| base + r1 % m1)
        .find(|&x| x % m2 == r2 % m2)
        .expect("coprime moduli")
}

/// `G ≅ C_{n₂} × D_{2n₁}` for a coprime factorization.
#[derive(Clone, Debug)]
pub struct DirectFactors {
    group: GroupSpec,
    factorization: Factorization,
    cyclic: GroupSpec,
    dihedral: GroupSpec,
}

impl DirectFactors {
    pub fn new(g: &GroupSpec) -> Result<Self> {
        let f = g.factorize()?;
        if !f.is_coprime() {
            return Err(Error::NotCoprime { n1: f.n1, n2: f.n2 });
        }
        Ok(DirectFactors {
            group: *g,
            factorization: f,
            cyclic: GroupSpec::cyclic(f.n2)?,
            dihedral: GroupSpec::metacyclic_raw(f.n1, g.s % f.n1),
        })
    }

    pub fn factorization(&self) -> Factorization {
        self.factorization
    }

    pub fn cyclic(&self) -> &GroupSpec {
        &self.cyclic
    }

    pub fn dihedral(&self) -> &GroupSpec {
        &self.dihedral
    }

    pub fn split(&self, u: Element) -> (Element, Element) {
        let Factorization { n1, n2 } = self.factorization;
        (
            Element::rotation(u.a % n2),
            Element {
                eps: u.eps,
                a: u.a % n1,
            },
        )
    }

    pub fn join(&self, c: Element, d: Element) -> Element {
        let Factorization { n1, n2 } = self.factorization;
        Element {
            eps: d.eps,
            a: crt(c.a, n2, d.a, n1),
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }
}

/// A generating pair `(τ, α)` realizing the defining presentation:
/// `τ² = αⁿ = 1`, `ατ = τα^s`. Cyclic groups carry only `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Presentation {
    pub tau: Option<Element>,
    pub alpha: Element,
}

impl Presentation {
    /// `τ^eps α^t`.
    pub fn word(&self, g: &GroupSpec, eps: u8, t: u32) -> Element {
        let rot = g.pow(self.alpha, t as u64);
        match (eps, self.tau) {
            (0, _) => rot,
            (_, Some(tau)) => g.mul(tau, rot),
            (_, None) => panic!("cyclic presentation has no tau"),
        }
    }

    /// The automorphism `x ↦ τ, y ↦ α`.
    pub fn automorphism(&self, g: &GroupSpec) -> Homomorphism {
        Homomorphism::from_fn(g, g, |u| self.word(g, u.eps, u.a))
    }
}

/// All presentations of `g`, ordered by `(τ, α)`.
pub fn presentations(g: &GroupSpec) -> Vec<Presentation> {
    match g.kind {
        GroupKind::Cyclic => (0..g.n)
            .filter(|&a| gcd(a as u64, g.n as u64) == 1)
            .map(|a| Presentation {
                tau: None,
                alpha: Element::rotation(a),
            })
            .collect(),
        GroupKind::Metacyclic => {
            let mut out = Vec::new();
            for tau in g.elements() {
                if !g.mul(tau, tau).is_identity() {
                    continue;
                }
                for alpha in g.elements() {
                    if !g.pow(alpha, g.n as u64).is_identity()
                        || g.mul(alpha, tau) != g.mul(tau, g.pow(alpha, g.s as u64))
                    {
                        continue;
                    }
                    let p = Presentation {
                        tau: Some(tau),
                        alpha,
                    };
                    if p.automorphism(g).is_bijective() {
                        out.push(p);
                    }
                }
            }
            out
        }
    }
}

/// `Aut(G)`, one automorphism per presentation.
pub fn automorphisms(g: &GroupSpec) -> Vec<Homomorphism> {
    presentations(g).iter().map(|p| p.automorphism(g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_groups() -> Vec<GroupSpec> {
        let mut out: Vec<GroupSpec> = (1..=30).map(|n| GroupSpec::cyclic(n).unwrap()).collect();
        for n in 3..=15u32 {
            for s in 0..n {
                if let Ok(g) = GroupSpec::metacyclic(n, s as i64) {
                    out.push(g);
                }
            }
        }
        out
    }

    #[test]
    fn construction_examples() {
        let d6 = GroupSpec::metacyclic(3, 2).unwrap();
        assert_eq!(d6.order(), 6);
        assert_eq!(GroupSpec::metacyclic(15, 1).unwrap().order(), 30);
        assert_eq!(GroupSpec::metacyclic(15, 11).unwrap().order(), 30);
        let err = GroupSpec::metacyclic(15, 2).unwrap_err();
        assert!(err.to_string().contains("≢ 1 (mod 15)"), "{err}");
        assert!(GroupSpec::metacyclic(2, 1).is_err());
        assert_eq!(GroupSpec::metacyclic(15, -4).unwrap().s(), 11);
    }

    #[test]
    fn multiplication_examples() {
        let d6 = GroupSpec::metacyclic(3, 2).unwrap();
        let x = d6.x().unwrap();
        assert_eq!(d6.mul(x, x), Element::IDENTITY);
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        for a in 0..15 {
            for b in 0..15 {
                let p = g.mul(Element::reflection(a), Element::reflection(b));
                assert_eq!(p, Element::rotation((11 * a + b) % 15));
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        assert_eq!(g.inv(Element::rotation(4)), Element::rotation(11));
        assert_eq!(g.inv(Element::rotation(0)), Element::rotation(0));
        // (1,a)^-1 = (1, -a·s)
        assert_eq!(g.inv(Element::reflection(2)), Element::reflection(15 - 22 % 15));
        let d6 = GroupSpec::dihedral(3).unwrap();
        for a in 0..3 {
            assert_eq!(d6.inv(Element::reflection(a)), Element::reflection(a));
        }
    }

    #[test]
    fn group_axioms_exhaustive_up_to_order_30() {
        for g in small_groups().into_iter().filter(|g| g.order() <= 30) {
            let els: Vec<_> = g.elements().collect();
            for &u in &els {
                assert_eq!(g.mul(u, Element::IDENTITY), u);
                assert_eq!(g.mul(Element::IDENTITY, u), u);
                assert_eq!(g.mul(u, g.inv(u)), Element::IDENTITY, "{g} {u}");
                assert_eq!(g.mul(g.inv(u), u), Element::IDENTITY);
                for &v in &els {
                    let uv = g.mul(u, v);
                    assert!(g.contains(uv));
                    for &w in &els {
                        assert_eq!(g.mul(uv, w), g.mul(u, g.mul(v, w)), "{g}");
                    }
                }
            }
        }
    }

    #[test]
    fn factorization_examples_and_invariants() {
        let f = GroupSpec::metacyclic(15, 11).unwrap().factorize().unwrap();
        assert_eq!((f.n1, f.n2), (3, 5));
        let f = GroupSpec::metacyclic(15, 4).unwrap().factorize().unwrap();
        assert_eq!((f.n1, f.n2), (5, 3));
        let f = GroupSpec::metacyclic(9, 8).unwrap().factorize().unwrap();
        assert_eq!((f.n1, f.n2), (9, 1));
        let f = GroupSpec::metacyclic(21, 13).unwrap().factorize().unwrap();
        assert_eq!((f.n1, f.n2), (7, 3));
        let f = GroupSpec::metacyclic(21, 8).unwrap().factorize().unwrap();
        assert_eq!((f.n1, f.n2), (3, 7));
        // factorize asserts its own invariants; run it over every small group
        for n in 3..=64u32 {
            for s in 0..n {
                if let Ok(g) = GroupSpec::metacyclic(n, s as i64) {
                    let f = g.factorize().unwrap();
                    assert_eq!(f.n1 * f.n2, n);
                }
            }
        }
        assert!(GroupSpec::cyclic(5).unwrap().factorize().is_err());
    }

    #[test]
    fn quotient_examples() {
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        let q = Homomorphism::quotient(&g, 3).unwrap();
        assert_eq!(*q.target(), GroupSpec::metacyclic(3, 2).unwrap());
        assert!(q.is_homomorphism());
        assert_eq!(q.kernel(), Subgroup::rotations(&g, 3).unwrap());
        let c2 = Homomorphism::quotient(&g, 1).unwrap();
        assert_eq!(c2.target().order(), 2);
        assert!(c2.is_homomorphism());
        assert!(Homomorphism::quotient(&g, 4).is_err());
    }

    #[test]
    fn quotient_fibres_have_subgroup_size() {
        for g in small_groups().into_iter().filter(|g| g.order() <= 30) {
            for d in (1..=g.n()).filter(|d| g.n() % d == 0) {
                let q = Homomorphism::quotient(&g, d).unwrap();
                assert!(q.is_homomorphism(), "{g} / <y^{d}>");
                let h = Subgroup::rotations(&g, d).unwrap();
                for image in q.target().elements() {
                    let fibre = g.elements().filter(|&u| q.apply(u) == image).count();
                    assert_eq!(fibre, h.order());
                }
            }
        }
    }

    #[test]
    fn projection_examples() {
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        let p1 = Homomorphism::projection(&g, Factor::Cyclic).unwrap();
        let p2 = Homomorphism::projection(&g, Factor::Dihedral).unwrap();
        let y = |a| Element::rotation(a);
        assert_eq!(p1.apply(y(1)), y(6));
        assert_eq!(p2.apply(y(1)), y(10));
        assert_eq!(p1.apply(y(5)), Element::IDENTITY);
        assert_eq!(p2.apply(y(5)), y(5));
        assert_eq!(p1.apply(y(3)), y(3));
        assert_eq!(p2.apply(y(3)), Element::IDENTITY);
        assert!(p1.is_homomorphism() && p2.is_homomorphism());
        for u in g.elements() {
            assert_eq!(g.mul(p1.apply(u), p2.apply(u)), u);
        }
        let even = GroupSpec::metacyclic(8, 3).unwrap();
        assert!(matches!(
            Homomorphism::projection(&even, Factor::Cyclic),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn direct_factor_isomorphism_exhaustive() {
        for g in small_groups()
            .into_iter()
            .filter(|g| !g.is_cyclic_kind() && g.order() <= 30 && g.n() % 2 == 1)
        {
            let df = DirectFactors::new(&g).unwrap();
            let (c, d) = (df.cyclic(), df.dihedral());
            let mut seen = std::collections::HashSet::new();
            for u in g.elements() {
                let (a, b) = df.split(u);
                assert!(c.contains(a) && d.contains(b));
                assert_eq!(df.join(a, b), u);
                assert!(seen.insert((a, b)));
                for v in g.elements() {
                    let (a2, b2) = df.split(v);
                    assert_eq!(df.split(g.mul(u, v)), (c.mul(a, a2), d.mul(b, b2)), "{g}");
                }
            }
            assert_eq!(seen.len(), c.order() * d.order());
        }
    }

    #[test]
    fn subgroups_and_normality() {
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        for d in [1, 3, 5, 15] {
            let h = Subgroup::rotations(&g, d).unwrap();
            assert!(h.is_normal());
            assert_eq!(h.order(), (15 / d) as usize);
        }
        let h = Subgroup::generated_by(&g, &[Element::reflection(0), Element::rotation(5)]).unwrap();
        assert_eq!(h.order(), 6);
        assert_eq!(h.describe(), "<x, y^5>");
        assert!(Subgroup::from_members(&g, [Element::IDENTITY, Element::rotation(1)]).is_err());
        assert!(Subgroup::trivial(&g).is_trivial());
        assert!(Subgroup::whole(&g).is_whole());
    }

    #[test]
    fn automorphism_counts() {
        // |Aut(D6)| = 6, |Aut(C_n)| = phi(n), |Aut(D_8)| = 8
        assert_eq!(automorphisms(&GroupSpec::dihedral(3).unwrap()).len(), 6);
        assert_eq!(automorphisms(&GroupSpec::cyclic(12).unwrap()).len(), 4);
        assert_eq!(automorphisms(&GroupSpec::dihedral(4).unwrap()).len(), 8);
        for g in small_groups().into_iter().filter(|g| g.order() <= 20) {
            for a in automorphisms(&g) {
                assert!(a.is_homomorphism() && a.is_bijective(), "{g}");
            }
        }
    }

    #[test]
    fn commutator_subgroup_contains_commutators() {
        for g in small_groups().into_iter().filter(|g| g.order() <= 30) {
            let c = g.commutator_subgroup();
            for u in g.elements() {
                for v in g.elements() {
                    let comm = g.mul(g.mul(g.inv(u), g.inv(v)), g.mul(u, v));
                    assert!(c.contains(comm), "{g}");
                }
            }
        }
    }
}
