//! Product sets `π(S)`, subproduct sets `Π_k(S)`, and ordered witnesses.
//!
//! Two exact kernels sit behind one interface:
//!
//! * [`Strategy::StateSpace`] runs a breadth-first search over
//!   `(used-counts, running product)` states, one layer per pick.
//! * [`Strategy::TwistDp`] uses the normal form of an ordered product. Each
//!   term `x^e y^a` contributes `a` or `a·s` to the rotation exponent,
//!   depending on the parity of the reflections after it. Which parity
//!   patterns some ordering can realize depends only on how many reflections
//!   are used. So the search reduces to an order-free DP over
//!   `(count, plain-minus-twisted reflections, flags)` with residue sets mod
//!   `n`. Its cost is polynomial in the length, so it handles inputs whose
//!   state space is far too large for the breadth-first search.
//!
//! [`Strategy::Auto`] picks the breadth-first search for non-abelian inputs
//! whose state space is small, and the DP otherwise. Every witness either
//! kernel returns is re-checked with [`verify_witness`], which only uses
//! group multiplication.

mod state_space;
mod twist_dp;
mod verify;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, Subgroup};
use crate::sequence::Sequence;
use crate::text;

pub use verify::{verify_witness, verify_witness_line, WitnessRejection};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// State spaces up to this size go to the breadth-first search under
/// [`Strategy::Auto`].
const AUTO_STATE_SPACE_LIMIT: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Auto,
    StateSpace,
    TwistDp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of search states (or DP cells) before giving up.
    pub budget: u64,
    pub strategy: Strategy,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            strategy: Strategy::Auto,
        }
    }
}

impl SearchConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        SearchConfig {
            strategy,
            ..Self::default()
        }
    }
}

/// An ordering of a subsequence together with its product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductWitness {
    pub elements: Vec<Element>,
    pub product: Element,
}

impl ProductWitness {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The underlying multiset.
    pub fn as_sequence(&self, g: &GroupSpec) -> Result<Sequence> {
        Sequence::from_elements(g, self.elements.iter().copied())
    }

    /// `witness k=.. target=.. : ...`
    pub fn to_line(&self) -> String {
        text::format_witness_line(self.product, &self.elements)
    }
}

#[derive(Clone, Debug)]
pub struct SubproductSet {
    pub n: usize,
    pub members: BTreeSet<Element>,
    pub stabilizer: Subgroup,
}

enum Kernel {
    StateSpace(state_space::Search),
    TwistDp(twist_dp::TwistDp),
}

impl Kernel {
    fn run(s: &Sequence, k: usize, cfg: &SearchConfig) -> Result<Kernel> {
        if k > s.len() {
            return Err(Error::Precondition(format!(
                "subsequence length {k} exceeds sequence length {}",
                s.len()
            )));
        }
        let use_state_space = match cfg.strategy {
            Strategy::StateSpace => true,
            Strategy::TwistDp => false,
            Strategy::Auto => {
                !s.group().is_abelian() && state_space::space_size(s) <= AUTO_STATE_SPACE_LIMIT
            }
        };
        if use_state_space {
            state_space::Search::run(s, k, cfg.budget).map(Kernel::StateSpace)
        } else {
            twist_dp::TwistDp::run(s, k, cfg.budget).map(Kernel::TwistDp)
        }
    }

    fn members(&self) -> BTreeSet<Element> {
        match self {
            Kernel::StateSpace(k) => k.members(),
            Kernel::TwistDp(k) => k.members(),
        }
    }

    fn witness(&self, target: Element) -> Option<Vec<Element>> {
        match self {
            Kernel::StateSpace(k) => k.witness(target),
            Kernel::TwistDp(k) => k.witness(target),
        }
    }
}

/// `π(S)`: the products of the whole sequence over all orderings.
pub fn pi_set(s: &Sequence, cfg: &SearchConfig) -> Result<BTreeSet<Element>> {
    if s.is_empty() {
        return Err(Error::Precondition("π of the empty sequence".into()));
    }
    if s.group().is_abelian() {
        let product = s.group().product(s.terms().collect::<Vec<_>>().iter());
        return Ok(BTreeSet::from([product]));
    }
    Ok(Kernel::run(s, s.len(), cfg)?.members())
}

/// `Π_n(S)` without the stabilizer.
pub fn subproduct_members(s: &Sequence, n: usize, cfg: &SearchConfig) -> Result<BTreeSet<Element>> {
    Ok(Kernel::run(s, n, cfg)?.members())
}

/// `Π_n(S)` together with its stabilizer `H(Π_n(S))`.
pub fn subproducts(s: &Sequence, n: usize, cfg: &SearchConfig) -> Result<SubproductSet> {
    let members = subproduct_members(s, n, cfg)?;
    let stabilizer = Subgroup::stabilizer_of(s.group(), &members);
    Ok(SubproductSet {
        n,
        members,
        stabilizer,
    })
}

/// A length-`k` subsequence ordered to multiply to `target`, if one exists.
pub fn find_product(
    s: &Sequence,
    k: usize,
    target: Element,
    cfg: &SearchConfig,
) -> Result<Option<ProductWitness>> {
    s.group().check(target)?;
    let kernel = Kernel::run(s, k, cfg)?;
    Ok(kernel
        .witness(target)
        .map(|elements| checked(s, elements, target)))
}

/// Like [`find_product`] for the least target in canonical order that
/// satisfies `accept`.
pub fn find_product_where(
    s: &Sequence,
    k: usize,
    accept: impl Fn(Element) -> bool,
    cfg: &SearchConfig,
) -> Result<Option<ProductWitness>> {
    let kernel = Kernel::run(s, k, cfg)?;
    let Some(target) = kernel.members().into_iter().find(|&u| accept(u)) else {
        return Ok(None);
    };
    let elements = kernel
        .witness(target)
        .expect("every member of the reachable set has a witness");
    Ok(Some(checked(s, elements, target)))
}

/// Whether `1_G ∈ Π_k(S)`, with a witness when it is.
pub fn has_product_one(s: &Sequence, k: usize, cfg: &SearchConfig) -> Result<Option<ProductWitness>> {
    find_product(s, k, s.group().identity(), cfg)
}

fn checked(s: &Sequence, elements: Vec<Element>, target: Element) -> ProductWitness {
    let w = ProductWitness {
        elements,
        product: target,
    };
    if let Err(why) = verify_witness(s, &w, target) {
        panic!("search produced an invalid witness ({why}): {}", w.to_line());
    }
    w
}
