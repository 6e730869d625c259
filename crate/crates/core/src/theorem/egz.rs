use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{Element, GroupKind, Homomorphism};
use crate::product::{self, SearchConfig};
use crate::sequence::Sequence;

/// An `m`-term zero-sum block of a sequence over `C_m`; one exists whenever
/// `|s| ≥ 2m − 1`.
pub fn egz_extract(s: &Sequence, m: usize, cfg: &SearchConfig) -> Result<Sequence> {
    let g = s.group();
    if g.kind() != GroupKind::Cyclic || g.order() != m {
        return Err(Error::Precondition(format!("expected a sequence over C_{m}, got {g}")));
    }
    if s.len() + 1 < 2 * m {
        return Err(Error::Precondition(format!(
            "need at least {} terms over C_{m}, got {}",
            2 * m - 1,
            s.len()
        )));
    }
    match product::has_product_one(s, m, cfg)? {
        Some(w) => w.as_sequence(g),
        None => Err(Error::ClaimViolation(format!("no {m}-term zero-sum block in {s}"))),
    }
}

/// A `len`-term subsequence of `pool` whose image under `f` multiplies to
/// `target` in some order. Image terms are lifted to the least unused
/// preimage in canonical order.
pub fn lifted_block(
    pool: &Sequence,
    f: &Homomorphism,
    len: usize,
    target: Element,
    cfg: &SearchConfig,
) -> Result<Option<Sequence>> {
    let image = pool.map(f)?;
    let Some(w) = product::find_product(&image, len, target, cfg)? else {
        return Ok(None);
    };
    let mut remaining: BTreeMap<Element, u32> = pool.support().collect();
    let mut out = Sequence::empty(pool.group());
    for v in w.elements {
        let u = remaining
            .iter()
            .find(|&(&u, &c)| c > 0 && f.apply(u) == v)
            .map(|(&u, _)| u)
            .expect("every image term has an unused preimage");
        *remaining.get_mut(&u).expect("present") -= 1;
        out.push(u, 1)?;
    }
    Ok(Some(out))
}
