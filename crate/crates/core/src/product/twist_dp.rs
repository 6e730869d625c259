//! Order-free DP for subproduct sets.
//!
//! For an ordering `g₁ ⋯ g_k` with `gᵢ = x^{eᵢ} y^{aᵢ}`, the product is
//! `x^{r mod 2} y^{Σ aᵢ s^{pᵢ}}`. Here `r` is the number of reflections and
//! `pᵢ` is the parity of the number of reflections after position `i`. Call
//! a term twisted when `pᵢ = 1`. Which twist patterns some ordering realizes:
//!
//! * with `r = 0` nothing is twisted;
//! * with `r ≥ 1`, exactly `⌈r/2⌉` reflections are plain and `⌊r/2⌋` are
//!   twisted, and each rotation may go either way.
//!
//! The DP walks the terms one copy at a time and tracks the count used, the
//! offset `D = plain − twisted` over reflections, whether a reflection was
//! used, and whether a rotation was twisted. Each state holds a bitset of
//! reachable exponents mod `n`. A final state is realizable iff
//! `D ∈ {0, 1}` and (some reflection is used, or no rotation is twisted).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::sequence::Sequence;

pub(super) struct TwistDp {
    group: GroupSpec,
    k: usize,
    words: usize,
    dmax: usize,
    /// Rotations may be twisted at all: some reflection exists and `s ≠ 1`.
    twist_rotations: bool,
    support: Vec<(Element, u32)>,
    /// `layers[b]` holds the states after the first `b` support elements.
    layers: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct State {
    c: usize,
    d: i64,
    f: bool,
    t: bool,
}

impl TwistDp {
    pub(super) fn run(s: &Sequence, k: usize, budget: u64) -> Result<TwistDp> {
        let group = *s.group();
        let n = group.n() as usize;
        let reflections: usize = s.support().filter(|(u, _)| u.is_reflection()).map(|(_, c)| c as usize).sum();
        let dmax = reflections.min(k);
        let mut dp = TwistDp {
            group,
            k,
            words: n.div_ceil(64),
            dmax,
            twist_rotations: reflections > 0 && group.s() % group.n() != 1 % group.n(),
            support: s.support().collect(),
            layers: Vec::new(),
        };
        let cells = (dp.state_count() as u128) * (s.len().max(1) as u128) * dp.words as u128;
        if cells > budget as u128 {
            return Err(Error::BudgetExceeded {
                states: cells.min(u64::MAX as u128) as u64,
            });
        }

        let mut layer = vec![0u64; dp.state_count() * dp.words];
        let root = dp.slot(State { c: 0, d: 0, f: false, t: false });
        layer[root * dp.words] |= 1;
        dp.layers.push(layer.clone());
        for b in 0..dp.support.len() {
            let (u, c) = dp.support[b];
            for _ in 0..c {
                layer = dp.step(&layer, u);
            }
            dp.layers.push(layer.clone());
        }
        Ok(dp)
    }

    fn state_count(&self) -> usize {
        (self.k + 1) * (2 * self.dmax + 1) * 4
    }

    fn slot(&self, st: State) -> usize {
        let d_off = (st.d + self.dmax as i64) as usize;
        ((st.c * (2 * self.dmax + 1) + d_off) * 2 + st.f as usize) * 2 + st.t as usize
    }

    fn unslot(&self, slot: usize) -> State {
        let t = slot & 1 == 1;
        let f = (slot >> 1) & 1 == 1;
        let rest = slot >> 2;
        let width = 2 * self.dmax + 1;
        State {
            c: rest / width,
            d: (rest % width) as i64 - self.dmax as i64,
            f,
            t,
        }
    }

    fn in_range(&self, st: &State) -> bool {
        st.c <= self.k && st.d.unsigned_abs() as usize <= self.dmax
    }

    fn bits<'a>(&self, layer: &'a [u64], slot: usize) -> &'a [u64] {
        &layer[slot * self.words..(slot + 1) * self.words]
    }

    fn has(&self, layer: &[u64], st: State, residue: u32) -> bool {
        if !self.in_range(&st) {
            return false;
        }
        let bits = self.bits(layer, self.slot(st));
        bits[residue as usize / 64] >> (residue % 64) & 1 == 1
    }

    /// The exponent contributions of one copy of `u`: `(plain, twisted)`,
    /// with `twisted = None` when twisting is impossible or changes nothing.
    fn moves(&self, u: Element) -> (u32, Option<u32>) {
        let n = self.group.n();
        let plain = u.a % n;
        let twisted = ((u.a as u64 * self.group.s() as u64) % n as u64) as u32;
        if u.is_reflection() || (self.twist_rotations && twisted != plain) {
            (plain, Some(twisted))
        } else {
            (plain, None)
        }
    }

    fn step(&self, layer: &[u64], u: Element) -> Vec<u64> {
        let mut next = layer.to_vec();
        let (plain, twisted) = self.moves(u);
        for slot in 0..self.state_count() {
            let src = self.bits(layer, slot);
            if src.iter().all(|&w| w == 0) {
                continue;
            }
            let st = self.unslot(slot);
            if st.c == self.k {
                continue;
            }
            let mut targets: [Option<(State, u32)>; 2] = [None, None];
            if u.is_reflection() {
                targets[0] = Some((State { c: st.c + 1, d: st.d + 1, f: true, t: st.t }, plain));
                targets[1] = twisted.map(|tw| (State { c: st.c + 1, d: st.d - 1, f: true, t: st.t }, tw));
            } else {
                targets[0] = Some((State { c: st.c + 1, ..st }, plain));
                targets[1] = twisted.map(|tw| (State { c: st.c + 1, t: true, ..st }, tw));
            }
            for (dst, shift) in targets.into_iter().flatten() {
                if !self.in_range(&dst) {
                    continue;
                }
                let at = self.slot(dst) * self.words;
                rotate_or(&mut next[at..at + self.words], src, shift, self.group.n());
            }
        }
        next
    }

    fn finals(&self) -> impl Iterator<Item = State> + '_ {
        [0i64, 1].into_iter().flat_map(move |d| {
            [(false, false), (true, false), (true, true)]
                .into_iter()
                .map(move |(f, t)| State { c: self.k, d, f, t })
        })
    }

    pub(super) fn members(&self) -> BTreeSet<Element> {
        let last = self.layers.last().expect("root layer");
        let mut out = BTreeSet::new();
        for st in self.finals() {
            if !self.in_range(&st) {
                continue;
            }
            for a in set_bits(self.bits(last, self.slot(st)), self.group.n()) {
                out.insert(Element { eps: st.d as u8, a });
            }
        }
        out
    }

    pub(super) fn witness(&self, target: Element) -> Option<Vec<Element>> {
        let n = self.group.n() as i64;
        let last = self.layers.last().expect("root layer");
        let mut st = self
            .finals()
            .find(|st| st.d == target.eps as i64 && self.has(last, *st, target.a))?;
        let mut residue = target.a;

        // (element, plain copies, twisted copies) per support element
        let mut usage = vec![(Element::IDENTITY, 0u32, 0u32); self.support.len()];
        for b in (0..self.support.len()).rev() {
            let (u, count) = self.support[b];
            let (plain_shift, twisted_shift) = self.moves(u);
            let prev_layer = &self.layers[b];
            let mut found = None;
            'search: for m in 0..=(count as usize).min(st.c) {
                let max_tw = if twisted_shift.is_some() { m } else { 0 };
                for tw in 0..=max_tw {
                    let pl = m - tw;
                    let shift = pl as i64 * plain_shift as i64 + tw as i64 * twisted_shift.unwrap_or(0) as i64;
                    let prev_residue = (residue as i64 - shift).rem_euclid(n) as u32;
                    let d = if u.is_reflection() { st.d - pl as i64 + tw as i64 } else { st.d };
                    let f_options: &[bool] = if u.is_reflection() && m > 0 {
                        if st.f { &[false, true] } else { &[] }
                    } else {
                        std::slice::from_ref(if st.f { &true } else { &false })
                    };
                    let t_options: &[bool] = if !u.is_reflection() && tw > 0 {
                        if st.t { &[false, true] } else { &[] }
                    } else {
                        std::slice::from_ref(if st.t { &true } else { &false })
                    };
                    for &f in f_options {
                        for &t in t_options {
                            let prev = State { c: st.c - m, d, f, t };
                            if self.has(prev_layer, prev, prev_residue) {
                                found = Some((prev, prev_residue, pl as u32, tw as u32));
                                break 'search;
                            }
                        }
                    }
                }
            }
            let (prev, prev_residue, pl, tw) = found.expect("DP layers are consistent");
            usage[b] = (u, pl, tw);
            st = prev;
            residue = prev_residue;
        }
        debug_assert_eq!(st, State { c: 0, d: 0, f: false, t: false });
        Some(arrange(&usage))
    }
}

/// Orders a twist assignment: reflections alternate so that the `j`-th of `r`
/// has `r − j` reflections after it, twisted rotations go just before the
/// last reflection and plain rotations go at the end.
fn arrange(usage: &[(Element, u32, u32)]) -> Vec<Element> {
    let expand = |pick: fn(&(Element, u32, u32)) -> u32, refl: bool| -> Vec<Element> {
        usage
            .iter()
            .filter(|e| e.0.is_reflection() == refl)
            .flat_map(|e| std::iter::repeat_n(e.0, pick(e) as usize))
            .collect()
    };
    let plain_refl = expand(|e| e.1, true);
    let twisted_refl = expand(|e| e.2, true);
    let plain_rot = expand(|e| e.1, false);
    let twisted_rot = expand(|e| e.2, false);

    let r = plain_refl.len() + twisted_refl.len();
    let mut reflections = Vec::with_capacity(r);
    let (mut pi, mut ti) = (plain_refl.iter(), twisted_refl.iter());
    for j in 1..=r {
        let next = if (r - j) % 2 == 0 { pi.next() } else { ti.next() };
        reflections.push(*next.expect("plain/twisted split matches the parity pattern"));
    }

    let mut out = Vec::with_capacity(r + plain_rot.len() + twisted_rot.len());
    if let Some((last, init)) = reflections.split_last() {
        out.extend_from_slice(init);
        out.extend_from_slice(&twisted_rot);
        out.push(*last);
    } else {
        debug_assert!(twisted_rot.is_empty());
    }
    out.extend_from_slice(&plain_rot);
    out
}

fn set_bits(bits: &[u64], n: u32) -> impl Iterator<Item = u32> + '_ {
    bits.iter().enumerate().flat_map(move |(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros();
            w &= w - 1;
            Some(wi as u32 * 64 + b)
        })
        .filter(move |&i| i < n)
    })
}

/// `dst |= src rotated by shift` on the ring `Z_n`.
fn rotate_or(dst: &mut [u64], src: &[u64], shift: u32, n: u32) {
    if n <= 64 {
        let w = src[0];
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let rotated = if shift == 0 { w } else { (w << shift) | (w >> (n - shift)) };
        dst[0] |= rotated & mask;
        return;
    }
    for i in set_bits(src, n) {
        let j = (i + shift) % n;
        dst[j as usize / 64] |= 1 << (j % 64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_wraps() {
        let mut dst = [0u64];
        rotate_or(&mut dst, &[0b1001], 2, 5);
        assert_eq!(dst[0], 0b00101);
        let mut dst = [0u64; 2];
        rotate_or(&mut dst, &[1, 1 << 3], 2, 70);
        assert_eq!(set_bits(&dst, 70).collect::<Vec<_>>(), vec![2, 69]);
    }

    #[test]
    fn arrangement_realizes_parities() {
        let g = GroupSpec::metacyclic(15, 11).unwrap();
        let usage = [
            (Element::rotation(1), 3, 2),
            (Element::reflection(2), 2, 1),
            (Element::reflection(4), 0, 1),
        ];
        let order = arrange(&usage);
        assert_eq!(order.len(), 9);
        // four reflections; plain 3·1 + 2·2 = 7, twisted 11·(2·1 + 2 + 4) = 88
        assert_eq!(g.product(order.iter()), Element::rotation(95 % 15));
    }
}
