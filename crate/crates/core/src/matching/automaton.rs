//! Suffix automaton with first-occurrence positions, and the constrained
//! longest-common-substring search built on it.
//!
//! The automaton of `x` recognizes every substring of `x`; each state is
//! an equivalence class of substrings sharing the same occurrence-end set,
//! and `first_end` stores the smallest element of that set.  That single
//! number answers the query the constrained search needs: the leftmost
//! occurrence start of a length-`L` substring in a state with first end
//! `f` is `f − L`, so "does this match start before `x_hi` somewhere in
//! `x`?" is one comparison per suffix-link step.

use alloc::vec::Vec;

/// One automaton state.  Transitions are a tiny sorted-insertion list:
/// the alphabets here are 2 (orbits) or at most bytes (files), and a
/// two-entry scan beats a tree or hash per node at these sizes.
struct State {
    /// Length of the longest substring in this state's class.
    len: u32,
    /// Suffix link; `u32::MAX` on the root.
    link: u32,
    /// Smallest end position (exclusive) of any occurrence.  All strings
    /// in a class share one end set, so one value serves them all; a
    /// clone inherits the value of the state it was split from, because
    /// at split time the two still had identical end sets.
    first_end: u32,
    trans: Vec<(u8, u32)>,
}

pub(crate) struct SuffixAutomaton {
    states: Vec<State>,
}

impl SuffixAutomaton {
    pub(crate) fn build(text: &[u8]) -> Self {
        let mut sa = SuffixAutomaton {
            states: Vec::with_capacity(2 * text.len().max(1)),
        };
        sa.states.push(State { len: 0, link: u32::MAX, first_end: 0, trans: Vec::new() });
        let mut last = 0u32;
        for (pos, &c) in text.iter().enumerate() {
            last = sa.extend(last, c, (pos + 1) as u32);
        }
        sa
    }

    fn get(&self, v: u32, c: u8) -> Option<u32> {
        self.states[v as usize]
            .trans
            .iter()
            .find(|&&(s, _)| s == c)
            .map(|&(_, t)| t)
    }

    fn set(&mut self, v: u32, c: u8, to: u32) {
        let trans = &mut self.states[v as usize].trans;
        match trans.iter_mut().find(|(s, _)| *s == c) {
            Some(entry) => entry.1 = to,
            None => trans.push((c, to)),
        }
    }

    fn extend(&mut self, last: u32, c: u8, end: u32) -> u32 {
        let cur = self.states.len() as u32;
        self.states.push(State {
            len: self.states[last as usize].len + 1,
            link: u32::MAX,
            first_end: end,
            trans: Vec::new(),
        });
        // Add c-transitions to cur up the suffix chain until one exists.
        let mut p = last;
        loop {
            if self.get(p, c).is_some() {
                break;
            }
            self.set(p, c, cur);
            let link = self.states[p as usize].link;
            if link == u32::MAX {
                // Fell off the root: c is new to the text.
                self.states[cur as usize].link = 0;
                return cur;
            }
            p = link;
        }
        let q = self.get(p, c).expect("loop exited on existing transition");
        if self.states[q as usize].len == self.states[p as usize].len + 1 {
            self.states[cur as usize].link = q;
            return cur;
        }
        // Split: clone q at length len(p)+1.
        let clone = self.states.len() as u32;
        let cloned = State {
            len: self.states[p as usize].len + 1,
            link: self.states[q as usize].link,
            first_end: self.states[q as usize].first_end,
            trans: self.states[q as usize].trans.clone(),
        };
        self.states.push(cloned);
        self.states[q as usize].link = clone;
        self.states[cur as usize].link = clone;
        let mut p = p;
        loop {
            if self.get(p, c) != Some(q) {
                break;
            }
            self.set(p, c, clone);
            let link = self.states[p as usize].link;
            if link == u32::MAX {
                break;
            }
            p = link;
        }
        cur
    }

    #[cfg(test)]
    pub(crate) fn state_count(&self) -> usize {
        self.states.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_count_is_linear() {
        // The classical bound: at most 2|x| − 1 states for |x| ≥ 2.
        for x in [&b"abcbc"[..], b"aaaaaaaa", b"abababab", b"abcdefgh"] {
            let sa = SuffixAutomaton::build(x);
            assert!(sa.state_count() <= 2 * x.len() - 1, "{:?}", x);
        }
    }

    #[test]
    fn unconstrained_walk_recovers_plain_lcs() {
        // abcXdef vs zzabcdef: longest common substring is "def" (or
        // "abc"), length 3, visible to an unconstrained walk.
        let m = constrained_lcs(b"abcXdef", b"zzabcdef", usize::MAX, 0, usize::MAX);
        assert_eq!(m, 3);
        assert_eq!(constrained_lcs(b"abc", b"xyz", usize::MAX, 0, usize::MAX), 0);
    }
}

/// Longest common substring length over pairs with x-start `< x_hi` and
/// y-start in `[y_lo, y_hi)`; extensions may run to either sequence end.
///
/// Streams `y` through the automaton of `x` keeping the usual matching
/// statistic (longest match ending at the current position).  For each
/// end position the suffix-link chain is walked downward until a length
/// passes both start constraints: the y-start of a length-`L` candidate
/// is `end − L`, and the leftmost x-start is `first_end − L`.  Within one
/// state, shrinking `L` moves the x-start rightward — away from
/// satisfaction — so only the maximal length per state needs testing.
pub(crate) fn constrained_lcs(
    x: &[u8],
    y: &[u8],
    x_hi: usize,
    y_lo: usize,
    y_hi: usize,
) -> usize {
    let sa = SuffixAutomaton::build(x);
    let mut best = 0usize;
    let mut v = 0u32;
    let mut l = 0usize;
    for (e, &c) in y.iter().enumerate().skip(y_lo) {
        // Advance the matching statistic by one symbol.
        loop {
            if let Some(t) = sa.get(v, c) {
                v = t;
                l += 1;
                break;
            }
            if v == 0 {
                l = 0;
                break;
            }
            v = sa.states[v as usize].link;
            l = sa.states[v as usize].len as usize;
        }
        // Evaluate candidates ending at e+1, longest first.
        let end = e + 1;
        let mut u = v;
        let mut cand = l;
        while cand > best && u != 0 {
            if end - cand >= y_hi {
                // y-start too late; shrinking only worsens it.
                break;
            }
            let st = &sa.states[u as usize];
            if (st.first_end as usize) - cand < x_hi {
                best = cand;
                break;
            }
            let link = st.link;
            if link == u32::MAX {
                break;
            }
            u = link;
            cand = sa.states[u as usize].len as usize;
        }
    }
    best
}
