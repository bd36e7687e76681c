//! Subshifts of finite type given by a 0/1 transition matrix: word counting,
//! certified entropy, mixing, the Ψ/κ binary coding and a gluing combinator
//! for prefix maps on binary sequences.

mod glue;
mod kappa;

pub use glue::{glue_maps, GlueError, GlueMap, Identity, KappaShift, PrefixMap};
pub use kappa::{kappa_decode, kappa_encode, kappa_modulus};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::{EntropyBound, Provenance};
use crate::numkit::{log2_lower, log2_upper, RatInterval, Rational};

/// Largest alphabet accepted from JSON.
pub const MAX_ALPHABET: usize = 4096;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SftError {
    #[error("malformed SFT: {0}")]
    Format(String),
    #[error("malformed word {0:?}")]
    Word(String),
    #[error("word is not in the language")]
    NotInLanguage,
    #[error("κ coding needs a binary mixing SFT with positive entropy")]
    NotAdmissible,
    #[error("eps must be positive")]
    BadEps,
}

/// Vertex shift on `{0,..,k-1}`: `ab` is allowed iff `allowed[a][b]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSft", into = "RawSft")]
pub struct Sft {
    allowed: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSft {
    alphabet: usize,
    allowed: Vec<Vec<u8>>,
}

impl TryFrom<RawSft> for Sft {
    type Error = SftError;

    fn try_from(raw: RawSft) -> Result<Self, SftError> {
        if raw.alphabet != raw.allowed.len() {
            return Err(SftError::Format(format!(
                "alphabet {} but {} rows",
                raw.alphabet,
                raw.allowed.len()
            )));
        }
        let rows = raw
            .allowed
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| match e {
                        0 => Ok(false),
                        1 => Ok(true),
                        e => Err(SftError::Format(format!("entry {e} is not 0 or 1"))),
                    })
                    .collect::<Result<Vec<bool>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Sft::new(rows)
    }
}

impl From<Sft> for RawSft {
    fn from(z: Sft) -> RawSft {
        RawSft {
            alphabet: z.alphabet(),
            allowed: z
                .allowed
                .iter()
                .map(|row| row.iter().map(|&b| u8::from(b)).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mixing {
    Mixing,
    NotMixing,
}

impl fmt::Display for Mixing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mixing::Mixing => "MIXING",
            Mixing::NotMixing => "NOT_MIXING",
        })
    }
}

impl Sft {
    pub fn new(allowed: Vec<Vec<bool>>) -> Result<Self, SftError> {
        let k = allowed.len();
        if k == 0 || k > MAX_ALPHABET {
            return Err(SftError::Format(format!("alphabet size {k} outside 1..={MAX_ALPHABET}")));
        }
        if let Some(row) = allowed.iter().find(|r| r.len() != k) {
            return Err(SftError::Format(format!("row of length {} in a {k}x{k} matrix", row.len())));
        }
        Ok(Sft { allowed })
    }

    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Result<Self, SftError> {
        let mut allowed = vec![vec![false; k]; k];
        for &(a, b) in edges {
            if a >= k || b >= k {
                return Err(SftError::Format(format!("edge {a}->{b} outside alphabet {k}")));
            }
            allowed[a][b] = true;
        }
        Sft::new(allowed)
    }

    /// All words over `k` letters.
    pub fn full(k: usize) -> Self {
        Sft::new(vec![vec![true; k]; k]).expect("valid size")
    }

    /// Binary shift forbidding `11`.
    pub fn golden_mean() -> Self {
        Sft::from_edges(2, &[(0, 0), (0, 1), (1, 0)]).expect("valid")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("SFT serializes")
    }

    pub fn alphabet(&self) -> usize {
        self.allowed.len()
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.allowed[a][b]
    }

    /// States lying on a bi-infinite allowed path.
    pub fn essential(&self) -> Vec<bool> {
        let k = self.alphabet();
        let mut alive = vec![true; k];
        loop {
            let mut changed = false;
            for a in 0..k {
                if !alive[a] {
                    continue;
                }
                let has_out = (0..k).any(|b| alive[b] && self.allowed[a][b]);
                let has_in = (0..k).any(|b| alive[b] && self.allowed[b][a]);
                if !(has_out && has_in) {
                    alive[a] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    fn essential_edge(&self, ess: &[bool], a: usize, b: usize) -> bool {
        ess[a] && ess[b] && self.allowed[a][b]
    }

    /// Whether `w` is a path in the essential subgraph.
    pub fn contains(&self, w: &[usize]) -> bool {
        self.contains_with(&self.essential(), w)
    }

    pub(crate) fn contains_with(&self, ess: &[bool], w: &[usize]) -> bool {
        let k = self.alphabet();
        w.iter().all(|&a| a < k && ess[a]) && w.windows(2).all(|p| self.allowed[p[0]][p[1]])
    }

    /// `|L_n|`, counted in the essential subgraph. `count_words(0) = 1`.
    pub fn count_words(&self, n: u32) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        let ess = self.essential();
        let k = self.alphabet();
        let mut v: Vec<BigUint> = ess.iter().map(|&e| if e { BigUint::one() } else { BigUint::zero() }).collect();
        for _ in 1..n {
            let mut next = vec![BigUint::zero(); k];
            for a in 0..k {
                if v[a].is_zero() {
                    continue;
                }
                for b in 0..k {
                    if self.essential_edge(&ess, a, b) {
                        next[b] += &v[a];
                    }
                }
            }
            v = next;
        }
        v.into_iter().sum()
    }

    /// Strongly connected components of the essential subgraph that carry a
    /// cycle, each sorted.
    pub fn cyclic_components(&self) -> Vec<Vec<usize>> {
        let ess = self.essential();
        let k = self.alphabet();
        let adj: Vec<Vec<usize>> = (0..k)
            .map(|a| (0..k).filter(|&b| self.essential_edge(&ess, a, b)).collect())
            .collect();
        let mut out: Vec<Vec<usize>> = tarjan(&adj)
            .into_iter()
            .filter(|c| c.len() > 1 || adj[c[0]].contains(&c[0]))
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        out.sort();
        out
    }

    /// Certified enclosure of `log2 λ`, λ the Perron root of the essential
    /// matrix, with width `<= eps`.
    pub fn entropy(&self, eps: &Rational) -> Result<EntropyBound, SftError> {
        if !eps.is_positive() {
            return Err(SftError::BadEps);
        }
        let comps = self.cyclic_components();
        if comps.is_empty() {
            return Ok(EntropyBound::zero().with_provenance(Provenance::Sft));
        }
        let bits = u32::try_from((-eps.floor_log2()).max(0)).unwrap_or(u32::MAX / 4) + 4;
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for comp in &comps {
            let (l, h) = self.component_entropy(comp, eps, bits);
            lo = lo.max(l);
            hi = hi.max(h);
        }
        let enc = RatInterval::new(lo, hi).expect("ordered");
        if enc.is_point() && enc.lo().is_dyadic() {
            return Ok(EntropyBound::exact(enc.lo().clone()).with_provenance(Provenance::Sft));
        }
        Ok(EntropyBound::from_enclosure(&enc, bits, Provenance::Sft))
    }

    /// `(lo, hi)` bounds on `log2 λ` of one irreducible component, from
    /// Collatz–Wielandt ratios of `v = (B + I)^m 1`. The width target leaves
    /// room for the final outward rounding to `2^-bits`.
    fn component_entropy(&self, comp: &[usize], eps: &Rational, bits: u32) -> (Rational, Rational) {
        let target = eps - &Rational::pow2(-i64::from(bits) + 1);
        let (lam_lo, lam_hi) = self.perron_bracket(comp, |lo, hi| {
            let l = log2_lower(lo, bits + 4);
            let h = log2_upper(hi, bits + 4);
            &h - &l <= target
        });
        (log2_lower(&lam_lo, bits + 4).max(Rational::zero()), log2_upper(&lam_hi, bits + 4).max(Rational::zero()))
    }

    /// Collatz–Wielandt bracket `[min (Bv)_i/v_i, max (Bv)_i/v_i] ∋ λ` for the
    /// component, iterating `v ← (B + I) v` until `done(lo, hi)` or exact.
    pub(crate) fn perron_bracket(
        &self,
        comp: &[usize],
        mut done: impl FnMut(&Rational, &Rational) -> bool,
    ) -> (Rational, Rational) {
        let m = comp.len();
        let adj: Vec<Vec<usize>> = comp
            .iter()
            .map(|&a| (0..m).filter(|&j| self.allowed[a][comp[j]]).collect())
            .collect();
        let apply = |v: &[BigInt]| -> Vec<BigInt> {
            adj.iter().map(|row| row.iter().map(|&j| &v[j]).sum()).collect()
        };
        let mut v = vec![BigInt::one(); m];
        let mut steps = 0u32;
        loop {
            let bv = apply(&v);
            let ratios = bv.iter().zip(&v).map(|(b, x)| Rational::from_bigint(b.clone()) / Rational::from_bigint(x.clone()));
            let (lo, hi) = ratios.fold((None::<Rational>, None::<Rational>), |(lo, hi), q| {
                (
                    Some(lo.map_or(q.clone(), |l| l.min(q.clone()))),
                    Some(hi.map_or(q.clone(), |h| h.max(q))),
                )
            });
            let (lo, hi) = (lo.expect("nonempty"), hi.expect("nonempty"));
            if lo == hi || done(&lo, &hi) || steps >= 1 << 16 {
                return (lo, hi);
            }
            v = bv.iter().zip(&v).map(|(b, x)| b + x).collect();
            steps += 1;
            if steps.is_multiple_of(64) {
                let g = v.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
                if !g.is_one() {
                    v.iter_mut().for_each(|x| *x /= &g);
                }
            }
        }
    }

    /// Primitive essential matrix: irreducible and aperiodic.
    pub fn check_mixing(&self) -> Mixing {
        let ess = self.essential();
        let states: Vec<usize> = (0..self.alphabet()).filter(|&a| ess[a]).collect();
        let comps = self.cyclic_components();
        if comps.len() != 1 || comps[0] != states {
            return Mixing::NotMixing;
        }
        if self.period(&states) == 1 {
            Mixing::Mixing
        } else {
            Mixing::NotMixing
        }
    }

    /// Period of an irreducible component: gcd of `level(a) + 1 - level(b)`
    /// over its edges, with BFS levels from its first state.
    fn period(&self, comp: &[usize]) -> u64 {
        let k = self.alphabet();
        let mut level = vec![None::<u64>; k];
        let mut queue = std::collections::VecDeque::from([comp[0]]);
        level[comp[0]] = Some(0);
        let inside: Vec<bool> = (0..k).map(|a| comp.binary_search(&a).is_ok()).collect();
        while let Some(a) = queue.pop_front() {
            for b in 0..k {
                if inside[b] && self.allowed[a][b] && level[b].is_none() {
                    level[b] = Some(level[a].expect("visited") + 1);
                    queue.push_back(b);
                }
            }
        }
        let mut g = 0u64;
        for &a in comp {
            for &b in comp {
                if self.allowed[a][b] {
                    let (la, lb) = (level[a].expect("reachable"), level[b].expect("reachable"));
                    g = num_integer::Integer::gcd(&g, &(la + 1).abs_diff(lb));
                }
            }
        }
        g
    }

    /// Letter-to-string conventions: digits for alphabets up to 10, `.`-separated
    /// indices otherwise.
    pub fn parse_word(&self, s: &str) -> Result<Vec<usize>, SftError> {
        parse_word(s, self.alphabet())
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        format_word(w, self.alphabet())
    }
}

/// `sft_entropy` as a free function.
pub fn sft_entropy(z: &Sft, eps: &Rational) -> Result<EntropyBound, SftError> {
    z.entropy(eps)
}

pub fn count_words(z: &Sft, n: u32) -> BigUint {
    z.count_words(n)
}

pub fn check_mixing(z: &Sft) -> Mixing {
    z.check_mixing()
}

pub fn parse_word(s: &str, k: usize) -> Result<Vec<usize>, SftError> {
    let bad = || SftError::Word(s.chars().take(64).collect());
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let letters: Vec<usize> = if k > 10 {
        s.split('.')
            .map(|t| {
                if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(bad());
                }
                t.parse::<usize>().map_err(|_| bad())
            })
            .collect::<Result<_, _>>()?
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect::<Result<_, _>>()?
    };
    if letters.iter().any(|&a| a >= k) {
        return Err(bad());
    }
    Ok(letters)
}

pub fn format_word(w: &[usize], k: usize) -> String {
    let parts: Vec<String> = w.iter().map(|a| a.to_string()).collect();
    parts.join(if k > 10 { "." } else { "" })
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct St<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    // iterative to stay safe on large alphabets
    fn visit(st: &mut St<'_>, root: usize) {
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        st.index[root] = Some(st.next);
        st.low[root] = st.next;
        st.next += 1;
        st.stack.push(root);
        st.on[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < st.adj[v].len() {
                let w = st.adj[v][*i];
                *i += 1;
                match st.index[w] {
                    None => {
                        st.index[w] = Some(st.next);
                        st.low[w] = st.next;
                        st.next += 1;
                        st.stack.push(w);
                        st.on[w] = true;
                        call.push((w, 0));
                    }
                    Some(iw) if st.on[w] => st.low[v] = st.low[v].min(iw),
                    Some(_) => {}
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    st.low[parent] = st.low[parent].min(st.low[v]);
                }
                if Some(st.low[v]) == st.index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = st.stack.pop().expect("on stack");
                        st.on[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    st.out.push(comp);
                }
            }
        }
    }
    let n = adj.len();
    let mut st = St {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if st.index[v].is_none() {
            visit(&mut st, v);
        }
    }
    st.out
}
