//! The prefix coding Ψ of a binary mixing SFT with positive entropy.
//!
//! Reading a language word left to right, letter `w_k` is written out exactly
//! when flipping it still gives a language word. Letters that are forced by
//! their predecessor carry no information and are skipped.

use super::{Mixing, Sft, SftError};

fn admissible(z: &Sft) -> Result<Vec<bool>, SftError> {
    if z.alphabet() != 2 || z.check_mixing() != Mixing::Mixing {
        return Err(SftError::NotAdmissible);
    }
    let ess = z.essential();
    let edges = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).filter(|&(a, b)| z.allows(a, b)).count();
    // an irreducible graph with as many edges as vertices is a single cycle
    if edges <= 2 {
        return Err(SftError::NotAdmissible);
    }
    Ok(ess)
}

/// Whether the letter after `prev` (or the first letter when `prev` is
/// `None`) is free, i.e. both letters may follow.
fn free_after(z: &Sft, ess: &[bool], prev: Option<usize>) -> bool {
    match prev {
        None => ess[0] && ess[1],
        Some(a) => z.allows(a, 0) && z.allows(a, 1),
    }
}

/// The only letter allowed after `prev`, when it is forced.
fn forced_after(z: &Sft, ess: &[bool], prev: Option<usize>) -> usize {
    match prev {
        None => usize::from(!ess[0]),
        Some(a) => usize::from(!z.allows(a, 0)),
    }
}

/// `Ψ(w)`.
pub fn kappa_encode(z: &Sft, w: &[usize]) -> Result<Vec<u8>, SftError> {
    let ess = admissible(z)?;
    if !z.contains_with(&ess, w) {
        return Err(SftError::NotInLanguage);
    }
    let mut out = Vec::with_capacity(w.len());
    let mut prev = None;
    for &a in w {
        if free_after(z, &ess, prev) {
            out.push(a as u8);
        }
        prev = Some(a);
    }
    Ok(out)
}

/// The shortest language word `w` with `Ψ(w) = b`.
///
/// Each free position consumes the next bit and each forced position appends
/// its forced letter, so the result never ends with a forced letter.
pub fn kappa_decode(z: &Sft, b: &[u8]) -> Result<Vec<usize>, SftError> {
    let ess = admissible(z)?;
    if b.iter().any(|&x| x > 1) {
        return Err(SftError::Word(format!("{b:?}")));
    }
    let mut w = Vec::with_capacity(b.len() * 2);
    let mut bits = b.iter();
    let mut prev = None;
    let mut pending = bits.next();
    while let Some(&bit) = pending {
        let a = if free_after(z, &ess, prev) {
            pending = bits.next();
            usize::from(bit)
        } else {
            forced_after(z, &ess, prev)
        };
        w.push(a);
        prev = Some(a);
    }
    Ok(w)
}

/// Largest `|kappa_decode(b)|` over binary words `b` of length `m`: enough
/// letters to determine `m` output bits.
pub fn kappa_modulus(z: &Sft, m: usize) -> Result<usize, SftError> {
    let ess = admissible(z)?;
    // cost[s] = letters needed to consume the remaining bits, after state s
    // (index 2 stands for the empty prefix)
    let step = |prev: Option<usize>, cost: &[usize; 3]| -> usize {
        let mut p = prev;
        let mut forced = 0;
        while !free_after(z, &ess, p) {
            let a = forced_after(z, &ess, p);
            forced += 1;
            p = Some(a);
        }
        forced + 1 + cost[0].max(cost[1])
    };
    let mut cost = [0usize; 3];
    for _ in 0..m {
        cost = [step(Some(0), &cost), step(Some(1), &cost), step(None, &cost)];
    }
    Ok(cost[2])
}
