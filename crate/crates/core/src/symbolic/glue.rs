//! Prefix maps on one-sided binary sequences and the gluing
//! `f(0^k 1 x) = 0^k 1 f_k(x)`, `f(0^∞) = 0^∞`.

use thiserror::Error;

use super::{kappa_decode, kappa_encode, Sft, SftError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GlueError {
    #[error("input symbol {0} is not binary")]
    NotBinary(u8),
    #[error("{needed} more input symbols needed")]
    NeedMore { needed: usize },
    #[error(transparent)]
    Sft(#[from] SftError),
}

/// A continuous map on `{0,1}^ℕ` presented through finite prefixes.
pub trait PrefixMap: Send + Sync {
    /// The output prefix determined by `input`.
    fn apply(&self, input: &[u8]) -> Result<Vec<u8>, GlueError>;

    /// An input length that always determines at least `m` output symbols.
    fn modulus(&self, m: usize) -> usize;
}

fn check_binary(input: &[u8]) -> Result<(), GlueError> {
    match input.iter().find(|&&b| b > 1) {
        Some(&b) => Err(GlueError::NotBinary(b)),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl PrefixMap for Identity {
    fn apply(&self, input: &[u8]) -> Result<Vec<u8>, GlueError> {
        check_binary(input)?;
        Ok(input.to_vec())
    }

    fn modulus(&self, m: usize) -> usize {
        m
    }
}

/// The shift of an admissible binary SFT carried to `{0,1}^ℕ` by the coding:
/// decode, drop the first letter, encode.
#[derive(Clone, Debug)]
pub struct KappaShift {
    z: Sft,
}

impl KappaShift {
    pub fn new(z: Sft) -> Result<Self, GlueError> {
        kappa_decode(&z, &[])?;
        Ok(KappaShift { z })
    }
}

impl PrefixMap for KappaShift {
    fn apply(&self, input: &[u8]) -> Result<Vec<u8>, GlueError> {
        check_binary(input)?;
        let w = kappa_decode(&self.z, input)?;
        if w.is_empty() {
            return Ok(Vec::new());
        }
        Ok(kappa_encode(&self.z, &w[1..])?)
    }

    /// Decoding `L` bits yields a word whose positions from the third on hold
    /// at least `L - 2` free letters, and the first letter of the shifted
    /// word is always free, so `m + 1` input bits give `m` output bits.
    fn modulus(&self, m: usize) -> usize {
        m + 1
    }
}

/// Finitely many components glued along the blocks `0^k 1`; blocks with
/// `k >= N` use the identity.
pub struct GlueMap {
    components: Vec<Box<dyn PrefixMap>>,
}

impl GlueMap {
    pub fn new(components: Vec<Box<dyn PrefixMap>>) -> Self {
        GlueMap { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    fn component(&self, k: usize) -> &dyn PrefixMap {
        self.components.get(k).map_or(&Identity, |c| c.as_ref())
    }

    /// Input length needed for `m` output symbols when the first `1` sits at
    /// position `k` (`None`: no `1` in the input).
    fn required(&self, m: usize, k: Option<usize>) -> usize {
        match k {
            Some(k) if k < m => k + 1 + self.component(k).modulus(m - k - 1),
            _ => m,
        }
    }

    /// Exactly `m` output symbols, or how many more input symbols are needed.
    pub fn prefix(&self, input: &[u8], m: usize) -> Result<Vec<u8>, GlueError> {
        let mut out = self.apply(input)?;
        if out.len() >= m {
            out.truncate(m);
            return Ok(out);
        }
        let k = input.iter().position(|&b| b == 1);
        let needed = self.required(m, k).saturating_sub(input.len()).max(1);
        Err(GlueError::NeedMore { needed })
    }
}

impl PrefixMap for GlueMap {
    fn apply(&self, input: &[u8]) -> Result<Vec<u8>, GlueError> {
        check_binary(input)?;
        let Some(k) = input.iter().position(|&b| b == 1) else {
            return Ok(vec![0; input.len()]);
        };
        let mut out = input[..=k].to_vec();
        out.extend(self.component(k).apply(&input[k + 1..])?);
        Ok(out)
    }

    fn modulus(&self, m: usize) -> usize {
        (0..m).map(|k| self.required(m, Some(k))).fold(m, usize::max)
    }
}

/// Determined output prefix of the glued map on `input`.
pub fn glue_maps(components: Vec<Box<dyn PrefixMap>>, input: &[u8]) -> Result<Vec<u8>, GlueError> {
    GlueMap::new(components).apply(input)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> GlueMap {
        GlueMap::new(vec![
            Box::new(Identity),
            Box::new(KappaShift::new(Sft::golden_mean()).unwrap()),
        ])
    }

    #[test]
    fn zeros_map_to_zeros() {
        let g = two();
        assert_eq!(g.apply(&[0; 7]).unwrap(), vec![0; 7]);
        assert_eq!(g.prefix(&[0; 3], 5), Err(GlueError::NeedMore { needed: 2 }));
    }

    #[test]
    fn component_routing() {
        let g = two();
        assert_eq!(g.apply(&[1, 0, 1, 1]).unwrap(), vec![1, 0, 1, 1]);
        // block 01 feeds x = 011 to the conjugated shift:
        // decode 011 -> 0101, drop -> 101, encode -> 1 then 1 (the 0 is forced)
        assert_eq!(g.apply(&[0, 1, 0, 1, 1]).unwrap(), vec![0, 1, 1, 1]);
    }

    #[test]
    fn modulus_is_sufficient() {
        let g = two();
        for m in 0..7 {
            let l = g.modulus(m);
            for x in 0..1u32 << l {
                let input: Vec<u8> = (0..l).map(|i| ((x >> i) & 1) as u8).collect();
                assert!(g.prefix(&input, m).is_ok(), "m = {m}, input {input:?}");
            }
        }
    }

    #[test]
    fn rejects_non_binary() {
        assert_eq!(Identity.apply(&[0, 2]), Err(GlueError::NotBinary(2)));
    }
}
