//! Bit strings, reproducible sequence generators, oracle shifting and
//! ASCII bit-file I/O.

use std::fmt;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite word over `{0,1}`. Every element is `0` or `1`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// Builds from raw values; anything other than 0/1 is rejected.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidArgument(format!(
                "bit value {} at index {pos}",
                bits[pos]
            )));
        }
        Ok(Self(bits))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The low `len` bits of `code`, most significant first.
    pub fn from_code(code: u64, len: usize) -> Self {
        Self(
            (0..len)
                .map(|i| ((code >> (len - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    /// Every string of length `len` in lexicographic order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        (0..1u64 << len).map(move |c| BitString::from_code(c, len))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1, "bit must be 0 or 1");
        self.0.push(bit);
    }

    pub fn slice(&self, range: Range<usize>) -> BitString {
        Self(self.0[range].to_vec())
    }

    pub fn prefix(&self, n: usize) -> BitString {
        self.slice(0..n)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Packs `self[start..start+len]` into an integer, most significant bit first.
    pub fn code_at(&self, start: usize, len: usize) -> u64 {
        debug_assert!(len <= 64);
        self.0[start..start + len]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// Packs the whole string; only meaningful for `len() <= 64`.
    pub fn code(&self) -> u64 {
        self.code_at(0, self.len())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Strict parse: only `0` and `1`, no whitespace.
    fn from_str(s: &str) -> Result<Self> {
        s.char_indices()
            .map(|(offset, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                found => Err(Error::IllegalChar { offset, found }),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Self)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// splitmix64, used for every pseudo-random draw in the crate so that
/// sequences are bit-exact across implementations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..n` (`n > 0`).
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    pub fn bit(&mut self) -> u8 {
        (self.next_u64() >> 63) as u8
    }

    /// `true` with probability `num/den`, using the top 53 bits as a draw in `[0,1)`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        let u = (self.next_u64() >> 11) as u128;
        (u * den as u128) < ((num as u128) << 53)
    }

    pub fn bits(&mut self, n: usize) -> BitString {
        BitString((0..n).map(|_| self.bit()).collect())
    }
}

/// Where a sequence prefix comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SequenceSpec {
    /// Concatenated binary expansions of 1, 2, 3, …
    Champernowne,
    /// `pattern` repeated forever.
    Periodic { pattern: BitString },
    /// i.i.d. bits, `1` with probability `p_num/p_den`.
    Bernoulli { p_num: u64, p_den: u64, seed: u64 },
    /// An ASCII bit file.
    File { path: PathBuf },
}

impl SequenceSpec {
    pub fn zeros() -> Self {
        Self::Periodic {
            pattern: BitString::zeros(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Periodic { pattern } if pattern.is_empty() => {
                Err(Error::InvalidSpec("periodic pattern is empty".into()))
            }
            Self::Bernoulli { p_num, p_den, .. } if *p_den == 0 || p_num > p_den => {
                Err(Error::InvalidSpec(format!(
                    "bernoulli probability {p_num}/{p_den} not in [0,1]"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Parses the compact form used on the command line:
    /// `champernowne`, `zeros`, `ones`, `periodic:<bits>`,
    /// `bernoulli:<num>/<den>:<seed>`, `file:<path>`; anything else is a path.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let spec = match s.split_once(':') {
            _ if s == "champernowne" => Self::Champernowne,
            _ if s == "zeros" => Self::zeros(),
            _ if s == "ones" => Self::Periodic {
                pattern: "1".parse()?,
            },
            Some(("periodic", pat)) => Self::Periodic {
                pattern: pat.parse()?,
            },
            Some(("bernoulli", rest)) => {
                let (p, seed) = rest.split_once(':').unwrap_or((rest, "0"));
                let (num, den) = p.split_once('/').unwrap_or((p, "1"));
                let bad = |_| Error::InvalidSpec(format!("bad bernoulli spec {s:?}"));
                Self::Bernoulli {
                    p_num: num.trim().parse().map_err(bad)?,
                    p_den: den.trim().parse().map_err(bad)?,
                    seed: seed.trim().parse().map_err(bad)?,
                }
            }
            Some(("file", path)) => Self::File { path: path.into() },
            _ => Self::File { path: s.into() },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Champernowne => f.write_str("champernowne"),
            Self::Periodic { pattern } => write!(f, "periodic:{pattern}"),
            Self::Bernoulli { p_num, p_den, seed } => write!(f, "bernoulli:{p_num}/{p_den}:{seed}"),
            Self::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

/// Generates exactly `n` bits. Deterministic, and `generate(s, n)` is a
/// prefix of `generate(s, m)` whenever `n <= m`.
pub fn generate(spec: &SequenceSpec, n: usize) -> Result<BitString> {
    spec.validate()?;
    let bits = match spec {
        SequenceSpec::Champernowne => {
            let mut out = Vec::with_capacity(n);
            let mut i: u64 = 1;
            while out.len() < n {
                let width = 64 - i.leading_zeros() as usize;
                for j in (0..width).rev() {
                    if out.len() == n {
                        break;
                    }
                    out.push(((i >> j) & 1) as u8);
                }
                i += 1;
            }
            out
        }
        SequenceSpec::Periodic { pattern } => {
            pattern.bits().iter().copied().cycle().take(n).collect()
        }
        SequenceSpec::Bernoulli { p_num, p_den, seed } => {
            let mut rng = SplitMix64::new(*seed);
            (0..n).map(|_| rng.chance(*p_num, *p_den) as u8).collect()
        }
        SequenceSpec::File { path } => {
            let all = read_bits(path)?;
            if all.len() < n {
                return Err(Error::InsufficientLength {
                    needed: n,
                    available: all.len(),
                });
            }
            return Ok(all.prefix(n));
        }
    };
    Ok(BitString(bits))
}

/// The oracle `β` with `β[i+c] = x[i]`; the first `c` positions hold `pad`.
/// Same length as `x`.
pub fn shift_oracle(x: &BitString, c: usize, pad: u8) -> BitString {
    assert!(pad <= 1, "pad must be a bit");
    let n = x.len();
    let keep = n.saturating_sub(c);
    let mut out = vec![pad; n - keep];
    out.extend_from_slice(&x.bits()[..keep]);
    BitString(out)
}

/// Parses ASCII bit text: `0`/`1` are bits, ASCII whitespace is skipped,
/// anything else is an error carrying its byte offset.
pub fn parse_bits(bytes: &[u8]) -> Result<BitString> {
    let mut out = Vec::with_capacity(bytes.len());
    for (offset, &byte) in bytes.iter().enumerate() {
        match byte {
            b'0' => out.push(0),
            b'1' => out.push(1),
            b if b.is_ascii_whitespace() => {}
            b => {
                return Err(Error::IllegalChar {
                    offset,
                    found: b as char,
                })
            }
        }
    }
    Ok(BitString(out))
}

pub fn read_bits(path: impl AsRef<Path>) -> Result<BitString> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_bits(&bytes)
}

/// Writes the bits as one line of ASCII digits followed by a newline.
pub fn write_bits(path: impl AsRef<Path>, x: &BitString) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format!("{x}\n")).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn periodic_repeats_pattern() {
        let spec = SequenceSpec::Periodic { pattern: bs("01") };
        assert_eq!(generate(&spec, 6).unwrap(), bs("010101"));
    }

    #[test]
    fn champernowne_first_bits() {
        // 1 10 11 100
        assert_eq!(
            generate(&SequenceSpec::Champernowne, 8).unwrap(),
            bs("11011100")
        );
        assert_eq!(generate(&SequenceSpec::Champernowne, 0).unwrap(), bs(""));
    }

    #[test]
    fn bernoulli_probability_one() {
        let spec = SequenceSpec::Bernoulli {
            p_num: 1,
            p_den: 1,
            seed: 7,
        };
        assert_eq!(generate(&spec, 5).unwrap(), bs("11111"));
        let spec = SequenceSpec::Bernoulli {
            p_num: 0,
            p_den: 3,
            seed: 7,
        };
        assert_eq!(generate(&spec, 5).unwrap(), bs("00000"));
    }

    #[test]
    fn splitmix_reference_values() {
        // Reference output of splitmix64 seeded with 0.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn invalid_specs_rejected() {
        let empty = SequenceSpec::Periodic { pattern: bs("") };
        assert!(matches!(generate(&empty, 3), Err(Error::InvalidSpec(_))));
        let bad_p = SequenceSpec::Bernoulli {
            p_num: 3,
            p_den: 2,
            seed: 0,
        };
        assert!(matches!(generate(&bad_p, 3), Err(Error::InvalidSpec(_))));
        let missing = SequenceSpec::File {
            path: "/nonexistent/bits.txt".into(),
        };
        assert!(matches!(generate(&missing, 3), Err(Error::Io { .. })));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_oracle(&bs("1011"), 1, 0), bs("0101"));
        assert_eq!(shift_oracle(&bs("1011"), 0, 0), bs("1011"));
        assert_eq!(shift_oracle(&bs("111"), 5, 0), bs("000"));
        assert_eq!(shift_oracle(&bs("101"), 1, 1), bs("110"));
    }

    #[test]
    fn parse_bits_examples() {
        assert_eq!(parse_bits(b"01 1\n0").unwrap(), bs("0110"));
        assert_eq!(parse_bits(b"").unwrap(), bs(""));
        assert_eq!(
            parse_bits(b"012"),
            Err(Error::IllegalChar {
                offset: 2,
                found: '2'
            })
        );
    }

    #[test]
    fn spec_parse_forms() {
        assert_eq!(
            SequenceSpec::parse("champernowne").unwrap(),
            SequenceSpec::Champernowne
        );
        assert_eq!(SequenceSpec::parse("zeros").unwrap(), SequenceSpec::zeros());
        assert_eq!(
            SequenceSpec::parse("bernoulli:1/2:9").unwrap(),
            SequenceSpec::Bernoulli {
                p_num: 1,
                p_den: 2,
                seed: 9
            }
        );
        assert_eq!(
            SequenceSpec::parse("seq.txt").unwrap(),
            SequenceSpec::File {
                path: "seq.txt".into()
            }
        );
        assert!(SequenceSpec::parse("periodic:").is_err());
        assert!(SequenceSpec::parse("bernoulli:5/4:1").is_err());
        for s in [
            "champernowne",
            "periodic:0110",
            "bernoulli:3/7:11",
            "file:x.txt",
        ] {
            assert_eq!(SequenceSpec::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn code_packing() {
        let x = bs("10110");
        assert_eq!(x.code_at(1, 3), 0b011);
        assert_eq!(BitString::from_code(0b011, 3), bs("011"));
        assert_eq!(
            BitString::all_of_len(2).collect::<Vec<_>>(),
            vec![bs("00"), bs("01"), bs("10"), bs("11")]
        );
    }
}
