//! Symmetric Boolean functions given by their value at each Hamming weight,
//! plus the restriction and OR-embedding constructions used by the
//! lower-bound machinery.
//!
//! Indices are 1-based throughout the public interface.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Named families of symmetric functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Or,
    And,
    Parity,
    Majority,
    Threshold(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Or => write!(f, "or"),
            Family::And => write!(f, "and"),
            Family::Parity => write!(f, "parity"),
            Family::Majority => write!(f, "majority"),
            Family::Threshold(t) => write!(f, "threshold{t}"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        match s.as_str() {
            "or" => Ok(Family::Or),
            "and" => Ok(Family::And),
            "parity" => Ok(Family::Parity),
            "majority" | "maj" => Ok(Family::Majority),
            _ => {
                if let Some(t) = s.strip_prefix("threshold") {
                    let t: usize = t
                        .parse()
                        .map_err(|_| Error::Parameter(format!("bad threshold in '{s}'")))?;
                    Ok(Family::Threshold(t))
                } else {
                    Err(Error::Parameter(format!(
                        "unknown family '{s}' (or, and, parity, majority, threshold<t>)"
                    )))
                }
            }
        }
    }
}

/// A symmetric Boolean function on `n` bits: `spectrum[k]` is the value on
/// every input of Hamming weight `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricFunction {
    n: usize,
    spectrum: Vec<u8>,
}

impl SymmetricFunction {
    pub fn new(spectrum: Vec<u8>) -> Result<Self> {
        if spectrum.len() < 2 {
            return Err(Error::Parameter(
                "spectrum needs at least 2 entries (n >= 1)".into(),
            ));
        }
        if spectrum.iter().any(|&b| b > 1) {
            return Err(Error::Parameter("spectrum entries must be 0 or 1".into()));
        }
        Ok(Self {
            n: spectrum.len() - 1,
            spectrum,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spectrum(&self) -> &[u8] {
        &self.spectrum
    }

    /// Value on any input of Hamming weight `k`.
    pub fn value_at_weight(&self, k: usize) -> u8 {
        self.spectrum[k]
    }

    /// Evaluate on a concrete input (1-based convention irrelevant here:
    /// only the weight matters).
    pub fn eval(&self, x: &[bool]) -> u8 {
        assert_eq!(x.len(), self.n);
        self.spectrum[x.iter().filter(|&&b| b).count()]
    }

    pub fn is_constant(&self) -> bool {
        self.spectrum.iter().all(|&b| b == self.spectrum[0])
    }

    /// Output complement: NOT f.
    pub fn negated(&self) -> Self {
        Self {
            n: self.n,
            spectrum: self.spectrum.iter().map(|&b| 1 - b).collect(),
        }
    }

    /// Input complement: f(NOT x); reverses the spectrum.
    pub fn reflected(&self) -> Self {
        let mut s = self.spectrum.clone();
        s.reverse();
        Self { n: self.n, spectrum: s }
    }

    /// Parse the spectrum text format: a line `n= <int>` followed by n+1
    /// space-separated bits (whitespace between tokens is free-form).
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = match (tokens.next(), tokens.next()) {
            (Some("n="), Some(v)) => v
                .parse()
                .map_err(|_| Error::Parameter(format!("bad n value {v:?}")))?,
            (Some(first), second) => {
                // Accept the compact form "n=<int>".
                let rest = first
                    .strip_prefix("n=")
                    .ok_or_else(|| Error::Parameter("expected leading 'n= <int>'".into()))?;
                let n = rest
                    .parse()
                    .map_err(|_| Error::Parameter(format!("bad n value {rest:?}")))?;
                // Push back the second token by re-splitting below.
                return Self::parse_bits(n, second.into_iter().chain(tokens));
            }
            _ => return Err(Error::Parameter("empty spectrum text".into())),
        };
        Self::parse_bits(n, tokens)
    }

    fn parse_bits<'a>(n: usize, tokens: impl Iterator<Item = &'a str>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be >= 1".into()));
        }
        let bits: Vec<u8> = tokens
            .map(|t| match t {
                "0" => Ok(0),
                "1" => Ok(1),
                other => Err(Error::Parameter(format!("bad spectrum bit {other:?}"))),
            })
            .collect::<Result<_>>()?;
        if bits.len() != n + 1 {
            return Err(Error::Parameter(format!(
                "expected {} spectrum bits, got {}",
                n + 1,
                bits.len()
            )));
        }
        Self::new(bits)
    }
}

impl fmt::Display for SymmetricFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n= {}", self.n)?;
        for b in &self.spectrum {
            write!(f, " {b}")?;
        }
        Ok(())
    }
}

/// Build a named function on `n` bits.
pub fn make_named(family: Family, n: usize) -> Result<SymmetricFunction> {
    if n == 0 {
        return Err(Error::Parameter("n must be >= 1".into()));
    }
    let spectrum: Vec<u8> = match family {
        Family::Or => (0..=n).map(|k| u8::from(k >= 1)).collect(),
        Family::And => (0..=n).map(|k| u8::from(k == n)).collect(),
        Family::Parity => (0..=n).map(|k| (k % 2) as u8).collect(),
        Family::Majority => {
            let tau = n.div_ceil(2) + n.is_multiple_of(2) as usize; // ceil((n+1)/2)
            (0..=n).map(|k| u8::from(k >= tau)).collect()
        }
        Family::Threshold(tau) => {
            if tau < 1 || tau > n {
                return Err(Error::Parameter(format!(
                    "threshold {tau} out of range 1..={n}"
                )));
            }
            (0..=n).map(|k| u8::from(k >= tau)).collect()
        }
    };
    SymmetricFunction::new(spectrum)
}

/// Smallest t > 0 such that the spectrum is constant on weights {t, ..., n-t}
/// (an empty or singleton range counts as constant). Defined for every
/// non-constant function; always <= floor(n/2) + 1.
pub fn jump_parameter(f: &SymmetricFunction) -> Result<usize> {
    if f.is_constant() {
        return Err(Error::Domain("jump parameter of a constant function".into()));
    }
    let n = f.n();
    for t in 1..=(n / 2 + 1) {
        let range = t..=n.saturating_sub(t);
        let mut vals = range.filter_map(|k| f.spectrum.get(k));
        let constant = match vals.next() {
            None => true,
            Some(first) => vals.all(|v| v == first),
        };
        if constant {
            return Ok(t);
        }
    }
    unreachable!("t = floor(n/2)+1 always yields an empty or singleton range")
}

/// A partial assignment: some indices fixed to 1, some to 0, the rest free.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Restriction {
    pub ones: BTreeSet<usize>,
    pub zeros: BTreeSet<usize>,
}

impl Restriction {
    pub fn empty() -> Self {
        Self::default()
    }

    fn validate(&self, n: usize) -> Result<()> {
        for &i in self.ones.iter().chain(self.zeros.iter()) {
            if i < 1 || i > n {
                return Err(Error::Parameter(format!("index {i} out of range 1..={n}")));
            }
        }
        if !self.ones.is_disjoint(&self.zeros) {
            return Err(Error::Parameter("ones and zeros overlap".into()));
        }
        Ok(())
    }

    /// Remaining free indices, in increasing order.
    pub fn free(&self, n: usize) -> Vec<usize> {
        (1..=n)
            .filter(|i| !self.ones.contains(i) && !self.zeros.contains(i))
            .collect()
    }

    /// Assemble a full n-bit input from an assignment `y` to the free
    /// indices (in increasing index order).
    pub fn assemble(&self, n: usize, y: &[bool]) -> Vec<bool> {
        let free = self.free(n);
        assert_eq!(y.len(), free.len());
        let mut x = vec![false; n];
        for &i in &self.ones {
            x[i - 1] = true;
        }
        for (&i, &b) in free.iter().zip(y) {
            x[i - 1] = b;
        }
        x
    }
}

/// Restrict f by fixing the indices in `r`; the result acts on the free
/// indices and has spectrum `g[k] = f[k + |ones|]`.
pub fn restrict(f: &SymmetricFunction, r: &Restriction) -> Result<SymmetricFunction> {
    let n = f.n();
    r.validate(n)?;
    let m = n - r.ones.len() - r.zeros.len();
    if m == 0 {
        return Err(Error::Parameter("restriction leaves no free bits".into()));
    }
    let shift = r.ones.len();
    let spectrum = (0..=m).map(|k| f.spectrum[k + shift]).collect();
    SymmetricFunction::new(spectrum)
}

/// How the embedded OR relates to the original function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// g = OR directly.
    Identity,
    /// NOT g = OR.
    Negated,
    /// g on complemented inputs = OR.
    Reflected,
    /// NOT g on complemented inputs = OR.
    ReflectedNegated,
}

impl Polarity {
    pub fn flips_input(&self) -> bool {
        matches!(self, Polarity::Reflected | Polarity::ReflectedNegated)
    }

    pub fn flips_output(&self) -> bool {
        matches!(self, Polarity::Negated | Polarity::ReflectedNegated)
    }
}

/// An OR embedding: restricting `polarity`-adjusted f by `restriction`
/// yields OR on `m` bits.
#[derive(Debug, Clone)]
pub struct OrEmbedding {
    pub m: usize,
    pub restriction: Restriction,
    pub polarity: Polarity,
}

/// Embed an OR on m >= n - 2t bits into f by fixing bits, possibly after
/// complementing inputs and/or the output. Requires t < n/4.
pub fn embed_or(f: &SymmetricFunction) -> Result<OrEmbedding> {
    let n = f.n();
    let t = jump_parameter(f)?;
    if 4 * t >= n {
        return Err(Error::NotApplicable(format!(
            "t = {t} >= n/4 = {}/4; use the full-degree bound instead",
            n
        )));
    }
    for (g, flip_input) in [(f.clone(), false), (f.reflected(), true)] {
        // Walk down from the middle constant c = spectrum[t]: the jump is
        // the largest a <= t with spectrum[a-1] != c and spectrum[a..t] = c,
        // so the constant run from a is guaranteed to reach the middle.
        let c = g.spectrum[t];
        let mut a = t;
        while a >= 1 && g.spectrum[a - 1] == c {
            a -= 1;
        }
        if a == 0 {
            // No low-side jump on this orientation; try the reflected one.
            continue;
        }
        // Length of the constant run starting at a, capped at n - t + 1 so
        // the guaranteed-constant middle always suffices.
        let mut b = a;
        while b < n - t + 1 && g.spectrum[b + 1] == c {
            b += 1;
        }
        let m = b - (a - 1);
        let ones: BTreeSet<usize> = (1..a).collect();
        let zeros: BTreeSet<usize> = (a + m - 1..n).map(|i| i + 1).collect();
        let restriction = Restriction { ones, zeros };
        let flip_output = g.spectrum[a - 1] == 1;
        let polarity = match (flip_input, flip_output) {
            (false, false) => Polarity::Identity,
            (false, true) => Polarity::Negated,
            (true, false) => Polarity::Reflected,
            (true, true) => Polarity::ReflectedNegated,
        };
        let embedding = OrEmbedding {
            m,
            restriction,
            polarity,
        };
        debug_assert!(m >= n - 2 * t, "m = {m} < n - 2t");
        return Ok(embedding);
    }
    // Non-constant with jump parameter t means a jump occurs within the
    // first t weights on one of the two orientations.
    unreachable!("non-constant function must jump on some side within t")
}

/// Check that `emb` really is an OR embedding for f: restricting the
/// polarity-adjusted function must give OR_m's spectrum pointwise.
pub fn verify_embedding(f: &SymmetricFunction, emb: &OrEmbedding) -> Result<bool> {
    let mut g = f.clone();
    if emb.polarity.flips_input() {
        g = g.reflected();
    }
    if emb.polarity.flips_output() {
        g = g.negated();
    }
    let restricted = restrict(&g, &emb.restriction)?;
    let or_m = make_named(Family::Or, emb.m)?;
    Ok(restricted == or_m)
}
