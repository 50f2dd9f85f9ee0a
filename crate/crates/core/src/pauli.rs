//! Multi-site Pauli strings and their exact algebra.
//!
//! A [`PauliWord`] stores only the non-identity factors, sorted by site. Products
//! carry their phase as an exact power of `i`, so no floating point enters the
//! symbolic layer.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Single-site Pauli operator. Identity is represented by absence from a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// Product of two single-site Paulis: `self · other = phase · result`.
    ///
    /// `None` as the result means identity.
    pub fn mul(self, other: Pauli) -> (Phase, Option<Pauli>) {
        use Pauli::*;
        match (self, other) {
            (a, b) if a == b => (Phase::ONE, None),
            (X, Y) => (Phase::I, Some(Z)),
            (Y, Z) => (Phase::I, Some(X)),
            (Z, X) => (Phase::I, Some(Y)),
            (Y, X) => (Phase::MINUS_I, Some(Z)),
            (Z, Y) => (Phase::MINUS_I, Some(X)),
            (X, Z) => (Phase::MINUS_I, Some(Y)),
            _ => unreachable!(),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// (x, z) bits of the symplectic representation; Y = (1, 1).
    pub fn xz_bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "X" | "x" => Ok(Pauli::X),
            "Y" | "y" => Ok(Pauli::Y),
            "Z" | "z" => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("unknown Pauli letter {other:?}"))),
        }
    }
}

/// A phase `i^k`, `k` taken modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    /// `+1.0` or `-1.0` for real phases, `None` for `±i`.
    pub fn real_sign(self) -> Option<f64> {
        match self.0 {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Sparse product of single-site Paulis, sorted by site, identity elsewhere.
///
/// Ordering is lexicographic over the `(site, Pauli)` sequence with `X < Y < Z`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PauliWord {
    ops: Vec<(usize, Pauli)>,
}

impl PauliWord {
    pub fn identity() -> Self {
        Self { ops: Vec::new() }
    }

    pub fn single(site: usize, p: Pauli) -> Self {
        Self { ops: vec![(site, p)] }
    }

    /// Build a word from `(site, Pauli)` pairs in any order.
    ///
    /// Fails if a site appears twice.
    pub fn new(ops: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self, Error> {
        let mut ops: Vec<(usize, Pauli)> = ops.into_iter().collect();
        ops.sort_by_key(|&(s, _)| s);
        if let Some(w) = ops.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidWord(format!("site {} appears twice", w[0].0)));
        }
        Ok(Self { ops })
    }

    /// Parse a compact form such as `"X0 Z1 Y4"`; the empty string is the identity.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let mut ops = Vec::new();
        for tok in s.split_whitespace() {
            let (letter, site) = tok.split_at(1);
            let site: usize = site
                .trim_start_matches('@')
                .parse()
                .map_err(|_| Error::Parse(format!("bad word token {tok:?}")))?;
            ops.push((site, letter.parse()?));
        }
        Self::new(ops)
    }

    pub fn ops(&self) -> &[(usize, Pauli)] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.iter().map(|&(s, _)| s)
    }

    pub fn get(&self, site: usize) -> Option<Pauli> {
        self.ops
            .binary_search_by_key(&site, |&(s, _)| s)
            .ok()
            .map(|i| self.ops[i].1)
    }

    pub fn max_site(&self) -> Option<usize> {
        self.ops.last().map(|&(s, _)| s)
    }

    pub fn count_y(&self) -> usize {
        self.ops.iter().filter(|&&(_, p)| p == Pauli::Y).count()
    }

    /// True when every factor equals `p`.
    pub fn is_monochromatic(&self, p: Pauli) -> bool {
        !self.ops.is_empty() && self.ops.iter().all(|&(_, q)| q == p)
    }

    /// Replace the factor on `site` (or remove it with `None`).
    pub fn with_site(&self, site: usize, p: Option<Pauli>) -> Self {
        let mut ops: Vec<(usize, Pauli)> = self.ops.iter().copied().filter(|&(s, _)| s != site).collect();
        if let Some(p) = p {
            let pos = ops.partition_point(|&(s, _)| s < site);
            ops.insert(pos, (site, p));
        }
        Self { ops }
    }

    /// Relabel sites through `map`. The map must be injective on the support.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Self {
        let mut ops: Vec<(usize, Pauli)> = self.ops.iter().map(|&(s, p)| (map(s), p)).collect();
        ops.sort_by_key(|&(s, _)| s);
        Self { ops }
    }

    /// Bit masks (x, z) over sites, for words on at most 64 sites.
    pub fn masks(&self) -> (u64, u64) {
        let mut x = 0u64;
        let mut z = 0u64;
        for &(s, p) in &self.ops {
            let (bx, bz) = p.xz_bits();
            if bx {
                x |= 1 << s;
            }
            if bz {
                z |= 1 << s;
            }
        }
        (x, z)
    }
}

impl PartialOrd for PauliWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ops.cmp(&other.ops)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return f.write_str("I");
        }
        for (k, (s, p)) in self.ops.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}{s}")?;
        }
        Ok(())
    }
}

/// `a · b = phase · word`.
pub fn word_multiply(a: &PauliWord, b: &PauliWord) -> (Phase, PauliWord) {
    let mut phase = Phase::ONE;
    let mut ops = Vec::with_capacity(a.ops.len() + b.ops.len());
    let (mut i, mut j) = (0, 0);
    while i < a.ops.len() || j < b.ops.len() {
        match (a.ops.get(i), b.ops.get(j)) {
            (Some(&(sa, pa)), Some(&(sb, pb))) if sa == sb => {
                let (ph, p) = pa.mul(pb);
                phase = phase * ph;
                if let Some(p) = p {
                    ops.push((sa, p));
                }
                i += 1;
                j += 1;
            }
            (Some(&(sa, pa)), Some(&(sb, _))) if sa < sb => {
                ops.push((sa, pa));
                i += 1;
            }
            (Some(&(sa, pa)), None) => {
                ops.push((sa, pa));
                i += 1;
            }
            (_, Some(&(sb, pb))) => {
                ops.push((sb, pb));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (phase, PauliWord { ops })
}

/// True iff the words share an even number of sites with differing letters.
pub fn commutes(a: &PauliWord, b: &PauliWord) -> bool {
    let (mut i, mut j) = (0, 0);
    let mut clashes = 0usize;
    while i < a.ops.len() && j < b.ops.len() {
        let (sa, pa) = a.ops[i];
        let (sb, pb) = b.ops[j];
        match sa.cmp(&sb) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                if pa != pb {
                    clashes += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    clashes % 2 == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> PauliWord {
        PauliWord::parse(s).unwrap()
    }

    #[test]
    fn single_site_products() {
        assert_eq!(word_multiply(&w("X3"), &w("Y3")), (Phase::I, w("Z3")));
        assert_eq!(word_multiply(&w("X1"), &w("X1")), (Phase::ONE, PauliWord::identity()));
        assert_eq!(word_multiply(&w("Z0"), &w("X0")), (Phase::I, w("Y0")));
        assert_eq!(word_multiply(&w("Y2"), &w("X2")), (Phase::MINUS_I, w("Z2")));
    }

    #[test]
    fn disjoint_products_merge_sorted() {
        let (ph, p) = word_multiply(&w("Z4 X0"), &w("Y2"));
        assert_eq!(ph, Phase::ONE);
        assert_eq!(p, w("X0 Y2 Z4"));
    }

    #[test]
    fn commutation_examples() {
        assert!(commutes(&w("X0"), &w("Z1")));
        assert!(!commutes(&w("X0"), &w("Z0")));
        assert!(commutes(&w("X0 X1"), &w("Z0 Z1")));
        assert!(!commutes(&w("X0 X1"), &w("Z0 Y1 Z2")) == commutes(&w("X0"), &w("Z0")));
    }

    #[test]
    fn duplicate_site_rejected() {
        assert!(PauliWord::new([(1, Pauli::X), (1, Pauli::Z)]).is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        let a = w("Z3 X0 Y7");
        assert_eq!(a.to_string(), "X0 Z3 Y7");
        assert_eq!(w(&a.to_string()), a);
        assert_eq!(PauliWord::identity().to_string(), "I");
    }

    #[test]
    fn word_order_is_site_then_letter() {
        let mut v = vec![w("Z0"), w("X1"), w("X0 X1"), w("Y0"), w("X0")];
        v.sort();
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["X0", "X0 X1", "Y0", "Z0", "X1"]);
    }

    #[test]
    fn with_site_replaces_and_removes() {
        let a = w("X0 Z2");
        assert_eq!(a.with_site(1, Some(Pauli::Y)), w("X0 Y1 Z2"));
        assert_eq!(a.with_site(0, None), w("Z2"));
        assert_eq!(a.with_site(2, Some(Pauli::X)), w("X0 X2"));
    }
}
