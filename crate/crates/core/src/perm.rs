//! Permutations in one-line notation.
//!
//! `p` lists box numbers innermost first: `2413` puts box 2 (B) innermost,
//! then D, then A, with C outermost.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("`{0}` is not a permutation of 1..=n")]
    NotBijective(String),
    #[error("cannot parse permutation `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// `values` must be a bijection on `1..=values.len()`.
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                return Err(PermError::NotBijective(format!("{values:?}")));
            }
        }
        Ok(Permutation(values))
    }

    pub fn identity(k: usize) -> Self {
        Permutation((1..=k).collect())
    }

    pub fn reverse(k: usize) -> Self {
        Permutation((1..=k).rev().collect())
    }

    /// Letters `A`, `B`, … naming boxes innermost first, e.g. `BAC` → 213.
    pub fn from_letters(text: &str) -> Result<Self, PermError> {
        let values = text
            .chars()
            .map(|c| {
                if c.is_ascii_uppercase() {
                    Ok(c as usize - 'A' as usize + 1)
                } else {
                    Err(PermError::Parse(text.to_string()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// 1-based lookup `p_i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Number of pairs `i < j` with `p_i > p_j`: the coolness of the trick.
    pub fn inversions(&self) -> usize {
        let n = self.0.len();
        (0..n)
            .map(|i| (i + 1..n).filter(|&j| self.0[i] > self.0[j]).count())
            .sum()
    }

    /// `q` with `q[p_i] = i`.
    pub fn inverse(&self) -> Self {
        let mut q = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            q[v - 1] = i + 1;
        }
        Permutation(q)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different sizes"
        );
        Permutation(other.0.iter().map(|&i| self.0[i - 1]).collect())
    }

    /// Box letters innermost first, e.g. `CBA`.
    pub fn to_letters(&self) -> String {
        self.0
            .iter()
            .map(|&v| label_for(v - 1))
            .collect::<Vec<_>>()
            .concat()
    }

    /// All permutations of `1..=k` in lexicographic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=k).collect();
        loop {
            out.push(Permutation(current.clone()));
            // Next lexicographic permutation.
            let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

/// Box label for a 0-based index: `A`..`Z`, then `A1`, `B1`, ….
pub fn label_for(index: usize) -> String {
    let letter = char::from(b'A' + (index % 26) as u8);
    match index / 26 {
        0 => letter.to_string(),
        round => format!("{letter}{round}"),
    }
}

impl fmt::Display for Permutation {
    /// Digits run together when `k ≤ 9` (`2413`), comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        if self.0.len() <= 9 {
            f.write_str(&parts.concat())
        } else {
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// `2413`, `2,4,1,3`, or box letters such as `BAC`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        if t.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
            return Self::from_letters(t);
        }
        let parse_err = || PermError::Parse(text.to_string());
        let values = if t.contains(',') {
            t.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| parse_err()))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            t.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(parse_err))
                .collect::<Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err(parse_err());
        }
        Self::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(p("4321").inversions(), 6);
        assert_eq!(Permutation::identity(7).inversions(), 0);
        assert_eq!(p("2413").inversions(), 3);
    }

    #[test]
    fn inverses() {
        assert_eq!(p("2431").inverse(), p("4132"));
        assert_eq!(p("3241").inverse(), p("4213"));
        assert_eq!(p("2413").inverse(), p("3142"));
        assert_eq!(p("2413").compose(&p("3142")), Permutation::identity(4));
    }

    #[test]
    fn parsing() {
        assert_eq!(p("BAC"), p("213"));
        assert_eq!(p("2,1,3"), p("213"));
        assert_eq!(p("CBA").to_letters(), "CBA");
        assert!("2213".parse::<Permutation>().is_err());
        assert!("2403".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("a2".parse::<Permutation>().is_err());
        let long = Permutation::reverse(11);
        assert_eq!(long.to_string(), "11,10,9,8,7,6,5,4,3,2,1");
        assert_eq!(long.to_string().parse::<Permutation>().unwrap(), long);
    }

    #[test]
    fn all_is_lexicographic_and_complete() {
        let s3: Vec<String> = Permutation::all(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(s3, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(1), vec![p("1")]);
    }

    #[test]
    fn labels() {
        assert_eq!(label_for(0), "A");
        assert_eq!(label_for(25), "Z");
        assert_eq!(label_for(26), "A1");
    }
}
