//! Finite permutations, used as images of generators in finite quotients.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::words::Word;

/// A permutation of `{0, .., n-1}`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return invalid(format!("{images:?} is not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4 5)` on `n` points.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Perm> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let Some(inner) = rest.strip_prefix('(') else {
                return invalid(format!("bad cycle notation {text:?}"));
            };
            let Some(close) = inner.find(')') else {
                return invalid(format!("unclosed cycle in {text:?}"));
            };
            let points: Vec<usize> = inner[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| crate::Error::InvalidInput(format!("bad point in {text:?}")))?;
            if points.iter().any(|&p| p == 0 || p > n) {
                return invalid(format!("cycle point out of range 1..={n} in {text:?}"));
            }
            for (k, &p) in points.iter().enumerate() {
                images[p - 1] = points[(k + 1) % points.len()] - 1;
            }
            rest = inner[close + 1..].trim_start();
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    /// Left-to-right composition: first `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.images.len()];
        let mut order = 1u64;
        for start in 0..self.images.len() {
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len > 0 {
                order = lcm(order, len);
            }
        }
        order
    }

    /// Evaluates `w` with generator `g` sent to `gens[g]`, composing left to right.
    pub fn evaluate(w: &Word, gens: &[Perm]) -> Result<Perm> {
        let n = gens.first().map_or(0, Perm::degree);
        let mut acc = Perm::identity(n);
        for l in w.letters() {
            let Some(p) = gens.get(l.gen.0 as usize) else {
                return invalid(format!("no image for generator {}", l.gen.name()));
            };
            acc = if l.inverse { acc.then(&p.inverse()) } else { acc.then(p) };
        }
        Ok(acc)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut any = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            any = true;
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.images[i];
            }
            write!(f, "({})", cycle.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip_and_order() {
        let p = Perm::parse_cycles("(1 2)(3 4 5)", 5).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.to_string(), "(1 2)(3 4 5)");
        assert_eq!(Perm::parse_cycles(&p.to_string(), 5).unwrap(), p);
        assert!(p.then(&p.inverse()).is_identity());
        assert!(Perm::parse_cycles("(1 4)", 3).is_err());
    }

    #[test]
    fn evaluate_product() {
        let a = Perm::parse_cycles("(1 2)", 3).unwrap();
        let b = Perm::parse_cycles("(2 3)", 3).unwrap();
        let ab = Perm::evaluate(&"ab".parse().unwrap(), &[a.clone(), b.clone()]).unwrap();
        assert_eq!(ab.order(), 3);
        let r = Perm::evaluate(&"ababab".parse().unwrap(), &[a, b]).unwrap();
        assert!(r.is_identity());
    }
}
