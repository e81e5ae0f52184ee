use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Tensor word `[r^{e_1}|...|r^{e_s}]`, all `e_i >= 1`.
///
/// Ordered by total weight, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CobarWord(SmallVec<[u8; 8]>);

impl CobarWord {
    pub fn new(exps: &[u8]) -> Self {
        assert!(exps.iter().all(|&e| e >= 1), "word exponents must be positive");
        CobarWord(SmallVec::from_slice(exps))
    }

    pub fn empty() -> Self {
        CobarWord(SmallVec::new())
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the exponents; the internal degree is this times `|r|`.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn concat(&self, other: &CobarWord) -> CobarWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        CobarWord(v)
    }

    pub fn prepend(&self, e: u8) -> CobarWord {
        let mut v = SmallVec::with_capacity(self.0.len() + 1);
        v.push(e);
        v.extend_from_slice(&self.0);
        CobarWord(v)
    }

    /// Replace factor `i` by the two factors `(a, b)`.
    pub fn split_at_factor(&self, i: usize, a: u8, b: u8) -> CobarWord {
        let mut v = SmallVec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0[..i]);
        v.push(a);
        v.push(b);
        v.extend_from_slice(&self.0[i + 1..]);
        CobarWord(v)
    }
}

impl Ord for CobarWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for CobarWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CobarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&e| if e == 1 { "r".to_string() } else { format!("r^{e}") })
            .collect();
        write!(f, "[{}]", parts.join("|"))
    }
}

impl fmt::Debug for CobarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All words of length `len` and weight `weight`, parts bounded by `max_part`,
/// in increasing order.
pub fn words(len: usize, weight: u32, max_part: Option<u32>) -> Vec<CobarWord> {
    let max = max_part.unwrap_or(u32::MAX).min(255);
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(len);
    fn rec(len: usize, remaining: u32, max: u32, cur: &mut Vec<u8>, out: &mut Vec<CobarWord>) {
        if cur.len() == len {
            if remaining == 0 {
                out.push(CobarWord::new(cur));
            }
            return;
        }
        let slots = (len - cur.len()) as u32;
        if remaining < slots || remaining > slots.saturating_mul(max) {
            return;
        }
        let hi = (remaining - (slots - 1)).min(max);
        for e in 1..=hi {
            cur.push(e as u8);
            rec(len, remaining - e, max, cur, out);
            cur.pop();
        }
    }
    rec(len, weight, max, &mut cur, &mut out);
    out
}

/// Parse `"r^4|r"` or `"[r^4|r]"`; `"[]"` is the empty word.
pub fn parse_word(text: &str) -> crate::Result<CobarWord> {
    let t = text.trim();
    let t = t.strip_prefix('[').unwrap_or(t);
    let t = t.strip_suffix(']').unwrap_or(t).trim();
    if t.is_empty() {
        return Ok(CobarWord::empty());
    }
    let mut exps = Vec::new();
    for part in t.split('|') {
        let part = part.trim();
        let e = if part == "r" {
            1
        } else if let Some(rest) = part.strip_prefix("r^") {
            rest.trim().parse::<u8>().map_err(|_| crate::Error::Parse(format!("bad word factor {part:?}")))?
        } else {
            return Err(crate::Error::Parse(format!("bad word factor {part:?}")));
        };
        if e == 0 {
            return Err(crate::Error::Parse("word factors must be positive powers of r".into()));
        }
        exps.push(e);
    }
    Ok(CobarWord::new(&exps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions() {
        let w = words(2, 5, Some(4));
        let shown: Vec<String> = w.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["[r|r^4]", "[r^2|r^3]", "[r^3|r^2]", "[r^4|r]"]);
        assert_eq!(words(2, 5, None).len(), 4);
        assert_eq!(words(3, 7, None).len(), 15);
        assert_eq!(words(0, 0, None), vec![CobarWord::empty()]);
        assert!(words(0, 3, None).is_empty());
        assert!(words(3, 2, None).is_empty());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_word("r^4|r").unwrap(), CobarWord::new(&[4, 1]));
        assert_eq!(parse_word("[r]").unwrap(), CobarWord::new(&[1]));
        assert!(parse_word("[r^0]").is_err());
        assert!(parse_word("[x]").is_err());
    }

    #[test]
    fn count_matches_binomial() {
        // unbounded compositions of n into s parts: C(n-1, s-1)
        for n in 1..15u32 {
            for s in 1..6usize {
                let expect = num_integer::binomial(n as u64 - 1, s as u64 - 1);
                let expect = if s as u32 > n { 0 } else { expect };
                assert_eq!(words(s, n, None).len() as u64, expect);
            }
        }
    }
}
