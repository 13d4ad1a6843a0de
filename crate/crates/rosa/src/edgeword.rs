//! Edgewords over the alphabet `{0, 2, …, n-2}`: the Sub Rosa words, the
//! billiard word and its palindromic candidates, counting functions and
//! balance constants.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Result, RosaError};
use crate::geometry::{check_n, compare_exact, AlgebraicReal};

/// A finite word over `{0, 2, …, n-2}`.
///
/// Letter `0` stands for a unit edge, letter `2m` for a rhombus of angle
/// `2mπ/n` cut along its diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edgeword {
    n: usize,
    letters: Vec<u32>,
}

impl Edgeword {
    pub fn new(n: usize, letters: Vec<u32>) -> Result<Self> {
        check_n(n)?;
        for &l in &letters {
            if l % 2 != 0 || l as usize > n - 2 {
                return Err(RosaError::InvalidLetter { n, letter: l });
            }
        }
        Ok(Edgeword { n, letters })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    /// Parses `"0204"` or `"02(10)4"`; whitespace and commas are ignored.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                c if c.is_ascii_digit() => letters.push(c as u32 - '0' as u32),
                '(' => {
                    let mut num = String::new();
                    loop {
                        match chars.next() {
                            Some(')') => break,
                            Some(d) if d.is_ascii_digit() => num.push(d),
                            _ => return Err(RosaError::Parse(s.to_string())),
                        }
                    }
                    letters.push(num.parse().map_err(|_| RosaError::Parse(s.to_string()))?);
                }
                ',' | ' ' | '|' => {}
                _ => return Err(RosaError::Parse(s.to_string())),
            }
        }
        Self::new(n, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn reversed(&self) -> Edgeword {
        let mut letters = self.letters.clone();
        letters.reverse();
        Edgeword { n: self.n, letters }
    }

    pub fn is_palindrome(&self) -> bool {
        self.letters.iter().eq(self.letters.iter().rev())
    }

    pub fn prefix(&self, len: usize) -> Edgeword {
        Edgeword {
            n: self.n,
            letters: self.letters[..len.min(self.len())].to_vec(),
        }
    }

    pub fn concat(&self, o: &Edgeword) -> Edgeword {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&o.letters);
        Edgeword { n: self.n, letters }
    }

    /// True when every letter of the alphabet occurs.
    pub fn has_all_letters(&self) -> bool {
        let counts = abelianize(self).counts;
        counts.iter().all(|&c| c > 0)
    }
}

impl fmt::Display for Edgeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            if l >= 10 {
                write!(f, "({l})")?;
            } else {
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Edgeword {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

/// Letter counts: entry `i` is the number of letters `2i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianVector {
    pub counts: Vec<u64>,
}

pub fn abelianize(u: &Edgeword) -> AbelianVector {
    let mut counts = vec![0u64; u.n / 2];
    for &l in &u.letters {
        counts[(l / 2) as usize] += 1;
    }
    AbelianVector { counts }
}

/// `γ = (cos(iπ/n))_{0 ≤ i < n/2}`.
pub fn frequency_vector(n: usize) -> Result<Vec<f64>> {
    check_n(n)?;
    Ok((0..n / 2)
        .map(|i| (i as f64 * std::f64::consts::PI / n as f64).cos())
        .collect())
}

fn run(k: u32) -> Vec<u32> {
    (0..k / 2).map(|i| 2 * i).collect()
}

/// The Sub Rosa edgeword `Σ(n)`.
pub fn subrosa_edgeword(n: usize) -> Result<Edgeword> {
    check_n(n)?;
    let n32 = n as u32;
    let mut left = run(n32);
    for k in (2..n32).step_by(2) {
        left.extend(run(k).into_iter().rev());
    }
    let mut right = Vec::new();
    for k in (2..n32).step_by(2).rev() {
        right.extend(run(k));
    }
    right.extend(run(n32).into_iter().rev());
    left.extend(right);
    Edgeword::new(n, left)
}

/// Generator of the billiard word: crossings of the line
/// `t·γ + (1/2, …, 1/2)` with the hyperplanes `x_i = k`, `k ≥ 1`.
///
/// Crossing family `i` emits the letter `2i`; events are ordered exactly.
#[derive(Clone, Debug)]
pub struct BilliardWord {
    n: usize,
    inv_cos: Vec<AlgebraicReal>,
    next_k: Vec<i64>,
    next_t: Vec<AlgebraicReal>,
}

impl BilliardWord {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        let inv_cos: Vec<AlgebraicReal> = (0..n / 2)
            .map(|i| AlgebraicReal::integer(1).div(&AlgebraicReal::cos_pi(i as i64, n as i64)))
            .collect();
        let next_t = inv_cos
            .iter()
            .map(|c| AlgebraicReal::rational(1, 2).mul(c))
            .collect();
        Ok(BilliardWord {
            n,
            inv_cos,
            next_k: vec![1; n / 2],
            next_t,
        })
    }

    /// Crossing time `(k - 1/2)/cos(iπ/n)`.
    pub fn crossing_time(&self, i: usize, k: i64) -> AlgebraicReal {
        AlgebraicReal::rational(2 * k - 1, 2).mul(&self.inv_cos[i])
    }

    /// The next letter.
    pub fn next_letter(&mut self) -> Result<u32> {
        let mut best = 0;
        for i in 1..self.n / 2 {
            match compare_exact(&self.next_t[i], &self.next_t[best])? {
                Ordering::Less => best = i,
                Ordering::Equal => return Err(RosaError::Tie),
                Ordering::Greater => {}
            }
        }
        self.next_k[best] += 1;
        self.next_t[best] = self.crossing_time(best, self.next_k[best]);
        Ok(2 * best as u32)
    }
}

/// The first `len` letters of the billiard word.
pub fn billiard_prefix(n: usize, len: usize) -> Result<Edgeword> {
    let mut w = BilliardWord::new(n)?;
    let mut letters = Vec::with_capacity(len);
    for _ in 0..len {
        letters.push(w.next_letter()?);
    }
    Edgeword::new(n, letters)
}

/// The candidate `P_i = pref_i(w) · reverse(pref_i(w))`.
pub fn candidate_edgeword(n: usize, i: usize) -> Result<Edgeword> {
    let p = billiard_prefix(n, i)?;
    Ok(p.concat(&p.reversed()))
}

/// `f_j(x)`: occurrences of letter `j` among the first `x` letters.
pub fn counting(u: &Edgeword, j: u32, x: usize) -> usize {
    u.letters[..x.min(u.len())]
        .iter()
        .filter(|&&l| l == j)
        .count()
}

/// A prefix length, or `+∞` when no prefix suffices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CountBound {
    Finite(usize),
    Infinite,
}

impl fmt::Display for CountBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountBound::Finite(x) => write!(f, "{x}"),
            CountBound::Infinite => f.write_str("inf"),
        }
    }
}

/// `f_j^{-1}(y)`: the length of the shortest prefix with at least `y` letters `j`.
pub fn counting_inverse(u: &Edgeword, j: u32, y: usize) -> CountBound {
    if y == 0 {
        return CountBound::Finite(0);
    }
    let mut seen = 0;
    for (x, &l) in u.letters.iter().enumerate() {
        if l == j {
            seen += 1;
            if seen == y {
                return CountBound::Finite(x + 1);
            }
        }
    }
    CountBound::Infinite
}

/// Smallest `k` such that every factor `v` and letters `j1 < j2` satisfy
/// `|v|_{j1} - |v|_{j2} ≥ -k`.
pub fn balance_constant(u: &Edgeword) -> u64 {
    let m = u.n / 2;
    let mut worst: i64 = 0;
    for a in 0..m {
        for b in a + 1..m {
            let (ja, jb) = (2 * a as u32, 2 * b as u32);
            let mut cur: i64 = 0;
            for &l in &u.letters {
                let d = if l == jb {
                    1
                } else if l == ja {
                    -1
                } else {
                    0
                };
                cur = (cur + d).max(d);
                worst = worst.max(cur);
            }
        }
    }
    worst as u64
}
