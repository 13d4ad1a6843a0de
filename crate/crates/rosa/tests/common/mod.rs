#![allow(dead_code)]

use rosa::edgeword::{balance_constant, Edgeword};

/// Palindromes of length at most `max_len` over the letters of `n` that use
/// every letter and are 2-almost-balanced.
pub fn eligible_palindromes(n: usize, max_len: usize) -> Vec<Edgeword> {
    let alphabet: Vec<u32> = (0..n as u32 / 2).map(|a| 2 * a).collect();
    let q = alphabet.len();
    let mut out = Vec::new();
    for len in 1..=max_len {
        let half = (len + 1) / 2;
        for mut code in 0..q.pow(half as u32) {
            let mut letters: Vec<u32> = (0..half)
                .map(|_| {
                    let l = alphabet[code % q];
                    code /= q;
                    l
                })
                .collect();
            let mirror: Vec<u32> = letters[..len / 2].iter().rev().copied().collect();
            letters.extend(mirror);
            let w = Edgeword::new(n, letters).unwrap();
            if w.has_all_letters() && balance_constant(&w) <= 2 {
                out.push(w);
            }
        }
    }
    out
}

pub fn even_range(lo: usize, hi: usize) -> impl Iterator<Item = usize> {
    (lo..=hi).step_by(2)
}
