#![allow(dead_code)]

use mubar_core::diagram::{BraidLetter, BraidWord};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random word over `s<i>`, `S<i>`, `v<i>` with `letters` letters.
pub fn random_braid(rng: &mut ChaCha8Rng, strands: usize, letters: usize, virtual_ok: bool) -> BraidWord {
    let kinds = if virtual_ok { 3 } else { 2 };
    let word = (0..letters)
        .map(|_| {
            let i = rng.gen_range(1..strands);
            match rng.gen_range(0..kinds) {
                0 => BraidLetter::ClassicalPos(i),
                1 => BraidLetter::ClassicalNeg(i),
                _ => BraidLetter::Virtual(i),
            }
        })
        .collect();
    BraidWord::new(strands, word).unwrap()
}

/// Random pure braid: a product of conjugated full twists `A_ij^±1`,
/// optionally with virtual letters mixed into the conjugators.
pub fn random_pure_braid(rng: &mut ChaCha8Rng, strands: usize, factors: usize, virtual_ok: bool) -> BraidWord {
    let mut word = Vec::new();
    for _ in 0..factors {
        let i = rng.gen_range(1..strands);
        let j = rng.gen_range(i + 1..=strands);
        let sign = rng.gen_bool(0.5);
        // conjugator σ_{j-1} ... σ_{i+1}, each letter classical or virtual
        let conj: Vec<BraidLetter> = (i + 1..j)
            .rev()
            .map(|k| {
                if virtual_ok && rng.gen_bool(0.5) {
                    BraidLetter::Virtual(k)
                } else if rng.gen_bool(0.5) {
                    BraidLetter::ClassicalPos(k)
                } else {
                    BraidLetter::ClassicalNeg(k)
                }
            })
            .collect();
        word.extend(conj.iter().copied());
        let twist = if sign { BraidLetter::ClassicalPos(i) } else { BraidLetter::ClassicalNeg(i) };
        word.push(twist);
        word.push(twist);
        word.extend(conj.iter().rev().map(|l| l.switched()));
    }
    BraidWord::new(strands, word).unwrap()
}

pub fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
