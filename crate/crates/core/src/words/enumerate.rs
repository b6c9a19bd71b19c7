use super::{FreeWord, Letter};

/// Every reduced word of length at most `max_len`, identity first, in
/// shortlex order.
pub fn reduced_words(rank: u32, max_len: usize) -> Vec<FreeWord> {
    let alphabet: Vec<Letter> = (1..=rank as i32).flat_map(|i| [Letter::raw(i), Letter::raw(-i)]).collect();
    let mut out = vec![FreeWord::identity(rank)];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * (2 * rank as usize));
        for w in &layer {
            for &l in &alphabet {
                if w.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|v| FreeWord { rank, letters: v.clone() }));
        layer = next;
    }
    out
}

/// [`reduced_words`] without the identity.
pub fn nontrivial_words(rank: u32, max_len: usize) -> Vec<FreeWord> {
    let mut v = reduced_words(rank, max_len);
    v.remove(0);
    v
}
