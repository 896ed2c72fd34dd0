//! Word-level helpers for fixed-width bitsets stored as `[u64]`.

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
pub(crate) fn get(words: &[u64], i: usize) -> bool {
    words[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
pub(crate) fn set(words: &mut [u64], i: usize) {
    words[i / WORD] |= 1u64 << (i % WORD);
}

#[inline]
pub(crate) fn clear(words: &mut [u64], i: usize) {
    words[i / WORD] &= !(1u64 << (i % WORD));
}

#[inline]
pub(crate) fn count(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn is_empty(words: &[u64]) -> bool {
    words.iter().all(|&w| w == 0)
}

/// Sets bits `0..len` and clears the tail of the last word.
pub(crate) fn fill_prefix(words: &mut [u64], len: usize) {
    for (i, w) in words.iter_mut().enumerate() {
        let lo = i * WORD;
        *w = if lo + WORD <= len {
            u64::MAX
        } else if lo >= len {
            0
        } else {
            (1u64 << (len - lo)) - 1
        };
    }
}

/// ORs `src` (bits `0..len`) into `dst` starting at bit `offset`.
pub(crate) fn or_shifted(dst: &mut [u64], src: &[u64], len: usize, offset: usize) {
    if len == 0 {
        return;
    }
    let shift = offset % WORD;
    let base = offset / WORD;
    let src_words = words_for(len);
    for (i, &w) in src.iter().take(src_words).enumerate() {
        let w = if (i + 1) * WORD > len && !len.is_multiple_of(WORD) {
            w & ((1u64 << (len % WORD)) - 1)
        } else {
            w
        };
        if w == 0 {
            continue;
        }
        dst[base + i] |= w << shift;
        if shift != 0 && base + i + 1 < dst.len() {
            dst[base + i + 1] |= w >> (WORD - shift);
        }
    }
}

/// Iterator over set bit positions in ascending order.
pub(crate) struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        Ones {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}
