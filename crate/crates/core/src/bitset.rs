use alloc::vec;
use alloc::vec::Vec;

const WORD: usize = 64;

/// Fixed-capacity set of small integers, one bit per element.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    /// Set containing every element of `0..len`.
    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Capacity (the exclusive upper bound on elements).
    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        self.words[i / WORD] |= 1 << (i % WORD);
        !had
    }

    #[inline]
    pub fn remove(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        self.words[i / WORD] &= !(1 << (i % WORD));
        had
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Elements strictly greater than `i`, ascending.
    pub fn iter_above(&self, i: usize) -> Ones<'_> {
        let start = i + 1;
        if start >= self.len {
            return Ones {
                words: &self.words,
                idx: self.words.len(),
                cur: 0,
            };
        }
        let idx = start / WORD;
        let cur = self.words[idx] & (u64::MAX << (start % WORD));
        Ones {
            words: &self.words,
            idx,
            cur,
        }
    }
}

impl FromIterator<usize> for BitSet {
    /// Capacity is one past the largest element; prefer [`BitSet::new`] + insert.
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let items: Vec<usize> = iter.into_iter().collect();
        let len = items.iter().max().map_or(0, |m| m + 1);
        let mut s = BitSet::new(len);
        for i in items {
            s.insert(i);
        }
        s
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iter_and_counts() {
        let mut s = BitSet::new(130);
        for i in [0, 5, 63, 64, 129] {
            assert!(s.insert(i));
        }
        assert!(!s.insert(5));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 5, 63, 64, 129]);
        assert_eq!(s.iter_above(5).collect::<Vec<_>>(), vec![63, 64, 129]);
        assert_eq!(s.iter_above(63).collect::<Vec<_>>(), vec![64, 129]);
        assert_eq!(s.iter_above(129).count(), 0);
        assert_eq!(s.count(), 5);
        assert!(s.remove(63));
        assert!(!s.contains(63));
    }

    #[test]
    fn full_respects_capacity() {
        let s = BitSet::full(70);
        assert_eq!(s.count(), 70);
        assert_eq!(s.iter().last(), Some(69));
    }

    #[test]
    fn set_algebra() {
        let mut a = BitSet::new(10);
        let mut b = BitSet::new(10);
        a.insert(1);
        a.insert(2);
        b.insert(2);
        b.insert(3);
        assert_eq!(a.intersection_count(&b), 1);
        let mut d = a.clone();
        d.difference_with(&b);
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![1]);
        a.union_with(&b);
        assert_eq!(a.count(), 3);
    }
}
