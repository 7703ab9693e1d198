use smallvec::SmallVec;

/// Fixed-capacity bitset; capacities up to 256 stay inline.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BitSet {
    words: SmallVec<[u64; 4]>,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        BitSet {
            words: SmallVec::from_elem(0, capacity.div_ceil(64)),
        }
    }

    pub fn from_indices(capacity: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(capacity);
        for i in idx {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    #[inline]
    pub fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = BitSet::from_indices(300, [1, 5, 64, 299]);
        let b = BitSet::from_indices(300, [5, 64, 100]);
        assert_eq!(a.count(), 4);
        assert!(a.contains(299) && !a.contains(2));
        assert_eq!(a.intersection_count(&b), 2);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![5, 64]);
        assert!(a.intersection(&b).is_subset(&a));
        assert!(!b.is_subset(&a));
        let mut c = a.clone();
        c.remove(1);
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![5, 64, 299]);
    }
}
