/// Fixed-domain dense bitset over element codes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    domain: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(domain: usize) -> Self {
        BitSet {
            domain,
            words: vec![0; domain.div_ceil(64)],
        }
    }

    pub fn from_codes(domain: usize, codes: impl IntoIterator<Item = u32>) -> Self {
        let mut set = BitSet::new(domain);
        for c in codes {
            set.insert(c);
        }
        set
    }

    pub fn from_fn(domain: usize, mut f: impl FnMut(u32) -> bool) -> Self {
        let mut set = BitSet::new(domain);
        for c in 0..domain as u32 {
            if f(c) {
                set.insert(c);
            }
        }
        set
    }

    #[inline]
    pub fn domain(&self) -> usize {
        self.domain
    }

    #[inline]
    pub fn contains(&self, code: u32) -> bool {
        let i = code as usize;
        i < self.domain && self.words[i >> 6] & (1 << (i & 63)) != 0
    }

    /// Returns true if the code was newly inserted.
    #[inline]
    pub fn insert(&mut self, code: u32) -> bool {
        let i = code as usize;
        assert!(i < self.domain, "code {i} outside bitset domain {}", self.domain);
        let mask = 1 << (i & 63);
        let fresh = self.words[i >> 6] & mask == 0;
        self.words[i >> 6] |= mask;
        fresh
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter().chain(std::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    /// Ascending iteration over members.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros();
                word &= word - 1;
                Some((wi as u32) * 64 + bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}
