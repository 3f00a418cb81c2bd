//! Index-space helpers: a plain bitset and a closure that grows one generator
//! at a time inside a fixed universe of elements.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns true if `i` was not already present.
    #[inline]
    pub(crate) fn insert(&mut self, i: usize) -> bool {
        let w = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub(crate) fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }
}

/// The subsemigroup generated by a growing list of elements of a universe
/// `0..len`, with products supplied by the caller.
///
/// `mul` returns `None` when a product falls outside the universe, which the
/// caller reports as a closure failure.
#[derive(Clone, Debug)]
pub(crate) struct IncrementalClosure {
    member: BitSet,
    elements: Vec<usize>,
    generators: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Escaped {
    pub(crate) left: usize,
    pub(crate) right: usize,
}

impl IncrementalClosure {
    pub(crate) fn new(universe: usize) -> Self {
        Self {
            member: BitSet::new(universe),
            elements: Vec::new(),
            generators: Vec::new(),
        }
    }

    #[inline]
    pub(crate) fn contains(&self, i: usize) -> bool {
        self.member.contains(i)
    }

    pub(crate) fn len(&self) -> usize {
        self.elements.len()
    }

    pub(crate) fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Adds `g` as a generator and re-closes.
    ///
    /// Old elements only need to be multiplied by `g` on the right; every new
    /// element is multiplied by all generators. The result is closed under
    /// right multiplication by generators, hence equal to the generated
    /// subsemigroup.
    pub(crate) fn add<F>(&mut self, g: usize, mut mul: F) -> Result<(), Escaped>
    where
        F: FnMut(usize, usize) -> Option<usize>,
    {
        self.generators.push(g);
        let old = self.elements.len();
        let push = |this: &mut Self, e: usize| {
            if this.member.insert(e) {
                this.elements.push(e);
            }
        };
        push(self, g);
        for i in 0..old {
            let e = self.elements[i];
            let p = mul(e, g).ok_or(Escaped { left: e, right: g })?;
            push(self, p);
        }
        let mut pos = old;
        while pos < self.elements.len() {
            let f = self.elements[pos];
            for gi in 0..self.generators.len() {
                let h = self.generators[gi];
                let p = mul(f, h).ok_or(Escaped { left: f, right: h })?;
                push(self, p);
            }
            pos += 1;
        }
        Ok(())
    }
}

/// A semigroup small enough to keep its full multiplication table.
pub(crate) struct SmallSemigroup {
    len: usize,
    table: Vec<u32>,
}

impl SmallSemigroup {
    pub(crate) fn new(len: usize, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), len * len);
        Self { len, table }
    }

    #[inline]
    pub(crate) fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len + b] as usize
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn extend(&self, closure: &mut IncrementalClosure, g: usize) {
        closure
            .add(g, |a, b| Some(self.mul(a, b)))
            .expect("products stay inside the table");
    }

    pub(crate) fn closure_of(&self, gens: &[usize]) -> IncrementalClosure {
        let mut c = IncrementalClosure::new(self.len);
        for &g in gens {
            if !c.contains(g) {
                self.extend(&mut c, g);
            }
        }
        c
    }

    /// Elements that are not a product of two elements.
    pub(crate) fn indecomposables(&self) -> Vec<usize> {
        let mut products = BitSet::new(self.len);
        for &p in &self.table {
            products.insert(p as usize);
        }
        (0..self.len).filter(|&e| !products.contains(e)).collect()
    }
}
