use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn new(components: Vec<usize>) -> Self {
        assert!(!components.is_empty(), "multi-index needs dimension >= 1");
        MultiIndex(components)
    }

    /// `q * e_i`.
    pub fn axis(n: usize, i: usize, q: usize) -> Self {
        let mut c = vec![0; n];
        c[i] = q;
        MultiIndex(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All multi-indices of dimension `n` with `|α| = q`, in lexicographic order.
    pub fn of_order(n: usize, q: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0; n];
        fill(&mut out, &mut cur, 0, q);
        out
    }

    /// All multi-indices with `|α| <= q`, ordered by order.
    pub fn up_to(n: usize, q: usize) -> Vec<MultiIndex> {
        (0..=q).flat_map(|k| Self::of_order(n, k)).collect()
    }

    /// All `β <= α` componentwise.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a + 1));
            for prefix in &out {
                for b in 0..=a {
                    let mut p = prefix.clone();
                    p.push(b);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut Vec<usize>, pos: usize, rest: usize) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for k in (0..=rest).rev() {
        cur[pos] = k;
        fill(out, cur, pos + 1, rest - k);
    }
    cur[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(MultiIndex::of_order(2, 3).len(), 4);
        assert_eq!(MultiIndex::of_order(3, 2).len(), 6);
        assert_eq!(MultiIndex::up_to(2, 4).len(), 15);
        assert!(MultiIndex::of_order(2, 5).iter().all(|a| a.order() == 5));
        assert_eq!(MultiIndex::new(vec![1, 2]).below().len(), 6);
    }
}
