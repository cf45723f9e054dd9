//! Finite groups given by multiplication tables.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::symbolic::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates a table: closure, identity, inverses and associativity
    /// (full for order ≤ 64, on a deterministic sample otherwise).
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidGroup("table is not n×n over 0..n".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| flat[e * n + a] == a && flat[a * n + e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| flat[a * n + b] == identity && flat[b * n + a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(Error::InvalidGroup("label count differs from order".into()));
        }
        let g = FiniteGroup { n, table: flat, identity, inverse, labels };
        if !g.is_associative() {
            return Err(Error::InvalidGroup("not associative".into()));
        }
        Ok(g)
    }

    fn is_associative(&self) -> bool {
        let n = self.n;
        if n <= 64 {
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
        } else {
            let mut s: u64 = 0x9e37_79b9_7f4a_7c15;
            let mut next = || {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s % n as u64) as usize
            };
            (0..20_000).all(|_| {
                let (a, b, c) = (next(), next(), next());
                self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
            })
        }
    }

    /// Closure of a set of permutations of `0..degree` under composition.
    /// Product `a·b` means "apply `a`, then `b`".
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self> {
        let degree = gens.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p: Vec<usize> = (0..degree).map(|k| g[elems[i][k]]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let p: Vec<usize> = (0..degree).map(|k| elems[b][elems[a][k]]).collect();
                table[a][b] = index[&p];
            }
        }
        let labels = elems.iter().map(|p| format!("{p:?}")).collect();
        Self::from_table(table, Some(labels))
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table, None).expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Elements `(a, b)` are indexed `a·|H| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (n, m) = (g.order(), h.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let labels = (0..n * m)
            .map(|x| format!("({},{})", g.label(x / m), h.label(x % m)))
            .collect();
        Self::from_table(table, Some(labels)).expect("product of groups is a group")
    }

    /// Symmetric group on `k` letters.
    pub fn symmetric(k: usize) -> Self {
        if k <= 1 {
            return Self::trivial();
        }
        let mut t: Vec<usize> = (0..k).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        Self::from_permutations(&[t, c]).expect("permutation closure")
    }

    /// Alternating group on 4 letters.
    pub fn alternating4() -> Self {
        Self::from_permutations(&[vec![1, 2, 0, 3], vec![0, 2, 3, 1]]).expect("permutation closure")
    }

    /// Dihedral group of order `2k`.
    pub fn dihedral(k: usize) -> Self {
        let r: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        let s: Vec<usize> = (0..k).map(|i| (k - i) % k).collect();
        Self::from_permutations(&[r, s]).expect("permutation closure")
    }

    /// Quaternion group of order 8 as permutations of itself.
    pub fn quaternion() -> Self {
        // elements ±1, ±i, ±j, ±k encoded 0..8 as (sign, unit)
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            // units 0=1, 1=i, 2=j, 3=k
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|x: usize| {
                (0..8)
                    .map(|y: usize| {
                        let (neg, u) = unit_mul(x % 4, y % 4);
                        let sign = (x / 4 + y / 4 + neg as usize) % 2;
                        sign * 4 + u
                    })
                    .collect()
            })
            .collect();
        let names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"];
        Self::from_table(table, Some(names.iter().map(|s| s.to_string()).collect())).expect("Q8")
    }

    /// Group of order `m³` with normal forms `x^a y^b z^c`, `z` central and
    /// `z y x y⁻¹ x⁻¹ = 1`, so that `y x = x y z⁻¹`.
    /// Element `x^a y^b z^c` has index `(a·m + b)·m + c`.
    pub fn heisenberg(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter("Heisenberg group needs m ≥ 2".into()));
        }
        let n = m * m * m;
        let idx = |a: usize, b: usize, c: usize| (a * m + b) * m + c;
        let mut table = vec![vec![0; n]; n];
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for a2 in 0..m {
                        for b2 in 0..m {
                            for c2 in 0..m {
                                let cz = (c + c2 + m * m - (a2 * b) % m) % m;
                                table[idx(a, b, c)][idx(a2, b2, c2)] = idx((a + a2) % m, (b + b2) % m, cz);
                            }
                        }
                    }
                }
            }
        }
        let labels = (0..n)
            .map(|i| format!("x^{} y^{} z^{}", i / (m * m), (i / m) % m, i % m))
            .collect();
        Self::from_table(table, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut r = self.identity;
        for _ in 0..e.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Evaluates a word under `generator ↦ images[generator]`.
    pub fn eval_word(&self, w: &Word, images: &[usize]) -> Result<usize> {
        let mut r = self.identity;
        for &(g, e) in w.runs() {
            let x = *images.get(g).ok_or(Error::MissingImage(g))?;
            r = self.mul(r, self.pow(x, e));
        }
        Ok(r)
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_orders() {
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::alternating4().order(), 12);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert_eq!(FiniteGroup::quaternion().center().len(), 2);
        let k = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        assert_eq!(k.center().len(), 6);
    }

    #[test]
    fn heisenberg_structure() {
        let g = FiniteGroup::heisenberg(3).unwrap();
        assert_eq!(g.order(), 27);
        let z = 1;
        let center = g.center();
        assert_eq!(center, vec![0, z, 2]);
        let g5 = FiniteGroup::heisenberg(5).unwrap();
        assert_eq!(g5.order(), 125);
        // [y, x] = y x y⁻¹ x⁻¹ = z⁻¹ under this convention
        let (x, y) = (25, 5);
        let c = g5.mul(g5.mul(y, x), g5.mul(g5.inv(y), g5.inv(x)));
        assert_eq!(c, g5.inv(1));
        // the relator u = z y x y⁻¹ x⁻¹ holds
        let u = Word::from_letters([(2, 1), (1, 1), (0, 1), (1, -1), (0, -1)]);
        assert_eq!(g5.eval_word(&u, &[x, y, 1]).unwrap(), g5.identity());
        assert!(FiniteGroup::heisenberg(1).is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![0, 1]], None).is_err());
        let mut t = FiniteGroup::cyclic(4).table();
        t[1][1] = 3;
        t[1][3] = 2;
        assert!(FiniteGroup::from_table(t, None).is_err());
    }
}
