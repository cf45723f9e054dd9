//! Dense exact integer matrices.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect()).collect();
        write!(f, "IntMatrix{rows:?}")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| BigInt::from((i == j) as i32))
    }

    pub fn from_fn<T: Into<BigInt>>(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).into());
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j].clone())
    }

    pub fn try_from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix".into()));
        }
        let n = rows.len();
        Ok(IntMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Places `blocks[i][j]` (all of equal shape) into a block matrix.
    pub fn from_blocks(blocks: &[Vec<IntMatrix>]) -> Self {
        let br = blocks.len();
        let bc = blocks.first().map_or(0, Vec::len);
        let (r, c) = blocks.first().and_then(|b| b.first()).map_or((0, 0), |m| (m.rows, m.cols));
        Self::from_fn(br * r, bc * c, |i, j| blocks[i / r][j / c][(i % r, j % c)].clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c·row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * c;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += c·col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * c;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape");
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape");
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    /// Panics on shape mismatch; see [`IntMatrix::checked_mul`].
    fn mul(self, o: &IntMatrix) -> IntMatrix {
        self.checked_mul(o).expect("matrix shapes")
    }
}

fn require_square(m: &IntMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!("{}×{} matrix is not square", m.rows, m.cols)))
    }
}

/// Bareiss fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    require_square(m)?;
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(a[(n - 1, n - 1)].clone() * sign)
}

fn rational_inverse(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(m[(i, j)].clone())
                    } else {
                        BigRational::from_integer(BigInt::from((j - n == i) as i32))
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for v in a[c].iter_mut() {
            *v = &*v / &piv;
        }
        let pivot_row = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn adjugate(m: &IntMatrix) -> Result<IntMatrix> {
    require_square(m)?;
    let n = m.rows;
    if n == 0 {
        return Ok(IntMatrix::zeros(0, 0));
    }
    let det = determinant(m)?;
    if let (false, Some(inv)) = (det.is_zero(), rational_inverse(m)) {
        let d = BigRational::from_integer(det);
        return Ok(IntMatrix::from_fn(n, n, |i, j| {
            let v = &inv[i][j] * &d;
            debug_assert!(v.is_integer());
            v.to_integer()
        }));
    }
    // singular: cofactor expansion
    Ok(IntMatrix::from_fn(n, n, |i, j| {
        let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
            let rr = if r < j { r } else { r + 1 };
            let cc = if c < i { c } else { c + 1 };
            m[(rr, cc)].clone()
        });
        let d = determinant(&minor).expect("square minor");
        if (i + j) % 2 == 0 {
            d
        } else {
            -d
        }
    }))
}

/// `U·M·W = D` with `U`, `W` unimodular and `D` diagonal, `d_i | d_{i+1}`,
/// `d_i ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub w: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Diagonal entries with units dropped; zeros kept (they mark free rank).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_one()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut w = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            // pivot: smallest nonzero absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // trailing block is zero
                return finish(a, u, w);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            w.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                if !a[(i, t)].is_zero() {
                    let q = -a[(i, t)].div_floor(&a[(t, t)]);
                    a.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= a[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !a[(t, j)].is_zero() {
                    let q = -a[(t, j)].div_floor(&a[(t, t)]);
                    a.add_col(j, t, &q);
                    w.add_col(j, t, &q);
                    clean &= a[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, w)
}

fn finish(d: IntMatrix, u: IntMatrix, w: IntMatrix) -> Snf {
    Snf { u, d, w }
}

/// Generators of `{v ∈ (ℤ/n)^cols : Mv ≡ 0}` forming a direct-sum
/// decomposition; `orders[i]` is the additive order of `vectors[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    pub modulus: BigInt,
    pub vectors: Vec<Vec<BigInt>>,
    pub orders: Vec<BigInt>,
}

pub fn kernel_mod(m: &IntMatrix, n: &BigInt) -> Result<KernelBasis> {
    if n < &BigInt::from(2) {
        return Err(Error::InvalidParameter("modulus must be ≥ 2".into()));
    }
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let mut vectors = Vec::new();
    let mut orders = Vec::new();
    for i in 0..m.cols {
        let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        let order = di.gcd(n);
        if order.is_one() {
            continue;
        }
        let step = n / &order;
        let v: Vec<BigInt> = snf.w.col(i).iter().map(|x| (x * &step).mod_floor(n)).collect();
        vectors.push(v);
        orders.push(order);
    }
    Ok(KernelBasis { modulus: n.clone(), vectors, orders })
}

/// Some `x` with `Mx ≡ target` modulo the column span of `n`.
pub fn solve_mod_image(m: &IntMatrix, target: &[BigInt], n: &IntMatrix) -> Result<Vec<BigInt>> {
    if target.len() != m.rows || n.rows != m.rows {
        return Err(Error::Dimension("system shapes".into()));
    }
    let k = IntMatrix::from_fn(m.rows, m.cols + n.cols, |i, j| {
        if j < m.cols {
            m[(i, j)].clone()
        } else {
            n[(i, j - m.cols)].clone()
        }
    });
    let snf = smith_normal_form(&k);
    let ut = snf.u.mul_vec(target);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); k.cols];
    for (i, t) in ut.iter().enumerate() {
        let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if di.is_zero() {
            if !t.is_zero() {
                return Err(Error::NoSolution("target outside the image".into()));
            }
        } else {
            let (q, rem) = t.div_rem(&di);
            if !rem.is_zero() {
                return Err(Error::NoSolution("target outside the image".into()));
            }
            y[i] = q;
        }
    }
    let z = snf.w.mul_vec(&y);
    let x = z[..m.cols].to_vec();
    let c = z[m.cols..].to_vec();
    let lhs: Vec<BigInt> = m.mul_vec(&x).iter().zip(n.mul_vec(&c)).map(|(a, b)| a + b).collect();
    if lhs != target {
        return Err(Error::Internal("solve_mod_image substitution check failed".into()));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&IntMatrix::identity(3)).unwrap(), BigInt::one());
        assert_eq!(determinant(&mat(&[&[2, 0], &[0, 3]])).unwrap(), BigInt::from(6));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])).unwrap(), BigInt::zero());
        assert!(determinant(&IntMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(adjugate(&IntMatrix::identity(3)).unwrap(), IntMatrix::identity(3));
        assert_eq!(adjugate(&mat(&[&[1, 2], &[3, 4]])).unwrap(), mat(&[&[4, -2], &[-3, 1]]));
        let s = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let adj = adjugate(&s).unwrap();
        assert!((&s * &adj).is_zero());
        assert!(!adj.is_zero());
    }

    #[test]
    fn snf_examples() {
        let z = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert!(z.d.is_zero());
        let s = smith_normal_form(&mat(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), big(&[1, 6]));
        assert_eq!(s.invariant_factors(), big(&[6]));
    }

    #[test]
    fn kernel_examples() {
        let n = BigInt::from(7);
        assert!(kernel_mod(&IntMatrix::identity(3), &n).unwrap().vectors.is_empty());
        let k = kernel_mod(&mat(&[&[7]]), &n).unwrap();
        assert_eq!(k.vectors, vec![big(&[1])]);
        assert_eq!(k.orders, big(&[7]));
        let k = kernel_mod(&mat(&[&[2, 0], &[0, 3]]), &BigInt::from(6)).unwrap();
        let total: BigInt = k.orders.iter().product();
        assert_eq!(total, BigInt::from(6));
    }

    #[test]
    fn solve_examples() {
        let t = big(&[3, -4]);
        assert_eq!(solve_mod_image(&IntMatrix::identity(2), &t, &IntMatrix::zeros(2, 0)).unwrap(), t);
        let n = mat(&[&[3, 0], &[0, 5]]);
        let x = solve_mod_image(&mat(&[&[2, 0], &[0, 1]]), &big(&[3, 10]), &n).unwrap();
        assert!(x.iter().all(|v| v.abs() < BigInt::from(100)));
        assert!(solve_mod_image(&mat(&[&[2]]), &big(&[1]), &mat(&[&[4]])).is_err());
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c)
                .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| v[i * c + j]))
        })
    }

    fn square_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max).prop_flat_map(|n| {
            proptest::collection::vec(-9i64..=9, n * n).prop_map(move |v| IntMatrix::from_fn(n, n, |i, j| v[i * n + j]))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn snf_is_a_factorization(m in small_matrix(12)) {
            let s = smith_normal_form(&m);
            prop_assert_eq!(&(&s.u * &m) * &s.w, s.d.clone());
            for i in 0..s.d.rows() {
                for j in 0..s.d.cols() {
                    if i != j {
                        prop_assert!(s.d[(i, j)].is_zero());
                    }
                }
            }
            let diag = s.diagonal();
            for k in 1..diag.len() {
                prop_assert!(diag[k - 1].is_zero() && diag[k].is_zero() || diag[k].is_multiple_of(&diag[k - 1]));
                prop_assert!(!diag[k].is_negative());
            }
            prop_assert_eq!(determinant(&s.u).unwrap().abs(), BigInt::one());
            prop_assert_eq!(determinant(&s.w).unwrap().abs(), BigInt::one());
        }

        #[test]
        fn adjugate_identity(m in square_matrix(12)) {
            let det = determinant(&m).unwrap();
            let adj = adjugate(&m).unwrap();
            prop_assert_eq!(&m * &adj, IntMatrix::identity(m.rows()).scale(&det));
        }

        #[test]
        fn adjugate_small_with_cofactors(m in square_matrix(4)) {
            let adj = adjugate(&m).unwrap();
            prop_assert_eq!(&adj * &m, IntMatrix::identity(m.rows()).scale(&determinant(&m).unwrap()));
        }

        #[test]
        fn snf_permutation_invariant(m in small_matrix(8), seed in 0usize..1000) {
            let mut p = m.clone();
            let (r, c) = (p.rows(), p.cols());
            p.swap_rows(0, seed % r);
            p.swap_cols(0, (seed / 7) % c);
            prop_assert_eq!(smith_normal_form(&m).diagonal(), smith_normal_form(&p).diagonal());
        }

        #[test]
        fn solve_consistent_systems(
            mv in proptest::collection::vec(-9i64..=9, 16),
            nv in proptest::collection::vec(-9i64..=9, 16),
            x0 in proptest::collection::vec(-9i64..=9, 4),
            c0 in proptest::collection::vec(-9i64..=9, 4),
        ) {
            let m = IntMatrix::from_fn(4, 4, |i, j| mv[i * 4 + j]);
            let n = IntMatrix::from_fn(4, 4, |i, j| nv[i * 4 + j]);
            let t: Vec<BigInt> = m.mul_vec(&big(&x0)).iter().zip(n.mul_vec(&big(&c0))).map(|(a, b)| a + b).collect();
            let x = solve_mod_image(&m, &t, &n).unwrap();
            let diff: Vec<BigInt> = m.mul_vec(&x).iter().zip(&t).map(|(a, b)| b - a).collect();
            prop_assert!(solve_mod_image(&n, &diff, &IntMatrix::zeros(4, 0)).is_ok());
        }

        #[test]
        fn kernel_vectors_are_in_kernel(m in small_matrix(6), n in 2i64..30) {
            let n = BigInt::from(n);
            let k = kernel_mod(&m, &n).unwrap();
            for (v, o) in k.vectors.iter().zip(&k.orders) {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_multiple_of(&n)));
                let scaled: Vec<BigInt> = v.iter().map(|x| (x * o).mod_floor(&n)).collect();
                prop_assert!(scaled.iter().all(Zero::is_zero));
            }
        }
    }
}
