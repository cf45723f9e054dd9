//! Linking forms of cyclic branched covers from a Seifert matrix.
//!
//! `A` has `−V` on its diagonal blocks and `ᵗV` in block `(k, k−1)`
//! (indices mod d); `B` has `JᵗV` in the same blocks, `J = (V − ᵗV)⁻¹`.
//! First homology is `ℤ^{2gd}/ᵗA ℤ^{2gd}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intlin::{adjugate, determinant, kernel_mod, smith_normal_form, solve_mod_image, IntMatrix};
use crate::presentations::KnotData;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertData {
    v: IntMatrix,
}

impl SeifertData {
    pub fn new(v: IntMatrix) -> Result<Self> {
        if !v.is_square() || v.rows() % 2 == 1 || v.rows() == 0 {
            return Err(Error::NotSeifert("V must be a nonempty square matrix of even size".into()));
        }
        let det = determinant(&(&v - &v.transpose()))?;
        if !det.is_one() {
            return Err(Error::NotSeifert(format!("det(V − ᵗV) = {det}, expected 1")));
        }
        Ok(SeifertData { v })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(Error::NotSeifert("V must be square".into()));
        }
        Self::new(IntMatrix::from_rows(rows))
    }

    pub fn v(&self) -> &IntMatrix {
        &self.v
    }

    pub fn genus(&self) -> usize {
        self.v.rows() / 2
    }

    /// `J = (V − ᵗV)⁻¹`, integral since the determinant is 1.
    pub fn j(&self) -> IntMatrix {
        adjugate(&(&self.v - &self.v.transpose())).expect("square")
    }

    /// Pretzel knot `P(p, q, r)` with `p, q, r` odd:
    /// `V = ½[[p+q, q+1], [q−1, q+r]]`.
    pub fn pretzel(p: i64, q: i64, r: i64) -> Result<Self> {
        if [p, q, r].iter().any(|x| x.rem_euclid(2) == 0) {
            return Err(Error::InvalidParameter("pretzel parameters must be odd".into()));
        }
        Self::from_rows(&[vec![(p + q) / 2, (q + 1) / 2], vec![(q - 1) / 2, (q + r) / 2]])
    }

    pub fn trefoil() -> Self {
        Self::from_rows(&[vec![-1, 1], vec![0, -1]]).expect("trefoil")
    }

    pub fn figure_eight() -> Self {
        Self::from_rows(&[vec![1, 0], vec![1, -1]]).expect("figure-eight")
    }

    /// Seifert matrix of knot data whose abelianizations are `(V, ᵗV)`.
    pub fn from_knot_data(k: &KnotData) -> Result<Self> {
        let (us, uf) = k.abelianized();
        if uf != us.transpose() {
            return Err(Error::NotSeifert("abelianized u♭ is not the transpose of u♯".into()));
        }
        Self::new(us)
    }

    /// Accepts `[[..],..]` or `{"V": [[..],..]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let m = v.get("V").or_else(|| v.get("seifert")).unwrap_or(v);
        let rows: Vec<Vec<i64>> = serde_json::from_value(m.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_rows(&rows)
    }
}

pub fn build_ab(s: &SeifertData, d: usize) -> Result<(IntMatrix, IntMatrix)> {
    if d < 2 {
        return Err(Error::InvalidParameter("fold d must be ≥ 2".into()));
    }
    let n = s.v.rows();
    let z = IntMatrix::zeros(n, n);
    let vt = s.v.transpose();
    let jvt = &s.j() * &vt;
    let neg_v = -&s.v;
    let sub = |k: usize, l: usize| (k + d - 1) % d == l;
    let a_blocks: Vec<Vec<IntMatrix>> = (0..d)
        .map(|k| (0..d).map(|l| if k == l { neg_v.clone() } else if sub(k, l) { vt.clone() } else { z.clone() }).collect())
        .collect();
    let b_blocks: Vec<Vec<IntMatrix>> = (0..d)
        .map(|k| (0..d).map(|l| if sub(k, l) { jvt.clone() } else { z.clone() }).collect())
        .collect();
    Ok((IntMatrix::from_blocks(&a_blocks), IntMatrix::from_blocks(&b_blocks)))
}

/// Invariant factors of `ℤ^{2gd}/ᵗA`, units dropped.
pub fn homology(s: &SeifertData, d: usize) -> Result<Vec<BigInt>> {
    let (a, _) = build_ab(s, d)?;
    if determinant(&a)?.is_zero() {
        return Err(Error::PositiveRank);
    }
    Ok(smith_normal_form(&a.transpose()).invariant_factors())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Kernel,
    Cokernel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingFormResult {
    pub route: Route,
    pub d: usize,
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub delta: BigInt,
    pub invariant_factors: Vec<BigInt>,
    /// Kernel vectors mod Δ (kernel route) or cokernel representatives.
    pub basis: Vec<Vec<BigInt>>,
    pub orders: Vec<BigInt>,
    pub gram: Vec<Vec<BigRational>>,
}

/// Reduces into `[0, 1)`.
pub fn mod_one(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

fn frac(num: BigInt, den: &BigInt) -> BigRational {
    mod_one(&BigRational::new(num, den.clone()))
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Setup {
    a: IntMatrix,
    b: IntMatrix,
    delta: BigInt,
    factors: Vec<BigInt>,
}

fn setup(s: &SeifertData, d: usize) -> Result<Setup> {
    let (a, b) = build_ab(s, d)?;
    let det = determinant(&a)?;
    if det.is_zero() {
        return Err(Error::PositiveRank);
    }
    let factors = smith_normal_form(&a.transpose()).invariant_factors();
    Ok(Setup { a, b, delta: det.abs(), factors })
}

/// `ᵗ𝔰(v)·ᵗA·B·𝔰(w)/Δ²` mod 1, with `𝔰` the lift to `[0, Δ)`.
pub fn kernel_pairing(a: &IntMatrix, b: &IntMatrix, delta: &BigInt, v: &[BigInt], w: &[BigInt]) -> BigRational {
    let lift = |x: &[BigInt]| x.iter().map(|t| t.mod_floor(delta)).collect::<Vec<_>>();
    let (sv, sw) = (lift(v), lift(w));
    let atb = &a.transpose() * b;
    frac(dot(&sv, &atb.mul_vec(&sw)), &(delta * delta))
}

/// The kernel route on an explicit list of vectors of `Ker(A)_{ℤ/Δ}`.
pub fn kernel_gram_on(s: &SeifertData, d: usize, vectors: &[Vec<BigInt>]) -> Result<Vec<Vec<BigRational>>> {
    let st = setup(s, d)?;
    for v in vectors {
        if v.len() != st.a.cols() {
            return Err(Error::Dimension("kernel vector length".into()));
        }
        if !st.a.mul_vec(v).iter().all(|x| x.is_multiple_of(&st.delta)) {
            return Err(Error::InvalidParameter("vector is not in Ker(A) mod Δ".into()));
        }
    }
    Ok(vectors
        .iter()
        .map(|v| vectors.iter().map(|w| kernel_pairing(&st.a, &st.b, &st.delta, v, w)).collect())
        .collect())
}

pub fn linking_form_kernel(s: &SeifertData, d: usize) -> Result<LinkingFormResult> {
    let st = setup(s, d)?;
    let basis = if st.delta.is_one() {
        Vec::new()
    } else {
        let k = kernel_mod(&st.a, &st.delta)?;
        k.vectors.into_iter().zip(k.orders).collect::<Vec<_>>()
    };
    let gram = basis
        .iter()
        .map(|(v, _)| basis.iter().map(|(w, _)| kernel_pairing(&st.a, &st.b, &st.delta, v, w)).collect())
        .collect();
    Ok(LinkingFormResult {
        route: Route::Kernel,
        d,
        delta: st.delta,
        invariant_factors: st.factors,
        orders: basis.iter().map(|b| b.1.clone()).collect(),
        basis: basis.into_iter().map(|b| b.0).collect(),
        gram,
        a: st.a,
        b: st.b,
    })
}

/// Generators of `ℤ^N/ᵗA` from the Smith form, with their orders.
pub fn cokernel_generators(a: &IntMatrix) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
    let at = a.transpose();
    let snf = smith_normal_form(&at);
    let u_inv = adjugate(&snf.u)?.scale(&determinant(&snf.u)?);
    let diag = snf.diagonal();
    let mut out = Vec::new();
    for (i, di) in diag.iter().enumerate() {
        if di.is_one() {
            continue;
        }
        if di.is_zero() {
            return Err(Error::PositiveRank);
        }
        out.push((u_inv.col(i), di.clone()));
    }
    Ok(out)
}

/// `ᵗv adj(A) z / det A` with `ᵗB z ≡ w (mod ᵗA)`. The signed
/// determinant makes this `ᵗv A⁻¹ z`.
pub fn cokernel_pairing(a: &IntMatrix, b: &IntMatrix, adj: &IntMatrix, det: &BigInt, v: &[BigInt], w: &[BigInt]) -> Result<BigRational> {
    let z = solve_mod_image(&b.transpose(), w, &a.transpose())
        .map_err(|_| Error::NoSolution("ᵗB is not invertible on the cokernel".into()))?;
    Ok(frac(dot(v, &adj.mul_vec(&z)), det))
}

pub fn linking_form_cokernel(s: &SeifertData, d: usize) -> Result<LinkingFormResult> {
    let st = setup(s, d)?;
    let gens = if st.delta.is_one() { Vec::new() } else { cokernel_generators(&st.a)? };
    let adj = adjugate(&st.a)?;
    let det = determinant(&st.a)?;
    let mut gram = Vec::new();
    for (v, _) in &gens {
        let mut row = Vec::new();
        for (w, _) in &gens {
            row.push(cokernel_pairing(&st.a, &st.b, &adj, &det, v, w)?);
        }
        gram.push(row);
    }
    Ok(LinkingFormResult {
        route: Route::Cokernel,
        d,
        delta: st.delta,
        invariant_factors: st.factors,
        orders: gens.iter().map(|g| g.1.clone()).collect(),
        basis: gens.into_iter().map(|g| g.0).collect(),
        gram,
        a: st.a,
        b: st.b,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RouteMap {
    /// `v ↦ adj(A)v`.
    Adjugate,
    /// `v ↦ adj(A)·z` with `ᵗB z ≡ v (mod ᵗA)`.
    AdjugateAfterB,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteComparison {
    pub map: RouteMap,
    pub cokernel_gram: Vec<Vec<BigRational>>,
    /// Kernel-route pairings of the images of the cokernel generators.
    pub transported_gram: Vec<Vec<BigRational>>,
    pub agree: bool,
}

/// Transports the cokernel generators into `Ker(A)_{ℤ/Δ}` and compares
/// the two forms entrywise.
pub fn compare_routes(s: &SeifertData, d: usize, map: RouteMap) -> Result<RouteComparison> {
    let coker = linking_form_cokernel(s, d)?;
    let (a, b, delta) = (&coker.a, &coker.b, &coker.delta);
    let adj = adjugate(a)?;
    let images = coker
        .basis
        .iter()
        .map(|v| match map {
            RouteMap::Adjugate => Ok(adj.mul_vec(v)),
            RouteMap::AdjugateAfterB => {
                let z = solve_mod_image(&b.transpose(), v, &a.transpose())?;
                Ok(adj.mul_vec(&z))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    for img in &images {
        debug_assert!(a.mul_vec(img).iter().all(|x| x.is_multiple_of(delta)));
    }
    let transported: Vec<Vec<BigRational>> = images
        .iter()
        .map(|v| images.iter().map(|w| kernel_pairing(a, b, delta, v, w)).collect())
        .collect();
    let agree = transported == coker.gram;
    Ok(RouteComparison { map, cokernel_gram: coker.gram, transported_gram: transported, agree })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramMatch {
    Exact,
    /// Equal after negating the computed form (orientation convention).
    Negated,
    Mismatch,
}

pub fn compare_gram(computed: &[Vec<BigRational>], expected: &[Vec<BigRational>]) -> GramMatch {
    let norm = |g: &[Vec<BigRational>], neg: bool| -> Vec<Vec<BigRational>> {
        g.iter().map(|r| r.iter().map(|x| mod_one(&if neg { -x } else { x.clone() })).collect()).collect()
    };
    let e = norm(expected, false);
    if norm(computed, false) == e {
        GramMatch::Exact
    } else if norm(computed, true) == e {
        GramMatch::Negated
    } else {
        GramMatch::Mismatch
    }
}

/// Checks that `v ↦ λ(v, ·)` is injective on `⊕ ℤ/orders[i]`.
///
/// With `e` the exponent and `M = e·gram` (integral), the adjoint's kernel
/// is trivial iff the row span of `M` in `(ℤ/e)^n` has `∏ orders` elements.
pub fn is_nonsingular(gram: &[Vec<BigRational>], orders: &[BigInt]) -> bool {
    let n = gram.len();
    if n == 0 {
        return true;
    }
    let e: BigInt = orders.iter().fold(BigInt::one(), |acc, o| acc.lcm(o));
    let scale = BigRational::from_integer(e.clone());
    let gens = IntMatrix::from_fn(2 * n, n, |i, j| {
        if i < n {
            (&gram[i][j] * &scale).to_integer()
        } else if i - n == j {
            e.clone()
        } else {
            BigInt::zero()
        }
    });
    let image: BigInt = smith_normal_form(&gens).diagonal().iter().map(|x| &e / x).product();
    image == orders.iter().product::<BigInt>()
}

/// Block permutation reversing the cover index `k ↦ d−1−k`.
pub fn cover_reversal(genus: usize, d: usize) -> IntMatrix {
    let n = 2 * genus;
    IntMatrix::from_fn(n * d, n * d, |i, j| {
        let (bi, ri) = (i / n, i % n);
        let (bj, rj) = (j / n, j % n);
        BigInt::from((ri == rj && bj == d - 1 - bi) as i32)
    })
}

/// `A` predicted from the augmented `∂₂` of the branched-cover
/// presentation: `A = −R·ε(∂₂)·R` with `R` the cover-index reversal.
pub fn a_from_augmented_d2(aug_d2: &IntMatrix, genus: usize, d: usize) -> IntMatrix {
    let r = cover_reversal(genus, d);
    -&(&(&r * aug_d2) * &r)
}

fn frac_json(x: &BigRational) -> Value {
    Value::String(if x.is_zero() { "0".into() } else { format!("{}/{}", x.numer(), x.denom()) })
}

fn vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

impl LinkingFormResult {
    pub fn to_json(&self) -> Value {
        json!({
            "route": match self.route { Route::Kernel => "kernel", Route::Cokernel => "cokernel" },
            "fold": self.d,
            "delta": self.delta.to_string(),
            "invariant_factors": vec_json(&self.invariant_factors),
            "basis": self.basis.iter().map(|v| vec_json(v)).collect::<Vec<_>>(),
            "orders": vec_json(&self.orders),
            "gram": self.gram.iter().map(|r| r.iter().map(frac_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "conditional": "valid under the asphericity assumption on the cover presentation",
        })
    }
}

pub fn gram_json(g: &[Vec<BigRational>]) -> Value {
    Value::Array(g.iter().map(|r| Value::Array(r.iter().map(frac_json).collect())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        mod_one(&BigRational::new(n.into(), d.into()))
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn seifert_validation() {
        assert!(SeifertData::from_rows(&[vec![1, 1], vec![1, 1]]).is_err());
        assert!(SeifertData::from_rows(&[vec![1]]).is_err());
        let p = SeifertData::pretzel(3, 5, 7).unwrap();
        assert_eq!(p.v(), &IntMatrix::from_rows(&[vec![4, 3], vec![2, 6]]));
        assert!(SeifertData::pretzel(2, 5, 7).is_err());
        let f8 = SeifertData::from_knot_data(&KnotData::figure_eight_normalized()).unwrap();
        assert_eq!(f8, SeifertData::figure_eight());
    }

    #[test]
    fn ab_block_pattern() {
        let s = SeifertData::pretzel(3, 5, 7).unwrap();
        let (a, b) = build_ab(&s, 2).unwrap();
        let v = s.v().clone();
        let vt = v.transpose();
        assert_eq!(a, IntMatrix::from_blocks(&[vec![-&v, vt.clone()], vec![vt.clone(), -&v]]));
        let jvt = &s.j() * &vt;
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(b, IntMatrix::from_blocks(&[vec![z.clone(), jvt.clone()], vec![jvt, z]]));
        let (a3, _) = build_ab(&s, 3).unwrap();
        assert_eq!(a3[(0, 4)], vt[(0, 0)]);
        assert_eq!(a3[(2, 0)], vt[(0, 0)]);
        assert!(a3[(0, 2)].is_zero());
    }

    #[test]
    fn homology_orders() {
        assert_eq!(homology(&SeifertData::trefoil(), 2).unwrap(), big(&[3]));
        assert_eq!(homology(&SeifertData::figure_eight(), 2).unwrap(), big(&[5]));
        assert_eq!(homology(&SeifertData::pretzel(3, 5, 7).unwrap(), 2).unwrap(), big(&[71]));
        // trefoil 6-fold cover has infinite H1
        assert_eq!(homology(&SeifertData::trefoil(), 6), Err(Error::PositiveRank));
    }

    #[test]
    fn trefoil_routes() {
        let s = SeifertData::trefoil();
        let k = linking_form_kernel(&s, 2).unwrap();
        let c = linking_form_cokernel(&s, 2).unwrap();
        assert_eq!(k.orders, big(&[3]));
        assert!(k.gram[0][0] == q(1, 3) || k.gram[0][0] == q(2, 3));
        assert!(c.gram[0][0] == q(1, 3) || c.gram[0][0] == q(2, 3));
        assert!(compare_routes(&s, 2, RouteMap::AdjugateAfterB).unwrap().agree);
    }

    #[test]
    fn lifts_do_not_matter() {
        let s = SeifertData::pretzel(3, 5, 7).unwrap();
        let k = linking_form_kernel(&s, 2).unwrap();
        let v = &k.basis[0];
        let shifted: Vec<BigInt> = v.iter().enumerate().map(|(i, x)| x + &k.delta * BigInt::from(i as i64 - 1)).collect();
        assert_eq!(kernel_pairing(&k.a, &k.b, &k.delta, &shifted, v), k.gram[0][0]);
    }

    #[test]
    fn forms_are_symmetric_and_nonsingular() {
        for s in [SeifertData::trefoil(), SeifertData::figure_eight(), SeifertData::pretzel(3, 5, 7).unwrap(), SeifertData::pretzel(5, 5, 5).unwrap()] {
            for d in 2..=3 {
                for r in [linking_form_kernel(&s, d).unwrap(), linking_form_cokernel(&s, d).unwrap()] {
                    let n = r.gram.len();
                    for i in 0..n {
                        for j in 0..n {
                            assert_eq!(r.gram[i][j], r.gram[j][i]);
                        }
                    }
                    assert_eq!(r.orders.iter().product::<BigInt>(), r.delta);
                    assert!(is_nonsingular(&r.gram, &r.orders), "{:?}", r.gram);
                }
            }
        }
    }

    #[test]
    fn detects_singular_forms() {
        assert!(!is_nonsingular(&[vec![q(0, 1)]], &big(&[3])));
        assert!(!is_nonsingular(&[vec![q(1, 3), q(1, 3)], vec![q(1, 3), q(1, 3)]], &big(&[3, 3])));
        assert!(is_nonsingular(&[vec![q(0, 1), q(1, 3)], vec![q(1, 3), q(0, 1)]], &big(&[3, 3])));
    }

    #[test]
    fn unit_discriminant_gives_empty_form() {
        // V = [[0,1],[0,0]] has det(V − ᵗV) = 1 and Δ = 1
        let s = SeifertData::from_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        let k = linking_form_kernel(&s, 2).unwrap();
        assert!(k.delta.is_one() && k.gram.is_empty());
        assert!(linking_form_cokernel(&s, 2).unwrap().gram.is_empty());
    }

    #[test]
    fn gram_comparison() {
        let g = vec![vec![q(1, 3)]];
        assert_eq!(compare_gram(&g, &[vec![q(1, 3)]]), GramMatch::Exact);
        assert_eq!(compare_gram(&g, &[vec![q(2, 3)]]), GramMatch::Negated);
        assert_eq!(compare_gram(&g, &[vec![q(0, 1)]]), GramMatch::Mismatch);
    }
}
