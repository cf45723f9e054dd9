//! Homomorphisms to finite groups, group cocycles and Dijkgraaf–Witten
//! invariants.

pub mod group;
pub mod heisenberg;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::complexes::{build_complex, cup_pair, ChainComplexData};
use crate::error::{Error, Result};
use crate::presentations::{Identity, Presentation};
use crate::symbolic::{apply_hom, Word};
use group::FiniteGroup;

/// Generator images of a homomorphism `π₁ → G`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hom {
    pub images: Vec<usize>,
}

/// All homomorphisms, in lexicographic order of the image indices.
///
/// A relator is checked as soon as every generator it mentions has an
/// image.
pub fn enumerate_homs(p: &Presentation, g: &FiniteGroup) -> Vec<Hom> {
    let m = p.num_generators();
    // relators grouped by the last generator they need
    let mut ready: Vec<Vec<&Word>> = vec![Vec::new(); m.max(1)];
    for r in &p.relators {
        if let Some(top) = r.max_generator() {
            ready[top].push(r);
        }
    }
    let mut out = Vec::new();
    let mut images = vec![0usize; m];
    fn go(k: usize, images: &mut Vec<usize>, ready: &[Vec<&Word>], g: &FiniteGroup, out: &mut Vec<Hom>) {
        if k == images.len() {
            out.push(Hom { images: images.clone() });
            return;
        }
        for e in 0..g.order() {
            images[k] = e;
            let ok = ready[k]
                .iter()
                .all(|r| g.eval_word(r, images).is_ok_and(|v| v == g.identity()));
            if ok {
                go(k + 1, images, ready, g, out);
            }
        }
    }
    go(0, &mut images, &ready, g, &mut out);
    out
}

/// A multiset over `A = ℤ/m₁ × ⋯ × ℤ/m_k`, i.e. an element of ℤ[A] with
/// nonnegative coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSum {
    pub moduli: Vec<i64>,
    pub counts: BTreeMap<Vec<i64>, u64>,
}

impl FormalSum {
    pub fn new(moduli: Vec<i64>) -> Self {
        FormalSum { moduli, counts: BTreeMap::new() }
    }

    pub fn cyclic(m: i64) -> Self {
        Self::new(vec![m])
    }

    pub fn add(&mut self, value: &[i64]) {
        let key = value.iter().zip(&self.moduli).map(|(v, m)| v.rem_euclid(*m)).collect();
        *self.counts.entry(key).or_insert(0) += 1;
    }

    pub fn add_scalar(&mut self, v: i64) {
        self.add(&[v]);
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn merge(&mut self, other: &FormalSum) {
        for (k, c) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += c;
        }
    }

    pub fn from_values(m: i64, values: impl IntoIterator<Item = i64>) -> Self {
        let mut f = Self::cyclic(m);
        for v in values {
            f.add_scalar(v);
        }
        f
    }

    /// `{"value": multiplicity}`; tuple keys are comma separated.
    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .counts
            .iter()
            .map(|(k, c)| (k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","), json!(c)))
            .collect();
        Value::Object(map)
    }
}

/// Tuple index in base `n`, first coordinate most significant.
pub fn tuple_index(n: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

/// An inhomogeneous cochain `G^k → ℤ/m` stored as a flat table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InhomogeneousCochain {
    pub degree: usize,
    pub modulus: i64,
    pub values: Vec<i64>,
}

impl InhomogeneousCochain {
    pub fn from_fn(g: &FiniteGroup, degree: usize, modulus: i64, f: impl Fn(&[usize]) -> i64) -> Self {
        let n = g.order();
        let total = n.pow(degree as u32);
        let mut values = Vec::with_capacity(total);
        let mut t = vec![0usize; degree];
        for idx in 0..total {
            let mut r = idx;
            for slot in t.iter_mut().rev() {
                *slot = r % n;
                r /= n;
            }
            values.push(f(&t).rem_euclid(modulus));
        }
        InhomogeneousCochain { degree, modulus, values }
    }

    pub fn eval(&self, n: usize, t: &[usize]) -> i64 {
        self.values[tuple_index(n, t)]
    }

    /// Inhomogeneous coboundary with trivial coefficients.
    pub fn coboundary(&self, g: &FiniteGroup) -> InhomogeneousCochain {
        let n = g.order();
        let k = self.degree;
        InhomogeneousCochain::from_fn(g, k + 1, self.modulus, |t| inhom_coboundary_at(g, k, t, |s| self.eval(n, s)))
    }
}

fn inhom_coboundary_at(g: &FiniteGroup, k: usize, t: &[usize], f: impl Fn(&[usize]) -> i64) -> i64 {
    let mut acc = f(&t[1..]);
    let mut buf = Vec::with_capacity(k);
    for i in 1..=k {
        buf.clear();
        buf.extend_from_slice(&t[..i - 1]);
        buf.push(g.mul(t[i - 1], t[i]));
        buf.extend_from_slice(&t[i + 1..]);
        let v = f(&buf);
        acc += if i % 2 == 1 { -v } else { v };
    }
    let last = f(&t[..k]);
    acc + if (k + 1) % 2 == 1 { -last } else { last }
}

#[derive(Clone, Copy, Debug)]
pub enum CheckScope {
    Full,
    /// Deterministic pseudo-random sample of the given size.
    Sampled(usize),
}

fn for_tuples(n: usize, len: usize, scope: CheckScope, mut body: impl FnMut(&[usize]) -> bool) -> bool {
    let mut t = vec![0usize; len];
    match scope {
        CheckScope::Full => {
            let total = n.pow(len as u32);
            for idx in 0..total {
                let mut r = idx;
                for slot in t.iter_mut().rev() {
                    *slot = r % n;
                    r /= n;
                }
                if !body(&t) {
                    return false;
                }
            }
            true
        }
        CheckScope::Sampled(count) => {
            let mut s: u64 = 0x2545_f491_4f6c_dd1d;
            for _ in 0..count {
                for slot in t.iter_mut() {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    *slot = (s % n as u64) as usize;
                }
                if !body(&t) {
                    return false;
                }
            }
            true
        }
    }
}

/// Cocycle condition for an inhomogeneous `k`-cochain given as a function.
pub fn verify_inhomogeneous(
    g: &FiniteGroup,
    degree: usize,
    modulus: i64,
    f: impl Fn(&[usize]) -> i64,
    scope: CheckScope,
) -> bool {
    for_tuples(g.order(), degree + 1, scope, |t| inhom_coboundary_at(g, degree, t, &f).rem_euclid(modulus) == 0)
}

/// Cocycle condition, G-invariance and normalization for a homogeneous
/// `k`-cochain on `G^{k+1}`.
pub fn verify_homogeneous(
    g: &FiniteGroup,
    degree: usize,
    modulus: i64,
    f: impl Fn(&[usize]) -> i64,
    scope: CheckScope,
) -> bool {
    let n = g.order();
    let cocycle = for_tuples(n, degree + 2, scope, |t| {
        let mut acc = 0i64;
        let mut buf = Vec::with_capacity(degree + 1);
        for i in 0..degree + 2 {
            buf.clear();
            buf.extend(t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x));
            let v = f(&buf);
            acc += if i % 2 == 0 { v } else { -v };
        }
        acc.rem_euclid(modulus) == 0
    });
    let invariant = for_tuples(n, degree + 2, scope, |t| {
        let h = t[0];
        let moved: Vec<usize> = t[1..].iter().map(|&x| g.mul(h, x)).collect();
        (f(&t[1..]) - f(&moved)).rem_euclid(modulus) == 0
    });
    let normalized = for_tuples(n, degree + 1, scope, |t| {
        !t.windows(2).any(|w| w[0] == w[1]) || f(t).rem_euclid(modulus) == 0
    });
    cocycle && invariant && normalized
}

/// `ψ(g₀, …, g_k) = ω(g₀⁻¹g₁, …, g_{k−1}⁻¹g_k)`.
pub fn homogenize<'a>(g: &'a FiniteGroup, omega: impl Fn(&[usize]) -> i64 + 'a) -> impl Fn(&[usize]) -> i64 + 'a {
    move |t: &[usize]| {
        let steps: Vec<usize> = t.windows(2).map(|w| g.mul(g.inv(w[0]), w[1])).collect();
        omega(&steps)
    }
}

/// The carry 2-cocycle `δ(a, b) = ⌊(ā + b̄)/p⌋` on ℤ/p.
pub fn carry_cocycle(p: usize) -> impl Fn(&[usize]) -> i64 {
    move |t: &[usize]| ((t[0] + t[1]) / p) as i64
}

/// The 3-cocycle `ω(a, b, c) = ā·⌊(b̄ + c̄)/p⌋` on ℤ/p.
pub fn cyclic_three_cocycle(p: usize) -> impl Fn(&[usize]) -> i64 {
    move |t: &[usize]| (t[0] * ((t[1] + t[2]) / p)) as i64
}

/// Signed triples `(ε, P, Q)` with `c₂(b_j) = Σ ε·(1, P, Q)`: a letter
/// `x^{+1}` at prefix `w` contributes `(+, w, wx)`, a letter `x^{−1}`
/// contributes `(−, wx⁻¹, w)`.
pub fn c2_expansion(r: &Word, g: &FiniteGroup, images: &[usize]) -> Result<Vec<(i64, usize, usize)>> {
    let mut out = Vec::new();
    let mut prefix = g.identity();
    for (x, s) in r.letters() {
        let fx = *images.get(x).ok_or(Error::MissingImage(x))?;
        if s > 0 {
            let next = g.mul(prefix, fx);
            out.push((1, prefix, next));
            prefix = next;
        } else {
            let next = g.mul(prefix, g.inv(fx));
            out.push((-1, next, prefix));
            prefix = next;
        }
    }
    Ok(out)
}

/// Value of an inhomogeneous 2-cocycle on the 2-cell `b_j`.
pub fn two_cell_value(r: &Word, g: &FiniteGroup, images: &[usize], delta: impl Fn(&[usize]) -> i64) -> Result<i64> {
    let mut acc = 0i64;
    for (s, p, q) in c2_expansion(r, g, images)? {
        acc += s * delta(&[p, g.mul(g.inv(p), q)]);
    }
    Ok(acc)
}

/// `⟨γ ⌣ δ, f_*[M]⟩` for one homomorphism.
pub fn cup_value(
    ccd: &ChainComplexData,
    g: &FiniteGroup,
    hom: &Hom,
    gamma: impl Fn(usize) -> i64,
    delta: impl Fn(&[usize]) -> i64,
    modulus: i64,
) -> Result<i64> {
    let pres = &ccd.presentation;
    let q: Vec<i64> = pres
        .relators
        .iter()
        .map(|r| two_cell_value(r, g, &hom.images, &delta))
        .collect::<Result<_>>()?;
    let p: Vec<i64> = hom.images.iter().map(|&e| gamma(e)).collect();
    cup_pair(
        ccd,
        g,
        &hom.images,
        |_, l| p.get(l).copied().ok_or_else(|| Error::UndefinedCochain(format!("a_{}", l + 1))),
        |_, j| q.get(j).copied().ok_or_else(|| Error::UndefinedCochain(format!("b_{}", j + 1))),
        modulus,
        |a, b| (a * b).rem_euclid(modulus),
    )
}

/// `DW_{γ⌣δ}(M)` as a multiset over ℤ/`modulus`.
pub fn dw_cup(
    p: &Presentation,
    s: &Identity,
    g: &FiniteGroup,
    gamma: impl Fn(usize) -> i64,
    delta: impl Fn(&[usize]) -> i64,
    modulus: i64,
) -> Result<FormalSum> {
    let ccd = build_complex(p, s)?;
    let mut out = FormalSum::cyclic(modulus);
    for hom in enumerate_homs(p, g) {
        out.add_scalar(cup_value(&ccd, g, &hom, &gamma, &delta, modulus)?);
    }
    Ok(out)
}

/// A chain of the normalized homogeneous complex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomogeneousChain {
    pub degree: usize,
    pub terms: BTreeMap<Vec<usize>, i64>,
}

impl HomogeneousChain {
    pub fn new(degree: usize) -> Self {
        HomogeneousChain { degree, terms: BTreeMap::new() }
    }

    /// Adds `c·t`, dropping degenerate tuples.
    pub fn add(&mut self, t: Vec<usize>, c: i64) {
        if c == 0 || t.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let e = self.terms.entry(t).or_insert(0);
        *e += c;
        if *e == 0 {
            let key: Vec<usize> = self.terms.iter().find(|(_, v)| **v == 0).map(|(k, _)| k.clone()).unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn boundary(&self) -> HomogeneousChain {
        let mut out = HomogeneousChain::new(self.degree.saturating_sub(1));
        for (t, &c) in &self.terms {
            for i in 0..t.len() {
                let face: Vec<usize> = t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                out.add(face, if i % 2 == 0 { c } else { -c });
            }
        }
        out
    }

    /// `Σ c·(e, t)`.
    pub fn cone(&self, identity: usize) -> HomogeneousChain {
        let mut out = HomogeneousChain::new(self.degree + 1);
        for (t, &c) in &self.terms {
            let mut u = Vec::with_capacity(t.len() + 1);
            u.push(identity);
            u.extend_from_slice(t);
            out.add(u, c);
        }
        out
    }

    pub fn evaluate(&self, psi: impl Fn(&[usize]) -> i64, modulus: i64) -> i64 {
        let mut acc = 0i64;
        for (t, &c) in &self.terms {
            acc = (acc + c.rem_euclid(modulus) * psi(t).rem_euclid(modulus)).rem_euclid(modulus);
        }
        acc
    }
}

/// The 2-cycle `c₂(∂₃ c)` over G and the 3-chain `𝒪′` bounding it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMapImage {
    pub boundary_cycle: HomogeneousChain,
    pub fundamental: HomogeneousChain,
}

pub fn chain_map_c(ccd: &ChainComplexData, g: &FiniteGroup, hom: &Hom) -> Result<ChainMapImage> {
    let pres = &ccd.presentation;
    let mut z = HomogeneousChain::new(2);
    for (j, coeff) in ccd.d3.iter().enumerate() {
        let base = c2_expansion(&pres.relators[j], g, &hom.images)?;
        for (h, c) in apply_hom(coeff, &hom.images, g)? {
            if c.is_zero() {
                continue;
            }
            let c = c.to_i64().ok_or_else(|| Error::Internal("coefficient overflow".into()))?;
            for &(s, p, q) in &base {
                z.add(vec![h, g.mul(h, p), g.mul(h, q)], c * s);
            }
        }
    }
    if !z.boundary().is_zero() {
        return Err(Error::Internal("c₂(∂₃ c) is not a cycle".into()));
    }
    let o = z.cone(g.identity());
    if o.boundary() != z {
        return Err(Error::Internal("cone does not bound c₂(∂₃ c)".into()));
    }
    Ok(ChainMapImage { boundary_cycle: z, fundamental: o })
}

/// `Σ_f ⟨ψ, c₃(𝒪)⟩` for a homogeneous 3-cocycle ψ on `G⁴`.
pub fn dw_homogeneous(
    p: &Presentation,
    s: &Identity,
    g: &FiniteGroup,
    psi: impl Fn(&[usize]) -> i64,
    modulus: i64,
) -> Result<FormalSum> {
    let ccd = build_complex(p, s)?;
    let mut out = FormalSum::cyclic(modulus);
    for hom in enumerate_homs(p, g) {
        out.add_scalar(chain_map_c(&ccd, g, &hom)?.fundamental.evaluate(&psi, modulus));
    }
    Ok(out)
}

/// Per-hom values of the homogeneous route, in enumeration order.
pub fn homogeneous_values(
    ccd: &ChainComplexData,
    g: &FiniteGroup,
    homs: &[Hom],
    psi: impl Fn(&[usize]) -> i64,
    modulus: i64,
) -> Result<Vec<i64>> {
    homs.iter()
        .map(|h| Ok(chain_map_c(ccd, g, h)?.fundamental.evaluate(&psi, modulus)))
        .collect()
}

/// The unit `u ∈ (ℤ/p)ˣ` with `observed[i] = u·expected[i]` for all `i`, if any.
pub fn relating_unit(observed: &[i64], expected: &[i64], p: i64) -> Option<i64> {
    (1..p).filter(|&u| num_integer::gcd(u, p) == 1).find(|&u| {
        observed.len() == expected.len()
            && observed.iter().zip(expected).all(|(o, e)| o.rem_euclid(p) == (u * e).rem_euclid(p))
    })
}

/// Reduces a big integer into `i64` modulo `m`.
pub fn big_mod(x: &BigInt, m: i64) -> i64 {
    (x % BigInt::from(m)).to_i64().unwrap().rem_euclid(m)
}
