//! The chain complex `0 → ℤπ → ℤπ^m → ℤπ^m → ℤπ → 0` of the universal
//! cover, its diagonal, cup pairings and pushforwards to finite groups.
//!
//! Chains are row vectors: `∂₂(b_i) = Σ_k d2[i][k]·a_k`, so the
//! compositions read `d3·d2 = 0` and `d2·d1 = 0`. Entries of `d3` are
//! kept exactly in ℤ[F] (relator symbols substituted, not cancelled).

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::dw::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::intlin::IntMatrix;
use crate::presentations::{verify_identity, Identity, Presentation};
use crate::symbolic::{apply_hom, fox_derivative, GroupRingElement, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalTerm {
    pub factor: usize,
    pub sign: i32,
    /// `ε_k · ∂ω_k/∂x_ℓ`
    pub coefficient: GroupRingElement,
    pub one_cell: usize,
    pub prefix: Word,
    pub two_cell: usize,
}

#[derive(Clone, Debug)]
pub struct ChainComplexData {
    pub presentation: Presentation,
    pub identity: Identity,
    pub d1: Vec<GroupRingElement>,
    pub d2: Vec<Vec<GroupRingElement>>,
    pub d3: Vec<GroupRingElement>,
    pub diagonal: Vec<DiagonalTerm>,
}

/// Checks `Σ_k ∂r/∂x_k · (x_k − 1) = r − 1` in ℤ[F].
pub fn fundamental_identity_holds(r: &Word, num_generators: usize) -> bool {
    let mut lhs = GroupRingElement::zero();
    for k in 0..num_generators {
        let xk = &GroupRingElement::from_word(Word::gen(k)) - &GroupRingElement::one();
        lhs = &lhs + &(&fox_derivative(r, k) * &xk);
    }
    lhs == &GroupRingElement::from_word(r.clone()) - &GroupRingElement::one()
}

pub fn build_complex(p: &Presentation, s: &Identity) -> Result<ChainComplexData> {
    if !verify_identity(p, s)? {
        return Err(Error::NotAnIdentity("ψ-image does not reduce to ε".into()));
    }
    let m = p.num_generators();
    let n = p.num_relators();
    for (i, r) in p.relators.iter().enumerate() {
        if !fundamental_identity_holds(r, m) {
            return Err(Error::Internal(format!("fundamental Fox identity fails for relator {}", i + 1)));
        }
    }
    let d1 = (0..m)
        .map(|i| &GroupRingElement::one() - &GroupRingElement::from_word(Word::gen(i)))
        .collect();
    let d2: Vec<Vec<GroupRingElement>> =
        p.relators.iter().map(|r| (0..m).map(|k| fox_derivative(r, k)).collect()).collect();
    let sw = s.to_pf_word(p);
    let psi = |a: &GroupRingElement| a.map_words(|w| p.psi(w));
    let d3: Vec<GroupRingElement> = (0..n).map(|j| psi(&fox_derivative(&sw, p.rho(j)))).collect();

    for (j, e) in d3.iter().enumerate() {
        if !e.augment().is_zero() {
            return Err(Error::Internal(format!("augmented ∂₃ is nonzero at b_{}", j + 1)));
        }
    }
    // chain rule: Σ_j ψ(∂s/∂ρ_j)·∂r_j/∂x_l + ψ(∂s/∂x_l) = 0 in ℤ[F]
    for l in 0..m {
        let mut acc = psi(&fox_derivative(&sw, l));
        for j in 0..n {
            acc = &acc + &(&d3[j] * &d2[j][l]);
        }
        if !acc.is_zero() {
            return Err(Error::Internal(format!("chain rule fails at x_{}", l + 1)));
        }
    }
    let diagonal = diagonal_element(p, s);
    Ok(ChainComplexData { presentation: p.clone(), identity: s.clone(), d1, d2, d3, diagonal })
}

/// One summand `ε_k ∂ω_k/∂x_ℓ a_ℓ ⊗ ω_k b_{j_k}` per nonzero coefficient.
pub fn diagonal_element(p: &Presentation, s: &Identity) -> Vec<DiagonalTerm> {
    let mut out = Vec::new();
    for (k, f) in s.factors.iter().enumerate() {
        for l in 0..p.num_generators() {
            let c = fox_derivative(&f.conj, l).scale(&BigInt::from(f.sign));
            if !c.is_zero() {
                out.push(DiagonalTerm {
                    factor: k,
                    sign: f.sign,
                    coefficient: c,
                    one_cell: l,
                    prefix: f.conj.clone(),
                    two_cell: f.relator,
                });
            }
        }
    }
    out
}

/// Evaluates `⟨p ⌣ q, [M]⟩` through the diagonal. `p(h, ℓ)` is the value
/// on the translate `h·a_ℓ`, `q(g, j)` the value on `g·b_j`, with group
/// labels taken through `f`. Values live in ℤ/`modulus` (ℤ when 0).
pub fn cup_pair<P, Q>(
    ccd: &ChainComplexData,
    group: &FiniteGroup,
    images: &[usize],
    p: impl Fn(usize, usize) -> Result<P>,
    q: impl Fn(usize, usize) -> Result<Q>,
    modulus: i64,
    pairing: impl Fn(&P, &Q) -> i64,
) -> Result<i64> {
    let reduce = |v: i128| if modulus == 0 { v } else { v.rem_euclid(modulus as i128) };
    let mut total: i128 = 0;
    for t in &ccd.diagonal {
        let g = group.eval_word(&t.prefix, images)?;
        let qv = q(g, t.two_cell)?;
        for (h, c) in apply_hom(&t.coefficient, images, group)? {
            let c = c.to_i128().ok_or_else(|| Error::Internal("coefficient overflow".into()))?;
            let pv = p(h, t.one_cell)?;
            total = reduce(total + reduce(c * pairing(&pv, &qv) as i128));
        }
    }
    i64::try_from(reduce(total)).map_err(|_| Error::Internal("pairing overflow".into()))
}

/// An element of ℤ[G] as a dense coefficient vector.
pub type GroupAlgebraElement = Vec<i64>;

fn za_mul(group: &FiniteGroup, a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = group.order();
    let mut out = vec![0i64; n];
    for (g, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (h, &y) in b.iter().enumerate() {
            if y != 0 {
                out[group.mul(g, h)] += x * y;
            }
        }
    }
    out
}

/// The complex tensored down to ℤ[G] along a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushedComplex {
    pub order: usize,
    pub d1: Vec<GroupAlgebraElement>,
    pub d2: Vec<Vec<GroupAlgebraElement>>,
    pub d3: Vec<GroupAlgebraElement>,
}

/// Checks that `images` kills every relator.
pub fn check_hom(p: &Presentation, group: &FiniteGroup, images: &[usize]) -> Result<()> {
    for (j, r) in p.relators.iter().enumerate() {
        if group.eval_word(r, images)? != group.identity() {
            return Err(Error::NotAHomomorphism(j + 1));
        }
    }
    Ok(())
}

pub fn pushforward(ccd: &ChainComplexData, group: &FiniteGroup, images: &[usize]) -> Result<PushedComplex> {
    check_hom(&ccd.presentation, group, images)?;
    let n = group.order();
    let push = |a: &GroupRingElement| -> Result<Vec<i64>> {
        let mut v = vec![0i64; n];
        for (g, c) in apply_hom(a, images, group)? {
            v[g] = c.to_i64().ok_or_else(|| Error::Internal("coefficient overflow".into()))?;
        }
        Ok(v)
    };
    Ok(PushedComplex {
        order: n,
        d1: ccd.d1.iter().map(push).collect::<Result<_>>()?,
        d2: ccd.d2.iter().map(|row| row.iter().map(push).collect::<Result<_>>()).collect::<Result<_>>()?,
        d3: ccd.d3.iter().map(push).collect::<Result<_>>()?,
    })
}

impl PushedComplex {
    /// `d3·d2 = 0` and `d2·d1 = 0` in ℤ[G].
    pub fn compositions_vanish(&self, group: &FiniteGroup) -> bool {
        let m = self.d1.len();
        let zero = |v: &[i64]| v.iter().all(|&x| x == 0);
        let sum = |terms: Vec<Vec<i64>>| {
            terms.into_iter().fold(vec![0i64; self.order], |mut acc, t| {
                acc.iter_mut().zip(t).for_each(|(a, b)| *a += b);
                acc
            })
        };
        let first = (0..m).all(|k| {
            zero(&sum((0..self.d3.len()).map(|j| za_mul(group, &self.d3[j], &self.d2[j][k])).collect()))
        });
        let second = self
            .d2
            .iter()
            .all(|row| zero(&sum((0..m).map(|k| za_mul(group, &row[k], &self.d1[k])).collect())));
        first && second
    }

    /// Integer block matrices via `ρ(λ)[g][g·h] = λ_h`; shapes
    /// `|G| × n|G|`, `n|G| × m|G|`, `m|G| × |G|`.
    pub fn dense(&self, group: &FiniteGroup) -> (IntMatrix, IntMatrix, IntMatrix) {
        let n = self.order;
        let block = |lam: &[i64], out: &mut IntMatrix, r0: usize, c0: usize| {
            for g in 0..n {
                for (h, &c) in lam.iter().enumerate() {
                    if c != 0 {
                        out[(r0 + g, c0 + group.mul(g, h))] += BigInt::from(c);
                    }
                }
            }
        };
        let (m, r) = (self.d1.len(), self.d3.len());
        let mut d3 = IntMatrix::zeros(n, r * n);
        for (j, lam) in self.d3.iter().enumerate() {
            block(lam, &mut d3, 0, j * n);
        }
        let mut d2 = IntMatrix::zeros(r * n, m * n);
        for (i, row) in self.d2.iter().enumerate() {
            for (k, lam) in row.iter().enumerate() {
                block(lam, &mut d2, i * n, k * n);
            }
        }
        let mut d1 = IntMatrix::zeros(m * n, n);
        for (k, lam) in self.d1.iter().enumerate() {
            block(lam, &mut d1, k * n, 0);
        }
        (d3, d2, d1)
    }

    pub fn dense_compositions_vanish(&self, group: &FiniteGroup) -> bool {
        let (d3, d2, d1) = self.dense(group);
        (&d3 * &d2).is_zero() && (&d2 * &d1).is_zero()
    }

    /// Augmented `∂₂` (the trivial-hom specialization), `rows = relators`.
    pub fn augmented_d2(&self) -> IntMatrix {
        IntMatrix::from_fn(self.d2.len(), self.d1.len(), |i, k| self.d2[i][k].iter().sum::<i64>())
    }
}

/// Augmented Fox Jacobian, entry `(i, k) = ε(∂r_i/∂x_k)`.
pub fn augmented_d2(ccd: &ChainComplexData) -> IntMatrix {
    IntMatrix::from_fn(ccd.d2.len(), ccd.d1.len(), |i, k| ccd.d2[i][k].augment())
}

impl ChainComplexData {
    /// Stable JSON dump of the presentation, identity and boundary maps.
    pub fn to_json(&self) -> Value {
        let p = &self.presentation;
        let ab = &p.alphabet;
        let pf = p.pf_alphabet();
        let el = |a: &GroupRingElement| Value::String(ab.format_element(a));
        json!({
            "generators": ab.names(),
            "relators": p.relators.iter().map(|r| ab.format_word(r)).collect::<Vec<_>>(),
            "relator_names": p.relator_names,
            "identity": pf.format_word(&self.identity.to_pf_word(p)),
            "factors": self.identity.factors.iter().map(|f| json!({
                "conjugator": ab.format_word(&f.conj),
                "relator": f.relator,
                "sign": f.sign,
            })).collect::<Vec<_>>(),
            "d1": self.d1.iter().map(el).collect::<Vec<_>>(),
            "d2": self.d2.iter().map(|row| row.iter().map(el).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "d3": self.d3.iter().map(el).collect::<Vec<_>>(),
            "diagonal": self.diagonal.iter().map(|t| json!({
                "factor": t.factor,
                "sign": t.sign,
                "coefficient": ab.format_element(&t.coefficient),
                "one_cell": t.one_cell,
                "prefix": ab.format_word(&t.prefix),
                "two_cell": t.two_cell,
            })).collect::<Vec<_>>(),
            "notes": p.notes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{branched_cover, lens, torus3, KnotData};

    fn z_p_images(p: usize, a: usize) -> (FiniteGroup, Vec<usize>) {
        (FiniteGroup::cyclic(p), vec![a % p])
    }

    #[test]
    fn lens_complex() {
        let (p, s) = lens(5, 2).unwrap();
        let ccd = build_complex(&p, &s).unwrap();
        let ab = &p.alphabet;
        assert_eq!(ab.format_element(&ccd.d2[0][0]), ab.format_element(&ab.parse_element("1 + x + x^2 + x^3 + x^4").unwrap()));
        // ψ(1 − s x^{-q} s⁻¹) = 1 − x^{-q}
        assert_eq!(ccd.d3[0], ab.parse_element("1 - x^-2").unwrap());
        let (g, im) = z_p_images(5, 1);
        let pc = pushforward(&ccd, &g, &im).unwrap();
        // 1 − x^{-2} on ℤ/5 is e − g³
        assert_eq!(pc.d3[0], vec![1, 0, 0, -1, 0]);
        assert!(pc.compositions_vanish(&g));
        assert!(pc.dense_compositions_vanish(&g));
        assert!(matches!(pushforward(&ccd, &FiniteGroup::cyclic(4), &[1]), Err(Error::NotAHomomorphism(1))));
    }

    #[test]
    fn torus_complex() {
        let (p, s) = torus3();
        let ccd = build_complex(&p, &s).unwrap();
        assert_eq!(ccd.diagonal.iter().map(|t| t.factor).collect::<Vec<_>>(), vec![1, 3, 5]);
        let c5 = FiniteGroup::cyclic(5);
        let g = FiniteGroup::direct_product(&FiniteGroup::direct_product(&c5, &c5), &c5);
        let (x, y, z) = (25, 5, 1);
        let pc = pushforward(&ccd, &g, &[x, y, z]).unwrap();
        let one_minus = |e: usize| {
            let mut v = vec![0; 125];
            v[0] += 1;
            v[e] -= 1;
            v
        };
        assert_eq!(pc.d3, vec![one_minus(z), one_minus(x), one_minus(y)]);
        assert!(pc.compositions_vanish(&g));
    }

    #[test]
    fn trivial_hom_augments() {
        let k = KnotData::figure_eight_normalized();
        let (p, s) = branched_cover(&k, 2).unwrap();
        let ccd = build_complex(&p, &s).unwrap();
        let t = FiniteGroup::trivial();
        let pc = pushforward(&ccd, &t, &vec![0; p.num_generators()]).unwrap();
        assert!(pc.d1.iter().all(|v| v == &vec![0]));
        assert_eq!(pc.augmented_d2(), augmented_d2(&ccd));
    }

    #[test]
    fn cup_pairing_on_lens() {
        for (pp, q) in [(3i64, 1i64), (5, 2), (7, 3)] {
            let (p, s) = lens(pp, q).unwrap();
            let ccd = build_complex(&p, &s).unwrap();
            let n = pp as usize;
            for a in 0..n {
                for b in 0..n {
                    let (g, im) = z_p_images(n, 1);
                    // α₁ on a_1 is a; α₂ on b_1 is the carry count b·(p−1 carries)/p = b
                    let v = cup_pair(&ccd, &g, &im, |_, _| Ok(a as i64), |_, _| Ok(b as i64), pp, |x, y| x * y).unwrap();
                    assert_eq!(v, (q * (a * b) as i64).rem_euclid(pp), "L({pp},{q}) a={a} b={b}");
                }
            }
            let (g, im) = z_p_images(n, 1);
            assert_eq!(cup_pair(&ccd, &g, &im, |_, _| Ok(0i64), |_, _| Ok(1i64), pp, |x, y| x * y).unwrap(), 0);
        }
    }

    #[test]
    fn undefined_cochain_is_reported() {
        let (p, s) = lens(3, 1).unwrap();
        let ccd = build_complex(&p, &s).unwrap();
        let (g, im) = z_p_images(3, 1);
        let r = cup_pair(&ccd, &g, &im, |_, _| Err::<i64, _>(Error::UndefinedCochain("a_1".into())), |_, _| Ok(1i64), 3, |x, y| x * y);
        assert!(matches!(r, Err(Error::UndefinedCochain(_))));
    }
}
