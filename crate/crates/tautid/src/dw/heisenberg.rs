//! Collection in the Heisenberg group and the invariant of `M_{m,n}`.
//!
//! Generators `x, y, z` (indices 0, 1, 2) with relators, in order,
//! `x^m, y^m, z^m, s = xzx⁻¹z⁻¹, t = yzy⁻¹z⁻¹, u = zyxy⁻¹x⁻¹`.

use std::collections::HashMap;

use serde_json::{json, Value};

use super::group::FiniteGroup;
use super::{cup_value, enumerate_homs, verify_inhomogeneous, CheckScope, FormalSum, Hom};
use crate::complexes::{build_complex, cup_pair};
use crate::error::{Error, Result};
use crate::presentations::{seifert_mn, Factor, Presentation};
use crate::symbolic::{Alphabet, Word};

pub const REL_XM: usize = 0;
pub const REL_YM: usize = 1;
pub const REL_ZM: usize = 2;
pub const REL_S: usize = 3;
pub const REL_T: usize = 4;
pub const REL_U: usize = 5;

pub fn heisenberg_presentation(m: usize) -> Result<Presentation> {
    let (x, y, z) = (Word::gen(0), Word::gen(1), Word::gen(2));
    let m = m as i64;
    let rels = vec![
        x.pow(m),
        y.pow(m),
        z.pow(m),
        Word::commutator(&x, &z),
        Word::commutator(&y, &z),
        z.mul(&Word::commutator(&y, &x)),
    ];
    let names = ["xm", "ym", "zm", "s", "t", "u"].iter().map(|s| s.to_string()).collect();
    Presentation::with_names(Alphabet::new(&["x", "y", "z"])?, rels, names)
}

/// Result of collecting a word into `x^a y^b z^c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection {
    /// Exponents of the normal form, in `[0, m)`.
    pub normal_form: (i64, i64, i64),
    /// Relator applications: `word = ∏ (P r^ε P⁻¹) · x^a y^b z^c`.
    pub steps: Vec<Factor>,
}

impl Collection {
    /// Signed number of applications of relator `j`.
    pub fn count(&self, j: usize) -> i64 {
        self.steps.iter().filter(|f| f.relator == j).map(|f| f.sign as i64).sum()
    }

    pub fn counts_json(&self) -> Value {
        json!({
            "xm": self.count(REL_XM), "ym": self.count(REL_YM), "zm": self.count(REL_ZM),
            "s": self.count(REL_S), "t": self.count(REL_T), "u": self.count(REL_U),
        })
    }
}

struct Collector<'a> {
    pres: &'a Presentation,
    letters: Vec<(usize, i32)>,
    steps: Vec<Factor>,
    cache: HashMap<Vec<(usize, i32)>, Factor>,
    /// `cum[k]` = exponent sums of `letters[..k]`, kept for a sorted prefix.
    cum: Vec<[i64; 3]>,
}

impl Collector<'_> {
    /// Replaces `letters[i..i+k]` by `y`, recording `L·(X·Y⁻¹)·L⁻¹`.
    fn rewrite(&mut self, l: &Word, i: usize, k: usize, y: &[(usize, i32)]) -> Result<()> {
        let x = Word::from_letters(self.letters[i..i + k].iter().copied());
        let yw = Word::from_letters(y.iter().copied());
        let d = x.mul(&yw.inv()).letters();
        let f = match self.cache.get(&d) {
            Some(f) => f.clone(),
            None => {
                let f = find_conjugate(self.pres, &Word::from_letters(d.iter().copied()))
                    .ok_or_else(|| Error::Internal(format!("rewrite step is not a relator conjugate: {d:?}")))?;
                self.cache.insert(d, f.clone());
                f
            }
        };
        self.steps.push(Factor::new(l.mul(&f.conj), f.relator, f.sign));
        self.letters.splice(i..i + k, y.iter().copied());
        Ok(())
    }

    /// One rewrite or cancellation at the leftmost offending pair, which never
    /// lies before `from`. Returns the position to resume from.
    fn step(&mut self, from: usize) -> Result<Option<usize>> {
        let n = self.letters.len();
        self.cum.truncate(from + 1);
        for i in from..n.saturating_sub(1) {
            if self.cum.len() == i {
                let mut c = self.cum[i - 1];
                let (g, e) = self.letters[i - 1];
                c[g] += e as i64;
                self.cum.push(c);
            }
            let (g, e) = self.letters[i];
            let (h, f) = self.letters[i + 1];
            if g == h && e == -f {
                self.letters.drain(i..i + 2);
                return Ok(Some(i.saturating_sub(1)));
            }
            if g <= h {
                continue;
            }
            let c = self.cum[i];
            let l = Word::from_runs([(0, c[0]), (1, c[1]), (2, c[2])]);
            match (g, e, h, f) {
                (2, _, _, _) => self.rewrite(&l, i, 2, &[(h, f), (2, e)])?,
                (1, 1, 0, 1) => self.rewrite(&l, i, 2, &[(2, -1), (0, 1), (1, 1)])?,
                (1, 1, 0, -1) => self.rewrite(&l, i, 2, &[(0, -1), (2, 1), (1, 1)])?,
                (1, -1, 0, -1) => self.rewrite(&l, i, 2, &[(0, -1), (1, -1), (2, -1)])?,
                (1, -1, 0, 1) => {
                    // y⁻¹x = y⁻¹z⁻¹·zx → y⁻¹z⁻¹·xz → xy⁻¹·z
                    self.letters.splice(i + 1..i + 1, [(2, -1), (2, 1)]);
                    let inner = l.mul(&Word::from_letters([(1, -1), (2, -1)]));
                    self.rewrite(&inner, i + 2, 2, &[(0, 1), (2, 1)])?;
                    self.rewrite(&l, i, 3, &[(0, 1), (1, -1)])?;
                }
                _ => return Err(Error::Internal("unexpected letter pair".into())),
            }
            return Ok(Some(i.saturating_sub(1)));
        }
        Ok(None)
    }
}

/// `D = Q r^ε Q⁻¹` for some relator.
pub fn find_conjugate(p: &Presentation, d: &Word) -> Option<Factor> {
    for (j, r) in p.relators.iter().enumerate() {
        for sign in [1, -1] {
            let target = if sign == 1 { r.clone() } else { r.inv() };
            if let Some(q) = d.conjugator_to(&target) {
                return Some(Factor::new(q, j, sign));
            }
        }
    }
    None
}

/// Collects a word in `x, y, z` into normal form, recording each use of a
/// relator. The decomposition is checked in the free group before returning.
pub fn heisenberg_collect(m: usize, w: &Word) -> Result<Collection> {
    let pres = heisenberg_presentation(m)?;
    if w.max_generator().is_some_and(|g| g > 2) {
        return Err(Error::UnknownGenerator(w.max_generator().unwrap()));
    }
    let mut c = Collector { pres: &pres, letters: w.letters(), steps: Vec::new(), cache: HashMap::new(), cum: vec![[0; 3]] };
    let mut from = 0;
    while let Some(next) = c.step(from)? {
        from = next;
    }
    let sorted = Word::from_letters(c.letters.iter().copied());
    let (mut a, mut b, mut cz) = (sorted.exponent_sum(0), sorted.exponent_sum(1), sorted.exponent_sum(2));
    let mi = m as i64;
    let (x, y) = (Word::gen(0), Word::gen(1));
    let mut reduce = |e: &mut i64, rel: usize, conj: Word| {
        while *e >= mi {
            c.steps.push(Factor::new(conj.clone(), rel, 1));
            *e -= mi;
        }
        while *e < 0 {
            c.steps.push(Factor::new(conj.clone(), rel, -1));
            *e += mi;
        }
    };
    reduce(&mut a, REL_XM, Word::one());
    reduce(&mut b, REL_YM, x.pow(a));
    reduce(&mut cz, REL_ZM, x.pow(a).mul(&y.pow(b)));
    let out = Collection { normal_form: (a, b, cz), steps: c.steps };
    let nf = Word::from_runs([(0, a), (1, b), (2, cz)]);
    let mut all: Vec<(usize, i64)> = Vec::new();
    for f in &out.steps {
        all.extend_from_slice(f.conj.runs());
        all.extend_from_slice(pres.relators[f.relator].pow(f.sign as i64).runs());
        all.extend_from_slice(f.conj.inv().runs());
    }
    all.extend_from_slice(nf.runs());
    let rebuilt = Word::from_runs(all);
    if rebuilt != *w {
        return Err(Error::Internal("collection does not reproduce the input word".into()));
    }
    Ok(out)
}

fn hidx(m: usize, a: i64, b: i64, c: i64) -> usize {
    let r = |v: i64| v.rem_euclid(m as i64) as usize;
    (r(a) * m + r(b)) * m + r(c)
}

/// `n(2abc − a(a−1)b(b−1))` reduced mod `m`.
pub fn closed_form(m: i64, n: i64, a: i64, b: i64, c: i64) -> i64 {
    (n * (2 * a * b * c - a * (a - 1) * b * (b - 1))).rem_euclid(m)
}

/// Per-hom values of `M_{m,n} → H(m)` by three routes.
#[derive(Clone, Debug)]
pub struct HeisenbergReport {
    pub m: usize,
    pub n: i64,
    /// `(a, b, c)` with `f(x1) = x^a y^b z^c`, `f(x2) = f(x1)⁻¹`.
    pub params: Vec<(i64, i64, i64)>,
    /// Cup pairing with the 2-cell cochain `u ↦ 2`, others `↦ 0`.
    pub engine: Vec<i64>,
    pub closed: Vec<i64>,
    /// Cup pairing with an explicit Massey-product 2-cocycle.
    pub massey: Vec<i64>,
    /// How many `(a,b,c)` make `x2 ↦ x^{−a}y^{−b}z^{−c+ab}` a homomorphism.
    pub alternative_image_homs: usize,
}

impl HeisenbergReport {
    pub fn engine_sum(&self) -> FormalSum {
        FormalSum::from_values(self.m as i64, self.engine.iter().copied())
    }
    pub fn closed_sum(&self) -> FormalSum {
        FormalSum::from_values(self.m as i64, self.closed.iter().copied())
    }
    pub fn massey_sum(&self) -> FormalSum {
        FormalSum::from_values(self.m as i64, self.massey.iter().copied())
    }
    pub fn engine_matches_closed_form(&self) -> bool {
        self.engine == self.closed
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "n": self.n,
            "homs": self.params.len(),
            "engine": self.engine_sum().to_json(),
            "closed_form": self.closed_sum().to_json(),
            "massey": self.massey_sum().to_json(),
            "engine_matches_closed_form": self.engine_matches_closed_form(),
            "alternative_image_homs": self.alternative_image_homs,
        })
    }
}

/// Massey 2-cocycle `M(g,h) = a₁₂(g)α(h) + α(g)a₂₃(h)` with `a₁₂ = −c − ab`,
/// `a₂₃ = c`, defining `⟨α, β, α⟩` from `δa₁₂ = α⌣β`, `δa₂₃ = β⌣α`.
pub fn massey_cocycle(m: usize) -> impl Fn(&[usize]) -> i64 {
    move |t: &[usize]| {
        let (a, b, c) = ((t[0] / (m * m)) as i64, ((t[0] / m) % m) as i64, (t[0] % m) as i64);
        let (a2, c2) = ((t[1] / (m * m)) as i64, (t[1] % m) as i64);
        ((-c - a * b) * a2 + a * c2).rem_euclid(m as i64)
    }
}

/// `β(x^a y^b z^c) = b`.
pub fn beta(m: usize) -> impl Fn(usize) -> i64 {
    move |e: usize| ((e / m) % m) as i64
}

pub fn dw_heisenberg(m: usize, n: i64) -> Result<HeisenbergReport> {
    if m < 2 || n < 1 || num_integer::gcd(m as i64, 6 * n) != 1 {
        return Err(Error::InvalidParameter(format!("need gcd(m, 6n) = 1, got m = {m}, n = {n}")));
    }
    let (pres, s) = seifert_mn(m as i64, n)?;
    let ccd = build_complex(&pres, &s)?;
    let g = FiniteGroup::heisenberg(m)?;
    let mi = m as i64;

    let homs = enumerate_homs(&pres, &g);
    let mut expected: Vec<Hom> = Vec::new();
    let mut params = Vec::new();
    for a in 0..mi {
        for b in 0..mi {
            for c in 0..mi {
                params.push((a, b, c));
                expected.push(Hom { images: vec![hidx(m, a, b, c), hidx(m, -a, -b, -c - a * b)] });
            }
        }
    }
    if homs != expected {
        return Err(Error::Internal("homomorphism set differs from the parametrization".into()));
    }
    let alternative_image_homs = params
        .iter()
        .filter(|&&(a, b, c)| {
            let imgs = [hidx(m, a, b, c), hidx(m, -a, -b, -c + a * b)];
            pres.relators.iter().all(|r| g.eval_word(r, &imgs).is_ok_and(|v| v == g.identity()))
        })
        .count();

    let massey = massey_cocycle(m);
    let scope = if g.order() <= 200 { CheckScope::Full } else { CheckScope::Sampled(200_000) };
    if !verify_inhomogeneous(&g, 2, mi, &massey, scope) {
        return Err(Error::Internal("Massey cochain is not a cocycle".into()));
    }

    let (x, y, z) = (Word::gen(0), Word::gen(1), Word::gen(2));
    let mut engine = Vec::with_capacity(params.len());
    let mut closed = Vec::with_capacity(params.len());
    let mut massey_vals = Vec::with_capacity(params.len());
    for (&(a, b, c), hom) in params.iter().zip(&homs) {
        let w1 = x.pow(a).mul(&y.pow(b)).mul(&z.pow(c));
        let w2 = x.pow(-a).mul(&y.pow(-b)).mul(&z.pow(-c - a * b));
        let q: Vec<i64> = pres
            .relators
            .iter()
            .map(|r| {
                let fr = r.substitute(|i| if i == 0 { w1.clone() } else { w2.clone() });
                let col = heisenberg_collect(m, &fr)?;
                if col.normal_form != (0, 0, 0) {
                    return Err(Error::Internal("relator image is not trivial".into()));
                }
                Ok((2 * col.count(REL_U)).rem_euclid(mi))
            })
            .collect::<Result<_>>()?;
        let p = [b, -b];
        engine.push(cup_pair(
            &ccd,
            &g,
            &hom.images,
            |_, l| Ok(p[l]),
            |_, j| Ok(q[j]),
            mi,
            |u, v| (u * v).rem_euclid(mi),
        )?);
        closed.push(closed_form(mi, n, a, b, c));
        massey_vals.push(cup_value(&ccd, &g, hom, beta(m), &massey, mi)?);
    }
    Ok(HeisenbergReport { m, n, params, engine, closed, massey: massey_vals, alternative_image_homs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collection_reproduces_group_product() {
        let m = 5;
        let g = FiniteGroup::heisenberg(m).unwrap();
        let words = [
            "y*x", "y^-1*x", "y*x^-1", "y^-1*x^-1", "z*y*x*z^-1", "y^3*x^2*y^-1*z*x^-4", "x^7*y^-9*z^12",
        ];
        let alpha = Alphabet::new(&["x", "y", "z"]).unwrap();
        for s in words {
            let w = alpha.parse_word(s).unwrap();
            let col = heisenberg_collect(m, &w).unwrap();
            let (a, b, c) = col.normal_form;
            assert_eq!(g.eval_word(&w, &[hidx(m, 1, 0, 0), hidx(m, 0, 1, 0), hidx(m, 0, 0, 1)]).unwrap(), hidx(m, a, b, c), "{s}");
        }
        // y x = x y z⁻¹ uses u exactly once
        let col = heisenberg_collect(m, &alpha.parse_word("y*x").unwrap()).unwrap();
        assert_eq!(col.normal_form, (1, 1, 4));
        assert_eq!(col.count(REL_U), 1);
        assert_eq!(col.count(REL_ZM), -1);
    }

    #[test]
    fn heisenberg_presentation_holds() {
        let g = FiniteGroup::heisenberg(5).unwrap();
        let p = heisenberg_presentation(5).unwrap();
        let imgs = [hidx(5, 1, 0, 0), hidx(5, 0, 1, 0), hidx(5, 0, 0, 1)];
        for r in &p.relators {
            assert_eq!(g.eval_word(r, &imgs).unwrap(), g.identity());
        }
    }

    #[test]
    fn parametrization_and_routes() {
        let rep = dw_heisenberg(5, 1).unwrap();
        assert_eq!(rep.params.len(), 125);
        assert_eq!(rep.engine_sum().total(), 125);
        // only b = 0 or a = 0 make the alternative image a homomorphism
        assert_eq!(rep.alternative_image_homs, 9 * 5);
        assert!(rep.massey.iter().all(|&v| v == 0));
        assert!(matches!(dw_heisenberg(3, 1), Err(Error::InvalidParameter(_))));
        assert!(matches!(dw_heisenberg(5, 5), Err(Error::InvalidParameter(_))));
    }
}
