//! Free-group words, group-ring elements over free groups, and Fox calculus.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dw::group::FiniteGroup;
use crate::error::{Error, Result};

/// A freely reduced word in exponent-run form.
///
/// Adjacent runs always carry distinct generators and no run has exponent 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    runs: Vec<(usize, i64)>,
}

impl Word {
    pub fn one() -> Self {
        Word { runs: Vec::new() }
    }

    pub fn gen(g: usize) -> Self {
        Word { runs: vec![(g, 1)] }
    }

    pub fn power(g: usize, e: i64) -> Self {
        if e == 0 {
            Word::one()
        } else {
            Word { runs: vec![(g, e)] }
        }
    }

    /// Freely reduces an arbitrary sequence of runs (exponents may be zero).
    pub fn from_runs<I: IntoIterator<Item = (usize, i64)>>(runs: I) -> Self {
        let mut w = Word::one();
        for (g, e) in runs {
            w.push(g, e);
        }
        w
    }

    /// Builds a word from signed single letters; `letters[i] = (g, ±1)`.
    pub fn from_letters<I: IntoIterator<Item = (usize, i32)>>(letters: I) -> Self {
        Word::from_runs(letters.into_iter().map(|(g, s)| (g, s as i64)))
    }

    fn push(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((g, e));
    }

    pub fn runs(&self) -> &[(usize, i64)] {
        &self.runs
    }

    pub fn is_one(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of letters, counting `x^e` as `|e|` letters.
    pub fn length(&self) -> usize {
        self.runs.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    /// Expansion into single letters `(generator, ±1)`.
    pub fn letters(&self) -> Vec<(usize, i32)> {
        let mut out = Vec::with_capacity(self.length());
        for &(g, e) in &self.runs {
            let s = if e > 0 { 1 } else { -1 };
            for _ in 0..e.abs() {
                out.push((g, s));
            }
        }
        out
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.runs {
            w.push(g, e);
        }
        w
    }

    pub fn inv(&self) -> Word {
        Word {
            runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut w = Word::one();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `c · self · c⁻¹`.
    pub fn conj(&self, c: &Word) -> Word {
        c.mul(self).mul(&c.inv())
    }

    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inv()).mul(&b.inv())
    }

    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.runs.iter().filter(|r| r.0 == g).map(|r| r.1).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.runs.iter().map(|r| r.0).max()
    }

    /// Image under the free-group homomorphism `g ↦ f(g)`.
    pub fn substitute<F: Fn(usize) -> Word>(&self, f: F) -> Word {
        let mut w = Word::one();
        for &(g, e) in &self.runs {
            w = w.mul(&f(g).pow(e));
        }
        w
    }

    /// Returns `(t, c)` with `self = t·c·t⁻¹` and `c` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (Word, Word) {
        let l = self.letters();
        let (mut i, mut j) = (0usize, l.len());
        while i + 1 < j && l[i].0 == l[j - 1].0 && l[i].1 == -l[j - 1].1 {
            i += 1;
            j -= 1;
        }
        (
            Word::from_letters(l[..i].iter().copied()),
            Word::from_letters(l[i..j].iter().copied()),
        )
    }

    /// Conjugates `u` with `self = u · w · u⁻¹`, searched among cyclic
    /// rotations. Returns the shortest such `u` if `self` is conjugate to `w`.
    pub fn conjugator_to(&self, w: &Word) -> Option<Word> {
        let (t1, c1) = self.cyclic_decomposition();
        let (t2, c2) = w.cyclic_decomposition();
        // self = t1 c1 t1⁻¹, w = t2 c2 t2⁻¹; need c1 = a⁻¹ c2 a for a prefix a.
        let l2 = c2.letters();
        let l1 = c1.letters();
        if l1.len() != l2.len() {
            return None;
        }
        let n = l2.len();
        let mut best: Option<Word> = None;
        if n == 0 {
            return Some(t1.mul(&t2.inv()));
        }
        for k in 0..n {
            let rot: Vec<(usize, i32)> = l2[k..].iter().chain(l2[..k].iter()).copied().collect();
            if rot == l1 {
                // c2 = a·b with a = l2[..k]; rot = b·a = a⁻¹ c2 a
                let a = Word::from_letters(l2[..k].iter().copied());
                let u = t1.mul(&a.inv()).mul(&t2.inv());
                if best.as_ref().map_or(true, |b| u.length() < b.length()) {
                    best = Some(u);
                }
            }
        }
        best
    }
}

/// Role of a symbol in an alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Role {
    Generator,
    Relator,
}

/// Names of the symbols that words are written in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    roles: Vec<Role>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::with_relators(names, &[] as &[&str])
    }

    /// Ordinary generators first, then relator symbols.
    pub fn with_relators<S: AsRef<str>, T: AsRef<str>>(gens: &[S], rels: &[T]) -> Result<Self> {
        let mut names = Vec::new();
        let mut roles = Vec::new();
        for n in gens {
            names.push(n.as_ref().to_string());
            roles.push(Role::Generator);
        }
        for n in rels {
            names.push(n.as_ref().to_string());
            roles.push(Role::Relator);
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(['*', '^', '+', '-', ' ']) || n == "1" {
                return Err(Error::Parse(format!("invalid symbol name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate symbol name `{n}`")));
            }
        }
        Ok(Alphabet { names, roles })
    }

    /// Generators `prefix1, prefix2, …`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Alphabet::new(&names).expect("indexed names are valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn role(&self, i: usize) -> Role {
        self.roles[i]
    }

    pub fn num_generators(&self) -> usize {
        self.roles.iter().filter(|r| **r == Role::Generator).count()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.len() => Err(Error::UnknownGenerator(g)),
            _ => Ok(()),
        }
    }

    /// Reduces raw signed letters after validating every index.
    pub fn reduce(&self, raw: &[(usize, i64)]) -> Result<Word> {
        if let Some(&(g, _)) = raw.iter().find(|&&(g, _)| g >= self.len()) {
            return Err(Error::UnknownGenerator(g));
        }
        Ok(Word::from_runs(raw.iter().copied()))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_one() {
            return "1".to_string();
        }
        w.runs()
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    self.names[g].clone()
                } else {
                    format!("{}^{}", self.names[g], e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "1" {
            return Ok(Word::one());
        }
        let mut runs = Vec::new();
        for tok in s.split('*') {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .trim_start_matches('(')
                        .trim_end_matches(')')
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            if name == "1" {
                continue;
            }
            let g = self
                .index(name)
                .ok_or_else(|| Error::UnknownName(name.to_string()))?;
            runs.push((g, exp));
        }
        Ok(Word::from_runs(runs))
    }

    pub fn format_element(&self, a: &GroupRingElement) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in a.terms().iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if w.is_one() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&self.format_word(w));
            } else {
                out.push_str(&format!("{}*{}", mag, self.format_word(w)));
            }
        }
        out
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupRingElement> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" || s.is_empty() {
            return Ok(GroupRingElement::zero());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        let mut prev = '\0';
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && prev != '^' && prev != '(' && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = ch;
        }
        terms.push(cur);
        let mut out = GroupRingElement::zero();
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, t.strip_prefix('+').unwrap_or(&t)),
            };
            let (coef, word) = match body.split_once('*') {
                Some((c, w)) if c.chars().all(|d| d.is_ascii_digit()) => (
                    c.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))?,
                    self.parse_word(w)?,
                ),
                _ if body.chars().all(|d| d.is_ascii_digit()) => (
                    body.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))?,
                    Word::one(),
                ),
                _ => (BigInt::one(), self.parse_word(body)?),
            };
            out.add_term(word, coef * sign);
        }
        Ok(out)
    }
}

/// A finite ℤ-linear combination of reduced words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, BigInt>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::one())
    }

    pub fn from_word(w: Word) -> Self {
        let mut a = Self::zero();
        a.add_term(w, BigInt::one());
        a
    }

    pub fn term(w: Word, c: impl Into<BigInt>) -> Self {
        let mut a = Self::zero();
        a.add_term(w, c.into());
        a
    }

    pub fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn augment(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GroupRingElement {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn left_mul_word(&self, u: &Word) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(u.mul(w), c.clone());
        }
        out
    }

    pub fn right_mul_word(&self, u: &Word) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.mul(u), c.clone());
        }
        out
    }

    /// Image under the ring map induced by a free-group homomorphism.
    pub fn map_words<F: Fn(&Word) -> Word>(&self, f: F) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().filter_map(Word::max_generator).max()
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|&(g, e)| if e == 1 { format!("g{g}") } else { format!("g{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

pub fn multiply(u: &Word, v: &Word) -> Word {
    u.mul(v)
}

pub fn invert(u: &Word) -> Word {
    u.inv()
}

pub fn ring_add(a: &GroupRingElement, b: &GroupRingElement) -> GroupRingElement {
    a + b
}

pub fn ring_mul(a: &GroupRingElement, b: &GroupRingElement) -> GroupRingElement {
    a * b
}

pub fn augment(a: &GroupRingElement) -> BigInt {
    a.augment()
}

/// Fox derivative `∂w/∂g` in ℤ[F].
pub fn fox_derivative(w: &Word, g: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::one();
    for &(h, e) in w.runs() {
        if h == g {
            if e > 0 {
                for i in 0..e {
                    out.add_term(prefix.mul(&Word::power(g, i)), BigInt::one());
                }
            } else {
                for i in 1..=-e {
                    out.add_term(prefix.mul(&Word::power(g, -i)), BigInt::from(-1));
                }
            }
        }
        prefix.push(h, e);
    }
    out
}

/// Fox derivative of a group-ring element, extended linearly.
pub fn fox_derivative_element(a: &GroupRingElement, g: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    for (w, c) in a.terms() {
        out = &out + &fox_derivative(w, g).scale(c);
    }
    out
}

/// Pushforward ℤ[F] → ℤ[G] along `generator ↦ images[generator]`.
pub fn apply_hom(
    a: &GroupRingElement,
    images: &[usize],
    group: &FiniteGroup,
) -> Result<BTreeMap<usize, BigInt>> {
    let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (w, c) in a.terms() {
        let g = group.eval_word(w, images)?;
        let e = out.entry(g).or_insert_with(BigInt::zero);
        *e += c;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let a = ab();
        assert!(a.reduce(&[(0, 1), (0, -1)]).unwrap().is_one());
        assert_eq!(
            a.reduce(&[(0, 1), (1, 1), (1, -1), (0, 1)]).unwrap(),
            Word::power(0, 2)
        );
        let w = a.reduce(&[(0, 1), (1, -1)]).unwrap();
        assert_eq!(a.format_word(&w), "x*y^-1");
        assert_eq!(a.reduce(&[(7, 1)]), Err(Error::UnknownGenerator(7)));
    }

    #[test]
    fn group_laws() {
        let a = ab();
        let x = Word::gen(0);
        let xy = a.parse_word("x*y").unwrap();
        assert!(x.mul(&x.inv()).is_one());
        assert_eq!(a.format_word(&xy.inv()), "y^-1*x^-1");
        let w = xy.mul(&a.parse_word("y^-1*z").unwrap());
        assert_eq!(a.format_word(&w), "x*z");
    }

    #[test]
    fn fox_examples() {
        let a = ab();
        let x = Word::gen(0);
        assert_eq!(fox_derivative(&x, 0), GroupRingElement::one());
        assert_eq!(
            fox_derivative(&x.inv(), 0),
            GroupRingElement::term(x.inv(), -1)
        );
        let c = Word::commutator(&Word::gen(0), &Word::gen(1));
        let d = fox_derivative(&c, 0);
        assert_eq!(a.format_element(&d), "1 - x*y*x^-1");
    }

    #[test]
    fn ring_examples() {
        let a = ab();
        let one_minus_x = a.parse_element("1 - x").unwrap();
        assert!(augment(&one_minus_x).is_zero());
        let one_plus_x = a.parse_element("1 + x").unwrap();
        assert_eq!(
            a.format_element(&ring_mul(&one_minus_x, &one_plus_x)),
            "1 - x^2"
        );
        let two_x = a.parse_element("2*x").unwrap();
        assert!(ring_add(&two_x, &-&two_x).is_zero());
    }

    #[test]
    fn apply_hom_examples() {
        let g3 = FiniteGroup::cyclic(3);
        let a = ab();
        let e = a.parse_element("1 - x").unwrap();
        let img = apply_hom(&e, &[1], &g3).unwrap();
        assert_eq!(img, BTreeMap::from([(0, BigInt::one()), (1, BigInt::from(-1))]));
        let e = a.parse_element("x + x^-1").unwrap();
        assert_eq!(
            apply_hom(&e, &[0], &g3).unwrap(),
            BTreeMap::from([(0, BigInt::from(2))])
        );
        let d = fox_derivative(&Word::power(0, 3), 0);
        assert_eq!(
            apply_hom(&d, &[1], &g3).unwrap(),
            BTreeMap::from([(0, BigInt::one()), (1, BigInt::one()), (2, BigInt::one())])
        );
        assert_eq!(
            apply_hom(&a.parse_element("y").unwrap(), &[1], &g3),
            Err(Error::MissingImage(1))
        );
    }

    #[test]
    fn text_roundtrip() {
        let a = ab();
        let e = a.parse_element("-3*x^2*y^-1 + z - 1").unwrap();
        let s = a.format_element(&e);
        assert_eq!(a.parse_element(&s).unwrap(), e);
        assert_eq!(a.parse_word("x1"), Err(Error::UnknownName("x1".into())));
    }

    #[test]
    fn conjugator_search() {
        let r = Word::commutator(&Word::gen(0), &Word::gen(1));
        let u = Word::from_letters([(2, 1), (0, -1)]);
        let w = r.conj(&u);
        let found = w.conjugator_to(&r).unwrap();
        assert_eq!(r.conj(&found), w);
        assert!(r.inv().conjugator_to(&r).is_none());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, -3i64..=3), 0..12).prop_map(Word::from_runs)
    }

    fn brute_reduce(w: &Word) -> Word {
        let mut stack: Vec<(usize, i32)> = Vec::new();
        for l in w.letters() {
            if stack.last() == Some(&(l.0, -l.1)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word::from_letters(stack)
    }

    proptest! {
        #[test]
        fn reduce_idempotent(w in arb_word()) {
            prop_assert_eq!(Word::from_runs(w.runs().iter().copied()), w.clone());
            prop_assert_eq!(brute_reduce(&w), w);
        }

        #[test]
        fn associativity(u in arb_word(), v in arb_word(), w in arb_word()) {
            prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
            prop_assert!(u.inv().mul(&u).is_one());
        }

        #[test]
        fn fox_identity(w in arb_word()) {
            let mut sum = GroupRingElement::zero();
            for k in 0..3 {
                let xk = &GroupRingElement::from_word(Word::gen(k)) - &GroupRingElement::one();
                sum = &sum + &(&fox_derivative(&w, k) * &xk);
            }
            let rhs = &GroupRingElement::from_word(w.clone()) - &GroupRingElement::one();
            prop_assert_eq!(sum, rhs);
        }

        #[test]
        fn fox_augmentation_is_exponent_sum(w in arb_word(), k in 0usize..3) {
            prop_assert_eq!(fox_derivative(&w, k).augment(), BigInt::from(w.exponent_sum(k)));
        }

        #[test]
        fn product_rule(u in arb_word(), v in arb_word(), k in 0usize..3) {
            let lhs = fox_derivative(&u.mul(&v), k);
            let rhs = &fox_derivative(&u, k) + &fox_derivative(&v, k).left_mul_word(&u);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cyclic_decomposition_is_valid(w in arb_word()) {
            let (t, c) = w.cyclic_decomposition();
            prop_assert_eq!(c.conj(&t), w.clone());
            let l = c.letters();
            if l.len() >= 2 {
                prop_assert!(l[0] != (l[l.len()-1].0, -l[l.len()-1].1));
            }
        }
    }
}
