//! Balanced presentations, identities among relations, the family
//! constructors and the tautness search.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::IntMatrix;
use crate::symbolic::{fox_derivative, Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
    pub relator_names: Vec<String>,
    /// Free-form caveats attached by constructors.
    pub notes: Vec<String>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        let names = (1..=relators.len()).map(|j| format!("r{j}")).collect();
        Self::with_names(alphabet, relators, names)
    }

    pub fn with_names(alphabet: Alphabet, relators: Vec<Word>, relator_names: Vec<String>) -> Result<Self> {
        if relator_names.len() != relators.len() {
            return Err(Error::Dimension("relator name count".into()));
        }
        for (j, r) in relators.iter().enumerate() {
            if r.is_one() {
                return Err(Error::InvalidParameter(format!("relator {} is trivial", j + 1)));
            }
            alphabet.check(r)?;
        }
        // relator symbols must not clash with generator names
        Alphabet::with_relators(alphabet.names(), &relator_names)?;
        Ok(Presentation { alphabet, relators, relator_names, notes: Vec::new() })
    }

    pub fn num_generators(&self) -> usize {
        self.alphabet.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    /// Alphabet of P ∗ F: generators first, then one symbol per relator.
    pub fn pf_alphabet(&self) -> Alphabet {
        Alphabet::with_relators(self.alphabet.names(), &self.relator_names).expect("checked at construction")
    }

    /// Index of the relator symbol `ρ_j` in the P ∗ F alphabet.
    pub fn rho(&self, j: usize) -> usize {
        self.num_generators() + j
    }

    /// The substitution ψ : P ∗ F → F.
    pub fn psi(&self, w: &Word) -> Word {
        let m = self.num_generators();
        w.substitute(|g| if g < m { Word::gen(g) } else { self.relators[g - m].clone() })
    }

    /// Abelianized relator matrix: entry (i, k) = exponent sum of x_k in r_i.
    pub fn abelianization_matrix(&self) -> IntMatrix {
        let m = self.num_generators();
        IntMatrix::from_fn(self.num_relators(), m, |i, k| fox_derivative(&self.relators[i], k).augment())
    }
}

/// One factor `ω ρ_j^ε ω⁻¹` of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub conj: Word,
    pub relator: usize,
    pub sign: i32,
}

impl Factor {
    pub fn new(conj: Word, relator: usize, sign: i32) -> Self {
        Factor { conj, relator, sign }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Identity {
    pub factors: Vec<Factor>,
}

impl Identity {
    pub fn new(factors: Vec<Factor>) -> Self {
        Identity { factors }
    }

    /// Decomposes a word of P ∗ F into conjugates of relator symbols:
    /// each ρ-letter contributes a factor whose conjugator is the
    /// F-projection of the prefix before it.
    pub fn from_pf_word(p: &Presentation, w: &Word) -> Result<Self> {
        let m = p.num_generators();
        let mut factors = Vec::new();
        let mut prefix = Word::one();
        for (g, s) in w.letters() {
            if g < m {
                prefix = prefix.mul(&Word::power(g, s as i64));
            } else {
                let j = g - m;
                if j >= p.num_relators() {
                    return Err(Error::DanglingRelator(j));
                }
                factors.push(Factor::new(prefix.clone(), j, s));
            }
        }
        if !prefix.is_one() {
            return Err(Error::NotAnIdentity(
                "word is not a product of conjugates of relator symbols".into(),
            ));
        }
        Ok(Identity { factors })
    }

    pub fn to_pf_word(&self, p: &Presentation) -> Word {
        let mut w = Word::one();
        for f in &self.factors {
            w = w.mul(&Word::power(p.rho(f.relator), f.sign as i64).conj(&f.conj));
        }
        w
    }

    pub fn psi_image(&self, p: &Presentation) -> Result<Word> {
        let mut w = Word::one();
        for f in &self.factors {
            let r = p.relators.get(f.relator).ok_or(Error::DanglingRelator(f.relator))?;
            w = w.mul(&r.pow(f.sign as i64).conj(&f.conj));
        }
        Ok(w)
    }

    pub fn inverse(&self) -> Identity {
        Identity {
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| Factor::new(f.conj.clone(), f.relator, -f.sign))
                .collect(),
        }
    }

    pub fn conjugated(&self, c: &Word) -> Identity {
        Identity {
            factors: self
                .factors
                .iter()
                .map(|f| Factor::new(c.mul(&f.conj), f.relator, f.sign))
                .collect(),
        }
    }

    pub fn then(mut self, other: Identity) -> Identity {
        self.factors.extend(other.factors);
        self
    }
}

pub fn verify_identity(p: &Presentation, s: &Identity) -> Result<bool> {
    for f in &s.factors {
        if f.relator >= p.num_relators() {
            return Err(Error::DanglingRelator(f.relator));
        }
        p.alphabet.check(&f.conj)?;
        if f.sign != 1 && f.sign != -1 {
            return Err(Error::InvalidParameter("factor sign must be ±1".into()));
        }
    }
    Ok(s.psi_image(p)?.is_one())
}

fn surface_relator(g: usize, gens: impl Fn(usize) -> Word) -> Word {
    let mut r = Word::one();
    for i in 0..g {
        r = r.mul(&Word::commutator(&gens(2 * i), &gens(2 * i + 1)));
    }
    r
}

/// Data of a Seifert surface: the push-offs `u_i♯`, `u_i♭` of a basis of
/// its fundamental group, written in generators `x1 … x2g` of the
/// complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotData {
    pub genus: usize,
    pub u_sharp: Vec<Word>,
    pub u_flat: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct KnotDataJson {
    genus: usize,
    u_sharp: Vec<String>,
    u_flat: Vec<String>,
}

impl KnotData {
    pub fn new(genus: usize, u_sharp: Vec<Word>, u_flat: Vec<Word>) -> Result<Self> {
        let k = KnotData { genus, u_sharp, u_flat };
        k.validate()?;
        Ok(k)
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::indexed("x", 2 * self.genus)
    }

    pub fn validate(&self) -> Result<()> {
        let n = 2 * self.genus;
        if self.genus == 0 || self.u_sharp.len() != n || self.u_flat.len() != n {
            return Err(Error::InvalidParameter("knot data needs genus ≥ 1 and 2g words each".into()));
        }
        let ab = self.alphabet();
        for w in self.u_sharp.iter().chain(&self.u_flat) {
            ab.check(w)?;
        }
        if self.longitude_sharp() != self.longitude_flat() {
            return Err(Error::BoundaryCompatibility(format!(
                "{} ≠ {}",
                ab.format_word(&self.longitude_flat()),
                ab.format_word(&self.longitude_sharp())
            )));
        }
        Ok(())
    }

    pub fn longitude_flat(&self) -> Word {
        surface_relator(self.genus, |i| self.u_flat[i].clone())
    }

    pub fn longitude_sharp(&self) -> Word {
        surface_relator(self.genus, |i| self.u_sharp[i].clone())
    }

    /// Abelianizations `(U♯, U♭)`: entry (i, j) is the x_j exponent sum.
    pub fn abelianized(&self) -> (IntMatrix, IntMatrix) {
        let n = 2 * self.genus;
        let f = |ws: &[Word]| IntMatrix::from_fn(n, n, |i, j| fox_derivative(&ws[i], j).augment());
        (f(&self.u_sharp), f(&self.u_flat))
    }

    /// Words of the trefoil obtained from its fibre surface monodromy.
    pub fn trefoil() -> Self {
        let (x1, x2) = (Word::gen(0), Word::gen(1));
        KnotData::new(1, vec![x1.clone(), x2.clone()], vec![x2.inv(), x2.mul(&x1)]).expect("trefoil data")
    }

    /// Trefoil words after `x2 ↦ x1⁻¹x2`; here `(U♯, U♭) = (V, ᵗV)` with
    /// `V = [[1,0],[-1,1]]`.
    pub fn trefoil_normalized() -> Self {
        let (x1, x2) = (Word::gen(0), Word::gen(1));
        let y = x1.inv().mul(&x2);
        KnotData::new(1, vec![x1.clone(), y.clone()], vec![y.inv(), y.mul(&x1)]).expect("trefoil data")
    }

    /// The figure-eight words `x1x2 ↦ x1`, `x2x1x2 ↦ x2`.
    pub fn figure_eight() -> Self {
        let (x1, x2) = (Word::gen(0), Word::gen(1));
        KnotData::new(
            1,
            vec![x1.mul(&x2), x2.mul(&x1).mul(&x2)],
            vec![x1.clone(), x2.clone()],
        )
        .expect("figure-eight data")
    }

    /// Figure-eight words after `x1 ↦ x1x2, x2 ↦ x2⁻¹`; here
    /// `(U♯, U♭) = (V, ᵗV)` with `V = [[1,0],[1,-1]]`.
    pub fn figure_eight_normalized() -> Self {
        let (x1, x2) = (Word::gen(0), Word::gen(1));
        KnotData::new(
            1,
            vec![x1.clone(), x2.inv().mul(&x1)],
            vec![x1.mul(&x2), x2.inv()],
        )
        .expect("figure-eight data")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ab = self.alphabet();
        serde_json::to_value(KnotDataJson {
            genus: self.genus,
            u_sharp: self.u_sharp.iter().map(|w| ab.format_word(w)).collect(),
            u_flat: self.u_flat.iter().map(|w| ab.format_word(w)).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: KnotDataJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let ab = Alphabet::indexed("x", 2 * j.genus);
        let parse = |ws: &[String]| ws.iter().map(|s| ab.parse_word(s)).collect::<Result<Vec<_>>>();
        KnotData::new(j.genus, parse(&j.u_sharp)?, parse(&j.u_flat)?)
    }
}

/// A mapping class given by its action on `x1 … x2g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingClassData {
    pub genus: usize,
    pub images: Vec<Word>,
    pub q_f: Word,
}

impl MappingClassData {
    pub fn new(genus: usize, images: Vec<Word>) -> Result<Self> {
        let q_f = compute_qf(genus, &images)?;
        Ok(MappingClassData { genus, images, q_f })
    }

    pub fn identity(genus: usize) -> Self {
        Self::new(genus, (0..2 * genus).map(Word::gen).collect()).expect("identity map")
    }

    /// `f ∘ g`: first apply `g`, then `f`.
    pub fn compose(&self, g: &MappingClassData) -> Result<Self> {
        let images = g.images.iter().map(|w| w.substitute(|i| self.images[i].clone())).collect();
        Self::new(self.genus, images)
    }
}

/// Elementary boundary-preserving automorphisms used as building blocks
/// for random mapping classes. Handle twists act on one handle, `swap`
/// exchanges handle `i` with handle `i+1`.
pub fn elementary_mapping_class(genus: usize, kind: usize, handle: usize) -> Result<MappingClassData> {
    let mut images: Vec<Word> = (0..2 * genus).map(Word::gen).collect();
    let (a, b) = (2 * handle, 2 * handle + 1);
    if handle >= genus {
        return Err(Error::InvalidParameter("handle index".into()));
    }
    match kind {
        0 => images[b] = Word::gen(b).mul(&Word::gen(a)),
        1 => images[a] = Word::gen(a).mul(&Word::gen(b)),
        2 => images[b] = Word::gen(b).mul(&Word::gen(a).inv()),
        3 => images[a] = Word::gen(a).mul(&Word::gen(b).inv()),
        4 if handle + 1 < genus => {
            let (c, d) = (a + 2, b + 2);
            let cd = Word::commutator(&Word::gen(c), &Word::gen(d));
            images[a] = Word::gen(c);
            images[b] = Word::gen(d);
            images[c] = Word::gen(a).conj(&cd.inv());
            images[d] = Word::gen(b).conj(&cd.inv());
        }
        _ => return Err(Error::InvalidParameter("mapping class kind".into())),
    }
    MappingClassData::new(genus, images)
}

/// Default search bound for [`compute_qf`].
pub fn qf_bound(genus: usize, images: &[Word]) -> usize {
    let r = surface_relator(genus, Word::gen);
    let fr = r.substitute(|i| images[i].clone());
    4 * r.length().max(fr.length())
}

/// Finds `q` with `f(R) = q R q⁻¹`, `R = ∏[x_{2i−1}, x_{2i}]`.
pub fn compute_qf(genus: usize, images: &[Word]) -> Result<Word> {
    compute_qf_bounded(genus, images, qf_bound(genus, images))
}

pub fn compute_qf_bounded(genus: usize, images: &[Word], bound: usize) -> Result<Word> {
    if images.len() != 2 * genus {
        return Err(Error::Dimension("need 2g images".into()));
    }
    let r = surface_relator(genus, Word::gen);
    let fr = r.substitute(|i| images[i].clone());
    let q = fr
        .conjugator_to(&r)
        .ok_or_else(|| Error::NotBoundaryPreserving("f(R) is not conjugate to R".into()))?;
    // q is unique up to right multiplication by powers of R
    let best = [q.mul(&r.inv()), q.clone(), q.mul(&r)]
        .into_iter()
        .min_by_key(|w| (w.length(), w.clone()))
        .unwrap();
    if best.length() > bound {
        return Err(Error::NotBoundaryPreserving(format!(
            "conjugator longer than search bound {bound}"
        )));
    }
    Ok(best)
}

fn w_prefix_factors(genus: usize, u: impl Fn(usize) -> Word, rel: impl Fn(usize) -> usize) -> Identity {
    // W_i = w_{i-1} ρ_{2i-1} · (w_{i-1}u_{2i-1}) ρ_{2i} · (w_i u_{2i}) ρ_{2i-1}⁻¹ · w_i ρ_{2i}⁻¹
    let mut factors = Vec::new();
    let mut w_prev = Word::one();
    for i in 0..genus {
        let (a, b) = (u(2 * i), u(2 * i + 1));
        let w_i = w_prev.mul(&Word::commutator(&a, &b));
        factors.push(Factor::new(w_prev.clone(), rel(2 * i), 1));
        factors.push(Factor::new(w_prev.mul(&a), rel(2 * i + 1), 1));
        factors.push(Factor::new(w_i.mul(&b), rel(2 * i), -1));
        factors.push(Factor::new(w_i.clone(), rel(2 * i + 1), -1));
        w_prev = w_i;
    }
    Identity::new(factors)
}

/// The mapping torus of a surface automorphism.
pub fn mapping_torus(data: &MappingClassData) -> Result<(Presentation, Identity)> {
    let g = data.genus;
    let n = 2 * g;
    let q = compute_qf(g, &data.images)?;
    if q != data.q_f && data.images.iter().any(|w| w.max_generator().is_some_and(|m| m >= n)) {
        return Err(Error::InvalidParameter("images must use x1 … x2g".into()));
    }
    let q_f = data.q_f.clone();
    let r_check = surface_relator(g, Word::gen);
    if r_check.substitute(|i| data.images[i].clone()) != r_check.conj(&q_f) {
        return Err(Error::NotBoundaryPreserving("stored q_f is wrong".into()));
    }
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    names.push("t".into());
    let alphabet = Alphabet::new(&names)?;
    let gamma = Word::gen(n);
    let mut relators = Vec::new();
    for i in 0..n {
        relators.push(data.images[i].conj(&gamma).mul(&Word::gen(i).inv()));
    }
    relators.push(surface_relator(g, Word::gen));
    let p = Presentation::new(alphabet, relators)?;
    let mut s = w_prefix_factors(g, Word::gen, |i| i);
    s.factors.push(Factor::new(Word::one(), n, 1));
    s.factors.push(Factor::new(gamma.mul(&q_f), n, -1));
    Ok((p, s))
}

/// Partner knot of a spliced sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Partner {
    Unknot,
    Knot(KnotData),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurgeryVariant {
    /// Gluing matrix `(0 1; 1 p)`.
    P(i64),
    /// Gluing matrix `(1 0; q -1)`.
    Q(i64),
}

/// Spliced sums `Σ_{p/1}(K, K′)`, `Σ_{1/q}(K, K′)`; with the unknot as
/// partner these are `p/1`- and `1/q`-surgery on `K`.
///
/// Generators: `x1 … x2g, m`, then `x1' … x2g'` (and `m'` for `1/q`).
/// Relators: `r_i = m u_i♯ m⁻¹ (u_i♭)⁻¹`, the primed ones, then
/// `l·m^p·l'⁻¹` for `p/1`, or `m·l^q·l'⁻¹` and `m'·l⁻¹` for `1/q`, where
/// `l`, `l'` are the longitudes `∏[u♭_{2i−1}, u♭_{2i}]`.
pub fn surgery(data: &KnotData, variant: SurgeryVariant, partner: &Partner) -> Result<(Presentation, Identity)> {
    data.validate()?;
    let other = match partner {
        Partner::Unknot => None,
        Partner::Knot(k) => {
            k.validate()?;
            Some(k)
        }
    };
    let n = 2 * data.genus;
    let n2 = other.map_or(0, |k| 2 * k.genus);
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    names.push("m".into());
    names.extend((1..=n2).map(|i| format!("x{i}'")));
    let with_m2 = matches!(variant, SurgeryVariant::Q(_));
    if with_m2 {
        names.push("m'".into());
    }
    let alphabet = Alphabet::new(&names)?;
    let mer = Word::gen(n);
    let shift = |w: &Word| w.substitute(|i| Word::gen(n + 1 + i));
    let mer2 = if with_m2 { Word::gen(n + 1 + n2) } else { mer.clone() };
    let l = data.longitude_flat();
    let l2 = other.map_or(Word::one(), |k| shift(&k.longitude_flat()));

    let mut relators = Vec::new();
    for i in 0..n {
        relators.push(data.u_sharp[i].conj(&mer).mul(&data.u_flat[i].inv()));
    }
    if let Some(k) = other {
        for i in 0..n2 {
            relators.push(shift(&k.u_sharp[i]).conj(&mer2).mul(&shift(&k.u_flat[i]).inv()));
        }
    }
    let w1 = w_prefix_factors(data.genus, |i| data.u_flat[i].clone(), |i| i);
    let w2 = match other {
        Some(k) => w_prefix_factors(k.genus, |i| shift(&k.u_flat[i]), |i| n + i),
        None => Identity::default(),
    };
    let last = n + n2;
    match variant {
        SurgeryVariant::P(p) => {
            relators.push(l.mul(&mer.pow(p)).mul(&l2.inv()));
            let pres = Presentation::new(alphabet, relators)?;
            let mut s = w1;
            s.factors.push(Factor::new(Word::one(), last, 1));
            s = s.then(w2.inverse());
            s.factors.push(Factor::new(mer.clone(), last, -1));
            Ok((pres, s))
        }
        SurgeryVariant::Q(q) => {
            let (dagger, star) = (last, last + 1);
            relators.push(mer.mul(&l.pow(q)).mul(&l2.inv()));
            relators.push(mer2.mul(&l.inv()));
            let mut names_r: Vec<String> = (1..=last).map(|j| format!("r{j}")).collect();
            names_r.push("r_dagger".into());
            names_r.push("r_star".into());
            let pres = Presentation::with_names(alphabet, relators, names_r)?;
            let mut s = w1;
            s.factors.push(Factor::new(Word::one(), star, -1));
            s.factors.push(Factor::new(mer2.clone(), dagger, 1));
            s = s.then(w2);
            s.factors.push(Factor::new(l2.clone(), star, 1));
            s.factors.push(Factor::new(Word::one(), dagger, -1));
            Ok((pres, s))
        }
    }
}

/// Flattened index of `x_i^{(k)}` (both 0-based).
pub fn cover_slot(genus: usize, i: usize, k: usize) -> usize {
    k * 2 * genus + i
}

fn cover_names(genus: usize, d: usize) -> Vec<String> {
    let mut names = Vec::new();
    for k in 1..=d {
        for i in 1..=2 * genus {
            names.push(format!("x{i}_{k}"));
        }
    }
    names
}

/// The `d`-fold cyclic branched cover. Generator `x_i^{(k)}` sits at
/// slot `(k−1)·2g + i`; relator `u♯_{i,k} (u♭_{i,k+1})⁻¹` uses the same slot.
pub fn branched_cover(data: &KnotData, d: usize) -> Result<(Presentation, Identity)> {
    data.validate()?;
    if d < 2 {
        return Err(Error::InvalidParameter("fold d must be ≥ 2".into()));
    }
    let g = data.genus;
    let n = 2 * g;
    let copy = |w: &Word, k: usize| w.substitute(|i| Word::gen(cover_slot(g, i, k % d)));
    let alphabet = Alphabet::new(&cover_names(g, d))?;
    let mut relators = Vec::new();
    for k in 0..d {
        for i in 0..n {
            relators.push(copy(&data.u_sharp[i], k).mul(&copy(&data.u_flat[i], k + 1).inv()));
        }
    }
    let p = Presentation::new(alphabet, relators)?;
    let mut s = Identity::default();
    for k in 0..d {
        s = s.then(w_prefix_factors(g, |i| copy(&data.u_flat[i], k + 1), |i| cover_slot(g, i, k)));
    }
    Ok((p, s))
}

/// Zero-surgery on the lifted knot in the `d`-fold branched cover:
/// generators `x_i^{(k)}` then `m`; relators `m u♯_{i,k} m⁻¹ (u♭_{i,k+1})⁻¹`
/// and `l^{(1)} ⋯ l^{(d)}`.
pub fn zero_surgery_cover(data: &KnotData, d: usize) -> Result<(Presentation, Identity)> {
    data.validate()?;
    if d < 1 {
        return Err(Error::InvalidParameter("fold d must be ≥ 1".into()));
    }
    let g = data.genus;
    let n = 2 * g;
    let copy = |w: &Word, k: usize| w.substitute(|i| Word::gen(cover_slot(g, i, k % d)));
    let mut names = cover_names(g, d);
    names.push("m".into());
    let alphabet = Alphabet::new(&names)?;
    let mer = Word::gen(n * d);
    let mut relators = Vec::new();
    for k in 0..d {
        for i in 0..n {
            relators.push(copy(&data.u_sharp[i], k).conj(&mer).mul(&copy(&data.u_flat[i], k + 1).inv()));
        }
    }
    let lon: Vec<Word> = (0..d).map(|k| copy(&data.longitude_flat(), k)).collect();
    let mut r_l = Word::one();
    for l in &lon {
        r_l = r_l.mul(l);
    }
    relators.push(r_l);
    let mut rel_names: Vec<String> = (1..=n * d).map(|j| format!("r{j}")).collect();
    rel_names.push("r_l".into());
    let p = Presentation::with_names(alphabet, relators, rel_names)?;
    let rho_l = n * d;
    let mut s = Identity::default();
    let mut z = Word::one();
    for k in 0..d {
        if k > 0 {
            z = z.mul(&lon[k]);
        }
        let block = w_prefix_factors(g, |i| copy(&data.u_flat[i], k + 1), |i| cover_slot(g, i, k));
        s = s.then(block.conjugated(&z));
    }
    s.factors.push(Factor::new(lon[0].inv(), rho_l, 1));
    s.factors.push(Factor::new(mer, rho_l, -1));
    Ok((p, s))
}

/// Seifert fibred spaces with `n` generators and relators
/// `(x_i x_{i+1} ⋯ x_n x_1 ⋯ x_{i−1})^{−a_{n+1}} x_i^{ε_i a_i}`.
///
/// Whether the group is infinite is not checked; a note says so.
pub fn seifert(a: &[i64], eps: &[i64]) -> Result<(Presentation, Identity)> {
    let n = eps.len();
    if n == 0 || a.len() != n + 1 {
        return Err(Error::InvalidParameter("need a_1 … a_{n+1} and ε_1 … ε_n with n ≥ 1".into()));
    }
    if a.iter().any(|&ai| ai < 2) {
        return Err(Error::InvalidParameter("every a_i must be ≥ 2".into()));
    }
    if eps.iter().any(|&e| e != 1 && e != -1) {
        return Err(Error::InvalidParameter("ε_i must be ±1".into()));
    }
    let alphabet = Alphabet::indexed("x", n);
    let mut relators = Vec::new();
    for i in 0..n {
        let cyc = Word::from_runs((0..n).map(|k| ((i + k) % n, 1)));
        relators.push(cyc.pow(-a[n]).mul(&Word::power(i, eps[i] * a[i])));
    }
    let mut p = Presentation::new(alphabet, relators)?;
    p.notes.push("asphericity (infinite fundamental group) is not checked".into());
    let mut factors = Vec::new();
    for i in 0..n {
        factors.push(Factor::new(Word::one(), i, 1));
        factors.push(Factor::new(Word::gen(i).inv(), i, -1));
    }
    Ok((p, Identity::new(factors)))
}

/// `M_{m,n}` with relators `x1^m (x1⁻¹x2⁻¹)^n`, `x2^m (x2⁻¹x1⁻¹)^n` and
/// identity `ρ1⁻¹ (x1 ρ1 x1⁻¹) ρ2⁻¹ (x2 ρ2 x2⁻¹)`.
pub fn seifert_mn(m: i64, n: i64) -> Result<(Presentation, Identity)> {
    if m < 2 || n < 1 {
        return Err(Error::InvalidParameter("need m ≥ 2 and n ≥ 1".into()));
    }
    let (x1, x2) = (Word::gen(0), Word::gen(1));
    let r1 = x1.pow(m).mul(&x1.inv().mul(&x2.inv()).pow(n));
    let r2 = x2.pow(m).mul(&x2.inv().mul(&x1.inv()).pow(n));
    let p = Presentation::new(Alphabet::indexed("x", 2), vec![r1, r2])?;
    let s = Identity::new(vec![
        Factor::new(Word::one(), 0, -1),
        Factor::new(x1, 0, 1),
        Factor::new(Word::one(), 1, -1),
        Factor::new(x2, 1, 1),
    ]);
    Ok((p, s))
}

/// Brieskorn manifolds `Σ(p, q, mpq + ε)`.
pub fn brieskorn(p: i64, q: i64, m: i64, eps: i64) -> Result<(Presentation, Identity)> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidParameter("need p, q > 1".into()));
    }
    if m < 1 {
        return Err(Error::InvalidParameter("need m ≥ 1".into()));
    }
    if eps != 1 && eps != -1 {
        return Err(Error::InvalidParameter("ε must be ±1".into()));
    }
    let e = p.extended_gcd(&q);
    if e.gcd != 1 {
        return Err(Error::InvalidParameter("gcd(p, q) must be 1".into()));
    }
    let (a, b) = (e.x, e.y);
    let r = m * p * q + eps;
    // 1/p + 1/q + 1/r < 1  ⇔  qr + pr + pq < pqr
    if q * r + p * r + p * q >= p * q * r {
        return Err(Error::NotAspherical(format!("1/{p} + 1/{q} + 1/{r} ≥ 1")));
    }
    let (x, y) = (Word::gen(0), Word::gen(1));
    let mer = x.pow(a).mul(&y.pow(b));
    let r1 = x.pow(q * m).mul(&mer.pow(-r));
    let r2 = mer.pow(r).mul(&y.pow(-p)).mul(&x.pow(-q * m - q));
    let alphabet = Alphabet::new(&["x", "y"])?;
    let pres = Presentation::new(alphabet, vec![r1, r2])?;
    let conj = x.pow(q * m).mul(&y.pow(-p)).mul(&x.pow(-q * m - q));
    let s = Identity::new(vec![
        Factor::new(Word::one(), 0, 1),
        Factor::new(Word::one(), 1, -1),
        Factor::new(Word::one(), 0, -1),
        Factor::new(conj, 1, 1),
    ]);
    Ok((pres, s))
}

/// Lens space `L(p, q)`: `⟨x | x^p⟩` with identity `s x^{−q} s⁻¹ x^q`.
pub fn lens(p: i64, q: i64) -> Result<(Presentation, Identity)> {
    if p < 2 {
        return Err(Error::InvalidParameter("need p ≥ 2".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidParameter(format!("gcd({p}, {q}) ≠ 1")));
    }
    let alphabet = Alphabet::new(&["x"])?;
    let pres = Presentation::with_names(alphabet, vec![Word::power(0, p)], vec!["s".into()])?;
    let s = Identity::new(vec![
        Factor::new(Word::one(), 0, 1),
        Factor::new(Word::power(0, -q), 0, -1),
    ]);
    Ok((pres, s))
}

/// The 3-torus `⟨x, y, z | [x,y], [y,z], [z,x]⟩` with identity
/// `r (y u⁻¹ y⁻¹) s (z r⁻¹ z⁻¹) u (x s⁻¹ x⁻¹)`.
pub fn torus3() -> (Presentation, Identity) {
    let (x, y, z) = (Word::gen(0), Word::gen(1), Word::gen(2));
    let alphabet = Alphabet::new(&["x", "y", "z"]).expect("names");
    let pres = Presentation::with_names(
        alphabet,
        vec![Word::commutator(&x, &y), Word::commutator(&y, &z), Word::commutator(&z, &x)],
        vec!["r".into(), "s".into(), "u".into()],
    )
    .expect("torus presentation");
    let s = Identity::new(vec![
        Factor::new(Word::one(), 0, 1),
        Factor::new(y, 2, -1),
        Factor::new(Word::one(), 1, 1),
        Factor::new(z, 0, -1),
        Factor::new(Word::one(), 2, 1),
        Factor::new(x, 1, -1),
    ]);
    (pres, s)
}

/// An involution on the relator-polygon edges, indexed in lexicographic
/// order of `(factor, letter position)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyllablePairing {
    pub edges: Vec<(usize, usize)>,
    pub partner: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tautness {
    Taut(SyllablePairing),
    NotTaut,
    Unknown(String),
}

#[derive(Clone, Copy, Debug)]
pub struct TautnessOptions {
    pub budget: u64,
}

impl Default for TautnessOptions {
    fn default() -> Self {
        TautnessOptions { budget: 1_000_000 }
    }
}

struct Polygons {
    /// per edge: (factor, position, generator, sign)
    edges: Vec<(usize, usize, usize, i32)>,
    /// per factor: offset of its first edge and its edge count
    offsets: Vec<(usize, usize)>,
    conj: Vec<Vec<(usize, i32)>>,
}

impl Polygons {
    fn new(p: &Presentation, s: &Identity) -> Self {
        let mut edges = Vec::new();
        let mut offsets = Vec::new();
        let mut conj = Vec::new();
        for (k, f) in s.factors.iter().enumerate() {
            let letters = p.relators[f.relator].pow(f.sign as i64).letters();
            offsets.push((edges.len(), letters.len()));
            for (i, (g, e)) in letters.into_iter().enumerate() {
                edges.push((k, i, g, e));
            }
            conj.push(f.conj.letters());
        }
        Polygons { edges, offsets, conj }
    }

    fn vertex(&self, k: usize, i: usize) -> usize {
        let (o, l) = self.offsets[k];
        o + i % l
    }

    fn tail_head(&self, e: usize) -> (usize, usize) {
        let (k, i, _, _) = self.edges[e];
        (self.vertex(k, i), self.vertex(k, i + 1))
    }

    /// Vertex identifications produced by pairing `e` (sign +) with `f`.
    fn glue(&self, uf: &mut UnionFind, e: usize, f: usize) {
        let (e, f) = if self.edges[e].3 > 0 { (e, f) } else { (f, e) };
        let (te, he) = self.tail_head(e);
        let (tf, hf) = self.tail_head(f);
        // the x-arrow of a negative edge runs from its head to its tail
        uf.union(te, hf);
        uf.union(he, tf);
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut a = a;
        while self.0[a] != r {
            let next = self.0[a];
            self.0[a] = r;
            a = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&i| self.find(i) == i).count()
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy, Debug)]
enum PathFit {
    None,
    EdgeInjective,
    Injective,
}

/// Tautness: a sign- and generator-compatible
/// edge pairing whose quotient is a 2-sphere, plus conjugator paths.
pub fn check_tautness(
    p: &Presentation,
    s: &Identity,
    pairing: Option<&SyllablePairing>,
    opts: TautnessOptions,
) -> Result<Tautness> {
    if !verify_identity(p, s)? {
        return Err(Error::NotAnIdentity("tautness requires a verified identity".into()));
    }
    let poly = Polygons::new(p, s);
    let ne = poly.edges.len();
    if ne % 2 == 1 {
        return Ok(Tautness::NotTaut);
    }
    let keys: Vec<(usize, usize)> = poly.edges.iter().map(|e| (e.0, e.1)).collect();
    if let Some(given) = pairing {
        if given.partner.len() != ne || given.edges != keys {
            return Err(Error::Dimension("pairing does not match the identity's edges".into()));
        }
        let fit = evaluate_pairing(&poly, &given.partner, s.factors.len())?;
        return Ok(match fit {
            PathFit::Injective => Tautness::Taut(given.clone()),
            PathFit::EdgeInjective => Tautness::Unknown("paths are only edge-injective".into()),
            PathFit::None => Tautness::NotTaut,
        });
    }
    let mut search = Search {
        poly: &poly,
        faces: s.factors.len(),
        partner: vec![usize::MAX; ne],
        nodes: 0,
        budget: opts.budget,
        borderline: false,
        found: None,
        exhausted: false,
    };
    search.run();
    if let Some(partner) = search.found {
        return Ok(Tautness::Taut(SyllablePairing { edges: keys, partner }));
    }
    if search.exhausted {
        return Ok(Tautness::Unknown(format!("search budget of {} nodes exhausted", opts.budget)));
    }
    if search.borderline {
        return Ok(Tautness::Unknown("only edge-injective conjugator paths exist".into()));
    }
    Ok(Tautness::NotTaut)
}

struct Search<'a> {
    poly: &'a Polygons,
    faces: usize,
    partner: Vec<usize>,
    nodes: u64,
    budget: u64,
    borderline: bool,
    found: Option<Vec<usize>>,
    exhausted: bool,
}

impl Search<'_> {
    fn run(&mut self) {
        self.step();
    }

    fn feasible(&self) -> bool {
        // vertex classes only merge as pairs are added; the sphere needs
        // exactly E − F + 2 classes at the end
        let ne = self.poly.edges.len();
        let need = (ne / 2) as i64 - self.faces as i64 + 2;
        if need < 1 {
            return false;
        }
        let mut uf = UnionFind::new(ne);
        for e in 0..ne {
            let f = self.partner[e];
            if f != usize::MAX && e < f {
                self.poly.glue(&mut uf, e, f);
            }
        }
        uf.classes() as i64 >= need
    }

    fn step(&mut self) -> bool {
        if self.found.is_some() {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return true;
        }
        if !self.feasible() {
            return false;
        }
        let Some(e) = self.partner.iter().position(|&x| x == usize::MAX) else {
            match evaluate_pairing(self.poly, &self.partner, self.faces) {
                Ok(PathFit::Injective) => {
                    self.found = Some(self.partner.clone());
                    return true;
                }
                Ok(PathFit::EdgeInjective) => self.borderline = true,
                _ => {}
            }
            return false;
        };
        let (_, _, g, sgn) = self.poly.edges[e];
        for f in e + 1..self.poly.edges.len() {
            let (_, _, g2, s2) = self.poly.edges[f];
            if self.partner[f] != usize::MAX || g2 != g || s2 != -sgn {
                continue;
            }
            self.partner[e] = f;
            self.partner[f] = e;
            if self.step() {
                return true;
            }
            self.partner[e] = usize::MAX;
            self.partner[f] = usize::MAX;
        }
        false
    }
}

/// Sphere test plus the conjugator-path search for a complete pairing.
fn evaluate_pairing(poly: &Polygons, partner: &[usize], faces: usize) -> Result<PathFit> {
    let ne = poly.edges.len();
    for e in 0..ne {
        let f = partner[e];
        if f >= ne || partner[f] != e || f == e {
            return Err(Error::InvalidParameter("pairing is not a fixed-point-free involution".into()));
        }
        if poly.edges[e].2 != poly.edges[f].2 || poly.edges[e].3 != -poly.edges[f].3 {
            return Ok(PathFit::None);
        }
    }
    let mut uf = UnionFind::new(ne);
    let mut faces_uf = UnionFind::new(faces);
    for e in 0..ne {
        let f = partner[e];
        if e < f {
            poly.glue(&mut uf, e, f);
            faces_uf.union(poly.edges[e].0, poly.edges[f].0);
        }
    }
    let v = uf.classes() as i64;
    let chi = v - (ne / 2) as i64 + faces as i64;
    if chi != 2 || faces_uf.classes() != 1 {
        return Ok(PathFit::None);
    }
    // quotient 1-skeleton: one edge per pair, oriented along its generator
    let mut graph: Vec<(usize, usize, usize)> = Vec::new();
    for e in 0..ne {
        let f = partner[e];
        if e < f {
            let pos = if poly.edges[e].3 > 0 { e } else { f };
            let (t, h) = poly.tail_head(pos);
            graph.push((uf.find(t), uf.find(h), poly.edges[e].2));
        }
    }
    let mut worst = PathFit::Injective;
    for k in 0..faces {
        let base = uf.find(poly.vertex(k, 0));
        let fit = path_fit(&graph, &poly.conj[k], base);
        worst = worst.min(fit);
        if worst == PathFit::None {
            break;
        }
    }
    Ok(worst)
}

/// Best path reading `word` that ends at `end`.
fn path_fit(graph: &[(usize, usize, usize)], word: &[(usize, i32)], end: usize) -> PathFit {
    fn go(
        graph: &[(usize, usize, usize)],
        word: &[(usize, i32)],
        pos: usize,
        at: usize,
        used: &mut Vec<bool>,
        visited: &mut Vec<usize>,
        best: &mut PathFit,
    ) {
        if pos == 0 {
            let injective = {
                let mut v = visited.clone();
                v.sort_unstable();
                v.windows(2).all(|w| w[0] != w[1])
            };
            let fit = if injective { PathFit::Injective } else { PathFit::EdgeInjective };
            *best = (*best).max(fit);
            return;
        }
        let (g, s) = word[pos - 1];
        for (idx, &(t, h, lab)) in graph.iter().enumerate() {
            if lab != g || used[idx] {
                continue;
            }
            let prev = if s > 0 && h == at {
                t
            } else if s < 0 && t == at {
                h
            } else {
                continue;
            };
            used[idx] = true;
            visited.push(prev);
            go(graph, word, pos - 1, prev, used, visited, best);
            visited.pop();
            used[idx] = false;
            if *best == PathFit::Injective {
                return;
            }
        }
    }
    let mut best = PathFit::None;
    let mut used = vec![false; graph.len()];
    let mut visited = vec![end];
    go(graph, word, word.len(), end, &mut used, &mut visited, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verified(ps: &(Presentation, Identity)) -> bool {
        verify_identity(&ps.0, &ps.1).unwrap()
    }

    #[test]
    fn torus_and_lens_identities() {
        assert!(verified(&torus3()));
        assert!(verified(&lens(5, 1).unwrap()));
        assert!(verified(&lens(7, 3).unwrap()));
        assert!(lens(4, 2).is_err());
        let (p, mut s) = torus3();
        s.factors[1].sign = 1;
        assert!(!verify_identity(&p, &s).unwrap());
        // the word r(y⁻¹u⁻¹y)s(z⁻¹rz)u(x⁻¹s⁻¹x) does not close up
        let ab = p.pf_alphabet();
        let w = ab.parse_word("r*y^-1*u^-1*y*s*z^-1*r*z*u*x^-1*s^-1*x").unwrap();
        let s = Identity::from_pf_word(&p, &w).unwrap();
        assert!(!verify_identity(&p, &s).unwrap());
    }

    #[test]
    fn pf_word_roundtrip() {
        let (p, s) = torus3();
        let w = s.to_pf_word(&p);
        assert_eq!(Identity::from_pf_word(&p, &w).unwrap().psi_image(&p).unwrap(), Word::one());
        let ab = p.pf_alphabet();
        let text = "r*y*u^-1*y^-1*s*z*r^-1*z^-1*u*x*s^-1*x^-1";
        let parsed = Identity::from_pf_word(&p, &ab.parse_word(text).unwrap()).unwrap();
        assert_eq!(parsed, s);
        let bad = ab.parse_word("r*x").unwrap();
        assert!(Identity::from_pf_word(&p, &bad).is_err());
        let dangling = Identity::new(vec![Factor::new(Word::one(), 9, 1)]);
        assert_eq!(verify_identity(&p, &dangling), Err(Error::DanglingRelator(9)));
    }

    #[test]
    fn qf_examples() {
        assert_eq!(compute_qf(1, &[Word::gen(0), Word::gen(1)]).unwrap(), Word::one());
        assert!(compute_qf(1, &[Word::gen(1), Word::gen(0)]).is_err());
        let images = [Word::gen(0), Word::gen(0).mul(&Word::gen(1))];
        let q = compute_qf(1, &images).unwrap();
        // brute force over all words of length ≤ 4
        let r = Word::commutator(&Word::gen(0), &Word::gen(1));
        let fr = r.substitute(|i| images[i].clone());
        let mut words = vec![Word::one()];
        let mut frontier = vec![Word::one()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &frontier {
                for (g, e) in [(0, 1), (0, -1), (1, 1), (1, -1)] {
                    let v = w.mul(&Word::power(g, e));
                    if v.length() == w.length() + 1 {
                        next.push(v);
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let shortest = words.iter().filter(|c| r.conj(c) == fr).min_by_key(|c| c.length()).unwrap();
        assert_eq!(q.length(), shortest.length());
        assert_eq!(r.conj(&q), fr);
    }

    #[test]
    fn elementary_classes_preserve_boundary() {
        for g in 1..=3 {
            for h in 0..g {
                for kind in 0..4 {
                    assert!(elementary_mapping_class(g, kind, h).is_ok());
                }
                if h + 1 < g {
                    assert!(elementary_mapping_class(g, 4, h).is_ok());
                }
            }
        }
    }

    #[test]
    fn mapping_tori() {
        let id = MappingClassData::identity(1);
        let (p, s) = mapping_torus(&id).unwrap();
        assert_eq!(p.num_generators(), 3);
        assert_eq!(p.num_relators(), 3);
        assert!(verify_identity(&p, &s).unwrap());
        let f = MappingClassData::new(1, vec![Word::gen(0).mul(&Word::gen(1)), Word::gen(1)]).unwrap();
        assert!(verified(&mapping_torus(&f).unwrap()));
        assert!(verified(&mapping_torus(&MappingClassData::identity(2)).unwrap()));
        let swap = elementary_mapping_class(2, 4, 0).unwrap();
        let tw = elementary_mapping_class(2, 0, 1).unwrap();
        assert!(verified(&mapping_torus(&swap.compose(&tw).unwrap()).unwrap()));
    }

    #[test]
    fn knot_library_is_boundary_compatible() {
        for k in [
            KnotData::trefoil(),
            KnotData::trefoil_normalized(),
            KnotData::figure_eight(),
            KnotData::figure_eight_normalized(),
        ] {
            assert!(k.validate().is_ok());
            assert_eq!(KnotData::from_json(&k.to_json()).unwrap(), k);
        }
        let (us, uf) = KnotData::figure_eight_normalized().abelianized();
        assert_eq!(uf, us.transpose());
        let (us, uf) = KnotData::trefoil_normalized().abelianized();
        assert_eq!(uf, us.transpose());
        let bad = KnotData { genus: 1, u_sharp: vec![Word::gen(0), Word::gen(1)], u_flat: vec![Word::gen(1), Word::gen(0)] };
        assert!(matches!(bad.validate(), Err(Error::BoundaryCompatibility(_))));
    }

    #[test]
    fn surgeries() {
        let t = KnotData::trefoil();
        let f8 = KnotData::figure_eight();
        for p in [-3, 0, 1, 5] {
            assert!(verified(&surgery(&t, SurgeryVariant::P(p), &Partner::Unknot).unwrap()));
            assert!(verified(&surgery(&f8, SurgeryVariant::P(p), &Partner::Knot(t.clone())).unwrap()));
        }
        for q in [-2, 1, 2, 3] {
            assert!(verified(&surgery(&t, SurgeryVariant::Q(q), &Partner::Unknot).unwrap()));
            assert!(verified(&surgery(&f8, SurgeryVariant::Q(q), &Partner::Knot(f8.clone())).unwrap()));
        }
    }

    #[test]
    fn bare_meridian_splice_relator_does_not_close_up() {
        // with r = m^p l'⁻¹ the same word fails to be an identity
        let t = KnotData::trefoil();
        let (mut p, s) = surgery(&t, SurgeryVariant::P(1), &Partner::Unknot).unwrap();
        let last = p.num_relators() - 1;
        p.relators[last] = Word::gen(2);
        assert!(!verify_identity(&p, &s).unwrap());
    }

    #[test]
    fn covers() {
        for k in [KnotData::trefoil(), KnotData::figure_eight()] {
            for d in 2..=4 {
                let (p, s) = branched_cover(&k, d).unwrap();
                assert_eq!(p.num_generators(), 2 * d);
                assert_eq!(p.num_relators(), 2 * d);
                assert!(verify_identity(&p, &s).unwrap());
            }
            for d in 1..=3 {
                assert!(verified(&zero_surgery_cover(&k, d).unwrap()));
            }
        }
        assert!(branched_cover(&KnotData::trefoil(), 1).is_err());
    }

    #[test]
    fn seifert_family() {
        assert!(verified(&seifert(&[3, 3, 3], &[1, 1]).unwrap()));
        assert!(verified(&seifert(&[2, 3, 5, 4], &[1, -1, 1]).unwrap()));
        assert!(verified(&seifert(&[3, 5], &[1]).unwrap()));
        assert!(seifert(&[1, 3, 3], &[1, 1]).is_err());
        assert!(verified(&seifert_mn(5, 1).unwrap()));
        assert!(verified(&seifert_mn(7, 2).unwrap()));
    }

    #[test]
    fn naive_mmn_identity_fails() {
        // r2 x2 r2⁻¹ x2⁻¹ r1 x1 r1⁻¹ x1⁻¹ read as a word in P ∗ F
        let (p, _) = seifert_mn(5, 1).unwrap();
        let ab = p.pf_alphabet();
        let w = ab.parse_word("r2*x2*r2^-1*x2^-1*r1*x1*r1^-1*x1^-1").unwrap();
        let s = Identity::from_pf_word(&p, &w).unwrap();
        assert!(!verify_identity(&p, &s).unwrap());
    }

    #[test]
    fn brieskorn_family() {
        assert!(verified(&brieskorn(2, 3, 1, 1).unwrap()));
        assert!(verified(&brieskorn(3, 5, 1, -1).unwrap()));
        assert!(verified(&brieskorn(2, 5, 2, 1).unwrap()));
        assert!(brieskorn(2, 3, 0, 1).is_err());
        assert!(matches!(brieskorn(2, 3, 1, -1), Err(Error::NotAspherical(_))));
    }

    #[test]
    fn tautness_examples() {
        let opts = TautnessOptions::default();
        let (p, s) = torus3();
        assert!(matches!(check_tautness(&p, &s, None, opts).unwrap(), Tautness::Taut(_)));
        for (a, b) in [(3, 1), (5, 2), (7, 3)] {
            let (p, s) = lens(a, b).unwrap();
            assert!(matches!(check_tautness(&p, &s, None, opts).unwrap(), Tautness::Taut(_)));
        }
    }

    #[test]
    fn tautness_of_trivial_sphere_pair() {
        // ρρ⁻¹ on ⟨x | x⟩: two monogons glue to a sphere, conjugators empty
        let p = Presentation::new(Alphabet::indexed("x", 1), vec![Word::gen(0)]).unwrap();
        let s = Identity::new(vec![Factor::new(Word::one(), 0, 1), Factor::new(Word::one(), 0, -1)]);
        assert!(matches!(check_tautness(&p, &s, None, TautnessOptions::default()).unwrap(), Tautness::Taut(_)));
    }

    #[test]
    fn tautness_rejects_non_sphere() {
        // a single commutator square glued to itself is a torus
        let (x, y) = (Word::gen(0), Word::gen(1));
        let p = Presentation::new(Alphabet::indexed("x", 2), vec![Word::commutator(&x, &y)]).unwrap();
        let s = Identity::new(vec![Factor::new(Word::one(), 0, 1), Factor::new(Word::one(), 0, -1)]);
        // two squares with opposite labels glue to a sphere only in the mirrored way
        let r = check_tautness(&p, &s, None, TautnessOptions::default()).unwrap();
        assert!(matches!(r, Tautness::Taut(_)));
        let s1 = Identity::new(vec![Factor::new(Word::one(), 0, 1), Factor::new(y.clone(), 0, -1)]);
        assert!(!verify_identity(&p, &s1).unwrap());
        let tiny = check_tautness(&p, &s, None, TautnessOptions { budget: 1 }).unwrap();
        assert!(matches!(tiny, Tautness::Unknown(_)));
    }
}
