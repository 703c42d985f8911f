use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::Zero;

use super::element::LieElement;
use crate::error::{Error, Result};
use crate::par;
use crate::qlinalg::rational::{int, sign_i, Rational};

pub type Letter = u16;
/// A word in the tensor algebra `TV`, as a sequence of generator indices.
pub type Word = Vec<Letter>;
/// Element of the tensor algebra with exact coefficients.
pub type Tensor = BTreeMap<Word, Rational>;

/// Basis element of `V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Generator { name: name.into(), degree }
    }
}

/// Binary bracket tree over generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LieWord {
    Letter(Letter),
    Bracket(Box<LieWord>, Box<LieWord>),
}

impl LieWord {
    pub fn bracket(a: LieWord, b: LieWord) -> Self {
        LieWord::Bracket(Box::new(a), Box::new(b))
    }

    /// Number of generator leaves.
    pub fn length(&self) -> usize {
        match self {
            LieWord::Letter(_) => 1,
            LieWord::Bracket(a, b) => a.length() + b.length(),
        }
    }

    pub fn leaves(&self) -> Word {
        match self {
            LieWord::Letter(l) => vec![*l],
            LieWord::Bracket(a, b) => {
                let mut w = a.leaves();
                w.extend(b.leaves());
                w
            }
        }
    }

    pub fn degree(&self, generators: &[Generator]) -> i32 {
        self.leaves().iter().map(|&l| generators[l as usize].degree).sum()
    }

    pub fn display<'a>(&'a self, generators: &'a [Generator]) -> impl fmt::Display + 'a {
        DisplayWord { word: self, generators }
    }
}

struct DisplayWord<'a> {
    word: &'a LieWord,
    generators: &'a [Generator],
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.word {
            LieWord::Letter(l) => write!(f, "{}", self.generators[*l as usize].name),
            LieWord::Bracket(a, b) => write!(
                f,
                "[{},{}]",
                a.display(self.generators),
                b.display(self.generators)
            ),
        }
    }
}

/// Position of a Hall basis element: total degree and index inside it.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HallIndex {
    pub degree: i32,
    pub pos: u32,
}

/// One element of the Hall basis together with its tensor expansion.
#[derive(Clone, Debug)]
pub struct HallElement {
    pub word: LieWord,
    pub degree: i32,
    pub length: usize,
    /// Lexicographically smallest word of the expansion.
    pub lead: Word,
    pub lead_coef: i64,
    /// Expansion in `TV`, sorted by word.
    pub expansion: Vec<(Word, i64)>,
    /// Hall indices of the two factors, `None` for generators.
    pub factors: Option<(HallIndex, HallIndex)>,
}

/// Free graded Lie algebra `𝕃_V` truncated at total degree `N`.
///
/// The basis is the graded Lyndon basis: standard bracketings of Lyndon
/// words, plus the squares `[P_w, P_w]` of odd-degree Lyndon words. Letters
/// are ordered by generator index. Each standard bracketing expands in `TV`
/// with leading word `w` and coefficient 1, each square with leading word
/// `ww` and coefficient 2; this triangularity drives [`FreeLieAlgebra::decompose`].
#[derive(Clone, Debug)]
pub struct FreeLieAlgebra {
    generators: Vec<Generator>,
    truncation: i32,
    basis: BTreeMap<i32, Vec<HallElement>>,
    by_lead: HashMap<Word, HallIndex>,
    letters: Vec<HallIndex>,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Candidate {
    word: LieWord,
    lead: Word,
    lead_coef: i64,
    factors: Option<(Word, Word)>,
    expansion: Vec<(Word, i64)>,
}

impl FreeLieAlgebra {
    pub fn new(generators: Vec<Generator>, truncation: i32) -> Result<Self> {
        if truncation < 1 {
            return Err(Error::validation(format!("truncation must be >= 1, got {truncation}")));
        }
        if generators.len() > Letter::MAX as usize {
            return Err(Error::validation("too many generators"));
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if g.degree < 1 {
                return Err(Error::validation(format!("generator `{}` has degree {} < 1", g.name, g.degree)));
            }
            if g.degree > truncation {
                return Err(Error::truncation(format!(
                    "generator `{}` of degree {} exceeds truncation {truncation}",
                    g.name, g.degree
                )));
            }
            if !valid_identifier(&g.name) {
                return Err(Error::validation(format!("invalid generator name `{}`", g.name)));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::validation(format!("duplicate generator `{}`", g.name)));
            }
        }

        let letter_deg: Vec<i32> = generators.iter().map(|g| g.degree).collect();
        // Lyndon words per degree with their standard factorization (u, v).
        let mut lyndon: BTreeMap<i32, Vec<(Word, Option<(Word, Word)>)>> = BTreeMap::new();
        let mut expansions: HashMap<Word, Vec<(Word, i64)>> = HashMap::new();
        let mut basis: BTreeMap<i32, Vec<HallElement>> = BTreeMap::new();
        let mut by_lead: HashMap<Word, HallIndex> = HashMap::new();
        let mut lead_tree: HashMap<Word, LieWord> = HashMap::new();

        for n in 1..=truncation {
            let mut words: Vec<(Word, Option<(Word, Word)>)> = generators
                .iter()
                .enumerate()
                .filter(|(_, g)| g.degree == n)
                .map(|(i, _)| (vec![i as Letter], None))
                .collect();
            for a in 1..n {
                let (Some(us), Some(vs)) = (lyndon.get(&a), lyndon.get(&(n - a))) else { continue };
                for (u, uf) in us {
                    for (v, _) in vs {
                        if u >= v {
                            continue;
                        }
                        let standard = match uf {
                            None => true,
                            Some((_, u2)) => u2 >= v,
                        };
                        if standard {
                            let mut w = u.clone();
                            w.extend_from_slice(v);
                            words.push((w, Some((u.clone(), v.clone()))));
                        }
                    }
                }
            }
            // squares of odd Lyndon words of degree n / 2
            let mut squares: Vec<Word> = Vec::new();
            if n % 2 == 0 && (n / 2) % 2 == 1 {
                if let Some(ws) = lyndon.get(&(n / 2)) {
                    squares.extend(ws.iter().map(|(w, _)| w.clone()));
                }
            }

            let mut candidates: Vec<(LieWord, Word, i64, Option<(Word, Word)>)> = Vec::new();
            for (w, f) in &words {
                let tree = match f {
                    None => LieWord::Letter(w[0]),
                    Some((u, v)) => LieWord::bracket(lead_tree[u].clone(), lead_tree[v].clone()),
                };
                candidates.push((tree, w.clone(), 1, f.clone()));
            }
            for w in &squares {
                let mut ww = w.clone();
                ww.extend_from_slice(w);
                let t = lead_tree[w].clone();
                candidates.push((LieWord::bracket(t.clone(), t), ww, 2, Some((w.clone(), w.clone()))));
            }
            let built: Vec<Candidate> = par::map(&candidates, |(tree, lead, coef, f)| {
                let expansion = match f {
                    None => vec![(lead.clone(), 1)],
                    Some((u, v)) => commutator_i64(&expansions[u], &expansions[v], &letter_deg),
                };
                debug_assert_eq!(expansion.first().map(|(w, c)| (w.clone(), *c)), Some((lead.clone(), *coef)));
                Candidate { word: tree.clone(), lead: lead.clone(), lead_coef: *coef, factors: f.clone(), expansion }
            });
            let mut built = built;
            built.sort_by(|a, b| a.word.length().cmp(&b.word.length()).then_with(|| a.lead.cmp(&b.lead)));
            let mut elems = Vec::with_capacity(built.len());
            for (pos, c) in built.into_iter().enumerate() {
                let idx = HallIndex { degree: n, pos: pos as u32 };
                by_lead.insert(c.lead.clone(), idx);
                lead_tree.insert(c.lead.clone(), c.word.clone());
                expansions.insert(c.lead.clone(), c.expansion.clone());
                elems.push(c);
            }
            for (w, f) in words {
                lyndon.entry(n).or_default().push((w, f));
            }
            let elems: Vec<HallElement> = elems
                .into_iter()
                .map(|c| HallElement {
                    length: c.word.length(),
                    degree: n,
                    factors: c.factors.map(|(u, v)| (by_lead[&u], by_lead[&v])),
                    word: c.word,
                    lead: c.lead,
                    lead_coef: c.lead_coef,
                    expansion: c.expansion,
                })
                .collect();
            if !elems.is_empty() {
                basis.insert(n, elems);
            }
        }
        let letters = (0..generators.len()).map(|i| by_lead[&vec![i as Letter]]).collect();
        Ok(FreeLieAlgebra { generators, truncation, basis, by_lead, letters })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn truncation(&self) -> i32 {
        self.truncation
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.basis.get(&degree).map_or(0, Vec::len)
    }

    pub fn basis(&self, degree: i32) -> &[HallElement] {
        self.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn element(&self, idx: HallIndex) -> &HallElement {
        &self.basis[&idx.degree][idx.pos as usize]
    }

    /// Degrees with a nonzero basis, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.basis.keys().copied()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Hall index of generator `i`.
    pub fn letter(&self, i: usize) -> HallIndex {
        self.letters[i]
    }

    /// The generator `i` as an element.
    pub fn gen(&self, i: usize) -> LieElement {
        LieElement::basis(self.letters[i])
    }

    pub fn gen_by_name(&self, name: &str) -> Option<LieElement> {
        self.generator_index(name).map(|i| self.gen(i))
    }

    pub fn word_degree(&self, w: &[Letter]) -> i32 {
        w.iter().map(|&l| self.generators[l as usize].degree).sum()
    }

    /// Image of an element in the tensor algebra.
    pub fn expand(&self, x: &LieElement) -> Tensor {
        let mut t = Tensor::new();
        for (idx, c) in x.terms() {
            for (w, e) in &self.element(*idx).expansion {
                add_to(&mut t, w, &(c * int(*e)));
            }
        }
        t
    }

    /// Rewrites a tensor in the Hall basis.
    ///
    /// Fails with an invariant error if the tensor is not a Lie element and
    /// with a truncation error if it has components above the truncation.
    pub fn decompose(&self, tensor: &Tensor) -> Result<LieElement> {
        let mut t = tensor.clone();
        t.retain(|_, c| !c.is_zero());
        let mut out = LieElement::zero();
        while let Some((w, c)) = t.first_key_value() {
            let deg = self.word_degree(w);
            if deg > self.truncation {
                return Err(Error::truncation(format!("degree {deg} exceeds truncation {}", self.truncation)));
            }
            let Some(&idx) = self.by_lead.get(w) else {
                return Err(Error::invariant("tensor lies in the free Lie algebra", self.format_word(w)));
            };
            let h = self.element(idx);
            let coef = c / int(h.lead_coef);
            for (word, e) in &h.expansion {
                add_to(&mut t, word, &-(&coef * int(*e)));
            }
            out.add_term(idx, coef);
        }
        Ok(out)
    }

    /// Graded bracket; fails if a nonzero part exceeds the truncation.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement> {
        self.bracket_impl(x, y, false)
    }

    /// Graded bracket in the quotient by degrees above the truncation.
    pub fn bracket_truncated(&self, x: &LieElement, y: &LieElement) -> LieElement {
        self.bracket_impl(x, y, true).expect("truncated bracket cannot overflow")
    }

    fn bracket_impl(&self, x: &LieElement, y: &LieElement, drop_high: bool) -> Result<LieElement> {
        let mut total = Tensor::new();
        for (dx, xc) in x.components() {
            for (dy, yc) in y.components() {
                if dx + dy > self.truncation {
                    if drop_high {
                        continue;
                    }
                    let t = commutator(&self.expand(&xc), &self.expand(&yc), dx * dy);
                    if t.is_empty() {
                        continue;
                    }
                    return Err(Error::truncation(format!(
                        "bracket lands in degree {} above truncation {}",
                        dx + dy,
                        self.truncation
                    )));
                }
                for (w, c) in commutator(&self.expand(&xc), &self.expand(&yc), dx * dy) {
                    add_to(&mut total, &w, &c);
                }
            }
        }
        self.decompose(&total)
    }

    /// Moves `x` from `from` into `self` along a letter map; words through an
    /// unmapped letter are dropped, as are words above the truncation.
    pub fn transport(&self, x: &LieElement, from: &FreeLieAlgebra, letter_map: &[Option<Letter>]) -> Result<LieElement> {
        let mut t = Tensor::new();
        'words: for (w, c) in from.expand(x) {
            let mut mapped = Vec::with_capacity(w.len());
            for l in &w {
                match letter_map[*l as usize] {
                    Some(m) => mapped.push(m),
                    None => continue 'words,
                }
            }
            if self.word_degree(&mapped) <= self.truncation {
                add_to(&mut t, &mapped, &c);
            }
        }
        self.decompose(&t)
    }

    /// Bracket of two basis elements.
    pub fn bracket_basis(&self, a: HallIndex, b: HallIndex) -> Result<LieElement> {
        self.bracket(&LieElement::basis(a), &LieElement::basis(b))
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.generators[l as usize].name.as_str()).collect::<Vec<_>>().join("·")
    }

    /// Text of a basis element, e.g. `[v,[v,w]]`.
    pub fn basis_name(&self, idx: HallIndex) -> String {
        self.element(idx).word.display(&self.generators).to_string()
    }
}

pub(crate) fn add_to(t: &mut Tensor, w: &[Letter], c: &Rational) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(w) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                t.remove(w);
            }
        }
        None => {
            t.insert(w.to_vec(), c.clone());
        }
    }
}

/// `xy − (−1)^{parity} yx` for tensors.
pub(crate) fn commutator(x: &Tensor, y: &Tensor, parity: i32) -> Tensor {
    let s = int(sign_i(parity as i64));
    let mut out = Tensor::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let c = ca * cb;
            let mut ab = a.clone();
            ab.extend_from_slice(b);
            add_to(&mut out, &ab, &c);
            let mut ba = b.clone();
            ba.extend_from_slice(a);
            add_to(&mut out, &ba, &-(&s * &c));
        }
    }
    out
}

fn commutator_i64(x: &[(Word, i64)], y: &[(Word, i64)], letter_deg: &[i32]) -> Vec<(Word, i64)> {
    let deg = |w: &Word| -> i64 { w.iter().map(|&l| letter_deg[l as usize] as i64).sum() };
    let (dx, dy) = (deg(&x[0].0), deg(&y[0].0));
    let s = sign_i(dx * dy);
    let mut acc: BTreeMap<Word, i64> = BTreeMap::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let c = ca.checked_mul(*cb).expect("expansion coefficient overflow");
            let mut ab = a.clone();
            ab.extend_from_slice(b);
            *acc.entry(ab).or_insert(0) += c;
            let mut ba = b.clone();
            ba.extend_from_slice(a);
            *acc.entry(ba).or_insert(0) -= s * c;
        }
    }
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Hall basis words per degree, ordered by bracket length then leading word.
pub fn hall_basis(generators: Vec<Generator>, max_degree: i32) -> Result<BTreeMap<i32, Vec<LieWord>>> {
    let alg = FreeLieAlgebra::new(generators, max_degree)?;
    Ok(alg.basis.iter().map(|(d, b)| (*d, b.iter().map(|h| h.word.clone()).collect())).collect())
}

impl fmt::Display for FreeLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| format!("{}:{}", g.name, g.degree)).collect();
        write!(f, "L({}) up to degree {}", gens.join(", "), self.truncation)
    }
}
