use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use super::algebra::{FreeLieAlgebra, Generator};
use super::derivation::{extend_derivation, Derivation};
use super::element::LieElement;
use crate::error::{Error, Result};
use crate::par;
use crate::qlinalg::{ChainComplex, ChainMap, GradedLinearMap, GradedVectorSpace, Homology, Matrix};

/// Free dgl `(𝕃_V, d)` truncated at the algebra's truncation degree.
///
/// Construction checks `d² = 0` on generators (which forces it everywhere)
/// and again on the full differential matrices.
#[derive(Clone, Debug)]
pub struct FreeDgl {
    alg: Arc<FreeLieAlgebra>,
    values: Arc<Vec<LieElement>>,
    d: Arc<Derivation>,
    complex: Arc<OnceLock<ChainComplex>>,
    homology_cache: Arc<Mutex<BTreeMap<i32, Arc<Homology>>>>,
}

impl FreeDgl {
    pub fn new(alg: impl Into<Arc<FreeLieAlgebra>>, values: Vec<LieElement>) -> Result<Self> {
        let alg = alg.into();
        let d = extend_derivation(&alg, -1, &values)?;
        for (i, g) in alg.generators().iter().enumerate() {
            let dd = d.apply(&values[i]);
            if !dd.is_zero() {
                return Err(Error::invariant(
                    "d² = 0",
                    format!("d²({}) = {}", g.name, alg.format(&dd)),
                ));
            }
        }
        let dgl = FreeDgl {
            alg,
            values: Arc::new(values),
            d: Arc::new(d),
            complex: Arc::new(OnceLock::new()),
            homology_cache: Arc::default(),
        };
        dgl.build_complex()?;
        Ok(dgl)
    }

    /// Zero differential.
    pub fn with_zero_differential(alg: impl Into<Arc<FreeLieAlgebra>>) -> Result<Self> {
        let alg = alg.into();
        let values = vec![LieElement::zero(); alg.generators().len()];
        Self::new(alg, values)
    }

    /// Builds a dgl from generator `(name, degree)` pairs and differential
    /// texts keyed by generator name; unnamed generators are cycles.
    pub fn from_text(generators: &[(&str, i32)], differential: &[(&str, &str)], truncation: i32) -> Result<Self> {
        let gens = generators.iter().map(|(n, d)| Generator::new(*n, *d)).collect();
        let alg = Arc::new(FreeLieAlgebra::new(gens, truncation)?);
        let mut values = vec![LieElement::zero(); alg.generators().len()];
        for (name, text) in differential {
            let i = alg
                .generator_index(name)
                .ok_or_else(|| Error::parse(*name, "differential given for unknown generator"))?;
            values[i] = alg.parse(text)?;
        }
        Self::new(alg, values)
    }

    fn build_complex(&self) -> Result<&ChainComplex> {
        if let Some(c) = self.complex.get() {
            return Ok(c);
        }
        let space = self.basis_space();
        let degrees: Vec<i32> = self.alg.degrees().collect();
        let mats = par::map(&degrees, |&n| (n, self.d.matrix(&self.alg, n)));
        let map = GradedLinearMap::new(space.clone(), space, -1, mats.into_iter().collect())?;
        let c = ChainComplex::new(map)?;
        Ok(self.complex.get_or_init(|| c))
    }

    pub fn algebra(&self) -> &Arc<FreeLieAlgebra> {
        &self.alg
    }

    pub fn generators(&self) -> &[Generator] {
        self.alg.generators()
    }

    pub fn truncation(&self) -> i32 {
        self.alg.truncation()
    }

    /// `d` on generator `i`.
    pub fn differential_of(&self, i: usize) -> &LieElement {
        &self.values[i]
    }

    pub fn differential_values(&self) -> &[LieElement] {
        &self.values
    }

    pub fn derivation(&self) -> &Derivation {
        &self.d
    }

    pub fn d(&self, x: &LieElement) -> LieElement {
        self.d.apply(x)
    }

    /// Hall basis as a graded space (names are bracket words).
    pub fn basis_space(&self) -> GradedVectorSpace {
        let mut s = GradedVectorSpace::new();
        for n in self.alg.degrees() {
            let names = (0..self.alg.dim(n))
                .map(|p| self.alg.basis_name(super::HallIndex { degree: n, pos: p as u32 }))
                .collect();
            s.set_component(n, names).expect("Hall names are unique");
        }
        s
    }

    pub fn chain_complex(&self) -> &ChainComplex {
        self.build_complex().expect("validated on construction")
    }

    /// Homology with representatives; exact in degrees `< truncation`.
    pub fn homology(&self, max_degree: i32) -> Homology {
        (*self.homology_shared(max_degree)).clone()
    }

    /// Cached [`FreeDgl::homology`]; clones of a dgl share the cache.
    pub fn homology_shared(&self, max_degree: i32) -> Arc<Homology> {
        let max_degree = max_degree.min(self.truncation() - 1);
        if let Some(h) = self.homology_cache.lock().expect("cache lock").get(&max_degree) {
            return h.clone();
        }
        let h = Arc::new(self.chain_complex().homology(max_degree));
        self.homology_cache.lock().expect("cache lock").entry(max_degree).or_insert(h).clone()
    }

    /// Same generators, truncation and differential.
    pub fn same_as(&self, other: &FreeDgl) -> bool {
        (Arc::ptr_eq(&self.alg, &other.alg) && Arc::ptr_eq(&self.values, &other.values))
            || (self.truncation() == other.truncation()
                && self.generators() == other.generators()
                && self.values == other.values)
    }

    pub fn homology_dims(&self, max_degree: i32) -> BTreeMap<i32, usize> {
        self.chain_complex().homology_dims(max_degree.min(self.truncation() - 1))
    }

    /// Generator space `V` as a graded space.
    pub fn generator_space(&self) -> GradedVectorSpace {
        GradedVectorSpace::from_basis(self.generators().iter().map(|g| (g.degree, g.name.clone())))
            .expect("generator names are unique")
    }

    /// `(V, d_V)` where `d_V` is the bracket-length-one part of `d`.
    pub fn linear_part(&self) -> ChainComplex {
        let space = self.generator_space();
        let gens = self.generators();
        let mut pos_in_degree = vec![0usize; gens.len()];
        let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            let c = counts.entry(g.degree).or_default();
            pos_in_degree[i] = *c;
            *c += 1;
        }
        let mut mats: BTreeMap<i32, Matrix> = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            let lin = self.values[i].length_part(&self.alg, 1);
            if lin.is_zero() {
                continue;
            }
            let m = mats
                .entry(g.degree)
                .or_insert_with(|| Matrix::zeros(space.dim(g.degree - 1), space.dim(g.degree)));
            for (j, h) in gens.iter().enumerate() {
                if h.degree == g.degree - 1 {
                    let c = lin.coefficient(self.alg.letter(j));
                    if !c.is_zero() {
                        m[(pos_in_degree[j], pos_in_degree[i])] = c;
                    }
                }
            }
        }
        let map = GradedLinearMap::new(space.clone(), space, -1, mats).expect("shapes built from the space");
        ChainComplex::new(map).expect("linear part of a differential squares to zero")
    }

    /// `d_0 = 0`.
    pub fn is_minimal(&self) -> bool {
        self.values.iter().all(|v| v.length_part(&self.alg, 1).is_zero())
    }

    /// Position of generator `i` inside its degree of `V`.
    pub fn generator_position(&self, i: usize) -> usize {
        let d = self.generators()[i].degree;
        self.generators()[..i].iter().filter(|g| g.degree == d).count()
    }

    /// Hall-basis dimensions per degree.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.alg.degrees().map(|n| (n, self.alg.dim(n))).collect()
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for (i, g) in self.generators().iter().enumerate() {
            parts.push(format!("d{} = {}", g.name, self.alg.format(&self.values[i])));
        }
        format!("{} with {}", self.alg, parts.join(", "))
    }
}

/// Morphism of free dgl's given by generator images.
#[derive(Clone, Debug)]
pub struct DglMorphism {
    source: FreeDgl,
    target: FreeDgl,
    images: Arc<Vec<LieElement>>,
    basis_images: Arc<BTreeMap<i32, Vec<LieElement>>>,
}

impl DglMorphism {
    /// Checks degrees and `φ∘d = d∘φ` on generators.
    pub fn new(source: FreeDgl, target: FreeDgl, images: Vec<LieElement>) -> Result<Self> {
        let gens = source.generators();
        if images.len() != gens.len() {
            return Err(Error::validation(format!("morphism needs {} images, got {}", gens.len(), images.len())));
        }
        for (g, img) in gens.iter().zip(&images) {
            if !img.is_zero() && img.degree() != Some(g.degree) {
                return Err(Error::validation(format!("image of `{}` must have degree {}", g.name, g.degree)));
            }
        }
        let talg = target.algebra().clone();
        let salg = source.algebra().clone();
        let mut basis_images: BTreeMap<i32, Vec<LieElement>> = BTreeMap::new();
        for n in salg.degrees() {
            let basis = salg.basis(n);
            let row = par::map_range(0..basis.len(), |p| match basis[p].factors {
                None => images[basis[p].word.leaves()[0] as usize].clone(),
                Some((a, b)) => talg.bracket_truncated(
                    &basis_images[&a.degree][a.pos as usize],
                    &basis_images[&b.degree][b.pos as usize],
                ),
            });
            basis_images.insert(n, row);
        }
        let m = DglMorphism { source, target, images: Arc::new(images), basis_images: Arc::new(basis_images) };
        for (i, g) in m.source.generators().iter().enumerate() {
            let lhs = m.apply(m.source.differential_of(i));
            let rhs = m.target.d(&m.images[i]);
            if lhs != rhs {
                return Err(Error::invariant(
                    "φ∘d = d∘φ",
                    format!("generator {}: {} vs {}", g.name, talg.format(&lhs), talg.format(&rhs)),
                ));
            }
        }
        Ok(m)
    }

    pub fn identity(dgl: &FreeDgl) -> Self {
        let images = (0..dgl.generators().len()).map(|i| dgl.algebra().gen(i)).collect();
        DglMorphism::new(dgl.clone(), dgl.clone(), images).expect("identity is a dgl map")
    }

    /// Sends every source generator to the target generator of the same name.
    pub fn inclusion(source: &FreeDgl, target: &FreeDgl) -> Result<Self> {
        let talg = target.algebra();
        let mut images = Vec::new();
        for g in source.generators() {
            let j = talg
                .generator_index(&g.name)
                .ok_or_else(|| Error::validation(format!("target has no generator `{}`", g.name)))?;
            if talg.generators()[j].degree != g.degree {
                return Err(Error::validation(format!("generator `{}` changes degree", g.name)));
            }
            images.push(talg.gen(j));
        }
        DglMorphism::new(source.clone(), target.clone(), images)
    }

    pub fn source(&self) -> &FreeDgl {
        &self.source
    }

    pub fn target(&self) -> &FreeDgl {
        &self.target
    }

    pub fn images(&self) -> &[LieElement] {
        &self.images
    }

    pub fn apply(&self, x: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (idx, c) in x.terms() {
            out.add_scaled(&self.basis_images[&idx.degree][idx.pos as usize], c);
        }
        out
    }

    /// Matrix in Hall coordinates at degree `n`.
    pub fn matrix(&self, n: i32) -> Matrix {
        let cols: Vec<_> = self
            .basis_images
            .get(&n)
            .map_or(Vec::new(), |imgs| imgs.iter().map(|e| e.dense(self.target.algebra(), n)).collect());
        Matrix::from_columns(self.target.algebra().dim(n), &cols)
    }

    /// The underlying chain map (all degrees of the source).
    pub fn chain_map(&self) -> Result<ChainMap> {
        let s = self.source.chain_complex().clone();
        let t = self.target.chain_complex().clone();
        let degrees: Vec<i32> = s.space().degrees().filter(|&n| t.space().dim(n) > 0).collect();
        let mats = degrees.iter().map(|&n| (n, self.matrix(n))).collect();
        let map = GradedLinearMap::new(s.space().clone(), t.space().clone(), 0, mats)?;
        ChainMap::new(s, t, map)
    }

    /// `other ∘ self`
    pub fn then(&self, other: &DglMorphism) -> Result<DglMorphism> {
        let images = self.images.iter().map(|x| other.apply(x)).collect();
        DglMorphism::new(self.source.clone(), other.target.clone(), images)
    }

    /// Same generator images (the maps are then equal).
    pub fn same_as(&self, other: &DglMorphism) -> bool {
        self.images == other.images
    }

    /// Linear part `Q(φ): V → W`.
    pub fn linear_part(&self) -> GradedLinearMap {
        let sv = self.source.generator_space();
        let tv = self.target.generator_space();
        let sg = self.source.generators();
        let tg = self.target.generators();
        let mut mats: BTreeMap<i32, Matrix> = BTreeMap::new();
        for (i, g) in sg.iter().enumerate() {
            let lin = self.images[i].length_part(self.target.algebra(), 1);
            let m = mats.entry(g.degree).or_insert_with(|| Matrix::zeros(tv.dim(g.degree), sv.dim(g.degree)));
            let col = self.source.generator_position(i);
            for (j, h) in tg.iter().enumerate() {
                if h.degree == g.degree {
                    let c = lin.coefficient(self.target.algebra().letter(j));
                    if !c.is_zero() {
                        m[(self.target.generator_position(j), col)] = c;
                    }
                }
            }
        }
        GradedLinearMap::new(sv, tv, 0, mats).expect("shapes built from the spaces")
    }
}
