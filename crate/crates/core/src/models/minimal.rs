use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::freelie::{
    DglMorphism, FreeDgl, FreeLieAlgebra, Generator, HallIndex, LazyLieHom, Letter, LieElement,
};
use crate::qlinalg::{Matrix, Rational};

/// Minimal model of a free dgl with the two comparison maps.
///
/// `projection ∘ section = id`, and both are quasi-isomorphisms.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub minimal: FreeDgl,
    /// `ψ: (𝕃_V, d) → (𝕃_H, d_H)`
    pub projection: DglMorphism,
    /// `σ: (𝕃_H, d_H) → (𝕃_V, d)`
    pub section: DglMorphism,
}

enum Kind {
    /// Linear cycle complementing the linear boundaries; coordinates in `V_k`.
    Cycle(Vec<Rational>),
    /// `a' = d b` for the paired generator `b`.
    Boundary(usize),
    /// Original generator `b` with `d₀ b ≠ 0`.
    Paired(usize),
}

struct WGen {
    name: String,
    degree: i32,
    kind: Kind,
}

/// Contractible-pair elimination by ascending degree.
///
/// Writes `V = H ⊕ A ⊕ B` with `d₀: B ≅ A` and `H` complementing the linear
/// boundaries among linear cycles, then changes generators to
/// `W = H ⊕ {d b} ⊕ B`. In `𝕃_W` the ideal `I` generated by `{d b, b}` is
/// acyclic and `d`-stable, so `𝕃_W / I = (𝕃_H, d_H)` is minimal and the
/// quotient map is a quasi-isomorphism. The section corrects each `h` by an
/// element of `I` so that `d(h − c_h)` lies in the image of `𝕃_H`.
///
/// Generators of `H` keep the name of the generator at the free column of
/// their kernel vector, so minimal inputs come back unchanged.
pub fn minimalize(dgl: &FreeDgl) -> Result<MinimalModel> {
    if dgl.is_minimal() {
        let id = DglMorphism::identity(dgl);
        return Ok(MinimalModel { minimal: dgl.clone(), projection: id.clone(), section: id });
    }
    let valg = dgl.algebra();
    let vgens = valg.generators();
    let truncation = valg.truncation();
    let linear = dgl.linear_part();

    let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, g) in vgens.iter().enumerate() {
        by_degree.entry(g.degree).or_default().push(i);
    }
    let reductions: BTreeMap<i32, _> = by_degree.keys().map(|&k| (k, linear.d(k).reduce())).collect();

    // W generators, grouped by degree in the order H, d B, B.
    let mut used: HashSet<String> = vgens.iter().map(|g| g.name.clone()).collect();
    let mut wgens: Vec<WGen> = Vec::new();
    let mut block: BTreeMap<i32, (usize, usize, usize)> = BTreeMap::new(); // (start, |H|, |A|)
    for (&k, idx) in &by_degree {
        let red = &reductions[&k];
        let (a_vecs, a_pairs): (Vec<Vec<Rational>>, Vec<usize>) = match reductions.get(&(k + 1)) {
            Some(up) => {
                let upper = &by_degree[&(k + 1)];
                (up.image.clone(), up.pivot_cols.iter().map(|&c| upper[c]).collect())
            }
            None => (Vec::new(), Vec::new()),
        };
        let mut cols = a_vecs.clone();
        cols.extend(red.kernel.iter().cloned());
        let frame = Matrix::from_columns(idx.len(), &cols).reduce();
        let pivots: HashSet<usize> = red.pivot_cols.iter().copied().collect();
        let free_cols: Vec<usize> = (0..idx.len()).filter(|c| !pivots.contains(c)).collect();
        let start = wgens.len();
        for &c in frame.pivot_cols.iter().filter(|&&c| c >= a_vecs.len()) {
            let j = c - a_vecs.len();
            wgens.push(WGen {
                name: vgens[idx[free_cols[j]]].name.clone(),
                degree: k,
                kind: Kind::Cycle(red.kernel[j].clone()),
            });
        }
        let n_h = wgens.len() - start;
        for &b in &a_pairs {
            let mut name = format!("d_{}", vgens[b].name);
            while used.contains(&name) {
                name.push('_');
            }
            used.insert(name.clone());
            wgens.push(WGen { name, degree: k, kind: Kind::Boundary(b) });
        }
        for &c in &red.pivot_cols {
            wgens.push(WGen { name: vgens[idx[c]].name.clone(), degree: k, kind: Kind::Paired(idx[c]) });
        }
        if wgens.len() - start != idx.len() {
            return Err(Error::invariant("V = H ⊕ A ⊕ B", format!("degree {k}")));
        }
        block.insert(k, (start, n_h, a_pairs.len()));
    }

    let walg = FreeLieAlgebra::new(wgens.iter().map(|g| Generator::new(g.name.clone(), g.degree)).collect(), truncation)?;

    // φ: W → V on letters.
    let phi_letters: Vec<LieElement> = wgens
        .iter()
        .map(|g| match &g.kind {
            Kind::Cycle(v) => combination(valg, &by_degree[&g.degree], v),
            Kind::Boundary(b) => dgl.differential_of(*b).clone(),
            Kind::Paired(b) => valg.gen(*b),
        })
        .collect();

    // φ⁻¹: V → W, by ascending degree. With P = [H | A | B] in V_k,
    // v = Σ α_j P_j gives φ⁻¹(v) = Σ α_j w_j − Σ_{j ∈ A} α_j φ⁻¹((d b_j)_{≥2}).
    let mut phi_inv = LazyLieHom::new(valg, &walg);
    let mut phi_inv_letters: Vec<LieElement> = vec![LieElement::zero(); vgens.len()];
    for (&k, idx) in &by_degree {
        let (start, n_h, n_a) = block[&k];
        let dim = idx.len();
        let pos_in_deg: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(p, &g)| (g, p)).collect();
        let cols: Vec<Vec<Rational>> = wgens[start..start + dim]
            .iter()
            .map(|g| match &g.kind {
                Kind::Cycle(v) => v.clone(),
                Kind::Boundary(b) => linear_coords(&dgl.differential_of(*b).length_part(valg, 1), valg, idx),
                Kind::Paired(b) => unit(dim, pos_in_deg[b]),
            })
            .collect();
        let p_inv = Matrix::from_columns(dim, &cols)
            .inverse()
            .ok_or_else(|| Error::invariant("H ⊕ A ⊕ B spans V", format!("degree {k}")))?;
        let mut corrections = Vec::with_capacity(n_a);
        for g in &wgens[start + n_h..start + n_h + n_a] {
            let Kind::Boundary(b) = g.kind else { unreachable!("A block holds boundaries") };
            let dec = dgl.differential_of(b) - &dgl.differential_of(b).length_part(valg, 1);
            corrections.push(phi_inv.apply(&dec)?);
        }
        for (p, &v) in idx.iter().enumerate() {
            let mut img = LieElement::zero();
            for j in 0..dim {
                let a = &p_inv[(j, p)];
                if a.is_zero() {
                    continue;
                }
                img.add_scaled(&walg.gen(start + j), a);
                if j >= n_h && j < n_h + n_a {
                    img.add_scaled(&corrections[j - n_h], &-a.clone());
                }
            }
            phi_inv.set_letter(v, img.clone());
            phi_inv_letters[v] = img;
        }
    }

    // d_W = φ⁻¹ d φ; on the contractible letters it is b ↦ d b ↦ 0.
    let mut wvalues = Vec::with_capacity(wgens.len());
    for (i, g) in wgens.iter().enumerate() {
        wvalues.push(match &g.kind {
            Kind::Cycle(_) => phi_inv.apply(&dgl.d(&phi_letters[i]))?,
            Kind::Boundary(_) => LieElement::zero(),
            Kind::Paired(b) => {
                let (start, n_h, _) = block[&(g.degree - 1)];
                let Some(j) = wgens[start + n_h..].iter().position(|w| matches!(w.kind, Kind::Boundary(x) if x == *b)) else {
                    return Err(Error::invariant("paired generator has a boundary partner", g.name.clone()));
                };
                walg.gen(start + n_h + j)
            }
        });
    }
    let walg = std::sync::Arc::new(walg);
    let wdgl = FreeDgl::new(walg.clone(), wvalues)?;

    // Quotient by the ideal of contractible letters.
    let mut letter_map: Vec<Option<Letter>> = vec![None; wgens.len()];
    let mut hgens = Vec::new();
    let mut h_in_w = Vec::new();
    for (i, g) in wgens.iter().enumerate() {
        if matches!(g.kind, Kind::Cycle(_)) {
            letter_map[i] = Some(hgens.len() as Letter);
            hgens.push(Generator::new(g.name.clone(), g.degree));
            h_in_w.push(i);
        }
    }
    let halg = std::sync::Arc::new(FreeLieAlgebra::new(hgens, truncation)?);
    let hvalues = h_in_w
        .iter()
        .map(|&i| halg.transport(wdgl.differential_of(i), &walg, &letter_map))
        .collect::<Result<Vec<_>>>()?;
    let minimal = FreeDgl::new(halg.clone(), hvalues)?;

    let psi_images = phi_inv_letters
        .iter()
        .map(|x| halg.transport(x, &walg, &letter_map))
        .collect::<Result<Vec<_>>>()?;
    let projection = DglMorphism::new(dgl.clone(), minimal.clone(), psi_images)?;

    // σ_W(h) = h − c_h with c_h ∈ I and d c_h = d h − σ_W(d_H h).
    let mut sigma_w = LazyLieHom::new(&halg, &walg);
    let mut ideal_solvers: BTreeMap<i32, (Vec<HallIndex>, Matrix)> = BTreeMap::new();
    let mut sigma_w_letters = Vec::with_capacity(h_in_w.len());
    for (j, &i) in h_in_w.iter().enumerate() {
        let k = wgens[i].degree;
        let target = sigma_w.apply(minimal.differential_of(j))?;
        let defect = wdgl.differential_of(i) - &target;
        let mut img = walg.gen(i);
        if !defect.is_zero() {
            let (basis, m) = ideal_solvers.entry(k).or_insert_with(|| ideal_differential(&wdgl, &letter_map, k));
            let Some(c) = m.solve(&defect.dense(&walg, k - 1)) else {
                let witness = format!("{}: {}", wgens[i].name, walg.format(&defect));
                return Err(if k >= truncation {
                    Error::truncation(format!("cannot correct generator at truncation degree ({witness})"))
                } else {
                    Error::invariant("ideal of contractible letters is acyclic", witness)
                });
            };
            for (idx, coef) in basis.iter().zip(&c) {
                img.add_term(*idx, -coef.clone());
            }
        }
        sigma_w.set_letter(j, img.clone());
        sigma_w_letters.push(img);
    }
    let mut phi = LazyLieHom::new(&walg, valg);
    for (i, x) in phi_letters.into_iter().enumerate() {
        phi.set_letter(i, x);
    }
    let sigma_images = sigma_w_letters.iter().map(|x| phi.apply(x)).collect::<Result<Vec<_>>>()?;
    let section = DglMorphism::new(minimal.clone(), dgl.clone(), sigma_images)?;

    let round_trip = section.then(&projection)?;
    if !round_trip.same_as(&DglMorphism::identity(&minimal)) {
        let bad = round_trip
            .images()
            .iter()
            .enumerate()
            .find(|(j, x)| **x != halg.gen(*j))
            .map(|(j, x)| format!("{} ↦ {}", halg.generators()[j].name, halg.format(x)))
            .unwrap_or_default();
        return Err(Error::invariant("ψ∘σ = id", bad));
    }
    Ok(MinimalModel { minimal, projection, section })
}

/// Hall elements of degree `k` containing a contractible letter, and the
/// matrix of `d` on them into degree `k − 1`.
fn ideal_differential(wdgl: &FreeDgl, letter_map: &[Option<Letter>], k: i32) -> (Vec<HallIndex>, Matrix) {
    let walg = wdgl.algebra();
    let basis: Vec<HallIndex> = walg
        .basis(k)
        .iter()
        .enumerate()
        .filter(|(_, h)| h.lead.iter().any(|&l| letter_map[l as usize].is_none()))
        .map(|(p, _)| HallIndex { degree: k, pos: p as u32 })
        .collect();
    let cols: Vec<Vec<Rational>> =
        basis.iter().map(|&idx| wdgl.derivation().on_basis(idx).dense(walg, k - 1)).collect();
    (basis, Matrix::from_columns(walg.dim(k - 1), &cols))
}

fn combination(alg: &FreeLieAlgebra, idx: &[usize], coords: &[Rational]) -> LieElement {
    let mut out = LieElement::zero();
    for (&g, c) in idx.iter().zip(coords) {
        out.add_scaled(&alg.gen(g), c);
    }
    out
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = num_traits::One::one();
    v
}

/// Coordinates of a linear element along the generators `idx`.
fn linear_coords(x: &LieElement, alg: &FreeLieAlgebra, idx: &[usize]) -> Vec<Rational> {
    idx.iter().map(|&g| x.coefficient(alg.letter(g))).collect()
}
