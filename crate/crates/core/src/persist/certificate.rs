use std::collections::BTreeSet;

use super::category::Category;
use super::module::PersistenceModule;
use crate::error::{Error, Result};
use crate::qlinalg::rational::format_rational;
use crate::qlinalg::Rational;

/// A pair `f: X → Y(δ)`, `g: Y → X(δ)` sampled at finitely many points.
///
/// `f` at time `t` is the stored morphism at the largest stored point
/// `<= t` (zero below the first). Storing `f` at every point of
/// [`sample_points`]`(X, Y, δ)` therefore determines it everywhere.
#[derive(Clone, Debug)]
pub struct InterleavingCertificate<C: Category> {
    pub delta: Rational,
    pub f: Vec<(Rational, C::Morphism)>,
    pub g: Vec<(Rational, C::Morphism)>,
}

/// Outcome of [`verify_interleaving`]; structural mismatches are reported
/// as errors instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    /// First failing square when `holds` is false.
    pub witness: Option<String>,
}

/// Points where `X_t` or `Y_{t+δ}` changes, from the first point of `X`'s
/// support on: `grid(X) ∪ (grid(Y) − δ)`.
pub fn sample_points<C: Category>(x: &PersistenceModule<C>, y: &PersistenceModule<C>, delta: &Rational) -> Vec<Rational> {
    let start = x.grid().first();
    let set: BTreeSet<Rational> = x
        .grid()
        .values()
        .iter()
        .cloned()
        .chain(y.grid().values().iter().map(|v| v - delta))
        .filter(|t| t >= start)
        .collect();
    set.into_iter().collect()
}

impl<C: Category> InterleavingCertificate<C> {
    /// Samples `f` and `g` from closures given the time and the two objects.
    pub fn build(
        x: &PersistenceModule<C>,
        y: &PersistenceModule<C>,
        delta: Rational,
        mut f: impl FnMut(&Rational, &C::Object, &C::Object) -> Result<C::Morphism>,
        mut g: impl FnMut(&Rational, &C::Object, &C::Object) -> Result<C::Morphism>,
    ) -> Result<Self> {
        let fs = sample_points(x, y, &delta)
            .into_iter()
            .map(|t| {
                let m = f(&t, &x.at(&t), &y.at(&(&t + &delta)))?;
                Ok((t, m))
            })
            .collect::<Result<Vec<_>>>()?;
        let gs = sample_points(y, x, &delta)
            .into_iter()
            .map(|t| {
                let m = g(&t, &y.at(&t), &x.at(&(&t + &delta)))?;
                Ok((t, m))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InterleavingCertificate { delta, f: fs, g: gs })
    }

    /// Maps both families through `h`.
    pub fn map<D: Category>(&self, mut h: impl FnMut(&C::Morphism) -> Result<D::Morphism>) -> Result<InterleavingCertificate<D>> {
        Ok(InterleavingCertificate {
            delta: self.delta.clone(),
            f: self.f.iter().map(|(t, m)| Ok((t.clone(), h(m)?))).collect::<Result<_>>()?,
            g: self.g.iter().map(|(t, m)| Ok((t.clone(), h(m)?))).collect::<Result<_>>()?,
        })
    }
}

fn eval<C: Category>(
    family: &[(Rational, C::Morphism)],
    t: &Rational,
    src: &PersistenceModule<C>,
    tgt: &PersistenceModule<C>,
    delta: &Rational,
) -> Result<C::Morphism> {
    let i = family.partition_point(|(p, _)| p <= t);
    if i == 0 {
        return src.category.zero_morphism(&src.at(t), &tgt.at(&(t + delta)));
    }
    Ok(family[i - 1].1.clone())
}

/// Checks naturality of `f` and `g` and both compatibility conditions
/// `g(δ)∘f = φ^{X,2δ}`, `f(δ)∘g = φ^{Y,2δ}` exactly.
pub fn verify_interleaving<C: Category>(
    x: &PersistenceModule<C>,
    y: &PersistenceModule<C>,
    cert: &InterleavingCertificate<C>,
) -> Result<Verification> {
    let delta = &cert.delta;
    if delta < &Rational::from_integer(0.into()) {
        return Err(Error::validation("certificate needs δ >= 0"));
    }
    for family in [&cert.f, &cert.g] {
        if family.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Dimension("certificate sample points must increase strictly".into()));
        }
    }
    if let Some(w) = half(x, y, &cert.f, &cert.g, delta, "f")? {
        return Ok(Verification { holds: false, witness: Some(w) });
    }
    if let Some(w) = half(y, x, &cert.g, &cert.f, delta, "g")? {
        return Ok(Verification { holds: false, witness: Some(w) });
    }
    Ok(Verification { holds: true, witness: None })
}

/// Structure and naturality of `f: X → Y(δ)`, then `g(δ)∘f = φ^{X,2δ}`.
fn half<C: Category>(
    x: &PersistenceModule<C>,
    y: &PersistenceModule<C>,
    f: &[(Rational, C::Morphism)],
    g: &[(Rational, C::Morphism)],
    delta: &Rational,
    name: &str,
) -> Result<Option<String>> {
    let cat = &x.category;
    let mut points: BTreeSet<Rational> = sample_points(x, y, delta).into_iter().collect();
    points.extend(f.iter().map(|(t, _)| t.clone()));
    let points: Vec<Rational> = points.into_iter().collect();
    for t in &points {
        cat.check(&eval(f, t, x, y, delta)?, &x.at(t), &y.at(&(t + delta)))
            .map_err(|e| e.context(format!("{name} at {}", format_rational(t))))?;
    }
    for w in points.windows(2) {
        let (s, t) = (&w[0], &w[1]);
        let lhs = cat.compose(&eval(f, s, x, y, delta)?, &y.map(&(s + delta), &(t + delta))?)?;
        let rhs = cat.compose(&x.map(s, t)?, &eval(f, t, x, y, delta)?)?;
        if !cat.equal(&lhs, &rhs) {
            return Ok(Some(format!(
                "naturality of {name} fails on [{}, {}]",
                format_rational(s),
                format_rational(t)
            )));
        }
    }
    let two = delta + delta;
    let mut compat: BTreeSet<Rational> = points.iter().cloned().collect();
    compat.extend(x.grid().values().iter().map(|v| v - &two));
    compat.extend(g.iter().map(|(t, _)| t - delta));
    let start = x.grid().first();
    for t in compat.iter().filter(|t| *t >= start) {
        let fx = eval(f, t, x, y, delta)?;
        let gy = eval(g, &(t + delta), y, x, delta)?;
        let lhs = cat.compose(&fx, &gy)?;
        let rhs = x.phi(t, &two)?;
        if !cat.equal(&lhs, &rhs) {
            let other = if name == "f" { "g" } else { "f" };
            return Ok(Some(format!(
                "{other}(δ)∘{name} ≠ φ^{{2δ}} at t = {}",
                format_rational(t)
            )));
        }
    }
    Ok(None)
}
