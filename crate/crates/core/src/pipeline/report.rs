use std::collections::BTreeSet;

use num_traits::Signed;
use serde::Serialize;

use super::functors::{HomologyFunctor, LinearHomologyFunctor};
use super::model::{build_persistence_model, generator_barcode, h_barcode, linear_homology_barcode, pi_barcode};
use super::pairs::FiltrationPair;
use super::PersistenceQuillenModel;
use crate::error::Result;
use crate::freelie::DglMorphism;
use crate::io;
use crate::models::CellComplexDescription;
use crate::persist::{
    interleaving_distance, pushforward, pushforward_certificate, verify_interleaving, Barcode, Dgl, Distance, Functor,
    GrVec, InterleavingCertificate, PersistenceModule,
};
use crate::qlinalg::rational::format_rational;
use crate::qlinalg::Rational;

pub const NOT_COMPUTED: &str = "not computed";
pub const NOT_AVAILABLE: &str = "not available";

/// Barcodes of one filtration, with the cross-checks between the free and
/// the minimal model already applied.
#[derive(Clone, Debug, Serialize)]
pub struct ModelBarcodes {
    pub name: String,
    pub grid: Vec<String>,
    pub stages_minimal: Vec<bool>,
    /// `π_*` read off the free model.
    pub pi: Barcode,
    /// `π_*` read off the minimal model, `H_* ∘ M`.
    pub pi_minimal: Barcode,
    /// `sV ⊕ ℚ` of the minimal model.
    pub h: Barcode,
    /// `sH(V, d_V) ⊕ ℚ` of the free model.
    pub h_linear: Barcode,
    /// Generator module `𝕍` of the minimal model.
    pub generators: Barcode,
    #[serde(skip)]
    pub model: PersistenceQuillenModel,
}

impl ModelBarcodes {
    pub fn compute(desc: &CellComplexDescription, truncation: i32) -> Result<Self> {
        let model = build_persistence_model(desc, truncation, true)?;
        let cutoff = model.cutoff();
        let minimal = model.minimal_module()?;
        Ok(ModelBarcodes {
            name: model.name.clone(),
            grid: model.grid().values().iter().map(format_rational).collect(),
            stages_minimal: model.stages_minimal(),
            pi: pi_barcode(&model.free, cutoff)?,
            pi_minimal: pi_barcode(minimal, cutoff)?,
            h: h_barcode(minimal, cutoff)?,
            h_linear: linear_homology_barcode(&model.free, cutoff)?,
            generators: generator_barcode(minimal, cutoff)?,
            model,
        })
    }
}

/// One inequality or identity with both sides computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), holds, detail: detail.into() }
    }

    fn le(name: &str, lhs: &Distance, rhs: &Distance) -> Self {
        Check::new(name, lhs <= rhs, format!("{lhs} <= {rhs}"))
    }
}

/// Computed distances and bounds for a pair of filtrations.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub format_version: u32,
    pub truncation: i32,
    pub cutoff: i32,
    pub x: ModelBarcodes,
    pub y: ModelBarcodes,
    pub pi_distance: Distance,
    pub pi_minimal_distance: Distance,
    pub h_distance: Distance,
    pub generator_distance: Distance,
    /// The homotopy interleaving distance has no algorithm; only the bounds
    /// around it are reported.
    pub homotopy_interleaving_distance: String,
    /// Smallest `δ` among the candidates with a verified inclusion
    /// certificate between the free models, or [`NOT_AVAILABLE`].
    pub certificate_bound: String,
    /// Known bound on the distance of the filtered inputs, or [`NOT_AVAILABLE`].
    pub input_bound: String,
    pub checks: Vec<Check>,
    pub holds: bool,
}

impl StabilityReport {
    pub fn to_json(&self) -> Result<String> {
        io::to_json(self)
    }

    pub fn violations(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

/// Inclusion-by-name morphisms `X_t → Y_{t+δ}` and back, when they exist.
fn inclusion_certificate(
    x: &PersistenceModule<Dgl>,
    y: &PersistenceModule<Dgl>,
    delta: &Rational,
) -> Option<InterleavingCertificate<Dgl>> {
    InterleavingCertificate::build(
        x,
        y,
        delta.clone(),
        |_, s, t| DglMorphism::inclusion(s, t),
        |_, s, t| DglMorphism::inclusion(s, t),
    )
    .ok()
}

/// Candidates `0` and `|x_i − y_j|`, ascending; an inclusion certificate can
/// only change its verdict at these values.
fn candidate_deltas(x: &PersistenceModule<Dgl>, y: &PersistenceModule<Dgl>) -> Vec<Rational> {
    let mut set = BTreeSet::from([Rational::from_integer(0.into())]);
    for a in x.grid().values() {
        for b in y.grid().values() {
            set.insert((a - b).abs());
        }
    }
    set.into_iter().collect()
}

/// Smallest `δ` (among `candidates`, or the natural candidates when `None`)
/// at which the inclusion certificate verifies, with the certificate.
pub fn certificate_bound(
    x: &PersistenceModule<Dgl>,
    y: &PersistenceModule<Dgl>,
    candidates: Option<&[Rational]>,
) -> Result<Option<InterleavingCertificate<Dgl>>> {
    let list = match candidates {
        Some(c) => c.to_vec(),
        None => candidate_deltas(x, y),
    };
    for delta in list {
        let Some(cert) = inclusion_certificate(x, y, &delta) else { continue };
        if verify_interleaving(x, y, &cert)?.holds {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

fn verify_pushed<F: Functor<Dgl, GrVec>>(
    functor: &F,
    x: &PersistenceModule<Dgl>,
    y: &PersistenceModule<Dgl>,
    cert: &InterleavingCertificate<Dgl>,
) -> Result<bool> {
    let (fx, fy) = (pushforward(x, functor)?, pushforward(y, functor)?);
    let pushed = pushforward_certificate(cert, functor)?;
    Ok(verify_interleaving(&fx, &fy, &pushed)?.holds)
}

fn describe(d: &Option<Rational>) -> String {
    d.as_ref().map_or_else(|| NOT_AVAILABLE.to_string(), format_rational)
}

/// Barcodes, distances and every computable inequality between the π, H and
/// generator distances, the certificate bound and the input bound.
///
/// With `certificate_delta` only that `δ` is tried for the certificate;
/// otherwise the smallest verifying candidate is reported.
pub fn stability_report(
    pair: &FiltrationPair,
    truncation: i32,
    certificate_delta: Option<&Rational>,
) -> Result<StabilityReport> {
    let inputs = [&pair.x, &pair.y];
    let mut computed = crate::par::map(&inputs, |d| ModelBarcodes::compute(d, truncation)).into_iter();
    let x = computed.next().expect("two inputs").map_err(|e| e.context("first input"))?;
    let y = computed.next().expect("two inputs").map_err(|e| e.context("second input"))?;
    let cutoff = x.model.cutoff();

    let pi_distance = interleaving_distance(&x.pi, &y.pi);
    let pi_minimal_distance = interleaving_distance(&x.pi_minimal, &y.pi_minimal);
    let h_distance = interleaving_distance(&x.h, &y.h);
    let generator_distance = interleaving_distance(&x.generators, &y.generators);

    let mut checks = Vec::new();
    for m in [&x, &y] {
        checks.push(Check::new(
            format!("{}: pi of free model = H∘M", m.name),
            m.pi == m.pi_minimal,
            format!("{} vs {}", m.pi.to_compact_string(), m.pi_minimal.to_compact_string()),
        ));
        checks.push(Check::new(
            format!("{}: sV+Q of minimal model = sH(V,d_V)+Q of free model", m.name),
            m.h == m.h_linear,
            format!("{} vs {}", m.h.to_compact_string(), m.h_linear.to_compact_string()),
        ));
    }
    checks.push(Check::new(
        "d(pi) = d(H∘M)",
        pi_distance == pi_minimal_distance,
        format!("{pi_distance} vs {pi_minimal_distance}"),
    ));
    let first_gap = Distance::Finite((&x.model.grid().first().clone() - y.model.grid().first()).abs());
    let expected_h = generator_distance.clone().max(first_gap.clone());
    checks.push(Check::new(
        "d(H) = max(d(V), |x1 - y1|)",
        h_distance == expected_h,
        format!("{h_distance} vs max({generator_distance}, {first_gap})"),
    ));

    let (xm, ym) = (&x.model.free, &y.model.free);
    let candidates = certificate_delta.map(|d| vec![d.clone()]);
    let cert = certificate_bound(xm, ym, candidates.as_deref())?;
    let cert_delta = cert.as_ref().map(|c| c.delta.clone());
    if let Some(c) = &cert {
        let bound = Distance::Finite(c.delta.clone());
        checks.push(Check::le("d(pi) <= certificate bound", &pi_distance, &bound));
        checks.push(Check::le("d(H) <= certificate bound", &h_distance, &bound));
        checks.push(Check::le("d(V) <= certificate bound", &generator_distance, &bound));
        checks.push(Check::new(
            "certificate pushed to pi verifies",
            verify_pushed(&HomologyFunctor { cutoff }, xm, ym, c)?,
            format!("δ = {bound}"),
        ));
        checks.push(Check::new(
            "certificate pushed to sH(V,d_V)+Q verifies",
            verify_pushed(&LinearHomologyFunctor { cutoff }, xm, ym, c)?,
            format!("δ = {bound}"),
        ));
    }
    if let Some(input) = &pair.input_bound {
        let bound = Distance::Finite(input.clone());
        if let Some(c) = &cert_delta {
            checks.push(Check::le("certificate bound <= input bound", &Distance::Finite(c.clone()), &bound));
        }
        checks.push(Check::le("d(pi) <= input bound", &pi_distance, &bound));
        checks.push(Check::le("d(H) <= input bound", &h_distance, &bound));
        checks.push(Check::le("d(V) <= input bound", &generator_distance, &bound));
    }
    let holds = checks.iter().all(|c| c.holds);
    Ok(StabilityReport {
        format_version: io::FORMAT_VERSION,
        truncation,
        cutoff,
        x,
        y,
        pi_distance,
        pi_minimal_distance,
        h_distance,
        generator_distance,
        homotopy_interleaving_distance: NOT_COMPUTED.to_string(),
        certificate_bound: describe(&cert_delta),
        input_bound: describe(&pair.input_bound),
        checks,
        holds,
    })
}
