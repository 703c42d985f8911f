use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::freelie::{DglMorphism, FreeDgl};
use crate::qlinalg::rational::{frac, int};
use crate::qlinalg::{GradedLinearMap, GradedVectorSpace, Matrix, Rational};

fn r(n: i64) -> Rational {
    int(n)
}

fn grid(v: &[i64]) -> Grid {
    Grid::from_i64(v).unwrap()
}

fn bars(list: &[(i32, i64, Option<i64>)]) -> Barcode {
    Barcode::new(
        list.iter()
            .map(|&(k, b, d)| Bar::new(k, r(b), d.map(r)).unwrap())
            .collect(),
    )
}

fn line(dim: usize) -> GradedVectorSpace {
    GradedVectorSpace::from_basis((0..dim).map(|i| (0, format!("e{i}")))).unwrap()
}

fn lin(s: &GradedVectorSpace, t: &GradedVectorSpace, m: Matrix) -> GradedLinearMap {
    GradedLinearMap::new(s.clone(), t.clone(), 0, BTreeMap::from([(0, m)])).unwrap()
}

#[test]
fn grid_rules() {
    assert!(Grid::from_i64(&[]).is_err());
    assert!(Grid::from_i64(&[1, 1]).is_err());
    let g = grid(&[0, 2, 5]);
    assert_eq!(g.index_at(&r(-1)), None);
    assert_eq!(g.index_at(&r(0)), Some(0));
    assert_eq!(g.index_at(&r(4)), Some(1));
    assert_eq!(g.index_at(&r(9)), Some(2));
    let json = serde_json::to_string(&g).unwrap();
    assert_eq!(json, r#"["0","2","5"]"#);
    assert!(serde_json::from_str::<Grid>(r#"["2","1"]"#).is_err());
}

#[test]
fn barcode_examples() {
    let g = grid(&[1, 2, 3]);
    let c = PersistenceModule::constant(GrVec, g.clone(), line(1));
    assert_eq!(barcode(&c), bars(&[(0, 1, None)]));
    let one_point = interval_module(&g, &bars(&[(0, 2, Some(3))])).unwrap();
    assert_eq!(barcode(&one_point), bars(&[(0, 2, Some(3))]));
    // class born at 2 and dead at 4, as for [v,v] in S² ⊂ ℂP²
    let g = grid(&[2, 4]);
    let m = PersistenceModule::new(GrVec, g, vec![line(1), line(0)], vec![lin(&line(1), &line(0), Matrix::zeros(0, 1))])
        .unwrap();
    assert_eq!(barcode(&m), bars(&[(0, 2, Some(4))]));
}

#[test]
fn shift_moves_bars() {
    let g = grid(&[0, 2]);
    let m = interval_module(&g, &bars(&[(0, 0, Some(2))])).unwrap();
    let s = m.shift(&frac(1, 2)).unwrap();
    assert_eq!(barcode(&s), Barcode::new(vec![Bar::new(0, frac(-1, 2), Some(frac(3, 2))).unwrap()]));
    let z = m.shift(&r(0)).unwrap();
    assert_eq!(barcode(&z), barcode(&m));
    assert!(m.shift(&r(-1)).is_err());
}

#[test]
fn phi_is_the_composite() {
    let g = grid(&[0, 1, 2]);
    let a = Matrix::from_i64(&[&[1, 2], &[0, 1]]);
    let b = Matrix::from_i64(&[&[3, 0], &[1, 1]]);
    let m = PersistenceModule::new(GrVec, g, vec![line(2), line(2), line(2)], vec![lin(&line(2), &line(2), a.clone()), lin(&line(2), &line(2), b.clone())]).unwrap();
    assert_eq!(m.phi(&r(0), &r(2)).unwrap().matrix(0), b.mul(&a));
    assert_eq!(m.phi(&frac(1, 2), &r(1)).unwrap().matrix(0), a);
    assert!(m.phi(&r(-3), &r(1)).unwrap().is_zero());
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect()).collect();
        let m = Matrix::from_rows(rows);
        if m.rank() == n {
            return m;
        }
    }
}

/// Same module in random bases at every grid point.
fn conjugate(m: &PersistenceModule<GrVec>, rng: &mut ChaCha8Rng) -> PersistenceModule<GrVec> {
    let changes: Vec<BTreeMap<i32, Matrix>> = m
        .objects()
        .iter()
        .map(|o| o.degrees().map(|k| (k, random_invertible(rng, o.dim(k)))).collect())
        .collect();
    let maps = m
        .maps()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mats = f
                .source
                .degrees()
                .filter(|k| f.target.dim(*k) > 0)
                .map(|k| {
                    let p_inv = changes[i][&k].inverse().unwrap();
                    (k, changes[i + 1][&k].mul(&f.matrix(k)).mul(&p_inv))
                })
                .collect();
            GradedLinearMap::new(f.source.clone(), f.target.clone(), 0, mats).unwrap()
        })
        .collect();
    PersistenceModule::new(GrVec, m.grid().clone(), m.objects().to_vec(), maps).unwrap()
}

fn random_barcode(rng: &mut ChaCha8Rng, g: &[i64], n: usize, degrees: i32) -> Barcode {
    let mut out = Vec::new();
    for _ in 0..n {
        let i = rng.gen_range(0..g.len());
        let j = rng.gen_range(i + 1..=g.len());
        out.push(Bar::new(rng.gen_range(0..degrees), r(g[i]), g.get(j).map(|&d| r(d))).unwrap());
    }
    Barcode::new(out)
}

#[test]
fn barcode_recovers_conjugated_intervals_and_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = [0, 1, 3, 4];
    for _ in 0..30 {
        let b = random_barcode(&mut rng, &g, 6, 2);
        let m = conjugate(&interval_module(&grid(&g), &b).unwrap(), &mut rng);
        let got = barcode(&m);
        assert_eq!(got, b);
        for i in 0..g.len() {
            for j in i..g.len() {
                let f = m.map(&r(g[i]), &r(g[j])).unwrap();
                for k in 0..2 {
                    assert_eq!(f.matrix(k).rank(), got.rank(k, &r(g[i]), &r(g[j])));
                }
            }
        }
        assert_eq!(interleaving_distance(&got, &b), Distance::zero());
    }
}

#[test]
fn csv_and_json_round_trip() {
    let b = Barcode::new(vec![Bar::new(3, r(2), Some(r(4))).unwrap(), Bar::new(2, frac(1, 2), None).unwrap()]);
    let csv = b.to_csv();
    assert_eq!(csv, "degree,birth,death\n2,1/2,inf\n3,2,4\n");
    assert_eq!(Barcode::from_csv(&csv).unwrap(), b);
    let f = BarcodeFile::new("x", "pi", &b);
    let json = serde_json::to_string(&f).unwrap();
    assert_eq!(BarcodeFile::from_json(&json).unwrap(), f);
    assert!(BarcodeFile::from_json(&json.replace("\"4\"", "\"1\"")).is_err());
}

#[test]
fn distance_examples() {
    let a = bars(&[(0, 0, Some(2))]);
    let b = bars(&[(0, 0, Some(4))]);
    assert_eq!(interleaving_distance(&a, &a), Distance::zero());
    // matching costs 2, deleting both costs max(1, 2)
    assert_eq!(interleaving_distance(&a, &b), Distance::Finite(r(2)));
    assert_eq!(interleaving_distance(&bars(&[(0, 0, None)]), &bars(&[])), Distance::Infinite);
    assert_eq!(interleaving_distance(&bars(&[(0, 0, None)]), &bars(&[(0, 3, None)])), Distance::Finite(r(3)));
    assert_eq!(interleaving_distance(&bars(&[(0, 0, Some(2))]), &bars(&[(1, 0, Some(2))])), Distance::Finite(r(1)));
}

#[test]
fn solvers_agree_and_triangle_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = [0, 1, 2, 4, 7];
    for _ in 0..200 {
        let n = rng.gen_range(0..5);
        let x = random_barcode(&mut rng, &g, n, 2);
        let n = rng.gen_range(0..5);
        let y = random_barcode(&mut rng, &g, n, 2);
        let n = rng.gen_range(0..5);
        let z = random_barcode(&mut rng, &g, n, 2);
        let e = interleaving_distance_with(&x, &y, Solver::Exhaustive);
        assert_eq!(e, interleaving_distance_with(&x, &y, Solver::Bipartite), "{x:?} {y:?}");
        assert_eq!(e, interleaving_distance(&y, &x));
        let (xy, yz, xz) = (e, interleaving_distance(&y, &z), interleaving_distance(&x, &z));
        if let (Distance::Finite(a), Distance::Finite(b)) = (&xy, &yz) {
            assert!(xz <= Distance::Finite(a + b));
        }
    }
}

fn scalar_cert(
    x: &PersistenceModule<GrVec>,
    y: &PersistenceModule<GrVec>,
    delta: Rational,
    fc: i64,
    gc: i64,
) -> InterleavingCertificate<GrVec> {
    let mk = |c: i64| {
        move |_: &Rational, s: &GradedVectorSpace, t: &GradedVectorSpace| -> crate::Result<GradedLinearMap> {
            let m = if s.dim(0) == 1 && t.dim(0) == 1 { Matrix::from_i64(&[&[c]]) } else { Matrix::zeros(t.dim(0), s.dim(0)) };
            GradedLinearMap::new(s.clone(), t.clone(), 0, BTreeMap::from([(0, m)]))
        }
    };
    InterleavingCertificate::build(x, y, delta, mk(fc), mk(gc)).unwrap()
}

#[test]
fn verify_examples() {
    let g = grid(&[0, 1, 2, 3]);
    let x = interval_module(&g, &bars(&[(0, 0, Some(2))])).unwrap();
    let y = interval_module(&g, &bars(&[(0, 1, Some(3))])).unwrap();
    let ok = verify_interleaving(&x, &y, &scalar_cert(&x, &y, r(1), 1, 1)).unwrap();
    assert!(ok.holds, "{ok:?}");
    let zero = verify_interleaving(&x, &y, &scalar_cert(&x, &y, r(0), 0, 0)).unwrap();
    assert!(!zero.holds);
    assert!(zero.witness.is_some());
    // δ = 0 with mutually inverse isomorphisms
    let c = scalar_cert(&x, &x, r(0), 1, 1);
    assert!(verify_interleaving(&x, &x, &c).unwrap().holds);
    let c = scalar_cert(&x, &x, r(0), 2, 1);
    assert!(!verify_interleaving(&x, &x, &c).unwrap().holds);
    // structural mismatch is an error, not a failed square
    let mut bad = scalar_cert(&x, &y, r(1), 1, 1);
    bad.f[0].1 = GradedLinearMap::identity(&line(2));
    assert!(matches!(verify_interleaving(&x, &y, &bad), Err(Error::Dimension(_))));
    // [0,2) vs [0,4): certificates exist at δ = 2, none of this form below
    let g = grid(&[0, 2, 4]);
    let a = interval_module(&g, &bars(&[(0, 0, Some(2))])).unwrap();
    let b = interval_module(&g, &bars(&[(0, 0, Some(4))])).unwrap();
    assert!(verify_interleaving(&a, &b, &scalar_cert(&a, &b, r(2), 0, 0)).unwrap().holds);
    for (fc, gc) in [(0, 0), (1, 1), (1, 0), (0, 1)] {
        assert!(!verify_interleaving(&a, &b, &scalar_cert(&a, &b, r(1), fc, gc)).unwrap().holds);
        assert!(!verify_interleaving(&a, &b, &scalar_cert(&a, &b, frac(3, 2), fc, gc)).unwrap().holds);
    }
}

#[test]
fn shift_pairs_have_identity_certificates() {
    let g = grid(&[0, 1, 3]);
    let x = interval_module(&g, &bars(&[(0, 0, Some(3)), (0, 1, None), (1, 1, Some(3))])).unwrap();
    for delta in [frac(1, 2), r(1), r(2)] {
        let y = x.shift(&delta).unwrap();
        // f_t = X_{t ≤ t+2δ} = Y_{t+δ}'s structure, g_t = id
        let cert = InterleavingCertificate::build(
            &x,
            &y,
            delta.clone(),
            |t, _, _| x.map(t, &(t + &delta + &delta)),
            |t, _, _| x.map(&(t + &delta), &(t + &delta)),
        )
        .unwrap();
        assert!(verify_interleaving(&x, &y, &cert).unwrap().holds);
        let d = interleaving_distance(&barcode(&x), &barcode(&y));
        assert!(d <= Distance::Finite(delta.clone()), "{d} > {delta}");
        // images of the certificate under the identity functor still verify
        let pushed = pushforward_certificate(&cert, &Identity(GrVec)).unwrap();
        let (px, py) = (pushforward(&x, &Identity(GrVec)).unwrap(), pushforward(&y, &Identity(GrVec)).unwrap());
        assert!(verify_interleaving(&px, &py, &pushed).unwrap().holds);
        assert_eq!(barcode(&px), barcode(&x));
    }
}

#[test]
fn dgl_modules_and_certificates() {
    let n = 6;
    let s2 = FreeDgl::from_text(&[("v", 1)], &[], n).unwrap();
    let cp2 = FreeDgl::from_text(&[("v", 1), ("w", 3)], &[("w", "[v,v]")], n).unwrap();
    let inc = DglMorphism::inclusion(&s2, &cp2).unwrap();
    let cat = Dgl { truncation: n };
    let x = PersistenceModule::new(cat, grid(&[2, 4]), vec![s2.clone(), cp2.clone()], vec![inc]).unwrap();
    let y = x.translated(&r(1));
    let incl = |_: &Rational, s: &FreeDgl, t: &FreeDgl| DglMorphism::inclusion(s, t);
    let cert = InterleavingCertificate::build(&x, &y, r(1), incl, incl).unwrap();
    assert!(verify_interleaving(&x, &y, &cert).unwrap().holds);
    // at δ = 1/2 the inclusion ℂP² ⊂ S² does not exist
    assert!(InterleavingCertificate::build(&x, &y, frac(1, 2), incl, incl).is_err());
    assert!(x.map(&r(2), &r(9)).unwrap().same_as(&DglMorphism::inclusion(&s2, &cp2).unwrap()));
    assert!(x.at(&r(0)).generators().is_empty());
}

#[test]
fn pushforward_rejects_non_functors() {
    struct Doubling;
    impl Functor<GrVec, GrVec> for Doubling {
        fn target_category(&self) -> GrVec {
            GrVec
        }
        fn object(&self, x: &GradedVectorSpace) -> crate::Result<GradedVectorSpace> {
            Ok(x.clone())
        }
        fn morphism(&self, f: &GradedLinearMap) -> crate::Result<GradedLinearMap> {
            let mats = f.source.degrees().map(|k| (k, f.matrix(k).scale(&int(2)))).collect();
            GradedLinearMap::new(f.source.clone(), f.target.clone(), 0, mats)
        }
    }
    let m = PersistenceModule::constant(GrVec, grid(&[0, 1]), line(1));
    assert!(matches!(pushforward(&m, &Doubling), Err(Error::Invariant { .. })));
}
