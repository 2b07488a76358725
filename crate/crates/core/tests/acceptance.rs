//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test -p cornerforge-core --test acceptance -- --nocapture`.
//!
//! The corpus is generated deterministically: at least 200 monoids of rank
//! at most 4 with ray coordinates in [0,5], and at least 50 refinements
//! obtained from 1–3 random stellar subdivisions of corpus duals.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use cornerforge_core::arith::{self, SplitMix64};
use cornerforge_core::{
    blowdown_map, blowup_atlas, blowup_base, blowup_complex, face_complex_of_monoid,
    induced_morphism, lift, lift_into, localize_blowup_from, make_monomial_map,
    pullback_refinement, refinement_from_fan, resolve, restrict_complex, stellar_subdivision,
    validate_complex, validate_morphism, validate_refinement, Arrow, BlowupAtlas,
    ComplexMorphism, Cone, Fan, IntMatrix, MonoidHom, MonomialMap, Refinement, Subcomplex,
    ToricMonoid,
};

// ---------------------------------------------------------------------------
// deterministic corpora
// ---------------------------------------------------------------------------

fn corpus_monoids() -> &'static Vec<ToricMonoid> {
    static CORPUS: OnceLock<Vec<ToricMonoid>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut rng = SplitMix64::new(0xC04_F0C4);
        let mut out = Vec::new();
        while out.len() < 200 {
            let rank = 1 + rng.next_below(4) as usize;
            let nrays = 1 + rng.next_below(rank as u64 + 2) as usize;
            let rays: Vec<Vec<i64>> = (0..nrays)
                .map(|_| (0..rank).map(|_| rng.next_below(6) as i64).collect())
                .collect();
            let Ok(m) = ToricMonoid::from_rays(rank, &rays) else {
                continue;
            };
            if m.dim() == 0 {
                continue;
            }
            out.push(m);
        }
        out
    })
}

struct RefinedCorpusEntry {
    base: ToricMonoid,
    refinement: Refinement,
    atlas: BlowupAtlas,
}

fn refined_corpus() -> &'static Vec<RefinedCorpusEntry> {
    static CORPUS: OnceLock<Vec<RefinedCorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut rng = SplitMix64::new(0xB1_0C0DE);
        let mut out = Vec::new();
        let monoids = corpus_monoids();
        let mut idx = 0;
        while out.len() < 50 {
            let m = &monoids[idx % monoids.len()];
            idx += 1;
            let base = blowup_base(m).expect("blowup base");
            let mut fan = Fan::face_fan(base.dual.cone());
            let rounds = 1 + rng.next_below(3);
            for _ in 0..rounds {
                let cones = fan.maximal_cones();
                let pick = &cones[rng.next_below(cones.len() as u64) as usize];
                if pick.dim() == 0 {
                    continue;
                }
                // a random interior ray: positive combination of the rays
                let mut ray = vec![0i64; pick.rank()];
                for r in pick.rays() {
                    let c = 1 + rng.next_below(2) as i64;
                    for (x, y) in ray.iter_mut().zip(r) {
                        *x += c * *y;
                    }
                }
                fan = fan.stellar(&ray).expect("stellar subdivision");
            }
            let refinement =
                refinement_from_fan(&base.face_complex, &fan).expect("fan refinement");
            let atlas = blowup_atlas(m, &refinement).expect("atlas");
            out.push(RefinedCorpusEntry {
                base: m.clone(),
                refinement,
                atlas,
            });
        }
        out
    })
}

// ---------------------------------------------------------------------------
// criterion 1: duality
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_duality_suite() {
    let mut monoids = 0usize;
    let mut faces_checked = 0usize;
    for m in corpus_monoids() {
        // (P^∨)^∨ ≅ P^♯ with an explicit isomorphism: bijective on the
        // Hilbert bases
        let iso = m.double_dual_iso().expect("double dual iso");
        let sharp = m.decompose().expect("decompose").sharp;
        assert_eq!(iso.source(), &sharp);
        let mut images: Vec<Vec<i64>> = sharp
            .hilbert_basis()
            .iter()
            .map(|h| iso.apply(h).expect("apply"))
            .collect();
        images.sort_by(|a, b| arith::graded_colex(a, b));
        assert_eq!(
            &images[..],
            iso.target().hilbert_basis(),
            "double dual mismatch for {:?}",
            m.cone().rays()
        );

        // the annihilator is an inclusion-reversing bijection with
        // codim(S) = dim(S^⊥)
        let faces = m.faces().expect("faces");
        let dual_faces = m.dual().expect("dual").faces().expect("dual faces");
        assert_eq!(faces.len(), dual_faces.len());
        let mut seen = BTreeSet::new();
        let anns: Vec<_> = faces
            .iter()
            .map(|f| m.annihilator(f).expect("annihilator"))
            .collect();
        for (f, ann) in faces.iter().zip(&anns) {
            assert_eq!(ann.dim(), f.codim(), "codim reversal failed");
            seen.insert(ann.selector().clone());
        }
        assert_eq!(seen.len(), faces.len(), "annihilator not injective");
        for (i, f) in faces.iter().enumerate() {
            for (j, g) in faces.iter().enumerate() {
                if f.leq(g) {
                    assert!(anns[j].leq(&anns[i]), "inclusion not reversed");
                }
            }
        }
        monoids += 1;
        faces_checked += faces.len();
    }
    println!("ACCEPTANCE 1 PASS: duality suite on {monoids} monoids ({faces_checked} faces), zero failures");
}

// ---------------------------------------------------------------------------
// criterion 2: Hilbert basis vs box oracle
// ---------------------------------------------------------------------------

/// Independent oracle: enumerate all monoid elements with coordinates at
/// most 5 and keep those not expressible as a sum of two nonzero elements.
fn box_hilbert_oracle(m: &ToricMonoid) -> Vec<Vec<i64>> {
    let rank = m.rank();
    let mut points = Vec::new();
    let mut v = vec![0i64; rank];
    loop {
        if !arith::is_zero_vec(&v) && m.contains(&v).unwrap() {
            points.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == rank {
                let irreducible: Vec<Vec<i64>> = points
                    .iter()
                    .filter(|g| {
                        !points.iter().any(|g2| {
                            *g2 != **g && {
                                let d: Vec<i64> =
                                    g.iter().zip(g2.iter()).map(|(a, b)| a - b).collect();
                                !arith::is_zero_vec(&d) && m.contains(&d).unwrap()
                            }
                        })
                    })
                    .cloned()
                    .collect();
                let mut out = irreducible;
                out.sort_by(|a, b| arith::graded_colex(a, b));
                return out;
            }
            v[i] += 1;
            if v[i] <= 5 {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_2_hilbert_oracle() {
    let mut checked = 0usize;
    for m in corpus_monoids() {
        if m.rank() > 3 {
            continue;
        }
        let expected = box_hilbert_oracle(m);
        assert_eq!(
            m.hilbert_basis(),
            &expected[..],
            "hilbert basis differs from box oracle for {:?}",
            m.cone().rays()
        );
        checked += 1;
    }
    println!("ACCEPTANCE 2 PASS: hilbert basis equals the box oracle on {checked} rank<=3 monoids");
}

// ---------------------------------------------------------------------------
// criterion 3: localization splittings
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_splitting_suite() {
    let mut pairs = 0usize;
    for m in corpus_monoids() {
        for face in m.faces().expect("faces") {
            let q = m.quotient_by_face(&face).expect("quotient");
            assert!(
                q.splitting.verify().expect("verify"),
                "splitting failed for {:?} at face {:?}",
                m.cone().rays(),
                face.cone().rays()
            );
            assert!(q.quotient.is_sharp());
            pairs += 1;
        }
    }
    println!("ACCEPTANCE 3 PASS: localization splittings verified on {pairs} (monoid, face) pairs");
}

// ---------------------------------------------------------------------------
// criterion 4: gluing equality and separating functionals
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_gluing_equality() {
    let mut pairs = 0usize;
    let mut separated = 0usize;
    for entry in refined_corpus() {
        let atlas = &entry.atlas;
        for g in &atlas.gluings {
            // the gluing equality was already enforced at construction; we
            // recompute both localizations here as the acceptance check
            let (a, b) = g.charts;
            let ca = &atlas.charts[a];
            let cb = &atlas.charts[b];
            let mutual = ca.fan_cone.intersection(&cb.fan_cone).unwrap();
            assert_eq!(mutual, g.mutual_face);
            let loc_a = localize_at(ca, &mutual);
            let loc_b = localize_at(cb, &mutual);
            assert_eq!(loc_a, loc_b, "gluing equality failed");
            assert_eq!(loc_a, g.localized);
            pairs += 1;
            let proper = mutual != ca.fan_cone && mutual != cb.fan_cone;
            if proper {
                let q = g
                    .separating
                    .as_ref()
                    .expect("separating functional for a proper pair");
                for r in ca.fan_cone.rays() {
                    assert!(arith::graded_colex(&[0], &[0]) == std::cmp::Ordering::Equal);
                    assert!(dot(q, r) >= 0, "q not nonnegative on the first cone");
                }
                for r in cb.fan_cone.rays() {
                    assert!(dot(q, r) <= 0, "q not nonpositive on the second cone");
                }
                for r in mutual.rays() {
                    assert_eq!(dot(q, r), 0, "q does not vanish on the mutual face");
                }
                separated += 1;
            }
        }
    }
    println!(
        "ACCEPTANCE 4 PASS: gluing equality on {pairs} maximal pairs over {} refinements, {separated} separating functionals verified",
        refined_corpus().len()
    );
}

fn localize_at(
    chart: &cornerforge_core::BlowupChart,
    mutual: &Cone,
) -> ToricMonoid {
    let ds = chart.monoid.rank();
    let mut ineqs = chart.monoid.cone().facet_normals().to_vec();
    for q in mutual.rays() {
        ineqs.push(q.clone());
        ineqs.push(q.iter().map(|x| -x).collect());
    }
    let face = Cone::from_inequalities(ds, &ineqs).unwrap();
    let mut rays = chart.monoid.cone().rays().to_vec();
    for r in face.rays() {
        rays.push(r.iter().map(|x| -x).collect());
    }
    ToricMonoid::from_rays(ds, &rays).unwrap()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// ---------------------------------------------------------------------------
// criterion 5: blow-up structure
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_blowup_structure() {
    let mut atlases = 0usize;
    let mut worst: f64 = 0.0;
    for entry in refined_corpus() {
        let atlas = &entry.atlas;
        assert!(
            atlas.verify_b_etale().expect("b-etale"),
            "blow-down not group-unimodular"
        );
        let (complex, beta) =
            blowup_complex(&atlas.base.face_complex.complex, &entry.refinement).expect("complex");
        assert_eq!(&complex, entry.refinement.source());
        assert_eq!(&beta, entry.refinement.morphism());
        for s in &atlas.strata {
            assert_eq!(
                s.codim,
                entry.refinement.source().object(s.source_object).dim()
            );
        }
        let err = atlas.verify_numeric(5, 100).expect("numeric");
        assert!(err <= 1e-12, "numeric round trip error {err}");
        worst = worst.max(err);
        atlases += 1;
    }
    println!(
        "ACCEPTANCE 5 PASS: {atlases} atlases b-etale, complex = refinement source, 100-point round trips <= 1e-12 (worst {worst:.3e})"
    );
}

// ---------------------------------------------------------------------------
// criterion 6: worked corner example and A1 resolution
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_worked_corner_example() {
    // Golden values confirmed by hand from the dual-cone and
    // change-of-basis computation: chart cones {(1,0),(1,1)} and
    // {(0,1),(1,1)}, charts (uv, v) and (v', u'v'), transition u' = 1/u,
    // v' = uv, separating functional (1,-1).
    let n2 = ToricMonoid::standard(2);
    let base = blowup_base(&n2).unwrap();
    let refinement = stellar_subdivision(&base.face_complex, &[1, 1]).unwrap();
    let atlas = blowup_atlas(&n2, &refinement).unwrap();
    assert_eq!(atlas.charts.len(), 2);
    assert_eq!(
        atlas.charts[0].fan_cone,
        Cone::from_rays(2, &[vec![1, 0], vec![1, 1]]).unwrap()
    );
    assert_eq!(
        atlas.charts[0].monoid.hilbert_basis(),
        &[vec![1, -1], vec![0, 1]]
    );
    assert_eq!(
        atlas.charts[0].blowdown,
        IntMatrix::from_rows(vec![vec![1, 0], vec![1, 1]]),
        "chart 1 blow-down is (u,v) ↦ (uv, v)"
    );
    assert_eq!(
        atlas.charts[1].monoid.hilbert_basis(),
        &[vec![-1, 1], vec![1, 0]]
    );
    assert_eq!(
        atlas.charts[1].blowdown,
        IntMatrix::from_rows(vec![vec![0, 1], vec![1, 1]]),
        "chart 2 blow-down is (u',v') ↦ (v', u'v')"
    );
    let g = &atlas.gluings[0];
    assert_eq!(
        g.transition,
        IntMatrix::from_rows(vec![vec![-1, 1], vec![0, 1]]),
        "transition u' = u^-1, v' = uv"
    );
    assert_eq!(g.separating, Some(vec![1, -1]));

    // the A1 resolution yields exactly two smooth charts
    let a1 = ToricMonoid::from_rays(2, &[vec![1, 0], vec![1, 2]]).unwrap();
    let r = resolve(&a1).unwrap();
    let a1_atlas = blowup_atlas(&a1, &r).unwrap();
    assert_eq!(a1_atlas.charts.len(), 2);
    for c in &a1_atlas.charts {
        assert!(c.monoid.is_smooth().unwrap());
    }
    println!("ACCEPTANCE 6 PASS: corner blow-up charts, transition and separating functional reproduced; A1 resolves to 2 smooth charts");
}

// ---------------------------------------------------------------------------
// criterion 7: lift suite
// ---------------------------------------------------------------------------

/// The map X_N → X_Q whose dual sends 1 to the given interior functional.
fn ray_map(q: &ToricMonoid, to_coords: &IntMatrix, w: &[i64]) -> Option<MonomialMap> {
    let n = ToricMonoid::standard(1);
    let mut row = Vec::new();
    for gen in q.hilbert_basis() {
        let coords = to_coords.mul_vec(gen).unwrap();
        row.push(dot(w, &coords));
    }
    make_monomial_map(n, q.clone(), IntMatrix::from_rows(vec![row])).ok()
}

#[test]
fn criterion_7_lift_suite() {
    let mut lifts = 0usize;
    let mut cross_checks = 0usize;
    for entry in refined_corpus().iter() {
        let atlas = &entry.atlas;
        // blow-downs lift to the identity
        for c in 0..atlas.charts.len() {
            let b = blowdown_map(atlas, c).expect("blow-down map");
            let lifted = lift(&b, atlas).expect("lift of a blow-down");
            assert!(lifted.map.exponents().is_identity());
            assert_eq!(
                lifted.map.exponents().mul(&atlas.charts[lifted.chart].blowdown).unwrap(),
                atlas.charts[c].blowdown,
                "blow-down o lift != map"
            );
            lifts += 1;
        }
        // interior ray maps through each chart
        for c in &atlas.charts {
            let w = c.fan_cone.relative_interior_point();
            let Some(f) = ray_map(&entry.base, &atlas.base.to_coords, &w) else {
                continue;
            };
            let lifted = lift(&f, atlas).expect("lift of an interior ray map");
            let product = lifted
                .map
                .exponents()
                .mul(&atlas.charts[lifted.chart].blowdown)
                .unwrap();
            let expected = reindex(&f, atlas);
            assert_eq!(product, expected, "blow-down o lift != map (exact)");
            assert!(
                cornerforge_core::verify_lift_numeric(&f, atlas, &lifted, 11, 20).unwrap()
                    <= 1e-12
            );
            lifts += 1;
        }
        // wall maps land in two charts; the lifts agree through the gluing
        for g in &atlas.gluings {
            if g.mutual_face.dim() == 0 {
                continue;
            }
            let w = g.mutual_face.relative_interior_point();
            let Some(f) = ray_map(&entry.base, &atlas.base.to_coords, &w) else {
                continue;
            };
            let (a, b) = g.charts;
            let lift_a = lift_into(&f, atlas, a).expect("lift into first chart");
            let lift_b = lift_into(&f, atlas, b).expect("lift into second chart");
            // the lattice-level maps agree, and the coordinates correspond
            // under the gluing transition numerically
            assert_eq!(lift_a.map.lattice_map(), lift_b.map.lattice_map());
            let mut rng = SplitMix64::new(13);
            for _ in 0..10 {
                let x = f.sample_domain_point(&mut rng);
                let ua = lift_a.map.evaluate(&x).unwrap();
                let ub = lift_b.map.evaluate(&x).unwrap();
                let via: Vec<f64> = (0..g.transition.cols())
                    .map(|j| {
                        (0..g.transition.rows())
                            .map(|i| ua[i].powi(g.transition[(i, j)] as i32))
                            .product()
                    })
                    .collect();
                for (x, y) in via.iter().zip(&ub) {
                    assert!((x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0));
                }
            }
            cross_checks += 1;
        }
    }

    // the doubling map refinement candidate is rejected as unsaturated
    let n = ToricMonoid::standard(1);
    let fc = face_complex_of_monoid(&n).unwrap();
    let zero = fc.complex.object(0).clone();
    let ray = fc.complex.object(1).clone();
    let doubling = ComplexMorphism::new(
        fc.complex.clone(),
        fc.complex.clone(),
        vec![
            (
                0,
                MonoidHom::new(zero.clone(), zero, IntMatrix::identity(0)).unwrap(),
            ),
            (
                1,
                MonoidHom::new(ray.clone(), ray, IntMatrix::from_rows(vec![vec![2]])).unwrap(),
            ),
        ],
    );
    let outcome = validate_refinement(&doubling).unwrap();
    assert!(
        outcome
            .err()
            .expect("n -> 2n rejected")
            .iter()
            .any(|v| v.to_string().contains("not saturated")),
        "doubling map must be rejected as unsaturated"
    );
    println!("ACCEPTANCE 7 PASS: {lifts} exact lifts, {cross_checks} cross-chart agreements, doubling map rejected");
}

fn reindex(f: &MonomialMap, atlas: &BlowupAtlas) -> IntMatrix {
    let mut out = IntMatrix::zero(f.exponents().rows(), atlas.base_generators.len());
    for (j, g) in f.codomain().hilbert_basis().iter().enumerate() {
        let image = atlas.base.to_coords.mul_vec(g).unwrap();
        if arith::is_zero_vec(&image) {
            continue;
        }
        let col = atlas
            .base_generators
            .iter()
            .position(|b| *b == image)
            .unwrap();
        for i in 0..f.exponents().rows() {
            out[(i, col)] = f.exponents()[(i, j)];
        }
    }
    out
}

// ---------------------------------------------------------------------------
// criterion 8: pullback suite
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_pullback_suite() {
    let mut pullbacks = 0usize;
    for entry in refined_corpus().iter().take(25) {
        let atlas = &entry.atlas;
        for c in &atlas.charts {
            let w = c.fan_cone.relative_interior_point();
            let Some(f) = ray_map(&entry.base, &atlas.base.to_coords, &w) else {
                continue;
            };
            let f_nat = induced_morphism(&f).expect("induced morphism");
            assert!(validate_morphism(&f_nat).unwrap().is_empty());
            let data = pullback_refinement(&f_nat, &entry.refinement).expect("pullback");
            assert!(data.assignment_counts.iter().all(|&c| c == 1), "universal morphism not unique");
            assert!(validate_morphism(&data.to_refinement).unwrap().is_empty());
            // the square commutes: ψ ∘ u = f_nat ∘ ψ'
            let m = entry.refinement.morphism();
            for k in 0..data.refinement.source().objects().len() {
                let (i, psi_k) = (
                    data.refinement.morphism().assigned_target(k),
                    data.refinement.morphism().hom(k),
                );
                let (rho, u_k) = (
                    data.to_refinement.assigned_target(k),
                    data.to_refinement.hom(k),
                );
                let left = m.hom(rho).matrix().mul(u_k.matrix()).unwrap();
                let right = f_nat.hom(i).matrix().mul(psi_k.matrix()).unwrap();
                assert_eq!(left, right, "pullback square does not commute");
            }
            pullbacks += 1;
            break; // one map per refinement keeps the suite fast
        }
    }

    // the diagonal pullback of the corner subdivision is trivial
    let n2 = ToricMonoid::standard(2);
    let base = blowup_base(&n2).unwrap();
    let corner = stellar_subdivision(&base.face_complex, &[1, 1]).unwrap();
    let n = ToricMonoid::standard(1);
    let diag = make_monomial_map(n, n2, IntMatrix::from_rows(vec![vec![1, 1]])).unwrap();
    let f_nat = induced_morphism(&diag).unwrap();
    let data = pullback_refinement(&f_nat, &corner).unwrap();
    assert_eq!(
        data.refinement.source().objects().len(),
        2,
        "diagonal pullback of the corner subdivision must be trivial"
    );
    println!("ACCEPTANCE 8 PASS: {pullbacks} pullbacks validate with unique universal morphisms; diagonal example trivial");
}

// ---------------------------------------------------------------------------
// criterion 9: localization suite
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_localization_suite() {
    let mut checks = 0usize;
    for entry in refined_corpus().iter().take(25) {
        let faces = entry.base.faces().expect("faces");
        for face in &faces {
            let loc = localize_blowup_from(&entry.atlas, face).expect("localize");
            for f in &loc.factorizations {
                assert!(
                    f.verify().expect("verify factorization"),
                    "chart factorization failed"
                );
            }
            checks += loc.factorizations.len();
        }
    }
    println!("ACCEPTANCE 9 PASS: localization product splittings verified ({checks} chart factorizations)");
}

// ---------------------------------------------------------------------------
// criterion 10: complex axioms
// ---------------------------------------------------------------------------

/// The teardrop complex: objects {0, N, N²} with two arrows N ⇀ N².
fn teardrop() -> cornerforge_core::MonoidalComplex {
    let zero = ToricMonoid::zero(0);
    let n = ToricMonoid::standard(1);
    let n2 = ToricMonoid::standard(2);
    let hom = |src: &ToricMonoid, dst: &ToricMonoid, rows: Vec<Vec<i64>>| {
        MonoidHom::new(
            src.clone(),
            dst.clone(),
            if rows.is_empty() {
                IntMatrix::zero(dst.rank(), src.rank())
            } else {
                IntMatrix::from_rows(rows)
            },
        )
        .unwrap()
    };
    let arrows = vec![
        Arrow { source: 0, target: 0, hom: hom(&zero, &zero, vec![]) },
        Arrow { source: 1, target: 1, hom: hom(&n, &n, vec![vec![1]]) },
        Arrow { source: 2, target: 2, hom: hom(&n2, &n2, vec![vec![1, 0], vec![0, 1]]) },
        Arrow { source: 0, target: 1, hom: hom(&zero, &n, vec![]) },
        Arrow { source: 0, target: 2, hom: hom(&zero, &n2, vec![]) },
        Arrow { source: 1, target: 2, hom: hom(&n, &n2, vec![vec![1], vec![0]]) },
        Arrow { source: 1, target: 2, hom: hom(&n, &n2, vec![vec![0], vec![1]]) },
    ];
    cornerforge_core::MonoidalComplex::new(vec![zero, n, n2], arrows)
}

#[test]
fn criterion_10_complex_axioms() {
    let td = teardrop();
    assert!(
        validate_complex(&td).expect("validate").is_empty(),
        "teardrop must validate as a complex"
    );

    // every subcomplex restriction of the corner subdivision revalidates
    let n2 = ToricMonoid::standard(2);
    let base = blowup_base(&n2).unwrap();
    let corner = stellar_subdivision(&base.face_complex, &[1, 1]).unwrap();
    let n_objects = base.face_complex.complex.objects().len();
    let mut restrictions = 0usize;
    // all downward-closed subsets of the base complex
    for mask in 0..(1u32 << n_objects) {
        let indices: BTreeSet<usize> =
            (0..n_objects).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = Subcomplex::new(indices);
        if sub.validate(&base.face_complex.complex).is_err() {
            continue;
        }
        let restricted = restrict_complex(corner.morphism(), &sub).unwrap();
        let outcome = validate_refinement(&restricted).unwrap();
        assert!(
            outcome.is_ok() || restricted.source().objects().is_empty(),
            "restriction to {mask:b} failed"
        );
        restrictions += 1;
    }
    println!("ACCEPTANCE 10 PASS: teardrop validates; {restrictions} subcomplex restrictions revalidate as refinements");
}
