//! Saturated refinements and blow-ups.
//!
//! A refinement is a validated complex morphism ψ : R → P satisfying
//! (R1) every ψ_R injective and (R2) the interiors of the images partition
//! each target interior. Refinements of face complexes are generated from
//! fans by stellar subdivision. The blow-up of a model space along a
//! refinement of its dual complex is emitted as an atlas: one dual-monoid
//! chart with blow-down matrix per maximal cone, plus gluing data (localized
//! monoid, transition matrices, separating functional) per chart pair.

use crate::arith::{self, SplitMix64};
use crate::complex::{
    face_complex_of_monoid, restrict_complex, validate_morphism, Arrow, ComplexMorphism,
    FaceComplex, MonoidalComplex, MorphismViolation,
};
use crate::cone::{cmp_cones, Cone};
use crate::error::Error;
use crate::lattice::{left_inverse_on_sublattice, solve_integer, IntMatrix, Sublattice};
use crate::monoid::{full_lattice, FaceHandle, MonoidHom, ToricMonoid};
use crate::Result;

// ---------------------------------------------------------------------------
// Fans and stellar subdivision
// ---------------------------------------------------------------------------

/// A fan supported on a cone: the list of maximal cones of a subdivision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    support: Cone,
    maximal: Vec<Cone>,
}

impl Fan {
    /// The trivial fan: the cone subdivided by itself.
    pub fn face_fan(support: &Cone) -> Self {
        Self {
            rank: support.rank(),
            support: support.clone(),
            maximal: vec![support.clone()],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn support(&self) -> &Cone {
        &self.support
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    /// Stellar subdivision: every maximal cone containing the ray is
    /// replaced by the joins of the ray with its facets not containing it.
    pub fn stellar(&self, ray: &[i64]) -> Result<Fan> {
        let ray = arith::primitive(ray);
        if arith::is_zero_vec(&ray) || !self.support.contains(&ray)? {
            return Err(Error::RayOutsideSupport);
        }
        let mut maximal: Vec<Cone> = Vec::new();
        for c in &self.maximal {
            if !c.contains(&ray)? {
                maximal.push(c.clone());
                continue;
            }
            for face in c.face_lattice()?.faces() {
                if face.cone.dim() + 1 != c.dim() || face.cone.contains(&ray)? {
                    continue;
                }
                let mut rays = face.cone.rays().to_vec();
                rays.push(ray.clone());
                maximal.push(Cone::from_rays(self.rank, &rays)?);
            }
        }
        maximal.sort_by(cmp_cones);
        maximal.dedup();
        Ok(Fan {
            rank: self.rank,
            support: self.support.clone(),
            maximal,
        })
    }

    /// All cones of the fan (faces of the maximal ones), canonically
    /// ordered by (dimension, ray list).
    pub fn all_cones(&self) -> Result<Vec<Cone>> {
        let mut cones = Vec::new();
        for m in &self.maximal {
            for f in m.face_lattice()?.faces() {
                cones.push(f.cone.clone());
            }
        }
        cones.sort_by(cmp_cones);
        cones.dedup();
        Ok(cones)
    }
}

// ---------------------------------------------------------------------------
// Refinement validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum RefinementViolation {
    Morphism(MorphismViolation),
    NotInjective { object: usize },
    ImageNotSaturated { object: usize },
    DuplicateImage { first: usize, second: usize },
    IntersectionNotMutualFace { first: usize, second: usize },
    NoMaximalCone { target: usize },
    WallNotMatched { object: usize, wall_rays: Vec<Vec<i64>> },
    InteriorPointMultiplyCovered { object: usize },
    StratumMismatch { target: usize, cone_rays: Vec<Vec<i64>> },
}

impl std::fmt::Display for RefinementViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Morphism(v) => write!(f, "{v}"),
            Self::NotInjective { object } => {
                write!(f, "source object {object}: homomorphism is not injective")
            }
            Self::ImageNotSaturated { object } => {
                write!(f, "source object {object}: image not saturated")
            }
            Self::DuplicateImage { first, second } => {
                write!(f, "source objects {first} and {second} have identical images")
            }
            Self::IntersectionNotMutualFace { first, second } => write!(
                f,
                "images of source objects {first} and {second} do not intersect in a mutual face"
            ),
            Self::NoMaximalCone { target } => {
                write!(f, "target object {target} is not covered by any maximal cone")
            }
            Self::WallNotMatched { object, wall_rays } => write!(
                f,
                "source object {object}: wall {wall_rays:?} is neither on the boundary nor shared with exactly one other maximal cone"
            ),
            Self::InteriorPointMultiplyCovered { object } => write!(
                f,
                "interior point of the image of source object {object} is covered more than once"
            ),
            Self::StratumMismatch { target, cone_rays } => write!(
                f,
                "target object {target}: interior stratum {cone_rays:?} is not the image of exactly one source object"
            ),
        }
    }
}

/// A validated saturated refinement.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    morphism: ComplexMorphism,
}

impl Refinement {
    pub fn morphism(&self) -> &ComplexMorphism {
        &self.morphism
    }

    pub fn source(&self) -> &MonoidalComplex {
        self.morphism.source()
    }

    pub fn target(&self) -> &MonoidalComplex {
        self.morphism.target()
    }

    /// Source objects assigned to the given target whose image has full
    /// dimension in it.
    pub fn maximal_over(&self, target: usize) -> Vec<usize> {
        let dim = self.target().object(target).dim();
        (0..self.source().objects().len())
            .filter(|&i| {
                self.morphism.assigned_target(i) == target
                    && self.morphism.hom(i).image_cone().dim() == dim
            })
            .collect()
    }
}

/// Check (R1) and (R2) for a complex morphism. Violations are data.
pub fn validate_refinement(
    m: &ComplexMorphism,
) -> Result<std::result::Result<Refinement, Vec<RefinementViolation>>> {
    let mut violations: Vec<RefinementViolation> = validate_morphism(m)?
        .into_iter()
        .map(RefinementViolation::Morphism)
        .collect();
    if !violations.is_empty() {
        return Ok(Err(violations));
    }
    // (R1) injectivity
    for i in 0..m.source().objects().len() {
        if !m.hom(i).is_injective() {
            violations.push(RefinementViolation::NotInjective { object: i });
        }
    }
    // (R2) per target object
    for t in 0..m.target().objects().len() {
        let target_cone = m.target().object(t).cone().clone();
        let over: Vec<usize> = (0..m.source().objects().len())
            .filter(|&i| m.assigned_target(i) == t)
            .collect();
        // saturation of each image
        for &i in &over {
            let hom = m.hom(i);
            let image_gens: Result<Vec<Vec<i64>>> = m.source().object(i)
                .hilbert_basis()
                .iter()
                .map(|h| hom.apply(h))
                .collect();
            if !image_is_saturated(hom.image_cone(), &image_gens?)? {
                violations.push(RefinementViolation::ImageNotSaturated { object: i });
            }
        }
        // pairwise mutual faces
        for (a, &i) in over.iter().enumerate() {
            for &j in &over[a + 1..] {
                let ci = m.hom(i).image_cone();
                let cj = m.hom(j).image_cone();
                if ci == cj {
                    violations.push(RefinementViolation::DuplicateImage { first: i, second: j });
                    continue;
                }
                let k = ci.intersection(cj)?;
                if !(k.is_face_of(ci)? && k.is_face_of(cj)?) {
                    violations.push(RefinementViolation::IntersectionNotMutualFace {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        // cover: wall condition plus interior sampling
        let maximal: Vec<usize> = over
            .iter()
            .copied()
            .filter(|&i| m.hom(i).image_cone().dim() == target_cone.dim())
            .collect();
        if maximal.is_empty() {
            violations.push(RefinementViolation::NoMaximalCone { target: t });
            continue;
        }
        for &i in &maximal {
            let ci = m.hom(i).image_cone();
            let interior = ci.relative_interior_point();
            let covered = maximal
                .iter()
                .filter(|&&j| {
                    m.hom(j)
                        .image_cone()
                        .contains(&interior)
                        .unwrap_or(false)
                })
                .count();
            if covered != 1 {
                violations.push(RefinementViolation::InteriorPointMultiplyCovered { object: i });
            }
            for wall in ci.face_lattice()?.faces() {
                if wall.cone.dim() + 1 != ci.dim() {
                    continue;
                }
                let w = wall.cone.relative_interior_point();
                let on_boundary = !target_cone.contains_relative_interior(&w)?;
                let shared = maximal
                    .iter()
                    .filter(|&&j| {
                        j != i
                            && m.hom(j)
                                .image_cone()
                                .contains(&w)
                                .unwrap_or(false)
                    })
                    .count();
                let ok = if on_boundary { shared == 0 } else { shared == 1 };
                if !ok {
                    violations.push(RefinementViolation::WallNotMatched {
                        object: i,
                        wall_rays: wall.cone.rays().to_vec(),
                    });
                }
            }
        }
        // stratum accounting: every face of a maximal image whose interior
        // lies in the target interior is the image of exactly one source
        // object over this target, and conversely
        let mut strata: Vec<Cone> = Vec::new();
        for &i in &maximal {
            for f in m.hom(i).image_cone().face_lattice()?.faces() {
                let p = f.cone.relative_interior_point();
                if target_cone.contains_relative_interior(&p)? {
                    strata.push(f.cone.clone());
                }
            }
        }
        strata.sort_by(cmp_cones);
        strata.dedup();
        for s in &strata {
            let count = over
                .iter()
                .filter(|&&i| m.hom(i).image_cone() == s)
                .count();
            if count != 1 {
                violations.push(RefinementViolation::StratumMismatch {
                    target: t,
                    cone_rays: s.rays().to_vec(),
                });
            }
        }
        for &i in &over {
            if !strata.contains(m.hom(i).image_cone()) {
                violations.push(RefinementViolation::StratumMismatch {
                    target: t,
                    cone_rays: m.hom(i).image_cone().rays().to_vec(),
                });
            }
        }
    }
    if violations.is_empty() {
        Ok(Ok(Refinement {
            morphism: m.clone(),
        }))
    } else {
        Ok(Err(violations))
    }
}

/// Is the monoid generated by `gens` equal to its saturation
/// `cone ∩ Z^rank`? For a non-pointed image the unit part must be generated
/// exactly and the sharp quotient is checked by factorization.
fn image_is_saturated(cone: &Cone, gens: &[Vec<i64>]) -> Result<bool> {
    if cone.is_zero() {
        return Ok(true);
    }
    if cone.is_pointed() {
        let saturated = ToricMonoid::from_cone(cone.rank(), cone.clone())?;
        for h in saturated.hilbert_basis() {
            if !generated_contains_pointed(cone, gens, h)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let lin = cone.lineality()?;
    let unit_gens: Vec<Vec<i64>> = {
        let mut out = Vec::new();
        for g in gens {
            if lin.contains(g)? {
                out.push(g.clone());
            }
        }
        out
    };
    // the generators inside the lineality must span it as a cone and
    // generate the full saturated unit lattice
    let unit_cone = Cone::from_rays(cone.rank(), &unit_gens)?;
    if unit_cone.lineality_rank() != lin.rank() {
        return Ok(false);
    }
    if !unit_gens.is_empty() {
        let gen_lattice = Sublattice::from_generators(cone.rank(), &unit_gens)?;
        if gen_lattice != lin {
            return Ok(false);
        }
    } else if lin.rank() > 0 {
        return Ok(false);
    }
    let quot = crate::lattice::lattice_quotient(cone.rank(), &lin)?;
    let proj = quot.projection.as_ref().expect("saturated lineality");
    let sharp_cone = Cone::linear_image(proj, cone)?;
    let sharp_gens: Result<Vec<Vec<i64>>> = gens.iter().map(|g| proj.mul_vec(g)).collect();
    let sharp_gens: Vec<Vec<i64>> = sharp_gens?
        .into_iter()
        .filter(|g| !arith::is_zero_vec(g))
        .collect();
    let saturated = ToricMonoid::from_cone(sharp_cone.rank(), sharp_cone.clone())?;
    for h in saturated.hilbert_basis() {
        if !generated_contains_pointed(&sharp_cone, &sharp_gens, h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership of `v` in the monoid generated by `gens` inside a pointed
/// cone, by depth-first search bounded by a strictly positive functional.
fn generated_contains_pointed(cone: &Cone, gens: &[Vec<i64>], v: &[i64]) -> Result<bool> {
    if arith::is_zero_vec(v) {
        return Ok(true);
    }
    if !cone.contains(v)? {
        return Ok(false);
    }
    let phi = cone.dual().relative_interior_point();
    fn go(cone: &Cone, gens: &[Vec<i64>], phi: &[i64], v: Vec<i64>, idx: usize) -> Result<bool> {
        if arith::is_zero_vec(&v) {
            return Ok(true);
        }
        if idx == gens.len() {
            return Ok(false);
        }
        let g = &gens[idx];
        let phi_g = arith::dot(phi, g, "saturation")?;
        if phi_g <= 0 {
            // zero generator inside a pointed cone
            return go(cone, gens, phi, v, idx + 1);
        }
        let max_k = arith::dot(phi, &v, "saturation")? / phi_g;
        for k in (0..=max_k).rev() {
            let rest = arith::vec_sub(&v, &arith::vec_scale(k, g, "saturation")?, "saturation")?;
            if !cone.contains(&rest)? {
                continue;
            }
            if go(cone, gens, phi, rest, idx + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    go(cone, gens, &phi, v.to_vec(), 0)
}

// ---------------------------------------------------------------------------
// Refinements of face complexes from fans
// ---------------------------------------------------------------------------

/// Build the refinement of a face complex determined by a fan supported on
/// the root cone. Source objects are the fan cones as standalone monoids,
/// in canonical order.
pub fn refinement_from_fan(base: &FaceComplex, fan: &Fan) -> Result<Refinement> {
    if fan.support() != base.root.cone() {
        return Err(Error::InvalidRefinement(
            "fan support does not match the root cone of the base complex".into(),
        ));
    }
    let cells = fan.all_cones()?;
    let mut objects = Vec::with_capacity(cells.len());
    let mut embeddings = Vec::with_capacity(cells.len());
    for c in &cells {
        let m = ToricMonoid::from_cone(fan.rank(), c.clone())?;
        let gc = m.in_group_coords()?;
        objects.push(gc.monoid);
        embeddings.push(gc.embed);
    }
    let mut arrows = Vec::new();
    for i in 0..cells.len() {
        for j in 0..cells.len() {
            if !cells[i].is_face_of(&cells[j])? {
                continue;
            }
            let w_j = &embeddings[j];
            let w_j_left = left_inverse(w_j)?;
            let matrix = w_j_left.mul(&embeddings[i])?;
            debug_assert_eq!(w_j.mul(&matrix)?, embeddings[i]);
            arrows.push(Arrow {
                source: i,
                target: j,
                hom: MonoidHom::new(objects[i].clone(), objects[j].clone(), matrix)?,
            });
        }
    }
    let source = MonoidalComplex::new(objects.clone(), arrows);
    let support = base.root.cone();
    let mut assignment = Vec::with_capacity(cells.len());
    for (i, c) in cells.iter().enumerate() {
        let selector = support.tight_selector(&c.rays().to_vec())?;
        let face_cone = support.face_cone(&selector)?;
        let target = base
            .object_of_face_cone(&face_cone)
            .ok_or_else(|| Error::InvalidRefinement("fan cone not over a base face".into()))?;
        let e = &base.embeddings[target];
        let e_left = left_inverse(e)?;
        let matrix = e_left.mul(&embeddings[i])?;
        debug_assert_eq!(e.mul(&matrix)?, embeddings[i]);
        assignment.push((
            target,
            MonoidHom::new(
                objects[i].clone(),
                base.complex.object(target).clone(),
                matrix,
            )?,
        ));
    }
    let morphism = ComplexMorphism::new(source, base.complex.clone(), assignment);
    match validate_refinement(&morphism)? {
        Ok(r) => Ok(r),
        Err(violations) => Err(Error::InvalidRefinement(format!(
            "fan does not induce a refinement: {}",
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        ))),
    }
}

fn left_inverse(w: &IntMatrix) -> Result<IntMatrix> {
    if w.cols() == 0 {
        return Ok(IntMatrix::zero(0, w.rows()));
    }
    left_inverse_on_sublattice(w, &full_lattice(w.cols()))
}

/// Stellar subdivision of a face complex at a primitive ray in the root
/// cone's coordinates.
pub fn stellar_subdivision(base: &FaceComplex, ray: &[i64]) -> Result<Refinement> {
    let fan = Fan::face_fan(base.root.cone()).stellar(ray)?;
    refinement_from_fan(base, &fan)
}

/// The identity refinement of a face complex.
pub fn identity_refinement(base: &FaceComplex) -> Result<Refinement> {
    refinement_from_fan(base, &Fan::face_fan(base.root.cone()))
}

// ---------------------------------------------------------------------------
// Blow-up base and atlas
// ---------------------------------------------------------------------------

/// Coordinate data for blowing up a model space: the sharp part of the base
/// in its group coordinates (full-dimensional and pointed), its dual, and
/// the face complex of the dual over which refinements live.
#[derive(Debug, Clone)]
pub struct BlowupBase {
    pub base: ToricMonoid,
    pub units: Sublattice,
    /// `P^♯` in group coordinates: full-dimensional, pointed, in `Z^ds`.
    pub sharp_full: ToricMonoid,
    /// `(P^♯)^∨`, full-dimensional and pointed in `Z^ds`.
    pub dual: ToricMonoid,
    pub face_complex: FaceComplex,
    /// `ds × rank`: ambient coordinates → sharp group coordinates.
    pub to_coords: IntMatrix,
    /// `rank × ds`: a section of `to_coords`.
    pub from_coords: IntMatrix,
}

pub fn blowup_base(p: &ToricMonoid) -> Result<BlowupBase> {
    let dec = p.decompose()?;
    let gc = dec.sharp.in_group_coords()?;
    let to_coords = gc.project.mul(&dec.projection)?;
    let from_coords = dec.section.mul(&gc.embed)?;
    debug_assert!(to_coords.mul(&from_coords)?.is_identity());
    let dual = ToricMonoid::from_cone(gc.monoid.rank(), gc.monoid.cone().dual())?;
    let face_complex = face_complex_of_monoid(&dual)?;
    Ok(BlowupBase {
        base: p.clone(),
        units: dec.units,
        sharp_full: gc.monoid,
        dual,
        face_complex,
        to_coords,
        from_coords,
    })
}

/// One chart of a blow-up atlas: the dual monoid of a maximal refinement
/// cone, with the blow-down exponent matrix in canonical Hilbert
/// coordinates (rows: chart generators; columns: base generators).
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupChart {
    pub source_object: usize,
    pub fan_cone: Cone,
    pub monoid: ToricMonoid,
    pub blowdown: IntMatrix,
}

/// Gluing data for a pair of charts: the mutual face of the fan cones, the
/// common localized monoid, group-level transition matrices both ways, and
/// a separating functional when the mutual face is proper.
#[derive(Debug, Clone, PartialEq)]
pub struct GluingDatum {
    pub charts: (usize, usize),
    pub mutual_face: Cone,
    pub localized: ToricMonoid,
    /// Columns express the second chart's generators over the first
    /// chart's generators (group level).
    pub transition: IntMatrix,
    pub transition_back: IntMatrix,
    /// `q` with `q ≥ 0` on the first cone, `q ≤ 0` on the second, `q = 0`
    /// on the mutual face; present when the face is proper in both.
    pub separating: Option<Vec<i64>>,
}

/// Stratum bookkeeping: each source object of the refinement corresponds to
/// a boundary stratum of the blow-up of codimension `dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumInfo {
    pub source_object: usize,
    pub base_object: usize,
    pub codim: usize,
}

#[derive(Debug, Clone)]
pub struct BlowupAtlas {
    pub base: BlowupBase,
    pub refinement: Refinement,
    /// Hilbert basis of the sharp base in group coordinates: the column
    /// labels of every blow-down matrix.
    pub base_generators: Vec<Vec<i64>>,
    pub charts: Vec<BlowupChart>,
    pub gluings: Vec<GluingDatum>,
    pub complex: MonoidalComplex,
    pub beta_natural: ComplexMorphism,
    pub strata: Vec<StratumInfo>,
}

/// Build the blow-up atlas of `X_P` along a refinement of the face complex
/// of its (sharpened) dual. Non-sharp bases are handled by the product
/// rule: the atlas describes the sharp factor and carries the unit lattice
/// symbolically in `base.units`.
pub fn blowup_atlas(p: &ToricMonoid, refinement: &Refinement) -> Result<BlowupAtlas> {
    let base = blowup_base(p)?;
    if refinement.target() != &base.face_complex.complex {
        return Err(Error::InvalidRefinement(
            "refinement is not over the face complex of the dual of the base".into(),
        ));
    }
    let ds = base.dual.rank();
    let top = base.face_complex.top_object();
    let base_generators = base.sharp_full.hilbert_basis().to_vec();

    let mut maximal = refinement.maximal_over(top);
    maximal.sort_by(|&a, &b| {
        cmp_cones(
            refinement.morphism().hom(a).image_cone(),
            refinement.morphism().hom(b).image_cone(),
        )
    });
    let mut charts = Vec::new();
    for i in maximal {
        let fan_cone = refinement.morphism().hom(i).image_cone().clone();
        let chart_monoid = ToricMonoid::from_cone(ds, fan_cone.dual())?;
        let mut blowdown = IntMatrix::zero(chart_monoid.hilbert_basis().len(), base_generators.len());
        for (j, p_j) in base_generators.iter().enumerate() {
            let coeffs = chart_monoid
                .factorize(p_j)?
                .ok_or_else(|| Error::InvalidRefinement(
                    "base generator is not a member of a chart monoid".into(),
                ))?;
            for (r, c) in coeffs.iter().enumerate() {
                blowdown[(r, j)] = *c;
            }
        }
        charts.push(BlowupChart {
            source_object: i,
            fan_cone,
            monoid: chart_monoid,
            blowdown,
        });
    }

    let mut gluings = Vec::new();
    for a in 0..charts.len() {
        for b in a + 1..charts.len() {
            gluings.push(gluing_datum(ds, &charts, a, b)?);
        }
    }

    let strata = (0..refinement.source().objects().len())
        .map(|i| StratumInfo {
            source_object: i,
            base_object: refinement.morphism().assigned_target(i),
            codim: refinement.source().object(i).dim(),
        })
        .collect();

    Ok(BlowupAtlas {
        base,
        refinement: refinement.clone(),
        base_generators,
        charts,
        gluings,
        complex: refinement.source().clone(),
        beta_natural: refinement.morphism().clone(),
        strata,
    })
}

fn gluing_datum(ds: usize, charts: &[BlowupChart], a: usize, b: usize) -> Result<GluingDatum> {
    let ca = &charts[a];
    let cb = &charts[b];
    let mutual = ca.fan_cone.intersection(&cb.fan_cone)?;
    // localization of each chart monoid at the face annihilating the mutual
    // face; the gluing lemma asserts the two sides agree as monoids
    let localized_a = localize_chart_at(ds, ca, &mutual)?;
    let localized_b = localize_chart_at(ds, cb, &mutual)?;
    if localized_a != localized_b {
        return Err(Error::InvalidRefinement(
            "gluing equality failed: the localized chart monoids differ".into(),
        ));
    }
    let ha = IntMatrix::from_cols(ds, &ca.monoid.hilbert_basis().to_vec());
    let hb = IntMatrix::from_cols(ds, &cb.monoid.hilbert_basis().to_vec());
    let transition = express_over(&ha, cb.monoid.hilbert_basis())?;
    let transition_back = express_over(&hb, ca.monoid.hilbert_basis())?;
    let separating = if mutual == ca.fan_cone || mutual == cb.fan_cone {
        None
    } else {
        let fa = annihilating_face(ds, ca, &mutual)?;
        let fb = annihilating_face(ds, cb, &mutual)?;
        let neg_fb_rays: Result<Vec<Vec<i64>>> =
            fb.rays().iter().map(|r| arith::vec_neg(r, "gluing")).collect();
        let neg_fb = Cone::from_rays(ds, &neg_fb_rays?)?;
        let sep_cone = fa.intersection(&neg_fb)?;
        let q = sep_cone.relative_interior_point();
        if arith::is_zero_vec(&q) {
            return Err(Error::InvalidRefinement(
                "no separating functional for a proper mutual face".into(),
            ));
        }
        for r in ca.fan_cone.rays() {
            debug_assert!(arith::dot(&q, r, "gluing")? >= 0);
        }
        for r in cb.fan_cone.rays() {
            debug_assert!(arith::dot(&q, r, "gluing")? <= 0);
        }
        for r in mutual.rays() {
            debug_assert_eq!(arith::dot(&q, r, "gluing")?, 0);
        }
        Some(q)
    };
    Ok(GluingDatum {
        charts: (a, b),
        mutual_face: mutual,
        localized: localized_a,
        transition,
        transition_back,
        separating,
    })
}

/// `(Q^⊥)^{-1} R^∨`: localize a chart monoid at the face of elements
/// vanishing on the mutual fan face.
fn localize_chart_at(ds: usize, chart: &BlowupChart, mutual: &Cone) -> Result<ToricMonoid> {
    let face = annihilating_face(ds, chart, mutual)?;
    let mut rays = chart.monoid.cone().rays().to_vec();
    for r in face.rays() {
        rays.push(arith::vec_neg(r, "localize chart")?);
    }
    ToricMonoid::from_rays(ds, &rays)
}

/// The face `{u ∈ R^∨ : u(Q) = 0}` of a chart monoid.
fn annihilating_face(ds: usize, chart: &BlowupChart, mutual: &Cone) -> Result<Cone> {
    let mut ineqs = chart.monoid.cone().facet_normals().to_vec();
    for q in mutual.rays() {
        ineqs.push(q.clone());
        ineqs.push(arith::vec_neg(q, "annihilating face")?);
    }
    Cone::from_inequalities(ds, &ineqs)
}

/// Express each vector as an integer (group-level) combination of the
/// columns of `h`; deterministic via the Smith-normal-form solution.
fn express_over(h: &IntMatrix, vectors: &[Vec<i64>]) -> Result<IntMatrix> {
    let mut out = IntMatrix::zero(h.cols(), vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        let sol = solve_integer(h, v)?.ok_or(Error::NoIntegerSolution)?;
        for (r, c) in sol.iter().enumerate() {
            out[(r, k)] = *c;
        }
    }
    Ok(out)
}

impl BlowupAtlas {
    /// Group-level lattice map of a chart's blow-down: the matrix `E` with
    /// `E · (base generator as lattice vector) = same vector expressed
    /// through the chart`. For charts this is always the identity on
    /// `Z^ds`, which is exactly the b-étale property; it is recomputed here
    /// from the blow-down matrix as an independent consistency check.
    pub fn blowdown_group_matrix(&self, chart: usize) -> Result<IntMatrix> {
        let c = &self.charts[chart];
        let ds = self.base.dual.rank();
        let h_chart = IntMatrix::from_cols(ds, &c.monoid.hilbert_basis().to_vec());
        let h_base = IntMatrix::from_cols(ds, &self.base_generators);
        // E * h_base = h_chart * blowdown
        let rhs = h_chart.mul(&c.blowdown)?;
        let h_base_right = right_inverse(&h_base)?;
        let e = rhs.mul(&h_base_right)?;
        debug_assert_eq!(e.mul(&h_base)?, rhs);
        Ok(e)
    }

    /// Is every blow-down group-level unimodular (b-étale)?
    pub fn verify_b_etale(&self) -> Result<bool> {
        for i in 0..self.charts.len() {
            let e = self.blowdown_group_matrix(i)?;
            if e.rows() != e.cols() || e.det()?.abs() != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Numeric interior round-trips: sample interior points per gluing,
    /// push them through transitions and blow-downs both ways, and return
    /// the largest relative error observed.
    pub fn verify_numeric(&self, seed: u64, points: usize) -> Result<f64> {
        let ds = self.base.dual.rank();
        let mut rng = SplitMix64::new(seed);
        let mut worst: f64 = 0.0;
        for g in &self.gluings {
            let (a, b) = g.charts;
            let ca = &self.charts[a];
            let cb = &self.charts[b];
            for _ in 0..points {
                let t: Vec<f64> = (0..ds).map(|_| rng.positive()).collect();
                let ua = eval_coords(ca.monoid.hilbert_basis(), &t);
                let ub = eval_coords(cb.monoid.hilbert_basis(), &t);
                for &x in ua.iter().chain(ub.iter()) {
                    if !(x > 0.0) {
                        return Err(Error::NonPositiveCoordinate { index: 0 });
                    }
                }
                // transition: chart a coordinates -> chart b coordinates
                let via = apply_exponents(&ua, &g.transition);
                worst = worst.max(rel_err_vec(&via, &ub));
                // round trip back
                let back = apply_exponents(&via, &g.transition_back);
                worst = worst.max(rel_err_vec(&back, &ua));
                // blow-downs from both charts agree with the direct values
                let direct = eval_coords(&self.base_generators, &t);
                let down_a = apply_exponents(&ua, &ca.blowdown);
                let down_b = apply_exponents(&ub, &cb.blowdown);
                for &x in direct.iter().chain(down_a.iter()).chain(down_b.iter()) {
                    if !(x > 0.0) {
                        return Err(Error::NonPositiveCoordinate { index: 0 });
                    }
                }
                worst = worst.max(rel_err_vec(&down_a, &direct));
                worst = worst.max(rel_err_vec(&down_b, &direct));
            }
        }
        // atlases with a single chart still verify the blow-down
        if self.gluings.is_empty() {
            for c in &self.charts {
                for _ in 0..points {
                    let t: Vec<f64> = (0..ds).map(|_| rng.positive()).collect();
                    let u = eval_coords(c.monoid.hilbert_basis(), &t);
                    let direct = eval_coords(&self.base_generators, &t);
                    let down = apply_exponents(&u, &c.blowdown);
                    worst = worst.max(rel_err_vec(&down, &direct));
                }
            }
        }
        Ok(worst)
    }
}

fn right_inverse(h: &IntMatrix) -> Result<IntMatrix> {
    // h is ds × k with full row rank; solve h * r = identity column-wise
    let ds = h.rows();
    let mut r = IntMatrix::zero(h.cols(), ds);
    for j in 0..ds {
        let mut e = vec![0i64; ds];
        e[j] = 1;
        let sol = solve_integer(h, &e)?.ok_or(Error::NoIntegerSolution)?;
        for (i, c) in sol.iter().enumerate() {
            r[(i, j)] = *c;
        }
    }
    Ok(r)
}

/// Evaluate the coordinates `x_g = Π t_k^{g_k}` of the interior point
/// determined by `t` under the generators `gens`.
pub(crate) fn eval_coords(gens: &[Vec<i64>], t: &[f64]) -> Vec<f64> {
    gens.iter()
        .map(|g| {
            g.iter()
                .zip(t)
                .map(|(&e, &tk)| tk.powi(e as i32))
                .product()
        })
        .collect()
}

/// Apply an exponent matrix: `out_j = Π_i x_i^{m[i][j]}`.
pub(crate) fn apply_exponents(x: &[f64], m: &IntMatrix) -> Vec<f64> {
    (0..m.cols())
        .map(|j| {
            (0..m.rows())
                .map(|i| x[i].powi(m[(i, j)] as i32))
                .product()
        })
        .collect()
}

pub(crate) fn rel_err_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let scale = x.abs().max(y.abs());
            if scale == 0.0 {
                0.0
            } else {
                (x - y).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Blow-up at the level of complexes
// ---------------------------------------------------------------------------

/// The blow-up complex of a base complex along a refinement: the source
/// complex of the refinement together with β_♮ = ψ. Verifies the stratum
/// bookkeeping: the preimage objects of each base object are exactly the
/// source objects whose interior maps into its interior.
pub fn blowup_complex(
    base: &MonoidalComplex,
    refinement: &Refinement,
) -> Result<(MonoidalComplex, ComplexMorphism)> {
    if refinement.target() != base {
        return Err(Error::InvalidRefinement(
            "refinement target is not the given base complex".into(),
        ));
    }
    let m = refinement.morphism();
    for i in 0..refinement.source().objects().len() {
        let hom = m.hom(i);
        let p = hom.apply(&refinement.source().object(i).cone().relative_interior_point())?;
        if !hom.target().cone().contains_relative_interior(&p)? {
            return Err(Error::InvalidRefinement(
                "stratum bookkeeping failed: interior does not map into the target interior"
                    .into(),
            ));
        }
    }
    Ok((refinement.source().clone(), m.clone()))
}

// ---------------------------------------------------------------------------
// Localization of blow-ups
// ---------------------------------------------------------------------------

/// Verification data for one chart of a localized blow-up: the isomorphism
/// `(T^⊥)^{-1} R^∨ ≅ T^∨ × S^gp` built from a splitting of the lattice
/// projection.
#[derive(Debug, Clone)]
pub struct ChartFactorization {
    pub big_chart: usize,
    pub small_chart: usize,
    pub localized: ToricMonoid,
    pub product: ToricMonoid,
    pub to_product: IntMatrix,
    pub from_product: IntMatrix,
}

impl ChartFactorization {
    pub fn verify(&self) -> Result<bool> {
        for h in self.localized.hilbert_basis() {
            let image = self.to_product.mul_vec(h)?;
            if !self.product.contains(&image)? {
                return Ok(false);
            }
            if self.from_product.mul_vec(&image)? != *h {
                return Ok(false);
            }
        }
        for h in self.product.hilbert_basis() {
            let image = self.from_product.mul_vec(h)?;
            if !self.localized.contains(&image)? {
                return Ok(false);
            }
            if self.to_product.mul_vec(&image)? != *h {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone)]
pub struct LocalizedBlowup {
    /// The annihilator face object of the dual complex that hosts the
    /// restricted refinement.
    pub annihilator_object: usize,
    /// The restriction of the refinement morphism to the subcomplex below
    /// the annihilator, revalidated as a refinement.
    pub restricted: Refinement,
    /// The atlas of the blow-up of `X_{P/S}` along the restriction.
    pub atlas: BlowupAtlas,
    pub factorizations: Vec<ChartFactorization>,
}

/// Restrict a blow-up along the localization at a face `S ≤ P`: the
/// refinement restricts to the subcomplex `(P/S)^∨ ≅ S^⊥`, and each chart
/// localizes as `(T^⊥)^{-1}R^∨ ≅ T^∨ × S^gp`.
///
/// The returned atlas is over the quotient of the sharpened
/// full-dimensional model of `P` by the image of `S` (canonically `P/S`),
/// so that the restricted fan lives exactly in its dual complex.
pub fn localize_blowup(
    p: &ToricMonoid,
    s: &FaceHandle,
    refinement: &Refinement,
) -> Result<LocalizedBlowup> {
    let big = blowup_atlas(p, refinement)?;
    localize_blowup_from(&big, s)
}

/// As [`localize_blowup`], reusing an already-built atlas.
pub fn localize_blowup_from(big: &BlowupAtlas, s: &FaceHandle) -> Result<LocalizedBlowup> {
    if s.parent() != &big.base.base {
        return Err(Error::NotAFace);
    }
    let refinement = &big.refinement;
    let base = &big.base;
    let ds = base.dual.rank();
    // the face in the sharp full-dimensional model
    let s_full_cone = Cone::linear_image(&base.to_coords, s.cone())?;
    // annihilator cone A = S^⊥ inside the dual
    let mut ineqs = base.dual.cone().facet_normals().to_vec();
    for r in s_full_cone.rays() {
        ineqs.push(r.clone());
        ineqs.push(arith::vec_neg(r, "localize blowup")?);
    }
    let ann_cone = Cone::from_inequalities(ds, &ineqs)?;
    let ann_object = base
        .face_complex
        .object_of_face_cone(&ann_cone)
        .expect("annihilator is a face of the dual");
    let sub = base.face_complex.subcomplex_below(ann_object);
    let restricted_morphism = restrict_complex(refinement.morphism(), &sub)?;
    let restricted = match validate_refinement(&restricted_morphism)? {
        Ok(r) => r,
        Err(v) => {
            return Err(Error::InvalidRefinement(format!(
                "restriction is not a refinement: {}",
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
            )))
        }
    };

    // exact lattice splitting of the quotient by S in the full-dim model:
    // c_m : Z^ds → Z^ds2 with section σ_m (monomial side); on the dual side
    // the annihilator transports by σ_mᵀ and embeds back by c_mᵀ.
    let s_lattice = s_full_cone.span_lattice()?;
    let lq = crate::lattice::lattice_quotient(ds, &s_lattice)?;
    let c_m = lq.projection.clone().expect("face lattice is saturated");
    let sigma_m = lq.section.clone().expect("face lattice is saturated");
    let ds2 = lq.free_rank;
    let c_n = sigma_m.transpose();
    let ps = ToricMonoid::from_cone(ds2, Cone::linear_image(&c_m, base.sharp_full.cone())?)?;
    let small_base = blowup_base(&ps)?;
    debug_assert!(small_base.to_coords.is_identity());

    let fan2 = {
        let mut maximal: Vec<Cone> = Vec::new();
        for chart in &big.charts {
            let t_cone = chart.fan_cone.intersection(&ann_cone)?;
            if t_cone.dim() == ann_cone.dim() {
                maximal.push(Cone::linear_image(&c_n, &t_cone)?);
            }
        }
        maximal.sort_by(cmp_cones);
        maximal.dedup();
        Fan {
            rank: ds2,
            support: small_base.dual.cone().clone(),
            maximal,
        }
    };
    let small_refinement = refinement_from_fan(&small_base.face_complex, &fan2)?;
    let atlas = blowup_atlas(&ps, &small_refinement)?;

    // chart-level factorizations (T^⊥)^{-1}R^∨ ≅ T^∨ × S^gp
    let r2 = s_lattice.rank();
    let b_k = s_lattice.basis().clone();
    let k_left = if r2 == 0 {
        IntMatrix::zero(0, ds)
    } else {
        left_inverse_on_sublattice(&b_k, &full_lattice(r2))?
    };
    let sc = sigma_m.mul(&c_m)?;
    let mut residual = IntMatrix::identity(ds);
    for i in 0..ds {
        for j in 0..ds {
            residual[(i, j)] = arith::sub(residual[(i, j)], sc[(i, j)], "factorization")?;
        }
    }
    let lower = k_left.mul(&residual)?;
    let mut to_product = IntMatrix::zero(ds2 + r2, ds);
    for i in 0..ds2 {
        for j in 0..ds {
            to_product[(i, j)] = c_m[(i, j)];
        }
    }
    for i in 0..r2 {
        for j in 0..ds {
            to_product[(ds2 + i, j)] = lower[(i, j)];
        }
    }
    let mut from_product = IntMatrix::zero(ds, ds2 + r2);
    for i in 0..ds {
        for j in 0..ds2 {
            from_product[(i, j)] = sigma_m[(i, j)];
        }
        for j in 0..r2 {
            from_product[(i, ds2 + j)] = b_k[(i, j)];
        }
    }
    debug_assert!(to_product.mul(&from_product)?.is_identity());

    let mut factorizations = Vec::new();
    for (bi, chart) in big.charts.iter().enumerate() {
        let t_cone = chart.fan_cone.intersection(&ann_cone)?;
        if t_cone.dim() != ann_cone.dim() {
            continue;
        }
        let t2 = Cone::linear_image(&c_n, &t_cone)?;
        let small_chart = atlas
            .charts
            .iter()
            .position(|c| c.fan_cone == t2)
            .expect("maximal restricted cone is a chart of the localized atlas");
        // localized = (T^⊥)^{-1} chart monoid
        let t_perp = annihilating_face(ds, chart, &t_cone)?;
        let mut rays = chart.monoid.cone().rays().to_vec();
        for r in t_perp.rays() {
            rays.push(arith::vec_neg(r, "chart factorization")?);
        }
        let localized = ToricMonoid::from_rays(ds, &rays)?;
        // product = T^∨ × S^gp with T^∨ the localized atlas chart monoid
        let small_monoid = &atlas.charts[small_chart].monoid;
        let mut prod_rays: Vec<Vec<i64>> = Vec::new();
        for ray in small_monoid.cone().rays() {
            let mut v = ray.clone();
            v.extend(std::iter::repeat(0).take(r2));
            prod_rays.push(v);
        }
        for i in 0..r2 {
            let mut v = vec![0i64; ds2 + r2];
            v[ds2 + i] = 1;
            prod_rays.push(v.clone());
            v[ds2 + i] = -1;
            prod_rays.push(v);
        }
        let product = ToricMonoid::from_rays(ds2 + r2, &prod_rays)?;
        factorizations.push(ChartFactorization {
            big_chart: bi,
            small_chart,
            localized,
            product,
            to_product: to_product.clone(),
            from_product: from_product.clone(),
        });
    }
    Ok(LocalizedBlowup {
        annihilator_object: ann_object,
        restricted,
        atlas,
        factorizations,
    })
}

// ---------------------------------------------------------------------------
// Pullback of refinements
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct PullbackData {
    pub refinement: Refinement,
    /// The universal morphism from the pullback's source complex to the
    /// refinement's source complex.
    pub to_refinement: ComplexMorphism,
    /// For every pullback object, the number of valid interior assignments
    /// into the refinement source (must be 1 everywhere).
    pub assignment_counts: Vec<usize>,
}

/// Pull a refinement back along a morphism of complexes: per source object,
/// the maximal cones are the full-dimensional intersections with preimages
/// of the maximal refinement cones.
pub fn pullback_refinement(
    f_nat: &ComplexMorphism,
    refinement: &Refinement,
) -> Result<PullbackData> {
    if refinement.target() != f_nat.target() {
        return Err(Error::InvalidRefinement(
            "refinement and morphism have different target complexes".into(),
        ));
    }
    let y = f_nat.source();
    let m = refinement.morphism();

    // cells per Y-object
    let mut cells_per_object: Vec<Vec<Cone>> = Vec::new();
    for i in 0..y.objects().len() {
        let sigma = y.object(i).cone();
        let q = f_nat.assigned_target(i);
        let f_i = f_nat.hom(i).matrix();
        let mut maximal: Vec<Cone> = Vec::new();
        for r_obj in refinement.maximal_over(q) {
            let rho = m.hom(r_obj).image_cone();
            let pre = Cone::linear_preimage(f_i, rho)?;
            let cut = sigma.intersection(&pre)?;
            if cut.dim() == sigma.dim() {
                maximal.push(cut);
            }
        }
        maximal.sort_by(cmp_cones);
        maximal.dedup();
        let mut cells: Vec<Cone> = Vec::new();
        for mx in &maximal {
            for f in mx.face_lattice()?.faces() {
                let p = f.cone.relative_interior_point();
                if sigma.contains_relative_interior(&p)? {
                    cells.push(f.cone.clone());
                }
            }
        }
        cells.sort_by(cmp_cones);
        cells.dedup();
        cells_per_object.push(cells);
    }

    // assemble the pullback complex
    let mut objects: Vec<ToricMonoid> = Vec::new();
    let mut embeddings: Vec<IntMatrix> = Vec::new();
    let mut owner: Vec<(usize, usize)> = Vec::new(); // (y object, cell index)
    let mut index_of: Vec<Vec<usize>> = vec![Vec::new(); y.objects().len()];
    for (i, cells) in cells_per_object.iter().enumerate() {
        for c in cells {
            let mono = ToricMonoid::from_cone(y.object(i).rank(), c.clone())?;
            let gc = mono.in_group_coords()?;
            index_of[i].push(objects.len());
            owner.push((i, index_of[i].len() - 1));
            objects.push(gc.monoid);
            embeddings.push(gc.embed);
        }
    }
    let mut arrows: Vec<Arrow> = Vec::new();
    for (obj_idx, &(i, ci)) in owner.iter().enumerate() {
        let cell = &cells_per_object[i][ci];
        for face in cell.face_lattice()?.faces() {
            // locate the base arrow whose image face hosts this cell face
            let sigma = y.object(i).cone();
            let p = face.cone.relative_interior_point();
            let base_arrow = y
                .arrows()
                .iter()
                .find(|a| {
                    a.target == i
                        && a.hom
                            .image_cone()
                            .contains_relative_interior(&p)
                            .unwrap_or(false)
                })
                .ok_or_else(|| {
                    Error::InvalidComplex("no base arrow hosts a pullback cell face".into())
                })?;
            let i2 = base_arrow.source;
            // pull the face back through the injective arrow
            let pre = Cone::linear_preimage(base_arrow.hom.matrix(), &face.cone)?;
            let cell2 = pre.intersection(y.object(i2).cone())?;
            let ci2 = cells_per_object[i2]
                .iter()
                .position(|c| *c == cell2)
                .ok_or_else(|| {
                    Error::InvalidRefinement(
                        "pullback subdivisions are inconsistent across arrows".into(),
                    )
                })?;
            let src_idx = index_of[i2][ci2];
            let w_left = left_inverse(&embeddings[obj_idx])?;
            let matrix = w_left
                .mul(base_arrow.hom.matrix())?
                .mul(&embeddings[src_idx])?;
            debug_assert_eq!(
                embeddings[obj_idx].mul(&matrix)?,
                base_arrow.hom.matrix().mul(&embeddings[src_idx])?
            );
            arrows.push(Arrow {
                source: src_idx,
                target: obj_idx,
                hom: MonoidHom::new(
                    objects[src_idx].clone(),
                    objects[obj_idx].clone(),
                    matrix,
                )?,
            });
            let _ = sigma;
        }
    }
    // deduplicate arrows (identical face relations can be discovered twice)
    let mut seen: Vec<(usize, usize, IntMatrix)> = Vec::new();
    arrows.retain(|a| {
        let key = (a.source, a.target, a.hom.matrix().clone());
        if seen.contains(&key) {
            false
        } else {
            seen.push(key);
            true
        }
    });
    let source = MonoidalComplex::new(objects.clone(), arrows);
    let mut assignment = Vec::new();
    for (obj_idx, &(i, _)) in owner.iter().enumerate() {
        assignment.push((
            i,
            MonoidHom::new(
                objects[obj_idx].clone(),
                y.object(i).clone(),
                embeddings[obj_idx].clone(),
            )?,
        ));
    }
    let morphism = ComplexMorphism::new(source.clone(), y.clone(), assignment);
    let pullback = match validate_refinement(&morphism)? {
        Ok(r) => r,
        Err(v) => {
            return Err(Error::InvalidRefinement(format!(
                "pullback failed validation: {}",
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
            )))
        }
    };

    // universal morphism to the refinement source, with uniqueness counts
    let mut to_assignment = Vec::new();
    let mut counts = Vec::new();
    for (obj_idx, &(i, _)) in owner.iter().enumerate() {
        let q = f_nat.assigned_target(i);
        let f_i = f_nat.hom(i).matrix();
        let image = f_i.mul(&embeddings[obj_idx])?;
        let image_cone = Cone::linear_image(&image, objects[obj_idx].cone())?;
        let p = image_cone.relative_interior_point();
        let mut candidates = Vec::new();
        for r_obj in 0..refinement.source().objects().len() {
            if m.assigned_target(r_obj) != q {
                continue;
            }
            let rho = m.hom(r_obj).image_cone();
            if !rho.contains_relative_interior(&p)? {
                continue;
            }
            // solve ψ_ρ ∘ X = f ∘ emb
            let tau = left_inverse(m.hom(r_obj).matrix())?;
            let x = tau.mul(&image)?;
            if m.hom(r_obj).matrix().mul(&x)? == image {
                candidates.push((r_obj, x));
            }
        }
        counts.push(candidates.len());
        let (r_obj, x) = candidates
            .into_iter()
            .next()
            .ok_or(Error::FactorizationFailed)?;
        to_assignment.push((
            r_obj,
            MonoidHom::new(
                objects[obj_idx].clone(),
                refinement.source().object(r_obj).clone(),
                x,
            )?,
        ));
    }
    let to_refinement = ComplexMorphism::new(source, refinement.source().clone(), to_assignment);
    Ok(PullbackData {
        refinement: pullback,
        to_refinement,
        assignment_counts: counts,
    })
}

// ---------------------------------------------------------------------------
// Resolution driver
// ---------------------------------------------------------------------------

/// Iterated stellar subdivision of the dual fan of a sharp monoid until all
/// maximal cones are smooth, choosing the canonically least non-smooth
/// witness each round. Capped at `RESOLVE_CAP` subdivisions.
pub const RESOLVE_CAP: usize = 64;

pub fn resolve(p: &ToricMonoid) -> Result<Refinement> {
    if !p.is_sharp() {
        return Err(Error::InvalidRefinement(
            "resolution driver requires a sharp monoid".into(),
        ));
    }
    let base = blowup_base(p)?;
    let mut fan = Fan::face_fan(base.dual.cone());
    for _ in 0..RESOLVE_CAP {
        let Some(ray) = next_witness(&fan)? else {
            return refinement_from_fan(&base.face_complex, &fan);
        };
        fan = fan.stellar(&ray)?;
    }
    if next_witness(&fan)?.is_none() {
        return refinement_from_fan(&base.face_complex, &fan);
    }
    Err(Error::IterationCapExceeded { cap: RESOLVE_CAP })
}

/// The subdivision point for the first non-smooth maximal cone in canonical
/// order: its least non-ray Hilbert basis element, falling back to its
/// least ray for non-simplicial cones generated by their rays.
fn next_witness(fan: &Fan) -> Result<Option<Vec<i64>>> {
    for c in fan.maximal_cones() {
        let m = ToricMonoid::from_cone(fan.rank(), c.clone())?;
        if m.is_smooth()? {
            continue;
        }
        for h in m.hilbert_basis() {
            if !c.rays().contains(h) {
                return Ok(Some(h.clone()));
            }
        }
        return Ok(Some(c.rays()[0].clone()));
    }
    Ok(None)
}
