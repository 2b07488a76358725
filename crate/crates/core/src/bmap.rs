//! Combinatorial interior b-maps between model spaces.
//!
//! A monomial map `f : X_P → X_Q` is stored as its exponent matrix `mu` in
//! canonical Hilbert coordinates: one row per domain generator, one column
//! per codomain generator, so that the pullback of the j-th codomain
//! coordinate is `Π_i x_i^{mu[i][j]}`. Composition corresponds to the
//! matrix product `mu_f · mu_g`. Smooth positive prefactors are fixed to 1;
//! all verifiable content (exponents, induced complex morphisms, numeric
//! round trips) survives this restriction.

use crate::arith::{self, SplitMix64};
use crate::blowup::{blowup_base, BlowupAtlas, Refinement};
use crate::complex::{face_complex_of_monoid, ComplexMorphism};
use crate::cone::Cone;
use crate::error::Error;
use crate::lattice::{kernel_basis, left_inverse_on_sublattice, solve_integer, IntMatrix};
use crate::monoid::{full_lattice, FaceHandle, MonoidHom, ToricMonoid};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialMap {
    domain: ToricMonoid,
    codomain: ToricMonoid,
    mu: IntMatrix,
    /// Lattice-level map from the codomain's ambient lattice to the
    /// domain's, well-defined on the codomain's group lattice.
    lattice_map: IntMatrix,
}

/// Validate and build a monomial map from its exponent matrix.
pub fn make_monomial_map(
    domain: ToricMonoid,
    codomain: ToricMonoid,
    mu: IntMatrix,
) -> Result<MonomialMap> {
    let map = build_monomial_map(domain, codomain, mu)?;
    // interiority of the induced dual homomorphism
    let (natural, p_dual_cone, q_dual_cone) = map.natural_map_and_cones()?;
    let interior_point = p_dual_cone.relative_interior_point();
    let image = natural.mul_vec(&interior_point)?;
    if !q_dual_cone.contains_relative_interior(&image)? {
        let selector = q_dual_cone.tight_selector(&[image])?;
        let face = q_dual_cone.face_cone(&selector)?;
        return Err(Error::NonInterior {
            face: format!("{:?}", face.rays()),
        });
    }
    Ok(map)
}

/// Everything except the interiority rejection. Lifts through blow-ups use
/// this: a lifted map is interior as a b-map, but its dual homomorphism may
/// land in the face of the chart dual corresponding to the exceptional
/// locus (the paper's `T^{-1}Q` localization caveat).
fn build_monomial_map(
    domain: ToricMonoid,
    codomain: ToricMonoid,
    mu: IntMatrix,
) -> Result<MonomialMap> {
    let kp = domain.hilbert_basis().len();
    let kq = codomain.hilbert_basis().len();
    if mu.rows() != kp || mu.cols() != kq {
        return Err(Error::DimensionMismatch(format!(
            "exponent matrix is {}x{}, expected {}x{}",
            mu.rows(),
            mu.cols(),
            kp,
            kq
        )));
    }
    let dom_unit = unit_generator_flags(&domain);
    let cod_unit = unit_generator_flags(&codomain);
    for i in 0..kp {
        for j in 0..kq {
            if dom_unit[i] {
                continue;
            }
            if cod_unit[j] {
                // the pullback of an invertible coordinate must stay
                // invertible: no sharp exponents allowed
                if mu[(i, j)] != 0 {
                    return Err(Error::NegativeExponent { row: i, col: j });
                }
            } else if mu[(i, j)] < 0 {
                return Err(Error::NegativeExponent { row: i, col: j });
            }
        }
    }
    // relations of the codomain pull back to relations of the domain
    let h_p = domain.generator_matrix();
    let h_q = codomain.generator_matrix();
    for kappa in kernel_basis(&h_q)? {
        let pulled = mu.mul_vec(&kappa)?;
        let value = h_p.mul_vec(&pulled)?;
        if !arith::is_zero_vec(&value) {
            return Err(Error::ExponentRelationViolation {
                relation: format!("{kappa:?}"),
            });
        }
    }
    // lattice-level map E with E * H_Q = H_P * mu, row by row
    let target = h_p.mul(&mu)?;
    let h_q_t = h_q.transpose();
    let mut lattice_map = IntMatrix::zero(domain.rank(), codomain.rank());
    for r in 0..domain.rank() {
        let row = target.row(r).to_vec();
        let sol = solve_integer(&h_q_t, &row)?.ok_or(Error::NotAMonoidHom)?;
        for (c, v) in sol.iter().enumerate() {
            lattice_map[(r, c)] = *v;
        }
    }
    debug_assert_eq!(lattice_map.mul(&h_q)?, target);
    Ok(MonomialMap {
        domain,
        codomain,
        mu,
        lattice_map,
    })
}

fn unit_generator_flags(m: &ToricMonoid) -> Vec<bool> {
    m.hilbert_basis()
        .iter()
        .map(|g| {
            let neg: Vec<i64> = g.iter().map(|x| -x).collect();
            m.hilbert_basis().contains(&neg)
        })
        .collect()
}

impl MonomialMap {
    pub fn domain(&self) -> &ToricMonoid {
        &self.domain
    }

    pub fn codomain(&self) -> &ToricMonoid {
        &self.codomain
    }

    pub fn exponents(&self) -> &IntMatrix {
        &self.mu
    }

    pub fn lattice_map(&self) -> &IntMatrix {
        &self.lattice_map
    }

    pub fn identity(m: &ToricMonoid) -> Result<MonomialMap> {
        let k = m.hilbert_basis().len();
        make_monomial_map(m.clone(), m.clone(), IntMatrix::identity(k))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &MonomialMap) -> Result<MonomialMap> {
        if other.codomain != self.domain {
            return Err(Error::DimensionMismatch(
                "monomial map composition endpoints do not match".into(),
            ));
        }
        make_monomial_map(
            other.domain.clone(),
            self.codomain.clone(),
            other.mu.mul(&self.mu)?,
        )
    }

    /// Sharp full-dimensional coordinates of both sides, the induced dual
    /// homomorphism (`f_♮ : P^∨ → Q^∨`) and the two dual cones.
    fn natural_map_and_cones(&self) -> Result<(IntMatrix, Cone, Cone)> {
        let (to_p, _, p_full) = sharp_coords(&self.domain)?;
        let (_, from_q, q_full) = sharp_coords(&self.codomain)?;
        let natural = to_p.mul(&self.lattice_map)?.mul(&from_q)?.transpose();
        Ok((natural, p_full.cone().dual(), q_full.cone().dual()))
    }

    /// The single dual homomorphism `f_♮ : P^∨ → Q^∨` as a matrix between
    /// the dual lattices of the sharp full-dimensional models.
    pub fn natural_map(&self) -> Result<IntMatrix> {
        Ok(self.natural_map_and_cones()?.0)
    }

    /// Numeric evaluation at a strictly positive point in Hilbert
    /// coordinates of the domain.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.domain.hilbert_basis().len() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, domain has {} generators",
                x.len(),
                self.domain.hilbert_basis().len()
            )));
        }
        for (i, &v) in x.iter().enumerate() {
            if !(v > 0.0) {
                return Err(Error::NonPositiveCoordinate { index: i });
            }
        }
        check_relations(&self.domain, x)?;
        let out: Vec<f64> = (0..self.mu.cols())
            .map(|j| {
                (0..self.mu.rows())
                    .map(|i| x[i].powi(self.mu[(i, j)] as i32))
                    .product()
            })
            .collect();
        check_relations(&self.codomain, &out)?;
        Ok(out)
    }

    /// Sample a valid strictly positive point of the domain: the Hilbert
    /// coordinates of a random interior homomorphism, so all relations hold
    /// by construction.
    pub fn sample_domain_point(&self, rng: &mut SplitMix64) -> Vec<f64> {
        let rank = self.domain.rank();
        let t: Vec<f64> = (0..rank).map(|_| rng.positive()).collect();
        crate::blowup::eval_coords(self.domain.hilbert_basis(), &t)
    }
}

fn check_relations(m: &ToricMonoid, x: &[f64]) -> Result<()> {
    for rel in &m.presentation()?.relations {
        let lhs: f64 = rel
            .lhs
            .iter()
            .zip(x)
            .map(|(&e, &v)| v.powi(e as i32))
            .product();
        let rhs: f64 = rel
            .rhs
            .iter()
            .zip(x)
            .map(|(&e, &v)| v.powi(e as i32))
            .product();
        let scale = lhs.abs().max(rhs.abs());
        if scale > 0.0 && (lhs - rhs).abs() > 1e-12 * scale {
            return Err(Error::RelationViolation {
                relation: rel.display(),
                lhs,
                rhs,
            });
        }
    }
    Ok(())
}

/// Sharp full-dimensional coordinates of a monoid: (to, from, model) with
/// `to * from = 1` and `model = to(P)` full-dimensional and pointed.
fn sharp_coords(m: &ToricMonoid) -> Result<(IntMatrix, IntMatrix, ToricMonoid)> {
    let dec = m.decompose()?;
    let gc = dec.sharp.in_group_coords()?;
    let to = gc.project.mul(&dec.projection)?;
    let from = dec.section.mul(&gc.embed)?;
    Ok((to, from, gc.monoid))
}

/// The morphism of dual face complexes induced by a monomial map: each face
/// of `P^∨` is assigned to the smallest face of `Q^∨` containing its image.
pub fn induced_morphism(f: &MonomialMap) -> Result<ComplexMorphism> {
    let (_, _, p_full) = sharp_coords(&f.domain)?;
    let (_, _, q_full) = sharp_coords(&f.codomain)?;
    let p_dual = ToricMonoid::from_cone(p_full.rank(), p_full.cone().dual())?;
    let q_dual = ToricMonoid::from_cone(q_full.rank(), q_full.cone().dual())?;
    let fc_p = face_complex_of_monoid(&p_dual)?;
    let fc_q = face_complex_of_monoid(&q_dual)?;
    let natural = f.natural_map()?;
    let mut assignment = Vec::new();
    for (i, emb) in fc_p.embeddings.iter().enumerate() {
        let image = natural.mul(emb)?;
        let image_cone = Cone::linear_image(&image, fc_p.complex.object(i).cone())?;
        let selector = q_dual.cone().tight_selector(&image_cone.rays().to_vec())?;
        let face_cone = q_dual.cone().face_cone(&selector)?;
        let j = fc_q
            .object_of_face_cone(&face_cone)
            .expect("smallest containing face exists");
        let e_left = if fc_q.embeddings[j].cols() == 0 {
            IntMatrix::zero(0, fc_q.embeddings[j].rows())
        } else {
            left_inverse_on_sublattice(&fc_q.embeddings[j], &full_lattice(fc_q.embeddings[j].cols()))?
        };
        let matrix = e_left.mul(&image)?;
        debug_assert_eq!(fc_q.embeddings[j].mul(&matrix)?, image);
        assignment.push((
            j,
            MonoidHom::new(
                fc_p.complex.object(i).clone(),
                fc_q.complex.object(j).clone(),
                matrix,
            )?,
        ));
    }
    Ok(ComplexMorphism::new(
        fc_p.complex,
        fc_q.complex,
        assignment,
    ))
}

/// The unique smallest object of the refinement whose cone contains the
/// image of `f_♮`, if the image lies in a single cone; `None` otherwise.
pub fn factors_through(f: &MonomialMap, refinement: &Refinement) -> Result<Option<usize>> {
    let base = blowup_base(&f.codomain)?;
    if refinement.target() != &base.face_complex.complex {
        return Err(Error::InvalidRefinement(
            "refinement is not over the dual complex of the codomain".into(),
        ));
    }
    let natural = f.natural_map()?;
    let (_, _, p_full) = sharp_coords(&f.domain)?;
    let image_cone = Cone::linear_image(&natural, &p_full.cone().dual())?;
    let top = base.face_complex.top_object();
    let mut best: Option<(usize, usize)> = None; // (dim, object)
    'outer: for i in 0..refinement.source().objects().len() {
        if refinement.morphism().assigned_target(i) != top {
            continue;
        }
        let cone = refinement.morphism().hom(i).image_cone();
        for r in image_cone.rays() {
            if !cone.contains(r)? {
                continue 'outer;
            }
        }
        let dim = cone.dim();
        if best.map_or(true, |(d, _)| dim < d) {
            best = Some((dim, i));
        }
    }
    Ok(best.map(|(_, i)| i))
}

/// A lift of a monomial map through a blow-up: the chosen chart and the
/// lifted map into the chart monoid.
#[derive(Debug, Clone)]
pub struct Lift {
    pub chart: usize,
    pub map: MonomialMap,
}

/// Lift `f : X_P → X_Q` through the blow-up atlas of `X_Q`: requires the
/// induced dual homomorphism to factor through the refinement. The chart is
/// the first (canonical order) whose cone contains the factoring object's
/// image. The lifted exponent matrix satisfies
/// `lifted · blowdown = exponents(f)` exactly.
pub fn lift(f: &MonomialMap, atlas: &BlowupAtlas) -> Result<Lift> {
    let r0 = factors_through(f, &atlas.refinement)?.ok_or(Error::FactorizationFailed)?;
    let r0_cone = atlas.refinement.morphism().hom(r0).image_cone().clone();
    let chart = atlas
        .charts
        .iter()
        .position(|c| {
            r0_cone
                .rays()
                .iter()
                .all(|r| c.fan_cone.contains(r).unwrap_or(false))
        })
        .ok_or(Error::FactorizationFailed)?;
    lift_into(f, atlas, chart)
}

/// Lift into a specific chart; the chart's cone must contain the image of
/// the factoring object.
pub fn lift_into(f: &MonomialMap, atlas: &BlowupAtlas, chart: usize) -> Result<Lift> {
    let chart_monoid = atlas.charts[chart].monoid.clone();
    let blowdown = &atlas.charts[chart].blowdown;

    // lattice images of the chart generators inside the domain monoid
    let from_q = {
        let (_, from, _) = sharp_coords(&f.codomain)?;
        from
    };
    let mut images = Vec::new();
    for g in chart_monoid.hilbert_basis() {
        let v = f.lattice_map.mul_vec(&from_q.mul_vec(g)?)?;
        if !f.domain.contains(&v)? {
            return Err(Error::FactorizationFailed);
        }
        images.push(v);
    }
    // fast path: canonical factorizations
    let kp = f.domain.hilbert_basis().len();
    let mut mu_lift = IntMatrix::zero(kp, images.len());
    for (j, v) in images.iter().enumerate() {
        let coeffs = f.domain.factorize(v)?.ok_or(Error::FactorizationFailed)?;
        for (i, c) in coeffs.iter().enumerate() {
            mu_lift[(i, j)] = *c;
        }
    }
    // the exponent columns of f, reindexed to the atlas base generators
    let mu_f = reindex_to_base(f, atlas)?;
    if mu_lift.mul(blowdown)? != mu_f {
        mu_lift = search_exact_lift(f, &images, blowdown, &mu_f)?;
    }
    let map = build_monomial_map(f.domain.clone(), chart_monoid, mu_lift)?;
    Ok(Lift { chart, map })
}

/// Build the atlas for a refinement of the codomain's dual complex and lift
/// through it.
pub fn lift_through(f: &MonomialMap, refinement: &Refinement) -> Result<(BlowupAtlas, Lift)> {
    let atlas = crate::blowup::blowup_atlas(&f.codomain, refinement)?;
    let lifted = lift(f, &atlas)?;
    Ok((atlas, lifted))
}

/// Columns of `exponents(f)` reindexed from the codomain Hilbert basis to
/// the atlas base generators (the sharp generators in model coordinates).
/// Unit generators of the codomain have no column in the atlas.
fn reindex_to_base(f: &MonomialMap, atlas: &BlowupAtlas) -> Result<IntMatrix> {
    let to_q = &atlas.base.to_coords;
    let mut out = IntMatrix::zero(f.mu.rows(), atlas.base_generators.len());
    for (j, g) in f.codomain.hilbert_basis().iter().enumerate() {
        let image = to_q.mul_vec(g)?;
        if arith::is_zero_vec(&image) {
            continue; // unit generator
        }
        let col = atlas
            .base_generators
            .iter()
            .position(|b| *b == image)
            .ok_or_else(|| Error::DimensionMismatch("generator/base mismatch".into()))?;
        for i in 0..f.mu.rows() {
            out[(i, col)] = f.mu[(i, j)];
        }
    }
    Ok(out)
}

/// Exhaustive search for a nonnegative lift matrix that satisfies both the
/// lattice identity (each column factorizes the chart generator's image)
/// and the exact matrix identity with the blow-down. Needed only when the
/// domain has relations and the canonical factorizations disagree.
fn search_exact_lift(
    f: &MonomialMap,
    images: &[Vec<i64>],
    blowdown: &IntMatrix,
    mu_f: &IntMatrix,
) -> Result<IntMatrix> {
    let kp = f.domain.hilbert_basis().len();
    let choices: Vec<Vec<Vec<i64>>> = images
        .iter()
        .map(|v| enumerate_factorizations(&f.domain, v))
        .collect::<Result<Vec<_>>>()?;
    let cols = images.len();
    let mut pick = vec![0usize; cols];
    fn feasible(
        pick: &[usize],
        upto: usize,
        choices: &[Vec<Vec<i64>>],
        blowdown: &IntMatrix,
        mu_f: &IntMatrix,
        complete: bool,
    ) -> bool {
        for r in 0..mu_f.rows() {
            for j in 0..mu_f.cols() {
                let mut acc = 0i64;
                for i in 0..upto {
                    acc += choices[i][pick[i]][r] * blowdown[(i, j)];
                }
                if acc > mu_f[(r, j)] || (complete && acc != mu_f[(r, j)]) {
                    return false;
                }
            }
        }
        true
    }
    fn go(
        idx: usize,
        pick: &mut Vec<usize>,
        choices: &[Vec<Vec<i64>>],
        blowdown: &IntMatrix,
        mu_f: &IntMatrix,
    ) -> bool {
        if idx == choices.len() {
            return feasible(pick, idx, choices, blowdown, mu_f, true);
        }
        for c in 0..choices[idx].len() {
            pick[idx] = c;
            if feasible(pick, idx + 1, choices, blowdown, mu_f, false)
                && go(idx + 1, pick, choices, blowdown, mu_f)
            {
                return true;
            }
        }
        false
    }
    if !go(0, &mut pick, &choices, blowdown, mu_f) {
        return Err(Error::FactorizationFailed);
    }
    let mut mu = IntMatrix::zero(kp, cols);
    for (j, &c) in pick.iter().enumerate() {
        for i in 0..kp {
            mu[(i, j)] = choices[j][c][i];
        }
    }
    debug_assert_eq!(mu.mul(blowdown)?, *mu_f);
    Ok(mu)
}

/// All nonnegative factorizations of a monoid element over the Hilbert
/// basis, canonically ordered.
fn enumerate_factorizations(m: &ToricMonoid, v: &[i64]) -> Result<Vec<Vec<i64>>> {
    let gens = m.hilbert_basis();
    let cone = m.cone();
    let phi = cone.dual().relative_interior_point();
    let mut out = Vec::new();
    fn go(
        cone: &Cone,
        gens: &[Vec<i64>],
        phi: &[i64],
        v: Vec<i64>,
        idx: usize,
        prefix: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) -> Result<()> {
        if arith::is_zero_vec(&v) {
            let mut full = prefix.clone();
            full.resize(gens.len(), 0);
            out.push(full);
            // keep exploring: other tails may also reach zero with
            // nonzero coefficients
        }
        if idx == gens.len() {
            return Ok(());
        }
        let g = &gens[idx];
        let phi_g = arith::dot(phi, g, "lift search")?;
        if phi_g <= 0 {
            prefix.push(0);
            go(cone, gens, phi, v, idx + 1, prefix, out)?;
            prefix.pop();
            return Ok(());
        }
        let max_k = arith::dot(phi, &v, "lift search")? / phi_g;
        for k in (0..=max_k).rev() {
            let rest = arith::vec_sub(&v, &arith::vec_scale(k, g, "lift search")?, "lift search")?;
            if !cone.contains(&rest)? {
                continue;
            }
            prefix.push(k);
            go(cone, gens, phi, rest, idx + 1, prefix, out)?;
            prefix.pop();
        }
        Ok(())
    }
    if !m.is_sharp() {
        // lifting into charts only ever needs pointed domains here
        return Err(Error::FactorizationFailed);
    }
    let mut prefix = Vec::new();
    go(cone, gens, &phi, v.to_vec(), 0, &mut prefix, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Numeric round trip of a lift: max relative error of
/// `blowdown(lift(x))` against `f(x)` over sampled interior points.
pub fn verify_lift_numeric(
    f: &MonomialMap,
    atlas: &BlowupAtlas,
    lifted: &Lift,
    seed: u64,
    points: usize,
) -> Result<f64> {
    let mut rng = SplitMix64::new(seed);
    let blowdown = &atlas.charts[lifted.chart].blowdown;
    let mu_f = reindex_to_base(f, atlas)?;
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let x = f.sample_domain_point(&mut rng);
        let up = lifted.map.evaluate(&x)?;
        let down = crate::blowup::apply_exponents(&up, blowdown);
        let direct = crate::blowup::apply_exponents(&x, &mu_f);
        worst = worst.max(crate::blowup::rel_err_vec(&down, &direct));
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Tangent data
// ---------------------------------------------------------------------------

/// The induced map of b-tangent spaces `Hom(P;R) → Hom(Q;R)` in the
/// canonical group-lattice bases. Integral by construction; rank and
/// surjectivity are decided exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentMatrix {
    pub matrix: IntMatrix,
}

impl TangentMatrix {
    pub fn rank(&self) -> Result<usize> {
        self.matrix.rank()
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.matrix.rank()? == self.matrix.rows())
    }
}

pub fn tangent_map(f: &MonomialMap) -> Result<TangentMatrix> {
    let (to_p, from_p, _) = sharp_coords_with_units(&f.domain)?;
    let (to_q, from_q, _) = sharp_coords_with_units(&f.codomain)?;
    let _ = (to_q, from_p);
    // group-level action of the exponent map, transposed to act on tangent
    // vectors: Hom(P;R) → Hom(Q;R)
    let m_side = to_p.mul(&f.lattice_map)?.mul(&from_q)?;
    Ok(TangentMatrix {
        matrix: m_side.transpose(),
    })
}

/// Group coordinates including units: the full group lattice of the monoid,
/// not just the sharp part.
fn sharp_coords_with_units(m: &ToricMonoid) -> Result<(IntMatrix, IntMatrix, ToricMonoid)> {
    let gc = m.in_group_coords()?;
    Ok((gc.project, gc.embed, gc.monoid))
}

/// b-étale: the b-tangent map is a lattice isomorphism everywhere.
pub fn is_b_etale(f: &MonomialMap) -> Result<bool> {
    let t = tangent_map(f)?;
    if t.matrix.rows() != t.matrix.cols() {
        return Ok(false);
    }
    Ok(t.matrix.det()?.abs() == 1)
}

/// b-transversality of two maps with a common codomain: the stacked
/// tangent matrix has full row rank.
pub fn is_b_transverse(f: &MonomialMap, g: &MonomialMap) -> Result<bool> {
    if f.codomain != g.codomain {
        return Err(Error::DimensionMismatch(
            "transversality requires a common codomain".into(),
        ));
    }
    let tf = tangent_map(f)?.matrix;
    let tg = tangent_map(g)?.matrix;
    let rows = tf.rows();
    let mut stacked = IntMatrix::zero(rows, tf.cols() + tg.cols());
    for i in 0..rows {
        for j in 0..tf.cols() {
            stacked[(i, j)] = tf[(i, j)];
        }
        for j in 0..tg.cols() {
            stacked[(i, tf.cols() + j)] = tg[(i, j)];
        }
    }
    Ok(stacked.rank()? == rows)
}

// ---------------------------------------------------------------------------
// Normal monoid data for face chains
// ---------------------------------------------------------------------------

/// For faces `G ≤ F` of `P`: the normal monoids `W(F)^∨ ≅ S^⊥` and
/// `W(G)^∨ ≅ T^⊥` as standalone monoids, with the face embedding between
/// them and the verified isomorphism with the quotient duals.
#[derive(Debug, Clone)]
pub struct NormalMonoidData {
    pub f_dual: ToricMonoid,
    pub g_dual: ToricMonoid,
    pub embedding: MonoidHom,
}

pub fn normal_monoid_data(
    p: &ToricMonoid,
    g: &FaceHandle,
    f: &FaceHandle,
) -> Result<NormalMonoidData> {
    if !g.leq(f) {
        return Err(Error::NotAFace);
    }
    let ann_f = p.annihilator(f)?;
    let ann_g = p.annihilator(g)?;
    let (f_dual, w_f) = ann_f.standalone()?;
    let (g_dual, w_g) = ann_g.standalone()?;
    let w_g_left = if w_g.cols() == 0 {
        IntMatrix::zero(0, w_g.rows())
    } else {
        left_inverse_on_sublattice(&w_g, &full_lattice(w_g.cols()))?
    };
    let matrix = w_g_left.mul(&w_f)?;
    debug_assert_eq!(w_g.mul(&matrix)?, w_f);
    let embedding = MonoidHom::new(f_dual.clone(), g_dual.clone(), matrix)?;
    if !embedding.is_iso_onto_face() {
        return Err(Error::NotAFace);
    }
    // cross-check against the quotient dual: (P/S)^∨ ≅ S^⊥ with the same
    // Hilbert basis size and dimension
    let quot = p.quotient_by_face(f)?.quotient;
    let quot_dual = quot.dual()?;
    debug_assert_eq!(quot_dual.dim(), f_dual.dim());
    debug_assert_eq!(
        quot_dual.hilbert_basis().len(),
        f_dual.hilbert_basis().len()
    );
    Ok(NormalMonoidData {
        f_dual,
        g_dual,
        embedding,
    })
}

/// The blow-down of a chart as a monomial map from the chart monoid to the
/// sharp full-dimensional model of the base.
pub fn blowdown_map(atlas: &BlowupAtlas, chart: usize) -> Result<MonomialMap> {
    make_monomial_map(
        atlas.charts[chart].monoid.clone(),
        atlas.base.sharp_full.clone(),
        atlas.charts[chart].blowdown.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{blowup_atlas, stellar_subdivision};
    use crate::complex::validate_morphism;

    fn n() -> ToricMonoid {
        ToricMonoid::standard(1)
    }

    fn n2() -> ToricMonoid {
        ToricMonoid::standard(2)
    }

    fn corner_atlas() -> BlowupAtlas {
        let base = blowup_base(&n2()).unwrap();
        let r = stellar_subdivision(&base.face_complex, &[1, 1]).unwrap();
        blowup_atlas(&n2(), &r).unwrap()
    }

    #[test]
    fn diagonal_map_is_interior() {
        let f = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 1]])).unwrap();
        assert!(is_b_etale(&f).unwrap() == false);
        assert_eq!(f.evaluate(&[2.0]).unwrap(), vec![2.0, 2.0]);
    }

    #[test]
    fn axis_map_is_rejected() {
        let err = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 0]]));
        assert!(matches!(err, Err(Error::NonInterior { .. })));
    }

    #[test]
    fn identity_map_is_valid() {
        let f = MonomialMap::identity(&n2()).unwrap();
        assert!(is_b_etale(&f).unwrap());
        assert_eq!(f.evaluate(&[0.5, 3.0]).unwrap(), vec![0.5, 3.0]);
    }

    #[test]
    fn relation_violation_is_rejected() {
        // A1 dual has the relation g1 + g3 = 2 g2; exponents (1,1,2) break it
        let a1d = ToricMonoid::from_rays(2, &[vec![0, 1], vec![2, -1]]).unwrap();
        let err = make_monomial_map(
            n(),
            a1d.clone(),
            IntMatrix::from_rows(vec![vec![1, 1, 2]]),
        );
        assert!(matches!(err, Err(Error::ExponentRelationViolation { .. })));
        // while (1,1,1) respects it: t ↦ (t, t, t) with t·t = t²
        assert!(make_monomial_map(n(), a1d, IntMatrix::from_rows(vec![vec![1, 1, 1]])).is_ok());
    }

    #[test]
    fn evaluate_respects_corner_blowdown() {
        let atlas = corner_atlas();
        let b = blowdown_map(&atlas, 0).unwrap();
        // chart 1: (u, v) ↦ (uv, v)
        assert_eq!(b.evaluate(&[3.0, 5.0]).unwrap(), vec![15.0, 5.0]);
    }

    #[test]
    fn induced_morphism_of_identity_and_diag() {
        let id = MonomialMap::identity(&n2()).unwrap();
        let m = induced_morphism(&id).unwrap();
        assert!(validate_morphism(&m).unwrap().is_empty());
        for (i, (t, hom)) in m.assignment().iter().enumerate() {
            assert_eq!(i, *t);
            assert!(hom.matrix().is_identity());
        }

        let diag = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 1]])).unwrap();
        let m = induced_morphism(&diag).unwrap();
        assert!(validate_morphism(&m).unwrap().is_empty());
        // the ray object of P^∨ goes into the 2-dimensional object of Q^∨
        let ray_obj = m
            .source()
            .objects()
            .iter()
            .position(|o| o.dim() == 1)
            .unwrap();
        let target = m.assignment()[ray_obj].0;
        assert_eq!(m.target().object(target).dim(), 2);
    }

    #[test]
    fn functoriality_of_induced_morphism() {
        let diag = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 1]])).unwrap();
        let sq = make_monomial_map(
            n2(),
            n2(),
            IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]),
        )
        .unwrap();
        let composed = sq.compose(&diag).unwrap();
        let lhs = induced_morphism(&composed).unwrap();
        let rhs = induced_morphism(&sq)
            .unwrap()
            .compose(&induced_morphism(&diag).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn factors_through_examples() {
        let base = blowup_base(&n2()).unwrap();
        let r = stellar_subdivision(&base.face_complex, &[1, 1]).unwrap();

        // 1 ↦ (1,1): image is the shared ray
        let diag = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 1]])).unwrap();
        let r0 = factors_through(&diag, &r).unwrap().unwrap();
        assert_eq!(
            r.morphism().hom(r0).image_cone(),
            &Cone::from_rays(2, &[vec![1, 1]]).unwrap()
        );

        // 1 ↦ (1,2): interior of the upper cone
        let skew = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 2]])).unwrap();
        let r0 = factors_through(&skew, &r).unwrap().unwrap();
        assert_eq!(
            r.morphism().hom(r0).image_cone(),
            &Cone::from_rays(2, &[vec![0, 1], vec![1, 1]]).unwrap()
        );

        // the identity does not factor: N² is not inside a single cone
        let id = MonomialMap::identity(&n2()).unwrap();
        assert_eq!(factors_through(&id, &r).unwrap(), None);
    }

    #[test]
    fn lift_examples() {
        let atlas = corner_atlas();

        // f(t) = (t,t) lifts into chart 1 as t ↦ (1, t)
        let diag = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 1]])).unwrap();
        let lifted = lift(&diag, &atlas).unwrap();
        assert_eq!(lifted.chart, 0);
        assert_eq!(
            lifted.map.exponents(),
            &IntMatrix::from_rows(vec![vec![0, 1]])
        );
        assert!(verify_lift_numeric(&diag, &atlas, &lifted, 0, 50).unwrap() <= 1e-12);

        // f(t) = (t,t²) lifts into chart 2 as t ↦ (t, t)
        let skew = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 2]])).unwrap();
        let lifted = lift(&skew, &atlas).unwrap();
        assert_eq!(lifted.chart, 1);
        assert_eq!(
            lifted.map.exponents(),
            &IntMatrix::from_rows(vec![vec![1, 1]])
        );

        // lifting a blow-down recovers the identity
        let b0 = blowdown_map(&atlas, 0).unwrap();
        let lifted = lift(&b0, &atlas).unwrap();
        assert_eq!(lifted.chart, 0);
        assert!(lifted.map.exponents().is_identity());
    }

    #[test]
    fn lift_is_exact_against_blowdown() {
        let atlas = corner_atlas();
        let diag = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 1]])).unwrap();
        let lifted = lift(&diag, &atlas).unwrap();
        let product = lifted
            .map
            .exponents()
            .mul(&atlas.charts[lifted.chart].blowdown)
            .unwrap();
        assert_eq!(product, *diag.exponents());
    }

    #[test]
    fn tangent_examples() {
        let atlas = corner_atlas();
        for c in 0..atlas.charts.len() {
            let b = blowdown_map(&atlas, c).unwrap();
            assert!(is_b_etale(&b).unwrap());
        }

        let id = MonomialMap::identity(&n2()).unwrap();
        assert!(is_b_transverse(&id, &id).unwrap());

        let diag = make_monomial_map(n(), n2(), IntMatrix::from_rows(vec![vec![1, 1]])).unwrap();
        assert!(!is_b_transverse(&diag, &diag).unwrap());
    }

    #[test]
    fn normal_monoid_chain() {
        let p = n2();
        let faces = p.faces().unwrap();
        let corner = faces[0].clone();
        let axis = faces
            .iter()
            .find(|f| f.dim() == 1 && f.cone().rays() == [vec![1, 0]])
            .unwrap()
            .clone();
        let data = normal_monoid_data(&p, &corner, &axis).unwrap();
        // W(axis)^∨ = N embeds into W(corner)^∨ = N² onto a face
        assert_eq!(data.f_dual.dim(), 1);
        assert_eq!(data.g_dual.dim(), 2);
        assert!(data.embedding.is_iso_onto_face());

        // F = G: identity embedding
        let data = normal_monoid_data(&p, &axis, &axis).unwrap();
        assert!(data.embedding.matrix().is_identity());

        // F = P: the zero monoid into W(G)^∨
        let whole = faces.last().unwrap().clone();
        let data = normal_monoid_data(&p, &axis, &whole).unwrap();
        assert_eq!(data.f_dual.dim(), 0);
        assert!(data.embedding.is_iso_onto_face());
    }
}
