//! Toric monoids and their algebra.
//!
//! A monoid is stored as a canonical cone in `Z^rank`; the monoid itself is
//! the set of lattice points of the cone. Storing the cone makes the toric
//! axioms structural: the monoid is automatically finitely generated,
//! integral, torsion-free and saturated. The Hilbert basis and the group
//! lattice are computed eagerly at construction.

use std::collections::BTreeSet;

use crate::arith::{self, graded_colex};
use crate::cone::Cone;
use crate::error::Error;
use crate::lattice::{
    kernel_basis, lattice_quotient, left_inverse_on_sublattice, solve_integer, IntMatrix,
    Sublattice,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricMonoid {
    rank: usize,
    cone: Cone,
    hilbert_basis: Vec<Vec<i64>>,
    group_lattice: Sublattice,
}

impl ToricMonoid {
    pub fn from_cone(rank: usize, cone: Cone) -> Result<Self> {
        assert_eq!(cone.rank(), rank);
        let hilbert_basis = hilbert_basis_of(&cone)?;
        let group_lattice = cone.span_lattice()?;
        Ok(Self {
            rank,
            cone,
            hilbert_basis,
            group_lattice,
        })
    }

    pub fn from_rays(rank: usize, rays: &[Vec<i64>]) -> Result<Self> {
        Self::from_cone(rank, Cone::from_rays(rank, rays)?)
    }

    /// The free monoid `N^n`.
    pub fn standard(n: usize) -> Self {
        let rays: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut e = vec![0i64; n];
                e[i] = 1;
                e
            })
            .collect();
        Self::from_rays(n, &rays).expect("standard monoid")
    }

    /// `N^n × Z^m`.
    pub fn mixed(n: usize, m: usize) -> Self {
        let rank = n + m;
        let mut rays = Vec::new();
        for i in 0..n {
            let mut e = vec![0i64; rank];
            e[i] = 1;
            rays.push(e);
        }
        for i in n..rank {
            let mut e = vec![0i64; rank];
            e[i] = 1;
            rays.push(e.clone());
            e[i] = -1;
            rays.push(e);
        }
        Self::from_rays(rank, &rays).expect("mixed monoid")
    }

    /// The zero monoid in the given ambient rank.
    pub fn zero(rank: usize) -> Self {
        Self::from_rays(rank, &[]).expect("zero monoid")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn is_sharp(&self) -> bool {
        self.cone.is_pointed()
    }

    /// Minimal generating set, in canonical order.
    pub fn hilbert_basis(&self) -> &[Vec<i64>] {
        &self.hilbert_basis
    }

    /// `P^gp` as a saturated sublattice of the ambient lattice.
    pub fn group_lattice(&self) -> &Sublattice {
        &self.group_lattice
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        self.cone.contains(v)
    }

    /// Generator matrix: columns are the Hilbert basis elements.
    pub fn generator_matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(self.rank, &self.hilbert_basis)
    }

    /// The monoid in coordinates of its group lattice: a full-dimensional
    /// monoid together with the embedding `w` (coords → ambient) and its
    /// left inverse (ambient span → coords).
    pub fn in_group_coords(&self) -> Result<GroupCoords> {
        let d = self.group_lattice.rank();
        let w = self.group_lattice.basis().clone();
        let full_d = full_lattice(d);
        let w_left = if d == 0 {
            IntMatrix::zero(0, self.rank)
        } else {
            left_inverse_on_sublattice(&w, &full_d)?
        };
        let coords_cone = Cone::linear_image(&w_left, &self.cone)?;
        let monoid = ToricMonoid::from_cone(d, coords_cone)?;
        Ok(GroupCoords {
            monoid,
            embed: w,
            project: w_left,
        })
    }

    /// The dual monoid `Hom(P; N)`, realized in the dual of the group
    /// lattice (rank = dim P). Always sharp.
    pub fn dual(&self) -> Result<ToricMonoid> {
        let gc = self.in_group_coords()?;
        ToricMonoid::from_cone(gc.monoid.rank(), gc.monoid.cone().dual())
    }

    /// Face lattice, ordered by (dimension, canonical rays); the minimal
    /// face is the group of units and the maximal face is the monoid.
    pub fn faces(&self) -> Result<Vec<FaceHandle>> {
        let fl = self.cone.face_lattice()?;
        Ok(fl
            .faces()
            .iter()
            .map(|f| FaceHandle {
                parent: self.clone(),
                selector: f.selector.clone(),
                cone: f.cone.clone(),
                codim: f.codim,
            })
            .collect())
    }

    pub fn face_by_selector(&self, selector: &BTreeSet<usize>) -> Result<FaceHandle> {
        let cone = self.cone.face_cone(selector)?;
        // the handle must carry the closed selector of the actual face
        let closed = self.cone.tight_selector(&cone.rays().to_vec())?;
        if &closed != selector {
            return Err(Error::NotAFace);
        }
        Ok(FaceHandle {
            parent: self.clone(),
            selector: closed,
            codim: self.dim() - cone.dim(),
            cone,
        })
    }

    /// The smallest face containing the given monoid elements.
    pub fn smallest_face_containing(&self, vs: &[Vec<i64>]) -> Result<FaceHandle> {
        for v in vs {
            if !self.contains(v)? {
                return Err(Error::NotInMonoid);
            }
        }
        let selector = self.cone.tight_selector(vs)?;
        let cone = self.cone.face_cone(&selector)?;
        Ok(FaceHandle {
            parent: self.clone(),
            selector,
            codim: self.dim() - cone.dim(),
            cone,
        })
    }

    /// Units, sharpening, group, splitting `P ≅ P^♯ × P^×`, smoothness.
    pub fn decompose(&self) -> Result<Decomposition> {
        let units = self.cone.lineality()?;
        let quot = lattice_quotient(self.rank, &units)?;
        let proj = quot.projection.clone().expect("units lattice is saturated");
        let sect = quot.section.clone().expect("units lattice is saturated");
        let sharp_cone = Cone::linear_image(&proj, &self.cone)?;
        let sharp = ToricMonoid::from_cone(quot.free_rank, sharp_cone)?;
        debug_assert!(sharp.is_sharp());
        let is_smooth = sharp.sharp_part_is_free()?;
        Ok(Decomposition {
            units,
            sharp,
            group: self.group_lattice.clone(),
            projection: proj,
            section: sect,
            is_smooth,
        })
    }

    /// For a sharp monoid: is the Hilbert basis a lattice basis of the
    /// group?
    fn sharp_part_is_free(&self) -> Result<bool> {
        debug_assert!(self.is_sharp());
        if self.hilbert_basis.len() != self.dim() {
            return Ok(false);
        }
        if self.hilbert_basis.is_empty() {
            return Ok(true);
        }
        let gen_lattice = Sublattice::from_generators(self.rank, &self.hilbert_basis)?;
        Ok(gen_lattice == self.group_lattice)
    }

    pub fn is_smooth(&self) -> Result<bool> {
        Ok(self.decompose()?.is_smooth)
    }

    /// Localization of the monoid at a face: the cone grows by the negated
    /// face, the map is the identity on the ambient lattice.
    pub fn localize(&self, face: &FaceHandle) -> Result<(ToricMonoid, MonoidHom)> {
        face.check_parent(self)?;
        let mut rays = self.cone.rays().to_vec();
        for r in face.cone.rays() {
            rays.push(arith::vec_neg(r, "localize")?);
        }
        let localized = ToricMonoid::from_rays(self.rank, &rays)?;
        let iota = MonoidHom::new(self.clone(), localized.clone(), IntMatrix::identity(self.rank))?;
        Ok((localized, iota))
    }

    /// The groupification `P^gp = P^{-1}P` as a monoid.
    pub fn groupification(&self) -> Result<ToricMonoid> {
        let faces = self.faces()?;
        let top = faces.last().expect("a monoid has at least one face");
        Ok(self.localize(top)?.0)
    }

    /// Quotient by a face: the image of the monoid in `P^gp / S^gp`,
    /// together with the projection hom and the splitting
    /// `S^{-1}P ≅ P/S × S^gp`.
    pub fn quotient_by_face(&self, face: &FaceHandle) -> Result<QuotientByFace> {
        face.check_parent(self)?;
        let s_lattice = face.cone.span_lattice()?;
        let quot = lattice_quotient(self.rank, &s_lattice)?;
        if !quot.torsion.is_empty() {
            // cannot occur: face lattices of saturated monoids are saturated
            return Err(Error::TorsionQuotient);
        }
        let proj = quot.projection.clone().expect("free quotient");
        let sect = quot.section.clone().expect("free quotient");
        let q_cone = Cone::linear_image(&proj, &self.cone)?;
        let quotient = ToricMonoid::from_cone(quot.free_rank, q_cone)?;
        debug_assert!(quotient.is_sharp());
        let projection = MonoidHom::new(self.clone(), quotient.clone(), proj.clone())?;
        let splitting = self.face_splitting(face, &quotient, &proj, &sect, &s_lattice)?;
        Ok(QuotientByFace {
            quotient,
            projection,
            splitting,
        })
    }

    /// Assemble the splitting `S^{-1}P ≅ P/S × S^gp` from a section of the
    /// lattice projection.
    fn face_splitting(
        &self,
        face: &FaceHandle,
        quotient: &ToricMonoid,
        proj: &IntMatrix,
        sect: &IntMatrix,
        s_lattice: &Sublattice,
    ) -> Result<FaceSplitting> {
        let (localized, _) = self.localize(face)?;
        let n = self.rank;
        let q = quotient.rank();
        let r = s_lattice.rank();
        let b = s_lattice.basis().clone();
        let b_left = if r == 0 {
            IntMatrix::zero(0, n)
        } else {
            left_inverse_on_sublattice(&b, &full_lattice(r))?
        };
        // to_product = [ proj ; b_left (1 - sect proj) ]
        let sp = sect.mul(proj)?;
        let mut residual = IntMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                residual[(i, j)] = arith::sub(residual[(i, j)], sp[(i, j)], "splitting")?;
            }
        }
        let lower = b_left.mul(&residual)?;
        let mut to_product = IntMatrix::zero(q + r, n);
        for i in 0..q {
            for j in 0..n {
                to_product[(i, j)] = proj[(i, j)];
            }
        }
        for i in 0..r {
            for j in 0..n {
                to_product[(q + i, j)] = lower[(i, j)];
            }
        }
        // from_product = [ sect | b ]
        let mut from_product = IntMatrix::zero(n, q + r);
        for i in 0..n {
            for j in 0..q {
                from_product[(i, j)] = sect[(i, j)];
            }
            for j in 0..r {
                from_product[(i, q + j)] = b[(i, j)];
            }
        }
        // product monoid: quotient cone × S^gp
        let mut prod_rays: Vec<Vec<i64>> = Vec::new();
        for ray in quotient.cone().rays() {
            let mut v = ray.clone();
            v.extend(std::iter::repeat(0).take(r));
            prod_rays.push(v);
        }
        for i in 0..r {
            let mut v = vec![0i64; q + r];
            v[q + i] = 1;
            prod_rays.push(v.clone());
            v[q + i] = -1;
            prod_rays.push(v);
        }
        let product = ToricMonoid::from_rays(q + r, &prod_rays)?;
        Ok(FaceSplitting {
            localized,
            product,
            to_product,
            from_product,
        })
    }

    /// The annihilator face `S^⊥ ≤ P^∨`.
    pub fn annihilator(&self, face: &FaceHandle) -> Result<FaceHandle> {
        face.check_parent(self)?;
        let dual = self.dual()?;
        let gc = self.in_group_coords()?;
        let mut ineqs = dual.cone().facet_normals().to_vec();
        for r in face.cone.rays() {
            let c = gc.project.mul_vec(r)?;
            ineqs.push(c.clone());
            ineqs.push(arith::vec_neg(&c, "annihilator")?);
        }
        let ann_cone = Cone::from_inequalities(dual.rank(), &ineqs)?;
        let selector = dual.cone().tight_selector(&ann_cone.rays().to_vec())?;
        dual.face_by_selector(&selector)
    }

    /// A witness `q ∈ S^⊥` with `q(p) ≠ 0` for `p ∈ P \ S`: the relative
    /// interior point of the annihilator always works.
    pub fn annihilator_witness(&self, face: &FaceHandle, p: &[i64]) -> Result<Vec<i64>> {
        if !self.contains(p)? {
            return Err(Error::NotInMonoid);
        }
        if face.cone.contains(p)? {
            return Err(Error::NotAFace);
        }
        let ann = self.annihilator(face)?;
        let q = ann.cone.relative_interior_point();
        debug_assert_ne!(self.pair_with_dual(&q, p)?, 0);
        Ok(q)
    }

    /// Evaluate a dual element (in dual/group coordinates) on a monoid
    /// element (in ambient coordinates).
    pub fn pair_with_dual(&self, dual_elt: &[i64], p: &[i64]) -> Result<i64> {
        let gc = self.in_group_coords()?;
        let coords = gc.project.mul_vec(p)?;
        arith::dot(dual_elt, &coords, "dual pairing")
    }

    /// The explicit double-dual isomorphism `P^♯ ≅ (P^∨)^∨` as a hom of
    /// monoids (from the sharp part onto the double dual).
    pub fn double_dual_iso(&self) -> Result<MonoidHom> {
        let dec = self.decompose()?;
        let dual = self.dual()?;
        let dual_gc = dual.in_group_coords()?;
        let double = ToricMonoid::from_cone(dual_gc.monoid.rank(), dual_gc.monoid.cone().dual())?;
        let gc = self.in_group_coords()?;
        // sharp part -> ambient (section of the unit projection) -> group
        // coords of P -> evaluation functional restricted to (P^∨)^gp
        let w2t = dual_gc.embed.transpose();
        let matrix = w2t.mul(&gc.project)?.mul(&dec.section)?;
        MonoidHom::new(dec.sharp.clone(), double, matrix)
    }

    /// N-factorization of a monoid element over the Hilbert basis,
    /// deterministic (largest multiple of the earliest generator first).
    pub fn factorize(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        if self.is_sharp() {
            return factorize_pointed(&self.cone, &self.hilbert_basis, v);
        }
        // split off units: factor the sharp image, subtract the lift, and
        // express the unit-lattice residue over the ± pairs in the basis
        let dec = self.decompose()?;
        let image = dec.projection.mul_vec(v)?;
        let sharp_coeffs =
            match factorize_pointed(dec.sharp.cone(), dec.sharp.hilbert_basis(), &image)? {
                Some(c) => c,
                None => return Ok(None),
            };
        let units = &dec.units;
        let mut coeffs = vec![0i64; self.hilbert_basis.len()];
        let mut residual = v.to_vec();
        for (h_sharp, c) in dec.sharp.hilbert_basis().iter().zip(&sharp_coeffs) {
            if *c == 0 {
                continue;
            }
            let lift = units.reduce_mod(&dec.section.mul_vec(h_sharp)?)?;
            let idx = self
                .hilbert_basis
                .iter()
                .position(|h| *h == lift)
                .expect("canonical lift is a Hilbert basis element");
            coeffs[idx] = *c;
            residual = arith::vec_sub(&residual, &arith::vec_scale(*c, &lift, "factorize")?, "factorize")?;
        }
        let y = match solve_integer(units.basis(), &residual)? {
            Some(y) => y,
            None => return Ok(None),
        };
        for (k, yk) in y.iter().enumerate() {
            let b = units.basis().col(k);
            let minus = arith::vec_neg(&b, "factorize")?;
            let pos_idx = self.hilbert_basis.iter().position(|h| *h == b);
            let neg_idx = self.hilbert_basis.iter().position(|h| *h == minus);
            let (pos_idx, neg_idx) = (
                pos_idx.expect("unit basis vector is a generator"),
                neg_idx.expect("negated unit basis vector is a generator"),
            );
            if *yk >= 0 {
                coeffs[pos_idx] += yk;
            } else {
                coeffs[neg_idx] += -yk;
            }
        }
        Ok(Some(coeffs))
    }

    /// Generators and binomial relations per the standard presentation; the
    /// relation list is a lattice-kernel basis, with a bounded box check
    /// that it generates the full congruence.
    pub fn presentation(&self) -> Result<Presentation> {
        let gens = self.hilbert_basis.clone();
        let unit_pairs = {
            let mut pairs = Vec::new();
            for (i, g) in gens.iter().enumerate() {
                let ng = arith::vec_neg(g, "presentation")?;
                if let Some(j) = gens.iter().position(|h| *h == ng) {
                    if i < j {
                        pairs.push((i, j));
                    }
                }
            }
            pairs
        };
        if gens.is_empty() {
            return Ok(Presentation {
                generators: gens,
                unit_pairs,
                relations: Vec::new(),
                completeness: RelationCompleteness::Verified,
            });
        }
        let h = self.generator_matrix();
        let kernel = kernel_basis(&h)?;
        let mut relations = Vec::new();
        for mut k in kernel {
            let first = k.iter().find(|&&x| x != 0);
            if let Some(&f) = first {
                if f < 0 {
                    k = arith::vec_neg(&k, "presentation")?;
                }
            } else {
                continue;
            }
            let lhs: Vec<i64> = k.iter().map(|&x| x.max(0)).collect();
            let rhs: Vec<i64> = k.iter().map(|&x| (-x).max(0)).collect();
            relations.push(Relation { lhs, rhs });
        }
        relations.sort_by(|a, b| {
            graded_colex(&a.lhs, &b.lhs).then_with(|| graded_colex(&a.rhs, &b.rhs))
        });
        let completeness = congruence_box_check(&h, &relations, 6, 100_000)?;
        Ok(Presentation {
            generators: gens,
            unit_pairs,
            relations,
            completeness,
        })
    }

    /// Support face, codimension and normal model of a nonnegative point
    /// given in Hilbert coordinates.
    pub fn support_of_point(&self, x: &[f64]) -> Result<SupportData> {
        if x.len() != self.hilbert_basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates but the monoid has {} generators",
                x.len(),
                self.hilbert_basis.len()
            )));
        }
        for (i, &xi) in x.iter().enumerate() {
            if xi < 0.0 {
                return Err(Error::NegativeCoordinate { index: i });
            }
        }
        let presentation = self.presentation()?;
        for rel in &presentation.relations {
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
        let positive: Vec<Vec<i64>> = self
            .hilbert_basis
            .iter()
            .zip(x)
            .filter(|(_, &v)| v > 0.0)
            .map(|(h, _)| h.clone())
            .collect();
        let face = self.smallest_face_containing(&positive)?;
        // consistency: a generator inside the support face must have a
        // strictly positive coordinate, otherwise x is not a homomorphism
        for (h, &v) in self.hilbert_basis.iter().zip(x) {
            if v == 0.0 && face.cone.contains(h)? {
                return Err(Error::RelationViolation {
                    relation: format!("generator {:?} lies in the support face but vanishes", h),
                    lhs: 0.0,
                    rhs: 1.0,
                });
            }
        }
        let quotient = self.quotient_by_face(&face)?;
        Ok(SupportData {
            codim: face.codim,
            normal_model: quotient.quotient,
            face,
        })
    }
}

/// Ambient lattice `Z^n` as a sublattice of itself.
pub(crate) fn full_lattice(n: usize) -> Sublattice {
    if n == 0 {
        return Sublattice::zero(0);
    }
    Sublattice::from_basis(n, &IntMatrix::identity(n).col_vecs()).expect("full lattice")
}

/// The monoid in its group-lattice coordinates.
#[derive(Debug, Clone)]
pub struct GroupCoords {
    pub monoid: ToricMonoid,
    /// rank × dim embedding of coordinates into the ambient lattice.
    pub embed: IntMatrix,
    /// dim × rank left inverse of `embed` (valid on the span).
    pub project: IntMatrix,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub units: Sublattice,
    pub sharp: ToricMonoid,
    pub group: Sublattice,
    /// Projection `Z^rank → Z^{rank-u}` with `sharp = projection(P)`.
    pub projection: IntMatrix,
    /// Section of the projection.
    pub section: IntMatrix,
    pub is_smooth: bool,
}

#[derive(Debug, Clone)]
pub struct QuotientByFace {
    pub quotient: ToricMonoid,
    pub projection: MonoidHom,
    pub splitting: FaceSplitting,
}

/// The isomorphism `S^{-1}P ≅ P/S × S^gp`, with both composites verified to
/// be identities on Hilbert generators by `verify`.
#[derive(Debug, Clone)]
pub struct FaceSplitting {
    pub localized: ToricMonoid,
    pub product: ToricMonoid,
    pub to_product: IntMatrix,
    pub from_product: IntMatrix,
}

impl FaceSplitting {
    pub fn verify(&self) -> Result<bool> {
        // mutually inverse on the localized monoid's generators…
        for h in self.localized.hilbert_basis() {
            let image = self.to_product.mul_vec(h)?;
            if !self.product.contains(&image)? {
                return Ok(false);
            }
            if self.from_product.mul_vec(&image)? != *h {
                return Ok(false);
            }
        }
        // …and on the product monoid's generators
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

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
}

impl Relation {
    pub fn display(&self) -> String {
        format!("{:?} = {:?}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationCompleteness {
    /// The relations generate the congruence on the checked box.
    Verified,
    /// The box check could not certify completeness.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct Presentation {
    pub generators: Vec<Vec<i64>>,
    /// Indices (i, j) with generator_j = -generator_i (unit pairs).
    pub unit_pairs: Vec<(usize, usize)>,
    pub relations: Vec<Relation>,
    pub completeness: RelationCompleteness,
}

#[derive(Debug, Clone)]
pub struct SupportData {
    pub face: FaceHandle,
    pub codim: usize,
    pub normal_model: ToricMonoid,
}

/// A face of a monoid, identified by the set of facet normals of the parent
/// cone tight on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceHandle {
    parent: ToricMonoid,
    selector: BTreeSet<usize>,
    cone: Cone,
    codim: usize,
}

impl FaceHandle {
    pub fn parent(&self) -> &ToricMonoid {
        &self.parent
    }

    pub fn selector(&self) -> &BTreeSet<usize> {
        &self.selector
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// The face as a monoid in the parent's ambient lattice.
    pub fn monoid(&self) -> Result<ToricMonoid> {
        ToricMonoid::from_cone(self.parent.rank(), self.cone.clone())
    }

    /// The face as a standalone monoid in its own group lattice, with the
    /// embedding back into the parent's ambient lattice.
    pub fn standalone(&self) -> Result<(ToricMonoid, IntMatrix)> {
        let m = self.monoid()?;
        let gc = m.in_group_coords()?;
        Ok((gc.monoid, gc.embed))
    }

    pub fn is_whole(&self) -> bool {
        self.cone == *self.parent.cone()
    }

    fn check_parent(&self, p: &ToricMonoid) -> Result<()> {
        if self.parent != *p {
            return Err(Error::NotAFace);
        }
        Ok(())
    }

    /// Face inclusion.
    pub fn leq(&self, other: &FaceHandle) -> bool {
        self.parent == other.parent && self.selector.is_superset(&other.selector)
    }
}

/// An integer-matrix homomorphism between the ambient lattices of two
/// monoids that maps the source monoid into the target monoid. The derived
/// flags are computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidHom {
    source: ToricMonoid,
    target: ToricMonoid,
    matrix: IntMatrix,
    interior: bool,
    injective: bool,
    iso_onto_face: bool,
    image_cone: Cone,
}

impl MonoidHom {
    pub fn new(source: ToricMonoid, target: ToricMonoid, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix is {}x{} but maps Z^{} to Z^{}",
                matrix.rows(),
                matrix.cols(),
                source.rank(),
                target.rank()
            )));
        }
        for h in source.hilbert_basis() {
            if !target.contains(&matrix.mul_vec(h)?)? {
                return Err(Error::NotAMonoidHom);
            }
        }
        let image_cone = Cone::linear_image(&matrix, source.cone())?;
        let interior = target
            .cone()
            .contains_relative_interior(&matrix.mul_vec(&source.cone().relative_interior_point())?)?;
        let injective = {
            let b = source.group_lattice().basis();
            if b.cols() == 0 {
                true
            } else {
                matrix.mul(b)?.rank()? == source.dim()
            }
        };
        let iso_onto_face = injective && image_cone.is_face_of(target.cone())? && {
            let image_cols = matrix.mul(source.group_lattice().basis())?;
            let image_lattice = Sublattice::from_generators(target.rank(), &image_cols.col_vecs())?;
            image_lattice == image_cone.span_lattice()?
        };
        Ok(Self {
            source,
            target,
            matrix,
            interior,
            injective,
            iso_onto_face,
            image_cone,
        })
    }

    pub fn source(&self) -> &ToricMonoid {
        &self.source
    }

    pub fn target(&self) -> &ToricMonoid {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn image_cone(&self) -> &Cone {
        &self.image_cone
    }

    /// Image of a relative interior point is relatively interior in the
    /// target ("does not map into any proper face").
    pub fn is_interior(&self) -> bool {
        self.interior
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn is_iso_onto_face(&self) -> bool {
        self.iso_onto_face
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MonoidHom) -> Result<MonoidHom> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch(
                "composition endpoints do not match".into(),
            ));
        }
        MonoidHom::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix)?,
        )
    }
}

/// Spec operation: interiority flag of a hom.
pub fn is_interior_hom(h: &MonoidHom) -> bool {
    h.is_interior()
}

// ---------------------------------------------------------------------------
// Hilbert basis computation
// ---------------------------------------------------------------------------

fn hilbert_basis_of(cone: &Cone) -> Result<Vec<Vec<i64>>> {
    if cone.is_zero() {
        return Ok(Vec::new());
    }
    if cone.is_pointed() {
        return pointed_hilbert(cone);
    }
    // units split: ± basis of the lineality lattice plus canonical lifts of
    // the sharp quotient's Hilbert basis
    let lin = cone.lineality()?;
    let quot = lattice_quotient(cone.rank(), &lin)?;
    let proj = quot.projection.as_ref().expect("saturated lineality");
    let sect = quot.section.as_ref().expect("saturated lineality");
    let image = Cone::linear_image(proj, cone)?;
    let sharp_hb = if image.is_zero() {
        Vec::new()
    } else {
        pointed_hilbert(&image)?
    };
    let mut out = Vec::new();
    for b in lin.basis_columns() {
        out.push(arith::vec_neg(&b, "hilbert")?);
        out.push(b);
    }
    for h in sharp_hb {
        out.push(lin.reduce_mod(&sect.mul_vec(&h)?)?);
    }
    arith::sort_canonical(&mut out);
    Ok(out)
}

/// Hilbert basis of a pointed cone: work in the coordinates of the span
/// lattice, triangulate, enumerate fundamental parallelepipeds, then reduce
/// to irreducibles.
fn pointed_hilbert(cone: &Cone) -> Result<Vec<Vec<i64>>> {
    let d = cone.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let span = cone.span_lattice()?;
    let w = span.basis().clone();
    let w_left = left_inverse_on_sublattice(&w, &full_lattice(d))?;
    let inner = Cone::linear_image(&w_left, cone)?;
    debug_assert_eq!(inner.dim(), d);
    let rays = inner.rays().to_vec();
    let mut candidates: Vec<Vec<i64>> = rays.clone();
    for cell in triangulate(d, &rays)? {
        let cell_rays: Vec<Vec<i64>> = cell.iter().map(|&i| rays[i].clone()).collect();
        candidates.extend(parallelepiped_points(d, &cell_rays)?);
    }
    arith::sort_canonical(&mut candidates);
    let mut irreducible = Vec::new();
    for g in &candidates {
        let mut reducible = false;
        for g2 in &candidates {
            if g2 == g {
                continue;
            }
            let diff = arith::vec_sub(g, g2, "hilbert")?;
            if !arith::is_zero_vec(&diff) && inner.contains(&diff)? {
                reducible = true;
                break;
            }
        }
        if !reducible {
            irreducible.push(g.clone());
        }
    }
    // map back into the ambient lattice
    let mut out = Vec::with_capacity(irreducible.len());
    for h in irreducible {
        out.push(w.mul_vec(&h)?);
    }
    arith::sort_canonical(&mut out);
    Ok(out)
}

/// Placing (beneath-beyond) triangulation of a full-dimensional pointed
/// cone, as index sets into `rays`.
fn triangulate(d: usize, rays: &[Vec<i64>]) -> Result<Vec<Vec<usize>>> {
    if rays.len() == d {
        return Ok(vec![(0..d).collect()]);
    }
    // greedy independent initial cell in canonical order
    let mut init: Vec<usize> = Vec::new();
    for i in 0..rays.len() {
        let mut trial: Vec<Vec<i64>> = init.iter().map(|&k| rays[k].clone()).collect();
        trial.push(rays[i].clone());
        if IntMatrix::from_cols(d, &trial).rank()? == trial.len() {
            init.push(i);
            if init.len() == d {
                break;
            }
        }
    }
    debug_assert_eq!(init.len(), d);
    let mut cells: Vec<Vec<usize>> = vec![init.clone()];
    for r in 0..rays.len() {
        if init.contains(&r) {
            continue;
        }
        // collect boundary facets visible from rays[r]
        let mut new_cells: Vec<Vec<usize>> = Vec::new();
        for (ci, cell) in cells.iter().enumerate() {
            for drop in 0..cell.len() {
                let facet: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != drop)
                    .map(|(_, &v)| v)
                    .collect();
                // interior walls are shared with another cell
                let shared = cells.iter().enumerate().any(|(cj, other)| {
                    cj != ci && facet.iter().all(|i| other.contains(i))
                });
                if shared {
                    continue;
                }
                let facet_rows: Vec<Vec<i64>> =
                    facet.iter().map(|&i| rays[i].clone()).collect();
                let mut normal = kernel_basis(&IntMatrix::from_rows(facet_rows))?;
                debug_assert_eq!(normal.len(), 1);
                let mut h = normal.pop().unwrap();
                let opp = arith::dot(&h, &rays[cell[drop]], "triangulate")?;
                debug_assert_ne!(opp, 0);
                if opp < 0 {
                    h = arith::vec_neg(&h, "triangulate")?;
                }
                if arith::dot(&h, &rays[r], "triangulate")? < 0 {
                    let mut cell = facet;
                    cell.push(r);
                    cell.sort_unstable();
                    if !new_cells.contains(&cell) {
                        new_cells.push(cell);
                    }
                }
            }
        }
        cells.extend(new_cells);
    }
    Ok(cells)
}

/// Lattice points of the half-open fundamental parallelepiped of a
/// full-dimensional simplicial cone, excluding the origin.
fn parallelepiped_points(d: usize, cell_rays: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let b = IntMatrix::from_cols(d, cell_rays);
    let det = b.det()?.abs();
    debug_assert!(det > 0);
    if det == 1 {
        return Ok(Vec::new());
    }
    let snf = crate::lattice::smith_normal_form(&b)?;
    let diag = snf.diagonal();
    // enumerate Z^d / B Z^d via the Smith decomposition
    let mut reps: Vec<Vec<i64>> = vec![vec![0; d]];
    for (i, &di) in diag.iter().enumerate() {
        let mut next = Vec::with_capacity(reps.len() * di as usize);
        for rep in &reps {
            for k in 0..di {
                let mut r = rep.clone();
                r[i] = k;
                next.push(r);
            }
        }
        reps = next;
    }
    let mut out = Vec::new();
    for z in reps {
        if arith::is_zero_vec(&z) {
            continue;
        }
        let x = snf.u_inv.mul_vec(&z)?;
        // reduce x into the parallelepiped: x' = x - B * floor(B^{-1} x)
        let floors = rational_floor_solve(&b, &x, det)?;
        let mut xp = x;
        for (j, &f) in floors.iter().enumerate() {
            if f != 0 {
                let col = b.col(j);
                xp = arith::vec_sub(&xp, &arith::vec_scale(f, &col, "parallelepiped")?, "parallelepiped")?;
            }
        }
        debug_assert!(!arith::is_zero_vec(&xp));
        out.push(xp);
    }
    arith::sort_canonical(&mut out);
    Ok(out)
}

/// Componentwise floors of the rational solution of `B t = x`, via Cramer's
/// rule in i128.
fn rational_floor_solve(b: &IntMatrix, x: &[i64], _det_abs: i64) -> Result<Vec<i64>> {
    let d = b.rows();
    let det = det_i128(b, None, x);
    debug_assert_ne!(det, 0);
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        let num = det_i128(b, Some(j), x);
        out.push(i128_div_floor(num, det));
    }
    Ok(out)
}

fn det_i128(b: &IntMatrix, replace_col: Option<usize>, x: &[i64]) -> i128 {
    let d = b.rows();
    let mut m: Vec<Vec<i128>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if Some(j) == replace_col {
                        x[i] as i128
                    } else {
                        b[(i, j)] as i128
                    }
                })
                .collect()
        })
        .collect();
    // fraction-free elimination
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..d.saturating_sub(1) {
        if m[k][k] == 0 {
            match (k + 1..d).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..d {
            for j in k + 1..d {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    if d == 0 {
        return 1;
    }
    sign * m[d - 1][d - 1]
}

fn i128_div_floor(a: i128, b: i128) -> i64 {
    let (a, b) = if b < 0 { (-a, -b) } else { (a, b) };
    let q = a / b;
    let r = a % b;
    (if r < 0 { q - 1 } else { q }) as i64
}

/// Deterministic N-factorization over the generators of a pointed cone
/// monoid, trying the largest multiple of the earliest generator first.
fn factorize_pointed(cone: &Cone, gens: &[Vec<i64>], v: &[i64]) -> Result<Option<Vec<i64>>> {
    if arith::is_zero_vec(v) {
        return Ok(Some(vec![0; gens.len()]));
    }
    // strictly positive functional bounds the search
    let phi = cone.dual().relative_interior_point();
    let phi_v = arith::dot(&phi, v, "factorize")?;
    fn go(
        cone: &Cone,
        gens: &[Vec<i64>],
        phi: &[i64],
        v: Vec<i64>,
        idx: usize,
        out: &mut Vec<i64>,
    ) -> Result<bool> {
        if arith::is_zero_vec(&v) {
            for k in idx..gens.len() {
                out[k] = 0;
            }
            return Ok(true);
        }
        if idx == gens.len() {
            return Ok(false);
        }
        let g = &gens[idx];
        let phi_g = arith::dot(phi, g, "factorize")?;
        debug_assert!(phi_g > 0);
        let phi_v = arith::dot(phi, &v, "factorize")?;
        let max_k = phi_v / phi_g;
        for k in (0..=max_k).rev() {
            let rest = arith::vec_sub(&v, &arith::vec_scale(k, g, "factorize")?, "factorize")?;
            if !cone.contains(&rest)? {
                continue;
            }
            out[idx] = k;
            if go(cone, gens, phi, rest, idx + 1, out)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let _ = phi_v;
    let mut out = vec![0i64; gens.len()];
    if go(cone, gens, &phi, v.to_vec(), 0, &mut out)? {
        Ok(Some(out))
    } else {
        Ok(None)
    }
}

/// Bounded check that the relations generate the congruence of the
/// generator matrix: enumerate exponent vectors in a box, group them by
/// image, and verify each group is connected under relation moves.
fn congruence_box_check(
    h: &IntMatrix,
    relations: &[Relation],
    bound: i64,
    cap: usize,
) -> Result<RelationCompleteness> {
    let k = h.cols();
    let total = ((bound + 1) as f64).powi(k as i32);
    if k > 5 || total > cap as f64 {
        return Ok(RelationCompleteness::Inconclusive);
    }
    let mut groups: std::collections::HashMap<Vec<i64>, Vec<Vec<i64>>> =
        std::collections::HashMap::new();
    let mut point = vec![0i64; k];
    loop {
        let image = h.mul_vec(&point)?;
        groups.entry(image).or_default().push(point.clone());
        // advance odometer
        let mut i = 0;
        loop {
            if i == k {
                // enumeration complete: run connectivity checks
                for members in groups.values() {
                    if !connected_under_moves(members, relations, bound) {
                        return Ok(RelationCompleteness::Inconclusive);
                    }
                }
                return Ok(RelationCompleteness::Verified);
            }
            point[i] += 1;
            if point[i] <= bound {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

fn connected_under_moves(members: &[Vec<i64>], relations: &[Relation], bound: i64) -> bool {
    if members.len() <= 1 {
        return true;
    }
    let index: std::collections::HashMap<&Vec<i64>, usize> =
        members.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut seen = vec![false; members.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for rel in relations {
            for (from, to) in [(&rel.lhs, &rel.rhs), (&rel.rhs, &rel.lhs)] {
                let mut next = members[i].clone();
                let mut ok = true;
                for j in 0..next.len() {
                    next[j] = next[j] - from[j] + to[j];
                    if next[j] < 0 || next[j] > bound {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                if let Some(&ni) = index.get(&next) {
                    if !seen[ni] {
                        seen[ni] = true;
                        count += 1;
                        stack.push(ni);
                    }
                }
            }
        }
    }
    count == members.len()
}
