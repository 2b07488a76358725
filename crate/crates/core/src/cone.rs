//! Rational polyhedral cones in a lattice, with exact duality via the double
//! description method, face lattices, membership tests, intersections and
//! linear preimages.
//!
//! Cones are canonicalized at construction: the stored ray list consists of
//! the extreme rays (canonically lifted modulo the lineality space) together
//! with a ± pair for each column of the Hermite basis of the saturated
//! lineality lattice, all primitive and sorted in the canonical order. Two
//! cones are equal as sets if and only if their representations are equal.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::arith::{self, graded_colex};
use crate::error::Error;
use crate::lattice::{kernel_basis, lattice_quotient, IntMatrix, Sublattice};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    rank: usize,
    rays: Vec<Vec<i64>>,
    facet_normals: Vec<Vec<i64>>,
    dim: usize,
    lineality_rank: usize,
}

impl Cone {
    /// Cone generated by the given rays. A line through the origin is
    /// expressed as a pair of opposite rays.
    pub fn from_rays(rank: usize, rays: &[Vec<i64>]) -> Result<Self> {
        let gens = clean_generators(rank, rays);
        let normals = dd_generators(rank, &gens)?;
        let canonical = dd_generators(rank, &normals)?;
        Self::assemble(rank, canonical, normals)
    }

    /// Cone cut out by the inequalities `n · v >= 0`.
    pub fn from_inequalities(rank: usize, normals: &[Vec<i64>]) -> Result<Self> {
        let ineqs = clean_generators(rank, normals);
        let rays = dd_generators(rank, &ineqs)?;
        let canonical_normals = dd_generators(rank, &rays)?;
        Self::assemble(rank, rays, canonical_normals)
    }

    /// The zero cone.
    pub fn zero(rank: usize) -> Self {
        Self::from_rays(rank, &[]).expect("zero cone")
    }

    fn assemble(rank: usize, rays: Vec<Vec<i64>>, normals: Vec<Vec<i64>>) -> Result<Self> {
        let dim = if rays.is_empty() {
            0
        } else {
            IntMatrix::from_cols(rank, &rays).rank()?
        };
        let normal_rank = if normals.is_empty() {
            0
        } else {
            IntMatrix::from_cols(rank, &normals).rank()?
        };
        Ok(Self {
            rank,
            rays,
            facet_normals: normals,
            dim,
            lineality_rank: rank - normal_rank,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Canonical generator list: extreme rays plus ± pairs spanning the
    /// lineality space.
    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// Canonical generators of the dual cone; `v ∈ C` iff `n·v ≥ 0` for all
    /// of them.
    pub fn facet_normals(&self) -> &[Vec<i64>] {
        &self.facet_normals
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lineality_rank(&self) -> usize {
        self.lineality_rank
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality_rank == 0
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    /// The dual cone `{u : u·v ≥ 0 for all v ∈ C}`. By canonicality this is
    /// just a swap of rays and normals.
    pub fn dual(&self) -> Self {
        Self {
            rank: self.rank,
            rays: self.facet_normals.clone(),
            facet_normals: self.rays.clone(),
            dim: self.rank - self.lineality_rank,
            lineality_rank: self.rank - self.dim,
        }
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        assert_eq!(v.len(), self.rank);
        for n in &self.facet_normals {
            if arith::dot(n, v, "cone membership")? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when a normal vanishes on the whole cone (it cuts the span, not
    /// a facet).
    fn is_span_normal(&self, n: &[i64]) -> Result<bool> {
        for r in &self.rays {
            if arith::dot(n, r, "cone membership")? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_relative_interior(&self, v: &[i64]) -> Result<bool> {
        assert_eq!(v.len(), self.rank);
        for n in &self.facet_normals {
            let d = arith::dot(n, v, "relative interior test")?;
            if self.is_span_normal(n)? {
                if d != 0 {
                    return Ok(false);
                }
            } else if d <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// An integer point strictly inside the cone: the sum of the canonical
    /// rays. The zero cone yields the zero vector.
    pub fn relative_interior_point(&self) -> Vec<i64> {
        let mut p = vec![0i64; self.rank];
        for r in &self.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += *y;
            }
        }
        p
    }

    /// The lineality space `C ∩ −C` as a saturated sublattice.
    pub fn lineality(&self) -> Result<Sublattice> {
        if self.facet_normals.is_empty() {
            let id = IntMatrix::identity(self.rank);
            return Sublattice::from_basis(self.rank, &id.col_vecs());
        }
        let m = IntMatrix::from_rows(self.facet_normals.clone());
        let ker = kernel_basis(&m)?;
        if ker.is_empty() {
            return Ok(Sublattice::zero(self.rank));
        }
        Sublattice::from_basis(self.rank, &ker)
    }

    /// The saturated lattice spanned by the cone.
    pub fn span_lattice(&self) -> Result<Sublattice> {
        if self.rays.is_empty() {
            return Ok(Sublattice::zero(self.rank));
        }
        Sublattice::from_generators(self.rank, &self.rays)?.saturation()
    }

    pub fn intersection(&self, other: &Cone) -> Result<Cone> {
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch(format!(
                "intersecting cones of rank {} and {}",
                self.rank, other.rank
            )));
        }
        let mut normals = self.facet_normals.clone();
        normals.extend(other.facet_normals.iter().cloned());
        Cone::from_inequalities(self.rank, &normals)
    }

    /// `{v : A v ∈ C}` where `A` maps the source lattice into this cone's
    /// lattice.
    pub fn linear_preimage(a: &IntMatrix, c: &Cone) -> Result<Cone> {
        if a.rows() != c.rank {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows but the cone lives in rank {}",
                a.rows(),
                c.rank
            )));
        }
        let at = a.transpose();
        let normals: Result<Vec<Vec<i64>>> =
            c.facet_normals.iter().map(|n| at.mul_vec(n)).collect();
        Cone::from_inequalities(a.cols(), &normals?)
    }

    /// Image cone `A(C)` under a linear map.
    pub fn linear_image(a: &IntMatrix, c: &Cone) -> Result<Cone> {
        if a.cols() != c.rank {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns but the cone lives in rank {}",
                a.cols(),
                c.rank
            )));
        }
        let rays: Result<Vec<Vec<i64>>> = c.rays.iter().map(|r| a.mul_vec(r)).collect();
        Cone::from_rays(a.rows(), &rays?)
    }

    /// Tight-normal selector of the smallest face containing all of `vs`
    /// (which must lie in the cone).
    pub fn tight_selector(&self, vs: &[Vec<i64>]) -> Result<BTreeSet<usize>> {
        let mut sel = BTreeSet::new();
        'outer: for (i, n) in self.facet_normals.iter().enumerate() {
            for v in vs {
                if arith::dot(n, v, "tight selector")? != 0 {
                    continue 'outer;
                }
            }
            sel.insert(i);
        }
        Ok(sel)
    }

    /// The face cut out by setting the selected normals to zero.
    pub fn face_cone(&self, selector: &BTreeSet<usize>) -> Result<Cone> {
        let mut ineqs = self.facet_normals.clone();
        for &i in selector {
            ineqs.push(arith::vec_neg(&self.facet_normals[i], "face cone")?);
        }
        Cone::from_inequalities(self.rank, &ineqs)
    }

    /// The full face lattice, ordered by (dimension, canonical ray list).
    pub fn face_lattice(&self) -> Result<FaceLattice> {
        let mut seen: BTreeMap<BTreeSet<usize>, Cone> = BTreeMap::new();
        let top_sel = self.tight_selector(&self.rays.clone())?;
        let mut queue = vec![(top_sel.clone(), self.clone())];
        seen.insert(top_sel, self.clone());
        while let Some((sel, _cone)) = queue.pop() {
            for i in 0..self.facet_normals.len() {
                if sel.contains(&i) {
                    continue;
                }
                let mut next = sel.clone();
                next.insert(i);
                let face = self.face_cone(&next)?;
                let closure = self.tight_selector(&face.rays.clone())?;
                if !seen.contains_key(&closure) {
                    seen.insert(closure.clone(), face.clone());
                    queue.push((closure, face));
                }
            }
        }
        let mut faces: Vec<ConeFace> = seen
            .into_iter()
            .map(|(selector, cone)| ConeFace {
                codim: self.dim - cone.dim(),
                selector,
                cone,
            })
            .collect();
        faces.sort_by(|a, b| {
            a.cone
                .dim()
                .cmp(&b.cone.dim())
                .then_with(|| cmp_ray_lists(&a.cone.rays, &b.cone.rays))
        });
        Ok(FaceLattice { faces })
    }

    /// Is `self` a face of `other`?
    pub fn is_face_of(&self, other: &Cone) -> Result<bool> {
        if self.rank != other.rank {
            return Ok(false);
        }
        for r in &self.rays {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        let sel = other.tight_selector(&self.rays.clone())?;
        Ok(other.face_cone(&sel)? == *self)
    }
}

/// Canonical comparison of two sorted ray lists.
pub(crate) fn cmp_ray_lists(a: &[Vec<i64>], b: &[Vec<i64>]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            match graded_colex(x, y) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    })
}

/// Canonical comparison of cones: dimension first, then ray lists.
pub(crate) fn cmp_cones(a: &Cone, b: &Cone) -> Ordering {
    a.dim()
        .cmp(&b.dim())
        .then_with(|| cmp_ray_lists(a.rays(), b.rays()))
}

/// One face in a face lattice: the face as a cone, the full set of facet
/// normals of the parent tight on it, and its codimension in the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeFace {
    pub selector: BTreeSet<usize>,
    pub cone: Cone,
    pub codim: usize,
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    faces: Vec<ConeFace>,
}

impl FaceLattice {
    pub fn faces(&self) -> &[ConeFace] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Inclusion order: face `i` is contained in face `j` iff the selector
    /// of `i` contains the selector of `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.faces[i]
            .selector
            .is_superset(&self.faces[j].selector)
    }

    pub fn find(&self, cone: &Cone) -> Option<usize> {
        self.faces.iter().position(|f| &f.cone == cone)
    }

    pub fn find_by_selector(&self, sel: &BTreeSet<usize>) -> Option<usize> {
        self.faces.iter().position(|f| &f.selector == sel)
    }

    /// Index of the minimal face (the lineality face).
    pub fn minimal(&self) -> usize {
        0
    }

    /// Index of the maximal face (the cone itself).
    pub fn maximal(&self) -> usize {
        self.faces.len() - 1
    }
}

fn clean_generators(rank: usize, vs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for v in vs {
        assert_eq!(v.len(), rank, "generator has wrong length");
        if arith::is_zero_vec(v) {
            continue;
        }
        let p = arith::primitive(v);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Core double description step: canonical generators of
/// `{v : a·v ≥ 0 for all a in ineqs}`.
///
/// Maintains a lineality basis and a list of extreme rays with their tight
/// inequality sets; rays are combined across each new hyperplane using the
/// exact rank-based adjacency test.
fn dd_generators(rank: usize, ineqs: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let mut lineality: Vec<Vec<i64>> = (0..rank)
        .map(|i| {
            let mut e = vec![0i64; rank];
            e[i] = 1;
            e
        })
        .collect();
    let mut rays: Vec<(Vec<i64>, BTreeSet<usize>)> = Vec::new();
    let mut processed: Vec<Vec<i64>> = Vec::new();

    for a in ineqs {
        let idx = processed.len();
        let pivot = {
            let mut found = None;
            for (k, l) in lineality.iter().enumerate() {
                if arith::dot(a, l, "dd")? != 0 {
                    found = Some(k);
                    break;
                }
            }
            found
        };
        if let Some(k) = pivot {
            let mut l0 = lineality.remove(k);
            if arith::dot(a, &l0, "dd")? < 0 {
                l0 = arith::vec_neg(&l0, "dd")?;
            }
            let d0 = arith::dot(a, &l0, "dd")?;
            let mut new_lin = Vec::with_capacity(lineality.len());
            for l in &lineality {
                let dl = arith::dot(a, l, "dd")?;
                new_lin.push(arith::primitive(&arith::vec_combine(
                    d0,
                    l,
                    -dl,
                    &l0,
                    "dd",
                )?));
            }
            lineality = new_lin;
            let mut new_rays = Vec::with_capacity(rays.len() + 1);
            for (r, mut tight) in rays {
                let dr = arith::dot(a, &r, "dd")?;
                let adj =
                    arith::primitive(&arith::vec_combine(d0, &r, -dr, &l0, "dd")?);
                tight.insert(idx);
                new_rays.push((adj, tight));
            }
            // The pivot line becomes an extreme ray, tight on everything
            // processed before this inequality.
            let tight: BTreeSet<usize> = (0..idx).collect();
            new_rays.push((l0, tight));
            rays = new_rays;
        } else {
            let mut plus = Vec::new();
            let mut zero = Vec::new();
            let mut minus = Vec::new();
            for (r, tight) in rays {
                let d = arith::dot(a, &r, "dd")?;
                match d.cmp(&0) {
                    Ordering::Greater => plus.push((r, tight, d)),
                    Ordering::Equal => zero.push((r, tight)),
                    Ordering::Less => minus.push((r, tight, d)),
                }
            }
            let target_rank = processed_rank(&processed)?;
            let mut new_rays: Vec<(Vec<i64>, BTreeSet<usize>)> = Vec::new();
            for (p, pt, dp) in &plus {
                for (m, mt, dm) in &minus {
                    let common: BTreeSet<usize> = pt.intersection(mt).copied().collect();
                    if !adjacent(&processed, &common, target_rank)? {
                        continue;
                    }
                    let c = arith::primitive(&arith::vec_combine(*dp, m, -*dm, p, "dd")?);
                    let mut tight = common;
                    tight.insert(idx);
                    new_rays.push((c, tight));
                }
            }
            for (r, tight) in plus.into_iter().map(|(r, t, _)| (r, t)) {
                new_rays.push((r, tight));
            }
            for (r, mut tight) in zero {
                tight.insert(idx);
                new_rays.push((r, tight));
            }
            rays = new_rays;
        }
        processed.push(a.clone());
    }

    canonicalize_generators(rank, &lineality, rays.into_iter().map(|(r, _)| r))
}

fn processed_rank(processed: &[Vec<i64>]) -> Result<usize> {
    if processed.is_empty() {
        return Ok(0);
    }
    IntMatrix::from_rows(processed.to_vec()).rank()
}

/// Two rays are adjacent iff the inequalities tight at both span a space of
/// rank exactly two less than all processed inequalities.
fn adjacent(
    processed: &[Vec<i64>],
    common: &BTreeSet<usize>,
    target_rank: usize,
) -> Result<bool> {
    if target_rank < 2 {
        return Ok(true);
    }
    if common.len() + 2 < target_rank {
        return Ok(false);
    }
    let rows: Vec<Vec<i64>> = common.iter().map(|&i| processed[i].clone()).collect();
    let r = if rows.is_empty() {
        0
    } else {
        IntMatrix::from_rows(rows).rank()?
    };
    Ok(r == target_rank - 2)
}

/// Produce the canonical generator list from a raw lineality basis and raw
/// extreme rays: saturate and Hermite-canonicalize the lineality lattice,
/// lift extreme rays canonically modulo it, sort and deduplicate.
fn canonicalize_generators(
    rank: usize,
    lineality: &[Vec<i64>],
    rays: impl Iterator<Item = Vec<i64>>,
) -> Result<Vec<Vec<i64>>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    if lineality.is_empty() {
        out.extend(rays.map(|r| arith::primitive(&r)));
    } else {
        let lin = Sublattice::from_generators(rank, lineality)?.saturation()?;
        let quot = lattice_quotient(rank, &lin)?;
        let proj = quot.projection.as_ref().expect("saturated lattice quotient is free");
        let sect = quot.section.as_ref().expect("saturated lattice quotient is free");
        for b in lin.basis_columns() {
            out.push(arith::vec_neg(&b, "canonicalize")?);
            out.push(b);
        }
        for r in rays {
            let image = arith::primitive(&proj.mul_vec(&r)?);
            if arith::is_zero_vec(&image) {
                continue;
            }
            let lift = sect.mul_vec(&image)?;
            out.push(lin.reduce_mod(&lift)?);
        }
    }
    arith::sort_canonical(&mut out);
    Ok(out)
}
