//! Monoidal complexes: finite multigraphs of monoids whose arrows are
//! isomorphisms onto faces, plus morphisms between them.
//!
//! Object identity is by index, not isomorphism class — distinct objects may
//! be isomorphic monoids (both edges of the teardrop complex are `N`). The
//! complex axioms are enforced by validation rather than at construction so
//! that teardrop-style multi-arrow complexes remain expressible.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::lattice::{left_inverse_on_sublattice, IntMatrix};
use crate::monoid::{full_lattice, FaceHandle, MonoidHom, ToricMonoid};
use crate::Result;

/// An arrow of a complex: a hom from `objects[source]` onto a face of
/// `objects[target]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub hom: MonoidHom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonoidalComplex {
    objects: Vec<ToricMonoid>,
    arrows: Vec<Arrow>,
}

impl MonoidalComplex {
    pub fn new(objects: Vec<ToricMonoid>, arrows: Vec<Arrow>) -> Self {
        Self { objects, arrows }
    }

    pub fn objects(&self) -> &[ToricMonoid] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn object(&self, i: usize) -> &ToricMonoid {
        &self.objects[i]
    }

    /// Arrows out of an object.
    pub fn arrows_from(&self, i: usize) -> impl Iterator<Item = &Arrow> {
        self.arrows.iter().filter(move |a| a.source == i)
    }

    /// The identity morphism.
    pub fn identity_morphism(&self) -> Result<ComplexMorphism> {
        let assignment = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, m)| {
                Ok((
                    i,
                    MonoidHom::new(m.clone(), m.clone(), IntMatrix::identity(m.rank()))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ComplexMorphism {
            source: self.clone(),
            target: self.clone(),
            assignment,
        })
    }

    /// Extract the subcomplex on the given object indices (must be
    /// arrow-closed; see [`Subcomplex::validate`]). Returns the new complex
    /// and the old-to-new index map.
    pub fn extract(&self, indices: &BTreeSet<usize>) -> (MonoidalComplex, Vec<Option<usize>>) {
        let mut index_map = vec![None; self.objects.len()];
        let mut objects = Vec::new();
        for &i in indices {
            index_map[i] = Some(objects.len());
            objects.push(self.objects[i].clone());
        }
        let arrows = self
            .arrows
            .iter()
            .filter(|a| indices.contains(&a.source) && indices.contains(&a.target))
            .map(|a| Arrow {
                source: index_map[a.source].unwrap(),
                target: index_map[a.target].unwrap(),
                hom: a.hom.clone(),
            })
            .collect();
        (MonoidalComplex { objects, arrows }, index_map)
    }
}

/// A subcomplex, given by a set of object indices of its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex {
    pub indices: BTreeSet<usize>,
}

impl Subcomplex {
    pub fn new(indices: BTreeSet<usize>) -> Self {
        Self { indices }
    }

    /// A subcomplex must be closed under arrows into its objects (faces of
    /// members are members).
    pub fn validate(&self, parent: &MonoidalComplex) -> Result<()> {
        for &i in &self.indices {
            if i >= parent.objects.len() {
                return Err(Error::InvalidComplex(format!(
                    "subcomplex references object {} of a complex with {} objects",
                    i,
                    parent.objects.len()
                )));
            }
        }
        for a in &parent.arrows {
            if self.indices.contains(&a.target) && !self.indices.contains(&a.source) {
                return Err(Error::InvalidComplex(format!(
                    "subcomplex contains object {} but not the source {} of arrow onto its face",
                    a.target, a.source
                )));
            }
        }
        Ok(())
    }
}

/// A morphism of complexes: for each source object, a target object and an
/// interior hom, such that every square over a source arrow commutes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMorphism {
    source: MonoidalComplex,
    target: MonoidalComplex,
    assignment: Vec<(usize, MonoidHom)>,
}

impl ComplexMorphism {
    pub fn new(
        source: MonoidalComplex,
        target: MonoidalComplex,
        assignment: Vec<(usize, MonoidHom)>,
    ) -> Self {
        Self {
            source,
            target,
            assignment,
        }
    }

    pub fn source(&self) -> &MonoidalComplex {
        &self.source
    }

    pub fn target(&self) -> &MonoidalComplex {
        &self.target
    }

    pub fn assignment(&self) -> &[(usize, MonoidHom)] {
        &self.assignment
    }

    pub fn assigned_target(&self, source_object: usize) -> usize {
        self.assignment[source_object].0
    }

    pub fn hom(&self, source_object: usize) -> &MonoidHom {
        &self.assignment[source_object].1
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ComplexMorphism) -> Result<ComplexMorphism> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch(
                "morphism composition endpoints do not match".into(),
            ));
        }
        let assignment = other
            .assignment
            .iter()
            .map(|(mid, hom)| {
                let (end, second) = &self.assignment[*mid];
                Ok((*end, second.compose(hom)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ComplexMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            assignment,
        })
    }
}

/// One structural violation found by [`validate_complex`].
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexViolation {
    ArrowEndpointMismatch { arrow: usize },
    ArrowNotIsoOntoFace { arrow: usize },
    MissingFaceArrow { object: usize, face_rays: Vec<Vec<i64>> },
    DuplicateFaceArrow { object: usize, face_rays: Vec<Vec<i64>> },
    CompositeNotInComplex { first: usize, then: usize },
}

impl fmt::Display for ComplexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ArrowEndpointMismatch { arrow } => {
                write!(f, "arrow {arrow}: hom endpoints do not match the indexed objects")
            }
            Self::ArrowNotIsoOntoFace { arrow } => {
                write!(f, "arrow {arrow}: hom is not an isomorphism onto a face")
            }
            Self::MissingFaceArrow { object, face_rays } => write!(
                f,
                "object {object}: face with rays {face_rays:?} has no arrow onto it"
            ),
            Self::DuplicateFaceArrow { object, face_rays } => write!(
                f,
                "object {object}: face with rays {face_rays:?} has more than one arrow onto it"
            ),
            Self::CompositeNotInComplex { first, then } => write!(
                f,
                "composite of arrow {first} then arrow {then} is not an arrow of the complex"
            ),
        }
    }
}

/// One violation found by [`validate_morphism`].
#[derive(Debug, Clone, PartialEq)]
pub enum MorphismViolation {
    AssignmentEndpointMismatch { object: usize },
    NonInteriorAssignment { object: usize },
    SquareDoesNotCommute { arrow: usize },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AssignmentEndpointMismatch { object } => {
                write!(f, "assignment of object {object} has mismatched endpoints")
            }
            Self::NonInteriorAssignment { object } => {
                write!(f, "assignment of object {object} is not an interior homomorphism")
            }
            Self::SquareDoesNotCommute { arrow } => {
                write!(f, "no target arrow makes the square over source arrow {arrow} commute")
            }
        }
    }
}

/// Check the complex axioms: every arrow is an isomorphism onto a face,
/// every face of every object is the image of exactly one arrow, and arrows
/// compose within the arrow set. Violations are data, not errors.
pub fn validate_complex(c: &MonoidalComplex) -> Result<Vec<ComplexViolation>> {
    let mut violations = Vec::new();
    for (k, a) in c.arrows.iter().enumerate() {
        if a.source >= c.objects.len()
            || a.target >= c.objects.len()
            || a.hom.source() != &c.objects[a.source]
            || a.hom.target() != &c.objects[a.target]
        {
            violations.push(ComplexViolation::ArrowEndpointMismatch { arrow: k });
            continue;
        }
        if !a.hom.is_iso_onto_face() {
            violations.push(ComplexViolation::ArrowNotIsoOntoFace { arrow: k });
        }
    }
    if !violations.is_empty() {
        // face accounting below assumes well-formed arrows
        return Ok(violations);
    }
    for (t, obj) in c.objects.iter().enumerate() {
        for face in obj.faces()? {
            let count = c
                .arrows
                .iter()
                .filter(|a| a.target == t && a.hom.image_cone() == face.cone())
                .count();
            if count == 0 {
                violations.push(ComplexViolation::MissingFaceArrow {
                    object: t,
                    face_rays: face.cone().rays().to_vec(),
                });
            } else if count > 1 {
                violations.push(ComplexViolation::DuplicateFaceArrow {
                    object: t,
                    face_rays: face.cone().rays().to_vec(),
                });
            }
        }
    }
    for (i, a) in c.arrows.iter().enumerate() {
        for (j, b) in c.arrows.iter().enumerate() {
            if b.source != a.target {
                continue;
            }
            let composite = b.hom.matrix().mul(a.hom.matrix())?;
            let found = c.arrows.iter().any(|x| {
                x.source == a.source && x.target == b.target && *x.hom.matrix() == composite
            });
            if !found {
                violations.push(ComplexViolation::CompositeNotInComplex { first: i, then: j });
            }
        }
    }
    Ok(violations)
}

/// Check morphism axioms: interior assignments and commuting squares.
pub fn validate_morphism(m: &ComplexMorphism) -> Result<Vec<MorphismViolation>> {
    let mut violations = Vec::new();
    for (i, (t, hom)) in m.assignment.iter().enumerate() {
        if i >= m.source.objects.len()
            || *t >= m.target.objects.len()
            || hom.source() != &m.source.objects[i]
            || hom.target() != &m.target.objects[*t]
        {
            violations.push(MorphismViolation::AssignmentEndpointMismatch { object: i });
            continue;
        }
        if !hom.is_interior() {
            violations.push(MorphismViolation::NonInteriorAssignment { object: i });
        }
    }
    if !violations.is_empty() {
        return Ok(violations);
    }
    for (k, a) in m.arrows_of_source().iter().enumerate() {
        let (t_src, f_src) = &m.assignment[a.source];
        let (t_dst, f_dst) = &m.assignment[a.target];
        let lhs = f_dst.matrix().mul(a.hom.matrix())?;
        let found = m
            .target
            .arrows
            .iter()
            .filter(|b| b.source == *t_src && b.target == *t_dst)
            .any(|b| {
                b.hom
                    .matrix()
                    .mul(f_src.matrix())
                    .map(|rhs| rhs == lhs)
                    .unwrap_or(false)
            });
        if !found {
            violations.push(MorphismViolation::SquareDoesNotCommute { arrow: k });
        }
    }
    Ok(violations)
}

impl ComplexMorphism {
    fn arrows_of_source(&self) -> &[Arrow] {
        &self.source.arrows
    }
}

/// The face complex of a monoid: objects are the faces as standalone
/// monoids in their own group lattices, arrows are the face inclusions.
/// Also records, for each object, its embedding into the root monoid's
/// ambient lattice and the corresponding face handle.
#[derive(Debug, Clone)]
pub struct FaceComplex {
    pub complex: MonoidalComplex,
    pub root: ToricMonoid,
    pub embeddings: Vec<IntMatrix>,
    pub handles: Vec<FaceHandle>,
}

impl FaceComplex {
    /// Index of the object corresponding to the whole monoid.
    pub fn top_object(&self) -> usize {
        self.complex.objects.len() - 1
    }

    /// Index of the face object whose embedded cone matches the given face
    /// cone (in root coordinates).
    pub fn object_of_face_cone(&self, cone: &crate::cone::Cone) -> Option<usize> {
        self.handles.iter().position(|h| h.cone() == cone)
    }

    /// The subcomplex of faces contained in the given face.
    pub fn subcomplex_below(&self, object: usize) -> Subcomplex {
        let top = &self.handles[object];
        let indices = self
            .handles
            .iter()
            .enumerate()
            .filter(|(_, h)| h.leq(top))
            .map(|(i, _)| i)
            .collect();
        Subcomplex::new(indices)
    }
}

pub fn face_complex_of_monoid(p: &ToricMonoid) -> Result<FaceComplex> {
    let handles = p.faces()?;
    let mut objects = Vec::with_capacity(handles.len());
    let mut embeddings = Vec::with_capacity(handles.len());
    for h in &handles {
        let (standalone, embed) = h.standalone()?;
        objects.push(standalone);
        embeddings.push(embed);
    }
    let mut arrows = Vec::new();
    for i in 0..handles.len() {
        for j in 0..handles.len() {
            if !handles[i].leq(&handles[j]) {
                continue;
            }
            let w_j = &embeddings[j];
            let w_j_left = if w_j.cols() == 0 {
                IntMatrix::zero(0, w_j.rows())
            } else {
                left_inverse_on_sublattice(w_j, &full_lattice(w_j.cols()))?
            };
            let matrix = w_j_left.mul(&embeddings[i])?;
            debug_assert_eq!(w_j.mul(&matrix)?, embeddings[i]);
            arrows.push(Arrow {
                source: i,
                target: j,
                hom: MonoidHom::new(objects[i].clone(), objects[j].clone(), matrix)?,
            });
        }
    }
    Ok(FaceComplex {
        complex: MonoidalComplex { objects, arrows },
        root: p.clone(),
        embeddings,
        handles,
    })
}

/// Restrict a morphism to a subcomplex of its target: keep the source
/// objects whose assignment lands in the subcomplex, with all induced
/// arrows.
pub fn restrict_complex(m: &ComplexMorphism, s: &Subcomplex) -> Result<ComplexMorphism> {
    s.validate(m.target())?;
    let survivors: BTreeSet<usize> = m
        .assignment
        .iter()
        .enumerate()
        .filter(|(_, (t, _))| s.indices.contains(t))
        .map(|(i, _)| i)
        .collect();
    let (new_source, src_map) = m.source.extract(&survivors);
    let (new_target, dst_map) = m.target.extract(&s.indices);
    let mut assignment = Vec::new();
    for (old_i, (t, hom)) in m.assignment.iter().enumerate() {
        if src_map[old_i].is_none() {
            continue;
        }
        let new_t = dst_map[*t].expect("assignment target is in the subcomplex");
        assignment.push((new_t, hom.clone()));
    }
    let restricted = ComplexMorphism {
        source: new_source,
        target: new_target,
        assignment,
    };
    Ok(restricted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::ToricMonoid;

    /// The teardrop complex: objects {0, N, N²} with two arrows N ⇀ N².
    pub(crate) fn teardrop() -> MonoidalComplex {
        let zero = ToricMonoid::zero(0);
        let n = ToricMonoid::standard(1);
        let n2 = ToricMonoid::standard(2);
        let arrows = vec![
            Arrow {
                source: 0,
                target: 0,
                hom: MonoidHom::new(zero.clone(), zero.clone(), IntMatrix::identity(0)).unwrap(),
            },
            Arrow {
                source: 1,
                target: 1,
                hom: MonoidHom::new(n.clone(), n.clone(), IntMatrix::identity(1)).unwrap(),
            },
            Arrow {
                source: 2,
                target: 2,
                hom: MonoidHom::new(n2.clone(), n2.clone(), IntMatrix::identity(2)).unwrap(),
            },
            Arrow {
                source: 0,
                target: 1,
                hom: MonoidHom::new(zero.clone(), n.clone(), IntMatrix::zero(1, 0)).unwrap(),
            },
            Arrow {
                source: 0,
                target: 2,
                hom: MonoidHom::new(zero.clone(), n2.clone(), IntMatrix::zero(2, 0)).unwrap(),
            },
            Arrow {
                source: 1,
                target: 2,
                hom: MonoidHom::new(
                    n.clone(),
                    n2.clone(),
                    IntMatrix::from_rows(vec![vec![1], vec![0]]),
                )
                .unwrap(),
            },
            Arrow {
                source: 1,
                target: 2,
                hom: MonoidHom::new(
                    n.clone(),
                    n2.clone(),
                    IntMatrix::from_rows(vec![vec![0], vec![1]]),
                )
                .unwrap(),
            },
        ];
        MonoidalComplex::new(vec![zero, n, n2], arrows)
    }

    #[test]
    fn face_complex_of_n2() {
        let fc = face_complex_of_monoid(&ToricMonoid::standard(2)).unwrap();
        assert_eq!(fc.complex.objects().len(), 4);
        assert_eq!(fc.complex.arrows().len(), 9);
        assert!(validate_complex(&fc.complex).unwrap().is_empty());
    }

    #[test]
    fn face_complex_of_trivial_and_cube() {
        let fc = face_complex_of_monoid(&ToricMonoid::zero(0)).unwrap();
        assert_eq!(fc.complex.objects().len(), 1);
        assert!(validate_complex(&fc.complex).unwrap().is_empty());

        let fc = face_complex_of_monoid(&ToricMonoid::standard(3)).unwrap();
        assert_eq!(fc.complex.objects().len(), 8);
        assert!(validate_complex(&fc.complex).unwrap().is_empty());
    }

    #[test]
    fn face_complex_of_nonsharp_monoid() {
        let zn = ToricMonoid::mixed(1, 1);
        let fc = face_complex_of_monoid(&zn).unwrap();
        assert_eq!(fc.complex.objects().len(), 2);
        assert!(validate_complex(&fc.complex).unwrap().is_empty());
    }

    #[test]
    fn teardrop_is_a_valid_complex() {
        let td = teardrop();
        assert!(validate_complex(&td).unwrap().is_empty());
    }

    #[test]
    fn missing_zero_object_is_flagged() {
        let n = ToricMonoid::standard(1);
        let c = MonoidalComplex::new(
            vec![n.clone()],
            vec![Arrow {
                source: 0,
                target: 0,
                hom: MonoidHom::new(n.clone(), n, IntMatrix::identity(1)).unwrap(),
            }],
        );
        let violations = validate_complex(&c).unwrap();
        assert!(violations
            .iter()
            .any(|v| matches!(v, ComplexViolation::MissingFaceArrow { .. })));
    }

    #[test]
    fn identity_morphism_validates() {
        let fc = face_complex_of_monoid(&ToricMonoid::standard(2)).unwrap();
        let id = fc.complex.identity_morphism().unwrap();
        assert!(validate_morphism(&id).unwrap().is_empty());
    }

    #[test]
    fn axis_assignment_flagged_non_interior() {
        let n = ToricMonoid::standard(1);
        let n2 = ToricMonoid::standard(2);
        let cn = face_complex_of_monoid(&n).unwrap().complex;
        let cn2 = face_complex_of_monoid(&n2).unwrap().complex;
        // send the ray object of C_N onto an axis of N² — not interior
        let zero_obj = cn.objects()[0].clone();
        let assignment = vec![
            (
                0,
                MonoidHom::new(zero_obj, cn2.objects()[0].clone(), IntMatrix::zero(0, 0)).unwrap(),
            ),
            (
                3,
                MonoidHom::new(
                    cn.objects()[1].clone(),
                    cn2.objects()[3].clone(),
                    IntMatrix::from_rows(vec![vec![1], vec![0]]),
                )
                .unwrap(),
            ),
        ];
        let m = ComplexMorphism::new(cn, cn2, assignment);
        let violations = validate_morphism(&m).unwrap();
        assert!(violations
            .iter()
            .any(|v| matches!(v, MorphismViolation::NonInteriorAssignment { object: 1 })));
    }

    #[test]
    fn restrict_identity_to_face_subcomplex() {
        let fc = face_complex_of_monoid(&ToricMonoid::standard(2)).unwrap();
        let id = fc.complex.identity_morphism().unwrap();
        // subcomplex below one of the ray objects
        let ray_obj = (0..fc.complex.objects().len())
            .find(|&i| fc.complex.object(i).dim() == 1)
            .unwrap();
        let sub = fc.subcomplex_below(ray_obj);
        let restricted = restrict_complex(&id, &sub).unwrap();
        assert_eq!(restricted.source().objects().len(), 2);
        assert!(validate_morphism(&restricted).unwrap().is_empty());

        // restricting to the zero subcomplex leaves the zero complex
        let zero_sub = fc.subcomplex_below(0);
        let restricted = restrict_complex(&id, &zero_sub).unwrap();
        assert_eq!(restricted.source().objects().len(), 1);
        assert!(validate_morphism(&restricted).unwrap().is_empty());
    }

    #[test]
    fn composition_of_validated_morphisms_validates() {
        let fc = face_complex_of_monoid(&ToricMonoid::standard(2)).unwrap();
        let id = fc.complex.identity_morphism().unwrap();
        let composed = id.compose(&id).unwrap();
        assert!(validate_morphism(&composed).unwrap().is_empty());
        assert_eq!(composed, id);
    }
}
