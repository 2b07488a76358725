//! The JSON document schema and its conversion to core objects.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use cornerforge_core::{
    make_monomial_map, Arrow, ComplexMorphism, IntMatrix, MonoidHom, MonoidalComplex,
    MonomialMap, ToricMonoid,
};

use crate::{log_info, CliError};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Document {
    pub version: String,
    pub entities: BTreeMap<String, Entity>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum Entity {
    Monoid(MonoidRecord),
    Map(MapRecord),
    Complex(ComplexRecord),
    Refinement(RefinementRecord),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MonoidRecord {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MapRecord {
    pub domain: String,
    pub codomain: String,
    pub mu: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComplexRecord {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ArrowRecord {
    pub source: usize,
    pub target: usize,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RefinementRecord {
    pub source: String,
    pub target: String,
    pub assignment: Vec<AssignmentRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AssignmentRecord {
    pub object: usize,
    pub matrix: Vec<Vec<i64>>,
}

/// Parse and schema-validate a document: version, reference resolution, and
/// primitivity normalization of monoid rays (with a warning).
pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let mut doc: Document = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("JSON parse error: {e}")))?;
    if doc.version != "1" {
        return Err(CliError::input(format!(
            "unsupported document version {:?}",
            doc.version
        )));
    }
    let names: Vec<String> = doc.entities.keys().cloned().collect();
    for name in &names {
        let entity = doc.entities.get(name).cloned().expect("key exists");
        match entity {
            Entity::Monoid(mut m) => {
                let mut changed = false;
                for ray in &mut m.rays {
                    if ray.len() != m.rank {
                        return Err(CliError::input(format!(
                            "monoid {name:?}: ray {ray:?} does not have rank {} entries",
                            m.rank
                        )));
                    }
                    let g = ray.iter().fold(0i64, |g, &x| gcd(g, x));
                    if g > 1 {
                        for x in ray.iter_mut() {
                            *x /= g;
                        }
                        changed = true;
                    }
                }
                if changed {
                    log_info(&format!("monoid {name:?}: rays normalized to primitive vectors"));
                    doc.entities.insert(name.clone(), Entity::Monoid(m));
                }
            }
            Entity::Map(m) => {
                require_kind(&doc, &m.domain, Kind::Monoid, name)?;
                require_kind(&doc, &m.codomain, Kind::Monoid, name)?;
            }
            Entity::Complex(c) => {
                for obj in &c.objects {
                    require_kind(&doc, obj, Kind::Monoid, name)?;
                }
                for a in &c.arrows {
                    if a.source >= c.objects.len() || a.target >= c.objects.len() {
                        return Err(CliError::input(format!(
                            "complex {name:?}: arrow references object out of range"
                        )));
                    }
                }
            }
            Entity::Refinement(r) => {
                require_kind(&doc, &r.source, Kind::Complex, name)?;
                require_kind(&doc, &r.target, Kind::Complex, name)?;
            }
        }
    }
    Ok(doc)
}

pub fn serialize_document(doc: &Document) -> String {
    serde_json::to_string_pretty(doc).expect("document serializes")
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

enum Kind {
    Monoid,
    Complex,
}

fn require_kind(doc: &Document, name: &str, kind: Kind, referrer: &str) -> Result<(), CliError> {
    match (doc.entities.get(name), kind) {
        (Some(Entity::Monoid(_)), Kind::Monoid) => Ok(()),
        (Some(Entity::Complex(_)), Kind::Complex) => Ok(()),
        (Some(_), _) => Err(CliError::input(format!(
            "entity {referrer:?} references {name:?} of the wrong kind"
        ))),
        (None, _) => Err(CliError::input(format!(
            "entity {referrer:?} references unknown entity {name:?}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Building core objects from records
// ---------------------------------------------------------------------------

pub fn get_monoid(doc: &Document, name: &str) -> Result<ToricMonoid, CliError> {
    match doc.entities.get(name) {
        Some(Entity::Monoid(m)) => ToricMonoid::from_rays(m.rank, &m.rays)
            .map_err(|e| CliError::input(format!("monoid {name:?}: {e}"))),
        _ => Err(CliError::input(format!("no monoid entity named {name:?}"))),
    }
}

pub fn get_map(doc: &Document, name: &str) -> Result<MonomialMap, CliError> {
    match doc.entities.get(name) {
        Some(Entity::Map(m)) => {
            let domain = get_monoid(doc, &m.domain)?;
            let codomain = get_monoid(doc, &m.codomain)?;
            let mu = matrix_from_rows(
                &m.mu,
                domain.hilbert_basis().len(),
                codomain.hilbert_basis().len(),
            )
            .map_err(|e| CliError::input(format!("map {name:?}: {e}")))?;
            make_monomial_map(domain, codomain, mu)
                .map_err(|e| CliError::input(format!("map {name:?}: {e}")))
        }
        _ => Err(CliError::input(format!("no map entity named {name:?}"))),
    }
}

pub fn get_complex(doc: &Document, name: &str) -> Result<MonoidalComplex, CliError> {
    match doc.entities.get(name) {
        Some(Entity::Complex(c)) => {
            let objects = c
                .objects
                .iter()
                .map(|o| get_monoid(doc, o))
                .collect::<Result<Vec<_>, _>>()?;
            let mut arrows = Vec::new();
            for (k, a) in c.arrows.iter().enumerate() {
                let src = &objects[a.source];
                let dst = &objects[a.target];
                let matrix = matrix_from_rows(&a.matrix, dst.rank(), src.rank())
                    .map_err(|e| CliError::input(format!("complex {name:?} arrow {k}: {e}")))?;
                let hom = MonoidHom::new(src.clone(), dst.clone(), matrix).map_err(|e| {
                    CliError::input(format!("complex {name:?} arrow {k}: {e}"))
                })?;
                arrows.push(Arrow {
                    source: a.source,
                    target: a.target,
                    hom,
                });
            }
            Ok(MonoidalComplex::new(objects, arrows))
        }
        _ => Err(CliError::input(format!("no complex entity named {name:?}"))),
    }
}

pub fn get_morphism(doc: &Document, name: &str) -> Result<ComplexMorphism, CliError> {
    match doc.entities.get(name) {
        Some(Entity::Refinement(r)) => {
            let source = get_complex(doc, &r.source)?;
            let target = get_complex(doc, &r.target)?;
            if r.assignment.len() != source.objects().len() {
                return Err(CliError::input(format!(
                    "refinement {name:?}: {} assignments for {} source objects",
                    r.assignment.len(),
                    source.objects().len()
                )));
            }
            let mut assignment = Vec::new();
            for (i, a) in r.assignment.iter().enumerate() {
                if a.object >= target.objects().len() {
                    return Err(CliError::input(format!(
                        "refinement {name:?}: assignment {i} references target object out of range"
                    )));
                }
                let src = source.object(i).clone();
                let dst = target.object(a.object).clone();
                let matrix = matrix_from_rows(&a.matrix, dst.rank(), src.rank())
                    .map_err(|e| CliError::input(format!("refinement {name:?} assignment {i}: {e}")))?;
                let hom = MonoidHom::new(src, dst, matrix).map_err(|e| {
                    CliError::input(format!("refinement {name:?} assignment {i}: {e}"))
                })?;
                assignment.push((a.object, hom));
            }
            Ok(ComplexMorphism::new(source, target, assignment))
        }
        _ => Err(CliError::input(format!(
            "no refinement entity named {name:?}"
        ))),
    }
}

pub fn matrix_from_rows(
    rows: &[Vec<i64>],
    expect_rows: usize,
    expect_cols: usize,
) -> Result<IntMatrix, String> {
    if rows.len() != expect_rows {
        return Err(format!(
            "matrix has {} rows, expected {expect_rows}",
            rows.len()
        ));
    }
    let mut m = IntMatrix::zero(expect_rows, expect_cols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != expect_cols {
            return Err(format!(
                "matrix row {i} has {} entries, expected {expect_cols}",
                row.len()
            ));
        }
        for (j, &v) in row.iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

pub fn matrix_to_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.row_vecs()
}

pub fn monoid_record(m: &ToricMonoid) -> MonoidRecord {
    MonoidRecord {
        rank: m.rank(),
        rays: m.cone().rays().to_vec(),
    }
}

/// Serialize a complex into a record plus its object monoid entities (named
/// `prefix{i}`).
pub fn complex_entities(
    prefix: &str,
    complex: &MonoidalComplex,
    entities: &mut BTreeMap<String, Entity>,
) -> ComplexRecord {
    let mut objects = Vec::new();
    for (i, obj) in complex.objects().iter().enumerate() {
        let name = format!("{prefix}{i}");
        entities.insert(name.clone(), Entity::Monoid(monoid_record(obj)));
        objects.push(name);
    }
    let arrows = complex
        .arrows()
        .iter()
        .map(|a| ArrowRecord {
            source: a.source,
            target: a.target,
            matrix: matrix_to_rows(a.hom.matrix()),
        })
        .collect();
    ComplexRecord { objects, arrows }
}

/// Serialize a refinement-style morphism as entities: the source complex,
/// the target complex, and the refinement record itself.
pub fn morphism_entities(
    name: &str,
    source_prefix: &str,
    target_prefix: &str,
    m: &ComplexMorphism,
    entities: &mut BTreeMap<String, Entity>,
) {
    let source = complex_entities(source_prefix, m.source(), entities);
    let target = complex_entities(target_prefix, m.target(), entities);
    let source_name = format!("{source_prefix}_complex");
    let target_name = format!("{target_prefix}_complex");
    entities.insert(source_name.clone(), Entity::Complex(source));
    entities.insert(target_name.clone(), Entity::Complex(target));
    let assignment = m
        .assignment()
        .iter()
        .map(|(t, hom)| AssignmentRecord {
            object: *t,
            matrix: matrix_to_rows(hom.matrix()),
        })
        .collect();
    entities.insert(
        name.to_string(),
        Entity::Refinement(RefinementRecord {
            source: source_name,
            target: target_name,
            assignment,
        }),
    );
}
