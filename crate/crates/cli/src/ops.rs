//! Command implementations. Every command returns its exit code and the
//! rendered output; validation failures exit 1, input errors exit 2.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use cornerforge_core::arith::SplitMix64;
use cornerforge_core::{
    blowup_atlas, blowup_base, induced_morphism, lift, pullback_refinement, resolve,
    validate_complex, validate_refinement, BlowupBase, Refinement,
};

use crate::document::{
    complex_entities, get_complex, get_map, get_monoid, get_morphism, matrix_to_rows,
    monoid_record, morphism_entities, parse_document, Document, Entity,
};
use crate::{log_debug, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub struct RunOutput {
    pub exit: u8,
    pub stdout: String,
}

fn ok(stdout: String) -> RunOutput {
    RunOutput { exit: 0, stdout }
}

pub struct CommandIo {
    pub doc: Document,
    pub entities: Vec<String>,
    pub format: Format,
    pub seed: u64,
}

impl CommandIo {
    pub fn from_text(
        text: &str,
        entities: Vec<String>,
        format: Format,
        seed: u64,
    ) -> Result<Self, CliError> {
        Ok(Self {
            doc: parse_document(text)?,
            entities,
            format,
            seed,
        })
    }

    fn entity(&self, i: usize) -> Result<&str, CliError> {
        self.entities
            .get(i)
            .map(String::as_str)
            .ok_or_else(|| CliError::input("missing --entity argument"))
    }
}

fn render<T: Serialize>(format: Format, value: &T, text: String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("output serializes"),
        Format::Text => text,
    }
}

// ---------------------------------------------------------------------------
// dual / hilbert / faces
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DualOutput {
    version: String,
    entities: BTreeMap<String, Entity>,
    hilbert_basis: Vec<Vec<i64>>,
}

pub fn run_dual(io: &CommandIo) -> Result<RunOutput, CliError> {
    let name = io.entity(0)?;
    let m = get_monoid(&io.doc, name)?;
    let dual = m.dual()?;
    let mut entities = BTreeMap::new();
    entities.insert("dual".to_string(), Entity::Monoid(monoid_record(&dual)));
    let out = DualOutput {
        version: "1".into(),
        entities,
        hilbert_basis: dual.hilbert_basis().to_vec(),
    };
    let mut text = String::new();
    writeln!(text, "dual of {name}: rank {}", dual.rank()).unwrap();
    writeln!(text, "rays: {:?}", dual.cone().rays()).unwrap();
    writeln!(text, "hilbert basis: {:?}", dual.hilbert_basis()).unwrap();
    Ok(ok(render(io.format, &out, text)))
}

#[derive(Serialize)]
struct HilbertOutput {
    entity: String,
    hilbert_basis: Vec<Vec<i64>>,
}

pub fn run_hilbert(io: &CommandIo) -> Result<RunOutput, CliError> {
    let name = io.entity(0)?;
    let m = get_monoid(&io.doc, name)?;
    let out = HilbertOutput {
        entity: name.to_string(),
        hilbert_basis: m.hilbert_basis().to_vec(),
    };
    let text = format!("hilbert basis of {name}: {:?}\n", m.hilbert_basis());
    Ok(ok(render(io.format, &out, text)))
}

#[derive(Serialize)]
struct FaceOutput {
    dim: usize,
    codim: usize,
    rays: Vec<Vec<i64>>,
    hilbert_basis: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct FacesOutput {
    entity: String,
    faces: Vec<FaceOutput>,
}

pub fn run_faces(io: &CommandIo) -> Result<RunOutput, CliError> {
    let name = io.entity(0)?;
    let m = get_monoid(&io.doc, name)?;
    let mut faces = Vec::new();
    for f in m.faces()? {
        let monoid = f.monoid()?;
        faces.push(FaceOutput {
            dim: f.dim(),
            codim: f.codim(),
            rays: f.cone().rays().to_vec(),
            hilbert_basis: monoid.hilbert_basis().to_vec(),
        });
    }
    let mut text = format!("faces of {name}: {}\n", faces.len());
    for f in &faces {
        writeln!(
            text,
            "  dim {} codim {} rays {:?} generators {:?}",
            f.dim, f.codim, f.rays, f.hilbert_basis
        )
        .unwrap();
    }
    let out = FacesOutput {
        entity: name.to_string(),
        faces,
    };
    Ok(ok(render(io.format, &out, text)))
}

// ---------------------------------------------------------------------------
// check-complex / check-refinement
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CheckOutput {
    entity: String,
    ok: bool,
    violations: Vec<String>,
}

fn render_check(io: &CommandIo, name: &str, violations: Vec<String>) -> RunOutput {
    let okay = violations.is_empty();
    let out = CheckOutput {
        entity: name.to_string(),
        ok: okay,
        violations: violations.clone(),
    };
    let mut text = if okay {
        format!("{name}: ok\n")
    } else {
        format!("{name}: {} violation(s)\n", violations.len())
    };
    for v in &violations {
        writeln!(text, "  {v}").unwrap();
    }
    RunOutput {
        exit: if okay { 0 } else { 1 },
        stdout: render(io.format, &out, text),
    }
}

pub fn run_check_complex(io: &CommandIo) -> Result<RunOutput, CliError> {
    let name = io.entity(0)?;
    let c = get_complex(&io.doc, name)?;
    let violations = validate_complex(&c)?
        .into_iter()
        .map(|v| v.to_string())
        .collect();
    Ok(render_check(io, name, violations))
}

pub fn run_check_refinement(io: &CommandIo) -> Result<RunOutput, CliError> {
    let name = io.entity(0)?;
    let m = get_morphism(&io.doc, name)?;
    let violations = match validate_refinement(&m)? {
        Ok(_) => Vec::new(),
        Err(vs) => vs.into_iter().map(|v| v.to_string()).collect(),
    };
    Ok(render_check(io, name, violations))
}

// ---------------------------------------------------------------------------
// blowup
// ---------------------------------------------------------------------------

/// Build a refinement entity against the canonical dual face complex of the
/// base; the record's target complex must match it exactly.
fn aligned_refinement(
    doc: &Document,
    name: &str,
    base: &BlowupBase,
) -> Result<Refinement, CliError> {
    let morphism = get_morphism(doc, name)?;
    if morphism.target() != &base.face_complex.complex {
        return Err(CliError::input(format!(
            "refinement {name:?}: target complex does not match the face complex of the dual \
             (objects and arrows must appear in canonical order)"
        )));
    }
    match validate_refinement(&morphism)? {
        Ok(r) => Ok(r),
        Err(vs) => Err(CliError::validation(
            vs.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("\n"),
        )),
    }
}

#[derive(Serialize)]
struct ChartOut {
    index: usize,
    source_object: usize,
    fan_cone: Vec<Vec<i64>>,
    hilbert_basis: Vec<Vec<i64>>,
    blowdown: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct GluingOut {
    charts: (usize, usize),
    mutual_face: Vec<Vec<i64>>,
    localized_generators: Vec<Vec<i64>>,
    transition: Vec<Vec<i64>>,
    transition_back: Vec<Vec<i64>>,
    separating: Option<Vec<i64>>,
}

#[derive(Serialize)]
struct StratumOut {
    source_object: usize,
    base_object: usize,
    codim: usize,
}

#[derive(Serialize)]
struct BlowupOutput {
    version: String,
    entities: BTreeMap<String, Entity>,
    base_generators: Vec<Vec<i64>>,
    units_rank: usize,
    charts: Vec<ChartOut>,
    gluings: Vec<GluingOut>,
    strata: Vec<StratumOut>,
}

pub fn run_blowup(io: &CommandIo) -> Result<RunOutput, CliError> {
    let p_name = io.entity(0)?;
    let r_name = io.entity(1)?;
    let p = get_monoid(&io.doc, p_name)?;
    let base = blowup_base(&p)?;
    let refinement = aligned_refinement(&io.doc, r_name, &base)?;
    let atlas = blowup_atlas(&p, &refinement)?;
    log_debug(&format!(
        "atlas over {p_name}: {} charts, {} gluings",
        atlas.charts.len(),
        atlas.gluings.len()
    ));

    let mut entities = BTreeMap::new();
    entities.insert(
        "base".to_string(),
        Entity::Monoid(monoid_record(&atlas.base.sharp_full)),
    );
    entities.insert(
        "dual".to_string(),
        Entity::Monoid(monoid_record(&atlas.base.dual)),
    );
    morphism_entities("beta", "stratum", "dualface", atlas.refinement.morphism(), &mut entities);
    // the blow-up complex under its own name, for round-tripping through
    // check-complex
    let blowup_complex = complex_entities("bstratum", &atlas.complex, &mut entities);
    entities.insert(
        "blowup_complex".to_string(),
        Entity::Complex(blowup_complex),
    );
    let mut charts = Vec::new();
    for (i, c) in atlas.charts.iter().enumerate() {
        entities.insert(
            format!("chart{i}"),
            Entity::Monoid(monoid_record(&c.monoid)),
        );
        entities.insert(
            format!("blowdown{i}"),
            Entity::Map(crate::document::MapRecord {
                domain: format!("chart{i}"),
                codomain: "base".to_string(),
                mu: matrix_to_rows(&c.blowdown),
            }),
        );
        charts.push(ChartOut {
            index: i,
            source_object: c.source_object,
            fan_cone: c.fan_cone.rays().to_vec(),
            hilbert_basis: c.monoid.hilbert_basis().to_vec(),
            blowdown: matrix_to_rows(&c.blowdown),
        });
    }
    let gluings = atlas
        .gluings
        .iter()
        .map(|g| GluingOut {
            charts: g.charts,
            mutual_face: g.mutual_face.rays().to_vec(),
            localized_generators: g.localized.hilbert_basis().to_vec(),
            transition: matrix_to_rows(&g.transition),
            transition_back: matrix_to_rows(&g.transition_back),
            separating: g.separating.clone(),
        })
        .collect();
    let strata = atlas
        .strata
        .iter()
        .map(|s| StratumOut {
            source_object: s.source_object,
            base_object: s.base_object,
            codim: s.codim,
        })
        .collect();
    let out = BlowupOutput {
        version: "1".into(),
        entities,
        base_generators: atlas.base_generators.clone(),
        units_rank: atlas.base.units.rank(),
        charts,
        gluings,
        strata,
    };

    let mut text = String::new();
    writeln!(
        text,
        "blow-up of {p_name} along {r_name}: {} chart(s), {} gluing(s)",
        out.charts.len(),
        out.gluings.len()
    )
    .unwrap();
    writeln!(text, "base generators: {:?}", out.base_generators).unwrap();
    if out.units_rank > 0 {
        writeln!(text, "unit factor rank: {}", out.units_rank).unwrap();
    }
    for c in &out.charts {
        writeln!(text, "chart {}: fan cone {:?}", c.index, c.fan_cone).unwrap();
        writeln!(text, "  hilbert basis: {:?}", c.hilbert_basis).unwrap();
        writeln!(text, "  blow-down matrix: {:?}", c.blowdown).unwrap();
    }
    for g in &out.gluings {
        writeln!(
            text,
            "gluing ({}, {}): mutual face {:?}",
            g.charts.0, g.charts.1, g.mutual_face
        )
        .unwrap();
        writeln!(text, "  localized generators: {:?}", g.localized_generators).unwrap();
        writeln!(text, "  transition: {:?}", g.transition).unwrap();
        writeln!(text, "  transition back: {:?}", g.transition_back).unwrap();
        match &g.separating {
            Some(q) => writeln!(text, "  separating functional: {q:?}").unwrap(),
            None => writeln!(text, "  separating functional: none (face not proper)").unwrap(),
        }
    }
    writeln!(
        text,
        "blow-up complex: {} object(s); strata (source, base, codim): {:?}",
        atlas.complex.objects().len(),
        out.strata
            .iter()
            .map(|s| (s.source_object, s.base_object, s.codim))
            .collect::<Vec<_>>()
    )
    .unwrap();
    Ok(ok(render(io.format, &out, text)))
}

// ---------------------------------------------------------------------------
// lift
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LiftOutput {
    map: String,
    chart: usize,
    chart_hilbert_basis: Vec<Vec<i64>>,
    exponents: Vec<Vec<i64>>,
}

pub fn run_lift(io: &CommandIo) -> Result<RunOutput, CliError> {
    let f_name = io.entity(0)?;
    let r_name = io.entity(1)?;
    let f = get_map(&io.doc, f_name)?;
    let base = blowup_base(f.codomain())?;
    let refinement = aligned_refinement(&io.doc, r_name, &base)?;
    let atlas = blowup_atlas(f.codomain(), &refinement)?;
    let lifted = lift(&f, &atlas).map_err(|e| CliError::validation(e.to_string()))?;
    let out = LiftOutput {
        map: f_name.to_string(),
        chart: lifted.chart,
        chart_hilbert_basis: atlas.charts[lifted.chart].monoid.hilbert_basis().to_vec(),
        exponents: matrix_to_rows(lifted.map.exponents()),
    };
    let mut text = String::new();
    writeln!(text, "lift of {f_name} into chart {}", out.chart).unwrap();
    writeln!(text, "chart hilbert basis: {:?}", out.chart_hilbert_basis).unwrap();
    writeln!(text, "lifted exponents: {:?}", out.exponents).unwrap();
    Ok(ok(render(io.format, &out, text)))
}

// ---------------------------------------------------------------------------
// pullback
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PullbackOutput {
    version: String,
    entities: BTreeMap<String, Entity>,
    assignment_counts: Vec<usize>,
}

pub fn run_pullback(io: &CommandIo) -> Result<RunOutput, CliError> {
    let f_name = io.entity(0)?;
    let r_name = io.entity(1)?;
    let f = get_map(&io.doc, f_name)?;
    let base = blowup_base(f.codomain())?;
    let refinement = aligned_refinement(&io.doc, r_name, &base)?;
    let f_nat = induced_morphism(&f)?;
    let data =
        pullback_refinement(&f_nat, &refinement).map_err(|e| CliError::validation(e.to_string()))?;
    let mut entities = BTreeMap::new();
    morphism_entities(
        "pullback",
        "pb",
        "ydual",
        data.refinement.morphism(),
        &mut entities,
    );
    let out = PullbackOutput {
        version: "1".into(),
        entities,
        assignment_counts: data.assignment_counts.clone(),
    };
    let mut text = String::new();
    writeln!(
        text,
        "pullback of {r_name} along {f_name}: {} object(s)",
        data.refinement.source().objects().len()
    )
    .unwrap();
    for (i, obj) in data.refinement.source().objects().iter().enumerate() {
        writeln!(
            text,
            "  object {i}: dim {} image rays {:?}",
            obj.dim(),
            data.refinement.morphism().hom(i).image_cone().rays()
        )
        .unwrap();
    }
    writeln!(
        text,
        "universal morphism assignment counts: {:?}",
        data.assignment_counts
    )
    .unwrap();
    Ok(ok(render(io.format, &out, text)))
}

// ---------------------------------------------------------------------------
// resolve
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ResolveOutput {
    version: String,
    entities: BTreeMap<String, Entity>,
    charts: usize,
    all_smooth: bool,
}

pub fn run_resolve(io: &CommandIo) -> Result<RunOutput, CliError> {
    let name = io.entity(0)?;
    let p = get_monoid(&io.doc, name)?;
    let refinement = resolve(&p).map_err(|e| CliError::validation(e.to_string()))?;
    let atlas = blowup_atlas(&p, &refinement)?;
    let mut all_smooth = true;
    for c in &atlas.charts {
        if !c.monoid.is_smooth()? {
            all_smooth = false;
        }
    }
    let mut entities = BTreeMap::new();
    morphism_entities(
        "resolution",
        "cell",
        "dualface",
        refinement.morphism(),
        &mut entities,
    );
    let out = ResolveOutput {
        version: "1".into(),
        entities,
        charts: atlas.charts.len(),
        all_smooth,
    };
    let mut text = String::new();
    writeln!(
        text,
        "resolution of {name}: {} smooth chart(s)",
        atlas.charts.len()
    )
    .unwrap();
    for (i, c) in atlas.charts.iter().enumerate() {
        writeln!(
            text,
            "  chart {i}: fan cone {:?}, hilbert basis {:?}",
            c.fan_cone.rays(),
            c.monoid.hilbert_basis()
        )
        .unwrap();
    }
    Ok(ok(render(io.format, &out, text)))
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SampleOut {
    x: Vec<f64>,
    value: Vec<f64>,
}

#[derive(Serialize)]
struct EvalOutput {
    map: String,
    seed: u64,
    samples: Vec<SampleOut>,
}

pub fn run_eval(io: &CommandIo) -> Result<RunOutput, CliError> {
    let name = io.entity(0)?;
    let f = get_map(&io.doc, name)?;
    let mut rng = SplitMix64::new(io.seed);
    let mut samples = Vec::new();
    for _ in 0..5 {
        let x = f.sample_domain_point(&mut rng);
        let value = f.evaluate(&x).map_err(|e| CliError::validation(e.to_string()))?;
        samples.push(SampleOut { x, value });
    }
    let out = EvalOutput {
        map: name.to_string(),
        seed: io.seed,
        samples,
    };
    let mut text = String::new();
    writeln!(text, "evaluation of {name} (seed {})", io.seed).unwrap();
    for s in &out.samples {
        writeln!(text, "  {:?} -> {:?}", s.x, s.value).unwrap();
    }
    Ok(ok(render(io.format, &out, text)))
}
