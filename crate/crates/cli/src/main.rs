//! Batch commands over the duality engine: fixture generation, the two
//! functors, roundtrip verification, axiom checks, grouplike enumeration,
//! and the classifiers.
//!
//! Exit codes: 0 when every verdict passes, 1 for a mathematically negative
//! verdict (a result, not a failure), 2 for input or structural errors and
//! solver diagnostics. Reports are deterministic; wall-clock timings are
//! only included under `--timings`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use hopfoid::coalgebra::{check_coalgebra, grouplikes, localize};
use hopfoid::error::Error;
use hopfoid::fixtures;
use hopfoid::groupoid::{validate_groupoid, FiniteGroupoid};
use hopfoid::hopf::{
    check_hopf_axioms, classify_groupoid_algebroid, convolution_algebroid, convolution_map,
    counit_hom_algebroid, spectral_groupoid, spectral_groupoid_map, unit_iso_groupoid,
    AlgebroidMorphism,
};
use hopfoid::io::{self, Document};
use hopfoid::sheaf::{
    classify_sheaf_coalgebra, counit_hom, pushforward, sheaf_coalgebra, spectral_sheaf,
    spectral_sheaf_map, unit_iso_sheaf, SheafMorphism,
};
use hopfoid::{BaseSet, Coalgebra, CoalgebraMorphism, GroupoidMorphism, HopfAlgebroid, Point};

#[derive(Parser)]
#[command(name = "hopfoid", about = "Exact duality engine between finite groupoids and Hopf algebroids", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input document (JSON with a `type` discriminator).
    #[arg(long)]
    input: PathBuf,
    /// Where to write the report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Include wall-clock timings in the report (breaks byte-for-byte
    /// reproducibility of report files).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a fixture document.
    Gen {
        /// pair-groupoid | cyclic-group | trivial-groupoid | action-groupoid |
        /// sheaf | dependent-grouplikes | idempotent-monoid | primitive-element |
        /// rotation | random-sheaf | random-union
        kind: String,
        /// Size parameter for pair-groupoid.
        #[arg(long)]
        n: Option<usize>,
        /// Order parameter for cyclic-group and action-groupoid.
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated point labels.
        #[arg(long)]
        points: Option<String>,
        /// Comma-separated images of the sorted points under the action.
        #[arg(long)]
        perm: Option<String>,
        /// Comma-separated stalk sizes for `sheaf`.
        #[arg(long)]
        stalks: Option<String>,
        /// Seed for the random fixture families.
        #[arg(long)]
        seed: Option<u64>,
        /// Arrow budget for random unions.
        #[arg(long, default_value_t = 40)]
        max_arrows: usize,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Convolution algebroid of a groupoid file, with the axiom report.
    Dualize {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        output: PathBuf,
    },
    /// Spectral groupoid of an algebroid file, with the classification.
    Reconstruct {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        output: PathBuf,
    },
    /// Unit isomorphisms and triangle identities for a groupoid, sheaf, or
    /// coalgebra file.
    Roundtrip {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Axiom suites: the six algebroid axioms, the coalgebra laws, or the
    /// groupoid axioms, depending on the input type.
    CheckAxioms {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Grouplike elements of every local coalgebra of the input.
    Grouplikes {
        #[command(flatten)]
        io: IoArgs,
    },
    /// The sheaf-coalgebra or groupoid-algebroid classifier.
    Classify {
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Serialize)]
struct Report {
    command: String,
    inputs: Vec<InputStamp>,
    verdicts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    witnesses: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<u128>,
}

#[derive(Serialize)]
struct InputStamp {
    path: String,
    sha256: String,
}

struct Outcome {
    report: Report,
    /// 0 pass, 1 negative verdict, 2 diagnostic.
    code: u8,
    message: Option<String>,
}

fn stamp(path: &Path, bytes: &[u8]) -> InputStamp {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    InputStamp {
        path: path.display().to_string(),
        sha256: format!("{:x}", hasher.finalize()),
    }
}

fn fail(msg: String) -> Outcome {
    Outcome {
        report: Report {
            command: String::new(),
            inputs: vec![],
            verdicts: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            timings_ms: None,
        },
        code: 2,
        message: Some(msg),
    }
}

fn read_document(path: &Path) -> Result<(Document, InputStamp), String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| "input is not UTF-8".to_string())?;
    let doc = io::parse_json(&text).map_err(|e| e.to_string())?;
    Ok((doc, stamp(path, &bytes)))
}

fn write_output(path: &Path, doc: &Document) -> Result<(), String> {
    std::fs::write(path, io::to_json(doc)).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn vector_value(v: &hopfoid::GradedVector) -> Value {
    json!(io::vector_to_doc(v))
}

fn groupoid_morphism_value(m: &GroupoidMorphism) -> Value {
    json!(m.pairs())
}

fn sheaf_morphism_value(m: &SheafMorphism) -> Value {
    json!(m.pairs())
}

fn coalgebra_morphism_value(m: &CoalgebraMorphism) -> Value {
    let images: BTreeMap<String, Value> = m
        .images()
        .iter()
        .map(|(id, v)| (id.clone(), vector_value(v)))
        .collect();
    json!(images)
}

fn algebroid_morphism_value(m: &AlgebroidMorphism) -> Value {
    let images: BTreeMap<String, Value> = m
        .images()
        .iter()
        .map(|(id, v)| (id.clone(), vector_value(v)))
        .collect();
    json!(images)
}

fn parse_points(spec: &str) -> Result<BaseSet, String> {
    BaseSet::from_ids(spec.split(',').map(|s| s.trim().to_string()))
        .map_err(|e| e.to_string())
}

#[derive(Default)]
struct GenParams {
    n: Option<usize>,
    k: Option<usize>,
    points: Option<String>,
    perm: Option<String>,
    stalks: Option<String>,
    seed: Option<u64>,
    max_arrows: usize,
}

fn run_gen(kind: &str, params: GenParams) -> Result<Document, String> {
    let GenParams { n, k, points, perm, stalks, seed, max_arrows } = params;
    match kind {
        "pair-groupoid" => {
            let n = n.ok_or("pair-groupoid requires --n")?;
            if n == 0 {
                return Err("--n must be at least 1".into());
            }
            Ok(io::groupoid_document(&hopfoid::groupoid::pair_groupoid(n)))
        }
        "cyclic-group" => {
            let k = k.ok_or("cyclic-group requires --k")?;
            if k == 0 {
                return Err("--k must be at least 1".into());
            }
            Ok(io::groupoid_document(&hopfoid::groupoid::cyclic_group(k)))
        }
        "trivial-groupoid" => {
            let base = parse_points(&points.ok_or("trivial-groupoid requires --points")?)?;
            Ok(io::groupoid_document(&hopfoid::groupoid::trivial_groupoid(&base)))
        }
        "action-groupoid" => {
            let k = k.ok_or("action-groupoid requires --k")?;
            let base = parse_points(&points.ok_or("action-groupoid requires --points")?)?;
            let images: Vec<String> = perm
                .ok_or("action-groupoid requires --perm")?
                .split(',')
                .map(|s| s.trim().to_string())
                .collect();
            if images.len() != base.len() {
                return Err("--perm must list one image per point".into());
            }
            let sigma: BTreeMap<Point, Point> = base
                .points()
                .iter()
                .cloned()
                .zip(images.into_iter().map(Point::new))
                .collect();
            let g = hopfoid::groupoid::action_groupoid(k, &base, &sigma).map_err(|e| e.to_string())?;
            Ok(io::groupoid_document(&g))
        }
        "sheaf" => {
            let sizes: Vec<usize> = stalks
                .ok_or("sheaf requires --stalks")?
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| "invalid stalk size".to_string()))
                .collect::<Result<_, _>>()?;
            if sizes.is_empty() {
                return Err("--stalks must be nonempty".into());
            }
            Ok(io::sheaf_document(&fixtures::sheaf_with_sizes(&sizes)))
        }
        "dependent-grouplikes" => Ok(io::coalgebra_document(&fixtures::dependent_grouplikes())),
        "idempotent-monoid" => Ok(io::algebroid_document(&fixtures::idempotent_monoid_algebroid())),
        "primitive-element" => Ok(io::algebroid_document(&fixtures::primitive_element_algebroid())),
        "rotation" => Ok(io::coalgebra_document(&fixtures::rotation_coalgebra())),
        "random-sheaf" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.ok_or("random-sheaf requires --seed")?);
            Ok(io::sheaf_document(&fixtures::random_sheaf(&mut rng, 4, 5)))
        }
        "random-union" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.ok_or("random-union requires --seed")?);
            Ok(io::groupoid_document(&fixtures::random_disjoint_union(&mut rng, max_arrows)))
        }
        other => Err(format!("unknown fixture kind {other:?}")),
    }
}

fn axiom_report_value(a: &HopfAlgebroid) -> (Value, bool) {
    let report = check_hopf_axioms(a);
    let law = |c: &hopfoid::coalgebra::LawCheck| {
        json!({ "ok": c.ok, "counterexample": c.counterexample })
    };
    let value = json!({
        "structure": law(&report.structure),
        "i_counit": law(&report.counit),
        "ii_base_compatibility": law(&report.base_compatibility),
        "iii_multiplicativity": law(&report.multiplicativity),
        "iv_antipode_involution": law(&report.antipode_involution),
        "v_antipode_antihom": law(&report.antipode_antihom),
        "vi_antipode_counit": law(&report.antipode_counit),
        "generation_identities": report.generation.as_ref().map(|r| json!({
            "generated_by_witnessed": r.generated_by_witnessed,
            "cocommutative_coassociative": r.cocommutative_coassociative,
            "epsilon_collapse": r.epsilon_collapse,
            "delta_bar_involution": r.delta_bar_involution,
            "pi_antipode_symmetry": r.pi_antipode_symmetry,
            "gamma_fixes_generators": r.gamma_fixes_generators,
        })),
    });
    (value, report.core_ok())
}

fn dualize(input: &Path, output: &Path) -> Outcome {
    let (doc, input_stamp) = match read_document(input) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let Document::Groupoid(gdoc) = doc else {
        return fail(format!("dualize expects a groupoid document, found {}", doc.kind()));
    };
    let g = match io::doc_to_groupoid(&gdoc) {
        Ok(g) => g,
        Err(e) => return fail(e.to_string()),
    };
    let validation = validate_groupoid(&g);
    if !validation.ok {
        return fail(format!("input groupoid is invalid: {}", validation.violation.unwrap_or_default()));
    }
    let a = convolution_algebroid(&g).expect("validated groupoid");
    if let Err(e) = write_output(output, &io::algebroid_document(&a)) {
        return fail(e);
    }
    let (axioms, core_ok) = axiom_report_value(&a);
    let mut verdicts = BTreeMap::new();
    verdicts.insert("axioms".to_string(), axioms);
    verdicts.insert("axioms_pass".to_string(), json!(core_ok));
    Outcome {
        report: Report {
            command: "dualize".into(),
            inputs: vec![input_stamp],
            verdicts,
            witnesses: BTreeMap::new(),
            timings_ms: None,
        },
        code: if core_ok { 0 } else { 1 },
        message: None,
    }
}

fn reconstruct(input: &Path, output: &Path) -> Outcome {
    let (doc, input_stamp) = match read_document(input) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let Document::Algebroid(adoc) = doc else {
        return fail(format!("reconstruct expects an algebroid document, found {}", doc.kind()));
    };
    let a = match io::doc_to_algebroid(&adoc) {
        Ok(a) => a,
        Err(e) => return fail(e.to_string()),
    };
    let sp = match spectral_groupoid(&a) {
        Ok(sp) => sp,
        Err(e @ (Error::SolverInapplicable { .. } | Error::GroupoidIntegrity(_) | Error::Precondition(_))) => {
            return fail(format!("spectral reconstruction failed: {e}"));
        }
        Err(e) => return fail(e.to_string()),
    };
    if let Err(e) = write_output(output, &io::groupoid_document(&sp.groupoid)) {
        return fail(e);
    }
    let classification = match classify_groupoid_algebroid(&a) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let mut verdicts = BTreeMap::new();
    verdicts.insert("arrow_count".to_string(), json!(sp.groupoid.arrow_count()));
    verdicts.insert(
        "is_groupoid_algebroid".to_string(),
        json!(classification.is_groupoid_algebroid),
    );
    if let Some(f) = &classification.failure {
        verdicts.insert(
            "failure".to_string(),
            json!({
                "point": f.point.as_ref().map(|p| p.id().to_string()),
                "arrow_count": f.arrow_count,
                "stalk_dim": f.stalk_dim,
                "rank_defect": f.defect,
                "reason": f.reason,
            }),
        );
    }
    let mut witnesses = BTreeMap::new();
    if let Some((theta, _)) = &classification.witness {
        witnesses.insert("theta".to_string(), algebroid_morphism_value(&theta.morphism));
    }
    let positive = classification.is_groupoid_algebroid;
    Outcome {
        report: Report {
            command: "reconstruct".into(),
            inputs: vec![input_stamp],
            verdicts,
            witnesses,
            timings_ms: None,
        },
        code: if positive { 0 } else { 1 },
        message: None,
    }
}

/// Verdict map, witness map, and the conjunction.
type RoundtripParts = (BTreeMap<String, Value>, BTreeMap<String, Value>, bool);

fn roundtrip_groupoid(g: &FiniteGroupoid) -> Result<RoundtripParts, String> {
    let a = convolution_algebroid(g).map_err(|e| e.to_string())?;
    let unit = unit_iso_groupoid(g).map_err(|e| e.to_string())?;
    let theta = counit_hom_algebroid(&a).map_err(|e| e.to_string())?;
    let t1 = theta
        .morphism
        .compose(&convolution_map(&unit.morphism).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let triangle1 = t1 == AlgebroidMorphism::identity(&a);
    let sp = spectral_groupoid(&a).map_err(|e| e.to_string())?;
    let unit_sp = unit_iso_groupoid(&sp.groupoid).map_err(|e| e.to_string())?;
    let sp_domain = spectral_groupoid(&theta.morphism.source).map_err(|e| e.to_string())?;
    let mapped = spectral_groupoid_map(&theta.morphism, &sp_domain, &sp).map_err(|e| e.to_string())?;
    let triangle2 = mapped.compose(&unit_sp.morphism).map_err(|e| e.to_string())?
        == GroupoidMorphism::identity(&sp.groupoid);
    let all = unit.is_isomorphism && theta.injective && theta.surjective && triangle1 && triangle2;
    let mut verdicts = BTreeMap::new();
    verdicts.insert("unit_is_isomorphism".into(), json!(unit.is_isomorphism));
    verdicts.insert("counit_injective".into(), json!(theta.injective));
    verdicts.insert("counit_surjective".into(), json!(theta.surjective));
    verdicts.insert("triangle_counit_unit".into(), json!(triangle1));
    verdicts.insert("triangle_spectral_unit".into(), json!(triangle2));
    let mut witnesses = BTreeMap::new();
    witnesses.insert("phi".into(), groupoid_morphism_value(&unit.morphism));
    Ok((verdicts, witnesses, all))
}

fn roundtrip_coalgebra(c: &Coalgebra) -> Result<RoundtripParts, String> {
    let psi = counit_hom(c, None).map_err(|e| e.to_string())?;
    let sp = spectral_sheaf(c).map_err(|e| e.to_string())?;
    let unit_sp = unit_iso_sheaf(&sp.sheaf).map_err(|e| e.to_string())?;
    let sp_domain = spectral_sheaf(&psi.morphism.source).map_err(|e| e.to_string())?;
    let mapped = spectral_sheaf_map(&psi.morphism, &sp_domain, &sp).map_err(|e| e.to_string())?;
    let triangle = mapped.compose(&unit_sp.morphism).map_err(|e| e.to_string())?
        == SheafMorphism::identity(&sp.sheaf);
    let mut verdicts = BTreeMap::new();
    verdicts.insert("counit_injective".into(), json!(psi.injective));
    verdicts.insert("counit_surjective".into(), json!(psi.surjective));
    verdicts.insert("triangle_spectral_unit".into(), json!(triangle));
    let mut witnesses = BTreeMap::new();
    witnesses.insert("psi".into(), coalgebra_morphism_value(&psi.morphism));
    Ok((verdicts, witnesses, psi.injective && psi.surjective && triangle))
}

fn roundtrip(input: &Path) -> Outcome {
    let (doc, input_stamp) = match read_document(input) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let result = match &doc {
        Document::Groupoid(gdoc) => match io::doc_to_groupoid(gdoc) {
            Ok(g) => {
                let validation = validate_groupoid(&g);
                if !validation.ok {
                    Err(format!("input groupoid is invalid: {}", validation.violation.unwrap_or_default()))
                } else {
                    roundtrip_groupoid(&g)
                }
            }
            Err(e) => Err(e.to_string()),
        },
        Document::Sheaf(sdoc) => match io::doc_to_sheaf(sdoc) {
            Ok(e) => {
                let unit = match unit_iso_sheaf(&e) {
                    Ok(u) => u,
                    Err(err) => return fail(err.to_string()),
                };
                let c = sheaf_coalgebra(&e);
                let triangle1 = counit_hom(&c, None)
                    .and_then(|psi| {
                        let push = pushforward(&unit.morphism)?;
                        Ok(psi.morphism.compose(&push)? == CoalgebraMorphism::identity(&c))
                    })
                    .map_err(|err| err.to_string());
                match (roundtrip_coalgebra(&c), triangle1) {
                    (Ok((mut verdicts, mut witnesses, ok)), Ok(triangle1)) => {
                        verdicts.insert("unit_is_isomorphism".into(), json!(unit.is_isomorphism));
                        verdicts.insert("triangle_counit_unit".into(), json!(triangle1));
                        witnesses.insert("phi".into(), sheaf_morphism_value(&unit.morphism));
                        Ok((verdicts, witnesses, ok && unit.is_isomorphism && triangle1))
                    }
                    (Err(e), _) | (_, Err(e)) => Err(e),
                }
            }
            Err(e) => Err(e.to_string()),
        },
        Document::Coalgebra(cdoc) => match io::doc_to_coalgebra(cdoc) {
            Ok(c) => roundtrip_coalgebra(&c),
            Err(e) => Err(e.to_string()),
        },
        Document::Algebroid(_) => Err("roundtrip expects a groupoid, sheaf, or coalgebra document".into()),
    };
    match result {
        Ok((verdicts, witnesses, all)) => Outcome {
            report: Report {
                command: "roundtrip".into(),
                inputs: vec![input_stamp],
                verdicts,
                witnesses,
                timings_ms: None,
            },
            code: if all { 0 } else { 1 },
            message: None,
        },
        Err(e) => fail(e),
    }
}

fn check_axioms(input: &Path) -> Outcome {
    let (doc, input_stamp) = match read_document(input) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let (verdicts, ok) = match &doc {
        Document::Algebroid(adoc) => match io::doc_to_algebroid(adoc) {
            Ok(a) => {
                let (value, ok) = axiom_report_value(&a);
                (BTreeMap::from([("axioms".to_string(), value)]), ok)
            }
            Err(e) => return fail(e.to_string()),
        },
        Document::Coalgebra(cdoc) => match io::doc_to_coalgebra(cdoc) {
            Ok(c) => {
                let report = check_coalgebra(&c);
                let value = json!({
                    "counit_ok": { "ok": report.counit_ok.ok, "counterexample": report.counit_ok.counterexample },
                    "coassociative": { "ok": report.coassociative.ok, "counterexample": report.coassociative.counterexample },
                    "cocommutative": { "ok": report.cocommutative.ok, "counterexample": report.cocommutative.counterexample },
                });
                (BTreeMap::from([("laws".to_string(), value)]), report.all_ok())
            }
            Err(e) => return fail(e.to_string()),
        },
        Document::Groupoid(gdoc) => match io::doc_to_groupoid(gdoc) {
            Ok(g) => {
                let report = validate_groupoid(&g);
                let value = json!({ "ok": report.ok, "violation": report.violation });
                (BTreeMap::from([("axioms".to_string(), value)]), report.ok)
            }
            Err(e) => return fail(e.to_string()),
        },
        Document::Sheaf(_) => return fail("check-axioms expects a groupoid, coalgebra, or algebroid".into()),
    };
    Outcome {
        report: Report {
            command: "check-axioms".into(),
            inputs: vec![input_stamp],
            verdicts,
            witnesses: BTreeMap::new(),
            timings_ms: None,
        },
        code: if ok { 0 } else { 1 },
        message: None,
    }
}

fn grouplikes_cmd(input: &Path) -> Outcome {
    let (doc, input_stamp) = match read_document(input) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let c = match &doc {
        Document::Coalgebra(cdoc) => match io::doc_to_coalgebra(cdoc) {
            Ok(c) => c,
            Err(e) => return fail(e.to_string()),
        },
        Document::Algebroid(adoc) => match io::doc_to_algebroid(adoc).and_then(|a| a.coalgebra()) {
            Ok(c) => c,
            Err(e) => return fail(e.to_string()),
        },
        _ => return fail("grouplikes expects a coalgebra or algebroid document".into()),
    };
    let mut per_point = BTreeMap::new();
    for x in c.base().points() {
        let local = match localize(&c, x) {
            Ok(l) => l,
            Err(e) => return fail(e.to_string()),
        };
        match grouplikes(&local) {
            Ok(list) => {
                let values: Vec<Value> = list.iter().map(vector_value).collect();
                per_point.insert(x.id().to_string(), json!(values));
            }
            Err(e) => return fail(format!("at {x}: {e}")),
        }
    }
    Outcome {
        report: Report {
            command: "grouplikes".into(),
            inputs: vec![input_stamp],
            verdicts: BTreeMap::from([("grouplikes".to_string(), json!(per_point))]),
            witnesses: BTreeMap::new(),
            timings_ms: None,
        },
        code: 0,
        message: None,
    }
}

fn classify(input: &Path) -> Outcome {
    let (doc, input_stamp) = match read_document(input) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let mut verdicts = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    let positive = match &doc {
        Document::Coalgebra(cdoc) => {
            let c = match io::doc_to_coalgebra(cdoc) {
                Ok(c) => c,
                Err(e) => return fail(e.to_string()),
            };
            let class = match classify_sheaf_coalgebra(&c) {
                Ok(c) => c,
                Err(e) => return fail(e.to_string()),
            };
            verdicts.insert("is_sheaf_coalgebra".into(), json!(class.is_sheaf_coalgebra));
            if let Some(f) = &class.failure {
                verdicts.insert(
                    "failure".into(),
                    json!({
                        "point": f.point.as_ref().map(|p| p.id().to_string()),
                        "grouplike_count": f.grouplike_count,
                        "stalk_dim": f.stalk_dim,
                        "rank_defect": f.defect,
                        "reason": f.reason,
                    }),
                );
            }
            if let Some(w) = &class.witness {
                witnesses.insert("psi".into(), coalgebra_morphism_value(w));
            }
            class.is_sheaf_coalgebra
        }
        Document::Algebroid(adoc) => {
            let a = match io::doc_to_algebroid(adoc) {
                Ok(a) => a,
                Err(e) => return fail(e.to_string()),
            };
            let class = match classify_groupoid_algebroid(&a) {
                Ok(c) => c,
                Err(e) => return fail(e.to_string()),
            };
            verdicts.insert("is_groupoid_algebroid".into(), json!(class.is_groupoid_algebroid));
            if let Some(f) = &class.failure {
                verdicts.insert(
                    "failure".into(),
                    json!({
                        "point": f.point.as_ref().map(|p| p.id().to_string()),
                        "arrow_count": f.arrow_count,
                        "stalk_dim": f.stalk_dim,
                        "rank_defect": f.defect,
                        "reason": f.reason,
                    }),
                );
            }
            if let Some((theta, _)) = &class.witness {
                witnesses.insert("theta".into(), algebroid_morphism_value(&theta.morphism));
            }
            class.is_groupoid_algebroid
        }
        _ => return fail("classify expects a coalgebra or algebroid document".into()),
    };
    Outcome {
        report: Report {
            command: "classify".into(),
            inputs: vec![input_stamp],
            verdicts,
            witnesses,
            timings_ms: None,
        },
        code: if positive { 0 } else { 1 },
        message: None,
    }
}

fn finish(mut outcome: Outcome, report_path: Option<&Path>, timings: bool, started: Instant) -> ExitCode {
    if timings {
        outcome.report.timings_ms = Some(started.elapsed().as_millis());
    }
    if let Some(msg) = &outcome.message {
        eprintln!("error: {msg}");
    }
    let text = {
        let mut s = serde_json::to_string_pretty(&outcome.report).expect("report serialization");
        s.push('\n');
        s
    };
    match report_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write report {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            if outcome.message.is_none() {
                print!("{text}");
            }
        }
    }
    ExitCode::from(outcome.code)
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = Cli::parse();
    match cli.command {
        Command::Gen {
            kind,
            n,
            k,
            points,
            perm,
            stalks,
            seed,
            max_arrows,
            output,
            report,
            timings,
        } => {
            let params = GenParams { n, k, points, perm, stalks, seed, max_arrows };
            match run_gen(&kind, params) {
                Ok(doc) => {
                    if let Err(e) = write_output(&output, &doc) {
                        return finish(fail(e), report.as_deref(), timings, started);
                    }
                    let outcome = Outcome {
                        report: Report {
                            command: format!("gen {kind}"),
                            inputs: vec![],
                            verdicts: BTreeMap::from([
                                ("kind".to_string(), json!(doc.kind())),
                                ("written".to_string(), json!(output.display().to_string())),
                            ]),
                            witnesses: BTreeMap::new(),
                            timings_ms: None,
                        },
                        code: 0,
                        message: None,
                    };
                    finish(outcome, report.as_deref(), timings, started)
                }
                Err(e) => finish(fail(e), report.as_deref(), timings, started),
            }
        }
        Command::Dualize { io: args, output } => {
            finish(dualize(&args.input, &output), args.report.as_deref(), args.timings, started)
        }
        Command::Reconstruct { io: args, output } => {
            finish(reconstruct(&args.input, &output), args.report.as_deref(), args.timings, started)
        }
        Command::Roundtrip { io: args } => {
            finish(roundtrip(&args.input), args.report.as_deref(), args.timings, started)
        }
        Command::CheckAxioms { io: args } => {
            finish(check_axioms(&args.input), args.report.as_deref(), args.timings, started)
        }
        Command::Grouplikes { io: args } => {
            finish(grouplikes_cmd(&args.input), args.report.as_deref(), args.timings, started)
        }
        Command::Classify { io: args } => {
            finish(classify(&args.input), args.report.as_deref(), args.timings, started)
        }
    }
}
