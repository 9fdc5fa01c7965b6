//! One function per subcommand. Each returns a typed payload (as JSON), a
//! summary, and a plain-text rendering.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Result};
use isogenous::cohomology::{CohomologyProfile, EquivariantLineBundle, ProfileCache};
use isogenous::curve::{effective_classes_of_degree, CurveWithAction, DivisorClassGroup};
use isogenous::exceptional::{
    formality_certificate, search_sequences, standard_quadruple, verify_exceptional_sequence,
    ExceptionalCertificate, FormalityCertificate, PairOutcome, SearchWindow, Verdict,
};
use isogenous::homological::{
    height_report, hh_restriction_verdict, hkr_homology, phantom_pairing, quasiphantom_verdict,
    HeightReport, HkrHomology, HochschildReport, Restriction,
};
use isogenous::obstruction::{no_go, NoGoOutcome, ProofVerdict};
use isogenous::surface::{Preset, ProductQuotientSurface, SurfaceInvariants};
use serde::Serialize;

use crate::config::{CharacterChoice, RunConfig};
use crate::report::{Status, Summary};

pub struct CommandOutput {
    pub payload: serde_json::Value,
    pub summary: Summary,
    pub text: String,
}

fn output(payload: &impl Serialize, summary: Summary, text: String) -> CommandOutput {
    CommandOutput {
        payload: serde_json::to_value(payload).expect("payload serializes"),
        summary,
        text,
    }
}

pub fn run(config: &RunConfig) -> Result<CommandOutput> {
    match config.command.as_str() {
        "describe" => describe(&surface(config)?),
        "verify" => verify(config, &surface(config)?),
        "search" => search(config, &surface(config)?),
        "height" => height(config, &surface(config)?),
        "nogo" => nogo(config),
        "phantom-pair" => phantom(config),
        other => bail!("unknown command {other}"),
    }
}

fn surface(config: &RunConfig) -> Result<ProductQuotientSurface> {
    config
        .surface
        .as_ref()
        .ok_or_else(|| anyhow!("no surface given"))?
        .build()
}

#[derive(Serialize)]
struct OrbitDescription {
    label: String,
    stabilizer: Vec<i64>,
    stabilizer_order: u64,
    degree: u64,
}

#[derive(Serialize)]
struct CurveDescription {
    genus: u64,
    quotient_genus: u64,
    orbits: Vec<OrbitDescription>,
    class_group: String,
    class_group_free_rank: usize,
    class_group_torsion: Vec<u64>,
    relation_count: usize,
    canonical_class: String,
    canonical_degree: i64,
    /// Effective invariant classes of the smallest orbit degree.
    minimal_effective_degree: i64,
    minimal_effective_classes: Vec<String>,
}

fn describe_curve(curve: &CurveWithAction, classes: &DivisorClassGroup) -> CurveDescription {
    let desc = classes.presented().descriptor();
    let min_degree = curve
        .orbits()
        .iter()
        .map(|o| o.degree as i64)
        .min()
        .unwrap_or(curve.group_order() as i64);
    let mut effective: Vec<String> = effective_classes_of_degree(classes, min_degree)
        .into_iter()
        .map(|(c, _)| classes.format(&c))
        .collect();
    effective.sort();
    CurveDescription {
        genus: curve.genus(),
        quotient_genus: curve.quotient_genus(),
        orbits: curve
            .orbits()
            .iter()
            .map(|o| OrbitDescription {
                label: o.label.clone(),
                stabilizer: o.stabilizer_generator.coords().to_vec(),
                stabilizer_order: o.stabilizer_order,
                degree: o.degree,
            })
            .collect(),
        class_group: desc.to_string(),
        class_group_free_rank: desc.free_rank,
        class_group_torsion: desc.torsion.clone(),
        relation_count: classes.relation_sources().len(),
        canonical_class: classes.format(classes.canonical_class()),
        canonical_degree: classes.canonical_class().degree,
        minimal_effective_degree: min_degree,
        minimal_effective_classes: effective,
    }
}

#[derive(Serialize)]
struct DescribePayload {
    preset: Option<Preset>,
    group: String,
    group_order: u64,
    curve_c: CurveDescription,
    curve_d: CurveDescription,
    invariants: SurfaceInvariants,
    max_exceptional_length: usize,
    moduli_dimension: Option<u32>,
}

fn describe(s: &ProductQuotientSurface) -> Result<CommandOutput> {
    let invariants = s.invariants()?;
    let payload = DescribePayload {
        preset: s.preset(),
        group: s.group().to_string(),
        group_order: s.group_order(),
        curve_c: describe_curve(s.c(), s.c_classes()),
        curve_d: describe_curve(s.d(), s.d_classes()),
        max_exceptional_length: invariants.k_group.free_rank,
        invariants,
        moduli_dimension: s.preset().map(|p| p.moduli_dimension()),
    };
    let mut t = String::new();
    let name = payload
        .preset
        .map(|p| p.to_string())
        .unwrap_or_else(|| "inline".into());
    writeln!(
        t,
        "surface {name}: G = {} (order {})",
        payload.group, payload.group_order
    )?;
    for (label, c) in [("C", &payload.curve_c), ("D", &payload.curve_d)] {
        writeln!(
            t,
            "  {label}: genus {}, {} branch orbits",
            c.genus,
            c.orbits.len()
        )?;
        for o in &c.orbits {
            writeln!(
                t,
                "    {} stabilizer {:?} (order {}), degree {}",
                o.label, o.stabilizer, o.stabilizer_order, o.degree
            )?;
        }
        writeln!(
            t,
            "    Div^G/~ = {} ({} relations)",
            c.class_group, c.relation_count
        )?;
        writeln!(
            t,
            "    K = {} (degree {})",
            c.canonical_class, c.canonical_degree
        )?;
        writeln!(
            t,
            "    effective classes of degree {}: {}",
            c.minimal_effective_degree,
            c.minimal_effective_classes.join(", ")
        )?;
    }
    let inv = &payload.invariants;
    writeln!(
        t,
        "  K^2 = {}, chi_top = {}, b2 = {}",
        inv.k_squared, inv.chi_top, inv.b2
    )?;
    if let Some(h) = &inv.first_homology {
        writeln!(t, "  H_1 = {h}")?;
    }
    writeln!(t, "  Pic = {}", inv.pic)?;
    writeln!(t, "  K(S) = {}", inv.k_group)?;
    writeln!(
        t,
        "  maximal length of an exceptional sequence: {}",
        payload.max_exceptional_length
    )?;
    let summary = Summary::new(Status::Pass, format!("described {name}"));
    Ok(output(&payload, summary, t))
}

/// The collection to verify: explicit bundles, or the quadruple with the
/// requested characters. `None` characters on the quadruple mean trivial.
fn collection(
    config: &RunConfig,
    s: &ProductQuotientSurface,
) -> Result<Vec<EquivariantLineBundle>> {
    if !config.bundles.is_empty() {
        if config.characters.is_some() {
            bail!("--characters applies to the default quadruple; put characters into --bundle instead");
        }
        return config.bundles.iter().map(|b| b.build(s)).collect();
    }
    let rank = s.group().rank();
    let trivial = vec![0i64; rank];
    let chars: Vec<Vec<i64>> = match &config.characters {
        None | Some(CharacterChoice::Trivial) | Some(CharacterChoice::All) => vec![trivial; 4],
        Some(CharacterChoice::List(list)) if list.len() == 4 => list.clone(),
        Some(CharacterChoice::List(list)) => {
            bail!("the quadruple needs 4 characters, got {}", list.len())
        }
    };
    for w in &chars {
        if w.len() != rank {
            bail!("character {w:?} must have {rank} weights");
        }
    }
    Ok(standard_quadruple(
        s,
        [&chars[0], &chars[1], &chars[2], &chars[3]],
    )?)
}

#[derive(Serialize)]
struct ExtTable {
    /// `Ext^•(L_1, L_j)`, i.e. the cohomology of `L_j − L_1`.
    label: String,
    total: Vec<String>,
    invariant: Vec<String>,
    chi: i64,
}

fn forward_tables(
    collection: &[EquivariantLineBundle],
    s: &ProductQuotientSurface,
) -> Result<Vec<ExtTable>> {
    let mut cache = ProfileCache::default();
    let mut out = Vec::new();
    for b in collection.iter().skip(1) {
        let diff = s.hom_bundle(&collection[0], b);
        let p: CohomologyProfile = cache.profile(s, &diff)?;
        out.push(ExtTable {
            label: s.format_bundle(&diff),
            total: p.total.iter().map(|x| x.to_string()).collect(),
            invariant: p.invariant.iter().map(|x| x.to_string()).collect(),
            chi: p.chi_s,
        });
    }
    Ok(out)
}

fn render_table(t: &mut String, table: &ExtTable) -> std::fmt::Result {
    writeln!(t, "  H^k(X, {})  (chi_S = {})", table.label, table.chi)?;
    writeln!(t, "    k | total on X | invariant (= on S)")?;
    for k in 0..3 {
        writeln!(
            t,
            "    {k} | {:>10} | {}",
            table.total[k], table.invariant[k]
        )?;
    }
    Ok(())
}

fn render_certificate(t: &mut String, cert: &ExceptionalCertificate) -> std::fmt::Result {
    for (i, l) in cert.labels.iter().enumerate() {
        writeln!(t, "  L{} = {l}", i + 1)?;
    }
    if let Some(r) = &cert.rejection {
        writeln!(t, "  rejected: {r:?}")?;
    }
    for p in &cert.pairs {
        let what = match p.outcome {
            PairOutcome::Vanishes => "vanishes".to_string(),
            PairOutcome::EulerCharacteristic { chi } => format!("FAILS: chi = {chi} != 0"),
            PairOutcome::NonzeroExt {
                degree,
                lower_bound,
            } => format!("FAILS: Ext^{degree} >= {lower_bound}"),
            PairOutcome::Undetermined => "undetermined".to_string(),
        };
        let inv: Vec<String> = p.profile.invariant.iter().map(|x| x.to_string()).collect();
        writeln!(
            t,
            "  Ext(L{}, L{}) = ({}): {what}",
            p.from + 1,
            p.to + 1,
            inv.join(", ")
        )?;
    }
    writeln!(
        t,
        "  verdict: {:?}, length {} of {}{}",
        cert.verdict,
        cert.length,
        cert.max_length,
        if cert.maximal_length {
            " (maximal)"
        } else {
            ""
        }
    )
}

#[derive(Serialize)]
struct SweepSummary {
    tuples_checked: usize,
    valid: usize,
    invalid: usize,
    undetermined: usize,
    first_non_valid: Option<Vec<String>>,
}

#[derive(Serialize)]
struct VerifyPayload {
    certificate: ExceptionalCertificate,
    forward_ext: Vec<ExtTable>,
    formality: Option<FormalityCertificate>,
    height: Option<HeightReport>,
    restriction: Option<Vec<(u32, Restriction)>>,
    hochschild: Option<HochschildReport>,
    character_sweep: Option<SweepSummary>,
}

fn sweep_quadruple(s: &ProductQuotientSurface) -> Result<SweepSummary> {
    let chars = s.group().characters()?;
    let trivial = s.group().trivial_character();
    let mut sweep = SweepSummary {
        tuples_checked: 0,
        valid: 0,
        invalid: 0,
        undetermined: 0,
        first_non_valid: None,
    };
    for a in &chars {
        for b in &chars {
            for c in &chars {
                let q = standard_quadruple(
                    s,
                    [trivial.weights(), a.weights(), b.weights(), c.weights()],
                )?;
                let cert = verify_exceptional_sequence(&q, s)?;
                sweep.tuples_checked += 1;
                match cert.verdict {
                    Verdict::Valid => sweep.valid += 1,
                    Verdict::Invalid => sweep.invalid += 1,
                    Verdict::Undetermined => sweep.undetermined += 1,
                }
                if cert.verdict != Verdict::Valid && sweep.first_non_valid.is_none() {
                    sweep.first_non_valid = Some(cert.labels.clone());
                }
            }
        }
    }
    Ok(sweep)
}

fn verify(config: &RunConfig, s: &ProductQuotientSurface) -> Result<CommandOutput> {
    let coll = collection(config, s)?;
    let cert = verify_exceptional_sequence(&coll, s)?;
    let valid = cert.verdict == Verdict::Valid;
    let formality = if coll.len() == 4 && valid {
        Some(formality_certificate(&coll, s)?)
    } else {
        None
    };
    let height = if valid {
        Some(height_report(&coll, s)?)
    } else {
        None
    };
    let restriction = height
        .as_ref()
        .and_then(|h| h.height.exact_value())
        .map(hh_restriction_verdict);
    let hochschild = quasiphantom_verdict(&cert, s)?;
    let sweep = if config.bundles.is_empty() && config.characters == Some(CharacterChoice::All) {
        Some(sweep_quadruple(s)?)
    } else {
        None
    };

    let mut status = match cert.verdict {
        Verdict::Valid => Status::Pass,
        Verdict::Invalid => Status::Fail,
        Verdict::Undetermined => Status::Undetermined,
    };
    if let Some(sw) = &sweep {
        if sw.invalid > 0 {
            status = Status::Fail;
        } else if sw.undetermined > 0 && status == Status::Pass {
            status = Status::Undetermined;
        }
    }
    let mut message = match (&cert.verdict, &cert.witness) {
        (Verdict::Valid, _) if cert.maximal_length => {
            "exceptional sequence of maximal length".to_string()
        }
        (Verdict::Valid, _) => format!(
            "exceptional sequence of length {} (not maximal)",
            cert.length
        ),
        (Verdict::Invalid, Some(w)) => format!(
            "not exceptional: witness pair (L{}, L{})",
            w.from + 1,
            w.to + 1
        ),
        (Verdict::Invalid, None) => format!("rejected: {:?}", cert.rejection),
        (Verdict::Undetermined, _) => "some backward Ext groups could not be decided".to_string(),
    };
    if let Some(h) = &hochschild {
        if h.quasiphantom {
            message.push_str("; complement is a quasiphantom");
        }
    }
    if let Some(sw) = &sweep {
        write!(
            message,
            "; {} of {} character choices valid",
            sw.valid, sw.tuples_checked
        )?;
    }

    let payload = VerifyPayload {
        forward_ext: forward_tables(&coll, s)?,
        certificate: cert,
        formality,
        height,
        restriction,
        hochschild,
        character_sweep: sweep,
    };

    let mut t = String::new();
    writeln!(t, "exceptional sequence check")?;
    render_certificate(&mut t, &payload.certificate)?;
    if !payload.forward_ext.is_empty() {
        writeln!(t, "forward Ext from L1")?;
        for table in &payload.forward_ext {
            render_table(&mut t, table)?;
        }
    }
    if let Some(f) = &payload.formality {
        writeln!(
            t,
            "formality: {} ({})",
            if f.certified {
                "certified"
            } else {
                "not certified"
            },
            f.conclusion
        )?;
    }
    if let Some(h) = &payload.height {
        render_height(&mut t, h)?;
    }
    if let Some(r) = &payload.restriction {
        render_restriction(&mut t, r)?;
    }
    if let Some(h) = &payload.hochschild {
        render_hochschild(&mut t, h)?;
    }
    if let Some(sw) = &payload.character_sweep {
        writeln!(
            t,
            "character sweep: {} tuples, {} valid, {} invalid, {} undetermined",
            sw.tuples_checked, sw.valid, sw.invalid, sw.undetermined
        )?;
    }
    writeln!(t, "{message}")?;
    Ok(output(&payload, Summary::new(status, message), t))
}

fn render_height(t: &mut String, h: &HeightReport) -> std::fmt::Result {
    writeln!(t, "heights")?;
    writeln!(t, "  Hom-free: {}", h.hom_free.hom_free)?;
    writeln!(
        t,
        "  cyclically Ext^1-connected: {:?} (all wraparound Ext^1 zero: {})",
        h.cyclic.verdict, h.cyclic.negative_certificate
    )?;
    writeln!(
        t,
        "  h^0(2K_S) = {} (hypothesis holds: {})",
        h.hypothesis.h0_2k, h.hypothesis.holds
    )?;
    writeln!(
        t,
        "  pseudoheight by chains: {}",
        h.chain_pseudoheight.value
    )?;
    writeln!(
        t,
        "  pseudoheight: {}, height: {}",
        h.pseudoheight, h.height
    )
}

fn render_restriction(t: &mut String, r: &[(u32, Restriction)]) -> std::fmt::Result {
    let parts: Vec<String> = r.iter().map(|(k, v)| format!("HH^{k}: {v:?}")).collect();
    writeln!(t, "restriction HH^k(S) -> HH^k(A): {}", parts.join(", "))
}

fn render_hochschild(t: &mut String, h: &HochschildReport) -> std::fmt::Result {
    let dims = |v: &[(i64, u64)]| {
        v.iter()
            .map(|(_, d)| d.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    writeln!(t, "Hochschild homology (t = -2..2)")?;
    writeln!(
        t,
        "  HH_*(S) = ({}), total {}",
        dims(&h.surface.dims),
        h.surface.total
    )?;
    writeln!(
        t,
        "  exceptional part contributes {}",
        h.exceptional_contribution
    )?;
    writeln!(
        t,
        "  HH_*(A) = ({}), K(A) = {}",
        dims(&h.complement),
        h.complement_k_group
    )?;
    writeln!(
        t,
        "  quasiphantom: {}, phantom: {}",
        h.quasiphantom, h.phantom
    )
}

#[derive(Serialize)]
struct SequenceSummary {
    labels: Vec<String>,
    maximal_length: bool,
}

#[derive(Serialize)]
struct OpenSequence {
    labels: Vec<String>,
    open_pairs: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct SearchPayload {
    window: SearchWindow,
    length: usize,
    candidate_count: usize,
    valid: Vec<SequenceSummary>,
    undetermined: Vec<OpenSequence>,
    rejected_repeated: usize,
    nodes_explored: usize,
    all_reverified: bool,
}

fn search(config: &RunConfig, s: &ProductQuotientSurface) -> Result<CommandOutput> {
    let w = config.window.unwrap_or(2);
    if w < 0 {
        bail!("--window must be nonnegative");
    }
    let range = config
        .characters
        .clone()
        .unwrap_or(CharacterChoice::Trivial)
        .to_range(s)?;
    let mut window = SearchWindow::symmetric(w, range);
    window.length = config.length;
    let out = search_sequences(&window, s)?;
    let mut all_reverified = true;
    for cert in &out.valid {
        all_reverified &=
            verify_exceptional_sequence(&cert.collection, s)?.verdict == Verdict::Valid;
    }
    let payload = SearchPayload {
        window: out.window.clone(),
        length: out.length,
        candidate_count: out.candidate_count,
        valid: out
            .valid
            .iter()
            .map(|c| SequenceSummary {
                labels: c.labels.clone(),
                maximal_length: c.maximal_length,
            })
            .collect(),
        undetermined: out
            .undetermined
            .iter()
            .map(|u| OpenSequence {
                labels: u.collection.iter().map(|b| s.format_bundle(b)).collect(),
                open_pairs: u.open_pairs.clone(),
            })
            .collect(),
        rejected_repeated: out.rejected_repeated,
        nodes_explored: out.nodes_explored,
        all_reverified,
    };
    let status = if !all_reverified {
        Status::Fail
    } else if !payload.valid.is_empty() {
        Status::Pass
    } else if !payload.undetermined.is_empty() {
        Status::Undetermined
    } else {
        Status::Fail
    };
    let message = format!(
        "{} valid, {} undetermined sequences of length {} from {} candidates",
        payload.valid.len(),
        payload.undetermined.len(),
        payload.length,
        payload.candidate_count
    );
    let mut t = String::new();
    writeln!(t, "search window [-{w}, {w}], {message}")?;
    for (i, v) in payload.valid.iter().enumerate() {
        writeln!(t, "  {:>4}. {}", i + 1, v.labels.join(", "))?;
    }
    if !payload.undetermined.is_empty() {
        writeln!(
            t,
            "  ({} undetermined sequences listed in the JSON report)",
            payload.undetermined.len()
        )?;
    }
    writeln!(t, "  every valid sequence re-verified: {all_reverified}")?;
    Ok(output(&payload, Summary::new(status, message), t))
}

#[derive(Serialize)]
struct HeightPayload {
    verdict: Verdict,
    labels: Vec<String>,
    height: Option<HeightReport>,
    restriction: Option<Vec<(u32, Restriction)>>,
    hkr: HkrHomology,
}

fn height(config: &RunConfig, s: &ProductQuotientSurface) -> Result<CommandOutput> {
    let coll = collection(config, s)?;
    let cert = verify_exceptional_sequence(&coll, s)?;
    let hkr = hkr_homology(&s.invariants()?);
    let height = if cert.verdict == Verdict::Valid {
        Some(height_report(&coll, s)?)
    } else {
        None
    };
    let restriction = height
        .as_ref()
        .and_then(|h| h.height.exact_value())
        .map(hh_restriction_verdict);
    let (status, message) = match &height {
        None => (
            Status::Fail,
            format!(
                "collection is not a verified exceptional sequence ({:?})",
                cert.verdict
            ),
        ),
        Some(h) if h.height.is_exact() && h.pseudoheight.is_exact() => (
            Status::Pass,
            format!("pseudoheight {} and height {}", h.pseudoheight, h.height),
        ),
        Some(h) => (
            Status::Undetermined,
            format!("pseudoheight {} and height {}", h.pseudoheight, h.height),
        ),
    };
    let payload = HeightPayload {
        verdict: cert.verdict,
        labels: cert.labels,
        height,
        restriction,
        hkr,
    };
    let mut t = String::new();
    for (i, l) in payload.labels.iter().enumerate() {
        writeln!(t, "  L{} = {l}", i + 1)?;
    }
    if let Some(h) = &payload.height {
        render_height(&mut t, h)?;
    }
    if let Some(r) = &payload.restriction {
        render_restriction(&mut t, r)?;
    }
    writeln!(t, "{message}")?;
    Ok(output(&payload, Summary::new(status, message), t))
}

fn nogo(config: &RunConfig) -> Result<CommandOutput> {
    let preset = match &config.surface {
        Some(crate::config::SurfaceSource::Preset(id)) => {
            id.parse::<Preset>().map_err(|e| anyhow!("{e}"))?
        }
        _ => bail!("nogo needs --preset"),
    };
    let outcome = no_go(preset, config.scan_bound)?;
    let mut t = String::new();
    let (status, message) = match &outcome {
        NoGoOutcome::Obstruction(r) => {
            writeln!(t, "no-go for {}: {}", r.preset, r.sequence_shape)?;
            writeln!(
                t,
                "  genera ({}, {}), |G| = {}, degrees in {}Z on C and {}Z on D",
                r.genus_c, r.genus_d, r.group_order, r.degree_lattice.0, r.degree_lattice.1
            )?;
            writeln!(
                t,
                "  chi(e, f) = {} = {}",
                r.formula.expanded,
                r.formula.factored.as_deref().unwrap_or("?")
            )?;
            for p in &r.proofs {
                writeln!(t, "  residue proof ({:?} orientation)", p.orientation)?;
                for line in &p.proof.transcript {
                    writeln!(t, "    {line}")?;
                }
            }
            for sc in &r.scans {
                writeln!(
                    t,
                    "  scan ({:?}): [-{}, {}], {} tuples, {} solutions",
                    sc.orientation,
                    sc.bound,
                    sc.bound,
                    sc.tuples_covered,
                    sc.solutions.len()
                )?;
            }
            writeln!(t, "  scope: {}", r.scope)?;
            let unsat = r
                .proofs
                .iter()
                .all(|p| p.proof.verdict == ProofVerdict::Unsatisfiable);
            if r.unsatisfiable && r.proofs_and_scans_agree {
                (
                    Status::Pass,
                    "UNSATISFIABLE: residue proofs and bounded scans agree".to_string(),
                )
            } else if unsat {
                (Status::Fail, "residue proof and scan disagree".to_string())
            } else {
                (
                    Status::Undetermined,
                    "residue proof inconclusive".to_string(),
                )
            }
        }
        NoGoOutcome::CyclicClassGroups {
            preset,
            c_class_group,
            d_class_group,
        } => {
            writeln!(
                t,
                "{preset}: Div(C)^G/~ = {c_class_group}, Div(D)^G/~ = {d_class_group}"
            )?;
            (
                Status::Pass,
                "invariant class groups are cyclic; the pullback construction has no torsion to use".to_string(),
            )
        }
        NoGoOutcome::NotApplicable { preset } => (
            Status::Pass,
            format!("{preset} carries an exceptional quadruple; no obstruction applies"),
        ),
    };
    writeln!(t, "{message}")?;
    Ok(output(&outcome, Summary::new(status, message), t))
}

fn phantom(config: &RunConfig) -> Result<CommandOutput> {
    let (a, b) = config
        .torsion
        .ok_or_else(|| anyhow!("phantom-pair needs two torsion orders"))?;
    if a == 0 || b == 0 {
        bail!("torsion orders must be positive");
    }
    let p = phantom_pairing(a, b);
    let (status, message) = if p.phantom {
        (
            Status::Pass,
            format!("gcd({a}, {b}) = 1: the product of the complements is a phantom"),
        )
    } else {
        (
            Status::Fail,
            format!("gcd({a}, {b}) = {}: no conclusion", p.gcd),
        )
    };
    Ok(output(
        &p,
        Summary::new(status, message.clone()),
        format!("{message}\n"),
    ))
}
