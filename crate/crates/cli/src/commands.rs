//! The six commands, each mapping a validated subject to a report and an
//! optional JSON result.

use std::sync::Arc;

use holodual_core::cyclo::Cyclotomic;
use holodual_core::finab::{dual_group, evaluation_map, is_isomorphism, pair, FiniteAbelianGroup};
use holodual_core::hopf::{
    check_hopf_axioms, double_dual_canonical, dual_hopf, evaluation_pairing_map, function_algebra_hopf,
    group_algebra_hopf, is_hopf_isomorphism, is_hopf_morphism, spectrum_abelian_group_algebra, spectrum_of_group,
    FDHopf, FiniteGroup, Vector,
};
use holodual_core::hopftowers::{holomorphic_dual, reflexivity_check, spectrum_consistency, Direction, HopfTower};
use holodual_core::locfun::{decomposition_report, LocallyConstantFunction};
use holodual_core::report::anchors;
use holodual_core::towers::{dual_ind, dual_pro, reflexivity_check_ind, reflexivity_check_pro, IndGroup, ProGroup};
use holodual_core::{CheckRecord, Rational, Report};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::document::{default_hopf_tower, Subject};
use crate::CliError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Command {
    Dual,
    Reflexivity,
    HopfAxioms,
    Decompose,
    Spectrum,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dual => "dual",
            Command::Reflexivity => "reflexivity",
            Command::HopfAxioms => "hopf-axioms",
            Command::Decompose => "decompose",
            Command::Spectrum => "spectrum",
            Command::Report => "report",
        }
    }

    const SINGLE: [Command; 5] = [
        Command::Dual,
        Command::Reflexivity,
        Command::HopfAxioms,
        Command::Decompose,
        Command::Spectrum,
    ];
}

pub struct CommandOutput {
    pub report: Report,
    pub result: Option<Value>,
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

pub fn run(command: Command, subject: &Subject, seed: u64) -> Result<CommandOutput, CliError> {
    let na = || CliError::NotApplicable {
        command: command.name(),
        kind: subject.kind(),
    };
    match command {
        Command::Dual => dual(subject).ok_or_else(na)?,
        Command::Reflexivity => reflexivity(subject).ok_or_else(na)?,
        Command::HopfAxioms => hopf_axioms(subject).ok_or_else(na)?,
        Command::Decompose => decompose(subject).ok_or_else(na)?,
        Command::Spectrum => spectrum(subject).ok_or_else(na)?,
        Command::Report => full_report(subject, seed),
    }
}

fn output(report: Report, result: Option<Value>) -> Result<CommandOutput, CliError> {
    Ok(CommandOutput { report, result })
}

fn abelian_doc(g: &FiniteAbelianGroup) -> Value {
    json!({"kind": "finite_abelian", "invariant_factors": g.invariant_factors()})
}

fn ind_doc(t: &IndGroup) -> Value {
    json!({
        "kind": "ind_tower",
        "levels": t.levels().iter().map(|g| g.invariant_factors().to_vec()).collect::<Vec<_>>(),
        "transitions": t.transitions().iter().map(|h| h.matrix().to_vec()).collect::<Vec<_>>(),
    })
}

fn pro_doc(t: &ProGroup) -> Value {
    json!({
        "kind": "pro_tower",
        "levels": t.levels().iter().map(|g| g.invariant_factors().to_vec()).collect::<Vec<_>>(),
        "transitions": t.transitions().iter().map(|h| h.matrix().to_vec()).collect::<Vec<_>>(),
    })
}

fn hopf_summary(h: &FDHopf) -> Value {
    json!({
        "label": h.label(),
        "dim": h.dim(),
        "commutative": h.is_commutative(),
        "cocommutative": h.is_cocommutative(),
    })
}

fn tower_summary(h: &HopfTower) -> Value {
    json!({
        "direction": h.direction().to_string(),
        "provenance": h.provenance(),
        "dims": h.dims(),
        "levels": h.levels().iter().map(|l| l.label().to_string()).collect::<Vec<_>>(),
    })
}

fn level_axioms(h: &HopfTower, subject: String) -> Report {
    let mut report = Report::new(subject);
    for (n, level) in h.levels().iter().enumerate() {
        report.extend(check_hopf_axioms(level).records.into_iter().map(|r| r.at_level(n + 1)));
    }
    report
}

fn dual(subject: &Subject) -> Option<Result<CommandOutput, CliError>> {
    Some(match subject {
        Subject::Abelian(g) => {
            let d = dual_group(g);
            let mut r = Report::new(format!("dual of {g}"));
            r.push(CheckRecord::new(
                "dual group has the order of the group",
                anchors::DUAL_GROUP,
                d.order() == g.order(),
            ));
            r.push(CheckRecord::new(
                "evaluation map is an isomorphism",
                anchors::ABELIAN_REFLEXIVITY,
                is_isomorphism(&evaluation_map(g)),
            ));
            output(r, Some(abelian_doc(d.underlying())))
        }
        Subject::Ind(t) => {
            let d = dual_ind(t);
            let mut r = Report::new(format!("dual of an ind-tower of depth {}", t.depth()));
            for (i, h) in d.transitions().iter().enumerate() {
                r.push(
                    CheckRecord::new("dual transition is surjective", anchors::LOCALLY_FINITE_DUAL, h.is_surjective())
                        .at_level(i + 1),
                );
            }
            output(r, Some(pro_doc(&d)))
        }
        Subject::Pro(t) => {
            let d = dual_pro(t);
            let mut r = Report::new(format!("dual of a pro-tower of depth {}", t.depth()));
            for (i, h) in d.transitions().iter().enumerate() {
                r.push(
                    CheckRecord::new("dual transition is injective", anchors::PROFINITE_DUAL, h.is_injective())
                        .at_level(i + 1),
                );
            }
            output(r, Some(ind_doc(&d)))
        }
        Subject::Group(g) => group_dual(g),
        Subject::Hopf(h) => hopf_dual(h),
        Subject::GroupTower(t) => default_hopf_tower(t).and_then(|h| tower_dual(&h)),
        Subject::HopfTower(h) => tower_dual(h),
        Subject::Function(_) => return None,
    })
}

fn group_dual(g: &FiniteGroup) -> Result<CommandOutput, CliError> {
    let pairing = evaluation_pairing_map(g).map_err(invalid)?;
    let mut r = Report::new(format!("dual of C[{}]", g.name()));
    r.push(CheckRecord::new(
        "evaluation pairing identifies C^G with the dual of C[G]",
        anchors::LOCALLY_FINITE_HOPF,
        is_hopf_isomorphism(&pairing),
    ));
    output(r, Some(hopf_summary(pairing.target())))
}

fn hopf_dual(h: &FDHopf) -> Result<CommandOutput, CliError> {
    let axioms = check_hopf_axioms(h);
    if !axioms.passed() {
        return output(axioms, None);
    }
    let d = dual_hopf(h).map_err(invalid)?;
    let mut r = Report::new(format!("dual of {}", h.label()));
    r.merge(check_hopf_axioms(&d));
    let dd = double_dual_canonical(h).map_err(invalid)?;
    r.push(CheckRecord::new(
        "canonical map to the double dual is a Hopf isomorphism",
        anchors::DOUBLE_DUAL,
        is_hopf_isomorphism(&dd),
    ));
    output(r, Some(hopf_summary(&d)))
}

fn tower_dual(h: &HopfTower) -> Result<CommandOutput, CliError> {
    let (d, certificate) = holomorphic_dual(h).map_err(invalid)?;
    let mut r = level_axioms(&d, format!("holomorphic dual of a {} tower of depth {}", h.direction(), h.depth()));
    let (class, anchor) = match d.direction() {
        Direction::Ind => ("dual transition is injective", anchors::LOCALLY_FINITE_HOPF),
        Direction::Pro => ("dual transition is surjective", anchors::PROFINITE_HOPF),
    };
    for (i, t) in d.transitions().iter().enumerate() {
        r.push(CheckRecord::new("dual transition is a Hopf morphism", anchor, is_hopf_morphism(t)).at_level(i + 1));
        let ok = match d.direction() {
            Direction::Ind => t.is_injective(),
            Direction::Pro => t.is_surjective(),
        };
        r.push(CheckRecord::new(class, anchor, ok).at_level(i + 1));
    }
    let mut result = tower_summary(&d);
    result["envelope_certificate"] = Value::String(certificate.to_string());
    output(r, Some(result))
}

fn hopf_reflexivity(h: &FDHopf) -> Result<Report, CliError> {
    let axioms = check_hopf_axioms(h);
    if !axioms.passed() {
        return Ok(axioms);
    }
    let dd = double_dual_canonical(h).map_err(invalid)?;
    let mut r = Report::new(format!("double dual of {}", h.label()));
    r.push(CheckRecord::new(
        "canonical map to the double dual is the identity matrix",
        anchors::DOUBLE_DUAL,
        dd.matrix().is_identity(),
    ));
    r.push(CheckRecord::new(
        "canonical map to the double dual is a Hopf isomorphism",
        anchors::DOUBLE_DUAL,
        is_hopf_isomorphism(&dd),
    ));
    Ok(r)
}

fn reflexivity(subject: &Subject) -> Option<Result<CommandOutput, CliError>> {
    Some(match subject {
        Subject::Abelian(g) => IndGroup::new(vec![g.clone()], vec![])
            .map_err(invalid)
            .and_then(|t| output(reflexivity_check_ind(&t), None)),
        Subject::Ind(t) => output(reflexivity_check_ind(t), None),
        Subject::Pro(t) => output(reflexivity_check_pro(t), None),
        Subject::Hopf(h) => hopf_reflexivity(h).and_then(|r| output(r, None)),
        Subject::Group(g) => (|| {
            let mut r = Report::new(format!("reflexivity of C[{0}] and C^{0}", g.name()));
            r.merge(hopf_reflexivity(&group_algebra_hopf(g))?);
            r.merge(hopf_reflexivity(&function_algebra_hopf(g))?);
            r.merge(group_dual(g)?.report);
            output(r, None)
        })(),
        Subject::GroupTower(t) => default_hopf_tower(t).and_then(|h| tower_reflexivity(&h)),
        Subject::HopfTower(h) => tower_reflexivity(h),
        Subject::Function(_) => return None,
    })
}

fn tower_reflexivity(h: &HopfTower) -> Result<CommandOutput, CliError> {
    let r = reflexivity_check(h).map_err(invalid)?;
    output(r, Some(tower_summary(h)))
}

fn hopf_axioms(subject: &Subject) -> Option<Result<CommandOutput, CliError>> {
    Some(match subject {
        Subject::Hopf(h) => output(check_hopf_axioms(h), Some(hopf_summary(h))),
        Subject::Group(g) => {
            let mut r = Report::new(format!("Hopf axioms for C[{0}] and C^{0}", g.name()));
            r.merge(check_hopf_axioms(&group_algebra_hopf(g)));
            r.merge(check_hopf_axioms(&function_algebra_hopf(g)));
            output(r, None)
        }
        Subject::GroupTower(t) => default_hopf_tower(t).and_then(|h| {
            let r = level_axioms(&h, format!("Hopf axioms at every level of a {} tower", h.direction()));
            output(r, Some(tower_summary(&h)))
        }),
        Subject::HopfTower(h) => {
            let r = level_axioms(h, format!("Hopf axioms at every level of a {} tower", h.direction()));
            output(r, Some(tower_summary(h)))
        }
        _ => return None,
    })
}

fn decompose(subject: &Subject) -> Option<Result<CommandOutput, CliError>> {
    let Subject::Function(f) = subject else {
        return None;
    };
    let (d, report) = decomposition_report(f);
    let group = d.group();
    let coefficients: Vec<Value> = group
        .elements()
        .zip(d.coefficients())
        .map(|(chi, c)| json!({"character": chi.coords(), "coefficient": c}))
        .collect();
    let result = json!({
        "level": f.level(),
        "minimal_level": f.minimal_level(),
        "group": group.invariant_factors(),
        "coefficients": coefficients,
    });
    Some(output(report, Some(result)))
}

fn spectrum(subject: &Subject) -> Option<Result<CommandOutput, CliError>> {
    let summary = |g: &FiniteAbelianGroup, n: usize| json!({"group": g.invariant_factors(), "points": n});
    Some(match subject {
        Subject::Abelian(g) => {
            let s = spectrum_abelian_group_algebra(g);
            output(s.verify(), Some(summary(s.group(), s.len())))
        }
        Subject::Group(g) => spectrum_of_group(g)
            .map_err(invalid)
            .and_then(|s| output(s.verify(), Some(summary(s.group(), s.len())))),
        Subject::Ind(t) => spectrum_consistency(t).map_err(invalid).and_then(|r| output(r, None)),
        _ => return None,
    })
}

/// Every applicable command plus a seeded random suite.
fn full_report(subject: &Subject, seed: u64) -> Result<CommandOutput, CliError> {
    let mut report = Report::new(format!("full report for a {} document", subject.kind()));
    let mut results = serde_json::Map::new();
    for c in Command::SINGLE {
        if c == Command::Spectrum && matches!(subject, Subject::Group(g) if !g.is_abelian()) {
            continue;
        }
        match run(c, subject, seed) {
            Ok(out) => {
                report.merge(out.report);
                if let Some(v) = out.result {
                    results.insert(c.name().to_string(), v);
                }
            }
            Err(CliError::NotApplicable { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    report.merge(random_suite(subject, seed));
    Ok(CommandOutput {
        report,
        result: Some(Value::Object(results)),
    })
}

const SAMPLES: usize = 16;

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=7).into())
}

fn random_suite(subject: &Subject, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new(format!("random samples (seed {seed})"));
    match subject {
        Subject::Abelian(g) => r.push(random_pairing(g, &mut rng)),
        Subject::Ind(t) => {
            for (n, g) in t.levels().iter().enumerate() {
                r.push(random_pairing(g, &mut rng).at_level(n + 1));
            }
        }
        Subject::Pro(t) => random_functions(&Arc::new(t.clone()), &mut rng, &mut r),
        Subject::Function(f) => random_functions(f.tower(), &mut rng, &mut r),
        Subject::Hopf(h) => random_hopf(h, &mut rng, &mut r),
        Subject::Group(g) => {
            random_hopf(&group_algebra_hopf(g), &mut rng, &mut r);
            random_hopf(&function_algebra_hopf(g), &mut rng, &mut r);
        }
        Subject::GroupTower(_) | Subject::HopfTower(_) => {}
    }
    r
}

fn random_pairing(g: &FiniteAbelianGroup, rng: &mut ChaCha8Rng) -> CheckRecord {
    let n = g.order() as usize;
    let witness = (0..SAMPLES).find_map(|k| {
        let x = g.element_at(rng.gen_range(0..n));
        let y = g.element_at(rng.gen_range(0..n));
        let chi = g.element_at(rng.gen_range(0..n));
        let lhs = pair(g, &g.add(&x, &y), &chi).ok()?;
        let rhs = pair(g, &x, &chi).ok()?.add(pair(g, &y, &chi).ok()?);
        (lhs != rhs).then(|| format!("sample {k}"))
    });
    CheckRecord::from_witness("pairing is additive on random samples", anchors::DUAL_GROUP, witness)
}

fn random_functions(tower: &Arc<ProGroup>, rng: &mut ChaCha8Rng, r: &mut Report) {
    for k in 0..SAMPLES {
        let level = rng.gen_range(1..=tower.depth());
        let n = tower.levels()[level - 1].order() as usize;
        let table = (0..n).map(|_| Cyclotomic::from_rational(random_rational(rng))).collect();
        let record = match LocallyConstantFunction::new(Arc::clone(tower), level, table) {
            Ok(f) => {
                let ok = f.decompose_characters().reconstruct() == f.table();
                CheckRecord::from_witness(
                    "random function reconstructs from its characters",
                    anchors::CHARACTER_COMBINATION,
                    (!ok).then(|| format!("sample {k}")),
                )
            }
            Err(e) => CheckRecord::from_witness(
                "random function reconstructs from its characters",
                anchors::CHARACTER_COMBINATION,
                Some(e.to_string()),
            ),
        };
        r.push(record.at_level(level));
    }
}

fn prune(v: Vector) -> Vector {
    v.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

fn random_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vector {
    prune((0..dim).map(|i| (i, random_rational(rng))).collect())
}

/// `ε(ab) = ε(a)ε(b)` and `Σ S(a₁)a₂ = ε(a)1` on random elements.
fn random_hopf(h: &FDHopf, rng: &mut ChaCha8Rng, r: &mut Report) {
    let mut counit = None;
    let mut antipode = None;
    for k in 0..SAMPLES {
        let a = random_vector(h.dim(), rng);
        let b = random_vector(h.dim(), rng);
        if counit.is_none() && h.apply_counit(&h.multiply(&a, &b)) != h.apply_counit(&a) * h.apply_counit(&b) {
            counit = Some(format!("{}: sample {k}", h.label()));
        }
        let mut lhs = Vector::new();
        for (&(i, j), c) in &h.comultiply(&a) {
            let s = h.apply_antipode(&Vector::from([(i, c.clone())]));
            for (k2, x) in h.multiply(&s, &Vector::from([(j, Rational::from_integer(1.into()))])) {
                *lhs.entry(k2).or_insert_with(Rational::zero) += x;
            }
        }
        let eps = h.apply_counit(&a);
        let rhs: Vector = h.unit().iter().map(|(&i, x)| (i, x * &eps)).collect();
        if antipode.is_none() && prune(lhs) != prune(rhs) {
            antipode = Some(format!("{}: sample {k}", h.label()));
        }
    }
    r.push(CheckRecord::from_witness(
        "counit is multiplicative on random elements",
        anchors::HOPF_AXIOMS,
        counit,
    ));
    r.push(CheckRecord::from_witness(
        "antipode identity on random elements",
        anchors::HOPF_AXIOMS,
        antipode,
    ));
}
