//! Named verification suites with machine-readable reports.
//!
//! Each suite expands a parameter grid into independent pure cases, fans the
//! cases out over a worker pool, and assembles a [`SuiteReport`] whose
//! canonical JSON (UTF-8, sorted keys) is byte-reproducible for fixed
//! parameters. The wall-time field is excluded from the canonical digest so
//! that two identical runs hash identically.

use std::time::Instant;

use num::{Rational64, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::combinatorics::{Composition, Dominance, Partition};
use crate::intertwining::{
    factor_template_check, factors_regular_on_ladder, intertwining_constant, reciprocity_check,
    SatakeData,
};
use crate::kappa::{
    commutator_triviality_check, elimination_order, kappa_matrix, pairing_character_check,
    verify_kappa_identity, KappaContext,
};
use crate::rep::{build_rho_c, canonical_form, derivative_trace, dual_star, is_kc_supported, Mode, RepExpr};
use crate::sampling::{random_generic_tau, random_partition_of, rng_from_seed};
use crate::unipotent::{
    delta_exponents, diag_stabilizer_check, diagonal_pattern, torus_conjugation_exponents,
    v_of_composition, v_of_orbit, ExponentVector,
};
use crate::{Error, Result};

/// Grid caps and randomization knobs for the suites. All fields default to
/// the desk-scale values the acceptance grid uses; heavier runs raise them
/// via flags or a JSON config file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteParams {
    /// Number-of-blocks cap for the matrix/GK grids.
    pub k_max: usize,
    /// Block-size cap for the matrix/GK grids.
    pub c_max: usize,
    /// Cap for the purely combinatorial orbit/delta grids.
    pub orbit_max: usize,
    /// Ambient-size cap k·c for the symbolic pairing suite.
    pub max_size: usize,
    /// Number of randomized data sets per randomized suite.
    pub trials: usize,
    /// Number of randomized triples for the dominance partial-order check.
    pub dominance_triples: usize,
    /// Seed for all randomized cases.
    pub seed: u64,
    /// When set, restricts the kappa/gk/pairing grids to this split l.
    pub l_fixed: Option<usize>,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            k_max: 4,
            c_max: 4,
            orbit_max: 6,
            max_size: 9,
            trials: 100,
            dominance_triples: 1000,
            seed: 7,
            l_fixed: None,
        }
    }
}

impl SuiteParams {
    fn keeps_l(&self, l: usize) -> bool {
        self.l_fixed.map_or(true, |fixed| fixed == l)
    }
}

/// Outcome of a single case.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One named case with its status and, on failure, a serialized witness.
#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// A full suite run: parameters, per-case outcomes, tallies and timing.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub version: String,
    pub params: SuiteParams,
    pub cases: Vec<CaseReport>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub wall_time_ms: u64,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// Canonical JSON: object keys sorted, no insignificant whitespace.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(&serde_json::to_value(self).expect("serializable report"))
            .expect("canonical encoding")
    }

    /// Hex SHA-256 over the canonical JSON with the wall-time field removed,
    /// so repeated identical runs digest identically.
    pub fn digest(&self) -> String {
        let mut value = serde_json::to_value(self).expect("serializable report");
        if let Value::Object(map) = &mut value {
            map.remove("wall_time_ms");
        }
        let bytes = serde_json::to_string(&value).expect("canonical encoding");
        let mut hasher = Sha256::new();
        hasher.update(bytes.as_bytes());
        hex_string(&hasher.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

type CaseFn = Box<dyn Fn() -> (Status, Option<Value>) + Send + Sync>;

struct Case {
    name: String,
    run: CaseFn,
}

impl Case {
    fn new(name: String, run: impl Fn() -> (Status, Option<Value>) + Send + Sync + 'static) -> Case {
        Case {
            name,
            run: Box::new(run),
        }
    }

    /// A case from a boolean check: errors fail with the error message as
    /// witness, `false` fails with the supplied witness.
    fn check(
        name: String,
        witness: Value,
        run: impl Fn() -> Result<bool> + Send + Sync + 'static,
    ) -> Case {
        Case::new(name, move || match run() {
            Ok(true) => (Status::Pass, None),
            Ok(false) => (Status::Fail, Some(witness.clone())),
            Err(e) => (
                Status::Fail,
                Some(json!({ "error": e.to_string(), "input": witness.clone() })),
            ),
        })
    }
}

/// Runs the cases on the rayon pool, capped by KC_LAB_THREADS when set.
fn run_cases(cases: Vec<Case>) -> Vec<CaseReport> {
    let execute = |cases: Vec<Case>| -> Vec<CaseReport> {
        cases
            .into_par_iter()
            .map(|case| {
                let (status, witness) = (case.run)();
                CaseReport {
                    name: case.name,
                    status,
                    witness,
                }
            })
            .collect()
    };
    let threads = std::env::var("KC_LAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(|| execute(cases)),
        None => execute(cases),
    }
}

/// The suite registry, in the order `all` runs them.
pub const SUITE_NAMES: [&str; 8] = [
    "orbit",
    "kappa",
    "gk",
    "delta",
    "derivative",
    "dual",
    "pairing",
    "equivariance",
];

/// Runs one named suite (or `all`) over the parameter grid.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport> {
    let start = Instant::now();
    let cases = match name {
        "orbit" => orbit_cases(params),
        "kappa" => kappa_cases(params),
        "gk" => gk_cases(params),
        "delta" => delta_cases(params),
        "derivative" => derivative_cases(params),
        "dual" => dual_cases(params),
        "pairing" => pairing_cases(params),
        "equivariance" => equivariance_cases(params),
        "all" => SUITE_NAMES
            .iter()
            .flat_map(|n| match *n {
                "orbit" => orbit_cases(params),
                "kappa" => kappa_cases(params),
                "gk" => gk_cases(params),
                "delta" => delta_cases(params),
                "derivative" => derivative_cases(params),
                "dual" => dual_cases(params),
                "pairing" => pairing_cases(params),
                "equivariance" => equivariance_cases(params),
                _ => unreachable!("registry is fixed"),
            })
            .collect(),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let reports = run_cases(cases);
    let passed = reports.iter().filter(|c| c.status == Status::Pass).count();
    let failed = reports.iter().filter(|c| c.status == Status::Fail).count();
    let skipped = reports.iter().filter(|c| c.status == Status::Skip).count();
    Ok(SuiteReport {
        suite: name.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        params: params.clone(),
        cases: reports,
        passed,
        failed,
        skipped,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

/// orbit: the rectangular orbit's coordinate set matches the transposed
/// block radical on the full grid, and dominance is a partial order on
/// randomized triples.
fn orbit_cases(params: &SuiteParams) -> Vec<Case> {
    let mut cases = Vec::new();
    for k in 1..=params.orbit_max {
        for c in 1..=params.orbit_max {
            cases.push(Case::check(
                format!("orbit/rectangle-radical/k={k},c={c}"),
                json!({ "k": k, "c": c }),
                move || {
                    let orbit = v_of_orbit(&Partition::rectangle(k as u64, c));
                    let blocks = v_of_composition(&Composition::repeat(c as u64, k)?);
                    Ok(orbit == blocks)
                },
            ));
        }
    }
    let triples = params.dominance_triples;
    let seed = params.seed;
    cases.push(Case::check(
        format!("orbit/dominance-partial-order/triples={triples}"),
        json!({ "triples": triples, "seed": seed }),
        move || {
            let mut rng = rng_from_seed(seed);
            for _ in 0..triples {
                let total = rng.gen_range(1..=12u64);
                let a = random_partition_of(&mut rng, total);
                let b = random_partition_of(&mut rng, total);
                let c = random_partition_of(&mut rng, total);
                if !dominance_laws_hold(&a, &b, &c)? {
                    return Ok(false);
                }
            }
            Ok(true)
        },
    ));
    cases
}

fn ge(d: Dominance) -> bool {
    matches!(d, Dominance::Greater | Dominance::Equal)
}

/// Reflexivity, antisymmetry, transitivity and flip-consistency of the
/// dominance order on one triple.
fn dominance_laws_hold(a: &Partition, b: &Partition, c: &Partition) -> Result<bool> {
    if a.dominance(a)? != Dominance::Equal {
        return Ok(false);
    }
    let ab = a.dominance(b)?;
    let ba = b.dominance(a)?;
    if ab != ba.flip() {
        return Ok(false);
    }
    if ge(ab) && ge(ba) && a != b {
        return Ok(false);
    }
    let bc = b.dominance(c)?;
    if ge(ab) && ge(bc) && !ge(a.dominance(c)?) {
        return Ok(false);
    }
    Ok(true)
}

/// kappa: the interleaving identity w_{(c^k)} = κ^{-1}·diag(w_{(l^k)},
/// w_{((c-l)^k)})·κ by exact integer matrix equality, plus the coordinate
/// classification of the conjugated radical.
fn kappa_cases(params: &SuiteParams) -> Vec<Case> {
    let mut cases = Vec::new();
    for k in 1..=params.k_max {
        for c in 2..=params.c_max {
            for l in 1..c {
                if !params.keeps_l(l) {
                    continue;
                }
                cases.push(Case::check(
                    format!("kappa/identity/k={k},c={c},l={l}"),
                    json!({ "k": k, "c": c, "l": l }),
                    move || verify_kappa_identity(k, c, l),
                ));
                cases.push(Case::check(
                    format!("kappa/conjugation/k={k},c={c},l={l}"),
                    json!({ "k": k, "c": c, "l": l }),
                    move || Ok(KappaContext::new(k, c, l)?.classify()?.all_passed()),
                ));
            }
        }
    }
    cases
}

/// gk: factor count, factor template, ladder regularity and reciprocity of
/// the unramified intertwining constant, with the product expanded only on
/// the small part of the grid.
fn gk_cases(params: &SuiteParams) -> Vec<Case> {
    let mut cases = Vec::new();
    for k in 1..=params.k_max {
        for c in 2..=params.c_max {
            for l in 1..c {
                if !params.keeps_l(l) {
                    continue;
                }
                let witness = json!({ "k": k, "c": c, "l": l });
                cases.push(Case::check(
                    format!("gk/factor-count/k={k},c={c},l={l}"),
                    witness.clone(),
                    move || {
                        let satake = SatakeData::tempered(k)?;
                        let (_, product) = intertwining_constant(k, c, l, &satake)?;
                        Ok(product.len() == k * (k - 1) / 2 * l * (c - l))
                    },
                ));
                cases.push(Case::check(
                    format!("gk/template/k={k},c={c},l={l}"),
                    witness.clone(),
                    move || factor_template_check(k, c, l),
                ));
                cases.push(Case::check(
                    format!("gk/ladder-regular/k={k},c={c},l={l}"),
                    witness.clone(),
                    move || factors_regular_on_ladder(k, c, l),
                ));
                cases.push(Case::check(
                    format!("gk/reciprocity/k={k},c={c},l={l}"),
                    witness,
                    move || reciprocity_check(k, c, l),
                ));
            }
        }
    }
    cases
}

/// delta: the Speh exponent ladder δ^{1/(2k)} on rectangular parabolics and
/// unimodularity of the diagonally embedded GL_c on every scaled radical.
fn delta_cases(params: &SuiteParams) -> Vec<Case> {
    let mut cases = Vec::new();
    for k in 1..=params.orbit_max {
        for c in 1..=params.orbit_max {
            cases.push(Case::check(
                format!("delta/speh-ladder/k={k},c={c}"),
                json!({ "k": k, "c": c }),
                move || {
                    let beta = Composition::repeat(k as u64, c)?;
                    let scaled = delta_exponents(&beta).scale(Rational64::new(1, 2 * k as i64));
                    let ladder: Vec<Rational64> = (1..=c as i64)
                        .map(|j| Rational64::new(c as i64 + 1 - 2 * j, 2))
                        .collect();
                    Ok(scaled == ExponentVector::new(ladder))
                },
            ));
        }
    }
    let diag_max = params.orbit_max.min(5);
    for k in 1..=diag_max {
        for beta in Composition::all_of(k as u64) {
            for c in 1..=diag_max {
                let beta = beta.clone();
                let name = format!(
                    "delta/diag-unimodular/beta={},c={c}",
                    beta.parts()
                        .iter()
                        .map(u64::to_string)
                        .collect::<Vec<_>>()
                        .join("-")
                );
                let witness = json!({ "beta": beta.parts(), "c": c });
                cases.push(Case::check(name, witness, move || {
                    let coords = v_of_composition(&beta.scale(c as u64)?);
                    let pattern = diagonal_pattern(k, c);
                    Ok(torus_conjugation_exponents(&coords, &pattern)?.is_zero())
                }));
            }
        }
    }
    cases
}

/// derivative: randomized inducing data has the (k,c) derivative shadow —
/// exactly c steps of order k — and the induced-combination rule adds the
/// blockwise cluster ranks.
fn derivative_cases(params: &SuiteParams) -> Vec<Case> {
    let mut cases = Vec::new();
    let k_cap = params.k_max.min(4);
    let c_cap = params.c_max.min(4);
    let mut rng = rng_from_seed(params.seed);
    for trial in 0..params.trials {
        let k = rng.gen_range(1..=k_cap);
        let tau = random_generic_tau(&mut rng, k);
        let witness = json!({ "trial": trial, "k": k, "tau": tau });
        cases.push(Case::check(
            format!("derivative/trial={trial}"),
            witness,
            move || {
                for c in 1..=c_cap {
                    let rho = build_rho_c(&tau, c, Mode::PAdic)?;
                    if !is_kc_supported(&rho, k, c) {
                        return Ok(false);
                    }
                    if !blockwise_rule_holds(&rho, c)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            },
        ));
    }
    cases
}

/// The induced-combination rule: the trace orders of the whole expression
/// are the sums of the standalone blockwise trace orders, step by step.
fn blockwise_rule_holds(rho: &RepExpr, c: usize) -> Result<bool> {
    let mut block_orders: Vec<Vec<usize>> = Vec::new();
    for block in rho.blocks() {
        let alone = RepExpr::induced(vec![block.clone()])?;
        let trace = derivative_trace(&alone)?;
        if trace.orders() != vec![block.cluster_rank(); c] {
            return Ok(false);
        }
        block_orders.push(trace.orders());
    }
    let combined = derivative_trace(rho)?.orders();
    let summed: Vec<usize> = (0..c)
        .map(|step| block_orders.iter().map(|o| o[step]).sum())
        .collect();
    Ok(combined == summed)
}

/// dual: the contragredient-reversal dual commutes with the Speh
/// construction up to canonical form, is an involution, and the whole
/// construction is exactly twist-equivariant.
fn dual_cases(params: &SuiteParams) -> Vec<Case> {
    let mut cases = Vec::new();
    let k_cap = params.k_max.min(4);
    let c_cap = params.c_max.min(4);
    let mut rng = rng_from_seed(params.seed.wrapping_add(1));
    for trial in 0..params.trials {
        let k = rng.gen_range(1..=k_cap);
        let c = rng.gen_range(1..=c_cap);
        let tau = random_generic_tau(&mut rng, k);
        let s = Rational64::new(rng.gen_range(-4..=4), 2);
        let witness = json!({ "trial": trial, "k": k, "c": c, "tau": tau, "s": s.to_string() });
        cases.push(Case::check(
            format!("dual/trial={trial}"),
            witness,
            move || {
                let rho = build_rho_c(&tau, c, Mode::PAdic)?;
                if dual_star(&dual_star(&rho)) != rho {
                    return Ok(false);
                }
                let dual_build = build_rho_c(&tau.dual(), c, Mode::PAdic)?;
                if canonical_form(&dual_star(&rho)) != canonical_form(&dual_build) {
                    return Ok(false);
                }
                let twisted = build_rho_c(&tau.twist(s), c, Mode::PAdic)?;
                if twisted != rho.twist(s) {
                    return Ok(false);
                }
                Ok(canonical_form(&canonical_form(&rho)) == canonical_form(&rho))
            },
        ));
    }
    cases
}

/// pairing: the symbolic unipotent pairing identity and commutator
/// triviality at every elimination step, over all grids with k·c capped.
fn pairing_cases(params: &SuiteParams) -> Vec<Case> {
    let mut cases = Vec::new();
    for k in 2..=params.k_max {
        for c in 2..=params.c_max {
            if k * c > params.max_size {
                continue;
            }
            for l in 1..c {
                if !params.keeps_l(l) {
                    continue;
                }
                let witness = json!({ "k": k, "c": c, "l": l });
                cases.push(Case::check(
                    format!("pairing/identity/k={k},c={c},l={l}"),
                    witness.clone(),
                    move || {
                        for i in 1..k {
                            for j in (i + 1)..=k {
                                if !pairing_character_check(k, c, l, i, j)?.all_passed() {
                                    return Ok(false);
                                }
                            }
                        }
                        Ok(true)
                    },
                ));
                cases.push(Case::check(
                    format!("pairing/commutators/k={k},c={c},l={l}"),
                    witness,
                    move || {
                        for &step in elimination_order(k)?.pairs() {
                            if !commutator_triviality_check(k, c, l, step)? {
                                return Ok(false);
                            }
                        }
                        Ok(true)
                    },
                ));
            }
        }
    }
    cases
}

/// equivariance: symbolic trace invariance (with exact stabilizer rigidity)
/// of the (k,c) character under the diagonal GL_c, and the measure-change
/// exponent identity for the c = 1 + (c−1) interleaving.
fn equivariance_cases(params: &SuiteParams) -> Vec<Case> {
    let mut cases = Vec::new();
    let k_cap = params.k_max.min(3);
    let c_cap = params.c_max.min(3);
    let seed = params.seed;
    for k in 2..=k_cap {
        for c in 1..=c_cap {
            cases.push(Case::check(
                format!("equivariance/trace-invariance/k={k},c={c}"),
                json!({ "k": k, "c": c }),
                move || diag_stabilizer_check(k, c, 3, seed),
            ));
        }
    }
    for k in 1..=k_cap {
        for c in 2..=c_cap {
            cases.push(Case::check(
                format!("equivariance/measure-change/k={k},c={c}"),
                json!({ "k": k, "c": c }),
                move || measure_change_matches(k, c),
            ));
        }
    }
    cases
}

/// The measure-change exponents: δ_{P_{(k,k(c−1))}}^{−1/2+1/(2k)} evaluated
/// on the κ_{1,c−1}-conjugated diagonal embedding of t ∈ GL_c equals
/// t_1 ↦ k(c−1)(1−k)/2 and t_s ↦ k(k−1)/2 for s ≥ 2.
fn measure_change_matches(k: usize, c: usize) -> Result<bool> {
    let beta = Composition::new(vec![k as u64, (k * (c - 1)) as u64])?;
    let power = Rational64::new(1 - k as i64, 2 * k as i64);
    let block = delta_exponents(&beta).scale(power);
    let mut per_slot = vec![block.values()[0]; k];
    per_slot.extend(std::iter::repeat(block.values()[1]).take(k * (c - 1)));

    // Slot r of κ·t^△·κ^{-1} carries the t^△ entry at position κ(r).
    let kappa = kappa_matrix(k, c, 1)?;
    let pattern = diagonal_pattern(k, c);
    let mut exponents = vec![Rational64::zero(); c];
    for (r, &weight) in per_slot.iter().enumerate() {
        exponents[pattern[kappa.image_of(r)]] += weight;
    }

    let mut expected = vec![Rational64::new((k * (c - 1)) as i64 * (1 - k as i64), 2); 1];
    expected.extend(std::iter::repeat(Rational64::new((k * (k - 1)) as i64, 2)).take(c - 1));
    Ok(exponents == expected)
}
