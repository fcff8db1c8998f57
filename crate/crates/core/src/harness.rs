//! Batch verification: suite configuration, execution and report output.
//!
//! Every suite produces a flat list of [`Record`]s. Cohomology suites emit
//! one record per `(p, energy)` slice with the computed dimension and the
//! oracle value. Identity suites emit one record per check, where `dim`
//! counts passing cases and `expected` counts cases tried.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraName, FormTag, SimpleLieAlgebra};
use crate::chevalley::{cochain_axpy, Cell, Cochain, Complex, Pair};
use crate::deformation::{family_differential, scaling_covariance_check, Deformation};
use crate::error::{Error, Result};
use crate::loop_rep::{Family, Flavor, Rep};
use crate::opers::{
    canonical_form, expected_dimensions, gauge_transform, normalized_residue, rs_residue, rs_to_punctured,
    GaugeElement, OperRep, SeriesLabel, Singularity,
};
use crate::rational::{q, Q};
use crate::vertex::{generators, VertexAlgebra, VertexState};

/// Seed of every random sample drawn by the harness.
pub const SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    ClassicalVacuum,
    QuantumVacuumCritical,
    QuantumVacuumGeneric,
    ClassicalVerma,
    QuantumVermaCritical,
    QuantumVermaGeneric,
    VertexIdentities,
    Deformation,
    OperRoundtrip,
    AbsoluteVsRelative,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::ClassicalVacuum,
        Suite::QuantumVacuumCritical,
        Suite::QuantumVacuumGeneric,
        Suite::ClassicalVerma,
        Suite::QuantumVermaCritical,
        Suite::QuantumVermaGeneric,
        Suite::VertexIdentities,
        Suite::Deformation,
        Suite::OperRoundtrip,
        Suite::AbsoluteVsRelative,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::ClassicalVacuum => "classical-vacuum",
            Suite::QuantumVacuumCritical => "quantum-vacuum-critical",
            Suite::QuantumVacuumGeneric => "quantum-vacuum-generic",
            Suite::ClassicalVerma => "classical-verma",
            Suite::QuantumVermaCritical => "quantum-verma-critical",
            Suite::QuantumVermaGeneric => "quantum-verma-generic",
            Suite::VertexIdentities => "vertex-identities",
            Suite::Deformation => "deformation",
            Suite::OperRoundtrip => "oper-roundtrip",
            Suite::AbsoluteVsRelative => "absolute-vs-relative",
        }
    }

    fn is_verma(&self) -> bool {
        matches!(self, Suite::ClassicalVerma | Suite::QuantumVermaCritical | Suite::QuantumVermaGeneric)
    }

    /// Level used when none is given.
    fn default_level(&self) -> LevelSpec {
        match self {
            Suite::QuantumVacuumGeneric | Suite::QuantumVermaGeneric => LevelSpec::Generic(q(1)),
            Suite::Deformation => LevelSpec::Family,
            _ => LevelSpec::Critical,
        }
    }

    fn accepts(&self, level: &LevelSpec) -> bool {
        match (self, level) {
            (Suite::QuantumVacuumGeneric | Suite::QuantumVermaGeneric, LevelSpec::Generic(h)) => !h.is_zero(),
            (Suite::QuantumVacuumGeneric | Suite::QuantumVermaGeneric, _) => false,
            (Suite::Deformation, l) => *l == LevelSpec::Family,
            (_, l) => *l == LevelSpec::Critical,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LevelSpec {
    Critical,
    /// `κ_c + h κ0`, `h ≠ 0`.
    Generic(Q),
    /// `h` kept symbolic.
    Family,
}

impl FromStr for LevelSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "critical" => Ok(LevelSpec::Critical),
            "family" => Ok(LevelSpec::Family),
            _ => {
                let h = s
                    .strip_prefix("generic:")
                    .ok_or_else(|| Error::Config(format!("unknown level `{s}`")))?;
                let h = crate::rational::parse_q(h).map_err(|e| Error::Config(e.to_string()))?;
                if h.is_zero() {
                    return Err(Error::Config("generic level needs h ≠ 0".into()));
                }
                Ok(LevelSpec::Generic(h))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub algebra: AlgebraName,
    pub suite: Suite,
    pub max_energy: u32,
    pub max_degree: usize,
    /// `None` selects the suite default.
    pub level: Option<LevelSpec>,
    /// Verma highest weight in fundamental-weight coordinates.
    pub weight: Vec<i64>,
    /// Oper precision `K`.
    pub precision: u32,
    /// Random instances per oper check; `None` selects 100 (sl2) or 25 (sl3).
    pub samples: Option<usize>,
    pub output: Option<std::path::PathBuf>,
    pub format: Format,
}

impl SuiteConfig {
    pub fn new(algebra: AlgebraName, suite: Suite, max_energy: u32, max_degree: usize) -> Self {
        SuiteConfig {
            algebra,
            suite,
            max_energy,
            max_degree,
            level: None,
            weight: Vec::new(),
            precision: 4,
            samples: None,
            output: None,
            format: Format::Json,
        }
    }

    pub fn level(&self) -> LevelSpec {
        self.level.clone().unwrap_or_else(|| self.suite.default_level())
    }

    /// Verma weight padded to the rank.
    pub fn lambda(&self, rank: usize) -> Vec<i64> {
        let mut w = self.weight.clone();
        w.resize(rank, 0);
        w
    }

    pub fn validate(&self) -> Result<()> {
        let rank = SimpleLieAlgebra::new(self.algebra).rank;
        if !self.suite.accepts(&self.level()) {
            return Err(Error::Config(format!("level {:?} is not valid for suite {}", self.level(), self.suite)));
        }
        if !self.weight.is_empty() {
            if !self.suite.is_verma() && self.suite != Suite::Deformation {
                return Err(Error::Config(format!("suite {} takes no weight", self.suite)));
            }
            if self.weight.len() != rank {
                return Err(Error::Config(format!("weight needs {rank} entries, got {}", self.weight.len())));
            }
        }
        if self.suite == Suite::OperRoundtrip && self.precision == 0 {
            return Err(Error::Config("precision must be positive".into()));
        }
        Ok(())
    }
}

/// One report line. Field order is the serialized order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, PartialOrd, Ord)]
pub struct Record {
    pub pair: String,
    pub module: String,
    pub p: usize,
    pub energy: u32,
    pub weight: Vec<i32>,
    pub dim: u64,
    pub expected: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl Record {
    fn new(pair: &str, module: &str, p: usize, energy: u32, weight: Vec<i32>, dim: u64, expected: u64) -> Self {
        Record { pair: pair.into(), module: module.into(), p, energy, weight, dim, expected, matches: dim == expected }
    }

    /// Identity-check record: `passed` out of `total` cases.
    fn check(name: &str, module: &str, p: usize, energy: u32, passed: usize, total: usize) -> Self {
        Record::new(name, module, p, energy, Vec::new(), passed as u64, total as u64)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub records: Vec<Record>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.matches)
    }

    pub fn failures(&self) -> Vec<&Record> {
        self.records.iter().filter(|r| !r.matches).collect()
    }

    /// Process exit code: 0 when every record matches, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    fn canonicalize(&mut self) {
        self.records.sort_by(|a, b| {
            (a.energy, a.p, &a.pair, &a.module, &a.weight).cmp(&(b.energy, b.p, &b.pair, &b.module, &b.weight))
        });
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let alg = Arc::new(SimpleLieAlgebra::new(cfg.algebra));
    let records = match cfg.suite {
        Suite::ClassicalVacuum => {
            let label = SeriesLabel::OmegaC;
            cohomology_records(&alg, cfg, |a| Rep::classical(a, Family::Vacuum), Pair::LoopRelative, |p, e| {
                expected_dimensions(label, &alg, cfg.max_energy, p)[e as usize]
            })?
        }
        Suite::QuantumVacuumCritical => {
            let label = SeriesLabel::OmegaOp;
            cohomology_records(
                &alg,
                cfg,
                |a| {
                    let f = a.bilinear_form(FormTag::Critical);
                    Rep::vacuum(a, &f)
                },
                Pair::LoopRelative,
                |p, e| expected_dimensions(label, &alg, cfg.max_energy, p)[e as usize],
            )?
        }
        Suite::QuantumVacuumGeneric | Suite::QuantumVermaGeneric => {
            let LevelSpec::Generic(h) = cfg.level() else { unreachable!("validated") };
            let lambda = cfg.lambda(alg.rank);
            let verma = cfg.suite == Suite::QuantumVermaGeneric;
            let pair = if verma { Pair::IwahoriRelative } else { Pair::LoopRelative };
            cohomology_records(
                &alg,
                cfg,
                |a| {
                    let f = a.bilinear_form(FormTag::Family(h.clone()));
                    if verma {
                        Rep::verma(a, &f, &lambda)
                    } else {
                        Rep::vacuum(a, &f)
                    }
                },
                pair,
                |p, e| u64::from(p == 0 && e == 0),
            )?
        }
        Suite::ClassicalVerma => {
            let label = SeriesLabel::OmegaCRS;
            cohomology_records(&alg, cfg, |a| Rep::classical(a, Family::Verma), Pair::IwahoriRelative, |p, e| {
                expected_dimensions(label, &alg, cfg.max_energy, p)[e as usize]
            })?
        }
        Suite::QuantumVermaCritical => {
            let label = SeriesLabel::OmegaCRS;
            let lambda = cfg.lambda(alg.rank);
            cohomology_records(
                &alg,
                cfg,
                |a| {
                    let f = a.bilinear_form(FormTag::Critical);
                    Rep::verma(a, &f, &lambda)
                },
                Pair::IwahoriRelative,
                |p, e| expected_dimensions(label, &alg, cfg.max_energy, p)[e as usize],
            )?
        }
        Suite::VertexIdentities => {
            let rep = Rep::vacuum(alg.clone(), &alg.bilinear_form(FormTag::Critical));
            vertex_records(&rep, &VertexWindow::new(cfg.max_energy, cfg.max_degree))?
        }
        Suite::Deformation => deformation_records(&alg, cfg.max_energy, cfg.max_degree, &cfg.lambda(alg.rank))?,
        Suite::OperRoundtrip => {
            let n = cfg.samples.unwrap_or(match cfg.algebra {
                AlgebraName::Sl2 => 100,
                AlgebraName::Sl3 => 25,
            });
            oper_records(&alg, cfg.precision, n, cfg.max_energy)?
        }
        Suite::AbsoluteVsRelative => absolute_vs_relative_records(&alg, cfg.max_energy, cfg.max_degree)?,
    };
    let mut report = SuiteReport { suite: cfg.suite.name().to_string(), records };
    report.canonicalize();
    Ok(report)
}

/// Cohomology slices `p ≤ max_degree`, `energy ≤ max_energy`, one energy
/// per worker. Slices without any weight-zero cochain are omitted unless
/// the oracle expects a nonzero dimension there.
fn cohomology_records<F, X>(
    alg: &Arc<SimpleLieAlgebra>,
    cfg: &SuiteConfig,
    make: F,
    pair: Pair,
    expected: X,
) -> Result<Vec<Record>>
where
    F: Fn(Arc<SimpleLieAlgebra>) -> Rep<Q> + Sync,
    X: Fn(usize, u32) -> u64 + Sync,
{
    let zero = vec![0; alg.rank];
    let per_energy: Vec<Result<Vec<Record>>> = (0..=cfg.max_energy)
        .into_par_iter()
        .map(|e| {
            let rep = make(alg.clone());
            let cx = Complex::new(&rep, pair)?;
            let mut out = Vec::new();
            for r in cx.cohomology_slice(cfg.max_degree, e)? {
                let exp = expected(r.p, e);
                if cx.cells(r.p, e, Some(&zero)).is_empty() && exp == 0 {
                    continue;
                }
                out.push(Record::new(&r.pair, &r.module, r.p, e, r.weight, r.dim as u64, exp));
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_energy {
        all.extend(r?);
    }
    Ok(all)
}

/// Windows of the vertex-identity checks.
#[derive(Clone, Debug)]
pub struct VertexWindow {
    /// Energy bound for the vacuum, derivation, Clifford and homotopy checks.
    pub energy: u32,
    pub max_degree: usize,
    /// Energy bound for the cohomology representatives of the cup check.
    pub skew_energy: u32,
    pub composite_samples: usize,
}

impl VertexWindow {
    pub fn new(energy: u32, max_degree: usize) -> Self {
        VertexWindow { energy, max_degree, skew_energy: energy + 1, composite_samples: 100 }
    }
}

/// Identity checks of the vertex structure on the complex of `rep`.
pub fn vertex_records(rep: &Rep<Q>, w: &VertexWindow) -> Result<Vec<Record>> {
    let module = rep.tag();
    let e = w.energy;
    let va = VertexAlgebra::new(rep, 2 * e + 2)?;
    let states = va.states(e, w.max_degree);
    let mut out = Vec::new();

    let ok = states.iter().map(|a| va.vacuum_axiom_holds(a)).collect::<Result<Vec<_>>>()?;
    out.push(Record::check("vacuum-axiom", module, w.max_degree, e, ok.iter().filter(|x| **x).count(), ok.len()));

    // Every mode whose output lies in energy ≤ e.
    let (mut pass, mut total) = (0, 0);
    for a in &states {
        for b in &states {
            let s = a.energy() + b.energy();
            if s > e as i32 {
                continue;
            }
            for n in (s - e as i32 - 1)..=(s - 1) {
                total += 1;
                pass += usize::from(va.dg_defect(a, n, b)?.is_empty());
            }
        }
    }
    out.push(Record::check("dg-identity", module, w.max_degree, e, pass, total));

    let (mut pass, mut total) = (0, 0);
    let targets = va.states(e, w.max_degree + 1);
    let dim = rep.alg.dim;
    for t in &targets {
        for a in 0..dim {
            for b in 0..dim {
                for n in 0..=e as i32 {
                    for m in -(e as i32)..=0 {
                        total += 1;
                        pass += usize::from(va.clifford_defect(a, n, b, m, t)?.is_empty());
                    }
                }
            }
        }
    }
    out.push(Record::check("clifford", module, w.max_degree + 1, e, pass, total));

    let gens = generators(dim);
    let (mut pass, mut total) = (0, 0);
    for a in &gens {
        for b in &gens {
            for m in 0..=2 {
                total += 1;
                pass += usize::from(va.homotopy_defect(a, b, m, 1)?.is_empty());
            }
        }
    }
    out.push(Record::check("homotopy-generators", module, 1, 1, pass, total));

    let (pass, total) = composite_homotopy(&va, &states, e, w.composite_samples)?;
    out.push(Record::check("homotopy-composite", module, w.max_degree, e, pass, total));

    let (pass, total) = cup_skew_commutativity(rep, w.skew_energy)?;
    out.push(Record::check("cup-skew-commutativity", module, 1, w.skew_energy, pass, total));
    Ok(out)
}

/// Homotopy identity on random pairs of cells that are not both generators
/// or units, with total energy ≤ `e`.
pub fn composite_homotopy(va: &VertexAlgebra<'_>, states: &[Cell], e: u32, samples: usize) -> Result<(usize, usize)> {
    let composite: Vec<&Cell> = states.iter().filter(|c| c.degree() + c.mono.len() >= 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pass = 0;
    let mut total = 0;
    while total < samples {
        let a = *composite.choose(&mut rng).expect("composite states exist");
        let b = &states[rng.gen_range(0..states.len())];
        if a.energy() + b.energy() > e as i32 {
            continue;
        }
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let m = rng.gen_range(0..=2);
        total += 1;
        pass += usize::from(va.homotopy_defect(a, b, m, 1)?.is_empty());
    }
    Ok((pass, total))
}

/// `A ⌣ B ∓ B ⌣ A` is a coboundary for all pairs of computed
/// representatives of `H^0` and `H^1` with energy ≤ `e`.
pub fn cup_skew_commutativity(rep: &Rep<Q>, e: u32) -> Result<(usize, usize)> {
    let cx = Complex::new(rep, Pair::LoopRelative)?;
    let mut reps = Vec::new();
    for p in 0..=1 {
        for en in 0..=e {
            let r = cx.representatives(p, en)?;
            for v in &r.reps {
                reps.push((p, en, r.to_cochain(v)));
            }
        }
    }
    let va = VertexAlgebra::new(rep, 2 * e + 2)?;
    let mut oracles = std::collections::BTreeMap::new();
    let (mut pass, mut total) = (0, 0);
    for (pa, ea, ca) in &reps {
        for (pb, eb, cb) in &reps {
            let k = va.skew_commutator(&VertexState::new(ca.clone())?, &VertexState::new(cb.clone())?)?;
            let key = (pa + pb, ea + eb);
            if let std::collections::btree_map::Entry::Vacant(e) = oracles.entry(key) {
                e.insert(cx.coboundaries(key.0, key.1)?);
            }
            total += 1;
            pass += usize::from(oracles[&key].is_coboundary(&k)?);
        }
    }
    Ok((pass, total))
}

/// Checks of the `h`-expansion of the quantum vacuum family (or of the
/// quantum Verma family when `lambda` is nonzero).
pub fn deformation_records(alg: &Arc<SimpleLieAlgebra>, e: u32, p_max: usize, lambda: &[i64]) -> Result<Vec<Record>> {
    let family = if lambda.iter().any(|x| *x != 0) { Family::Verma } else { Family::Vacuum };
    let module = if family == Family::Vacuum { "Vkappa" } else { "Mkappa" };
    let mut out = Vec::new();
    let fam = family_differential(alg, family, Flavor::Quantum, &q(1), lambda, p_max, 0..=e)?;
    let (mut sq, mut anti, mut total) = (0, 0, 0);
    for (&(en, p), a) in &fam.slices {
        let Some(b) = fam.slice(p + 1, en) else { continue };
        total += 1;
        sq += usize::from(b.matrix.matmul(&a.matrix)?.is_zero());
        anti += usize::from(fam.component_square(p, en, 1)?.is_zero());
    }
    out.push(Record::check("delta-h-squared", module, p_max, e, sq, total));
    out.push(Record::check("delta0-delta1-anticommute", module, p_max, e, anti, total));

    let scales = [q(1), q(3), q(-2)];
    let mut ok = 0;
    for s in &scales {
        ok += usize::from(scaling_covariance_check(alg, family, Flavor::Quantum, s, lambda, p_max, 0..=e)?);
    }
    out.push(Record::check("scaling-covariance", module, p_max, e, ok, scales.len()));

    let def = Deformation::new(alg, family, Flavor::Quantum, &q(1), lambda);
    let (mut ok, mut total) = (0, 0);
    for en in 0..=e {
        for i in 0..p_max.saturating_sub(1) {
            let a = def.classes(i, en)?;
            let b = def.classes(i + 1, en)?;
            let c = def.classes(i + 2, en)?;
            let phi2 = def.phi_matrix_between(&b, &c)?.matmul(&def.phi_matrix_between(&a, &b)?)?;
            total += 1;
            ok += usize::from(phi2.is_zero());
        }
    }
    out.push(Record::check("phi-squared", module, p_max, e, ok, total));

    let (ok, total) = leibniz_samples(&def, e, 50)?;
    out.push(Record::check("phi-leibniz", module, 1, e, ok, total));
    Ok(out)
}

/// `φ(A⌣B) − φA⌣B − (−1)^{p(A)} A⌣φB` is exact for `samples` random pairs
/// of classes in degrees ≤ 1 with total energy ≤ `e`.
pub fn leibniz_samples(def: &Deformation, e: u32, samples: usize) -> Result<(usize, usize)> {
    let mut slices = Vec::new();
    for p in 0..=1 {
        for en in 0..=e {
            let c = def.classes(p, en)?;
            if c.dim() > 0 {
                slices.push(c);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..slices.len())
        .flat_map(|i| (0..slices.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| slices[i].energy + slices[j].energy <= e)
        .collect();
    if pairs.is_empty() {
        return Ok((0, 0));
    }
    let va = VertexAlgebra::new(&def.base, 2 * e + 2)?;
    let mut targets = std::collections::BTreeMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pass = 0;
    for _ in 0..samples {
        let &(i, j) = pairs.choose(&mut rng).expect("nonempty");
        let combo = |s: &crate::deformation::ClassBasis, rng: &mut ChaCha8Rng| {
            let mut v = Cochain::new();
            while v.is_empty() {
                for r in &s.reps {
                    cochain_axpy(&mut v, &q(rng.gen_range(-2..=2)), r);
                }
            }
            v
        };
        let a = combo(&slices[i], &mut rng);
        let b = combo(&slices[j], &mut rng);
        let key = (slices[i].p + slices[j].p + 1, slices[i].energy + slices[j].energy);
        if let std::collections::btree_map::Entry::Vacant(e) = targets.entry(key) {
            e.insert(def.classes(key.0, key.1)?);
        }
        let defect = def.leibniz_defect(&va, &a, slices[i].p, &b)?;
        pass += usize::from(targets[&key].is_exact(&defect)?);
    }
    Ok((pass, samples))
}

/// Canonical-form round trips, residue invariance and the `FunOp = FunC`
/// series identity.
pub fn oper_records(alg: &Arc<SimpleLieAlgebra>, k: u32, samples: usize, e: u32) -> Result<Vec<Record>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    let mut ok = 0;
    for _ in 0..samples {
        let op = OperRep::random(alg, k, Singularity::Regular, 3, &mut rng);
        let g = GaugeElement::random(alg, k, Singularity::Regular, 3, &mut rng);
        let (c, to) = canonical_form(&op)?;
        let moved = gauge_transform(&g, &op)?;
        let good = gauge_transform(&to, &op)? == c.to_oper()
            && canonical_form(&c.to_oper())?.0 == c
            && canonical_form(&moved)?.0 == c;
        ok += usize::from(good);
    }
    out.push(Record::check("canonical-roundtrip", "oper", 0, k, ok, samples));

    let rs_samples = 50;
    let mut ok = 0;
    for _ in 0..rs_samples {
        let op = OperRep::random(alg, k, Singularity::Rs, 3, &mut rng);
        let g = GaugeElement::random(alg, k, Singularity::Rs, 3, &mut rng);
        let moved = gauge_transform(&g, &op)?;
        let res = rs_residue(&op)?;
        let (c, _) = canonical_form(&rs_to_punctured(&op)?)?;
        ok += usize::from(rs_residue(&moved)? == res && normalized_residue(&c) == res);
    }
    out.push(Record::check("residue-invariance", "oper", 0, k, ok, rs_samples));

    let op = expected_dimensions(SeriesLabel::FunOp, alg, e, 0);
    let cl = expected_dimensions(SeriesLabel::FunC, alg, e, 0);
    for en in 0..=e {
        out.push(Record::new("FunOp=FunC", "series", 0, en, Vec::new(), op[en as usize], cl[en as usize]));
    }
    Ok(out)
}

/// Absolute classical vacuum cohomology against the relative cohomology
/// tensored with the exterior algebra on generators of degree `2 d_i + 1`.
pub fn absolute_vs_relative_records(alg: &Arc<SimpleLieAlgebra>, e: u32, p_max: usize) -> Result<Vec<Record>> {
    let degrees: Vec<usize> = alg.exponents.iter().map(|d| 2 * *d as usize + 1).collect();
    // Poincaré polynomial of the exterior algebra.
    let mut ext = vec![0u64; p_max + 1];
    ext[0] = 1;
    for &d in &degrees {
        for p in (d..=p_max).rev() {
            ext[p] += ext[p - d];
        }
    }
    let per_energy: Vec<Result<Vec<Record>>> = (0..=e)
        .into_par_iter()
        .map(|en| {
            let rep = Rep::classical(alg.clone(), Family::Vacuum);
            let rel = Complex::new(&rep, Pair::LoopRelative)?.cohomology_slice(p_max, en)?;
            let abs = Complex::new(&rep, Pair::Absolute)?.cohomology_slice(p_max, en)?;
            let mut out = Vec::new();
            for r in abs {
                let expected: u64 = (0..=r.p).map(|j| ext[j] * rel[r.p - j].dim as u64).sum();
                out.push(Record::new(&r.pair, &r.module, r.p, en, r.weight, r.dim as u64, expected));
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_energy {
        all.extend(r?);
    }
    Ok(all)
}

/// Serializes a report. JSON is an array of records; TSV has a header row
/// and renders the weight as comma-separated integers.
pub fn emit_report(report: &SuiteReport, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.records)?;
            s.push('\n');
            Ok(s)
        }
        Format::Tsv => {
            let mut s = String::from("pair\tmodule\tp\tenergy\tweight\tdim\texpected\tmatch\n");
            for r in &report.records {
                let w: Vec<String> = r.weight.iter().map(i32::to_string).collect();
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.pair,
                    r.module,
                    r.p,
                    r.energy,
                    w.join(","),
                    r.dim,
                    r.expected,
                    r.matches
                ));
            }
            Ok(s)
        }
    }
}

pub fn write_report(report: &SuiteReport, format: Format, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, emit_report(report, format)?)?;
    Ok(())
}

/// Inverse of the TSV rendering.
pub fn parse_tsv(s: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for (i, line) in s.lines().enumerate().skip(1) {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 8 {
            return Err(Error::Parse(format!("line {}: expected 8 fields, got {}", i + 1, f.len())));
        }
        let num = |x: &str| x.parse::<u64>().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)));
        let weight = if f[4].is_empty() {
            Vec::new()
        } else {
            f[4].split(',')
                .map(|x| x.parse::<i32>().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1))))
                .collect::<Result<_>>()?
        };
        out.push(Record {
            pair: f[0].into(),
            module: f[1].into(),
            p: num(f[2])? as usize,
            energy: num(f[3])? as u32,
            weight,
            dim: num(f[5])?,
            expected: num(f[6])?,
            matches: f[7] == "true",
        });
    }
    Ok(out)
}

/// Human-readable summary: one line per record plus a verdict.
pub fn summary_table(report: &SuiteReport) -> String {
    let mut s = format!("{:<24} {:<8} {:>3} {:>6} {:>8} {:>8}  ok\n", "pair/check", "module", "p", "energy", "dim", "expected");
    for r in &report.records {
        s.push_str(&format!(
            "{:<24} {:<8} {:>3} {:>6} {:>8} {:>8}  {}\n",
            r.pair,
            r.module,
            r.p,
            r.energy,
            r.dim,
            r.expected,
            if r.matches { "yes" } else { "NO" }
        ));
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    s.push_str(&format!("{}: {verdict} ({} records, {} mismatches)\n", report.suite, report.records.len(), report.failures().len()));
    s
}
