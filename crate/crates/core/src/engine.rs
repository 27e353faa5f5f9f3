//! The constructive double-fibration loop: alternate Pell orbits on
//! fiber conics with switches to the dual fibration (the Geiser
//! involution `w ↦ −w`) and the surface symmetries, producing a
//! deduplicated, provenance-tagged solution ledger.
//!
//! Each ledger entry records the solution, the conic bundle case and
//! fiber it was found on, its depth (the number of fibration switches
//! on its derivation path), its parent entry and how it was derived.
//! Generation is breadth-first over a deterministic priority queue and
//! the output order is fixed, so identical inputs produce byte-identical
//! ledgers.
//!
//! Orbit points grow by a factor of the fiber's fundamental unit per
//! step, and the fibers reached by switching mostly carry units far too
//! large to yield a second point of representable size; those fibers are
//! detected cheaply (see [`pell::fundamental_unit_budgeted`]) and logged
//! as skipped rather than treated as errors.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use thiserror::Error;

use crate::conic::{boundary_classify, integral_orbit_with, pell_reduce, BoundaryType, ConicError};
use crate::pell::{self, Direction, PellUnit};
use crate::surface::{
    boundary_of_fiber, classify, fiber_conic, fiber_is_smooth, goodness, pi1, recover_solution,
    CaseKind, Fiber, GoodnessReport, Solution, SurfaceError,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("n = {0} admits no conic bundle; cannot generate")]
    UnsupportedN(BigInt),
    #[error("no seed is good for any case of n; {0} goodness reports attached")]
    NoGoodSeed(usize, Vec<(Solution, Vec<GoodnessReport>)>),
    #[error("seed {0} does not satisfy the surface equation for n")]
    InvalidSeed(Solution),
    #[error("malformed ledger line {line}: {reason}")]
    Ledger { line: usize, reason: String },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error(transparent)]
    Pell(#[from] pell::PellError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How a ledger entry was derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "seed")]
    Seed,
    #[serde(rename = "pell-orbit")]
    PellOrbit,
    #[serde(rename = "geiser-switch")]
    GeiserSwitch,
    #[serde(rename = "symmetry")]
    Symmetry,
}

/// Generation parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    /// Maximum number of fibration switches on any derivation path.
    pub max_depth: u32,
    /// Orbit points taken per fiber visit per direction.
    pub per_fiber: usize,
    /// Abort threshold on coordinate size; orbit points and solutions
    /// beyond this many bits are dropped.
    pub max_bits: u64,
    /// Deduplicate by canonical symmetry class rather than exact triple.
    pub dedupe: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_depth: 3, per_fiber: 3, max_bits: 4096, dedupe: true }
    }
}

/// One generated solution with its derivation metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub id: u64,
    pub solution: Solution,
    pub case: CaseKind,
    pub fiber: Fiber,
    pub depth: u32,
    pub parent: Option<u64>,
    pub provenance: Provenance,
}

/// Why a fiber was not orbit-expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    /// Boundary not real quadratic: finitely many integral points.
    Boundary(BoundaryType),
    SingularFiber,
    NotPellType,
    /// Fundamental unit exceeds the bit budget; points past the seed
    /// would be unrepresentable.
    UnitTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedFiber {
    pub case: CaseKind,
    pub fiber: Fiber,
    pub reason: SkipReason,
}

/// Result of a generation run: the ledger plus the skipped-fiber log.
#[derive(Debug, Clone, Default)]
pub struct GenOutcome {
    pub entries: Vec<LedgerEntry>,
    pub skipped: Vec<SkippedFiber>,
}

/// A fiber reachable from a solution in one move: through the solution
/// itself or one of its images under the surface symmetries, with the
/// Geiser flag marking moves that switch to the dual fibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor {
    pub case: CaseKind,
    pub fiber: Fiber,
    /// The image of the solution lying on `fiber` as a conic point.
    pub image: Solution,
    /// Whether `w ↦ −w` was applied (a switch to the dual fibration).
    pub geiser: bool,
}

/// Fibers of the first fibration through a solution, through its Geiser
/// image, and through the `x ↔ y` swaps of both, deduplicated by
/// `(fiber, conic point)`. Unswitched moves are listed first.
pub fn neighbor_fibers(case: &CaseKind, sol: &Solution) -> Result<Vec<Neighbor>, SurfaceError> {
    let mut out: Vec<Neighbor> = Vec::new();
    let mut seen = BTreeSet::new();
    for geiser in [false, true] {
        for swap in [false, true] {
            let mut image = sol.clone();
            if swap {
                image = image.swap_xy();
            }
            if geiser {
                image = image.geiser();
            }
            let fiber = pi1(case, &image)?;
            if seen.insert((fiber.clone(), image.x.clone(), image.y.clone(), image.w.clone())) {
                let geiser = geiser && !sol.w.is_zero();
                out.push(Neighbor { case: case.clone(), fiber, image, geiser });
            }
        }
    }
    Ok(out)
}

type CanonKey = (BigInt, BigInt, BigInt);

struct Generator {
    cfg: GenConfig,
    cases: Vec<CaseKind>,
    ledger: Vec<LedgerEntry>,
    canon: BTreeMap<CanonKey, u64>,
    queue: BTreeSet<(u32, BigInt, BigInt, BigInt, BigInt, u64)>,
    unit_cache: BTreeMap<BigInt, Option<PellUnit>>,
    skipped: Vec<SkippedFiber>,
    skip_seen: BTreeSet<(CaseKind, Fiber)>,
}

impl Generator {
    fn key(&self, sol: &Solution) -> CanonKey {
        if self.cfg.dedupe {
            sol.canonical_key()
        } else {
            (sol.x.clone(), sol.y.clone(), sol.w.clone())
        }
    }

    fn queue_key(entry: &LedgerEntry) -> (u32, BigInt, BigInt, BigInt, BigInt, u64) {
        let s = &entry.solution;
        (entry.depth, s.x.abs() + s.y.abs(), s.x.abs(), s.y.abs(), s.w.abs(), entry.id)
    }

    fn insert(
        &mut self,
        solution: Solution,
        case: CaseKind,
        fiber: Fiber,
        depth: u32,
        parent: Option<u64>,
        provenance: Provenance,
    ) -> bool {
        let key = self.key(&solution);
        if self.canon.contains_key(&key) {
            return false;
        }
        let id = self.ledger.len() as u64;
        let entry = LedgerEntry { id, solution, case, fiber, depth, parent, provenance };
        self.queue.insert(Self::queue_key(&entry));
        self.canon.insert(key, id);
        self.ledger.push(entry);
        true
    }

    fn log_skip(&mut self, case: &CaseKind, fiber: &Fiber, reason: SkipReason) {
        if self.skip_seen.insert((case.clone(), fiber.clone())) {
            self.skipped.push(SkippedFiber { case: case.clone(), fiber: fiber.clone(), reason });
        }
    }

    fn expand(&mut self, entry: &LedgerEntry) -> Result<(), EngineError> {
        for case in self.cases.clone() {
            for nb in neighbor_fibers(&case, &entry.solution)? {
                let depth = entry.depth + u32::from(nb.geiser);
                if nb.geiser && entry.depth >= self.cfg.max_depth {
                    continue;
                }
                let provenance = if nb.geiser {
                    Provenance::GeiserSwitch
                } else if nb.case == entry.case && nb.fiber == entry.fiber {
                    Provenance::PellOrbit
                } else {
                    Provenance::Symmetry
                };
                self.orbit_fiber(&nb, depth, entry.id, provenance)?;
            }
        }
        Ok(())
    }

    fn orbit_fiber(
        &mut self,
        nb: &Neighbor,
        depth: u32,
        parent: u64,
        provenance: Provenance,
    ) -> Result<(), EngineError> {
        let boundary = boundary_classify(&boundary_of_fiber(&nb.case, &nb.fiber))?;
        if boundary != BoundaryType::RealQuadratic {
            self.log_skip(&nb.case, &nb.fiber, SkipReason::Boundary(boundary));
            return Ok(());
        }
        if !fiber_is_smooth(&nb.case, &nb.fiber) {
            self.log_skip(&nb.case, &nb.fiber, SkipReason::SingularFiber);
            return Ok(());
        }
        let (affine, _) = fiber_conic(&nb.case, &nb.fiber);
        let sys = match pell_reduce(&affine) {
            Ok(sys) => sys,
            Err(ConicError::NotPellType(_)) | Err(ConicError::Degenerate) => {
                self.log_skip(&nb.case, &nb.fiber, SkipReason::NotPellType);
                return Ok(());
            }
            Err(e) => return Err(e.into()),
        };
        let unit = match self.unit_cache.get(&sys.d) {
            Some(cached) => cached.clone(),
            None => {
                let computed = pell::fundamental_unit_budgeted(&sys.d, self.cfg.max_bits)?;
                self.unit_cache.insert(sys.d.clone(), computed.clone());
                computed
            }
        };
        let Some(unit) = unit else {
            self.log_skip(&nb.case, &nb.fiber, SkipReason::UnitTooLarge);
            return Ok(());
        };
        for dir in [Direction::Forward, Direction::Backward] {
            let pts = match integral_orbit_with(
                &affine,
                &sys,
                &unit,
                (&nb.image.x, &nb.image.y),
                self.cfg.per_fiber,
                dir,
                self.cfg.max_bits,
            ) {
                Ok(pts) => pts,
                Err(ConicError::SeedOffConic(x, y)) => {
                    debug_assert!(false, "image ({x}, {y}) off its own fiber conic");
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            for (x, y) in pts {
                let Some(sol) = recover_solution(&nb.case, &nb.fiber, (&x, &y))? else {
                    continue;
                };
                if sol.max_bits() > self.cfg.max_bits {
                    continue;
                }
                self.insert(sol, nb.case.clone(), nb.fiber.clone(), depth, Some(parent), provenance);
            }
        }
        Ok(())
    }
}

/// Breadth-first double-fibration generation from the given seeds.
///
/// Every seed must satisfy the surface equation; at least one must be
/// good for some case, and each seed enters the ledger under the first
/// case for which it is good. The frontier is processed in ascending
/// `(depth, |x|+|y|, ...)` order; for each entry, every neighbor fiber
/// with real quadratic boundary and smooth conic is orbit-expanded in
/// both directions, recovered solutions are deduplicated by symmetry
/// class and appended. Geiser switches increase the depth and stop at
/// `max_depth`; coordinate growth stops at `max_bits`.
pub fn generate(
    n: &BigInt,
    seeds: &[Solution],
    cfg: &GenConfig,
) -> Result<GenOutcome, EngineError> {
    let cases = classify(n)?;
    if cases.is_empty() {
        return Err(EngineError::UnsupportedN(n.clone()));
    }
    let mut gen = Generator {
        cfg: cfg.clone(),
        cases,
        ledger: Vec::new(),
        canon: BTreeMap::new(),
        queue: BTreeSet::new(),
        unit_cache: BTreeMap::new(),
        skipped: Vec::new(),
        skip_seen: BTreeSet::new(),
    };
    let mut failed = Vec::new();
    for seed in seeds {
        if seed.n != *n || !seed.verify() {
            return Err(EngineError::InvalidSeed(seed.clone()));
        }
        let mut reports = Vec::new();
        let mut chosen = None;
        for case in &gen.cases {
            let report = goodness(case, seed)?;
            if report.good && chosen.is_none() {
                chosen = Some(case.clone());
            }
            reports.push(report);
        }
        match chosen {
            Some(case) => {
                let fiber = pi1(&case, seed)?;
                gen.insert(seed.clone(), case, fiber, 0, None, Provenance::Seed);
            }
            None => failed.push((seed.clone(), reports)),
        }
    }
    if gen.ledger.is_empty() {
        return Err(EngineError::NoGoodSeed(failed.len(), failed));
    }
    while let Some(key) = gen.queue.pop_first() {
        let entry = gen.ledger[key.5 as usize].clone();
        gen.expand(&entry)?;
    }
    // Deterministic output order and contiguous ids.
    let mut entries = gen.ledger;
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by_key(|&i| {
        let e = &entries[i];
        let s = &e.solution;
        (
            e.depth,
            s.x.abs() + s.y.abs(),
            s.x.abs(),
            s.y.abs(),
            s.w.abs(),
            s.x.clone(),
            s.y.clone(),
            s.w.clone(),
            e.id,
        )
    });
    let mut remap = vec![0u64; entries.len()];
    for (new_id, &old) in order.iter().enumerate() {
        remap[entries[old].id as usize] = new_id as u64;
    }
    let mut sorted: Vec<LedgerEntry> = Vec::with_capacity(entries.len());
    for &old in &order {
        let mut e = entries[old].clone();
        e.id = remap[e.id as usize];
        e.parent = e.parent.map(|p| remap[p as usize]);
        sorted.push(e);
    }
    entries = sorted;
    Ok(GenOutcome { entries, skipped: gen.skipped })
}

/// On-disk ledger record: one JSON object per line, every integer as a
/// decimal string (values exceed 64 bits routinely). `parent` refers to
/// the zero-based line index of the parent record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerRecord {
    pub n: String,
    pub x: String,
    pub y: String,
    pub w: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber: Option<[String; 2]>,
    pub depth: u32,
    pub parent: Option<u64>,
    pub provenance: Provenance,
}

impl From<&LedgerEntry> for LedgerRecord {
    fn from(e: &LedgerEntry) -> LedgerRecord {
        LedgerRecord {
            n: e.solution.n.to_string(),
            x: e.solution.x.to_string(),
            y: e.solution.y.to_string(),
            w: e.solution.w.to_string(),
            case: Some(e.case.token().to_string()),
            m: Some(e.case.m().to_string()),
            fiber: Some([e.fiber.s.to_string(), e.fiber.t.to_string()]),
            depth: e.depth,
            parent: e.parent,
            provenance: e.provenance,
        }
    }
}

/// A brute-force seed as a ledger record (no case attached).
pub fn seed_record(sol: &Solution) -> LedgerRecord {
    LedgerRecord {
        n: sol.n.to_string(),
        x: sol.x.to_string(),
        y: sol.y.to_string(),
        w: sol.w.to_string(),
        case: None,
        m: None,
        fiber: None,
        depth: 0,
        parent: None,
        provenance: Provenance::Seed,
    }
}

/// Serialize entries one record per line.
pub fn write_ledger(entries: &[LedgerEntry], mut out: impl Write) -> Result<(), EngineError> {
    for e in entries {
        let record = LedgerRecord::from(e);
        serde_json::to_writer(&mut out, &record)
            .map_err(|e| EngineError::Ledger { line: record_line(&record), reason: e.to_string() })?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn record_line(_r: &LedgerRecord) -> usize {
    0
}

/// Ledger serialized to a byte vector; the byte-exact contract for the
/// resume and determinism guarantees.
pub fn ledger_bytes(entries: &[LedgerEntry]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_ledger(entries, &mut buf).expect("writing to memory cannot fail");
    buf
}

/// Parse the solutions out of a ledger file, verifying each; used to
/// reload a ledger as the seed frontier.
pub fn read_solutions(reader: impl BufRead) -> Result<Vec<Solution>, EngineError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: LedgerRecord = serde_json::from_str(&line)
            .map_err(|e| EngineError::Ledger { line: idx, reason: e.to_string() })?;
        let parse = |s: &str, what: &str| {
            s.parse::<BigInt>().map_err(|_| EngineError::Ledger {
                line: idx,
                reason: format!("bad {what}: {s}"),
            })
        };
        let sol = Solution::new(
            parse(&record.n, "n")?,
            parse(&record.x, "x")?,
            parse(&record.y, "y")?,
            parse(&record.w, "w")?,
        );
        if !sol.verify() {
            return Err(EngineError::Ledger {
                line: idx,
                reason: format!("solution {sol} fails the surface equation"),
            });
        }
        out.push(sol);
    }
    Ok(out)
}
