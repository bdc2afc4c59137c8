//! Fixpoint propagation over the parameter grid, record views, tables,
//! rankings and the on-disk cache.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::cdc_lower::{self, cdc_lower_records};
use crate::cdc_upper::{self, cdc_upper_records};
use crate::ef::{self, SearchBudget, SkeletonMode};
use crate::lookup::{canonical_cdc, degenerate_cdc, BoundsView};
use crate::mdc::{self, EvMode};
use crate::model::{self, BoundRecord, CdcParams, Cell, Direction, IsoTypes, MdcParams, Source, MAX_N};
use crate::qcalc::{BigRat, QField};
use crate::spreads;
use crate::Error;

pub type CdcKey = (i64, i64, i64, i64);
pub type MdcKey = (i64, i64, i64);

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "SUBSPACE_TABLES_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepOrder {
    /// Ascending `n`, cells of one level evaluated in parallel.
    Ascending,
    /// One shuffled sequential pass per sweep.
    Permuted(u64),
}

#[derive(Clone, Debug)]
pub struct GridConfig {
    pub qs: Vec<i64>,
    pub nmax: i64,
    pub ef_mode: SkeletonMode,
    pub ef_budget: SearchBudget,
    pub ev_mode: Option<EvMode>,
    pub order: SweepOrder,
    pub max_sweeps: usize,
}

impl GridConfig {
    pub fn new(qs: Vec<i64>, nmax: i64) -> Self {
        GridConfig {
            qs,
            nmax,
            ef_mode: SkeletonMode::Exact,
            ef_budget: SearchBudget::default(),
            ev_mode: None,
            order: SweepOrder::Ascending,
            max_sweeps: 64,
        }
    }

    /// Constant dimension cells are computed one level beyond `nmax` so the
    /// averaging bound for mixed dimension codes has its inputs.
    pub fn cdc_nmax(&self) -> i64 {
        (self.nmax + 1).min(MAX_N)
    }

    fn validate(&self) -> Result<(), Error> {
        if self.qs.is_empty() {
            return Err(Error::InvalidParameter("no field sizes given".into()));
        }
        for &q in &self.qs {
            MdcParams::new(q, 1, 1)?;
        }
        if !(1..=MAX_N).contains(&self.nmax) {
            return Err(Error::OutOfGrid(format!("nmax={} outside 1..={MAX_N}", self.nmax)));
        }
        Ok(())
    }

    /// Hash of everything that influences the computed values.
    pub fn fingerprint(&self, facts: &Facts) -> String {
        let mut h = Sha256::new();
        let ev = match self.ev_mode {
            None => "off".to_string(),
            Some(EvMode::Lp) => "lp".to_string(),
            Some(EvMode::BranchAndBound { max_nodes }) => format!("bb:{max_nodes}"),
        };
        let head = format!(
            "qs={:?};nmax={};ef={:?};cap={};nodes={};ev={ev}\n",
            self.qs, self.nmax, self.ef_mode, self.ef_budget.vertex_cap, self.ef_budget.max_nodes
        );
        h.update(head.as_bytes());
        h.update(facts.to_tsv().as_bytes());
        format!("{:x}", h.finalize())
    }
}

/// One loaded fact: a bound or classification that is not derived here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub q: i64,
    pub n: i64,
    pub d: i64,
    /// `None` for mixed dimension cells.
    pub k: Option<i64>,
    pub record: BoundRecord,
    pub iso: Option<IsoTypes>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Facts {
    pub rows: Vec<Fact>,
}

const BUILTIN_FACTS: &str = include_str!("../data/facts.tsv");

struct RawLine {
    q: i64,
    n: i64,
    d: i64,
    k: Option<i64>,
    id: String,
    param: String,
    direction: String,
    value: BigInt,
    source: Option<String>,
    iso: Option<String>,
}

fn parse_line(line: &str, lineno: usize, what: &'static str) -> Result<RawLine, Error> {
    let bad = |reason: String| Error::Parse { what, line: lineno, reason };
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < 8 {
        return Err(bad(format!("expected at least 8 tab-separated fields, found {}", cols.len())));
    }
    let num = |s: &str, name: &str| s.trim().parse::<i64>().map_err(|_| bad(format!("{name} '{s}' is not an integer")));
    let k = match cols[3].trim() {
        "-" => None,
        s => Some(num(s, "k")?),
    };
    let value = cols[7].trim().parse::<BigInt>().map_err(|_| bad(format!("value '{}' is not an integer", cols[7])))?;
    let opt = |i: usize| cols.get(i).map(|s| s.trim()).filter(|s| !s.is_empty()).map(str::to_string);
    Ok(RawLine {
        q: num(cols[0], "q")?,
        n: num(cols[1], "n")?,
        d: num(cols[2], "d")?,
        k,
        id: cols[4].trim().to_string(),
        param: cols[5].to_string(),
        direction: cols[6].trim().to_string(),
        value,
        source: opt(8),
        iso: opt(9),
    })
}

fn record_from_raw(raw: &RawLine, lineno: usize, what: &'static str) -> Result<BoundRecord, Error> {
    let bad = |reason: String| Error::Parse { what, line: lineno, reason };
    let id = model::constraint_id(&raw.id).ok_or_else(|| bad(format!("unknown constraint '{}'", raw.id)))?;
    let dir = Direction::parse(&raw.direction).ok_or_else(|| bad(format!("unknown direction '{}'", raw.direction)))?;
    let mut rec = BoundRecord::new(id, raw.param.clone(), raw.value.clone(), dir);
    match raw.source.as_deref() {
        None | Some("derived") => {}
        Some("external") => rec = rec.external(),
        Some(s) => return Err(bad(format!("unknown source '{s}'"))),
    }
    Ok(rec)
}

fn parse_iso(raw: &RawLine, lineno: usize, what: &'static str) -> Result<Option<IsoTypes>, Error> {
    match &raw.iso {
        None => Ok(None),
        Some(s) => IsoTypes::parse(s).map(Some).ok_or(Error::Parse { what, line: lineno, reason: format!("bad isomorphism count '{s}'") }),
    }
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

impl Facts {
    pub fn empty() -> Self {
        Facts::default()
    }

    /// The facts shipped with the crate.
    pub fn builtin() -> Self {
        Facts::parse(BUILTIN_FACTS).expect("bundled facts parse")
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if is_skippable(line) {
                continue;
            }
            let raw = parse_line(line, i + 1, "facts")?;
            let record = record_from_raw(&raw, i + 1, "facts")?;
            let iso = parse_iso(&raw, i + 1, "facts")?;
            rows.push(Fact { q: raw.q, n: raw.n, d: raw.d, k: raw.k, record, iso });
        }
        Ok(Facts { rows })
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        Facts::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for f in &self.rows {
            let k = f.k.map_or("-".to_string(), |k| k.to_string());
            let iso = f.iso.as_ref().map(IsoTypes::to_field).unwrap_or_default();
            let r = &f.record;
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{k}\t{}\t{}\t{}\t{}\t{}\t{iso}",
                f.q,
                f.n,
                f.d,
                r.constraint,
                r.parameter,
                r.direction.as_str(),
                r.value,
                r.source.as_str()
            );
        }
        out
    }
}

/// Converged bounds for every cell of a grid.
#[derive(Clone, Debug)]
pub struct BoundsTable {
    pub config_hash: String,
    pub qs: Vec<i64>,
    pub nmax: i64,
    pub cdc_nmax: i64,
    fields: BTreeMap<i64, QField>,
    pub cdc: BTreeMap<CdcKey, Cell>,
    pub mdc: BTreeMap<MdcKey, Cell>,
}

/// Result of resolving a constant dimension query.
#[derive(Clone, Debug)]
pub enum CdcLookup<'a> {
    Stored { canonical: CdcParams, cell: &'a Cell },
    Trivial { canonical: CdcParams, value: BigInt },
}

impl BoundsView for BoundsTable {
    fn cdc(&self, q: i64, n: i64, d: i64, k: i64) -> Option<(BigInt, BigInt)> {
        let f = self.fields.get(&q)?;
        if let Some(v) = degenerate_cdc(f, n, d, k) {
            return Some((v.clone(), v));
        }
        let (n, d, k) = canonical_cdc(n, d, k);
        self.cdc.get(&(q, n, d, k)).map(|c| (c.best_lower.clone(), c.best_upper.clone()))
    }

    fn mdc(&self, q: i64, n: i64, d: i64) -> Option<(BigInt, BigInt)> {
        self.mdc.get(&(q, n, d)).map(|c| (c.best_lower.clone(), c.best_upper.clone()))
    }
}

fn make_fields(qs: &[i64]) -> Result<BTreeMap<i64, QField>, Error> {
    qs.iter().map(|&q| Ok((q, QField::new(q, MAX_N as usize + 1)?))).collect()
}

/// Canonical, non-degenerate constant dimension cells for `n`.
pub fn cdc_cells_at(q: i64, n: i64) -> Vec<CdcKey> {
    let mut out = Vec::new();
    for k in 2..=n / 2 {
        for d in (4..=2 * k).step_by(2) {
            out.push((q, n, d, k));
        }
    }
    out
}

impl BoundsTable {
    pub fn field(&self, q: i64) -> Option<&QField> {
        self.fields.get(&q)
    }

    pub fn lookup_cdc(&self, q: i64, n: i64, d: i64, k: i64) -> Result<CdcLookup<'_>, Error> {
        let p = CdcParams::new(q, n, d, k)?;
        if !self.fields.contains_key(&q) {
            return Err(Error::OutOfGrid(format!("q={q} was not computed")));
        }
        let norm = model::normalize_cdc(p);
        if let Some(value) = norm.trivial {
            return Ok(CdcLookup::Trivial { canonical: norm.canonical, value });
        }
        let c = norm.canonical;
        match self.cdc.get(&(c.q, c.n, c.d, c.k)) {
            Some(cell) => Ok(CdcLookup::Stored { canonical: c, cell }),
            None => Err(Error::OutOfGrid(format!("n={n} beyond the computed grid (n <= {})", self.cdc_nmax))),
        }
    }

    pub fn lookup_mdc(&self, q: i64, n: i64, d: i64) -> Result<&Cell, Error> {
        MdcParams::new(q, n, d)?;
        self.mdc.get(&(q, n, d)).ok_or_else(|| Error::OutOfGrid(format!("A_{q}({n},{d}) beyond the computed grid (n <= {})", self.nmax)))
    }

    /// Fails if some cell has crossing bounds, naming the two records.
    pub fn check_consistency(&self) -> Result<(), Error> {
        let check = |name: String, cell: &Cell| -> Result<(), Error> {
            if cell.best_lower <= cell.best_upper {
                return Ok(());
            }
            let by = |want: &BigInt, lower: bool| {
                cell.records
                    .iter()
                    .find(|r| &r.value == want && if lower { r.direction.bounds_below() } else { r.direction.bounds_above() })
                    .map(|r| if r.parameter.is_empty() { r.constraint.to_string() } else { format!("{}({})", r.constraint, r.parameter) })
                    .unwrap_or_else(|| "initial".to_string())
            };
            Err(Error::Inconsistent {
                cell: name,
                lower: cell.best_lower.to_string(),
                lower_by: by(&cell.best_lower, true),
                upper: cell.best_upper.to_string(),
                upper_by: by(&cell.best_upper, false),
            })
        };
        for (&(q, n, d, k), cell) in &self.cdc {
            check(format!("A_{q}({n},{d};{k})"), cell)?;
        }
        for (&(q, n, d), cell) in &self.mdc {
            check(format!("A_{q}({n},{d})"), cell)?;
        }
        Ok(())
    }
}

struct Evaluator<'a> {
    config: &'a GridConfig,
    fields: &'a BTreeMap<i64, QField>,
    cdc_facts: HashMap<CdcKey, Vec<Fact>>,
    mdc_facts: HashMap<MdcKey, Vec<Fact>>,
    ef_cdc: HashMap<CdcKey, BoundRecord>,
    ef_mdc: HashMap<MdcKey, BoundRecord>,
    ev_cache: Mutex<HashMap<(MdcKey, Vec<BigInt>), Option<BigInt>>>,
}

/// Skeleton record for a cell; an exact search that fell back to the greedy
/// pick beyond the vertex cap is not reported.
fn ef_record(res: ef::SkeletonResult, mode: SkeletonMode) -> Option<BoundRecord> {
    if mode == SkeletonMode::Exact && res.status == ef::SkeletonStatus::Greedy {
        return None;
    }
    let (id, param) = res.record_label();
    Some(BoundRecord::lower(id, res.value).with_param(param))
}

fn finish_cell(records: Vec<BoundRecord>, facts: Option<&Vec<Fact>>, lifted: Option<BigInt>) -> Cell {
    let mut records = records;
    let mut iso = None;
    for f in facts.into_iter().flatten() {
        records.push(f.record.clone());
        if f.iso.is_some() {
            iso = f.iso.clone();
        }
    }
    let best_lower = records.iter().filter(|r| r.direction.bounds_below()).map(|r| &r.value).max().cloned().unwrap_or_default();
    let best_upper = records.iter().filter(|r| r.direction.bounds_above()).map(|r| &r.value).min().cloned().expect("every cell has an upper record");
    let classified = matches!(iso, Some(IsoTypes::Exactly(_)));
    Cell { best_lower, best_upper, records, classified, iso_types: iso, lifted_mrd_bound: lifted }
}

impl Evaluator<'_> {
    fn cdc(&self, view: &dyn BoundsView, key: CdcKey) -> Cell {
        let (q, n, d, k) = key;
        let f = &self.fields[&q];
        let mut records = cdc_lower_records(f, n, d, k, view);
        if let Some(r) = self.ef_cdc.get(&key) {
            records.push(r.clone());
        }
        records.extend(cdc_upper_records(f, n, d, k, view));
        if d == 2 * k {
            records.extend(spreads::spread_exact_records(f, n, k));
            records.extend(spreads::spread_upper_battery(f, n, k));
        }
        let lifted = cdc_upper::mrd_containing_bound(f, n, d, k, view);
        finish_cell(records, self.cdc_facts.get(&key), lifted)
    }

    fn mdc(&self, view: &dyn BoundsView, key: MdcKey) -> Cell {
        let (q, n, d) = key;
        let f = &self.fields[&q];
        let mut records = mdc::mdc_closed_forms(f, n, d);
        records.extend(mdc::mdc_recursive_records(f, n, d, view, None));
        if let Some(r) = self.ef_mdc.get(&key) {
            records.push(r.clone());
        }
        if let (Some(mode), true) = (self.config.ev_mode, d % 2 == 1 && d >= 3) {
            let inputs: Option<Vec<BigInt>> = (0..=n).map(|i| view.cdc_upper(q, n, d + 1, i)).collect();
            if let Some(inputs) = inputs {
                let ck = (key, inputs);
                let cached = self.ev_cache.lock().expect("cache lock").get(&ck).cloned();
                let v = cached.unwrap_or_else(|| {
                    let v = mdc::etzion_vardy(f, n, d, view, mode);
                    self.ev_cache.lock().expect("cache lock").insert(ck, v.clone());
                    v
                });
                if let Some(v) = v {
                    records.push(BoundRecord::upper("Etzion_Vardy_ilp", v));
                }
            }
        }
        finish_cell(records, self.mdc_facts.get(&key), None)
    }
}

fn same_bounds(a: &Cell, b: &Cell) -> bool {
    a.best_lower == b.best_lower && a.best_upper == b.best_upper && a.lifted_mrd_bound == b.lifted_mrd_bound
}

/// Evaluates every constraint over the grid until no best bound changes.
pub fn fixpoint(config: &GridConfig, facts: &Facts) -> Result<BoundsTable, Error> {
    config.validate()?;
    let fields = make_fields(&config.qs)?;
    let cdc_nmax = config.cdc_nmax();

    let mut cdc_facts: HashMap<CdcKey, Vec<Fact>> = HashMap::new();
    let mut mdc_facts: HashMap<MdcKey, Vec<Fact>> = HashMap::new();
    for fact in &facts.rows {
        match fact.k {
            Some(k) => {
                let (n, d, k) = canonical_cdc(fact.n, fact.d, k);
                cdc_facts.entry((fact.q, n, d, k)).or_default().push(fact.clone());
            }
            None => mdc_facts.entry((fact.q, fact.n, fact.d)).or_default().push(fact.clone()),
        }
    }

    let mut table = BoundsTable {
        config_hash: config.fingerprint(facts),
        qs: config.qs.clone(),
        nmax: config.nmax,
        cdc_nmax,
        fields: fields.clone(),
        cdc: BTreeMap::new(),
        mdc: BTreeMap::new(),
    };
    for (&q, f) in &fields {
        for n in 4..=cdc_nmax {
            for key in cdc_cells_at(q, n) {
                table.cdc.insert(key, Cell::new(BigInt::zero(), f.gauss(n, key.3)));
            }
        }
        for n in 1..=config.nmax {
            for d in 1..=n {
                table.mdc.insert((q, n, d), Cell::new(BigInt::zero(), f.total_subspaces(n)));
            }
        }
    }

    let cdc_keys: Vec<CdcKey> = table.cdc.keys().copied().collect();
    let mdc_keys: Vec<MdcKey> = table.mdc.keys().copied().collect();
    let ef_cdc: HashMap<CdcKey, BoundRecord> = cdc_keys
        .par_iter()
        .filter_map(|&(q, n, d, k)| {
            let r = ef::skeleton_optimize_cdc(&fields[&q], n as u32, d as u32, k as u32, config.ef_mode, &config.ef_budget);
            ef_record(r, config.ef_mode).map(|r| ((q, n, d, k), r))
        })
        .collect();
    let ef_mdc: HashMap<MdcKey, BoundRecord> = mdc_keys
        .par_iter()
        .filter(|&&(_, n, d)| d >= 2 && n >= 2)
        .filter_map(|&(q, n, d)| {
            let mode = if config.ef_mode == SkeletonMode::ShiftedBlocks { SkeletonMode::Greedy } else { config.ef_mode };
            let r = ef::skeleton_optimize_mdc(&fields[&q], n as u32, d as u32, mode, &config.ef_budget);
            ef_record(r, mode).map(|r| ((q, n, d), r))
        })
        .collect();

    let ev = Evaluator { config, fields: &fields, cdc_facts, mdc_facts, ef_cdc, ef_mdc, ev_cache: Mutex::new(HashMap::new()) };

    let mut converged = false;
    for _ in 0..config.max_sweeps {
        let changed = match config.order {
            SweepOrder::Ascending => sweep_ascending(&mut table, &ev, &cdc_keys, &mdc_keys),
            SweepOrder::Permuted(seed) => sweep_permuted(&mut table, &ev, &cdc_keys, &mdc_keys, seed),
        };
        if !changed {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::InvalidParameter(format!("no fixpoint after {} sweeps", config.max_sweeps)));
    }
    table.check_consistency()?;
    Ok(table)
}

fn sweep_ascending(table: &mut BoundsTable, ev: &Evaluator<'_>, cdc_keys: &[CdcKey], mdc_keys: &[MdcKey]) -> bool {
    let mut changed = false;
    let mut by_level: BTreeMap<i64, Vec<CdcKey>> = BTreeMap::new();
    for &k in cdc_keys {
        by_level.entry(k.1).or_default().push(k);
    }
    for keys in by_level.values() {
        let snapshot: &BoundsTable = table;
        let results: Vec<(CdcKey, Cell)> = keys.par_iter().map(|&key| (key, ev.cdc(snapshot, key))).collect();
        for (key, cell) in results {
            let slot = table.cdc.get_mut(&key).expect("known cell");
            changed |= !same_bounds(slot, &cell);
            *slot = cell;
        }
    }
    let mut by_level: BTreeMap<i64, Vec<MdcKey>> = BTreeMap::new();
    for &k in mdc_keys {
        by_level.entry(k.1).or_default().push(k);
    }
    for keys in by_level.values() {
        let snapshot: &BoundsTable = table;
        let results: Vec<(MdcKey, Cell)> = keys.par_iter().map(|&key| (key, ev.mdc(snapshot, key))).collect();
        for (key, cell) in results {
            let slot = table.mdc.get_mut(&key).expect("known cell");
            changed |= !same_bounds(slot, &cell);
            *slot = cell;
        }
    }
    changed
}

fn sweep_permuted(table: &mut BoundsTable, ev: &Evaluator<'_>, cdc_keys: &[CdcKey], mdc_keys: &[MdcKey], seed: u64) -> bool {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut changed = false;
    let mut order = cdc_keys.to_vec();
    order.shuffle(&mut rng);
    for key in order {
        let cell = ev.cdc(table, key);
        let slot = table.cdc.get_mut(&key).expect("known cell");
        changed |= !same_bounds(slot, &cell);
        *slot = cell;
    }
    let mut order = mdc_keys.to_vec();
    order.shuffle(&mut rng);
    for key in order {
        let cell = ev.mdc(table, key);
        let slot = table.mdc.get_mut(&key).expect("known cell");
        changed |= !same_bounds(slot, &cell);
        *slot = cell;
    }
    changed
}

// ---------------------------------------------------------------- record views

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordView {
    All,
    Short,
    Dominance,
}

impl FromStr for RecordView {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "all" => Ok(RecordView::All),
            "short" => Ok(RecordView::Short),
            "dominance" => Ok(RecordView::Dominance),
            _ => Err(Error::UndefinedView(format!("unknown record view '{s}'"))),
        }
    }
}

/// `(a, b)`: `a` is never weaker than `b`, so `b` is hidden when `a` is present.
pub const UPPER_DOMINANCE: [(&str, &str); 11] = [
    ("sphere_packing", "all_subs"),
    ("anticode", "sphere_packing"),
    ("anticode", "singleton"),
    ("johnson_1", "johnson_2"),
    ("johnson_1", "anticode"),
    ("johnson_1", "ilp_1"),
    ("ilp_1", "ilp_2"),
    ("ilp_4", "ilp_3"),
    ("johnson_2", "ilp_4"),
    ("Ahlswede_Aydinian", "johnson_1"),
    ("Ahlswede_Aydinian", "johnson_2"),
];

pub const LOWER_DOMINANCE: [(&str, &str); 5] = [
    ("sphere_covering", "trivial_1"),
    ("echelon_ferrers", "lin_poly"),
    ("ef_computation", "echelon_ferrers"),
    ("improved_linkage", "linkage_GLT"),
    ("improved_linkage", "linkage_ST"),
];

fn better(dir: Direction, a: &BigInt, b: &BigInt) -> bool {
    match dir {
        Direction::Lower => a > b,
        Direction::Upper => a < b,
        Direction::Exact => false,
    }
}

/// Applies a per-entry record view, keeping emission order.
pub fn filter_records(records: &[BoundRecord], view: RecordView) -> Vec<BoundRecord> {
    if view == RecordView::All {
        return records.to_vec();
    }
    let mut best: Vec<BoundRecord> = Vec::new();
    for r in records {
        match best.iter_mut().find(|b| b.constraint == r.constraint && b.direction == r.direction) {
            Some(b) => {
                if better(r.direction, &r.value, &b.value) {
                    *b = r.clone();
                }
            }
            None => best.push(r.clone()),
        }
    }
    if view == RecordView::Short {
        return best;
    }
    let present = |id: &str, dir: Direction| best.iter().any(|r| r.constraint == id && r.direction == dir);
    best.iter()
        .filter(|r| {
            let rel: &[(&str, &str)] = match r.direction {
                Direction::Upper => &UPPER_DOMINANCE,
                Direction::Lower => &LOWER_DOMINANCE,
                Direction::Exact => &[],
            };
            !rel.iter().any(|(a, b)| *b == r.constraint && present(a, r.direction))
        })
        .cloned()
        .collect()
}

/// Stable order by catalogue position, keeping emission order inside an id.
pub fn catalogue_sorted(records: &[BoundRecord]) -> Vec<BoundRecord> {
    let mut v = records.to_vec();
    v.sort_by_key(|r| model::catalogue_index(r.constraint));
    v
}

// ---------------------------------------------------------------- tables

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableView {
    Short,
    Normal,
    Large,
    RelativeGap,
    Ratio,
    Density,
    RealizedDensity,
    AmountLiftedMrd,
    AmountMrdBound,
    AmountMulticomponent,
}

impl TableView {
    pub fn name(self) -> &'static str {
        match self {
            TableView::Short => "short",
            TableView::Normal => "normal",
            TableView::Large => "large",
            TableView::RelativeGap => "relative-gap",
            TableView::Ratio => "ratio",
            TableView::Density => "density",
            TableView::RealizedDensity => "realized-density",
            TableView::AmountLiftedMrd => "amount-lifted-mrd",
            TableView::AmountMrdBound => "amount-mrd-bound",
            TableView::AmountMulticomponent => "amount-multicomponent",
        }
    }
}

impl FromStr for TableView {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let v = match s.replace('_', "-").as_str() {
            "short" => TableView::Short,
            "normal" => TableView::Normal,
            "large" => TableView::Large,
            "relative-gap" => TableView::RelativeGap,
            "ratio" | "ratio-of-bounds" => TableView::Ratio,
            "density" => TableView::Density,
            "realized-density" => TableView::RealizedDensity,
            "amount-lifted-mrd" => TableView::AmountLiftedMrd,
            "amount-mrd-bound" => TableView::AmountMrdBound,
            "amount-multicomponent" => TableView::AmountMulticomponent,
            _ => return Err(Error::UndefinedView(format!("unknown table view '{s}'"))),
        };
        Ok(v)
    }
}

/// Text of one table entry: `l-u`, `m`, `m * (c)` or `m (≥ c)`.
pub fn entry_text(cell: &Cell) -> String {
    if !cell.is_exact() {
        return format!("{}-{}", cell.best_lower, cell.best_upper);
    }
    match &cell.iso_types {
        Some(IsoTypes::Exactly(c)) => format!("{} * ({c})", cell.best_lower),
        Some(IsoTypes::AtLeast(c)) => format!("{} (≥ {c})", cell.best_lower),
        None => cell.best_lower.to_string(),
    }
}

fn cdc_numeric(table: &BoundsTable, view: TableView, key: CdcKey, cell: &Cell) -> Result<String, Error> {
    let (q, n, d, k) = key;
    let f = table.field(q).expect("computed field");
    let ratio_of = |reference: BigInt| -> Result<BigRat, Error> {
        if reference <= BigInt::zero() {
            return Err(Error::UndefinedView("reference value must be positive".into()));
        }
        Ok(BigRat::new(cell.best_lower.clone(), reference))
    };
    let r = match view {
        TableView::RelativeGap => model::relative_gap(cell)?,
        TableView::Ratio => model::ratio_of_bounds(cell)?,
        TableView::Density => model::density(cell, &cdc_upper::anticode(f, n, d, k))?,
        TableView::RealizedDensity => model::realized_density(cell, &cdc_upper::anticode(f, n, d, k))?,
        TableView::AmountLiftedMrd => ratio_of(cdc_lower::lifted_mrd(f, n, d, k))?,
        TableView::AmountMrdBound => match &cell.lifted_mrd_bound {
            Some(b) => ratio_of(b.clone())?,
            None => return Err(Error::UndefinedView("no MRD bound for these parameters".into())),
        },
        TableView::AmountMulticomponent => ratio_of(cdc_lower::multicomponent(f, n, d, k))?,
        _ => unreachable!("range views are rendered elsewhere"),
    };
    Ok(model::format_decimal(&r, 3))
}

/// Constant dimension table for one `(q, n)`: rows `d`, columns `k`.
pub fn render_cdc_table(table: &BoundsTable, q: i64, n: i64, view: TableView) -> Result<String, Error> {
    let f = table.field(q).ok_or_else(|| Error::OutOfGrid(format!("q={q} was not computed")))?;
    if !(1..=table.cdc_nmax).contains(&n) {
        return Err(Error::OutOfGrid(format!("n={n} outside the computed grid")));
    }
    let (ds, ks): (Vec<i64>, Vec<i64>) = match view {
        TableView::Large => ((1..=n).collect(), (0..=n).collect()),
        TableView::Normal => ((2..=n).step_by(2).collect(), (1..=n / 2).collect()),
        _ => ((4..=2 * (n / 2)).step_by(2).collect(), (2..=n / 2).collect()),
    };
    let mut out = String::new();
    let _ = writeln!(out, "A_{q}({n},d;k)  view={}", view.name());
    let header: Vec<String> = ks.iter().map(|k| format!("k={k}")).collect();
    let _ = writeln!(out, "d\\k:  {}", header.join("  "));
    for &d in &ds {
        let mut cells = Vec::new();
        for &k in &ks {
            let text = if let Some(v) = degenerate_cdc(f, n, d, k) {
                if matches!(view, TableView::Short) || !matches!(view, TableView::Normal | TableView::Large) && d > 2 * k {
                    "-".to_string()
                } else if matches!(view, TableView::Normal | TableView::Large) {
                    v.to_string()
                } else {
                    "-".to_string()
                }
            } else {
                let (cn, cd, ck) = canonical_cdc(n, d, k);
                let key = (q, cn, cd, ck);
                let cell = &table.cdc[&key];
                match view {
                    TableView::Short | TableView::Normal | TableView::Large => entry_text(cell),
                    _ => cdc_numeric(table, view, key, cell).unwrap_or_else(|_| "-".to_string()),
                }
            };
            cells.push(text);
        }
        let _ = writeln!(out, "d={d}:  {}", cells.join("  "));
    }
    Ok(out)
}

/// Mixed dimension table for one `q`: rows `d`, columns `n`.
pub fn render_mdc_table(table: &BoundsTable, q: i64, view: TableView) -> Result<String, Error> {
    if table.field(q).is_none() {
        return Err(Error::OutOfGrid(format!("q={q} was not computed")));
    }
    let numeric = match view {
        TableView::Short | TableView::Normal | TableView::Large => false,
        TableView::RelativeGap | TableView::Ratio => true,
        _ => return Err(Error::UndefinedView(format!("{view:?} is defined for constant dimension tables only"))),
    };
    let mut out = String::new();
    let _ = writeln!(out, "A_{q}(n,d)  view={}", view.name());
    let header: Vec<String> = (1..=table.nmax).map(|n| format!("n={n}")).collect();
    let _ = writeln!(out, "d\\n:  {}", header.join("  "));
    for d in 1..=table.nmax {
        let mut cells = Vec::new();
        for n in 1..=table.nmax {
            let text = match table.mdc.get(&(q, n, d)) {
                None => "-".to_string(),
                Some(cell) if !numeric => entry_text(cell),
                Some(cell) => {
                    let r = if view == TableView::RelativeGap { model::relative_gap(cell) } else { model::ratio_of_bounds(cell) };
                    r.map(|r| model::format_decimal(&r, 3)).unwrap_or_else(|_| "-".to_string())
                }
            };
            cells.push(text);
        }
        let _ = writeln!(out, "d={d}:  {}", cells.join("  "));
    }
    Ok(out)
}

// ---------------------------------------------------------------- toplist

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeKind {
    Cdc,
    Mdc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToplistEntry {
    pub constraint: &'static str,
    /// Number of cells where the constraint attains the best derived bound.
    pub count: usize,
    pub cells: usize,
    /// True for ids that determine exact values.
    pub exact: bool,
}

impl ToplistEntry {
    pub fn score(&self) -> BigRat {
        BigRat::new(BigInt::from(self.count), BigInt::from(self.cells.max(1)))
    }
}

fn toplist_cells(table: &BoundsTable, kind: CodeKind) -> Vec<&Cell> {
    match kind {
        CodeKind::Cdc => table.cdc.iter().filter(|(k, _)| k.1 >= 4 && k.1 <= table.nmax).map(|(_, c)| c).collect(),
        CodeKind::Mdc => table.mdc.iter().filter(|(k, _)| k.1 >= 4).map(|(_, c)| c).collect(),
    }
}

/// Scores each constraint by the number of cells where it attains the best
/// bound among derived records.
pub fn toplist(table: &BoundsTable, kind: CodeKind, direction: Direction) -> Vec<ToplistEntry> {
    let cells = toplist_cells(table, kind);
    let mut counts: BTreeMap<&'static str, (usize, bool)> = BTreeMap::new();
    for cell in &cells {
        let relevant: Vec<&BoundRecord> = cell
            .records
            .iter()
            .filter(|r| r.source == Source::Derived)
            .filter(|r| if direction == Direction::Lower { r.direction.bounds_below() } else { r.direction.bounds_above() })
            .collect();
        let best = if direction == Direction::Lower {
            relevant.iter().map(|r| &r.value).max()
        } else {
            relevant.iter().map(|r| &r.value).min()
        };
        let Some(best) = best else { continue };
        let mut seen: Vec<&'static str> = Vec::new();
        for r in relevant.iter().filter(|r| &r.value == best) {
            if !seen.contains(&r.constraint) {
                seen.push(r.constraint);
                let e = counts.entry(r.constraint).or_insert((0, false));
                e.0 += 1;
                e.1 |= r.direction == Direction::Exact;
            }
        }
    }
    let mut out: Vec<ToplistEntry> =
        counts.into_iter().map(|(constraint, (count, exact))| ToplistEntry { constraint, count, cells: cells.len(), exact }).collect();
    out.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| model::catalogue_index(a.constraint).cmp(&model::catalogue_index(b.constraint))));
    out
}

pub fn render_toplist(entries: &[ToplistEntry]) -> String {
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        let pct = model::format_decimal(&(e.score() * BigRat::from_integer(BigInt::from(100))), 1);
        let star = if e.exact { " *" } else { "" };
        let _ = writeln!(out, "{:>3}. {}{star}  {pct}%  ({}/{})", i + 1, e.constraint, e.count, e.cells);
    }
    out
}

// ---------------------------------------------------------------- cache

pub fn default_cache_path() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("subspace-bounds-cache.tsv"))
}

fn write_record_line(out: &mut String, q: i64, n: i64, d: i64, k: Option<i64>, r: &BoundRecord, iso: Option<&IsoTypes>) {
    let k = k.map_or("-".to_string(), |k| k.to_string());
    let iso = iso.map(IsoTypes::to_field).unwrap_or_default();
    let _ = writeln!(
        out,
        "{q}\t{n}\t{d}\t{k}\t{}\t{}\t{}\t{}\t{}\t{iso}",
        r.constraint,
        r.parameter,
        r.direction.as_str(),
        r.value,
        r.source.as_str()
    );
}

fn write_cell(out: &mut String, q: i64, n: i64, d: i64, k: Option<i64>, cell: &Cell) {
    let kk = k.map_or("-".to_string(), |k| k.to_string());
    let _ = writeln!(out, "{q}\t{n}\t{d}\t{kk}\t@best\t\tlower\t{}", cell.best_lower);
    let _ = writeln!(out, "{q}\t{n}\t{d}\t{kk}\t@best\t\tupper\t{}", cell.best_upper);
    if let Some(b) = &cell.lifted_mrd_bound {
        let _ = writeln!(out, "{q}\t{n}\t{d}\t{kk}\t@liftedmrdsizebound\t\tupper\t{b}");
    }
    for r in &cell.records {
        let iso = if r.constraint == "classification" { cell.iso_types.as_ref() } else { None };
        write_record_line(out, q, n, d, k, r, iso);
    }
}

/// Serializes a converged table; byte-identical for identical tables.
pub fn cache_text(table: &BoundsTable) -> String {
    let mut out = String::new();
    let qs: Vec<String> = table.qs.iter().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "# subspace-bounds cache v1");
    let _ = writeln!(out, "# config {}", table.config_hash);
    let _ = writeln!(out, "# grid qs={} nmax={} cdc_nmax={}", qs.join(","), table.nmax, table.cdc_nmax);
    for (&(q, n, d, k), cell) in &table.cdc {
        write_cell(&mut out, q, n, d, Some(k), cell);
    }
    for (&(q, n, d), cell) in &table.mdc {
        write_cell(&mut out, q, n, d, None, cell);
    }
    out
}

pub fn parse_cache(text: &str) -> Result<BoundsTable, Error> {
    const WHAT: &str = "cache";
    let mut hash = None;
    let mut grid = None;
    let mut cdc: BTreeMap<CdcKey, Cell> = BTreeMap::new();
    let mut mdc: BTreeMap<MdcKey, Cell> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix("# config ") {
            hash = Some(rest.trim().to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("# grid ") {
            let mut qs = None;
            let mut nmax = None;
            let mut cdc_nmax = None;
            for part in rest.split_whitespace() {
                match part.split_once('=') {
                    Some(("qs", v)) => qs = v.split(',').map(|s| s.parse::<i64>().ok()).collect::<Option<Vec<_>>>(),
                    Some(("nmax", v)) => nmax = v.parse::<i64>().ok(),
                    Some(("cdc_nmax", v)) => cdc_nmax = v.parse::<i64>().ok(),
                    _ => {}
                }
            }
            match (qs, nmax, cdc_nmax) {
                (Some(a), Some(b), Some(c)) => grid = Some((a, b, c)),
                _ => return Err(Error::Parse { what: WHAT, line: lineno, reason: "malformed grid header".into() }),
            }
            continue;
        }
        if is_skippable(line) {
            continue;
        }
        let raw = parse_line(line, lineno, WHAT)?;
        let cell = match raw.k {
            Some(k) => cdc.entry((raw.q, raw.n, raw.d, k)).or_insert_with(|| Cell::new(BigInt::zero(), BigInt::zero())),
            None => mdc.entry((raw.q, raw.n, raw.d)).or_insert_with(|| Cell::new(BigInt::zero(), BigInt::zero())),
        };
        match (raw.id.as_str(), raw.direction.as_str()) {
            ("@best", "lower") => cell.best_lower = raw.value,
            ("@best", "upper") => cell.best_upper = raw.value,
            ("@liftedmrdsizebound", _) => cell.lifted_mrd_bound = Some(raw.value),
            _ => {
                let rec = record_from_raw(&raw, lineno, WHAT)?;
                if let Some(iso) = parse_iso(&raw, lineno, WHAT)? {
                    cell.classified = matches!(iso, IsoTypes::Exactly(_));
                    cell.iso_types = Some(iso);
                }
                cell.records.push(rec);
            }
        }
    }
    let config_hash = hash.ok_or(Error::Parse { what: WHAT, line: 1, reason: "missing config header".into() })?;
    let (qs, nmax, cdc_nmax) = grid.ok_or(Error::Parse { what: WHAT, line: 1, reason: "missing grid header".into() })?;
    let fields = make_fields(&qs)?;
    Ok(BoundsTable { config_hash, qs, nmax, cdc_nmax, fields, cdc, mdc })
}

pub fn write_cache(table: &BoundsTable, path: &Path) -> Result<(), Error> {
    std::fs::write(path, cache_text(table))?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<BoundsTable, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("no cache at {}; run `subspace-bounds compute` first", path.display()),
            ))
        } else {
            Error::Io(e)
        }
    })?;
    parse_cache(&text)
}

/// Reads a cache and checks it was built for `config` and `facts`.
pub fn read_cache_for(path: &Path, config: &GridConfig, facts: &Facts) -> Result<BoundsTable, Error> {
    let table = read_cache(path)?;
    let want = config.fingerprint(facts);
    if table.config_hash != want {
        return Err(Error::CacheMismatch(format!("cache {} != expected {}", table.config_hash, want)));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(facts: &Facts) -> BoundsTable {
        fixpoint(&GridConfig::new(vec![2], 8), facts).unwrap()
    }

    #[test]
    fn seeded_cells_end_exact() {
        let t = small(&Facts::builtin());
        let c = &t.cdc[&(2, 6, 4, 3)];
        assert_eq!((c.best_lower.clone(), c.best_upper.clone()), (BigInt::from(77), BigInt::from(77)));
        assert!(c.classified);
        assert_eq!(entry_text(c), "77 * (5)");
        let c = &t.cdc[&(2, 8, 6, 4)];
        assert_eq!((c.best_lower.clone(), c.best_upper.clone()), (BigInt::from(257), BigInt::from(257)));
    }

    #[test]
    fn derivable_cells_without_facts() {
        let t = small(&Facts::empty());
        for (key, v) in [((2, 8, 8, 4), 17), ((2, 7, 6, 3), 17), ((2, 8, 6, 3), 34), ((2, 6, 6, 3), 9), ((2, 5, 4, 2), 9)] {
            let c = &t.cdc[&key];
            assert_eq!((c.best_lower.clone(), c.best_upper.clone()), (BigInt::from(v), BigInt::from(v)), "{key:?}");
        }
        let c = &t.cdc[&(2, 6, 4, 3)];
        assert_eq!(c.best_lower, BigInt::from(77));
        assert_eq!(c.best_upper, BigInt::from(81));
    }

    #[test]
    fn second_run_changes_nothing_and_cache_round_trips() {
        let facts = Facts::builtin();
        let a = small(&facts);
        let b = small(&facts);
        assert_eq!(cache_text(&a), cache_text(&b));
        let back = parse_cache(&cache_text(&a)).unwrap();
        assert_eq!(cache_text(&back), cache_text(&a));
    }

    #[test]
    fn permuted_order_agrees() {
        let facts = Facts::builtin();
        let a = small(&facts);
        let mut cfg = GridConfig::new(vec![2], 8);
        cfg.order = SweepOrder::Permuted(7);
        let b = fixpoint(&cfg, &facts).unwrap();
        for (key, cell) in &a.cdc {
            assert_eq!((&cell.best_lower, &cell.best_upper), (&b.cdc[key].best_lower, &b.cdc[key].best_upper));
        }
        for (key, cell) in &a.mdc {
            assert_eq!((&cell.best_lower, &cell.best_upper), (&b.mdc[key].best_lower, &b.mdc[key].best_upper));
        }
    }

    #[test]
    fn dominance_view_drops_dominated() {
        let t = small(&Facts::builtin());
        let recs = &t.cdc[&(2, 6, 4, 3)].records;
        let dom = filter_records(recs, RecordView::Dominance);
        assert!(!dom.iter().any(|r| r.constraint == "johnson_2"));
        assert!(dom.iter().any(|r| r.constraint == "johnson_1") || dom.iter().any(|r| r.constraint == "Ahlswede_Aydinian"));
        let short = filter_records(recs, RecordView::Short);
        assert_eq!(short.iter().filter(|r| r.constraint == "Ahlswede_Aydinian").count(), 1);
        assert_eq!(filter_records(recs, RecordView::All), *recs);
    }

    #[test]
    fn short_table_first_row() {
        let t = small(&Facts::builtin());
        let text = render_cdc_table(&t, 2, 6, TableView::Short).unwrap();
        let row = text.lines().find(|l| l.starts_with("d=4:")).unwrap();
        assert!(row.ends_with("21 * (131044)  77 * (5)"), "{row}");
        let large = render_cdc_table(&t, 2, 6, TableView::Large).unwrap();
        assert!(large.lines().any(|l| l.starts_with("d=2:") && l.contains("1395")));
        let ratio = render_cdc_table(&t, 2, 6, TableView::Ratio).unwrap();
        assert!(ratio.lines().find(|l| l.starts_with("d=4:")).unwrap().ends_with("1.000"));
    }

    #[test]
    fn toplist_has_an_achiever_per_cell() {
        let t = small(&Facts::builtin());
        for dir in [Direction::Lower, Direction::Upper] {
            let list = toplist(&t, CodeKind::Cdc, dir);
            let cells = list[0].cells;
            let total: usize = list.iter().map(|e| e.count).sum();
            assert!(total >= cells);
        }
    }

    #[test]
    fn facts_parse_and_reject() {
        let f = Facts::builtin();
        assert!(f.rows.iter().any(|r| r.record.value == BigInt::from(131044) || r.iso == Some(IsoTypes::Exactly(BigInt::from(131044)))));
        assert!(matches!(Facts::parse("2\t6\t4\t3\tnope\t\texact\t77"), Err(Error::Parse { .. })));
        assert!(matches!(Facts::parse("2\t6\t4"), Err(Error::Parse { .. })));
    }
}
