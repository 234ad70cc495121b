//! Command implementations: the point-count cache, the global, local and
//! corpus commands, and their exit statuses (0 pass, 1 check failure,
//! 2 budget refusal, 3 input error).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::bipoly::BiPoly;
use crate::budget::Budget;
use crate::curve::{count_points, PlaneCurve};
use crate::document::CurveDocument;
use crate::error::{Error, Result};
use crate::expr;
use crate::field::{is_prime, shared_field};
use crate::zeta::{
    render_table, verify_local_theorem, verify_weil, BranchData, HilbertZetaReport, LocalTheoremReport, PointCounter,
    Status, ZetaConfig,
};

pub const CACHE_FILE: &str = ".hilbzeta-cache.json";

/// Point counts keyed by curve content hash and extension degree,
/// persisted as `{"<hash>": {"1": N1, "2": N2}}`.
pub struct CountCache {
    path: Option<PathBuf>,
    entries: Mutex<BTreeMap<String, BTreeMap<u32, u64>>>,
    budget: Budget,
    verify: bool,
    dirty: AtomicBool,
}

impl CountCache {
    pub fn in_memory(budget: Budget) -> Self {
        CountCache {
            path: None,
            entries: Mutex::new(BTreeMap::new()),
            budget,
            verify: false,
            dirty: AtomicBool::new(false),
        }
    }

    /// Open (or start) the cache file at `path`. With `verify`, every hit is
    /// recomputed and a disagreement is an error.
    pub fn open(path: &Path, budget: Budget, verify: bool) -> Result<Self> {
        let entries = if path.exists() {
            let raw: BTreeMap<String, BTreeMap<String, u64>> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            raw.into_iter()
                .map(|(h, m)| {
                    let m = m
                        .into_iter()
                        .map(|(k, v)| {
                            k.parse::<u32>()
                                .map(|k| (k, v))
                                .map_err(|_| Error::Parse(format!("cache key {k:?} is not a degree")))
                        })
                        .collect::<Result<BTreeMap<u32, u64>>>()?;
                    Ok((h, m))
                })
                .collect::<Result<_>>()?
        } else {
            BTreeMap::new()
        };
        Ok(CountCache {
            path: Some(path.to_path_buf()),
            entries: Mutex::new(entries),
            budget,
            verify,
            dirty: AtomicBool::new(false),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().values().map(|m| m.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Write the cache back if anything was added.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if !self.dirty.load(Ordering::SeqCst) {
            return Ok(());
        }
        let entries = self.entries.lock().unwrap();
        let raw: BTreeMap<&String, BTreeMap<String, u64>> = entries
            .iter()
            .map(|(h, m)| (h, m.iter().map(|(k, v)| (k.to_string(), *v)).collect()))
            .collect();
        std::fs::write(path, serde_json::to_string_pretty(&raw)? + "\n")?;
        self.dirty.store(false, Ordering::SeqCst);
        Ok(())
    }
}

impl PointCounter for CountCache {
    fn count(&self, curve: &PlaneCurve, m: u32) -> Result<u64> {
        let key = curve.content_hash();
        let hit = self.entries.lock().unwrap().get(&key).and_then(|e| e.get(&m)).copied();
        if let Some(n) = hit {
            if self.verify {
                let fresh = count_points(curve, m, &self.budget)?;
                if fresh != n {
                    return Err(Error::InconsistentCounts(format!(
                        "cached N_{m} = {n} for {} but recomputation gives {fresh}",
                        curve.name()
                    )));
                }
            }
            return Ok(n);
        }
        let n = count_points(curve, m, &self.budget)?;
        self.entries.lock().unwrap().entry(key).or_default().insert(m, n);
        self.dirty.store(true, Ordering::SeqCst);
        Ok(n)
    }
}

/// Exit status for a finished global report.
pub fn global_exit_code(report: &HilbertZetaReport) -> i32 {
    if report.passed() {
        0
    } else {
        1
    }
}

pub fn report_json<T: Serialize>(report: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

fn cache_beside(path: &Path) -> PathBuf {
    path.parent().unwrap_or(Path::new(".")).join(CACHE_FILE)
}

/// Load a curve document, run every global check with the cache stored
/// beside it, and return the report.
pub fn run_global(path: &Path, config: &ZetaConfig, verify_cache: bool) -> Result<HilbertZetaReport> {
    let doc = CurveDocument::load(path)?;
    let curve = PlaneCurve::from_document(&doc)?;
    let cache = CountCache::open(&cache_beside(path), config.budget.clone(), verify_cache)?;
    let result = verify_weil(&curve, &cache, config);
    cache.save()?;
    result
}

#[derive(Clone, Debug, Default)]
pub struct GlobalArgs {
    pub curve: PathBuf,
    pub nmax: Option<usize>,
    pub out: Option<PathBuf>,
    pub verify_cache: bool,
    pub timings: bool,
}

/// The `global` command: table on stdout, JSON report to `--out`.
pub fn cmd_global(args: &GlobalArgs) -> i32 {
    let config = ZetaConfig {
        min_precision: args.nmax.map_or(0, |k| k + 1),
        timings: args.timings,
        ..ZetaConfig::default()
    };
    let report = match run_global(&args.curve, &config, args.verify_cache) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", args.curve.display());
            return e.exit_code();
        }
    };
    print!("{}", render_table(&report));
    if let Some(out) = &args.out {
        if let Err(e) = report_json(&report).and_then(|j| Ok(std::fs::write(out, j)?)) {
            eprintln!("{}: {e}", out.display());
            return e.exit_code();
        }
    }
    global_exit_code(&report)
}

/// Split a prime power `q` into `(p, k)`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::Parse(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    if rest != 1 || !is_prime(p) {
        return Err(Error::Parse(format!("{q} is not a prime power")));
    }
    Ok((p as u32, k))
}

#[derive(Clone, Debug, Default)]
pub struct LocalArgs {
    pub f: String,
    pub q: u64,
    pub branches: Option<u32>,
    pub orbit_degrees: Option<Vec<u32>>,
    pub delta: Option<u32>,
    pub nmax: usize,
    pub out: Option<PathBuf>,
    pub serial: bool,
}

pub fn run_local(args: &LocalArgs) -> Result<LocalTheoremReport> {
    let (p, k) = prime_power(args.q)?;
    let field = shared_field(p, k)?;
    let f = if k == 1 {
        BiPoly::parse(&field, &args.f)?
    } else {
        parse_local_over(&field, &args.f)?
    };
    let branches = match (&args.orbit_degrees, args.branches) {
        (Some(o), None) => BranchData::OrbitDegrees(o.clone()),
        (None, Some(r)) => BranchData::Rational(r),
        _ => {
            return Err(Error::Parse(
                "give exactly one of --branches and --orbit-degrees".into(),
            ))
        }
    };
    let config = ZetaConfig {
        serial: args.serial,
        ..ZetaConfig::default()
    };
    verify_local_theorem(&f, &field, &branches, args.nmax, args.delta, config.enum_options())
}

fn parse_local_over(field: &crate::field::FiniteField, src: &str) -> Result<BiPoly> {
    let raw = expr::parse(src, &['x', 'y'])?;
    Ok(BiPoly::from_terms(
        field,
        raw.into_iter().map(|(e, c)| ((e[0], e[1]), field.from_int(c))),
    ))
}

pub fn render_local(r: &LocalTheoremReport) -> String {
    let mut out = format!(
        "f = {} over F_{}  (multiplicity {}, branch orbits {:?}, {})\n",
        r.equation, r.q, r.multiplicity, r.orbit_degrees, r.normalization
    );
    out.push_str(&format!("c_0..c_{}   {:?}\n", r.n_max, r.counts));
    out.push_str(&format!("N(t)       [{}]\n", r.numerator.join(", ")));
    match r.delta {
        Some(d) => out.push_str(&format!("delta      {d}\n")),
        None => out.push_str("delta      undetermined\n"),
    }
    out.push_str(&format!(
        "polynomial {}  even degree {}  functional equation {}\n",
        r.verdicts.polynomial, r.verdicts.even_degree, r.verdicts.functional_equation
    ));
    if let Some(m) = r.verdicts.delta_matches {
        out.push_str(&format!("declared delta matches {m}\n"));
    }
    out.push_str(&format!("status     {:?}\n", r.status));
    for n in &r.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

pub fn local_exit_code(r: &LocalTheoremReport) -> i32 {
    match r.status {
        Status::Pass => 0,
        Status::Fail | Status::Inconclusive => 1,
    }
}

/// The `local` command.
pub fn cmd_local(args: &LocalArgs) -> i32 {
    let report = match run_local(args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("local: {e}");
            return e.exit_code();
        }
    };
    print!("{}", render_local(&report));
    if let Some(out) = &args.out {
        if let Err(e) = report_json(&report).and_then(|j| Ok(std::fs::write(out, j)?)) {
            eprintln!("{}: {e}", out.display());
            return e.exit_code();
        }
    }
    local_exit_code(&report)
}

/// Standalone singularity document:
/// `{"name": .., "p": .., "k": .., "terms": [[a, b, "coeff"]], "branches": r, "nmax": n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalDocument {
    pub name: String,
    pub p: u32,
    pub k: u32,
    pub terms: Vec<(u32, u32, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_degrees: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<u32>,
    pub nmax: usize,
}

impl LocalDocument {
    pub fn run(&self, config: &ZetaConfig) -> Result<LocalTheoremReport> {
        let field = shared_field(self.p, self.k)?;
        let mut f = BiPoly::zero();
        for (a, b, c) in &self.terms {
            f.add_term(&field, (*a, *b), expr::parse_element(&field, c)?);
        }
        let branches = match (&self.orbit_degrees, self.branches) {
            (Some(o), None) => BranchData::OrbitDegrees(o.clone()),
            (None, Some(r)) => BranchData::Rational(r),
            _ => {
                return Err(Error::Parse(format!(
                    "{}: give exactly one of branches and orbit_degrees",
                    self.name
                )))
            }
        };
        verify_local_theorem(&f, &field, &branches, self.nmax, self.delta, config.enum_options())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusRow {
    pub file: String,
    pub name: String,
    pub q: Option<u64>,
    pub numerator: Option<String>,
    pub status: String,
    pub exit_code: i32,
    pub hypothesis: Option<bool>,
}

/// Documents in `dir`: `*.json`, not hidden, sorted by file name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension().is_some_and(|x| x == "json")
                && !p.file_name().unwrap().to_string_lossy().starts_with('.')
        })
        .collect();
    files.sort();
    Ok(files)
}

fn is_local_document(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|v| v.get("terms")?.as_array()?.first()?.as_array().map(|t| t.len() == 3))
        .unwrap_or(false)
}

pub fn run_corpus(dir: &Path, config: &ZetaConfig) -> Result<Vec<CorpusRow>> {
    let mut rows = Vec::new();
    for path in corpus_files(dir)? {
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(&path)?;
        let row = if is_local_document(&text) {
            let outcome = serde_json::from_str::<LocalDocument>(&text)
                .map_err(|e| Error::Parse(format!("local document: {e}")))
                .and_then(|d| Ok((d.name.clone(), d.run(config)?)));
            match outcome {
                Ok((name, r)) => CorpusRow {
                    file,
                    name,
                    q: Some(r.q),
                    numerator: Some(format!("[{}]", r.numerator.join(","))),
                    status: format!("{:?}", r.status).to_lowercase(),
                    exit_code: local_exit_code(&r),
                    hypothesis: None,
                },
                Err(e) => error_row(file, &e),
            }
        } else {
            match run_global(&path, config, false) {
                Ok(r) => CorpusRow {
                    file,
                    name: r.curve.clone(),
                    q: Some(r.q),
                    numerator: Some(r.numerator.to_string()),
                    status: if r.passed() { "pass".into() } else { "fail".into() },
                    exit_code: global_exit_code(&r),
                    hypothesis: Some(r.verdicts.hypothesis),
                },
                Err(e) => error_row(file, &e),
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

fn error_row(file: String, e: &Error) -> CorpusRow {
    CorpusRow {
        name: file.trim_end_matches(".json").to_string(),
        file,
        q: None,
        numerator: None,
        status: format!("error: {e}"),
        exit_code: e.exit_code(),
        hypothesis: None,
    }
}

pub fn render_corpus(rows: &[CorpusRow]) -> String {
    let mut out = format!(
        "{:<34} {:>5}  {:<6} {:<5} {}\n",
        "document", "q", "status", "hyp", "numerator"
    );
    for r in rows {
        let q = r.q.map_or("-".into(), |q| q.to_string());
        let hyp = match r.hypothesis {
            Some(true) => "ok",
            Some(false) => "out",
            None => "-",
        };
        let status = if r.status.starts_with("error") {
            "error"
        } else {
            &r.status
        };
        out.push_str(&format!(
            "{:<34} {:>5}  {:<6} {:<5} {}\n",
            r.file,
            q,
            status,
            hyp,
            r.numerator.as_deref().unwrap_or(&r.status)
        ));
    }
    out
}

/// The `corpus` command: one row per document, nonzero exit if any fails.
pub fn cmd_corpus(dir: &Path) -> i32 {
    let rows = match run_corpus(dir, &ZetaConfig::default()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", dir.display());
            return e.exit_code();
        }
    };
    print!("{}", render_corpus(&rows));
    if rows.iter().all(|r| r.exit_code == 0) {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(7).unwrap(), (7, 1));
        assert!(prime_power(12).is_err());
        assert!(prime_power(1).is_err());
    }

    #[test]
    fn cache_round_trip_and_verification() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(CACHE_FILE);
        let curve = PlaneCurve::parse("e", shared_field(3, 1).unwrap(), "y^2*z - x^3 + x*z^2").unwrap();
        let cache = CountCache::open(&path, Budget::default(), false).unwrap();
        assert_eq!(cache.count(&curve, 2).unwrap(), 16);
        cache.save().unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains(&curve.content_hash()) && text.contains("\"2\": 16"));

        // Corrupt the entry: plain reads trust it, verification catches it.
        std::fs::write(&path, text.replace("\"2\": 16", "\"2\": 17")).unwrap();
        let trusting = CountCache::open(&path, Budget::default(), false).unwrap();
        assert_eq!(trusting.count(&curve, 2).unwrap(), 17);
        let checking = CountCache::open(&path, Budget::default(), true).unwrap();
        assert!(matches!(checking.count(&curve, 2), Err(Error::InconsistentCounts(_))));
    }

    #[test]
    fn local_command_examples() {
        let args = LocalArgs {
            f: "y^2-x^3".into(),
            q: 3,
            branches: Some(1),
            nmax: 6,
            ..LocalArgs::default()
        };
        let r = run_local(&args).unwrap();
        assert_eq!(r.numerator, ["1", "0", "3"]);
        assert_eq!(local_exit_code(&r), 0);
        let r = run_local(&LocalArgs {
            f: "x*y".into(),
            q: 2,
            branches: Some(2),
            ..args.clone()
        })
        .unwrap();
        assert_eq!(r.numerator, ["1", "-1", "2"]);
        let r = run_local(&LocalArgs {
            f: "y^2-x^4".into(),
            branches: Some(2),
            nmax: 8,
            ..args.clone()
        })
        .unwrap();
        assert_eq!(r.delta, Some(2));
        assert_eq!(r.numerator.len(), 5);
        let both = LocalArgs {
            orbit_degrees: Some(vec![2]),
            ..args
        };
        assert!(run_local(&both).is_err());
    }

    #[test]
    fn empty_corpus() {
        let dir = tempfile::tempdir().unwrap();
        assert!(run_corpus(dir.path(), &ZetaConfig::default()).unwrap().is_empty());
        assert_eq!(cmd_corpus(dir.path()), 0);
    }
}
