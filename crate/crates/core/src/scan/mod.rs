//! Catalog scanning: `sd`, `sd*` and structural flags for every group of a
//! catalog, with a verdict on whether a group above the `23/25` threshold is
//! Iwasawa or Schmidt.

pub mod cache;
pub mod catalog;
pub mod ingest;
pub mod report;

use std::fmt;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degrees::{sd_of_lattice, SdStarSolver};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::lattice::{enumerate_subgroups, is_modular_lattice, is_nilpotent, is_schmidt, is_solvable};
use crate::rational::ExactRational;

pub use cache::{fingerprint, Cache};
pub use catalog::{build_catalog, CatalogConfig, Family};
pub use report::{emit_report, ReportFormat};

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "LATDEG_CACHE_DIR";

pub fn threshold() -> ExactRational {
    ExactRational::new(23, 25)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "iwasawa")]
    Iwasawa,
    #[serde(rename = "schmidt")]
    Schmidt,
    #[serde(rename = "below_threshold")]
    BelowThreshold,
    #[serde(rename = "COUNTEREXAMPLE")]
    Counterexample,
}

impl Verdict {
    /// Iwasawa first, then anything at or below `23/25`, then Schmidt.
    pub fn classify(sd_star: &ExactRational, iwasawa: bool, schmidt: bool) -> Verdict {
        if iwasawa {
            Verdict::Iwasawa
        } else if *sd_star <= threshold() {
            Verdict::BelowThreshold
        } else if schmidt {
            Verdict::Schmidt
        } else {
            Verdict::Counterexample
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Iwasawa => "iwasawa",
            Verdict::Schmidt => "schmidt",
            Verdict::BelowThreshold => "below_threshold",
            Verdict::Counterexample => "COUNTEREXAMPLE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub label: String,
    pub order: usize,
    pub sd: ExactRational,
    pub sd_star: ExactRational,
    /// `H<|H|>/N<|N|>` for a section attaining `sd*`.
    pub argmin_section: String,
    pub iwasawa: bool,
    pub schmidt: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    pub verdict: Verdict,
    /// `sd* = 23/25` exactly.
    pub boundary_hit: bool,
}

pub fn scan_group(g: &Group) -> Result<ScanRecord> {
    let lat = enumerate_subgroups(g)?;
    let sd = sd_of_lattice(&lat);
    let star = SdStarSolver::default().solve(g)?;
    let nilpotent = is_nilpotent(g);
    let iwasawa = nilpotent && is_modular_lattice(&lat).is_modular();
    let schmidt = is_schmidt(&lat);
    let verdict = Verdict::classify(&star.value, iwasawa, schmidt);
    Ok(ScanRecord {
        label: g.label().to_string(),
        order: g.order(),
        boundary_hit: star.value == threshold(),
        argmin_section: format!("H{}/N{}", star.host.order(), star.kernel.order()),
        sd,
        sd_star: star.value,
        iwasawa,
        schmidt,
        nilpotent,
        solvable: is_solvable(g),
        verdict,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub groups: usize,
    pub counterexamples: Vec<String>,
    /// Nilpotent groups with `sd* > 23/25` that are not Iwasawa.
    pub nilpotent_above_threshold_not_iwasawa: Vec<String>,
    /// Groups with `sd* > 23/25` that are not solvable.
    pub unsolvable_above_threshold: Vec<String>,
    pub boundary_hits: Vec<String>,
    pub cache_hits: usize,
}

impl ScanSummary {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
            && self.nilpotent_above_threshold_not_iwasawa.is_empty()
            && self.unsolvable_above_threshold.is_empty()
    }

    fn of(records: &[ScanRecord], cache_hits: usize) -> ScanSummary {
        let above = |r: &&ScanRecord| r.sd_star > threshold();
        let labels = |it: &mut dyn Iterator<Item = &ScanRecord>| it.map(|r| r.label.clone()).collect();
        ScanSummary {
            groups: records.len(),
            counterexamples: labels(&mut records.iter().filter(|r| r.verdict == Verdict::Counterexample)),
            nilpotent_above_threshold_not_iwasawa: labels(
                &mut records.iter().filter(above).filter(|r| r.nilpotent && !r.iwasawa),
            ),
            unsolvable_above_threshold: labels(&mut records.iter().filter(above).filter(|r| !r.solvable)),
            boundary_hits: labels(&mut records.iter().filter(|r| r.boundary_hit)),
            cache_hits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quarantined {
    pub label: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanOutcome {
    /// In catalog order.
    pub records: Vec<ScanRecord>,
    pub quarantine: Vec<Quarantined>,
    pub summary: ScanSummary,
}

fn cache_for(config: &CatalogConfig) -> Result<Option<Cache>> {
    let dir = config.cache_dir.clone().or_else(|| std::env::var_os(CACHE_DIR_ENV).map(Into::into));
    dir.map(|d| Cache::open(&d)).transpose()
}

/// Scans a prepared list of groups on `config.threads` workers. With
/// `config.resume`, groups already in the cache are not recomputed.
pub fn scan_groups(groups: &[Group], config: &CatalogConfig) -> Result<ScanOutcome> {
    config.validate()?;
    let cache = cache_for(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::BadArgs(format!("thread pool: {e}")))?;
    let results: Vec<(Result<ScanRecord>, bool)> = pool.install(|| {
        groups
            .par_iter()
            .map(|g| {
                let Some(cache) = &cache else { return (scan_group(g), false) };
                let fp = fingerprint(g);
                if config.resume {
                    match cache.get(&fp) {
                        Ok(Some(mut rec)) => {
                            rec.label = g.label().to_string();
                            return (Ok(rec), true);
                        }
                        Ok(None) => {}
                        Err(e) => warn!("{e}; recomputing {}", g.label()),
                    }
                }
                let rec = scan_group(g);
                if let Ok(r) = &rec {
                    if let Err(e) = cache.put(&fp, r) {
                        warn!("could not cache {}: {e}", g.label());
                    }
                }
                (rec, false)
            })
            .collect()
    });
    let mut records = Vec::with_capacity(groups.len());
    let mut quarantine = Vec::new();
    let mut hits = 0;
    for (g, (res, hit)) in groups.iter().zip(results) {
        hits += usize::from(hit);
        match res {
            Ok(r) => records.push(r),
            Err(e) => {
                warn!("quarantined {}: {e}", g.label());
                quarantine.push(Quarantined { label: g.label().to_string(), error: e.to_string() });
            }
        }
    }
    let summary = ScanSummary::of(&records, hits);
    info!("scanned {} groups ({} cached, {} quarantined)", records.len(), hits, quarantine.len());
    Ok(ScanOutcome { records, quarantine, summary })
}

pub fn scan(config: &CatalogConfig) -> Result<ScanOutcome> {
    scan_groups(&build_catalog(config)?, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard_group;

    fn rec(spec: &str) -> ScanRecord {
        scan_group(&standard_group(spec.parse().unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn d8_is_a_boundary_hit() {
        let r = rec("dihedral:8");
        assert_eq!((r.sd.clone(), r.sd_star.clone()), (threshold(), threshold()));
        assert!(r.boundary_hit && r.nilpotent && !r.iwasawa);
        assert_eq!(r.verdict, Verdict::BelowThreshold);
    }

    #[test]
    fn s3_and_q8_rows() {
        let s3 = rec("symmetric:3");
        assert_eq!(s3.sd_star, ExactRational::new(5, 6));
        assert!(s3.schmidt && !s3.boundary_hit);
        let q8 = rec("quaternion8");
        assert!(q8.sd_star.is_one() && q8.iwasawa);
        assert_eq!(q8.verdict, Verdict::Iwasawa);
    }

    #[test]
    fn verdict_formula() {
        let above = ExactRational::new(24, 25);
        assert_eq!(Verdict::classify(&above, false, false), Verdict::Counterexample);
        assert_eq!(Verdict::classify(&above, false, true), Verdict::Schmidt);
        assert_eq!(Verdict::classify(&threshold(), false, false), Verdict::BelowThreshold);
        assert_eq!(Verdict::classify(&ExactRational::one(), true, false), Verdict::Iwasawa);
        assert_eq!(serde_json::to_string(&Verdict::Counterexample).unwrap(), "\"COUNTEREXAMPLE\"");
    }

    #[test]
    fn quarantine_does_not_abort() {
        let good = standard_group("dihedral:8".parse().unwrap()).unwrap();
        let out = scan_groups(&[good.clone(), good], &CatalogConfig::default()).unwrap();
        assert_eq!(out.records.len(), 2);
        assert!(out.quarantine.is_empty());
        assert_eq!(out.summary.boundary_hits, vec!["D8", "D8"]);
    }

    #[test]
    fn resume_matches_cold_run() {
        let dir = tempfile::tempdir().unwrap();
        let config = CatalogConfig { max_order: 16, cache_dir: Some(dir.path().to_path_buf()), ..Default::default() };
        let cold = scan(&config).unwrap();
        assert_eq!(cold.summary.cache_hits, 0);
        let warm = scan(&CatalogConfig { resume: true, threads: 3, ..config }).unwrap();
        assert_eq!(warm.summary.cache_hits, warm.records.len());
        assert_eq!(cold.records, warm.records);
    }
}
