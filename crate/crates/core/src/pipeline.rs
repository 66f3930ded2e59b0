//! End-to-end analysis of one country from in-memory inputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::Path;

use log::warn;
use thiserror::Error;

use crate::coverage::{
    compute_probe_coverage, select_dominant_networks, CoverageError, CoverageReport, Thresholds,
};
use crate::ingest::{
    write_capitals, write_country_users, write_geo_table, write_population_estimates,
    write_prefix_table, write_probe_inventory, write_traceroute_results, PopulationEstimateRow,
};
use crate::lpm::{GeoTable, PrefixTable};
use crate::matrix::{build_matrix, cell_from_evidence, compute_metrics, MatrixError};
use crate::model::{
    AsNumber, CountryCode, Evidence, EyeballMatrix, EyeballSet, GeoPoint, MeasurementRef,
    MetricsSummary, Probe, Traceroute,
};
use crate::path::classify_traceroute;
use crate::plan::{build_plan, MeasurementPlan};
use crate::selection::{select_probes, ProbeSelection};

/// Standard file names of the offline inputs.
pub mod files {
    pub const POPULATION: &str = "population.csv";
    pub const COUNTRY_USERS: &str = "country_users.csv";
    pub const PROBES: &str = "probes.json";
    pub const TRACEROUTES: &str = "traceroutes.ndjson";
    pub const PREFIX2AS: &str = "prefix2as.csv";
    pub const GEO: &str = "geo.csv";
    pub const CAPITALS: &str = "capitals.csv";
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("no population estimates for {0}")]
    UnknownCountry(CountryCode),
    #[error("no Internet user count for {0}")]
    MissingUsers(CountryCode),
    #[error("no capital coordinates for {0}")]
    MissingCapital(CountryCode),
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Every input dataset, parsed.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub population: Vec<PopulationEstimateRow>,
    pub country_users: BTreeMap<CountryCode, u64>,
    pub capitals: BTreeMap<CountryCode, GeoPoint>,
    pub probes: Vec<Probe>,
    pub traceroutes: Vec<Traceroute>,
    pub prefixes: PrefixTable,
    pub geo: GeoTable,
}

impl Dataset {
    /// Countries that have population estimates, in code order.
    pub fn countries(&self) -> Vec<CountryCode> {
        self.population
            .iter()
            .map(|r| r.country)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn eyeball_set(
        &self,
        country: CountryCode,
        thresholds: Thresholds,
    ) -> Result<EyeballSet, PipelineError> {
        let rows: Vec<PopulationEstimateRow> = self
            .population
            .iter()
            .filter(|r| r.country == country)
            .cloned()
            .collect();
        if rows.is_empty() {
            return Err(PipelineError::UnknownCountry(country));
        }
        let users = *self
            .country_users
            .get(&country)
            .ok_or(PipelineError::MissingUsers(country))?;
        let capital = *self
            .capitals
            .get(&country)
            .ok_or(PipelineError::MissingCapital(country))?;
        Ok(select_dominant_networks(&rows, users, capital, thresholds)?)
    }

    pub fn coverage(
        &self,
        country: CountryCode,
        thresholds: Thresholds,
    ) -> Result<CoverageReport, PipelineError> {
        let set = self.eyeball_set(country, thresholds)?;
        Ok(compute_probe_coverage(&set, &self.probes))
    }

    pub fn plan(
        &self,
        country: CountryCode,
        thresholds: Thresholds,
    ) -> Result<(EyeballSet, ProbeSelection, MeasurementPlan), PipelineError> {
        let set = self.eyeball_set(country, thresholds)?;
        let selection = select_probes(&set, &self.probes);
        let plan = build_plan(&set, &selection);
        Ok((set, selection, plan))
    }

    pub fn analyze(
        &self,
        country: CountryCode,
        thresholds: Thresholds,
    ) -> Result<Analysis, PipelineError> {
        let set = self.eyeball_set(country, thresholds)?;
        analyze_country(
            &set,
            &self.probes,
            &self.traceroutes,
            &self.prefixes,
            &self.geo,
        )
    }

    /// Writes every input under its standard file name.
    pub fn write_to_dir(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(
            dir.join(files::POPULATION),
            write_population_estimates(&self.population),
        )?;
        fs::write(
            dir.join(files::COUNTRY_USERS),
            write_country_users(&self.country_users),
        )?;
        fs::write(dir.join(files::CAPITALS), write_capitals(&self.capitals))?;
        fs::write(dir.join(files::PROBES), write_probe_inventory(&self.probes))?;
        fs::write(
            dir.join(files::TRACEROUTES),
            write_traceroute_results(&self.traceroutes),
        )?;
        fs::write(
            dir.join(files::PREFIX2AS),
            write_prefix_table(&self.prefixes),
        )?;
        fs::write(dir.join(files::GEO), write_geo_table(&self.geo))?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub coverage: CoverageReport,
    pub selection: ProbeSelection,
    pub plan: MeasurementPlan,
    pub matrix: EyeballMatrix,
    pub metrics: MetricsSummary,
    /// Traceroutes that belong to a plan task and were classified.
    pub matched: usize,
    /// Traceroutes skipped, one message each.
    pub warnings: Vec<String>,
}

/// Classifies every planned traceroute and assembles the matrix.
///
/// Traceroutes that do not correspond to a plan task (unknown probes, wrong
/// AS pair, other countries) are skipped with a warning. Covered pairs that
/// end up without evidence are `Undetermined`.
pub fn analyze_country(
    set: &EyeballSet,
    probes: &[Probe],
    traceroutes: &[Traceroute],
    prefixes: &PrefixTable,
    geo: &GeoTable,
) -> Result<Analysis, PipelineError> {
    let country = set.country();
    let coverage = compute_probe_coverage(set, probes);
    let selection = select_probes(set, probes);
    let plan = build_plan(set, &selection);
    let matcher = plan.matcher();

    let mut evidence: BTreeMap<(AsNumber, AsNumber), Vec<Evidence>> = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut matched = 0;
    for tr in traceroutes {
        if !matcher.matches(tr) {
            warnings.push(format!(
                "traceroute probe {} -> probe {} (AS{} -> AS{}) is not part of the {country} plan",
                tr.src_probe, tr.dst_probe, tr.src_asn, tr.dst_asn
            ));
            continue;
        }
        match classify_traceroute(tr, prefixes, geo, country) {
            Ok(classification) => {
                matched += 1;
                evidence
                    .entry((tr.src_asn, tr.dst_asn))
                    .or_default()
                    .push(Evidence {
                        measurement: MeasurementRef {
                            src_probe: tr.src_probe,
                            dst_probe: tr.dst_probe,
                            timestamp: tr.timestamp,
                        },
                        classification,
                    });
            }
            Err(e) => warnings.push(e.to_string()),
        }
    }
    for w in &warnings {
        warn!("{w}");
    }

    let verdicts = evidence
        .into_iter()
        .map(|((src, dst), ev)| ((src, dst), cell_from_evidence(src, dst, ev)))
        .collect();
    let generated_at = traceroutes.iter().map(|t| t.timestamp).max().unwrap_or(0);
    let matrix = build_matrix(set, &selection, &verdicts)?.with_generated_at(generated_at);
    let metrics = compute_metrics(&matrix);
    Ok(Analysis {
        coverage,
        selection,
        plan,
        matrix,
        metrics,
        matched,
        warnings,
    })
}
