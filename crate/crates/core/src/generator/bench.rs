//! Benchmark harness over generated instances.

use std::fmt::Write as _;
use std::time::Instant;

use super::{generate, GeneratorParams};
use crate::composer::{find_composition, validate_chain, ComposeOptions};
use crate::error::Result;

pub const CSV_HEADER: &str = "ontology_size,num_services,time_s,comp_size,dep_list_size";

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceResult {
    pub seed: u64,
    pub solvable: bool,
    /// Whether the found chain passed the independent validator.
    pub validated: bool,
    pub time_s: f64,
    pub comp_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowReport {
    pub params: GeneratorParams,
    /// Concepts plus properties.
    pub ontology_size: usize,
    pub num_services: usize,
    pub median_time_s: f64,
    pub median_comp_size: usize,
    pub dep_list_size: usize,
    pub instances: Vec<InstanceResult>,
}

/// Runs every row `repetitions` times with seeds `row.seed`, `row.seed + 1`,
/// and so on. Rows without instances are left out of the report.
pub fn bench(
    rows: &[GeneratorParams],
    repetitions: usize,
    options: ComposeOptions,
) -> Result<Vec<RowReport>> {
    if repetitions == 0 {
        return Ok(Vec::new());
    }
    rows.iter()
        .map(|row| {
            let instances = (0..repetitions as u64)
                .map(|r| run_instance(row, row.seed.wrapping_add(r), options))
                .collect::<Result<Vec<_>>>()?;
            let mut times: Vec<f64> = instances.iter().map(|i| i.time_s).collect();
            times.sort_by(f64::total_cmp);
            let mut sizes: Vec<usize> = instances.iter().map(|i| i.comp_size).collect();
            sizes.sort_unstable();
            Ok(RowReport {
                params: *row,
                ontology_size: row.num_concepts + row.num_properties,
                num_services: row.num_services,
                median_time_s: times[(times.len() - 1) / 2],
                median_comp_size: sizes[(sizes.len() - 1) / 2],
                dep_list_size: row.dependency_list_size,
                instances,
            })
        })
        .collect()
}

fn run_instance(
    row: &GeneratorParams,
    seed: u64,
    options: ComposeOptions,
) -> Result<InstanceResult> {
    let inst = generate(&GeneratorParams { seed, ..*row })?;
    let start = Instant::now();
    let found = find_composition(&inst.ontology, &inst.repository, &inst.query, options)?;
    let time_s = start.elapsed().as_secs_f64();
    let (solvable, validated, comp_size) = match &found {
        Some(chain) => (
            true,
            validate_chain(&inst.ontology, &inst.repository, &inst.query, chain)?,
            chain.len(),
        ),
        None => (false, false, 0),
    };
    Ok(InstanceResult {
        seed,
        solvable,
        validated,
        time_s,
        comp_size,
    })
}

pub fn to_csv(report: &[RowReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in report {
        let _ = writeln!(
            out,
            "{},{},{:.6},{},{}",
            row.ontology_size,
            row.num_services,
            row.median_time_s,
            row.median_comp_size,
            row.dep_list_size
        );
    }
    out
}
