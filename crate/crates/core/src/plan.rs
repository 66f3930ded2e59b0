//! Measurement plan: which probe-to-probe traceroutes to launch.

use std::collections::HashSet;
use std::net::Ipv4Addr;

use serde::{Deserialize, Serialize};

use crate::model::{AsNumber, CountryCode, EyeballSet, Traceroute};
use crate::selection::ProbeSelection;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanTask {
    pub src_asn: AsNumber,
    pub dst_asn: AsNumber,
    pub src_probe: u64,
    pub dst_probe: u64,
    pub dst_address: Ipv4Addr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    pub country: CountryCode,
    pub tasks: Vec<PlanTask>,
}

/// For every ordered pair of covered networks, one task per combination of
/// {closest, farthest} source probe and {closest, farthest} destination
/// probe. Roles held by the same probe count once, and a probe is never
/// asked to trace to itself.
pub fn build_plan(set: &EyeballSet, selection: &ProbeSelection) -> MeasurementPlan {
    let covered: Vec<_> = set
        .networks()
        .iter()
        .filter_map(|n| selection.get(n.asn).map(|s| (n.asn, s)))
        .collect();
    let mut tasks = Vec::new();
    for &(src_asn, src) in &covered {
        for &(dst_asn, dst) in &covered {
            for sp in src.distinct() {
                for dp in dst.distinct() {
                    if sp.id == dp.id {
                        continue;
                    }
                    tasks.push(PlanTask {
                        src_asn,
                        dst_asn,
                        src_probe: sp.id,
                        dst_probe: dp.id,
                        dst_address: dp.address_v4.expect("selected probes have an IPv4 address"),
                    });
                }
            }
        }
    }
    MeasurementPlan {
        country: set.country(),
        tasks,
    }
}

impl MeasurementPlan {
    pub fn matcher(&self) -> PlanMatcher {
        PlanMatcher(
            self.tasks
                .iter()
                .map(|t| (t.src_probe, t.dst_probe, t.src_asn, t.dst_asn))
                .collect(),
        )
    }
}

pub struct PlanMatcher(HashSet<(u64, u64, AsNumber, AsNumber)>);

impl PlanMatcher {
    /// Whether `tr` is the result of one of the plan's tasks.
    pub fn matches(&self, tr: &Traceroute) -> bool {
        self.0
            .contains(&(tr.src_probe, tr.dst_probe, tr.src_asn, tr.dst_asn))
    }
}
