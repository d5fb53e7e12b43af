//! Command-line front end for `dsfft-core`: signal files, JSON reports,
//! benchmarks, the invariant suite and the CRT demo.

pub mod bench;
pub mod demo;
pub mod io;
pub mod parse;
pub mod recover;
pub mod verify;

use dsfft_core::PrimePlan;
use serde::Serialize;

/// The plan with its derived sizes spelled out.
#[derive(Debug, Serialize)]
pub struct PlanSummary<'a> {
    pub m: usize,
    #[serde(rename = "K")]
    pub q_count: usize,
    pub samples_per_n: f64,
    #[serde(flatten)]
    pub plan: &'a PrimePlan,
}

impl<'a> PlanSummary<'a> {
    pub fn new(plan: &'a PrimePlan) -> Self {
        Self {
            m: plan.m(),
            q_count: plan.q_count(),
            samples_per_n: plan.total_measurements() as f64 / plan.n() as f64,
            plan,
        }
    }
}
