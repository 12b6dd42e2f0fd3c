//! Per-degree evidence sweep: for each degree in a range, search for an
//! alternating image with handles, compose, and classify the result. A
//! `NotFound` row always means "no witness within budget" and never claims a
//! counterexample; an `Anomalous` row means a classification that matches
//! neither expected structure and is a hard failure for callers.

use std::thread;

use crate::analyze::{classify_clone_structure, verify_wreath_structure, CloneStructureCase};
use crate::compose::{compose_alpha_beta, compose_clone_p};
use crate::group::GeneratedGroup;
use crate::perm::Permutation;
use crate::triangle::{search_alternating, Handle, TriangleError, TrianglePresentation};

/// Which family of quotients the sweep gathers evidence for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepTarget {
    /// Clone compositions: quotients C_p^{deg−1} ⋊ A_deg.
    SemidirectModule,
    /// Alpha-beta compositions: quotients A_m ≀ A_deg.
    WreathProduct { m: usize },
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub target: SweepTarget,
    pub presentation: TrianglePresentation,
    pub deg_lo: usize,
    pub deg_hi: usize,
    pub budget: u64,
    pub seed: u64,
    pub k: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepOutcome {
    Found { detail: String },
    NotFound { reason: String },
    Anomalous { detail: String },
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub degree: usize,
    pub outcome: SweepOutcome,
}

impl SweepRow {
    pub fn label(&self) -> &'static str {
        match self.outcome {
            SweepOutcome::Found { .. } => "Found",
            SweepOutcome::NotFound { .. } => "NotFound",
            SweepOutcome::Anomalous { .. } => "Anomalous",
        }
    }

    pub fn detail(&self) -> &str {
        match &self.outcome {
            SweepOutcome::Found { detail } | SweepOutcome::Anomalous { detail } => detail,
            SweepOutcome::NotFound { reason } => reason,
        }
    }
}

/// Runs one cell per degree on its own worker; rows come back ordered by
/// degree regardless of completion order. The per-degree seed is
/// `seed + degree` so cells are independent yet reproducible.
pub fn run_sweep(config: &SweepConfig) -> Vec<SweepRow> {
    let degrees: Vec<usize> = (config.deg_lo..=config.deg_hi).collect();
    let mut rows: Vec<SweepRow> = thread::scope(|scope| {
        let handles: Vec<_> = degrees
            .iter()
            .map(|&degree| {
                let config = config.clone();
                scope.spawn(move || SweepRow {
                    degree,
                    outcome: sweep_cell(&config, degree),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker")).collect()
    });
    rows.sort_by_key(|row| row.degree);
    rows
}

fn sweep_cell(config: &SweepConfig, degree: usize) -> SweepOutcome {
    let seed = config.seed.wrapping_add(degree as u64);
    match config.target {
        SweepTarget::SemidirectModule => semidirect_cell(config, degree, seed),
        SweepTarget::WreathProduct { m } => wreath_cell(config, degree, seed, m),
    }
}

fn semidirect_cell(config: &SweepConfig, degree: usize, seed: u64) -> SweepOutcome {
    let rep = match search_alternating(config.presentation, degree, 1, config.k, seed, config.budget)
    {
        Ok(rep) => rep,
        Err(e) => return not_found(e),
    };
    let handles = rep.find_handles(config.k);
    let handle = handles[0];
    let comp = match compose_clone_p(&rep, &handle) {
        Ok(comp) => comp,
        Err(e) => {
            return SweepOutcome::Anomalous {
                detail: format!("clone composition failed on a searched witness: {e}"),
            }
        }
    };
    match classify_clone_structure(&comp) {
        Ok(verdict) => match verdict.case {
            CloneStructureCase::SemidirectProduct => SweepOutcome::Found {
                detail: format!(
                    "semidirect_product: |H| = {}, kernel {}",
                    verdict.details.group_order, verdict.details.kernel_order
                ),
            },
            CloneStructureCase::DirectProduct => SweepOutcome::Found {
                detail: format!(
                    "direct_product: |H| = {} (p | qr and p | deg; flagged for study)",
                    verdict.details.group_order
                ),
            },
            CloneStructureCase::Inapplicable => SweepOutcome::NotFound {
                reason: "witness found but hypotheses inapplicable".into(),
            },
            CloneStructureCase::Anomalous => SweepOutcome::Anomalous {
                detail: verdict.details.note.unwrap_or_else(|| "anomaly".into()),
            },
        },
        Err(e) => SweepOutcome::Anomalous {
            detail: format!("analysis failed: {e}"),
        },
    }
}

fn wreath_cell(config: &SweepConfig, degree: usize, seed: u64, m: usize) -> SweepOutcome {
    let Some((alpha, beta)) = alternating_p_cycle_pair(config.presentation.p, m) else {
        return SweepOutcome::NotFound {
            reason: format!(
                "no pair of {}-cycles generating the alternating group of degree {m}",
                config.presentation.p
            ),
        };
    };
    let rep = match search_alternating(config.presentation, degree, 2, config.k, seed, config.budget)
    {
        Ok(rep) => rep,
        Err(e) => return not_found(e),
    };
    let handles = rep.find_handles(config.k);
    let Some((h1, h2)) = first_disjoint_pair(&handles) else {
        return SweepOutcome::Anomalous {
            detail: "search returned a witness without two disjoint handles".into(),
        };
    };
    let comp = match compose_alpha_beta(&rep, &h1, &h2, &alpha, &beta, m) {
        Ok(comp) => comp,
        Err(e) => {
            return SweepOutcome::Anomalous {
                detail: format!("alpha-beta composition failed on a searched witness: {e}"),
            }
        }
    };
    match verify_wreath_structure(&comp, m) {
        Ok(verdict) if verdict.verified => SweepOutcome::Found {
            detail: format!("wreath product verified: |H| = {}", verdict.found_order),
        },
        Ok(verdict) => SweepOutcome::Anomalous {
            detail: format!(
                "hypotheses hold but |H| = {} differs from {} (q_block alternating: {})",
                verdict.found_order, verdict.expected_order, verdict.q_block_is_am
            ),
        },
        Err(crate::analyze::AnalyzeError::HypothesisFailed(reason)) => {
            SweepOutcome::NotFound { reason }
        }
        Err(e) => SweepOutcome::Anomalous {
            detail: format!("analysis failed: {e}"),
        },
    }
}

fn not_found(e: TriangleError) -> SweepOutcome {
    SweepOutcome::NotFound {
        reason: match e {
            TriangleError::NotFound { attempts } => {
                format!("no witness within budget ({attempts} attempts)")
            }
            other => format!("search unavailable: {other}"),
        },
    }
}

fn first_disjoint_pair(handles: &[Handle]) -> Option<(Handle, Handle)> {
    for (i, h) in handles.iter().enumerate() {
        for g in &handles[i + 1..] {
            if h.disjoint_from(g) {
                return Some((*h, *g));
            }
        }
    }
    None
}

/// A deterministic pair of p-cycles in S_m generating the full alternating
/// group, when one exists. p must be odd for the cycles to be even.
pub fn alternating_p_cycle_pair(p: u64, m: usize) -> Option<(Permutation, Permutation)> {
    let p = p as usize;
    if p % 2 == 0 || p > m || m < 3 {
        return None;
    }
    let alpha_cycle: Vec<usize> = (1..=p).collect();
    let alpha = Permutation::from_cycles(&[alpha_cycle], m).expect("in range");
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    // overlapping windows across 1..=m, plus a twisted copy for m == p
    for shift in 1..=m.saturating_sub(p) {
        candidates.push((1 + shift..=p + shift).collect());
    }
    if p >= 3 {
        let mut twisted: Vec<usize> = (1..=p - 2).collect();
        twisted.push(p);
        twisted.push(p - 1);
        candidates.push(twisted);
    }
    for candidate in candidates {
        let beta = Permutation::from_cycles(&[candidate], m).expect("in range");
        let group = GeneratedGroup::new(m, vec![alpha.clone(), beta.clone()]).expect("degree m");
        if group.is_alternating() {
            return Some((alpha, beta));
        }
    }
    None
}
