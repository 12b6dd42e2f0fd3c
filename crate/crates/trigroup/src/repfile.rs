//! The representation file format and run manifests.
//!
//! A representation file is UTF-8 JSON with top-level fields `p`, `q`, `r`,
//! `degree`, `x`, `y` and optional `handles` and `provenance`. Generator
//! images are cycle lists: arrays of arrays of 1-based integers, the empty
//! array being the identity. Example:
//!
//! ```json
//! {"p":2,"q":2,"r":2,"degree":2,"x":[],"y":[[1,2]]}
//! ```
//!
//! Loading validates everything: the relations must hold, every listed
//! handle is re-checked, and a composition provenance is replayed from its
//! recorded inputs and must reproduce the file's generator images exactly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compose::{
    compose_alpha_beta, compose_centralizer, compose_clone_p, compose_general, Composition,
    HandleAssignment, Provenance,
};
use crate::perm::{Cycle, Permutation};
use crate::triangle::{Handle, Representation, TrianglePresentation};

#[derive(Debug, Error)]
pub enum RepFileError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("validation failed: {0}")]
    Validation(String),
}

fn invalid(msg: impl Into<String>) -> RepFileError {
    RepFileError::Validation(msg.into())
}

/// Wire form of a representation file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RepFile {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub degree: usize,
    pub x: Vec<Cycle>,
    pub y: Vec<Cycle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub handles: Option<Vec<HandleJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceJson>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HandleJson {
    pub a: usize,
    pub b: usize,
    pub k: u64,
}

impl From<Handle> for HandleJson {
    fn from(h: Handle) -> Self {
        HandleJson { a: h.a, b: h.b, k: h.k }
    }
}

impl From<HandleJson> for Handle {
    fn from(h: HandleJson) -> Self {
        Handle::new(h.a, h.b, h.k)
    }
}

/// A representation nested inside provenance: same shape as the top level
/// minus handles and provenance.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InnerRepJson {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub degree: usize,
    pub x: Vec<Cycle>,
    pub y: Vec<Cycle>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AssignmentEntryJson {
    pub diagram: usize,
    pub handle: HandleJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum ProvenanceJson {
    SearchBacktrack,
    SearchAlternating {
        seed: u64,
    },
    General {
        inputs: Vec<InnerRepJson>,
        assignment: Vec<AssignmentEntryJson>,
    },
    Clone {
        base: InnerRepJson,
        handle: HandleJson,
    },
    Centralizer {
        base: InnerRepJson,
        handle: HandleJson,
        commuting: Vec<Vec<Cycle>>,
        block_family: Vec<Vec<usize>>,
        blocks_for_phi: bool,
        blocks_for_pi: bool,
    },
    Alphabeta {
        base: InnerRepJson,
        h1: HandleJson,
        h2: HandleJson,
        alpha: Vec<Cycle>,
        beta: Vec<Cycle>,
        m: usize,
    },
}

/// A loaded and fully validated representation file.
#[derive(Clone, Debug)]
pub struct LoadedRep {
    pub rep: Representation,
    pub handles: Vec<Handle>,
    pub provenance: Option<Provenance>,
    /// Present when the provenance is a composition: the construction is
    /// replayed from its inputs and must match the file.
    pub composition: Option<Composition>,
}

fn rep_to_inner(rep: &Representation) -> InnerRepJson {
    let pres = rep.presentation();
    InnerRepJson {
        p: pres.p,
        q: pres.q,
        r: pres.r,
        degree: rep.degree(),
        x: rep.x().cycles(),
        y: rep.y().cycles(),
    }
}

fn inner_to_rep(inner: &InnerRepJson) -> Result<Representation, RepFileError> {
    let pres = TrianglePresentation::new(inner.p, inner.q, inner.r)
        .map_err(|e| invalid(e.to_string()))?;
    let x = Permutation::from_cycles(&inner.x, inner.degree)
        .map_err(|e| invalid(format!("x: {e}")))?;
    let y = Permutation::from_cycles(&inner.y, inner.degree)
        .map_err(|e| invalid(format!("y: {e}")))?;
    let rep = Representation::new(pres, x, y).map_err(|e| invalid(e.to_string()))?;
    let report = rep.check_relations();
    if !report.ok {
        return Err(invalid(format!(
            "relations fail: orders ({}, {}, {}) against ({}, {}, {})",
            report.order_x, report.order_y, report.order_xy, inner.p, inner.q, inner.r
        )));
    }
    Ok(rep)
}

fn provenance_to_json(p: &Provenance) -> ProvenanceJson {
    match p {
        Provenance::SearchBacktrack => ProvenanceJson::SearchBacktrack,
        Provenance::SearchAlternating { seed } => ProvenanceJson::SearchAlternating { seed: *seed },
        Provenance::General { inputs, assignment } => ProvenanceJson::General {
            inputs: inputs.iter().map(rep_to_inner).collect(),
            assignment: assignment
                .entries
                .iter()
                .map(|(diagram, handle)| AssignmentEntryJson {
                    diagram: *diagram,
                    handle: (*handle).into(),
                })
                .collect(),
        },
        Provenance::Clone { base, handle } => ProvenanceJson::Clone {
            base: rep_to_inner(base),
            handle: (*handle).into(),
        },
        Provenance::Centralizer {
            base,
            handle,
            commuting,
            block_family,
            blocks_for_phi,
            blocks_for_pi,
        } => ProvenanceJson::Centralizer {
            base: rep_to_inner(base),
            handle: (*handle).into(),
            commuting: commuting.iter().map(|h| h.cycles()).collect(),
            block_family: block_family.clone(),
            blocks_for_phi: *blocks_for_phi,
            blocks_for_pi: *blocks_for_pi,
        },
        Provenance::AlphaBeta {
            base,
            h1,
            h2,
            alpha,
            beta,
            m,
        } => ProvenanceJson::Alphabeta {
            base: rep_to_inner(base),
            h1: (*h1).into(),
            h2: (*h2).into(),
            alpha: alpha.cycles(),
            beta: beta.cycles(),
            m: *m,
        },
    }
}

/// Replays a composition provenance from its recorded inputs.
fn replay(json: &ProvenanceJson) -> Result<Option<Composition>, RepFileError> {
    let comp = match json {
        ProvenanceJson::SearchBacktrack | ProvenanceJson::SearchAlternating { .. } => return Ok(None),
        ProvenanceJson::General { inputs, assignment } => {
            let reps: Vec<Representation> = inputs
                .iter()
                .map(inner_to_rep)
                .collect::<Result<_, _>>()?;
            let assignment = HandleAssignment::new(
                assignment
                    .iter()
                    .map(|e| (e.diagram, e.handle.into()))
                    .collect(),
            );
            compose_general(&reps, &assignment).map_err(|e| invalid(e.to_string()))?
        }
        ProvenanceJson::Clone { base, handle } => {
            let rep = inner_to_rep(base)?;
            compose_clone_p(&rep, &(*handle).into()).map_err(|e| invalid(e.to_string()))?
        }
        ProvenanceJson::Centralizer {
            base,
            handle,
            commuting,
            ..
        } => {
            let rep = inner_to_rep(base)?;
            let hs: Vec<Permutation> = commuting
                .iter()
                .map(|cycles| {
                    Permutation::from_cycles(cycles, rep.degree())
                        .map_err(|e| invalid(format!("commuting permutation: {e}")))
                })
                .collect::<Result<_, _>>()?;
            compose_centralizer(&rep, &(*handle).into(), &hs)
                .map_err(|e| invalid(e.to_string()))?
        }
        ProvenanceJson::Alphabeta {
            base,
            h1,
            h2,
            alpha,
            beta,
            m,
        } => {
            let rep = inner_to_rep(base)?;
            let alpha = Permutation::from_cycles(alpha, *m)
                .map_err(|e| invalid(format!("alpha: {e}")))?;
            let beta =
                Permutation::from_cycles(beta, *m).map_err(|e| invalid(format!("beta: {e}")))?;
            compose_alpha_beta(&rep, &(*h1).into(), &(*h2).into(), &alpha, &beta, *m)
                .map_err(|e| invalid(e.to_string()))?
        }
    };
    Ok(Some(comp))
}

fn provenance_from_json(json: &ProvenanceJson) -> Result<Option<Provenance>, RepFileError> {
    match json {
        ProvenanceJson::SearchBacktrack => Ok(Some(Provenance::SearchBacktrack)),
        ProvenanceJson::SearchAlternating { seed } => {
            Ok(Some(Provenance::SearchAlternating { seed: *seed }))
        }
        _ => Ok(None), // carried by the replayed composition instead
    }
}

/// Builds the wire form of a plain representation.
pub fn rep_to_file(
    rep: &Representation,
    handles: &[Handle],
    provenance: Option<&Provenance>,
) -> RepFile {
    let pres = rep.presentation();
    RepFile {
        p: pres.p,
        q: pres.q,
        r: pres.r,
        degree: rep.degree(),
        x: rep.x().cycles(),
        y: rep.y().cycles(),
        handles: if handles.is_empty() {
            None
        } else {
            Some(handles.iter().map(|&h| h.into()).collect())
        },
        provenance: provenance.map(provenance_to_json),
    }
}

/// Builds the wire form of a composition, provenance included.
pub fn composition_to_file(comp: &Composition) -> RepFile {
    rep_to_file(comp.rep(), &[], Some(comp.provenance()))
}

/// Parses and validates a representation file from raw bytes.
pub fn parse_rep_file(bytes: &[u8]) -> Result<LoadedRep, RepFileError> {
    let file: RepFile = serde_json::from_slice(bytes)?;
    let inner = InnerRepJson {
        p: file.p,
        q: file.q,
        r: file.r,
        degree: file.degree,
        x: file.x.clone(),
        y: file.y.clone(),
    };
    let rep = inner_to_rep(&inner)?;
    let handles: Vec<Handle> = file
        .handles
        .clone()
        .unwrap_or_default()
        .into_iter()
        .map(Handle::from)
        .collect();
    for handle in &handles {
        if !rep.is_handle(handle) {
            return Err(invalid(format!(
                "({},{}) is not a {}-handle of the representation",
                handle.a, handle.b, handle.k
            )));
        }
    }
    let (provenance, composition) = match &file.provenance {
        None => (None, None),
        Some(json) => {
            let composition = replay(json)?;
            if let Some(comp) = &composition {
                if comp.rep() != &rep {
                    return Err(invalid(
                        "provenance replay does not reproduce the stored representation",
                    ));
                }
                (Some(comp.provenance().clone()), composition)
            } else {
                (provenance_from_json(json)?, None)
            }
        }
    };
    Ok(LoadedRep {
        rep,
        handles,
        provenance,
        composition,
    })
}

pub fn load_rep_file(path: impl AsRef<Path>) -> Result<LoadedRep, RepFileError> {
    let bytes = std::fs::read(path)?;
    parse_rep_file(&bytes)
}

pub fn save_rep_file(path: impl AsRef<Path>, file: &RepFile) -> Result<(), RepFileError> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Record of one CLI run; every randomized command writes one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub versions: BTreeMap<String, String>,
    pub timing_ms: u128,
    pub outcome: String,
}

impl RunManifest {
    pub fn new(command: String, seed: Option<u64>, timing_ms: u128, outcome: String) -> Self {
        let mut versions = BTreeMap::new();
        versions.insert("trigroup".to_string(), env!("CARGO_PKG_VERSION").to_string());
        RunManifest {
            command,
            seed,
            versions,
            timing_ms,
            outcome,
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), RepFileError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Point;

    fn perm(cycles: &[&[Point]], degree: usize) -> Permutation {
        let cycles: Vec<Cycle> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(&cycles, degree).unwrap()
    }

    fn base_222() -> Representation {
        Representation::new(
            TrianglePresentation::new(2, 2, 2).unwrap(),
            Permutation::identity(2),
            perm(&[&[1, 2]], 2),
        )
        .unwrap()
    }

    #[test]
    fn exact_schema_example_parses() {
        let text = r#"{"p":2,"q":2,"r":2,"degree":2,"x":[],"y":[[1,2]]}"#;
        let loaded = parse_rep_file(text.as_bytes()).unwrap();
        assert_eq!(loaded.rep, base_222());
        assert!(loaded.handles.is_empty());
        assert!(loaded.provenance.is_none());
    }

    #[test]
    fn round_trip_preserves_rep_and_handles() {
        let rep = base_222();
        let handles = rep.find_handles(1);
        let file = rep_to_file(&rep, &handles, None);
        let bytes = serde_json::to_vec(&file).unwrap();
        let loaded = parse_rep_file(&bytes).unwrap();
        assert_eq!(loaded.rep, rep);
        assert_eq!(loaded.handles, handles);
    }

    #[test]
    fn composition_round_trip_replays() {
        let comp = compose_clone_p(&base_222(), &Handle::new(1, 2, 1)).unwrap();
        let file = composition_to_file(&comp);
        let bytes = serde_json::to_vec(&file).unwrap();
        let loaded = parse_rep_file(&bytes).unwrap();
        let replayed = loaded.composition.unwrap();
        assert_eq!(replayed.rep(), comp.rep());
        assert_eq!(replayed.blocks(), comp.blocks());
        assert_eq!(replayed.provenance(), comp.provenance());
    }

    #[test]
    fn rejects_relation_violations() {
        let text = r#"{"p":2,"q":3,"r":7,"degree":2,"x":[[1,2]],"y":[[1,2]]}"#;
        let err = parse_rep_file(text.as_bytes()).unwrap_err();
        assert!(matches!(err, RepFileError::Validation(_)), "{err}");
    }

    #[test]
    fn rejects_bad_handles_and_bad_json() {
        let text = r#"{"p":2,"q":2,"r":2,"degree":2,"x":[],"y":[[1,2]],"handles":[{"a":1,"b":1,"k":1}]}"#;
        assert!(matches!(
            parse_rep_file(text.as_bytes()),
            Err(RepFileError::Validation(_))
        ));
        assert!(matches!(
            parse_rep_file(b"{not json"),
            Err(RepFileError::Json(_))
        ));
        let out_of_range = r#"{"p":2,"q":2,"r":2,"degree":2,"x":[],"y":[[1,3]]}"#;
        assert!(matches!(
            parse_rep_file(out_of_range.as_bytes()),
            Err(RepFileError::Validation(_))
        ));
    }

    #[test]
    fn rejects_tampered_provenance() {
        let comp = compose_clone_p(&base_222(), &Handle::new(1, 2, 1)).unwrap();
        let mut file = composition_to_file(&comp);
        // swap the stored images: the replay will no longer match
        file.x = vec![vec![1, 2], vec![3, 4]];
        let bytes = serde_json::to_vec(&file).unwrap();
        assert!(matches!(
            parse_rep_file(&bytes),
            Err(RepFileError::Validation(_))
        ));
    }
}
