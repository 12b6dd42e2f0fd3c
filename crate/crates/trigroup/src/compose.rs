//! Composition of representations by handle splicing.
//!
//! All four constructions share one skeleton: place the input diagrams on
//! consecutive windows of a common point set, multiply the generator images
//! together, and append splice cycles `(a_1,…,a_p)(b_p,…,b_1)` built from
//! k-handles. The b-cycle runs in the opposite rotation to the a-cycle; that
//! orientation is what makes `(xy)^k` carry each a-point to the matching
//! b-point in the composed diagram.
//!
//! Every constructor re-verifies its post-conditions (relations hold, the
//! result is transitive where claimed, declared blocks really are blocks)
//! and records full provenance so the structure analysis can re-derive the
//! splice data.

use thiserror::Error;

use crate::group::{BlockSystem, GeneratedGroup};
use crate::perm::{Permutation, Point};
use crate::triangle::{Handle, Representation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("expected {expected} handle entries, got {got}")]
    WrongHandleCount { expected: usize, got: usize },
    #[error("handles share a point: {0:?} and {1:?}")]
    HandleClash(Handle, Handle),
    #[error("diagram {0} receives no handle")]
    DiagramUncovered(usize),
    #[error("diagram index {0} out of range 1..={1}")]
    BadDiagramIndex(usize, usize),
    #[error("handles use different k values ({0} vs {1})")]
    MixedK(u64, u64),
    #[error("({a},{b}) is not a {k}-handle of diagram {diagram}")]
    NotAHandle {
        diagram: usize,
        a: Point,
        b: Point,
        k: u64,
    },
    #[error("input representation {0} is not transitive")]
    NotTransitiveInput(usize),
    #[error("input representations use different presentations")]
    PresentationMismatch,
    #[error("input representation {0} violates the relations")]
    InputRelationsFail(usize),
    #[error("h_{0} does not commute with the representation")]
    NotCommuting(usize),
    #[error("the 2p spliced points are not pairwise distinct")]
    PointsNotDistinct,
    #[error("h_1 must be the identity")]
    BadIdentityFirst,
    #[error("commuting permutation {0} has the wrong degree")]
    CommuterDegree(usize),
    #[error("the two handles are not disjoint")]
    HandlesNotDisjoint,
    #[error("alpha/beta must be products of disjoint {p}-cycles (found a cycle of length {found})")]
    BadCycleType { p: u64, found: usize },
    #[error("⟨alpha, beta⟩ is not transitive")]
    NotTransitiveAlphaBeta,
    #[error("alpha and beta must both act on 1..={expected}")]
    AlphaBetaDegree { expected: usize },
    #[error("composition post-condition violated: {0}")]
    PostConditionViolated(String),
}

/// Which diagram each of the p handles splices into. Handles are given in
/// global (post-placement) coordinates; diagram j occupies the window
/// `offset_j+1 ..= offset_j+deg_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleAssignment {
    pub entries: Vec<(usize, Handle)>,
}

impl HandleAssignment {
    pub fn new(entries: Vec<(usize, Handle)>) -> Self {
        HandleAssignment { entries }
    }
}

/// How a representation came to be; compositions carry enough inputs to
/// replay the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    SearchBacktrack,
    SearchAlternating { seed: u64 },
    General {
        inputs: Vec<Representation>,
        assignment: HandleAssignment,
    },
    Clone {
        base: Representation,
        handle: Handle,
    },
    Centralizer {
        base: Representation,
        handle: Handle,
        commuting: Vec<Permutation>,
        /// The distinct sets B_ω = {h_i(ω)}.
        block_family: Vec<Vec<Point>>,
        blocks_for_phi: bool,
        blocks_for_pi: bool,
    },
    AlphaBeta {
        base: Representation,
        h1: Handle,
        h2: Handle,
        alpha: Permutation,
        beta: Permutation,
        m: usize,
    },
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::SearchBacktrack => "search_backtrack",
            Provenance::SearchAlternating { .. } => "search_alternating",
            Provenance::General { .. } => "general",
            Provenance::Clone { .. } => "clone",
            Provenance::Centralizer { .. } => "centralizer",
            Provenance::AlphaBeta { .. } => "alphabeta",
        }
    }
}

/// A composed representation together with its canonical block system (when
/// the construction provides one) and its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    rep: Representation,
    blocks: Option<BlockSystem>,
    provenance: Provenance,
}

impl Composition {
    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn blocks(&self) -> Option<&BlockSystem> {
        self.blocks.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn group(&self) -> GeneratedGroup {
        self.rep.image_group()
    }

    /// The base representation the construction started from, when there is
    /// a single one.
    pub fn base_representation(&self) -> Option<&Representation> {
        match &self.provenance {
            Provenance::Clone { base, .. }
            | Provenance::Centralizer { base, .. }
            | Provenance::AlphaBeta { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Re-derives the input diagrams, their window offsets, and the splice
    /// cycles of this composition. `None` for non-composition provenance.
    pub fn splice_data(&self) -> Option<SpliceData> {
        match &self.provenance {
            Provenance::General { inputs, assignment } => {
                let offsets = window_offsets(inputs);
                let splice = Splice {
                    a: assignment.entries.iter().map(|(_, h)| h.a).collect(),
                    b: assignment.entries.iter().map(|(_, h)| h.b).collect(),
                    diagrams: assignment.entries.iter().map(|(j, _)| *j).collect(),
                };
                Some(SpliceData {
                    inputs: inputs.clone(),
                    offsets,
                    splices: vec![splice],
                })
            }
            Provenance::Clone { base, handle } => {
                let p = base.presentation().p as usize;
                let deg = base.degree();
                let inputs = vec![base.clone(); p];
                let splice = Splice {
                    a: (0..p).map(|i| handle.a + i * deg).collect(),
                    b: (0..p).map(|i| handle.b + i * deg).collect(),
                    diagrams: (1..=p).collect(),
                };
                Some(SpliceData {
                    offsets: window_offsets(&inputs),
                    inputs,
                    splices: vec![splice],
                })
            }
            Provenance::Centralizer {
                base,
                handle,
                commuting,
                ..
            } => {
                let splice = Splice {
                    a: commuting.iter().map(|h| h.apply(handle.a)).collect(),
                    b: commuting.iter().map(|h| h.apply(handle.b)).collect(),
                    diagrams: vec![1; commuting.len()],
                };
                Some(SpliceData {
                    inputs: vec![base.clone()],
                    offsets: vec![0],
                    splices: vec![splice],
                })
            }
            Provenance::AlphaBeta {
                base,
                h1,
                h2,
                alpha,
                beta,
                m,
            } => {
                let deg = base.degree();
                let inputs = vec![base.clone(); *m];
                let mut splices = Vec::new();
                for (handle, perm) in [(h1, alpha), (h2, beta)] {
                    for cycle in perm.cycles() {
                        splices.push(Splice {
                            a: cycle.iter().map(|&i| handle.a + (i - 1) * deg).collect(),
                            b: cycle.iter().map(|&i| handle.b + (i - 1) * deg).collect(),
                            diagrams: cycle.clone(),
                        });
                    }
                }
                Some(SpliceData {
                    offsets: window_offsets(&inputs),
                    inputs,
                    splices,
                })
            }
            _ => None,
        }
    }

    /// The product of the input xy images placed on their windows, i.e. the
    /// composed xy with every splice removed.
    pub fn plain_xy(&self) -> Option<Permutation> {
        let data = self.splice_data()?;
        let total = self.rep.degree();
        let mut acc = Permutation::identity(total);
        for (rep, &offset) in data.inputs.iter().zip(&data.offsets) {
            acc = acc.compose(&rep.xy().shift(offset, total));
        }
        Some(acc)
    }
}

/// One splice cycle: aligned a- and b-points in global coordinates, plus the
/// diagram index each pair lives in.
#[derive(Clone, Debug)]
pub struct Splice {
    pub a: Vec<Point>,
    pub b: Vec<Point>,
    pub diagrams: Vec<usize>,
}

/// Inputs and splices of a composition, as placed on the composed point set.
#[derive(Clone, Debug)]
pub struct SpliceData {
    pub inputs: Vec<Representation>,
    pub offsets: Vec<usize>,
    pub splices: Vec<Splice>,
}

fn window_offsets(reps: &[Representation]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(reps.len());
    let mut acc = 0;
    for rep in reps {
        offsets.push(acc);
        acc += rep.degree();
    }
    offsets
}

fn validate_inputs(reps: &[Representation]) -> Result<(), ComposeError> {
    let pres = reps[0].presentation();
    for (i, rep) in reps.iter().enumerate() {
        if rep.presentation() != pres {
            return Err(ComposeError::PresentationMismatch);
        }
        if !rep.check_relations().ok {
            return Err(ComposeError::InputRelationsFail(i + 1));
        }
        if !rep.is_transitive() {
            return Err(ComposeError::NotTransitiveInput(i + 1));
        }
    }
    Ok(())
}

/// Builds the splice permutation `(a_1,…,a_p)(b_p,…,b_1)` per splice on the
/// full point set. All points must be pairwise distinct.
fn splice_permutation(splices: &[Splice], total: usize) -> Result<Permutation, ComposeError> {
    let mut cycles = Vec::new();
    for splice in splices {
        if splice.a.len() >= 2 {
            cycles.push(splice.a.clone());
            let mut b_rev = splice.b.clone();
            b_rev.reverse();
            cycles.push(b_rev);
        }
    }
    Permutation::from_cycles(&cycles, total)
        .map_err(|e| ComposeError::PostConditionViolated(format!("splice cycles overlap: {e}")))
}

fn check_distinct_points(points: &[Point]) -> bool {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

fn build_composition(
    inputs: &[Representation],
    splices: &[Splice],
    blocks: Option<BlockSystem>,
    require_transitive: bool,
    provenance: Provenance,
) -> Result<Composition, ComposeError> {
    let offsets = window_offsets(inputs);
    let total = offsets.last().unwrap() + inputs.last().unwrap().degree();
    let mut phi_x = Permutation::identity(total);
    let mut phi_y = Permutation::identity(total);
    for (rep, &offset) in inputs.iter().zip(&offsets) {
        phi_x = phi_x.compose(&rep.x().shift(offset, total));
        phi_y = phi_y.compose(&rep.y().shift(offset, total));
    }
    phi_x = phi_x.compose(&splice_permutation(splices, total)?);

    let rep = Representation::new(inputs[0].presentation(), phi_x, phi_y)
        .expect("composed images share the degree");
    let report = rep.check_relations();
    if !report.ok {
        return Err(ComposeError::PostConditionViolated(format!(
            "composed relations fail: orders ({}, {}, {})",
            report.order_x, report.order_y, report.order_xy
        )));
    }
    if require_transitive && !rep.is_transitive() {
        return Err(ComposeError::PostConditionViolated(
            "composed representation is not transitive".into(),
        ));
    }
    if let Some(system) = &blocks {
        if !rep.image_group().preserves_blocks(system) {
            return Err(ComposeError::PostConditionViolated(
                "declared cells are not a block system".into(),
            ));
        }
    }
    Ok(Composition {
        rep,
        blocks,
        provenance,
    })
}

/// Composition of `t ≤ p` transitive diagrams along p k-handles, one handle
/// sequence entry per power of x in the splice cycle. Every diagram must
/// receive at least one handle, and handles sharing a diagram must be
/// disjoint.
pub fn compose_general(
    reps: &[Representation],
    assignment: &HandleAssignment,
) -> Result<Composition, ComposeError> {
    assert!(!reps.is_empty(), "compose_general needs at least one diagram");
    validate_inputs(reps)?;
    let p = reps[0].presentation().p as usize;
    let t = reps.len();
    if assignment.entries.len() != p {
        return Err(ComposeError::WrongHandleCount {
            expected: p,
            got: assignment.entries.len(),
        });
    }
    let k = assignment.entries[0].1.k;
    for (_, h) in &assignment.entries {
        if h.k != k {
            return Err(ComposeError::MixedK(k, h.k));
        }
    }
    let mut covered = vec![false; t];
    let offsets = window_offsets(reps);
    for &(diagram, handle) in &assignment.entries {
        if diagram == 0 || diagram > t {
            return Err(ComposeError::BadDiagramIndex(diagram, t));
        }
        covered[diagram - 1] = true;
        let offset = offsets[diagram - 1];
        let deg = reps[diagram - 1].degree();
        let in_window = |pt: Point| pt > offset && pt <= offset + deg;
        let local = Handle::new(
            handle.a.wrapping_sub(offset),
            handle.b.wrapping_sub(offset),
            handle.k,
        );
        if !in_window(handle.a) || !in_window(handle.b) || !reps[diagram - 1].is_handle(&local) {
            return Err(ComposeError::NotAHandle {
                diagram,
                a: handle.a,
                b: handle.b,
                k: handle.k,
            });
        }
    }
    if let Some(j) = covered.iter().position(|&c| !c) {
        return Err(ComposeError::DiagramUncovered(j + 1));
    }
    let all_points: Vec<Point> = assignment
        .entries
        .iter()
        .flat_map(|(_, h)| [h.a, h.b])
        .collect();
    if !check_distinct_points(&all_points) {
        let (i, j) = first_clash(&assignment.entries);
        return Err(ComposeError::HandleClash(
            assignment.entries[i].1,
            assignment.entries[j].1,
        ));
    }
    let splice = Splice {
        a: assignment.entries.iter().map(|(_, h)| h.a).collect(),
        b: assignment.entries.iter().map(|(_, h)| h.b).collect(),
        diagrams: assignment.entries.iter().map(|(j, _)| *j).collect(),
    };
    build_composition(
        reps,
        &[splice],
        None,
        true,
        Provenance::General {
            inputs: reps.to_vec(),
            assignment: assignment.clone(),
        },
    )
}

fn first_clash(entries: &[(usize, Handle)]) -> (usize, usize) {
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            let (hi, hj) = (&entries[i].1, &entries[j].1);
            if !hi.disjoint_from(hj) {
                return (i, j);
            }
        }
    }
    unreachable!("called only when a clash exists")
}

/// p equivalent copies of one diagram spliced along the translated copies of
/// a single handle. The composed action is imprimitive with blocks
/// `B_ω = {ω, deg+ω, …, (p−1)·deg+ω}`.
pub fn compose_clone_p(rep: &Representation, handle: &Handle) -> Result<Composition, ComposeError> {
    let p = rep.presentation().p as usize;
    let deg = rep.degree();
    let copies = vec![rep.clone(); p];
    let assignment = HandleAssignment::new(
        (1..=p)
            .map(|i| (i, handle.translated((i - 1) * deg)))
            .collect(),
    );
    let general = compose_general(&copies, &assignment)?;
    let cells: Vec<Vec<Point>> = (1..=deg)
        .map(|omega| (0..p).map(|i| omega + i * deg).collect())
        .collect();
    let blocks = BlockSystem::from_cells(p * deg, cells)
        .map_err(|e| ComposeError::PostConditionViolated(format!("clone blocks: {e}")))?;
    if !general.rep.image_group().preserves_blocks(&blocks) {
        return Err(ComposeError::PostConditionViolated(
            "clone cells are not a block system".into(),
        ));
    }
    Ok(Composition {
        rep: general.rep,
        blocks: Some(blocks),
        provenance: Provenance::Clone {
            base: rep.clone(),
            handle: *handle,
        },
    })
}

/// Splice within a single diagram along the images of one handle under
/// permutations commuting with the representation (h_1 must be the
/// identity). Transitivity of the input is not required; the output records
/// whether the sets B_ω = {h_i(ω)} are blocks for the composed action and
/// for the original one — the two verdicts always agree.
pub fn compose_centralizer(
    rep: &Representation,
    handle: &Handle,
    commuting: &[Permutation],
) -> Result<Composition, ComposeError> {
    let p = rep.presentation().p as usize;
    if commuting.len() != p {
        return Err(ComposeError::WrongHandleCount {
            expected: p,
            got: commuting.len(),
        });
    }
    if !rep.check_relations().ok {
        return Err(ComposeError::InputRelationsFail(1));
    }
    if !commuting[0].is_identity() {
        return Err(ComposeError::BadIdentityFirst);
    }
    for (i, h) in commuting.iter().enumerate() {
        if h.degree() != rep.degree() {
            return Err(ComposeError::CommuterDegree(i + 1));
        }
        if !h.commutes_with(rep.x()) || !h.commutes_with(rep.y()) {
            return Err(ComposeError::NotCommuting(i + 1));
        }
    }
    if !rep.is_handle(handle) {
        return Err(ComposeError::NotAHandle {
            diagram: 1,
            a: handle.a,
            b: handle.b,
            k: handle.k,
        });
    }
    let a_points: Vec<Point> = commuting.iter().map(|h| h.apply(handle.a)).collect();
    let b_points: Vec<Point> = commuting.iter().map(|h| h.apply(handle.b)).collect();
    let mut spliced: Vec<Point> = a_points.iter().chain(&b_points).copied().collect();
    spliced.sort_unstable();
    if spliced.windows(2).any(|w| w[0] == w[1]) {
        return Err(ComposeError::PointsNotDistinct);
    }

    let splice = Splice {
        a: a_points,
        b: b_points,
        diagrams: vec![1; p],
    };

    // B_ω = {h_i(ω)}; the family need not be a partition in general.
    let degree = rep.degree();
    let mut family: Vec<Vec<Point>> = Vec::new();
    for omega in 1..=degree {
        let mut cell: Vec<Point> = commuting.iter().map(|h| h.apply(omega)).collect();
        cell.sort_unstable();
        cell.dedup();
        if !family.contains(&cell) {
            family.push(cell);
        }
    }

    let pi_group = rep.image_group();
    let blocks_for_pi = family.iter().all(|cell| pi_group.is_block(cell));

    let provenance = Provenance::Centralizer {
        base: rep.clone(),
        handle: *handle,
        commuting: commuting.to_vec(),
        block_family: family.clone(),
        blocks_for_phi: false, // patched below once φ exists
        blocks_for_pi,
    };
    let mut comp = build_composition(
        std::slice::from_ref(rep),
        &[splice],
        None,
        false,
        provenance,
    )?;

    let phi_group = comp.rep.image_group();
    let blocks_for_phi = family.iter().all(|cell| phi_group.is_block(cell));
    if let Provenance::Centralizer {
        blocks_for_phi: slot,
        ..
    } = &mut comp.provenance
    {
        *slot = blocks_for_phi;
    }
    // When the family is an honest partition and blocks hold for φ, expose
    // it as the composition's block system.
    if blocks_for_phi {
        if let Ok(system) = BlockSystem::from_cells(degree, family) {
            if comp.rep.image_group().preserves_blocks(&system) {
                comp.blocks = Some(system);
            }
        }
    }
    Ok(comp)
}

/// m translated copies of one diagram with two disjoint handles, spliced
/// along the cycles of two permutations α, β of the copy indices (each a
/// product of disjoint p-cycles, together transitive on `1..=m`). The
/// composed action has blocks `B_ω = {ω, deg+ω, …, (m−1)·deg+ω}` and the
/// cell groups are isomorphic to ⟨α,β⟩.
pub fn compose_alpha_beta(
    rep: &Representation,
    h1: &Handle,
    h2: &Handle,
    alpha: &Permutation,
    beta: &Permutation,
    m: usize,
) -> Result<Composition, ComposeError> {
    validate_inputs(std::slice::from_ref(rep))?;
    if h1.k != h2.k {
        return Err(ComposeError::MixedK(h1.k, h2.k));
    }
    for handle in [h1, h2] {
        if !rep.is_handle(handle) {
            return Err(ComposeError::NotAHandle {
                diagram: 1,
                a: handle.a,
                b: handle.b,
                k: handle.k,
            });
        }
    }
    if !h1.disjoint_from(h2) {
        return Err(ComposeError::HandlesNotDisjoint);
    }
    if alpha.degree() != m || beta.degree() != m {
        return Err(ComposeError::AlphaBetaDegree { expected: m });
    }
    let p = rep.presentation().p;
    for perm in [alpha, beta] {
        for cycle in perm.cycles() {
            if cycle.len() as u64 != p {
                return Err(ComposeError::BadCycleType {
                    p,
                    found: cycle.len(),
                });
            }
        }
    }
    let copy_group = GeneratedGroup::new(m, vec![alpha.clone(), beta.clone()])
        .expect("alpha and beta share degree m");
    if !copy_group.is_transitive() {
        return Err(ComposeError::NotTransitiveAlphaBeta);
    }

    let deg = rep.degree();
    let inputs = vec![rep.clone(); m];
    let mut splices = Vec::new();
    for (handle, perm) in [(h1, alpha), (h2, beta)] {
        for cycle in perm.cycles() {
            splices.push(Splice {
                a: cycle.iter().map(|&i| handle.a + (i - 1) * deg).collect(),
                b: cycle.iter().map(|&i| handle.b + (i - 1) * deg).collect(),
                diagrams: cycle.clone(),
            });
        }
    }
    let cells: Vec<Vec<Point>> = (1..=deg)
        .map(|omega| (0..m).map(|i| omega + i * deg).collect())
        .collect();
    let blocks = BlockSystem::from_cells(m * deg, cells)
        .map_err(|e| ComposeError::PostConditionViolated(format!("copy blocks: {e}")))?;
    build_composition(
        &inputs,
        &splices,
        Some(blocks),
        true,
        Provenance::AlphaBeta {
            base: rep.clone(),
            h1: *h1,
            h2: *h2,
            alpha: alpha.clone(),
            beta: beta.clone(),
            m,
        },
    )
}

/// Checks the cycle-length law on a composition: every cycle of the composed
/// xy through a spliced a-point has the length of the input-diagram xy-cycle
/// through that point and contains the next b-point of its splice, and every
/// cycle avoiding the spliced points is a cycle of the un-spliced product.
pub fn check_cycle_length_law(comp: &Composition) -> Result<(), String> {
    let data = comp
        .splice_data()
        .ok_or_else(|| "composition has no splice data".to_string())?;
    let phi_xy = comp.rep().xy();
    let total = comp.rep().degree();
    let plain_xy = comp.plain_xy().expect("splice data exists");

    // Full cycle partition including fixed points.
    let mut cycle_id = vec![usize::MAX; total];
    let mut cycles: Vec<Vec<Point>> = Vec::new();
    for start in 1..=total {
        if cycle_id[start - 1] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cycle = vec![start];
        cycle_id[start - 1] = id;
        let mut pt = phi_xy.apply(start);
        while pt != start {
            cycle_id[pt - 1] = id;
            cycle.push(pt);
            pt = phi_xy.apply(pt);
        }
        cycles.push(cycle);
    }

    let mut touches_a = vec![false; cycles.len()];
    let mut touches_b = vec![false; cycles.len()];
    for splice in &data.splices {
        for &a in &splice.a {
            touches_a[cycle_id[a - 1]] = true;
        }
        for &b in &splice.b {
            touches_b[cycle_id[b - 1]] = true;
        }
    }

    for splice in &data.splices {
        let len = splice.a.len();
        for i in 0..len {
            let a = splice.a[i];
            let diagram = splice.diagrams[i];
            let offset = data.offsets[diagram - 1];
            let local_xy = data.inputs[diagram - 1].xy();
            let local_a = a - offset;
            // length of the input xy-cycle through a
            let mut s = 1;
            let mut pt = local_xy.apply(local_a);
            while pt != local_a {
                s += 1;
                pt = local_xy.apply(pt);
            }
            let cycle = &cycles[cycle_id[a - 1]];
            if cycle.len() != s {
                return Err(format!(
                    "cycle through a={a} has length {} but the input xy-cycle has length {s}",
                    cycle.len()
                ));
            }
            let next_b = splice.b[(i + 1) % len];
            if !cycle.contains(&next_b) {
                return Err(format!(
                    "cycle through a={a} misses the next spliced b-point {next_b}"
                ));
            }
        }
    }

    for (id, cycle) in cycles.iter().enumerate() {
        if touches_a[id] {
            continue;
        }
        if touches_b[id] {
            return Err(format!(
                "cycle {cycle:?} touches spliced b-points but no a-point"
            ));
        }
        for &z in cycle {
            if phi_xy.apply(z) != plain_xy.apply(z) {
                return Err(format!(
                    "cycle {cycle:?} avoids the splice but differs from the input cycles at {z}"
                ));
            }
        }
    }
    Ok(())
}

/// Checks the block equivariance `B_ω^{φ(g)} = B_{ω^{π(g)}}` for g ∈ {x, y}
/// on every ω of the base diagram. Applies to the clone, centralizer and
/// alpha-beta constructions.
pub fn check_block_equivariance(comp: &Composition) -> Result<(), String> {
    let base = comp
        .base_representation()
        .ok_or_else(|| "composition has no single base".to_string())?;
    let cell_of = |omega: Point| -> Vec<Point> {
        match comp.provenance() {
            Provenance::Centralizer { commuting, .. } => {
                let mut cell: Vec<Point> = commuting.iter().map(|h| h.apply(omega)).collect();
                cell.sort_unstable();
                cell.dedup();
                cell
            }
            _ => {
                let copies = comp.rep().degree() / base.degree();
                (0..copies).map(|i| omega + i * base.degree()).collect()
            }
        }
    };
    for (phi_g, pi_g) in [
        (comp.rep().x(), base.x()),
        (comp.rep().y(), base.y()),
    ] {
        for omega in 1..=base.degree() {
            let mut image: Vec<Point> = cell_of(omega).iter().map(|&z| phi_g.apply(z)).collect();
            image.sort_unstable();
            let expected = cell_of(pi_g.apply(omega));
            if image != expected {
                return Err(format!(
                    "B_{omega} maps to {image:?}, expected B_{} = {expected:?}",
                    pi_g.apply(omega)
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Cycle;
    use crate::triangle::TrianglePresentation;

    fn perm(cycles: &[&[Point]], degree: usize) -> Permutation {
        let cycles: Vec<Cycle> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(&cycles, degree).unwrap()
    }

    fn pres(p: u64, q: u64, r: u64) -> TrianglePresentation {
        TrianglePresentation::new(p, q, r).unwrap()
    }

    fn base_222() -> Representation {
        Representation::new(pres(2, 2, 2), Permutation::identity(2), perm(&[&[1, 2]], 2)).unwrap()
    }

    fn rep_256() -> Representation {
        Representation::new(
            pres(2, 5, 6),
            perm(&[&[5, 6]], 6),
            perm(&[&[1, 2, 3, 4, 5]], 6),
        )
        .unwrap()
    }

    #[test]
    fn general_composition_of_two_222_diagrams() {
        let reps = vec![base_222(), base_222()];
        let assignment = HandleAssignment::new(vec![
            (1, Handle::new(1, 2, 1)),
            (2, Handle::new(3, 4, 1)),
        ]);
        let comp = compose_general(&reps, &assignment).unwrap();
        assert_eq!(comp.rep().x(), &perm(&[&[1, 3], &[2, 4]], 4));
        assert_eq!(comp.rep().y(), &perm(&[&[1, 2], &[3, 4]], 4));
        assert!(comp.rep().is_transitive());
        assert!(comp.rep().check_relations().ok);
        // instance of the cycle-length law: the composed xy is (1 4)(2 3)
        assert_eq!(comp.rep().xy(), perm(&[&[1, 4], &[2, 3]], 4));
        check_cycle_length_law(&comp).unwrap();
    }

    #[test]
    fn general_rejects_overlapping_handles_in_one_diagram() {
        let reps = vec![base_222()];
        let assignment = HandleAssignment::new(vec![
            (1, Handle::new(1, 2, 1)),
            (1, Handle::new(2, 1, 1)),
        ]);
        assert!(matches!(
            compose_general(&reps, &assignment),
            Err(ComposeError::HandleClash(_, _))
        ));
    }

    #[test]
    fn general_rejects_uncovered_diagram() {
        let rep6 = rep_256();
        // p = 2 handles, both in diagram 1, with diagram 2 uncovered
        let reps = vec![rep6.clone(), rep6.clone()];
        let assignment = HandleAssignment::new(vec![
            (1, Handle::new(1, 2, 1)),
            (1, Handle::new(3, 4, 1)),
        ]);
        assert_eq!(
            compose_general(&reps, &assignment),
            Err(ComposeError::DiagramUncovered(2))
        );
    }

    #[test]
    fn general_rejects_mixed_k_and_bad_handles() {
        let reps = vec![base_222(), base_222()];
        let mixed = HandleAssignment::new(vec![
            (1, Handle::new(1, 2, 1)),
            (2, Handle::new(3, 4, 2)),
        ]);
        assert_eq!(
            compose_general(&reps, &mixed),
            Err(ComposeError::MixedK(1, 2))
        );
        let not_handle = HandleAssignment::new(vec![
            (1, Handle::new(1, 2, 1)),
            (2, Handle::new(1, 4, 1)), // point 1 is not in diagram 2's window
        ]);
        assert!(matches!(
            compose_general(&reps, &not_handle),
            Err(ComposeError::NotAHandle { diagram: 2, .. })
        ));
    }

    #[test]
    fn general_rejects_intransitive_input() {
        let split = Representation::new(
            pres(2, 2, 2),
            Permutation::identity(4),
            perm(&[&[1, 2], &[3, 4]], 4),
        )
        .unwrap();
        let assignment = HandleAssignment::new(vec![
            (1, Handle::new(1, 2, 1)),
            (1, Handle::new(3, 4, 1)),
        ]);
        assert_eq!(
            compose_general(std::slice::from_ref(&split), &assignment),
            Err(ComposeError::NotTransitiveInput(1))
        );
    }

    #[test]
    fn clone_p_matches_worked_example() {
        let comp = compose_clone_p(&base_222(), &Handle::new(1, 2, 1)).unwrap();
        assert_eq!(comp.rep().x(), &perm(&[&[1, 3], &[2, 4]], 4));
        assert_eq!(comp.rep().y(), &perm(&[&[1, 2], &[3, 4]], 4));
        let blocks = comp.blocks().unwrap();
        assert_eq!(blocks.cells(), &[vec![1, 3], vec![2, 4]]);
        check_cycle_length_law(&comp).unwrap();
        check_block_equivariance(&comp).unwrap();
    }

    #[test]
    fn clone_p_equals_general_on_translated_copies() {
        let rep = rep_256();
        let handle = Handle::new(1, 2, 1);
        let comp = compose_clone_p(&rep, &handle).unwrap();
        let copies = vec![rep.clone(), rep.clone()];
        let assignment = HandleAssignment::new(vec![
            (1, handle),
            (2, handle.translated(6)),
        ]);
        let general = compose_general(&copies, &assignment).unwrap();
        assert_eq!(comp.rep(), general.rep());
    }

    #[test]
    fn centralizer_worked_example() {
        let rep = Representation::new(
            pres(2, 2, 2),
            Permutation::identity(4),
            perm(&[&[1, 2], &[3, 4]], 4),
        )
        .unwrap();
        let h2 = perm(&[&[1, 3], &[2, 4]], 4);
        let comp = compose_centralizer(
            &rep,
            &Handle::new(1, 2, 1),
            &[Permutation::identity(4), h2],
        )
        .unwrap();
        assert_eq!(comp.rep().x(), &perm(&[&[1, 3], &[2, 4]], 4));
        assert_eq!(comp.rep().y(), &perm(&[&[1, 2], &[3, 4]], 4));
        let Provenance::Centralizer {
            block_family,
            blocks_for_phi,
            blocks_for_pi,
            ..
        } = comp.provenance()
        else {
            panic!("wrong provenance");
        };
        assert_eq!(block_family, &vec![vec![1, 3], vec![2, 4]]);
        assert!(blocks_for_phi);
        assert!(blocks_for_pi);
        assert_eq!(comp.blocks().unwrap().cells(), &[vec![1, 3], vec![2, 4]]);
        check_cycle_length_law(&comp).unwrap();
        check_block_equivariance(&comp).unwrap();
    }

    #[test]
    fn centralizer_rejects_non_commuting() {
        let rep = Representation::new(
            pres(2, 3, 3),
            Permutation::identity(3),
            perm(&[&[1, 2, 3]], 3),
        )
        .unwrap();
        let err = compose_centralizer(
            &rep,
            &Handle::new(1, 2, 1),
            &[Permutation::identity(3), perm(&[&[1, 2]], 3)],
        );
        assert_eq!(err, Err(ComposeError::NotCommuting(2)));
    }

    #[test]
    fn centralizer_rejects_identity_collisions() {
        let rep = base_222();
        let err = compose_centralizer(
            &rep,
            &Handle::new(1, 2, 1),
            &[Permutation::identity(2), Permutation::identity(2)],
        );
        assert_eq!(err, Err(ComposeError::PointsNotDistinct));

        let err = compose_centralizer(
            &rep,
            &Handle::new(1, 2, 1),
            &[perm(&[&[1, 2]], 2), Permutation::identity(2)],
        );
        assert_eq!(err, Err(ComposeError::BadIdentityFirst));
    }

    #[test]
    fn alpha_beta_example_delta_256() {
        let rep = rep_256();
        let comp = compose_alpha_beta(
            &rep,
            &Handle::new(1, 2, 1),
            &Handle::new(3, 4, 1),
            &perm(&[&[1, 2]], 3),
            &perm(&[&[2, 3]], 3),
            3,
        )
        .unwrap();
        assert_eq!(comp.rep().degree(), 18);
        assert!(comp.rep().is_transitive());
        assert!(comp.rep().check_relations().ok);
        let blocks = comp.blocks().unwrap();
        assert_eq!(blocks.cell_count(), 6);
        assert_eq!(blocks.cell_size(), 3);
        check_cycle_length_law(&comp).unwrap();
        check_block_equivariance(&comp).unwrap();
    }

    #[test]
    fn alpha_beta_rejects_bad_cycle_type() {
        let rep = rep_256();
        let err = compose_alpha_beta(
            &rep,
            &Handle::new(1, 2, 1),
            &Handle::new(3, 4, 1),
            &perm(&[&[1, 2, 3]], 3), // 3-cycle with p = 2
            &perm(&[&[2, 3]], 3),
            3,
        );
        assert_eq!(err, Err(ComposeError::BadCycleType { p: 2, found: 3 }));
    }

    #[test]
    fn alpha_beta_rejects_intransitive_copy_action() {
        let rep = rep_256();
        let err = compose_alpha_beta(
            &rep,
            &Handle::new(1, 2, 1),
            &Handle::new(3, 4, 1),
            &perm(&[&[1, 2]], 3),
            &perm(&[&[1, 2]], 3), // ⟨α,β⟩ fixes copy 3
            3,
        );
        assert_eq!(err, Err(ComposeError::NotTransitiveAlphaBeta));
    }

    #[test]
    fn alpha_beta_rejects_overlapping_handles() {
        let rep = rep_256();
        let err = compose_alpha_beta(
            &rep,
            &Handle::new(1, 2, 1),
            &Handle::new(2, 3, 1),
            &perm(&[&[1, 2]], 2),
            &Permutation::identity(2),
            2,
        );
        assert_eq!(err, Err(ComposeError::HandlesNotDisjoint));
    }

    #[test]
    fn alpha_beta_with_full_cycle_and_trivial_beta_degenerates_to_clone() {
        let rep = rep_256();
        let h1 = Handle::new(1, 2, 1);
        let h2 = Handle::new(3, 4, 1);
        let clone = compose_clone_p(&rep, &h1).unwrap();
        let ab = compose_alpha_beta(
            &rep,
            &h1,
            &h2,
            &perm(&[&[1, 2]], 2),
            &Permutation::identity(2),
            2,
        )
        .unwrap();
        assert_eq!(clone.rep(), ab.rep());
        assert_eq!(clone.blocks(), ab.blocks());
    }
}
