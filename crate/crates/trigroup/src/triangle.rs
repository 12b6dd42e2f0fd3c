//! Representations of the triangle group Δ(p,q,r) = ⟨x,y | x^p=y^q=(xy)^r=1⟩:
//! relation checking, handle detection, equivalence of representations,
//! centralizer elements, and search for representations with prescribed
//! properties.
//!
//! Relation semantics are divisibility: a pair of permutations represents
//! Δ(p,q,r) when the order of x divides p, the order of y divides q and the
//! order of xy divides r. Strict (exact-order) checking is available as a
//! search option.

use std::collections::BTreeSet;

use num_integer::lcm;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::GeneratedGroup;
use crate::perm::{Permutation, Point};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangleError {
    #[error("presentation exponents must all be at least 2 (got {p},{q},{r})")]
    BadPresentation { p: u64, q: u64, r: u64 },
    #[error("x has degree {x} but y has degree {y}")]
    DegreeMismatch { x: usize, y: usize },
    #[error("the image group is not transitive")]
    NotTransitive,
    #[error("degree {degree} exceeds the search cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },
    #[error("no representation found within {attempts} attempts")]
    NotFound { attempts: u64 },
    #[error("bijection does not match the point sets")]
    DomainMismatch,
    #[error("needed_handles must be 1 or 2 (got {0})")]
    BadHandleCount(usize),
    #[error("search_alternating needs degree at least 5 (got {0})")]
    DegreeTooSmall(usize),
}

/// The exponent triple of Δ(p,q,r). `p ≤ q ≤ r` is not required here; the
/// structure theorems that assume it check it themselves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrianglePresentation {
    pub p: u64,
    pub q: u64,
    pub r: u64,
}

impl TrianglePresentation {
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self, TriangleError> {
        if p < 2 || q < 2 || r < 2 {
            return Err(TriangleError::BadPresentation { p, q, r });
        }
        Ok(TrianglePresentation { p, q, r })
    }
}

/// A permutation representation of Δ(p,q,r): images of the generators x and
/// y on `{1..degree}`. Construction checks degrees only; use
/// [`Representation::check_relations`] for the relation report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    presentation: TrianglePresentation,
    x: Permutation,
    y: Permutation,
}

/// Exact generator orders together with the divisibility verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub ok: bool,
    pub order_x: u64,
    pub order_y: u64,
    pub order_xy: u64,
}

impl Representation {
    pub fn new(
        presentation: TrianglePresentation,
        x: Permutation,
        y: Permutation,
    ) -> Result<Self, TriangleError> {
        if x.degree() != y.degree() {
            return Err(TriangleError::DegreeMismatch {
                x: x.degree(),
                y: y.degree(),
            });
        }
        Ok(Representation { presentation, x, y })
    }

    pub fn presentation(&self) -> TrianglePresentation {
        self.presentation
    }

    pub fn degree(&self) -> usize {
        self.x.degree()
    }

    pub fn x(&self) -> &Permutation {
        &self.x
    }

    pub fn y(&self) -> &Permutation {
        &self.y
    }

    /// The image of xy (x applied first).
    pub fn xy(&self) -> Permutation {
        self.x.compose(&self.y)
    }

    pub fn image_group(&self) -> GeneratedGroup {
        GeneratedGroup::new(self.degree(), vec![self.x.clone(), self.y.clone()])
            .expect("degrees agree")
    }

    pub fn is_transitive(&self) -> bool {
        self.image_group().is_transitive()
    }

    /// Divisibility check of the three defining relations, with the exact
    /// orders always reported.
    pub fn check_relations(&self) -> RelationReport {
        let order_x = self.x.order();
        let order_y = self.y.order();
        let order_xy = self.xy().order();
        let pres = self.presentation;
        RelationReport {
            ok: pres.p % order_x == 0 && pres.q % order_y == 0 && pres.r % order_xy == 0,
            order_x,
            order_y,
            order_xy,
        }
    }

    /// Whether `(a, b)` is a k-handle: both points fixed by x and `(xy)^k`
    /// carries a to b.
    pub fn is_handle(&self, handle: &Handle) -> bool {
        let Handle { a, b, k } = *handle;
        a != b
            && a >= 1
            && b >= 1
            && a <= self.degree()
            && b <= self.degree()
            && self.x.apply(a) == a
            && self.x.apply(b) == b
            && self.xy().power(k as i64).apply(a) == b
    }

    /// All k-handles, ascending by `(a, b)`.
    pub fn find_handles(&self, k: u64) -> Vec<Handle> {
        let fixed = self.x.fixed_points();
        let xy_k = self.xy().power(k as i64);
        let fixed_set: BTreeSet<Point> = fixed.iter().copied().collect();
        let mut handles = Vec::new();
        for &a in &fixed {
            let b = xy_k.apply(a);
            if b != a && fixed_set.contains(&b) {
                handles.push(Handle { a, b, k });
            }
        }
        handles.sort_by_key(|h| (h.a, h.b));
        handles
    }

    /// The same representation shifted onto `{offset+1 .. offset+degree}`,
    /// with `1..=offset` fixed.
    pub fn translate(&self, offset: usize) -> Representation {
        let new_degree = self.degree() + offset;
        Representation {
            presentation: self.presentation,
            x: self.x.shift(offset, new_degree),
            y: self.y.shift(offset, new_degree),
        }
    }
}

/// An ordered pair of x-fixed points with `(xy)^k` mapping `a` to `b`.
/// `(a, b)` and `(b, a)` are distinct handles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Handle {
    pub a: Point,
    pub b: Point,
    pub k: u64,
}

impl Handle {
    pub fn new(a: Point, b: Point, k: u64) -> Handle {
        Handle { a, b, k }
    }

    pub fn translated(&self, offset: usize) -> Handle {
        Handle {
            a: self.a + offset,
            b: self.b + offset,
            k: self.k,
        }
    }

    /// Disjointness of the underlying point sets {a,b}.
    pub fn disjoint_from(&self, other: &Handle) -> bool {
        self.a != other.a && self.a != other.b && self.b != other.a && self.b != other.b
    }
}

/// Checks whether `f` intertwines the two representations on the generators:
/// `f(ω^{π₁(g)}) = f(ω)^{π₂(g)}` for g ∈ {x, y} and every ω. `f[i-1]` is the
/// image of point i; it must map injectively into the domain of `rep2`.
pub fn is_equivalence(
    rep1: &Representation,
    rep2: &Representation,
    f: &[Point],
) -> Result<bool, TriangleError> {
    if f.len() != rep1.degree() {
        return Err(TriangleError::DomainMismatch);
    }
    let mut hit = vec![false; rep2.degree()];
    for &img in f {
        if img == 0 || img > rep2.degree() || hit[img - 1] {
            return Err(TriangleError::DomainMismatch);
        }
        hit[img - 1] = true;
    }
    for (g1, g2) in [(rep1.x(), rep2.x()), (rep1.y(), rep2.y())] {
        for omega in 1..=rep1.degree() {
            if f[g1.apply(omega) - 1] != g2.apply(f[omega - 1]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The full centralizer of the image group in the symmetric group on the
/// point set. Requires a transitive image; every element is determined by
/// the image of point 1 propagated along a Schreier tree, so the result size
/// divides the degree.
pub fn centralizer_elements(rep: &Representation) -> Result<Vec<Permutation>, TriangleError> {
    let group = rep.image_group();
    if !group.is_transitive() {
        return Err(TriangleError::NotTransitive);
    }
    let degree = rep.degree();
    let orbit = group.orbit(1).expect("degree >= 1");
    let mut out = Vec::new();
    for c in 1..=degree {
        let mut images = vec![0; degree];
        for omega in 1..=degree {
            let witness = orbit.witness(omega).expect("transitive");
            images[omega - 1] = witness.apply(c);
        }
        let Ok(h) = Permutation::from_images(images) else {
            continue;
        };
        if h.commutes_with(rep.x()) && h.commutes_with(rep.y()) {
            out.push(h);
        }
    }
    Ok(out)
}

/// Options for [`search_backtrack`].
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub require_transitive: bool,
    /// When set, keep only representations having at least one k-handle.
    pub require_handle_k: Option<u64>,
    pub max_solutions: usize,
    /// Demand exact orders (p, q, r) instead of divisibility.
    pub strict_orders: bool,
    /// Hard cap on the degree; the search is factorial.
    pub degree_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            require_transitive: false,
            require_handle_k: None,
            max_solutions: usize::MAX,
            strict_orders: false,
            degree_cap: 9,
        }
    }
}

/// Exhaustive enumeration of all (x, y) image pairs satisfying the
/// relations, in lexicographic order of the two image tables. Partial
/// assignments are pruned as soon as a closed cycle violates the relation
/// divisibilities, which keeps the output identical to the brute-force scan
/// over all pairs.
pub fn search_backtrack(
    presentation: TrianglePresentation,
    degree: usize,
    options: &SearchOptions,
) -> Result<Vec<Representation>, TriangleError> {
    if degree > options.degree_cap {
        return Err(TriangleError::DegreeTooLarge {
            degree,
            cap: options.degree_cap,
        });
    }
    let mut results = Vec::new();
    let mut x_enum = CycleConstrainedEnum::new(degree, presentation.p, options.strict_orders);
    x_enum.for_each(&mut |x| {
        let mut y_enum =
            ConstrainedPairEnum::new(degree, presentation.q, presentation.r, options.strict_orders, x);
        y_enum.for_each(&mut |y| {
            let rep = Representation::new(presentation, x.clone(), y.clone()).expect("same degree");
            if options.require_transitive && !rep.is_transitive() {
                return true;
            }
            if let Some(k) = options.require_handle_k {
                if rep.find_handles(k).is_empty() {
                    return true;
                }
            }
            results.push(rep);
            results.len() < options.max_solutions
        });
        results.len() < options.max_solutions
    });
    Ok(results)
}

/// Path bookkeeping for incremental cycle-structure checks: the partial
/// image graph is a union of simple paths, and an assignment either merges
/// two paths or closes a cycle whose length must divide `divisor`.
struct PathTracker {
    divisor: u64,
    start_of_end: Vec<usize>,
    end_of_start: Vec<usize>,
    len_of_start: Vec<usize>,
    closed: Vec<usize>,
}

enum PathStep {
    Merged { old_end: usize, old_start: usize },
    Closed,
}

impl PathTracker {
    fn new(n: usize, divisor: u64) -> PathTracker {
        PathTracker {
            divisor,
            start_of_end: (0..n).collect(),
            end_of_start: (0..n).collect(),
            len_of_start: vec![1; n],
            closed: Vec::new(),
        }
    }

    /// Adds the edge i→j (0-based); `None` means the step is inconsistent
    /// with every cycle length dividing the divisor.
    fn add_edge(&mut self, i: usize, j: usize) -> Option<PathStep> {
        let s = self.start_of_end[i];
        if s == j {
            let cycle_len = self.len_of_start[s];
            if self.divisor % cycle_len as u64 != 0 {
                return None;
            }
            self.closed.push(cycle_len);
            return Some(PathStep::Closed);
        }
        let e = self.end_of_start[j];
        let merged = self.len_of_start[s] + self.len_of_start[j];
        if merged as u64 > self.divisor {
            return None;
        }
        let step = PathStep::Merged { old_end: i, old_start: j };
        self.len_of_start[s] = merged;
        self.end_of_start[s] = e;
        self.start_of_end[e] = s;
        Some(step)
    }

    fn undo(&mut self, step: PathStep) {
        match step {
            PathStep::Closed => {
                self.closed.pop();
            }
            PathStep::Merged { old_end, old_start } => {
                let s = self.start_of_end[self.end_of_start[old_start]];
                self.len_of_start[s] -= self.len_of_start[old_start];
                let e = self.end_of_start[old_start];
                self.end_of_start[s] = old_end;
                self.start_of_end[e] = old_start;
                self.start_of_end[old_end] = s;
            }
        }
    }

    fn order_of_closed(&self) -> u64 {
        self.closed.iter().fold(1u64, |acc, &l| lcm(acc, l as u64))
    }
}

/// Lexicographic enumeration of permutations whose cycle lengths divide a
/// fixed exponent.
struct CycleConstrainedEnum {
    n: usize,
    strict: bool,
    exponent: u64,
    images: Vec<usize>,
    used: Vec<bool>,
    tracker: PathTracker,
}

impl CycleConstrainedEnum {
    fn new(n: usize, exponent: u64, strict: bool) -> Self {
        CycleConstrainedEnum {
            n,
            strict,
            exponent,
            images: vec![0; n],
            used: vec![false; n],
            tracker: PathTracker::new(n, exponent),
        }
    }

    fn for_each(&mut self, f: &mut dyn FnMut(&Permutation) -> bool) -> bool {
        self.recurse(0, f)
    }

    fn recurse(&mut self, i: usize, f: &mut dyn FnMut(&Permutation) -> bool) -> bool {
        if i == self.n {
            if self.strict && self.tracker.order_of_closed() != self.exponent {
                return true;
            }
            let perm = Permutation::from_images(self.images.iter().map(|&v| v + 1).collect())
                .expect("backtracker yields bijections");
            return f(&perm);
        }
        for j in 0..self.n {
            if self.used[j] {
                continue;
            }
            let Some(step) = self.tracker.add_edge(i, j) else {
                continue;
            };
            self.images[i] = j;
            self.used[j] = true;
            let keep_going = self.recurse(i + 1, f);
            self.used[j] = false;
            self.tracker.undo(step);
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// Enumeration of y given x, pruning on the cycle structures of both y and
/// xy at once. Assigning y(v) = w also fixes xy at the x-preimage of v.
struct ConstrainedPairEnum {
    n: usize,
    strict: bool,
    q: u64,
    r: u64,
    x_inv: Vec<usize>,
    images: Vec<usize>,
    used: Vec<bool>,
    y_tracker: PathTracker,
    xy_tracker: PathTracker,
}

impl ConstrainedPairEnum {
    fn new(n: usize, q: u64, r: u64, strict: bool, x: &Permutation) -> Self {
        let mut x_inv = vec![0; n];
        for i in 0..n {
            x_inv[x.apply(i + 1) - 1] = i;
        }
        ConstrainedPairEnum {
            n,
            strict,
            q,
            r,
            x_inv,
            images: vec![0; n],
            used: vec![false; n],
            y_tracker: PathTracker::new(n, q),
            xy_tracker: PathTracker::new(n, r),
        }
    }

    fn for_each(&mut self, f: &mut dyn FnMut(&Permutation) -> bool) -> bool {
        self.recurse(0, f)
    }

    fn recurse(&mut self, v: usize, f: &mut dyn FnMut(&Permutation) -> bool) -> bool {
        if v == self.n {
            if self.strict
                && (self.y_tracker.order_of_closed() != self.q
                    || self.xy_tracker.order_of_closed() != self.r)
            {
                return true;
            }
            let perm = Permutation::from_images(self.images.iter().map(|&w| w + 1).collect())
                .expect("backtracker yields bijections");
            return f(&perm);
        }
        let u = self.x_inv[v];
        for w in 0..self.n {
            if self.used[w] {
                continue;
            }
            let Some(y_step) = self.y_tracker.add_edge(v, w) else {
                continue;
            };
            let Some(xy_step) = self.xy_tracker.add_edge(u, w) else {
                self.y_tracker.undo(y_step);
                continue;
            };
            self.images[v] = w;
            self.used[w] = true;
            let keep_going = self.recurse(v + 1, f);
            self.used[w] = false;
            self.xy_tracker.undo(xy_step);
            self.y_tracker.undo(y_step);
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// Seeded random search for a representation whose image is the full
/// alternating group of the given degree, with at least `needed_handles`
/// pairwise disjoint k-handles. x is drawn as a product of p-cycles with
/// enough fixed points, y as an even permutation of order dividing q; every
/// candidate is validated post hoc. The result is reproducible for a fixed
/// seed; `NotFound` means the attempt budget ran out, not that nothing
/// exists.
pub fn search_alternating(
    presentation: TrianglePresentation,
    degree: usize,
    needed_handles: usize,
    k: u64,
    seed: u64,
    max_attempts: u64,
) -> Result<Representation, TriangleError> {
    if !(1..=2).contains(&needed_handles) {
        return Err(TriangleError::BadHandleCount(needed_handles));
    }
    if degree < 5 {
        return Err(TriangleError::DegreeTooSmall(degree));
    }
    let p = presentation.p as usize;
    let min_fixed = 2 * needed_handles;
    let valid_cycle_counts: Vec<usize> = (1..=degree / p.max(1))
        .filter(|&c| c * p + min_fixed <= degree && (c * (p - 1)) % 2 == 0)
        .collect();
    if valid_cycle_counts.is_empty() {
        return Err(TriangleError::NotFound { attempts: 0 });
    }
    let q_divisors: Vec<usize> = (1..=presentation.q as usize)
        .filter(|&d| presentation.q % d as u64 == 0)
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..max_attempts {
        let x = draw_p_cycle_product(&mut rng, degree, p, &valid_cycle_counts);
        let Some(y) = draw_even_with_order_dividing(&mut rng, degree, &q_divisors) else {
            continue;
        };
        let rep = Representation::new(presentation, x, y).expect("same degree");
        if presentation.r % rep.xy().order() != 0 {
            continue;
        }
        let handles = rep.find_handles(k);
        if !has_disjoint_subset(&handles, needed_handles) {
            continue;
        }
        if rep.image_group().is_alternating() {
            let _ = attempt;
            return Ok(rep);
        }
    }
    Err(TriangleError::NotFound {
        attempts: max_attempts,
    })
}

/// Whether the handle list contains `needed` pairwise disjoint handles.
pub fn has_disjoint_subset(handles: &[Handle], needed: usize) -> bool {
    match needed {
        0 => true,
        1 => !handles.is_empty(),
        2 => handles
            .iter()
            .enumerate()
            .any(|(i, h)| handles[i + 1..].iter().any(|g| h.disjoint_from(g))),
        _ => false,
    }
}

fn draw_p_cycle_product(
    rng: &mut ChaCha8Rng,
    degree: usize,
    p: usize,
    valid_counts: &[usize],
) -> Permutation {
    let c = valid_counts[rng.gen_range(0..valid_counts.len())];
    let mut points: Vec<Point> = (1..=degree).collect();
    points.shuffle(rng);
    let cycles: Vec<Vec<Point>> = points[..c * p].chunks(p).map(|ch| ch.to_vec()).collect();
    Permutation::from_cycles(&cycles, degree).expect("disjoint by construction")
}

fn draw_even_with_order_dividing(
    rng: &mut ChaCha8Rng,
    degree: usize,
    divisors: &[usize],
) -> Option<Permutation> {
    for _ in 0..16 {
        let mut points: Vec<Point> = (1..=degree).collect();
        points.shuffle(rng);
        let mut cycles: Vec<Vec<Point>> = Vec::new();
        let mut rest = points.as_slice();
        while !rest.is_empty() {
            let feasible: Vec<usize> = divisors.iter().copied().filter(|&d| d <= rest.len()).collect();
            let len = feasible[rng.gen_range(0..feasible.len())];
            if len > 1 {
                cycles.push(rest[..len].to_vec());
            }
            rest = &rest[len..];
        }
        let y = Permutation::from_cycles(&cycles, degree).expect("disjoint by construction");
        if y.is_even() && !y.is_identity() {
            return Some(y);
        }
    }
    None
}
