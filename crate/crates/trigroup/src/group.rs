//! Permutation-group algorithms: orbits, a deterministic Schreier–Sims
//! stabilizer chain (exact order and membership), block systems, block
//! actions with their kernels, and small recognition predicates.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::perm::{Permutation, Point};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: Point, degree: usize },
    #[error("generator degree {found} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("the group is not transitive")]
    NotTransitive,
    #[error("the given partition is not a block system for the group")]
    NotABlockSystem,
    #[error("cells do not partition 1..={degree} into equal parts")]
    BadPartition { degree: usize },
    #[error("seed points must be distinct")]
    EqualSeedPoints,
}

/// A permutation group given by generators on `{1..degree}`. Identity
/// generators are stripped on construction; no generators means the trivial
/// group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedGroup {
    degree: usize,
    generators: Vec<Permutation>,
}

impl GeneratedGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        let mut gens = Vec::new();
        for g in generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(GeneratedGroup {
            degree,
            generators: gens,
        })
    }

    pub fn trivial(degree: usize) -> Self {
        GeneratedGroup {
            degree,
            generators: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Orbit of `point` with a Schreier transversal: for each orbit point ω
    /// the witness u satisfies `point^u = ω`.
    pub fn orbit(&self, point: Point) -> Result<Orbit, GroupError> {
        if point == 0 || point > self.degree {
            return Err(GroupError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        Ok(Orbit::new(self.degree, &self.generators, point))
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 1 || self.orbit(1).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// All orbits, each sorted ascending, ordered by minimum point.
    pub fn orbits(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 1..=self.degree {
            if seen[p - 1] {
                continue;
            }
            let mut orbit = self.orbit(p).expect("point in range").sorted_points();
            for &q in &orbit {
                seen[q - 1] = true;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Breadth-first closure of the generators, or `None` once more than
    /// `cap` elements appear. Includes the identity.
    pub fn enumerate_elements(&self, cap: usize) -> Option<Vec<Permutation>> {
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut elements = vec![Permutation::identity(self.degree)];
        seen.insert(elements[0].clone());
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(idx) = queue.pop_front() {
            let current = elements[idx].clone();
            for g in &self.generators {
                let next = current.compose(g);
                if seen.insert(next.clone()) {
                    if elements.len() >= cap {
                        return None;
                    }
                    elements.push(next);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        Some(elements)
    }

    /// True iff all generator pairs commute, every generator has order `p`,
    /// and the group order is a power of `p`. The trivial group passes
    /// vacuously.
    pub fn is_elementary_abelian(&self, p: u64) -> bool {
        for (i, a) in self.generators.iter().enumerate() {
            if a.order() != p {
                return false;
            }
            for b in &self.generators[i + 1..] {
                if !a.commutes_with(b) {
                    return false;
                }
            }
        }
        let mut order = self.bsgs().order();
        let big_p = BigUint::from(p);
        while order > BigUint::one() {
            if &order % &big_p != BigUint::ZERO {
                return false;
            }
            order /= &big_p;
        }
        true
    }

    /// Order + parity recognition of the full alternating group in its
    /// natural action; degrees below 3 report false.
    pub fn is_alternating(&self) -> bool {
        self.degree >= 3
            && self.generators.iter().all(|g| g.is_even())
            && self.bsgs().order() == alternating_order(self.degree)
    }

    pub fn is_symmetric(&self) -> bool {
        self.bsgs().order() == factorial(self.degree)
    }

    pub fn bsgs(&self) -> Bsgs {
        Bsgs::build(self)
    }

    /// Stabilizer chain whose base starts with the given points (in order,
    /// including redundant ones); used to compute pointwise stabilizers.
    pub fn bsgs_with_base(&self, base_prefix: &[Point]) -> Bsgs {
        Bsgs::build_with_base(self, base_prefix)
    }

    /// Finest block system in which `a` and `b` share a cell (union-find
    /// congruence closure over the seed pair). The trivial one-cell system
    /// comes back when no proper system joins them.
    pub fn minimal_block(&self, a: Point, b: Point) -> Result<BlockSystem, GroupError> {
        for &p in &[a, b] {
            if p == 0 || p > self.degree {
                return Err(GroupError::PointOutOfRange {
                    point: p,
                    degree: self.degree,
                });
            }
        }
        if a == b {
            return Err(GroupError::EqualSeedPoints);
        }
        if !self.is_transitive() {
            return Err(GroupError::NotTransitive);
        }
        let mut dsu = Dsu::new(self.degree);
        dsu.union(a, b);
        let mut queue = VecDeque::from([(a, b)]);
        while let Some((c, d)) = queue.pop_front() {
            for g in &self.generators {
                let (c2, d2) = (g.apply(c), g.apply(d));
                if dsu.union(c2, d2) {
                    queue.push_back((c2, d2));
                }
            }
        }
        let cells = dsu.classes();
        BlockSystem::from_cells(self.degree, cells)
    }

    /// True iff only the trivial block systems exist. Requires transitivity.
    pub fn is_primitive(&self) -> Result<bool, GroupError> {
        if !self.is_transitive() {
            return Err(GroupError::NotTransitive);
        }
        for b in 2..=self.degree {
            if self.minimal_block(1, b)?.cell_count() > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff every generator maps every cell of `blocks` onto a cell.
    pub fn preserves_blocks(&self, blocks: &BlockSystem) -> bool {
        if blocks.degree != self.degree {
            return false;
        }
        self.generators
            .iter()
            .all(|g| blocks.cells().iter().all(|cell| {
                let target = blocks.cell_index_of(g.apply(cell[0]));
                cell.iter().all(|&p| blocks.cell_index_of(g.apply(p)) == target)
            }))
    }

    /// True iff the subset `x` is a block: its set-orbit under the group is
    /// pairwise equal-or-disjoint.
    pub fn is_block(&self, x: &[Point]) -> bool {
        let mut base: Vec<Point> = x.to_vec();
        base.sort_unstable();
        base.dedup();
        let mut seen = vec![base.clone()];
        let mut queue = VecDeque::from([base.clone()]);
        while let Some(current) = queue.pop_front() {
            for g in &self.generators {
                let mut image: Vec<Point> = current.iter().map(|&p| g.apply(p)).collect();
                image.sort_unstable();
                if seen.contains(&image) {
                    continue;
                }
                let overlap = image.iter().any(|p| base.binary_search(p).is_ok());
                if overlap && image != base {
                    return false;
                }
                seen.push(image.clone());
                queue.push_back(image);
            }
        }
        true
    }

    /// Action on the cells of a verified block system: the quotient group on
    /// cell indices, the kernel of that action, and Schreier generators for
    /// each setwise cell stabilizer J_i.
    pub fn block_action(&self, blocks: &BlockSystem) -> Result<BlockActionData, GroupError> {
        if !self.preserves_blocks(blocks) {
            return Err(GroupError::NotABlockSystem);
        }
        let m = blocks.cell_count();
        let quotient_gens: Vec<Permutation> = self
            .generators
            .iter()
            .map(|g| blocks.induced_cell_permutation(g))
            .collect();
        let quotient = GeneratedGroup::new(m, quotient_gens.clone())?;

        // Kernel of the cell action: run the chain on the disjoint union of
        // points and cells, stabilizing every cell coordinate first. The
        // strong generators past that prefix fix all cells setwise.
        let n = self.degree;
        let extended: Vec<Permutation> = self
            .generators
            .iter()
            .zip(&quotient_gens)
            .map(|(g, q)| extend_with_cells(g, q, n, m))
            .collect();
        let ext_group = GeneratedGroup::new(n + m, extended)?;
        let cell_base: Vec<Point> = (n + 1..=n + m).collect();
        let chain = ext_group.bsgs_with_base(&cell_base);
        let kernel_gens: Vec<Permutation> = chain
            .strong_generators_fixing_prefix(m)
            .iter()
            .map(|g| restrict_to_prefix(g, n))
            .collect();
        let kernel = GeneratedGroup::new(n, kernel_gens)?;

        // Schreier generators of each setwise stabilizer J_i, from the orbit
        // of cell i in the quotient action with witnesses carried in the
        // original degree.
        let mut block_stabilizer_gens = Vec::with_capacity(m);
        for cell in 1..=m {
            block_stabilizer_gens.push(self.cell_stabilizer_schreier_gens(
                &quotient_gens,
                cell,
                m,
            ));
        }

        Ok(BlockActionData {
            quotient,
            kernel,
            block_stabilizer_schreier_gens: block_stabilizer_gens,
        })
    }

    fn cell_stabilizer_schreier_gens(
        &self,
        quotient_gens: &[Permutation],
        cell: usize,
        m: usize,
    ) -> Vec<Permutation> {
        let mut witness: Vec<Option<Permutation>> = vec![None; m];
        witness[cell - 1] = Some(Permutation::identity(self.degree));
        let mut order = vec![cell];
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            let u = witness[c - 1].clone().expect("visited");
            for (g, q) in self.generators.iter().zip(quotient_gens) {
                let c2 = q.apply(c);
                if witness[c2 - 1].is_none() {
                    witness[c2 - 1] = Some(u.compose(g));
                    order.push(c2);
                }
            }
        }
        let mut gens = Vec::new();
        for &c in &order {
            let u = witness[c - 1].as_ref().expect("in orbit");
            for (g, q) in self.generators.iter().zip(quotient_gens) {
                let c2 = q.apply(c);
                let v = witness[c2 - 1].as_ref().expect("in orbit");
                let schreier = u.compose(g).compose(&v.inverse());
                if !schreier.is_identity() && !gens.contains(&schreier) {
                    gens.push(schreier);
                }
            }
        }
        gens
    }
}

fn extend_with_cells(g: &Permutation, q: &Permutation, n: usize, m: usize) -> Permutation {
    let mut images: Vec<Point> = Vec::with_capacity(n + m);
    images.extend(g.images());
    images.extend(q.images().iter().map(|&c| n + c));
    Permutation::from_images(images).expect("extension is a bijection")
}

fn restrict_to_prefix(g: &Permutation, n: usize) -> Permutation {
    Permutation::from_images(g.images()[..n].to_vec()).expect("prefix is a bijection")
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

/// `n!/2`, the order of the alternating group of degree `n ≥ 2`.
pub fn alternating_order(n: usize) -> BigUint {
    factorial(n) / BigUint::from(2u32)
}

/// An orbit with its Schreier transversal.
#[derive(Clone, Debug)]
pub struct Orbit {
    point: Point,
    order: Vec<Point>,
    witness: Vec<Option<Permutation>>,
}

impl Orbit {
    fn new(degree: usize, gens: &[Permutation], point: Point) -> Orbit {
        let mut witness: Vec<Option<Permutation>> = vec![None; degree];
        witness[point - 1] = Some(Permutation::identity(degree));
        let mut order = vec![point];
        let mut head = 0;
        while head < order.len() {
            let p = order[head];
            head += 1;
            let u = witness[p - 1].clone().expect("visited");
            for g in gens {
                let q = g.apply(p);
                if witness[q - 1].is_none() {
                    witness[q - 1] = Some(u.compose(g));
                    order.push(q);
                }
            }
        }
        Orbit { point, order, witness }
    }

    pub fn base_point(&self) -> Point {
        self.point
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: Point) -> bool {
        self.witness.get(p - 1).map(|w| w.is_some()).unwrap_or(false)
    }

    /// Points in breadth-first discovery order.
    pub fn points(&self) -> &[Point] {
        &self.order
    }

    pub fn sorted_points(&self) -> Vec<Point> {
        let mut pts = self.order.clone();
        pts.sort_unstable();
        pts
    }

    /// Witness u with `base^u = p`, when `p` lies in the orbit.
    pub fn witness(&self, p: Point) -> Option<&Permutation> {
        self.witness.get(p - 1).and_then(|w| w.as_ref())
    }
}

/// A partition of `{1..degree}` into equal-size cells, sorted by minimum
/// point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    degree: usize,
    cells: Vec<Vec<Point>>,
    cell_of: Vec<usize>,
}

impl BlockSystem {
    pub fn from_cells(degree: usize, mut cells: Vec<Vec<Point>>) -> Result<Self, GroupError> {
        for cell in &mut cells {
            cell.sort_unstable();
        }
        cells.sort_by_key(|c| c.first().copied().unwrap_or(0));
        let mut cell_of = vec![usize::MAX; degree];
        let size = cells.first().map(|c| c.len()).unwrap_or(0);
        for (idx, cell) in cells.iter().enumerate() {
            if cell.len() != size || cell.is_empty() {
                return Err(GroupError::BadPartition { degree });
            }
            for &p in cell {
                if p == 0 || p > degree || cell_of[p - 1] != usize::MAX {
                    return Err(GroupError::BadPartition { degree });
                }
                cell_of[p - 1] = idx;
            }
        }
        if cell_of.iter().any(|&c| c == usize::MAX) {
            return Err(GroupError::BadPartition { degree });
        }
        Ok(BlockSystem { degree, cells, cell_of })
    }

    pub fn singletons(degree: usize) -> Self {
        BlockSystem::from_cells(degree, (1..=degree).map(|p| vec![p]).collect())
            .expect("singletons partition")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cells(&self) -> &[Vec<Point>] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_size(&self) -> usize {
        self.cells.first().map(|c| c.len()).unwrap_or(0)
    }

    /// 1-based index of the cell containing `point`.
    pub fn cell_index_of(&self, point: Point) -> usize {
        self.cell_of[point - 1] + 1
    }

    pub fn is_trivial(&self) -> bool {
        self.cell_count() == 1 || self.cell_size() == 1
    }

    /// The permutation a group element induces on cell indices. The caller
    /// must know that `g` preserves the system.
    pub fn induced_cell_permutation(&self, g: &Permutation) -> Permutation {
        let images: Vec<Point> = self
            .cells
            .iter()
            .map(|cell| self.cell_index_of(g.apply(cell[0])))
            .collect();
        Permutation::from_images(images).expect("cell action is a bijection")
    }

    /// Relabels the points of one cell as `1..=cell_size` (ascending order)
    /// and restricts `g` to it. The caller must know `g` fixes the cell
    /// setwise.
    pub fn restrict_to_cell(&self, g: &Permutation, cell_index: usize) -> Permutation {
        let cell = &self.cells[cell_index - 1];
        let images: Vec<Point> = cell
            .iter()
            .map(|&p| {
                let img = g.apply(p);
                cell.binary_search(&img).expect("cell fixed setwise") + 1
            })
            .collect();
        Permutation::from_images(images).expect("restriction is a bijection")
    }
}

/// Result of [`GeneratedGroup::block_action`].
#[derive(Clone, Debug)]
pub struct BlockActionData {
    /// The induced action ψ on cell indices.
    pub quotient: GeneratedGroup,
    /// Kernel of ψ, on the original points.
    pub kernel: GeneratedGroup,
    /// Schreier generators of the setwise stabilizer of each cell.
    pub block_stabilizer_schreier_gens: Vec<Vec<Permutation>>,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, p: Point) -> usize {
        let mut i = p - 1;
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Merges the classes of two points; true iff they were distinct.
    fn union(&mut self, a: Point, b: Point) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn classes(&mut self) -> Vec<Vec<Point>> {
        let n = self.parent.len();
        let mut cells: Vec<Vec<Point>> = vec![Vec::new(); n];
        for p in 1..=n {
            let r = self.find(p);
            cells[r].push(p);
        }
        cells.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

/// Base and strong generating set built by a deterministic Schreier–Sims
/// run. Base points are chosen as the smallest moved point whenever the
/// chain needs to grow, so repeated runs agree exactly.
#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    levels: Vec<BsgsLevel>,
}

#[derive(Clone, Debug)]
struct BsgsLevel {
    base_point: Point,
    gens: Vec<Permutation>,
    orbit: Vec<Point>,
    transversal: Vec<Option<Permutation>>,
}

impl BsgsLevel {
    fn new(degree: usize, base_point: Point) -> BsgsLevel {
        let mut level = BsgsLevel {
            base_point,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        level.recompute_orbit(degree);
        level
    }

    fn recompute_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.base_point - 1] = Some(Permutation::identity(degree));
        self.orbit = vec![self.base_point];
        let mut head = 0;
        while head < self.orbit.len() {
            let p = self.orbit[head];
            head += 1;
            let u = self.transversal[p - 1].clone().expect("visited");
            for g in &self.gens {
                let q = g.apply(p);
                if self.transversal[q - 1].is_none() {
                    self.transversal[q - 1] = Some(u.compose(g));
                    self.orbit.push(q);
                }
            }
        }
    }
}

impl Bsgs {
    pub fn build(group: &GeneratedGroup) -> Bsgs {
        Bsgs::build_with_base(group, &[])
    }

    pub fn build_with_base(group: &GeneratedGroup, base_prefix: &[Point]) -> Bsgs {
        let degree = group.degree();
        let mut chain = Bsgs {
            degree,
            levels: base_prefix
                .iter()
                .map(|&b| BsgsLevel::new(degree, b))
                .collect(),
        };
        for g in group.generators() {
            chain.insert_generator(g.clone());
        }
        chain.complete();
        chain
    }

    fn base_points(&self) -> Vec<Point> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Adds a strong generator to every level whose base prefix it fixes,
    /// extending the base if it fixes all current base points.
    fn insert_generator(&mut self, g: Permutation) {
        if !g.is_identity() {
            self.insert_residue(g, 0);
        }
    }

    /// Adds a residue known to fix base[0..from]; it joins the generator set
    /// of every level from `from` down to where it stops fixing base points.
    fn insert_residue(&mut self, g: Permutation, from: usize) -> usize {
        debug_assert!(!g.is_identity());
        let mut last = from;
        while last < self.levels.len() && g.apply(self.levels[last].base_point) == self.levels[last].base_point
        {
            last += 1;
        }
        if last == self.levels.len() {
            let b = g.min_moved_point().expect("non-identity moves a point");
            self.levels.push(BsgsLevel::new(self.degree, b));
        }
        for i in from..=last {
            if !self.levels[i].gens.contains(&g) {
                self.levels[i].gens.push(g.clone());
                self.levels[i].recompute_orbit(self.degree);
            }
        }
        last
    }

    /// Bottom-up verification pass: sift every Schreier generator of every
    /// level; any non-trivial residue becomes a new strong generator of
    /// every level below the one being verified, down to where it sifted
    /// out, and verification restarts there.
    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            match self.verify_level(i as usize) {
                None => i -= 1,
                Some(residue) => {
                    let landed = self.insert_residue(residue, i as usize + 1);
                    i = landed as isize;
                }
            }
        }
    }

    fn verify_level(&self, level: usize) -> Option<Permutation> {
        let lvl = &self.levels[level];
        for &p in &lvl.orbit {
            let u = lvl.transversal[p - 1].as_ref().expect("orbit point");
            for g in &lvl.gens {
                let q = g.apply(p);
                let v = lvl.transversal[q - 1].as_ref().expect("orbit closed");
                let schreier = u.compose(g).compose(&v.inverse());
                if schreier.is_identity() {
                    continue;
                }
                let (residue, _) = self.strip(schreier, level + 1);
                if !residue.is_identity() {
                    return Some(residue);
                }
            }
        }
        None
    }

    /// Sifts `g` through levels `from..`, returning the residue and the
    /// level index at which sifting stopped.
    fn strip(&self, g: Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g;
        for i in from..self.levels.len() {
            let img = h.apply(self.levels[i].base_point);
            match &self.levels[i].transversal[img - 1] {
                None => return (h, i),
                Some(t) => h = h.compose(&t.inverse()),
            }
        }
        (h, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<Point> {
        self.base_points()
    }

    /// Exact group order: the product of the basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .map(|l| BigUint::from(l.orbit.len() as u64))
            .fold(BigUint::one(), |a, b| a * b)
    }

    /// Membership by sifting. Panics on degree mismatch.
    pub fn contains(&self, g: &Permutation) -> bool {
        assert_eq!(
            g.degree(),
            self.degree,
            "contains: degree mismatch ({} vs {})",
            g.degree(),
            self.degree
        );
        let (residue, stuck) = self.strip(g.clone(), 0);
        stuck == self.levels.len() && residue.is_identity()
    }

    /// Strong generators fixing the first `prefix_len` base points, i.e.
    /// generators of the pointwise stabilizer of that base prefix.
    pub fn strong_generators_fixing_prefix(&self, prefix_len: usize) -> Vec<Permutation> {
        if prefix_len >= self.levels.len() {
            return Vec::new();
        }
        self.levels[prefix_len].gens.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Cycle;

    fn perm(cycles: &[&[Point]], degree: usize) -> Permutation {
        let cycles: Vec<Cycle> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(&cycles, degree).unwrap()
    }

    fn group(degree: usize, gens: &[Permutation]) -> GeneratedGroup {
        GeneratedGroup::new(degree, gens.to_vec()).unwrap()
    }

    fn klein_composition() -> GeneratedGroup {
        group(4, &[perm(&[&[1, 3], &[2, 4]], 4), perm(&[&[1, 2], &[3, 4]], 4)])
    }

    #[test]
    fn orbit_examples() {
        let trivial = GeneratedGroup::trivial(3);
        assert_eq!(trivial.orbit(1).unwrap().sorted_points(), vec![1]);

        let klein = klein_composition();
        assert_eq!(klein.orbit(1).unwrap().sorted_points(), vec![1, 2, 3, 4]);

        let g = group(3, &[perm(&[&[1, 2]], 3)]);
        assert_eq!(g.orbit(3).unwrap().sorted_points(), vec![3]);
        assert!(g.orbit(4).is_err());
    }

    #[test]
    fn orbit_witnesses_reach_their_points() {
        let klein = klein_composition();
        let orbit = klein.orbit(1).unwrap();
        for &p in orbit.points() {
            let u = orbit.witness(p).unwrap();
            assert_eq!(u.apply(1), p);
        }
    }

    #[test]
    fn transitivity_examples() {
        assert!(group(3, &[perm(&[&[1, 2, 3]], 3)]).is_transitive());
        assert!(!group(3, &[perm(&[&[1, 2]], 3)]).is_transitive());
        assert!(klein_composition().is_transitive());
    }

    #[test]
    fn bsgs_small_orders() {
        let s3 = group(3, &[perm(&[&[1, 2]], 3), perm(&[&[1, 2, 3]], 3)]);
        assert_eq!(s3.bsgs().order(), BigUint::from(6u32));

        assert_eq!(GeneratedGroup::trivial(4).bsgs().order(), BigUint::from(1u32));

        let a5 = group(5, &[perm(&[&[1, 2, 3, 4, 5]], 5), perm(&[&[3, 4, 5]], 5)]);
        assert_eq!(a5.bsgs().order(), BigUint::from(60u32));
    }

    #[test]
    fn bsgs_membership() {
        let a5 = group(5, &[perm(&[&[1, 2, 3, 4, 5]], 5), perm(&[&[3, 4, 5]], 5)]);
        let chain = a5.bsgs();
        assert!(!chain.contains(&perm(&[&[1, 2]], 5)));
        assert!(chain.contains(&Permutation::identity(5)));
        assert!(chain.contains(&perm(&[&[1, 3, 5]], 5)));

        let klein = klein_composition().bsgs();
        assert!(klein.contains(&perm(&[&[1, 4], &[2, 3]], 4)));
        assert!(klein.contains(&Permutation::identity(4)));
        assert!(!klein.contains(&perm(&[&[1, 2]], 4)));
    }

    #[test]
    fn bsgs_matches_closure_on_small_groups() {
        let cases = vec![
            group(4, &[perm(&[&[1, 2, 3, 4]], 4)]),
            group(4, &[perm(&[&[1, 2, 3]], 4), perm(&[&[2, 3, 4]], 4)]),
            group(5, &[perm(&[&[1, 2]], 5), perm(&[&[1, 2, 3, 4, 5]], 5)]),
            klein_composition(),
        ];
        for g in cases {
            let elements = g.enumerate_elements(100_000).unwrap();
            assert_eq!(g.bsgs().order(), BigUint::from(elements.len() as u64));
        }
    }

    #[test]
    fn element_order_divides_group_order() {
        let s4 = group(4, &[perm(&[&[1, 2]], 4), perm(&[&[1, 2, 3, 4]], 4)]);
        let order = s4.bsgs().order();
        for el in s4.enumerate_elements(100).unwrap() {
            assert_eq!(&order % BigUint::from(el.order()), BigUint::ZERO);
        }
    }

    #[test]
    fn bsgs_with_prescribed_base_keeps_order() {
        let s4 = group(4, &[perm(&[&[1, 2]], 4), perm(&[&[1, 2, 3, 4]], 4)]);
        let chain = s4.bsgs_with_base(&[3, 1]);
        assert_eq!(chain.order(), BigUint::from(24u32));
        assert_eq!(&chain.base()[..2], &[3, 1]);
    }

    #[test]
    fn minimal_block_examples() {
        let klein = klein_composition();
        let blocks = klein.minimal_block(1, 3).unwrap();
        assert_eq!(blocks.cells(), &[vec![1, 3], vec![2, 4]]);

        let c4 = group(4, &[perm(&[&[1, 2, 3, 4]], 4)]);
        let blocks = c4.minimal_block(1, 3).unwrap();
        assert_eq!(blocks.cells(), &[vec![1, 3], vec![2, 4]]);

        let a4 = group(4, &[perm(&[&[1, 2, 3]], 4), perm(&[&[2, 3, 4]], 4)]);
        let blocks = a4.minimal_block(1, 2).unwrap();
        assert_eq!(blocks.cell_count(), 1);
    }

    #[test]
    fn minimal_block_rejects_bad_input() {
        let g = group(3, &[perm(&[&[1, 2]], 3)]);
        assert_eq!(g.minimal_block(1, 2), Err(GroupError::NotTransitive));
        let c3 = group(3, &[perm(&[&[1, 2, 3]], 3)]);
        assert_eq!(c3.minimal_block(2, 2), Err(GroupError::EqualSeedPoints));
    }

    #[test]
    fn primitivity_examples() {
        let a5 = group(5, &[perm(&[&[1, 2, 3, 4, 5]], 5), perm(&[&[3, 4, 5]], 5)]);
        assert!(a5.is_primitive().unwrap());
        let c4 = group(4, &[perm(&[&[1, 2, 3, 4]], 4)]);
        assert!(!c4.is_primitive().unwrap());
        assert!(GeneratedGroup::trivial(1).is_primitive().unwrap());
    }

    #[test]
    fn block_action_on_klein_composition() {
        let klein = klein_composition();
        let blocks = BlockSystem::from_cells(4, vec![vec![1, 3], vec![2, 4]]).unwrap();
        let data = klein.block_action(&blocks).unwrap();
        assert_eq!(data.quotient.bsgs().order(), BigUint::from(2u32));
        assert_eq!(data.kernel.bsgs().order(), BigUint::from(2u32));
        assert_eq!(data.kernel.generators(), &[perm(&[&[1, 3], &[2, 4]], 4)]);
        // J_1 has index |cell orbit| = 2 in the group of order 4
        let j1 = GeneratedGroup::new(4, data.block_stabilizer_schreier_gens[0].clone()).unwrap();
        assert_eq!(j1.bsgs().order(), BigUint::from(2u32));
    }

    #[test]
    fn block_action_trivial_cases() {
        let klein = klein_composition();
        let singles = BlockSystem::singletons(4);
        let data = klein.block_action(&singles).unwrap();
        assert_eq!(data.quotient.bsgs().order(), klein.bsgs().order());
        assert_eq!(data.kernel.bsgs().order(), BigUint::from(1u32));

        let one_cell = BlockSystem::from_cells(4, vec![vec![1, 2, 3, 4]]).unwrap();
        let data = klein.block_action(&one_cell).unwrap();
        assert_eq!(data.quotient.bsgs().order(), BigUint::from(1u32));
        assert_eq!(data.kernel.bsgs().order(), klein.bsgs().order());
    }

    #[test]
    fn block_action_rejects_non_blocks() {
        let a4 = group(4, &[perm(&[&[1, 2, 3]], 4), perm(&[&[2, 3, 4]], 4)]);
        let not_blocks = BlockSystem::from_cells(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert!(matches!(
            a4.block_action(&not_blocks),
            Err(GroupError::NotABlockSystem)
        ));
    }

    #[test]
    fn recognition_examples() {
        let a4 = group(4, &[perm(&[&[1, 2, 3]], 4), perm(&[&[2, 3, 4]], 4)]);
        assert!(a4.is_alternating());
        assert!(!group(2, &[perm(&[&[1, 2]], 2)]).is_alternating());
        assert!(!GeneratedGroup::trivial(5).is_alternating());

        let s4 = group(4, &[perm(&[&[1, 2]], 4), perm(&[&[1, 2, 3, 4]], 4)]);
        assert!(s4.is_symmetric());
        assert!(!a4.is_symmetric());
    }

    #[test]
    fn elementary_abelian_examples() {
        assert!(group(4, &[perm(&[&[1, 3], &[2, 4]], 4)]).is_elementary_abelian(2));
        assert!(!group(3, &[perm(&[&[1, 2, 3]], 3)]).is_elementary_abelian(2));
        let klein = group(
            4,
            &[perm(&[&[1, 2], &[3, 4]], 4), perm(&[&[1, 3], &[2, 4]], 4)],
        );
        assert!(klein.is_elementary_abelian(2));
        assert_eq!(klein.bsgs().order(), BigUint::from(4u32));
        assert!(GeneratedGroup::trivial(4).is_elementary_abelian(2));
    }

    #[test]
    fn is_block_detects_overlap() {
        let c4 = group(4, &[perm(&[&[1, 2, 3, 4]], 4)]);
        assert!(c4.is_block(&[1, 3]));
        assert!(!c4.is_block(&[1, 2]));
        assert!(c4.is_block(&[1, 2, 3, 4]));
        assert!(c4.is_block(&[2]));
    }
}
