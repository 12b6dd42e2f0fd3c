//! Exact arithmetic on finite permutations of `{1..degree}`.
//!
//! Everything acts on the right: `compose(g, h)` applies `g` first, then `h`,
//! so that `g.conjugate(&y)` computes `y⁻¹gy`. Points are 1-based throughout
//! the public API.

use std::fmt;

use thiserror::Error;

/// A point of the permutation domain, in `1..=degree`.
pub type Point = usize;

/// A cycle given as a list of distinct points. Canonical form (as emitted by
/// [`Permutation::cycles`]) rotates the minimum point to the front.
pub type Cycle = Vec<Point>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("point {point} occurs twice")]
    RepeatedPoint { point: Point },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: Point, degree: usize },
    #[error("images are not a bijection of 1..={degree}")]
    NotABijection { degree: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("bad cycle text: {0}")]
    BadCycleText(String),
}

/// A permutation of `{1..degree}`, stored as its image table:
/// `images[i]` is the (1-based) image of point `i + 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Point>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (1..=degree).collect(),
        }
    }

    /// Builds a permutation from its image table (1-based values).
    pub fn from_images(images: Vec<Point>) -> Result<Self, PermError> {
        let degree = images.len();
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; degree];
        for &img in &images {
            if img == 0 || img > degree {
                return Err(PermError::PointOutOfRange { point: img, degree });
            }
            if seen[img - 1] {
                return Err(PermError::NotABijection { degree });
            }
            seen[img - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// Product of pairwise disjoint cycles as a permutation of `{1..degree}`.
    /// Cycles may be given in any rotation; fixed points are simply omitted.
    pub fn from_cycles(cycles: &[Cycle], degree: usize) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut images: Vec<Point> = (1..=degree).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for (i, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt > degree {
                    return Err(PermError::PointOutOfRange { point: pt, degree });
                }
                if seen[pt - 1] {
                    return Err(PermError::RepeatedPoint { point: pt });
                }
                seen[pt - 1] = true;
                images[pt - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses the cycle text form and applies it at the given degree.
    pub fn from_cycle_text(text: &str, degree: usize) -> Result<Self, PermError> {
        let cycles = parse_cycle_text(text)?;
        Permutation::from_cycles(&cycles, degree)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of `point` under this permutation. Panics if `point` is outside
    /// `1..=degree`; validate untrusted points before calling.
    #[inline]
    pub fn apply(&self, point: Point) -> Point {
        self.images[point - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| img == i + 1)
    }

    /// `self` followed by `other` (right action). Panics on degree mismatch.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(
            self.degree(),
            other.degree(),
            "compose: degree mismatch ({} vs {})",
            self.degree(),
            other.degree()
        );
        Permutation {
            images: self.images.iter().map(|&m| other.images[m - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `self^n`; negative exponents go through the inverse.
    pub fn power(&self, n: i64) -> Permutation {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut exp = n.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            exp >>= 1;
        }
        acc
    }

    /// `other⁻¹ · self · other`.
    pub fn conjugate(&self, other: &Permutation) -> Permutation {
        other.inverse().compose(self).compose(other)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Disjoint cycles covering all moved points, each rotated minimum-first
    /// and the list sorted by minimum point. Fixed points are omitted.
    pub fn cycles(&self) -> Vec<Cycle> {
        let degree = self.degree();
        let mut done = vec![false; degree];
        let mut out = Vec::new();
        for start in 1..=degree {
            if done[start - 1] || self.apply(start) == start {
                done[start - 1] = true;
                continue;
            }
            let mut cycle = vec![start];
            done[start - 1] = true;
            let mut pt = self.apply(start);
            while pt != start {
                done[pt - 1] = true;
                cycle.push(pt);
                pt = self.apply(pt);
            }
            out.push(cycle);
        }
        out
    }

    /// Least `n ≥ 1` with `self^n = identity`: the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn fixed_points(&self) -> Vec<Point> {
        (1..=self.degree()).filter(|&p| self.apply(p) == p).collect()
    }

    /// Points moved by this permutation, ascending.
    pub fn support(&self) -> Vec<Point> {
        (1..=self.degree()).filter(|&p| self.apply(p) != p).collect()
    }

    pub fn min_moved_point(&self) -> Option<Point> {
        (1..=self.degree()).find(|&p| self.apply(p) != p)
    }

    /// Raw image table (1-based values).
    pub fn images(&self) -> &[Point] {
        &self.images
    }

    /// Embeds into a larger domain, shifting every point by `offset` and
    /// fixing `1..=offset` as well as anything past the shifted window.
    pub fn shift(&self, offset: usize, new_degree: usize) -> Permutation {
        assert!(offset + self.degree() <= new_degree, "shift: window out of range");
        let mut images: Vec<Point> = (1..=new_degree).collect();
        for (i, &img) in self.images.iter().enumerate() {
            images[offset + i] = img + offset;
        }
        Permutation { images }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Permutation {
    /// Cycle text form: `(1,2,3)(4,5)`, with `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, pt) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{pt}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses the cycle text form `(1,2,3)(4,5)` (or `()` for the identity) into
/// a raw cycle list. Syntax and positivity only; range and disjointness are
/// checked by [`Permutation::from_cycles`].
pub fn parse_cycle_text(text: &str) -> Result<Vec<Cycle>, PermError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(PermError::BadCycleText("empty input".into()));
    }
    if s == "()" {
        return Ok(Vec::new());
    }
    let mut cycles = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let Some(stripped) = rest.strip_prefix('(') else {
            return Err(PermError::BadCycleText(format!("expected '(' at {rest:?}")));
        };
        let Some(close) = stripped.find(')') else {
            return Err(PermError::BadCycleText("unclosed '('".into()));
        };
        let body = &stripped[..close];
        let mut cycle = Vec::new();
        for part in body.split(',') {
            let part = part.trim();
            let pt: usize = part
                .parse()
                .map_err(|_| PermError::BadCycleText(format!("bad point {part:?}")))?;
            if pt == 0 {
                return Err(PermError::BadCycleText("points are 1-based".into()));
            }
            cycle.push(pt);
        }
        if cycle.len() < 2 {
            return Err(PermError::BadCycleText(format!(
                "cycle ({body}) has fewer than two points"
            )));
        }
        cycles.push(cycle);
        rest = &stripped[close + 1..];
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(cycles: &[&[Point]], degree: usize) -> Permutation {
        let cycles: Vec<Cycle> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(&cycles, degree).unwrap()
    }

    #[test]
    fn from_cycles_identity() {
        let id = Permutation::from_cycles(&[], 3).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.images(), &[1, 2, 3]);
    }

    #[test]
    fn from_cycles_transposition() {
        let g = perm(&[&[1, 2]], 2);
        assert_eq!(g.images(), &[2, 1]);
    }

    #[test]
    fn from_cycles_two_cycles() {
        // applying each cycle point by point gives [2,3,1,5,4]
        let g = perm(&[&[1, 2, 3], &[4, 5]], 5);
        assert_eq!(g.images(), &[2, 3, 1, 5, 4]);
    }

    #[test]
    fn from_cycles_rejects_repeats_and_range() {
        assert_eq!(
            Permutation::from_cycles(&[vec![1, 2], vec![2, 3]], 3),
            Err(PermError::RepeatedPoint { point: 2 })
        );
        assert_eq!(
            Permutation::from_cycles(&[vec![1, 4]], 3),
            Err(PermError::PointOutOfRange { point: 4, degree: 3 })
        );
    }

    #[test]
    fn compose_applies_left_then_right() {
        let swap = perm(&[&[1, 2]], 2);
        assert!(swap.compose(&swap).is_identity());

        // (1 2 3) then (1 2): chase points by hand -> (2 3)
        let a = perm(&[&[1, 2, 3]], 3);
        let b = perm(&[&[1, 2]], 3);
        assert_eq!(a.compose(&b), perm(&[&[2, 3]], 3));

        let id = Permutation::identity(3);
        assert_eq!(id.compose(&a), a);
    }

    #[test]
    fn inverse_and_power() {
        let c = perm(&[&[1, 2, 3]], 3);
        assert_eq!(c.inverse(), perm(&[&[1, 3, 2]], 3));
        assert!(c.compose(&c.inverse()).is_identity());

        let swap = perm(&[&[1, 2]], 2);
        assert!(swap.power(2).is_identity());
        assert!(swap.power(0).is_identity());
        assert_eq!(c.power(-1), c.inverse());
        assert_eq!(c.power(5), c.power(2));
    }

    #[test]
    fn apply_reads_cycles() {
        let c = perm(&[&[1, 2, 3]], 3);
        assert_eq!(c.apply(3), 1);
        assert_eq!(c.apply(1), 2);
    }

    #[test]
    fn cycle_decomposition_examples() {
        assert!(Permutation::identity(4).cycles().is_empty());
        let g = Permutation::from_images(vec![2, 1, 4, 3]).unwrap();
        assert_eq!(g.cycles(), vec![vec![1, 2], vec![3, 4]]);
        let h = Permutation::from_images(vec![2, 3, 1, 5, 4]).unwrap();
        assert_eq!(h.cycles(), vec![vec![1, 2, 3], vec![4, 5]]);
    }

    // Oracle for order: repeated multiplication until the identity comes back.
    fn order_by_multiplication(g: &Permutation) -> u64 {
        let mut acc = g.clone();
        let mut n = 1;
        while !acc.is_identity() {
            acc = acc.compose(g);
            n += 1;
        }
        n
    }

    #[test]
    fn order_matches_multiplication_oracle() {
        assert_eq!(Permutation::identity(5).order(), 1);
        let g = perm(&[&[1, 2], &[3, 4, 5]], 5);
        assert_eq!(g.order(), 6);
        assert_eq!(order_by_multiplication(&g), 6);
        let c5 = perm(&[&[1, 2, 3, 4, 5]], 5);
        assert_eq!(c5.order(), 5);
        assert_eq!(order_by_multiplication(&c5), 5);
    }

    #[test]
    fn parity_and_fixed_points() {
        assert_eq!(Permutation::identity(3).parity(), Parity::Even);
        assert_eq!(perm(&[&[1, 2]], 2).parity(), Parity::Odd);
        assert_eq!(perm(&[&[1, 2]], 4).fixed_points(), vec![3, 4]);
    }

    #[test]
    fn shift_moves_window() {
        let y = perm(&[&[1, 2]], 2);
        let shifted = y.shift(2, 4);
        assert_eq!(shifted, perm(&[&[3, 4]], 4));
        assert_eq!(y.shift(0, 2), y);
    }

    #[test]
    fn cycle_text_round_trip() {
        let g = perm(&[&[1, 2, 3], &[4, 5]], 5);
        assert_eq!(g.to_string(), "(1,2,3)(4,5)");
        assert_eq!(Permutation::from_cycle_text("(1,2,3)(4,5)", 5).unwrap(), g);
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(
            Permutation::from_cycle_text("()", 3).unwrap(),
            Permutation::identity(3)
        );
    }

    #[test]
    fn cycle_text_rejects_garbage() {
        assert!(parse_cycle_text("").is_err());
        assert!(parse_cycle_text("(1,2").is_err());
        assert!(parse_cycle_text("(1)").is_err());
        assert!(parse_cycle_text("(0,1)").is_err());
        assert!(parse_cycle_text("1,2").is_err());
        assert!(parse_cycle_text("(1,x)").is_err());
    }

    fn arb_perm(degree: usize) -> impl Strategy<Value = Permutation> {
        Just((1..=degree).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|images| Permutation::from_images(images).unwrap())
    }

    proptest! {
        #[test]
        fn cycles_round_trip(g in arb_perm(9)) {
            let back = Permutation::from_cycles(&g.cycles(), g.degree()).unwrap();
            prop_assert_eq!(back, g);
        }

        #[test]
        fn compose_associative(a in arb_perm(7), b in arb_perm(7), c in arb_perm(7)) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn inverse_antihomomorphism(a in arb_perm(7), b in arb_perm(7)) {
            prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
        }

        #[test]
        fn parity_is_a_homomorphism(a in arb_perm(8), b in arb_perm(8)) {
            let lhs = a.compose(&b).is_even();
            let rhs = a.is_even() == b.is_even();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn display_parse_round_trip(g in arb_perm(11)) {
            let text = g.to_string();
            prop_assert_eq!(Permutation::from_cycle_text(&text, 11).unwrap(), g);
        }
    }
}
