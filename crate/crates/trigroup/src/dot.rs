//! DOT export of coset diagrams: one vertex per point, directed edges for
//! the x- and y-images styled distinctly. A 2-cycle is drawn as a single
//! double-headed edge; fixed points are annotated on the vertex label
//! instead of drawing self-loops.

use crate::perm::Permutation;
use crate::triangle::Representation;

pub fn dot_export(rep: &Representation) -> String {
    let mut out = String::from("digraph coset_diagram {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    for point in 1..=rep.degree() {
        let mut fixed_by = Vec::new();
        if rep.x().apply(point) == point {
            fixed_by.push("x");
        }
        if rep.y().apply(point) == point {
            fixed_by.push("y");
        }
        if fixed_by.is_empty() {
            out.push_str(&format!("  {point};\n"));
        } else {
            out.push_str(&format!(
                "  {point} [label=\"{point} [{}]\"];\n",
                fixed_by.join(",")
            ));
        }
    }
    edges(&mut out, rep.x(), "x", "color=black");
    edges(&mut out, rep.y(), "y", "color=gray50, style=dashed");
    out.push_str("}\n");
    out
}

fn edges(out: &mut String, g: &Permutation, label: &str, style: &str) {
    for point in 1..=g.degree() {
        let image = g.apply(point);
        if image == point {
            continue;
        }
        if g.apply(image) == point {
            // involution pair: one double-headed edge
            if point < image {
                out.push_str(&format!(
                    "  {point} -> {image} [label=\"{label}\", {style}, dir=both];\n"
                ));
            }
        } else {
            out.push_str(&format!(
                "  {point} -> {image} [label=\"{label}\", {style}];\n"
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{Cycle, Point};
    use crate::triangle::TrianglePresentation;

    fn perm(cycles: &[&[Point]], degree: usize) -> Permutation {
        let cycles: Vec<Cycle> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(&cycles, degree).unwrap()
    }

    fn edge_count(dot: &str) -> usize {
        dot.matches(" -> ").count()
    }

    #[test]
    fn trivial_rep_is_one_annotated_vertex() {
        let rep = Representation::new(
            TrianglePresentation::new(2, 2, 2).unwrap(),
            Permutation::identity(1),
            Permutation::identity(1),
        )
        .unwrap();
        let dot = dot_export(&rep);
        assert!(dot.contains("1 [label=\"1 [x,y]\"]"));
        assert_eq!(edge_count(&dot), 0);
    }

    #[test]
    fn base_222_has_one_y_edge_and_x_annotations() {
        let rep = Representation::new(
            TrianglePresentation::new(2, 2, 2).unwrap(),
            Permutation::identity(2),
            perm(&[&[1, 2]], 2),
        )
        .unwrap();
        let dot = dot_export(&rep);
        assert_eq!(edge_count(&dot), 1);
        assert!(dot.contains("label=\"y\""));
        assert!(dot.contains("1 [label=\"1 [x]\"]"));
        assert!(dot.contains("2 [label=\"2 [x]\"]"));
    }

    #[test]
    fn klein_composition_has_four_vertices_and_edges() {
        let rep = Representation::new(
            TrianglePresentation::new(2, 2, 2).unwrap(),
            perm(&[&[1, 3], &[2, 4]], 4),
            perm(&[&[1, 2], &[3, 4]], 4),
        )
        .unwrap();
        let dot = dot_export(&rep);
        assert_eq!(edge_count(&dot), 4);
        for v in 1..=4 {
            assert!(dot.contains(&format!("  {v};\n")));
        }
    }

    #[test]
    fn longer_cycles_get_directed_edges() {
        let rep = Representation::new(
            TrianglePresentation::new(3, 3, 3).unwrap(),
            perm(&[&[1, 2, 3]], 3),
            Permutation::identity(3),
        )
        .unwrap();
        let dot = dot_export(&rep);
        assert_eq!(edge_count(&dot), 3);
        assert!(dot.contains("1 -> 2 [label=\"x\""));
        assert!(!dot.contains("dir=both"));
    }
}
