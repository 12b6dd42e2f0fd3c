use std::time::Instant;
use trigroup::analyze::{classify_clone_structure, CloneStructureCase};
use trigroup::compose::compose_clone_p;
use trigroup::triangle::{search_alternating, TrianglePresentation};

fn main() {
    for (p, q, r, deg, seed) in [
        (3u64, 5u64, 7u64, 7usize, 1u64),
        (5, 6, 7, 9, 1),
        (2, 5, 9, 10, 1),
        (3, 7, 9, 9, 1),
    ] {
        let pres = TrianglePresentation::new(p, q, r).unwrap();
        let t = Instant::now();
        let rep = search_alternating(pres, deg, 1, 1, seed, 300_000).unwrap();
        let handle = rep.find_handles(1)[0];
        let comp = compose_clone_p(&rep, &handle).unwrap();
        let verdict = classify_clone_structure(&comp).unwrap();
        println!(
            "({p},{q},{r}) deg {deg}: case {:?}, |H| = {}, kernel = {}, dim = {:?}, in {:?}",
            verdict.case,
            verdict.details.group_order,
            verdict.details.kernel_order,
            verdict.details.fp_dimension,
            t.elapsed()
        );
        assert!(matches!(
            verdict.case,
            CloneStructureCase::DirectProduct | CloneStructureCase::SemidirectProduct
        ));
    }
    // sweep-range feasibility for (3,5,7)
    let pres = TrianglePresentation::new(3, 5, 7).unwrap();
    for deg in 7..=12 {
        let t = Instant::now();
        match search_alternating(pres, deg, 1, 1, 1 + deg as u64, 150_000) {
            Ok(_) => println!("(3,5,7) deg {deg}: HIT in {:?}", t.elapsed()),
            Err(e) => println!("(3,5,7) deg {deg}: {e} in {:?}", t.elapsed()),
        }
    }
}
