use std::time::Instant;

use ordtop::constructions::{generate_p, p_element_count, verify_chain_facts, verify_cone_facts, verify_poset_axioms};

#[test]
fn structural_facts_up_to_depth_four_width_four() {
    for n in 0..=4 {
        for w in 1..=4 {
            let start = Instant::now();
            let p = generate_p(n, w, 4096).unwrap();
            assert_eq!(Some(p.len()), p_element_count(n, w));
            assert!(verify_poset_axioms(&p).unwrap().passes(), "axioms ({n},{w})");
            assert!(verify_chain_facts(&p).unwrap().passes(), "chains ({n},{w})");
            let cones = verify_cone_facts(&p).unwrap();
            assert!(cones.passes_by_length(), "cones ({n},{w})");
            assert_eq!(cones.passes(), n < 2, "closed form ({n},{w})");
            eprintln!("({n},{w}) {} in {:?}", p.len(), start.elapsed());
        }
    }
}
