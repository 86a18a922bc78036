use std::collections::BTreeMap;

use llv_core::exactla::{Inertia, Subspace};
use llv_core::graded::{phi_form, validate_algebra};
use llv_core::liealg::{infinitesimal_invariance_check, spanning_lefschetz_classes, total_lie_algebra, QuadraticSpace};
use llv_core::rep::{
    dims_by_degree, irreducibility_witness, is_stable_under, prim_subspace, restriction_to_subspace_injective,
    submodule_generated, verbitsky_subring, DEFAULT_SEED,
};
use llv_core::verbitsky::verbitsky_component;
use llv_core::Execution;

fn rank5() -> QuadraticSpace {
    QuadraticSpace::hyperbolic_plane().direct_sum(&QuadraticSpace::diagonal(&[1, 1, 1]))
}

#[test]
fn llv_of_rank5_n2_component() {
    let vc = verbitsky_component(&rank5(), 2).unwrap();
    let a = &vc.algebra;
    assert!(validate_algebra(a).is_valid());
    let g = total_lie_algebra(a, spanning_lefschetz_classes(a), Execution::Parallel)
        .unwrap()
        .algebra;
    assert_eq!(g.dim(), 21);
    assert_eq!(g.degree_dims(), BTreeMap::from([(-2, 5), (0, 11), (2, 5)]));
    let k = g.killing_form(Execution::Parallel);
    assert!(k.is_nondegenerate());
    // q ⊕ U = U² ⊕ ⟨1⟩³ has signature (5, 2); so(5, 2) has Killing signature (10, 11).
    assert_eq!(k.inertia, Inertia::new(10, 11, 0));
    assert!(infinitesimal_invariance_check(&g.basis(), &phi_form(a).matrix));

    let prim = prim_subspace(&g);
    assert_eq!(prim, Subspace::from_vectors(a.dim(), [a.unit()]));
    assert!(is_stable_under(g.piece(0), &prim));
    assert_eq!(submodule_generated(&g, prim.basis()).dim(), a.dim());

    let top = a.space().embed(a.top_component().unwrap(), &[llv_core::rat(1)]);
    assert_eq!(submodule_generated(&g, &[top]).dim(), a.dim());

    let witness = irreducibility_witness(&g, 20, DEFAULT_SEED, Execution::Parallel);
    assert!(witness.passed());
    assert_eq!(witness.basis_vectors, 27);

    let sub = verbitsky_subring(a);
    assert_eq!(dims_by_degree(a, &sub), vec![1, 5, 15, 5, 1]);
    assert!(restriction_to_subspace_injective(&g, &sub));
    let dec = g.decompose_g0(Execution::Parallel).unwrap();
    assert_eq!(dec.derived.dim(), 10);
    assert!(dec.derived.restriction_injective(2));
}
