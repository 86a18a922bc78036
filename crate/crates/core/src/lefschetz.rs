//! Lefschetz property and the degree −2 dual completing an sl₂-triple.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{LlvError, Result};
use crate::exactla::{rat, zero_vec, Rational, RationalMatrix};
use crate::graded::{cup_operator, h_operator, GradedFrobeniusAlgebra, GradedOperator, GradedVectorSpace};

/// Operators `(e, h, f)` of degrees 2, 0, −2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: GradedOperator,
    pub h: GradedOperator,
    pub f: GradedOperator,
}

impl Sl2Triple {
    /// `[e,f] = h`, `[h,e] = 2e` and `[h,f] = −2f`, as exact identities.
    pub fn verify(&self) -> bool {
        self.e.bracket(&self.f) == self.h
            && self.h.bracket(&self.e) == self.e.scale(&rat(2))
            && self.h.bracket(&self.f) == self.f.scale(&rat(-2))
    }
}

/// The grading operator of a bare graded space: internal degree times identity.
pub fn grading_operator(space: &Arc<GradedVectorSpace>) -> GradedOperator {
    GradedOperator::scalar_per_component(space, |c| rat(i64::from(space.internal_degree(c))))
}

/// Whether `e^k : V_{−k} → V_k` is bijective for every `k > 0` (internal degrees).
pub fn lefschetz_check(space: &Arc<GradedVectorSpace>, e: &GradedOperator) -> bool {
    assert_eq!(e.degree(), 2, "Lefschetz check needs a degree-2 operator");
    for c in 0..space.num_components() {
        let k = -space.internal_degree(c);
        if k <= 0 || space.dim(c) == 0 {
            continue;
        }
        if space.dim_of_degree(space.degree(c) + 2 * k) != space.dim(c) {
            return false;
        }
        let mut composite = RationalMatrix::identity(space.dim(c));
        let mut at = c;
        for _ in 0..k {
            let (Some(next), Some(block)) = (space.target(at, 2), e.block(at)) else {
                return false;
            };
            composite = block.mul(&composite);
            at = next;
        }
        if composite.rank() != space.dim(c) {
            return false;
        }
    }
    true
}

/// Solves `[e, f] = h` for the degree −2 operator `f`.
///
/// The unknown blocks of `f` are flattened into a single vector and the
/// commutator equations, one per entry of each degree-0 block, form one
/// linear system. A positive-dimensional solution space is reported as
/// `NonUniqueDual`.
pub fn jacobson_morozov_dual(space: &Arc<GradedVectorSpace>, e: &GradedOperator) -> Result<GradedOperator> {
    if e.degree() != 2 {
        return Err(LlvError::WrongDegree { expected: 2 });
    }
    let nc = space.num_components();
    let mut unknown_base = vec![usize::MAX; nc];
    let mut at = 0;
    for (a, slot) in unknown_base.iter_mut().enumerate() {
        if let Some(b) = space.target(a, -2) {
            *slot = at;
            at += space.dim(a) * space.dim(b);
        }
    }
    let unknowns = at;
    let mut eq_base = vec![0; nc];
    let mut at = 0;
    for (c, slot) in eq_base.iter_mut().enumerate() {
        *slot = at;
        at += space.dim(c) * space.dim(c);
    }
    let equations = at;

    let mut system = RationalMatrix::zeros(equations, unknowns);
    for a in 0..nc {
        let Some(b) = space.target(a, -2) else { continue };
        let (da, db) = (space.dim(a), space.dim(b));
        let e_ba = e.block(b).expect("degree-2 block from b lands in a");
        for m in 0..db {
            for j in 0..da {
                let col = unknown_base[a] + m * da + j;
                // e ∘ f contributes e_ba[i, m] at entry (i, j) of the a-block.
                for i in 0..da {
                    let v = &e_ba[(i, m)];
                    if !v.is_zero() {
                        system[(eq_base[a] + i * da + j, col)] += v;
                    }
                }
                // − f ∘ e contributes −e_ba[j, j'] at entry (m, j') of the b-block.
                for jp in 0..db {
                    let v = &e_ba[(j, jp)];
                    if !v.is_zero() {
                        system[(eq_base[b] + m * db + jp, col)] -= v;
                    }
                }
            }
        }
    }
    let mut rhs = zero_vec(equations);
    for c in 0..nc {
        let value = rat(i64::from(space.internal_degree(c)));
        for i in 0..space.dim(c) {
            rhs[eq_base[c] + i * space.dim(c) + i] = value.clone();
        }
    }
    let solution = system.solve(&rhs).map_err(|err| match err {
        LlvError::Inconsistent => LlvError::NotLefschetz,
        other => other,
    })?;
    if solution.kernel_dim > 0 {
        return Err(LlvError::NonUniqueDual(solution.kernel_dim));
    }
    Ok(GradedOperator::from_flat(space, -2, &solution.x))
}

/// `(e_a, h, f_a)` for a degree-2 class `a` given as a full-length vector.
pub fn sl2_triple(a: &GradedFrobeniusAlgebra, class: &[Rational]) -> Result<Sl2Triple> {
    let e = cup_operator(a, class)?;
    let f = jacobson_morozov_dual(a.space(), &e)?;
    Ok(Sl2Triple { e, h: h_operator(a), f })
}

/// Same as [`sl2_triple`] with the class in degree-2 coordinates.
pub fn sl2_triple_by_coords(a: &GradedFrobeniusAlgebra, coords: &[Rational]) -> Result<Sl2Triple> {
    let c2 = a
        .space()
        .component_of_degree(2)
        .ok_or(LlvError::WrongDegree { expected: 2 })?;
    sl2_triple(a, &a.space().embed(c2, coords))
}
