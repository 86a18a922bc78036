//! The action of an operator Lie algebra on its space: primitive vectors,
//! generated submodules, the subring generated in degree 2, and the parity
//! test for Weil-type operators.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactla::{rat, unit_vec, Rational, RationalMatrix, Subspace};
use crate::graded::{GradedFrobeniusAlgebra, GradedOperator};
use crate::liealg::LieOperatorAlgebra;
use crate::par::Execution;

/// Default seed for the pseudorandom witness vectors.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Vectors killed by every degree −2 element of `g`.
pub fn prim_subspace(g: &LieOperatorAlgebra) -> Subspace {
    let n = g.space().total_dim();
    let lowering = g.piece(-2);
    if lowering.is_empty() {
        return Subspace::full(n);
    }
    let stacked = lowering
        .iter()
        .map(GradedOperator::to_dense)
        .reduce(|a, b| a.vstack(&b))
        .expect("nonempty");
    stacked.kernel()
}

/// Whether every degree-0 element of `g` maps `sub` into itself.
pub fn is_stable_under(ops: &[GradedOperator], sub: &Subspace) -> bool {
    ops.iter()
        .all(|op| sub.basis().iter().all(|v| sub.contains(&op.apply(v))))
}

/// The smallest `g`-invariant subspace containing `vectors`.
pub fn submodule_generated(g: &LieOperatorAlgebra, vectors: &[Vec<Rational>]) -> Subspace {
    submodule_generated_with(g, vectors, Execution::Sequential)
}

pub fn submodule_generated_with(g: &LieOperatorAlgebra, vectors: &[Vec<Rational>], exec: Execution) -> Subspace {
    let n = g.space().total_dim();
    let ops = g.basis();
    let mut span = Subspace::zero(n);
    let mut frontier: Vec<Vec<Rational>> = vectors.iter().filter(|v| span.insert((*v).clone())).cloned().collect();
    while !frontier.is_empty() && span.dim() < n {
        let pairs: Vec<(usize, usize)> = (0..ops.len())
            .flat_map(|i| (0..frontier.len()).map(move |j| (i, j)))
            .collect();
        let images = exec.map(&pairs, |&(i, j)| ops[i].apply(&frontier[j]));
        frontier = images.into_iter().filter(|v| span.insert(v.clone())).collect();
    }
    span
}

/// Span of all products of degree-2 elements, including the empty product.
pub fn verbitsky_subring(a: &GradedFrobeniusAlgebra) -> Subspace {
    let s = a.space();
    let n = s.total_dim();
    let mut span = Subspace::zero(n);
    span.insert(a.unit());
    let Some(c2) = s.component_of_degree(2) else {
        return span;
    };
    let generators: Vec<Vec<Rational>> = (0..s.dim(c2)).map(|i| s.embed(c2, &unit_vec(s.dim(c2), i))).collect();
    let mut layer = vec![a.unit()];
    while !layer.is_empty() {
        let mut next_layer = Subspace::zero(n);
        for v in &layer {
            for x in &generators {
                next_layer.insert(a.multiply(x, v));
            }
        }
        layer = next_layer
            .basis()
            .iter()
            .filter(|v| span.insert((*v).clone()))
            .cloned()
            .collect();
    }
    span
}

/// Dimension of `sub ∩ (degree-k component)` for each component.
pub fn dims_by_degree(a: &GradedFrobeniusAlgebra, sub: &Subspace) -> Vec<usize> {
    let s = a.space();
    (0..s.num_components())
        .map(|c| {
            let piece =
                Subspace::from_vectors(s.total_dim(), (0..s.dim(c)).map(|i| s.embed(c, &unit_vec(s.dim(c), i))));
            sub.intersection(&piece).dim()
        })
        .collect()
}

/// Whether the map `g → End(sub)` is injective.
pub fn restriction_to_subspace_injective(g: &LieOperatorAlgebra, sub: &Subspace) -> bool {
    let rows: Vec<Vec<Rational>> = g
        .basis()
        .iter()
        .map(|op| sub.basis().iter().flat_map(|v| op.apply(v)).collect())
        .collect();
    let len = sub.dim() * g.space().total_dim();
    RationalMatrix::from_rows(&rows, len).rank() == g.dim()
}

/// Polynomials over ℚ as ascending coefficient vectors.
mod poly {
    use super::*;

    pub fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let lead = b.last().expect("nonzero divisor").clone();
        while r.len() >= b.len() {
            let c = r.last().expect("nonempty") / &lead;
            let shift = r.len() - b.len();
            for (i, y) in b.iter().enumerate() {
                r[shift + i] -= &c * y;
            }
            r = trim(r);
        }
        r
    }
}

/// Monic minimal polynomial of a square matrix, ascending coefficients.
pub fn minimal_polynomial(m: &RationalMatrix) -> Vec<Rational> {
    let n = m.rows();
    let mut powers = vec![RationalMatrix::identity(n)];
    loop {
        let next = powers.last().expect("nonempty").mul(m);
        let columns: Vec<Vec<Rational>> = powers.iter().map(|p| p.data().to_vec()).collect();
        let system = RationalMatrix::from_columns(&columns, n * n);
        if let Ok(sol) = system.solve(next.data()) {
            // next = Σ c_i m^i, so x^k − Σ c_i x^i annihilates m.
            let mut p: Vec<Rational> = sol.x.iter().map(|c| -c.clone()).collect();
            p.push(Rational::one());
            return p;
        }
        powers.push(next);
    }
}

/// `∏ p_m` over `0 ≤ m ≤ k` with `m ≡ k (mod 2)`, where `p_0 = x` and `p_m = x² + m²`.
pub fn parity_polynomial(k: i32) -> Vec<Rational> {
    let mut acc = vec![Rational::one()];
    for m in (0..=k).filter(|m| (k - m) % 2 == 0) {
        let factor = if m == 0 {
            vec![rat(0), rat(1)]
        } else {
            vec![rat(i64::from(m * m)), rat(0), rat(1)]
        };
        acc = poly::mul(&acc, &factor);
    }
    acc
}

/// Per cohomological degree, whether the eigenvalues of `w` there are all of
/// the form `i·m` with `m ≡ k (mod 2)`.
pub fn weil_parity_by_degree(w: &GradedOperator) -> Vec<(i32, bool)> {
    assert_eq!(w.degree(), 0, "parity check needs a degree-0 operator");
    let s = w.space();
    (0..s.num_components())
        .map(|c| {
            let k = s.degree(c);
            let ok = match w.block(c) {
                Some(b) if s.dim(c) > 0 => poly::rem(&parity_polynomial(k), &minimal_polynomial(b)).is_empty(),
                _ => true,
            };
            (k, ok)
        })
        .collect()
}

pub fn weil_parity_check(w: &GradedOperator) -> bool {
    weil_parity_by_degree(w).iter().all(|&(_, ok)| ok)
}

/// Outcome of the irreducibility witness; it can refute irreducibility but
/// does not prove it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityWitness {
    pub seed: u64,
    pub basis_vectors: usize,
    pub random_vectors: usize,
    /// Indices (basis vectors first, then random ones) that generate a proper submodule.
    pub failures: Vec<usize>,
}

impl IrreducibilityWitness {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `samples` vectors with entries uniform in `[−5, 5]`.
pub fn seeded_vectors(dim: usize, samples: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| (0..dim).map(|_| rat(rng.gen_range(-5..=5))).collect())
        .collect()
}

/// Checks that every basis vector and `samples` seeded vectors each generate
/// the whole space under `g`.
pub fn irreducibility_witness(
    g: &LieOperatorAlgebra,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> IrreducibilityWitness {
    let n = g.space().total_dim();
    let vectors: Vec<Vec<Rational>> = (0..n)
        .map(|i| unit_vec(n, i))
        .chain(seeded_vectors(n, samples, seed))
        .collect();
    let full = exec.map(&vectors, |v| submodule_generated(g, std::slice::from_ref(v)).dim() == n);
    IrreducibilityWitness {
        seed,
        basis_vectors: n,
        random_vectors: samples,
        failures: full
            .iter()
            .enumerate()
            .filter(|(_, ok)| !**ok)
            .map(|(i, _)| i)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::h_operator;
    use crate::liealg::QuadraticSpace;
    use crate::liealg::{lie_closure, spanning_lefschetz_classes, total_lie_algebra};
    use crate::models::{
        exterior_quaternion_model, frobenius_from_quadratic, metric_triple, weil_commutator, QuaternionUnit,
    };

    fn k3_type(diag: &[i64]) -> GradedFrobeniusAlgebra {
        frobenius_from_quadratic(&QuadraticSpace::diagonal(diag), "t").unwrap()
    }

    #[test]
    fn polynomial_helpers() {
        // (x² + 1)(x² + 9) x⁰ for k = 3: m ∈ {1, 3}.
        assert_eq!(parity_polynomial(3), vec![rat(9), rat(0), rat(10), rat(0), rat(1)]);
        assert_eq!(parity_polynomial(0), vec![rat(0), rat(1)]);
        let m = RationalMatrix::from_ints(2, 2, &[0, -1, 1, 0]);
        assert_eq!(minimal_polynomial(&m), vec![rat(1), rat(0), rat(1)]);
        assert_eq!(minimal_polynomial(&RationalMatrix::identity(3)), vec![rat(-1), rat(1)]);
    }

    #[test]
    fn weil_operators_on_quaternions() {
        use QuaternionUnit::*;
        let m = exterior_quaternion_model();
        for (l, mu) in [(J, K), (I, K), (I, J)] {
            assert!(weil_parity_check(&weil_commutator(&m, l, mu).unwrap()));
        }
        assert!(!weil_parity_check(&h_operator(&m.algebra)));
        let zero = GradedOperator::zero(k3_type(&[1, -1]).space(), 0);
        assert!(weil_parity_check(&zero));
    }

    #[test]
    fn subring_dims() {
        let m = exterior_quaternion_model();
        let sub = verbitsky_subring(&m.algebra);
        assert_eq!(dims_by_degree(&m.algebra, &sub), vec![1, 0, 6, 0, 1]);
        let a = k3_type(&[1, 1, -1]);
        assert_eq!(verbitsky_subring(&a).dim(), 5);
    }

    #[test]
    fn prim_and_generation_on_k3_type() {
        let a = k3_type(&[1, 1, -1]);
        let g = total_lie_algebra(&a, spanning_lefschetz_classes(&a), Execution::Sequential)
            .unwrap()
            .algebra;
        let prim = prim_subspace(&g);
        assert_eq!(prim, Subspace::from_vectors(5, [a.unit()]));
        assert!(is_stable_under(g.piece(0), &prim));
        assert_eq!(submodule_generated(&g, prim.basis()).dim(), 5);
        assert!(submodule_generated(&g, &[crate::exactla::zero_vec(5)]).is_zero());
        let top = unit_vec(5, 4);
        assert_eq!(submodule_generated(&g, &[top]).dim(), 5);
        let w = irreducibility_witness(&g, 5, DEFAULT_SEED, Execution::Sequential);
        assert!(w.passed());
        assert!(restriction_to_subspace_injective(&g, &verbitsky_subring(&a)));
    }

    #[test]
    fn prim_is_everything_without_lowering() {
        let m = exterior_quaternion_model();
        let e = metric_triple(&m, QuaternionUnit::I).e;
        let g = lie_closure(m.algebra.space(), &[e]);
        assert_eq!(prim_subspace(&g).dim(), 16);
    }

    #[test]
    fn seeded_vectors_are_reproducible() {
        assert_eq!(seeded_vectors(4, 3, 7), seeded_vectors(4, 3, 7));
        assert_ne!(seeded_vectors(4, 3, 7), seeded_vectors(4, 3, 8));
    }
}
