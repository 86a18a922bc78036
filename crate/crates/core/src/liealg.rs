//! Lie algebras of graded operators: closure, degree decomposition, derived
//! subalgebra, Killing form, and the invariance/derivation checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{LlvError, Result};
use crate::exactla::{dot, rat, ratio, unit_vec, Inertia, Rational, RationalMatrix, Subspace};
use crate::graded::{GradedFrobeniusAlgebra, GradedOperator, GradedVectorSpace};
use crate::lefschetz::{grading_operator, lefschetz_check, sl2_triple_by_coords, Sl2Triple};
use crate::par::Execution;

/// Number of brackets computed per batch; bounds peak memory of a round.
const BATCH: usize = 256;

/// A bracket-closed space of homogeneous operators, stored per degree as
/// canonical echelon bases of flattened operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieOperatorAlgebra {
    space: Arc<GradedVectorSpace>,
    pieces: BTreeMap<i32, Subspace>,
    ops: BTreeMap<i32, Vec<GradedOperator>>,
}

/// Span of homogeneous operators, grown one operator at a time.
#[derive(Clone, Debug)]
struct OperatorSpan {
    space: Arc<GradedVectorSpace>,
    pieces: BTreeMap<i32, Subspace>,
}

impl OperatorSpan {
    fn new(space: &Arc<GradedVectorSpace>) -> Self {
        Self {
            space: space.clone(),
            pieces: BTreeMap::new(),
        }
    }

    fn insert(&mut self, op: &GradedOperator) -> bool {
        assert_eq!(**op.space(), *self.space, "operator acts on a different space");
        if op.is_zero() {
            return false;
        }
        let d = op.degree();
        let len = self.space.flat_len(d);
        self.pieces
            .entry(d)
            .or_insert_with(|| Subspace::zero(len))
            .insert(op.flatten())
    }

    fn dim(&self) -> usize {
        self.pieces.values().map(Subspace::dim).sum()
    }

    fn finish(mut self) -> LieOperatorAlgebra {
        self.pieces.retain(|_, s| !s.is_zero());
        let ops = self
            .pieces
            .iter()
            .map(|(&d, s)| {
                (
                    d,
                    s.basis()
                        .iter()
                        .map(|v| GradedOperator::from_flat(&self.space, d, v))
                        .collect(),
                )
            })
            .collect();
        LieOperatorAlgebra {
            space: self.space,
            pieces: self.pieces,
            ops,
        }
    }
}

fn check_space(space: &Arc<GradedVectorSpace>, ops: &[GradedOperator]) {
    for op in ops {
        assert_eq!(**op.space(), **space, "generator acts on a different space");
    }
}

/// Smallest bracket-closed subspace containing `generators`.
pub fn lie_closure(space: &Arc<GradedVectorSpace>, generators: &[GradedOperator]) -> LieOperatorAlgebra {
    lie_closure_with(space, generators, Execution::default())
}

/// [`lie_closure`] with an explicit execution mode.
///
/// Let `S` be a basis of the span of the generators. The subspace spanned by
/// `S` and closed under every `ad(s)`, `s ∈ S`, is already a Lie algebra (by
/// the Jacobi identity it contains all iterated brackets), so each round only
/// brackets the basis of `S` against the operators adjoined in the previous
/// round. The result is a canonical echelon basis and does not depend on the
/// generator order or the execution mode.
pub fn lie_closure_with(
    space: &Arc<GradedVectorSpace>,
    generators: &[GradedOperator],
    exec: Execution,
) -> LieOperatorAlgebra {
    check_space(space, generators);
    let mut span = OperatorSpan::new(space);
    for g in generators {
        span.insert(g);
    }
    let gens: Vec<GradedOperator> = span.clone().finish().basis();
    let mut frontier = gens.clone();
    while !frontier.is_empty() {
        let pairs: Vec<(usize, usize)> = (0..gens.len())
            .flat_map(|i| (0..frontier.len()).map(move |j| (i, j)))
            .collect();
        let mut next = Vec::new();
        for chunk in pairs.chunks(BATCH) {
            let brackets = exec.map(chunk, |&(i, j)| gens[i].bracket(&frontier[j]));
            for b in brackets {
                if span.insert(&b) {
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    span.finish()
}

impl LieOperatorAlgebra {
    /// The zero algebra on `space`.
    pub fn zero(space: &Arc<GradedVectorSpace>) -> Self {
        OperatorSpan::new(space).finish()
    }

    pub fn space(&self) -> &Arc<GradedVectorSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.pieces.values().map(Subspace::dim).sum()
    }

    /// Dimension of every nonzero degree piece.
    pub fn degree_dims(&self) -> BTreeMap<i32, usize> {
        self.pieces.iter().map(|(&d, s)| (d, s.dim())).collect()
    }

    pub fn dim_in_degree(&self, d: i32) -> usize {
        self.pieces.get(&d).map_or(0, Subspace::dim)
    }

    /// Canonical basis of each degree piece, keyed by operator degree.
    pub fn degree_pieces(&self) -> &BTreeMap<i32, Subspace> {
        &self.pieces
    }

    /// Basis operators of degree `d`.
    pub fn piece(&self, d: i32) -> &[GradedOperator] {
        self.ops.get(&d).map_or(&[], Vec::as_slice)
    }

    /// All basis operators, by increasing degree.
    pub fn basis(&self) -> Vec<GradedOperator> {
        self.ops.values().flatten().cloned().collect()
    }

    pub fn contains(&self, op: &GradedOperator) -> bool {
        op.is_zero() || self.pieces.get(&op.degree()).is_some_and(|s| s.contains(&op.flatten()))
    }

    /// Coordinates in [`LieOperatorAlgebra::basis`], if `op` lies in the algebra.
    pub fn coordinates(&self, op: &GradedOperator) -> Option<Vec<Rational>> {
        let mut out = Vec::with_capacity(self.dim());
        let flat = op.flatten();
        let mut found = op.is_zero();
        for (&d, s) in &self.pieces {
            if d == op.degree() {
                out.extend(s.coordinates(&flat)?);
                found = true;
            } else {
                out.extend(std::iter::repeat_n(Rational::zero(), s.dim()));
            }
        }
        found.then_some(out)
    }

    /// The subalgebra of degree-`d` operators (a subalgebra only for `d = 0`).
    pub fn degree_subalgebra(&self, d: i32) -> Self {
        let mut span = OperatorSpan::new(&self.space);
        for op in self.piece(d) {
            span.insert(op);
        }
        span.finish()
    }

    /// Exhaustive check that every bracket of basis elements stays inside.
    pub fn is_bracket_closed(&self, exec: Execution) -> bool {
        let basis = self.basis();
        let pairs: Vec<(usize, usize)> = (0..basis.len())
            .flat_map(|i| (i + 1..basis.len()).map(move |j| (i, j)))
            .collect();
        pairs.chunks(BATCH).all(|chunk| {
            exec.map(chunk, |&(i, j)| self.contains(&basis[i].bracket(&basis[j])))
                .into_iter()
                .all(|ok| ok)
        })
    }

    /// Whether `[g_i, g_j] ⊆ g_{i+j}` for all basis pairs.
    pub fn respects_degrees(&self, exec: Execution) -> bool {
        let basis = self.basis();
        let pairs: Vec<(usize, usize)> = (0..basis.len())
            .flat_map(|i| (i + 1..basis.len()).map(move |j| (i, j)))
            .collect();
        pairs.chunks(BATCH).all(|chunk| {
            exec.map(chunk, |&(i, j)| {
                let b = basis[i].bracket(&basis[j]);
                b.is_zero()
                    || self
                        .pieces
                        .get(&(basis[i].degree() + basis[j].degree()))
                        .is_some_and(|s| s.contains(&b.flatten()))
            })
            .into_iter()
            .all(|ok| ok)
        })
    }

    /// Upper bound on `dim [g, g]`: brackets have zero trace on every
    /// degree-0 block, so `[g, g]` lies in the common kernel of those traces.
    fn derived_dim_bound(&self) -> usize {
        let basis = self.basis();
        let nc = self.space.num_components();
        let columns: Vec<Vec<Rational>> = basis
            .iter()
            .map(|op| {
                (0..nc)
                    .map(|c| match (op.degree(), op.block(c)) {
                        (0, Some(b)) => (0..b.rows()).map(|i| b[(i, i)].clone()).sum(),
                        _ => Rational::zero(),
                    })
                    .collect()
            })
            .collect();
        self.dim() - RationalMatrix::from_columns(&columns, nc).rank()
    }

    /// `[g, g]`, spanned by brackets of basis pairs.
    ///
    /// Pairs are bracketed in lexicographic order, and the search stops early
    /// once the span reaches the trace bound, which it can then not exceed.
    pub fn derived_subalgebra(&self, exec: Execution) -> Self {
        let basis = self.basis();
        let bound = self.derived_dim_bound();
        let mut span = OperatorSpan::new(&self.space);
        let pairs: Vec<(usize, usize)> = (0..basis.len())
            .flat_map(|i| (i + 1..basis.len()).map(move |j| (i, j)))
            .collect();
        for chunk in pairs.chunks(BATCH) {
            if span.dim() == bound {
                break;
            }
            for b in exec.map(chunk, |&(i, j)| basis[i].bracket(&basis[j])) {
                span.insert(&b);
            }
        }
        span.finish()
    }

    /// Splits `g₀ = g₀′ ⊕ ℚh` where `g₀′ = [g₀, g₀]` and `h` is the grading operator.
    pub fn decompose_g0(&self, exec: Execution) -> Result<G0Decomposition> {
        let g0 = self.degree_subalgebra(0);
        let derived = g0.derived_subalgebra(exec);
        let h = grading_operator(&self.space);
        if !h.is_zero() && derived.contains(&h) {
            return Err(LlvError::NotDirectSum);
        }
        let spans_g0 = g0.contains(&h) && derived.dim() + usize::from(!h.is_zero()) == g0.dim();
        Ok(G0Decomposition {
            g0,
            derived,
            h,
            spans_g0,
        })
    }

    /// `ad(x)` in the basis of the algebra; `None` if some bracket leaves it.
    pub fn ad_matrix(&self, x: &GradedOperator) -> Option<RationalMatrix> {
        let basis = self.basis();
        let columns: Option<Vec<Vec<Rational>>> = basis.iter().map(|b| self.coordinates(&x.bracket(b))).collect();
        Some(RationalMatrix::from_columns(&columns?, basis.len()))
    }

    /// `K(x, y) = tr(ad x ∘ ad y)` on the basis, with its inertia.
    pub fn killing_form(&self, exec: Execution) -> KillingForm {
        let basis = self.basis();
        let n = basis.len();
        let ads: Vec<RationalMatrix> = exec.map(&basis, |x| self.ad_matrix(x).expect("algebra is not bracket-closed"));
        let transposed: Vec<RationalMatrix> = ads.iter().map(RationalMatrix::transpose).collect();
        let mut matrix = RationalMatrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let v = dot(ads[a].data(), transposed[b].data());
                matrix[(a, b)] = v.clone();
                matrix[(b, a)] = v;
            }
        }
        let inertia = matrix.signature().expect("Killing form is symmetric");
        KillingForm { matrix, inertia }
    }

    /// Rank of the restriction of the basis to the degree-0 block on the
    /// cohomological degree `degree`.
    pub fn restriction_rank(&self, degree: i32) -> usize {
        let Some(c) = self.space.component_of_degree(degree) else {
            return 0;
        };
        let rows: Vec<Vec<Rational>> = self
            .piece(0)
            .iter()
            .map(|op| op.block(c).expect("degree-0 block").data().to_vec())
            .collect();
        let len = self.space.dim(c) * self.space.dim(c);
        RationalMatrix::from_rows(&rows, len).rank()
    }

    /// Whether restricting the (degree-0) basis to the block on `degree` is injective.
    pub fn restriction_injective(&self, degree: i32) -> bool {
        self.dim_in_degree(0) == self.dim() && self.restriction_rank(degree) == self.dim()
    }
}

#[derive(Clone, Debug)]
pub struct G0Decomposition {
    pub g0: LieOperatorAlgebra,
    pub derived: LieOperatorAlgebra,
    pub h: GradedOperator,
    /// `g₀′ + ℚh = g₀`.
    pub spans_g0: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillingForm {
    pub matrix: RationalMatrix,
    pub inertia: Inertia,
}

impl KillingForm {
    pub fn is_nondegenerate(&self) -> bool {
        self.inertia.is_nondegenerate()
    }
}

/// Whether `form(Ux, y) + form(x, Uy) = 0` for every matrix `U`.
pub fn invariance_check_matrices(mats: &[RationalMatrix], form: &RationalMatrix) -> bool {
    mats.iter().all(|u| u.transpose().mul(form).add(&form.mul(u)).is_zero())
}

/// Infinitesimal invariance of a bilinear form on the whole space.
pub fn infinitesimal_invariance_check(ops: &[GradedOperator], form: &RationalMatrix) -> bool {
    let dense: Vec<RationalMatrix> = ops.iter().map(GradedOperator::to_dense).collect();
    invariance_check_matrices(&dense, form)
}

/// Whether `u(x·y) = u(x)·y + x·u(y)` for all basis pairs.
pub fn derivation_check(u: &GradedOperator, a: &GradedFrobeniusAlgebra) -> bool {
    let n = a.dim();
    let images: Vec<Vec<Rational>> = (0..n).map(|i| u.apply(&unit_vec(n, i))).collect();
    (0..n).all(|i| {
        let x = unit_vec(n, i);
        (0..n).all(|j| {
            let y = unit_vec(n, j);
            let lhs = u.apply(&a.multiply(&x, &y));
            let mut rhs = a.multiply(&images[i], &y);
            let right = a.multiply(&x, &images[j]);
            crate::exactla::axpy(&mut rhs, &Rational::one(), &right);
            lhs == rhs
        })
    })
}

/// A rational quadratic space given by its symmetric Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: RationalMatrix,
    nondegenerate: bool,
}

impl QuadraticSpace {
    pub fn new(gram: RationalMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(LlvError::NotSymmetric);
        }
        let nondegenerate = gram.rank() == gram.rows();
        Ok(Self { gram, nondegenerate })
    }

    pub fn from_ints(dim: usize, values: &[i64]) -> Result<Self> {
        Self::new(RationalMatrix::from_ints(dim, dim, values))
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        Self::new(RationalMatrix::diagonal(&crate::exactla::rat_vec(entries))).expect("diagonal is symmetric")
    }

    /// `U`, Gram matrix `[[0, 1], [1, 0]]`.
    pub fn hyperbolic_plane() -> Self {
        Self::from_ints(2, &[0, 1, 1, 0]).expect("symmetric")
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot(x, &self.gram.mul_vec(y))
    }

    pub fn norm(&self, x: &[Rational]) -> Rational {
        self.pair(x, x)
    }

    pub fn signature(&self) -> Inertia {
        self.gram.signature().expect("Gram matrix is symmetric")
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(self.gram.direct_sum(&other.gram)).expect("direct sum of symmetric matrices")
    }

    /// `q ⊕ U`.
    pub fn mukai_extend(&self) -> Self {
        self.direct_sum(&Self::hyperbolic_plane())
    }
}

/// The matrix of `z ↦ ½(q(x, z) y − q(y, z) x)`, which is `q`-skew.
pub fn wedge2_so_map(q: &QuadraticSpace, x: &[Rational], y: &[Rational]) -> Result<RationalMatrix> {
    if !q.is_nondegenerate() {
        return Err(LlvError::Degenerate);
    }
    let n = q.dim();
    let qx = q.gram().mul_vec(x);
    let qy = q.gram().mul_vec(y);
    let half = ratio(1, 2);
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = &half * (&y[i] * &qx[j] - &x[i] * &qy[j]);
        }
    }
    Ok(m)
}

/// Default generating classes for the total Lie algebra: standard basis
/// vectors of the degree-2 component and their pairwise sums, keeping only
/// the classes whose cup operator has the Lefschetz property.
pub fn spanning_lefschetz_classes(a: &GradedFrobeniusAlgebra) -> Vec<Vec<Rational>> {
    let s = a.space();
    let Some(c2) = s.component_of_degree(2) else {
        return Vec::new();
    };
    let r = s.dim(c2);
    let candidates = (0..r)
        .map(|i| unit_vec(r, i))
        .chain((0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).map(|(i, j)| {
            let mut v = unit_vec(r, i);
            v[j] = rat(1);
            v
        }));
    candidates
        .filter(|v| crate::graded::cup_by_coords(a, v).is_ok_and(|e| lefschetz_check(s, &e)))
        .collect()
}

/// sl₂-triples for each class (degree-2 coordinates), computed independently.
pub fn sl2_triples(a: &GradedFrobeniusAlgebra, classes: &[Vec<Rational>], exec: Execution) -> Result<Vec<Sl2Triple>> {
    exec.map(classes, |c| sl2_triple_by_coords(a, c)).into_iter().collect()
}

/// The total Lie algebra of `a`, generated by the sl₂-triples of `classes`.
#[derive(Clone, Debug)]
pub struct TotalLieAlgebra {
    pub classes: Vec<Vec<Rational>>,
    pub triples: Vec<Sl2Triple>,
    pub algebra: LieOperatorAlgebra,
}

pub fn total_lie_algebra(
    a: &GradedFrobeniusAlgebra,
    classes: Vec<Vec<Rational>>,
    exec: Execution,
) -> Result<TotalLieAlgebra> {
    let triples = sl2_triples(a, &classes, exec)?;
    let generators: Vec<GradedOperator> = triples
        .iter()
        .flat_map(|t| [t.e.clone(), t.h.clone(), t.f.clone()])
        .collect();
    let algebra = lie_closure_with(a.space(), &generators, exec);
    Ok(TotalLieAlgebra {
        classes,
        triples,
        algebra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat_vec;
    use crate::lefschetz::jacobson_morozov_dual;

    fn space(dims: &[(i32, usize)], shift: i32) -> Arc<GradedVectorSpace> {
        Arc::new(GradedVectorSpace::from_dims(shift, dims).unwrap())
    }

    #[test]
    fn single_sl2_triple_is_closed() {
        let s = space(&[(0, 1), (2, 1), (4, 1)], 2);
        let one = RationalMatrix::from_ints(1, 1, &[1]);
        let e = GradedOperator::from_blocks(&s, 2, [(0, one.clone()), (1, one)]).unwrap();
        let f = jacobson_morozov_dual(&s, &e).unwrap();
        let h = grading_operator(&s);
        let g = lie_closure(&s, &[e, h, f]);
        assert_eq!(g.dim(), 3);
        assert_eq!(g.degree_dims(), BTreeMap::from([(-2, 1), (0, 1), (2, 1)]));
        assert!(g.is_bracket_closed(Execution::Sequential));
        let k = g.killing_form(Execution::Sequential);
        // sl₂ has Killing signature (2, 1).
        assert_eq!(k.inertia, Inertia::new(2, 1, 0));
    }

    #[test]
    fn abelian_algebra() {
        let s = space(&[(0, 2)], 0);
        let x = GradedOperator::from_blocks(&s, 0, [(0, RationalMatrix::from_ints(2, 2, &[1, 0, 0, 0]))]).unwrap();
        let g = lie_closure(&s, &[x]);
        assert_eq!(g.dim(), 1);
        assert_eq!(g.derived_subalgebra(Execution::Sequential).dim(), 0);
        assert!(g.killing_form(Execution::Sequential).matrix.is_zero());
    }

    #[test]
    fn zero_algebra_restriction_is_vacuous() {
        let s = space(&[(0, 2)], 0);
        let g = LieOperatorAlgebra::zero(&s);
        assert_eq!(g.dim(), 0);
        assert!(g.restriction_injective(0));
    }

    #[test]
    fn identity_is_never_infinitesimally_invariant() {
        let form = RationalMatrix::from_ints(2, 2, &[0, 1, 1, 0]);
        assert!(!invariance_check_matrices(&[RationalMatrix::identity(2)], &form));
        let skew = wedge2_so_map(
            &QuadraticSpace::new(form.clone()).unwrap(),
            &rat_vec(&[1, 0]),
            &rat_vec(&[0, 1]),
        )
        .unwrap();
        assert!(invariance_check_matrices(&[skew], &form));
    }

    #[test]
    fn wedge_map_on_diag_form() {
        let q = QuadraticSpace::diagonal(&[1, 1]);
        let m = wedge2_so_map(&q, &rat_vec(&[1, 0]), &rat_vec(&[0, 1])).unwrap();
        assert_eq!(m.mul_vec(&rat_vec(&[1, 0])), vec![rat(0), ratio(1, 2)]);
        assert_eq!(m.mul_vec(&rat_vec(&[0, 1])), vec![ratio(-1, 2), rat(0)]);
        let swapped = wedge2_so_map(&q, &rat_vec(&[0, 1]), &rat_vec(&[1, 0])).unwrap();
        assert_eq!(swapped, m.neg());
        let degenerate = QuadraticSpace::diagonal(&[1, 0]);
        assert_eq!(
            wedge2_so_map(&degenerate, &rat_vec(&[1, 0]), &rat_vec(&[0, 1])),
            Err(LlvError::Degenerate)
        );
    }

    #[test]
    fn mukai_extension_adds_hyperbolic_plane() {
        let q = QuadraticSpace::diagonal(&[1, -1, -1]);
        let m = q.mukai_extend();
        assert_eq!(m.dim(), 5);
        assert_eq!(m.signature(), Inertia::new(2, 3, 0));
        assert!(QuadraticSpace::from_ints(2, &[0, 1, 2, 0]).is_err());
    }
}
