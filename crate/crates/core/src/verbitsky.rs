//! The quotient of the symmetric algebra of a quadratic space by the ideal
//! generated by `(n+1)`-st powers of isotropic vectors, built as an explicit
//! graded Frobenius algebra.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{LlvError, Result};
use crate::exactla::{is_zero_vec, rat, unit_vec, zero_vec, Rational, RationalMatrix, Subspace};
use crate::graded::{pairing_block, GradedFrobeniusAlgebra, GradedVectorSpace};
use crate::liealg::QuadraticSpace;

/// Largest `dim Sym^{2n+1}` the construction accepts.
pub const MAX_SYM_DIM: usize = 4000;

/// Degree-`m` monomials in `rank` variables, as exponent vectors in
/// lexicographically decreasing order (`x₀^m` first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPower {
    rank: usize,
    degree: usize,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl SymmetricPower {
    pub fn new(rank: usize, degree: usize) -> Self {
        fn go(rank: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() + 1 == rank {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                go(rank, left - e, cur, out);
                cur.pop();
            }
        }
        let mut monomials = Vec::new();
        if rank > 0 {
            go(rank, degree as u32, &mut Vec::new(), &mut monomials);
        } else if degree == 0 {
            monomials.push(Vec::new());
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self {
            rank,
            degree,
            monomials,
            index,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        self.index.get(exponents).copied()
    }
}

/// `C(r + m − 1, m)`, saturating.
pub fn sym_dim(rank: usize, m: usize) -> usize {
    if rank == 0 {
        return usize::from(m == 0);
    }
    let mut acc: u128 = 1;
    for i in 0..m as u128 {
        acc = acc * (rank as u128 + i) / (i + 1);
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

fn add_exponents(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Product of polynomials given in monomial coordinates.
pub fn sym_multiply(pa: &SymmetricPower, x: &[Rational], pb: &SymmetricPower, y: &[Rational]) -> Vec<Rational> {
    let target = SymmetricPower::new(pa.rank, pa.degree + pb.degree);
    let mut out = zero_vec(target.dim());
    for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
            let k = target
                .index_of(&add_exponents(&pa.monomials[i], &pb.monomials[j]))
                .expect("monomial");
            out[k] += a * b;
        }
    }
    out
}

/// `α^m` for a linear form `α = Σ aᵢ xᵢ`, by repeated multiplication.
pub fn linear_power(a: &[Rational], m: usize) -> Vec<Rational> {
    let r = a.len();
    let one = SymmetricPower::new(r, 1);
    let mut acc = vec![Rational::one()];
    for d in 0..m {
        acc = sym_multiply(&SymmetricPower::new(r, d), &acc, &one, a);
    }
    acc
}

/// `Δ = Σ G_ij ∂_i ∂_j` from `Sym^m` to `Sym^{m−2}` in monomial coordinates.
///
/// With `α = Σ aᵢ xᵢ` this gives `Δ(α^m) = m(m−1) q(α) α^{m−2}`, so powers of
/// isotropic vectors are harmonic.
pub fn contraction_laplacian(q: &QuadraticSpace, m: usize) -> Result<RationalMatrix> {
    if !q.is_nondegenerate() {
        return Err(LlvError::Degenerate);
    }
    let r = q.dim();
    let source = SymmetricPower::new(r, m);
    if m < 2 {
        return Ok(RationalMatrix::zeros(0, source.dim()));
    }
    let target = SymmetricPower::new(r, m - 2);
    let g = q.gram();
    let mut out = RationalMatrix::zeros(target.dim(), source.dim());
    for (col, e) in source.monomials.iter().enumerate() {
        for i in 0..r {
            for j in 0..r {
                if g[(i, j)].is_zero() {
                    continue;
                }
                let mut lowered = e.clone();
                let coeff = if i == j {
                    if e[i] < 2 {
                        continue;
                    }
                    lowered[i] -= 2;
                    i64::from(e[i]) * i64::from(e[i] - 1)
                } else {
                    if e[i] == 0 || e[j] == 0 {
                        continue;
                    }
                    lowered[i] -= 1;
                    lowered[j] -= 1;
                    i64::from(e[i]) * i64::from(e[j])
                };
                let row = target.index_of(&lowered).expect("monomial");
                out[(row, col)] += &g[(i, j)] * rat(coeff);
            }
        }
    }
    Ok(out)
}

/// `ker Δ` inside `Sym^m`.
pub fn harmonic_subspace(q: &QuadraticSpace, m: usize) -> Result<Subspace> {
    Ok(contraction_laplacian(q, m)?.kernel())
}

/// One graded piece `A_d = Sym^d / I_d`, presented by the monomials that are
/// not pivots of the ideal's echelon basis.
#[derive(Clone, Debug)]
pub struct QuotientPiece {
    pub sym: SymmetricPower,
    pub ideal: Subspace,
    /// Indices of the monomials forming the basis of `A_d`.
    pub complement: Vec<usize>,
}

impl QuotientPiece {
    fn new(sym: SymmetricPower, ideal: Subspace) -> Self {
        let complement = (0..sym.dim()).filter(|i| !ideal.pivots().contains(i)).collect();
        Self { sym, ideal, complement }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Coordinates in `A_d` of a polynomial of degree `d`.
    pub fn normal_form(&self, poly: &[Rational]) -> Vec<Rational> {
        let reduced = self.ideal.reduce(poly.to_vec());
        self.complement.iter().map(|&i| reduced[i].clone()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct VerbitskyComponent {
    pub q: QuadraticSpace,
    pub n: usize,
    /// `A_0, …, A_{2n}`.
    pub pieces: Vec<QuotientPiece>,
    pub algebra: GradedFrobeniusAlgebra,
}

impl VerbitskyComponent {
    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(QuotientPiece::dim).collect()
    }

    pub fn rank(&self) -> usize {
        self.q.dim()
    }
}

/// Builds `A = Sym*(V) / ⟨α^{n+1} : q(α) = 0⟩` with `A_d` in cohomological
/// degree `2d` and shift `2n`.
pub fn verbitsky_component(q: &QuadraticSpace, n: usize) -> Result<VerbitskyComponent> {
    verbitsky_component_with_limit(q, n, MAX_SYM_DIM)
}

/// [`verbitsky_component`] with a caller-chosen bound on `dim Sym^{2n+1}`.
pub fn verbitsky_component_with_limit(q: &QuadraticSpace, n: usize, limit: usize) -> Result<VerbitskyComponent> {
    if !q.is_nondegenerate() {
        return Err(LlvError::Degenerate);
    }
    if n == 0 {
        return Err(LlvError::Validation("n must be positive".into()));
    }
    let r = q.dim();
    let top = sym_dim(r, 2 * n + 1);
    if top > limit {
        return Err(LlvError::SizeLimit(format!(
            "Sym^{} of rank {r} has dimension {top}, limit is {limit}",
            2 * n + 1
        )));
    }
    let harmonic = harmonic_subspace(q, n + 1)?;
    let linear = SymmetricPower::new(r, 1);
    let mut pieces = Vec::with_capacity(2 * n + 1);
    let mut previous_ideal = Subspace::zero(1);
    for d in 0..=2 * n + 1 {
        let sym = SymmetricPower::new(r, d);
        let ideal = if d <= n {
            Subspace::zero(sym.dim())
        } else if d == n + 1 {
            harmonic.clone()
        } else {
            // I_d = V · I_{d−1}; stop as soon as it fills Sym^d.
            let lower = SymmetricPower::new(r, d - 1);
            let mut ideal = Subspace::zero(sym.dim());
            'fill: for g in previous_ideal.basis() {
                for i in 0..r {
                    ideal.insert(sym_multiply(&lower, g, &linear, &unit_vec(r, i)));
                    if ideal.dim() == sym.dim() {
                        break 'fill;
                    }
                }
            }
            ideal
        };
        if d == 2 * n + 1 {
            if ideal.dim() != sym.dim() {
                return Err(LlvError::TruncationFailure(sym.dim() - ideal.dim()));
            }
            break;
        }
        previous_ideal = ideal.clone();
        pieces.push(QuotientPiece::new(sym, ideal));
    }
    let algebra = quotient_algebra(&pieces, n, &format!("verbitsky-{r}-{n}"))?;
    Ok(VerbitskyComponent {
        q: q.clone(),
        n,
        pieces,
        algebra,
    })
}

fn quotient_algebra(pieces: &[QuotientPiece], n: usize, name: &str) -> Result<GradedFrobeniusAlgebra> {
    let dims: Vec<(i32, usize)> = pieces
        .iter()
        .enumerate()
        .map(|(d, p)| (2 * d as i32, p.dim()))
        .collect();
    let space = GradedVectorSpace::from_dims(2 * n as i32, &dims)?;
    let top_dim = pieces[2 * n].dim();
    let integral = if top_dim == 0 { Vec::new() } else { unit_vec(top_dim, 0) };
    let unit = pieces[0].normal_form(&[Rational::one()]);
    let mut b = GradedFrobeniusAlgebra::builder(name, space, unit, integral)?;
    for (da, pa) in pieces.iter().enumerate() {
        for (db, pb) in pieces.iter().enumerate().take(2 * n + 1 - da) {
            let target = &pieces[da + db];
            for (i, &mi) in pa.complement.iter().enumerate() {
                for (j, &mj) in pb.complement.iter().enumerate() {
                    let exps = add_exponents(&pa.sym.monomials[mi], &pb.sym.monomials[mj]);
                    let k = target.sym.index_of(&exps).expect("monomial");
                    let value = target.normal_form(&unit_vec(target.sym.dim(), k));
                    if !is_zero_vec(&value) {
                        b.product(2 * da as i32, i, 2 * db as i32, j, value)?;
                    }
                }
            }
        }
    }
    Ok(b.build())
}

/// Per degree `k ≤ N`, whether `A_k × A_{2N−k} → A_{2N}` is perfect.
pub fn perfect_pairing_by_degree(a: &GradedFrobeniusAlgebra) -> Vec<(i32, bool)> {
    let s = a.space();
    let top = 2 * s.shift();
    (0..s.num_components())
        .filter(|&c| s.degree(c) <= s.shift())
        .map(|c| {
            let ok = s
                .component_of_degree(top - s.degree(c))
                .is_some_and(|p| s.dim(p) == s.dim(c) && pairing_block(a, c, p).rank() == s.dim(c));
            (s.degree(c), ok)
        })
        .collect()
}

pub fn perfect_pairing_check(a: &GradedFrobeniusAlgebra) -> bool {
    a.space().dim_of_degree(2 * a.shift()) == 1 && perfect_pairing_by_degree(a).iter().all(|&(_, ok)| ok)
}

/// Whether `α^{n+1} = 0` in the algebra, for an isotropic `α` in degree-2 coordinates.
pub fn isotropic_power_check(vc: &VerbitskyComponent, alpha: &[Rational]) -> Result<bool> {
    if alpha.len() != vc.rank() {
        return Err(LlvError::DimensionMismatch("class coordinates".into()));
    }
    if !vc.q.norm(alpha).is_zero() {
        return Err(LlvError::NotIsotropic);
    }
    let a = &vc.algebra;
    let s = a.space();
    let x = s.embed(s.component_of_degree(2).expect("degree 2"), alpha);
    let mut power = a.unit();
    for _ in 0..=vc.n {
        power = a.multiply(&power, &x);
    }
    Ok(is_zero_vec(&power))
}

/// Nonzero integer isotropic vectors with entries in `[−bound, bound]` whose
/// first nonzero entry is positive, in enumeration order, at most `limit`.
pub fn isotropic_vectors(q: &QuadraticSpace, bound: i64, limit: usize) -> Vec<Vec<Rational>> {
    let r = q.dim();
    let mut out = Vec::new();
    let mut cur = vec![-bound; r];
    loop {
        let first = cur.iter().find(|&&x| x != 0);
        if first.is_some_and(|&x| x > 0) {
            let v: Vec<Rational> = cur.iter().map(|&x| rat(x)).collect();
            if q.norm(&v).is_zero() {
                out.push(v);
                if out.len() == limit {
                    return out;
                }
            }
        }
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < bound {
                cur[i] += 1;
                break;
            }
            cur[i] = -bound;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat_vec;
    use crate::graded::validate_algebra;
    use crate::models::frobenius_from_quadratic;
    use proptest::prelude::*;

    fn u_plus_ones(k: usize) -> QuadraticSpace {
        QuadraticSpace::hyperbolic_plane().direct_sum(&QuadraticSpace::diagonal(&vec![1; k]))
    }

    #[test]
    fn laplacian_on_plane() {
        let q = QuadraticSpace::diagonal(&[1, 1]);
        let d = contraction_laplacian(&q, 2).unwrap();
        // Monomials x², xy, y².
        assert_eq!(d, RationalMatrix::from_ints(1, 3, &[2, 0, 2]));
        assert_eq!(contraction_laplacian(&q, 1).unwrap().rows(), 0);
        assert_eq!(harmonic_subspace(&q, 2).unwrap().dim(), 2);
        assert_eq!(
            contraction_laplacian(&QuadraticSpace::diagonal(&[1, 0]), 2),
            Err(LlvError::Degenerate)
        );
    }

    #[test]
    fn laplacian_is_surjective() {
        for (r, m) in [(2, 3), (3, 4), (5, 3)] {
            let q = u_plus_ones(r - 2);
            let d = contraction_laplacian(&q, m).unwrap();
            assert_eq!(d.rank(), sym_dim(r, m - 2));
        }
        assert_eq!(harmonic_subspace(&u_plus_ones(3), 3).unwrap().dim(), 30);
    }

    #[test]
    fn isotropic_powers_are_harmonic() {
        let q = u_plus_ones(3);
        let h = harmonic_subspace(&q, 3).unwrap();
        assert!(h.contains(&linear_power(&rat_vec(&[1, 0, 0, 0, 0]), 3)));
        // Scaled diagonal form: x² + 2y² − 3z², isotropic (1, 1, 1).
        let q = QuadraticSpace::diagonal(&[1, 2, -3]);
        let h = harmonic_subspace(&q, 4).unwrap();
        assert!(h.contains(&linear_power(&rat_vec(&[1, 1, 1]), 4)));
        assert!(!h.contains(&linear_power(&rat_vec(&[1, 0, 0]), 4)));
    }

    #[test]
    fn dims_rank5_n2() {
        let vc = verbitsky_component(&u_plus_ones(3), 2).unwrap();
        assert_eq!(vc.dims(), vec![1, 5, 15, 5, 1]);
        assert!(validate_algebra(&vc.algebra).is_valid());
        assert!(perfect_pairing_check(&vc.algebra));
        assert_eq!(
            perfect_pairing_by_degree(&vc.algebra),
            vec![(0, true), (2, true), (4, true)]
        );
    }

    #[test]
    fn dims_rank4_n3() {
        let vc = verbitsky_component(&u_plus_ones(2), 3).unwrap();
        assert_eq!(vc.dims(), vec![1, 4, 10, 20, 10, 4, 1]);
        assert!(perfect_pairing_check(&vc.algebra));
    }

    #[test]
    fn n1_matches_quadratic_model() {
        let q = QuadraticSpace::from_ints(3, &[2, 1, 0, 1, -1, 0, 0, 0, 3]).unwrap();
        let vc = verbitsky_component(&q, 1).unwrap();
        assert_eq!(vc.dims(), vec![1, 3, 1]);
        let k = frobenius_from_quadratic(&q, "q").unwrap();
        // Same products up to one scalar on the top degree.
        let s = vc.algebra.space();
        let c2 = s.component_of_degree(2).unwrap();
        let scale = {
            let (_, v) = vc.algebra.basis_product(c2, 0, c2, 0).unwrap();
            let (_, w) = k.basis_product(c2, 0, c2, 0).unwrap();
            &v[0] / &w[0]
        };
        for i in 0..3 {
            for j in 0..3 {
                let v = vc
                    .algebra
                    .basis_product(c2, i, c2, j)
                    .map_or(Rational::zero(), |(_, v)| v[0].clone());
                let w = k
                    .basis_product(c2, i, c2, j)
                    .map_or(Rational::zero(), |(_, w)| w[0].clone());
                assert_eq!(v, &w * &scale);
            }
        }
    }

    #[test]
    fn corrupted_pairing_is_detected() {
        let vc = verbitsky_component(&u_plus_ones(3), 2).unwrap();
        let s = vc.algebra.space();
        let c2 = s.component_of_degree(2).unwrap();
        let c6 = s.component_of_degree(6).unwrap();
        let c8 = s.component_of_degree(8).unwrap();
        // Kill the pairing of one degree-2 basis element with degree 6.
        let mut bad = vc.algebra.clone();
        for j in 0..s.dim(c6) {
            bad = bad.with_product_entry(c2, 0, c6, j, zero_vec(s.dim(c8))).unwrap();
        }
        assert!(!perfect_pairing_check(&bad));
    }

    #[test]
    fn isotropic_power_vanishes() {
        let q = u_plus_ones(3);
        let vc = verbitsky_component(&q, 2).unwrap();
        assert!(isotropic_power_check(&vc, &rat_vec(&[1, 0, 0, 0, 0])).unwrap());
        let found = isotropic_vectors(&q, 1, 50);
        assert!(found.iter().any(|v| v.iter().filter(|x| !x.is_zero()).count() >= 3));
        for v in &found {
            assert!(isotropic_power_check(&vc, v).unwrap());
        }
        assert_eq!(
            isotropic_power_check(&vc, &rat_vec(&[1, 1, 0, 0, 0])),
            Err(LlvError::NotIsotropic)
        );
    }

    #[test]
    fn low_degrees_are_free() {
        let vc = verbitsky_component(&u_plus_ones(2), 3).unwrap();
        for d in 0..=3 {
            assert!(vc.pieces[d].ideal.is_zero());
            assert_eq!(vc.pieces[d].dim(), sym_dim(4, d));
        }
    }

    #[test]
    fn size_guard() {
        let q = QuadraticSpace::diagonal(&[1; 23]);
        assert!(matches!(verbitsky_component(&q, 2), Err(LlvError::SizeLimit(_))));
    }

    proptest! {
        #[test]
        fn sym_dimension_formula(r in 1usize..6, m in 0usize..6) {
            prop_assert_eq!(SymmetricPower::new(r, m).dim(), sym_dim(r, m));
        }

        #[test]
        fn dimension_symmetry(diag in proptest::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2)], 2..5), n in 1usize..3) {
            let q = QuadraticSpace::diagonal(&diag);
            let vc = verbitsky_component(&q, n).unwrap();
            let dims = vc.dims();
            for k in 0..=2 * n {
                prop_assert_eq!(dims[k], dims[2 * n - k]);
                prop_assert_eq!(dims[k], sym_dim(diag.len(), k.min(2 * n - k)));
            }
        }
    }
}
