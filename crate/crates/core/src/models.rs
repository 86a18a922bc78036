//! Built-in algebras: the exterior algebra of the quaternions with its
//! metric sl₂-triples, K3-type algebras from quadratic forms, and lattices.

use std::fmt;

use num_traits::Zero;

use crate::error::{LlvError, Result};
use crate::exactla::{rat, unit_vec, zero_vec, Inertia, Rational, RationalMatrix};
use crate::graded::{cup_by_coords, h_operator, GradedFrobeniusAlgebra, GradedOperator, GradedVectorSpace};
use crate::lefschetz::Sl2Triple;
use crate::liealg::QuadraticSpace;

/// Increasing index sets of size `k` in `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sign of the permutation sorting `seq` (entries distinct).
fn sort_sign(seq: &[usize]) -> i64 {
    let inversions = (0..seq.len())
        .flat_map(|i| (i + 1..seq.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| seq[i] > seq[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Λ•(ℚⁿ)*` for even `n`, with basis `e_S` (S increasing) in each degree,
/// shift `n/2` and `∫ e_{0…n−1} = 1`.
pub fn exterior_algebra(n: usize, name: &str) -> GradedFrobeniusAlgebra {
    assert!(
        n.is_multiple_of(2),
        "exterior algebra needs an even number of generators"
    );
    let bases: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| subsets(n, k)).collect();
    let dims: Vec<(i32, usize)> = bases.iter().enumerate().map(|(k, b)| (k as i32, b.len())).collect();
    let space = GradedVectorSpace::from_dims((n / 2) as i32, &dims).expect("increasing degrees");
    let mut b = GradedFrobeniusAlgebra::builder(name, space, vec![rat(1)], vec![rat(1)]).expect("shapes match");
    for (p, bp) in bases.iter().enumerate() {
        for (q, bq) in bases.iter().enumerate().take(n - p + 1) {
            for (i, s) in bp.iter().enumerate() {
                for (j, t) in bq.iter().enumerate() {
                    if s.iter().any(|x| t.contains(x)) {
                        continue;
                    }
                    let joined: Vec<usize> = s.iter().chain(t).copied().collect();
                    let mut sorted = joined.clone();
                    sorted.sort_unstable();
                    let target = &bases[p + q];
                    let idx = target.iter().position(|u| *u == sorted).expect("subset is listed");
                    let mut value = zero_vec(target.len());
                    value[idx] = rat(sort_sign(&joined));
                    b.product(p as i32, i, q as i32, j, value).expect("valid product");
                }
            }
        }
    }
    b.build()
}

/// One of the three imaginary quaternion units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuaternionUnit {
    I,
    J,
    K,
}

impl QuaternionUnit {
    pub const ALL: [Self; 3] = [Self::I, Self::J, Self::K];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for QuaternionUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::I => "I",
            Self::J => "J",
            Self::K => "K",
        };
        f.write_str(s)
    }
}

/// `Λ•ℍ*` with the left action of `i, j, k`, the standard inner product and
/// the orientation `e⁰∧e¹∧e²∧e³`.
#[derive(Clone, Debug)]
pub struct QuaternionicExteriorModel {
    pub algebra: GradedFrobeniusAlgebra,
    /// Left multiplication by `i, j, k` on the basis `(1, i, j, k)`.
    pub units: [RationalMatrix; 3],
    pub inner_product: RationalMatrix,
    pub orientation: i64,
    /// The forms `⟨λ(−), −⟩` in degree-2 coordinates.
    pub omegas: [Vec<Rational>; 3],
    star: RationalMatrix,
    star_inverse: RationalMatrix,
}

/// Left multiplication by a unit quaternion on `(1, i, j, k)`.
fn left_multiplication(unit: QuaternionUnit) -> RationalMatrix {
    // Images of 1, i, j, k as (sign, basis index).
    let images: [(i64, usize); 4] = match unit {
        QuaternionUnit::I => [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        QuaternionUnit::J => [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        QuaternionUnit::K => [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    };
    let mut m = RationalMatrix::zeros(4, 4);
    for (col, (sign, row)) in images.into_iter().enumerate() {
        m[(row, col)] = rat(sign);
    }
    m
}

/// The dense Hodge star on `Λ•(ℚⁿ)*` for the identity metric.
fn star_matrix(a: &GradedFrobeniusAlgebra, n: usize) -> RationalMatrix {
    let s = a.space();
    let mut m = RationalMatrix::zeros(s.total_dim(), s.total_dim());
    for k in 0..=n {
        let from = s.component_of_degree(k as i32).expect("degree present");
        let to = s.component_of_degree((n - k) as i32).expect("degree present");
        let sources = subsets(n, k);
        let targets = subsets(n, n - k);
        for (i, set) in sources.iter().enumerate() {
            let rest: Vec<usize> = (0..n).filter(|x| !set.contains(x)).collect();
            let j = targets.iter().position(|t| *t == rest).expect("complement is listed");
            let joined: Vec<usize> = set.iter().chain(&rest).copied().collect();
            m[(s.offset(to) + j, s.offset(from) + i)] = rat(sort_sign(&joined));
        }
    }
    m
}

pub fn exterior_quaternion_model() -> QuaternionicExteriorModel {
    let algebra = exterior_algebra(4, "quaternion");
    let units = QuaternionUnit::ALL.map(left_multiplication);
    let inner_product = RationalMatrix::identity(4);
    let pairs = subsets(4, 2);
    let omegas = units.clone().map(|u| {
        // ω(e_a, e_b) = ⟨u e_a, e_b⟩ is the coefficient of e^a ∧ e^b.
        let form = u.transpose().mul(&inner_product);
        pairs.iter().map(|p| form[(p[0], p[1])].clone()).collect()
    });
    let star = star_matrix(&algebra, 4);
    let star_inverse = star.inverse().expect("star is invertible");
    QuaternionicExteriorModel {
        algebra,
        units,
        inner_product,
        orientation: 1,
        omegas,
        star,
        star_inverse,
    }
}

impl QuaternionicExteriorModel {
    pub fn unit(&self, u: QuaternionUnit) -> &RationalMatrix {
        &self.units[u.index()]
    }

    pub fn omega(&self, u: QuaternionUnit) -> &[Rational] {
        &self.omegas[u.index()]
    }

    /// `ω_λ` as a full-length vector of the algebra.
    pub fn omega_full(&self, u: QuaternionUnit) -> Vec<Rational> {
        let s = self.algebra.space();
        s.embed(s.component_of_degree(2).expect("degree 2"), self.omega(u))
    }

    /// `ω_λ` as an antisymmetric 4×4 matrix `ω(e_a, e_b)`.
    pub fn omega_matrix(&self, u: QuaternionUnit) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(4, 4);
        for (p, v) in subsets(4, 2).iter().zip(self.omega(u)) {
            m[(p[0], p[1])] = v.clone();
            m[(p[1], p[0])] = -v.clone();
        }
        m
    }

    pub fn star_matrix(&self) -> &RationalMatrix {
        &self.star
    }
}

/// Hodge star of a homogeneous element (zero maps to zero).
pub fn hodge_star(model: &QuaternionicExteriorModel, x: &[Rational]) -> Result<Vec<Rational>> {
    let s = model.algebra.space();
    if x.len() != s.total_dim() {
        return Err(LlvError::DimensionMismatch("element length".into()));
    }
    if s.support(x).is_none() && !crate::exactla::is_zero_vec(x) {
        return Err(LlvError::NotHomogeneous);
    }
    Ok(model.star.mul_vec(x))
}

/// `(e, h, f)` for `ω_λ` with `f = ∗⁻¹ ∘ e ∘ ∗`.
pub fn metric_triple(model: &QuaternionicExteriorModel, u: QuaternionUnit) -> Sl2Triple {
    let a = &model.algebra;
    let e = cup_by_coords(a, model.omega(u)).expect("ω is a degree-2 class");
    let dense = model.star_inverse.mul(&e.to_dense()).mul(&model.star);
    let f = GradedOperator::from_dense(a.space(), -2, &dense).expect("conjugate has degree −2");
    Sl2Triple { e, h: h_operator(a), f }
}

/// `K_{λμ} = [e_λ, f_μ]` for distinct units.
pub fn weil_commutator(
    model: &QuaternionicExteriorModel,
    l: QuaternionUnit,
    m: QuaternionUnit,
) -> Result<GradedOperator> {
    if l == m {
        return Err(LlvError::EqualIndices);
    }
    Ok(metric_triple(model, l).e.bracket(&metric_triple(model, m).f))
}

/// `ℚ·1 ⊕ V ⊕ ℚ·t` with `a·b = q(a, b) t`, in degrees 0, 2, 4 with `∫t = 1`.
pub fn frobenius_from_quadratic(q: &QuadraticSpace, name: &str) -> Result<GradedFrobeniusAlgebra> {
    if !q.is_nondegenerate() {
        return Err(LlvError::Degenerate);
    }
    let r = q.dim();
    let space = GradedVectorSpace::from_dims(2, &[(0, 1), (2, r), (4, 1)])?;
    let mut b = GradedFrobeniusAlgebra::builder(name, space, vec![rat(1)], vec![rat(1)])?;
    b.product(0, 0, 0, 0, vec![rat(1)])?;
    b.product(0, 0, 4, 0, vec![rat(1)])?;
    b.product(4, 0, 0, 0, vec![rat(1)])?;
    for i in 0..r {
        b.product(0, 0, 2, i, unit_vec(r, i))?;
        b.product(2, i, 0, 0, unit_vec(r, i))?;
        for j in 0..r {
            let g = &q.gram()[(i, j)];
            if !g.is_zero() {
                b.product(2, i, 2, j, vec![g.clone()])?;
            }
        }
    }
    Ok(b.build())
}

pub fn hyperbolic_plane() -> QuadraticSpace {
    QuadraticSpace::hyperbolic_plane()
}

/// The negative-definite `E₈` lattice: minus the Cartan matrix.
pub fn e8_minus() -> QuadraticSpace {
    // Dynkin edges with nodes 0..8: a chain 0-2-3-4-5-6-7 and a branch 1-3.
    const EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
    let mut m = RationalMatrix::diagonal(&vec![rat(-2); 8]);
    for (a, b) in EDGES {
        m[(a, b)] = rat(1);
        m[(b, a)] = rat(1);
    }
    QuadraticSpace::new(m).expect("symmetric")
}

/// `U³ ⊕ E₈(−1)²`.
pub fn k3_lattice() -> QuadraticSpace {
    let u = hyperbolic_plane();
    let e8 = e8_minus();
    u.direct_sum(&u).direct_sum(&u).direct_sum(&e8).direct_sum(&e8)
}

/// Basis of `{X : XᵀG + GX = 0}`, the Lie algebra of `G`.
pub fn orthogonal_lie_algebra_basis(gram: &RationalMatrix) -> Vec<RationalMatrix> {
    let n = gram.rows();
    // Unknown X[i, j] at column i·n + j; equation per (a, b) entry.
    let mut system = RationalMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let row = a * n + b;
            for k in 0..n {
                // (XᵀG)[a, b] = Σ_k X[k, a] G[k, b]
                system[(row, k * n + a)] += &gram[(k, b)];
                // (GX)[a, b] = Σ_k G[a, k] X[k, b]
                system[(row, k * n + b)] += &gram[(a, k)];
            }
        }
    }
    system
        .kernel()
        .basis()
        .iter()
        .map(|v| RationalMatrix::from_vec(n, n, v.clone()))
        .collect()
}

/// Inertia of the Killing form of the Lie algebra of `G`, from the trace
/// identity `K(X, Y) = (n − 2) tr(XY)` on an explicit skew basis.
pub fn orthogonal_killing_inertia(gram: &RationalMatrix) -> Inertia {
    let n = gram.rows();
    let basis = orthogonal_lie_algebra_basis(gram);
    let d = basis.len();
    let mut k = RationalMatrix::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            let p = basis[a].mul(&basis[b]);
            let tr: Rational = (0..n).map(|i| p[(i, i)].clone()).sum();
            let v = tr * rat(n as i64 - 2);
            k[(a, b)] = v.clone();
            k[(b, a)] = v;
        }
    }
    k.signature().expect("symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat_vec;
    use crate::graded::validate_algebra;
    use crate::lefschetz::{jacobson_morozov_dual, lefschetz_check};
    use QuaternionUnit::{I, J, K};

    #[test]
    fn quaternion_table() {
        let m = exterior_quaternion_model();
        assert_eq!(m.algebra.dim(), 16);
        assert_eq!(m.algebra.dims(), vec![1, 4, 6, 4, 1]);
        let id = RationalMatrix::identity(4);
        for u in QuaternionUnit::ALL {
            assert_eq!(m.unit(u).mul(m.unit(u)), id.neg());
        }
        assert_eq!(m.unit(I).mul(m.unit(J)), *m.unit(K));
        assert_eq!(m.unit(J).mul(m.unit(I)), m.unit(K).neg());
        assert_eq!(m.unit(J).mul(m.unit(K)), *m.unit(I));
        assert_eq!(m.unit(K).mul(m.unit(I)), *m.unit(J));
    }

    #[test]
    fn exterior_algebra_is_valid() {
        let m = exterior_quaternion_model();
        assert!(validate_algebra(&m.algebra).is_valid());
        assert!(validate_algebra(&exterior_algebra(2, "plane")).is_valid());
    }

    #[test]
    fn omegas_by_hand() {
        // Pairs in order 01, 02, 03, 12, 13, 23.
        let m = exterior_quaternion_model();
        assert_eq!(m.omega(I), rat_vec(&[1, 0, 0, 0, 0, 1]).as_slice());
        assert_eq!(m.omega(J), rat_vec(&[0, 1, 0, 0, -1, 0]).as_slice());
        for u in QuaternionUnit::ALL {
            let w = m.omega_matrix(u);
            assert_eq!(w, m.unit(u).transpose().mul(&m.inner_product));
            let top = m.algebra.multiply(&m.omega_full(u), &m.omega_full(u));
            assert!(!crate::exactla::is_zero_vec(&top));
        }
    }

    #[test]
    fn star_conventions() {
        let m = exterior_quaternion_model();
        let s = m.algebra.space();
        let e = |deg: i32, i: usize| s.embed(s.component_of_degree(deg).unwrap(), &unit_vec(s.dim_of_degree(deg), i));
        assert_eq!(hodge_star(&m, &e(2, 0)).unwrap(), e(2, 5));
        assert_eq!(hodge_star(&m, &e(0, 0)).unwrap(), e(4, 0));
        for i in 0..4 {
            let twice = hodge_star(&m, &hodge_star(&m, &e(1, i)).unwrap()).unwrap();
            assert_eq!(twice, crate::exactla::scale_vec(&e(1, i), &rat(-1)));
        }
        let mixed: Vec<Rational> = e(0, 0).iter().zip(e(1, 0)).map(|(a, b)| a + b).collect();
        assert_eq!(hodge_star(&m, &mixed), Err(LlvError::NotHomogeneous));
    }

    #[test]
    fn star_squares_by_degree() {
        let m = exterior_quaternion_model();
        let s = m.algebra.space();
        let sq = m.star_matrix().mul(m.star_matrix());
        for c in 0..s.num_components() {
            let k = s.degree(c);
            let sign = if (k * (4 - k)) % 2 == 0 { 1 } else { -1 };
            for i in 0..s.dim(c) {
                let g = s.offset(c) + i;
                assert_eq!(sq[(g, g)], rat(sign));
            }
        }
    }

    #[test]
    fn metric_triples_match_dual() {
        let m = exterior_quaternion_model();
        let triples = QuaternionUnit::ALL.map(|u| metric_triple(&m, u));
        for t in &triples {
            assert!(t.verify());
            assert!(lefschetz_check(m.algebra.space(), &t.e));
            assert_eq!(jacobson_morozov_dual(m.algebra.space(), &t.e).unwrap(), t.f);
        }
        assert_eq!(triples[0].f.compose(&triples[1].f), triples[1].f.compose(&triples[0].f));
    }

    #[test]
    fn weil_relations() {
        let m = exterior_quaternion_model();
        let t = |u: QuaternionUnit| metric_triple(&m, u);
        let k = |a, b| weil_commutator(&m, a, b).unwrap();
        assert_eq!(k(I, J).bracket(&t(J).e), t(I).e.scale(&rat(2)));
        assert!(k(I, J).bracket(&t(I).h).is_zero());
        // Jacobi with the two relations above forces the factor 2.
        assert_eq!(k(I, J).bracket(&k(J, K)), k(I, K).scale(&rat(2)));
        assert_eq!(k(I, J).bracket(&t(J).f), t(I).f.scale(&rat(2)));
        assert!(k(I, J).bracket(&t(K).e).is_zero() && k(I, J).bracket(&t(K).f).is_zero());
        assert_eq!(weil_commutator(&m, I, I), Err(LlvError::EqualIndices));
    }

    #[test]
    fn quadratic_models() {
        let u = hyperbolic_plane();
        assert_eq!(u.signature(), Inertia::new(1, 1, 0));
        let a = frobenius_from_quadratic(&u, "U").unwrap();
        assert_eq!(a.dim(), 4);
        assert!(validate_algebra(&a).is_valid());
        let e = cup_by_coords(&a, &rat_vec(&[1, 1])).unwrap();
        assert!(lefschetz_check(a.space(), &e));
        let iso = cup_by_coords(&a, &rat_vec(&[1, 0])).unwrap();
        assert!(!lefschetz_check(a.space(), &iso));
        let degenerate = QuadraticSpace::diagonal(&[1, 0]);
        assert_eq!(
            frobenius_from_quadratic(&degenerate, "d").unwrap_err(),
            LlvError::Degenerate
        );
    }

    #[test]
    fn lattices() {
        let e8 = e8_minus();
        assert_eq!(e8.signature(), Inertia::new(0, 8, 0));
        assert_eq!(e8.gram().determinant().unwrap(), rat(1));
        let k3 = k3_lattice();
        assert_eq!(k3.dim(), 22);
        assert_eq!(k3.signature(), Inertia::new(3, 19, 0));
        let a = frobenius_from_quadratic(&k3, "k3").unwrap();
        assert_eq!(a.dims(), vec![1, 22, 1]);
    }

    #[test]
    fn orthogonal_algebra_dimension() {
        let g = RationalMatrix::diagonal(&rat_vec(&[1, 1, 1, 1, -1]));
        let basis = orthogonal_lie_algebra_basis(&g);
        assert_eq!(basis.len(), 10);
        for x in &basis {
            assert!(x.transpose().mul(&g).add(&g.mul(x)).is_zero());
        }
        assert_eq!(orthogonal_killing_inertia(&g), Inertia::new(4, 6, 0));
    }
}
