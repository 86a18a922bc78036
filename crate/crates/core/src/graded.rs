//! Graded vector spaces, graded operators and graded Frobenius algebras.
//!
//! A [`GradedVectorSpace`] records cohomological degrees `k` together with a
//! shift `N`; the internal degree of the degree-`k` component is `k - N`.
//! Operators are stored as one dense block per source component, and an
//! algebra stores its structure constants densely per component pair.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LlvError, Result};
use crate::exactla::{axpy, is_zero_vec, rat, zero_vec, Rational, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub degree: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedVectorSpace {
    shift: i32,
    components: Vec<Component>,
    offsets: Vec<usize>,
}

impl GradedVectorSpace {
    /// Degrees must be strictly increasing.
    pub fn new(shift: i32, components: Vec<Component>) -> Result<Self> {
        if components.windows(2).any(|w| w[0].degree >= w[1].degree) {
            return Err(LlvError::Schema("component degrees must be strictly increasing".into()));
        }
        let mut offsets = Vec::with_capacity(components.len());
        let mut acc = 0;
        for c in &components {
            offsets.push(acc);
            acc += c.dim;
        }
        Ok(Self {
            shift,
            components,
            offsets,
        })
    }

    /// Convenience constructor from `(degree, dim)` pairs.
    pub fn from_dims(shift: i32, dims: &[(i32, usize)]) -> Result<Self> {
        Self::new(
            shift,
            dims.iter().map(|&(degree, dim)| Component { degree, dim }).collect(),
        )
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(|c| c.dim).sum()
    }

    pub fn dim(&self, comp: usize) -> usize {
        self.components[comp].dim
    }

    pub fn degree(&self, comp: usize) -> i32 {
        self.components[comp].degree
    }

    pub fn internal_degree(&self, comp: usize) -> i32 {
        self.components[comp].degree - self.shift
    }

    pub fn offset(&self, comp: usize) -> usize {
        self.offsets[comp]
    }

    pub fn component_of_degree(&self, degree: i32) -> Option<usize> {
        self.components.binary_search_by_key(&degree, |c| c.degree).ok()
    }

    pub fn dim_of_degree(&self, degree: i32) -> usize {
        self.component_of_degree(degree).map_or(0, |c| self.dim(c))
    }

    /// Component holding the internal degree `j`.
    pub fn component_of_internal(&self, j: i32) -> Option<usize> {
        self.component_of_degree(j + self.shift)
    }

    /// Target component of a degree-`d` operator applied to `comp`.
    pub fn target(&self, comp: usize, d: i32) -> Option<usize> {
        self.component_of_degree(self.degree(comp) + d)
    }

    /// `(component, local index)` of a global basis index.
    pub fn locate(&self, global: usize) -> (usize, usize) {
        let c = self.offsets.partition_point(|&o| o <= global) - 1;
        // Skip over empty components sharing the same offset.
        let c = (c..self.components.len())
            .find(|&i| global < self.offsets[i] + self.components[i].dim)
            .expect("index out of range");
        (c, global - self.offsets[c])
    }

    pub fn top_degree(&self) -> Option<i32> {
        self.components.iter().rev().find(|c| c.dim > 0).map(|c| c.degree)
    }

    /// Embeds local coordinates of one component into a full-length vector.
    pub fn embed(&self, comp: usize, local: &[Rational]) -> Vec<Rational> {
        assert_eq!(local.len(), self.dim(comp));
        let mut v = zero_vec(self.total_dim());
        v[self.offset(comp)..self.offset(comp) + local.len()].clone_from_slice(local);
        v
    }

    pub fn slice<'a>(&self, comp: usize, v: &'a [Rational]) -> &'a [Rational] {
        &v[self.offset(comp)..self.offset(comp) + self.dim(comp)]
    }

    /// The single component supporting `v`; `None` if `v` is zero or mixed.
    pub fn support(&self, v: &[Rational]) -> Option<usize> {
        let mut found = None;
        for c in 0..self.components.len() {
            if !is_zero_vec(self.slice(c, v)) {
                if found.is_some() {
                    return None;
                }
                found = Some(c);
            }
        }
        found
    }

    pub fn is_homogeneous_of_degree(&self, v: &[Rational], degree: i32) -> bool {
        is_zero_vec(v) || self.support(v).is_some_and(|c| self.degree(c) == degree)
    }

    /// Length of a flattened degree-`d` operator.
    pub fn flat_len(&self, d: i32) -> usize {
        (0..self.components.len())
            .filter_map(|c| self.target(c, d).map(|t| self.dim(c) * self.dim(t)))
            .sum()
    }
}

/// A homogeneous endomorphism of a graded space, one dense block per
/// source component (`None` where the target component does not exist).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedOperator {
    space: Arc<GradedVectorSpace>,
    degree: i32,
    blocks: Vec<Option<RationalMatrix>>,
}

impl GradedOperator {
    pub fn zero(space: &Arc<GradedVectorSpace>, degree: i32) -> Self {
        let blocks = (0..space.num_components())
            .map(|c| {
                space
                    .target(c, degree)
                    .map(|t| RationalMatrix::zeros(space.dim(t), space.dim(c)))
            })
            .collect();
        Self {
            space: space.clone(),
            degree,
            blocks,
        }
    }

    pub fn identity(space: &Arc<GradedVectorSpace>) -> Self {
        Self::scalar_per_component(space, |_| Rational::one())
    }

    /// Degree-0 operator acting on component `c` as `value(c) * id`.
    pub fn scalar_per_component(space: &Arc<GradedVectorSpace>, value: impl Fn(usize) -> Rational) -> Self {
        let blocks = (0..space.num_components())
            .map(|c| Some(RationalMatrix::identity(space.dim(c)).scale(&value(c))))
            .collect();
        Self {
            space: space.clone(),
            degree: 0,
            blocks,
        }
    }

    /// Builds an operator block by block; missing blocks are zero.
    pub fn from_blocks(
        space: &Arc<GradedVectorSpace>,
        degree: i32,
        blocks: impl IntoIterator<Item = (usize, RationalMatrix)>,
    ) -> Result<Self> {
        let mut op = Self::zero(space, degree);
        for (c, m) in blocks {
            let Some(t) = space.target(c, degree) else {
                return Err(LlvError::DimensionMismatch(format!(
                    "component {c} has no target in degree {degree}"
                )));
            };
            if (m.rows(), m.cols()) != (space.dim(t), space.dim(c)) {
                return Err(LlvError::DimensionMismatch(format!("block for component {c}")));
            }
            op.blocks[c] = Some(m);
        }
        Ok(op)
    }

    /// Inverse of [`GradedOperator::flatten`].
    pub fn from_flat(space: &Arc<GradedVectorSpace>, degree: i32, flat: &[Rational]) -> Self {
        assert_eq!(
            flat.len(),
            space.flat_len(degree),
            "flattened operator has wrong length"
        );
        let mut at = 0;
        let blocks = (0..space.num_components())
            .map(|c| {
                space.target(c, degree).map(|t| {
                    let (r, k) = (space.dim(t), space.dim(c));
                    let m = RationalMatrix::from_vec(r, k, flat[at..at + r * k].to_vec());
                    at += r * k;
                    m
                })
            })
            .collect();
        Self {
            space: space.clone(),
            degree,
            blocks,
        }
    }

    /// Extracts a homogeneous operator from a dense matrix on the whole space.
    pub fn from_dense(space: &Arc<GradedVectorSpace>, degree: i32, m: &RationalMatrix) -> Result<Self> {
        let n = space.total_dim();
        if (m.rows(), m.cols()) != (n, n) {
            return Err(LlvError::DimensionMismatch("dense operator has wrong shape".into()));
        }
        let op = Self::from_blocks(
            space,
            degree,
            (0..space.num_components()).filter_map(|c| {
                space.target(c, degree).map(|t| {
                    let mut b = RationalMatrix::zeros(space.dim(t), space.dim(c));
                    for i in 0..space.dim(t) {
                        for j in 0..space.dim(c) {
                            b[(i, j)] = m[(space.offset(t) + i, space.offset(c) + j)].clone();
                        }
                    }
                    (c, b)
                })
            }),
        )?;
        if op.to_dense() != *m {
            return Err(LlvError::NotHomogeneous);
        }
        Ok(op)
    }

    pub fn space(&self) -> &Arc<GradedVectorSpace> {
        &self.space
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Block mapping `comp` to its target, if that target exists.
    pub fn block(&self, comp: usize) -> Option<&RationalMatrix> {
        self.blocks[comp].as_ref()
    }

    pub fn flatten(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.space.flat_len(self.degree));
        for b in self.blocks.iter().flatten() {
            out.extend(b.data().iter().cloned());
        }
        out
    }

    pub fn to_dense(&self) -> RationalMatrix {
        let s = &self.space;
        let mut m = RationalMatrix::zeros(s.total_dim(), s.total_dim());
        for (c, b) in self.blocks.iter().enumerate() {
            let Some(b) = b else { continue };
            let t = s.target(c, self.degree).expect("block without target");
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m[(s.offset(t) + i, s.offset(c) + j)] = b[(i, j)].clone();
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(RationalMatrix::is_zero)
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let s = &self.space;
        assert_eq!(v.len(), s.total_dim());
        let mut out = zero_vec(s.total_dim());
        for (c, b) in self.blocks.iter().enumerate() {
            let Some(b) = b else { continue };
            let src = s.slice(c, v);
            if is_zero_vec(src) {
                continue;
            }
            let t = s.target(c, self.degree).expect("block without target");
            let img = b.mul_vec(src);
            out[s.offset(t)..s.offset(t) + img.len()].clone_from_slice(&img);
        }
        out
    }

    fn assert_same_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space) || self.space == other.space,
            "operators act on different spaces"
        );
    }

    /// `self ∘ other`, of degree `self.degree + other.degree`.
    pub fn compose(&self, other: &Self) -> Self {
        self.assert_same_space(other);
        let s = &self.space;
        let degree = self.degree + other.degree;
        let blocks = (0..s.num_components())
            .map(|c| {
                let t = s.target(c, degree)?;
                let composite = s
                    .target(c, other.degree)
                    .and_then(|m| Some(self.blocks[m].as_ref()?.mul(other.blocks[c].as_ref()?)));
                Some(composite.unwrap_or_else(|| RationalMatrix::zeros(s.dim(t), s.dim(c))))
            })
            .collect();
        Self {
            space: s.clone(),
            degree,
            blocks,
        }
    }

    pub fn bracket(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&RationalMatrix, &RationalMatrix) -> RationalMatrix) -> Self {
        self.assert_same_space(other);
        assert_eq!(self.degree, other.degree, "operators of different degrees");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(f(a, b)),
                _ => None,
            })
            .collect();
        Self {
            space: self.space.clone(),
            degree: self.degree,
            blocks,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_blocks(other, RationalMatrix::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_blocks(other, RationalMatrix::sub)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let blocks = self.blocks.iter().map(|b| b.as_ref().map(|m| m.scale(c))).collect();
        Self {
            space: self.space.clone(),
            degree: self.degree,
            blocks,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    /// `self^k`.
    pub fn power(&self, k: u32) -> Self {
        let mut out = Self::identity(&self.space);
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }
}

/// Structure constants for products of one component pair.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ProductTable {
    target: usize,
    dim_b: usize,
    dim_c: usize,
    values: Vec<Rational>,
}

impl ProductTable {
    fn entry(&self, i: usize, j: usize) -> &[Rational] {
        let at = (i * self.dim_b + j) * self.dim_c;
        &self.values[at..at + self.dim_c]
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut [Rational] {
        let at = (i * self.dim_b + j) * self.dim_c;
        &mut self.values[at..at + self.dim_c]
    }
}

/// Finite-dimensional graded algebra with a unit and an integration
/// functional on its top-degree component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFrobeniusAlgebra {
    name: String,
    space: Arc<GradedVectorSpace>,
    unit: Vec<Rational>,
    integral: Vec<Rational>,
    products: BTreeMap<(usize, usize), ProductTable>,
}

/// Incrementally fills in structure constants by degree.
#[derive(Clone, Debug)]
pub struct AlgebraBuilder {
    algebra: GradedFrobeniusAlgebra,
}

impl AlgebraBuilder {
    /// Sets `x_(deg_a, idx_a) · x_(deg_b, idx_b) = value`, with `value` in
    /// the coordinates of the degree `deg_a + deg_b` component.
    pub fn product(
        &mut self,
        deg_a: i32,
        idx_a: usize,
        deg_b: i32,
        idx_b: usize,
        value: Vec<Rational>,
    ) -> Result<&mut Self> {
        let s = self.algebra.space.clone();
        let (Some(ca), Some(cb)) = (s.component_of_degree(deg_a), s.component_of_degree(deg_b)) else {
            return Err(LlvError::Schema(format!("no component in degree {deg_a} or {deg_b}")));
        };
        if idx_a >= s.dim(ca) || idx_b >= s.dim(cb) {
            return Err(LlvError::Schema(format!(
                "basis index out of range in product ({deg_a},{idx_a})·({deg_b},{idx_b})"
            )));
        }
        let Some(cc) = s.component_of_degree(deg_a + deg_b) else {
            if is_zero_vec(&value) {
                return Ok(self);
            }
            return Err(LlvError::Schema(format!("no component in degree {}", deg_a + deg_b)));
        };
        if value.len() != s.dim(cc) {
            return Err(LlvError::Schema(format!(
                "product value has length {}, expected {}",
                value.len(),
                s.dim(cc)
            )));
        }
        let table = self.algebra.products.entry((ca, cb)).or_insert_with(|| ProductTable {
            target: cc,
            dim_b: s.dim(cb),
            dim_c: s.dim(cc),
            values: zero_vec(s.dim(ca) * s.dim(cb) * s.dim(cc)),
        });
        table.entry_mut(idx_a, idx_b).clone_from_slice(&value);
        Ok(self)
    }

    pub fn build(mut self) -> GradedFrobeniusAlgebra {
        self.algebra.products.retain(|_, t| !is_zero_vec(&t.values));
        self.algebra
    }
}

impl GradedFrobeniusAlgebra {
    /// `unit` holds coordinates in the degree-0 component, `integral` a
    /// functional on the top-degree component (degree `2 * shift`).
    pub fn builder(
        name: impl Into<String>,
        space: GradedVectorSpace,
        unit: Vec<Rational>,
        integral: Vec<Rational>,
    ) -> Result<AlgebraBuilder> {
        let unit_dim = space.dim_of_degree(0);
        if unit.len() != unit_dim {
            return Err(LlvError::Schema(format!(
                "unit has length {}, degree-0 component has dimension {unit_dim}",
                unit.len()
            )));
        }
        let top_dim = space.dim_of_degree(2 * space.shift());
        if integral.len() != top_dim {
            return Err(LlvError::Schema(format!(
                "integral has length {}, top component has dimension {top_dim}",
                integral.len()
            )));
        }
        Ok(AlgebraBuilder {
            algebra: Self {
                name: name.into(),
                space: Arc::new(space),
                unit,
                integral,
                products: BTreeMap::new(),
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Arc<GradedVectorSpace> {
        &self.space
    }

    pub fn shift(&self) -> i32 {
        self.space.shift()
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    /// Dimensions of the components, in degree order.
    pub fn dims(&self) -> Vec<usize> {
        self.space.components().iter().map(|c| c.dim).collect()
    }

    pub fn unit_local(&self) -> &[Rational] {
        &self.unit
    }

    pub fn integral_local(&self) -> &[Rational] {
        &self.integral
    }

    pub fn unit(&self) -> Vec<Rational> {
        match self.space.component_of_degree(0) {
            Some(c) => self.space.embed(c, &self.unit),
            None => zero_vec(self.dim()),
        }
    }

    pub fn top_component(&self) -> Option<usize> {
        self.space.component_of_degree(2 * self.shift())
    }

    /// `∫ x`, reading only the top-degree component.
    pub fn integrate(&self, x: &[Rational]) -> Rational {
        match self.top_component() {
            Some(t) => crate::exactla::dot(self.space.slice(t, x), &self.integral),
            None => Rational::zero(),
        }
    }

    /// Structure constants of `x_(ca,i) · x_(cb,j)`: target component and coordinates.
    pub fn basis_product(&self, ca: usize, i: usize, cb: usize, j: usize) -> Option<(usize, &[Rational])> {
        self.products.get(&(ca, cb)).map(|t| (t.target, t.entry(i, j)))
    }

    /// Product of homogeneous vectors given in local coordinates; `None`
    /// when the product lands outside the space.
    pub fn multiply_local(
        &self,
        ca: usize,
        x: &[Rational],
        cb: usize,
        y: &[Rational],
    ) -> Option<(usize, Vec<Rational>)> {
        let t = self.space.target(ca, self.space.degree(cb))?;
        let mut out = zero_vec(self.space.dim(t));
        if let Some(table) = self.products.get(&(ca, cb)) {
            for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    axpy(&mut out, &(xi * yj), table.entry(i, j));
                }
            }
        }
        Some((t, out))
    }

    /// Product of arbitrary full-length vectors.
    pub fn multiply(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let s = &self.space;
        let mut out = zero_vec(s.total_dim());
        for ca in 0..s.num_components() {
            let xa = s.slice(ca, x);
            if is_zero_vec(xa) {
                continue;
            }
            for cb in 0..s.num_components() {
                let yb = s.slice(cb, y);
                if is_zero_vec(yb) {
                    continue;
                }
                if let Some((t, v)) = self.multiply_local(ca, xa, cb, yb) {
                    let off = s.offset(t);
                    axpy(&mut out[off..off + v.len()], &Rational::one(), &v);
                }
            }
        }
        out
    }

    /// Replaces one structure constant; used to build negative controls.
    pub fn with_product_entry(&self, ca: usize, i: usize, cb: usize, j: usize, value: Vec<Rational>) -> Result<Self> {
        let mut b = AlgebraBuilder { algebra: self.clone() };
        b.product(self.space.degree(ca), i, self.space.degree(cb), j, value)?;
        Ok(b.build())
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    KoszulSign,
    Associativity,
    Unit,
    PairingDegenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    fn push(&mut self, kind: ViolationKind, detail: String) {
        self.violations.push(Violation { kind, detail });
    }
}

fn koszul_sign(da: i32, db: i32) -> Rational {
    if (da * db).rem_euclid(2) == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

/// Exhaustively checks graded commutativity, associativity, the unit law
/// and nondegeneracy of the Poincaré pairing over basis tuples.
pub fn validate_algebra(a: &GradedFrobeniusAlgebra) -> ValidationReport {
    let s = a.space();
    let nc = s.num_components();
    let mut report = ValidationReport::default();
    let basis = |c: usize, i: usize| crate::exactla::unit_vec(s.dim(c), i);

    for ca in 0..nc {
        for cb in ca..nc {
            if s.target(ca, s.degree(cb)).is_none() {
                continue;
            }
            let sign = koszul_sign(s.degree(ca), s.degree(cb));
            for i in 0..s.dim(ca) {
                for j in 0..s.dim(cb) {
                    let (_, xy) = a.multiply_local(ca, &basis(ca, i), cb, &basis(cb, j)).unwrap();
                    let (_, yx) = a.multiply_local(cb, &basis(cb, j), ca, &basis(ca, i)).unwrap();
                    if xy != crate::exactla::scale_vec(&yx, &sign) {
                        report.push(
                            ViolationKind::KoszulSign,
                            format!("x({},{i})·x({},{j})", s.degree(ca), s.degree(cb)),
                        );
                    }
                }
            }
        }
    }

    for ca in 0..nc {
        for cb in 0..nc {
            let Some(cab) = s.target(ca, s.degree(cb)) else {
                continue;
            };
            for cc in 0..nc {
                let Some(cbc) = s.target(cb, s.degree(cc)) else {
                    continue;
                };
                if s.target(cab, s.degree(cc)).is_none() {
                    continue;
                }
                for i in 0..s.dim(ca) {
                    for j in 0..s.dim(cb) {
                        let (_, xy) = a.multiply_local(ca, &basis(ca, i), cb, &basis(cb, j)).unwrap();
                        for k in 0..s.dim(cc) {
                            let (_, left) = a.multiply_local(cab, &xy, cc, &basis(cc, k)).unwrap();
                            let (_, yz) = a.multiply_local(cb, &basis(cb, j), cc, &basis(cc, k)).unwrap();
                            let (_, right) = a.multiply_local(ca, &basis(ca, i), cbc, &yz).unwrap();
                            if left != right {
                                report.push(
                                    ViolationKind::Associativity,
                                    format!(
                                        "x({},{i}), x({},{j}), x({},{k})",
                                        s.degree(ca),
                                        s.degree(cb),
                                        s.degree(cc)
                                    ),
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    let unit = a.unit();
    for g in 0..s.total_dim() {
        let x = crate::exactla::unit_vec(s.total_dim(), g);
        if a.multiply(&unit, &x) != x || a.multiply(&x, &unit) != x {
            let (c, i) = s.locate(g);
            report.push(
                ViolationKind::Unit,
                format!("1·x({},{i}) ≠ x({},{i})", s.degree(c), s.degree(c)),
            );
        }
    }

    let top = 2 * s.shift();
    match a.top_component() {
        Some(t) if s.dim(t) > 0 && !is_zero_vec(&a.integral) => {
            for c in 0..nc {
                let partner = s.component_of_degree(top - s.degree(c));
                let pdim = partner.map_or(0, |p| s.dim(p));
                if pdim != s.dim(c) {
                    report.push(
                        ViolationKind::PairingDegenerate,
                        format!(
                            "degrees {} and {} have dimensions {} and {pdim}",
                            s.degree(c),
                            top - s.degree(c),
                            s.dim(c)
                        ),
                    );
                    continue;
                }
                let Some(p) = partner else { continue };
                if pairing_block(a, c, p).rank() != s.dim(c) {
                    report.push(
                        ViolationKind::PairingDegenerate,
                        format!(
                            "pairing between degrees {} and {} is degenerate",
                            s.degree(c),
                            s.degree(p)
                        ),
                    );
                }
            }
        }
        _ => report.push(
            ViolationKind::PairingDegenerate,
            format!("top component (degree {top}) is zero"),
        ),
    }
    report
}

/// Matrix of `(x, y) ↦ ∫ x·y` on components `ca × cb`.
pub fn pairing_block(a: &GradedFrobeniusAlgebra, ca: usize, cb: usize) -> RationalMatrix {
    let s = a.space();
    let mut m = RationalMatrix::zeros(s.dim(ca), s.dim(cb));
    let top = a.top_component();
    for i in 0..s.dim(ca) {
        for j in 0..s.dim(cb) {
            if let Some((t, v)) = a.basis_product(ca, i, cb, j) {
                if Some(t) == top {
                    m[(i, j)] = crate::exactla::dot(v, a.integral_local());
                }
            }
        }
    }
    m
}

/// Degree-2 operator of left multiplication by `class`.
pub fn cup_operator(a: &GradedFrobeniusAlgebra, class: &[Rational]) -> Result<GradedOperator> {
    let s = a.space();
    if class.len() != s.total_dim() || !s.is_homogeneous_of_degree(class, 2) {
        return Err(LlvError::WrongDegree { expected: 2 });
    }
    let Some(c2) = s.component_of_degree(2) else {
        return Ok(GradedOperator::zero(s, 2));
    };
    let local = s.slice(c2, class);
    let blocks = (0..s.num_components()).filter_map(|c| {
        let t = s.target(c, 2)?;
        let mut m = RationalMatrix::zeros(s.dim(t), s.dim(c));
        for j in 0..s.dim(c) {
            let (_, img) = a.multiply_local(c2, local, c, &crate::exactla::unit_vec(s.dim(c), j))?;
            for (i, v) in img.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Some((c, m))
    });
    GradedOperator::from_blocks(s, 2, blocks.collect::<Vec<_>>())
}

/// Cup product operator of a class given in degree-2 coordinates.
pub fn cup_by_coords(a: &GradedFrobeniusAlgebra, coords: &[Rational]) -> Result<GradedOperator> {
    let s = a.space();
    let c2 = s.component_of_degree(2).ok_or(LlvError::WrongDegree { expected: 2 })?;
    if coords.len() != s.dim(c2) {
        return Err(LlvError::DimensionMismatch("class coordinates".into()));
    }
    cup_operator(a, &s.embed(c2, coords))
}

/// The grading operator: `(k - N) id` on the degree-`k` component.
pub fn h_operator(a: &GradedFrobeniusAlgebra) -> GradedOperator {
    let s = a.space();
    GradedOperator::scalar_per_component(s, |c| rat(i64::from(s.internal_degree(c))))
}

/// The signed Poincaré pairing `φ(α, β) = (-1)^q ∫ α·β` for `α` of degree
/// `N + 2q` or `N + 2q + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiForm {
    pub matrix: RationalMatrix,
}

pub fn phi_sign(degree: i32, shift: i32) -> Rational {
    let q = (degree - shift).div_euclid(2);
    if q.rem_euclid(2) == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

pub fn phi_form(a: &GradedFrobeniusAlgebra) -> PhiForm {
    let s = a.space();
    let n = s.total_dim();
    let mut m = RationalMatrix::zeros(n, n);
    for ca in 0..s.num_components() {
        let sign = phi_sign(s.degree(ca), s.shift());
        for cb in 0..s.num_components() {
            let block = pairing_block(a, ca, cb);
            for i in 0..s.dim(ca) {
                for j in 0..s.dim(cb) {
                    if !block[(i, j)].is_zero() {
                        m[(s.offset(ca) + i, s.offset(cb) + j)] = &block[(i, j)] * &sign;
                    }
                }
            }
        }
    }
    PhiForm { matrix: m }
}

/// JSON document for a graded Frobenius algebra; rationals are `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    pub shift: i32,
    pub components: Vec<Component>,
    pub unit: Vec<String>,
    pub integral: Vec<String>,
    #[serde(default)]
    pub products: Vec<ProductDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDocument {
    pub deg_a: i32,
    pub idx_a: usize,
    pub deg_b: i32,
    pub idx_b: usize,
    pub value: Vec<String>,
}

fn parse_rationals(values: &[String]) -> Result<Vec<Rational>> {
    values
        .iter()
        .map(|s| {
            s.trim()
                .parse::<Rational>()
                .map_err(|e| LlvError::Schema(format!("bad rational {s:?}: {e}")))
        })
        .collect()
}

fn format_rationals(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

impl AlgebraDocument {
    pub fn into_algebra(self) -> Result<GradedFrobeniusAlgebra> {
        let space = GradedVectorSpace::new(self.shift, self.components)?;
        let mut b = GradedFrobeniusAlgebra::builder(
            self.name,
            space,
            parse_rationals(&self.unit)?,
            parse_rationals(&self.integral)?,
        )?;
        for p in self.products {
            b.product(p.deg_a, p.idx_a, p.deg_b, p.idx_b, parse_rationals(&p.value)?)?;
        }
        Ok(b.build())
    }

    pub fn from_algebra(a: &GradedFrobeniusAlgebra) -> Self {
        let s = a.space();
        let mut products = Vec::new();
        for (&(ca, cb), table) in &a.products {
            for i in 0..s.dim(ca) {
                for j in 0..table.dim_b {
                    let v = table.entry(i, j);
                    if !is_zero_vec(v) {
                        products.push(ProductDocument {
                            deg_a: s.degree(ca),
                            idx_a: i,
                            deg_b: s.degree(cb),
                            idx_b: j,
                            value: format_rationals(v),
                        });
                    }
                }
            }
        }
        Self {
            name: a.name.clone(),
            shift: s.shift(),
            components: s.components().to_vec(),
            unit: format_rationals(&a.unit),
            integral: format_rationals(&a.integral),
            products,
        }
    }
}

/// Parses an algebra document without checking the algebra axioms.
pub fn parse_algebra(json: &str) -> Result<GradedFrobeniusAlgebra> {
    let doc: AlgebraDocument = serde_json::from_str(json).map_err(|e| LlvError::Schema(e.to_string()))?;
    doc.into_algebra()
}

/// Parses and validates an algebra document.
pub fn load_algebra(json: &str) -> Result<GradedFrobeniusAlgebra> {
    let a = parse_algebra(json)?;
    let report = validate_algebra(&a);
    if let Some(v) = report.violations.first() {
        return Err(LlvError::Validation(format!(
            "{} violation(s), first: {:?} {}",
            report.violations.len(),
            v.kind,
            v.detail
        )));
    }
    Ok(a)
}

pub fn save_algebra(a: &GradedFrobeniusAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraDocument::from_algebra(a)).expect("algebra documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rat_vec, unit_vec};

    /// ℚ ⊕ ℚ² ⊕ ℚ with a·b = q(a,b) t for q = diag(1, -1), built by hand.
    fn tiny() -> GradedFrobeniusAlgebra {
        let space = GradedVectorSpace::from_dims(2, &[(0, 1), (2, 2), (4, 1)]).unwrap();
        let mut b = GradedFrobeniusAlgebra::builder("tiny", space, rat_vec(&[1]), rat_vec(&[1])).unwrap();
        b.product(0, 0, 0, 0, rat_vec(&[1])).unwrap();
        for i in 0..2 {
            b.product(0, 0, 2, i, unit_vec(2, i)).unwrap();
            b.product(2, i, 0, 0, unit_vec(2, i)).unwrap();
        }
        b.product(0, 0, 4, 0, rat_vec(&[1])).unwrap();
        b.product(4, 0, 0, 0, rat_vec(&[1])).unwrap();
        b.product(2, 0, 2, 0, rat_vec(&[1])).unwrap();
        b.product(2, 1, 2, 1, rat_vec(&[-1])).unwrap();
        b.build()
    }

    #[test]
    fn space_rejects_unsorted_degrees() {
        assert!(GradedVectorSpace::from_dims(0, &[(2, 1), (0, 1)]).is_err());
        assert!(GradedVectorSpace::from_dims(0, &[(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn locate_skips_empty_components() {
        let s = GradedVectorSpace::from_dims(0, &[(0, 1), (1, 0), (2, 2)]).unwrap();
        assert_eq!(s.locate(0), (0, 0));
        assert_eq!(s.locate(1), (2, 0));
        assert_eq!(s.locate(2), (2, 1));
    }

    #[test]
    fn tiny_is_valid() {
        let r = validate_algebra(&tiny());
        assert!(r.is_valid(), "{r:?}");
    }

    #[test]
    fn odd_symmetric_product_breaks_koszul_rule() {
        let space = GradedVectorSpace::from_dims(1, &[(0, 1), (1, 2), (2, 1)]).unwrap();
        let mut b = GradedFrobeniusAlgebra::builder("bad", space, rat_vec(&[1]), rat_vec(&[1])).unwrap();
        b.product(0, 0, 0, 0, rat_vec(&[1])).unwrap();
        for i in 0..2 {
            b.product(0, 0, 1, i, unit_vec(2, i)).unwrap();
            b.product(1, i, 0, 0, unit_vec(2, i)).unwrap();
        }
        b.product(0, 0, 2, 0, rat_vec(&[1])).unwrap();
        b.product(2, 0, 0, 0, rat_vec(&[1])).unwrap();
        // Symmetric instead of antisymmetric: x0·x1 = x1·x0 = t.
        b.product(1, 0, 1, 1, rat_vec(&[1])).unwrap();
        b.product(1, 1, 1, 0, rat_vec(&[1])).unwrap();
        let r = validate_algebra(&b.build());
        assert!(r.count(ViolationKind::KoszulSign) > 0);
    }

    #[test]
    fn zero_top_component_is_degenerate() {
        let space = GradedVectorSpace::from_dims(1, &[(0, 1), (2, 0)]).unwrap();
        let mut b = GradedFrobeniusAlgebra::builder("flat", space, rat_vec(&[1]), vec![]).unwrap();
        b.product(0, 0, 0, 0, rat_vec(&[1])).unwrap();
        let r = validate_algebra(&b.build());
        assert!(r.count(ViolationKind::PairingDegenerate) > 0);
    }

    #[test]
    fn h_eigenvalues_and_trace() {
        let a = tiny();
        let h = h_operator(&a);
        assert_eq!(h.block(0).unwrap()[(0, 0)], rat(-2));
        assert_eq!(h.block(1).unwrap(), &RationalMatrix::identity(2).scale(&rat(0)));
        assert_eq!(h.block(2).unwrap()[(0, 0)], rat(2));
        let trace: Rational = (0..4).map(|i| h.to_dense()[(i, i)].clone()).sum();
        assert!(trace.is_zero());
    }

    #[test]
    fn cup_on_tiny_model() {
        let a = tiny();
        let class = a.space().embed(1, &rat_vec(&[2, 3]));
        let e = cup_operator(&a, &class).unwrap();
        assert_eq!(e.apply(&a.unit()), class);
        let b = a.space().embed(1, &rat_vec(&[1, 1]));
        // q(a, b) = 2·1 - 3·1 = -1.
        assert_eq!(e.apply(&b), a.space().embed(2, &rat_vec(&[-1])));
        assert!(e.apply(&a.space().embed(2, &rat_vec(&[1]))).iter().all(Zero::is_zero));
        assert!(cup_operator(&a, &zero_vec(4)).unwrap().is_zero());
        assert_eq!(cup_operator(&a, &a.unit()), Err(LlvError::WrongDegree { expected: 2 }));
    }

    #[test]
    fn phi_signs_on_tiny_model() {
        let phi = phi_form(&tiny()).matrix;
        assert_eq!(phi[(0, 3)], rat(-1));
        assert_eq!(phi[(3, 0)], rat(-1));
        assert_eq!(phi[(1, 1)], rat(1));
        assert_eq!(phi[(2, 2)], rat(-1));
        assert_eq!(phi[(0, 1)], rat(0));
        assert_eq!(phi[(0, 0)], rat(0));
    }

    #[test]
    fn operator_algebra_basics() {
        let a = tiny();
        let e = cup_by_coords(&a, &rat_vec(&[1, 0])).unwrap();
        let h = h_operator(&a);
        assert_eq!(h.bracket(&e), e.scale(&rat(2)));
        assert_eq!(GradedOperator::from_flat(a.space(), 2, &e.flatten()), e);
        assert_eq!(GradedOperator::from_dense(a.space(), 2, &e.to_dense()).unwrap(), e);
        assert_eq!(
            GradedOperator::from_dense(a.space(), 0, &e.to_dense()),
            Err(LlvError::NotHomogeneous)
        );
        assert_eq!(e.compose(&e).degree(), 4);
    }

    #[test]
    fn json_round_trip_and_schema_errors() {
        let a = tiny();
        assert_eq!(load_algebra(&save_algebra(&a)).unwrap(), a);
        let bad = r#"{"name":"x","shift":0,"components":[{"degree":2,"dim":1},{"degree":0,"dim":1}],"unit":["1"],"integral":["1"]}"#;
        assert!(matches!(load_algebra(bad), Err(LlvError::Schema(_))));
        assert!(matches!(load_algebra("{\"name\": 3}"), Err(LlvError::Schema(_))));
    }

    #[test]
    fn invalid_document_reports_validation_error() {
        let a = tiny().with_product_entry(1, 0, 1, 1, rat_vec(&[5])).unwrap();
        assert!(matches!(load_algebra(&save_algebra(&a)), Err(LlvError::Validation(_))));
    }
}
