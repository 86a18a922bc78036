use std::collections::BTreeMap;
use std::path::Path;

use llv_core::exactla::{unit_vec, RationalMatrix};
use llv_core::graded::{cup_by_coords, h_operator, phi_form, validate_algebra, GradedFrobeniusAlgebra, ViolationKind};
use llv_core::lefschetz::{jacobson_morozov_dual, Sl2Triple};
use llv_core::liealg::{
    derivation_check, infinitesimal_invariance_check, invariance_check_matrices, lie_closure_with,
    spanning_lefschetz_classes, total_lie_algebra, QuadraticSpace,
};
use llv_core::models::{
    exterior_quaternion_model, metric_triple, orthogonal_killing_inertia, weil_commutator, QuaternionUnit,
};
use llv_core::rep::{
    dims_by_degree, irreducibility_witness, is_stable_under, prim_subspace, restriction_to_subspace_injective,
    submodule_generated_with, verbitsky_subring, weil_parity_by_degree, weil_parity_check,
};
use llv_core::verbitsky::{
    isotropic_power_check, isotropic_vectors, perfect_pairing_by_degree, verbitsky_component_with_limit, MAX_SYM_DIM,
};
use llv_core::{rat, Execution, GradedOperator, Inertia, Rational};
use serde_json::{json, Value};

use crate::report::{Check, Report};
use crate::source::{default_verbitsky_form, parse_class_list, read_algebra, read_gram, resolve, CliError, ModelKind};

/// Killing forms are computed only up to this algebra dimension.
pub const KILLING_DIM_LIMIT: usize = 60;
/// Symmetric-power size limit under `--large`.
pub const LARGE_SYM_DIM: usize = 20_000;
/// Cap on sl₂-triples whose lowering operators are compared pairwise.
const LOWERING_PAIR_TRIPLES: usize = 50;
const WITNESS_SAMPLES: usize = 20;

pub enum Generators {
    Auto,
    List(String),
}

pub struct VerbitskyArgs<'a> {
    pub rank: Option<usize>,
    pub n: usize,
    pub gram: Option<&'a Path>,
    pub llv: bool,
    pub large: bool,
}

fn dims_json(dims: &BTreeMap<i32, usize>) -> Value {
    Value::Object(dims.iter().map(|(d, n)| (d.to_string(), json!(n))).collect())
}

fn inertia_json(i: &Inertia) -> Value {
    json!([i.positive, i.negative, i.zero])
}

fn count_where<T>(items: &[T], f: impl Fn(&T) -> bool) -> usize {
    items.iter().filter(|x| f(x)).count()
}

pub fn validate(path: &Path) -> Result<Report, CliError> {
    let a = read_algebra(path)?;
    let mut report = Report::new("validate", a.name());
    report.set("dims", a.dims());
    report.set("shift", a.shift());
    let v = validate_algebra(&a);
    for (name, kind) in [
        ("graded commutativity", ViolationKind::KoszulSign),
        ("associativity", ViolationKind::Associativity),
        ("unit", ViolationKind::Unit),
        ("perfect pairing", ViolationKind::PairingDegenerate),
    ] {
        report.push(Check::new(name, 0, v.count(kind), "graded Frobenius algebra axioms"));
    }
    let details: Vec<&str> = v.violations.iter().take(20).map(|x| x.detail.as_str()).collect();
    if !details.is_empty() {
        report.set("violations", details);
    }
    Ok(report)
}

/// Closure checks shared by `llv` and `verbitsky --llv`.
fn llv_checks(
    report: &mut Report,
    a: &GradedFrobeniusAlgebra,
    form: Option<&QuadraticSpace>,
    classes: Vec<Vec<Rational>>,
    exec: Execution,
) {
    report.set("generators", classes.len());
    let total = match total_lie_algebra(a, classes, exec) {
        Ok(t) => t,
        Err(e) => {
            report.push(Check::new(
                "sl2 triples",
                "all classes Lefschetz",
                e.to_string(),
                "Jacobson–Morozov dual",
            ));
            return;
        }
    };
    let g = total.algebra;
    report.push(Check::new(
        "sl2 triples",
        total.triples.len(),
        count_where(&total.triples, Sl2Triple::verify),
        "Jacobson–Morozov dual",
    ));
    let dims = g.degree_dims();
    report.set("closure_dim", g.dim());
    report.set("degree_dims", dims_json(&dims));
    report.push(Check::flag(
        "degrees in {-2, 0, 2}",
        dims.keys().all(|d| [-2, 0, 2].contains(d)),
        "total Lie algebra is concentrated in degrees -2, 0, 2",
    ));

    let r = a.space().dim_of_degree(2);
    if form.is_some() {
        report.push(Check::new(
            "closure dim",
            (r + 2) * (r + 1) / 2,
            g.dim(),
            "g ≅ so(q ⊕ U)",
        ));
        let expected = BTreeMap::from([(-2, r), (0, r * (r - 1) / 2 + 1), (2, r)]);
        report.push(Check::new(
            "degree dims",
            dims_json(&expected),
            dims_json(&dims),
            "g ≅ so(q ⊕ U)",
        ));
    }

    match g.decompose_g0(exec) {
        Ok(dec) => {
            report.set("g0_derived_dim", dec.derived.dim());
            report.push(Check::flag("g0 = g0' ⊕ Qh", dec.spans_g0, "degree-0 decomposition"));
            if form.is_some() {
                report.push(Check::new(
                    "g0' dim",
                    r * r.saturating_sub(1) / 2,
                    dec.derived.dim(),
                    "g0' ≅ so(q)",
                ));
            }
            let derived = dec.derived.basis();
            report.push(Check::new(
                "g0' derivations",
                derived.len(),
                count_where(&derived, |u| derivation_check(u, a)),
                "g0' acts by derivations",
            ));
            if let (Some(q), Some(c2)) = (form, a.space().component_of_degree(2)) {
                let blocks: Vec<RationalMatrix> =
                    derived.iter().map(|u| u.block(c2).expect("degree 0").clone()).collect();
                report.push(Check::flag(
                    "g0' preserves q",
                    invariance_check_matrices(&blocks, q.gram()),
                    "g0' ⊆ so(q)",
                ));
                report.push(Check::flag(
                    "g0' injective on degree 2",
                    dec.derived.restriction_injective(2),
                    "g0' ⊆ so(q)",
                ));
                let moves = derived.iter().all(|u| {
                    (0..r).all(|i| {
                        let class = unit_vec(r, i);
                        let moved = u.block(c2).expect("degree 0").mul_vec(&class);
                        u.bracket(&cup_by_coords(a, &class).expect("degree 2"))
                            == cup_by_coords(a, &moved).expect("degree 2")
                    })
                });
                report.push(Check::flag("[u, e_a] = e_{u a}", moves, "g0' acts on cup operators"));
            }
        }
        Err(e) => report.push(Check::new(
            "g0 = g0' ⊕ Qh",
            "direct sum",
            e.to_string(),
            "degree-0 decomposition",
        )),
    }

    let phi = phi_form(a);
    report.push(Check::flag(
        "phi invariance",
        infinitesimal_invariance_check(&g.basis(), &phi.matrix),
        "g preserves φ",
    ));

    if r > 0 {
        let images: Vec<GradedOperator> = (0..r)
            .map(|i| cup_by_coords(a, &unit_vec(r, i)).expect("degree 2"))
            .collect();
        let rows: Vec<Vec<Rational>> = images.iter().map(GradedOperator::flatten).collect();
        let injective = RationalMatrix::from_rows(&rows, a.space().flat_len(2)).rank() == r;
        let bijective = injective && images.iter().all(|e| g.contains(e)) && g.dim_in_degree(2) == r;
        report.push(Check::flag(
            "a -> e_a bijective onto g2",
            bijective,
            "degree-2 part is the cup operators",
        ));
    }

    let sample = &total.triples[..total.triples.len().min(LOWERING_PAIR_TRIPLES)];
    let pairs: Vec<(usize, usize)> = (0..sample.len())
        .flat_map(|i| (i + 1..sample.len()).map(move |j| (i, j)))
        .collect();
    let commuting = exec.map(&pairs, |&(i, j)| sample[i].f.bracket(&sample[j].f).is_zero());
    report.set("lowering_pairs", pairs.len());
    report.push(Check::new(
        "[f_a, f_b] = 0",
        pairs.len(),
        commuting.iter().filter(|&&b| b).count(),
        "lowering operators commute",
    ));

    if g.dim() <= KILLING_DIM_LIMIT {
        let k = g.killing_form(exec);
        report.set("killing_signature", inertia_json(&k.inertia));
        report.push(Check::flag(
            "killing nondegenerate",
            k.is_nondegenerate(),
            "g is semisimple",
        ));
        if let Some(q) = form {
            let mukai = q.direct_sum(&QuadraticSpace::hyperbolic_plane());
            let oracle = orthogonal_killing_inertia(mukai.gram());
            report.push(Check::new(
                "killing signature",
                inertia_json(&oracle),
                inertia_json(&k.inertia),
                "g ≅ so(q ⊕ U)",
            ));
        }
    } else {
        report.set("killing_signature", "not computed (size)");
    }
}

pub fn llv(spec: &str, generators: &Generators, exec: Execution) -> Result<Report, CliError> {
    let model = resolve(spec)?;
    let a = &model.algebra;
    let classes = match generators {
        Generators::Auto => spanning_lefschetz_classes(a),
        Generators::List(list) => parse_class_list(list, a.space().dim_of_degree(2))?,
    };
    let mut report = Report::new("llv", &model.name);
    llv_checks(&mut report, a, model.form.as_ref(), classes, exec);
    Ok(report)
}

/// The ten named operators `h, e_λ, f_λ, K_IJ, K_IK, K_JK`.
struct QuaternionOperators {
    h: GradedOperator,
    triples: [Sl2Triple; 3],
    weil: BTreeMap<(QuaternionUnit, QuaternionUnit), GradedOperator>,
}

fn quaternion_operators() -> (GradedFrobeniusAlgebra, QuaternionOperators) {
    let m = exterior_quaternion_model();
    let triples = QuaternionUnit::ALL.map(|u| metric_triple(&m, u));
    let mut weil = BTreeMap::new();
    for l in QuaternionUnit::ALL {
        for n in QuaternionUnit::ALL {
            if l != n {
                weil.insert((l, n), weil_commutator(&m, l, n).expect("distinct units"));
            }
        }
    }
    let h = h_operator(&m.algebra);
    (m.algebra, QuaternionOperators { h, triples, weil })
}

type UnitRelation<'a> = dyn Fn(QuaternionUnit, QuaternionUnit, QuaternionUnit) -> bool + 'a;
type TripleRelation<'a> = dyn Fn(&Sl2Triple) -> bool + 'a;

pub fn quaternion(exec: Execution) -> Report {
    use QuaternionUnit::{I, J, K};
    let mut report = Report::new("quaternion", "quaternion");
    let (a, ops) = quaternion_operators();
    let t = |u: QuaternionUnit| &ops.triples[u.index()];
    let k = |l: QuaternionUnit, n: QuaternionUnit| &ops.weil[&(l, n)];
    let gens: Vec<GradedOperator> = ops
        .triples
        .iter()
        .flat_map(|t| [t.e.clone(), t.h.clone(), t.f.clone()])
        .collect();
    let g = lie_closure_with(a.space(), &gens, exec);
    let dims = g.degree_dims();
    report.set("closure_dim", g.dim());
    report.set("degree_dims", dims_json(&dims));
    report.push(Check::new("closure dim", 10, g.dim(), "g(H) has dimension 10"));
    report.push(Check::new(
        "degree dims",
        dims_json(&BTreeMap::from([(-2, 3), (0, 4), (2, 3)])),
        dims_json(&dims),
        "g(H) degree decomposition",
    ));

    let named: Vec<GradedOperator> = std::iter::once(ops.h.clone())
        .chain(ops.triples.iter().map(|t| t.e.clone()))
        .chain(ops.triples.iter().map(|t| t.f.clone()))
        .chain([(I, J), (I, K), (J, K)].map(|(l, n)| k(l, n).clone()))
        .collect();
    let inside = named.iter().all(|x| g.contains(x));
    let rank = if inside {
        let rows: Vec<Vec<Rational>> = named.iter().map(|x| g.coordinates(x).expect("contained")).collect();
        RationalMatrix::from_rows(&rows, g.dim()).rank()
    } else {
        0
    };
    report.push(Check::new(
        "named basis rank",
        10,
        rank,
        "h, e_λ, f_λ, K_λμ form a basis",
    ));

    // Each family over the six ordered (λ, μ) with ν the remaining unit.
    let orderings: Vec<(QuaternionUnit, QuaternionUnit, QuaternionUnit)> =
        [(I, J, K), (J, I, K), (I, K, J), (K, I, J), (J, K, I), (K, J, I)].to_vec();
    let two = rat(2);
    let families: [(&str, Box<UnitRelation>); 6] = [
        (
            "[K_λμ, K_μν] = K_λν",
            Box::new(|l, m, n| k(l, m).bracket(k(m, n)) == *k(l, n)),
        ),
        ("[K_λμ, h] = 0", Box::new(|l, m, _| k(l, m).bracket(&ops.h).is_zero())),
        (
            "[K_λμ, e_μ] = 2 e_λ",
            Box::new(|l, m, _| k(l, m).bracket(&t(m).e) == t(l).e.scale(&two)),
        ),
        (
            "[K_λμ, f_μ] = 2 f_λ",
            Box::new(|l, m, _| k(l, m).bracket(&t(m).f) == t(l).f.scale(&two)),
        ),
        (
            "[K_λμ, e_ν] = 0",
            Box::new(|l, m, n| k(l, m).bracket(&t(n).e).is_zero()),
        ),
        (
            "[K_λμ, f_ν] = 0",
            Box::new(|l, m, n| k(l, m).bracket(&t(n).f).is_zero()),
        ),
    ];
    for (name, holds) in &families {
        let count = orderings.iter().filter(|&&(l, m, n)| holds(l, m, n)).count();
        report.push(Check::new(name, 6, count, "relations of g(H)"));
    }
    let doubled = orderings
        .iter()
        .filter(|&&(l, m, n)| k(l, m).bracket(k(m, n)) == k(l, n).scale(&two))
        .count();
    report.set("kk_bracket_observed", if doubled == 6 { "2·K_λν" } else { "other" });
    report.push(Check::new(
        "[K_λμ, K_μν] = 2 K_λν (Jacobi-consistent form)",
        6,
        doubled,
        "Jacobi identity with [K_λμ, e_μ] = 2 e_λ",
    ));
    let sl2: [(&str, Box<TripleRelation>); 3] = [
        ("[e_λ, f_λ] = h", Box::new(|t| t.e.bracket(&t.f) == ops.h)),
        ("[h, e_λ] = 2 e_λ", Box::new(|t| ops.h.bracket(&t.e) == t.e.scale(&two))),
        (
            "[h, f_λ] = -2 f_λ",
            Box::new(|t| ops.h.bracket(&t.f) == t.f.scale(&rat(-2))),
        ),
    ];
    for (name, holds) in &sl2 {
        report.push(Check::new(
            name,
            3,
            count_where(&ops.triples, |t| holds(t)),
            "sl2 relations",
        ));
    }

    let star_duals = ops
        .triples
        .iter()
        .all(|t| jacobson_morozov_dual(a.space(), &t.e).is_ok_and(|f| f == t.f));
    report.push(Check::flag(
        "Hodge star duals equal Jacobson–Morozov duals",
        star_duals,
        "f_λ = ∗⁻¹ e_λ ∗",
    ));
    let lowering = ops
        .triples
        .iter()
        .all(|s| ops.triples.iter().all(|t| s.f.bracket(&t.f).is_zero()));
    report.push(Check::flag("[f_λ, f_μ] = 0", lowering, "lowering operators commute"));

    let killing = g.killing_form(exec);
    let oracle = orthogonal_killing_inertia(&RationalMatrix::diagonal(&[1, 1, 1, 1, -1].map(rat)));
    report.set("killing_signature", inertia_json(&killing.inertia));
    report.push(Check::flag(
        "killing nondegenerate",
        killing.is_nondegenerate(),
        "g(H) is semisimple",
    ));
    report.push(Check::new(
        "killing signature",
        inertia_json(&oracle),
        inertia_json(&killing.inertia),
        "g(H) ≅ so(4,1)",
    ));

    match g.decompose_g0(exec) {
        Ok(dec) => {
            report.push(Check::new(
                "g0, g0' dims",
                json!([4, 3]),
                json!([dec.g0.dim(), dec.derived.dim()]),
                "g0 = so(3) ⊕ Qh",
            ));
            report.push(Check::flag("g0 = g0' ⊕ Qh", dec.spans_g0, "degree-0 decomposition"));
            let derived = dec.derived.basis();
            report.push(Check::new(
                "g0' derivations",
                derived.len(),
                count_where(&derived, |u| derivation_check(u, &a)),
                "g0' acts by derivations",
            ));
        }
        Err(e) => report.push(Check::new(
            "g0 = g0' ⊕ Qh",
            "direct sum",
            e.to_string(),
            "degree-0 decomposition",
        )),
    }
    report.push(Check::flag(
        "phi invariance",
        infinitesimal_invariance_check(&g.basis(), &phi_form(&a).matrix),
        "g preserves φ",
    ));
    report
}

/// Builds the component and runs its checks; the algebra is returned for `--llv`.
pub fn verbitsky(args: &VerbitskyArgs, exec: Execution) -> Result<Report, CliError> {
    let q = match (args.gram, args.rank) {
        (Some(path), rank) => {
            let q = read_gram(path)?;
            if rank.is_some_and(|r| r != q.dim()) {
                return Err(CliError::Usage(format!(
                    "--rank {} disagrees with the {}x{} Gram matrix",
                    rank.unwrap_or(0),
                    q.dim(),
                    q.dim()
                )));
            }
            q
        }
        (None, Some(r)) => default_verbitsky_form(r)?,
        (None, None) => return Err(CliError::Usage("verbitsky needs --rank or --gram".into())),
    };
    if args.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    if !q.is_nondegenerate() {
        return Err(CliError::Usage("the Gram matrix is degenerate".into()));
    }
    let (r, n) = (q.dim(), args.n);
    let mut report = Report::new("verbitsky", &format!("verbitsky-{r}-{n}"));
    report.set("rank", r);
    report.set("n", n);
    report.set("q_signature", inertia_json(&q.signature()));
    let expected: Vec<usize> = (0..=2 * n)
        .map(|k| binomial(r - 1 + k.min(2 * n - k), k.min(2 * n - k)))
        .collect();
    let limit = if args.large { LARGE_SYM_DIM } else { MAX_SYM_DIM };
    let vc = match verbitsky_component_with_limit(&q, n, limit) {
        Ok(vc) => vc,
        Err(e) => {
            report.set("expected_dims", expected.clone());
            report.push(Check::new("construction", "ok", e.to_string(), "Verbitsky component"));
            return Ok(report);
        }
    };
    let a = &vc.algebra;
    report.set("dims", vc.dims());
    report.push(Check::new(
        "dims",
        expected,
        vc.dims(),
        "dim A_k = C(r-1+k, k) for k <= n",
    ));
    report.push(Check::new(
        "top dim",
        1,
        *vc.dims().last().expect("nonempty"),
        "dim A_2n = 1",
    ));
    // The quotient stops at 2n only after the truncation check succeeded.
    report.push(Check::flag(
        "A_d = 0 for d > 2n",
        vc.pieces.len() == 2 * n + 1,
        "Verbitsky component is truncated",
    ));
    let free = vc.pieces.iter().take(n + 1).all(|p| p.ideal.is_zero());
    report.push(Check::flag(
        "no relations below degree n+1",
        free,
        "Sym^k V injects for k <= n",
    ));
    for (degree, ok) in perfect_pairing_by_degree(a) {
        report.push(Check::flag(
            &format!("perfect pairing degree {degree}"),
            ok,
            "Poincaré duality",
        ));
    }
    report.push(Check::flag(
        "algebra axioms",
        validate_algebra(a).is_valid(),
        "graded Frobenius algebra axioms",
    ));
    let sub = verbitsky_subring(a);
    report.push(Check::flag(
        "generated in degree 2",
        sub.dim() == a.dim(),
        "A is generated by A_2",
    ));

    // Integer search over the leading coordinates only, padded with zeros.
    let lead = r.min(8);
    let sub_q = QuadraticSpace::new(leading_block(q.gram(), lead)).expect("principal block is symmetric");
    let found: Vec<Vec<Rational>> = isotropic_vectors(&sub_q, 1, 200)
        .into_iter()
        .map(|mut v| {
            v.resize(r, rat(0));
            v
        })
        .collect();
    let ok = found
        .iter()
        .filter(|v| isotropic_power_check(&vc, v).unwrap_or(false))
        .count();
    report.set("isotropic_classes", found.len());
    report.push(Check::new(
        "α^(n+1) = 0 for isotropic α",
        found.len(),
        ok,
        "isotropic classes satisfy α^(n+1) = 0",
    ));

    if args.llv {
        let classes = spanning_lefschetz_classes(a);
        llv_checks(&mut report, a, Some(&q), classes, exec);
    }
    Ok(report)
}

fn leading_block(m: &RationalMatrix, k: usize) -> RationalMatrix {
    let data = (0..k).flat_map(|i| (0..k).map(move |j| m[(i, j)].clone())).collect();
    RationalMatrix::from_vec(k, k, data)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn prim(spec: &str, seed: u64, exec: Execution) -> Result<Report, CliError> {
    let model = resolve(spec)?;
    let a = &model.algebra;
    let mut report = Report::new("prim", &model.name);
    let g = match model.kind {
        ModelKind::Quaternion => {
            let (_, ops) = quaternion_operators();
            let gens: Vec<GradedOperator> = ops
                .triples
                .iter()
                .flat_map(|t| [t.e.clone(), t.h.clone(), t.f.clone()])
                .collect();
            lie_closure_with(a.space(), &gens, exec)
        }
        ModelKind::Quadratic | ModelKind::Other => match total_lie_algebra(a, spanning_lefschetz_classes(a), exec) {
            Ok(t) => t.algebra,
            Err(e) => {
                report.push(Check::new(
                    "sl2 triples",
                    "all classes Lefschetz",
                    e.to_string(),
                    "Jacobson–Morozov dual",
                ));
                return Ok(report);
            }
        },
    };
    report.set("closure_dim", g.dim());
    let prim = prim_subspace(&g);
    report.set("prim_dims", dims_by_degree(a, &prim));
    report.push(Check::flag(
        "Prim is g0-stable",
        is_stable_under(g.piece(0), &prim),
        "primitive part is a g0-module",
    ));
    let generated = submodule_generated_with(&g, prim.basis(), exec);
    report.push(Check::new(
        "g-module generated by Prim",
        a.dim(),
        generated.dim(),
        "Prim generates the whole space",
    ));
    let sub = verbitsky_subring(a);
    report.set("subring_dims", dims_by_degree(a, &sub));
    report.push(Check::flag(
        "g injective on subring",
        restriction_to_subspace_injective(&g, &sub),
        "g acts faithfully on SH",
    ));
    match g.decompose_g0(exec) {
        Ok(dec) => report.push(Check::flag(
            "g0' injective on degree 2",
            dec.derived.restriction_injective(2),
            "g0' acts faithfully on H^2",
        )),
        Err(e) => report.push(Check::new(
            "g0' injective on degree 2",
            "direct sum",
            e.to_string(),
            "degree-0 decomposition",
        )),
    }

    if model.kind == ModelKind::Quaternion {
        use QuaternionUnit::{I, J, K};
        let (_, ops) = quaternion_operators();
        for (l, n) in [(J, K), (I, K), (I, J)] {
            let w = &ops.weil[&(l, n)];
            let degrees: Vec<Value> = weil_parity_by_degree(w)
                .into_iter()
                .map(|(d, ok)| json!([d, ok]))
                .collect();
            report.set(&format!("weil_parity_K{l}{n}"), degrees);
            report.push(Check::flag(
                &format!("K_{l}{n} parity"),
                weil_parity_check(w),
                "Weil operators act by i(p-q)",
            ));
        }
        report.push(Check::flag(
            "h fails parity",
            !weil_parity_check(&ops.h),
            "h is not a Weil operator",
        ));
    } else {
        let witness = irreducibility_witness(&g, WITNESS_SAMPLES, seed, exec);
        report.set("witness", serde_json::to_value(&witness).expect("serializable"));
        report.push(Check::flag(
            "irreducibility witness",
            witness.passed(),
            "every vector generates the whole module",
        ));
    }
    Ok(report)
}
