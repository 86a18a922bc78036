use std::fs;
use std::path::Path;

use llv_core::exactla::{Rational, RationalMatrix};
use llv_core::graded::{pairing_block, parse_algebra, GradedFrobeniusAlgebra};
use llv_core::liealg::QuadraticSpace;
use llv_core::models::{exterior_quaternion_model, frobenius_from_quadratic, k3_lattice};
use llv_core::verbitsky::verbitsky_component;
use llv_core::LlvError;

pub const BUILTINS: [&str; 4] = ["k3", "k3-rank3", "quaternion", "verbitsky-5-2"];

/// Failure outside the checks themselves.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input; exit code 2.
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<LlvError> for CliError {
    fn from(e: LlvError) -> Self {
        Self::Usage(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Quaternion,
    /// A quadratic-type or quotient algebra whose degree-2 form is known.
    Quadratic,
    Other,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub algebra: GradedFrobeniusAlgebra,
    /// The form on degree 2 preserved by the derived degree-0 part, when known.
    pub form: Option<QuadraticSpace>,
    pub kind: ModelKind,
}

/// `U ⊕ ⟨−2⟩`.
pub fn rank3_form() -> QuadraticSpace {
    QuadraticSpace::hyperbolic_plane().direct_sum(&QuadraticSpace::diagonal(&[-2]))
}

/// `U ⊕ I_{r−2}`.
pub fn default_verbitsky_form(rank: usize) -> Result<QuadraticSpace, CliError> {
    if rank < 2 {
        return Err(CliError::Usage("--rank must be at least 2".into()));
    }
    Ok(QuadraticSpace::hyperbolic_plane().direct_sum(&QuadraticSpace::diagonal(&vec![1; rank - 2])))
}

fn builtin(name: &str) -> Option<Model> {
    let quadratic = |q: QuadraticSpace| Model {
        name: name.into(),
        algebra: frobenius_from_quadratic(&q, name).expect("built-in forms are nondegenerate"),
        form: Some(q),
        kind: ModelKind::Quadratic,
    };
    Some(match name {
        "k3" => quadratic(k3_lattice()),
        "k3-rank3" => quadratic(rank3_form()),
        "quaternion" => Model {
            name: name.into(),
            algebra: exterior_quaternion_model().algebra,
            form: None,
            kind: ModelKind::Quaternion,
        },
        "verbitsky-5-2" => {
            let q = default_verbitsky_form(5).expect("rank 5");
            let vc = verbitsky_component(&q, 2).expect("built-in size");
            Model {
                name: name.into(),
                algebra: vc.algebra,
                form: Some(q),
                kind: ModelKind::Quadratic,
            }
        }
        _ => return None,
    })
}

/// Resolves a built-in name or reads a JSON algebra document.
pub fn resolve(spec: &str) -> Result<Model, CliError> {
    if let Some(m) = builtin(spec) {
        return Ok(m);
    }
    let algebra = read_algebra(Path::new(spec))?;
    let form = quadratic_form_of(&algebra);
    let kind = if form.is_some() {
        ModelKind::Quadratic
    } else {
        ModelKind::Other
    };
    Ok(Model {
        name: algebra.name().to_string(),
        algebra,
        form,
        kind,
    })
}

pub fn read_algebra(path: &Path) -> Result<GradedFrobeniusAlgebra, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Usage(format!(
            "cannot read {}: {e} (built-ins: {})",
            path.display(),
            BUILTINS.join(", ")
        ))
    })?;
    parse_algebra(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// For a shift-2 algebra, `q(a, b) = ∫ a·b` on degree 2.
fn quadratic_form_of(a: &GradedFrobeniusAlgebra) -> Option<QuadraticSpace> {
    let s = a.space();
    if s.shift() != 2 {
        return None;
    }
    let c2 = s.component_of_degree(2)?;
    QuadraticSpace::new(pairing_block(a, c2, c2))
        .ok()
        .filter(QuadraticSpace::is_nondegenerate)
}

/// A JSON Gram matrix: `{"gram": [[...], ...]}` with integer or `"p/q"` entries.
pub fn read_gram(path: &Path) -> Result<QuadraticSpace, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let bad = |msg: &str| CliError::Usage(format!("{}: {msg}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
    let rows = value
        .get("gram")
        .and_then(|g| g.as_array())
        .ok_or_else(|| bad("expected an object with a \"gram\" array"))?;
    let n = rows.len();
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| bad("gram must be square"))?;
        for x in row {
            entries.push(parse_entry(x).ok_or_else(|| bad(&format!("bad entry {x}")))?);
        }
    }
    QuadraticSpace::new(RationalMatrix::from_vec(n, n, entries)).map_err(|e| bad(&e.to_string()))
}

fn parse_entry(x: &serde_json::Value) -> Option<Rational> {
    match x {
        serde_json::Value::Number(n) => n.as_i64().map(llv_core::rat),
        serde_json::Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// `"1,0,0;0,1/2,1"` as degree-2 coordinate vectors.
pub fn parse_class_list(list: &str, rank: usize) -> Result<Vec<Vec<Rational>>, CliError> {
    list.split(';')
        .map(|v| {
            let coords: Result<Vec<Rational>, _> = v.split(',').map(|x| x.trim().parse::<Rational>()).collect();
            match coords {
                Ok(c) if c.len() == rank => Ok(c),
                Ok(c) => Err(CliError::Usage(format!(
                    "class {v:?} has {} coordinates, expected {rank}",
                    c.len()
                ))),
                Err(e) => Err(CliError::Usage(format!("bad class {v:?}: {e}"))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use llv_core::exactla::rat_vec;

    #[test]
    fn builtins_resolve() {
        for name in BUILTINS {
            let m = resolve(name).unwrap();
            assert_eq!(m.name, name);
        }
        assert_eq!(resolve("k3").unwrap().algebra.dims(), vec![1, 22, 1]);
        assert!(matches!(resolve("no-such-file.json"), Err(CliError::Usage(_))));
    }

    #[test]
    fn class_lists() {
        assert_eq!(
            parse_class_list("1,0;0,1/2", 2).unwrap(),
            vec![rat_vec(&[1, 0]), vec![llv_core::rat(0), llv_core::ratio(1, 2)]]
        );
        assert!(parse_class_list("1,0,0", 2).is_err());
        assert!(parse_class_list("1,x", 2).is_err());
    }
}
