use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::exact_la::{GaussRat, Matrix, Rat, Scalar};

use super::{Bracket, LieAlgebra, LieError, LieField, LieModule};

/// Wire form of an algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub dim: usize,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<String, Scalar>,
}

/// Wire form of a module: one square matrix per basis element of the
/// algebra, rows listed top to bottom.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub actions: Vec<Vec<Vec<Scalar>>>,
}

/// An algebra whose ground field is only known at run time.
#[derive(Debug, Clone)]
pub enum AnyLieAlgebra {
    Real(LieAlgebra<Rat>),
    Complex(LieAlgebra<GaussRat>),
}

#[derive(Debug, Clone)]
pub enum AnyLieModule {
    Real(LieModule<Rat>),
    Complex(LieModule<GaussRat>),
}

pub fn algebra_from_json(text: &str) -> Result<AnyLieAlgebra, LieError> {
    let raw: AlgebraJson =
        serde_json::from_str(text).map_err(|e| LieError::Input(e.to_string()))?;
    let names = match &raw.basis {
        Some(b) if b.len() != raw.dim => {
            return Err(LieError::Input(format!(
                "basis lists {} names for dimension {}",
                b.len(),
                raw.dim
            )))
        }
        Some(b) => b.clone(),
        None => (1..=raw.dim).map(|k| format!("Y{k}")).collect(),
    };
    match raw.field.as_str() {
        "Q" => Ok(AnyLieAlgebra::Real(build(names, &raw.brackets)?)),
        "Qi" => Ok(AnyLieAlgebra::Complex(build(names, &raw.brackets)?)),
        other => Err(LieError::Input(format!("unknown field {other:?}"))),
    }
}

fn build<F: LieField>(names: Vec<String>, raw: &[BracketJson]) -> Result<LieAlgebra<F>, LieError> {
    let brackets = raw
        .iter()
        .map(|b| {
            let coeffs = b
                .coeffs
                .iter()
                .map(|(k, v)| {
                    let k: usize = k
                        .parse()
                        .map_err(|_| LieError::Input(format!("bad coefficient index {k:?}")))?;
                    Ok((k, F::from_scalar(v)?))
                })
                .collect::<Result<Vec<_>, LieError>>()?;
            Ok(Bracket {
                i: b.i,
                j: b.j,
                coeffs,
            })
        })
        .collect::<Result<Vec<_>, LieError>>()?;
    LieAlgebra::from_brackets(names, &brackets)
}

/// Sparse form listing each nonzero bracket once with `i < j`.
pub fn algebra_to_json<F: LieField>(l: &LieAlgebra<F>) -> AlgebraJson {
    let m = l.dim();
    let mut brackets = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let coeffs: BTreeMap<String, Scalar> = (0..m)
                .filter(|&k| !l.c(i, j, k).is_zero())
                .map(|k| {
                    let s = Scalar::parse(&l.c(i, j, k).format()).expect("formatted scalar parses");
                    (k.to_string(), s)
                })
                .collect();
            if !coeffs.is_empty() {
                brackets.push(BracketJson { i, j, coeffs });
            }
        }
    }
    AlgebraJson {
        dim: m,
        field: match l.ground_field() {
            super::GroundField::RealRational => "Q".into(),
            super::GroundField::ComplexGaussian => "Qi".into(),
        },
        basis: Some(l.names().to_vec()),
        brackets,
    }
}

pub fn module_from_json(text: &str, algebra: &AnyLieAlgebra) -> Result<AnyLieModule, LieError> {
    let raw: ModuleJson = serde_json::from_str(text).map_err(|e| LieError::Input(e.to_string()))?;
    match algebra {
        AnyLieAlgebra::Real(l) => Ok(AnyLieModule::Real(module_over(l, &raw)?)),
        AnyLieAlgebra::Complex(l) => Ok(AnyLieModule::Complex(module_over(l, &raw)?)),
    }
}

fn module_over<F: LieField>(l: &LieAlgebra<F>, raw: &ModuleJson) -> Result<LieModule<F>, LieError> {
    let actions = raw
        .actions
        .iter()
        .map(|rows| {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(F::from_scalar).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            if rows.is_empty() {
                return Ok(Matrix::zeros(0, 0));
            }
            Ok(Matrix::from_rows(rows)?)
        })
        .collect::<Result<Vec<_>, LieError>>()?;
    LieModule::new(Arc::new(l.clone()), actions)
}

impl AnyLieAlgebra {
    pub fn dim(&self) -> usize {
        match self {
            AnyLieAlgebra::Real(l) => l.dim(),
            AnyLieAlgebra::Complex(l) => l.dim(),
        }
    }

    /// Real form: real algebras as-is, complex ones realified.
    pub fn to_real(&self) -> Result<LieAlgebra<Rat>, LieError> {
        match self {
            AnyLieAlgebra::Real(l) => Ok(l.clone()),
            AnyLieAlgebra::Complex(l) => super::realify(l),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::corpus;

    #[test]
    fn round_trip_heisenberg() {
        let text = r#"{"dim":3,"field":"Q","basis":["X","Y","Z"],
            "brackets":[{"i":0,"j":1,"coeffs":{"2":"1"}}]}"#;
        let AnyLieAlgebra::Real(h) = algebra_from_json(text).unwrap() else {
            panic!("expected a real algebra")
        };
        assert_eq!(h.structure(), corpus::heisenberg().structure());
        let back = serde_json::to_string(&algebra_to_json(&h)).unwrap();
        let AnyLieAlgebra::Real(h2) = algebra_from_json(&back).unwrap() else {
            panic!("expected a real algebra")
        };
        assert_eq!(h, h2);
    }

    #[test]
    fn gaussian_coefficients() {
        let text = r#"{"dim":2,"field":"Qi","brackets":[{"i":1,"j":0,"coeffs":{"1":"-2"}}]}"#;
        let AnyLieAlgebra::Complex(b) = algebra_from_json(text).unwrap() else {
            panic!("expected a complex algebra")
        };
        assert_eq!(b, corpus::complex_borel_named(&["Y1", "Y2"]));
        let bad = r#"{"dim":2,"field":"Q","brackets":[{"i":0,"j":1,"coeffs":{"1":"i"}}]}"#;
        assert!(algebra_from_json(bad).is_err());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(algebra_from_json("{"), Err(LieError::Input(_))));
        let oob = r#"{"dim":2,"field":"Q","brackets":[{"i":0,"j":2,"coeffs":{"1":"1"}}]}"#;
        assert!(matches!(
            algebra_from_json(oob),
            Err(LieError::IndexOutOfRange { index: 2, dim: 2 })
        ));
        let field = r#"{"dim":1,"field":"R"}"#;
        assert!(matches!(algebra_from_json(field), Err(LieError::Input(_))));
    }

    #[test]
    fn module_file() {
        let axb = AnyLieAlgebra::Real(corpus::ax_plus_b());
        let text = r#"{"actions":[[["1/2","0"],["0","-1/2"]],[["0","1"],["0","0"]]]}"#;
        let AnyLieModule::Real(m) = module_from_json(text, &axb).unwrap() else {
            panic!("expected a real module")
        };
        assert_eq!(&m, &corpus::axb_tautological());
    }
}
