//! Quadratic presentations on one n-ary generator and their Koszul duals.
//!
//! A presentation is the generator together with the subspace `R` of
//! weight-2 relations, stored as coefficient rows over the basis
//! `mu o_1 mu, ..., mu o_n mu` in reduced row echelon form.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{OperadError, Result};
use crate::freeops::{pairing_sign, Element, GeneratorSpec};
use crate::linalg::{nullspace, rref};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Totally associative: all `n` nestings agree.
    Ta,
    /// Partially associative: the alternating sum of the nestings vanishes.
    Pa,
}

impl FromStr for Family {
    type Err = OperadError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ta" => Ok(Family::Ta),
            "pa" => Ok(Family::Pa),
            other => Err(OperadError::Parse(format!("unknown family `{other}` (expected ta or pa)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPresentation {
    gen: GeneratorSpec,
    field: Field,
    relations: Vec<Vec<Scalar>>,
}

impl QuadraticPresentation {
    /// Builds a presentation from any spanning set of the relation space.
    pub fn new(gen: GeneratorSpec, field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = gen.arity;
        for r in &rows {
            if r.len() != n {
                return Err(OperadError::ArityMismatch { expected: n, found: r.len() });
            }
            if let Some(x) = r.iter().find(|x| x.field() != field) {
                return Err(OperadError::FieldMismatch(format!("{x} in a presentation over {field}")));
            }
        }
        let (relations, _) = rref(&rows, n, field);
        Ok(QuadraticPresentation { gen, field, relations })
    }

    pub fn of_family(family: Family, n: usize, d: i64, field: Field) -> Result<Self> {
        match family {
            Family::Ta => ta_presentation(n, d, field),
            Family::Pa => pa_presentation(n, d, field),
        }
    }

    pub fn gen(&self) -> &GeneratorSpec {
        &self.gen
    }

    pub fn arity(&self) -> usize {
        self.gen.arity
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Relation rows in reduced row echelon form.
    pub fn relations(&self) -> &[Vec<Scalar>] {
        &self.relations
    }

    pub fn relation_dim(&self) -> usize {
        self.relations.len()
    }

    pub fn relation_elements(&self) -> Vec<Element> {
        self.relations
            .iter()
            .map(|r| Element::quadratic(self.gen.clone(), r).expect("row length checked"))
            .collect()
    }

    /// The same relations read over another field.
    pub fn over(&self, field: Field) -> Result<Self> {
        let rows = self
            .relations
            .iter()
            .map(|r| r.iter().map(|x| field.coerce(x.clone())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.gen.clone(), field, rows)
    }

    /// The Koszul dual presentation: generator in degree `-d + n - 2`,
    /// relations the orthogonal complement of `R` under the signed pairing.
    pub fn koszul_dual(&self) -> QuadraticPresentation {
        let n = self.arity();
        let f = self.field;
        // <u, r> = sum_i sign_i u_i r_i, so u is orthogonal to R exactly when
        // it lies in the nullspace of the sign-twisted relation matrix.
        let twisted: Vec<Vec<Scalar>> = self
            .relations
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(i, x)| if pairing_sign(n, i + 1) { -x } else { x.clone() })
                    .collect()
            })
            .collect();
        let rows = nullspace(&twisted, n, f);
        QuadraticPresentation::new(self.gen.dual(), f, rows).expect("nullspace rows have length n")
    }

    /// Same generator arity and degree and same relation space.
    pub fn same_operad(&self, other: &QuadraticPresentation) -> bool {
        self.gen.arity == other.gen.arity
            && self.gen.degree == other.gen.degree
            && self.field == other.field
            && self.relations == other.relations
    }
}

/// Total associativity: `mu o_i mu - mu o_{i+1} mu` for `1 <= i < n`.
pub fn ta_presentation(n: usize, d: i64, field: Field) -> Result<QuadraticPresentation> {
    let gen = GeneratorSpec::new("mu", n, d)?;
    let rows = (0..n - 1)
        .map(|i| {
            (0..n)
                .map(|j| field.from_i64(if j == i { 1 } else if j == i + 1 { -1 } else { 0 }))
                .collect()
        })
        .collect();
    QuadraticPresentation::new(gen, field, rows)
}

/// Partial associativity: `sum_i (-1)^((i+1)(n-1)) mu o_i mu`.
pub fn pa_presentation(n: usize, d: i64, field: Field) -> Result<QuadraticPresentation> {
    let gen = GeneratorSpec::new("mu", n, d)?;
    let row = (1..=n).map(|i| field.sign((i + 1) * (n - 1))).collect();
    QuadraticPresentation::new(gen, field, vec![row])
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    gen: GeneratorSpec,
    relations: Vec<Vec<String>>,
}

impl QuadraticPresentation {
    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = PresentationJson {
            gen: self.gen.clone(),
            relations: self.relations.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        };
        serde_json::to_value(doc).expect("presentation serializes")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parses presentation JSON; the field is read off the entries (`k mod p`
    /// means `GF(p)`, anything else the rationals).
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PresentationJson = serde_json::from_str(s).map_err(|e| OperadError::Parse(e.to_string()))?;
        let field = doc
            .relations
            .iter()
            .flatten()
            .next()
            .map(|x| x.parse::<Scalar>().map(|s| s.field()))
            .transpose()?
            .unwrap_or(Field::Rational);
        let gen = GeneratorSpec::new(doc.gen.symbol, doc.gen.arity, doc.gen.degree)?;
        let rows = doc
            .relations
            .iter()
            .map(|r| r.iter().map(|x| field.parse_scalar(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(gen, field, rows)
    }
}
