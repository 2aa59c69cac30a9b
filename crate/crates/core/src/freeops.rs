//! The free nonsymmetric operad on one graded n-ary generator.
//!
//! Monomials are planar trees whose internal nodes all carry the generator.
//! The generators of a monomial are ordered by the planar preorder of its
//! internal nodes; when the generator has odd degree, partial composition
//! picks up the Koszul sign of moving the inner block past the generators of
//! the outer monomial that follow the grafting leaf.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{OperadError, Result};
use crate::scalar::{Field, Scalar};
use crate::trees::PlanarTree;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub symbol: String,
    pub arity: usize,
    pub degree: i64,
}

impl GeneratorSpec {
    pub fn new(symbol: impl Into<String>, arity: usize, degree: i64) -> Result<Self> {
        if arity < 2 {
            return Err(OperadError::ArityTooSmall(arity));
        }
        Ok(GeneratorSpec { symbol: symbol.into(), arity, degree })
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }

    /// The generator of the Koszul dual: degree `-d + n - 2`, symbol with a
    /// `*` appended (or removed, so that dualizing twice restores the name).
    pub fn dual(&self) -> GeneratorSpec {
        let symbol = match self.symbol.strip_suffix('*') {
            Some(base) => base.to_string(),
            None => format!("{}*", self.symbol),
        };
        GeneratorSpec { symbol, arity: self.arity, degree: -self.degree + self.arity as i64 - 2 }
    }

    /// Number of leaves of a weight-2 monomial, `2n - 1`.
    pub fn quadratic_arity(&self) -> usize {
        2 * self.arity - 1
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (arity {}, degree {})", self.symbol, self.arity, self.degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    gen: GeneratorSpec,
    tree: PlanarTree,
}

impl Monomial {
    pub fn new(gen: GeneratorSpec, tree: PlanarTree) -> Result<Self> {
        if tree.arity() != gen.arity {
            return Err(OperadError::ArityMismatch { expected: gen.arity, found: tree.arity() });
        }
        Ok(Monomial { gen, tree })
    }

    pub fn gen(&self) -> &GeneratorSpec {
        &self.gen
    }

    pub fn tree(&self) -> &PlanarTree {
        &self.tree
    }

    pub fn weight(&self) -> usize {
        self.tree.weight()
    }

    pub fn degree(&self) -> i64 {
        self.weight() as i64 * self.gen.degree
    }
}

/// A homogeneous linear combination of monomials over one generator.
///
/// Only nonzero coefficients are stored, keyed by tree in path-glex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    gen: GeneratorSpec,
    field: Field,
    terms: BTreeMap<PlanarTree, Scalar>,
}

impl Element {
    pub fn zero(gen: GeneratorSpec, field: Field) -> Self {
        Element { gen, field, terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: &Monomial, coeff: Scalar) -> Self {
        let mut e = Element::zero(m.gen.clone(), coeff.field());
        e.add_term(m.tree.clone(), coeff).expect("single term is homogeneous");
        e
    }

    /// The generator itself, as an element of weight 1.
    pub fn generator(gen: GeneratorSpec, field: Field) -> Self {
        let corolla = PlanarTree::corolla(gen.arity).expect("generator arity is at least 2");
        let mut e = Element::zero(gen, field);
        e.terms.insert(corolla, field.one());
        e
    }

    /// `sum_i coeffs[i-1] * (mu o_i mu)`.
    pub fn quadratic(gen: GeneratorSpec, coeffs: &[Scalar]) -> Result<Self> {
        if coeffs.len() != gen.arity {
            return Err(OperadError::ArityMismatch { expected: gen.arity, found: coeffs.len() });
        }
        let field = coeffs[0].field();
        let mut e = Element::zero(gen.clone(), field);
        for (i, c) in coeffs.iter().enumerate() {
            e.add_term(PlanarTree::weight_two(gen.arity, i + 1)?, c.clone())?;
        }
        Ok(e)
    }

    pub fn gen(&self) -> &GeneratorSpec {
        &self.gen
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of inputs, `None` for the zero element.
    pub fn arity(&self) -> Option<usize> {
        self.terms.keys().next().map(|t| t.leaf_count())
    }

    pub fn weight(&self) -> Option<usize> {
        self.terms.keys().next().map(|t| t.weight())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlanarTree, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, tree: &PlanarTree) -> Scalar {
        self.terms.get(tree).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// The path-glex greatest term.
    pub fn leading_term(&self) -> Option<(&PlanarTree, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, tree: PlanarTree, coeff: Scalar) -> Result<()> {
        if tree.arity() != self.gen.arity {
            return Err(OperadError::ArityMismatch { expected: self.gen.arity, found: tree.arity() });
        }
        if coeff.field() != self.field {
            return Err(OperadError::FieldMismatch(format!(
                "coefficient in {} added to element over {}",
                coeff.field(),
                self.field
            )));
        }
        if let Some(n) = self.arity() {
            if n != tree.leaf_count() {
                return Err(OperadError::ArityMismatch { expected: n, found: tree.leaf_count() });
            }
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&tree) {
            Some(c) => {
                *c += &coeff;
                if c.is_zero() {
                    self.terms.remove(&tree);
                }
            }
            None => {
                self.terms.insert(tree, coeff);
            }
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Element) -> Result<()> {
        if self.gen != other.gen {
            return Err(OperadError::GeneratorMismatch(format!("{} vs {}", self.gen, other.gen)));
        }
        if self.field != other.field {
            return Err(OperadError::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    /// `self + scale * other`.
    pub fn add_scaled(&self, scale: &Scalar, other: &Element) -> Result<Element> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), scale * c)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.add_scaled(&self.field.one(), other)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add_scaled(&self.field.from_i64(-1), other)
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        let mut out = Element::zero(self.gen.clone(), self.field);
        for (t, c) in &self.terms {
            let v = c * s;
            if !v.is_zero() {
                out.terms.insert(t.clone(), v);
            }
        }
        out
    }

    /// Coefficient row over `mu o_1 mu, ..., mu o_n mu` for a weight-2 element.
    pub fn quadratic_coefficients(&self) -> Result<Vec<Scalar>> {
        let n = self.gen.arity;
        let mut row = vec![self.field.zero(); n];
        for (t, c) in &self.terms {
            let slot = t.weight_two_slot().ok_or(OperadError::WeightMismatch {
                expected: 2,
                found: t.weight(),
            })?;
            row[slot - 1] = c.clone();
        }
        Ok(row)
    }
}

/// Koszul sign exponent parity for grafting a monomial of weight
/// `inner_weight` at leaf `slot` of `outer`.
pub fn koszul_sign_odd(gen: &GeneratorSpec, outer: &PlanarTree, slot: usize, inner_weight: usize) -> Result<bool> {
    if !gen.is_odd() {
        return Ok(false);
    }
    Ok((outer.nodes_after_leaf(slot)? * inner_weight) % 2 == 1)
}

/// Partial composition `a o_i b`, extended bilinearly from monomial grafting.
pub fn compose(a: &Element, i: usize, b: &Element) -> Result<Element> {
    a.check_compatible(b)?;
    let mut out = Element::zero(a.gen.clone(), a.field);
    if let Some(p) = a.arity() {
        if i == 0 || i > p {
            return Err(OperadError::SlotOutOfRange { slot: i, max: p });
        }
    }
    for (ta, ca) in &a.terms {
        for (tb, cb) in &b.terms {
            let tree = ta.graft(i, tb)?;
            let mut coeff = ca * cb;
            if koszul_sign_odd(&a.gen, ta, i, tb.weight())? {
                coeff = -coeff;
            }
            out.add_term(tree, coeff)?;
        }
    }
    Ok(out)
}

/// Sign of the pairing `<mu* o_i mu*, mu o_i mu> = (-1)^((i+1)(n+1))`.
pub fn pairing_sign(n: usize, i: usize) -> bool {
    ((i + 1) * (n + 1)) % 2 == 1
}

/// The pairing between weight-2 elements of the dual and the primal free
/// operad: monomials `mu* o_i mu*` and `mu o_j mu` pair to
/// `(-1)^((i+1)(n+1)) delta_ij`.
pub fn pair(dual: &Element, primal: &Element) -> Result<Scalar> {
    let n = primal.gen.arity;
    if dual.gen.arity != n {
        return Err(OperadError::ArityMismatch { expected: n, found: dual.gen.arity });
    }
    if dual.field != primal.field {
        return Err(OperadError::FieldMismatch(format!("{} vs {}", dual.field, primal.field)));
    }
    for e in [dual, primal] {
        if let Some(a) = e.arity() {
            if a != 2 * n - 1 {
                return Err(OperadError::ArityMismatch { expected: 2 * n - 1, found: a });
            }
        }
    }
    let u = dual.quadratic_coefficients()?;
    let v = primal.quadratic_coefficients()?;
    let field = primal.field;
    let mut acc = field.zero();
    for i in 1..=n {
        let term = &u[i - 1] * &v[i - 1];
        if pairing_sign(n, i) {
            acc -= &term;
        } else {
            acc += &term;
        }
    }
    Ok(acc)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    tree: String,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    gen: GeneratorSpec,
    terms: Vec<TermJson>,
}

impl Element {
    /// Compact JSON, terms in path-glex order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("element serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = ElementJson {
            gen: self.gen.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| TermJson { coeff: c.to_string(), tree: t.to_string() })
                .collect(),
        };
        serde_json::to_value(doc).expect("element serializes")
    }

    /// Parses element JSON. The field is read off the coefficients (`k mod p`
    /// means `GF(p)`); an element without terms is taken over the rationals.
    pub fn from_json(s: &str) -> Result<Element> {
        let doc: ElementJson = serde_json::from_str(s).map_err(|e| OperadError::Parse(e.to_string()))?;
        let field = match doc.terms.first() {
            Some(t) => t.coeff.parse::<Scalar>()?.field(),
            None => Field::Rational,
        };
        Self::from_doc(doc, field)
    }

    /// Parses element JSON, coercing coefficients into `field`.
    pub fn from_json_in(s: &str, field: Field) -> Result<Element> {
        let doc: ElementJson = serde_json::from_str(s).map_err(|e| OperadError::Parse(e.to_string()))?;
        Self::from_doc(doc, field)
    }

    fn from_doc(doc: ElementJson, field: Field) -> Result<Element> {
        let gen = GeneratorSpec::new(doc.gen.symbol, doc.gen.arity, doc.gen.degree)?;
        let mut e = Element::zero(gen.clone(), field);
        for term in doc.terms {
            let tree = PlanarTree::parse_sexpr(&term.tree, gen.arity)?;
            e.add_term(tree, field.parse_scalar(&term.coeff)?)?;
        }
        Ok(e)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("({c})*{t}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(n: usize, d: i64) -> GeneratorSpec {
        GeneratorSpec::new("mu", n, d).unwrap()
    }

    fn mono(g: &GeneratorSpec, s: &str) -> Element {
        let tree = PlanarTree::parse_sexpr(s, g.arity).unwrap();
        Element::from_monomial(&Monomial::new(g.clone(), tree).unwrap(), Field::Rational.one())
    }

    #[test]
    fn even_generator_has_no_signs() {
        let g = gen(3, 0);
        let mu = Element::generator(g.clone(), Field::Rational);
        let m3 = compose(&mu, 3, &mu).unwrap();
        let lhs = compose(&m3, 1, &mu).unwrap();
        assert_eq!(lhs, mono(&g, "(m (m _ _ _) _ (m _ _ _))"));
        assert_eq!(compose(&mu, 1, &mu).unwrap(), mono(&g, "(m (m _ _ _) _ _)"));
    }

    #[test]
    fn odd_generators_anticommute_on_disjoint_slots() {
        let g = gen(3, 1);
        let mu = Element::generator(g.clone(), Field::Rational);
        let lhs = compose(&compose(&mu, 3, &mu).unwrap(), 1, &mu).unwrap();
        let rhs = compose(&compose(&mu, 1, &mu).unwrap(), 5, &mu).unwrap();
        assert_eq!(lhs, rhs.scale(&Field::Rational.from_i64(-1)));
        assert_eq!(rhs, mono(&g, "(m (m _ _ _) _ (m _ _ _))"));
    }

    #[test]
    fn compose_errors() {
        let g = gen(3, 0);
        let mu = Element::generator(g.clone(), Field::Rational);
        assert!(compose(&mu, 4, &mu).is_err());
        assert!(compose(&mu, 0, &mu).is_err());
        let other = Element::generator(gen(3, 1), Field::Rational);
        assert!(compose(&mu, 1, &other).is_err());
        let gf = Element::generator(g, Field::Prime(3));
        assert!(compose(&mu, 1, &gf).is_err());
    }

    #[test]
    fn pairing_values() {
        let q = Field::Rational;
        for (n, i, j, want) in [(3, 1, 1, 1), (3, 2, 3, 0), (4, 2, 2, -1), (4, 1, 2, 0), (4, 3, 3, 1)] {
            let primal = Element::quadratic(gen(n, 0), &unit(n, j)).unwrap();
            let dual = Element::quadratic(gen(n, 0).dual(), &unit(n, i)).unwrap();
            assert_eq!(pair(&dual, &primal).unwrap(), q.from_i64(want), "n={n} i={i} j={j}");
        }
        let bad = Element::generator(gen(3, 0), q);
        assert!(pair(&bad, &bad).is_err());
    }

    fn unit(n: usize, i: usize) -> Vec<Scalar> {
        (1..=n).map(|k| Field::Rational.from_i64((k == i) as i64)).collect()
    }

    #[test]
    fn vector_space_canonical() {
        let g = gen(3, 0);
        let a = mono(&g, "(m _ (m _ _ _) _)");
        let diff = a.sub(&a).unwrap();
        assert!(diff.is_zero());
        assert_eq!(diff.len(), 0);
        assert!(a.scale(&Field::Rational.zero()).is_zero());
        let mut mixed = a.clone();
        assert!(mixed.add_term(PlanarTree::corolla(3).unwrap(), Field::Rational.one()).is_err());
    }

    #[test]
    fn json_is_canonical() {
        let g = gen(3, 1);
        let e = Element::quadratic(
            g,
            &[Field::Rational.from_i64(1), Field::Rational.from_i64(-2), Field::Rational.one()],
        )
        .unwrap()
        .scale(&"1/2".parse().unwrap());
        let s = e.to_json();
        assert_eq!(
            s,
            r#"{"gen":{"symbol":"mu","arity":3,"degree":1},"terms":[{"coeff":"1/2","tree":"(m (m _ _ _) _ _)"},{"coeff":"-1","tree":"(m _ (m _ _ _) _)"},{"coeff":"1/2","tree":"(m _ _ (m _ _ _))"}]}"#
        );
        assert_eq!(Element::from_json(&s).unwrap(), e);
        assert_eq!(Element::from_json(&s).unwrap().to_json(), s);
        let f3 = r#"{"gen":{"symbol":"mu*","arity":3,"degree":1},"terms":[{"coeff":"2 mod 3","tree":"(m _ _ (m _ _ _))"}]}"#;
        let e3 = Element::from_json(f3).unwrap();
        assert_eq!(e3.field(), Field::Prime(3));
        assert_eq!(e3.to_json(), f3);
    }

    #[test]
    fn dual_generator() {
        let d = gen(4, 0).dual();
        assert_eq!(d.symbol, "mu*");
        assert_eq!(d.degree, 2);
        assert_eq!(d.dual(), gen(4, 0));
    }
}
