//! Homogeneous components of a quadratic operad `Free(mu) / (R)`.
//!
//! The weight-`w` layer of the ideal `(R)` is spanned by the relations for
//! `w = 2` and, above that, by composing the previous layer with the
//! generator on either side. Row reduction with leading terms taken in
//! path-glex order picks the standard monomials, which form a basis of the
//! quotient component; every other monomial reduces onto them.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{OperadError, Result};
use crate::freeops::{compose, Element, GeneratorSpec, Monomial};
use crate::linalg::{Echelon, SparseRow};
use crate::par;
use crate::quadratic::QuadraticPresentation;
use crate::scalar::{Field, Scalar};
use crate::trees::{catalan, enumerate_trees, PlanarTree};

/// One-step closure of a spanning set of the weight-`w` ideal layer: every
/// `g o_i x` and `x o_i g`.
fn close_once(gen: &GeneratorSpec, field: Field, layer: &[Element]) -> Vec<Element> {
    let g = Element::generator(gen.clone(), field);
    let n = gen.arity;
    par::map(layer, |x| {
        let mut out = Vec::new();
        for i in 1..=n {
            out.push(compose(&g, i, x).expect("slot within generator arity"));
        }
        if let Some(arity) = x.arity() {
            for i in 1..=arity {
                out.push(compose(x, i, &g).expect("slot within element arity"));
            }
        }
        out
    })
    .into_iter()
    .flatten()
    .filter(|e| !e.is_zero())
    .collect()
}

/// A spanning set of the weight-`w` layer of the ideal generated by the
/// relations: the relations themselves at `w = 2`, and the one-step
/// composition closure of the weight-`(w-1)` spanning set above that.
pub fn ideal_span(p: &QuadraticPresentation, w: usize) -> Vec<Element> {
    if w < 2 {
        return Vec::new();
    }
    let mut layer = p.relation_elements();
    for _ in 2..w {
        layer = close_once(p.gen(), p.field(), &layer);
    }
    layer
}

/// Basis of one homogeneous component of the quotient operad.
#[derive(Clone, Debug)]
pub struct ComponentBasis {
    gen: GeneratorSpec,
    field: Field,
    weight: usize,
    /// All trees of this weight, ascending path-glex; the column order.
    trees: Vec<PlanarTree>,
    column: HashMap<PlanarTree, usize>,
    ideal: Echelon,
    standard: Vec<usize>,
    standard_pos: Vec<Option<usize>>,
}

impl ComponentBasis {
    fn build(gen: &GeneratorSpec, field: Field, weight: usize, ideal_rows: &[Element]) -> Result<Self> {
        let trees = enumerate_trees(gen.arity, weight)?;
        let column: HashMap<PlanarTree, usize> = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let rows: Vec<SparseRow> = par::map(ideal_rows, |e| to_row(&column, e));
        let mut ideal = Echelon::new(trees.len(), field);
        ideal.extend(&rows);
        ideal.interreduce();
        let standard: Vec<usize> = (0..trees.len()).filter(|&c| !ideal.is_pivot(c)).collect();
        let mut standard_pos = vec![None; trees.len()];
        for (k, &c) in standard.iter().enumerate() {
            standard_pos[c] = Some(k);
        }
        Ok(ComponentBasis { gen: gen.clone(), field, weight, trees, column, ideal, standard, standard_pos })
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn gen(&self) -> &GeneratorSpec {
        &self.gen
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Dimension of the quotient component.
    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    /// Rank of the ideal layer.
    pub fn ideal_rank(&self) -> usize {
        self.ideal.rank()
    }

    /// All monomial shapes of this weight, ascending path-glex.
    pub fn all_trees(&self) -> &[PlanarTree] {
        &self.trees
    }

    pub fn standard_trees(&self) -> impl Iterator<Item = &PlanarTree> + '_ {
        self.standard.iter().map(|&c| &self.trees[c])
    }

    pub fn standard(&self) -> Vec<Monomial> {
        self.standard_trees()
            .map(|t| Monomial::new(self.gen.clone(), t.clone()).expect("arity matches"))
            .collect()
    }

    /// Index of `tree` in the standard basis, if it is standard.
    pub fn standard_position(&self, tree: &PlanarTree) -> Option<usize> {
        self.column.get(tree).and_then(|&c| self.standard_pos[c])
    }

    pub fn is_standard(&self, tree: &PlanarTree) -> bool {
        self.standard_position(tree).is_some()
    }

    /// Basis of the ideal layer as elements (interreduced, leading
    /// coefficient 1).
    pub fn ideal_basis(&self) -> Vec<Element> {
        self.ideal.rows().iter().map(|r| self.to_element(r)).collect()
    }

    fn to_element(&self, row: &SparseRow) -> Element {
        let mut e = Element::zero(self.gen.clone(), self.field);
        for (c, x) in &row.0 {
            e.add_term(self.trees[*c].clone(), x.clone()).expect("homogeneous row");
        }
        e
    }

    /// Coordinates of a monomial over the standard basis.
    pub fn reduction_row(&self, tree: &PlanarTree) -> Result<Vec<Scalar>> {
        let &c = self.column.get(tree).ok_or(OperadError::WeightMismatch {
            expected: self.weight,
            found: tree.weight(),
        })?;
        let mut out = vec![self.field.zero(); self.dim()];
        match self.standard_pos[c] {
            Some(k) => out[k] = self.field.one(),
            None => {
                let row = self.ideal.pivot_row(c).expect("non-standard columns are pivots");
                for (col, x) in &row.0 {
                    if *col != c {
                        let k = self.standard_pos[*col].expect("interreduced rows meet only standard columns");
                        out[k] = -x;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of a homogeneous element over the standard basis. Linear,
    /// and zero exactly on the ideal layer.
    pub fn reduce(&self, e: &Element) -> Result<Vec<Scalar>> {
        if e.gen() != &self.gen {
            return Err(OperadError::GeneratorMismatch(format!("{} vs {}", e.gen(), self.gen)));
        }
        if e.field() != self.field {
            return Err(OperadError::FieldMismatch(format!("{} vs {}", e.field(), self.field)));
        }
        if let Some(w) = e.weight() {
            if w != self.weight {
                return Err(OperadError::WeightMismatch { expected: self.weight, found: w });
            }
        }
        let mut out = vec![self.field.zero(); self.dim()];
        for (t, c) in e.terms() {
            for (acc, x) in out.iter_mut().zip(self.reduction_row(t)?) {
                *acc += &(c * &x);
            }
        }
        Ok(out)
    }
}

fn to_row(column: &HashMap<PlanarTree, usize>, e: &Element) -> SparseRow {
    let mut entries: Vec<(usize, Scalar)> = e.terms().map(|(t, c)| (column[t], c.clone())).collect();
    entries.sort_by_key(|(c, _)| *c);
    SparseRow(entries)
}

/// Components of weights `0..=w_max`, each ideal layer generated from an
/// echelon basis of the previous one.
#[derive(Clone, Debug)]
pub struct ComponentTower {
    presentation: QuadraticPresentation,
    layers: Vec<ComponentBasis>,
}

impl ComponentTower {
    pub fn new(p: &QuadraticPresentation) -> Self {
        ComponentTower { presentation: p.clone(), layers: Vec::new() }
    }

    pub fn build(p: &QuadraticPresentation, w_max: usize) -> Result<Self> {
        let mut t = Self::new(p);
        t.extend_to(w_max)?;
        Ok(t)
    }

    pub fn presentation(&self) -> &QuadraticPresentation {
        &self.presentation
    }

    pub fn extend_to(&mut self, w_max: usize) -> Result<()> {
        let gen = self.presentation.gen().clone();
        let field = self.presentation.field();
        while self.layers.len() <= w_max {
            let w = self.layers.len();
            let rows = match w {
                0 | 1 => Vec::new(),
                2 => self.presentation.relation_elements(),
                _ => close_once(&gen, field, &self.layers[w - 1].ideal_basis()),
            };
            self.layers.push(ComponentBasis::build(&gen, field, w, &rows)?);
        }
        Ok(())
    }

    pub fn layer(&self, w: usize) -> Option<&ComponentBasis> {
        self.layers.get(w)
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.layers.len().checked_sub(1)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.dim()).collect()
    }

    /// For each weight `w + 1 <= max`, whether every standard monomial is
    /// `s o_i g` for a standard monomial `s` of weight `w`.
    pub fn basis_stability(&self) -> Vec<StabilityVerdict> {
        (1..self.layers.len())
            .map(|w| {
                let lower = &self.layers[w - 1];
                let unfactored: Vec<String> = self.layers[w]
                    .standard_trees()
                    .filter(|t| !t.cherries().iter().any(|(_, s)| lower.is_standard(s)))
                    .map(|t| t.to_string())
                    .collect();
                StabilityVerdict { weight: w, stable: unfactored.is_empty(), unfactored }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub weight: usize,
    pub stable: bool,
    pub unfactored: Vec<String>,
}

pub fn component_basis(p: &QuadraticPresentation, w: usize) -> Result<ComponentBasis> {
    let tower = ComponentTower::build(p, w)?;
    Ok(tower.layers.into_iter().nth(w).expect("tower built through w"))
}

/// Dimensions of the quotient components of weights `0..=w_max`.
pub fn dims(p: &QuadraticPresentation, w_max: usize) -> Result<Vec<usize>> {
    Ok(ComponentTower::build(p, w_max)?.dims())
}

pub fn reduce(cb: &ComponentBasis, e: &Element) -> Result<Vec<Scalar>> {
    cb.reduce(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroebnerWeight {
    pub weight: usize,
    /// Number of standard monomials.
    pub standard: usize,
    /// Trees with no internal node in the first slot of its parent.
    pub first_slot_free: usize,
    /// `catalan(n - 1, w)`.
    pub catalan: u128,
    /// The standard monomials are exactly the trees with no internal node
    /// in the last slot of its parent (the mirror image of the first-slot
    /// condition, since the right comb leads).
    pub normal_forms_match: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroebnerReport {
    pub arity: usize,
    pub weights: Vec<GroebnerWeight>,
}

impl GroebnerReport {
    pub fn ok(&self) -> bool {
        self.weights.iter().all(|w| w.ok)
    }
}

/// For even arity the single partial-associativity relation generates an
/// ideal whose quotient has a basis of trees that never compose into one
/// extreme slot; this checks the counts weight by weight.
pub fn groebner_check_even(p: &QuadraticPresentation, w_max: usize) -> Result<GroebnerReport> {
    let n = p.arity();
    if n % 2 == 1 {
        return Err(OperadError::OddArity(n));
    }
    let tower = ComponentTower::build(p, w_max)?;
    let mut weights = Vec::new();
    for w in 0..=w_max {
        let layer = tower.layer(w).expect("built");
        let first_slot_free = layer.all_trees().iter().filter(|t| !t.node_slots().contains(&1)).count();
        let normal_forms_match = layer
            .all_trees()
            .iter()
            .all(|t| layer.is_standard(t) == !t.node_slots().contains(&n));
        let cat = catalan(n - 1, w)?;
        let ok = layer.dim() == first_slot_free && first_slot_free as u128 == cat;
        weights.push(GroebnerWeight {
            weight: w,
            standard: layer.dim(),
            first_slot_free,
            catalan: cat,
            normal_forms_match,
            ok,
        });
    }
    Ok(GroebnerReport { arity: n, weights })
}
