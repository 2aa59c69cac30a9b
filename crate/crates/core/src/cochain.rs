//! Decomposable operadic cochains, their n-ary cup products, and checks of
//! partial associativity of the cup product.
//!
//! A decomposable cochain of degree `k` is a tuple of endomorphisms of `A`,
//! one per argument slot; its value on a tree monomial of the dual operad
//! applies the endomorphisms to the arguments and evaluates the tree in `A`
//! with `mu*` read as `mu`.
//!
//! The cup of `n` cochains concatenates their component tuples. For `n >= 4`
//! the concatenation is shorter than the arity of the result, so a cochain
//! also records its base weight `b`: components cover a weight-`b` tree, and
//! each of the remaining `k - b` growth steps `o_s mu*` on the way to the
//! evaluated monomial replaces the component at position `s` by `n` copies.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{evaluate_tree, AlgebraElement, NAryAlgebra};
use crate::components::{ComponentBasis, ComponentTower};
use crate::error::{OperadError, Result};
use crate::freeops::{compose, Element, GeneratorSpec};
use crate::par;
use crate::quadratic::{ta_presentation, QuadraticPresentation};
use crate::scalar::{Field, Scalar};
use crate::trees::PlanarTree;

/// A linear map `A -> A` as a square coordinate matrix acting on columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    field: Field,
    rows: Vec<Vec<Scalar>>,
}

impl Endomorphism {
    pub fn new(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(OperadError::InvalidCochain("endomorphism matrix must be square".into()));
        }
        if let Some(x) = rows.iter().flatten().find(|x| x.field() != field) {
            return Err(OperadError::FieldMismatch(format!("{x} in a map over {field}")));
        }
        Ok(Endomorphism { field, rows })
    }

    pub fn identity(field: Field, m: usize) -> Self {
        let rows = (0..m).map(|i| (0..m).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect();
        Endomorphism { field, rows }
    }

    pub fn scalar(field: Field, m: usize, s: &Scalar) -> Self {
        Self::identity(field, m).scale(s)
    }

    /// Entries drawn uniformly from `-2..=2`.
    pub fn random<R: Rng + ?Sized>(field: Field, m: usize, rng: &mut R) -> Self {
        let rows = (0..m).map(|_| (0..m).map(|_| field.from_i64(rng.gen_range(-2..=2))).collect()).collect();
        Endomorphism { field, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Endomorphism { field: self.field, rows: self.rows.iter().map(|r| r.iter().map(|x| x * s).collect()).collect() }
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        assert_eq!(a.dim(), self.dim(), "dimension mismatch");
        let coords = self
            .rows
            .iter()
            .map(|r| {
                r.iter().zip(a.coords()).fold(self.field.zero(), |mut acc, (x, y)| {
                    acc += &(x * y);
                    acc
                })
            })
            .collect();
        AlgebraElement::new(self.field, coords).expect("same field")
    }
}

#[derive(Clone, Debug)]
pub struct DecomposableCochain {
    algebra: Arc<NAryAlgebra>,
    degree: usize,
    base_weight: usize,
    components: Vec<Endomorphism>,
}

impl DecomposableCochain {
    /// A degree-`k` cochain with its full tuple of `1 + k(n-1)` components.
    pub fn new(algebra: Arc<NAryAlgebra>, degree: usize, components: Vec<Endomorphism>) -> Result<Self> {
        let n = algebra.arity();
        let expected = 1 + degree * (n - 1);
        if components.len() != expected {
            return Err(OperadError::InvalidCochain(format!(
                "degree {degree} needs {expected} components, got {}",
                components.len()
            )));
        }
        for c in &components {
            if c.dim() != algebra.dim() || c.field != algebra.field() {
                return Err(OperadError::InvalidCochain("component does not act on the algebra".into()));
            }
        }
        Ok(DecomposableCochain { algebra, degree, base_weight: degree, components })
    }

    pub fn random<R: Rng + ?Sized>(algebra: Arc<NAryAlgebra>, degree: usize, rng: &mut R) -> Self {
        let len = 1 + degree * (algebra.arity() - 1);
        let components = (0..len).map(|_| Endomorphism::random(algebra.field(), algebra.dim(), rng)).collect();
        DecomposableCochain { algebra, degree, base_weight: degree, components }
    }

    pub fn algebra(&self) -> &Arc<NAryAlgebra> {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Weight of the trees the component tuple covers directly.
    pub fn base_weight(&self) -> usize {
        self.base_weight
    }

    pub fn components(&self) -> &[Endomorphism] {
        &self.components
    }

    /// Replaces component `i` (0-based).
    pub fn with_component(&self, i: usize, f: Endomorphism) -> Result<Self> {
        if i >= self.components.len() {
            return Err(OperadError::SlotOutOfRange { slot: i + 1, max: self.components.len() });
        }
        let mut out = self.clone();
        out.components[i] = f;
        Ok(out)
    }

    fn same_algebra(&self, other: &DecomposableCochain) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }
}

/// `<c_1, ..., c_n>`: degree `sum deg c_i + n - 2`, components concatenated.
pub fn cup(factors: &[DecomposableCochain]) -> Result<DecomposableCochain> {
    let first = factors.first().ok_or_else(|| OperadError::InvalidCochain("empty cup".into()))?;
    let n = first.algebra.arity();
    if factors.len() != n {
        return Err(OperadError::ArityMismatch { expected: n, found: factors.len() });
    }
    if n < 3 {
        return Err(OperadError::InvalidCochain(format!("cup products need arity at least 3, got {n}")));
    }
    if let Some(bad) = factors.iter().find(|c| !c.same_algebra(first)) {
        return Err(OperadError::InvalidCochain(format!(
            "factors act on different algebras (dimension {} vs {})",
            first.algebra.dim(),
            bad.algebra.dim()
        )));
    }
    Ok(DecomposableCochain {
        algebra: first.algebra.clone(),
        degree: factors.iter().map(|c| c.degree).sum::<usize>() + n - 2,
        base_weight: factors.iter().map(|c| c.base_weight).sum::<usize>() + 1,
        components: factors.iter().flat_map(|c| c.components.iter().cloned()).collect(),
    })
}

/// Nested cup products with leaves of type `T`.
#[derive(Clone, Debug)]
pub enum CupExpression<T = DecomposableCochain> {
    Leaf(T),
    Cup(Vec<CupExpression<T>>),
}

impl<T> CupExpression<T> {
    /// For `<x_1, ..., <...>, ..., x_n>` with exactly one cup child, all of
    /// whose children are leaves: the slot of that child.
    pub fn inner_slot(&self) -> Result<usize> {
        let CupExpression::Cup(children) = self else {
            return Err(OperadError::InvalidArgument("a single cochain is not a nested cup".into()));
        };
        let inner: Vec<usize> = children
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c, CupExpression::Cup(_)))
            .map(|(i, _)| i + 1)
            .collect();
        match inner[..] {
            [p] => {
                let CupExpression::Cup(grand) = &children[p - 1] else { unreachable!() };
                if grand.iter().any(|g| matches!(g, CupExpression::Cup(_))) {
                    Err(OperadError::InvalidArgument("nesting deeper than two levels".into()))
                } else {
                    Ok(p)
                }
            }
            _ => Err(OperadError::InvalidArgument(format!("expected exactly one inner cup, found {}", inner.len()))),
        }
    }

    pub fn leaves(&self) -> Vec<&T> {
        match self {
            CupExpression::Leaf(t) => vec![t],
            CupExpression::Cup(children) => children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    /// `<x_1, ..., x_{p-1}, <x_p, ..., x_{p+n-1}>, x_{p+n}, ..., x_{2n-1}>`.
    pub fn nested_at(n: usize, p: usize, leaves: Vec<T>) -> Result<Self> {
        if leaves.len() != 2 * n - 1 {
            return Err(OperadError::ArityMismatch { expected: 2 * n - 1, found: leaves.len() });
        }
        if p == 0 || p > n {
            return Err(OperadError::SlotOutOfRange { slot: p, max: n });
        }
        let mut it = leaves.into_iter().map(CupExpression::Leaf);
        let mut outer: Vec<Self> = it.by_ref().take(p - 1).collect();
        outer.push(CupExpression::Cup(it.by_ref().take(n).collect()));
        outer.extend(it);
        Ok(CupExpression::Cup(outer))
    }
}

impl CupExpression<DecomposableCochain> {
    pub fn evaluate(&self) -> Result<DecomposableCochain> {
        match self {
            CupExpression::Leaf(c) => Ok(c.clone()),
            CupExpression::Cup(children) => cup(&children.iter().map(|c| c.evaluate()).collect::<Result<Vec<_>>>()?),
        }
    }
}

/// A monomial of weight at least 2 of the dual operad, recorded as the
/// seed `m_q = mu* o_q mu*` followed by right compositions with `mu*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContextMonomial {
    gen: GeneratorSpec,
    seed: usize,
    extension: Vec<usize>,
}

impl ContextMonomial {
    pub fn new(gen: GeneratorSpec, seed: usize, extension: Vec<usize>) -> Result<Self> {
        let n = gen.arity;
        if seed == 0 || seed > n {
            return Err(OperadError::SlotOutOfRange { slot: seed, max: n });
        }
        let mut arity = 2 * n - 1;
        for &s in &extension {
            if s == 0 || s > arity {
                return Err(OperadError::SlotOutOfRange { slot: s, max: arity });
            }
            arity += n - 1;
        }
        Ok(ContextMonomial { gen, seed, extension })
    }

    /// Writes a tree as seed plus extension by repeatedly collapsing its
    /// rightmost all-leaf node.
    pub fn canonical(gen: GeneratorSpec, tree: &PlanarTree) -> Result<Self> {
        if tree.arity() != gen.arity {
            return Err(OperadError::ArityMismatch { expected: gen.arity, found: tree.arity() });
        }
        if tree.weight() < 2 {
            return Err(OperadError::WeightMismatch { expected: 2, found: tree.weight() });
        }
        let mut t = tree.clone();
        let mut extension = Vec::new();
        while t.weight() > 2 {
            let (leaf, rest) = t.cherries().pop().expect("every nonempty tree has an all-leaf node");
            extension.push(leaf);
            t = rest;
        }
        extension.reverse();
        let seed = t.weight_two_slot().expect("weight two");
        Self::new(gen, seed, extension)
    }

    pub fn gen(&self) -> &GeneratorSpec {
        &self.gen
    }

    pub fn seed(&self) -> usize {
        self.seed
    }

    pub fn extension(&self) -> &[usize] {
        &self.extension
    }

    pub fn weight(&self) -> usize {
        2 + self.extension.len()
    }

    pub fn arity(&self) -> usize {
        1 + self.weight() * (self.gen.arity - 1)
    }

    /// Growth steps from `mu*`: the seed slot, then the extension slots.
    pub fn steps(&self) -> Vec<usize> {
        std::iter::once(self.seed).chain(self.extension.iter().copied()).collect()
    }

    pub fn with_seed(&self, p: usize) -> Result<Self> {
        Self::new(self.gen.clone(), p, self.extension.clone())
    }

    pub fn extended(&self, slot: usize) -> Result<Self> {
        let mut extension = self.extension.clone();
        extension.push(slot);
        Self::new(self.gen.clone(), self.seed, extension)
    }

    pub fn tree(&self) -> PlanarTree {
        let n = self.gen.arity;
        let corolla = PlanarTree::corolla(n).expect("valid arity");
        let mut t = PlanarTree::weight_two(n, self.seed).expect("seed checked");
        for &s in &self.extension {
            t = t.graft(s, &corolla).expect("slots checked");
        }
        t
    }

    /// The composite as an element of the free operad, Koszul signs
    /// included.
    pub fn expand(&self, field: Field) -> Element {
        let g = Element::generator(self.gen.clone(), field);
        let mut e = compose(&g, self.seed, &g).expect("seed checked");
        for &s in &self.extension {
            e = compose(&e, s, &g).expect("slots checked");
        }
        e
    }

    pub fn random<R: Rng + ?Sized>(gen: GeneratorSpec, weight: usize, rng: &mut R) -> Result<Self> {
        if weight < 2 {
            return Err(OperadError::WeightMismatch { expected: 2, found: weight });
        }
        let n = gen.arity;
        let seed = rng.gen_range(1..=n);
        let mut arity = 2 * n - 1;
        let mut extension = Vec::new();
        for _ in 2..weight {
            extension.push(rng.gen_range(1..=arity));
            arity += n - 1;
        }
        Self::new(gen, seed, extension)
    }
}

impl fmt::Display for ContextMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = format!("m{}", self.seed);
        for slot in &self.extension {
            s = format!("({s} o{slot} {})", self.gen.symbol);
        }
        f.write_str(&s)
    }
}

/// Component tuple used on a monomial reached by `steps` from `mu*`.
fn expanded_components<'a>(c: &'a DecomposableCochain, steps: &[usize]) -> Vec<&'a Endomorphism> {
    let n = c.algebra.arity();
    let mut comps: Vec<&Endomorphism> = c.components.iter().collect();
    for &s in &steps[c.base_weight.saturating_sub(1)..] {
        let f = comps[s - 1];
        comps.splice(s - 1..s, std::iter::repeat_n(f, n));
    }
    comps
}

fn apply_and_evaluate(
    c: &DecomposableCochain,
    tree: &PlanarTree,
    comps: &[&Endomorphism],
    args: &[AlgebraElement],
) -> Result<AlgebraElement> {
    if args.len() != comps.len() {
        return Err(OperadError::ArityMismatch { expected: comps.len(), found: args.len() });
    }
    if let Some(a) = args.iter().find(|a| a.dim() != c.algebra.dim() || a.field() != c.algebra.field()) {
        return Err(OperadError::InvalidArgument(format!("argument {a} is not in the algebra")));
    }
    let inputs: Vec<AlgebraElement> = comps.iter().zip(args).map(|(f, a)| f.apply(a)).collect();
    evaluate_tree(&c.algebra, tree, &inputs)
}

/// Value of `c` on the tree monomial `gamma`. When the components cover
/// fewer slots than `gamma` has, the growth path of `gamma` is read off
/// [`ContextMonomial::canonical`].
pub fn evaluate_cochain(c: &DecomposableCochain, gamma: &PlanarTree, args: &[AlgebraElement]) -> Result<AlgebraElement> {
    if gamma.arity() != c.algebra.arity() {
        return Err(OperadError::ArityMismatch { expected: c.algebra.arity(), found: gamma.arity() });
    }
    if gamma.weight() != c.degree {
        return Err(OperadError::WeightMismatch { expected: c.degree, found: gamma.weight() });
    }
    if c.base_weight == c.degree {
        let comps: Vec<&Endomorphism> = c.components.iter().collect();
        return apply_and_evaluate(c, gamma, &comps, args);
    }
    let gen = GeneratorSpec::new("mu*", gamma.arity(), 0)?;
    evaluate_in_context(c, &ContextMonomial::canonical(gen, gamma)?, args)
}

/// Value of `c` on the monomial `beta`, replicating components along the
/// growth steps recorded in `beta`.
pub fn evaluate_in_context(c: &DecomposableCochain, beta: &ContextMonomial, args: &[AlgebraElement]) -> Result<AlgebraElement> {
    if beta.gen.arity != c.algebra.arity() {
        return Err(OperadError::ArityMismatch { expected: c.algebra.arity(), found: beta.gen.arity });
    }
    if beta.weight() != c.degree {
        return Err(OperadError::WeightMismatch { expected: c.degree, found: beta.weight() });
    }
    let comps = expanded_components(c, &beta.steps());
    apply_and_evaluate(c, &beta.tree(), &comps, args)
}

/// Rewrites `e(beta)` for a two-level nesting with inner cup at slot `p` as
/// the reference nesting evaluated on `beta` with its seed moved to `m_p`.
pub fn nested_symbolic_eval<T>(e: &CupExpression<T>, beta: &ContextMonomial) -> Result<ContextMonomial> {
    beta.with_seed(e.inner_slot()?)
}

/// Sign of the slot-`p` nesting in the partial-associativity identity.
fn nesting_sign(field: Field, n: usize, p: usize) -> Scalar {
    field.sign((p + 1) * (n - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaCertificate {
    pub beta: String,
    pub tree: String,
    pub reduced_row: Vec<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCertificate {
    pub n: usize,
    pub degrees: Vec<usize>,
    pub weight: usize,
    pub field: String,
    /// Every standard monomial was reached from a standard monomial of one
    /// lower weight by a single right composition.
    pub basis_stable: bool,
    pub monomials: Vec<BetaCertificate>,
    pub ok: bool,
}

/// The dual operad in which the cup-product identity is checked.
pub fn dual_operad(n: usize, field: Field) -> Result<QuadraticPresentation> {
    Ok(ta_presentation(n, 0, field)?.koszul_dual())
}

/// Contexts for the standard monomials of `layer`, built by right
/// extension of contexts one weight down where possible.
fn standard_contexts(tower: &ComponentTower, w: usize) -> Result<(Vec<ContextMonomial>, bool)> {
    let gen = tower.presentation().gen().clone();
    let mut contexts: Vec<(PlanarTree, ContextMonomial)> = tower
        .layer(2)
        .expect("tower reaches weight 2")
        .standard_trees()
        .map(|t| (t.clone(), ContextMonomial::new(gen.clone(), t.weight_two_slot().expect("weight two"), vec![]).expect("valid seed")))
        .collect();
    let mut stable = true;
    for weight in 3..=w {
        let layer: &ComponentBasis = tower.layer(weight).expect("tower built");
        let mut next = Vec::new();
        for t in layer.standard_trees() {
            let from_lower = t
                .cherries()
                .into_iter()
                .rev()
                .find_map(|(leaf, s)| contexts.iter().find(|(u, _)| *u == s).map(|(_, ctx)| (leaf, ctx)));
            let ctx = match from_lower {
                Some((leaf, ctx)) => ctx.extended(leaf)?,
                None => {
                    stable = false;
                    ContextMonomial::canonical(gen.clone(), t)?
                }
            };
            next.push((t.clone(), ctx));
        }
        contexts = next;
    }
    Ok((contexts.into_iter().map(|(_, c)| c).collect(), stable))
}

/// Checks partial associativity of the `n`-ary cup product on cochains of
/// the given degrees: for each standard monomial `beta` of the result
/// weight, `sum_p (-1)^((p+1)(n-1)) beta[m_p]` must reduce to zero in the
/// dual operad.
pub fn theorem_check_symbolic(n: usize, degrees: &[usize], w_cap: usize, field: Field) -> Result<TheoremCertificate> {
    if n < 3 {
        return Err(OperadError::InvalidArgument(format!("cup products need arity at least 3, got {n}")));
    }
    if degrees.len() != 2 * n - 1 {
        return Err(OperadError::ArityMismatch { expected: 2 * n - 1, found: degrees.len() });
    }
    let weight = degrees.iter().sum::<usize>() + 2 * (n - 2);
    if weight > w_cap {
        return Err(OperadError::InvalidArgument(format!("result weight {weight} exceeds the cap {w_cap}")));
    }
    let dual = dual_operad(n, field)?;
    let tower = ComponentTower::build(&dual, weight)?;
    let layer = tower.layer(weight).expect("tower built");
    let (contexts, basis_stable) = standard_contexts(&tower, weight)?;
    let shape: Vec<usize> = degrees.to_vec();
    let nestings: Vec<CupExpression<usize>> =
        (1..=n).map(|p| CupExpression::nested_at(n, p, shape.clone())).collect::<Result<_>>()?;
    let monomials = par::map(&contexts, |beta| -> Result<BetaCertificate> {
        let mut sum = Element::zero(dual.gen().clone(), field);
        for (p, e) in nestings.iter().enumerate() {
            let moved = nested_symbolic_eval(e, beta)?;
            sum = sum.add_scaled(&nesting_sign(field, n, p + 1), &moved.expand(field))?;
        }
        let row = layer.reduce(&sum)?;
        Ok(BetaCertificate {
            beta: beta.to_string(),
            tree: beta.tree().to_string(),
            ok: row.iter().all(Scalar::is_zero),
            reduced_row: row.iter().map(|x| x.to_string()).collect(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let ok = monomials.iter().all(|m| m.ok);
    Ok(TheoremCertificate { n, degrees: degrees.to_vec(), weight, field: field.tag(), basis_stable, monomials, ok })
}

/// `sum_p (-1)^((p+1)(n-1)) <nesting at slot p>(beta[m_p])(args)` evaluated
/// in `A`, with no homological signs.
pub fn pa_defect_numeric(
    n: usize,
    cochains: &[DecomposableCochain],
    beta: &ContextMonomial,
    args: &[AlgebraElement],
) -> Result<AlgebraElement> {
    let first = cochains.first().ok_or_else(|| OperadError::InvalidCochain("no cochains".into()))?;
    if first.algebra.arity() != n {
        return Err(OperadError::ArityMismatch { expected: n, found: first.algebra.arity() });
    }
    let field = first.algebra.field();
    let mut total = AlgebraElement::zero(field, first.algebra.dim());
    for p in 1..=n {
        let e = CupExpression::nested_at(n, p, cochains.to_vec())?;
        let c = e.evaluate()?;
        let value = evaluate_in_context(&c, &nested_symbolic_eval(&e, beta)?, args)?;
        total = total.add(&value.scale(&nesting_sign(field, n, p)));
    }
    Ok(total)
}

/// `sum_p (-1)^((p+1)(n-1))`: `n` for odd `n`, `0` for even `n`.
pub fn sign_total(n: usize) -> i64 {
    (1..=n).map(|p| if ((p + 1) * (n - 1)).is_multiple_of(2) { 1 } else { -1 }).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectProbe {
    pub beta: String,
    pub defect: Vec<String>,
    pub common: Vec<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub n: usize,
    pub field: String,
    pub degrees: Vec<usize>,
    /// The defect should equal this multiple of the common value.
    pub multiple: i64,
    pub trials: usize,
    pub zero: usize,
    pub probes: Vec<DefectProbe>,
    pub ok: bool,
}

/// Random probes of [`pa_defect_numeric`]: random cochains of the given
/// degrees, a random context of the result weight and random arguments.
/// Each probe compares the defect with `sign_total(n)` times the common
/// value of the nestings (which agree in a totally associative algebra).
pub fn defect_probes(algebra: &Arc<NAryAlgebra>, degrees: &[usize], trials: usize, seed: u64) -> Result<DefectReport> {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    let n = algebra.arity();
    if n < 3 {
        return Err(OperadError::InvalidArgument(format!("cup products need arity at least 3, got {n}")));
    }
    if degrees.len() != 2 * n - 1 {
        return Err(OperadError::ArityMismatch { expected: 2 * n - 1, found: degrees.len() });
    }
    let field = algebra.field();
    let weight = degrees.iter().sum::<usize>() + 2 * (n - 2);
    let gen = GeneratorSpec::new("mu", n, 0)?.dual();
    let multiple = field.from_i64(sign_total(n));
    let probes = par::map_range(0..trials, |t| -> Result<DefectProbe> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
        let cochains: Vec<DecomposableCochain> =
            degrees.iter().map(|&k| DecomposableCochain::random(algebra.clone(), k, &mut rng)).collect();
        let beta = ContextMonomial::random(gen.clone(), weight, &mut rng)?;
        let args: Vec<AlgebraElement> =
            (0..beta.arity()).map(|_| AlgebraElement::random(field, algebra.dim(), &mut rng)).collect();
        let defect = pa_defect_numeric(n, &cochains, &beta, &args)?;
        let reference = CupExpression::nested_at(n, 1, cochains)?.evaluate()?;
        let common = evaluate_in_context(&reference, &beta, &args)?;
        Ok(DefectProbe {
            beta: beta.to_string(),
            ok: defect == common.scale(&multiple),
            defect: defect.to_strings(),
            common: common.to_strings(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let zero = probes.iter().filter(|p| p.defect.iter().all(|x| x == "0" || x.starts_with("0 mod"))).count();
    let ok = probes.iter().all(|p| p.ok);
    Ok(DefectReport {
        n,
        field: field.tag(),
        degrees: degrees.to_vec(),
        multiple: sign_total(n),
        trials,
        zero,
        probes,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sample_algebra, SampleKind};

    const Q: Field = Field::Rational;

    fn star(n: usize) -> GeneratorSpec {
        GeneratorSpec::new("mu", n, 0).unwrap().dual()
    }

    #[test]
    fn context_display_and_tree() {
        let beta = ContextMonomial::new(star(4), 1, vec![1, 9]).unwrap();
        assert_eq!(beta.to_string(), "((m1 o1 mu*) o9 mu*)");
        assert_eq!(beta.weight(), 4);
        assert_eq!(beta.arity(), 13);
        assert_eq!(ContextMonomial::canonical(star(4), &beta.tree()).unwrap(), beta);
        assert!(ContextMonomial::new(star(3), 4, vec![]).is_err());
        assert!(ContextMonomial::new(star(3), 1, vec![6]).is_err());
    }

    #[test]
    fn seed_substitution() {
        let beta = ContextMonomial::new(star(4), 1, vec![1, 9]).unwrap();
        let e = CupExpression::nested_at(4, 4, (0..7).collect()).unwrap();
        assert_eq!(nested_symbolic_eval(&e, &beta).unwrap().to_string(), "((m4 o1 mu*) o9 mu*)");
        let e3 = CupExpression::nested_at(3, 2, (0..5).collect()).unwrap();
        let m1 = ContextMonomial::new(star(3), 1, vec![]).unwrap();
        assert_eq!(nested_symbolic_eval(&e3, &m1).unwrap().seed(), 2);
        let flat: CupExpression<usize> = CupExpression::Cup((0..3).map(CupExpression::Leaf).collect());
        assert!(nested_symbolic_eval(&flat, &m1).is_err());
    }

    #[test]
    fn quaternary_cup_replicates_first_component() {
        let a = Arc::new(sample_algebra(SampleKind::Diagonal { n: 4, dim: 2 }, Q).unwrap());
        let maps: Vec<Endomorphism> =
            (2..6).map(|k| Endomorphism::scalar(Q, 2, &Q.from_i64(k))).collect();
        let factors: Vec<_> =
            maps.iter().map(|f| DecomposableCochain::new(a.clone(), 0, vec![f.clone()]).unwrap()).collect();
        let c = cup(&factors).unwrap();
        assert_eq!((c.degree(), c.base_weight(), c.components().len()), (2, 1, 4));
        let args: Vec<_> = (0..7).map(|_| AlgebraElement::from_i64(Q, &[1, 1])).collect();
        // m1: f applied four times, then g, h, k once: 2^4 * 3 * 4 * 5.
        let m1 = PlanarTree::weight_two(4, 1).unwrap();
        assert_eq!(evaluate_cochain(&c, &m1, &args).unwrap(), AlgebraElement::from_i64(Q, &[960, 960]));
        let m2 = PlanarTree::weight_two(4, 2).unwrap();
        assert_eq!(evaluate_cochain(&c, &m2, &args).unwrap(), AlgebraElement::from_i64(Q, &[2 * 81 * 4 * 5, 2 * 81 * 4 * 5]));
    }

    #[test]
    fn small_theorem_checks() {
        let c3 = theorem_check_symbolic(3, &[0; 5], 5, Q).unwrap();
        assert!(c3.ok);
        assert_eq!(c3.weight, 2);
        assert_eq!(c3.monomials.len(), 2);
        let c4 = theorem_check_symbolic(4, &[0; 7], 5, Q).unwrap();
        assert!(c4.ok);
        assert_eq!(c4.weight, 4);
        assert!(theorem_check_symbolic(3, &[0; 4], 5, Q).is_err());
        assert!(theorem_check_symbolic(3, &[1, 1, 1, 0, 0], 4, Q).is_err());
    }

    #[test]
    fn defect_multiples() {
        assert_eq!(sign_total(3), 3);
        assert_eq!(sign_total(4), 0);
        assert_eq!(sign_total(5), 5);
        let a = Arc::new(sample_algebra(SampleKind::OddPoly { n: 3, truncation: 5 }, Q).unwrap());
        let r = defect_probes(&a, &[0; 5], 10, 1).unwrap();
        assert!(r.ok);
    }
}
