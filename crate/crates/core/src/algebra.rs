//! Finite-dimensional n-ary algebras given by structure constants.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{OperadError, Result};
use crate::par;
use crate::scalar::{Field, Scalar};
use crate::trees::{PlanarTree, Vertex};

/// Coordinates over the basis of an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    field: Field,
    coords: Vec<Scalar>,
}

impl AlgebraElement {
    pub fn new(field: Field, coords: Vec<Scalar>) -> Result<Self> {
        if let Some(x) = coords.iter().find(|x| x.field() != field) {
            return Err(OperadError::FieldMismatch(format!("{x} in an element over {field}")));
        }
        Ok(AlgebraElement { field, coords })
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Self {
        AlgebraElement { field, coords: coords.iter().map(|&k| field.from_i64(k)).collect() }
    }

    pub fn zero(field: Field, dim: usize) -> Self {
        AlgebraElement { field, coords: vec![field.zero(); dim] }
    }

    pub fn basis(field: Field, dim: usize, i: usize) -> Self {
        let mut e = Self::zero(field, dim);
        e.coords[i] = field.one();
        e
    }

    /// Coordinates drawn uniformly from `-3..=3`.
    pub fn random<R: Rng + ?Sized>(field: Field, dim: usize, rng: &mut R) -> Self {
        AlgebraElement { field, coords: (0..dim).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        AlgebraElement { field: self.field, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraElement {
        AlgebraElement { field: self.field, coords: self.coords.iter().map(|a| a * s).collect() }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|x| x.to_string()).collect()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_strings().join(", "))
    }
}

/// An n-ary algebra: `mu(b_{i1}, ..., b_{in}) = sum_j c[(i1..in)][j] b_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NAryAlgebra {
    n: usize,
    dim: usize,
    field: Field,
    labels: Vec<String>,
    /// Indexed by the basis tuple read as a base-`dim` number, first index
    /// most significant.
    constants: Vec<Vec<Scalar>>,
}

impl NAryAlgebra {
    /// Builds an algebra from a function of basis tuples.
    pub fn from_fn(
        n: usize,
        dim: usize,
        field: Field,
        labels: Vec<String>,
        f: impl Fn(&[usize]) -> Vec<Scalar>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(OperadError::ArityTooSmall(n));
        }
        if dim == 0 {
            return Err(OperadError::InvalidAlgebra("dimension must be positive".into()));
        }
        if labels.len() != dim {
            return Err(OperadError::InvalidAlgebra(format!("{} labels for dimension {dim}", labels.len())));
        }
        let count = dim.checked_pow(n as u32).ok_or_else(|| OperadError::InvalidAlgebra("too many structure constants".into()))?;
        let mut constants = Vec::with_capacity(count);
        let mut tuple = vec![0; n];
        for idx in 0..count {
            decode(idx, dim, &mut tuple);
            let row = f(&tuple);
            if row.len() != dim {
                return Err(OperadError::InvalidAlgebra(format!("row for {} has length {}", tuple_key(&tuple), row.len())));
            }
            if let Some(x) = row.iter().find(|x| x.field() != field) {
                return Err(OperadError::FieldMismatch(format!("{x} in an algebra over {field}")));
            }
            constants.push(row);
        }
        Ok(NAryAlgebra { n, dim, field, labels, constants })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn constant(&self, tuple: &[usize]) -> &[Scalar] {
        &self.constants[self.index(tuple)]
    }

    /// A copy with one structure constant replaced.
    pub fn with_constant(&self, tuple: &[usize], j: usize, value: Scalar) -> Result<Self> {
        if tuple.len() != self.n || tuple.iter().chain([&j]).any(|&i| i >= self.dim) {
            return Err(OperadError::InvalidArgument(format!("no structure constant {}[{j}]", tuple_key(tuple))));
        }
        let mut out = self.clone();
        let idx = out.index(tuple);
        out.constants[idx][j] = self.field.coerce(value)?;
        Ok(out)
    }

    fn check_element(&self, a: &AlgebraElement) -> Result<()> {
        if a.dim() != self.dim {
            return Err(OperadError::ArityMismatch { expected: self.dim, found: a.dim() });
        }
        if a.field != self.field {
            return Err(OperadError::FieldMismatch(format!("element over {} in an algebra over {}", a.field, self.field)));
        }
        Ok(())
    }

    /// `mu(args)`, expanded multilinearly over the nonzero coordinates.
    pub fn mu(&self, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        if args.len() != self.n {
            return Err(OperadError::ArityMismatch { expected: self.n, found: args.len() });
        }
        for a in args {
            self.check_element(a)?;
        }
        let support: Vec<Vec<usize>> =
            args.iter().map(|a| (0..self.dim).filter(|&i| !a.coords[i].is_zero()).collect()).collect();
        let mut out = AlgebraElement::zero(self.field, self.dim);
        let mut tuple = vec![0; self.n];
        self.accumulate(args, &support, 0, self.field.one(), &mut tuple, &mut out);
        Ok(out)
    }

    fn accumulate(
        &self,
        args: &[AlgebraElement],
        support: &[Vec<usize>],
        k: usize,
        coeff: Scalar,
        tuple: &mut Vec<usize>,
        out: &mut AlgebraElement,
    ) {
        if k == self.n {
            for (acc, c) in out.coords.iter_mut().zip(self.constant(tuple)) {
                if !c.is_zero() {
                    *acc += &(&coeff * c);
                }
            }
            return;
        }
        for &i in &support[k] {
            tuple[k] = i;
            let next = &coeff * &args[k].coords[i];
            self.accumulate(args, support, k + 1, next, tuple, out);
        }
    }
}

fn decode(mut idx: usize, dim: usize, tuple: &mut [usize]) {
    for slot in tuple.iter_mut().rev() {
        *slot = idx % dim;
        idx /= dim;
    }
}

fn tuple_key(tuple: &[usize]) -> String {
    let parts: Vec<String> = tuple.iter().map(|i| i.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Evaluates a tree in `A`: leaves take the arguments left to right and
/// every internal node applies `mu`.
pub fn evaluate_tree(a: &NAryAlgebra, t: &PlanarTree, args: &[AlgebraElement]) -> Result<AlgebraElement> {
    if t.arity() != a.arity() {
        return Err(OperadError::ArityMismatch { expected: a.arity(), found: t.arity() });
    }
    if args.len() != t.leaf_count() {
        return Err(OperadError::ArityMismatch { expected: t.leaf_count(), found: args.len() });
    }
    for x in args {
        a.check_element(x)?;
    }
    // Postorder over the preorder word: a stack of partial argument lists.
    let mut stack: Vec<Vec<AlgebraElement>> = vec![Vec::new()];
    let mut next_arg = args.iter();
    for v in t.word() {
        match v {
            Vertex::Node => stack.push(Vec::with_capacity(a.arity())),
            Vertex::Leaf => stack.last_mut().expect("open node").push(next_arg.next().expect("leaf count").clone()),
        }
        while stack.len() > 1 && stack.last().expect("nonempty").len() == a.arity() {
            let done = stack.pop().expect("nonempty");
            let value = a.mu(&done)?;
            stack.last_mut().expect("parent").push(value);
        }
    }
    let mut top = stack.pop().expect("root");
    Ok(top.pop().expect("one value at the root"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum AssociativityVerdict {
    Ok { ok: bool },
    Counterexample {
        ok: bool,
        /// Basis indices of the `2n - 1` arguments.
        tuple: Vec<usize>,
        /// The two nestings `mu o_i mu` that disagree.
        types: (usize, usize),
        values: (Vec<String>, Vec<String>),
    },
}

impl AssociativityVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, AssociativityVerdict::Ok { .. })
    }
}

/// Compares all `n` nestings of two products on every basis tuple; the
/// first tuple (lexicographically) where some nesting differs from
/// `mu o_1 mu` is reported.
pub fn check_total_associativity(a: &NAryAlgebra) -> AssociativityVerdict {
    let n = a.arity();
    let len = 2 * n - 1;
    let shapes: Vec<PlanarTree> = (1..=n).map(|i| PlanarTree::weight_two(n, i).expect("valid arity")).collect();
    let total = a.dim().pow(len as u32);
    let indices: Vec<usize> = (0..total).collect();
    let found = par::find_map_first(&indices, |&idx| {
        let mut tuple = vec![0; len];
        decode(idx, a.dim(), &mut tuple);
        let args: Vec<AlgebraElement> = tuple.iter().map(|&i| AlgebraElement::basis(a.field(), a.dim(), i)).collect();
        let first = evaluate_tree(a, &shapes[0], &args).expect("shapes match the algebra");
        for (k, shape) in shapes.iter().enumerate().skip(1) {
            let other = evaluate_tree(a, shape, &args).expect("shapes match the algebra");
            if other != first {
                return Some((tuple, k + 1, first, other));
            }
        }
        None
    });
    match found {
        None => AssociativityVerdict::Ok { ok: true },
        Some((tuple, k, first, other)) => AssociativityVerdict::Counterexample {
            ok: false,
            tuple,
            types: (1, k),
            values: (first.to_strings(), other.to_strings()),
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    /// The ground field with `mu` the product of the `n` arguments.
    Scalar { n: usize },
    /// `span{x, x^3, x^5, ...}` in `F[x]/(x^t)` with `mu` the product; needs
    /// odd `n` to close.
    OddPoly { n: usize, truncation: usize },
    /// `p x q` matrices with `mu(a, b, c) = a J b J c`, where `J` is the
    /// `q x p` matrix with ones on the diagonal; for `p = q` this is the
    /// triple product `abc`.
    RectMatrices { p: usize, q: usize },
    /// `F^dim` with the componentwise product.
    Diagonal { n: usize, dim: usize },
}

/// A validated sample algebra. Fails if the construction is not totally
/// associative.
pub fn sample_algebra(kind: SampleKind, field: Field) -> Result<NAryAlgebra> {
    let one = field.one();
    let zero = field.zero();
    let alg = match kind {
        SampleKind::Scalar { n } => NAryAlgebra::from_fn(n, 1, field, vec!["1".into()], |_| vec![one.clone()])?,
        SampleKind::Diagonal { n, dim } => {
            let labels = (0..dim).map(|i| format!("e{i}")).collect();
            NAryAlgebra::from_fn(n, dim, field, labels, |t| {
                let mut row = vec![zero.clone(); dim];
                if t.iter().all(|&i| i == t[0]) {
                    row[t[0]] = one.clone();
                }
                row
            })?
        }
        SampleKind::OddPoly { n, truncation } => {
            if n % 2 == 0 {
                return Err(OperadError::InvalidAlgebra(format!("odd powers are not closed under {n}-ary products")));
            }
            let dim = truncation / 2;
            if dim == 0 {
                return Err(OperadError::InvalidAlgebra(format!("truncation {truncation} leaves no odd powers")));
            }
            let labels = (0..dim).map(|i| format!("x^{}", 2 * i + 1)).collect();
            NAryAlgebra::from_fn(n, dim, field, labels, |t| {
                let mut row = vec![zero.clone(); dim];
                let power: usize = t.iter().map(|&i| 2 * i + 1).sum();
                if power < truncation {
                    row[(power - 1) / 2] = one.clone();
                }
                row
            })?
        }
        SampleKind::RectMatrices { p, q } => {
            if p == 0 || q == 0 {
                return Err(OperadError::InvalidAlgebra(format!("{p}x{q} matrices")));
            }
            let dim = p * q;
            let labels = (0..dim).map(|k| format!("E{}{}", k / q + 1, k % q + 1)).collect();
            // E_ij J E_kl J E_rs = [j == k][l == r] E_is
            NAryAlgebra::from_fn(3, dim, field, labels, |t| {
                let (i, j) = (t[0] / q, t[0] % q);
                let (k, l) = (t[1] / q, t[1] % q);
                let (r, s) = (t[2] / q, t[2] % q);
                let mut row = vec![zero.clone(); dim];
                if j == k && l == r {
                    row[i * q + s] = one.clone();
                }
                row
            })?
        }
    };
    match check_total_associativity(&alg) {
        AssociativityVerdict::Ok { .. } => Ok(alg),
        v => Err(OperadError::InvalidAlgebra(format!("{kind:?} is not totally associative: {v:?}"))),
    }
}

impl NAryAlgebra {
    pub fn to_json_value(&self) -> Value {
        let mut c = serde_json::Map::new();
        let mut tuple = vec![0; self.n];
        for (idx, row) in self.constants.iter().enumerate() {
            decode(idx, self.dim, &mut tuple);
            c.insert(tuple_key(&tuple), json!(row.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
        }
        json!({ "n": self.n, "dim": self.dim, "field": self.field.tag(), "labels": self.labels, "c": c })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parses algebra JSON. Tuples are 0-based; missing tuples are zero
    /// rows; entries may be strings (`"1/2"`, `"2 mod 3"`) or integers.
    pub fn from_json(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| OperadError::Parse(e.to_string()))?;
        let get_usize = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| OperadError::Parse(format!("missing or invalid `{k}`")))
        };
        let n = get_usize("n")?;
        let dim = get_usize("dim")?;
        let field: Field = match v.get("field") {
            None => Field::Rational,
            Some(Value::String(s)) => s.parse()?,
            Some(other) => return Err(OperadError::Parse(format!("invalid field {other}"))),
        };
        let labels = match v.get("labels") {
            None => (0..dim).map(|i| format!("b{i}")).collect(),
            Some(l) => serde_json::from_value::<Vec<String>>(l.clone()).map_err(|e| OperadError::Parse(e.to_string()))?,
        };
        let mut rows: BTreeMap<Vec<usize>, Vec<Scalar>> = BTreeMap::new();
        if let Some(c) = v.get("c") {
            let c = c.as_object().ok_or_else(|| OperadError::Parse("`c` must be an object".into()))?;
            for (key, row) in c {
                let tuple = parse_tuple(key)?;
                if tuple.len() != n || tuple.iter().any(|&i| i >= dim) {
                    return Err(OperadError::InvalidAlgebra(format!("tuple {key} out of range")));
                }
                let row = row.as_array().ok_or_else(|| OperadError::Parse(format!("row {key} must be an array")))?;
                let row = row
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => field.parse_scalar(s),
                        Value::Number(k) => k
                            .as_i64()
                            .map(|k| field.from_i64(k))
                            .ok_or_else(|| OperadError::Parse(format!("non-integer number {k}; use a string"))),
                        other => Err(OperadError::Parse(format!("invalid entry {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.insert(tuple, row);
            }
        }
        Self::from_fn(n, dim, field, labels, |t| rows.get(t).cloned().unwrap_or_else(|| vec![field.zero(); dim]))
    }
}

fn parse_tuple(key: &str) -> Result<Vec<usize>> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|k| k.strip_suffix(')'))
        .ok_or_else(|| OperadError::Parse(format!("tuple key `{key}` must look like (i1,i2,...)")))?;
    inner
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| OperadError::Parse(format!("tuple key `{key}`: {e}"))))
        .collect()
}
