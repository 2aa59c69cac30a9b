//! Reference implementations used as oracles: nested tree shapes, Koszul
//! signs as permutation parities, and ideal layers built from every
//! placement of a relation inside a tree.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use operadix::{enumerate_trees, PlanarTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Node(Vec<Shape>),
}

impl Shape {
    pub fn weight(&self) -> usize {
        match self {
            Shape::Leaf => 0,
            Shape::Node(c) => 1 + c.iter().map(Shape::weight).sum::<usize>(),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(c) => c.iter().map(Shape::leaves).sum(),
        }
    }

    pub fn sexpr(&self) -> String {
        match self {
            Shape::Leaf => "_".into(),
            Shape::Node(c) => {
                let parts: Vec<String> = c.iter().map(Shape::sexpr).collect();
                format!("(m {})", parts.join(" "))
            }
        }
    }

    pub fn to_tree(&self, n: usize) -> PlanarTree {
        PlanarTree::parse_sexpr(&self.sexpr(), n).unwrap()
    }
}

/// Ways to write `total` as an ordered sum of `parts` nonnegative integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All complete n-ary shapes with `w` internal nodes.
pub fn shapes(n: usize, w: usize) -> Vec<Shape> {
    if w == 0 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for split in compositions(w - 1, n) {
        let mut partial: Vec<Vec<Shape>> = vec![vec![]];
        for &k in &split {
            let subs = shapes(n, k);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    subs.iter().map(move |s| {
                        let mut q = p.clone();
                        q.push(s.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(Shape::Node));
    }
    out
}

#[derive(Clone, Debug)]
enum Lab {
    Leaf,
    Hole,
    Node(u32, Vec<Lab>),
}

fn label(s: &Shape, next: &mut u32) -> Lab {
    match s {
        Shape::Leaf => Lab::Leaf,
        Shape::Node(c) => {
            let me = *next;
            *next += 1;
            Lab::Node(me, c.iter().map(|x| label(x, next)).collect())
        }
    }
}

fn preorder(l: &Lab, out: &mut Vec<u32>) {
    if let Lab::Node(k, c) = l {
        out.push(*k);
        for x in c {
            preorder(x, out);
        }
    }
}

fn strip(l: &Lab) -> Shape {
    match l {
        Lab::Leaf => Shape::Leaf,
        Lab::Hole => panic!("unfilled hole"),
        Lab::Node(_, c) => Shape::Node(c.iter().map(strip).collect()),
    }
}

/// Replaces the `k`-th leaf (1-based, counted in `*seen`) with `sub`.
fn graft_lab(l: &Lab, k: usize, seen: &mut usize, sub: &Lab) -> Lab {
    match l {
        Lab::Leaf => {
            *seen += 1;
            if *seen == k {
                sub.clone()
            } else {
                Lab::Leaf
            }
        }
        Lab::Hole => Lab::Hole,
        Lab::Node(x, c) => Lab::Node(*x, c.iter().map(|y| graft_lab(y, k, seen, sub)).collect()),
    }
}

fn fill_hole(l: &Lab, sub: &Lab) -> Lab {
    match l {
        Lab::Hole => sub.clone(),
        Lab::Leaf => Lab::Leaf,
        Lab::Node(x, c) => Lab::Node(*x, c.iter().map(|y| fill_hole(y, sub)).collect()),
    }
}

fn inversions(v: &[u32]) -> usize {
    let mut count = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                count += 1;
            }
        }
    }
    count
}

/// Tree and sign of `a o_i b` for monomials on a generator of degree `d`:
/// the generators are listed as `a`'s then `b`'s, and the sign is the
/// parity of the shuffle into preorder, weighted by `d^2`.
pub fn compose_oracle(a: &Shape, i: usize, b: &Shape, d: i64) -> (Shape, i64) {
    let mut next = 0;
    let la = label(a, &mut next);
    let lb = label(b, &mut next);
    let mut seen = 0;
    let grafted = graft_lab(&la, i, &mut seen, &lb);
    let mut order = Vec::new();
    preorder(&grafted, &mut order);
    let odd = d.rem_euclid(2) == 1 && inversions(&order) % 2 == 1;
    (strip(&grafted), if odd { -1 } else { 1 })
}

/// Paths to every internal node whose child in slot `j` is internal, as
/// `(path of child indices to the parent, j)`.
fn edges(s: &Shape, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, usize)>) {
    if let Shape::Node(c) = s {
        for (k, child) in c.iter().enumerate() {
            if matches!(child, Shape::Node(_)) {
                out.push((path.clone(), k + 1));
            }
            path.push(k);
            edges(child, path, out);
            path.pop();
        }
    }
}

fn subtree<'a>(s: &'a Shape, path: &[usize]) -> &'a Shape {
    path.iter().fold(s, |t, &k| match t {
        Shape::Node(c) => &c[k],
        Shape::Leaf => panic!("path runs into a leaf"),
    })
}

/// Labels every node outside the subtree at `path` in preorder and leaves a
/// hole there.
fn label_context(s: &Shape, path: &[usize], next: &mut u32) -> Lab {
    if path.is_empty() {
        return Lab::Hole;
    }
    match s {
        Shape::Leaf => unreachable!(),
        Shape::Node(c) => {
            let me = *next;
            *next += 1;
            let kids = c
                .iter()
                .enumerate()
                .map(|(k, x)| if k == path[0] { label_context(x, &path[1..], next) } else { label(x, next) })
                .collect();
            Lab::Node(me, kids)
        }
    }
}

/// Rows spanning the weight-`w` layer of the ideal generated by the
/// quadratic relation `rel` (coefficients of `mu o_1 mu, ..., mu o_n mu`),
/// one row per relation placement, over the columns of
/// `enumerate_trees(n, w)`.
pub fn ideal_rows(rels: &[Vec<i64>], n: usize, d: i64, w: usize) -> Vec<Vec<BigInt>> {
    let columns: HashMap<PlanarTree, usize> =
        enumerate_trees(n, w).unwrap().into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut rows = Vec::new();
    for t in shapes(n, w) {
        let mut places = Vec::new();
        edges(&t, &mut vec![], &mut places);
        for (path, j) in places {
            let Shape::Node(uc) = subtree(&t, &path) else { unreachable!() };
            let Shape::Node(vc) = &uc[j - 1] else { unreachable!() };
            let mut b: Vec<Shape> = uc[..j - 1].to_vec();
            b.extend(vc.iter().cloned());
            b.extend(uc[j..].iter().cloned());
            for rel in rels {
                let mut row = vec![BigInt::from(0); columns.len()];
                for (jp, &coeff) in rel.iter().enumerate() {
                    if coeff == 0 {
                        continue;
                    }
                    let mut next = 0;
                    let ctx = label_context(&t, &path, &mut next);
                    let (u, v) = (next, next + 1);
                    next += 2;
                    let lb: Vec<Lab> = b.iter().map(|x| label(x, &mut next)).collect();
                    let mut ukids: Vec<Lab> = lb[..jp].to_vec();
                    ukids.push(Lab::Node(v, lb[jp..jp + n].to_vec()));
                    ukids.extend(lb[jp + n..].iter().cloned());
                    let full = fill_hole(&ctx, &Lab::Node(u, ukids));
                    let mut order = Vec::new();
                    preorder(&full, &mut order);
                    let sign = if d.rem_euclid(2) == 1 && inversions(&order) % 2 == 1 { -1 } else { 1 };
                    let col = columns[&strip(&full).to_tree(n)];
                    row[col] += BigInt::from(sign * coeff);
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// Quotient dimension `catalan(n, w) - rank(ideal layer)` by the oracle.
pub fn oracle_dim(rels: &[Vec<i64>], n: usize, d: i64, w: usize) -> usize {
    let total = shapes(n, w).len();
    if w < 2 {
        return total;
    }
    total - bareiss_rank(&ideal_rows(rels, n, d, w))
}

pub fn ta_rows(n: usize) -> Vec<Vec<i64>> {
    (0..n - 1).map(|i| (0..n).map(|j| if j == i { 1 } else if j == i + 1 { -1 } else { 0 }).collect()).collect()
}

pub fn pa_rows(n: usize) -> Vec<Vec<i64>> {
    vec![(1..=n).map(|i| if ((i + 1) * (n - 1)).is_multiple_of(2) { 1 } else { -1 }).collect()]
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            let factor = m[r][col].clone();
            for c in col..ncols {
                let v = (&m[rank][col] * &m[r][c] - &factor * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Checks the unit, sequential and parallel composition axioms for all
/// monomials `a, b, c` with `w_a + w_b + w_c <= w_max`. Returns the number
/// of identities checked.
#[allow(clippy::needless_range_loop)]
pub fn check_axioms(n: usize, d: i64, w_max: usize) -> Result<usize, String> {
    use operadix::{compose, Element, Field, GeneratorSpec, Monomial};
    let q = Field::Rational;
    let gen = GeneratorSpec::new("mu", n, d).unwrap();
    let mono = |t: &PlanarTree| Element::from_monomial(&Monomial::new(gen.clone(), t.clone()).unwrap(), q.one());
    let by_weight: Vec<Vec<Element>> =
        (0..=w_max).map(|w| enumerate_trees(n, w).unwrap().iter().map(mono).collect()).collect();
    let id = &by_weight[0][0];
    let mut checked = 0;
    let fail = |what: &str, a: &Element, b: &Element, c: &Element| -> String { format!("{what} fails for a={a} b={b} c={c}") };
    for wa in 0..=w_max {
        for a in &by_weight[wa] {
            let na = a.arity().unwrap();
            if compose(id, 1, a).unwrap() != *a {
                return Err(fail("left unit", a, id, id));
            }
            for i in 1..=na {
                if compose(a, i, id).unwrap() != *a {
                    return Err(fail("right unit", a, id, id));
                }
                checked += 2;
            }
            for wb in 0..=(w_max - wa) {
                for b in &by_weight[wb] {
                    let nb = b.arity().unwrap();
                    for wc in 0..=(w_max - wa - wb) {
                        for c in &by_weight[wc] {
                            let sign = if d.rem_euclid(2) == 1 && (wb * wc) % 2 == 1 { -1 } else { 1 };
                            for i in 1..=na {
                                let ab = compose(a, i, b).unwrap();
                                for j in 1..=nb {
                                    let lhs = compose(&ab, i + j - 1, c).unwrap();
                                    let rhs = compose(a, i, &compose(b, j, c).unwrap()).unwrap();
                                    if lhs != rhs {
                                        return Err(fail("sequential axiom", a, b, c));
                                    }
                                    checked += 1;
                                }
                                for j in i + 1..=na {
                                    let lhs = compose(&ab, j + nb - 1, c).unwrap();
                                    let rhs = compose(&compose(a, j, c).unwrap(), i, b).unwrap().scale(&q.from_i64(sign));
                                    if lhs != rhs {
                                        return Err(fail("parallel axiom", a, b, c));
                                    }
                                    checked += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}
