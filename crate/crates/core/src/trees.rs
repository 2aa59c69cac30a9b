//! Complete planar rooted n-ary trees: the monomial shapes of the free
//! nonsymmetric operad on one n-ary generator.
//!
//! A tree is stored as its preorder word over `{Node, Leaf}`; equality and
//! hashing are word equality. Leaves are numbered 1..=N from left to right.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{OperadError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    Node,
    Leaf,
}

#[derive(Clone, Debug)]
pub struct PlanarTree {
    arity: usize,
    word: Vec<Vertex>,
    /// Depth of each leaf, left to right. Derived from `word`.
    depths: Vec<u16>,
}

impl PartialEq for PlanarTree {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.word == other.word
    }
}

impl Eq for PlanarTree {}

impl Hash for PlanarTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.word.hash(state);
    }
}

/// Trees of different arity are ordered by arity; trees of equal arity by
/// [`path_glex_compare`].
impl Ord for PlanarTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arity.cmp(&other.arity).then_with(|| path_glex_compare(self, other))
    }
}

impl PartialOrd for PlanarTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_arity(n: usize) -> Result<()> {
    if n < 2 {
        Err(OperadError::ArityTooSmall(n))
    } else {
        Ok(())
    }
}

impl PlanarTree {
    /// The single-leaf tree, i.e. the identity operation.
    pub fn identity(n: usize) -> Result<Self> {
        check_arity(n)?;
        Ok(Self::from_valid_word(n, vec![Vertex::Leaf]))
    }

    /// One internal node with `n` leaves.
    pub fn corolla(n: usize) -> Result<Self> {
        check_arity(n)?;
        let mut word = vec![Vertex::Node];
        word.extend(std::iter::repeat_n(Vertex::Leaf, n));
        Ok(Self::from_valid_word(n, word))
    }

    /// The weight-2 tree `mu o_i mu`.
    pub fn weight_two(n: usize, i: usize) -> Result<Self> {
        Self::corolla(n)?.graft(i, &Self::corolla(n)?)
    }

    pub fn from_word(n: usize, word: Vec<Vertex>) -> Result<Self> {
        check_arity(n)?;
        // Each node consumes one open slot and opens n; each leaf consumes one.
        let mut open = 1usize;
        for (pos, v) in word.iter().enumerate() {
            if open == 0 {
                return Err(OperadError::Parse(format!("trailing symbols after position {pos}")));
            }
            open -= 1;
            if *v == Vertex::Node {
                open += n;
            }
        }
        if open != 0 {
            return Err(OperadError::Parse(format!("{open} subtrees missing")));
        }
        Ok(Self::from_valid_word(n, word))
    }

    fn from_valid_word(arity: usize, word: Vec<Vertex>) -> Self {
        let mut depths = Vec::with_capacity(word.len());
        // Stack of remaining-children counters for the open nodes.
        let mut stack: Vec<usize> = Vec::new();
        for v in &word {
            match v {
                Vertex::Node => stack.push(arity),
                Vertex::Leaf => depths.push(stack.len() as u16),
            }
            // The vertex just read fills one slot of its parent; a node's own
            // counter is pushed above, so the parent is the one below it.
            let parent = match v {
                Vertex::Node => stack.len().checked_sub(2),
                Vertex::Leaf => stack.len().checked_sub(1),
            };
            if let Some(p) = parent {
                stack[p] -= 1;
            }
            // Pop finished nodes, but never the node we just opened.
            while let Some(&top) = stack.last() {
                if top == 0 {
                    stack.pop();
                } else {
                    break;
                }
            }
        }
        PlanarTree { arity, word, depths }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn word(&self) -> &[Vertex] {
        &self.word
    }

    /// Number of internal nodes.
    pub fn weight(&self) -> usize {
        self.word.iter().filter(|v| **v == Vertex::Node).count()
    }

    pub fn leaf_count(&self) -> usize {
        self.depths.len()
    }

    /// Depth of every leaf, left to right (the root is at depth 0).
    pub fn leaf_depths(&self) -> &[u16] {
        &self.depths
    }

    pub fn is_identity(&self) -> bool {
        self.word.len() == 1
    }

    /// Position in the preorder word of leaf `i` (1-based).
    fn leaf_position(&self, i: usize) -> Result<usize> {
        let n = self.leaf_count();
        if i == 0 || i > n {
            return Err(OperadError::SlotOutOfRange { slot: i, max: n });
        }
        Ok(self
            .word
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == Vertex::Leaf)
            .nth(i - 1)
            .map(|(pos, _)| pos)
            .expect("leaf index checked"))
    }

    /// Number of internal nodes that come after leaf `i` in preorder.
    pub fn nodes_after_leaf(&self, i: usize) -> Result<usize> {
        let pos = self.leaf_position(i)?;
        Ok(self.word[pos + 1..].iter().filter(|v| **v == Vertex::Node).count())
    }

    /// Replaces leaf `i` (1-based) by `inner`.
    pub fn graft(&self, i: usize, inner: &PlanarTree) -> Result<PlanarTree> {
        if inner.arity != self.arity {
            return Err(OperadError::ArityMismatch { expected: self.arity, found: inner.arity });
        }
        let pos = self.leaf_position(i)?;
        let mut word = Vec::with_capacity(self.word.len() + inner.word.len() - 1);
        word.extend_from_slice(&self.word[..pos]);
        word.extend_from_slice(&inner.word);
        word.extend_from_slice(&self.word[pos + 1..]);
        Ok(Self::from_valid_word(self.arity, word))
    }

    /// Splits off the root: `None` for the identity, otherwise the `n`
    /// subtrees hanging from the root, left to right.
    pub fn root_children(&self) -> Option<Vec<PlanarTree>> {
        if self.is_identity() {
            return None;
        }
        let mut children = Vec::with_capacity(self.arity);
        let mut start = 1;
        while start < self.word.len() {
            let len = subtree_len(&self.word[start..], self.arity);
            children.push(Self::from_valid_word(self.arity, self.word[start..start + len].to_vec()));
            start += len;
        }
        debug_assert_eq!(children.len(), self.arity);
        Some(children)
    }

    /// For a weight-2 tree `mu o_i mu`, returns `i`.
    pub fn weight_two_slot(&self) -> Option<usize> {
        if self.weight() != 2 {
            return None;
        }
        // The inner node is the only Node after the root; its slot is one
        // more than the number of leaves preceding it.
        let inner = self.word[1..].iter().position(|v| *v == Vertex::Node)?;
        Some(self.word[1..1 + inner].iter().filter(|v| **v == Vertex::Leaf).count() + 1)
    }

    /// For every non-root internal node (in preorder), the slot 1..=n it
    /// occupies in its parent.
    pub fn node_slots(&self) -> Vec<usize> {
        let mut slots = Vec::new();
        // (children seen so far) for each open node.
        let mut stack: Vec<usize> = Vec::new();
        for v in &self.word {
            if let Some(top) = stack.last_mut() {
                *top += 1;
                if *v == Vertex::Node {
                    slots.push(*top);
                }
            }
            if *v == Vertex::Node {
                stack.push(0);
            }
            while let Some(&top) = stack.last() {
                if top == self.arity {
                    stack.pop();
                } else {
                    break;
                }
            }
        }
        slots
    }

    /// Internal nodes all of whose children are leaves, as
    /// `(first leaf index, tree with that node collapsed to a leaf)`.
    /// The collapsed tree grafted with a corolla at that leaf gives `self` back.
    pub fn cherries(&self) -> Vec<(usize, PlanarTree)> {
        let n = self.arity;
        let mut out = Vec::new();
        let mut leaves_before = 0;
        for pos in 0..self.word.len() {
            match self.word[pos] {
                Vertex::Leaf => leaves_before += 1,
                Vertex::Node => {
                    let kids = &self.word[pos + 1..];
                    if kids.len() >= n && kids[..n].iter().all(|v| *v == Vertex::Leaf) {
                        let mut word = Vec::with_capacity(self.word.len() - n);
                        word.extend_from_slice(&self.word[..pos]);
                        word.push(Vertex::Leaf);
                        word.extend_from_slice(&self.word[pos + 1 + n..]);
                        out.push((leaves_before + 1, Self::from_valid_word(n, word)));
                    }
                }
            }
        }
        out
    }

    /// Left-right mirror image.
    pub fn mirror(&self) -> PlanarTree {
        match self.root_children() {
            None => self.clone(),
            Some(children) => {
                let mut word = vec![Vertex::Node];
                for c in children.iter().rev() {
                    word.extend_from_slice(&c.mirror().word);
                }
                Self::from_valid_word(self.arity, word)
            }
        }
    }

    /// Parses the s-expression form: `_` is a leaf, `(m t1 ... tn)` a node.
    pub fn parse_sexpr(s: &str, n: usize) -> Result<PlanarTree> {
        check_arity(n)?;
        let tree = Self::parse_sexpr_any(s)?;
        match tree {
            Some(t) if t.arity != n => Err(OperadError::ArityMismatch { expected: n, found: t.arity }),
            Some(t) => Ok(t),
            None => Self::identity(n),
        }
    }

    /// Parses an s-expression, inferring the arity. Returns `None` for the
    /// bare leaf `_`, whose arity cannot be inferred.
    pub fn parse_sexpr_any(s: &str) -> Result<Option<PlanarTree>> {
        let tokens = tokenize(s)?;
        let mut word = Vec::new();
        let mut arity: Option<usize> = None;
        let mut pos = 0;
        parse_node(&tokens, &mut pos, &mut word, &mut arity)?;
        if pos != tokens.len() {
            return Err(OperadError::Parse(format!("trailing input in `{s}`")));
        }
        match arity {
            None => Ok(None),
            Some(n) => Self::from_word(n, word).map(Some),
        }
    }
}

fn subtree_len(word: &[Vertex], n: usize) -> usize {
    let mut open = 1usize;
    for (i, v) in word.iter().enumerate() {
        open -= 1;
        if *v == Vertex::Node {
            open += n;
        }
        if open == 0 {
            return i + 1;
        }
    }
    word.len()
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Node,
    Leaf,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for c in s.chars() {
        match c {
            '(' => out.push(Token::Open),
            ')' => out.push(Token::Close),
            'm' => out.push(Token::Node),
            '_' => out.push(Token::Leaf),
            c if c.is_whitespace() => {}
            c => return Err(OperadError::Parse(format!("unexpected `{c}` in tree `{s}`"))),
        }
    }
    Ok(out)
}

fn parse_node(
    tokens: &[Token],
    pos: &mut usize,
    word: &mut Vec<Vertex>,
    arity: &mut Option<usize>,
) -> Result<()> {
    match tokens.get(*pos) {
        Some(Token::Leaf) => {
            *pos += 1;
            word.push(Vertex::Leaf);
            Ok(())
        }
        Some(Token::Open) => {
            if tokens.get(*pos + 1) != Some(&Token::Node) {
                return Err(OperadError::Parse("expected `m` after `(`".into()));
            }
            *pos += 2;
            word.push(Vertex::Node);
            let mut children = 0;
            while tokens.get(*pos) != Some(&Token::Close) {
                if *pos >= tokens.len() {
                    return Err(OperadError::Parse("unbalanced parentheses".into()));
                }
                parse_node(tokens, pos, word, arity)?;
                children += 1;
            }
            *pos += 1;
            match *arity {
                None => *arity = Some(children),
                Some(n) if n != children => {
                    return Err(OperadError::Parse(format!(
                        "node with {children} children in a tree of arity {n}"
                    )))
                }
                Some(_) => {}
            }
            if children < 2 {
                return Err(OperadError::ArityTooSmall(children));
            }
            Ok(())
        }
        _ => Err(OperadError::Parse("expected `_` or `(`".into())),
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::with_capacity(self.word.len() * 2);
        let mut stack: Vec<usize> = Vec::new();
        for v in &self.word {
            if !stack.is_empty() {
                out.push(' ');
            }
            match v {
                Vertex::Node => {
                    out.push_str("(m");
                    stack.push(self.arity);
                }
                Vertex::Leaf => out.push('_'),
            }
            let parent = match v {
                Vertex::Node => stack.len().checked_sub(2),
                Vertex::Leaf => stack.len().checked_sub(1),
            };
            if let Some(p) = parent {
                stack[p] -= 1;
            }
            while let Some(&top) = stack.last() {
                if top == 0 {
                    stack.pop();
                    out.push(')');
                } else {
                    break;
                }
            }
        }
        f.write_str(&out)
    }
}

/// Graded path-lexicographic order.
///
/// Lower weight is smaller. At equal weight the leaf-depth words are compared
/// lexicographically starting from the rightmost leaf, and the larger word is
/// the greater tree. The right comb `mu o_n mu` is the greatest weight-2 tree.
pub fn path_glex_compare(a: &PlanarTree, b: &PlanarTree) -> Ordering {
    a.leaf_count()
        .cmp(&b.leaf_count())
        .then_with(|| a.depths.iter().rev().cmp(b.depths.iter().rev()))
}

/// The n-ary Catalan number `C(nw, w) / (1 + (n-1)w)`, the number of
/// complete planar n-ary trees with `w` internal nodes.
pub fn catalan(n: usize, w: usize) -> Result<u128> {
    check_arity(n)?;
    let mut binom = BigUint::from(1u32);
    for k in 0..w {
        binom = binom * BigUint::from(n * w - k) / BigUint::from(k + 1);
    }
    let denom = BigUint::from(1 + (n - 1) * w);
    debug_assert_eq!(&binom % &denom, BigUint::from(0u32));
    (binom / denom)
        .try_into()
        .map_err(|_| OperadError::InvalidArgument(format!("catalan({n}, {w}) overflows u128")))
}

/// All trees of weight `w`, in ascending path-glex order.
pub fn enumerate_trees(n: usize, w: usize) -> Result<Vec<PlanarTree>> {
    check_arity(n)?;
    let mut memo: HashMap<usize, Vec<Vec<Vertex>>> = HashMap::new();
    let words = words_of_weight(n, w, &mut memo);
    let mut trees: Vec<PlanarTree> =
        words.into_iter().map(|w| PlanarTree::from_valid_word(n, w)).collect();
    trees.sort_by(path_glex_compare);
    Ok(trees)
}

fn words_of_weight(
    n: usize,
    w: usize,
    memo: &mut HashMap<usize, Vec<Vec<Vertex>>>,
) -> Vec<Vec<Vertex>> {
    if let Some(v) = memo.get(&w) {
        return v.clone();
    }
    let out = if w == 0 {
        vec![vec![Vertex::Leaf]]
    } else {
        // Root plus n subtrees whose weights sum to w - 1.
        let mut partial: Vec<Vec<Vertex>> = vec![vec![Vertex::Node]];
        let mut partial_weight = vec![0usize];
        for child in 0..n {
            let mut next = Vec::new();
            let mut next_weight = Vec::new();
            for (prefix, used) in partial.iter().zip(&partial_weight) {
                let remaining = w - 1 - used;
                let range: Vec<usize> =
                    if child == n - 1 { vec![remaining] } else { (0..=remaining).collect() };
                for cw in range {
                    for sub in words_of_weight(n, cw, memo) {
                        let mut word = prefix.clone();
                        word.extend_from_slice(&sub);
                        next.push(word);
                        next_weight.push(used + cw);
                    }
                }
            }
            partial = next;
            partial_weight = next_weight;
        }
        partial
    };
    memo.insert(w, out.clone());
    out
}

/// A random tree of weight `w` built by grafting corollas at random leaves.
pub fn random_tree<R: Rng + ?Sized>(n: usize, w: usize, rng: &mut R) -> Result<PlanarTree> {
    let corolla = PlanarTree::corolla(n)?;
    let mut t = PlanarTree::identity(n)?;
    for _ in 0..w {
        let leaf = rng.gen_range(1..=t.leaf_count());
        t = t.graft(leaf, &corolla)?;
    }
    Ok(t)
}
