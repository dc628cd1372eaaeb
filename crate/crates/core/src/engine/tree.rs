use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::scalar::{Coef, Value};
use super::DotOrder;
use crate::exact::{FloatFormat, Rational};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Node {
    Leaf { col: usize, coef: Rational },
    Add(usize, usize),
}

/// Evaluation order for one matrix-row dot product.
///
/// Leaves multiply an input element by a coefficient; internal nodes add.
/// An empty tree evaluates to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvalTree {
    nodes: Vec<Node>,
    root: Option<usize>,
}

impl EvalTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// `(column, coefficient)` of every leaf, left to right.
    pub fn leaves(&self) -> Vec<(usize, Rational)> {
        let mut out = Vec::new();
        if let Some(r) = self.root {
            self.collect_leaves(r, &mut out);
        }
        out
    }

    fn collect_leaves(&self, i: usize, out: &mut Vec<(usize, Rational)>) {
        match &self.nodes[i] {
            Node::Leaf { col, coef } => out.push((*col, coef.clone())),
            Node::Add(l, r) => {
                self.collect_leaves(*l, out);
                self.collect_leaves(*r, out);
            }
        }
    }

    /// Largest number of additions between the root and a leaf.
    pub fn depth(&self) -> usize {
        self.root.map_or(0, |r| self.node_depth(r))
    }

    fn node_depth(&self, i: usize) -> usize {
        match &self.nodes[i] {
            Node::Leaf { .. } => 0,
            Node::Add(l, r) => 1 + self.node_depth(*l).max(self.node_depth(*r)),
        }
    }

    /// The tree with leaf columns dropped: nested `(left, right)` weights.
    /// Two trees with equal shapes perform the same sequence of operations
    /// up to which input element each leaf reads.
    pub fn shape(&self) -> String {
        fn go(t: &EvalTree, i: usize, out: &mut String) {
            match &t.nodes[i] {
                Node::Leaf { coef, .. } => out.push_str(&coef.to_string()),
                Node::Add(l, r) => {
                    out.push('(');
                    go(t, *l, out);
                    out.push(' ');
                    go(t, *r, out);
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        if let Some(r) = self.root {
            go(self, r, &mut s);
        }
        s
    }

    pub fn program(&self) -> RowProgram {
        fn emit(t: &EvalTree, i: usize, out: &mut Vec<Instr>) {
            match &t.nodes[i] {
                Node::Leaf { col, coef } => out.push(Instr::Leaf { col: *col, coef: Coef::new(coef) }),
                Node::Add(l, r) => {
                    emit(t, *l, out);
                    emit(t, *r, out);
                    out.push(Instr::Add);
                }
            }
        }
        let mut instrs = Vec::new();
        if let Some(r) = self.root {
            emit(self, r, &mut instrs);
        }
        RowProgram { instrs }
    }
}

/// Left-to-right accumulation over the nonzero entries of `row`.
pub fn linear_order(row: &[Rational]) -> EvalTree {
    let mut nodes = Vec::new();
    let mut root = None;
    for (col, coef) in row.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        nodes.push(Node::Leaf { col, coef: coef.clone() });
        let leaf = nodes.len() - 1;
        root = Some(match root {
            None => leaf,
            Some(acc) => {
                nodes.push(Node::Add(acc, leaf));
                nodes.len() - 1
            }
        });
    }
    EvalTree { nodes, root }
}

/// Huffman tree over `|coefficient|`, ties broken by column index.
pub fn huffman_order(row: &[Rational]) -> EvalTree {
    let keys: Vec<usize> = (0..row.len()).collect();
    huffman_order_keyed(row, &keys)
}

/// Huffman tree over `|coefficient|` with explicit tie-break keys per column.
///
/// Among equal weights a leaf precedes an internal node, leaves compare by
/// `keys[col]`, and internal nodes by creation order. Zero entries are skipped.
pub fn huffman_order_keyed(row: &[Rational], keys: &[usize]) -> EvalTree {
    assert_eq!(row.len(), keys.len());
    // (weight, 0 = leaf / 1 = internal, column key, creation index)
    let mut heap = BinaryHeap::new();
    let mut nodes = Vec::new();
    for (col, coef) in row.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        nodes.push(Node::Leaf { col, coef: coef.clone() });
        let id = nodes.len() - 1;
        heap.push(Reverse((coef.abs(), 0u8, keys[col], id)));
    }
    while heap.len() > 1 {
        let Reverse((w1, _, _, a)) = heap.pop().expect("len > 1");
        let Reverse((w2, _, _, b)) = heap.pop().expect("len > 1");
        nodes.push(Node::Add(a, b));
        let id = nodes.len() - 1;
        heap.push(Reverse((&w1 + &w2, 1u8, usize::MAX, id)));
    }
    let root = heap.pop().map(|Reverse((_, _, _, id))| id);
    EvalTree { nodes, root }
}

/// Order-of-evaluation tree for `row` under `order`.
pub fn eval_tree(row: &[Rational], keys: &[usize], order: DotOrder) -> EvalTree {
    match order {
        DotOrder::Linear => linear_order(row),
        DotOrder::Huffman => huffman_order_keyed(row, keys),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instr {
    Leaf { col: usize, coef: Coef },
    Add,
}

const STACK: usize = 64;

/// A postorder flattening of an [`EvalTree`].
#[derive(Clone, Debug, PartialEq)]
pub struct RowProgram {
    instrs: Vec<Instr>,
}

impl RowProgram {
    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    #[inline]
    pub fn eval<V: Value>(&self, get: impl Fn(usize) -> V, format: FloatFormat) -> V {
        let mut stack = [V::zero(); STACK];
        let mut top = 0;
        for ins in &self.instrs {
            match ins {
                Instr::Leaf { col, coef } => {
                    stack[top] = get(*col).scale(coef, format);
                    top += 1;
                }
                Instr::Add => {
                    top -= 1;
                    stack[top - 1] = stack[top - 1].add(stack[top], format);
                }
            }
        }
        if top == 0 { V::zero() } else { stack[0] }
    }
}

/// Trees and programs for every row of one matrix, in both orders.
#[derive(Clone, Debug)]
pub struct MatrixPrograms {
    linear_trees: Vec<EvalTree>,
    huffman_trees: Vec<EvalTree>,
    linear: Vec<RowProgram>,
    huffman: Vec<RowProgram>,
}

impl MatrixPrograms {
    pub fn build(m: &Matrix<Rational>, keys: &[usize]) -> Self {
        let linear_trees: Vec<EvalTree> = (0..m.rows()).map(|i| linear_order(m.row(i))).collect();
        let huffman_trees: Vec<EvalTree> =
            (0..m.rows()).map(|i| huffman_order_keyed(m.row(i), keys)).collect();
        for t in linear_trees.iter().chain(&huffman_trees) {
            assert!(t.leaves().len() < STACK, "row too long for the evaluation stack");
        }
        let linear = linear_trees.iter().map(EvalTree::program).collect();
        let huffman = huffman_trees.iter().map(EvalTree::program).collect();
        MatrixPrograms { linear_trees, huffman_trees, linear, huffman }
    }

    pub fn trees(&self, order: DotOrder) -> &[EvalTree] {
        match order {
            DotOrder::Linear => &self.linear_trees,
            DotOrder::Huffman => &self.huffman_trees,
        }
    }

    pub fn programs(&self, order: DotOrder) -> &[RowProgram] {
        match order {
            DotOrder::Linear => &self.linear,
            DotOrder::Huffman => &self.huffman,
        }
    }
}

/// Row programs for `A^T`, `G` and `B^T`.
///
/// `A^T` columns correspond to points, so their Huffman tie-break uses the
/// canonical point rank rather than the column position; the trees are then
/// the same for any ordering of the same point set.
#[derive(Clone, Debug)]
pub struct TransformTrees {
    pub a_t: MatrixPrograms,
    pub g: MatrixPrograms,
    pub b_t: MatrixPrograms,
}

impl TransformTrees {
    pub fn build(
        a_t: &Matrix<Rational>,
        g: &Matrix<Rational>,
        b_t: &Matrix<Rational>,
        point_ranks: &[usize],
    ) -> Self {
        let by_index = |m: &Matrix<Rational>| (0..m.cols()).collect::<Vec<_>>();
        TransformTrees {
            a_t: MatrixPrograms::build(a_t, point_ranks),
            g: MatrixPrograms::build(g, &by_index(g)),
            b_t: MatrixPrograms::build(b_t, &by_index(b_t)),
        }
    }
}

/// Evaluate `coefficients . vector` in `format` following `tree`.
pub fn dot_with_order(tree: &EvalTree, vector: &[f64], format: FloatFormat) -> f64 {
    tree.program().eval(|j| vector[j].convert(format), format)
}
