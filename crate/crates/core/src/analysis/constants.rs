use serde::{Deserialize, Serialize};

use crate::engine::{DotOrder, EvalTree, TransformTrees};
use crate::error::{Error, Result};
use crate::exact::{FloatFormat, Rational};
use crate::matrix::{Matrix, TransformSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumMethod {
    Linear,
    Huffman,
    Custom,
}

/// What multiplying by a matrix entry costs in rounding errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementClass {
    /// Every nonzero entry is a signed power of two: no error.
    PowerOfTwo,
    /// Every entry is representable: one rounding for the product.
    Exact,
    /// Representation error plus the product's rounding.
    General,
}

impl ElementClass {
    pub fn multiplication_term(self) -> usize {
        match self {
            ElementClass::PowerOfTwo => 0,
            ElementClass::Exact => 1,
            ElementClass::General => 2,
        }
    }

    /// The weakest class covering every entry of `m` in `format`.
    pub fn of_matrix(m: &Matrix<Rational>, format: FloatFormat) -> Self {
        m.as_slice()
            .iter()
            .filter(|v| !v.is_zero())
            .map(|v| {
                if v.is_power_of_two() {
                    ElementClass::PowerOfTwo
                } else if v.is_representable(format) {
                    ElementClass::Exact
                } else {
                    ElementClass::General
                }
            })
            .max()
            .unwrap_or(ElementClass::PowerOfTwo)
    }
}

/// Error multipliers of the three transforms: `alpha` for `A^T`, `beta` for
/// `B^T` and `gamma` for `G`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummationConstants {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub method: SumMethod,
    /// The weakest of `classes`.
    pub element_class: ElementClass,
    /// Classes of `A^T`, `B^T`, `G`.
    pub classes: [ElementClass; 3],
}

impl SummationConstants {
    pub fn custom(alpha: f64, beta: f64, gamma: f64) -> Self {
        SummationConstants {
            alpha,
            beta,
            gamma,
            method: SumMethod::Custom,
            element_class: ElementClass::General,
            classes: [ElementClass::General; 3],
        }
    }

    /// `alpha + beta + gamma + 1`.
    pub fn factor_1d(&self) -> f64 {
        self.alpha + self.beta + self.gamma + 1.0
    }

    /// `2 alpha + 2 beta + 2 gamma + 1`.
    pub fn factor_2d(&self) -> f64 {
        2.0 * (self.alpha + self.beta + self.gamma) + 1.0
    }

    /// Constants for `ts` executed with `order`, each matrix classified on its own.
    pub fn for_transform(ts: &TransformSet, order: DotOrder, format: FloatFormat) -> Self {
        let classes = [
            ElementClass::of_matrix(ts.a_t(), format),
            ElementClass::of_matrix(ts.b_t(), format),
            ElementClass::of_matrix(ts.g(), format),
        ];
        match order {
            DotOrder::Linear => linear(ts.n(), ts.n(), ts.n_h(), classes),
            DotOrder::Huffman => huffman(ts.trees(), classes),
        }
    }
}

fn weakest(classes: [ElementClass; 3]) -> ElementClass {
    classes.into_iter().max().expect("three classes")
}

fn linear_term(len: usize, class: ElementClass) -> f64 {
    (len + class.multiplication_term()) as f64 - 1.0
}

fn linear(a_len: usize, b_len: usize, g_len: usize, classes: [ElementClass; 3]) -> SummationConstants {
    SummationConstants {
        alpha: linear_term(a_len, classes[0]),
        beta: linear_term(b_len, classes[1]),
        gamma: linear_term(g_len, classes[2]),
        method: SumMethod::Linear,
        element_class: weakest(classes),
        classes,
    }
}

fn max_depth(trees: &[EvalTree]) -> usize {
    trees.iter().map(EvalTree::depth).max().unwrap_or(0)
}

fn huffman(trees: &TransformTrees, classes: [ElementClass; 3]) -> SummationConstants {
    let term = |t: &[EvalTree], c: ElementClass| (max_depth(t) + c.multiplication_term()) as f64;
    SummationConstants {
        alpha: term(trees.a_t.trees(DotOrder::Huffman), classes[0]),
        beta: term(trees.b_t.trees(DotOrder::Huffman), classes[1]),
        gamma: term(trees.g.trees(DotOrder::Huffman), classes[2]),
        method: SumMethod::Huffman,
        element_class: weakest(classes),
        classes,
    }
}

/// Constants for dot products of length `n` (`A^T`, `B^T`) and `n_h` (`G`).
///
/// Linear summation gives `n + 1`, `n` or `n - 1` for general, exact and
/// power-of-two entries. Huffman summation uses the deepest tree of each
/// matrix plus the multiplication term, and needs the trees.
pub fn summation_constants(
    method: SumMethod,
    n: usize,
    n_h: usize,
    element_class: ElementClass,
    trees: Option<&TransformTrees>,
) -> Result<SummationConstants> {
    if n == 0 || n_h == 0 {
        return Err(Error::Size("n and n_h must be at least 1".into()));
    }
    let classes = [element_class; 3];
    match method {
        SumMethod::Linear => Ok(linear(n, n, n_h, classes)),
        SumMethod::Huffman => trees.map(|t| huffman(t, classes)).ok_or(Error::MissingTrees),
        SumMethod::Custom => Err(Error::Mismatch("custom constants are built with SummationConstants::custom".into())),
    }
}

/// Constants of a single Huffman tree: depth plus multiplication term.
pub fn tree_constant(tree: &EvalTree, class: ElementClass) -> f64 {
    (tree.depth() + class.multiplication_term()) as f64
}
