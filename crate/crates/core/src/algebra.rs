//! Sorts, signatures, exact-valued elements, and sorted sequence prefixes.
//!
//! Everything downstream (term enumeration, reductions, FR sets, theorem
//! sweeps) computes over the types in this module. Values are immutable and
//! canonically normalized so they can be hashed and deduplicated exactly.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Index of a phylum. By convention sort 0 is the scalar phylum and sort 1
/// the matrix phylum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub usize);

impl SortId {
    pub const SCALAR: SortId = SortId(0);
    pub const MATRIX: SortId = SortId(1);
}

impl fmt::Display for SortId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which part of the operation family an operation belongs to.
///
/// Scalar ring operations act on sort 0 only, matrix ring operations on
/// sort 1 only, and heterogeneous unaries map sort 1 into sort 0. The
/// partition of a signature into these three groups is what the matrix
/// theorems quantify over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    ScalarRingOp,
    MatrixRingOp,
    HeterogeneousUnary,
}

/// Concrete meaning of an operation, used by the term evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpSemantics {
    ScalarAdd,
    ScalarMul,
    MatrixAdd,
    MatrixMul,
    Det,
}

/// A sorted operation declaration: name, domain word, codomain, group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationDecl {
    pub name: String,
    pub domain: Vec<SortId>,
    pub codomain: SortId,
    pub kind: OpKind,
    pub semantics: OpSemantics,
}

impl OperationDecl {
    pub fn arity(&self) -> usize {
        self.domain.len()
    }
}

/// Index of an operation within its signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpId(pub usize);

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("operation '{op}' references undeclared sort {sort}")]
    UnknownSort { op: String, sort: SortId },
    #[error("heterogeneous operation '{op}' must be unary from sort 1 into sort 0")]
    MalformedHeterogeneousOp { op: String },
    #[error("ring operation '{op}' must stay within sort {expected}")]
    MalformedRingOp { op: String, expected: SortId },
    #[error("duplicate operation name '{0}'")]
    DuplicateOpName(String),
}

/// A validated many-sorted signature over named phyla.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<String>,
    ops: Vec<OperationDecl>,
}

impl Signature {
    /// Validates the declarations and computes the G0/G1/H partition from
    /// the operation kinds.
    pub fn new(sorts: Vec<String>, ops: Vec<OperationDecl>) -> Result<Self, SignatureError> {
        let n_sorts = sorts.len();
        let check = |op: &OperationDecl, sort: SortId| -> Result<(), SignatureError> {
            if sort.0 >= n_sorts {
                return Err(SignatureError::UnknownSort {
                    op: op.name.clone(),
                    sort,
                });
            }
            Ok(())
        };
        for (i, op) in ops.iter().enumerate() {
            for &s in &op.domain {
                check(op, s)?;
            }
            check(op, op.codomain)?;
            if ops[..i].iter().any(|prev| prev.name == op.name) {
                return Err(SignatureError::DuplicateOpName(op.name.clone()));
            }
            match op.kind {
                OpKind::HeterogeneousUnary => {
                    let ok = op.domain.len() == 1
                        && op.domain[0] == SortId::MATRIX
                        && op.codomain == SortId::SCALAR;
                    if !ok {
                        return Err(SignatureError::MalformedHeterogeneousOp {
                            op: op.name.clone(),
                        });
                    }
                }
                OpKind::ScalarRingOp => {
                    let within = op.domain.iter().all(|&s| s == SortId::SCALAR)
                        && op.codomain == SortId::SCALAR;
                    if !within {
                        return Err(SignatureError::MalformedRingOp {
                            op: op.name.clone(),
                            expected: SortId::SCALAR,
                        });
                    }
                }
                OpKind::MatrixRingOp => {
                    let within = op.domain.iter().all(|&s| s == SortId::MATRIX)
                        && op.codomain == SortId::MATRIX;
                    if !within {
                        return Err(SignatureError::MalformedRingOp {
                            op: op.name.clone(),
                            expected: SortId::MATRIX,
                        });
                    }
                }
            }
        }
        Ok(Signature { sorts, ops })
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn sort_name(&self, sort: SortId) -> Option<&str> {
        self.sorts.get(sort.0).map(String::as_str)
    }

    pub fn ops(&self) -> &[OperationDecl] {
        &self.ops
    }

    pub fn op(&self, id: OpId) -> Option<&OperationDecl> {
        self.ops.get(id.0)
    }

    pub fn op_by_name(&self, name: &str) -> Option<(OpId, &OperationDecl)> {
        self.ops
            .iter()
            .enumerate()
            .find(|(_, op)| op.name == name)
            .map(|(i, op)| (OpId(i), op))
    }

    /// Operations of the given group, in declaration order.
    pub fn ops_of_kind(&self, kind: OpKind) -> impl Iterator<Item = (OpId, &OperationDecl)> {
        self.ops
            .iter()
            .enumerate()
            .filter(move |(_, op)| op.kind == kind)
            .map(|(i, op)| (OpId(i), op))
    }

    /// The sub-signature keeping only the named operations.
    pub fn restrict(&self, names: &[&str]) -> Result<Signature, SignatureError> {
        let ops = self
            .ops
            .iter()
            .filter(|op| names.contains(&op.name.as_str()))
            .cloned()
            .collect();
        Signature::new(self.sorts.clone(), ops)
    }
}

/// An exact square matrix over the rationals. The order is part of the
/// value; arithmetic across different orders is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    order: usize,
    entries: Vec<BigRational>,
}

impl Matrix {
    /// Row-major entries; `entries.len()` must equal `order * order`.
    pub fn new(order: usize, entries: Vec<BigRational>) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        assert_eq!(entries.len(), order * order, "entry count must be order^2");
        Matrix { order, entries }
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        Matrix { order, entries }
    }

    pub fn zero(order: usize) -> Self {
        Matrix::from_fn(order, |_, _| BigRational::zero())
    }

    pub fn identity(order: usize) -> Self {
        Matrix::from_fn(order, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.order + col]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }
}

impl PartialOrd for Matrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Matrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.order {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.order {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// An exact element of one of the two phyla.
///
/// Scalars are canonically normalized rationals (the integers are the
/// denominator-one values), so structural equality and hashing coincide
/// with value equality. A 1x1 matrix is a distinct value from the scalar
/// with the same entry: the phyla are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Scalar(BigRational),
    Matrix(Matrix),
}

impl Element {
    pub fn integer(v: i64) -> Self {
        Element::Scalar(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Element::Scalar(BigRational::from_integer(v))
    }

    pub fn sort(&self) -> SortId {
        match self {
            Element::Scalar(_) => SortId::SCALAR,
            Element::Matrix(_) => SortId::MATRIX,
        }
    }

    pub fn as_scalar(&self) -> Option<&BigRational> {
        match self {
            Element::Scalar(r) => Some(r),
            Element::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&Matrix> {
        match self {
            Element::Matrix(m) => Some(m),
            Element::Scalar(_) => None,
        }
    }

    /// The scalar value as a nonnegative integer, if it is one. Residue and
    /// power colorings only accept such values.
    pub fn as_nonneg_bigint(&self) -> Option<BigInt> {
        let r = self.as_scalar()?;
        if r.is_integer() && !r.is_negative() {
            Some(r.to_integer())
        } else {
            None
        }
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Element::Scalar(a), Element::Scalar(b)) => a.cmp(b),
            (Element::Matrix(a), Element::Matrix(b)) => a.cmp(b),
            (Element::Scalar(_), Element::Matrix(_)) => Ordering::Less,
            (Element::Matrix(_), Element::Scalar(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Scalar(r) => write!(f, "{}", r),
            Element::Matrix(m) => write!(f, "{}", m),
        }
    }
}

/// Structural equality after canonical normalization; elements of
/// different phyla are never equal.
pub fn element_equal(x: &Element, y: &Element) -> bool {
    x == y
}

/// A finite sort word: the sort of each position plus, for each sort that
/// appears, whether it is scheduled to recur unboundedly in extensions.
/// An Omega-style word flags every sort that appears.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortWord {
    pub prefix: Vec<SortId>,
    pub recurring: Vec<SortId>,
}

impl SortWord {
    /// A word in which every appearing sort is flagged as recurring.
    pub fn omega(prefix: Vec<SortId>) -> Self {
        let mut recurring: Vec<SortId> = prefix.clone();
        recurring.sort();
        recurring.dedup();
        SortWord { prefix, recurring }
    }

    /// Constant word over a single sort.
    pub fn constant(sort: SortId, len: usize) -> Self {
        SortWord {
            prefix: vec![sort; len],
            recurring: vec![sort],
        }
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn first(&self) -> Option<SortId> {
        self.prefix.first().copied()
    }

    /// The first `len` positions, with the same recurrence flags.
    pub fn truncate(&self, len: usize) -> SortWord {
        SortWord {
            prefix: self.prefix[..len.min(self.prefix.len())].to_vec(),
            recurring: self.recurring.clone(),
        }
    }
}

/// A finite e-sorted sequence fragment: elements paired with a sort word
/// of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedPrefix {
    pub items: Vec<Element>,
    pub word: SortWord,
}

impl SortedPrefix {
    pub fn new(items: Vec<Element>, word: SortWord) -> Self {
        SortedPrefix { items, word }
    }

    /// A scalar-only prefix with a constant sort word.
    pub fn scalars(values: Vec<Element>) -> Self {
        let word = SortWord::constant(SortId::SCALAR, values.len());
        SortedPrefix { items: values, word }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The subsequence at the given (strictly increasing) indices, with the
    /// induced sort word.
    pub fn select(&self, indices: &[usize]) -> SortedPrefix {
        let items = indices.iter().map(|&i| self.items[i].clone()).collect();
        let prefix = indices.iter().map(|&i| self.word.prefix[i]).collect();
        SortedPrefix {
            items,
            word: SortWord {
                prefix,
                recurring: self.word.recurring.clone(),
            },
        }
    }
}

/// True iff every item's phylum matches the sort word at its position.
/// A length mismatch is simply not e-sorted.
pub fn is_e_sorted(seq: &SortedPrefix) -> bool {
    seq.items.len() == seq.word.prefix.len()
        && seq
            .items
            .iter()
            .zip(&seq.word.prefix)
            .all(|(item, &sort)| item.sort() == sort)
}
