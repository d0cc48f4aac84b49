//! Orderly terms over a signature: representation, validation, bounded
//! enumeration, and exact evaluation.
//!
//! An orderly term is a composition whose leaves, read left to right, are
//! exactly the variables `x1, ..., xn` in order. The enumerator produces
//! every sort-correct orderly term within an (arity, depth) bound, which is
//! the finite stand-in for the full hierarchy of iterated compositions.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{Element, OpId, Signature, SortId};
use crate::matrices::{apply_op, MatrixError};

/// Guard against runaway enumeration; generous for desk-scale bounds.
pub const DEFAULT_TERM_CAP: usize = 200_000;

/// A term tree. Leaves carry their 1-based variable position and sort;
/// interior nodes apply a signature operation to ordered children.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var { position: usize, sort: SortId },
    Apply { op: OpId, children: Vec<Term> },
}

impl Term {
    pub fn var(position: usize, sort: SortId) -> Self {
        Term::Var { position, sort }
    }

    pub fn apply(op: OpId, children: Vec<Term>) -> Self {
        Term::Apply { op, children }
    }

    /// The identity term on the given sort.
    pub fn identity(sort: SortId) -> Self {
        Term::var(1, sort)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var { .. } => 0,
            Term::Apply { children, .. } => {
                1 + children.iter().map(Term::depth).max().unwrap_or(0)
            }
        }
    }

    fn leaves<'a>(&'a self, out: &mut Vec<(&'a usize, SortId)>) {
        match self {
            Term::Var { position, sort } => out.push((position, *sort)),
            Term::Apply { children, .. } => {
                for c in children {
                    c.leaves(out);
                }
            }
        }
    }

    /// Renders the parenthesized text form, e.g. `mul(add(x1,x2),x3)`.
    pub fn render(&self, sig: &Signature) -> String {
        let mut s = String::new();
        self.render_into(sig, &mut s);
        s
    }

    fn render_into(&self, sig: &Signature, out: &mut String) {
        match self {
            Term::Var { position, .. } => {
                let _ = write!(out, "x{position}");
            }
            Term::Apply { op, children } => {
                let name = sig.op(*op).map(|o| o.name.as_str()).unwrap_or("?");
                out.push_str(name);
                out.push('(');
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.render_into(sig, out);
                }
                out.push(')');
            }
        }
    }

    fn shift_positions(&mut self, offset: usize) {
        match self {
            Term::Var { position, .. } => *position += offset,
            Term::Apply { children, .. } => {
                for c in children {
                    c.shift_positions(offset);
                }
            }
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("term references operation #{0} not present in the signature")]
    UnknownOp(usize),
    #[error("term is not orderly")]
    NotOrderly,
    #[error("argument {index} has sort {got}, expected {expected}")]
    SortMismatch {
        index: usize,
        got: SortId,
        expected: SortId,
    },
    #[error("term has arity {expected}, got {got} arguments")]
    ArityMismatch { expected: usize, got: usize },
    #[error("matrix orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("enumeration exceeded the cap of {cap} terms")]
    BoundsTooLarge { cap: usize },
    #[error("cannot parse term '{text}': {reason}")]
    ParseError { text: String, reason: String },
}

/// Arity, depth, codomain, and per-leaf sorts of an orderly term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermProfile {
    pub arity: usize,
    pub depth: usize,
    pub codomain: SortId,
    pub domain_word: Vec<SortId>,
}

/// True iff the leaf sequence reads exactly `x1..xn` and every application
/// is sort-correct.
pub fn is_orderly(tree: &Term, sig: &Signature) -> Result<bool, TermError> {
    if codomain_checked(tree, sig)?.is_none() {
        return Ok(false);
    }
    let mut leaves = Vec::new();
    tree.leaves(&mut leaves);
    Ok(leaves
        .iter()
        .enumerate()
        .all(|(i, (pos, _))| **pos == i + 1))
}

/// The term's codomain if all applications are sort-correct, else None.
/// Unresolvable op references are an error.
fn codomain_checked(tree: &Term, sig: &Signature) -> Result<Option<SortId>, TermError> {
    match tree {
        Term::Var { sort, .. } => Ok(Some(*sort)),
        Term::Apply { op, children } => {
            let decl = sig.op(*op).ok_or(TermError::UnknownOp(op.0))?;
            if decl.arity() != children.len() {
                return Ok(None);
            }
            for (child, &expected) in children.iter().zip(&decl.domain) {
                match codomain_checked(child, sig)? {
                    Some(s) if s == expected => {}
                    _ => return Ok(None),
                }
            }
            Ok(Some(decl.codomain))
        }
    }
}

/// Computes the profile of an orderly, sort-correct term.
pub fn term_profile(t: &Term, sig: &Signature) -> Result<TermProfile, TermError> {
    let codomain = codomain_checked(t, sig)?.ok_or(TermError::NotOrderly)?;
    let mut leaves = Vec::new();
    t.leaves(&mut leaves);
    if !leaves.iter().enumerate().all(|(i, (pos, _))| **pos == i + 1) {
        return Err(TermError::NotOrderly);
    }
    Ok(TermProfile {
        arity: leaves.len(),
        depth: t.depth(),
        codomain,
        domain_word: leaves.into_iter().map(|(_, s)| s).collect(),
    })
}

/// Exact evaluation of an orderly term on sort-matching arguments.
pub fn evaluate(t: &Term, sig: &Signature, args: &[Element]) -> Result<Element, TermError> {
    let profile = term_profile(t, sig)?;
    if profile.arity != args.len() {
        return Err(TermError::ArityMismatch {
            expected: profile.arity,
            got: args.len(),
        });
    }
    for (i, (arg, &expected)) in args.iter().zip(&profile.domain_word).enumerate() {
        if arg.sort() != expected {
            return Err(TermError::SortMismatch {
                index: i,
                got: arg.sort(),
                expected,
            });
        }
    }
    eval_node(t, sig, args)
}

fn eval_node(t: &Term, sig: &Signature, args: &[Element]) -> Result<Element, TermError> {
    match t {
        Term::Var { position, .. } => Ok(args[*position - 1].clone()),
        Term::Apply { op, children } => {
            let decl = sig.op(*op).ok_or(TermError::UnknownOp(op.0))?;
            let values: Vec<Element> = children
                .iter()
                .map(|c| eval_node(c, sig, args))
                .collect::<Result<_, _>>()?;
            apply_op(decl.semantics, &values).map_err(|e| match e {
                MatrixError::OrderMismatch(a, b) => TermError::OrderMismatch(a, b),
                MatrixError::PhylumMismatch { .. } => TermError::SortMismatch {
                    index: 0,
                    got: SortId::SCALAR,
                    expected: SortId::MATRIX,
                },
                MatrixError::BadArgCount { expected, got, .. } => {
                    TermError::ArityMismatch { expected, got }
                }
                MatrixError::IndexCapExceeded { .. } => TermError::NotOrderly,
            })
        }
    }
}

/// Enumerates every orderly term with the given codomain, arity between 1
/// and `max_arity`, and depth at most `max_depth`, in deterministic order:
/// arity, then depth, then lexicographically on the rendered structure.
/// Includes the identity term of the codomain sort.
pub fn enumerate_orderly_terms(
    sig: &Signature,
    codomain: SortId,
    max_arity: usize,
    max_depth: usize,
) -> Result<Vec<Term>, TermError> {
    enumerate_orderly_terms_capped(sig, codomain, max_arity, max_depth, DEFAULT_TERM_CAP)
}

pub fn enumerate_orderly_terms_capped(
    sig: &Signature,
    codomain: SortId,
    max_arity: usize,
    max_depth: usize,
    cap: usize,
) -> Result<Vec<Term>, TermError> {
    let mut enumerator = Enumerator {
        sig,
        cap,
        produced: 0,
        memo: HashMap::new(),
    };
    let mut all = Vec::new();
    for arity in 1..=max_arity {
        let mut batch = enumerator.terms(codomain, arity, max_depth)?;
        batch.sort_by_cached_key(|t| (t.depth(), t.render(sig)));
        all.extend(batch);
    }
    Ok(all)
}

struct Enumerator<'a> {
    sig: &'a Signature,
    cap: usize,
    produced: usize,
    memo: HashMap<(usize, usize, usize), Vec<Term>>,
}

impl Enumerator<'_> {
    /// All orderly terms with the exact arity, codomain sort, and depth
    /// budget, with leaf positions local to the subterm (1-based).
    fn terms(
        &mut self,
        sort: SortId,
        arity: usize,
        depth: usize,
    ) -> Result<Vec<Term>, TermError> {
        let key = (sort.0, arity, depth);
        if let Some(cached) = self.memo.get(&key) {
            return Ok(cached.clone());
        }
        let mut out = Vec::new();
        if arity == 1 {
            out.push(Term::var(1, sort));
        }
        if depth > 0 {
            let candidate_ops: Vec<OpId> = self
                .sig
                .ops()
                .iter()
                .enumerate()
                .filter(|(_, op)| op.codomain == sort && op.arity() <= arity)
                .map(|(i, _)| OpId(i))
                .collect();
            for op_id in candidate_ops {
                let decl = self.sig.op(op_id).expect("op id from this signature").clone();
                let slots = decl.arity();
                for split in compositions(arity, slots) {
                    let mut children_choices: Vec<Vec<Term>> = Vec::with_capacity(slots);
                    for (slot, &part) in split.iter().enumerate() {
                        children_choices.push(self.terms(decl.domain[slot], part, depth - 1)?);
                    }
                    if children_choices.iter().any(Vec::is_empty) {
                        continue;
                    }
                    let mut index = vec![0usize; slots];
                    loop {
                        let mut children = Vec::with_capacity(slots);
                        let mut offset = 0usize;
                        for (slot, &part) in split.iter().enumerate() {
                            let mut child = children_choices[slot][index[slot]].clone();
                            child.shift_positions(offset);
                            children.push(child);
                            offset += part;
                        }
                        out.push(Term::apply(op_id, children));
                        self.produced += 1;
                        if self.produced > self.cap {
                            return Err(TermError::BoundsTooLarge { cap: self.cap });
                        }
                        // Advance the mixed-radix index over child choices.
                        let mut slot = slots;
                        loop {
                            if slot == 0 {
                                break;
                            }
                            slot -= 1;
                            index[slot] += 1;
                            if index[slot] < children_choices[slot].len() {
                                break;
                            }
                            index[slot] = 0;
                            if slot == 0 {
                                slot = usize::MAX;
                                break;
                            }
                        }
                        if slot == usize::MAX {
                            break;
                        }
                    }
                }
            }
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

/// Ordered compositions of `total` into exactly `parts` positive summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if parts == 0 {
        return out;
    }
    let mut cur = Vec::with_capacity(parts);
    fn rec(total: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            if total >= 1 {
                cur.push(total);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for first in 1..=total.saturating_sub(parts - 1) {
            cur.push(first);
            rec(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    rec(total, parts, &mut cur, &mut out);
    out
}

/// Parses the parenthesized text form against a signature, inferring leaf
/// sorts from the expected codomain and operation domains.
pub fn parse_term(text: &str, sig: &Signature, expected: SortId) -> Result<Term, TermError> {
    let mut parser = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let term = parser.term(sig, expected)?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(term)
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> TermError {
        TermError::ParseError {
            text: self.text.to_string(),
            reason: format!("{reason} at byte {}", self.pos),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        self.text[start..self.pos].to_string()
    }

    fn term(&mut self, sig: &Signature, expected: SortId) -> Result<Term, TermError> {
        self.skip_ws();
        let name = self.ident();
        if name.is_empty() {
            return Err(self.error("expected an identifier"));
        }
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'(' {
            let (op_id, decl) = sig
                .op_by_name(&name)
                .ok_or_else(|| self.error(&format!("unknown operation '{name}'")))?;
            if decl.codomain != expected {
                return Err(TermError::SortMismatch {
                    index: 0,
                    got: decl.codomain,
                    expected,
                });
            }
            let domain = decl.domain.clone();
            self.pos += 1;
            let mut children = Vec::with_capacity(domain.len());
            for (i, &child_sort) in domain.iter().enumerate() {
                if i > 0 {
                    self.skip_ws();
                    if self.pos >= self.bytes.len() || self.bytes[self.pos] != b',' {
                        return Err(self.error("expected ','"));
                    }
                    self.pos += 1;
                }
                children.push(self.term(sig, child_sort)?);
            }
            self.skip_ws();
            if self.pos >= self.bytes.len() || self.bytes[self.pos] != b')' {
                return Err(self.error("expected ')'"));
            }
            self.pos += 1;
            Ok(Term::apply(op_id, children))
        } else if let Some(num) = name.strip_prefix('x') {
            let position: usize = num
                .parse()
                .map_err(|_| self.error(&format!("bad variable '{name}'")))?;
            if position == 0 {
                return Err(self.error("variable positions are 1-based"));
            }
            Ok(Term::var(position, expected))
        } else {
            Err(self.error(&format!("unknown operation '{name}'")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{d_matrix, MatrixAlgebraConfig, MatrixAlgebraOp};

    fn one_binary_op() -> Signature {
        crate::matrices::scalar_signature(true, false)
    }

    fn matrix_sig(ops: &[MatrixAlgebraOp]) -> Signature {
        MatrixAlgebraConfig::reduct(2, ops).signature()
    }

    fn op(sig: &Signature, name: &str) -> OpId {
        sig.op_by_name(name).unwrap().0
    }

    #[test]
    fn orderliness_of_classic_compositions() {
        let sig = matrix_sig(&[MatrixAlgebraOp::MatrixAdd, MatrixAlgebraOp::MatrixMul]);
        let add = op(&sig, "add");
        let mul = op(&sig, "mul");
        let m = SortId::MATRIX;

        // (x1+x2)(x3+x4)
        let good = Term::apply(
            mul,
            vec![
                Term::apply(add, vec![Term::var(1, m), Term::var(2, m)]),
                Term::apply(add, vec![Term::var(3, m), Term::var(4, m)]),
            ],
        );
        assert!(is_orderly(&good, &sig).unwrap());

        // (x1*x2 + x3)*x4
        let good2 = Term::apply(
            mul,
            vec![
                Term::apply(
                    add,
                    vec![
                        Term::apply(mul, vec![Term::var(1, m), Term::var(2, m)]),
                        Term::var(3, m),
                    ],
                ),
                Term::var(4, m),
            ],
        );
        assert!(is_orderly(&good2, &sig).unwrap());

        // x2 + x1*x3 is out of order.
        let bad = Term::apply(
            add,
            vec![
                Term::var(2, m),
                Term::apply(mul, vec![Term::var(1, m), Term::var(3, m)]),
            ],
        );
        assert!(!is_orderly(&bad, &sig).unwrap());

        // (x3*(x2+x1))*x4 is out of order.
        let bad2 = Term::apply(
            mul,
            vec![
                Term::apply(
                    mul,
                    vec![
                        Term::var(3, m),
                        Term::apply(add, vec![Term::var(2, m), Term::var(1, m)]),
                    ],
                ),
                Term::var(4, m),
            ],
        );
        assert!(!is_orderly(&bad2, &sig).unwrap());

        assert!(is_orderly(&Term::identity(m), &sig).unwrap());
    }

    #[test]
    fn orderliness_requires_sort_correctness() {
        let sig = matrix_sig(&[MatrixAlgebraOp::Det]);
        let det = op(&sig, "det");
        let scalar_under_det = Term::apply(det, vec![Term::var(1, SortId::SCALAR)]);
        assert!(!is_orderly(&scalar_under_det, &sig).unwrap());
        let ok = Term::apply(det, vec![Term::var(1, SortId::MATRIX)]);
        assert!(is_orderly(&ok, &sig).unwrap());
    }

    #[test]
    fn unknown_op_is_an_error() {
        let sig = one_binary_op();
        let tree = Term::apply(OpId(7), vec![Term::var(1, SortId::SCALAR)]);
        assert_eq!(is_orderly(&tree, &sig).unwrap_err(), TermError::UnknownOp(7));
    }

    #[test]
    fn enumeration_counts_over_one_binary_op() {
        let sig = one_binary_op();
        let all = enumerate_orderly_terms(&sig, SortId::SCALAR, 5, 8).unwrap();
        let count = |arity: usize| {
            all.iter()
                .filter(|t| term_profile(t, &sig).unwrap().arity == arity)
                .count()
        };
        assert_eq!(count(1), 1);
        assert_eq!(count(2), 1);
        assert_eq!(count(3), 2);
        assert_eq!(count(4), 5);
        assert_eq!(count(5), 14);
    }

    #[test]
    fn enumeration_is_deterministic_and_deduplicated() {
        let sig = matrix_sig(&[
            MatrixAlgebraOp::MatrixAdd,
            MatrixAlgebraOp::MatrixMul,
            MatrixAlgebraOp::Det,
        ]);
        let a = enumerate_orderly_terms(&sig, SortId::SCALAR, 4, 3).unwrap();
        let b = enumerate_orderly_terms(&sig, SortId::SCALAR, 4, 3).unwrap();
        assert_eq!(a, b);
        let mut rendered: Vec<String> = a.iter().map(|t| t.render(&sig)).collect();
        let before = rendered.len();
        rendered.sort();
        rendered.dedup();
        assert_eq!(rendered.len(), before);
    }

    #[test]
    fn unary_family_reaches_only_single_heterogeneous_step() {
        let sig = matrix_sig(&[MatrixAlgebraOp::Det]);
        let scalars = enumerate_orderly_terms(&sig, SortId::SCALAR, 4, 4).unwrap();
        let rendered: Vec<String> = scalars.iter().map(|t| t.render(&sig)).collect();
        assert_eq!(rendered, vec!["x1".to_string(), "det(x1)".to_string()]);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let sig = matrix_sig(&[MatrixAlgebraOp::MatrixAdd, MatrixAlgebraOp::MatrixMul]);
        let err = enumerate_orderly_terms_capped(&sig, SortId::MATRIX, 6, 6, 10).unwrap_err();
        assert_eq!(err, TermError::BoundsTooLarge { cap: 10 });
    }

    #[test]
    fn evaluation_examples() {
        let sig = one_binary_op();
        let seven = Element::integer(7);
        assert_eq!(
            evaluate(&Term::identity(SortId::SCALAR), &sig, std::slice::from_ref(&seven)).unwrap(),
            seven
        );

        let msig = matrix_sig(&[MatrixAlgebraOp::MatrixAdd, MatrixAlgebraOp::MatrixMul]);
        let add = op(&msig, "add");
        let mul = op(&msig, "mul");
        // Scalar arithmetic of the same shape: (1+2)(3+4) over the scalar
        // signature with both ring operations.
        let ssig = crate::matrices::scalar_signature(true, true);
        let sadd = op(&ssig, "add");
        let smul = op(&ssig, "mul");
        let s = SortId::SCALAR;
        let t = Term::apply(
            smul,
            vec![
                Term::apply(sadd, vec![Term::var(1, s), Term::var(2, s)]),
                Term::apply(sadd, vec![Term::var(3, s), Term::var(4, s)]),
            ],
        );
        let args: Vec<Element> = (1..=4).map(Element::integer).collect();
        assert_eq!(evaluate(&t, &ssig, &args).unwrap(), Element::integer(21));

        let dsig = matrix_sig(&[MatrixAlgebraOp::Det]);
        let det = op(&dsig, "det");
        let dterm = Term::apply(det, vec![Term::var(1, SortId::MATRIX)]);
        let d1 = Element::Matrix(d_matrix(1, 2, 6).unwrap());
        assert_eq!(evaluate(&dterm, &dsig, &[d1]).unwrap(), Element::integer(16));

        // Matrix terms reject order mismatches.
        let mterm = Term::apply(
            add,
            vec![Term::var(1, SortId::MATRIX), Term::var(2, SortId::MATRIX)],
        );
        let two = Element::Matrix(crate::algebra::Matrix::identity(2));
        let three = Element::Matrix(crate::algebra::Matrix::identity(3));
        assert_eq!(
            evaluate(&mterm, &msig, &[two.clone(), three]).unwrap_err(),
            TermError::OrderMismatch(2, 3)
        );
        assert!(matches!(
            evaluate(&mterm, &msig, std::slice::from_ref(&two)).unwrap_err(),
            TermError::ArityMismatch { .. }
        ));
        assert!(matches!(
            evaluate(&mterm, &msig, &[two, Element::integer(1)]).unwrap_err(),
            TermError::SortMismatch { .. }
        ));
        let _ = mul;
    }

    #[test]
    fn profiles() {
        let sig = matrix_sig(&[
            MatrixAlgebraOp::MatrixAdd,
            MatrixAlgebraOp::MatrixMul,
            MatrixAlgebraOp::Det,
        ]);
        let add = op(&sig, "add");
        let mul = op(&sig, "mul");
        let det = op(&sig, "det");
        let m = SortId::MATRIX;

        let leaf = Term::identity(SortId::SCALAR);
        let p = term_profile(&leaf, &sig).unwrap();
        assert_eq!((p.arity, p.depth), (1, 0));

        let t = Term::apply(
            mul,
            vec![
                Term::apply(add, vec![Term::var(1, m), Term::var(2, m)]),
                Term::var(3, m),
            ],
        );
        let p = term_profile(&t, &sig).unwrap();
        assert_eq!((p.arity, p.depth), (3, 2));

        let dt = Term::apply(
            det,
            vec![Term::apply(mul, vec![Term::var(1, m), Term::var(2, m)])],
        );
        let p = term_profile(&dt, &sig).unwrap();
        assert_eq!(p.codomain, SortId::SCALAR);
        assert_eq!(p.domain_word, vec![m, m]);
    }

    #[test]
    fn matrix_codomain_terms_use_only_matrix_variables() {
        let sig = MatrixAlgebraConfig::full(2).signature();
        let terms = enumerate_orderly_terms(&sig, SortId::MATRIX, 4, 3).unwrap();
        assert!(!terms.is_empty());
        for t in &terms {
            let p = term_profile(t, &sig).unwrap();
            assert!(p.domain_word.iter().all(|&s| s == SortId::MATRIX));
        }
    }

    #[test]
    fn render_and_parse_round_trip() {
        let sig = MatrixAlgebraConfig::full(2).signature();
        for sort in [SortId::SCALAR, SortId::MATRIX] {
            for t in enumerate_orderly_terms(&sig, sort, 4, 3).unwrap() {
                let text = t.render(&sig);
                let back = parse_term(&text, &sig, sort).unwrap();
                assert_eq!(back, t, "round trip of {text}");
            }
        }
        assert!(parse_term("det(x1", &sig, SortId::SCALAR).is_err());
        assert!(parse_term("frob(x1)", &sig, SortId::SCALAR).is_err());
        assert!(parse_term("det(x1)x", &sig, SortId::SCALAR).is_err());
    }
}
