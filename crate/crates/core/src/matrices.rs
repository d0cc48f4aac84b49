//! Concrete matrix algebras over exact rationals: ring operations, the
//! determinant, the diagonal witness generators, and the decidable
//! colorings used by the theorem sweeps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{
    Element, Matrix, OpKind, OpSemantics, OperationDecl, Signature, SortId,
};

/// Default cap on the index of a double-exponential generator; `D_6` has
/// entries of 65 bits, which keeps every sweep comfortably fast.
pub const DEFAULT_D_INDEX_CAP: u32 = 6;

/// Default cap on the index of a `5i+1` generator.
pub const DEFAULT_G_INDEX_CAP: u32 = 12;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("generator index {index} exceeds cap {cap}")]
    IndexCapExceeded { index: u32, cap: u32 },
    #[error("operation '{op}' applied to elements of the wrong phylum")]
    PhylumMismatch { op: &'static str },
    #[error("operation '{op}' expects {expected} arguments, got {got}")]
    BadArgCount {
        op: &'static str,
        expected: usize,
        got: usize,
    },
}

pub fn matrix_add(a: &Matrix, b: &Matrix) -> Result<Matrix, MatrixError> {
    if a.order() != b.order() {
        return Err(MatrixError::OrderMismatch(a.order(), b.order()));
    }
    Ok(Matrix::from_fn(a.order(), |i, j| a.entry(i, j) + b.entry(i, j)))
}

pub fn matrix_mul(a: &Matrix, b: &Matrix) -> Result<Matrix, MatrixError> {
    if a.order() != b.order() {
        return Err(MatrixError::OrderMismatch(a.order(), b.order()));
    }
    let n = a.order();
    Ok(Matrix::from_fn(n, |i, j| {
        let mut acc = BigRational::zero();
        for k in 0..n {
            acc += a.entry(i, k) * b.entry(k, j);
        }
        acc
    }))
}

pub fn scalar_add(a: &BigRational, b: &BigRational) -> BigRational {
    a + b
}

pub fn scalar_mul(a: &BigRational, b: &BigRational) -> BigRational {
    a * b
}

/// Exact determinant by fraction-free (Bareiss) elimination with exact
/// divisions and row-swap sign tracking.
pub fn det(a: &Matrix) -> BigRational {
    let n = a.order();
    if n == 1 {
        return a.entry(0, 0).clone();
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| a.entry(i, j).clone()).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = BigRational::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigRational::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Reference determinant by first-row cofactor expansion. Exponential in
/// the order; kept as an independent oracle for the elimination path.
pub fn det_cofactor(a: &Matrix) -> BigRational {
    let n = a.order();
    if n == 1 {
        return a.entry(0, 0).clone();
    }
    let mut acc = BigRational::zero();
    for col in 0..n {
        if a.entry(0, col).is_zero() {
            continue;
        }
        let minor = Matrix::from_fn(n - 1, |i, j| {
            let jj = if j < col { j } else { j + 1 };
            a.entry(i + 1, jj).clone()
        });
        let term = a.entry(0, col) * det_cofactor(&minor);
        if col % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// The scalar matrix `diag(r, ..., r)` of the given order: the embedding of
/// the field into the matrix ring.
pub fn diag_embed(r: &BigRational, order: usize) -> Matrix {
    Matrix::from_fn(order, |i, j| {
        if i == j {
            r.clone()
        } else {
            BigRational::zero()
        }
    })
}

/// The diagonal matrix with `5i+1` in the upper-left corner and 1 on the
/// rest of the diagonal. Its determinant is `5i+1 ≡ 1 (mod 5)`.
pub fn g_matrix(i: u32, order: usize) -> Matrix {
    Matrix::from_fn(order, |r, c| {
        if r != c {
            BigRational::zero()
        } else if r == 0 {
            BigRational::from_integer(BigInt::from(5u64 * u64::from(i) + 1))
        } else {
            BigRational::one()
        }
    })
}

/// The scalar matrix `diag(2^(2^i), ..., 2^(2^i))`. The entry has `2^i + 1`
/// bits, so the index is capped.
pub fn d_matrix(i: u32, order: usize, index_cap: u32) -> Result<Matrix, MatrixError> {
    if i > index_cap {
        return Err(MatrixError::IndexCapExceeded {
            index: i,
            cap: index_cap,
        });
    }
    let entry = BigRational::from_integer(double_exp_power(i));
    Ok(diag_embed(&entry, order))
}

/// `2^(2^i)` as an exact integer.
pub fn double_exp_power(i: u32) -> BigInt {
    BigInt::one() << (1u64 << i)
}

/// Applies one concrete operation to exact elements.
pub fn apply_op(sem: OpSemantics, args: &[Element]) -> Result<Element, MatrixError> {
    let expect = |op: &'static str, n: usize| -> Result<(), MatrixError> {
        if args.len() != n {
            Err(MatrixError::BadArgCount {
                op,
                expected: n,
                got: args.len(),
            })
        } else {
            Ok(())
        }
    };
    match sem {
        OpSemantics::ScalarAdd => {
            expect("scalar add", 2)?;
            match (&args[0], &args[1]) {
                (Element::Scalar(a), Element::Scalar(b)) => Ok(Element::Scalar(scalar_add(a, b))),
                _ => Err(MatrixError::PhylumMismatch { op: "scalar add" }),
            }
        }
        OpSemantics::ScalarMul => {
            expect("scalar mul", 2)?;
            match (&args[0], &args[1]) {
                (Element::Scalar(a), Element::Scalar(b)) => Ok(Element::Scalar(scalar_mul(a, b))),
                _ => Err(MatrixError::PhylumMismatch { op: "scalar mul" }),
            }
        }
        OpSemantics::MatrixAdd => {
            expect("matrix add", 2)?;
            match (&args[0], &args[1]) {
                (Element::Matrix(a), Element::Matrix(b)) => {
                    Ok(Element::Matrix(matrix_add(a, b)?))
                }
                _ => Err(MatrixError::PhylumMismatch { op: "matrix add" }),
            }
        }
        OpSemantics::MatrixMul => {
            expect("matrix mul", 2)?;
            match (&args[0], &args[1]) {
                (Element::Matrix(a), Element::Matrix(b)) => {
                    Ok(Element::Matrix(matrix_mul(a, b)?))
                }
                _ => Err(MatrixError::PhylumMismatch { op: "matrix mul" }),
            }
        }
        OpSemantics::Det => {
            expect("det", 1)?;
            match &args[0] {
                Element::Matrix(a) => Ok(Element::Scalar(det(a))),
                Element::Scalar(_) => Err(MatrixError::PhylumMismatch { op: "det" }),
            }
        }
    }
}

/// One of the five operations a matrix algebra reduct may keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatrixAlgebraOp {
    MatrixAdd,
    MatrixMul,
    ScalarAdd,
    ScalarMul,
    Det,
}

impl MatrixAlgebraOp {
    pub const ALL: [MatrixAlgebraOp; 5] = [
        MatrixAlgebraOp::MatrixAdd,
        MatrixAlgebraOp::MatrixMul,
        MatrixAlgebraOp::ScalarAdd,
        MatrixAlgebraOp::ScalarMul,
        MatrixAlgebraOp::Det,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixAlgebraOp::MatrixAdd => "add",
            MatrixAlgebraOp::MatrixMul => "mul",
            MatrixAlgebraOp::ScalarAdd => "addf",
            MatrixAlgebraOp::ScalarMul => "mulf",
            MatrixAlgebraOp::Det => "det",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        MatrixAlgebraOp::ALL.into_iter().find(|op| op.name() == name)
    }

    fn decl(self) -> OperationDecl {
        match self {
            MatrixAlgebraOp::MatrixAdd => OperationDecl {
                name: "add".into(),
                domain: vec![SortId::MATRIX, SortId::MATRIX],
                codomain: SortId::MATRIX,
                kind: OpKind::MatrixRingOp,
                semantics: OpSemantics::MatrixAdd,
            },
            MatrixAlgebraOp::MatrixMul => OperationDecl {
                name: "mul".into(),
                domain: vec![SortId::MATRIX, SortId::MATRIX],
                codomain: SortId::MATRIX,
                kind: OpKind::MatrixRingOp,
                semantics: OpSemantics::MatrixMul,
            },
            MatrixAlgebraOp::ScalarAdd => OperationDecl {
                name: "addf".into(),
                domain: vec![SortId::SCALAR, SortId::SCALAR],
                codomain: SortId::SCALAR,
                kind: OpKind::ScalarRingOp,
                semantics: OpSemantics::ScalarAdd,
            },
            MatrixAlgebraOp::ScalarMul => OperationDecl {
                name: "mulf".into(),
                domain: vec![SortId::SCALAR, SortId::SCALAR],
                codomain: SortId::SCALAR,
                kind: OpKind::ScalarRingOp,
                semantics: OpSemantics::ScalarMul,
            },
            MatrixAlgebraOp::Det => OperationDecl {
                name: "det".into(),
                domain: vec![SortId::MATRIX],
                codomain: SortId::SCALAR,
                kind: OpKind::HeterogeneousUnary,
                semantics: OpSemantics::Det,
            },
        }
    }
}

/// A reduct of the full matrix algebra: the order and the kept operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixAlgebraConfig {
    pub order: usize,
    pub included_ops: Vec<MatrixAlgebraOp>,
}

impl MatrixAlgebraConfig {
    pub fn full(order: usize) -> Self {
        MatrixAlgebraConfig {
            order,
            included_ops: MatrixAlgebraOp::ALL.to_vec(),
        }
    }

    pub fn reduct(order: usize, ops: &[MatrixAlgebraOp]) -> Self {
        let mut included_ops = ops.to_vec();
        included_ops.sort();
        included_ops.dedup();
        MatrixAlgebraConfig { order, included_ops }
    }

    pub fn signature(&self) -> Signature {
        let ops = self.included_ops.iter().map(|op| op.decl()).collect();
        Signature::new(vec!["scalar".into(), "matrix".into()], ops)
            .expect("matrix algebra reducts are always well-formed")
    }
}

/// The homogeneous algebra of exact scalars with the chosen ring
/// operations, named plainly `add` / `mul`.
pub fn scalar_signature(with_add: bool, with_mul: bool) -> Signature {
    let mut ops = Vec::new();
    if with_add {
        ops.push(OperationDecl {
            name: "add".into(),
            domain: vec![SortId::SCALAR, SortId::SCALAR],
            codomain: SortId::SCALAR,
            kind: OpKind::ScalarRingOp,
            semantics: OpSemantics::ScalarAdd,
        });
    }
    if with_mul {
        ops.push(OperationDecl {
            name: "mul".into(),
            domain: vec![SortId::SCALAR, SortId::SCALAR],
            codomain: SortId::SCALAR,
            kind: OpKind::ScalarRingOp,
            semantics: OpSemantics::ScalarMul,
        });
    }
    Signature::new(vec!["scalar".into()], ops).expect("scalar signatures are well-formed")
}

/// Exact integer n-th root by binary search; `None` when the value has no
/// integer root. No floating point is involved.
pub fn nth_root(value: &BigInt, n: u32) -> Option<BigInt> {
    assert!(n >= 1, "root degree must be positive");
    if value.is_negative() {
        return None;
    }
    if value.is_zero() || value.is_one() || n == 1 {
        return if value.is_negative() { None } else { Some(value.clone()) };
    }
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while hi.pow(n) < *value {
        lo = hi.clone();
        hi <<= 1;
    }
    while lo <= hi {
        let mid: BigInt = (&lo + &hi) >> 1;
        let p = mid.pow(n);
        if p == *value {
            return Some(mid);
        } else if p < *value {
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    None
}

/// Membership in Y: a positive integer every one of whose binary-expansion
/// exponents is itself a power of two, i.e. a sum of distinct `2^(2^i)`.
pub fn in_double_exp_sum_set(value: &BigInt) -> bool {
    if !value.is_positive() {
        return false;
    }
    let (_, bytes) = value.to_bytes_le();
    let mut any = false;
    for (byte_idx, byte) in bytes.iter().enumerate() {
        for bit in 0..8 {
            if byte & (1 << bit) != 0 {
                let pos = byte_idx as u64 * 8 + bit as u64;
                if !pos.is_power_of_two() {
                    return false;
                }
                any = true;
            }
        }
    }
    any
}

/// A decidable membership predicate over the scalar phylum.
#[derive(Debug, Clone)]
pub enum Coloring {
    /// Nonnegative integers congruent to `residue` mod `modulus`; every
    /// other scalar is outside the class.
    ResidueClass { modulus: u64, residue: u64 },
    /// The set Y of sums of distinct double-exponential powers of two.
    DoubleExpBinary,
    /// X = { k^n : k in Y }, decided by exact integer root extraction.
    NthPowerOfY { exponent: u32 },
    /// An externally supplied decidable test on scalars.
    PredicateOnScalars {
        name: &'static str,
        test: fn(&BigRational) -> bool,
    },
}

// Supplied predicates are compared by name; function addresses are not
// stable identities.
impl PartialEq for Coloring {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                Coloring::ResidueClass {
                    modulus: m1,
                    residue: r1,
                },
                Coloring::ResidueClass {
                    modulus: m2,
                    residue: r2,
                },
            ) => m1 == m2 && r1 == r2,
            (Coloring::DoubleExpBinary, Coloring::DoubleExpBinary) => true,
            (
                Coloring::NthPowerOfY { exponent: e1 },
                Coloring::NthPowerOfY { exponent: e2 },
            ) => e1 == e2,
            (
                Coloring::PredicateOnScalars { name: n1, .. },
                Coloring::PredicateOnScalars { name: n2, .. },
            ) => n1 == n2,
            _ => false,
        }
    }
}

impl Eq for Coloring {}

impl Coloring {
    pub fn residue_class(modulus: u64, residue: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        assert!(residue < modulus, "residue must be below the modulus");
        Coloring::ResidueClass { modulus, residue }
    }

    /// All current coloring kinds classify scalars.
    pub fn phylum(&self) -> SortId {
        SortId::SCALAR
    }

    pub fn describe(&self) -> String {
        match self {
            Coloring::ResidueClass { modulus, residue } => {
                format!("residue:{modulus},{residue}")
            }
            Coloring::DoubleExpBinary => "double-exp-binary".to_string(),
            Coloring::NthPowerOfY { exponent } => format!("nth-power-of-y:{exponent}"),
            Coloring::PredicateOnScalars { name, .. } => format!("predicate:{name}"),
        }
    }

    /// Exact membership test. Elements of the wrong phylum are outside.
    pub fn contains(&self, v: &Element) -> bool {
        match self {
            Coloring::ResidueClass { modulus, residue } => match v.as_nonneg_bigint() {
                Some(n) => n % BigInt::from(*modulus) == BigInt::from(*residue),
                None => false,
            },
            Coloring::DoubleExpBinary => match v.as_nonneg_bigint() {
                Some(n) => in_double_exp_sum_set(&n),
                None => false,
            },
            Coloring::NthPowerOfY { exponent } => match v.as_nonneg_bigint() {
                Some(n) => match nth_root(&n, *exponent) {
                    Some(root) => in_double_exp_sum_set(&root),
                    None => false,
                },
                None => false,
            },
            Coloring::PredicateOnScalars { test, .. } => match v.as_scalar() {
                Some(r) => test(r),
                None => false,
            },
        }
    }
}

/// Exact membership test for a coloring (free-function form).
pub fn coloring_test(x: &Coloring, v: &Element) -> bool {
    x.contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        let n = rows.len();
        Matrix::from_fn(n, |i, j| int(rows[i][j]))
    }

    #[test]
    fn diagonal_sum_and_identity() {
        let a = diag_embed(&int(3), 2);
        let b = diag_embed(&int(4), 2);
        let sum = matrix_add(&a, &b).unwrap();
        assert_eq!(sum, diag_embed(&int(7), 2));
        let zero = Matrix::zero(2);
        assert_eq!(matrix_add(&a, &zero).unwrap(), a);
    }

    #[test]
    fn g_product_is_diagonal_with_scaled_corner() {
        let g1 = g_matrix(1, 2);
        let g2 = g_matrix(2, 2);
        let prod = matrix_mul(&g1, &g2).unwrap();
        assert_eq!(prod.entry(0, 0), &int(66));
        assert_eq!(prod.entry(1, 1), &int(1));
        assert_eq!(prod.entry(0, 1), &int(0));
        assert_eq!(det(&prod), int(66));
        assert_eq!(det(&g1) * det(&g2), int(66));
    }

    #[test]
    fn order_mismatch_is_rejected() {
        let a = Matrix::identity(2);
        let b = Matrix::identity(3);
        assert_eq!(
            matrix_add(&a, &b).unwrap_err(),
            MatrixError::OrderMismatch(2, 3)
        );
        assert_eq!(
            matrix_mul(&a, &b).unwrap_err(),
            MatrixError::OrderMismatch(2, 3)
        );
    }

    #[test]
    fn determinant_matches_cofactor_examples() {
        assert_eq!(det(&mat(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(det_cofactor(&mat(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(det(&diag_embed(&int(4), 2)), int(16));
        let singular = mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(det(&singular), int(0));
        assert_eq!(det_cofactor(&singular), int(0));
        let with_zero_pivot = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(det(&with_zero_pivot), int(-1));
    }

    #[test]
    fn determinant_agrees_with_cofactor_on_random_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3usize {
            for _ in 0..60 {
                let m = Matrix::from_fn(n, |_, _| {
                    BigRational::new(
                        BigInt::from(rng.gen_range(-9i64..=9)),
                        BigInt::from(rng.gen_range(1i64..=4)),
                    )
                });
                assert_eq!(det(&m), det_cofactor(&m));
            }
        }
    }

    #[test]
    fn determinant_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3usize {
            for _ in 0..50 {
                let a = Matrix::from_fn(n, |_, _| int(rng.gen_range(-9i64..=9)));
                let b = Matrix::from_fn(n, |_, _| int(rng.gen_range(-9i64..=9)));
                let prod = matrix_mul(&a, &b).unwrap();
                assert_eq!(det(&prod), det(&a) * det(&b));
            }
        }
    }

    #[test]
    fn full_algebra_partition() {
        let sig = MatrixAlgebraConfig::full(2).signature();
        let names = |kind: OpKind| -> Vec<&str> {
            sig.ops_of_kind(kind).map(|(_, op)| op.name.as_str()).collect()
        };
        assert_eq!(names(OpKind::ScalarRingOp), vec!["addf", "mulf"]);
        assert_eq!(names(OpKind::MatrixRingOp), vec!["add", "mul"]);
        assert_eq!(names(OpKind::HeterogeneousUnary), vec!["det"]);
    }

    #[test]
    fn diagonal_embedding() {
        assert_eq!(diag_embed(&int(0), 3), Matrix::zero(3));
        assert_eq!(diag_embed(&int(7), 1), mat(&[&[7]]));
        for n in 1..=3usize {
            assert_eq!(det(&diag_embed(&int(5), n)), int(5i64.pow(n as u32)));
        }
    }

    #[test]
    fn generators_match_their_closed_forms() {
        assert_eq!(g_matrix(1, 2), mat(&[&[6, 0], &[0, 1]]));
        assert_eq!(det(&g_matrix(0, 3)), int(1));
        assert_eq!(tuple_g_det(&[1, 2, 3], 2), int(1056));
        let d0 = d_matrix(0, 1, DEFAULT_D_INDEX_CAP).unwrap();
        assert_eq!(d0, mat(&[&[2]]));
        let d1 = d_matrix(1, 2, DEFAULT_D_INDEX_CAP).unwrap();
        let d2 = d_matrix(2, 2, DEFAULT_D_INDEX_CAP).unwrap();
        let sum = matrix_add(&d1, &d2).unwrap();
        assert_eq!(sum, diag_embed(&int(20), 2));
        assert_eq!(det(&sum), int(400));
        assert_eq!(
            det(&d_matrix(1, 1, 6).unwrap()) * det(&d_matrix(2, 1, 6).unwrap()),
            int(64)
        );
        assert!(matches!(
            d_matrix(9, 1, DEFAULT_D_INDEX_CAP),
            Err(MatrixError::IndexCapExceeded { index: 9, cap: 6 })
        ));
    }

    #[test]
    fn g_products_are_one_mod_five_and_pair_sums_two_mod_five() {
        // All strictly increasing tuples with indices <= 6 and length <= 4.
        let tuples = increasing_tuples(1, 6, 4);
        for t in &tuples {
            let d = tuple_g_det(t, 2);
            assert_eq!(d.to_integer() % 5, BigInt::from(1), "tuple {:?}", t);
        }
        for t in &tuples {
            for u in &tuples {
                if t.last().unwrap() < u.first().unwrap() {
                    let s = tuple_g_det(t, 2) + tuple_g_det(u, 2);
                    assert_eq!(s.to_integer() % 5, BigInt::from(2));
                }
            }
        }
    }

    #[test]
    fn d_sum_determinant_law() {
        // det(D_i1 + ... + D_iM) = (2^(2^i1) + ... + 2^(2^iM))^n exactly.
        for n in 1..=3usize {
            for t in increasing_tuples(1, 5, 3) {
                let mut sum = d_matrix(t[0], n, 6).unwrap();
                let mut base = double_exp_power(t[0]);
                for &i in &t[1..] {
                    sum = matrix_add(&sum, &d_matrix(i, n, 6).unwrap()).unwrap();
                    base += double_exp_power(i);
                }
                assert_eq!(det(&sum), BigRational::from_integer(base.pow(n as u32)));
            }
        }
    }

    fn increasing_tuples(lo: u32, hi: u32, max_len: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), lo)];
        while let Some((cur, next)) = stack.pop() {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            if cur.len() < max_len {
                for i in next..=hi {
                    let mut ext = cur.clone();
                    ext.push(i);
                    stack.push((ext, i + 1));
                }
            }
        }
        out.sort();
        out
    }

    fn tuple_g_det(tuple: &[u32], order: usize) -> BigRational {
        let mut prod = g_matrix(tuple[0], order);
        for &i in &tuple[1..] {
            prod = matrix_mul(&prod, &g_matrix(i, order)).unwrap();
        }
        det(&prod)
    }

    #[test]
    fn nth_root_is_exact() {
        assert_eq!(nth_root(&BigInt::from(400), 2), Some(BigInt::from(20)));
        assert_eq!(nth_root(&BigInt::from(272), 2), None);
        assert_eq!(nth_root(&BigInt::from(0), 3), Some(BigInt::from(0)));
        assert_eq!(nth_root(&BigInt::from(1), 5), Some(BigInt::from(1)));
        assert_eq!(nth_root(&BigInt::from(-8), 3), None);
        let big = BigInt::from(123456789u64).pow(3);
        assert_eq!(nth_root(&big, 3), Some(BigInt::from(123456789u64)));
        assert_eq!(nth_root(&(big + 1), 3), None);
    }

    #[test]
    fn y_membership_follows_binary_expansion() {
        // 20 = 2^2 + 2^4 with exponents 2 = 2^1 and 4 = 2^2.
        assert!(in_double_exp_sum_set(&BigInt::from(20)));
        // 64 = 2^6 and 6 is not a power of two.
        assert!(!in_double_exp_sum_set(&BigInt::from(64)));
        assert!(!in_double_exp_sum_set(&BigInt::from(0)));
        assert!(!in_double_exp_sum_set(&BigInt::from(1)));
        assert!(in_double_exp_sum_set(&BigInt::from(2)));
        assert!(in_double_exp_sum_set(&double_exp_power(5)));
    }

    #[test]
    fn y_members_reconstruct_from_double_exp_indices() {
        // Every member found below 2^20 is literally a sum of distinct
        // 2^(2^i); rebuild each one from its indices.
        for v in 1u64..(1 << 20) {
            let b = BigInt::from(v);
            if in_double_exp_sum_set(&b) {
                let mut rebuilt = BigInt::zero();
                for i in 0..5u32 {
                    let p = double_exp_power(i);
                    if (&b >> (1u64 << i)).to_u64().is_some_and(|x| x & 1 == 1) {
                        rebuilt += p;
                    }
                }
                assert_eq!(rebuilt, b, "value {v}");
            }
        }
    }

    #[test]
    fn coloring_membership_examples() {
        let mod5 = Coloring::residue_class(5, 1);
        assert!(mod5.contains(&Element::integer(66)));
        assert!(!mod5.contains(&Element::integer(17)));
        assert!(!mod5.contains(&Element::integer(-4)));
        assert!(!mod5.contains(&Element::Scalar(BigRational::new(
            BigInt::from(1),
            BigInt::from(2)
        ))));

        let y = Coloring::DoubleExpBinary;
        assert!(y.contains(&Element::integer(20)));
        assert!(!y.contains(&Element::integer(64)));

        let x2 = Coloring::NthPowerOfY { exponent: 2 };
        assert!(x2.contains(&Element::integer(400)));
        assert!(!x2.contains(&Element::integer(272)));

        // Colorings classify scalars; matrices are outside.
        assert!(!mod5.contains(&Element::Matrix(Matrix::identity(1))));
    }
}
