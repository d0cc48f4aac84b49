//! Experiment configuration: a JSON document with stable key order,
//! defaults, and validation. Reports echo their config, so a report can
//! be re-run from its own echo.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use ramsey_core::matrices::{MatrixAlgebraOp, DEFAULT_D_INDEX_CAP, DEFAULT_G_INDEX_CAP};
use ramsey_core::SortId;

/// Name of the environment variable bounding the bit-length of generated
/// double-exponential entries. The D-generator index cap is the base-2
/// logarithm of this value; unset means 64-bit entries (cap 6).
pub const MAGNITUDE_CAP_ENV: &str = "RAMSEY_MAX_BITS";

#[derive(Error, Debug)]
pub enum SchemaError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field '{field}': {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("field '{field}': {value} exceeds the cap of {cap}")]
    CapExceeded {
        field: &'static str,
        value: u64,
        cap: u64,
    },
}

fn default_n() -> usize {
    2
}
fn default_index_bound() -> u32 {
    3
}
fn default_out_len() -> usize {
    2
}
fn default_max_arity() -> usize {
    4
}
fn default_max_depth() -> usize {
    3
}
fn default_len_bound() -> usize {
    3
}
fn default_scalar_slot() -> i64 {
    1
}

/// One experiment: the algebra, the sequence, the coloring, and bounds.
/// Unset fields take the documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Theorem id for `verify`: mod5, ubr, pythagorean, final, hom-lemma,
    /// lemma-long, sort-sep, subalg, probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    /// Matrix order.
    #[serde(default = "default_n")]
    pub n: usize,
    /// Generator indices run 1..=index_bound unless `indices` is given.
    #[serde(default = "default_index_bound")]
    pub index_bound: u32,
    /// Explicit strictly increasing generator indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<u32>>,
    /// Length of enumerated reduction prefixes.
    #[serde(default = "default_out_len")]
    pub out_len: usize,
    #[serde(default = "default_max_arity")]
    pub max_arity: usize,
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    /// Tuple-length bound for the square-sum lemma sweep.
    #[serde(default = "default_len_bound")]
    pub len_bound: usize,
    /// Prefix length for the lemma verifiers; defaults to index_bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix_len: Option<usize>,
    /// Exact-arity filter for enumerate-terms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    /// Codomain sort for enumerate-terms; defaults to the codomain of the
    /// first selected operation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<usize>,
    /// Sequence generator, e.g. "g:3", "d:3", "list:1,2,3", "diag:1,2".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<String>,
    /// Target prefix for check-reduction, same syntax as `seq`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Coloring, e.g. "residue:5,1", "double-exp-binary",
    /// "nth-power-of-y:2".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<String>,
    /// Operation names keeping a reduct, e.g. ["mul", "addf", "det"].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ops: Option<Vec<String>>,
    /// Constant placed in scalar slots of generated witness sequences.
    #[serde(default = "default_scalar_slot")]
    pub scalar_slot: i64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            theorem: None,
            n: default_n(),
            index_bound: default_index_bound(),
            indices: None,
            out_len: default_out_len(),
            max_arity: default_max_arity(),
            max_depth: default_max_depth(),
            len_bound: default_len_bound(),
            prefix_len: None,
            arity: None,
            codomain: None,
            seq: None,
            target: None,
            coloring: None,
            ops: None,
            scalar_slot: default_scalar_slot(),
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| SchemaError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string(self).expect("configs always serialize")
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        if self.n == 0 {
            return Err(SchemaError::Invalid {
                field: "n",
                reason: "matrix order must be at least 1".into(),
            });
        }
        if self.out_len == 0 {
            return Err(SchemaError::Invalid {
                field: "out_len",
                reason: "reduction prefixes must be nonempty".into(),
            });
        }
        if self.max_arity == 0 {
            return Err(SchemaError::Invalid {
                field: "max_arity",
                reason: "term arity bound must be at least 1".into(),
            });
        }
        if self.max_arity > 8 {
            return Err(SchemaError::CapExceeded {
                field: "max_arity",
                value: self.max_arity as u64,
                cap: 8,
            });
        }
        if self.max_depth > 8 {
            return Err(SchemaError::CapExceeded {
                field: "max_depth",
                value: self.max_depth as u64,
                cap: 8,
            });
        }
        if self.index_bound == 0 || self.index_bound > DEFAULT_G_INDEX_CAP {
            return Err(SchemaError::CapExceeded {
                field: "index_bound",
                value: self.index_bound as u64,
                cap: DEFAULT_G_INDEX_CAP as u64,
            });
        }
        if let Some(indices) = &self.indices {
            if indices.is_empty() {
                return Err(SchemaError::Invalid {
                    field: "indices",
                    reason: "at least one generator index is required".into(),
                });
            }
            if indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(SchemaError::Invalid {
                    field: "indices",
                    reason: "indices must be strictly increasing".into(),
                });
            }
            if indices[0] == 0 {
                return Err(SchemaError::Invalid {
                    field: "indices",
                    reason: "generator indices start at 1".into(),
                });
            }
        }
        if let Some(theorem) = &self.theorem {
            const KNOWN: [&str; 9] = [
                "mod5",
                "ubr",
                "pythagorean",
                "final",
                "hom-lemma",
                "lemma-long",
                "sort-sep",
                "subalg",
                "probe",
            ];
            if !KNOWN.contains(&theorem.as_str()) {
                return Err(SchemaError::Invalid {
                    field: "theorem",
                    reason: format!("unknown theorem id '{theorem}'"),
                });
            }
        }
        if let Some(seq) = &self.seq {
            SequenceSpec::parse(seq, "seq")?;
        }
        if let Some(target) = &self.target {
            SequenceSpec::parse(target, "target")?;
        }
        if let Some(coloring) = &self.coloring {
            parse_coloring(coloring)?;
        }
        if let Some(ops) = &self.ops {
            for name in ops {
                if MatrixAlgebraOp::from_name(name).is_none() {
                    return Err(SchemaError::Invalid {
                        field: "ops",
                        reason: format!(
                            "unknown operation '{name}' (expected add, mul, addf, mulf, det)"
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn generator_indices(&self) -> Vec<u32> {
        self.indices
            .clone()
            .unwrap_or_else(|| (1..=self.index_bound).collect())
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len.unwrap_or(self.index_bound as usize)
    }
}

/// A parsed sequence generator specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSpec {
    /// `g:K` or `g:1,2,3`: alternating scalars and `G_i` generators.
    GSeries(Vec<u32>),
    /// `d:K` or `d:1,2`: alternating scalars and `D_i` generators.
    DSeries(Vec<u32>),
    /// `list:v1,v2,...`: a scalar-only prefix.
    ScalarList(Vec<i64>),
    /// `diag:v1,v2,...`: diagonal embeddings of the scalars.
    DiagList(Vec<i64>),
}

impl SequenceSpec {
    pub fn parse(text: &str, field: &'static str) -> Result<Self, SchemaError> {
        let (kind, rest) = text.split_once(':').ok_or_else(|| SchemaError::Invalid {
            field,
            reason: format!("expected kind:params, got '{text}'"),
        })?;
        let invalid = |reason: String| SchemaError::Invalid { field, reason };
        match kind {
            "g" | "d" => {
                let indices = parse_index_args(rest).map_err(invalid)?;
                let cap = if kind == "g" {
                    DEFAULT_G_INDEX_CAP
                } else {
                    d_index_cap()
                };
                if let Some(&max) = indices.iter().max() {
                    if max > cap {
                        return Err(SchemaError::CapExceeded {
                            field,
                            value: max as u64,
                            cap: cap as u64,
                        });
                    }
                }
                if kind == "g" {
                    Ok(SequenceSpec::GSeries(indices))
                } else {
                    Ok(SequenceSpec::DSeries(indices))
                }
            }
            "list" | "diag" => {
                let values: Vec<i64> = rest
                    .split(',')
                    .map(|s| s.trim().parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| invalid(format!("bad integer list '{rest}': {e}")))?;
                if values.is_empty() {
                    return Err(invalid("empty sequence".into()));
                }
                if kind == "list" {
                    Ok(SequenceSpec::ScalarList(values))
                } else {
                    Ok(SequenceSpec::DiagList(values))
                }
            }
            other => Err(invalid(format!(
                "unknown sequence kind '{other}' (expected g, d, list, diag)"
            ))),
        }
    }

    /// Sort of the first position of the generated prefix.
    pub fn first_sort(&self) -> SortId {
        match self {
            SequenceSpec::GSeries(_) | SequenceSpec::DSeries(_) | SequenceSpec::ScalarList(_) => {
                SortId::SCALAR
            }
            SequenceSpec::DiagList(_) => SortId::MATRIX,
        }
    }

    /// The reduct kept by default for this sequence kind.
    pub fn default_ops(&self) -> Vec<MatrixAlgebraOp> {
        match self {
            SequenceSpec::GSeries(_) => vec![
                MatrixAlgebraOp::MatrixMul,
                MatrixAlgebraOp::ScalarAdd,
                MatrixAlgebraOp::Det,
            ],
            SequenceSpec::DSeries(_) => vec![
                MatrixAlgebraOp::MatrixAdd,
                MatrixAlgebraOp::ScalarMul,
                MatrixAlgebraOp::Det,
            ],
            SequenceSpec::ScalarList(_) => vec![MatrixAlgebraOp::MatrixAdd],
            SequenceSpec::DiagList(_) => {
                vec![MatrixAlgebraOp::MatrixAdd, MatrixAlgebraOp::MatrixMul]
            }
        }
    }

    pub fn is_scalar_only(&self) -> bool {
        matches!(self, SequenceSpec::ScalarList(_))
    }
}

/// `K` means 1..=K; `a,b,c` is an explicit strictly increasing list.
fn parse_index_args(rest: &str) -> Result<Vec<u32>, String> {
    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
    let indices: Vec<u32> = parts
        .iter()
        .map(|s| s.parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("bad index list '{rest}': {e}"))?;
    if indices.is_empty() {
        return Err("at least one index is required".into());
    }
    if indices.len() == 1 && parts.len() == 1 && !rest.contains(',') {
        let bound = indices[0];
        if bound == 0 {
            return Err("index bound must be at least 1".into());
        }
        return Ok((1..=bound).collect());
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err("indices must be strictly increasing".into());
    }
    if indices[0] == 0 {
        return Err("generator indices start at 1".into());
    }
    Ok(indices)
}

/// Parses a coloring spec: `residue:m,r`, `double-exp-binary`,
/// `nth-power-of-y:n`, or `evens`/`odds` shorthands.
pub fn parse_coloring(text: &str) -> Result<ramsey_core::Coloring, SchemaError> {
    use ramsey_core::Coloring;
    let invalid = |reason: String| SchemaError::Invalid {
        field: "coloring",
        reason,
    };
    let (kind, rest) = match text.split_once(':') {
        Some((k, r)) => (k, Some(r)),
        None => (text, None),
    };
    match kind {
        "residue" => {
            let rest = rest.ok_or_else(|| invalid("residue needs modulus,residue".into()))?;
            let (m, r) = rest
                .split_once(',')
                .ok_or_else(|| invalid("residue needs modulus,residue".into()))?;
            let modulus: u64 = m
                .trim()
                .parse()
                .map_err(|e| invalid(format!("bad modulus: {e}")))?;
            let residue: u64 = r
                .trim()
                .parse()
                .map_err(|e| invalid(format!("bad residue: {e}")))?;
            if modulus < 2 {
                return Err(invalid("modulus must be at least 2".into()));
            }
            if residue >= modulus {
                return Err(invalid("residue must be below the modulus".into()));
            }
            Ok(Coloring::residue_class(modulus, residue))
        }
        "double-exp-binary" => Ok(Coloring::DoubleExpBinary),
        "nth-power-of-y" => {
            let rest = rest.ok_or_else(|| invalid("nth-power-of-y needs an exponent".into()))?;
            let exponent: u32 = rest
                .trim()
                .parse()
                .map_err(|e| invalid(format!("bad exponent: {e}")))?;
            if exponent == 0 {
                return Err(invalid("exponent must be at least 1".into()));
            }
            Ok(Coloring::NthPowerOfY { exponent })
        }
        "evens" => Ok(Coloring::residue_class(2, 0)),
        "odds" => Ok(Coloring::residue_class(2, 1)),
        other => Err(invalid(format!("unknown coloring kind '{other}'"))),
    }
}

/// Effective D-generator index cap: from the magnitude cap environment
/// variable when set, else the built-in default.
pub fn d_index_cap() -> u32 {
    match std::env::var(MAGNITUDE_CAP_ENV) {
        Ok(v) => match v.trim().parse::<u64>() {
            // floor(log2(bits)): an index-i entry takes 2^i + 1 bits.
            Ok(bits) if bits >= 4 => 63 - bits.leading_zeros(),
            _ => DEFAULT_D_INDEX_CAP,
        },
        Err(_) => DEFAULT_D_INDEX_CAP,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = ExperimentConfig::parse(r#"{"theorem": "mod5"}"#).unwrap();
        assert_eq!(cfg.theorem.as_deref(), Some("mod5"));
        assert_eq!(cfg.n, 2);
        assert_eq!(cfg.index_bound, 3);
        assert_eq!(cfg.out_len, 2);
        assert_eq!(cfg.max_arity, 4);
        assert_eq!(cfg.max_depth, 3);
        assert_eq!(cfg.scalar_slot, 1);
    }

    #[test]
    fn ubr_worked_example_config() {
        let cfg = ExperimentConfig::parse(r#"{"theorem": "ubr", "n": 1, "indices": [1, 2]}"#)
            .unwrap();
        assert_eq!(cfg.n, 1);
        assert_eq!(cfg.generator_indices(), vec![1, 2]);
    }

    #[test]
    fn malformed_coloring_is_a_schema_error() {
        let err = ExperimentConfig::parse(r#"{"coloring": "rainbow:7"}"#).unwrap_err();
        assert!(matches!(err, SchemaError::Invalid { field: "coloring", .. }));
    }

    #[test]
    fn config_round_trips() {
        let cfg = ExperimentConfig {
            theorem: Some("ubr".into()),
            n: 1,
            indices: Some(vec![1, 2]),
            seq: Some("d:2".into()),
            coloring: Some("nth-power-of-y:1".into()),
            ops: Some(vec!["add".into(), "mulf".into(), "det".into()]),
            ..ExperimentConfig::default()
        };
        let text = cfg.serialize();
        let back = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn sequence_specs() {
        assert_eq!(
            SequenceSpec::parse("g:3", "seq").unwrap(),
            SequenceSpec::GSeries(vec![1, 2, 3])
        );
        assert_eq!(
            SequenceSpec::parse("d:1,3", "seq").unwrap(),
            SequenceSpec::DSeries(vec![1, 3])
        );
        assert_eq!(
            SequenceSpec::parse("list:1,2,3", "seq").unwrap(),
            SequenceSpec::ScalarList(vec![1, 2, 3])
        );
        assert_eq!(
            SequenceSpec::parse("diag:4,5", "seq").unwrap(),
            SequenceSpec::DiagList(vec![4, 5])
        );
        assert!(SequenceSpec::parse("g:0", "seq").is_err());
        assert!(SequenceSpec::parse("d:99", "seq").is_err());
        assert!(SequenceSpec::parse("walk:1", "seq").is_err());
        assert!(SequenceSpec::parse("list:", "seq").is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let err = ExperimentConfig::parse(r#"{"index_bound": 40}"#).unwrap_err();
        assert!(matches!(err, SchemaError::CapExceeded { field: "index_bound", .. }));
        let err = ExperimentConfig::parse(r#"{"max_depth": 30}"#).unwrap_err();
        assert!(matches!(err, SchemaError::CapExceeded { field: "max_depth", .. }));
    }

    #[test]
    fn unknown_fields_are_rejected_with_position() {
        let err = ExperimentConfig::parse("{\n  \"frobnicate\": 1\n}").unwrap_err();
        match err {
            SchemaError::Json { line, .. } => assert_eq!(line, 2),
            other => panic!("expected a json error, got {other:?}"),
        }
    }
}
