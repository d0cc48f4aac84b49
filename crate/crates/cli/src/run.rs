//! Dispatch from a parsed command and configuration to the workbench
//! operations, producing a structured report.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use ramsey_core::matrices::{scalar_signature, MatrixAlgebraConfig, MatrixAlgebraOp};
use ramsey_core::reduction::SearchBounds;
use ramsey_core::terms::{enumerate_orderly_terms_capped, term_profile};
use ramsey_core::verify::{
    self, diag_series_prefix, run_bad_sequence_probe, SweepOptions,
};
use ramsey_core::{
    check_homogeneous, check_reduction, enumerate_sorted_reductions, fr_set, Element,
    MatrixError, ReductionError, Signature, SortId, SortedPrefix, TermError, VerifyError,
};

use crate::config::{d_index_cap, parse_coloring, ExperimentConfig, SchemaError, SequenceSpec};
use crate::report::{render_prefix, ExhibitRow, Report, ReportStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    EnumerateTerms,
    FrSet,
    CheckReduction,
    SearchHomogeneous,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::EnumerateTerms => "enumerate-terms",
            CommandKind::FrSet => "fr-set",
            CommandKind::CheckReduction => "check-reduction",
            CommandKind::SearchHomogeneous => "search-homogeneous",
            CommandKind::Verify => "verify",
        }
    }
}

#[derive(Error, Debug)]
pub enum RunError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("term error: {0}")]
    Term(#[from] TermError),
    #[error("reduction error: {0}")]
    Reduction(#[from] ReductionError),
    #[error("matrix error: {0}")]
    Matrix(#[from] MatrixError),
    #[error("verify error: {0}")]
    Verify(#[from] VerifyError),
}

impl RunError {
    /// Exit status: 3 for configuration errors, 4 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Schema(_) => 3,
            _ => 4,
        }
    }
}

pub fn run(cmd: CommandKind, cfg: &ExperimentConfig) -> Result<Report, RunError> {
    cfg.validate()?;
    match cmd {
        CommandKind::EnumerateTerms => enumerate_terms(cfg),
        CommandKind::FrSet => fr_set_cmd(cfg),
        CommandKind::CheckReduction => check_reduction_cmd(cfg),
        CommandKind::SearchHomogeneous => search_homogeneous(cfg),
        CommandKind::Verify => verify_cmd(cfg),
    }
}

fn bounds_of(cfg: &ExperimentConfig) -> SearchBounds {
    SearchBounds::new(cfg.max_arity, cfg.max_depth)
}

fn require<'a>(field: &'static str, value: &'a Option<String>) -> Result<&'a str, RunError> {
    value.as_deref().ok_or_else(|| {
        RunError::Schema(SchemaError::Invalid {
            field,
            reason: "required for this command".into(),
        })
    })
}

/// Builds the finite prefix a sequence spec describes.
fn build_sequence(spec: &SequenceSpec, cfg: &ExperimentConfig) -> Result<SortedPrefix, RunError> {
    let scalar_slot = Element::integer(cfg.scalar_slot);
    Ok(match spec {
        SequenceSpec::GSeries(indices) => verify::g_series_prefix(cfg.n, indices, &scalar_slot),
        SequenceSpec::DSeries(indices) => {
            verify::d_series_prefix(cfg.n, indices, &scalar_slot, d_index_cap())?
        }
        SequenceSpec::ScalarList(values) => {
            SortedPrefix::scalars(values.iter().map(|&v| Element::integer(v)).collect())
        }
        SequenceSpec::DiagList(values) => {
            let scalars: Vec<BigRational> = values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect();
            diag_series_prefix(&scalars, cfg.n)
        }
    })
}

fn parse_matrix_ops(names: &[String]) -> Result<Vec<MatrixAlgebraOp>, RunError> {
    names
        .iter()
        .map(|name| {
            MatrixAlgebraOp::from_name(name).ok_or_else(|| {
                RunError::Schema(SchemaError::Invalid {
                    field: "ops",
                    reason: format!("unknown operation '{name}'"),
                })
            })
        })
        .collect()
}

/// The signature for a sequence: scalar lists use the plain scalar algebra
/// (ops `add`, `mul`); everything else is a matrix algebra reduct.
fn build_signature(
    spec: &SequenceSpec,
    cfg: &ExperimentConfig,
) -> Result<Signature, RunError> {
    if spec.is_scalar_only() {
        let names = cfg
            .ops
            .clone()
            .unwrap_or_else(|| vec!["add".to_string()]);
        let mut with_add = false;
        let mut with_mul = false;
        for name in &names {
            match name.as_str() {
                "add" => with_add = true,
                "mul" => with_mul = true,
                other => {
                    return Err(RunError::Schema(SchemaError::Invalid {
                        field: "ops",
                        reason: format!(
                            "scalar sequences accept ops add and mul, got '{other}'"
                        ),
                    }))
                }
            }
        }
        Ok(scalar_signature(with_add, with_mul))
    } else {
        let ops = match &cfg.ops {
            Some(names) => parse_matrix_ops(names)?,
            None => spec.default_ops(),
        };
        Ok(MatrixAlgebraConfig::reduct(cfg.n, &ops).signature())
    }
}

fn record_bounds(report: &mut Report, cfg: &ExperimentConfig) {
    report
        .bounds
        .insert("max_arity".into(), cfg.max_arity.to_string());
    report
        .bounds
        .insert("max_depth".into(), cfg.max_depth.to_string());
}

fn enumerate_terms(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    let names = cfg
        .ops
        .clone()
        .unwrap_or_else(|| vec!["mul".to_string()]);
    let ops = parse_matrix_ops(&names)?;
    let sig = MatrixAlgebraConfig::reduct(cfg.n, &ops).signature();
    // Default codomain: wherever the first selected operation lands.
    let codomain = match cfg.codomain {
        Some(s) => SortId(s),
        None => sig
            .op_by_name(&names[0])
            .map(|(_, op)| op.codomain)
            .unwrap_or(SortId::SCALAR),
    };
    if codomain.0 >= sig.sort_count() {
        return Err(RunError::Schema(SchemaError::Invalid {
            field: "codomain",
            reason: format!("sort {} is not declared", codomain.0),
        }));
    }
    let max_arity = cfg.arity.unwrap_or(cfg.max_arity);
    let terms = enumerate_orderly_terms_capped(&sig, codomain, max_arity, cfg.max_depth, 200_000)?;
    let mut items = Vec::new();
    for t in &terms {
        let profile = term_profile(t, &sig)?;
        if cfg.arity.is_none_or(|a| profile.arity == a) {
            items.push(t.render(&sig));
        }
    }
    let mut report = Report::new(
        "enumerate-terms",
        ReportStatus::Computed,
        format!("{} orderly terms with codomain sort {}", items.len(), codomain),
        cfg,
    );
    record_bounds(&mut report, cfg);
    if let Some(a) = cfg.arity {
        report.bounds.insert("arity".into(), a.to_string());
    }
    report.counts.insert("terms".into(), items.len() as u64);
    report.items = items;
    Ok(report)
}

fn fr_set_cmd(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    let spec = SequenceSpec::parse(require("seq", &cfg.seq)?, "seq")?;
    let b = build_sequence(&spec, cfg)?;
    let sig = build_signature(&spec, cfg)?;
    let target = spec.first_sort();
    let coloring = cfg.coloring.as_deref().map(parse_coloring).transpose()?;
    if let Some(c) = &coloring {
        if target != c.phylum() {
            return Err(RunError::Schema(SchemaError::Invalid {
                field: "coloring",
                reason: "the coloring classifies scalars, but this FR set lives in the matrix phylum".into(),
            }));
        }
    }
    let fr = fr_set(&b, target, &sig, &bounds_of(cfg))?;
    let mut report = Report::new(
        "fr-set",
        ReportStatus::Computed,
        format!("FR set with {} elements", fr.len()),
        cfg,
    );
    record_bounds(&mut report, cfg);
    report
        .bounds
        .insert("prefix_len".into(), b.len().to_string());
    report.counts.insert("elements".into(), fr.len() as u64);
    report.candidate = Some(render_prefix(&b));
    for (e, prov) in fr.iter() {
        report.exhibits.push(ExhibitRow {
            label: "member".into(),
            value: e.to_string(),
            in_coloring: coloring.as_ref().map(|c| c.contains(e)),
            term: Some(prov.term.render(&sig)),
            block: Some(prov.block.clone()),
        });
    }
    if fr.is_empty() {
        report.flags.push("empty-fr-set".into());
    }
    if let Some(c) = &coloring {
        let verdict = check_homogeneous(&fr, c);
        report
            .notes
            .push(format!("verdict against {}: {}", c.describe(), verdict.describe()));
    }
    Ok(report)
}

fn check_reduction_cmd(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    let b_spec = SequenceSpec::parse(require("seq", &cfg.seq)?, "seq")?;
    let a_spec = SequenceSpec::parse(require("target", &cfg.target)?, "target")?;
    let b = build_sequence(&b_spec, cfg)?;
    let a = build_sequence(&a_spec, cfg)?;
    let sig = build_signature(&b_spec, cfg)?;
    let witness = check_reduction(&a, &b, &sig, &bounds_of(cfg))?;
    let mut report = match &witness {
        Some(w) => {
            let mut r = Report::new(
                "check-reduction",
                ReportStatus::Computed,
                "reduction witness found".into(),
                cfg,
            );
            for (j, part) in w.parts.iter().enumerate() {
                r.exhibits.push(ExhibitRow {
                    label: format!("position-{j}"),
                    value: a.items[j].to_string(),
                    in_coloring: None,
                    term: Some(part.term.render(&sig)),
                    block: Some(part.block.clone()),
                });
            }
            r
        }
        None => {
            let mut r = Report::new(
                "check-reduction",
                ReportStatus::Inconclusive,
                "no witness within bounds".into(),
                cfg,
            );
            r.notes
                .push("absence within bounds does not prove non-reduction".into());
            r
        }
    };
    record_bounds(&mut report, cfg);
    report.candidate = Some(render_prefix(&a));
    report
        .counts
        .insert("witness_positions".into(), witness.map_or(0, |w| w.parts.len()) as u64);
    Ok(report)
}

fn search_homogeneous(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    let spec = SequenceSpec::parse(require("seq", &cfg.seq)?, "seq")?;
    let coloring = parse_coloring(require("coloring", &cfg.coloring)?)?;
    if spec.first_sort() != coloring.phylum() {
        return Err(RunError::Schema(SchemaError::Invalid {
            field: "coloring",
            reason: "the coloring classifies scalars, so the sequence must start at sort 0".into(),
        }));
    }
    let b = build_sequence(&spec, cfg)?;
    let sig = build_signature(&spec, cfg)?;
    let bounds = bounds_of(cfg);
    let candidates = enumerate_sorted_reductions(&b, &b.word, &sig, cfg.out_len, &bounds)?;
    let mut report = Report::new(
        "search-homogeneous",
        ReportStatus::Inconclusive,
        String::new(),
        cfg,
    );
    record_bounds(&mut report, cfg);
    report.bounds.insert("out_len".into(), cfg.out_len.to_string());
    report
        .bounds
        .insert("coloring".into(), coloring.describe());
    report
        .counts
        .insert("candidates_swept".into(), candidates.len() as u64);
    let mut mixed = 0u64;
    for (prefix, _) in &candidates {
        let fr = fr_set(prefix, SortId::SCALAR, &sig, &bounds)?;
        let verdict = check_homogeneous(&fr, &coloring);
        if verdict.is_mixed() {
            mixed += 1;
            continue;
        }
        report.status = ReportStatus::Computed;
        report.summary = format!("homogeneous reduction found: {}", verdict.describe());
        report.candidate = Some(render_prefix(prefix));
        for (e, prov) in fr.iter() {
            report.exhibits.push(ExhibitRow {
                label: "fr-member".into(),
                value: e.to_string(),
                in_coloring: Some(coloring.contains(e)),
                term: Some(prov.term.render(&sig)),
                block: Some(prov.block.clone()),
            });
        }
        if fr.is_empty() {
            report.flags.push("vacuous-containment".into());
        }
        report.counts.insert("mixed_skipped".into(), mixed);
        return Ok(report);
    }
    report.summary = "no homogeneous reduction within bounds".into();
    report.counts.insert("mixed_skipped".into(), mixed);
    if candidates.is_empty() {
        report.flags.push("empty-sweep".into());
    }
    Ok(report)
}

fn sweep_options(cfg: &ExperimentConfig) -> Result<SweepOptions, RunError> {
    let mut opts = SweepOptions::new(cfg.n, cfg.index_bound, cfg.out_len);
    opts.indices = cfg.indices.clone();
    opts.bounds = bounds_of(cfg);
    opts.scalar_slot = Element::integer(cfg.scalar_slot);
    opts.d_index_cap = d_index_cap();
    if let Some(names) = &cfg.ops {
        opts.ops = Some(parse_matrix_ops(names)?);
    }
    Ok(opts)
}

fn verify_cmd(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    let theorem = require("theorem", &cfg.theorem)?;
    let command = format!("verify {theorem}");
    let witness = match theorem {
        "mod5" => verify::verify_mod5_theorem(&sweep_options(cfg)?)?,
        "ubr" => verify::verify_ubr_theorem(&sweep_options(cfg)?)?,
        "pythagorean" => verify::verify_pythagorean_lemma(cfg.index_bound, cfg.len_bound),
        "final" => verify::verify_final_theorem(&sweep_options(cfg)?)?,
        "hom-lemma" => {
            let prefix_len = cfg.prefix_len();
            verify::verify_homomorphism_lemma(prefix_len, cfg.n, cfg.max_arity.min(prefix_len))?
        }
        "lemma-long" => {
            verify::verify_lemma_long(cfg.prefix_len(), cfg.n, cfg.out_len, &bounds_of(cfg))?
        }
        "sort-sep" => {
            let ops = match &cfg.ops {
                Some(names) => parse_matrix_ops(names)?,
                None => MatrixAlgebraOp::ALL.to_vec(),
            };
            verify::verify_sort_separation(
                &MatrixAlgebraConfig::reduct(cfg.n, &ops),
                &bounds_of(cfg),
            )?
        }
        "subalg" => verify::verify_subalgebra_transfer(cfg.n, &bounds_of(cfg))?,
        "probe" => {
            let spec = SequenceSpec::parse(require("seq", &cfg.seq)?, "seq")?;
            let coloring = parse_coloring(require("coloring", &cfg.coloring)?)?;
            if spec.first_sort() != coloring.phylum() {
                return Err(RunError::Schema(SchemaError::Invalid {
                    field: "coloring",
                    reason: "probe sequences must start at the scalar sort".into(),
                }));
            }
            let seq = build_sequence(&spec, cfg)?;
            let sig = build_signature(&spec, cfg)?;
            run_bad_sequence_probe(&seq, &coloring, &sig, cfg.out_len, &bounds_of(cfg))?
        }
        other => {
            return Err(RunError::Schema(SchemaError::Invalid {
                field: "theorem",
                reason: format!("unknown theorem id '{other}'"),
            }))
        }
    };
    Ok(Report::from_witness(&command, &witness, cfg))
}
