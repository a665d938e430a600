//! Entity-level scoring with conlleval semantics.
//!
//! An entity counts as correct only when its start, end and type all match
//! a gold entity. Both sides are decoded leniently, as conlleval does.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::corpus::Corpus;
use crate::schemes::{self, EntitySpan, Scheme, SchemeError};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("gold has {gold} sentences but prediction has {pred}")]
    SentenceCount { gold: usize, pred: usize },
    #[error("sentence {sentence}, position {position}: gold and prediction disagree on tokens")]
    Alignment { sentence: usize, position: usize },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Counts and percentages for one entity type, or for all of them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Score {
    pub gold: usize,
    pub pred: usize,
    pub correct: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Score {
    pub fn from_counts(gold: usize, pred: usize, correct: usize) -> Self {
        let precision = if pred == 0 { 0.0 } else { 100.0 * correct as f64 / pred as f64 };
        let recall = if gold == 0 { 0.0 } else { 100.0 * correct as f64 / gold as f64 };
        let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
        Score { gold, pred, correct, precision, recall, f1 }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalReport {
    pub per_type: BTreeMap<String, Score>,
    pub overall: Score,
    pub tokens: usize,
    pub token_accuracy: f64,
}

#[derive(Default)]
struct Counts {
    gold: usize,
    pred: usize,
    correct: usize,
}

fn io_normalize(spans: Vec<EntitySpan>, len: usize) -> Result<Vec<EntitySpan>, SchemeError> {
    let tags = schemes::encode_spans(&spans, len, Scheme::Io)?;
    schemes::decode_spans(&tags, Scheme::Io, schemes::DecodeMode::Lenient)
}

/// Score `pred` against `gold`. Each side is read in its own scheme (the
/// validated one, or the inferred one). With `normalize_io`, both span sets
/// are first collapsed through IO, which merges adjacent same-type entities
/// on both sides, and token accuracy compares the IO tags.
pub fn evaluate(gold: &Corpus, pred: &Corpus, normalize_io: bool) -> Result<EvalReport, EvalError> {
    if gold.len() != pred.len() {
        return Err(EvalError::SentenceCount { gold: gold.len(), pred: pred.len() });
    }
    let gold_scheme = gold.effective_scheme();
    let pred_scheme = pred.effective_scheme();

    let mut counts: BTreeMap<String, Counts> = BTreeMap::new();
    let mut tokens = 0usize;
    let mut tokens_correct = 0usize;

    for (i, (gs, ps)) in gold.sentences().iter().zip(pred.sentences()).enumerate() {
        let n = gs.len();
        if ps.len() != n {
            return Err(EvalError::Alignment { sentence: i, position: n.min(ps.len()) });
        }
        if let Some(pos) = gs.tokens().iter().zip(ps.tokens()).position(|(a, b)| a.surface() != b.surface()) {
            return Err(EvalError::Alignment { sentence: i, position: pos });
        }
        let mut g = schemes::sentence_spans(gs, gold_scheme).map_err(|e| e.in_sentence(i))?;
        let mut p = schemes::sentence_spans(ps, pred_scheme).map_err(|e| e.in_sentence(i))?;
        if normalize_io {
            g = io_normalize(g, n)?;
            p = io_normalize(p, n)?;
            let gt = schemes::encode_spans(&g, n, Scheme::Io)?;
            let pt = schemes::encode_spans(&p, n, Scheme::Io)?;
            tokens_correct += gt.iter().zip(&pt).filter(|(a, b)| a == b).count();
        } else {
            tokens_correct += gs.tags().iter().zip(ps.tags()).filter(|(a, b)| **a == *b).count();
        }
        tokens += n;

        for span in &g {
            counts.entry(span.etype.clone()).or_default().gold += 1;
        }
        for span in &p {
            let c = counts.entry(span.etype.clone()).or_default();
            c.pred += 1;
            // Spans are sorted and non-overlapping, so an exact match is unique.
            if g.binary_search(span).is_ok() {
                c.correct += 1;
            }
        }
    }

    let per_type: BTreeMap<String, Score> =
        counts.into_iter().map(|(t, c)| (t, Score::from_counts(c.gold, c.pred, c.correct))).collect();
    let (g, p, c) = per_type.values().fold((0, 0, 0), |(g, p, c), s| (g + s.gold, p + s.pred, c + s.correct));
    let token_accuracy = if tokens == 0 { 0.0 } else { 100.0 * tokens_correct as f64 / tokens as f64 };
    Ok(EvalReport { per_type, overall: Score::from_counts(g, p, c), tokens, token_accuracy })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportStyle {
    #[default]
    Text,
    Csv,
}

impl std::str::FromStr for ReportStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportStyle::Text),
            "csv" => Ok(ReportStyle::Csv),
            _ => Err(format!("unknown report style `{s}` (expected text or csv)")),
        }
    }
}

/// conlleval-style text, or CSV with one row per type and an `ALL` row.
pub fn format_report(r: &EvalReport, style: ReportStyle) -> String {
    let mut out = String::new();
    match style {
        ReportStyle::Csv => {
            out.push_str("type,gold,pred,correct,precision,recall,f1\n");
            if r.per_type.is_empty() {
                return out;
            }
            let mut row = |name: &str, s: &Score| {
                let _ = writeln!(
                    out,
                    "{name},{},{},{},{:.2},{:.2},{:.2}",
                    s.gold, s.pred, s.correct, s.precision, s.recall, s.f1
                );
            };
            for (t, s) in &r.per_type {
                row(t, s);
            }
            row("ALL", &r.overall);
        }
        ReportStyle::Text => {
            let o = &r.overall;
            let _ = writeln!(
                out,
                "processed {} tokens with {} phrases; found: {} phrases; correct: {}.",
                r.tokens, o.gold, o.pred, o.correct
            );
            let _ = writeln!(
                out,
                "accuracy: {:6.2}%; precision: {:6.2}%; recall: {:6.2}%; FB1: {:6.2}",
                r.token_accuracy, o.precision, o.recall, o.f1
            );
            for (t, s) in &r.per_type {
                let _ = writeln!(
                    out,
                    "{t:>17}: precision: {:6.2}%; recall: {:6.2}%; FB1: {:6.2}  {}",
                    s.precision, s.recall, s.f1, s.pred
                );
            }
        }
    }
    out
}
