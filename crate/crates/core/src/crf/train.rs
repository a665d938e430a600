//! Regularized maximum-likelihood training.

use rayon::prelude::*;

use crate::corpus::{Corpus, Sentence};
use crate::schemes::SchemeError;

use super::features::{extract_features, FeatureIndex, FeatureTemplateSet};
use super::lattice::ForwardBackward;
use super::{CrfError, CrfModel};

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub l2_lambda: f64,
    /// Maximum number of accepted descent steps.
    pub max_iter: usize,
    /// Stop once the relative objective decrease of an accepted step falls below this.
    pub tol: f64,
    /// Recorded for provenance; full-batch descent draws no random numbers.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { l2_lambda: 1.0, max_iter: 200, tol: 1e-6, seed: 0 }
    }
}

impl TrainConfig {
    pub fn check(&self) -> Result<(), CrfError> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CrfError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.l2_lambda >= 0.0 && self.l2_lambda.is_finite()) {
            return Err(CrfError::Config(format!("l2 must be finite and >= 0, got {}", self.l2_lambda)));
        }
        Ok(())
    }
}

/// Gradient with the same layout as the model weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient {
    pub obs: Vec<f64>,
    pub trans: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Objective at the candidate point.
    pub objective: f64,
    pub step: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainLog {
    pub initial_objective: f64,
    pub records: Vec<IterationRecord>,
    pub accepted: usize,
    pub final_objective: f64,
    pub converged: bool,
}

impl TrainLog {
    /// Objectives of accepted steps, in order.
    pub fn accepted_objectives(&self) -> Vec<f64> {
        self.records.iter().filter(|r| r.accepted).map(|r| r.objective).collect()
    }
}

pub(crate) struct Instance {
    feats: Vec<Vec<u32>>,
    gold: Vec<usize>,
}

struct SentenceTerms {
    nll: f64,
    /// `T x K` node marginals.
    node: Vec<f64>,
    /// Summed `K x K` edge marginals.
    edge: Vec<f64>,
}

fn sentence_terms(model: &CrfModel, inst: &Instance) -> SentenceTerms {
    let k = model.num_labels();
    let lat = model.lattice_from_ids(&inst.feats);
    let fb = ForwardBackward::new(&lat);
    let n = inst.gold.len();
    let mut node = vec![0.0; n * k];
    for t in 0..n {
        for y in 0..k {
            node[t * k + y] = fb.node_marginal(t, y);
        }
    }
    let mut edge = vec![0.0; k * k];
    for t in 1..n {
        for i in 0..k {
            for j in 0..k {
                edge[i * k + j] += fb.edge_marginal(&lat, t, i, j);
            }
        }
    }
    SentenceTerms { nll: fb.log_z - lat.path_score(&inst.gold), node, edge }
}

/// Objective and gradient over `instances`. Per-sentence work runs in
/// parallel; accumulation is sequential in sentence order, so the result is
/// bit-identical for any thread count.
pub(crate) fn objective(model: &CrfModel, instances: &[Instance], l2: f64) -> (f64, Gradient) {
    let k = model.num_labels();
    let terms: Vec<SentenceTerms> = instances.par_iter().map(|i| sentence_terms(model, i)).collect();

    let mut f = 0.0;
    let mut obs = vec![0.0; model.obs_weights().len()];
    let mut trans = vec![0.0; k * k];
    for (inst, term) in instances.iter().zip(&terms) {
        f += term.nll;
        for (t, fs) in inst.feats.iter().enumerate() {
            let marg = &term.node[t * k..(t + 1) * k];
            for &feat in fs {
                let row = &mut obs[feat as usize * k..(feat as usize + 1) * k];
                for (g, m) in row.iter_mut().zip(marg) {
                    *g += m;
                }
                row[inst.gold[t]] -= 1.0;
            }
            if t > 0 {
                trans[inst.gold[t - 1] * k + inst.gold[t]] -= 1.0;
            }
        }
        for (g, e) in trans.iter_mut().zip(&term.edge) {
            *g += e;
        }
    }

    if l2 > 0.0 {
        let mut sq = 0.0;
        for (g, w) in obs.iter_mut().zip(model.obs_weights()) {
            *g += l2 * w;
            sq += w * w;
        }
        for (g, w) in trans.iter_mut().zip(model.trans_weights()) {
            *g += l2 * w;
            sq += w * w;
        }
        f += 0.5 * l2 * sq;
    }
    (f, Gradient { obs, trans })
}

/// Negative log-likelihood of `batch` under `model` plus `l2/2 * |w|^2`, and
/// its gradient: expected minus empirical feature counts plus `l2 * w`.
pub fn nll_and_gradient(
    model: &CrfModel,
    batch: &[(Sentence, Vec<String>)],
    l2_lambda: f64,
) -> Result<(f64, Gradient), CrfError> {
    let instances = batch
        .iter()
        .map(|(s, tags)| {
            let gold = tags
                .iter()
                .map(|t| model.label_id(t).ok_or_else(|| CrfError::UnknownLabel(t.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Instance { feats: model.featurize(s), gold })
        })
        .collect::<Result<Vec<_>, CrfError>>()?;
    Ok(objective(model, &instances, l2_lambda))
}

pub fn train(corpus: &Corpus, cfg: &TrainConfig, templates: &FeatureTemplateSet) -> Result<CrfModel, CrfError> {
    train_with_log(corpus, cfg, templates).map(|(m, _)| m)
}

const INITIAL_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-30;

/// Full-batch gradient descent from zero weights.
///
/// A step that fails to lower the objective is rejected and the step size
/// halved before retrying; the step size never grows back. Training stops
/// after `max_iter` accepted steps, when an accepted step improves the
/// objective by a relative amount below `tol`, or when the step size
/// underflows.
pub fn train_with_log(
    corpus: &Corpus,
    cfg: &TrainConfig,
    templates: &FeatureTemplateSet,
) -> Result<(CrfModel, TrainLog), CrfError> {
    cfg.check()?;
    if corpus.token_count() == 0 {
        return Err(CrfError::EmptyCorpus);
    }
    let scheme = corpus.scheme().ok_or(SchemeError::Unvalidated)?;
    let labels = scheme.label_set(&corpus.entity_types());

    let mut index = FeatureIndex::new();
    let mut instances = Vec::with_capacity(corpus.len());
    for s in corpus.sentences() {
        let feats =
            extract_features(s, templates).iter().map(|fs| fs.iter().map(|f| index.intern(f)).collect()).collect();
        let gold = s
            .tags()
            .iter()
            .map(|t| labels.iter().position(|l| l == t).ok_or_else(|| CrfError::UnknownLabel(t.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        instances.push(Instance { feats, gold });
    }

    let mut model = CrfModel::new(labels, scheme, index, templates.clone());
    let (mut f, mut grad) = objective(&model, &instances, cfg.l2_lambda);
    let mut log = TrainLog { initial_objective: f, ..TrainLog::default() };
    let mut step = INITIAL_STEP;
    let mut attempt = 0;

    while log.accepted < cfg.max_iter && step >= MIN_STEP {
        attempt += 1;
        let mut candidate = model.clone();
        for (w, g) in candidate.obs_weights_mut().iter_mut().zip(&grad.obs) {
            *w -= step * g;
        }
        for (w, g) in candidate.trans_weights_mut().iter_mut().zip(&grad.trans) {
            *w -= step * g;
        }
        let (f_new, grad_new) = objective(&candidate, &instances, cfg.l2_lambda);
        let accepted = f_new.is_finite() && f_new < f;
        log.records.push(IterationRecord { iteration: attempt, objective: f_new, step, accepted });
        if !accepted {
            step *= 0.5;
            continue;
        }
        log.accepted += 1;
        let rel = (f - f_new) / f.abs().max(f64::MIN_POSITIVE);
        model = candidate;
        f = f_new;
        grad = grad_new;
        if rel < cfg.tol {
            log.converged = true;
            break;
        }
    }
    log.final_objective = f;
    Ok((model, log))
}
