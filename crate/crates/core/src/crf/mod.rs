//! Linear-chain conditional random field.
//!
//! A sentence of length `T` over `K` labels is scored as
//!
//! ```text
//! score(y) = sum_t node(t, y_t) + sum_{t>0} trans(y_{t-1}, y_t)
//! node(t, y) = sum_{f in features(t)} obs[f, y]
//! ```
//!
//! and `P(y | x) = exp(score(y)) / Z`. Training minimizes the negative
//! log-likelihood plus an L2 penalty with deterministic full-batch gradient
//! descent; decoding is Viterbi.

mod features;
mod io;
mod lattice;
mod train;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{Corpus, Sentence};
use crate::schemes::{Scheme, SchemeError};

pub use features::{extract_features, word_shape, FeatureIndex, FeatureTemplateSet, Template, BOS, EOS};
pub use io::{format_hex_float, load_model, model_from_str, model_to_string, parse_hex_float, save_model};
pub use lattice::{log_partition, viterbi_path, ForwardBackward, Lattice};
pub use train::{nll_and_gradient, train, train_with_log, Gradient, IterationRecord, TrainConfig, TrainLog};

#[derive(Debug, Error)]
pub enum CrfError {
    #[error("cannot train on an empty corpus")]
    EmptyCorpus,
    #[error("label `{0}` is not in the model label set")]
    UnknownLabel(String),
    #[error("unknown feature template `{0}`")]
    UnknownTemplate(String),
    #[error("invalid training config: {0}")]
    Config(String),
    #[error("model file line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Labels, feature index and weights of a trained tagger.
#[derive(Clone, Debug, PartialEq)]
pub struct CrfModel {
    labels: Vec<String>,
    scheme: Scheme,
    feature_index: FeatureIndex,
    /// Row-major `|features| x |labels|`.
    obs_weights: Vec<f64>,
    /// Row-major `|labels| x |labels|`, `[from][to]`.
    trans_weights: Vec<f64>,
    templates: FeatureTemplateSet,
}

impl CrfModel {
    /// All-zero model. `labels[0]` should be `"O"` so that ties decode to it.
    pub fn new(
        labels: Vec<String>,
        scheme: Scheme,
        feature_index: FeatureIndex,
        templates: FeatureTemplateSet,
    ) -> Self {
        let k = labels.len();
        let f = feature_index.len();
        CrfModel {
            labels,
            scheme,
            feature_index,
            obs_weights: vec![0.0; f * k],
            trans_weights: vec![0.0; k * k],
            templates,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn label_id(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn feature_index(&self) -> &FeatureIndex {
        &self.feature_index
    }

    pub fn templates(&self) -> &FeatureTemplateSet {
        &self.templates
    }

    pub fn obs_weights(&self) -> &[f64] {
        &self.obs_weights
    }

    pub fn obs_weights_mut(&mut self) -> &mut [f64] {
        &mut self.obs_weights
    }

    pub fn trans_weights(&self) -> &[f64] {
        &self.trans_weights
    }

    pub fn trans_weights_mut(&mut self) -> &mut [f64] {
        &mut self.trans_weights
    }

    pub fn obs(&self, feature: u32, label: usize) -> f64 {
        self.obs_weights[feature as usize * self.labels.len() + label]
    }

    pub fn set_obs(&mut self, feature: u32, label: usize, w: f64) {
        let k = self.labels.len();
        self.obs_weights[feature as usize * k + label] = w;
    }

    pub fn trans(&self, from: usize, to: usize) -> f64 {
        self.trans_weights[from * self.labels.len() + to]
    }

    pub fn set_trans(&mut self, from: usize, to: usize, w: f64) {
        let k = self.labels.len();
        self.trans_weights[from * k + to] = w;
    }

    /// Ids of the features of each position that the index knows.
    pub fn featurize(&self, sentence: &Sentence) -> Vec<Vec<u32>> {
        extract_features(sentence, &self.templates)
            .iter()
            .map(|fs| fs.iter().filter_map(|f| self.feature_index.get(f)).collect())
            .collect()
    }

    pub(crate) fn lattice_from_ids(&self, feats: &[Vec<u32>]) -> Lattice {
        let k = self.labels.len();
        let mut node = vec![0.0; feats.len() * k];
        for (t, fs) in feats.iter().enumerate() {
            let row = &mut node[t * k..(t + 1) * k];
            for &f in fs {
                let w = &self.obs_weights[f as usize * k..(f as usize + 1) * k];
                for (r, w) in row.iter_mut().zip(w) {
                    *r += w;
                }
            }
        }
        Lattice::new(feats.len(), k, node, self.trans_weights.clone())
    }

    pub(crate) fn parts(&self) -> (&FeatureIndex, &[f64], &[f64]) {
        (&self.feature_index, &self.obs_weights, &self.trans_weights)
    }

    pub(crate) fn from_parts(
        labels: Vec<String>,
        scheme: Scheme,
        feature_index: FeatureIndex,
        obs_weights: Vec<f64>,
        trans_weights: Vec<f64>,
        templates: FeatureTemplateSet,
    ) -> Self {
        debug_assert_eq!(obs_weights.len(), feature_index.len() * labels.len());
        debug_assert_eq!(trans_weights.len(), labels.len() * labels.len());
        CrfModel { labels, scheme, feature_index, obs_weights, trans_weights, templates }
    }
}

/// Node and transition log-potentials of a sentence given its feature
/// strings. Features missing from the index contribute nothing.
pub fn log_potentials(model: &CrfModel, features: &[Vec<String>]) -> Lattice {
    let ids: Vec<Vec<u32>> =
        features.iter().map(|fs| fs.iter().filter_map(|f| model.feature_index.get(f)).collect()).collect();
    model.lattice_from_ids(&ids)
}

/// Most probable tag sequence for `sentence`.
pub fn viterbi(model: &CrfModel, sentence: &Sentence) -> Vec<String> {
    let lat = model.lattice_from_ids(&model.featurize(sentence));
    let (path, _) = viterbi_path(&lat);
    path.into_iter().map(|y| model.labels[y].clone()).collect()
}

/// Replace every tag of `corpus` with the model's prediction. The result
/// is validated under the model's scheme.
pub fn tag_corpus(model: &CrfModel, corpus: &Corpus) -> Result<Corpus, SchemeError> {
    let sentences: Vec<Sentence> = corpus.sentences().par_iter().map(|s| s.with_tags(viterbi(model, s))).collect();
    let mut out = Corpus::new(sentences, corpus.column_spec().clone());
    out = out.validate(model.scheme)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sentence() -> Sentence {
        Sentence::from_pairs(&[("Le", "O"), ("roi", "O"), ("Louis", "I-PER")]).unwrap()
    }

    fn model_for(s: &Sentence, templates: FeatureTemplateSet) -> CrfModel {
        let mut idx = FeatureIndex::new();
        for fs in extract_features(s, &templates) {
            for f in fs {
                idx.intern(&f);
            }
        }
        CrfModel::new(Scheme::Io.label_set(&["PER"]), Scheme::Io, idx, templates)
    }

    #[test]
    fn zero_model_zero_lattice() {
        let s = sentence();
        let m = model_for(&s, FeatureTemplateSet::standard());
        let lat = log_potentials(&m, &extract_features(&s, m.templates()));
        for t in 0..3 {
            for y in 0..2 {
                assert_eq!(lat.node(t, y), 0.0);
            }
        }
        assert_eq!(viterbi(&m, &s), ["O", "O", "O"]);
    }

    #[test]
    fn bias_weight_reaches_every_node() {
        let s = sentence();
        let mut m = model_for(&s, FeatureTemplateSet::new(vec![Template::Bias]).unwrap());
        let bias = m.feature_index().get("bias").unwrap();
        m.set_obs(bias, 0, 2.0);
        let lat = log_potentials(&m, &extract_features(&s, m.templates()));
        for t in 0..3 {
            assert_eq!(lat.node(t, 0), 2.0);
            assert_eq!(lat.node(t, 1), 0.0);
        }
    }

    #[test]
    fn lattice_matches_naive_sum() {
        let s = sentence();
        let mut m = model_for(&s, FeatureTemplateSet::standard());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for w in m.obs_weights_mut() {
            *w = rng.random_range(-1.0..1.0);
        }
        let feats = extract_features(&s, m.templates());
        // Include one unseen feature; it must be ignored.
        let mut with_unknown = feats.clone();
        with_unknown[1].push("w0=inconnu".into());
        let lat = log_potentials(&m, &with_unknown);
        for (t, fs) in feats.iter().enumerate() {
            for y in 0..m.num_labels() {
                let mut naive = 0.0;
                for f in fs {
                    for (id, name) in m.feature_index().iter() {
                        if name == f {
                            naive += m.obs(id, y);
                        }
                    }
                }
                assert!((lat.node(t, y) - naive).abs() < 1e-12);
            }
        }
    }
}
