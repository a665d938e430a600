//! Label-wise token replacement (LWTR) and shuffle within segments (SIS).
//!
//! Randomness comes from ChaCha8 seeded with a 64-bit integer. Each source
//! sentence gets its own generator, seeded from the configuration seed and
//! the sentence index, so output is independent of scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{Corpus, Sentence};
use crate::schemes::{self, Scheme, SchemeError};

#[derive(Debug, Error, PartialEq)]
pub enum AugmentError {
    #[error("tag `{0}` has no entry in the token distribution")]
    MissingTagKey(String),
    #[error("invalid augmentation config: {0}")]
    Config(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// The random decisions augmentation needs.
///
/// Implemented for every [`rand::Rng`]; tests substitute scripted sources.
pub trait Draw {
    /// `true` with probability `p`.
    fn bernoulli(&mut self, p: f64) -> bool;
    /// Uniform integer in `0..n`, `n >= 1`.
    fn below(&mut self, n: u64) -> u64;
}

impl<R: Rng + ?Sized> Draw for R {
    fn bernoulli(&mut self, p: f64) -> bool {
        // 53-bit uniform in [0, 1).
        self.random::<f64>() < p
    }

    fn below(&mut self, n: u64) -> u64 {
        self.random_range(0..n)
    }
}

/// SplitMix64 finalizer over `seed` and `index`.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Surface forms observed under each full tag string.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelTokenDistribution {
    table: BTreeMap<String, Vec<(String, u64)>>,
}

impl LabelTokenDistribution {
    pub fn get(&self, tag: &str) -> Option<&[(String, u64)]> {
        self.table.get(tag).map(Vec::as_slice)
    }

    pub fn count(&self, tag: &str, surface: &str) -> u64 {
        self.get(tag).and_then(|v| v.iter().find(|(s, _)| s == surface)).map_or(0, |(_, n)| *n)
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.table.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Draw a surface for `tag`: one uniform integer below the total count,
    /// located in the cumulative counts (surfaces in lexicographic order).
    pub fn sample<D: Draw + ?Sized>(&self, tag: &str, rng: &mut D) -> Result<&str, AugmentError> {
        let entries = self.get(tag).ok_or_else(|| AugmentError::MissingTagKey(tag.to_string()))?;
        let total: u64 = entries.iter().map(|(_, n)| n).sum();
        let mut r = rng.below(total);
        for (surface, n) in entries {
            if r < *n {
                return Ok(surface);
            }
            r -= n;
        }
        unreachable!("draw below total count")
    }
}

/// Count every surface under its full tag (`B-ORG` and `I-ORG` are distinct keys).
pub fn build_distribution(corpus: &Corpus) -> LabelTokenDistribution {
    let mut counts: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    for tok in corpus.tokens() {
        *counts.entry(tok.tag().to_string()).or_default().entry(tok.surface().to_string()).or_default() += 1;
    }
    LabelTokenDistribution { table: counts.into_iter().map(|(tag, m)| (tag, m.into_iter().collect())).collect() }
}

/// Replace each token's surface, with probability `p`, by a draw from the
/// distribution of its tag. Tags and attributes never change.
pub fn lwtr_sentence<D: Draw + ?Sized>(
    sentence: &Sentence,
    dist: &LabelTokenDistribution,
    p: f64,
    rng: &mut D,
) -> Result<Sentence, AugmentError> {
    let mut out = sentence.clone();
    for tok in out.tokens_mut() {
        if dist.get(tok.tag()).is_none() {
            return Err(AugmentError::MissingTagKey(tok.tag().to_string()));
        }
        if rng.bernoulli(p) {
            let surface = dist.sample(tok.tag(), rng)?.to_string();
            tok.set_surface(surface);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    Entity(String),
    Outside,
}

/// A maximal run of one label: an entity span, or a run of `O` tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub kind: SegmentKind,
}

/// Partition a sentence into entity spans and the `O` runs between them.
pub fn segments(sentence: &Sentence, scheme: Scheme) -> Result<Vec<Segment>, SchemeError> {
    let spans = schemes::sentence_spans(sentence, scheme)?;
    let mut out = Vec::with_capacity(2 * spans.len() + 1);
    let mut cursor = 0;
    for span in spans {
        if span.start > cursor {
            out.push(Segment { start: cursor, end: span.start - 1, kind: SegmentKind::Outside });
        }
        cursor = span.end + 1;
        out.push(Segment { start: span.start, end: span.end, kind: SegmentKind::Entity(span.etype) });
    }
    if cursor < sentence.len() {
        out.push(Segment { start: cursor, end: sentence.len() - 1, kind: SegmentKind::Outside });
    }
    Ok(out)
}

/// Shuffle tokens inside segments. Each segment is chosen with probability
/// `p`; a chosen segment is permuted uniformly (Fisher-Yates) and, if it is
/// an entity, its tags are rewritten positionally for `scheme`.
pub fn sis_sentence<D: Draw + ?Sized>(
    sentence: &Sentence,
    scheme: Scheme,
    p: f64,
    rng: &mut D,
) -> Result<Sentence, SchemeError> {
    let mut out = sentence.clone();
    for seg in segments(sentence, scheme)? {
        if !rng.bernoulli(p) {
            continue;
        }
        let toks = &mut out.tokens_mut()[seg.start..=seg.end];
        for i in (1..toks.len()).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            toks.swap(i, j);
        }
        match seg.kind {
            SegmentKind::Outside => {
                for t in toks.iter_mut() {
                    t.set_tag("O".to_string());
                }
            }
            SegmentKind::Entity(etype) => {
                let mut tags = vec![String::new(); toks.len()];
                schemes::write_span(&mut tags, &etype, scheme);
                for (t, tag) in toks.iter_mut().zip(tags) {
                    t.set_tag(tag);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Technique {
    Lwtr,
    Sis,
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Technique::Lwtr => "lwtr",
            Technique::Sis => "sis",
        })
    }
}

impl FromStr for Technique {
    type Err = AugmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lwtr" => Ok(Technique::Lwtr),
            "sis" => Ok(Technique::Sis),
            _ => Err(AugmentError::Config(format!("unknown technique `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AugmentConfig {
    pub techniques: Vec<Technique>,
    pub p: f64,
    pub copies_per_sentence: usize,
    pub seed: u64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig { techniques: vec![Technique::Lwtr, Technique::Sis], p: 0.5, copies_per_sentence: 1, seed: 0 }
    }
}

impl AugmentConfig {
    pub fn check(&self) -> Result<(), AugmentError> {
        if self.techniques.is_empty() {
            return Err(AugmentError::Config("no technique selected".into()));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(AugmentError::Config(format!("p = {} is outside (0, 1]", self.p)));
        }
        if self.copies_per_sentence == 0 {
            return Err(AugmentError::Config("copies must be at least 1".into()));
        }
        Ok(())
    }

    fn techniques_sorted(&self) -> Vec<Technique> {
        let mut t = self.techniques.clone();
        t.sort();
        t.dedup();
        t
    }
}

/// Original sentences followed by `copies_per_sentence` augmented copies of
/// each, in source order. Each copy applies one enabled technique chosen
/// uniformly.
pub fn augment_corpus(corpus: &Corpus, cfg: &AugmentConfig) -> Result<Corpus, AugmentError> {
    cfg.check()?;
    let scheme = corpus.scheme().ok_or(SchemeError::Unvalidated)?;
    let techniques = cfg.techniques_sorted();
    let dist = build_distribution(corpus);

    let copies: Vec<Vec<Sentence>> = corpus
        .sentences()
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = seeded_rng(mix_seed(cfg.seed, i as u64));
            (0..cfg.copies_per_sentence)
                .map(|_| {
                    let pick = techniques[rng.below(techniques.len() as u64) as usize];
                    match pick {
                        Technique::Lwtr => lwtr_sentence(s, &dist, cfg.p, &mut rng),
                        Technique::Sis => sis_sentence(s, scheme, cfg.p, &mut rng).map_err(|e| e.in_sentence(i).into()),
                    }
                })
                .collect()
        })
        .collect::<Result<_, AugmentError>>()?;

    let mut sentences = corpus.sentences().to_vec();
    sentences.extend(copies.into_iter().flatten());
    Ok(corpus.with_sentences(sentences))
}

#[cfg(test)]
mod tests {
    use std::collections::VecDeque;

    use super::*;
    use crate::corpus::{parse_conll, ColumnSpec};

    /// Replays a fixed list of decisions.
    #[derive(Default)]
    struct Script {
        coins: VecDeque<bool>,
        ints: VecDeque<u64>,
    }

    impl Script {
        fn new(coins: &[bool], ints: &[u64]) -> Self {
            Script { coins: coins.iter().copied().collect(), ints: ints.iter().copied().collect() }
        }
    }

    // A local type, so this impl does not clash with the blanket impl over `Rng`.
    impl Draw for Script {
        fn bernoulli(&mut self, _p: f64) -> bool {
            self.coins.pop_front().expect("script ran out of coins")
        }
        fn below(&mut self, n: u64) -> u64 {
            let v = self.ints.pop_front().expect("script ran out of ints");
            assert!(v < n);
            v
        }
    }

    const FIG_BIOES: &str = "M. O\nBrandi S-PER\n, O\nProfesseur O\nau O\nlycée B-ORG\nde I-ORG\nSaint-Brieuc E-ORG\n";

    fn fig() -> Corpus {
        parse_conll(FIG_BIOES, &ColumnSpec::default()).unwrap().validate(Scheme::Bioes).unwrap()
    }

    #[test]
    fn distribution_of_example() {
        let d = build_distribution(&fig());
        assert_eq!(d.get("S-PER").unwrap(), &[("Brandi".to_string(), 1)]);
        assert_eq!(d.get("B-ORG").unwrap(), &[("lycée".to_string(), 1)]);
        for s in ["M.", ",", "Professeur", "au"] {
            assert_eq!(d.count("O", s), 1);
        }
        assert_eq!(d.get("O").unwrap().len(), 4);
        assert!(build_distribution(&Corpus::empty()).is_empty());
    }

    #[test]
    fn distribution_counts_repeats() {
        let c = parse_conll("de I-ORG\n\nla O\nde I-ORG\n", &ColumnSpec::default()).unwrap();
        assert_eq!(build_distribution(&c).count("I-ORG", "de"), 2);
    }

    #[test]
    fn lwtr_reproduces_example() {
        // Dictionary built from a corpus that also contains the replacement words.
        let extra = "Louis S-PER\n\nChâteau B-ORG\nde I-ORG\nVersailles E-ORG\n";
        let c = parse_conll(&format!("{FIG_BIOES}\n{extra}"), &ColumnSpec::default()).unwrap();
        let d = build_distribution(&c);
        // S-PER: [Brandi, Louis] -> index 1; B-ORG: [Château, lycée] -> 0;
        // E-ORG: [Saint-Brieuc, Versailles] -> 1.
        let coins = [false, true, false, false, false, true, false, true];
        let mut script = Script::new(&coins, &[1, 0, 1]);
        let c = fig();
        let s = &c.sentences()[0];
        let out = lwtr_sentence(s, &d, 0.5, &mut script).unwrap();
        assert_eq!(out.surfaces(), ["M.", "Louis", ",", "Professeur", "au", "Château", "de", "Versailles"]);
        assert_eq!(out.tags(), s.tags());
    }

    #[test]
    fn lwtr_no_draws_is_identity() {
        let c = fig();
        let s = &c.sentences()[0];
        let d = build_distribution(&fig());
        let mut script = Script::new(&[false; 8], &[]);
        assert_eq!(&lwtr_sentence(s, &d, 0.5, &mut script).unwrap(), s);
    }

    #[test]
    fn lwtr_singletons_are_identity() {
        let c = parse_conll("Brandi S-PER\nvit O\n", &ColumnSpec::default()).unwrap();
        let d = build_distribution(&c);
        let s = &c.sentences()[0];
        assert_eq!(&lwtr_sentence(s, &d, 1.0, &mut seeded_rng(3)).unwrap(), s);
    }

    #[test]
    fn lwtr_missing_tag() {
        let d = build_distribution(&fig());
        let s = Sentence::from_pairs(&[("x", "S-LOC")]).unwrap();
        let err = lwtr_sentence(&s, &d, 1.0, &mut seeded_rng(0)).unwrap_err();
        assert_eq!(err, AugmentError::MissingTagKey("S-LOC".into()));
    }

    #[test]
    fn sis_reproduces_example() {
        // Segments: [M.] [Brandi] [, Professeur au] [lycée de Saint-Brieuc].
        // Only the ORG segment is selected; swaps (2<->0) then (1<->0).
        let mut script = Script::new(&[false, false, false, true], &[0, 0]);
        let c = fig();
        let s = &c.sentences()[0];
        let out = sis_sentence(s, Scheme::Bioes, 0.5, &mut script).unwrap();
        assert_eq!(out.surfaces(), ["M.", "Brandi", ",", "Professeur", "au", "de", "Saint-Brieuc", "lycée"]);
        assert_eq!(out.tags(), s.tags());
    }

    #[test]
    fn sis_identity_cases() {
        let c = fig();
        let s = &c.sentences()[0];
        let mut none = Script::new(&[false; 4], &[]);
        assert_eq!(&sis_sentence(s, Scheme::Bioes, 0.5, &mut none).unwrap(), s);

        let single = Sentence::from_pairs(&[("Jean", "S-PER"), ("vit", "O"), ("Paris", "S-LOC")]).unwrap();
        let mut rng = seeded_rng(11);
        assert_eq!(sis_sentence(&single, Scheme::Bioes, 1.0, &mut rng).unwrap(), single);
    }

    #[test]
    fn sis_repairs_selected_entity_tags() {
        let s = Sentence::from_pairs(&[("a", "I-X"), ("b", "I-X")]).unwrap();
        let mut script = Script::new(&[true], &[0]);
        let out = sis_sentence(&s, Scheme::Bio, 1.0, &mut script).unwrap();
        assert_eq!(out.surfaces(), ["b", "a"]);
        assert_eq!(out.tags(), ["B-X", "I-X"]);
    }

    #[test]
    fn segments_partition() {
        let segs = segments(&fig().sentences()[0], Scheme::Bioes).unwrap();
        let bounds: Vec<_> = segs.iter().map(|s| (s.start, s.end)).collect();
        assert_eq!(bounds, [(0, 0), (1, 1), (2, 4), (5, 7)]);
    }

    #[test]
    fn corpus_doubles_with_defaults() {
        let mut sentences = Vec::new();
        for i in 0..100 {
            sentences.push(
                Sentence::from_pairs(&[
                    (format!("w{i}"), "O"),
                    (format!("N{}", i % 7), "B-PER"),
                    (format!("M{}", i % 5), "E-PER"),
                ])
                .unwrap(),
            );
        }
        let c = Corpus::new(sentences, ColumnSpec::default()).validate(Scheme::Bioes).unwrap();
        let cfg = AugmentConfig { seed: 9, ..AugmentConfig::default() };
        let out = augment_corpus(&c, &cfg).unwrap();
        assert_eq!(out.len(), 200);
        assert_eq!(&out.sentences()[..100], c.sentences());
        assert_eq!(out, augment_corpus(&c, &cfg).unwrap());
    }

    #[test]
    fn config_checks() {
        let bad = AugmentConfig { p: 0.0, ..AugmentConfig::default() };
        assert!(bad.check().is_err());
        let bad = AugmentConfig { techniques: vec![], ..AugmentConfig::default() };
        assert!(bad.check().is_err());
        let bad = AugmentConfig { copies_per_sentence: 0, ..AugmentConfig::default() };
        assert!(bad.check().is_err());
        assert!(
            augment_corpus(&parse_conll("a O\n", &ColumnSpec::default()).unwrap(), &AugmentConfig::default()).is_err()
        );
    }

    #[test]
    fn mix_seed_spreads() {
        assert_ne!(mix_seed(7, 0), mix_seed(7, 1));
        assert_ne!(mix_seed(7, 0), mix_seed(8, 0));
    }
}
