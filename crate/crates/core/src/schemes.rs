//! Tagging schemes and the span view of a tag sequence.
//!
//! Every scheme is a different surface encoding of the same underlying
//! object: a sorted list of non-overlapping [`EntitySpan`]s. Decoding follows
//! the chunking rules of the conlleval script, so that an ill-formed sequence
//! (an `I-` with no opener, a type switch in the middle of a run) still maps
//! to a well-defined span list.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{Corpus, Sentence};

/// Token-level annotation scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Io,
    Bio,
    Bioes,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Io, Scheme::Bio, Scheme::Bioes];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Io => "IO",
            Scheme::Bio => "BIO",
            Scheme::Bioes => "BIOES",
        }
    }

    /// Whether `prefix` may appear in a sequence encoded with this scheme.
    pub fn allows(self, prefix: Prefix) -> bool {
        match self {
            Scheme::Io => prefix == Prefix::I,
            Scheme::Bio => matches!(prefix, Prefix::I | Prefix::B),
            Scheme::Bioes => true,
        }
    }

    fn prefixes(self) -> &'static [Prefix] {
        match self {
            Scheme::Io => &[Prefix::I],
            Scheme::Bio => &[Prefix::B, Prefix::I],
            Scheme::Bioes => &[Prefix::B, Prefix::E, Prefix::I, Prefix::S],
        }
    }

    /// Number of distinct tags for `types` entity types: `T+1`, `2T+1` or `4T+1`.
    pub fn tag_count(self, types: usize) -> usize {
        self.prefixes().len() * types + 1
    }

    /// Full tag inventory for the given entity types, `"O"` first and the
    /// remaining tags in lexicographic order.
    pub fn label_set<S: AsRef<str>>(self, types: &[S]) -> Vec<String> {
        let mut tags: Vec<String> = types
            .iter()
            .flat_map(|t| self.prefixes().iter().map(move |p| format!("{}-{}", p.as_char(), t.as_ref())))
            .collect();
        tags.sort();
        tags.dedup();
        tags.insert(0, "O".to_string());
        tags
    }

    /// Guess the scheme a tag sequence was written in: any `E-`/`S-` means
    /// BIOES, otherwise any `B-` means BIO, otherwise IO.
    pub fn infer<'a, I>(tags: I) -> Scheme
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut scheme = Scheme::Io;
        for tag in tags {
            match Tag::parse(tag) {
                Some(Tag::Entity { prefix: Prefix::E | Prefix::S, .. }) => return Scheme::Bioes,
                Some(Tag::Entity { prefix: Prefix::B, .. }) => scheme = Scheme::Bio,
                _ => {}
            }
        }
        scheme
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "IO" => Ok(Scheme::Io),
            "BIO" => Ok(Scheme::Bio),
            "BIOES" => Ok(Scheme::Bioes),
            _ => Err(SchemeError::UnknownScheme(s.to_string())),
        }
    }
}

/// Position marker of an entity tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prefix {
    I,
    B,
    E,
    S,
}

impl Prefix {
    pub fn as_char(self) -> char {
        match self {
            Prefix::I => 'I',
            Prefix::B => 'B',
            Prefix::E => 'E',
            Prefix::S => 'S',
        }
    }
}

/// A parsed tag string, borrowing the entity type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag<'a> {
    Outside,
    Entity { prefix: Prefix, etype: &'a str },
}

impl<'a> Tag<'a> {
    /// Parse `"O"` or `<I|B|E|S>-<TYPE>` where the type is nonempty uppercase
    /// ASCII alphanumeric. Anything else is `None`.
    pub fn parse(s: &'a str) -> Option<Tag<'a>> {
        if s == "O" {
            return Some(Tag::Outside);
        }
        let (head, etype) = s.split_once('-')?;
        let prefix = match head {
            "I" => Prefix::I,
            "B" => Prefix::B,
            "E" => Prefix::E,
            "S" => Prefix::S,
            _ => return None,
        };
        if etype.is_empty() || !etype.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit()) {
            return None;
        }
        Some(Tag::Entity { prefix, etype })
    }

    pub fn etype(&self) -> Option<&'a str> {
        match *self {
            Tag::Outside => None,
            Tag::Entity { etype, .. } => Some(etype),
        }
    }
}

/// Whether `s` is a syntactically valid tag in any scheme.
pub fn is_valid_tag(s: &str) -> bool {
    Tag::parse(s).is_some()
}

/// A typed entity covering tokens `start..=end` of one sentence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub etype: String,
}

impl EntitySpan {
    pub fn new(start: usize, end: usize, etype: impl Into<String>) -> Self {
        EntitySpan { start, end, etype: etype.into() }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for EntitySpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.start, self.end, self.etype)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DecodeMode {
    Strict,
    #[default]
    Lenient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// Not a tag of this scheme at all.
    InvalidTag,
    /// `I-` with no opener of the same type before it.
    OrphanInside,
    /// `E-` with no opener of the same type before it.
    OrphanEnd,
    /// Continuation tag whose type differs from the open entity.
    TypeMismatch,
    /// BIOES entity that is never closed by `E-`.
    UnterminatedEntity,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::InvalidTag => "invalid-tag",
            ViolationKind::OrphanInside => "orphan-inside",
            ViolationKind::OrphanEnd => "orphan-end",
            ViolationKind::TypeMismatch => "type-mismatch",
            ViolationKind::UnterminatedEntity => "unterminated-entity",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub position: usize,
    pub found: String,
    pub reason: ViolationKind,
}

impl Violation {
    fn new(position: usize, found: &str, reason: ViolationKind) -> Self {
        Violation { position, found: found.to_string(), reason }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "position {}: {} ({})", self.position, self.found, self.reason)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SchemeError {
    #[error("unknown scheme `{0}` (expected io, bio or bioes)")]
    UnknownScheme(String),
    #[error("tag `{tag}` at position {position} is not valid under {scheme}")]
    InvalidTagForScheme { position: usize, tag: String, scheme: Scheme },
    #[error("{} scheme violation(s), first at {}", .0.len(), .0[0])]
    Violations(Vec<Violation>),
    #[error("spans {0} and {1} overlap")]
    OverlappingSpans(EntitySpan, EntitySpan),
    #[error("span {span} does not fit in a sequence of length {length}")]
    SpanOutOfRange { span: EntitySpan, length: usize },
    #[error("corpus has not been validated against a scheme")]
    Unvalidated,
    #[error("sentence {sentence}: {source}")]
    InSentence {
        sentence: usize,
        #[source]
        source: Box<SchemeError>,
    },
}

fn parse_for_scheme<'a>(tag: &'a str, position: usize, scheme: Scheme) -> Result<Tag<'a>, SchemeError> {
    match Tag::parse(tag) {
        Some(Tag::Entity { prefix, .. }) if !scheme.allows(prefix) => {}
        Some(t) => return Ok(t),
        None => {}
    }
    Err(SchemeError::InvalidTagForScheme { position, tag: tag.to_string(), scheme })
}

// conlleval's endOfChunk, restricted to the prefixes we accept.
fn chunk_ends(prev: Tag<'_>, cur: Tag<'_>) -> bool {
    match prev {
        Tag::Outside => false,
        Tag::Entity { prefix: Prefix::E | Prefix::S, .. } => true,
        Tag::Entity { etype: prev_type, .. } => match cur {
            Tag::Outside => true,
            Tag::Entity { prefix: Prefix::B | Prefix::S, .. } => true,
            Tag::Entity { etype, .. } => etype != prev_type,
        },
    }
}

// conlleval's startOfChunk.
fn chunk_starts(prev: Tag<'_>, cur: Tag<'_>) -> bool {
    match cur {
        Tag::Outside => false,
        Tag::Entity { prefix: Prefix::B | Prefix::S, .. } => true,
        Tag::Entity { etype, .. } => match prev {
            Tag::Outside => true,
            Tag::Entity { prefix: Prefix::E | Prefix::S, .. } => true,
            Tag::Entity { etype: prev_type, .. } => etype != prev_type,
        },
    }
}

/// Recover the entity spans of a tag sequence.
///
/// Every tag must use a prefix the scheme allows. In lenient mode the
/// conlleval chunking rules apply; strict mode first runs [`validate`] and
/// fails if it reports anything.
pub fn decode_spans<S: AsRef<str>>(
    tags: &[S],
    scheme: Scheme,
    mode: DecodeMode,
) -> Result<Vec<EntitySpan>, SchemeError> {
    let parsed =
        tags.iter().enumerate().map(|(i, t)| parse_for_scheme(t.as_ref(), i, scheme)).collect::<Result<Vec<_>, _>>()?;
    if mode == DecodeMode::Strict {
        let violations = validate(tags, scheme);
        if !violations.is_empty() {
            return Err(SchemeError::Violations(violations));
        }
    }
    Ok(chunk(&parsed))
}

fn chunk(tags: &[Tag<'_>]) -> Vec<EntitySpan> {
    let mut spans = Vec::new();
    let mut open: Option<(usize, &str)> = None;
    let mut prev = Tag::Outside;
    for (i, &cur) in tags.iter().enumerate() {
        if chunk_ends(prev, cur) {
            if let Some((start, etype)) = open.take() {
                spans.push(EntitySpan::new(start, i - 1, etype));
            }
        }
        if chunk_starts(prev, cur) {
            open = cur.etype().map(|t| (i, t));
        }
        prev = cur;
    }
    if let Some((start, etype)) = open {
        spans.push(EntitySpan::new(start, tags.len() - 1, etype));
    }
    spans
}

/// Write `spans` as a tag sequence of the given length.
///
/// For BIO and BIOES this is the exact inverse of lenient decoding. IO
/// cannot mark boundaries, so two adjacent spans of one type decode back as
/// a single merged span.
pub fn encode_spans(spans: &[EntitySpan], length: usize, scheme: Scheme) -> Result<Vec<String>, SchemeError> {
    let mut sorted: Vec<&EntitySpan> = spans.iter().collect();
    sorted.sort_by_key(|s| (s.start, s.end));
    for s in &sorted {
        if s.start > s.end || s.end >= length {
            return Err(SchemeError::SpanOutOfRange { span: (*s).clone(), length });
        }
    }
    for pair in sorted.windows(2) {
        if pair[1].start <= pair[0].end {
            return Err(SchemeError::OverlappingSpans(pair[0].clone(), pair[1].clone()));
        }
    }

    let mut tags = vec!["O".to_string(); length];
    for span in sorted {
        write_span(&mut tags[span.start..=span.end], &span.etype, scheme);
    }
    Ok(tags)
}

/// Positional encoding of one entity over `slots`.
pub(crate) fn write_span(slots: &mut [String], etype: &str, scheme: Scheme) {
    let n = slots.len();
    for (k, slot) in slots.iter_mut().enumerate() {
        let prefix = match scheme {
            Scheme::Io => 'I',
            Scheme::Bio if k == 0 => 'B',
            Scheme::Bio => 'I',
            Scheme::Bioes if n == 1 => 'S',
            Scheme::Bioes if k == 0 => 'B',
            Scheme::Bioes if k == n - 1 => 'E',
            Scheme::Bioes => 'I',
        };
        *slot = format!("{prefix}-{etype}");
    }
}

/// List every position at which `tags` departs from what [`encode_spans`]
/// can produce under `scheme`. At most one violation is reported per
/// position; the result is empty iff the sequence is canonical.
pub fn validate<S: AsRef<str>>(tags: &[S], scheme: Scheme) -> Vec<Violation> {
    let mut out: Vec<Violation> = Vec::new();
    let mut report = |v: Violation| {
        if !out.iter().any(|o| o.position == v.position) {
            out.push(v);
        }
    };

    // Entity currently open: (position of its last token, type).
    let mut open: Option<(usize, &str)> = None;
    for (i, raw) in tags.iter().enumerate() {
        let raw = raw.as_ref();
        let tag = match Tag::parse(raw) {
            Some(Tag::Entity { prefix, .. }) if !scheme.allows(prefix) => None,
            t => t,
        };
        let Some(tag) = tag else {
            report(Violation::new(i, raw, ViolationKind::InvalidTag));
            if let (Scheme::Bioes, Some((last, _))) = (scheme, open) {
                report(Violation::new(last, tags[last].as_ref(), ViolationKind::UnterminatedEntity));
            }
            open = None;
            continue;
        };

        match scheme {
            Scheme::Io => {}
            Scheme::Bio => match tag {
                Tag::Outside => open = None,
                Tag::Entity { prefix: Prefix::B, etype } => open = Some((i, etype)),
                Tag::Entity { etype, .. } => {
                    match open {
                        None => report(Violation::new(i, raw, ViolationKind::OrphanInside)),
                        Some((_, t)) if t != etype => report(Violation::new(i, raw, ViolationKind::TypeMismatch)),
                        _ => {}
                    }
                    open = Some((i, etype));
                }
            },
            Scheme::Bioes => {
                let continues = matches!(tag, Tag::Entity { prefix: Prefix::I | Prefix::E, .. });
                match (open, tag) {
                    (Some((last, _)), _) if !continues => {
                        report(Violation::new(last, tags[last].as_ref(), ViolationKind::UnterminatedEntity));
                    }
                    (Some((last, t)), Tag::Entity { etype, .. }) if t != etype => {
                        report(Violation::new(last, tags[last].as_ref(), ViolationKind::UnterminatedEntity));
                        report(Violation::new(i, raw, ViolationKind::TypeMismatch));
                    }
                    (None, Tag::Entity { prefix: Prefix::I, .. }) => {
                        report(Violation::new(i, raw, ViolationKind::OrphanInside))
                    }
                    (None, Tag::Entity { prefix: Prefix::E, .. }) => {
                        report(Violation::new(i, raw, ViolationKind::OrphanEnd))
                    }
                    _ => {}
                }
                open = match tag {
                    Tag::Entity { prefix: Prefix::B | Prefix::I, etype } => Some((i, etype)),
                    _ => None,
                };
            }
        }
    }
    if let (Scheme::Bioes, Some((last, _))) = (scheme, open) {
        report(Violation::new(last, tags[last].as_ref(), ViolationKind::UnterminatedEntity));
    }
    out.sort_by_key(|v| v.position);
    out
}

/// Lenient spans of one sentence under `scheme`.
pub fn sentence_spans(sentence: &Sentence, scheme: Scheme) -> Result<Vec<EntitySpan>, SchemeError> {
    decode_spans(&sentence.tags(), scheme, DecodeMode::Lenient)
}

/// Re-encode every sentence of a validated corpus in `target`.
pub fn convert(corpus: &Corpus, target: Scheme) -> Result<Corpus, SchemeError> {
    let source = corpus.scheme().ok_or(SchemeError::Unvalidated)?;
    let sentences = corpus
        .sentences()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let spans = sentence_spans(s, source).map_err(|e| e.in_sentence(i))?;
            let tags = encode_spans(&spans, s.len(), target).map_err(|e| e.in_sentence(i))?;
            Ok(s.with_tags(tags))
        })
        .collect::<Result<Vec<_>, SchemeError>>()?;
    Ok(corpus.rebuild(sentences, Some(target)))
}

impl SchemeError {
    pub(crate) fn in_sentence(self, sentence: usize) -> SchemeError {
        SchemeError::InSentence { sentence, source: Box::new(self) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG_IO: [&str; 8] = ["O", "I-PER", "O", "O", "O", "I-ORG", "I-ORG", "I-ORG"];

    fn spans(v: &[(usize, usize, &str)]) -> Vec<EntitySpan> {
        v.iter().map(|&(s, e, t)| EntitySpan::new(s, e, t)).collect()
    }

    #[test]
    fn io_example_decodes() {
        let got = decode_spans(&FIG_IO, Scheme::Io, DecodeMode::Lenient).unwrap();
        assert_eq!(got, spans(&[(1, 1, "PER"), (5, 7, "ORG")]));
    }

    #[test]
    fn all_outside_is_empty() {
        for scheme in Scheme::ALL {
            assert!(decode_spans(&["O", "O"], scheme, DecodeMode::Strict).unwrap().is_empty());
        }
    }

    #[test]
    fn orphan_inside_lenient_vs_strict() {
        let tags = ["O", "I-PER", "I-PER"];
        assert_eq!(decode_spans(&tags, Scheme::Bio, DecodeMode::Lenient).unwrap(), spans(&[(1, 2, "PER")]));
        match decode_spans(&tags, Scheme::Bio, DecodeMode::Strict) {
            Err(SchemeError::Violations(v)) => assert_eq!(v[0].position, 1),
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn prefix_must_belong_to_scheme() {
        let err = decode_spans(&["O", "B-PER"], Scheme::Io, DecodeMode::Lenient).unwrap_err();
        assert!(matches!(err, SchemeError::InvalidTagForScheme { position: 1, .. }));
        assert!(decode_spans(&["S-PER"], Scheme::Bio, DecodeMode::Lenient).is_err());
        assert!(decode_spans(&["I-per"], Scheme::Bioes, DecodeMode::Lenient).is_err());
    }

    #[test]
    fn type_switch_splits_run() {
        let got = decode_spans(&["I-PER", "I-LOC"], Scheme::Io, DecodeMode::Lenient).unwrap();
        assert_eq!(got, spans(&[(0, 0, "PER"), (1, 1, "LOC")]));
    }

    #[test]
    fn bioes_lenient_matches_conlleval() {
        // E- after E- opens a new chunk; I- after S- opens a new chunk.
        let got = decode_spans(&["E-X", "E-X", "S-X", "I-X"], Scheme::Bioes, DecodeMode::Lenient).unwrap();
        assert_eq!(got, spans(&[(0, 0, "X"), (1, 1, "X"), (2, 2, "X"), (3, 3, "X")]));
        let got = decode_spans(&["B-X", "I-X", "O"], Scheme::Bioes, DecodeMode::Lenient).unwrap();
        assert_eq!(got, spans(&[(0, 1, "X")]));
    }

    #[test]
    fn encode_example_bioes() {
        let tags = encode_spans(&spans(&[(1, 1, "PER"), (5, 7, "ORG")]), 8, Scheme::Bioes).unwrap();
        assert_eq!(tags, ["O", "S-PER", "O", "O", "O", "B-ORG", "I-ORG", "E-ORG"]);
    }

    #[test]
    fn encode_empty() {
        for scheme in Scheme::ALL {
            assert_eq!(encode_spans(&[], 3, scheme).unwrap(), ["O", "O", "O"]);
        }
    }

    #[test]
    fn io_merges_adjacent_same_type() {
        let tags = encode_spans(&spans(&[(0, 0, "LOC"), (1, 1, "LOC")]), 2, Scheme::Io).unwrap();
        assert_eq!(tags, ["I-LOC", "I-LOC"]);
        let back = decode_spans(&tags, Scheme::Io, DecodeMode::Lenient).unwrap();
        assert_eq!(back, spans(&[(0, 1, "LOC")]));
    }

    #[test]
    fn encode_rejects_overlap_and_range() {
        let err = encode_spans(&spans(&[(0, 2, "A"), (2, 3, "B")]), 5, Scheme::Bio).unwrap_err();
        assert!(matches!(err, SchemeError::OverlappingSpans(..)));
        let err = encode_spans(&spans(&[(2, 5, "A")]), 5, Scheme::Bio).unwrap_err();
        assert!(matches!(err, SchemeError::SpanOutOfRange { .. }));
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&["O", "B-PER", "I-PER"], Scheme::Bio).is_empty());
        assert_eq!(
            validate(&["O", "I-PER"], Scheme::Bio),
            vec![Violation::new(1, "I-PER", ViolationKind::OrphanInside)]
        );
        assert_eq!(
            validate(&["B-ORG", "I-ORG"], Scheme::Bioes),
            vec![Violation::new(1, "I-ORG", ViolationKind::UnterminatedEntity)]
        );
        assert_eq!(
            validate(&["O", "E-ORG"], Scheme::Bioes),
            vec![Violation::new(1, "E-ORG", ViolationKind::OrphanEnd)]
        );
        assert_eq!(
            validate(&["B-X", "E-Y"], Scheme::Bioes),
            vec![
                Violation::new(0, "B-X", ViolationKind::UnterminatedEntity),
                Violation::new(1, "E-Y", ViolationKind::TypeMismatch),
            ]
        );
        assert_eq!(validate(&["O", "B-X"], Scheme::Io), vec![Violation::new(1, "B-X", ViolationKind::InvalidTag)]);
    }

    // Brute force: every sequence of length <= 4 over two types is valid iff
    // it is produced by writing out some set of non-overlapping spans.
    #[test]
    fn validate_agrees_with_enumerated_encodings() {
        use std::collections::HashSet;

        fn generable(len: usize, scheme: Scheme) -> HashSet<Vec<String>> {
            // Each position either O, or starts a span of length k and type t.
            fn rec(pos: usize, len: usize, scheme: Scheme, acc: &mut Vec<String>, out: &mut HashSet<Vec<String>>) {
                if pos == len {
                    out.insert(acc.clone());
                    return;
                }
                acc.push("O".into());
                rec(pos + 1, len, scheme, acc, out);
                acc.pop();
                for t in ["A", "B"] {
                    for k in 1..=(len - pos) {
                        for j in 0..k {
                            let p = match scheme {
                                Scheme::Io => "I",
                                Scheme::Bio => {
                                    if j == 0 {
                                        "B"
                                    } else {
                                        "I"
                                    }
                                }
                                Scheme::Bioes => {
                                    if k == 1 {
                                        "S"
                                    } else if j == 0 {
                                        "B"
                                    } else if j == k - 1 {
                                        "E"
                                    } else {
                                        "I"
                                    }
                                }
                            };
                            acc.push(format!("{p}-{t}"));
                        }
                        rec(pos + k, len, scheme, acc, out);
                        acc.truncate(acc.len() - k);
                    }
                }
            }
            let mut out = HashSet::new();
            rec(0, len, scheme, &mut Vec::new(), &mut out);
            out
        }

        let alphabet: Vec<String> =
            ["O", "I-A", "B-A", "E-A", "S-A", "I-B", "B-B", "E-B", "S-B"].iter().map(|s| s.to_string()).collect();
        for scheme in Scheme::ALL {
            for len in 1..=4 {
                let legal = generable(len, scheme);
                let total = alphabet.len().pow(len as u32);
                for mut code in 0..total {
                    let seq: Vec<String> = (0..len)
                        .map(|_| {
                            let s = alphabet[code % alphabet.len()].clone();
                            code /= alphabet.len();
                            s
                        })
                        .collect();
                    assert_eq!(validate(&seq, scheme).is_empty(), legal.contains(&seq), "{scheme} {seq:?}");
                }
            }
        }
    }

    #[test]
    fn label_set_sizes() {
        let types = ["LOC", "ORG", "PER"];
        for scheme in Scheme::ALL {
            assert_eq!(scheme.label_set(&types).len(), scheme.tag_count(3));
        }
        assert_eq!(Scheme::Bio.label_set(&["PER"]), ["O", "B-PER", "I-PER"]);
    }

    #[test]
    fn infer_scheme() {
        assert_eq!(Scheme::infer(FIG_IO), Scheme::Io);
        assert_eq!(Scheme::infer(["B-X", "I-X"]), Scheme::Bio);
        assert_eq!(Scheme::infer(["B-X", "E-X"]), Scheme::Bioes);
    }

    #[test]
    fn scheme_parses_case_insensitively() {
        assert_eq!("bioes".parse::<Scheme>().unwrap(), Scheme::Bioes);
        assert!("bilou".parse::<Scheme>().is_err());
    }
}
