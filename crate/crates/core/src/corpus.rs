//! In-memory corpus and CoNLL-style column files.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::schemes::{self, Scheme, SchemeError};

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("line {0}: too few columns")]
    MalformedRow(usize),
    #[error("line {line}: {reason}")]
    InvalidToken { line: usize, reason: String },
    #[error("input contains no token rows")]
    EmptyInput,
    #[error("invalid token: {0}")]
    Token(String),
    #[error("sentence must contain at least one token")]
    EmptySentence,
    #[error("invalid column layout: {0}")]
    ColumnSpec(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// One token row: surface form, extra attribute columns (POS first when
/// present) and a verbatim tag string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    surface: String,
    attributes: Vec<String>,
    tag: String,
}

impl Token {
    pub fn new(surface: impl Into<String>, tag: impl Into<String>) -> Result<Self, CorpusError> {
        Self::with_attributes(surface, Vec::new(), tag)
    }

    pub fn with_attributes(
        surface: impl Into<String>,
        attributes: Vec<String>,
        tag: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        let surface = surface.into();
        let tag = tag.into();
        check_field("surface", &surface)?;
        for a in &attributes {
            check_field("attribute", a)?;
        }
        if !schemes::is_valid_tag(&tag) {
            return Err(CorpusError::Token(format!("malformed tag `{tag}`")));
        }
        Ok(Token { surface, attributes, tag })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    /// Attribute 0, by convention the part-of-speech tag.
    pub fn pos(&self) -> Option<&str> {
        self.attributes.first().map(String::as_str)
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub(crate) fn set_tag(&mut self, tag: String) {
        self.tag = tag;
    }

    pub(crate) fn set_surface(&mut self, surface: String) {
        self.surface = surface;
    }
}

fn check_field(what: &str, s: &str) -> Result<(), CorpusError> {
    if s.is_empty() {
        return Err(CorpusError::Token(format!("empty {what}")));
    }
    if s.chars().any(char::is_whitespace) {
        return Err(CorpusError::Token(format!("{what} `{s}` contains whitespace")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Result<Self, CorpusError> {
        if tokens.is_empty() {
            return Err(CorpusError::EmptySentence);
        }
        Ok(Sentence { tokens })
    }

    /// Convenience constructor from `(surface, tag)` pairs.
    pub fn from_pairs<S: AsRef<str>, T: AsRef<str>>(pairs: &[(S, T)]) -> Result<Self, CorpusError> {
        let tokens = pairs.iter().map(|(s, t)| Token::new(s.as_ref(), t.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Sentence::new(tokens)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub(crate) fn tokens_mut(&mut self) -> &mut [Token] {
        &mut self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tags(&self) -> Vec<&str> {
        self.tokens.iter().map(Token::tag).collect()
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(Token::surface).collect()
    }

    /// Copy with the tag column replaced. Panics if the lengths differ or a
    /// tag is malformed; callers produce tags from a scheme encoder.
    pub fn with_tags<S: Into<String>>(&self, tags: Vec<S>) -> Sentence {
        assert_eq!(tags.len(), self.len(), "tag count must match sentence length");
        let mut out = self.clone();
        for (tok, tag) in out.tokens.iter_mut().zip(tags) {
            let tag = tag.into();
            debug_assert!(schemes::is_valid_tag(&tag), "malformed tag {tag}");
            tok.tag = tag;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Separator {
    #[default]
    Space,
    Tab,
}

impl Separator {
    pub fn as_char(self) -> char {
        match self {
            Separator::Space => ' ',
            Separator::Tab => '\t',
        }
    }
}

impl FromStr for Separator {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "space" | " " => Ok(Separator::Space),
            "tab" | "\t" => Ok(Separator::Tab),
            _ => Err(CorpusError::ColumnSpec(format!("unknown separator `{s}`"))),
        }
    }
}

/// Which column holds what in a column file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnSpec {
    surface_col: usize,
    tag_col: usize,
    attribute_cols: Vec<(usize, String)>,
    separator: Separator,
}

impl Default for ColumnSpec {
    fn default() -> Self {
        ColumnSpec { surface_col: 0, tag_col: 1, attribute_cols: Vec::new(), separator: Separator::Space }
    }
}

impl ColumnSpec {
    pub fn new(
        surface_col: usize,
        tag_col: usize,
        attribute_cols: Vec<(usize, String)>,
        separator: Separator,
    ) -> Result<Self, CorpusError> {
        let mut seen = HashSet::new();
        for idx in [surface_col, tag_col].into_iter().chain(attribute_cols.iter().map(|(i, _)| *i)) {
            if !seen.insert(idx) {
                return Err(CorpusError::ColumnSpec(format!("column {idx} used twice")));
            }
        }
        Ok(ColumnSpec { surface_col, tag_col, attribute_cols, separator })
    }

    /// `surface pos tag` layout.
    pub fn with_pos(separator: Separator) -> Self {
        ColumnSpec { surface_col: 0, tag_col: 2, attribute_cols: vec![(1, "pos".to_string())], separator }
    }

    pub fn surface_col(&self) -> usize {
        self.surface_col
    }

    pub fn tag_col(&self) -> usize {
        self.tag_col
    }

    pub fn attribute_cols(&self) -> &[(usize, String)] {
        &self.attribute_cols
    }

    pub fn separator(&self) -> Separator {
        self.separator
    }

    pub fn has_pos(&self) -> bool {
        !self.attribute_cols.is_empty()
    }

    pub fn width(&self) -> usize {
        1 + self.attribute_cols.iter().map(|(i, _)| *i).chain([self.surface_col, self.tag_col]).max().unwrap_or(0)
    }

    /// Fields of one row: runs of spaces, or single tabs.
    pub fn split_line<'a>(&self, line: &'a str) -> Vec<&'a str> {
        match self.separator {
            Separator::Space => line.split(' ').filter(|f| !f.is_empty()).collect(),
            Separator::Tab => line.split('\t').collect(),
        }
    }
}

/// Sentences plus the scheme their tags are known to be written in.
///
/// A freshly parsed corpus is unvalidated (`scheme() == None`); call
/// [`Corpus::validate`] to attach a scheme once every sentence decodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Sentence>,
    scheme: Option<Scheme>,
    column_spec: ColumnSpec,
}

impl Corpus {
    pub fn new(sentences: Vec<Sentence>, column_spec: ColumnSpec) -> Self {
        Corpus { sentences, scheme: None, column_spec }
    }

    pub fn empty() -> Self {
        Corpus::new(Vec::new(), ColumnSpec::default())
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn into_sentences(self) -> Vec<Sentence> {
        self.sentences
    }

    pub fn scheme(&self) -> Option<Scheme> {
        self.scheme
    }

    pub fn column_spec(&self) -> &ColumnSpec {
        &self.column_spec
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flat_map(|s| s.tokens.iter())
    }

    pub fn has_pos(&self) -> bool {
        self.tokens().next().is_some_and(|t| t.pos().is_some())
    }

    /// Attach `scheme` after checking that every sentence decodes under it
    /// (lenient decoding: every tag uses a prefix the scheme allows).
    pub fn validate(mut self, scheme: Scheme) -> Result<Corpus, SchemeError> {
        for (i, s) in self.sentences.iter().enumerate() {
            schemes::sentence_spans(s, scheme).map_err(|e| e.in_sentence(i))?;
        }
        self.scheme = Some(scheme);
        Ok(self)
    }

    /// Validate under the scheme inferred from the tag inventory.
    pub fn validate_inferred(self) -> Result<Corpus, SchemeError> {
        let scheme = self.inferred_scheme();
        self.validate(scheme)
    }

    pub fn inferred_scheme(&self) -> Scheme {
        Scheme::infer(self.tokens().map(Token::tag))
    }

    /// Scheme used to read tags: the validated one, or the inferred one.
    pub fn effective_scheme(&self) -> Scheme {
        self.scheme.unwrap_or_else(|| self.inferred_scheme())
    }

    /// Sorted entity types present in the tags.
    pub fn entity_types(&self) -> Vec<String> {
        let mut types: Vec<String> = self
            .tokens()
            .filter_map(|t| schemes::Tag::parse(t.tag()).and_then(|t| t.etype()).map(str::to_string))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        types.sort();
        types
    }

    pub(crate) fn rebuild(&self, sentences: Vec<Sentence>, scheme: Option<Scheme>) -> Corpus {
        Corpus { sentences, scheme, column_spec: self.column_spec.clone() }
    }

    /// Same metadata, different sentences.
    pub fn with_sentences(&self, sentences: Vec<Sentence>) -> Corpus {
        self.rebuild(sentences, self.scheme)
    }

    pub fn with_column_spec(mut self, spec: ColumnSpec) -> Corpus {
        self.column_spec = spec;
        self
    }
}

/// Parse a column file. Blank lines separate sentences and lines starting
/// with `"# "` are comments. Tags are kept verbatim; the result is
/// unvalidated.
pub fn parse_conll(text: &str, spec: &ColumnSpec) -> Result<Corpus, CorpusError> {
    let width = spec.width();
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();

    for (idx, line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(Sentence { tokens: std::mem::take(&mut current) });
            }
            continue;
        }
        if line.starts_with("# ") {
            continue;
        }
        let fields = spec.split_line(line);
        if fields.len() < width {
            return Err(CorpusError::MalformedRow(line_no));
        }
        let attributes = spec.attribute_cols.iter().map(|(i, _)| fields[*i].to_string()).collect();
        let token = Token::with_attributes(fields[spec.surface_col], attributes, fields[spec.tag_col])
            .map_err(|e| CorpusError::InvalidToken { line: line_no, reason: e.to_string() })?;
        current.push(token);
    }
    if !current.is_empty() {
        sentences.push(Sentence { tokens: current });
    }
    if sentences.is_empty() {
        return Err(CorpusError::EmptyInput);
    }
    Ok(Corpus::new(sentences, spec.clone()))
}

/// Write a corpus in the layout described by `spec`. Columns the spec does
/// not mention are filled with `_`.
///
/// A surface of exactly `#` written with the space separator produces a row
/// that [`parse_conll`] reads as a comment.
pub fn serialize_conll(corpus: &Corpus, spec: &ColumnSpec) -> String {
    let width = spec.width();
    let sep = spec.separator.as_char();
    let mut out = String::new();
    let mut row: Vec<&str> = vec!["_"; width];
    for (i, sentence) in corpus.sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for tok in &sentence.tokens {
            row.iter_mut().for_each(|f| *f = "_");
            row[spec.surface_col] = &tok.surface;
            row[spec.tag_col] = &tok.tag;
            for ((col, _), value) in spec.attribute_cols.iter().zip(&tok.attributes) {
                row[*col] = value;
            }
            for (k, field) in row.iter().enumerate() {
                if k > 0 {
                    out.push(sep);
                }
                out.push_str(field);
            }
            out.push('\n');
        }
    }
    out
}

/// Sentence-boundary heuristics for flat token streams.
#[derive(Clone, Debug)]
pub struct SplitRules {
    pub max_len: usize,
    pub abbreviations: HashSet<String>,
}

impl Default for SplitRules {
    fn default() -> Self {
        let abbreviations =
            ["M.", "MM.", "Mme.", "Mlle.", "Dr.", "St.", "etc."].iter().map(|s| s.to_string()).collect();
        SplitRules { max_len: 200, abbreviations }
    }
}

impl SplitRules {
    /// Listed abbreviation, or a short word ending in `.` such as `M.`.
    pub fn is_abbreviation(&self, surface: &str) -> bool {
        if self.abbreviations.contains(surface) {
            return true;
        }
        let n = surface.chars().count();
        surface.ends_with('.') && (2..=3).contains(&n) && surface.chars().next().is_some_and(char::is_alphanumeric)
    }

    fn ends_sentence(&self, tok: &Token, next: &Token) -> bool {
        let w = tok.surface();
        let terminal =
            matches!(w, "." | "!" | "?" | "..." | "…") || (w.len() > 1 && w.ends_with('.') && !self.is_abbreviation(w));
        terminal && next.surface().chars().next().is_some_and(|c| c.is_uppercase() || c.is_ascii_digit())
    }
}

/// Group a flat token stream into sentences.
pub fn split_sentences(tokens: Vec<Token>, rules: &SplitRules) -> Corpus {
    let max_len = rules.max_len.max(1);
    let mut sentences = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut iter = tokens.into_iter().peekable();
    while let Some(tok) = iter.next() {
        let boundary = match iter.peek() {
            Some(next) => rules.ends_sentence(&tok, next),
            None => true,
        };
        current.push(tok);
        if boundary || current.len() >= max_len {
            sentences.push(Sentence { tokens: std::mem::take(&mut current) });
        }
    }
    Corpus::new(sentences, ColumnSpec::default())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub tokens: usize,
    pub sentences: usize,
    pub entities_total: usize,
    pub entities_by_type: BTreeMap<String, usize>,
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tokens\t{}", self.tokens)?;
        writeln!(f, "sentences\t{}", self.sentences)?;
        writeln!(f, "entities\t{}", self.entities_total)?;
        for (t, n) in &self.entities_by_type {
            writeln!(f, "entities.{t}\t{n}")?;
        }
        Ok(())
    }
}

/// Token, sentence and entity counts. Entities are counted with lenient
/// decoding under the corpus scheme (inferred when unvalidated).
pub fn corpus_stats(corpus: &Corpus) -> Result<Stats, SchemeError> {
    let scheme = corpus.effective_scheme();
    let mut stats = Stats { sentences: corpus.len(), tokens: corpus.token_count(), ..Stats::default() };
    for (i, s) in corpus.sentences.iter().enumerate() {
        for span in schemes::sentence_spans(s, scheme).map_err(|e| e.in_sentence(i))? {
            *stats.entities_by_type.entry(span.etype).or_default() += 1;
            stats.entities_total += 1;
        }
    }
    Ok(stats)
}
