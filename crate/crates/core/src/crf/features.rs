//! Observation feature templates.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::corpus::Sentence;

use super::CrfError;

pub const BOS: &str = "<BOS>";
pub const EOS: &str = "<EOS>";

/// One entry of the fixed template catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Template {
    Bias,
    /// Lowercased word at offset -1, 0 or +1.
    Word(i8),
    Prefix(u8),
    Suffix(u8),
    Shape,
    Capitalized,
    AllCaps,
    HasDigit,
    HasHyphen,
    /// Part-of-speech attribute at offset -1, 0 or +1.
    Pos(i8),
}

impl Template {
    pub fn name(self) -> String {
        match self {
            Template::Bias => "bias".into(),
            Template::Word(o) => format!("w{}", offset_str(o)),
            Template::Prefix(n) => format!("pre{n}"),
            Template::Suffix(n) => format!("suf{n}"),
            Template::Shape => "shape".into(),
            Template::Capitalized => "cap".into(),
            Template::AllCaps => "allcaps".into(),
            Template::HasDigit => "digit".into(),
            Template::HasHyphen => "hyphen".into(),
            Template::Pos(o) => format!("pos{}", offset_str(o)),
        }
    }

    pub fn uses_pos(self) -> bool {
        matches!(self, Template::Pos(_))
    }
}

fn offset_str(o: i8) -> String {
    match o {
        0 => "0".into(),
        o if o > 0 => format!("+{o}"),
        o => o.to_string(),
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Template {
    type Err = CrfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = match s {
            "bias" => Template::Bias,
            "w0" => Template::Word(0),
            "w-1" => Template::Word(-1),
            "w+1" => Template::Word(1),
            "pre1" => Template::Prefix(1),
            "pre2" => Template::Prefix(2),
            "pre3" => Template::Prefix(3),
            "suf1" => Template::Suffix(1),
            "suf2" => Template::Suffix(2),
            "suf3" => Template::Suffix(3),
            "shape" => Template::Shape,
            "cap" => Template::Capitalized,
            "allcaps" => Template::AllCaps,
            "digit" => Template::HasDigit,
            "hyphen" => Template::HasHyphen,
            "pos0" => Template::Pos(0),
            "pos-1" => Template::Pos(-1),
            "pos+1" => Template::Pos(1),
            _ => return Err(CrfError::UnknownTemplate(s.to_string())),
        };
        Ok(t)
    }
}

/// Ordered, nonempty list of templates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureTemplateSet {
    templates: Vec<Template>,
}

impl FeatureTemplateSet {
    pub fn new(templates: Vec<Template>) -> Result<Self, CrfError> {
        if templates.is_empty() {
            return Err(CrfError::UnknownTemplate("(empty template set)".into()));
        }
        Ok(FeatureTemplateSet { templates })
    }

    /// Every lexical template of the catalog.
    pub fn standard() -> Self {
        let mut t = vec![Template::Bias, Template::Word(0), Template::Word(-1), Template::Word(1)];
        t.extend((1..=3).map(Template::Prefix));
        t.extend((1..=3).map(Template::Suffix));
        t.extend([Template::Shape, Template::Capitalized, Template::AllCaps, Template::HasDigit, Template::HasHyphen]);
        FeatureTemplateSet { templates: t }
    }

    /// The standard set plus the three part-of-speech templates.
    pub fn with_pos() -> Self {
        let mut set = Self::standard();
        set.templates.extend([Template::Pos(0), Template::Pos(-1), Template::Pos(1)]);
        set
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn uses_pos(&self) -> bool {
        self.templates.iter().any(|t| t.uses_pos())
    }

    pub fn names(&self) -> Vec<String> {
        self.templates.iter().map(|t| t.name()).collect()
    }

    pub fn parse_list(s: &str) -> Result<Self, CrfError> {
        let templates = s.split(',').filter(|p| !p.is_empty()).map(str::parse).collect::<Result<Vec<_>, _>>()?;
        Self::new(templates)
    }
}

/// Collapse each character to a class (`X`, `x`, `d`, or itself) and merge
/// repeated classes: `Saint-Brieuc` becomes `Xx-Xx`.
pub fn word_shape(word: &str) -> String {
    let mut out = String::new();
    let mut last = None;
    for c in word.chars() {
        let class = if c.is_uppercase() {
            'X'
        } else if c.is_lowercase() {
            'x'
        } else if c.is_numeric() {
            'd'
        } else {
            c
        };
        if last != Some(class) {
            out.push(class);
            last = Some(class);
        }
    }
    out
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn take_prefix(word: &str, n: usize) -> &str {
    match word.char_indices().nth(n) {
        Some((i, _)) => &word[..i],
        None => word,
    }
}

fn take_suffix(word: &str, n: usize) -> &str {
    let count = word.chars().count();
    if count <= n {
        return word;
    }
    let (i, _) = word.char_indices().nth(count - n).expect("index within word");
    &word[i..]
}

/// One feature string per template at every position.
pub fn extract_features(sentence: &Sentence, templates: &FeatureTemplateSet) -> Vec<Vec<String>> {
    let tokens = sentence.tokens();
    let n = tokens.len() as isize;
    let at = |t: usize, o: i8| -> Option<usize> {
        let k = t as isize + o as isize;
        (0..n).contains(&k).then_some(k as usize)
    };
    let boundary = |o: i8| if o < 0 { BOS } else { EOS };

    (0..tokens.len())
        .map(|t| {
            let word = tokens[t].surface();
            templates
                .templates
                .iter()
                .map(|&tpl| {
                    let name = tpl.name();
                    match tpl {
                        Template::Bias => name,
                        Template::Word(o) => match at(t, o) {
                            Some(k) => format!("{name}={}", tokens[k].surface().to_lowercase()),
                            None => format!("{name}={}", boundary(o)),
                        },
                        Template::Pos(o) => match at(t, o) {
                            Some(k) => format!("{name}={}", tokens[k].pos().unwrap_or("_")),
                            None => format!("{name}={}", boundary(o)),
                        },
                        Template::Prefix(k) => format!("{name}={}", take_prefix(word, k as usize)),
                        Template::Suffix(k) => format!("{name}={}", take_suffix(word, k as usize)),
                        Template::Shape => format!("{name}={}", word_shape(word)),
                        Template::Capitalized => {
                            format!("{name}={}", flag(word.chars().next().is_some_and(char::is_uppercase)))
                        }
                        Template::AllCaps => {
                            let caps = word.chars().any(char::is_alphabetic)
                                && word.chars().filter(|c| c.is_alphabetic()).all(char::is_uppercase);
                            format!("{name}={}", flag(caps))
                        }
                        Template::HasDigit => format!("{name}={}", flag(word.chars().any(char::is_numeric))),
                        Template::HasHyphen => format!("{name}={}", flag(word.contains('-'))),
                    }
                })
                .collect()
        })
        .collect()
}

/// Dense ids for the feature strings seen in training.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureIndex {
    ids: HashMap<String, u32>,
    names: Vec<String>,
}

impl FeatureIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, feature: &str) -> Option<u32> {
        self.ids.get(feature).copied()
    }

    /// Id of `feature`, assigning the next free one if it is new.
    pub fn intern(&mut self, feature: &str) -> u32 {
        if let Some(id) = self.ids.get(feature) {
            return *id;
        }
        let id = self.names.len() as u32;
        self.ids.insert(feature.to_string(), id);
        self.names.push(feature.to_string());
        id
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> {
        self.names.iter().enumerate().map(|(i, n)| (i as u32, n.as_str()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig() -> Sentence {
        Sentence::from_pairs(&[
            ("M.", "O"),
            ("Brandi", "I-PER"),
            (",", "O"),
            ("Professeur", "O"),
            ("au", "O"),
            ("lycée", "I-ORG"),
            ("de", "I-ORG"),
            ("Saint-Brieuc", "I-ORG"),
        ])
        .unwrap()
    }

    #[test]
    fn brandi_features() {
        let f = extract_features(&fig(), &FeatureTemplateSet::standard());
        for want in ["w0=brandi", "pre1=B", "suf3=ndi", "shape=Xx", "cap=1", "w-1=m.", "w+1=,"] {
            assert!(f[1].contains(&want.to_string()), "missing {want} in {:?}", f[1]);
        }
        assert_eq!(f[1].len(), FeatureTemplateSet::standard().templates().len());
    }

    #[test]
    fn boundary_sentinels() {
        let f = extract_features(&fig(), &FeatureTemplateSet::standard());
        assert!(f[0].contains(&"w-1=<BOS>".to_string()));
        assert!(f[7].contains(&"w+1=<EOS>".to_string()));
    }

    #[test]
    fn hyphenated_shape() {
        let f = extract_features(&fig(), &FeatureTemplateSet::standard());
        assert!(f[7].contains(&"hyphen=1".to_string()));
        assert!(f[7].contains(&"shape=Xx-Xx".to_string()));
        assert_eq!(word_shape("1914"), "d");
        assert_eq!(word_shape("M."), "X.");
        assert_eq!(word_shape("lycée"), "x");
    }

    #[test]
    fn short_affixes_and_unicode() {
        assert_eq!(take_prefix("au", 3), "au");
        assert_eq!(take_suffix("lycée", 2), "ée");
        assert_eq!(take_prefix("élan", 1), "é");
    }

    #[test]
    fn pos_templates() {
        let s = Sentence::new(vec![
            crate::corpus::Token::with_attributes("Le", vec!["DET".into()], "O").unwrap(),
            crate::corpus::Token::with_attributes("roi", vec!["NOM".into()], "O").unwrap(),
        ])
        .unwrap();
        let f = extract_features(&s, &FeatureTemplateSet::with_pos());
        assert!(f[0].contains(&"pos0=DET".to_string()));
        assert!(f[0].contains(&"pos+1=NOM".to_string()));
        assert!(f[0].contains(&"pos-1=<BOS>".to_string()));
    }

    #[test]
    fn template_names_round_trip() {
        let set = FeatureTemplateSet::with_pos();
        let parsed = FeatureTemplateSet::parse_list(&set.names().join(",")).unwrap();
        assert_eq!(parsed, set);
        assert!(FeatureTemplateSet::parse_list("").is_err());
        assert!(FeatureTemplateSet::parse_list("w9").is_err());
    }

    #[test]
    fn index_is_dense() {
        let mut idx = FeatureIndex::new();
        assert_eq!(idx.intern("a"), 0);
        assert_eq!(idx.intern("b"), 1);
        assert_eq!(idx.intern("a"), 0);
        assert_eq!(idx.get("c"), None);
        assert_eq!(idx.name(1), "b");
    }
}
