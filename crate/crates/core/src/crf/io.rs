//! Text model files.
//!
//! ```text
//! SCHEME<TAB>BIOES
//! LABELS<TAB>O,B-LOC,...
//! TEMPLATES<TAB>bias,w0,...
//! T<TAB><from><TAB><to><TAB><hexfloat>       one per label pair
//! F<TAB><feature><TAB><label><TAB><hexfloat> one per nonzero weight
//! END<TAB><number of F lines>
//! ```
//!
//! Weights are written as C99 hexadecimal floats, so a load reproduces
//! them bit for bit. Features whose weights are all zero are omitted.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use super::features::{FeatureIndex, FeatureTemplateSet};
use super::{CrfError, CrfModel};
use crate::schemes::Scheme;

/// `%a`-style rendering of a finite `f64`, e.g. `0x1.8000000000000p+1`.
pub fn format_hex_float(x: f64) -> String {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    match (exp, mant) {
        (0, 0) => format!("{sign}0x0p+0"),
        (0, m) => format!("{sign}0x0.{m:013x}p-1022"),
        (e, m) => format!("{sign}0x1.{m:013x}p{:+}", e - 1023),
    }
}

/// Inverse of [`format_hex_float`]. Also accepts fractions shorter than 13
/// hex digits.
pub fn parse_hex_float(s: &str) -> Option<f64> {
    let (negative, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let rest = rest.strip_prefix("0x").or_else(|| rest.strip_prefix("0X"))?;
    let (mantissa, exp) = rest.split_once(['p', 'P'])?;
    let exp: i64 = exp.parse().ok()?;
    let (lead, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.len() > 13 || !frac.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    let frac_bits = if frac.is_empty() { 0 } else { u64::from_str_radix(frac, 16).ok()? << (4 * (13 - frac.len())) };
    let bits = match lead {
        "1" => {
            let biased = exp + 1023;
            if !(1..=2046).contains(&biased) {
                return None;
            }
            ((biased as u64) << 52) | frac_bits
        }
        "0" if frac_bits == 0 => 0,
        "0" if exp == -1022 => frac_bits,
        _ => return None,
    };
    let v = f64::from_bits(bits);
    Some(if negative { -v } else { v })
}

pub fn model_to_string(model: &CrfModel) -> String {
    let (index, obs, trans) = model.parts();
    let labels = model.labels();
    let k = labels.len();
    let mut out = String::new();
    let _ = writeln!(out, "SCHEME\t{}", model.scheme());
    let _ = writeln!(out, "LABELS\t{}", labels.join(","));
    let _ = writeln!(out, "TEMPLATES\t{}", model.templates().names().join(","));
    for (i, from) in labels.iter().enumerate() {
        for (j, to) in labels.iter().enumerate() {
            let _ = writeln!(out, "T\t{from}\t{to}\t{}", format_hex_float(trans[i * k + j]));
        }
    }
    let mut written = 0usize;
    for (id, name) in index.iter() {
        let row = &obs[id as usize * k..(id as usize + 1) * k];
        for (label, w) in labels.iter().zip(row) {
            if *w != 0.0 {
                let _ = writeln!(out, "F\t{name}\t{label}\t{}", format_hex_float(*w));
                written += 1;
            }
        }
    }
    let _ = writeln!(out, "END\t{written}");
    out
}

fn format_err(line: usize, reason: impl Into<String>) -> CrfError {
    CrfError::Format { line, reason: reason.into() }
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, key: &str) -> Result<&'a str, CrfError> {
    let (no, line) = lines.next().ok_or_else(|| format_err(0, format!("missing {key} header")))?;
    line.strip_prefix(key)
        .and_then(|r| r.strip_prefix('\t'))
        .ok_or_else(|| format_err(no, format!("expected {key} header")))
}

pub fn model_from_str(text: &str) -> Result<CrfModel, CrfError> {
    let body = text.strip_suffix('\n').ok_or_else(|| format_err(text.lines().count(), "file is truncated"))?;
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));

    let scheme: Scheme = header(&mut lines, "SCHEME")?.parse().map_err(|_| format_err(1, "bad scheme"))?;
    let labels: Vec<String> = header(&mut lines, "LABELS")?.split(',').map(str::to_string).collect();
    if labels.iter().any(String::is_empty) {
        return Err(format_err(2, "empty label"));
    }
    let templates =
        FeatureTemplateSet::parse_list(header(&mut lines, "TEMPLATES")?).map_err(|e| format_err(3, e.to_string()))?;
    let k = labels.len();
    let label_id = |no: usize, l: &str| {
        labels.iter().position(|x| x == l).ok_or_else(|| format_err(no, format!("unknown label `{l}`")))
    };

    let mut trans = vec![0.0; k * k];
    let mut seen_trans = vec![false; k * k];
    let mut index = FeatureIndex::new();
    let mut obs: Vec<f64> = Vec::new();
    let mut f_lines = 0usize;
    let mut end = None;

    for (no, line) in lines.by_ref() {
        let fields: Vec<&str> = line.split('\t').collect();
        let weight = |s: &str| parse_hex_float(s).ok_or_else(|| format_err(no, format!("bad weight `{s}`")));
        match fields.as_slice() {
            ["T", from, to, w] => {
                let slot = label_id(no, from)? * k + label_id(no, to)?;
                trans[slot] = weight(w)?;
                seen_trans[slot] = true;
            }
            ["F", feat, label, w] => {
                let y = label_id(no, label)?;
                let id = index.intern(feat) as usize;
                if obs.len() < (id + 1) * k {
                    obs.resize((id + 1) * k, 0.0);
                }
                obs[id * k + y] = weight(w)?;
                f_lines += 1;
            }
            ["END", n] => {
                let n: usize = n.parse().map_err(|_| format_err(no, "bad END count"))?;
                if n != f_lines {
                    return Err(format_err(no, format!("END announces {n} weights, found {f_lines}")));
                }
                end = Some(no);
                break;
            }
            _ => return Err(format_err(no, "unrecognized line")),
        }
    }
    let Some(end_line) = end else {
        return Err(format_err(body.split('\n').count(), "missing END line"));
    };
    if lines.next().is_some() {
        return Err(format_err(end_line + 1, "content after END"));
    }
    if seen_trans.iter().any(|s| !s) {
        return Err(format_err(end_line, "missing transition weights"));
    }
    Ok(CrfModel::from_parts(labels, scheme, index, obs, trans, templates))
}

pub fn save_model(model: &CrfModel, path: &Path) -> Result<(), CrfError> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(model_to_string(model).as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<CrfModel, CrfError> {
    model_from_str(&fs::read_to_string(path)?)
}
