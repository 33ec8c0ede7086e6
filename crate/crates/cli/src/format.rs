//! Text formats: group literals (`5,5`), element literals (`(2,3)`), set
//! literals (element lists or hex-packed words with a group header), and the
//! JSON report schemas. Every literal emitted here parses back to an
//! identical value.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use sumsetlab_core::search::ValueSource;
use sumsetlab_core::{ConstantKind, DenseSubset, GroupElement, GroupSpec, SearchMethod, SearchReport};

/// Parses `5,5` (or `1` for the trivial group). Non-chain factor lists are
/// normalized, e.g. `4,6` becomes the chain `2,12`.
pub fn parse_group(s: &str) -> Result<GroupSpec> {
    let s = s.trim();
    if s == "1" {
        return Ok(GroupSpec::trivial());
    }
    let factors: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>().context("bad group factor"))
        .collect::<Result<_>>()?;
    GroupSpec::normalize(&factors).map_err(|e| anyhow!("{e}"))
}

pub fn group_literal(group: &GroupSpec) -> String {
    group.to_string()
}

/// Parses `(2,3)`; the empty tuple `()` is the trivial group's element.
pub fn parse_element(group: &GroupSpec, s: &str) -> Result<GroupElement> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| anyhow!("element literal must look like (2,3)"))?;
    let coords: Vec<u64> = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|p| p.trim().parse::<u64>().context("bad coordinate"))
            .collect::<Result<_>>()?
    };
    GroupElement::new(group, &coords).map_err(|e| anyhow!("{e}"))
}

/// Element-list literal: `{(0,1),(2,3)}` in index order.
pub fn set_literal(set: &DenseSubset) -> String {
    let mut out = String::from("{");
    for (i, e) in set.elements().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&e.to_string());
    }
    out.push('}');
    out
}

/// Self-describing hex literal: `<group>:0x<words>`, the packed indicator
/// read as one big-endian hex integer (bit `i` is element index `i`).
pub fn set_hex_literal(set: &DenseSubset) -> String {
    let words = set.words();
    let mut hex = String::new();
    let mut leading = true;
    for w in words.iter().rev() {
        if leading {
            if *w == 0 && words.len() > 1 {
                continue;
            }
            hex.push_str(&format!("{w:x}"));
            leading = false;
        } else {
            hex.push_str(&format!("{w:016x}"));
        }
    }
    if hex.is_empty() {
        hex.push('0');
    }
    format!("{}:0x{}", group_literal(set.group()), hex)
}

/// Accepts both set literal forms. Element lists need the group from
/// context; hex literals carry their own group header (which must agree
/// with the context group when one is supplied).
pub fn parse_set(s: &str, group: Option<&GroupSpec>) -> Result<DenseSubset> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('{') {
        let inner = rest
            .strip_suffix('}')
            .ok_or_else(|| anyhow!("unterminated set literal"))?;
        let group = group.ok_or_else(|| anyhow!("element-list literals need --group"))?;
        let mut set = DenseSubset::empty(group.clone()).map_err(|e| anyhow!("{e}"))?;
        let mut depth = 0usize;
        let mut token = String::new();
        for ch in inner.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    token.push(ch);
                }
                ')' => {
                    depth -= 1;
                    token.push(ch);
                }
                ',' if depth == 0 => {
                    if !token.trim().is_empty() {
                        let e = parse_element(group, token.trim())?;
                        set.insert(e.index(group));
                    }
                    token.clear();
                }
                _ => token.push(ch),
            }
        }
        if !token.trim().is_empty() {
            let e = parse_element(group, token.trim())?;
            set.insert(e.index(group));
        }
        Ok(set)
    } else if let Some((head, hex)) = s.split_once(":0x") {
        let spec = parse_group(head)?;
        if let Some(g) = group {
            if g != &spec {
                bail!("set literal group {head} does not match --group {g}");
            }
        }
        let mut set = DenseSubset::empty(spec.clone()).map_err(|e| anyhow!("{e}"))?;
        for (bit_pos, digit) in hex.chars().rev().enumerate() {
            let v = digit.to_digit(16).ok_or_else(|| anyhow!("bad hex digit {digit}"))?;
            for b in 0..4u32 {
                if v >> b & 1 == 1 {
                    let idx = bit_pos as u64 * 4 + b as u64;
                    if idx >= spec.order() {
                        bail!("bit {idx} out of range for group {head}");
                    }
                    set.insert(idx);
                }
            }
        }
        Ok(set)
    } else {
        bail!("set literal must be {{(..),..}} or <group>:0x<hex>")
    }
}

pub fn constant_label(c: ConstantKind) -> &'static str {
    match c {
        ConstantKind::Mk => "Mk",
        ConstantKind::Nk => "Nk",
        ConstantKind::BtRho => "bt",
    }
}

pub fn method_label(m: SearchMethod) -> &'static str {
    match m {
        SearchMethod::Formula => "formula",
        SearchMethod::Exhaustive => "exhaustive",
        SearchMethod::Descending => "descending",
        SearchMethod::Stochastic => "stochastic",
    }
}

pub fn source_label(s: ValueSource) -> &'static str {
    s.as_str()
}

/// JSON form of a search report.
#[derive(Serialize, Deserialize, Debug)]
pub struct SearchReportJson {
    pub group: String,
    pub k: u32,
    pub constant: String,
    pub value: u64,
    pub witnesses: Vec<String>,
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_divisor: Option<u64>,
}

pub fn search_report_json(report: &SearchReport) -> SearchReportJson {
    SearchReportJson {
        group: group_literal(&report.group),
        k: report.k,
        constant: constant_label(report.constant).to_string(),
        value: report.value,
        witnesses: report.witnesses.iter().map(set_hex_literal).collect(),
        nodes: report.nodes_visited,
        elapsed_ms: report.elapsed.as_millis() as u64,
        method: method_label(report.method).to_string(),
        best_divisor: None,
    }
}
