//! Stand-alone HTML rendering of an explanation.
//!
//! The document text sits in a single `<pre class="document">` element.
//! Removing the tags inside it and decoding the five escaped characters gives
//! back the raw text byte for byte.

use std::fmt::Write;

use rationale_core::{Document, ExplanationReport};

use crate::display_score;

/// Byte range of every token of `text`, in token order.
pub fn token_offsets(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_alphanumeric(), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, text.len()));
    }
    out
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

/// A highlighted byte range and the 1-based ranks of the snippets it merges.
#[derive(Debug, Clone, PartialEq)]
struct Region {
    start: usize,
    end: usize,
    ranks: Vec<usize>,
}

fn regions(report: &ExplanationReport, offsets: &[(usize, usize)], top_k: usize) -> Vec<Region> {
    let mut spans: Vec<Region> = report
        .snippets
        .iter()
        .take(top_k)
        .enumerate()
        .filter(|(_, s)| s.snippet.span.end <= offsets.len())
        .map(|(i, s)| Region {
            start: offsets[s.snippet.span.start].0,
            end: offsets[s.snippet.span.end - 1].1,
            ranks: vec![i + 1],
        })
        .collect();
    spans.sort_by_key(|r| (r.start, r.end));
    let mut merged: Vec<Region> = Vec::new();
    for r in spans {
        match merged.last_mut() {
            Some(last) if r.start <= last.end => {
                last.end = last.end.max(r.end);
                last.ranks.extend(r.ranks);
            }
            _ => merged.push(r),
        }
    }
    for m in &mut merged {
        m.ranks.sort_unstable();
    }
    merged
}

/// Renders `doc` with its top `top_k` snippets highlighted.
///
/// Overlapping snippets are merged into one highlight that lists every
/// contributing rank. Scores are shown on a 0–100 scale.
pub fn render_html(report: &ExplanationReport, doc: &Document, top_k: usize) -> String {
    let text = doc.raw_text();
    let offsets = token_offsets(text);
    let mut body = String::new();
    let mut pos = 0;
    for r in regions(report, &offsets, top_k) {
        body.push_str(&escape(&text[pos..r.start]));
        let mut title = String::new();
        for (n, rank) in r.ranks.iter().enumerate() {
            let s = &report.snippets[rank - 1];
            if n > 0 {
                title.push_str("; ");
            }
            let _ = write!(
                title,
                "#{rank} tokens {}: fused {} snippet {} complement {} keyword {}",
                s.snippet.span,
                display_score(s.fused_score),
                display_score(s.snippet_score),
                display_score(s.complement_score),
                display_score(s.token_score),
            );
        }
        let _ = write!(
            body,
            "<mark data-rank=\"{}\" title=\"{}\">{}</mark>",
            r.ranks[0],
            escape(&title),
            escape(&text[r.start..r.end])
        );
        pos = r.end;
    }
    body.push_str(&escape(&text[pos..]));

    let verdict = if report.classified_responsive { "responsive" } else { "not responsive" };
    let mut keywords = String::new();
    for k in report.keywords.iter().take(10) {
        let _ = write!(keywords, "<li>{} ({})</li>", escape(&k.token), display_score(k.cscore));
    }
    let flip = match &report.flip_set {
        Some(set) => format!("<p class=\"flip\">Removing {} flips the decision.</p>", escape(&set.join(", "))),
        None => String::new(),
    };
    format!(
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>{id}</title>\n\
         <style>mark{{background:#ffe08a}}pre.document{{white-space:pre-wrap}}</style></head>\n\
         <body><h1>{id}</h1><p class=\"score\">Document score {score} ({verdict})</p>\n\
         <ul class=\"keywords\">{keywords}</ul>{flip}\n\
         <pre class=\"document\">{body}</pre>\n</body></html>\n",
        id = escape(&report.id),
        score = display_score(report.doc_score),
    )
}
