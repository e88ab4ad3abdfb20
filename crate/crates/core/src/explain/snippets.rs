use alloc::vec::Vec;

use crate::corpus::TokenSpan;
use crate::error::{Error, Result};

/// A window of at most `size` tokens. Shorter only at the document end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Snippet {
    pub span: TokenSpan,
    pub size: usize,
}

/// Overlapping windows of `n` tokens with stride `n / 2`.
///
/// Window `i` covers `[i·n/2, min(i·n/2 + n, W))`; generation stops at the
/// first window that reaches the end of the document.
pub fn generate_snippets<T>(doc_tokens: &[T], n: usize) -> Result<Vec<Snippet>> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidConfig(alloc::format!(
            "snippet size must be even and >= 2, got {n}"
        )));
    }
    let total = doc_tokens.len();
    let stride = n / 2;
    let mut out = Vec::new();
    if total == 0 {
        return Ok(out);
    }
    let mut start = 0;
    loop {
        let end = (start + n).min(total);
        out.push(Snippet {
            span: TokenSpan { start, end },
            size: n,
        });
        if end == total {
            break;
        }
        start += stride;
    }
    Ok(out)
}
