//! Small text normalization helpers shared across modules.

use unicode_normalization::UnicodeNormalization;

/// NFC-normalizes `text`.
pub fn nfc(text: &str) -> String {
    text.nfc().collect()
}

/// Collapses every whitespace run to a single space and trims both ends.
pub fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// NFC followed by whitespace collapse. Case is preserved.
pub fn normalize(text: &str) -> String {
    collapse_whitespace(&nfc(text))
}
