use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

const BUILTIN_RULES: &str = include_str!("../../data/detok_rules.txt");

/// Moses-style detokenization rule table.
///
/// The default table ships as `data/detok_rules.txt`; [`DetokRules::parse`]
/// accepts the same format for custom tables.
#[derive(Debug, Clone, Default)]
pub struct DetokRules {
    joiners: HashMap<String, String>,
    contractions: HashSet<String>,
    paired_quotes: Vec<(String, String)>,
    attach_left: HashSet<String>,
    attach_left_chars: HashSet<char>,
    attach_right: HashSet<String>,
}

#[derive(Clone, Copy, Default)]
struct Glue {
    left: bool,
    right: bool,
}

impl DetokRules {
    pub fn builtin() -> &'static DetokRules {
        static RULES: OnceLock<DetokRules> = OnceLock::new();
        RULES.get_or_init(|| DetokRules::parse(BUILTIN_RULES).expect("builtin detokenizer rules"))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut rules = DetokRules::default();
        let mut section: Option<&str> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(name);
                continue;
            }
            let entry = line.to_owned();
            match section {
                Some("joiners") => {
                    let (token, render) = line
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| format!("line {}: joiner needs a rendering", n + 1))?;
                    rules
                        .joiners
                        .insert(token.to_owned(), render.trim().to_owned());
                }
                Some("contractions") => {
                    rules.contractions.insert(entry.to_lowercase());
                }
                Some("paired_quotes") => {
                    let mut parts = line.split_whitespace();
                    let mark = parts.next().unwrap_or_default().to_owned();
                    rules
                        .paired_quotes
                        .push((mark, parts.next().unwrap_or_default().to_owned()));
                }
                Some("attach_left") => {
                    rules.attach_left.insert(entry);
                }
                Some("attach_left_chars") => rules.attach_left_chars.extend(line.chars()),
                Some("attach_right") => {
                    rules.attach_right.insert(entry);
                }
                Some(other) => return Err(format!("line {}: unknown section [{other}]", n + 1)),
                None => return Err(format!("line {}: entry outside of a section", n + 1)),
            }
        }
        Ok(rules)
    }

    /// Rejoins whitespace-tokenized text into its surface form.
    ///
    /// Idempotent: text that is already detokenized comes back unchanged
    /// apart from whitespace runs collapsing to single spaces.
    pub fn detokenize(&self, text: &str) -> String {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let mut quote_open = vec![false; self.paired_quotes.len()];
        let mut out = String::with_capacity(text.len());
        let mut prev_glue_right = false;

        for (i, &token) in tokens.iter().enumerate() {
            let (render, glue) =
                self.classify(token, i.checked_sub(1).map(|j| tokens[j]), &mut quote_open);
            if i > 0 && !glue.left && !prev_glue_right {
                out.push(' ');
            }
            out.push_str(render);
            prev_glue_right = glue.right;
        }
        out
    }

    fn classify<'a>(
        &'a self,
        token: &'a str,
        prev: Option<&str>,
        quote_open: &mut [bool],
    ) -> (&'a str, Glue) {
        if let Some(render) = self.joiners.get(token) {
            return (
                render,
                Glue {
                    left: true,
                    right: true,
                },
            );
        }
        if self.contractions.contains(&token.to_lowercase())
            && prev
                .and_then(|p| p.chars().last())
                .is_some_and(char::is_alphanumeric)
        {
            return (
                token,
                Glue {
                    left: true,
                    right: false,
                },
            );
        }
        if let Some(q) = self
            .paired_quotes
            .iter()
            .position(|(mark, _)| mark == token)
        {
            let closing = quote_open[q];
            let possessive = &self.paired_quotes[q].1;
            if !closing
                && prev
                    .and_then(|p| p.chars().last())
                    .is_some_and(|c| possessive.contains(c))
            {
                return (
                    token,
                    Glue {
                        left: true,
                        right: false,
                    },
                );
            }
            quote_open[q] = !closing;
            return (
                token,
                Glue {
                    left: closing,
                    right: !closing,
                },
            );
        }
        let left = self.attach_left.contains(token)
            || token.chars().all(|c| self.attach_left_chars.contains(&c));
        let right = self.attach_right.contains(token);
        (token, Glue { left, right })
    }
}

/// Detokenizes with the built-in rule table.
pub fn detokenize(text: &str) -> String {
    DetokRules::builtin().detokenize(text)
}
