//! Surface-text helpers for entity names, relation names and templates.

/// Readable form of an entity name: the IRI local name, underscores as spaces.
pub fn surface_form(name: &str) -> String {
    local_name(name).replace('_', " ")
}

fn local_name(name: &str) -> &str {
    if name.contains("://") {
        let cut = name.rfind(['/', '#']).map(|i| i + 1).unwrap_or(0);
        if cut < name.len() {
            return &name[cut..];
        }
    }
    name
}

/// Splits camel case and punctuation into lower-case words.
///
/// `parentCompany` -> `["parent", "company"]`, `deathCause` -> `["death", "cause"]`.
pub fn relation_tokens(name: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut current = String::new();
    let mut prev_lower = false;
    for c in local_name(name).chars() {
        if !c.is_alphanumeric() {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            prev_lower = false;
            continue;
        }
        if c.is_uppercase() && prev_lower && !current.is_empty() {
            words.push(std::mem::take(&mut current));
        }
        prev_lower = c.is_lowercase() || c.is_ascii_digit();
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
}

/// Relation or type name as a lower-case phrase.
pub fn humanize(name: &str) -> String {
    relation_tokens(name).join(" ")
}

/// Indefinite article for a phrase.
pub fn article(phrase: &str) -> &'static str {
    match phrase.chars().next().map(|c| c.to_ascii_lowercase()) {
        Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
        _ => "a",
    }
}

/// Fills `{head}`, `{tail}`, `{relation}` and `{claim}` slots.
///
/// A literal `a(an)` is resolved against the word that follows it.
pub fn fill(template: &str, slots: &[(&str, &str)]) -> String {
    let mut out = template.to_string();
    for (key, value) in slots {
        out = out.replace(&format!("{{{key}}}"), value);
    }
    while let Some(i) = out.find("a(an) ") {
        let rest = &out[i + "a(an) ".len()..];
        let art = article(rest);
        out.replace_range(i..i + "a(an)".len(), art);
    }
    out
}

/// Placeholder names used by a template, in order of first appearance.
pub fn placeholders(template: &str) -> Vec<&str> {
    let mut found = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let Some(close) = rest[open..].find('}') else {
            break;
        };
        let name = &rest[open + 1..open + close];
        if !found.contains(&name) {
            found.push(name);
        }
        rest = &rest[open + close + 1..];
    }
    found
}

/// A claim sentence as it appears inside a wrapping template: trailing
/// sentence punctuation dropped.
pub fn embed_claim(text: &str) -> &str {
    text.trim().trim_end_matches(['.', '!', '?']).trim_end()
}

/// Lower-cases a sentence-initial article so the sentence can be embedded.
pub fn lower_leading_article(text: &str) -> String {
    for article in ["The ", "A ", "An "] {
        if let Some(rest) = text.strip_prefix(article) {
            return format!("{}{rest}", article.to_lowercase());
        }
    }
    text.to_string()
}

/// Byte offsets of `needle` in `text` where it is not part of a longer word.
fn word_matches(text: &str, needle: &str) -> Vec<usize> {
    if needle.is_empty() {
        return Vec::new();
    }
    let is_word = |c: Option<char>| c.is_some_and(|c| c.is_alphanumeric() || c == '_');
    text.match_indices(needle)
        .map(|(i, _)| i)
        .filter(|&i| {
            !is_word(text[..i].chars().next_back())
                && !is_word(text[i + needle.len()..].chars().next())
        })
        .collect()
}

/// Whether the text mentions an entity, by raw or surface name, as whole words.
pub fn mentions(text: &str, entity: &str) -> bool {
    !word_matches(text, entity).is_empty() || !word_matches(text, &surface_form(entity)).is_empty()
}

/// Replaces every whole-word mention of `entity` (raw or surface form) with
/// the phrases produced by `replacement(n)` for the n-th mention.
pub fn replace_mentions_with<F>(text: &str, entity: &str, mut replacement: F) -> Option<String>
where
    F: FnMut(usize) -> String,
{
    let raw = word_matches(text, entity);
    let (needle, hits) = if raw.is_empty() {
        let surface = surface_form(entity);
        let hits = word_matches(text, &surface);
        (surface, hits)
    } else {
        (entity.to_string(), raw)
    };
    if hits.is_empty() {
        return None;
    }
    let mut out = String::with_capacity(text.len());
    let mut last = 0;
    for (n, i) in hits.into_iter().enumerate() {
        out.push_str(&text[last..i]);
        out.push_str(&replacement(n));
        last = i + needle.len();
    }
    out.push_str(&text[last..]);
    Some(out)
}

/// Replaces every whole-word mention of `entity` with `replacement`.
pub fn replace_mention(text: &str, entity: &str, replacement: &str) -> Option<String> {
    replace_mentions_with(text, entity, |_| replacement.to_string())
}

/// Upper-cases the first letter of each sentence.
pub fn capitalize_sentences(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut start = true;
    for c in text.chars() {
        if start && c.is_alphabetic() {
            out.extend(c.to_uppercase());
            start = false;
        } else {
            out.push(c);
            if matches!(c, '.' | '!' | '?') {
                start = true;
            } else if !c.is_whitespace() {
                start = false;
            }
        }
    }
    out
}
