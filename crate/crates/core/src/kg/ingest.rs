//! Line-oriented triple readers: tab-separated and a small N-Triples subset.

use std::io::BufRead;

use super::{GraphBuilder, GraphConfig, KnowledgeGraph};
use crate::error::{Error, Result};
use crate::path::INVERSE_MARK;

const RDF_TYPE_IRI: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleFormat {
    /// `head<TAB>relation<TAB>tail`
    Tsv,
    /// `<iri> <iri> <iri-or-literal> .`
    NTriples,
}

impl TripleFormat {
    /// Guesses the format from a file name: `.nt` is N-Triples, anything else TSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("nt") => TripleFormat::NTriples,
            _ => TripleFormat::Tsv,
        }
    }
}

/// Reads every record from `source` into a frozen graph.
///
/// Blank lines and lines starting with `#` are skipped. The first malformed
/// line aborts ingest with its 1-based line number.
pub fn ingest_triples<R: BufRead>(
    source: R,
    format: TripleFormat,
    config: GraphConfig,
) -> Result<KnowledgeGraph> {
    let mut builder = GraphBuilder::new(config);
    let mut buf = String::new();
    let mut source = source;
    let mut line_no = 0usize;
    loop {
        buf.clear();
        if source.read_line(&mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = buf.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (h, r, t) = match format {
            TripleFormat::Tsv => parse_tsv(line).map_err(|m| Error::parse(line_no, m))?,
            TripleFormat::NTriples => parse_nt(line).map_err(|m| Error::parse(line_no, m))?,
        };
        if r.starts_with(INVERSE_MARK) {
            return Err(Error::parse(
                line_no,
                format!("relation {r:?} starts with the reserved inverse mark"),
            ));
        }
        builder.add(&h, &r, &t);
    }
    Ok(builder.finish())
}

pub fn ingest_str(text: &str, format: TripleFormat, config: GraphConfig) -> Result<KnowledgeGraph> {
    ingest_triples(text.as_bytes(), format, config)
}

fn parse_tsv(line: &str) -> std::result::Result<(String, String, String), String> {
    let mut fields = line.split('\t');
    let (Some(h), Some(r), Some(t), None) =
        (fields.next(), fields.next(), fields.next(), fields.next())
    else {
        return Err(format!(
            "expected 3 tab-separated fields, found {}",
            line.split('\t').count()
        ));
    };
    if h.is_empty() || r.is_empty() || t.is_empty() {
        return Err("empty field".to_string());
    }
    Ok((h.to_string(), r.to_string(), t.to_string()))
}

struct Cursor<'a> {
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start_matches([' ', '\t']);
    }

    fn iri(&mut self) -> std::result::Result<String, String> {
        let body = self.rest.strip_prefix('<').ok_or("expected '<'")?;
        let end = body.find('>').ok_or("unterminated IRI")?;
        let iri = &body[..end];
        if iri.is_empty() {
            return Err("empty IRI".into());
        }
        self.rest = &body[end + 1..];
        Ok(iri.to_string())
    }

    fn blank(&mut self) -> std::result::Result<String, String> {
        let end = self
            .rest
            .find(|c: char| c.is_whitespace())
            .unwrap_or(self.rest.len());
        let label = &self.rest[..end];
        if label.len() <= 2 {
            return Err("empty blank node label".into());
        }
        self.rest = &self.rest[end..];
        Ok(label.to_string())
    }

    fn subject(&mut self) -> std::result::Result<String, String> {
        if self.rest.starts_with("_:") {
            self.blank()
        } else {
            self.iri()
        }
    }

    fn literal(&mut self) -> std::result::Result<String, String> {
        let mut chars = self.rest.char_indices().skip(1);
        let mut value = String::new();
        let end = loop {
            let (i, c) = chars.next().ok_or("unterminated literal")?;
            match c {
                '"' => break i,
                '\\' => {
                    let (_, esc) = chars.next().ok_or("dangling escape")?;
                    match esc {
                        't' => value.push('\t'),
                        'n' => value.push('\n'),
                        'r' => value.push('\r'),
                        '"' => value.push('"'),
                        '\\' => value.push('\\'),
                        '\'' => value.push('\''),
                        'u' | 'U' => {
                            let width = if esc == 'u' { 4 } else { 8 };
                            let hex: String = (0..width)
                                .map(|_| chars.next().map(|(_, c)| c))
                                .collect::<Option<_>>()
                                .ok_or("short unicode escape")?;
                            let code =
                                u32::from_str_radix(&hex, 16).map_err(|_| "bad unicode escape")?;
                            value.push(char::from_u32(code).ok_or("invalid code point")?);
                        }
                        other => return Err(format!("unknown escape \\{other}")),
                    }
                }
                c => value.push(c),
            }
        };
        self.rest = &self.rest[end + 1..];
        // Language tags and datatypes are accepted and dropped.
        if let Some(tagged) = self.rest.strip_prefix('@') {
            let n = tagged
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
                .unwrap_or(tagged.len());
            self.rest = &tagged[n..];
        } else if let Some(typed) = self.rest.strip_prefix("^^") {
            self.rest = typed;
            self.iri()?;
        }
        Ok(value)
    }

    fn object(&mut self) -> std::result::Result<String, String> {
        if self.rest.starts_with('"') {
            self.literal()
        } else {
            self.subject()
        }
    }
}

fn parse_nt(line: &str) -> std::result::Result<(String, String, String), String> {
    let mut cur = Cursor { rest: line.trim() };
    let subject = cur.subject()?;
    cur.skip_ws();
    let mut predicate = cur.iri()?;
    cur.skip_ws();
    let object = cur.object()?;
    cur.skip_ws();
    let tail = cur
        .rest
        .strip_prefix('.')
        .ok_or("expected terminating '.'")?;
    let tail = tail.trim();
    if !tail.is_empty() && !tail.starts_with('#') {
        return Err(format!("trailing content {tail:?}"));
    }
    if predicate == RDF_TYPE_IRI {
        predicate = super::DEFAULT_TYPE_RELATION.to_string();
    }
    Ok((subject, predicate, object))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_three_lines() {
        let kg = ingest_str(
            "# ships\nAIDAstella\tshipBuilder\tMeyer_Werft\n\nMeyer_Werft\tlocation\tPapenburg\nAIDAstella\tshipOperator\tAIDA_Cruises\n",
            TripleFormat::Tsv,
            GraphConfig::default(),
        )
        .unwrap();
        assert_eq!(kg.triple_count(), 3);
        assert!(kg.contains_named("AIDAstella", "shipBuilder", "Meyer_Werft"));
    }

    #[test]
    fn tsv_bad_line_reports_number() {
        let err = ingest_str(
            "a\tr\tb\nbroken line\n",
            TripleFormat::Tsv,
            GraphConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(ingest_str("a\tr\tb\tc\n", TripleFormat::Tsv, GraphConfig::default()).is_err());
        assert!(ingest_str("a\t\tb\n", TripleFormat::Tsv, GraphConfig::default()).is_err());
    }

    #[test]
    fn reserved_inverse_mark() {
        assert!(ingest_str("a\t~r\tb\n", TripleFormat::Tsv, GraphConfig::default()).is_err());
    }

    #[test]
    fn crlf_lines() {
        let kg = ingest_str(
            "a\tr\tb\r\nb\tr\tc\r\n",
            TripleFormat::Tsv,
            GraphConfig::default(),
        )
        .unwrap();
        assert!(kg.contains_named("b", "r", "c"));
    }

    #[test]
    fn ntriples_subset() {
        let src = r#"
<http://dbpedia.org/resource/AIDAstella> <http://dbpedia.org/ontology/shipBuilder> <http://dbpedia.org/resource/Meyer_Werft> .
<http://dbpedia.org/resource/Meyer_Werft> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://dbpedia.org/ontology/Company> .
<http://dbpedia.org/resource/Meyer_Werft> <http://xmlns.com/foaf/0.1/name> "Meyer \"Werft\"!"@de .
_:b1 <http://example.org/p> "42"^^<http://www.w3.org/2001/XMLSchema#integer> . # trailing comment
"#;
        let kg = ingest_str(src, TripleFormat::NTriples, GraphConfig::default()).unwrap();
        assert_eq!(kg.triple_count(), 4);
        let m = kg
            .entity_id("http://dbpedia.org/resource/Meyer_Werft")
            .unwrap();
        assert_eq!(
            kg.entity_types(m),
            vec!["http://dbpedia.org/ontology/Company"]
        );
        assert!(kg.contains_named(
            "http://dbpedia.org/resource/Meyer_Werft",
            "http://xmlns.com/foaf/0.1/name",
            "Meyer \"Werft\"!"
        ));
        assert!(kg.contains_named("_:b1", "http://example.org/p", "42"));
    }

    #[test]
    fn ntriples_errors() {
        for bad in [
            "<a> <b> <c>",
            "<a> <b> \"open .",
            "a <b> <c> .",
            "<a> <b> <c> . extra",
        ] {
            assert!(
                ingest_str(bad, TripleFormat::NTriples, GraphConfig::default()).is_err(),
                "{bad}"
            );
        }
    }
}
