//! CoNLL-U reader (10 tab-separated columns, blank-line sentence breaks).
//!
//! Only the fields the pipeline needs are kept: form, lemma, UPOS, head and
//! deprel. Multiword-token range lines (`1-2`) and empty nodes (`1.1`) are
//! skipped. Character offsets are reconstructed from `# text = ...` comments
//! when present, otherwise forms are laid out with single spaces; sentences
//! are separated by one space in the reconstructed document text.

use std::fs;
use std::path::Path;

use crate::model::{char_len, Sentence, Token, Upos};
use crate::{Error, Result};

/// Parse CoNLL-U input into sentences plus the reconstructed text the token
/// offsets refer to.
pub fn read_conllu_with_text(path: impl AsRef<Path>) -> Result<(Vec<Sentence>, String)> {
    let path = path.as_ref();
    let input = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_conllu(&input, path)
}

/// Parse CoNLL-U input into sentences.
pub fn read_conllu(path: impl AsRef<Path>) -> Result<Vec<Sentence>> {
    read_conllu_with_text(path).map(|(sentences, _)| sentences)
}

struct RawToken {
    form: String,
    lemma: Option<String>,
    pos: Option<Upos>,
    head: Option<usize>,
    deprel: Option<String>,
    line: usize,
}

pub fn parse_conllu(input: &str, origin: &Path) -> Result<(Vec<Sentence>, String)> {
    let mut sentences = Vec::new();
    let mut text = String::new();

    let mut pending: Vec<RawToken> = Vec::new();
    let mut pending_text: Option<String> = None;

    let flush = |pending: &mut Vec<RawToken>,
                     pending_text: &mut Option<String>,
                     sentences: &mut Vec<Sentence>,
                     text: &mut String|
     -> Result<()> {
        if pending.is_empty() {
            *pending_text = None;
            return Ok(());
        }
        if !text.is_empty() {
            text.push(' ');
        }
        let base = char_len(text);
        let sentence = match pending_text.take() {
            Some(sent_text) => {
                let tokens = align_tokens(pending, &sent_text, base, origin)?;
                text.push_str(&sent_text);
                tokens
            }
            None => {
                let mut tokens = Vec::new();
                let mut cursor = base;
                for (i, raw) in pending.iter().enumerate() {
                    if i > 0 {
                        text.push(' ');
                        cursor += 1;
                    }
                    let len = char_len(&raw.form);
                    tokens.push(make_token(raw, cursor, cursor + len));
                    text.push_str(&raw.form);
                    cursor += len;
                }
                tokens
            }
        };
        sentences.push(Sentence::new(sentence));
        pending.clear();
        Ok(())
    };

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            flush(&mut pending, &mut pending_text, &mut sentences, &mut text)?;
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim_start().strip_prefix("text =") {
                pending_text = Some(value.trim_start().to_string());
            } else if let Some(value) = comment.trim_start().strip_prefix("text=") {
                pending_text = Some(value.trim_start().to_string());
            }
            continue;
        }

        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::parse(
                origin,
                lineno,
                format!("expected 10 tab-separated columns, found {}", cols.len()),
            ));
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            // Multiword-token range or empty node: keep word lines only.
            continue;
        }
        id.parse::<usize>().map_err(|_| {
            Error::parse(origin, lineno, format!("invalid token id {id:?}"))
        })?;

        let opt = |s: &str| -> Option<String> {
            if s == "_" {
                None
            } else {
                Some(s.to_string())
            }
        };
        let pos = match cols[3] {
            "_" => None,
            tag => Some(
                tag.parse::<Upos>()
                    .map_err(|e| Error::parse(origin, lineno, e))?,
            ),
        };
        let head = match cols[6] {
            "_" => None,
            h => Some(h.parse::<usize>().map_err(|_| {
                Error::parse(origin, lineno, format!("invalid head {h:?}"))
            })?),
        };

        pending.push(RawToken {
            form: cols[1].to_string(),
            lemma: opt(cols[2]),
            pos,
            head,
            deprel: opt(cols[7]),
            line: lineno,
        });
    }
    flush(&mut pending, &mut pending_text, &mut sentences, &mut text)?;

    Ok((sentences, text))
}

fn make_token(raw: &RawToken, start: usize, end: usize) -> Token {
    Token {
        text: raw.form.clone(),
        span: crate::model::Span::new(start, end),
        lemma: raw.lemma.clone(),
        pos: raw.pos,
        head: raw.head,
        deprel: raw.deprel.clone(),
    }
}

/// Place each form at its next occurrence inside the sentence text.
fn align_tokens(
    raws: &[RawToken],
    sent_text: &str,
    base: usize,
    origin: &Path,
) -> Result<Vec<Token>> {
    let chars: Vec<char> = sent_text.chars().collect();
    let mut tokens = Vec::new();
    let mut cursor = 0usize;
    for raw in raws {
        let form: Vec<char> = raw.form.chars().collect();
        let pos = find_chars(&chars, &form, cursor).ok_or_else(|| {
            Error::parse(
                origin,
                raw.line,
                format!("token {:?} not found in sentence text", raw.form),
            )
        })?;
        tokens.push(make_token(raw, base + pos, base + pos + form.len()));
        cursor = pos + form.len();
    }
    Ok(tokens)
}

fn find_chars(haystack: &[char], needle: &[char], from: usize) -> Option<usize> {
    if needle.is_empty() {
        return Some(from);
    }
    (from..=haystack.len().saturating_sub(needle.len()))
        .find(|&i| haystack[i..i + needle.len()] == *needle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn origin() -> PathBuf {
        PathBuf::from("<test>")
    }

    const THREE_TOKENS: &str = "\
1\tголова\tголова\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\tболит\tболеть\tVERB\t_\t_\t0\troot\t_\t_
3\tсильно\tсильно\tADV\t_\t_\t2\tadvmod\t_\t_
";

    #[test]
    fn heads_and_lemmas_are_kept() {
        let (sents, _) = parse_conllu(THREE_TOKENS, &origin()).unwrap();
        assert_eq!(sents.len(), 1);
        let toks = &sents[0].tokens;
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[1].head, Some(0)); // root
        assert_eq!(toks[0].head, Some(2));
        assert_eq!(toks[1].lemma.as_deref(), Some("болеть"));
        assert_eq!(toks[2].pos, Some(Upos::ADV));
    }

    #[test]
    fn blank_line_separates_sentences() {
        let input = format!("{THREE_TOKENS}\n1\tда\tда\tPART\t_\t_\t0\troot\t_\t_\n");
        let (sents, text) = parse_conllu(&input, &origin()).unwrap();
        assert_eq!(sents.len(), 2);
        // Sentences joined with a single space in the reconstructed text.
        assert_eq!(text, "голова болит сильно да");
        assert_eq!(sents[1].tokens[0].span.start, 20);
    }

    #[test]
    fn multiword_range_line_is_skipped() {
        let input = "\
1-2\tзаболело\t_\t_\t_\t_\t_\t_\t_\t_
1\tза\tза\tADP\t_\t_\t2\tcase\t_\t_
2\tболело\tболеть\tVERB\t_\t_\t0\troot\t_\t_
";
        let (sents, _) = parse_conllu(input, &origin()).unwrap();
        assert_eq!(sents[0].tokens.len(), 2);
        assert_eq!(sents[0].tokens[0].text, "за");
    }

    #[test]
    fn text_comment_drives_offsets() {
        let input = "\
# text = Боль -- прошла!
1\tБоль\tболь\tNOUN\t_\t_\t0\troot\t_\t_
2\tпрошла\tпройти\tVERB\t_\t_\t1\tacl\t_\t_
3\t!\t!\tPUNCT\t_\t_\t1\tpunct\t_\t_
";
        let (sents, text) = parse_conllu(input, &origin()).unwrap();
        assert_eq!(text, "Боль -- прошла!");
        let toks = &sents[0].tokens;
        assert_eq!(toks[0].span, crate::model::Span::new(0, 4));
        assert_eq!(toks[1].span, crate::model::Span::new(8, 14));
        assert_eq!(toks[2].span, crate::model::Span::new(14, 15));
    }

    #[test]
    fn wrong_column_count_reports_line() {
        let input = "1\tболь\tболь\n";
        let err = parse_conllu(input, &origin()).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 1);
                assert!(message.contains("10"));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn missing_form_in_text_comment_is_an_error() {
        let input = "\
# text = совсем другое
1\tболь\tболь\tNOUN\t_\t_\t0\troot\t_\t_
";
        assert!(parse_conllu(input, &origin()).is_err());
    }
}
