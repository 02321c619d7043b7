//! Corpus files: JSONL (one document per line) or CSV with an `id,text` header.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::to_canonical_line;
use crate::text::Document;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl CorpusFormat {
    /// `.csv` files are CSV; everything else is read as JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<Document>> {
    let path = path.as_ref();
    let file = File::open(path)?;
    match CorpusFormat::from_path(path) {
        CorpusFormat::Jsonl => read_jsonl(BufReader::new(file)),
        CorpusFormat::Csv => read_csv(file),
    }
}

/// Reads JSON records, one per non-blank line.
pub fn read_records<T: DeserializeOwned>(reader: impl BufRead) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn read_jsonl(reader: impl BufRead) -> Result<Vec<Document>> {
    let docs = read_records(reader)?;
    check_documents(&docs)?;
    Ok(docs)
}

#[derive(Deserialize)]
struct CsvRow {
    id: String,
    text: String,
    #[serde(default)]
    group: Option<String>,
    #[serde(default)]
    truth_score: Option<f64>,
}

pub fn read_csv(reader: impl Read) -> Result<Vec<Document>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut docs = Vec::new();
    for (i, row) in rdr.deserialize::<CsvRow>().enumerate() {
        let row = row.map_err(|e| Error::Parse(format!("csv record {}: {e}", i + 1)))?;
        docs.push(Document {
            id: row.id,
            text: row.text,
            group: row.group.filter(|g| !g.is_empty()),
            truth_score: row.truth_score,
            parent_id: None,
        });
    }
    check_documents(&docs)?;
    Ok(docs)
}

fn check_documents(docs: &[Document]) -> Result<()> {
    let mut seen = HashSet::new();
    for doc in docs {
        doc.validate()?;
        if !seen.insert(doc.id.as_str()) {
            return Err(Error::invalid(format!(
                "duplicate document id {:?}",
                doc.id
            )));
        }
    }
    Ok(())
}

/// Writes one canonical JSON line per item.
pub fn write_jsonl<T: Serialize>(mut writer: impl Write, items: &[T]) -> Result<()> {
    for item in items {
        writer.write_all(to_canonical_line(item)?.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_roundtrip() {
        let docs = vec![
            Document::new("a", "We stand together.").with_group("x"),
            Document::new("b", "").with_truth_score(4.5),
        ];
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &docs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            r#"{"group":"x","id":"a","text":"We stand together."}"#
        );
        assert_eq!(read_jsonl(&buf[..]).unwrap(), docs);
    }

    #[test]
    fn jsonl_errors() {
        let dup = "{\"id\":\"a\",\"text\":\"x\"}\n\n{\"id\":\"a\",\"text\":\"y\"}\n";
        assert!(matches!(
            read_jsonl(dup.as_bytes()),
            Err(Error::InvalidInput(_))
        ));
        let bad = "{\"id\":\"a\"}\n";
        match read_jsonl(bad.as_bytes()) {
            Err(Error::Parse(m)) => assert!(m.starts_with("line 1")),
            other => panic!("{other:?}"),
        }
        let score = "{\"id\":\"a\",\"text\":\"x\",\"truth_score\":9}\n";
        assert!(read_jsonl(score.as_bytes()).is_err());
        assert!(read_jsonl(&b""[..]).unwrap().is_empty());
    }

    #[test]
    fn csv_ingest() {
        let data = "id,text,group,truth_score\na,\"Hello, world.\",victim,3\nb,Bye.,,\n";
        let docs = read_csv(data.as_bytes()).unwrap();
        assert_eq!(docs[0].text, "Hello, world.");
        assert_eq!(docs[0].group.as_deref(), Some("victim"));
        assert_eq!(docs[0].truth_score, Some(3.0));
        assert_eq!(docs[1].group, None);
        assert_eq!(docs[1].truth_score, None);
        let minimal = "id,text\nz,Only text.\n";
        assert_eq!(read_csv(minimal.as_bytes()).unwrap()[0].id, "z");
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(
            CorpusFormat::from_path(Path::new("x.CSV")),
            CorpusFormat::Csv
        );
        assert_eq!(
            CorpusFormat::from_path(Path::new("x.jsonl")),
            CorpusFormat::Jsonl
        );
        assert_eq!(CorpusFormat::from_path(Path::new("x")), CorpusFormat::Jsonl);
    }
}
