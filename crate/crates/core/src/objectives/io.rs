use std::io::Read;

use super::KeywordTable;
use crate::{Error, Result};

/// Reads `id,f1,...,fd` rows. Ids must be exactly `0..n` in some order;
/// the result is indexed by id.
pub fn read_feature_csv(reader: impl Read) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let mut fields = record.iter();
        let id = parse_id(fields.next(), line)?;
        let values = fields
            .map(|s| {
                s.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("bad feature {s:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((id, values));
    }
    into_dense(rows)
}

/// Reads `id,value,word1;word2;...` rows.
pub fn read_keyword_csv(reader: impl Read) -> Result<KeywordTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i + 1;
        let first = record.get(0).unwrap_or("").trim();
        if first.is_empty() || first.starts_with('#') || first == "id" {
            continue;
        }
        let id = parse_id(Some(first), line)?;
        let value_field = record.get(1).ok_or(Error::Parse {
            line,
            message: "missing value column".into(),
        })?;
        let value: f64 = value_field.trim().parse().map_err(|e| Error::Parse {
            line,
            message: format!("bad value {value_field:?}: {e}"),
        })?;
        let words = record
            .get(2)
            .unwrap_or("")
            .split(';')
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(str::to_owned)
            .collect();
        rows.push((id, (words, value)));
    }
    KeywordTable::new(into_dense(rows)?)
}

fn parse_id(field: Option<&str>, line: usize) -> Result<usize> {
    let field = field.unwrap_or("").trim();
    field.parse().map_err(|e| Error::Parse {
        line,
        message: format!("bad id {field:?}: {e}"),
    })
}

fn into_dense<T>(mut rows: Vec<(usize, T)>) -> Result<Vec<T>> {
    rows.sort_by_key(|r| r.0);
    for (expected, (id, _)) in rows.iter().enumerate() {
        if *id != expected {
            return Err(Error::InvalidInput(format!(
                "ids must be 0..{} without gaps or repeats; found {id} at position {expected}",
                rows.len()
            )));
        }
    }
    Ok(rows.into_iter().map(|r| r.1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn features_round_trip() {
        let data = "id,f1,f2\n1,0.5,1\n0,2,3\n";
        let f = read_feature_csv(data.as_bytes()).unwrap();
        assert_eq!(f, vec![vec![2.0, 3.0], vec![0.5, 1.0]]);
    }

    #[test]
    fn feature_gap_rejected() {
        assert!(read_feature_csv("id,f1\n0,1\n2,1\n".as_bytes()).is_err());
        assert!(matches!(
            read_feature_csv("id,f1\n0,x\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn keywords() {
        let data = "id,value,words\n0,4,rust;graphs\n1,9,graphs\n";
        let t = read_keyword_csv(data.as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.words(0), ["rust", "graphs"]);
        assert_eq!(t.value(1), 9.0);
    }
}
