//! CSV ingestion with an explicit column schema.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Cell, RawDataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
}

/// Declared columns plus the name of the label column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub columns: Vec<ColumnSpec>,
    pub label_column: String,
}

impl Schema {
    /// Feature columns, in declaration order (label excluded).
    pub fn feature_columns(&self) -> impl Iterator<Item = &ColumnSpec> {
        self.columns.iter().filter(|c| c.name != self.label_column)
    }

    /// Sniffs a schema from the file itself: a column is numeric when every
    /// cell parses as a number. The label column is always categorical.
    pub fn infer(path: impl AsRef<Path>, label_column: &str) -> Result<Schema> {
        let path = path.as_ref();
        let mut reader = open(path)?;
        let headers: Vec<String> = headers(&mut reader, path)?;
        if !headers.iter().any(|h| h == label_column) {
            return Err(Error::MissingColumn {
                column: label_column.to_string(),
            });
        }
        let mut numeric = vec![true; headers.len()];
        let mut saw_row = false;
        for record in reader.records() {
            let record = record.map_err(|e| csv_err(path, e))?;
            saw_row = true;
            for (idx, cell) in record.iter().enumerate() {
                if numeric[idx] && cell.trim().parse::<f64>().is_err() {
                    numeric[idx] = false;
                }
            }
        }
        if !saw_row {
            return Err(Error::EmptyFile {
                path: path.display().to_string(),
            });
        }
        let columns = headers
            .into_iter()
            .enumerate()
            .map(|(idx, name)| {
                let kind = if name == label_column || !numeric[idx] {
                    ColumnKind::Categorical
                } else {
                    ColumnKind::Numeric
                };
                ColumnSpec { name, kind }
            })
            .collect();
        Ok(Schema {
            columns,
            label_column: label_column.to_string(),
        })
    }
}

/// Reads a CSV file against a declared schema.
///
/// Errors carry the 1-based data row and the column name so bad cells can
/// be located in the source file.
pub fn load_csv(path: impl AsRef<Path>, schema: &Schema) -> Result<RawDataset> {
    let path = path.as_ref();
    let mut reader = open(path)?;
    let headers = headers(&mut reader, path)?;

    // Map each schema column to its position in the file.
    let mut positions = Vec::with_capacity(schema.columns.len());
    for spec in &schema.columns {
        let pos = headers
            .iter()
            .position(|h| *h == spec.name)
            .ok_or_else(|| Error::MissingColumn {
                column: spec.name.clone(),
            })?;
        positions.push(pos);
    }
    let label_pos = schema
        .columns
        .iter()
        .position(|c| c.name == schema.label_column)
        .ok_or_else(|| Error::MissingColumn {
            column: schema.label_column.clone(),
        })?;

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_err(path, e))?;
        let row_no = row_idx + 1;
        let mut row = Vec::with_capacity(schema.columns.len().saturating_sub(1));
        for (spec_idx, spec) in schema.columns.iter().enumerate() {
            let raw = record.get(positions[spec_idx]).ok_or_else(|| Error::Csv {
                path: path.display().to_string(),
                detail: format!("row {row_no} is missing column `{}`", spec.name),
            })?;
            if spec_idx == label_pos {
                labels.push(raw.trim().to_string());
                continue;
            }
            let cell = match spec.kind {
                ColumnKind::Numeric => {
                    let v = raw.trim().parse::<f64>().map_err(|_| Error::BadNumericCell {
                        row: row_no,
                        column: spec.name.clone(),
                        value: raw.to_string(),
                    })?;
                    Cell::Num(v)
                }
                ColumnKind::Categorical => Cell::Cat(raw.trim().to_string()),
            };
            row.push(cell);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile {
            path: path.display().to_string(),
        });
    }
    let distinct: std::collections::BTreeSet<&String> = labels.iter().collect();
    if distinct.len() < 2 {
        return Err(Error::DegenerateLabels {
            column: schema.label_column.clone(),
        });
    }
    Ok(RawDataset {
        schema: schema.clone(),
        rows,
        labels,
    })
}

fn open(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file))
}

fn headers(reader: &mut csv::Reader<std::fs::File>, path: &Path) -> Result<Vec<String>> {
    let headers = reader.headers().map_err(|e| csv_err(path, e))?;
    if headers.is_empty() {
        return Err(Error::EmptyFile {
            path: path.display().to_string(),
        });
    }
    Ok(headers.iter().map(|h| h.trim().to_string()).collect())
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Csv {
        path: path.display().to_string(),
        detail: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn schema_f1f2() -> Schema {
        Schema {
            columns: vec![
                ColumnSpec {
                    name: "f1".into(),
                    kind: ColumnKind::Numeric,
                },
                ColumnSpec {
                    name: "f2".into(),
                    kind: ColumnKind::Numeric,
                },
                ColumnSpec {
                    name: "label".into(),
                    kind: ColumnKind::Categorical,
                },
            ],
            label_column: "label".into(),
        }
    }

    #[test]
    fn three_line_csv_has_two_records() {
        let f = write_tmp("f1,f2,label\n1,2,a\n3,4,b\n");
        let raw = load_csv(f.path(), &schema_f1f2()).unwrap();
        assert_eq!(raw.len(), 2);
        assert_eq!(raw.labels, vec!["a", "b"]);
    }

    #[test]
    fn bad_numeric_cell_names_row_and_column() {
        let mut content = String::from("f1,f2,label\n");
        for i in 0..16 {
            content.push_str(&format!("{i},1,a\n"));
        }
        content.push_str("oops,1,b\n");
        let f = write_tmp(&content);
        match load_csv(f.path(), &schema_f1f2()) {
            Err(Error::BadNumericCell { row, column, .. }) => {
                assert_eq!(row, 17);
                assert_eq!(column, "f1");
            }
            other => panic!("expected BadNumericCell, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_rejected() {
        let f = write_tmp("f1,f2,label\n");
        assert!(matches!(
            load_csv(f.path(), &schema_f1f2()),
            Err(Error::EmptyFile { .. })
        ));
    }

    #[test]
    fn missing_column_is_rejected() {
        let f = write_tmp("f1,label\n1,a\n2,b\n");
        assert!(matches!(
            load_csv(f.path(), &schema_f1f2()),
            Err(Error::MissingColumn { .. })
        ));
    }

    #[test]
    fn single_label_value_is_rejected() {
        let f = write_tmp("f1,f2,label\n1,2,a\n3,4,a\n");
        assert!(matches!(
            load_csv(f.path(), &schema_f1f2()),
            Err(Error::DegenerateLabels { .. })
        ));
    }

    #[test]
    fn infer_marks_mixed_column_categorical() {
        let f = write_tmp("f1,colour,label\n1,red,a\n2,white,b\n");
        let schema = Schema::infer(f.path(), "label").unwrap();
        assert_eq!(schema.columns[0].kind, ColumnKind::Numeric);
        assert_eq!(schema.columns[1].kind, ColumnKind::Categorical);
        assert_eq!(schema.columns[2].kind, ColumnKind::Categorical);
    }
}
