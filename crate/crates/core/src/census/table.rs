use std::io;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::{birth, Birth, Tree, TreeCode};

pub const CSV_HEADER: [&str; 3] = ["tree_code", "birth", "count"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub tree_code: TreeCode,
    pub birth: Birth,
    pub count: u64,
}

/// Exact counts `π_T(x)` for every tree realised at or below `x`, sorted by
/// birth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusTable {
    limit: u64,
    rows: Vec<CensusRow>,
    #[serde(skip)]
    index: FxHashMap<TreeCode, usize>,
}

impl CensusTable {
    pub(crate) fn from_counts(
        limit: u64,
        counts: impl IntoIterator<Item = (Tree, u64)>,
    ) -> Result<Self> {
        let mut rows = Vec::new();
        for (tree, count) in counts {
            let b = birth(&tree)?;
            rows.push(CensusRow {
                tree_code: tree.encode(),
                birth: b,
                count,
            });
        }
        Self::from_rows(limit, rows)
    }

    fn from_rows(limit: u64, mut rows: Vec<CensusRow>) -> Result<Self> {
        rows.sort_by(|a, b| a.birth.cmp(&b.birth));
        let mut index = FxHashMap::default();
        for (i, row) in rows.iter().enumerate() {
            if index.insert(row.tree_code.clone(), i).is_some() {
                return Err(Error::domain(format!(
                    "tree {} listed twice",
                    row.tree_code
                )));
            }
        }
        Ok(CensusTable { limit, rows, index })
    }

    /// The bound `x` the table was built for.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn rows(&self) -> &[CensusRow] {
        &self.rows
    }

    /// Sum of all counts; equals `limit` for any table produced by a census.
    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn count(&self, t: &Tree) -> u64 {
        self.count_code(&t.encode())
    }

    pub fn count_code(&self, code: &TreeCode) -> u64 {
        self.index.get(code).map_or(0, |&i| self.rows[i].count)
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<()> {
        let io_err = |e: csv::Error| Error::Resource(format!("writing census: {e}"));
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER).map_err(io_err)?;
        for row in &self.rows {
            out.write_record([
                row.tree_code.as_str(),
                &row.birth.to_string(),
                &row.count.to_string(),
            ])
            .map_err(io_err)?;
        }
        out.flush()
            .map_err(|e| Error::Resource(format!("writing census: {e}")))
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("census csv is ascii")
    }

    /// Reads a table written by [`CensusTable::write_csv`]. The limit is
    /// recovered as the sum of the counts.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| Error::parse(0, e.to_string()))?;
        if header.iter().ne(CSV_HEADER) {
            return Err(Error::parse(
                0,
                format!("expected header {}", CSV_HEADER.join(",")),
            ));
        }
        let mut rows = Vec::new();
        let mut limit = 0u64;
        for record in reader.records() {
            let record = record.map_err(|e| {
                let at = e.position().map_or(0, |p| p.byte() as usize);
                Error::parse(at, e.to_string())
            })?;
            let at = record.position().map_or(0, |p| p.byte() as usize);
            let field = |i: usize| {
                record
                    .get(i)
                    .ok_or_else(|| Error::parse(at, "missing field"))
            };
            let tree_code: TreeCode = field(0)?.parse().map_err(|e| shift(e, at))?;
            let stated: Birth = field(1)?.parse().map_err(|e| shift(e, at))?;
            let count: u64 = field(2)?
                .parse()
                .map_err(|_| Error::parse(at, "count is not a u64"))?;
            if birth(&tree_code.decode())? != stated {
                return Err(Error::parse(at, format!("wrong birth for {tree_code}")));
            }
            limit = limit
                .checked_add(count)
                .ok_or_else(|| Error::parse(at, "counts overflow"))?;
            rows.push(CensusRow {
                tree_code,
                birth: stated,
                count,
            });
        }
        Self::from_rows(limit, rows)
    }
}

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::parse(offset + position, message),
        other => other,
    }
}
