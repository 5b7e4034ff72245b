//! Single-file index store.
//!
//! Twelve tables hold the crawl: `urllist` and `wordlist` hand out
//! insertion-order row ids, `wordlocation` holds postings, `link` and
//! `linkwords` hold the web graph with its anchor text, and seven score
//! tables hold precomputed query-independent scores. A small `indexmeta`
//! key/value table records the schema version and the stemming flag.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use rusqlite::{ffi, params, Connection, OpenFlags, OptionalExtension};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{Pipeline, StopList};

pub const SCHEMA_VERSION: &str = "1";

/// Row id in `urllist`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PageId(pub i64);

/// Row id in `wordlist`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WordId(pub i64);

/// Row id in `link`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinkId(pub i64);

impl fmt::Display for PageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub urlid: PageId,
    pub wordid: WordId,
    pub location: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkRecord {
    pub linkid: LinkId,
    pub fromid: PageId,
    pub toid: PageId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreTable {
    PageLength,
    PageRank,
    AuthHits,
    HubHits,
    AuthMyHits,
    HubMyHits,
    MyPageRank,
}

impl ScoreTable {
    pub const ALL: [ScoreTable; 7] = [
        ScoreTable::PageLength,
        ScoreTable::PageRank,
        ScoreTable::AuthHits,
        ScoreTable::HubHits,
        ScoreTable::AuthMyHits,
        ScoreTable::HubMyHits,
        ScoreTable::MyPageRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScoreTable::PageLength => "pagelength",
            ScoreTable::PageRank => "pagerank",
            ScoreTable::AuthHits => "auth_hits",
            ScoreTable::HubHits => "hub_hits",
            ScoreTable::AuthMyHits => "auth_myhits",
            ScoreTable::HubMyHits => "hub_myhits",
            ScoreTable::MyPageRank => "mypagerank",
        }
    }

    fn value_column(self) -> &'static str {
        match self {
            ScoreTable::PageLength => "length",
            _ => "score",
        }
    }

    pub fn has_constant(self) -> bool {
        matches!(
            self,
            ScoreTable::AuthMyHits | ScoreTable::HubMyHits | ScoreTable::MyPageRank
        )
    }
}

impl FromStr for ScoreTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScoreTable::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownScoreTable(s.to_string()))
    }
}

impl fmt::Display for ScoreTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexMeta {
    pub stemming_enabled: bool,
    pub stop_list_version: String,
    pub created_at: String,
    pub schema_version: String,
}

impl IndexMeta {
    /// The text pipeline every reader and writer of this index must use.
    pub fn pipeline(&self) -> Pipeline {
        Pipeline::new(self.stemming_enabled, StopList::english())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexStats {
    pub urls: u64,
    pub indexed_pages: u64,
    pub words: u64,
    pub postings: u64,
    pub links: u64,
    pub link_words: u64,
}

/// Which offline analysis steps have populated their tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnalysisStatus {
    pub lengths: bool,
    pub pagerank: bool,
    pub hits: bool,
    pub weighted: bool,
    pub hot_indexes: bool,
}

impl AnalysisStatus {
    pub fn pending(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (done, name) in [
            (self.lengths, "lengths"),
            (self.pagerank, "pagerank"),
            (self.hits, "hits"),
            (self.weighted, "weighted"),
            (self.hot_indexes, "hot-indexes"),
        ] {
            if !done {
                out.push(name);
            }
        }
        out
    }
}

const SCHEMA: &str = "
CREATE TABLE IF NOT EXISTS indexmeta(key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS urllist(
    rowid INTEGER PRIMARY KEY,
    url TEXT NOT NULL UNIQUE,
    indexed INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS wordlist(
    rowid INTEGER PRIMARY KEY,
    word TEXT NOT NULL UNIQUE
);
CREATE TABLE IF NOT EXISTS wordlocation(
    urlid INTEGER NOT NULL REFERENCES urllist(rowid),
    wordid INTEGER NOT NULL REFERENCES wordlist(rowid),
    location INTEGER NOT NULL CHECK (location >= 0)
);
CREATE UNIQUE INDEX IF NOT EXISTS wordlocation_url_location ON wordlocation(urlid, location);
CREATE INDEX IF NOT EXISTS wordurlidx ON wordlocation(wordid);
CREATE TABLE IF NOT EXISTS link(
    rowid INTEGER PRIMARY KEY,
    fromid INTEGER NOT NULL REFERENCES urllist(rowid),
    toid INTEGER NOT NULL REFERENCES urllist(rowid)
);
CREATE INDEX IF NOT EXISTS urltoidx ON link(toid);
CREATE INDEX IF NOT EXISTS urlfromidx ON link(fromid);
CREATE TABLE IF NOT EXISTS linkwords(
    wordid INTEGER NOT NULL REFERENCES wordlist(rowid),
    linkid INTEGER NOT NULL REFERENCES link(rowid)
);
CREATE TABLE IF NOT EXISTS pagelength(urlid INTEGER PRIMARY KEY REFERENCES urllist(rowid), length REAL NOT NULL);
CREATE TABLE IF NOT EXISTS pagerank(urlid INTEGER PRIMARY KEY REFERENCES urllist(rowid), score REAL NOT NULL);
CREATE TABLE IF NOT EXISTS auth_hits(urlid INTEGER PRIMARY KEY REFERENCES urllist(rowid), score REAL NOT NULL);
CREATE TABLE IF NOT EXISTS hub_hits(urlid INTEGER PRIMARY KEY REFERENCES urllist(rowid), score REAL NOT NULL);
CREATE TABLE IF NOT EXISTS auth_myhits(urlid INTEGER PRIMARY KEY REFERENCES urllist(rowid), score REAL NOT NULL, constant REAL NOT NULL);
CREATE TABLE IF NOT EXISTS hub_myhits(urlid INTEGER PRIMARY KEY REFERENCES urllist(rowid), score REAL NOT NULL, constant REAL NOT NULL);
CREATE TABLE IF NOT EXISTS mypagerank(urlid INTEGER PRIMARY KEY REFERENCES urllist(rowid), score REAL NOT NULL, constant REAL NOT NULL);
";

/// The twelve tables of the index, in schema order.
pub const TABLES: [&str; 12] = [
    "urllist",
    "wordlist",
    "wordlocation",
    "link",
    "linkwords",
    "pagelength",
    "pagerank",
    "auth_hits",
    "hub_hits",
    "auth_myhits",
    "hub_myhits",
    "mypagerank",
];

pub const HOT_INDEX_WORDID: &str = "linkwords_wordid_idx";
pub const HOT_INDEX_LINKID: &str = "linkwords_linkid_idx";

/// An open index file.
///
/// One writer at a time; readers open their own handle, usually with
/// [`IndexHandle::open_read_only`].
pub struct IndexHandle {
    conn: Connection,
    path: Option<PathBuf>,
    read_only: bool,
}

impl fmt::Debug for IndexHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndexHandle")
            .field("path", &self.path)
            .field("read_only", &self.read_only)
            .finish()
    }
}

impl IndexHandle {
    pub fn open(path: impl AsRef<Path>, create_if_missing: bool) -> Result<Self> {
        let path = path.as_ref();
        // an empty file (e.g. freshly created by a temp-file helper) holds no index yet
        let exists = std::fs::metadata(path).is_ok_and(|m| m.len() > 0);
        if !exists && !create_if_missing {
            return Err(Error::MissingIndex(path.to_path_buf()));
        }
        let conn = Connection::open_with_flags(
            path,
            OpenFlags::SQLITE_OPEN_READ_WRITE
                | OpenFlags::SQLITE_OPEN_CREATE
                | OpenFlags::SQLITE_OPEN_NO_MUTEX,
        )?;
        let handle = IndexHandle {
            conn,
            path: Some(path.to_path_buf()),
            read_only: false,
        };
        handle.configure()?;
        if exists {
            handle.check_integrity()?;
        }
        handle.init_schema(!exists)?;
        Ok(handle)
    }

    /// Opens an existing index without write access.
    pub fn open_read_only(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::MissingIndex(path.to_path_buf()));
        }
        let conn = Connection::open_with_flags(
            path,
            OpenFlags::SQLITE_OPEN_READ_ONLY | OpenFlags::SQLITE_OPEN_NO_MUTEX,
        )?;
        conn.busy_timeout(Duration::from_secs(5))?;
        let handle = IndexHandle {
            conn,
            path: Some(path.to_path_buf()),
            read_only: true,
        };
        handle.check_integrity()?;
        handle.check_version()?;
        Ok(handle)
    }

    pub fn open_in_memory() -> Result<Self> {
        let handle = IndexHandle {
            conn: Connection::open_in_memory()?,
            path: None,
            read_only: false,
        };
        handle.configure()?;
        handle.init_schema(true)?;
        Ok(handle)
    }

    fn configure(&self) -> Result<()> {
        self.conn.busy_timeout(Duration::from_secs(5))?;
        self.conn.pragma_update(None, "foreign_keys", true)?;
        if self.path.is_some() {
            let _: String = self
                .conn
                .query_row("PRAGMA journal_mode=WAL", [], |r| r.get(0))?;
            self.conn.pragma_update(None, "synchronous", "NORMAL")?;
        }
        Ok(())
    }

    fn check_integrity(&self) -> Result<()> {
        let verdict: String = self
            .conn
            .query_row("PRAGMA quick_check", [], |r| r.get(0))?;
        if verdict != "ok" {
            return Err(Error::CorruptIndex(verdict));
        }
        Ok(())
    }

    fn check_version(&self) -> Result<()> {
        let has_meta: bool = self.conn.query_row(
            "SELECT count(*) FROM sqlite_master WHERE type='table' AND name='indexmeta'",
            [],
            |r| r.get(0),
        )?;
        let found = if has_meta {
            self.meta_value("schema_version")?
        } else {
            None
        };
        match found {
            Some(v) if v == SCHEMA_VERSION => Ok(()),
            other => Err(Error::SchemaMismatch {
                found: other.unwrap_or_else(|| "none".into()),
                expected: SCHEMA_VERSION.into(),
            }),
        }
    }

    fn init_schema(&self, fresh: bool) -> Result<()> {
        if !fresh {
            self.check_version()?;
        }
        self.conn.execute_batch(SCHEMA)?;
        if fresh {
            let now = chrono::Utc::now().to_rfc3339();
            let stop = StopList::english();
            for (k, v) in [
                ("schema_version", SCHEMA_VERSION),
                ("stemming_enabled", "1"),
                ("stop_list_version", stop.version()),
                ("created_at", now.as_str()),
            ] {
                self.conn.execute(
                    "INSERT OR IGNORE INTO indexmeta(key, value) VALUES (?1, ?2)",
                    params![k, v],
                )?;
            }
        }
        Ok(())
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn is_read_only(&self) -> bool {
        self.read_only
    }

    pub(crate) fn conn(&self) -> &Connection {
        &self.conn
    }

    fn meta_value(&self, key: &str) -> Result<Option<String>> {
        Ok(self
            .conn
            .query_row("SELECT value FROM indexmeta WHERE key = ?1", [key], |r| {
                r.get(0)
            })
            .optional()?)
    }

    pub fn meta(&self) -> Result<IndexMeta> {
        let get = |k: &str| -> Result<String> {
            self.meta_value(k)?
                .ok_or_else(|| Error::CorruptIndex(format!("indexmeta lacks {k}")))
        };
        Ok(IndexMeta {
            stemming_enabled: get("stemming_enabled")? == "1",
            stop_list_version: get("stop_list_version")?,
            created_at: get("created_at")?,
            schema_version: get("schema_version")?,
        })
    }

    /// Sets the stemming flag. Once a page is indexed the flag can no longer change.
    pub fn set_stemming(&self, enabled: bool) -> Result<()> {
        let current = self.meta()?.stemming_enabled;
        if current == enabled {
            return Ok(());
        }
        if self.stats()?.indexed_pages > 0 {
            return Err(Error::StemmingLocked { indexed: current });
        }
        self.conn.execute(
            "UPDATE indexmeta SET value = ?1 WHERE key = 'stemming_enabled'",
            [if enabled { "1" } else { "0" }],
        )?;
        Ok(())
    }

    /// Runs `f` inside a savepoint; any error rolls back everything `f` wrote.
    pub fn in_transaction<T>(&self, f: impl FnOnce(&Self) -> Result<T>) -> Result<T> {
        self.conn.execute_batch("SAVEPOINT anchorlight_tx")?;
        match f(self) {
            Ok(v) => {
                self.conn.execute_batch("RELEASE anchorlight_tx")?;
                Ok(v)
            }
            Err(e) => {
                // The rollback result is secondary to the original error.
                let _ = self
                    .conn
                    .execute_batch("ROLLBACK TO anchorlight_tx; RELEASE anchorlight_tx");
                Err(e)
            }
        }
    }

    pub fn get_or_insert_url(&self, url: &str) -> Result<PageId> {
        if let Some(id) = self.url_id(url)? {
            return Ok(id);
        }
        self.conn
            .prepare_cached("INSERT INTO urllist(url) VALUES (?1)")?
            .execute([url])?;
        Ok(PageId(self.conn.last_insert_rowid()))
    }

    pub fn url_id(&self, url: &str) -> Result<Option<PageId>> {
        Ok(self
            .conn
            .prepare_cached("SELECT rowid FROM urllist WHERE url = ?1")?
            .query_row([url], |r| r.get(0))
            .optional()?
            .map(PageId))
    }

    pub fn url_of(&self, id: PageId) -> Result<Option<String>> {
        Ok(self
            .conn
            .prepare_cached("SELECT url FROM urllist WHERE rowid = ?1")?
            .query_row([id.0], |r| r.get(0))
            .optional()?)
    }

    pub fn is_indexed(&self, url: &str) -> Result<bool> {
        Ok(self
            .conn
            .prepare_cached("SELECT indexed FROM urllist WHERE url = ?1")?
            .query_row([url], |r| r.get::<_, bool>(0))
            .optional()?
            .unwrap_or(false))
    }

    pub fn mark_indexed(&self, id: PageId) -> Result<()> {
        let n = self
            .conn
            .prepare_cached("UPDATE urllist SET indexed = 1 WHERE rowid = ?1")?
            .execute([id.0])?;
        if n == 0 {
            return Err(Error::DanglingReference(format!("urllist has no row {id}")));
        }
        Ok(())
    }

    pub fn get_or_insert_word(&self, term: &str) -> Result<WordId> {
        if term.is_empty() {
            return Err(Error::InvalidTerm(term.to_string()));
        }
        if let Some(id) = self.word_id(term)? {
            return Ok(id);
        }
        self.conn
            .prepare_cached("INSERT INTO wordlist(word) VALUES (?1)")?
            .execute([term])?;
        Ok(WordId(self.conn.last_insert_rowid()))
    }

    pub fn word_id(&self, term: &str) -> Result<Option<WordId>> {
        Ok(self
            .conn
            .prepare_cached("SELECT rowid FROM wordlist WHERE word = ?1")?
            .query_row([term], |r| r.get(0))
            .optional()?
            .map(WordId))
    }

    pub fn word_of(&self, id: WordId) -> Result<Option<String>> {
        Ok(self
            .conn
            .prepare_cached("SELECT word FROM wordlist WHERE rowid = ?1")?
            .query_row([id.0], |r| r.get(0))
            .optional()?)
    }

    pub fn add_posting(&self, p: Posting) -> Result<()> {
        self.conn
            .prepare_cached("INSERT INTO wordlocation(urlid, wordid, location) VALUES (?1, ?2, ?3)")?
            .execute(params![p.urlid.0, p.wordid.0, p.location])
            .map_err(|e| dangling(e, || format!("posting {p:?}")))?;
        Ok(())
    }

    pub fn add_link(&self, from: PageId, to: PageId) -> Result<LinkId> {
        self.conn
            .prepare_cached("INSERT INTO link(fromid, toid) VALUES (?1, ?2)")?
            .execute(params![from.0, to.0])
            .map_err(|e| dangling(e, || format!("link {from} -> {to}")))?;
        Ok(LinkId(self.conn.last_insert_rowid()))
    }

    pub fn add_link_word(&self, wordid: WordId, linkid: LinkId) -> Result<()> {
        self.conn
            .prepare_cached("INSERT INTO linkwords(wordid, linkid) VALUES (?1, ?2)")?
            .execute(params![wordid.0, linkid.0])
            .map_err(|e| dangling(e, || format!("linkword {} on link {}", wordid.0, linkid.0)))?;
        Ok(())
    }

    pub fn links(&self) -> Result<Vec<LinkRecord>> {
        let mut stmt = self
            .conn
            .prepare_cached("SELECT rowid, fromid, toid FROM link ORDER BY rowid")?;
        let rows = stmt.query_map([], |r| {
            Ok(LinkRecord {
                linkid: LinkId(r.get(0)?),
                fromid: PageId(r.get(1)?),
                toid: PageId(r.get(2)?),
            })
        })?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    /// Target URLs of the links leaving `from`, in insertion order.
    pub fn out_link_urls(&self, from: PageId) -> Result<Vec<String>> {
        let mut stmt = self.conn.prepare_cached(
            "SELECT u.url FROM link l JOIN urllist u ON u.rowid = l.toid WHERE l.fromid = ?1 ORDER BY l.rowid",
        )?;
        let rows = stmt.query_map([from.0], |r| r.get(0))?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    pub fn page_ids(&self) -> Result<Vec<PageId>> {
        let mut stmt = self.conn.prepare_cached("SELECT rowid FROM urllist ORDER BY rowid")?;
        let rows = stmt.query_map([], |r| r.get(0).map(PageId))?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    pub fn indexed_page_ids(&self) -> Result<Vec<PageId>> {
        let mut stmt = self
            .conn
            .prepare_cached("SELECT rowid FROM urllist WHERE indexed = 1 ORDER BY rowid")?;
        let rows = stmt.query_map([], |r| r.get(0).map(PageId))?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    /// Word ids of the postings of one page, in location order.
    pub fn page_postings(&self, id: PageId) -> Result<Vec<WordId>> {
        let mut stmt = self
            .conn
            .prepare_cached("SELECT wordid FROM wordlocation WHERE urlid = ?1 ORDER BY location")?;
        let rows = stmt.query_map([id.0], |r| r.get(0).map(WordId))?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    /// Link ids whose anchor text contains `wordid`.
    pub fn links_with_word(&self, wordid: WordId) -> Result<Vec<LinkId>> {
        let mut stmt = self
            .conn
            .prepare_cached("SELECT linkid FROM linkwords WHERE wordid = ?1 ORDER BY linkid")?;
        let rows = stmt.query_map([wordid.0], |r| r.get(0).map(LinkId))?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    /// Anchor word ids attached to `linkid`.
    pub fn words_of_link(&self, linkid: LinkId) -> Result<Vec<WordId>> {
        let mut stmt = self
            .conn
            .prepare_cached("SELECT wordid FROM linkwords WHERE linkid = ?1 ORDER BY wordid")?;
        let rows = stmt.query_map([linkid.0], |r| r.get(0).map(WordId))?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    /// Secondary indexes on `linkwords(wordid)` and `linkwords(linkid)`.
    pub fn create_hot_indexes(&self) -> Result<()> {
        self.conn.execute_batch(&format!(
            "CREATE INDEX IF NOT EXISTS {HOT_INDEX_WORDID} ON linkwords(wordid);
             CREATE INDEX IF NOT EXISTS {HOT_INDEX_LINKID} ON linkwords(linkid);
             ANALYZE linkwords;"
        ))?;
        Ok(())
    }

    pub fn has_hot_indexes(&self) -> Result<bool> {
        let n: i64 = self.conn.query_row(
            "SELECT count(*) FROM sqlite_master WHERE type = 'index' AND name IN (?1, ?2)",
            [HOT_INDEX_WORDID, HOT_INDEX_LINKID],
            |r| r.get(0),
        )?;
        Ok(n == 2)
    }

    pub fn drop_hot_indexes(&self) -> Result<()> {
        self.conn.execute_batch(&format!(
            "DROP INDEX IF EXISTS {HOT_INDEX_WORDID}; DROP INDEX IF EXISTS {HOT_INDEX_LINKID};"
        ))?;
        Ok(())
    }

    /// The storage engine's plan for `sql`, one line per plan step.
    pub fn explain_query_plan(&self, sql: &str) -> Result<Vec<String>> {
        let mut stmt = self.conn.prepare(&format!("EXPLAIN QUERY PLAN {sql}"))?;
        let rows = stmt.query_map([], |r| r.get::<_, String>(3))?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    pub fn put_score(
        &self,
        table: ScoreTable,
        urlid: PageId,
        score: f64,
        constant: Option<f64>,
    ) -> Result<()> {
        if table.has_constant() != constant.is_some() {
            return Err(Error::ScoreArity {
                table: table.name(),
                needs_constant: table.has_constant(),
            });
        }
        if !score.is_finite() || score < 0.0 {
            return Err(Error::InvalidScore(score));
        }
        let result = match constant {
            Some(c) => self
                .conn
                .prepare_cached(&format!(
                    "INSERT OR REPLACE INTO {}(urlid, score, constant) VALUES (?1, ?2, ?3)",
                    table.name()
                ))?
                .execute(params![urlid.0, score, c]),
            None => self
                .conn
                .prepare_cached(&format!(
                    "INSERT OR REPLACE INTO {}(urlid, {}) VALUES (?1, ?2)",
                    table.name(),
                    table.value_column()
                ))?
                .execute(params![urlid.0, score]),
        };
        result.map_err(|e| dangling(e, || format!("{table} row for page {urlid}")))?;
        Ok(())
    }

    /// Replaces the whole content of a score table in one transaction.
    pub fn replace_scores(
        &self,
        table: ScoreTable,
        rows: impl IntoIterator<Item = (PageId, f64, Option<f64>)>,
    ) -> Result<()> {
        self.in_transaction(|h| {
            h.clear_scores(table)?;
            for (id, score, constant) in rows {
                h.put_score(table, id, score, constant)?;
            }
            Ok(())
        })
    }

    pub fn clear_scores(&self, table: ScoreTable) -> Result<()> {
        self.conn
            .execute(&format!("DELETE FROM {}", table.name()), [])?;
        Ok(())
    }

    /// Scores for `urlids`; pages without a row map to 0.0.
    pub fn get_scores(&self, table: ScoreTable, urlids: &[PageId]) -> Result<HashMap<PageId, f64>> {
        let mut stmt = self.conn.prepare_cached(&format!(
            "SELECT {} FROM {} WHERE urlid = ?1",
            table.value_column(),
            table.name()
        ))?;
        let mut out = HashMap::with_capacity(urlids.len());
        for &id in urlids {
            let v: Option<f64> = stmt.query_row([id.0], |r| r.get(0)).optional()?;
            out.insert(id, v.unwrap_or(0.0));
        }
        Ok(out)
    }

    /// Every row of a score table as (page, score, constant).
    pub fn all_scores(&self, table: ScoreTable) -> Result<Vec<(PageId, f64, Option<f64>)>> {
        let sql = if table.has_constant() {
            format!("SELECT urlid, score, constant FROM {} ORDER BY urlid", table.name())
        } else {
            format!(
                "SELECT urlid, {}, NULL FROM {} ORDER BY urlid",
                table.value_column(),
                table.name()
            )
        };
        let mut stmt = self.conn.prepare(&sql)?;
        let rows = stmt.query_map([], |r| Ok((PageId(r.get(0)?), r.get(1)?, r.get(2)?)))?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    pub fn score_count(&self, table: ScoreTable) -> Result<u64> {
        self.table_count(table.name())
    }

    /// Row count of one of the twelve tables (or `indexmeta`).
    pub fn table_count(&self, table: &str) -> Result<u64> {
        if !TABLES.contains(&table) && table != "indexmeta" {
            return Err(Error::UnknownScoreTable(table.to_string()));
        }
        let n: i64 = self
            .conn
            .query_row(&format!("SELECT count(*) FROM {table}"), [], |r| r.get(0))?;
        Ok(n as u64)
    }

    pub fn table_names(&self) -> Result<Vec<String>> {
        let mut stmt = self.conn.prepare(
            "SELECT name FROM sqlite_master WHERE type = 'table' ORDER BY name",
        )?;
        let rows = stmt.query_map([], |r| r.get(0))?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    pub fn stats(&self) -> Result<IndexStats> {
        let indexed: i64 = self.conn.query_row(
            "SELECT count(*) FROM urllist WHERE indexed = 1",
            [],
            |r| r.get(0),
        )?;
        Ok(IndexStats {
            urls: self.table_count("urllist")?,
            indexed_pages: indexed as u64,
            words: self.table_count("wordlist")?,
            postings: self.table_count("wordlocation")?,
            links: self.table_count("link")?,
            link_words: self.table_count("linkwords")?,
        })
    }

    pub fn analysis_status(&self) -> Result<AnalysisStatus> {
        Ok(AnalysisStatus {
            lengths: self.score_count(ScoreTable::PageLength)? > 0,
            pagerank: self.score_count(ScoreTable::PageRank)? > 0,
            hits: self.score_count(ScoreTable::AuthHits)? > 0,
            weighted: self.score_count(ScoreTable::MyPageRank)? > 0,
            hot_indexes: self.has_hot_indexes()?,
        })
    }

    /// Rows violating the schema's foreign keys, as reported by the engine.
    pub fn foreign_key_violations(&self) -> Result<usize> {
        let mut stmt = self.conn.prepare("PRAGMA foreign_key_check")?;
        let mut rows = stmt.query([])?;
        let mut n = 0;
        while rows.next()?.is_some() {
            n += 1;
        }
        Ok(n)
    }
}

fn dangling(e: rusqlite::Error, what: impl FnOnce() -> String) -> Error {
    match &e {
        rusqlite::Error::SqliteFailure(err, _)
            if err.extended_code == ffi::SQLITE_CONSTRAINT_FOREIGNKEY =>
        {
            Error::DanglingReference(what())
        }
        _ => e.into(),
    }
}
