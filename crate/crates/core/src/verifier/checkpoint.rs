//! Line-delimited checkpoint files for range verification.
//!
//! Line 1 is a header object; every further line records one completed
//! chunk. All potentially large integers are decimal strings. Appending is
//! the only mutation a running verification performs, so a killed process
//! leaves a prefix of the stream: a truncated final line is discarded on
//! read, while damage anywhere else is reported as corruption, distinct
//! from a missing file.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, ErrorKind, Read, Seek, SeekFrom, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nat::Nat;

use super::RecordEntry;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub schema_version: u32,
    pub lo: Nat,
    pub hi: Nat,
    #[serde(with = "crate::serde_util::int_string")]
    pub chunk_size: u64,
    pub config_hash: String,
}

/// One completed chunk: its verified count and the chunk-local record
/// candidates with their full-orbit statistics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkRecord {
    #[serde(with = "crate::serde_util::int_string")]
    pub chunk_index: u64,
    #[serde(with = "crate::serde_util::int_string")]
    pub verified_count: u64,
    pub local_records: Vec<RecordEntry>,
}

/// Parsed checkpoint state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyCheckpoint {
    pub header: CheckpointHeader,
    pub chunks: BTreeMap<u64, ChunkRecord>,
}

/// Raw parse result: complete lines plus the byte length of the complete
/// prefix (everything up to and including the last intact line).
struct ParsedFile {
    header: Option<CheckpointHeader>,
    chunks: BTreeMap<u64, ChunkRecord>,
    intact_len: u64,
}

fn parse_content(content: &str) -> Result<ParsedFile> {
    let mut header = None;
    let mut chunks = BTreeMap::new();
    let mut intact_len = 0u64;

    let mut rest = content;
    let mut offset = 0u64;
    let mut line_no = 0usize;
    while !rest.is_empty() {
        let (line, consumed, complete) = match rest.find('\n') {
            Some(pos) => (&rest[..pos], pos as u64 + 1, true),
            None => (rest, rest.len() as u64, false),
        };
        let at_end = consumed as usize == rest.len();
        line_no += 1;
        if line_no == 1 {
            match serde_json::from_str::<CheckpointHeader>(line) {
                Ok(h) => {
                    if h.schema_version != SCHEMA_VERSION {
                        return Err(Error::CheckpointCorrupt(format!(
                            "unsupported schema version {}",
                            h.schema_version
                        )));
                    }
                    header = Some(h);
                }
                Err(e) => {
                    if complete || !at_end {
                        return Err(Error::CheckpointCorrupt(format!(
                            "malformed header line: {e}"
                        )));
                    }
                    // Truncated header: the file holds no usable state.
                    break;
                }
            }
        } else {
            match serde_json::from_str::<ChunkRecord>(line) {
                Ok(record) => {
                    if chunks.insert(record.chunk_index, record.clone()).is_some() {
                        return Err(Error::CheckpointCorrupt(format!(
                            "duplicate chunk index {}",
                            record.chunk_index
                        )));
                    }
                }
                Err(e) => {
                    if complete || !at_end {
                        return Err(Error::CheckpointCorrupt(format!(
                            "malformed record on line {line_no}: {e}"
                        )));
                    }
                    // Truncated final line: discard it.
                    break;
                }
            }
        }
        offset += consumed;
        intact_len = offset;
        rest = &rest[consumed as usize..];
    }

    Ok(ParsedFile {
        header,
        chunks,
        intact_len,
    })
}

/// Reads and validates a checkpoint file.
pub fn checkpoint_read(path: &Path) -> Result<VerifyCheckpoint> {
    let content = match std::fs::read_to_string(path) {
        Ok(content) => content,
        Err(e) if e.kind() == ErrorKind::NotFound => {
            return Err(Error::CheckpointMissing(path.to_owned()))
        }
        Err(e) => return Err(e.into()),
    };
    let parsed = parse_content(&content)?;
    let header = parsed
        .header
        .ok_or_else(|| Error::CheckpointCorrupt("no complete header line".into()))?;
    Ok(VerifyCheckpoint {
        header,
        chunks: parsed.chunks,
    })
}

/// Writes a complete checkpoint, replacing any existing file.
pub fn checkpoint_write(path: &Path, checkpoint: &VerifyCheckpoint) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer(&mut out, &checkpoint.header)?;
    out.write_all(b"\n")?;
    for record in checkpoint.chunks.values() {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Append-only handle used while a verification runs.
pub(super) struct CheckpointAppender {
    file: File,
}

impl CheckpointAppender {
    /// Opens `path` for appending, validating any existing state against the
    /// expected header. Returns the already-completed chunks.
    ///
    /// A file whose only content is a truncated header (a kill during the
    /// very first write) is reset and treated as fresh. A complete header
    /// with a different config hash is a mismatch error.
    pub(super) fn open(
        path: &Path,
        expected: &CheckpointHeader,
        chunk_count: u64,
    ) -> Result<(Self, BTreeMap<u64, ChunkRecord>)> {
        let mut file = OpenOptions::new()
            .read(true)
            .write(true)
            .create(true)
            .truncate(false)
            .open(path)?;
        let mut content = String::new();
        file.read_to_string(&mut content)?;
        let parsed = parse_content(&content)?;

        match parsed.header {
            None => {
                // Fresh file (or truncated header): start over.
                file.set_len(0)?;
                file.seek(SeekFrom::Start(0))?;
                let mut appender = CheckpointAppender { file };
                appender.write_line(expected)?;
                Ok((appender, BTreeMap::new()))
            }
            Some(found) => {
                if found.config_hash != expected.config_hash {
                    return Err(Error::CheckpointConfigMismatch {
                        expected: expected.config_hash.clone(),
                        found: found.config_hash,
                    });
                }
                if found != *expected {
                    return Err(Error::CheckpointCorrupt(
                        "header fields disagree with the configuration that hashed to them".into(),
                    ));
                }
                if let Some(&max_index) = parsed.chunks.keys().next_back() {
                    if max_index >= chunk_count {
                        return Err(Error::CheckpointCorrupt(format!(
                            "chunk index {max_index} out of range for {chunk_count} chunks"
                        )));
                    }
                }
                // Drop any truncated tail before appending.
                file.set_len(parsed.intact_len)?;
                file.seek(SeekFrom::End(0))?;
                Ok((CheckpointAppender { file }, parsed.chunks))
            }
        }
    }

    pub(super) fn write_line<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let mut line = serde_json::to_vec(value)?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.flush()?;
        Ok(())
    }
}
