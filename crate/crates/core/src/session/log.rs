//! Append-only interaction log with batched persistence.

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::SessionEvent;

pub const FLUSH_EVERY: usize = 10;

/// Persistence target for event batches.
pub trait LogSink: Send {
    fn write_batch(&mut self, events: &[SessionEvent]) -> io::Result<()>;
}

pub struct NullSink;

impl LogSink for NullSink {
    fn write_batch(&mut self, _events: &[SessionEvent]) -> io::Result<()> {
        Ok(())
    }
}

/// Keeps every batch in memory; clones share the same storage.
#[derive(Clone, Default)]
pub struct MemorySink {
    batches: Arc<Mutex<Vec<Vec<SessionEvent>>>>,
    fail: Arc<Mutex<bool>>,
}

impl MemorySink {
    pub fn new() -> MemorySink {
        MemorySink::default()
    }

    pub fn batches(&self) -> Vec<Vec<SessionEvent>> {
        self.batches.lock().unwrap().clone()
    }

    /// Makes subsequent writes fail until cleared.
    pub fn set_failing(&self, failing: bool) {
        *self.fail.lock().unwrap() = failing;
    }
}

impl LogSink for MemorySink {
    fn write_batch(&mut self, events: &[SessionEvent]) -> io::Result<()> {
        if *self.fail.lock().unwrap() {
            return Err(io::Error::other("sink unavailable"));
        }
        self.batches.lock().unwrap().push(events.to_vec());
        Ok(())
    }
}

/// Appends newline-delimited records to a file.
pub struct FileSink {
    path: PathBuf,
    file: Option<File>,
}

impl FileSink {
    pub fn new(path: impl AsRef<Path>) -> FileSink {
        FileSink { path: path.as_ref().to_path_buf(), file: None }
    }
}

impl LogSink for FileSink {
    fn write_batch(&mut self, events: &[SessionEvent]) -> io::Result<()> {
        if self.file.is_none() {
            self.file = Some(OpenOptions::new().create(true).append(true).open(&self.path)?);
        }
        let file = self.file.as_mut().unwrap();
        let mut buf = String::new();
        for ev in events {
            buf.push_str(&serde_json::to_string(ev).map_err(io::Error::other)?);
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
        file.flush()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogStats {
    pub appended: usize,
    pub flushed: usize,
    pub pending: usize,
    pub failed_flushes: usize,
}

pub struct EventLog {
    events: Vec<SessionEvent>,
    flushed: usize,
    failed_flushes: usize,
    sink: Box<dyn LogSink>,
    closed: bool,
}

impl EventLog {
    pub fn new(sink: Box<dyn LogSink>) -> EventLog {
        EventLog { events: Vec::new(), flushed: 0, failed_flushes: 0, sink, closed: false }
    }

    pub fn append(&mut self, ev: SessionEvent) {
        self.events.push(ev);
        if self.events.len() - self.flushed >= FLUSH_EVERY {
            self.flush();
        }
    }

    /// Writes everything pending. A failing sink only logs a warning; the
    /// events stay pending and go out with the next flush.
    pub fn flush(&mut self) {
        if self.flushed == self.events.len() {
            return;
        }
        match self.sink.write_batch(&self.events[self.flushed..]) {
            Ok(()) => self.flushed = self.events.len(),
            Err(e) => {
                self.failed_flushes += 1;
                log::warn!("event log flush failed, {} events pending: {e}", self.events.len() - self.flushed);
            }
        }
    }

    pub fn close(&mut self) {
        if !self.closed {
            self.flush();
            self.closed = true;
        }
    }

    pub fn events(&self) -> &[SessionEvent] {
        &self.events
    }

    pub fn last_ts(&self) -> Option<u64> {
        self.events.last().map(|e| e.ts)
    }

    pub fn stats(&self) -> LogStats {
        LogStats {
            appended: self.events.len(),
            flushed: self.flushed,
            pending: self.events.len() - self.flushed,
            failed_flushes: self.failed_flushes,
        }
    }

    /// Newline-delimited JSON, one record per line.
    pub fn export(&self) -> String {
        export_ndjson(&self.events)
    }
}

impl Drop for EventLog {
    fn drop(&mut self) {
        self.close();
    }
}

pub fn export_ndjson(events: &[SessionEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        out.push_str(&serde_json::to_string(ev).expect("events serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_ndjson(text: &str) -> Result<Vec<SessionEvent>, serde_json::Error> {
    text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}
