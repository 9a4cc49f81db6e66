//! Per-session ordered stream of events and messages.

use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use tokio::sync::Notify;

use srai_core::announce::StatusMessage;
use srai_core::session::SessionEvent;

/// One stream entry; `seq` is its index in the stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum StreamItem {
    Event { seq: u64, event: SessionEvent },
    Message { seq: u64, message: StatusMessage },
}

impl StreamItem {
    pub fn seq(&self) -> u64 {
        match self {
            StreamItem::Event { seq, .. } | StreamItem::Message { seq, .. } => *seq,
        }
    }
}

#[derive(Default)]
pub struct EventStream {
    items: Mutex<Vec<StreamItem>>,
    notify: Notify,
}

impl EventStream {
    pub fn new() -> EventStream {
        EventStream::default()
    }

    /// Appends one action's events followed by its messages as a contiguous run.
    pub fn append(&self, events: &[SessionEvent], messages: &[StatusMessage]) {
        if events.is_empty() && messages.is_empty() {
            return;
        }
        {
            let mut items = self.items.lock().unwrap();
            for ev in events {
                let seq = items.len() as u64;
                items.push(StreamItem::Event { seq, event: ev.clone() });
            }
            for m in messages {
                let seq = items.len() as u64;
                items.push(StreamItem::Message { seq, message: m.clone() });
            }
        }
        self.notify.notify_waiters();
    }

    pub fn next_seq(&self) -> u64 {
        self.items.lock().unwrap().len() as u64
    }

    pub fn read_from(&self, from: u64) -> Vec<StreamItem> {
        let items = self.items.lock().unwrap();
        let start = (from as usize).min(items.len());
        items[start..].to_vec()
    }

    /// Long-poll read: returns as soon as anything at or after `from` exists, or empty on timeout.
    pub async fn wait_from(&self, from: u64, timeout: Duration) -> Vec<StreamItem> {
        let deadline = tokio::time::Instant::now() + timeout;
        loop {
            let notified = self.notify.notified();
            tokio::pin!(notified);
            notified.as_mut().enable();
            let items = self.read_from(from);
            if !items.is_empty() || timeout.is_zero() {
                return items;
            }
            if tokio::time::timeout_at(deadline, notified).await.is_err() {
                return Vec::new();
            }
        }
    }
}
