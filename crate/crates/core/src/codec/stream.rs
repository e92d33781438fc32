//! JSON Lines streams: one record per `\n`-terminated line.
//!
//! [`LineStream`] pulls lines from any [`BufRead`] into one reused buffer,
//! so memory is bounded by the longest line rather than the stream length.
//! A blocking reader over a pipe gives live behaviour for free: a partial
//! trailing line waits in the reader until its newline or end of input.
//! [`LiveLineBuffer`] covers push-style sources that hand over arbitrary
//! chunks.

use std::io::{BufRead, Write};
use std::marker::PhantomData;

use super::{decode_value, encode_value, parse_object_bytes, CdfRecord, MissingPolicy, WriteOptions};
use crate::error::{CdfError, Result};
use crate::report::Report;
use crate::rules::catalog::{self, Structural};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StreamMode {
    #[default]
    PostMatch,
    Live,
}

/// Position in a stream: lines read so far and bytes consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StreamCursor {
    pub line_number: u64,
    pub byte_offset: u64,
    pub mode: StreamMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StreamOptions {
    pub policy: MissingPolicy,
    /// Stop after the first line that cannot be decoded at all.
    pub strict: bool,
    pub mode: StreamMode,
}

/// One decoded line.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamItem<T> {
    /// 1-based line number.
    pub line: u64,
    /// Offset of the first byte of the line.
    pub byte_offset: u64,
    /// `None` for blank or undecodable lines.
    pub record: Option<T>,
    pub report: Report,
}

/// Decodes one line (without its terminator).
pub fn decode_line<T: CdfRecord>(line: &[u8], line_number: u64, byte_offset: u64, policy: MissingPolicy) -> StreamItem<T> {
    let mut report = Report::for_line(T::COMPONENT, line_number);
    let record = if line.iter().all(u8::is_ascii_whitespace) {
        report.push(
            catalog::structural(T::COMPONENT, Structural::BlankLine),
            "",
            "blank line in stream",
        );
        None
    } else {
        parse_object_bytes(line, &mut report).and_then(|v| decode_value::<T>(&v, policy, &mut report))
    };
    StreamItem {
        line: line_number,
        byte_offset,
        record,
        report,
    }
}

pub struct LineStream<R, T> {
    reader: R,
    buf: Vec<u8>,
    cursor: StreamCursor,
    opts: StreamOptions,
    done: bool,
    _record: PhantomData<fn() -> T>,
}

/// Iterates the records of a JSON Lines stream of type `T`.
pub fn read_line_stream<R: BufRead, T: CdfRecord>(reader: R, opts: StreamOptions) -> LineStream<R, T> {
    LineStream {
        reader,
        buf: Vec::new(),
        cursor: StreamCursor {
            mode: opts.mode,
            ..StreamCursor::default()
        },
        opts,
        done: false,
        _record: PhantomData,
    }
}

impl<R, T> LineStream<R, T> {
    pub fn cursor(&self) -> StreamCursor {
        self.cursor
    }

    /// Capacity of the line buffer; grows only to the longest line seen.
    pub fn buffer_capacity(&self) -> usize {
        self.buf.capacity()
    }
}

impl<R: BufRead, T: CdfRecord> Iterator for LineStream<R, T> {
    type Item = Result<StreamItem<T>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        self.buf.clear();
        let n = match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(0) => {
                self.done = true;
                return None;
            }
            Ok(n) => n,
            Err(e) => {
                self.done = true;
                return Some(Err(CdfError::Stream(e)));
            }
        };
        let offset = self.cursor.byte_offset;
        self.cursor.line_number += 1;
        self.cursor.byte_offset += n as u64;
        let line = strip_terminator(&self.buf);
        let item = decode_line::<T>(line, self.cursor.line_number, offset, self.opts.policy);
        if self.opts.strict && item.record.is_none() && item.report.has_errors() {
            self.done = true;
        }
        Some(Ok(item))
    }
}

fn strip_terminator(line: &[u8]) -> &[u8] {
    let line = line.strip_suffix(b"\n").unwrap_or(line);
    line.strip_suffix(b"\r").unwrap_or(line)
}

/// Splits pushed chunks into lines, holding back an incomplete tail.
#[derive(Debug, Default)]
pub struct LiveLineBuffer {
    pending: Vec<u8>,
    lines: u64,
    offset: u64,
}

impl LiveLineBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds a chunk; `on_line` gets each completed line with its number and
    /// byte offset.
    pub fn push(&mut self, chunk: &[u8], mut on_line: impl FnMut(&[u8], u64, u64)) {
        let mut rest = chunk;
        while let Some(pos) = rest.iter().position(|&b| b == b'\n') {
            let (head, tail) = rest.split_at(pos + 1);
            let len = self.pending.len() + head.len();
            self.lines += 1;
            if self.pending.is_empty() {
                on_line(strip_terminator(head), self.lines, self.offset);
            } else {
                self.pending.extend_from_slice(head);
                on_line(strip_terminator(&self.pending), self.lines, self.offset);
                self.pending.clear();
            }
            self.offset += len as u64;
            rest = tail;
        }
        self.pending.extend_from_slice(rest);
    }

    /// Bytes of the incomplete trailing line.
    pub fn pending(&self) -> &[u8] {
        &self.pending
    }

    /// Ends the source; a non-empty unterminated tail is the last line.
    pub fn finish(mut self, mut on_line: impl FnMut(&[u8], u64, u64)) {
        if !self.pending.is_empty() {
            self.lines += 1;
            on_line(strip_terminator(&self.pending), self.lines, self.offset);
            self.pending.clear();
        }
    }
}

/// Writes records one per line, each followed by `\n`.
pub fn write_line_stream<'a, T, I, W>(records: I, mut sink: W, opts: &WriteOptions) -> Result<W>
where
    T: CdfRecord + 'a,
    I: IntoIterator<Item = &'a T>,
    W: Write,
{
    for record in records {
        let map = encode_value(record, opts)?;
        serde_json::to_writer(&mut sink, &map)?;
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(sink)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EventRecord;

    const A: &str = r#"{"match":{"id":"m"},"event":{"id":"e1"}}"#;

    fn collect(bytes: &[u8], strict: bool) -> Vec<StreamItem<EventRecord>> {
        let opts = StreamOptions { strict, ..StreamOptions::default() };
        read_line_stream::<_, EventRecord>(bytes, opts).map(|r| r.unwrap()).collect()
    }

    #[test]
    fn empty_stream_is_empty() {
        assert!(collect(b"", false).is_empty());
    }

    #[test]
    fn final_newline_is_optional() {
        let with = format!("{A}\n{A}\n");
        let without = format!("{A}\n{A}");
        assert_eq!(collect(with.as_bytes(), false).len(), 2);
        assert_eq!(collect(without.as_bytes(), false), collect(with.as_bytes(), false));
    }

    #[test]
    fn resilient_and_strict() {
        let text = format!("{A}\n{{broken\n\n[1]\n{A}\n");
        let items = collect(text.as_bytes(), false);
        assert_eq!(items.len(), 5);
        assert!(items[1].report.has_rule("EV-081"));
        assert!(items[2].report.has_rule("EV-090"));
        assert!(items[3].report.has_rule("EV-082"));
        assert!(items[4].record.is_some());
        assert_eq!(items[4].line, 5);
        let strict = collect(text.as_bytes(), true);
        assert_eq!(strict.len(), 2);
    }

    #[test]
    fn offsets_track_bytes() {
        let text = format!("{A}\n{A}\n");
        let items = collect(text.as_bytes(), false);
        assert_eq!(items[1].byte_offset, A.len() as u64 + 1);
    }

    #[test]
    fn invalid_utf8_reports_offset() {
        let mut bytes = br#"{"match":{"id":"m"#.to_vec();
        bytes.push(0xff);
        bytes.extend_from_slice(b"\"}}\n");
        let items = collect(&bytes, false);
        let f = &items[0].report.findings()[0];
        assert_eq!(f.rule_id, "EV-080");
        assert!(f.message.contains("17"), "{}", f.message);
    }

    #[test]
    fn live_buffer_matches_batch() {
        let text = format!("{A}\n\n{A}\n{A}");
        let batch: Vec<_> = collect(text.as_bytes(), false);
        for chunk in [1usize, 3, 7, 64] {
            let mut live = Vec::new();
            let mut buf = LiveLineBuffer::new();
            for piece in text.as_bytes().chunks(chunk) {
                buf.push(piece, |l, n, o| live.push(decode_line::<EventRecord>(l, n, o, MissingPolicy::AcceptBoth)));
            }
            assert!(!buf.pending().is_empty());
            buf.finish(|l, n, o| live.push(decode_line::<EventRecord>(l, n, o, MissingPolicy::AcceptBoth)));
            assert_eq!(live, batch, "chunk {chunk}");
        }
    }

    #[test]
    fn writer_emits_one_line_per_record() {
        let items = collect(format!("{A}\n{A}\n").as_bytes(), false);
        let records: Vec<EventRecord> = items.into_iter().filter_map(|i| i.record).collect();
        let out = write_line_stream(&records, Vec::new(), &WriteOptions::default()).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, format!("{A}\n{A}\n"));
    }
}
