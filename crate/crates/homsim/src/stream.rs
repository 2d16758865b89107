//! Timestamp stream wire formats.
//!
//! Two interchangeable encodings of a [`StreamPair`], both carrying the two
//! channels interleaved in tick order:
//!
//! **CSV**: one `CHANNEL,TICK` record per line with `CHANNEL ∈ {A, B}` and
//! `TICK` an unsigned decimal; an optional `channel,tick` header line is
//! accepted. The clock frequency is not part of the text format and must be
//! supplied when parsing.
//!
//! **Binary**: little-endian throughout:
//!
//! ```text
//!     offset  size  field
//!     0       4     magic "HOMT"
//!     4       1     version (1)
//!     5       8     clock frequency, f64 bits
//!     13      9×N   records: 1 channel byte (0 = A, 1 = B) + u64 tick
//! ```
//!
//! Writers emit records sorted by `(tick, channel)`, so encode/parse round
//! trips are bit-exact. Parsers validate strict per-channel tick
//! monotonicity and report the offending line or record.

use crate::counting::{Channel, StreamPair, TimestampStream};
use crate::error::{Error, Result};

pub const BINARY_MAGIC: [u8; 4] = *b"HOMT";
pub const BINARY_VERSION: u8 = 1;
const RECORD_BYTES: usize = 9;
const HEADER_BYTES: usize = 13;

/// Merges both channels into `(tick, channel)`-sorted records.
fn merged_records(pair: &StreamPair) -> Vec<(u64, Channel)> {
    let mut records: Vec<(u64, Channel)> = pair
        .a
        .ticks
        .iter()
        .map(|&t| (t, Channel::A))
        .chain(pair.b.ticks.iter().map(|&t| (t, Channel::B)))
        .collect();
    records.sort_by_key(|&(tick, ch)| (tick, ch != Channel::A));
    records
}

/// Encodes a stream pair as CSV text with a header line.
pub fn write_csv(pair: &StreamPair) -> String {
    let mut out = String::from("channel,tick\n");
    for (tick, channel) in merged_records(pair) {
        out.push_str(channel.name());
        out.push(',');
        out.push_str(&tick.to_string());
        out.push('\n');
    }
    out
}

/// Parses CSV text into a stream pair. The text format carries no clock, so
/// one must be provided.
pub fn parse_csv(text: &str, clock_hz: f64) -> Result<StreamPair> {
    if !clock_hz.is_finite() || clock_hz <= 0.0 {
        return Err(Error::Config("clock_hz must be > 0".into()));
    }
    let mut ticks_a: Vec<u64> = Vec::new();
    let mut ticks_b: Vec<u64> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let location = || format!("line {}", index + 1);
        if line.is_empty() {
            continue;
        }
        if index == 0 && line.eq_ignore_ascii_case("channel,tick") {
            continue;
        }
        let (channel, tick) = line.split_once(',').ok_or_else(|| Error::Parse {
            location: location(),
            message: format!("expected CHANNEL,TICK, got {line:?}"),
        })?;
        let ticks = match channel.trim() {
            "A" => &mut ticks_a,
            "B" => &mut ticks_b,
            other => {
                return Err(Error::Parse {
                    location: location(),
                    message: format!("unknown channel tag {other:?} (expected A or B)"),
                })
            }
        };
        let tick: u64 = tick.trim().parse().map_err(|e| Error::Parse {
            location: location(),
            message: format!("bad tick value {tick:?}: {e}"),
        })?;
        if let Some(&last) = ticks.last() {
            if tick <= last {
                return Err(Error::Parse {
                    location: location(),
                    message: format!(
                        "channel {} ticks must strictly increase ({tick} after {last})",
                        channel.trim()
                    ),
                });
            }
        }
        ticks.push(tick);
    }
    StreamPair::new(
        TimestampStream::new(Channel::A, ticks_a, clock_hz),
        TimestampStream::new(Channel::B, ticks_b, clock_hz),
    )
}

/// Encodes a stream pair in the binary format.
pub fn write_binary(pair: &StreamPair) -> Vec<u8> {
    let records = merged_records(pair);
    let mut out = Vec::with_capacity(HEADER_BYTES + RECORD_BYTES * records.len());
    out.extend_from_slice(&BINARY_MAGIC);
    out.push(BINARY_VERSION);
    out.extend_from_slice(&pair.clock_hz().to_le_bytes());
    for (tick, channel) in records {
        out.push(match channel {
            Channel::A => 0,
            Channel::B => 1,
        });
        out.extend_from_slice(&tick.to_le_bytes());
    }
    out
}

/// Parses the binary format.
pub fn parse_binary(bytes: &[u8]) -> Result<StreamPair> {
    if bytes.len() < HEADER_BYTES {
        return Err(Error::Parse {
            location: "header".into(),
            message: format!(
                "file too short for header: {} bytes, need {HEADER_BYTES}",
                bytes.len()
            ),
        });
    }
    if bytes[..4] != BINARY_MAGIC {
        return Err(Error::Parse {
            location: "offset 0".into(),
            message: "bad magic (expected \"HOMT\")".into(),
        });
    }
    if bytes[4] != BINARY_VERSION {
        return Err(Error::Parse {
            location: "offset 4".into(),
            message: format!("unsupported version {}", bytes[4]),
        });
    }
    let clock_hz = f64::from_le_bytes(bytes[5..13].try_into().expect("8 bytes"));
    if !clock_hz.is_finite() || clock_hz <= 0.0 {
        return Err(Error::Parse {
            location: "offset 5".into(),
            message: format!("invalid clock frequency {clock_hz}"),
        });
    }
    let body = &bytes[HEADER_BYTES..];
    if !body.len().is_multiple_of(RECORD_BYTES) {
        return Err(Error::Parse {
            location: format!("offset {}", HEADER_BYTES + body.len() / RECORD_BYTES * RECORD_BYTES),
            message: format!(
                "truncated record: {} trailing bytes (records are {RECORD_BYTES} bytes)",
                body.len() % RECORD_BYTES
            ),
        });
    }
    let mut ticks_a: Vec<u64> = Vec::new();
    let mut ticks_b: Vec<u64> = Vec::new();
    for (index, record) in body.chunks_exact(RECORD_BYTES).enumerate() {
        let location = || format!("record {} (offset {})", index, HEADER_BYTES + index * RECORD_BYTES);
        let ticks = match record[0] {
            0 => &mut ticks_a,
            1 => &mut ticks_b,
            other => {
                return Err(Error::Parse {
                    location: location(),
                    message: format!("unknown channel byte {other:#04x}"),
                })
            }
        };
        let tick = u64::from_le_bytes(record[1..9].try_into().expect("8 bytes"));
        if let Some(&last) = ticks.last() {
            if tick <= last {
                return Err(Error::Parse {
                    location: location(),
                    message: format!("ticks must strictly increase ({tick} after {last})"),
                });
            }
        }
        ticks.push(tick);
    }
    StreamPair::new(
        TimestampStream::new(Channel::A, ticks_a, clock_hz),
        TimestampStream::new(Channel::B, ticks_b, clock_hz),
    )
}

/// Dispatches on the magic bytes: binary when the file starts with `HOMT`,
/// CSV text otherwise (using `csv_clock_hz`).
pub fn parse_auto(bytes: &[u8], csv_clock_hz: f64) -> Result<StreamPair> {
    if bytes.starts_with(&BINARY_MAGIC) {
        parse_binary(bytes)
    } else {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
            location: format!("offset {}", e.valid_up_to()),
            message: "not valid UTF-8 (and not a binary stream file)".into(),
        })?;
        parse_csv(text, csv_clock_hz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &[u64], b: &[u64]) -> StreamPair {
        StreamPair::new(
            TimestampStream::new(Channel::A, a.to_vec(), 1e8),
            TimestampStream::new(Channel::B, b.to_vec(), 1e8),
        )
        .unwrap()
    }

    #[test]
    fn csv_example_lines() {
        let parsed = parse_csv("A,100\nB,103\n", 1e8).unwrap();
        assert_eq!(parsed.a.ticks, vec![100]);
        assert_eq!(parsed.b.ticks, vec![103]);
        assert_eq!(parsed.clock_hz(), 1e8);
    }

    #[test]
    fn csv_header_optional_and_round_trip() {
        let original = pair(&[5, 17, 99], &[5, 20]);
        let text = write_csv(&original);
        assert!(text.starts_with("channel,tick\n"));
        let parsed = parse_csv(&text, 1e8).unwrap();
        assert_eq!(parsed, original);
        // Headerless input parses identically.
        let headerless = text.strip_prefix("channel,tick\n").unwrap();
        assert_eq!(parse_csv(headerless, 1e8).unwrap(), original);
    }

    #[test]
    fn csv_rejects_decreasing_ticks_with_location() {
        let err = parse_csv("A,100\nA,90\n", 1e8).unwrap_err();
        match err {
            Error::Parse { location, message } => {
                assert_eq!(location, "line 2");
                assert!(message.contains("90"));
                assert!(message.contains("100"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn csv_rejects_bad_records() {
        assert!(matches!(parse_csv("A;100\n", 1e8), Err(Error::Parse { .. })));
        assert!(matches!(parse_csv("C,100\n", 1e8), Err(Error::Parse { .. })));
        assert!(matches!(parse_csv("A,-3\n", 1e8), Err(Error::Parse { .. })));
        assert!(matches!(parse_csv("A,1\n", 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn binary_round_trip_bit_exact() {
        let original = pair(&[0, 3, 1_000_000_000_000], &[2, 3, 4]);
        let bytes = write_binary(&original);
        let parsed = parse_binary(&bytes).unwrap();
        assert_eq!(parsed, original);
        assert_eq!(write_binary(&parsed), bytes);
    }

    #[test]
    fn binary_rejects_corruption() {
        let good = write_binary(&pair(&[1, 2], &[3]));

        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        assert!(matches!(parse_binary(&bad_magic), Err(Error::Parse { .. })));

        let mut bad_version = good.clone();
        bad_version[4] = 9;
        assert!(matches!(parse_binary(&bad_version), Err(Error::Parse { .. })));

        let truncated = &good[..good.len() - 4];
        let err = parse_binary(truncated).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));

        let mut bad_channel = good.clone();
        bad_channel[HEADER_BYTES] = 7;
        match parse_binary(&bad_channel).unwrap_err() {
            Error::Parse { location, .. } => assert!(location.contains("record 0")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn binary_rejects_non_monotone() {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&BINARY_MAGIC);
        bytes.push(BINARY_VERSION);
        bytes.extend_from_slice(&1e8f64.to_le_bytes());
        for tick in [50u64, 40] {
            bytes.push(0);
            bytes.extend_from_slice(&tick.to_le_bytes());
        }
        match parse_binary(&bytes).unwrap_err() {
            Error::Parse { location, message } => {
                assert!(location.contains("record 1"));
                assert!(message.contains("40"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn auto_detects_format() {
        let original = pair(&[10], &[11]);
        let binary = write_binary(&original);
        assert_eq!(parse_auto(&binary, 1e8).unwrap(), original);
        let csv = write_csv(&original);
        assert_eq!(parse_auto(csv.as_bytes(), 1e8).unwrap(), original);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn tick_list() -> impl Strategy<Value = Vec<u64>> {
            proptest::collection::btree_set(0u64..1_000_000, 0..50)
                .prop_map(|set| set.into_iter().collect())
        }

        proptest! {
            #[test]
            fn formats_round_trip(a in tick_list(), b in tick_list()) {
                let original = pair(&a, &b);
                prop_assert_eq!(parse_csv(&write_csv(&original), 1e8).unwrap(), original.clone());
                let bytes = write_binary(&original);
                let parsed = parse_binary(&bytes).unwrap();
                prop_assert_eq!(&write_binary(&parsed), &bytes);
                prop_assert_eq!(parsed, original);
            }
        }
    }
}
