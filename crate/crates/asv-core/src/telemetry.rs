//! Binary telemetry framing for the boat-to-shore link. Frames carry one
//! sensor reading each:
//!
//! ```text
//! 0x7E | length (2, BE, payload only) | payload (22) | checksum (1)
//! ```
//!
//! Payload layout, all big-endian:
//! time u32 ms, x i32 mm, y i32 mm, heading u16 centidegrees [0, 36000),
//! pH u16 milli-pH, EC u32 uS/cm, temperature i16 centi-degC.
//! The checksum is 0xFF minus the payload byte sum modulo 256, so a frame
//! validates when payload sum + checksum == 0xFF (mod 256).

use alloc::vec::Vec;

use crate::math;
use crate::sensing::WaterSample;

pub const START_BYTE: u8 = 0x7E;
pub const PAYLOAD_LEN: usize = 22;
pub const FRAME_LEN: usize = 1 + 2 + PAYLOAD_LEN + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FrameError {
    #[error("bad start byte 0x{0:02X}")]
    BadStart(u8),
    #[error("bad payload length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("checksum mismatch: computed 0x{computed:02X}, frame carries 0x{carried:02X}")]
    BadChecksum { computed: u8, carried: u8 },
    #[error("incomplete frame: have {have} bytes, need {need}")]
    Incomplete { have: usize, need: usize },
    #[error("field {field} out of encodable range")]
    FieldOverflow { field: &'static str },
}

pub fn checksum(payload: &[u8]) -> u8 {
    let sum: u32 = payload.iter().map(|&b| b as u32).sum();
    0xFFu8.wrapping_sub((sum & 0xFF) as u8)
}

fn heading_to_centideg(heading_rad: f64) -> u16 {
    let mut deg = heading_rad * (180.0 / math::PI);
    deg -= 360.0 * math::floor(deg / 360.0);
    let centi = math::round(deg * 100.0) as i64;
    (centi.rem_euclid(36000)) as u16
}

/// Encodes one sample into its 26-byte frame. Fields outside their wire
/// ranges are rejected rather than silently wrapped.
pub fn encode_frame(s: &WaterSample) -> Result<Vec<u8>, FrameError> {
    let x_mm = math::round(s.x * 1000.0);
    let y_mm = math::round(s.y * 1000.0);
    if x_mm < i32::MIN as f64 || x_mm > i32::MAX as f64 {
        return Err(FrameError::FieldOverflow { field: "x" });
    }
    if y_mm < i32::MIN as f64 || y_mm > i32::MAX as f64 {
        return Err(FrameError::FieldOverflow { field: "y" });
    }
    let ph_milli = math::round(s.ph * 1000.0);
    if !(0.0..=u16::MAX as f64).contains(&ph_milli) {
        return Err(FrameError::FieldOverflow { field: "ph" });
    }
    let ec_us = math::round(s.ec * 1000.0);
    if !(0.0..=u32::MAX as f64).contains(&ec_us) {
        return Err(FrameError::FieldOverflow { field: "ec" });
    }
    let temp_centi = math::round(s.temp * 100.0);
    if temp_centi < i16::MIN as f64 || temp_centi > i16::MAX as f64 {
        return Err(FrameError::FieldOverflow { field: "temp" });
    }

    let mut payload = [0u8; PAYLOAD_LEN];
    payload[0..4].copy_from_slice(&s.t_ms.to_be_bytes());
    payload[4..8].copy_from_slice(&(x_mm as i32).to_be_bytes());
    payload[8..12].copy_from_slice(&(y_mm as i32).to_be_bytes());
    payload[12..14].copy_from_slice(&heading_to_centideg(s.heading).to_be_bytes());
    payload[14..16].copy_from_slice(&(ph_milli as u16).to_be_bytes());
    payload[16..20].copy_from_slice(&(ec_us as u32).to_be_bytes());
    payload[20..22].copy_from_slice(&(temp_centi as i16).to_be_bytes());

    let mut frame = Vec::with_capacity(FRAME_LEN);
    frame.push(START_BYTE);
    frame.extend_from_slice(&(PAYLOAD_LEN as u16).to_be_bytes());
    frame.extend_from_slice(&payload);
    frame.push(checksum(&payload));
    Ok(frame)
}

/// Decodes one frame from the front of `bytes`, validating the start
/// byte, length field and checksum.
pub fn decode_frame(bytes: &[u8]) -> Result<WaterSample, FrameError> {
    if bytes.is_empty() {
        return Err(FrameError::Incomplete {
            have: 0,
            need: FRAME_LEN,
        });
    }
    if bytes[0] != START_BYTE {
        return Err(FrameError::BadStart(bytes[0]));
    }
    if bytes.len() < 3 {
        return Err(FrameError::Incomplete {
            have: bytes.len(),
            need: FRAME_LEN,
        });
    }
    let declared = u16::from_be_bytes([bytes[1], bytes[2]]) as usize;
    if declared != PAYLOAD_LEN {
        return Err(FrameError::BadLength {
            got: declared,
            expected: PAYLOAD_LEN,
        });
    }
    if bytes.len() < FRAME_LEN {
        return Err(FrameError::Incomplete {
            have: bytes.len(),
            need: FRAME_LEN,
        });
    }
    let payload = &bytes[3..3 + PAYLOAD_LEN];
    let carried = bytes[3 + PAYLOAD_LEN];
    let computed = checksum(payload);
    if computed != carried {
        return Err(FrameError::BadChecksum { computed, carried });
    }

    let t_ms = u32::from_be_bytes([payload[0], payload[1], payload[2], payload[3]]);
    let x_mm = i32::from_be_bytes([payload[4], payload[5], payload[6], payload[7]]);
    let y_mm = i32::from_be_bytes([payload[8], payload[9], payload[10], payload[11]]);
    let heading_cd = u16::from_be_bytes([payload[12], payload[13]]);
    let ph_milli = u16::from_be_bytes([payload[14], payload[15]]);
    let ec_us = u32::from_be_bytes([payload[16], payload[17], payload[18], payload[19]]);
    let temp_centi = i16::from_be_bytes([payload[20], payload[21]]);

    Ok(WaterSample {
        t_ms,
        x: x_mm as f64 / 1000.0,
        y: y_mm as f64 / 1000.0,
        heading: math::wrap_angle(heading_cd as f64 / 100.0 * (math::PI / 180.0)),
        ph: ph_milli as f64 / 1000.0,
        ec: ec_us as f64 / 1000.0,
        temp: temp_centi as f64 / 100.0,
    })
}

/// Incremental decoder for a concatenated frame stream. One instance per
/// connection; it keeps a reassembly buffer and counts frames it had to
/// drop while resynchronizing.
#[derive(Debug, Default)]
pub struct StreamDecoder {
    buf: Vec<u8>,
    pos: usize,
    dropped: usize,
}

impl StreamDecoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    /// Number of corrupt or unframeable frames skipped so far.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    /// Pulls the next valid frame out of the buffer, skipping garbage.
    /// Returns `None` when the remaining bytes cannot yet form a frame.
    pub fn next_sample(&mut self) -> Option<WaterSample> {
        loop {
            // Seek a plausible frame start.
            while self.pos < self.buf.len() && self.buf[self.pos] != START_BYTE {
                self.pos += 1;
            }
            let remaining = self.buf.len() - self.pos;
            if remaining == 0 {
                self.compact();
                return None;
            }
            match decode_frame(&self.buf[self.pos..]) {
                Ok(sample) => {
                    self.pos += FRAME_LEN;
                    self.compact();
                    return Some(sample);
                }
                Err(FrameError::Incomplete { .. }) => {
                    self.compact();
                    return None;
                }
                Err(FrameError::BadChecksum { .. }) | Err(FrameError::BadLength { .. }) => {
                    // Candidate start was corrupt: count it once and
                    // resynchronize past the start byte.
                    self.dropped += 1;
                    self.pos += 1;
                }
                Err(_) => {
                    self.pos += 1;
                }
            }
        }
    }

    /// Flushes the stream at end of input; a pending partial frame counts
    /// as dropped.
    pub fn finish(&mut self) -> usize {
        while self.pos < self.buf.len() && self.buf[self.pos] != START_BYTE {
            self.pos += 1;
        }
        if self.pos < self.buf.len() {
            self.dropped += 1;
            self.pos = self.buf.len();
        }
        self.compact();
        self.dropped
    }

    fn compact(&mut self) {
        if self.pos > 0 {
            self.buf.drain(..self.pos);
            self.pos = 0;
        }
    }
}

/// Decodes a complete dump in one call. Returns the samples and the
/// number of dropped frames (corrupt or trailing-partial).
pub fn decode_stream(bytes: &[u8]) -> (Vec<WaterSample>, usize) {
    let mut dec = StreamDecoder::new();
    dec.push(bytes);
    let mut out = Vec::new();
    while let Some(s) = dec.next_sample() {
        out.push(s);
    }
    let dropped = dec.finish();
    (out, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    fn sample() -> WaterSample {
        WaterSample {
            t_ms: 123_456,
            x: 12.345,
            y: -8.021,
            heading: 1.234,
            ph: 7.0,
            ec: 13.5,
            temp: 31.25,
        }
    }

    pub(crate) fn random_sample(rng: &mut ChaCha8Rng) -> WaterSample {
        WaterSample {
            t_ms: (rng.next_u64() % 86_400_000) as u32,
            x: math::uniform_symmetric(rng, 5_000.0),
            y: math::uniform_symmetric(rng, 5_000.0),
            heading: math::uniform_symmetric(rng, math::PI),
            ph: 14.0 * math::uniform(rng),
            ec: 50.0 * math::uniform(rng),
            temp: -5.0 + 65.0 * math::uniform(rng),
        }
    }

    use rand_core::RngCore;

    #[test]
    fn frame_is_26_bytes_with_declared_length() {
        let frame = encode_frame(&sample()).unwrap();
        assert_eq!(frame.len(), FRAME_LEN);
        assert_eq!(frame[0], START_BYTE);
        assert_eq!(u16::from_be_bytes([frame[1], frame[2]]), 22);
    }

    #[test]
    fn zero_sample_has_checksum_ff() {
        let zero = WaterSample {
            t_ms: 0,
            x: 0.0,
            y: 0.0,
            heading: 0.0,
            ph: 0.0,
            ec: 0.0,
            temp: 0.0,
        };
        let frame = encode_frame(&zero).unwrap();
        assert!(frame[3..25].iter().all(|&b| b == 0));
        assert_eq!(frame[25], 0xFF);
    }

    #[test]
    fn ph_seven_encodes_to_0x1b58() {
        let frame = encode_frame(&sample()).unwrap();
        // pH bytes sit at payload offset 14..16 = frame offset 17..19.
        assert_eq!(frame[17], 0x1B);
        assert_eq!(frame[18], 0x58);
    }

    #[test]
    fn heading_centidegree_quantization() {
        let s = WaterSample {
            heading: 359.99f64.to_radians(),
            ..sample()
        };
        let frame = encode_frame(&s).unwrap();
        let cd = u16::from_be_bytes([frame[15], frame[16]]);
        assert_eq!(cd, 35999);
        let back = decode_frame(&frame).unwrap();
        let diff = math::wrap_angle(back.heading - s.heading).abs();
        assert!(diff < 0.011f64.to_radians(), "diff {diff}");
    }

    #[test]
    fn round_trip_is_exact_up_to_quantization() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let s = random_sample(&mut rng);
            let back = decode_frame(&encode_frame(&s).unwrap()).unwrap();
            assert_eq!(back.t_ms, s.t_ms);
            assert!((back.x - s.x).abs() <= 0.001);
            assert!((back.y - s.y).abs() <= 0.001);
            assert!(math::wrap_angle(back.heading - s.heading).abs() <= 0.011f64.to_radians());
            assert!((back.ph - s.ph).abs() <= 0.001);
            assert!((back.ec - s.ec).abs() <= 0.001);
            assert!((back.temp - s.temp).abs() <= 0.01);
        }
    }

    #[test]
    fn double_encode_is_identical() {
        let s = sample();
        let once = encode_frame(&s).unwrap();
        let back = decode_frame(&once).unwrap();
        let twice = encode_frame(&back).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn any_single_payload_bit_flip_is_detected() {
        let frame = encode_frame(&sample()).unwrap();
        for byte in 3..25 {
            for bit in 0..8 {
                let mut bad = frame.clone();
                bad[byte] ^= 1 << bit;
                assert!(
                    matches!(decode_frame(&bad), Err(FrameError::BadChecksum { .. })),
                    "byte {byte} bit {bit} slipped through"
                );
            }
        }
    }

    #[test]
    fn structural_errors_are_distinguishable() {
        let frame = encode_frame(&sample()).unwrap();

        assert!(matches!(
            decode_frame(&[]),
            Err(FrameError::Incomplete { have: 0, .. })
        ));

        let mut bad = frame.clone();
        bad[0] = 0x55;
        assert!(matches!(decode_frame(&bad), Err(FrameError::BadStart(0x55))));

        let mut bad = frame.clone();
        bad[2] = 0x17;
        assert!(matches!(
            decode_frame(&bad),
            Err(FrameError::BadLength { got: 0x17, .. })
        ));

        assert!(matches!(
            decode_frame(&frame[..10]),
            Err(FrameError::Incomplete { have: 10, .. })
        ));

        let mut bad = frame.clone();
        bad[25] ^= 0x01;
        assert!(matches!(decode_frame(&bad), Err(FrameError::BadChecksum { .. })));
    }

    #[test]
    fn field_overflow_rejected() {
        let s = WaterSample {
            x: 3.0e6, // 3e9 mm exceeds i32
            ..sample()
        };
        assert!(matches!(
            encode_frame(&s),
            Err(FrameError::FieldOverflow { field: "x" })
        ));
    }

    #[test]
    fn stream_decoder_skips_corrupt_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples: Vec<WaterSample> = (0..10).map(|_| random_sample(&mut rng)).collect();
        let mut dump = Vec::new();
        for (i, s) in samples.iter().enumerate() {
            let mut frame = encode_frame(s).unwrap();
            if i == 4 {
                frame[10] ^= 0xA5; // corrupt one payload byte
            }
            dump.extend_from_slice(&frame);
        }
        let (decoded, dropped) = decode_stream(&dump);
        assert_eq!(decoded.len(), 9);
        assert_eq!(dropped, 1);
        assert_eq!(decoded[4].t_ms, samples[5].t_ms);
    }

    #[test]
    fn stream_decoder_handles_incremental_pushes() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = random_sample(&mut rng);
        let frame = encode_frame(&s).unwrap();
        let mut dec = StreamDecoder::new();
        dec.push(&frame[..7]);
        assert!(dec.next_sample().is_none());
        dec.push(&frame[7..]);
        let out = dec.next_sample().unwrap();
        assert_eq!(out.t_ms, s.t_ms);
        assert_eq!(dec.finish(), 0);
    }

    #[test]
    fn stream_decoder_counts_trailing_partial() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = random_sample(&mut rng);
        let frame = encode_frame(&s).unwrap();
        let mut dump = frame.clone();
        dump.extend_from_slice(&frame[..12]);
        let (decoded, dropped) = decode_stream(&dump);
        assert_eq!(decoded.len(), 1);
        assert_eq!(dropped, 1);
    }

    #[test]
    fn empty_stream_is_empty_and_clean() {
        let (decoded, dropped) = decode_stream(&[]);
        assert!(decoded.is_empty());
        assert_eq!(dropped, 0);
    }
}
