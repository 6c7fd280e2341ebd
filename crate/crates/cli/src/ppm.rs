//! Binary PPM (P6) space-time diagrams. Row `t` is `F^t(x)` restricted to the
//! first `width` cells; each letter gets a fixed color.

use dillscope_core::{Letter, Word};

/// Letter 0 is red and letter 1 black; further letters cycle through the
/// remaining eight entries.
pub const PALETTE: [[u8; 3]; 10] = [
    [0xCC, 0x00, 0x00],
    [0x00, 0x00, 0x00],
    [0x1F, 0x77, 0xB4],
    [0x2C, 0xA0, 0x2C],
    [0xFF, 0x7F, 0x0E],
    [0x94, 0x67, 0xBD],
    [0x8C, 0x56, 0x4B],
    [0xE3, 0x77, 0xC2],
    [0x7F, 0x7F, 0x7F],
    [0xBC, 0xBD, 0x22],
];

pub fn color(letter: Letter) -> [u8; 3] {
    match letter {
        0 | 1 => PALETTE[usize::from(letter)],
        _ => PALETTE[2 + (usize::from(letter) - 2) % 8],
    }
}

/// Encodes equal-length rows as a P6 image.
pub fn encode(rows: &[Word]) -> Vec<u8> {
    let width = rows.first().map_or(0, |r| r.len());
    assert!(rows.iter().all(|r| r.len() == width), "ragged rows");
    let mut out = format!("P6\n{} {}\n255\n", width, rows.len()).into_bytes();
    out.reserve(3 * width * rows.len());
    for row in rows {
        for &a in row.iter() {
            out.extend_from_slice(&color(a));
        }
    }
    out
}

/// Reads back a P6 image written by [`encode`] as `(width, height, pixels)`.
pub fn decode(bytes: &[u8]) -> Option<(usize, usize, Vec<[u8; 3]>)> {
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while bytes.get(pos)?.is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while !bytes.get(pos)?.is_ascii_whitespace() {
            pos += 1;
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).ok()?);
    }
    pos += 1;
    if fields[0] != "P6" || fields[3] != "255" {
        return None;
    }
    let (w, h): (usize, usize) = (fields[1].parse().ok()?, fields[2].parse().ok()?);
    let body = bytes.get(pos..)?;
    if body.len() != 3 * w * h {
        return None;
    }
    Some((w, h, body.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_pixels() {
        let rows = vec![Word::new(vec![0, 1]), Word::new(vec![1, 2])];
        let bytes = encode(&rows);
        assert!(bytes.starts_with(b"P6\n2 2\n255\n"));
        let (w, h, px) = decode(&bytes).unwrap();
        assert_eq!((w, h), (2, 2));
        assert_eq!(px, vec![[0xCC, 0, 0], [0, 0, 0], [0, 0, 0], [0x1F, 0x77, 0xB4]]);
    }

    #[test]
    fn palette_cycles_after_ten_letters() {
        assert_eq!(color(10), color(2));
        assert_eq!(color(17), color(9));
        assert_ne!(color(9), color(2));
    }
}
