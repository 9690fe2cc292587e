//! 1-bit images of occupancy sets: binary PBM and SVG.

use crate::error::{CarpetError, Result};
use crate::oracle::OccupancySet;

pub const PIXEL_BUDGET: u128 = 100_000_000;
/// SVG output draws one element per square; beyond this it is refused.
pub const SVG_SQUARE_LIMIT: usize = 200_000;

fn dimensions(occ: &OccupancySet, n: u32, m: u32) -> Result<(u64, u64)> {
    let w = u128::from(n).checked_pow(occ.l);
    let h = u128::from(m).checked_pow(occ.k as u32);
    match (w, h) {
        (Some(w), Some(h)) if w.saturating_mul(h) <= PIXEL_BUDGET => Ok((w as u64, h as u64)),
        _ => Err(CarpetError::EnumerationBudget { requested: occ.k, feasible: largest_depth(n, m) }),
    }
}

fn largest_depth(n: u32, m: u32) -> usize {
    let mut k = 0;
    loop {
        let next = k + 1;
        let h = u128::from(m).pow(next as u32);
        let l = crate::oracle::level_width(n, m, next).unwrap_or(0);
        if u128::from(n).pow(l) * h > PIXEL_BUDGET {
            return k;
        }
        k = next;
    }
}

/// Binary PBM (P4). Column `p`, row `q` is set when square `(p, q)` is
/// occupied; row 0 is drawn at the bottom.
pub fn to_pbm(occ: &OccupancySet, n: u32, m: u32) -> Result<Vec<u8>> {
    let (w, h) = dimensions(occ, n, m)?;
    let stride = w.div_ceil(8) as usize;
    let header = format!("P4\n{w} {h}\n");
    let mut out = Vec::with_capacity(header.len() + stride * h as usize);
    out.extend_from_slice(header.as_bytes());
    let body = out.len();
    out.resize(body + stride * h as usize, 0);
    for &(p, q) in &occ.squares {
        let row = (h - 1 - q) as usize;
        let byte = body + row * stride + (p / 8) as usize;
        out[byte] |= 0x80 >> (p % 8);
    }
    Ok(out)
}

/// SVG with one unit rectangle per occupied square.
pub fn to_svg(occ: &OccupancySet, n: u32, m: u32) -> Result<String> {
    let (w, h) = dimensions(occ, n, m)?;
    if occ.len() > SVG_SQUARE_LIMIT {
        return Err(CarpetError::InvalidArgument(format!(
            "{} squares is too many for SVG output (limit {SVG_SQUARE_LIMIT}); use a .pbm path",
            occ.len()
        )));
    }
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" preserveAspectRatio=\"none\" shape-rendering=\"crispEdges\">\n"
    );
    for &(p, q) in &occ.squares {
        s.push_str(&format!("<rect x=\"{p}\" y=\"{}\" width=\"1\" height=\"1\"/>\n", h - 1 - q));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Number of set pixels in a P4 image.
pub fn pbm_set_pixels(data: &[u8]) -> Option<u64> {
    // header: magic, width, height, each followed by one whitespace byte
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 3 {
        let len = data[pos..].iter().position(u8::is_ascii_whitespace)?;
        fields.push(std::str::from_utf8(&data[pos..pos + len]).ok()?);
        pos += len + 1;
    }
    if fields[0] != "P4" {
        return None;
    }
    let w: usize = fields[1].parse().ok()?;
    let h: usize = fields[2].parse().ok()?;
    let stride = w.div_ceil(8);
    if data.len() - pos != stride * h {
        return None;
    }
    let mut count = 0;
    for row in data[pos..].chunks(stride) {
        for (i, &b) in row.iter().enumerate() {
            // ignore padding bits in the last byte
            let valid = (w - 8 * i).min(8) as u32;
            count += u64::from((b & (0xffu16 << (8 - valid)) as u8).count_ones());
        }
    }
    Some(count)
}
