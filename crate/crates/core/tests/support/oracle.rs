//! Dense brute-force reference implementations over all 2^n subsets.
//!
//! Masses are plain vectors indexed by subset bits. Nothing here calls into
//! the library's combination or decision code.

#![allow(dead_code)]

use evalign_core::{Frame, MassFunction, SubsetMask};

pub type Dense = Vec<f64>;

pub fn to_dense(m: &MassFunction) -> Dense {
    let mut v = vec![0.0; 1 << m.frame().len()];
    for &(k, x) in m.focal_elements() {
        v[k.bits() as usize] += x;
    }
    v
}

fn popcount(x: usize) -> f64 {
    x.count_ones() as f64
}

pub fn conjunctive(a: &Dense, b: &Dense) -> Dense {
    let mut out = vec![0.0; a.len()];
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i & j] += a[i] * b[j];
        }
    }
    out
}

pub fn disjunctive(a: &Dense, b: &Dense) -> Dense {
    let mut out = vec![0.0; a.len()];
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i | j] += a[i] * b[j];
        }
    }
    out
}

/// `None` on total conflict.
pub fn dempster(a: &Dense, b: &Dense) -> Option<Dense> {
    let mut out = conjunctive(a, b);
    let k = out[0];
    if 1.0 - k <= 1e-12 {
        return None;
    }
    out[0] = 0.0;
    for x in out.iter_mut() {
        *x /= 1.0 - k;
    }
    Some(out)
}

pub fn bel(m: &Dense, a: usize) -> f64 {
    (1..m.len()).filter(|&b| b & !a == 0).map(|b| m[b]).sum()
}

pub fn pl(m: &Dense, a: usize) -> f64 {
    (1..m.len()).filter(|&b| b & a != 0).map(|b| m[b]).sum()
}

pub fn betp(m: &Dense, x: usize) -> f64 {
    let open = 1.0 - m[0];
    (1..m.len())
        .filter(|&a| a & x != 0)
        .map(|a| m[a] / (popcount(a) * open))
        .sum()
}

pub fn jaccard(a: usize, b: usize) -> f64 {
    if a == 0 && b == 0 {
        1.0
    } else {
        popcount(a & b) / popcount(a | b)
    }
}

pub fn jousselme(a: &Dense, b: &Dense) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mut q = 0.0;
    for i in 0..d.len() {
        for j in 0..d.len() {
            q += d[i] * jaccard(i, j) * d[j];
        }
    }
    (0.5 * q).max(0.0).sqrt()
}

pub fn frame(n: usize) -> Frame {
    Frame::new((0..n).map(|i| format!("h{i}"))).unwrap()
}

/// Mass function from raw weights on masks; weights are rescaled to sum 1.
pub fn from_weights(frame: &Frame, entries: &[(u64, f64)]) -> MassFunction {
    let total: f64 = entries.iter().map(|e| e.1).sum();
    MassFunction::new(
        frame,
        entries.iter().map(|&(k, w)| (SubsetMask::from_bits(k), w / total)),
    )
    .unwrap()
}

pub fn max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
