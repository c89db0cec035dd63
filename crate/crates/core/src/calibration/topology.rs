//! Synthetic coupling topologies.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    #[serde(alias = "heavy-hex-like")]
    HeavyHex,
    Grid,
    Line,
    Ring,
}

/// Columns in a full heavy-hex row.
const HEX_ROW_WIDTH: usize = 15;

impl Topology {
    /// Undirected couplings `(a, b)` with `a < b`, sorted.
    pub fn undirected_edges(self, num_qubits: usize) -> Vec<(usize, usize)> {
        let n = num_qubits;
        let mut edges = match self {
            Topology::Line => (1..n).map(|q| (q - 1, q)).collect(),
            Topology::Ring => {
                let mut e: Vec<_> = (1..n).map(|q| (q - 1, q)).collect();
                if n > 2 {
                    e.push((0, n - 1));
                }
                e
            }
            Topology::Grid => grid_edges(n),
            Topology::HeavyHex => heavy_hex_edges(n),
        };
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn name(self) -> &'static str {
        match self {
            Topology::HeavyHex => "heavy-hex",
            Topology::Grid => "grid",
            Topology::Line => "line",
            Topology::Ring => "ring",
        }
    }
}

fn grid_edges(n: usize) -> Vec<(usize, usize)> {
    if n == 0 {
        return Vec::new();
    }
    let width = (n as f64).sqrt().ceil() as usize;
    let mut edges = Vec::new();
    for q in 0..n {
        if (q + 1) % width != 0 && q + 1 < n {
            edges.push((q, q + 1));
        }
        if q + width < n {
            edges.push((q, q + width));
        }
    }
    edges
}

/// Rows of qubits joined by bridge qubits every fourth column, with the bridge
/// columns alternating between rows, numbered the way IBM numbers Eagle
/// devices (row, its bridges, next row, ...). The first row is one column
/// short. With 127 qubits this is the Eagle lattice except that the last row
/// is shifted one column left, which leaves one bridge as a leaf.
fn heavy_hex_edges(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut next = 0usize;
    let mut prev_row: Vec<Option<usize>> = Vec::new();
    let mut row_index = 0usize;
    while next < n {
        // Bridges between the previous row and this one.
        let mut bridges = Vec::new();
        if row_index > 0 {
            let offset = if row_index % 2 == 1 { 0 } else { 2 };
            for col in (offset..HEX_ROW_WIDTH).step_by(4) {
                if next >= n {
                    break;
                }
                if let Some(above) = prev_row.get(col).copied().flatten() {
                    edges.push((above, next));
                }
                bridges.push((col, next));
                next += 1;
            }
        }
        let width = if row_index == 0 {
            HEX_ROW_WIDTH - 1
        } else {
            HEX_ROW_WIDTH
        };
        let mut row = vec![None; HEX_ROW_WIDTH];
        for slot in row.iter_mut().take(width) {
            if next >= n {
                break;
            }
            *slot = Some(next);
            next += 1;
        }
        for col in 1..HEX_ROW_WIDTH {
            if let (Some(a), Some(b)) = (row[col - 1], row[col]) {
                edges.push((a, b));
            }
        }
        let mut attached = false;
        for &(col, bridge) in &bridges {
            if let Some(below) = row[col] {
                edges.push((bridge, below));
                attached = true;
            }
        }
        // A truncated final row may stop short of every bridge column.
        if !attached {
            if let (Some(&(_, bridge)), Some(first)) = (bridges.first(), row[0]) {
                edges.push((bridge, first));
            }
        }
        prev_row = row;
        row_index += 1;
    }
    edges
}
