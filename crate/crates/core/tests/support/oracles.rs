//! Naive reference implementations, written without reusing library code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

/// 10·log10 Σ 10^(L/10), summed directly.
pub fn energy_sum(levels: &[f64]) -> f64 {
    10.0 * levels.iter().map(|l| 10f64.powf(l / 10.0)).sum::<f64>().log10()
}

/// Third-octave band `k` as `[lower, upper)` with center 1000·2^(k/3).
pub fn third_edges(k: i32) -> (f64, f64) {
    let center = 1000.0 * 2f64.powf(k as f64 / 3.0);
    (center * 2f64.powf(-1.0 / 6.0), center * 2f64.powf(1.0 / 6.0))
}

/// Per-cell third-octave levels for bands `ks`; `None` for empty bands.
pub fn band_levels(levels: &[Vec<f64>], freqs: &[f64], ks: &[i32]) -> Vec<Vec<Option<f64>>> {
    levels
        .iter()
        .map(|row| {
            ks.iter()
                .map(|&k| {
                    let (lo, hi) = third_edges(k);
                    let members: Vec<f64> =
                        freqs.iter().zip(row).filter(|(f, _)| **f >= lo && **f < hi).map(|(_, l)| *l).collect();
                    (!members.is_empty()).then(|| energy_sum(&members))
                })
                .collect()
        })
        .collect()
}

/// Level of sqrt(Σ A v² / A_ref) with v = v0·10^(L/20).
pub fn integral_level(levels: &[f64], areas: &[f64], a_ref: f64, v0: f64) -> f64 {
    let sum: f64 = levels.iter().zip(areas).map(|(l, a)| a * (v0 * 10f64.powf(l / 20.0)).powi(2)).sum();
    20.0 * ((sum / a_ref).sqrt() / v0).log10()
}

/// Row values and contributors by explicit interval overlap. Cells are
/// ranked by level descending then id ascending; cell i spans
/// `[S_i, S_{i+1})` of the cumulative area `A`, row r spans
/// `[r·A/N, (r+1)·A/N)`; overlap must be positive.
pub fn ranked_rows(cells: &[(usize, f64, f64)], n: usize) -> (Vec<Option<f64>>, Vec<Vec<usize>>) {
    let mut order: Vec<(usize, f64, f64)> = cells.to_vec();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    laid_out_rows(&order, n)
}

/// Same as [`ranked_rows`] without sorting.
pub fn laid_out_rows(order: &[(usize, f64, f64)], n: usize) -> (Vec<Option<f64>>, Vec<Vec<usize>>) {
    let total: f64 = order.iter().map(|c| c.2).sum();
    let mut bounds = vec![0.0];
    for c in order {
        let last = *bounds.last().unwrap();
        bounds.push(last + c.2);
    }
    let mut values = vec![None; n];
    let mut contributors = vec![Vec::new(); n];
    for r in 0..n {
        for (i, c) in order.iter().enumerate() {
            let (s, e) = (bounds[i], bounds[i + 1]);
            let overlaps = s * n as f64 / total < (r + 1) as f64 && e * n as f64 / total > r as f64 && e > s;
            if overlaps {
                contributors[r].push(c.0);
                values[r] = Some(values[r].map_or(c.1, |v: f64| v.max(c.1)));
            }
        }
    }
    (values, contributors)
}

/// Smallest level whose cumulative area (over all cells at or below it)
/// reaches `q` of the total, by scanning every candidate level.
pub fn weighted_quantile(items: &[(f64, f64)], q: f64) -> f64 {
    let total: f64 = items.iter().map(|i| i.1).sum();
    let candidates: BTreeSet<u64> = items.iter().map(|i| ordered_bits(i.0)).collect();
    for bits in candidates {
        let v = from_ordered_bits(bits);
        let below: f64 = items.iter().filter(|i| i.0 <= v).map(|i| i.1).sum();
        if below >= q * total {
            return v;
        }
    }
    items.iter().map(|i| i.0).fold(f64::NEG_INFINITY, f64::max)
}

fn ordered_bits(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

fn from_ordered_bits(b: u64) -> f64 {
    if b >> 63 == 1 {
        f64::from_bits(b & !(1 << 63))
    } else {
        f64::from_bits(!b)
    }
}

/// Edge adjacency via a map from unordered vertex pairs to cells.
pub fn edge_adjacency(cells: &[Vec<usize>]) -> Vec<BTreeSet<usize>> {
    let mut edges: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (c, verts) in cells.iter().enumerate() {
        for i in 0..verts.len() {
            let (a, b) = (verts[i], verts[(i + 1) % verts.len()]);
            edges.entry((a.min(b), a.max(b))).or_default().push(c);
        }
    }
    let mut adj = vec![BTreeSet::new(); cells.len()];
    for owners in edges.values() {
        for &x in owners {
            for &y in owners {
                if x != y {
                    adj[x].insert(y);
                }
            }
        }
    }
    adj
}

/// Edge adjacency by comparing every pair of cells.
pub fn brute_force_adjacency(cells: &[Vec<usize>]) -> Vec<BTreeSet<usize>> {
    let edge_set = |v: &Vec<usize>| -> BTreeSet<(usize, usize)> {
        (0..v.len()).map(|i| (v[i].min(v[(i + 1) % v.len()]), v[i].max(v[(i + 1) % v.len()]))).collect()
    };
    let sets: Vec<_> = cells.iter().map(edge_set).collect();
    let mut adj = vec![BTreeSet::new(); cells.len()];
    for a in 0..cells.len() {
        for b in 0..cells.len() {
            if a != b && !sets[a].is_disjoint(&sets[b]) {
                adj[a].insert(b);
            }
        }
    }
    adj
}

/// `steps` rounds of "add every neighbour passing `ok`", each round
/// rescanning the whole current set.
pub fn flood_fill(
    adj: &[BTreeSet<usize>],
    start: &BTreeSet<usize>,
    steps: usize,
    ok: impl Fn(usize) -> bool,
) -> BTreeSet<usize> {
    let mut set = start.clone();
    for _ in 0..steps {
        let added: BTreeSet<usize> =
            set.iter().flat_map(|&c| adj[c].iter().copied()).filter(|&n| !set.contains(&n) && ok(n)).collect();
        if added.is_empty() {
            break;
        }
        set.extend(added);
    }
    set
}

/// Heron's formula from the three side lengths.
pub fn heron(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let d = |p: [f64; 3], q: [f64; 3]| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
    let (x, y, z) = (d(a, b), d(b, c), d(c, a));
    let s = (x + y + z) / 2.0;
    (s * (s - x) * (s - y) * (s - z)).max(0.0).sqrt()
}
