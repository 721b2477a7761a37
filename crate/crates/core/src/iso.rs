//! Equivalence of arrays under row permutation, column permutation and
//! symbol renaming.
//!
//! Each array becomes a vertex-coloured graph: one vertex per row, column and
//! symbol, plus one vertex per non-star cell joined to its row, column and
//! symbol. Star cells are plain row-column edges. Two arrays are equivalent
//! exactly when these graphs are isomorphic, which is decided by joint colour
//! refinement with individualisation and backtracking.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::array::{Cell, PdaArray};

pub const DEFAULT_ISO_CELL_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("array of {cells} cells exceeds the isomorphism budget of {budget}")]
    TooLarge { cells: usize, budget: usize },
}

/// Equivalence test with the default cell budget.
pub fn is_isomorphic(a: &PdaArray, b: &PdaArray) -> Result<bool, IsoError> {
    is_isomorphic_within(a, b, DEFAULT_ISO_CELL_BUDGET)
}

pub fn is_isomorphic_within(a: &PdaArray, b: &PdaArray, budget: usize) -> Result<bool, IsoError> {
    for x in [a, b] {
        let cells = x.rows() * x.cols();
        if cells > budget {
            return Err(IsoError::TooLarge { cells, budget });
        }
    }
    if invariant(a) != invariant(b) {
        return Ok(false);
    }
    let ga = CellGraph::new(a);
    let gb = CellGraph::new(b);
    if ga.adj.len() != gb.adj.len() || ga.edges.len() != gb.edges.len() {
        return Ok(false);
    }
    Ok(search(&ga, &gb, ga.colors.clone(), gb.colors.clone()))
}

/// Cheap necessary condition: dimensions and the sorted profiles of stars
/// per row, stars per column and occurrences per symbol.
fn invariant(a: &PdaArray) -> (usize, usize, Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut rows: Vec<usize> = (0..a.rows())
        .map(|r| (0..a.cols()).filter(|&c| a.is_star(r, c)).count())
        .collect();
    let mut cols: Vec<usize> = (0..a.cols())
        .map(|c| (0..a.rows()).filter(|&r| a.is_star(r, c)).count())
        .collect();
    let mut occ: BTreeMap<u32, usize> = BTreeMap::new();
    for cell in a.grid().cells() {
        if let Cell::Symbol(s) = cell {
            *occ.entry(*s).or_default() += 1;
        }
    }
    let mut occ: Vec<usize> = occ.into_values().collect();
    rows.sort_unstable();
    cols.sort_unstable();
    occ.sort_unstable();
    (a.rows(), a.cols(), rows, cols, occ)
}

struct CellGraph {
    adj: Vec<Vec<usize>>,
    edges: HashSet<(usize, usize)>,
    colors: Vec<u32>,
}

impl CellGraph {
    fn new(a: &PdaArray) -> Self {
        let (f, k) = (a.rows(), a.cols());
        let mut symbol_vertex: BTreeMap<u32, usize> = BTreeMap::new();
        for cell in a.grid().cells() {
            if let Cell::Symbol(s) = cell {
                let next = f + k + symbol_vertex.len();
                symbol_vertex.entry(*s).or_insert(next);
            }
        }
        let mut colors = vec![0u32; f];
        colors.extend(std::iter::repeat_n(1, k));
        colors.extend(std::iter::repeat_n(2, symbol_vertex.len()));
        let mut adj = vec![Vec::new(); colors.len()];
        let mut edges = HashSet::new();
        let mut link = |adj: &mut Vec<Vec<usize>>, u: usize, v: usize| {
            adj[u].push(v);
            adj[v].push(u);
            edges.insert((u.min(v), u.max(v)));
        };
        for r in 0..f {
            for c in 0..k {
                match a.cell(r, c) {
                    Cell::Star => link(&mut adj, r, f + c),
                    Cell::Symbol(s) => {
                        let v = adj.len();
                        adj.push(Vec::new());
                        colors.push(3);
                        link(&mut adj, v, r);
                        link(&mut adj, v, f + c);
                        link(&mut adj, v, symbol_vertex[&s]);
                    }
                }
            }
        }
        Self { adj, edges, colors }
    }
}

/// Refines both colourings with a shared naming of signatures until the
/// joint partition stops splitting. Returns false if the colour histograms
/// of the two graphs diverge.
fn refine(ga: &CellGraph, gb: &CellGraph, ca: &mut Vec<u32>, cb: &mut Vec<u32>) -> bool {
    let mut classes = count_classes(ca, cb);
    loop {
        let sa = signatures(ga, ca);
        let sb = signatures(gb, cb);
        let mut names: BTreeMap<&(u32, Vec<u32>), u32> = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            names.insert(s, 0);
        }
        for (i, v) in names.values_mut().enumerate() {
            *v = i as u32;
        }
        *ca = sa.iter().map(|s| names[s]).collect();
        *cb = sb.iter().map(|s| names[s]).collect();
        if histogram(ca) != histogram(cb) {
            return false;
        }
        let next = names.len();
        if next == classes {
            return true;
        }
        classes = next;
    }
}

fn signatures(g: &CellGraph, colors: &[u32]) -> Vec<(u32, Vec<u32>)> {
    g.adj
        .iter()
        .enumerate()
        .map(|(v, nbrs)| {
            let mut n: Vec<u32> = nbrs.iter().map(|&u| colors[u]).collect();
            n.sort_unstable();
            (colors[v], n)
        })
        .collect()
}

fn count_classes(ca: &[u32], cb: &[u32]) -> usize {
    ca.iter().chain(cb).collect::<HashSet<_>>().len()
}

fn histogram(c: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &x in c {
        *h.entry(x).or_default() += 1;
    }
    h
}

fn search(ga: &CellGraph, gb: &CellGraph, mut ca: Vec<u32>, mut cb: Vec<u32>) -> bool {
    if !refine(ga, gb, &mut ca, &mut cb) {
        return false;
    }
    let hist = histogram(&ca);
    let Some((&target, _)) = hist.iter().find(|(_, &n)| n > 1) else {
        return discrete_match(ga, gb, &ca, &cb);
    };
    let fresh = hist.keys().next_back().map_or(0, |m| m + 1);
    let v = ca.iter().position(|&c| c == target).expect("class member");
    for w in (0..cb.len()).filter(|&w| cb[w] == target) {
        let mut na = ca.clone();
        let mut nb = cb.clone();
        na[v] = fresh;
        nb[w] = fresh;
        if search(ga, gb, na, nb) {
            return true;
        }
    }
    false
}

fn discrete_match(ga: &CellGraph, gb: &CellGraph, ca: &[u32], cb: &[u32]) -> bool {
    let mut by_color = vec![0usize; cb.len()];
    for (w, &c) in cb.iter().enumerate() {
        by_color[c as usize] = w;
    }
    let map: Vec<usize> = ca.iter().map(|&c| by_color[c as usize]).collect();
    ga.edges.iter().all(|&(u, v)| {
        let (x, y) = (map[u], map[v]);
        gb.edges.contains(&(x.min(y), x.max(y)))
    })
}
