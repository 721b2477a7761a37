//! Grids of cells and the placement delivery array container.
//!
//! Row and column indices are 0-based throughout the API. Symbol ids are
//! the positive integers stored in non-star cells.

use std::collections::BTreeMap;
use std::fmt;

/// One entry of a placement delivery array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Star,
    Symbol(u32),
}

impl Cell {
    pub fn is_star(self) -> bool {
        matches!(self, Cell::Star)
    }

    pub fn symbol(self) -> Option<u32> {
        match self {
            Cell::Star => None,
            Cell::Symbol(s) => Some(s),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Star => f.write_str("*"),
            Cell::Symbol(s) => write!(f, "{s}"),
        }
    }
}

/// Dense row-major grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    cells: Vec<T>,
}

impl<T> Grid<T> {
    /// Panics if `cells.len() != rows * cols`.
    pub fn new(rows: usize, cols: usize, cells: Vec<T>) -> Self {
        assert_eq!(
            cells.len(),
            rows * cols,
            "grid of {rows}x{cols} needs {} cells",
            rows * cols
        );
        Self { rows, cols, cells }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut cells = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                cells.push(f(r, c));
            }
        }
        Self { rows, cols, cells }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.cells[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<T> {
        self.cells
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            rows: self.rows,
            cols: self.cols,
            cells: self.cells.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Grid<T> {
    pub fn transpose(&self) -> Self {
        Grid::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Reorders rows so that row `i` of the result is row `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.rows);
        Grid::from_fn(self.rows, self.cols, |r, c| self.get(order[r], c).clone())
    }
}

/// Original key of a densified symbol: a single integer or a symbol vector.
pub type SymbolLabel = Vec<u32>;

/// An `F x K` array over `{*} ∪ ids`, with optional per-symbol labels.
///
/// `labels[s - 1]` is the original key of symbol `s` when the array was
/// produced by densifying integer or vector keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdaArray {
    grid: Grid<Cell>,
    labels: Option<Vec<SymbolLabel>>,
}

impl PdaArray {
    pub fn new(grid: Grid<Cell>) -> Self {
        Self { grid, labels: None }
    }

    /// Builds an array from rows of cells. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Cell>>) -> Self {
        let f = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == k), "ragged rows");
        Self::new(Grid::new(f, k, rows.into_iter().flatten().collect()))
    }

    pub fn with_labels(mut self, labels: Vec<SymbolLabel>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn rows(&self) -> usize {
        self.grid.rows()
    }

    pub fn cols(&self) -> usize {
        self.grid.cols()
    }

    pub fn cell(&self, row: usize, col: usize) -> Cell {
        *self.grid.get(row, col)
    }

    pub fn is_star(&self, row: usize, col: usize) -> bool {
        self.cell(row, col).is_star()
    }

    pub fn grid(&self) -> &Grid<Cell> {
        &self.grid
    }

    pub fn labels(&self) -> Option<&[SymbolLabel]> {
        self.labels.as_deref()
    }

    pub fn label(&self, symbol: u32) -> Option<&SymbolLabel> {
        self.labels.as_ref()?.get(symbol.checked_sub(1)? as usize)
    }

    pub fn max_symbol(&self) -> u32 {
        self.grid
            .cells()
            .iter()
            .filter_map(|c| c.symbol())
            .max()
            .unwrap_or(0)
    }

    /// Transposed grid. Labels carry over since symbols are untouched.
    pub fn transpose(&self) -> Self {
        Self {
            grid: self.grid.transpose(),
            labels: self.labels.clone(),
        }
    }

    pub fn permute_rows(&self, order: &[usize]) -> Self {
        Self {
            grid: self.grid.permute_rows(order),
            labels: self.labels.clone(),
        }
    }
}

impl fmt::Display for PdaArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows() {
            let line: Vec<String> = self.grid.row(r).iter().map(Cell::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Replaces arbitrary symbol keys by the dense range `1..=S`, assigned in
/// ascending key order. `None` cells are stars.
pub fn densify<K: Ord + Clone>(
    grid: &Grid<Option<K>>,
    label: impl Fn(&K) -> SymbolLabel,
) -> PdaArray {
    let mut ids: BTreeMap<K, u32> = grid.cells().iter().flatten().map(|k| (k.clone(), 0)).collect();
    let mut labels = Vec::with_capacity(ids.len());
    for (i, (key, id)) in ids.iter_mut().enumerate() {
        *id = i as u32 + 1;
        labels.push(label(key));
    }
    let cells = grid.map(|c| match c {
        None => Cell::Star,
        Some(k) => Cell::Symbol(ids[k]),
    });
    PdaArray::new(cells).with_labels(labels)
}

/// Order-preserving densification of integer symbol ids.
///
/// Already-dense arrays come back unchanged. Otherwise the original id (or
/// the label it carried) is recorded as the new symbol's label.
pub fn relabel_symbols(array: &PdaArray) -> PdaArray {
    let mut present: Vec<u32> = array.grid.cells().iter().filter_map(|c| c.symbol()).collect();
    present.sort_unstable();
    present.dedup();
    let dense = present.iter().enumerate().all(|(i, &s)| s == i as u32 + 1);
    if dense {
        return array.clone();
    }
    let keyed = array.grid.map(|c| c.symbol());
    densify(&keyed, |&old| {
        array.label(old).cloned().unwrap_or_else(|| vec![old])
    })
}
