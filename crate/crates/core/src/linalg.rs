//! Exact sparse row reduction over the rationals.
//!
//! The constraint systems produced by the classifiers are very sparse (most
//! rows coming from translations and the dilation have a single entry), so
//! rows are kept as ordered maps and inserted shortest first to limit fill-in.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::poly::{Monomial, SymbolPoly};
use crate::rational::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

/// Reduced row echelon form, keyed by pivot column. Every stored row has a
/// unit pivot and zeros in all other pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    columns: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Rref {
    pub fn new<I: IntoIterator<Item = SparseRow>>(columns: usize, rows: I) -> Self {
        let mut rows: Vec<SparseRow> = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|&c, v| {
                    assert!(c < columns, "column {c} out of range {columns}");
                    !v.is_zero()
                });
                r
            })
            .filter(|r| !r.is_empty())
            .collect();
        rows.sort_by_key(BTreeMap::len);

        let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for row in rows {
            if let Some((lead, reduced)) = reduce(row, &pivots) {
                pivots.insert(lead, reduced);
            }
        }

        // Back substitution, highest pivot first, so each row only needs the
        // already-cleaned rows above it.
        let keys: Vec<usize> = pivots.keys().rev().copied().collect();
        for (pos, &c) in keys.iter().enumerate() {
            let mut row = pivots.remove(&c).unwrap();
            for &d in keys[..pos].iter().rev() {
                if let Some(factor) = row.get(&d).cloned() {
                    axpy(&mut row, &-factor, &pivots[&d]);
                }
            }
            pivots.insert(c, row);
        }
        Rref { columns, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.columns).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// One basis vector per free column, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        self.free_columns()
            .into_iter()
            .map(|free| {
                let mut v = vec![Rational::zero(); self.columns];
                v[free] = Rational::one();
                for (&c, row) in &self.pivots {
                    if let Some(a) = row.get(&free) {
                        v[c] = -a;
                    }
                }
                v
            })
            .collect()
    }
}

fn axpy(row: &mut SparseRow, factor: &Rational, other: &SparseRow) {
    for (&j, v) in other {
        let entry = row.entry(j).or_insert_with(Rational::zero);
        *entry += factor * v;
        if entry.is_zero() {
            row.remove(&j);
        }
    }
}

fn reduce(mut row: SparseRow, pivots: &BTreeMap<usize, SparseRow>) -> Option<(usize, SparseRow)> {
    let mut cursor = 0;
    loop {
        let (&c, _) = row.range(cursor..).next()?;
        match pivots.get(&c) {
            Some(p) => {
                let factor = -row[&c].clone();
                axpy(&mut row, &factor, p);
                cursor = c + 1;
            }
            None => {
                let inv = Rational::one() / &row[&c];
                for v in row.values_mut() {
                    *v *= &inv;
                }
                return Some((c, row));
            }
        }
    }
}

/// Nullspace of the matrix given by sparse rows over `columns` unknowns.
pub fn nullspace<I: IntoIterator<Item = SparseRow>>(columns: usize, rows: I) -> Vec<Vec<Rational>> {
    Rref::new(columns, rows).nullspace()
}

/// Solves `A y = b` for rows `(A_i, b_i)`; the solution with all free
/// unknowns set to zero, or `None` if the system is inconsistent.
pub fn solve<I>(columns: usize, rows: I) -> Option<Vec<Rational>>
where
    I: IntoIterator<Item = (SparseRow, Rational)>,
{
    let augmented = rows.into_iter().map(|(mut a, b)| {
        if !b.is_zero() {
            a.insert(columns, b);
        }
        a
    });
    let rref = Rref::new(columns + 1, augmented);
    if rref.pivots.contains_key(&columns) {
        return None;
    }
    let mut y = vec![Rational::zero(); columns];
    for (&c, row) in &rref.pivots {
        if let Some(b) = row.get(&columns) {
            y[c] = b.clone();
        }
    }
    Some(y)
}

/// Turns "unknown `j` maps to the residual polynomials `images[j]`" into
/// coefficient-matching rows: one row per (residual slot, monomial).
pub fn rows_from_images(images: &[Vec<SymbolPoly>]) -> Vec<SparseRow> {
    let mut rows: HashMap<(usize, Monomial), SparseRow> = HashMap::new();
    for (j, residuals) in images.iter().enumerate() {
        for (slot, poly) in residuals.iter().enumerate() {
            for (m, c) in poly.terms() {
                rows.entry((slot, m.clone())).or_default().insert(j, c.clone());
            }
        }
    }
    rows.into_values().collect()
}
