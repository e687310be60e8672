//! The lexicon: lexemes as rows, paradigm cells as columns.

use std::fmt;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Index of an exponent in the alphabet `[0, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentId(pub u8);

impl ExponentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ExponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Largest supported exponent alphabet.
pub const MAX_EXPONENTS: usize = 256;

/// Row-major `rows x cols` matrix of exponent indices below `exponents`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lexicon {
    rows: usize,
    cols: usize,
    exponents: usize,
    data: Vec<u8>,
}

fn check_dims(rows: usize, cols: usize, exponents: usize) -> Result<()> {
    if rows < 2 {
        return Err(Error::DimensionTooSmall(format!("need at least 2 lexemes, got {rows}")));
    }
    if cols < 2 {
        return Err(Error::DimensionTooSmall(format!("need at least 2 cells, got {cols}")));
    }
    if exponents < 1 {
        return Err(Error::DimensionTooSmall("need at least 1 exponent".into()));
    }
    if exponents > MAX_EXPONENTS {
        return Err(Error::InvalidConfig(format!(
            "at most {MAX_EXPONENTS} exponents are supported, got {exponents}"
        )));
    }
    Ok(())
}

impl Lexicon {
    /// Fills every entry independently and uniformly, row by row; consumes
    /// exactly `rows * cols` draws.
    pub fn random(rows: usize, cols: usize, exponents: usize, rng: &mut RandomSource) -> Result<Self> {
        check_dims(rows, cols, exponents)?;
        let data = (0..rows * cols).map(|_| rng.below(exponents) as u8).collect();
        Ok(Self { rows, cols, exponents, data })
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R], exponents: usize) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        check_dims(n_rows, n_cols, exponents)?;
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (l, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::InvalidConfig(format!(
                    "row {l} has {} cells, expected {n_cols}",
                    row.len()
                )));
            }
            for &v in row {
                if v as usize >= exponents {
                    return Err(Error::ExponentOutOfRange { value: v as usize, alphabet: exponents });
                }
            }
            data.extend_from_slice(row);
        }
        Ok(Self { rows: n_rows, cols: n_cols, exponents, data })
    }

    /// Builds a lexicon from columns rather than rows.
    pub fn from_columns<R: AsRef<[u8]>>(columns: &[R], exponents: usize) -> Result<Self> {
        let n_rows = columns.first().map_or(0, |c| c.as_ref().len());
        let rows: Vec<Vec<u8>> = (0..n_rows)
            .map(|l| columns.iter().map(|c| c.as_ref().get(l).copied().unwrap_or(u8::MAX)).collect())
            .collect();
        if columns.iter().any(|c| c.as_ref().len() != n_rows) {
            return Err(Error::InvalidConfig("columns have unequal lengths".into()));
        }
        Self::from_rows(&rows, exponents)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn exponents(&self) -> usize {
        self.exponents
    }

    #[inline]
    pub fn get(&self, lexeme: usize, cell: usize) -> ExponentId {
        ExponentId(self.data[lexeme * self.cols + cell])
    }

    #[inline]
    pub(crate) fn raw(&self, lexeme: usize, cell: usize) -> u8 {
        self.data[lexeme * self.cols + cell]
    }

    /// Overwrites one entry. Panics if the exponent is outside the alphabet.
    pub fn set(&mut self, lexeme: usize, cell: usize, value: ExponentId) {
        assert!(value.index() < self.exponents, "exponent {value} out of range");
        self.data[lexeme * self.cols + cell] = value.0;
    }

    pub fn row(&self, lexeme: usize) -> &[u8] {
        &self.data[lexeme * self.cols..(lexeme + 1) * self.cols]
    }

    pub fn column(&self, cell: usize) -> Vec<u8> {
        (0..self.rows).map(|l| self.raw(l, cell)).collect()
    }

    pub(crate) fn set_column(&mut self, cell: usize, values: &[u8]) {
        for (l, &v) in values.iter().enumerate() {
            self.data[l * self.cols + cell] = v;
        }
    }

    /// Count of each exponent in one column.
    pub fn column_histogram(&self, cell: usize) -> Vec<usize> {
        let mut hist = vec![0; self.exponents];
        for l in 0..self.rows {
            hist[self.raw(l, cell) as usize] += 1;
        }
        hist
    }

    /// Number of entries that differ from `other` (same shape required).
    pub fn hamming(&self, other: &Lexicon) -> usize {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).filter(|(a, b)| a != b).count()
    }

    /// True iff every row equals the first.
    pub fn is_uniform(&self) -> bool {
        let first = self.row(0);
        self.data.chunks_exact(self.cols).all(|row| row == first)
    }
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.data.chunks_exact(self.cols) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Random initial lexicon; see [`Lexicon::random`].
pub fn init_lexicon(rows: usize, cols: usize, exponents: usize, rng: &mut RandomSource) -> Result<Lexicon> {
    Lexicon::random(rows, cols, exponents, rng)
}
