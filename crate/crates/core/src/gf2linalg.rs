//! Dense bit matrices over GF(2) with word-packed rows.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::netmodel::Cut;
use crate::reduction::LinearDeterministicNetwork;

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD_BITS);
        Self {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) out of range");
        self.bits[r * self.words_per_row + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) out of range");
        let word = &mut self.bits[r * self.words_per_row + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words_per_row {
            self.bits
                .swap(a * self.words_per_row + w, b * self.words_per_row + w);
        }
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let wpr = self.words_per_row;
        for w in 0..wpr {
            let s = self.bits[src * wpr + w];
            self.bits[dst * wpr + w] ^= s;
        }
    }

    /// Copies `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &BitMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                if block.get(r, c) {
                    self.set(r0 + r, c0 + c, true);
                }
            }
        }
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let wpr = out.words_per_row;
                    for w in 0..wpr {
                        out.bits[r * wpr + w] ^= other.bits[k * wpr + w];
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for BitMatrix {
    /// One line of '0'/'1' characters per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines = s
            .lines()
            .map(|l| l.split_whitespace().collect::<String>())
            .filter(|l| !l.is_empty())
            .collect::<Vec<_>>();
        let cols = lines.first().map_or(0, |l| l.len());
        let mut m = BitMatrix::zeros(lines.len(), cols);
        for (r, line) in lines.iter().enumerate() {
            if line.len() != cols {
                return Err(Error::Argument(format!("row {r} has {} columns, expected {cols}", line.len())));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    other => return Err(Error::Argument(format!("unexpected character {other:?}"))),
                }
            }
        }
        Ok(m)
    }
}

/// `q x q` link matrix passing the `levels` most significant input bits.
///
/// Input bit `k` (1-indexed from the most significant end) lands at output
/// position `k + q - levels`, so `S[r][c] = 1` iff `c = r - (q - levels)`.
pub fn shift_matrix(levels: usize, q: usize) -> Result<BitMatrix> {
    if levels > q {
        return Err(Error::Argument(format!("levels {levels} exceeds vector length {q}")));
    }
    let shift = q - levels;
    let mut m = BitMatrix::zeros(q, q);
    for r in shift..q {
        m.set(r, r - shift, true);
    }
    Ok(m)
}

/// Rank over GF(2) by Gaussian elimination on packed rows.
pub fn rank_gf2(m: &BitMatrix) -> usize {
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..a.cols {
        if rank == a.rows {
            break;
        }
        let (w, bit) = (col / WORD_BITS, 1u64 << (col % WORD_BITS));
        let Some(pivot) = (rank..a.rows).find(|&r| a.row(r)[w] & bit != 0) else {
            continue;
        };
        a.swap_rows(pivot, rank);
        for r in rank + 1..a.rows {
            if a.row(r)[w] & bit != 0 {
                a.add_row(rank, r);
            }
        }
        rank += 1;
    }
    rank
}

/// Block matrix of shift matrices, block `(r, c)` mapping sender `omega[c]`
/// to receiver `omega_c[r]`.
pub fn cut_transfer_matrix_ld(ldnet: &LinearDeterministicNetwork, cut: &Cut) -> BitMatrix {
    let q = ldnet.q;
    let mut g = BitMatrix::zeros(q * cut.omega_c.len(), q * cut.omega.len());
    for (r, &rx) in cut.omega_c.iter().enumerate() {
        for (c, &tx) in cut.omega.iter().enumerate() {
            if let Some(levels) = ldnet.levels(tx, rx) {
                let block = shift_matrix(levels, q).expect("levels never exceed q");
                g.set_block(r * q, c * q, &block);
            }
        }
    }
    g
}
