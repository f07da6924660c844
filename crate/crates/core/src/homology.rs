//! Finitely generated abelian groups from integer boundary matrices.

use std::fmt;

/// Dense integer matrix used for cellular boundary maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v as i128;
    }

    fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] -= k * row[src]
    fn row_op(&mut self, dst: usize, src: usize, k: i128) {
        for c in 0..self.cols {
            let v = self.get(dst, c) - k * self.get(src, c);
            self.set(dst, c, v);
        }
    }

    fn col_op(&mut self, dst: usize, src: usize, k: i128) {
        for r in 0..self.rows {
            let v = self.get(r, dst) - k * self.get(r, src);
            self.set(r, dst, v);
        }
    }

    /// Nonzero diagonal entries of the Smith normal form, as absolute values.
    pub fn smith_diagonal(&self) -> Vec<u64> {
        let mut m = self.clone();
        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.rows.min(m.cols) {
            // pivot: smallest nonzero entry in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for r in t..m.rows {
                for c in t..m.cols {
                    let v = m.get(r, c).abs();
                    if v != 0 && best.is_none_or(|(br, bc)| v < m.get(br, bc).abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else { break };
            m.swap_rows(t, pr);
            m.swap_cols(t, pc);
            loop {
                let p = m.get(t, t);
                let mut done = true;
                for r in t + 1..m.rows {
                    let q = m.get(r, t) / p;
                    if q != 0 {
                        m.row_op(r, t, q);
                    }
                    if m.get(r, t) != 0 {
                        done = false;
                    }
                }
                for c in t + 1..m.cols {
                    let q = m.get(t, c) / p;
                    if q != 0 {
                        m.col_op(c, t, q);
                    }
                    if m.get(t, c) != 0 {
                        done = false;
                    }
                }
                if done {
                    // divisibility of the rest of the block
                    let bad = (t + 1..m.rows)
                        .flat_map(|r| (t + 1..m.cols).map(move |c| (r, c)))
                        .find(|&(r, c)| m.get(r, c) % p != 0);
                    match bad {
                        None => break,
                        Some((r, _)) => {
                            m.row_op(t, r, -1);
                            continue;
                        }
                    }
                }
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t);
                for r in t..m.rows {
                    let v = m.get(r, t).abs();
                    if v != 0 && v < m.get(best.0, best.1).abs() {
                        best = (r, t);
                    }
                }
                for c in t..m.cols {
                    let v = m.get(t, c).abs();
                    if v != 0 && v < m.get(best.0, best.1).abs() {
                        best = (t, c);
                    }
                }
                m.swap_rows(t, best.0);
                m.swap_cols(t, best.1);
            }
            diag.push(m.get(t, t).unsigned_abs() as u64);
            t += 1;
        }
        diag
    }
}

/// `Z^rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk` with `t1 | t2 | ... | tk`, all `ti > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => AbelianGroup {
                rank: 1,
                torsion: Vec::new(),
            },
            1 => Self::trivial(),
            n => AbelianGroup {
                rank: 0,
                torsion: vec![n],
            },
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, or `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }

    /// `ker d1 / im d2` for a chain complex `C2 -> C1 -> C0`.
    pub fn homology(d1: &IntMatrix, d2: &IntMatrix) -> Self {
        assert_eq!(d1.cols(), d2.rows(), "boundary maps do not compose");
        let rank_d1 = d1.smith_diagonal().len();
        let diag2 = d2.smith_diagonal();
        let rank = d1.cols() - rank_d1 - diag2.len();
        let mut torsion: Vec<u64> = diag2.into_iter().filter(|&d| d > 1).collect();
        torsion.sort_unstable();
        AbelianGroup { rank, torsion }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
